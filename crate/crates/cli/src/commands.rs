//! One function per subcommand; each validates its keys before computing.

use rayon::prelude::*;
use vc_twist_core::amplitudes::{ultrarel_g1_g2, AmplitudeTable, Branch};
use vc_twist_core::angular::AngularGeometry;
use vc_twist_core::epa::EpaKinematics;
use vc_twist_core::evolved::{
    evolved_pw_table, evolved_tw_table, merge_branches, sample_wavefunction, EvolvedCoefficient, ModeTruncation,
    SpaceTimePoint,
};
use vc_twist_core::kinematics::{cherenkov_cos_angle, momentum, overlap_interval, MediumModel, ELECTRON_MASS_EV};
use vc_twist_core::numerics::HalfInt;
use vc_twist_core::observables::{epa_mean_helicity, pl_curve, pl_map, pl_planewave};
use vc_twist_core::oracles::run_oracle_suite;
use vc_twist_core::VcError;

use crate::config::{ConfigError, RunConfig};
use crate::table::{Cell, Table};

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Physics(VcError),
    /// Oracle tolerances not met.
    Oracle(String),
    Io(std::io::Error),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<VcError> for RunError {
    fn from(e: VcError) -> Self {
        RunError::Physics(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Physics(e) => write!(f, "{e}"),
            RunError::Oracle(s) => write!(f, "oracle tolerances not met: {s}"),
            RunError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl RunError {
    /// 2 for numerical failures, 1 for everything the user can fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Physics(VcError::NonConvergence(_)) | RunError::Oracle(_) => 2,
            _ => 1,
        }
    }
}

type Run<T> = Result<T, RunError>;

fn deg(cfg: &RunConfig, name: &str) -> Result<f64, ConfigError> {
    Ok(cfg.f64(name)?.to_radians())
}

fn medium(cfg: &RunConfig) -> Run<MediumModel> {
    if cfg.is_set("medium-table") {
        Ok(MediumModel::load_table(std::path::Path::new(cfg.raw("medium-table")))?)
    } else {
        Ok(MediumModel::constant(cfg.positive("n")?)?)
    }
}

fn energy(cfg: &RunConfig) -> Result<f64, ConfigError> {
    Ok(cfg.positive("kinetic-keV")? * 1e3 + ELECTRON_MASS_EV)
}

fn omegas(cfg: &RunConfig) -> Result<Vec<f64>, ConfigError> {
    let w = cfg.f64_list("omega-eV")?;
    if let Some(bad) = w.iter().find(|&&x| x <= 0.0) {
        return Err(ConfigError(format!("omega-eV must be positive, got {bad}")));
    }
    Ok(w)
}

fn truncation(cfg: &RunConfig, omega: Vec<f64>, theta_points: usize) -> Run<ModeTruncation> {
    Ok(ModeTruncation::new(cfg.i32("max-m")?, omega, theta_points)?)
}

/// Final-electron polar angle for an initial electron along `z`.
fn final_theta(e: f64, omega: f64, medium: &MediumModel) -> Run<(f64, f64)> {
    let c0 = cherenkov_cos_angle(e, omega, medium)?;
    let k = omega * medium.n(omega)?;
    let s0 = (1.0 - c0 * c0).sqrt();
    Ok(((k * s0).atan2(momentum(e, ELECTRON_MASS_EV)? - k * c0), c0.acos()))
}

pub fn cone(cfg: &RunConfig) -> Run<Table> {
    let (e, m, ws) = (energy(cfg)?, medium(cfg)?, omegas(cfg)?);
    let mut t = Table::new(&["omega_eV", "n", "cos_theta0", "theta0_deg", "theta_prime_deg"]);
    for w in ws {
        let c0 = cherenkov_cos_angle(e, w, &m)?;
        let (tp, t0) = final_theta(e, w, &m)?;
        t.push(vec![w.into(), m.n(w)?.into(), c0.into(), t0.to_degrees().into(), tp.to_degrees().into()]);
    }
    Ok(t)
}

pub fn amplitude(cfg: &RunConfig) -> Run<Table> {
    let (e, m, ws) = (energy(cfg)?, medium(cfg)?, omegas(cfg)?);
    let [w] = ws[..] else {
        return Err(ConfigError("omega-eV: amplitude takes a single photon energy".into()).into());
    };
    let lambda = cfg.half_int("lambda")?;
    let theta = deg(cfg, "theta-deg")?;
    let mut t = Table::new(&["lambda_prime2", "lambda_gamma", "m_gamma", "re", "im"]);
    let table = if theta == 0.0 {
        let (tp, t0) = final_theta(e, w, &m)?;
        let tg = if cfg.is_set("theta-g-deg") { deg(cfg, "theta-g-deg")? } else { t0 };
        let phi_g = deg(cfg, "phi-g-deg")?;
        let phi_p = Branch::for_photon_azimuth(phi_g).final_azimuth(phi_g);
        AmplitudeTable::planewave(lambda, e, w, tp, tg, phi_p, phi_g)?
    } else {
        let t0 = cherenkov_cos_angle(e, w, &m)?.acos();
        let tg =
            if cfg.is_set("theta-g-deg") { deg(cfg, "theta-g-deg")? } else { overlap_interval(theta, t0)?.midpoint() };
        let g = AngularGeometry::vc(e, w, &m, theta, tg)?;
        AmplitudeTable::twisted(lambda, cfg.half_int("m")?, e, w, &g, cfg.i32("max-m")?)?
    };
    for (k, v) in table.entries {
        t.push(vec![k.lambda_p.twice().into(), k.lambda_g.into(), k.m_g.into(), v.re.into(), v.im.into()]);
    }
    Ok(t)
}

fn coefficient_table(rows: &[EvolvedCoefficient]) -> Table {
    let mut t = Table::new(&[
        "omega_eV",
        "theta_g_deg",
        "m_prime2",
        "lambda_prime2",
        "m_gamma",
        "lambda_gamma",
        "re_weight",
        "im_weight",
        "measure",
        "branch",
    ]);
    for c in rows {
        t.push(vec![
            c.omega.into(),
            c.theta_g.map(f64::to_degrees).into(),
            c.m_prime.twice().into(),
            c.lambda_prime.twice().into(),
            c.m_gamma.into(),
            c.lambda_gamma.into(),
            c.weight.re.into(),
            c.weight.im.into(),
            c.measure.into(),
            c.branch.map_or(Cell::Empty, |b| b.as_str().into()),
        ]);
    }
    t
}

pub fn evolved_pw(cfg: &RunConfig) -> Run<Table> {
    let (e, m, ws) = (energy(cfg)?, medium(cfg)?, omegas(cfg)?);
    let lambda = cfg.half_int("lambda")?;
    let merge = cfg.bool("merge")?;
    let tr = truncation(cfg, ws, 1)?;
    let rows = evolved_pw_table(e, lambda, &m, &tr)?;
    Ok(coefficient_table(&if merge { merge_branches(&rows) } else { rows }))
}

pub fn evolved_tw(cfg: &RunConfig) -> Run<Table> {
    let (e, m, ws) = (energy(cfg)?, medium(cfg)?, omegas(cfg)?);
    let (lambda, tam, theta) = (cfg.half_int("lambda")?, cfg.half_int("m")?, deg(cfg, "theta-deg")?);
    let tr = truncation(cfg, ws, cfg.count("theta-g-points", 1)?)?;
    Ok(coefficient_table(&evolved_tw_table(e, lambda, tam, theta, &m, &tr)?))
}

pub fn polarization_curve(cfg: &RunConfig) -> Run<Table> {
    let (t0, theta) = (deg(cfg, "theta0-deg")?, deg(cfg, "theta-deg")?);
    let points = pl_curve(theta, t0, cfg.i32("m-gamma")?, cfg.count("points", 2)?)?;
    let mut t = Table::new(&["theta_g_deg", "P_l"]);
    for p in points {
        t.push(vec![p.theta_g.to_degrees().into(), p.p_l.into()]);
    }
    Ok(t)
}

fn axis(lo_deg: f64, hi_deg: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (lo_deg + (hi_deg - lo_deg) * i as f64 / (n - 1) as f64).to_radians()).collect()
}

fn map_table(t0: f64, m_g: i32, ta: &[f64], ga: &[f64]) -> Run<Table> {
    let grid = pl_map(t0, m_g, ta, ga)?;
    let mut t = Table::new(&["theta_deg", "theta_g_deg", "P_l"]);
    for (i, th) in grid.theta.iter().enumerate() {
        for (j, tg) in grid.theta_g.iter().enumerate() {
            t.push(vec![th.to_degrees().into(), tg.to_degrees().into(), grid.values[i][j].into()]);
        }
    }
    Ok(t)
}

pub fn polarization_map(cfg: &RunConfig) -> Run<Table> {
    let ta = axis(cfg.f64("theta-min-deg")?, cfg.f64("theta-max-deg")?, cfg.count("theta-points", 2)?);
    let ga = axis(cfg.f64("theta-g-min-deg")?, cfg.f64("theta-g-max-deg")?, cfg.count("theta-g-points", 2)?);
    map_table(deg(cfg, "theta0-deg")?, cfg.i32("m-gamma")?, &ta, &ga)
}

pub fn epa(cfg: &RunConfig) -> Run<Table> {
    let e = cfg.positive("gamma")? * ELECTRON_MASS_EV;
    let lambda = cfg.half_int("lambda")?;
    let t0 = deg(cfg, "theta0-deg")?;
    let (lo, hi, n) = (cfg.positive("x-min")?, cfg.positive("x-max")?, cfg.count("x-points", 1)?);
    if !(lo <= hi && hi < 1.0) {
        return Err(ConfigError(format!("need x-min <= x-max < 1, got {lo} and {hi}")).into());
    }
    let xs: Vec<f64> = (0..n).map(|i| if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect();
    let rows: Vec<Vec<Cell>> = xs
        .par_iter()
        .map(|&x| {
            let kin = EpaKinematics::new(e, x * e, t0)?;
            let (g1, g2) = ultrarel_g1_g2(lambda, kin.theta_p(), t0);
            Ok(vec![
                x.into(),
                (x * e).into(),
                kin.theta_p().to_degrees().into(),
                pl_planewave(g1, g2)?.into(),
                (1.0 - 0.5 * x * x).into(),
                epa_mean_helicity(g1, g2)?.into(),
                (2.0 * lambda.value() * x).into(),
            ])
        })
        .collect::<Result<_, VcError>>()?;
    let mut t = Table::new(&[
        "x",
        "omega_eV",
        "theta_prime_deg",
        "P_l",
        "P_l_leading",
        "mean_helicity",
        "mean_helicity_leading",
    ]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

/// Runs the suites and returns the table together with the failed check names.
pub fn oracle_check() -> Run<(Table, Vec<String>)> {
    let mut t = Table::new(&["check", "max_error", "tolerance", "passed"]);
    let mut failed = Vec::new();
    for c in run_oracle_suite()? {
        if !c.passed() {
            failed.push(c.name.clone());
        }
        t.push(vec![c.name.as_str().into(), c.max_error.into(), c.tolerance.into(), c.passed().into()]);
    }
    Ok((t, failed))
}

fn point(cfg: &RunConfig, name: &str) -> Run<SpaceTimePoint> {
    let v = cfg.f64_list(name)?;
    let [t, r, phi, z] = v[..] else {
        return Err(ConfigError(format!("{name}: expected t,r_perp,phi_deg,z")).into());
    };
    Ok(SpaceTimePoint::new(t, r, phi.to_radians(), z)?)
}

pub fn sample_wf(cfg: &RunConfig) -> Run<Table> {
    let (e, m, ws) = (energy(cfg)?, medium(cfg)?, omegas(cfg)?);
    let (lambda, theta) = (cfg.half_int("lambda")?, deg(cfg, "theta-deg")?);
    let tam: HalfInt = cfg.half_int("m")?;
    let (xe, xg) = (point(cfg, "electron-point")?, point(cfg, "photon-point")?);
    let tr = truncation(cfg, ws, cfg.count("theta-g-points", 1)?)?;
    let coef = if theta == 0.0 {
        evolved_pw_table(e, lambda, &m, &tr)?
    } else {
        evolved_tw_table(e, lambda, tam, theta, &m, &tr)?
    };
    let s = sample_wavefunction(&coef, &xe, &xg, &tr)?;
    if s.truncation_warning {
        eprintln!("warning: truncation tail bound {:.3e} is not small; raise max-m", s.tail_bound);
    }
    let mut t = Table::new(&["spinor_index", "polarization_index", "re", "im"]);
    for (r, row) in s.value.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            t.push(vec![Cell::Int(r as i64), Cell::Int(c as i64), v.re.into(), v.im.into()]);
        }
    }
    t.notes = vec![("tail_bound", s.tail_bound.into()), ("truncation_warning", s.truncation_warning.into())];
    Ok(t)
}

/// File stem and table for every curve or map of the chosen figure.
pub fn figure(cfg: &RunConfig) -> Run<Vec<(String, Table)>> {
    let t0 = deg(cfg, "theta0-deg")?;
    match cfg.raw("which") {
        "fig3" => {
            let mgs = if cfg.is_set("m-gamma-list") { cfg.i32_list("m-gamma-list")? } else { vec![1, 2, 3] };
            let n = cfg.count("points", 2)?;
            cfg.f64_list("theta-list-deg")?
                .par_iter()
                .map(|&th| {
                    let curves =
                        mgs.iter().map(|&mg| pl_curve(th.to_radians(), t0, mg, n)).collect::<Result<Vec<_>, _>>()?;
                    let mut cols = vec![String::from("theta_g_deg")];
                    cols.extend(mgs.iter().map(|mg| format!("P_l_m{mg}")));
                    let mut t = Table::new(&cols);
                    for i in 0..n {
                        let mut row = vec![curves[0][i].theta_g.to_degrees().into()];
                        row.extend(curves.iter().map(|c| Cell::Num(c[i].p_l)));
                        t.push(row);
                    }
                    Ok((format!("fig3_theta_{}", fmt_label(th)), t))
                })
                .collect()
        }
        "fig4" => {
            let mgs = if cfg.is_set("m-gamma-list") { cfg.i32_list("m-gamma-list")? } else { vec![1, 4] };
            let ta = axis(0.0, cfg.f64("theta-max-deg")?, cfg.count("theta-points", 2)?);
            let ga = axis(0.0, cfg.f64("theta-g-max-deg")?, cfg.count("theta-g-points", 2)?);
            mgs.par_iter().map(|&mg| Ok((format!("fig4_m_gamma_{mg}"), map_table(t0, mg, &ta, &ga)?))).collect()
        }
        other => Err(ConfigError(format!("figure must be fig3 or fig4, got `{other}`")).into()),
    }
}

/// `6` for 6.0, `12p5` for 12.5: a file-name-safe label.
fn fmt_label(x: f64) -> String {
    format!("{x}").replace('.', "p").replace('-', "m")
}
