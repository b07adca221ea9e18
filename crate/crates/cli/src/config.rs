//! Run configuration: per-command keys with defaults, overridden by a
//! `key = value` file and then by command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use vc_twist_core::numerics::HalfInt;

/// A validation failure; the message names the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

pub struct KeyDef {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

const fn key(name: &'static str, default: &'static str, help: &'static str) -> KeyDef {
    KeyDef { name, default, help }
}

pub struct CommandDef {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [KeyDef],
}

const KINETIC: KeyDef = key("kinetic-keV", "300", "electron kinetic energy [keV]");
const N: KeyDef = key("n", "1.33", "constant refractive index");
const MEDIUM: KeyDef = key("medium-table", "", "two-column `omega_eV n` file; replaces n");
const OMEGA: KeyDef = key("omega-eV", "2.25", "photon energy [eV], comma-separated for a grid");
const LAMBDA: KeyDef = key("lambda", "1/2", "electron helicity");
const M_TAM: KeyDef = key("m", "1/2", "electron total angular momentum projection");
const THETA0: KeyDef = key("theta0-deg", "14.5", "Cherenkov angle [deg]");
const MAX_M: KeyDef = key("max-m", "4", "largest |m_gamma| kept");

pub const COMMANDS: &[CommandDef] = &[
    CommandDef {
        name: "cone",
        about: "Cherenkov angle and final-electron angle for each photon energy",
        keys: &[KINETIC, N, MEDIUM, OMEGA],
    },
    CommandDef {
        name: "amplitude",
        about: "Helicity amplitudes; plane wave for theta-deg = 0, twisted C otherwise",
        keys: &[
            KINETIC,
            N,
            MEDIUM,
            OMEGA,
            LAMBDA,
            M_TAM,
            key("theta-deg", "0", "electron cone opening angle [deg]"),
            key("theta-g-deg", "", "photon polar angle [deg]; default: Cherenkov angle or mid-overlap"),
            key("phi-g-deg", "30", "photon azimuth [deg], plane wave only"),
            MAX_M,
        ],
    },
    CommandDef {
        name: "evolved-pw",
        about: "Evolved-state coefficients for a plane-wave electron",
        keys: &[KINETIC, N, MEDIUM, OMEGA, LAMBDA, MAX_M, key("merge", "true", "sum the two hemisphere rows")],
    },
    CommandDef {
        name: "evolved-tw",
        about: "Evolved-state coefficients for a twisted electron",
        keys: &[
            KINETIC,
            N,
            MEDIUM,
            OMEGA,
            LAMBDA,
            M_TAM,
            key("theta-deg", "1", "electron cone opening angle [deg]"),
            key("theta-g-points", "8", "overlap-interval nodes per photon energy"),
            MAX_M,
        ],
    },
    CommandDef {
        name: "polarization-curve",
        about: "Degree of linear polarization along the overlap interval",
        keys: &[
            THETA0,
            key("theta-deg", "12", "electron cone opening angle [deg]"),
            key("m-gamma", "1", "photon TAM"),
            key("points", "181", "number of photon angles"),
        ],
    },
    CommandDef {
        name: "polarization-map",
        about: "Degree of linear polarization on a (theta, theta_g) grid",
        keys: &[
            THETA0,
            key("m-gamma", "1", "photon TAM"),
            key("theta-min-deg", "0.5", "first electron angle [deg]"),
            key("theta-max-deg", "30", "last electron angle [deg]"),
            key("theta-points", "60", "electron angles"),
            key("theta-g-min-deg", "0.5", "first photon angle [deg]"),
            key("theta-g-max-deg", "45", "last photon angle [deg]"),
            key("theta-g-points", "90", "photon angles"),
        ],
    },
    CommandDef {
        name: "epa",
        about: "Equivalent-photon polarization and mean helicity against omega/E",
        keys: &[
            key("gamma", "1000", "electron energy in units of the electron mass"),
            LAMBDA,
            key("theta0-deg", "0.05", "equivalent-photon polar angle [deg]"),
            key("x-min", "0.001", "smallest omega/E"),
            key("x-max", "0.05", "largest omega/E"),
            key("x-points", "50", "number of omega/E values"),
        ],
    },
    CommandDef { name: "oracle-check", about: "Run the scalar and azimuthal oracle suites", keys: &[] },
    CommandDef {
        name: "sample-wf",
        about: "Evolved two-particle wave function at one electron and one photon point",
        keys: &[
            KINETIC,
            N,
            MEDIUM,
            OMEGA,
            LAMBDA,
            M_TAM,
            key("theta-deg", "0", "electron cone opening angle [deg]; 0 for a plane wave"),
            key("theta-g-points", "8", "overlap-interval nodes per photon energy"),
            key("max-m", "8", "largest |m_gamma| kept"),
            key("electron-point", "0,1,0,0", "t, r_perp, phi_deg, z of the electron [1/eV, deg]"),
            key("photon-point", "0,1,180,0", "t, r_perp, phi_deg, z of the photon [1/eV, deg]"),
        ],
    },
    CommandDef {
        name: "figure",
        about: "Data for the polarization figures: `fig3` curves or `fig4` maps",
        keys: &[
            key("which", "fig3", "fig3 or fig4; also accepted as the positional argument"),
            THETA0,
            key("theta-list-deg", "6,12,18", "fig3: electron cone angles [deg]"),
            key("m-gamma-list", "", "photon TAMs; default 1,2,3 for fig3 and 1,4 for fig4"),
            key("points", "181", "fig3: photon angles per curve"),
            key("theta-max-deg", "30", "fig4: last electron angle [deg]"),
            key("theta-points", "121", "fig4: electron angles"),
            key("theta-g-max-deg", "45", "fig4: last photon angle [deg]"),
            key("theta-g-points", "181", "fig4: photon angles"),
        ],
    },
];

pub fn command_def(name: &str) -> Option<&'static CommandDef> {
    COMMANDS.iter().find(|c| c.name == name)
}

/// Resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    values: BTreeMap<&'static str, String>,
}

impl RunConfig {
    pub fn defaults(def: &'static CommandDef) -> Self {
        Self { command: def.name, values: def.keys.iter().map(|k| (k.name, k.default.to_string())).collect() }
    }

    pub fn set(&mut self, name: &str, value: &str) -> Result<(), ConfigError> {
        let def = command_def(self.command).expect("registered command");
        let Some(k) = def.keys.iter().find(|k| k.name == name) else {
            return err(format!("unknown key `{name}` for command `{}`", self.command));
        };
        self.values.insert(k.name, value.trim().to_string());
        Ok(())
    }

    /// Applies a `key = value` text; `#` starts a comment. `command` must
    /// match when present and `version` is ignored, so the header of an
    /// output file (with the `# ` prefixes removed) is itself a config.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return err(format!("config line {}: expected `key = value`", lineno + 1));
            };
            let (k, v) = (k.trim(), v.trim());
            match k {
                "version" => {}
                "command" if v == self.command => {}
                "command" => return err(format!("config is for command `{v}`, not `{}`", self.command)),
                _ => self.set(k, v).map_err(|e| ConfigError(format!("config line {}: {e}", lineno + 1)))?,
            }
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn raw(&self, name: &str) -> &str {
        self.values.get(name).map(String::as_str).unwrap_or("")
    }

    pub fn is_set(&self, name: &str) -> bool {
        !self.raw(name).is_empty()
    }

    pub fn f64(&self, name: &str) -> Result<f64, ConfigError> {
        parse_f64(name, self.raw(name))
    }

    pub fn positive(&self, name: &str) -> Result<f64, ConfigError> {
        let x = self.f64(name)?;
        if x > 0.0 {
            Ok(x)
        } else {
            err(format!("{name} must be positive, got {x}"))
        }
    }

    pub fn f64_list(&self, name: &str) -> Result<Vec<f64>, ConfigError> {
        let out: Vec<f64> = split_list(self.raw(name)).map(|s| parse_f64(name, s)).collect::<Result<_, _>>()?;
        if out.is_empty() {
            return err(format!("{name} needs at least one value"));
        }
        Ok(out)
    }

    pub fn i32(&self, name: &str) -> Result<i32, ConfigError> {
        parse_i32(name, self.raw(name))
    }

    pub fn i32_list(&self, name: &str) -> Result<Vec<i32>, ConfigError> {
        split_list(self.raw(name)).map(|s| parse_i32(name, s)).collect()
    }

    pub fn count(&self, name: &str, min: usize) -> Result<usize, ConfigError> {
        let raw = self.raw(name);
        match raw.parse::<usize>() {
            Ok(n) if n >= min => Ok(n),
            Ok(n) => err(format!("{name} must be at least {min}, got {n}")),
            Err(_) => err(format!("{name}: expected a count, got `{raw}`")),
        }
    }

    pub fn half_int(&self, name: &str) -> Result<HalfInt, ConfigError> {
        self.raw(name).parse().map_err(|e| ConfigError(format!("{name}: {e}")))
    }

    pub fn bool(&self, name: &str) -> Result<bool, ConfigError> {
        match self.raw(name) {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            other => err(format!("{name}: expected true or false, got `{other}`")),
        }
    }

    /// Header lines echoing the version, the command and every resolved key.
    pub fn header(&self) -> Vec<String> {
        let mut out = vec![format!("version = {}", env!("CARGO_PKG_VERSION")), format!("command = {}", self.command)];
        out.extend(self.values.iter().map(|(k, v)| format!("{k} = {v}")));
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = (&'static str, &str)> {
        self.values.iter().map(|(k, v)| (*k, v.as_str()))
    }
}

fn split_list(raw: &str) -> impl Iterator<Item = &str> {
    raw.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_f64(name: &str, raw: &str) -> Result<f64, ConfigError> {
    match raw.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => err(format!("{name}: expected a finite number, got `{raw}`")),
    }
}

fn parse_i32(name: &str, raw: &str) -> Result<i32, ConfigError> {
    raw.parse().map_err(|_| ConfigError(format!("{name}: expected an integer, got `{raw}`")))
}
