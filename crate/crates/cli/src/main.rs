use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};

mod commands;
mod config;
mod table;

use commands::RunError;
use config::{command_def, RunConfig, COMMANDS};
use table::{write_table, Format, Table};

fn cli() -> Command {
    let mut root = Command::new("vc-twist")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Vavilov-Cherenkov emission by plane-wave and twisted electrons")
        .after_help("Angles are in degrees, energies in eV unless the key says keV. VC_TWIST_THREADS caps parallelism.")
        .subcommand_required(true);
    for def in COMMANDS {
        let mut sc = Command::new(def.name)
            .about(def.about)
            .arg(Arg::new("config").long("config").value_name("FILE").help("key = value file; flags override it"))
            .arg(
                Arg::new("set")
                    .long("set")
                    .value_name("KEY=VALUE")
                    .action(ArgAction::Append)
                    .help("set any key; applied after the named flags"),
            )
            .arg(
                Arg::new("format")
                    .long("format")
                    .value_name("FORMAT")
                    .value_parser(["csv", "json"])
                    .default_value("csv")
                    .help("output format"),
            );
        if def.name == "figure" {
            sc = sc
                .arg(
                    Arg::new("figure-name")
                        .value_name("FIGURE")
                        .value_parser(["fig3", "fig4"])
                        .help("figure to produce"),
                )
                .arg(
                    Arg::new("out-dir")
                        .long("out-dir")
                        .value_name("DIR")
                        .default_value(".")
                        .help("directory for the data files"),
                );
        } else {
            sc = sc.arg(
                Arg::new("output").long("output").short('o').value_name("FILE").help("write here instead of stdout"),
            );
        }
        for k in def.keys {
            let help =
                if k.default.is_empty() { k.help.to_string() } else { format!("{} [default: {}]", k.help, k.default) };
            sc = sc.arg(Arg::new(k.name).long(k.name).value_name("VALUE").allow_hyphen_values(true).help(help));
        }
        root = root.subcommand(sc);
    }
    root
}

fn resolve(name: &str, m: &ArgMatches) -> Result<RunConfig, RunError> {
    let def = command_def(name).expect("registered command");
    let mut cfg = RunConfig::defaults(def);
    if let Some(path) = m.get_one::<String>("config") {
        cfg.apply_file(Path::new(path))?;
    }
    for k in def.keys {
        if let Some(v) = m.get_one::<String>(k.name) {
            cfg.set(k.name, v)?;
        }
    }
    if let Ok(Some(which)) = m.try_get_one::<String>("figure-name") {
        cfg.set("which", which)?;
    }
    for kv in m.get_many::<String>("set").into_iter().flatten() {
        let Some((k, v)) = kv.split_once('=') else {
            return Err(config::ConfigError(format!("--set expects KEY=VALUE, got `{kv}`")).into());
        };
        cfg.set(k.trim(), v)?;
    }
    Ok(cfg)
}

fn emit(cfg: &RunConfig, table: &Table, format: Format, output: Option<&String>) -> Result<(), RunError> {
    match output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_table(&mut w, cfg, table, format)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            write_table(&mut w, cfg, table, format)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), RunError> {
    let Ok(raw) = std::env::var("VC_TWIST_THREADS") else { return Ok(()) };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => {
            return Err(config::ConfigError(format!("VC_TWIST_THREADS must be a positive integer, got `{raw}`")).into())
        }
    };
    // fails only if a pool already exists, which cannot happen this early
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run(name: &str, m: &ArgMatches) -> Result<(), RunError> {
    configure_threads()?;
    let cfg = resolve(name, m)?;
    let format =
        if m.get_one::<String>("format").map(String::as_str) == Some("json") { Format::Json } else { Format::Csv };
    let output = m.try_get_one::<String>("output").ok().flatten();
    let table = match name {
        "cone" => commands::cone(&cfg)?,
        "amplitude" => commands::amplitude(&cfg)?,
        "evolved-pw" => commands::evolved_pw(&cfg)?,
        "evolved-tw" => commands::evolved_tw(&cfg)?,
        "polarization-curve" => commands::polarization_curve(&cfg)?,
        "polarization-map" => commands::polarization_map(&cfg)?,
        "epa" => commands::epa(&cfg)?,
        "sample-wf" => commands::sample_wf(&cfg)?,
        "oracle-check" => {
            let (table, failed) = commands::oracle_check()?;
            emit(&cfg, &table, format, output)?;
            return if failed.is_empty() { Ok(()) } else { Err(RunError::Oracle(failed.join(", "))) };
        }
        "figure" => {
            let dir = PathBuf::from(m.get_one::<String>("out-dir").expect("defaulted"));
            std::fs::create_dir_all(&dir)?;
            for (stem, table) in commands::figure(&cfg)? {
                let path = dir.join(format!("{stem}.{}", format.extension()));
                emit(&cfg, &table, format, Some(&path.display().to_string()))?;
                println!("{}", path.display());
            }
            return Ok(());
        }
        other => unreachable!("unregistered command {other}"),
    };
    emit(&cfg, &table, format, output)
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            // clap uses exit status 2 for usage errors; here 2 means non-convergence
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    match run(name, sub) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
