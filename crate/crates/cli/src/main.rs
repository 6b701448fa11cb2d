mod args;
mod commands;
mod manifest;

use std::ffi::OsString;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use rangewalk::estimators::EngineConfig;
use rangewalk::Error;

use args::Cli;
use manifest::{Manifest, RunConfig};

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("rangewalk: {msg}");
    ExitCode::from(code)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } => 2,
        Error::Budget { .. } | Error::Kernel { .. } => 1,
    }
}

fn parse(argv: &[OsString]) -> Result<Cli, ExitCode> {
    Cli::try_parse_from(argv).map_err(|e| {
        let code = e.exit_code();
        let _ = e.print();
        ExitCode::from(code as u8)
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<OsString> = std::env::args_os().collect();
    let mut cli = match parse(&argv) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let mut raw: Vec<String> = argv[1..].iter().map(|a| a.to_string_lossy().into_owned()).collect();
    if let Some(path) = cli.from_manifest.clone() {
        let m = match manifest::read(&path) {
            Ok(m) => m,
            Err(e) => return fail(2, e),
        };
        let mut replay: Vec<OsString> = vec!["rangewalk".into()];
        replay.extend(m.config.args.iter().map(OsString::from));
        replay.push("--out".into());
        replay.push(cli.out.clone().into_os_string());
        let out = cli.out.clone();
        cli = match parse(&replay) {
            Ok(c) => c,
            Err(code) => return code,
        };
        cli.out = out;
        raw = m.config.args;
    }
    let Some(command) = cli.command.clone() else {
        return fail(2, "no subcommand given (see --help)");
    };
    let stamp = cli
        .stamp
        .clone()
        .unwrap_or_else(|| chrono::Utc::now().format("%Y%m%dT%H%M%SZ").to_string());
    let config = RunConfig {
        subcommand: command.name().into(),
        args: manifest::canonical_args(&raw, &stamp),
        seed: cli.seed,
        workers: cli.workers,
        stamp: stamp.clone(),
    };
    let engine = EngineConfig::new(cli.seed, cli.workers);
    let outcome = match commands::execute(&command, &engine) {
        Ok(o) => o,
        Err(e) => return fail(error_code(&e), e),
    };
    let csv_name = format!("{}-{}.csv", command.name(), stamp);
    if let Err(e) = write_outputs(&cli.out, &csv_name, &config, &outcome) {
        return fail(1, e);
    }
    println!("{}", cli.out.join(&csv_name).display());
    match outcome.failure {
        Some(msg) => fail(1, format!("check failed: {msg}")),
        None => ExitCode::SUCCESS,
    }
}

fn write_outputs(out: &Path, csv_name: &str, config: &RunConfig, outcome: &commands::Outcome) -> std::io::Result<()> {
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join(csv_name), &outcome.csv)?;
    let m = Manifest {
        config_hash: manifest::config_hash(config),
        config: config.clone(),
        version: manifest::version(),
        outputs: vec![csv_name.to_string()],
        summary: outcome.summary.clone(),
    };
    let text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    std::fs::write(out.join("manifest.json"), text + "\n")
}
