use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dynsym_cli::config::{config_file_args, Command, Format, RunConfig, COMMANDS};
use dynsym_cli::outcome::CliError;
use dynsym_cli::{commands, output_path, render, suite, write_atomic, OUT_DIR_ENV};

/// Exact checks and numerical models for dynamical space-time symmetries.
///
/// Exit status: 0 when every check passes, 1 on a failed check, 2 on a
/// usage or configuration error.
#[derive(Parser, Debug)]
#[command(name = "dynsym", version, args_override_self = true)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Report path. Defaults to $DYNSYM_OUT/<command>.<format>, or standard
    /// output when DYNSYM_OUT is unset.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Flat key = value file of options; flags on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

const GLOBAL_WITH_VALUE: [&str; 3] = ["--format", "--out", "--config"];

/// Position of the subcommand token, skipping global options and their values.
fn subcommand_index(args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy();
        if GLOBAL_WITH_VALUE.contains(&a.as_ref()) {
            i += 2;
            continue;
        }
        if COMMANDS.contains(&a.as_ref()) {
            return Some(i);
        }
        if !a.starts_with('-') {
            return None;
        }
        i += 1;
    }
    None
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Splices options from the config file in front of the command-line ones
/// so that later flags override them.
fn with_config_file(mut args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))?;
    let (command, extra) = config_file_args(&text).map_err(CliError::Usage)?;
    let at = match subcommand_index(&args) {
        Some(i) => i + 1,
        None => {
            let c = command.ok_or_else(|| CliError::Usage("no command given on the command line or in the config file".into()))?;
            args.push(c.into());
            args.len()
        }
    };
    args.splice(at..at, extra.into_iter().map(OsString::from));
    Ok(args)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cfg = RunConfig { command: cli.command, format: cli.format, out: cli.out };
    let outcome = commands::run(&cfg.command)?;
    let report = render(&cfg, &outcome)?;
    let env_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let path = output_path(&cfg, env_dir.as_deref());
    let is_suite = matches!(cfg.command, Command::Suite { .. });
    if is_suite {
        print!("{}", suite::summary_table(&outcome));
    }
    match path {
        Some(p) => write_atomic(&p, &report)?,
        None if !is_suite => print!("{}", report),
        None => {}
    }
    if !outcome.pass {
        eprintln!("dynsym: {} did not pass: {}", outcome.check, outcome.relation);
    }
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let args = match with_config_file(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("dynsym: {}", e);
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("dynsym: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
