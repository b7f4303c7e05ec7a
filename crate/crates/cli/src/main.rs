//! `flamefront` command-line driver.
//!
//! Exit codes: 0 computed (including unstable fronts), 1 numerical failure,
//! 2 configuration error.

mod config;
mod critical;
mod output;
mod simulate;
mod spectrum;
mod verify;
mod wave;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{bad, Command, ConfigError, RunConfig};
use output::Sink;

#[derive(Parser)]
#[command(name = "flamefront", version, about = "Stability and Hopf analysis of ignition-temperature combustion fronts")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON run configuration (optional for `verify`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path prefix, e.g. `out/` or `out/run1_`.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Traveling-wave profile: wave.csv, wave_meta.json.
    Wave,
    /// Spectrum map and dispersion roots: spectrum.csv, roots.csv, spectrum_meta.json.
    Spectrum,
    /// Hopf critical curve: critical.csv, transversality.csv.
    Critical,
    /// Front simulation: trace.csv, verdict.json.
    Simulate,
    /// Invariant battery; exits 1 if any check fails.
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Wave => Command::Wave,
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Critical => Command::Critical,
            Cmd::Simulate => Command::Simulate,
            Cmd::Verify => Command::Verify,
        }
    }
}

enum Done {
    Ok,
    Failed(String),
}

fn execute(cli: &Cli) -> anyhow::Result<Done> {
    let cmd: Command = cli.command.into();
    let cfg = match (&cli.config, cmd) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Command::Verify) => RunConfig::default(),
        (None, _) => return bad("--config is required for this command"),
    };
    cfg.validate(cmd)?;
    let jobs = match cli.jobs {
        Some(0) => return bad("--jobs must be at least 1"),
        Some(n) => n,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let prefix = cli.out.clone().or_else(|| cfg.out.clone());
    let mut sink = Sink::new(prefix.as_deref().unwrap_or(""), cmd, &cfg);

    let done = pool.install(|| -> anyhow::Result<Done> {
        match cmd {
            Command::Wave => wave::run(&cfg, &mut sink)?,
            Command::Spectrum => spectrum::run(&cfg, &mut sink)?,
            Command::Critical => {
                let statuses = critical::run(&cfg, &mut sink)?;
                if critical::numerical_failure(&statuses) {
                    return Ok(Done::Failed("some critical points failed; see the status column".into()));
                }
            }
            Command::Simulate => simulate::run(&cfg, &mut sink)?,
            Command::Verify => {
                let checks = verify::battery()?;
                for c in &checks {
                    let r = c.residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "exact".into());
                    println!("{} {:<22} {:>10}  {}", if c.pass { "PASS" } else { "FAIL" }, c.name, r, c.detail);
                }
                if prefix.is_some() {
                    sink.json("verify.json", &checks)?;
                }
                let failed = checks.iter().filter(|c| !c.pass).count();
                if failed > 0 {
                    return Ok(Done::Failed(format!("{failed} check(s) failed")));
                }
            }
        }
        Ok(Done::Ok)
    })?;
    for p in &sink.written {
        eprintln!("wrote {}", p.display());
    }
    Ok(done)
}

/// Configuration problems exit 2; everything else that fails is numerical.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<flamefront::Error>() {
        Some(flamefront::Error::Config(_) | flamefront::Error::InvalidParams(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Done::Ok) => ExitCode::SUCCESS,
        Ok(Done::Failed(msg)) => {
            eprintln!("flamefront: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("flamefront: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
