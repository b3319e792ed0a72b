//! `locc-lab`: runs the demos, sweeps and checks of `locc-core` and emits
//! `locc-lab/1` JSON reports (or CSV for tradeoff sweeps).
//!
//! Exit codes: 0 when every check passed, 1 when some check failed (the
//! report is still written), 2 for usage errors.

pub mod args;
pub mod commands;
pub mod report;
pub mod state_spec;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command, Format};
use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    State(#[from] state_spec::StateSpecError),
    #[error("{0}")]
    Core(#[from] locc_core::Error),
    #[error("i/o: {0}")]
    Io(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Output of one invocation: the report, and its CSV rendering when asked for.
pub struct Emission {
    pub report: Report,
    pub text: String,
}

pub fn execute(cli: &Cli) -> Result<Emission, CliError> {
    let o = &cli.opts;
    if o.format == Format::Csv && cli.command != Command::Tradeoff {
        return Err(CliError::Usage("--format csv is only available for tradeoff".into()));
    }
    let report = match cli.command {
        Command::Info => commands::info(o)?,
        Command::SingletDemo => commands::singlet_demo(o)?,
        Command::TeleportDemo => commands::teleport_demo(o)?,
        Command::Concentrate => commands::concentrate(o)?,
        Command::Tradeoff => {
            let t = commands::tradeoff(o)?;
            let text = match o.format {
                Format::Csv => commands::rows_to_csv(&t.rows)?,
                Format::Json => t.report.to_json(),
            };
            return Ok(Emission { report: t.report, text });
        }
        Command::Commutator => commands::commutator_cmd(o)?,
        Command::Prop1 => commands::prop1(o)?,
        Command::Sausage => commands::sausage(o)?,
        Command::Suite => suite::suite(o.seed.unwrap_or(commands::DEFAULT_SEED))?,
    };
    let text = report.to_json();
    Ok(Emission { report, text })
}

/// Parses `args` (program name first), runs the subcommand and writes the
/// output. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };
    let emission = match execute(&cli) {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.opts.out {
        Some(path) => std::fs::write(path, &emission.text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(emission.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    for c in emission.report.failed_checks() {
        let _ = writeln!(stderr, "check failed: {} (margin {:e}, tolerance {:e})", c.name, c.margin, c.tolerance);
    }
    if emission.report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED }
}
