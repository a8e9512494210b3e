//! Command-line front end for `abext-core`: argument grammar, JSON result
//! documents and CSV tables for parameter scans.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure. Errors are
//! reported as one JSON object per line on standard error.

pub mod args;
mod commands;
pub mod report;
mod scan;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};

use abext_core::overlap::QuadratureConfig;
use clap::Parser;

use args::{Cli, Command, Format, GlobalArgs};
pub use report::{CliError, Report};

pub use commands::execute;

fn quadrature_config(global: &GlobalArgs) -> Result<QuadratureConfig, CliError> {
    let cfg = QuadratureConfig {
        abs_tol: global.tol_quad,
        panel_budget: global.panel_budget,
        window_factor: global.window_factor,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn render(cli: &Cli) -> Result<String, CliError> {
    let cfg = quadrature_config(&cli.global)?;
    match &cli.command {
        Command::Scan { vary, command } => {
            let (_, rows) = scan::run_scan(vary, command, &cfg)?;
            match cli.global.format {
                Format::Csv => scan::to_csv(&rows),
                Format::Json => Ok(document(&scan::to_report(vary, command, &rows))),
            }
        }
        command => {
            if cli.global.format == Format::Csv {
                return Err(CliError::Usage(
                    "csv output is only available for scan".into(),
                ));
            }
            let mut report = Report::default();
            execute(command, &cfg, &mut report)?;
            Ok(document(&report))
        }
    }
}

fn document(report: &Report) -> String {
    let mut text = serde_json::to_string_pretty(&report.to_json())
        .expect("serialising a JSON value cannot fail");
    text.push('\n');
    text
}

/// Parses `argv` (program name first), runs the command and writes the result
/// to `out` or to the `--out` file. Returns the process exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = Cli::try_parse_from(argv)
        .map_err(|e| {
            if e.use_stderr() {
                CliError::Usage(e.to_string())
            } else {
                // --help and --version
                let _ = write!(out, "{e}");
                CliError::Usage(String::new())
            }
        })
        .and_then(|cli| {
            let text = render(&cli)?;
            match &cli.global.out {
                Some(path) => fs::write(path, text)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
                None => out
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::Io(e.to_string())),
            }
        });
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) if msg.is_empty() => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json_line());
            e.exit_code()
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = run_with(argv, &mut stdout.lock(), &mut stderr.lock());
    let _ = io::stdout().flush();
    code
}
