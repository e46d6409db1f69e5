//! Command-line front end for `econokit`.
//!
//! Every subcommand reads quarterly CSV (`date,value` or wide `date,A,B,...`),
//! runs one analysis and renders a [`report::ReportDocument`] as text or JSON.

use std::ffi::OsString;
use std::io::Write;

pub mod commands;
pub mod csvio;
pub mod fanchart;
pub mod report;

pub use fanchart::emit_fanchart;
pub use report::{render_report, Format, ReportDocument};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl From<econokit::Error> for CliError {
    fn from(e: econokit::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 1,
        }
    }
}

/// Parse `argv`, run the subcommand and write its output.
///
/// Returns the process exit status: 0 on success, 1 on a data or numeric
/// error, 2 on a usage error. Files named by `--out` and friends are written
/// only after the whole command has succeeded.
pub fn run_command<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::Parser;
    let cli = match commands::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let outcome = match commands::execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    for (path, bytes) in &outcome.files {
        if let Err(e) = std::fs::write(path, bytes) {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
            return 1;
        }
    }
    if stdout.write_all(&outcome.stdout).is_err() {
        return 1;
    }
    0
}
