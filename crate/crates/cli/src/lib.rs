//! The `ppm` command line: matching, certificate checks, orders,
//! generators, bound calculators and the benchmark harness.
//!
//! [`run`] is the whole program; the binary only forwards `argv` and the
//! exit status, so integration tests can call it in-process.

pub mod algo;
pub mod bench;
pub mod record;

mod commands;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::Cli;

/// Exit status for a positive answer or a plain success.
pub const EXIT_OK: u8 = 0;
/// Exit status for avoidance (`match --exit-status`) or a rejected witness.
pub const EXIT_NO: u8 = 1;
/// Exit status for usage, input and internal errors.
pub const EXIT_ERROR: u8 = 2;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match commands::dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}
