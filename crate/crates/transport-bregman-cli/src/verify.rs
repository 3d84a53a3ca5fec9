//! The `verify` command: run the library's brute-force property suite and
//! report every check, with an optional CSV dump of the raw numbers.

use crate::{fmt_sig9, CliError};
use std::fs;
use std::io::Write;
use std::path::Path;
use transport_bregman::oracle::{run_property_suite, CheckReport};

/// Renders one line per check — name, measured, expected, tolerance, and
/// PASS/FAIL — followed by a summary line. Deterministic for a fixed seed.
pub fn render_reports(reports: &[CheckReport], seed: u64) -> String {
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for report in reports {
        out.push_str(&format!(
            "{:<width$}  measured {:>16}  expected {:>16}  tol {:>8}  {}\n",
            report.name,
            fmt_sig9(report.measured),
            fmt_sig9(report.expected),
            format!("{:.0e}", report.tolerance),
            if report.pass { "PASS" } else { "FAIL" },
        ));
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    out.push_str(&format!(
        "{passed}/{} checks passed (seed {seed})\n",
        reports.len()
    ));
    out
}

/// Renders the reports as CSV with the same nine-significant-digit format
/// the sweep uses.
pub fn render_reports_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from("name,measured,expected,tolerance,pass\n");
    for report in reports {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            report.name,
            fmt_sig9(report.measured),
            fmt_sig9(report.expected),
            fmt_sig9(report.tolerance),
            report.pass,
        ));
    }
    out
}

/// Process exit code for a finished suite: `0` iff every check passed.
pub fn exit_code(reports: &[CheckReport]) -> u8 {
    u8::from(!reports.iter().all(|r| r.pass))
}

/// Runs the suite at `seed`, prints the report to `w`, optionally dumps the
/// CSV to `out`, and returns the exit code.
///
/// # Errors
/// [`CliError`] only for IO failures; failing checks are reported through
/// the exit code instead.
pub fn cmd_verify(seed: u64, out: Option<&Path>, w: &mut dyn Write) -> Result<u8, CliError> {
    let reports = run_property_suite(seed);
    w.write_all(render_reports(&reports, seed).as_bytes())
        .map_err(|err| CliError(format!("cannot write report: {err}")))?;
    if let Some(path) = out {
        fs::write(path, render_reports_csv(&reports))
            .map_err(|err| CliError(format!("cannot write {}: {err}", path.display())))?;
    }
    Ok(exit_code(&reports))
}
