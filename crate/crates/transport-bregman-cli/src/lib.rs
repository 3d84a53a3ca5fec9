//! Command-line front end for the [`transport_bregman`] library.
//!
//! The core crate is `no_std` and deliberately free of IO; everything that
//! touches files, terminals, or text formats lives here instead. Three
//! commands are exposed through the `tbreg` binary, each backed by a public
//! function so the behavior is testable without spawning processes:
//!
//! * [`sweep`] — tabulate closed-form Gaussian divergences over a grid of
//!   standard deviations and emit deterministic CSV ([`sweep::cmd_gaussian_sweep`]).
//! * [`compare`] — evaluate every divergence that applies to a pair of
//!   densities described on the command line ([`compare::cmd_compare`]).
//! * [`verify`] — run the library's brute-force property suite and report
//!   each check ([`verify::cmd_verify`]).
//!
//! Exit codes are part of the contract: `0` for success, `1` when the
//! verification suite fails, `2` for unusable input (bad flags, malformed
//! density specs, unreadable files).
//!
//! All emitted CSV uses nine significant digits in scientific notation with
//! `.` as the decimal separator, independent of any locale, so repeated runs
//! are byte-identical.

// Guards are written as `!(x > 0.0)` rather than `x <= 0.0` so that NaN
// fails them too; the negation is the point (same convention as the core
// crate).
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compare;
pub mod spec;
pub mod sweep;
pub mod verify;

use std::fmt;

/// Error carried out of every command: a message for stderr. All variants
/// map to exit code 2 — computational domain errors inside `compare` are
/// reported per-divergence in its table instead of failing the command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

impl From<transport_bregman::Error> for CliError {
    fn from(err: transport_bregman::Error) -> Self {
        CliError(err.to_string())
    }
}

/// Formats a value with exactly nine significant digits in scientific
/// notation (`3.06852819e-1`). This is the only numeric format the emitted
/// CSV files use: it is locale-independent, fixed-width enough to scan, and
/// precise enough that parsing it back perturbs a value `v` by at most half
/// a unit in the ninth digit, `5e-9·|v|`.
pub fn fmt_sig9(x: f64) -> String {
    format!("{x:.8e}")
}
