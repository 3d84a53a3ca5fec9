//! The `gaussian-sweep` command: tabulate closed-form divergences between
//! zero-mean Gaussians over a grid of standard deviations and emit CSV.

use crate::spec::{SweepColumn, SweepSpec};
use crate::{fmt_sig9, CliError};
use std::fs;
use std::path::Path;
use transport_bregman::gaussian::{
    classical_kl_gaussian, transport_js_gaussian, transport_kl_gaussian, wasserstein2_gaussian,
    GaussianDensity,
};

/// One evaluated grid point: the pair of standard deviations and the
/// divergence values aligned with the sweep's column list.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Standard deviation of the first argument.
    pub sigma_x: f64,
    /// Standard deviation of the second argument.
    pub sigma_y: f64,
    /// Values in the order of [`SweepSpec::columns`].
    pub values: Vec<f64>,
}

fn column_value(
    column: SweepColumn,
    x: &GaussianDensity,
    y: &GaussianDensity,
) -> transport_bregman::Result<f64> {
    match column {
        SweepColumn::Kl => classical_kl_gaussian(x, y),
        SweepColumn::Tkl => transport_kl_gaussian(x, y),
        SweepColumn::Tjs => transport_js_gaussian(x, y),
        SweepColumn::W2 => wasserstein2_gaussian(x, y),
    }
}

/// Evaluates every grid point of the sweep through the Gaussian closed
/// forms. Rows come back row-major in `sigma_x` regardless of how the
/// evaluations are scheduled, so the emitted CSV is reproducible.
///
/// # Errors
/// [`CliError`] if a closed form rejects its inputs — unreachable for the
/// positive standard deviations the axis validation admits.
pub fn sweep_rows(spec: &SweepSpec) -> Result<Vec<SweepRow>, CliError> {
    let make = |sigma: f64| GaussianDensity::scalar(0.0, sigma * sigma);
    let xs: Vec<(f64, GaussianDensity)> = spec
        .sigma_x
        .values()
        .into_iter()
        .map(|s| Ok((s, make(s)?)))
        .collect::<Result<_, transport_bregman::Error>>()?;
    let ys: Vec<(f64, GaussianDensity)> = spec
        .sigma_y
        .values()
        .into_iter()
        .map(|s| Ok((s, make(s)?)))
        .collect::<Result<_, transport_bregman::Error>>()?;

    let mut rows = Vec::with_capacity(xs.len() * ys.len());
    for (sigma_x, x) in &xs {
        for (sigma_y, y) in &ys {
            let values = spec
                .columns
                .iter()
                .map(|&col| column_value(col, x, y))
                .collect::<transport_bregman::Result<Vec<f64>>>()?;
            rows.push(SweepRow {
                sigma_x: *sigma_x,
                sigma_y: *sigma_y,
                values,
            });
        }
    }
    Ok(rows)
}

/// Renders the sweep as CSV: a header of `sigma_x,sigma_y` plus the selected
/// divergence columns, then one row per grid point, all values with nine
/// significant digits. Output is byte-identical across runs.
///
/// # Errors
/// Propagates [`sweep_rows`] errors.
pub fn render_sweep_csv(spec: &SweepSpec) -> Result<String, CliError> {
    let mut out = String::from("sigma_x,sigma_y");
    for column in &spec.columns {
        out.push(',');
        out.push_str(column.name());
    }
    out.push('\n');
    for row in sweep_rows(spec)? {
        out.push_str(&fmt_sig9(row.sigma_x));
        out.push(',');
        out.push_str(&fmt_sig9(row.sigma_y));
        for value in &row.values {
            out.push(',');
            out.push_str(&fmt_sig9(*value));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Runs the sweep and writes the CSV to `out`, echoing a one-line summary.
///
/// # Errors
/// [`CliError`] if the sweep fails or the file cannot be written.
pub fn cmd_gaussian_sweep(spec: &SweepSpec, out: &Path) -> Result<(), CliError> {
    let csv = render_sweep_csv(spec)?;
    fs::write(out, &csv)
        .map_err(|err| CliError(format!("cannot write {}: {err}", out.display())))?;
    let rows = spec.sigma_x.steps * spec.sigma_y.steps;
    let columns: Vec<&str> = spec.columns.iter().map(|c| c.name()).collect();
    println!(
        "wrote {rows} rows ({}) to {}",
        columns.join(","),
        out.display()
    );
    Ok(())
}
