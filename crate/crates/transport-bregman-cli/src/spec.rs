//! Parsing and resolution of the textual specs the CLI accepts: density
//! descriptions, sweep axes, and divergence column lists, plus writers for
//! the two on-disk density formats so they round-trip.

use crate::CliError;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use transport_bregman::density::{
    from_grid, from_samples, gaussian1d, parse_samples, uniform1d, Density1D, GridDensity,
};
use transport_bregman::gaussian::GaussianDensity;

/// A density as described on the command line, before touching any file.
///
/// The grammar is `KIND:ARGS` with four kinds:
///
/// ```text
/// gaussian:MEAN:VARIANCE    closed-form normal density
/// uniform:A:B               uniform density on (A, B)
/// grid:PATH                 tabulated density, two columns "x pdf" per line
/// samples:PATH              empirical density, one draw per line
/// ```
///
/// Both file formats treat `#` as a comment-to-end-of-line and skip blank
/// lines; [`render_grid_text`] and [`render_samples_text`] write them back.
#[derive(Debug, Clone, PartialEq)]
pub enum DensitySpec {
    /// `gaussian:MEAN:VARIANCE` — normal with the given mean and variance.
    Gaussian {
        /// Mean of the density.
        mean: f64,
        /// Variance (not standard deviation) of the density.
        variance: f64,
    },
    /// `uniform:A:B` — uniform on the interval `(a, b)`.
    Uniform {
        /// Left endpoint.
        a: f64,
        /// Right endpoint.
        b: f64,
    },
    /// `grid:PATH` — density tabulated in a two-column text file.
    GridFile {
        /// File holding `x density` rows.
        path: PathBuf,
    },
    /// `samples:PATH` — empirical density from one draw per line.
    SamplesFile {
        /// File holding one sample per line.
        path: PathBuf,
    },
}

impl DensitySpec {
    /// Parses the `KIND:ARGS` grammar. Numeric arguments are validated here
    /// (finite, variance positive, interval nonempty) so errors surface
    /// before any file is opened.
    ///
    /// # Errors
    /// [`CliError`] naming the offending field for anything outside the
    /// grammar.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let (kind, rest) = text.split_once(':').ok_or_else(|| {
            CliError(format!(
                "density spec '{text}' needs the form KIND:ARGS \
                 (gaussian:MEAN:VARIANCE, uniform:A:B, grid:PATH, samples:PATH)"
            ))
        })?;
        match kind {
            "gaussian" => {
                let (mean_text, var_text) = rest.split_once(':').ok_or_else(|| {
                    CliError(format!("gaussian spec '{text}' needs gaussian:MEAN:VARIANCE"))
                })?;
                let mean = parse_field(mean_text, "gaussian mean")?;
                let variance = parse_field(var_text, "gaussian variance")?;
                if !(variance > 0.0) {
                    return Err(CliError(format!(
                        "gaussian variance must be positive, got {var_text}"
                    )));
                }
                Ok(DensitySpec::Gaussian { mean, variance })
            }
            "uniform" => {
                let (a_text, b_text) = rest.split_once(':').ok_or_else(|| {
                    CliError(format!("uniform spec '{text}' needs uniform:A:B"))
                })?;
                let a = parse_field(a_text, "uniform left endpoint")?;
                let b = parse_field(b_text, "uniform right endpoint")?;
                if !(a < b) {
                    return Err(CliError(format!(
                        "uniform interval needs A < B, got ({a_text}, {b_text})"
                    )));
                }
                Ok(DensitySpec::Uniform { a, b })
            }
            "grid" if !rest.is_empty() => Ok(DensitySpec::GridFile { path: rest.into() }),
            "samples" if !rest.is_empty() => Ok(DensitySpec::SamplesFile { path: rest.into() }),
            "grid" | "samples" => Err(CliError(format!("density spec '{text}' is missing a path"))),
            other => Err(CliError(format!(
                "unknown density kind '{other}' \
                 (expected gaussian:MEAN:VARIANCE, uniform:A:B, grid:PATH, samples:PATH)"
            ))),
        }
    }

    /// Loads whatever the spec points at and builds the quantile-backed
    /// density, plus the scalar Gaussian when a closed-form route exists.
    ///
    /// # Errors
    /// [`CliError`] for unreadable files, malformed file contents, or
    /// degenerate inputs (fewer than two distinct samples, invalid tables).
    pub fn resolve(&self) -> Result<ResolvedDensity, CliError> {
        match self {
            DensitySpec::Gaussian { mean, variance } => Ok(ResolvedDensity {
                label: self.to_string(),
                density: gaussian1d(*mean, *variance)?,
                gaussian: Some(GaussianDensity::scalar(*mean, *variance)?),
            }),
            DensitySpec::Uniform { a, b } => Ok(ResolvedDensity {
                label: self.to_string(),
                density: uniform1d(*a, *b)?,
                gaussian: None,
            }),
            DensitySpec::GridFile { path } => {
                let grid = GridDensity::parse_text(&read_file(path)?)
                    .map_err(|err| CliError(format!("{}: {err}", path.display())))?;
                Ok(ResolvedDensity {
                    label: format!("grid {} ({} rows)", path.display(), grid.xs().len()),
                    density: from_grid(grid),
                    gaussian: None,
                })
            }
            DensitySpec::SamplesFile { path } => {
                let samples = parse_samples(&read_file(path)?)
                    .map_err(|err| CliError(format!("{}: {err}", path.display())))?;
                let density = from_samples(&samples)
                    .map_err(|err| CliError(format!("{}: {err}", path.display())))?;
                Ok(ResolvedDensity {
                    label: format!("samples {} ({} draws)", path.display(), samples.len()),
                    density,
                    gaussian: None,
                })
            }
        }
    }
}

impl fmt::Display for DensitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensitySpec::Gaussian { mean, variance } => {
                write!(f, "gaussian(mean {mean}, variance {variance})")
            }
            DensitySpec::Uniform { a, b } => write!(f, "uniform({a}, {b})"),
            DensitySpec::GridFile { path } => write!(f, "grid {}", path.display()),
            DensitySpec::SamplesFile { path } => write!(f, "samples {}", path.display()),
        }
    }
}

/// A density spec after file loading: the quantile-backed density all
/// transport divergences integrate over, and the closed-form Gaussian
/// object when the spec was `gaussian:…`.
#[derive(Debug, Clone)]
pub struct ResolvedDensity {
    /// Human-readable description echoed in command output.
    pub label: String,
    /// Quantile-backed density (analytic, grid, or empirical).
    pub density: Density1D,
    /// Scalar Gaussian for matrix-formula routes, when applicable.
    pub gaussian: Option<GaussianDensity>,
}

fn parse_field(token: &str, what: &str) -> Result<f64, CliError> {
    let value: f64 = token
        .parse()
        .map_err(|_| CliError(format!("cannot parse {what} '{token}' as a number")))?;
    if !value.is_finite() {
        return Err(CliError(format!("{what} must be finite, got {token}")));
    }
    Ok(value)
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|err| CliError(format!("cannot read {}: {err}", path.display())))
}

/// Writes a tabulated density in the `grid:` file format. Values use the
/// shortest decimal that parses back to the same float, so
/// `GridDensity::parse_text ∘ render_grid_text` reproduces the abscissae
/// exactly and the density values up to the one renormalization
/// `GridDensity` applies on construction (≤ 1 ulp per value).
pub fn render_grid_text(grid: &GridDensity) -> String {
    let mut out = String::from("# x density\n");
    for (x, p) in grid.xs().iter().zip(grid.pdf()) {
        out.push_str(&format!("{x} {p}\n"));
    }
    out
}

/// Writes samples in the `samples:` file format, one draw per line, again
/// with exact round-trip through `parse_samples`.
pub fn render_samples_text(samples: &[f64]) -> String {
    let mut out = String::from("# one sample per line\n");
    for x in samples {
        out.push_str(&format!("{x}\n"));
    }
    out
}

/// One sweep axis, parsed from `MIN:MAX:STEPS`: `STEPS` standard deviations
/// evenly spaced from `MIN` to `MAX` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    /// Smallest standard deviation on the axis; must be positive.
    pub min: f64,
    /// Largest standard deviation on the axis; must exceed `min`.
    pub max: f64,
    /// Number of grid points, at least 2.
    pub steps: usize,
}

impl AxisRange {
    /// Parses `MIN:MAX:STEPS` and validates the range.
    ///
    /// # Errors
    /// [`CliError`] unless `0 < MIN < MAX` are finite and `STEPS ≥ 2`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let [min_text, max_text, steps_text] = parts.as_slice() else {
            return Err(CliError(format!("axis '{text}' needs the form MIN:MAX:STEPS")));
        };
        let min = parse_field(min_text, "axis minimum")?;
        let max = parse_field(max_text, "axis maximum")?;
        let steps: usize = steps_text
            .parse()
            .map_err(|_| CliError(format!("cannot parse axis step count '{steps_text}'")))?;
        if !(min > 0.0) {
            return Err(CliError(format!(
                "axis minimum must be a positive standard deviation, got {min_text}"
            )));
        }
        if !(max > min) {
            return Err(CliError(format!(
                "axis maximum must exceed the minimum, got {min_text}:{max_text}"
            )));
        }
        if steps < 2 {
            return Err(CliError(format!("axis needs at least 2 steps, got {steps_text}")));
        }
        Ok(AxisRange { min, max, steps })
    }

    /// The grid points, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let span = self.max - self.min;
        let denom = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| self.min + span * (k as f64 / denom))
            .collect()
    }
}

impl Default for AxisRange {
    /// The default sweep axis: sixty standard deviations from 0.2 to 3.0,
    /// spanning strongly contractive through strongly expansive maps.
    fn default() -> Self {
        AxisRange {
            min: 0.2,
            max: 3.0,
            steps: 60,
        }
    }
}

/// One divergence column of the sweep CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepColumn {
    /// Classical Kullback–Leibler divergence (density space).
    Kl,
    /// Transport Kullback–Leibler divergence.
    Tkl,
    /// Transport Jensen–Shannon divergence.
    Tjs,
    /// Squared 2-Wasserstein distance.
    W2,
}

impl SweepColumn {
    /// Every column in the canonical CSV order.
    pub const ALL: [SweepColumn; 4] = [
        SweepColumn::Kl,
        SweepColumn::Tkl,
        SweepColumn::Tjs,
        SweepColumn::W2,
    ];

    /// The CSV header name of the column.
    pub fn name(self) -> &'static str {
        match self {
            SweepColumn::Kl => "kl",
            SweepColumn::Tkl => "tkl",
            SweepColumn::Tjs => "tjs",
            SweepColumn::W2 => "w2",
        }
    }

    /// Parses a comma-separated column list like `kl,tkl,w2`. Output is in
    /// canonical order regardless of input order; repeats collapse.
    ///
    /// # Errors
    /// [`CliError`] for unknown names or an empty selection.
    pub fn parse_list(text: &str) -> Result<Vec<SweepColumn>, CliError> {
        let mut keep = [false; 4];
        for token in text.split(',') {
            let token = token.trim();
            let idx = match token {
                "kl" => 0,
                "tkl" => 1,
                "tjs" => 2,
                "w2" => 3,
                other => {
                    return Err(CliError(format!(
                        "unknown divergence '{other}' (expected a subset of kl,tkl,tjs,w2)"
                    )));
                }
            };
            keep[idx] = true;
        }
        let columns: Vec<SweepColumn> = SweepColumn::ALL
            .iter()
            .zip(keep)
            .filter_map(|(&col, k)| k.then_some(col))
            .collect();
        if columns.is_empty() {
            return Err(CliError(String::from("divergence list must name at least one column")));
        }
        Ok(columns)
    }
}

/// Full description of a sweep: the two standard-deviation axes and the
/// divergence columns to tabulate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Standard deviations of the first argument.
    pub sigma_x: AxisRange,
    /// Standard deviations of the second argument.
    pub sigma_y: AxisRange,
    /// Columns to emit, in canonical order.
    pub columns: Vec<SweepColumn>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            sigma_x: AxisRange::default(),
            sigma_y: AxisRange::default(),
            columns: SweepColumn::ALL.to_vec(),
        }
    }
}
