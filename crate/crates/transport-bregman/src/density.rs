//! One-dimensional densities seen through their transport coordinates.
//!
//! Every divergence in one dimension is an integral over the unit interval
//! of quantities built from the quantile function `Q = F⁻¹` and its
//! derivative `dQ/du`, so a density here is exactly that pair plus a support
//! interval and a provenance tag. Four constructions are supported: analytic
//! Gaussians and uniforms, tabulated densities on a grid, empirical samples,
//! and displacement interpolation (pointwise convex combination of quantile
//! functions — the Wasserstein geodesic, not a mixture).
//!
//! Evaluation follows the crate-wide rule of erring instead of clamping:
//! arguments outside the open unit interval, zero-density plateaus in grids,
//! and tied samples that flatten the empirical quantile all surface as typed
//! errors, because silently patched values would be indistinguishable from
//! quadrature bugs two modules downstream.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

// --- Standard normal helpers -----------------------------------------------

/// Standard normal density φ(x).
pub fn normal_pdf(x: f64) -> f64 {
    libm::exp(-0.5 * x * x) / libm::sqrt(2.0 * core::f64::consts::PI)
}

/// Standard normal distribution function Φ(x), evaluated through `erfc` so
/// the far tails keep full relative accuracy instead of rounding to 0 or 1.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

// Coefficients of the rational initial guess for the normal quantile
// (central branch and tail branch share the split at 0.02425).
const NQ_A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.38357751867269e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const NQ_B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const NQ_C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const NQ_D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];
const NQ_TAIL_SPLIT: f64 = 0.02425;

fn normal_quantile_tail(p: f64) -> f64 {
    let q = libm::sqrt(-2.0 * libm::log(p));
    (((((NQ_C[0] * q + NQ_C[1]) * q + NQ_C[2]) * q + NQ_C[3]) * q + NQ_C[4]) * q + NQ_C[5])
        / ((((NQ_D[0] * q + NQ_D[1]) * q + NQ_D[2]) * q + NQ_D[3]) * q + 1.0)
}

/// Standard normal quantile Φ⁻¹(u): rational approximation (~1e-9 accurate)
/// refined by one Newton step on Φ, which leaves the error below 1e-12
/// everywhere in (0, 1) — in practice a few ulp.
///
/// The refinement always runs on the lower half and reflects: there
/// `Φ(x) − u` is a difference of like-scaled small quantities with full
/// relative accuracy, whereas in the upper tail both terms are ≈ 1 and the
/// cancellation would cap the Newton step's accuracy near 1e-8. The
/// reflection uses `1 − u`, which is exact for `u ≥ 0.5`.
///
/// # Panics
/// Panics if `u` is not strictly inside (0, 1); callers with untrusted input
/// go through [`Density1D::quantile`], which checks first.
pub fn normal_quantile(u: f64) -> f64 {
    assert!(u > 0.0 && u < 1.0, "normal quantile requires u in (0,1)");
    if u > 0.5 {
        -normal_quantile_lower(1.0 - u)
    } else {
        normal_quantile_lower(u)
    }
}

/// Quantile on the lower half, `p ∈ (0, 0.5]`, where `x ≤ 0`.
fn normal_quantile_lower(p: f64) -> f64 {
    let x = if p < NQ_TAIL_SPLIT {
        normal_quantile_tail(p)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((NQ_A[0] * r + NQ_A[1]) * r + NQ_A[2]) * r + NQ_A[3]) * r + NQ_A[4]) * r
            + NQ_A[5])
            * q
            / (((((NQ_B[0] * r + NQ_B[1]) * r + NQ_B[2]) * r + NQ_B[3]) * r + NQ_B[4]) * r
                + 1.0)
    };
    let pdf = normal_pdf(x);
    if pdf > 0.0 {
        x - (normal_cdf(x) - p) / pdf
    } else {
        x
    }
}

// --- Grid densities ---------------------------------------------------------

/// Tabulated density on a strictly increasing grid.
///
/// The density values are normalized to unit trapezoid mass at construction
/// and the running trapezoid integral becomes the cumulative table used for
/// quantile inversion. The last cumulative entry is snapped from `1 ± few
/// ulp` to exactly 1 so that every `u` in (0, 1) lands inside a segment —
/// a rounding normalization, not a data clamp.
#[derive(Clone, Debug)]
pub struct GridDensity {
    xs: Vec<f64>,
    pdf: Vec<f64>,
    cdf: Vec<f64>,
}

impl GridDensity {
    /// Validates and normalizes a tabulated density.
    ///
    /// # Errors
    /// [`Error::InvalidArgument`] for mismatched lengths, fewer than two
    /// points, non-finite entries, non-increasing abscissae, negative
    /// density values, or zero total mass.
    pub fn new(xs: Vec<f64>, pdf: Vec<f64>) -> Result<Self> {
        if xs.len() != pdf.len() {
            return Err(Error::InvalidArgument(
                "grid and density tables must have equal length",
            ));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidArgument("grid needs at least two points"));
        }
        if xs.iter().chain(pdf.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("grid tables must be finite"));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "grid abscissae must be strictly increasing",
            ));
        }
        if pdf.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidArgument("density values must be nonnegative"));
        }
        let mut cdf = Vec::with_capacity(xs.len());
        cdf.push(0.0);
        let mut running = 0.0;
        for i in 1..xs.len() {
            running += 0.5 * (pdf[i] + pdf[i - 1]) * (xs[i] - xs[i - 1]);
            cdf.push(running);
        }
        if !(running > 0.0) || !running.is_finite() {
            return Err(Error::InvalidArgument(
                "density must have positive finite total mass",
            ));
        }
        let pdf = pdf.iter().map(|p| p / running).collect();
        for c in &mut cdf {
            *c /= running;
        }
        let last = cdf.len() - 1;
        cdf[last] = 1.0;
        Ok(GridDensity { xs, pdf, cdf })
    }

    /// Parses the two-column text format: `x density` per line, whitespace
    /// separated, with `#` starting a comment and blank lines ignored.
    ///
    /// # Errors
    /// [`Error::Parse`] with a 1-based line number for malformed lines;
    /// [`Error::InvalidArgument`] if the parsed table itself is invalid.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut pdf = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut parts = content.split_whitespace();
            let (a, b, extra) = (parts.next(), parts.next(), parts.next());
            let (a, b) = match (a, b, extra) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        line,
                        reason: format!("expected two columns (x, density): '{content}'"),
                    });
                }
            };
            xs.push(parse_number(a, line)?);
            pdf.push(parse_number(b, line)?);
        }
        GridDensity::new(xs, pdf)
    }

    /// Grid abscissae.
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    /// Normalized density values on the grid.
    pub fn pdf(&self) -> &[f64] {
        &self.pdf
    }

    /// Density at `x` by linear interpolation; zero outside the grid.
    pub fn pdf_at(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if !(x >= self.xs[0] && x <= self.xs[n - 1]) {
            return 0.0;
        }
        let i = self.xs.partition_point(|&g| g < x).clamp(1, n - 1);
        let w = (x - self.xs[i - 1]) / (self.xs[i] - self.xs[i - 1]);
        self.pdf[i - 1] + w * (self.pdf[i] - self.pdf[i - 1])
    }

    /// Distribution function at `x`, interpolated linearly from the
    /// cumulative table (the same piecewise-linear model the quantile
    /// inversion uses, so `quantile(cdf_at(x)) = x` on positive cells).
    pub fn cdf_at(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return 0.0;
        }
        if x >= self.xs[n - 1] {
            return 1.0;
        }
        let i = self.xs.partition_point(|&g| g < x).clamp(1, n - 1);
        let w = (x - self.xs[i - 1]) / (self.xs[i] - self.xs[i - 1]);
        self.cdf[i - 1] + w * (self.cdf[i] - self.cdf[i - 1])
    }

    /// Index `i` of the cumulative segment `[cdf[i-1], cdf[i]]` containing
    /// `u`. The search always lands on a positive-mass segment
    /// (`cdf[i-1] < u ≤ cdf[i]`), but when `u` sits exactly on a cumulative
    /// value that the *following* zero-mass segment repeats, the preimage is
    /// a whole interval and inversion must refuse.
    fn segment_for(&self, u: f64) -> Result<usize> {
        check_unit(u)?;
        let i = self.cdf.partition_point(|&c| c < u);
        // cdf[0] = 0 < u < 1 = cdf[last], so 1 ≤ i ≤ last.
        if self.cdf[i] == u && i + 1 < self.cdf.len() && self.cdf[i + 1] == u {
            return Err(Error::DegenerateQuantile { u });
        }
        Ok(i)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        let i = self.segment_for(u)?;
        let w = (u - self.cdf[i - 1]) / (self.cdf[i] - self.cdf[i - 1]);
        Ok(self.xs[i - 1] + w * (self.xs[i] - self.xs[i - 1]))
    }

    fn quantile_derivative(&self, u: f64) -> Result<f64> {
        let i = self.segment_for(u)?;
        let w = (u - self.cdf[i - 1]) / (self.cdf[i] - self.cdf[i - 1]);
        let p = self.pdf[i - 1] + w * (self.pdf[i] - self.pdf[i - 1]);
        if !(p > 0.0) {
            return Err(Error::DegenerateQuantile { u });
        }
        Ok(1.0 / p)
    }
}

fn parse_number(token: &str, line: usize) -> Result<f64> {
    token.parse::<f64>().map_err(|_| Error::Parse {
        line,
        reason: format!("cannot parse '{token}' as a number"),
    })
}

/// Parses the sample file format: one real per line, `#` comments and blank
/// lines ignored.
///
/// # Errors
/// [`Error::Parse`] with a 1-based line number for malformed lines.
pub fn parse_samples(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.split_whitespace().count() != 1 {
            return Err(Error::Parse {
                line,
                reason: format!("expected a single number per line: '{content}'"),
            });
        }
        out.push(parse_number(content, line)?);
    }
    Ok(out)
}

// --- Density1D ---------------------------------------------------------------

/// How a density's quantile function is realized, in decreasing order of
/// smoothness. Interpolants inherit the coarsest tag of their parents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DensityKind {
    /// Closed-form quantiles (Gaussian, uniform, and their blends).
    Analytic,
    /// Quantiles inverted from a tabulated cumulative.
    Grid,
    /// Quantiles interpolated from sorted samples.
    Empirical,
}

#[derive(Clone, Debug)]
enum Repr {
    Gaussian { mean: f64, std: f64 },
    Uniform { a: f64, b: f64 },
    Grid(GridDensity),
    Empirical { sorted: Vec<f64> },
    Blend { t: f64, p: Box<Density1D>, q: Box<Density1D> },
}

/// One-dimensional probability density evaluated through its quantile
/// function and quantile derivative — the coordinates every transport
/// divergence integrates over.
#[derive(Clone, Debug)]
pub struct Density1D {
    repr: Repr,
}

/// Gaussian density with the given mean and variance.
///
/// The quantile is `mean + √variance · Φ⁻¹(u)` and the quantile derivative
/// `√variance / φ(Φ⁻¹(u))`.
///
/// # Errors
/// [`Error::InvalidArgument`] unless the mean is finite and the variance is
/// positive and finite.
pub fn gaussian1d(mean: f64, variance: f64) -> Result<Density1D> {
    if !mean.is_finite() || !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::InvalidArgument(
            "gaussian needs a finite mean and a positive finite variance",
        ));
    }
    Ok(Density1D {
        repr: Repr::Gaussian {
            mean,
            std: libm::sqrt(variance),
        },
    })
}

/// Uniform density on `(a, b)`: quantile `a + (b−a)u`, constant derivative.
///
/// # Errors
/// [`Error::InvalidArgument`] unless `a < b` and both are finite.
pub fn uniform1d(a: f64, b: f64) -> Result<Density1D> {
    if !a.is_finite() || !b.is_finite() || !(a < b) {
        return Err(Error::InvalidArgument(
            "uniform interval requires finite endpoints with a < b",
        ));
    }
    Ok(Density1D {
        repr: Repr::Uniform { a, b },
    })
}

/// Wraps a tabulated density; quantiles come from inverting its cumulative
/// table.
pub fn from_grid(grid: GridDensity) -> Density1D {
    Density1D {
        repr: Repr::Grid(grid),
    }
}

/// Empirical density from samples.
///
/// The quantile linearly interpolates the sorted samples placed at plotting
/// positions `u_k = (k − ½)/n` and is constant beyond the outermost
/// positions. The quantile derivative is the central-difference limit of
/// that interpolant: the segment slope between knots, the average of the two
/// adjacent slopes at a knot. Beyond the outermost positions the derivative
/// continues the terminal segment's slope (the one-sided limit) — the flat
/// value extension would report a zero derivative there and poison every
/// ratio integrand built on top.
///
/// # Errors
/// [`Error::InvalidArgument`] for non-finite samples or fewer than two
/// distinct values.
pub fn from_samples(samples: &[f64]) -> Result<Density1D> {
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("samples must be finite"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite samples compare"));
    if sorted.len() < 2 || sorted[sorted.len() - 1] <= sorted[0] {
        return Err(Error::InvalidArgument(
            "need at least two distinct samples",
        ));
    }
    Ok(Density1D {
        repr: Repr::Empirical { sorted },
    })
}

/// Displacement interpolation: the density whose quantile is the pointwise
/// convex combination `t·Q_p + (1−t)·Q_q` — the constant-speed Wasserstein
/// geodesic from `q` (at `t = 0`) to `p` (at `t = 1`), not a mixture.
///
/// # Errors
/// [`Error::InvalidArgument`] if `t` is outside `[0, 1]`.
pub fn displacement_interpolate(p: &Density1D, q: &Density1D, t: f64) -> Result<Density1D> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(
            "interpolation weight must lie in [0, 1]",
        ));
    }
    if t == 0.0 {
        return Ok(q.clone());
    }
    if t == 1.0 {
        return Ok(p.clone());
    }
    Ok(Density1D {
        repr: Repr::Blend {
            t,
            p: Box::new(p.clone()),
            q: Box::new(q.clone()),
        },
    })
}

fn check_unit(u: f64) -> Result<()> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::OutOfDomain {
            value: u,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

fn empirical_quantile(sorted: &[f64], u: f64) -> f64 {
    let n = sorted.len();
    let pos = u * n as f64 - 0.5;
    if pos <= 0.0 {
        return sorted[0];
    }
    if pos >= (n - 1) as f64 {
        return sorted[n - 1];
    }
    let k = pos as usize;
    sorted[k] + (pos - k as f64) * (sorted[k + 1] - sorted[k])
}

fn empirical_derivative(sorted: &[f64], u: f64) -> Result<f64> {
    let n = sorted.len();
    let nf = n as f64;
    let slope = |k: usize| (sorted[k + 1] - sorted[k]) * nf;
    let pos = u * nf - 0.5;
    let value = if pos <= 0.0 {
        slope(0)
    } else if pos >= (n - 1) as f64 {
        slope(n - 2)
    } else {
        let k = pos as usize;
        if pos == k as f64 && k > 0 {
            0.5 * (slope(k - 1) + slope(k))
        } else {
            slope(k)
        }
    };
    if !(value > 0.0) {
        return Err(Error::DegenerateMap {
            u,
            derivative: value,
        });
    }
    Ok(value)
}

/// Mixes two support endpoints, keeping infinities absorbing. The weights
/// are strictly positive here, so `t·∞` never degenerates into `0·∞`.
fn mix_support(t: f64, a: f64, b: f64) -> f64 {
    if a.is_infinite() {
        a
    } else if b.is_infinite() {
        b
    } else {
        t * a + (1.0 - t) * b
    }
}

impl Density1D {
    /// Quantile function `Q(u) = F⁻¹(u)` on the open unit interval.
    ///
    /// # Errors
    /// [`Error::OutOfDomain`] for `u` outside (0, 1);
    /// [`Error::DegenerateQuantile`] if `u` hits a zero-density plateau of a
    /// grid density.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        match &self.repr {
            Repr::Gaussian { mean, std } => {
                check_unit(u)?;
                Ok(mean + std * normal_quantile(u))
            }
            Repr::Uniform { a, b } => {
                check_unit(u)?;
                Ok(a + (b - a) * u)
            }
            Repr::Grid(g) => g.quantile(u),
            Repr::Empirical { sorted } => {
                check_unit(u)?;
                Ok(empirical_quantile(sorted, u))
            }
            Repr::Blend { t, p, q } => Ok(t * p.quantile(u)? + (1.0 - t) * q.quantile(u)?),
        }
    }

    /// Quantile derivative `dQ/du`, strictly positive wherever defined.
    ///
    /// # Errors
    /// [`Error::OutOfDomain`] for `u` outside (0, 1);
    /// [`Error::DegenerateQuantile`] on zero-density grid cells;
    /// [`Error::DegenerateMap`] where tied samples flatten an empirical
    /// quantile segment.
    pub fn quantile_derivative(&self, u: f64) -> Result<f64> {
        match &self.repr {
            Repr::Gaussian { std, .. } => {
                check_unit(u)?;
                Ok(std / normal_pdf(normal_quantile(u)))
            }
            Repr::Uniform { a, b } => {
                check_unit(u)?;
                Ok(b - a)
            }
            Repr::Grid(g) => g.quantile_derivative(u),
            Repr::Empirical { sorted } => {
                check_unit(u)?;
                empirical_derivative(sorted, u)
            }
            Repr::Blend { t, p, q } => {
                Ok(t * p.quantile_derivative(u)? + (1.0 - t) * q.quantile_derivative(u)?)
            }
        }
    }

    /// Support interval; endpoints may be infinite.
    pub fn support(&self) -> (f64, f64) {
        match &self.repr {
            Repr::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Repr::Uniform { a, b } => (*a, *b),
            Repr::Grid(g) => (g.xs[0], g.xs[g.xs.len() - 1]),
            Repr::Empirical { sorted } => (sorted[0], sorted[sorted.len() - 1]),
            Repr::Blend { t, p, q } => {
                let (plo, phi) = p.support();
                let (qlo, qhi) = q.support();
                (mix_support(*t, plo, qlo), mix_support(*t, phi, qhi))
            }
        }
    }

    /// Provenance tag; blends inherit the coarsest tag of their parents.
    pub fn kind(&self) -> DensityKind {
        match &self.repr {
            Repr::Gaussian { .. } | Repr::Uniform { .. } => DensityKind::Analytic,
            Repr::Grid(_) => DensityKind::Grid,
            Repr::Empirical { .. } => DensityKind::Empirical,
            Repr::Blend { p, q, .. } => p.kind().max(q.kind()),
        }
    }

    /// The tabulated density behind a grid-backed instance, if any.
    pub fn as_grid(&self) -> Option<&GridDensity> {
        match &self.repr {
            Repr::Grid(g) => Some(g),
            _ => None,
        }
    }
}
