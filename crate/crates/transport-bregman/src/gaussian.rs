//! Transport divergences between multivariate Gaussians in closed form.
//!
//! The optimal transport map between two Gaussians is affine, so the whole
//! divergence family reduces to covariance calculus — matrix square roots,
//! inverse square roots, and determinants through one symmetric
//! eigendecomposition per matrix. The map pushing `Y` onto `X` is
//!
//! ```text
//! T = Σ_X^{1/2} (Σ_X^{1/2} Σ_Y Σ_X^{1/2})^{-1/2} Σ_X^{1/2},
//! ```
//!
//! and the transport Kullback–Leibler divergence is
//! `½·log(det Σ_Y / det Σ_X) + tr T − d`. Translations are transport-free,
//! so means are carried for maps and the Wasserstein distance but leave the
//! transport KL and JS values untouched — that is a property of the
//! divergences, not a restriction on the inputs, and it is tested rather
//! than forbidden.
//!
//! When the covariances commute the formulas collapse to simultaneous
//! diagonal arithmetic; commutation is detected internally (relative
//! commutator below `1e-10`) and taken as a fast path, with tests pinning
//! the two paths together. For one-dimensional inputs everything here must
//! agree with the quadrature route through quantile functions, which is the
//! strongest cross-check the library has.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{spd_eigen, Mat};
use crate::quadrature::CompensatedSum;

pub use crate::matrix::sqrtm_spd;

/// Relative asymmetry accepted (and removed by symmetrization) when a
/// covariance is supplied.
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Conditioning floor: the smallest covariance eigenvalue must exceed this
/// multiple of the largest.
const EIGENVALUE_RATIO_BOUND: f64 = 1e-10;

/// Relative commutator size below which two covariances are treated as
/// simultaneously diagonalizable.
const COMMUTATOR_TOLERANCE: f64 = 1e-10;

/// A nondegenerate Gaussian distribution on ℝᵈ.
#[derive(Clone, Debug)]
pub struct GaussianDensity {
    mean: Vec<f64>,
    covariance: Mat,
}

impl GaussianDensity {
    /// Validates parameters: the covariance must be symmetric to within
    /// `1e-12` of its scale (the symmetric part is what is stored) and
    /// positive definite with an eigenvalue ratio above `1e-10`.
    ///
    /// # Errors
    /// [`Error::DimensionMismatch`] when the mean length and covariance
    /// dimension differ; [`Error::InvalidArgument`] for non-finite
    /// parameters or material asymmetry; [`Error::NotSpd`] for
    /// non-positive-definite or near-singular covariances.
    pub fn new(mean: Vec<f64>, covariance: Mat) -> Result<Self> {
        if mean.len() != covariance.dim() {
            return Err(Error::DimensionMismatch {
                left: mean.len(),
                right: covariance.dim(),
            });
        }
        if mean.iter().any(|m| !m.is_finite())
            || covariance.as_slice().iter().any(|c| !c.is_finite())
        {
            return Err(Error::InvalidArgument(
                "gaussian parameters must be finite",
            ));
        }
        if !covariance.is_symmetric(SYMMETRY_TOLERANCE * covariance.max_abs().max(1.0)) {
            return Err(Error::InvalidArgument(
                "covariance must be symmetric (up to roundoff)",
            ));
        }
        let covariance = covariance.symmetrize();
        spd_eigen(&covariance, EIGENVALUE_RATIO_BOUND)?;
        Ok(GaussianDensity { mean, covariance })
    }

    /// A one-dimensional Gaussian, for cross-checking against the quantile
    /// route.
    ///
    /// # Errors
    /// As for [`GaussianDensity::new`].
    pub fn scalar(mean: f64, variance: f64) -> Result<Self> {
        GaussianDensity::new(alloc::vec![mean], Mat::diag(&[variance]))
    }

    /// Mean vector.
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Covariance matrix (the symmetrized, validated form).
    pub fn covariance(&self) -> &Mat {
        &self.covariance
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// The affine map `x ↦ T·x + shift` transporting one Gaussian onto another.
///
/// `matrix` is symmetric positive definite — it is the Hessian of the convex
/// potential whose gradient realizes the map — and satisfies the pushforward
/// identity `T·Σ_Y·T = Σ_X` up to roundoff when produced by
/// [`ot_map_gaussian`].
#[derive(Clone, Debug)]
pub struct TransportMapGaussian {
    /// Linear part; symmetric positive definite.
    pub matrix: Mat,
    /// Translation part, `mean_X − T·mean_Y`.
    pub shift: Vec<f64>,
}

impl TransportMapGaussian {
    /// Applies the map to a point.
    ///
    /// # Errors
    /// [`Error::DimensionMismatch`] for a point of the wrong length.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.matrix.matvec(x)?;
        for (o, s) in out.iter_mut().zip(&self.shift) {
            *o += s;
        }
        Ok(out)
    }
}

fn check_dims(x: &GaussianDensity, y: &GaussianDensity) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    Ok(())
}

fn commute(a: &Mat, b: &Mat) -> bool {
    let ab = a.matmul(b).expect("dimensions already checked");
    let ba = b.matmul(a).expect("dimensions already checked");
    let commutator = ab.sub(&ba).expect("products share dimensions");
    commutator.frobenius_norm()
        < COMMUTATOR_TOLERANCE * a.frobenius_norm() * b.frobenius_norm()
}

/// The linear part of the map pushing `Y` onto `X`:
/// `T = Σ_X^{1/2} (Σ_X^{1/2} Σ_Y Σ_X^{1/2})^{-1/2} Σ_X^{1/2}`.
fn transport_matrix(x: &GaussianDensity, y: &GaussianDensity) -> Result<Mat> {
    let sx = spd_eigen(x.covariance(), 0.0)?.sqrt();
    let inner = sx.matmul(y.covariance())?.matmul(&sx)?.symmetrize();
    let inner_inv_sqrt = spd_eigen(&inner, 0.0)?.inv_sqrt();
    Ok(sx.matmul(&inner_inv_sqrt)?.matmul(&sx)?.symmetrize())
}

/// Optimal transport map sending `Y` to `X`.
///
/// The linear part is SPD and satisfies `T·Σ_Y·T = Σ_X`; the shift moves the
/// mean of `Y` onto the mean of `X`.
///
/// # Errors
/// [`Error::DimensionMismatch`] for mismatched dimensions; matrix errors if
/// an intermediate product loses positive definiteness to roundoff.
pub fn ot_map_gaussian(
    x: &GaussianDensity,
    y: &GaussianDensity,
) -> Result<TransportMapGaussian> {
    check_dims(x, y)?;
    let matrix = transport_matrix(x, y)?;
    let t_mean_y = matrix.matvec(y.mean())?;
    let shift = x
        .mean()
        .iter()
        .zip(&t_mean_y)
        .map(|(m, t)| m - t)
        .collect();
    Ok(TransportMapGaussian { matrix, shift })
}

fn transport_kl_general(x: &GaussianDensity, y: &GaussianDensity) -> Result<f64> {
    let log_det_x = spd_eigen(x.covariance(), 0.0)?.log_det();
    let log_det_y = spd_eigen(y.covariance(), 0.0)?.log_det();
    let trace = transport_matrix(x, y)?.trace();
    Ok(0.5 * (log_det_y - log_det_x) + trace - x.dim() as f64)
}

fn transport_kl_commuting(x: &GaussianDensity, y: &GaussianDensity) -> Result<f64> {
    let ex = spd_eigen(x.covariance(), 0.0)?;
    let ey = spd_eigen(y.covariance(), 0.0)?;
    let trace = ex.sqrt().matmul(&ey.inv_sqrt())?.trace();
    Ok(0.5 * (ey.log_det() - ex.log_det()) + trace - x.dim() as f64)
}

/// Transport Kullback–Leibler divergence between Gaussians:
/// `½·log(det Σ_Y / det Σ_X) + tr T − d` with `T` the map sending `Y` to
/// `X`.
///
/// Nonnegative, zero exactly when the covariances coincide; means do not
/// enter (translation is transport-free). Commuting covariances take the
/// simultaneous-diagonalization path, which agrees with the general formula
/// to roundoff.
///
/// # Errors
/// [`Error::DimensionMismatch`] for mismatched dimensions.
pub fn transport_kl_gaussian(x: &GaussianDensity, y: &GaussianDensity) -> Result<f64> {
    check_dims(x, y)?;
    if commute(x.covariance(), y.covariance()) {
        transport_kl_commuting(x, y)
    } else {
        transport_kl_general(x, y)
    }
}

/// Covariance of the Wasserstein midpoint of `X` and `Y`:
/// `Σ_Z = ¼·(I + T)·Σ_Y·(I + T)` with `T` the map sending `Y` to `X`.
///
/// This is the covariance of `Y` pushed halfway along the transport to `X`;
/// when the covariances commute its square root is the average of the two
/// square roots.
///
/// # Errors
/// [`Error::DimensionMismatch`] for mismatched dimensions.
pub fn midpoint_covariance(x: &GaussianDensity, y: &GaussianDensity) -> Result<Mat> {
    check_dims(x, y)?;
    let t = transport_matrix(x, y)?;
    let half_step = Mat::identity(x.dim()).add(&t)?;
    Ok(half_step
        .matmul(y.covariance())?
        .matmul(&half_step)?
        .symmetrize()
        .scale(0.25))
}

/// Transport Jensen–Shannon divergence between Gaussians:
/// `½·TKL(X‖Z) + ½·TKL(Y‖Z)` where `Z` carries the midpoint mean and the
/// Wasserstein midpoint covariance.
///
/// Symmetric in its arguments and bounded; for commuting covariances it
/// collapses to
/// `−½·log( det(Σ_X^{1/2})·det(Σ_Y^{1/2}) / det(¼·(Σ_X^{1/2}+Σ_Y^{1/2})²) )`.
///
/// # Errors
/// [`Error::DimensionMismatch`] for mismatched dimensions; [`Error::NotSpd`]
/// if the midpoint covariance degenerates numerically.
pub fn transport_js_gaussian(x: &GaussianDensity, y: &GaussianDensity) -> Result<f64> {
    check_dims(x, y)?;
    let mid_mean = x
        .mean()
        .iter()
        .zip(y.mean())
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let z = GaussianDensity::new(mid_mean, midpoint_covariance(x, y)?)?;
    Ok(0.5 * transport_kl_gaussian(x, &z)? + 0.5 * transport_kl_gaussian(y, &z)?)
}

/// Classical (density-space) Kullback–Leibler divergence between Gaussians:
///
/// ```text
/// ½·[ log(det Σ_Y / det Σ_X) − d + tr(Σ_Y⁻¹ Σ_X)
///     + (μ_X − μ_Y)ᵀ Σ_Y⁻¹ (μ_X − μ_Y) ]
/// ```
///
/// Unlike the transport divergences, this one *does* see the means.
///
/// # Errors
/// [`Error::DimensionMismatch`] for mismatched dimensions.
pub fn classical_kl_gaussian(x: &GaussianDensity, y: &GaussianDensity) -> Result<f64> {
    check_dims(x, y)?;
    let ex = spd_eigen(x.covariance(), 0.0)?;
    let ey = spd_eigen(y.covariance(), 0.0)?;
    let y_inv = ey.inverse();
    let trace = y_inv.matmul(x.covariance())?.trace();
    let delta: Vec<f64> = x
        .mean()
        .iter()
        .zip(y.mean())
        .map(|(a, b)| a - b)
        .collect();
    let weighted = y_inv.matvec(&delta)?;
    let mut quad = CompensatedSum::default();
    for (d, w) in delta.iter().zip(&weighted) {
        quad.add(d * w);
    }
    Ok(0.5 * (ey.log_det() - ex.log_det() - x.dim() as f64 + trace + quad.value()))
}

/// Squared 2-Wasserstein distance between Gaussians (Bures form):
/// `‖μ_X − μ_Y‖² + tr Σ_X + tr Σ_Y − 2·tr( (Σ_X^{1/2} Σ_Y Σ_X^{1/2})^{1/2} )`.
///
/// # Errors
/// [`Error::DimensionMismatch`] for mismatched dimensions.
pub fn wasserstein2_gaussian(x: &GaussianDensity, y: &GaussianDensity) -> Result<f64> {
    check_dims(x, y)?;
    let sx = spd_eigen(x.covariance(), 0.0)?.sqrt();
    let inner = sx.matmul(y.covariance())?.matmul(&sx)?.symmetrize();
    let cross = spd_eigen(&inner, 0.0)?.sqrt().trace();
    let mut mean_gap = CompensatedSum::default();
    for (a, b) in x.mean().iter().zip(y.mean()) {
        mean_gap.add((a - b) * (a - b));
    }
    Ok(mean_gap.value() + x.covariance().trace() + y.covariance().trace() - 2.0 * cross)
}
