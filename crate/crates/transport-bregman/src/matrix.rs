//! Small dense matrices and the shared symmetric eigendecomposition.
//!
//! The Gaussian closed forms need only a handful of matrix functions — square
//! root, inverse square root, inverse, determinant — and every one of them is
//! a spectral map `Q·f(Λ)·Qᵀ` of a symmetric positive-definite input. This
//! module therefore centers on one cyclic-Jacobi eigendecomposition and
//! derives the rest from it. For the dimensions in scope (covariances with a
//! handful of coordinates) Jacobi converges to machine precision in a few
//! sweeps, and a direct spectral map is far easier to audit than an iterative
//! Newton–Schulz square root, whose failure modes would be invisible inside a
//! divergence value.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense row-major square matrix.
///
/// The crate only ever needs square `f64` matrices of small dimension, so a
/// single concrete type keeps signatures plain. Construction validates shape,
/// and arithmetic validates dimension agreement, reporting
/// [`Error::DimensionMismatch`] rather than silently truncating.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    dim: usize,
    data: Vec<f64>,
}

impl Mat {
    /// Zero matrix of dimension `dim`.
    ///
    /// # Panics
    /// Panics if `dim == 0`; a zero-dimensional matrix is always a
    /// programming error here, not a data condition.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Mat {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// Identity matrix of dimension `dim`.
    ///
    /// # Panics
    /// Panics if `dim == 0`.
    pub fn identity(dim: usize) -> Self {
        let mut m = Mat::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Diagonal matrix with the given entries.
    ///
    /// # Panics
    /// Panics if `entries` is empty.
    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Mat::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds a matrix from row-major data.
    ///
    /// # Errors
    /// [`Error::InvalidArgument`] if `dim == 0` or `data.len() != dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be positive"));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidArgument(
                "row-major data length must equal dim * dim",
            ));
        }
        Ok(Mat { dim, data })
    }

    /// Dimension of the (always square) matrix.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Entry at row `i`, column `j`.
    ///
    /// # Panics
    /// Panics if an index is out of range.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim && j < self.dim, "matrix index out of range");
        self.data[i * self.dim + j]
    }

    /// Sets the entry at row `i`, column `j`.
    ///
    /// # Panics
    /// Panics if an index is out of range.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i < self.dim && j < self.dim, "matrix index out of range");
        self.data[i * self.dim + j] = value;
    }

    /// Elementwise sum.
    ///
    /// # Errors
    /// [`Error::DimensionMismatch`] if dimensions differ.
    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Mat {
            dim: self.dim,
            data,
        })
    }

    /// Elementwise difference.
    ///
    /// # Errors
    /// [`Error::DimensionMismatch`] if dimensions differ.
    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Mat {
            dim: self.dim,
            data,
        })
    }

    /// Scales every entry by `factor`.
    pub fn scale(&self, factor: f64) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    /// Matrix product `self · other`.
    ///
    /// # Errors
    /// [`Error::DimensionMismatch`] if dimensions differ.
    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        self.check_dim(other)?;
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let mut sum = 0.0;
                for k in 0..d {
                    sum += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, sum);
            }
        }
        Ok(out)
    }

    /// Matrix–vector product `self · v`.
    ///
    /// # Errors
    /// [`Error::DimensionMismatch`] if `v.len()` differs from the dimension.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        let mut out = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut sum = 0.0;
            for (j, &vj) in v.iter().enumerate() {
                sum += self.get(i, j) * vj;
            }
            out.push(sum);
        }
        Ok(out)
    }

    /// Transpose.
    pub fn transpose(&self) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Symmetric part `(A + Aᵀ)/2`.
    pub fn symmetrize(&self) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(i, j, 0.5 * (self.get(i, j) + self.get(j, i)));
            }
        }
        out
    }

    /// Sum of the diagonal entries.
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm (root of the sum of squared entries).
    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|a| a * a).sum())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, &a| acc.max(libm::fabs(a)))
    }

    /// True when `|a_ij − a_ji| ≤ tol` for every off-diagonal pair.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if !(libm::fabs(self.get(i, j) - self.get(j, i)) <= tol) {
                    return false;
                }
            }
        }
        true
    }

    fn check_dim(&self, other: &Mat) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

/// Eigendecomposition of a symmetric matrix, `A = Q·diag(values)·Qᵀ`.
#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthogonal matrix whose `k`-th column is the eigenvector of
    /// `values[k]`.
    pub vectors: Mat,
}

/// Upper bound on Jacobi sweeps; cyclic Jacobi converges quadratically and
/// reaches machine precision within ~10 sweeps for any dimension in scope, so
/// hitting this limit indicates non-finite input that slipped past the guard.
const MAX_SWEEPS: usize = 64;

/// Computes the eigendecomposition of a symmetric matrix by cyclic Jacobi
/// rotations.
///
/// The input must be exactly finite and symmetric to within `1e-12` relative
/// to its largest entry. Callers holding nearly-symmetric data (a covariance
/// read from a file, a product that is symmetric only in exact arithmetic)
/// should call [`Mat::symmetrize`] first so the rounding decision is visible
/// at the call site instead of hidden here.
///
/// # Errors
/// [`Error::InvalidArgument`] if the matrix has non-finite entries or is not
/// symmetric.
pub fn sym_eigen(a: &Mat) -> Result<SymEigen> {
    let d = a.dim;
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries"));
    }
    let scale = a.max_abs();
    if !a.is_symmetric(1e-12 * scale.max(1.0)) {
        return Err(Error::InvalidArgument("matrix is not symmetric"));
    }

    let mut m = a.data.clone();
    let mut q = Mat::identity(d).data;
    let id = |i: usize, j: usize| i * d + j;
    // Off-diagonal mass below this level perturbs each eigenvalue by less
    // than one ulp of the matrix scale, which is as converged as f64 gets.
    let thresh = f64::EPSILON * (d as f64) * scale.max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off_sq = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                off_sq += m[id(i, j)] * m[id(i, j)];
            }
        }
        if libm::sqrt(2.0 * off_sq) <= thresh {
            converged = true;
            break;
        }
        for p in 0..d {
            for r in (p + 1)..d {
                let apr = m[id(p, r)];
                if apr == 0.0 {
                    continue;
                }
                let theta = (m[id(r, r)] - m[id(p, p)]) / (2.0 * apr);
                // Smaller-magnitude root of t² + 2tθ − 1 = 0; the asymptotic
                // branch avoids overflowing θ² for extreme diagonal spreads.
                let t = if libm::fabs(theta) > 1e154 {
                    0.5 / theta
                } else {
                    let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apr;
                m[id(p, p)] -= h;
                m[id(r, r)] += h;
                m[id(p, r)] = 0.0;
                m[id(r, p)] = 0.0;
                for k in 0..d {
                    if k == p || k == r {
                        continue;
                    }
                    let akp = m[id(k, p)];
                    let akr = m[id(k, r)];
                    let new_kp = akp - s * (akr + tau * akp);
                    let new_kr = akr + s * (akp - tau * akr);
                    m[id(k, p)] = new_kp;
                    m[id(p, k)] = new_kp;
                    m[id(k, r)] = new_kr;
                    m[id(r, k)] = new_kr;
                }
                for k in 0..d {
                    let qkp = q[id(k, p)];
                    let qkr = q[id(k, r)];
                    q[id(k, p)] = qkp - s * (qkr + tau * qkp);
                    q[id(k, r)] = qkr + s * (qkp - tau * qkr);
                }
            }
        }
    }
    if !converged {
        return Err(Error::InvalidArgument(
            "symmetric eigendecomposition did not converge",
        ));
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_unstable_by(|&i, &j| {
        m[id(i, i)]
            .partial_cmp(&m[id(j, j)])
            .expect("eigenvalues of a finite symmetric matrix are finite")
    });
    let mut values = Vec::with_capacity(d);
    let mut vectors = Mat::zeros(d);
    for (new_col, &old_col) in order.iter().enumerate() {
        values.push(m[id(old_col, old_col)]);
        for k in 0..d {
            vectors.set(k, new_col, q[id(k, old_col)]);
        }
    }
    Ok(SymEigen { values, vectors })
}

/// Spectral calculus on a symmetric positive-definite matrix.
///
/// Positive-definiteness is verified once at construction, which makes every
/// derived matrix function infallible — there is no eigenvalue left that
/// `1/√λ` or `log λ` could blow up on.
#[derive(Clone, Debug)]
pub struct SpdEigen {
    eigen: SymEigen,
}

/// Decomposes a symmetric positive-definite matrix.
///
/// `ratio_bound` is the smallest accepted eigenvalue ratio `λ_min/λ_max`;
/// pass `0.0` to require only strict positivity. Rejecting near-singular
/// input up front keeps conditioning problems at the API boundary, where the
/// offending eigenvalue can be reported, instead of surfacing as quiet noise
/// in a divergence.
///
/// # Errors
/// [`Error::NotSpd`] if the smallest eigenvalue is ≤ 0 or below the ratio
/// bound; [`Error::InvalidArgument`] for non-symmetric or non-finite input.
pub fn spd_eigen(a: &Mat, ratio_bound: f64) -> Result<SpdEigen> {
    let eigen = sym_eigen(a)?;
    let min = eigen.values[0];
    let max = eigen.values[eigen.values.len() - 1];
    if min <= 0.0 || min <= ratio_bound * max {
        return Err(Error::NotSpd {
            eigenvalue: min,
            ratio_bound,
        });
    }
    Ok(SpdEigen { eigen })
}

impl SpdEigen {
    /// Eigenvalues in ascending order (all strictly positive).
    pub fn values(&self) -> &[f64] {
        &self.eigen.values
    }

    /// Applies `f` to the spectrum: returns `Q·diag(f(λ))·Qᵀ`.
    ///
    /// Only the upper triangle is accumulated and then mirrored, so the
    /// result is symmetric to the last bit; accumulating both triangles
    /// independently would let them round apart.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Mat {
        let d = self.eigen.vectors.dim();
        let q = &self.eigen.vectors;
        let fvals: Vec<f64> = self.eigen.values.iter().map(|&l| f(l)).collect();
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for j in i..d {
                let mut sum = 0.0;
                for (k, &fk) in fvals.iter().enumerate() {
                    sum += q.get(i, k) * fk * q.get(j, k);
                }
                out.set(i, j, sum);
                out.set(j, i, sum);
            }
        }
        out
    }

    /// Matrix square root.
    pub fn sqrt(&self) -> Mat {
        self.map(libm::sqrt)
    }

    /// Inverse matrix square root.
    pub fn inv_sqrt(&self) -> Mat {
        self.map(|l| 1.0 / libm::sqrt(l))
    }

    /// Matrix inverse.
    pub fn inverse(&self) -> Mat {
        self.map(|l| 1.0 / l)
    }

    /// Natural logarithm of the determinant, summed over the spectrum. For
    /// badly scaled matrices this stays finite where `log(det)` computed from
    /// the determinant itself would overflow.
    pub fn log_det(&self) -> f64 {
        self.eigen.values.iter().map(|&l| libm::log(l)).sum()
    }

    /// Determinant (product of the eigenvalues).
    pub fn det(&self) -> f64 {
        self.eigen.values.iter().product()
    }
}

/// Symmetric positive-definite matrix square root: the unique SPD `S` with
/// `S·S = A`.
///
/// # Errors
/// [`Error::NotSpd`] if an eigenvalue is ≤ 0; [`Error::InvalidArgument`] for
/// non-symmetric or non-finite input.
pub fn sqrtm_spd(a: &Mat) -> Result<Mat> {
    Ok(spd_eigen(a, 0.0)?.sqrt())
}
