//! One-dimensional transport divergences in closed form.
//!
//! On the line, the optimal transport map between two densities is the
//! monotone rearrangement `Q_p ∘ F_q`, so geometry in Wasserstein space
//! collapses to pointwise algebra in quantile coordinates. Every divergence
//! here is a unit-interval integral (or a unit-square double integral) of a
//! scalar Bregman expression:
//!
//! * **linear** potentials compare quantile *values*,
//! * **interaction** potentials compare quantile *differences*,
//! * **entropy** potentials compare quantile *derivatives*.
//!
//! The transport Kullback–Leibler divergence is the entropy case for
//! `U(z) = z·log z`, which lands on the Itakura–Saito formula
//! `∫ (r − log r − 1) du` with `r = Q_p′/Q_q′`; the transport
//! Jensen–Shannon divergence symmetrizes it through the displacement
//! midpoint. Classical (non-transport) KL and JS on a shared grid are kept
//! alongside for comparison, since contrasting the two families is the whole
//! point of computing them.

use alloc::vec::Vec;

use crate::bregman::{bregman, ScalarPotential};
use crate::density::{from_grid, Density1D, GridDensity};
use crate::error::{Error, Result};
use crate::quadrature::{axis_nodes, integrate_unit, wrap_at_node, CompensatedSum, QuadratureConfig};

/// Half-width of the band `|u − v| < clip` excluded from interaction double
/// integrals when the kernel has no value at zero separation.
pub const DEFAULT_DIAGONAL_CLIP: f64 = 1e-4;

/// Outcome of a quadrature-backed divergence evaluation.
///
/// `value` is always finite — non-finite integrand values abort with an
/// error instead of leaking through the sum. The bookkeeping fields record
/// what the rule actually did: `nodes_used` counts integrand evaluations
/// (cells, for double integrals) and `clip_used` echoes the tail clip of the
/// configuration that produced the value, so results stay reproducible when
/// configurations are swept.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivergenceResult {
    /// The divergence value.
    pub value: f64,
    /// Number of integrand evaluations behind the value.
    pub nodes_used: usize,
    /// Tail clip of the configuration used.
    pub clip_used: f64,
}

fn quadrature_result<F>(cfg: &QuadratureConfig, f: F) -> Result<DivergenceResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (value, nodes_used) = integrate_unit(cfg, f)?;
    Ok(DivergenceResult {
        value,
        nodes_used,
        clip_used: cfg.clip,
    })
}

// --- Entropy potentials --------------------------------------------------------

/// A convex generator `U` on the positive half-line together with its induced
/// kernel `Ũ(z) = z·U(1/z)`.
///
/// Entropy-type transport divergences do not apply `U` directly: the change
/// of variables from densities to quantile derivatives turns `U` into the
/// perspective-like transform `Ũ`, and the divergence becomes the Bregman
/// divergence of `Ũ` between quantile derivatives. Differentiating the
/// product gives
///
/// ```text
/// Ũ′(z) = U(1/z) − (1/z)·U′(1/z),      Ũ″(z) = U″(1/z)/z³,
/// ```
///
/// so convexity of `U` on the positives is inherited by `Ũ`, and the
/// transform is an involution: applying it twice returns `U`.
///
/// The wrapper implements [`ScalarPotential`] **as the kernel `Ũ`**, on the
/// domain `{ z > 0 : 1/z ∈ dom U }`; pass it to [`entropy_divergence`] or use
/// it anywhere a potential is expected.
#[derive(Clone, Copy, Debug)]
pub struct EntropyPotential<U: ScalarPotential> {
    u: U,
    tilde_domain: (f64, f64),
}

impl<U: ScalarPotential> EntropyPotential<U> {
    /// Wraps a generator, deriving the kernel's domain.
    ///
    /// # Errors
    /// [`Error::InvalidArgument`] if the generator's domain does not reach
    /// into the positive half-line, where quantile derivatives live.
    pub fn new(u: U) -> Result<Self> {
        let (lo, hi) = u.domain();
        if !(hi > 0.0) {
            return Err(Error::InvalidArgument(
                "entropy generator must be defined somewhere on the positive half-line",
            ));
        }
        // z > 0 with 1/z ∈ (lo, hi): the reciprocal flips and swaps the
        // endpoints; 1/∞ = 0 and 1/0⁺ = ∞ are exactly the IEEE conventions.
        let zlo = if hi.is_infinite() { 0.0 } else { 1.0 / hi };
        let zhi = if lo > 0.0 { 1.0 / lo } else { f64::INFINITY };
        Ok(EntropyPotential {
            u,
            tilde_domain: (zlo, zhi),
        })
    }

    /// The wrapped generator.
    pub fn generator(&self) -> &U {
        &self.u
    }
}

impl<U: ScalarPotential> ScalarPotential for EntropyPotential<U> {
    fn value(&self, z: f64) -> f64 {
        z * self.u.value(1.0 / z)
    }

    fn derivative(&self, z: f64) -> f64 {
        let r = 1.0 / z;
        self.u.value(r) - r * self.u.derivative(r)
    }

    fn domain(&self) -> (f64, f64) {
        self.tilde_domain
    }

    fn strict_convexity_witness(&self) -> bool {
        // Ũ″(z) = U″(1/z)/z³ with z > 0: strictness transfers verbatim.
        self.u.strict_convexity_witness()
    }
}

// --- Quantile-coordinate divergences -------------------------------------------

/// Squared 2-Wasserstein distance `∫₀¹ (Q_p(u) − Q_q(u))² du`.
///
/// # Errors
/// Quantile evaluation failures (degenerate grids) and quadrature errors.
pub fn wasserstein2_1d(
    p: &Density1D,
    q: &Density1D,
    cfg: &QuadratureConfig,
) -> Result<DivergenceResult> {
    quadrature_result(cfg, |u| {
        let d = p.quantile(u)? - q.quantile(u)?;
        Ok(d * d)
    })
}

/// Linear-energy transport divergence `∫₀¹ D_V(Q_p(u) ‖ Q_q(u)) du`.
///
/// The potential acts on quantile *values*; with `V(z) = z²` this is exactly
/// the squared Wasserstein distance. A potential on a restricted domain
/// (e.g. `−log z`) rejects densities whose quantiles leave it.
///
/// # Errors
/// [`Error::DomainAtNode`] when a quantile exits the potential's domain,
/// plus quantile and quadrature failures.
pub fn linear_energy_divergence<V: ScalarPotential + ?Sized>(
    potential: &V,
    p: &Density1D,
    q: &Density1D,
    cfg: &QuadratureConfig,
) -> Result<DivergenceResult> {
    quadrature_result(cfg, |u| bregman(potential, p.quantile(u)?, q.quantile(u)?))
}

/// Interaction-energy transport divergence
/// `½ ∫₀¹∫₀¹ D_W(Q_p(u) − Q_p(v) ‖ Q_q(u) − Q_q(v)) du dv`
/// with the default diagonal clip; see
/// [`interaction_energy_divergence_with_diagonal_clip`].
///
/// # Errors
/// As for the explicit-clip variant.
pub fn interaction_energy_divergence<W: ScalarPotential + ?Sized>(
    kernel: &W,
    p: &Density1D,
    q: &Density1D,
    cfg: &QuadratureConfig,
) -> Result<DivergenceResult> {
    interaction_energy_divergence_with_diagonal_clip(kernel, p, q, cfg, DEFAULT_DIAGONAL_CLIP)
}

/// Interaction-energy transport divergence with an explicit diagonal clip.
///
/// `kernel` is the *difference* kernel: the pair interaction between points
/// at `x` and `x̃` is `W(x − x̃)`, assumed even. Because quantiles are
/// monotone, both differences share a sign for any `(u, v)`, and evenness
/// makes the `(u, v)` and `(v, u)` contributions equal; the rule therefore
/// sums each unordered pair once over the graded tensor grid, which exactly
/// absorbs the ½ prefactor.
///
/// Kernels whose domain excludes zero separation (e.g. `−log z`) cannot be
/// evaluated at the diagonal `u = v`, so no evaluation uses a separation
/// below `diagonal_clip`: off-diagonal cells with `|u − v| < diagonal_clip`
/// are dropped (they carry negligible weight), and each diagonal cell —
/// which carries the weight-mass of the band the rule cannot subdivide — is
/// reinstated at its continuity limit, represented by the quantile
/// differences across `[u − clip/2, u + clip/2]`. With a zero clip the
/// diagonal cells of such kernels are simply omitted. Kernels defined at
/// zero separation ignore the clip entirely: their diagonal contributes
/// `D(0‖0) = 0` exactly.
///
/// # Errors
/// [`Error::InvalidArgument`] for a clip outside `[0, 0.5)`;
/// [`Error::DomainAtNode`] when a difference exits the kernel's domain
/// (e.g. tied quantile values under a positive-domain kernel); quantile and
/// quadrature failures.
pub fn interaction_energy_divergence_with_diagonal_clip<W: ScalarPotential + ?Sized>(
    kernel: &W,
    p: &Density1D,
    q: &Density1D,
    cfg: &QuadratureConfig,
    diagonal_clip: f64,
) -> Result<DivergenceResult> {
    if !(0.0..0.5).contains(&diagonal_clip) {
        return Err(Error::InvalidArgument(
            "diagonal clip must lie in [0, 0.5)",
        ));
    }
    let nodes = axis_nodes(cfg)?;
    let qp = nodes
        .iter()
        .map(|&(u, _)| p.quantile(u))
        .collect::<Result<Vec<f64>>>()?;
    let qq = nodes
        .iter()
        .map(|&(u, _)| q.quantile(u))
        .collect::<Result<Vec<f64>>>()?;
    let clipped_diagonal = kernel.domain().0 >= 0.0;
    let mut acc = CompensatedSum::default();
    let mut cells = 0usize;
    for i in 0..nodes.len() {
        let (ui, wi) = nodes[i];
        for j in 0..i {
            let (uj, wj) = nodes[j];
            if clipped_diagonal && ui - uj < diagonal_clip {
                continue;
            }
            let value = bregman(kernel, qp[i] - qp[j], qq[i] - qq[j])
                .map_err(|e| wrap_at_node(ui, e))?;
            if !value.is_finite() {
                return Err(Error::NonFiniteIntegrand { node: ui });
            }
            acc.add(wi * wj * value);
            cells += 1;
        }
        // The diagonal cell. For kernels defined at zero separation it
        // contributes D(0‖0) = 0 exactly. Otherwise the integrand still has
        // a finite limit along the diagonal, and the cell carries half the
        // squared node weight of the symmetrized rule; represent the limit
        // by the differences across a clip-wide window, skipping the tail
        // nodes where the window would leave the unit interval (their
        // squared weights are negligible).
        if clipped_diagonal && diagonal_clip > 0.0 {
            let half = 0.5 * diagonal_clip;
            if ui > half && ui + half < 1.0 {
                let dp = p.quantile(ui + half)? - p.quantile(ui - half)?;
                let dq = q.quantile(ui + half)? - q.quantile(ui - half)?;
                let value = bregman(kernel, dp, dq).map_err(|e| wrap_at_node(ui, e))?;
                if !value.is_finite() {
                    return Err(Error::NonFiniteIntegrand { node: ui });
                }
                acc.add(0.5 * wi * wi * value);
                cells += 1;
            }
        }
    }
    Ok(DivergenceResult {
        value: acc.value(),
        nodes_used: cells,
        clip_used: cfg.clip,
    })
}

/// Entropy-energy transport divergence
/// `∫₀¹ D_Ũ(Q_p′(u) ‖ Q_q′(u)) du` for the kernel `Ũ` induced by the
/// generator wrapped in `potential`.
///
/// # Errors
/// [`Error::DomainAtNode`] when a quantile derivative exits the kernel's
/// domain, plus quantile-derivative and quadrature failures.
pub fn entropy_divergence<U: ScalarPotential>(
    potential: &EntropyPotential<U>,
    p: &Density1D,
    q: &Density1D,
    cfg: &QuadratureConfig,
) -> Result<DivergenceResult> {
    quadrature_result(cfg, |u| {
        bregman(
            potential,
            p.quantile_derivative(u)?,
            q.quantile_derivative(u)?,
        )
    })
}

/// Transport Kullback–Leibler divergence
/// `∫₀¹ (r − log r − 1) du` with `r = Q_p′(u)/Q_q′(u)`.
///
/// This is [`entropy_divergence`] specialized to the generator
/// `U(z) = z·log z`, whose kernel is `Ũ(z) = −log z`; the Bregman divergence
/// of `−log` is the Itakura–Saito form written out here. Quantile
/// derivatives are positive wherever they exist, so `r` needs no domain
/// check of its own.
///
/// # Errors
/// Quantile-derivative and quadrature failures.
pub fn transport_kl_1d(
    p: &Density1D,
    q: &Density1D,
    cfg: &QuadratureConfig,
) -> Result<DivergenceResult> {
    quadrature_result(cfg, |u| {
        let r = p.quantile_derivative(u)? / q.quantile_derivative(u)?;
        Ok(r - libm::log(r) - 1.0)
    })
}

/// Transport Jensen–Shannon divergence
/// `−½ ∫₀¹ log[ Q_p′ Q_q′ / (¼ (Q_p′ + Q_q′)²) ] du`.
///
/// The integrand is the pointwise identity
/// `½ D_IS(a‖m) + ½ D_IS(b‖m)` at the midpoint `m = (a + b)/2` — the linear
/// terms of the two Itakura–Saito halves cancel — so the value equals the
/// assembly `½·TKL(p‖r) + ½·TKL(q‖r)` with `r` the displacement midpoint of
/// `p` and `q`. Nonnegativity is the AM–GM inequality; symmetry is visible
/// in the formula.
///
/// # Errors
/// Quantile-derivative and quadrature failures.
pub fn transport_js_1d(
    p: &Density1D,
    q: &Density1D,
    cfg: &QuadratureConfig,
) -> Result<DivergenceResult> {
    quadrature_result(cfg, |u| {
        let a = p.quantile_derivative(u)?;
        let b = q.quantile_derivative(u)?;
        let m = 0.5 * (a + b);
        Ok(0.5 * (2.0 * libm::log(m) - libm::log(a) - libm::log(b)))
    })
}

/// Transport cross-entropy of `p` relative to a tabulated reference `q`:
///
/// ```text
/// H_T(p; q) = ∫₀¹ Q_p′/Q_q′ du  −  ∫ q·log q dx  −  1.
/// ```
///
/// The second integral runs over the reference's own grid (trapezoid rule).
/// Evaluating at `p = q` returns the differential entropy of `q`, and
/// subtracting `H(p)` recovers [`transport_kl_1d`] — the same decomposition
/// classical cross-entropy satisfies, transplanted to transport geometry.
///
/// # Errors
/// Quantile-derivative failures (degenerate reference cells) and quadrature
/// failures.
pub fn transport_cross_entropy_1d(
    p: &Density1D,
    q: &GridDensity,
    cfg: &QuadratureConfig,
) -> Result<DivergenceResult> {
    let q_density = from_grid(q.clone());
    let (ratio, nodes_used) = integrate_unit(cfg, |u| {
        Ok(p.quantile_derivative(u)? / q_density.quantile_derivative(u)?)
    })?;
    Ok(DivergenceResult {
        value: ratio + grid_entropy(q) - 1.0,
        nodes_used,
        clip_used: cfg.clip,
    })
}

/// Differential entropy `−∫ g·log g dx` of a tabulated density, by the
/// trapezoid rule on its own grid.
///
/// The integrand extends by continuity: cells where the density vanishes
/// contribute `0·log 0 = 0`, the limit value, so zero-density regions are
/// fine here even though quantile *derivatives* degenerate on them.
pub fn grid_entropy(g: &GridDensity) -> f64 {
    let xs = g.xs();
    let pdf = g.pdf();
    let plogp = |z: f64| if z > 0.0 { z * libm::log(z) } else { 0.0 };
    let mut acc = CompensatedSum::default();
    for i in 1..xs.len() {
        acc.add(0.5 * (plogp(pdf[i - 1]) + plogp(pdf[i])) * (xs[i] - xs[i - 1]));
    }
    -acc.value()
}

// --- Classical grid divergences --------------------------------------------------

/// Classical density divergences computed on a shared grid, for contrasting
/// with their transport counterparts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalDivergence {
    /// Kullback–Leibler `∫ p·log(p/q) dx`.
    Kl,
    /// Jensen–Shannon `½ KL(p‖m) + ½ KL(q‖m)` with `m = (p + q)/2`;
    /// symmetric and bounded by `log 2`.
    Js,
}

/// Classical KL or JS between two densities tabulated on identical
/// abscissae, by the trapezoid rule.
///
/// These are *density-space* divergences: unlike every transport divergence
/// in this module they are not shift invariant, and KL diverges as soon as
/// `p` puts mass where `q` has none. JS never diverges — the midpoint
/// mixture dominates both arguments — which is precisely why its bounded
/// transport analogue is interesting to compare against.
///
/// # Errors
/// [`Error::DimensionMismatch`] for different table lengths;
/// [`Error::InvalidArgument`] for equal-length tables on different
/// abscissae; [`Error::InfiniteDivergence`] (KL only) at the first grid
/// point where `p > 0` but `q = 0`.
pub fn classical_divergence_grid(
    kind: ClassicalDivergence,
    p: &GridDensity,
    q: &GridDensity,
) -> Result<f64> {
    if p.xs().len() != q.xs().len() {
        return Err(Error::DimensionMismatch {
            left: p.xs().len(),
            right: q.xs().len(),
        });
    }
    if p.xs() != q.xs() {
        return Err(Error::InvalidArgument(
            "grid divergences need both densities tabulated on the same abscissae",
        ));
    }
    match kind {
        ClassicalDivergence::Kl => trapezoid_kl(p.xs(), p.pdf(), q.pdf()),
        ClassicalDivergence::Js => {
            let m: Vec<f64> = p
                .pdf()
                .iter()
                .zip(q.pdf())
                .map(|(&a, &b)| 0.5 * (a + b))
                .collect();
            // The mixture dominates both arguments pointwise, so neither
            // half can hit the infinite branch.
            let half_p = trapezoid_kl(p.xs(), p.pdf(), &m)?;
            let half_q = trapezoid_kl(p.xs(), q.pdf(), &m)?;
            Ok(0.5 * half_p + 0.5 * half_q)
        }
    }
}

/// Trapezoid rule for `∫ num·log(num/den) dx` on a shared grid, with the
/// continuity convention `0·log(0/·) = 0`.
fn trapezoid_kl(xs: &[f64], num: &[f64], den: &[f64]) -> Result<f64> {
    let mut integrand = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        if num[i] == 0.0 {
            integrand.push(0.0);
        } else if den[i] <= 0.0 {
            return Err(Error::InfiniteDivergence { x: xs[i] });
        } else {
            integrand.push(num[i] * libm::log(num[i] / den[i]));
        }
    }
    let mut acc = CompensatedSum::default();
    for i in 1..xs.len() {
        acc.add(0.5 * (integrand[i - 1] + integrand[i]) * (xs[i] - xs[i - 1]));
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bregman::BuiltinPotential;
    use crate::density::{displacement_interpolate, gaussian1d, normal_pdf, uniform1d};
    use crate::quadrature::Scheme;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::{E, LN_2, PI};
    use proptest::prelude::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    /// ψ(z) = z²/2 on ℝ — the generator whose entropy kernel is 1/(2z).
    struct HalfSquare;

    impl ScalarPotential for HalfSquare {
        fn value(&self, z: f64) -> f64 {
            0.5 * z * z
        }

        fn derivative(&self, z: f64) -> f64 {
            z
        }

        fn domain(&self) -> (f64, f64) {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    }

    /// ψ = a + coeff·b on the intersection of domains.
    struct LinComb<'x, A: ?Sized, B: ?Sized> {
        a: &'x A,
        b: &'x B,
        coeff: f64,
    }

    impl<A: ScalarPotential + ?Sized, B: ScalarPotential + ?Sized> ScalarPotential
        for LinComb<'_, A, B>
    {
        fn value(&self, z: f64) -> f64 {
            self.a.value(z) + self.coeff * self.b.value(z)
        }

        fn derivative(&self, z: f64) -> f64 {
            self.a.derivative(z) + self.coeff * self.b.derivative(z)
        }

        fn domain(&self) -> (f64, f64) {
            let (alo, ahi) = self.a.domain();
            let (blo, bhi) = self.b.domain();
            (alo.max(blo), ahi.min(bhi))
        }
    }

    fn standard_grid(std: f64, lo: f64, hi: f64, n: usize) -> GridDensity {
        let xs: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let pdf: Vec<f64> = xs.iter().map(|&x| normal_pdf(x / std) / std).collect();
        GridDensity::new(xs, pdf).expect("gaussian table is a valid density")
    }

    #[test]
    fn wasserstein2_matches_closed_forms() {
        let wide = gaussian1d(0.0, 4.0).unwrap();
        let narrow = gaussian1d(0.0, 1.0).unwrap();
        let shifted = gaussian1d(3.0, 1.0).unwrap();

        let scale = wasserstein2_1d(&wide, &narrow, &cfg()).unwrap();
        assert_abs_diff_eq!(scale.value, 1.0, epsilon = 1e-6);

        let translate = wasserstein2_1d(&shifted, &narrow, &cfg()).unwrap();
        assert_abs_diff_eq!(translate.value, 9.0, epsilon = 1e-6);

        let back = wasserstein2_1d(&narrow, &shifted, &cfg()).unwrap();
        assert_eq!(translate.value, back.value);

        let this = wasserstein2_1d(&wide, &wide, &cfg()).unwrap();
        assert_abs_diff_eq!(this.value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn square_linear_energy_is_the_wasserstein_distance() {
        let pairs = [
            (gaussian1d(0.0, 4.0).unwrap(), gaussian1d(0.5, 1.0).unwrap()),
            (gaussian1d(-1.0, 2.0).unwrap(), uniform1d(0.0, 3.0).unwrap()),
        ];
        for (p, q) in &pairs {
            let by_potential =
                linear_energy_divergence(&BuiltinPotential::Square, p, q, &cfg()).unwrap();
            let direct = wasserstein2_1d(p, q, &cfg()).unwrap();
            assert_abs_diff_eq!(by_potential.value, direct.value, epsilon = 1e-10);
        }
    }

    #[test]
    fn linear_energy_closed_forms_on_uniform_stretch() {
        // Q_p = u, Q_q = 2u: the −log integrand is the constant log 2 − 1/2
        // and the z·log z integrand is u·(1 − log 2).
        let p = uniform1d(0.0, 1.0).unwrap();
        let q = uniform1d(0.0, 2.0).unwrap();
        let neglog = linear_energy_divergence(&BuiltinPotential::NegLog, &p, &q, &cfg()).unwrap();
        assert_abs_diff_eq!(neglog.value, LN_2 - 0.5, epsilon = 1e-9);
        let xlogx = linear_energy_divergence(&BuiltinPotential::XLogX, &p, &q, &cfg()).unwrap();
        assert_abs_diff_eq!(xlogx.value, 0.5 * (1.0 - LN_2), epsilon = 1e-9);
    }

    #[test]
    fn linear_energy_rejects_quantiles_outside_the_domain() {
        // Gaussian quantiles cross zero, where −log z is undefined.
        let p = gaussian1d(0.0, 4.0).unwrap();
        let q = gaussian1d(0.0, 1.0).unwrap();
        let err = linear_energy_divergence(&BuiltinPotential::NegLog, &p, &q, &cfg()).unwrap_err();
        match err {
            Error::DomainAtNode { node, source } => {
                assert!(node < 0.5, "first failing node is in the negative tail");
                assert!(matches!(*source, Error::OutOfDomain { .. }));
            }
            other => panic!("expected a located domain error, got {other:?}"),
        }
    }

    #[test]
    fn linear_energy_is_linear_in_the_potential() {
        let p = uniform1d(0.5, 1.5).unwrap();
        let q = uniform1d(1.0, 3.0).unwrap();
        let combo = LinComb {
            a: &BuiltinPotential::Square,
            b: &BuiltinPotential::NegLog,
            coeff: 2.0,
        };
        let combined = linear_energy_divergence(&combo, &p, &q, &cfg()).unwrap().value;
        let square = linear_energy_divergence(&BuiltinPotential::Square, &p, &q, &cfg())
            .unwrap()
            .value;
        let neglog = linear_energy_divergence(&BuiltinPotential::NegLog, &p, &q, &cfg())
            .unwrap()
            .value;
        assert_abs_diff_eq!(combined, square + 2.0 * neglog, epsilon = 1e-9);
    }

    #[test]
    fn interaction_square_kernel_measures_difference_variance() {
        // Quantile differences of N(0,4) and N(0,1) differ by Φ⁻¹(u)−Φ⁻¹(v),
        // so the value is ½·E[(X−X′)²] = 1 for independent standard normals.
        let p = gaussian1d(0.0, 4.0).unwrap();
        let q = gaussian1d(0.0, 1.0).unwrap();
        let r = interaction_energy_divergence(&BuiltinPotential::Square, &p, &q, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-3);
        assert!(r.nodes_used > 0);
        assert_eq!(r.clip_used, cfg().clip);
    }

    #[test]
    fn interaction_divergence_ignores_translations() {
        let p = gaussian1d(3.0, 1.0).unwrap();
        let q = gaussian1d(0.0, 1.0).unwrap();
        let r = interaction_energy_divergence(&BuiltinPotential::Square, &p, &q, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-12);

        let this = interaction_energy_divergence(&BuiltinPotential::Square, &q, &q, &cfg()).unwrap();
        assert_eq!(this.value, 0.0);
    }

    #[test]
    fn interaction_neglog_kernel_handles_the_diagonal() {
        // Separations scale by 2 between uniform(0,1) and uniform(0,2): the
        // integrand is the constant ½ − log ½ − 1 = log 2 − ½ on the ordered
        // half, giving ½·(log 2 − ½) up to the clipped diagonal band.
        let p = uniform1d(0.0, 1.0).unwrap();
        let q = uniform1d(0.0, 2.0).unwrap();
        let expected = 0.5 * (LN_2 - 0.5);
        let clipped =
            interaction_energy_divergence(&BuiltinPotential::NegLog, &p, &q, &cfg()).unwrap();
        assert_abs_diff_eq!(clipped.value, expected, epsilon = 5e-5);

        let tighter = interaction_energy_divergence_with_diagonal_clip(
            &BuiltinPotential::NegLog,
            &p,
            &q,
            &cfg(),
            0.5 * DEFAULT_DIAGONAL_CLIP,
        )
        .unwrap();
        assert!(
            (tighter.value - clipped.value).abs() < 1e-3,
            "halving the diagonal clip must not move the value materially",
        );
        assert!(tighter.nodes_used > clipped.nodes_used);
    }

    #[test]
    fn interaction_rejects_bad_diagonal_clips() {
        let p = uniform1d(0.0, 1.0).unwrap();
        let err = interaction_energy_divergence_with_diagonal_clip(
            &BuiltinPotential::Square,
            &p,
            &p,
            &cfg(),
            0.6,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn entropy_kernel_transforms_the_generator() {
        // The kernel of z·log z is −log z and vice versa: the transform is an
        // involution that swaps the KL and Itakura–Saito generators.
        let kl_side = EntropyPotential::new(BuiltinPotential::XLogX).unwrap();
        let is_side = EntropyPotential::new(BuiltinPotential::NegLog).unwrap();
        for &z in &[0.25, 0.5, 1.0, 2.0, 7.5] {
            assert_abs_diff_eq!(
                kl_side.value(z),
                BuiltinPotential::NegLog.value(z),
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(
                is_side.value(z),
                BuiltinPotential::XLogX.value(z),
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(
                kl_side.derivative(z),
                BuiltinPotential::NegLog.derivative(z),
                epsilon = 1e-14
            );
        }
        assert_eq!(kl_side.domain(), (0.0, f64::INFINITY));
        // A generator on all of ℝ restricts to the positives seen through
        // reciprocals.
        let square = EntropyPotential::new(BuiltinPotential::Square).unwrap();
        assert_eq!(square.domain(), (0.0, f64::INFINITY));
    }

    #[test]
    fn entropy_kernel_derivative_matches_finite_differences() {
        fn check<U: ScalarPotential>(kernel: &EntropyPotential<U>) {
            let h = 1e-6;
            for &z in &[0.3, 0.9, 1.7, 4.2] {
                let fd = (kernel.value(z + h) - kernel.value(z - h)) / (2.0 * h);
                assert_abs_diff_eq!(kernel.derivative(z), fd, epsilon = 1e-7);
            }
        }
        check(&EntropyPotential::new(BuiltinPotential::XLogX).unwrap());
        check(&EntropyPotential::new(BuiltinPotential::Square).unwrap());
        check(&EntropyPotential::new(HalfSquare).unwrap());
    }

    #[test]
    fn entropy_kernels_stay_convex() {
        // Sampled second differences of each kernel must be nonnegative.
        let probe = |value: &dyn Fn(f64) -> f64| {
            let h = 1e-3;
            let mut z = 0.05;
            while z < 20.0 {
                let second = value(z + h) - 2.0 * value(z) + value(z - h);
                assert!(second >= -1e-9, "kernel loses convexity near z = {z}");
                z *= 1.07;
            }
        };
        let kl = EntropyPotential::new(BuiltinPotential::XLogX).unwrap();
        probe(&|z| kl.value(z));
        let is = EntropyPotential::new(BuiltinPotential::NegLog).unwrap();
        probe(&|z| is.value(z));
        let half = EntropyPotential::new(HalfSquare).unwrap();
        probe(&|z| half.value(z));
    }

    #[test]
    fn entropy_generator_must_reach_the_positive_axis() {
        #[derive(Debug)]
        struct NegativeOnly;
        impl ScalarPotential for NegativeOnly {
            fn value(&self, z: f64) -> f64 {
                z * z
            }
            fn derivative(&self, z: f64) -> f64 {
                2.0 * z
            }
            fn domain(&self) -> (f64, f64) {
                (f64::NEG_INFINITY, -1.0)
            }
        }
        assert!(matches!(
            EntropyPotential::new(NegativeOnly).unwrap_err(),
            Error::InvalidArgument(_)
        ));
    }

    #[test]
    fn entropy_divergence_closed_forms_on_uniform_pairs() {
        // Constant quantile derivatives 2 and 1: D_Ũ(2‖1) in closed form.
        let p = uniform1d(0.0, 2.0).unwrap();
        let q = uniform1d(0.0, 1.0).unwrap();

        let half_square = EntropyPotential::new(HalfSquare).unwrap();
        let r = entropy_divergence(&half_square, &p, &q, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 0.25, epsilon = 1e-12);

        // The generator map is linear: doubling U doubles the divergence.
        let square = EntropyPotential::new(BuiltinPotential::Square).unwrap();
        let doubled = entropy_divergence(&square, &p, &q, &cfg()).unwrap();
        assert_abs_diff_eq!(doubled.value, 0.5, epsilon = 1e-12);

        let kl_generator = EntropyPotential::new(BuiltinPotential::XLogX).unwrap();
        let this = entropy_divergence(&kl_generator, &p, &p, &cfg()).unwrap();
        assert_eq!(this.value, 0.0);
    }

    #[test]
    fn transport_kl_specializes_the_entropy_divergence() {
        let kl_generator = EntropyPotential::new(BuiltinPotential::XLogX).unwrap();
        let pairs = [
            (gaussian1d(0.0, 4.0).unwrap(), gaussian1d(0.0, 1.0).unwrap()),
            (uniform1d(0.0, 1.0).unwrap(), uniform1d(0.0, 2.0).unwrap()),
        ];
        for (p, q) in &pairs {
            let direct = transport_kl_1d(p, q, &cfg()).unwrap().value;
            let via_entropy = entropy_divergence(&kl_generator, p, q, &cfg()).unwrap().value;
            assert_abs_diff_eq!(direct, via_entropy, epsilon = 1e-12);
        }
    }

    #[test]
    fn transport_kl_closed_forms() {
        let wide = gaussian1d(0.0, 4.0).unwrap();
        let narrow = gaussian1d(0.0, 1.0).unwrap();
        let r = transport_kl_1d(&wide, &narrow, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 - LN_2, epsilon = 1e-6);

        // A pure translation is transport-free: the derivative ratio is one.
        let shifted = gaussian1d(3.0, 1.0).unwrap();
        let z = transport_kl_1d(&shifted, &narrow, &cfg()).unwrap();
        assert_abs_diff_eq!(z.value, 0.0, epsilon = 1e-10);

        let this = transport_kl_1d(&wide, &wide, &cfg()).unwrap();
        assert_eq!(this.value, 0.0);

        let contract = transport_kl_1d(
            &uniform1d(0.0, 1.0).unwrap(),
            &uniform1d(0.0, 2.0).unwrap(),
            &cfg(),
        )
        .unwrap();
        assert_abs_diff_eq!(contract.value, LN_2 - 0.5, epsilon = 1e-12);
    }

    #[test]
    fn transport_divergences_are_shift_invariant() {
        let base_pairs = [
            (gaussian1d(0.0, 4.0).unwrap(), gaussian1d(1.0, 1.0).unwrap()),
            (uniform1d(0.0, 1.0).unwrap(), uniform1d(-1.0, 2.0).unwrap()),
        ];
        for c in [-2.0, 0.5, 10.0] {
            for (p, q) in &base_pairs {
                let (plo, phi) = p.support();
                let shifted_p = match p.kind() {
                    _ if phi.is_infinite() => gaussian1d(c, 4.0).unwrap(),
                    _ => uniform1d(plo + c, phi + c).unwrap(),
                };
                let (qlo, qhi) = q.support();
                let shifted_q = match q.kind() {
                    _ if qhi.is_infinite() => gaussian1d(1.0 + c, 1.0).unwrap(),
                    _ => uniform1d(qlo + c, qhi + c).unwrap(),
                };
                let base = transport_kl_1d(p, q, &cfg()).unwrap().value;
                let moved = transport_kl_1d(&shifted_p, &shifted_q, &cfg()).unwrap().value;
                assert!(
                    (base - moved).abs() < 1e-9,
                    "shift by {c} moved the divergence: {base} vs {moved}",
                );
                let base_js = transport_js_1d(p, q, &cfg()).unwrap().value;
                let moved_js = transport_js_1d(&shifted_p, &shifted_q, &cfg()).unwrap().value;
                assert!((base_js - moved_js).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn transport_js_closed_form_and_symmetry() {
        let wide = gaussian1d(0.0, 4.0).unwrap();
        let narrow = gaussian1d(0.0, 1.0).unwrap();
        let r = transport_js_1d(&wide, &narrow, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 0.5 * (9.0f64 / 8.0).ln(), epsilon = 1e-6);

        let p = gaussian1d(0.0, 4.0).unwrap();
        let q = gaussian1d(1.0, 2.0).unwrap();
        let forward = transport_js_1d(&p, &q, &cfg()).unwrap().value;
        let backward = transport_js_1d(&q, &p, &cfg()).unwrap().value;
        assert!((forward - backward).abs() < 1e-12);
    }

    #[test]
    fn transport_js_equals_its_midpoint_assembly() {
        let pairs = [
            (gaussian1d(0.0, 4.0).unwrap(), gaussian1d(0.0, 1.0).unwrap()),
            (gaussian1d(1.0, 2.0).unwrap(), uniform1d(0.0, 3.0).unwrap()),
        ];
        for (p, q) in &pairs {
            let mid = displacement_interpolate(p, q, 0.5).unwrap();
            let assembled = 0.5 * transport_kl_1d(p, &mid, &cfg()).unwrap().value
                + 0.5 * transport_kl_1d(q, &mid, &cfg()).unwrap().value;
            let direct = transport_js_1d(p, q, &cfg()).unwrap().value;
            assert_abs_diff_eq!(direct, assembled, epsilon = 1e-7);
        }
    }

    #[test]
    fn transport_kl_is_displacement_convex_in_the_first_argument() {
        let p1 = gaussian1d(1.0, 2.0).unwrap();
        let p2 = uniform1d(0.0, 3.0).unwrap();
        let q = gaussian1d(0.0, 1.0).unwrap();
        let d1 = transport_kl_1d(&p1, &q, &cfg()).unwrap().value;
        let d2 = transport_kl_1d(&p2, &q, &cfg()).unwrap().value;
        for lambda in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let blend = displacement_interpolate(&p1, &p2, lambda).unwrap();
            let mixed = transport_kl_1d(&blend, &q, &cfg()).unwrap().value;
            assert!(
                mixed <= lambda * d1 + (1.0 - lambda) * d2 + 1e-8,
                "convexity violated at lambda = {lambda}",
            );
        }
    }

    #[test]
    fn cross_entropy_of_a_density_with_itself_is_its_entropy() {
        let table = standard_grid(1.0, -10.0, 10.0, 4001);
        let h = grid_entropy(&table);
        assert_abs_diff_eq!(h, 0.5 * (2.0 * PI * E).ln(), epsilon = 1e-4);

        let p = from_grid(table.clone());
        let r = transport_cross_entropy_1d(&p, &table, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, h, epsilon = 1e-10);
    }

    #[test]
    fn cross_entropy_decomposes_the_transport_kl() {
        let p = gaussian1d(0.0, 4.0).unwrap();
        let q_table = standard_grid(1.0, -10.0, 10.0, 4001);
        let p_table = standard_grid(2.0, -12.0, 12.0, 4801);
        let cross = transport_cross_entropy_1d(&p, &q_table, &cfg()).unwrap().value;
        let recovered = cross - grid_entropy(&p_table);
        assert_abs_diff_eq!(recovered, 1.0 - LN_2, epsilon = 1e-4);
    }

    #[test]
    fn classical_kl_on_grids_matches_the_gaussian_closed_form() {
        let p = standard_grid(2.0, -10.0, 10.0, 4001);
        let q = standard_grid(1.0, -10.0, 10.0, 4001);
        let kl = classical_divergence_grid(ClassicalDivergence::Kl, &p, &q).unwrap();
        assert_abs_diff_eq!(kl, 1.5 - LN_2, epsilon = 1e-4);

        let this = classical_divergence_grid(ClassicalDivergence::Kl, &p, &p).unwrap();
        assert_eq!(this, 0.0);
    }

    #[test]
    fn classical_kl_detects_support_violations() {
        let xs: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let p = GridDensity::new(xs.clone(), alloc::vec![1.0; 6]).unwrap();
        let q = GridDensity::new(xs, alloc::vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0]).unwrap();
        match classical_divergence_grid(ClassicalDivergence::Kl, &p, &q).unwrap_err() {
            Error::InfiniteDivergence { x } => assert_eq!(x, 0.0),
            other => panic!("expected an infinite-divergence report, got {other:?}"),
        }
        // JS never diverges: the mixture covers the union of supports.
        let p2 = GridDensity::new(
            (0..6).map(|i| i as f64).collect(),
            alloc::vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0],
        )
        .unwrap();
        let q2 = GridDensity::new(
            (0..6).map(|i| i as f64).collect(),
            alloc::vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0],
        )
        .unwrap();
        let js = classical_divergence_grid(ClassicalDivergence::Js, &p2, &q2).unwrap();
        assert_abs_diff_eq!(js, LN_2, epsilon = 1e-12);
    }

    #[test]
    fn classical_js_is_symmetric_and_bounded() {
        let p = standard_grid(2.0, -10.0, 10.0, 2001);
        let q = standard_grid(1.0, -10.0, 10.0, 2001);
        let forward = classical_divergence_grid(ClassicalDivergence::Js, &p, &q).unwrap();
        let backward = classical_divergence_grid(ClassicalDivergence::Js, &q, &p).unwrap();
        assert_eq!(forward, backward);
        assert!(forward >= 0.0);
        assert!(forward <= LN_2 + 1e-12);
    }

    #[test]
    fn classical_divergences_insist_on_a_common_grid() {
        let p = standard_grid(1.0, -10.0, 10.0, 101);
        let q = standard_grid(1.0, -10.0, 10.0, 201);
        assert!(matches!(
            classical_divergence_grid(ClassicalDivergence::Kl, &p, &q).unwrap_err(),
            Error::DimensionMismatch { left: 101, right: 201 }
        ));
        let r = standard_grid(1.0, -9.0, 11.0, 101);
        assert!(matches!(
            classical_divergence_grid(ClassicalDivergence::Kl, &p, &r).unwrap_err(),
            Error::InvalidArgument(_)
        ));
    }

    #[test]
    fn results_report_their_bookkeeping() {
        let p = gaussian1d(0.0, 4.0).unwrap();
        let q = gaussian1d(0.0, 1.0).unwrap();
        let config = cfg();
        let r = transport_kl_1d(&p, &q, &config).unwrap();
        assert!(r.nodes_used >= config.nodes / 2);
        assert!(r.nodes_used <= config.nodes);
        assert_eq!(r.clip_used, config.clip);
        assert!(r.value.is_finite());
    }

    #[test]
    fn midpoint_scheme_remains_serviceable() {
        let config = QuadratureConfig {
            nodes: 20_000,
            scheme: Scheme::Midpoint,
            clip: 1e-6,
        };
        let p = gaussian1d(0.0, 4.0).unwrap();
        let q = gaussian1d(0.0, 1.0).unwrap();
        let w = wasserstein2_1d(&p, &q, &config).unwrap();
        assert_abs_diff_eq!(w.value, 1.0, epsilon = 5e-3);
        assert_eq!(w.nodes_used, 20_000);
    }

    fn arbitrary_density() -> impl Strategy<Value = Density1D> {
        prop_oneof![
            (-5.0f64..5.0, 0.04f64..25.0)
                .prop_map(|(m, v)| gaussian1d(m, v).expect("valid gaussian parameters")),
            (-5.0f64..5.0, 0.1f64..10.0)
                .prop_map(|(a, w)| uniform1d(a, a + w).expect("valid uniform parameters")),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn transport_divergences_are_nonnegative(
            p in arbitrary_density(),
            q in arbitrary_density(),
        ) {
            let config = cfg();
            let kl = transport_kl_1d(&p, &q, &config).unwrap().value;
            prop_assert!(kl >= -1e-9);
            let js = transport_js_1d(&p, &q, &config).unwrap().value;
            prop_assert!(js >= -1e-9);
            let w2 = wasserstein2_1d(&p, &q, &config).unwrap().value;
            prop_assert!(w2 >= -1e-9);
        }

        #[test]
        fn transport_js_stays_symmetric(
            p in arbitrary_density(),
            q in arbitrary_density(),
        ) {
            let config = cfg();
            let forward = transport_js_1d(&p, &q, &config).unwrap().value;
            let backward = transport_js_1d(&q, &p, &config).unwrap().value;
            prop_assert!((forward - backward).abs() < 1e-12);
        }
    }
}
