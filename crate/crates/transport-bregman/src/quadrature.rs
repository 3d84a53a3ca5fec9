//! Quadrature over the open unit interval `(0,1)`.
//!
//! Every one-dimensional transport divergence in this crate is an integral
//! of some pointwise expression in quantile functions over `(0,1)`. Two
//! schemes are provided:
//!
//! * **Gauss–Legendre** (default): a composite rule whose panels shrink
//!   geometrically toward the endpoints. Quantile-based integrands are
//!   analytic in the interior but typically singular *at* `0` and `1`
//!   (a Gaussian quantile diverges like `±√(2 log(1/u))`), and a graded
//!   mesh restores fast convergence there: each dyadic panel `[e/2, e]` is
//!   at distance `e/2` from the singularity but only `e/2` wide, so a fixed
//!   per-panel node count yields an error that is geometrically small and
//!   independent of how far the grading descends. Integrable endpoint mass
//!   is captured down to a tail floor of `clip × 1e-7` (default `1e-13`),
//!   below which the omitted mass is negligible (≲1e-11) for every density
//!   family in this crate.
//! * **Midpoint**: the uniform composite midpoint rule on the clipped
//!   interval `(clip, 1−clip)`. Cheap and robust for bounded integrands,
//!   with `O(h²)` accuracy and a visible `O(clip)` truncation bias; kept
//!   for cross-checking the default scheme.
//!
//! Sums are accumulated with Neumaier compensation in a fixed node order,
//! so repeated evaluations are bit-for-bit reproducible.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Quadrature scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Uniform composite midpoint rule on `(clip, 1−clip)`.
    Midpoint,
    /// Geometrically graded composite Gauss–Legendre rule (default).
    #[default]
    GaussLegendre,
}

/// Node budget, scheme, and tail handling for integrals over `(0,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Total node budget for single integrals (the composite rule may use
    /// a few more or fewer to fill its panels evenly). At least 16.
    pub nodes: usize,
    /// Integration scheme.
    pub scheme: Scheme,
    /// Tail cutoff `ε_clip` in `(0, 0.01)`. The midpoint scheme integrates
    /// `(clip, 1−clip)` literally; the Gauss–Legendre scheme treats `clip`
    /// as the scale of its endpoint guard and grades its panels down to
    /// `clip × 1e-7` (never below `1e-13`), at which point every
    /// representable quantile is still finite while the omitted endpoint
    /// mass is far below all tolerances used in this crate.
    pub clip: f64,
}

/// Factor by which the graded Gauss–Legendre rule descends below `clip`.
const TAIL_FLOOR_FACTOR: f64 = 1e-7;

/// Hard lower bound on the tail floor. Distances from `u = 1` quantize in
/// steps of one ulp ≈ 1.1e-16, so grading much below 1e-13 would produce
/// coincident nodes near the right endpoint without capturing any further
/// mass worth more than ~1e-11.
const TAIL_FLOOR_MIN: f64 = 1e-13;

/// Fraction of the single-integral node budget granted to each axis of a
/// tensor-product double integral (512 per axis at the default 2048).
const DOUBLE_AXIS_DIVISOR: usize = 4;

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            nodes: 2048,
            scheme: Scheme::GaussLegendre,
            clip: 1e-6,
        }
    }
}

impl QuadratureConfig {
    /// Checks the configuration invariants: `nodes ≥ 16`, `0 < clip < 0.01`.
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 16 {
            return Err(Error::InvalidArgument("quadrature nodes must be at least 16"));
        }
        if !(self.clip > 0.0 && self.clip < 0.01) {
            return Err(Error::InvalidArgument("quadrature clip must lie in (0, 0.01)"));
        }
        Ok(())
    }

    /// The smallest distance to `{0, 1}` at which the graded rule evaluates.
    pub(crate) fn tail_floor(&self) -> f64 {
        (self.clip * TAIL_FLOOR_FACTOR).max(TAIL_FLOOR_MIN)
    }

    /// Per-axis node budget for tensor-product double integrals.
    pub(crate) fn axis_budget(&self) -> usize {
        (self.nodes / DOUBLE_AXIS_DIVISOR).clamp(64, 1024)
    }
}

/// Compensated (Neumaier) accumulator; deterministic given a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if abs(self.sum) >= abs(x) {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// in ascending node order.
///
/// Roots of the Legendre polynomial `P_n` are found by Newton iteration on
/// the three-term recurrence, starting from the Chebyshev-like estimate
/// `cos(π(i + 3/4)/(n + 1/2))`; weights are `2 / ((1−x²) P_n′(x)²)`.
/// Each root converges quadratically and is polished to machine precision,
/// so the rule integrates polynomials of degree `2n−1` exactly up to
/// rounding.
pub fn gauss_legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut rule = alloc::vec![(0.0f64, 0.0f64); n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut derivative = 0.0;
        for _ in 0..64 {
            // Evaluate P_n(x) and P_{n-1}(x) by upward recurrence.
            let mut p_curr = 1.0f64;
            let mut p_prev = 0.0f64;
            for j in 0..n {
                let p_two_back = p_prev;
                p_prev = p_curr;
                let jf = j as f64;
                p_curr = ((2.0 * jf + 1.0) * x * p_prev - jf * p_two_back) / (jf + 1.0);
            }
            derivative = n as f64 * (x * p_curr - p_prev) / (x * x - 1.0);
            let step = p_curr / derivative;
            x -= step;
            if abs(step) < 1e-15 {
                break;
            }
        }
        let weight = 2.0 / ((1.0 - x * x) * derivative * derivative);
        // The estimate enumerates roots from the largest down; mirror them
        // into ascending order.
        rule[i] = (-x, weight);
        rule[n - 1 - i] = (x, weight);
    }
    if n % 2 == 1 {
        // The middle root of an odd rule is exactly zero; the Newton loop
        // leaves it at ~1e-17, so pin it.
        rule[n / 2].0 = 0.0;
    }
    rule
}

/// Dyadic panels covering `(floor, 1/2]`, ascending.
fn graded_panels(floor: f64) -> Vec<(f64, f64)> {
    let mut descending = Vec::new();
    let mut hi = 0.5f64;
    while hi / 2.0 > floor {
        descending.push((hi / 2.0, hi));
        hi /= 2.0;
    }
    descending.push((floor, hi));
    descending.reverse();
    descending
}

/// The full node/weight table of a configuration, covering `(0,1)` in
/// ascending node order. Both schemes produce strictly interior nodes.
pub(crate) fn unit_nodes(cfg: &QuadratureConfig) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    match cfg.scheme {
        Scheme::Midpoint => {
            let n = cfg.nodes;
            let lo = cfg.clip;
            let width = 1.0 - 2.0 * cfg.clip;
            let h = width / n as f64;
            Ok((0..n).map(|i| (lo + (i as f64 + 0.5) * h, h)).collect())
        }
        Scheme::GaussLegendre => Ok(graded_unit_nodes(cfg.tail_floor(), cfg.nodes)),
    }
}

/// Graded composite Gauss–Legendre nodes on `(floor, 1−floor)` with a total
/// budget of roughly `budget` nodes, ascending.
fn graded_unit_nodes(floor: f64, budget: usize) -> Vec<(f64, f64)> {
    let panels = graded_panels(floor);
    let per_panel = (budget / (2 * panels.len())).max(3);
    let base = gauss_legendre_nodes(per_panel);
    let mut nodes = Vec::with_capacity(2 * panels.len() * per_panel);
    // Left half: panels ascending toward 1/2.
    for &(lo, hi) in &panels {
        let mid = 0.5 * (lo + hi);
        let half_width = 0.5 * (hi - lo);
        for &(x, w) in &base {
            nodes.push((mid + half_width * x, half_width * w));
        }
    }
    // Right half: the left panels mirrored through u ↦ 1 − u, ascending.
    for &(lo, hi) in panels.iter().rev() {
        let mid = 0.5 * ((1.0 - hi) + (1.0 - lo));
        let half_width = 0.5 * (hi - lo);
        for &(x, w) in &base {
            nodes.push((mid + half_width * x, half_width * w));
        }
    }
    nodes
}

/// Per-axis nodes for tensor-product double integrals over `(0,1)²`.
///
/// Double integrals always use the graded Gauss–Legendre axis rule: a
/// uniform tensor grid at an affordable size cannot resolve the quantile
/// tails that the graded rule handles for free.
pub(crate) fn axis_nodes(cfg: &QuadratureConfig) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    Ok(graded_unit_nodes(cfg.tail_floor(), cfg.axis_budget()))
}

/// Integrates `f` over `(0,1)` under the configured rule.
///
/// Returns the integral value together with the number of nodes actually
/// used. A non-finite integrand value aborts with the offending node; a
/// domain error raised by the integrand is wrapped with the node at which
/// it occurred.
pub(crate) fn integrate_unit<F>(cfg: &QuadratureConfig, mut f: F) -> Result<(f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let nodes = unit_nodes(cfg)?;
    let mut acc = CompensatedSum::default();
    for &(u, w) in &nodes {
        let value = f(u).map_err(|e| wrap_at_node(u, e))?;
        if !value.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: u });
        }
        acc.add(w * value);
    }
    Ok((acc.value(), nodes.len()))
}

/// Wraps integrand errors with the node where they occurred; quadrature
/// bookkeeping errors pass through untouched.
pub(crate) fn wrap_at_node(u: f64, e: Error) -> Error {
    match e {
        Error::OutOfDomain { .. } | Error::NoDualPoint { .. } => Error::DomainAtNode {
            node: u,
            source: Box::new(e),
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn default_config_is_valid() {
        let cfg = QuadratureConfig::default();
        assert_eq!(cfg.nodes, 2048);
        assert_eq!(cfg.scheme, Scheme::GaussLegendre);
        assert_eq!(cfg.clip, 1e-6);
        cfg.validate().expect("default config must validate");
    }

    #[test]
    fn config_rejects_tiny_node_budget() {
        let cfg = QuadratureConfig {
            nodes: 15,
            ..QuadratureConfig::default()
        };
        assert!(cfg.validate().is_err(), "15 nodes must be rejected");
    }

    #[test]
    fn config_rejects_out_of_range_clip() {
        for clip in [0.0, -1e-6, 0.01, 0.3] {
            let cfg = QuadratureConfig {
                clip,
                ..QuadratureConfig::default()
            };
            assert!(cfg.validate().is_err(), "clip {clip} must be rejected");
        }
    }

    #[test]
    fn gauss_legendre_five_matches_reference() {
        // Abscissae/weights of the 5-point rule, to 15 digits.
        let rule = gauss_legendre_nodes(5);
        let reference = [
            (-0.906179845938664, 0.236926885056189),
            (-0.538469310105683, 0.478628670499366),
            (0.0, 0.568888888888889),
            (0.538469310105683, 0.478628670499366),
            (0.906179845938664, 0.236926885056189),
        ];
        for (got, want) in rule.iter().zip(reference) {
            assert_abs_diff_eq!(got.0, want.0, epsilon = 1e-14);
            assert_abs_diff_eq!(got.1, want.1, epsilon = 1e-14);
        }
    }

    #[test]
    fn gauss_legendre_integrates_high_degree_polynomial_exactly() {
        // A 16-point rule is exact through degree 31.
        let rule = gauss_legendre_nodes(16);
        let integral: f64 = rule.iter().map(|&(x, w)| w * x.powi(30)).sum();
        assert_abs_diff_eq!(integral, 2.0 / 31.0, epsilon = 1e-14);
    }

    #[test]
    fn gauss_legendre_weights_sum_to_interval_length() {
        for n in [1, 2, 3, 8, 64, 301] {
            let total: f64 = gauss_legendre_nodes(n).iter().map(|&(_, w)| w).sum();
            assert_abs_diff_eq!(total, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn graded_rule_integrates_constants_to_machine_precision() {
        let cfg = QuadratureConfig::default();
        let (value, used) = integrate_unit(&cfg, |_| Ok(3.25)).unwrap();
        assert_abs_diff_eq!(value, 3.25, epsilon = 1e-12);
        assert!(used >= 1024, "expected a four-digit node count, got {used}");
    }

    #[test]
    fn graded_rule_handles_endpoint_log_singularity() {
        // ∫₀¹ log(1/u) du = 1: integrable singularity at the left endpoint.
        let cfg = QuadratureConfig::default();
        let (value, _) = integrate_unit(&cfg, |u| Ok(libm::log(1.0 / u))).unwrap();
        assert_abs_diff_eq!(value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn graded_rule_handles_symmetric_sqrt_singularity() {
        // ∫₀¹ u^{-1/2}(1-u)^{-1/2} du = π, singular at both endpoints. The two
        // omitted tails below the 1e-13 floor each carry 2·√(1e-13) ≈ 6.3e-7 of
        // mass, which dominates the error budget here; the graded panels resolve
        // the singular growth itself to far better accuracy. Quantile-based
        // integrands in this crate grow at worst logarithmically, so their
        // omitted tails are ≲1e-11.
        let cfg = QuadratureConfig::default();
        let (value, _) =
            integrate_unit(&cfg, |u| Ok(1.0 / libm::sqrt(u * (1.0 - u)))).unwrap();
        assert_abs_diff_eq!(value, PI, epsilon = 2e-6);
    }

    #[test]
    fn midpoint_rule_integrates_smooth_function() {
        let cfg = QuadratureConfig {
            scheme: Scheme::Midpoint,
            ..QuadratureConfig::default()
        };
        // ∫₀¹ u² du = 1/3; midpoint at 2048 cells is O(h²) ≈ 2e-8, but the
        // literal (clip, 1−clip) truncation contributes its documented
        // O(clip) bias ≈ 1e-6.
        let (value, used) = integrate_unit(&cfg, |u| Ok(u * u)).unwrap();
        assert_abs_diff_eq!(value, 1.0 / 3.0, epsilon = 3e-6);
        assert_eq!(used, 2048);
    }

    #[test]
    fn midpoint_nodes_stay_inside_clip() {
        let cfg = QuadratureConfig {
            nodes: 16,
            scheme: Scheme::Midpoint,
            clip: 0.005,
        };
        let nodes = unit_nodes(&cfg).unwrap();
        assert!(nodes.iter().all(|&(u, _)| u > 0.005 && u < 0.995));
    }

    #[test]
    fn graded_nodes_respect_tail_floor_and_order() {
        let cfg = QuadratureConfig::default();
        let nodes = unit_nodes(&cfg).unwrap();
        // Allow half an ulp-scale of slack at the right endpoint, where
        // distances from 1 quantize coarsely.
        let floor = 0.5 * cfg.tail_floor();
        assert!(nodes.iter().all(|&(u, _)| u > floor && u < 1.0 - floor));
        assert!(
            nodes.windows(2).all(|p| p[0].0 < p[1].0),
            "nodes must ascend strictly"
        );
        // Mirror symmetry of the graded rule.
        let (first, last) = (nodes[0].0, nodes[nodes.len() - 1].0);
        assert_abs_diff_eq!(first, 1.0 - last, epsilon = 1e-15);
    }

    #[test]
    fn non_finite_integrand_reports_offending_node() {
        let cfg = QuadratureConfig::default();
        let err = integrate_unit(&cfg, |u| {
            Ok(if u > 0.25 { f64::INFINITY } else { 1.0 })
        })
        .unwrap_err();
        match err {
            Error::NonFiniteIntegrand { node } => assert!(node > 0.25),
            other => panic!("expected NonFiniteIntegrand, got {other:?}"),
        }
    }

    #[test]
    fn integrand_errors_are_wrapped_with_node() {
        let cfg = QuadratureConfig::default();
        let err = integrate_unit(&cfg, |u| {
            if u > 0.5 {
                Err(Error::OutOfDomain {
                    value: u,
                    lo: 0.0,
                    hi: 0.5,
                })
            } else {
                Ok(1.0)
            }
        })
        .unwrap_err();
        assert!(
            matches!(err, Error::DomainAtNode { node, .. } if node > 0.5),
            "expected DomainAtNode, got {err:?}"
        );
    }

    #[test]
    fn integration_is_bit_for_bit_deterministic() {
        let cfg = QuadratureConfig::default();
        let f = |u: f64| Ok(libm::exp(-u) * libm::log(1.0 / u));
        let (a, _) = integrate_unit(&cfg, f).unwrap();
        let (b, _) = integrate_unit(&cfg, f).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn compensated_sum_beats_naive_on_cancellation() {
        let mut acc = CompensatedSum::default();
        acc.add(1.0);
        for _ in 0..10 {
            acc.add(1e-17);
        }
        assert_abs_diff_eq!(acc.value(), 1.0 + 1e-16, epsilon = 1e-18);
    }
}
