//! Transport Bregman divergences in their two closed-form regimes.
//!
//! A Bregman divergence of a strictly convex potential ψ compares two points
//! through the gap between ψ and its tangent:
//!
//! ```text
//! D_ψ(y‖x) = ψ(y) − ψ(x) − ψ′(x)·(y − x) ≥ 0.
//! ```
//!
//! Lifting the same construction from Euclidean space to the L²-Wasserstein
//! space of probability densities yields *transport* Bregman divergences of
//! energy functionals (linear, interaction, entropy). They admit closed forms
//! in exactly two settings, and this crate computes both:
//!
//! * **One-dimensional densities**, where the optimal transport map between
//!   densities is the monotone rearrangement `T = F_p⁻¹ ∘ F_q` and every
//!   divergence becomes an integral of pointwise scalar Bregman divergences
//!   of quantile functions `F⁻¹` and their derivatives over `(0,1)`
//!   ([`density`], [`transport`]).
//! * **Multivariate Gaussians**, where transport maps are linear symmetric
//!   positive-definite matrices and the divergences reduce to determinant and
//!   trace formulas in the covariance matrices ([`gaussian`]).
//!
//! The flagship instances are the transport Kullback–Leibler divergence
//! (in 1D, the Itakura–Saito divergence between quantile derivatives)
//! and the transport Jensen–Shannon divergence (symmetrized against the
//! Wasserstein geodesic midpoint). The [`oracle`] module verifies every
//! claimed property of these divergences — nonnegativity, shift invariance,
//! separability, convexity along displacement interpolation, Legendre
//! duality, and the Taylor/Hessian expansion — against independent
//! brute-force computations.
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! come from [`libm`]. File IO, the command-line front end, and CSV emission
//! live in the companion `transport-bregman-cli` crate.
#![no_std]
#![deny(unsafe_code)]
// Guards throughout are written as `!(x > 0.0)` rather than `x <= 0.0` so
// that NaN fails them too; the negation is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bregman;
pub mod density;
pub mod gaussian;
pub mod matrix;
pub mod oracle;
pub mod quadrature;
pub mod transport;

mod error;

pub use error::{Error, Result};
