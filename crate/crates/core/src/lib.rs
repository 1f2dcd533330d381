//! Multiple Schramm–Loewner evolutions for coset Wess–Zumino–Witten models.
//!
//! The crate couples a chordal multiple Loewner chain with Brownian motions
//! on an `su(2)` group manifold. Drift terms come from pure partition
//! functions built out of boundary-condition-changing operators of the
//! `Z(n)` parafermion (`SU(2)_n/U(1)_n`) and `SU(2)_k` theories.
//!
//! Modules, bottom up:
//!
//! * [`algebra`]: model parameters (κ, τ, central charge), conformal weights,
//!   `su(2)` generator matrices and Fateev–Zamolodchikov lattice weights.
//! * [`numerics`]: Gauss hypergeometric function, Gauss–Jacobi quadrature and
//!   the cutoff-regularized Dotsenko–Fateev double integral.
//! * [`partition`]: pure partition functions, log-gradients and generator
//!   insertion ratios.
//! * [`loewner`]: composition of vertical-slit maps, tip tracking, collisions.
//! * [`driving`]: the coupled driving SDE and its drift terms.
//! * [`stochastic`]: Bessel reduction of the two-curve problem.
//! * [`crossing`]: arch (crossing) probabilities and exponent diagnostics.
//! * [`mc`]: Monte-Carlo experiment harness with deterministic merging.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod crossing;
pub mod driving;
pub mod error;
pub mod io;
pub mod loewner;
pub mod mc;
pub mod numerics;
pub mod partition;
pub mod rng;
pub mod stats;
pub mod stochastic;

pub use error::{Error, Result};

/// Crate version recorded in result records and manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
