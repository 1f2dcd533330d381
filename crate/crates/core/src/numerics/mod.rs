//! Special-function and quadrature kernels.

mod dotsenko_fateev;
mod hypergeometric;
mod quadrature;
mod spline;

pub use dotsenko_fateev::{df_block, df_block_estimate, DfConfig, DfEstimate};
pub use hypergeometric::{hyp2f1, hyp2f1_series};
pub use quadrature::{gauss_jacobi, gauss_legendre, QuadratureRule};
pub use spline::UniformSpline;

/// `1/Γ(x)`, zero at the poles of Γ.
pub(crate) fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / libm::tgamma(x)
    }
}
