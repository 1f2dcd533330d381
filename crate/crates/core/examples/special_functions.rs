//! Gauss hypergeometric function, Gauss–Jacobi quadrature and the
//! cutoff-regularized Dotsenko–Fateev block.
//!
//! `cargo run --release --example special_functions`

use coset_sle::numerics::{df_block_estimate, gauss_jacobi, hyp2f1, DfConfig};

fn main() -> coset_sle::Result<()> {
    // 2F1(1/2, 1/2; 3/2; x²) = arcsin(x)/x
    for x in [0.3f64, 0.9, 0.999] {
        let f = hyp2f1(0.5, 0.5, 1.5, x * x)?;
        println!("2F1(1/2,1/2;3/2;{:.6}) = {f:.15}  arcsin(x)/x = {:.15}", x * x, x.asin() / x);
    }

    // ∫ (1−t)^{−1/2}(1+t)^{−1/2} dt over [−1, 1] is π
    let rule = gauss_jacobi(-0.5, -0.5, 8)?;
    println!("\nGauss-Jacobi(-1/2,-1/2) with 8 nodes: {:.15} (pi = {:.15})", rule.integrate(|_| 1.0), std::f64::consts::PI);

    let cfg = DfConfig::default();
    println!("\nDotsenko-Fateev block, n = 4 (eps = {:e}, {} nodes)", cfg.cutoff_epsilon, cfg.nodes_per_axis);
    for x in [1e-4, 1e-2, 0.1, 0.3, 0.5, 0.7, 0.9] {
        let e = df_block_estimate(4, x, &cfg)?;
        println!("  x = {x:<6} Z_C2 = {:.10e}  (refinement change {:.1e})", e.value, e.rel_change);
    }
    Ok(())
}
