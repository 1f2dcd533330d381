//! Vertical-slit Loewner chain: single-curve oracle `g_t(z) = √(z² + 4t)` and
//! a two-curve journal written as CSV.
//!
//! `cargo run --release --example loewner_slit_map`

use num_complex::Complex64;

use coset_sle::loewner::LoewnerState;

fn main() -> coset_sle::Result<()> {
    let dt = 1e-4;
    let mut single = LoewnerState::new(vec![0.0])?;
    for _ in 0..10_000 {
        single.slit_step(&[dt], &[0.0])?;
    }
    let t = single.time();
    for z in [Complex64::new(1.0, 1.0), Complex64::new(-2.0, 0.5), Complex64::new(0.0, 3.0)] {
        let root = (z * z + 4.0 * t).sqrt();
        // branch in the upper half-plane
        let exact = if root.im < 0.0 { -root } else { root };
        println!("g_t({z}) = {:.12}  exact {:.12}", single.evaluate_map(z)?, exact);
    }

    // two tips drifting apart
    let mut two = LoewnerState::new(vec![-0.5, 0.5])?;
    for k in 1..=5 {
        let s = 0.1 * k as f64;
        two.slit_step(&[dt, dt], &[-0.5 - s, 0.5 + s])?;
    }
    println!("\ntwo-curve journal:");
    two.write_journal_csv(std::io::stdout().lock())?;
    println!("smallest gap: {:?}", two.min_gap());
    Ok(())
}
