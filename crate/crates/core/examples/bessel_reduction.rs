//! Effective Bessel dimensions of the two 2-SLE channels, recurrence
//! classification and a hitting-probability check against `y^{2−d}`.
//!
//! `cargo run --release --example bessel_reduction`

use coset_sle::algebra::{model_params, Family};
use coset_sle::partition::{channel_weights_exact, TwoSleChannel};
use coset_sle::rng::{stream, Channel};
use coset_sle::stats::binomial;
use coset_sle::stochastic::{
    classify, effective_dimension_exact, hitting_probability, simulate_path, BesselScheme, BesselSpec, PathEnd,
};

fn main() -> coset_sle::Result<()> {
    for n in [4u32, 6, 10, 20] {
        let m = model_params(Family::Parafermion { n })?;
        for ch in [TwoSleChannel::Identity, TwoSleChannel::Fused] {
            let (_, delta) = channel_weights_exact(&m, ch, false)?;
            let d = effective_dimension_exact(delta, m.kappa_exact())?;
            let df = *d.numer() as f64 / *d.denom() as f64;
            println!("n = {n:>2} {ch:<9?} delta = {delta:>6}  d = {d:>7} ({:?})", classify(df));
        }
    }

    let (d, y0, lo, hi) = (3.0, 1.0, 0.5, 2.0);
    let spec = BesselSpec::new(d, y0)?;
    let scheme = BesselScheme {
        ds_max: 1e-3,
        bridge_correction: true,
        ..BesselScheme::default()
    };
    let n = 20_000u64;
    let hits = (0..n)
        .filter(|&i| {
            let mut rng = stream(5, i, 0, Channel::Auxiliary);
            matches!(simulate_path(&spec, &scheme, lo, hi, f64::INFINITY, &mut rng), Ok(PathEnd::Lower { .. }))
        })
        .count() as u64;
    let est = binomial(hits, n);
    println!(
        "\nd = 3: P(hit {lo} before {hi} from {y0}) = {:.4} ± {:.4}, exact {:.4}",
        est.value,
        est.std_error,
        hitting_probability(d, y0, lo, hi)
    );
    Ok(())
}
