//! Martingale test of the crossing probability along short 3-SLE runs,
//! with the drift-free control.
//!
//! `cargo run --release --example prob_martingale -- [samples] [horizon] [x0]`

use coset_sle::algebra::{model_params, Family};
use coset_sle::crossing::{martingale_of_probability, ProbMartingaleConfig};
use coset_sle::driving::DriftMode;

fn main() -> coset_sle::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let samples: u64 = args.first().map_or(4000, |s| s.parse().expect("sample count"));
    let horizon: f64 = args.get(1).map_or(0.02, |s| s.parse().expect("horizon"));
    let x0: f64 = args.get(2).map_or(0.3, |s| s.parse().expect("cross ratio"));
    let model = model_params(Family::Su2k { k: 2 })?;
    for drift in [DriftMode::Full, DriftMode::Zeroed] {
        let cfg = ProbMartingaleConfig {
            horizon,
            drift,
            ..ProbMartingaleConfig::at_cross_ratio(x0)
        };
        let t0 = std::time::Instant::now();
        let e = martingale_of_probability(&model, &cfg, samples, 17)?;
        println!(
            "{drift:?}: E[P(x_T)] - P(x0) = {:+.5} ± {:.5}  (z = {:+.2}, {:.1}s)",
            e.value,
            e.std_error,
            e.z_score(0.0),
            t0.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
