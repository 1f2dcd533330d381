//! 2-SLE collision fractions against the matched Bessel process.
//!
//! `cargo run --release --example bessel_compare -- [samples] [channel]`

use coset_sle::mc::{run_bessel_compare, ExperimentConfig, ExperimentKind};
use coset_sle::partition::TwoSleChannel;

fn main() -> coset_sle::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples = args.next().map_or(Ok(2000), |s| s.parse()).expect("sample count");
    let channel = TwoSleChannel::from_name(&args.next().unwrap_or_else(|| "identity".into()))?;
    for horizon in [1.0, 100.0, 1e6] {
        let cfg = ExperimentConfig {
            experiment: ExperimentKind::Bessel,
            channel,
            horizon,
            samples,
            seed: 11,
            ..ExperimentConfig::default()
        };
        let t0 = std::time::Instant::now();
        let c = run_bessel_compare(&cfg)?;
        println!(
            "T = {horizon:>8}: d = {:.4}  sle {:.4} ± {:.4}  bessel {:.4} ± {:.4}  z = {:+.2}  ({:.1}s)",
            c.sle.d_eff,
            c.sle.collision_fraction.value,
            c.sle.collision_fraction.std_error,
            c.bessel.collision_fraction.value,
            c.bessel.collision_fraction.std_error,
            c.z_score,
            t0.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
