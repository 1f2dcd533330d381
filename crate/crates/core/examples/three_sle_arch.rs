//! 3-SLE arch frequencies against the crossing probability.
//!
//! `cargo run --release --example three_sle_arch -- [samples] [model] [level] [x]`

use coset_sle::algebra::Family;
use coset_sle::crossing::crossing_probability;
use coset_sle::mc::{assign_channels, run_three_sle, ExperimentConfig};

fn main() -> coset_sle::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let samples: u64 = args.first().map_or(2000, |s| s.parse().expect("sample count"));
    let model = Family::from_name(
        args.get(1).map_or("su2k", String::as_str),
        args.get(2).map_or(2, |s| s.parse().expect("level")),
    )?;
    let x: f64 = args.get(3).map_or(0.25, |s| s.parse().expect("cross ratio"));

    let cfg = ExperimentConfig {
        samples,
        seed: 3,
        adaptive_c: std::env::var("ADAPTIVE_C").map_or(4e-3, |s| s.parse().expect("adaptive_c")),
        ..ExperimentConfig::three_sle(model, x)
    };
    let t0 = std::time::Instant::now();
    let (stats, _) = run_three_sle(&cfg)?;
    let p = crossing_probability(&cfg.model()?, x, &cfg.df)?;
    let a = assign_channels(&stats, p.p_c1);
    let f12 = stats.freq_12();
    println!("x = {x}: [12] {:.4} ± {:.4}, [23] {:.4}, unresolved {:.4}", f12.value, f12.std_error,
        stats.freq_23().value, stats.unresolved_fraction());
    println!("p_C1 = {:.4}; [12] matches {} (z = {:+.2} vs C1, {:+.2} vs C2); {:.1}s",
        p.p_c1, a.pair_12_channel, a.z_if_c1, a.z_if_c2, t0.elapsed().as_secs_f64());
    for e in stats.errors.iter().take(3) {
        println!("error: {e}");
    }
    Ok(())
}
