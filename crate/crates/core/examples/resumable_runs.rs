//! Extending a 3-SLE run over a new sample range and merging the counts:
//! the merged statistics equal one long run.
//!
//! `cargo run --release --example resumable_runs`

use coset_sle::algebra::Family;
use coset_sle::mc::{run_three_sle, ExperimentConfig};

fn main() -> coset_sle::Result<()> {
    let base = ExperimentConfig {
        samples: 300,
        seed: 12,
        ..ExperimentConfig::three_sle(Family::Su2k { k: 2 }, 0.4)
    };
    let (first, _) = run_three_sle(&base)?;
    let (second, _) = run_three_sle(&ExperimentConfig { sample_offset: 300, ..base.clone() })?;
    let (whole, _) = run_three_sle(&ExperimentConfig { samples: 600, ..base.clone() })?;
    let merged = first.merge(&second)?;
    println!("first  {:?}", (first.pair_12, first.pair_23, first.unresolved));
    println!("second {:?}", (second.pair_12, second.pair_23, second.unresolved));
    println!("merged {:?}", (merged.pair_12, merged.pair_23, merged.unresolved));
    println!("whole  {:?}", (whole.pair_12, whole.pair_23, whole.unresolved));
    assert_eq!(merged, whole);
    let f = merged.freq_12();
    println!("[12] frequency {:.4} ± {:.4}", f.value, f.std_error);

    let other_seed = ExperimentConfig { seed: 13, ..base };
    let (foreign, _) = run_three_sle(&other_seed)?;
    println!("merging a different seed: {}", first.merge(&foreign).unwrap_err());
    Ok(())
}
