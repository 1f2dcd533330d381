//! One 3-SLE sample of the coupled driving process, written as CSV
//! (`t, alpha, x_alpha, p_1, p_2, p_3`).
//!
//! `cargo run --release --example driving_trajectory -- [seed] > path.csv`

use coset_sle::algebra::{model_params, Family};
use coset_sle::driving::{record_trajectory, write_trajectory_csv, DrivingConfig, Outcome};
use coset_sle::loewner::LoewnerState;
use coset_sle::partition::{BlockEvaluator, BlockSelection, PurePartition};
use coset_sle::rng::SampleStreams;

fn main() -> coset_sle::Result<()> {
    let seed: u64 = std::env::args().nth(1).map_or(1, |s| s.parse().expect("seed"));
    let model = model_params(Family::Su2k { k: 2 })?;
    let z = PurePartition::four_point(&model, BlockSelection::Sum, BlockEvaluator::Hypergeometric)?;
    let mut cfg = DrivingConfig::new(model, z, 1e-3, 1e-4, seed)?;
    cfg.adaptive_c = 4e-3;

    let mut state = LoewnerState::new(vec![0.0, 0.3, 1.0])?.without_journal();
    let mut streams = SampleStreams::new(seed, 0, 3);
    let (outcome, points) = record_trajectory(&mut state, &cfg, &mut streams, 10.0, 20, 10_000_000)?;
    write_trajectory_csv(&points, std::io::stdout().lock())?;
    match outcome {
        Outcome::Collision(e) => eprintln!("tips {} met at t = {:.6}", e.label(), e.time),
        Outcome::Horizon => eprintln!("no collision before the horizon"),
    }
    Ok(())
}
