//! Pure partition functions, their log-gradients and generator insertions.
//!
//! `cargo run --release --example partition_functions`

use coset_sle::algebra::{model_params, su2_generators, Family};
use coset_sle::numerics::DfConfig;
use coset_sle::partition::{BlockEvaluator, BlockSelection, PurePartition, TwoSleChannel};

fn main() -> coset_sle::Result<()> {
    let pf4 = model_params(Family::Parafermion { n: 4 })?;
    for channel in [TwoSleChannel::Identity, TwoSleChannel::Fused] {
        let z = PurePartition::two_sle(&pf4, channel, false)?;
        let x = [0.0, 1.5];
        println!("2-SLE {channel:?}: Z{x:?} = {:.6}, grad ln Z = {:?}", z.value(&x)?, z.log_gradient(&x)?);
    }

    let su2 = model_params(Family::Su2k { k: 2 })?;
    let z = PurePartition::four_point(&su2, BlockSelection::Sum, BlockEvaluator::Hypergeometric)?;
    let x = [0.0, 0.25, 1.0];
    println!("\nSU(2)_2 four-point Z{x:?} = {:.6}", z.value(&x)?);
    println!("grad ln Z = {:?}", z.log_gradient(&x)?);
    let (c1, c2) = z.ln_channels(0.25)?;
    println!("ln Z_C1 = {c1:.6}, ln Z_C2 = {c2:.6}");
    let irreps = vec![su2_generators(su2.bcc_twice_spin()); 3];
    // curves 1 and 2 form a singlet, so only curve 3 carries a spin
    for beta in 0..3 {
        let values: Vec<f64> = (0..3)
            .map(|a| z.insertion_ratio(&irreps, a, beta).map(|r| r.value()))
            .collect::<coset_sle::Result<_>>()?;
        println!("insertions t^1..t^3 at curve {}: {values:?}", beta + 1);
    }

    let df = PurePartition::four_point(&pf4, BlockSelection::Sum, BlockEvaluator::DotsenkoFateev(DfConfig::default()))?;
    println!("\nparafermion n = 4 four-point grad ln Z at {x:?}: {:?}", df.log_gradient(&x)?);
    Ok(())
}
