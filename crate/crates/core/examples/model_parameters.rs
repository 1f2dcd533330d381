//! κ, τ, central charge and boundary weights, su(2) generators and
//! Fateev–Zamolodchikov lattice weights.
//!
//! `cargo run --example model_parameters`

use coset_sle::algebra::{fz_weights, model_params, su2_generators, Family};

fn main() -> coset_sle::Result<()> {
    println!("{:<18} {:>8} {:>10} {:>8} {:>8} {:>8}", "model", "kappa", "tau", "c", "h_bcc", "h_fused");
    let families = (4..=8).map(|n| Family::Parafermion { n }).chain((1..=4).map(|k| Family::Su2k { k }));
    for f in families {
        let m = model_params(f)?;
        println!(
            "{:<18} {:>8} {:>10} {:>8} {:>8} {:>8}",
            f.to_string(),
            m.kappa_exact(),
            m.tau_exact(),
            m.central_charge_exact(),
            m.bcc_weight_exact(),
            m.fused_weight_exact()
        );
    }

    let spin1 = su2_generators(2);
    println!("\nspin-1 Casimir eigenvalue: {}", spin1.casimir_eigenvalue());
    println!("spin-1 Cartan generator diagonal: {:?}", (0..3).map(|i| spin1.generator(2)[(i, i)].re).collect::<Vec<_>>());

    for n in [2, 3, 4, 5] {
        let w = fz_weights(n)?;
        println!("FZ weights n = {n}: {:?}", w.weights);
    }
    Ok(())
}
