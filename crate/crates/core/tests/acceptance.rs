//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so
//! the lines always print in order; exits nonzero if any criterion fails.
//!
//! `cargo test --release --test acceptance`

use std::time::Instant;

use num_complex::Complex64;
use num_rational::Rational64;

use coset_sle::algebra::{model_params, CosetModel, Family};
use coset_sle::crossing::{
    arch_probability_by_scale_function, asymptotic_exponent, crossing_probability,
    martingale_of_probability, Endpoint, ProbMartingaleConfig,
};
use coset_sle::driving::DriftMode;
use coset_sle::loewner::LoewnerState;
use coset_sle::mc::{
    assign_channels, four_point_partition, run_bessel_equivalent, run_three_sle, run_two_sle,
    ExperimentConfig, ExperimentKind, SampleOutcome,
};
use coset_sle::numerics::DfConfig;
use coset_sle::partition::{block_c2, channel_weights_exact, TwoSleChannel};
use coset_sle::stats::{binomial, binomial_se_at, Estimate};
use coset_sle::stochastic::{effective_dimension_exact, martingale_statistic, BesselScheme, BesselSpec};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn ok_if(pass: bool, detail: String) -> Check {
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pf(n: u32) -> CosetModel {
    model_params(Family::Parafermion { n }).unwrap()
}

fn su2(k: u32) -> CosetModel {
    model_params(Family::Su2k { k }).unwrap()
}

fn parameter_exactness() -> Check {
    let mut bad = Vec::new();
    for n in 4..=16i64 {
        let m = pf(n as u32);
        let want = (r(4 * (n + 1), n + 3), r(4 * n * n * n, (n + 2).pow(3)), r(2 * (n - 1), n + 2));
        let got = (m.kappa_exact(), m.tau_exact(), m.central_charge_exact());
        if got != want {
            bad.push(format!("parafermion n={n}: {got:?} != {want:?}"));
        }
    }
    for k in 1..=8i64 {
        let m = su2(k as u32);
        let want = (r(4 * (k + 2), k + 3), r(2, k + 3), r(3 * k, k + 2));
        let got = (m.kappa_exact(), m.tau_exact(), m.central_charge_exact());
        if got != want {
            bad.push(format!("su2k k={k}: {got:?} != {want:?}"));
        }
    }
    let k2 = su2(2);
    if (k2.kappa_exact(), k2.tau_exact()) != (r(16, 5), r(2, 5)) {
        bad.push("su2k k=2 is not (16/5, 2/5)".into());
    }
    ok_if(
        bad.is_empty(),
        if bad.is_empty() {
            "13 parafermion and 8 SU(2)_k levels exact; k=2 gives kappa 16/5, tau 2/5".into()
        } else {
            bad.join("; ")
        },
    )
}

fn effective_dimension_reproduction() -> Check {
    let mut bad = Vec::new();
    for n in 4..=32i64 {
        let m = pf(n as u32);
        let k = m.kappa_exact();
        let (_, d_id) = channel_weights_exact(&m, TwoSleChannel::Identity, false).unwrap();
        let (_, d_f) = channel_weights_exact(&m, TwoSleChannel::Fused, false).unwrap();
        let lo = effective_dimension_exact(d_id, k).unwrap();
        let hi = effective_dimension_exact(d_f, k).unwrap();
        let want_lo = r(2, 1) - r(3 * n + 2, (n + 1) * (n + 2));
        let want_hi = r(2, 1) + r(3 * n + 6, (n + 1) * (n + 2));
        if lo != want_lo || hi != want_hi {
            bad.push(format!("n={n}: ({lo}, {hi}) vs ({want_lo}, {want_hi})"));
        }
    }
    ok_if(
        bad.is_empty(),
        if bad.is_empty() {
            "29 levels match".into()
        } else {
            format!(
                "2*Delta + 4/kappa + 1 differs from the closed forms at {} of 29 levels, first {}",
                bad.len(),
                bad[0]
            )
        },
    )
}

fn slit_map_oracle() -> Check {
    let dt: f64 = 1e-5;
    let t_end: f64 = 1.0;
    let steps = (t_end / dt).round() as usize;
    let mut state = LoewnerState::new(vec![0.0]).unwrap();
    for _ in 0..steps {
        state.slit_step(&[dt], &[0.0]).unwrap();
    }
    let t = state.time();
    let mut worst: f64 = 0.0;
    for re in [-3.0, -1.5, 1.5, 3.0] {
        for im in [0.5, 1.0, 2.0, 3.0, 4.0] {
            let z = Complex64::new(re, im);
            let got = state.evaluate_map(z).unwrap();
            let want = (z * z + 4.0 * t).sqrt();
            let want = if want.im < 0.0 { -want } else { want };
            worst = worst.max((got - want).norm() / want.norm());
        }
    }
    ok_if(worst <= 1e-6, format!("max relative error {worst:.2e} at 20 points, t = {t}"))
}

fn fraction_at(outcomes: &[SampleOutcome], horizon: f64) -> Estimate {
    let hits = outcomes
        .iter()
        .filter(|o| o.event_time().is_some_and(|t| t <= horizon))
        .count() as u64;
    binomial(hits, outcomes.len() as u64)
}

fn bessel_equivalence() -> Check {
    let horizons = [1.0, 100.0, 1e6];
    let mut lines = Vec::new();
    let mut pass = true;
    for channel in [TwoSleChannel::Identity, TwoSleChannel::Fused] {
        let cfg = ExperimentConfig {
            experiment: ExperimentKind::Bessel,
            channel,
            horizon: horizons[2],
            epsilon_collision: Some(1e-2),
            samples: 10_000,
            seed: 2024,
            ..ExperimentConfig::default()
        };
        let (sle, sle_out) = run_two_sle(&cfg).map_err(|e| e.to_string())?;
        let (_, bes_out) = run_bessel_equivalent(&cfg).map_err(|e| e.to_string())?;
        if sle.unresolved > 0 {
            pass = false;
            lines.push(format!("{channel:?}: {} unresolved samples", sle.unresolved));
        }
        let mut prev = -1.0;
        for &h in &horizons {
            let (a, b) = (fraction_at(&sle_out, h), fraction_at(&bes_out, h));
            let se = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
            let z = if se > 0.0 { (a.value - b.value) / se } else { 0.0 };
            pass &= z.abs() <= 4.0 && a.value >= prev;
            prev = a.value;
            lines.push(format!(
                "{channel:?} d={:.4} T={h}: sle {:.4} bessel {:.4} z={z:+.2}",
                sle.d_eff, a.value, b.value
            ));
        }
        let last = fraction_at(&sle_out, horizons[2]).value;
        match channel {
            TwoSleChannel::Identity => pass &= last >= 0.99,
            _ => pass &= last < 0.5,
        }
    }
    ok_if(pass, lines.join("; "))
}

fn martingale_surrogates() -> Check {
    let scheme = BesselScheme {
        ds_max: 1e-3,
        adaptive_c: 1e-3,
        absorb_at: 1e-4,
        ..BesselScheme::default()
    };
    let mut lines = Vec::new();
    let mut pass = true;
    for d in [23.0 / 15.0, 2.6, 3.0] {
        let spec = BesselSpec::new(d, 1.0).unwrap();
        let e = martingale_statistic(&spec, 0.05, 20_000, 7, &scheme).map_err(|e| e.to_string())?;
        pass &= e.within_sigmas(0.0, 4.0);
        lines.push(format!("scale d={d:.4}: z={:+.2}", e.z_score(0.0)));
    }
    let model = su2(2);
    let full = ProbMartingaleConfig::at_cross_ratio(0.3);
    let zeroed = ProbMartingaleConfig {
        drift: DriftMode::Zeroed,
        ..full.clone()
    };
    let e = martingale_of_probability(&model, &full, 10_000, 17).map_err(|e| e.to_string())?;
    let c = martingale_of_probability(&model, &zeroed, 10_000, 17).map_err(|e| e.to_string())?;
    pass &= e.within_sigmas(0.0, 4.0) && c.z_score(0.0).abs() > 4.0;
    lines.push(format!(
        "P martingale z={:+.2}, zeroed-drift control z={:+.2}",
        e.z_score(0.0),
        c.z_score(0.0)
    ));
    ok_if(pass, lines.join("; "))
}

fn symmetry_and_normalization() -> Check {
    let grid: Vec<f64> = (1..=19).map(|i| i as f64 * 0.05).collect();
    let cfg = DfConfig::default();
    let mut lines = Vec::new();
    let mut pass = true;
    for (model, tol) in [(su2(2), 1e-9), (pf(4), 1e-4)] {
        let mut worst: f64 = 0.0;
        let mut sum_exact = true;
        for &x in &grid {
            let a = crossing_probability(&model, x, &cfg).map_err(|e| e.to_string())?;
            let b = crossing_probability(&model, 1.0 - x, &cfg).map_err(|e| e.to_string())?;
            sum_exact &= a.p_c1 + a.p_c2 == 1.0;
            worst = worst.max((a.p_c1 - b.p_c2).abs());
        }
        let half = crossing_probability(&model, 0.5, &cfg).map_err(|e| e.to_string())?;
        let half_exact = half.p_c1 == 0.5 && half.p_c2 == 0.5;
        pass &= sum_exact && half_exact && worst <= tol;
        lines.push(format!(
            "{}: sum exact {sum_exact}, p(1/2) exact {half_exact}, mirror defect {worst:.1e}",
            model.family.name()
        ));
    }
    ok_if(pass, lines.join("; "))
}

fn fusion_asymptotics() -> Check {
    let cfg = DfConfig::default();
    let su = su2(2);
    let fit = asymptotic_exponent(|x| block_c2(&su, x, &cfg), Endpoint::Zero, &[1e-3, 1e-4, 1e-5])
        .map_err(|e| e.to_string())?;
    let mut pass = (fit.slope - 0.125).abs() <= 0.01;
    let mut lines = vec![format!("su2k k=2 slope {:.5}", fit.slope)];
    let p4 = pf(4);
    for c in [cfg, cfg.with_cutoff(cfg.cutoff_epsilon / 2.0).with_nodes(2 * cfg.nodes_per_axis)] {
        let fit = asymptotic_exponent(|x| block_c2(&p4, x, &c), Endpoint::Zero, &[1e-2, 1e-3, 1e-4])
            .map_err(|e| e.to_string())?;
        pass &= (fit.slope - 1.0 / 3.0).abs() <= 0.02;
        lines.push(format!(
            "parafermion n=4 slope {:.5} (eps {:.0e}, nodes {})",
            fit.slope, c.cutoff_epsilon, c.nodes_per_axis
        ));
    }
    ok_if(pass, lines.join("; "))
}

fn arch_closure() -> Check {
    let model = Family::Su2k { k: 2 };
    let mut lines = Vec::new();
    let mut pass = true;
    let mut mapping: Option<String> = None;
    for x in [0.25, 0.5, 0.75] {
        let cfg = ExperimentConfig {
            samples: 10_000,
            seed: 8,
            ..ExperimentConfig::three_sle(model, x)
        };
        let (stats, _) = run_three_sle(&cfg).map_err(|e| e.to_string())?;
        let p = crossing_probability(&cfg.model().unwrap(), x, &cfg.df).map_err(|e| e.to_string())?;
        let assigned = assign_channels(&stats, p.p_c1);
        let label = mapping.get_or_insert_with(|| assigned.pair_12_channel.clone()).clone();
        let target = if label == "C1" { p.p_c1 } else { p.p_c2 };
        let f = stats.freq_12();
        let z = (f.value - target) / binomial_se_at(target, stats.samples());
        let unresolved = stats.unresolved_fraction();
        pass &= z.abs() <= 4.0 && unresolved < 0.02;
        lines.push(format!(
            "x={x}: [12] {:.4} vs p_{label} {:.4} z={z:+.2}, unresolved {:.4}",
            f.value, target, unresolved
        ));
    }
    lines.push(format!("[12] arch matched to channel {}", mapping.unwrap_or_default()));
    ok_if(pass, lines.join("; "))
}

fn df_robustness() -> Check {
    let model = pf(4);
    let base = DfConfig::default();
    let fine = base.with_cutoff(base.cutoff_epsilon / 2.0).with_nodes(2 * base.nodes_per_axis);
    let mut worst: f64 = 0.0;
    for x in [0.1, 0.2, 0.3, 0.4, 0.5] {
        let a = crossing_probability(&model, x, &base).map_err(|e| e.to_string())?;
        let b = crossing_probability(&model, x, &fine).map_err(|e| e.to_string())?;
        worst = worst.max((a.p_c1 - b.p_c1).abs());
    }
    ok_if(worst < 1e-3, format!("max change {worst:.2e} over x = 0.1..0.5"))
}

/// Reported, never gated: the parafermion arch comparison and the exact
/// exit probability of the simulated cross-ratio diffusion.
fn informational() -> Vec<String> {
    let mut out = Vec::new();
    let su = su2(2);
    let z = four_point_partition(&su, &DfConfig::default()).unwrap();
    for x in [0.25, 0.5, 0.75] {
        let exact = arch_probability_by_scale_function(&z, su.kappa, x, 20_001).unwrap();
        let p = crossing_probability(&su, x, &DfConfig::default()).unwrap();
        out.push(format!(
            "su2k k=2 x={x}: scale-function P([12] first) {exact:.4}, crossing formula p_C1 {:.4}",
            p.p_c1
        ));
    }
    let cfg = ExperimentConfig {
        samples: 10_000,
        seed: 8,
        ..ExperimentConfig::three_sle(Family::Parafermion { n: 4 }, 0.25)
    };
    match run_three_sle(&cfg) {
        Ok((stats, _)) => {
            let model = cfg.model().unwrap();
            let p = crossing_probability(&model, 0.25, &cfg.df).unwrap();
            let a = assign_channels(&stats, p.p_c1);
            let z = four_point_partition(&model, &cfg.df).unwrap();
            let exact = arch_probability_by_scale_function(&z, model.kappa, 0.25, 20_001).unwrap();
            out.push(format!(
                "parafermion n=4 x=0.25: [12] {:.4} ± {:.4}, p_C1 {:.4} (z {:+.2}), scale-function {exact:.4}, unresolved {:.4}",
                stats.freq_12().value,
                stats.freq_12().std_error,
                p.p_c1,
                a.z_if_c1,
                stats.unresolved_fraction()
            ));
        }
        Err(e) => out.push(format!("parafermion n=4 arch run failed: {e}")),
    }
    out
}

fn main() {
    // `cargo test` passes harness flags such as `--list`; only run for real.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 9] = [
        ("parameter exactness", parameter_exactness),
        ("effective-dimension reproduction", effective_dimension_reproduction),
        ("slit-map oracle", slit_map_oracle),
        ("Bessel equivalence", bessel_equivalence),
        ("martingale surrogates", martingale_surrogates),
        ("crossing symmetry and normalization", symmetry_and_normalization),
        ("fusion-channel asymptotics", fusion_asymptotics),
        ("arch-probability closure", arch_closure),
        ("Dotsenko-Fateev robustness", df_robustness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {} {tag}: {name} ({:.1}s): {detail}",
            i + 1,
            started.elapsed().as_secs_f64()
        );
    }
    for line in informational() {
        println!("info: {line}");
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
