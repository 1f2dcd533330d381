//! Monte-Carlo experiments: 2-SLE collisions, 3-SLE arch classification,
//! direct Bessel comparison and the crossing-probability martingale.
//!
//! Sample `i` draws only from the streams indexed by `i`, and results are
//! reduced in index order, so counts do not depend on the worker count and
//! runs can be extended by continuing the sample range under the same seed.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{model_params, CosetModel, Family};
use crate::crossing::{martingale_of_probability_with, ProbMartingaleConfig};
use crate::driving::{evolve, DriftMode, DrivingConfig, NoiseMode, Outcome};
use crate::loewner::LoewnerState;
use crate::numerics::DfConfig;
use crate::partition::{
    channel_weights, BlockEvaluator, BlockSelection, BlockTable, PurePartition, TwoSleChannel,
};
use crate::rng::{stream, Channel, SampleStreams};
use crate::stats::{binomial, Estimate, MeanAccumulator};
use crate::stochastic::{effective_dimension, simulate_path, BesselScheme, BesselSpec, PathEnd};
use crate::{Error, Result, VERSION};

/// Version of the result-record layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Map `f` over sample indices `start..start+count` on `jobs` workers
/// (`0` = rayon's default pool) and return results in index order.
pub fn par_samples<T, F>(jobs: usize, start: u64, count: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let run = || -> Result<Vec<T>> { (start..start + count).into_par_iter().map(&f).collect() };
    if jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::numeric(format!("cannot build worker pool: {e}")))?
            .install(run)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    TwoSle,
    ThreeSle,
    Bessel,
    ProbMartingale,
}

impl ExperimentKind {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "two-sle" => Ok(ExperimentKind::TwoSle),
            "three-sle" => Ok(ExperimentKind::ThreeSle),
            "bessel" => Ok(ExperimentKind::Bessel),
            "prob-martingale" => Ok(ExperimentKind::ProbMartingale),
            other => Err(Error::domain(format!("unknown experiment `{other}`"))),
        }
    }
}

/// Full description of a Monte-Carlo run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub model: Family,
    pub experiment: ExperimentKind,
    /// 2-SLE fusion channel.
    pub channel: TwoSleChannel,
    pub allow_unphysical: bool,
    /// Initial tips in increasing order; empty means the experiment default.
    pub positions: Vec<f64>,
    /// Cross ratio for 3-SLE runs when `positions` is empty.
    pub cross_ratio: f64,
    /// Largest time step; `null` in JSON for no cap.
    #[serde(with = "crate::io::unbounded")]
    pub dt: f64,
    /// Step cap `adaptive_c · (min gap)²`.
    pub adaptive_c: f64,
    pub horizon: f64,
    /// Absolute collision threshold; `None` uses `1e-4 ×` initial spread.
    pub epsilon_collision: Option<f64>,
    pub samples: u64,
    /// First sample index, for extending an earlier run.
    pub sample_offset: u64,
    pub seed: u64,
    pub jobs: usize,
    pub noise: NoiseMode,
    pub drift: DriftMode,
    pub df: DfConfig,
    pub max_steps: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            model: Family::Parafermion { n: 4 },
            experiment: ExperimentKind::TwoSle,
            channel: TwoSleChannel::Identity,
            allow_unphysical: false,
            positions: Vec::new(),
            cross_ratio: 0.5,
            dt: f64::INFINITY,
            adaptive_c: 1e-3,
            horizon: 1e9,
            epsilon_collision: None,
            samples: 1000,
            sample_offset: 0,
            seed: 0,
            jobs: 0,
            noise: NoiseMode::Brownian,
            drift: DriftMode::Full,
            df: DfConfig::default(),
            max_steps: 100_000_000,
        }
    }
}

impl ExperimentConfig {
    /// Defaults for a 3-SLE arch experiment at cross ratio `x`.
    pub fn three_sle(model: Family, x: f64) -> Self {
        ExperimentConfig {
            model,
            experiment: ExperimentKind::ThreeSle,
            cross_ratio: x,
            adaptive_c: 4e-3,
            horizon: 1e6,
            ..ExperimentConfig::default()
        }
    }

    pub fn model(&self) -> Result<CosetModel> {
        model_params(self.model)
    }

    pub fn initial_positions(&self) -> Result<Vec<f64>> {
        let pos = if !self.positions.is_empty() {
            self.positions.clone()
        } else {
            match self.experiment {
                ExperimentKind::TwoSle | ExperimentKind::Bessel => vec![-0.5, 0.5],
                ExperimentKind::ThreeSle | ExperimentKind::ProbMartingale => {
                    if !(self.cross_ratio > 0.0 && self.cross_ratio < 1.0) {
                        return Err(Error::domain(format!(
                            "cross ratio {} outside (0, 1)",
                            self.cross_ratio
                        )));
                    }
                    vec![0.0, self.cross_ratio, 1.0]
                }
            }
        };
        let expected = match self.experiment {
            ExperimentKind::TwoSle | ExperimentKind::Bessel => 2,
            ExperimentKind::ThreeSle | ExperimentKind::ProbMartingale => 3,
        };
        if pos.len() != expected {
            return Err(Error::domain(format!(
                "experiment needs {expected} positions, got {}",
                pos.len()
            )));
        }
        if pos.iter().any(|p| !p.is_finite()) || pos.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain(format!("positions {pos:?} not strictly increasing")));
        }
        Ok(pos)
    }

    pub fn epsilon(&self) -> Result<f64> {
        match self.epsilon_collision {
            Some(e) => Ok(e),
            None => {
                let pos = self.initial_positions()?;
                Ok(crate::loewner::DEFAULT_COLLISION_FRACTION * (pos[pos.len() - 1] - pos[0]))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model()?;
        self.initial_positions()?;
        if self.samples < 1 {
            return Err(Error::domain("samples must be >= 1"));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::domain("horizon must be positive"));
        }
        if !(self.dt > 0.0) {
            return Err(Error::domain("dt must be positive"));
        }
        if self.dt.is_infinite() && !(self.adaptive_c > 0.0) {
            return Err(Error::domain("an unbounded dt needs adaptive_c > 0"));
        }
        if !(self.epsilon()? > 0.0) {
            return Err(Error::domain("epsilon_collision must be positive"));
        }
        if matches!(self.experiment, ExperimentKind::ThreeSle | ExperimentKind::ProbMartingale) {
            if let Family::Parafermion { n } = self.model {
                if n < 4 {
                    return Err(Error::domain("four-point blocks need parafermion n >= 4"));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the configuration without the sample range and worker
    /// count; runs with equal hashes can be merged.
    pub fn fingerprint(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = value.as_object_mut() {
            for key in ["samples", "sample_offset", "jobs"] {
                map.remove(key);
            }
        }
        let canonical = serde_json::to_string(&value).expect("value serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

/// Per-sample outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SampleOutcome {
    /// Adjacent tips `(α, α+1)` (0-based) met at time `t`.
    Collision { pair: (usize, usize), t: f64 },
    /// Horizon reached without collision.
    Survived,
    /// Simulation failed; reported, never dropped.
    Unresolved { error: String },
}

impl SampleOutcome {
    pub fn label(&self) -> String {
        match self {
            SampleOutcome::Collision { pair, .. } => format!("[{}{}]", pair.0 + 1, pair.1 + 1),
            SampleOutcome::Survived => "survived".into(),
            SampleOutcome::Unresolved { .. } => "unresolved".into(),
        }
    }

    pub fn event_time(&self) -> Option<f64> {
        match self {
            SampleOutcome::Collision { t, .. } => Some(*t),
            _ => None,
        }
    }
}

/// CSV with columns `sample,outcome,t_event`.
pub fn write_samples_csv<W: Write>(start: u64, outcomes: &[SampleOutcome], mut out: W) -> Result<()> {
    writeln!(out, "sample,outcome,t_event")?;
    for (i, o) in outcomes.iter().enumerate() {
        let t = o.event_time().map(|t| t.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{}", start + i as u64, o.label(), t)?;
    }
    Ok(())
}

fn run_driven(cfg: &ExperimentConfig, driving: &DrivingConfig, positions: &[f64]) -> Result<Vec<SampleOutcome>> {
    par_samples(cfg.jobs, cfg.sample_offset, cfg.samples, |i| {
        let mut state = LoewnerState::new(positions.to_vec())?.without_journal();
        let mut streams = SampleStreams::new(cfg.seed, i, positions.len());
        Ok(match evolve(&mut state, driving, &mut streams, cfg.horizon, cfg.max_steps) {
            Ok(Outcome::Collision(e)) => SampleOutcome::Collision { pair: e.pair, t: e.time },
            Ok(Outcome::Horizon) => SampleOutcome::Survived,
            Err(e) => SampleOutcome::Unresolved { error: e.to_string() },
        })
    })
}

fn driving_for(cfg: &ExperimentConfig, z: PurePartition) -> Result<DrivingConfig> {
    let model = cfg.model()?;
    let mut driving = DrivingConfig::new(model, z, cfg.dt, cfg.epsilon()?, cfg.seed)?;
    driving.adaptive_c = cfg.adaptive_c;
    driving.noise = cfg.noise;
    driving.drift = cfg.drift;
    Ok(driving)
}

/// Collision statistics of a 2-SLE run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoSleSummary {
    pub samples: u64,
    pub collided: u64,
    pub survived: u64,
    pub unresolved: u64,
    /// Fraction of resolved samples that collided.
    pub collision_fraction: Estimate,
    /// Mean collision time over colliding samples.
    pub mean_collision_time: Option<Estimate>,
    pub d_eff: f64,
    pub errors: Vec<String>,
}

impl TwoSleSummary {
    fn from_outcomes(outcomes: &[SampleOutcome], d_eff: f64) -> Self {
        let mut s = TwoSleSummary {
            samples: outcomes.len() as u64,
            collided: 0,
            survived: 0,
            unresolved: 0,
            collision_fraction: binomial(0, 0),
            mean_collision_time: None,
            d_eff,
            errors: Vec::new(),
        };
        let mut times = MeanAccumulator::default();
        for o in outcomes {
            match o {
                SampleOutcome::Collision { t, .. } => {
                    s.collided += 1;
                    times.push(*t);
                }
                SampleOutcome::Survived => s.survived += 1,
                SampleOutcome::Unresolved { error } => {
                    s.unresolved += 1;
                    if s.errors.len() < 10 {
                        s.errors.push(error.clone());
                    }
                }
            }
        }
        s.collision_fraction = binomial(s.collided, s.collided + s.survived);
        if times.count > 0 {
            s.mean_collision_time = Some(Estimate {
                value: times.mean,
                std_error: times.std_error(),
            });
        }
        s
    }
}

/// 2-SLE with `Z = (x2 − x1)^Δ` for the configured channel, run until
/// collision or the horizon.
pub fn run_two_sle(cfg: &ExperimentConfig) -> Result<(TwoSleSummary, Vec<SampleOutcome>)> {
    cfg.validate()?;
    let model = cfg.model()?;
    let z = PurePartition::two_sle(&model, cfg.channel, cfg.allow_unphysical)?;
    let delta = channel_weights(&model, cfg.channel, cfg.allow_unphysical)?.delta;
    let d_eff = effective_dimension(delta, model.kappa)?;
    let positions = cfg.initial_positions()?;
    let driving = driving_for(cfg, z)?;
    let outcomes = run_driven(cfg, &driving, &positions)?;
    Ok((TwoSleSummary::from_outcomes(&outcomes, d_eff), outcomes))
}

/// The same experiment on the reduced Bessel process: gap `y = (x2 − x1)/√2`,
/// time `s = κ t`, threshold `ε/√2`, step cap `2κ·adaptive_c·y²`.
pub fn run_bessel_equivalent(cfg: &ExperimentConfig) -> Result<(TwoSleSummary, Vec<SampleOutcome>)> {
    cfg.validate()?;
    let model = cfg.model()?;
    let delta = channel_weights(&model, cfg.channel, cfg.allow_unphysical)?.delta;
    let d_eff = effective_dimension(delta, model.kappa)?;
    let pos = cfg.initial_positions()?;
    let root2 = std::f64::consts::SQRT_2;
    let spec = BesselSpec::new(d_eff, (pos[1] - pos[0]) / root2)?;
    let scheme = BesselScheme {
        ds_max: cfg.dt * model.kappa,
        adaptive_c: 2.0 * model.kappa * cfg.adaptive_c,
        absorb_at: cfg.epsilon()? / root2,
        bridge_correction: false,
        noise: cfg.noise,
        max_steps: cfg.max_steps,
    };
    let horizon = model.kappa * cfg.horizon;
    let outcomes = par_samples(cfg.jobs, cfg.sample_offset, cfg.samples, |i| {
        let mut rng = stream(cfg.seed, i, 0, Channel::Auxiliary);
        Ok(
            match simulate_path(&spec, &scheme, scheme.absorb_at, f64::INFINITY, horizon, &mut rng) {
                Ok(PathEnd::Lower { s }) => SampleOutcome::Collision {
                    pair: (0, 1),
                    t: s / model.kappa,
                },
                Ok(_) => SampleOutcome::Survived,
                Err(e) => SampleOutcome::Unresolved { error: e.to_string() },
            },
        )
    })?;
    Ok((TwoSleSummary::from_outcomes(&outcomes, d_eff), outcomes))
}

/// Side-by-side 2-SLE and Bessel collision fractions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BesselComparison {
    pub sle: TwoSleSummary,
    pub bessel: TwoSleSummary,
    /// Difference of the fractions in units of its combined standard error.
    pub z_score: f64,
}

pub fn run_bessel_compare(cfg: &ExperimentConfig) -> Result<BesselComparison> {
    let (sle, _) = run_two_sle(cfg)?;
    let (bessel, _) = run_bessel_equivalent(cfg)?;
    let (a, b) = (sle.collision_fraction, bessel.collision_fraction);
    let se = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    let z_score = if se > 0.0 {
        (a.value - b.value) / se
    } else if a.value == b.value {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(BesselComparison { sle, bessel, z_score })
}

/// Counts of 3-SLE arch configurations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchStatistics {
    /// Configuration fingerprint; only equal fingerprints merge.
    pub fingerprint: String,
    /// First collision of tips 1 and 2: `[X1 X2][X3 X4]`.
    pub pair_12: u64,
    /// First collision of tips 2 and 3: `[X1 [X2 X3] X4]`.
    pub pair_23: u64,
    /// No collision before the horizon, or a failed sample.
    pub unresolved: u64,
    pub errors: Vec<String>,
}

impl ArchStatistics {
    pub fn empty(fingerprint: impl Into<String>) -> Self {
        ArchStatistics {
            fingerprint: fingerprint.into(),
            pair_12: 0,
            pair_23: 0,
            unresolved: 0,
            errors: Vec::new(),
        }
    }

    pub fn samples(&self) -> u64 {
        self.pair_12 + self.pair_23 + self.unresolved
    }

    pub fn freq_12(&self) -> Estimate {
        binomial(self.pair_12, self.samples())
    }

    pub fn freq_23(&self) -> Estimate {
        binomial(self.pair_23, self.samples())
    }

    pub fn unresolved_fraction(&self) -> f64 {
        self.unresolved as f64 / self.samples() as f64
    }

    pub fn record(&mut self, outcome: &SampleOutcome) -> Result<()> {
        match outcome {
            SampleOutcome::Collision { pair: (0, 1), .. } => self.pair_12 += 1,
            SampleOutcome::Collision { pair: (1, 2), .. } => self.pair_23 += 1,
            SampleOutcome::Collision { pair, .. } => {
                return Err(Error::numeric(format!(
                    "non-adjacent collision {pair:?} is impossible for ordered tips"
                )))
            }
            SampleOutcome::Survived => self.unresolved += 1,
            SampleOutcome::Unresolved { error } => {
                self.unresolved += 1;
                self.errors.push(error.clone());
            }
        }
        Ok(())
    }

    /// Add counts of two runs with the same fingerprint.
    pub fn merge(&self, other: &ArchStatistics) -> Result<ArchStatistics> {
        if self.fingerprint != other.fingerprint {
            return Err(Error::domain(format!(
                "cannot merge runs with fingerprints {} and {}",
                self.fingerprint, other.fingerprint
            )));
        }
        let mut errors = self.errors.clone();
        errors.extend(other.errors.iter().cloned());
        errors.sort();
        Ok(ArchStatistics {
            fingerprint: self.fingerprint.clone(),
            pair_12: self.pair_12 + other.pair_12,
            pair_23: self.pair_23 + other.pair_23,
            unresolved: self.unresolved + other.unresolved,
            errors,
        })
    }
}

/// Four-point partition function for the model, tabulating the
/// Dotsenko–Fateev block once for parafermions.
pub fn four_point_partition(model: &CosetModel, df: &DfConfig) -> Result<PurePartition> {
    let evaluator = match model.family {
        Family::Su2k { .. } => BlockEvaluator::Hypergeometric,
        Family::Parafermion { n } => {
            BlockEvaluator::Tabulated(Arc::new(BlockTable::dotsenko_fateev(n, *df, 14.0, 0.25)?))
        }
    };
    PurePartition::four_point(model, BlockSelection::Sum, evaluator)
}

/// 3-SLE with the two-channel partition function, classified by the first
/// adjacent collision.
pub fn run_three_sle(cfg: &ExperimentConfig) -> Result<(ArchStatistics, Vec<SampleOutcome>)> {
    cfg.validate()?;
    let model = cfg.model()?;
    let z = four_point_partition(&model, &cfg.df)?;
    let driving = driving_for(cfg, z)?;
    let positions = cfg.initial_positions()?;
    let outcomes = run_driven(cfg, &driving, &positions)?;
    let mut stats = ArchStatistics::empty(cfg.fingerprint());
    for o in &outcomes {
        stats.record(o)?;
    }
    Ok((stats, outcomes))
}

/// Which channel label matches which arch, decided from the data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelAssignment {
    /// Label of the channel matched with the `[12]` arch.
    pub pair_12_channel: String,
    /// z-scores of `[12]` against `p_C1` and against `p_C2`.
    pub z_if_c1: f64,
    pub z_if_c2: f64,
}

/// Compare `[12]` frequencies with both channel probabilities.
pub fn assign_channels(stats: &ArchStatistics, p_c1: f64) -> ChannelAssignment {
    let f = stats.freq_12();
    let se = crate::stats::binomial_se_at(p_c1, stats.samples()).max(1e-300);
    let z_if_c1 = (f.value - p_c1) / se;
    let z_if_c2 = (f.value - (1.0 - p_c1)) / se;
    ChannelAssignment {
        pair_12_channel: if z_if_c1.abs() <= z_if_c2.abs() { "C1" } else { "C2" }.into(),
        z_if_c1,
        z_if_c2,
    }
}

/// Crossing-probability martingale statistic for the configured model.
pub fn run_prob_martingale(cfg: &ExperimentConfig) -> Result<Estimate> {
    cfg.validate()?;
    if cfg.sample_offset != 0 {
        return Err(Error::domain("prob-martingale runs do not support sample offsets"));
    }
    let model = cfg.model()?;
    let pos = cfg.initial_positions()?;
    let pm = ProbMartingaleConfig {
        positions: [pos[0], pos[1], pos[2]],
        horizon: cfg.horizon,
        dt: cfg.dt,
        adaptive_c: cfg.adaptive_c,
        epsilon_collision: cfg.epsilon()?,
        drift: cfg.drift,
        df: cfg.df,
        jobs: cfg.jobs,
        max_steps: cfg.max_steps,
    };
    let z = four_point_partition(&model, &cfg.df)?;
    let evaluator = match z.kind() {
        crate::partition::PartitionKind::FourPointBlock { evaluator, .. } => evaluator.clone(),
        _ => unreachable!("four_point_partition builds a four-point kind"),
    };
    martingale_of_probability_with(&model, evaluator, &pm, cfg.samples, cfg.seed)
}

/// JSON result record of one run.
#[derive(Clone, Debug, Serialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub experiment: ExperimentKind,
    pub config_hash: String,
    pub seed: u64,
    pub sample_offset: u64,
    pub samples: u64,
    pub counts: serde_json::Value,
    pub errors: Vec<String>,
    pub wall_time_seconds: f64,
    pub library_version: &'static str,
}

/// Run the configured experiment and build its record. Per-sample outcomes
/// are returned for the experiments that have them.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(ResultRecord, Vec<SampleOutcome>)> {
    let started = Instant::now();
    let (counts, errors, outcomes) = match cfg.experiment {
        ExperimentKind::TwoSle => {
            let (s, o) = run_two_sle(cfg)?;
            let errors = s.errors.clone();
            (serde_json::to_value(&s)?, errors, o)
        }
        ExperimentKind::ThreeSle => {
            let (s, o) = run_three_sle(cfg)?;
            let model = cfg.model()?;
            let pos = cfg.initial_positions()?;
            let x = (pos[1] - pos[0]) / (pos[2] - pos[0]);
            let p = crate::crossing::crossing_probability(&model, x, &cfg.df)?;
            let assignment = assign_channels(&s, p.p_c1);
            let errors = s.errors.clone();
            let value = serde_json::json!({
                "arch": s,
                "freq_12": s.freq_12(),
                "freq_23": s.freq_23(),
                "unresolved_fraction": s.unresolved_fraction(),
                "crossing": p,
                "assignment": assignment,
            });
            (value, errors, o)
        }
        ExperimentKind::Bessel => {
            let c = run_bessel_compare(cfg)?;
            let mut errors = c.sle.errors.clone();
            errors.extend(c.bessel.errors.iter().cloned());
            (serde_json::to_value(&c)?, errors, Vec::new())
        }
        ExperimentKind::ProbMartingale => {
            let e = run_prob_martingale(cfg)?;
            (serde_json::json!({ "statistic": e, "z_score": e.z_score(0.0) }), Vec::new(), Vec::new())
        }
    };
    let record = ResultRecord {
        schema_version: SCHEMA_VERSION,
        experiment: cfg.experiment,
        config_hash: cfg.fingerprint(),
        seed: cfg.seed,
        sample_offset: cfg.sample_offset,
        samples: cfg.samples,
        counts,
        errors,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        library_version: VERSION,
    };
    Ok((record, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn stats(a: u64, b: u64, u: u64) -> ArchStatistics {
        ArchStatistics {
            fingerprint: "f".into(),
            pair_12: a,
            pair_23: b,
            unresolved: u,
            errors: Vec::new(),
        }
    }

    #[test]
    fn merge_identity_and_mismatch() {
        let s = stats(3, 4, 1);
        assert_eq!(s.merge(&ArchStatistics::empty("f")).unwrap(), s);
        assert!(s.merge(&ArchStatistics::empty("g")).is_err());
    }

    proptest! {
        #[test]
        fn merge_is_commutative_and_associative(
            a in (0u64..100, 0u64..100, 0u64..10),
            b in (0u64..100, 0u64..100, 0u64..10),
            c in (0u64..100, 0u64..100, 0u64..10),
        ) {
            let (a, b, c) = (stats(a.0, a.1, a.2), stats(b.0, b.1, b.2), stats(c.0, c.1, c.2));
            prop_assert_eq!(a.merge(&b).unwrap(), b.merge(&a).unwrap());
            prop_assert_eq!(
                a.merge(&b).unwrap().merge(&c).unwrap(),
                a.merge(&b.merge(&c).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn fingerprint_ignores_sample_range_and_jobs() {
        let a = ExperimentConfig::default();
        let b = ExperimentConfig {
            samples: 7,
            sample_offset: 100,
            jobs: 4,
            ..a.clone()
        };
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = ExperimentConfig { seed: 1, ..a.clone() };
        assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = ExperimentConfig::three_sle(Family::Su2k { k: 2 }, 0.25);
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        // partial documents fill in defaults
        let partial: ExperimentConfig = serde_json::from_str(r#"{"samples": 5}"#).unwrap();
        assert_eq!(partial.samples, 5);
        assert_eq!(partial.horizon, ExperimentConfig::default().horizon);
    }

    #[test]
    fn non_adjacent_collision_is_an_error() {
        let mut s = ArchStatistics::empty("f");
        assert!(s
            .record(&SampleOutcome::Collision { pair: (0, 2), t: 1.0 })
            .is_err());
    }

    #[test]
    fn repulsive_zero_noise_never_collides() {
        let cfg = ExperimentConfig {
            channel: TwoSleChannel::Fused,
            noise: NoiseMode::Off,
            samples: 5,
            horizon: 10.0,
            ..ExperimentConfig::default()
        };
        let (s, _) = run_two_sle(&cfg).unwrap();
        assert_eq!(s.collided, 0);
        assert_eq!(s.survived, 5);
    }

    #[test]
    fn counts_do_not_depend_on_jobs() {
        let base = ExperimentConfig {
            model: Family::Su2k { k: 2 },
            samples: 40,
            seed: 5,
            ..ExperimentConfig::three_sle(Family::Su2k { k: 2 }, 0.3)
        };
        let one = run_three_sle(&ExperimentConfig { jobs: 1, ..base.clone() }).unwrap();
        let four = run_three_sle(&ExperimentConfig { jobs: 4, ..base.clone() }).unwrap();
        assert_eq!(one.0, four.0);
        assert_eq!(one.1, four.1);
    }

    #[test]
    fn extending_the_range_equals_one_long_run() {
        let base = ExperimentConfig {
            samples: 30,
            seed: 2,
            ..ExperimentConfig::three_sle(Family::Su2k { k: 2 }, 0.4)
        };
        let (whole, _) = run_three_sle(&ExperimentConfig { samples: 60, ..base.clone() }).unwrap();
        let (first, _) = run_three_sle(&base).unwrap();
        let (second, _) = run_three_sle(&ExperimentConfig { sample_offset: 30, ..base.clone() }).unwrap();
        assert_eq!(first.merge(&second).unwrap(), whole);
    }

    #[test]
    fn samples_csv_layout() {
        let outcomes = vec![
            SampleOutcome::Collision { pair: (1, 2), t: 0.5 },
            SampleOutcome::Survived,
        ];
        let mut buf = Vec::new();
        write_samples_csv(10, &outcomes, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "sample,outcome,t_event\n10,[23],0.5\n11,survived,\n"
        );
    }

    #[test]
    fn validation_errors() {
        let bad = ExperimentConfig {
            positions: vec![1.0, 0.0],
            ..ExperimentConfig::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Domain(_))));
        let bad = ExperimentConfig {
            samples: 0,
            ..ExperimentConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig {
            experiment: ExperimentKind::ThreeSle,
            model: Family::Parafermion { n: 3 },
            ..ExperimentConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
