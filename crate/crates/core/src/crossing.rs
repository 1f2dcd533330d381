//! Arch (crossing) probabilities of three curves with the fourth endpoint at
//! infinity.
//!
//! `P[C_i] = Z_{C_i} / (Z_{C1} + Z_{C2})` with `Z_{C1}(x) = Z_{C2}(1 − x)`.
//! `C2` is the channel with `Z_{C2} ~ x^{h_{2Λ} − 2h_Λ}` as `x → 0`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::algebra::{CosetModel, Family};
use crate::driving::{evolve, DriftMode, DrivingConfig};
use crate::loewner::LoewnerState;
use crate::numerics::DfConfig;
use crate::partition::{block_c2, BlockEvaluator, BlockSelection, PurePartition};
use crate::rng::SampleStreams;
use crate::stats::{linear_fit, Estimate, MeanAccumulator};
use crate::{Error, Result};

/// Which block evaluator produced a result.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EvaluatorInfo {
    Hypergeometric,
    DotsenkoFateev {
        cutoff_epsilon: f64,
        v_max: f64,
        nodes_per_axis: usize,
    },
}

impl EvaluatorInfo {
    fn of(model: &CosetModel, cfg: &DfConfig) -> Self {
        match model.family {
            Family::Su2k { .. } => EvaluatorInfo::Hypergeometric,
            Family::Parafermion { .. } => EvaluatorInfo::DotsenkoFateev {
                cutoff_epsilon: cfg.cutoff_epsilon,
                v_max: cfg.v_max,
                nodes_per_axis: cfg.nodes_per_axis,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingResult {
    pub x: f64,
    pub z_c1: f64,
    pub z_c2: f64,
    pub p_c1: f64,
    pub p_c2: f64,
    pub evaluator: EvaluatorInfo,
}

/// Probabilities of the two channels at cross ratio `x ∈ (0, 1)`.
pub fn crossing_probability(model: &CosetModel, x: f64, cfg: &DfConfig) -> Result<CrossingResult> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("cross ratio x = {x} outside (0, 1)")));
    }
    let z_c2 = block_c2(model, x, cfg)?;
    let z_c1 = block_c2(model, 1.0 - x, cfg)?;
    let p_c2 = z_c2 / (z_c1 + z_c2);
    if !(0.0..=1.0).contains(&p_c2) {
        return Err(Error::numeric(format!("probability {p_c2} at x = {x}")));
    }
    Ok(CrossingResult {
        x,
        z_c1,
        z_c2,
        p_c1: 1.0 - p_c2,
        p_c2,
        evaluator: EvaluatorInfo::of(model, cfg),
    })
}

/// Parse `A:B:S` into the points `A, A+S, …` not exceeding `B`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::domain(format!("grid `{text}` is not of the form A:B:S")));
    }
    let nums = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("bad number `{p}` in grid `{text}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let (a, b, s) = (nums[0], nums[1], nums[2]);
    if !(s > 0.0) || !(b >= a) {
        return Err(Error::domain(format!("grid `{text}` needs B >= A and S > 0")));
    }
    let count = ((b - a) / s + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| a + i as f64 * s).collect())
}

pub fn crossing_grid(model: &CosetModel, xs: &[f64], cfg: &DfConfig) -> Result<Vec<CrossingResult>> {
    xs.iter().map(|&x| crossing_probability(model, x, cfg)).collect()
}

/// CSV with columns `x,Z_C1,Z_C2,p_C1,p_C2`.
pub fn write_grid_csv<W: Write>(rows: &[CrossingResult], mut out: W) -> Result<()> {
    writeln!(out, "x,Z_C1,Z_C2,p_C1,p_C2")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.x, r.z_c1, r.z_c2, r.p_c1, r.p_c2)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Zero,
    One,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    /// RMS residual of the log–log fit.
    pub residual: f64,
}

/// Least-squares slope of `ln f` against the log-distance to `endpoint`.
/// `distances` are the distances from the endpoint, e.g. `1e-2, 1e-3, 1e-4`.
pub fn asymptotic_exponent<F>(f: F, endpoint: Endpoint, distances: &[f64]) -> Result<ExponentFit>
where
    F: Fn(f64) -> Result<f64>,
{
    if distances.len() < 3 {
        return Err(Error::domain("exponent fit needs at least 3 points"));
    }
    let mut xs = Vec::with_capacity(distances.len());
    let mut ys = Vec::with_capacity(distances.len());
    for &d in distances {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::domain(format!("distance {d} outside (0, 1)")));
        }
        let x = match endpoint {
            Endpoint::Zero => d,
            Endpoint::One => 1.0 - d,
        };
        let v = f(x)?;
        if !(v > 0.0) {
            return Err(Error::numeric(format!("block value {v} at x = {x} is not positive")));
        }
        xs.push(d.ln());
        ys.push(v.ln());
    }
    let (slope, _, residual) = linear_fit(&xs, &ys);
    Ok(ExponentFit { slope, residual })
}

/// Settings of the short 3-SLE runs used to test the martingale property of
/// `P[C2](x_t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbMartingaleConfig {
    /// Initial tips; the cross ratio is `(x2 − x1)/(x3 − x1)`.
    pub positions: [f64; 3],
    pub horizon: f64,
    pub dt: f64,
    pub adaptive_c: f64,
    pub epsilon_collision: f64,
    pub drift: DriftMode,
    pub df: DfConfig,
    pub jobs: usize,
    pub max_steps: u64,
}

impl ProbMartingaleConfig {
    pub fn at_cross_ratio(x0: f64) -> Self {
        ProbMartingaleConfig {
            positions: [0.0, x0, 1.0],
            horizon: 0.02,
            dt: 1e-4,
            adaptive_c: 1e-2,
            epsilon_collision: 1e-4,
            drift: DriftMode::Full,
            df: DfConfig::default(),
            jobs: 0,
            max_steps: 10_000_000,
        }
    }
}

/// `E[P[C2](x_t)] − P[C2](x0)` for 3-SLE stopped at the horizon or the first
/// collision, with its standard error.
pub fn martingale_of_probability(
    model: &CosetModel,
    cfg: &ProbMartingaleConfig,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    let evaluator = match model.family {
        Family::Su2k { .. } => BlockEvaluator::Hypergeometric,
        Family::Parafermion { .. } => BlockEvaluator::DotsenkoFateev(cfg.df),
    };
    martingale_of_probability_with(model, evaluator, cfg, samples, seed)
}

/// As [`martingale_of_probability`] with an explicit block evaluator (e.g. a
/// tabulated Dotsenko–Fateev block).
pub fn martingale_of_probability_with(
    model: &CosetModel,
    evaluator: BlockEvaluator,
    cfg: &ProbMartingaleConfig,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    let [x1, x2, x3] = cfg.positions;
    let x0 = crate::partition::cross_ratio(x1, x2, x3, f64::INFINITY)?;
    let z = PurePartition::four_point(model, BlockSelection::Sum, evaluator)?;
    let p_of = |x: f64| probability_from(&z, x);
    let p0 = p_of(x0)?;
    let mut driving = DrivingConfig::new(*model, z.clone(), cfg.dt, cfg.epsilon_collision, seed)?;
    driving.adaptive_c = cfg.adaptive_c;
    driving.drift = cfg.drift;
    let values = crate::mc::par_samples(cfg.jobs, 0, samples, |i| {
        let mut state = LoewnerState::new(cfg.positions.to_vec())?.without_journal();
        let mut streams = SampleStreams::new(seed, i, 3);
        evolve(&mut state, &driving, &mut streams, cfg.horizon, cfg.max_steps)?;
        let t = state.tips();
        let x = (t[1] - t[0]) / (t[2] - t[0]);
        p_of(x)
    })?;
    let acc: MeanAccumulator = values.into_iter().collect();
    Ok(Estimate {
        value: acc.mean - p0,
        std_error: acc.std_error(),
    })
}

/// Probability that tips 1 and 2 collide before tips 2 and 3 when the
/// cross ratio follows the 3-SLE dynamics driven by `z` (tips at `0, x, 1`,
/// fourth point at infinity, no noise cutoff).
///
/// The cross ratio is a one-dimensional diffusion, so the answer is the
/// scale-function ratio `(S(1) − S(x0))/(S(1) − S(0))`. Integration runs on a
/// uniform grid of `points` nodes in `logit x ∈ [−30, 30]`. If the ratio of
/// partition functions were an exact martingale this would equal `P[C1](x0)`.
pub fn arch_probability_by_scale_function(z: &PurePartition, kappa: f64, x0: f64, points: usize) -> Result<f64> {
    if z.arity() != 3 {
        return Err(Error::domain("scale-function probability needs a 3-curve partition function"));
    }
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::domain(format!("cross ratio x = {x0} outside (0, 1)")));
    }
    if points < 16 {
        return Err(Error::domain("need at least 16 grid points"));
    }
    // drift over variance of x, times 2
    let phi = |x: f64| -> Result<f64> {
        let g = z.log_gradient(&[0.0, x, 1.0])?;
        let r1 = -2.0 / x - 2.0;
        let r2 = 2.0 / x - 2.0 / (1.0 - x);
        let r3 = 2.0 / (1.0 - x) + 2.0;
        let du = kappa * (g[1] - g[0]) + r2 - r1;
        let dw = kappa * (g[2] - g[0]) + r3 - r1;
        let b = du - x * dw + 2.0 * kappa * x - kappa;
        let a = 2.0 * kappa * (1.0 - x + x * x);
        Ok(2.0 * b / a)
    };
    let logistic = |t: f64| 1.0 / (1.0 + (-t).exp());
    const HALF_WIDTH: f64 = 30.0;
    let h = 2.0 * HALF_WIDTH / (points - 1) as f64;
    let ts: Vec<f64> = (0..points).map(|i| -HALF_WIDTH + i as f64 * h).collect();
    // dx/dt = x(1−x); integrand of ln S' in t
    let mut f = Vec::with_capacity(points);
    for &t in &ts {
        let x = logistic(t);
        f.push(phi(x)? * x * (1.0 - x));
    }
    let mut ln_sp = vec![0.0; points];
    for i in 1..points {
        ln_sp[i] = ln_sp[i - 1] - 0.5 * h * (f[i - 1] + f[i]);
    }
    // ln of S'(x) dx/dt
    let ln_w: Vec<f64> = ts
        .iter()
        .zip(&ln_sp)
        .map(|(&t, &l)| {
            let x = logistic(t);
            l + x.ln() + (1.0 - x).ln()
        })
        .collect();
    let top = ln_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = ln_w.iter().map(|l| (l - top).exp()).collect();
    let mut cum = vec![0.0; points];
    for i in 1..points {
        cum[i] = cum[i - 1] + 0.5 * h * (w[i - 1] + w[i]);
    }
    let total = cum[points - 1];
    // interpolate S at x0
    let t0 = (x0 / (1.0 - x0)).ln().clamp(-HALF_WIDTH, HALF_WIDTH);
    let pos = (t0 + HALF_WIDTH) / h;
    let i = (pos.floor() as usize).min(points - 2);
    let frac = pos - i as f64;
    let s0 = cum[i] + frac * (cum[i + 1] - cum[i]);
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::numeric("scale function not integrable on the grid"));
    }
    Ok((total - s0) / total)
}

/// `P[C2](x)` from a two-channel partition function, evaluated stably at
/// cross ratios arbitrarily close to 0 or 1.
pub fn probability_from(z: &PurePartition, x: f64) -> Result<f64> {
    let x = x.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
    let (ln1, ln2) = z.ln_channels(x)?;
    Ok(1.0 / (1.0 + (ln1 - ln2).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::model_params;
    use approx::assert_relative_eq;

    fn su2(k: u32) -> CosetModel {
        model_params(Family::Su2k { k }).unwrap()
    }

    /// Direct Gauss series of the k = 2 block.
    fn c2_oracle(x: f64) -> f64 {
        let (a, b, c) = (1.25, 0.75, 1.5);
        let (mut sum, mut term) = (0.0, 1.0);
        for k in 0..100_000 {
            sum += term;
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
            if term.abs() < 1e-18 {
                break;
            }
        }
        (x * (1.0 - x)).powf(0.125) * sum
    }

    #[test]
    fn half_is_exactly_even() {
        let cfg = DfConfig::default();
        let r = crossing_probability(&su2(2), 0.5, &cfg).unwrap();
        assert_eq!((r.p_c1, r.p_c2), (0.5, 0.5));
        let pf = model_params(Family::Parafermion { n: 4 }).unwrap();
        let r = crossing_probability(&pf, 0.5, &cfg).unwrap();
        assert_eq!((r.p_c1, r.p_c2), (0.5, 0.5));
    }

    #[test]
    fn su2k_quarter_matches_series_oracle() {
        let r = crossing_probability(&su2(2), 0.25, &DfConfig::default()).unwrap();
        // 1 − 0.25 = 0.75 is beyond the series' fast range but still convergent
        let (z2, z1) = (c2_oracle(0.25), c2_oracle(0.75));
        assert_relative_eq!(r.p_c2, z2 / (z1 + z2), max_relative = 1e-8);
        assert_relative_eq!(r.p_c1, z1 / (z1 + z2), max_relative = 1e-8);
    }

    #[test]
    fn grid_symmetry_and_bounds() {
        let model = su2(2);
        let xs = parse_grid("0.05:0.95:0.05").unwrap();
        assert_eq!(xs.len(), 19);
        let rows = crossing_grid(&model, &xs, &DfConfig::default()).unwrap();
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.p_c1 + r.p_c2, 1.0);
            let mirror = &rows[rows.len() - 1 - i];
            assert!((r.p_c1 - mirror.p_c2).abs() < 1e-9);
            assert!((0.0..=1.0).contains(&r.p_c1));
        }
        // p_C2 increases with x
        assert!(rows.windows(2).all(|w| w[1].p_c2 > w[0].p_c2));
    }

    #[test]
    fn dotsenko_fateev_probability_is_cutoff_stable() {
        let model = model_params(Family::Parafermion { n: 4 }).unwrap();
        let cfg = DfConfig::default();
        let a = crossing_probability(&model, 0.3, &cfg).unwrap();
        let b = crossing_probability(&model, 0.3, &cfg.with_cutoff(cfg.cutoff_epsilon / 2.0)).unwrap();
        assert!((a.p_c2 - b.p_c2).abs() < 1e-3);
        assert!(a.z_c2 != b.z_c2);
    }

    #[test]
    fn exponent_examples() {
        let fit = asymptotic_exponent(|_| Ok(2.0), Endpoint::Zero, &[1e-2, 1e-3, 1e-4]).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        let model = su2(2);
        let cfg = DfConfig::default();
        let fit = asymptotic_exponent(|x| block_c2(&model, x, &cfg), Endpoint::Zero, &[1e-3, 1e-4, 1e-5]).unwrap();
        assert!((fit.slope - 0.125).abs() < 0.01, "{fit:?}");
        // Z_C2 ~ (1 − x)^{−2h_Λ} at the other end
        let fit = asymptotic_exponent(|x| block_c2(&model, x, &cfg), Endpoint::One, &[1e-3, 1e-4, 1e-5]).unwrap();
        assert!((fit.slope + 2.0 * model.bcc_weight()).abs() < 0.01, "{fit:?}");
        assert!(asymptotic_exponent(|_| Ok(-1.0), Endpoint::Zero, &[1e-2, 1e-3, 1e-4]).is_err());
        assert!(asymptotic_exponent(|_| Ok(1.0), Endpoint::Zero, &[1e-2, 1e-3]).is_err());
    }

    #[test]
    fn scale_function_probability_symmetry() {
        let model = su2(2);
        let z = PurePartition::four_point(&model, BlockSelection::Sum, BlockEvaluator::Hypergeometric).unwrap();
        let half = arch_probability_by_scale_function(&z, model.kappa, 0.5, 4001).unwrap();
        assert!((half - 0.5).abs() < 1e-5, "{half}");
        let a = arch_probability_by_scale_function(&z, model.kappa, 0.25, 4001).unwrap();
        let b = arch_probability_by_scale_function(&z, model.kappa, 0.75, 4001).unwrap();
        assert!((a + b - 1.0).abs() < 1e-5, "{a} {b}");
        // grid refinement
        let fine = arch_probability_by_scale_function(&z, model.kappa, 0.25, 16001).unwrap();
        assert!((a - fine).abs() < 1e-4, "{a} {fine}");
        let lo = arch_probability_by_scale_function(&z, model.kappa, 0.1, 4001).unwrap();
        assert!(lo > a && a > half);
        assert!(arch_probability_by_scale_function(&z, model.kappa, 1.0, 4001).is_err());
    }

    #[test]
    fn parse_grid_errors() {
        assert!(parse_grid("0.1:0.2").is_err());
        assert!(parse_grid("0.1:0.2:0").is_err());
        assert!(parse_grid("a:0.2:0.1").is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = crossing_grid(&su2(2), &[0.5], &DfConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,Z_C1,Z_C2,p_C1,p_C2"));
        assert!(lines.next().unwrap().ends_with(",0.5,0.5"));
    }

    #[test]
    fn symmetric_start_keeps_half() {
        let cfg = ProbMartingaleConfig {
            horizon: 0.005,
            ..ProbMartingaleConfig::at_cross_ratio(0.5)
        };
        let est = martingale_of_probability(&su2(2), &cfg, 400, 3).unwrap();
        assert!(est.within_sigmas(0.0, 4.0), "{est:?}");
    }
}
