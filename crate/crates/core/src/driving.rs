//! The driving SDE of the coupled Loewner / group evolution.
//!
//! With a common capacity increment `dq_α = dt`:
//!
//! ```text
//! dx_α  = √κ dξ_α + κ dq_α ∂_α ln Z + 2 Σ_{β≠α} dq_β / (x_α − x_β)
//! dp^a_α = √τ dϑ^a_α + τ dq_α Σ_{β≠α} (t^a_β Z / Z) / (x_β − x_α)
//! ```
//!
//! with `dξ`, `dϑ` independent and of variance `dq` in the
//! Killing-orthonormal basis of the generators.

use std::io::Write;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{su2_generators, CosetModel, IrrepAction};
use crate::loewner::{CollisionEvent, LoewnerState};
use crate::partition::PurePartition;
use crate::rng::SampleStreams;
use crate::{Error, Result};

/// Test hooks that switch off parts of the dynamics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    #[default]
    Brownian,
    /// `dξ = dϑ = 0`: the deterministic drift ODE.
    Off,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftMode {
    #[default]
    Full,
    /// `dF = dG = 0`: independent Brownian tips, used as a control run.
    Zeroed,
}

#[derive(Clone, Debug)]
pub struct DrivingConfig {
    pub model: CosetModel,
    pub z: PurePartition,
    /// Representation carried by each curve.
    pub irreps: Vec<IrrepAction>,
    pub kappa: f64,
    pub tau: f64,
    /// Largest time step.
    pub dt: f64,
    /// Near collisions the step is capped at `adaptive_c · (min gap)²`;
    /// zero disables the cap.
    pub adaptive_c: f64,
    pub epsilon_collision: f64,
    /// Retries with halved `dt` after a rejected step.
    pub max_retries: u32,
    pub seed: u64,
    pub noise: NoiseMode,
    pub drift: DriftMode,
}

impl DrivingConfig {
    /// Defaults for `z` under `model`: every curve carries the model's
    /// boundary representation, `κ` and `τ` come from the model.
    pub fn new(model: CosetModel, z: PurePartition, dt: f64, epsilon_collision: f64, seed: u64) -> Result<Self> {
        let irreps = vec![su2_generators(model.bcc_twice_spin()); z.arity()];
        let cfg = DrivingConfig {
            kappa: model.kappa,
            tau: model.tau,
            model,
            z,
            irreps,
            dt,
            adaptive_c: 0.0,
            epsilon_collision,
            max_retries: 30,
            seed,
            noise: NoiseMode::Brownian,
            drift: DriftMode::Full,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::domain(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.epsilon_collision > 0.0) {
            return Err(Error::domain("epsilon_collision must be positive"));
        }
        if !(self.kappa > 0.0) || !(self.tau >= 0.0) {
            return Err(Error::domain(format!(
                "need kappa > 0 and tau >= 0, got ({}, {})",
                self.kappa, self.tau
            )));
        }
        if !(self.adaptive_c >= 0.0) {
            return Err(Error::domain("adaptive_c must be >= 0"));
        }
        if self.irreps.len() != self.z.arity() {
            return Err(Error::domain(format!(
                "{} representations for {} curves",
                self.irreps.len(),
                self.z.arity()
            )));
        }
        Ok(())
    }

    /// Step size at the given state, before any rejection halving.
    pub fn step_size(&self, state: &LoewnerState) -> f64 {
        let mut dt = self.dt;
        if self.adaptive_c > 0.0 {
            if let Some((_, gap)) = state.min_gap() {
                dt = dt.min(self.adaptive_c * gap * gap);
            }
        }
        dt
    }
}

/// Brownian increments of one step.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseIncrement {
    pub dxi: Vec<f64>,
    pub dvartheta: Vec<[f64; 3]>,
}

impl NoiseIncrement {
    /// Draw increments of variance `dq`; Lie noise only along `directions`.
    pub fn draw(streams: &mut SampleStreams, dq: f64, directions: &[usize]) -> Self {
        let sd = dq.sqrt();
        let m = streams.position.len();
        let dxi = streams
            .position
            .iter_mut()
            .map(|r| sd * r.sample::<f64, _>(StandardNormal))
            .collect();
        let dvartheta = (0..m)
            .map(|alpha| {
                let mut v = [0.0; 3];
                for &a in directions {
                    let rng: &mut ChaCha8Rng = &mut streams.lie[alpha][a];
                    v[a] = sd * rng.sample::<f64, _>(StandardNormal);
                }
                v
            })
            .collect();
        NoiseIncrement { dxi, dvartheta }
    }

    fn zero(m: usize) -> Self {
        NoiseIncrement {
            dxi: vec![0.0; m],
            dvartheta: vec![[0.0; 3]; m],
        }
    }
}

/// `dF_α = κ dq_α ∂_α ln Z + 2 Σ_{β≠α} dq_β/(x_α − x_β)`.
pub fn drift_f(z: &PurePartition, positions: &[f64], dq: &[f64], kappa: f64) -> Result<Vec<f64>> {
    if dq.len() != positions.len() {
        return Err(Error::domain("dq and positions differ in length"));
    }
    let grad = z.log_gradient(positions)?;
    Ok((0..positions.len())
        .map(|a| {
            let interaction: f64 = (0..positions.len())
                .filter(|&b| b != a)
                .map(|b| 2.0 * dq[b] / (positions[a] - positions[b]))
                .sum();
            kappa * dq[a] * grad[a] + interaction
        })
        .collect())
}

/// `dG^a_α = τ dq_α Σ_{β≠α} (t^a_β Z/Z) / (x_β − x_α)`.
pub fn drift_g(
    z: &PurePartition,
    irreps: &[IrrepAction],
    positions: &[f64],
    dq: &[f64],
    tau: f64,
) -> Result<Vec<[f64; 3]>> {
    let m = positions.len();
    if dq.len() != m || z.arity() != m {
        return Err(Error::domain("positions, dq and partition arity must agree"));
    }
    // ratios[a][β]
    let mut ratios = [vec![0.0; m], vec![0.0; m], vec![0.0; m]];
    for (a, row) in ratios.iter_mut().enumerate() {
        for (beta, r) in row.iter_mut().enumerate() {
            *r = z.insertion_ratio(irreps, a, beta)?.value();
        }
    }
    Ok((0..m)
        .map(|alpha| {
            let mut g = [0.0; 3];
            for (a, ga) in g.iter_mut().enumerate() {
                let sum: f64 = (0..m)
                    .filter(|&b| b != alpha)
                    .map(|b| ratios[a][b] / (positions[b] - positions[alpha]))
                    .sum();
                *ga = tau * dq[alpha] * sum;
            }
            g
        })
        .collect())
}

/// What happened in one accepted step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    pub rejections: u32,
    pub collision: Option<CollisionEvent>,
}

/// One Euler–Maruyama step followed by the slit update and a collision check.
/// `dt_cap` bounds the step (e.g. the time left to a horizon).
pub fn sde_step(
    state: &mut LoewnerState,
    cfg: &DrivingConfig,
    streams: &mut SampleStreams,
    dt_cap: f64,
) -> Result<StepReport> {
    if state.terminated().is_some() {
        return Err(Error::domain("state already terminated"));
    }
    let m = state.curves();
    if m != cfg.z.arity() {
        return Err(Error::domain(format!(
            "state has {m} curves, partition function {}",
            cfg.z.arity()
        )));
    }
    let mut dt = cfg.step_size(state).min(dt_cap);
    if !(dt > 0.0) {
        return Err(Error::domain(format!("non-positive step {dt}")));
    }
    let sqrt_kappa = cfg.kappa.sqrt();
    let sqrt_tau = cfg.tau.sqrt();
    let directions = cfg.model.lie_directions();
    let mut rejections = 0;
    loop {
        let dq = vec![dt; m];
        let noise = match cfg.noise {
            NoiseMode::Brownian => NoiseIncrement::draw(streams, dt, directions),
            NoiseMode::Off => NoiseIncrement::zero(m),
        };
        let (df, dg) = match cfg.drift {
            DriftMode::Full => (
                drift_f(&cfg.z, state.tips(), &dq, cfg.kappa)?,
                drift_g(&cfg.z, &cfg.irreps, state.tips(), &dq, cfg.tau)?,
            ),
            DriftMode::Zeroed => (vec![0.0; m], vec![[0.0; 3]; m]),
        };
        let new_x: Vec<f64> = (0..m)
            .map(|a| state.tips()[a] + sqrt_kappa * noise.dxi[a] + df[a])
            .collect();
        match state.slit_step(&dq, &new_x) {
            Ok(()) => {
                for (p, (dv, g)) in state.lie_coords.iter_mut().zip(noise.dvartheta.iter().zip(&dg)) {
                    for a in 0..3 {
                        p[a] += sqrt_tau * dv[a] + g[a];
                    }
                }
                let collision = state.collision_check(cfg.epsilon_collision);
                if let Some(event) = collision {
                    state.terminate(event);
                }
                return Ok(StepReport {
                    dt,
                    rejections,
                    collision,
                });
            }
            Err(Error::StepRejected(msg)) => {
                rejections += 1;
                if rejections > cfg.max_retries {
                    return Err(Error::StepRejected(format!(
                        "{msg} (gave up after {} retries)",
                        cfg.max_retries
                    )));
                }
                dt *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
}

/// How an evolution ended.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Outcome {
    Collision(CollisionEvent),
    /// Horizon reached without collision.
    Horizon,
}

/// Evolve until a collision or `horizon`. `max_steps` guards against
/// runaway loops and yields a numeric error.
pub fn evolve(
    state: &mut LoewnerState,
    cfg: &DrivingConfig,
    streams: &mut SampleStreams,
    horizon: f64,
    max_steps: u64,
) -> Result<Outcome> {
    if let Some(event) = state.collision_check(cfg.epsilon_collision) {
        state.terminate(event);
        return Ok(Outcome::Collision(event));
    }
    let mut steps = 0u64;
    while state.time() < horizon {
        let report = sde_step(state, cfg, streams, horizon - state.time())?;
        if let Some(event) = report.collision {
            return Ok(Outcome::Collision(event));
        }
        steps += 1;
        if steps >= max_steps {
            return Err(Error::numeric(format!(
                "no collision or horizon after {max_steps} steps (t = {})",
                state.time()
            )));
        }
    }
    Ok(Outcome::Horizon)
}

/// One recorded point of a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub x: Vec<f64>,
    pub p: Vec<[f64; 3]>,
}

impl TrajectoryPoint {
    fn of(state: &LoewnerState) -> Self {
        TrajectoryPoint {
            t: state.time(),
            x: state.tips().to_vec(),
            p: state.lie_coords.clone(),
        }
    }
}

/// Evolve like [`evolve`], recording the state every `every` steps (and at
/// the start and end).
pub fn record_trajectory(
    state: &mut LoewnerState,
    cfg: &DrivingConfig,
    streams: &mut SampleStreams,
    horizon: f64,
    every: u64,
    max_steps: u64,
) -> Result<(Outcome, Vec<TrajectoryPoint>)> {
    let every = every.max(1);
    let mut points = vec![TrajectoryPoint::of(state)];
    let mut steps = 0u64;
    let outcome = loop {
        if state.time() >= horizon {
            break Outcome::Horizon;
        }
        let report = sde_step(state, cfg, streams, horizon - state.time())?;
        steps += 1;
        if let Some(event) = report.collision {
            break Outcome::Collision(event);
        }
        if steps.is_multiple_of(every) {
            points.push(TrajectoryPoint::of(state));
        }
        if steps >= max_steps {
            return Err(Error::numeric(format!("trajectory exceeded {max_steps} steps")));
        }
    };
    if points.last().map(|p| p.t) != Some(state.time()) {
        points.push(TrajectoryPoint::of(state));
    }
    Ok((outcome, points))
}

/// CSV with columns `t,alpha,x_alpha,p_1,p_2,p_3`, one row per curve and point.
pub fn write_trajectory_csv<W: Write>(points: &[TrajectoryPoint], mut out: W) -> Result<()> {
    writeln!(out, "t,alpha,x_alpha,p_1,p_2,p_3")?;
    for pt in points {
        for (alpha, (x, p)) in pt.x.iter().zip(&pt.p).enumerate() {
            writeln!(out, "{},{},{},{},{},{}", pt.t, alpha + 1, x, p[0], p[1], p[2])?;
        }
    }
    Ok(())
}
