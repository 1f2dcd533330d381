//! Bessel reduction of the two-curve evolution.
//!
//! For `Z = (x2 − x1)^Δ` the rescaled gap `y = (x2 − x1)/√2` in the time
//! `s = κ t` solves `dy = dB + (Δ + 2/κ)/y ds`: a Bessel process of dimension
//! `d = 2Δ + 4/κ + 1`. It is recurrent for `d < 2` and transient for `d > 2`.

use num_rational::Rational64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::driving::NoiseMode;
use crate::rng::{stream, Channel};
use crate::stats::{Estimate, MeanAccumulator};
use crate::{Error, Result};

/// `2Δ + 4/κ + 1`.
pub fn effective_dimension(delta: f64, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::domain(format!("kappa = {kappa} must be positive")));
    }
    Ok(2.0 * delta + 4.0 / kappa + 1.0)
}

pub fn effective_dimension_exact(delta: Rational64, kappa: Rational64) -> Result<Rational64> {
    if kappa <= Rational64::from_integer(0) {
        return Err(Error::domain(format!("kappa = {kappa} must be positive")));
    }
    Ok(delta * 2 + Rational64::from_integer(4) / kappa + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecurrenceClass {
    Recurrent,
    Transient,
    Critical,
}

pub fn classify(d_eff: f64) -> RecurrenceClass {
    if d_eff < 2.0 {
        RecurrenceClass::Recurrent
    } else if d_eff > 2.0 {
        RecurrenceClass::Transient
    } else {
        RecurrenceClass::Critical
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesselSpec {
    pub d_eff: f64,
    pub y0: f64,
}

impl BesselSpec {
    pub fn new(d_eff: f64, y0: f64) -> Result<Self> {
        if !(y0 > 0.0) || !d_eff.is_finite() {
            return Err(Error::domain(format!("need y0 > 0 and finite d, got ({y0}, {d_eff})")));
        }
        Ok(BesselSpec { d_eff, y0 })
    }

    /// Scale function `y^{2−d}`, a local martingale of the process.
    pub fn scale(&self, y: f64) -> f64 {
        y.powf(2.0 - self.d_eff)
    }
}

/// Euler–Maruyama update `y + noise √ds + (d−1)/(2y) ds`. A result `≤ 0`
/// means the path reached the origin.
pub fn bessel_step(y: f64, ds: f64, noise: f64, d_eff: f64) -> f64 {
    y + noise * ds.sqrt() + 0.5 * (d_eff - 1.0) / y * ds
}

/// Step-size and boundary handling for Bessel path simulation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesselScheme {
    pub ds_max: f64,
    /// Step capped at `adaptive_c · y²`; zero disables.
    pub adaptive_c: f64,
    /// Absorbing level near the origin.
    pub absorb_at: f64,
    /// Brownian-bridge crossing test against the absorbing and target
    /// levels between grid points.
    pub bridge_correction: bool,
    pub noise: NoiseMode,
    /// Bound on steps per path.
    pub max_steps: u64,
}

impl Default for BesselScheme {
    fn default() -> Self {
        BesselScheme {
            ds_max: 1e-3,
            adaptive_c: 0.0,
            absorb_at: 0.0,
            bridge_correction: false,
            noise: NoiseMode::Brownian,
            max_steps: 100_000_000,
        }
    }
}

impl BesselScheme {
    fn step_size(&self, y: f64, remaining: f64) -> f64 {
        let mut ds = self.ds_max.min(remaining);
        if self.adaptive_c > 0.0 {
            ds = ds.min(self.adaptive_c * y * y);
        }
        ds
    }
}

/// How a simulated path ended.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PathEnd {
    /// Reached the lower (absorbing) level at time `s`.
    Lower { s: f64 },
    /// Reached the upper level at time `s`.
    Upper { s: f64 },
    /// Neither level before the horizon; final position `y`.
    Horizon { y: f64 },
}

fn bridge_hit(a: f64, b: f64, level: f64, ds: f64, rng: &mut ChaCha8Rng) -> bool {
    // probability that a Brownian bridge from a to b (both on one side of
    // `level`) touches it within time ds
    let p = (-2.0 * (a - level) * (b - level) / ds).exp();
    rng.random::<f64>() < p
}

/// Simulate one path from `spec.y0` until it falls to `lower`, rises to
/// `upper` or time `horizon` elapses.
pub fn simulate_path(
    spec: &BesselSpec,
    scheme: &BesselScheme,
    lower: f64,
    upper: f64,
    horizon: f64,
    rng: &mut ChaCha8Rng,
) -> Result<PathEnd> {
    let lower = lower.max(scheme.absorb_at);
    if !(spec.y0 > lower && spec.y0 < upper) {
        return Err(Error::domain(format!(
            "start {} outside ({lower}, {upper})",
            spec.y0
        )));
    }
    let mut y = spec.y0;
    let mut s = 0.0;
    let mut steps = 0u64;
    while s < horizon {
        let mut ds = scheme.step_size(y, horizon - s);
        let next = loop {
            let noise: f64 = match scheme.noise {
                NoiseMode::Brownian => rng.sample(StandardNormal),
                NoiseMode::Off => 0.0,
            };
            let next = bessel_step(y, ds, noise, spec.d_eff);
            // a step that overshoots the origin by more than its own noise
            // scale is refined rather than counted as absorption
            if next < -ds.sqrt() && ds > 1e-300 {
                ds *= 0.5;
                continue;
            }
            break next;
        };
        s += ds;
        steps += 1;
        if next <= lower {
            return Ok(PathEnd::Lower { s });
        }
        if next >= upper {
            return Ok(PathEnd::Upper { s });
        }
        if scheme.bridge_correction {
            if lower > 0.0 && bridge_hit(y, next, lower, ds, rng) {
                return Ok(PathEnd::Lower { s });
            }
            if upper.is_finite() && bridge_hit(y, next, upper, ds, rng) {
                return Ok(PathEnd::Upper { s });
            }
        }
        y = next;
        if steps >= scheme.max_steps {
            return Err(Error::numeric(format!(
                "Bessel path exceeded {} steps at s = {s}",
                scheme.max_steps
            )));
        }
    }
    Ok(PathEnd::Horizon { y })
}

/// `P(hit b before B)` from `y0`, via the scale function `y^{2−d}`
/// (logarithmic at `d = 2`).
pub fn hitting_probability(d_eff: f64, y0: f64, b: f64, big_b: f64) -> f64 {
    if d_eff == 2.0 {
        return (big_b.ln() - y0.ln()) / (big_b.ln() - b.ln());
    }
    let e = 2.0 - d_eff;
    (y0.powf(e) - big_b.powf(e)) / (b.powf(e) - big_b.powf(e))
}

/// `E[y_{s∧τ}^{2−d}] − y0^{2−d}` over `samples` paths with standard error;
/// `τ` is absorption at `scheme.absorb_at`.
pub fn martingale_statistic(
    spec: &BesselSpec,
    horizon: f64,
    samples: u64,
    seed: u64,
    scheme: &BesselScheme,
) -> Result<Estimate> {
    if spec.d_eff == 2.0 {
        return Err(Error::domain("d = 2 has a logarithmic scale function"));
    }
    if samples == 0 {
        return Err(Error::domain("samples must be >= 1"));
    }
    let values = crate::mc::par_samples(0, 0, samples, |i| {
        let mut rng = stream(seed, i, 0, Channel::Auxiliary);
        let end = simulate_path(spec, scheme, scheme.absorb_at, f64::INFINITY, horizon, &mut rng)?;
        Ok(match end {
            PathEnd::Lower { .. } => spec.scale(scheme.absorb_at.max(0.0)),
            PathEnd::Upper { .. } => unreachable!("no upper level"),
            PathEnd::Horizon { y } => spec.scale(y),
        })
    })?;
    let acc: MeanAccumulator = values.into_iter().collect();
    Ok(Estimate {
        value: acc.mean - spec.scale(spec.y0),
        std_error: acc.std_error(),
    })
}
