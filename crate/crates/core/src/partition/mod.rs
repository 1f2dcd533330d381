//! Pure partition functions, their log-gradients and generator insertions.
//!
//! Positions are always passed in strictly increasing order; for the
//! four-point sector the fourth field sits at infinity and is not passed.

mod internal;

use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::algebra::{CosetModel, Family, IrrepAction};
use crate::numerics::{df_block, hyp2f1, DfConfig, UniformSpline};
use crate::{Error, Result};

pub use internal::{insert_generator, InsertionRatio, InternalState};

/// Relative finite-difference step for numerically differentiated blocks.
pub const FD_RELATIVE_STEP: f64 = 1e-5;

/// `Δ = h_{λ3} − 2 h_Λ`.
pub fn two_sle_delta(h_lambda3: f64, h_lambda: f64) -> f64 {
    h_lambda3 - 2.0 * h_lambda
}

pub fn two_sle_delta_exact(h_lambda3: Rational64, h_lambda: Rational64) -> Rational64 {
    h_lambda3 - h_lambda * 2
}

/// `(x1 − x2)^Δ` for `x1 > x2`.
pub fn two_sle_z(delta: f64, x1: f64, x2: f64) -> Result<f64> {
    if !(x1 > x2) {
        return Err(Error::domain(format!(
            "two-curve partition function needs x1 > x2, got ({x1}, {x2})"
        )));
    }
    Ok((x1 - x2).powf(delta))
}

/// `[(x2−x1)(x3−x1)(x3−x2)]^{2/(n+2)}` for `x1 < x2 < x3`.
pub fn three_sle_z(n: u32, x1: f64, x2: f64, x3: f64) -> Result<f64> {
    check_increasing(&[x1, x2, x3])?;
    let e = 2.0 / (n as f64 + 2.0);
    Ok(((x2 - x1) * (x3 - x1) * (x3 - x2)).powf(e))
}

/// Image of `x2` under the Möbius map sending `x1, x3, x4` to `0, 1, ∞`.
/// Pass `f64::INFINITY` for a point at infinity.
pub fn cross_ratio(x1: f64, x2: f64, x3: f64, x4: f64) -> Result<f64> {
    let finite = [x1, x2, x3];
    if finite.iter().any(|v| !v.is_finite()) || x4.is_nan() {
        return Err(Error::domain("cross ratio needs finite x1, x2, x3"));
    }
    let x = if x4.is_infinite() {
        (x2 - x1) / (x3 - x1)
    } else {
        if x4 == x1 || x4 == x2 || x4 == x3 {
            return Err(Error::domain("coincident points in cross ratio"));
        }
        (x2 - x1) * (x3 - x4) / ((x2 - x4) * (x3 - x1))
    };
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!(
            "points ({x1}, {x2}, {x3}, {x4}) are not cyclically ordered (cross ratio {x})"
        )));
    }
    Ok(x)
}

fn check_increasing(xs: &[f64]) -> Result<()> {
    if xs.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain(format!("non-finite position in {xs:?}")));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain(format!(
            "positions must be strictly increasing, got {xs:?}"
        )));
    }
    Ok(())
}

/// Fusion channel of the two boundary fields in a 2-SLE.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoSleChannel {
    Identity,
    /// Leading nontrivial channel `h_{2Λ}`.
    Fused,
    /// Parafermion channel `h_{λ3} = 2/(n+2)`, excluded as unphysical.
    Unphysical,
}

impl TwoSleChannel {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "identity" | "id" => Ok(TwoSleChannel::Identity),
            "fused" | "h2" | "2lambda" => Ok(TwoSleChannel::Fused),
            "unphysical" => Ok(TwoSleChannel::Unphysical),
            other => Err(Error::domain(format!("unknown 2-SLE channel `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelWeights {
    /// Weight of the fused boundary field.
    pub h_lambda: f64,
    /// 2-SLE exponent `h_lambda − 2 h_Λ`.
    pub delta: f64,
}

/// Exact fused weight and exponent for a 2-SLE channel. The unphysical
/// channel is only returned when `allow_unphysical` is set.
pub fn channel_weights_exact(
    model: &CosetModel,
    channel: TwoSleChannel,
    allow_unphysical: bool,
) -> Result<(Rational64, Rational64)> {
    let h_bcc = model.bcc_weight_exact();
    let h = match (channel, model.family) {
        (TwoSleChannel::Identity, _) => Rational64::from_integer(0),
        (TwoSleChannel::Fused, _) => model.fused_weight_exact(),
        (TwoSleChannel::Unphysical, Family::Parafermion { n }) => {
            if !allow_unphysical {
                return Err(Error::domain(
                    "channel h = 2/(n+2) is unphysical; set allow_unphysical to construct it",
                ));
            }
            Rational64::new(2, n as i64 + 2)
        }
        (TwoSleChannel::Unphysical, Family::Su2k { .. }) => {
            return Err(Error::domain(
                "spin-1/2 x spin-1/2 has no third fusion channel",
            ))
        }
    };
    Ok((h, two_sle_delta_exact(h, h_bcc)))
}

pub fn channel_weights(
    model: &CosetModel,
    channel: TwoSleChannel,
    allow_unphysical: bool,
) -> Result<ChannelWeights> {
    use num_traits::ToPrimitive;
    let (h, d) = channel_weights_exact(model, channel, allow_unphysical)?;
    Ok(ChannelWeights {
        h_lambda: h.to_f64().unwrap_or(f64::NAN),
        delta: d.to_f64().unwrap_or(f64::NAN),
    })
}

/// Conformal block label in the four-point sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockChannel {
    C1,
    C2,
}

/// Which blocks enter a four-point partition function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockSelection {
    Single(BlockChannel),
    /// `Z_{C1} + Z_{C2}`: the two-channel ansatz, conjectural in the
    /// parafermion case.
    Sum,
}

/// Natural-log table of `Z_{C2}` in the logit variable `t = ln(x/(1−x))`.
#[derive(Clone, Debug)]
pub struct BlockTable {
    spline: UniformSpline,
    pub config: DfConfig,
    pub n: u32,
}

impl BlockTable {
    /// Tabulate the Dotsenko–Fateev block on `t ∈ [−half_width, half_width]`.
    pub fn dotsenko_fateev(n: u32, cfg: DfConfig, half_width: f64, step: f64) -> Result<Self> {
        let count = (2.0 * half_width / step).round() as usize + 1;
        let values = (0..count)
            .map(|i| {
                let t = -half_width + i as f64 * step;
                df_block(n, logistic(t), &cfg).map(f64::ln)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockTable {
            spline: UniformSpline::new(-half_width, step, values),
            config: cfg,
            n,
        })
    }

    pub fn ln_c2(&self, x: f64) -> f64 {
        self.spline.eval((x / (1.0 - x)).ln())
    }
}

fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// How `Z_{C2}(x)` is evaluated.
#[derive(Clone, Debug)]
pub enum BlockEvaluator {
    /// Closed-form `SU(2)_k` block.
    Hypergeometric,
    /// Direct Dotsenko–Fateev quadrature at every call.
    DotsenkoFateev(DfConfig),
    /// Spline of a precomputed Dotsenko–Fateev table.
    Tabulated(Arc<BlockTable>),
}

/// `Z_{C2}(x)` for the model's four-point sector.
///
/// `SU(2)_k`: `x^{1/(2(k+2))}(1−x)^{1/(2(k+2))} ₂F₁((k+3)/(k+2), 3/(k+2); (k+4)/(k+2); x)`.
/// Parafermions: the regularized Dotsenko–Fateev block, evaluated directly on
/// all of `(0, 1)`.
pub fn block_c2(model: &CosetModel, x: f64, cfg: &DfConfig) -> Result<f64> {
    match model.family {
        Family::Su2k { k } => su2k_block_c2(k, x),
        Family::Parafermion { n } => df_block(n, x, cfg),
    }
}

pub fn su2k_block_c2(k: u32, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!("cross ratio x = {x} outside [0, 1)")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let kp2 = k as f64 + 2.0;
    let e = 1.0 / (2.0 * kp2);
    let f = hyp2f1((k as f64 + 3.0) / kp2, 3.0 / kp2, (k as f64 + 4.0) / kp2, x)?;
    Ok((x * (1.0 - x)).powf(e) * f)
}

#[derive(Clone, Debug)]
pub enum PartitionKind {
    /// `Z ≡ 1`: non-interacting curves.
    Constant { curves: usize },
    TwoSle { delta: f64 },
    ThreeSleUnique { n: u32 },
    FourPointBlock {
        model: CosetModel,
        selection: BlockSelection,
        evaluator: BlockEvaluator,
    },
}

/// An evaluable pure partition function together with the internal state of
/// its boundary fields.
#[derive(Clone, Debug)]
pub struct PurePartition {
    kind: PartitionKind,
    /// `h_Λ` of each boundary field.
    pub h_bcc: f64,
    /// Weight of the fused field, when the partition function fixes one.
    pub h_fused: Option<f64>,
    state: InternalState,
}

impl PurePartition {
    /// Two curves fusing in `channel`.
    pub fn two_sle(model: &CosetModel, channel: TwoSleChannel, allow_unphysical: bool) -> Result<Self> {
        let w = channel_weights(model, channel, allow_unphysical)?;
        let state = match (model.family, channel) {
            (Family::Parafermion { .. }, _) => InternalState::zero_weight_product(&[2, 2])?,
            (Family::Su2k { .. }, TwoSleChannel::Identity) => InternalState::singlet_pair(),
            (Family::Su2k { .. }, _) => InternalState::basis(1, 0)?.tensor(&InternalState::basis(1, 0)?),
        };
        Ok(PurePartition {
            kind: PartitionKind::TwoSle { delta: w.delta },
            h_bcc: model.bcc_weight(),
            h_fused: Some(w.h_lambda),
            state,
        })
    }

    /// Bare power law `(x2 − x1)^Δ` with trivial internal state.
    pub fn two_sle_with_delta(delta: f64) -> Self {
        PurePartition {
            kind: PartitionKind::TwoSle { delta },
            h_bcc: f64::NAN,
            h_fused: None,
            state: InternalState::basis(0, 0)
                .expect("spin 0")
                .tensor(&InternalState::basis(0, 0).expect("spin 0")),
        }
    }

    /// `Z ≡ 1` on `curves` points with spin-0 fields.
    pub fn constant(curves: usize) -> Result<Self> {
        let spins = vec![0; curves];
        Ok(PurePartition {
            kind: PartitionKind::Constant { curves },
            h_bcc: 0.0,
            h_fused: None,
            state: InternalState::zero_weight_product(&spins)?,
        })
    }

    /// Unique three-curve function of the parafermion model.
    pub fn three_sle_unique(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("parafermion level {n} < 2")));
        }
        Ok(PurePartition {
            kind: PartitionKind::ThreeSleUnique { n },
            h_bcc: 2.0 / (n as f64 + 2.0),
            h_fused: None,
            state: InternalState::zero_weight_product(&[2, 2, 2])?,
        })
    }

    /// Three curves with the fourth field at infinity,
    /// `Z = (x3 − x1)^{−2h_Λ} G(x)`, `G` one block or the two-block sum.
    pub fn four_point(model: &CosetModel, selection: BlockSelection, evaluator: BlockEvaluator) -> Result<Self> {
        match (model.family, &evaluator) {
            (Family::Su2k { .. }, BlockEvaluator::Hypergeometric) => {}
            (Family::Parafermion { n }, BlockEvaluator::DotsenkoFateev(cfg)) => {
                if n < 4 {
                    return Err(Error::domain("Dotsenko-Fateev block needs n >= 4"));
                }
                cfg.validate()?;
            }
            (Family::Parafermion { n }, BlockEvaluator::Tabulated(t)) if t.n == n => {}
            _ => {
                return Err(Error::domain(format!(
                    "block evaluator does not match model {}",
                    model.family
                )))
            }
        }
        let state = match model.family {
            Family::Su2k { .. } => InternalState::singlet_pair().tensor(&InternalState::basis(1, 0)?),
            Family::Parafermion { .. } => InternalState::zero_weight_product(&[2, 2, 2])?,
        };
        Ok(PurePartition {
            kind: PartitionKind::FourPointBlock {
                model: *model,
                selection,
                evaluator,
            },
            h_bcc: model.bcc_weight(),
            h_fused: None,
            state,
        })
    }

    /// Replace the internal state, e.g. to study a different invariant tensor.
    pub fn with_state(mut self, state: InternalState) -> Result<Self> {
        if state.arity() != self.arity() {
            return Err(Error::domain(format!(
                "state has {} factors, partition function has {} fields",
                state.arity(),
                self.arity()
            )));
        }
        self.state = state;
        Ok(self)
    }

    pub fn kind(&self) -> &PartitionKind {
        &self.kind
    }

    pub fn state(&self) -> &InternalState {
        &self.state
    }

    /// Number of finite boundary points.
    pub fn arity(&self) -> usize {
        match self.kind {
            PartitionKind::Constant { curves } => curves,
            PartitionKind::TwoSle { .. } => 2,
            PartitionKind::ThreeSleUnique { .. } | PartitionKind::FourPointBlock { .. } => 3,
        }
    }

    fn check_positions(&self, positions: &[f64]) -> Result<()> {
        if positions.len() != self.arity() {
            return Err(Error::domain(format!(
                "expected {} positions, got {}",
                self.arity(),
                positions.len()
            )));
        }
        check_increasing(positions)
    }

    /// `(ln Z_{C1}(x), ln Z_{C2}(x))` for the four-point sector.
    pub fn ln_channels(&self, x: f64) -> Result<(f64, f64)> {
        let PartitionKind::FourPointBlock { model, evaluator, .. } = &self.kind else {
            return Err(Error::domain("channel blocks exist only for four-point partition functions"));
        };
        let ln_c2 = |y: f64| -> Result<f64> {
            match evaluator {
                BlockEvaluator::Hypergeometric => su2k_block_c2(model.level(), y).map(f64::ln),
                BlockEvaluator::DotsenkoFateev(cfg) => df_block(model.level(), y, cfg).map(f64::ln),
                BlockEvaluator::Tabulated(table) => Ok(table.ln_c2(y)),
            }
        };
        Ok((ln_c2(1.0 - x)?, ln_c2(x)?))
    }

    /// `ln G(x)` for the four-point sector.
    fn ln_block_sum(&self, x: f64) -> Result<f64> {
        let PartitionKind::FourPointBlock { selection, .. } = &self.kind else {
            unreachable!("only called for four-point partition functions")
        };
        let (a, b) = self.ln_channels(x)?;
        Ok(match selection {
            BlockSelection::Single(BlockChannel::C1) => a,
            BlockSelection::Single(BlockChannel::C2) => b,
            BlockSelection::Sum => {
                let m = a.max(b);
                m + ((a - m).exp() + (b - m).exp()).ln()
            }
        })
    }

    pub fn log_value(&self, positions: &[f64]) -> Result<f64> {
        self.check_positions(positions)?;
        let v = match self.kind {
            PartitionKind::Constant { .. } => 0.0,
            PartitionKind::TwoSle { delta } => delta * (positions[1] - positions[0]).ln(),
            PartitionKind::ThreeSleUnique { n } => {
                let [x1, x2, x3] = [positions[0], positions[1], positions[2]];
                2.0 / (n as f64 + 2.0) * ((x2 - x1) * (x3 - x1) * (x3 - x2)).ln()
            }
            PartitionKind::FourPointBlock { .. } => {
                let [x1, x2, x3] = [positions[0], positions[1], positions[2]];
                let x = (x2 - x1) / (x3 - x1);
                -2.0 * self.h_bcc * (x3 - x1).ln() + self.ln_block_sum(x)?
            }
        };
        if !v.is_finite() {
            return Err(Error::numeric(format!(
                "log partition function non-finite at {positions:?}"
            )));
        }
        Ok(v)
    }

    pub fn value(&self, positions: &[f64]) -> Result<f64> {
        self.log_value(positions).map(f64::exp)
    }

    /// `∂_{x_α} ln Z`. Closed form for the power laws; for the four-point
    /// sector `ln G` is differentiated by central differences in `x`.
    pub fn log_gradient(&self, positions: &[f64]) -> Result<Vec<f64>> {
        self.check_positions(positions)?;
        match self.kind {
            PartitionKind::Constant { curves } => Ok(vec![0.0; curves]),
            PartitionKind::TwoSle { delta } => {
                let g = delta / (positions[0] - positions[1]);
                Ok(vec![g, -g])
            }
            PartitionKind::ThreeSleUnique { n } => {
                let e = 2.0 / (n as f64 + 2.0);
                Ok((0..3)
                    .map(|a| {
                        e * (0..3)
                            .filter(|&b| b != a)
                            .map(|b| 1.0 / (positions[a] - positions[b]))
                            .sum::<f64>()
                    })
                    .collect())
            }
            PartitionKind::FourPointBlock { .. } => {
                let [x1, x2, x3] = [positions[0], positions[1], positions[2]];
                let len = x3 - x1;
                let x = (x2 - x1) / len;
                let h = FD_RELATIVE_STEP * x.min(1.0 - x);
                let dlng = (self.ln_block_sum(x + h)? - self.ln_block_sum(x - h)?) / (2.0 * h);
                let pre = -2.0 * self.h_bcc / len;
                Ok(vec![
                    -pre - dlng * (1.0 - x) / len,
                    dlng / len,
                    pre - dlng * x / len,
                ])
            }
        }
    }

    /// `(t^a_{λ_β} Z)/Z`, see [`insert_generator`].
    pub fn insertion_ratio(&self, irreps: &[IrrepAction], a: usize, beta: usize) -> Result<InsertionRatio> {
        insert_generator(&self.state, irreps, a, beta)
    }
}

/// Free-function form of [`PurePartition::log_gradient`].
pub fn log_z_gradient(z: &PurePartition, positions: &[f64]) -> Result<Vec<f64>> {
    z.log_gradient(positions)
}

/// Free-function form of [`PurePartition::insertion_ratio`]; the positions
/// only validate arity since insertions act on the internal state.
pub fn insertion_ratio(
    z: &PurePartition,
    irreps: &[IrrepAction],
    positions: &[f64],
    a: usize,
    beta: usize,
) -> Result<InsertionRatio> {
    z.check_positions(positions)?;
    z.insertion_ratio(irreps, a, beta)
}
