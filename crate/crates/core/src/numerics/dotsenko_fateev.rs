//! Cutoff-regularized Dotsenko–Fateev double integral for the `Z(n)`
//! four-point block.
//!
//! The block is
//!
//! ```text
//! x^a (1−x)^a ∫∫_{1+ε ≤ u ≤ v ≤ v_max} [u(u−1)(u−x) v(v−1)(v−x)]^{−a} (v−u)^a f(u, v) du dv
//! f(u, v) = 1/((v−x)(u−1)) + 1/((v−1)(u−x)) + 1/(v(u−1)) + 1/((v−1)u) + 1/(v(u−x)) + 1/((v−x)u)
//! ```
//!
//! with `a = 2/(n+2)`. The `1/(u−1)` terms make the integral diverge like
//! `ε^{−a}` at the lower corner, so only ratios of blocks at a common cutoff
//! carry meaning.
//!
//! Quadrature runs in logarithmic coordinates `r = ln(u−1)` and
//! `ρ = ln(v−u)`, which turns the algebraic endpoint behaviour and the
//! algebraic tail into exponentially decaying, smooth integrands. Each axis
//! is split into unit-width panels carrying a Gauss–Legendre rule.

use serde::{Deserialize, Serialize};

use super::quadrature::{gauss_legendre, QuadratureRule};
use crate::{Error, Result};

/// Exponential decay (in e-folds) retained at each truncated end of a log axis.
const TAIL_EFOLDS: f64 = 36.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfConfig {
    /// Distance of the lower integration corner from the singular point 1.
    pub cutoff_epsilon: f64,
    /// Upper limit of the `v` integral; `f64::INFINITY` integrates the full tail.
    #[serde(with = "crate::io::unbounded")]
    pub v_max: f64,
    /// Gauss–Legendre nodes per unit-width log panel on each axis.
    pub nodes_per_axis: usize,
    /// Maximal relative change between the `nodes_per_axis/2` and
    /// `nodes_per_axis` estimates.
    pub tolerance: f64,
}

impl Default for DfConfig {
    fn default() -> Self {
        DfConfig {
            cutoff_epsilon: 1e-12,
            v_max: f64::INFINITY,
            nodes_per_axis: 8,
            tolerance: 1e-6,
        }
    }
}

impl DfConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff_epsilon > 0.0 && self.cutoff_epsilon < 1.0) {
            return Err(Error::domain(format!(
                "cutoff_epsilon = {} must lie in (0, 1)",
                self.cutoff_epsilon
            )));
        }
        if !(self.v_max > 1.0 + self.cutoff_epsilon) {
            return Err(Error::domain(format!(
                "v_max = {} must exceed 1 + cutoff_epsilon",
                self.v_max
            )));
        }
        if self.nodes_per_axis < 2 {
            return Err(Error::domain("nodes_per_axis must be at least 2"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        Ok(())
    }

    pub fn with_cutoff(mut self, eps: f64) -> Self {
        self.cutoff_epsilon = eps;
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes_per_axis = nodes;
        self
    }
}

/// Block value together with its refinement diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DfEstimate {
    pub value: f64,
    /// Estimate with half the nodes per panel.
    pub coarse: f64,
    pub rel_change: f64,
}

/// Regularized block for level `n ≥ 4` at cross ratio `x ∈ (0, 1)`.
pub fn df_block(n: u32, x: f64, cfg: &DfConfig) -> Result<f64> {
    df_block_estimate(n, x, cfg).map(|e| e.value)
}

/// As [`df_block`], also returning the coarse estimate. Fails with
/// [`Error::NotConverged`] when the two refinement levels disagree by more
/// than `cfg.tolerance`.
pub fn df_block_estimate(n: u32, x: f64, cfg: &DfConfig) -> Result<DfEstimate> {
    if n < 4 {
        return Err(Error::domain(format!(
            "Dotsenko-Fateev block requires n >= 4, got {n}"
        )));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("cross ratio x = {x} outside (0, 1)")));
    }
    cfg.validate()?;
    let a = 2.0 / (n as f64 + 2.0);
    let fine_rule = gauss_legendre(cfg.nodes_per_axis)?;
    let coarse_rule = gauss_legendre((cfg.nodes_per_axis / 2).max(1))?;
    let prefactor = (a * (x.ln() + (1.0 - x).ln())).exp();
    let fine = prefactor * regularized_integral(a, x, cfg, &fine_rule);
    let coarse = prefactor * regularized_integral(a, x, cfg, &coarse_rule);
    if !(fine.is_finite() && fine > 0.0) {
        return Err(Error::numeric(format!(
            "Dotsenko-Fateev block at x = {x} evaluated to {fine}"
        )));
    }
    let rel_change = ((fine - coarse) / fine).abs();
    if rel_change > cfg.tolerance {
        return Err(Error::NotConverged {
            coarse,
            fine,
            rel_change,
            tolerance: cfg.tolerance,
        });
    }
    Ok(DfEstimate {
        value: fine,
        coarse,
        rel_change,
    })
}

/// Composite rule over `[lo, hi]` with unit-width panels.
fn panels(lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> {
    let count = if hi > lo { (hi - lo).ceil().max(1.0) as usize } else { 0 };
    let width = if count > 0 { (hi - lo) / count as f64 } else { 0.0 };
    (0..count).map(move |i| (lo + i as f64 * width, lo + (i + 1) as f64 * width))
}

fn regularized_integral(a: f64, x: f64, cfg: &DfConfig, rule: &QuadratureRule) -> f64 {
    let one_minus_x = 1.0 - x;
    let r_lo = cfg.cutoff_epsilon.ln();
    // outer integrand decays like (u−1)^{−5a} once u ≫ 1
    let r_hi = if cfg.v_max.is_finite() {
        (cfg.v_max - 1.0).ln()
    } else {
        TAIL_EFOLDS / (5.0 * a)
    };

    let mut total = 0.0;
    for (p_lo, p_hi) in panels(r_lo, r_hi) {
        let half = 0.5 * (p_hi - p_lo);
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            let r = p_lo + half * (t + 1.0);
            let um1 = r.exp();
            let inner = inner_integral(a, one_minus_x, um1, cfg.v_max, rule);
            // du = (u−1) dr
            total += half * w * um1 * inner;
        }
    }
    total
}

/// `∫_u^{v_max} dv` of the integrand at fixed `u = 1 + um1`.
fn inner_integral(a: f64, one_minus_x: f64, um1: f64, v_max: f64, rule: &QuadratureRule) -> f64 {
    let u = 1.0 + um1;
    let u_minus_x = one_minus_x + um1;
    let log_u_part = u.ln() + um1.ln() + u_minus_x.ln();

    // below the smaller of (u−1) and 1 the integrand vanishes like (v−u)^{1+a}
    let rho_lo = um1.min(1.0).ln() - TAIL_EFOLDS / (1.0 + a);
    let rho_hi = if v_max.is_finite() {
        if v_max <= u {
            return 0.0;
        }
        (v_max - u).ln()
    } else {
        // algebraic tail (v−u)^{−2a} per log unit once v ≫ max(u, 1)
        u.max(1.0).ln() + TAIL_EFOLDS / (2.0 * a)
    };

    let mut total = 0.0;
    for (p_lo, p_hi) in panels(rho_lo, rho_hi) {
        let half = 0.5 * (p_hi - p_lo);
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            let rho = p_lo + half * (t + 1.0);
            let vmu = rho.exp();
            let vm1 = um1 + vmu;
            let v = 1.0 + vm1;
            let v_minus_x = one_minus_x + vm1;
            let log_power = -a * (log_u_part + v.ln() + vm1.ln() + v_minus_x.ln()) + a * rho;
            let f = 1.0 / (v_minus_x * um1)
                + 1.0 / (vm1 * u_minus_x)
                + 1.0 / (v * um1)
                + 1.0 / (vm1 * u)
                + 1.0 / (v * u_minus_x)
                + 1.0 / (v_minus_x * u);
            // dv = (v−u) dρ
            total += half * w * vmu * log_power.exp() * f;
        }
    }
    total
}
