//! Multiple chordal Loewner chains built from vertical-slit maps.
//!
//! Over a step in which tip `α` sits at `x_α` and gains capacity `dq_α`, the
//! Loewner flow `∂g = 2 dq/(g − x_α)` is integrated exactly by the
//! vertical-slit map `φ(z) = x_α + sqrt((z − x_α)² + 4 dq_α)`. Within a step
//! the displacements of all curves' slits are added; `g_t` composes the steps
//! in journal order.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

/// Default collision threshold relative to the initial tip spread.
pub const DEFAULT_COLLISION_FRACTION: f64 = 1e-4;

/// One elementary slit map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JournalEntry {
    pub step: u64,
    pub alpha: usize,
    pub x_alpha: f64,
    pub dq: f64,
    /// Time at the start of the step.
    pub t: f64,
}

/// Two adjacent tips closer than the collision threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CollisionEvent {
    /// 0-based indices `(α, α + 1)`.
    pub pair: (usize, usize),
    pub time: f64,
    pub gap: f64,
}

impl CollisionEvent {
    /// Pair label with 1-based indices, e.g. `[12]`.
    pub fn label(&self) -> String {
        format!("[{}{}]", self.pair.0 + 1, self.pair.1 + 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoewnerState {
    tips: Vec<f64>,
    /// Lie-group coordinates `p^a_α`, three per curve.
    pub lie_coords: Vec<[f64; 3]>,
    capacity: Vec<f64>,
    time: f64,
    steps: u64,
    journal: Option<Vec<JournalEntry>>,
    terminated: Option<CollisionEvent>,
}

fn check_ordered(tips: &[f64]) -> bool {
    tips.iter().all(|t| t.is_finite()) && tips.windows(2).all(|w| w[0] < w[1])
}

impl LoewnerState {
    /// Fresh chain with the given ordered tips, recording a journal.
    pub fn new(tips: Vec<f64>) -> Result<Self> {
        if tips.is_empty() {
            return Err(Error::domain("at least one curve is required"));
        }
        if !check_ordered(&tips) {
            return Err(Error::domain(format!(
                "initial tips must be finite and strictly increasing, got {tips:?}"
            )));
        }
        let m = tips.len();
        Ok(LoewnerState {
            tips,
            lie_coords: vec![[0.0; 3]; m],
            capacity: vec![0.0; m],
            time: 0.0,
            steps: 0,
            journal: Some(Vec::new()),
            terminated: None,
        })
    }

    /// Drop the journal; evaluation of `g_t` is then unavailable but the
    /// state stays O(m) in memory, as Monte-Carlo runs need.
    pub fn without_journal(mut self) -> Self {
        self.journal = None;
        self
    }

    pub fn tips(&self) -> &[f64] {
        &self.tips
    }

    pub fn curves(&self) -> usize {
        self.tips.len()
    }

    pub fn capacity(&self) -> &[f64] {
        &self.capacity
    }

    pub fn total_capacity(&self) -> f64 {
        self.capacity.iter().sum()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn journal(&self) -> Option<&[JournalEntry]> {
        self.journal.as_deref()
    }

    pub fn terminated(&self) -> Option<&CollisionEvent> {
        self.terminated.as_ref()
    }

    /// Stop evolution at a collision.
    pub fn terminate(&mut self, event: CollisionEvent) {
        self.terminated = Some(event);
    }

    /// Smallest gap between adjacent tips and the left index of that pair.
    pub fn min_gap(&self) -> Option<(usize, f64)> {
        self.tips
            .windows(2)
            .enumerate()
            .map(|(i, w)| (i, w[1] - w[0]))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Append one slit per curve at the current tips with capacities `dq`,
    /// then move the tips to `new_positions`. Time advances by `max dq`.
    ///
    /// Fails with [`Error::StepRejected`] and leaves the state untouched if
    /// the new tips are not strictly ordered.
    pub fn slit_step(&mut self, dq: &[f64], new_positions: &[f64]) -> Result<()> {
        let m = self.curves();
        if self.terminated.is_some() {
            return Err(Error::domain("evolution already terminated by a collision"));
        }
        if dq.len() != m || new_positions.len() != m {
            return Err(Error::domain(format!(
                "step needs {m} capacity increments and positions"
            )));
        }
        if dq.iter().any(|&d| !(d >= 0.0) || !d.is_finite()) {
            return Err(Error::domain(format!("capacity increments must be >= 0, got {dq:?}")));
        }
        if !check_ordered(new_positions) {
            return Err(Error::StepRejected(format!(
                "tips would cross: {:?} -> {new_positions:?}",
                self.tips
            )));
        }
        if dq.iter().all(|&d| d == 0.0) && new_positions == self.tips.as_slice() {
            return Ok(());
        }
        if let Some(journal) = self.journal.as_mut() {
            for (alpha, (&x, &d)) in self.tips.iter().zip(dq).enumerate() {
                if d > 0.0 {
                    journal.push(JournalEntry {
                        step: self.steps,
                        alpha,
                        x_alpha: x,
                        dq: d,
                        t: self.time,
                    });
                }
            }
        }
        for (c, &d) in self.capacity.iter_mut().zip(dq) {
            *c += d;
        }
        self.time += dq.iter().copied().fold(0.0, f64::max);
        self.steps += 1;
        self.tips.copy_from_slice(new_positions);
        Ok(())
    }

    /// `g_t(z)` for `z` in the upper half-plane away from the hull.
    pub fn evaluate_map(&self, z: Complex64) -> Result<Complex64> {
        let journal = self
            .journal
            .as_ref()
            .ok_or_else(|| Error::domain("journal disabled; map cannot be evaluated"))?;
        evaluate_journal(journal, z)
    }

    /// First adjacent pair closer than `epsilon`, choosing the smallest gap.
    pub fn collision_check(&self, epsilon: f64) -> Option<CollisionEvent> {
        collision_check(self, epsilon)
    }

    /// Write the journal as CSV: `step,alpha,x_alpha,dq,t`.
    pub fn write_journal_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let journal = self
            .journal
            .as_ref()
            .ok_or_else(|| Error::domain("journal disabled"))?;
        writeln!(out, "step,alpha,x_alpha,dq,t")?;
        for e in journal {
            writeln!(out, "{},{},{},{},{}", e.step, e.alpha + 1, e.x_alpha, e.dq, e.t)?;
        }
        Ok(())
    }
}

/// Displacement `φ(w) − w` of one vertical-slit map at `w = base + offset`.
/// `base − x` is formed first so that large `|z|` keeps the small
/// displacement accurate.
fn slit_increment(base: Complex64, offset: Complex64, x: f64, dq: f64) -> Complex64 {
    let d = (base - x) + offset;
    let mut s = (d * d + 4.0 * dq).sqrt();
    // branch with Im s ≥ 0; on the real axis follow the sign of Re d
    if s.im < 0.0 || (s.im == 0.0 && s.re * d.re < 0.0) {
        s = -s;
    }
    4.0 * dq / (s + d)
}

/// Compose the journal maps on `z`. Slits sharing a step number act on the
/// same pre-step point and their increments add, the Euler form of
/// `dg = Σ_α 2 dq_α/(g − x_α)`; successive steps compose.
pub fn evaluate_journal(journal: &[JournalEntry], z: Complex64) -> Result<Complex64> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(format!("z = {z} is not in the upper half-plane")));
    }
    let mut offset = Complex64::new(0.0, 0.0);
    let mut i = 0;
    while i < journal.len() {
        let step = journal[i].step;
        let mut next = offset;
        while i < journal.len() && journal[i].step == step {
            let e = &journal[i];
            next += slit_increment(z, offset, e.x_alpha, e.dq);
            i += 1;
        }
        offset = next;
        let w = z + offset;
        if !(w.im > 0.0) || !w.re.is_finite() {
            return Err(Error::domain(format!(
                "z = {z} lies inside or too near the hull (image {w} at step {step})"
            )));
        }
    }
    Ok(z + offset)
}

/// Closest adjacent pair with gap below `epsilon`.
pub fn collision_check(state: &LoewnerState, epsilon: f64) -> Option<CollisionEvent> {
    match state.min_gap() {
        Some((i, gap)) if gap < epsilon => Some(CollisionEvent {
            pair: (i, i + 1),
            time: state.time,
            gap,
        }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single_slit(t: f64, steps: usize) -> LoewnerState {
        let mut s = LoewnerState::new(vec![0.0]).unwrap();
        let dq = t / steps as f64;
        for _ in 0..steps {
            s.slit_step(&[dq], &[0.0]).unwrap();
        }
        s
    }

    #[test]
    fn vertical_slit_closed_form() {
        let s = single_slit(1.0, 1000);
        let g = s.evaluate_map(c(0.0, 3.0)).unwrap();
        assert_relative_eq!(g.im, 5f64.sqrt(), max_relative = 1e-12);
        assert!(g.re.abs() < 1e-12);
        for z in [c(1.0, 0.5), c(-2.0, 1.0), c(0.3, 4.0), c(-0.1, 0.05)] {
            let exact = (z * z + 4.0).sqrt();
            let exact = if exact.im < 0.0 { -exact } else { exact };
            let g = s.evaluate_map(z).unwrap();
            assert!((g - exact).norm() <= 1e-10 * exact.norm(), "z = {z}");
        }
    }

    #[test]
    fn identity_at_time_zero() {
        let s = LoewnerState::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(s.evaluate_map(c(0.3, 0.7)).unwrap(), c(0.3, 0.7));
        let mut t = s.clone();
        t.slit_step(&[0.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(t, s);
    }

    #[test]
    fn hydrodynamic_normalization() {
        let mut s = LoewnerState::new(vec![-0.5, 0.2, 1.0]).unwrap();
        for k in 0..200 {
            let shift = 0.001 * (k as f64).sin();
            let tips: Vec<f64> = s.tips().iter().map(|x| x + shift).collect();
            s.slit_step(&[1e-3, 2e-3, 5e-4], &tips).unwrap();
        }
        let q = s.total_capacity();
        assert_relative_eq!(q, 200.0 * 3.5e-3, max_relative = 1e-12);
        for z in [c(1e8, 0.0) + c(0.0, 1e-3), c(0.0, 1e8), c(-7e7, 7e7)] {
            let g = s.evaluate_map(z).unwrap();
            assert!((g - z - 2.0 * q / z).norm() <= 1e-6);
        }
    }

    #[test]
    fn symmetric_pair_commutes_with_reflection() {
        let mut s = LoewnerState::new(vec![-0.4, 0.4]).unwrap();
        let mut d = 0.4;
        for _ in 0..500 {
            d += 1e-4;
            s.slit_step(&[1e-4, 1e-4], &[-d, d]).unwrap();
        }
        for z in [c(0.3, 0.2), c(-1.5, 0.8), c(0.0, 2.0)] {
            let g = s.evaluate_map(z).unwrap();
            let mirrored = s.evaluate_map(-z.conj()).unwrap();
            assert!((mirrored + g.conj()).norm() < 1e-9, "z = {z}");
        }
    }

    #[test]
    fn rejects_points_in_hull_and_lower_half_plane() {
        let s = single_slit(1.0, 100);
        assert!(s.evaluate_map(c(0.0, 1.0)).is_err());
        assert!(s.evaluate_map(c(1.0, -1.0)).is_err());
        assert!(s.evaluate_map(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn crossing_tips_are_rejected() {
        let mut s = LoewnerState::new(vec![0.0, 1.0]).unwrap();
        let before = s.clone();
        let err = s.slit_step(&[1e-3, 1e-3], &[1.1, 1.0]).unwrap_err();
        assert!(matches!(err, Error::StepRejected(_)));
        assert_eq!(s, before);
        assert!(s.slit_step(&[-1.0, 0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn collision_examples() {
        let s = LoewnerState::new(vec![0.0, 1.0]).unwrap();
        assert!(s.collision_check(1e-3).is_none());
        let s = LoewnerState::new(vec![0.0, 5e-4]).unwrap();
        let e = s.collision_check(1e-3).unwrap();
        assert_eq!(e.pair, (0, 1));
        assert_eq!(e.label(), "[12]");
        let s = LoewnerState::new(vec![0.0, 1.0, 1.0 + 1e-5]).unwrap();
        assert_eq!(s.collision_check(1e-3).unwrap().pair, (1, 2));
    }

    #[test]
    fn journal_csv() {
        let s = single_slit(0.2, 2);
        let mut buf = Vec::new();
        s.write_journal_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "step,alpha,x_alpha,dq,t");
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "0,1,0,0.1,0");
    }

    proptest! {
        #[test]
        fn scaling_covariance(lambda in 0.25f64..4.0, seed in 0u64..1000) {
            // deterministic pseudo-random journal
            let mut tips = vec![-0.6, 0.1, 0.9];
            let mut a = LoewnerState::new(tips.clone()).unwrap();
            let mut b = LoewnerState::new(tips.iter().map(|x| x * lambda).collect()).unwrap();
            for k in 0..50u64 {
                let wobble = ((seed * 31 + k) as f64).sin() * 1e-3;
                let next: Vec<f64> = tips.iter().enumerate().map(|(i, x)| x + wobble * (i as f64 - 1.0)).collect();
                let dq = [1e-3, 2e-3, 1.5e-3];
                a.slit_step(&dq, &next).unwrap();
                let dq_s: Vec<f64> = dq.iter().map(|d| d * lambda * lambda).collect();
                let next_s: Vec<f64> = next.iter().map(|x| x * lambda).collect();
                b.slit_step(&dq_s, &next_s).unwrap();
                tips = next;
            }
            let z = c(0.2, 0.9);
            let ga = a.evaluate_map(z).unwrap();
            let gb = b.evaluate_map(z * lambda).unwrap();
            prop_assert!((gb - ga * lambda).norm() <= 1e-12 * gb.norm());
        }
    }
}
