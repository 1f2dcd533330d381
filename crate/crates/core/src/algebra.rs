//! Model parameters and representation data.
//!
//! Everything that depends only on the integer level is computed in exact
//! rational arithmetic first and converted to `f64` at the boundary.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::{Error, Result};

/// Ratio between the su(2) Killing form and the invariant form `K` used for
/// noise covariances. On spin operators `Killing(S^a, S^b) = 2 δ^{ab}`, and
/// `K = Killing / KILLING_FORM_SCALE` makes the spin basis orthonormal.
pub const KILLING_FORM_SCALE: f64 = 2.0;

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn to_f64(r: Rational64) -> f64 {
    r.to_f64().expect("rational fits in f64")
}

/// Model family together with its integer level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `Z(n)` parafermions, `SU(2)_n / U(1)_n`.
    Parafermion { n: u32 },
    /// `SU(2)_k` WZW model.
    Su2k { k: u32 },
}

impl Family {
    pub fn level(&self) -> u32 {
        match *self {
            Family::Parafermion { n } => n,
            Family::Su2k { k } => k,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Parafermion { .. } => "parafermion",
            Family::Su2k { .. } => "su2k",
        }
    }

    /// Parse a family name as used on the command line.
    pub fn from_name(name: &str, level: u32) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "parafermion" | "zn" => Ok(Family::Parafermion { n: level }),
            "su2k" | "su2" => Ok(Family::Su2k { k: level }),
            other => Err(Error::domain(format!("unknown model family `{other}`"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Parafermion { n } => write!(f, "parafermion(n={n})"),
            Family::Su2k { k } => write!(f, "su2k(k={k})"),
        }
    }
}

/// A coset model with its SLE parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CosetModel {
    pub family: Family,
    pub kappa: f64,
    pub tau: f64,
    pub central_charge: f64,
}

impl CosetModel {
    pub fn level(&self) -> u32 {
        self.family.level()
    }

    pub fn kappa_exact(&self) -> Rational64 {
        match self.family {
            Family::Parafermion { n } => {
                let n = n as i64;
                rat(4 * (n + 1), n + 3)
            }
            Family::Su2k { k } => {
                let k = k as i64;
                rat(4 * (k + 2), k + 3)
            }
        }
    }

    pub fn tau_exact(&self) -> Rational64 {
        match self.family {
            Family::Parafermion { n } => {
                let n = n as i64;
                rat(4 * n * n * n, (n + 2) * (n + 2) * (n + 2))
            }
            Family::Su2k { k } => rat(2, k as i64 + 3),
        }
    }

    pub fn central_charge_exact(&self) -> Rational64 {
        match self.family {
            Family::Parafermion { n } => coset_central_charge(n, 3, 2, 1, 0),
            Family::Su2k { k } => coset_central_charge(k, 3, 2, 0, 0),
        }
        .expect("level validated at construction")
    }

    /// Weight `h_Λ` of the boundary-condition-changing operator.
    pub fn bcc_weight_exact(&self) -> Rational64 {
        match self.family {
            // isospin 1, spin 0: h_(2,0)
            Family::Parafermion { n } => parafermion_weight(n, 2, 0).expect("valid level"),
            // isospin 1/2 primary of SU(2)_k
            Family::Su2k { k } => rat(3, 4 * (k as i64 + 2)),
        }
    }

    /// Weight `h_{2Λ}` of the leading non-identity fusion channel `ψ_Λ × ψ_Λ`.
    pub fn fused_weight_exact(&self) -> Rational64 {
        match self.family {
            Family::Parafermion { n } => rat(6, n as i64 + 2),
            Family::Su2k { k } => rat(2, k as i64 + 2),
        }
    }

    pub fn bcc_weight(&self) -> f64 {
        to_f64(self.bcc_weight_exact())
    }

    pub fn fused_weight(&self) -> f64 {
        to_f64(self.fused_weight_exact())
    }

    /// Twice the isospin carried by the boundary operator.
    pub fn bcc_twice_spin(&self) -> u32 {
        match self.family {
            Family::Parafermion { .. } => 2,
            Family::Su2k { .. } => 1,
        }
    }

    /// Generator indices spanning the group directions driven by Brownian
    /// noise: the coset directions for parafermions, all of su(2) otherwise.
    pub fn lie_directions(&self) -> &'static [usize] {
        match self.family {
            Family::Parafermion { .. } => &[0, 1],
            Family::Su2k { .. } => &[0, 1, 2],
        }
    }

    /// Parafermion levels below 4 lie outside the range where the boundary
    /// operator is known to satisfy the SLE null-vector condition.
    pub fn is_extrapolated(&self) -> bool {
        matches!(self.family, Family::Parafermion { n } if n < 4)
    }
}

/// `k dim g/(k + h_g) − k dim a/(k + h_a)`, exact.
pub fn coset_central_charge(
    k: u32,
    dim_g: u32,
    h_dual_g: u32,
    dim_a: u32,
    h_dual_a: u32,
) -> Result<Rational64> {
    if k == 0 {
        return Err(Error::domain("level must be positive"));
    }
    if dim_g == 0 {
        return Err(Error::domain("dim g must be positive"));
    }
    let k = k as i64;
    let g = rat(k * dim_g as i64, k + h_dual_g as i64);
    let a = rat(k * dim_a as i64, k + h_dual_a as i64);
    Ok(g - a)
}

/// Conformal weight `j(j+2)/(4(n+2)) − jz²/(4n)` of the parafermion primary
/// with isospin `j/2` and spin `jz/2`.
pub fn parafermion_weight(n: u32, j: u32, jz: i32) -> Result<Rational64> {
    if n == 0 {
        return Err(Error::domain("parafermion level must be positive"));
    }
    if j > n {
        return Err(Error::domain(format!("j = {j} exceeds level n = {n}")));
    }
    if jz.unsigned_abs() > j {
        return Err(Error::domain(format!("|jz| = {} exceeds j = {j}", jz.abs())));
    }
    let (n, j, jz) = (n as i64, j as i64, jz as i64);
    Ok(rat(j * (j + 2), 4 * (n + 2)) - rat(jz * jz, 4 * n))
}

/// Populate κ, τ and the central charge for a model family.
pub fn model_params(family: Family) -> Result<CosetModel> {
    match family {
        Family::Parafermion { n } if n < 2 => {
            return Err(Error::domain(format!("parafermion level n = {n} must be >= 2")))
        }
        Family::Su2k { k } if k < 1 => {
            return Err(Error::domain(format!("SU(2)_k level k = {k} must be >= 1")))
        }
        _ => {}
    }
    // keep the i64 rationals far from overflow
    if family.level() > 10_000 {
        return Err(Error::domain("level too large"));
    }
    let mut model = CosetModel {
        family,
        kappa: 0.0,
        tau: 0.0,
        central_charge: 0.0,
    };
    model.kappa = to_f64(model.kappa_exact());
    model.tau = to_f64(model.tau_exact());
    model.central_charge = to_f64(model.central_charge_exact());
    Ok(model)
}

/// Generators of the spin-`j/2` irreducible representation of su(2).
#[derive(Clone, Debug, PartialEq)]
pub struct IrrepAction {
    twice_spin: u32,
    generators: [DMatrix<Complex64>; 3],
}

impl IrrepAction {
    pub fn twice_spin(&self) -> u32 {
        self.twice_spin
    }

    pub fn dim(&self) -> usize {
        self.twice_spin as usize + 1
    }

    /// Generator `t^{a+1}`; index 2 is the Cartan generator.
    pub fn generator(&self, a: usize) -> &DMatrix<Complex64> {
        &self.generators[a]
    }

    pub fn generators(&self) -> &[DMatrix<Complex64>; 3] {
        &self.generators
    }

    /// `Σ_a t^a t^a`.
    pub fn casimir(&self) -> DMatrix<Complex64> {
        self.generators.iter().map(|t| t * t).fold(
            DMatrix::zeros(self.dim(), self.dim()),
            |acc, m| acc + m,
        )
    }

    /// Casimir eigenvalue `s(s+1)` with `s = j/2`.
    pub fn casimir_eigenvalue(&self) -> f64 {
        let s = self.twice_spin as f64 / 2.0;
        s * (s + 1.0)
    }
}

/// Spin-operator matrices for isospin `j/2` in the basis `m = j/2, j/2−1, …, −j/2`.
pub fn su2_generators(j: u32) -> IrrepAction {
    let dim = j as usize + 1;
    let s = j as f64 / 2.0;
    let m_of = |i: usize| s - i as f64;
    let mut raise = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 1..dim {
        // S+ |m⟩ = sqrt(s(s+1) − m(m+1)) |m+1⟩, |m+1⟩ sits at row i−1
        let m = m_of(i);
        raise[(i - 1, i)] = Complex64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let minus_half_i = Complex64::new(0.0, -0.5);
    let sx = (&raise + &lower) * half;
    let sy = (&raise - &lower) * minus_half_i;
    let sz = DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new(m_of(r), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    IrrepAction {
        twice_spin: j,
        generators: [sx, sy, sz],
    }
}

/// Index range of the Fateev–Zamolodchikov product for weight `x_m`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FzProductRange {
    /// `k = 0 ..= m−1`. Reproduces the critical Ising weight `√2 − 1` at n = 2.
    #[default]
    FromZero,
    /// `k = 1 ..= m−1`.
    FromOne,
}

/// Boltzmann weight ratios `x_m = exp(−β H(m))` at the self-dual integrable point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FzWeights {
    pub n: u32,
    pub range: FzProductRange,
    pub weights: Vec<f64>,
}

impl FzWeights {
    /// Largest violation of `x_m = x_{n−m}`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.weights.len();
        (1..n)
            .map(|m| (self.weights[m] - self.weights[n - m]).abs())
            .fold(0.0, f64::max)
    }
}

pub fn fz_weights(n: u32) -> Result<FzWeights> {
    fz_weights_with_range(n, FzProductRange::default())
}

pub fn fz_weights_with_range(n: u32, range: FzProductRange) -> Result<FzWeights> {
    if n < 2 {
        return Err(Error::domain(format!("Z(n) weights need n >= 2, got {n}")));
    }
    let big_n = n as f64;
    let factor = |k: u32| {
        let k = k as f64;
        (PI * k / big_n + PI / (4.0 * big_n)).sin()
            / (PI * (k + 1.0) / big_n - PI / (4.0 * big_n)).sin()
    };
    let first = match range {
        FzProductRange::FromZero => 0,
        FzProductRange::FromOne => 1,
    };
    let weights = (0..n)
        .map(|m| {
            if m == 0 {
                1.0
            } else {
                (first..m).map(factor).product()
            }
        })
        .collect();
    Ok(FzWeights { n, range, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        a * b - b * a
    }

    #[test]
    fn central_charge_examples() {
        assert_eq!(coset_central_charge(2, 3, 2, 1, 0).unwrap(), rat(1, 2));
        assert_eq!(coset_central_charge(1, 3, 2, 3, 2).unwrap(), rat(0, 1));
        assert_eq!(coset_central_charge(4, 3, 2, 1, 0).unwrap(), rat(1, 1));
        assert!(matches!(coset_central_charge(0, 3, 2, 1, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn central_charge_matches_parafermion_formula() {
        for n in 2..=64i64 {
            let c = coset_central_charge(n as u32, 3, 2, 1, 0).unwrap();
            assert_eq!(c, rat(2 * (n - 1), n + 2), "n = {n}");
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(parafermion_weight(4, 2, 0).unwrap(), rat(1, 3));
        assert_eq!(parafermion_weight(7, 0, 0).unwrap(), rat(0, 1));
        assert_eq!(parafermion_weight(3, 1, 1).unwrap(), rat(1, 15));
        assert!(parafermion_weight(0, 0, 0).is_err());
        assert!(parafermion_weight(4, 5, 0).is_err());
        assert!(parafermion_weight(4, 2, 3).is_err());
    }

    #[test]
    fn weight_is_even_in_jz() {
        for n in 2..12 {
            for j in 0..=n {
                for jz in 0..=j as i32 {
                    assert_eq!(
                        parafermion_weight(n, j, jz).unwrap(),
                        parafermion_weight(n, j, -jz).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn model_examples() {
        let pf4 = model_params(Family::Parafermion { n: 4 }).unwrap();
        assert_eq!(pf4.kappa_exact(), rat(20, 7));
        assert_eq!(pf4.tau_exact(), rat(32, 27));
        assert_eq!(pf4.central_charge_exact(), rat(1, 1));
        let su2 = model_params(Family::Su2k { k: 2 }).unwrap();
        assert_eq!(su2.kappa_exact(), rat(16, 5));
        assert_eq!(su2.tau_exact(), rat(2, 5));
        assert_eq!(su2.kappa, 3.2);
        assert_eq!(su2.tau, 0.4);
        let ising = model_params(Family::Parafermion { n: 2 }).unwrap();
        assert_eq!(ising.central_charge_exact(), rat(1, 2));
        assert!(ising.is_extrapolated());
        assert!(!pf4.is_extrapolated());
        assert!(model_params(Family::Parafermion { n: 0 }).is_err());
        assert!(model_params(Family::Su2k { k: 0 }).is_err());
    }

    #[test]
    fn kappa_monotone_and_bounded() {
        let mut prev = 0.0;
        for n in 2..200 {
            let m = model_params(Family::Parafermion { n }).unwrap();
            assert!(m.kappa > prev && m.kappa < 4.0);
            assert!(m.kappa > 0.0 && m.kappa < 8.0);
            prev = m.kappa;
        }
        let far = model_params(Family::Parafermion { n: 10_000 }).unwrap();
        assert!((far.tau - 4.0).abs() < 1e-2);
        for k in 1..50 {
            let m = model_params(Family::Su2k { k }).unwrap();
            assert!(m.kappa > 0.0 && m.kappa < 8.0);
        }
    }

    #[test]
    fn trivial_representation_is_zero() {
        let t = su2_generators(0);
        assert_eq!(t.dim(), 1);
        for g in t.generators() {
            assert_eq!(g[(0, 0)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn spin_half_casimir() {
        let t = su2_generators(1);
        let c = t.casimir();
        for r in 0..2 {
            for col in 0..2 {
                let expected = if r == col { 0.75 } else { 0.0 };
                assert_abs_diff_eq!(c[(r, col)].re, expected, epsilon = 1e-14);
                assert_abs_diff_eq!(c[(r, col)].im, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn spin_one_cartan_spectrum() {
        let t = su2_generators(2);
        let diag: Vec<f64> = (0..3).map(|i| t.generator(2)[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn commutation_relations_and_hermiticity() {
        let i = Complex64::new(0.0, 1.0);
        for j in 0..8 {
            let t = su2_generators(j);
            for a in 0..3 {
                let g = t.generator(a);
                assert!((g - g.adjoint()).iter().all(|z| z.norm() < 1e-12));
                let b = (a + 1) % 3;
                let c = (a + 2) % 3;
                let lhs = commutator(t.generator(a), t.generator(b));
                let rhs = t.generator(c) * i;
                for (l, r) in lhs.iter().zip(rhs.iter()) {
                    assert!((l - r).norm() <= 1e-12, "j={j} a={a}");
                }
            }
            let cas = t.casimir();
            for r in 0..t.dim() {
                assert_abs_diff_eq!(cas[(r, r)].re, t.casimir_eigenvalue(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn killing_form_normalization() {
        // Killing(X, Y) = Tr(ad X ad Y); the adjoint is the spin-1 irrep.
        let adj = su2_generators(2);
        for a in 0..3 {
            for b in 0..3 {
                let tr = (adj.generator(a) * adj.generator(b)).trace().re;
                let k = tr / KILLING_FORM_SCALE;
                assert_abs_diff_eq!(k, if a == b { 1.0 } else { 0.0 }, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn fz_weight_examples() {
        for n in 2..20 {
            for range in [FzProductRange::FromZero, FzProductRange::FromOne] {
                let w = fz_weights_with_range(n, range).unwrap();
                assert_eq!(w.weights[0], 1.0);
                assert!(w.weights.iter().all(|&x| x > 0.0));
                assert!(w.symmetry_defect() < 1e-12, "n={n} {range:?}");
            }
        }
        let ising = fz_weights(2).unwrap();
        assert_abs_diff_eq!(ising.weights[1], (PI / 8.0).tan(), epsilon = 1e-15);
        assert_abs_diff_eq!(ising.weights[1], 2f64.sqrt() - 1.0, epsilon = 1e-15);
        let three = fz_weights(3).unwrap();
        assert_abs_diff_eq!(three.weights[1], three.weights[2], epsilon = 1e-15);
        assert!(fz_weights(1).is_err());
    }
}
