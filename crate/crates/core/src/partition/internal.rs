//! Internal (group) state of the boundary fields and generator insertions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::IrrepAction;
use crate::{Error, Result};

/// Tensor in `V_{j_1} ⊗ … ⊗ V_{j_m}` carried by a pure partition function.
///
/// The first factor is the most significant index, matching the Kronecker
/// product convention.
#[derive(Clone, Debug, PartialEq)]
pub struct InternalState {
    twice_spins: Vec<u32>,
    amplitudes: DVector<Complex64>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl InternalState {
    pub fn custom(twice_spins: Vec<u32>, amplitudes: DVector<Complex64>) -> Result<Self> {
        let dim: usize = twice_spins.iter().map(|&j| j as usize + 1).product();
        if amplitudes.len() != dim {
            return Err(Error::domain(format!(
                "state has {} amplitudes, tensor space has dimension {dim}",
                amplitudes.len()
            )));
        }
        if amplitudes.norm() == 0.0 {
            return Err(Error::domain("internal state must be nonzero"));
        }
        Ok(InternalState {
            twice_spins,
            amplitudes,
        })
    }

    /// Single-factor basis vector `|m⟩` with `m = j/2 − index`.
    pub fn basis(twice_spin: u32, index: usize) -> Result<Self> {
        let dim = twice_spin as usize + 1;
        if index >= dim {
            return Err(Error::domain(format!(
                "basis index {index} out of range for spin {twice_spin}/2"
            )));
        }
        let mut v = DVector::zeros(dim);
        v[index] = c(1.0);
        Ok(InternalState {
            twice_spins: vec![twice_spin],
            amplitudes: v,
        })
    }

    /// Product of `m = 0` vectors; every spin must be integral.
    pub fn zero_weight_product(twice_spins: &[u32]) -> Result<Self> {
        let mut state: Option<InternalState> = None;
        for &j in twice_spins {
            if j % 2 != 0 {
                return Err(Error::domain(format!(
                    "spin {j}/2 has no zero-weight vector"
                )));
            }
            let factor = Self::basis(j, j as usize / 2)?;
            state = Some(match state {
                None => factor,
                Some(s) => s.tensor(&factor),
            });
        }
        state.ok_or_else(|| Error::domain("empty tensor product"))
    }

    /// `(|↑↓⟩ − |↓↑⟩)/√2`, the `ε`-contracted spin-1/2 pair.
    pub fn singlet_pair() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        InternalState {
            twice_spins: vec![1, 1],
            amplitudes: DVector::from_vec(vec![c(0.0), c(h), c(-h), c(0.0)]),
        }
    }

    pub fn tensor(&self, other: &InternalState) -> InternalState {
        let mut twice_spins = self.twice_spins.clone();
        twice_spins.extend(&other.twice_spins);
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        InternalState {
            twice_spins,
            amplitudes,
        }
    }

    pub fn twice_spins(&self) -> &[u32] {
        &self.twice_spins
    }

    pub fn arity(&self) -> usize {
        self.twice_spins.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Apply a single-site operator on tensor factor `site`.
    pub fn apply_on_site(&self, op: &DMatrix<Complex64>, site: usize) -> Result<DVector<Complex64>> {
        let dims: Vec<usize> = self.twice_spins.iter().map(|&j| j as usize + 1).collect();
        let d = *dims
            .get(site)
            .ok_or_else(|| Error::domain(format!("site {site} out of range")))?;
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::domain(format!(
                "operator of size {}x{} on a site of dimension {d}",
                op.nrows(),
                op.ncols()
            )));
        }
        let inner: usize = dims[site + 1..].iter().product();
        let outer: usize = dims[..site].iter().product();
        let mut out = DVector::zeros(self.amplitudes.len());
        for o in 0..outer {
            for r in 0..d {
                for cidx in 0..d {
                    let g = op[(r, cidx)];
                    if g == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for i in 0..inner {
                        out[(o * d + r) * inner + i] += g * self.amplitudes[(o * d + cidx) * inner + i];
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Result of inserting a generator `t^a` on one boundary field.
#[derive(Clone, Debug, PartialEq)]
pub enum InsertionRatio {
    /// The state is an eigenvector of the insertion; the ratio is a number.
    Scalar(f64),
    /// General case: the image tensor `t^a_β ψ` and its normalized
    /// expectation `⟨ψ|t^a_β|ψ⟩ / ⟨ψ|ψ⟩`, which is what the drift consumes.
    Linear {
        image: DVector<Complex64>,
        expectation: f64,
    },
}

impl InsertionRatio {
    /// Real number entering the drift.
    pub fn value(&self) -> f64 {
        match self {
            InsertionRatio::Scalar(v) => *v,
            InsertionRatio::Linear { expectation, .. } => *expectation,
        }
    }
}

/// `(t^a_{λ_β} ψ) / ψ` for generator `a` (0-based, 2 = Cartan) on field `beta`.
pub fn insert_generator(
    state: &InternalState,
    irreps: &[IrrepAction],
    a: usize,
    beta: usize,
) -> Result<InsertionRatio> {
    if irreps.len() != state.arity() {
        return Err(Error::domain(format!(
            "{} representations supplied for {} boundary fields",
            irreps.len(),
            state.arity()
        )));
    }
    for (i, (irrep, &j)) in irreps.iter().zip(state.twice_spins()).enumerate() {
        if irrep.twice_spin() != j {
            return Err(Error::domain(format!(
                "field {i} carries spin {j}/2 but representation has spin {}/2",
                irrep.twice_spin()
            )));
        }
    }
    if a > 2 {
        return Err(Error::domain(format!("generator index {a} out of range")));
    }
    let irrep = irreps
        .get(beta)
        .ok_or_else(|| Error::domain(format!("field index {beta} out of range")))?;
    let psi = state.amplitudes();
    let image = state.apply_on_site(irrep.generator(a), beta)?;
    let norm2 = psi.norm_squared();
    let overlap = psi.dotc(&image) / norm2;
    let residual = (&image - psi * overlap).norm();
    if residual <= 1e-12 * (image.norm() + psi.norm()) {
        Ok(InsertionRatio::Scalar(overlap.re))
    } else {
        Ok(InsertionRatio::Linear {
            image,
            expectation: overlap.re,
        })
    }
}
