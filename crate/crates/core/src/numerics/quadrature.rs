//! Gauss–Jacobi rules via the Golub–Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{Error, Result};

/// Nodes and weights for `∫_{−1}^{1} (1−t)^α (1+t)^β f(t) dt ≈ Σ w_i f(t_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    alpha: f64,
    beta: f64,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Apply the rule on `[−1, 1]`; the Jacobi weight is implicit.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// `∫_a^b (b−y)^α (y−a)^β f(y) dy`.
    pub fn integrate_interval<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let scale = half.powf(self.alpha + self.beta + 1.0);
        scale * self.integrate(|t| f(a + half * (t + 1.0)))
    }
}

/// `m`-point Gauss–Jacobi rule for the weight `(1−t)^α (1+t)^β`.
pub fn gauss_jacobi(alpha: f64, beta: f64, m: usize) -> Result<QuadratureRule> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::domain(format!(
            "Gauss-Jacobi needs alpha, beta > -1 (got {alpha}, {beta})"
        )));
    }
    if m == 0 {
        return Err(Error::domain("Gauss-Jacobi needs at least one node"));
    }
    let ab = alpha + beta;
    // Jacobi matrix of the monic three-term recurrence
    let diag = |n: usize| -> f64 {
        if n == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            let s = 2.0 * n as f64 + ab;
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        }
    };
    let offdiag = |n: usize| -> f64 {
        // coupling between rows n−1 and n, n ≥ 1
        if n == 1 {
            (4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0).powi(2) * (ab + 3.0))).sqrt()
        } else {
            let nf = n as f64;
            let s = 2.0 * nf + ab;
            (4.0 * nf * (nf + alpha) * (nf + beta) * (nf + ab) / (s * s * (s + 1.0) * (s - 1.0)))
                .sqrt()
        }
    };
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for n in 0..m {
        jac[(n, n)] = diag(n);
        if n >= 1 {
            let b = offdiag(n);
            jac[(n, n - 1)] = b;
            jac[(n - 1, n)] = b;
        }
    }
    let mu0 = 2f64.powf(ab + 1.0) * libm::tgamma(alpha + 1.0) * libm::tgamma(beta + 1.0)
        / libm::tgamma(ab + 2.0);
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    if pairs.windows(2).any(|w| w[1].0 <= w[0].0) || pairs.iter().any(|p| p.1 <= 0.0) {
        return Err(Error::numeric(format!(
            "Gauss-Jacobi({alpha}, {beta}, {m}) produced degenerate nodes"
        )));
    }
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(QuadratureRule {
        nodes,
        weights,
        alpha,
        beta,
    })
}

/// Gauss–Legendre rule, the `α = β = 0` member of the Jacobi family.
pub fn gauss_legendre(m: usize) -> Result<QuadratureRule> {
    gauss_jacobi(0.0, 0.0, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    /// `∫ (1−t)^α (1+t)^β t^k dt` from the integration-by-parts recurrence
    /// `(α+β+2+k) M_{k+1} = (β−α) M_k + k M_{k−1}`.
    fn jacobi_moment(alpha: f64, beta: f64, k: u32) -> f64 {
        let m0 = 2f64.powf(alpha + beta + 1.0)
            * (libm::lgamma(alpha + 1.0) + libm::lgamma(beta + 1.0)
                - libm::lgamma(alpha + beta + 2.0))
            .exp();
        let (mut prev, mut cur) = (0.0, m0);
        for j in 0..k {
            let jf = j as f64;
            let next = ((beta - alpha) * cur + jf * prev) / (alpha + beta + 2.0 + jf);
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn legendre_examples() {
        let rule = gauss_legendre(5).unwrap();
        assert_relative_eq!(rule.integrate(|_| 1.0), 2.0, max_relative = 1e-14);
        let two = gauss_legendre(2).unwrap();
        assert_relative_eq!(two.integrate(|t| t * t), 2.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn chebyshev_weight_integrates_to_pi() {
        for m in [1, 3, 10] {
            let rule = gauss_jacobi(-0.5, -0.5, m).unwrap();
            assert_relative_eq!(rule.integrate(|_| 1.0), PI, max_relative = 1e-13);
        }
    }

    #[test]
    fn moments_are_exact_up_to_degree_2m_minus_1() {
        let params = [(0.0, 0.0), (-0.5, -0.5), (0.5, -1.0 / 3.0), (-0.9, 2.0), (1.5, 0.25)];
        for &(alpha, beta) in &params {
            for m in [1usize, 2, 5, 12] {
                let rule = gauss_jacobi(alpha, beta, m).unwrap();
                assert_eq!(rule.len(), m);
                assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
                assert!(rule.nodes().iter().all(|t| t.abs() < 1.0));
                for k in 0..(2 * m as u32) {
                    let want = jacobi_moment(alpha, beta, k);
                    let got = rule.integrate(|t| t.powi(k as i32));
                    let scale = jacobi_moment(alpha, beta, 0);
                    assert!(
                        (got - want).abs() <= 1e-10 * want.abs().max(1e-3 * scale),
                        "alpha={alpha} beta={beta} m={m} k={k}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn endpoint_singularity_on_interval() {
        // ∫_0^1 y^{-1/2} dy = 2 with the singular endpoint at y = a
        let rule = gauss_jacobi(0.0, -0.5, 4).unwrap();
        assert_relative_eq!(rule.integrate_interval(0.0, 1.0, |_| 1.0), 2.0, max_relative = 1e-13);
    }

    #[test]
    fn invalid_exponents() {
        assert!(gauss_jacobi(-1.0, 0.0, 3).is_err());
        assert!(gauss_jacobi(0.0, -1.5, 3).is_err());
        assert!(gauss_jacobi(0.0, 0.0, 0).is_err());
    }
}
