//! Gauss-Laguerre and Gauss-Hermite rules.
//!
//! Nodes are the eigenvalues of the Jacobi matrix of the weight. Weights come
//! from the Christoffel function `1 / sum_k p_k(x)^2` of the orthonormal
//! polynomials, accumulated with a running log-scale so that rules with
//! hundreds of nodes keep a finite `log_weights` entry even where the linear
//! weight underflows.

use num_complex::Complex;
use serde::Serialize;

use super::eigen::tridiagonal_eigenvalues;
use super::sum::{CompensatedComplexSum, CompensatedSum};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

pub const MAX_RULE_NODES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    /// Weight `e^{-t}` on `(0, ∞)`.
    Laguerre,
    /// Weight `e^{-x²}` on `ℝ`.
    Hermite,
    /// Nodes of an adaptive rule after the compactifying map.
    AdaptiveMap,
}

/// Nodes and weights; the weights already contain the weight function, so
/// `Σ wᵢ f(xᵢ)` approximates `∫ f ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub kind: QuadratureKind,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub log_weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wᵢ f(xᵢ)`.
    pub fn integrate(&self, mut f: impl FnMut(T) -> T) -> T {
        let mut acc = CompensatedSum::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(x));
        }
        acc.value()
    }

    pub fn integrate_complex(&self, mut f: impl FnMut(T) -> Complex<T>) -> Complex<T> {
        let mut acc = CompensatedComplexSum::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(f(x).scale(w));
        }
        acc.value()
    }

    /// `Σ exp(log wᵢ + g(xᵢ))` for integrands supplied as logarithms.
    pub fn integrate_log(&self, mut log_f: impl FnMut(T) -> T) -> T {
        let mut acc = CompensatedSum::new();
        for (&x, &lw) in self.nodes.iter().zip(&self.log_weights) {
            acc.add((lw + log_f(x)).exp());
        }
        acc.value()
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_RULE_NODES {
        return Err(Error::config(format!(
            "rule size {n} outside 1..={MAX_RULE_NODES}"
        )));
    }
    Ok(())
}

/// Jacobi-matrix recurrence coefficients of an orthonormal family.
struct Recurrence<T> {
    diag: Vec<T>,
    off: Vec<T>,
    log_mu0: T,
}

fn build_rule<T: Real>(kind: QuadratureKind, rec: Recurrence<T>) -> Result<QuadratureRule<T>> {
    let n = rec.diag.len();
    let nodes = tridiagonal_eigenvalues(&rec.diag, &rec.off)?;
    let rescale_at = lit::<T>(1e100);
    let mut log_weights = Vec::with_capacity(n);
    for &x in &nodes {
        // p_0 = 1 (the 1/sqrt(mu0) factor is folded into the final log)
        let mut prev = T::zero();
        let mut cur = T::one();
        let mut sum = T::one();
        let mut log_scale = T::zero();
        for k in 0..n.saturating_sub(1) {
            let b_prev = if k == 0 { T::zero() } else { rec.off[k - 1] };
            let next = ((x - rec.diag[k]) * cur - b_prev * prev) / rec.off[k];
            prev = cur;
            cur = next;
            sum += cur * cur;
            if cur.abs() > rescale_at {
                let f = cur.abs();
                prev /= f;
                cur /= f;
                sum = sum / (f * f);
                log_scale += f.ln();
            }
        }
        // w = mu0 / Σ (p_k sqrt(mu0))² with p_k unnormalized by mu0
        let two = lit::<T>(2.0);
        log_weights.push(rec.log_mu0 - sum.ln() - two * log_scale);
    }
    let weights = log_weights.iter().map(|lw| lw.exp()).collect();
    Ok(QuadratureRule {
        kind,
        nodes,
        weights,
        log_weights,
    })
}

/// n-point Gauss-Laguerre rule for the weight `e^{-t}` on `(0, ∞)`.
pub fn gauss_laguerre_rule<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    check_size(n)?;
    let diag = (0..n).map(|k| from_usize::<T>(2 * k + 1)).collect();
    let off = (1..n).map(from_usize::<T>).collect();
    build_rule(
        QuadratureKind::Laguerre,
        Recurrence {
            diag,
            off,
            log_mu0: T::zero(),
        },
    )
}

/// n-point Gauss-Hermite rule for the weight `e^{-x²}` on `ℝ`.
pub fn gauss_hermite_rule<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    check_size(n)?;
    let half = lit::<T>(0.5);
    let diag = vec![T::zero(); n];
    let off = (1..n).map(|k| (from_usize::<T>(k) * half).sqrt()).collect();
    let log_mu0 = T::PI().sqrt().ln();
    let mut rule = build_rule(
        QuadratureKind::Hermite,
        Recurrence { diag, off, log_mu0 },
    )?;
    // the spectrum is symmetric; pin the middle node of odd rules to zero
    if n % 2 == 1 {
        rule.nodes[n / 2] = T::zero();
    }
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(k: usize) -> f64 {
        (1..=k).map(|i| i as f64).product()
    }

    #[test]
    fn one_point_laguerre() {
        let r = gauss_laguerre_rule::<f64>(1).unwrap();
        assert!((r.nodes[0] - 1.0).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_laguerre_moments() {
        let r = gauss_laguerre_rule::<f64>(2).unwrap();
        for (k, want) in [(0, 1.0), (1, 1.0), (2, 2.0), (3, 6.0)] {
            let got = r.integrate(|x| x.powi(k));
            assert!((got - want).abs() < 1e-14, "k={k}: {got}");
        }
    }

    #[test]
    fn one_point_hermite() {
        let r = gauss_hermite_rule::<f64>(1).unwrap();
        assert_eq!(r.nodes[0], 0.0);
        assert!((r.weights[0] - std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn three_point_hermite_second_moment() {
        let r = gauss_hermite_rule::<f64>(3).unwrap();
        let m2 = r.integrate(|x| x * x);
        assert!((m2 - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn laguerre_reproduces_factorial_moments() {
        for n in 1..=20 {
            let r = gauss_laguerre_rule::<f64>(n).unwrap();
            for k in 0..2 * n {
                let got = r.integrate(|x| x.powi(k as i32));
                let want = factorial(k);
                assert!(((got - want) / want).abs() < 1e-12, "n={n} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn hermite_reproduces_gaussian_moments() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        for n in 1..=20 {
            let r = gauss_hermite_rule::<f64>(n).unwrap();
            for k in 0..2 * n {
                let got = r.integrate(|x| x.powi(k as i32));
                if k % 2 == 1 {
                    assert!(got.abs() < 1e-12 * factorial(k).max(1.0), "n={n} k={k}: {got}");
                } else {
                    // √π (k-1)!! / 2^{k/2}
                    let dfact: f64 = (1..k).step_by(2).map(|i| i as f64).product();
                    let want = sqrt_pi * dfact / 2f64.powi(k as i32 / 2);
                    assert!(((got - want) / want).abs() < 1e-12, "n={n} k={k}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn invariants_hold_up_to_max_size() {
        for n in [5, 64, 200, 512] {
            for r in [gauss_laguerre_rule::<f64>(n).unwrap(), gauss_hermite_rule::<f64>(n).unwrap()] {
                assert_eq!(r.len(), n);
                assert!(r.nodes.windows(2).all(|w| w[0] < w[1]), "n={n} nodes not increasing");
                assert!(r.log_weights.iter().all(|w| w.is_finite()), "n={n}");
                assert!(r.weights.iter().all(|&w| w >= 0.0));
                // the total mass is reproduced from the log weights
                let mass = r.integrate_log(|_| 0.0);
                let want = match r.kind {
                    QuadratureKind::Hermite => std::f64::consts::PI.sqrt(),
                    _ => 1.0,
                };
                assert!((mass - want).abs() < 1e-12, "n={n}: mass {mass}");
            }
        }
    }

    #[test]
    fn size_limits() {
        assert!(matches!(gauss_laguerre_rule::<f64>(0), Err(Error::Config(_))));
        assert!(matches!(gauss_hermite_rule::<f64>(513), Err(Error::Config(_))));
    }

    #[test]
    fn laguerre_64_gives_eta0() {
        let r = gauss_laguerre_rule::<f64>(64).unwrap();
        let v = r.integrate(|t| 1.0 / ((1.0 + t) * (1.0 + t)));
        assert!((v - 0.4036526376768059).abs() < 1e-6);
    }

    #[test]
    fn hermite_40_psi0_norm() {
        let r = gauss_hermite_rule::<f64>(40).unwrap();
        // ψ₀(x)² = e^{-x²}/√π; with the weight factored out the integrand is 1/√π
        let v = r.integrate(|_| 1.0 / std::f64::consts::PI.sqrt());
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_precision_rule() {
        let r = gauss_laguerre_rule::<f32>(8).unwrap();
        let m3 = r.integrate(|x| x * x * x);
        assert!((m3 - 6.0).abs() < 1e-4);
    }
}
