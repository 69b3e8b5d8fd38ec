//! Polyanalytic series `Σ_k z̄ᵏf_k(z)`, the polyanalytic Fock kernels, and
//! checks that `u = z̄f + u₀` solves `∂̄u = f`.
//!
//! Two integral conventions appear here. `M(f) = ∫|f|²e^{−|z|²}dλ` and the
//! membership budget `∫|u₀|²(1+|z|²)^{−2}e^{−|z|²}dλ ≤ 3M(f)` carry no `1/π`,
//! while the norm of [`HormanderFock`] does; [`Convention`] makes the factor
//! explicit.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hfock::{EntireSeries, HormanderFock};
use crate::numerics::gamma::ln_factorials;
use crate::numerics::wirtinger_dbar_fd;
use crate::scalar::{from_usize, lit, to_f64, Real};

pub const MAX_KERNEL_ORDER: usize = 20;
pub const MAX_SAMPLE_RADIUS: f64 = 3.0;
/// Residual budget for numeric `∂̄` checks at the default step.
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const HFP_FACTOR: f64 = 3.0;

/// `f(z) = Σ_k z̄ᵏ·components[k](z)`, of order `components.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyanalyticSeries<T> {
    pub components: Vec<EntireSeries<T>>,
}

impl<T: Real> PolyanalyticSeries<T> {
    pub fn new(components: Vec<EntireSeries<T>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::config("a polyanalytic series has order >= 1"));
        }
        Ok(PolyanalyticSeries { components })
    }

    /// From a grid `grid[k][j] = a_{k,j}`.
    pub fn from_grid(grid: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let comps = grid
            .into_iter()
            .enumerate()
            .map(|(k, row)| EntireSeries::new(row, format!("f_{k}")))
            .collect::<Result<_>>()?;
        Self::new(comps)
    }

    pub fn order(&self) -> usize {
        self.components.len()
    }

    /// `a_{k,j}`, zero outside the stored support.
    pub fn coeff(&self, k: usize, j: usize) -> Complex<T> {
        self.components
            .get(k)
            .map(|c| c.coeff(j))
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// Horner in `z` per component, then Horner in `z̄` across components.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let zb = z.conj();
        self.components
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, f| acc * zb + f.eval(z))
    }

    /// `∂̄` applied term by term: `Σ_{k≥1} k·z̄^{k−1}f_k`.
    pub fn dbar(&self) -> PolyanalyticSeries<T> {
        if self.order() == 1 {
            return PolyanalyticSeries {
                components: vec![EntireSeries::zero()],
            };
        }
        let components = self.components[1..]
            .iter()
            .enumerate()
            .map(|(k, f)| f.scale(Complex::new(from_usize(k + 1), T::zero())))
            .collect();
        PolyanalyticSeries { components }
    }
}

pub fn eval_poly<T: Real>(f: &PolyanalyticSeries<T>, z: Complex<T>) -> Complex<T> {
    f.eval(z)
}

fn binomial<T: Real>(n: usize, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * from_usize(n - i) / from_usize(i + 1))
}

/// `Fₙ(z,w) = e^{zw̄}Σ_{k<n}((−1)ᵏ/k!)·C(n,k+1)·|z−w|^{2k}`.
pub fn fock_poly_kernel<T: Real>(n: usize, z: Complex<T>, w: Complex<T>) -> Result<Complex<T>> {
    if n == 0 || n > MAX_KERNEL_ORDER {
        return Err(Error::config(format!("polyanalytic Fock kernel order must be 1..={MAX_KERNEL_ORDER}")));
    }
    let d = (z - w).norm_sqr();
    let mut sum = T::zero();
    let mut p = T::one();
    for k in 0..n {
        if k > 0 {
            p = -p * d / from_usize(k);
        }
        sum += p * binomial::<T>(n, k + 1);
    }
    Ok((z * w.conj()).exp().scale(sum))
}

/// `u = z̄f + u₀`.
pub fn assemble_solution<T: Real>(f: &EntireSeries<T>, u0: &EntireSeries<T>) -> PolyanalyticSeries<T> {
    let mut u0 = u0.clone();
    u0.label = "u0".into();
    let mut f = f.clone();
    f.label = "f".into();
    PolyanalyticSeries {
        components: vec![u0, f],
    }
}

/// `F_w(z) = e^{zw̄}` truncated at degree `deg`.
pub fn fock_datum<T: Real>(w: Complex<T>, deg: usize) -> Result<EntireSeries<T>> {
    let wb = w.conj();
    let mut c = Complex::new(T::one(), T::zero());
    let mut coeffs = Vec::with_capacity(deg + 1);
    for j in 0..=deg {
        if j > 0 {
            c = (c * wb).unscale(from_usize(j));
        }
        coeffs.push(c);
    }
    EntireSeries::new(coeffs, "F_w")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DbarReport {
    pub samples: usize,
    pub h: f64,
    pub tolerance: f64,
    /// `|∂̄u(z) − f(z)|` per sample, by central differences.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Largest coefficient of `∂̄u − f` computed term by term.
    pub symbolic_residual: f64,
    pub passed: bool,
}

/// Numeric and term-by-term residual of `∂̄u = f`.
pub fn dbar_residual<T: Real>(
    u: &PolyanalyticSeries<T>,
    f: &EntireSeries<T>,
    z_samples: &[Complex<T>],
    h: T,
    tol: T,
) -> Result<DbarReport> {
    if z_samples.is_empty() {
        return Err(Error::config("no sample points"));
    }
    if z_samples.iter().any(|z| z.norm() > lit(MAX_SAMPLE_RADIUS)) {
        return Err(Error::domain(format!("samples must satisfy |z| <= {MAX_SAMPLE_RADIUS}")));
    }
    if !(h > T::zero()) {
        return Err(Error::config("step must be positive"));
    }
    let residuals: Vec<f64> = z_samples
        .iter()
        .map(|&z| to_f64((wirtinger_dbar_fd(|p| u.eval(p), z, h) - f.eval(z)).norm()))
        .collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);

    let du = u.dbar();
    let mut symbolic = T::zero();
    for k in 0..du.order() {
        let len = du.components[k].coeffs.len().max(if k == 0 { f.coeffs.len() } else { 0 });
        for j in 0..len {
            let want = if k == 0 { f.coeff(j) } else { Complex::new(T::zero(), T::zero()) };
            symbolic = symbolic.max((du.coeff(k, j) - want).norm());
        }
    }
    Ok(DbarReport {
        samples: z_samples.len(),
        h: to_f64(h),
        tolerance: to_f64(tol),
        residuals,
        max_residual,
        symbolic_residual: to_f64(symbolic),
        passed: max_residual <= to_f64(tol),
    })
}

/// Whether integrals over the plane carry the `1/π` prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Normalized,
    Unnormalized,
}

impl Convention {
    fn log_factor<T: Real>(self) -> T {
        match self {
            Convention::Normalized => T::zero(),
            Convention::Unnormalized => T::PI().ln(),
        }
    }
}

/// `log M(f)` with `M(f) = c·Σ n!|aₙ|²`, `c = π` unnormalized; `−∞` for `f = 0`.
pub fn log_weight_m<T: Real>(f: &EntireSeries<T>, conv: Convention) -> T {
    let lf = ln_factorials::<T>(f.degree());
    let logs: Vec<T> = f
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > T::zero())
        .map(|(n, a)| lf[n] + lit::<T>(2.0) * a.norm().ln())
        .collect();
    let Some(top) = logs.iter().copied().reduce(T::max) else {
        return T::neg_infinity();
    };
    let s: T = logs.iter().map(|&l| (l - top).exp()).fold(T::zero(), |a, b| a + b);
    top + s.ln() + conv.log_factor()
}

/// `M(f)`; an overflow error carries the log value when it is not representable.
pub fn weight_m<T: Real>(f: &EntireSeries<T>, conv: Convention) -> Result<T> {
    let l = log_weight_m(f, conv);
    let v = l.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow {
            message: "M(f) exceeds the floating-point range".into(),
            log_value: to_f64(l),
        })
    }
}

/// Bound on `Σ_{n>N}|w|^{2n}/n!`, the part of `M(F_w) = e^{|w|²}` (normalized)
/// lost by truncating `F_w` at degree `N`.
pub fn fock_datum_weight_tail<T: Real>(w: Complex<T>, deg: usize) -> T {
    let r2 = w.norm_sqr();
    let m = from_usize::<T>(deg + 1);
    let lf = ln_factorials::<T>(deg + 1);
    let first = if r2 == T::zero() { T::zero() } else { (m * r2.ln() - lf[deg + 1]).exp() };
    let q = r2 / (m + T::one());
    if q < T::one() {
        first / (T::one() - q)
    } else {
        T::infinity()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HfpReport {
    /// `∫|u₀|²(1+|z|²)^{−2}e^{−|z|²}dλ = π·Σηₙ|uₙ|²`.
    pub lhs: f64,
    /// `M(f)`, unnormalized.
    pub m_f: f64,
    /// `lhs / (3M(f))`.
    pub ratio: f64,
    pub member: bool,
}

/// Tests `∫|u₀|²(1+|z|²)^{−2}e^{−|z|²}dλ ≤ 3M(f)`.
pub fn hfp_membership_check<T: Real>(
    space: &HormanderFock<T>,
    u0: &EntireSeries<T>,
    f: &EntireSeries<T>,
) -> Result<HfpReport> {
    let h = space.h_norm(u0)?;
    let lhs = T::PI() * h * h;
    let m_f = weight_m(f, Convention::Unnormalized)?;
    let budget = lit::<T>(HFP_FACTOR) * m_f;
    let ratio = if budget > T::zero() {
        lhs / budget
    } else if lhs == T::zero() {
        T::zero()
    } else {
        T::infinity()
    };
    Ok(HfpReport {
        lhs: to_f64(lhs),
        m_f: to_f64(m_f),
        ratio: to_f64(ratio),
        member: lhs <= budget,
    })
}

/// A `∂̄` problem as read from JSON: coefficient lists as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbarProblem {
    pub f: Vec<[f64; 2]>,
    #[serde(default)]
    pub u0: Vec<[f64; 2]>,
    pub samples: Vec<[f64; 2]>,
    #[serde(default = "default_step")]
    pub h: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_step() -> f64 {
    crate::numerics::DEFAULT_STEP
}

fn default_tol() -> f64 {
    RESIDUAL_TOL
}

fn to_complex(v: &[[f64; 2]]) -> Vec<Complex<f64>> {
    v.iter().map(|p| Complex::new(p[0], p[1])).collect()
}

impl DbarProblem {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Assembles `u = z̄f + u₀` and reports its residual.
    pub fn check(&self) -> Result<DbarReport> {
        let f = EntireSeries::new(to_complex(&self.f), "f")?;
        let u0 = EntireSeries::new(to_complex(&self.u0), "u0")?;
        let u = assemble_solution(&f, &u0);
        dbar_residual(&u, &f, &to_complex(&self.samples), self.h, self.tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::Golden;
    use crate::hfock::GramMatrix;
    use crate::sampling::{disk_points, rng};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn series(v: &[(f64, f64)]) -> EntireSeries<f64> {
        EntireSeries::new(v.iter().map(|&(a, b)| c(a, b)).collect(), "").unwrap()
    }

    #[test]
    fn evaluation() {
        let zbar = PolyanalyticSeries::from_grid(vec![vec![], vec![c(1.0, 0.0)]]).unwrap();
        assert_eq!(zbar.eval(c(1.0, 2.0)), c(1.0, -2.0));
        let zzbar = PolyanalyticSeries::from_grid(vec![vec![], vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert!((zzbar.eval(c(0.0, 2.0)) - c(4.0, 0.0)).norm() < 1e-15);

        let mut r = rng(3);
        let grid: Vec<Vec<Complex<f64>>> = (0..2).map(|_| disk_points(&mut r, 7, 1.0)).collect();
        let f = PolyanalyticSeries::from_grid(grid.clone()).unwrap();
        let z = c(0.3, 0.4);
        let mut direct = c(0.0, 0.0);
        for (k, row) in grid.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                direct += z.conj().powu(k as u32) * z.powu(j as u32) * a;
            }
        }
        assert!((eval_poly(&f, z) - direct).norm() < 1e-13);
        assert!(PolyanalyticSeries::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn kernel_values() {
        let z = c(0.4, -0.3);
        let w = c(-0.2, 0.9);
        let f1 = fock_poly_kernel(1, z, w).unwrap();
        assert!((f1 - (z * w.conj()).exp()).norm() <= 1e-14 * f1.norm());
        let f2 = fock_poly_kernel(2, z, z).unwrap();
        assert!((f2.re - 2.0 * z.norm_sqr().exp()).abs() < 1e-14);
        let w = z + Complex::from_polar(2f64.sqrt(), 0.7);
        assert!(fock_poly_kernel(2, z, w).unwrap().norm() < 1e-14);
        assert!(fock_poly_kernel(21, z, w).is_err());
        assert!(fock_poly_kernel(0, z, w).is_err());
    }

    #[test]
    fn kernel_gram_is_psd() {
        let pts = disk_points(&mut rng(11), 20, 2.0);
        for n in 1..=3 {
            let g = GramMatrix::build(&pts, |z, w| fock_poly_kernel(n, z, w)).unwrap();
            assert!(g.is_psd(), "n={n} min_eig={}", g.min_eig);
        }
    }

    #[test]
    fn assembly() {
        let u = assemble_solution(&series(&[(1.0, 0.0)]), &EntireSeries::zero());
        assert_eq!(u.order(), 2);
        assert_eq!(u.eval(c(0.5, 0.25)), c(0.5, -0.25));
        let u = assemble_solution(&series(&[(0.0, 0.0), (1.0, 0.0)]), &series(&[(1.0, 0.0), (1.0, 0.0)]));
        assert_eq!(u.coeff(0, 0), c(1.0, 0.0));
        assert_eq!(u.coeff(0, 1), c(1.0, 0.0));
        assert_eq!(u.coeff(1, 1), c(1.0, 0.0));
        assert_eq!(u.coeff(1, 0), c(0.0, 0.0));
        let w = c(0.5, 0.5);
        let fw = fock_datum(w, 20).unwrap();
        let u = assemble_solution(&fw, &EntireSeries::zero());
        assert!((u.coeff(1, 3) - w.conj().powu(3) / 6.0).norm() < 1e-16);
    }

    #[test]
    fn residuals() {
        let samples = disk_points(&mut rng(5), 10, 2.0);
        let one = series(&[(1.0, 0.0)]);
        let zbar = assemble_solution(&one, &EntireSeries::zero());
        let r = dbar_residual(&zbar, &one, &samples, 1e-5, 1e-9).unwrap();
        assert!(r.passed && r.symbolic_residual == 0.0);

        let w = c(0.5, 0.0);
        let fw = fock_datum(w, 30).unwrap();
        let u = assemble_solution(&fw, &series(&[(0.3, -0.1), (0.0, 2.0)]));
        let r = dbar_residual(&u, &fw, &samples, 1e-5, RESIDUAL_TOL).unwrap();
        assert!(r.passed && r.symbolic_residual == 0.0, "{r:?}");

        // ∂̄z̄² = 2z̄ ≠ 1
        let zbar2 = PolyanalyticSeries::from_grid(vec![vec![], vec![], vec![c(1.0, 0.0)]]).unwrap();
        let r = dbar_residual(&zbar2, &one, &samples, 1e-5, RESIDUAL_TOL).unwrap();
        assert!(!r.passed && r.symbolic_residual > 0.5);
        assert!(dbar_residual(&zbar, &one, &[c(3.5, 0.0)], 1e-5, 1e-6).is_err());
    }

    #[test]
    fn weights() {
        let pi = std::f64::consts::PI;
        let one = series(&[(1.0, 0.0)]);
        assert!((weight_m(&one, Convention::Unnormalized).unwrap() - pi).abs() < 1e-15);
        assert_eq!(weight_m(&one, Convention::Normalized).unwrap(), 1.0);
        let z = series(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!((weight_m(&z, Convention::Unnormalized).unwrap() - pi).abs() < 1e-15);
        let fw = fock_datum(c(1.0, 0.0), 30).unwrap();
        let m = weight_m(&fw, Convention::Normalized).unwrap();
        assert!((m - std::f64::consts::E).abs() < 1e-10);
        assert!(fock_datum_weight_tail(c(1.0, 0.0), 30) < 1e-30);
        assert!(log_weight_m(&EntireSeries::<f64>::zero(), Convention::Normalized).is_infinite());
        // z^200 has M = 200!, beyond binary64
        let big = EntireSeries::monomial(200, c(1.0, 0.0)).unwrap();
        match weight_m(&big, Convention::Normalized) {
            Err(Error::Overflow { log_value, .. }) => assert!((log_value - 863.231_987_192_3).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn membership() {
        let g = Golden::bundled();
        let space = HormanderFock::<f64>::with_table_size(200).unwrap();
        let one = series(&[(1.0, 0.0)]);
        let r = hfp_membership_check(&space, &EntireSeries::zero(), &one).unwrap();
        assert!(r.member && r.lhs == 0.0);
        let r = hfp_membership_check(&space, &one, &one).unwrap();
        assert!(r.member);
        assert!((r.lhs - std::f64::consts::PI * g.value("eta_0")).abs() < 1e-13);
        // scale u₀ so the left side is 3.1·M(f)
        let s = (3.1 / g.value("eta_0")).sqrt();
        let r = hfp_membership_check(&space, &series(&[(s, 0.0)]), &one).unwrap();
        assert!(!r.member && (r.ratio - 3.1 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn problem_file() {
        let p = DbarProblem::from_json(r#"{"f": [[1, 0], [0, 1]], "u0": [[0.5, 0]], "samples": [[0.1, 0.2], [-1, 1]]}"#)
            .unwrap();
        let r = p.check().unwrap();
        assert_eq!(r.samples, 2);
        assert!(r.passed);
        assert!(DbarProblem::from_json("{\"f\": 3}").is_err());
    }

    proptest! {
        #[test]
        fn assembled_solutions_solve_dbar(seed in 0u64..1000, df in 0usize..7, du in 0usize..7) {
            let mut r = rng(seed);
            let f = EntireSeries::new(disk_points(&mut r, df + 1, 1.0), "f").unwrap();
            let u0 = EntireSeries::new(disk_points(&mut r, du + 1, 1.0), "u0").unwrap();
            let samples = disk_points(&mut r, 10, 2.0);
            let u = assemble_solution(&f, &u0);
            let rep = dbar_residual(&u, &f, &samples, 1e-5, RESIDUAL_TOL).unwrap();
            prop_assert!(rep.passed, "{:?}", rep.max_residual);

            // perturbing one analytic coefficient of the z̄ part breaks it
            let j = (seed as usize) % (df + 1);
            let mut bad = u.clone();
            bad.components[1].coeffs[j] += Complex::new(0.01, 0.0);
            let rep = dbar_residual(&bad, &f, &samples, 1e-5, RESIDUAL_TOL).unwrap();
            prop_assert!(!rep.passed && rep.symbolic_residual > 0.0);
        }
    }
}
