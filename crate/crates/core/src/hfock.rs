//! The Hörmander-Fock space `H`: entire functions with
//! `‖g‖² = (1/π)∫|g|²(1+|z|²)^{−2}e^{−|z|²}dλ < ∞`.
//!
//! Monomials are orthogonal with `‖zⁿ‖² = ηₙ`, so a series `Σ aₙzⁿ` has
//! `‖g‖² = Σ ηₙ|aₙ|²`, the normalized monomials `zⁿ/√ηₙ` form an orthonormal
//! basis, and the reproducing kernel is `K(z,w) = 𝖤(z·w̄)` with
//! `𝖤(z) = Σ zⁿ/ηₙ`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{eta_quadrature, MomentTable, ResidualSequence};
use crate::numerics::gamma::ln_factorials;
use crate::numerics::{
    integrate_semi_infinite_complex_abs, min_eigenvalue_hermitian, CompensatedComplexSum,
    CompensatedSum, ComplexMatrix,
};
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Largest series degree accepted anywhere in the module.
pub const MAX_DEGREE: usize = 10_000;
/// Largest point set for a Gram matrix.
pub const MAX_GRAM_POINTS: usize = 200;
/// A Gram matrix is accepted as PSD when `min_eig ≥ −PSD_REL_TOL·trace`.
pub const PSD_REL_TOL: f64 = 1e-8;
/// Default moment table size of [`HormanderFock::new`].
pub const DEFAULT_TABLE_SIZE: usize = 4_000;

/// A finitely supported power series `Σ aₙzⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntireSeries<T> {
    pub coeffs: Vec<Complex<T>>,
    #[serde(default)]
    pub label: String,
}

impl<T: Real> EntireSeries<T> {
    pub fn new(coeffs: Vec<Complex<T>>, label: impl Into<String>) -> Result<Self> {
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::config(format!(
                "series degree {} exceeds {MAX_DEGREE}",
                coeffs.len() - 1
            )));
        }
        Ok(EntireSeries {
            coeffs,
            label: label.into(),
        })
    }

    pub fn from_real(coeffs: &[T], label: impl Into<String>) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect(), label)
    }

    /// `c·zⁿ`.
    pub fn monomial(n: usize, c: Complex<T>) -> Result<Self> {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); n + 1];
        coeffs[n] = c;
        Self::new(coeffs, format!("z^{n}"))
    }

    pub fn zero() -> Self {
        EntireSeries {
            coeffs: Vec::new(),
            label: "0".into(),
        }
    }

    /// Index of the last stored coefficient (0 for the empty series).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, n: usize) -> Complex<T> {
        self.coeffs.get(n).copied().unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &a| acc * z + a)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        EntireSeries {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
            label: self.label.clone(),
        }
    }
}

/// The space together with the moment data its computations need.
#[derive(Debug, Clone)]
pub struct HormanderFock<T> {
    table: MomentTable<T>,
    /// `ratio[n] = ηₙ/η_{n−1}` for `n ≥ 1`; `ratio[0] = η₀`.
    ratio: Vec<T>,
}

impl<T: Real> HormanderFock<T> {
    pub fn new() -> Result<Self> {
        Self::with_table_size(DEFAULT_TABLE_SIZE)
    }

    pub fn with_table_size(n_max: usize) -> Result<Self> {
        let n_max = n_max.max(1);
        let table = MomentTable::closed_form(n_max)?;
        let seq = ResidualSequence::<T>::new(n_max)?;
        let mut ratio = Vec::with_capacity(n_max + 1);
        let e0 = table.get(0).expect("eta_0 is finite");
        ratio.push(e0);
        ratio.push(seq.r[0] / e0);
        for n in 2..=n_max {
            // ηₙ/η_{n−1} = (n−1)·rₙ/r_{n−1}
            ratio.push(from_usize::<T>(n - 1) * seq.r[n - 1] / seq.r[n - 2]);
        }
        Ok(HormanderFock { table, ratio })
    }

    pub fn table(&self) -> &MomentTable<T> {
        &self.table
    }

    pub fn n_max(&self) -> usize {
        self.table.n_max
    }

    /// `ηₙ/η_{n−1}` for `1 ≤ n ≤ n_max` (and `η₀` at `n = 0`).
    pub fn eta_ratio(&self, n: usize) -> Option<T> {
        self.ratio.get(n).copied()
    }

    fn eta(&self, n: usize) -> Result<T> {
        self.table.get(n).ok_or_else(|| Error::Overflow {
            message: format!("eta_{n} outside the linear range of the table"),
            log_value: self.table.log(n).map(to_f64).unwrap_or(f64::NAN),
        })
    }

    /// Smallest `N` with `8(2r)^{N+1}/(N+1)!·e^{2r} < tol`, the certified tail
    /// bound that follows from `1/ηₙ ≤ 8·2ⁿ/n!`.
    pub fn truncation_index(&self, r: T, tol: T) -> Result<usize> {
        if !(tol > T::zero()) {
            return Err(Error::config("tolerance must be positive"));
        }
        let limit = self.n_max();
        let lf = ln_factorials::<T>(limit + 1);
        let ln8 = lit::<T>(8.0).ln();
        let two_r = r + r;
        let log_tol = tol.ln();
        if r == T::zero() {
            return Ok(0);
        }
        let l2r = two_r.ln();
        for n in 0..limit {
            let log_tail = ln8 + from_usize::<T>(n + 1) * l2r - lf[n + 1] + two_r;
            // beyond the peak of the bound, it decreases monotonically
            if from_usize::<T>(n + 1) > two_r && log_tail < log_tol {
                return Ok(n);
            }
        }
        Err(Error::config(format!(
            "|z| = {} needs more than {limit} series terms; enlarge the moment table",
            to_f64(r)
        )))
    }

    /// `𝖤(z) = Σ zⁿ/ηₙ` with a certified absolute tail below `tol`.
    pub fn eval_e(&self, z: Complex<T>, tol: T) -> Result<Complex<T>> {
        let n = self.truncation_index(z.norm(), tol)?;
        let mut term = Complex::new(T::one() / self.ratio[0], T::zero());
        let mut acc = CompensatedComplexSum::new();
        acc.add(term);
        for k in 1..=n {
            term = (term * z).unscale(self.ratio[k]);
            acc.add(term);
        }
        let v = acc.value();
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Overflow {
                message: format!("E(z) overflows at |z| = {}", to_f64(z.norm())),
                log_value: f64::NAN,
            });
        }
        Ok(v)
    }

    /// `K(z,w) = 𝖤(z·w̄)`; with `normalized` the kernel `η₀K` with value 1 at 0.
    pub fn kernel_k(&self, z: Complex<T>, w: Complex<T>, tol: T, normalized: bool) -> Result<Complex<T>> {
        let v = self.eval_e(z * w.conj(), tol)?;
        Ok(if normalized { v.scale(self.ratio[0]) } else { v })
    }

    /// Truncation of `K_w = 𝖤(·w̄)` to degree `deg`.
    pub fn kernel_series(&self, w: Complex<T>, deg: usize) -> Result<EntireSeries<T>> {
        let wc = w.conj();
        let mut coeffs = Vec::with_capacity(deg + 1);
        let mut term = Complex::new(T::one() / self.ratio[0], T::zero());
        coeffs.push(term);
        for k in 1..=deg {
            term = (term * wc).unscale(*self.ratio.get(k).ok_or_else(|| {
                Error::config(format!("kernel series degree {deg} exceeds the moment table"))
            })?);
            coeffs.push(term);
        }
        EntireSeries::new(coeffs, "K_w")
    }

    /// The orthonormal basis element `eₙ = zⁿ/√ηₙ`.
    pub fn basis(&self, n: usize) -> Result<EntireSeries<T>> {
        let e = self.eta(n)?;
        let mut s = EntireSeries::monomial(n, Complex::new(T::one() / e.sqrt(), T::zero()))?;
        s.label = format!("e_{n}");
        Ok(s)
    }

    fn check_degree(&self, f: &EntireSeries<T>) -> Result<()> {
        if f.degree() > self.n_max() {
            return Err(Error::config(format!(
                "series degree {} exceeds the moment table ({})",
                f.degree(),
                self.n_max()
            )));
        }
        Ok(())
    }

    /// `⟨f, g⟩ = Σ ηₙaₙconj(bₙ)`, switching to log-scaled accumulation when
    /// the terms leave the linear range.
    pub fn h_inner(&self, f: &EntireSeries<T>, g: &EntireSeries<T>) -> Result<Complex<T>> {
        self.check_degree(f)?;
        self.check_degree(g)?;
        let n = f.coeffs.len().min(g.coeffs.len());
        let mut acc = CompensatedComplexSum::new();
        let mut linear = true;
        for k in 0..n {
            let (a, b) = (f.coeffs[k], g.coeffs[k]);
            if a.norm() == T::zero() || b.norm() == T::zero() {
                continue;
            }
            let p = a * b.conj();
            if p.norm() == T::zero() {
                linear = false;
                break;
            }
            match self.table.get(k) {
                Some(e) if (p.scale(e)).norm().is_finite() => acc.add(p.scale(e)),
                _ => {
                    linear = false;
                    break;
                }
            }
        }
        if linear {
            return Ok(acc.value());
        }
        self.h_inner_log(f, g, n)
    }

    fn h_inner_log(&self, f: &EntireSeries<T>, g: &EntireSeries<T>, n: usize) -> Result<Complex<T>> {
        let mut logs = Vec::with_capacity(n);
        for k in 0..n {
            let (a, b) = (f.coeffs[k], g.coeffs[k]);
            if a.norm() == T::zero() || b.norm() == T::zero() {
                continue;
            }
            let l = self.table.log_eta[k] + a.norm().ln() + b.norm().ln();
            let phase = a.arg() - b.arg();
            logs.push((l, phase));
        }
        let m = logs.iter().fold(T::neg_infinity(), |m, &(l, _)| m.max(l));
        if logs.is_empty() {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        let mut acc = CompensatedComplexSum::new();
        for &(l, phase) in &logs {
            acc.add(Complex::from_polar((l - m).exp(), phase));
        }
        let v = acc.value().scale(m.exp());
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Overflow {
                message: "inner product exceeds the scalar range".into(),
                log_value: to_f64(m + acc.value().norm().ln()),
            });
        }
        Ok(v)
    }

    /// `‖f‖_H`.
    pub fn h_norm(&self, f: &EntireSeries<T>) -> Result<T> {
        Ok(self.h_inner(f, f)?.re.max(T::zero()).sqrt())
    }

    /// `‖f‖_F = (Σ n!|aₙ|²)^{1/2}`, the Fock-space norm.
    pub fn fock_norm(&self, f: &EntireSeries<T>) -> T {
        let lf = ln_factorials::<T>(f.degree());
        let logs: Vec<T> = f
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > T::zero())
            .map(|(k, a)| lf[k] + lit::<T>(2.0) * a.norm().ln())
            .collect();
        if logs.is_empty() {
            return T::zero();
        }
        let m = logs.iter().fold(T::neg_infinity(), |m, &l| m.max(l));
        let s: CompensatedSum<T> = logs.iter().map(|&l| (l - m).exp()).collect();
        (lit::<T>(0.5) * (m + s.value().ln())).exp()
    }

    /// Pairs `(⟨f, K_z⟩, f(z))`; the left side is the inner product with
    /// the truncated kernel series, the right side Horner evaluation.
    pub fn reproducing_check(&self, f: &EntireSeries<T>, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let kz = self.kernel_series(z, f.degree())?;
        Ok((self.h_inner(f, &kz)?, f.eval(z)))
    }

    /// `|f(z)| ≤ √𝖤(|z|²)·‖f‖_H`.
    pub fn pointwise_bound_check(&self, f: &EntireSeries<T>, z: Complex<T>) -> Result<PointwiseReport> {
        let value = f.eval(z).norm();
        let e = self.eval_e(Complex::new(z.norm_sqr(), T::zero()), lit(1e-12))?.re;
        let bound = e.sqrt() * self.h_norm(f)?;
        let slack = lit::<T>(1.0 + 1e-10);
        Ok(PointwiseReport {
            abs_value: to_f64(value),
            bound: to_f64(bound),
            ratio: to_f64(value / bound),
            holds: value <= bound * slack,
        })
    }

    /// Norm data of a finite series.
    pub fn membership(&self, f: &EntireSeries<T>) -> Result<Membership> {
        self.check_degree(f)?;
        let mut contributions = Vec::with_capacity(f.coeffs.len());
        for (k, a) in f.coeffs.iter().enumerate() {
            let c = (self.table.log_eta[k] + lit::<T>(2.0) * a.norm().ln()).exp();
            contributions.push(to_f64(c));
        }
        let h = self.h_norm(f)?;
        let fock = self.fock_norm(f);
        Ok(Membership {
            h_norm: to_f64(h),
            fock_norm: to_f64(fock),
            ratio: to_f64(h / fock),
            contributions,
        })
    }

    /// Classifies `Σ ηₙ|aₙ|²` for a coefficient rule given as `n ↦ log|aₙ|`
    /// from its first `terms` terms, fitting the log-terms over the last
    /// `window` indices.
    pub fn classify_stream(
        &self,
        mut log_abs_coeff: impl FnMut(usize) -> T,
        terms: usize,
        window: usize,
    ) -> Result<StreamReport> {
        if terms > self.n_max() || terms < 4 {
            return Err(Error::config(format!(
                "stream length {terms} must lie in 4..={}",
                self.n_max()
            )));
        }
        let window = window.clamp(3, terms);
        let mut log_terms = Vec::with_capacity(terms);
        let mut partial = Vec::with_capacity(terms);
        let mut acc = CompensatedSum::new();
        for k in 0..terms {
            let l = self.table.log_eta[k] + lit::<T>(2.0) * log_abs_coeff(k);
            log_terms.push(to_f64(l));
            acc.add(l.exp());
            partial.push(to_f64(acc.value()));
        }
        let start = terms - window;
        let xs: Vec<f64> = (start..terms).map(|k| k as f64).collect();
        let ys = &log_terms[start..];
        let geometric = slope(&xs, ys);
        let lnx: Vec<f64> = xs.iter().map(|x| (x + 1.0).ln()).collect();
        let power = slope(&lnx, ys);
        let class = if ys.iter().any(|y| *y == f64::INFINITY) || !partial[terms - 1].is_finite() {
            StreamClass::Divergent
        } else if ys.iter().all(|y| *y == f64::NEG_INFINITY) {
            StreamClass::Convergent
        } else if geometric < -1e-3 || power < -1.5 {
            StreamClass::Convergent
        } else if power > -1.0 + 1e-2 {
            StreamClass::Divergent
        } else {
            StreamClass::Inconclusive
        };
        Ok(StreamReport {
            terms,
            window,
            partial_sums: partial,
            geometric_slope: geometric,
            power_slope: power,
            class,
        })
    }

    /// Gram matrix `[K(zᵢ,zⱼ)]` with its PSD diagnostic.
    pub fn gram_k(&self, points: &[Complex<T>], tol: T, normalized: bool) -> Result<GramMatrix<T>> {
        GramMatrix::build(points, |z, w| self.kernel_k(z, w, tol, normalized))
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).filter(|(_, y)| y.is_finite()).map(|(&x, &y)| (x, y)).collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StreamClass {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StreamReport {
    pub terms: usize,
    pub window: usize,
    pub partial_sums: Vec<f64>,
    /// Slope of `log(ηₙ|aₙ|²)` against `n` over the window.
    pub geometric_slope: f64,
    /// Slope of `log(ηₙ|aₙ|²)` against `log n` over the window.
    pub power_slope: f64,
    pub class: StreamClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointwiseReport {
    pub abs_value: f64,
    pub bound: f64,
    pub ratio: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Membership {
    pub h_norm: f64,
    pub fock_norm: f64,
    /// `h_norm / fock_norm`, at most 1.
    pub ratio: f64,
    /// `ηₙ|aₙ|²` per coefficient.
    pub contributions: Vec<f64>,
}

/// Kernel matrix over a point set with its smallest eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T> {
    pub points: Vec<Complex<T>>,
    pub matrix: ComplexMatrix<T>,
    pub min_eig: T,
    pub trace: T,
}

impl<T: Real> GramMatrix<T> {
    /// Assembles `[k(zᵢ, zⱼ)]`, filling the lower triangle by conjugation.
    pub fn build(
        points: &[Complex<T>],
        mut kernel: impl FnMut(Complex<T>, Complex<T>) -> Result<Complex<T>>,
    ) -> Result<Self> {
        if points.is_empty() || points.len() > MAX_GRAM_POINTS {
            return Err(Error::config(format!(
                "Gram matrix needs 1..={MAX_GRAM_POINTS} points, got {}",
                points.len()
            )));
        }
        let n = points.len();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = kernel(points[i], points[j])?;
                if i == j {
                    m.set(i, i, Complex::new(v.re, T::zero()));
                } else {
                    m.set(i, j, v);
                    m.set(j, i, v.conj());
                }
            }
        }
        let min_eig = min_eigenvalue_hermitian(&m)?;
        let trace = m.trace().re;
        Ok(GramMatrix {
            points: points.to_vec(),
            matrix: m,
            min_eig,
            trace,
        })
    }

    /// `min_eig ≥ −10⁻⁸·trace`.
    pub fn is_psd(&self) -> bool {
        self.min_eig >= -lit::<T>(PSD_REL_TOL) * self.trace
    }
}

/// `Σ|aₙ|²ηₙ` with every `ηₙ` from a fresh quadrature of its defining
/// integral, independent of the moment table.
pub fn norm_sq_by_quadrature<T: Real>(f: &EntireSeries<T>, tol: T) -> Result<T> {
    if f.degree() > 50 {
        return Err(Error::config("quadrature norm supports degree <= 50"));
    }
    let mut acc = CompensatedSum::new();
    for (n, a) in f.coeffs.iter().enumerate() {
        let w = a.norm_sqr();
        if w > T::zero() {
            acc.add(w * eta_quadrature(n, tol)?);
        }
    }
    Ok(acc.value())
}

/// `⟨f, g⟩ = (1/π)∫ f·conj(g)(1+|z|²)^{−2}e^{−|z|²}dλ` by direct area
/// quadrature: the trapezoidal rule in the angle (exact for the trigonometric
/// polynomial that arises) and adaptive quadrature in `t = |z|²`. The
/// error target is `tol` relative to `‖f‖·‖g‖`, the natural scale of the
/// inner product.
pub fn h_inner_by_quadrature<T: Real>(f: &EntireSeries<T>, g: &EntireSeries<T>, tol: T) -> Result<Complex<T>> {
    if f.degree() > 50 || g.degree() > 50 {
        return Err(Error::config("area quadrature supports degree <= 50"));
    }
    let m = f.degree() + g.degree() + 2;
    let angles: Vec<Complex<T>> = (0..m)
        .map(|k| Complex::from_polar(T::one(), T::PI() * lit::<T>(2.0) * from_usize::<T>(k) / from_usize::<T>(m)))
        .collect();
    let mf = from_usize::<T>(m);
    let scale = from_usize::<T>(((f.degree() + g.degree()) / 2).max(1));
    let envelope = |s: &EntireSeries<T>| -> Result<T> {
        let mut acc = CompensatedSum::new();
        for (n, a) in s.coeffs.iter().enumerate() {
            if a.norm() > T::zero() {
                acc.add(a.norm_sqr() * crate::moments::eta_closed_form::<T>(n)?);
            }
        }
        Ok(acc.value().sqrt())
    };
    let abs_tol = tol * envelope(f)? * envelope(g)?;
    let r = integrate_semi_infinite_complex_abs(
        |t: T| {
            let rho = t.sqrt();
            let mut acc = CompensatedComplexSum::new();
            for &u in &angles {
                let z = u.scale(rho);
                acc.add(f.eval(z) * g.eval(z).conj());
            }
            // (1/2π)·(2π/m)·Σ = (1/m)·Σ
            let w = (-t).exp() / ((T::one() + t) * (T::one() + t));
            acc.value().scale(w / mf)
        },
        scale,
        tol,
        abs_tol,
    )?;
    Ok(r.value)
}
