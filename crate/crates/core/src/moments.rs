//! The moment sequence `ηₙ = ∫₀^∞ tⁿe^{−t}(1+t)^{−2}dt` by three routes.
//!
//! * quadrature of the defining integral,
//! * the closed form `ηₙ = rₙΓ(n)` with `rₙ = e(1+n)Eₙ(1) − 1`, where `rₙ` is
//!   produced by the recurrence `r_{n+1} = 1/(n+1) − (n+2)rₙ/(n(n+1))`
//!   seeded at `r₁ = 2eE₁(1) − 1` (the direct form cancels, since
//!   `e(1+n)Eₙ(1) ∈ (1, 1+1/n]`),
//! * the alternating binomial sum `ηₙ = e Σₖ (−1)^{n−k} C(n,k) E_{2−k}(1)`.
//!
//! Linear values stop at `n = 170`; logarithms continue.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expint::{e1, e1_complex_scaled, en, en_family, incomplete_gamma_int};
use crate::numerics::gamma::ln_factorials;
use crate::numerics::{
    integrate_semi_infinite_complex, integrate_semi_infinite_scaled, CompensatedComplexSum,
    CompensatedSum, IntegralResult,
};
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Largest index with a finite binary64 `ηₙ`.
pub const MAX_LINEAR_INDEX: usize = 170;
/// Largest index accepted by the quadrature route.
pub const MAX_QUADRATURE_INDEX: usize = 400;
/// Largest index of the binomial route.
pub const MAX_BINOMIAL_INDEX: usize = 25;
/// Largest table size.
pub const MAX_TABLE_INDEX: usize = 10_000;
/// Entries up to this index are cross-checked by quadrature in [`eta_table`].
pub const QUADRATURE_CHECK_LIMIT: usize = 60;
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Quadrature,
    ClosedForm,
    Binomial,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Quadrature => "quadrature",
            Route::ClosedForm => "closed-form",
            Route::Binomial => "binomial",
        }
    }
}

fn eta_integrand<T: Real>(n: usize, shift: T) -> impl Fn(T) -> T {
    let nf = from_usize::<T>(n);
    move |t: T| {
        if t <= T::zero() {
            return if n == 0 { (-shift).exp() } else { T::zero() };
        }
        (nf * t.ln() - t - lit::<T>(2.0) * t.ln_1p() - shift).exp()
    }
}

/// Quadrature of `e^{−L}∫tⁿe^{−t}(1+t)^{−2}dt` for a shift `L` near `log ηₙ`.
fn eta_quadrature_shifted<T: Real>(n: usize, tol: T) -> Result<(T, IntegralResult<T>)> {
    if n > MAX_QUADRATURE_INDEX {
        return Err(Error::config(format!(
            "quadrature route supports n <= {MAX_QUADRATURE_INDEX}, got {n}"
        )));
    }
    let shift = if n > 100 { log_eta(n)? } else { T::zero() };
    let scale = from_usize::<T>(n.max(1));
    let r = integrate_semi_infinite_scaled(eta_integrand(n, shift), scale, tol)?;
    Ok((shift, r))
}

/// `ηₙ` by adaptive quadrature, with its error estimate.
pub fn eta_quadrature_result<T: Real>(n: usize, tol: T) -> Result<IntegralResult<T>> {
    let (shift, r) = eta_quadrature_shifted(n, tol)?;
    let f = shift.exp();
    let value = r.value * f;
    if !value.is_finite() {
        return Err(Error::Overflow {
            message: format!("eta_{n} exceeds the scalar range"),
            log_value: to_f64(shift + r.value.ln()),
        });
    }
    Ok(IntegralResult {
        value,
        abs_error_estimate: r.abs_error_estimate * f,
        nodes_used: r.nodes_used,
    })
}

/// `ηₙ` by adaptive quadrature of the defining integral.
pub fn eta_quadrature<T: Real>(n: usize, tol: T) -> Result<T> {
    eta_quadrature_result(n, tol).map(|r| r.value)
}

/// `log ηₙ` by quadrature; finite beyond the linear range.
pub fn log_eta_quadrature<T: Real>(n: usize, tol: T) -> Result<T> {
    let (shift, r) = eta_quadrature_shifted(n, tol)?;
    Ok(shift + r.value.ln())
}

/// `rₙ = e(1+n)Eₙ(1) − 1` for `n = 1..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSequence<T> {
    /// `r[k]` holds `r_{k+1}`.
    pub r: Vec<T>,
}

impl<T: Real> ResidualSequence<T> {
    pub fn new(n_max: usize) -> Result<Self> {
        let mut r = Vec::with_capacity(n_max);
        if n_max == 0 {
            return Ok(ResidualSequence { r });
        }
        let two = lit::<T>(2.0);
        let mut cur = two * T::E() * e1(T::one())? - T::one();
        r.push(cur);
        for n in 1..n_max {
            let nf = from_usize::<T>(n);
            let n1 = nf + T::one();
            cur = T::one() / n1 - (nf + two) * cur / (nf * n1);
            r.push(cur);
        }
        Ok(ResidualSequence { r })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// `rₙ` for `n ≥ 1`.
    pub fn get(&self, n: usize) -> Option<T> {
        n.checked_sub(1).and_then(|i| self.r.get(i).copied())
    }
}

/// `rₙ` evaluated directly as `e(1+n)Eₙ(1) − 1`; loses about `log₁₀ n` digits.
pub fn residual_direct<T: Real>(n: usize) -> Result<T> {
    Ok(T::E() * from_usize::<T>(n + 1) * en(n, T::one())? - T::one())
}

fn eta0<T: Real>() -> Result<T> {
    Ok(T::one() - T::E() * e1(T::one())?)
}

/// `Γ(n) = (n−1)!` as a running product, for `1 ≤ n ≤ 171`.
fn gamma_int<T: Real>(n: usize) -> T {
    (1..n).fold(T::one(), |acc, k| acc * from_usize::<T>(k))
}

/// `ηₙ` from the closed form; overflow error (with `log ηₙ`) for `n > 170`.
pub fn eta_closed_form<T: Real>(n: usize) -> Result<T> {
    if n == 0 {
        return eta0();
    }
    if n > MAX_LINEAR_INDEX {
        return Err(Error::Overflow {
            message: format!("eta_{n} exceeds binary64"),
            log_value: to_f64(log_eta::<T>(n)?),
        });
    }
    let seq = ResidualSequence::<T>::new(n)?;
    Ok(seq.r[n - 1] * gamma_int::<T>(n))
}

/// `log ηₙ` for `0 ≤ n ≤ 10⁴`.
pub fn log_eta<T: Real>(n: usize) -> Result<T> {
    if n > MAX_TABLE_INDEX {
        return Err(Error::config(format!("index {n} exceeds {MAX_TABLE_INDEX}")));
    }
    if n == 0 {
        return Ok(eta0::<T>()?.ln());
    }
    let seq = ResidualSequence::<T>::new(n)?;
    let lf = ln_factorials::<T>(n - 1);
    Ok(seq.r[n - 1].ln() + lf[n - 1])
}

/// `ηₙ` via the alternating binomial sum; capped at `n = 25` because the sum
/// cancels.
pub fn eta_binomial<T: Real>(n: usize) -> Result<T> {
    if n > MAX_BINOMIAL_INDEX {
        return Err(Error::PrecisionUnsupported(format!(
            "binomial route is limited to n <= {MAX_BINOMIAL_INDEX}, got {n}"
        )));
    }
    let one = T::one();
    let mut sum = CompensatedSum::new();
    let mut binom = T::one();
    for k in 0..=n {
        let e = match k {
            0 => en(2, one)?,
            1 => e1(one)?,
            _ => incomplete_gamma_int(k - 1, one)?,
        };
        let sign = if (n - k) % 2 == 0 { one } else { -one };
        sum.add(sign * binom * e);
        binom = binom * from_usize::<T>(n - k) / from_usize::<T>(k + 1);
    }
    Ok(T::E() * sum.value())
}

/// `η₀..η_{n_max}` with logarithms, per-entry error estimates and routes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentTable<T> {
    pub n_max: usize,
    /// `None` where the value overflows (`n > 170`).
    pub eta: Vec<Option<T>>,
    pub log_eta: Vec<T>,
    pub route: Vec<Route>,
    /// Route discrepancy where a cross-check ran, else a propagated bound;
    /// `None` alongside an overflowed value.
    pub abs_err: Vec<Option<T>>,
    /// Largest index that was cross-checked by quadrature, if any.
    pub quadrature_checked_to: Option<usize>,
}

impl<T: Real> MomentTable<T> {
    /// Closed-form entries only, with propagated rounding bounds.
    pub fn closed_form(n_max: usize) -> Result<Self> {
        if n_max > MAX_TABLE_INDEX {
            return Err(Error::config(format!("n_max {n_max} exceeds {MAX_TABLE_INDEX}")));
        }
        let seq = ResidualSequence::<T>::new(n_max)?;
        let lf = ln_factorials::<T>(n_max.max(1));
        let e0 = eta0::<T>()?;
        let eps = T::epsilon();
        let mut eta = Vec::with_capacity(n_max + 1);
        let mut log_eta = Vec::with_capacity(n_max + 1);
        let mut abs_err = Vec::with_capacity(n_max + 1);
        eta.push(Some(e0));
        log_eta.push(e0.ln());
        abs_err.push(Some(lit::<T>(4.0) * eps * e0));
        let mut gamma = T::one();
        for n in 1..=n_max {
            let r = seq.r[n - 1];
            if n > 1 {
                gamma *= from_usize::<T>(n - 1);
            }
            log_eta.push(r.ln() + lf[n - 1]);
            let v = r * gamma;
            if n <= MAX_LINEAR_INDEX && v.is_finite() {
                eta.push(Some(v));
                abs_err.push(Some(from_usize::<T>(8 + n) * eps * v));
            } else {
                eta.push(None);
                abs_err.push(None);
            }
        }
        Ok(MomentTable {
            n_max,
            eta,
            log_eta,
            route: vec![Route::ClosedForm; n_max + 1],
            abs_err,
            quadrature_checked_to: None,
        })
    }

    pub fn len(&self) -> usize {
        self.log_eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_eta.is_empty()
    }

    /// Linear `ηₙ`, or `None` past the table or the linear range.
    pub fn get(&self, n: usize) -> Option<T> {
        self.eta.get(n).copied().flatten()
    }

    pub fn log(&self, n: usize) -> Option<T> {
        self.log_eta.get(n).copied()
    }

    /// Bound checks of the moment sequence in log space.
    pub fn check_bounds(&self) -> BoundReport {
        let lf = ln_factorials::<T>(self.n_max.max(1));
        let ln2 = T::LN_2();
        let ln8 = lit::<T>(8.0).ln();
        let slack = lit::<T>(64.0) * T::epsilon();
        let mut violations = Vec::new();
        for (n, &le) in self.log_eta.iter().enumerate() {
            let nf = from_usize::<T>(n);
            let scale = T::one() + lf[n].abs();
            let lower = lf[n] - nf * ln2 - ln8;
            if le < lower - slack * scale {
                violations.push(BoundViolation::new(n, "lower", le, lower));
            }
            if le > lf[n] + slack * scale {
                violations.push(BoundViolation::new(n, "factorial", le, lf[n]));
            }
            if n >= 1 {
                let sharp = lf[n - 1] - nf.ln();
                if le > sharp + slack * scale {
                    violations.push(BoundViolation::new(n, "gamma-over-n", le, sharp));
                }
            }
            if n >= 3 && le <= self.log_eta[n - 1] {
                violations.push(BoundViolation::new(n, "monotone", le, self.log_eta[n - 1]));
            }
        }
        BoundReport {
            checked: self.log_eta.len(),
            violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundViolation {
    pub n: usize,
    pub bound: &'static str,
    pub log_eta: f64,
    pub log_bound: f64,
}

impl BoundViolation {
    fn new<T: Real>(n: usize, bound: &'static str, le: T, lb: T) -> Self {
        BoundViolation {
            n,
            bound,
            log_eta: to_f64(le),
            log_bound: to_f64(lb),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub checked: usize,
    pub violations: Vec<BoundViolation>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Closed-form table with a quadrature cross-check on `n ≤ min(n_max, 60)`.
pub fn eta_table<T: Real>(n_max: usize, tol: T) -> Result<MomentTable<T>> {
    if !(tol > T::zero()) {
        return Err(Error::config("tolerance must be positive"));
    }
    let mut table = MomentTable::closed_form(n_max)?;
    let limit = n_max.min(QUADRATURE_CHECK_LIMIT);
    for n in 0..=limit {
        let q = eta_quadrature_result(n, tol)?;
        let c = table.eta[n].expect("linear range");
        let gap = (q.value - c).abs();
        table.abs_err[n] = Some(gap.max(table.abs_err[n].unwrap_or(T::zero())));
    }
    table.quadrature_checked_to = Some(limit);
    Ok(table)
}

/// `Σ_{n=0}^{N} ηₙ/n!`; the terms are `ηₙ/n! = rₙ/n` for `n ≥ 1`, which
/// never leaves the representable range.
pub fn eta_factorial_sum<T: Real>(n: usize) -> Result<T> {
    Ok(eta_factorial_partial_sums::<T>(n)?[n])
}

/// All partial sums `S(0), …, S(N)` of [`eta_factorial_sum`].
pub fn eta_factorial_partial_sums<T: Real>(n: usize) -> Result<Vec<T>> {
    if n > MAX_TABLE_INDEX {
        return Err(Error::config(format!("N {n} exceeds {MAX_TABLE_INDEX}")));
    }
    let seq = ResidualSequence::<T>::new(n)?;
    let mut acc = CompensatedSum::new();
    acc.add(eta0::<T>()?);
    let mut out = Vec::with_capacity(n + 1);
    out.push(acc.value());
    for k in 1..=n {
        acc.add(seq.r[k - 1] / from_usize::<T>(k));
        out.push(acc.value());
    }
    Ok(out)
}

fn check_gf_domain<T: Real>(z: Complex<T>) -> Result<()> {
    if z.re > -T::one() && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "generating function needs Re z > -1, got {}{:+}i",
            to_f64(z.re),
            to_f64(z.im)
        )))
    }
}

/// Truncated series `Σ_{n=0}^{N} (−1)ⁿ(ηₙ/n!)zⁿ`.
///
/// The coefficients decay like `1/n²`, so the series converges only for
/// `|z| ≤ 1`; outside the disk the partial sums grow without bound and an
/// overflow error is returned once they leave the representable range.
pub fn generating_s<T: Real>(z: Complex<T>, n: usize) -> Result<Complex<T>> {
    check_gf_domain(z)?;
    if n > MAX_TABLE_INDEX {
        return Err(Error::config(format!("N {n} exceeds {MAX_TABLE_INDEX}")));
    }
    let seq = ResidualSequence::<T>::new(n)?;
    let mut acc = CompensatedComplexSum::new();
    acc.add(Complex::new(eta0::<T>()?, T::zero()));
    let mut p = Complex::new(T::one(), T::zero());
    for k in 1..=n {
        p = -p * z;
        acc.add(p.scale(seq.r[k - 1] / from_usize::<T>(k)));
    }
    let v = acc.value();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Overflow {
            message: format!(
                "partial sums of the generating series diverge at |z| = {} (radius of convergence 1)",
                to_f64(z.norm())
            ),
            log_value: to_f64(from_usize::<T>(n) * z.norm().ln()),
        });
    }
    Ok(v)
}

/// `1 − (z+1)e^{z+1}E₁(z+1)`.
pub fn gfs_rhs<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    check_gf_domain(z)?;
    let w = z + T::one();
    Ok(Complex::new(T::one(), T::zero()) - w * e1_complex_scaled(w)?)
}

/// `∫₀^∞ e^{−(1+z)t}(1+t)^{−2}dt`, the Laplace-transform form of the
/// generating function, valid on all of `Re z > −1`.
pub fn generating_s_laplace<T: Real>(z: Complex<T>, tol: T) -> Result<IntegralResult<T, Complex<T>>> {
    check_gf_domain(z)?;
    let w = z + T::one();
    let scale = (T::one() / w.re).max(lit(0.25)).min(lit(64.0));
    integrate_semi_infinite_complex(
        move |t: T| (-w.scale(t)).exp().unscale((T::one() + t) * (T::one() + t)),
        scale,
        tol,
    )
}

/// `(∫₁^∞ ((u−1)ⁿ/u)e^{−u}du, n!·E_{n+1}(1))`.
pub fn techlemma_check<T: Real>(n: usize, tol: T) -> Result<(T, T)> {
    if n > 60 {
        return Err(Error::config(format!("technical lemma check supports n <= 60, got {n}")));
    }
    let nf = from_usize::<T>(n);
    let lhs = integrate_semi_infinite_scaled(
        move |s: T| {
            if s <= T::zero() {
                return if n == 0 { (-T::one()).exp() } else { T::zero() };
            }
            (nf * s.ln() - s.ln_1p() - T::one() - s).exp()
        },
        from_usize::<T>(n.max(1)),
        tol,
    )?
    .value;
    let fam = en_family(n + 1, T::one())?;
    let rhs = gamma_int::<T>(n + 1) * fam[n + 1];
    Ok((lhs, rhs))
}
