//! Disk kernels `φₙ(z) = Σ zᵏ/(k+n)`, the Lerch transcendent and Hurwitz ζ,
//! and finite-difference evidence for complete monotonicity.

use num_complex::Complex;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::expint::laplace_en;
use crate::hfock::{GramMatrix, HormanderFock, MAX_GRAM_POINTS};
use crate::numerics::gamma::gamma;
use crate::numerics::{integrate_semi_infinite, integrate_semi_infinite_complex, CompensatedComplexSum, CompensatedSum};
use crate::report::{Check, Status};
use crate::sampling::{disk_points, rng};
use crate::scalar::{clog1p, from_usize, lit, to_f64, Real};

/// Series arguments must satisfy `|z| ≤ 1 − DISK_MARGIN`.
pub const DISK_MARGIN: f64 = 1e-6;
/// Gram points must satisfy `|z| ≤ 1 − GRAM_MARGIN`.
pub const GRAM_MARGIN: f64 = 1e-3;
pub const MAX_SERIES_TERMS: usize = 10_000_000;
pub const MAX_CM_ORDER: usize = 8;
pub const CM_TOL: f64 = -1e-10;
/// Real arguments at or left of this use the Laplace closed form.
pub const CLOSED_FORM_EDGE: f64 = -0.5;

fn check_disk<T: Real>(z: Complex<T>) -> Result<()> {
    if z.norm() <= T::one() - lit(DISK_MARGIN) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "|z| = {} is too close to the unit circle for the series; \
             for real z < 0 use the integral form phi_n(-a) = int e^(-at) E_n(t) dt",
            to_f64(z.norm())
        )))
    }
}

/// `Σ_k zᵏ c_k` with `|c_k| ≤ c_K` for `k ≥ K` decreasing, stopped when
/// `|z|^{K+1}c_{K+1}/(1−|z|) < tol`.
fn power_series<T: Real>(z: Complex<T>, tol: T, mut coeff: impl FnMut(usize) -> T) -> Result<Complex<T>> {
    let r = z.norm();
    let mut acc = CompensatedComplexSum::new();
    let mut zk = Complex::new(T::one(), T::zero());
    let mut rk = T::one();
    for k in 0..MAX_SERIES_TERMS {
        acc.add(zk.scale(coeff(k)));
        zk = zk * z;
        rk *= r;
        if rk * coeff(k + 1) < tol * (T::one() - r) {
            return Ok(acc.value());
        }
    }
    Err(Error::Accuracy {
        message: format!("series at |z| = {} not converged", to_f64(r)),
        best: to_f64(acc.value().re),
        error_estimate: to_f64(rk / (T::one() - r)),
    })
}

/// `φₙ(−a) = ∫₀^∞e^{−at}Eₙ(t)dt`, the continuation of `φₙ` to real
/// arguments `−a < 1`.
pub fn phi_at_negative<T: Real>(n: usize, a: T) -> Result<T> {
    if n == 0 {
        return Err(Error::config("phi_n needs n >= 1"));
    }
    laplace_en(n, a)
}

/// `φₙ(z) = Σ_{k≥0} zᵏ/(k+n)` on the disk; real `z ≤ −1/2` (including
/// `z ≤ −1`) go through the Laplace closed form.
pub fn phi<T: Real>(n: usize, z: Complex<T>, tol: T) -> Result<Complex<T>> {
    if n == 0 {
        return Err(Error::config("phi_n needs n >= 1"));
    }
    if z.im == T::zero() && z.re <= lit(CLOSED_FORM_EDGE) {
        return Ok(Complex::new(phi_at_negative(n, -z.re)?, T::zero()));
    }
    check_disk(z)?;
    let nf = from_usize::<T>(n);
    power_series(z, tol, |k| T::one() / (from_usize::<T>(k) + nf))
}

/// `φ̃ₙ = n·φₙ`, normalised to 1 at the origin.
pub fn phi_tilde<T: Real>(n: usize, z: Complex<T>, tol: T) -> Result<Complex<T>> {
    Ok(phi(n, z, tol)?.scale(from_usize(n)))
}

/// Taylor coefficients `c₀ … c_{p_max}` of `f` at 0 from the trapezoid rule
/// on the circle of the given radius.
pub fn cauchy_coefficients<T: Real>(
    mut f: impl FnMut(Complex<T>) -> Result<Complex<T>>,
    p_max: usize,
    radius: T,
    nodes: usize,
) -> Result<Vec<Complex<T>>> {
    if nodes <= 2 * p_max {
        return Err(Error::config("Cauchy coefficients need more nodes than 2*p_max"));
    }
    let h = T::TAU() / from_usize(nodes);
    let values: Vec<Complex<T>> = (0..nodes)
        .map(|j| f(Complex::from_polar(radius, h * from_usize(j))))
        .collect::<Result<_>>()?;
    Ok((0..=p_max)
        .map(|p| {
            let mut acc = CompensatedComplexSum::new();
            for (j, v) in values.iter().enumerate() {
                acc.add(*v * Complex::from_polar(T::one(), -h * from_usize(j * p)));
            }
            acc.value().unscale(from_usize::<T>(nodes) * radius.powi(p as i32))
        })
        .collect())
}

/// `Φ(z,s,a) = Σ zᵏ/(k+a)ˢ`.
pub fn lerch_phi<T: Real>(z: Complex<T>, s: T, a: T, tol: T) -> Result<Complex<T>> {
    if !(s > T::zero() && a > T::zero()) {
        return Err(Error::domain("Lerch transcendent needs s > 0 and a > 0"));
    }
    check_disk(z)?;
    power_series(z, tol, |k| (from_usize::<T>(k) + a).powf(-s))
}

/// `Φ(z,s,a) = Γ(s)⁻¹∫₀^∞ t^{s−1}e^{−at}/(1−ze^{−t})dt` by quadrature in
/// `t = u²`, which smooths the power at the origin. Needs `s ≥ 1`.
pub fn lerch_phi_integral<T: Real>(z: Complex<T>, s: T, a: T, tol: T) -> Result<Complex<T>> {
    if !(s >= T::one() && a > T::zero()) {
        return Err(Error::domain("integral route needs s >= 1 and a > 0"));
    }
    check_disk(z)?;
    let two = lit::<T>(2.0);
    let p = two * s - T::one();
    let r = integrate_semi_infinite_complex(
        move |u: T| {
            let t = u * u;
            let den = Complex::new(T::one(), T::zero()) - z.scale((-t).exp());
            Complex::new(two * u.powf(p) * (-a * t).exp(), T::zero()) / den
        },
        T::one() / a.sqrt(),
        tol,
    )?;
    Ok(r.value.unscale(gamma(s)))
}

/// `ζ(s,a) = Σ(k+a)^{−s}`: the first `K` terms plus the tail integral
/// `∫_K^∞(t+a)^{−s}dt` and half the next term. The remaining error is below
/// `(K+a)^{−s}/2`, and `K` is chosen to make that at most `tol`.
pub fn hurwitz_zeta<T: Real>(s: T, a: T, tol: T) -> Result<T> {
    if !(s > T::one() + lit(1e-6)) || !(a > T::zero()) {
        return Err(Error::domain("Hurwitz zeta needs s > 1 and a > 0"));
    }
    if !(tol > T::zero()) {
        return Err(Error::config("tolerance must be positive"));
    }
    let two = lit::<T>(2.0);
    let k_real = ((two * tol).powf(-T::one() / s) - a).ceil().max(T::one());
    if k_real > from_usize(MAX_SERIES_TERMS) {
        return Err(Error::Accuracy {
            message: format!("Hurwitz zeta at s = {} needs more than {MAX_SERIES_TERMS} terms", to_f64(s)),
            best: f64::NAN,
            error_estimate: to_f64(tol),
        });
    }
    let k_max = to_f64(k_real) as usize;
    let mut acc = CompensatedSum::new();
    for k in (0..k_max).rev() {
        acc.add((from_usize::<T>(k) + a).powf(-s));
    }
    let edge = from_usize::<T>(k_max) + a;
    acc.add(edge.powf(T::one() - s) / (s - T::one()));
    acc.add(edge.powf(-s) / two);
    Ok(acc.value())
}

/// `ζ(s,a) = Γ(s)⁻¹∫₀^∞ t^{s−1}e^{−at}/(1−e^{−t})dt`, again in `t = u²`.
pub fn hurwitz_zeta_integral<T: Real>(s: T, a: T, tol: T) -> Result<T> {
    if !(s > T::one() + lit(1e-6)) || !(a > T::zero()) {
        return Err(Error::domain("Hurwitz zeta needs s > 1 and a > 0"));
    }
    let two = lit::<T>(2.0);
    let p = two * s - lit(3.0);
    let r = integrate_semi_infinite(
        move |u: T| {
            if u == T::zero() {
                return if p == T::zero() { two } else { T::zero() };
            }
            let t = u * u;
            // u²/(1−e^{−u²}) → 1 at the origin
            two * u.powf(p) * (t / -(-t).exp_m1()) * (-a * t).exp()
        },
        tol,
    )?;
    Ok(r.value / gamma(s))
}

/// `(φ₁(zw̄), −log(1−zw̄)/(zw̄))`.
pub fn dirichlet_identity_check<T: Real>(z: Complex<T>, w: Complex<T>, tol: T) -> Result<(Complex<T>, Complex<T>)> {
    let u = z * w.conj();
    if u.norm() == T::zero() {
        let one = Complex::new(T::one(), T::zero());
        return Ok((phi(1, u, tol)?, one));
    }
    check_disk(u)?;
    let closed = -clog1p(-u) / u;
    Ok((phi(1, u, tol)?, closed))
}

/// One order of the finite-difference sign test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmRow {
    pub order: usize,
    /// Smallest `(−1)ʲΔʲf(aᵢ)` over the grid.
    pub min_signed: f64,
    /// `(i, (−1)ʲΔʲf(aᵢ))` wherever the value is below the tolerance.
    pub violations: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmReport {
    pub grid_start: f64,
    pub spacing: f64,
    pub points: usize,
    pub rows: Vec<CmRow>,
}

impl CmReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.violations.is_empty())
    }
}

/// Checks `(−1)ʲΔʲ_h f(a) ≥ −10⁻¹⁰` for `j = 0..=max_order` on a uniform
/// grid, a necessary condition for complete monotonicity.
pub fn cm_evidence_for<T: Real>(
    mut f: impl FnMut(T) -> Result<T>,
    a_grid: &[T],
    max_order: usize,
) -> Result<CmReport> {
    if max_order > MAX_CM_ORDER {
        return Err(Error::config(format!("difference order is capped at {MAX_CM_ORDER}")));
    }
    if a_grid.len() < max_order + 1 {
        return Err(Error::config("grid is shorter than the difference order"));
    }
    let h = a_grid[1] - a_grid[0];
    if !(h > T::zero()) {
        return Err(Error::config("grid must be increasing"));
    }
    for w in a_grid.windows(2) {
        if ((w[1] - w[0]) - h).abs() > lit::<T>(1e-9) * h.max(T::one()) {
            return Err(Error::config("grid must be uniformly spaced"));
        }
    }
    let mut diff: Vec<T> = a_grid.iter().map(|&a| f(a)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(max_order + 1);
    for j in 0..=max_order {
        if j > 0 {
            diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let sign = if j % 2 == 0 { T::one() } else { -T::one() };
        let signed: Vec<f64> = diff.iter().map(|&d| to_f64(sign * d)).collect();
        let min_signed = signed.iter().copied().fold(f64::INFINITY, f64::min);
        let violations = signed
            .iter()
            .enumerate()
            .filter(|(_, v)| !(**v >= CM_TOL))
            .map(|(i, v)| (i, *v))
            .collect();
        rows.push(CmRow {
            order: j,
            min_signed,
            violations,
        });
    }
    Ok(CmReport {
        grid_start: to_f64(a_grid[0]),
        spacing: to_f64(h),
        points: a_grid.len(),
        rows,
    })
}

/// Sign test for `a ↦ φₙ(−a)`.
pub fn cm_evidence<T: Real>(n: usize, a_grid: &[T], max_order: usize) -> Result<CmReport> {
    cm_evidence_for(|a| phi_at_negative(n, a), a_grid, max_order)
}

/// `a₀, a₀+h, …` with `count` points.
pub fn uniform_grid<T: Real>(start: T, step: T, count: usize) -> Vec<T> {
    (0..count).map(|i| start + step * from_usize(i)).collect()
}

/// Gram matrix of `kₙ(z,w) = φₙ(zw̄)`.
pub fn gram_phi<T: Real>(n: usize, points: &[Complex<T>]) -> Result<GramMatrix<T>> {
    if points.len() > MAX_GRAM_POINTS {
        return Err(Error::config(format!("at most {MAX_GRAM_POINTS} points")));
    }
    if points.iter().any(|z| z.norm() > T::one() - lit(GRAM_MARGIN)) {
        return Err(Error::domain(format!("Gram points must satisfy |z| <= 1 - {GRAM_MARGIN}")));
    }
    let tol = T::epsilon();
    GramMatrix::build(points, |z, w| phi(n, z * w.conj(), tol))
}

/// Kernels audited against the ML-class conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlKernel {
    PhiTilde(usize),
    Eta0K,
}

impl MlKernel {
    pub fn label(&self) -> String {
        match self {
            MlKernel::PhiTilde(n) => format!("phi_tilde({n})"),
            MlKernel::Eta0K => "eta0_K".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MlAudit {
    pub kernel: String,
    pub conditions: Vec<Check>,
}

impl MlAudit {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| !c.status.is_fail())
    }
}

pub const AUDIT_POINTS: usize = 30;
pub const AUDIT_CM_ORDER: usize = 6;

/// The three ML conditions for `kernel`: normalisation with positive slope
/// at 0, Gram positivity on seeded points, and the complete-monotonicity
/// sign test through order 6 on `a = 0.1, 0.2, …, 5.0`. The sign test can
/// only support or refute, never prove, so its status is always
/// `evidence`; `signs_consistent` in its details carries the outcome.
///
/// For `η₀K` the test refutes: `η₀𝖤(−a)` is negative for
/// `1.5612 < a < 2.9376`, so `a ↦ η₀𝖤(−a)` is not completely monotone.
pub fn ml_condition_audit(kernel: MlKernel, space: &HormanderFock<f64>, seed: u64) -> Result<MlAudit> {
    let tol = 1e-15;
    let (f, expected_slope, radius): (Box<dyn Fn(Complex<f64>) -> Result<Complex<f64>>>, f64, f64) = match kernel {
        MlKernel::PhiTilde(n) => {
            if n == 0 {
                return Err(Error::config("phi_tilde needs n >= 1"));
            }
            (Box::new(move |z| phi_tilde(n, z, tol)), n as f64 / (n as f64 + 1.0), 0.9)
        }
        MlKernel::Eta0K => {
            let eta0 = space.eta_ratio(0).expect("eta_0");
            let slope = eta0 / space.table().get(1).expect("eta_1");
            (Box::new(move |z| Ok(space.eval_e(z, tol)?.scale(eta0))), slope, 2.0)
        }
    };

    let mut conditions = Vec::with_capacity(3);
    let c = cauchy_coefficients(&f, 2, 0.5, 64)?;
    let value0 = f(Complex::new(0.0, 0.0))?;
    let slope = c[1].re;
    let ok = (value0.re - 1.0).abs() <= 1e-12
        && value0.im == 0.0
        && slope > 0.0
        && (slope - expected_slope).abs() <= 1e-10 * expected_slope;
    conditions.push(Check::from_bool(
        "i_normalised_positive_slope",
        ok,
        json!({ "value_at_0": value0.re, "slope_at_0": slope, "expected_slope": expected_slope }),
    ));

    let points = disk_points(&mut rng(seed), AUDIT_POINTS, radius);
    let gram = GramMatrix::build(&points, |z, w| f(z * w.conj()))?;
    conditions.push(Check::from_bool(
        "ii_gram_psd",
        gram.is_psd(),
        json!({ "points": AUDIT_POINTS, "radius": radius, "seed": seed, "min_eig": gram.min_eig, "trace": gram.trace }),
    ));

    let grid = uniform_grid(0.1, 0.1, 50);
    let report = cm_evidence_for(|a| Ok(f(Complex::new(-a, 0.0))?.re), &grid, AUDIT_CM_ORDER)?;
    conditions.push(Check::new(
        "iii_complete_monotonicity",
        Status::Evidence,
        json!({ "signs_consistent": report.passed(), "sign_test": report }),
    ));
    Ok(MlAudit {
        kernel: kernel.label(),
        conditions,
    })
}
