//! Hermite functions and the η-Bargmann kernel `A(z,x) = Σ zⁿ/√ηₙ·ψₙ(x)`.
//!
//! `ψₙ` are the orthonormal Hermite functions. The classical generating
//! function in this convention carries a factor `π^{−1/4}`:
//! `Σ zⁿ/√n!·ψₙ(x) = π^{−1/4}exp(−½(z²+x²) + √2zx)`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hfock::HormanderFock;
use crate::numerics::gamma::ln_factorials;
use crate::numerics::{
    gauss_hermite_rule, integrate_semi_infinite_complex, CompensatedComplexSum, CompensatedSum,
};
use crate::scalar::{from_usize, lit, to_f64, Real};

pub const MAX_HERMITE_ORDER: usize = 1_000;
pub const MAX_HERMITE_ARG: f64 = 40.0;
pub const MAX_KERNEL_ARG: f64 = 10.0;

/// `π^{−1/4}`.
pub fn pi_m_quarter<T: Real>() -> T {
    T::PI().powf(lit(-0.25))
}

/// `ψ₀(x), …, ψ_{n_max}(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermiteEval<T> {
    pub n_max: usize,
    pub x: T,
    pub values: Vec<T>,
}

/// Orthonormal Hermite functions by
/// `ψ_{n+1} = x√(2/(n+1))ψₙ − √(n/(n+1))ψ_{n−1}` from `ψ₀ = π^{−1/4}e^{−x²/2}`.
///
/// The recurrence runs on mantissas with a separate log-scale, so orders
/// whose values are representable come out finite even when `ψ₀(x)`
/// underflows.
pub fn hermite_psi<T: Real>(n_max: usize, x: T) -> Result<HermiteEval<T>> {
    if n_max > MAX_HERMITE_ORDER {
        return Err(Error::config(format!("Hermite order {n_max} exceeds {MAX_HERMITE_ORDER}")));
    }
    if !(x.abs() <= lit(MAX_HERMITE_ARG)) {
        return Err(Error::domain(format!("Hermite argument |x| = {} exceeds {MAX_HERMITE_ARG}", to_f64(x))));
    }
    let two = lit::<T>(2.0);
    let big = lit::<T>(1e100);
    let mut log_scale = -x * x / two - T::PI().ln() / lit(4.0);
    let mut prev = T::zero();
    let mut cur = T::one();
    let mut mant = Vec::with_capacity(n_max + 1);
    mant.push((cur, log_scale));
    for n in 0..n_max {
        let nf = from_usize::<T>(n);
        let n1 = nf + T::one();
        let next = x * (two / n1).sqrt() * cur - (nf / n1).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > big {
            let f = cur.abs();
            prev /= f;
            cur /= f;
            log_scale += f.ln();
        }
        mant.push((cur, log_scale));
    }
    let values = mant.into_iter().map(|(m, l)| m * l.exp()).collect();
    Ok(HermiteEval { n_max, x, values })
}

/// Largest `|∫ψₙψₘ − δₙₘ|` over `n, m ≤ n_max` under a Gauss-Hermite rule.
pub fn hermite_orthonormality_defect<T: Real>(n_max: usize, nodes: usize) -> Result<T> {
    let rule = gauss_hermite_rule::<T>(nodes)?;
    let tables: Vec<Vec<T>> = rule
        .nodes
        .iter()
        .map(|&x| hermite_psi(n_max, x).map(|h| h.values))
        .collect::<Result<_>>()?;
    // weight e^{x²}·w folds the Gaussian back out of ψₙψₘ
    let w: Vec<T> = rule.nodes.iter().zip(&rule.log_weights).map(|(&x, &lw)| (lw + x * x).exp()).collect();
    let mut worst = T::zero();
    for n in 0..=n_max {
        for m in n..=n_max {
            let mut acc = CompensatedSum::new();
            for (i, t) in tables.iter().enumerate() {
                acc.add(w[i] * t[n] * t[m]);
            }
            let want = if n == m { T::one() } else { T::zero() };
            worst = worst.max((acc.value() - want).abs());
        }
    }
    Ok(worst)
}

/// Smallest `N` with `N+1 > 8|z|²` and `2√8(√2|z|)^{N+1}/√((N+1)!) < tol`,
/// a bound on `Σ_{n>N}|zⁿ/√ηₙ·ψₙ|` from `1/ηₙ ≤ 8·2ⁿ/n!` and `|ψₙ| ≤ 1`.
pub fn bargmann_truncation<T: Real>(r: T, tol: T) -> Result<usize> {
    if !(tol > T::zero()) {
        return Err(Error::config("tolerance must be positive"));
    }
    if r == T::zero() {
        return Ok(0);
    }
    let lf = ln_factorials::<T>(MAX_HERMITE_ORDER + 1);
    let half = lit::<T>(0.5);
    let c = (lit::<T>(4.0) * lit::<T>(8.0).sqrt()).ln();
    let l = (lit::<T>(2.0).sqrt() * r).ln();
    let knee = lit::<T>(8.0) * r * r;
    for n in 0..MAX_HERMITE_ORDER {
        let m = from_usize::<T>(n + 1);
        if m > knee && c + m * l - half * lf[n + 1] < tol.ln() {
            return Ok(n);
        }
    }
    Err(Error::domain(format!("|z| = {} needs more than {MAX_HERMITE_ORDER} terms", to_f64(r))))
}

fn check_kernel_arg<T: Real>(z: Complex<T>) -> Result<()> {
    if z.norm() <= lit(MAX_KERNEL_ARG) {
        Ok(())
    } else {
        Err(Error::domain(format!("Bargmann kernel needs |z| <= {MAX_KERNEL_ARG}")))
    }
}

/// `zⁿ/√ηₙ` for `n = 0..=n`.
fn kernel_coeffs<T: Real>(space: &HormanderFock<T>, z: Complex<T>, n: usize) -> Result<Vec<Complex<T>>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = Complex::new(T::one() / space.eta_ratio(0).expect("eta_0").sqrt(), T::zero());
    out.push(c);
    for k in 1..=n {
        let r = space
            .eta_ratio(k)
            .ok_or_else(|| Error::config(format!("moment table shorter than {n}")))?;
        c = (c * z).unscale(r.sqrt());
        out.push(c);
    }
    Ok(out)
}

/// `A(z,x)` truncated at an explicit order.
pub fn bargmann_a_truncated<T: Real>(space: &HormanderFock<T>, z: Complex<T>, x: T, n: usize) -> Result<Complex<T>> {
    check_kernel_arg(z)?;
    let psi = hermite_psi(n, x)?;
    let coeffs = kernel_coeffs(space, z, n)?;
    let mut acc = CompensatedComplexSum::new();
    for (c, &p) in coeffs.iter().zip(&psi.values) {
        acc.add(c.scale(p));
    }
    Ok(acc.value())
}

/// `A(z,x) = Σ zⁿ/√ηₙ·ψₙ(x)` with a certified tail below `tol`.
pub fn bargmann_a<T: Real>(space: &HormanderFock<T>, z: Complex<T>, x: T, tol: T) -> Result<Complex<T>> {
    check_kernel_arg(z)?;
    let n = bargmann_truncation(z.norm(), tol)?;
    bargmann_a_truncated(space, z, x, n)
}

/// `∫|A(z,x)|²dx` for the series truncated at `trunc`, by a Gauss-Hermite
/// rule with `quad_nodes` nodes.
pub fn l2_norm_a_sq<T: Real>(space: &HormanderFock<T>, z: Complex<T>, quad_nodes: usize, trunc: usize) -> Result<T> {
    if z.norm() > lit(2.0) {
        return Err(Error::domain("L2 identity check supports |z| <= 2"));
    }
    if quad_nodes < 100 || trunc < 40 {
        return Err(Error::config("L2 identity check needs >= 100 nodes and truncation >= 40"));
    }
    let rule = gauss_hermite_rule::<T>(quad_nodes)?;
    let coeffs = kernel_coeffs(space, z, trunc)?;
    let mut acc = CompensatedSum::new();
    for (&x, &lw) in rule.nodes.iter().zip(&rule.log_weights) {
        let psi = hermite_psi(trunc, x)?;
        let mut a = CompensatedComplexSum::new();
        for (c, &p) in coeffs.iter().zip(&psi.values) {
            a.add(c.scale(p));
        }
        acc.add((lw + x * x).exp() * a.value().norm_sqr());
    }
    Ok(acc.value())
}

/// Both sides of the weighted generating identity
/// `Σ(ηₙ/√n!)zⁿψₙ(x) = π^{−1/4}e^{−x²/2}∫₀^∞e^{−z²t²/2+(√2zx−1)t}(1+t)^{−2}dt`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedGf<T> {
    pub lhs: Complex<T>,
    pub rhs: Complex<T>,
    /// `ηN|z|^N/√N!`, which bounds the last series term.
    pub last_envelope: T,
}

/// The weighted generating identity at truncation `n`.
///
/// The coefficients `ηₙ/√n!` grow like `√n!/n²`, so the series has radius
/// of convergence zero: its partial sums approach the integral only while
/// the terms are still shrinking. A domain error is returned when the
/// envelope of the last term is not below `10⁻⁷(1+|rhs|)` or is increasing.
pub fn weighted_gf_pair<T: Real>(z: Complex<T>, x: T, n: usize) -> Result<WeightedGf<T>> {
    if z.norm() > lit(2.0) || x.abs() > lit(5.0) {
        return Err(Error::domain("weighted generating identity needs |z| <= 2 and |x| <= 5"));
    }
    if n < 60 {
        return Err(Error::config("weighted generating identity needs N >= 60"));
    }
    if z.norm() > T::zero() && z.arg().abs() > T::FRAC_PI_4() {
        return Err(Error::domain("weighted generating identity needs |arg z| <= pi/4"));
    }
    let table = crate::moments::MomentTable::<T>::closed_form(n)?;
    let lf = ln_factorials::<T>(n);
    let psi = hermite_psi(n, x)?;
    let half = lit::<T>(0.5);
    let mut acc = CompensatedComplexSum::new();
    let mut env = Vec::with_capacity(n + 1);
    let lz = z.norm().ln();
    for k in 0..=n {
        let kf = from_usize::<T>(k);
        let log_c = table.log_eta[k] - half * lf[k];
        let mag = if z.norm() == T::zero() {
            if k == 0 { log_c.exp() } else { T::zero() }
        } else {
            (log_c + kf * lz).exp()
        };
        env.push(mag);
        let phase = Complex::from_polar(T::one(), kf * z.arg());
        acc.add(phase.scale(mag * psi.values[k]));
    }
    let lhs = acc.value();
    let rhs = weighted_gf_rhs(z, x)?;
    let last = env[n];
    let settled = last <= lit::<T>(1e-7) * (T::one() + rhs.norm()) && last <= env[n - 1];
    if !settled || !(lhs.re.is_finite() && lhs.im.is_finite()) {
        return Err(Error::domain(format!(
            "weighted generating series has not settled at N = {n} (last term envelope {:e}); \
             the series has radius of convergence zero",
            to_f64(last)
        )));
    }
    Ok(WeightedGf {
        lhs,
        rhs,
        last_envelope: last,
    })
}

/// `π^{−1/4}e^{−x²/2}∫₀^∞ e^{−z²t²/2+(√2zx−1)t}(1+t)^{−2}dt`.
pub fn weighted_gf_rhs<T: Real>(z: Complex<T>, x: T) -> Result<Complex<T>> {
    let half = lit::<T>(0.5);
    let s2 = lit::<T>(2.0).sqrt();
    let z2 = z * z;
    let b = z.scale(s2 * x) - T::one();
    let r = integrate_semi_infinite_complex(
        move |t: T| {
            let e = (-z2.scale(half * t * t) + b.scale(t)).exp();
            e.unscale((T::one() + t) * (T::one() + t))
        },
        T::one(),
        lit(1e-13),
    )?;
    Ok(r.value.scale(pi_m_quarter::<T>() * (-half * x * x).exp()))
}

/// `(Σ_{n≤N} zⁿ/√n!·ψₙ(x), π^{−1/4}exp(−½(z²+x²) + √2zx))`.
pub fn classical_gf_check<T: Real>(z: Complex<T>, x: T, n: usize) -> Result<(Complex<T>, Complex<T>)> {
    if z.norm() > lit(3.0) || x.abs() > lit(5.0) {
        return Err(Error::domain("classical generating identity needs |z| <= 3 and |x| <= 5"));
    }
    let psi = hermite_psi(n, x)?;
    let mut acc = CompensatedComplexSum::new();
    let mut c = Complex::new(T::one(), T::zero());
    for k in 0..=n {
        if k > 0 {
            c = (c * z).unscale(from_usize::<T>(k).sqrt());
        }
        acc.add(c.scale(psi.values[k]));
    }
    let half = lit::<T>(0.5);
    let s2 = lit::<T>(2.0).sqrt();
    let exponent = -(z * z + x * x).scale(half) + z.scale(s2 * x);
    Ok((acc.value(), exponent.exp().scale(pi_m_quarter())))
}

/// One row of a kernel grid export.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub z_re: f64,
    pub z_im: f64,
    pub x: f64,
    pub a_re: f64,
    pub a_im: f64,
}

/// `A(z,x)` over the product of `zs` and `xs`.
pub fn bargmann_grid<T: Real>(space: &HormanderFock<T>, zs: &[Complex<T>], xs: &[T], tol: T) -> Result<Vec<GridRow>> {
    let mut rows = Vec::with_capacity(zs.len() * xs.len());
    for &z in zs {
        for &x in xs {
            let a = bargmann_a(space, z, x, tol)?;
            rows.push(GridRow {
                z_re: to_f64(z.re),
                z_im: to_f64(z.im),
                x: to_f64(x),
                a_re: to_f64(a.re),
                a_im: to_f64(a.im),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::Golden;
    use proptest::prelude::*;

    fn space() -> HormanderFock<f64> {
        HormanderFock::with_table_size(1_200).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn psi_values() {
        let g = Golden::bundled();
        let h = hermite_psi(1, 0.0f64).unwrap();
        assert!((h.values[0] - 0.751125544464943).abs() < 1e-15);
        assert!((h.values[0] - g.value("pi_m_quarter")).abs() < 1e-15);
        assert_eq!(h.values[1], 0.0);
        for (n, x, tag) in [(5usize, 1.5, "psi_5_1_5"), (30, 2.0, "psi_30_2"), (100, -3.0, "psi_100_m3")] {
            let v = hermite_psi(n, x).unwrap().values[n];
            let want = g.value(tag);
            assert!((v - want).abs() <= 1e-13 * want.abs().max(1e-3), "{tag}: {v} vs {want}");
        }
    }

    #[test]
    fn psi_far_from_origin_is_guarded() {
        // ψ₀(40) underflows but ψₙ(40) for n near 800 is of order 0.1
        let h = hermite_psi(1000, 40.0f64).unwrap();
        assert_eq!(h.values[0], 0.0);
        assert!(h.values.iter().all(|v| v.is_finite() && v.abs() <= 1.0));
        assert!(h.values[800..].iter().any(|v| v.abs() > 1e-3));
        assert!(hermite_psi(10, 41.0f64).is_err());
        assert!(hermite_psi(1001, 0.0f64).is_err());
    }

    #[test]
    fn quadrature_orthonormality() {
        let rule = gauss_hermite_rule::<f64>(40).unwrap();
        let ip = |n: usize, m: usize| -> f64 {
            rule.nodes
                .iter()
                .zip(&rule.log_weights)
                .map(|(&x, &lw)| {
                    let p = hermite_psi(m.max(n), x).unwrap().values;
                    (lw + x * x).exp() * p[n] * p[m]
                })
                .sum()
        };
        assert!((ip(3, 3) - 1.0).abs() < 1e-12);
        assert!(ip(3, 5).abs() < 1e-12);
        assert!(hermite_orthonormality_defect::<f64>(40, 200).unwrap() < 1e-9);
    }

    #[test]
    fn bargmann_kernel_values() {
        let sp = space();
        let g = Golden::bundled();
        let psi0 = hermite_psi(0, 0.7f64).unwrap().values[0];
        let a0 = bargmann_a(&sp, c(0.0, 0.0), 0.7, 1e-12).unwrap();
        assert!((a0.re - psi0 / g.value("eta_0").sqrt()).abs() < 1e-15);
        let a = bargmann_a(&sp, c(0.5, 0.0), 1.0, 1e-12).unwrap();
        assert!((a.re - g.value("bargmann_0_5_1")).abs() < 1e-10, "{a}");
        // at x = 0 only even orders contribute
        let n = bargmann_truncation(1.0f64, 1e-12).unwrap();
        let a = bargmann_a(&sp, c(1.0, 0.0), 0.0, 1e-12).unwrap();
        let psi = hermite_psi(n, 0.0f64).unwrap().values;
        let even: f64 = (0..=n).step_by(2).map(|k| psi[k] / sp.table().get(k).unwrap().sqrt()).sum();
        assert!((a.re - even).abs() < 1e-13);
        assert!(bargmann_a(&sp, c(10.0, 0.1), 0.0, 1e-12).is_err());
        assert!(bargmann_a(&sp, c(9.0, 0.0), 0.5, 1e-12).unwrap().re.is_finite());
    }

    #[test]
    fn l2_identity() {
        let sp = space();
        for r in [0.0f64, 0.5, 1.0, 1.5] {
            let l2 = l2_norm_a_sq(&sp, c(r, 0.0), 200, 60).unwrap();
            let e = sp.eval_e(c(r * r, 0.0), 1e-14).unwrap().re;
            assert!((l2 - e).abs() <= 1e-8 * e, "r={r}: {l2} vs {e}");
        }
        let a = l2_norm_a_sq(&sp, c(0.0, 1.5), 200, 60).unwrap();
        let e = sp.eval_e(c(2.25, 0.0), 1e-14).unwrap().re;
        assert!((a - e).abs() <= 1e-8 * e);
        assert!(l2_norm_a_sq(&sp, c(1.0, 0.0), 50, 60).is_err());
    }

    #[test]
    fn rotation_invariance() {
        let sp = space();
        let base = l2_norm_a_sq(&sp, c(1.2, 0.0), 200, 60).unwrap();
        for k in 0..8 {
            let z = Complex::from_polar(1.2, 0.7 * k as f64 + 0.1);
            let v = l2_norm_a_sq(&sp, z, 200, 60).unwrap();
            assert!((v - base).abs() <= 1e-10 * base, "k={k}");
        }
    }

    #[test]
    fn weighted_identity_where_the_series_settles() {
        let g = Golden::bundled();
        let p = weighted_gf_pair(c(0.0, 0.0), 0.8f64, 60).unwrap();
        let want = pi_m_quarter::<f64>() * (-0.32f64).exp() * g.value("eta_0");
        assert!((p.lhs.re - want).abs() < 1e-14 && (p.rhs.re - want).abs() < 1e-12);
        for (z, x, tag) in [(0.05, 1.0, "0_05_1"), (0.1, 0.0, "0_1_0")] {
            let p = weighted_gf_pair(c(z, 0.0), x, 60).unwrap();
            let want = g.value(&format!("weighted_gf_{tag}"));
            assert!((p.lhs - p.rhs).norm() <= 1e-7 * (1.0 + p.rhs.norm()));
            assert!((p.rhs.re - want).abs() < 1e-11, "{tag}");
        }
    }

    #[test]
    fn weighted_identity_reports_divergence() {
        let g = Golden::bundled();
        for (z, x, tag) in [(0.5, 0.0, "0_5_0"), (1.0, 1.0, "1_1")] {
            assert!(matches!(weighted_gf_pair(c(z, 0.0), x, 60), Err(Error::Domain(_))));
            let rhs = weighted_gf_rhs(c(z, 0.0), x).unwrap();
            assert!((rhs.re - g.value(&format!("weighted_gf_{tag}"))).abs() < 1e-11, "{tag}");
        }
        // even a small argument stops settling once N passes the smallest term
        assert!(weighted_gf_pair(c(0.1, 0.0), 0.0f64, 60).is_ok());
        assert!(weighted_gf_pair(c(0.1, 0.0), 0.0f64, 400).is_err());
        assert!(weighted_gf_pair(c(0.1, 0.2), 0.0f64, 60).is_err());
    }

    #[test]
    fn classical_identity() {
        let (l, r) = classical_gf_check(c(0.0, 0.0), 1.3f64, 80).unwrap();
        assert!((l - r).norm() < 1e-15);
        let (l, r) = classical_gf_check(c(1.0, 0.0), 0.0f64, 80).unwrap();
        assert!((r.re - pi_m_quarter::<f64>() * (-0.5f64).exp()).abs() < 1e-15);
        assert!((l - r).norm() < 1e-10);
        let (l, r) = classical_gf_check(c(0.0, 1.0), 1.0f64, 80).unwrap();
        assert!((l - r).norm() < 1e-10);
    }

    #[test]
    fn grid_export() {
        let sp = space();
        let rows = bargmann_grid(&sp, &[c(0.0, 0.0), c(0.5, 0.5)], &[-1.0, 0.0, 1.0], 1e-12).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[4].z_im, 0.5);
    }

    proptest! {
        #[test]
        fn psi_envelope_and_recurrence(x in -20.0f64..20.0) {
            let h = hermite_psi(200, x).unwrap().values;
            prop_assert!(h.iter().all(|v| v.abs() <= 1.0));
            for n in 1..200 {
                let nf = n as f64;
                let r = h[n + 1] - (x * (2.0 / (nf + 1.0)).sqrt() * h[n] - (nf / (nf + 1.0)).sqrt() * h[n - 1]);
                let scale = h[n + 1].abs().max(h[n].abs()).max(h[n - 1].abs()).max(f64::MIN_POSITIVE);
                prop_assert!(r.abs() <= 1e-13 * scale, "n={} r={:e}", n, r);
            }
        }

        #[test]
        fn classical_identity_random(r in 0.0f64..3.0, th in 0.0f64..6.3, x in -5.0f64..5.0) {
            let (l, rhs) = classical_gf_check(Complex::from_polar(r, th), x, 120).unwrap();
            prop_assert!((l - rhs).norm() <= 1e-10, "{} vs {}", l, rhs);
        }
    }
}
