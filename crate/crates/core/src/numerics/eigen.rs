//! Symmetric tridiagonal eigenvalues (implicit QL) and Hermitian spectra.
//!
//! A complex Hermitian matrix `H = A + iB` is embedded as the real symmetric
//! matrix `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every
//! eigenvalue doubled. The embedding is reduced to tridiagonal form by
//! Householder reflections and diagonalized by QL with implicit shifts.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from row vectors; rows must all have length `rows.len()`.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Validation("matrix is not square".into()));
        }
        Ok(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Builds a real diagonal matrix.
    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex::new(d, T::zero()));
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.n + j] = v;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self.get(i, i))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Largest entrywise deviation `|m_ij - conj(m_ji)|`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off.len() == diag.len() - 1`), sorted ascending.
pub fn tridiagonal_eigenvalues<T: Real>(diag: &[T], off: &[T]) -> Result<Vec<T>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(Error::Validation(format!(
            "off-diagonal length {} does not match dimension {}",
            off.len(),
            n
        )));
    }
    let mut d = diag.to_vec();
    let mut e: Vec<T> = off.iter().copied().chain(std::iter::once(T::zero())).collect();
    let eps = T::epsilon();
    let two = lit::<T>(2.0);

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Accuracy {
                    message: format!("QL iteration did not converge for eigenvalue {l}"),
                    best: to_f64(d[l]),
                    error_estimate: to_f64(e[l].abs()),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(d)
}

/// Householder reduction of a dense real symmetric matrix (row-major, `n×n`)
/// to tridiagonal form; returns `(diag, off)`.
fn householder_tridiagonalize<T: Real>(a: &mut [T], n: usize) -> (Vec<T>, Vec<T>) {
    let idx = |i: usize, j: usize| i * n + j;
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let scale = (0..=l).fold(T::zero(), |s, k| s + a[idx(i, k)].abs());
            if scale == T::zero() {
                e[i] = a[idx(i, l)];
            } else {
                for k in 0..=l {
                    a[idx(i, k)] /= scale;
                    h += a[idx(i, k)] * a[idx(i, k)];
                }
                let f = a[idx(i, l)];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[idx(i, l)] = f - g;
                let mut f = T::zero();
                for j in 0..=l {
                    let mut g = T::zero();
                    for k in 0..=j {
                        g += a[idx(j, k)] * a[idx(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g += a[idx(k, j)] * a[idx(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * a[idx(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[idx(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[idx(j, k)] -= f * e[k] + g * a[idx(i, k)];
                    }
                }
            }
        } else {
            e[i] = a[idx(i, l)];
        }
        d[i] = h;
    }
    for (i, di) in d.iter_mut().enumerate() {
        *di = a[idx(i, i)];
    }
    let off = e[1..].to_vec();
    (d, off)
}

/// Eigenvalues of a real symmetric matrix given row-major.
pub fn symmetric_eigenvalues<T: Real>(a: &[T], n: usize) -> Result<Vec<T>> {
    if a.len() != n * n {
        return Err(Error::Validation("matrix data length mismatch".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut work = a.to_vec();
    let (d, off) = householder_tridiagonalize(&mut work, n);
    tridiagonal_eigenvalues(&d, &off)
}

fn check_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<()> {
    let tol = lit::<T>(1e-12) * m.max_abs().max(T::one());
    let defect = m.hermitian_defect();
    if !(defect <= tol) {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian: max |m_ij - conj(m_ji)| = {:e}",
            to_f64(defect)
        )));
    }
    Ok(())
}

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    check_hermitian(m)?;
    let n = m.dim();
    let half = lit::<T>(0.5);
    let big = 2 * n;
    let mut s = vec![T::zero(); big * big];
    for i in 0..n {
        for j in 0..n {
            // symmetrized (M + M^H)/2 so the embedding is exactly symmetric
            let v = (m.get(i, j) + m.get(j, i).conj()).scale(half);
            s[i * big + j] = v.re;
            s[(i + n) * big + (j + n)] = v.re;
            s[i * big + (j + n)] = -v.im;
            s[(i + n) * big + j] = v.im;
        }
    }
    let all = symmetric_eigenvalues(&s, big)?;
    Ok(all.into_iter().step_by(2).collect())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    if m.dim() == 0 {
        return Err(Error::Validation("empty matrix has no eigenvalues".into()));
    }
    Ok(hermitian_eigenvalues(m)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let m = ComplexMatrix::<f64>::identity(3);
        assert!((min_eigenvalue_hermitian(&m).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_minimum() {
        let m = ComplexMatrix::<f64>::diagonal(&[2.0, 0.5, -1.0]);
        assert!((min_eigenvalue_hermitian(&m).unwrap() + 1.0).abs() < 1e-15);
        let all = hermitian_eigenvalues(&m).unwrap();
        assert_eq!(all.len(), 3);
        assert!((all[1] - 0.5).abs() < 1e-15 && (all[2] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, 1.0), c(1.0, 0.0)]])
            .unwrap();
        assert!(matches!(min_eigenvalue_hermitian(&m), Err(Error::Validation(_))));
    }

    #[test]
    fn pauli_y_has_plus_minus_one() {
        let m = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]])
            .unwrap();
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_toeplitz_matches_closed_form() {
        // eigenvalues of tridiag(-1, 2, -1) are 2 - 2 cos(k pi/(n+1))
        let n = 40;
        let ev = tridiagonal_eigenvalues(&vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13, "k={k}: {v} vs {exact}");
        }
    }

    #[test]
    fn dense_random_symmetric_trace_and_frobenius() {
        // trace and sum of squares of eigenvalues are basis invariants
        let n = 12;
        let mut a = vec![0.0f64; n * n];
        let mut state = 12345u64;
        for i in 0..n {
            for j in 0..=i {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let v = ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let ev = symmetric_eigenvalues(&a, n).unwrap();
        let tr: f64 = (0..n).map(|i| a[i * n + i]).sum();
        let fro: f64 = a.iter().map(|v| v * v).sum();
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-13);
        assert!((ev.iter().map(|v| v * v).sum::<f64>() - fro).abs() < 1e-13);
    }

    #[test]
    fn works_in_single_precision() {
        let m = ComplexMatrix::<f32>::diagonal(&[3.0, -2.0, 1.0]);
        assert!((min_eigenvalue_hermitian(&m).unwrap() + 2.0).abs() < 1e-6);
    }
}
