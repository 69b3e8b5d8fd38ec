//! Central-difference Wirtinger derivative `∂̄F = ½(∂ₓ + i∂ᵧ)F`.

use num_complex::Complex;

use crate::scalar::{lit, Real};

/// Default stencil step.
pub const DEFAULT_STEP: f64 = 1e-5;

/// `½[(F(z+h) − F(z−h))/(2h) + i(F(z+ih) − F(z−ih))/(2h)]`, accurate to
/// `O(h²)` for three-times differentiable `F`.
pub fn wirtinger_dbar_fd<T: Real>(f: impl Fn(Complex<T>) -> Complex<T>, z: Complex<T>, h: T) -> Complex<T> {
    let dx = Complex::new(h, T::zero());
    let dy = Complex::new(T::zero(), h);
    let two_h = h + h;
    let ddx = (f(z + dx) - f(z - dx)).unscale(two_h);
    let ddy = (f(z + dy) - f(z - dy)).unscale(two_h);
    (ddx + Complex::<T>::i() * ddy).scale(lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn analytic_identity_has_zero_dbar() {
        let z = Complex::new(0.7, -1.3);
        let d = wirtinger_dbar_fd(|z| z, z, 1e-5);
        assert!(d.norm() < 1e-9);
    }

    #[test]
    fn conjugate_has_unit_dbar() {
        let d = wirtinger_dbar_fd(|z: Complex<f64>| z.conj(), Complex::new(1.0, 2.0), 1e-5);
        assert!((d - Complex::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn product_rule() {
        let z = Complex::new(0.3, 0.1);
        let d = wirtinger_dbar_fd(|z: Complex<f64>| z.conj() * z.exp(), z, 1e-5);
        assert!((d - z.exp()).norm() < 1e-6);
    }

    proptest! {
        #[test]
        fn polynomials_in_z_are_annihilated(
            coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=6),
            r in 0.0f64..2.0,
            theta in 0.0f64..std::f64::consts::TAU,
        ) {
            let c: Vec<Complex<f64>> = coeffs.iter().map(|&(a, b)| Complex::new(a, b)).collect();
            let p = |z: Complex<f64>| c.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &a| acc * z + a);
            let d = wirtinger_dbar_fd(p, Complex::from_polar(r, theta), 1e-5);
            prop_assert!(d.norm() < 1e-8, "{d}");
        }
    }
}
