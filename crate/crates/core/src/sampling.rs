//! Seeded point sets. Every random choice goes through `ChaCha8Rng`, so a
//! seed fixes the points on every platform.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{lit, Real};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` points uniform in the closed disk of the given radius.
pub fn disk_points<T: Real>(rng: &mut ChaCha8Rng, count: usize, radius: T) -> Vec<Complex<T>> {
    (0..count)
        .map(|_| {
            let u: f64 = rng.gen();
            let v: f64 = rng.gen();
            let r = radius * lit::<T>(u.sqrt());
            Complex::from_polar(r, lit::<T>(std::f64::consts::TAU * v))
        })
        .collect()
}

/// `count` reals uniform in `[lo, hi)`.
pub fn uniform<T: Real>(rng: &mut ChaCha8Rng, count: usize, lo: T, hi: T) -> Vec<T> {
    (0..count)
        .map(|_| lo + (hi - lo) * lit::<T>(rng.gen::<f64>()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_inside() {
        let a: Vec<Complex<f64>> = disk_points(&mut rng(7), 100, 2.0);
        let b: Vec<Complex<f64>> = disk_points(&mut rng(7), 100, 2.0);
        assert_eq!(a, b);
        assert!(a.iter().all(|z| z.norm() <= 2.0));
        let c: Vec<Complex<f64>> = disk_points(&mut rng(8), 100, 2.0);
        assert_ne!(a, c);
        let x = uniform(&mut rng(1), 50, -1.0f64, 3.0);
        assert!(x.iter().all(|v| (-1.0..3.0).contains(v)));
    }
}
