//! Gamma function for positive real arguments and log-factorials.

use crate::scalar::{from_usize, lit, Real};

use super::sum::CompensatedSum;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = lit::<T>(0.5);
    if x < half {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        return (T::PI() / (T::PI() * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut a = lit::<T>(LANCZOS[0]);
    let t = x + lit::<T>(LANCZOS_G) + half;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += lit::<T>(c) / (x + from_usize::<T>(i));
    }
    half * (T::PI() + T::PI()).ln() + (x + half) * t.ln() - t + a.ln()
}

/// `Γ(x)` for `x > 0`.
pub fn gamma<T: Real>(x: T) -> T {
    ln_gamma(x).exp()
}

/// `ln k!` for `k = 0..=n`, summed exactly over integers.
pub fn ln_factorials<T: Real>(n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = CompensatedSum::new();
    out.push(T::zero());
    for k in 1..=n {
        acc.add(from_usize::<T>(k).ln());
        out.push(acc.value());
    }
    out
}
