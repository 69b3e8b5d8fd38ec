//! Numerical machinery for the Hörmander-Fock space of entire functions with
//! norm `(1/π)∫|g|²(1+|z|²)⁻²e^{−|z|²}dλ`: its moment sequence, the entire
//! function `𝖤(z) = Σ zⁿ/ηₙ` and reproducing kernel `𝖤(z·w̄)`, the
//! exponential-integral family, Hermite/Bargmann expansions, Lerch-type disk
//! kernels and ∂̄-solution checks.
//!
//! All routines are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the binary64 instantiation that the tolerances in the
//! test suites refer to.

pub mod bargmann;
pub mod dbar;
pub mod error;
pub mod expint;
pub mod golden;
pub mod hfock;
pub mod lerch;
pub mod moments;
pub mod numerics;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type C64 = num_complex::Complex<f64>;
pub type QuadratureRule64 = numerics::QuadratureRule<f64>;
pub type IntegralResult64 = numerics::IntegralResult<f64>;
pub type ComplexMatrix64 = numerics::ComplexMatrix<f64>;
pub type ExpIntValue64 = expint::ExpIntValue<f64>;
pub type MomentTable64 = moments::MomentTable<f64>;
pub type ResidualSequence64 = moments::ResidualSequence<f64>;
pub type EntireSeries64 = hfock::EntireSeries<f64>;
pub type HormanderFock64 = hfock::HormanderFock<f64>;
pub type GramMatrix64 = hfock::GramMatrix<f64>;
pub type HermiteEval64 = bargmann::HermiteEval<f64>;
pub type WeightedGf64 = bargmann::WeightedGf<f64>;
pub type PolyanalyticSeries64 = dbar::PolyanalyticSeries<f64>;
