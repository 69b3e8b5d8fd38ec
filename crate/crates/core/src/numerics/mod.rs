//! Shared numeric substrate: Gauss rules, adaptive integration, Hermitian
//! eigenvalues, finite-difference Wirtinger derivatives and compensated sums.

pub mod adaptive;
pub mod eigen;
pub mod gamma;
pub mod quadrature;
pub mod sum;
pub mod wirtinger;

pub use adaptive::{
    integrate_interval, integrate_semi_infinite, integrate_semi_infinite_complex,
    integrate_semi_infinite_complex_abs,
    integrate_semi_infinite_scaled, IntegralResult,
};
pub use eigen::{hermitian_eigenvalues, min_eigenvalue_hermitian, tridiagonal_eigenvalues, ComplexMatrix};
pub use quadrature::{gauss_hermite_rule, gauss_laguerre_rule, QuadratureKind, QuadratureRule};
pub use sum::{CompensatedComplexSum, CompensatedSum};
pub use wirtinger::{wirtinger_dbar_fd, DEFAULT_STEP};
