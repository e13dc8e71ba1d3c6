//! Numerical laboratory for product formulas approximating `e^{-itC}` with
//! `C = A + B`, together with a constructive toolkit for holomorphic Kato
//! functions (Blaschke zeros + measure + exponential factor).
//!
//! Layout:
//! - [`matrix`] / [`spectral`]: dense complex linear algebra and the
//!   spectral functional calculus everything else is built on;
//! - [`kato`]: Kato functions, their canonical representation, axiom checks
//!   and boundary diagnostics;
//! - [`formulas`]: the product-formula scheme zoo and its convergence
//!   metrics in L²-in-time, measure, and sup-in-time;
//! - [`quadrature`] / [`rng`]: shared Gauss-Legendre rules and the seeded
//!   splitmix64 generator all fixtures derive from.
//!
//! ```
//! use tklab_core::formulas::metrics::l2_time_error;
//! use tklab_core::formulas::{make_pair, ProductScheme, QuadratureGrid};
//! use tklab_core::rng::random_unit_vector;
//! use tklab_core::spectral::random_hermitian_psd;
//!
//! let a = random_hermitian_psd(4, 7, 1.0);
//! let b = random_hermitian_psd(4, 8, 1.0);
//! let pair = make_pair(&a, &b, None)?;
//! let grid = QuadratureGrid::default_for(1.0)?;
//! let h = random_unit_vector(4, 1);
//!
//! let coarse = l2_time_error(&pair, &ProductScheme::TrotterPlain, 4, &h, &grid)?;
//! let fine = l2_time_error(&pair, &ProductScheme::TrotterPlain, 64, &h, &grid)?;
//! assert!(fine < coarse);
//! # Ok::<(), tklab_core::formulas::FormulaError>(())
//! ```

pub mod formulas;
pub mod kato;
pub mod matrix;
pub mod quadrature;
pub mod rng;
pub mod spectral;

pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use spectral::HermitianOperator;

#[cfg(test)]
mod concurrency_contract {
    // every value type is immutable after construction and freely shared
    // between threads
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_sync() {
        assert_send_sync::<crate::ComplexMatrix>();
        assert_send_sync::<crate::HermitianOperator>();
        assert_send_sync::<crate::kato::KatoFunctionHandle>();
        assert_send_sync::<crate::kato::CanonicalKato>();
        assert_send_sync::<crate::kato::KatoMeasure>();
        assert_send_sync::<crate::kato::ZeroSet>();
        assert_send_sync::<crate::formulas::OperatorPair>();
        assert_send_sync::<crate::formulas::ProductScheme>();
        assert_send_sync::<crate::formulas::QuadratureGrid>();
        assert_send_sync::<crate::formulas::ConvergenceReport>();
    }
}
