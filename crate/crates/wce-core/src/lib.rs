//! Weighted conditional expectation operators `T = M_w E M_u` on finite
//! discrete measure spaces.
//!
//! The crate models the measure-theoretic substrate (spaces, partition
//! subalgebras, measurable functions), the conditional expectation, the
//! operator and its closed forms (powers, Cesàro means, adjoint, Aluthge
//! transform, Neumann inverse), an independent dense-matrix oracle, and the
//! structural analyses (ascent, descent, decomposition, power- and
//! Cesàro-boundedness).
//!
//! All numerics are generic over the floating-point scalar via
//! [`scalar::Scalar`]; the aliases below fix `f64` for ordinary use.

pub mod analysis;
pub mod error;
pub mod expectation;
pub mod measure;
pub mod operator;
pub mod oracle;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default complex scalar.
pub type Complex64 = num_complex::Complex<f64>;

/// `f64`-concrete aliases for the core types.
pub type Space = measure::FiniteMeasureSpace<f64>;
pub type Subalgebra = measure::SigmaSubalgebra;
pub type Fun = measure::MeasurableFn<f64>;
pub type P = measure::Exponent<f64>;
pub type Operator = operator::WceOperator<f64>;
pub type Matrix = oracle::DenseMatrix<f64>;
pub type Config = analysis::AnalysisConfig<f64>;
