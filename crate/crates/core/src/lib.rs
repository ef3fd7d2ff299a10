//! Generalized hypergeometric functions pFq in double-double precision.
//!
//! Besides direct series evaluation the crate implements multi-index
//! addition formulas for pFp and p+1Fp, the Kummer- and Euler-type
//! transformations built on them, and quadrature over the Euler and Laplace
//! integral representations as an independent cross-check.

pub mod error;
pub mod identities;
pub mod numerics;
pub mod oracle;
pub mod series;
pub mod sweep;

pub use error::{Error, Result};
pub use numerics::{ComplexEP, DoubleDouble};
pub use series::{
    classify, eval_series, eval_series_scaled, ConvergenceClass, EvalResult, HyperSpec, Precision, TruncationPolicy,
};
