//! Independent cross-check by quadrature over the Euler (Beta-weighted) and
//! Laplace integral representations.

mod integrals;
mod rules;

pub use integrals::{
    euler_integral, euler_integral_default, laplace_integral, laplace_integral_default, DEFAULT_LAGUERRE_ORDER,
    DEFAULT_LEGENDRE_ORDER, QUADRATURE_TOL_FLOOR,
};
pub use rules::{build_rule, cached_rule, QuadratureRule, RuleKind, MAX_ORDER, MIN_ORDER};
