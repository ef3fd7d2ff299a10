//! Complex gamma function at double-double precision.
//!
//! For `Re z >= 1/2` the argument is shifted up to modulus at least
//! [`STIRLING_RADIUS`] with the Pochhammer product, and `ln Γ` is summed from
//! the Stirling series with the first sixteen Bernoulli corrections. At that
//! radius the sixteenth correction is below 1e-36, so the series is
//! truncated well past the format's unit roundoff. The left half-plane goes
//! through the reflection formula.

use super::complex::ComplexEP;
use super::dd::DoubleDouble;
use crate::error::{Error, Result};

const STIRLING_RADIUS: f64 = 25.0;

/// Bernoulli numbers B_2, B_4, ..., B_32 as exact (numerator, denominator).
/// Every numerator is below 2^53 and therefore exact in binary64.
const BERNOULLI_EVEN: [(f64, f64); 16] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
    (-7709321041217.0, 510.0),
];

// ln Γ(w) for |w| >= STIRLING_RADIUS, Re w > 0.
fn ln_gamma_stirling(w: ComplexEP) -> ComplexEP {
    let half_ln_two_pi = DoubleDouble::TWO_PI.ln().mul_f64(0.5);
    let mut acc = (w.add_f64(-0.5)) * w.ln() - w + ComplexEP::from_real(half_ln_two_pi);
    let inv = w.recip();
    let inv2 = inv * inv;
    let mut pow = inv;
    for (k, &(num, den)) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        let coeff = DoubleDouble::from_f64(num) / DoubleDouble::from_f64(den * n * (n - 1.0));
        let term = pow.scale(coeff);
        acc += term;
        if term.abs_f64() < 1e-36 * acc.abs_f64().max(1.0) {
            break;
        }
        pow *= inv2;
    }
    acc
}

fn gamma_right(z: ComplexEP) -> ComplexEP {
    let mut w = z;
    let mut shift = ComplexEP::ONE;
    while w.abs_f64() < STIRLING_RADIUS {
        shift *= w;
        w = w.add_f64(1.0);
    }
    ln_gamma_stirling(w).exp() / shift
}

/// Γ(z). Poles at the nonpositive integers are reported as errors.
pub fn gamma(z: ComplexEP) -> Result<ComplexEP> {
    if !z.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma of non-finite {z}")));
    }
    if z.im.is_zero() && z.re.hi <= 0.0 && z.re.is_integer() {
        return Err(Error::Pole(format!("gamma has a pole at {}", z.re)));
    }
    let g = if z.re.hi < 0.5 {
        // Γ(z) = π / (sin(πz) Γ(1-z)); reduce Re z modulo 2 before scaling
        // by π so that sin(πz) keeps its relative accuracy near the poles.
        let n = z.re.mul_f64(0.5).round().mul_f64(2.0);
        let x = (z.re - n) * DoubleDouble::PI;
        let y = z.im * DoubleDouble::PI;
        let (s, c) = x.sin_cos();
        let (sinh, cosh) = if y.is_zero() {
            (DoubleDouble::ZERO, DoubleDouble::ONE)
        } else {
            let ep = y.exp_m1();
            let em = (-y).exp_m1();
            ((ep - em).mul_f64(0.5), (ep + em).mul_f64(0.5) + DoubleDouble::ONE)
        };
        let sin_pi_z = ComplexEP::new(s * cosh, c * sinh);
        let reflected = gamma_right(ComplexEP::ONE - z);
        ComplexEP::from_real(DoubleDouble::PI) / (sin_pi_z * reflected)
    } else {
        gamma_right(z)
    };
    if !g.is_finite() {
        return Err(Error::OutOfRange(format!("gamma({z}) overflows")));
    }
    Ok(g)
}
