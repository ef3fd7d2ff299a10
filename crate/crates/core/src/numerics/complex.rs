use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::dd::DoubleDouble;

/// Complex number with double-double real and imaginary parts.
#[derive(Copy, Clone, Default, Debug, PartialEq)]
pub struct ComplexEP {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
}

impl ComplexEP {
    pub const ZERO: Self = Self { re: DoubleDouble::ZERO, im: DoubleDouble::ZERO };
    pub const ONE: Self = Self { re: DoubleDouble::ONE, im: DoubleDouble::ZERO };

    #[inline]
    pub const fn new(re: DoubleDouble, im: DoubleDouble) -> Self {
        Self { re, im }
    }

    #[inline]
    pub const fn from_real(re: DoubleDouble) -> Self {
        Self { re, im: DoubleDouble::ZERO }
    }

    #[inline]
    pub const fn from_f64(re: f64, im: f64) -> Self {
        Self { re: DoubleDouble::from_f64(re), im: DoubleDouble::from_f64(im) }
    }

    /// Parses `re` or `re,im` (also `re:im`) decimal text.
    pub fn parse(s: &str) -> Option<Self> {
        let mut parts = s.split([',', ':']);
        let re = DoubleDouble::parse_decimal(parts.next()?)?;
        let im = match parts.next() {
            Some(t) => DoubleDouble::parse_decimal(t)?,
            None => DoubleDouble::ZERO,
        };
        if parts.next().is_some() {
            return None;
        }
        Some(Self { re, im })
    }

    #[inline]
    pub fn to_complex64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn from_complex64(z: Complex64) -> Self {
        Self::from_f64(z.re, z.im)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    #[inline]
    pub fn norm_sqr(self) -> DoubleDouble {
        self.re.sqr() + self.im.sqr()
    }

    /// Modulus, scaled so that squaring cannot overflow.
    pub fn abs(self) -> DoubleDouble {
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return DoubleDouble::ZERO;
        }
        if small.is_zero() {
            return big;
        }
        let r = small / big;
        big * (DoubleDouble::ONE + r.sqr()).sqrt()
    }

    /// Binary64 modulus; enough for thresholds and error estimates.
    #[inline]
    pub fn abs_f64(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }

    #[inline]
    pub fn scale(self, k: DoubleDouble) -> Self {
        Self { re: self.re * k, im: self.im * k }
    }

    #[inline]
    pub fn scale_f64(self, k: f64) -> Self {
        Self { re: self.re.mul_f64(k), im: self.im.mul_f64(k) }
    }

    #[inline]
    pub fn add_real(self, k: DoubleDouble) -> Self {
        Self { re: self.re + k, im: self.im }
    }

    #[inline]
    pub fn add_f64(self, k: f64) -> Self {
        Self { re: self.re.add_f64(k), im: self.im }
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        if self.im.is_zero() {
            return Self::from_real(m);
        }
        let (s, c) = self.im.sin_cos();
        Self { re: m * c, im: m * s }
    }

    /// Principal branch logarithm, argument in (-pi, pi].
    pub fn ln(self) -> Self {
        Self { re: self.abs().ln(), im: self.im.atan2(self.re) }
    }

    /// Principal-branch power `self^w = exp(w ln self)`.
    pub fn powc(self, w: Self) -> Self {
        if self.is_zero() {
            return if w.is_zero() { Self::ONE } else { Self::ZERO };
        }
        (w * self.ln()).exp()
    }

    pub fn powi(self, n: u32) -> Self {
        let mut base = self;
        let mut k = n;
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        acc
    }

    /// Distance to the nearest nonpositive integer (infinite when the real
    /// part is positive and at least 1/2 away from zero).
    pub fn distance_to_nonpositive_integer(self) -> f64 {
        let n = self.re.round();
        if n.hi > 0.0 {
            return self.abs_f64();
        }
        (self - Self::from_real(n)).abs().to_f64()
    }

    /// The nonpositive integer `-m` within `tol` of `self`, as `m`.
    pub fn near_nonpositive_integer(self, tol: f64) -> Option<u64> {
        let n = self.re.round();
        if n.hi > 0.0 || n.hi < -1e15 {
            return None;
        }
        if (self - Self::from_real(n)).abs().to_f64() <= tol {
            Some((-n.hi) as u64)
        } else {
            None
        }
    }
}

impl From<f64> for ComplexEP {
    fn from(x: f64) -> Self {
        Self::from_f64(x, 0.0)
    }
}

impl From<DoubleDouble> for ComplexEP {
    fn from(x: DoubleDouble) -> Self {
        Self::from_real(x)
    }
}

impl Neg for ComplexEP {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Add for ComplexEP {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        Self { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for ComplexEP {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        Self { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Mul for ComplexEP {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        if self.im.is_zero() && b.im.is_zero() {
            return Self::from_real(self.re * b.re);
        }
        Self { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

impl Div for ComplexEP {
    type Output = Self;
    /// Smith's algorithm.
    #[inline]
    fn div(self, b: Self) -> Self {
        if b.im.is_zero() {
            return Self { re: self.re / b.re, im: self.im / b.re };
        }
        if b.re.abs() >= b.im.abs() {
            let r = b.im / b.re;
            let den = b.re + b.im * r;
            Self { re: (self.re + self.im * r) / den, im: (self.im - self.re * r) / den }
        } else {
            let r = b.re / b.im;
            let den = b.re * r + b.im;
            Self { re: (self.re * r + self.im) / den, im: (self.im * r - self.re) / den }
        }
    }
}

impl AddAssign for ComplexEP {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for ComplexEP {
    #[inline]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for ComplexEP {
    #[inline]
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl fmt::Display for ComplexEP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().map(|p| p + 1).unwrap_or(20);
        if self.im.is_zero() {
            write!(f, "{}", self.re.to_sci_string(sig))
        } else {
            let sign = if self.im.is_sign_negative() { "-" } else { "+" };
            write!(f, "{} {} {}i", self.re.to_sci_string(sig), sign, self.im.abs().to_sci_string(sig))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexEP {
        ComplexEP::from_f64(re, im)
    }

    fn close(a: ComplexEP, b: ComplexEP, tol: f64) -> bool {
        (a - b).abs_f64() <= tol * b.abs_f64().max(1e-300)
    }

    #[test]
    fn field_operations() {
        let a = c(1.5, -2.0);
        let b = c(-0.25, 3.0);
        assert!(close((a * b) / b, a, 1e-30));
        assert!(close(a * a.recip(), ComplexEP::ONE, 1e-30));
        assert!(close(a - a, ComplexEP::ZERO, 0.0) || (a - a).is_zero());
        assert_eq!((a * b).conj(), a.conj() * b.conj());
    }

    #[test]
    fn exp_ln_roundtrip_and_branch() {
        let z = c(0.3, 2.9);
        assert!(close(z.ln().exp(), z, 1e-30));
        let m = c(-1.0, 0.0).ln();
        assert!(close(m, c(0.0, std::f64::consts::PI), 1e-15));
        assert!((m.im - DoubleDouble::PI).abs().hi < 1e-31);
    }

    #[test]
    fn powc_matches_repeated_product() {
        let z = c(0.7, -0.4);
        assert!(close(z.powc(c(3.0, 0.0)), z * z * z, 1e-30));
        assert!(close(z.powi(5), z * z * z * z * z, 1e-30));
        assert_eq!(ComplexEP::ZERO.powc(c(2.0, 0.0)), ComplexEP::ZERO);
    }

    #[test]
    fn parsing() {
        let z = ComplexEP::parse("1.5,-0.25").unwrap();
        assert_eq!(z, c(1.5, -0.25));
        assert_eq!(ComplexEP::parse("2").unwrap(), c(2.0, 0.0));
        assert!(ComplexEP::parse("1,2,3").is_none());
        assert!(ComplexEP::parse("x").is_none());
    }

    #[test]
    fn nonpositive_integer_detection() {
        assert_eq!(c(-3.0, 0.0).near_nonpositive_integer(1e-25), Some(3));
        assert_eq!(c(0.0, 0.0).near_nonpositive_integer(1e-25), Some(0));
        assert_eq!(c(-3.0, 1e-20).near_nonpositive_integer(1e-25), None);
        assert_eq!(c(2.0, 0.0).near_nonpositive_integer(1e-25), None);
        assert!((c(-1.95, 0.0).distance_to_nonpositive_integer() - 0.05).abs() < 1e-15);
    }
}
