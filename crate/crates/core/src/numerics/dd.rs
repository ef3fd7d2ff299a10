//! Double-double real arithmetic.
//!
//! A value is the unevaluated sum `hi + lo` of two binary64 numbers with
//! `|lo| <= ulp(hi)/2`, giving roughly 106 bits (about 31 decimal digits) of
//! significand. The algorithms are the classical error-free transformations
//! (Knuth two-sum, Dekker/FMA two-product) with the accurate ("IEEE") addition
//! and a three-quotient division.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Copy, Clone, Default, Debug)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

// valid only for |a| >= |b|
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[cfg(target_feature = "fma")]
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[cfg(not(target_feature = "fma"))]
#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    const THRESH: f64 = 6.696_928_794_914_17e299;
    if a.abs() > THRESH {
        let a = a * 3.725_290_298_461_914e-9; // 2^-28
        let t = SPLITTER * a;
        let hi = t - (t - a);
        let lo = a - hi;
        (hi * 268_435_456.0, lo * 268_435_456.0)
    } else {
        let t = SPLITTER * a;
        let hi = t - (t - a);
        (hi, a - hi)
    }
}

#[cfg(not(target_feature = "fma"))]
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

// hi/lo splits of the constants, written to full precision
#[allow(clippy::approx_constant, clippy::excessive_precision)]
impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const PI: Self = Self { hi: 3.141_592_653_589_793_116e0, lo: 1.224_646_799_147_353_207e-16 };
    pub const TWO_PI: Self = Self { hi: 6.283_185_307_179_586_232e0, lo: 2.449_293_598_294_706_414e-16 };
    pub const FRAC_PI_2: Self = Self { hi: 1.570_796_326_794_896_558e0, lo: 6.123_233_995_736_766_036e-17 };
    pub const LN_2: Self = Self { hi: 6.931_471_805_599_452_862e-1, lo: 2.319_046_813_846_299_558e-17 };
    pub const E: Self = Self { hi: 2.718_281_828_459_045_091e0, lo: 1.445_646_891_729_250_158e-16 };
    /// 2^-104, the unit roundoff of the format.
    pub const EPSILON: f64 = 4.930_380_657_631_324e-32;

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    #[inline]
    pub fn from_product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        Self { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let (s, e) = two_sum(self.hi, -p1);
        let e = e - p2 + self.lo;
        let q2 = (s + e) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s1, s2 + self.lo);
        Self { hi, lo }
    }

    #[inline]
    pub fn sqr(self) -> Self {
        let (p1, p2) = two_prod(self.hi, self.hi);
        let p2 = p2 + 2.0 * self.hi * self.lo + self.lo * self.lo;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    /// Multiplies by 2^k exactly.
    #[inline]
    pub fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Self { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    pub fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            let (hi, lo) = quick_two_sum(hi, self.lo.floor());
            Self { hi, lo }
        } else {
            Self { hi, lo: 0.0 }
        }
    }

    /// Round to nearest integer, halves away from zero.
    pub fn round(self) -> Self {
        let hi = self.hi.round();
        if hi == self.hi {
            let lo = self.lo.round();
            let (hi, lo) = quick_two_sum(hi, lo);
            Self { hi, lo }
        } else {
            // hi is not an integer, so lo cannot move the rounding unless
            // hi sits exactly on a half.
            if (hi - self.hi).abs() == 0.5 && self.lo != 0.0 {
                let hi = if self.lo > 0.0 { self.hi.ceil() } else { self.hi.floor() };
                Self { hi, lo: 0.0 }
            } else {
                Self { hi, lo: 0.0 }
            }
        }
    }

    pub fn is_integer(self) -> bool {
        self.hi.fract() == 0.0 && self.lo.fract() == 0.0
    }

    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 {
            return Self::ZERO;
        }
        if self.hi < 0.0 {
            return Self::from_f64(f64::NAN);
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let corr = (self - Self::from_f64(ax).sqr()).hi * (x * 0.5);
        Self::from_sum(ax, corr)
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let mut base = self;
        let mut k = n.unsigned_abs();
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    // exp(r) - 1 for |r| <= ln(2)/2, accurate in relative terms.
    fn expm1_reduced(r: Self) -> Self {
        const SCALE_BITS: i32 = 10;
        let r = r.ldexp(-SCALE_BITS);
        // Taylor series of e^r - 1; |r| < 3.4e-4 so 10 terms reach 2^-104.
        let mut s = r;
        let mut term = r;
        for k in 2..=10 {
            term = (term * r).div_f64(k as f64);
            s += term;
            if term.hi.abs() < 1e-36 * s.hi.abs() {
                break;
            }
        }
        // (1+s)^2 - 1 = 2s + s^2
        for _ in 0..SCALE_BITS {
            s = s.ldexp(1) + s.sqr();
        }
        s
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.78 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Self::ZERO;
        }
        if self.hi == 0.0 {
            return Self::ONE;
        }
        let k = (self.hi / Self::LN_2.hi).round();
        let r = self - Self::LN_2.mul_f64(k);
        let s = Self::expm1_reduced(r) + Self::ONE;
        // Split the scaling so that 2^k never overflows on its own.
        let k = k as i32;
        if k > 1000 {
            s.ldexp(k - 100).ldexp(100)
        } else if k < -1000 {
            s.ldexp(k + 100).ldexp(-100)
        } else {
            s.ldexp(k)
        }
    }

    pub fn exp_m1(self) -> Self {
        if self.hi.abs() <= 0.346 {
            Self::expm1_reduced(self)
        } else {
            self.exp() - Self::ONE
        }
    }

    /// Natural logarithm; one Newton step on `exp` from the binary64 estimate.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        if self.hi == 1.0 && self.lo == 0.0 {
            return Self::ZERO;
        }
        let x0 = Self::from_f64(self.hi.ln());
        x0 + self * (-x0).exp() - Self::ONE
    }

    // sin and cos for |t| <= pi/4.
    fn sin_cos_reduced(t: Self) -> (Self, Self) {
        if t.hi == 0.0 {
            return (Self::ZERO, Self::ONE);
        }
        let t2 = t.sqr();
        let mut sin = t;
        let mut term = t;
        let mut k = 1.0;
        loop {
            term = -(term * t2).div_f64((k + 1.0) * (k + 2.0));
            sin += term;
            k += 2.0;
            if term.hi.abs() < 1e-35 * t.hi.abs() || k > 60.0 {
                break;
            }
        }
        // cos from sin is ill-conditioned near zero; sum its own series.
        let mut cos = Self::ONE;
        let mut term = Self::ONE;
        let mut k = 0.0;
        loop {
            term = -(term * t2).div_f64((k + 1.0) * (k + 2.0));
            cos += term;
            k += 2.0;
            if term.hi.abs() < 1e-35 || k > 60.0 {
                break;
            }
        }
        (sin, cos)
    }

    pub fn sin_cos(self) -> (Self, Self) {
        if !self.is_finite() {
            let nan = Self::from_f64(f64::NAN);
            return (nan, nan);
        }
        let z = (self / Self::TWO_PI).round();
        let r = self - Self::TWO_PI * z;
        let j = (r.hi / Self::FRAC_PI_2.hi).round();
        let t = r - Self::FRAC_PI_2.mul_f64(j);
        let (s, c) = Self::sin_cos_reduced(t);
        match (j as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }

    /// Four-quadrant arctangent of `self / x`, refined from the binary64 value
    /// by one Newton step.
    pub fn atan2(self, x: Self) -> Self {
        let y = self;
        if x.hi == 0.0 && y.hi == 0.0 {
            return Self::ZERO;
        }
        if y.hi == 0.0 {
            return if x.hi > 0.0 { Self::ZERO } else { Self::PI };
        }
        if x.hi == 0.0 {
            return if y.hi > 0.0 { Self::FRAC_PI_2 } else { -Self::FRAC_PI_2 };
        }
        let theta = Self::from_f64(y.hi.atan2(x.hi));
        let (s, c) = theta.sin_cos();
        // tan(phi - theta) = (y c - x s) / (x c + y s)
        let num = y * c - x * s;
        let den = x * c + y * s;
        let d = num / den;
        // d is ~1e-16, so atan(d) = d - d^3/3 is exact to 1e-48.
        theta + d - d * d.sqr().div_f64(3.0)
    }

    /// 10^n, exact for |n| <= 22 and correctly rounded to ~1e-31 beyond.
    pub fn pow10(n: i32) -> Self {
        Self::from_f64(10.0).powi(n)
    }

    /// Parses a decimal literal such as `-1.25e-3` without an intermediate
    /// binary64 rounding, so that `0.1` is the double-double nearest 1/10.
    pub fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        let (neg, body) = match s.as_bytes().first()? {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
            None => (body, 0),
        };
        let lower = mant.to_ascii_lowercase();
        if lower == "inf" || lower == "infinity" || lower == "nan" {
            return None;
        }
        let mut digits = Self::ZERO;
        let mut frac_digits = 0i32;
        let mut seen_point = false;
        let mut seen_digit = false;
        for ch in mant.chars() {
            match ch {
                '0'..='9' => {
                    seen_digit = true;
                    digits = digits.mul_f64(10.0).add_f64(f64::from(ch as u8 - b'0'));
                    if seen_point {
                        frac_digits += 1;
                    }
                }
                '.' if !seen_point => seen_point = true,
                '_' => {}
                _ => return None,
            }
        }
        if !seen_digit {
            return None;
        }
        let e = exp - frac_digits;
        let v = if e >= 0 { digits * Self::pow10(e) } else { digits / Self::pow10(-e) };
        if !v.is_finite() {
            return None;
        }
        Some(if neg { -v } else { v })
    }

    /// Scientific notation with `sig` significant digits, e.g.
    /// `1.2345e-3` for `sig = 5`. Exponent has no padding or `+` sign.
    pub fn to_sci_string(self, sig: usize) -> String {
        let sig = sig.max(1);
        if !self.is_finite() {
            return format!("{}", self.hi);
        }
        let mut out = String::new();
        if self.hi.is_sign_negative() && self.hi != 0.0 {
            out.push('-');
        }
        if self.hi == 0.0 {
            out.push('0');
            if sig > 1 {
                out.push('.');
                out.extend(std::iter::repeat_n('0', sig - 1));
            }
            out.push_str("e0");
            return out;
        }
        let x = self.abs();
        let mut e = x.hi.log10().floor() as i32;
        let mut r = if e >= 0 { x / Self::pow10(e) } else { x * Self::pow10(-e) };
        if r.hi >= 10.0 {
            r = r.div_f64(10.0);
            e += 1;
        } else if r.hi < 1.0 {
            r = r.mul_f64(10.0);
            e -= 1;
        }
        let mut digits = Vec::with_capacity(sig + 2);
        for _ in 0..sig + 2 {
            let d = r.hi.floor().clamp(0.0, 9.0);
            digits.push(d as u8);
            r = (r - Self::from_f64(d)).mul_f64(10.0);
            if r.hi < 0.0 {
                // undo a floor that landed one too high through lo
                r = Self::ZERO;
            }
        }
        let round_up =
            digits[sig] > 5 || (digits[sig] == 5 && (digits[sig + 1] > 0 || r.hi > 0.0 || digits[sig - 1] % 2 == 1));
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.truncate(sig);
                    e += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
        out.push((b'0' + digits[0]) as char);
        if sig > 1 {
            out.push('.');
            for d in &digits[1..] {
                out.push((b'0' + d) as char);
            }
        }
        out.push('e');
        out.push_str(&e.to_string());
        out
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl From<i32> for DoubleDouble {
    fn from(x: i32) -> Self {
        Self::from_f64(f64::from(x))
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() || b.hi == 0.0 {
            return Self::from_f64(q1);
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 }.add_f64(q3)
    }
}

impl AddAssign for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for DoubleDouble {
    #[inline]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for DoubleDouble {
    #[inline]
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().map(|p| p + 1).unwrap_or(32);
        f.write_str(&self.to_sci_string(sig))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(s: &str) -> DoubleDouble {
        DoubleDouble::parse_decimal(s).unwrap()
    }

    fn rel(a: DoubleDouble, b: DoubleDouble) -> f64 {
        ((a - b).abs() / b.abs()).hi
    }

    const PI_40: &str = "3.141592653589793238462643383279502884197";
    const E_40: &str = "2.718281828459045235360287471352662497757";
    const LN2_40: &str = "0.6931471805599453094172321214581765680755";

    #[test]
    fn constants_match_decimal_expansions() {
        assert!(rel(DoubleDouble::PI, dd(PI_40)) < 1e-31);
        assert!(rel(DoubleDouble::E, dd(E_40)) < 1e-31);
        assert!(rel(DoubleDouble::LN_2, dd(LN2_40)) < 1e-31);
    }

    #[test]
    fn one_tenth_times_ten_is_one() {
        let tenth = dd("0.1");
        assert!(((tenth.mul_f64(10.0)) - DoubleDouble::ONE).abs().hi < 1e-31);
        assert_eq!(dd("1e3").hi, 1000.0);
        assert_eq!(dd("-2.5").hi, -2.5);
        assert!(DoubleDouble::parse_decimal("abc").is_none());
        assert!(DoubleDouble::parse_decimal("").is_none());
        assert!(DoubleDouble::parse_decimal("nan").is_none());
    }

    #[test]
    fn exp_and_ln_are_inverse() {
        assert!(rel(DoubleDouble::ONE.exp(), dd(E_40)) < 1e-31);
        assert!(rel(dd("2").ln(), dd(LN2_40)) < 1e-31);
        for s in ["0.3", "-7.25", "31.5", "1e-5", "123.456"] {
            // ln near 1 is only absolutely accurate
            let x = dd(s);
            assert!((x.exp().ln() - x).abs().hi < 1e-30 * x.abs().hi.max(1.0), "{s}");
        }
        // e^-30 * e^30 = 1
        let p = dd("30").exp() * dd("-30").exp();
        assert!((p - DoubleDouble::ONE).abs().hi < 1e-30);
    }

    #[test]
    fn exp_m1_keeps_relative_accuracy_near_zero() {
        let x = dd("1e-20");
        let r = x.exp_m1();
        // e^x - 1 = x + x^2/2 + ...
        let expected = x + x.sqr().div_f64(2.0);
        assert!(rel(r, expected) < 1e-30);
    }

    #[test]
    fn sin_cos_of_pi_fractions() {
        let (s, c) = DoubleDouble::PI.div_f64(6.0).sin_cos();
        assert!(rel(s, dd("0.5")) < 1e-30);
        assert!(rel(c, dd("3").sqrt().div_f64(2.0)) < 1e-30);
        let (s, c) = (DoubleDouble::PI.mul_f64(2.5)).sin_cos();
        assert!((s - DoubleDouble::ONE).abs().hi < 1e-30);
        assert!(c.abs().hi < 1e-30);
        let x = dd("-17.3");
        let (s, c) = x.sin_cos();
        assert!((s.sqr() + c.sqr() - DoubleDouble::ONE).abs().hi < 1e-30);
    }

    #[test]
    fn atan2_quadrants() {
        let one = DoubleDouble::ONE;
        assert!(rel(one.atan2(one), DoubleDouble::PI.div_f64(4.0)) < 1e-30);
        assert!(rel(one.atan2(-one), DoubleDouble::PI.mul_f64(0.75)) < 1e-30);
        assert!(rel((-one).atan2(-one), -DoubleDouble::PI.mul_f64(0.75)) < 1e-30);
        let y = dd("0.3");
        let x = dd("0.7");
        let t = y.atan2(x);
        let (s, c) = t.sin_cos();
        assert!(rel(s / c, y / x) < 1e-30);
    }

    #[test]
    fn sqrt_and_powers() {
        let two = dd("2");
        assert!(rel(two.sqrt().sqr(), two) < 1e-31);
        assert_eq!(dd("3").powi(4).hi, 81.0);
        assert!(rel(dd("10").powi(-3), dd("0.001")) < 1e-31);
        assert!(rel(DoubleDouble::pow10(40), dd("1e40")) < 1e-31);
    }

    #[test]
    fn floor_round_and_integer_checks() {
        assert_eq!(dd("-2.5").floor().hi, -3.0);
        assert_eq!(dd("2.4").round().hi, 2.0);
        assert!(dd("-4").is_integer());
        assert!(!dd("-4.000000000000000000000001").is_integer());
        let x = DoubleDouble::new(4.0, -1e-20);
        assert_eq!(x.floor().hi + x.floor().lo, 3.0);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(DoubleDouble::ONE.to_sci_string(5), "1.0000e0");
        assert_eq!(dd("-0.00123456").to_sci_string(3), "-1.23e-3");
        assert_eq!(dd("9.9999").to_sci_string(3), "1.00e1");
        assert_eq!(DoubleDouble::ZERO.to_sci_string(3), "0.00e0");
        assert_eq!(dd(PI_40).to_sci_string(20), "3.1415926535897932385e0");
        assert_eq!(dd(E_40).to_sci_string(25), "2.718281828459045235360287e0");
        assert_eq!(dd("0.1").to_sci_string(20), "1.0000000000000000000e-1");
        assert_eq!(dd("1e100").to_sci_string(4), "1.000e100");
    }

    #[test]
    fn arithmetic_keeps_thirty_digits_across_magnitudes() {
        for s in ["1e-100", "3.7e-42", "0.1", "7.123", "6.02e23", "9.9e99"] {
            let a = dd(s);
            let b = dd("1.000000000000000000000000000001");
            let q = (a * b) / b;
            assert!(rel(q, a) < 1e-30, "{s}");
            let d = (a + a.mul_f64(1e-20)) - a;
            assert!(rel(d, a.mul_f64(1e-20)) < 1e-12, "{s}");
        }
    }
}
