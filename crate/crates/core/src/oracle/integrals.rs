//! Quadrature of
//!
//! ```text
//! Γ(b)/(Γ(a)Γ(b-a)) ∫_0^1 t^{a-1} (1-t)^{b-a-1} F(xt) dt
//! 1/Γ(a_0) ∫_0^∞ t^{a_0-1} e^{-t} F(xt) dt
//! ```
//!
//! Algebraic endpoint factors are removed by a power substitution
//! `t = h s^k` with `k` large enough that the transformed integrand behaves
//! like `s^e`, `Re e >= 7`, which Gauss–Legendre integrates to roughly
//! double-double accuracy at the default order. The Euler integral splits at
//! 1/2 and substitutes at both ends. The Laplace integral is split at 1 and
//! at `T = 8c`: `[1, T]` takes plain Gauss–Legendre and the tail goes to
//! Gauss–Laguerre after `t = T + c v` with `c = 1/(1 - max(Re x, 0))`, so
//! that the `e^{(x-1)t}` behavior of the integrand matches the weight. Starting
//! the tail at `T` rather than 1 keeps the branch point at `t = 0` far from
//! the Laguerre nodes (`v = -8`), which the rule's convergence rate needs.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{gamma, ComplexEP, DoubleDouble};
use crate::series::{eval_series_scaled, EvalResult, HyperSpec, TruncationPolicy};

use super::rules::{cached_rule, QuadratureRule, RuleKind, MAX_ORDER};

pub const DEFAULT_LEGENDRE_ORDER: usize = 128;
pub const DEFAULT_LAGUERRE_ORDER: usize = 96;
/// Lower bound on the relative tolerance of the order-doubling check;
/// the series tolerance is usually far below what quadrature can confirm.
pub const QUADRATURE_TOL_FLOOR: f64 = 1e-12;

const MAX_POWER: f64 = 64.0;
/// Laguerre nodes whose weight is below this are skipped.
const NEGLIGIBLE_WEIGHT: f64 = 1e-60;
const INNER_MAX_ORDER: usize = 20_000;
/// Start of the Laguerre tail in units of `c`.
const TAIL_START: f64 = 8.0;

// Exponent k of the substitution for an endpoint factor t^{alpha-1}.
fn power_for(alpha: ComplexEP) -> f64 {
    (8.0 / alpha.re.to_f64()).ceil().clamp(1.0, MAX_POWER)
}

// base^w for real base > 0, principal branch.
fn real_pow(base: DoubleDouble, w: ComplexEP) -> ComplexEP {
    w.scale(base.ln()).exp()
}

#[derive(Default)]
struct Partial {
    value: ComplexEP,
    inner_error: f64,
    evaluations: usize,
}

impl Partial {
    fn add(&mut self, coef: ComplexEP, inner: &EvalResult) {
        self.value += coef * inner.value;
        self.inner_error += coef.abs_f64() * inner.abs_error_estimate;
        self.evaluations += 1;
    }
}

fn inner_policy(policy: &TruncationPolicy) -> TruncationPolicy {
    TruncationPolicy { max_order: policy.max_order.max(INNER_MAX_ORDER), ..*policy }
}

fn require_kind(rule: &QuadratureRule, kind: RuleKind) -> Result<()> {
    if rule.kind != kind {
        return Err(Error::InvalidParameter(format!("expected a {kind} rule, got {}", rule.kind)));
    }
    Ok(())
}

fn rule_at(base: &QuadratureRule, order: usize) -> Result<Arc<QuadratureRule>> {
    if order == base.order {
        Ok(Arc::new(base.clone()))
    } else {
        cached_rule(base.kind, order)
    }
}

// Runs `integrate` at the base orders and at their doubling; one further
// doubling is allowed if the first pair disagrees.
fn converge<F>(policy: &TruncationPolicy, base_orders: &[usize], integrate: F) -> Result<EvalResult>
where
    F: Fn(&[usize]) -> Result<Partial>,
{
    let tol = policy.tol.max(QUADRATURE_TOL_FLOOR);
    let mut orders = base_orders.to_vec();
    let mut previous = integrate(&orders)?;
    let mut evaluations = previous.evaluations;
    for _ in 0..2 {
        let doubled: Vec<usize> = orders.iter().map(|&n| (2 * n).min(MAX_ORDER)).collect();
        if doubled == orders {
            break;
        }
        let current = integrate(&doubled)?;
        evaluations += current.evaluations;
        let diff = (current.value - previous.value).abs_f64();
        if diff <= 10.0 * tol * current.value.abs_f64() {
            return Ok(EvalResult {
                value: current.value,
                abs_error_estimate: diff + current.inner_error,
                terms_used: evaluations,
                truncation_order: doubled[0],
                terminated_exactly: false,
            });
        }
        orders = doubled;
        previous = current;
    }
    Err(Error::QuadratureNonConvergence(format!(
        "quadrature did not settle to {:.1e} relative by order {}",
        10.0 * tol,
        orders[0]
    )))
}

/// Euler integral over the last parameter pair `(a, b)` of a p+1Fp+1 or
/// p+2Fp+1; the remaining parameters form the inner function.
pub fn euler_integral(spec: &HyperSpec, rule: &QuadratureRule, policy: &TruncationPolicy) -> Result<EvalResult> {
    require_kind(rule, RuleKind::Legendre01)?;
    policy.validate()?;
    let (num, den) = (spec.numerator(), spec.denominator());
    let shape_ok = !den.is_empty() && (num.len() == den.len() || num.len() == den.len() + 1);
    if !shape_ok {
        return Err(Error::InvalidParameter(format!(
            "the Euler integral needs a p+1Fp+1 or p+2Fp+1, got {}F{}",
            num.len(),
            den.len()
        )));
    }
    let x = spec.argument();
    let a = num[num.len() - 1];
    let b = den[den.len() - 1];
    let beta = b - a;
    if !(a.re.hi > 0.0 && beta.re.hi > 0.0) {
        return Err(Error::Domain(format!("the Euler integral requires Re(b) > Re(a) > 0, got a = {a}, b = {b}")));
    }
    if num.len() == den.len() + 1 && x.abs_f64() >= 1.0 {
        return Err(Error::Domain(format!(
            "the Euler integral of a p+2Fp+1 requires |x| < 1, got |x| = {}",
            x.abs_f64()
        )));
    }
    let inner = HyperSpec::new(num[..num.len() - 1].to_vec(), den[..den.len() - 1].to_vec(), ComplexEP::ZERO)?;
    let norm = gamma(b)? / (gamma(a)? * gamma(beta)?);
    let ipol = inner_policy(policy);
    let half = DoubleDouble::from_f64(0.5);
    let (ka, kb) = (power_for(a), power_for(beta));
    // k h^alpha of each half's substitution
    let left_scale = real_pow(half, a).scale_f64(ka);
    let right_scale = real_pow(half, beta).scale_f64(kb);
    let (a_m1, beta_m1) = (a.add_f64(-1.0), beta.add_f64(-1.0));
    let (ea, eb) = (a.scale_f64(ka).add_f64(-1.0), beta.scale_f64(kb).add_f64(-1.0));

    let integrate = |orders: &[usize]| -> Result<Partial> {
        let r = rule_at(rule, orders[0])?;
        let mut out = Partial::default();
        for &(s, w) in &r.nodes {
            // left half: t = s^ka / 2
            let t = s.powi(ka as i32).mul_f64(0.5);
            let coef = left_scale * real_pow(s, ea) * real_pow(DoubleDouble::ONE - t, beta_m1);
            let f = eval_series_scaled(&inner.with_argument(x.scale(t)), &ipol, ComplexEP::ZERO)?;
            out.add(coef.scale(w), &f);
            // right half: 1 - t = s^kb / 2
            let u = s.powi(kb as i32).mul_f64(0.5);
            let t = DoubleDouble::ONE - u;
            let coef = right_scale * real_pow(s, eb) * real_pow(t, a_m1);
            let f = eval_series_scaled(&inner.with_argument(x.scale(t)), &ipol, ComplexEP::ZERO)?;
            out.add(coef.scale(w), &f);
        }
        out.value *= norm;
        out.inner_error *= norm.abs_f64();
        Ok(out)
    };
    converge(policy, &[rule.order], integrate)
}

pub fn euler_integral_default(spec: &HyperSpec, policy: &TruncationPolicy) -> Result<EvalResult> {
    euler_integral(spec, &*cached_rule(RuleKind::Legendre01, DEFAULT_LEGENDRE_ORDER)?, policy)
}

/// Laplace integral over the first numerator `a_0` of a p+1Fp; `rule` is
/// the Gauss–Laguerre rule for the tail beyond t = 1.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn laplace_integral(spec: &HyperSpec, rule: &QuadratureRule, policy: &TruncationPolicy) -> Result<EvalResult> {
    require_kind(rule, RuleKind::Laguerre0Inf)?;
    policy.validate()?;
    let (num, den) = (spec.numerator(), spec.denominator());
    if num.len() != den.len() + 1 {
        return Err(Error::InvalidParameter(format!(
            "the Laplace integral needs a p+1Fp, got {}F{}",
            num.len(),
            den.len()
        )));
    }
    let x = spec.argument();
    let a0 = num[0];
    if !(a0.re.hi > 0.0) {
        return Err(Error::Domain(format!("the Laplace integral requires Re(a0) > 0, got {a0}")));
    }
    if x.abs_f64() >= 1.0 {
        return Err(Error::Domain(format!("the Laplace integral requires |x| < 1, got |x| = {}", x.abs_f64())));
    }
    let inner = HyperSpec::new(num[1..].to_vec(), den.to_vec(), ComplexEP::ZERO)?;
    let norm = gamma(a0)?.recip();
    let ipol = inner_policy(policy);
    let k = power_for(a0);
    let e0 = a0.scale_f64(k).add_f64(-1.0);
    let a_m1 = a0.add_f64(-1.0);
    let c = DoubleDouble::ONE / (DoubleDouble::ONE - DoubleDouble::from_f64(x.re.to_f64().max(0.0)));
    let ln_c = c.ln();
    let split = c.mul_f64(TAIL_START);
    let width = split - DoubleDouble::ONE;

    let integrate = |orders: &[usize]| -> Result<Partial> {
        let legendre = cached_rule(RuleKind::Legendre01, orders[0])?;
        let tail = rule_at(rule, orders[1])?;
        let mut out = Partial::default();
        for &(s, w) in &legendre.nodes {
            // [0, 1] with t = s^k
            let t = s.powi(k as i32);
            let coef = real_pow(s, e0).scale(w.mul_f64(k) * (-t).exp());
            let f = eval_series_scaled(&inner.with_argument(x.scale(t)), &ipol, ComplexEP::ZERO)?;
            out.add(coef, &f);
            // [1, T]
            let t = DoubleDouble::ONE + width * s;
            let log_coef = a_m1.scale(t.ln()).add_real((w * width).ln() - t);
            let f = eval_series_scaled(&inner.with_argument(x.scale(t)), &ipol, log_coef)?;
            out.add(ComplexEP::ONE, &f);
        }
        // [T, ∞) with t = T + c v against e^{-v}
        for &(v, w) in &tail.nodes {
            if w.hi < NEGLIGIBLE_WEIGHT {
                continue;
            }
            let t = split + c * v;
            let log_coef = a_m1.scale(t.ln()).add_real(ln_c + w.ln() - split - (c - DoubleDouble::ONE) * v);
            let f = eval_series_scaled(&inner.with_argument(x.scale(t)), &ipol, log_coef)?;
            out.add(ComplexEP::ONE, &f);
        }
        out.value *= norm;
        out.inner_error *= norm.abs_f64();
        Ok(out)
    };
    converge(policy, &[DEFAULT_LEGENDRE_ORDER, rule.order], integrate)
}

pub fn laplace_integral_default(spec: &HyperSpec, policy: &TruncationPolicy) -> Result<EvalResult> {
    laplace_integral(spec, &*cached_rule(RuleKind::Laguerre0Inf, DEFAULT_LAGUERRE_ORDER)?, policy)
}
