//! Right-hand sides of the addition formulas and the Kummer/Euler-type
//! transformations.
//!
//! All four share one shape: a prefactor times a p-fold sum over
//! multi-indices `j` of
//!
//! ```text
//! [(a_0)_{u_p}] * prod_q (b_q - a_q)_{j_q} (a_q)_{u_{q-1}} / ((b_q)_{u_q} j_q!) * w^{j_q}
//!     * F(shifted parameters; z)
//! ```
//!
//! where `w` is `-x` or `x/(x-1)` and the optional `(a_0)_{u_p}` factor is
//! present for the p+1Fp family. The sum is taken shell by shell in
//! increasing total order `u_p` and stopped with the same quiet rule as the
//! direct series, applied to whole shells.

use num_complex::Complex64;

use super::shells::Shell;
use super::{AdditionInput, Theorem};
use crate::error::{Error, Result};
use crate::numerics::{CompensatedAccumulator, ComplexEP, DoubleDouble};
use crate::series::{sum_terms, EvalResult, HyperSpec, Precision, SumOptions, TruncationPolicy, POLE_TOLERANCE};

/// Ratio of double-double to binary64 rounding error at which an inner
/// function is tried in binary64 first.
const BINARY64_TRIAL_MARGIN: f64 = 1e-13;

/// A prefactor times a shell-ordered p-fold sum of shifted pFq values.
#[derive(Clone, Debug)]
pub(crate) struct OuterSum {
    /// `(a_q, b_q)` for the summed slots, q = 1..p.
    pub slots: Vec<(ComplexEP, ComplexEP)>,
    /// Power base `w` of the multi-sum.
    pub ratio: ComplexEP,
    /// `a_0` of the p+1Fp family; contributes `(a_0)_{u_p}` outside and
    /// `a_0 + u_p` as the first inner numerator.
    pub head: Option<ComplexEP>,
    /// Extra inner parameter pair appended unshifted (numerator, denominator).
    pub tail: Option<(ComplexEP, ComplexEP)>,
    pub inner_argument: ComplexEP,
    pub log_prefactor: ComplexEP,
}

// Lazily extended coefficient tables for one slot.
struct SlotTable {
    /// (b_q - a_q)_n w^n / n!
    diff: Vec<ComplexEP>,
    /// (alpha_q)_n / (b_q)_n with alpha_q the next slot's a (or a_0, or none)
    ratio: Vec<ComplexEP>,
    diff_base: ComplexEP,
    alpha: Option<ComplexEP>,
    b: ComplexEP,
}

impl SlotTable {
    fn new(diff_base: ComplexEP, alpha: Option<ComplexEP>, b: ComplexEP) -> Self {
        Self { diff: vec![ComplexEP::ONE], ratio: vec![ComplexEP::ONE], diff_base, alpha, b }
    }

    fn extend_to(&mut self, n: usize, w: ComplexEP) {
        while self.diff.len() <= n {
            let k = self.diff.len() - 1;
            let kf = k as f64;
            let next = self.diff[k] * self.diff_base.add_f64(kf) * w;
            self.diff.push(next.scale(DoubleDouble::ONE.div_f64(kf + 1.0)));
        }
        while self.ratio.len() <= n {
            let k = self.ratio.len() - 1;
            let kf = k as f64;
            let up = match self.alpha {
                Some(a) => self.ratio[k] * a.add_f64(kf),
                None => self.ratio[k],
            };
            self.ratio.push(up / self.b.add_f64(kf));
        }
    }
}

struct Contribution {
    value: ComplexEP,
    abs_error: f64,
}

impl OuterSum {
    fn p(&self) -> usize {
        self.slots.len()
    }

    /// Upper bounds on `j_q` from `b_q - a_q = -m_q`.
    fn slot_bounds(&self) -> Vec<Option<usize>> {
        self.slots.iter().map(|&(a, b)| (b - a).near_nonpositive_integer(POLE_TOLERANCE).map(|m| m as usize)).collect()
    }

    /// Largest total order with a nonzero coefficient, when finite.
    fn finite_order(&self, bounds: &[Option<usize>]) -> Option<usize> {
        let from_slots = bounds.iter().try_fold(0usize, |acc, b| b.map(|m| acc + m));
        let from_head = self.head.and_then(|a0| a0.near_nonpositive_integer(POLE_TOLERANCE)).map(|m| m as usize);
        match (from_slots, from_head) {
            (Some(s), Some(h)) => Some(s.min(h)),
            (s, h) => s.or(h),
        }
    }

    pub fn evaluate(&self, policy: &TruncationPolicy) -> Result<EvalResult> {
        policy.validate()?;
        let p = self.p();
        if p == 0 {
            return Err(Error::InvalidParameter("the multi-sum needs p >= 1".into()));
        }
        let prefactor = if self.log_prefactor.is_zero() { ComplexEP::ONE } else { self.log_prefactor.exp() };
        if !prefactor.is_finite() {
            return Err(Error::OutOfRange(format!("prefactor exp({}) overflows", self.log_prefactor)));
        }

        let mut tables: Vec<SlotTable> = (0..p)
            .map(|q| {
                let (a, b) = self.slots[q];
                let alpha = if q + 1 < p { Some(self.slots[q + 1].0) } else { self.head };
                SlotTable::new(b - a, alpha, b)
            })
            .collect();
        let bounds = self.slot_bounds();
        let finite = self.finite_order(&bounds);
        let shell_bounds = if bounds.iter().any(Option::is_some) { Some(bounds.clone()) } else { None };

        let mut inner_num = vec![ComplexEP::ZERO; p + 2];
        let mut inner_den = vec![ComplexEP::ZERO; p + 1];
        let mut acc = CompensatedAccumulator::new();
        let mut largest_inner = 0.0f64;
        let mut terms = 0usize;
        let mut abs_mass = 0.0f64;
        let mut inner_error = 0.0f64;
        let mut recent = Vec::with_capacity(policy.quiet_shells);
        let mut quiet = 0usize;
        let mut order = 0usize;

        loop {
            if let Some(last) = finite {
                if order > last {
                    let err = inner_error + DoubleDouble::EPSILON * 8.0 * abs_mass;
                    return Ok(self.finish(prefactor, acc.value(), err, terms, last, true));
                }
            }
            if order > policy.max_shell_order {
                return Err(Error::NoConvergence {
                    order,
                    detail: format!(
                        "multi-sum shells still above {:.3e} after total order {}",
                        policy.tol * acc.primary.abs_f64().max(1.0),
                        policy.max_shell_order
                    ),
                });
            }
            for t in &mut tables {
                t.extend_to(order, self.ratio);
            }
            let shell_size = binomial_f64(order + p - 1, p - 1);
            let budget = 0.1 * policy.tol * acc.primary.abs_f64().max(1.0) / shell_size;
            let mut shell_abs = 0.0f64;

            for idx in Shell::new(p, order, shell_bounds.clone()) {
                terms += 1;
                let j = idx.j();
                let u = idx.u();
                let mut coef = ComplexEP::ONE;
                for (q, t) in tables.iter().enumerate() {
                    coef *= t.diff[j[q]] * t.ratio[u[q + 1]];
                }
                if coef.is_zero() {
                    continue;
                }
                let (nn, nd) = self.fill_inner(u, &mut inner_num, &mut inner_den);
                let c = self.inner_value(
                    &inner_num[..nn],
                    &inner_den[..nd],
                    coef.abs_f64(),
                    budget,
                    &mut largest_inner,
                    policy,
                )?;
                let contrib = coef * c.value;
                if !contrib.is_finite() {
                    return Err(Error::OutOfRange(format!("multi-sum term at order {order} overflows")));
                }
                acc.add(contrib);
                let size = contrib.abs_f64();
                shell_abs += size;
                abs_mass += size;
                inner_error += coef.abs_f64() * c.abs_error;
            }

            if finite.is_none() {
                if recent.len() == policy.quiet_shells {
                    recent.remove(0);
                }
                recent.push(shell_abs);
                if shell_abs < policy.tol * acc.primary.abs_f64().max(1.0) {
                    quiet += 1;
                } else {
                    quiet = 0;
                }
                if quiet >= policy.quiet_shells {
                    let truncation = recent.iter().sum::<f64>() + 2.0 * shell_abs;
                    let err = truncation + inner_error + DoubleDouble::EPSILON * 8.0 * abs_mass;
                    return Ok(self.finish(prefactor, acc.value(), err, terms, order, false));
                }
            }
            order += 1;
        }
    }

    fn finish(
        &self,
        prefactor: ComplexEP,
        sum: ComplexEP,
        err: f64,
        terms: usize,
        order: usize,
        exact: bool,
    ) -> EvalResult {
        let scale = prefactor.abs_f64();
        EvalResult {
            value: prefactor * sum,
            abs_error_estimate: err * scale,
            terms_used: terms,
            truncation_order: order,
            terminated_exactly: exact,
        }
    }

    fn fill_inner(&self, u: &[usize], num: &mut [ComplexEP], den: &mut [ComplexEP]) -> (usize, usize) {
        let p = self.p();
        let mut n = 0;
        if let Some(a0) = self.head {
            num[n] = a0.add_f64(u[p] as f64);
            n += 1;
        }
        for q in 0..p {
            num[n] = self.slots[q].0.add_f64(u[q] as f64);
            n += 1;
            den[q] = self.slots[q].1.add_f64(u[q + 1] as f64);
        }
        let mut d = p;
        if let Some((tn, td)) = self.tail {
            num[n] = tn;
            n += 1;
            den[d] = td;
            d += 1;
        }
        (n, d)
    }

    // Evaluates one shifted inner function to the absolute accuracy its
    // coefficient requires. Binary64 is tried first when its rounding error,
    // scaled by the coefficient, is expected to sit below the budget.
    fn inner_value(
        &self,
        num: &[ComplexEP],
        den: &[ComplexEP],
        coef_abs: f64,
        budget: f64,
        largest_inner: &mut f64,
        policy: &TruncationPolicy,
    ) -> Result<Contribution> {
        let terminate_after =
            num.iter().filter_map(|a| a.near_nonpositive_integer(POLE_TOLERANCE)).min().map(|m| m as usize);
        let opts = SumOptions {
            tol: policy.tol / 10.0,
            max_order: policy.max_order,
            quiet: policy.quiet_shells,
            terminate_after,
            abs_floor: budget / (10.0 * coef_abs),
        };
        let z = self.inner_argument;
        let try_binary64 = match policy.precision {
            Precision::Binary64 => true,
            Precision::Extended => coef_abs * largest_inner.max(1.0) * BINARY64_TRIAL_MARGIN < budget,
        };
        if try_binary64 {
            let r = sum_terms::<Complex64>(num, den, z, ComplexEP::ONE, &opts)?;
            if policy.precision == Precision::Binary64 || coef_abs * r.abs_error_estimate <= budget {
                *largest_inner = largest_inner.max(r.value.abs_f64());
                return Ok(Contribution { value: r.value, abs_error: r.abs_error_estimate });
            }
        }
        let r = sum_terms::<ComplexEP>(num, den, z, ComplexEP::ONE, &opts)?;
        *largest_inner = largest_inner.max(r.value.abs_f64());
        Ok(Contribution { value: r.value, abs_error: r.abs_error_estimate })
    }
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Domain checks for the p+1Fp addition formula. Returns whether only the
/// relaxed gate holds.
// negated so that NaN fails the gate
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub(crate) fn check_th2_domain(x: ComplexEP, y: ComplexEP, relaxed: bool) -> Result<bool> {
    let sum = (x + y).abs_f64();
    let ay = y.abs_f64();
    let ax = x.abs_f64();
    let re_x = x.re.to_f64();
    let one_minus_x = (ComplexEP::ONE - x).abs_f64();
    if !(sum < 1.0) {
        return Err(Error::Domain(format!("Theorem 2 requires |x+y| < 1, got {sum}")));
    }
    if !(re_x < 0.5) {
        return Err(Error::Domain(format!("Theorem 2 requires Re(x) < 1/2, got {re_x}")));
    }
    if ay < ax {
        return Ok(false);
    }
    if relaxed && ay < one_minus_x {
        return Ok(true);
    }
    Err(Error::Domain(if relaxed {
        format!("Theorem 2 (relaxed) requires |y| < |1-x|, got |y| = {ay}, |1-x| = {one_minus_x}")
    } else {
        format!("Theorem 2 requires |y| < |x|, got |y| = {ay}, |x| = {ax}")
    }))
}

/// Domain checks for the Euler-type transformation. Returns whether only the
/// relaxed gate holds.
// negated so that NaN fails the gate
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub(crate) fn check_th4_domain(x: ComplexEP, relaxed: bool) -> Result<bool> {
    let re_x = x.re.to_f64();
    if !(re_x < 0.5) {
        return Err(Error::Domain(format!("Theorem 4 requires Re(x) < 1/2, got {re_x}")));
    }
    let ax = x.abs_f64();
    if ax < 1.0 {
        Ok(false)
    } else if relaxed {
        Ok(true)
    } else {
        Err(Error::Domain(format!("Theorem 4 requires |x| < 1, got |x| = {ax}")))
    }
}

fn pairs(num: &[ComplexEP], den: &[ComplexEP]) -> Vec<(ComplexEP, ComplexEP)> {
    num.iter().copied().zip(den.iter().copied()).collect()
}

/// Addition formula for pFp: `pFp(a; b; x+y)` as `e^x` times a p-fold sum
/// of `pFp(a_q + u_{q-1}; b_q + u_q; y)`.
pub fn th1_addition_rhs(input: &AdditionInput, policy: &TruncationPolicy) -> Result<EvalResult> {
    let (num, den) = (input.numerator(), input.denominator());
    if num.len() != den.len() || num.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "Theorem 1 needs p = q >= 1 parameters, got {} numerators and {} denominators",
            num.len(),
            den.len()
        )));
    }
    OuterSum {
        slots: pairs(num, den),
        ratio: -input.x(),
        head: None,
        tail: None,
        inner_argument: input.y(),
        log_prefactor: input.x(),
    }
    .evaluate(policy)
}

/// Addition formula for p+1Fp: numerators are `(a_0, a_1..a_p)`.
pub fn th2_addition_rhs(input: &AdditionInput, policy: &TruncationPolicy, relaxed_domain: bool) -> Result<EvalResult> {
    let (num, den) = (input.numerator(), input.denominator());
    if num.len() != den.len() + 1 || den.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "Theorem 2 needs p+1 numerators and p >= 1 denominators, got {} and {}",
            num.len(),
            den.len()
        )));
    }
    let (x, y) = (input.x(), input.y());
    check_th2_domain(x, y, relaxed_domain)?;
    let a0 = num[0];
    let x_minus_one = x.add_f64(-1.0);
    OuterSum {
        slots: pairs(&num[1..], den),
        ratio: x / x_minus_one,
        head: Some(a0),
        tail: None,
        inner_argument: -y / x_minus_one,
        log_prefactor: -(a0 * (ComplexEP::ONE - x).ln()),
    }
    .evaluate(policy)
}

/// Kummer-type transformation of p+1Fp+1 (at least two parameter pairs).
/// The multi-sum runs over the first p pairs; the last pair enters the
/// inner function as `b_{p+1} - a_{p+1}` over `b_{p+1}`.
pub fn th3_kummer_rhs(spec: &HyperSpec, policy: &TruncationPolicy) -> Result<EvalResult> {
    let (num, den) = (spec.numerator(), spec.denominator());
    if num.len() != den.len() || num.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "Theorem 3 needs a p+1Fp+1 with p >= 1, got {}F{}",
            num.len(),
            den.len()
        )));
    }
    let p = num.len() - 1;
    let x = spec.argument();
    OuterSum {
        slots: pairs(&num[..p], &den[..p]),
        ratio: -x,
        head: None,
        tail: Some((den[p] - num[p], den[p])),
        inner_argument: -x,
        log_prefactor: x,
    }
    .evaluate(policy)
}

/// Euler-type transformation of p+2Fp+1; numerators are
/// `(a_0, a_1..a_p, a_{p+1})`, denominators `(b_1..b_{p+1})`.
pub fn th4_euler_rhs(spec: &HyperSpec, policy: &TruncationPolicy, relaxed_domain: bool) -> Result<EvalResult> {
    let (num, den) = (spec.numerator(), spec.denominator());
    if num.len() != den.len() + 1 || den.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "Theorem 4 needs a p+2Fp+1 with p >= 1, got {}F{}",
            num.len(),
            den.len()
        )));
    }
    let x = spec.argument();
    check_th4_domain(x, relaxed_domain)?;
    let p = den.len() - 1;
    let a0 = num[0];
    let x_minus_one = x.add_f64(-1.0);
    let z = x / x_minus_one;
    OuterSum {
        slots: pairs(&num[1..=p], &den[..p]),
        ratio: z,
        head: Some(a0),
        tail: Some((den[p] - num[p + 1], den[p])),
        inner_argument: z,
        log_prefactor: -(a0 * (ComplexEP::ONE - x).ln()),
    }
    .evaluate(policy)
}

/// Dispatches to the right-hand side for `theorem`.
pub(crate) fn rhs_for(
    theorem: Theorem,
    input: &super::IdentityInput,
    policy: &TruncationPolicy,
    relaxed_domain: bool,
) -> Result<EvalResult> {
    use super::IdentityInput::{Addition, Transform};
    match (theorem, input) {
        (Theorem::T1, Addition(a)) => th1_addition_rhs(a, policy),
        (Theorem::T2, Addition(a)) => th2_addition_rhs(a, policy, relaxed_domain),
        (Theorem::T3, Transform(s)) => th3_kummer_rhs(s, policy),
        (Theorem::T4, Transform(s)) => th4_euler_rhs(s, policy, relaxed_domain),
        (t, _) => Err(Error::InvalidParameter(format!("{t} does not take this kind of input"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::eval_series;

    fn c(re: f64, im: f64) -> ComplexEP {
        ComplexEP::from_f64(re, im)
    }

    fn reals(v: &[f64]) -> Vec<ComplexEP> {
        v.iter().map(|&a| ComplexEP::from(a)).collect()
    }

    fn rel(a: ComplexEP, b: ComplexEP) -> f64 {
        (a - b).abs_f64() / b.abs_f64()
    }

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    fn direct(num: &[f64], den: &[f64], x: ComplexEP) -> ComplexEP {
        let spec = HyperSpec::new(reals(num), reals(den), x).unwrap();
        eval_series(&spec, &policy()).unwrap().value
    }

    #[test]
    fn t1_zero_x_is_the_inner_function() {
        let y = c(-0.7, 0.4);
        let input = AdditionInput::new(reals(&[1.1, 0.7]), reals(&[2.2, 1.9]), ComplexEP::ZERO, y).unwrap();
        let r = th1_addition_rhs(&input, &policy()).unwrap();
        assert!(rel(r.value, direct(&[1.1, 0.7], &[2.2, 1.9], y)) < 1e-28);
    }

    #[test]
    fn t1_single_pair_matches_explicit_sum() {
        // e^x sum_j (b-a)_j/(b)_j (-x)^j/j! 1F1(a; b+j; y)
        let (a, b, x, y) = (0.8, 2.3, 0.9, -0.4);
        let (ae, be) = (ComplexEP::from(a), ComplexEP::from(b));
        let mut sum = ComplexEP::ZERO;
        let mut coef = ComplexEP::ONE;
        for j in 0..80 {
            let jf = j as f64;
            let inner = HyperSpec::new(vec![ae], vec![be.add_f64(jf)], c(y, 0.0)).unwrap();
            sum += coef * eval_series(&inner, &policy()).unwrap().value;
            let ratio = (be - ae).add_f64(jf) * ComplexEP::from(-x) / (be.add_f64(jf) * ComplexEP::from(jf + 1.0));
            coef *= ratio;
        }
        let expected = sum * ComplexEP::from(x).exp();
        let input = AdditionInput::new(reals(&[a]), reals(&[b]), c(x, 0.0), c(y, 0.0)).unwrap();
        let r = th1_addition_rhs(&input, &policy()).unwrap();
        assert!(rel(r.value, expected) < 1e-26);
        assert!(rel(r.value, direct(&[a], &[b], c(x + y, 0.0))) < 1e-26);
    }

    #[test]
    fn t1_two_pairs() {
        let input = AdditionInput::new(reals(&[1.1, 0.7]), reals(&[2.2, 1.9]), c(0.8, 0.0), c(-0.5, 0.0)).unwrap();
        let r = th1_addition_rhs(&input, &policy()).unwrap();
        let lhs = direct(&[1.1, 0.7], &[2.2, 1.9], c(0.8, 0.0) + c(-0.5, 0.0));
        assert!(rel(r.value, lhs) <= 1e-12);
        assert!(r.abs_error_estimate < 1e-20);
    }

    #[test]
    fn t2_equal_pairs_reduce_to_binomial() {
        let (x, y) = (c(0.3, 0.1), c(-0.1, 0.05));
        let a0 = c(0.9, -0.2);
        let input = AdditionInput::new(vec![a0, c(1.3, 0.0)], reals(&[1.3]), x, y).unwrap();
        let r = th2_addition_rhs(&input, &policy(), false).unwrap();
        let expected = (-(a0 * (ComplexEP::ONE - x - y).ln())).exp();
        assert!(rel(r.value, expected) < 1e-27);
        assert!(r.terminated_exactly);
    }

    #[test]
    fn t2_zero_y() {
        let x = c(0.35, -0.1);
        let input = AdditionInput::new(reals(&[0.9, 1.3, 0.6]), reals(&[2.1, 1.7]), x, ComplexEP::ZERO).unwrap();
        let r = th2_addition_rhs(&input, &policy(), false).unwrap();
        assert!(rel(r.value, direct(&[0.9, 1.3, 0.6], &[2.1, 1.7], x)) <= 1e-12);
    }

    #[test]
    fn t2_gauss_case() {
        let input = AdditionInput::new(reals(&[0.9, 1.3]), reals(&[2.1]), c(0.3, 0.0), c(-0.2, 0.0)).unwrap();
        let r = th2_addition_rhs(&input, &policy(), false).unwrap();
        assert!(rel(r.value, direct(&[0.9, 1.3], &[2.1], c(0.1, 0.0))) <= 1e-12);
    }

    #[test]
    fn t2_gate_messages() {
        let bad = AdditionInput::new(reals(&[0.9, 1.3]), reals(&[2.1]), c(0.1, 0.0), c(0.2, 0.0)).unwrap();
        let err = th2_addition_rhs(&bad, &policy(), false).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(err.to_string().contains("|y| < |x|"));
        assert!(th2_addition_rhs(&bad, &policy(), true).is_ok());
        let far = AdditionInput::new(reals(&[0.9, 1.3]), reals(&[2.1]), c(0.6, 0.0), c(0.2, 0.0)).unwrap();
        assert!(th2_addition_rhs(&far, &policy(), true).is_err());
    }

    #[test]
    fn t3_reduces_to_kummer() {
        let (a2, b2, x) = (0.6, 2.4, c(0.9, 0.3));
        let spec = HyperSpec::new(reals(&[1.5, a2]), reals(&[1.5, b2]), x).unwrap();
        let r = th3_kummer_rhs(&spec, &policy()).unwrap();
        let kummer = x.exp() * direct(&[b2 - a2], &[b2], -x);
        assert!(rel(r.value, kummer) <= 1e-13);
        assert!(rel(r.value, direct(&[a2], &[b2], x)) <= 1e-13);
    }

    #[test]
    fn t3_two_pairs() {
        let spec = HyperSpec::real(&[1.2, 0.8], &[2.3, 1.7], 0.6).unwrap();
        let r = th3_kummer_rhs(&spec, &policy()).unwrap();
        assert!(rel(r.value, direct(&[1.2, 0.8], &[2.3, 1.7], c(0.6, 0.0))) <= 1e-12);
    }

    #[test]
    fn t3_terminating_pair() {
        let spec = HyperSpec::real(&[3.4, 0.8], &[1.4, 1.7], 0.6).unwrap();
        let r = th3_kummer_rhs(&spec, &policy()).unwrap();
        assert!(r.terminated_exactly);
        assert_eq!(r.terms_used, 3);
        assert_eq!(r.truncation_order, 2);
        assert!(rel(r.value, direct(&[3.4, 0.8], &[1.4, 1.7], c(0.6, 0.0))) <= 1e-13);
    }

    #[test]
    fn t3_large_negative_argument() {
        // the direct series cancels heavily here; the transformed sum does not
        let spec = HyperSpec::real(&[1.2, 0.8], &[2.3, 1.7], -40.0).unwrap();
        let r = th3_kummer_rhs(&spec, &policy()).unwrap();
        let d = eval_series(&spec, &policy()).unwrap();
        assert!(rel(r.value, d.value) <= 1e-10);
    }

    #[test]
    fn t4_reduces_to_pfaff() {
        let (a0, a2, b2, x) = (0.9, 0.7, 1.8, c(0.4, -0.2));
        let spec = HyperSpec::new(reals(&[a0, 1.3, a2]), reals(&[1.3, b2]), x).unwrap();
        let r = th4_euler_rhs(&spec, &policy(), false).unwrap();
        let z = x / x.add_f64(-1.0);
        let pfaff = (-(ComplexEP::from(a0) * (ComplexEP::ONE - x).ln())).exp() * direct(&[a0, b2 - a2], &[b2], z);
        assert!(rel(r.value, pfaff) <= 1e-12);
        assert!(rel(r.value, direct(&[a0, a2], &[b2], x)) <= 1e-12);
    }

    #[test]
    fn t4_zero_argument() {
        let spec = HyperSpec::real(&[0.9, 1.3, 0.7], &[2.1, 1.8], 0.0).unwrap();
        let r = th4_euler_rhs(&spec, &policy(), false).unwrap();
        assert_eq!(r.value, ComplexEP::ONE);
    }

    #[test]
    fn t4_three_f_two() {
        let spec = HyperSpec::real(&[0.9, 1.3, 0.7], &[2.1, 1.8], 0.4).unwrap();
        let r = th4_euler_rhs(&spec, &policy(), false).unwrap();
        assert!(rel(r.value, direct(&[0.9, 1.3, 0.7], &[2.1, 1.8], c(0.4, 0.0))) <= 1e-11);
    }

    #[test]
    fn t4_gate() {
        let spec = HyperSpec::real(&[0.9, 1.3, 0.7], &[2.1, 1.8], 0.6).unwrap();
        assert!(matches!(th4_euler_rhs(&spec, &policy(), true), Err(Error::Domain(_))));
        let spec = HyperSpec::real(&[0.9, 1.3, 0.7], &[2.1, 1.8], -1.2).unwrap();
        assert!(matches!(th4_euler_rhs(&spec, &policy(), false), Err(Error::Domain(_))));
        assert!(th4_euler_rhs(&spec, &policy(), true).is_ok());
    }

    #[test]
    fn permuted_pairs_agree() {
        let x = c(1.1, 0.4);
        let a = HyperSpec::new(reals(&[1.2, 0.5, 0.8]), reals(&[2.3, 1.4, 1.7]), x).unwrap();
        let b = HyperSpec::new(reals(&[0.5, 1.2, 0.8]), reals(&[1.4, 2.3, 1.7]), x).unwrap();
        let ra = th3_kummer_rhs(&a, &policy()).unwrap();
        let rb = th3_kummer_rhs(&b, &policy()).unwrap();
        assert!(rel(ra.value, rb.value) <= 1e-10);

        let ia = AdditionInput::new(reals(&[1.2, 0.5]), reals(&[2.3, 1.4]), c(0.7, 0.0), c(-0.3, 0.2)).unwrap();
        let ib = AdditionInput::new(reals(&[0.5, 1.2]), reals(&[1.4, 2.3]), c(0.7, 0.0), c(-0.3, 0.2)).unwrap();
        let ra = th1_addition_rhs(&ia, &policy()).unwrap();
        let rb = th1_addition_rhs(&ib, &policy()).unwrap();
        assert!(rel(ra.value, rb.value) <= 1e-10);
    }

    #[test]
    fn all_pairs_terminating_gives_product_of_ranges() {
        // b - a = -1 and -2: the outer sum has 2 * 3 index tuples
        let input = AdditionInput::new(reals(&[2.5, 3.25]), reals(&[1.5, 1.25]), c(0.9, 0.0), c(-0.4, 0.0)).unwrap();
        let r = th1_addition_rhs(&input, &policy()).unwrap();
        assert!(r.terminated_exactly);
        assert_eq!(r.terms_used, 6);
        assert!(rel(r.value, direct(&[2.5, 3.25], &[1.5, 1.25], c(0.5, 0.0))) <= 1e-13);
    }

    #[test]
    fn wrong_shapes_are_rejected() {
        let input = AdditionInput::new(reals(&[1.0, 2.0]), reals(&[1.5]), c(0.1, 0.0), c(0.0, 0.0)).unwrap();
        assert!(matches!(th1_addition_rhs(&input, &policy()), Err(Error::InvalidParameter(_))));
        let spec = HyperSpec::real(&[1.0], &[1.5], 0.1).unwrap();
        assert!(matches!(th3_kummer_rhs(&spec, &policy()), Err(Error::InvalidParameter(_))));
        assert!(matches!(th4_euler_rhs(&spec, &policy(), false), Err(Error::InvalidParameter(_))));
    }
}
