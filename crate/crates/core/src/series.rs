//! Direct power-series evaluation of pFq.
//!
//! Terms come from the ratio recurrence
//! `t_{i+1} = t_i * prod(a_k + i) / prod(b_k + i) * x / (i + 1)` and are
//! summed with a compensated accumulator. Summation stops once
//! `quiet_shells` consecutive terms fall below `tol * max(|t_0|, |sum|)`
//! (`t_0 = 1` unless a prefactor is folded in); the
//! reported error is the sum of those quiet terms plus twice the last one,
//! plus a rounding allowance proportional to the absolute term mass.

use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{CompensatedAccumulator, ComplexEP};

/// Absolute distance to a nonpositive integer below which a parameter is
/// treated as that integer.
pub const POLE_TOLERANCE: f64 = 1e-25;

/// Parameters and argument of a generalized hypergeometric function.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperSpec {
    numerator: Vec<ComplexEP>,
    denominator: Vec<ComplexEP>,
    argument: ComplexEP,
}

impl HyperSpec {
    /// Rejects non-finite values and denominators within [`POLE_TOLERANCE`]
    /// of a nonpositive integer.
    pub fn new(numerator: Vec<ComplexEP>, denominator: Vec<ComplexEP>, argument: ComplexEP) -> Result<Self> {
        for (i, a) in numerator.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::InvalidParameter(format!("numerator a{} is not finite", i + 1)));
            }
        }
        for (i, b) in denominator.iter().enumerate() {
            if !b.is_finite() {
                return Err(Error::InvalidParameter(format!("denominator b{} is not finite", i + 1)));
            }
            if let Some(m) = b.near_nonpositive_integer(POLE_TOLERANCE) {
                return Err(Error::InvalidParameter(format!(
                    "denominator b{} = {b} is the nonpositive integer -{m}; denominator parameters cannot be 0, -1, -2, ...",
                    i + 1
                )));
            }
        }
        if !argument.is_finite() {
            return Err(Error::InvalidParameter("argument is not finite".into()));
        }
        Ok(Self { numerator, denominator, argument })
    }

    /// Convenience constructor from binary64 real parameters.
    pub fn real(numerator: &[f64], denominator: &[f64], argument: f64) -> Result<Self> {
        Self::new(
            numerator.iter().map(|&a| ComplexEP::from(a)).collect(),
            denominator.iter().map(|&b| ComplexEP::from(b)).collect(),
            ComplexEP::from(argument),
        )
    }

    pub fn numerator(&self) -> &[ComplexEP] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[ComplexEP] {
        &self.denominator
    }

    pub fn argument(&self) -> ComplexEP {
        self.argument
    }

    pub fn p(&self) -> usize {
        self.numerator.len()
    }

    pub fn q(&self) -> usize {
        self.denominator.len()
    }

    pub fn with_argument(&self, argument: ComplexEP) -> Self {
        Self { numerator: self.numerator.clone(), denominator: self.denominator.clone(), argument }
    }

    pub fn conj(&self) -> Self {
        Self {
            numerator: self.numerator.iter().map(|a| a.conj()).collect(),
            denominator: self.denominator.iter().map(|b| b.conj()).collect(),
            argument: self.argument.conj(),
        }
    }

    /// Smallest `m` such that some numerator equals `-m`.
    pub fn terminating_order(&self) -> Option<usize> {
        self.numerator.iter().filter_map(|a| a.near_nonpositive_integer(POLE_TOLERANCE)).min().map(|m| m as usize)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Precision {
    /// Double-double arithmetic (about 31 significant digits).
    Extended,
    /// Plain binary64, for speed comparisons.
    Binary64,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TruncationPolicy {
    /// Stop threshold for a term (or shell) relative to `max(1, |sum|)`.
    pub tol: f64,
    /// Maximum number of series terms.
    pub max_order: usize,
    /// Consecutive below-threshold terms or shells required to stop.
    pub quiet_shells: usize,
    /// Maximum total order of the multi-index sums in the identities.
    pub max_shell_order: usize,
    pub precision: Precision,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { tol: 1e-25, max_order: 2000, quiet_shells: 3, max_shell_order: 300, precision: Precision::Extended }
    }
}

impl TruncationPolicy {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_order < 1 || self.quiet_shells < 1 || self.max_shell_order < 1 {
            return Err(Error::InvalidParameter(
                "max_order, quiet_shells and max_shell_order must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ConvergenceClass {
    Entire,
    UnitDisk,
    Terminating,
    Divergent,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EvalResult {
    pub value: ComplexEP,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    pub truncation_order: usize,
    pub terminated_exactly: bool,
}

pub fn classify(spec: &HyperSpec) -> ConvergenceClass {
    if spec.terminating_order().is_some() {
        ConvergenceClass::Terminating
    } else if spec.p() <= spec.q() {
        ConvergenceClass::Entire
    } else if spec.p() == spec.q() + 1 {
        ConvergenceClass::UnitDisk
    } else {
        ConvergenceClass::Divergent
    }
}

/// Sum of the series of `spec` at its argument.
pub fn eval_series(spec: &HyperSpec, policy: &TruncationPolicy) -> Result<EvalResult> {
    eval_series_scaled(spec, policy, ComplexEP::ZERO)
}

/// `exp(log_prefactor) * pFq`, with the prefactor folded into the first
/// term so that large intermediate terms stay representable.
pub fn eval_series_scaled(spec: &HyperSpec, policy: &TruncationPolicy, log_prefactor: ComplexEP) -> Result<EvalResult> {
    policy.validate()?;
    check_domain(spec)?;
    let start = if log_prefactor.is_zero() { ComplexEP::ONE } else { log_prefactor.exp() };
    if !start.is_finite() {
        return Err(Error::OutOfRange(format!("exp({log_prefactor}) overflows")));
    }
    let opts = SumOptions {
        tol: policy.tol,
        max_order: policy.max_order,
        quiet: policy.quiet_shells,
        terminate_after: spec.terminating_order(),
        abs_floor: 0.0,
    };
    let out = match policy.precision {
        Precision::Extended => {
            sum_terms::<ComplexEP>(spec.numerator(), spec.denominator(), spec.argument(), start, &opts)?
        }
        Precision::Binary64 => {
            sum_terms::<Complex64>(spec.numerator(), spec.denominator(), spec.argument(), start, &opts)?
        }
    };
    Ok(out)
}

fn check_domain(spec: &HyperSpec) -> Result<()> {
    if spec.argument().is_zero() {
        return Ok(());
    }
    match classify(spec) {
        ConvergenceClass::Divergent => Err(Error::Domain(format!(
            "{}F{} series with p > q+1 diverges for every nonzero argument",
            spec.p(),
            spec.q()
        ))),
        ConvergenceClass::UnitDisk if spec.argument().abs_f64() >= 1.0 => Err(Error::Domain(format!(
            "{}F{} series requires |x| < 1, got |x| = {}",
            spec.p(),
            spec.q(),
            spec.argument().abs_f64()
        ))),
        _ => Ok(()),
    }
}

/// Arithmetic needed by the term recurrence, implemented at both precisions.
pub(crate) trait SeriesScalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    /// Unit roundoff.
    const EPS: f64;
    type Acc: SeriesAccumulator<Self>;
    fn from_ep(z: ComplexEP) -> Self;
    fn one() -> Self;
    fn modulus(self) -> f64;
    fn shifted(self, k: f64) -> Self;
    fn finite(self) -> bool;
}

impl SeriesScalar for ComplexEP {
    const EPS: f64 = crate::numerics::DoubleDouble::EPSILON;
    type Acc = CompensatedAccumulator;
    #[inline]
    fn from_ep(z: ComplexEP) -> Self {
        z
    }
    #[inline]
    fn one() -> Self {
        ComplexEP::ONE
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs_f64()
    }
    #[inline]
    fn shifted(self, k: f64) -> Self {
        self.add_f64(k)
    }
    #[inline]
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl SeriesScalar for Complex64 {
    const EPS: f64 = f64::EPSILON / 2.0;
    type Acc = NeumaierF64;
    #[inline]
    fn from_ep(z: ComplexEP) -> Self {
        z.to_complex64()
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn shifted(self, k: f64) -> Self {
        Complex64::new(self.re + k, self.im)
    }
    #[inline]
    fn finite(self) -> bool {
        self.is_finite()
    }
}

pub(crate) struct SumOptions {
    pub tol: f64,
    pub max_order: usize,
    pub quiet: usize,
    /// Sum exactly the terms `0..=m` and nothing else.
    pub terminate_after: Option<usize>,
    /// Terms below this absolute size also count as quiet, as long as they
    /// are not growing.
    pub abs_floor: f64,
}

/// Running sum matched to a scalar type.
pub(crate) trait SeriesAccumulator<S>: Default {
    fn add(&mut self, t: S);
    fn value(&self) -> ComplexEP;
    fn modulus(&self) -> f64;
}

impl SeriesAccumulator<ComplexEP> for CompensatedAccumulator {
    #[inline]
    fn add(&mut self, t: ComplexEP) {
        CompensatedAccumulator::add(self, t);
    }
    fn value(&self) -> ComplexEP {
        CompensatedAccumulator::value(self)
    }
    #[inline]
    fn modulus(&self) -> f64 {
        self.primary.abs_f64()
    }
}

/// Neumaier sum in binary64.
#[derive(Default)]
pub(crate) struct NeumaierF64 {
    sum: Complex64,
    comp: Complex64,
}

#[inline]
fn neumaier_fix(a: f64, b: f64, s: f64) -> f64 {
    if a.abs() >= b.abs() {
        (a - s) + b
    } else {
        (b - s) + a
    }
}

impl SeriesAccumulator<Complex64> for NeumaierF64 {
    #[inline]
    fn add(&mut self, t: Complex64) {
        let s = self.sum + t;
        self.comp.re += neumaier_fix(self.sum.re, t.re, s.re);
        self.comp.im += neumaier_fix(self.sum.im, t.im, s.im);
        self.sum = s;
    }
    fn value(&self) -> ComplexEP {
        ComplexEP::from_complex64(self.sum + self.comp)
    }
    #[inline]
    fn modulus(&self) -> f64 {
        self.sum.norm()
    }
}

/// Core recurrence shared by direct evaluation and the identity evaluators.
pub(crate) fn sum_terms<S: SeriesScalar>(
    numerator: &[ComplexEP],
    denominator: &[ComplexEP],
    x: ComplexEP,
    start: ComplexEP,
    opts: &SumOptions,
) -> Result<EvalResult> {
    let flops = (numerator.len() + denominator.len() + 3) as f64;
    let mut acc = S::Acc::default();
    let mut term = S::from_ep(start);
    acc.add(term);
    let first = term.modulus();
    let mut weighted_abs_sum = first;

    if x.is_zero() || opts.terminate_after == Some(0) || start.is_zero() {
        return Ok(EvalResult {
            value: acc.value(),
            abs_error_estimate: S::EPS * flops * weighted_abs_sum,
            terms_used: 1,
            truncation_order: 0,
            terminated_exactly: true,
        });
    }

    let num: Vec<S> = numerator.iter().map(|&a| S::from_ep(a)).collect();
    let den: Vec<S> = denominator.iter().map(|&b| S::from_ep(b)).collect();
    let xs = S::from_ep(x);

    let quiet_needed = opts.quiet.max(1);
    let mut recent: Vec<f64> = Vec::with_capacity(quiet_needed);
    let mut quiet = 0usize;
    let mut previous = first;
    let mut i = 0usize;
    loop {
        if let Some(m) = opts.terminate_after {
            if i == m {
                return Ok(EvalResult {
                    value: acc.value(),
                    abs_error_estimate: S::EPS * flops * weighted_abs_sum,
                    terms_used: m + 1,
                    truncation_order: m,
                    terminated_exactly: true,
                });
            }
        }
        if i + 1 >= opts.max_order {
            return Err(Error::NoConvergence {
                order: i + 1,
                detail: format!(
                    "series term {:.3e} still above threshold {:.3e}",
                    term.modulus(),
                    opts.tol * acc.modulus().max(first)
                ),
            });
        }
        let fi = i as f64;
        let mut up = xs;
        for &a in &num {
            up = up * a.shifted(fi);
        }
        let mut down = S::one().shifted(fi);
        for &b in &den {
            down = down * b.shifted(fi);
        }
        term = term * up / down;
        if !term.finite() {
            return Err(Error::OutOfRange(format!("series term {} overflows", i + 1)));
        }
        acc.add(term);
        i += 1;

        let t = term.modulus();
        weighted_abs_sum += t * (i as f64 + 1.0);
        if recent.len() == quiet_needed {
            recent.remove(0);
        }
        recent.push(t);

        let threshold = opts.tol * acc.modulus().max(first);
        let settled = t < threshold || (t < opts.abs_floor && t <= previous);
        previous = t;
        if opts.terminate_after.is_none() {
            if settled {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if quiet >= quiet_needed {
                let truncation: f64 = recent.iter().sum::<f64>() + 2.0 * t;
                return Ok(EvalResult {
                    value: acc.value(),
                    abs_error_estimate: truncation + S::EPS * flops * weighted_abs_sum,
                    terms_used: i + 1,
                    truncation_order: i,
                    terminated_exactly: false,
                });
            }
        }
    }
}
