//! Addition formulas and transformations for generalized hypergeometric
//! functions, evaluated as shell-ordered multi-sums, plus an LHS-vs-RHS
//! verifier.

mod shells;
mod transforms;

use std::fmt;
use std::str::FromStr;

pub use shells::{enumerate_shells, MultiIndex, Shell};
pub use transforms::{th1_addition_rhs, th2_addition_rhs, th3_kummer_rhs, th4_euler_rhs};

use crate::error::{Error, Result};
use crate::numerics::ComplexEP;
use crate::series::{eval_series, EvalResult, HyperSpec, TruncationPolicy};

/// Denominator floor of the relative difference.
pub const REL_DIFF_FLOOR: f64 = 1e-300;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    /// Addition formula for pFp.
    T1,
    /// Addition formula for p+1Fp.
    T2,
    /// Kummer-type transformation of p+1Fp+1.
    T3,
    /// Euler-type transformation of p+2Fp+1.
    T4,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::T1, Theorem::T2, Theorem::T3, Theorem::T4];

    pub fn is_addition(self) -> bool {
        matches!(self, Theorem::T1 | Theorem::T2)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::T1 => "T1",
            Theorem::T2 => "T2",
            Theorem::T3 => "T3",
            Theorem::T4 => "T4",
        };
        f.write_str(s)
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "t1" | "1" => Ok(Theorem::T1),
            "t2" | "2" => Ok(Theorem::T2),
            "t3" | "3" => Ok(Theorem::T3),
            "t4" | "4" => Ok(Theorem::T4),
            other => Err(Error::InvalidParameter(format!("unknown theorem '{other}', expected t1..t4"))),
        }
    }
}

/// Parameters of an addition formula: the function is evaluated at `x + y`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdditionInput {
    base: HyperSpec,
    x: ComplexEP,
    y: ComplexEP,
}

impl AdditionInput {
    pub fn new(numerator: Vec<ComplexEP>, denominator: Vec<ComplexEP>, x: ComplexEP, y: ComplexEP) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidParameter("x and y must be finite".into()));
        }
        let base = HyperSpec::new(numerator, denominator, ComplexEP::ZERO)?;
        Ok(Self { base, x, y })
    }

    pub fn numerator(&self) -> &[ComplexEP] {
        self.base.numerator()
    }

    pub fn denominator(&self) -> &[ComplexEP] {
        self.base.denominator()
    }

    pub fn x(&self) -> ComplexEP {
        self.x
    }

    pub fn y(&self) -> ComplexEP {
        self.y
    }

    /// The function whose value both sides approximate, at `x + y`.
    pub fn lhs_spec(&self) -> HyperSpec {
        self.base.with_argument(self.x + self.y)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdentityInput {
    Addition(AdditionInput),
    Transform(HyperSpec),
}

impl IdentityInput {
    /// The function whose value both sides approximate.
    pub fn lhs_spec(&self) -> HyperSpec {
        match self {
            IdentityInput::Addition(a) => a.lhs_spec(),
            IdentityInput::Transform(s) => s.clone(),
        }
    }

    pub fn parameters(&self) -> IdentityParameters {
        match self {
            IdentityInput::Addition(a) => IdentityParameters {
                numerator: a.numerator().to_vec(),
                denominator: a.denominator().to_vec(),
                x: a.x(),
                y: Some(a.y()),
            },
            IdentityInput::Transform(s) => IdentityParameters {
                numerator: s.numerator().to_vec(),
                denominator: s.denominator().to_vec(),
                x: s.argument(),
                y: None,
            },
        }
    }
}

/// Echo of the inputs of a verification.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityParameters {
    pub numerator: Vec<ComplexEP>,
    pub denominator: Vec<ComplexEP>,
    pub x: ComplexEP,
    pub y: Option<ComplexEP>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub theorem: Theorem,
    pub lhs: Option<EvalResult>,
    pub rhs: Option<EvalResult>,
    pub abs_diff: Option<f64>,
    pub rel_diff: Option<f64>,
    pub domain_ok: bool,
    /// Set when only the relaxed domain gate admitted the input.
    pub experimental: bool,
    pub passed: bool,
    pub diagnostic: Option<String>,
    pub parameters: IdentityParameters,
}

impl IdentityReport {
    /// A failed report with nothing evaluated.
    pub fn failure(theorem: Theorem, parameters: IdentityParameters, diagnostic: String) -> Self {
        Self {
            theorem,
            lhs: None,
            rhs: None,
            abs_diff: None,
            rel_diff: None,
            domain_ok: false,
            experimental: false,
            passed: false,
            diagnostic: Some(diagnostic),
            parameters,
        }
    }
}

fn domain_gate(theorem: Theorem, input: &IdentityInput, relaxed: bool) -> Result<bool> {
    match (theorem, input) {
        (Theorem::T2, IdentityInput::Addition(a)) => transforms::check_th2_domain(a.x(), a.y(), relaxed),
        (Theorem::T4, IdentityInput::Transform(s)) => transforms::check_th4_domain(s.argument(), relaxed),
        _ => Ok(false),
    }
}

/// Evaluates both sides of `theorem` and compares them. Evaluation errors
/// end up in `diagnostic`; this never panics or returns an error.
pub fn verify(
    theorem: Theorem,
    input: &IdentityInput,
    policy: &TruncationPolicy,
    verification_tol: f64,
    relaxed_domain: bool,
) -> IdentityReport {
    let mut report = IdentityReport::failure(theorem, input.parameters(), String::new());
    report.diagnostic = None;
    let mut notes = Vec::new();

    match eval_series(&input.lhs_spec(), policy) {
        Ok(r) => report.lhs = Some(r),
        Err(e) => notes.push(format!("lhs: {e}")),
    }
    match domain_gate(theorem, input, relaxed_domain) {
        Ok(experimental) => {
            report.domain_ok = true;
            report.experimental = experimental;
            match transforms::rhs_for(theorem, input, policy, relaxed_domain) {
                Ok(r) => report.rhs = Some(r),
                Err(e) => notes.push(format!("rhs: {e}")),
            }
        }
        Err(e) => notes.push(e.to_string()),
    }

    if let (Some(l), Some(r)) = (&report.lhs, &report.rhs) {
        let abs = (l.value - r.value).abs_f64();
        let rel = abs / l.value.abs_f64().max(r.value.abs_f64()).max(REL_DIFF_FLOOR);
        report.abs_diff = Some(abs);
        report.rel_diff = Some(rel);
        report.passed = report.domain_ok && rel <= verification_tol;
        if !report.passed {
            notes.push(format!("rel_diff {rel:.3e} exceeds {verification_tol:.3e}"));
        }
    }
    if !notes.is_empty() {
        report.diagnostic = Some(notes.join("; "));
    }
    report
}
