//! Seeded randomized verification of the identities.

mod report;
mod rng;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

pub use report::{
    eval_result_json, render, render_csv, render_json, render_text, report_json, sweep_json, SweepSummary,
    SIGNIFICANT_DIGITS,
};
pub use rng::{mix, DrawRng};

use crate::error::{Error, Result};
use crate::identities::{verify, AdditionInput, IdentityInput, IdentityParameters, IdentityReport, Theorem};
use crate::numerics::ComplexEP;
use crate::series::{HyperSpec, TruncationPolicy};

/// Minimum distance of a drawn denominator from the nonpositive integers.
pub const POLE_MARGIN: f64 = 0.1;
const MAX_REDRAWS: usize = 1000;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ParameterBox {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Default for ParameterBox {
    fn default() -> Self {
        Self { re: (-2.0, 3.0), im: (-1.0, 1.0) }
    }
}

impl ParameterBox {
    pub fn validate(&self) -> Result<()> {
        let ok = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo <= hi;
        if ok(self.re) && ok(self.im) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid parameter box {self:?}")))
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(Error::InvalidParameter(format!("unknown format '{other}', expected json, csv or text"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub theorem: Theorem,
    /// Orders used in turn: draw `i` gets `p[i % p.len()]`.
    pub p: Vec<usize>,
    pub draws: usize,
    pub seed: u64,
    pub parameter_box: ParameterBox,
    /// Per-slot overrides keyed by slot name (`a0`, `a1`, `b2`, ...).
    pub slot_boxes: BTreeMap<String, ParameterBox>,
    /// Verification tolerance on rel_diff.
    pub tol: f64,
    pub policy: TruncationPolicy,
    pub relaxed_domain: bool,
    pub output_format: OutputFormat,
    /// Worker threads; 0 uses rayon's default.
    pub threads: usize,
}

impl SweepConfig {
    pub fn new(theorem: Theorem) -> Self {
        Self {
            theorem,
            p: vec![1],
            draws: 1,
            seed: 0,
            parameter_box: ParameterBox::default(),
            slot_boxes: BTreeMap::new(),
            tol: 1e-10,
            policy: TruncationPolicy::default(),
            relaxed_domain: false,
            output_format: OutputFormat::Json,
            threads: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.draws == 0 {
            return Err(Error::InvalidParameter("draws must be at least 1".into()));
        }
        if self.p.is_empty() || self.p.contains(&0) {
            return Err(Error::InvalidParameter("p must be a nonempty list of positive integers".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        self.parameter_box.validate()?;
        for b in self.slot_boxes.values() {
            b.validate()?;
        }
        self.policy.validate()
    }

    fn box_for(&self, slot: &str) -> ParameterBox {
        self.slot_boxes.get(slot).copied().unwrap_or(self.parameter_box)
    }
}

/// One verified draw.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub draw_index: usize,
    pub p: usize,
    pub report: IdentityReport,
    pub millis: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub config: SweepConfig,
    pub records: Vec<SweepRecord>,
}

impl SweepOutcome {
    pub fn summary(&self) -> SweepSummary {
        SweepSummary::from_records(&self.records)
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.report.passed)
    }
}

fn distance_to_pole(re: f64, im: f64) -> f64 {
    let n = re.round().min(0.0);
    (re - n).hypot(im)
}

fn draw_value(rng: &mut DrawRng, b: ParameterBox) -> (f64, f64) {
    (rng.range(b.re.0, b.re.1), rng.range(b.im.0, b.im.1))
}

fn draw_denominator(rng: &mut DrawRng, b: ParameterBox, slot: &str) -> Result<(f64, f64)> {
    for _ in 0..MAX_REDRAWS {
        let (re, im) = draw_value(rng, b);
        if distance_to_pole(re, im) >= POLE_MARGIN {
            return Ok((re, im));
        }
    }
    Err(Error::InvalidParameter(format!("could not draw {slot} at least {POLE_MARGIN} from the nonpositive integers")))
}

fn ep((re, im): (f64, f64)) -> ComplexEP {
    ComplexEP::from_f64(re, im)
}

/// Slot names `(numerators, denominators)` for `theorem` at order `p`.
pub fn slot_names(theorem: Theorem, p: usize) -> (Vec<String>, Vec<String>) {
    let head = matches!(theorem, Theorem::T2 | Theorem::T4);
    let pairs = match theorem {
        Theorem::T1 | Theorem::T2 => p,
        Theorem::T3 | Theorem::T4 => p + 1,
    };
    let mut num: Vec<String> = if head { vec!["a0".to_string()] } else { Vec::new() };
    num.extend((1..=pairs).map(|q| format!("a{q}")));
    let den = (1..=pairs).map(|q| format!("b{q}")).collect();
    (num, den)
}

/// Parameters and arguments of draw `index`.
pub fn draw_input(config: &SweepConfig, index: usize) -> Result<(usize, IdentityInput)> {
    let p = config.p[index % config.p.len()];
    let mut rng = DrawRng::new(config.seed, index as u64);
    let (num_names, den_names) = slot_names(config.theorem, p);
    let num: Vec<ComplexEP> = num_names.iter().map(|n| ep(draw_value(&mut rng, config.box_for(n)))).collect();
    let den = den_names
        .iter()
        .map(|n| draw_denominator(&mut rng, config.box_for(n), n).map(ep))
        .collect::<Result<Vec<_>>>()?;
    let input = match config.theorem {
        Theorem::T1 => {
            let x = rng.disk(1.5);
            let y = rng.disk(1.5);
            IdentityInput::Addition(AdditionInput::new(num, den, ep(x), ep(y))?)
        }
        Theorem::T2 => {
            let x = rng.disk(0.45);
            let ax = x.0.hypot(x.1);
            let (lo, hi) = if config.relaxed_domain {
                // straddle |y| = |x| so that part of the draws needs the relaxed gate
                (0.5 * ax, (2.0 * ax).min(0.9 - ax))
            } else {
                (0.0, ax.min(0.9 - ax))
            };
            let r = lo + (hi - lo) * rng.uniform().sqrt();
            let theta = std::f64::consts::TAU * rng.uniform();
            let y = (r * theta.cos(), r * theta.sin());
            IdentityInput::Addition(AdditionInput::new(num, den, ep(x), ep(y))?)
        }
        Theorem::T3 => IdentityInput::Transform(HyperSpec::new(num, den, ep(rng.disk(2.0)))?),
        Theorem::T4 => IdentityInput::Transform(HyperSpec::new(num, den, ep(rng.disk(0.45)))?),
    };
    Ok((p, input))
}

fn run_draw(config: &SweepConfig, index: usize) -> SweepRecord {
    let start = Instant::now();
    let (p, report) = match draw_input(config, index) {
        Ok((p, input)) => (p, verify(config.theorem, &input, &config.policy, config.tol, config.relaxed_domain)),
        Err(e) => {
            // only reachable with a pathological box
            let params =
                IdentityParameters { numerator: Vec::new(), denominator: Vec::new(), x: ComplexEP::ZERO, y: None };
            let p = config.p[index % config.p.len()];
            (p, IdentityReport::failure(config.theorem, params, format!("draw: {e}")))
        }
    };
    SweepRecord { draw_index: index, p, report, millis: start.elapsed().as_secs_f64() * 1e3 }
}

/// Runs every draw, in parallel when `threads != 1`; records come back in
/// draw order.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let work = || -> Vec<SweepRecord> { (0..config.draws).into_par_iter().map(|i| run_draw(config, i)).collect() };
    let records = if config.threads == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(work)
    };
    Ok(SweepOutcome { config: config.clone(), records })
}
