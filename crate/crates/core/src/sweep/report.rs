//! JSON, CSV and text renderings of a sweep.
//!
//! JSON keys are sorted and every real number is written in scientific
//! notation with 20 significant digits, complex numbers as `[re, im]`, so a
//! report parses and re-serializes to the same bytes. Wall-clock timings are
//! left out of JSON to keep reports reproducible; CSV carries them.

use serde_json::{Map, Number, Value};

use super::{slot_names, OutputFormat, SweepOutcome, SweepRecord};
use crate::error::{Error, Result};
use crate::identities::IdentityReport;
use crate::numerics::ComplexEP;
use crate::series::EvalResult;

pub const SIGNIFICANT_DIGITS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub draws: usize,
    pub passed: usize,
    pub failed: usize,
    pub experimental: usize,
    pub max_rel_diff: Option<f64>,
}

impl SweepSummary {
    pub fn from_records(records: &[SweepRecord]) -> Self {
        let passed = records.iter().filter(|r| r.report.passed).count();
        Self {
            draws: records.len(),
            passed,
            failed: records.len() - passed,
            experimental: records.iter().filter(|r| r.report.experimental).count(),
            max_rel_diff: records.iter().filter_map(|r| r.report.rel_diff).reduce(f64::max),
        }
    }

    pub fn pass_rate(&self) -> f64 {
        self.passed as f64 / self.draws.max(1) as f64
    }
}

fn real(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    Value::Number(s.parse::<Number>().expect("scientific notation is valid JSON"))
}

fn complex(z: ComplexEP) -> Value {
    let part = |d: crate::numerics::DoubleDouble| {
        if d.is_finite() {
            Value::Number(d.to_sci_string(SIGNIFICANT_DIGITS).parse::<Number>().expect("valid number"))
        } else {
            Value::Null
        }
    };
    Value::Array(vec![part(z.re), part(z.im)])
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> Value) -> Value {
    v.map_or(Value::Null, f)
}

pub fn eval_result_json(r: &EvalResult) -> Value {
    let mut m = Map::new();
    m.insert("value".into(), complex(r.value));
    m.insert("abs_error_estimate".into(), real(r.abs_error_estimate));
    m.insert("terms_used".into(), r.terms_used.into());
    m.insert("truncation_order".into(), r.truncation_order.into());
    m.insert("terminated_exactly".into(), r.terminated_exactly.into());
    Value::Object(m)
}

/// Named parameters of a report, using the theorem's slot names.
pub(crate) fn named_parameters(report: &IdentityReport, p: usize) -> Vec<(String, ComplexEP)> {
    let params = &report.parameters;
    let (num_names, den_names) = slot_names(report.theorem, p);
    let mut out: Vec<(String, ComplexEP)> = Vec::new();
    if num_names.len() == params.numerator.len() && den_names.len() == params.denominator.len() {
        out.extend(num_names.into_iter().zip(params.numerator.iter().copied()));
        out.extend(den_names.into_iter().zip(params.denominator.iter().copied()));
    } else {
        out.extend(params.numerator.iter().enumerate().map(|(i, &a)| (format!("num{i}"), a)));
        out.extend(params.denominator.iter().enumerate().map(|(i, &b)| (format!("den{i}"), b)));
    }
    out
}

/// One identity report; `p` selects the parameter slot names.
pub fn report_json(r: &IdentityReport, p: usize) -> Value {
    let mut params = Map::new();
    for (name, v) in named_parameters(r, p) {
        params.insert(name, complex(v));
    }
    params.insert("x".into(), complex(r.parameters.x));
    if let Some(y) = r.parameters.y {
        params.insert("y".into(), complex(y));
    }
    let mut m = Map::new();
    m.insert("theorem".into(), r.theorem.to_string().into());
    m.insert("parameters".into(), Value::Object(params));
    m.insert("lhs".into(), opt(r.lhs.as_ref(), eval_result_json));
    m.insert("rhs".into(), opt(r.rhs.as_ref(), eval_result_json));
    m.insert("abs_diff".into(), opt(r.abs_diff, real));
    m.insert("rel_diff".into(), opt(r.rel_diff, real));
    m.insert("domain_ok".into(), r.domain_ok.into());
    m.insert("experimental".into(), r.experimental.into());
    m.insert("passed".into(), r.passed.into());
    m.insert("diagnostic".into(), opt(r.diagnostic.clone(), Value::from));
    Value::Object(m)
}

fn record_json(rec: &SweepRecord) -> Value {
    let mut v = report_json(&rec.report, rec.p);
    let m = v.as_object_mut().expect("report is an object");
    m.insert("draw_index".into(), rec.draw_index.into());
    m.insert("p".into(), rec.p.into());
    v
}

fn box_json(b: &super::ParameterBox) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), Value::Array(vec![real(b.re.0), real(b.re.1)]));
    m.insert("im".into(), Value::Array(vec![real(b.im.0), real(b.im.1)]));
    Value::Object(m)
}

/// The whole sweep as a JSON value. Thread count and timings are omitted.
pub fn sweep_json(outcome: &SweepOutcome) -> Value {
    let c = &outcome.config;
    let mut config = Map::new();
    config.insert("theorem".into(), c.theorem.to_string().into());
    config.insert("p".into(), Value::Array(c.p.iter().map(|&p| p.into()).collect()));
    config.insert("draws".into(), c.draws.into());
    config.insert("seed".into(), c.seed.into());
    config.insert("parameter_box".into(), box_json(&c.parameter_box));
    let slots: Map<String, Value> = c.slot_boxes.iter().map(|(k, b)| (k.clone(), box_json(b))).collect();
    config.insert("slot_boxes".into(), Value::Object(slots));
    config.insert("tol".into(), real(c.tol));
    config.insert("series_tol".into(), real(c.policy.tol));
    config.insert("relaxed_domain".into(), c.relaxed_domain.into());

    let s = outcome.summary();
    let mut summary = Map::new();
    summary.insert("draws".into(), s.draws.into());
    summary.insert("passed".into(), s.passed.into());
    summary.insert("failed".into(), s.failed.into());
    summary.insert("experimental".into(), s.experimental.into());
    summary.insert("pass_rate".into(), real(s.pass_rate()));
    summary.insert("max_rel_diff".into(), opt(s.max_rel_diff, real));

    let mut root = Map::new();
    root.insert("config".into(), Value::Object(config));
    root.insert("records".into(), Value::Array(outcome.records.iter().map(record_json).collect()));
    root.insert("summary".into(), Value::Object(summary));
    Value::Object(root)
}

pub fn render_json(outcome: &SweepOutcome) -> String {
    let mut s = serde_json::to_string_pretty(&sweep_json(outcome)).expect("JSON values serialize");
    s.push('\n');
    s
}

fn pair(z: ComplexEP) -> String {
    format!("({},{})", z.re.to_sci_string(SIGNIFICANT_DIGITS), z.im.to_sci_string(SIGNIFICANT_DIGITS))
}

fn real_str(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v))
}

pub fn render_csv(outcome: &SweepOutcome) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
    w.write_record([
        "theorem",
        "draw_index",
        "p",
        "parameters",
        "x",
        "y",
        "lhs",
        "rhs",
        "abs_diff",
        "rel_diff",
        "domain_ok",
        "passed",
        "terms_lhs",
        "terms_rhs",
        "millis",
    ])
    .map_err(io)?;
    for rec in &outcome.records {
        let r = &rec.report;
        let params = named_parameters(r, rec.p)
            .into_iter()
            .map(|(n, v)| format!("{n}={}", pair(v)))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.theorem.to_string(),
            rec.draw_index.to_string(),
            rec.p.to_string(),
            params,
            pair(r.parameters.x),
            r.parameters.y.map_or(String::new(), pair),
            r.lhs.as_ref().map_or(String::new(), |l| pair(l.value)),
            r.rhs.as_ref().map_or(String::new(), |l| pair(l.value)),
            real_str(r.abs_diff),
            real_str(r.rel_diff),
            r.domain_ok.to_string(),
            r.passed.to_string(),
            r.lhs.as_ref().map_or(String::new(), |l| l.terms_used.to_string()),
            r.rhs.as_ref().map_or(String::new(), |l| l.terms_used.to_string()),
            format!("{:.3}", rec.millis),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn render_text(outcome: &SweepOutcome) -> String {
    let mut out = String::new();
    for rec in &outcome.records {
        let r = &rec.report;
        let status = if r.passed { "pass" } else { "FAIL" };
        let flag = if r.experimental { " experimental" } else { "" };
        out.push_str(&format!(
            "{} draw {:>4} p={} {} rel_diff={}{}",
            r.theorem,
            rec.draw_index,
            rec.p,
            status,
            r.rel_diff.map_or("-".to_string(), |v| format!("{v:.3e}")),
            flag
        ));
        if let Some(d) = &r.diagnostic {
            out.push_str(&format!("  [{d}]"));
        }
        out.push('\n');
    }
    let s = outcome.summary();
    out.push_str(&format!(
        "{} draws, {} passed, {} failed, {} experimental, pass rate {:.1}%, max rel_diff {}\n",
        s.draws,
        s.passed,
        s.failed,
        s.experimental,
        100.0 * s.pass_rate(),
        s.max_rel_diff.map_or("-".to_string(), |v| format!("{v:.3e}"))
    ));
    out
}

pub fn render(outcome: &SweepOutcome, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(render_json(outcome)),
        OutputFormat::Csv => render_csv(outcome),
        OutputFormat::Text => Ok(render_text(outcome)),
    }
}
