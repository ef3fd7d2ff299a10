//! `pfq`: evaluate pFq, check the transformation identities, run seeded
//! sweeps and print quadrature rules.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input or domain error,
//! 3 numerical failure (nonconvergence, overflow).

mod config;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use pfq::identities::{self, AdditionInput, IdentityInput, IdentityReport, Theorem};
use pfq::oracle::{self, RuleKind};
use pfq::sweep::{self, OutputFormat, ParameterBox, SweepConfig};
use pfq::{ComplexEP, Error, EvalResult, HyperSpec, Precision, TruncationPolicy};

const EXIT_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "pfq", version, about = "Generalized hypergeometric functions and their transformation identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate pFq(num; den; x).
    Eval(EvalArgs),
    /// Verify one identity at one parameter point.
    Check(CheckArgs),
    /// Verify an identity over seeded random draws.
    Sweep(SweepArgs),
    /// Print the nodes and weights of a quadrature rule.
    Rules(RulesArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Via {
    Direct,
    EulerIntegral,
    LaplaceIntegral,
    Kummer,
    EulerTransform,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PrecisionArg {
    Extended,
    Binary64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    #[value(name = "legendre_01", alias = "legendre")]
    Legendre01,
    #[value(name = "laguerre_0inf", alias = "laguerre")]
    Laguerre0Inf,
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Numerator parameters, comma separated; complex values as re:im.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    num: String,
    /// Denominator parameters, same syntax as --num.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    den: String,
    /// Argument as re or re,im.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
}

#[derive(Args, Debug)]
struct PolicyArgs {
    /// Maximum number of series terms.
    #[arg(long)]
    max_order: Option<usize>,
    /// Maximum total order of the multi-index sums.
    #[arg(long)]
    max_shell_order: Option<usize>,
    #[arg(long, value_enum, default_value_t = PrecisionArg::Extended)]
    precision: PrecisionArg,
}

impl PolicyArgs {
    fn policy(&self, tol: Option<f64>) -> TruncationPolicy {
        let mut policy = TruncationPolicy::default();
        if let Some(t) = tol {
            policy.tol = t;
        }
        if let Some(n) = self.max_order {
            policy.max_order = n;
        }
        if let Some(n) = self.max_shell_order {
            policy.max_shell_order = n;
        }
        policy.precision = match self.precision {
            PrecisionArg::Extended => Precision::Extended,
            PrecisionArg::Binary64 => Precision::Binary64,
        };
        policy
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Series truncation tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long, value_enum, default_value_t = Via::Direct)]
    via: Via,
    /// Skip the domain gate of the Euler-type transformation.
    #[arg(long)]
    relaxed_domain: bool,
    /// json or text.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// t1, t2, t3 or t4.
    #[arg(long)]
    theorem: String,
    /// Order p of the theorem; inferred from the parameter counts if omitted.
    #[arg(long)]
    p: Option<usize>,
    #[command(flatten)]
    params: ParamArgs,
    /// Second argument of the addition formulas.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    /// Verification tolerance on rel_diff.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Series truncation tolerance.
    #[arg(long)]
    series_tol: Option<f64>,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Evaluate outside the proven domain and mark the report experimental.
    #[arg(long)]
    relaxed_domain: bool,
    /// json or text.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Flat key = value file with flag names as keys.
    #[arg(long)]
    config: Option<String>,
    /// t1, t2, t3 or t4.
    #[arg(long)]
    theorem: String,
    /// Orders, comma separated; draw i uses the (i mod len)-th.
    #[arg(long, default_value = "1")]
    p: String,
    #[arg(long, default_value_t = 1)]
    draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Verification tolerance on rel_diff.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Series truncation tolerance.
    #[arg(long)]
    series_tol: Option<f64>,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Report draws outside the proven domain as experimental instead of rejecting them.
    #[arg(long)]
    relaxed_domain: bool,
    /// Real-part range of every parameter, as lo,hi.
    #[arg(long, allow_hyphen_values = true)]
    box_re: Option<String>,
    /// Imaginary-part range of every parameter, as lo,hi.
    #[arg(long, allow_hyphen_values = true)]
    box_im: Option<String>,
    /// Per-slot box, as name=re_lo,re_hi,im_lo,im_hi (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    slot_box: Vec<String>,
    /// json, csv or text.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args, Debug)]
struct RulesArgs {
    #[arg(long, value_enum, default_value_t = RuleArg::Legendre01)]
    kind: RuleArg,
    #[arg(long, default_value_t = 8)]
    order: usize,
    /// json or text.
    #[arg(long, default_value = "text")]
    format: String,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_input_error() { EXIT_INPUT } else { EXIT_NUMERIC };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn parse_value(s: &str, what: &str) -> Result<ComplexEP, Failure> {
    ComplexEP::parse(s.trim()).ok_or_else(|| input_error(format!("cannot parse {what} '{s}'")))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<ComplexEP>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| parse_value(&t.replace(':', ","), what)).collect()
}

fn parse_range(s: &str, what: &str) -> Result<(f64, f64), Failure> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| input_error(format!("cannot parse {what} '{s}'")))?;
    match v[..] {
        [lo, hi] => Ok((lo, hi)),
        _ => Err(input_error(format!("{what} needs lo,hi, got '{s}'"))),
    }
}

fn text_format(s: &str) -> Result<OutputFormat, Failure> {
    match s.parse::<OutputFormat>()? {
        OutputFormat::Csv => Err(input_error("csv output is only available for sweep")),
        f => Ok(f),
    }
}

fn complex_text(z: ComplexEP) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {}i", z.re.to_sci_string(32), z.im.abs().to_sci_string(32))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn spec_from(params: &ParamArgs) -> Result<HyperSpec, Failure> {
    let num = parse_list(&params.num, "--num")?;
    let den = parse_list(&params.den, "--den")?;
    let x = parse_value(&params.x, "--x")?;
    Ok(HyperSpec::new(num, den, x)?)
}

fn cmd_eval(args: &EvalArgs) -> Result<u8, Failure> {
    let format = text_format(&args.format)?;
    let spec = spec_from(&args.params)?;
    let policy = args.policy.policy(args.tol);
    let result = match args.via {
        Via::Direct => pfq::eval_series(&spec, &policy)?,
        Via::EulerIntegral => oracle::euler_integral_default(&spec, &policy)?,
        Via::LaplaceIntegral => oracle::laplace_integral_default(&spec, &policy)?,
        Via::Kummer => identities::th3_kummer_rhs(&spec, &policy)?,
        Via::EulerTransform => identities::th4_euler_rhs(&spec, &policy, args.relaxed_domain)?,
    };
    let via = args.via.to_possible_value().expect("no skipped variants").get_name().to_string();
    match format {
        OutputFormat::Json => {
            let mut v = sweep::eval_result_json(&result);
            v.as_object_mut().expect("object").insert("via".into(), via.into());
            print_json(&v);
        }
        _ => print_eval_text(&result, &via),
    }
    Ok(0)
}

fn print_eval_text(r: &EvalResult, via: &str) {
    println!("value               {}", complex_text(r.value));
    println!("abs_error_estimate  {:.3e}", r.abs_error_estimate);
    println!("terms_used          {}", r.terms_used);
    println!("truncation_order    {}", r.truncation_order);
    println!("terminated_exactly  {}", r.terminated_exactly);
    println!("via                 {via}");
}

fn check_input(args: &CheckArgs, theorem: Theorem) -> Result<(usize, IdentityInput), Failure> {
    let num = parse_list(&args.params.num, "--num")?;
    let den = parse_list(&args.params.den, "--den")?;
    let x = parse_value(&args.params.x, "--x")?;
    let y = args.y.as_deref().map(|s| parse_value(s, "--y")).transpose()?;
    let p = match theorem {
        Theorem::T1 | Theorem::T2 => den.len(),
        Theorem::T3 | Theorem::T4 => den.len().saturating_sub(1),
    };
    if let Some(expected) = args.p {
        if expected != p {
            return Err(input_error(format!(
                "--p {expected} does not match the {} numerator and {} denominator parameters given",
                num.len(),
                den.len()
            )));
        }
    }
    let input = if theorem.is_addition() {
        let y = y.ok_or_else(|| input_error(format!("{theorem} needs --y")))?;
        IdentityInput::Addition(AdditionInput::new(num, den, x, y)?)
    } else {
        if y.is_some() {
            return Err(input_error(format!("{theorem} takes no --y")));
        }
        IdentityInput::Transform(HyperSpec::new(num, den, x)?)
    };
    Ok((p, input))
}

/// Re-runs the failing side of a report to recover the typed error.
fn evaluation_error(
    theorem: Theorem,
    input: &IdentityInput,
    policy: &TruncationPolicy,
    relaxed: bool,
) -> Option<Error> {
    if let Err(e) = pfq::eval_series(&input.lhs_spec(), policy) {
        return Some(e);
    }
    let rhs = match (theorem, input) {
        (Theorem::T1, IdentityInput::Addition(a)) => identities::th1_addition_rhs(a, policy),
        (Theorem::T2, IdentityInput::Addition(a)) => identities::th2_addition_rhs(a, policy, relaxed),
        (Theorem::T3, IdentityInput::Transform(s)) => identities::th3_kummer_rhs(s, policy),
        (Theorem::T4, IdentityInput::Transform(s)) => identities::th4_euler_rhs(s, policy, relaxed),
        _ => return None,
    };
    rhs.err()
}

fn print_report_text(r: &IdentityReport, tol: f64) {
    let side = |e: &Option<EvalResult>| e.as_ref().map_or("-".to_string(), |v| complex_text(v.value));
    println!("theorem      {}", r.theorem);
    println!("lhs          {}", side(&r.lhs));
    println!("rhs          {}", side(&r.rhs));
    println!("abs_diff     {}", r.abs_diff.map_or("-".into(), |v| format!("{v:.3e}")));
    println!("rel_diff     {}", r.rel_diff.map_or("-".into(), |v| format!("{v:.3e}")));
    println!("tolerance    {tol:.3e}");
    println!("domain_ok    {}", r.domain_ok);
    if r.experimental {
        println!("experimental true (relaxed domain gate)");
    }
    if let (Some(l), Some(rr)) = (&r.lhs, &r.rhs) {
        println!("terms        lhs {} rhs {}", l.terms_used, rr.terms_used);
    }
    println!("result       {}", if r.passed { "PASS" } else { "FAIL" });
    if let Some(d) = &r.diagnostic {
        println!("diagnostic   {d}");
    }
}

fn cmd_check(args: &CheckArgs) -> Result<u8, Failure> {
    let format = text_format(&args.format)?;
    let theorem: Theorem = args.theorem.parse()?;
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(input_error(format!("--tol must be positive, got {}", args.tol)));
    }
    let policy = args.policy.policy(args.series_tol);
    policy.validate()?;
    let (p, input) = check_input(args, theorem)?;
    let report = identities::verify(theorem, &input, &policy, args.tol, args.relaxed_domain);
    match format {
        OutputFormat::Json => {
            let mut v = sweep::report_json(&report, p);
            let m = v.as_object_mut().expect("object");
            m.insert("p".into(), p.into());
            m.insert("tol".into(), serde_json::json!(args.tol));
            print_json(&v);
        }
        _ => print_report_text(&report, args.tol),
    }
    if report.passed {
        return Ok(0);
    }
    if !report.domain_ok {
        let why = report.diagnostic.unwrap_or_else(|| "domain constraint violated".into());
        return Err(input_error(why));
    }
    if report.lhs.is_none() || report.rhs.is_none() {
        if let Some(e) = evaluation_error(theorem, &input, &policy, args.relaxed_domain) {
            return Err(e.into());
        }
    }
    Ok(EXIT_FAILED)
}

fn parse_slot_box(s: &str) -> Result<(String, ParameterBox), Failure> {
    let (name, rest) = s
        .split_once('=')
        .ok_or_else(|| input_error(format!("--slot-box needs name=re_lo,re_hi,im_lo,im_hi, got '{s}'")))?;
    let v: Vec<f64> = rest
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| input_error(format!("cannot parse --slot-box '{s}'")))?;
    match v[..] {
        [a, b, c, d] => Ok((name.trim().to_string(), ParameterBox { re: (a, b), im: (c, d) })),
        _ => Err(input_error(format!("--slot-box needs four numbers, got '{s}'"))),
    }
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig, Failure> {
    let theorem: Theorem = args.theorem.parse()?;
    let mut config = SweepConfig::new(theorem);
    config.p = args
        .p
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| input_error(format!("cannot parse --p '{}'", args.p)))?;
    config.draws = args.draws;
    config.seed = args.seed;
    config.threads = args.threads;
    config.tol = args.tol;
    config.policy = args.policy.policy(args.series_tol);
    config.relaxed_domain = args.relaxed_domain;
    config.output_format = args.format.parse()?;
    if let Some(r) = &args.box_re {
        config.parameter_box.re = parse_range(r, "--box-re")?;
    }
    if let Some(r) = &args.box_im {
        config.parameter_box.im = parse_range(r, "--box-im")?;
    }
    let mut slots = BTreeMap::new();
    for s in &args.slot_box {
        let (name, b) = parse_slot_box(s)?;
        slots.insert(name, b);
    }
    let p_max = config.p.iter().copied().max().unwrap_or(1);
    let (num_names, den_names) = sweep::slot_names(theorem, p_max);
    for name in slots.keys() {
        if !num_names.contains(name) && !den_names.contains(name) {
            return Err(input_error(format!("unknown slot '{name}' for {theorem} with p up to {p_max}")));
        }
    }
    config.slot_boxes = slots;
    config.validate()?;
    Ok(config)
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, Failure> {
    let config = sweep_config(args)?;
    let outcome = sweep::run_sweep(&config)?;
    print!("{}", sweep::render(&outcome, config.output_format)?);
    Ok(if outcome.all_passed() { 0 } else { EXIT_FAILED })
}

fn cmd_rules(args: &RulesArgs) -> Result<u8, Failure> {
    let format = text_format(&args.format)?;
    let kind = match args.kind {
        RuleArg::Legendre01 => RuleKind::Legendre01,
        RuleArg::Laguerre0Inf => RuleKind::Laguerre0Inf,
    };
    let rule = oracle::build_rule(kind, args.order)?;
    match format {
        OutputFormat::Json => {
            let mut m = Map::new();
            m.insert("kind".into(), kind.to_string().into());
            m.insert("order".into(), rule.order.into());
            let nodes =
                rule.nodes.iter().map(|(t, w)| serde_json::json!([t.to_sci_string(32), w.to_sci_string(32)])).collect();
            m.insert("nodes".into(), Value::Array(nodes));
            print_json(&Value::Object(m));
        }
        _ => {
            println!("# {kind}, order {}, {} nodes", rule.order, rule.nodes.len());
            for (i, (t, w)) in rule.nodes.iter().enumerate() {
                println!("{i:>4}  {}  {}", t.to_sci_string(32), w.to_sci_string(32));
            }
        }
    }
    Ok(0)
}

/// Splices the entries of `sweep --config FILE` into the arguments.
fn expand_config(argv: Vec<String>) -> Result<Vec<String>, Failure> {
    let Some(pos) = argv.iter().position(|a| a == "sweep") else {
        return Ok(argv);
    };
    let rest = &argv[pos + 1..];
    let path = rest.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            rest.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    });
    let Some(path) = path else {
        return Ok(argv);
    };
    let entries = config::read(&path).map_err(input_error)?;
    let mut out = argv[..=pos].to_vec();
    out.extend(config::to_args(&entries, rest));
    out.extend(rest.iter().cloned());
    Ok(out)
}

fn run() -> Result<u8, Failure> {
    let argv = expand_config(std::env::args().collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return Ok(code);
        }
    };
    match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Check(a) => cmd_check(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Rules(a) => cmd_rules(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("pfq: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
