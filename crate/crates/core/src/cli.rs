//! Command-line front end.
//!
//! Inputs are CSV (one sequence per line, or one matrix row per line) or a
//! JSON envelope such as `{"matrix": [[1, 2], [3, 4]], "u": ["1/2", 3], "v": [1, "0.25"]}`.
//! Entries may be integers, decimals or `p/q` fractions; decimals are read
//! exactly. Exit codes: 0 success, 1 input error, 2 hypothesis unmet,
//! 3 a checked claim failed.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::decompose::{self, SplitKind};
use crate::dompoly::{self, PolySeq, Shape};
use crate::error::{Error, Result};
use crate::oracle::{self, TrialConfig};
use crate::rational::{self, Rational};
use crate::seqshape::{self, Seq};
use crate::tpcheck::{self, Kernel, Minor};
use crate::transform::{self, ClaimOutcome, ConvexityClass};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_FALSIFIED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tpmodal", version, about = "Total positivity and sequence shape analysis")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sign changes, S+, modality, decompositions and the modality of -u.
    Analyze {
        /// Sequence file (CSV line or JSON envelope with "u"); `-` reads stdin.
        input: PathBuf,
        /// Order for the convexity check.
        #[arg(long)]
        order: Option<usize>,
        /// Also test m-modality through sign arrangements.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Minor-sign signature and transform verdicts of a matrix.
    Classify {
        /// Matrix file (CSV rows or JSON envelope with "matrix"); `-` reads stdin.
        input: PathBuf,
        /// Highest minor order to classify (default: the smaller dimension).
        #[arg(long)]
        order: Option<usize>,
        /// Report modality and convexity verdicts for this m.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Quotient transform `w = Ku / Kv` with modality and convexity checks.
    Quotient {
        /// Either one JSON envelope with "matrix", "u", "v" or three files: matrix, u, v.
        #[arg(num_args = 1..=3, required = true)]
        inputs: Vec<PathBuf>,
        /// Modality of u/v (default: computed).
        #[arg(long)]
        m: Option<usize>,
        /// Convexity order.
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Shift-sum polynomial recurrence and shape propagation.
    Dompoly {
        /// Seed coefficient lists, one polynomial per line (default: (1+x)^i).
        #[arg(long)]
        seeds: Option<PathBuf>,
        /// Number of previous generations summed.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Power of x multiplying the sum.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Last generation computed.
        #[arg(long, default_value_t = dompoly::DEFAULT_N_MAX)]
        n_max: usize,
        /// Convexity order reported per generation.
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Quick built-in verification run.
    Selftest {
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

/// Machine-readable result of one command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub citations: Vec<String>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            inputs: Map::new(),
            results: Map::new(),
            citations: Vec::new(),
        }
    }

    fn input(&mut self, key: &str, value: Value) {
        self.inputs.insert(key.into(), value);
    }

    fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.into(), value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in &self.inputs {
            out.push_str(&format!("input {k}: {}\n", render_value(v)));
        }
        for (k, v) in &self.results {
            match v {
                Value::Array(items) if items.iter().any(Value::is_object) => {
                    out.push_str(&format!("{k}:\n"));
                    for item in items {
                        out.push_str(&format!("  - {}\n", render_value(item)));
                    }
                }
                _ => out.push_str(&format!("{k}: {}\n", render_value(v))),
            }
        }
        if !self.citations.is_empty() {
            out.push_str("clauses:\n");
            for c in &self.citations {
                out.push_str(&format!("  - {c}\n"));
            }
        }
        out
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            items.iter().map(render_value).collect::<Vec<_>>().join(", ")
        }
        Value::Array(items) => items
            .iter()
            .map(|x| format!("({})", render_value(x)))
            .collect::<Vec<_>>()
            .join(" "),
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| format!("{k}={}", render_value(x)))
            .collect::<Vec<_>>()
            .join("  "),
        other => other.to_string(),
    }
}

fn exact(values: &[Rational]) -> Value {
    Value::from(values.iter().map(rational::format_exact).collect::<Vec<_>>())
}

fn decimals(values: &[Rational]) -> Value {
    Value::from(values.iter().map(|x| rational::render_shortest(x, 4)).collect::<Vec<_>>())
}

fn modal_word(p: usize) -> String {
    match p {
        1 => "unimodal".into(),
        2 => "bimodal".into(),
        p => format!("{p}-modal"),
    }
}

/// Rows of a CSV-like text: fields separated by commas (or whitespace when a
/// line has no comma); blank lines and lines starting with `#` are skipped.
pub fn parse_rows(text: &str) -> Result<Vec<Vec<Rational>>> {
    let mut rows = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        let mut offset = 0;
        let fields: Vec<&str> = if line.contains(',') {
            line.split(',').collect()
        } else {
            line.split(char::is_whitespace).collect()
        };
        for field in fields {
            let lead = field.len() - field.trim_start().len();
            let column = line[..offset + lead].chars().count() + 1;
            offset += field.len() + 1;
            if field.trim().is_empty() && !line.contains(',') {
                continue;
            }
            let x = rational::parse_rational(field).map_err(|message| Error::Parse {
                line: li + 1,
                column,
                message,
            })?;
            row.push(x);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn value_to_rational(v: &Value, path: &str) -> Result<Rational> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(Error::InvalidArgument(format!("{path}: expected a number, found {other}"))),
    };
    rational::parse_rational(&text).map_err(|m| Error::InvalidArgument(format!("{path}: {m}")))
}

fn value_to_vec(v: &Value, path: &str) -> Result<Vec<Rational>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::InvalidArgument(format!("{path}: expected an array")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| value_to_rational(x, &format!("{path}[{i}]")))
        .collect()
}

fn value_to_rows(v: &Value, path: &str) -> Result<Vec<Vec<Rational>>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::InvalidArgument(format!("{path}: expected an array of rows")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| value_to_vec(x, &format!("{path}[{i}]")))
        .collect()
}

/// Parsed input file: either a JSON envelope or CSV rows.
pub enum Input {
    Envelope(Map<String, Value>),
    Rows(Vec<Vec<Rational>>),
}

impl Input {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            match v {
                Value::Object(map) => Ok(Input::Envelope(map)),
                _ => Err(Error::InvalidArgument("JSON input must be an object".into())),
            }
        } else {
            Ok(Input::Rows(parse_rows(text)?))
        }
    }

    fn field(&self, key: &str) -> Result<&Value> {
        match self {
            Input::Envelope(map) => map
                .get(key)
                .ok_or_else(|| Error::InvalidArgument(format!("JSON input lacks \"{key}\""))),
            Input::Rows(_) => unreachable!("CSV input has no fields"),
        }
    }

    pub fn sequence(&self, key: &str) -> Result<Vec<Rational>> {
        match self {
            Input::Envelope(_) => value_to_vec(self.field(key)?, key),
            Input::Rows(rows) => match rows.as_slice() {
                [row] => Ok(row.clone()),
                [] => Err(Error::EmptySequence),
                _ => Err(Error::InvalidArgument(format!(
                    "expected one sequence, found {} lines",
                    rows.len()
                ))),
            },
        }
    }

    pub fn matrix(&self) -> Result<Vec<Vec<Rational>>> {
        match self {
            Input::Envelope(_) => value_to_rows(self.field("matrix")?, "matrix"),
            Input::Rows(rows) => Ok(rows.clone()),
        }
    }

    pub fn polys(&self) -> Result<Vec<Vec<Rational>>> {
        match self {
            Input::Envelope(_) => value_to_rows(self.field("seeds")?, "seeds"),
            Input::Rows(rows) => Ok(rows.clone()),
        }
    }
}

fn read_input(path: &Path) -> Result<Input> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::InvalidArgument(format!("cannot read stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    }
    Input::parse(&text)
}

fn minor_json(m: &Minor) -> Value {
    json!({"rows": m.rows, "cols": m.cols, "value": rational::format_exact(&m.value)})
}

pub fn cmd_analyze(u: &[Rational], order: Option<usize>, m: Option<usize>) -> Result<(Report, i32)> {
    let u = Seq::new(u.to_vec())?;
    let mut rep = Report::new("analyze");
    rep.input("u", exact(&u));
    let pattern = seqshape::sign_changes(&u);
    let profile = seqshape::modality(&u);
    rep.result("length", json!(u.len()));
    rep.result("sign_changes", json!(pattern.count));
    rep.result("sign_pattern", json!(pattern.to_string()));
    rep.result("s_plus", json!(profile.s_plus.value));
    rep.result("s_plus_level", json!(rational::format_exact(&profile.s_plus.witness)));
    rep.result("modality", json!(profile.m));
    rep.result("shape", json!(modal_word(profile.m)));
    let ivs = |v: &[seqshape::Interval]| Value::from(v.iter().map(|i| i.to_string()).collect::<Vec<_>>());
    rep.result("mode_intervals", ivs(&profile.mode_intervals));
    rep.result("valley_intervals", ivs(&profile.valley_intervals));
    rep.result("regular_modality", json!(profile.regular_m));
    for (key, kind) in [("partition", SplitKind::Partition), ("decomposition", SplitKind::Decomposition)] {
        let d = decompose::decompose(&u, profile.m, kind)?;
        rep.result(key, Value::from(d.parts.iter().map(|p| exact(p)).collect::<Vec<_>>()));
    }
    if u.is_constant() {
        rep.result("negation_modality", json!(1));
    } else {
        let neg = decompose::negate_modality(&u)?;
        rep.result("aligned_s_plus", json!(neg.aligned_s_plus));
        rep.result("negation_modality", json!(neg.observed));
        rep.citations.push(format!(
            "aligned decomposition has S+ = {}, so -u is {}-modal",
            neg.aligned_s_plus, neg.predicted
        ));
    }
    let order = order.or((u.len() > 2).then_some(2));
    if let Some(r) = order {
        let class = transform::convexity_order(&u, r)?;
        rep.result("convexity_order", json!(r));
        rep.result("convexity", json!(class.to_string()));
    }
    if let Some(m) = m {
        rep.result(&format!("{m}_modal_by_signs"), json!(seqshape::check_mmodal_by_signs(&u, m)?));
    }
    Ok((rep, EXIT_OK))
}

pub fn cmd_classify(rows: Vec<Vec<Rational>>, order: Option<usize>, m: Option<usize>) -> Result<(Report, i32)> {
    let k = Kernel::new(rows)?;
    let mut rep = Report::new("classify");
    rep.input("matrix", Value::from(k.to_rows().iter().map(|r| exact(r)).collect::<Vec<_>>()));
    let r = order.unwrap_or(k.rows().min(k.cols()));
    if r == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let sr = transform::classify_up_to(&k, r)?;
    let signs: Vec<String> = (1..=r)
        .map(|i| sr.order_sign(i).map_or("?".into(), |s| s.to_string()))
        .collect();
    rep.result("rows", json!(k.rows()));
    rep.result("cols", json!(k.cols()));
    rep.result("order", json!(r));
    rep.result("signature", json!(signs));
    rep.result("sign_regular", json!(sr.is_sr(r)?));
    rep.result("totally_positive", json!(sr.is_tp_to(r)?));
    rep.result("totally_negative", json!(sr.is_tn_to(r)?));
    if let Some(w) = &sr.witness {
        rep.result(
            "mixed_witness",
            json!({"order": w.order, "positive": minor_json(&w.positive), "negative": minor_json(&w.negative)}),
        );
    }
    if r >= 3 {
        let v = tpcheck::up_ur_verdict(&sr)?;
        rep.result("unimodality_verdict", json!(v.kind.to_string()));
        rep.citations.push(v.clause);
    }
    if let Some(m) = m {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        let mv = tpcheck::modality_preserver_verdict(&transform::classify_up_to(&k, 2 * m + 1)?, m)?;
        let cv = tpcheck::convexity_preserver_verdict(&transform::classify_up_to(&k, m + 1)?, m)?;
        rep.result("modality_verdict", json!(mv.kind.to_string()));
        rep.result("convexity_verdict", json!(cv.kind.to_string()));
        rep.citations.push(mv.clause);
        rep.citations.push(cv.clause);
    }
    Ok((rep, EXIT_OK))
}

fn outcome_json(o: &ClaimOutcome) -> Value {
    match o {
        ClaimOutcome::Confirmed => json!("confirmed"),
        ClaimOutcome::Violated(s) => json!(format!("violated: {s}")),
        ClaimOutcome::HypothesisUnmet(s) => json!(format!("hypothesis unmet: {s}")),
    }
}

pub fn cmd_quotient(
    rows: Vec<Vec<Rational>>,
    u: &[Rational],
    v: &[Rational],
    m: Option<usize>,
    order: usize,
) -> Result<(Report, i32)> {
    let k = Kernel::new(rows)?;
    let mut rep = Report::new("quotient");
    rep.input("matrix", Value::from(k.to_rows().iter().map(|r| exact(r)).collect::<Vec<_>>()));
    rep.input("u", exact(u));
    rep.input("v", exact(v));
    let m = match m {
        Some(m) => m,
        None => {
            if let Some(i) = v.iter().position(num_traits::Zero::is_zero) {
                return Err(Error::InvalidArgument(format!("v has a zero entry at index {}", i + 1)));
            }
            let ratio: Vec<Rational> = u.iter().zip(v).map(|(a, b)| a / b).collect();
            seqshape::modality(&ratio).m
        }
    };
    let q = transform::quotient_transform(&k, u, v, m)?;
    rep.result("w", exact(&q.w));
    rep.result("w_decimal", decimals(&q.w));
    rep.result("input_modality", json!(q.input_modality));
    rep.result("modality", json!(q.p));
    rep.result("shape", json!(modal_word(q.p)));
    rep.result("modality_claim", outcome_json(&q.outcome));
    if let Some(c) = &q.clause {
        rep.citations.push(format!("modality bound at order {}: {c}", 2 * m + 1));
    }
    let mut code = match q.outcome {
        ClaimOutcome::Confirmed => EXIT_OK,
        ClaimOutcome::Violated(_) => EXIT_FALSIFIED,
        ClaimOutcome::HypothesisUnmet(_) => EXIT_HYPOTHESIS,
    };
    if u.len() > order && order > 0 {
        let c = transform::quotient_convexity(&k, u, v, order)?;
        let show = |x: Option<ConvexityClass>| json!(x.map_or("n/a".into(), |c| c.to_string()));
        rep.result("convexity_order", json!(order));
        rep.result("input_convexity", show(c.input_class));
        rep.result("convexity", show(c.convexity_class));
        rep.result("degree_preservation", json!(c.degree_certified.unwrap_or(false)));
        rep.result("convexity_claim", outcome_json(&c.outcome));
        if let Some(cl) = &c.clause {
            rep.citations.push(format!("convexity at order {}: {cl}", order + 1));
        }
        if matches!(c.outcome, ClaimOutcome::Violated(_)) {
            code = EXIT_FALSIFIED;
        }
    }
    Ok((rep, code))
}

pub fn cmd_dompoly(seeds: Vec<PolySeq>, m: usize, k: usize, n_max: usize, order: usize) -> Result<(Report, i32)> {
    let mut rep = Report::new("dompoly");
    rep.input("m", json!(m));
    rep.input("k", json!(k));
    rep.input("n_max", json!(n_max));
    rep.input("seeds", Value::from(seeds.iter().map(|p| exact(&p.shape_terms())).collect::<Vec<_>>()));
    let gens = dompoly::unroll(&seeds, m, k, n_max)?;
    let per_gen: Vec<Value> = gens
        .iter()
        .map(|p| {
            let terms = p.shape_terms();
            let conv = transform::convexity_order(&terms, order).ok();
            json!({
                "n": p.n,
                "coeffs": exact(&terms),
                "modality": seqshape::modality(&terms).m,
                "convexity": conv.map_or("n/a".into(), |c| c.to_string()),
            })
        })
        .collect();
    rep.result("generations", Value::from(per_gen));
    if n_max > m {
        let via_kernel = dompoly::unroll_via_kernel(&seeds, m, k, n_max)?;
        rep.result("kernel_matches_recurrence", json!(via_kernel == gens));
    }
    let (claim, code) = if n_max <= m {
        ("no generations past the seeds".to_string(), EXIT_OK)
    } else {
        match dompoly::shape_propagation(&seeds, m, k, n_max, Shape::Unimodal) {
            Ok(r) if r.hypothesis_holds => ("confirmed: every generation is unimodal".into(), EXIT_OK),
            Ok(_) => (format!("hypothesis unmet: f_{} is not unimodal", m + 1), EXIT_HYPOTHESIS),
            Err(Error::Falsified(s)) => (format!("violated: {s}"), EXIT_FALSIFIED),
            Err(e) => return Err(e),
        }
    };
    rep.result("unimodality_claim", json!(claim));
    let sum = if m == 1 {
        "f_(n-1)".to_string()
    } else {
        format!("(f_(n-1) + ... + f_(n-{m}))")
    };
    rep.citations.push(format!("f_n = x^{k} {sum}; unimodal f_{} propagates", m + 1));
    Ok((rep, code))
}

/// One named check of the self test.
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn matrix_a() -> Kernel {
    Kernel::from_ints(&[
        [-1, -2, -3, -4],
        [-5, -6, -7, -8],
        [-9, -10, -11, -11],
        [-13, -14, -15, -11],
    ])
    .expect("rectangular")
}

fn golden(u: &[i64], v: &[i64], expected: &[&str]) -> Result<(bool, String)> {
    let q = transform::quotient_transform(&matrix_a(), &rational::ints(u), &rational::ints(v), {
        let ratio: Vec<Rational> = u.iter().zip(v).map(|(a, b)| rational::ratio(*a, *b)).collect();
        seqshape::modality(&ratio).m
    })?;
    let got: Vec<String> = q.w.iter().map(|x| rational::render_fixed(x, 4)).collect();
    Ok((got == expected, got.join(", ")))
}

pub fn cmd_selftest(seed: u64) -> Result<(Report, i32)> {
    let cfg = TrialConfig {
        seed,
        n_trials: 100,
        ..TrialConfig::default()
    };
    let mut checks = vec![
        check("quotient example, unimodal to bimodal", || {
            golden(&[0, 3, 3, 1], &[1, 1, 1, 1], &["1.9000", "1.8077", "1.8049", "1.8491"])
        }),
        check("quotient example, bimodal to unimodal", || {
            golden(&[6, 5, 6, 7], &[3, 1, 2, 1], &["4.1333", "3.6744", "3.5286", "3.3511"])
        }),
        check("quotient example, convex to concave", || {
            let c = transform::quotient_convexity(&matrix_a(), &rational::ints(&[4, 2, 1, 2]), &rational::ints(&[1, 1, 2, 2]), 2)?;
            Ok((
                c.input_class == Some(ConvexityClass::Convex) && c.convexity_class == Some(ConvexityClass::Concave),
                format!(
                    "{} -> {}",
                    c.input_class.map_or("n/a".into(), |x| x.to_string()),
                    c.convexity_class.map_or("n/a".into(), |x| x.to_string())
                ),
            ))
        }),
        check("matrix signature agrees with cofactor oracle", || {
            let a = matrix_a();
            let fast = tpcheck::classify_full(&a);
            let slow = oracle::naive_classify(&a, 4)?;
            Ok((fast.eps == slow.eps, fast.signature()))
        }),
        check("partition of 1,5,3,4,2", || {
            let u = rational::ints(&[1, 5, 3, 4, 2]);
            let p = decompose::decompose(&u, 2, SplitKind::Partition)?;
            let d = decompose::decompose(&u, 2, SplitKind::Decomposition)?;
            let ok = p.parts[0].terms() == &rational::ints(&[1, 5, 3])[..]
                && p.parts[1].terms() == &rational::ints(&[4, 2])[..]
                && d.parts[1].terms() == &rational::ints(&[3, 4, 2])[..];
            Ok((ok, format!("{} parts", p.parts.len())))
        }),
        check("modality agrees with interval enumeration, N <= 4", || {
            let mut cases = 0;
            for n in 1..=4u32 {
                for code in 0..5usize.pow(n) {
                    let u: Vec<Rational> = (0..n)
                        .map(|i| rational::int((code / 5usize.pow(i) % 5) as i64 - 2))
                        .collect();
                    if seqshape::modality(&u).m != oracle::brute_modality(&u)? {
                        return Ok((false, format!("disagreement on {}", Seq::new(u)?)));
                    }
                    cases += 1;
                }
            }
            Ok((true, format!("{cases} sequences")))
        }),
        check("variation diminishing on random TP kernels", || {
            let mut tested = 0;
            for t in 0..cfg.n_trials {
                let mut rng = cfg.rng(t);
                let k = oracle::random_tp_kernel(&mut rng, 4, 3);
                let u = oracle::random_ints(&mut rng, 4, -cfg.value_range, cfg.value_range);
                if seqshape::sign_changes(&u).count > 2 {
                    continue;
                }
                if !transform::vd_check(&k, &u, 3)? {
                    return Ok((false, format!("trial {t}")));
                }
                tested += 1;
            }
            Ok((true, format!("{tested} trials")))
        }),
        check("stochastic TP kernels keep unimodality", || {
            for t in 0..cfg.n_trials {
                let mut rng = cfg.rng(t);
                let n = cfg.dim(&mut rng);
                let k = oracle::row_normalized(&oracle::random_tp_kernel(&mut rng, n, 3));
                let u = oracle::random_unimodal(&mut rng, n, 3);
                if seqshape::modality(&transform::apply(&k, &u)?).m != 1 {
                    return Ok((false, format!("trial {t}")));
                }
            }
            Ok((true, format!("{} trials", cfg.n_trials)))
        }),
        check("modality of -u from aligned decomposition", || {
            let mut tested = 0;
            for t in 0..cfg.n_trials {
                let mut rng = cfg.rng(t);
                let m = 1 + t % 3;
                if let Some(u) = oracle::random_mmodal(&mut rng, m, 10, 4) {
                    decompose::negate_modality(&u)?;
                    tested += 1;
                }
            }
            Ok((true, format!("{tested} sequences")))
        }),
        check("single-step recurrence stays unimodal", || {
            let seeds = [PolySeq::from_ints(1, &[1, 2, 1])];
            let r = dompoly::shape_propagation(&seeds, 1, 1, 20, Shape::Unimodal)?;
            let eq = dompoly::unroll_via_kernel(&seeds, 1, 1, 20)? == dompoly::unroll(&seeds, 1, 1, 20)?;
            Ok((r.violations().is_empty() && eq, format!("{} generations", r.generations.len())))
        }),
    ];
    let mut rep = Report::new("selftest");
    rep.input("seed", json!(seed));
    let all = checks.iter().all(|c| c.passed);
    rep.result(
        "checks",
        Value::from(
            checks
                .drain(..)
                .map(|c| json!({"check": c.name, "passed": c.passed, "detail": c.detail}))
                .collect::<Vec<_>>(),
        ),
    );
    rep.result("all_passed", json!(all));
    Ok((rep, if all { EXIT_OK } else { EXIT_FALSIFIED }))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::HypothesisUnmet(_) => EXIT_HYPOTHESIS,
        Error::Falsified(_) => EXIT_FALSIFIED,
        _ => EXIT_INPUT,
    }
}

fn execute(cli: Cli) -> Result<(Report, i32)> {
    match cli.command {
        Command::Analyze { input, order, m } => cmd_analyze(&read_input(&input)?.sequence("u")?, order, m),
        Command::Classify { input, order, m } => cmd_classify(read_input(&input)?.matrix()?, order, m),
        Command::Quotient { inputs, m, order } => match inputs.as_slice() {
            [env] => {
                let env = read_input(env)?;
                if !matches!(env, Input::Envelope(_)) {
                    return Err(Error::InvalidArgument("a single quotient input must be a JSON envelope".into()));
                }
                cmd_quotient(env.matrix()?, &env.sequence("u")?, &env.sequence("v")?, m, order)
            }
            [a, u, v] => cmd_quotient(
                read_input(a)?.matrix()?,
                &read_input(u)?.sequence("u")?,
                &read_input(v)?.sequence("v")?,
                m,
                order,
            ),
            _ => Err(Error::InvalidArgument("quotient takes one envelope or three files".into())),
        },
        Command::Dompoly { seeds, m, k, n_max, order } => {
            let seeds = match seeds {
                Some(path) => read_input(&path)?
                    .polys()?
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| PolySeq::new(i + 1, c))
                    .collect(),
                None => dompoly::demo_seeds(m),
            };
            cmd_dompoly(seeds, m, k, n_max, order)
        }
        Command::Selftest { seed } => cmd_selftest(seed),
    }
}

/// Parses `args`, runs the command and writes the report; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    let json = cli.json;
    match execute(cli) {
        Ok((report, code)) => {
            let text = if json { report.to_json() + "\n" } else { report.to_text() };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
