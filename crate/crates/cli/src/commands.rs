use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

use qzeta_core::arith::{
    bernoulli as bernoulli_numbers, r4_bruteforce, r4_formula, rep_count_table, t4_formula, t8_formula,
    williams_formula,
};
use qzeta_core::catalog::{catalog, lookup, verify as verify_entry, IdentityEntry, VerificationReport};
use qzeta_core::dsl;
use qzeta_core::qlimits::{run_limit_experiment, zeta_even, EvalConfig, LimitError, LimitExperiment};
use qzeta_core::real::Precision;
use qzeta_core::PowerSeries;

use crate::report::{to_csv, to_json, Format, ReportDocument};
use crate::{Lemma, Side};

pub struct Options {
    pub format: Format,
    pub order: usize,
    pub precision: u32,
    pub echo: String,
}

/// Rendered output and whether every check in it passed.
pub struct Output {
    pub text: String,
    pub passed: bool,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad ids, unparsable DSL, arguments out of range.
    Usage(String),
    /// A numerical evaluation that could not finish.
    Failure(String),
}

impl CliError {
    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

type CmdResult = Result<Output, CliError>;

fn resolve(id: &str) -> Result<&'static IdentityEntry, CliError> {
    lookup(id).ok_or_else(|| CliError::Usage(format!("unknown identity `{id}` (see `qzeta list`)")))
}

// --- list ---

#[derive(Serialize)]
struct LimitJson {
    constant: &'static str,
    scaling: u32,
}

#[derive(Serialize)]
struct ListItem {
    id: &'static str,
    description: &'static str,
    reference: &'static str,
    limit: Option<LimitJson>,
}

#[derive(Serialize)]
struct ListRow {
    id: &'static str,
    description: &'static str,
    reference: &'static str,
    limit_constant: Option<&'static str>,
    limit_scaling: Option<u32>,
}

pub fn list(opts: &Options) -> CmdResult {
    let entries = catalog();
    let text = match opts.format {
        Format::Json => {
            let items: Vec<ListItem> = entries
                .iter()
                .map(|e| ListItem {
                    id: e.id,
                    description: e.description,
                    reference: e.reference,
                    limit: e.limit.map(|l| LimitJson { constant: l.constant.name(), scaling: l.scaling }),
                })
                .collect();
            to_json(&items)
        }
        Format::Csv => {
            let rows: Vec<ListRow> = entries
                .iter()
                .map(|e| ListRow {
                    id: e.id,
                    description: e.description,
                    reference: e.reference,
                    limit_constant: e.limit.map(|l| l.constant.name()),
                    limit_scaling: e.limit.map(|l| l.scaling),
                })
                .collect();
            to_csv(&["id", "description", "reference", "limit_constant", "limit_scaling"], &rows)
        }
        Format::Text => {
            let limits: Vec<String> = entries
                .iter()
                .map(|e| match e.limit {
                    Some(l) => format!("(1-q)^{} -> {}", l.scaling, l.constant.name()),
                    None => "-".to_string(),
                })
                .collect();
            let w_id = entries.iter().map(|e| e.id.len()).max().unwrap_or(0);
            let w_ref = entries.iter().map(|e| e.reference.len()).max().unwrap_or(0);
            let w_lim = limits.iter().map(String::len).max().unwrap_or(0);
            let mut s = String::new();
            for (e, limit) in entries.iter().zip(&limits) {
                let _ = writeln!(s, "{:<w_id$}  {:<w_ref$}  {:<w_lim$}  {}", e.id, e.reference, limit, e.description);
            }
            s
        }
    };
    Ok(Output { text, passed: true })
}

// --- verify / check ---

#[derive(Serialize)]
struct MismatchJson {
    index: usize,
    lhs: String,
    rhs: String,
}

#[derive(Serialize)]
struct VerifyItem {
    identity: String,
    order: usize,
    status: &'static str,
    first_mismatch: Option<MismatchJson>,
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct VerifyRow {
    identity: String,
    order: usize,
    status: &'static str,
    mismatch_index: Option<usize>,
    mismatch_lhs: Option<String>,
    mismatch_rhs: Option<String>,
    elapsed_ms: f64,
}

fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn verify_item(r: &VerificationReport) -> VerifyItem {
    VerifyItem {
        identity: r.identity.clone(),
        order: r.order,
        status: r.status().as_str(),
        first_mismatch: r.first_mismatch.as_ref().map(|m| MismatchJson {
            index: m.index,
            lhs: m.lhs.to_string(),
            rhs: m.rhs.to_string(),
        }),
        elapsed_ms: millis(r.elapsed),
    }
}

fn render_reports(opts: &Options, reports: &[VerificationReport]) -> Output {
    let passed = reports.iter().all(VerificationReport::is_equal);
    let items: Vec<VerifyItem> = reports.iter().map(verify_item).collect();
    let text = match opts.format {
        Format::Json => to_json(&ReportDocument::new(&opts.echo, items, passed)),
        Format::Csv => {
            let rows: Vec<VerifyRow> = items
                .into_iter()
                .map(|i| {
                    let (idx, l, r) = match i.first_mismatch {
                        Some(m) => (Some(m.index), Some(m.lhs), Some(m.rhs)),
                        None => (None, None, None),
                    };
                    VerifyRow {
                        identity: i.identity,
                        order: i.order,
                        status: i.status,
                        mismatch_index: idx,
                        mismatch_lhs: l,
                        mismatch_rhs: r,
                        elapsed_ms: i.elapsed_ms,
                    }
                })
                .collect();
            to_csv(
                &["identity", "order", "status", "mismatch_index", "mismatch_lhs", "mismatch_rhs", "elapsed_ms"],
                &rows,
            )
        }
        Format::Text => {
            let mut s = String::new();
            for i in &items {
                let _ = write!(s, "{:<18} N={:<6} {:<8}", i.identity, i.order, i.status);
                if let Some(m) = &i.first_mismatch {
                    let _ = write!(s, " first difference at q^{}: lhs {} vs rhs {}", m.index, m.lhs, m.rhs);
                }
                let _ = writeln!(s, " ({:.1} ms)", i.elapsed_ms);
            }
            let _ = writeln!(s, "{}", if passed { "all equal" } else { "MISMATCH" });
            s
        }
    };
    Output { text, passed }
}

pub fn verify(opts: &Options, ids: &[String]) -> CmdResult {
    let mut entries: Vec<&'static IdentityEntry> = Vec::new();
    for id in ids {
        if id == "all" {
            entries.extend(catalog());
        } else {
            entries.push(resolve(id)?);
        }
    }
    let order = opts.order;
    // one thread per identity; reports come back in request order
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = entries.iter().map(|&e| scope.spawn(move || verify_entry(e, order))).collect();
        handles.into_iter().map(|h| h.join()).collect::<Vec<_>>()
    });
    let mut reports = Vec::with_capacity(results.len());
    for (entry, r) in entries.iter().zip(results) {
        match r {
            Ok(Ok(report)) => reports.push(report),
            Ok(Err(e)) => return Err(CliError::Failure(format!("{}: {e}", entry.id))),
            Err(_) => return Err(CliError::Failure(format!("{}: verification thread panicked", entry.id))),
        }
    }
    Ok(render_reports(opts, &reports))
}

pub fn check(opts: &Options, lhs: Option<&str>, rhs: Option<&str>, id: Option<&str>) -> CmdResult {
    let (l, r) = match (id, lhs, rhs) {
        (Some(id), _, _) => dsl::catalog_text(id)
            .ok_or_else(|| CliError::Usage(format!("no shipped DSL text for `{id}` (see `qzeta list`)")))?,
        (None, Some(l), Some(r)) => (l, r),
        _ => return Err(CliError::Usage("check needs LHS and RHS, or --id".into())),
    };
    let mut report = dsl::check(l, r, opts.order).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(id) = id {
        report.identity = id.to_string();
    }
    Ok(render_reports(opts, &[report]))
}

// --- expand ---

#[derive(Serialize)]
struct CoefficientRow {
    index: usize,
    value: String,
}

pub fn expand(opts: &Options, id: Option<&str>, expr: Option<&str>, side: Side) -> CmdResult {
    let series: PowerSeries = match (id, expr) {
        (_, Some(text)) => {
            let ast = dsl::parse(text).map_err(|e| CliError::Usage(e.to_string()))?;
            dsl::eval(&ast, &dsl::EvalContext::new(opts.order)).map_err(|e| CliError::Usage(e.to_string()))?
        }
        (Some(id), None) => {
            let entry = resolve(id)?;
            let builder = match side {
                Side::Lhs => entry.lhs,
                Side::Rhs => entry.rhs,
            };
            builder(opts.order).map_err(|e| CliError::Failure(format!("{id}: {e}")))?
        }
        (None, None) => return Err(CliError::Usage("expand needs an identity id or --expr".into())),
    };
    let values: Vec<String> = series.coeffs().iter().map(ToString::to_string).collect();
    let text = match opts.format {
        Format::Json => to_json(&values),
        Format::Csv => {
            let rows: Vec<CoefficientRow> =
                values.into_iter().enumerate().map(|(index, value)| CoefficientRow { index, value }).collect();
            to_csv(&["index", "value"], &rows)
        }
        Format::Text => values.join(",") + "\n",
    };
    Ok(Output { text, passed: true })
}

// --- oracle ---

#[derive(Serialize)]
struct OracleRow {
    lemma: &'static str,
    n: u64,
    brute_force: String,
    formula: String,
    agree: bool,
}

fn lemma_name(l: Lemma) -> &'static str {
    match l {
        Lemma::T4 => "t4",
        Lemma::T8 => "t8",
        Lemma::Williams => "williams",
        Lemma::R4 => "r4",
    }
}

pub fn oracle(opts: &Options, lemma: Lemma, max: u64) -> CmdResult {
    let name = lemma_name(lemma);
    let brute: Vec<u128> = match lemma {
        Lemma::T4 => rep_count_table(&[1, 1, 1, 1], max),
        Lemma::T8 => rep_count_table(&[1; 8], max),
        Lemma::Williams => rep_count_table(&[1, 1, 2, 2], max),
        Lemma::R4 => (0..=max).map(r4_bruteforce).collect(),
    };
    let rows: Vec<OracleRow> = (0..=max)
        .zip(brute)
        .map(|(n, b)| {
            let formula = match lemma {
                Lemma::T4 => Ok(t4_formula(n)),
                Lemma::T8 => Ok(t8_formula(n)),
                Lemma::Williams => williams_formula(n),
                Lemma::R4 => Ok(r4_formula(n)),
            };
            let agree = formula.as_ref().is_ok_and(|&f| f == b);
            let formula = match formula {
                Ok(f) => f.to_string(),
                Err(e) => e.to_string(),
            };
            OracleRow { lemma: name, n, brute_force: b.to_string(), formula, agree }
        })
        .collect();
    let passed = rows.iter().all(|r| r.agree);
    let text = match opts.format {
        Format::Json => to_json(&ReportDocument::new(&opts.echo, rows, passed)),
        Format::Csv => to_csv(&["lemma", "n", "brute_force", "formula", "agree"], &rows),
        Format::Text => {
            let bad: Vec<&OracleRow> = rows.iter().filter(|r| !r.agree).collect();
            let mut s = format!("{name}: n = 0..={max}, {} of {} agree\n", rows.len() - bad.len(), rows.len());
            for r in bad.iter().take(20) {
                let _ = writeln!(s, "  n={}: brute force {} vs formula {}", r.n, r.brute_force, r.formula);
            }
            s
        }
    };
    Ok(Output { text, passed })
}

// --- limit ---

#[derive(Serialize)]
struct LimitRow {
    identity: String,
    scaling: u32,
    target: &'static str,
    j: u32,
    q: String,
    lhs: String,
    rhs: String,
    lhs_error: String,
    rhs_error: String,
}

fn limit_rows(exp: &LimitExperiment, sig: u32) -> Vec<LimitRow> {
    exp.points
        .iter()
        .map(|p| LimitRow {
            identity: exp.id.clone(),
            scaling: exp.scaling,
            target: exp.target.name(),
            j: p.j,
            q: p.q.to_string_sig(sig),
            lhs: p.lhs.to_string_sig(sig),
            rhs: p.rhs.to_string_sig(sig),
            lhs_error: p.lhs_error.to_string_sig(sig),
            rhs_error: p.rhs_error.to_string_sig(sig),
        })
        .collect()
}

pub fn limit(opts: &Options, id: &str, s: Option<u32>, (j_min, j_max): (u32, u32), bound: f64) -> CmdResult {
    if !(bound.is_finite() && bound > 0.0) {
        return Err(CliError::Usage(format!("--bound must be positive, got {bound}")));
    }
    let cfg = EvalConfig::new(Precision::new(opts.precision));
    let exp = run_limit_experiment(id, s, j_min, j_max, &cfg).map_err(|e| match e {
        LimitError::NoConvergence { .. } | LimitError::OutOfDomain(_) => CliError::Failure(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    let decreasing = exp.errors_decrease_from(j_min + 1);
    let final_rel = exp.final_relative_error().map_or(f64::INFINITY, |r| r.to_f64());
    let passed = decreasing && final_rel < bound;
    let text = match opts.format {
        Format::Json => to_json(&ReportDocument::new(&opts.echo, limit_rows(&exp, opts.precision), passed)),
        Format::Csv => to_csv(
            &["identity", "scaling", "target", "j", "q", "lhs", "rhs", "lhs_error", "rhs_error"],
            &limit_rows(&exp, opts.precision),
        ),
        Format::Text => {
            let mut t = format!(
                "{}: (1-q)^{} * side -> {} = {}\n",
                exp.id,
                exp.scaling,
                exp.target.name(),
                exp.target_value.to_string_sig(20)
            );
            let _ = writeln!(t, "{:>3}  {:<24} {:<24} {:<24} {:>10}", "j", "q", "lhs", "rhs", "rel error");
            for p in &exp.points {
                let rel = (p.error() / &exp.target_value).to_f64();
                let _ = writeln!(
                    t,
                    "{:>3}  {:<24} {:<24} {:<24} {:>10.3e}",
                    p.j,
                    p.q.to_string_sig(16),
                    p.lhs.to_string_sig(16),
                    p.rhs.to_string_sig(16),
                    rel
                );
            }
            let _ = writeln!(
                t,
                "errors decreasing from j={}: {}; final relative error {:.3e} (bound {}): {}",
                j_min + 1,
                if decreasing { "yes" } else { "no" },
                final_rel,
                bound,
                if passed { "pass" } else { "FAIL" }
            );
            t
        }
    };
    Ok(Output { text, passed })
}

// --- bernoulli / zeta ---

#[derive(Serialize)]
struct BernoulliRow {
    n: usize,
    value: String,
}

pub fn bernoulli(opts: &Options, m: u32) -> CmdResult {
    let rows: Vec<BernoulliRow> = bernoulli_numbers(m as usize)
        .into_iter()
        .enumerate()
        .map(|(n, b)| BernoulliRow { n, value: b.to_string() })
        .collect();
    let text = match opts.format {
        Format::Json => to_json(&ReportDocument::new(&opts.echo, rows, true)),
        Format::Csv => to_csv(&["n", "value"], &rows),
        Format::Text => rows.iter().map(|r| format!("B_{} = {}\n", r.n, r.value)).collect(),
    };
    Ok(Output { text, passed: true })
}

#[derive(Serialize)]
struct ZetaRow {
    m: u32,
    argument: u32,
    value: String,
}

pub fn zeta(opts: &Options, m: u32) -> CmdResult {
    let prec = Precision::new(opts.precision);
    let row = ZetaRow { m, argument: 2 * m, value: zeta_even(m, prec).to_string_sig(opts.precision) };
    let text = match opts.format {
        Format::Json => to_json(&ReportDocument::new(&opts.echo, vec![row], true)),
        Format::Csv => to_csv(&["m", "argument", "value"], &[row]),
        Format::Text => format!("zeta({}) = {}\n", row.argument, row.value),
    };
    Ok(Output { text, passed: true })
}
