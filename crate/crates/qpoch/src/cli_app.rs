//! Command-line surface: saddle constants, exact and asymptotic queries,
//! table reproduction and figure data.
//!
//! Exit codes: 0 success, 2 convergence failure, 3 invalid parameters or
//! other errors, 4 branch-validation failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{QsError, QsResult};
use crate::exact_coeffs::{a_exact, a_validated, wave_exact, wave_validated, CoeffRequest};
use crate::hp_analysis::{digits_to_bits, find_w0, format_float, BigComplex, SaddleConstants};
use crate::number_tables::unrestricted_p_row;
use crate::saddle_asym::{eval_asym_a, eval_asym_wave, rademacher_inf, series_order, SaddleContext};

/// Largest pole-order-shifted index `M` for which `exact` returns the exact
/// element of `Q(xi)`; beyond it the validated floating path is used.
pub const EXACT_RATIONAL_LIMIT: i64 = 300;

/// Largest `N` for which exact or validated reference values are computed
/// without `--exact-large`.
pub const AUTO_REFERENCE_MAX_N: u32 = 1000;

#[derive(Parser, Debug)]
#[command(name = "qpoch", version, about = "Expansions of 1/(q)_N at roots of unity: exact coefficients, saddle-point asymptotics, Sylvester waves")]
pub struct Cli {
    /// Working precision in significant decimal digits.
    #[arg(long, global = true, env = "QS_PREC", default_value_t = 60)]
    pub prec: u32,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Significant digits shown for decimal values.
    #[arg(long, global = true, default_value_t = 20)]
    pub digits: usize,
    /// Allow the expensive large-N exact computations.
    #[arg(long, global = true)]
    pub exact_large: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Laurent coefficient `A_m(e^(2 pi i h/k), N)`.
    Laurent,
    /// Sylvester wave `W_k(N, n)`.
    Wave,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the dilogarithm zero w0, the saddle z0 and the growth constants.
    Const,
    /// Exact Laurent coefficient or wave value.
    Exact(QueryArgs),
    /// Truncated asymptotic expansion, with the exact value when affordable.
    Asym(AsymArgs),
    /// Reproduce one of the approximation tables T1..T8.
    Table(TableArgs),
    /// Emit the data behind a figure as CSV.
    Figure(FigureArgs),
}

#[derive(Args, Debug, Clone)]
pub struct QueryArgs {
    #[arg(long, value_enum, default_value_t = Kind::Laurent)]
    pub kind: Kind,
    /// Order of the root of unity (laurent) or wave index (wave).
    #[arg(long)]
    pub k: u32,
    /// Root exponent: xi = e^(2 pi i h/k).
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub h: i64,
    /// Laurent index m.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<i64>,
    /// Wave argument n.
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<i64>,
    /// Number of factors N in (q)_N.
    #[arg(long = "N")]
    pub big_n: u32,
}

#[derive(Args, Debug, Clone)]
pub struct AsymArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    /// Number of expansion terms.
    #[arg(long, default_value_t = 5)]
    pub r: usize,
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    /// Table id, T1 .. T8.
    #[arg(long)]
    pub id: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Cfig,
    Qfig,
    Wvfig,
}

#[derive(Args, Debug, Clone)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub id: FigureId,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

/// One approximation row.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Approximation {
    pub r: usize,
    pub value: String,
    /// Digits on which the runs at `P` and `P + 20` digits agree.
    pub stable_digits: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub abs_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rel_error: Option<String>,
}

/// Everything a command reports.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub request: BTreeMap<String, String>,
    /// Exact value: `p/q`, or an element of `Q(xi)` written in powers of `xi = e^(2 pi i/k)`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<String>,
    /// Rational coordinates of the exact element in the basis `1, xi, ..., xi^(d-1)`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact_coords: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub decimal: Option<String>,
    /// How `decimal` was obtained: `exact`, `validated` or `published reference`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verified_digits: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub approximations: Vec<Approximation>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub values: BTreeMap<String, String>,
}

impl OutputRecord {
    fn new(command: &str) -> Self {
        OutputRecord { command: command.to_string(), ..Default::default() }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.request {
            s.push_str(&format!("{k} = {v}\n"));
        }
        for (k, v) in &self.values {
            s.push_str(&format!("{k}: {v}\n"));
        }
        if let Some(e) = &self.exact {
            s.push_str(&format!("exact: {e}\n"));
        }
        if let Some(d) = &self.decimal {
            let src = self.source.as_deref().unwrap_or("");
            match self.verified_digits {
                Some(v) => s.push_str(&format!("value: {d}  [{src}, {v} digits verified]\n")),
                None => s.push_str(&format!("value: {d}  [{src}]\n")),
            }
        }
        for a in &self.approximations {
            s.push_str(&format!("r = {}: {}", a.r, a.value));
            if let Some(e) = &a.rel_error {
                s.push_str(&format!("  (rel. error {e})"));
            }
            s.push('\n');
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("label,value,detail\n");
        for (k, v) in &self.values {
            s.push_str(&format!("{},{},\n", csv_field(k), csv_field(v)));
        }
        for a in &self.approximations {
            s.push_str(&format!("r={},{},{}\n", a.r, csv_field(&a.value), csv_field(a.rel_error.as_deref().unwrap_or(""))));
        }
        if let Some(d) = &self.decimal {
            s.push_str(&format!("value,{},{}\n", csv_field(d), csv_field(self.source.as_deref().unwrap_or(""))));
        }
        if let Some(e) = &self.exact {
            s.push_str(&format!("exact,{},\n", csv_field(e)));
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => serde_json::to_string_pretty(self).expect("record serializes") + "\n",
            Format::Csv => self.to_csv(),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Published exact values for the table targets, shown (labelled) when the
/// large exact computation is not requested.
#[derive(Clone, Copy, Debug)]
pub struct TableSpec {
    pub id: &'static str,
    pub kind: Kind,
    pub k: u32,
    pub h: i64,
    /// `m` for Laurent coefficients, `n` for waves.
    pub index: i64,
    pub big_n: u32,
    pub published: &'static str,
}

pub const TABLES: [TableSpec; 8] = [
    TableSpec { id: "T1", kind: Kind::Laurent, k: 1, h: 0, index: -1, big_n: 2500, published: "3.83861799348646318e67" },
    TableSpec {
        id: "T2",
        kind: Kind::Laurent,
        k: 3,
        h: 1,
        index: -2,
        big_n: 2500,
        published: "-1.729346669988476e14 + 7.893754594541664e14i",
    },
    TableSpec { id: "T3", kind: Kind::Wave, k: 3, h: 0, index: 4001, big_n: 4001, published: "2.2581936758249785e32" },
    TableSpec { id: "T4", kind: Kind::Laurent, k: 1, h: 0, index: -4, big_n: 2500, published: "1.97741548293140288e60" },
    TableSpec {
        id: "T5",
        kind: Kind::Laurent,
        k: 4,
        h: 1,
        index: 1,
        big_n: 2501,
        published: "6.651195010459496e17 - 2.3158366731930319e18i",
    },
    TableSpec { id: "T6", kind: Kind::Wave, k: 1, h: 0, index: 5000, big_n: 3500, published: "-3.6775621984857302e96" },
    TableSpec { id: "T7", kind: Kind::Wave, k: 2, h: 0, index: 8002, big_n: 4001, published: "1.2424007618319874e53" },
    TableSpec { id: "T8", kind: Kind::Wave, k: 4, h: 0, index: 3000, big_n: 4000, published: "-1.1889188816869245e23" },
];

pub fn table_spec(id: &str) -> QsResult<TableSpec> {
    TABLES
        .iter()
        .find(|t| t.id.eq_ignore_ascii_case(id))
        .copied()
        .ok_or_else(|| QsError::InvalidParameter(format!("unknown table id {id:?}; expected T1..T8")))
}

/// Saddle constants and per-`k` contexts at a given precision.
pub struct Engine {
    pub constants: SaddleConstants,
    contexts: std::sync::Mutex<BTreeMap<(u32, usize), std::sync::Arc<SaddleContext>>>,
}

impl Engine {
    pub fn new(digits: u32) -> QsResult<Self> {
        Ok(Engine { constants: find_w0(digits)?, contexts: Default::default() })
    }

    pub fn context(&self, k: u32, r: usize) -> QsResult<std::sync::Arc<SaddleContext>> {
        let order = series_order(r);
        let mut map = self.contexts.lock().expect("context cache lock");
        if let Some(c) = map.get(&(k, order)) {
            return Ok(c.clone());
        }
        let ctx = std::sync::Arc::new(SaddleContext::new(&self.constants, k, order)?);
        map.insert((k, order), ctx.clone());
        Ok(ctx)
    }

    pub fn asym_laurent(&self, k: u32, h: i64, m: i64, big_n: u32, r: usize) -> QsResult<BigComplex> {
        eval_asym_a(&*self.context(k, r)?, h, m, big_n, r)
    }

    pub fn asym_wave(&self, k: u32, big_n: u32, n: i64, r: usize) -> QsResult<Float> {
        eval_asym_wave(&*self.context(k, r)?, big_n, n, r)
    }
}

/// Significant digits on which `a` and `b` agree (capped at 999).
pub fn agreeing_digits(a: &BigComplex, b: &BigComplex) -> u32 {
    let scale = b.abs();
    let d = a.dist(b);
    if d.is_zero() {
        return 999;
    }
    if scale.is_zero() {
        return 0;
    }
    let rel = Float::with_val(d.prec(), &d / &scale);
    let l = -rel.log10().to_f64();
    if l.is_finite() {
        l.floor().clamp(0.0, 999.0) as u32
    } else {
        0
    }
}

/// A reference value for comparisons.
struct Reference {
    value: BigComplex,
    exact: Option<(String, Vec<String>)>,
    source: &'static str,
    digits: Option<u32>,
}

fn laurent_reference(req: &CoeffRequest, digits: u32, target: u32) -> QsResult<Reference> {
    let prec = digits_to_bits(digits);
    if req.big_m() <= EXACT_RATIONAL_LIMIT {
        let a = a_exact(req)?;
        let coords = a.coords().iter().map(|c| c.to_string()).collect();
        Ok(Reference { value: a.embed(1, prec), exact: Some((a.to_string(), coords)), source: "exact", digits: None })
    } else {
        let v = a_validated(req, target)?;
        Ok(Reference { value: v.value, exact: None, source: "validated", digits: Some(v.digits) })
    }
}

fn wave_reference(k: u32, big_n: u32, n: i64, digits: u32, target: u32) -> QsResult<Reference> {
    let prec = digits_to_bits(digits);
    if big_n as i64 <= EXACT_RATIONAL_LIMIT {
        let w = wave_exact(k, big_n, n)?;
        let v = BigComplex::from_rational(&w, prec);
        Ok(Reference { value: v, exact: Some((w.to_string(), vec![w.to_string()])), source: "exact", digits: None })
    } else {
        let v = wave_validated(k, big_n, n, target)?;
        Ok(Reference { value: BigComplex::from_real(v.value), exact: None, source: "validated", digits: Some(v.digits) })
    }
}

fn request_map(q: &QueryArgs) -> QsResult<(BTreeMap<String, String>, i64)> {
    let mut req = BTreeMap::new();
    let kind = match q.kind {
        Kind::Laurent => "laurent",
        Kind::Wave => "wave",
    };
    req.insert("kind".into(), kind.into());
    req.insert("k".into(), q.k.to_string());
    req.insert("N".into(), q.big_n.to_string());
    let idx = match q.kind {
        Kind::Laurent => {
            req.insert("h".into(), if q.k == 1 { "0".into() } else { q.h.to_string() });
            let m = q.m.ok_or_else(|| QsError::InvalidParameter("--m is required for laurent queries".into()))?;
            req.insert("m".into(), m.to_string());
            m
        }
        Kind::Wave => {
            let n = q.n.ok_or_else(|| QsError::InvalidParameter("--n is required for wave queries".into()))?;
            req.insert("n".into(), n.to_string());
            n
        }
    };
    if q.k == 0 || q.big_n == 0 {
        return Err(QsError::InvalidParameter("k and N must be positive".into()));
    }
    Ok((req, idx))
}

fn laurent_request(q: &QueryArgs, m: i64) -> QsResult<CoeffRequest> {
    let h = if q.k == 1 { 0 } else { q.h };
    let req = CoeffRequest::new(m, q.k, h, q.big_n);
    req.validate()?;
    Ok(req)
}

fn needs_large(big_n: u32, exact_large: bool) -> QsResult<()> {
    if big_n > AUTO_REFERENCE_MAX_N && !exact_large {
        return Err(QsError::ResourceLimit(format!("N = {big_n} exceeds {AUTO_REFERENCE_MAX_N}; pass --exact-large to run the validated large-N computation")));
    }
    Ok(())
}

pub fn cmd_const(digits: u32, show: usize) -> QsResult<OutputRecord> {
    let c = find_w0(digits)?;
    let mut rec = OutputRecord::new("const");
    rec.request.insert("prec".into(), digits.to_string());
    rec.values.insert("w0".into(), c.w0.to_decimal(show));
    rec.values.insert("z0".into(), c.z0.to_decimal(show));
    rec.values.insert("U".into(), format_float(&c.u, show));
    rec.values.insert("V".into(), format_float(&c.v, show));
    rec.values.insert("residual".into(), format_float(&c.residual, 6));
    Ok(rec)
}

pub fn cmd_exact(q: &QueryArgs, digits: u32, show: usize, exact_large: bool) -> QsResult<OutputRecord> {
    let (request, idx) = request_map(q)?;
    let mut rec = OutputRecord::new("exact");
    rec.request = request;
    let target = (show as u32).max(17);
    let reference = match q.kind {
        Kind::Laurent => {
            let req = laurent_request(q, idx)?;
            if req.big_m() > EXACT_RATIONAL_LIMIT {
                needs_large(q.big_n, exact_large)?;
            }
            laurent_reference(&req, digits, target)?
        }
        Kind::Wave => {
            if q.big_n as i64 > EXACT_RATIONAL_LIMIT {
                needs_large(q.big_n, exact_large)?;
            }
            wave_reference(q.k, q.big_n, idx, digits, target)?
        }
    };
    if let Some((e, coords)) = reference.exact {
        rec.exact = Some(e);
        rec.exact_coords = Some(coords);
    }
    rec.decimal = Some(reference.value.to_decimal(show));
    rec.source = Some(reference.source.into());
    rec.verified_digits = reference.digits;
    Ok(rec)
}

pub fn cmd_asym(a: &AsymArgs, digits: u32, show: usize, exact_large: bool) -> QsResult<OutputRecord> {
    let q = &a.query;
    if a.r == 0 {
        return Err(QsError::InvalidParameter("r must be at least 1".into()));
    }
    let (request, idx) = request_map(q)?;
    let mut rec = OutputRecord::new("asym");
    rec.request = request;
    rec.request.insert("r".into(), a.r.to_string());
    let lo = Engine::new(digits)?;
    let hi = Engine::new(digits + 20)?;
    let eval = |e: &Engine| -> QsResult<BigComplex> {
        match q.kind {
            Kind::Laurent => {
                let req = laurent_request(q, idx)?;
                e.asym_laurent(req.k, req.h, req.m, req.n, a.r)
            }
            Kind::Wave => e.asym_wave(q.k, q.big_n, idx, a.r).map(BigComplex::from_real),
        }
    };
    let v_lo = eval(&lo)?;
    let v_hi = eval(&hi)?;
    let stable = agreeing_digits(&v_lo, &v_hi);
    let mut approx = Approximation { r: a.r, value: v_hi.to_decimal(show), stable_digits: stable, abs_error: None, rel_error: None };
    if q.big_n <= AUTO_REFERENCE_MAX_N || exact_large {
        let target = (show as u32).max(17);
        let reference = match q.kind {
            Kind::Laurent => laurent_reference(&laurent_request(q, idx)?, digits, target)?,
            Kind::Wave => wave_reference(q.k, q.big_n, idx, digits, target)?,
        };
        let abs = v_hi.dist(&reference.value);
        approx.abs_error = Some(format_float(&abs, 6));
        let scale = reference.value.abs();
        if !scale.is_zero() {
            approx.rel_error = Some(format_float(&Float::with_val(abs.prec(), &abs / &scale), 6));
        }
        rec.decimal = Some(reference.value.to_decimal(show));
        rec.source = Some(reference.source.into());
        rec.verified_digits = reference.digits;
        if let Some((e, coords)) = reference.exact {
            rec.exact = Some(e);
            rec.exact_coords = Some(coords);
        }
    }
    rec.approximations.push(approx);
    Ok(rec)
}

/// The four approximation rows `r = 1, 3, 5, 7` of a table.
pub fn table_rows(spec: &TableSpec, engine: &Engine) -> QsResult<Vec<(usize, BigComplex)>> {
    [1usize, 3, 5, 7]
        .iter()
        .map(|&r| {
            let v = match spec.kind {
                Kind::Laurent => engine.asym_laurent(spec.k, spec.h, spec.index, spec.big_n, r)?,
                Kind::Wave => BigComplex::from_real(engine.asym_wave(spec.k, spec.big_n, spec.index, r)?),
            };
            Ok((r, v))
        })
        .collect()
}

/// The table's final line, computed by the validated large-N path.
pub fn table_exact(spec: &TableSpec, target: u32) -> QsResult<(BigComplex, u32)> {
    match spec.kind {
        Kind::Laurent => {
            let v = a_validated(&CoeffRequest::new(spec.index, spec.k, spec.h, spec.big_n), target)?;
            Ok((v.value, v.digits))
        }
        Kind::Wave => {
            let v = wave_validated(spec.k, spec.big_n, spec.index, target)?;
            Ok((BigComplex::from_real(v.value), v.digits))
        }
    }
}

pub fn cmd_table(t: &TableArgs, digits: u32, show: usize, exact_large: bool) -> QsResult<OutputRecord> {
    let spec = table_spec(&t.id)?;
    let mut rec = OutputRecord::new("table");
    rec.request.insert("id".into(), spec.id.into());
    rec.request.insert("kind".into(), format!("{:?}", spec.kind).to_lowercase());
    rec.request.insert("k".into(), spec.k.to_string());
    rec.request.insert("N".into(), spec.big_n.to_string());
    match spec.kind {
        Kind::Laurent => {
            rec.request.insert("h".into(), spec.h.to_string());
            rec.request.insert("m".into(), spec.index.to_string());
        }
        Kind::Wave => {
            rec.request.insert("n".into(), spec.index.to_string());
        }
    }
    let lo = Engine::new(digits)?;
    let hi = Engine::new(digits + 20)?;
    let rows_lo = table_rows(&spec, &lo)?;
    let rows_hi = table_rows(&spec, &hi)?;
    let reference = if exact_large {
        eprintln!("computing the exact value of {} (validated floating path) ...", spec.id);
        let (v, d) = table_exact(&spec, (show as u32).max(17))?;
        rec.source = Some("validated".into());
        rec.verified_digits = Some(d);
        rec.decimal = Some(v.to_decimal(show));
        Some(v)
    } else {
        rec.source = Some("published reference".into());
        rec.decimal = Some(spec.published.into());
        None
    };
    for ((r, a_lo), (_, a_hi)) in rows_lo.iter().zip(rows_hi.iter()) {
        let mut row = Approximation {
            r: *r,
            value: a_hi.to_decimal(show),
            stable_digits: agreeing_digits(a_lo, a_hi),
            abs_error: None,
            rel_error: None,
        };
        if let Some(v) = &reference {
            let abs = a_hi.dist(v);
            row.rel_error = Some(format_float(&Float::with_val(abs.prec(), &abs / &v.abs()), 6));
            row.abs_error = Some(format_float(&abs, 6));
        }
        rec.approximations.push(row);
    }
    Ok(rec)
}

/// `(N, C_{014}(N), C_{014}(inf))` for `1 <= N <= n_max`.
pub fn cfig_rows(n_max: u32, digits: u32) -> QsResult<Vec<(u32, Float, Float)>> {
    let limit = rademacher_inf(4, digits_to_bits(digits))?;
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let v = a_validated(&CoeffRequest::new(-4, 1, 0, n), 20)?;
            Ok((n, v.value.re, limit.clone()))
        })
        .collect()
}

/// Terms in the qfig approximation curve.
pub const QFIG_TERMS: usize = 2;

/// `(N, Re A_{-2}(i, N) N^3 |w0|^(N/4), same for the two-term approximation)`.
pub fn qfig_rows(from: u32, to: u32, engine: &Engine) -> QsResult<Vec<(u32, Float, Float)>> {
    let ctx = engine.context(4, QFIG_TERMS)?;
    let prec = engine.constants.prec();
    let u = &engine.constants.u;
    (from..=to)
        .into_par_iter()
        .map(|n| {
            // N^3 |w0|^(N/4) = N^3 exp(-U N/4)
            let growth = Float::with_val(prec, u * n) / 4u32;
            let scale = Float::with_val(prec, n).pow(3u32) * Float::with_val(prec, -growth).exp();
            let exact = a_validated(&CoeffRequest::new(-2, 4, 1, n), 20)?;
            let main = eval_asym_a(&ctx, 1, -2, n, QFIG_TERMS)?;
            Ok((n, Float::with_val(prec, &exact.value.re * &scale), Float::with_val(prec, &main.re * &scale)))
        })
        .collect()
}

/// `(n, log|W_1(n,n)|, log p(n), log|Re(z0 e^(-3 z0/2) w0^-n / (pi i n^2))|)`.
pub fn wvfig_rows(from: u32, to: u32, stride: u32, engine: &Engine) -> QsResult<Vec<(u32, Float, Float, Float)>> {
    let prec = engine.constants.prec();
    let z0 = &engine.constants.z0;
    let pii = BigComplex::new(Float::new(prec), crate::hp_analysis::pi(prec));
    let lead = &(z0 * &z0.scale_rational(&Rational::from((-3, 2))).exp()) * &pii.recip()?;
    let partitions = unrestricted_p_row(to);
    let ns: Vec<u32> = (from..=to).step_by(stride.max(1) as usize).collect();
    ns.into_par_iter()
        .map(|n| {
            let w = wave_validated(1, n, n as i64, 20)?;
            let p = Float::with_val(prec, &partitions[n as usize]);
            let growth = engine.constants.w0.pow_rational(&Rational::from(-(n as i64)))?;
            let main = (&lead * &growth).re / Float::with_val(prec, n).square();
            let ln = |x: Float| Float::with_val(prec, x.abs().ln());
            Ok((n, ln(w.value), ln(p), ln(main)))
        })
        .collect()
}

pub fn cmd_figure(f: &FigureArgs, digits: u32) -> QsResult<String> {
    let fmt = |x: &Float| format_float(x, 10);
    let csv = match f.id {
        FigureId::Cfig => {
            let mut s = String::from("N,C014_N,C014_inf\n");
            for (n, v, l) in cfig_rows(200, digits)? {
                s.push_str(&format!("{n},{},{}\n", fmt(&v), fmt(&l)));
            }
            s
        }
        FigureId::Qfig => {
            let engine = Engine::new(digits)?;
            let mut s = String::from("N,scaled_re_A,scaled_re_approx_r2\n");
            for (n, v, m) in qfig_rows(750, 1150, &engine)? {
                s.push_str(&format!("{n},{},{}\n", fmt(&v), fmt(&m)));
            }
            s
        }
        FigureId::Wvfig => {
            let engine = Engine::new(digits)?;
            let mut s = String::from("n,log_abs_W1,log_p,log_abs_main_term\n");
            for (n, w, p, m) in wvfig_rows(1200, 1800, 8, &engine)? {
                s.push_str(&format!("{n},{},{},{}\n", fmt(&w), fmt(&p), fmt(&m)));
            }
            s
        }
    };
    match &f.out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| QsError::InvalidParameter(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

/// Run a parsed command and return its rendered output.
pub fn run(cli: &Cli) -> QsResult<String> {
    let show = cli.digits.max(1);
    match &cli.command {
        Command::Const => Ok(cmd_const(cli.prec, show)?.render(cli.format)),
        Command::Exact(q) => Ok(cmd_exact(q, cli.prec, show, cli.exact_large)?.render(cli.format)),
        Command::Asym(a) => Ok(cmd_asym(a, cli.prec, show, cli.exact_large)?.render(cli.format)),
        Command::Table(t) => Ok(cmd_table(t, cli.prec, show, cli.exact_large)?.render(cli.format)),
        Command::Figure(f) => cmd_figure(f, cli.prec),
    }
}

/// Parse `args`, run, print, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
