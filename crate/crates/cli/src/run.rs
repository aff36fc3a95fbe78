//! Verb dispatch and report rendering.

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde_json::{json, Value as Json};
use spectra_core::analysis::{self, ClauseStatus};
use spectra_core::diagonal::{self, DiagonalOperator};
use spectra_core::num::fmt_rational;
use spectra_core::{AnalysisError, ComplexRational, GapRule, OperatorModel, Ordinal, Rational, SpecSet, SpectrumKind};

use crate::parser::{self, ErrorKind, Sort, Value};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: &str = "1.0";

pub const VERIFY_DEPTH: usize = diagonal::DEFAULT_IDENTITY_DEPTH;
pub const ORACLE_DEPTH: usize = diagonal::DEFAULT_ORACLE_DEPTH;
pub const DEPTH_ENV: &str = "SPECTRA_DEFAULT_DEPTH";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Sigma,
    Browder,
    Drazin,
}

impl From<KindArg> for SpectrumKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Sigma => SpectrumKind::Sigma,
            KindArg::Browder => SpectrumKind::Browder,
            KindArg::Drazin => SpectrumKind::Drazin,
        }
    }
}

/// Cantor–Bendixson derivatives and g^α-invertibility of spectral models.
#[derive(Debug, Parser)]
#[command(name = "spectra", version)]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Read `let` bindings and an optional final expression from a file.
    #[arg(long, global = true)]
    pub file: Option<String>,
    /// Report zero durations.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Args)]
pub struct Target {
    /// Expression to analyse; defaults to the last expression of --file.
    pub expr: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// The α-th derived set.
    Acc {
        #[arg(long, default_value = "1")]
        alpha: String,
        #[command(flatten)]
        target: Target,
    },
    /// Cantor–Bendixson rank, countability and perfect kernel.
    Rank {
        /// Lower bound for an avoiding radius.
        #[arg(long, requires = "hi")]
        lo: Option<String>,
        /// Upper bound for an avoiding radius.
        #[arg(long, requires = "lo")]
        hi: Option<String>,
        #[command(flatten)]
        target: Target,
    },
    /// Rank of a single point.
    RankAt {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        target: Target,
    },
    /// Leading isolated points.
    Iso {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[command(flatten)]
        target: Target,
    },
    /// Degree of g-invertibility.
    Degree {
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[command(flatten)]
        target: Target,
    },
    /// Whether the model is g^α-invertible.
    Check {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value = "sigma")]
        kind: KindArg,
        #[command(flatten)]
        target: Target,
    },
    /// Split into an invertible part and a small part.
    Decompose {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value = "sigma")]
        kind: KindArg,
        #[command(flatten)]
        target: Target,
    },
    /// A chain of decompositions with shrinking cuts.
    Chain {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value = "sigma")]
        kind: KindArg,
        #[command(flatten)]
        target: Target,
    },
    /// Exact identity checks on a diagonal realization.
    Verify {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value = "sigma")]
        kind: KindArg,
        #[arg(long)]
        depth: Option<usize>,
        #[command(flatten)]
        target: Target,
    },
    /// Finite-stage accumulation oracle on an enumeration prefix.
    Oracle {
        #[arg(long, default_value_t = 3)]
        stages: usize,
        #[arg(long)]
        depth: Option<usize>,
        #[command(flatten)]
        target: Target,
    },
    /// The almost-invertibility spectrum.
    AlSpectrum {
        #[command(flatten)]
        target: Target,
    },
    /// Clause-by-clause equivalence report.
    Report {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value = "sigma")]
        kind: KindArg,
        #[arg(long)]
        depth: Option<usize>,
        #[command(flatten)]
        target: Target,
    },
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::Acc { .. } => "acc",
            Verb::Rank { .. } => "rank",
            Verb::RankAt { .. } => "rank-at",
            Verb::Iso { .. } => "iso",
            Verb::Degree { .. } => "degree",
            Verb::Check { .. } => "check",
            Verb::Decompose { .. } => "decompose",
            Verb::Chain { .. } => "chain",
            Verb::Verify { .. } => "verify",
            Verb::Oracle { .. } => "oracle",
            Verb::AlSpectrum { .. } => "al-spectrum",
            Verb::Report { .. } => "report",
        }
    }

    fn target(&self) -> &Target {
        match self {
            Verb::Acc { target, .. }
            | Verb::Rank { target, .. }
            | Verb::RankAt { target, .. }
            | Verb::Iso { target, .. }
            | Verb::Degree { target, .. }
            | Verb::Check { target, .. }
            | Verb::Decompose { target, .. }
            | Verb::Chain { target, .. }
            | Verb::Verify { target, .. }
            | Verb::Oracle { target, .. }
            | Verb::AlSpectrum { target }
            | Verb::Report { target, .. } => target,
        }
    }

    fn sort(&self) -> Sort {
        match self {
            Verb::Acc { .. } | Verb::Rank { .. } | Verb::RankAt { .. } | Verb::Iso { .. } | Verb::Oracle { .. } => Sort::Set,
            _ => Sort::Model,
        }
    }
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PRECONDITION: i32 = 3;
}

/// What a run prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
    pos: Option<(usize, usize)>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: exit::USAGE,
            kind: "usage",
            message: message.into(),
            pos: None,
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Failure {
            code: exit::PRECONDITION,
            kind: "precondition",
            message: message.into(),
            pos: None,
        }
    }

    fn parse(e: parser::ParseError) -> Self {
        Failure {
            code: exit::USAGE,
            kind: e.kind.name(),
            message: e.message,
            pos: Some((e.pos.line, e.pos.column)),
        }
    }

    fn render(&self) -> String {
        match self.pos {
            Some((l, c)) => format!("{} error at {l}:{c}: {}", self.kind, self.message),
            None => format!("{} error: {}", self.kind, self.message),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Failure::precondition(e.to_string())
    }
}

impl From<diagonal::DiagonalError> for Failure {
    fn from(e: diagonal::DiagonalError) -> Self {
        Failure::precondition(e.to_string())
    }
}

/// Result of a verb before rendering.
#[derive(Debug, Default)]
struct Report {
    result: Json,
    text: Vec<String>,
    witnesses: Vec<String>,
    checks: Vec<(String, bool)>,
}

impl Report {
    fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push((name.into(), passed));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, p)| *p)
    }
}

struct Input {
    text: String,
    value: Value,
}

fn load_input(cli: &Cli) -> Result<Input, Failure> {
    let inline = cli.verb.target().expr.clone();
    let sort = cli.verb.sort();
    let program = match &cli.file {
        Some(path) => {
            let src = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {path}: {e}")))?;
            Some((src.clone(), parser::parse_program(&src).map_err(Failure::parse)?))
        }
        None => None,
    };
    let (text, value) = match (inline, program) {
        (Some(expr), prog) => {
            let env = prog.map(|(_, p)| p.env).unwrap_or_default();
            let v = parser::parse_expression(&expr, &env, Some(sort)).map_err(Failure::parse)?;
            (expr, v)
        }
        (None, Some((src, prog))) => {
            let v = prog.value.ok_or_else(|| Failure::usage("the file has no final expression and none was given"))?;
            (src.trim_end().to_string(), v)
        }
        (None, None) => return Err(Failure::usage("no expression given")),
    };
    if value.sort() != sort {
        return Err(Failure {
            code: exit::USAGE,
            kind: ErrorKind::Syntax.name(),
            message: format!("{} expects {sort}, found {}", cli.verb.name(), value.sort()),
            pos: None,
        });
    }
    Ok(Input { text, value })
}

fn ordinal_opt(name: &str, src: &str) -> Result<Ordinal, Failure> {
    parser::parse_ordinal(src).map_err(|e| Failure::usage(format!("--{name}: {e}")))
}

fn rational_opt(name: &str, src: &str) -> Result<Rational, Failure> {
    parser::parse_rational(src).map_err(|e| Failure::usage(format!("--{name}: {e}")))
}

fn depth_opt(flag: Option<usize>, default: usize) -> Result<usize, Failure> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var(DEPTH_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::usage(format!("{DEPTH_ENV} must be a natural number, got {v:?}"))),
        Err(_) => Ok(default),
    }
}

fn options(verb: &Verb) -> Result<BTreeMap<&'static str, Json>, Failure> {
    let mut o = BTreeMap::new();
    match verb {
        Verb::Acc { alpha, .. } => {
            o.insert("alpha", json!(ordinal_opt("alpha", alpha)?.to_string()));
        }
        Verb::Rank { lo, hi, .. } => {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                o.insert("lo", json!(fmt_rational(&rational_opt("lo", lo)?)));
                o.insert("hi", json!(fmt_rational(&rational_opt("hi", hi)?)));
            }
        }
        Verb::RankAt { point, .. } => {
            let z = parser::parse_complex(point).map_err(|e| Failure::usage(format!("--point: {e}")))?;
            o.insert("point", json!(z.to_string()));
        }
        Verb::Iso { count, .. } => {
            o.insert("count", json!(count));
        }
        Verb::Degree { kind, .. } => {
            if let Some(k) = kind {
                o.insert("kind", json!(SpectrumKind::from(*k).name()));
            }
        }
        Verb::Check { alpha, kind, .. } | Verb::Decompose { alpha, kind, .. } => {
            o.insert("alpha", json!(ordinal_opt("alpha", alpha)?.to_string()));
            o.insert("kind", json!(SpectrumKind::from(*kind).name()));
        }
        Verb::Chain { alpha, count, kind, .. } => {
            o.insert("alpha", json!(ordinal_opt("alpha", alpha)?.to_string()));
            o.insert("count", json!(count));
            o.insert("kind", json!(SpectrumKind::from(*kind).name()));
        }
        Verb::Verify { alpha, kind, depth, .. } => {
            o.insert("alpha", json!(ordinal_opt("alpha", alpha)?.to_string()));
            o.insert("kind", json!(SpectrumKind::from(*kind).name()));
            o.insert("depth", json!(depth_opt(*depth, VERIFY_DEPTH)?));
        }
        Verb::Report { alpha, kind, depth, .. } => {
            o.insert("alpha", json!(ordinal_opt("alpha", alpha)?.to_string()));
            o.insert("kind", json!(SpectrumKind::from(*kind).name()));
            o.insert("depth", json!(depth_opt(*depth, ORACLE_DEPTH)?));
        }
        Verb::Oracle { stages, depth, .. } => {
            o.insert("stages", json!(stages));
            o.insert("depth", json!(depth_opt(*depth, ORACLE_DEPTH)?));
        }
        Verb::AlSpectrum { .. } => {}
    }
    Ok(o)
}

fn points(ps: &[ComplexRational]) -> Vec<String> {
    ps.iter().map(ToString::to_string).collect()
}

fn set_of(v: &Value) -> &SpecSet {
    match v {
        Value::Set(s) => s,
        _ => unreachable!("sort checked on input"),
    }
}

fn model_of(v: &Value) -> &OperatorModel {
    match v {
        Value::Model(m) => m,
        _ => unreachable!("sort checked on input"),
    }
}

fn part_json(part: &Option<OperatorModel>) -> Json {
    match part {
        Some(m) => json!({"model": m.to_string(), "sigma": m.spectrum(SpectrumKind::Sigma).to_string()}),
        None => Json::Null,
    }
}

fn part_sigma(part: &Option<OperatorModel>) -> SpecSet {
    part.as_ref().map(|m| m.spectrum(SpectrumKind::Sigma)).unwrap_or_default()
}

fn part_text(part: &Option<OperatorModel>) -> String {
    part.as_ref().map_or_else(|| "none".to_string(), ToString::to_string)
}

fn defect_checks(rep: &mut Report, ident: &diagonal::IdentityReport) {
    for d in &ident.defects {
        rep.check(d.name, d.passed());
        rep.text.push(format!("{}: max defect {} over {} entries", d.name, fmt_rational(&d.max_defect), ident.checked));
        rep.witnesses.extend(d.witnesses.iter().map(|i| format!("{}@{i}", d.name)));
    }
    for (name, ok) in &ident.symbolic {
        rep.check(*name, *ok);
    }
}

fn execute(verb: &Verb, opts: &BTreeMap<&'static str, Json>, input: &Value) -> Result<Report, Failure> {
    let mut rep = Report::default();
    let opt_ordinal = |k: &str| ordinal_opt(k, opts[k].as_str().expect("stored as text"));
    let opt_usize = |k: &str| opts[k].as_u64().expect("stored as number") as usize;
    match verb {
        Verb::Acc { .. } => {
            let s = set_of(input).acc_alpha(&opt_ordinal("alpha")?);
            rep.text.push(s.to_string());
            rep.result = json!(s.to_string());
        }
        Verb::Rank { .. } => {
            let s = set_of(input);
            let cbr = s.cbr();
            let kernel = s.perfect_kernel();
            rep.text.push(format!("cbr: {cbr}"));
            rep.text.push(format!("countable: {}", s.is_countable()));
            rep.text.push(format!("perfect_kernel: {kernel}"));
            let mut result = json!({"cbr": cbr.to_string(), "countable": s.is_countable(), "perfect_kernel": kernel.to_string()});
            if let (Some(lo), Some(hi)) = (opts.get("lo"), opts.get("hi")) {
                let lo = rational_opt("lo", lo.as_str().unwrap_or_default())?;
                let hi = rational_opt("hi", hi.as_str().unwrap_or_default())?;
                if lo.is_negative() || lo >= hi {
                    return Err(Failure::usage("need 0 <= lo < hi"));
                }
                let r = s
                    .avoiding_radius(&lo, &hi, GapRule::Widest)
                    .ok_or_else(|| AnalysisError::NoAvoidingRadius(fmt_rational(&hi)))?;
                rep.text.push(format!("avoiding_radius: {}", fmt_rational(&r)));
                result["avoiding_radius"] = json!(fmt_rational(&r));
                rep.check("circle_misses_set", !s.circle_meets(&r));
            }
            rep.result = result;
        }
        Verb::RankAt { point, .. } => {
            let z = parser::parse_complex(point).map_err(|e| Failure::usage(format!("--point: {e}")))?;
            let r = set_of(input).cbr_at(&z);
            rep.text.push(r.to_string());
            rep.result = json!(r.to_string());
        }
        Verb::Iso { count, .. } => {
            let ps = points(&set_of(input).iso_enumerate(*count));
            rep.text.extend(ps.iter().cloned());
            rep.result = json!(ps);
        }
        Verb::Degree { kind, .. } => {
            let m = model_of(input);
            match kind {
                Some(k) => {
                    let d = analysis::degree(m, (*k).into());
                    rep.text.push(d.to_string());
                    rep.result = json!(d.to_string());
                }
                None => {
                    let mut map = serde_json::Map::new();
                    for k in SpectrumKind::ALL {
                        let d = analysis::degree(m, k);
                        rep.text.push(format!("{k}: {d}"));
                        map.insert(k.name().to_string(), json!(d.to_string()));
                    }
                    rep.result = Json::Object(map);
                }
            }
        }
        Verb::Check { kind, .. } => {
            let b = analysis::is_g_alpha_invertible(model_of(input), (*kind).into(), &opt_ordinal("alpha")?);
            rep.text.push(b.to_string());
            rep.result = json!(b);
        }
        Verb::Decompose { kind, .. } => {
            let m = model_of(input);
            let d = analysis::decompose(m, (*kind).into(), &opt_ordinal("alpha")?)?;
            let check = d.check(m);
            for (name, ok) in check.entries() {
                rep.check(name, ok);
            }
            rep.text.push(format!("alpha: {}", d.alpha));
            rep.text.push(format!("radius: {}", fmt_rational(&d.cut.radius)));
            rep.text.push(format!("sigma_tilde: {}", d.cut.sigma_tilde));
            rep.text.push(format!("m_part: {}", part_text(&d.m_part)));
            rep.text.push(format!("n_part: {}", part_text(&d.n_part)));
            rep.result = json!({
                "alpha": d.alpha.to_string(),
                "radius": fmt_rational(&d.cut.radius),
                "sigma_tilde": d.cut.sigma_tilde.to_string(),
                "m_part": part_json(&d.m_part),
                "n_part": part_json(&d.n_part),
            });
        }
        Verb::Chain { kind, .. } => {
            let m = model_of(input);
            let links = analysis::decomposition_chain(m, (*kind).into(), &opt_ordinal("alpha")?, opt_usize("count"))?;
            let mut out = Vec::new();
            for (j, link) in links.iter().enumerate() {
                let d = &link.decomposition;
                rep.check(format!("link_{j}_decomposition"), d.check(m).ok());
                if j > 0 {
                    let prev = &links[j - 1].decomposition;
                    let (n0, n1) = (part_sigma(&prev.n_part), part_sigma(&d.n_part));
                    let (m0, m1) = (part_sigma(&prev.m_part), part_sigma(&d.m_part));
                    rep.check(format!("link_{j}_inner_shrinks"), n1.subset(&n0) && !n0.subset(&n1));
                    rep.check(format!("link_{j}_outer_grows"), m0.subset(&m1) && !m1.subset(&m0));
                    let moved = link.witness.as_ref().is_some_and(|w| n0.member(w) && !n1.member(w) && m1.member(w));
                    rep.check(format!("link_{j}_witness_moves"), moved);
                }
                if let Some(w) = &link.witness {
                    rep.witnesses.push(w.to_string());
                }
                rep.text.push(format!(
                    "{j}: radius {} witness {} n_part {}",
                    fmt_rational(&d.cut.radius),
                    link.witness.as_ref().map_or_else(|| "-".to_string(), ToString::to_string),
                    part_sigma(&d.n_part)
                ));
                out.push(json!({
                    "radius": fmt_rational(&d.cut.radius),
                    "witness": link.witness.as_ref().map(ToString::to_string),
                    "m_part": part_json(&d.m_part),
                    "n_part": part_json(&d.n_part),
                }));
            }
            rep.result = json!(out);
        }
        Verb::Verify { kind, .. } => {
            let m = model_of(input);
            if !analysis::is_diagonal_tree(m) {
                return Err(Failure::precondition("NotDiagonal: verify needs a model built from diag, dsum and mshift"));
            }
            let kind: SpectrumKind = (*kind).into();
            let alpha = opt_ordinal("alpha")?;
            let depth = opt_usize("depth");
            let cut = analysis::find_spectral_set(m, kind, &alpha)?;
            let t = DiagonalOperator::realize(&m.spectrum(SpectrumKind::Sigma))?;
            let s = diagonal::drazin_like_inverse(&t, &cut.radius)?;
            let ident = diagonal::verify_identities(&t, &s, &cut.radius, &alpha, kind, depth);
            let proj = diagonal::projection_clause(&t, &cut.radius, &alpha, kind, depth);
            rep.text.push(format!("radius: {}", fmt_rational(&cut.radius)));
            defect_checks(&mut rep, &ident);
            defect_checks(&mut rep, &proj);
            rep.result = json!({
                "radius": fmt_rational(&cut.radius),
                "checked": ident.checked,
                "defects": ident.defects.iter().chain(&proj.defects).map(|d| (d.name.to_string(), json!(fmt_rational(&d.max_defect)))).collect::<serde_json::Map<_, _>>(),
            });
        }
        Verb::Oracle { .. } => {
            let s = set_of(input);
            let stages = diagonal::finite_stage_acc_oracle(s, opt_usize("stages"), opt_usize("depth"));
            let mut out = Vec::new();
            for (j, stage) in stages.iter().enumerate() {
                let acc = s.acc_alpha(&Ordinal::finite(j as u64));
                rep.check(format!("stage_{j}_sound"), stage.iter().all(|p| acc.member(p)));
                rep.text.push(format!("stage {j}: {} points, {} at 0", stage.len(), if stage.iter().any(ComplexRational::is_zero) { "retained" } else { "not retained" }));
                out.push(json!({"size": stage.len(), "contains_zero": stage.iter().any(ComplexRational::is_zero), "points": points(&stage[..stage.len().min(8)])}));
            }
            rep.result = json!(out);
        }
        Verb::AlSpectrum { .. } => {
            let m = model_of(input);
            let al = analysis::sigma_al(m);
            let almost = analysis::is_almost_invertible(m);
            rep.text.push(al.to_string());
            rep.text.push(format!("almost_invertible: {almost}"));
            rep.check("zero_outside_iff_almost_invertible", almost != al.member(&ComplexRational::zero()));
            rep.result = json!({"sigma_al": al.to_string(), "almost_invertible": almost});
        }
        Verb::Report { kind, .. } => {
            let m = model_of(input);
            let r = analysis::equivalences_report(m, (*kind).into(), &opt_ordinal("alpha")?, opt_usize("depth"));
            let mut clauses = Vec::new();
            for c in &r.clauses {
                rep.text.push(format!("{}.{}: {} ({})", c.group, c.id, c.status.name(), c.statement));
                clauses.push(json!({"group": c.group, "id": c.id, "statement": c.statement, "status": c.status.name()}));
            }
            let degrees: serde_json::Map<_, _> = r.degrees.iter().map(|(k, d)| (k.name().to_string(), json!(d.to_string()))).collect();
            for (k, d) in &r.degrees {
                rep.text.push(format!("degree {k}: {d}"));
            }
            let radius = r.cut_radius.as_ref().map(fmt_rational);
            rep.text.push(format!("cut_radius: {}", radius.clone().unwrap_or_else(|| "none".into())));
            rep.check("consistent", r.consistent);
            rep.witnesses.extend(r.clauses.iter().filter(|c| c.status == ClauseStatus::False).map(|c| format!("{}.{}", c.group, c.id)));
            rep.result = json!({"alpha": r.alpha.to_string(), "kind": r.kind.name(), "clauses": clauses, "cut_radius": radius, "degrees": degrees});
        }
    }
    Ok(rep)
}

fn millis(d: std::time::Duration, timing: bool) -> Json {
    if timing {
        json!(d.as_secs_f64() * 1000.0)
    } else {
        json!(0)
    }
}

fn error_json(verb: Option<&str>, f: &Failure) -> String {
    let mut err = json!({"kind": f.kind, "message": f.message, "exit_code": f.code});
    if let Some((l, c)) = f.pos {
        err["line"] = json!(l);
        err["column"] = json!(c);
    }
    let command = match verb {
        Some(v) => json!({"verb": v}),
        None => json!({}),
    };
    let v = json!({"version": SCHEMA_VERSION, "command": command, "error": err});
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
}

/// Runs a parsed command line. Never panics on user input.
pub fn run(cli: &Cli) -> Outcome {
    let verb = cli.verb.name();
    let fail = |f: Failure| match cli.format {
        Format::Json => Outcome {
            code: f.code,
            stdout: error_json(Some(verb), &f),
            stderr: String::new(),
        },
        Format::Text => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("{}\n", f.render()),
        },
    };
    let opts = match options(&cli.verb) {
        Ok(o) => o,
        Err(f) => return fail(f),
    };
    let parse_start = Instant::now();
    let input = match load_input(cli) {
        Ok(i) => i,
        Err(f) => return fail(f),
    };
    let parse_time = parse_start.elapsed();
    let run_start = Instant::now();
    let rep = match execute(&cli.verb, &opts, &input.value) {
        Ok(r) => r,
        Err(f) => return fail(f),
    };
    let run_time = run_start.elapsed();
    let code = if rep.passed() { exit::OK } else { exit::FAILED };
    let stdout = match cli.format {
        Format::Json => {
            let checks: Vec<Json> = rep.checks.iter().map(|(n, p)| json!({"name": n, "passed": p})).collect();
            let v = json!({
                "version": SCHEMA_VERSION,
                "command": {"verb": verb, "options": opts},
                "input_echo": {"text": input.text, "canonical": input.value.to_string()},
                "result": rep.result,
                "witnesses": rep.witnesses,
                "checks": checks,
                "durations": {"parse_ms": millis(parse_time, !cli.no_timing), "run_ms": millis(run_time, !cli.no_timing)},
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Text => {
            let mut lines = rep.text.clone();
            for (n, p) in &rep.checks {
                lines.push(format!("check {n}: {}", if *p { "pass" } else { "FAIL" }));
            }
            if !rep.checks.is_empty() && !rep.witnesses.is_empty() {
                lines.push(format!("witnesses: {}", rep.witnesses.join(", ")));
            }
            lines.iter().map(|l| format!("{l}\n")).collect()
        }
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

/// Parses arguments and runs; clap's own usage errors exit with 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    match Cli::try_parse_from(&args) {
        Ok(cli) => run(&cli),
        Err(e) if !e.use_stderr() => Outcome {
            code: exit::OK,
            stdout: e.render().to_string(),
            stderr: String::new(),
        },
        Err(e) if wants_json(&args) => {
            let f = Failure::usage(e.kind().to_string());
            let command = Cli::command();
            let verb = args
                .iter()
                .skip(1)
                .filter_map(|a| a.to_str())
                .find(|a| command.get_subcommands().any(|c| c.get_name() == *a));
            Outcome {
                code: exit::USAGE,
                stdout: error_json(verb, &f),
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: exit::USAGE,
            stdout: String::new(),
            stderr: e.render().to_string(),
        },
    }
}

fn wants_json(args: &[std::ffi::OsString]) -> bool {
    let args: Vec<&str> = args.iter().filter_map(|a| a.to_str()).collect();
    args.windows(2).any(|w| w == ["--format", "json"]) || args.contains(&"--format=json")
}
