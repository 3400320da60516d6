//! Command-line front end. Exit codes: 0 pass or solved, 1 violation or no
//! solution, 2 input error.

pub mod spec;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bass_serre::{axes_intersection, axis_vertices, classify, AxisOverlap, Classification};
use crate::closure::{check_all, check_condition3, KuroshData, Verdict, Violation};
use crate::error::Error;
use crate::free_product::FreeProduct;
use crate::trials::{axis_trials, lemma4_trials, lemma7_trials};
use crate::words::{
    build_lemma4, build_lemma5, solve_bounded, theorem2_report, Candidates, Equation, SearchMode, SolveOutcome,
    Substitution,
};
use spec::{parse_ball_parts, parse_element, parse_group_spec, parse_subgroup_spec};

pub const C2_C3: &str = "factors: cyclic 2; cyclic 3\nlabels: a; b\n";
pub const S3_C2: &str = "factors: dihedral 3; cyclic 2\nlabels: a,b; c\n";
pub const Z6_C2: &str = "factors: product [cyclic 2, cyclic 3]; cyclic 2\nlabels: a,b; c\n";
pub const C2_C2_C2: &str = "factors: cyclic 2; cyclic 2; cyclic 2\nlabels: a; b; c\n";

#[derive(Debug, Parser)]
#[command(
    name = "freeprod",
    version,
    about = "Free products of finite groups: normal forms, equations and subgroup checks"
)]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of a word, optionally with variable values (`--set x1=a`).
    Eval {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long = "set")]
        set: Vec<String>,
    },
    /// Order of an element.
    Order {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Cyclic reduction `u = c·D·c⁻¹`.
    Reduce {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Necessary conditions on a subgroup decomposition.
    Check {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
    },
    /// Bounded search for a solution inside a subgroup ball.
    Solve {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        eq: String,
        /// Parts like `a;b@c`.
        #[arg(long, conflicts_with = "subgroup")]
        ball: Option<String>,
        #[arg(long)]
        subgroup: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long)]
        all: bool,
    },
    /// Checks the eight closed forms of the two-generator word over C2*C2.
    VerifyTheorem2 {
        #[arg(long, default_value_t = 6)]
        range: i64,
    },
    /// Power-equation construction on random or given coefficients.
    VerifyLemma4 {
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Conjugated-powers equation and its bounded subgroup search.
    VerifyLemma5 {
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long, default_value = "a b")]
        f: String,
        #[arg(long, default_value = "c")]
        g: String,
        #[arg(long, default_value_t = 3)]
        k1: u64,
        #[arg(long, default_value_t = 2)]
        k2: u64,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Norm growth of A^N1 (A^g)^N2 and the axis geometry behind it.
    VerifyLemma7 {
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 200)]
        axis_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classification and axis of an element; overlap with a second axis.
    Axis {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        other: Option<String>,
        #[arg(long, default_value_t = 1)]
        window: usize,
    },
}

#[derive(Debug, Default, Serialize)]
struct Report {
    verdict: String,
    violations: Vec<Value>,
    witnesses: Vec<Value>,
    timings: BTreeMap<String, f64>,
    #[serde(skip)]
    lines: Vec<String>,
    #[serde(skip)]
    failed: bool,
}

impl Report {
    fn new(verdict: impl Into<String>) -> Self {
        Report { verdict: verdict.into(), ..Default::default() }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Group(#[from] Error),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_group(path: &Path) -> Result<Arc<FreeProduct>, CliError> {
    Ok(parse_group_spec(&read(path)?)?)
}

fn builtin(text: &str) -> Arc<FreeProduct> {
    parse_group_spec(text).expect("built-in group spec")
}

fn groups_or(path: &Option<PathBuf>, defaults: &[&str]) -> Result<Vec<Arc<FreeProduct>>, CliError> {
    match path {
        Some(p) => Ok(vec![load_group(p)?]),
        None => Ok(defaults.iter().map(|d| builtin(d)).collect()),
    }
}

fn factor_element(ambient: &Arc<FreeProduct>, factor: usize, id: crate::finite_group::ElementId) -> String {
    ambient.embed(factor, id).map(|x| x.to_string()).unwrap_or_else(|_| id.to_string())
}

fn violation_json(data: &KuroshData, v: &Violation) -> (Value, Option<Value>) {
    let w = v.witness().map(|w| {
        json!({
            "condition": v.condition(),
            "first_part": w.first_part,
            "second_part": w.second_part,
            "factor": w.factor,
            "f": factor_element(&data.ambient, w.factor, w.f),
            "g": factor_element(&data.ambient, w.factor, w.g),
            "k1": w.k1,
            "k2": w.k2,
        })
    });
    (Value::String(render_violation(data, v)), w)
}

fn render_violation(data: &KuroshData, v: &Violation) -> String {
    match v.witness() {
        None => v.to_string(),
        Some(w) => format!(
            "condition {}: parts {} and {} in factor {}: f={} g={} k1={} k2={}",
            v.condition(),
            w.first_part,
            w.second_part,
            w.factor,
            factor_element(&data.ambient, w.factor, w.f),
            factor_element(&data.ambient, w.factor, w.g),
            w.k1,
            w.k2
        ),
    }
}

fn parse_assignments(set: &[String], ambient: &Arc<FreeProduct>) -> Result<Substitution, CliError> {
    let mut subst = Substitution::new();
    for item in set.iter().flat_map(|s| s.split(';')) {
        let (var, value) =
            item.split_once('=').ok_or_else(|| CliError::Invalid(format!("expected `xN=word`, found `{item}`")))?;
        let index = var
            .trim()
            .strip_prefix('x')
            .and_then(|d| d.parse::<u32>().ok())
            .ok_or_else(|| CliError::Invalid(format!("bad variable name `{}`", var.trim())))?;
        subst.insert(index, parse_element(value.trim(), ambient)?);
    }
    Ok(subst)
}

fn execute(cmd: &Command) -> Result<Report, CliError> {
    Ok(match cmd {
        Command::Eval { group, word, set } => {
            let g = load_group(group)?;
            let w = crate::words::MixedWord::parse(word, &g)?;
            let value = w.evaluate(&parse_assignments(set, &g)?)?;
            let mut r = Report::new("ok");
            r.line(format!("{value}"));
            r.line(format!("norm {}", value.norm()));
            r.witnesses.push(json!({ "value": value.to_string(), "norm": value.norm() }));
            r
        }
        Command::Order { group, word } => {
            let g = load_group(group)?;
            let x = parse_element(word, &g)?;
            let mut r = Report::new("ok");
            r.line(format!("order {}", x.order()));
            r.witnesses.push(json!({ "value": x.to_string(), "order": x.order().to_string() }));
            r
        }
        Command::Reduce { group, word } => {
            let g = load_group(group)?;
            let x = parse_element(word, &g)?;
            let red = x.cyclic_reduce();
            let mut r = Report::new("ok");
            r.line(format!("conjugator {}", red.conjugator));
            r.line(format!("core {}", red.core));
            r.witnesses.push(json!({ "conjugator": red.conjugator.to_string(), "core": red.core.to_string() }));
            r
        }
        Command::Check { group, subgroup } => {
            let g = load_group(group)?;
            let data = parse_subgroup_spec(&read(subgroup)?, &g)?;
            if let Err(errs) = data.validate() {
                let msgs: Vec<String> = errs.iter().map(ToString::to_string).collect();
                return Err(CliError::Invalid(msgs.join("; ")));
            }
            let verdict = check_all(&data)?;
            let mut r = Report::new(verdict.to_string());
            r.line(verdict.to_string());
            for v in verdict.violations() {
                let (text, witness) = violation_json(&data, v);
                r.line(text.as_str().unwrap().to_string());
                r.violations.push(text);
                r.witnesses.extend(witness);
            }
            let intersections = check_condition3(&data)?;
            if !intersections.is_empty() {
                r.line(format!("{} part pair(s) also meet nontrivially after conjugation:", intersections.len()));
                for v in &intersections {
                    r.line(format!("  {}", render_violation(&data, v)));
                }
            }
            r.failed = matches!(verdict, Verdict::FailsNecessary(_));
            r
        }
        Command::Solve { group, eq, ball, subgroup, depth, all } => {
            let g = load_group(group)?;
            let equation = Equation::parse(eq, &g)?;
            let parts = match (ball, subgroup) {
                (Some(b), _) => parse_ball_parts(b, &g)?,
                (None, Some(p)) => parse_subgroup_spec(&read(p)?, &g)?.parts,
                (None, None) => return Err(CliError::Invalid("solve needs --ball or --subgroup".into())),
            };
            let values = g.enumerate_ball(&parts, *depth)?;
            let cands = Candidates::uniform(&equation, &values);
            let mode = if *all { SearchMode::All } else { SearchMode::First };
            match solve_bounded(&equation, &cands, mode)? {
                SolveOutcome::Solutions(sols) => {
                    let mut r = Report::new("solved");
                    for s in &sols {
                        r.line(s.to_string());
                        r.witnesses.push(json!(s
                            .iter()
                            .map(|(i, v)| (format!("x{i}"), v.to_string()))
                            .collect::<BTreeMap<_, _>>()));
                    }
                    r
                }
                SolveOutcome::NoSolutionInSet { tuples_checked } => {
                    let mut r = Report::new("no solution in set");
                    r.line(format!(
                        "no solution among {tuples_checked} tuples from a ball of {} elements",
                        values.len()
                    ));
                    r.violations
                        .push(json!({ "tuples_checked": tuples_checked.to_string(), "ball_size": values.len() }));
                    r.failed = true;
                    r
                }
            }
        }
        Command::VerifyTheorem2 { range } => {
            if *range < 1 {
                return Err(CliError::Invalid("--range must be positive".into()));
            }
            let rep = theorem2_report(*range);
            let mut r = Report::new(if rep.passed() { "pass" } else { "fail" });
            let bad: Vec<String> = rep.cases.iter().filter(|c| c.mismatches > 0).map(|c| c.case.to_string()).collect();
            let formulas = if bad.is_empty() {
                "all case formulas confirmed".to_string()
            } else {
                format!("case formulas contradicted in case(s) {}", bad.join(", "))
            };
            r.line(format!("{} matches / {formulas}", rep.rhs_matches()));
            r.line(format!("{} evaluations over [-{range}, {range}]^3", rep.evaluations()));
            for c in &rep.cases {
                let fitted = c.fitted.map_or("not a power of ba".to_string(), |f| f.to_string());
                r.line(format!(
                    "case {} eps={:?}: printed {} observed {} mismatches {}",
                    c.case, c.epsilons, c.printed, fitted, c.mismatches
                ));
                if let Some(m) = &c.first_mismatch {
                    r.violations.push(json!({ "case": c.case, "first_mismatch": m, "mismatches": c.mismatches }));
                }
            }
            r.line(format!(
                "lifted solution gives {} (target {}, norm {}): {}",
                rep.lifted_value,
                rep.lifted_target,
                rep.lifted_norm,
                if rep.lifted_ok { "equal" } else { "different" }
            ));
            r.witnesses.push(serde_json::to_value(&rep).expect("serializable"));
            r.failed = !rep.passed();
            r
        }
        Command::VerifyLemma4 { group, word, trials, seed } => {
            let groups = groups_or(group, &[C2_C3, S3_C2])?;
            let mut r = Report::new("pass");
            if let Some(w) = word {
                for g in &groups {
                    let c = build_lemma4(g, w)?;
                    r.line(format!("{}", c.equation));
                    r.line(format!("p = {}, k = {:?}, solution {}", c.prime, c.exponents, c.solution));
                    let ok = c.verify()?;
                    r.line(format!("substitution verifies: {ok}"));
                    r.failed |= !ok;
                    r.witnesses.push(json!({ "equation": c.equation.to_string(), "prime": c.prime, "exponents": c.exponents, "solution": c.solution.to_string() }));
                }
            } else {
                for g in &groups {
                    let rep = lemma4_trials(g, *trials, *seed)?;
                    r.line(format!(
                        "{}: {} trials, {} of infinite order, {} failures",
                        describe(g),
                        rep.trials,
                        rep.special,
                        rep.failures.len()
                    ));
                    r.failed |= !rep.passed();
                    r.violations.extend(rep.failures.iter().map(|f| json!(f)));
                }
            }
            if r.failed {
                r.verdict = "fail".into();
            }
            r
        }
        Command::VerifyLemma5 { group, f, g: conj, k1, k2, depth } => {
            let g = groups_or(group, &[Z6_C2])?.remove(0);
            let c = build_lemma5(&g, f, conj, *k1, *k2)?;
            let mut r = Report::new("pass");
            r.line(format!("N = {}", c.n));
            r.line(format!("rhs = {} (norm {})", c.equation.rhs, c.equation.rhs.norm()));
            let ok = c.verify()?;
            r.line(format!("generator substitution {} verifies: {ok}", c.solution));
            r.failed |= !ok;
            match c.search_subgroup(*depth)? {
                None => r.line("f is not a single-factor element; no subgroup search"),
                Some(SolveOutcome::NoSolutionInSet { tuples_checked }) => {
                    r.line(format!("no solution in the subgroup ball of radius {depth} ({tuples_checked} tuples)"));
                }
                Some(SolveOutcome::Solutions(sols)) => {
                    r.line(format!("subgroup ball contains a solution: {}", sols[0]));
                    r.violations.push(json!({ "subgroup_solution": sols[0].to_string() }));
                    r.failed = true;
                }
            }
            r.witnesses
                .push(json!({ "n": c.n, "rhs": c.equation.rhs.to_string(), "solution": c.solution.to_string() }));
            if r.failed {
                r.verdict = "fail".into();
            }
            r
        }
        Command::VerifyLemma7 { group, trials, axis_trials: axis_n, seed } => {
            let groups = groups_or(group, &[C2_C3, C2_C2_C2])?;
            let mut r = Report::new("pass");
            for g in &groups {
                let norm = lemma7_trials(g, *trials, *seed);
                r.line(format!(
                    "{}: norm bound held in {}/{} trials (least margin {})",
                    describe(g),
                    norm.trials - norm.failures.len(),
                    norm.trials,
                    norm.min_slack.map_or("-".into(), |s| s.to_string())
                ));
                let axis = axis_trials(g, *axis_n, *seed)?;
                r.line(format!(
                    "{}: axis overlap and displacement held in {}/{} trials ({} overlapping pairs)",
                    describe(g),
                    axis.trials - axis.failures.len(),
                    axis.trials,
                    axis.special
                ));
                r.failed |= !norm.passed() || !axis.passed();
                r.violations.extend(norm.failures.iter().chain(&axis.failures).map(|f| json!(f)));
            }
            if r.failed {
                r.verdict = "fail".into();
            }
            r
        }
        Command::Axis { group, word, other, window } => {
            let g = load_group(group)?;
            let u = parse_element(word, &g)?;
            let mut r = Report::new("ok");
            match classify(&u) {
                Classification::Elliptic(v) => {
                    r.line(format!("elliptic, fixes {v}"));
                    r.witnesses.push(json!({ "kind": "elliptic", "fixed_vertex": v.to_string() }));
                }
                Classification::Hyperbolic(ax) => {
                    r.line(format!(
                        "hyperbolic, translation length {} edges, core {}, conjugator {}",
                        ax.translation_length_edges, ax.core, ax.conjugator
                    ));
                    let verts: Vec<String> = axis_vertices(&u, *window)?.iter().map(ToString::to_string).collect();
                    r.line(verts.join(" "));
                    r.witnesses.push(json!({
                        "kind": "hyperbolic",
                        "translation_length_edges": ax.translation_length_edges,
                        "axis": verts,
                    }));
                }
            }
            if let Some(o) = other {
                let v = parse_element(o, &g)?;
                let overlap = axes_intersection(&u, &v, *window)?;
                let text = match overlap {
                    AxisOverlap::Disjoint => "disjoint".to_string(),
                    AxisOverlap::Edges(e) => format!("{e} edges"),
                };
                r.line(format!("axes overlap: {text}"));
                r.witnesses.push(json!({ "overlap": text }));
            }
            r
        }
    })
}

fn describe(g: &FreeProduct) -> String {
    g.factors().iter().map(|f| format!("[{}]", f.order())).collect::<Vec<_>>().join("*")
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return if code == 0 { 0 } else { 2 };
        }
    };
    let start = Instant::now();
    let mut report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    report.timings.insert("total_ms".into(), start.elapsed().as_secs_f64() * 1e3);
    if cli.json {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        for l in &report.lines {
            let _ = writeln!(out, "{l}");
        }
    }
    if report.failed {
        1
    } else {
        0
    }
}
