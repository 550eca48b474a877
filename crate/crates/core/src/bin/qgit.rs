use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use quadric_git::chart::{
    chart_at_line_point, chart_at_p0, generic_member, leading_sources, lct_upper_bound, line_vanishing_order,
    multiplicity, weighted_multiplicity, WeightVector,
};
use quadric_git::chow::{ci_chow_weight, ChowVerdictKind};
use quadric_git::families::{
    basis, check_torus_stability, classify_family, enumerate_maximal_families, family_at,
    verify_inclusion_lemmas, Classification, DestabilizingFamily,
};
use quadric_git::orbits::{fixed_space_vh, torus_orbit_closed, torus_semistable, type_xi, OrbitClosure};
use quadric_git::parse::{parse_coefficient, parse_polynomial, parse_rational};
use quadric_git::poly::{format_rational, Polynomial};
use quadric_git::suite;
use quadric_git::weights::{DiagonalAction, DiagonalOnePs, NormalizedOnePs};
use quadric_git::Error;

/// Torus GIT stability workbench for quadric threefold complete intersections.
#[derive(Parser)]
#[command(name = "qgit", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Add wall-clock timing to the report (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    /// Exit with status 1 when this finding occurs.
    #[arg(long, global = true, value_enum)]
    fail_on: Option<Finding>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Finding {
    /// `check`: some normalized subgroup makes every weight negative.
    Unstable,
    /// `check`: some normalized subgroup makes every weight non-positive.
    NonStable,
    /// `chart`: multiplicity at the chart origin is at least 3.
    MultGe3,
    /// `lct-bound`: the bound is below 1.
    LctBelowOne,
    /// `type-xi`: the orbit is not closed.
    NotClosed,
    /// `chow`: the combined weight is negative.
    ChowUnstable,
}

impl Finding {
    fn name(self) -> &'static str {
        match self {
            Finding::Unstable => "unstable",
            Finding::NonStable => "non-stable",
            Finding::MultGe3 => "mult-ge3",
            Finding::LctBelowOne => "lct-below-one",
            Finding::NotClosed => "not-closed",
            Finding::ChowUnstable => "chow-unstable",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the monomial basis of degree-d forms modulo the quadric.
    Basis {
        #[arg(long)]
        d: u32,
    },
    /// Maximal destabilizing families with their singularity classification.
    Families {
        #[arg(long)]
        d: u32,
        /// Negative weights only (unstable families).
        #[arg(long)]
        strict: bool,
    },
    /// Check that every destabilizing family lies in a listed maximal one.
    VerifyLemmas {
        #[arg(long)]
        d: u32,
    },
    /// Torus stability of a form after reduction modulo the quadric.
    Check {
        #[arg(long)]
        d: u32,
        /// Polynomial, or `@family:u/v[:strict]` for a generic member.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Local equation, multiplicity and leading form in an affine chart.
    Chart {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Centre the chart at the line point reached by `x1 -> y1 - shift`.
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
    },
    /// Weighted multiplicity at p0 and the resulting lct upper bound.
    LctBound {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Three positive integers, e.g. 2,3,4.
        #[arg(long, default_value = "2,3,4")]
        weights: String,
    },
    /// The type xi form, the H-fixed space and orbit closedness.
    TypeXi {
        #[arg(long)]
        d: u32,
        /// Comma-separated coefficients mu_0,...,mu_{d/2}.
        #[arg(long, allow_hyphen_values = true)]
        mus: String,
        /// Extra terms added to the type xi form (must stay in V^H).
        #[arg(long, allow_hyphen_values = true)]
        extra: Option<String>,
    },
    /// Chow weight of Q ∩ Y under a diagonal subgroup of SL(5).
    Chow {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Five integer weights summing to zero.
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        /// Degree used to expand `@family:` sugar in `--f`.
        #[arg(long)]
        d: Option<u32>,
    },
    /// Run the full acceptance battery.
    PaperSuite,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Basis { .. } => "basis",
            Command::Families { .. } => "families",
            Command::VerifyLemmas { .. } => "verify-lemmas",
            Command::Check { .. } => "check",
            Command::Chart { .. } => "chart",
            Command::LctBound { .. } => "lct-bound",
            Command::TypeXi { .. } => "type-xi",
            Command::Chow { .. } => "chow",
            Command::PaperSuite => "paper-suite",
        }
    }

    fn findings(&self) -> &'static [Finding] {
        match self {
            Command::Check { .. } => &[Finding::Unstable, Finding::NonStable],
            Command::Chart { .. } => &[Finding::MultGe3],
            Command::LctBound { .. } => &[Finding::LctBelowOne],
            Command::TypeXi { .. } => &[Finding::NotClosed],
            Command::Chow { .. } => &[Finding::ChowUnstable],
            _ => &[],
        }
    }
}

/// Result of one analysis: JSON payload, text rendering, raised findings,
/// and whether an internal verification failed.
struct Outcome {
    input: Value,
    result: Value,
    text: Vec<String>,
    findings: Vec<Finding>,
    failed: bool,
}

impl Outcome {
    fn new(input: Value, result: Value, text: Vec<String>) -> Self {
        Outcome {
            input,
            result,
            text,
            findings: Vec::new(),
            failed: false,
        }
    }
}

fn rational(r: &BigRational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(items.into_iter().map(|x| Value::String(x.to_string())).collect())
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn classification_json(c: &Classification) -> Value {
    json!({
        "tag": c.tag.to_string(),
        "line_vanishing_order": c.line_vanishing_order,
        "p0_on_surface": c.p0_on_surface,
    })
}

fn family_json(fam: &DestabilizingFamily) -> Value {
    let c = classify_family(fam);
    json!({
        "slope": fam.slope.to_string(),
        "kind": fam.kind(),
        "maximal": fam.maximal,
        "size": fam.members.len(),
        "max_weight": fam.max_weight(),
        "members": strings(&fam.members),
        "classification": classification_json(&c),
    })
}

/// A form given on the command line, possibly through `@family:` sugar.
struct FormInput {
    poly: Polynomial,
    family: Option<DestabilizingFamily>,
}

impl FormInput {
    fn echo(&self, text: &str) -> Value {
        let mut v = json!({ "text": text, "canonical": self.poly.to_string() });
        if let Some(fam) = &self.family {
            v["family"] = json!({
                "slope": fam.slope.to_string(),
                "kind": fam.kind(),
                "maximal": fam.maximal,
            });
        }
        v
    }
}

fn read_form(text: &str, d: Option<u32>) -> Result<FormInput, Error> {
    let Some(sugar) = text.trim().strip_prefix("@family:") else {
        return Ok(FormInput {
            poly: parse_polynomial(text)?,
            family: None,
        });
    };
    let d = d.ok_or_else(|| Error::Precondition("@family: needs --d".into()))?;
    let (slope, strict) = match sugar.rsplit_once(':') {
        Some((slope, "strict")) => (slope, true),
        Some((_, other)) => {
            return Err(Error::Precondition(format!(
                "unknown @family: modifier {other:?}, expected `strict`"
            )))
        }
        None => (sugar, false),
    };
    let fam = family_at(d, NormalizedOnePs::parse(slope)?, strict)?;
    Ok(FormInput {
        poly: generic_member(&fam.members),
        family: Some(fam),
    })
}

fn run(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Basis { d } => {
            let b = basis(*d)?;
            let text = vec![format!("degree {d}: {} basis monomials", b.len()), join(&b)];
            Ok(Outcome::new(
                json!({ "d": d }),
                json!({ "count": b.len(), "monomials": strings(&b) }),
                text,
            ))
        }
        Command::Families { d, strict } => {
            let fams = enumerate_maximal_families(*d, *strict)?;
            let mut text = vec![format!(
                "degree {d}: {} maximal {} families",
                fams.len(),
                if *strict { "strict (M_<0)" } else { "non-strict (M_<=0)" }
            )];
            for fam in &fams {
                let c = classify_family(fam);
                text.push(format!(
                    "  slope {}: {} monomials, {}, line order {}, p0 {}",
                    fam.slope,
                    fam.members.len(),
                    c.tag,
                    c.line_vanishing_order,
                    if c.p0_on_surface { "on surface" } else { "off surface" }
                ));
                text.push(format!("    {}", join(&fam.members)));
            }
            Ok(Outcome::new(
                json!({ "d": d, "strict": strict }),
                json!({ "count": fams.len(), "families": fams.iter().map(family_json).collect::<Vec<_>>() }),
                text,
            ))
        }
        Command::VerifyLemmas { d } => {
            let report = verify_inclusion_lemmas(*d)?;
            let passed = report.all_passed();
            let mut text = vec![format!(
                "degree {d}: {} probe slopes, maximal M_<=0 at [{}], maximal M_<0 at [{}]",
                report.checked_slopes.len(),
                join(&report.maximal_non_strict),
                join(&report.maximal_strict)
            )];
            for c in &report.checks {
                text.push(format!("  [{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
            }
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect();
            let mut out = Outcome::new(
                json!({ "d": d }),
                json!({
                    "passed": passed,
                    "checked_slopes": strings(&report.checked_slopes),
                    "maximal_non_strict": strings(&report.maximal_non_strict),
                    "maximal_strict": strings(&report.maximal_strict),
                    "checks": checks,
                }),
                text,
            );
            out.failed = !passed;
            Ok(out)
        }
        Command::Check { d, f } => {
            let form = read_form(f, Some(*d))?;
            let report = check_torus_stability(&form.poly, *d)?;
            let mut text = vec![
                format!("reduced: {}", report.reduced),
                format!("verdict: {}", report.verdict),
            ];
            let witnesses: Vec<Value> = report
                .witnesses
                .iter()
                .map(|w| {
                    text.push(format!(
                        "  witness {} at slope {}: {}, line order {}",
                        w.family.kind(),
                        w.family.slope,
                        w.classification.tag,
                        w.classification.line_vanishing_order
                    ));
                    json!({
                        "slope": w.family.slope.to_string(),
                        "kind": w.family.kind(),
                        "classification": classification_json(&w.classification),
                    })
                })
                .collect();
            let mut out = Outcome::new(
                json!({ "d": d, "f": form.echo(f) }),
                json!({
                    "reduced": report.reduced.to_string(),
                    "verdict": report.verdict.to_string(),
                    "witnesses": witnesses,
                }),
                text,
            );
            if report.verdict.is_unstable() {
                out.findings.push(Finding::Unstable);
            }
            if report.verdict.is_non_stable() {
                out.findings.push(Finding::NonStable);
            }
            Ok(out)
        }
        Command::Chart { d, f, shift } => {
            let form = read_form(f, Some(*d))?;
            let shift_value = match shift {
                Some(s) => parse_rational(s)?,
                None => BigRational::from_integer(0.into()),
            };
            let chart = match shift {
                Some(_) => chart_at_line_point(&form.poly, *d, &shift_value)?,
                None => chart_at_p0(&form.poly, *d)?,
            };
            let mult = multiplicity(&chart)?;
            let sources = leading_sources(&form.poly, *d, &shift_value)?;
            let line_order = line_vanishing_order(&form.poly.reduce_mod_quadric()?)?;
            let text = vec![
                format!("chart at {}: {}", chart.origin, chart.poly),
                format!("multiplicity: {}", mult.order),
                format!("leading form: {}", mult.leading_form),
                format!("leading sources: {}", join(&sources)),
                format!("line vanishing order: {line_order}"),
            ];
            let mut out = Outcome::new(
                json!({ "d": d, "f": form.echo(f), "shift": rational(&shift_value) }),
                json!({
                    "origin": chart.origin.to_string(),
                    "chart_polynomial": chart.poly.to_string(),
                    "multiplicity": mult.order,
                    "leading_form": mult.leading_form.to_string(),
                    "leading_sources": strings(&sources),
                    "line_vanishing_order": line_order,
                }),
                text,
            );
            if mult.order >= 3 {
                out.findings.push(Finding::MultGe3);
            }
            Ok(out)
        }
        Command::LctBound { d, f, weights } => {
            let form = read_form(f, Some(*d))?;
            let w = WeightVector::parse(weights)?;
            let chart = chart_at_p0(&form.poly, *d)?;
            let wm = weighted_multiplicity(&chart, &w)?;
            let bound = lct_upper_bound(&chart, &w)?;
            let below_one = bound < BigRational::from_integer(1.into());
            let text = vec![
                format!("weights: {w}"),
                format!("weighted multiplicity: {wm}"),
                format!(
                    "lct upper bound: {}/{wm} = {}{}",
                    w.sum(),
                    format_rational(&bound),
                    if below_one { " (< 1, not log canonical at p0)" } else { "" }
                ),
            ];
            let mut out = Outcome::new(
                json!({ "d": d, "f": form.echo(f), "weights": w.get() }),
                json!({
                    "chart_polynomial": chart.poly.to_string(),
                    "weighted_multiplicity": wm,
                    "weight_sum": w.sum(),
                    "lct_upper_bound": rational(&bound),
                    "bound_below_one": below_one,
                }),
                text,
            );
            if below_one {
                out.findings.push(Finding::LctBelowOne);
            }
            Ok(out)
        }
        Command::TypeXi { d, mus, extra } => {
            let coeffs = mus
                .split(',')
                .map(parse_coefficient)
                .collect::<Result<Vec<_>, _>>()?;
            let xi = type_xi(*d, &coeffs)?;
            let form = match extra {
                Some(e) => xi.checked_add(&parse_polynomial(e)?)?,
                None => xi.clone(),
            };
            let vh = fixed_space_vh(*d)?;
            let closure = torus_orbit_closed(&form)?;
            let semistable = torus_semistable(&form)?;
            let mut text = vec![
                format!("form: {form}"),
                format!("V^H: {}", join(&vh)),
                format!("torus semistable: {semistable}"),
            ];
            let closure_json = match &closure {
                OrbitClosure::Closed => {
                    text.push("orbit closed in V^H".into());
                    json!({ "closed": true })
                }
                OrbitClosure::DegeneratesTo { limit, direction } => {
                    text.push(format!("orbit not closed: degenerates along {direction} to {limit}"));
                    json!({
                        "closed": false,
                        "direction": direction.to_string(),
                        "limit": limit.to_string(),
                        "limit_is_type_xi": *limit == xi,
                    })
                }
            };
            let mut out = Outcome::new(
                json!({
                    "d": d,
                    "mus": strings(&coeffs),
                    "extra": extra.as_deref(),
                }),
                json!({
                    "form": form.to_string(),
                    "fixed_space_vh": strings(&vh),
                    "torus_semistable": semistable,
                    "orbit": closure_json,
                }),
                text,
            );
            if !closure.is_closed() {
                out.findings.push(Finding::NotClosed);
            }
            Ok(out)
        }
        Command::Chow { q, f, chi, d } => {
            let qp = parse_polynomial(q)?;
            let form = read_form(f, *d)?;
            let chi_ps = DiagonalOnePs::parse(chi)?;
            let v = ci_chow_weight(&qp, &form.poly, &chi_ps)?;
            let text = vec![
                format!("mu(Q) = {}, mu(Y) = {}", v.mu_q, v.mu_y),
                format!(
                    "combined = {}*{} + {}*({}) = {}",
                    v.deg_y, v.mu_q, v.deg_q, v.mu_y, v.combined
                ),
                format!("verdict: {}", v.verdict),
            ];
            let mut out = Outcome::new(
                json!({ "q": q, "f": form.echo(f), "chi": chi_ps.weights() }),
                json!({
                    "mu_q": v.mu_q,
                    "mu_y": v.mu_y,
                    "deg_q": v.deg_q,
                    "deg_y": v.deg_y,
                    "combined": v.combined,
                    "verdict": v.verdict.to_string(),
                }),
                text,
            );
            if v.verdict == ChowVerdictKind::ChowUnstableWitness {
                out.findings.push(Finding::ChowUnstable);
            }
            Ok(out)
        }
        Command::PaperSuite => {
            let results = suite::run_all();
            let passed = results.iter().all(|r| r.passed);
            let mut text = Vec::new();
            for r in &results {
                text.push(r.line());
                text.extend(r.details.iter().filter(|d| d.starts_with("FAILED")).map(|d| format!("    {d}")));
            }
            text.push(format!(
                "{}/{} criteria passed",
                results.iter().filter(|r| r.passed).count(),
                results.len()
            ));
            let criteria: Vec<Value> = results
                .iter()
                .map(|r| json!({ "id": r.id, "name": r.name, "passed": r.passed, "details": r.details }))
                .collect();
            let mut out = Outcome::new(json!({}), json!({ "passed": passed, "criteria": criteria }), text);
            out.failed = !passed;
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    if let Some(finding) = cli.common.fail_on {
        if !cli.command.findings().contains(&finding) {
            eprintln!("error: --fail-on {} does not apply to `{name}`", finding.name());
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed();
    let (findings, failed) = (outcome.findings.clone(), outcome.failed);
    let mut lines = Vec::new();
    if cli.common.json {
        let mut report = json!({
            "schema": 1,
            "tool": "qgit",
            "version": env!("CARGO_PKG_VERSION"),
            "command": name,
            "input": outcome.input,
            "result": outcome.result,
        });
        if cli.common.timing {
            report["timing_ms"] = json!(elapsed.as_millis() as u64);
        }
        lines.push(serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        lines = outcome.text;
        if cli.common.timing {
            lines.push(format!("time: {:.3}s", elapsed.as_secs_f64()));
        }
    }
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let mut out = std::io::stdout().lock();
    for line in &lines {
        if writeln!(out, "{line}").is_err() {
            break;
        }
    }
    let raised = cli.common.fail_on.is_some_and(|f| findings.contains(&f));
    if raised || failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
