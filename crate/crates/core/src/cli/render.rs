//! Text tables and JSON for a [`CohomologyReport`].

use num_traits::{One, Signed};
use serde::Serialize;

use crate::algebra::{ModuleSpec, ValidationReport};
use crate::calculus::RankOneVerdict;
use crate::cochain::{Cochain, ModuleValue, RowIndex};
use crate::cohomology::{reduced_normal_form, CohomologyClass, CohomologyReport, DegreeSelection};
use crate::exactpoly::{Monomial, MultiPoly, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Basic,
    Reduced,
    Both,
}

impl Which {
    pub fn basic(self) -> bool {
        matches!(self, Which::Basic | Which::Both)
    }

    pub fn reduced(self) -> bool {
        matches!(self, Which::Reduced | Which::Both)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    pub selection: DegreeSelection,
    pub which: Which,
    /// Print `∂` and `λ₁` instead of `d` and `x1`.
    pub glyphs: bool,
}

fn var_names(q: usize, glyphs: bool) -> Vec<String> {
    if !glyphs {
        return MultiPoly::indexed_names(q);
    }
    const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    let mut names = vec!["∂".to_string()];
    names.extend((1..=q).map(|i| {
        let digits: String = i.to_string().chars().map(|c| SUB[c.to_digit(10).unwrap() as usize]).collect();
        format!("λ{digits}")
    }));
    names
}

/// `H`, `-H`, `2*H`, `H*x1^2`, `H*(x1 - x2)`.
fn component(name: &str, p: &MultiPoly, names: &[&str]) -> String {
    let arity = p.arity();
    let constant = p.terms().all(|(m, _)| m.total_degree() == 0);
    if constant {
        let c = p.coefficient(&Monomial::one(arity));
        return if c.is_one() {
            name.to_string()
        } else if (-&c).is_one() {
            format!("-{name}")
        } else {
            format!("{c}*{name}")
        };
    }
    if p.len() == 1 {
        let (m, c) = p.terms().next().expect("one term");
        let mono = MultiPoly::term(m.clone(), Rational::one()).format_with(names);
        let sign = if c.is_negative() { "-" } else { "" };
        let abs = c.abs();
        return if abs.is_one() {
            format!("{sign}{name}*{mono}")
        } else {
            format!("{sign}{abs}*{name}*{mono}")
        };
    }
    format!("{name}*({})", p.format_with(names))
}

/// A module value as a sum over the module generators.
pub fn format_value(module: &ModuleSpec, v: &ModuleValue, glyphs: bool) -> String {
    let owned = var_names(v.arity(), glyphs);
    let names: Vec<&str> = owned.iter().map(String::as_str).collect();
    let mut out = String::new();
    for (k, p) in v.components().iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let c = component(module.generator_name(k), p, &names);
        if out.is_empty() {
            out = c;
        } else if let Some(rest) = c.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&c);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_row(names: &[String], row: &RowIndex) -> String {
    row.generators()
        .iter()
        .map(|&g| names[g].as_str())
        .collect::<Vec<_>>()
        .join("⊗")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowJson {
    pub row: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassJson {
    pub label: String,
    pub rows: Vec<RowJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupJson {
    pub dim: usize,
    pub basis: Vec<ClassJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeJson {
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basic: Option<GroupJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<GroupJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeyondJson {
    pub degree: usize,
    pub basic_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundJson {
    #[serde(rename = "N")]
    pub bound: usize,
    pub n: usize,
    pub u: String,
    pub v: String,
    pub discriminant: String,
    pub beyond: Option<BeyondJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationJson {
    pub kind: String,
    pub generators: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationJson {
    pub clean: bool,
    pub violations: Vec<ViolationJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportJson {
    pub schema: u32,
    pub algebra: String,
    pub module: String,
    pub degrees: Vec<DegreeJson>,
    pub bound: BoundJson,
    pub casimir: Option<Vec<String>>,
    pub vanishing: Option<String>,
    pub validation: ValidationJson,
}

/// A class as displayed: normalized, and for reduced classes reduced
/// modulo the image of `∂` first.
fn display_rep(module: &ModuleSpec, c: &CohomologyClass, reduced: bool) -> Cochain {
    let f = if reduced {
        reduced_normal_form(module, &c.representative)
    } else {
        c.representative.clone()
    };
    f.normalized()
}

fn label(q: usize, j: usize, reduced: bool) -> String {
    let f = if reduced { "f\u{304}" } else { "f" };
    if q < 10 && j < 10 {
        format!("{f}{q}{j}")
    } else {
        format!("{f}{q},{j}")
    }
}

struct Displayed {
    label: String,
    rows: Vec<(String, String)>,
}

fn displayed(
    gen_names: &[String],
    module: &ModuleSpec,
    q: usize,
    classes: &[CohomologyClass],
    reduced: bool,
    glyphs: bool,
) -> Vec<Displayed> {
    classes
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let f = display_rep(module, c, reduced);
            Displayed {
                label: label(q, j + 1, reduced),
                rows: f
                    .rows()
                    .map(|(row, v)| (format_row(gen_names, row), format_value(module, v, glyphs)))
                    .collect(),
            }
        })
        .collect()
}

/// Degrees shown: with `--all` the extra basic degree `N+1` is reported in
/// the footer rather than the table.
fn shown_degrees<'a>(
    report: &'a CohomologyReport,
    opts: &RenderOptions,
) -> impl Iterator<Item = &'a crate::cohomology::DegreeRecord> {
    let top = match opts.selection {
        DegreeSelection::All => Some(report.bound.bound),
        DegreeSelection::Single(_) => None,
    };
    report.degrees.iter().filter(move |d| top.map_or(true, |t| d.q <= t))
}

fn beyond(report: &CohomologyReport, opts: &RenderOptions) -> Option<BeyondJson> {
    if opts.selection != DegreeSelection::All {
        return None;
    }
    let q = report.bound.bound + 1;
    report.degree(q).map(|d| BeyondJson {
        degree: q,
        basic_dim: d.basic_dim(),
    })
}

fn vanishing_note(report: &CohomologyReport) -> Option<String> {
    match &report.vanishing {
        Some(RankOneVerdict::Applies { delta, alpha }) => {
            let action = MultiPoly::from_terms(
                1,
                [
                    (Monomial::new(1, &[0]), Rational::one()),
                    (Monomial::new(0, &[1]), delta.clone()),
                    (Monomial::one(1), alpha.clone()),
                ],
            );
            Some(format!(
                "rank-one module with Virasoro action {action} and nonzero constant term: all cohomology vanishes"
            ))
        }
        _ => None,
    }
}

fn validation_json(v: &ValidationReport) -> ValidationJson {
    ValidationJson {
        clean: v.is_clean(),
        violations: v
            .violations
            .iter()
            .map(|x| ViolationJson {
                kind: x.kind.to_string(),
                generators: x.generators.clone(),
                detail: x.detail.clone(),
            })
            .collect(),
    }
}

fn casimir_strings(report: &CohomologyReport, module: &ModuleSpec) -> Vec<String> {
    report
        .casimir
        .iter()
        .map(|m| {
            let c = Cochain::from_element(1, m.clone()).normalized();
            let v = c.rows().next().map(|(_, v)| v.clone()).unwrap_or_else(|| m.clone());
            format_value(module, &v, false)
        })
        .collect()
}

pub fn report_json(report: &CohomologyReport, module: &ModuleSpec, gen_names: &[String], opts: &RenderOptions) -> ReportJson {
    let group = |q: usize, classes: &[CohomologyClass], reduced: bool| GroupJson {
        dim: classes.len(),
        basis: displayed(gen_names, module, q, classes, reduced, opts.glyphs)
            .into_iter()
            .map(|d| ClassJson {
                label: d.label,
                rows: d.rows.into_iter().map(|(row, value)| RowJson { row, value }).collect(),
            })
            .collect(),
    };
    let degrees = shown_degrees(report, opts)
        .map(|d| DegreeJson {
            degree: d.q,
            basic: opts.which.basic().then(|| group(d.q, &d.basic, false)),
            reduced: if opts.which.reduced() {
                d.reduced.as_ref().map(|r| group(d.q, r, true))
            } else {
                None
            },
        })
        .collect();
    let b = &report.bound;
    let casimir_known = opts.which.reduced() && report.degree(0).is_some_and(|d| d.reduced.is_some());
    ReportJson {
        schema: 1,
        algebra: report.algebra.clone(),
        module: report.module.clone(),
        degrees,
        bound: BoundJson {
            bound: b.bound,
            n: b.n,
            u: b.u.to_string(),
            v: b.v.to_string(),
            discriminant: b.discriminant.to_string(),
            beyond: beyond(report, opts),
        },
        casimir: casimir_known.then(|| casimir_strings(report, module)),
        vanishing: vanishing_note(report),
        validation: validation_json(&report.validation),
    }
}

pub fn render_json(report: &CohomologyReport, module: &ModuleSpec, gen_names: &[String], opts: &RenderOptions) -> String {
    let mut s = serde_json::to_string_pretty(&report_json(report, module, gen_names, opts)).expect("serializable");
    s.push('\n');
    s
}

fn width(s: &str) -> usize {
    s.chars().filter(|&c| c != '\u{304}').count()
}

fn pad(s: &str, w: usize) -> String {
    let mut out = s.to_string();
    out.extend(std::iter::repeat(' ').take(w.saturating_sub(width(s))));
    out
}

fn table(
    title: &str,
    report: &CohomologyReport,
    module: &ModuleSpec,
    gen_names: &[String],
    opts: &RenderOptions,
    reduced: bool,
) -> String {
    let header = ["Order".to_string(), "Basis".to_string(), title.to_string()];
    let mut lines: Vec<[String; 3]> = Vec::new();
    for d in shown_degrees(report, opts) {
        let classes: &[CohomologyClass] = if reduced {
            match &d.reduced {
                Some(r) => r,
                None => continue,
            }
        } else {
            &d.basic
        };
        let shown = displayed(gen_names, module, d.q, classes, reduced, opts.glyphs);
        if shown.is_empty() {
            lines.push([d.q.to_string(), "0".into(), "0".into()]);
            continue;
        }
        let group = shown.iter().map(|c| format!("Q{}", c.label)).collect::<Vec<_>>().join(" ⊕ ");
        let mut first = true;
        for c in &shown {
            let indent = " ".repeat(width(&c.label) + 2);
            for (r, (row, value)) in c.rows.iter().enumerate() {
                let entry = if row.is_empty() { value.clone() } else { format!("{row} ↦ {value}") };
                let text = if r == 0 { format!("{}: {entry}", c.label) } else { format!("{indent}{entry}") };
                let (order, last) = if first { (d.q.to_string(), group.clone()) } else { (String::new(), String::new()) };
                first = false;
                lines.push([order, text, last]);
            }
        }
    }
    let w: Vec<usize> = (0..3)
        .map(|i| lines.iter().map(|l| width(&l[i])).chain([width(&header[i])]).max().unwrap_or(0))
        .collect();
    let fmt_line = |l: &[String; 3]| {
        format!("{} | {} | {}", pad(&l[0], w[0]), pad(&l[1], w[1]), l[2]).trim_end().to_string()
    };
    let mut out = String::new();
    out.push_str(&fmt_line(&header));
    out.push('\n');
    out.push_str(&format!("{}-+-{}-+-{}\n", "-".repeat(w[0]), "-".repeat(w[1]), "-".repeat(w[2])));
    for l in &lines {
        out.push_str(&fmt_line(l));
        out.push('\n');
    }
    out
}

pub fn render_text(report: &CohomologyReport, module: &ModuleSpec, gen_names: &[String], opts: &RenderOptions) -> String {
    let pair = format!("{}, {}", report.algebra, report.module);
    let mut out = String::new();
    if opts.which.basic() {
        out.push_str(&format!("Basic cohomology of {} with coefficients in {}\n", report.algebra, report.module));
        out.push_str(&table(&format!("H^q({pair})"), report, module, gen_names, opts, false));
    }
    if opts.which.reduced() {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&format!("Reduced cohomology of {} with coefficients in {}\n", report.algebra, report.module));
        out.push_str(&table(&format!("H̃^q({pair})"), report, module, gen_names, opts, true));
    }
    out.push('\n');
    let b = &report.bound;
    if let Some(note) = vanishing_note(report) {
        out.push_str(&format!("Vanishing: {note}.\n"));
    }
    let mut bound_line = format!(
        "Bound: N = {} (n = {}, u = {}, v = {}, discriminant {})",
        b.bound, b.n, b.u, b.v, b.discriminant
    );
    if let Some(x) = beyond(report, opts) {
        bound_line.push_str(&format!("; basic cohomology at q = {} has dimension {}", x.degree, x.basic_dim));
    }
    out.push_str(&bound_line);
    out.push_str(".\n");
    if opts.which.reduced() {
        if report.degree(0).is_some_and(|d| d.reduced.is_some()) {
            let cas = casimir_strings(report, module);
            if cas.is_empty() {
                out.push_str("Casimir elements: none beyond zero.\n");
            } else {
                let list = cas.iter().map(|c| format!("∫{}", if c.contains(' ') { format!("({c})") } else { c.clone() }));
                out.push_str(&format!("Casimir elements: {}.\n", list.collect::<Vec<_>>().join(", ")));
            }
        }
        if report.module_is_adjoint {
            if let Some(h1) = report.degree(1).and_then(|d| d.reduced_dim()) {
                if h1 == 0 {
                    out.push_str("Derivations: every derivation is inner.\n");
                } else {
                    out.push_str(&format!("Derivations: outer derivations modulo inner ones form a space of dimension {h1}.\n"));
                }
            }
        }
    }
    out
}
