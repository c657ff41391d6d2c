//! The spec-file format.
//!
//! ```text
//! # '#' starts a comment
//! [algebra]
//! name = W(0)
//! generators = L:2, H:1        # name:weight, weights rational
//! virasoro = L
//!
//! [brackets]                   # A B C = coefficient of C in [A_λ B]
//! L L L = d + 2*x
//! L H H = d + x
//! H L H = x
//!
//! [module]
//! kind = adjoint               # adjoint | trivial | rank_one | explicit
//! ```
//!
//! `kind = rank_one` takes `delta`, `alpha` and `scalars = H:1, ...`
//! (the virasoro generator acts by `d + alpha + delta*x`, the listed ones by
//! their scalar, the rest by zero). `kind = explicit` takes `name`,
//! `generators` and optionally `partial_is_zero = true`, with entries
//! `A m n = poly` (coefficient of `n` in `A_λ m`) under `[actions]`.
//! Entries not listed are zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;
use thiserror::Error;

use super::polyparse::{parse_poly_at, ParseError};
use crate::algebra::{adjoint_module, trivial_module, AlgebraError, GeneratorInfo, LcaSpec, ModuleSpec};
use crate::exactpoly::rational::parse_rational;
use crate::exactpoly::{MultiPoly, Rational};
use crate::presets::{self, ModuleKind, PresetError, PresetParams, PresetRegistry};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{0}")]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Structure(#[from] AlgebraError),
    #[error(transparent)]
    Preset(#[from] PresetError),
}

/// One structure-table entry, by generator names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub left: String,
    pub right: String,
    pub target: String,
    pub poly: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSection {
    pub name: String,
    pub generators: Vec<GeneratorInfo>,
    pub virasoro: String,
    pub brackets: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleSection {
    Adjoint,
    Trivial,
    RankOne {
        delta: Rational,
        alpha: Rational,
        scalars: Vec<(String, Rational)>,
    },
    Explicit {
        name: String,
        generators: Vec<GeneratorInfo>,
        partial_is_zero: bool,
        actions: Vec<Entry>,
    },
}

/// A parsed spec file. Entries are kept in canonical order (by generator
/// index) with zero entries dropped, so equal inputs compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecDocument {
    pub algebra: AlgebraSection,
    pub module: ModuleSection,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

#[derive(Default)]
struct Sections<'a> {
    by_name: BTreeMap<String, (usize, Vec<Line<'a>>)>,
}

fn split_sections(input: &str) -> Result<Sections<'_>, ParseError> {
    let mut out = Sections::default();
    let mut current: Option<String> = None;
    for (i, raw) in input.lines().enumerate() {
        let no = i + 1;
        let raw = raw.split('#').next().unwrap_or("");
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ParseError::new(no, raw.len(), "expected `]`"))?
                .trim()
                .to_string();
            if !matches!(name.as_str(), "algebra" | "brackets" | "module" | "actions") {
                return Err(ParseError::new(no, 1, format!("unknown section `[{name}]`")));
            }
            if out.by_name.contains_key(&name) {
                return Err(ParseError::new(no, 1, format!("section `[{name}]` given twice")));
            }
            out.by_name.insert(name.clone(), (no, Vec::new()));
            current = Some(name);
            continue;
        }
        let Some(sec) = &current else {
            return Err(ParseError::new(no, 1, "content before the first section"));
        };
        out.by_name.get_mut(sec).expect("section").1.push(Line { no, text: raw });
    }
    Ok(out)
}

/// Column (1-based, in chars) where `part` starts inside `line`.
fn col_of(line: &str, part: &str) -> usize {
    let offset = part.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

struct KeyValues<'a> {
    section: &'static str,
    header: usize,
    map: BTreeMap<&'a str, (usize, &'a str, &'a str)>,
}

impl<'a> KeyValues<'a> {
    fn parse(section: &'static str, header: usize, lines: &[Line<'a>], allowed: &[&str]) -> Result<Self, ParseError> {
        let mut map = BTreeMap::new();
        for l in lines {
            let (k, v) = l
                .text
                .split_once('=')
                .ok_or_else(|| ParseError::new(l.no, 1, "expected `key = value`"))?;
            let key = k.trim();
            if !allowed.contains(&key) {
                return Err(ParseError::new(
                    l.no,
                    col_of(l.text, k.trim_start()),
                    format!("unknown key `{key}` in [{section}]"),
                ));
            }
            if map.insert(key, (l.no, l.text, v.trim())).is_some() {
                return Err(ParseError::new(l.no, 1, format!("key `{key}` given twice")));
            }
        }
        Ok(KeyValues { section, header, map })
    }

    fn get(&self, key: &str) -> Option<(usize, &'a str, &'a str)> {
        self.map.get(key).copied()
    }

    fn require(&self, key: &str) -> Result<(usize, &'a str, &'a str), ParseError> {
        self.get(key).ok_or_else(|| {
            ParseError::new(self.header, 1, format!("[{}] is missing `{key}`", self.section))
        })
    }
}

fn rational_value(no: usize, line: &str, v: &str) -> Result<Rational, ParseError> {
    parse_rational(v).ok_or_else(|| ParseError::new(no, col_of(line, v), format!("expected a rational number, found `{v}`")))
}

fn named_rationals(no: usize, line: &str, v: &str) -> Result<Vec<(String, Rational)>, ParseError> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|item| {
            let (n, w) = item
                .split_once(':')
                .ok_or_else(|| ParseError::new(no, col_of(line, item.trim_start()), "expected `name:value`"))?;
            let name = n.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(ParseError::new(no, col_of(line, n.trim_start()), format!("bad name `{name}`")));
            }
            Ok((name.to_string(), rational_value(no, line, w.trim())?))
        })
        .collect()
}

fn generator_list(no: usize, line: &str, v: &str) -> Result<Vec<GeneratorInfo>, ParseError> {
    let gens: Vec<GeneratorInfo> = named_rationals(no, line, v)?
        .into_iter()
        .map(|(n, w)| GeneratorInfo::new(n, w))
        .collect();
    for (i, g) in gens.iter().enumerate() {
        if gens[..i].iter().any(|h| h.name == g.name) {
            return Err(ParseError::new(no, col_of(line, v), format!("duplicate generator `{}`", g.name)));
        }
    }
    if gens.is_empty() {
        return Err(ParseError::new(no, col_of(line, v), "no generators given"));
    }
    Ok(gens)
}

fn index(gens: &[GeneratorInfo], name: &str) -> Option<usize> {
    gens.iter().position(|g| g.name == name)
}

/// Parses `A B C = poly` lines, resolving names against the given lists.
fn entries(
    lines: &[Line<'_>],
    left: &[GeneratorInfo],
    right: &[GeneratorInfo],
) -> Result<Vec<Entry>, ParseError> {
    let mut seen: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut out: Vec<((usize, usize, usize), Entry)> = Vec::new();
    for l in lines {
        let (lhs, rhs) = l
            .text
            .split_once('=')
            .ok_or_else(|| ParseError::new(l.no, 1, "expected `A B C = polynomial`"))?;
        let names: Vec<&str> = lhs.split_whitespace().collect();
        if names.len() != 3 {
            return Err(ParseError::new(l.no, 1, "expected three generator names before `=`"));
        }
        let lookup = |name: &str, list: &[GeneratorInfo]| {
            index(list, name).ok_or_else(|| {
                ParseError::new(l.no, col_of(l.text, &lhs[lhs.find(name).unwrap_or(0)..]), format!("unknown generator `{name}`"))
            })
        };
        let key = (lookup(names[0], left)?, lookup(names[1], right)?, lookup(names[2], right)?);
        if let Some(prev) = seen.insert(key, l.no) {
            return Err(ParseError::new(l.no, 1, format!("entry already given on line {prev}")));
        }
        let poly = parse_poly_at(rhs, 1, l.no, col_of(l.text, rhs))?;
        if poly.is_zero() {
            continue;
        }
        out.push((
            key,
            Entry {
                left: names[0].to_string(),
                right: names[1].to_string(),
                target: names[2].to_string(),
                poly,
            },
        ));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, e)| e).collect())
}

fn parse_bool(no: usize, line: &str, v: &str) -> Result<bool, ParseError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ParseError::new(no, col_of(line, v), format!("expected true or false, found `{v}`"))),
    }
}

pub fn parse_spec(input: &str) -> Result<SpecDocument, ParseError> {
    let sections = split_sections(input)?;
    let section = |name: &str| sections.by_name.get(name);
    let (alg_header, alg_lines) = section("algebra").ok_or_else(|| ParseError::new(1, 1, "missing [algebra] section"))?;
    let kv = KeyValues::parse("algebra", *alg_header, alg_lines, &["name", "generators", "virasoro"])?;
    let (_, _, name) = kv.require("name")?;
    let (gno, gline, gval) = kv.require("generators")?;
    let generators = generator_list(gno, gline, gval)?;
    let (vno, vline, vir) = kv.require("virasoro")?;
    if index(&generators, vir).is_none() {
        return Err(ParseError::new(vno, col_of(vline, vir), format!("unknown generator `{vir}`")));
    }
    let brackets = match section("brackets") {
        Some((_, lines)) => entries(lines, &generators, &generators)?,
        None => Vec::new(),
    };

    let module = match section("module") {
        None => ModuleSection::Adjoint,
        Some((header, lines)) => {
            let kv = KeyValues::parse(
                "module",
                *header,
                lines,
                &["kind", "name", "generators", "partial_is_zero", "delta", "alpha", "scalars"],
            )?;
            let (kno, kline, kind) = kv.require("kind")?;
            let allowed: &[&str] = match kind {
                "adjoint" | "trivial" => &["kind"],
                "rank_one" => &["kind", "delta", "alpha", "scalars"],
                "explicit" => &["kind", "name", "generators", "partial_is_zero"],
                _ => {
                    return Err(ParseError::new(
                        kno,
                        col_of(kline, kind),
                        format!("unknown module kind `{kind}` (adjoint, trivial, rank_one, explicit)"),
                    ))
                }
            };
            if let Some((&key, &(no, _, _))) = kv.map.iter().find(|(k, _)| !allowed.contains(k)) {
                return Err(ParseError::new(no, 1, format!("key `{key}` does not apply to kind = {kind}")));
            }
            match kind {
                "adjoint" => ModuleSection::Adjoint,
                "trivial" => ModuleSection::Trivial,
                "rank_one" => {
                    let (dno, dline, d) = kv.require("delta")?;
                    let delta = rational_value(dno, dline, d)?;
                    let alpha = match kv.get("alpha") {
                        Some((no, line, a)) => rational_value(no, line, a)?,
                        None => Rational::zero(),
                    };
                    let mut scalars = match kv.get("scalars") {
                        Some((no, line, s)) => {
                            let list = named_rationals(no, line, s)?;
                            let mut seen = Vec::new();
                            for (n, _) in &list {
                                let Some(i) = index(&generators, n) else {
                                    return Err(ParseError::new(no, col_of(line, s), format!("unknown generator `{n}`")));
                                };
                                if n == vir {
                                    return Err(ParseError::new(no, col_of(line, s), "the virasoro generator's action is set by delta and alpha"));
                                }
                                if seen.contains(&i) {
                                    return Err(ParseError::new(no, col_of(line, s), format!("`{n}` listed twice")));
                                }
                                seen.push(i);
                            }
                            list
                        }
                        None => Vec::new(),
                    };
                    scalars.retain(|(_, c)| !c.is_zero());
                    scalars.sort_by_key(|(n, _)| index(&generators, n));
                    ModuleSection::RankOne { delta, alpha, scalars }
                }
                _ => {
                    let (_, _, mname) = kv.require("name")?;
                    let (gno, gline, gval) = kv.require("generators")?;
                    let mgens = generator_list(gno, gline, gval)?;
                    let partial_is_zero = match kv.get("partial_is_zero") {
                        Some((no, line, v)) => parse_bool(no, line, v)?,
                        None => false,
                    };
                    let actions = match section("actions") {
                        Some((_, lines)) => entries(lines, &generators, &mgens)?,
                        None => Vec::new(),
                    };
                    ModuleSection::Explicit {
                        name: mname.to_string(),
                        generators: mgens,
                        partial_is_zero,
                        actions,
                    }
                }
            }
        }
    };
    if section("actions").is_some() && !matches!(module, ModuleSection::Explicit { .. }) {
        let (h, _) = section("actions").expect("present");
        return Err(ParseError::new(*h, 1, "[actions] requires kind = explicit"));
    }
    Ok(SpecDocument {
        algebra: AlgebraSection {
            name: name.to_string(),
            generators,
            virasoro: vir.to_string(),
            brackets,
        },
        module,
    })
}

fn table(entries: &[Entry], left: &[GeneratorInfo], right: &[GeneratorInfo]) -> Vec<Vec<Vec<MultiPoly>>> {
    let mut t = vec![vec![vec![MultiPoly::zero(1); right.len()]; right.len()]; left.len()];
    for e in entries {
        let i = index(left, &e.left).expect("resolved at parse time");
        let j = index(right, &e.right).expect("resolved at parse time");
        let k = index(right, &e.target).expect("resolved at parse time");
        t[i][j][k] = e.poly.clone();
    }
    t
}

impl SpecDocument {
    pub fn to_specs(&self) -> Result<(LcaSpec, ModuleSpec), SpecError> {
        let a = &self.algebra;
        let alg = LcaSpec::new(
            a.name.clone(),
            a.generators.clone(),
            table(&a.brackets, &a.generators, &a.generators),
            index(&a.generators, &a.virasoro).expect("resolved at parse time"),
        )?;
        let module = match &self.module {
            ModuleSection::Adjoint => adjoint_module(&alg),
            ModuleSection::Trivial => trivial_module(&alg),
            ModuleSection::RankOne { delta, alpha, scalars } => {
                let mut s = vec![Rational::zero(); alg.rank()];
                for (n, c) in scalars {
                    s[alg.index_of(n).expect("resolved")] = c.clone();
                }
                presets::rank_one_module(&alg, delta, alpha, &s)?
            }
            ModuleSection::Explicit {
                name,
                generators,
                partial_is_zero,
                actions,
            } => ModuleSpec::new(
                name.clone(),
                &alg,
                generators.clone(),
                table(actions, &a.generators, generators),
                *partial_is_zero,
            )?,
        };
        Ok((alg, module))
    }

    /// The document for a preset, with the module written by kind rather
    /// than expanded.
    pub fn from_preset(registry: &PresetRegistry, params: &PresetParams) -> Result<SpecDocument, SpecError> {
        let alg = registry.algebra(params)?;
        let module = match &params.module {
            ModuleKind::Adjoint => ModuleSection::Adjoint,
            ModuleKind::Trivial => ModuleSection::Trivial,
            ModuleKind::RankOne { delta, alpha, beta } => {
                let s = registry.get(&params.name)?.rank_one_scalars(&alg, params, beta)?;
                let scalars = s
                    .iter()
                    .enumerate()
                    .filter(|(i, c)| *i != alg.virasoro_index() && !c.is_zero())
                    .map(|(i, c)| (alg.generator_name(i).to_string(), c.clone()))
                    .collect();
                ModuleSection::RankOne {
                    delta: delta.clone(),
                    alpha: alpha.clone(),
                    scalars,
                }
            }
        };
        Ok(SpecDocument {
            algebra: AlgebraSection {
                name: alg.name().to_string(),
                generators: alg.generators().to_vec(),
                virasoro: alg.generator_name(alg.virasoro_index()).to_string(),
                brackets: table_entries(alg.bracket_table(), alg.generators(), alg.generators()),
            },
            module,
        })
    }
}

fn table_entries(t: &[Vec<Vec<MultiPoly>>], left: &[GeneratorInfo], right: &[GeneratorInfo]) -> Vec<Entry> {
    let mut out = Vec::new();
    for (i, row) in t.iter().enumerate() {
        for (j, col) in row.iter().enumerate() {
            for (k, p) in col.iter().enumerate() {
                if !p.is_zero() {
                    out.push(Entry {
                        left: left[i].name.clone(),
                        right: right[j].name.clone(),
                        target: right[k].name.clone(),
                        poly: p.clone(),
                    });
                }
            }
        }
    }
    out
}

fn join_named<'a>(items: impl Iterator<Item = (&'a str, &'a Rational)>) -> String {
    items.map(|(n, w)| format!("{n}:{w}")).collect::<Vec<_>>().join(", ")
}

fn write_entries(out: &mut String, entries: &[Entry]) {
    let width = entries
        .iter()
        .map(|e| e.left.len() + e.right.len() + e.target.len() + 2)
        .max()
        .unwrap_or(0);
    for e in entries {
        let lhs = format!("{} {} {}", e.left, e.right, e.target);
        let _ = writeln!(out, "{lhs:<width$} = {}", e.poly);
    }
}

pub fn render_spec(doc: &SpecDocument) -> String {
    let a = &doc.algebra;
    let mut out = String::new();
    let _ = writeln!(out, "[algebra]");
    let _ = writeln!(out, "name = {}", a.name);
    let _ = writeln!(
        out,
        "generators = {}",
        join_named(a.generators.iter().map(|g| (g.name.as_str(), &g.weight)))
    );
    let _ = writeln!(out, "virasoro = {}", a.virasoro);
    out.push('\n');
    let _ = writeln!(out, "[brackets]");
    write_entries(&mut out, &a.brackets);
    out.push('\n');
    let _ = writeln!(out, "[module]");
    match &doc.module {
        ModuleSection::Adjoint => {
            let _ = writeln!(out, "kind = adjoint");
        }
        ModuleSection::Trivial => {
            let _ = writeln!(out, "kind = trivial");
        }
        ModuleSection::RankOne { delta, alpha, scalars } => {
            let _ = writeln!(out, "kind = rank_one");
            let _ = writeln!(out, "delta = {delta}");
            let _ = writeln!(out, "alpha = {alpha}");
            if !scalars.is_empty() {
                let _ = writeln!(out, "scalars = {}", join_named(scalars.iter().map(|(n, c)| (n.as_str(), c))));
            }
        }
        ModuleSection::Explicit {
            name,
            generators,
            partial_is_zero,
            actions,
        } => {
            let _ = writeln!(out, "kind = explicit");
            let _ = writeln!(out, "name = {name}");
            let _ = writeln!(
                out,
                "generators = {}",
                join_named(generators.iter().map(|g| (g.name.as_str(), &g.weight)))
            );
            if *partial_is_zero {
                let _ = writeln!(out, "partial_is_zero = true");
            }
            out.push('\n');
            let _ = writeln!(out, "[actions]");
            write_entries(&mut out, actions);
        }
    }
    out
}
