//! Oracles shared by the integration tests. These work on sparse
//! coefficient dictionaries so they do not go through the ansatz machinery.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lcacohom::algebra::{LcaSpec, ModuleSpec};
use lcacohom::calculus::differential;
use lcacohom::cli::parse_cochain;
use lcacohom::cochain::{ansatz, Cochain};
use lcacohom::cohomology::reduced_normal_form;
use lcacohom::exactpoly::{int, Monomial, Rational};
use lcacohom::linalg::QMatrix;
use lcacohom::presets::{self, PresetParams};

pub mod props;

pub type Key = (Vec<u32>, usize, Monomial);
pub type Sparse = BTreeMap<Key, Rational>;

pub fn sparse(f: &Cochain) -> Sparse {
    let mut out = Sparse::new();
    for (row, v) in f.rows() {
        for (k, p) in v.components().iter().enumerate() {
            for (m, c) in p.terms() {
                out.insert((row.counts().to_vec(), k, m.clone()), c.clone());
            }
        }
    }
    out
}

/// Rank of a family of sparse vectors.
pub fn rank(vectors: &[Sparse]) -> usize {
    let keys: BTreeSet<&Key> = vectors.iter().flat_map(|v| v.keys()).collect();
    let keys: Vec<&Key> = keys.into_iter().collect();
    if keys.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = vectors
        .iter()
        .map(|v| keys.iter().map(|k| v.get(*k).cloned().unwrap_or_else(|| int(0))).collect())
        .collect();
    QMatrix::from_rows(rows, keys.len()).rank()
}

pub fn preset(params: &PresetParams) -> (LcaSpec, ModuleSpec) {
    let alg = presets::algebra(params).unwrap();
    let module = presets::module(&alg, params).unwrap();
    (alg, module)
}

pub fn adjoint(name: &str) -> (LcaSpec, ModuleSpec) {
    preset(&PresetParams::new(name))
}

pub fn wb(b: i64) -> (LcaSpec, ModuleSpec) {
    preset(&PresetParams::wb(int(b)))
}

pub fn entered(alg: &LcaSpec, module: &ModuleSpec, text: &str) -> Cochain {
    parse_cochain(text, alg, module).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// Coboundaries `d g` for `g` of weight zero in degree `q - 1`.
fn basic_coboundaries(alg: &LcaSpec, module: &ModuleSpec, q: usize) -> Vec<Sparse> {
    if q == 0 {
        return Vec::new();
    }
    ansatz(alg, module, q - 1, &int(0))
        .basis()
        .iter()
        .map(|g| sparse(&differential(alg, module, g)))
        .collect()
}

/// Images of reduced coboundaries in the normal form; a few weights around
/// zero so nothing relevant is missed.
fn reduced_coboundaries(alg: &LcaSpec, module: &ModuleSpec, q: usize) -> Vec<Sparse> {
    if q == 0 {
        return Vec::new();
    }
    [int(-1), int(0), int(1)]
        .iter()
        .flat_map(|w| ansatz(alg, module, q - 1, w).basis().to_vec())
        .map(|g| sparse(&reduced_normal_form(module, &differential(alg, module, &g))))
        .collect()
}

#[derive(Debug)]
pub struct SpanVerdict {
    /// Every entered element is a cocycle.
    pub cocycles: bool,
    /// Every entered element lies in span(computed) + coboundaries.
    pub contained: bool,
    /// The entered elements are independent modulo coboundaries and as
    /// many as the computed dimension.
    pub basis: bool,
}

impl SpanVerdict {
    pub fn ok(&self) -> bool {
        self.cocycles && self.contained && self.basis
    }
}

fn span_verdict(computed: &[Sparse], entered: &[Sparse], bounds: &[Sparse], cocycles: bool) -> SpanVerdict {
    let base: Vec<Sparse> = bounds.iter().chain(computed).cloned().collect();
    let r = rank(&base);
    let contained = entered.iter().all(|e| {
        let mut with = base.clone();
        with.push(e.clone());
        rank(&with) == r
    });
    let rb = rank(bounds);
    let mut with_entered = bounds.to_vec();
    with_entered.extend(entered.iter().cloned());
    let basis = rank(&with_entered) == rb + entered.len() && entered.len() == computed.len();
    SpanVerdict {
        cocycles,
        contained,
        basis,
    }
}

pub fn basic_span(alg: &LcaSpec, module: &ModuleSpec, q: usize, computed: &[Cochain], entered: &[Cochain]) -> SpanVerdict {
    let cocycles = entered.iter().all(|f| f.degree() == q && differential(alg, module, f).is_zero());
    let computed: Vec<Sparse> = computed.iter().map(sparse).collect();
    let entered: Vec<Sparse> = entered.iter().map(sparse).collect();
    span_verdict(&computed, &entered, &basic_coboundaries(alg, module, q), cocycles)
}

/// For reduced classes: a cocycle means `d f` lies in the image of `∂`,
/// i.e. vanishes in the normal form.
pub fn reduced_span(alg: &LcaSpec, module: &ModuleSpec, q: usize, computed: &[Cochain], entered: &[Cochain]) -> SpanVerdict {
    let nf = |f: &Cochain| reduced_normal_form(module, f);
    let cocycles = entered
        .iter()
        .all(|f| f.degree() == q && nf(&differential(alg, module, f)).is_zero());
    let computed: Vec<Sparse> = computed.iter().map(|f| sparse(&nf(f))).collect();
    let entered: Vec<Sparse> = entered.iter().map(|f| sparse(&nf(f))).collect();
    span_verdict(&computed, &entered, &reduced_coboundaries(alg, module, q), cocycles)
}
