//! q-cochains on canonical generator rows, their evaluation on arbitrary
//! arguments, the ∂-structure, weight bookkeeping and the weight-homogeneous
//! ansatz spaces.
//!
//! A row `(s_1, ..., s_n)` stands for `a_1^{⊗s_1} ⊗ ... ⊗ a_n^{⊗s_n}` with
//! slot `i` carrying `λ_i`. By skew-symmetry the values on rows determine the
//! cochain, and inside a block of equal generators the value is
//! antisymmetric in the block's λ's.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{LcaSpec, ModuleSpec};
use crate::exactpoly::rational::{as_nonneg_integer, common_denominator, content};
use crate::exactpoly::{int, Monomial, MultiPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowIndex {
    counts: Vec<u32>,
}

// Reversed so that maps iterate in the order of `enumerate_rows`.
impl Ord for RowIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        other.counts.cmp(&self.counts)
    }
}

impl PartialOrd for RowIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl RowIndex {
    pub fn new(counts: Vec<u32>) -> Self {
        RowIndex { counts }
    }

    pub fn from_generators(n: usize, gens: &[usize]) -> Self {
        let mut counts = vec![0; n];
        for &g in gens {
            counts[g] += 1;
        }
        RowIndex { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn degree(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    /// Generator index of each slot, ascending.
    pub fn generators(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(g, &c)| std::iter::repeat(g).take(c as usize))
            .collect()
    }

    /// Slot ranges of the blocks with at least two equal generators.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        let mut out = Vec::new();
        for &c in &self.counts {
            let c = c as usize;
            if c >= 2 {
                out.push(start..start + c);
            }
            start += c;
        }
        out
    }

    /// `Σ s_i Δ(a_i)`
    pub fn weight_sum(&self, alg: &LcaSpec) -> Rational {
        self.counts
            .iter()
            .enumerate()
            .map(|(g, &c)| alg.weight(g) * int(c as i64))
            .fold(Rational::zero(), |a, b| a + b)
    }
}

/// All rows of degree `q` over `n` generators, descending lexicographically.
pub fn enumerate_rows(n: usize, q: usize) -> Vec<RowIndex> {
    fn go(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<RowIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(RowIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for c in (0..=left).rev() {
            prefix.push(c);
            go(n, left - c, prefix, out);
            prefix.pop();
        }
    }
    assert!(n >= 1);
    let mut out = Vec::new();
    go(n, q as u32, &mut Vec::new(), &mut out);
    out
}

/// `Σ_j p_j(∂, λ_1, ..., λ_q) m_j`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleValue {
    components: Vec<MultiPoly>,
}

impl ModuleValue {
    pub fn zero(rank: usize, arity: usize) -> Self {
        ModuleValue {
            components: vec![MultiPoly::zero(arity); rank],
        }
    }

    pub fn new(components: Vec<MultiPoly>) -> Self {
        assert!(!components.is_empty());
        let arity = components[0].arity();
        assert!(components.iter().all(|p| p.arity() == arity));
        ModuleValue { components }
    }

    /// `p · m_k`
    pub fn single(rank: usize, k: usize, p: MultiPoly) -> Self {
        let mut v = ModuleValue::zero(rank, p.arity());
        v.components[k] = p;
        v
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn arity(&self) -> usize {
        self.components[0].arity()
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &MultiPoly {
        &self.components[k]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|p| p.is_zero())
    }

    pub fn add_scaled(&mut self, other: &ModuleValue, c: &Rational) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.add_scaled(b, c);
        }
    }

    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> ModuleValue {
        ModuleValue {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> ModuleValue {
        self.map(|p| p.scale(c))
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> ModuleValue {
        self.map(|c| c * p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightTag {
    Zero,
    Pure(Rational),
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    n: usize,
    rank: usize,
    q: usize,
    rows: BTreeMap<RowIndex, ModuleValue>,
}

impl Cochain {
    pub fn zero(n: usize, rank: usize, q: usize) -> Self {
        Cochain {
            n,
            rank,
            q,
            rows: BTreeMap::new(),
        }
    }

    pub fn zero_for(alg: &LcaSpec, module: &ModuleSpec, q: usize) -> Self {
        Self::zero(alg.rank(), module.rank(), q)
    }

    /// The 0-cochain given by a module element.
    pub fn from_element(n: usize, v: ModuleValue) -> Self {
        assert_eq!(v.arity(), 0);
        let mut c = Self::zero(n, v.rank(), 0);
        c.set(RowIndex::new(vec![0; n]), v);
        c
    }

    pub fn degree(&self) -> usize {
        self.q
    }

    pub fn algebra_rank(&self) -> usize {
        self.n
    }

    pub fn module_rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Stores a row value; zero values are dropped.
    pub fn set(&mut self, row: RowIndex, v: ModuleValue) {
        assert_eq!(row.degree(), self.q);
        assert_eq!(row.counts.len(), self.n);
        assert_eq!(v.arity(), self.q);
        assert_eq!(v.rank(), self.rank);
        if v.is_zero() {
            self.rows.remove(&row);
        } else {
            self.rows.insert(row, v);
        }
    }

    pub fn get(&self, row: &RowIndex) -> Option<&ModuleValue> {
        self.rows.get(row)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&RowIndex, &ModuleValue)> {
        self.rows.iter()
    }

    pub fn add_scaled(&mut self, other: &Cochain, c: &Rational) {
        assert_eq!((self.n, self.rank, self.q), (other.n, other.rank, other.q));
        if c.is_zero() {
            return;
        }
        for (row, v) in &other.rows {
            let entry = self
                .rows
                .entry(row.clone())
                .or_insert_with(|| ModuleValue::zero(other.rank, other.q));
            entry.add_scaled(v, c);
            if entry.is_zero() {
                self.rows.remove(row);
            }
        }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        let mut out = Cochain::zero(self.n, self.rank, self.q);
        if !c.is_zero() {
            for (row, v) in &self.rows {
                out.rows.insert(row.clone(), v.scale(c));
            }
        }
        out
    }

    /// Applies `f` to every component polynomial, dropping rows that vanish.
    pub fn map_values(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Cochain {
        let mut out = Cochain::zero(self.n, self.rank, self.q);
        for (row, v) in &self.rows {
            out.set(row.clone(), v.map(&f));
        }
        out
    }

    /// Σ c_i f_i
    pub fn combination<'a>(template: &Cochain, terms: impl IntoIterator<Item = (&'a Rational, &'a Cochain)>) -> Cochain {
        let mut out = Cochain::zero(template.n, template.rank, template.q);
        for (c, f) in terms {
            out.add_scaled(f, c);
        }
        out
    }

    /// Values on `args[p] = (generator, ∂-power)` with `λ`-slot `p` bound to
    /// `vars[p]`, a polynomial of arity `target`. Arguments are sorted
    /// into the canonical row with the permutation sign; `∂^e a` contributes
    /// `(-var)^e`.
    pub fn evaluate(&self, args: &[(usize, u32)], vars: &[MultiPoly], target: usize) -> ModuleValue {
        assert_eq!(args.len(), self.q);
        assert_eq!(vars.len(), self.q);
        assert!(vars.iter().all(|v| v.arity() == target));
        let mut order: Vec<usize> = (0..self.q).collect();
        order.sort_by_key(|&p| args[p].0);
        let gens: Vec<usize> = order.iter().map(|&p| args[p].0).collect();
        let row = RowIndex::from_generators(self.n, &gens);
        let Some(value) = self.rows.get(&row) else {
            return ModuleValue::zero(self.rank, target);
        };
        let mut factor = MultiPoly::constant(target, int(permutation_sign(&order)));
        for (p, &(_, pow)) in args.iter().enumerate() {
            if pow > 0 {
                factor = &factor * &(-&vars[p]).pow(pow);
            }
        }
        let images: Vec<MultiPoly> = order.iter().map(|&p| vars[p].clone()).collect();
        let simple: Option<Vec<usize>> = images.iter().map(single_variable).collect();
        value.map(|c| {
            let moved = match &simple {
                Some(map) => c.relabel(map, target),
                None => c.compose(&MultiPoly::partial(target), &images),
            };
            &moved * &factor
        })
    }

    /// `(∂f) = (∂ + Σλ_i) f`, or `(Σλ_i) f` when `∂` acts by zero.
    pub fn apply_partial(&self, module: &ModuleSpec) -> Cochain {
        let mut factor = MultiPoly::lambda_sum(self.q);
        if !module.partial_is_zero() {
            factor = &factor + &MultiPoly::partial(self.q);
        }
        self.map_values(|p| p * &factor)
    }

    /// `r = (monomial degree + Δ(m_j)) - Σ s_iΔ(a_i) + q` for each term.
    fn term_weight(module: &ModuleSpec, row_weight: &Rational, q: usize, m: &Monomial, j: usize) -> Rational {
        int(m.total_degree() as i64) + module.weight(j) - row_weight + int(q as i64)
    }

    pub fn weight_decompose(&self, alg: &LcaSpec, module: &ModuleSpec) -> BTreeMap<Rational, Cochain> {
        let mut parts: BTreeMap<Rational, BTreeMap<RowIndex, ModuleValue>> = BTreeMap::new();
        for (row, v) in &self.rows {
            let rw = row.weight_sum(alg);
            for (j, p) in v.components.iter().enumerate() {
                for (m, c) in p.terms() {
                    let r = Self::term_weight(module, &rw, self.q, m, j);
                    let value = parts
                        .entry(r)
                        .or_default()
                        .entry(row.clone())
                        .or_insert_with(|| ModuleValue::zero(self.rank, self.q));
                    value.components[j].add_term(m.clone(), c.clone());
                }
            }
        }
        parts
            .into_iter()
            .map(|(r, rows)| {
                let mut f = Cochain::zero(self.n, self.rank, self.q);
                for (row, v) in rows {
                    f.set(row, v);
                }
                (r, f)
            })
            .collect()
    }

    pub fn weight(&self, alg: &LcaSpec, module: &ModuleSpec) -> WeightTag {
        let parts = self.weight_decompose(alg, module);
        let mut keys = parts.into_keys();
        match (keys.next(), keys.next()) {
            (None, _) => WeightTag::Zero,
            (Some(r), None) => WeightTag::Pure(r),
            _ => WeightTag::Mixed,
        }
    }

    /// `Ẽf = Σ_r r f^{(r)}`
    pub fn energy_apply(&self, alg: &LcaSpec, module: &ModuleSpec) -> Cochain {
        let mut out = Cochain::zero(self.n, self.rank, self.q);
        for (r, part) in self.weight_decompose(alg, module) {
            out.add_scaled(&part, &r);
        }
        out
    }

    /// Transpositions of λ-slots inside each block negate the value.
    pub fn is_block_antisymmetric(&self) -> bool {
        self.rows.iter().all(|(row, v)| {
            row.blocks().into_iter().all(|b| {
                (b.start..b.end - 1).all(|u| {
                    let mut perm: Vec<usize> = (0..self.q).collect();
                    perm.swap(u, u + 1);
                    v.components
                        .iter()
                        .all(|p| p.permute_lambdas(&perm).expect("permutation") == -p)
                })
            })
        })
    }

    /// Each block value vanishes on `λ_u = λ_v`, i.e. is divisible by the
    /// block Vandermonde.
    pub fn is_vandermonde_divisible(&self) -> bool {
        self.rows.iter().all(|(row, v)| {
            row.blocks().into_iter().all(|b| {
                b.clone().all(|u| {
                    (u + 1..b.end).all(|w| {
                        let lam_u = MultiPoly::lambda(self.q, u);
                        v.components
                            .iter()
                            .all(|p| p.substitute_lambda(w, &lam_u).expect("slot").is_zero())
                    })
                })
            })
        })
    }

    /// Rescaled to primitive integer coefficients with a positive leading
    /// coefficient (first row, first component, largest monomial).
    pub fn normalized(&self) -> Cochain {
        let coeffs: Vec<&Rational> = self
            .rows
            .values()
            .flat_map(|v| v.components.iter())
            .flat_map(|p| p.terms().map(|(_, c)| c))
            .collect();
        if coeffs.is_empty() {
            return self.clone();
        }
        let den = common_denominator(coeffs.iter().copied());
        let num = content(coeffs.iter().copied());
        let mut scale = Rational::new(den, num);
        let leading = self
            .rows
            .values()
            .flat_map(|v| v.components.iter())
            .find_map(|p| p.leading().map(|(_, c)| c.clone()))
            .expect("nonzero");
        if leading.is_negative() {
            scale = -scale;
        }
        self.scale(&scale)
    }
}

fn single_variable(p: &MultiPoly) -> Option<usize> {
    if p.len() != 1 {
        return None;
    }
    let (m, c) = p.terms().next()?;
    if !c.is_one() || m.partial_exp() != 0 || m.total_degree() != 1 {
        return None;
    }
    m.lambda_exps().iter().position(|&e| e == 1)
}

pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// One coordinate of an ansatz space: the coefficient of `monomial` in
/// component `component` of row `row`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnsatzKey {
    pub row: RowIndex,
    pub component: usize,
    pub monomial: Monomial,
}

/// The cochains of degree `q` and pure weight `w`. Each basis element is
/// `∂^j · Π_blocks det(λ_u^{e_v}) · m_k` on a single row, and its coordinate
/// in a cochain is the coefficient of the diagonal monomial of the
/// determinants (exponents strictly decreasing inside each block).
#[derive(Debug, Clone)]
pub struct AnsatzSpace {
    q: usize,
    weight: Rational,
    template: Cochain,
    keys: Vec<AnsatzKey>,
    index: HashMap<AnsatzKey, usize>,
    basis: Vec<Cochain>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cochain does not lie in the degree-{q} weight-{weight} ansatz space")]
pub struct NotInSpace {
    pub q: usize,
    pub weight: Rational,
}

impl AnsatzSpace {
    pub fn degree(&self) -> usize {
        self.q
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Cochain] {
        &self.basis
    }

    pub fn keys(&self) -> &[AnsatzKey] {
        &self.keys
    }

    pub fn zero(&self) -> Cochain {
        self.template.clone()
    }

    /// Coordinates without checking membership.
    pub fn coordinates_unchecked(&self, f: &Cochain) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (i, key) in self.keys.iter().enumerate() {
            if let Some(v) = f.get(&key.row) {
                out[i] = v.component(key.component).coefficient(&key.monomial);
            }
        }
        out
    }

    /// Coordinates of `f`, verified by reconstructing `f` from them.
    pub fn coordinates(&self, f: &Cochain) -> Result<Vec<Rational>, NotInSpace> {
        let coords = self.coordinates_unchecked(f);
        if self.combine(&coords) != *f {
            return Err(NotInSpace {
                q: self.q,
                weight: self.weight.clone(),
            });
        }
        Ok(coords)
    }

    pub fn combine(&self, coords: &[Rational]) -> Cochain {
        assert_eq!(coords.len(), self.dim());
        Cochain::combination(&self.template, coords.iter().zip(&self.basis).filter(|(c, _)| !c.is_zero()))
    }

    pub fn key_index(&self, key: &AnsatzKey) -> Option<usize> {
        self.index.get(key).copied()
    }
}

/// Strictly decreasing sequences of `len` nonnegative integers summing to `total`.
fn decreasing_sequences(len: usize, total: u32) -> Vec<Vec<u32>> {
    fn go(len: usize, total: u32, below: Option<u32>, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if len == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        // the remaining len-1 entries need at least (len-1)(len-2)/2
        let rest_min = ((len - 1) * len.saturating_sub(2) / 2) as u32;
        let hi = below.map_or(total, |b| b.saturating_sub(1).min(total));
        if below == Some(0) {
            return;
        }
        for e in (0..=hi).rev() {
            if e < (len - 1) as u32 || total - e < rest_min {
                continue;
            }
            prefix.push(e);
            go(len - 1, total - e, Some(e), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(len, total, None, &mut Vec::new(), &mut out);
    out
}

/// All ways of writing `total` as a sum over blocks of strictly decreasing
/// exponent sequences, one per block size.
fn block_patterns(sizes: &[usize], total: u32) -> Vec<Vec<Vec<u32>>> {
    if sizes.is_empty() {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let size = sizes[0];
    let min_here = (size * size.saturating_sub(1) / 2) as u32;
    let min_rest: u32 = sizes[1..].iter().map(|&s| (s * s.saturating_sub(1) / 2) as u32).sum();
    let mut out = Vec::new();
    if total < min_here + min_rest {
        return out;
    }
    for here in (min_here..=total - min_rest).rev() {
        for seq in decreasing_sequences(size, here) {
            for rest in block_patterns(&sizes[1..], total - here) {
                let mut v = vec![seq.clone()];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out
}

/// `det(y_u^{e_v})` over the given λ-slots.
fn alternant(arity: usize, slots: &[usize], exps: &[u32]) -> MultiPoly {
    let mut out = MultiPoly::zero(arity);
    let s = slots.len();
    let mut perm: Vec<usize> = (0..s).collect();
    loop {
        let mut lam = vec![0u32; arity];
        for (u, &slot) in slots.iter().enumerate() {
            lam[slot] = exps[perm[u]];
        }
        out.add_term(Monomial::new(0, &lam), int(permutation_sign(&perm)));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// The ansatz space of degree `q` and weight `w`.
pub fn ansatz(alg: &LcaSpec, module: &ModuleSpec, q: usize, w: &Rational) -> AnsatzSpace {
    let n = alg.rank();
    let l = module.rank();
    let rows = enumerate_rows(n, q);
    let per_row: Vec<Vec<(AnsatzKey, Cochain)>> = rows
        .par_iter()
        .map(|row| {
            let mut out = Vec::new();
            let target = w + row.weight_sum(alg) - int(q as i64);
            let blocks: Vec<(usize, usize)> = {
                let mut start = 0;
                row.counts
                    .iter()
                    .map(|&c| {
                        let b = (start, c as usize);
                        start += c as usize;
                        b
                    })
                    .filter(|&(_, c)| c > 0)
                    .collect()
            };
            let sizes: Vec<usize> = blocks.iter().map(|&(_, c)| c).collect();
            for k in 0..l {
                let Some(degree) = as_nonneg_integer(&(&target - module.weight(k))) else {
                    continue;
                };
                let max_j = if module.partial_is_zero() { 0 } else { degree };
                for j in 0..=max_j {
                    for pattern in block_patterns(&sizes, degree - j) {
                        let mut value = MultiPoly::term(Monomial::new(j, &vec![0; q]), Rational::one());
                        let mut lam = vec![0u32; q];
                        for (&(start, size), exps) in blocks.iter().zip(&pattern) {
                            let slots: Vec<usize> = (start..start + size).collect();
                            value = &value * &alternant(q, &slots, exps);
                            for (u, &e) in exps.iter().enumerate() {
                                lam[start + u] = e;
                            }
                        }
                        let mut f = Cochain::zero(n, l, q);
                        f.set(row.clone(), ModuleValue::single(l, k, value));
                        let key = AnsatzKey {
                            row: row.clone(),
                            component: k,
                            monomial: Monomial::new(j, &lam),
                        };
                        out.push((key, f));
                    }
                }
            }
            out
        })
        .collect();
    let mut keys = Vec::new();
    let mut basis = Vec::new();
    for (key, f) in per_row.into_iter().flatten() {
        keys.push(key);
        basis.push(f);
    }
    let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    AnsatzSpace {
        q,
        weight: w.clone(),
        template: Cochain::zero(n, l, q),
        keys,
        index,
        basis,
    }
}

pub fn ansatz_weight_zero(alg: &LcaSpec, module: &ModuleSpec, q: usize) -> AnsatzSpace {
    ansatz(alg, module, q, &Rational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::adjoint_module;
    use crate::exactpoly::rat;
    use crate::presets::{self, PresetParams};

    fn w0() -> (LcaSpec, ModuleSpec) {
        let alg = presets::algebra(&PresetParams::wb(int(0))).unwrap();
        let m = adjoint_module(&alg);
        (alg, m)
    }

    fn x(arity: usize, i: usize) -> MultiPoly {
        MultiPoly::lambda(arity, i)
    }

    #[test]
    fn rows_are_enumerated_in_order() {
        let rows = enumerate_rows(2, 2);
        let counts: Vec<&[u32]> = rows.iter().map(|r| r.counts()).collect();
        assert_eq!(counts, vec![&[2, 0][..], &[1, 1], &[0, 2]]);
        assert_eq!(enumerate_rows(2, 0).len(), 1);
        assert_eq!(enumerate_rows(3, 2).len(), 6);
        let mut sorted = rows.clone();
        sorted.sort();
        assert_eq!(sorted, rows);
    }

    #[test]
    fn decreasing_sequences_cover_partitions() {
        assert_eq!(decreasing_sequences(2, 3), vec![vec![3, 0], vec![2, 1]]);
        assert_eq!(decreasing_sequences(3, 3), vec![vec![2, 1, 0]]);
        assert!(decreasing_sequences(3, 2).is_empty());
        assert_eq!(decreasing_sequences(1, 4), vec![vec![4]]);
        assert_eq!(decreasing_sequences(0, 0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn ansatz_rows_for_w0_degree_two() {
        let (alg, m) = w0();
        let a = ansatz_weight_zero(&alg, &m, 2);
        let ll = RowIndex::new(vec![2, 0]);
        let on_ll: Vec<&Cochain> = a.basis().iter().filter(|f| f.get(&ll).is_some()).collect();
        assert_eq!(on_ll.len(), 1);
        let v = on_ll[0].get(&ll).unwrap();
        assert!(v.component(0).is_zero());
        assert_eq!(*v.component(1), &x(2, 0) - &x(2, 1));
        let hh = RowIndex::new(vec![0, 2]);
        assert!(a.basis().iter().all(|f| f.get(&hh).is_none()));
        for f in a.basis() {
            assert!(f.is_block_antisymmetric());
            assert!(f.is_vandermonde_divisible());
            assert_eq!(f.weight(&alg, &m), WeightTag::Pure(int(0)));
        }
    }

    #[test]
    fn degree_zero_and_one_ansatz() {
        let (alg, m) = w0();
        // ∂^j m_k with j + Δ(m_k) = 0: none, weights are 2 and 1
        assert_eq!(ansatz_weight_zero(&alg, &m, 0).dim(), 0);
        let a1 = ansatz_weight_zero(&alg, &m, 1);
        assert_eq!(a1.dim(), 1);
        let a = ansatz(&alg, &m, 0, &int(1));
        assert_eq!(a.dim(), 1);
        assert_eq!(a.basis()[0].get(&RowIndex::new(vec![0, 0])).unwrap().component(1), &MultiPoly::one(0));
    }

    #[test]
    fn evaluate_signs_and_partials() {
        let (alg, m) = w0();
        let mut f22 = Cochain::zero_for(&alg, &m, 2);
        f22.set(
            RowIndex::new(vec![2, 0]),
            ModuleValue::single(2, 1, &x(2, 0) - &x(2, 1)),
        );
        let swapped = f22.evaluate(&[(0, 0), (0, 0)], &[x(2, 1), x(2, 0)], 2);
        assert_eq!(*swapped.component(1), &x(2, 1) - &x(2, 0));

        let mut f21 = Cochain::zero_for(&alg, &m, 2);
        f21.set(RowIndex::new(vec![1, 1]), ModuleValue::single(2, 1, MultiPoly::one(2)));
        let v = f21.evaluate(&[(1, 0), (0, 0)], &[x(2, 0), x(2, 1)], 2);
        assert_eq!(*v.component(1), -MultiPoly::one(2));
        let v = f21.evaluate(&[(0, 1), (1, 0)], &[x(2, 0), x(2, 1)], 2);
        assert_eq!(*v.component(1), -x(2, 0));
    }

    #[test]
    fn partial_and_weights() {
        let (alg, m) = w0();
        let mut f11 = Cochain::zero_for(&alg, &m, 1);
        f11.set(RowIndex::new(vec![1, 0]), ModuleValue::single(2, 1, MultiPoly::one(1)));
        assert_eq!(f11.weight(&alg, &m), WeightTag::Pure(int(0)));
        assert!(f11.energy_apply(&alg, &m).is_zero());
        let df = f11.apply_partial(&m);
        let v = df.get(&RowIndex::new(vec![1, 0])).unwrap();
        assert_eq!(*v.component(1), &MultiPoly::partial(1) + &x(1, 0));
        assert_eq!(df.weight(&alg, &m), WeightTag::Pure(int(1)));
        assert_eq!(df.energy_apply(&alg, &m), df);

        let mixed = f11.add(&df.sub(&f11.map_values(|p| p * &x(1, 0))));
        assert_eq!(mixed.weight(&alg, &m), WeightTag::Mixed);
        let parts = mixed.weight_decompose(&alg, &m);
        assert_eq!(parts.keys().cloned().collect::<Vec<_>>(), vec![int(0), int(1)]);
        let total = parts.values().fold(Cochain::zero_for(&alg, &m, 1), |a, b| a.add(b));
        assert_eq!(total, mixed);

        let h = Cochain::from_element(2, ModuleValue::single(2, 1, MultiPoly::one(0)));
        assert_eq!(h.energy_apply(&alg, &m), h);
        let dh = h.apply_partial(&m);
        assert_eq!(*dh.get(&RowIndex::new(vec![0, 0])).unwrap().component(1), MultiPoly::partial(0));
    }

    #[test]
    fn coordinates_round_trip() {
        let (alg, m) = w0();
        for q in 0..4 {
            let a = ansatz_weight_zero(&alg, &m, q);
            let coords: Vec<Rational> = (0..a.dim()).map(|i| rat(i as i64 + 1, 3)).collect();
            let f = a.combine(&coords);
            assert_eq!(a.coordinates(&f).unwrap(), coords);
        }
        let a = ansatz_weight_zero(&alg, &m, 1);
        let mut stray = Cochain::zero_for(&alg, &m, 1);
        stray.set(RowIndex::new(vec![1, 0]), ModuleValue::single(2, 0, x(1, 0)));
        assert!(a.coordinates(&stray).is_err());
    }

    #[test]
    fn normalization() {
        let (alg, m) = w0();
        let mut f = Cochain::zero_for(&alg, &m, 2);
        f.set(
            RowIndex::new(vec![2, 0]),
            ModuleValue::single(2, 1, (&x(2, 1) - &x(2, 0)).scale(&rat(3, 4))),
        );
        let g = f.normalized();
        assert_eq!(*g.get(&RowIndex::new(vec![2, 0])).unwrap().component(1), &x(2, 0) - &x(2, 1));
    }
}
