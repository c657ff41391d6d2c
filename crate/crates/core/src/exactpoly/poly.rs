use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use thiserror::Error;

use super::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("lambda slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("not a permutation of {arity} slots: {perm:?}")]
    NotAPermutation { perm: Vec<usize>, arity: usize },
}

/// `∂^j λ_1^{e_1} ... λ_q^{e_q}`; slot 0 of the exponent vector is `∂`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: SmallVec<[u32; 8]>,
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, arity + 1),
        }
    }

    pub fn new(partial_exp: u32, lambda_exps: &[u32]) -> Self {
        let mut exps = SmallVec::with_capacity(lambda_exps.len() + 1);
        exps.push(partial_exp);
        exps.extend_from_slice(lambda_exps);
        Monomial { exps }
    }

    pub fn arity(&self) -> usize {
        self.exps.len() - 1
    }

    pub fn partial_exp(&self) -> u32 {
        self.exps[0]
    }

    pub fn lambda_exps(&self) -> &[u32] {
        &self.exps[1..]
    }

    pub fn lambda_exp(&self, slot: usize) -> u32 {
        self.exps[slot + 1]
    }

    pub fn lambda_degree(&self) -> u32 {
        self.exps[1..].iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn with_exp(&self, var: usize, exp: u32) -> Monomial {
        let mut m = self.clone();
        m.exps[var] = exp;
        m
    }

    fn without_lambda(&self, slot: usize) -> Monomial {
        let mut m = self.clone();
        m.exps.remove(slot + 1);
        m
    }
}

impl Ord for Monomial {
    /// Graded lexicographic, `∂` first, then `λ_1, λ_2, ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// E-eigenvalue of `monomial · m` for a module generator `m` of the given weight.
pub fn total_weight_of_monomial(m: &Monomial, generator_weight: &Rational) -> Rational {
    int(m.total_degree() as i64) + generator_weight
}

/// Sparse polynomial in `∂, λ_1, ..., λ_arity` over `Q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        Self::term(Monomial::one(arity), c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn partial(arity: usize) -> Self {
        Self::term(Monomial::one(arity).with_exp(0, 1), Rational::one())
    }

    /// `λ_{slot+1}` (slots are zero-based).
    pub fn lambda(arity: usize, slot: usize) -> Self {
        assert!(slot < arity, "lambda slot {slot} out of range for arity {arity}");
        Self::term(Monomial::one(arity).with_exp(slot + 1, 1), Rational::one())
    }

    /// `λ_1 + ... + λ_arity`
    pub fn lambda_sum(arity: usize) -> Self {
        let mut p = Self::zero(arity);
        for slot in 0..arity {
            p.add_term(Monomial::one(arity).with_exp(slot + 1, 1), Rational::one());
        }
        p
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let arity = m.arity();
        let mut p = Self::zero(arity);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(arity);
        for (m, c) in terms {
            assert_eq!(m.arity(), arity);
            p.add_term(m, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn partial_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::partial_exp).max()
    }

    pub fn is_partial_free(&self) -> bool {
        self.terms.keys().all(|m| m.partial_exp() == 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.arity(), self.arity);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &MultiPoly, c: &Rational) {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.same_arity(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.same_arity(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.same_arity(other)?;
        let mut out = MultiPoly::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    fn same_arity(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.arity);
        }
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.arity);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Replaces `∂` by `partial_image` and each `λ_i` by `lambda_images[i]`.
    /// All images share the target arity; the result lives in that arity.
    pub fn compose(&self, partial_image: &MultiPoly, lambda_images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(lambda_images.len(), self.arity, "one image per lambda slot");
        let target = partial_image.arity;
        assert!(lambda_images.iter().all(|p| p.arity == target));
        let images: Vec<&MultiPoly> = std::iter::once(partial_image).chain(lambda_images).collect();
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|_| vec![MultiPoly::one(target)]).collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut acc = MultiPoly::constant(target, c.clone());
            for (var, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[var];
                while cache.len() <= e as usize {
                    let next = cache.last().expect("nonempty") * images[var];
                    cache.push(next);
                }
                acc = &acc * &cache[e as usize];
            }
            out.add_scaled(&acc, &Rational::one());
        }
        out
    }

    /// Relabels variables: `λ_i ↦ λ_{map[i]}` in a context of `target_arity`,
    /// keeping `∂`. `map` must be injective.
    pub fn relabel(&self, map: &[usize], target_arity: usize) -> MultiPoly {
        assert_eq!(map.len(), self.arity);
        let mut out = MultiPoly::zero(target_arity);
        for (m, c) in &self.terms {
            let mut exps: SmallVec<[u32; 8]> = SmallVec::from_elem(0, target_arity + 1);
            exps[0] = m.exps[0];
            for (i, &t) in map.iter().enumerate() {
                exps[t + 1] += m.exps[i + 1];
            }
            out.add_term(Monomial { exps }, c.clone());
        }
        out
    }

    /// Embeds into a larger arity; the new slots are appended.
    pub fn extend_arity(&self, target_arity: usize) -> MultiPoly {
        assert!(target_arity >= self.arity);
        let map: Vec<usize> = (0..self.arity).collect();
        self.relabel(&map, target_arity)
    }

    /// `p(∂ ↦ expr)`; `expr` should be linear in `∂` and share the arity.
    pub fn substitute_partial(&self, expr: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.same_arity(expr)?;
        let lambdas: Vec<MultiPoly> = (0..self.arity).map(|s| MultiPoly::lambda(self.arity, s)).collect();
        Ok(self.compose(expr, &lambdas))
    }

    /// `p(λ_slot ↦ expr)` in the same arity context.
    pub fn substitute_lambda(&self, slot: usize, expr: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_slot(slot)?;
        self.same_arity(expr)?;
        let lambdas: Vec<MultiPoly> = (0..self.arity)
            .map(|s| {
                if s == slot {
                    expr.clone()
                } else {
                    MultiPoly::lambda(self.arity, s)
                }
            })
            .collect();
        Ok(self.compose(&MultiPoly::partial(self.arity), &lambdas))
    }

    /// Relabels `λ_i ↦ λ_{perm[i]}`.
    pub fn permute_lambdas(&self, perm: &[usize]) -> Result<MultiPoly, PolyError> {
        let mut seen = vec![false; self.arity];
        let ok = perm.len() == self.arity
            && perm.iter().all(|&p| p < self.arity && !std::mem::replace(&mut seen[p], true));
        if !ok {
            return Err(PolyError::NotAPermutation {
                perm: perm.to_vec(),
                arity: self.arity,
            });
        }
        Ok(self.relabel(perm, self.arity))
    }

    /// `∂p/∂λ_slot` at `λ_slot = 0`; the slot is dropped from the context.
    pub fn ddlambda_at_zero(&self, slot: usize) -> Result<MultiPoly, PolyError> {
        self.check_slot(slot)?;
        let mut out = MultiPoly::zero(self.arity - 1);
        for (m, c) in &self.terms {
            if m.lambda_exp(slot) == 1 {
                out.add_term(m.without_lambda(slot), c.clone());
            }
        }
        Ok(out)
    }

    /// `p` at `λ_slot = 0`; the slot is dropped from the context.
    pub fn eval_lambda_zero(&self, slot: usize) -> Result<MultiPoly, PolyError> {
        self.check_slot(slot)?;
        let mut out = MultiPoly::zero(self.arity - 1);
        for (m, c) in &self.terms {
            if m.lambda_exp(slot) == 0 {
                out.add_term(m.without_lambda(slot), c.clone());
            }
        }
        Ok(out)
    }

    /// `∂p/∂λ_slot`, same context.
    pub fn lambda_derivative(&self, slot: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.lambda_exp(slot);
            if e > 0 {
                out.add_term(m.with_exp(slot + 1, e - 1), c * int(e as i64));
            }
        }
        out
    }

    /// `∂ ↦ -(λ_1 + ... + λ_q)`: normal form modulo `∂ + Σλ`.
    pub fn reduce_mod_total(&self) -> MultiPoly {
        if self.is_partial_free() {
            return self.clone();
        }
        let minus_sum = -MultiPoly::lambda_sum(self.arity);
        self.substitute_partial(&minus_sum).expect("same arity")
    }

    /// Sets `∂ = 0`.
    pub fn drop_partial(&self) -> MultiPoly {
        MultiPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.partial_exp() == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_slot(&self, slot: usize) -> Result<(), PolyError> {
        if slot >= self.arity {
            return Err(PolyError::SlotOutOfRange {
                slot,
                arity: self.arity,
            });
        }
        Ok(())
    }

    /// Renders with explicit variable names; `names[0]` is used for `∂`.
    pub fn format_with(&self, names: &[&str]) -> String {
        assert!(names.len() > self.arity);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (var, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[var].to_string()),
                    _ => factors.push(format!("{}^{}", names[var], e)),
                }
            }
            if factors.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    /// Default variable names: `d`, and `x` for arity one or `x1, x2, ...`.
    pub fn default_names(arity: usize) -> Vec<String> {
        let mut names = vec!["d".to_string()];
        if arity == 1 {
            names.push("x".to_string());
        } else {
            names.extend((1..=arity).map(|i| format!("x{i}")));
        }
        names
    }

    /// Names that always number the lambdas: `d, x1, x2, ...`.
    pub fn indexed_names(arity: usize) -> Vec<String> {
        let mut names = vec!["d".to_string()];
        names.extend((1..=arity).map(|i| format!("x{i}")));
        names
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = MultiPoly::default_names(self.arity);
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.format_with(&names))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.arity, self)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("polynomial arity mismatch")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}
