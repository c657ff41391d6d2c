//! Property checks and their input strategies. `properties.rs` drives them
//! through `proptest!`; the acceptance run drives them with a fixed runner.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use lcacohom::algebra::{LcaSpec, ModuleSpec};
use lcacohom::calculus::{differential, homotopy};
use lcacohom::cochain::{ansatz, AnsatzSpace, Cochain, WeightTag};
use lcacohom::cohomology::{full_report, vanishing_bound};
use lcacohom::exactpoly::{int, rat, Monomial, MultiPoly, Rational};
use lcacohom::presets::{ModuleKind, PresetParams};
use proptest::prelude::*;

use super::preset;

pub struct Preset {
    pub label: String,
    pub alg: LcaSpec,
    pub module: ModuleSpec,
    pub bound: usize,
}

pub fn presets() -> &'static [Preset] {
    static CELL: OnceLock<Vec<Preset>> = OnceLock::new();
    CELL.get_or_init(|| {
        let params = vec![
            PresetParams::new("vir"),
            PresetParams::wb(int(0)),
            PresetParams::wb(int(1)),
            PresetParams::wb(int(-1)),
            PresetParams::new("sv"),
            PresetParams::new("ext_sv"),
            PresetParams::wb(int(0)).with_module(ModuleKind::Trivial),
            PresetParams::new("sv").with_module(ModuleKind::Trivial),
            PresetParams::wb(int(0)).rank_one(int(1), int(0), int(1)),
        ];
        params
            .iter()
            .map(|p| {
                let (alg, module) = preset(p);
                let bound = vanishing_bound(&alg, &module).bound;
                Preset {
                    label: format!("{} / {}", alg.name(), module.name()),
                    alg,
                    module,
                    bound,
                }
            })
            .collect()
    })
}

type SpaceKey = (usize, usize, Rational);

pub fn space(p: usize, q: usize, w: &Rational) -> Arc<AnsatzSpace> {
    static CACHE: OnceLock<Mutex<HashMap<SpaceKey, Arc<AnsatzSpace>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (p, q, w.clone());
    if let Some(s) = cache.lock().unwrap().get(&key) {
        return s.clone();
    }
    let pr = &presets()[p];
    let s = Arc::new(ansatz(&pr.alg, &pr.module, q, w));
    cache.lock().unwrap().insert(key, s.clone());
    s
}

fn combination(s: &AnsatzSpace, coeffs: &[i64]) -> Cochain {
    let c: Vec<Rational> = (0..s.dim()).map(|i| int(coeffs[i % coeffs.len()])).collect();
    s.combine(&c)
}

/// Preset, degree selector and coefficients; the degree is reduced modulo
/// the admissible range of the preset.
pub fn cochain_case() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (0..presets().len(), 0usize..64, prop::collection::vec(-3i64..=3, 1..24))
}

pub fn weight_choice() -> impl Strategy<Value = Rational> {
    prop::sample::select(vec![int(0), int(1), int(2), rat(1, 2), rat(3, 2), int(-1)])
}

pub fn check_dd(p: usize, qsel: usize, coeffs: &[i64]) -> Result<(), String> {
    let pr = &presets()[p];
    let q = qsel % (pr.bound + 1);
    let f = combination(&space(p, q, &int(0)), coeffs);
    let dd = differential(&pr.alg, &pr.module, &differential(&pr.alg, &pr.module, &f));
    if dd.is_zero() {
        Ok(())
    } else {
        Err(format!("d(d f) != 0 for {} at q = {q}", pr.label))
    }
}

pub fn check_homotopy(p: usize, qsel: usize, w: &Rational, coeffs: &[i64]) -> Result<(), String> {
    let pr = &presets()[p];
    let q = qsel % 4;
    let f = combination(&space(p, q, w), coeffs);
    let lhs = homotopy(&pr.alg, &pr.module, &f);
    if lhs != f.energy_apply(&pr.alg, &pr.module) {
        return Err(format!("dτ + τd != Ẽ for {} at q = {q}, weight {w}", pr.label));
    }
    if lhs != f.scale(w) {
        return Err(format!("Ẽ is not {w} on a weight-{w} cochain of {}", pr.label));
    }
    Ok(())
}

pub fn check_d_partial(p: usize, qsel: usize, coeffs: &[i64]) -> Result<(), String> {
    let pr = &presets()[p];
    let q = qsel % 4;
    let (m, a) = (&pr.module, &pr.alg);
    let mut f = combination(&space(p, q, &int(0)), coeffs);
    f = f.add(&combination(&space(p, q, &int(1)), &coeffs.iter().rev().copied().collect::<Vec<_>>()));
    let lhs = differential(a, m, &f.apply_partial(m));
    let rhs = differential(a, m, &f).apply_partial(m);
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("d∂ != ∂d for {} at q = {q}", pr.label))
    }
}

pub fn check_weight_preserved(p: usize, qsel: usize, w: &Rational, coeffs: &[i64]) -> Result<(), String> {
    let pr = &presets()[p];
    let q = qsel % 4;
    let f = combination(&space(p, q, w), coeffs);
    let df = differential(&pr.alg, &pr.module, &f);
    match df.weight(&pr.alg, &pr.module) {
        WeightTag::Zero => Ok(()),
        WeightTag::Pure(r) if r == *w => Ok(()),
        other => Err(format!("weight {w} cochain of {} has d f of weight {other:?}", pr.label)),
    }
}

/// Module parameters for the dimension-formula property.
pub fn module_case() -> impl Strategy<Value = (i64, u8, i64, i64)> {
    (-1i64..=2, 0u8..3, 0i64..=4, -2i64..=2)
}

pub fn check_dimension_formula(b: i64, kind: u8, delta2: i64, beta: i64) -> Result<(), String> {
    let mut params = PresetParams::wb(int(b));
    params = match kind {
        0 => params,
        1 => params.with_module(ModuleKind::Trivial),
        _ => params.rank_one(rat(delta2, 2), int(0), if b == 0 { int(beta) } else { int(0) }),
    };
    let (alg, module) = preset(&params);
    let r = full_report(&alg, &module).map_err(|e| format!("{params:?}: {e}"))?;
    for d in &r.degrees {
        if d.q == 0 || d.q > r.bound.bound {
            continue;
        }
        let next = r.degree(d.q + 1).map_or(0, |x| x.basic_dim());
        if d.reduced_dim() != Some(d.basic_dim() + next) {
            return Err(format!("dimension formula fails at q = {} for {params:?}", d.q));
        }
    }
    Ok(())
}

pub fn poly() -> impl Strategy<Value = MultiPoly> {
    poly_of(2)
}

pub fn poly_of(arity: usize) -> impl Strategy<Value = MultiPoly> {
    let term = (0u32..3, prop::collection::vec(0u32..3, arity), -4i64..=4, 1i64..=3);
    prop::collection::vec(term, 0..5).prop_map(move |ts| {
        MultiPoly::from_terms(
            arity,
            ts.into_iter().map(|(d, l, n, den)| (Monomial::new(d, &l), rat(n, den))),
        )
    })
}

pub fn check_ring_axioms(a: &MultiPoly, b: &MultiPoly, c: &MultiPoly) -> Result<(), String> {
    let zero = MultiPoly::zero(a.arity());
    let one = MultiPoly::one(a.arity());
    let checks = [
        (a + b == b + a, "a + b = b + a"),
        (a * b == b * a, "ab = ba"),
        (&(a + b) + c == a + &(b + c), "(a + b) + c = a + (b + c)"),
        (&(a * b) * c == a * &(b * c), "(ab)c = a(bc)"),
        (a * &(b + c) == &(a * b) + &(a * c), "a(b + c) = ab + ac"),
        (a + &zero == *a, "a + 0 = a"),
        (a * &one == *a, "a1 = a"),
        ((a - a).is_zero(), "a - a = 0"),
        ((a * &zero).is_zero(), "a0 = 0"),
        (a.pow(2) == a * a, "a^2 = aa"),
    ];
    match checks.iter().find(|(ok, _)| !ok) {
        None => Ok(()),
        Some((_, law)) => Err(format!("{law} fails for a = {a}, b = {b}, c = {c}")),
    }
}

/// Substitution is a ring map, and swapping λs twice is the identity.
pub fn check_substitution(a: &MultiPoly, b: &MultiPoly, s: &MultiPoly) -> Result<(), String> {
    let sub = |p: &MultiPoly| p.substitute_partial(s).unwrap();
    if sub(&(a * b)) != &sub(a) * &sub(b) || sub(&(a + b)) != &sub(a) + &sub(b) {
        return Err(format!("∂ ↦ {s} is not a ring map on {a}, {b}"));
    }
    let swap = [1usize, 0];
    let twice = a.permute_lambdas(&swap).unwrap().permute_lambdas(&swap).unwrap();
    if twice != *a {
        return Err(format!("double swap changes {a}"));
    }
    let reduced = a.reduce_mod_total();
    if reduced.partial_degree().unwrap_or(0) != 0 {
        return Err(format!("reduce_mod_total leaves ∂ in {reduced}"));
    }
    Ok(())
}
