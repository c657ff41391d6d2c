//! The differential, the homotopy operator `τ`, and the rank-one vanishing
//! criterion for a shifted Virasoro action.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{LcaSpec, ModuleSpec};
use crate::cochain::{enumerate_rows, Cochain, ModuleValue, RowIndex};
use crate::exactpoly::{Monomial, MultiPoly, Rational};

/// `a_gen` acting with `λ = λ_slot` on `v`: each `p_j(∂, ..) m_j` becomes
/// `p_j(∂+λ_slot, ..) · (a_gen λ_slot m_j)`.
pub fn lambda_action(module: &ModuleSpec, gen: usize, slot: usize, v: &ModuleValue) -> ModuleValue {
    let arity = v.arity();
    let lam = MultiPoly::lambda(arity, slot);
    let d = MultiPoly::partial(arity);
    let shift = if module.partial_is_zero() { lam.clone() } else { &d + &lam };
    let l = module.rank();
    let mut out = ModuleValue::zero(l, arity);
    for (j, p) in v.components().iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let row = module.action(gen, j);
        if row.iter().all(|q| q.is_zero()) {
            continue;
        }
        let shifted = p.substitute_partial(&shift).expect("same arity");
        for (r, q) in row.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let action = q.compose(&d, std::slice::from_ref(&lam));
            let term = &shifted * &action;
            out.add_scaled(&ModuleValue::single(l, r, term), &Rational::one());
        }
    }
    if module.partial_is_zero() {
        out = out.map(|p| p.drop_partial());
    }
    out
}

/// `[a_k λ a_l]` with `λ ↦ λ_{slot_k}` and the bracket's `∂ ↦ -(λ_{slot_k} + λ_{slot_l})`,
/// as nonzero coefficients per generator.
pub fn bracket_substituted(
    alg: &LcaSpec,
    k: usize,
    l: usize,
    slot_k: usize,
    slot_l: usize,
    arity: usize,
) -> Vec<(usize, MultiPoly)> {
    let lk = MultiPoly::lambda(arity, slot_k);
    let minus_sum = -(&lk + &MultiPoly::lambda(arity, slot_l));
    alg.bracket(k, l)
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(m, p)| (m, p.compose(&minus_sum, std::slice::from_ref(&lk))))
        .filter(|(_, p)| !p.is_zero())
        .collect()
}

fn sign(e: usize) -> Rational {
    if e % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Value of `df` on one canonical row of degree `q+1`.
fn differential_row(alg: &LcaSpec, module: &ModuleSpec, f: &Cochain, row: &RowIndex) -> ModuleValue {
    let q = f.degree();
    let arity = q + 1;
    let gens = row.generators();
    let vars: Vec<MultiPoly> = (0..arity).map(|i| MultiPoly::lambda(arity, i)).collect();
    let mut out = ModuleValue::zero(module.rank(), arity);

    // Σ_k (-1)^{k+1} a_k λ_k f(..., â_k, ...)
    if !module.partial_is_zero() {
        for k in 0..arity {
            let args: Vec<(usize, u32)> = (0..arity).filter(|&i| i != k).map(|i| (gens[i], 0)).collect();
            let sub: Vec<MultiPoly> = (0..arity).filter(|&i| i != k).map(|i| vars[i].clone()).collect();
            let inner = f.evaluate(&args, &sub, arity);
            if inner.is_zero() {
                continue;
            }
            let acted = lambda_action(module, gens[k], k, &inner);
            out.add_scaled(&acted, &sign(k));
        }
    }

    // Σ_{k<l} (-1)^{k+l} f([a_k λ_k a_l], ..., â_k, ..., â_l, ...) at λ_k+λ_l
    for k in 0..arity {
        for l in k + 1..arity {
            let coeffs = bracket_substituted(alg, gens[k], gens[l], k, l, arity);
            if coeffs.is_empty() {
                continue;
            }
            let rest: Vec<usize> = (0..arity).filter(|&i| i != k && i != l).collect();
            let mut sub: Vec<MultiPoly> = vec![&vars[k] + &vars[l]];
            sub.extend(rest.iter().map(|&i| vars[i].clone()));
            for (m, c) in coeffs {
                let mut args = vec![(m, 0)];
                args.extend(rest.iter().map(|&i| (gens[i], 0)));
                let value = f.evaluate(&args, &sub, arity);
                if value.is_zero() {
                    continue;
                }
                out.add_scaled(&value.mul_poly(&c), &sign(k + l));
            }
        }
    }
    out
}

/// The differential of a `q`-cochain, a `(q+1)`-cochain.
pub fn differential(alg: &LcaSpec, module: &ModuleSpec, f: &Cochain) -> Cochain {
    let rows = enumerate_rows(alg.rank(), f.degree() + 1);
    let values: Vec<(RowIndex, ModuleValue)> = if f.is_zero() {
        Vec::new()
    } else {
        rows.into_par_iter()
            .map(|row| {
                let v = differential_row(alg, module, f, &row);
                (row, v)
            })
            .collect()
    };
    let mut out = Cochain::zero(alg.rank(), module.rank(), f.degree() + 1);
    for (row, v) in values {
        out.set(row, v);
    }
    out
}

/// `(τf)(a_1, ..., a_{q-1}) = (-1)^{q-1} d/dλ f(a_1, ..., a_{q-1}, L)|_{λ=0}`,
/// with `λ` the last slot; `τ` of a 0-cochain is 0.
pub fn tau(alg: &LcaSpec, module: &ModuleSpec, f: &Cochain) -> Cochain {
    let q = f.degree();
    if q == 0 {
        return Cochain::zero(alg.rank(), module.rank(), 0);
    }
    let v = alg.virasoro_index();
    let vars: Vec<MultiPoly> = (0..q).map(|i| MultiPoly::lambda(q, i)).collect();
    let mut out = Cochain::zero(alg.rank(), module.rank(), q - 1);
    for row in enumerate_rows(alg.rank(), q - 1) {
        let mut args: Vec<(usize, u32)> = row.generators().into_iter().map(|g| (g, 0)).collect();
        args.push((v, 0));
        let value = f.evaluate(&args, &vars, q);
        let value = value.map(|p| p.ddlambda_at_zero(q - 1).expect("slot"));
        out.set(row, value.scale(&sign(q - 1)));
    }
    out
}

/// `(dτ + τd) f`
pub fn homotopy(alg: &LcaSpec, module: &ModuleSpec, f: &Cochain) -> Cochain {
    let mut lhs = tau(alg, module, &differential(alg, module, f));
    if f.degree() > 0 {
        lhs = lhs.add(&differential(alg, module, &tau(alg, module, f)));
    }
    lhs
}

/// `dτ + τd = Ẽ` on `f`.
pub fn homotopy_check(alg: &LcaSpec, module: &ModuleSpec, f: &Cochain) -> bool {
    homotopy(alg, module, f) == f.energy_apply(alg, module)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankOneVerdict {
    /// All basic and reduced cohomology vanish.
    Applies { delta: Rational, alpha: Rational },
    NotApplicable(String),
}

impl RankOneVerdict {
    pub fn applies(&self) -> bool {
        matches!(self, RankOneVerdict::Applies { .. })
    }
}

/// Rank-one module with `L_λ m = (∂+α+Δλ)m` exactly and `α ≠ 0`.
pub fn rank_one_alpha_vanishing(alg: &LcaSpec, module: &ModuleSpec) -> RankOneVerdict {
    if module.rank() != 1 {
        return RankOneVerdict::NotApplicable(format!("module has rank {}", module.rank()));
    }
    if module.partial_is_zero() {
        return RankOneVerdict::NotApplicable("∂ acts by zero".into());
    }
    let p = &module.action(alg.virasoro_index(), 0)[0];
    let alpha = p.coefficient(&Monomial::one(1));
    let delta = p.coefficient(&Monomial::new(0, &[1]));
    let expected = MultiPoly::from_terms(
        1,
        [
            (Monomial::new(1, &[0]), Rational::one()),
            (Monomial::new(0, &[1]), delta.clone()),
            (Monomial::one(1), alpha.clone()),
        ],
    );
    if *p != expected {
        return RankOneVerdict::NotApplicable(format!("L acts by {p}, not ∂ + α + Δλ"));
    }
    if alpha.is_zero() {
        return RankOneVerdict::NotApplicable("α = 0".into());
    }
    RankOneVerdict::Applies { delta, alpha }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::adjoint_module;
    use crate::exactpoly::int;
    use crate::cochain::{ansatz, ansatz_weight_zero};
    use crate::presets::{self, PresetParams};

    fn w0() -> (LcaSpec, ModuleSpec) {
        let alg = presets::algebra(&PresetParams::wb(int(0))).unwrap();
        let m = adjoint_module(&alg);
        (alg, m)
    }

    fn x(arity: usize, i: usize) -> MultiPoly {
        MultiPoly::lambda(arity, i)
    }

    fn d(arity: usize) -> MultiPoly {
        MultiPoly::partial(arity)
    }

    fn row(c: &[u32]) -> RowIndex {
        RowIndex::new(c.to_vec())
    }

    #[test]
    fn action_examples() {
        let (_, m) = w0();
        let h = ModuleValue::single(2, 1, MultiPoly::one(1));
        let v = lambda_action(&m, 0, 0, &h);
        assert_eq!(*v.component(1), &d(1) + &x(1, 0));
        let dh = ModuleValue::single(2, 1, d(1));
        let v = lambda_action(&m, 0, 0, &dh);
        assert_eq!(*v.component(1), (&d(1) + &x(1, 0)).pow(2));
        let v = lambda_action(&m, 1, 0, &ModuleValue::single(2, 1, MultiPoly::one(1)));
        assert!(v.is_zero());
    }

    #[test]
    fn bracket_substitution_examples() {
        let (alg, _) = w0();
        assert_eq!(bracket_substituted(&alg, 0, 1, 0, 1, 2), vec![(1, -x(2, 1))]);
        let vir = presets::algebra(&PresetParams::new("vir")).unwrap();
        assert_eq!(bracket_substituted(&vir, 0, 0, 0, 1, 2), vec![(0, &x(2, 0) - &x(2, 1))]);
        let w3 = presets::algebra(&PresetParams::wb(int(3))).unwrap();
        assert!(bracket_substituted(&w3, 1, 1, 0, 1, 2).is_empty());
    }

    #[test]
    fn differential_examples() {
        let (alg, m) = w0();
        let h = Cochain::from_element(2, ModuleValue::single(2, 1, MultiPoly::one(0)));
        let dh = differential(&alg, &m, &h);
        assert_eq!(*dh.get(&row(&[1, 0])).unwrap().component(1), &d(1) + &x(1, 0));
        assert!(dh.get(&row(&[0, 1])).is_none());

        let mut f11 = Cochain::zero_for(&alg, &m, 1);
        f11.set(row(&[1, 0]), ModuleValue::single(2, 1, MultiPoly::one(1)));
        assert!(differential(&alg, &m, &f11).is_zero());
    }

    #[test]
    fn tau_examples() {
        let (alg, m) = w0();
        let h = Cochain::from_element(2, ModuleValue::single(2, 1, MultiPoly::one(0)));
        let dh = differential(&alg, &m, &h);
        assert_eq!(tau(&alg, &m, &dh), h);
        assert!(homotopy_check(&alg, &m, &h));

        let mut f11 = Cochain::zero_for(&alg, &m, 1);
        f11.set(row(&[1, 0]), ModuleValue::single(2, 1, MultiPoly::one(1)));
        assert!(tau(&alg, &m, &f11).is_zero());
        assert!(tau(&alg, &m, &h).is_zero());
        assert!(homotopy_check(&alg, &m, &f11));
        let df11 = f11.apply_partial(&m);
        assert_eq!(homotopy(&alg, &m, &df11), df11);

        let mut f22 = Cochain::zero_for(&alg, &m, 2);
        f22.set(row(&[2, 0]), ModuleValue::single(2, 1, &x(2, 0) - &x(2, 1)));
        assert!(homotopy(&alg, &m, &f22).is_zero());
    }

    #[test]
    fn d_squared_vanishes_on_small_ansatz() {
        for name in ["vir", "hv", "w22", "sv"] {
            let alg = presets::algebra(&PresetParams::new(name)).unwrap();
            let m = adjoint_module(&alg);
            for q in 0..4 {
                for w in [int(0), int(1)] {
                    for f in ansatz(&alg, &m, q, &w).basis() {
                        let df = differential(&alg, &m, f);
                        assert!(differential(&alg, &m, &df).is_zero(), "{name} q={q}");
                        assert!(homotopy_check(&alg, &m, f), "{name} q={q} w={w}");
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_module_complex() {
        let alg = presets::algebra(&PresetParams::new("vir")).unwrap();
        let m = crate::algebra::trivial_module(&alg);
        for q in 0..4 {
            for f in ansatz_weight_zero(&alg, &m, q).basis() {
                let df = differential(&alg, &m, f);
                assert!(differential(&alg, &m, &df).is_zero());
                assert!(homotopy_check(&alg, &m, f));
            }
        }
    }

    #[test]
    fn rank_one_verdicts() {
        let w1 = presets::algebra(&PresetParams::wb(int(1))).unwrap();
        let p = PresetParams::wb(int(1)).rank_one(int(2), int(3), int(0));
        let m = presets::module(&w1, &p).unwrap();
        assert_eq!(
            rank_one_alpha_vanishing(&w1, &m),
            RankOneVerdict::Applies { delta: int(2), alpha: int(3) }
        );
        let p = PresetParams::wb(int(1)).rank_one(int(2), int(0), int(0));
        let m = presets::module(&w1, &p).unwrap();
        assert!(!rank_one_alpha_vanishing(&w1, &m).applies());
        let (alg, adj) = w0();
        assert!(!rank_one_alpha_vanishing(&alg, &adj).applies());
        // a λ² term in L's action is outside the criterion
        let p = PresetParams::wb(int(1)).rank_one(int(2), int(1), int(0));
        let m = presets::module(&w1, &p).unwrap();
        let bent = m.with_action_entry(0, 0, 0, &m.action(0, 0)[0] + &x(1, 0).pow(2));
        assert!(!rank_one_alpha_vanishing(&w1, &bent).applies());
    }
}
