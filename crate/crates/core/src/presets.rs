//! Built-in algebra families and their module families.
//!
//! Families sit behind [`AlgebraFamily`] and are looked up by name in a
//! [`PresetRegistry`]; the CLI resolves `preset <name>` through the same
//! registry.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{self, AlgebraError, GeneratorInfo, LcaSpec, ModuleSpec, StructureTable};
use crate::exactpoly::{int, rat, MultiPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresetError {
    #[error("unknown preset `{0}`")]
    UnknownFamily(String),
    #[error("{0}")]
    Parameter(String),
    #[error(transparent)]
    Structure(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleKind {
    Adjoint,
    Trivial,
    /// `L_λ m = (∂+α+Δλ)m`; `β` is the scalar action where the family has one.
    RankOne { delta: Rational, alpha: Rational, beta: Rational },
}

impl ModuleKind {
    pub fn label(&self) -> &'static str {
        match self {
            ModuleKind::Adjoint => "adjoint",
            ModuleKind::Trivial => "trivial",
            ModuleKind::RankOne { .. } => "rank_one",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresetParams {
    pub name: String,
    pub b: Option<Rational>,
    pub module: ModuleKind,
}

impl PresetParams {
    pub fn new(name: impl Into<String>) -> Self {
        PresetParams {
            name: name.into(),
            b: None,
            module: ModuleKind::Adjoint,
        }
    }

    pub fn wb(b: Rational) -> Self {
        PresetParams {
            name: "wb".into(),
            b: Some(b),
            module: ModuleKind::Adjoint,
        }
    }

    pub fn with_module(mut self, module: ModuleKind) -> Self {
        self.module = module;
        self
    }

    pub fn rank_one(self, delta: Rational, alpha: Rational, beta: Rational) -> Self {
        self.with_module(ModuleKind::RankOne { delta, alpha, beta })
    }
}

pub trait AlgebraFamily: Send + Sync {
    fn name(&self) -> &str;

    fn summary(&self) -> String;

    fn takes_b(&self) -> bool {
        false
    }

    fn algebra(&self, params: &PresetParams) -> Result<LcaSpec, PresetError>;

    /// Actions of the non-Virasoro generators on the rank-one module, in
    /// generator order; `None` entries act by zero. Errors if `β ≠ 0` is
    /// not allowed for this member of the family.
    fn rank_one_scalars(&self, alg: &LcaSpec, params: &PresetParams, beta: &Rational)
        -> Result<Vec<Rational>, PresetError>;
}

fn gens(spec: &[(&str, Rational)]) -> Vec<GeneratorInfo> {
    spec.iter().map(|(n, w)| GeneratorInfo::new(*n, w.clone())).collect()
}

/// `c_d ∂ + c_x λ + c`
fn lin(cd: Rational, cx: Rational, c: Rational) -> MultiPoly {
    let mut p = MultiPoly::partial(1).scale(&cd);
    p = &p + &MultiPoly::lambda(1, 0).scale(&cx);
    &p + &MultiPoly::constant(1, c)
}

struct Table {
    t: StructureTable,
}

impl Table {
    fn new(n: usize) -> Self {
        Table {
            t: vec![vec![vec![MultiPoly::zero(1); n]; n]; n],
        }
    }

    fn set(&mut self, i: usize, j: usize, k: usize, p: MultiPoly) {
        self.t[i][j][k] = p;
    }
}

fn no_beta(family: &str, beta: &Rational) -> Result<(), PresetError> {
    if beta.is_zero() {
        Ok(())
    } else {
        Err(PresetError::Parameter(format!(
            "--beta is not a parameter of rank-one {family} modules"
        )))
    }
}

fn no_b(params: &PresetParams) -> Result<(), PresetError> {
    if params.b.is_some() {
        return Err(PresetError::Parameter(format!("--b is not a parameter of {}", params.name)));
    }
    Ok(())
}

pub struct Virasoro;

impl AlgebraFamily for Virasoro {
    fn name(&self) -> &str {
        "vir"
    }

    fn summary(&self) -> String {
        "Virasoro conformal algebra, [L_λ L] = (∂+2λ)L".into()
    }

    fn algebra(&self, params: &PresetParams) -> Result<LcaSpec, PresetError> {
        no_b(params)?;
        let mut t = Table::new(1);
        t.set(0, 0, 0, lin(int(1), int(2), int(0)));
        Ok(LcaSpec::new("vir", gens(&[("L", int(2))]), t.t, 0)?)
    }

    fn rank_one_scalars(&self, _: &LcaSpec, _: &PresetParams, beta: &Rational) -> Result<Vec<Rational>, PresetError> {
        no_beta("Virasoro", beta)?;
        Ok(vec![Rational::zero()])
    }
}

/// `W(b)`: generators `L, H` with `[L_λ H] = (∂+(1-b)λ)H`, `[H_λ H] = 0`.
pub struct WFamily {
    name: &'static str,
    fixed_b: Option<Rational>,
}

impl WFamily {
    pub fn general() -> Self {
        WFamily { name: "wb", fixed_b: None }
    }

    pub fn alias(name: &'static str, b: Rational) -> Self {
        WFamily { name, fixed_b: Some(b) }
    }

    fn b(&self, params: &PresetParams) -> Result<Rational, PresetError> {
        match (&self.fixed_b, &params.b) {
            (Some(b), None) => Ok(b.clone()),
            (Some(b), Some(given)) if given == b => Ok(b.clone()),
            (Some(b), Some(_)) => Err(PresetError::Parameter(format!("{} fixes b = {}", self.name, b))),
            (None, Some(b)) => Ok(b.clone()),
            (None, None) => Err(PresetError::Parameter("wb requires --b".into())),
        }
    }
}

pub fn w_algebra(b: &Rational) -> Result<LcaSpec, AlgebraError> {
    let one = Rational::one();
    let mut t = Table::new(2);
    t.set(0, 0, 0, lin(int(1), int(2), int(0)));
    t.set(0, 1, 1, lin(one.clone(), &one - b, int(0)));
    t.set(1, 0, 1, lin(-b.clone(), &one - b, int(0)));
    LcaSpec::new(
        format!("W({b})"),
        gens(&[("L", int(2)), ("H", &one - b)]),
        t.t,
        0,
    )
}

impl AlgebraFamily for WFamily {
    fn name(&self) -> &str {
        self.name
    }

    fn summary(&self) -> String {
        match &self.fixed_b {
            Some(b) => format!("alias for wb with b = {b}"),
            None => "W(b): [L_λ H] = (∂+(1-b)λ)H, [H_λ H] = 0; takes --b".into(),
        }
    }

    fn takes_b(&self) -> bool {
        self.fixed_b.is_none()
    }

    fn algebra(&self, params: &PresetParams) -> Result<LcaSpec, PresetError> {
        Ok(w_algebra(&self.b(params)?)?)
    }

    fn rank_one_scalars(&self, _: &LcaSpec, params: &PresetParams, beta: &Rational) -> Result<Vec<Rational>, PresetError> {
        let b = self.b(params)?;
        if !b.is_zero() {
            no_beta("W(b), b ≠ 0,", beta)?;
        }
        Ok(vec![Rational::zero(), beta.clone()])
    }
}

/// Schrödinger-Virasoro algebra, optionally extended by `N`.
pub struct Schrodinger {
    extended: bool,
}

impl Schrodinger {
    pub fn plain() -> Self {
        Schrodinger { extended: false }
    }

    pub fn extended() -> Self {
        Schrodinger { extended: true }
    }
}

pub fn sv_algebra(extended: bool) -> Result<LcaSpec, AlgebraError> {
    let (l, m, y, n) = (0, 1, 2, 3);
    let rank = if extended { 4 } else { 3 };
    let mut t = Table::new(rank);
    let zero = Rational::zero;
    t.set(l, l, l, lin(int(1), int(2), zero()));
    t.set(l, m, m, lin(int(1), int(1), zero()));
    t.set(m, l, m, lin(zero(), int(1), zero()));
    t.set(l, y, y, lin(int(1), rat(3, 2), zero()));
    t.set(y, l, y, lin(rat(1, 2), rat(3, 2), zero()));
    t.set(y, y, m, lin(int(1), int(2), zero()));
    let mut g = vec![("L", int(2)), ("M", int(1)), ("Y", rat(3, 2))];
    if extended {
        t.set(l, n, n, lin(int(1), int(1), zero()));
        t.set(n, l, n, lin(zero(), int(1), zero()));
        t.set(n, m, m, MultiPoly::constant(1, int(2)));
        t.set(m, n, m, MultiPoly::constant(1, int(-2)));
        t.set(n, y, y, MultiPoly::constant(1, int(1)));
        t.set(y, n, y, MultiPoly::constant(1, int(-1)));
        g.push(("N", int(1)));
    }
    LcaSpec::new(if extended { "ext_sv" } else { "sv" }, gens(&g), t.t, l)
}

impl AlgebraFamily for Schrodinger {
    fn name(&self) -> &str {
        if self.extended {
            "ext_sv"
        } else {
            "sv"
        }
    }

    fn summary(&self) -> String {
        if self.extended {
            "extended Schrödinger-Virasoro algebra, generators L, M, Y, N".into()
        } else {
            "Schrödinger-Virasoro algebra, generators L, M, Y".into()
        }
    }

    fn algebra(&self, params: &PresetParams) -> Result<LcaSpec, PresetError> {
        no_b(params)?;
        Ok(sv_algebra(self.extended)?)
    }

    fn rank_one_scalars(&self, alg: &LcaSpec, _: &PresetParams, beta: &Rational) -> Result<Vec<Rational>, PresetError> {
        let mut out = vec![Rational::zero(); alg.rank()];
        if self.extended {
            out[3] = beta.clone();
        } else {
            no_beta("Schrödinger-Virasoro", beta)?;
        }
        Ok(out)
    }
}

pub struct PresetRegistry {
    families: BTreeMap<String, Box<dyn AlgebraFamily>>,
}

impl Default for PresetRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

impl PresetRegistry {
    pub fn empty() -> Self {
        PresetRegistry {
            families: BTreeMap::new(),
        }
    }

    /// `vir`, `wb`, `sv`, `ext_sv`, and the aliases `hv` (W(0)) and `w22` (W(-1)).
    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Virasoro));
        r.register(Box::new(WFamily::general()));
        r.register(Box::new(WFamily::alias("hv", int(0))));
        r.register(Box::new(WFamily::alias("w22", int(-1))));
        r.register(Box::new(Schrodinger::plain()));
        r.register(Box::new(Schrodinger::extended()));
        r
    }

    pub fn register(&mut self, family: Box<dyn AlgebraFamily>) {
        self.families.insert(family.name().to_string(), family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn AlgebraFamily, PresetError> {
        self.families
            .get(name)
            .map(|f| f.as_ref())
            .ok_or_else(|| PresetError::UnknownFamily(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.families.keys().map(|s| s.as_str())
    }

    pub fn families(&self) -> impl Iterator<Item = &dyn AlgebraFamily> {
        self.families.values().map(|f| f.as_ref())
    }

    pub fn algebra(&self, params: &PresetParams) -> Result<LcaSpec, PresetError> {
        self.get(&params.name)?.algebra(params)
    }

    pub fn module(&self, alg: &LcaSpec, params: &PresetParams) -> Result<ModuleSpec, PresetError> {
        match &params.module {
            ModuleKind::Adjoint => Ok(algebra::adjoint_module(alg)),
            ModuleKind::Trivial => Ok(algebra::trivial_module(alg)),
            ModuleKind::RankOne { delta, alpha, beta } => {
                let scalars = self.get(&params.name)?.rank_one_scalars(alg, params, beta)?;
                rank_one_module(alg, delta, alpha, &scalars)
            }
        }
    }
}

/// Rank-one module with `L_λ m = (∂+α+Δλ)m` and every other generator acting
/// by the given scalar.
pub fn rank_one_module(
    alg: &LcaSpec,
    delta: &Rational,
    alpha: &Rational,
    scalars: &[Rational],
) -> Result<ModuleSpec, PresetError> {
    let v = alg.virasoro_index();
    let action = (0..alg.rank())
        .map(|i| {
            let p = if i == v {
                lin(Rational::one(), delta.clone(), alpha.clone())
            } else {
                MultiPoly::constant(1, scalars[i].clone())
            };
            vec![vec![p]]
        })
        .collect();
    Ok(ModuleSpec::new(
        "rank_one",
        alg,
        vec![GeneratorInfo::new("m", delta.clone())],
        action,
        false,
    )?)
}

/// Shorthand for the standard registry.
pub fn algebra(params: &PresetParams) -> Result<LcaSpec, PresetError> {
    PresetRegistry::standard().algebra(params)
}

pub fn module(alg: &LcaSpec, params: &PresetParams) -> Result<ModuleSpec, PresetError> {
    PresetRegistry::standard().module(alg, params)
}
