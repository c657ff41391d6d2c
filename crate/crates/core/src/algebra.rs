//! Finite free Lie conformal algebras with a designated Virasoro generator,
//! finite free conformal modules, and the axiom checks for both.
//!
//! Structure constants are stored on generators only:
//! `bracket[i][j][k]` is the coefficient `P(∂, λ)` of `a_k` in `[a_i λ a_j]`,
//! and `action[i][k][j]` the coefficient of `m_j` in `a_i λ m_k`. Everything
//! else follows from sesquilinearity.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactpoly::{int, Monomial, MultiPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorInfo {
    pub name: String,
    pub weight: Rational,
}

impl GeneratorInfo {
    pub fn new(name: impl Into<String>, weight: Rational) -> Self {
        GeneratorInfo {
            name: name.into(),
            weight,
        }
    }
}

/// `table[i][j][k]`, all entries of arity one.
pub type StructureTable = Vec<Vec<Vec<MultiPoly>>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("no generators given")]
    Empty,
    #[error("structure table has wrong shape: {0}")]
    Shape(String),
    #[error("entry for ({0}) must have arity 1, found {1}")]
    Arity(String, usize),
    #[error("virasoro index {0} out of range")]
    VirasoroIndex(usize),
    #[error("module with zero ∂ must have zero action, found nonzero action of `{0}`")]
    TrivialModuleAction(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcaSpec {
    name: String,
    generators: Vec<GeneratorInfo>,
    bracket: StructureTable,
    virasoro: usize,
}

fn check_names(generators: &[GeneratorInfo]) -> Result<(), AlgebraError> {
    if generators.is_empty() {
        return Err(AlgebraError::Empty);
    }
    for (i, g) in generators.iter().enumerate() {
        if generators[..i].iter().any(|h| h.name == g.name) {
            return Err(AlgebraError::DuplicateName(g.name.clone()));
        }
    }
    Ok(())
}

fn check_table(
    table: &StructureTable,
    outer: usize,
    middle: usize,
    inner: usize,
    label: impl Fn(usize, usize, usize) -> String,
) -> Result<(), AlgebraError> {
    if table.len() != outer {
        return Err(AlgebraError::Shape(format!("expected {outer} rows, found {}", table.len())));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != middle {
            return Err(AlgebraError::Shape(format!("row {i} has {} entries, expected {middle}", row.len())));
        }
        for (j, entry) in row.iter().enumerate() {
            if entry.len() != inner {
                return Err(AlgebraError::Shape(format!(
                    "entry ({i},{j}) has {} components, expected {inner}",
                    entry.len()
                )));
            }
            for (k, p) in entry.iter().enumerate() {
                if p.arity() != 1 {
                    return Err(AlgebraError::Arity(label(i, j, k), p.arity()));
                }
            }
        }
    }
    Ok(())
}

impl LcaSpec {
    /// Structural checks only; axioms are checked by [`validate_algebra`].
    pub fn new(
        name: impl Into<String>,
        generators: Vec<GeneratorInfo>,
        bracket: StructureTable,
        virasoro: usize,
    ) -> Result<Self, AlgebraError> {
        check_names(&generators)?;
        let n = generators.len();
        check_table(&bracket, n, n, n, |i, j, k| {
            format!("{}, {} -> {}", generators[i].name, generators[j].name, generators[k].name)
        })?;
        if virasoro >= n {
            return Err(AlgebraError::VirasoroIndex(virasoro));
        }
        Ok(LcaSpec {
            name: name.into(),
            generators,
            bracket,
            virasoro,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[GeneratorInfo] {
        &self.generators
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.generators[i].weight
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn virasoro_index(&self) -> usize {
        self.virasoro
    }

    /// Coefficients of `[a_i λ a_j]`, one per generator.
    pub fn bracket(&self, i: usize, j: usize) -> &[MultiPoly] {
        &self.bracket[i][j]
    }

    pub fn bracket_table(&self) -> &StructureTable {
        &self.bracket
    }

    /// Returns a copy with one structure constant replaced.
    pub fn with_bracket_entry(&self, i: usize, j: usize, k: usize, p: MultiPoly) -> LcaSpec {
        assert_eq!(p.arity(), 1);
        let mut out = self.clone();
        out.bracket[i][j][k] = p;
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSpec {
    name: String,
    generators: Vec<GeneratorInfo>,
    action: StructureTable,
    partial_is_zero: bool,
}

impl ModuleSpec {
    pub fn new(
        name: impl Into<String>,
        alg: &LcaSpec,
        generators: Vec<GeneratorInfo>,
        action: StructureTable,
        partial_is_zero: bool,
    ) -> Result<Self, AlgebraError> {
        check_names(&generators)?;
        let l = generators.len();
        check_table(&action, alg.rank(), l, l, |i, k, j| {
            format!("{}, {} -> {}", alg.generator_name(i), generators[k].name, generators[j].name)
        })?;
        if partial_is_zero {
            for (i, row) in action.iter().enumerate() {
                if row.iter().flatten().any(|p| !p.is_zero()) {
                    return Err(AlgebraError::TrivialModuleAction(alg.generator_name(i).to_string()));
                }
            }
        }
        Ok(ModuleSpec {
            name: name.into(),
            generators,
            action,
            partial_is_zero,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[GeneratorInfo] {
        &self.generators
    }

    pub fn generator_name(&self, k: usize) -> &str {
        &self.generators[k].name
    }

    pub fn weight(&self, k: usize) -> &Rational {
        &self.generators[k].weight
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Coefficients of `a_i λ m_k`, one per module generator.
    pub fn action(&self, i: usize, k: usize) -> &[MultiPoly] {
        &self.action[i][k]
    }

    pub fn action_table(&self) -> &StructureTable {
        &self.action
    }

    /// True only for the trivial module, where `∂` acts by zero.
    pub fn partial_is_zero(&self) -> bool {
        self.partial_is_zero
    }

    pub fn with_action_entry(&self, i: usize, k: usize, j: usize, p: MultiPoly) -> ModuleSpec {
        assert_eq!(p.arity(), 1);
        let mut out = self.clone();
        out.action[i][k][j] = p;
        out
    }
}

/// The module whose λ-action is the λ-bracket.
pub fn adjoint_module(spec: &LcaSpec) -> ModuleSpec {
    ModuleSpec {
        name: "adjoint".to_string(),
        generators: spec.generators.clone(),
        action: spec.bracket.clone(),
        partial_is_zero: false,
    }
}

/// The one-dimensional module `F` with `∂ = 0` and zero action.
pub fn trivial_module(spec: &LcaSpec) -> ModuleSpec {
    let zero = MultiPoly::zero(1);
    ModuleSpec {
        name: "trivial".to_string(),
        generators: vec![GeneratorInfo::new("c", Rational::zero())],
        action: vec![vec![vec![zero]]; spec.rank()],
        partial_is_zero: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Virasoro,
    WeightHomogeneity,
    SkewSymmetry,
    Jacobi,
    ModuleAxiom,
    Conformal,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::Virasoro => "virasoro",
            ViolationKind::WeightHomogeneity => "weight-homogeneity",
            ViolationKind::SkewSymmetry => "skew-symmetry",
            ViolationKind::Jacobi => "jacobi",
            ViolationKind::ModuleAxiom => "module-axiom",
            ViolationKind::Conformal => "conformal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Generator names the failing identity was evaluated on.
    pub generators: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}): {}", self.kind, self.generators.join(", "), self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn of_kind(&self, kind: ViolationKind) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, generators: &[&str], detail: String) {
        self.violations.push(Violation {
            kind,
            generators: generators.iter().map(|s| s.to_string()).collect(),
            detail,
        });
    }
}

/// The `λ^t` coefficient of an arity-one polynomial, as a polynomial in `∂`.
pub fn lambda_coefficient(p: &MultiPoly, t: u32) -> MultiPoly {
    MultiPoly::from_terms(
        0,
        p.terms()
            .filter(|(m, _)| m.lambda_exp(0) == t)
            .map(|(m, c)| (Monomial::new(m.partial_exp(), &[]), c.clone())),
    )
}

fn lift(p: &MultiPoly, partial: &MultiPoly, lambda: &MultiPoly) -> MultiPoly {
    p.compose(partial, std::slice::from_ref(lambda))
}

/// Checks `[L_λ L] = (∂+2λ)L`, `L_(0) = ∂` and that `L_(1)` is diagonal
/// with the declared weights.
pub fn check_virasoro(spec: &LcaSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = spec.virasoro;
    let lname = spec.generator_name(v);
    let expected_ll = &MultiPoly::partial(1) + &MultiPoly::lambda(1, 0).scale(&int(2));
    for (k, p) in spec.bracket(v, v).iter().enumerate() {
        let want = if k == v { expected_ll.clone() } else { MultiPoly::zero(1) };
        if *p != want {
            report.push(
                ViolationKind::Virasoro,
                &[lname, lname],
                format!("coefficient of {} is {}, expected {}", spec.generator_name(k), p, want),
            );
        }
    }
    for j in 0..spec.rank() {
        let gname = spec.generator_name(j);
        report.merge(check_lowest_coefficients(
            spec.bracket(v, j),
            j,
            spec.weight(j),
            &[lname, gname],
            |k| spec.generator_name(k).to_string(),
        ));
    }
    report
}

fn check_lowest_coefficients(
    row: &[MultiPoly],
    j: usize,
    weight: &Rational,
    names: &[&str],
    gen_name: impl Fn(usize) -> String,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (k, p) in row.iter().enumerate() {
        let c0 = lambda_coefficient(p, 0);
        let want0 = if k == j { MultiPoly::partial(0) } else { MultiPoly::zero(0) };
        if c0 != want0 {
            report.push(
                ViolationKind::Virasoro,
                names,
                format!("λ^0 coefficient on {} is {}, expected {}", gen_name(k), c0, want0),
            );
        }
        let c1 = lambda_coefficient(p, 1);
        let want1 = if k == j {
            MultiPoly::constant(0, weight.clone())
        } else {
            MultiPoly::zero(0)
        };
        if c1 != want1 {
            report.push(
                ViolationKind::Virasoro,
                names,
                format!("λ^1 coefficient on {} is {}, expected {}", gen_name(k), c1, want1),
            );
        }
    }
    report
}

/// Every monomial `∂^s λ^t` of `P_ijk` must have `s + t + Δ_k = Δ_i + Δ_j - 1`.
pub fn check_weight_homogeneity(spec: &LcaSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    for i in 0..spec.rank() {
        for j in 0..spec.rank() {
            for (k, p) in spec.bracket(i, j).iter().enumerate() {
                let want = spec.weight(i) + spec.weight(j) - Rational::one() - spec.weight(k);
                if let Some((m, _)) = p.terms().find(|(m, _)| int(m.total_degree() as i64) != want) {
                    report.push(
                        ViolationKind::WeightHomogeneity,
                        &[spec.generator_name(i), spec.generator_name(j), spec.generator_name(k)],
                        format!("monomial of degree {} in {}, expected degree {}", m.total_degree(), p, want),
                    );
                }
            }
        }
    }
    report
}

/// `[a_λ b] = -[b_{-λ-∂} a]` for every unordered pair of generators.
pub fn check_skew_symmetry(spec: &LcaSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let minus_l_minus_d = -(&MultiPoly::lambda(1, 0) + &MultiPoly::partial(1));
    for i in 0..spec.rank() {
        for j in i..spec.rank() {
            for k in 0..spec.rank() {
                let reflected = -spec.bracket(j, i)[k].substitute_lambda(0, &minus_l_minus_d).expect("arity 1");
                let actual = &spec.bracket(i, j)[k];
                if reflected != *actual {
                    report.push(
                        ViolationKind::SkewSymmetry,
                        &[spec.generator_name(i), spec.generator_name(j)],
                        format!(
                            "coefficient of {}: [{}_λ {}] = {} but -[{}_(-λ-∂) {}] = {}",
                            spec.generator_name(k),
                            spec.generator_name(i),
                            spec.generator_name(j),
                            actual,
                            spec.generator_name(j),
                            spec.generator_name(i),
                            reflected
                        ),
                    );
                    break;
                }
            }
        }
    }
    report
}

// Arity-two context: λ is slot 0, μ is slot 1.
struct TwoVar {
    d: MultiPoly,
    l: MultiPoly,
    m: MultiPoly,
}

impl TwoVar {
    fn new() -> Self {
        TwoVar {
            d: MultiPoly::partial(2),
            l: MultiPoly::lambda(2, 0),
            m: MultiPoly::lambda(2, 1),
        }
    }
}

/// `[a_λ [b_μ c]] = [[a_λ b]_{λ+μ} c] + [b_μ [a_λ c]]` for every triple.
pub fn check_jacobi(spec: &LcaSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = TwoVar::new();
    let n = spec.rank();
    let d_plus_l = &v.d + &v.l;
    let d_plus_m = &v.d + &v.m;
    let l_plus_m = &v.l + &v.m;
    let minus_l_m = -l_plus_m.clone();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut lhs = vec![MultiPoly::zero(2); n];
                let mut rhs = vec![MultiPoly::zero(2); n];
                for mid in 0..n {
                    // [a_λ (p(∂) x_mid)] = p(∂+λ) [a_λ x_mid]
                    let p = lift(&spec.bracket(b, c)[mid], &d_plus_l, &v.m);
                    if !p.is_zero() {
                        for (r, out) in lhs.iter_mut().enumerate() {
                            *out = &*out + &(&p * &lift(&spec.bracket(a, mid)[r], &v.d, &v.l));
                        }
                    }
                    // [(p(∂) x_mid)_{λ+μ} c] = p(-λ-μ) [x_mid_{λ+μ} c]
                    let p = lift(&spec.bracket(a, b)[mid], &minus_l_m, &v.l);
                    if !p.is_zero() {
                        for (r, out) in rhs.iter_mut().enumerate() {
                            *out = &*out + &(&p * &lift(&spec.bracket(mid, c)[r], &v.d, &l_plus_m));
                        }
                    }
                    // [b_μ (p(∂) x_mid)] = p(∂+μ) [b_μ x_mid]
                    let p = lift(&spec.bracket(a, c)[mid], &d_plus_m, &v.l);
                    if !p.is_zero() {
                        for (r, out) in rhs.iter_mut().enumerate() {
                            *out = &*out + &(&p * &lift(&spec.bracket(b, mid)[r], &v.d, &v.m));
                        }
                    }
                }
                if let Some(r) = (0..n).find(|&r| lhs[r] != rhs[r]) {
                    let names = ["d", "λ", "μ"];
                    report.push(
                        ViolationKind::Jacobi,
                        &[spec.generator_name(a), spec.generator_name(b), spec.generator_name(c)],
                        format!(
                            "coefficient of {}: lhs {} vs rhs {}",
                            spec.generator_name(r),
                            lhs[r].format_with(&names),
                            rhs[r].format_with(&names)
                        ),
                    );
                }
            }
        }
    }
    report
}

/// `a_λ(b_μ m) - b_μ(a_λ m) = [a_λ b]_{λ+μ} m` for all generator pairs and
/// module generators.
pub fn check_module_axioms(alg: &LcaSpec, module: &ModuleSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = TwoVar::new();
    let n = alg.rank();
    let l = module.rank();
    let (shift_l, shift_m) = if module.partial_is_zero {
        (v.l.clone(), v.m.clone())
    } else {
        (&v.d + &v.l, &v.d + &v.m)
    };
    let l_plus_m = &v.l + &v.m;
    let minus_l_m = -l_plus_m.clone();
    for a in 0..n {
        for b in 0..n {
            for k in 0..l {
                let mut lhs = vec![MultiPoly::zero(2); l];
                let mut rhs = vec![MultiPoly::zero(2); l];
                for s in 0..l {
                    let p = lift(&module.action(b, k)[s], &shift_l, &v.m);
                    if !p.is_zero() {
                        for (r, out) in lhs.iter_mut().enumerate() {
                            *out = &*out + &(&p * &lift(&module.action(a, s)[r], &v.d, &v.l));
                        }
                    }
                    let p = lift(&module.action(a, k)[s], &shift_m, &v.l);
                    if !p.is_zero() {
                        for (r, out) in lhs.iter_mut().enumerate() {
                            *out = &*out - &(&p * &lift(&module.action(b, s)[r], &v.d, &v.m));
                        }
                    }
                }
                for mid in 0..n {
                    let p = lift(&alg.bracket(a, b)[mid], &minus_l_m, &v.l);
                    if !p.is_zero() {
                        for (r, out) in rhs.iter_mut().enumerate() {
                            *out = &*out + &(&p * &lift(&module.action(mid, k)[r], &v.d, &l_plus_m));
                        }
                    }
                }
                if module.partial_is_zero {
                    lhs.iter_mut().for_each(|p| *p = p.drop_partial());
                    rhs.iter_mut().for_each(|p| *p = p.drop_partial());
                }
                if let Some(r) = (0..l).find(|&r| lhs[r] != rhs[r]) {
                    let names = ["d", "λ", "μ"];
                    report.push(
                        ViolationKind::ModuleAxiom,
                        &[alg.generator_name(a), alg.generator_name(b), module.generator_name(k)],
                        format!(
                            "coefficient of {}: lhs {} vs rhs {}",
                            module.generator_name(r),
                            lhs[r].format_with(&names),
                            rhs[r].format_with(&names)
                        ),
                    );
                }
            }
        }
    }
    report
}

/// Weight homogeneity of `Q_ikj`: `s + t + Δ(m_j) = Δ(a_i) + Δ(m_k) - 1`.
pub fn check_module_homogeneity(alg: &LcaSpec, module: &ModuleSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    for i in 0..alg.rank() {
        for k in 0..module.rank() {
            for (j, p) in module.action(i, k).iter().enumerate() {
                let want = alg.weight(i) + module.weight(k) - Rational::one() - module.weight(j);
                if let Some((m, _)) = p.terms().find(|(m, _)| int(m.total_degree() as i64) != want) {
                    report.push(
                        ViolationKind::WeightHomogeneity,
                        &[alg.generator_name(i), module.generator_name(k), module.generator_name(j)],
                        format!("monomial of degree {} in {}, expected degree {}", m.total_degree(), p, want),
                    );
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("module is not conformal at generator `{generator}`: {detail}")]
pub struct ConformalViolation {
    pub generator: String,
    pub detail: String,
}

/// Confirms `L_(0)^M = ∂^M` and that `L_(1)^M` is diagonal on the module
/// generators; returns the weights read off from `L_(1)^M`. Terms of order
/// `λ^2` and higher are allowed.
pub fn check_conformal(alg: &LcaSpec, module: &ModuleSpec) -> Result<Vec<Rational>, ConformalViolation> {
    let v = alg.virasoro_index();
    let mut weights = Vec::with_capacity(module.rank());
    for k in 0..module.rank() {
        let row = module.action(v, k);
        let name = module.generator_name(k).to_string();
        if module.partial_is_zero {
            if row.iter().any(|p| !p.is_zero()) {
                return Err(ConformalViolation {
                    generator: name,
                    detail: "L must act by zero on a module with ∂ = 0".into(),
                });
            }
            weights.push(Rational::zero());
            continue;
        }
        let mut weight = None;
        for (j, p) in row.iter().enumerate() {
            let c0 = lambda_coefficient(p, 0);
            let want0 = if j == k { MultiPoly::partial(0) } else { MultiPoly::zero(0) };
            if c0 != want0 {
                return Err(ConformalViolation {
                    generator: name,
                    detail: format!(
                        "L_(0) on {} has coefficient {} on {}, expected {}",
                        module.generator_name(k),
                        c0,
                        module.generator_name(j),
                        want0
                    ),
                });
            }
            let c1 = lambda_coefficient(p, 1);
            if j == k {
                if !c1.is_partial_free() {
                    return Err(ConformalViolation {
                        generator: name,
                        detail: format!("L_(1) coefficient {c1} is not a scalar"),
                    });
                }
                weight = Some(c1.coefficient(&Monomial::one(0)));
            } else if !c1.is_zero() {
                return Err(ConformalViolation {
                    generator: name,
                    detail: format!(
                        "L_(1) is not diagonal: {} appears with {}",
                        module.generator_name(j),
                        c1
                    ),
                });
            }
        }
        let weight = weight.unwrap_or_else(Rational::zero);
        if &weight != module.weight(k) {
            return Err(ConformalViolation {
                generator: name,
                detail: format!("L_(1) eigenvalue {} differs from declared weight {}", weight, module.weight(k)),
            });
        }
        weights.push(weight);
    }
    Ok(weights)
}

/// Every algebra-level check.
pub fn validate_algebra(spec: &LcaSpec) -> ValidationReport {
    let mut report = check_virasoro(spec);
    report.merge(check_weight_homogeneity(spec));
    report.merge(check_skew_symmetry(spec));
    report.merge(check_jacobi(spec));
    report
}

/// Module axioms, homogeneity and conformality.
pub fn validate_module(alg: &LcaSpec, module: &ModuleSpec) -> ValidationReport {
    let mut report = check_module_axioms(alg, module);
    report.merge(check_module_homogeneity(alg, module));
    if let Err(e) = check_conformal(alg, module) {
        report.push(ViolationKind::Conformal, &[&e.generator], e.detail);
    }
    report
}
