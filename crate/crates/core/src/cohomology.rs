//! Basic and reduced cohomology, the vanishing bound, and Casimir elements.
//!
//! Basic cohomology is computed on weight-zero cochains only: the energy
//! operator is contractible by `τ` away from weight zero. Reduced classes are
//! the basic classes at `q` pushed to the quotient by `∂`, together with
//! `τ(∂g)` for the basic classes `g` at `q+1`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{self, ConformalViolation, LcaSpec, ModuleSpec, ValidationReport};
use crate::calculus::{differential, rank_one_alpha_vanishing, tau, RankOneVerdict};
use crate::cochain::{ansatz, ansatz_weight_zero, AnsatzSpace, Cochain, ModuleValue, RowIndex, WeightTag};
use crate::exactpoly::rational::floor_half_sum_sqrt;
use crate::exactpoly::{int, Monomial, MultiPoly, Rational};
use crate::linalg::{coefficient_matrix, image_subspace, kernel_basis, quotient_basis, QMatrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("input failed validation:\n{}", render_violations(.0))]
    Validation(ValidationReport),
    #[error("{0}; only the rank-one shifted action (∂+α+Δλ with α ≠ 0) is supported for non-conformal modules")]
    NonConformal(ConformalViolation),
    #[error("integrity check failed: {0}")]
    Integrity(String),
}

fn render_violations(r: &ValidationReport) -> String {
    r.violations.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingBound {
    pub n: usize,
    /// Largest generator weight.
    pub u: Rational,
    /// Smallest module weight.
    pub v: Rational,
    pub discriminant: Rational,
    pub bound: usize,
}

/// Weight-zero cochains of degree `q ≥ 1` need `q² + (1-2u)nq + 2nv ≤ 0`.
pub fn vanishing_bound(alg: &LcaSpec, module: &ModuleSpec) -> VanishingBound {
    let n = alg.rank();
    let u = alg.generators().iter().map(|g| g.weight.clone()).max().expect("nonempty");
    let v = module.generators().iter().map(|g| g.weight.clone()).min().expect("nonempty");
    let nr = int(n as i64);
    let b = &nr - int(2) * &nr * &u;
    let discriminant = &b * &b - int(8) * &nr * &v;
    let bound = if discriminant.is_negative() {
        0
    } else {
        let top = floor_half_sum_sqrt(&-b, &discriminant);
        if top.is_negative() {
            0
        } else {
            top.to_usize().expect("bound fits in usize")
        }
    };
    VanishingBound {
        n,
        u,
        v,
        discriminant,
        bound,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    Basic,
    /// A basic class pushed to the reduced complex.
    ReducedProjection,
    /// `τ(∂g)` for a basic class `g` one degree up.
    ReducedPreimage,
    /// A Casimir element, the degree-zero reduced classes.
    Casimir,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    pub representative: Cochain,
    pub kind: ClassKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeRecord {
    pub q: usize,
    pub basic: Vec<CohomologyClass>,
    /// `None` where the reduced complex was not computed.
    pub reduced: Option<Vec<CohomologyClass>>,
    /// Dimension of the weight-zero ansatz space at this degree.
    pub ansatz_dim: usize,
}

impl DegreeRecord {
    pub fn basic_dim(&self) -> usize {
        self.basic.len()
    }

    pub fn reduced_dim(&self) -> Option<usize> {
        self.reduced.as_ref().map(|r| r.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub algebra: String,
    pub module: String,
    pub bound: VanishingBound,
    pub degrees: Vec<DegreeRecord>,
    pub casimir: Vec<ModuleValue>,
    pub validation: ValidationReport,
    /// Set when the rank-one shifted criterion decided the answer.
    pub vanishing: Option<RankOneVerdict>,
    pub module_is_adjoint: bool,
}

impl CohomologyReport {
    pub fn degree(&self, q: usize) -> Option<&DegreeRecord> {
        self.degrees.iter().find(|d| d.q == q)
    }

    pub fn basic_dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.basic_dim()).collect()
    }

    pub fn reduced_dims(&self) -> Vec<Option<usize>> {
        self.degrees.iter().map(|d| d.reduced_dim()).collect()
    }
}

/// Which degrees to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeSelection {
    /// `0..=N+1` for basic, `0..=N` for reduced.
    All,
    Single(usize),
}

/// Ensures the pair is something the pipeline can handle; returns the merged
/// validation report.
pub fn validate_pair(alg: &LcaSpec, module: &ModuleSpec) -> Result<ValidationReport, CohomologyError> {
    let report = algebra::validate_algebra(alg);
    if !report.is_clean() {
        return Err(CohomologyError::Validation(report));
    }
    algebra::check_conformal(alg, module).map_err(CohomologyError::NonConformal)?;
    let mut report = algebra::check_module_axioms(alg, module);
    report.merge(algebra::check_module_homogeneity(alg, module));
    if !report.is_clean() {
        return Err(CohomologyError::Validation(report));
    }
    Ok(report)
}

/// The quotient by the image of `∂`, normalized so that equal classes have
/// equal normal forms: `∂ ↦ -Σλ`, or for a module with `∂ = 0` (where `∂`
/// acts on cochains as `Σλ`) `λ_q ↦ -(λ_1 + ... + λ_{q-1})`.
pub fn reduced_normal_form(module: &ModuleSpec, f: &Cochain) -> Cochain {
    let q = f.degree();
    if !module.partial_is_zero() {
        return f.map_values(|p| p.reduce_mod_total());
    }
    if q == 0 {
        return f.clone();
    }
    let others = &-MultiPoly::lambda_sum(q) + &MultiPoly::lambda(q, q - 1);
    f.map_values(|p| p.substitute_lambda(q - 1, &others).expect("slot"))
}

/// The displayed reduced representative: `∂ ↦ -Σλ`.
pub fn reduced_display_form(f: &Cochain) -> Cochain {
    f.map_values(|p| p.reduce_mod_total())
}

/// Constant combinations `Σ c_k m_k` with `a_i λ m` divisible by `∂+λ` for
/// every generator, i.e. vanishing under `∂ ↦ -λ`.
///
/// Constants suffice: modulo `∂M` every element is congruent to a constant
/// combination, since `∂^k m_j` with `k ≥ 1` lies in `∂M`.
pub fn casimir_basis(alg: &LcaSpec, module: &ModuleSpec) -> Vec<ModuleValue> {
    let l = module.rank();
    let minus_l = -MultiPoly::lambda(1, 0);
    let lam = MultiPoly::lambda(1, 0);
    // equations indexed by (generator, target component, monomial)
    let mut equations: BTreeMap<(usize, usize, Monomial), Vec<Rational>> = BTreeMap::new();
    for i in 0..alg.rank() {
        for k in 0..l {
            for (j, p) in module.action(i, k).iter().enumerate() {
                let at = if module.partial_is_zero() {
                    p.clone()
                } else {
                    p.compose(&minus_l, std::slice::from_ref(&lam))
                };
                for (m, c) in at.terms() {
                    let row = equations
                        .entry((i, j, m.clone()))
                        .or_insert_with(|| vec![Rational::zero(); l]);
                    row[k] += c;
                }
            }
        }
    }
    let matrix = QMatrix::from_rows(equations.into_values().collect(), l);
    kernel_basis(&matrix)
        .basis()
        .iter()
        .map(|v| ModuleValue::new(v.iter().map(|c| MultiPoly::constant(0, c.clone())).collect()))
        .collect()
}

fn integrity(msg: impl Into<String>) -> CohomologyError {
    CohomologyError::Integrity(msg.into())
}

/// Weight-zero spaces and matrices of `d` between them.
struct WeightZeroComplex {
    spaces: BTreeMap<usize, AnsatzSpace>,
    /// `d_q : A_q → A_{q+1}` in ansatz coordinates.
    d: BTreeMap<usize, QMatrix>,
}

impl WeightZeroComplex {
    fn build(alg: &LcaSpec, module: &ModuleSpec, top: usize) -> Result<Self, CohomologyError> {
        let spaces: BTreeMap<usize, AnsatzSpace> = (0..=top + 1)
            .into_par_iter()
            .map(|q| (q, ansatz_weight_zero(alg, module, q)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        let d: Vec<(usize, QMatrix)> = (0..=top)
            .into_par_iter()
            .map(|q| {
                let m = coefficient_matrix(spaces[&q].basis(), |f| differential(alg, module, f), &spaces[&(q + 1)])
                    .map_err(|e| integrity(format!("d at degree {q}: {e}")))?;
                Ok((q, m))
            })
            .collect::<Result<_, CohomologyError>>()?;
        let d: BTreeMap<usize, QMatrix> = d.into_iter().collect();
        for q in 1..=top {
            if !d[&q].mul(&d[&(q - 1)]).is_zero() {
                return Err(integrity(format!("d∘d ≠ 0 from degree {}", q - 1)));
            }
        }
        Ok(WeightZeroComplex { spaces, d })
    }

    fn image(&self, q: usize) -> Subspace {
        match q.checked_sub(1) {
            None => Subspace::zero(self.spaces[&0].dim()),
            Some(p) => image_subspace(&self.d[&p]),
        }
    }

    fn basic(&self, alg: &LcaSpec, module: &ModuleSpec, q: usize) -> Result<Vec<Cochain>, CohomologyError> {
        let kernel = kernel_basis(&self.d[&q]);
        let image = self.image(q);
        let reps = quotient_basis(&kernel, &image).map_err(|e| integrity(format!("degree {q}: {e}")))?;
        let space = &self.spaces[&q];
        let mut out = Vec::with_capacity(reps.len());
        for v in &reps {
            if image.contains(v) {
                return Err(integrity(format!("degree {q}: representative is a coboundary")));
            }
            let f = space.combine(v).normalized();
            if !differential(alg, module, &f).is_zero() {
                return Err(integrity(format!("degree {q}: representative is not a cocycle")));
            }
            if !matches!(f.weight(alg, module), WeightTag::Pure(ref r) if r.is_zero()) {
                return Err(integrity(format!("degree {q}: representative is not of weight zero")));
            }
            out.push(f);
        }
        Ok(out)
    }

    /// `d` applied to the basis of `A_{q-1}`, read back as cochains.
    fn coboundaries(&self, q: usize) -> Vec<Cochain> {
        let Some(p) = q.checked_sub(1) else {
            return Vec::new();
        };
        let m = &self.d[&p];
        let target = &self.spaces[&q];
        (0..m.cols())
            .map(|j| {
                let col: Vec<Rational> = (0..m.rows()).map(|i| m.get(i, j).clone()).collect();
                target.combine(&col)
            })
            .collect()
    }
}

type SparseKey = (RowIndex, usize, Monomial);

fn sparse(f: &Cochain) -> BTreeMap<SparseKey, Rational> {
    let mut out = BTreeMap::new();
    for (row, v) in f.rows() {
        for (j, p) in v.components().iter().enumerate() {
            for (m, c) in p.terms() {
                out.insert((row.clone(), j, m.clone()), c.clone());
            }
        }
    }
    out
}

/// Dense coordinates of several cochains over the union of their terms.
fn densify(cochains: &[&Cochain]) -> Vec<Vec<Rational>> {
    let sparse: Vec<BTreeMap<SparseKey, Rational>> = cochains.iter().map(|f| sparse(f)).collect();
    let keys: BTreeSet<&SparseKey> = sparse.iter().flat_map(|s| s.keys()).collect();
    let index: BTreeMap<&SparseKey, usize> = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    sparse
        .iter()
        .map(|s| {
            let mut v = vec![Rational::zero(); index.len()];
            for (k, c) in s {
                v[index[k]] = c.clone();
            }
            v
        })
        .collect()
}

fn reduced_classes(
    alg: &LcaSpec,
    module: &ModuleSpec,
    complex: &WeightZeroComplex,
    q: usize,
    basic_here: &[Cochain],
    basic_above: &[Cochain],
) -> Result<Vec<CohomologyClass>, CohomologyError> {
    let mut candidates = Vec::new();
    for f in basic_here {
        candidates.push((f.clone(), ClassKind::ReducedProjection));
    }
    for g in basic_above {
        let dg = g.apply_partial(module);
        let h = tau(alg, module, &dg);
        if differential(alg, module, &h) != dg {
            return Err(integrity(format!("degree {q}: d(τ∂g) ≠ ∂g")));
        }
        candidates.push((h, ClassKind::ReducedPreimage));
    }
    if candidates.is_empty() {
        return Ok(Vec::new());
    }

    // reduced coboundaries of weights 0 and 1
    let mut bounds: Vec<Cochain> = complex.coboundaries(q);
    if q >= 1 {
        let space = ansatz(alg, module, q - 1, &Rational::one());
        let extra: Vec<Cochain> = space.basis().par_iter().map(|b| differential(alg, module, b)).collect();
        bounds.extend(extra);
    }
    let bounds: Vec<Cochain> = bounds.iter().map(|b| reduced_normal_form(module, b)).collect();
    let reduced: Vec<Cochain> = candidates.iter().map(|(f, _)| reduced_normal_form(module, f)).collect();

    let mut all: Vec<&Cochain> = bounds.iter().collect();
    all.extend(reduced.iter());
    let dense = densify(&all);
    let ambient = dense.first().map_or(0, |v| v.len());
    let mut span = Subspace::span(ambient, &dense[..bounds.len()]);
    for (i, v) in dense[bounds.len()..].iter().enumerate() {
        if span.insert(v).is_none() {
            return Err(integrity(format!(
                "degree {q}: reduced class {} depends on the others modulo coboundaries",
                i + 1
            )));
        }
    }
    Ok(candidates
        .into_iter()
        .map(|(f, kind)| CohomologyClass {
            representative: reduced_display_form(&f).normalized(),
            kind,
        })
        .collect())
}

fn empty_degree(q: usize, reduced: bool) -> DegreeRecord {
    DegreeRecord {
        q,
        basic: Vec::new(),
        reduced: reduced.then(Vec::new),
        ansatz_dim: 0,
    }
}

/// Runs the whole pipeline for the selected degrees.
pub fn compute(
    alg: &LcaSpec,
    module: &ModuleSpec,
    selection: DegreeSelection,
    want_reduced: bool,
) -> Result<CohomologyReport, CohomologyError> {
    let bound = vanishing_bound(alg, module);
    let module_is_adjoint = module.action_table() == alg.bracket_table()
        && module.generators() == alg.generators()
        && !module.partial_is_zero();
    let mut report = CohomologyReport {
        algebra: alg.name().to_string(),
        module: module.name().to_string(),
        bound: bound.clone(),
        degrees: Vec::new(),
        casimir: Vec::new(),
        validation: ValidationReport::default(),
        vanishing: None,
        module_is_adjoint,
    };
    let (basic_degrees, reduced_top): (Vec<usize>, usize) = match selection {
        DegreeSelection::All => ((0..=bound.bound + 1).collect(), bound.bound),
        DegreeSelection::Single(q) => (vec![q], q),
    };

    let verdict = rank_one_alpha_vanishing(alg, module);
    if verdict.applies() {
        let mut v = algebra::validate_algebra(alg);
        v.merge(algebra::check_module_axioms(alg, module));
        if !v.is_clean() {
            return Err(CohomologyError::Validation(v));
        }
        report.validation = v;
        report.degrees = basic_degrees
            .iter()
            .map(|&q| empty_degree(q, want_reduced && q <= reduced_top))
            .collect();
        report.vanishing = Some(verdict);
        return Ok(report);
    }
    report.validation = validate_pair(alg, module)?;

    let max_basic = *basic_degrees.last().expect("nonempty");
    let needed_basic_top = if want_reduced { max_basic.max(reduced_top + 1) } else { max_basic };
    let complex = WeightZeroComplex::build(alg, module, needed_basic_top)?;

    let mut basic: BTreeMap<usize, Vec<Cochain>> = BTreeMap::new();
    let lo = basic_degrees[0];
    let computed: Vec<(usize, Vec<Cochain>)> = (lo..=needed_basic_top)
        .into_par_iter()
        .map(|q| complex.basic(alg, module, q).map(|b| (q, b)))
        .collect::<Result<_, _>>()?;
    basic.extend(computed);

    if selection == DegreeSelection::All && !basic[&(bound.bound + 1)].is_empty() {
        return Err(integrity(format!(
            "basic cohomology nonzero at degree {} beyond the bound",
            bound.bound + 1
        )));
    }

    let reduced: BTreeMap<usize, Vec<CohomologyClass>> = if want_reduced {
        basic_degrees
            .par_iter()
            .filter(|&&q| q >= 1 && q <= reduced_top)
            .map(|&q| reduced_classes(alg, module, &complex, q, &basic[&q], &basic[&(q + 1)]).map(|r| (q, r)))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .collect()
    } else {
        BTreeMap::new()
    };

    if want_reduced && basic_degrees.contains(&0) {
        report.casimir = casimir_basis(alg, module);
    }

    for &q in &basic_degrees {
        let reduced = if !want_reduced || q > reduced_top {
            None
        } else if q == 0 {
            Some(
                report
                    .casimir
                    .iter()
                    .map(|m| CohomologyClass {
                        representative: Cochain::from_element(alg.rank(), m.clone()),
                        kind: ClassKind::Casimir,
                    })
                    .collect(),
            )
        } else {
            Some(reduced[&q].clone())
        };
        if let Some(r) = &reduced {
            if q >= 1 && r.len() != basic[&q].len() + basic[&(q + 1)].len() {
                return Err(integrity(format!("dimension formula fails at degree {q}")));
            }
        }
        report.degrees.push(DegreeRecord {
            q,
            basic: basic[&q]
                .iter()
                .map(|f| CohomologyClass {
                    representative: f.clone(),
                    kind: ClassKind::Basic,
                })
                .collect(),
            reduced,
            ansatz_dim: complex.spaces[&q].dim(),
        });
    }
    Ok(report)
}

pub fn full_report(alg: &LcaSpec, module: &ModuleSpec) -> Result<CohomologyReport, CohomologyError> {
    compute(alg, module, DegreeSelection::All, true)
}

pub fn basic_cohomology(alg: &LcaSpec, module: &ModuleSpec, q: usize) -> Result<Vec<CohomologyClass>, CohomologyError> {
    let r = compute(alg, module, DegreeSelection::Single(q), false)?;
    Ok(r.degrees.into_iter().next().expect("one degree").basic)
}

pub fn reduced_cohomology(alg: &LcaSpec, module: &ModuleSpec, q: usize) -> Result<Vec<CohomologyClass>, CohomologyError> {
    let r = compute(alg, module, DegreeSelection::Single(q), true)?;
    Ok(r.degrees.into_iter().next().expect("one degree").reduced.expect("reduced requested"))
}

/// Kinds of validation problem found, for summaries.
pub fn violation_kinds(r: &ValidationReport) -> BTreeSet<String> {
    r.violations.iter().map(|v| v.kind.to_string()).collect()
}

/// The number of nonzero basic degrees; handy in tests.
pub fn total_basic(report: &CohomologyReport) -> usize {
    report.basic_dims().iter().sum()
}
