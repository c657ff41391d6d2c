//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use common::props::*;
use common::{adjoint, basic_span, entered, preset, reduced_span, wb};
use lcacohom::algebra::{check_jacobi, check_module_axioms, check_skew_symmetry, validate_algebra, LcaSpec, ModuleSpec};
use lcacohom::cli::render::format_value;
use lcacohom::cli::run_with;
use lcacohom::cochain::Cochain;
use lcacohom::cohomology::{full_report, CohomologyReport};
use lcacohom::exactpoly::{int, rat, MultiPoly};
use lcacohom::presets::{self, PresetParams};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report(alg: &LcaSpec, module: &ModuleSpec) -> CohomologyReport {
    full_report(alg, module).unwrap_or_else(|e| panic!("{}: {e}", alg.name()))
}

fn reduced_dims(r: &CohomologyReport) -> Vec<usize> {
    r.reduced_dims().into_iter().flatten().collect()
}

/// Table data: per degree, the basis elements as printed, one string per
/// element with `;` between rows.
struct Table<'a> {
    reduced: bool,
    degrees: &'a [(usize, &'a [&'a str])],
}

fn check_table(alg: &LcaSpec, module: &ModuleSpec, r: &CohomologyReport, t: &Table<'_>) -> Result<usize, String> {
    let mut checked = 0;
    for &(q, elements) in t.degrees {
        let d = r.degree(q).ok_or_else(|| format!("degree {q} not computed"))?;
        let computed: Vec<Cochain> = if t.reduced {
            d.reduced.as_ref().expect("reduced").iter().map(|c| c.representative.clone()).collect()
        } else {
            d.basic.iter().map(|c| c.representative.clone()).collect()
        };
        let given: Vec<Cochain> = elements.iter().map(|s| entered(alg, module, s)).collect();
        let v = if t.reduced {
            reduced_span(alg, module, q, &computed, &given)
        } else {
            basic_span(alg, module, q, &computed, &given)
        };
        ensure(v.ok(), || {
            let kind = if t.reduced { "reduced" } else { "basic" };
            format!("{} {kind} q = {q}: {v:?}", alg.name())
        })?;
        checked += elements.len();
    }
    Ok(checked)
}

fn adjoint_case(
    name: &str,
    params: PresetParams,
    basic: &[usize],
    reduced: &[usize],
    tables: &[Table<'_>],
) -> Outcome {
    let (alg, module) = preset(&params);
    let r = report(&alg, &module);
    let b = r.basic_dims();
    ensure(b.starts_with(basic) && b[basic.len()..].iter().all(|&x| x == 0), || {
        format!("{name} basic dims {b:?}, expected {basic:?} then zeros")
    })?;
    let red = reduced_dims(&r);
    ensure(red.starts_with(reduced) && red[reduced.len()..].iter().all(|&x| x == 0), || {
        format!("{name} reduced dims {red:?}, expected {reduced:?} then zeros")
    })?;
    let mut checked = 0;
    for t in tables {
        checked += check_table(&alg, &module, &r, t)?;
    }
    Ok(format!("basic {b:?}, reduced {red:?}, {checked} tabulated elements verified"))
}

fn criterion_1() -> Outcome {
    let (alg, module) = wb(0);
    // The same entry written on the row L⊗L is not skew in λ₁, λ₂.
    let misprint = entered(&alg, &module, "L⊗L ↦ H*(∂+λ₂)");
    ensure(!misprint.is_block_antisymmetric(), || "L⊗L ↦ H*(∂+λ₂) unexpectedly skew".into())?;
    adjoint_case(
        "W(0)",
        PresetParams::wb(int(0)),
        &[0, 1, 2, 1, 0, 0],
        &[1, 3, 3, 1, 0],
        &[
            Table {
                reduced: false,
                degrees: &[
                    (0, &[]),
                    (1, &["L ↦ H"]),
                    (2, &["L⊗H ↦ H", "L⊗L ↦ H*(λ₁−λ₂)"]),
                    (3, &["L⊗L⊗H ↦ H*(λ₁−λ₂)"]),
                ],
            },
            Table {
                reduced: true,
                degrees: &[
                    (0, &["H"]),
                    (1, &["L ↦ H", "H ↦ H", "L ↦ ∂*H"]),
                    (2, &["L⊗H ↦ H", "L⊗L ↦ H*(λ₁−λ₂)", "L⊗H ↦ H*(∂+λ₂)"]),
                    (3, &["L⊗L⊗H ↦ H*(λ₁−λ₂)"]),
                ],
            },
        ],
    )
}

fn criterion_2() -> Outcome {
    adjoint_case(
        "W(1)",
        PresetParams::wb(int(1)),
        &[0, 0, 2, 2, 0],
        &[0, 2, 4, 2, 0],
        &[
            Table {
                reduced: false,
                degrees: &[
                    (2, &["L⊗H ↦ H", "L⊗L ↦ H*(λ₁^2−λ₂^2)"]),
                    (3, &["L⊗L⊗H ↦ H*(λ₁−λ₂)", "L⊗L⊗L ↦ H*(λ₁−λ₂)*(λ₁−λ₃)*(λ₂−λ₃)"]),
                ],
            },
            Table {
                reduced: true,
                degrees: &[
                    (1, &["H ↦ H", "L ↦ −H*λ₁^2"]),
                    (
                        2,
                        &["L⊗H ↦ H", "L⊗L ↦ H*(λ₁^2−λ₂^2)", "L⊗H ↦ H*(∂+λ₂)", "L⊗L ↦ H*λ₁*λ₂*(λ₁−λ₂)"],
                    ),
                    (3, &["L⊗L⊗H ↦ H*(λ₁−λ₂)", "L⊗L⊗L ↦ H*(λ₁−λ₂)*(λ₁−λ₃)*(λ₂−λ₃)"]),
                ],
            },
        ],
    )
}

fn criterion_3() -> Outcome {
    adjoint_case(
        "W(-1)",
        PresetParams::wb(int(-1)),
        &[0, 0, 1, 2, 1, 0],
        &[0, 1, 3, 3, 1],
        &[
            Table {
                reduced: false,
                degrees: &[
                    (2, &["L⊗H ↦ H"]),
                    (3, &["L⊗H⊗H ↦ L*(λ₂−λ₃)", "L⊗L⊗H ↦ H*(λ₁−λ₂)"]),
                    (4, &["L⊗L⊗H⊗H ↦ L*(λ₁−λ₂)*(λ₃−λ₄)"]),
                ],
            },
            Table {
                reduced: true,
                degrees: &[
                    (1, &["H ↦ H"]),
                    (2, &["L⊗H ↦ H", "H⊗H ↦ L*(λ₁−λ₂)", "L⊗H ↦ H*(∂+λ₂)"]),
                    (
                        3,
                        &["L⊗H⊗H ↦ L*(λ₂−λ₃)", "L⊗L⊗H ↦ H*(λ₁−λ₂)", "L⊗H⊗H ↦ L*(λ₂−λ₃)*(−λ₁)"],
                    ),
                    (4, &["L⊗L⊗H⊗H ↦ L*(λ₁−λ₂)*(λ₃−λ₄)"]),
                ],
            },
        ],
    )
}

fn criterion_4() -> Outcome {
    let f21 = "L⊗M ↦ M; L⊗Y ↦ Y/2";
    let f31 = "L⊗L⊗M ↦ M*(λ₁−λ₂); L⊗L⊗Y ↦ Y*(λ₁−λ₂)/2";
    adjoint_case(
        "SV",
        PresetParams::new("sv"),
        &[0, 1, 2, 1, 0],
        &[1, 3, 3, 1, 0],
        &[
            Table {
                reduced: false,
                degrees: &[(1, &["L ↦ M"]), (2, &[f21, "L⊗L ↦ M*(λ₁−λ₂)"]), (3, &[f31])],
            },
            Table {
                reduced: true,
                degrees: &[
                    (0, &["M"]),
                    (1, &["L ↦ M", "M ↦ M; Y ↦ Y/2", "L ↦ ∂*M"]),
                    (2, &[f21, "L⊗L ↦ M*(λ₁−λ₂)", "L⊗M ↦ M*(∂+λ₂); L⊗Y ↦ Y*(∂+λ₂)/2"]),
                    (3, &[f31]),
                ],
            },
        ],
    )
}

fn criterion_5() -> Outcome {
    let (alg, module) = adjoint("ext_sv");
    let r = report(&alg, &module);
    let n = r.bound.bound;
    ensure(r.basic_dims().iter().all(|&d| d == 0), || format!("basic {:?}", r.basic_dims()))?;
    let red = reduced_dims(&r);
    ensure(red.len() == n + 1 && red.iter().all(|&d| d == 0), || format!("reduced {red:?}"))?;
    Ok(format!("basic and reduced zero for q = 0..={n}, basic zero at q = {}", n + 1))
}

fn criterion_6() -> Outcome {
    let mut seen = Vec::new();
    for (name, params, expected) in [
        ("W(0)", PresetParams::wb(int(0)), vec!["H"]),
        ("SV", PresetParams::new("sv"), vec!["M"]),
        ("W(1)", PresetParams::wb(int(1)), vec![]),
        ("W(-1)", PresetParams::wb(int(-1)), vec![]),
        ("ext_sv", PresetParams::new("ext_sv"), vec![]),
    ] {
        let (alg, module) = preset(&params);
        let r = report(&alg, &module);
        let got: Vec<String> = r
            .casimir
            .iter()
            .map(|m| {
                let c = Cochain::from_element(alg.rank(), m.clone()).normalized();
                let v = c.rows().next().unwrap().1.clone();
                format_value(&module, &v, false)
            })
            .collect();
        ensure(got == expected, || format!("{name}: Casimir {got:?}, expected {expected:?}"))?;
        seen.push(format!("{name} {got:?}"));
    }
    Ok(seen.join(", "))
}

fn all_zero(r: &CohomologyReport) -> bool {
    r.basic_dims().iter().all(|&d| d == 0) && reduced_dims(r).iter().all(|&d| d == 0)
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for (delta, beta) in [(int(1), int(1)), (int(0), int(-2)), (int(2), rat(1, 2))] {
        let params = PresetParams::wb(int(0)).rank_one(delta.clone(), int(0), beta.clone());
        let (alg, module) = preset(&params);
        let r = report(&alg, &module);
        ensure(r.vanishing.is_none(), || "W(0) β-modules must go through the full pipeline".into())?;
        ensure(all_zero(&r), || format!("W(0), Δ = {delta}, β = {beta}: {:?}", r.basic_dims()))?;
        count += 1;
    }
    for delta in [int(0), int(1)] {
        for beta in [int(-1), rat(1, 2)] {
            let params = PresetParams::new("ext_sv").rank_one(delta.clone(), int(0), beta.clone());
            let (alg, module) = preset(&params);
            let r = report(&alg, &module);
            ensure(all_zero(&r), || format!("ext_sv, Δ = {delta}, β = {beta}: {:?}", r.basic_dims()))?;
            count += 1;
        }
    }
    for (family, delta, alpha) in [("hv", int(1), int(1)), ("vir", int(0), int(-2)), ("sv", rat(3, 2), rat(1, 3))] {
        let params = PresetParams::new(family).rank_one(delta.clone(), alpha.clone(), int(0));
        let (alg, module) = preset(&params);
        let r = report(&alg, &module);
        ensure(r.vanishing.as_ref().is_some_and(|v| v.applies()) && all_zero(&r), || {
            format!("{family}, Δ = {delta}, α = {alpha}: shift criterion not applied")
        })?;
        count += 1;
    }
    Ok(format!("{count} modules, all cohomology zero"))
}

fn criterion_8() -> Outcome {
    let mut out = Vec::new();
    for (name, params, expected, table_top) in [
        ("W(0)", PresetParams::wb(int(0)), 5, 3),
        ("SV", PresetParams::new("sv"), 8, 3),
    ] {
        let (alg, module) = preset(&params);
        let r = report(&alg, &module);
        ensure(r.bound.bound == expected, || format!("{name}: N = {}", r.bound.bound))?;
        let beyond: Vec<usize> = r.degrees.iter().filter(|d| d.q > table_top).map(|d| d.basic_dim()).collect();
        ensure(beyond.len() == expected + 1 - table_top && beyond.iter().all(|&d| d == 0), || {
            format!("{name}: basic dims beyond the table {beyond:?}")
        })?;
        out.push(format!("{name} N = {expected}"));
    }
    Ok(format!("{}; basic zero through N+1", out.join(", ")))
}

fn run_property<S, F>(name: &str, strategy: S, check: F) -> Result<(), String>
where
    S: proptest::strategy::Strategy,
    F: Fn(S::Value) -> Result<(), String>,
{
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(Config::with_cases(200), rng);
    runner
        .run(&strategy, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| format!("{name}: {e}"))
}

fn criterion_9() -> Outcome {
    run_property("d∘d = 0", cochain_case(), |(p, q, c)| check_dd(p, q, &c))?;
    run_property("homotopy", (cochain_case(), weight_choice()), |((p, q, c), w)| {
        check_homotopy(p, q, &w, &c)
    })?;
    run_property("d∂ = ∂d", cochain_case(), |(p, q, c)| check_d_partial(p, q, &c))?;
    run_property("weight", (cochain_case(), weight_choice()), |((p, q, c), w)| {
        check_weight_preserved(p, q, &w, &c)
    })?;
    run_property("dimension formula", module_case(), |(b, k, d, beta)| {
        check_dimension_formula(b, k, d, beta)
    })?;
    run_property("ring axioms", (poly(), poly(), poly()), |(a, b, c)| check_ring_axioms(&a, &b, &c))?;
    Ok("6 suites × 200 cases".into())
}

fn criterion_10() -> Outcome {
    for name in ["vir", "hv", "wb", "w22", "sv", "ext_sv"] {
        let params = if name == "wb" { PresetParams::wb(int(1)) } else { PresetParams::new(name) };
        let alg = presets::algebra(&params).unwrap();
        ensure(validate_algebra(&alg).is_clean(), || format!("{name} fails validation"))?;
    }
    let w0 = wb(0).0;
    let (l, h) = (0, 1);
    let d_plus = |cx: i64| &MultiPoly::partial(1) + &MultiPoly::lambda(1, 0).scale(&int(cx));

    let skew = check_skew_symmetry(&w0.with_bracket_entry(h, l, h, MultiPoly::zero(1)));
    ensure(skew.violations.iter().any(|v| v.generators == ["H", "L"] || v.generators == ["L", "H"]), || {
        format!("skew corruption not named: {skew:?}")
    })?;
    let jac = check_jacobi(&w0.with_bracket_entry(l, h, h, d_plus(2)));
    ensure(jac.violations.iter().any(|v| v.generators == ["H", "L", "L"]), || {
        format!("Jacobi corruption not named: {jac:?}")
    })?;
    let (ext, m) = preset(&PresetParams::new("ext_sv").rank_one(int(1), int(0), int(1)));
    let y = ext.index_of("Y").unwrap();
    let ax = check_module_axioms(&ext, &m.with_action_entry(y, 0, 0, MultiPoly::one(1)));
    ensure(ax.violations.iter().any(|v| v.generators[..2] == ["L", "Y"]), || {
        format!("module corruption not named: {ax:?}")
    })?;
    Ok("presets clean; skew (H, L), Jacobi (H, L, L), module (L, Y) named".into())
}

fn json_run(spec: &str) -> String {
    let mut input = spec.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(
        ["lcacohom", "cohomology", "--all", "--format", "json"],
        &mut input,
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    String::from_utf8(out).unwrap()
}

fn criterion_11() -> Outcome {
    let names: [&[&str]; 7] = [
        &["vir"],
        &["wb", "--b", "0"],
        &["wb", "--b", "1"],
        &["wb", "--b", "-1"],
        &["sv"],
        &["ext_sv"],
        &["wb", "--b", "0", "--module", "trivial"],
    ];
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    for args in names {
        let mut input: &[u8] = &[];
        let mut spec = Vec::new();
        let argv = ["lcacohom", "preset"].into_iter().chain(args.iter().copied());
        assert_eq!(run_with(argv, &mut input, &mut spec, &mut Vec::new()), 0);
        let spec = String::from_utf8(spec).unwrap();
        let a = json_run(&spec);
        let b = json_run(&spec);
        let c = single.install(|| json_run(&spec));
        ensure(a == b && b == c, || format!("{args:?}: JSON differs between runs"))?;
    }
    Ok(format!("{} presets, two runs plus a single-threaded run each", names.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("W(0) adjoint dims and tables", criterion_1),
        ("W(1) adjoint dims and tables", criterion_2),
        ("W(-1) adjoint dims and tables", criterion_3),
        ("SV adjoint dims and tables", criterion_4),
        ("extended SV adjoint vanishes", criterion_5),
        ("Casimir elements", criterion_6),
        ("rank-one vanishing", criterion_7),
        ("bound values", criterion_8),
        ("property suites", criterion_9),
        ("validation", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    let mut stdout = std::io::stdout();
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = start.elapsed().as_millis();
        let line = match outcome {
            Ok(detail) => format!("criterion {:>2} PASS  {title}: {detail} ({ms} ms)", i + 1),
            Err(e) => {
                failed += 1;
                format!("criterion {:>2} FAIL  {title}: {e}", i + 1)
            }
        };
        writeln!(stdout, "{line}").unwrap();
    }
    writeln!(stdout, "{} of {} criteria pass", criteria.len() - failed, criteria.len()).unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
