//! Subcommands and exit codes: 0 success, 1 computation or validation
//! failure, 2 usage or parse error.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::render::{render_json, render_text, RenderOptions, Which};
use super::specfile::{parse_spec, render_spec, SpecDocument, SpecError};
use crate::algebra::{self, LcaSpec, ModuleSpec};
use crate::calculus::{differential, homotopy_check, rank_one_alpha_vanishing};
use crate::cochain::ansatz;
use crate::cohomology::{self, vanishing_bound, DegreeSelection};
use crate::exactpoly::rational::parse_rational;
use crate::exactpoly::{int, Rational};
use crate::presets::{ModuleKind, PresetParams, PresetRegistry};

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}

#[derive(Parser, Debug)]
#[command(name = "lcacohom", version, about = "Cohomology of finite Lie conformal algebras with a Virasoro element")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the algebra and module axioms of a spec file.
    Validate(SpecArg),
    /// Print the vanishing bound N and its ingredients.
    Bound(SpecArg),
    /// Compute basic and reduced cohomology.
    Cohomology(CohomologyArgs),
    /// Print the spec file of a built-in algebra and module.
    Preset(PresetArgs),
    /// Run d^2 = 0, the homotopy identity and the dimension formula on the built-in presets.
    Selfcheck,
}

#[derive(Args, Debug)]
struct SpecArg {
    /// Spec file, or `-` for standard input.
    #[arg(default_value = "-")]
    spec: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct CohomologyArgs {
    /// Spec file, or `-` for standard input.
    #[arg(default_value = "-")]
    spec: String,
    /// A single degree.
    #[arg(long, conflicts_with = "all")]
    q: Option<usize>,
    /// Every degree up to the vanishing bound (the default).
    #[arg(long)]
    all: bool,
    #[arg(long, conflicts_with_all = ["reduced", "both"])]
    basic: bool,
    #[arg(long, conflicts_with = "both")]
    reduced: bool,
    #[arg(long)]
    both: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print ∂ and λ₁ instead of d and x1.
    #[arg(long)]
    glyphs: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModuleArg {
    Adjoint,
    Trivial,
    RankOne,
}

#[derive(Args, Debug)]
struct PresetArgs {
    /// One of the registered presets; `list` prints them.
    name: String,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    b: Option<Rational>,
    #[arg(long, value_enum, default_value = "adjoint")]
    module: ModuleArg,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    delta: Option<Rational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    alpha: Option<Rational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    beta: Option<Rational>,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Compute(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Compute(m) => m,
        }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(format!("i/o error: {e}"))
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

fn read_spec(path: &str, io: &mut Io<'_>) -> Result<(SpecDocument, LcaSpec, ModuleSpec), Failure> {
    let (text, origin) = if path == "-" {
        let mut s = String::new();
        io.stdin
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("cannot read standard input: {e}")))?;
        (s, "<stdin>".to_string())
    } else {
        let s = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
        (s, path.to_string())
    };
    let doc = parse_spec(&text).map_err(|e| Failure::Usage(format!("{origin}:{e}")))?;
    let (alg, module) = doc.to_specs()?;
    Ok((doc, alg, module))
}

fn cmd_validate(a: &SpecArg, io: &mut Io<'_>) -> Result<(), Failure> {
    let (_, alg, module) = read_spec(&a.spec, io)?;
    let shifted = rank_one_alpha_vanishing(&alg, &module).applies();
    let mut report = algebra::validate_algebra(&alg);
    report.merge(algebra::check_module_axioms(&alg, &module));
    if !shifted {
        report.merge(algebra::check_module_homogeneity(&alg, &module));
    }
    let mut problems: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    if let Err(c) = algebra::check_conformal(&alg, &module) {
        if shifted {
            writeln!(io.out, "note: {c}; the shifted rank-one action makes all cohomology vanish")?;
        } else {
            problems.push(format!("conformal ({}): {}", c.generator, c.detail));
        }
    }
    for p in &problems {
        writeln!(io.out, "{p}")?;
    }
    if problems.is_empty() {
        writeln!(io.out, "ok: {} with module {} passes every check", alg.name(), module.name())?;
        Ok(())
    } else {
        Err(Failure::Compute(format!("{} violation(s)", problems.len())))
    }
}

fn cmd_bound(a: &SpecArg, io: &mut Io<'_>) -> Result<(), Failure> {
    let (_, alg, module) = read_spec(&a.spec, io)?;
    let b = vanishing_bound(&alg, &module);
    writeln!(io.out, "N = {}", b.bound)?;
    writeln!(io.out, "n = {}", b.n)?;
    writeln!(io.out, "u = {}", b.u)?;
    writeln!(io.out, "v = {}", b.v)?;
    writeln!(io.out, "discriminant = {}", b.discriminant)?;
    Ok(())
}

fn cmd_cohomology(a: &CohomologyArgs, io: &mut Io<'_>) -> Result<(), Failure> {
    let (_, alg, module) = read_spec(&a.spec, io)?;
    let which = if a.basic {
        Which::Basic
    } else if a.reduced {
        Which::Reduced
    } else {
        Which::Both
    };
    let selection = match a.q {
        Some(q) => DegreeSelection::Single(q),
        None => DegreeSelection::All,
    };
    let report = cohomology::compute(&alg, &module, selection, which.reduced())
        .map_err(|e| Failure::Compute(e.to_string()))?;
    let opts = RenderOptions {
        selection,
        which,
        glyphs: a.glyphs,
    };
    let names: Vec<String> = alg.generators().iter().map(|g| g.name.clone()).collect();
    let text = match a.format {
        Format::Text => render_text(&report, &module, &names, &opts),
        Format::Json => render_json(&report, &module, &names, &opts),
    };
    match &a.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Compute(format!("cannot write {}: {e}", path.display())))?,
        None => io.out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_preset(a: &PresetArgs, io: &mut Io<'_>) -> Result<(), Failure> {
    let registry = PresetRegistry::standard();
    if a.name == "list" {
        for f in registry.families() {
            writeln!(io.out, "{:<8} {}", f.name(), f.summary())?;
        }
        return Ok(());
    }
    let module = match a.module {
        ModuleArg::Adjoint | ModuleArg::Trivial => {
            if a.delta.is_some() || a.alpha.is_some() || a.beta.is_some() {
                return Err(Failure::Usage("--delta, --alpha and --beta need --module rank-one".into()));
            }
            if matches!(a.module, ModuleArg::Adjoint) {
                ModuleKind::Adjoint
            } else {
                ModuleKind::Trivial
            }
        }
        ModuleArg::RankOne => ModuleKind::RankOne {
            delta: a
                .delta
                .clone()
                .ok_or_else(|| Failure::Usage("--module rank-one needs --delta".into()))?,
            alpha: a.alpha.clone().unwrap_or_else(|| int(0)),
            beta: a.beta.clone().unwrap_or_else(|| int(0)),
        },
    };
    let params = PresetParams {
        name: a.name.clone(),
        b: a.b.clone(),
        module,
    };
    let doc = SpecDocument::from_preset(&registry, &params)?;
    io.out.write_all(render_spec(&doc).as_bytes())?;
    Ok(())
}

fn selfcheck_cases() -> Vec<PresetParams> {
    vec![
        PresetParams::new("vir"),
        PresetParams::wb(int(0)),
        PresetParams::wb(int(1)),
        PresetParams::wb(int(-1)),
        PresetParams::wb(int(0)).with_module(ModuleKind::Trivial),
        PresetParams::new("sv"),
        PresetParams::new("ext_sv"),
    ]
}

fn cmd_selfcheck(io: &mut Io<'_>) -> Result<(), Failure> {
    let registry = PresetRegistry::standard();
    let mut failures = 0;
    for params in selfcheck_cases() {
        let alg = registry.algebra(&params).map_err(|e| Failure::Compute(e.to_string()))?;
        let module = registry.module(&alg, &params).map_err(|e| Failure::Compute(e.to_string()))?;
        let tag = format!("{} / {}", alg.name(), module.name());
        let bound = vanishing_bound(&alg, &module).bound;

        let mut checked = 0;
        let mut ok = true;
        for q in 0..=bound + 1 {
            for f in ansatz(&alg, &module, q, &int(0)).basis() {
                checked += 1;
                ok &= differential(&alg, &module, &differential(&alg, &module, f)).is_zero();
            }
        }
        failures += usize::from(!ok);
        writeln!(io.out, "{} d^2 = 0              {tag} ({checked} cochains)", if ok { "PASS" } else { "FAIL" })?;

        let mut checked = 0;
        let mut ok = true;
        for q in 0..=3.min(bound + 1) {
            for w in [int(0), int(1), Rational::new(3.into(), 2.into())] {
                for f in ansatz(&alg, &module, q, &w).basis() {
                    checked += 1;
                    ok &= homotopy_check(&alg, &module, f);
                }
            }
        }
        failures += usize::from(!ok);
        writeln!(io.out, "{} homotopy identity    {tag} ({checked} cochains)", if ok { "PASS" } else { "FAIL" })?;

        match cohomology::full_report(&alg, &module) {
            Ok(r) => {
                let dims: Vec<String> = r.basic_dims().iter().map(|d| d.to_string()).collect();
                writeln!(io.out, "PASS dimension formula  {tag} (basic {})", dims.join(","))?;
            }
            Err(e) => {
                failures += 1;
                writeln!(io.out, "FAIL dimension formula  {tag}: {e}")?;
            }
        }
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::Compute(format!("{failures} check(s) failed")))
    }
}

/// Runs one command line against the given streams and returns the exit
/// code.
pub fn run_with<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { stdin, out };
    let result = match &cli.command {
        Command::Validate(a) => cmd_validate(a, &mut io),
        Command::Bound(a) => cmd_bound(a, &mut io),
        Command::Cohomology(a) => cmd_cohomology(a, &mut io),
        Command::Preset(a) => cmd_preset(a, &mut io),
        Command::Selfcheck => cmd_selfcheck(&mut io),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

pub fn run() -> i32 {
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
