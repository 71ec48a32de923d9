//! `ainf`: check, twist and verify finite A∞-categories from the command line.
//!
//! Exit status is 0 when every check passes, 1 on a verification failure and 2 when
//! an input cannot be read or does not fit the command.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ainf_core::ainfcat::{
    check_ainf_relations, check_strict_unital, classify_cp_object, classify_spherical, cohomology_category,
    AInfCategory, PairingIntegral,
};
use ainf_core::amod::{mu1_q_exhaustive, quasi_iso_check};
use ainf_core::cli::format::{self, Target};
use ainf_core::cli::{configure_threads, detect_datum_at, make_fixture, run_suite, FixtureName, Input, Suite};
use ainf_core::grlin::SparseVec;
use ainf_core::twist::{phi_module, phi_tw, spherical_twist_module};
use ainf_core::Error;

#[derive(Parser)]
#[command(name = "ainf", version, about = "Exact A∞-categories, twisted complexes and twist functors")]
struct Cli {
    /// Category file, or a fixture name such as `P(1)`.
    #[arg(short, long, global = true, value_name = "FILE|FIXTURE")]
    category: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the A∞-relations and strict unitality of the category.
    Check,
    /// Cohomology dimensions of hom(SOURCE, TARGET).
    Cohomology {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Decide whether an object is a ℂPⁿ-object or spherical.
    Classify {
        #[arg(long)]
        object: String,
        #[arg(long, value_name = "N", conflicts_with = "spherical", required_unless_present = "spherical")]
        cp: Option<usize>,
        #[arg(long, value_name = "N")]
        spherical: Option<i64>,
        #[arg(long, value_name = "FILE")]
        integral: Option<PathBuf>,
    },
    /// Apply a twist to `yoneda:X`, a module file or a twisted complex file.
    Twist {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        object: String,
        #[arg(long, value_name = "TARGET")]
        apply: String,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, value_name = "FILE")]
        integral: Option<PathBuf>,
    },
    /// Decide whether a module morphism is a closed quasi-isomorphism.
    QuasiIso {
        #[arg(long, value_name = "FILE")]
        morphism: PathBuf,
    },
    /// Write a named fixture and its companion files.
    Fixture {
        name: String,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Run a verification suite on fixtures or category files.
    Verify {
        suite: String,
        #[arg(required = true, value_name = "INPUTS")]
        inputs: Vec<String>,
        #[arg(long, value_name = "FILE", default_value = "ainf-report.json")]
        report: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cp,
    Sphere,
}

/// Either an input problem (exit 2) or a failed check (exit 1).
enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn load_category(arg: &str) -> Result<AInfCategory, Failure> {
    if let Some(fx) = FixtureName::parse(arg) {
        return Ok(fx.category());
    }
    let text = std::fs::read_to_string(arg).map_err(|e| input_err(format!("{arg}: {e}")))?;
    format::parse_category(&text).map_err(|e| input_err(format!("{arg}: {e}")))
}

fn category(cli: &Cli) -> Result<Arc<AInfCategory>, Failure> {
    let arg = cli.category.as_deref().ok_or_else(|| input_err("--category is required"))?;
    Ok(Arc::new(load_category(arg)?))
}

fn integral(cat: &AInfCategory, v: usize, path: Option<&Path>, degree: i64) -> Result<PairingIntegral, Failure> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| input_err(format!("{}: {e}", p.display())))?;
            let i = format::parse_integral(&text, cat).map_err(|e| input_err(format!("{}: {e}", p.display())))?;
            if i.object != v {
                return Err(input_err("integral is on a different object"));
            }
            Ok(i)
        }
        None => PairingIntegral::candidates(cat, v, degree)
            .into_iter()
            .next()
            .ok_or_else(|| input_err(format!("no integral in degree {degree}; pass --integral"))),
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn verdict(ok: bool, what: &str) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(what.into()))
    }
}

fn check(cli: &Cli) -> Outcome {
    let cat = category(cli)?;
    let rel = check_ainf_relations(&cat);
    let unit = match cat.strict_units() {
        Some(_) => Some(check_strict_unital(&cat)?),
        None => None,
    };
    let unital = unit.as_ref().map_or(true, |u| u.passed());
    print_json(&json!({"relations": rel, "strict_unital": unit}));
    verdict(rel.passed() && unital, "category check failed")
}

fn cohomology(cli: &Cli, source: &str, target: &str) -> Outcome {
    let cat = category(cli)?;
    let (x, y) = (cat.object_index(source)?, cat.object_index(target)?);
    let dims = cohomology_category(&cat).dims(x, y);
    print_json(&json!({"source": source, "target": target, "dims": dims}));
    Ok(())
}

fn classify(cli: &Cli, object: &str, cp: Option<usize>, spherical: Option<i64>, ipath: Option<&Path>) -> Outcome {
    let cat = category(cli)?;
    let v = cat.object_index(object)?;
    let degree = cp.map_or(spherical.unwrap_or(0), |n| 2 * n as i64);
    if ipath.is_none() && PairingIntegral::candidates(&cat, v, degree).is_empty() {
        let msg = format!("hom(V,V) has no one-dimensional top degree {degree}");
        print_json(&json!({"holds": false, "failures": [["c", msg]]}));
        return verdict(false, "object does not classify");
    }
    let result = match (cp, spherical) {
        (Some(n), _) => {
            let i = integral(&cat, v, ipath, 2 * n as i64)?;
            let hc = cohomology_category(&cat);
            let hv = hc.hom(v, v);
            // any representative of the degree 2 class; an empty class fails clause (a)
            let h = hv
                .indices_in_degree(2)
                .next()
                .map_or_else(SparseVec::new, |k| hv.section(&SparseVec::unit(k, cat.field())));
            classify_cp_object(&cat, v, &h, n, &i)
        }
        (None, Some(n)) => classify_spherical(&cat, v, n, &integral(&cat, v, ipath, n)?),
        (None, None) => return Err(input_err("pass --cp N or --spherical N")),
    };
    print_json(&json!(result));
    verdict(result.holds, "object does not classify")
}

fn twist(cli: &Cli, kind: Kind, object: &str, apply: &str, out: &Path, ipath: Option<&Path>) -> Outcome {
    let cat = category(cli)?;
    let v = cat.object_index(object)?;
    let target = format::load_target(apply, Path::new("."), &cat)?;
    let text = match kind {
        Kind::Cp => {
            let top = cohomology_category(&cat).dims(v, v).keys().max().copied().unwrap_or(0);
            let i = ipath.map(|p| integral(&cat, v, Some(p), top)).transpose()?;
            let d = detect_datum_at(&cat, v, i)?;
            match target {
                Target::Complex(x) => format::emit_complex(&phi_tw(&d, &x)?.object),
                Target::Module(m) => format::emit_module(&phi_module(&d, &m)?.object),
            }
        }
        Kind::Sphere => {
            let top = cohomology_category(&cat).dims(v, v).keys().max().copied().unwrap_or(0);
            let i = integral(&cat, v, ipath, top)?;
            format::emit_module(&spherical_twist_module(v, &i, &target.module())?.object)
        }
    };
    std::fs::write(out, text).map_err(|e| input_err(format!("{}: {e}", out.display())))?;
    Ok(())
}

fn quasi_iso(cli: &Cli, morphism: &Path) -> Outcome {
    let cat = category(cli)?;
    let t = format::parse_morphism(morphism, &cat).map_err(|e| input_err(format!("{}: {e}", morphism.display())))?;
    if let Some(residual) = mu1_q_exhaustive(&t).describe_nonzero() {
        print_json(&json!({"closed": false, "residual": residual}));
        return verdict(false, "morphism is not closed");
    }
    let qi = quasi_iso_check(&t)?;
    print_json(&json!({"closed": true, "quasi_iso": qi}));
    verdict(qi.is_quasi_iso, "morphism is not a quasi-isomorphism")
}

fn fixture(name: &str, out: &Path) -> Outcome {
    std::fs::create_dir_all(out).map_err(|e| input_err(format!("{}: {e}", out.display())))?;
    for (file, text) in make_fixture(name)? {
        let path = out.join(file);
        std::fs::write(&path, text).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn verify(suite: &str, inputs: &[String], report: &Path) -> Outcome {
    let suite: Suite = suite.parse().map_err(input_err)?;
    let inputs = inputs
        .iter()
        .map(|s| match FixtureName::parse(s) {
            Some(_) => Ok(Input::fixture(s)?),
            None => Ok(Input::new(s.clone(), load_category(s)?)),
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let r = run_suite(suite, &inputs);
    if let Some(dir) = report.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| input_err(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(report, r.to_json()).map_err(|e| input_err(format!("{}: {e}", report.display())))?;
    use ainf_core::cli::Status::*;
    println!(
        "{}: {} checks, {} passed, {} failed, {} skipped; report at {}",
        r.suite,
        r.checks.len(),
        r.count(Pass),
        r.count(Fail),
        r.count(Skip),
        report.display()
    );
    match r.first_failure() {
        None => Ok(()),
        Some(c) => {
            let mut detail = c.detail.to_string();
            if detail.len() > 400 {
                let cut = (0..=400).rev().find(|&i| detail.is_char_boundary(i)).unwrap_or(0);
                detail.truncate(cut);
                detail.push('…');
            }
            Err(Failure::Check(format!("{} {}: {detail}", c.input, c.name)))
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Check => check(&cli),
        Command::Cohomology { source, target } => cohomology(&cli, source, target),
        Command::Classify {
            object,
            cp,
            spherical,
            integral,
        } => classify(&cli, object, *cp, *spherical, integral.as_deref()),
        Command::Twist {
            kind,
            object,
            apply,
            out,
            integral,
        } => twist(&cli, *kind, object, apply, out, integral.as_deref()),
        Command::QuasiIso { morphism } => quasi_iso(&cli, morphism),
        Command::Fixture { name, out } => fixture(name, out),
        Command::Verify { suite, inputs, report } => verify(suite, inputs, report),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
