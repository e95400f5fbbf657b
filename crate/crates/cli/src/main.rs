use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use orbilat::codes::{classify_codes_with_budget, CodeJson, CodeZp, CLASSIFICATION_BUDGET};
use orbilat::construction::ZpContext;
use orbilat::isometry::{IsometryJson, LatticeIsometry};
use orbilat::lattice::{Lattice, LatticeJson};
use orbilat::leech::{coinvariant_class, ClassTag, DEFAULT_SEED};
use orbilat::orbifold::decide_extra;
use orbilat::suites::{run_suite, Suite};
use orbilat::triality::TrialityReport;
use orbilat::Error;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "orbilat",
    version,
    about = "Exact checks for Construction B lattices and their cyclic orbifolds"
)]
struct Cli {
    /// Seed for the permutation searches; accepts decimal or 0x-prefixed hex.
    #[arg(long, global = true, env = "ORBILAT_SEED", value_parser = parse_seed, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    A,
    B,
}

#[derive(Subcommand)]
enum Command {
    /// Build L_A(C) or L_B(C) from a code file.
    Construct {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_enum, ignore_case = true)]
        variant: Variant,
        /// Where to write the lattice JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write g_{Δ,e} for this word of the dual code, comma separated.
        #[arg(long, value_delimiter = ',')]
        e: Option<Vec<u64>>,
        #[arg(long, requires = "e")]
        isometry_out: Option<PathBuf>,
    },
    /// Decide whether the orbifold of a lattice by an isometry has extra automorphisms.
    CheckExtra {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        isometry: PathBuf,
        /// Where to write the verdict JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the coinvariant lattice of a Leech lattice conjugacy class.
    Coinvariant {
        #[arg(long = "class")]
        class: ClassTag,
        #[arg(long)]
        lattice_out: Option<PathBuf>,
        #[arg(long)]
        isometry_out: Option<PathBuf>,
    },
    /// Classify codes over Z_p up to signed permutation.
    ClassifyCodes {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        dim: usize,
        /// Keep codes that are not self-orthogonal.
        #[arg(long)]
        any_code: bool,
        /// Keep codes whose Construction B lattice has roots.
        #[arg(long)]
        allow_roots: bool,
        #[arg(long, default_value_t = CLASSIFICATION_BUDGET)]
        max_candidates: u64,
    },
    /// Check the F, G, Z matrix identities over Q(ζ_k).
    VerifyTriality {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=64))]
        k: u64,
    },
    /// Run one of the named verification suites.
    VerifyPaper {
        #[arg(long)]
        suite: Suite,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        budget: Option<u64>,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

/// A failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) => 3,
            Error::InvariantMismatch(_) | Error::CorruptFixture(_) | Error::EnumerationOverflow => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

struct Outcome {
    inputs: Value,
    results: Value,
    summary: String,
    code: u8,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("invalid JSON in {}: {e}", path.display())))
}

fn write_json(path: &Path, v: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;
    fs::write(path, text + "\n").map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn path_value(p: &Option<PathBuf>) -> Value {
    p.as_ref().map_or(Value::Null, |p| json!(p.display().to_string()))
}

fn construct(
    p: u64,
    code: &Path,
    variant: Variant,
    out: &Option<PathBuf>,
    e: &Option<Vec<u64>>,
    isometry_out: &Option<PathBuf>,
) -> Result<Outcome, Failure> {
    let cj: CodeJson = read_json(code)?;
    if cj.p != p {
        return Err(Failure::input(format!(
            "--p {p} does not match the code's p = {}",
            cj.p
        )));
    }
    let c = CodeZp::from_json(&cj)?;
    let ctx = ZpContext::new(p, c.length())?;
    let (l, name) = match variant {
        Variant::A => (ctx.construct_a(&c)?, "A"),
        Variant::B => (ctx.construct_b(&c)?, "B"),
    };
    let even = l.is_even();
    let rootless = if even { Some(l.is_rootless()?) } else { None };
    let integral = l.is_integral();
    let d = if integral { Some(l.discriminant_group()?) } else { None };
    let label = d.as_ref().map_or_else(|| "undefined".to_string(), |d| d.label());
    if let Some(path) = out {
        write_json(path, &l.to_json())?;
    }
    let mut results = json!({
        "rank": l.rank(),
        "integral": integral,
        "even": even,
        "rootless": rootless,
        "self_orthogonal": c.is_self_orthogonal(),
        "discriminant": d.as_ref().map(|d| d.label()),
        "discriminant_order": d.as_ref().map(|d| d.order().to_string()),
        "det": l.det().to_string(),
        "lattice": l.to_json(),
    });
    if let Some(e) = e {
        let g = ctx.g_delta_e(&l, e)?;
        if let Some(path) = isometry_out {
            write_json(path, &g.to_json())?;
        }
        results["isometry"] = json!({ "e": e, "order": g.order(), "fixed_point_free": g.is_fixed_point_free() });
    }
    Ok(Outcome {
        inputs: json!({ "p": p, "code": cj, "variant": name, "e": e }),
        summary: format!("L_{name}(C): rank {}, even {even}, D {label}", l.rank()),
        results,
        code: 0,
    })
}

fn check_extra(lattice: &Path, isometry: &Path, out: &Option<PathBuf>) -> Result<Outcome, Failure> {
    let lj: LatticeJson = read_json(lattice)?;
    let ij: IsometryJson = read_json(isometry)?;
    let l = Lattice::from_json(&lj)?;
    let g = LatticeIsometry::from_json(&ij)?;
    if g.lattice() != &l {
        return Err(Failure::input("the isometry acts on a different lattice"));
    }
    if !l.is_even() {
        return Err(Error::NotEven.into());
    }
    if !l.is_rootless()? {
        return Err(Error::HasRoots.into());
    }
    let v = decide_extra(&l, &g)?;
    if let Some(path) = out {
        write_json(path, &v)?;
    }
    Ok(Outcome {
        inputs: json!({ "lattice": lj, "isometry_order": g.order() }),
        summary: format!("has_extra {}, branch {}", v.has_extra, v.branch),
        results: serde_json::to_value(&v).map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })?,
        code: 0,
    })
}

fn coinvariant(
    tag: ClassTag,
    seed: u64,
    lattice_out: &Option<PathBuf>,
    isometry_out: &Option<PathBuf>,
) -> Result<Outcome, Failure> {
    let c = coinvariant_class(tag, seed)?;
    if let Some(path) = lattice_out {
        write_json(path, &c.coinvariant.to_json())?;
    }
    if let Some(path) = isometry_out {
        write_json(path, &c.isometry.to_json())?;
    }
    let d = c.coinvariant.discriminant_group()?;
    let perm = c.permutation.permutation();
    Ok(Outcome {
        inputs: json!({ "class": tag }),
        summary: format!(
            "{tag}: rank {}, D {}, fixed rank {}",
            c.coinvariant.rank(),
            d.label(),
            c.fixed.rank()
        ),
        results: json!({
            "rank": c.coinvariant.rank(),
            "discriminant": d.label(),
            "fixed_rank": c.fixed.rank(),
            "fixed_gram": c.fixed.gram().to_rows().iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "cycle_type": perm.cycle_type().to_string(),
            "permutation": perm.images,
            "order": c.isometry.order(),
            "lattice": c.coinvariant.to_json(),
        }),
        code: 0,
    })
}

fn classify(p: u64, t: usize, dim: usize, so: bool, rootless: bool, max: u64) -> Result<Outcome, Failure> {
    let cl = classify_codes_with_budget(p, t, dim, so, rootless, max)?;
    let classes: Vec<CodeJson> = cl.classes.iter().map(|c| c.to_json()).collect();
    Ok(Outcome {
        inputs: json!({ "p": p, "t": t, "dim": dim, "self_orthogonal": so, "rootless": rootless, "max_candidates": max }),
        summary: format!(
            "[{p},{t},{dim}]: {} class(es) from {} candidates",
            classes.len(),
            cl.candidates_examined
        ),
        results: json!({ "classes": classes, "candidates_examined": cl.candidates_examined }),
        code: 0,
    })
}

fn triality(k: u64) -> Result<Outcome, Failure> {
    let r = TrialityReport::run(k as usize)?;
    Ok(Outcome {
        inputs: json!({ "k": k }),
        summary: format!(
            "k = {k}: sfg {}, conjugation {}, grading {}",
            r.sfg, r.conjugation, r.weight_grading
        ),
        code: if r.passed() { 0 } else { 1 },
        results: json!(r),
    })
}

fn verify_paper(suite: Suite, budget: Option<u64>, seed: u64) -> Result<Outcome, Failure> {
    let r = run_suite(suite, budget.map(Duration::from_secs), seed);
    let width = r.rows.iter().map(|x| x.name.len()).max().unwrap_or(0);
    let mut summary: Vec<String> = r
        .rows
        .iter()
        .map(|x| {
            format!(
                "{} {:width$}  {}",
                if x.passed { "PASS" } else { "FAIL" },
                x.name,
                x.detail
            )
        })
        .collect();
    if !r.complete {
        summary.push(format!(
            "budget of {}s exhausted after {} row(s)",
            budget.unwrap_or(0),
            r.rows.len()
        ));
    }
    let code = if !r.complete {
        3
    } else if r.passed() {
        0
    } else {
        1
    };
    Ok(Outcome {
        inputs: json!({ "suite": suite, "budget_seconds": budget }),
        summary: summary.join("\n"),
        results: json!({ "rows": r.rows, "complete": r.complete, "passed": r.passed() }),
        code,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let (name, outcome) = match &cli.command {
        Command::Construct {
            p,
            code,
            variant,
            out,
            e,
            isometry_out,
        } => (
            "construct",
            construct(*p, code, *variant, out, e, isometry_out).map(|mut o| {
                o.inputs["out"] = path_value(out);
                o
            }),
        ),
        Command::CheckExtra { lattice, isometry, out } => ("check-extra", check_extra(lattice, isometry, out)),
        Command::Coinvariant {
            class,
            lattice_out,
            isometry_out,
        } => ("coinvariant", coinvariant(*class, cli.seed, lattice_out, isometry_out)),
        Command::ClassifyCodes {
            p,
            t,
            dim,
            any_code,
            allow_roots,
            max_candidates,
        } => (
            "classify-codes",
            classify(*p, *t, *dim, !any_code, !allow_roots, *max_candidates),
        ),
        Command::VerifyTriality { k } => ("verify-triality", triality(*k)),
        Command::VerifyPaper { suite, budget } => ("verify-paper", verify_paper(*suite, *budget, cli.seed)),
    };
    let elapsed = start.elapsed().as_millis() as u64;
    let (code, doc) = match outcome {
        Ok(o) => {
            println!("{}", o.summary);
            (
                o.code,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": name,
                    "argv": argv,
                    "seed": cli.seed,
                    "inputs": o.inputs,
                    "status": o.code,
                    "results": o.results,
                    "timing": { "elapsed_ms": elapsed },
                }),
            )
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            (
                f.code,
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": name,
                    "argv": argv,
                    "seed": cli.seed,
                    "status": f.code,
                    "error": f.message,
                    "timing": { "elapsed_ms": elapsed },
                }),
            )
        }
    };
    if let Some(path) = &cli.report {
        if let Err(f) = write_json(path, &doc) {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    }
    ExitCode::from(code)
}
