//! `projcoh`: command-line driver for the cohomology engine.
//!
//! Exit codes: 0 success, 1 input error, 2 arrangement with infinitely many
//! orbits (or otherwise not finite), 3 the two routes disagree, 4 unsupported
//! codimension or shape.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use projcoh::arrangement::{close_arrangement, Arrangement, ArrangementError};
use projcoh::cohomology::{
    codim2_rank_check, codim3_rank_check, fhk, k_theory, low_degree_check, superscript,
    torsion_bounds_check, CheckReport, CohomologyError, CohomologyResult, DiagramMaps,
};
use projcoh::scheme::catalog::generalized_penrose;
use projcoh::scheme::{
    builtin_scheme, format_rational, load_scheme_file, parse_rational, SchemeError, SchemeSpec, CATALOG,
};
use projcoh::torus_mv::{alpha_assembly, route_crosscheck, Crosscheck};

#[derive(Parser, Debug)]
#[command(name = "projcoh", version, about = "Integral cohomology of rational cut-and-project tiling spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Fhk,
    Mv,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(clap::Args, Debug)]
struct SchemeArgs {
    /// Catalog name or path to a scheme JSON file.
    #[arg(value_name = "SCHEME")]
    name: Option<String>,
    /// Same as the positional argument.
    #[arg(long = "scheme", value_name = "NAME|PATH", conflicts_with = "name")]
    scheme: Option<String>,
    /// Shift parameter `p/q` for generalized_penrose.
    #[arg(long, value_name = "P/Q")]
    gamma: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in catalog.
    ListSchemes {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print the intersection classes and their counts.
    Arrangement(SchemeArgs),
    /// Compute the cohomology groups.
    Cohomology {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, value_enum, default_value_t = Method::Fhk)]
        method: Method,
    },
    /// Assemble K⁰ and K¹ from the cohomology (dimension ≤ 3).
    Ktheory {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, value_enum, default_value_t = Method::Fhk)]
        method: Method,
    },
}

/// A failure together with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<SchemeError> for Failure {
    fn from(e: SchemeError) -> Self {
        Failure::new(1, e.to_string())
    }
}

impl From<ArrangementError> for Failure {
    fn from(e: ArrangementError) -> Self {
        let code = match e {
            ArrangementError::NonRational { .. }
            | ArrangementError::InfiniteOrbits { .. }
            | ArrangementError::DepthExceeded(_) => 2,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<CohomologyError> for Failure {
    fn from(e: CohomologyError) -> Self {
        let code = match e {
            CohomologyError::UnsupportedCodim(_)
            | CohomologyError::UnsupportedNu(_)
            | CohomologyError::DimensionTooLarge(_) => 4,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

/// Resolves a scheme: an existing file path, then `PROJCOH_SCHEME_DIR`, then the catalog.
fn load_scheme(args: &SchemeArgs) -> Result<SchemeSpec, Failure> {
    let name = args
        .name
        .as_deref()
        .or(args.scheme.as_deref())
        .ok_or_else(|| Failure::new(1, "no scheme given"))?;
    if let Some(g) = &args.gamma {
        if name != "generalized_penrose" {
            return Err(Failure::new(1, "--gamma applies only to generalized_penrose"));
        }
        return Ok(generalized_penrose(&parse_rational(g)?));
    }
    resolve_scheme(name)
}

fn resolve_scheme(name: &str) -> Result<SchemeSpec, Failure> {
    let path = Path::new(name);
    if path.is_file() {
        return Ok(load_scheme_file(path)?);
    }
    if let Some(dir) = std::env::var_os("PROJCOH_SCHEME_DIR") {
        let candidate = PathBuf::from(dir).join(format!("{name}.json"));
        if candidate.is_file() {
            return Ok(load_scheme_file(&candidate)?);
        }
    }
    Ok(builtin_scheme(name)?)
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("results serialize"));
}

fn cmd_list_schemes(format: Format) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for name in CATALOG {
        rows.push(resolve_scheme(name)?);
    }
    match format {
        Format::Table => {
            for s in &rows {
                println!("{s} families={}", s.families().len());
            }
        }
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|s| {
                    json!({
                        "name": s.name(),
                        "rank": s.ambient_rank(),
                        "codim": s.codim(),
                        "nu": s.nu(),
                        "families": s.families().len(),
                    })
                })
                .collect();
            print_json(&v);
        }
    }
    Ok(())
}

fn arrangement_json(s: &SchemeSpec, arr: &Arrangement) -> Value {
    let counts = arr.counts();
    let levels: Vec<Value> = arr
        .levels
        .iter()
        .enumerate()
        .map(|(k, classes)| {
            let cls: Vec<Value> = classes
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let dir: Vec<Vec<String>> = c
                        .dir
                        .basis()
                        .columns()
                        .iter()
                        .map(|v| v.iter().map(ToString::to_string).collect())
                        .collect();
                    json!({
                        "direction": dir,
                        "offset": c.offset.iter().map(format_rational).collect::<Vec<_>>(),
                        "stabilizer_rank": c.rank(),
                        "families": family_labels(arr, k, i),
                        "contains": counts.per_class[k][i],
                    })
                })
                .collect();
            json!({ "level": k, "classes": cls })
        })
        .collect();
    json!({
        "scheme": s.name(),
        "rank": arr.ambient_rank,
        "codim": arr.codim,
        "nu": arr.nu,
        "levels": levels,
        "counts": counts,
    })
}

/// Generating families of a top-level class; lower classes have none.
fn family_labels(arr: &Arrangement, level: usize, i: usize) -> Vec<String> {
    if level == arr.top() {
        arr.family_labels[i].clone()
    } else {
        Vec::new()
    }
}

fn cmd_arrangement(args: &SchemeArgs) -> Result<(), Failure> {
    let s = load_scheme(args)?;
    let arr = close_arrangement(&s)?;
    match args.format {
        Format::Json => print_json(&arrangement_json(&s, &arr)),
        Format::Table => {
            let counts = arr.counts();
            println!("{s}");
            for k in (0..arr.levels.len()).rev() {
                println!("level {k}: L{}={}", subscript(k), counts.l[k]);
                if args.verbose {
                    for (i, c) in arr.levels[k].iter().enumerate() {
                        let inner: Vec<String> =
                            (0..k).map(|r| format!("L{}={}", subscript(r), counts.per_class[k][i][r])).collect();
                        println!("  [{i}] {} {} ({})", c.describe(), inner.join(" "), family_labels(&arr, k, i).join(","));
                    }
                }
            }
            let totals: Vec<String> = (0..arr.levels.len())
                .rev()
                .map(|k| format!("L{}={}", subscript(k), counts.l[k]))
                .collect();
            println!("{}", totals.join(" "));
        }
    }
    Ok(())
}

fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("decimal digit") as usize])
        .collect()
}

struct Run {
    results: Vec<CohomologyResult>,
    crosscheck: Option<Crosscheck>,
    checks: Vec<(String, CheckReport)>,
}

fn run_routes(name: &str, arr: &Arrangement, method: Method, with_checks: bool) -> Result<Run, Failure> {
    if arr.codim > 3 {
        return Err(CohomologyError::UnsupportedCodim(arr.codim).into());
    }
    let mut results = Vec::new();
    if matches!(method, Method::Fhk | Method::Both) {
        results.push(fhk(name, arr, None)?);
    }
    if matches!(method, Method::Mv | Method::Both) {
        results.push(alpha_assembly(name, arr)?.1);
    }
    let crosscheck = (method == Method::Both).then(|| route_crosscheck(&results[0], &results[1]));
    let mut checks = Vec::new();
    if with_checks {
        let r = &results[0];
        match arr.codim {
            2 => checks.push(("rank formulas".to_string(), codim2_rank_check(arr, r)?)),
            3 => checks.push((
                "rank formulas".to_string(),
                codim3_rank_check(arr, &DiagramMaps::build(arr), r)?,
            )),
            _ => {}
        }
        checks.push(("low degrees".to_string(), low_degree_check(r)));
        checks.push(("forced freeness".to_string(), torsion_bounds_check(r)));
    }
    Ok(Run {
        results,
        crosscheck,
        checks,
    })
}

fn print_result_table(r: &CohomologyResult, verbose: bool) {
    println!("{:<26} {:<3} {}", r.scheme, r.method, r.table_row());
    for d in r.degrees.iter().rev() {
        if let Some(a) = &d.annotation {
            println!("  H{}: {a}", superscript(d.degree));
        }
    }
    if verbose {
        println!("  Euler characteristic {}", r.euler);
        let diag = &r.diagnostics;
        let named = [
            ("plane cokernel torsion (degree 3)", &diag.top_cokernel_torsion),
            ("line cokernel torsion", &diag.line_kernel_cokernel_torsion),
            ("point kernel torsion", &diag.point_kernel_torsion),
        ];
        for (label, g) in named {
            if let Some(g) = g {
                println!("  {label}: {g}");
            }
        }
        if let Some(c) = &diag.connecting_image {
            println!("  connecting image: {c}");
        }
        for (label, g) in &diag.extension_data {
            println!("  {label}: {g}");
        }
    }
}

fn cmd_cohomology(args: &SchemeArgs, method: Method) -> Result<(), Failure> {
    let s = load_scheme(args)?;
    let arr = close_arrangement(&s)?;
    let run = run_routes(s.name(), &arr, method, args.verbose)?;
    match args.format {
        Format::Json => {
            if let Some(c) = &run.crosscheck {
                print_json(&json!({
                    "fhk": run.results[0],
                    "mv": run.results[1],
                    "crosscheck": c,
                }));
            } else {
                print_json(&run.results[0]);
            }
        }
        Format::Table => {
            for r in &run.results {
                print_result_table(r, args.verbose);
            }
            if let Some(c) = &run.crosscheck {
                if c.agree {
                    println!("routes agree");
                } else {
                    for m in &c.messages {
                        println!("routes disagree: {m}");
                    }
                }
            }
            for (label, rep) in &run.checks {
                let status = if rep.passed() { "ok" } else { "FAILED" };
                println!("check {label}: {status}");
                for l in &rep.lines {
                    println!("  {} expected {} computed {}", l.label, l.expected, l.computed);
                }
            }
        }
    }
    match &run.crosscheck {
        Some(c) if !c.agree => Err(Failure::new(3, "the two routes disagree")),
        _ => Ok(()),
    }
}

fn cmd_ktheory(args: &SchemeArgs, method: Method) -> Result<(), Failure> {
    let s = load_scheme(args)?;
    let arr = close_arrangement(&s)?;
    let run = run_routes(s.name(), &arr, method, false)?;
    if let Some(c) = &run.crosscheck {
        if !c.agree {
            return Err(Failure::new(3, format!("the two routes disagree: {}", c.messages.join("; "))));
        }
    }
    let k = k_theory(&run.results[0])?;
    match args.format {
        Format::Json => print_json(&k),
        Format::Table => println!("{:<26} K⁰={} K¹={}", s.name(), k.k0.display(), k.k1.display()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::ListSchemes { format } => cmd_list_schemes(*format),
        Command::Arrangement(a) => cmd_arrangement(a),
        Command::Cohomology { scheme, method } => cmd_cohomology(scheme, *method),
        Command::Ktheory { scheme, method } => cmd_ktheory(scheme, *method),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("projcoh: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
