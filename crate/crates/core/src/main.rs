use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use starprod::affine::{AffineParams, Sign};
use starprod::checks::{AffineContext, Context, WeylContext, REGISTRY};
use starprod::data::{builtin_group_file, builtin_rep_on};
use starprod::group::Carrier;
use starprod::hilbert::GFunction;
use starprod::io::{format_wigner, load_gfunction, load_group, load_operator, load_rep, write_atomic};
use starprod::linalg::derived_rng;
use starprod::report::{run_named, Report, RunOptions};
use starprod::rep::{duflo_moore_from_orthogonality, unit, ProjRep};
use starprod::scenario::{default_ordering, Scenario, SEED_ENV};
use starprod::star::{
    build_star_kernel_k, star_char_formula, star_explicit, star_implicit, star_k_implicit, twisted_convolution,
    DeformationOperator, RangeMode,
};
use starprod::tolerances::Tolerances;
use starprod::weyl::Ordering;
use starprod::wigner::{build_wigner, WignerMap};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "starprod", version, about = "Weyl–Wigner quantization maps and star products on groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its JSON report.
    Run {
        scenario: PathBuf,
        /// Run independent checks concurrently.
        #[arg(long)]
        parallel: bool,
        /// Record per-check wall time (makes reports run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// List every registered check with its carriers and anchor.
    ListChecks {
        #[arg(long)]
        json: bool,
    },
    /// Compute a star product of two functions on a finite group.
    Star {
        /// Group file, or the name of a shipped group.
        #[arg(long)]
        group: String,
        /// Representation file, or the name of a shipped representation.
        #[arg(long)]
        rep: String,
        #[arg(long)]
        f1: PathBuf,
        #[arg(long)]
        f2: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Implicit)]
        method: Method,
        /// Operator file for the K-deformed product.
        #[arg(long = "K")]
        k: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        timings: bool,
    },
    /// Run the check suite for a discrete Weyl system.
    Weyl {
        #[arg(long = "N")]
        n: usize,
        /// Check names (repeatable or comma separated), or `all`.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        check: Vec<String>,
        #[arg(long, value_enum)]
        ordering: Option<OrderingArg>,
        /// Write the Wigner matrix to this path.
        #[arg(long)]
        dump_wigner: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the check suite for the affine group by quadrature.
    Affine {
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sign: SignArg,
        #[arg(long, value_enum, default_value_t = GridArg::Default)]
        grid: GridArg,
        #[arg(long, value_delimiter = ',', default_value = "all")]
        check: Vec<String>,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long = "M")]
        m: Option<usize>,
        #[arg(long = "K")]
        k: Option<usize>,
        #[arg(long)]
        da: Option<f64>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        r_min: Option<f64>,
        #[arg(long)]
        x_min: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(clap::Args)]
struct Common {
    /// Seed for random probes; STARPROD_SEED overrides it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Implicit,
    Explicit,
    Twisted,
    Char,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Symmetric,
    Standard,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Default,
    Refined,
}

/// An error with the exit code it maps to.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(EXIT_INPUT, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { scenario, parallel, timings } => run_scenario(&scenario, RunOptions { parallel, timings }),
        Command::ListChecks { json } => list_checks(json),
        Command::Star { group, rep, f1, f2, method, k, out, timings } => {
            star(&group, &rep, &f1, &f2, method, k.as_deref(), &out, timings)
        }
        Command::Weyl { n, check, ordering, dump_wigner, common } => {
            weyl(n, &check, ordering, dump_wigner.as_deref(), &common)
        }
        Command::Affine { sign, grid, check, l, m, k, da, rho, r_min, x_min, common } => {
            let base = match grid {
                GridArg::Default => AffineParams::default(),
                GridArg::Refined => AffineParams::default().refined(),
            };
            let params = AffineParams {
                l: l.unwrap_or(base.l),
                m: m.unwrap_or(base.m),
                k: k.unwrap_or(base.k),
                da: da.unwrap_or(base.da),
                rho: rho.unwrap_or(base.rho),
                r_min: r_min.unwrap_or(base.r_min),
                x_min: x_min.unwrap_or(base.x_min),
            };
            let sign = match sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            };
            affine(sign, params, &check, &common)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("starprod: {msg}");
            ExitCode::from(code)
        }
    }
}

fn seed_or_env(seed: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure(EXIT_INPUT, format!("{SEED_ENV} is not an integer: `{v}`"))),
        Err(_) => Ok(seed),
    }
}

fn finish(report: &Report, out: Option<&Path>) -> Result<u8, Failure> {
    match out {
        Some(p) => report.write(p)?,
        None => print!("{}", report.to_json()),
    }
    let s = &report.summary;
    eprintln!("{} of {} checks passed", s.passed, s.total);
    Ok(if report.pass { 0 } else { EXIT_FAIL })
}

fn run_scenario(path: &Path, opts: RunOptions) -> Result<u8, Failure> {
    let s = Scenario::load(path)?;
    let seed = s.effective_seed()?;
    let ctx = s.build_context(seed)?;
    let report = run_named(&ctx, &s.checks, &s.tolerances, seed, opts)?;
    finish(&report, Some(&s.output))
}

fn list_checks(as_json: bool) -> Result<u8, Failure> {
    if as_json {
        let v: Vec<_> = REGISTRY
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "description": c.description,
                    "anchor": c.anchor,
                    "carriers": c.carriers.iter().map(|k| k.as_str()).collect::<Vec<_>>(),
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&v).expect("catalog serializes"));
        return Ok(0);
    }
    for c in REGISTRY {
        let carriers: Vec<_> = c.carriers.iter().map(|k| k.as_str()).collect();
        println!("{:<28} [{}]\n    {}\n    anchor: {}", c.name, carriers.join(", "), c.description, c.anchor);
    }
    println!("{} checks", REGISTRY.len());
    Ok(0)
}

/// Loads a group and representation given either as files or as shipped names.
fn load_finite(group: &str, rep: &str) -> Result<ProjRep, Failure> {
    let gpath = Path::new(group);
    let carrier = if gpath.is_file() {
        Carrier::Finite(Arc::new(load_group(gpath)?.0.group))
    } else {
        Carrier::Finite(Arc::new(builtin_group_file(group)?.group))
    };
    let rpath = Path::new(rep);
    if rpath.is_file() {
        Ok(load_rep(rpath, &carrier)?)
    } else {
        Ok(builtin_rep_on(rep, &carrier)?)
    }
}

#[allow(clippy::too_many_arguments)]
fn star(
    group: &str,
    rep: &str,
    f1: &Path,
    f2: &Path,
    method: Method,
    k: Option<&Path>,
    out: &Path,
    timings: bool,
) -> Result<u8, Failure> {
    let u = load_finite(group, rep)?;
    let dm = duflo_moore_from_orthogonality(&u, &mut derived_rng(0, "duflo-moore"))?;
    let w = build_wigner(&u, &dm.dm)?;
    let a = load_gfunction(f1, u.carrier())?;
    let b = load_gfunction(f2, u.carrier())?;
    let kop = k.map(|p| load_operator(p).map_err(Failure::from).and_then(|m| Ok(DeformationOperator::new(m)?)));
    let kop = kop.transpose()?;
    let t0 = Instant::now();
    let oracle = match &kop {
        Some(kk) => star_k_implicit(&w, &a, &b, kk)?,
        None => star_implicit(&w, &a, &b)?,
    };
    let oracle_time = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let (name, value) = compute(method, &w, &a, &b, kop.as_ref(), &oracle)?;
    let method_time = t1.elapsed().as_secs_f64();
    let doc = json!({
        "method": name,
        "max_dev_vs_oracle": value.max_abs_diff(&oracle),
        "norms": { "f1": a.norm(), "f2": b.norm(), "result": value.norm() },
        "timings": if timings { json!({ "method_s": method_time, "oracle_s": oracle_time }) } else { json!(null) },
        "result": value.values().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
    });
    write_atomic(out, &(serde_json::to_string_pretty(&doc).expect("serializes") + "\n"))?;
    Ok(0)
}

fn compute(
    method: Method,
    w: &WignerMap,
    a: &GFunction,
    b: &GFunction,
    k: Option<&DeformationOperator>,
    oracle: &GFunction,
) -> Result<(&'static str, GFunction), Failure> {
    let no_k = |m: &str| -> Result<(), Failure> {
        match k {
            Some(_) => Err(Failure(EXIT_INPUT, format!("--K is not supported with --method {m}"))),
            None => Ok(()),
        }
    };
    Ok(match method {
        Method::Implicit => ("implicit", oracle.clone()),
        Method::Explicit => {
            let basis: Vec<_> = (0..w.dim()).map(|i| unit(w.dim(), i)).collect();
            let kernel = build_star_kernel_k(w, &basis, k, k.is_some() || w.order() > 64)?;
            ("explicit", star_explicit(&kernel, a, b)?.value)
        }
        Method::Twisted => {
            no_k("twisted")?;
            ("twisted", twisted_convolution(w, a, b, RangeMode::Project)?)
        }
        Method::Char => {
            no_k("char")?;
            ("char", star_char_formula(w.rep(), a, b)?)
        }
    })
}

fn weyl(
    n: usize,
    checks: &[String],
    ordering: Option<OrderingArg>,
    dump: Option<&Path>,
    common: &Common,
) -> Result<u8, Failure> {
    let ord = match ordering {
        Some(OrderingArg::Symmetric) => Ordering::Symmetric,
        Some(OrderingArg::Standard) => Ordering::Standard,
        None => default_ordering(n),
    };
    let seed = seed_or_env(common.seed)?;
    let ctx = WeylContext::new(n, ord, seed)?;
    if let Some(p) = dump {
        write_atomic(p, &format_wigner(&ctx.wigner))?;
    }
    let ctx = Context::Weyl(ctx);
    let opts = RunOptions { parallel: common.parallel, timings: common.timings };
    let report = run_named(&ctx, checks, &Tolerances::default(), seed, opts)?;
    finish(&report, common.out.as_deref())
}

fn affine(sign: Sign, params: AffineParams, checks: &[String], common: &Common) -> Result<u8, Failure> {
    let seed = seed_or_env(common.seed)?;
    let ctx = Context::Affine(AffineContext::new(sign, params)?);
    let opts = RunOptions { parallel: common.parallel, timings: common.timings };
    let report = run_named(&ctx, checks, &Tolerances::default(), seed, opts)?;
    finish(&report, common.out.as_deref())
}
