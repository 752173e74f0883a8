use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use orbit_betti::pipeline::{bounds_report, default_degrees, orbit_count_finite, run_job, verify_report, JobSpec};
use orbit_betti::poly::{parse_formula, BlockSpec};
use orbit_betti::scalar::{parse_rational, parse_rational_list, rational_from_int, rational_to_f64};
use orbit_betti::symmetry::rewrite_formula;
use orbit_betti::vandermonde::{arnold_section, combined_status, image_membership_blocks, FibreConfig, Membership};
use orbit_betti::weyl::{chain_discrepancy, comp_kd, comp_max, count_chains, enumerate_chains, hasse_edges, paper_chain_bound};

mod table;

const THREADS_ENV: &str = "ORBIT_BETTI_THREADS";

#[derive(Parser, Debug)]
#[command(name = "orbit-betti", version, about = "Betti numbers of orbit spaces of symmetric semi-algebraic sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Emit a plain-text table instead of JSON.
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Args, Debug, Clone, Default)]
struct Shape {
    /// Number of variables (single block).
    #[arg(long)]
    k: Option<usize>,
    /// Degree cap (single block).
    #[arg(long)]
    d: Option<u32>,
    /// Block sizes k1,k2,...
    #[arg(long)]
    blocks: Option<String>,
    /// Per-block degree caps d1,d2,...
    #[arg(long)]
    degrees: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct Sampling {
    /// Clip box in image coordinates, "lo:hi,lo:hi,...".
    #[arg(long = "box", allow_hyphen_values = true)]
    clip_box: Option<String>,
    /// Grid resolution; the run also samples at half of it.
    #[arg(long)]
    resolution: Option<String>,
    /// Coefficient field, Q or Z2.
    #[arg(long)]
    field: Option<String>,
    /// Value for the unspecified big-O constant in the bounds.
    #[arg(long = "constant-c")]
    constant_c: Option<String>,
    /// Also run the direct chamber oracle (single block, k <= 4).
    #[arg(long)]
    direct: bool,
    /// Job file, or a directory of *.json job files.
    #[arg(long)]
    job: Option<PathBuf>,
    /// Worker count for a job directory.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rewrite a symmetric formula in power sums.
    Rewrite {
        /// The formula, or omit it and pass --file.
        formula: Option<String>,
        /// Read the formula from a UTF-8 text file.
        #[arg(long, conflicts_with = "formula")]
        file: Option<PathBuf>,
        #[command(flatten)]
        shape: Shape,
    },
    /// List Comp(k,d), CompMax(k,d) and optionally the chains.
    Compositions {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        chains: bool,
    },
    /// Decide whether a point lies in the image of the power-sum map.
    Membership {
        #[command(flatten)]
        shape: Shape,
        /// Image point y1,y2,...
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Extrema of p_(d+1) on the fibre over a point.
    Section {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Betti numbers of the orbit space.
    Betti {
        formula: Option<String>,
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Orbit count of a finite product set V^k.
    Orbits {
        #[arg(long, allow_hyphen_values = true)]
        roots: String,
        #[arg(long)]
        k: usize,
    },
    /// Explicit Betti-number bounds.
    Bounds {
        #[command(flatten)]
        shape: Shape,
        /// Number of polynomials.
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long = "constant-c")]
        constant_c: Option<String>,
    },
    /// Run a job and check the report for internal consistency.
    Verify {
        formula: Option<String>,
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        sampling: Sampling,
    },
}

/// A command result: the report and its exit status.
struct Outcome {
    report: Value,
    code: u8,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, code: 0 }
    }
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<Outcome, Failure>;

fn usize_list(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',').map(|s| s.trim().parse::<usize>().map_err(|e| Failure(format!("bad integer {s:?}: {e}")))).collect()
}

fn f64_list(text: &str) -> Result<Vec<f64>, Failure> {
    Ok(parse_rational_list(text)?.iter().map(rational_to_f64).collect())
}

fn block_sizes(shape: &Shape) -> Result<Vec<usize>, Failure> {
    match (shape.k, &shape.blocks) {
        (Some(k), None) => Ok(vec![k]),
        (None, Some(b)) => usize_list(b),
        (Some(k), Some(b)) => {
            let sizes = usize_list(b)?;
            if sizes.iter().sum::<usize>() != k {
                return Err(Failure("--k does not match the sum of --blocks".into()));
            }
            Ok(sizes)
        }
        (None, None) => Err(Failure("give --k or --blocks".into())),
    }
}

fn degree_caps(shape: &Shape, blocks: usize) -> Result<Option<Vec<u32>>, Failure> {
    match (shape.d, &shape.degrees) {
        (Some(_), Some(_)) => Err(Failure("give --d or --degrees, not both".into())),
        (Some(d), None) => Ok(Some(vec![d; blocks])),
        (None, Some(list)) => Ok(Some(usize_list(list)?.into_iter().map(|v| v as u32).collect())),
        (None, None) => Ok(None),
    }
}

fn block_spec(shape: &Shape) -> Result<BlockSpec, Failure> {
    let sizes = block_sizes(shape)?;
    let caps = degree_caps(shape, sizes.len())?.ok_or_else(|| Failure("give --d or --degrees".into()))?;
    Ok(BlockSpec::new(sizes, caps)?)
}

fn rewrite(formula: Option<&str>, file: Option<&Path>, shape: &Shape) -> CmdResult {
    let text = match (formula, file) {
        (Some(f), _) => f.to_string(),
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        (None, None) => return Err(Failure("give a formula or --file".into())),
    };
    let formula = text.trim();
    let sizes = block_sizes(shape)?;
    let total = sizes.iter().sum();
    let f = parse_formula(formula, total)?;
    let caps = match degree_caps(shape, sizes.len())? {
        Some(c) => c,
        None => default_degrees(&f, &sizes)?,
    };
    let blocks = BlockSpec::new(sizes, caps)?;
    let rw = rewrite_formula(&f, &blocks)?;
    let atoms: Vec<Value> = f
        .polynomial_set()
        .iter()
        .zip(rw.formula.polynomial_set())
        .map(|(x, z)| json!({"x": x.to_string(), "z": z.display_with("z")}))
        .collect();
    Ok(Outcome::ok(json!({
        "input": f.to_string(),
        "formula": rw.formula.to_string(),
        "d_prime": rw.arity(),
        "block_sizes": blocks.block_sizes(),
        "degree_caps": blocks.degree_caps(),
        "block_arities": rw.block_arities,
        "polynomials": atoms,
    })))
}

fn compositions(k: usize, d: usize, with_chains: bool) -> CmdResult {
    let faces = comp_kd(k, d)?;
    let tops = if d <= k { comp_max(k, d)? } else { vec![] };
    let count = count_chains(k, d)?;
    let mut out = json!({
        "k": k,
        "d": d,
        "comp_max": tops.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "faces": faces.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "hasse_edges": hasse_edges(&faces).iter().map(|&(a, b)| [faces[a].to_string(), faces[b].to_string()]).collect::<Vec<_>>(),
        "chain_count": u64::try_from(&count).map(Value::from).unwrap_or_else(|_| Value::from(count.to_string())),
        "chain_bound": paper_chain_bound(k, d).to_string(),
        "bound_exceeded": chain_discrepancy(k, d)?.is_some(),
    });
    if with_chains {
        out["chains"] = json!(enumerate_chains(k, d)?.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    }
    Ok(Outcome::ok(out))
}

fn membership(shape: &Shape, point: &str) -> CmdResult {
    let blocks = block_spec(shape)?;
    let y = f64_list(point)?;
    let reports = image_membership_blocks(&blocks, &y, &FibreConfig::default())?;
    let status = combined_status(&reports);
    let report = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        json!({"status": status, "blocks": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>()})
    };
    Ok(Outcome { report, code: if status == Membership::Undecided { 2 } else { 0 } })
}

fn section(k: usize, d: usize, point: &str) -> CmdResult {
    let y = f64_list(point)?;
    let s = arnold_section(k, d, &y, &FibreConfig::default())?;
    Ok(Outcome { code: if s.ambiguous { 2 } else { 0 }, report: s.to_json() })
}

fn orbits(roots: &str, k: usize) -> CmdResult {
    let roots = parse_rational_list(roots)?;
    let c = orbit_count_finite(&roots, k)?;
    Ok(Outcome::ok(serde_json::to_value(c)?))
}

fn bounds(shape: &Shape, s: usize, constant_c: Option<&str>) -> CmdResult {
    let blocks = block_spec(shape)?;
    let c = match constant_c {
        Some(text) => parse_rational(text)?,
        None => rational_from_int(1),
    };
    Ok(Outcome::ok(serde_json::to_value(bounds_report(&blocks, s, &c)?)?))
}

fn parse_box(text: &str) -> Result<Vec<[Value; 2]>, Failure> {
    text.split(',')
        .map(|pair| {
            let (lo, hi) = pair.split_once(':').ok_or_else(|| Failure(format!("box entry {pair:?} is not lo:hi")))?;
            Ok([Value::from(lo.trim()), Value::from(hi.trim())])
        })
        .collect()
}

/// Builds a job from the command line, or loads `--job` and applies overrides.
fn inline_job(formula: Option<&str>, shape: &Shape, sampling: &Sampling, file: Option<&Path>) -> Result<JobSpec, Failure> {
    let mut job = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            JobSpec::from_json(&text)?
        }
        None => {
            let formula = formula.ok_or_else(|| Failure("give a formula or --job".into()))?;
            let clip_box = sampling.clip_box.as_deref().ok_or_else(|| Failure("give --box".into()))?;
            let resolution = sampling.resolution.as_deref().ok_or_else(|| Failure("give --resolution".into()))?;
            JobSpec {
                k: None,
                blocks: None,
                degrees: None,
                formula: formula.to_string(),
                clip_box: parse_box(clip_box)?,
                resolution: Value::from(resolution),
                field: None,
                direct: None,
                direct_resolution: None,
                constant_c: None,
            }
        }
    };
    if shape.k.is_some() || shape.blocks.is_some() {
        let sizes = block_sizes(shape)?;
        if sizes.len() == 1 {
            job.k = Some(sizes[0]);
            job.blocks = None;
        } else {
            job.k = None;
            job.blocks = Some(sizes);
        }
    }
    if let Some(caps) = degree_caps(shape, job.blocks.as_ref().map_or(1, |b| b.len()))? {
        job.degrees = Some(caps);
    }
    if file.is_some() {
        if let Some(b) = &sampling.clip_box {
            job.clip_box = parse_box(b)?;
        }
        if let Some(r) = &sampling.resolution {
            job.resolution = Value::from(r.as_str());
        }
    }
    if let Some(f) = &sampling.field {
        job.field = Some(f.clone());
    }
    if let Some(c) = &sampling.constant_c {
        job.constant_c = Some(Value::from(c.as_str()));
    }
    if sampling.direct {
        job.direct = Some(true);
    }
    Ok(job)
}

fn run_one(job: &JobSpec, verify: bool) -> CmdResult {
    let resolved = job.resolve()?;
    let report = run_job(&resolved)?;
    let uncertain = !report.stable || report.undecided_cells > 0;
    if !verify {
        return Ok(Outcome { code: if uncertain { 2 } else { 0 }, report: report.to_json() });
    }
    let checks = verify_report(&report);
    let passed = checks.iter().all(|c| c.passed || c.informational);
    Ok(Outcome {
        code: if passed && !uncertain { 0 } else { 2 },
        report: json!({"report": report.to_json(), "checks": checks, "passed": passed}),
    })
}

fn job_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Failure(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Failure(format!("{} holds no .json job files", dir.display())));
    }
    Ok(files)
}

fn betti(formula: Option<&str>, shape: &Shape, sampling: &Sampling, verify: bool) -> CmdResult {
    let Some(path) = sampling.job.as_deref().filter(|p| p.is_dir()) else {
        let job = inline_job(formula, shape, sampling, sampling.job.as_deref())?;
        return run_one(&job, verify);
    };
    if formula.is_some() {
        return Err(Failure("a formula cannot be combined with a job directory".into()));
    }
    let files = job_files(path)?;
    let workers = sampling.jobs.unwrap_or(1).max(1);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let results: Vec<(String, CmdResult)> = pool.install(|| {
        files
            .par_iter()
            .map(|file| {
                let name = file.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                (name, inline_job(None, shape, sampling, Some(file)).and_then(|job| run_one(&job, verify)))
            })
            .collect()
    });
    let mut code = 0;
    let entries: Vec<Value> = results
        .into_iter()
        .map(|(name, r)| match r {
            Ok(o) => {
                code = code.max(o.code);
                json!({"job": name, "report": o.report, "exit": o.code})
            }
            Err(Failure(msg)) => {
                code = code.max(1);
                json!({"job": name, "error": msg, "exit": 1})
            }
        })
        .collect();
    Ok(Outcome { report: json!({"jobs": entries}), code })
}

fn execute(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Rewrite { formula, file, shape } => rewrite(formula.as_deref(), file.as_deref(), shape),
        Command::Compositions { k, d, chains } => compositions(*k, *d, *chains),
        Command::Membership { shape, point } => membership(shape, point),
        Command::Section { k, d, point } => section(*k, *d, point),
        Command::Betti { formula, shape, sampling } => betti(formula.as_deref(), shape, sampling, false),
        Command::Orbits { roots, k } => orbits(roots, *k),
        Command::Bounds { shape, s, constant_c } => bounds(shape, *s, constant_c.as_deref()),
        Command::Verify { formula, shape, sampling } => betti(formula.as_deref(), shape, sampling, true),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(text) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = text.trim().parse().map_err(|_| Failure(format!("{THREADS_ENV} must be a positive integer, got {text:?}")))?;
    if n == 0 {
        return Err(Failure(format!("{THREADS_ENV} must be positive")));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn emit_error(msg: &str) -> ExitCode {
    println!("{}", json!({ "error": msg }));
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return emit_error(e.render().to_string().trim()),
    };
    if let Err(Failure(msg)) = configure_threads() {
        return emit_error(&msg);
    }
    match execute(&cli) {
        Ok(out) => {
            if cli.table {
                print!("{}", table::render(&out.report));
            } else {
                println!("{}", serde_json::to_string_pretty(&out.report).expect("reports serialize"));
            }
            ExitCode::from(out.code)
        }
        Err(Failure(msg)) => emit_error(&msg),
    }
}
