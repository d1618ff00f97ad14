//! Command-line front end: exact overlap solving, instance generators,
//! reduction tooling, scaling benchmarks, and SVG figures.
//!
//! Exit codes: `0` success, `1` a requested check or certification failed,
//! `2` invalid input (file, parse, or validation errors), `3` a size or
//! time limit was hit.
//!
//! Set `OVERLAP_LOG={error|info|debug}` for diagnostics; `debug` also turns
//! on the library's internal shadow oracles.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigRational, ToPrimitive, Zero};
use orthoverlap::decomp::decompose;
use orthoverlap::error::Error;
use orthoverlap::fileio::{self, AnyPolygon};
use orthoverlap::genbench::{self, BenchRecord};
use orthoverlap::hardness::{self, CertOptions, CertReport, ReductionInstance};
use orthoverlap::kernel::{CandidateGrid, SlabSet};
use orthoverlap::poly::{GeneralPolygon, OrthoPolygon};
use orthoverlap::solvers::{evaluate_at, solve_baseline, solve_bruteforce, solve_fast};
use orthoverlap::SumInstance;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

// ---------------------------------------------------------------------------
// Errors and exit codes
// ---------------------------------------------------------------------------

#[derive(Debug)]
enum CliError {
    /// A `--check` or certification did not hold (exit 1).
    Failed(String),
    /// Bad input: missing file, parse error, validation error (exit 2).
    Invalid(String),
    /// Size or time limit (exit 3).
    Limit(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Limit(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Failed(m) | CliError::Invalid(m) | CliError::Limit(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::InstanceTooLarge | Error::BudgetExceeded | Error::GenerationFailed => {
                CliError::Limit(e.to_string())
            }
            other => CliError::Invalid(other.to_string()),
        }
    }
}

type CliResult = Result<(), CliError>;

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> CliResult {
    fs::write(path, content).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

/// Write to the path if given, else to stdout.
fn write_out(path: Option<&Path>, content: &str) -> CliResult {
    match path {
        Some(p) => write_file(p, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_ortho(path: &Path) -> Result<OrthoPolygon, CliError> {
    let text = read_file(path)?;
    fileio::parse_ortho(&text)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn load_general(path: &Path) -> Result<GeneralPolygon, CliError> {
    let text = read_file(path)?;
    match fileio::parse_polygon(&text)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?
    {
        AnyPolygon::Ortho(p) => Ok(GeneralPolygon::from_ortho(&p)),
        AnyPolygon::General(p) => Ok(p),
    }
}

fn parse_rat(tok: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(tok)
        .map_err(|_| CliError::Invalid(format!("bad rational `{tok}` (use `n` or `n/d`)")))
}

// ---------------------------------------------------------------------------
// Command-line grammar
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "orthoverlap",
    version,
    about = "Exact maximum-overlap translation for orthogonal polygons",
    long_about = "Computes, exactly, the translation of Q maximizing the area of P ∩ (Q + τ) \
                  for orthogonal polygons with integer vertices, and ships the generators, \
                  certifiers, and benchmarks around that solver."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the overlap-maximizing translation of Q relative to P
    Solve(SolveArgs),
    /// Generate instances and derived artifacts
    #[command(subcommand)]
    Gen(GenCmd),
    /// Re-check generated artifacts
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Scaling benchmarks over instance families
    #[command(subcommand)]
    Bench(BenchCmd),
    /// Render P, Q+τ, and their intersection as a deterministic SVG
    Viz(VizArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Fast,
    Baseline,
    Brute,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Fast => "fast",
            Algo::Baseline => "baseline",
            Algo::Brute => "brute",
        }
    }

    fn run(
        self,
        p: &OrthoPolygon,
        q: &OrthoPolygon,
    ) -> orthoverlap::Result<orthoverlap::OverlapResult> {
        match self {
            Algo::Fast => solve_fast(p, q),
            Algo::Baseline => solve_baseline(p, q),
            Algo::Brute => solve_bruteforce(p, q),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Solver to run
    #[arg(long, value_enum, default_value_t = Algo::Fast)]
    algo: Algo,
    /// Input polygon files: P then Q (both `ortho`)
    #[arg(long = "in", num_args = 2, value_names = ["P", "Q"], required = true)]
    input: Vec<PathBuf>,
    /// Write the result JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Re-evaluate the overlap at the reported translation and fail on mismatch
    #[arg(long)]
    check: bool,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Seeded random orthogonal polygon (two-sided unit-column histogram)
    Random(GenRandomArgs),
    /// Worst-case comb pair with incommensurate tooth pitches k and k+1
    Comb(GenCombArgs),
    /// Dump the translation-slab decomposition of a polygon pair as TSV
    Slabs(GenSlabsArgs),
    /// Sum-search reduction gadgets (overlap or containment variant)
    Hardness(GenHardnessArgs),
}

#[derive(Args)]
struct GenRandomArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of unit columns (vertex count is at most 4·cols)
    #[arg(long, default_value_t = 8)]
    cols: usize,
    /// Column extents are drawn from 1..=max-extent on each side
    #[arg(long, default_value_t = 16)]
    max_extent: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenCombArgs {
    /// Tooth count; each comb gets 4k+4 vertices
    #[arg(long)]
    k: u64,
    /// Output files for the two combs
    #[arg(long, num_args = 2, value_names = ["P_OUT", "Q_OUT"], required = true)]
    out: Vec<PathBuf>,
}

#[derive(Args)]
struct GenSlabsArgs {
    /// Input polygon files: P then Q (both `ortho`)
    #[arg(long = "in", num_args = 2, value_names = ["P", "Q"], required = true)]
    input: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Overlap,
    Containment,
}

#[derive(Args)]
struct GenHardnessArgs {
    /// JSON file with the input sets: {"a":[..],"b":[..],"c":[..],"d":[..],"e":[..]};
    /// omit d and e for the containment variant
    #[arg(long)]
    sets: PathBuf,
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Output paths: P polygon, Q polygon, metadata JSON
    #[arg(long, num_args = 3, value_names = ["P_OUT", "Q_OUT", "META_OUT"], required = true)]
    out: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Regenerate a reduction instance from its metadata and certify it
    Reduction(VerifyReductionArgs),
}

#[derive(Args)]
struct VerifyReductionArgs {
    /// Metadata JSON written by `gen hardness`
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the certification report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0x7a61_9c03)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    unsat_samples: usize,
    #[arg(long, default_value_t = 100)]
    outside_samples: usize,
    #[arg(long, default_value_t = 32)]
    isolation_samples: usize,
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Run solvers over an instance family, writing one CSV row per run
    Run(BenchRunArgs),
    /// Fit log-log growth slopes (ops and wall time vs n·m) from a bench CSV
    Fit(BenchFitArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Comb,
    Random,
}

#[derive(Args)]
struct BenchRunArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Comb)]
    family: FamilyArg,
    /// Comma-separated target vertex counts (comb: multiples of 4, at least 8)
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<u64>,
    /// Comma-separated algorithms from {fast, baseline, brute}
    #[arg(long, value_delimiter = ',', default_value = "fast,baseline")]
    algos: Vec<String>,
    #[arg(long, default_value_t = 1)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Soft wall-clock budget in seconds; on expiry a partial CSV is written
    /// and the command exits with the limit code
    #[arg(long)]
    budget_secs: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchFitArgs {
    /// CSV written by `bench run`
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct VizArgs {
    /// Input polygon files: P then Q (`ortho` or `general`)
    #[arg(long = "in", num_args = 2, value_names = ["P", "Q"], required = true)]
    input: Vec<PathBuf>,
    /// Translation applied to Q, as two rationals (e.g. `--tau 3/2 -1`)
    #[arg(long, num_args = 2, value_names = ["TX", "TY"], allow_hyphen_values = true)]
    tau: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FastStatsOut {
    blocks: u64,
    heavy_rows: u64,
    max_internal_slabs: u64,
    block_threshold: u64,
}

#[derive(Serialize)]
struct StatsOut {
    tree_touches: u64,
    hull_points: u64,
    ep_queries: u64,
    ops_total: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fast: Option<FastStatsOut>,
}

#[derive(Serialize)]
struct SolveOut {
    algo: &'static str,
    tau: [i64; 2],
    area: i128,
    stats: StatsOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<bool>,
}

fn cmd_solve(args: SolveArgs) -> CliResult {
    let p = load_ortho(&args.input[0])?;
    let q = load_ortho(&args.input[1])?;
    let r = args.algo.run(&p, &q)?;
    let check = if args.check {
        Some(evaluate_at(&p, &q, r.tx, r.ty) == r.area)
    } else {
        None
    };
    let out = SolveOut {
        algo: args.algo.name(),
        tau: [r.tx, r.ty],
        area: r.area,
        stats: StatsOut {
            tree_touches: r.ops.tree_touches,
            hull_points: r.ops.hull_points,
            ep_queries: r.ops.ep_queries,
            ops_total: r.ops.ops_total(),
            fast: r.fast.map(|f| FastStatsOut {
                blocks: f.blocks,
                heavy_rows: f.heavy_rows,
                max_internal_slabs: f.max_internal_slabs,
                block_threshold: f.block_threshold,
            }),
        },
        check,
    };
    let json = serde_json::to_string_pretty(&out).expect("result serializes");
    write_out(args.out.as_deref(), &format!("{json}\n"))?;
    if check == Some(false) {
        return Err(CliError::Failed(
            "re-evaluation at the reported translation disagrees with the reported area".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

fn cmd_gen_random(args: GenRandomArgs) -> CliResult {
    let p = genbench::gen_random_ortho(args.seed, args.cols, args.max_extent)?;
    write_out(
        args.out.as_deref(),
        &fileio::polygon_to_string(&AnyPolygon::Ortho(p)),
    )
}

fn cmd_gen_comb(args: GenCombArgs) -> CliResult {
    let (p, q) = genbench::gen_comb_pair(args.k)?;
    write_file(&args.out[0], &fileio::polygon_to_string(&AnyPolygon::Ortho(p)))?;
    write_file(&args.out[1], &fileio::polygon_to_string(&AnyPolygon::Ortho(q)))
}

fn cmd_gen_slabs(args: GenSlabsArgs) -> CliResult {
    let p = load_ortho(&args.input[0])?;
    let q = load_ortho(&args.input[1])?;
    let set = SlabSet::build(&decompose(&p), &decompose(&q));
    let mut tsv = String::from("l\tr\tb\tA\tB\tC\tD\n");
    for s in set.slabs() {
        tsv.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            s.x0, s.x1, s.y, s.a, s.b, s.c, s.d
        ));
    }
    write_out(args.out.as_deref(), &tsv)
}

/// Input-set file for `gen hardness`; `d`/`e` are omitted for containment.
#[derive(Serialize, Deserialize, Clone)]
struct SetsFile {
    a: Vec<i64>,
    b: Vec<i64>,
    c: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e: Option<Vec<i64>>,
}

/// Metadata tying the generated polygon files back to their source sets.
#[derive(Serialize, Deserialize)]
struct MetaFile {
    variant: String,
    sets: SetsFile,
    p_file: String,
    q_file: String,
    /// Exact rationals, formatted `n` or `n/d`.
    threshold: String,
    big_m: i64,
    eps: String,
    connector_width: String,
    connector_area: String,
    p_vertices: usize,
    q_vertices: usize,
}

fn build_instance(sets: &SetsFile, variant: VariantArg) -> Result<ReductionInstance, CliError> {
    match variant {
        VariantArg::Overlap => {
            let (d, e) = match (&sets.d, &sets.e) {
                (Some(d), Some(e)) => (d.clone(), e.clone()),
                _ => {
                    return Err(CliError::Invalid(
                        "overlap variant needs all five sets a, b, c, d, e".into(),
                    ))
                }
            };
            let inst = SumInstance::new(
                sets.a.clone(),
                sets.b.clone(),
                sets.c.clone(),
                d,
                e,
            )?;
            Ok(hardness::gen_overlap_instance(&inst)?)
        }
        VariantArg::Containment => {
            let trivial = |s: &Option<Vec<i64>>| match s {
                None => true,
                Some(v) => v == &vec![0],
            };
            if !trivial(&sets.d) || !trivial(&sets.e) {
                return Err(CliError::Invalid(
                    "containment variant takes sets a, b, c only (d, e must be absent or [0])"
                        .into(),
                ));
            }
            Ok(hardness::gen_containment_instance(&sets.a, &sets.b, &sets.c)?)
        }
    }
}

fn cmd_gen_hardness(args: GenHardnessArgs) -> CliResult {
    let sets: SetsFile = serde_json::from_str(&read_file(&args.sets)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", args.sets.display())))?;
    let ri = build_instance(&sets, args.variant)?;
    write_file(
        &args.out[0],
        &fileio::polygon_to_string(&AnyPolygon::General(ri.p.clone())),
    )?;
    write_file(
        &args.out[1],
        &fileio::polygon_to_string(&AnyPolygon::General(ri.q.clone())),
    )?;
    let meta = MetaFile {
        variant: match args.variant {
            VariantArg::Overlap => "overlap".into(),
            VariantArg::Containment => "containment".into(),
        },
        sets,
        p_file: args.out[0].display().to_string(),
        q_file: args.out[1].display().to_string(),
        threshold: ri.threshold.to_string(),
        big_m: ri.params.big_m,
        eps: ri.params.eps.to_string(),
        connector_width: ri.params.connector_width.to_string(),
        connector_area: ri.params.connector_area.to_string(),
        p_vertices: ri.p.vertices().len(),
        q_vertices: ri.q.vertices().len(),
    };
    let json = serde_json::to_string_pretty(&meta).expect("meta serializes");
    write_file(&args.out[2], &format!("{json}\n"))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct WitnessOut {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    e: i64,
    indices: [usize; 5],
}

#[derive(Serialize)]
struct ReportOut {
    passed: bool,
    witness: Option<WitnessOut>,
    threshold: String,
    forward_ok: Option<bool>,
    integrality_ok: Option<bool>,
    sweep_candidates: usize,
    sweep_max: String,
    sweep_best: [String; 2],
    sweep_reaches_threshold: bool,
    sweep_matches_brute: bool,
    unsat_samples_checked: usize,
    unsat_samples_ok: bool,
    outside_samples_checked: usize,
    outside_ok: bool,
    isolation_checked: usize,
    isolation_ok: bool,
    connector_area: String,
    connector_budget_ok: bool,
}

impl ReportOut {
    fn from_report(r: &CertReport) -> ReportOut {
        ReportOut {
            passed: r.passed,
            witness: r.witness.map(|w| WitnessOut {
                a: w.a,
                b: w.b,
                c: w.c,
                d: w.d,
                e: w.e,
                indices: [w.h, w.i, w.j, w.k, w.l],
            }),
            threshold: r.threshold.to_string(),
            forward_ok: r.forward_ok,
            integrality_ok: r.integrality_ok,
            sweep_candidates: r.sweep_candidates,
            sweep_max: r.sweep_max.to_string(),
            sweep_best: [r.sweep_best.0.to_string(), r.sweep_best.1.to_string()],
            sweep_reaches_threshold: r.sweep_reaches_threshold,
            sweep_matches_brute: r.sweep_matches_brute,
            unsat_samples_checked: r.unsat_samples_checked,
            unsat_samples_ok: r.unsat_samples_ok,
            outside_samples_checked: r.outside_samples_checked,
            outside_ok: r.outside_ok,
            isolation_checked: r.isolation_checked,
            isolation_ok: r.isolation_ok,
            connector_area: r.connector_area.to_string(),
            connector_budget_ok: r.connector_budget_ok,
        }
    }
}

fn resolve_near(meta_path: &Path, file: &str) -> PathBuf {
    let p = Path::new(file);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        meta_path.parent().unwrap_or(Path::new(".")).join(p)
    }
}

fn cmd_verify_reduction(args: VerifyReductionArgs) -> CliResult {
    let meta: MetaFile = serde_json::from_str(&read_file(&args.input)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", args.input.display())))?;
    let variant = match meta.variant.as_str() {
        "overlap" => VariantArg::Overlap,
        "containment" => VariantArg::Containment,
        other => {
            return Err(CliError::Invalid(format!(
                "{}: unknown variant `{other}`",
                args.input.display()
            )))
        }
    };
    let ri = build_instance(&meta.sets, variant)?;

    // the metadata must be consistent with what the sets regenerate to
    if ri.threshold.to_string() != meta.threshold {
        return Err(CliError::Invalid(format!(
            "threshold mismatch: metadata says {}, regeneration gives {}",
            meta.threshold, ri.threshold
        )));
    }
    let p_disk = load_general(&resolve_near(&args.input, &meta.p_file))?;
    let q_disk = load_general(&resolve_near(&args.input, &meta.q_file))?;
    if p_disk.vertices() != ri.p.vertices() || q_disk.vertices() != ri.q.vertices() {
        return Err(CliError::Invalid(
            "polygon files do not match the instance regenerated from the sets".into(),
        ));
    }

    let opts = CertOptions {
        seed: args.seed,
        unsat_samples: args.unsat_samples,
        outside_samples: args.outside_samples,
        isolation_samples: args.isolation_samples,
    };
    let report = hardness::certify_reduction(&ri, &opts)?;
    let json = serde_json::to_string_pretty(&ReportOut::from_report(&report))
        .expect("report serializes");
    write_out(args.out.as_deref(), &format!("{json}\n"))?;
    if !report.passed {
        return Err(CliError::Failed("reduction certification failed".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

fn comb_k_for(size: u64) -> Result<u64, CliError> {
    if size < 8 || size % 4 != 0 {
        return Err(CliError::Invalid(format!(
            "comb sizes are vertex counts: multiples of 4, at least 8 (got {size})"
        )));
    }
    Ok(size / 4 - 1)
}

fn algo_static(name: &str) -> Result<(&'static str, Algo), CliError> {
    match name {
        "fast" => Ok(("fast", Algo::Fast)),
        "baseline" => Ok(("baseline", Algo::Baseline)),
        "brute" => Ok(("brute", Algo::Brute)),
        other => Err(CliError::Invalid(format!("unknown algorithm `{other}`"))),
    }
}

fn cmd_bench_run(args: BenchRunArgs) -> CliResult {
    let algos = args
        .algos
        .iter()
        .map(|a| algo_static(a))
        .collect::<Result<Vec<_>, _>>()?;
    let budget = args.budget_secs.map(Duration::from_secs);
    let started = Instant::now();
    let mut records: Vec<BenchRecord> = Vec::new();
    let mut truncated = false;

    'outer: for &size in &args.sizes {
        for trial in 0..args.trials {
            let (family, p, q) = match args.family {
                FamilyArg::Comb => {
                    let (p, q) = genbench::gen_comb_pair(comb_k_for(size)?)?;
                    ("comb", p, q)
                }
                FamilyArg::Random => {
                    let cols = (size as usize / 4).max(1);
                    let base = args
                        .seed
                        .wrapping_add(size.wrapping_mul(0x9e37_79b9))
                        .wrapping_add(trial as u64);
                    let p = genbench::gen_random_ortho(base, cols, size as i64)?;
                    let q = genbench::gen_random_ortho(base ^ 0x5bd1_e995, cols, size as i64)?;
                    ("random", p, q)
                }
            };
            let grid = CandidateGrid::from_rects(&decompose(&p), &decompose(&q));
            for &(name, algo) in &algos {
                if budget.map_or(false, |b| started.elapsed() > b) {
                    truncated = true;
                    break 'outer;
                }
                let t0 = Instant::now();
                let r = algo.run(&p, &q)?;
                let wall = t0.elapsed();
                records.push(BenchRecord {
                    family,
                    k: size,
                    n: p.len(),
                    m: q.len(),
                    nm: (p.len() * q.len()) as u64,
                    algo: name,
                    ops_total: r.ops.ops_total(),
                    tree_touches: r.ops.tree_touches,
                    hull_points: r.ops.hull_points,
                    ep_queries: r.ops.ep_queries,
                    grid_x: grid.xs.len(),
                    grid_y: grid.ys.len(),
                    wall_ms: wall.as_millis(),
                    area: r.area,
                });
            }
        }
    }

    write_out(args.out.as_deref(), &genbench::records_to_csv(&records))?;
    if truncated {
        return Err(CliError::Limit(
            "bench budget exceeded; partial CSV written".into(),
        ));
    }
    Ok(())
}

fn cmd_bench_fit(args: BenchFitArgs) -> CliResult {
    let text = read_file(&args.input)?;
    // columns: family,k,n,m,nm,algo,ops_total,...,wall_ms,area
    let mut rows: Vec<(String, f64, f64, f64)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let bad = || CliError::Invalid(format!("{}: bad row {}", args.input.display(), i + 1));
        if f.len() != 14 {
            return Err(bad());
        }
        let nm: f64 = f[4].parse().map_err(|_| bad())?;
        let ops: f64 = f[6].parse().map_err(|_| bad())?;
        let wall_ms: f64 = f[12].parse().map_err(|_| bad())?;
        rows.push((f[5].to_string(), nm, ops, wall_ms));
    }
    if rows.is_empty() {
        return Err(CliError::Invalid(format!(
            "{}: no data rows",
            args.input.display()
        )));
    }
    let algos: BTreeSet<&String> = rows.iter().map(|r| &r.0).collect();
    let mut out = String::new();
    for algo in algos {
        let ops_pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| &r.0 == algo)
            .map(|r| (r.1, r.2))
            .collect();
        let wall_pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| &r.0 == algo && r.3 > 0.0)
            .map(|r| (r.1, r.3))
            .collect();
        let fmt = |s: Option<f64>| s.map_or("n/a".to_string(), |v| format!("{v:.3}"));
        out.push_str(&format!(
            "{algo}: runs {}, ops-slope {}, wall-slope {}\n",
            ops_pts.len(),
            fmt(genbench::loglog_slope(&ops_pts)),
            fmt(genbench::loglog_slope(&wall_pts)),
        ));
    }
    print!("{out}");
    Ok(())
}

// ---------------------------------------------------------------------------
// viz
// ---------------------------------------------------------------------------

fn fnum(v: f64) -> String {
    format!("{v:.6}")
}

fn cmd_viz(args: VizArgs) -> CliResult {
    let p = load_general(&args.input[0])?;
    let q = load_general(&args.input[1])?;
    let tau = match &args.tau {
        Some(v) => (parse_rat(&v[0])?, parse_rat(&v[1])?),
        None => (BigRational::zero(), BigRational::zero()),
    };
    let svg = render_svg(&p, &q, &tau)?;
    write_out(args.out.as_deref(), &svg)
}

fn render_svg(
    p: &GeneralPolygon,
    q: &GeneralPolygon,
    tau: &(BigRational, BigRational),
) -> Result<String, CliError> {
    let cells = hardness::intersection_cells(p, q, tau)?;
    let qm = q.translate(&tau.0, &tau.1);
    let to_f = |r: &BigRational| r.to_f64().unwrap_or(0.0);

    let mut x0 = f64::INFINITY;
    let mut x1 = f64::NEG_INFINITY;
    let mut y0 = f64::INFINITY;
    let mut y1 = f64::NEG_INFINITY;
    for (x, y) in p.vertices().iter().chain(qm.vertices()) {
        let (xf, yf) = (to_f(x), to_f(y));
        x0 = x0.min(xf);
        x1 = x1.max(xf);
        y0 = y0.min(yf);
        y1 = y1.max(yf);
    }
    let margin = 0.05 * (x1 - x0).max(y1 - y0);
    let flip = |y: f64| y0 + y1 - y; // SVG y grows downward
    let ring_path = |ring: &[(BigRational, BigRational)]| {
        let mut d = String::new();
        for (i, (x, y)) in ring.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            d.push_str(&format!(
                "{cmd}{} {} ",
                fnum(to_f(x)),
                fnum(flip(to_f(y)))
            ));
        }
        d.push('Z');
        d
    };

    let stroke = 0.003 * (x1 - x0 + 2.0 * margin).max(y1 - y0 + 2.0 * margin);
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fnum(x0 - margin),
        fnum(y0 - margin),
        fnum(x1 - x0 + 2.0 * margin),
        fnum(y1 - y0 + 2.0 * margin),
    );
    if !cells.is_empty() {
        let d: String = cells.iter().map(|c| ring_path(c)).collect::<Vec<_>>().join(" ");
        svg.push_str(&format!(
            "  <path d=\"{d}\" fill=\"#b8cbe4\" stroke=\"none\"/>\n"
        ));
    }
    svg.push_str(&format!(
        "  <path d=\"{}\" fill=\"none\" stroke=\"#19609c\" stroke-width=\"{}\"/>\n",
        ring_path(p.vertices()),
        fnum(stroke)
    ));
    svg.push_str(&format!(
        "  <path d=\"{}\" fill=\"none\" stroke=\"#c23727\" stroke-width=\"{}\"/>\n",
        ring_path(qm.vertices()),
        fnum(stroke)
    ));
    svg.push_str("</svg>\n");
    Ok(svg)
}

// ---------------------------------------------------------------------------

fn run(cli: Cli) -> CliResult {
    match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Gen(GenCmd::Random(a)) => cmd_gen_random(a),
        Cmd::Gen(GenCmd::Comb(a)) => cmd_gen_comb(a),
        Cmd::Gen(GenCmd::Slabs(a)) => cmd_gen_slabs(a),
        Cmd::Gen(GenCmd::Hardness(a)) => cmd_gen_hardness(a),
        Cmd::Verify(VerifyCmd::Reduction(a)) => cmd_verify_reduction(a),
        Cmd::Bench(BenchCmd::Run(a)) => cmd_bench_run(a),
        Cmd::Bench(BenchCmd::Fit(a)) => cmd_bench_fit(a),
        Cmd::Viz(a) => cmd_viz(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("OVERLAP_LOG", "error"))
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
