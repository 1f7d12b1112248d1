use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use blockmap::mapcore::hemap;
use blockmap::phase::{predicted_largest_block, schema_table, subcritical_mean_exact, PhaseParams, U_CRITICAL};
use blockmap::rng::{derive, seeded};
use blockmap::sampler::{sample_uniform_block, BlockSource, ModelSampler, ObjectKind, SamplerConfig, TreeMethod};
use blockmap::series::BivariateCoefficients;
use blockmap::stats::{kappa_mc, run_experiment, ExperimentPlan};
use blockmap_cli::criteria::{self, Scale};
use blockmap_cli::{integer_ratio, rational_json, Weight};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

/// Random planar maps weighted by their number of 2-connected blocks.
#[derive(Parser)]
#[command(name = "blockmap", version)]
struct Cli {
    /// Base seed; every random choice is derived from it.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads. Results do not depend on it.
    #[arg(long, global = true, env = "BLOCKMAP_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for commands that offer both.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Map,
    Quad,
}

impl From<Kind> for ObjectKind {
    fn from(k: Kind) -> ObjectKind {
        match k {
            Kind::Map => ObjectKind::Map,
            Kind::Quad => ObjectKind::Quad,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    RejectionCycle,
    ExactDp,
    JansonApprox,
    DirectUniform,
}

impl Method {
    fn resolve(self) -> Option<TreeMethod> {
        match self {
            Method::Auto => None,
            Method::RejectionCycle => Some(TreeMethod::RejectionCycle),
            Method::ExactDp => Some(TreeMethod::ExactDp),
            Method::JansonApprox => Some(TreeMethod::JansonApprox),
            Method::DirectUniform => Some(TreeMethod::DirectUniform),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Blocks {
    Harvest,
    Fresh,
    Pool,
}

impl From<Blocks> for BlockSource {
    fn from(b: Blocks) -> BlockSource {
        match b {
            Blocks::Harvest => BlockSource::Harvest,
            Blocks::Fresh => BlockSource::Fresh,
            Blocks::Pool => BlockSource::Pool,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Law {
    RootBlock,
    BlockCount,
}

#[derive(Subcommand)]
enum Command {
    /// Constants of the block-size law at a weight, as JSON.
    Params(ParamsArgs),
    /// Exact counts N(n, b) of rooted maps by edges and blocks, or an exact law.
    Series(SeriesArgs),
    /// Draw maps or quadrangulations of the model, in HEMAP format.
    Sample(SampleArgs),
    /// Draw uniform 2-connected maps or simple quadrangulations.
    Blocks(BlocksArgs),
    /// Run replicas over a grid of weights and sizes: CSV rows plus a JSON summary.
    Experiment(ExperimentArgs),
    /// Monte Carlo estimate of the distance constant kappa_u (u >= 9/5).
    Kappa(KappaArgs),
    /// Run the correctness checks at reduced scale; exits 1 if any fails.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ParamsArgs {
    /// Weight per block: p/q, decimal or scientific.
    #[arg(long, required_unless_present = "table")]
    u: Option<Weight>,
    /// Also predict the largest block at this size.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: Option<u64>,
    /// Print the table of critical weights of related decompositions instead.
    #[arg(long, conflicts_with = "u")]
    table: bool,
}

#[derive(Args)]
struct SeriesArgs {
    /// Largest number of edges.
    #[arg(long, default_value_t = 10)]
    max_n: u32,
    /// Print the exact law of this observable at --n and --u instead (JSON).
    #[arg(long, value_enum, requires_all = ["n", "u"])]
    law: Option<Law>,
    /// Size for --law.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: Option<u32>,
    /// Weight for --law.
    #[arg(long)]
    u: Option<Weight>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    u: Weight,
    /// Number of edges (maps) or faces (quadrangulations).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, value_enum, default_value = "map")]
    kind: Kind,
    /// How the block tree is drawn.
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    /// Where the blocks come from.
    #[arg(long, value_enum, default_value = "harvest")]
    blocks: Blocks,
    /// Number of objects.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Print one JSON line of sampling facts per object to stderr.
    #[arg(long)]
    info: bool,
    /// Give up after this many rejected trees or block attempts.
    #[arg(long)]
    max_rejections: Option<u64>,
}

#[derive(Args)]
struct BlocksArgs {
    /// Block size (edges, or faces for quadrangulations).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_enum, default_value = "map")]
    kind: Kind,
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Weights, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    u: Vec<Weight>,
    /// Sizes, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..), required_unless_present = "dyadic")]
    n: Vec<u64>,
    /// Sizes 2^LO..=2^HI, given as LO:HI.
    #[arg(long, conflicts_with = "n")]
    dyadic: Option<String>,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    replicas: u64,
    #[arg(long, value_enum, default_value = "quad")]
    kind: Kind,
    /// Build the objects and measure distances; otherwise block trees only.
    #[arg(long)]
    objects: bool,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    /// Root distances drawn per object.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    /// Fill the ms column (output then differs between runs).
    #[arg(long)]
    timing: bool,
    /// Write the JSON summary here (default: next to --out, else skipped).
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    max_rejections: Option<u64>,
}

#[derive(Args)]
struct KappaArgs {
    #[arg(long)]
    u: Weight,
    #[arg(long, value_enum, default_value = "quad")]
    kind: Kind,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(2..))]
    samples: u64,
    /// Largest block size drawn; the rest is bounded, not sampled.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    j_max: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run the checks at acceptance scale (minutes).
    #[arg(long)]
    full: bool,
    #[arg(long, hide = true)]
    corrupt_blocks: bool,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn params(cli: &Cli, a: &ParamsArgs) -> Result<()> {
    let mut out = output(&cli.out)?;
    if a.table {
        let rows = schema_table();
        if cli.format == Some(Format::Csv) {
            writeln!(out, "name,u_c_num,u_c_den,a,b,c")?;
            for r in rows {
                writeln!(out, "{},{},{},{},{},{}", r.name, r.u_critical.0, r.u_critical.1, r.a, r.b, r.c)?;
            }
        } else {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "u_critical": integer_ratio(r.u_critical.0, r.u_critical.1),
                        "mean": { "a": r.a, "b": r.b, "c": r.c },
                        "mean_at_u_critical": rational_json(&r.mean_exact(&r.u_critical_exact())),
                    })
                })
                .collect();
            write_json(&mut out, &Value::Array(v))?;
        }
        return Ok(out.flush()?);
    }
    let u = a.u.as_ref().unwrap();
    let p = PhaseParams::new(u.value)?;
    let mut v = serde_json::to_value(&p)?;
    let obj = v.as_object_mut().unwrap();
    obj.insert("u_exact".into(), rational_json(&u.exact));
    obj.insert("sigma".into(), json!(p.sigma()));
    if u.value <= U_CRITICAL {
        obj.insert("y_exact".into(), integer_ratio(4, 27));
    }
    let crit = BigRational::new(9.into(), 5.into());
    if u.exact < crit {
        obj.insert("mean_exact".into(), rational_json(&subcritical_mean_exact(&u.exact)));
    } else {
        obj.insert("mean_exact".into(), integer_ratio(1, 1));
    }
    if let Some(n) = a.n {
        obj.insert("largest_block".into(), serde_json::to_value(predicted_largest_block(u.value, n as f64)?)?);
    }
    write_json(&mut out, &v)?;
    Ok(out.flush()?)
}

fn series(cli: &Cli, a: &SeriesArgs) -> Result<()> {
    let mut out = output(&cli.out)?;
    if let Some(law) = a.law {
        let (n, u) = (a.n.unwrap(), a.u.as_ref().unwrap());
        let t = BivariateCoefficients::solve(n);
        let l = match law {
            Law::RootBlock => t.root_block_law(n, &u.exact)?,
            Law::BlockCount => t.block_number_law(n, &u.exact)?,
        };
        let probs: Vec<Value> = l.probs.iter().map(rational_json).collect();
        let v = json!({ "n": n, "u": rational_json(&u.exact), "support": l.support, "probs": probs });
        write_json(&mut out, &v)?;
        return Ok(out.flush()?);
    }
    let t = BivariateCoefficients::solve(a.max_n);
    if cli.format == Some(Format::Json) {
        let rows: Vec<Value> = (0..=a.max_n)
            .flat_map(|n| {
                let row = t.row(n).unwrap();
                row.iter().enumerate().map(move |(b, c)| json!({ "n": n, "b": b, "count": c.to_string() })).collect::<Vec<_>>()
            })
            .collect();
        write_json(&mut out, &Value::Array(rows))?;
    } else {
        writeln!(out, "n,b,count")?;
        for n in 0..=a.max_n {
            for (b, c) in t.row(n)?.iter().enumerate() {
                writeln!(out, "{n},{b},{c}")?;
            }
        }
    }
    Ok(out.flush()?)
}

fn sample(cli: &Cli, a: &SampleArgs) -> Result<()> {
    let n = usize::try_from(a.n)?;
    let mut cfg = SamplerConfig::new(a.u.value, n, a.kind.into(), cli.seed).with_blocks(a.blocks.into());
    if let Some(m) = a.method.resolve() {
        cfg = cfg.with_method(m);
    }
    if let Some(r) = a.max_rejections {
        cfg.limits.max_rejections = r;
    }
    let sampler = ModelSampler::new(cfg)?;
    let mut out = output(&cli.out)?;
    for i in 0..a.count {
        let mut rng = seeded(derive(cli.seed, &[i as u64]), 0);
        let s = sampler.sample(&mut rng)?;
        hemap::write(&s.object, &mut out)?;
        if a.info {
            let lb = s.tree.largest_blocks(3);
            let v = json!({ "index": i, "info": s.info, "blocks": s.tree.block_count(), "largest_blocks": lb });
            eprintln!("{v}");
        }
    }
    Ok(out.flush()?)
}

fn blocks(cli: &Cli, a: &BlocksArgs) -> Result<()> {
    let k = usize::try_from(a.k)?;
    let mut out = output(&cli.out)?;
    for i in 0..a.count {
        let mut rng = seeded(derive(cli.seed, &[i as u64]), 0);
        let (b, _) = sample_uniform_block(k, a.kind.into(), &mut rng, u64::MAX)?;
        hemap::write(&b, &mut out)?;
    }
    Ok(out.flush()?)
}

fn parse_dyadic(s: &str) -> Result<Vec<usize>> {
    let (lo, hi) = s.split_once(':').context("--dyadic expects LO:HI")?;
    let (lo, hi): (u32, u32) = (lo.trim().parse()?, hi.trim().parse()?);
    if lo > hi || hi > 40 {
        bail!("--dyadic needs LO <= HI <= 40, got {s}");
    }
    Ok(ExperimentPlan::dyadic(lo, hi))
}

fn summary_path(a: &ExperimentArgs, out: &Option<PathBuf>) -> Option<PathBuf> {
    a.summary.clone().or_else(|| {
        out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".summary.json");
            PathBuf::from(s)
        })
    })
}

fn experiment(cli: &Cli, a: &ExperimentArgs) -> Result<()> {
    let n_grid = match &a.dyadic {
        Some(s) => parse_dyadic(s)?,
        None => a.n.iter().map(|&n| usize::try_from(n)).collect::<std::result::Result<_, _>>()?,
    };
    let mut plan =
        ExperimentPlan::new(a.u.iter().map(|w| w.value).collect(), n_grid, usize::try_from(a.replicas)?, cli.seed);
    plan.kind = a.kind.into();
    plan.objects = a.objects;
    plan.method = a.method.resolve();
    plan.reps = usize::try_from(a.reps)?;
    plan.timing = a.timing;
    if let Some(r) = a.max_rejections {
        plan.limits.max_rejections = r;
    }
    plan.validate()?;
    let out = output(&cli.out)?;
    let summary = run_experiment(&plan, out)?;
    if let Some(p) = summary_path(a, &cli.out) {
        let mut f = BufWriter::new(File::create(&p).with_context(|| format!("cannot create {}", p.display()))?);
        write_json(&mut f, &serde_json::to_value(&summary)?)?;
        f.flush()?;
    }
    Ok(())
}

fn kappa(cli: &Cli, a: &KappaArgs) -> Result<()> {
    let mut rng = seeded(cli.seed, 0);
    let k = kappa_mc(a.u.value, a.kind.into(), usize::try_from(a.samples)?, usize::try_from(a.j_max)?, &mut rng)?;
    let mut out = output(&cli.out)?;
    write_json(&mut out, &serde_json::to_value(&k)?)?;
    Ok(out.flush()?)
}

/// Returns whether every check passed.
fn verify(cli: &Cli, a: &VerifyArgs) -> Result<bool> {
    let scale = if a.full { Scale::full() } else { Scale::quick() };
    let checks = criteria::verify(&scale, cli.seed, a.corrupt_blocks)?;
    let passed = checks.iter().all(|c| c.pass);
    let mut out = output(&cli.out)?;
    if cli.format == Some(Format::Csv) {
        writeln!(out, "id,name,tolerance,observed,pass")?;
        for c in &checks {
            writeln!(out, "{},\"{}\",\"{}\",\"{}\",{}", c.id, c.name, c.tolerance, c.observed, c.pass)?;
        }
    } else {
        write_json(&mut out, &json!({ "passed": passed, "scale": scale, "checks": checks }))?;
    }
    out.flush()?;
    for c in checks.iter().filter(|c| !c.pass) {
        eprintln!("{}", c.line());
    }
    Ok(passed)
}

fn set_threads(threads: Option<u32>) -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(t as usize).build_global()?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    set_threads(cli.threads)?;
    if let Some(p) = &cli.out {
        if p.parent().is_some_and(|d| !d.as_os_str().is_empty() && !Path::new(d).is_dir()) {
            bail!("directory of {} does not exist", p.display());
        }
    }
    match &cli.command {
        Command::Params(a) => params(cli, a)?,
        Command::Series(a) => series(cli, a)?,
        Command::Sample(a) => sample(cli, a)?,
        Command::Blocks(a) => blocks(cli, a)?,
        Command::Experiment(a) => experiment(cli, a)?,
        Command::Kappa(a) => kappa(cli, a)?,
        Command::Verify(a) => return verify(cli, a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
