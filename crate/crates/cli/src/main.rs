//! `cacd`: build networks from demand files, route over them, run experiments.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cacd::decimal::parse_decimal_floor;
use cacd::export::{code_table_csv, edge_list_csv, DemandFile, GraphFile};
use cacd::harness::metrics::ttl_for;
use cacd::harness::{self, ExperimentConfig, ExperimentKind, Manifest};
use cacd::point::FRACTION_BITS;
use cacd::{select_build_distribution, Algorithm, FailureMask, Network, Router, UnitPoint};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "cacd", version, about = "Demand-aware continuous-discrete networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a network from a demand file and write graph.json, edges.csv and code_table.csv.
    Build {
        #[arg(long)]
        demand: PathBuf,
        /// Cyclic shift in [0, 1) as a decimal. Overrides --seed.
        #[arg(long)]
        shift: Option<String>,
        /// Draw the shift uniformly from this seed. Without --shift or --seed the shift is 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Route one message and print the trace as JSON.
    Route {
        /// A graph.json written by `build`.
        #[arg(long)]
        net: PathBuf,
        /// Zero-based source node.
        #[arg(long)]
        src: usize,
        /// Zero-based destination node.
        #[arg(long)]
        dst: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Fail each undirected link independently with this probability.
        #[arg(long, default_value_t = 0.0)]
        fail_prob: f64,
        /// TTL as a multiple of the failure-free hop count.
        #[arg(long, default_value_t = 3.0)]
        ttl_mult: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run an experiment and write its CSVs plus manifest.json.
    Experiment {
        #[arg(value_parser = parse_kind)]
        kind: ExperimentKind,
        /// JSON config; missing fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory. Falls back to `out` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Fwd,
    Bwd,
    Auto,
}

impl From<ModeArg> for Algorithm {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Fwd => Algorithm::Forward,
            ModeArg::Bwd => Algorithm::Backward,
            ModeArg::Auto => Algorithm::Improved,
        }
    }
}

fn parse_kind(s: &str) -> Result<ExperimentKind, String> {
    s.parse().map_err(|e: cacd::Error| e.to_string())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Build { demand, shift, seed, out } => build(&demand, shift.as_deref(), seed, &out),
        Command::Route { net, src, dst, mode, fail_prob, ttl_mult, seed } => {
            route(&net, src, dst, mode.into(), fail_prob, ttl_mult, seed)
        }
        Command::Experiment { kind, config, out, seed } => experiment(kind, config.as_deref(), out, seed),
    }
}

fn parse_shift(s: &str) -> Result<UnitPoint> {
    let v = parse_decimal_floor(s, FRACTION_BITS).with_context(|| format!("bad shift {s:?}"))?;
    let bits: u128 = v.try_into().map_err(|_| anyhow::anyhow!("shift {s} is not below 1"))?;
    Ok(UnitPoint::from_bits(bits))
}

fn build(demand: &Path, shift: Option<&str>, seed: Option<u64>, out: &Path) -> Result<()> {
    let file = DemandFile::load(demand).with_context(|| format!("reading {}", demand.display()))?;
    let r = file.to_demand()?;
    let (ps, pd) = r.marginals()?;
    let (p, side) = select_build_distribution(&ps, &pd);
    let shift = match (shift, seed) {
        (Some(s), _) => parse_shift(s)?,
        (None, Some(seed)) => UnitPoint::random(&mut ChaCha8Rng::seed_from_u64(seed)),
        (None, None) => UnitPoint::ZERO,
    };
    let net = Network::build(&p, shift)?;
    fs::create_dir_all(out)?;
    fs::write(out.join("graph.json"), GraphFile::from_network(&net, Some(side)).to_json())?;
    fs::write(out.join("edges.csv"), edge_list_csv(&net))?;
    fs::write(out.join("code_table.csv"), code_table_csv(net.placement.code_table()))?;
    eprintln!(
        "built n={} from the {} marginal: {} edges, shift {}",
        p.len(),
        match side {
            cacd::Side::Source => "source",
            cacd::Side::Destination => "destination",
        },
        net.graph.edges().len(),
        shift
    );
    Ok(())
}

fn route(net: &Path, src: usize, dst: usize, algo: Algorithm, fail_prob: f64, ttl_mult: f64, seed: u64) -> Result<()> {
    let file = GraphFile::load(net).with_context(|| format!("reading {}", net.display()))?;
    let net = file.to_network()?;
    let n = net.placement.n();
    if src >= n || dst >= n {
        bail!("nodes are 0..{n}, got src {src} dst {dst}");
    }
    if !(0.0..1.0).contains(&fail_prob) {
        bail!("--fail-prob must be in [0, 1)");
    }
    if !(ttl_mult.is_finite() && ttl_mult > 0.0) {
        bail!("--ttl-mult must be positive");
    }
    let router = Router::for_network(&net);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = FailureMask::sample(&net.graph, fail_prob, &mut rng);
    let free = router.route(src, dst, algo).hop_count() as u32;
    let ttl = ttl_for(free, ttl_mult);
    let trace = router.route_with_failures(&mask, src, dst, algo, ttl, &mut rng);
    let report = serde_json::json!({
        "src": src,
        "dst": dst,
        "algorithm": format!("{algo:?}").to_lowercase(),
        "fail_prob": fail_prob,
        "failed_links": mask.failed_count(),
        "ttl": ttl,
        "failure_free_hops": free,
        "hop_count": trace.hop_count(),
        "trace": trace,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn experiment(kind: ExperimentKind, config: Option<&Path>, out: Option<PathBuf>, seed: Option<u64>) -> Result<()> {
    let mut cfg = match config {
        Some(p) => ExperimentConfig::from_json(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let Some(out) = out.or_else(|| cfg.out.clone()) else {
        bail!("no output directory: pass --out or set `out` in the config");
    };
    let result = harness::run(kind, &cfg)?;
    fs::create_dir_all(&out)?;
    let mut files = Vec::new();
    for (name, table) in &result.tables {
        let file = format!("{name}.csv");
        table.save(&out.join(&file))?;
        files.push(file);
    }
    let manifest = Manifest {
        experiment: kind.name().to_owned(),
        seed: cfg.seed,
        config: cfg,
        build: format!("cacd {}", env!("CARGO_PKG_VERSION")),
        files,
    };
    fs::write(out.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    for f in &manifest.files {
        eprintln!("wrote {}", out.join(f).display());
    }
    Ok(())
}
