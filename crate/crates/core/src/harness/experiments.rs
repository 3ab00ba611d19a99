//! Experiment sweeps over Zipf workloads. Every sweep returns plain tables;
//! trials run in parallel and are reassembled in trial order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::demand::{entropy, product_demand, random_permutation, select_build_distribution, zipf, DemandMatrix, Distribution, MASS_ONE};
use crate::error::{Error, Result, Side};
use crate::harness::config::{trial_rng, ExperimentConfig};
use crate::harness::metrics::{
    cut_size, demand_weights, epl_from_hops, expected_in_degree, expected_out_degree, mean, pair_hops, pearson,
    relay_load, set_mass, success_fraction,
};
use crate::harness::table::{Cell, MetricsTable};
use crate::coding::expected_code_length;
use crate::point::UnitPoint;
use crate::routing::{Algorithm, Router};
use crate::topology::{FailureMask, Network};

/// One random realization: independently permuted marginals, their product
/// demand, the demand-aware network and the uniform baseline.
#[derive(Debug, Clone)]
pub struct Instance {
    pub source: Distribution,
    pub dest: Distribution,
    pub demand: DemandMatrix,
    pub side: Side,
    pub cacd: Network,
    pub baseline: Network,
}

impl Instance {
    pub fn zipf<R: Rng + ?Sized>(n: usize, s_source: f64, s_dest: f64, rng: &mut R) -> Result<Self> {
        let ps = zipf(n, s_source)?.permuted(&random_permutation(n, rng))?;
        let pd = zipf(n, s_dest)?.permuted(&random_permutation(n, rng))?;
        Self::from_marginals(ps, pd, rng)
    }

    pub fn from_marginals<R: Rng + ?Sized>(source: Distribution, dest: Distribution, rng: &mut R) -> Result<Self> {
        let demand = product_demand(&source, &dest)?;
        let (p, side) = select_build_distribution(&source, &dest);
        let cacd = Network::build(&p, UnitPoint::random(rng))?;
        let baseline = Network::baseline(source.len(), UnitPoint::random(rng))?;
        Ok(Instance { source, dest, demand, side, cacd, baseline })
    }

    pub fn n(&self) -> usize {
        self.source.len()
    }

    /// `H` of the marginal the network was built from.
    pub fn build_entropy(&self) -> f64 {
        entropy(self.cacd.placement.distribution())
    }

    /// `p_s + p_d` per node, as reals.
    pub fn activity(&self) -> Vec<f64> {
        self.source.to_f64_vec().iter().zip(self.dest.to_f64_vec()).map(|(a, b)| a + b).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Epl,
    Degree,
    Load,
    Failures,
    Scaling,
    Cuts,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Epl,
        ExperimentKind::Degree,
        ExperimentKind::Load,
        ExperimentKind::Failures,
        ExperimentKind::Scaling,
        ExperimentKind::Cuts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Epl => "epl",
            ExperimentKind::Degree => "degree",
            ExperimentKind::Load => "load",
            ExperimentKind::Failures => "failures",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Cuts => "cuts",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown experiment {s:?}")))
    }
}

/// Named tables produced by one experiment, e.g. `epl_trials`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub kind: ExperimentKind,
    pub tables: Vec<(String, MetricsTable)>,
}

impl ExperimentOutput {
    pub fn table(&self, name: &str) -> Option<&MetricsTable> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

pub fn run(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let tables = match kind {
        ExperimentKind::Epl => epl_sweep(cfg)?,
        ExperimentKind::Degree => degree_sweep(cfg)?,
        ExperimentKind::Load => load_sweep(cfg)?,
        ExperimentKind::Failures => failure_sweep(cfg)?,
        ExperimentKind::Scaling => scaling_sweep(cfg)?,
        ExperimentKind::Cuts => cut_sweep(cfg)?,
    };
    Ok(ExperimentOutput { kind, tables: tables.into_iter().map(|(n, t)| (format!("{kind}_{n}"), t)).collect() })
}

/// Runs `f` for each (cell, trial) and returns results in that order.
fn per_trial<C: Sync, T: Send>(
    cells: &[C],
    trials: usize,
    f: impl Fn(usize, &C, usize) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let jobs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..trials).map(move |t| (c, t))).collect();
    jobs.into_par_iter().map(|(c, t)| f(c, &cells[c], t)).collect()
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Source => "source",
        Side::Destination => "destination",
    }
}

fn s_key(s: f64) -> u64 {
    s.to_bits()
}

/// Expected path length across Zipf exponents, with the path length per
/// request-probability decade.
pub fn epl_sweep(cfg: &ExperimentConfig) -> Result<Vec<(String, MetricsTable)>> {
    struct Trial {
        row: Vec<Cell>,
        bins: BTreeMap<i32, (usize, f64, f64)>,
    }
    let n = cfg.n;
    let results = per_trial(&cfg.exponents, cfg.trials, |_, &s, t| {
        let mut rng = trial_rng(cfg.seed, "epl", s_key(s), t as u64);
        let inst = Instance::zipf(n, s, s, &mut rng)?;
        let w: Vec<f64> = demand_weights(&inst.demand);
        let cacd = Router::for_network(&inst.cacd);
        let base = Router::for_network(&inst.baseline);
        let hops_i = pair_hops(&cacd, Algorithm::Improved);
        let hops_b = pair_hops(&base, Algorithm::Improved);
        let e = |h: &[u32]| epl_from_hops(&w, h, n);
        let (hs, hd): (f64, f64) = (entropy(&inst.source), entropy(&inst.dest));
        let row = vec![
            s.into(),
            t.into(),
            n.into(),
            side_name(inst.side).into(),
            hs.into(),
            hd.into(),
            inst.build_entropy().into(),
            expected_code_length::<f64>(inst.cacd.placement.distribution()).into(),
            e(&pair_hops(&cacd, Algorithm::Forward)).into(),
            e(&pair_hops(&cacd, Algorithm::Backward)).into(),
            e(&hops_i).into(),
            e(&hops_b).into(),
        ];
        let mut bins = BTreeMap::new();
        for k in 0..n * n {
            if w[k] > 0.0 {
                let b = bins.entry(w[k].log10().floor() as i32).or_insert((0, 0.0, 0.0));
                b.0 += 1;
                b.1 += hops_i[k] as f64;
                b.2 += hops_b[k] as f64;
            }
        }
        Ok(Trial { row, bins })
    })?;

    let mut trials = MetricsTable::new(&[
        "s",
        "trial",
        "n",
        "build_side",
        "entropy_source",
        "entropy_dest",
        "entropy_build",
        "code_length",
        "epl_forward",
        "epl_backward",
        "epl_improved",
        "epl_baseline",
    ]);
    let mut by_s: Vec<BTreeMap<i32, (usize, f64, f64)>> = vec![BTreeMap::new(); cfg.exponents.len()];
    for (k, r) in results.into_iter().enumerate() {
        trials.push(r.row);
        let acc = &mut by_s[k / cfg.trials];
        for (b, (c, x, y)) in r.bins {
            let e = acc.entry(b).or_insert((0, 0.0, 0.0));
            e.0 += c;
            e.1 += x;
            e.2 += y;
        }
    }
    let summary = trials.summarize(
        &["s"],
        &["entropy_build", "code_length", "epl_forward", "epl_backward", "epl_improved", "epl_baseline"],
    );
    let mut path = MetricsTable::new(&["s", "log10_prob", "pairs", "hops_cacd", "hops_baseline"]);
    for (s, bins) in cfg.exponents.iter().zip(by_s) {
        for (b, (c, x, y)) in bins {
            path.push(vec![(*s).into(), (b as i64).into(), c.into(), (x / c as f64).into(), (y / c as f64).into()]);
        }
    }
    Ok(vec![("trials".into(), trials), ("summary".into(), summary), ("path_length".into(), path)])
}

/// Per-node degrees against activity, averaged over realizations.
pub fn degree_sweep(cfg: &ExperimentConfig) -> Result<Vec<(String, MetricsTable)>> {
    let n = cfg.n;
    let results = per_trial(&cfg.exponents, cfg.trials, |_, &s, t| {
        let mut rng = trial_rng(cfg.seed, "degree", s_key(s), t as u64);
        let inst = Instance::zipf(n, s, s, &mut rng)?;
        let (g, b) = (&inst.cacd.graph, &inst.baseline.graph);
        let act = inst.activity();
        Ok((0..n)
            .map(|i| {
                let p = inst.cacd.placement.prob(i).to_f64();
                vec![
                    s.into(),
                    t.into(),
                    i.into(),
                    p.into(),
                    act[i].into(),
                    g.out_degree(i).into(),
                    g.in_degree(i).into(),
                    b.out_degree(i).into(),
                    b.in_degree(i).into(),
                    expected_out_degree(n, p).into(),
                    expected_in_degree(n, p).into(),
                ]
            })
            .collect::<Vec<Vec<Cell>>>())
    })?;
    let mut nodes = MetricsTable::new(&[
        "s",
        "trial",
        "node",
        "p",
        "activity",
        "out_degree",
        "in_degree",
        "out_degree_baseline",
        "in_degree_baseline",
        "predicted_out",
        "predicted_in",
    ]);
    for rows in results {
        for r in rows {
            nodes.push(r);
        }
    }
    let summary = nodes.summarize(
        &["s", "p"],
        &["out_degree", "in_degree", "out_degree_baseline", "in_degree_baseline", "predicted_out", "predicted_in"],
    );
    Ok(vec![("nodes".into(), nodes), ("summary".into(), summary)])
}

/// Mean non-ring out- and in-degree of each node of `p` over `shifts`
/// uniformly random shifts.
pub fn mean_degrees_over_shifts(p: &Distribution, shifts: usize, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = p.len();
    let per: Vec<(Vec<usize>, Vec<usize>)> = (0..shifts)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, "shift", 0, k as u64);
            let net = Network::build(p, UnitPoint::random(&mut rng))?;
            Ok(((0..n).map(|i| net.graph.out_degree(i)).collect(), (0..n).map(|i| net.graph.in_degree(i)).collect()))
        })
        .collect::<Result<_>>()?;
    let avg = |pick: &dyn Fn(&(Vec<usize>, Vec<usize>)) -> &Vec<usize>| -> Vec<f64> {
        (0..n).map(|i| per.iter().map(|d| pick(d)[i] as f64).sum::<f64>() / shifts as f64).collect()
    };
    Ok((avg(&|d| &d.0), avg(&|d| &d.1)))
}

/// Relay load against activity for both networks.
pub fn load_sweep(cfg: &ExperimentConfig) -> Result<Vec<(String, MetricsTable)>> {
    let n = cfg.n;
    let results = per_trial(&cfg.exponents, cfg.trials, |_, &s, t| {
        let mut rng = trial_rng(cfg.seed, "load", s_key(s), t as u64);
        let inst = Instance::zipf(n, s, s, &mut rng)?;
        let lc: Vec<f64> = relay_load(&inst.demand, &Router::for_network(&inst.cacd), Algorithm::Improved);
        let lb: Vec<f64> = relay_load(&inst.demand, &Router::for_network(&inst.baseline), Algorithm::Improved);
        let act = inst.activity();
        let trial_row: Vec<Cell> = vec![
            s.into(),
            t.into(),
            pearson(&act, &lc).into(),
            pearson(&act, &lb).into(),
            mean(&lc).into(),
            mean(&lb).into(),
        ];
        let node_rows: Vec<Vec<Cell>> = (0..n)
            .map(|i| vec![s.into(), t.into(), i.into(), act[i].into(), lc[i].into(), lb[i].into()])
            .collect();
        Ok((trial_row, node_rows))
    })?;
    let mut trials = MetricsTable::new(&["s", "trial", "corr_cacd", "corr_baseline", "mean_load_cacd", "mean_load_baseline"]);
    let mut nodes = MetricsTable::new(&["s", "trial", "node", "activity", "load_cacd", "load_baseline"]);
    for (tr, nr) in results {
        trials.push(tr);
        for r in nr {
            nodes.push(r);
        }
    }
    let summary = trials.summarize(&["s"], &["corr_cacd", "corr_baseline", "mean_load_cacd", "mean_load_baseline"]);
    Ok(vec![("trials".into(), trials), ("nodes".into(), nodes), ("summary".into(), summary)])
}

/// Weighted delivery under random edge failures for every (f, TTL
/// multiplier) pair.
pub fn failure_sweep(cfg: &ExperimentConfig) -> Result<Vec<(String, MetricsTable)>> {
    let n = cfg.n;
    let results = per_trial(&cfg.exponents, cfg.trials, |_, &s, t| {
        let trial = t as u64;
        let mut rng = trial_rng(cfg.seed, "failures", s_key(s), trial);
        let inst = Instance::zipf(n, s, s, &mut rng)?;
        let w: Vec<f64> = demand_weights(&inst.demand);
        let nets = [Router::for_network(&inst.cacd), Router::for_network(&inst.baseline)];
        let free: Vec<Vec<u32>> = nets.iter().map(|r| pair_hops(r, Algorithm::Improved)).collect();
        let mut rows = Vec::new();
        for (fi, &f) in cfg.failure_probs.iter().enumerate() {
            let mut mask_rng = trial_rng(cfg.seed, "failures-mask", s_key(s) ^ fi as u64, trial);
            let masks: Vec<FailureMask> = nets.iter().map(|r| FailureMask::sample(r.graph(), f, &mut mask_rng)).collect();
            for (ki, &k) in cfg.ttl_multipliers.iter().enumerate() {
                let mut route_rng = trial_rng(cfg.seed, "failures-route", s_key(s) ^ ((fi as u64) << 32 | ki as u64), trial);
                let succ: Vec<f64> = (0..2)
                    .map(|x| success_fraction(&w, &nets[x], &masks[x], &free[x], k, &mut route_rng))
                    .collect();
                rows.push(vec![
                    s.into(),
                    t.into(),
                    f.into(),
                    k.into(),
                    masks[0].failed_count().into(),
                    masks[1].failed_count().into(),
                    succ[0].into(),
                    succ[1].into(),
                ]);
            }
        }
        Ok(rows)
    })?;
    let mut trials = MetricsTable::new(&[
        "s",
        "trial",
        "f",
        "ttl_mult",
        "failed_cacd",
        "failed_baseline",
        "success_cacd",
        "success_baseline",
    ]);
    for rows in results {
        for r in rows {
            trials.push(r);
        }
    }
    let summary = trials.summarize(&["s", "f", "ttl_mult"], &["success_cacd", "success_baseline"]);
    Ok(vec![("trials".into(), trials), ("summary".into(), summary)])
}

/// Expected path length as the network grows.
pub fn scaling_sweep(cfg: &ExperimentConfig) -> Result<Vec<(String, MetricsTable)>> {
    let cells: Vec<(usize, f64)> = cfg.sizes.iter().flat_map(|&n| cfg.exponents.iter().map(move |&s| (n, s))).collect();
    let rows = per_trial(&cells, cfg.trials, |_, &(n, s), t| {
        let mut rng = trial_rng(cfg.seed, "scaling", (n as u64) << 32 ^ s_key(s), t as u64);
        let inst = Instance::zipf(n, s, s, &mut rng)?;
        let w: Vec<f64> = demand_weights(&inst.demand);
        let ec = epl_from_hops(&w, &pair_hops(&Router::for_network(&inst.cacd), Algorithm::Improved), n);
        let eb = epl_from_hops(&w, &pair_hops(&Router::for_network(&inst.baseline), Algorithm::Improved), n);
        let h = inst.build_entropy();
        Ok(vec![
            n.into(),
            s.into(),
            t.into(),
            (n as f64).log2().into(),
            h.into(),
            ec.into(),
            eb.into(),
            (ec - h).into(),
        ])
    })?;
    let mut trials =
        MetricsTable::new(&["n", "s", "trial", "log2_n", "entropy", "epl_cacd", "epl_baseline", "epl_minus_entropy"]);
    for r in rows {
        trials.push(r);
    }
    let summary = trials.summarize(&["n", "s"], &["log2_n", "entropy", "epl_cacd", "epl_baseline", "epl_minus_entropy"]);
    Ok(vec![("trials".into(), trials), ("summary".into(), summary)])
}

/// Greedy set of nodes taken in `order` until `p_S` reaches `target`,
/// skipping any node that would push it past one half.
pub fn mass_set(p: &Distribution, order: &[usize], target: f64) -> Vec<usize> {
    let goal = (target * MASS_ONE as f64) as u128;
    let mut mass = 0u128;
    let mut set = Vec::new();
    for &i in order {
        if mass >= goal {
            break;
        }
        let m = p.prob(i).mass();
        if 2 * (mass + m) <= MASS_ONE {
            mass += m;
            set.push(i);
        }
    }
    set
}

/// Cut sizes of heavy-prefix and random node sets with `p_S ≈ cut_mass`.
pub fn cut_sweep(cfg: &ExperimentConfig) -> Result<Vec<(String, MetricsTable)>> {
    let cells: Vec<(usize, f64)> = cfg.sizes.iter().flat_map(|&n| cfg.exponents.iter().map(move |&s| (n, s))).collect();
    let results = per_trial(&cells, cfg.trials, |_, &(n, s), t| {
        let mut rng = trial_rng(cfg.seed, "cuts", (n as u64) << 32 ^ s_key(s), t as u64);
        let inst = Instance::zipf(n, s, s, &mut rng)?;
        let p = inst.cacd.placement.distribution();
        let mut heavy: Vec<usize> = (0..n).collect();
        heavy.sort_by_key(|&i| std::cmp::Reverse(p.prob(i).mass()));
        let mut random: Vec<usize> = (0..n).collect();
        random.shuffle(&mut rng);
        let mut rows = Vec::new();
        for (kind, order) in [("heavy", heavy), ("random", random)] {
            let set = mass_set(p, &order, cfg.cut_mass);
            let pc = set_mass(&inst.cacd.placement, &set) as f64 / MASS_ONE as f64;
            rows.push(vec![
                n.into(),
                s.into(),
                t.into(),
                kind.into(),
                set.len().into(),
                pc.into(),
                cut_size(&inst.cacd.graph, None, &set)?.into(),
                cut_size(&inst.baseline.graph, None, &set)?.into(),
            ]);
        }
        Ok(rows)
    })?;
    let mut trials = MetricsTable::new(&["n", "s", "trial", "kind", "set_size", "p_s", "cut_cacd", "cut_baseline"]);
    for rows in results {
        for r in rows {
            trials.push(r);
        }
    }
    let summary = trials.summarize(&["n", "s", "kind"], &["set_size", "p_s", "cut_cacd", "cut_baseline"]);
    Ok(vec![("trials".into(), trials), ("summary".into(), summary)])
}
