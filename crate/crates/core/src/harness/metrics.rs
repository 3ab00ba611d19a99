//! Metrics over a single built network: expected path length, degrees,
//! relay load, delivery under failures, cuts and bridges.

use petgraph::graph::UnGraph;
use petgraph::visit::EdgeRef;
use rand::Rng;
use rayon::prelude::*;

use crate::demand::{DemandMatrix, MASS_ONE};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::routing::{Algorithm, Router};
use crate::topology::{DiscreteGraph, FailureMask, Placement};

/// `R_ij` as reals, row-major.
pub fn demand_weights<F: Real>(r: &DemandMatrix) -> Vec<F> {
    let n = r.n();
    if let Some((ps, pd)) = r.product_factors() {
        let (a, b): (Vec<F>, Vec<F>) =
            (ps.probs().iter().map(|q| q.to_real()).collect(), pd.probs().iter().map(|q| q.to_real()).collect());
        return a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect();
    }
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| r.entry_real(i, j)).collect()
}

/// Failure-free hop counts for every ordered pair, row-major.
pub fn pair_hops(router: &Router<'_>, algo: Algorithm) -> Vec<u32> {
    let n = router.n();
    let rows: Vec<Vec<u32>> =
        (0..n).into_par_iter().map(|i| (0..n).map(|j| router.hop_count(i, j, algo)).collect()).collect();
    rows.concat()
}

/// `Σ_ij R_ij · hops(i, j)`, summed row by row.
pub fn epl_from_hops<F: Real>(weights: &[F], hops: &[u32], n: usize) -> F {
    debug_assert_eq!(weights.len(), n * n);
    weights
        .chunks(n)
        .zip(hops.chunks(n))
        .map(|(w, h)| w.iter().zip(h).map(|(&w, &h)| w * F::from_u32(h).unwrap()).sum::<F>())
        .sum()
}

/// Expected path length of `algo` under demand `r`, routing every pair.
pub fn epl<F: Real>(r: &DemandMatrix, router: &Router<'_>, algo: Algorithm) -> F {
    let n = router.n();
    assert_eq!(r.n(), n, "demand and network sizes differ");
    epl_from_hops(&demand_weights::<F>(r), &pair_hops(router, algo), n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeRow<F> {
    pub node: usize,
    pub p: F,
    pub out_degree: usize,
    pub in_degree: usize,
}

/// Non-ring degrees next to each node's probability.
pub fn degree_vs_activity<F: Real>(g: &DiscreteGraph, pl: &Placement) -> Vec<DegreeRow<F>> {
    (0..g.n())
        .map(|i| DegreeRow { node: i, p: pl.prob(i).to_real(), out_degree: g.out_degree(i), in_degree: g.in_degree(i) })
        .collect()
}

/// `1 + (n - 3) p / 2`
pub fn expected_out_degree<F: Real>(n: usize, p: F) -> F {
    F::one() + F::lit(0.5) * (F::from_usize(n).unwrap() - F::lit(3.0)) * p
}

/// `1/2 + (n - 3/2) p`
pub fn expected_in_degree<F: Real>(n: usize, p: F) -> F {
    F::lit(0.5) + (F::from_usize(n).unwrap() - F::lit(1.5)) * p
}

/// For each node `k`, the total `R_ij` of routes that pass through it with
/// `i, j ≠ k`.
pub fn relay_load<F: Real>(r: &DemandMatrix, router: &Router<'_>, algo: Algorithm) -> Vec<F> {
    let n = router.n();
    let w = demand_weights::<F>(r);
    let per_row: Vec<Vec<F>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut load = vec![F::zero(); n];
            for j in 0..n {
                let h = router.route(i, j, algo).hops;
                // a greedy route may pass the same relay twice; count it once
                for (x, &k) in h.iter().enumerate() {
                    if k != i && k != j && !h[..x].contains(&k) {
                        load[k] = load[k] + w[i * n + j];
                    }
                }
            }
            load
        })
        .collect();
    (0..n).map(|k| per_row.iter().map(|row| row[k]).sum()).collect()
}

/// `⌈mult · hops⌉`, at least one.
pub fn ttl_for(free_hops: u32, mult: f64) -> u32 {
    ((mult * free_hops as f64).ceil() as u32).max(1)
}

/// Demand-weighted fraction of pairs delivered under `mask`, with the TTL of
/// each pair set from its failure-free hop count. Pairs are routed in
/// row-major order from one RNG stream.
pub fn success_fraction<F: Real, R: Rng + ?Sized>(
    weights: &[F],
    router: &Router<'_>,
    mask: &FailureMask,
    free_hops: &[u32],
    ttl_mult: f64,
    rng: &mut R,
) -> F {
    let n = router.n();
    let mut total = F::zero();
    for i in 0..n {
        let mut row = F::zero();
        for j in 0..n {
            let w = weights[i * n + j];
            if w == F::zero() {
                continue;
            }
            if router.delivers_with_failures(mask, i, j, ttl_for(free_hops[i * n + j], ttl_mult), rng) {
                row = row + w;
            }
        }
        total = total + row;
    }
    total
}

/// `p_S` in `2^-127` units.
pub fn set_mass(pl: &Placement, set: &[usize]) -> u128 {
    set.iter().map(|&i| pl.prob(i).mass()).sum()
}

/// Live undirected edges between `set` and the rest. Requires `p_S ≤ 1/2`.
pub fn cut_probe(g: &DiscreteGraph, pl: &Placement, mask: Option<&FailureMask>, set: &[usize]) -> Result<usize> {
    let size = cut_size(g, mask, set)?;
    if set_mass(pl, set) > MASS_ONE / 2 {
        return Err(Error::InvalidSet);
    }
    Ok(size)
}

/// Live undirected edges between `set` and the rest, for any set.
pub fn cut_size(g: &DiscreteGraph, mask: Option<&FailureMask>, set: &[usize]) -> Result<usize> {
    let n = g.n();
    let mut inside = vec![false; n];
    for &i in set {
        if i >= n {
            return Err(Error::NodeOutOfRange { index: i, n });
        }
        if inside[i] {
            return Err(Error::InvalidSet);
        }
        inside[i] = true;
    }
    Ok(g.pairs()
        .iter()
        .enumerate()
        .filter(|(id, &(a, b))| inside[a] != inside[b] && mask.is_none_or(|m| m.is_alive(*id as u32)))
        .count())
}

/// Undirected pairs whose removal disconnects the graph.
pub fn bridges(g: &DiscreteGraph) -> Vec<(usize, usize)> {
    let mut ug = UnGraph::<(), ()>::with_capacity(g.n(), g.pairs().len());
    for _ in 0..g.n() {
        ug.add_node(());
    }
    for &(a, b) in g.pairs() {
        ug.add_edge((a as u32).into(), (b as u32).into(), ());
    }
    let mut out: Vec<(usize, usize)> =
        petgraph::algo::bridges(&ug).map(|e| (e.source().index(), e.target().index())).collect();
    out.sort_unstable();
    out
}

pub fn mean<F: Real>(xs: &[F]) -> F {
    if xs.is_empty() {
        return F::nan();
    }
    xs.iter().copied().sum::<F>() / F::from_usize(xs.len()).unwrap()
}

/// Sample standard deviation; zero for fewer than two values.
pub fn sample_std<F: Real>(xs: &[F]) -> F {
    if xs.len() < 2 {
        return F::zero();
    }
    let m = mean(xs);
    let ss: F = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    (ss / F::from_usize(xs.len() - 1).unwrap()).sqrt()
}

/// Pearson correlation; NaN when either side is constant.
pub fn pearson<F: Real>(xs: &[F], ys: &[F]) -> F {
    assert_eq!(xs.len(), ys.len());
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxy = F::zero();
    let mut sxx = F::zero();
    let mut syy = F::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxy = sxy + (x - mx) * (y - my);
        sxx = sxx + (x - mx) * (x - mx);
        syy = syy + (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}
