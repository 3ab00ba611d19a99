//! Discretization of the continuous graph into a network: node placement,
//! segment ownership, edge derivation, the ring and the uniform baseline.

use std::ops::Range;

use num_rational::Ratio;
use rand::Rng;

use crate::coding::CodeTable;
use crate::continuum::{image_left, image_right, Segment};
use crate::demand::{Distribution, Prob};
use crate::error::{Error, Result};
use crate::point::{UnitPoint, FRACTION_BITS};

/// Node positions, segments and codes for a distribution and a shift.
#[derive(Debug, Clone)]
pub struct Placement {
    dist: Distribution,
    shift: UnitPoint,
    points: Vec<UnitPoint>,
    segments: Vec<Segment>,
    code_table: CodeTable,
    /// `(start, node)` sorted by the absolute value of the start.
    by_start: Vec<(u128, usize)>,
}

/// `x_i = shift + F_{i-1}`, segment `i` of length `p_i`.
///
/// Rejects `n < 2` and distributions whose longest codeword exceeds half
/// the fraction width (so that two concatenated codewords always fit).
pub fn place(p: &Distribution, shift: UnitPoint) -> Result<Placement> {
    let n = p.len();
    if n < 2 {
        return Err(Error::InvalidDistribution(format!("a network needs at least 2 nodes, got {n}")));
    }
    let code_table = CodeTable::build(p, shift);
    let max_len = code_table.max_length();
    if 2 * max_len > FRACTION_BITS {
        return Err(Error::PrecisionExceeded(format!(
            "p_min = {:e} gives codewords of {max_len} bits; at most {} fit",
            p.p_min().to_f64(),
            FRACTION_BITS / 2
        )));
    }
    let mut points = Vec::with_capacity(n);
    let mut segments = Vec::with_capacity(n);
    let mut before = 0u128;
    for q in p.probs() {
        let x = shift.wrapping_add(UnitPoint::from_bits(before << 1));
        points.push(x);
        // n >= 2 so every p_i < 1 and 2 * mass fits
        segments.push(Segment::new(x, q.mass() << 1));
        before += q.mass();
    }
    let mut by_start: Vec<(u128, usize)> = points.iter().enumerate().map(|(i, x)| (x.bits(), i)).collect();
    by_start.sort_unstable();
    Ok(Placement { dist: p.clone(), shift, points, segments, code_table, by_start })
}

impl Placement {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn shift(&self) -> UnitPoint {
        self.shift
    }

    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    pub fn prob(&self, i: usize) -> Prob {
        self.dist.prob(i)
    }

    pub fn points(&self) -> &[UnitPoint] {
        &self.points
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment(&self, i: usize) -> &Segment {
        &self.segments[i]
    }

    pub fn code_table(&self) -> &CodeTable {
        &self.code_table
    }

    /// The node whose segment contains `y`.
    pub fn covers(&self, y: UnitPoint) -> usize {
        let idx = self.by_start.partition_point(|&(s, _)| s <= y.bits());
        if idx == 0 {
            // before every start: inside the segment that wraps through zero
            self.by_start[self.by_start.len() - 1].1
        } else {
            self.by_start[idx - 1].1
        }
    }

    /// Nodes whose segments meet the non-wrapping range `lo..=hi`.
    fn nodes_meeting(&self, lo: u128, hi: u128) -> impl Iterator<Item = usize> + '_ {
        let first = self.covers(UnitPoint::from_bits(lo));
        let a = self.by_start.partition_point(|&(s, _)| s <= lo);
        let b = self.by_start.partition_point(|&(s, _)| s <= hi);
        std::iter::once(first).chain(self.by_start[a..b].iter().map(|&(_, i)| i))
    }

    /// Nodes whose segments intersect `arc`.
    pub fn nodes_meeting_segment(&self, arc: &Segment) -> Vec<usize> {
        let mut out: Vec<usize> = arc.pieces().into_iter().flat_map(|(lo, hi)| self.nodes_meeting(lo, hi)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub fn covers(pl: &Placement, y: UnitPoint) -> usize {
    pl.covers(y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Left,
    Right,
    Ring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub kind: EdgeKind,
}

/// Index of an undirected node pair; failures are tracked per pair.
pub type PairId = u32;

/// Directed, typed edges of the discrete network, with a reverse index and
/// an undirected view used for failures and cuts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteGraph {
    n: usize,
    /// Sorted by `(src, dst, kind)`.
    edges: Vec<Edge>,
    out_ranges: Vec<Range<usize>>,
    in_edges: Vec<Vec<usize>>,
    pairs: Vec<(usize, usize)>,
    /// Per node: `(neighbor, pair)` sorted by neighbor.
    neighbors: Vec<Vec<(usize, PairId)>>,
}

impl DiscreteGraph {
    /// Builds the indexes; drops self-loops and duplicate triples.
    pub fn from_edges(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.retain(|e| e.src != e.dst);
        edges.sort_unstable();
        edges.dedup();
        let mut out_ranges = vec![0..0; n];
        let mut in_edges = vec![Vec::new(); n];
        let mut start = 0;
        for (k, e) in edges.iter().enumerate() {
            if k > 0 && edges[k - 1].src != e.src {
                start = k;
            }
            out_ranges[e.src] = start..k + 1;
            in_edges[e.dst].push(k);
        }
        let mut pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.src.min(e.dst), e.src.max(e.dst))).collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut neighbors = vec![Vec::new(); n];
        for (id, &(a, b)) in pairs.iter().enumerate() {
            neighbors[a].push((b, id as PairId));
            neighbors[b].push((a, id as PairId));
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        DiscreteGraph { n, edges, out_ranges, in_edges, pairs, neighbors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, i: usize) -> &[Edge] {
        &self.edges[self.out_ranges[i].clone()]
    }

    /// Reverse adjacency: edges ending at `i`.
    pub fn in_edges(&self, i: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.in_edges[i].iter().map(|&k| &self.edges[k])
    }

    pub fn has_edge(&self, src: usize, dst: usize, kind: EdgeKind) -> bool {
        self.out_edges(src).binary_search(&Edge { src, dst, kind }).is_ok()
    }

    /// Undirected pairs `(a, b)` with `a < b`.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_id(&self, a: usize, b: usize) -> Option<PairId> {
        let list = &self.neighbors[a];
        list.binary_search_by_key(&b, |&(v, _)| v).ok().map(|k| list[k].1)
    }

    /// Distinct undirected neighbors of `i`.
    pub fn neighbors(&self, i: usize) -> &[(usize, PairId)] {
        &self.neighbors[i]
    }

    /// Left and right edges, counted as typed triples.
    pub fn non_ring_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.kind != EdgeKind::Ring).count()
    }

    /// Distinct directed pairs joined by a left or right edge.
    pub fn non_ring_arc_count(&self) -> usize {
        (0..self.n).map(|i| self.out_degree(i)).sum()
    }

    /// Distinct out-neighbors over left and right edges.
    pub fn out_degree(&self, i: usize) -> usize {
        let mut dsts: Vec<usize> =
            self.out_edges(i).iter().filter(|e| e.kind != EdgeKind::Ring).map(|e| e.dst).collect();
        dsts.dedup(); // sorted by dst already
        dsts.len()
    }

    /// Distinct in-neighbors over left and right edges.
    pub fn in_degree(&self, i: usize) -> usize {
        let mut srcs: Vec<usize> = self.in_edges(i).filter(|e| e.kind != EdgeKind::Ring).map(|e| e.src).collect();
        srcs.sort_unstable();
        srcs.dedup();
        srcs.len()
    }

    /// The same graph without its ring edges.
    pub fn without_ring(&self) -> DiscreteGraph {
        DiscreteGraph::from_edges(self.n, self.edges.iter().copied().filter(|e| e.kind != EdgeKind::Ring).collect())
    }
}

/// Left/right edges from intersecting segment images, plus the ring
/// `v_0 → v_1 → … → v_{n-1} → v_0`.
pub fn build(pl: &Placement) -> DiscreteGraph {
    let n = pl.n();
    let mut edges = Vec::with_capacity(4 * n);
    for (i, seg) in pl.segments().iter().enumerate() {
        for (kind, images) in [(EdgeKind::Left, image_left(seg)), (EdgeKind::Right, image_right(seg))] {
            for img in &images {
                for (lo, hi) in img.pieces() {
                    for j in pl.nodes_meeting(lo, hi) {
                        edges.push(Edge { src: i, dst: j, kind });
                    }
                }
            }
        }
        edges.push(Edge { src: i, dst: (i + 1) % n, kind: EdgeKind::Ring });
    }
    DiscreteGraph::from_edges(n, edges)
}

/// A placement together with its graph.
#[derive(Debug, Clone)]
pub struct Network {
    pub placement: Placement,
    pub graph: DiscreteGraph,
}

impl Network {
    pub fn build(p: &Distribution, shift: UnitPoint) -> Result<Self> {
        let placement = place(p, shift)?;
        let graph = build(&placement);
        Ok(Network { placement, graph })
    }

    /// The same pipeline over `1/n` each.
    pub fn baseline(n: usize, shift: UnitPoint) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDistribution(format!("a network needs at least 2 nodes, got {n}")));
        }
        Self::build(&Distribution::uniform(n)?, shift)
    }

    pub fn n(&self) -> usize {
        self.placement.n()
    }
}

pub fn build_baseline(n: usize, shift: UnitPoint) -> Result<(Placement, DiscreteGraph)> {
    let net = Network::baseline(n, shift)?;
    Ok((net.placement, net.graph))
}

/// Per-node dead flags for the undirected pairs of a graph. One overlay per
/// trial; the graph itself never changes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureMask {
    dead: Vec<bool>,
}

impl FailureMask {
    pub fn none(g: &DiscreteGraph) -> Self {
        FailureMask { dead: vec![false; g.pairs().len()] }
    }

    /// Each undirected pair fails independently with probability `f`.
    pub fn sample<R: Rng + ?Sized>(g: &DiscreteGraph, f: f64, rng: &mut R) -> Self {
        FailureMask { dead: (0..g.pairs().len()).map(|_| rng.gen::<f64>() < f).collect() }
    }

    pub fn fail(&mut self, pair: PairId) {
        self.dead[pair as usize] = true;
    }

    pub fn is_alive(&self, pair: PairId) -> bool {
        !self.dead[pair as usize]
    }

    pub fn failed_count(&self) -> usize {
        self.dead.iter().filter(|d| **d).count()
    }
}

/// `ρ = max_i p_i / p_min` and the per-node ratios, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub rho: Ratio<u128>,
    pub rho_i: Vec<Ratio<u128>>,
}

impl SmoothnessReport {
    pub fn rho_f64(&self) -> f64 {
        ratio_f64(&self.rho)
    }

    /// `out_degree ≤ ρ_i + 4`, compared exactly.
    pub fn out_degree_within_bound(&self, i: usize, out_degree: usize) -> bool {
        let r = &self.rho_i[i];
        // d - 4 <= a / b  <=>  (d - 4) b <= a
        out_degree <= 4 || (out_degree as u128 - 4) * r.denom() <= *r.numer()
    }

    /// `⌈2ρ_i⌉ + 1`.
    pub fn in_degree_bound(&self, i: usize) -> u128 {
        let r = &self.rho_i[i];
        let (a, b) = (*r.numer(), *r.denom());
        2 * (a / b) + (2 * (a % b)).div_ceil(b) + 1
    }
}

fn ratio_f64(r: &Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn smoothness(pl: &Placement) -> SmoothnessReport {
    let p_min = pl.distribution().p_min().mass();
    let rho_i: Vec<Ratio<u128>> = pl.distribution().probs().iter().map(|q| Ratio::new(q.mass(), p_min)).collect();
    let rho = *rho_i.iter().max().expect("non-empty");
    SmoothnessReport { rho, rho_i }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example6() -> Distribution {
        Distribution::from_decimals(&["0.1", "0.15", "0.2", "0.25", "0.1", "0.2"]).unwrap()
    }

    #[test]
    fn example6_points() {
        let pl = place(&example6(), UnitPoint::ZERO).unwrap();
        let xs: Vec<f64> = pl.points().iter().map(|x| x.to_f64()).collect();
        for (x, want) in xs.iter().zip([0.0, 0.1, 0.25, 0.45, 0.7, 0.8]) {
            assert!((x - want).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_points() {
        let pl = place(&Distribution::uniform(4).unwrap(), UnitPoint::ZERO).unwrap();
        let xs: Vec<f64> = pl.points().iter().map(|x| x.to_f64()).collect();
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75]);
    }

    #[test]
    fn shifted_placement_keeps_lengths() {
        let a = place(&example6(), UnitPoint::ZERO).unwrap();
        let b = place(&example6(), UnitPoint::HALF).unwrap();
        for i in 0..6 {
            assert_eq!(b.points()[i], a.points()[i].wrapping_add(UnitPoint::HALF));
            assert_eq!(b.segment(i).length(), a.segment(i).length());
        }
        // u_4 now owns [0.95, 0.2)
        assert!(b.segment(3).wraps());
        assert_eq!(b.segments().iter().filter(|s| s.wraps()).count(), 1);
    }

    #[test]
    fn segments_tile_the_cycle() {
        let pl = place(&example6(), UnitPoint::from_f64(0.3)).unwrap();
        for i in 0..6 {
            assert_eq!(pl.segment(i).end(), pl.segment((i + 1) % 6).start());
        }
    }

    #[test]
    fn covers_examples() {
        let pl = place(&example6(), UnitPoint::ZERO).unwrap();
        assert_eq!(pl.covers(UnitPoint::from_f64(0.5)), 3);
        for i in 0..6 {
            assert_eq!(pl.covers(pl.points()[i]), i);
        }
        assert_eq!(pl.covers(UnitPoint::MAX), 5);
        let shifted = place(&example6(), UnitPoint::from_f64(0.95)).unwrap();
        // node 0 owns [0.95, 0.05)
        assert_eq!(shifted.covers(UnitPoint::from_f64(0.01)), 0);
        assert_eq!(shifted.covers(UnitPoint::from_f64(0.97)), 0);
    }

    #[test]
    fn example6_neighbors_of_u4() {
        let pl = place(&example6(), UnitPoint::ZERO).unwrap();
        let g = build(&pl);
        // zero-based: u_4 is node 3
        assert!(g.has_edge(3, 1, EdgeKind::Left));
        assert!(g.has_edge(3, 2, EdgeKind::Left));
        assert!(g.has_edge(3, 4, EdgeKind::Right));
        assert!(g.has_edge(3, 5, EdgeKind::Right));
        // u_4 -- u_1 comes from u_1's right image [0.5, 0.55)
        assert!(g.pair_id(3, 0).is_some());
        assert!(g.has_edge(0, 3, EdgeKind::Right));
    }

    #[test]
    fn two_nodes_are_connected() {
        let net = Network::baseline(2, UnitPoint::ZERO).unwrap();
        assert!(net.graph.has_edge(0, 1, EdgeKind::Ring));
        assert!(net.graph.has_edge(1, 0, EdgeKind::Ring));
        assert_eq!(net.graph.pairs(), &[(0, 1)]);
    }

    #[test]
    fn baseline_code_lengths() {
        let (pl, g) = build_baseline(8, UnitPoint::from_f64(0.37)).unwrap();
        assert!(pl.code_table().entries().iter().all(|e| e.length == 4));
        assert!(g.non_ring_edge_count() <= 23);
        assert!(build_baseline(1, UnitPoint::ZERO).is_err());
    }

    #[test]
    fn smoothness_examples() {
        let pl = place(&example6(), UnitPoint::ZERO).unwrap();
        let s = smoothness(&pl);
        assert!((s.rho_f64() - 2.5).abs() < 1e-12);
        assert!((ratio_f64(&s.rho_i[3]) - 2.5).abs() < 1e-12);
        let u = smoothness(&place(&Distribution::uniform(16).unwrap(), UnitPoint::ZERO).unwrap());
        assert_eq!(u.rho, Ratio::from_integer(1));
        assert_eq!(u.in_degree_bound(0), 3);
        assert!(u.out_degree_within_bound(0, 5));
        assert!(!u.out_degree_within_bound(0, 6));
    }

    #[test]
    fn precision_guard() {
        let mut w = vec![1.0; 4];
        w[0] = 1e-25; // needs an 85-bit codeword
        let p = Distribution::from_weights(&w).unwrap();
        assert!(matches!(place(&p, UnitPoint::ZERO), Err(Error::PrecisionExceeded(_))));
    }

    #[test]
    fn code_segments_inside_segments() {
        for shift in [0.0, 0.13, 0.5, 0.97] {
            let pl = place(&example6(), UnitPoint::from_f64(shift)).unwrap();
            for (i, e) in pl.code_table().entries().iter().enumerate() {
                let cs = crate::coding::code_segment(&e.codeword);
                assert!(pl.segment(i).contains_segment(&cs), "node {i} shift {shift}");
                assert!(cs.contains(e.codeword.to_point()));
            }
        }
    }

    #[test]
    fn failure_masks() {
        use rand::SeedableRng;
        let net = Network::build(&example6(), UnitPoint::ZERO).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        assert_eq!(FailureMask::sample(&net.graph, 0.0, &mut rng).failed_count(), 0);
        assert_eq!(FailureMask::sample(&net.graph, 1.0, &mut rng).failed_count(), net.graph.pairs().len());
    }
}
