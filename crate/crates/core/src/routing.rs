//! Greedy routing over a placed network.
//!
//! Forward routing appends destination bits to the source codeword, least
//! significant first, and moves to whoever covers the resulting point.
//! Backward routing starts from `cw_src ⊕ cw_dst` and strips source bits
//! from the front. Improved routing picks whichever governing codeword is
//! shorter.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::point::{BitString, UnitPoint};
use crate::topology::{DiscreteGraph, EdgeKind, FailureMask, Network, Placement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Forward,
    Backward,
    Improved,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Forward, Algorithm::Backward, Algorithm::Improved];
}

/// What travels with the message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageHeader {
    pub src_cw: BitString,
    pub dst_cw: BitString,
    /// Steps taken so far.
    pub t: u32,
    pub mode: Mode,
}

impl MessageHeader {
    pub fn new(src_cw: BitString, dst_cw: BitString, mode: Mode) -> Self {
        MessageHeader { src_cw, dst_cw, t: 0, mode }
    }

    /// Length of the codeword that bounds the route.
    pub fn steps(&self) -> u32 {
        match self.mode {
            Mode::Forward => self.dst_cw.len(),
            Mode::Backward => self.src_cw.len(),
        }
    }

    /// Point to be covered by the next hop.
    ///
    /// Forward: the walk of the last `t + 1` destination bits from the source
    /// codeword. Backward: the last `ℓ_src - t - 1` source bits followed by
    /// the destination codeword.
    pub fn target(&self) -> UnitPoint {
        match self.mode {
            Mode::Forward => {
                let k = self.t + 1;
                let suffix = self.dst_cw.suffix(k);
                UnitPoint::from_bits(suffix.left_aligned() | (self.src_cw.left_aligned() >> k))
            }
            Mode::Backward => {
                let k = self.src_cw.len() - self.t - 1;
                self.src_cw.suffix(k).concat(&self.dst_cw).to_point()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    TtlExpired,
    Isolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Delivered,
    Dropped(DropReason),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteTrace {
    pub hops: Vec<usize>,
    /// Mode chosen at the source.
    pub mode: Mode,
    pub recoveries: u32,
    pub outcome: Outcome,
}

impl RouteTrace {
    pub fn hop_count(&self) -> usize {
        self.hops.len() - 1
    }

    pub fn delivered(&self) -> bool {
        self.outcome == Outcome::Delivered
    }
}

/// Mode chosen by improved routing: forward iff `ℓ_dst ≤ ℓ_src`.
pub fn improved_mode(src_len: u32, dst_len: u32) -> Mode {
    if dst_len <= src_len {
        Mode::Forward
    } else {
        Mode::Backward
    }
}

/// Read-only routing view over a network.
#[derive(Debug, Clone, Copy)]
pub struct Router<'a> {
    pl: &'a Placement,
    g: &'a DiscreteGraph,
}

impl<'a> Router<'a> {
    pub fn new(pl: &'a Placement, g: &'a DiscreteGraph) -> Self {
        debug_assert_eq!(pl.n(), g.n());
        Router { pl, g }
    }

    pub fn for_network(net: &'a Network) -> Self {
        Router::new(&net.placement, &net.graph)
    }

    pub fn n(&self) -> usize {
        self.pl.n()
    }

    pub fn placement(&self) -> &'a Placement {
        self.pl
    }

    pub fn graph(&self) -> &'a DiscreteGraph {
        self.g
    }

    fn codeword(&self, i: usize) -> BitString {
        *self.pl.code_table().codeword(i)
    }

    pub fn mode_for(&self, src: usize, dst: usize, algo: Algorithm) -> Mode {
        match algo {
            Algorithm::Forward => Mode::Forward,
            Algorithm::Backward => Mode::Backward,
            Algorithm::Improved => improved_mode(self.codeword(src).len(), self.codeword(dst).len()),
        }
    }

    pub fn header(&self, src: usize, dst: usize, mode: Mode) -> MessageHeader {
        MessageHeader::new(self.codeword(src), self.codeword(dst), mode)
    }

    /// Failure-free greedy walk; `visit` sees every node after the source.
    fn drive(&self, src: usize, dst: usize, mode: Mode, mut visit: impl FnMut(usize)) {
        let mut header = self.header(src, dst, mode);
        let mut cur = src;
        while cur != dst {
            assert!(
                header.t < header.steps(),
                "greedy route {src} -> {dst} did not arrive within {} steps",
                header.steps()
            );
            let next = self.pl.covers(header.target());
            header.t += 1;
            if next != cur {
                cur = next;
                visit(cur);
            }
        }
    }

    pub fn route(&self, src: usize, dst: usize, algo: Algorithm) -> RouteTrace {
        let mode = self.mode_for(src, dst, algo);
        let mut hops = vec![src];
        self.drive(src, dst, mode, |v| hops.push(v));
        RouteTrace { hops, mode, recoveries: 0, outcome: Outcome::Delivered }
    }

    /// Hop count without recording the path.
    pub fn hop_count(&self, src: usize, dst: usize, algo: Algorithm) -> u32 {
        let mut hops = 0;
        self.drive(src, dst, self.mode_for(src, dst, algo), |_| hops += 1);
        hops
    }

    /// Greedy routing that survives dead edges: when the next edge is down
    /// the message jumps to a uniformly random live neighbor and restarts
    /// from there in improved mode. Every traversal costs one unit of TTL.
    pub fn route_with_failures<R: Rng + ?Sized>(
        &self,
        mask: &FailureMask,
        src: usize,
        dst: usize,
        algo: Algorithm,
        ttl: u32,
        rng: &mut R,
    ) -> RouteTrace {
        let mut hops = vec![src];
        let (mode, recoveries, outcome) =
            self.drive_with_failures(mask, src, dst, algo, ttl, rng, |v| hops.push(v));
        RouteTrace { hops, mode, recoveries, outcome }
    }

    /// Delivery outcome only; used by sweeps.
    pub fn delivers_with_failures<R: Rng + ?Sized>(
        &self,
        mask: &FailureMask,
        src: usize,
        dst: usize,
        ttl: u32,
        rng: &mut R,
    ) -> bool {
        self.drive_with_failures(mask, src, dst, Algorithm::Improved, ttl, rng, |_| {}).2 == Outcome::Delivered
    }

    #[allow(clippy::too_many_arguments)]
    fn drive_with_failures<R: Rng + ?Sized>(
        &self,
        mask: &FailureMask,
        src: usize,
        dst: usize,
        algo: Algorithm,
        ttl: u32,
        rng: &mut R,
        mut visit: impl FnMut(usize),
    ) -> (Mode, u32, Outcome) {
        let first_mode = self.mode_for(src, dst, algo);
        let mut header = self.header(src, dst, first_mode);
        let mut cur = src;
        let mut ttl_left = ttl;
        let mut recoveries = 0;
        let mut alive = Vec::new();
        while cur != dst {
            debug_assert!(header.t < header.steps());
            let next = self.pl.covers(header.target());
            header.t += 1;
            if next == cur {
                continue;
            }
            let pair = self.g.pair_id(cur, next).expect("greedy steps follow graph edges");
            if mask.is_alive(pair) {
                if ttl_left == 0 {
                    return (first_mode, recoveries, Outcome::Dropped(DropReason::TtlExpired));
                }
                ttl_left -= 1;
                cur = next;
                visit(cur);
                continue;
            }
            alive.clear();
            alive.extend(self.g.neighbors(cur).iter().filter(|(_, p)| mask.is_alive(*p)).map(|&(v, _)| v));
            if alive.is_empty() {
                return (first_mode, recoveries, Outcome::Dropped(DropReason::Isolated));
            }
            if ttl_left == 0 {
                return (first_mode, recoveries, Outcome::Dropped(DropReason::TtlExpired));
            }
            ttl_left -= 1;
            cur = alive[rng.gen_range(0..alive.len())];
            visit(cur);
            recoveries += 1;
            let mode = self.mode_for(cur, dst, Algorithm::Improved);
            header = self.header(cur, dst, mode);
        }
        (first_mode, recoveries, Outcome::Delivered)
    }
}

pub fn route_forward(g: &DiscreteGraph, pl: &Placement, src: usize, dst: usize) -> RouteTrace {
    Router::new(pl, g).route(src, dst, Algorithm::Forward)
}

pub fn route_backward(g: &DiscreteGraph, pl: &Placement, src: usize, dst: usize) -> RouteTrace {
    Router::new(pl, g).route(src, dst, Algorithm::Backward)
}

pub fn route_improved(g: &DiscreteGraph, pl: &Placement, src: usize, dst: usize) -> RouteTrace {
    Router::new(pl, g).route(src, dst, Algorithm::Improved)
}

pub fn route_with_failures<R: Rng + ?Sized>(
    g: &DiscreteGraph,
    mask: &FailureMask,
    pl: &Placement,
    src: usize,
    dst: usize,
    ttl: u32,
    rng: &mut R,
) -> RouteTrace {
    Router::new(pl, g).route_with_failures(mask, src, dst, Algorithm::Improved, ttl, rng)
}

/// Checks that every hop of a trace crosses a live edge of `g`.
pub fn check_trace(g: &DiscreteGraph, mask: Option<&FailureMask>, trace: &RouteTrace) -> Result<(), String> {
    for w in trace.hops.windows(2) {
        let (a, b) = (w[0], w[1]);
        let pair = g.pair_id(a, b).ok_or_else(|| format!("hop {a} -> {b} is not an edge"))?;
        if mask.is_some_and(|m| !m.is_alive(pair)) {
            return Err(format!("hop {a} -> {b} uses a failed edge"));
        }
    }
    Ok(())
}

/// Stricter check for failure-free traces: forward hops follow left/right
/// edges, backward hops follow them in reverse.
pub fn check_greedy_trace(g: &DiscreteGraph, trace: &RouteTrace) -> Result<(), String> {
    for w in trace.hops.windows(2) {
        let (a, b) = match trace.mode {
            Mode::Forward => (w[0], w[1]),
            Mode::Backward => (w[1], w[0]),
        };
        if !(g.has_edge(a, b, EdgeKind::Left) || g.has_edge(a, b, EdgeKind::Right)) {
            return Err(format!("{:?} hop {} -> {} has no left/right edge", trace.mode, w[0], w[1]));
        }
    }
    Ok(())
}
