//! Constructive search for a heavy directed cycle.
//!
//! Given a weighted digraph with n vertices, r loops, and weighted
//! outdegree at least 1 everywhere, [`find_heavy_cycle`] returns a
//! directed cycle of weight at least `1/log2(n+r)` together with a
//! re-verifiable certificate.
//!
//! The search runs a reduction loop over a working copy of the graph:
//!
//! * not strongly connected -> restrict to a sink component (outdegrees
//!   are unchanged there, since nothing leaves a sink component);
//! * some loopless vertex z -> delete the tail y of the heaviest arc
//!   into z and reroute every arc (u, y) to (u, z) with weight
//!   w(u,y) + w(y,z), overwriting any existing (u, z). The max choice
//!   of y keeps every weighted outdegree from decreasing, and the
//!   reroute is invertible on cycles: an arc (x, z) whose tail had an
//!   arc to y expands back into the path x -> y -> z with exactly the
//!   same weight;
//! * every vertex looped -> either some loop already meets the current
//!   target and is returned directly, or all loops are lighter than
//!   `credit/log2(2n)` and deleting them costs at most that much
//!   outdegree per vertex. The loss is tracked multiplicatively in a
//!   `credit` factor (outdegrees stay >= credit throughout) instead of
//!   rescaling the stored weights, so weights remain bit-exact.
//!
//! The loop ends at a single vertex whose loop carries its whole
//! outdegree; unwinding the contraction stack turns that loop back into
//! a cycle of the input graph, preserving weight at every step.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use crate::digraph::{VertexId, WeightedDigraph};
use crate::scc::{is_strongly_connected, tarjan_components};

/// Slack used for the outdegree precondition and the certificate bound
/// check. Sums of ~10^6 double-precision terms stay far inside this.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum HeavyCycleError {
    /// Some vertex has weighted outdegree below 1 - tolerance.
    PreconditionViolated {
        vertex: VertexId,
        weighted_outdegree: f64,
    },
    /// n + r < 2, where the bound 1/log2(n+r) is undefined or infinite.
    DegenerateSize {
        n: usize,
        r: usize,
    },
    HasLoopAtZ {
        z: VertexId,
    },
    NotStronglyConnected,
    /// A vertex required to carry a loop does not.
    LoopMissing {
        vertex: VertexId,
    },
    NotACycle {
        reason: String,
    },
    InvalidVertex {
        vertex: u32,
        n: usize,
    },
}

impl fmt::Display for HeavyCycleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeavyCycleError::PreconditionViolated {
                vertex,
                weighted_outdegree,
            } => write!(
                f,
                "vertex {} has weighted outdegree {} < 1",
                vertex, weighted_outdegree
            ),
            HeavyCycleError::DegenerateSize { n, r } => {
                write!(f, "bound 1/log2(n+r) undefined for n={} r={}", n, r)
            }
            HeavyCycleError::HasLoopAtZ { z } => write!(f, "vertex {} carries a loop", z),
            HeavyCycleError::NotStronglyConnected => write!(f, "graph is not strongly connected"),
            HeavyCycleError::LoopMissing { vertex } => {
                write!(f, "vertex {} has no loop", vertex)
            }
            HeavyCycleError::NotACycle { reason } => write!(f, "not a directed cycle: {}", reason),
            HeavyCycleError::InvalidVertex { vertex, n } => {
                write!(
                    f,
                    "vertex {} out of range for graph with {} vertices",
                    vertex, n
                )
            }
        }
    }
}

impl std::error::Error for HeavyCycleError {}

/// Simple directed cycle: consecutive arcs chain head-to-tail, all tails
/// are distinct, and a single loop (v, v) is a cycle of length 1. The
/// stored weight is the sum of the arc weights in the owning graph,
/// accumulated in sequence order.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedCycle {
    arcs: Vec<(VertexId, VertexId)>,
    weight: f64,
}

impl DirectedCycle {
    /// Validates `arcs` as a simple directed cycle of `g`, rotates it to
    /// start at the smallest tail, and sums its weight.
    pub fn from_arcs(
        g: &WeightedDigraph,
        arcs: Vec<(VertexId, VertexId)>,
    ) -> Result<Self, HeavyCycleError> {
        if arcs.is_empty() {
            return Err(HeavyCycleError::NotACycle {
                reason: "empty arc sequence".into(),
            });
        }
        let len = arcs.len();
        for i in 0..len {
            let (_, head) = arcs[i];
            let (next_tail, _) = arcs[(i + 1) % len];
            if head != next_tail {
                return Err(HeavyCycleError::NotACycle {
                    reason: format!(
                        "arc {} ends at {} but arc {} starts at {}",
                        i,
                        head,
                        (i + 1) % len,
                        next_tail
                    ),
                });
            }
        }
        let mut seen = BTreeSet::new();
        for &(tail, _) in &arcs {
            if !seen.insert(tail) {
                return Err(HeavyCycleError::NotACycle {
                    reason: format!("vertex {} visited twice", tail),
                });
            }
        }
        let mut arcs = arcs;
        let start = arcs
            .iter()
            .enumerate()
            .min_by_key(|(_, &(tail, _))| tail)
            .map(|(i, _)| i)
            .unwrap();
        arcs.rotate_left(start);
        let mut weight = 0.0;
        for &(tail, head) in &arcs {
            match g.arc_weight(tail, head) {
                Some(w) => weight += w,
                None => {
                    return Err(HeavyCycleError::NotACycle {
                        reason: format!("arc ({}, {}) is not in the graph", tail, head),
                    })
                }
            }
        }
        Ok(Self { arcs, weight })
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    /// Number of arcs; at least 1 for any validated cycle, which is why
    /// there is no `is_empty`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Tail sequence closed with the first tail again: `v0 v1 ... v0`.
    pub fn vertex_sequence(&self) -> Vec<VertexId> {
        let mut seq: Vec<VertexId> = self.arcs.iter().map(|&(t, _)| t).collect();
        seq.push(self.arcs[0].0);
        seq
    }
}

/// Bookkeeping for one contraction, enough to replay it and to lift a
/// cycle of the contracted graph back through it. All ids refer to the
/// graph the contraction was applied to.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionRecord {
    /// Loopless target vertex.
    pub z: VertexId,
    /// Deleted vertex: tail of the heaviest arc into z (ties: smallest id).
    pub y: VertexId,
    pub w_yz: f64,
    /// Tails u (ascending, u != y) whose arc (u, y) was rerouted to (u, z).
    pub rerouted: Vec<VertexId>,
    /// Pre-existing (u, z) weights replaced by the reroute, ascending by u.
    /// Each replaced weight is <= w_yz; that is what keeps outdegrees from
    /// decreasing.
    pub overwritten: Vec<(VertexId, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReductionStep {
    /// Restriction to a sink component. `kept` lists the surviving
    /// vertices in ascending order; position in the list is the id each
    /// vertex gets after relabeling.
    SinkRestrict {
        kept: Vec<VertexId>,
    },
    Contract(ContractionRecord),
    /// All loops deleted; outdegree guarantee scaled by `scale_credit`.
    StripLoops {
        scale_credit: f64,
    },
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionStep::SinkRestrict { kept } => {
                write!(f, "sink-restrict kept={}", kept.len())?;
                if kept.len() <= 16 {
                    write!(f, " [")?;
                    for (i, v) in kept.iter().enumerate() {
                        if i > 0 {
                            write!(f, " ")?;
                        }
                        write!(f, "{}", v)?;
                    }
                    write!(f, "]")?;
                }
                Ok(())
            }
            ReductionStep::Contract(rec) => write!(
                f,
                "contract z={} y={} w(y,z)={} rerouted={} overwritten={}",
                rec.z,
                rec.y,
                rec.w_yz,
                rec.rerouted.len(),
                rec.overwritten.len()
            ),
            ReductionStep::StripLoops { scale_credit } => {
                write!(f, "strip-loops scale_credit={}", scale_credit)
            }
        }
    }
}

/// Ordered stack of reduction steps from the input graph down to the
/// base case. Step data is expressed in the coordinates of the graph the
/// step applied to, so a trace can be replayed with [`contract_step`]
/// and friends.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

/// A found cycle plus the claim it witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleCertificate {
    /// Cycle in the original input graph.
    pub cycle: DirectedCycle,
    pub n: usize,
    pub r: usize,
    /// 1/log2(n+r).
    pub bound: f64,
    /// Weight of the cycle.
    pub achieved: f64,
    pub valid: bool,
}

/// The guaranteed lower bound `1/log2(n+r)`.
pub fn bound_value(n: usize, r: usize) -> Result<f64, HeavyCycleError> {
    if n + r < 2 {
        return Err(HeavyCycleError::DegenerateSize { n, r });
    }
    Ok(1.0 / ((n + r) as f64).log2())
}

pub fn find_heavy_cycle(g: &WeightedDigraph) -> Result<CycleCertificate, HeavyCycleError> {
    find_heavy_cycle_with_tolerance(g, DEFAULT_TOLERANCE)
}

pub fn find_heavy_cycle_traced(
    g: &WeightedDigraph,
) -> Result<(CycleCertificate, ReductionTrace), HeavyCycleError> {
    find_heavy_cycle_traced_with_tolerance(g, DEFAULT_TOLERANCE)
}

pub fn find_heavy_cycle_traced_with_tolerance(
    g: &WeightedDigraph,
    tolerance: f64,
) -> Result<(CycleCertificate, ReductionTrace), HeavyCycleError> {
    let mut reducer = Reducer::new(g, tolerance)?;
    let base = reducer.run();
    let trace = reducer.public_trace(g.vertex_count());
    let cert = reducer.certify(g, base, tolerance)?;
    Ok((cert, trace))
}

pub fn find_heavy_cycle_with_tolerance(
    g: &WeightedDigraph,
    tolerance: f64,
) -> Result<CycleCertificate, HeavyCycleError> {
    let mut reducer = Reducer::new(g, tolerance)?;
    let base = reducer.run();
    reducer.certify(g, base, tolerance)
}

/// One contraction as a standalone operation: checks that `g` is
/// strongly connected with at least two vertices and no loop at `z`,
/// picks y as the tail of the heaviest arc into z (ties: smallest id),
/// and returns the contracted graph together with the record needed to
/// lift cycles back.
///
/// Vertices of the result are the vertices of `g` minus y, relabeled by
/// shifting ids above y down by one.
pub fn contract_step(
    g: &WeightedDigraph,
    z: VertexId,
) -> Result<(WeightedDigraph, ContractionRecord), HeavyCycleError> {
    let n = g.vertex_count();
    if z.index() >= n {
        return Err(HeavyCycleError::InvalidVertex { vertex: z.0, n });
    }
    if n < 2 {
        return Err(HeavyCycleError::DegenerateSize {
            n,
            r: g.loop_count(),
        });
    }
    if g.has_loop(z) {
        return Err(HeavyCycleError::HasLoopAtZ { z });
    }
    if !is_strongly_connected(g) {
        return Err(HeavyCycleError::NotStronglyConnected);
    }

    let mut best: Option<(f64, u32)> = None;
    for t in g.in_neighbors(z) {
        let w = g
            .arc_weight(t, z)
            .expect("in-index is the transpose of the arc map");
        if best.is_none_or(|(bw, _)| w > bw) {
            best = Some((w, t.0));
        }
    }
    let (w_yz, y) = best.expect("strong connectivity gives z an in-arc");
    let shift = |v: u32| if v < y { v } else { v - 1 };

    let mut contracted = WeightedDigraph::new(n - 1);
    for (u, h, w) in g.arcs() {
        if u.0 == y || h.0 == y {
            continue;
        }
        contracted
            .add_arc(VertexId(shift(u.0)), VertexId(shift(h.0)), w)
            .expect("surviving arcs are unique with valid endpoints");
    }
    let mut rerouted = Vec::new();
    let mut overwritten = Vec::new();
    for t in g.in_neighbors(VertexId(y)) {
        if t.0 == y {
            continue; // a loop at y disappears with y
        }
        let w_uy = g.arc_weight(t, VertexId(y)).expect("transpose consistency");
        let w_new = w_uy + w_yz;
        if let Some(old) = contracted.put_arc(VertexId(shift(t.0)), VertexId(shift(z.0)), w_new) {
            debug_assert!(old <= w_yz, "overwritten weight exceeds the max in-arc");
            overwritten.push((t, old));
        }
        rerouted.push(t);
    }
    let record = ContractionRecord {
        z,
        y: VertexId(y),
        w_yz,
        rerouted,
        overwritten,
    };
    Ok((contracted, record))
}

/// Undoes one contraction on a cycle of the contracted graph. If the
/// cycle enters z through a tail x that had an arc to y, the arc (x, z)
/// expands into the path x -> y -> z; otherwise the cycle already exists
/// in the pre-contraction graph. Weight is preserved: the rerouted arc
/// carried exactly w(x,y) + w(y,z).
pub fn lift_cycle(
    record: &ContractionRecord,
    cycle: &DirectedCycle,
    pre_graph: &WeightedDigraph,
) -> Result<DirectedCycle, HeavyCycleError> {
    let y = record.y.0;
    let unshift = |v: u32| if v < y { v } else { v + 1 };
    let mut arcs: Vec<(VertexId, VertexId)> = cycle
        .arcs()
        .iter()
        .map(|&(t, h)| (VertexId(unshift(t.0)), VertexId(unshift(h.0))))
        .collect();
    if let Some(pos) = arcs.iter().position(|&(_, h)| h == record.z) {
        let (x, _) = arcs[pos];
        if pre_graph.has_arc(x, record.y) {
            arcs.splice(pos..=pos, [(x, record.y), (record.y, record.z)]);
        }
    }
    DirectedCycle::from_arcs(pre_graph, arcs)
}

#[derive(Debug, Clone, PartialEq)]
pub enum StripOutcome {
    /// Some loop meets the target; returned as a length-1 cycle.
    FoundLoop(DirectedCycle),
    /// All loops were lighter than the target and have been deleted.
    /// Each weighted outdegree dropped by less than `target`, so the
    /// outdegree guarantee is rescaled by `credit` = 1 - target.
    Stripped { graph: WeightedDigraph, credit: f64 },
}

/// The all-vertices-looped step: requires a loop on every vertex. Either
/// returns the heaviest loop (ties: smallest vertex id) if it reaches
/// `target`, or deletes every loop and reports the remaining outdegree
/// credit `1 - target`.
pub fn strip_loops_step(g: &WeightedDigraph, target: f64) -> Result<StripOutcome, HeavyCycleError> {
    if g.vertex_count() == 0 {
        return Err(HeavyCycleError::DegenerateSize { n: 0, r: 0 });
    }
    let mut best: Option<(f64, VertexId)> = None;
    for v in g.vertices() {
        match g.arc_weight(v, v) {
            None => return Err(HeavyCycleError::LoopMissing { vertex: v }),
            Some(w) => {
                if best.is_none_or(|(bw, _)| w > bw) {
                    best = Some((w, v));
                }
            }
        }
    }
    let (w_best, v_best) = best.expect("nonempty graph");
    if w_best >= target {
        let cycle = DirectedCycle::from_arcs(g, vec![(v_best, v_best)])?;
        return Ok(StripOutcome::FoundLoop(cycle));
    }
    let mut stripped = g.clone();
    for v in g.vertices() {
        stripped.remove_arc(v, v);
    }
    Ok(StripOutcome::Stripped {
        graph: stripped,
        credit: 1.0 - target,
    })
}

// ---------------------------------------------------------------------
// Reduction engine.
//
// Works on a mutable copy of the input in the ORIGINAL id space with an
// alive mask, so certificates never need relabeling. The heaviest arc
// into each vertex is tracked with a lazy max-heap per vertex: every
// insert/overwrite pushes an entry, deletions leave stale entries that
// are discarded on pop. Scanning the in-neighborhood instead would go
// quadratic when contraction piles arcs onto one target vertex.
//
// Strong connectivity is established once up front (and the graph
// restricted to a sink component if needed). A contraction can in
// principle disconnect the graph again, but it cannot lower any
// outdegree and cannot raise n + r, so the weight accounting stays
// valid on a disconnected graph and the engine keeps contracting. The
// one thing that can actually go missing is an arc into the current
// target z; when that happens the component analysis is redone and the
// graph restricted again.
// ---------------------------------------------------------------------

struct InArcEntry {
    weight: f64,
    tail: u32,
}

impl PartialEq for InArcEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for InArcEntry {}

impl Ord for InArcEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap pops the heaviest entry; among equals, the smallest tail.
        self.weight
            .total_cmp(&other.weight)
            .then_with(|| other.tail.cmp(&self.tail))
    }
}

impl PartialOrd for InArcEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

enum EngineStep {
    Restrict {
        kept: Vec<u32>,
    },
    Contract {
        z: u32,
        y: u32,
        w_yz: f64,
        rerouted: Vec<u32>,
        overwritten: Vec<(u32, f64)>,
    },
    Strip {
        factor: f64,
    },
}

struct Reducer {
    g: WeightedDigraph,
    alive: Vec<bool>,
    alive_count: usize,
    loopless: BTreeSet<u32>,
    in_heaps: Vec<BinaryHeap<InArcEntry>>,
    credit: f64,
    steps: Vec<EngineStep>,
    sc_known: bool,
}

impl Reducer {
    fn new(g: &WeightedDigraph, tolerance: f64) -> Result<Self, HeavyCycleError> {
        let n = g.vertex_count();
        if n == 0 {
            return Err(HeavyCycleError::DegenerateSize { n: 0, r: 0 });
        }
        for v in g.vertices() {
            let d = g.weighted_outdegree(v);
            if d < 1.0 - tolerance {
                return Err(HeavyCycleError::PreconditionViolated {
                    vertex: v,
                    weighted_outdegree: d,
                });
            }
        }
        let mut in_heaps: Vec<BinaryHeap<InArcEntry>> = (0..n).map(|_| BinaryHeap::new()).collect();
        let mut loopless = BTreeSet::new();
        for (u, h, w) in g.arcs() {
            in_heaps[h.index()].push(InArcEntry {
                weight: w,
                tail: u.0,
            });
        }
        for v in g.vertices() {
            if !g.has_loop(v) {
                loopless.insert(v.0);
            }
        }
        Ok(Self {
            g: g.clone(),
            alive: vec![true; n],
            alive_count: n,
            loopless,
            in_heaps,
            credit: 1.0,
            steps: Vec::new(),
            sc_known: false,
        })
    }

    /// Runs the reduction to its base case; returns the base cycle in
    /// original ids (before lifting).
    fn run(&mut self) -> Vec<(u32, u32)> {
        loop {
            if self.alive_count == 1 {
                let v = self
                    .alive
                    .iter()
                    .position(|&a| a)
                    .expect("alive_count is 1") as u32;
                assert!(
                    self.g.has_loop(VertexId(v)),
                    "outdegree invariant forces a loop on the last vertex"
                );
                return vec![(v, v)];
            }
            if !self.sc_known {
                self.restrict_if_disconnected();
                self.sc_known = true;
                continue;
            }
            if let Some(&z) = self.loopless.first() {
                match self.pop_max_in_arc(z) {
                    Some((w_yz, y)) => self.contract(z, y, w_yz),
                    None => {
                        // No arc enters z, so the graph is certainly not
                        // strongly connected anymore.
                        let shrunk = self.restrict_if_disconnected();
                        assert!(
                            shrunk,
                            "vertex {} lacks an in-arc in a strongly connected graph",
                            z
                        );
                    }
                }
                continue;
            }
            // Every alive vertex carries a loop.
            let n_alive = self.alive_count;
            let target = self.credit / ((2 * n_alive) as f64).log2();
            let mut best: Option<(f64, u32)> = None;
            for v in 0..self.alive.len() as u32 {
                if !self.alive[v as usize] {
                    continue;
                }
                let w = self
                    .g
                    .arc_weight(VertexId(v), VertexId(v))
                    .expect("all alive looped");
                if best.is_none_or(|(bw, _)| w > bw) {
                    best = Some((w, v));
                }
            }
            let (w_best, v_best) = best.expect("alive_count >= 2");
            if w_best >= target {
                return vec![(v_best, v_best)];
            }
            self.strip_loops(n_alive);
        }
    }

    /// Recomputes components over the alive subgraph; restricts to the
    /// sink component holding the smallest vertex id when there is more
    /// than one. Returns whether anything was removed.
    fn restrict_if_disconnected(&mut self) -> bool {
        let n = self.alive.len();
        let mut adj = vec![Vec::new(); n];
        for v in 0..n {
            if !self.alive[v] {
                continue;
            }
            adj[v] = self
                .g
                .out_arcs(VertexId(v as u32))
                .map(|(h, _)| h.0)
                .collect();
        }
        let comps = tarjan_components(&adj, &self.alive);
        if comps.len() <= 1 {
            return false;
        }
        let mut comp_of = vec![usize::MAX; n];
        for (cid, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v as usize] = cid;
            }
        }
        let mut is_sink = vec![true; comps.len()];
        for v in 0..n {
            if !self.alive[v] {
                continue;
            }
            for &h in &adj[v] {
                if comp_of[v] != comp_of[h as usize] {
                    is_sink[comp_of[v]] = false;
                }
            }
        }
        let kept = comps
            .iter()
            .enumerate()
            .filter(|(cid, _)| is_sink[*cid])
            .map(|(_, comp)| comp)
            .min_by_key(|comp| comp[0])
            .expect("a finite digraph has a sink component")
            .clone();
        let keep_set: BTreeSet<u32> = kept.iter().copied().collect();
        for v in 0..n as u32 {
            if !self.alive[v as usize] || keep_set.contains(&v) {
                continue;
            }
            let heads: Vec<u32> = self.g.out_arcs(VertexId(v)).map(|(h, _)| h.0).collect();
            for h in heads {
                self.g.remove_arc(VertexId(v), VertexId(h));
            }
            self.alive[v as usize] = false;
            self.alive_count -= 1;
            self.loopless.remove(&v);
            self.in_heaps[v as usize] = BinaryHeap::new();
        }
        debug_assert!(self.alive_count == kept.len());
        self.steps.push(EngineStep::Restrict { kept });
        true
    }

    /// Pops entries off z's heap until one matches a live arc; that entry
    /// is the heaviest arc into z (ties broken toward the smallest tail).
    fn pop_max_in_arc(&mut self, z: u32) -> Option<(f64, u32)> {
        while let Some(entry) = self.in_heaps[z as usize].pop() {
            if !self.alive[entry.tail as usize] {
                continue;
            }
            match self.g.arc_weight(VertexId(entry.tail), VertexId(z)) {
                Some(w) if w == entry.weight => return Some((entry.weight, entry.tail)),
                _ => continue, // stale: arc gone or weight superseded
            }
        }
        None
    }

    fn contract(&mut self, z: u32, y: u32, w_yz: f64) {
        let zv = VertexId(z);
        let yv = VertexId(y);
        let mut rerouted = Vec::new();
        let mut overwritten = Vec::new();
        let tails: Vec<u32> = self
            .g
            .in_neighbors(yv)
            .map(|t| t.0)
            .filter(|&t| t != y)
            .collect();
        for u in tails {
            let uv = VertexId(u);
            let w_uy = self.g.remove_arc(uv, yv).expect("transpose consistency");
            let w_new = w_uy + w_yz;
            if let Some(old) = self.g.put_arc(uv, zv, w_new) {
                debug_assert!(old <= w_yz, "overwritten weight exceeds the max in-arc");
                overwritten.push((u, old));
            }
            self.in_heaps[z as usize].push(InArcEntry {
                weight: w_new,
                tail: u,
            });
            if u == z {
                // The arc z->y became the loop (z, z).
                self.loopless.remove(&z);
            }
            rerouted.push(u);
        }
        let y_heads: Vec<u32> = self.g.out_arcs(yv).map(|(h, _)| h.0).collect();
        for h in y_heads {
            self.g.remove_arc(yv, VertexId(h));
        }
        self.alive[y as usize] = false;
        self.alive_count -= 1;
        self.loopless.remove(&y);
        self.in_heaps[y as usize] = BinaryHeap::new();
        self.steps.push(EngineStep::Contract {
            z,
            y,
            w_yz,
            rerouted,
            overwritten,
        });
    }

    fn strip_loops(&mut self, n_alive: usize) {
        for v in 0..self.alive.len() as u32 {
            if !self.alive[v as usize] {
                continue;
            }
            self.g
                .remove_arc(VertexId(v), VertexId(v))
                .expect("all alive looped");
            self.loopless.insert(v);
        }
        debug_assert_eq!(self.g.loop_count(), 0);
        let factor = 1.0 - 1.0 / ((2 * n_alive) as f64).log2();
        self.credit *= factor;
        self.steps.push(EngineStep::Strip { factor });
        // Loop deletion never changes reachability, so sc_known stands.
    }

    /// Lifts the base cycle back through the contraction stack. Restrict
    /// and strip steps only ever removed arcs the cycle does not use, so
    /// only contractions rewrite it.
    fn lift(&self, base: Vec<(u32, u32)>) -> Vec<(u32, u32)> {
        let mut arcs = base;
        for step in self.steps.iter().rev() {
            if let EngineStep::Contract { z, y, rerouted, .. } = step {
                if let Some(pos) = arcs.iter().position(|&(_, h)| h == *z) {
                    let (x, _) = arcs[pos];
                    if rerouted.binary_search(&x).is_ok() {
                        arcs.splice(pos..=pos, [(x, *y), (*y, *z)]);
                    }
                }
            }
        }
        arcs
    }

    fn certify(
        &self,
        original: &WeightedDigraph,
        base: Vec<(u32, u32)>,
        tolerance: f64,
    ) -> Result<CycleCertificate, HeavyCycleError> {
        let arcs = self.lift(base);
        let cycle = DirectedCycle::from_arcs(
            original,
            arcs.into_iter()
                .map(|(t, h)| (VertexId(t), VertexId(h)))
                .collect(),
        )?;
        let n = original.vertex_count();
        let r = original.loop_count();
        let bound = bound_value(n, r)?;
        let achieved = cycle.weight();
        Ok(CycleCertificate {
            cycle,
            n,
            r,
            bound,
            achieved,
            valid: achieved >= bound - tolerance,
        })
    }

    /// Rewrites the engine's step data (original ids, alive mask) into
    /// the dense relabeled coordinates a step-by-step replay with
    /// [`contract_step`] / [`WeightedDigraph::induced_subdigraph`] sees.
    fn public_trace(&self, n: usize) -> ReductionTrace {
        let mut alive = vec![true; n];
        let mut steps = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            // rank[v] = current public id of engine vertex v.
            let mut rank = vec![0u32; n];
            let mut seen = 0u32;
            for v in 0..n {
                rank[v] = seen;
                if alive[v] {
                    seen += 1;
                }
            }
            match step {
                EngineStep::Restrict { kept } => {
                    steps.push(ReductionStep::SinkRestrict {
                        kept: kept.iter().map(|&v| VertexId(rank[v as usize])).collect(),
                    });
                    let keep: BTreeSet<u32> = kept.iter().copied().collect();
                    for v in 0..n as u32 {
                        if alive[v as usize] && !keep.contains(&v) {
                            alive[v as usize] = false;
                        }
                    }
                }
                EngineStep::Contract {
                    z,
                    y,
                    w_yz,
                    rerouted,
                    overwritten,
                } => {
                    steps.push(ReductionStep::Contract(ContractionRecord {
                        z: VertexId(rank[*z as usize]),
                        y: VertexId(rank[*y as usize]),
                        w_yz: *w_yz,
                        rerouted: rerouted
                            .iter()
                            .map(|&u| VertexId(rank[u as usize]))
                            .collect(),
                        overwritten: overwritten
                            .iter()
                            .map(|&(u, w)| (VertexId(rank[u as usize]), w))
                            .collect(),
                    }));
                    alive[*y as usize] = false;
                }
                EngineStep::Strip { factor } => {
                    steps.push(ReductionStep::StripLoops {
                        scale_credit: *factor,
                    });
                }
            }
        }
        ReductionTrace { steps }
    }
}
