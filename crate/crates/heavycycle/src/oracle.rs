//! Exhaustive simple-cycle enumeration and exact max-weight cycle.
//!
//! Johnson-style blocked DFS (Johnson 1975, "Finding all the elementary
//! circuits of a directed graph"): for each start vertex s in ascending
//! order, enumerate the cycles whose smallest vertex is s inside the
//! subgraph induced by {v >= s}. Loops come out as length-1 cycles.
//!
//! This is ground truth for the heavy-cycle search on small instances;
//! the blowup is exponential, so enumeration is guarded by a hard cycle
//! cap that errors instead of silently truncating. A truncated maximum
//! would poison every comparison made against it.

use std::collections::BTreeSet;
use std::fmt;

use crate::digraph::{VertexId, WeightedDigraph};
use crate::heavy::DirectedCycle;

pub const DEFAULT_CYCLE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    CapExceeded { cap: usize },
    NoCycle,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::CapExceeded { cap } => {
                write!(f, "cycle enumeration exceeded the cap of {}", cap)
            }
            OracleError::NoCycle => write!(f, "graph contains no directed cycle"),
        }
    }
}

impl std::error::Error for OracleError {}

struct Frame {
    vertex: u32,
    /// Unexplored out-neighbors >= start, descending, so pop() walks
    /// them in ascending order.
    pending: Vec<u32>,
    /// Whether a cycle was closed through this vertex or below it.
    found: bool,
}

/// Streaming enumerator over every simple directed cycle of the graph,
/// each emitted exactly once, in ascending order of (smallest vertex,
/// vertex sequence). Yields `Err(CapExceeded)` once and stops if the
/// cap-th cycle would be exceeded.
pub struct CycleEnumeration<'g> {
    g: &'g WeightedDigraph,
    cap: usize,
    emitted: usize,
    done: bool,
    start: u32,
    blocked: Vec<bool>,
    blist: Vec<BTreeSet<u32>>,
    path: Vec<u32>,
    frames: Vec<Frame>,
}

impl<'g> CycleEnumeration<'g> {
    pub fn new(g: &'g WeightedDigraph, cap: usize) -> Self {
        let n = g.vertex_count();
        let mut this = Self {
            g,
            cap,
            emitted: 0,
            done: n == 0,
            start: 0,
            blocked: vec![false; n],
            blist: vec![BTreeSet::new(); n],
            path: Vec::new(),
            frames: Vec::new(),
        };
        if !this.done {
            this.enter_start(0);
        }
        this
    }

    fn pending_for(&self, v: u32) -> Vec<u32> {
        let mut nbrs: Vec<u32> = self
            .g
            .out_arcs(VertexId(v))
            .map(|(h, _)| h.0)
            .filter(|&h| h >= self.start)
            .collect();
        nbrs.reverse();
        nbrs
    }

    fn enter_start(&mut self, s: u32) {
        self.start = s;
        for v in s as usize..self.blocked.len() {
            self.blocked[v] = false;
            self.blist[v].clear();
        }
        self.blocked[s as usize] = true;
        self.path = vec![s];
        let pending = self.pending_for(s);
        self.frames = vec![Frame {
            vertex: s,
            pending,
            found: false,
        }];
    }

    fn unblock(&mut self, v: u32) {
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            self.blocked[u as usize] = false;
            let waiting: Vec<u32> = self.blist[u as usize].iter().copied().collect();
            self.blist[u as usize].clear();
            for w in waiting {
                if self.blocked[w as usize] {
                    stack.push(w);
                }
            }
        }
    }

    fn current_cycle(&self) -> DirectedCycle {
        let mut arcs = Vec::with_capacity(self.path.len());
        for i in 0..self.path.len() {
            let tail = self.path[i];
            let head = self.path[(i + 1) % self.path.len()];
            arcs.push((VertexId(tail), VertexId(head)));
        }
        DirectedCycle::from_arcs(self.g, arcs).expect("DFS path arcs exist and chain")
    }
}

enum Action {
    Emit,
    Visit(u32),
    Skip,
    Retreat,
}

impl<'g> Iterator for CycleEnumeration<'g> {
    type Item = Result<DirectedCycle, OracleError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            if self.frames.is_empty() {
                let next = self.start + 1;
                if next as usize >= self.blocked.len() {
                    self.done = true;
                    return None;
                }
                self.enter_start(next);
                continue;
            }
            let action = {
                let start = self.start;
                let frame = self.frames.last_mut().expect("frames nonempty");
                match frame.pending.pop() {
                    Some(w) if w == start => {
                        frame.found = true;
                        Action::Emit
                    }
                    Some(w) => {
                        if self.blocked[w as usize] {
                            Action::Skip
                        } else {
                            Action::Visit(w)
                        }
                    }
                    None => Action::Retreat,
                }
            };
            match action {
                Action::Skip => {}
                Action::Emit => {
                    if self.emitted == self.cap {
                        self.done = true;
                        return Some(Err(OracleError::CapExceeded { cap: self.cap }));
                    }
                    self.emitted += 1;
                    return Some(Ok(self.current_cycle()));
                }
                Action::Visit(w) => {
                    self.blocked[w as usize] = true;
                    self.path.push(w);
                    let pending = self.pending_for(w);
                    self.frames.push(Frame {
                        vertex: w,
                        pending,
                        found: false,
                    });
                }
                Action::Retreat => {
                    let frame = self.frames.pop().expect("frames nonempty");
                    self.path.pop();
                    if frame.found {
                        self.unblock(frame.vertex);
                        if let Some(parent) = self.frames.last_mut() {
                            parent.found = true;
                        }
                    } else {
                        for w in self.pending_for(frame.vertex) {
                            self.blist[w as usize].insert(frame.vertex);
                        }
                    }
                }
            }
        }
    }
}

pub fn enumerate_simple_cycles(
    g: &WeightedDigraph,
    cap: usize,
) -> impl Iterator<Item = Result<DirectedCycle, OracleError>> + '_ {
    CycleEnumeration::new(g, cap)
}

/// Exact maximum-weight cycle by full enumeration; ties go to the cycle
/// emitted first.
pub fn max_weight_cycle(
    g: &WeightedDigraph,
    cap: usize,
) -> Result<(DirectedCycle, f64), OracleError> {
    let mut best: Option<DirectedCycle> = None;
    for item in enumerate_simple_cycles(g, cap) {
        let cycle = item?;
        if best.as_ref().is_none_or(|b| cycle.weight() > b.weight()) {
            best = Some(cycle);
        }
    }
    match best {
        Some(cycle) => {
            let w = cycle.weight();
            Ok((cycle, w))
        }
        None => Err(OracleError::NoCycle),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn graph(n: usize, arcs: &[(u32, u32, f64)]) -> WeightedDigraph {
        let mut g = WeightedDigraph::new(n);
        for &(a, b, w) in arcs {
            g.add_arc(v(a), v(b), w).unwrap();
        }
        g
    }

    fn complete_loopless(n: usize) -> WeightedDigraph {
        let mut g = WeightedDigraph::new(n);
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if a != b {
                    g.add_arc(v(a), v(b), 1.0).unwrap();
                }
            }
        }
        g
    }

    /// Plain exponential DFS counter, sharing nothing with the blocked
    /// enumeration above.
    fn count_cycles_brute(g: &WeightedDigraph) -> usize {
        fn dfs(
            g: &WeightedDigraph,
            start: u32,
            at: u32,
            visited: &mut Vec<bool>,
            count: &mut usize,
        ) {
            for (h, _) in g.out_arcs(v(at)) {
                if h.0 < start {
                    continue;
                }
                if h.0 == start {
                    *count += 1;
                } else if !visited[h.index()] {
                    visited[h.index()] = true;
                    dfs(g, start, h.0, visited, count);
                    visited[h.index()] = false;
                }
            }
        }
        let n = g.vertex_count();
        let mut count = 0;
        for s in 0..n as u32 {
            let mut visited = vec![false; n];
            visited[s as usize] = true;
            dfs(g, s, s, &mut visited, &mut count);
        }
        count
    }

    #[test]
    fn triangle_has_one_cycle() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]);
        let cycles: Vec<_> = enumerate_simple_cycles(&g, 100)
            .map(Result::unwrap)
            .collect();
        assert_eq!(cycles.len(), 1);
        assert_eq!(
            cycles[0].arcs(),
            &[(v(0), v(1)), (v(1), v(2)), (v(2), v(0))]
        );
    }

    #[test]
    fn complete_digraph_on_three_vertices_has_five_cycles() {
        let g = complete_loopless(3);
        let cycles: Vec<_> = enumerate_simple_cycles(&g, 100)
            .map(Result::unwrap)
            .collect();
        assert_eq!(cycles.len(), 5);
        let lengths: Vec<usize> = cycles.iter().map(|c| c.len()).collect();
        assert_eq!(lengths.iter().filter(|&&l| l == 2).count(), 3);
        assert_eq!(lengths.iter().filter(|&&l| l == 3).count(), 2);
    }

    #[test]
    fn single_loop_graph() {
        let g = graph(1, &[(0, 0, 1.0)]);
        let cycles: Vec<_> = enumerate_simple_cycles(&g, 100)
            .map(Result::unwrap)
            .collect();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].arcs(), &[(v(0), v(0))]);
        assert_eq!(cycles[0].len(), 1);
    }

    #[test]
    fn loops_on_inner_vertices_are_found_once() {
        let g = graph(
            3,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (2, 0, 1.0),
                (1, 1, 0.5),
                (2, 2, 0.25),
            ],
        );
        let cycles: Vec<_> = enumerate_simple_cycles(&g, 100)
            .map(Result::unwrap)
            .collect();
        // The triangle plus the two loops.
        assert_eq!(cycles.len(), 3);
        assert_eq!(cycles.iter().filter(|c| c.len() == 1).count(), 2);
    }

    #[test]
    fn complete_digraph_counts_match_closed_form() {
        // sum_{k=2..n} C(n,k) (k-1)! simple cycles in the loopless
        // complete digraph.
        fn closed_form(n: u64) -> u64 {
            fn binom(n: u64, k: u64) -> u64 {
                let mut r = 1;
                for i in 0..k {
                    r = r * (n - i) / (i + 1);
                }
                r
            }
            fn fact(k: u64) -> u64 {
                (1..=k).product::<u64>().max(1)
            }
            (2..=n).map(|k| binom(n, k) * fact(k - 1)).sum()
        }
        for n in 2..=6usize {
            let g = complete_loopless(n);
            let count = enumerate_simple_cycles(&g, 10_000)
                .map(Result::unwrap)
                .count();
            assert_eq!(count as u64, closed_form(n as u64), "K_{}", n);
            assert_eq!(
                count,
                count_cycles_brute(&g),
                "brute-force disagrees on K_{}",
                n
            );
        }
    }

    #[test]
    fn counts_match_brute_force_on_assorted_graphs() {
        let samples = [
            graph(
                4,
                &[
                    (0, 1, 1.0),
                    (1, 2, 1.0),
                    (2, 0, 1.0),
                    (2, 3, 1.0),
                    (3, 1, 1.0),
                ],
            ),
            graph(
                4,
                &[
                    (0, 1, 1.0),
                    (1, 0, 1.0),
                    (2, 3, 1.0),
                    (3, 2, 1.0),
                    (1, 2, 1.0),
                ],
            ),
            graph(
                5,
                &[
                    (0, 1, 1.0),
                    (1, 2, 1.0),
                    (2, 3, 1.0),
                    (3, 4, 1.0),
                    (4, 0, 1.0),
                    (2, 0, 1.0),
                    (4, 2, 1.0),
                    (1, 1, 1.0),
                ],
            ),
        ];
        for (i, g) in samples.iter().enumerate() {
            let count = enumerate_simple_cycles(g, 10_000)
                .map(Result::unwrap)
                .count();
            assert_eq!(count, count_cycles_brute(g), "sample {}", i);
        }
    }

    #[test]
    fn g2_max_weight_cycle() {
        let g = graph(
            3,
            &[
                (0, 2, 0.3),
                (0, 1, 0.7),
                (1, 2, 0.5),
                (1, 0, 0.5),
                (2, 0, 1.0),
            ],
        );
        let weights: Vec<f64> = enumerate_simple_cycles(&g, 100)
            .map(|c| c.unwrap().weight())
            .collect();
        assert_eq!(weights.len(), 3);
        // 0->1->0 (1.2), 0->1->2->0 (2.2), 0->2->0 (1.3) in emission order.
        assert!((weights[0] - 1.2).abs() <= 1e-12);
        assert!((weights[1] - 2.2).abs() <= 1e-12);
        assert!((weights[2] - 1.3).abs() <= 1e-12);
        let (best, w) = max_weight_cycle(&g, 100).unwrap();
        assert!((w - 2.2).abs() <= 1e-12);
        assert_eq!(best.arcs(), &[(v(0), v(1)), (v(1), v(2)), (v(2), v(0))]);
    }

    #[test]
    fn triangle_max_weight() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]);
        let (_, w) = max_weight_cycle(&g, 100).unwrap();
        assert_eq!(w, 3.0);
    }

    #[test]
    fn cap_trips_as_an_error() {
        let g = complete_loopless(4); // 20 cycles
        let results: Vec<_> = enumerate_simple_cycles(&g, 3).collect();
        assert_eq!(results.len(), 4);
        assert!(results[..3].iter().all(Result::is_ok));
        assert_eq!(results[3], Err(OracleError::CapExceeded { cap: 3 }));

        assert_eq!(
            max_weight_cycle(&g, 3),
            Err(OracleError::CapExceeded { cap: 3 })
        );
        assert!(max_weight_cycle(&g, 20).is_ok());
    }

    #[test]
    fn acyclic_graph_has_no_cycle() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        assert_eq!(max_weight_cycle(&g, 100), Err(OracleError::NoCycle));
        assert_eq!(enumerate_simple_cycles(&g, 100).count(), 0);
    }

    #[test]
    fn enumeration_is_deterministic() {
        let g = complete_loopless(5);
        let a: Vec<_> = enumerate_simple_cycles(&g, 1000)
            .map(Result::unwrap)
            .collect();
        let b: Vec<_> = enumerate_simple_cycles(&g, 1000)
            .map(Result::unwrap)
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn ties_break_by_emission_order() {
        // Two vertex-disjoint 2-cycles with equal weight; the one through
        // vertex 0 is emitted first.
        let g = graph(4, &[(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, 1.0)]);
        let (best, w) = max_weight_cycle(&g, 100).unwrap();
        assert_eq!(w, 2.0);
        assert_eq!(best.arcs(), &[(v(0), v(1)), (v(1), v(0))]);
    }
}
