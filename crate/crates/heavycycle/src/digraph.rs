//! Weighted digraph representation.
//!
//! Vertices are dense 0-based ids. At most one arc per ordered pair
//! (tail, head); a loop is an arc (v, v) and counts toward the weighted
//! outdegree of v. Arc weights are nonnegative finite doubles.
//!
//! Graphs are built by `add_arc` calls and treated as immutable
//! afterwards; all read accessors take `&self`, so a built graph can be
//! shared across threads freely.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Dense 0-based vertex index, valid only for the graph that owns it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    InvalidVertex { vertex: u32, n: usize },
    NegativeWeight { tail: u32, head: u32, weight: f64 },
    NonFiniteWeight { tail: u32, head: u32 },
    DuplicateArc { tail: u32, head: u32 },
    EmptyGraph,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::InvalidVertex { vertex, n } => {
                write!(
                    f,
                    "vertex {} out of range for graph with {} vertices",
                    vertex, n
                )
            }
            GraphError::NegativeWeight { tail, head, weight } => {
                write!(f, "negative weight {} on arc ({}, {})", weight, tail, head)
            }
            GraphError::NonFiniteWeight { tail, head } => {
                write!(f, "non-finite weight on arc ({}, {})", tail, head)
            }
            GraphError::DuplicateArc { tail, head } => {
                write!(f, "duplicate arc ({}, {})", tail, head)
            }
            GraphError::EmptyGraph => write!(f, "operation requires at least one vertex"),
        }
    }
}

impl std::error::Error for GraphError {}

/// Weighted digraph with loops but no multiple arcs.
///
/// `out[v]` maps head -> weight in ascending head order; `in_nbrs[v]`
/// is the set of tails with an arc into v. The in-index is kept as the
/// exact transpose of the out-maps.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    out: Vec<BTreeMap<u32, f64>>,
    in_nbrs: Vec<BTreeSet<u32>>,
    arc_count: usize,
    loop_count: usize,
}

impl WeightedDigraph {
    /// Graph with `n` vertices and no arcs.
    pub fn new(n: usize) -> Self {
        Self {
            out: vec![BTreeMap::new(); n],
            in_nbrs: vec![BTreeSet::new(); n],
            arc_count: 0,
            loop_count: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Number of arcs (v, v).
    pub fn loop_count(&self) -> usize {
        self.loop_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.out.len() as u32).map(VertexId)
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v.index() < self.out.len() {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex {
                vertex: v.0,
                n: self.out.len(),
            })
        }
    }

    /// Inserts the arc (u, v) with weight `w`.
    pub fn add_arc(&mut self, u: VertexId, v: VertexId, w: f64) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !w.is_finite() {
            return Err(GraphError::NonFiniteWeight {
                tail: u.0,
                head: v.0,
            });
        }
        if w < 0.0 {
            return Err(GraphError::NegativeWeight {
                tail: u.0,
                head: v.0,
                weight: w,
            });
        }
        if self.out[u.index()].contains_key(&v.0) {
            return Err(GraphError::DuplicateArc {
                tail: u.0,
                head: v.0,
            });
        }
        self.out[u.index()].insert(v.0, w);
        self.in_nbrs[v.index()].insert(u.0);
        self.arc_count += 1;
        if u == v {
            self.loop_count += 1;
        }
        Ok(())
    }

    pub fn arc_weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        self.out.get(u.index())?.get(&v.0).copied()
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.arc_weight(u, v).is_some()
    }

    /// Out-arcs of `v` in ascending head order.
    pub fn out_arcs(&self, v: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.out[v.index()].iter().map(|(&h, &w)| (VertexId(h), w))
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v.index()].len()
    }

    /// Tails of arcs into `v`, ascending.
    pub fn in_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.in_nbrs[v.index()].iter().map(|&t| VertexId(t))
    }

    pub fn has_loop(&self, v: VertexId) -> bool {
        self.out[v.index()].contains_key(&v.0)
    }

    /// All arcs in ascending (tail, head) order.
    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, heads)| {
            heads
                .iter()
                .map(move |(&h, &w)| (VertexId(u as u32), VertexId(h), w))
        })
    }

    /// Sum of weights of arcs with tail `v`, including a loop at `v`.
    /// Accumulated in ascending head order so the value is reproducible.
    pub fn weighted_outdegree(&self, v: VertexId) -> f64 {
        self.out[v.index()].values().fold(0.0, |acc, w| acc + w)
    }

    pub fn min_weighted_outdegree(&self) -> Result<f64, GraphError> {
        if self.out.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        Ok(self
            .vertices()
            .map(|v| self.weighted_outdegree(v))
            .fold(f64::INFINITY, f64::min))
    }

    /// Total arc weight, accumulated vertex by vertex in id order.
    pub fn total_weight(&self) -> f64 {
        self.vertices()
            .fold(0.0, |acc, v| acc + self.weighted_outdegree(v))
    }

    /// Subgraph induced by `subset`: keeps exactly the arcs with both
    /// ends in the subset, weights unchanged. Vertices are relabeled to
    /// 0..|subset|-1 in ascending order of their original ids; the
    /// returned map sends each new id to its original id.
    pub fn induced_subdigraph(
        &self,
        subset: &[VertexId],
    ) -> Result<(WeightedDigraph, Vec<VertexId>), GraphError> {
        let mut members = BTreeSet::new();
        for &v in subset {
            self.check_vertex(v)?;
            members.insert(v.0);
        }
        let old_ids: Vec<u32> = members.iter().copied().collect();
        let mut new_id = BTreeMap::new();
        for (i, &v) in old_ids.iter().enumerate() {
            new_id.insert(v, i as u32);
        }
        let mut sub = WeightedDigraph::new(old_ids.len());
        for &u in &old_ids {
            for (&h, &w) in &self.out[u as usize] {
                if let Some(&h_new) = new_id.get(&h) {
                    sub.add_arc(VertexId(new_id[&u]), VertexId(h_new), w)
                        .expect("induced arcs are unique with valid endpoints");
                }
            }
        }
        Ok((sub, old_ids.into_iter().map(VertexId).collect()))
    }

    // Crate-internal mutators used by the reduction engine. The public
    // contract stays build-then-read-only.

    pub(crate) fn remove_arc(&mut self, u: VertexId, v: VertexId) -> Option<f64> {
        let w = self.out[u.index()].remove(&v.0)?;
        self.in_nbrs[v.index()].remove(&u.0);
        self.arc_count -= 1;
        if u == v {
            self.loop_count -= 1;
        }
        Some(w)
    }

    /// Inserts or replaces (u, v); returns the replaced weight if any.
    pub(crate) fn put_arc(&mut self, u: VertexId, v: VertexId, w: f64) -> Option<f64> {
        let old = self.out[u.index()].insert(v.0, w);
        if old.is_none() {
            self.in_nbrs[v.index()].insert(u.0);
            self.arc_count += 1;
            if u == v {
                self.loop_count += 1;
            }
        }
        old
    }
}
