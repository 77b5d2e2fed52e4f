//! Strongly connected components via an iterative Tarjan.
//!
//! The recursion is unrolled onto an explicit stack because inputs can
//! have 10^5 vertices on a single path.

use crate::digraph::{VertexId, WeightedDigraph};

/// Tarjan over an adjacency-slice view. `alive[v] == false` vertices are
/// skipped entirely. Components come out in reverse topological order of
/// the condensation.
pub(crate) fn tarjan_components(adj: &[Vec<u32>], alive: &[bool]) -> Vec<Vec<u32>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut comps: Vec<Vec<u32>> = Vec::new();
    let mut next_index = 0usize;

    // Frame: (vertex, position in its adjacency list).
    let mut frames: Vec<(u32, usize)> = Vec::new();

    for root in 0..n as u32 {
        if !alive[root as usize] || index[root as usize] != usize::MAX {
            continue;
        }
        frames.push((root, 0));
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            let vu = v as usize;
            if *pos < adj[vu].len() {
                let w = adj[vu][*pos];
                *pos += 1;
                let wu = w as usize;
                if !alive[wu] {
                    continue;
                }
                if index[wu] == usize::MAX {
                    index[wu] = next_index;
                    low[wu] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[wu] = true;
                    frames.push((w, 0));
                } else if on_stack[wu] {
                    low[vu] = low[vu].min(index[wu]);
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    let pu = parent as usize;
                    low[pu] = low[pu].min(low[vu]);
                }
                if low[vu] == index[vu] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w as usize] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

fn adjacency_of(g: &WeightedDigraph) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for (u, h, _) in g.arcs() {
        adj[u.index()].push(h.0);
    }
    adj
}

/// Partition of the vertex set into strongly connected components, in a
/// topological order of the condensation: every inter-component arc goes
/// from an earlier part to a later one. Each part is sorted ascending.
pub fn scc_decompose(g: &WeightedDigraph) -> Vec<Vec<VertexId>> {
    let adj = adjacency_of(g);
    let alive = vec![true; g.vertex_count()];
    let mut comps = tarjan_components(&adj, &alive);
    comps.reverse(); // Tarjan emits reverse-topological.
    comps
        .into_iter()
        .map(|c| c.into_iter().map(VertexId).collect())
        .collect()
}

/// Picks the sink component (no outgoing arcs to its complement) that
/// contains the smallest vertex id among all sink components.
pub fn sink_component(g: &WeightedDigraph) -> Vec<VertexId> {
    assert!(
        g.vertex_count() > 0,
        "sink_component requires a nonempty graph"
    );
    let comps = scc_decompose(g);
    let mut comp_of = vec![usize::MAX; g.vertex_count()];
    for (cid, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v.index()] = cid;
        }
    }
    let mut is_sink = vec![true; comps.len()];
    for (u, h, _) in g.arcs() {
        if comp_of[u.index()] != comp_of[h.index()] {
            is_sink[comp_of[u.index()]] = false;
        }
    }
    comps
        .into_iter()
        .enumerate()
        .filter(|(cid, _)| is_sink[*cid])
        .map(|(_, comp)| comp)
        .min_by_key(|comp| comp[0])
        .expect("every finite digraph has a sink component")
}

pub fn is_strongly_connected(g: &WeightedDigraph) -> bool {
    g.vertex_count() > 0 && scc_decompose(g).len() == 1
}
