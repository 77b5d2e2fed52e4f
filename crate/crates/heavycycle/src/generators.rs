//! Seeded instance families for tests and benchmarks.
//!
//! Every family is a pure function of its parameters and seed: the same
//! `GenSpec` always yields the same graph, byte for byte, because the
//! generator algorithm (SplitMix64) and the sampling order are fixed.
//!
//! Per-vertex weights are normalized so the weighted outdegree comes out
//! as exactly 1.0 in double precision, not merely close: the weight of
//! the largest head is set to `1 - (sum of the others)`, and summing in
//! ascending head order (the order `weighted_outdegree` uses) then
//! cancels exactly.

use std::collections::BTreeSet;
use std::fmt;

use crate::digraph::{VertexId, WeightedDigraph};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq)]
pub enum GenError {
    InvalidK { k: usize, n: usize },
    InvalidEpsilon { eps: f64 },
    InvalidD { d: usize, n: usize },
    InvalidN { n: usize, family: &'static str },
    InvalidLayers { layers: usize },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::InvalidK { k, n } => write!(f, "k={} not in 1..={}", k, n),
            GenError::InvalidEpsilon { eps } => {
                write!(f, "loop weight {} not in [0, 1)", eps)
            }
            GenError::InvalidD { d, n } => write!(f, "d={} not in 1..{}", d, n),
            GenError::InvalidN { n, family } => {
                write!(f, "family {} needs more vertices than {}", family, n)
            }
            GenError::InvalidLayers { layers } => write!(f, "layers={} must be at least 2", layers),
        }
    }
}

impl std::error::Error for GenError {}

/// Instance family plus parameters; `build` is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    NormalizedRandom { n: usize, k: usize, seed: u64 },
    LoopHeavy { n: usize, eps: f64, seed: u64 },
    UnweightedOutdegreeD { n: usize, d: usize, seed: u64 },
    LayeredSink { layers: usize, seed: u64 },
}

impl GenSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            GenSpec::NormalizedRandom { .. } => "normalized",
            GenSpec::LoopHeavy { .. } => "loopheavy",
            GenSpec::UnweightedOutdegreeD { .. } => "unweighted",
            GenSpec::LayeredSink { .. } => "layered",
        }
    }

    pub fn seed(&self) -> u64 {
        match *self {
            GenSpec::NormalizedRandom { seed, .. }
            | GenSpec::LoopHeavy { seed, .. }
            | GenSpec::UnweightedOutdegreeD { seed, .. }
            | GenSpec::LayeredSink { seed, .. } => seed,
        }
    }

    pub fn build(&self) -> Result<WeightedDigraph, GenError> {
        match *self {
            GenSpec::NormalizedRandom { n, k, seed } => gen_normalized_random(n, k, seed),
            GenSpec::LoopHeavy { n, eps, seed } => gen_loop_heavy(n, eps, seed),
            GenSpec::UnweightedOutdegreeD { n, d, seed } => gen_unweighted_outdegree_d(n, d, seed),
            GenSpec::LayeredSink { layers, seed } => gen_layered_sink(layers, seed),
        }
    }
}

/// `k` distinct values from 0..n, optionally excluding one, ascending.
/// Rejection sampling for sparse draws, partial Fisher-Yates when `k`
/// is a large fraction of the pool.
fn sample_distinct(rng: &mut SplitMix64, n: u32, k: usize, exclude: Option<u32>) -> Vec<u32> {
    let pool_size = n as usize - usize::from(exclude.is_some());
    debug_assert!(k <= pool_size);
    if k * 3 >= pool_size {
        let mut pool: Vec<u32> = (0..n).filter(|&x| Some(x) != exclude).collect();
        for i in 0..k {
            let j = i + rng.next_below((pool_size - i) as u64) as usize;
            pool.swap(i, j);
        }
        let mut out = pool[..k].to_vec();
        out.sort_unstable();
        out
    } else {
        let mut set = BTreeSet::new();
        while set.len() < k {
            let c = rng.next_below(n as u64) as u32;
            if Some(c) == exclude {
                continue;
            }
            set.insert(c);
        }
        set.into_iter().collect()
    }
}

/// `count` positive weights that re-sum to exactly 1.0 when folded in
/// order: the last one closes the budget. Raw draws live in [0.25, 1) so
/// the closing term stays safely positive.
fn normalized_weights(rng: &mut SplitMix64, count: usize) -> Vec<f64> {
    let raws: Vec<f64> = (0..count).map(|_| 0.25 + 0.75 * rng.next_f64()).collect();
    let total: f64 = raws.iter().fold(0.0, |a, b| a + b);
    let mut weights = Vec::with_capacity(count);
    let mut acc = 0.0;
    for raw in raws.iter().take(count - 1) {
        let w = raw / total;
        acc += w;
        weights.push(w);
    }
    weights.push(1.0 - acc);
    weights
}

/// Every vertex gets `k` distinct out-neighbors drawn from all `n`
/// vertices including itself, with weights normalized to outdegree
/// exactly 1.
pub fn gen_normalized_random(n: usize, k: usize, seed: u64) -> Result<WeightedDigraph, GenError> {
    if k == 0 || k > n {
        return Err(GenError::InvalidK { k, n });
    }
    let mut rng = SplitMix64::new(seed);
    let mut g = WeightedDigraph::new(n);
    for v in 0..n as u32 {
        let heads = sample_distinct(&mut rng, n as u32, k, None);
        let weights = normalized_weights(&mut rng, k);
        for (h, w) in heads.iter().zip(weights) {
            g.add_arc(VertexId(v), VertexId(*h), w)
                .expect("sampled heads are distinct");
        }
    }
    Ok(g)
}

/// Every vertex carries a loop of weight `eps` plus one arc of weight
/// `1 - eps` to its successor on a seeded ring, so outdegrees are
/// exactly 1 and all n vertices are looped. With
/// `eps < 1/(1 + log2 n)` this drives the loop-stripping path of the
/// heavy-cycle search.
pub fn gen_loop_heavy(n: usize, eps: f64, seed: u64) -> Result<WeightedDigraph, GenError> {
    if !(0.0..1.0).contains(&eps) {
        return Err(GenError::InvalidEpsilon { eps });
    }
    if n < 2 {
        // A single looped vertex cannot reach outdegree 1 with eps < 1.
        return Err(GenError::InvalidN {
            n,
            family: "loopheavy",
        });
    }
    let mut rng = SplitMix64::new(seed);
    let mut ring: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.next_below((i + 1) as u64) as usize;
        ring.swap(i, j);
    }
    let arc_weight = 1.0 - eps;
    let mut g = WeightedDigraph::new(n);
    for v in 0..n as u32 {
        g.add_arc(VertexId(v), VertexId(v), eps)
            .expect("fresh loop");
    }
    for i in 0..n {
        let from = ring[i];
        let to = ring[(i + 1) % n];
        g.add_arc(VertexId(from), VertexId(to), arc_weight)
            .expect("ring arcs are distinct and non-loop");
    }
    Ok(g)
}

/// Loopless graph where every vertex has exactly `d` out-arcs of weight 1.
pub fn gen_unweighted_outdegree_d(
    n: usize,
    d: usize,
    seed: u64,
) -> Result<WeightedDigraph, GenError> {
    if d == 0 || d >= n {
        return Err(GenError::InvalidD { d, n });
    }
    let mut rng = SplitMix64::new(seed);
    let mut g = WeightedDigraph::new(n);
    for v in 0..n as u32 {
        let heads = sample_distinct(&mut rng, n as u32, d, Some(v));
        for h in heads {
            g.add_arc(VertexId(v), VertexId(h), 1.0)
                .expect("distinct non-loop heads");
        }
    }
    Ok(g)
}

const LAYER_BLOCK: usize = 3;
const SINK_BLOCK: usize = 5;

/// A chain of strongly connected blocks whose condensation is a path;
/// only the last (sink) block can contain a heavy cycle. Non-sink
/// vertices carry 0.25 on their block ring and 0.75 forward to a random
/// vertex of the next block; sink vertices spread weight 1 over their
/// ring arc plus one extra in-block arc.
pub fn gen_layered_sink(layers: usize, seed: u64) -> Result<WeightedDigraph, GenError> {
    if layers < 2 {
        return Err(GenError::InvalidLayers { layers });
    }
    let mut rng = SplitMix64::new(seed);
    let n = LAYER_BLOCK * (layers - 1) + SINK_BLOCK;
    let mut g = WeightedDigraph::new(n);
    let block_start = |b: usize| {
        if b < layers - 1 {
            b * LAYER_BLOCK
        } else {
            (layers - 1) * LAYER_BLOCK
        }
    };
    let block_len = |b: usize| {
        if b < layers - 1 {
            LAYER_BLOCK
        } else {
            SINK_BLOCK
        }
    };

    for b in 0..layers {
        let start = block_start(b);
        let len = block_len(b);
        if b < layers - 1 {
            let next_start = block_start(b + 1);
            let next_len = block_len(b + 1);
            for i in 0..len {
                let v = (start + i) as u32;
                let ring_to = (start + (i + 1) % len) as u32;
                let cross = (next_start as u64 + rng.next_below(next_len as u64)) as u32;
                g.add_arc(VertexId(v), VertexId(ring_to), 0.25)
                    .expect("ring arc");
                g.add_arc(VertexId(v), VertexId(cross), 0.75)
                    .expect("cross arc");
            }
        } else {
            for i in 0..len {
                let v = (start + i) as u32;
                let ring_to = (start + (i + 1) % len) as u32;
                // One extra in-block arc; the ring keeps the block
                // strongly connected regardless of the extra choice.
                let extra = loop {
                    let c = (start as u64 + rng.next_below(len as u64)) as u32;
                    if c != ring_to {
                        break c;
                    }
                };
                let mut heads = [ring_to, extra];
                heads.sort_unstable();
                let weights = normalized_weights(&mut rng, 2);
                for (h, w) in heads.iter().zip(weights) {
                    g.add_arc(VertexId(v), VertexId(*h), w)
                        .expect("distinct heads");
                }
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heavy::{find_heavy_cycle_traced, ReductionStep};
    use crate::scc::scc_decompose;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn normalized_single_vertex_is_a_unit_loop() {
        let g = gen_normalized_random(1, 1, 991).unwrap();
        assert_eq!(g.arc_weight(v(0), v(0)), Some(1.0));
        assert_eq!(g.loop_count(), 1);
    }

    #[test]
    fn normalized_outdegrees_are_exactly_one() {
        for seed in [42u64, 7, 123456789] {
            let g = gen_normalized_random(5, 2, seed).unwrap();
            for u in g.vertices() {
                assert_eq!(g.weighted_outdegree(u), 1.0, "seed {} vertex {}", seed, u);
                assert_eq!(g.out_degree(u), 2);
            }
        }
        // Larger draw counts still close exactly.
        let g = gen_normalized_random(64, 17, 5).unwrap();
        for u in g.vertices() {
            assert_eq!(g.weighted_outdegree(u), 1.0);
        }
    }

    #[test]
    fn normalized_k_equals_n_is_a_complete_out_star() {
        let g = gen_normalized_random(3, 3, 7).unwrap();
        for u in g.vertices() {
            let heads: Vec<u32> = g.out_arcs(u).map(|(h, _)| h.0).collect();
            assert_eq!(heads, vec![0, 1, 2]);
        }
        assert_eq!(g.loop_count(), 3);
    }

    #[test]
    fn normalized_rejects_bad_k() {
        assert!(matches!(
            gen_normalized_random(5, 0, 1),
            Err(GenError::InvalidK { .. })
        ));
        assert!(matches!(
            gen_normalized_random(5, 6, 1),
            Err(GenError::InvalidK { .. })
        ));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_normalized_random(20, 3, 77).unwrap();
        let b = gen_normalized_random(20, 3, 77).unwrap();
        assert_eq!(a, b);
        let c = gen_normalized_random(20, 3, 78).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn loop_heavy_small_case_matches_fixture_shape() {
        let g = gen_loop_heavy(2, 0.2, 3).unwrap();
        assert_eq!(g.arc_count(), 4);
        assert_eq!(g.arc_weight(v(0), v(0)), Some(0.2));
        assert_eq!(g.arc_weight(v(1), v(1)), Some(0.2));
        assert_eq!(g.arc_weight(v(0), v(1)), Some(0.8));
        assert_eq!(g.arc_weight(v(1), v(0)), Some(0.8));
        for u in g.vertices() {
            assert_eq!(g.weighted_outdegree(u), 1.0);
        }
    }

    #[test]
    fn loop_heavy_every_vertex_looped_outdegree_one() {
        let g = gen_loop_heavy(17, 0.1, 12345).unwrap();
        assert_eq!(g.loop_count(), 17);
        for u in g.vertices() {
            assert_eq!(g.weighted_outdegree(u), 1.0);
        }
    }

    #[test]
    fn loop_heavy_heavy_loops_short_circuit_the_search() {
        let g = gen_loop_heavy(2, 0.6, 4).unwrap();
        let (cert, trace) = find_heavy_cycle_traced(&g).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.cycle.len(), 1);
        assert_eq!(cert.achieved, 0.6);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn loop_heavy_light_loops_get_stripped() {
        let g = gen_loop_heavy(2, 0.2, 4).unwrap();
        let (cert, trace) = find_heavy_cycle_traced(&g).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.achieved, 1.6);
        assert!(matches!(trace.steps[0], ReductionStep::StripLoops { .. }));
    }

    #[test]
    fn loop_heavy_rejects_bad_parameters() {
        assert!(matches!(
            gen_loop_heavy(2, 1.0, 1),
            Err(GenError::InvalidEpsilon { .. })
        ));
        assert!(matches!(
            gen_loop_heavy(2, -0.1, 1),
            Err(GenError::InvalidEpsilon { .. })
        ));
        assert!(matches!(
            gen_loop_heavy(1, 0.5, 1),
            Err(GenError::InvalidN { .. })
        ));
    }

    #[test]
    fn unweighted_has_exact_outdegree_and_no_loops() {
        for (n, d, seed) in [(5, 2, 1u64), (8, 3, 9), (10, 1, 77)] {
            let g = gen_unweighted_outdegree_d(n, d, seed).unwrap();
            assert_eq!(g.loop_count(), 0);
            for u in g.vertices() {
                assert_eq!(g.out_degree(u), d);
                assert_eq!(g.weighted_outdegree(u), d as f64);
                for (_, w) in g.out_arcs(u) {
                    assert_eq!(w, 1.0);
                }
            }
        }
    }

    #[test]
    fn unweighted_replays_identically() {
        let a = gen_unweighted_outdegree_d(5, 2, 1).unwrap();
        let b = gen_unweighted_outdegree_d(5, 2, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unweighted_complete_case_and_bad_d() {
        let g = gen_unweighted_outdegree_d(4, 3, 2).unwrap();
        assert_eq!(g.arc_count(), 12);
        assert!(matches!(
            gen_unweighted_outdegree_d(4, 0, 2),
            Err(GenError::InvalidD { .. })
        ));
        assert!(matches!(
            gen_unweighted_outdegree_d(4, 4, 2),
            Err(GenError::InvalidD { .. })
        ));
    }

    #[test]
    fn layered_two_layers_condense_to_a_path() {
        let g = gen_layered_sink(2, 5).unwrap();
        let comps = scc_decompose(&g);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].len(), LAYER_BLOCK);
        assert_eq!(comps[1].len(), SINK_BLOCK);
        for u in g.vertices() {
            assert_eq!(g.weighted_outdegree(u), 1.0);
        }
    }

    #[test]
    fn layered_search_restricts_to_the_sink_first() {
        let g = gen_layered_sink(3, 11).unwrap();
        let (cert, trace) = find_heavy_cycle_traced(&g).unwrap();
        assert!(cert.valid);
        match &trace.steps[0] {
            ReductionStep::SinkRestrict { kept } => assert_eq!(kept.len(), SINK_BLOCK),
            other => panic!("expected SinkRestrict first, got {}", other),
        }
    }

    #[test]
    fn layered_sink_restriction_preserves_outdegrees() {
        let g = gen_layered_sink(2, 19).unwrap();
        let sink = crate::scc::sink_component(&g);
        let (sub, map) = g.induced_subdigraph(&sink).unwrap();
        for (new_id, old_id) in map.iter().enumerate() {
            assert_eq!(
                sub.weighted_outdegree(v(new_id as u32)),
                g.weighted_outdegree(*old_id)
            );
        }
        assert!(matches!(
            gen_layered_sink(1, 0),
            Err(GenError::InvalidLayers { .. })
        ));
    }

    #[test]
    fn genspec_builds_and_names() {
        let spec = GenSpec::NormalizedRandom {
            n: 6,
            k: 2,
            seed: 3,
        };
        assert_eq!(spec.family_name(), "normalized");
        assert_eq!(spec.seed(), 3);
        let g = spec.build().unwrap();
        let h = spec.build().unwrap();
        assert_eq!(g, h);
    }
}
