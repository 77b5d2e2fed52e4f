//! Heavy directed cycles in weighted digraphs.
//!
//! If every vertex of a weighted digraph with `n` vertices and `r`
//! loops has weighted outdegree at least 1, the graph contains a
//! directed cycle of weight at least `1/log2(n+r)`. This crate finds
//! such a cycle constructively, emits a machine-checkable certificate
//! for it, and ships the supporting cast: an exhaustive max-weight
//! cycle oracle for small instances, seeded instance generators, and
//! text formats for graphs and certificates.
//!
//! ```
//! use heavycycle::{digraph::{VertexId, WeightedDigraph}, heavy, certificate};
//!
//! let mut g = WeightedDigraph::new(3);
//! g.add_arc(VertexId(0), VertexId(1), 1.0).unwrap();
//! g.add_arc(VertexId(1), VertexId(2), 1.0).unwrap();
//! g.add_arc(VertexId(2), VertexId(0), 1.0).unwrap();
//! let cert = heavy::find_heavy_cycle(&g).unwrap();
//! assert!(cert.valid && cert.achieved >= cert.bound);
//! assert!(certificate::verify_certificate(&g, &cert));
//! ```

pub mod certificate;
pub mod digraph;
pub mod generators;
pub mod heavy;
pub mod io;
pub mod oracle;
pub mod rng;
pub mod scc;

pub use certificate::{verify_certificate, verify_certificate_detailed, RawCertificate};
pub use digraph::{GraphError, VertexId, WeightedDigraph};
pub use generators::{
    gen_layered_sink, gen_loop_heavy, gen_normalized_random, gen_unweighted_outdegree_d, GenError,
    GenSpec,
};
pub use heavy::{
    bound_value, contract_step, find_heavy_cycle, find_heavy_cycle_traced,
    find_heavy_cycle_traced_with_tolerance,
    find_heavy_cycle_with_tolerance, lift_cycle, strip_loops_step, ContractionRecord,
    CycleCertificate, DirectedCycle, HeavyCycleError, ReductionStep, ReductionTrace, StripOutcome,
};
pub use oracle::{enumerate_simple_cycles, max_weight_cycle, OracleError, DEFAULT_CYCLE_CAP};
pub use scc::{is_strongly_connected, scc_decompose, sink_component};
