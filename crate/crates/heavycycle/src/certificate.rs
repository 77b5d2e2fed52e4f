//! Independent certificate checker.
//!
//! Re-derives everything a certificate claims — vertex and loop counts,
//! the bound, the cycle weight — directly from the graph, sharing no
//! code with the search in `heavy`. A certificate that panics this
//! checker into `false` is worthless no matter what produced it.

use std::fmt;

use crate::digraph::{VertexId, WeightedDigraph};
use crate::heavy::CycleCertificate;

/// Absolute slack for the bound inequality, matching the search side.
const BOUND_SLACK: f64 = 1e-9;
/// Slack when comparing a stated bound against the recomputed one; the
/// text format stores bounds with 10 significant digits.
const BOUND_REPR_SLACK: f64 = 1e-9;

/// Certificate as raw claims, the form a parsed certificate file takes.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCertificate {
    pub n: usize,
    pub r: usize,
    pub bound: f64,
    pub achieved: f64,
    pub valid: bool,
    /// Closed vertex walk `v0 v1 ... v0`; a loop is `v v`.
    pub vertex_sequence: Vec<u32>,
}

impl RawCertificate {
    pub fn from_certificate(cert: &CycleCertificate) -> Self {
        Self {
            n: cert.n,
            r: cert.r,
            bound: cert.bound,
            achieved: cert.achieved,
            valid: cert.valid,
            vertex_sequence: cert.cycle.vertex_sequence().iter().map(|v| v.0).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerifyFailure {
    VertexCountMismatch { stated: usize, actual: usize },
    LoopCountMismatch { stated: usize, actual: usize },
    FlaggedInvalid,
    CycleTooShort,
    NotClosed { first: u32, last: u32 },
    VertexOutOfRange { vertex: u32, n: usize },
    RepeatedVertex { vertex: u32 },
    MissingArc { tail: u32, head: u32 },
    AchievedMismatch { stated: f64, recomputed: f64 },
    BoundMismatch { stated: f64, recomputed: f64 },
    BelowBound { achieved: f64, bound: f64 },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::VertexCountMismatch { stated, actual } => {
                write!(
                    f,
                    "certificate states n={} but graph has n={}",
                    stated, actual
                )
            }
            VerifyFailure::LoopCountMismatch { stated, actual } => {
                write!(
                    f,
                    "certificate states r={} but graph has r={}",
                    stated, actual
                )
            }
            VerifyFailure::FlaggedInvalid => write!(f, "certificate flags itself invalid"),
            VerifyFailure::CycleTooShort => {
                write!(f, "cycle needs at least two vertices in its closed walk")
            }
            VerifyFailure::NotClosed { first, last } => {
                write!(f, "walk starts at {} but ends at {}", first, last)
            }
            VerifyFailure::VertexOutOfRange { vertex, n } => {
                write!(
                    f,
                    "vertex {} out of range for graph with {} vertices",
                    vertex, n
                )
            }
            VerifyFailure::RepeatedVertex { vertex } => {
                write!(f, "vertex {} appears twice in the cycle", vertex)
            }
            VerifyFailure::MissingArc { tail, head } => {
                write!(f, "arc ({}, {}) is not in the graph", tail, head)
            }
            VerifyFailure::AchievedMismatch { stated, recomputed } => {
                write!(
                    f,
                    "stated weight {} but arcs re-sum to {}",
                    stated, recomputed
                )
            }
            VerifyFailure::BoundMismatch { stated, recomputed } => {
                write!(
                    f,
                    "stated bound {} but 1/log2(n+r) = {}",
                    stated, recomputed
                )
            }
            VerifyFailure::BelowBound { achieved, bound } => {
                write!(f, "cycle weight {} is below the bound {}", achieved, bound)
            }
        }
    }
}

/// Checks every claim in `cert` against `g`. Returns the first failure
/// found, or `Ok(())` for a sound certificate.
pub fn verify_raw(g: &WeightedDigraph, cert: &RawCertificate) -> Result<(), VerifyFailure> {
    let n = g.vertex_count();
    let r = g.loop_count();
    if cert.n != n {
        return Err(VerifyFailure::VertexCountMismatch {
            stated: cert.n,
            actual: n,
        });
    }
    if cert.r != r {
        return Err(VerifyFailure::LoopCountMismatch {
            stated: cert.r,
            actual: r,
        });
    }
    if !cert.valid {
        return Err(VerifyFailure::FlaggedInvalid);
    }

    let seq = &cert.vertex_sequence;
    if seq.len() < 2 {
        return Err(VerifyFailure::CycleTooShort);
    }
    let (first, last) = (seq[0], seq[seq.len() - 1]);
    if first != last {
        return Err(VerifyFailure::NotClosed { first, last });
    }
    let tails = &seq[..seq.len() - 1];
    let mut seen = std::collections::BTreeSet::new();
    for &v in tails {
        if v as usize >= n {
            return Err(VerifyFailure::VertexOutOfRange { vertex: v, n });
        }
        if !seen.insert(v) {
            return Err(VerifyFailure::RepeatedVertex { vertex: v });
        }
    }

    // Exact re-summation in sequence order.
    let mut recomputed = 0.0;
    for i in 0..seq.len() - 1 {
        let (tail, head) = (seq[i], seq[i + 1]);
        match g.arc_weight(VertexId(tail), VertexId(head)) {
            Some(w) => recomputed += w,
            None => return Err(VerifyFailure::MissingArc { tail, head }),
        }
    }
    if cert.achieved != recomputed {
        return Err(VerifyFailure::AchievedMismatch {
            stated: cert.achieved,
            recomputed,
        });
    }

    let bound = 1.0 / ((n + r) as f64).log2();
    if !(cert.bound - bound).abs().le(&BOUND_REPR_SLACK) {
        return Err(VerifyFailure::BoundMismatch {
            stated: cert.bound,
            recomputed: bound,
        });
    }
    if recomputed < bound - BOUND_SLACK {
        return Err(VerifyFailure::BelowBound {
            achieved: recomputed,
            bound,
        });
    }
    Ok(())
}

pub fn verify_certificate_detailed(
    g: &WeightedDigraph,
    cert: &CycleCertificate,
) -> Result<(), VerifyFailure> {
    verify_raw(g, &RawCertificate::from_certificate(cert))
}

pub fn verify_certificate(g: &WeightedDigraph, cert: &CycleCertificate) -> bool {
    verify_certificate_detailed(g, cert).is_ok()
}
