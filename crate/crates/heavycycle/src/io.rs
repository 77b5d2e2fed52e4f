//! Text formats: edge-list graphs and certificate documents.
//!
//! Edge list: a header line `n m`, then `m` lines `u v w` with 0-based
//! endpoints and a nonnegative finite decimal weight; a loop is `u u w`.
//! Lines starting with `#` and blank lines are ignored. UTF-8, LF.
//!
//! Certificate: `key value` lines (`n`, `r`, `bound`, `achieved`,
//! `valid`, `cycle`), where `cycle` is the closed vertex walk
//! `v0 v1 ... v0`. Weights are written with 17 significant digits so a
//! parsed document re-verifies bit-identically; `bound` is informative
//! and carries 10.

use std::fmt;
use std::fmt::Write as _;

use crate::certificate::RawCertificate;
use crate::digraph::{GraphError, VertexId, WeightedDigraph};
use crate::heavy::CycleCertificate;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based physical line number; 0 for document-level problems.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    MissingHeader,
    BadHeader,
    BadArcLine,
    BadNumber,
    NonFiniteWeight,
    NegativeWeight,
    DuplicateArc { tail: u32, head: u32 },
    VertexOutOfRange { vertex: u32, n: usize },
    TooFewArcs { expected: usize, found: usize },
    TrailingData,
    MissingField { field: &'static str },
    DuplicateField { field: &'static str },
    UnknownField,
    BadCycleLine,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: ", self.line)?;
        }
        match &self.kind {
            ParseErrorKind::MissingHeader => write!(f, "missing `n m` header"),
            ParseErrorKind::BadHeader => write!(f, "header must be two integers `n m`"),
            ParseErrorKind::BadArcLine => write!(f, "arc line must be `u v w`"),
            ParseErrorKind::BadNumber => write!(f, "unparseable number"),
            ParseErrorKind::NonFiniteWeight => write!(f, "weight must be finite"),
            ParseErrorKind::NegativeWeight => write!(f, "weight must be nonnegative"),
            ParseErrorKind::DuplicateArc { tail, head } => {
                write!(f, "duplicate arc ({}, {})", tail, head)
            }
            ParseErrorKind::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {} out of range for n={}", vertex, n)
            }
            ParseErrorKind::TooFewArcs { expected, found } => {
                write!(
                    f,
                    "header promises {} arcs but document has {}",
                    expected, found
                )
            }
            ParseErrorKind::TrailingData => write!(f, "unexpected data after the last arc"),
            ParseErrorKind::MissingField { field } => write!(f, "missing field `{}`", field),
            ParseErrorKind::DuplicateField { field } => write!(f, "field `{}` given twice", field),
            ParseErrorKind::UnknownField => write!(f, "unknown field"),
            ParseErrorKind::BadCycleLine => write!(f, "cycle line must list at least two vertices"),
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Numbered non-comment, non-blank lines.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_weight(line: usize, token: &str) -> Result<f64, ParseError> {
    let w: f64 = token
        .parse()
        .map_err(|_| err(line, ParseErrorKind::BadNumber))?;
    if !w.is_finite() {
        return Err(err(line, ParseErrorKind::NonFiniteWeight));
    }
    if w < 0.0 {
        return Err(err(line, ParseErrorKind::NegativeWeight));
    }
    Ok(w)
}

pub fn parse_edge_list(text: &str) -> Result<WeightedDigraph, ParseError> {
    let mut lines = data_lines(text);
    let (header_line, header) = lines.next().ok_or(err(0, ParseErrorKind::MissingHeader))?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(err(header_line, ParseErrorKind::BadHeader))?;
    let m: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(err(header_line, ParseErrorKind::BadHeader))?;
    if parts.next().is_some() {
        return Err(err(header_line, ParseErrorKind::BadHeader));
    }

    let mut g = WeightedDigraph::new(n);
    let mut found = 0usize;
    let mut last_line = header_line;
    for (line, content) in lines {
        if found == m {
            return Err(err(line, ParseErrorKind::TrailingData));
        }
        last_line = line;
        let mut tok = content.split_whitespace();
        let (u, v, w) = match (tok.next(), tok.next(), tok.next(), tok.next()) {
            (Some(a), Some(b), Some(c), None) => (a, b, c),
            _ => return Err(err(line, ParseErrorKind::BadArcLine)),
        };
        let u: u32 = u
            .parse()
            .map_err(|_| err(line, ParseErrorKind::BadNumber))?;
        let v: u32 = v
            .parse()
            .map_err(|_| err(line, ParseErrorKind::BadNumber))?;
        let w = parse_weight(line, w)?;
        g.add_arc(VertexId(u), VertexId(v), w)
            .map_err(|e| match e {
                GraphError::DuplicateArc { tail, head } => {
                    err(line, ParseErrorKind::DuplicateArc { tail, head })
                }
                GraphError::InvalidVertex { vertex, n } => {
                    err(line, ParseErrorKind::VertexOutOfRange { vertex, n })
                }
                GraphError::NegativeWeight { .. } => err(line, ParseErrorKind::NegativeWeight),
                GraphError::NonFiniteWeight { .. } => err(line, ParseErrorKind::NonFiniteWeight),
                GraphError::EmptyGraph => err(line, ParseErrorKind::BadArcLine),
            })?;
        found += 1;
    }
    if found < m {
        return Err(err(
            last_line,
            ParseErrorKind::TooFewArcs { expected: m, found },
        ));
    }
    Ok(g)
}

/// 17 significant digits: enough to reproduce any double exactly.
fn fmt_weight(w: f64) -> String {
    format!("{:.16e}", w)
}

pub fn write_edge_list(g: &WeightedDigraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.vertex_count(), g.arc_count());
    for (u, v, w) in g.arcs() {
        let _ = writeln!(out, "{} {} {}", u, v, fmt_weight(w));
    }
    out
}

pub fn write_certificate(cert: &CycleCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n {}", cert.n);
    let _ = writeln!(out, "r {}", cert.r);
    let _ = writeln!(out, "bound {:.9e}", cert.bound);
    let _ = writeln!(out, "achieved {}", fmt_weight(cert.achieved));
    let _ = writeln!(out, "valid {}", cert.valid);
    let seq: Vec<String> = cert
        .cycle
        .vertex_sequence()
        .iter()
        .map(|v| v.to_string())
        .collect();
    let _ = writeln!(out, "cycle {}", seq.join(" "));
    out
}

pub fn parse_certificate(text: &str) -> Result<RawCertificate, ParseError> {
    let mut n: Option<usize> = None;
    let mut r: Option<usize> = None;
    let mut bound: Option<f64> = None;
    let mut achieved: Option<f64> = None;
    let mut valid: Option<bool> = None;
    let mut cycle: Option<Vec<u32>> = None;
    let mut last_line = 0;

    for (line, content) in data_lines(text) {
        last_line = line;
        let (key, rest) = match content.split_once(char::is_whitespace) {
            Some(kv) => kv,
            None => return Err(err(line, ParseErrorKind::UnknownField)),
        };
        let rest = rest.trim();
        match key {
            "n" => {
                if n.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateField { field: "n" }));
                }
                n = Some(
                    rest.parse()
                        .map_err(|_| err(line, ParseErrorKind::BadNumber))?,
                );
            }
            "r" => {
                if r.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateField { field: "r" }));
                }
                r = Some(
                    rest.parse()
                        .map_err(|_| err(line, ParseErrorKind::BadNumber))?,
                );
            }
            "bound" => {
                if bound.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateField { field: "bound" }));
                }
                bound = Some(
                    rest.parse()
                        .map_err(|_| err(line, ParseErrorKind::BadNumber))?,
                );
            }
            "achieved" => {
                if achieved.is_some() {
                    return Err(err(
                        line,
                        ParseErrorKind::DuplicateField { field: "achieved" },
                    ));
                }
                achieved = Some(
                    rest.parse()
                        .map_err(|_| err(line, ParseErrorKind::BadNumber))?,
                );
            }
            "valid" => {
                if valid.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateField { field: "valid" }));
                }
                valid = Some(match rest {
                    "true" => true,
                    "false" => false,
                    _ => return Err(err(line, ParseErrorKind::BadNumber)),
                });
            }
            "cycle" => {
                if cycle.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateField { field: "cycle" }));
                }
                let seq: Result<Vec<u32>, _> =
                    rest.split_whitespace().map(|t| t.parse::<u32>()).collect();
                let seq = seq.map_err(|_| err(line, ParseErrorKind::BadNumber))?;
                if seq.len() < 2 {
                    return Err(err(line, ParseErrorKind::BadCycleLine));
                }
                cycle = Some(seq);
            }
            _ => return Err(err(line, ParseErrorKind::UnknownField)),
        }
    }

    let need = |field| err(last_line, ParseErrorKind::MissingField { field });
    Ok(RawCertificate {
        n: n.ok_or_else(|| need("n"))?,
        r: r.ok_or_else(|| need("r"))?,
        bound: bound.ok_or_else(|| need("bound"))?,
        achieved: achieved.ok_or_else(|| need("achieved"))?,
        valid: valid.ok_or_else(|| need("valid"))?,
        vertex_sequence: cycle.ok_or_else(|| need("cycle"))?,
    })
}
