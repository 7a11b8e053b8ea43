//! Plain-text formats.
//!
//! Graph: a header `<n_left> <n_right> <m>` followed by `m` lines
//! `<client> <server>`. Contractor witness: a header `mc <n_left> <n_right> <k>`,
//! then per matching a line `m <size>` followed by `size` edge lines. In both,
//! `#` starts a comment and blank lines are ignored.

use std::fmt::Write;

use crate::contractor::MatchingDecomposition;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};

type Pairs = Vec<(usize, usize)>;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, tagged with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn numbers<const N: usize>(line: usize, fields: &[&str]) -> Result<[usize; N]> {
    if fields.len() != N {
        return Err(parse_err(
            line,
            format!("expected {N} fields, found {}", fields.len()),
        ));
    }
    let mut out = [0; N];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f
            .parse()
            .map_err(|_| parse_err(line, format!("`{f}` is not a nonnegative integer")))?;
    }
    Ok(out)
}

fn edge_line(
    line: usize,
    fields: &[&str],
    n_left: usize,
    n_right: usize,
) -> Result<(usize, usize)> {
    let [c, s] = numbers::<2>(line, fields)?;
    if c >= n_left || s >= n_right {
        return Err(parse_err(
            line,
            format!("edge ({c}, {s}) is outside a {n_left}x{n_right} graph"),
        ));
    }
    Ok((c, s))
}

pub fn parse_graph(text: &str) -> Result<BipartiteGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let [n_left, n_right, m] = numbers::<3>(hl, &header)?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut last_line = hl;
    for (line, fields) in lines {
        if edges.len() == m {
            return Err(parse_err(line, format!("more than the declared {m} edges")));
        }
        let e = edge_line(line, &fields, n_left, n_right)?;
        if !seen.insert(e) {
            return Err(parse_err(
                line,
                format!("duplicate edge ({}, {})", e.0, e.1),
            ));
        }
        edges.push(e);
        last_line = line;
    }
    if edges.len() != m {
        return Err(parse_err(
            last_line,
            format!("declared {m} edges but found {}", edges.len()),
        ));
    }
    BipartiteGraph::new(n_left, n_right, edges)
}

pub fn serialize_graph(g: &BipartiteGraph) -> String {
    let mut out = format!("{} {} {}\n", g.n_left(), g.n_right(), g.num_edges());
    for &(c, s) in g.edges() {
        writeln!(out, "{c} {s}").unwrap();
    }
    out
}

pub fn parse_witness(text: &str) -> Result<MatchingDecomposition> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    if header.first() != Some(&"mc") {
        return Err(parse_err(hl, "witness header must start with `mc`"));
    }
    let [n_left, n_right, k] = numbers::<3>(hl, &header[1..])?;
    let mut matchings = Vec::with_capacity(k);
    // (line of the `m` header, declared size, pairs read so far)
    let mut current: Option<(usize, usize, Pairs)> = None;
    let mut last_line = hl;
    let close = |start: usize, pairs: Vec<(usize, usize)>| {
        Matching::new(pairs).map_err(|e| parse_err(start, e.to_string()))
    };
    for (line, fields) in lines {
        last_line = line;
        match &mut current {
            Some((_, size, pairs)) if pairs.len() < *size => {
                pairs.push(edge_line(line, &fields, n_left, n_right)?);
            }
            _ => {
                if let Some((start, _, pairs)) = current.take() {
                    matchings.push(close(start, pairs)?);
                }
                if fields.first() != Some(&"m") {
                    return Err(parse_err(line, "expected `m <size>`"));
                }
                if matchings.len() == k {
                    return Err(parse_err(
                        line,
                        format!("more than the declared {k} matchings"),
                    ));
                }
                let [size] = numbers::<1>(line, &fields[1..])?;
                current = Some((line, size, Vec::with_capacity(size)));
            }
        }
    }
    if let Some((start, size, pairs)) = current.take() {
        if pairs.len() < size {
            return Err(parse_err(
                last_line,
                format!("matching declared {size} edges but has {}", pairs.len()),
            ));
        }
        matchings.push(close(start, pairs)?);
    }
    if matchings.len() != k {
        return Err(parse_err(
            last_line,
            format!("declared {k} matchings but found {}", matchings.len()),
        ));
    }
    MatchingDecomposition::new(n_left, n_right, matchings)
}

pub fn serialize_witness(d: &MatchingDecomposition) -> String {
    let mut out = format!("mc {} {} {}\n", d.n_left(), d.n_right(), d.len());
    for m in d.matchings() {
        writeln!(out, "m {}", m.len()).unwrap();
        for &(c, s) in m.pairs() {
            writeln!(out, "{c} {s}").unwrap();
        }
    }
    out
}

/// Parses a set family written as `1,2;3,4`.
pub fn parse_family_sets(text: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|set| {
            set.split(',')
                .map(|e| {
                    e.trim()
                        .parse()
                        .map_err(|_| Error::input(format!("`{}` is not a set element", e.trim())))
                })
                .collect()
        })
        .collect()
}
