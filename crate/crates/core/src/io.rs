//! Text formats: graph6 (header-less) and a plain edge list.
//!
//! The edge-list format is the vertex count on the first line followed by one
//! `u v` pair per line, 0-based. Blank lines and lines starting with `#` are
//! ignored.

use crate::error::{Error, Result};
use crate::graph::Graph;

const OFFSET: u8 = 63;

fn g6_err(msg: impl Into<String>) -> Error {
    Error::Graph6(msg.into())
}

fn encode_n(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + OFFSET);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + OFFSET);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + OFFSET);
        }
    }
}

fn decode_n(bytes: &[u8]) -> Result<(usize, usize)> {
    let six = |b: u8| -> Result<usize> {
        if (OFFSET..=126).contains(&b) {
            Ok(usize::from(b - OFFSET))
        } else {
            Err(g6_err(format!("byte {b:#04x} outside the printable range")))
        }
    };
    let take = |from: usize, count: usize| -> Result<usize> {
        if bytes.len() < from + count {
            return Err(g6_err("truncated vertex count"));
        }
        bytes[from..from + count]
            .iter()
            .try_fold(0usize, |acc, &b| Ok((acc << 6) | six(b)?))
    };
    match bytes {
        [] => Err(g6_err("empty input")),
        [126, 126, ..] => Ok((take(2, 6)?, 8)),
        [126, ..] => Ok((take(1, 3)?, 4)),
        [b, ..] => Ok((six(*b)?, 1)),
    }
}

/// Packs the upper triangle of the adjacency matrix column by column,
/// six bits per byte, most significant bit first.
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    encode_n(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + OFFSET);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + OFFSET);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let text = text.trim_end_matches(['\n', '\r']);
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let bytes = text.as_bytes();
    let (n, used) = decode_n(bytes)?;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = used + bits.div_ceil(6);
    if bytes.len() < expected {
        return Err(g6_err(format!(
            "length mismatch: {} vertices need {} bytes, got {}",
            n,
            expected,
            bytes.len()
        )));
    }
    if bytes.len() > expected {
        return Err(g6_err(format!(
            "trailing data after byte {expected}"
        )));
    }
    let body = &bytes[used..];
    for &b in body {
        if !(OFFSET..=126).contains(&b) {
            return Err(g6_err(format!("byte {b:#04x} outside the printable range")));
        }
    }
    let bit = |k: usize| (body[k / 6] - OFFSET) >> (5 - k % 6) & 1 == 1;
    let pad = body.len() * 6 - bits;
    if (bits..bits + pad).any(bit) {
        return Err(g6_err("nonzero padding bits"));
    }
    let mut g = Graph::new(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.set_edge_unchecked(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut s = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::EdgeList("missing vertex count".into()))?;
    let n: usize = first
        .parse()
        .map_err(|_| Error::EdgeList(format!("bad vertex count {first:?}")))?;
    let mut g = Graph::new(n);
    for (lineno, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = parts[..] else {
            return Err(Error::EdgeList(format!(
                "line {}: expected two vertices",
                lineno + 1
            )));
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::EdgeList(format!("line {}: bad vertex {s:?}", lineno + 1)))
        };
        g.add_edge(parse(u)?, parse(v)?)?;
    }
    Ok(g)
}

/// Accepts either format. Digits are not graph6 characters, so an input whose
/// first non-blank line is an integer is read as an edge list.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.parse::<usize>().is_ok() {
        parse_edge_list(text)
    } else {
        parse_graph6(text.trim())
    }
}
