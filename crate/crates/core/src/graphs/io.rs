//! Plain-text edge lists: a header line `n d`, then one `u v` pair per line,
//! 1-indexed. Blank lines and `#` comments are ignored.

use std::io::{BufRead, BufReader, Read, Write};

use super::RegularGraph;
use crate::error::{Error, Result};

pub fn read_edge_list<R: Read>(reader: R) -> Result<RegularGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<usize> = content
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(lineno, format!("expected integer, got '{t}'"))))
            .collect::<Result<_>>()?;
        let &[a, b] = fields.as_slice() else {
            return Err(Error::parse(lineno, "expected exactly two integers"));
        };
        match header {
            None => header = Some((a, b)),
            Some(_) => edges.push((a, b)),
        }
    }
    let (n, d) = header.ok_or_else(|| Error::parse(0, "missing 'n d' header"))?;
    if edges.len() * 2 != n * d {
        return Err(Error::graph(format!("header says n={n}, d={d} but found {} edges", edges.len())));
    }
    let g = RegularGraph::from_edges(n, &edges)?;
    if g.degree() != d {
        return Err(Error::graph(format!("header degree {d} but graph has degree {}", g.degree())));
    }
    Ok(g)
}

pub fn write_edge_list<W: Write>(g: &RegularGraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.num_vertices(), g.degree())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}
