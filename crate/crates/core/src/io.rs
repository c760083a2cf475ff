//! EdgeList and AdjacencyList readers, writers and converters.
//!
//! EdgeList: one edge per line, `u v` or `u v w`.
//!
//! AdjacencyList: one vertex per line, `u: v1 v2 ...` or, with weights,
//! `u: v1:w1 v2:w2 ...`. Line-leading ids must be strictly increasing.
//!
//! In both formats lines starting with `#` and blank lines are ignored, tokens
//! may be separated by any run of spaces or tabs, and `\r\n` line endings are
//! accepted. Writers always emit `\n`.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::extsort::{EdgeRecord, EdgeSorter, DEFAULT_BUFFER_RECORDS};
use crate::graph::{Graph, GraphBuilder, Neighbor, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    AdjacencyList,
}

impl Format {
    /// Guess the format from a file extension: `.el`/`.edgelist` or `.al`/`.adjacencylist`.
    pub fn from_extension(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "el" | "edgelist" | "txt" => Some(Format::EdgeList),
            "al" | "adjacencylist" => Some(Format::AdjacencyList),
            _ => None,
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s.to_ascii_lowercase().as_str() {
            "edgelist" | "el" => Ok(Format::EdgeList),
            "adjacencylist" | "al" => Ok(Format::AdjacencyList),
            other => Err(Error::InvalidParameter(format!("unknown graph format '{other}'"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::EdgeList => "edgelist",
            Format::AdjacencyList => "adjacencylist",
        })
    }
}

pub fn load_graph(path: impl AsRef<Path>, format: Format) -> Result<Graph> {
    match format {
        Format::EdgeList => load_edgelist(path),
        Format::AdjacencyList => load_adjacencylist(path),
    }
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>, format: Format) -> Result<()> {
    match format {
        Format::EdgeList => save_edgelist(g, path),
        Format::AdjacencyList => save_adjacencylist(g, path),
    }
}

pub(crate) fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => Error::FileNotFound {
            path: path.display().to_string(),
        },
        _ => Error::Io(e),
    })
}

fn is_skipped(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#')
}

fn parse_id(token: &str, line: u64) -> Result<VertexId> {
    token.parse::<VertexId>().map_err(|_| {
        if token.starts_with('-') {
            Error::parse(line, format!("negative node id '{token}'"))
        } else {
            Error::parse(line, format!("invalid node id '{token}'"))
        }
    })
}

fn parse_weight(token: &str, line: u64) -> Result<f64> {
    let w: f64 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid edge weight '{token}'")))?;
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::parse(
            line,
            format!("edge weight {token} must be finite and positive"),
        ));
    }
    Ok(w)
}

/// Parse one EdgeList line. `None` for comments and blank lines.
pub(crate) fn parse_edgelist_line(
    text: &str,
    line: u64,
) -> Result<Option<(VertexId, VertexId, f64)>> {
    if is_skipped(text) {
        return Ok(None);
    }
    let mut tokens = text.split_ascii_whitespace();
    let u = parse_id(tokens.next().unwrap(), line)?;
    let v = match tokens.next() {
        Some(t) => parse_id(t, line)?,
        None => return Err(Error::parse(line, "expected two node ids")),
    };
    let w = match tokens.next() {
        Some(t) => parse_weight(t, line)?,
        None => 1.0,
    };
    if tokens.next().is_some() {
        return Err(Error::parse(line, "too many fields; expected 'u v' or 'u v w'"));
    }
    Ok(Some((u, v, w)))
}

/// Parse one AdjacencyList line. `None` for comments and blank lines.
pub(crate) fn parse_adjacency_line(
    text: &str,
    line: u64,
) -> Result<Option<(VertexId, Vec<Neighbor>)>> {
    if is_skipped(text) {
        return Ok(None);
    }
    let (head, rest) = text
        .split_once(':')
        .ok_or_else(|| Error::parse(line, "missing ':' after node id"))?;
    let head = head.trim();
    if head.is_empty() || head.contains(char::is_whitespace) {
        return Err(Error::parse(line, format!("invalid node id '{head}'")));
    }
    let u = parse_id(head, line)?;
    let mut neighbors = Vec::new();
    for token in rest.split_ascii_whitespace() {
        let n = match token.split_once(':') {
            Some((id, w)) => Neighbor::new(parse_id(id, line)?, parse_weight(w, line)?),
            None => Neighbor::new(parse_id(token, line)?, 1.0),
        };
        neighbors.push(n);
    }
    Ok(Some((u, neighbors)))
}

/// Iterate `(line number, text)` over a reader, line numbers starting at 1.
fn numbered_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(u64, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|text| (i as u64 + 1, text)).map_err(Error::from))
}

fn format_weight(w: f64) -> String {
    // shortest representation that parses back to the same f64
    format!("{w}")
}

pub fn load_edgelist(path: impl AsRef<Path>) -> Result<Graph> {
    let reader = BufReader::new(open(path.as_ref())?);
    let mut builder = GraphBuilder::new();
    for item in numbered_lines(reader) {
        let (line, text) = item?;
        if let Some((u, v, w)) = parse_edgelist_line(&text, line)? {
            builder.add_edge(u, v, w)?;
        }
    }
    builder.build()
}

/// Each undirected edge once, smaller endpoint first, sorted; a weight of
/// exactly 1 is omitted. Isolated vertices are not representable.
pub fn save_edgelist(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for (u, v, w) in g.edges() {
        write_edge(&mut out, u, v, w)?;
    }
    out.flush()?;
    Ok(())
}

fn write_edge(out: &mut impl Write, u: VertexId, v: VertexId, w: f64) -> io::Result<()> {
    if w == 1.0 {
        writeln!(out, "{u} {v}")
    } else {
        writeln!(out, "{u} {v} {}", format_weight(w))
    }
}

/// Load an AdjacencyList. An edge listed on only one endpoint's line is still
/// added in both directions.
pub fn load_adjacencylist(path: impl AsRef<Path>) -> Result<Graph> {
    let reader = BufReader::new(open(path.as_ref())?);
    let mut builder = GraphBuilder::new();
    let mut previous: Option<VertexId> = None;
    for item in numbered_lines(reader) {
        let (line, text) = item?;
        let Some((u, neighbors)) = parse_adjacency_line(&text, line)? else {
            continue;
        };
        check_sorted(previous, u, line)?;
        previous = Some(u);
        builder.ensure_vertices(u + 1);
        for n in neighbors {
            builder.add_edge_at_line(u, n.id, n.weight, line)?;
        }
    }
    builder.build()
}

fn check_sorted(previous: Option<VertexId>, id: VertexId, line: u64) -> Result<()> {
    match previous {
        Some(p) if id <= p => Err(Error::UnsortedNodeIds {
            line,
            id,
            previous: p,
        }),
        _ => Ok(()),
    }
}

/// One line per vertex, neighbors in increasing id order. Weights are written
/// as `v:w` for every neighbor if any edge weight differs from 1, and not at
/// all otherwise.
pub fn save_adjacencylist(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let weighted = g.has_non_unit_weights();
    for u in 0..g.num_vertices() as VertexId {
        write_adjacency_line(&mut out, u, g.row(u).iter().copied(), weighted)?;
    }
    out.flush()?;
    Ok(())
}

fn write_adjacency_line(
    out: &mut impl Write,
    u: VertexId,
    neighbors: impl Iterator<Item = Neighbor>,
    weighted: bool,
) -> io::Result<()> {
    write!(out, "{u}:")?;
    for n in neighbors {
        if weighted {
            write!(out, " {}:{}", n.id, format_weight(n.weight))?;
        } else {
            write!(out, " {}", n.id)?;
        }
    }
    out.write_all(b"\n")
}

/// Convert an EdgeList file to an AdjacencyList file without building the
/// graph in memory. The output is byte-identical to
/// `save_adjacencylist(load_edgelist(input))`.
pub fn edgelist_to_adjacencylist(
    input: impl AsRef<Path>,
    output: impl AsRef<Path>,
) -> Result<()> {
    edgelist_to_adjacencylist_buffered(input.as_ref(), output.as_ref(), DEFAULT_BUFFER_RECORDS)
}

pub(crate) fn edgelist_to_adjacencylist_buffered(
    input: &Path,
    output: &Path,
    buffer_records: usize,
) -> Result<()> {
    let reader = BufReader::new(open(input)?);
    let mut sorter = EdgeSorter::new(buffer_records);
    let mut max_id: Option<VertexId> = None;
    let mut weighted = false;
    for item in numbered_lines(reader) {
        let (line, text) = item?;
        let Some((u, v, w)) = parse_edgelist_line(&text, line)? else {
            continue;
        };
        max_id = Some(max_id.unwrap_or(0).max(u).max(v));
        weighted |= w != 1.0;
        sorter.push(EdgeRecord { u, v, weight: w, line })?;
        if u != v {
            sorter.push(EdgeRecord {
                u: v,
                v: u,
                weight: w,
                line,
            })?;
        }
    }

    let mut out = BufWriter::new(File::create(output)?);
    let mut next_vertex: VertexId = 0;
    let mut current: Option<VertexId> = None;
    let mut row: Vec<Neighbor> = Vec::new();
    for rec in sorter.finish()? {
        let rec = rec?;
        if current != Some(rec.u) {
            if let Some(u) = current {
                write_adjacency_line(&mut out, u, row.drain(..), weighted)?;
                next_vertex = u + 1;
            }
            for isolated in next_vertex..rec.u {
                writeln!(out, "{isolated}:")?;
            }
            current = Some(rec.u);
        }
        match row.last() {
            Some(last) if last.id == rec.v => {
                if last.weight != rec.weight {
                    let (u, v) = (rec.u.min(rec.v), rec.u.max(rec.v));
                    return Err(Error::DuplicateEdge {
                        u,
                        v,
                        first: last.weight,
                        second: rec.weight,
                    });
                }
            }
            _ => row.push(Neighbor::new(rec.v, rec.weight)),
        }
    }
    if let Some(u) = current {
        write_adjacency_line(&mut out, u, row.drain(..), weighted)?;
        next_vertex = u + 1;
    }
    if let Some(max_id) = max_id {
        for isolated in next_vertex..=max_id {
            writeln!(out, "{isolated}:")?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Convert an AdjacencyList file to an EdgeList file without building the
/// graph in memory. Isolated vertices are dropped, since EdgeList cannot
/// represent them.
pub fn adjacencylist_to_edgelist(
    input: impl AsRef<Path>,
    output: impl AsRef<Path>,
) -> Result<()> {
    adjacencylist_to_edgelist_buffered(input.as_ref(), output.as_ref(), DEFAULT_BUFFER_RECORDS)
}

pub(crate) fn adjacencylist_to_edgelist_buffered(
    input: &Path,
    output: &Path,
    buffer_records: usize,
) -> Result<()> {
    let reader = BufReader::new(open(input)?);
    let mut sorter = EdgeSorter::new(buffer_records);
    let mut previous: Option<VertexId> = None;
    for item in numbered_lines(reader) {
        let (line, text) = item?;
        let Some((u, neighbors)) = parse_adjacency_line(&text, line)? else {
            continue;
        };
        check_sorted(previous, u, line)?;
        previous = Some(u);
        for n in neighbors {
            sorter.push(EdgeRecord {
                u: u.min(n.id),
                v: u.max(n.id),
                weight: n.weight,
                line,
            })?;
        }
    }

    let mut out = BufWriter::new(File::create(output)?);
    let mut last: Option<EdgeRecord> = None;
    for rec in sorter.finish()? {
        let rec = rec?;
        if let Some(prev) = last {
            if prev.u == rec.u && prev.v == rec.v {
                if prev.weight != rec.weight {
                    return Err(Error::ConflictingWeight {
                        line: rec.line,
                        u: rec.u,
                        v: rec.v,
                        first: prev.weight,
                        second: rec.weight,
                    });
                }
                continue;
            }
            write_edge(&mut out, prev.u, prev.v, prev.weight)?;
        }
        last = Some(rec);
    }
    if let Some(prev) = last {
        write_edge(&mut out, prev.u, prev.v, prev.weight)?;
    }
    out.flush()?;
    Ok(())
}
