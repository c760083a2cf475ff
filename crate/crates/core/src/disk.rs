//! A [`LocalGraph`] served straight from an AdjacencyList file.
//!
//! Nothing is loaded or indexed up front. Each query binary-searches the file
//! by byte offset: probe a midpoint, skip to the start of the next line that
//! carries a node id, compare that id with the target, and halve the range.
//! Because the line-leading ids are sorted, a query costs O(log(file size))
//! probes, each reading roughly one line.

use std::borrow::Cow;
use std::fs::File;
use std::io;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use lru::LruCache;

use crate::error::{Error, Result};
use crate::graph::{degree_of_row, LocalGraph, Neighbor, VertexId};
use crate::io::{open, parse_adjacency_line};

pub const DEFAULT_CACHE_LINES: usize = 1024;

const CHUNK_BYTES: usize = 256;

pub struct DiskGraph {
    file: File,
    path: PathBuf,
    file_size: u64,
    cache: Option<Mutex<LruCache<VertexId, Arc<[Neighbor]>>>>,
    bytes_read: AtomicU64,
    probes: AtomicU64,
}

impl std::fmt::Debug for DiskGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiskGraph")
            .field("path", &self.path)
            .field("file_size", &self.file_size)
            .finish_non_exhaustive()
    }
}

/// A header-bearing line found during the search.
struct Located {
    start: u64,
    end: u64,
    id: VertexId,
    text: String,
}

impl DiskGraph {
    /// Open with the default line cache.
    pub fn open(path: impl AsRef<Path>) -> Result<DiskGraph> {
        Self::with_cache(path, DEFAULT_CACHE_LINES)
    }

    /// Open with an LRU cache of `cache_lines` parsed lines; 0 disables it.
    pub fn with_cache(path: impl AsRef<Path>, cache_lines: usize) -> Result<DiskGraph> {
        let path = path.as_ref();
        let file = open(path)?;
        let file_size = file.metadata()?.len();
        Ok(DiskGraph {
            file,
            path: path.to_path_buf(),
            file_size,
            cache: NonZeroUsize::new(cache_lines).map(|n| Mutex::new(LruCache::new(n))),
            bytes_read: AtomicU64::new(0),
            probes: AtomicU64::new(0),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn file_size(&self) -> u64 {
        self.file_size
    }

    /// Total bytes read from the file since open or the last reset.
    pub fn bytes_read(&self) -> u64 {
        self.bytes_read.load(Ordering::Relaxed)
    }

    /// Total binary-search probes since open or the last reset.
    pub fn probes(&self) -> u64 {
        self.probes.load(Ordering::Relaxed)
    }

    pub fn reset_counters(&self) {
        self.bytes_read.store(0, Ordering::Relaxed);
        self.probes.store(0, Ordering::Relaxed);
    }

    /// Neighbors of `v` in file order.
    pub fn lookup(&self, v: VertexId) -> Result<Arc<[Neighbor]>> {
        if let Some(cache) = &self.cache {
            if let Some(row) = cache.lock().unwrap().get(&v) {
                return Ok(Arc::clone(row));
            }
        }
        let row: Arc<[Neighbor]> = self.search(v)?.into();
        if let Some(cache) = &self.cache {
            cache.lock().unwrap().put(v, Arc::clone(&row));
        }
        Ok(row)
    }

    /// Scan the whole file and check that every line parses and the node ids
    /// are strictly increasing. Opening never does this.
    pub fn validate(&self) -> Result<()> {
        crate::io::load_adjacencylist(&self.path).map(|_| ())
    }

    fn search(&self, v: VertexId) -> Result<Vec<Neighbor>> {
        let mut reader = ChunkReader::new(self);
        let (mut lo, mut hi) = (0u64, self.file_size);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            self.probes.fetch_add(1, Ordering::Relaxed);
            match self.header_line_from(&mut reader, mid, hi)? {
                Some(found) if found.id == v => {
                    return match parse_adjacency_line(&found.text, 0) {
                        Ok(Some((_, neighbors))) => Ok(neighbors),
                        Ok(None) => unreachable!("located lines carry a header"),
                        Err(e) => Err(malformed(found.start, e)),
                    };
                }
                Some(found) if found.id < v => lo = found.end,
                _ => hi = mid,
            }
        }
        Err(Error::UnknownVertex(v))
    }

    /// First header-bearing line starting at or after `pos` and before `limit`.
    fn header_line_from(
        &self,
        reader: &mut ChunkReader<'_>,
        pos: u64,
        limit: u64,
    ) -> Result<Option<Located>> {
        let mut start = if pos == 0 {
            0
        } else {
            // the line containing byte pos-1 ends at the first newline from there
            match reader.find_newline(pos - 1)? {
                Some(nl) => nl + 1,
                None => return Ok(None),
            }
        };
        while start < limit {
            let (bytes, end) = reader.line(start)?;
            let text = String::from_utf8(bytes)
                .map_err(|_| malformed_msg(start, "line is not valid UTF-8"))?;
            let trimmed = text.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                start = end;
                continue;
            }
            let id = parse_header(&text).ok_or_else(|| {
                malformed_msg(start, "expected a node id followed by ':'")
            })?;
            return Ok(Some(Located {
                start,
                end,
                id,
                text,
            }));
        }
        Ok(None)
    }

    fn read_at(&self, buf: &mut [u8], offset: u64) -> io::Result<usize> {
        let mut filled = 0;
        while filled < buf.len() {
            let n = read_at(&self.file, &mut buf[filled..], offset + filled as u64)?;
            if n == 0 {
                break;
            }
            filled += n;
        }
        self.bytes_read.fetch_add(filled as u64, Ordering::Relaxed);
        Ok(filled)
    }
}

#[cfg(unix)]
fn read_at(file: &File, buf: &mut [u8], offset: u64) -> io::Result<usize> {
    std::os::unix::fs::FileExt::read_at(file, buf, offset)
}

#[cfg(windows)]
fn read_at(file: &File, buf: &mut [u8], offset: u64) -> io::Result<usize> {
    std::os::windows::fs::FileExt::seek_read(file, buf, offset)
}

fn parse_header(text: &str) -> Option<VertexId> {
    text.split_once(':')?.0.trim().parse().ok()
}

fn malformed(offset: u64, e: Error) -> Error {
    match e {
        Error::Parse { reason, .. } => Error::MalformedLine { offset, reason },
        other => other,
    }
}

fn malformed_msg(offset: u64, reason: &str) -> Error {
    Error::MalformedLine {
        offset,
        reason: reason.to_string(),
    }
}

/// Positioned reads in fixed-size chunks, remembering the last chunk.
struct ChunkReader<'a> {
    graph: &'a DiskGraph,
    chunk: Vec<u8>,
    chunk_start: u64,
}

impl<'a> ChunkReader<'a> {
    fn new(graph: &'a DiskGraph) -> Self {
        Self {
            graph,
            chunk: Vec::new(),
            chunk_start: 0,
        }
    }

    fn byte(&mut self, pos: u64) -> io::Result<Option<u8>> {
        if pos >= self.graph.file_size {
            return Ok(None);
        }
        let end = self.chunk_start + self.chunk.len() as u64;
        if pos < self.chunk_start || pos >= end {
            let len = CHUNK_BYTES.min((self.graph.file_size - pos) as usize);
            self.chunk.resize(len, 0);
            let n = self.graph.read_at(&mut self.chunk, pos)?;
            self.chunk.truncate(n);
            self.chunk_start = pos;
            if n == 0 {
                return Ok(None);
            }
        }
        Ok(Some(self.chunk[(pos - self.chunk_start) as usize]))
    }

    fn find_newline(&mut self, mut pos: u64) -> io::Result<Option<u64>> {
        while let Some(b) = self.byte(pos)? {
            if b == b'\n' {
                return Ok(Some(pos));
            }
            pos += 1;
        }
        Ok(None)
    }

    /// The line starting at `start` without its terminator, and the offset
    /// of the following line.
    fn line(&mut self, start: u64) -> io::Result<(Vec<u8>, u64)> {
        let mut bytes = Vec::new();
        let mut pos = start;
        while let Some(b) = self.byte(pos)? {
            pos += 1;
            if b == b'\n' {
                break;
            }
            bytes.push(b);
        }
        if bytes.last() == Some(&b'\r') {
            bytes.pop();
        }
        Ok((bytes, pos))
    }
}

impl LocalGraph for DiskGraph {
    fn neighbors(&self, v: VertexId) -> Result<Cow<'_, [Neighbor]>> {
        Ok(Cow::Owned(self.lookup(v)?.to_vec()))
    }

    fn degree(&self, v: VertexId) -> Result<f64> {
        Ok(degree_of_row(v, &self.lookup(v)?))
    }

    fn vertex_exists(&self, v: VertexId) -> Result<bool> {
        match self.lookup(v) {
            Ok(_) => Ok(true),
            Err(Error::UnknownVertex(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    fn degree_unweighted(&self, v: VertexId) -> Result<usize> {
        Ok(self.lookup(v)?.len())
    }

    fn neighborhood(&self, v: VertexId) -> Result<(Cow<'_, [Neighbor]>, f64)> {
        let row = self.lookup(v)?;
        let degree = degree_of_row(v, &row);
        Ok((Cow::Owned(row.to_vec()), degree))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;
    use tempfile::TempDir;

    const EXAMPLE: &str = "# This is a comment\n0: 1 2\n1: 0 3 2\n2: 0 1\n3: 1\n";

    fn file(dir: &TempDir, contents: &str) -> PathBuf {
        let p = dir.path().join("g.al");
        fs::write(&p, contents).unwrap();
        p
    }

    #[test]
    fn answers_queries_on_the_example() {
        let dir = TempDir::new().unwrap();
        let g = DiskGraph::open(file(&dir, EXAMPLE)).unwrap();
        assert_eq!(g.neighbors_unweighted(1).unwrap(), vec![0, 3, 2]);
        assert_eq!(g.neighbors(3).unwrap().as_ref(), &[Neighbor::new(1, 1.0)]);
        assert_eq!(g.degree(1).unwrap(), 3.0);
        assert!(matches!(g.neighbors(7), Err(Error::UnknownVertex(7))));
        assert!(!g.vertex_exists(7).unwrap());
        assert!(g.vertex_exists(0).unwrap());
    }

    #[test]
    fn weighted_and_isolated_lines() {
        let dir = TempDir::new().unwrap();
        let g = DiskGraph::open(file(&dir, "0: 1:0.5 2:3\n1: 0:0.5 2:1\n2: 0:3 1:1\n5:\n"))
            .unwrap();
        assert_eq!(g.degree(0).unwrap(), 3.5);
        assert_eq!(g.degree(5).unwrap(), 0.0);
        assert!(g.neighbors(5).unwrap().is_empty());
        assert!(!g.vertex_exists(4).unwrap());
    }

    #[test]
    fn empty_file_has_no_vertices() {
        let dir = TempDir::new().unwrap();
        let g = DiskGraph::open(file(&dir, "")).unwrap();
        assert!(matches!(g.neighbors(0), Err(Error::UnknownVertex(0))));
    }

    #[test]
    fn comments_blank_lines_and_crlf_are_skipped() {
        let dir = TempDir::new().unwrap();
        let text = "# head\r\n0: 1\r\n\r\n# mid\r\n# more\r\n1: 0 2\r\n   \r\n2: 1\r\n# tail\r\n";
        let g = DiskGraph::with_cache(file(&dir, text), 0).unwrap();
        assert_eq!(g.neighbors_unweighted(0).unwrap(), vec![1]);
        assert_eq!(g.neighbors_unweighted(1).unwrap(), vec![0, 2]);
        assert_eq!(g.neighbors_unweighted(2).unwrap(), vec![1]);
        assert!(g.neighbors(3).is_err());
    }

    #[test]
    fn self_loop_counts_twice() {
        let dir = TempDir::new().unwrap();
        let g = DiskGraph::open(file(&dir, "0: 0 1\n1: 0\n")).unwrap();
        assert_eq!(g.degree(0).unwrap(), 3.0);
    }

    #[test]
    fn malformed_line_is_reported() {
        let dir = TempDir::new().unwrap();
        let g = DiskGraph::open(file(&dir, "0: 1\n1: 0 x\n")).unwrap();
        let err = g.neighbors(1).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { offset: 5, .. }), "{err}");
        assert!(err.is_parse_error());
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            DiskGraph::open("/no/such/file.al"),
            Err(Error::FileNotFound { .. })
        ));
    }

    #[test]
    fn validate_catches_unsorted_headers() {
        let dir = TempDir::new().unwrap();
        let g = DiskGraph::open(file(&dir, "1: 0\n0: 1\n")).unwrap();
        assert!(matches!(g.validate(), Err(Error::UnsortedNodeIds { line: 2, .. })));
    }

    #[test]
    fn cache_is_transparent() {
        let dir = TempDir::new().unwrap();
        let g = DiskGraph::with_cache(file(&dir, EXAMPLE), 2).unwrap();
        let first = g.neighbors_unweighted(1).unwrap();
        let read = g.bytes_read();
        assert_eq!(g.neighbors_unweighted(1).unwrap(), first);
        assert_eq!(g.bytes_read(), read);
        for v in [0, 2, 3, 1] {
            g.neighbors(v).unwrap();
        }
        assert_eq!(g.neighbors_unweighted(1).unwrap(), first);
    }
}
