//! External merge sort for edge records, used by the streaming converters.
//!
//! Records are buffered up to a fixed count, sorted, and spilled to anonymous
//! temporary files; [`EdgeSorter::finish`] merges the runs back into one
//! sorted stream. Resident memory is bounded by the buffer size plus one
//! record per run.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Seek, SeekFrom, Write};

use crate::graph::VertexId;

/// `(u, v, source line)`.
type SortKey = (VertexId, VertexId, u64);

pub(crate) const DEFAULT_BUFFER_RECORDS: usize = 1 << 20;

/// `(u, v, weight, source line)`. Sorted by `(u, v, line)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct EdgeRecord {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: f64,
    pub line: u64,
}

impl EdgeRecord {
    fn key(&self) -> (VertexId, VertexId, u64) {
        (self.u, self.v, self.line)
    }

    fn write_to(&self, w: &mut impl Write) -> io::Result<()> {
        w.write_all(&self.u.to_le_bytes())?;
        w.write_all(&self.v.to_le_bytes())?;
        w.write_all(&self.weight.to_bits().to_le_bytes())?;
        w.write_all(&self.line.to_le_bytes())
    }

    fn read_from(r: &mut impl Read) -> io::Result<Option<EdgeRecord>> {
        let mut buf = [0u8; 32];
        match r.read_exact(&mut buf) {
            Ok(()) => {}
            Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => return Ok(None),
            Err(e) => return Err(e),
        }
        let word = |i: usize| u64::from_le_bytes(buf[i * 8..i * 8 + 8].try_into().unwrap());
        Ok(Some(EdgeRecord {
            u: word(0),
            v: word(1),
            weight: f64::from_bits(word(2)),
            line: word(3),
        }))
    }
}

pub(crate) struct EdgeSorter {
    buffer: Vec<EdgeRecord>,
    capacity: usize,
    runs: Vec<File>,
}

impl EdgeSorter {
    pub fn new(capacity: usize) -> Self {
        let capacity = capacity.max(1);
        Self {
            buffer: Vec::with_capacity(capacity.min(DEFAULT_BUFFER_RECORDS)),
            capacity,
            runs: Vec::new(),
        }
    }

    pub fn push(&mut self, record: EdgeRecord) -> io::Result<()> {
        self.buffer.push(record);
        if self.buffer.len() >= self.capacity {
            self.spill()?;
        }
        Ok(())
    }

    fn spill(&mut self) -> io::Result<()> {
        self.buffer.sort_unstable_by_key(EdgeRecord::key);
        let mut file = tempfile::tempfile()?;
        {
            let mut w = BufWriter::new(&mut file);
            for r in &self.buffer {
                r.write_to(&mut w)?;
            }
            w.flush()?;
        }
        file.seek(SeekFrom::Start(0))?;
        self.runs.push(file);
        self.buffer.clear();
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<SortedEdges> {
        if self.runs.is_empty() {
            self.buffer.sort_unstable_by_key(EdgeRecord::key);
            return Ok(SortedEdges::InMemory(self.buffer.into_iter()));
        }
        if !self.buffer.is_empty() {
            self.spill()?;
        }
        let mut readers: Vec<BufReader<File>> = self.runs.into_iter().map(BufReader::new).collect();
        let mut heads = Vec::with_capacity(readers.len());
        let mut heap = BinaryHeap::new();
        for (i, r) in readers.iter_mut().enumerate() {
            let head = EdgeRecord::read_from(r)?;
            if let Some(rec) = head {
                heap.push(Reverse((rec.key(), i)));
            }
            heads.push(head);
        }
        Ok(SortedEdges::Merged {
            readers,
            heads,
            heap,
        })
    }
}

pub(crate) enum SortedEdges {
    InMemory(std::vec::IntoIter<EdgeRecord>),
    Merged {
        readers: Vec<BufReader<File>>,
        heads: Vec<Option<EdgeRecord>>,
        heap: BinaryHeap<Reverse<(SortKey, usize)>>,
    },
}

impl Iterator for SortedEdges {
    type Item = io::Result<EdgeRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            SortedEdges::InMemory(it) => it.next().map(Ok),
            SortedEdges::Merged {
                readers,
                heads,
                heap,
            } => {
                let Reverse((_, run)) = heap.pop()?;
                let record = heads[run].take().expect("heap entry has a head record");
                match EdgeRecord::read_from(&mut readers[run]) {
                    Ok(Some(next)) => {
                        heap.push(Reverse((next.key(), run)));
                        heads[run] = Some(next);
                    }
                    Ok(None) => {}
                    Err(e) => return Some(Err(e)),
                }
                Some(Ok(record))
            }
        }
    }
}
