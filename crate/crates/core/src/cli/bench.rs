//! Memory-versus-disk timing of local clustering on benchmark SBM graphs.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cluster::{local_cluster, metrics::precision};
use crate::disk::DiskGraph;
use crate::error::{Error, Result};
use crate::io::{load_adjacencylist, save_adjacencylist};
use crate::random::{planted_label, sbm, SbmSpec};

pub const CSV_HEADER: &str =
    "k,n,mode,load_seconds,cluster_seconds,total_seconds,returned_size,precision";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Load the whole file into a [`Graph`](crate::Graph) first.
    Memory,
    /// Query the file through a [`DiskGraph`].
    Disk,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "memory" => Ok(Mode::Memory),
            "disk" => Ok(Mode::Disk),
            other => Err(Error::InvalidParameter(format!(
                "unknown mode '{other}', expected memory or disk"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Memory => "memory",
            Mode::Disk => "disk",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub k: usize,
    pub n: usize,
    pub mode: Mode,
    pub load_seconds: f64,
    pub cluster_seconds: f64,
    pub total_seconds: f64,
    pub returned_size: usize,
    /// Fraction of the returned vertices in the seed's planted cluster.
    pub precision: f64,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6},{:.6},{:.6},{},{:.6}",
            self.k,
            self.n,
            self.mode,
            self.load_seconds,
            self.cluster_seconds,
            self.total_seconds,
            self.returned_size,
            self.precision
        )
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub ks: Vec<usize>,
    pub target_volume: f64,
    pub modes: Vec<Mode>,
    pub rng_seed: u64,
    pub repeats: usize,
    /// Where generated graphs are written; a temporary directory if `None`.
    pub workdir: Option<PathBuf>,
}

/// Seed for everything generated for one value of `k`.
fn derived_seed(rng_seed: u64, k: usize) -> u64 {
    rng_seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Run every configuration once per repeat, in the order given.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if config.ks.is_empty() || config.modes.is_empty() {
        return Err(Error::InvalidParameter("need at least one k and one mode".into()));
    }
    let tmp;
    let dir: &Path = match &config.workdir {
        Some(d) => d,
        None => {
            tmp = tempfile::tempdir()?;
            tmp.path()
        }
    };

    let mut records = Vec::new();
    for &k in &config.ks {
        let seed = derived_seed(config.rng_seed, k);
        let spec = SbmSpec::benchmark(k, seed);
        let (graph, _) = sbm(&spec)?;
        let path = dir.join(format!("sbm_k{k}.al"));
        save_adjacencylist(&graph, &path)?;
        let n = graph.num_vertices();
        drop(graph);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..config.repeats.max(1) {
            let start_vertex = rng.random_range(0..n as u64);
            for &mode in &config.modes {
                let mut record =
                    time_one(&path, mode, start_vertex, config.target_volume, &spec)?;
                record.k = k;
                record.n = n;
                records.push(record);
            }
        }
    }
    Ok(records)
}

fn time_one(
    path: &Path,
    mode: Mode,
    seed: u64,
    target_volume: f64,
    spec: &SbmSpec,
) -> Result<BenchRecord> {
    let start = Instant::now();
    let (cluster, loaded) = match mode {
        Mode::Memory => {
            let g = load_adjacencylist(path)?;
            let loaded = start.elapsed();
            (local_cluster(&g, seed, target_volume)?, loaded)
        }
        Mode::Disk => {
            let g = DiskGraph::open(path)?;
            let loaded = start.elapsed();
            (local_cluster(&g, seed, target_volume)?, loaded)
        }
    };
    let total = start.elapsed();
    let load_seconds = loaded.as_secs_f64();
    let cluster_seconds = (total - loaded).as_secs_f64();

    let labels: Vec<usize> = (0..spec.num_vertices() as u64)
        .map(|v| planted_label(spec, v))
        .collect();
    Ok(BenchRecord {
        k: 0,
        n: 0,
        mode,
        load_seconds,
        cluster_seconds,
        total_seconds: load_seconds + cluster_seconds,
        returned_size: cluster.len(),
        precision: precision(cluster.as_slice(), &labels, planted_label(spec, seed)),
    })
}

pub fn write_csv(records: &[BenchRecord], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_memory_row() {
        let config = BenchConfig {
            ks: vec![1],
            target_volume: 20_000.0,
            modes: vec![Mode::Memory],
            rng_seed: 3,
            repeats: 1,
            workdir: None,
        };
        let records = run_bench(&config).unwrap();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert_eq!((r.k, r.n, r.mode), (1, 1000, Mode::Memory));
        assert!((0.0..=1.0).contains(&r.precision));
        assert!((r.total_seconds - r.load_seconds - r.cluster_seconds).abs() <= 1e-6);

        let mut csv = Vec::new();
        write_csv(&records, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), 8);
    }

    #[test]
    fn modes_parse() {
        assert_eq!("disk".parse::<Mode>().unwrap(), Mode::Disk);
        assert!("tape".parse::<Mode>().is_err());
    }
}
