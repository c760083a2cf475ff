//! The `locus` command-line tool.
//!
//! Results go to stdout; every failure prints one `error: ...` line to stderr
//! and exits with a code from [`exit`].

pub mod bench;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cluster::{
    local_cluster_acl_sweep, spectral_cluster, AclParams, DEFAULT_ALPHA,
};
use crate::disk::DiskGraph;
use crate::error::Error;
use crate::graph::{conductance, cut_weight, local_conductance, volume, LocalGraph, VertexSet};
use crate::io::{self, Format};
use crate::random::{erdos_renyi, sbm, SbmSpec};

use bench::{run_bench, write_csv, BenchConfig, Mode};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 1;
    pub const IO: i32 = 2;
    pub const UNKNOWN_SEED: i32 = 3;
    pub const USAGE: i32 = 64;
}

#[derive(Debug, Parser)]
#[command(name = "locus", version, about = "Local graph clustering in memory or on disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert between EdgeList and AdjacencyList files.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum)]
        from: FormatArg,
        #[arg(long, value_enum)]
        to: FormatArg,
    },
    /// Find a cluster around a seed vertex.
    LocalCluster(LocalClusterArgs),
    /// Generate a random graph.
    Gen {
        #[command(subcommand)]
        model: GenModel,
    },
    /// Time local clustering in memory and on disk on benchmark SBM graphs.
    Bench(BenchArgs),
    /// Partition the whole graph with spectral clustering.
    SpectralCluster {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Volume, cut and conductance of a vertex set.
    Stats {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Comma-separated vertex ids.
        #[arg(long)]
        set: String,
    },
}

#[derive(Debug, Args)]
struct LocalClusterArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    target_volume: Option<f64>,
    /// Teleport probability; overrides the target-volume default.
    #[arg(long)]
    alpha: Option<f64>,
    /// Approximation threshold; overrides the target-volume default.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Memory)]
    mode: ModeArg,
}

#[derive(Debug, Subcommand)]
enum GenModel {
    /// Stochastic block model; also writes `<output>.labels`.
    Sbm {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        cluster_size: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        out: GenOutput,
    },
    /// Erdős–Rényi G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        out: GenOutput,
    },
}

#[derive(Debug, Args)]
struct GenOutput {
    #[arg(long)]
    output: PathBuf,
    /// Defaults to the output extension (`.el` or `.al`).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated cluster counts.
    #[arg(long, value_delimiter = ',', required = true)]
    ks: Vec<usize>,
    #[arg(long, default_value_t = 20_000.0)]
    target_volume: f64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "memory,disk")]
    modes: Vec<ModeArg>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// CSV destination; `-` for stdout.
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Keep generated graphs here instead of a temporary directory.
    #[arg(long)]
    workdir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Edgelist,
    Adjacencylist,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Edgelist => Format::EdgeList,
            FormatArg::Adjacencylist => Format::AdjacencyList,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum ModeArg {
    Memory,
    Disk,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Memory => Mode::Memory,
            ModeArg::Disk => Mode::Disk,
        }
    }
}

/// A failed command: what to print and how to exit.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            _ if e.is_parse_error() => exit::PARSE,
            Error::Io(_) | Error::FileNotFound { .. } => exit::IO,
            Error::UnknownVertex(_) | Error::ZeroDegreeSeed(_) => exit::UNKNOWN_SEED,
            Error::InvalidParameter(_) => exit::USAGE,
            _ => exit::PARSE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

type CmdResult = Result<(), Failure>;

/// Run the tool with `args` (including the program name), writing results
/// to `stdout` and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    exit::OK
                }
                _ => {
                    let first = e.to_string();
                    let line = first.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(stderr, "{}", error_line(line.trim_start_matches("error: ")));
                    exit::USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Convert {
            input,
            output,
            from,
            to,
        } => cmd_convert(&input, &output, from.into(), to.into()),
        Command::LocalCluster(args) => cmd_local_cluster(&args, stdout),
        Command::Gen { model } => cmd_gen(model),
        Command::Bench(args) => cmd_bench(args, stdout),
        Command::SpectralCluster {
            graph,
            format,
            k,
            rng_seed,
        } => cmd_spectral_cluster(&graph, format, k, rng_seed, stdout),
        Command::Stats { graph, format, set } => cmd_stats(&graph, format, &set, stdout),
    };
    match result {
        Ok(()) => exit::OK,
        Err(f) => {
            let _ = writeln!(stderr, "{}", error_line(&f.message));
            f.code
        }
    }
}

fn error_line(message: &str) -> String {
    format!("error: {}", message.replace('\n', " "))
}

fn resolve_format(path: &Path, explicit: Option<FormatArg>) -> Result<Format, Failure> {
    explicit
        .map(Format::from)
        .or_else(|| Format::from_extension(path))
        .ok_or_else(|| {
            Failure::usage(format!(
                "cannot tell the format of {}; pass --format",
                path.display()
            ))
        })
}

fn cmd_convert(input: &Path, output: &Path, from: Format, to: Format) -> CmdResult {
    match (from, to) {
        (Format::EdgeList, Format::AdjacencyList) => io::edgelist_to_adjacencylist(input, output)?,
        (Format::AdjacencyList, Format::EdgeList) => io::adjacencylist_to_edgelist(input, output)?,
        (from, to) => io::save_graph(&io::load_graph(input, from)?, output, to)?,
    }
    Ok(())
}

fn cmd_local_cluster(args: &LocalClusterArgs, stdout: &mut dyn Write) -> CmdResult {
    let format = resolve_format(&args.graph, args.format)?;
    let params = match (args.alpha, args.epsilon, args.target_volume) {
        (None, None, Some(volume)) => AclParams::for_target_volume(volume)?,
        (alpha, Some(epsilon), _) => AclParams::new(alpha.unwrap_or(DEFAULT_ALPHA), epsilon)?,
        (Some(alpha), None, Some(volume)) => {
            let defaults = AclParams::for_target_volume(volume)?;
            AclParams::new(alpha, defaults.epsilon())?
        }
        (_, None, None) => {
            return Err(Failure::usage(
                "pass --target-volume, or --epsilon (with optional --alpha)",
            ))
        }
    };

    let result = match (args.mode, format) {
        (ModeArg::Memory, _) => {
            let g = io::load_graph(&args.graph, format)?;
            local_cluster_acl_sweep(&g, args.seed, params)?
        }
        (ModeArg::Disk, Format::AdjacencyList) => {
            let g = DiskGraph::open(&args.graph)?;
            local_cluster_acl_sweep(&g, args.seed, params)?
        }
        (ModeArg::Disk, Format::EdgeList) => {
            return Err(Failure::usage("disk mode needs an adjacencylist file"))
        }
    };

    let ids: String = result.cluster.iter().map(|v| format!("{v}, ")).collect();
    writeln!(stdout, "{}", ids.trim_end())?;
    writeln!(stdout, "conductance={}", format_g(result.conductance))?;
    Ok(())
}

fn cmd_gen(model: GenModel) -> CmdResult {
    let (graph, labels, out) = match model {
        GenModel::Sbm {
            k,
            cluster_size,
            p,
            q,
            out,
        } => {
            let spec = SbmSpec {
                k,
                cluster_size,
                p,
                q,
                rng_seed: out.rng_seed,
            };
            let (g, labels) = sbm(&spec)?;
            (g, Some(labels), out)
        }
        GenModel::Er { n, p, out } => (erdos_renyi(n, p, out.rng_seed)?, None, out),
    };
    let format = resolve_format(&out.output, out.format)?;
    io::save_graph(&graph, &out.output, format)?;
    if let Some(labels) = labels {
        let mut path = out.output.clone().into_os_string();
        path.push(".labels");
        let mut w = BufWriter::new(File::create(path)?);
        for l in labels {
            writeln!(w, "{l}")?;
        }
        w.flush()?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs, stdout: &mut dyn Write) -> CmdResult {
    let config = BenchConfig {
        ks: args.ks,
        target_volume: args.target_volume,
        modes: args.modes.into_iter().map(Mode::from).collect(),
        rng_seed: args.rng_seed,
        repeats: args.repeats,
        workdir: args.workdir,
    };
    let records = run_bench(&config)?;
    if args.output.as_os_str() == "-" {
        write_csv(&records, stdout)?;
    } else {
        let mut w = BufWriter::new(File::create(&args.output)?);
        write_csv(&records, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_spectral_cluster(
    path: &Path,
    format: Option<FormatArg>,
    k: usize,
    rng_seed: u64,
    stdout: &mut dyn Write,
) -> CmdResult {
    let g = io::load_graph(path, resolve_format(path, format)?)?;
    let labels = spectral_cluster(&g, k, rng_seed)?;
    let mut out = String::with_capacity(labels.len() * 8);
    for (v, l) in labels.iter().enumerate() {
        out.push_str(&format!("{v} {l}\n"));
    }
    stdout.write_all(out.as_bytes())?;
    Ok(())
}

fn parse_set(text: &str) -> Result<VertexSet, Failure> {
    let ids = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Failure::usage(format!("invalid vertex id '{t}' in --set")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VertexSet::new(ids)?)
}

fn cmd_stats(
    path: &Path,
    format: Option<FormatArg>,
    set: &str,
    stdout: &mut dyn Write,
) -> CmdResult {
    let g = io::load_graph(path, resolve_format(path, format)?)?;
    let set = parse_set(set)?;
    for v in set.iter() {
        if !g.vertex_exists(v)? {
            return Err(Error::UnknownVertex(v).into());
        }
    }
    let field = |r: crate::Result<f64>| match r {
        Ok(x) => format_g(x),
        Err(Error::EmptyOrFullSet) => "error:empty_or_full_set".to_string(),
        Err(Error::ZeroVolume) => "error:zero_volume".to_string(),
        Err(e) => format!("error:{}", e.to_string().replace(' ', "_")),
    };
    writeln!(
        stdout,
        "volume={} cut={} conductance={} local_conductance={}",
        field(volume(&g, &set)),
        field(cut_weight(&g, &set)),
        field(conductance(&g, &set)),
        field(local_conductance(&g, &set)),
    )?;
    Ok(())
}

/// Six significant digits with trailing zeros dropped, like C's `%g`.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // the exponent after rounding to 6 significant digits decides the style
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exponent: i32 = exp.parse().unwrap();
    if !(-4..6).contains(&exponent) {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        let sign = if exponent < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exponent.abs());
    }
    let decimals = (5 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
