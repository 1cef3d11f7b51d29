//! `swamp`: exact DTW motif discovery over univariate series.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or runtime error.

use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use swamp_cli::bench::{bench_lb, default_levels, BenchParams};
use swamp_cli::gen::{planted_motif, random_walk, write_series};
use swamp_cli::ingest::{read_series, ColumnSel};
use swamp_cli::report::{profile_csv, BenchReport, ConfigEcho, InputDesc, RunReport, TimingsEcho};
use swamp_core::oracle::{brute_force_motif_with, OracleOptions};
use swamp_core::{
    swamp_search_with, Normalization, SearchConfig, SwampOptions, TimeSeries, DEFAULT_EPSILON,
};

#[derive(Parser)]
#[command(
    name = "swamp",
    version,
    about = "Exact DTW motif discovery with pruned matrix-profile search"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the two-phase pruned search and print a JSON report.
    Find(FindArgs),
    /// Run the brute-force reference search and print a JSON report.
    Oracle(OracleArgs),
    /// Measure tightness and cost of each lower bound on sampled pairs.
    BenchLb(BenchArgs),
    /// Emit a synthetic series, one value per line.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    RandomWalk,
    PlantedMotif,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Raw,
    Znorm,
}

impl Mode {
    fn to_core(self) -> Normalization {
        match self {
            Mode::Raw => Normalization::Raw,
            Mode::Znorm => Normalization::ZNorm,
        }
    }
}

#[derive(Args)]
struct SourceArgs {
    /// Input file, one float per line ("-" reads standard input).
    #[arg(long)]
    input: Option<String>,
    /// Column of a comma-separated input: a 1-based position or a header name.
    #[arg(long)]
    column: Option<String>,
    /// Generate the series instead of reading one.
    #[arg(long, value_enum)]
    generate: Option<GenKind>,
    /// Length of the generated series.
    #[arg(long)]
    n: Option<usize>,
    /// Seed for generation and sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise amplitude applied to the planted copy.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
}

#[derive(Args)]
struct SearchArgs {
    /// Subsequence length L.
    #[arg(long)]
    length: usize,
    /// Warping window as an absolute offset limit.
    #[arg(long)]
    window: Option<usize>,
    /// Warping window as a fraction of L, translated to floor(frac * L).
    #[arg(long)]
    window_frac: Option<f64>,
    #[arg(long, value_enum, default_value_t = Mode::Raw)]
    mode: Mode,
    /// Tie tolerance on reported distances.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Worker threads; 0 picks the machine's parallelism.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Leave wall-clock timings out of the report.
    #[arg(long)]
    no_timings: bool,
}

#[derive(Args)]
struct FindArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    out: OutputArgs,
    /// Directory for per-level profile CSV dumps.
    #[arg(long)]
    dump_profiles: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    out: OutputArgs,
    /// Run even on series longer than the brute-force size guard.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    out: OutputArgs,
    /// Number of sampled non-trivial pairs.
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
    /// Comma-separated downsampling factors; default halves L down to 2.
    #[arg(long)]
    levels: Option<String>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long)]
    n: usize,
    /// Planted block length; required for planted-motif.
    #[arg(long)]
    length: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<swamp_core::Error> for Failure {
    fn from(e: swamp_core::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    let result = match cli.cmd {
        Cmd::Find(args) => run_find(args),
        Cmd::Oracle(args) => run_oracle(args),
        Cmd::BenchLb(args) => run_bench(args),
        Cmd::Generate(args) => run_generate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("swamp: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("swamp: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Resolves the series and its report descriptor from either source flag.
fn load_series(src: &SourceArgs, length: usize) -> Result<(TimeSeries, InputDesc), Failure> {
    match (&src.input, src.generate) {
        (Some(_), Some(_)) => Err(usage("--input and --generate are mutually exclusive")),
        (None, None) => Err(usage("one of --input or --generate is required")),
        (Some(path), None) => {
            let column = src
                .column
                .as_deref()
                .map(ColumnSel::parse)
                .transpose()
                .map_err(Failure::Data)?;
            let (values, source) = if path == "-" {
                let stdin = io::stdin();
                let values = read_series(stdin.lock(), column.as_ref())?;
                (values, "stdin".to_owned())
            } else {
                let file = fs::File::open(path).with_context(|| format!("opening {path}"))?;
                let values = read_series(BufReader::new(file), column.as_ref())
                    .with_context(|| format!("reading {path}"))?;
                (values, format!("file:{path}"))
            };
            let n = values.len();
            let ts = TimeSeries::new(values).map_err(anyhow::Error::from)?;
            Ok((ts, InputDesc { source, n, seed: None, noise: None, planted: None }))
        }
        (None, Some(kind)) => {
            if src.column.is_some() {
                return Err(usage("--column only applies to --input"));
            }
            let n = src.n.ok_or_else(|| usage("--generate requires --n"))?;
            let (values, desc) = match kind {
                GenKind::RandomWalk => (
                    random_walk(n, src.seed),
                    InputDesc {
                        source: "random-walk".into(),
                        n,
                        seed: Some(src.seed),
                        noise: None,
                        planted: None,
                    },
                ),
                GenKind::PlantedMotif => {
                    let (values, (a, b)) = planted_motif(n, length, src.seed, src.noise)?;
                    (
                        values,
                        InputDesc {
                            source: "planted-motif".into(),
                            n,
                            seed: Some(src.seed),
                            noise: Some(src.noise),
                            planted: Some([a + 1, b + 1]),
                        },
                    )
                }
            };
            let ts = TimeSeries::new(values).map_err(anyhow::Error::from)?;
            Ok((ts, desc))
        }
    }
}

fn resolve_config(args: &SearchArgs) -> Result<SearchConfig, Failure> {
    let window = match (args.window, args.window_frac) {
        (Some(_), Some(_)) => {
            return Err(usage("--window and --window-frac are mutually exclusive"))
        }
        (None, None) => return Err(usage("one of --window or --window-frac is required")),
        (Some(w), None) => w,
        (None, Some(f)) => {
            if !(0.0..=1.0).contains(&f) {
                return Err(usage("--window-frac must lie in [0, 1]"));
            }
            (f * args.length as f64).floor() as usize
        }
    };
    Ok(SearchConfig::new(args.length, window)
        .with_normalization(args.mode.to_core())
        .with_epsilon(args.epsilon))
}

fn resolve_threads(requested: usize) -> usize {
    if requested == 0 {
        std::thread::available_parallelism().map(|v| v.get()).unwrap_or(1)
    } else {
        requested
    }
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Data),
        None => {
            io::stdout()
                .write_all(text.as_bytes())
                .context("writing standard output")
                .map_err(Failure::Data)?;
            Ok(())
        }
    }
}

fn write_dumps(
    dir: &Path,
    outcome: &swamp_core::SwampOutcome,
) -> Result<Vec<String>, Failure> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(Failure::Data)?;
    let mut files = Vec::new();
    let mut write = |name: String, text: String| -> Result<(), Failure> {
        fs::write(dir.join(&name), text)
            .with_context(|| format!("writing {}", dir.join(&name).display()))
            .map_err(Failure::Data)?;
        files.push(name);
        Ok(())
    };
    if let Some(ed) = &outcome.ed_profile {
        write("ed_mp.csv".into(), profile_csv(&ed.distances))?;
    }
    for level in &outcome.level_profiles {
        write(format!("lbmp_d{}.csv", level.level), profile_csv(&level.lbmp))?;
    }
    Ok(files)
}

fn run_find(args: FindArgs) -> Result<(), Failure> {
    let cfg = resolve_config(&args.search)?;
    let (ts, input) = load_series(&args.source, args.search.length)?;
    let opts = SwampOptions {
        threads: resolve_threads(args.search.threads),
        keep_profiles: args.dump_profiles.is_some(),
        ..SwampOptions::default()
    };
    let outcome = swamp_search_with(&ts, &cfg, opts)?;
    let mut report = RunReport::new(input, &cfg, &outcome.motif, !args.out.no_timings);
    if let Some(dir) = &args.dump_profiles {
        report.dumps = Some(write_dumps(dir, &outcome)?);
    }
    emit(&args.out, &report.to_json())
}

fn run_oracle(args: OracleArgs) -> Result<(), Failure> {
    let cfg = resolve_config(&args.search)?;
    let (ts, input) = load_series(&args.source, args.search.length)?;
    let opts = OracleOptions {
        force: args.force,
        threads: resolve_threads(args.search.threads),
    };
    let started = Instant::now();
    let motif = brute_force_motif_with(&ts, &cfg, opts)?;
    let elapsed = started.elapsed();
    let mut report = RunReport::new(input, &cfg, &motif, false);
    if !args.out.no_timings {
        report.stats.timings = Some(TimingsEcho {
            phase1_ms: None,
            phase2_ms: None,
            total_ms: elapsed.as_secs_f64() * 1e3,
        });
    }
    emit(&args.out, &report.to_json())
}

fn run_bench(args: BenchArgs) -> Result<(), Failure> {
    let cfg = resolve_config(&args.search)?;
    let (ts, input) = load_series(&args.source, args.search.length)?;
    let levels = match &args.levels {
        None => default_levels(cfg.subseq_len),
        Some(list) => list
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| usage(format!("--levels: not a factor: {tok:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    let params = BenchParams {
        pairs: args.pairs,
        seed: args.source.seed,
        levels,
        timed: !args.out.no_timings,
    };
    let table = bench_lb(&ts, &cfg, &params)?;
    let report = BenchReport {
        input,
        config: ConfigEcho::from_config(&cfg),
        pairs: args.pairs,
        table,
    };
    emit(&args.out, &report.to_json())
}

fn run_generate(args: GenerateArgs) -> Result<(), Failure> {
    let values = match args.kind {
        GenKind::RandomWalk => random_walk(args.n, args.seed),
        GenKind::PlantedMotif => {
            let l = args
                .length
                .ok_or_else(|| usage("planted-motif generation requires --length"))?;
            planted_motif(args.n, l, args.seed, args.noise)?.0
        }
    };
    match &args.output {
        Some(path) => {
            let mut file = fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            write_series(&mut file, &values).context("writing series")?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_series(&mut lock, &values).context("writing series")?;
        }
    }
    Ok(())
}

