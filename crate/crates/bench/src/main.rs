// Copyright 2026 The mergepath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mergepath::cachesim::{parse_trace, write_trace, Layout, Policy};
use mergepath_bench::gen::{generate, unsorted, Distribution};
use mergepath_bench::io::{read_keys, write_keys, Format};
use mergepath_bench::report::{BenchReport, OutputFormat};
use mergepath_bench::run::{
    default_cache, doubling_threads, hardware_threads, run_cachesim, run_merge, run_sort,
    run_sweep, simulate_loaded, CacheSize, CachesimParams, MergeBench, MergeVariant, SinkMode,
    SortBench, SortKind, Sweep, TraceKind,
};
use mergepath_bench::{BenchError, Result};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "mergepath-bench",
    version,
    about = "Merge Path benchmarks and cache simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write two sorted key files (or one unsorted file with --unsorted).
    Gen(GenArgs),
    /// Time a merge of two key files.
    Merge(MergeArgs),
    /// Time a sort of one key file.
    Sort(SortArgs),
    /// Replay a merge through a simulated cache and print JSON statistics.
    Cachesim(CachesimArgs),
    /// Run the default sweep over sizes, thread counts and segment counts.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    size_a: usize,
    #[arg(long, default_value_t = 0)]
    size_b: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Distribution::Uniform)]
    dist: Distribution,
    /// Draw uniform keys from [0, RANGE).
    #[arg(long)]
    key_range: Option<u64>,
    #[arg(long)]
    out_a: PathBuf,
    #[arg(long)]
    out_b: Option<PathBuf>,
    /// Write `size-a` keys in random order to OUT_A only.
    #[arg(long)]
    unsorted: bool,
    /// One decimal key per line instead of binary.
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct Timing {
    /// Thread counts; a p = 1 baseline is always added.
    #[arg(long, value_delimiter = ',')]
    threads: Option<Vec<usize>>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, conflicts_with = "segments")]
    cache_elems: Option<usize>,
    /// Set the cache size to 3 * ceil(N / SEGMENTS).
    #[arg(long)]
    segments: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Timing {
    fn threads(&self) -> Vec<usize> {
        self.threads
            .clone()
            .unwrap_or_else(|| doubling_threads(hardware_threads()))
    }

    fn cache(&self) -> Option<CacheSize> {
        self.cache_elems
            .map(CacheSize::Elements)
            .or(self.segments.map(CacheSize::Segments))
    }
}

#[derive(Args)]
struct MergeArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, value_enum, default_value_t = MergeVariant::Regular)]
    variant: MergeVariant,
    #[arg(long, value_enum, default_value_t = SinkMode::Memory)]
    sink: SinkMode,
    #[command(flatten)]
    timing: Timing,
}

#[derive(Args)]
struct SortArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = SortKind::Plain)]
    variant: SortKind,
    #[command(flatten)]
    timing: Timing,
}

#[derive(Args)]
struct CachesimArgs {
    #[arg(long, required_unless_present = "load_trace")]
    a: Option<PathBuf>,
    #[arg(long, required_unless_present = "load_trace")]
    b: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TraceKind::Segmented)]
    variant: TraceKind,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = 48)]
    cache_elems: usize,
    #[arg(long, default_value_t = 3)]
    assoc: usize,
    #[arg(long, default_value_t = 1)]
    line_size: usize,
    #[arg(long, default_value = "lru")]
    policy: Policy,
    /// Add the LRU touch pass before each window of a segmented merge.
    #[arg(long)]
    touch: bool,
    /// Round every array base up to a multiple of STRIDE.
    #[arg(long)]
    stride: Option<u64>,
    /// Base address of A when --stride is given.
    #[arg(long, default_value_t = 0)]
    offset: u64,
    /// Save the generated trace.
    #[arg(long)]
    dump_trace: Option<PathBuf>,
    /// Simulate a saved trace instead of generating one.
    #[arg(long, conflicts_with_all = ["a", "b", "dump_trace"])]
    load_trace: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Elements per input array.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    threads: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    segments: Option<Vec<usize>>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SinkMode::Memory)]
    sink: SinkMode,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(
    path: Option<&Path>,
    emit: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| BenchError::io(p, e))?;
            let mut w = BufWriter::new(file);
            emit(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| BenchError::io(p, e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            emit(&mut w).map_err(|e| BenchError::io("<stdout>", e))
        }
    }
}

fn emit_report(report: &BenchReport, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    output(path, |w| report.write(format, w))
}

fn emit_json<T: Serialize>(value: &T) -> Result<()> {
    output(None, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)
    })
}

fn gen(args: GenArgs) -> Result<()> {
    let format = if args.text {
        Format::Text
    } else {
        Format::Binary
    };
    if args.unsorted {
        let data = unsorted(args.size_a, args.seed, args.key_range);
        return write_keys(&args.out_a, &data, format);
    }
    let out_b = args.out_b.ok_or_else(|| {
        BenchError::Usage("--out-b is required unless --unsorted is given".into())
    })?;
    let (a, b) = generate(
        args.size_a,
        args.size_b,
        args.seed,
        args.dist,
        args.key_range,
    );
    write_keys(&args.out_a, &a, format)?;
    write_keys(&out_b, &b, format)
}

fn merge(args: MergeArgs) -> Result<()> {
    let a = read_keys(&args.a)?;
    let b = read_keys(&args.b)?;
    let bench = MergeBench {
        variant: args.variant,
        threads: args.timing.threads(),
        cache: args.timing.cache(),
        reps: args.timing.reps,
        sink: args.sink,
    };
    let report = run_merge(&a, &b, &bench)?;
    emit_report(&report, args.timing.format, args.timing.out.as_deref())
}

fn sort(args: SortArgs) -> Result<()> {
    let data = read_keys(&args.input)?;
    let bench = SortBench {
        kind: args.variant,
        threads: args.timing.threads(),
        cache: args.timing.cache(),
        reps: args.timing.reps,
    };
    let report = run_sort(&data, &bench)?;
    emit_report(&report, args.timing.format, args.timing.out.as_deref())
}

fn cachesim(args: CachesimArgs) -> Result<()> {
    let config = default_cache(args.cache_elems, args.assoc, args.line_size, args.policy)?;
    if let Some(path) = &args.load_trace {
        let file = File::open(path).map_err(|e| BenchError::io(path, e))?;
        let accesses = parse_trace(BufReader::new(file))?;
        return emit_json(&simulate_loaded(&accesses, config)?);
    }
    let (Some(a_path), Some(b_path)) = (&args.a, &args.b) else {
        return Err(BenchError::Usage("--a and --b are required".into()));
    };
    let a = read_keys(a_path)?;
    let b = read_keys(b_path)?;
    let params = CachesimParams {
        variant: args.variant,
        workers: args.threads,
        config,
        touch: args.touch,
        layout: args
            .stride
            .map(|stride| Layout::aligned(a.len(), b.len(), stride, args.offset)),
    };
    let (result, trace) = run_cachesim(&a, &b, &params)?;
    if let Some(path) = &args.dump_trace {
        output(Some(path), |w| write_trace(w, &trace))?;
    }
    emit_json(&result)
}

fn report(args: ReportArgs) -> Result<()> {
    let defaults = Sweep::default();
    let sweep = Sweep {
        sizes: args.sizes.unwrap_or(defaults.sizes),
        threads: args.threads.unwrap_or(defaults.threads),
        segments: args.segments.unwrap_or(defaults.segments),
        reps: args.reps,
        seed: args.seed,
        sink: args.sink,
    };
    let report = run_sweep(&sweep)?;
    emit_report(&report, args.format, args.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen(args) => gen(args),
        Command::Merge(args) => merge(args),
        Command::Sort(args) => sort(args),
        Command::Cachesim(args) => cachesim(args),
        Command::Report(args) => report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
