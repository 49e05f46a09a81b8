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

//! Timed, oracle-checked runs of the merge and sort variants, and cache
//! simulation runs.

use std::time::Instant;

use mergepath::cachesim::{
    false_sharing_lines, simulate, trace_merge, verify_conflict_freedom, CacheConfig, CacheStats,
    ConflictReport, Layout, MemAccess, Policy, Region, TraceOptions, TraceVariant,
};
use mergepath::sink::Checksum;
use mergepath::{
    cache_efficient_parallel_sort, parallel_merge_into, parallel_merge_sort, partition_comparisons,
    segmented_parallel_merge_into, MergeInput, MergeReport, Operand,
};
use rayon::ThreadPool;
use serde::Serialize;

use crate::error::{BenchError, Result};
use crate::gen::{generate, Distribution};
use crate::report::{mean, median, BenchReport, BenchRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MergeVariant {
    Sequential,
    Regular,
    Segmented,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SortKind {
    Plain,
    CacheEfficient,
}

/// Where merge outputs go: an output array, or a running checksum that keeps
/// the outputs in registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum SinkMode {
    #[default]
    Memory,
    Register,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheSize {
    Elements(usize),
    /// Split the work into this many windows (or blocks): `C = 3 * ceil(N / k)`.
    Segments(usize),
}

impl CacheSize {
    pub fn resolve(self, n: usize) -> Result<usize> {
        match self {
            CacheSize::Elements(c) => Ok(c),
            CacheSize::Segments(0) => {
                Err(BenchError::Usage("segment count must be positive".into()))
            }
            CacheSize::Segments(k) => Ok(3 * n.div_ceil(k).max(1)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MergeBench {
    pub variant: MergeVariant,
    pub threads: Vec<usize>,
    pub cache: Option<CacheSize>,
    pub reps: usize,
    pub sink: SinkMode,
}

#[derive(Debug, Clone)]
pub struct SortBench {
    pub kind: SortKind,
    pub threads: Vec<usize>,
    pub cache: Option<CacheSize>,
    pub reps: usize,
}

pub fn hardware_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// `1, 2, 4, ...` up to `max`, plus `max` itself.
pub fn doubling_threads(max: usize) -> Vec<usize> {
    let mut v: Vec<usize> = std::iter::successors(Some(1usize), |p| p.checked_mul(2))
        .take_while(|&p| p <= max)
        .collect();
    if v.last() != Some(&max) && max > 0 {
        v.push(max);
    }
    v
}

fn thread_counts(requested: &[usize]) -> Result<Vec<usize>> {
    if requested.contains(&0) {
        return Err(BenchError::Usage("thread counts must be positive".into()));
    }
    let mut v = requested.to_vec();
    v.push(1);
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

fn check_reps(reps: usize) -> Result<()> {
    if reps < 3 {
        return Err(BenchError::Usage(format!(
            "at least 3 repetitions required, got {reps}"
        )));
    }
    Ok(())
}

fn pool(p: usize) -> Result<ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(p)
        .build()
        .map_err(|e| BenchError::Usage(format!("cannot start {p} threads: {e}")))
}

/// Two-pointer merge that takes from `a` on ties.
pub fn oracle_merge(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn first_difference(got: &[i64], want: &[i64]) -> String {
    match got.iter().zip(want).position(|(x, y)| x != y) {
        Some(i) => format!("index {i}: got {}, expected {}", got[i], want[i]),
        None => format!("length {} vs {}", got.len(), want.len()),
    }
}

fn merge_once(
    input: &MergeInput<'_, i64>,
    variant: MergeVariant,
    p: usize,
    c: Option<usize>,
    sink: SinkMode,
    out: &mut [i64],
) -> Result<(f64, MergeReport, Option<u64>)> {
    let start = Instant::now();
    let (report, sum) = match (variant, sink) {
        (MergeVariant::Sequential, SinkMode::Memory) => (parallel_merge_into(input, out, 1)?, None),
        (MergeVariant::Regular, SinkMode::Memory) => (parallel_merge_into(input, out, p)?, None),
        (MergeVariant::Segmented, SinkMode::Memory) => (
            segmented_parallel_merge_into(input, out, p, c.unwrap_or(0))?,
            None,
        ),
        (MergeVariant::Sequential, SinkMode::Register) => {
            let (s, r) = mergepath::exec::parallel_merge_checksum(input, 1)?;
            (r, Some(s))
        }
        (MergeVariant::Regular, SinkMode::Register) => {
            let (s, r) = mergepath::exec::parallel_merge_checksum(input, p)?;
            (r, Some(s))
        }
        (MergeVariant::Segmented, SinkMode::Register) => {
            let (s, r) =
                mergepath::exec::segmented_parallel_merge_checksum(input, p, c.unwrap_or(0))?;
            (r, Some(s))
        }
    };
    Ok((start.elapsed().as_secs_f64(), report, sum))
}

/// Times `bench.variant` on `a` and `b` at every thread count, checking each
/// repetition against [`oracle_merge`] before its time is kept.
pub fn run_merge(a: &[i64], b: &[i64], bench: &MergeBench) -> Result<BenchReport> {
    check_reps(bench.reps)?;
    let input = MergeInput::validated(a, b)?;
    let n = input.len();
    let c = match (bench.variant, bench.cache) {
        (MergeVariant::Segmented, None) => {
            return Err(BenchError::Usage(
                "segmented merge needs --cache-elems or --segments".into(),
            ))
        }
        (MergeVariant::Segmented, Some(size)) => Some(size.resolve(n)?),
        _ => None,
    };
    let threads = match bench.variant {
        MergeVariant::Sequential => vec![1],
        _ => thread_counts(&bench.threads)?,
    };
    let expected = oracle_merge(a, b);
    let expected_sum = Checksum::of(&expected);

    let mut report = BenchReport::default();
    for p in threads {
        let pool = pool(p)?;
        let mut out = vec![0i64; n];
        let mut times = Vec::with_capacity(bench.reps);
        let mut counts = None;
        for _ in 0..bench.reps {
            out.fill(0);
            let (secs, merge_report, sum) =
                pool.install(|| merge_once(&input, bench.variant, p, c, bench.sink, &mut out))?;
            let ok = match sum {
                Some(s) => s == expected_sum,
                None => out == expected,
            };
            if !ok {
                let detail = match sum {
                    Some(s) => format!("checksum {s:#x}, expected {expected_sum:#x}"),
                    None => first_difference(&out, &expected),
                };
                return Err(BenchError::Mismatch(format!(
                    "{:?} merge, p={p}: {detail}",
                    bench.variant
                )));
            }
            times.push(secs);
            counts.get_or_insert(partition_comparisons(&merge_report));
        }
        let counts = counts.unwrap_or_default();
        report.rows.push(BenchRow {
            variant: variant_name(bench.variant).into(),
            n,
            p,
            c,
            repetitions: bench.reps,
            median_seconds: median(&times),
            mean_seconds: mean(&times),
            speedup_vs_p1: f64::NAN,
            comparisons_partitioning: counts.partitioning,
            comparisons_merging: Some(counts.merging),
        });
    }
    report.fill_speedups();
    Ok(report)
}

fn variant_name(v: MergeVariant) -> &'static str {
    match v {
        MergeVariant::Sequential => "sequential",
        MergeVariant::Regular => "regular",
        MergeVariant::Segmented => "segmented",
    }
}

/// Times a sort of `data` at every thread count, checking each repetition
/// against the standard library's stable sort.
pub fn run_sort(data: &[i64], bench: &SortBench) -> Result<BenchReport> {
    check_reps(bench.reps)?;
    let n = data.len();
    let c = match (bench.kind, bench.cache) {
        (SortKind::CacheEfficient, None) => {
            return Err(BenchError::Usage(
                "cache-efficient sort needs --cache-elems or --segments".into(),
            ))
        }
        (SortKind::CacheEfficient, Some(size)) => Some(size.resolve(n)?),
        _ => None,
    };
    let mut expected = data.to_vec();
    expected.sort();

    let mut report = BenchReport::default();
    for p in thread_counts(&bench.threads)? {
        let pool = pool(p)?;
        let mut times = Vec::with_capacity(bench.reps);
        let mut partitioning = 0;
        for _ in 0..bench.reps {
            let mut work = data.to_vec();
            let start = Instant::now();
            let stats = pool.install(|| match c {
                Some(c) => cache_efficient_parallel_sort(&mut work, p, c),
                None => parallel_merge_sort(&mut work, p),
            })?;
            let secs = start.elapsed().as_secs_f64();
            if work != expected {
                return Err(BenchError::Mismatch(format!(
                    "{:?} sort, p={p}: {}",
                    bench.kind,
                    first_difference(&work, &expected)
                )));
            }
            times.push(secs);
            partitioning = stats.partition_comparisons;
        }
        report.rows.push(BenchRow {
            variant: match bench.kind {
                SortKind::Plain => "sort_plain",
                SortKind::CacheEfficient => "sort_cache_efficient",
            }
            .into(),
            n,
            p,
            c,
            repetitions: bench.reps,
            median_seconds: median(&times),
            mean_seconds: mean(&times),
            speedup_vs_p1: f64::NAN,
            comparisons_partitioning: partitioning,
            comparisons_merging: None,
        });
    }
    report.fill_speedups();
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    Sequential,
    Parallel,
    Segmented,
}

#[derive(Debug, Clone, Copy)]
pub struct CachesimParams {
    pub variant: TraceKind,
    pub workers: usize,
    pub config: CacheConfig,
    pub touch: bool,
    /// Defaults to `A`, `B`, `S` back to back.
    pub layout: Option<Layout>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CachesimResult {
    pub variant: Option<TraceKind>,
    pub workers: usize,
    pub config: CacheConfig,
    pub layout: Layout,
    pub touch: bool,
    pub trace_accesses: usize,
    pub stats: CacheStats,
    /// Present for segmented runs when the associativity is a multiple of 3.
    pub conflict_check: Option<ConflictReport>,
    /// Output lines written by more than one worker, for the parallel variant.
    pub false_sharing_lines: Option<usize>,
}

/// Replays one merge variant through the simulated cache. Returns the result
/// and the trace.
pub fn run_cachesim(
    a: &[i64],
    b: &[i64],
    params: &CachesimParams,
) -> Result<(CachesimResult, Vec<MemAccess>)> {
    let input = MergeInput::validated(a, b)?;
    let config = params.config;
    config.validate()?;
    if params.workers == 0 {
        return Err(BenchError::Usage("thread count must be positive".into()));
    }
    let layout = params
        .layout
        .unwrap_or_else(|| Layout::contiguous(a.len(), b.len()));
    layout.validate()?;
    let variant = match params.variant {
        TraceKind::Sequential => TraceVariant::Sequential,
        TraceKind::Parallel => TraceVariant::Parallel {
            workers: params.workers,
        },
        TraceKind::Segmented => TraceVariant::Segmented {
            workers: params.workers,
            cache_elems: config.capacity,
        },
    };
    let options = TraceOptions {
        touch: params.touch,
        line_size: config.line_size,
    };
    let trace = trace_merge(&input, variant, options)?;
    let stats = simulate(&trace.accesses, &layout, &config)?;
    let conflict_check = match params.variant {
        TraceKind::Segmented if config.associativity.is_multiple_of(3) => Some(
            verify_conflict_freedom(&input, params.workers, &config, &layout)?,
        ),
        _ => None,
    };
    let false_sharing = match params.variant {
        TraceKind::Parallel => Some(false_sharing_lines(
            input.len(),
            params.workers,
            config.line_size,
            layout.s.base,
        )),
        _ => None,
    };
    let result = CachesimResult {
        variant: Some(params.variant),
        workers: params.workers,
        config,
        layout,
        touch: params.touch,
        trace_accesses: trace.len(),
        stats,
        conflict_check,
        false_sharing_lines: false_sharing,
    };
    Ok((result, trace.accesses))
}

/// Simulates a trace loaded from a file, laying out each array just large
/// enough for its highest index.
pub fn simulate_loaded(accesses: &[MemAccess], config: CacheConfig) -> Result<CachesimResult> {
    config.validate()?;
    let extent = |op: Operand| {
        accesses
            .iter()
            .filter(|m| m.array == op)
            .map(|m| m.index + 1)
            .max()
            .unwrap_or(0)
    };
    let (a_len, b_len, s_len) = (extent(Operand::A), extent(Operand::B), extent(Operand::S));
    let layout = Layout::new(
        Region {
            base: 0,
            len: a_len,
        },
        Region {
            base: a_len as u64,
            len: b_len,
        },
        Region {
            base: (a_len + b_len) as u64,
            len: s_len,
        },
    )?;
    let stats = simulate(accesses, &layout, &config)?;
    Ok(CachesimResult {
        variant: None,
        workers: 0,
        config,
        layout,
        touch: false,
        trace_accesses: accesses.len(),
        stats,
        conflict_check: None,
        false_sharing_lines: None,
    })
}

pub fn default_cache(
    capacity: usize,
    assoc: usize,
    line_size: usize,
    policy: Policy,
) -> Result<CacheConfig> {
    Ok(CacheConfig::new(capacity, assoc, line_size, policy)?)
}

#[derive(Debug, Clone)]
pub struct Sweep {
    /// Elements per input array; both arrays get this many.
    pub sizes: Vec<usize>,
    pub threads: Vec<usize>,
    pub segments: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub sink: SinkMode,
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep {
            sizes: vec![1 << 20, 10 << 20],
            threads: doubling_threads(hardware_threads()),
            segments: vec![2, 5, 10],
            reps: 3,
            seed: 1,
            sink: SinkMode::Memory,
        }
    }
}

/// Sequential, regular and segmented merges of equal-sized uniform arrays,
/// for every size, thread count and segment count.
pub fn run_sweep(sweep: &Sweep) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    for (i, &size) in sweep.sizes.iter().enumerate() {
        let (a, b) = generate(
            size,
            size,
            sweep.seed.wrapping_add(i as u64),
            Distribution::Uniform,
            None,
        );
        let mut bench = MergeBench {
            variant: MergeVariant::Sequential,
            threads: sweep.threads.clone(),
            cache: None,
            reps: sweep.reps,
            sink: sweep.sink,
        };
        report.extend(run_merge(&a, &b, &bench)?);
        bench.variant = MergeVariant::Regular;
        report.extend(run_merge(&a, &b, &bench)?);
        bench.variant = MergeVariant::Segmented;
        for &k in &sweep.segments {
            bench.cache = Some(CacheSize::Segments(k));
            report.extend(run_merge(&a, &b, &bench)?);
        }
    }
    Ok(report)
}
