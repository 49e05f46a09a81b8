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

//! Parallel execution of merges over a partitioned merge path.
//!
//! Workers are rayon tasks on the ambient thread pool; run inside
//! `ThreadPool::install` to control how many OS threads back them. Every
//! worker finds its own starting point by diagonal search, reads the shared
//! inputs and writes a disjoint range of the output, so no locking is needed.
//!
//! The segmented variant walks the path in windows of `L = C / 3` outputs.
//! A window needs at most `L` consecutive elements of each input, so inputs and
//! outputs of a window fit together in a cache of `C` elements. The windows run
//! one after another; the join at the end of each window is the barrier, and
//! the next window starts where the last worker of the previous one stopped.

use std::ops::Range;

use rayon::prelude::*;

use crate::path::{diagonal_search, merge_run, search_diagonal_by, split_boundary};
use crate::sink::{Checksum, Fingerprint, Sink};
use crate::{Error, MergeInput, PartitionPoint, Result};

/// Comparison counts of one merge.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct ComparisonCounts {
    /// Element comparisons spent in diagonal searches.
    pub partitioning: u64,
    /// Merge steps, one per output element.
    pub merging: u64,
}

/// The path span covered by one window of a segmented merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowUsage {
    pub start: PartitionPoint,
    pub end: PartitionPoint,
    /// Length of the `A` and `B` runs handed to the window's workers.
    pub a_available: usize,
    pub b_available: usize,
}

impl WindowUsage {
    pub fn a_consumed(&self) -> usize {
        self.end.a_off - self.start.a_off
    }

    pub fn b_consumed(&self) -> usize {
        self.end.b_off - self.start.b_off
    }
}

/// Instrumentation collected while merging.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeReport {
    pub searches: u64,
    pub partition_comparisons: u64,
    pub merge_steps: u64,
    /// One entry per window; empty for the unsegmented merge.
    pub windows: Vec<WindowUsage>,
}

/// Splits the comparison work of a finished merge into partitioning and
/// merging.
pub fn partition_comparisons(report: &MergeReport) -> ComparisonCounts {
    ComparisonCounts {
        partitioning: report.partition_comparisons,
        merging: report.merge_steps,
    }
}

/// Window geometry shared by the planner, the merge and the trace generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Geometry {
    pub total: usize,
    pub cache_elems: usize,
    pub window_len: usize,
    pub workers: usize,
    pub iterations: usize,
}

impl Geometry {
    pub fn new(total: usize, p: usize, cache_elems: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::ZeroWorkers);
        }
        if cache_elems < 3 {
            return Err(Error::CacheTooSmall(cache_elems));
        }
        let window_len = cache_elems / 3;
        Ok(Geometry {
            total,
            cache_elems,
            window_len,
            workers: p.min(window_len),
            iterations: total.div_ceil(window_len),
        })
    }

    /// Output positions written in window `k`.
    pub fn window(&self, k: usize) -> Range<usize> {
        let lo = (k * self.window_len).min(self.total);
        lo..(lo + self.window_len).min(self.total)
    }

    /// Window-local output ranges of every worker in window `k`.
    pub fn worker_ranges(&self, k: usize) -> Vec<Range<usize>> {
        let len = self.window(k).len();
        (0..self.workers)
            .map(|w| split_boundary(len, self.workers, w)..split_boundary(len, self.workers, w + 1))
            .collect()
    }
}

/// Schedule of a segmented parallel merge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentPlan {
    pub cache_elems: usize,
    /// `L = floor(C / 3)` outputs per window.
    pub window_len: usize,
    /// Workers active per window, `min(p, L)`.
    pub workers: usize,
    pub iterations: usize,
    /// Where the path enters each window.
    pub starting_points: Vec<PartitionPoint>,
    geometry: Geometry,
}

impl SegmentPlan {
    /// Output positions written in window `k`.
    pub fn window(&self, k: usize) -> Range<usize> {
        self.geometry.window(k)
    }

    /// Absolute output ranges written by each worker in window `k`. Empty
    /// ranges belong to workers that sit the window out.
    pub fn worker_ranges(&self, k: usize) -> Vec<Range<usize>> {
        let base = self.window(k).start;
        self.geometry
            .worker_ranges(k)
            .into_iter()
            .map(|r| base + r.start..base + r.end)
            .collect()
    }
}

pub fn plan_segments<T: Ord>(
    input: &MergeInput<'_, T>,
    p: usize,
    cache_elems: usize,
) -> Result<SegmentPlan> {
    let geometry = Geometry::new(input.len(), p, cache_elems)?;
    let starting_points = (0..geometry.iterations)
        .map(|k| diagonal_search(input, geometry.window(k).start))
        .collect();
    Ok(SegmentPlan {
        cache_elems,
        window_len: geometry.window_len,
        workers: geometry.workers,
        iterations: geometry.iterations,
        starting_points,
        geometry,
    })
}

struct Outcome<O> {
    probes: u64,
    searched: bool,
    end: PartitionPoint,
    chunk: O,
}

/// Splits `out` into `parts` chunks at `floor(k * len / parts)`, tagged with
/// their local start offset.
fn split_even<T, O: Sink<T>>(out: O, parts: usize) -> Vec<(usize, O)> {
    let total = out.len();
    let mut chunks = Vec::with_capacity(parts);
    let mut rest = out;
    for k in 0..parts {
        let lo = split_boundary(total, parts, k);
        let hi = split_boundary(total, parts, k + 1);
        let (chunk, tail) = rest.split_at(hi - lo);
        chunks.push((lo, chunk));
        rest = tail;
    }
    chunks
}

/// One worker: locate the segment start on diagonal `lo` of the `a x b`
/// grid, then merge `chunk.len()` steps.
fn work<T: Ord + Copy, O: Sink<T>>(a: &[T], b: &[T], lo: usize, mut chunk: O) -> Outcome<O> {
    if chunk.is_empty() {
        return Outcome {
            probes: 0,
            searched: false,
            end: PartitionPoint::ORIGIN,
            chunk,
        };
    }
    let (start, probes, searched) = if lo == 0 {
        (PartitionPoint::ORIGIN, 0, false)
    } else {
        let (point, probes) = search_diagonal_by(a.len(), b.len(), lo, |i, j| a[i] > b[j]);
        (point, probes as u64, true)
    };
    let end = merge_run(a, b, start, &mut chunk);
    Outcome {
        probes,
        searched,
        end,
        chunk,
    }
}

fn run_workers<T, O>(a: &[T], b: &[T], chunks: Vec<(usize, O)>) -> Vec<Outcome<O>>
where
    T: Ord + Copy + Sync,
    O: Sink<T>,
{
    if chunks.len() == 1 {
        chunks
            .into_iter()
            .map(|(lo, chunk)| work(a, b, lo, chunk))
            .collect()
    } else {
        chunks
            .into_par_iter()
            .map(|(lo, chunk)| work(a, b, lo, chunk))
            .collect()
    }
}

fn check_output<T, O: Sink<T>>(out: &O, expected: usize) -> Result<()> {
    if out.len() != expected {
        return Err(Error::OutputLength {
            got: out.len(),
            expected,
        });
    }
    Ok(())
}

fn drive_parallel<T, O, F>(
    input: &MergeInput<'_, T>,
    out: O,
    p: usize,
    mut finish: F,
) -> Result<MergeReport>
where
    T: Ord + Copy + Sync,
    O: Sink<T>,
    F: FnMut(O),
{
    if p == 0 {
        return Err(Error::ZeroWorkers);
    }
    check_output(&out, input.len())?;
    let mut report = MergeReport {
        merge_steps: input.len() as u64,
        ..MergeReport::default()
    };
    for outcome in run_workers(input.a, input.b, split_even(out, p)) {
        report.partition_comparisons += outcome.probes;
        report.searches += u64::from(outcome.searched);
        finish(outcome.chunk);
    }
    Ok(report)
}

fn drive_segmented<T, O, F>(
    input: &MergeInput<'_, T>,
    out: O,
    p: usize,
    cache_elems: usize,
    mut finish: F,
) -> Result<MergeReport>
where
    T: Ord + Copy + Sync,
    O: Sink<T>,
    F: FnMut(O),
{
    let geometry = Geometry::new(input.len(), p, cache_elems)?;
    check_output(&out, input.len())?;
    let (a, b) = (input.a, input.b);
    let span = geometry.window_len;
    let mut report = MergeReport {
        merge_steps: input.len() as u64,
        windows: Vec::with_capacity(geometry.iterations),
        ..MergeReport::default()
    };
    let mut start = PartitionPoint::ORIGIN;
    let mut rest = out;
    for k in 0..geometry.iterations {
        let (window, tail) = rest.split_at(geometry.window(k).len());
        rest = tail;
        // A window never needs more than `span` elements of either input.
        let a_win = &a[start.a_off..(start.a_off + span).min(a.len())];
        let b_win = &b[start.b_off..(start.b_off + span).min(b.len())];
        let mut last_end = PartitionPoint::ORIGIN;
        for outcome in run_workers(a_win, b_win, split_even(window, geometry.workers)) {
            report.partition_comparisons += outcome.probes;
            report.searches += u64::from(outcome.searched);
            if !outcome.chunk.is_empty() {
                last_end = outcome.end;
            }
            finish(outcome.chunk);
        }
        let end = start.offset_by(last_end);
        report.windows.push(WindowUsage {
            start,
            end,
            a_available: a_win.len(),
            b_available: b_win.len(),
        });
        start = end;
    }
    Ok(report)
}

fn filled<T: Copy>(input: &MergeInput<'_, T>) -> Vec<T> {
    match input.a.first().or(input.b.first()) {
        Some(&x) => vec![x; input.a.len() + input.b.len()],
        None => Vec::new(),
    }
}

/// Merges into `out` with `p` workers, each owning one of `p` equal path
/// segments.
pub fn parallel_merge_into<T>(
    input: &MergeInput<'_, T>,
    out: &mut [T],
    p: usize,
) -> Result<MergeReport>
where
    T: Ord + Copy + Send + Sync,
{
    drive_parallel(input, out, p, |_| {})
}

pub fn parallel_merge<T>(input: &MergeInput<'_, T>, p: usize) -> Result<Vec<T>>
where
    T: Ord + Copy + Send + Sync,
{
    let mut out = filled(input);
    parallel_merge_into(input, &mut out, p)?;
    Ok(out)
}

/// Runs the parallel merge without storing the output, returning the
/// [`Checksum`] of what would have been written.
pub fn parallel_merge_checksum<T>(input: &MergeInput<'_, T>, p: usize) -> Result<(u64, MergeReport)>
where
    T: Ord + Copy + Sync + Fingerprint,
{
    let mut sum = 0u64;
    let report = drive_parallel(input, Checksum::new(input.len()), p, |c| {
        sum = sum.wrapping_add(c.value())
    })?;
    Ok((sum, report))
}

/// Segmented parallel merge into `out` for a cache of `cache_elems`
/// elements.
pub fn segmented_parallel_merge_into<T>(
    input: &MergeInput<'_, T>,
    out: &mut [T],
    p: usize,
    cache_elems: usize,
) -> Result<MergeReport>
where
    T: Ord + Copy + Send + Sync,
{
    drive_segmented(input, out, p, cache_elems, |_| {})
}

pub fn segmented_parallel_merge<T>(
    input: &MergeInput<'_, T>,
    p: usize,
    cache_elems: usize,
) -> Result<Vec<T>>
where
    T: Ord + Copy + Send + Sync,
{
    let mut out = filled(input);
    segmented_parallel_merge_into(input, &mut out, p, cache_elems)?;
    Ok(out)
}

pub fn segmented_parallel_merge_checksum<T>(
    input: &MergeInput<'_, T>,
    p: usize,
    cache_elems: usize,
) -> Result<(u64, MergeReport)>
where
    T: Ord + Copy + Sync + Fingerprint,
{
    let mut sum = 0u64;
    let report = drive_segmented(input, Checksum::new(input.len()), p, cache_elems, |c| {
        sum = sum.wrapping_add(c.value())
    })?;
    Ok((sum, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input<'a>(a: &'a [i64], b: &'a [i64]) -> MergeInput<'a, i64> {
        MergeInput::new(a, b)
    }

    #[test]
    fn parallel_merge_examples() {
        let m = input(&[1, 3, 5, 7], &[2, 4, 6, 8]);
        assert_eq!(parallel_merge(&m, 2).unwrap(), (1..=8).collect::<Vec<_>>());
        assert_eq!(
            parallel_merge(&input(&[9, 10], &[1, 2]), 2).unwrap(),
            vec![1, 2, 9, 10]
        );
        assert_eq!(
            parallel_merge(&input(&[], &[]), 3).unwrap(),
            Vec::<i64>::new()
        );
        assert_eq!(parallel_merge(&m, 0), Err(Error::ZeroWorkers));
    }

    #[test]
    fn more_workers_than_outputs() {
        let m = input(&[4], &[1, 9]);
        let mut out = [0; 3];
        let report = parallel_merge_into(&m, &mut out, 16).unwrap();
        assert_eq!(out, [1, 4, 9]);
        assert_eq!(report.searches, 2);
    }

    #[test]
    fn output_length_is_checked() {
        let mut out = [0; 2];
        assert_eq!(
            parallel_merge_into(&input(&[1], &[2, 3]), &mut out, 1),
            Err(Error::OutputLength {
                got: 2,
                expected: 3
            })
        );
    }

    #[test]
    fn plan_examples() {
        let a: Vec<i64> = (0..8).map(|x| 2 * x).collect();
        let b: Vec<i64> = (0..8).map(|x| 2 * x + 1).collect();
        let m = input(&a, &b);
        let plan = plan_segments(&m, 2, 12).unwrap();
        assert_eq!((plan.window_len, plan.iterations, plan.workers), (4, 4, 2));
        assert_eq!(plan.worker_ranges(1), vec![4..6, 6..8]);
        let plan = plan_segments(&m, 4, 100).unwrap();
        assert_eq!((plan.window_len, plan.iterations, plan.workers), (33, 1, 4));

        let a: Vec<i64> = (0..1000).collect();
        let plan = plan_segments(&input(&a, &[]), 16, 30).unwrap();
        assert_eq!(
            (plan.window_len, plan.workers, plan.iterations),
            (10, 10, 100)
        );
        assert_eq!(plan.starting_points[37], PartitionPoint::new(370, 0));

        assert_eq!(
            plan_segments(&m, 2, 2).unwrap_err(),
            Error::CacheTooSmall(2)
        );
        assert_eq!(plan_segments(&m, 0, 12).unwrap_err(), Error::ZeroWorkers);
    }

    #[test]
    fn segmented_examples() {
        let m = input(&[1, 3, 5, 7], &[2, 4, 6, 8]);
        let mut out = [0; 8];
        let report = segmented_parallel_merge_into(&m, &mut out, 2, 12).unwrap();
        assert_eq!(out.to_vec(), (1..=8).collect::<Vec<_>>());
        assert_eq!(report.windows.len(), 2);
        assert_eq!(report.windows[0].end, diagonal_search(&m, 4));

        let a = [1, 2, 3, 4, 5];
        let report = segmented_parallel_merge_into(&input(&a, &[]), &mut [0; 5], 3, 6).unwrap();
        assert_eq!(report.windows.len(), 3);
        let plan = plan_segments(&input(&a, &[]), 3, 6).unwrap();
        assert_eq!((plan.window_len, plan.workers), (2, 2));
        assert_eq!(
            segmented_parallel_merge(&input(&a, &[]), 3, 6).unwrap(),
            a.to_vec()
        );
    }

    #[test]
    fn final_short_window_leaves_workers_idle() {
        let a: Vec<i64> = (0..9).collect();
        let m = input(&a, &[]);
        let geometry = Geometry::new(9, 4, 12).unwrap();
        assert_eq!(geometry.worker_ranges(2), vec![0..0, 0..0, 0..0, 0..1]);
        assert_eq!(segmented_parallel_merge(&m, 4, 12).unwrap(), a);
    }

    #[test]
    fn comparison_split() {
        let m = input(&[1, 3, 5, 7], &[2, 4, 6, 8]);
        let report = parallel_merge_into(&m, &mut [0; 8], 1).unwrap();
        assert_eq!(
            partition_comparisons(&report),
            ComparisonCounts {
                partitioning: 0,
                merging: 8
            }
        );
        let report = parallel_merge_into(&m, &mut [0; 8], 2).unwrap();
        assert!(report.partition_comparisons <= 4);
    }

    #[test]
    fn checksum_variants_match_materialized_output() {
        let a = [1i64, 1, 4, 9, 12];
        let b = [0i64, 1, 5, 13];
        let m = input(&a, &b);
        let merged = parallel_merge(&m, 1).unwrap();
        let expected = Checksum::of(&merged);
        assert_eq!(parallel_merge_checksum(&m, 3).unwrap().0, expected);
        assert_eq!(
            segmented_parallel_merge_checksum(&m, 2, 6).unwrap().0,
            expected
        );
    }
}
