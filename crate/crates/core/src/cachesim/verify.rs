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

use std::collections::BTreeSet;

use super::cache::{simulate, CacheConfig, CacheStats, Layout};
use super::trace::{trace_merge, TraceOptions, TraceVariant};
use crate::path::split_boundary;
use crate::{MergeInput, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ConflictReport {
    pub stats: CacheStats,
    pub conflict_misses: u64,
    pub passed: bool,
}

/// Replays the segmented merge for a cache of `config.capacity` elements and
/// checks that it takes no conflict misses.
///
/// The merge runs with windows of `capacity / 3` outputs, so each window
/// touches at most `capacity / 3` consecutive elements of `A`, of `B` and of
/// `S`. With associativity a multiple of 3 those fit in every set whatever
/// the base addresses. The trace includes the LRU touch pass, which keeps the
/// unconsumed inputs of the previous window more recent than spent lines.
pub fn verify_conflict_freedom<T: Ord>(
    input: &MergeInput<'_, T>,
    workers: usize,
    config: &CacheConfig,
    layout: &Layout,
) -> Result<ConflictReport> {
    config.validate()?;
    let variant = TraceVariant::Segmented {
        workers,
        cache_elems: config.capacity,
    };
    let options = TraceOptions {
        touch: true,
        line_size: config.line_size,
    };
    let trace = trace_merge(input, variant, options)?;
    let stats = simulate(&trace.accesses, layout, config)?;
    Ok(ConflictReport {
        stats,
        conflict_misses: stats.conflict_misses,
        passed: stats.conflict_misses == 0,
    })
}

/// Ratio of trace lengths of the single-worker segmented merge with
/// `options` against the same merge without the touch pass.
pub fn lru_touch_overhead<T: Ord>(
    input: &MergeInput<'_, T>,
    cache_elems: usize,
    options: TraceOptions,
) -> Result<f64> {
    let variant = TraceVariant::Segmented {
        workers: 1,
        cache_elems,
    };
    let base = trace_merge(
        input,
        variant,
        TraceOptions {
            touch: false,
            ..options
        },
    )?;
    let with = trace_merge(input, variant, options)?;
    if base.is_empty() {
        return Ok(1.0);
    }
    Ok(with.len() as f64 / base.len() as f64)
}

/// Output lines written by two or more workers of the unsegmented parallel
/// merge of `total` elements, for an output array starting at `s_base`.
pub fn false_sharing_lines(total: usize, workers: usize, line_size: usize, s_base: u64) -> usize {
    let line_size = line_size.max(1) as u64;
    let mut shared = BTreeSet::new();
    let mut previous_last: Option<u64> = None;
    for w in 0..workers {
        let lo = split_boundary(total, workers, w);
        let hi = split_boundary(total, workers, w + 1);
        if lo == hi {
            continue;
        }
        let first = (s_base + lo as u64) / line_size;
        let last = (s_base + hi as u64 - 1) / line_size;
        if previous_last == Some(first) {
            shared.insert(first);
        }
        previous_last = Some(last);
    }
    shared.len()
}
