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

//! Parallel merge-sort and the cache-efficient parallel sort.
//!
//! Both sorts are stable and ping-pong between the input and one scratch
//! buffer of the same length.

use rayon::prelude::*;

use crate::exec::{parallel_merge_into, segmented_parallel_merge_into};
use crate::path::merge_run;
use crate::{Error, MergeInput, PartitionPoint, Result};

/// Runs of up to this many elements are sorted by binary insertion sort.
pub const INSERTION_RUN: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SortVariant {
    Plain,
    CacheEfficient,
}

/// Block structure of a sort.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SortPlan {
    pub variant: SortVariant,
    /// Elements per initial sorted block: [`INSERTION_RUN`] for the plain sort,
    /// `floor(C / 3)` for the cache-efficient one.
    pub block_size: usize,
    pub blocks: usize,
    /// Merge rounds after the blocks are sorted, `ceil(log2(blocks))`.
    pub tree_levels: usize,
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

impl SortPlan {
    pub fn plain(n: usize) -> Self {
        Self::with_blocks(SortVariant::Plain, n, INSERTION_RUN)
    }

    pub fn cache_efficient(n: usize, cache_elems: usize) -> Result<Self> {
        if cache_elems < 3 {
            return Err(Error::CacheTooSmall(cache_elems));
        }
        Ok(Self::with_blocks(
            SortVariant::CacheEfficient,
            n,
            cache_elems / 3,
        ))
    }

    fn with_blocks(variant: SortVariant, n: usize, block_size: usize) -> Self {
        let blocks = n.div_ceil(block_size);
        SortPlan {
            variant,
            block_size,
            blocks,
            tree_levels: ceil_log2(blocks),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SortStats {
    pub plan: SortPlan,
    /// Merge rounds actually performed after the blocks were sorted.
    pub merge_rounds: usize,
    pub partition_comparisons: u64,
    /// Largest scratch buffer allocated, in elements.
    pub aux_elements: usize,
}

/// Stable binary insertion sort.
fn insertion_sort<T: Ord + Copy>(v: &mut [T]) {
    for i in 1..v.len() {
        let x = v[i];
        let pos = v[..i].partition_point(|y| *y <= x);
        v.copy_within(pos..i, pos + 1);
        v[pos] = x;
    }
}

/// Merges the run pairs of width `width` in `src` into `dst`, one pair after
/// another. A trailing unpaired run is copied.
fn merge_pairs<T: Ord + Copy + Send>(src: &[T], dst: &mut [T], width: usize) {
    for (s, mut d) in src.chunks(2 * width).zip(dst.chunks_mut(2 * width)) {
        if s.len() <= width {
            d.copy_from_slice(s);
        } else {
            let (left, right) = s.split_at(width);
            merge_run(left, right, PartitionPoint::ORIGIN, &mut d);
        }
    }
}

/// One merge round. With at least `p` pairs the pairs are spread over the
/// workers as independent sequential merges; otherwise every pair gets all
/// `p` workers through the parallel merge, one pair at a time.
fn merge_round<T: Ord + Copy + Send + Sync>(
    src: &[T],
    dst: &mut [T],
    width: usize,
    p: usize,
) -> Result<u64> {
    let pairs = src.len().div_ceil(2 * width);
    if p == 1 {
        merge_pairs(src, dst, width);
        return Ok(0);
    }
    if pairs >= p {
        let group = pairs.div_ceil(p) * 2 * width;
        src.par_chunks(group)
            .zip(dst.par_chunks_mut(group))
            .for_each(|(s, d)| merge_pairs(s, d, width));
        return Ok(0);
    }
    let mut comparisons = 0;
    for (s, d) in src.chunks(2 * width).zip(dst.chunks_mut(2 * width)) {
        if s.len() <= width {
            d.copy_from_slice(s);
        } else {
            let (left, right) = s.split_at(width);
            comparisons +=
                parallel_merge_into(&MergeInput::new(left, right), d, p)?.partition_comparisons;
        }
    }
    Ok(comparisons)
}

/// Sorts `data` using `scratch` (same length) as the second buffer. Returns
/// `(rounds, partition comparisons)`.
fn merge_sort_with<T: Ord + Copy + Send + Sync>(
    data: &mut [T],
    scratch: &mut [T],
    p: usize,
) -> Result<(usize, u64)> {
    debug_assert_eq!(data.len(), scratch.len());
    let n = data.len();
    if n <= INSERTION_RUN {
        insertion_sort(data);
        return Ok((0, 0));
    }
    let runs = n.div_ceil(INSERTION_RUN);
    if p == 1 {
        data.chunks_mut(INSERTION_RUN).for_each(insertion_sort);
    } else {
        let group = runs.div_ceil(p) * INSERTION_RUN;
        data.par_chunks_mut(group)
            .for_each(|g| g.chunks_mut(INSERTION_RUN).for_each(insertion_sort));
    }

    let (mut rounds, mut comparisons) = (0, 0);
    let mut width = INSERTION_RUN;
    let mut in_data = true;
    while width < n {
        comparisons += if in_data {
            merge_round(data, scratch, width, p)?
        } else {
            merge_round(scratch, data, width, p)?
        };
        in_data = !in_data;
        width *= 2;
        rounds += 1;
    }
    if !in_data {
        data.copy_from_slice(scratch);
    }
    Ok((rounds, comparisons))
}

/// Stable parallel merge-sort with `p` workers.
pub fn parallel_merge_sort<T>(data: &mut [T], p: usize) -> Result<SortStats>
where
    T: Ord + Copy + Send + Sync,
{
    if p == 0 {
        return Err(Error::ZeroWorkers);
    }
    let mut scratch = data.to_vec();
    let (merge_rounds, partition_comparisons) = merge_sort_with(data, &mut scratch, p)?;
    Ok(SortStats {
        plan: SortPlan::plain(data.len()),
        merge_rounds,
        partition_comparisons,
        aux_elements: scratch.len(),
    })
}

/// Stable sort for a cache of `cache_elems` elements.
///
/// Blocks of `floor(C / 3)` elements are sorted one at a time, each with all
/// `p` workers. The sorted blocks are then merged pairwise, level by level,
/// with the segmented parallel merge; pairs within a level are merged one
/// after another so only one pair's window is live at a time.
pub fn cache_efficient_parallel_sort<T>(
    data: &mut [T],
    p: usize,
    cache_elems: usize,
) -> Result<SortStats>
where
    T: Ord + Copy + Send + Sync,
{
    if p == 0 {
        return Err(Error::ZeroWorkers);
    }
    let plan = SortPlan::cache_efficient(data.len(), cache_elems)?;
    let mut scratch = data.to_vec();
    let mut partition_comparisons = 0;

    for (block, aux) in data
        .chunks_mut(plan.block_size)
        .zip(scratch.chunks_mut(plan.block_size))
    {
        partition_comparisons += merge_sort_with(block, aux, p)?.1;
    }

    let n = data.len();
    let mut width = plan.block_size;
    let mut in_data = true;
    let mut merge_rounds = 0;
    while width < n {
        let (src, dst): (&[T], &mut [T]) = if in_data {
            (data, &mut scratch)
        } else {
            (&scratch, data)
        };
        for (s, d) in src.chunks(2 * width).zip(dst.chunks_mut(2 * width)) {
            if s.len() <= width {
                d.copy_from_slice(s);
            } else {
                let (left, right) = s.split_at(width);
                let input = MergeInput::new(left, right);
                partition_comparisons +=
                    segmented_parallel_merge_into(&input, d, p, cache_elems)?.partition_comparisons;
            }
        }
        in_data = !in_data;
        width *= 2;
        merge_rounds += 1;
    }
    if !in_data {
        data.copy_from_slice(&scratch);
    }
    Ok(SortStats {
        plan,
        merge_rounds,
        partition_comparisons,
        aux_elements: scratch.len(),
    })
}
