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

//! Parallel merging and sorting built on Merge Path partitioning.
//!
//! The merge of two sorted arrays `A` and `B` is a staircase path on the
//! `|A| x |B|` grid: a downward step consumes an element of `A`, a rightward
//! step consumes an element of `B`. The path crosses every anti-diagonal of the
//! grid exactly once, so the point where it crosses diagonal `d` (how many
//! elements of each array precede output position `d`) can be found by a binary
//! search along that diagonal without merging anything. Equispaced diagonals
//! give equal-sized, independent merge jobs.
//!
//! * [`path`]: single-threaded geometry (merge matrix, diagonal search,
//!   partitioning, segment merge, path trace).
//! * [`exec`]: the parallel merge and the cache-windowed segmented parallel
//!   merge.
//! * [`sort`]: parallel merge-sort and the cache-efficient parallel sort.
//! * [`cachesim`]: a trace-driven set-associative cache simulator used to check
//!   the memory behaviour of the merges.

pub mod cachesim;
mod element;
mod error;
pub mod exec;
pub mod path;
pub mod sink;
pub mod sort;

pub use element::Element;
pub use error::{Error, Operand, Result};
pub use exec::{
    parallel_merge, parallel_merge_into, partition_comparisons, plan_segments,
    segmented_parallel_merge, segmented_parallel_merge_into, ComparisonCounts, MergeReport,
    SegmentPlan, WindowUsage,
};
pub use path::{
    diagonal_search, merge_matrix_entry, partition, path_trace, sequential_merge, MergeInput, Move,
    PartitionPoint, PartitionSet,
};
pub use sort::{
    cache_efficient_parallel_sort, parallel_merge_sort, SortPlan, SortStats, SortVariant,
};
