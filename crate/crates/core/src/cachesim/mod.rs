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

//! Trace-driven set-associative cache simulation.
//!
//! [`trace_merge`] turns a merge into the loads and stores it performs,
//! [`simulate`] replays a trace through a cache and splits the misses into
//! compulsory, capacity and conflict misses. Addresses are element-granular:
//! each array gets a base address in a [`Layout`], so arrays whose bases
//! share their low bits can be made to compete for the same sets.

mod cache;
mod trace;
mod verify;

pub use cache::{simulate, CacheConfig, CacheStats, Layout, Policy, Region};
pub use trace::{
    parse_trace, trace_merge, write_trace, AccessKind, MemAccess, Trace, TraceOptions, TraceVariant,
};
pub use verify::{
    false_sharing_lines, lru_touch_overhead, verify_conflict_freedom, ConflictReport,
};
