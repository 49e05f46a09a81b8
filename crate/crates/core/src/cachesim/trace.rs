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

use std::io::{BufRead, Write};
use std::ops::Range;

use crate::exec::Geometry;
use crate::path::{search_diagonal_by, split_boundary};
use crate::{Error, MergeInput, Operand, PartitionPoint, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccessKind {
    Read,
    Write,
}

/// One element load or store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MemAccess {
    pub array: Operand,
    pub index: usize,
    pub kind: AccessKind,
}

impl MemAccess {
    pub fn read(array: Operand, index: usize) -> Self {
        MemAccess {
            array,
            index,
            kind: AccessKind::Read,
        }
    }

    pub fn write(index: usize) -> Self {
        MemAccess {
            array: Operand::S,
            index,
            kind: AccessKind::Write,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceVariant {
    Sequential,
    Parallel { workers: usize },
    Segmented { workers: usize, cache_elems: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceOptions {
    /// Before each window of a segmented merge, touch every line that holds
    /// an input element left over from the previous window, so LRU keeps those
    /// lines and evicts the spent ones.
    pub touch: bool,
    /// Line size assumed by the touch pass: one access per line, with the
    /// arrays taken to start on line boundaries.
    pub line_size: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            touch: false,
            line_size: 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub accesses: Vec<MemAccess>,
    /// Access index ranges, one per window (a single group for the
    /// unsegmented variants).
    pub windows: Vec<Range<usize>>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.accesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accesses.is_empty()
    }

    pub fn window(&self, k: usize) -> &[MemAccess] {
        &self.accesses[self.windows[k].clone()]
    }
}

type Step = Vec<MemAccess>;

/// Absolute positions of a sub-grid: `a` and `b` start at these offsets of
/// the full arrays, outputs at `s`.
#[derive(Clone, Copy)]
struct Origin {
    a: usize,
    b: usize,
    s: usize,
}

/// Search steps on diagonal `d` of the `a x b` sub-grid: two reads per probe.
fn search_steps<T: Ord>(a: &[T], b: &[T], origin: Origin, d: usize) -> (PartitionPoint, Vec<Step>) {
    let mut steps = Vec::new();
    let (point, _) = search_diagonal_by(a.len(), b.len(), d, |i, j| {
        steps.push(vec![
            MemAccess::read(Operand::A, origin.a + i),
            MemAccess::read(Operand::B, origin.b + j),
        ]);
        a[i] > b[j]
    });
    (point, steps)
}

/// Merge steps of `len` outputs starting at `start`. The first step loads
/// both heads; each later step stores one output and loads the successor of
/// the element just taken. The losing head stays in a register.
fn merge_steps<T: Ord>(
    a: &[T],
    b: &[T],
    origin: Origin,
    start: PartitionPoint,
    out_lo: usize,
    len: usize,
) -> (Vec<Step>, PartitionPoint) {
    if len == 0 {
        return (Vec::new(), start);
    }
    let (mut i, mut j) = (start.a_off, start.b_off);
    let mut steps = Vec::with_capacity(len + 1);
    let mut heads = Vec::with_capacity(2);
    if i < a.len() {
        heads.push(MemAccess::read(Operand::A, origin.a + i));
    }
    if j < b.len() {
        heads.push(MemAccess::read(Operand::B, origin.b + j));
    }
    steps.push(heads);
    for k in 0..len {
        let mut step = vec![MemAccess::write(origin.s + out_lo + k)];
        let take_a = j == b.len() || (i < a.len() && a[i] <= b[j]);
        let last = k + 1 == len;
        if take_a {
            i += 1;
            if !last && i < a.len() {
                step.push(MemAccess::read(Operand::A, origin.a + i));
            }
        } else {
            j += 1;
            if !last && j < b.len() {
                step.push(MemAccess::read(Operand::B, origin.b + j));
            }
        }
        steps.push(step);
    }
    (steps, PartitionPoint::new(i, j))
}

/// Appends per-worker step lists in round-robin order: step 0 of every
/// worker, then step 1, and so on.
fn interleave(out: &mut Vec<MemAccess>, workers: Vec<Vec<Step>>) {
    let rounds = workers.iter().map(Vec::len).max().unwrap_or(0);
    for r in 0..rounds {
        for steps in &workers {
            if let Some(step) = steps.get(r) {
                out.extend_from_slice(step);
            }
        }
    }
}

/// One partition-then-merge phase over the `a x b` sub-grid producing `len`
/// outputs with `workers` workers. Returns where the path leaves the grid.
fn phase<T: Ord>(
    out: &mut Vec<MemAccess>,
    a: &[T],
    b: &[T],
    origin: Origin,
    len: usize,
    workers: usize,
) -> PartitionPoint {
    let mut searches = Vec::with_capacity(workers);
    let mut merges = Vec::with_capacity(workers);
    let mut end = PartitionPoint::ORIGIN;
    for w in 0..workers {
        let lo = split_boundary(len, workers, w);
        let hi = split_boundary(len, workers, w + 1);
        if lo == hi {
            continue;
        }
        let (start, steps) = if lo == 0 {
            (PartitionPoint::ORIGIN, Vec::new())
        } else {
            search_steps(a, b, origin, lo)
        };
        searches.push(steps);
        let (merge, stop) = merge_steps(a, b, origin, start, lo, hi - lo);
        merges.push(merge);
        end = stop;
    }
    interleave(out, searches);
    interleave(out, merges);
    end
}

fn touch_range(out: &mut Vec<MemAccess>, array: Operand, range: Range<usize>, line_size: usize) {
    for index in range.clone() {
        if index == range.start || index % line_size == 0 {
            out.push(MemAccess::read(array, index));
        }
    }
}

/// The loads and stores a merge variant performs, in a canonical order.
///
/// Parallel workers are serialized round-robin, one step per worker per
/// turn, with all diagonal searches of a phase ahead of its merge steps.
pub fn trace_merge<T: Ord>(
    input: &MergeInput<'_, T>,
    variant: TraceVariant,
    options: TraceOptions,
) -> Result<Trace> {
    let (a, b) = (input.a, input.b);
    let total = input.len();
    let origin = Origin { a: 0, b: 0, s: 0 };
    let mut trace = Trace::default();
    match variant {
        TraceVariant::Sequential => {
            phase(&mut trace.accesses, a, b, origin, total, 1);
            trace.windows.push(0..trace.accesses.len());
        }
        TraceVariant::Parallel { workers } => {
            if workers == 0 {
                return Err(Error::ZeroWorkers);
            }
            phase(&mut trace.accesses, a, b, origin, total, workers);
            trace.windows.push(0..trace.accesses.len());
        }
        TraceVariant::Segmented {
            workers,
            cache_elems,
        } => {
            let geometry = Geometry::new(total, workers, cache_elems)?;
            let span = geometry.window_len;
            let line_size = options.line_size.max(1);
            let mut start = PartitionPoint::ORIGIN;
            let mut previous = start;
            for k in 0..geometry.iterations {
                let first = trace.accesses.len();
                if options.touch && k > 0 {
                    let a_left = start.a_off..(previous.a_off + span).min(a.len());
                    let b_left = start.b_off..(previous.b_off + span).min(b.len());
                    touch_range(&mut trace.accesses, Operand::A, a_left, line_size);
                    touch_range(&mut trace.accesses, Operand::B, b_left, line_size);
                }
                let a_win = &a[start.a_off..(start.a_off + span).min(a.len())];
                let b_win = &b[start.b_off..(start.b_off + span).min(b.len())];
                let window = geometry.window(k);
                let local = Origin {
                    a: start.a_off,
                    b: start.b_off,
                    s: window.start,
                };
                let end = phase(
                    &mut trace.accesses,
                    a_win,
                    b_win,
                    local,
                    window.len(),
                    geometry.workers,
                );
                previous = start;
                start = start.offset_by(end);
                trace.windows.push(first..trace.accesses.len());
            }
        }
    }
    Ok(trace)
}

/// Writes one access per line as `<A|B|S> <index> <r|w>`.
pub fn write_trace<W: Write>(mut w: W, accesses: &[MemAccess]) -> std::io::Result<()> {
    for access in accesses {
        let kind = match access.kind {
            AccessKind::Read => 'r',
            AccessKind::Write => 'w',
        };
        writeln!(w, "{} {} {}", access.array, access.index, kind)?;
    }
    Ok(())
}

/// Parses the format produced by [`write_trace`]. Blank lines are skipped.
pub fn parse_trace<R: BufRead>(r: R) -> Result<Vec<MemAccess>> {
    let mut accesses = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let bad = |reason: String| Error::TraceParse {
            line: n + 1,
            reason,
        };
        let line = line.map_err(|e| bad(e.to_string()))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let [array, index, kind] = fields[..] else {
            return Err(bad(format!("expected 3 fields, found {}", fields.len())));
        };
        let array = match array {
            "A" => Operand::A,
            "B" => Operand::B,
            "S" => Operand::S,
            other => return Err(bad(format!("unknown array `{other}`"))),
        };
        let index = index
            .parse()
            .map_err(|_| bad(format!("bad index `{index}`")))?;
        let kind = match kind {
            "r" => AccessKind::Read,
            "w" => AccessKind::Write,
            other => return Err(bad(format!("unknown access kind `{other}`"))),
        };
        accesses.push(MemAccess { array, index, kind });
    }
    Ok(accesses)
}
