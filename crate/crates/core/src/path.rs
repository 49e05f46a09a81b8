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

//! Merge Path geometry.
//!
//! Conventions: indices are 0-based and a diagonal `d` is identified by the
//! number of outputs already produced, so the path starts on diagonal 0 and
//! ends on diagonal `|A| + |B|`. Ties go to `A`: the merge moves right
//! (consumes `B`) only when `A[i] > B[j]`, which makes every merge here stable
//! with `A` as the left operand.

use crate::sink::Sink;
use crate::{Error, Operand, Result};

/// The two sorted operands of a merge.
#[derive(Debug)]
pub struct MergeInput<'a, T> {
    pub a: &'a [T],
    pub b: &'a [T],
}

impl<T> Clone for MergeInput<'_, T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for MergeInput<'_, T> {}

impl<'a, T: Ord> MergeInput<'a, T> {
    /// Wraps two slices without checking that they are sorted.
    pub fn new(a: &'a [T], b: &'a [T]) -> Self {
        MergeInput { a, b }
    }

    /// Wraps two slices after checking both are sorted non-decreasing.
    pub fn validated(a: &'a [T], b: &'a [T]) -> Result<Self> {
        let input = MergeInput { a, b };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        for (operand, side) in [(Operand::A, self.a), (Operand::B, self.b)] {
            if let Some(index) = side.windows(2).position(|w| w[1] < w[0]) {
                return Err(Error::Unsorted {
                    operand,
                    index: index + 1,
                });
            }
        }
        Ok(())
    }

    /// Length of the merge path, `|A| + |B|`.
    pub fn len(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Where the merge path crosses a diagonal: how many elements of `A` and of
/// `B` precede output position `a_off + b_off`.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize,
)]
pub struct PartitionPoint {
    pub a_off: usize,
    pub b_off: usize,
}

impl PartitionPoint {
    pub const ORIGIN: PartitionPoint = PartitionPoint { a_off: 0, b_off: 0 };

    pub const fn new(a_off: usize, b_off: usize) -> Self {
        PartitionPoint { a_off, b_off }
    }

    /// The diagonal this point lies on.
    pub const fn diagonal(&self) -> usize {
        self.a_off + self.b_off
    }

    /// True when the point is a valid split of the stable merge of `input`.
    pub fn is_on_path<T: Ord>(&self, input: &MergeInput<'_, T>) -> bool {
        let (i, j) = (self.a_off, self.b_off);
        let (a, b) = (input.a, input.b);
        if i > a.len() || j > b.len() {
            return false;
        }
        let upper = i == 0 || j == b.len() || a[i - 1] <= b[j];
        let lower = j == 0 || i == a.len() || b[j - 1] < a[i];
        upper && lower
    }

    pub(crate) fn offset_by(&self, local: PartitionPoint) -> PartitionPoint {
        PartitionPoint::new(self.a_off + local.a_off, self.b_off + local.b_off)
    }
}

/// `p + 1` partition points on the diagonals `floor(i * N / p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSet {
    pub points: Vec<PartitionPoint>,
}

impl PartitionSet {
    pub fn workers(&self) -> usize {
        self.points.len() - 1
    }

    /// `(start, length)` of every segment in path order.
    pub fn segments(&self) -> impl Iterator<Item = (PartitionPoint, usize)> + '_ {
        self.points
            .windows(2)
            .map(|w| (w[0], w[1].diagonal() - w[0].diagonal()))
    }
}

/// One step of the merge path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    /// Consume the next element of `A`.
    Down,
    /// Consume the next element of `B`.
    Right,
}

/// Entry `(i, j)` of the merge matrix: `A[i] > B[j]`.
///
/// # Panics
///
/// If `i >= |A|` or `j >= |B|`.
pub fn merge_matrix_entry<T: Ord>(input: &MergeInput<'_, T>, i: usize, j: usize) -> bool {
    input.a[i] > input.b[j]
}

/// First index `d` of diagonal `d` that is searched, and one past the last.
#[inline]
pub(crate) fn diagonal_range(a_len: usize, b_len: usize, d: usize) -> (usize, usize) {
    (d.saturating_sub(b_len), d.min(a_len))
}

/// Binary search for the path crossing of diagonal `d` on an `a_len x b_len`
/// grid, given a probe for the merge matrix entry `(i, j)`.
///
/// Along a diagonal the matrix entries switch from 0 to 1 at most once, and the
/// path crosses the diagonal at that switch. Returns the crossing and the
/// number of probes made, which never exceeds `floor(log2(min(a_len, b_len))) + 1`.
///
/// # Panics
///
/// If `d > a_len + b_len`.
pub fn search_diagonal_by<F>(
    a_len: usize,
    b_len: usize,
    d: usize,
    mut a_greater: F,
) -> (PartitionPoint, usize)
where
    F: FnMut(usize, usize) -> bool,
{
    assert!(
        d <= a_len + b_len,
        "diagonal {d} is outside a merge path of length {}",
        a_len + b_len
    );
    let (mut lo, mut hi) = diagonal_range(a_len, b_len, d);
    let mut probes = 0;
    // The answer lies in [lo, hi]. Entry (mid, d - mid - 1) set means B[d-mid-1]
    // is consumed before A[mid], so at most `mid` elements of A precede d.
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        probes += 1;
        if a_greater(mid, d - mid - 1) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    (PartitionPoint::new(lo, d - lo), probes)
}

/// Intersection of the merge path with diagonal `d`, plus the number of
/// element comparisons spent finding it.
pub fn diagonal_search_counted<T: Ord>(
    input: &MergeInput<'_, T>,
    d: usize,
) -> (PartitionPoint, usize) {
    let (a, b) = (input.a, input.b);
    search_diagonal_by(a.len(), b.len(), d, |i, j| a[i] > b[j])
}

/// Intersection of the merge path with diagonal `d`.
pub fn diagonal_search<T: Ord>(input: &MergeInput<'_, T>, d: usize) -> PartitionPoint {
    diagonal_search_counted(input, d).0
}

/// The `k`-th of `parts` equispaced boundaries of `[0, total]`.
#[inline]
pub(crate) fn split_boundary(total: usize, parts: usize, k: usize) -> usize {
    ((k as u128 * total as u128) / parts as u128) as usize
}

/// Splits the merge path into `p` segments whose lengths differ by at most one.
pub fn partition<T: Ord>(input: &MergeInput<'_, T>, p: usize) -> Result<PartitionSet> {
    if p == 0 {
        return Err(Error::ZeroWorkers);
    }
    let total = input.len();
    let points = (0..=p)
        .map(|k| diagonal_search(input, split_boundary(total, p, k)))
        .collect();
    Ok(PartitionSet { points })
}

/// Merges `out.len()` steps of the path starting at `start`, returning where
/// the path ends. Inputs may be any sub-grid that contains those steps.
#[inline]
pub(crate) fn merge_run<T: Ord + Copy, O: Sink<T>>(
    a: &[T],
    b: &[T],
    start: PartitionPoint,
    out: &mut O,
) -> PartitionPoint {
    let len = out.len();
    let (mut i, mut j) = (start.a_off, start.b_off);
    let mut k = 0;
    while k < len && i < a.len() && j < b.len() {
        if b[j] < a[i] {
            out.put(k, b[j]);
            j += 1;
        } else {
            out.put(k, a[i]);
            i += 1;
        }
        k += 1;
    }
    while k < len && i < a.len() {
        out.put(k, a[i]);
        i += 1;
        k += 1;
    }
    while k < len {
        out.put(k, b[j]);
        j += 1;
        k += 1;
    }
    PartitionPoint::new(i, j)
}

/// The `length` outputs of the stable merge starting at `start`.
pub fn sequential_merge<T: Ord + Copy + Send>(
    input: &MergeInput<'_, T>,
    start: PartitionPoint,
    length: usize,
) -> Result<Vec<T>> {
    if !start.is_on_path(input) {
        return Err(Error::InvalidPartitionPoint {
            a_off: start.a_off,
            b_off: start.b_off,
        });
    }
    if start.diagonal() + length > input.len() {
        return Err(Error::PathOverrun {
            start: start.diagonal(),
            length,
            total: input.len(),
        });
    }
    let Some(&first) = input.a.first().or(input.b.first()) else {
        return Ok(Vec::new());
    };
    let mut out = vec![first; length];
    merge_run(input.a, input.b, start, &mut out.as_mut_slice());
    Ok(out)
}

/// Walks the whole merge path step by step.
pub fn path_trace<T: Ord>(input: &MergeInput<'_, T>) -> Vec<Move> {
    let (a, b) = (input.a, input.b);
    let (mut i, mut j) = (0, 0);
    let mut moves = Vec::with_capacity(input.len());
    while i < a.len() || j < b.len() {
        let right = i == a.len() || (j < b.len() && a[i] > b[j]);
        if right {
            moves.push(Move::Right);
            j += 1;
        } else {
            moves.push(Move::Down);
            i += 1;
        }
    }
    moves
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Element;
    use Move::{Down as D, Right as R};

    fn input<'a>(a: &'a [i64], b: &'a [i64]) -> MergeInput<'a, i64> {
        MergeInput::new(a, b)
    }

    #[test]
    fn matrix_entries() {
        assert!(merge_matrix_entry(&input(&[5], &[3]), 0, 0));
        assert!(!merge_matrix_entry(&input(&[3], &[3]), 0, 0));
        let m = input(&[1, 3, 5], &[2, 4]);
        let rows: Vec<Vec<bool>> = (0..3)
            .map(|i| (0..2).map(|j| merge_matrix_entry(&m, i, j)).collect())
            .collect();
        assert_eq!(
            rows,
            vec![vec![false, false], vec![true, false], vec![true, true]]
        );
    }

    #[test]
    #[should_panic]
    fn matrix_entry_out_of_range_panics() {
        merge_matrix_entry(&input(&[1], &[2]), 1, 0);
    }

    #[test]
    fn diagonal_search_examples() {
        assert_eq!(
            diagonal_search(&input(&[], &[7, 8]), 1),
            PartitionPoint::new(0, 1)
        );
        assert_eq!(
            diagonal_search(&input(&[1, 2], &[3, 4]), 2),
            PartitionPoint::new(2, 0)
        );
        assert_eq!(
            diagonal_search(&input(&[1, 3, 5, 7], &[2, 4, 6, 8]), 4),
            PartitionPoint::new(2, 2)
        );
        assert_eq!(
            diagonal_search(&input(&[2, 2, 2], &[2, 2]), 3),
            PartitionPoint::new(3, 0)
        );
    }

    #[test]
    fn diagonal_search_endpoints() {
        let m = input(&[4, 9], &[1, 5, 6]);
        assert_eq!(diagonal_search(&m, 0), PartitionPoint::ORIGIN);
        assert_eq!(diagonal_search(&m, 5), PartitionPoint::new(2, 3));
        assert_eq!(diagonal_search_counted(&m, 0).1, 0);
    }

    #[test]
    #[should_panic]
    fn diagonal_past_end_panics() {
        diagonal_search(&input(&[1], &[2]), 3);
    }

    #[test]
    fn partition_examples() {
        let m = input(&[1, 3, 5, 7], &[2, 4, 6, 8]);
        assert_eq!(
            partition(&m, 1).unwrap().points,
            vec![PartitionPoint::ORIGIN, PartitionPoint::new(4, 4)]
        );
        assert_eq!(
            partition(&m, 2).unwrap().points,
            vec![
                PartitionPoint::new(0, 0),
                PartitionPoint::new(2, 2),
                PartitionPoint::new(4, 4)
            ]
        );
        let one_sided = input(&[1, 2, 3, 4, 5], &[]);
        let set = partition(&one_sided, 2).unwrap();
        assert_eq!(
            set.points,
            vec![
                PartitionPoint::new(0, 0),
                PartitionPoint::new(2, 0),
                PartitionPoint::new(5, 0)
            ]
        );
        assert_eq!(
            set.segments().map(|(_, len)| len).collect::<Vec<_>>(),
            vec![2, 3]
        );
        assert_eq!(partition(&m, 0), Err(Error::ZeroWorkers));
    }

    #[test]
    fn sequential_merge_examples() {
        let m = input(&[1, 3], &[2, 4]);
        assert_eq!(
            sequential_merge(&m, PartitionPoint::ORIGIN, 4).unwrap(),
            vec![1, 2, 3, 4]
        );
        assert_eq!(
            sequential_merge(&m, PartitionPoint::new(1, 1), 2).unwrap(),
            vec![3, 4]
        );
        assert_eq!(
            sequential_merge(&m, PartitionPoint::new(1, 1), 0).unwrap(),
            vec![]
        );

        let a = [Element::new(2, 0), Element::new(2, 1)];
        let b = [Element::new(2, 100)];
        let merged = sequential_merge(&MergeInput::new(&a, &b), PartitionPoint::ORIGIN, 3).unwrap();
        let tags: Vec<u32> = merged.iter().map(|e| e.tag).collect();
        assert_eq!(tags, vec![0, 1, 100]);
    }

    #[test]
    fn sequential_merge_errors() {
        let m = input(&[1, 3], &[2, 4]);
        assert_eq!(
            sequential_merge(&m, PartitionPoint::new(1, 1), 3),
            Err(Error::PathOverrun {
                start: 2,
                length: 3,
                total: 4
            })
        );
        assert_eq!(
            sequential_merge(&m, PartitionPoint::new(2, 0), 1),
            Err(Error::InvalidPartitionPoint { a_off: 2, b_off: 0 })
        );
    }

    #[test]
    fn path_trace_examples() {
        assert_eq!(path_trace(&input(&[1], &[2])), vec![D, R]);
        assert_eq!(path_trace(&input(&[], &[1, 2])), vec![R, R]);
        assert_eq!(
            path_trace(&input(&[1, 3, 5, 7], &[2, 4, 6, 8])),
            vec![D, R, D, R, D, R, D, R]
        );
    }

    #[test]
    fn validation_reports_first_descent() {
        assert_eq!(
            MergeInput::validated(&[1i64, 2, 2, 1][..], &[][..]).unwrap_err(),
            Error::Unsorted {
                operand: Operand::A,
                index: 3
            }
        );
        assert!(MergeInput::validated(&[1i64, 1][..], &[0i64, 5][..]).is_ok());
    }
}
