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

//! Property tests against oracles that share no code with the library.

use mergepath::exec::{parallel_merge_checksum, segmented_parallel_merge_checksum};
use mergepath::path::diagonal_search_counted;
use mergepath::sink::Checksum;
use mergepath::*;
use proptest::prelude::*;

/// Sorted, tagged operands: `A` tags are `0..|A|`, `B` tags start at 1_000_000.
fn operands(max_len: usize, key_range: i64) -> impl Strategy<Value = (Vec<Element>, Vec<Element>)> {
    let side = move || prop::collection::vec(0..key_range, 0..=max_len);
    (side(), side()).prop_map(|(mut a, mut b)| {
        a.sort_unstable();
        b.sort_unstable();
        (
            a.into_iter()
                .enumerate()
                .map(|(i, k)| Element::new(k, i as u32))
                .collect(),
            b.into_iter()
                .enumerate()
                .map(|(i, k)| Element::new(k, 1_000_000 + i as u32))
                .collect(),
        )
    })
}

fn key_range() -> impl Strategy<Value = i64> {
    prop_oneof![Just(1i64), Just(3), Just(20), Just(1_000_000)]
}

fn raw(v: &[Element]) -> Vec<(i64, u32)> {
    v.iter().map(Element::raw).collect()
}

/// Stable merge as a stable sort of `A ++ B`.
fn oracle_merge(a: &[Element], b: &[Element]) -> Vec<Element> {
    let mut all: Vec<Element> = a.iter().chain(b).copied().collect();
    all.sort_by_key(|e| e.key);
    all
}

/// Every split of diagonal `d` satisfying the stable split conditions.
fn linear_scan(a: &[Element], b: &[Element], d: usize) -> Vec<PartitionPoint> {
    (0..=d)
        .filter(|&i| i <= a.len() && d - i <= b.len())
        .map(|i| (i, d - i))
        .filter(|&(i, j)| {
            let upper = i == 0 || j == b.len() || a[i - 1].key <= b[j].key;
            let lower = j == 0 || i == a.len() || b[j - 1].key < a[i].key;
            upper && lower
        })
        .map(|(i, j)| PartitionPoint::new(i, j))
        .collect()
}

fn search_bound(a: usize, b: usize) -> usize {
    ((a.min(b) + 1) as f64).log2().floor() as usize + 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cross_diagonals_are_non_increasing((a, b) in key_range().prop_flat_map(|r| operands(32, r))) {
        let m = MergeInput::new(&a[..], &b[..]);
        if a.is_empty() || b.is_empty() {
            return Ok(());
        }
        for c in 0..(a.len() + b.len() - 1) {
            // walk the diagonal i + j = c from lower-left to upper-right
            let entries: Vec<bool> = (0..=c)
                .rev()
                .filter(|&i| i < a.len() && c - i < b.len())
                .map(|i| merge_matrix_entry(&m, i, c - i))
                .collect();
            prop_assert!(entries.windows(2).all(|w| w[0] >= w[1]), "diagonal {}: {:?}", c, entries);
        }
    }

    #[test]
    fn diagonal_search_matches_linear_scan((a, b) in key_range().prop_flat_map(|r| operands(64, r))) {
        let m = MergeInput::new(&a[..], &b[..]);
        let merged = oracle_merge(&a, &b);
        for d in 0..=a.len() + b.len() {
            let (point, comparisons) = diagonal_search_counted(&m, d);
            let scan = linear_scan(&a, &b, d);
            prop_assert_eq!(scan.len(), 1);
            prop_assert_eq!(point, scan[0]);
            let from_a = merged[..d].iter().filter(|e| e.tag < 1_000_000).count();
            prop_assert_eq!(point, PartitionPoint::new(from_a, d - from_a));
            prop_assert!(comparisons <= search_bound(a.len(), b.len()));
        }
    }

    #[test]
    fn segments_concatenate_to_the_merge(
        (a, b) in key_range().prop_flat_map(|r| operands(64, r)),
        p in 1usize..20,
    ) {
        let m = MergeInput::new(&a[..], &b[..]);
        let set = partition(&m, p).unwrap();
        prop_assert_eq!(set.points.len(), p + 1);
        let n = a.len() + b.len();
        for (k, point) in set.points.iter().enumerate() {
            prop_assert_eq!(point.diagonal(), k * n / p);
        }
        prop_assert!(set.points.windows(2).all(|w| w[0].a_off <= w[1].a_off && w[0].b_off <= w[1].b_off));
        let lengths: Vec<usize> = set.segments().map(|(_, len)| len).collect();
        prop_assert!(lengths.iter().max().unwrap() - lengths.iter().min().unwrap() <= 1);
        let mut joined = Vec::new();
        for (start, len) in set.segments() {
            joined.extend(sequential_merge(&m, start, len).unwrap());
        }
        prop_assert_eq!(raw(&joined), raw(&oracle_merge(&a, &b)));
    }

    #[test]
    fn path_trace_walks_the_diagonals((a, b) in key_range().prop_flat_map(|r| operands(32, r))) {
        let m = MergeInput::new(&a[..], &b[..]);
        let moves = path_trace(&m);
        prop_assert_eq!(moves.len(), a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        for (step, mv) in moves.iter().enumerate() {
            match mv {
                Move::Down => i += 1,
                Move::Right => j += 1,
            }
            prop_assert_eq!(i + j, step + 1);
            prop_assert_eq!(diagonal_search(&m, step + 1), PartitionPoint::new(i, j));
        }
        prop_assert_eq!((i, j), (a.len(), b.len()));
    }

    #[test]
    fn parallel_merges_match_oracle(
        (a, b) in key_range().prop_flat_map(|r| operands(300, r)),
        p in 1usize..17,
        cache in prop_oneof![Just(3usize), Just(12), Just(13), Just(48), Just(3072)],
    ) {
        let m = MergeInput::new(&a[..], &b[..]);
        let expected = raw(&oracle_merge(&a, &b));
        let n = a.len() + b.len();

        let mut out = vec![Element::default(); n];
        let report = parallel_merge_into(&m, &mut out, p).unwrap();
        prop_assert_eq!(raw(&out), expected.clone());
        let bound = (p as u64 - 1) * search_bound(a.len(), b.len()) as u64;
        prop_assert!(report.partition_comparisons <= bound);
        prop_assert_eq!(partition_comparisons(&report).merging, n as u64);

        let plan = plan_segments(&m, p, cache).unwrap();
        let mut out = vec![Element::default(); n];
        let report = segmented_parallel_merge_into(&m, &mut out, p, cache).unwrap();
        prop_assert_eq!(raw(&out), expected.clone());
        prop_assert_eq!(report.windows.len(), plan.iterations);
        let window_bound = ((plan.window_len + 1) as f64).log2().floor() as u64 + 2;
        prop_assert!(report.partition_comparisons <= (plan.iterations * plan.workers) as u64 * window_bound);
        for (k, window) in report.windows.iter().enumerate() {
            prop_assert_eq!(window.start, plan.starting_points[k]);
            prop_assert!(window.a_consumed() <= plan.window_len);
            prop_assert!(window.b_consumed() <= plan.window_len);
            prop_assert!(window.a_available <= plan.window_len && window.b_available <= plan.window_len);
        }

        let checksum = Checksum::of(&out);
        prop_assert_eq!(parallel_merge_checksum(&m, p).unwrap().0, checksum);
        prop_assert_eq!(segmented_parallel_merge_checksum(&m, p, cache).unwrap().0, checksum);
    }

    #[test]
    fn plan_ranges_tile_each_window(total in 0usize..500, p in 1usize..12, cache in 3usize..60) {
        let a: Vec<i64> = (0..total as i64).collect();
        let m = MergeInput::new(&a[..], &[][..]);
        let plan = plan_segments(&m, p, cache).unwrap();
        prop_assert_eq!(plan.window_len, cache / 3);
        prop_assert_eq!(plan.workers, p.min(cache / 3));
        prop_assert_eq!(plan.iterations, total.div_ceil(cache / 3));
        let mut covered = 0;
        for k in 0..plan.iterations {
            let window = plan.window(k);
            prop_assert_eq!(window.start, covered);
            let mut at = window.start;
            let ranges = plan.worker_ranges(k);
            let lens: Vec<usize> = ranges.iter().map(|r| r.len()).collect();
            prop_assert!(lens.iter().max().unwrap() - lens.iter().min().unwrap() <= 1);
            for r in ranges {
                prop_assert_eq!(r.start, at);
                at = r.end;
            }
            prop_assert_eq!(at, window.end);
            covered = window.end;
        }
        prop_assert_eq!(covered, total);
        for w in plan.starting_points.windows(2) {
            prop_assert_eq!(w[1].diagonal(), (w[0].diagonal() + plan.window_len).min(total));
        }
    }

    #[test]
    fn sorts_match_stable_sort(
        keys in prop::collection::vec(0i64..50, 0..3000),
        p in prop_oneof![Just(1usize), Just(2), Just(3), Just(4), Just(8)],
        cache in prop_oneof![Just(12usize), Just(48), Just(3072)],
    ) {
        let data: Vec<Element> = keys.iter().enumerate().map(|(t, &k)| Element::new(k, t as u32)).collect();
        let mut expected = data.clone();
        expected.sort_by_key(|e| e.key);

        let mut plain = data.clone();
        let stats = parallel_merge_sort(&mut plain, p).unwrap();
        prop_assert_eq!(raw(&plain), raw(&expected));
        prop_assert_eq!(stats.merge_rounds, stats.plan.tree_levels);
        prop_assert!(stats.aux_elements <= data.len());

        let mut cached = data.clone();
        let stats = cache_efficient_parallel_sort(&mut cached, p, cache).unwrap();
        prop_assert_eq!(raw(&cached), raw(&expected));
        prop_assert_eq!(stats.plan.block_size, cache / 3);
        prop_assert_eq!(stats.merge_rounds, stats.plan.tree_levels);
        prop_assert!(stats.aux_elements <= data.len());
    }
}

#[test]
fn worst_case_for_equal_split() {
    let a: Vec<i64> = (1000..2000).collect();
    let b: Vec<i64> = (0..1000).collect();
    let m = MergeInput::new(&a[..], &b[..]);
    let expected: Vec<i64> = (0..2000).collect();
    for p in [1, 2, 3, 7, 64] {
        assert_eq!(parallel_merge(&m, p).unwrap(), expected);
        assert_eq!(segmented_parallel_merge(&m, p, 48).unwrap(), expected);
    }
}

#[test]
fn single_window_equals_parallel_merge() {
    let a: Vec<i64> = (0..300).map(|x| x * 3 % 101).collect::<Vec<_>>();
    let mut a = a;
    a.sort_unstable();
    let b: Vec<i64> = (0..200).map(|x| x / 2).collect();
    let m = MergeInput::new(&a[..], &b[..]);
    let n = a.len() + b.len();
    let report = segmented_parallel_merge_into(&m, &mut vec![0; n], 4, 3 * n).unwrap();
    assert_eq!(report.windows.len(), 1);
    assert_eq!(
        segmented_parallel_merge(&m, 4, 3 * n).unwrap(),
        parallel_merge(&m, 4).unwrap()
    );
}

#[test]
fn merges_on_a_multithreaded_pool() {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a: Vec<i64> = (0..50_000).map(|x| x * 2).collect();
    let b: Vec<i64> = (0..30_000).map(|x| x * 3).collect();
    let m = MergeInput::new(&a[..], &b[..]);
    let mut expected: Vec<i64> = a.iter().chain(&b).copied().collect();
    expected.sort();
    pool.install(|| {
        for p in [2, 4, 8] {
            assert_eq!(parallel_merge(&m, p).unwrap(), expected);
            assert_eq!(segmented_parallel_merge(&m, p, 3 * 1024).unwrap(), expected);
            let mut v: Vec<i64> = expected.iter().rev().copied().collect();
            parallel_merge_sort(&mut v, p).unwrap();
            assert_eq!(v, expected);
            let mut v: Vec<i64> = expected.iter().rev().copied().collect();
            cache_efficient_parallel_sort(&mut v, p, 3 * 1024).unwrap();
            assert_eq!(v, expected);
        }
    });
}

#[test]
fn validation_catches_unsorted_operands() {
    let err = MergeInput::validated(&[1i64, 2][..], &[5i64, 4][..]).unwrap_err();
    assert_eq!(
        err,
        Error::Unsorted {
            operand: Operand::B,
            index: 1
        }
    );
}
