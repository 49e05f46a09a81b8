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

//! Seeded generation of sorted input pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Independent uniform keys, optionally drawn from `[0, key_range)`.
    Uniform,
    /// One key repeated everywhere.
    AllEqual,
    /// Every key of `A` above every key of `B`.
    DisjointRanges,
    /// `A` holds even keys, `B` odd keys, alternating in the merge.
    Interleaved,
}

impl Distribution {
    pub const ALL: [Distribution; 4] = [
        Distribution::Uniform,
        Distribution::AllEqual,
        Distribution::DisjointRanges,
        Distribution::Interleaved,
    ];
}

const HALF: i64 = 1 << 40;

fn sorted(rng: &mut ChaCha8Rng, len: usize, lo: i64, hi: i64) -> Vec<i64> {
    let mut v: Vec<i64> = (0..len).map(|_| rng.gen_range(lo..hi)).collect();
    v.sort_unstable();
    v
}

/// Two sorted arrays of `size_a` and `size_b` keys. Equal seeds give equal
/// arrays.
pub fn generate(
    size_a: usize,
    size_b: usize,
    seed: u64,
    distribution: Distribution,
    key_range: Option<u64>,
) -> (Vec<i64>, Vec<i64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match distribution {
        Distribution::Uniform => {
            let (lo, hi) = match key_range {
                Some(r) => (0, r.clamp(1, i64::MAX as u64) as i64),
                None => (i64::MIN, i64::MAX),
            };
            let a = sorted(&mut rng, size_a, lo, hi);
            let b = sorted(&mut rng, size_b, lo, hi);
            (a, b)
        }
        Distribution::AllEqual => {
            let key = rng.gen_range(-HALF..HALF);
            (vec![key; size_a], vec![key; size_b])
        }
        Distribution::DisjointRanges => {
            let b = sorted(&mut rng, size_b, -HALF, 0);
            let a = sorted(&mut rng, size_a, 0, HALF);
            (a, b)
        }
        Distribution::Interleaved => {
            let base = 2 * rng.gen_range(-HALF..HALF);
            let a = (0..size_a as i64).map(|i| base + 2 * i).collect();
            let b = (0..size_b as i64).map(|i| base + 2 * i + 1).collect();
            (a, b)
        }
    }
}

/// `len` keys in random order, for the sort benchmarks.
pub fn unsorted(len: usize, seed: u64, key_range: Option<u64>) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match key_range {
        Some(r) => {
            let hi = r.clamp(1, i64::MAX as u64) as i64;
            (0..len).map(|_| rng.gen_range(0..hi)).collect()
        }
        None => (0..len).map(|_| rng.gen()).collect(),
    }
}
