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

//! Output sinks for the merge kernels.
//!
//! A merge writes its output through a [`Sink`], which the parallel drivers
//! split into disjoint chunks, one per worker. A mutable slice is the normal
//! sink. [`Checksum`] folds each element into a position-dependent hash instead
//! of storing it, which measures a merge without the write-back traffic.

use crate::Element;

pub trait Sink<T>: Send + Sized {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Splits into `[0, mid)` and `[mid, len)`.
    fn split_at(self, mid: usize) -> (Self, Self);

    /// Stores `value` at position `index` of this chunk.
    fn put(&mut self, index: usize, value: T);
}

impl<T: Send> Sink<T> for &mut [T] {
    fn len(&self) -> usize {
        <[T]>::len(self)
    }

    fn split_at(self, mid: usize) -> (Self, Self) {
        self.split_at_mut(mid)
    }

    #[inline]
    fn put(&mut self, index: usize, value: T) {
        self[index] = value;
    }
}

/// Values that can be folded into a [`Checksum`].
pub trait Fingerprint {
    fn fingerprint(&self) -> u64;
}

impl Fingerprint for i64 {
    fn fingerprint(&self) -> u64 {
        *self as u64
    }
}

impl Fingerprint for Element {
    fn fingerprint(&self) -> u64 {
        (self.key as u64) ^ (u64::from(self.tag)).rotate_left(40)
    }
}

#[inline]
fn mix(position: usize, value: u64) -> u64 {
    // splitmix64 finalizer over (position, value)
    let mut z = value
        .wrapping_add((position as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An order-sensitive checksum over a window of output positions.
///
/// Chunks produced by [`Sink::split_at`] accumulate independently; adding
/// their [`Checksum::value`]s gives the checksum of the whole output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checksum {
    offset: usize,
    len: usize,
    acc: u64,
}

impl Checksum {
    pub fn new(len: usize) -> Self {
        Checksum {
            offset: 0,
            len,
            acc: 0,
        }
    }

    pub fn value(&self) -> u64 {
        self.acc
    }

    /// Checksum of an already materialized output.
    pub fn of<T: Fingerprint>(values: &[T]) -> u64 {
        values.iter().enumerate().fold(0u64, |acc, (i, v)| {
            acc.wrapping_add(mix(i, v.fingerprint()))
        })
    }

    pub fn combine<I: IntoIterator<Item = Checksum>>(parts: I) -> u64 {
        parts
            .into_iter()
            .fold(0u64, |acc, c| acc.wrapping_add(c.acc))
    }
}

impl<T: Fingerprint> Sink<T> for Checksum {
    fn len(&self) -> usize {
        self.len
    }

    fn split_at(self, mid: usize) -> (Self, Self) {
        assert!(mid <= self.len);
        (
            Checksum {
                offset: self.offset,
                len: mid,
                acc: self.acc,
            },
            Checksum {
                offset: self.offset + mid,
                len: self.len - mid,
                acc: 0,
            },
        )
    }

    #[inline]
    fn put(&mut self, index: usize, value: T) {
        debug_assert!(index < self.len);
        self.acc = self
            .acc
            .wrapping_add(mix(self.offset + index, value.fingerprint()));
    }
}
