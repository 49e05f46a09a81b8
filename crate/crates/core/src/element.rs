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

use std::cmp::Ordering;

/// A sort key carrying a payload tag.
///
/// Equality and ordering look only at `key`. The tag rides along untouched, so
/// a stable algorithm keeps tags of equal keys in their input order; use
/// [`Element::raw`] to compare elements bit-exactly.
#[derive(Debug, Clone, Copy, Default, serde::Serialize, serde::Deserialize)]
pub struct Element {
    pub key: i64,
    pub tag: u32,
}

impl Element {
    pub const fn new(key: i64, tag: u32) -> Self {
        Element { key, tag }
    }

    pub const fn raw(&self) -> (i64, u32) {
        (self.key, self.tag)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Element {}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl From<i64> for Element {
    fn from(key: i64) -> Self {
        Element { key, tag: 0 }
    }
}
