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

use std::collections::{BTreeMap, HashMap, HashSet};
use std::str::FromStr;

use super::trace::MemAccess;
use crate::{Error, Operand, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    Lru,
    Fifo,
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lru" => Ok(Policy::Lru),
            "fifo" => Ok(Policy::Fifo),
            other => Err(Error::CacheGeometry(format!(
                "unknown replacement policy `{other}`"
            ))),
        }
    }
}

/// Cache geometry, in elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CacheConfig {
    pub capacity: usize,
    /// Ways per set; 1 is direct-mapped, `capacity / line_size` is fully
    /// associative.
    pub associativity: usize,
    pub line_size: usize,
    pub policy: Policy,
}

impl CacheConfig {
    pub fn new(
        capacity: usize,
        associativity: usize,
        line_size: usize,
        policy: Policy,
    ) -> Result<Self> {
        let config = CacheConfig {
            capacity,
            associativity,
            line_size,
            policy,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn fully_associative(capacity: usize, line_size: usize, policy: Policy) -> Result<Self> {
        Self::new(capacity, capacity / line_size.max(1), line_size, policy)
    }

    pub fn validate(&self) -> Result<()> {
        let geometry = |msg: String| Err(Error::CacheGeometry(msg));
        if self.capacity == 0 || self.associativity == 0 || self.line_size == 0 {
            return geometry(format!(
                "capacity {}, associativity {} and line size {} must all be positive",
                self.capacity, self.associativity, self.line_size
            ));
        }
        if !self.capacity.is_multiple_of(self.line_size) {
            return geometry(format!(
                "capacity {} is not a multiple of the line size {}",
                self.capacity, self.line_size
            ));
        }
        if !self.lines().is_multiple_of(self.associativity) {
            return geometry(format!(
                "{} lines cannot be split into sets of {} ways",
                self.lines(),
                self.associativity
            ));
        }
        Ok(())
    }

    pub fn lines(&self) -> usize {
        self.capacity / self.line_size
    }

    pub fn sets(&self) -> usize {
        self.lines() / self.associativity
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CacheStats {
    pub accesses: u64,
    pub hits: u64,
    pub misses: u64,
    /// First touch of a line.
    pub compulsory: u64,
    /// Misses a fully associative LRU cache of the same capacity also takes.
    pub capacity_misses: u64,
    /// The remaining misses, caused by limited associativity.
    pub conflict_misses: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Region {
    pub base: u64,
    pub len: usize,
}

impl Region {
    fn end(&self) -> u64 {
        self.base + self.len as u64
    }

    fn overlaps(&self, other: &Region) -> bool {
        self.len > 0 && other.len > 0 && self.base < other.end() && other.base < self.end()
    }
}

/// Base addresses of `A`, `B` and the output `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Layout {
    pub a: Region,
    pub b: Region,
    pub s: Region,
}

impl Layout {
    pub fn new(a: Region, b: Region, s: Region) -> Result<Self> {
        let layout = Layout { a, b, s };
        layout.validate()?;
        Ok(layout)
    }

    /// `A`, then `B`, then `S`, back to back from address 0.
    pub fn contiguous(a_len: usize, b_len: usize) -> Self {
        let total = (a_len + b_len) as u64;
        Layout {
            a: Region {
                base: 0,
                len: a_len,
            },
            b: Region {
                base: a_len as u64,
                len: b_len,
            },
            s: Region {
                base: total,
                len: a_len + b_len,
            },
        }
    }

    /// Every base rounded up to a multiple of `stride`. With `stride` a
    /// multiple of `sets * line_size`, `A[i]`, `B[i]` and `S[i]` all land in
    /// the same set.
    pub fn aligned(a_len: usize, b_len: usize, stride: u64, offset: u64) -> Self {
        let stride = stride.max(1);
        let round = |x: u64| x.div_ceil(stride) * stride;
        let a_base = offset;
        let b_base = round(a_base + a_len as u64);
        let s_base = round(b_base + b_len as u64);
        Layout {
            a: Region {
                base: a_base,
                len: a_len,
            },
            b: Region {
                base: b_base,
                len: b_len,
            },
            s: Region {
                base: s_base,
                len: a_len + b_len,
            },
        }
    }

    pub fn region(&self, operand: Operand) -> Region {
        match operand {
            Operand::A => self.a,
            Operand::B => self.b,
            Operand::S => self.s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pairs = [
            (Operand::A, Operand::B),
            (Operand::A, Operand::S),
            (Operand::B, Operand::S),
        ];
        for (x, y) in pairs {
            if self.region(x).overlaps(&self.region(y)) {
                return Err(Error::OverlappingLayout(x, y));
            }
        }
        Ok(())
    }

    pub fn address(&self, access: &MemAccess) -> Result<u64> {
        let region = self.region(access.array);
        if access.index >= region.len {
            return Err(Error::AccessOutOfBounds {
                operand: access.array,
                index: access.index,
                len: region.len,
            });
        }
        Ok(region.base + access.index as u64)
    }
}

/// A set-associative cache holding line numbers.
struct SetAssociative {
    ways: usize,
    sets: usize,
    policy: Policy,
    lines: Vec<Option<u64>>,
    stamps: Vec<u64>,
    clock: u64,
}

impl SetAssociative {
    fn new(config: &CacheConfig) -> Self {
        let slots = config.lines();
        SetAssociative {
            ways: config.associativity,
            sets: config.sets(),
            policy: config.policy,
            lines: vec![None; slots],
            stamps: vec![0; slots],
            clock: 0,
        }
    }

    /// Returns true on a hit; on a miss the line is filled.
    fn access(&mut self, line: u64) -> bool {
        self.clock += 1;
        let set = (line % self.sets as u64) as usize;
        let slots = set * self.ways..(set + 1) * self.ways;
        if let Some(way) = self.lines[slots.clone()]
            .iter()
            .position(|l| *l == Some(line))
        {
            if self.policy == Policy::Lru {
                self.stamps[slots.start + way] = self.clock;
            }
            return true;
        }
        let victim = match self.lines[slots.clone()].iter().position(Option::is_none) {
            Some(free) => slots.start + free,
            None => slots
                .clone()
                .min_by_key(|&slot| self.stamps[slot])
                .expect("sets have at least one way"),
        };
        self.lines[victim] = Some(line);
        self.stamps[victim] = self.clock;
        false
    }
}

/// Fully associative LRU cache, the reference for capacity misses.
struct FullyAssociativeLru {
    capacity: usize,
    stamp_of: HashMap<u64, u64>,
    by_stamp: BTreeMap<u64, u64>,
    clock: u64,
}

impl FullyAssociativeLru {
    fn new(capacity: usize) -> Self {
        FullyAssociativeLru {
            capacity,
            stamp_of: HashMap::new(),
            by_stamp: BTreeMap::new(),
            clock: 0,
        }
    }

    fn access(&mut self, line: u64) -> bool {
        self.clock += 1;
        let hit = match self.stamp_of.insert(line, self.clock) {
            Some(old) => {
                self.by_stamp.remove(&old);
                true
            }
            None => false,
        };
        self.by_stamp.insert(self.clock, line);
        if self.by_stamp.len() > self.capacity {
            let (_, evicted) = self.by_stamp.pop_first().expect("cache is over capacity");
            self.stamp_of.remove(&evicted);
        }
        hit
    }
}

/// Replays `trace` through a cache described by `config`.
///
/// Writes allocate lines like reads do. Every miss is classified: the first
/// access to a line is compulsory; a later miss that a fully associative LRU
/// cache of equal capacity would also take is a capacity miss; anything else
/// is a conflict miss.
pub fn simulate(trace: &[MemAccess], layout: &Layout, config: &CacheConfig) -> Result<CacheStats> {
    config.validate()?;
    layout.validate()?;
    let mut cache = SetAssociative::new(config);
    let mut reference = FullyAssociativeLru::new(config.lines());
    let mut seen = HashSet::new();
    let mut stats = CacheStats::default();
    for access in trace {
        let line = layout.address(access)? / config.line_size as u64;
        let hit = cache.access(line);
        let reference_hit = reference.access(line);
        let first_touch = seen.insert(line);
        stats.accesses += 1;
        if hit {
            stats.hits += 1;
            continue;
        }
        stats.misses += 1;
        if first_touch {
            stats.compulsory += 1;
        } else if !reference_hit {
            stats.capacity_misses += 1;
        } else {
            stats.conflict_misses += 1;
        }
    }
    Ok(stats)
}
