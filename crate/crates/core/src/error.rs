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

use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which merge operand (or the output) an error or access refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Operand {
    A,
    B,
    S,
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operand::A => "A",
            Operand::B => "B",
            Operand::S => "S",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("worker count must be at least 1")]
    ZeroWorkers,
    #[error("cache capacity of {0} elements is too small, need at least 3")]
    CacheTooSmall(usize),
    #[error("segment starting at diagonal {start} with length {length} overruns the merge path of length {total}")]
    PathOverrun {
        start: usize,
        length: usize,
        total: usize,
    },
    #[error("partition point ({a_off}, {b_off}) is not on the merge path")]
    InvalidPartitionPoint { a_off: usize, b_off: usize },
    #[error("input {operand} is not sorted at index {index}")]
    Unsorted { operand: Operand, index: usize },
    #[error("output has length {got}, expected {expected}")]
    OutputLength { got: usize, expected: usize },
    #[error("invalid cache geometry: {0}")]
    CacheGeometry(String),
    #[error("arrays {0} and {1} overlap in the address layout")]
    OverlappingLayout(Operand, Operand),
    #[error("access {operand}[{index}] is outside the array bounds (length {len})")]
    AccessOutOfBounds {
        operand: Operand,
        index: usize,
        len: usize,
    },
    #[error("malformed trace line {line}: {reason}")]
    TraceParse { line: usize, reason: String },
}
