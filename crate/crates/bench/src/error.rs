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

use std::path::PathBuf;

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Validation(String),
    #[error("output mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Library(#[from] mergepath::Error),
}

impl BenchError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 usage, 2 I/O, 3 invalid input, 4 wrong output.
    pub fn exit_code(&self) -> i32 {
        use mergepath::Error as E;
        match self {
            BenchError::Usage(_) => 1,
            BenchError::Io { .. } => 2,
            BenchError::Validation(_) => 3,
            BenchError::Mismatch(_) => 4,
            BenchError::Library(
                E::Unsorted { .. } | E::TraceParse { .. } | E::AccessOutOfBounds { .. },
            ) => 3,
            BenchError::Library(_) => 1,
        }
    }
}
