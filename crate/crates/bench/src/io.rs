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

//! Key files: little-endian binary with a header, or text with one integer
//! per line. Readers detect the binary header.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{BenchError, Result};

/// First eight bytes of a binary key file; a little-endian `u64` count and
/// the `i64` keys follow.
pub const MAGIC: [u8; 8] = *b"MPATHI64";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Binary,
    Text,
}

pub fn encode(values: &[i64], format: Format, mut w: impl Write) -> std::io::Result<()> {
    match format {
        Format::Binary => {
            w.write_all(&MAGIC)?;
            w.write_all(&(values.len() as u64).to_le_bytes())?;
            for v in values {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Format::Text => {
            for v in values {
                writeln!(w, "{v}")?;
            }
        }
    }
    w.flush()
}

/// Parses either format from a byte buffer.
pub fn decode(bytes: &[u8]) -> std::result::Result<Vec<i64>, String> {
    if let Some(rest) = bytes.strip_prefix(&MAGIC) {
        if rest.len() < 8 {
            return Err("truncated header".into());
        }
        let (count, body) = rest.split_at(8);
        let count = u64::from_le_bytes(count.try_into().unwrap());
        if body.len() as u64 != count.saturating_mul(8) {
            return Err(format!(
                "header says {count} keys, body holds {} bytes",
                body.len()
            ));
        }
        return Ok(body
            .chunks_exact(8)
            .map(|c| i64::from_le_bytes(c.try_into().unwrap()))
            .collect());
    }
    let mut values = Vec::new();
    for (n, line) in bytes.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v = line
            .parse()
            .map_err(|e| format!("line {}: {line:?}: {e}", n + 1))?;
        values.push(v);
    }
    Ok(values)
}

pub fn write_keys(path: &Path, values: &[i64], format: Format) -> Result<()> {
    let file = File::create(path).map_err(|e| BenchError::io(path, e))?;
    encode(values, format, BufWriter::new(file)).map_err(|e| BenchError::io(path, e))
}

pub fn read_keys(path: &Path) -> Result<Vec<i64>> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|f| BufReader::new(f).read_to_end(&mut bytes))
        .map_err(|e| BenchError::io(path, e))?;
    decode(&bytes).map_err(|e| BenchError::Validation(format!("{}: {e}", path.display())))
}
