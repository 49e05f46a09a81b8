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

use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub variant: String,
    pub n: usize,
    pub p: usize,
    /// Cache size in elements for the cache-aware variants.
    pub c: Option<usize>,
    pub repetitions: usize,
    pub median_seconds: f64,
    pub mean_seconds: f64,
    /// Median of the `p = 1` row with the same variant, `n` and `c`, divided
    /// by this row's median.
    pub speedup_vs_p1: f64,
    pub comparisons_partitioning: u64,
    /// Merge steps; left empty for sorts.
    pub comparisons_merging: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

pub fn median(samples: &[f64]) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => s[n / 2],
        _ => (s[n / 2 - 1] + s[n / 2]) / 2.0,
    }
}

pub fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}

impl BenchReport {
    pub fn extend(&mut self, other: BenchReport) {
        self.rows.extend(other.rows);
    }

    /// Recomputes `speedup_vs_p1` for every row that has a baseline.
    pub fn fill_speedups(&mut self) {
        let baselines: Vec<_> = self
            .rows
            .iter()
            .filter(|r| r.p == 1)
            .map(|r| ((r.variant.clone(), r.n, r.c), r.median_seconds))
            .collect();
        for row in &mut self.rows {
            let key = (row.variant.clone(), row.n, row.c);
            if let Some((_, base)) = baselines.iter().find(|(k, _)| *k == key) {
                row.speedup_vs_p1 = if row.p == 1 {
                    1.0
                } else if row.median_seconds > 0.0 {
                    base / row.median_seconds
                } else {
                    f64::INFINITY
                };
            }
        }
    }

    pub fn write(&self, format: OutputFormat, w: impl Write) -> std::io::Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(w),
            OutputFormat::Json => self.write_json(w),
        }
    }

    pub fn write_csv(&self, w: impl Write) -> std::io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        if self.rows.is_empty() {
            out.write_record(HEADER)?;
        }
        for row in &self.rows {
            out.serialize(row)?;
        }
        out.flush()
    }

    pub fn write_json(&self, mut w: impl Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }
}

const HEADER: [&str; 10] = [
    "variant",
    "n",
    "p",
    "c",
    "repetitions",
    "median_seconds",
    "mean_seconds",
    "speedup_vs_p1",
    "comparisons_partitioning",
    "comparisons_merging",
];
