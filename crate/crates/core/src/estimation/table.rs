use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::monte_carlo::{EnsembleRun, MomentEstimate};
use crate::ensemble::validate_spec;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["N", "sims", "moment", "mean", "stderr"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTableRow {
    #[serde(rename = "N")]
    pub dim: usize,
    pub sims: u64,
    /// Orders `1..=k_max`, ascending.
    pub estimates: Vec<MomentEstimate>,
}

/// Moment estimates keyed by `(N, sims)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub rows: Vec<MomentTableRow>,
}

impl MomentTable {
    pub fn from_runs<'a>(runs: impl IntoIterator<Item = &'a EnsembleRun>) -> Self {
        let rows = runs
            .into_iter()
            .map(|run| MomentTableRow {
                dim: run.spec.dim(),
                sims: run.num_samples,
                estimates: run.estimates().into_iter().skip(1).collect(),
            })
            .collect();
        Self { rows }
    }

    /// Checks every row's `N` against the ensemble with `degree` palindromes.
    pub fn validate(&self, degree: u32) -> Result<()> {
        for row in &self.rows {
            validate_spec(degree, row.dim)?;
        }
        Ok(())
    }

    pub fn estimate(&self, dim: usize, k: usize) -> Option<&MomentEstimate> {
        self.rows
            .iter()
            .find(|r| r.dim == dim)?
            .estimates
            .iter()
            .find(|e| e.order == k)
    }

    /// `(N, mean, stderr)` for every row that carries order `k`.
    pub fn column(&self, k: usize) -> Vec<(f64, f64, f64)> {
        self.rows
            .iter()
            .filter_map(|r| {
                let e = r.estimates.iter().find(|e| e.order == k)?;
                Some((r.dim as f64, e.mean, e.stderr))
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for row in &self.rows {
            for e in &row.estimates {
                w.write_record([
                    row.dim.to_string(),
                    row.sims.to_string(),
                    e.order.to_string(),
                    e.mean.to_string(),
                    e.stderr.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Parses the format written by [`MomentTable::write_csv`]. Rows with
    /// the same `(N, sims)` are grouped in first-seen order.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(input);
        let header = rd.headers()?.clone();
        if header.iter().ne(CSV_HEADER) {
            return Err(Error::InvalidArgument(format!(
                "moment table header must be {}, got {}",
                CSV_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut table = MomentTable::default();
        for (line, record) in rd.records().enumerate() {
            let record = record?;
            let field = |i: usize| -> Result<&str> {
                record.get(i).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "row {}: missing column {}",
                        line + 2,
                        CSV_HEADER[i]
                    ))
                })
            };
            let bad = |i: usize| {
                Error::InvalidArgument(format!("row {}: bad {} value", line + 2, CSV_HEADER[i]))
            };
            let dim: usize = field(0)?.trim().parse().map_err(|_| bad(0))?;
            let sims: u64 = field(1)?.trim().parse().map_err(|_| bad(1))?;
            let order: usize = field(2)?.trim().parse().map_err(|_| bad(2))?;
            let mean: f64 = field(3)?.trim().parse().map_err(|_| bad(3))?;
            let stderr: f64 = field(4)?.trim().parse().map_err(|_| bad(4))?;
            let estimate = MomentEstimate {
                order,
                mean,
                stderr,
                num_samples: sims,
            };
            match table
                .rows
                .iter_mut()
                .find(|r| r.dim == dim && r.sims == sims)
            {
                Some(row) => row.estimates.push(estimate),
                None => table.rows.push(MomentTableRow {
                    dim,
                    sims,
                    estimates: vec![estimate],
                }),
            }
        }
        Ok(table)
    }
}
