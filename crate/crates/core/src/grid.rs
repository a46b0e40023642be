//! Dense row-major probability grids over the box, as emitted by
//! `target_grid.csv` and the per-chain histogram files.
//!
//! Row `i` covers `y ∈ [i·Ly/rows, (i+1)·Ly/rows)`, column `j` covers the
//! matching slice of `x`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl Grid {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Grid {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: values.len(),
            });
        }
        Ok(Grid { rows, cols, values })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub(crate) fn get_mut(&mut self, row: usize, col: usize) -> &mut f64 {
        &mut self.values[row * self.cols + col]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.values.chunks(self.cols.max(1)) {
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parses the CSV layout written by [`Grid::to_csv`]: one line per row,
    /// all rows of equal width, every entry a finite non-negative number.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        let mut cols = None;
        let mut rows = 0;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let mut width = 0;
            for field in line.split(',') {
                let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("not a number: {field:?}"),
                })?;
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("invalid probability {v}"),
                    });
                }
                values.push(v);
                width += 1;
            }
            match cols {
                None => cols = Some(width),
                Some(c) if c != width => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("expected {c} columns, got {width}"),
                    })
                }
                _ => {}
            }
            rows += 1;
        }
        let cols = cols.ok_or(Error::Parse {
            line: 0,
            msg: "empty grid".into(),
        })?;
        Ok(Grid { rows, cols, values })
    }
}
