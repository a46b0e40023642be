use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{ChainState, SamplerConfig};
use crate::error::{Error, Result};
use crate::prng::split;
use crate::targets::TargetDensity;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChainMeta {
    pub sampler: String,
    pub target: String,
    pub seed: u64,
    pub chain_id: u64,
    pub params: serde_json::Value,
    pub wall_time_s: f64,
}

/// Post-burn-in draws, row-major `n × dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    dim: usize,
    samples: Vec<f64>,
    log_ps: Vec<f64>,
    accepted: Vec<bool>,
    pub meta: ChainMeta,
}

impl Chain {
    fn with_capacity(dim: usize, n: usize, meta: ChainMeta) -> Self {
        Chain {
            dim,
            samples: Vec::with_capacity(n * dim),
            log_ps: Vec::with_capacity(n),
            accepted: Vec::with_capacity(n),
            meta,
        }
    }

    /// Builds a chain from rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>], log_ps: Vec<f64>, accepted: Vec<bool>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if !rows.is_empty() && dim == 0 {
            return Err(Error::InvalidParameter("zero-dimensional samples".into()));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("ragged sample rows".into()));
        }
        if log_ps.len() != rows.len() || accepted.len() != rows.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                got: log_ps.len().min(accepted.len()),
            });
        }
        Ok(Chain {
            dim,
            samples: rows.concat(),
            log_ps,
            accepted,
            meta: ChainMeta::default(),
        })
    }

    fn push(&mut self, state: &ChainState, accepted: bool) {
        self.samples.extend_from_slice(&state.theta);
        self.log_ps.push(state.log_p.value());
        self.accepted.push(accepted);
    }

    pub fn len(&self) -> usize {
        self.log_ps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_ps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        &self.samples[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.samples.chunks_exact(self.dim.max(1))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn log_ps(&self) -> &[f64] {
        &self.log_ps
    }

    pub fn accepted(&self) -> &[bool] {
        &self.accepted
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.accepted.iter().filter(|&&a| a).count() as f64 / self.len() as f64
    }

    /// `step,x0,...,x{d-1},log_p,accepted` with `accepted` as `0`/`1`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * (self.dim + 2) * 20);
        out.push_str("step");
        for j in 0..self.dim {
            write!(out, ",x{j}").unwrap();
        }
        out.push_str(",log_p,accepted\n");
        for (i, row) in self.rows().enumerate() {
            write!(out, "{i}").unwrap();
            for v in row {
                write!(out, ",{v}").unwrap();
            }
            writeln!(out, ",{},{}", self.log_ps[i], self.accepted[i] as u8).unwrap();
        }
        out
    }

    /// Parses the layout written by [`Chain::to_csv`]. Steps must count up
    /// from zero and every value must be finite. Metadata is left empty.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let cols: Vec<&str> = header.trim_end_matches('\r').split(',').collect();
        let bad_header = || Error::Parse {
            line: 1,
            msg: format!("unexpected header {header:?}"),
        };
        if cols.len() < 4
            || cols[0] != "step"
            || cols[cols.len() - 2] != "log_p"
            || cols[cols.len() - 1] != "accepted"
        {
            return Err(bad_header());
        }
        let dim = cols.len() - 3;
        if cols[1..=dim]
            .iter()
            .enumerate()
            .any(|(j, c)| *c != format!("x{j}"))
        {
            return Err(bad_header());
        }
        let mut chain = Chain::with_capacity(dim, 0, ChainMeta::default());
        for (idx, line) in lines {
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: idx + 1, msg };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != dim + 3 {
                return Err(err(format!(
                    "expected {} fields, got {}",
                    dim + 3,
                    fields.len()
                )));
            }
            let step: usize = fields[0]
                .parse()
                .map_err(|_| err(format!("bad step {:?}", fields[0])))?;
            if step != chain.len() {
                return Err(err(format!("expected step {}, got {step}", chain.len())));
            }
            let num = |s: &str| -> Result<f64> {
                match s.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(err(format!("bad number {s:?}"))),
                }
            };
            for f in &fields[1..=dim] {
                chain.samples.push(num(f)?);
            }
            chain.log_ps.push(num(fields[dim + 1])?);
            chain.accepted.push(match fields[dim + 2] {
                "0" => false,
                "1" => true,
                other => return Err(err(format!("bad accepted flag {other:?}"))),
            });
        }
        Ok(chain)
    }
}

/// Runs `burn_in + n` transitions from `init` on the stream
/// `split(seed, chain_id)` and keeps the last `n`.
pub fn run_chain<T: TargetDensity + ?Sized>(
    sampler: &SamplerConfig,
    target: &T,
    n: usize,
    burn_in: usize,
    init: &[f64],
    seed: u64,
    chain_id: u64,
) -> Result<Chain> {
    sampler.validate()?;
    let mut stream = split(seed, chain_id);
    let mut state = ChainState::new(target, init, sampler.sigma0())?;
    let meta = ChainMeta {
        sampler: sampler.label().to_string(),
        target: String::new(),
        seed,
        chain_id,
        params: serde_json::to_value(sampler)?,
        wall_time_s: 0.0,
    };
    let mut chain = Chain::with_capacity(target.dim(), n, meta);

    let start = Instant::now();
    for i in 0..burn_in + n {
        let (next, accepted) = sampler.step(target, &state, &mut stream)?;
        state = next;
        if i >= burn_in {
            chain.push(&state, accepted);
        }
    }
    chain.meta.wall_time_s = start.elapsed().as_secs_f64();
    Ok(chain)
}
