use std::io::{self, Write};

use rayon::prelude::*;

use super::families::CopulaSampler;
use crate::copulas::CopulaSpec;
use crate::error::{Error, Result};
use crate::numerics::{RngStream, MC_BLOCK_SIZE};

/// `τᵢ = −ln(uᵢ)/λᵢ`, the arrival times whose survival uniforms are `u`.
pub fn to_arrival_times(u: &[f64], lambdas: &[f64]) -> Result<Vec<f64>> {
    if u.len() != lambdas.len() {
        return Err(Error::DimensionMismatch {
            expected: lambdas.len(),
            got: u.len(),
        });
    }
    if let Some(bad) = lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(Error::param(
            "lambdas",
            format!("intensity {bad} is not positive"),
        ));
    }
    if let Some(bad) = u.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        return Err(Error::domain(
            "to_arrival_times",
            format!("uniform {bad} is not strictly inside (0, 1)"),
        ));
    }
    Ok(u.iter().zip(lambdas).map(|(ui, l)| -ui.ln() / l).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    Uniforms,
    ArrivalTimes,
}

impl SampleKind {
    fn column_prefix(self) -> &'static str {
        match self {
            SampleKind::Uniforms => "u",
            SampleKind::ArrivalTimes => "tau",
        }
    }
}

/// Row-major block of scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub kind: SampleKind,
    pub dim: usize,
    pub values: Vec<f64>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.dim)
    }

    pub fn column(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[i])
    }

    /// Converts survival uniforms into arrival times.
    pub fn into_arrival_times(self, lambdas: &[f64]) -> Result<SampleBatch> {
        if self.kind == SampleKind::ArrivalTimes {
            return Ok(self);
        }
        let mut values = Vec::with_capacity(self.values.len());
        for row in self.rows() {
            values.extend(to_arrival_times(row, lambdas)?);
        }
        Ok(SampleBatch {
            kind: SampleKind::ArrivalTimes,
            dim: self.dim,
            values,
        })
    }

    /// Header `u1,…,un` or `tau1,…,taun`, then one row per scenario.
    /// Values use the shortest decimal form that parses back to the same
    /// `f64`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let prefix = self.kind.column_prefix();
        let header: Vec<String> = (1..=self.dim).map(|i| format!("{prefix}{i}")).collect();
        writeln!(w, "{}", header.join(","))?;
        for row in self.rows() {
            let mut first = true;
            for x in row {
                if !first {
                    w.write_all(b",")?;
                }
                first = false;
                write!(w, "{x:?}")?;
            }
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Draws `count` scenarios of survival uniforms.
///
/// Block `b` of [`MC_BLOCK_SIZE`] scenarios uses `rng.split(b)`, so the
/// batch is identical for any rayon pool size.
pub fn sample_batch(spec: &CopulaSpec, count: usize, rng: &RngStream) -> SampleBatch {
    let sampler = CopulaSampler::new(spec);
    let dim = sampler.dim();
    let block = MC_BLOCK_SIZE as usize;
    let blocks = count.div_ceil(block);
    let chunks: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut stream = rng.split(b as u64);
            let len = block.min(count - b * block);
            let mut out = vec![0.0; len * dim];
            for row in out.chunks_mut(dim) {
                sampler.sample_into(&mut stream, row);
            }
            out
        })
        .collect();
    SampleBatch {
        kind: SampleKind::Uniforms,
        dim,
        values: chunks.concat(),
    }
}
