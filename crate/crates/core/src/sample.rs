use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Observed partition data: species multiplicities in order of appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SampleSummary {
    n: u64,
    k: u64,
    multiplicities: Vec<u64>,
}

impl SampleSummary {
    /// The empty sample (prior case).
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Records one more observation of species `j` (0-based, in order of
    /// appearance); `j == k` opens a new species.
    pub fn observe(&mut self, j: usize) {
        if j == self.multiplicities.len() {
            self.multiplicities.push(1);
            self.k += 1;
        } else {
            self.multiplicities[j] += 1;
        }
        self.n += 1;
    }

    /// The summary after one more observation of species `j`.
    pub fn with_observation(&self, j: usize) -> Self {
        let mut next = self.clone();
        next.observe(j);
        next
    }

    /// Checks the internal invariants; used after deserialization.
    pub fn check(&self) -> Result<()> {
        let again = summarize_sample(&self.multiplicities)?;
        if again != *self {
            return Err(Error::InvalidSample(format!(
                "n = {}, k = {} do not match multiplicities",
                self.n, self.k
            )));
        }
        Ok(())
    }
}

/// Builds a summary from species counts; every count must be at least one.
pub fn summarize_sample(counts: &[u64]) -> Result<SampleSummary> {
    if let Some(pos) = counts.iter().position(|&c| c == 0) {
        return Err(Error::InvalidSample(format!(
            "count at position {} is zero; multiplicities must be positive",
            pos + 1
        )));
    }
    let n = counts
        .iter()
        .try_fold(0u64, |acc, &c| acc.checked_add(c))
        .ok_or_else(|| Error::InvalidSample("total count overflows".into()))?;
    Ok(SampleSummary {
        n,
        k: counts.len() as u64,
        multiplicities: counts.to_vec(),
    })
}

/// Same as [`summarize_sample`] but from signed input, rejecting negatives.
pub fn summarize_signed(counts: &[i64]) -> Result<SampleSummary> {
    let unsigned = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            u64::try_from(c).map_err(|_| Error::InvalidSample(format!("count at position {} is negative ({c})", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    summarize_sample(&unsigned)
}
