//! Streaming mean/variance over contiguous path-index ranges.

use crate::error::{Error, Result};

/// One-pass count/mean/M2 accumulator tagged with the path-index range it
/// covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accumulator {
    range: Option<(u64, u64)>,
    count: u64,
    mean: f64,
    m2: f64,
}

impl Default for Accumulator {
    fn default() -> Self {
        Self::empty()
    }
}

impl Accumulator {
    /// Identity for [`merge_accumulators`].
    pub fn empty() -> Self {
        Self {
            range: None,
            count: 0,
            mean: 0.0,
            m2: 0.0,
        }
    }

    /// Adds the sample of path `index`. Indices must arrive in increasing order.
    pub fn push(&mut self, index: u64, value: f64) {
        self.range = Some(match self.range {
            None => (index, index + 1),
            Some((start, end)) => {
                debug_assert!(index >= end, "indices must increase");
                (start, index + 1)
            }
        });
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
    }

    pub fn range(&self) -> Option<(u64, u64)> {
        self.range
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// Unbiased sample variance; zero below two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Pools two accumulators over disjoint index ranges (parallel variance
/// combination). The left operand's samples are treated as coming first.
pub fn merge_accumulators(a: &Accumulator, b: &Accumulator) -> Result<Accumulator> {
    let (ra, rb) = match (a.range, b.range) {
        (None, _) => return Ok(*b),
        (_, None) => return Ok(*a),
        (Some(ra), Some(rb)) => (ra, rb),
    };
    if ra.0 < rb.1 && rb.0 < ra.1 {
        return Err(Error::RangeMismatch {
            left: ra,
            right: rb,
        });
    }
    let n = a.count + b.count;
    let (na, nb) = (a.count as f64, b.count as f64);
    let delta = b.mean - a.mean;
    let mean = a.mean + delta * nb / n as f64;
    let m2 = a.m2 + b.m2 + delta * delta * na * nb / n as f64;
    Ok(Accumulator {
        range: Some((ra.0.min(rb.0), ra.1.max(rb.1))),
        count: n,
        mean,
        m2,
    })
}

/// Merges per-chunk accumulator rows, ordered by path index, with a
/// balanced binary tree whose shape depends only on the number of chunks.
pub fn tree_merge(chunks: &[Vec<Accumulator>]) -> Result<Vec<Accumulator>> {
    match chunks.len() {
        0 => Ok(Vec::new()),
        1 => Ok(chunks[0].clone()),
        n => {
            let (left, right) = chunks.split_at(n / 2);
            let l = tree_merge(left)?;
            let r = tree_merge(right)?;
            l.iter()
                .zip(&r)
                .map(|(a, b)| merge_accumulators(a, b))
                .collect()
        }
    }
}
