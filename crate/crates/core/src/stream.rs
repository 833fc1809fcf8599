//! Per-path random streams.
//!
//! A stream is addressed by `(master_seed, path_index)` and never carries
//! state between paths: path `i` sees the same numbers no matter which
//! worker draws it or in which order. Each stream is split into lanes, one
//! per kind of draw, so that consuming more or fewer draws of one kind (for
//! instance a different jump count after a maturity bump) leaves the other
//! kinds untouched.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use statrs::function::erf::erfc_inv;

/// Words reserved per lane in the ChaCha keystream.
const LANE_WORDS: u128 = 1 << 40;

/// Kinds of draws, in their fixed consumption order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lane {
    JumpCount = 0,
    JumpTimes = 1,
    JumpMarks = 2,
    GridIncrements = 3,
    BridgeResiduals = 4,
}

#[derive(Debug, Clone)]
pub struct RandomStream {
    master_seed: u64,
    path_index: u64,
    base: ChaCha8Rng,
}

impl RandomStream {
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn path_index(&self) -> u64 {
        self.path_index
    }

    /// Sequential generator positioned at the start of `lane`.
    pub fn lane(&self, lane: Lane) -> LaneRng {
        let mut rng = self.base.clone();
        rng.set_word_pos(lane as u128 * LANE_WORDS);
        LaneRng { rng }
    }
}

/// The stream for one path. Injective in `(master_seed, path_index)`: the
/// seed keys the cipher and the index selects the cipher's 64-bit stream id.
pub fn derive_stream(master_seed: u64, path_index: u64) -> RandomStream {
    let mut base = ChaCha8Rng::seed_from_u64(master_seed);
    base.set_stream(path_index);
    RandomStream {
        master_seed,
        path_index,
        base,
    }
}

#[derive(Debug, Clone)]
pub struct LaneRng {
    rng: ChaCha8Rng,
}

impl LaneRng {
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal by inverse CDF of [`uniform`](Self::uniform).
    pub fn gaussian(&mut self) -> f64 {
        inverse_normal_cdf(self.uniform())
    }
}

/// `Φ⁻¹(u)` for `u ∈ (0, 1)`.
pub fn inverse_normal_cdf(u: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draws(seed: u64, index: u64, lane: Lane, n: usize) -> Vec<u64> {
        let mut rng = derive_stream(seed, index).lane(lane);
        (0..n).map(|_| rng.next_u64()).collect()
    }

    #[test]
    fn same_address_same_numbers() {
        assert_eq!(
            draws(7, 3, Lane::GridIncrements, 64),
            draws(7, 3, Lane::GridIncrements, 64)
        );
    }

    #[test]
    fn neighbouring_paths_differ() {
        let a = draws(7, 0, Lane::GridIncrements, 64);
        let b = draws(7, 1, Lane::GridIncrements, 64);
        assert!(a.iter().zip(&b).all(|(x, y)| x != y));
        let c = draws(8, 0, Lane::GridIncrements, 64);
        assert!(a.iter().zip(&c).all(|(x, y)| x != y));
    }

    #[test]
    fn lanes_are_disjoint() {
        let a = draws(1, 0, Lane::JumpTimes, 64);
        let b = draws(1, 0, Lane::JumpMarks, 64);
        assert!(a.iter().zip(&b).all(|(x, y)| x != y));
    }

    #[test]
    fn uniforms_stay_open() {
        let mut rng = derive_stream(0, 0).lane(Lane::JumpCount);
        for _ in 0..10_000 {
            let u = rng.uniform();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn inverse_cdf_symmetry_and_values() {
        assert!(inverse_normal_cdf(0.5).abs() < 1e-15);
        assert!((inverse_normal_cdf(0.975) - 1.959963984540054).abs() < 1e-12);
        for &u in &[1e-4, 0.01, 0.3, 0.49] {
            assert!((inverse_normal_cdf(u) + inverse_normal_cdf(1.0 - u)).abs() < 1e-9);
        }
    }

    #[test]
    fn gaussian_moments() {
        let mut rng = derive_stream(11, 0).lane(Lane::GridIncrements);
        let n = 200_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let z = rng.gaussian();
            s += z;
            s2 += z * z;
        }
        let mean = s / n as f64;
        let var = s2 / n as f64 - mean * mean;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt());
        assert!((var - 1.0).abs() < 4.0 * (2.0 / n as f64).sqrt());
    }
}
