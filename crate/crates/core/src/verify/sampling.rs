//! Deterministic sampling of directions in m.
//!
//! Random directions come from rejection sampling in a cube with exact
//! rational coordinates `p / 2^20`, normalized in floating point afterwards.
//! Basis directions and two-basis diagonals are always included first.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const GRID: i64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub samples: usize,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        SampleConfig { samples, seed }
    }
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            samples: 500,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    pub y: Vec<f64>,
    /// Basis direction or two-basis diagonal rather than a random draw.
    pub structured: bool,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly distributed unit vector.
pub fn random_unit<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    assert!(dim > 0);
    loop {
        let p: Vec<i64> = (0..dim).map(|_| rng.random_range(-GRID..=GRID)).collect();
        let n2: i128 = p.iter().map(|&x| (x as i128) * (x as i128)).sum();
        let r2 = (GRID as i128) * (GRID as i128);
        // Reject outside the unit ball and in a small core around 0.
        if n2 > r2 || n2 * 10_000 < r2 {
            continue;
        }
        let n = (n2 as f64).sqrt();
        return p.iter().map(|&x| x as f64 / n).collect();
    }
}

/// Structured directions: every `e_i` and every `(e_i + e_j)/sqrt 2`.
pub fn structured_directions(dim: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..dim {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        out.push(v);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..dim {
        for j in i + 1..dim {
            let mut v = vec![0.0; dim];
            v[i] = s;
            v[j] = s;
            out.push(v);
        }
    }
    out
}

/// `cfg.samples` unit directions (more if the structured set alone is larger).
pub fn sphere_points(dim: usize, cfg: &SampleConfig) -> Vec<SamplePoint> {
    let mut out: Vec<SamplePoint> = structured_directions(dim)
        .into_iter()
        .map(|y| SamplePoint {
            y,
            structured: true,
        })
        .collect();
    let mut r = rng(cfg.seed);
    while out.len() < cfg.samples {
        out.push(SamplePoint {
            y: random_unit(&mut r, dim),
            structured: false,
        });
    }
    out
}

/// Only random directions, no structured ones.
pub fn random_points(dim: usize, cfg: &SampleConfig) -> Vec<Vec<f64>> {
    let mut r = rng(cfg.seed);
    (0..cfg.samples).map(|_| random_unit(&mut r, dim)).collect()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
