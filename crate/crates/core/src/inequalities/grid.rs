use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Independent uniform draws from a seeded ChaCha8 stream.
    Random,
    /// A rank-1 lattice with `samples` points; the seed is unused.
    Lattice,
}

/// Named parameter ranges plus sampling controls.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub ranges: BTreeMap<String, (f64, f64)>,
    pub samples: usize,
    pub seed: u64,
    pub mode: SampleMode,
}

impl GridSpec {
    pub fn new(samples: usize, seed: u64) -> Self {
        GridSpec { ranges: BTreeMap::new(), samples, seed, mode: SampleMode::Random }
    }

    pub fn with_range(mut self, name: &str, lo: f64, hi: f64) -> Self {
        self.ranges.insert(name.to_string(), (lo, hi));
        self
    }

    pub fn with_mode(mut self, mode: SampleMode) -> Self {
        self.mode = mode;
        self
    }

    /// Parses `{"alpha1": [lo, hi], …, "samples": n, "mode": "random"|"lattice", "seed": n}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Grid(format!("malformed grid JSON: {e}")))?;
        let obj = v.as_object().ok_or_else(|| Error::Grid("grid JSON must be an object".into()))?;
        let mut g = GridSpec::new(1000, 0);
        for (key, val) in obj {
            match key.as_str() {
                "samples" => {
                    g.samples = val
                        .as_u64()
                        .ok_or_else(|| Error::Grid(format!("samples must be a positive integer, got {val}")))?
                        as usize
                }
                "seed" => {
                    g.seed =
                        val.as_u64().ok_or_else(|| Error::Grid(format!("seed must be a non-negative integer, got {val}")))?
                }
                "mode" => {
                    g.mode = match val.as_str() {
                        Some("random") => SampleMode::Random,
                        Some("lattice") => SampleMode::Lattice,
                        _ => return Err(Error::Grid(format!("mode must be \"random\" or \"lattice\", got {val}"))),
                    }
                }
                name => {
                    let pair = val
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .and_then(|a| Some((a[0].as_f64()?, a[1].as_f64()?)))
                        .ok_or_else(|| Error::Grid(format!("range {name} must be [lo, hi], got {val}")))?;
                    g.ranges.insert(name.to_string(), pair);
                }
            }
        }
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Grid("samples must be >= 1".into()));
        }
        for (name, &(lo, hi)) in &self.ranges {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::Grid(format!("range {name} = [{lo}, {hi}] is empty or not finite")));
            }
        }
        Ok(())
    }
}

/// Coordinates in (0, 1] for one candidate instance.
pub(crate) enum Source<'a> {
    Random(&'a mut ChaCha8Rng),
    Lattice { index: u64, n: u64, a: u64, g: u64 },
}

impl Source<'_> {
    pub(crate) fn next(&mut self) -> f64 {
        match self {
            Source::Random(rng) => 1.0 - rng.gen::<f64>(),
            Source::Lattice { index, n, a, g } => {
                let x = (*index as u128 * *g as u128 % *n as u128) as f64;
                *g = (*g as u128 * *a as u128 % *n as u128) as u64;
                (x + 0.5) / *n as f64
            }
        }
    }
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Korobov generator for an n-point rank-1 lattice: the integer nearest
/// n(√5 − 1)/2 that is coprime to n.
pub(crate) fn korobov(n: u64) -> u64 {
    if n <= 2 {
        return 1;
    }
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut a = ((n as f64) * 0.618_033_988_749_895).round() as u64;
    a = a.clamp(1, n - 1);
    while gcd(a, n) != 1 {
        a += 1;
    }
    a
}
