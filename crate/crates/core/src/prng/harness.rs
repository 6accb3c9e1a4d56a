use std::sync::Arc;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use statrs::distribution::{Binomial, DiscreteCDF};

use super::stats::StatTest;
use super::{unpack_bits, PrgState};
use crate::error::{Error, Result};
use crate::hashing::digest;
use crate::lattice::LatticeSymbolicSystem;

/// Two-sided coverage of the band that per-test pass counts must fall in.
pub const BAND_CONFIDENCE: f64 = 0.99;

pub const MIN_TRIALS: usize = 30;

/// A source of bit strings indexed by trial number.
pub trait BitGenerator: Sync {
    fn name(&self) -> String;
    fn generate(&self, trial: u64, nbits: usize) -> Result<Vec<bool>>;
}

fn trial_seed(domain: &str, master: u64, trial: u64) -> [u8; 32] {
    digest(domain, &[&master.to_be_bytes(), &trial.to_be_bytes()])
}

/// The lattice-symbolic PRG, with a fresh 128-bit seed per trial.
#[derive(Debug, Clone)]
pub struct PrgGenerator {
    pub sys: Arc<LatticeSymbolicSystem>,
    pub master_seed: u64,
}

impl BitGenerator for PrgGenerator {
    fn name(&self) -> String {
        "prg".into()
    }

    fn generate(&self, trial: u64, nbits: usize) -> Result<Vec<bool>> {
        let seed = trial_seed("harness-prg", self.master_seed, trial);
        PrgState::new(self.sys.clone(), &seed[..16])?.next_bits(nbits)
    }
}

/// ChaCha20 keyed per trial; the calibration reference.
#[derive(Debug, Clone, Copy)]
pub struct ChaChaGenerator {
    pub master_seed: u64,
}

impl BitGenerator for ChaChaGenerator {
    fn name(&self) -> String {
        "chacha20".into()
    }

    fn generate(&self, trial: u64, nbits: usize) -> Result<Vec<bool>> {
        let mut rng = ChaCha20Rng::from_seed(trial_seed("harness-chacha", self.master_seed, trial));
        let mut bytes = vec![0u8; nbits.div_ceil(8)];
        rng.fill_bytes(&mut bytes);
        let mut bits = unpack_bits(&bytes);
        bits.truncate(nbits);
        Ok(bits)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantGenerator {
    pub bit: bool,
}

impl BitGenerator for ConstantGenerator {
    fn name(&self) -> String {
        format!("constant-{}", self.bit as u8)
    }

    fn generate(&self, _trial: u64, nbits: usize) -> Result<Vec<bool>> {
        Ok(vec![self.bit; nbits])
    }
}

/// Consecutive 32-bit big-endian integers, starting at `trial · nbits / 32`.
#[derive(Debug, Clone, Copy)]
pub struct CounterGenerator;

impl BitGenerator for CounterGenerator {
    fn name(&self) -> String {
        "counter".into()
    }

    fn generate(&self, trial: u64, nbits: usize) -> Result<Vec<bool>> {
        let words = nbits.div_ceil(32) as u64;
        let start = trial.wrapping_mul(words);
        let mut bits: Vec<bool> = (0..words)
            .flat_map(|i| {
                let v = start.wrapping_add(i) as u32;
                (0..32).rev().map(move |b| (v >> b) & 1 == 1)
            })
            .collect();
        bits.truncate(nbits);
        Ok(bits)
    }
}

/// Smallest `lo`, `hi` with `P(X ≤ lo) ≥ (1−c)/2` and `P(X ≤ hi) ≥ (1+c)/2`
/// for `X ~ Binomial(trials, p)`.
pub fn binomial_band(trials: u64, p: f64, confidence: f64) -> Result<(u64, u64)> {
    let dist = Binomial::new(p, trials)
        .map_err(|e| Error::domain(format!("binomial({trials}, {p}): {e}")))?;
    let quantile = |target: f64| (0..=trials).find(|&x| dist.cdf(x) >= target).unwrap_or(trials);
    Ok((
        quantile((1.0 - confidence) / 2.0),
        quantile((1.0 + confidence) / 2.0),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestSummary {
    pub test: String,
    pub passes: u64,
    pub pass_fraction: f64,
    pub in_band: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnessReport {
    pub generator: String,
    pub trials: u64,
    pub bits_per_trial: usize,
    pub alpha: f64,
    pub band: (u64, u64),
    pub tests: Vec<TestSummary>,
}

impl HarnessReport {
    pub fn all_in_band(&self) -> bool {
        self.tests.iter().all(|t| t.in_band)
    }

    pub fn summary(&self, test: &str) -> Option<&TestSummary> {
        self.tests.iter().find(|t| t.test == test)
    }
}

/// Runs every test on `trials` generated strings and checks each pass count
/// against the binomial band around `1 − alpha`.
pub fn distinguisher_harness(
    generator: &dyn BitGenerator,
    tests: &[StatTest],
    trials: usize,
    bits_per_trial: usize,
    alpha: f64,
) -> Result<HarnessReport> {
    if trials < MIN_TRIALS {
        return Err(Error::domain(format!("need at least {MIN_TRIALS} trials, got {trials}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("significance must lie in (0, 1), got {alpha}")));
    }
    let band = binomial_band(trials as u64, 1.0 - alpha, BAND_CONFIDENCE)?;
    let mut passes = vec![0u64; tests.len()];
    for trial in 0..trials as u64 {
        let bits = generator.generate(trial, bits_per_trial)?;
        for (count, test) in passes.iter_mut().zip(tests) {
            if test.run(&bits, alpha)?.passed {
                *count += 1;
            }
        }
    }
    let tests = tests
        .iter()
        .zip(passes)
        .map(|(test, passes)| TestSummary {
            test: test.name(),
            passes,
            pass_fraction: passes as f64 / trials as f64,
            in_band: (band.0..=band.1).contains(&passes),
        })
        .collect();
    Ok(HarnessReport {
        generator: generator.name(),
        trials: trials as u64,
        bits_per_trial,
        alpha,
        band,
        tests,
    })
}
