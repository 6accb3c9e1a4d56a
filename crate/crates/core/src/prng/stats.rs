use serde::Serialize;
use statrs::function::erf::erfc;
use statrs::function::gamma::gamma_ur;

use crate::error::{Error, Result};

pub const DEFAULT_SIGNIFICANCE: f64 = 0.01;
pub const MIN_TEST_BITS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub name: String,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub passed: bool,
}

impl TestReport {
    fn new(name: impl Into<String>, statistic: f64, p_value: f64, alpha: f64) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        TestReport {
            name: name.into(),
            statistic,
            p_value,
            alpha,
            passed: p_value >= alpha,
        }
    }
}

fn check_len(bits: &[bool]) -> Result<()> {
    if bits.len() < MIN_TEST_BITS {
        return Err(Error::domain(format!(
            "{} bits supplied, tests need at least {MIN_TEST_BITS}",
            bits.len()
        )));
    }
    Ok(())
}

/// A frequency-style test with a fixed configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatTest {
    Monobit,
    Runs,
    BlockFrequency { block_len: usize },
}

impl StatTest {
    pub fn name(&self) -> String {
        match self {
            StatTest::Monobit => "monobit".into(),
            StatTest::Runs => "runs".into(),
            StatTest::BlockFrequency { block_len } => format!("block-frequency-{block_len}"),
        }
    }

    pub fn run(&self, bits: &[bool], alpha: f64) -> Result<TestReport> {
        check_len(bits)?;
        let (statistic, p) = match *self {
            StatTest::Monobit => monobit(bits),
            StatTest::Runs => runs(bits),
            StatTest::BlockFrequency { block_len } => block_frequency(bits, block_len)?,
        };
        Ok(TestReport::new(self.name(), statistic, p, alpha))
    }
}

/// s = |Σ(2b − 1)|/√n, p = erfc(s/√2).
fn monobit(bits: &[bool]) -> (f64, f64) {
    let n = bits.len() as f64;
    let sum: i64 = bits.iter().map(|&b| if b { 1 } else { -1 }).sum();
    let s = (sum.unsigned_abs() as f64) / n.sqrt();
    (s, erfc(s / std::f64::consts::SQRT_2))
}

/// Number of runs V, with p = 0 when the ones fraction π is already far
/// from 1/2 (|π − 1/2| ≥ 2/√n).
fn runs(bits: &[bool]) -> (f64, f64) {
    let n = bits.len() as f64;
    let pi = bits.iter().filter(|&&b| b).count() as f64 / n;
    let v = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    let v = v as f64;
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        return (v, 0.0);
    }
    let spread = pi * (1.0 - pi);
    let p = erfc((v - 2.0 * n * spread).abs() / (2.0 * (2.0 * n).sqrt() * spread));
    (v, p)
}

/// χ² = 4M Σ (π_i − 1/2)² over the complete blocks of length M,
/// p = Q(blocks/2, χ²/2).
fn block_frequency(bits: &[bool], block_len: usize) -> Result<(f64, f64)> {
    if block_len == 0 || block_len > bits.len() {
        return Err(Error::domain(format!(
            "block length {block_len} must lie in 1..={}",
            bits.len()
        )));
    }
    let blocks = bits.len() / block_len;
    let m = block_len as f64;
    let chi2 = 4.0
        * m
        * bits
            .chunks_exact(block_len)
            .map(|c| {
                let pi = c.iter().filter(|&&b| b).count() as f64 / m;
                (pi - 0.5) * (pi - 0.5)
            })
            .sum::<f64>();
    Ok((chi2, gamma_ur(blocks as f64 / 2.0, chi2 / 2.0)))
}

pub fn monobit_test(bits: &[bool]) -> Result<TestReport> {
    StatTest::Monobit.run(bits, DEFAULT_SIGNIFICANCE)
}

pub fn runs_test(bits: &[bool]) -> Result<TestReport> {
    StatTest::Runs.run(bits, DEFAULT_SIGNIFICANCE)
}

pub fn block_frequency_test(bits: &[bool], block_len: usize) -> Result<TestReport> {
    StatTest::BlockFrequency { block_len }.run(bits, DEFAULT_SIGNIFICANCE)
}
