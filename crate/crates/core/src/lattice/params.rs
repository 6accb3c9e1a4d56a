use serde::Serialize;

use super::ring::{is_prime, NtruParams};
use crate::error::{Error, Result};

pub const DEFAULT_DELTA_CONSTANT: f64 = 0.02;
pub const DEFAULT_ENTROPY_FLOOR: f64 = 0.5;

/// Dimension that yields [`REFERENCE_SECURITY_BITS`] under the parameter
/// proposition; other targets scale it linearly.
pub const REFERENCE_DIMENSION: u64 = 512;
pub const REFERENCE_SECURITY_BITS: u64 = 128;

/// Constant `C` in the entropy-deficiency bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaParams {
    c: f64,
}

impl DeltaParams {
    pub fn new(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::domain(format!("C must be a positive real, got {c}")));
        }
        Ok(DeltaParams { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

impl Default for DeltaParams {
    fn default() -> Self {
        DeltaParams {
            c: DEFAULT_DELTA_CONSTANT,
        }
    }
}

/// δ(L_NTRU) ≤ C·log₂(det)/N = C·log₂ q.
pub fn delta_bound(params: &NtruParams, dp: &DeltaParams) -> f64 {
    delta_bound_raw(params.modulus() as f64, dp.c())
}

/// The same formula without the primality requirement on `q`.
pub fn delta_bound_raw(q: f64, c: f64) -> f64 {
    c * q.log2()
}

/// Thresholds applied by [`validate_parameters_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationPolicy {
    pub delta: DeltaParams,
    pub entropy_floor: f64,
}

impl Default for ValidationPolicy {
    fn default() -> Self {
        ValidationPolicy {
            delta: DeltaParams::default(),
            entropy_floor: DEFAULT_ENTROPY_FLOOR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n: u64,
    pub q: u64,
    pub alpha: f64,
    pub security_bits: u64,
    pub required_dimension: u64,
    pub delta: f64,
    /// α·N/4, the exponent of the gate-count lower bound. Reported only.
    pub theorem_estimate_bits: f64,
    pub conditions: Vec<Condition>,
    pub accepted: bool,
}

impl ValidationReport {
    pub fn failed(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.passed)
    }
}

pub fn validate_parameters(n: u64, q: u64, alpha: f64, security_bits: u64) -> ValidationReport {
    validate_parameters_with(n, q, alpha, security_bits, &ValidationPolicy::default())
}

pub fn validate_parameters_with(
    n: u64,
    q: u64,
    alpha: f64,
    security_bits: u64,
    policy: &ValidationPolicy,
) -> ValidationReport {
    let required_dimension =
        (REFERENCE_DIMENSION * security_bits).div_ceil(REFERENCE_SECURITY_BITS);
    let delta = if q >= 1 {
        delta_bound_raw(q as f64, policy.delta.c())
    } else {
        f64::NAN
    };
    let half_alpha = alpha / 2.0;
    let prime = is_prime(q);
    let conditions = vec![
        Condition {
            name: "dimension",
            passed: n >= required_dimension,
            detail: format!("N={n}, need N >= {required_dimension} for {security_bits} bits"),
        },
        Condition {
            name: "modulus",
            passed: prime,
            detail: format!("q={q} is {}prime", if prime { "" } else { "not " }),
        },
        Condition {
            name: "delta",
            passed: delta < half_alpha,
            detail: format!(
                "C*log2(q) = {:.6}, need < alpha/2 = {:.6}",
                delta, half_alpha
            ),
        },
        Condition {
            name: "entropy",
            passed: alpha >= policy.entropy_floor,
            detail: format!("alpha={alpha}, need >= {}", policy.entropy_floor),
        },
    ];
    let accepted = conditions.iter().all(|c| c.passed);
    ValidationReport {
        n,
        q,
        alpha,
        security_bits,
        required_dimension,
        delta,
        theorem_estimate_bits: alpha * n as f64 / 4.0,
        conditions,
        accepted,
    }
}
