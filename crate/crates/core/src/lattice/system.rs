use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::embedding::SymbolEmbedding;
use super::params::{DeltaParams, DEFAULT_DELTA_CONSTANT, DEFAULT_ENTROPY_FLOOR};
use super::ring::{ring_mul, NtruParams, RingElement};
use crate::error::{Error, Result};
use crate::hashing::HashStream;
use crate::shift::{entropy_transfer_matrix, shift_apply, EntropyEstimate, ShiftOfFiniteType};
use crate::words::{Alphabet, Symbol};

pub const DEFAULT_PUBLIC_SEED: &str = "symdyn/ntru-h/v1";

/// Everything needed to build a [`LatticeSymbolicSystem`]. Deserializable so
/// front ends can read it from a config file; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    /// Ring dimension N.
    pub n: usize,
    /// Prime modulus q.
    pub q: u64,
    /// Constant C of the entropy-deficiency bound.
    pub c: f64,
    /// Window radius k; windows hold 2k+1 symbols.
    pub window: usize,
    /// Scale s of the default embedding ψ(±1) = ±s·e₁.
    pub embedding_scale: i64,
    /// Declared lower bound on λ₁ of the lattice.
    pub lambda1: f64,
    /// Entropy floor α (bits per symbol).
    pub entropy_floor: f64,
    /// Forbidden words over `-1 0 1`, e.g. `"1 1"` or `"-1,-1"`.
    pub forbidden: Vec<String>,
    /// Public seed from which the NTRU polynomial h is derived.
    pub public_seed: String,
    /// Shift steps between successive generator outputs; unset means 2k+1.
    pub step: Option<usize>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            n: 512,
            q: 4099,
            c: DEFAULT_DELTA_CONSTANT,
            window: 8,
            embedding_scale: 1,
            lambda1: 1.0,
            entropy_floor: DEFAULT_ENTROPY_FLOOR,
            forbidden: Vec::new(),
            public_seed: DEFAULT_PUBLIC_SEED.to_string(),
            step: None,
        }
    }
}

/// A lattice point of `(1/2^scale_log2)·Z^N`, stored as exact numerators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPoint {
    pub numerators: Vec<BigInt>,
    pub scale_log2: u32,
}

impl WeightedPoint {
    pub fn to_f64(&self) -> Vec<f64> {
        let scale = 2f64.powi(-(self.scale_log2 as i32));
        self.numerators
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::NAN) * scale)
            .collect()
    }

    /// Euclidean distance, rounded once at the end.
    pub fn distance(&self, other: &WeightedPoint) -> Result<f64> {
        if self.scale_log2 != other.scale_log2 || self.numerators.len() != other.numerators.len() {
            return Err(Error::domain("weighted points have different shapes"));
        }
        let sq: BigInt = self
            .numerators
            .iter()
            .zip(&other.numerators)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .sum();
        if sq.is_zero() {
            return Ok(0.0);
        }
        // sqrt(m·2^e) = sqrt(m)·2^(e/2), with e even and m below 2^64
        let bits = sq.bits();
        let e = bits.saturating_sub(64) & !1;
        let m = (sq >> e).to_f64().unwrap_or(f64::NAN);
        Ok(m.sqrt() * 2f64.powi(e as i32 / 2 - self.scale_log2 as i32))
    }
}

/// Truncated symbolic-lattice distance with the guaranteed bound on the
/// omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricValue {
    pub value: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundedDistanceReport {
    pub max_distance: f64,
    pub samples: usize,
}

/// Σ_{|i| ≤ p} 2^(−|i|)·min{1, d_L(ψ(x_i), ψ(y_i))} over circular buffers,
/// with index `i` read modulo the buffer length.
pub fn d_sl(embedding: &SymbolEmbedding, x: &[Symbol], y: &[Symbol], p: usize) -> Result<MetricValue> {
    if x.len() != y.len() {
        return Err(Error::domain(format!(
            "buffers differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::domain("empty buffers"));
    }
    let len = x.len() as i64;
    let term = |i: i64| {
        let j = i.rem_euclid(len) as usize;
        embedding.distance(x[j], y[j]).min(1.0)
    };
    // Sum smallest weights first.
    let mut value = 0.0;
    for r in (1..=p as i64).rev() {
        value += (term(r) + term(-r)) * 2f64.powi(-(r as i32));
    }
    value += term(0);
    Ok(MetricValue {
        value,
        tail_bound: 2f64.powi(1 - p.min(1100) as i32),
    })
}

/// The NTRU-based lattice-symbolic system over `{-1, 0, 1}`.
#[derive(Debug, Clone)]
pub struct LatticeSymbolicSystem {
    sft: ShiftOfFiniteType,
    params: NtruParams,
    embedding: SymbolEmbedding,
    window: usize,
    entropy_floor: f64,
    entropy: EntropyEstimate,
    lambda1: f64,
    delta: DeltaParams,
    h: RingElement,
    step: usize,
}

/// Coefficients of h, uniform modulo q, expanded from the public seed.
pub fn derive_public_polynomial(params: NtruParams, public_seed: &str) -> RingElement {
    let n = params.dimension() as u64;
    let q = params.modulus();
    let mut stream = HashStream::new(
        "ntru-h",
        &[public_seed.as_bytes(), &n.to_be_bytes(), &q.to_be_bytes()],
    );
    let coeffs = (0..n).map(|_| stream.below(q)).collect();
    RingElement::from_coeffs(params, coeffs).expect("coefficients are reduced")
}

impl LatticeSymbolicSystem {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        let alphabet = Arc::new(Alphabet::ternary());
        let forbidden = config
            .forbidden
            .iter()
            .map(|w| alphabet.parse_word(w))
            .collect::<Result<Vec<_>>>()?;
        let sft = ShiftOfFiniteType::new(alphabet, &forbidden)?;
        Self::with_sft(config, sft)
    }

    /// Builds a system around an existing ternary shift; the forbidden list
    /// of `config` is ignored.
    pub fn with_sft(config: &SystemConfig, sft: ShiftOfFiniteType) -> Result<Self> {
        if **sft.alphabet() != Alphabet::ternary() {
            return Err(Error::domain(format!(
                "alphabet must be {{-1,0,1}}, got {}",
                sft.alphabet()
            )));
        }
        let params = NtruParams::new(config.n, config.q)?;
        if config.window == 0 {
            return Err(Error::domain("window radius k must be positive"));
        }
        if 2 * config.window + 1 > config.n {
            return Err(Error::domain(format!(
                "window 2k+1 = {} exceeds N = {}",
                2 * config.window + 1,
                config.n
            )));
        }
        let step = config.step.unwrap_or(2 * config.window + 1);
        if step == 0 {
            return Err(Error::domain("step must be positive"));
        }
        if !(config.entropy_floor.is_finite() && config.entropy_floor >= 0.0) {
            return Err(Error::domain(format!(
                "entropy floor must be a nonnegative real, got {}",
                config.entropy_floor
            )));
        }
        let delta = DeltaParams::new(config.c)?;
        let embedding = SymbolEmbedding::unit_axis(config.n, config.embedding_scale)?;
        embedding.check_lambda1(config.lambda1)?;
        let entropy = entropy_transfer_matrix(&sft)?;
        let slack = entropy.error_bound.unwrap_or(0.0);
        if entropy.value + slack < config.entropy_floor {
            return Err(Error::construction(format!(
                "shift entropy {:.6} is below the floor {}",
                entropy.value, config.entropy_floor
            )));
        }
        let h = derive_public_polynomial(params, &config.public_seed);
        Ok(LatticeSymbolicSystem {
            sft,
            params,
            embedding,
            window: config.window,
            entropy_floor: config.entropy_floor,
            entropy,
            lambda1: config.lambda1,
            delta,
            h,
            step,
        })
    }

    pub fn sft(&self) -> &ShiftOfFiniteType {
        &self.sft
    }

    pub fn params(&self) -> NtruParams {
        self.params
    }

    pub fn embedding(&self) -> &SymbolEmbedding {
        &self.embedding
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn window_len(&self) -> usize {
        2 * self.window + 1
    }

    pub fn entropy_floor(&self) -> f64 {
        self.entropy_floor
    }

    /// Transfer-matrix entropy certified at construction.
    pub fn entropy(&self) -> &EntropyEstimate {
        &self.entropy
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn delta_params(&self) -> DeltaParams {
        self.delta
    }

    pub fn public_polynomial(&self) -> &RingElement {
        &self.h
    }

    pub fn step(&self) -> usize {
        self.step
    }

    fn check_window(&self, window: &[Symbol]) -> Result<()> {
        if window.len() != self.window_len() {
            return Err(Error::domain(format!(
                "window has {} symbols, expected {}",
                window.len(),
                self.window_len()
            )));
        }
        if let Some(s) = window.iter().find(|&&s| s > 2) {
            return Err(Error::domain(format!("symbol index {s} is not ternary")));
        }
        Ok(())
    }

    /// φ(x) = Σ_{i=-k}^{k} ψ(x_i)·X^i in R_q, where `window[j]` holds
    /// `x_{j-k}` and negative exponents wrap to `X^(N+i)`.
    pub fn phi_ntru(&self, window: &[Symbol]) -> Result<RingElement> {
        self.check_window(window)?;
        let n = self.params.dimension() as i64;
        let k = self.window as i64;
        let mut out = RingElement::zero(self.params);
        for (j, &s) in window.iter().enumerate() {
            let i = j as i64 - k;
            for (t, &c) in self.embedding.vector(s).iter().enumerate() {
                if c != 0 {
                    out.add_signed_at((t as i64 + i).rem_euclid(n) as usize, c);
                }
            }
        }
        Ok(out)
    }

    /// The window of radius k around `center` in a circular buffer.
    pub fn window_at(&self, buffer: &[Symbol], center: usize) -> Result<Vec<Symbol>> {
        if buffer.is_empty() {
            return Err(Error::domain("empty buffer"));
        }
        let len = buffer.len();
        let k = self.window;
        Ok((0..self.window_len())
            .map(|j| buffer[(center + len * (k / len + 1) + j - k) % len])
            .collect())
    }

    pub fn phi_ntru_at(&self, buffer: &[Symbol], center: usize) -> Result<RingElement> {
        self.phi_ntru(&self.window_at(buffer, center)?)
    }

    /// Second half of the NTRU lattice point `(u, u·h)`.
    pub fn ntru_lift(&self, u: &RingElement) -> Result<RingElement> {
        ring_mul(u, &self.h)
    }

    /// `u·h` for `u = φ(window around center)`; the generators read bits
    /// from this element.
    pub fn lattice_point(&self, buffer: &[Symbol], center: usize) -> Result<RingElement> {
        self.ntru_lift(&self.phi_ntru_at(buffer, center)?)
    }

    /// Σ ψ(x_i)·2^(−|i|) as exact numerators Σ ψ(x_i)·2^(k−|i|) over 2^k.
    pub fn phi_weighted(&self, window: &[Symbol]) -> Result<WeightedPoint> {
        self.check_window(window)?;
        let k = self.window;
        let mut numerators = vec![BigInt::zero(); self.embedding.dimension()];
        for (j, &s) in window.iter().enumerate() {
            let weight = BigInt::from(1u8) << (k - j.abs_diff(k));
            for (slot, &c) in numerators.iter_mut().zip(self.embedding.vector(s)) {
                if c != 0 {
                    *slot += &weight * c;
                }
            }
        }
        Ok(WeightedPoint {
            numerators,
            scale_log2: k as u32,
        })
    }

    pub fn d_sl(&self, x: &[Symbol], y: &[Symbol], p: usize) -> Result<MetricValue> {
        d_sl(&self.embedding, x, y, p)
    }

    /// Applies T^steps to an allowed circular state.
    pub fn system_step(&self, state: &[Symbol], steps: usize) -> Result<Vec<Symbol>> {
        if !self.sft.allows_cyclic(state) {
            return Err(Error::domain("state is not an allowed circular word"));
        }
        shift_apply(state, steps)
    }

    /// d_L(φ(x), φ(T(x))) for the windows centred at 0, measured on centred
    /// representatives mod q.
    pub fn shift_distance(&self, state: &[Symbol]) -> Result<f64> {
        let next = self.system_step(state, 1)?;
        self.phi_ntru_at(state, 0)?
            .centered_distance(&self.phi_ntru_at(&next, 0)?)
    }

    /// A uniformly drawn buffer of length N, repaired into the shift. With a
    /// period `p` the buffer repeats a repaired block of length `p`.
    pub fn sample_state(&self, rng: &mut ChaCha8Rng, period: Option<usize>) -> Result<Vec<Symbol>> {
        let n = self.params.dimension();
        let block_len = period.unwrap_or(n);
        if block_len == 0 || n % block_len != 0 {
            return Err(Error::domain(format!("period {block_len} does not divide N = {n}")));
        }
        let mut block: Vec<Symbol> = (0..block_len).map(|_| rng.gen_range(0..3)).collect();
        self.sft.repair_cyclic(&mut block)?;
        let state = block.repeat(n / block_len);
        if !self.sft.allows_cyclic(&state) {
            return Err(Error::construction("periodic extension left the shift"));
        }
        Ok(state)
    }

    /// Largest d_L(φ(x), φ(T(x))) over `samples` sampled allowed states.
    pub fn check_bounded_distance(
        &self,
        samples: usize,
        seed: u64,
        period: Option<usize>,
    ) -> Result<BoundedDistanceReport> {
        if samples == 0 {
            return Err(Error::domain("samples must be at least 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut max_distance: f64 = 0.0;
        for _ in 0..samples {
            let state = self.sample_state(&mut rng, period)?;
            max_distance = max_distance.max(self.shift_distance(&state)?);
        }
        Ok(BoundedDistanceReport {
            max_distance,
            samples,
        })
    }
}
