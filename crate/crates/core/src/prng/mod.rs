//! The lattice-symbolic generator and keyed function, with statistical
//! checks that try to tell their output apart from uniform bits.

mod harness;
mod stats;

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hashing::HashStream;
use crate::lattice::{LatticeSymbolicSystem, RingElement};
use crate::words::Symbol;

pub use harness::{
    binomial_band, distinguisher_harness, BitGenerator, ChaChaGenerator, ConstantGenerator,
    CounterGenerator, HarnessReport, PrgGenerator, TestSummary, BAND_CONFIDENCE,
};
pub use stats::{
    block_frequency_test, monobit_test, runs_test, StatTest, TestReport, DEFAULT_SIGNIFICANCE,
    MIN_TEST_BITS,
};

pub const MIN_SEED_BITS: usize = 16;

/// Width of the range of the step hash H.
pub const PRF_STEP_RANGE_LOG2: u32 = 20;

/// Pairs of bits, most significant first: 00 → −1, 01 → 0, 10 → 1, 11 → none.
fn push_pair_symbols(bytes: &[u8], out: &mut Vec<Symbol>, limit: Option<usize>) {
    for &b in bytes {
        for shift in [6, 4, 2, 0] {
            if limit.is_some_and(|l| out.len() >= l) {
                return;
            }
            let pair = (b >> shift) & 0b11;
            if pair != 0b11 {
                out.push(pair as Symbol);
            }
        }
    }
}

/// Maps seed bytes to an allowed circular word of length N.
///
/// Seed symbols come first; a short seed is extended with symbols drawn the
/// same way from a hash stream keyed by the seed, and symbols past position
/// N are added modulo 3 onto position `i mod N`. The buffer is then repaired
/// into the shift.
pub fn seed_to_state(seed: &[u8], sys: &LatticeSymbolicSystem) -> Result<Vec<Symbol>> {
    if seed.len() * 8 < MIN_SEED_BITS {
        return Err(Error::domain(format!(
            "seed has {} bits, need at least {MIN_SEED_BITS}",
            seed.len() * 8
        )));
    }
    let n = sys.params().dimension();
    let mut symbols = Vec::with_capacity(n.max(seed.len() * 4));
    push_pair_symbols(seed, &mut symbols, None);
    let mut state: Vec<Symbol> = symbols.iter().take(n).copied().collect();
    for (i, &s) in symbols.iter().enumerate().skip(n) {
        state[i % n] = (state[i % n] + s) % 3;
    }
    if state.len() < n {
        let mut stream = HashStream::new("seed-extend", &[seed]);
        let mut byte = [0u8];
        while state.len() < n {
            stream.fill(&mut byte);
            push_pair_symbols(&byte, &mut state, Some(n));
        }
    }
    sys.sft().repair_cyclic(&mut state)?;
    Ok(state)
}

/// Concatenates, per coefficient in index order, the ⌊log₂ q⌋ low-order
/// bits of each canonical coefficient (most significant first), truncated
/// to `m` bits.
pub fn extract_m(elem: &RingElement, m: usize) -> Result<Vec<bool>> {
    let width = elem.params().bits_per_coefficient();
    let available = elem.coeffs().len() * width;
    if m == 0 || m > available {
        return Err(Error::domain(format!(
            "cannot extract {m} bits; this element holds 1..={available}"
        )));
    }
    let mut out = Vec::with_capacity(m);
    'coeffs: for &c in elem.coeffs() {
        for b in (0..width).rev() {
            if out.len() == m {
                break 'coeffs;
            }
            out.push((c >> b) & 1 == 1);
        }
    }
    Ok(out)
}

fn extract_all(elem: &RingElement) -> Vec<bool> {
    let m = elem.coeffs().len() * elem.params().bits_per_coefficient();
    extract_m(elem, m).expect("full width is always extractable")
}

/// Packs bits into bytes, most significant bit first, zero-padding the tail.
pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i))))
        .collect()
}

pub fn unpack_bits(bytes: &[u8]) -> Vec<bool> {
    bytes
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1 == 1))
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Reservoir generator: block `t ≥ 1` is the full extraction of
/// `φ(T^(t·r)(x_s))·h`, and reads drain the blocks in order.
#[derive(Debug, Clone)]
pub struct PrgState {
    sys: Arc<LatticeSymbolicSystem>,
    state: Vec<Symbol>,
    blocks: u64,
    reservoir: VecDeque<bool>,
}

impl PrgState {
    pub fn new(sys: Arc<LatticeSymbolicSystem>, seed: &[u8]) -> Result<Self> {
        let state = seed_to_state(seed, &sys)?;
        Ok(PrgState {
            sys,
            state,
            blocks: 0,
            reservoir: VecDeque::new(),
        })
    }

    pub fn system(&self) -> &LatticeSymbolicSystem {
        &self.sys
    }

    /// The seed point x_s.
    pub fn initial_state(&self) -> &[Symbol] {
        &self.state
    }

    /// Number of shift steps applied so far.
    pub fn steps_taken(&self) -> u64 {
        self.blocks * self.sys.step() as u64
    }

    fn refill(&mut self) {
        self.blocks += 1;
        let n = self.state.len() as u64;
        let offset = ((self.blocks % n) * (self.sys.step() as u64 % n)) % n;
        let point = self
            .sys
            .lattice_point(&self.state, offset as usize)
            .expect("state and window sizes are fixed at construction");
        self.reservoir.extend(extract_all(&point));
    }

    pub fn next_bits(&mut self, m: usize) -> Result<Vec<bool>> {
        if m == 0 {
            return Err(Error::domain("bit count must be positive"));
        }
        while self.reservoir.len() < m {
            self.refill();
        }
        Ok(self.reservoir.drain(..m).collect())
    }

    pub fn next_bytes(&mut self, count: usize) -> Result<Vec<u8>> {
        Ok(pack_bits(&self.next_bits(count * 8)?))
    }
}

/// `prg_next` on a [`PrgState`].
pub fn prg_next(state: &mut PrgState, m: usize) -> Result<Vec<bool>> {
    state.next_bits(m)
}

/// Key with its derived starting point `s_K`.
#[derive(Debug, Clone)]
pub struct PrfKey {
    sys: Arc<LatticeSymbolicSystem>,
    key: Vec<u8>,
    start: Vec<Symbol>,
}

impl PrfKey {
    pub fn new(sys: Arc<LatticeSymbolicSystem>, key: &[u8]) -> Result<Self> {
        let start = seed_to_state(key, &sys)?;
        Ok(PrfKey {
            sys,
            key: key.to_vec(),
            start,
        })
    }

    pub fn starting_point(&self) -> &[Symbol] {
        &self.start
    }

    /// Lower end of the range of H, taken as N.
    pub fn n_min(&self) -> u64 {
        self.sys.params().dimension() as u64
    }

    /// H(K, x) in `[n_min, n_min + 2^20)`.
    pub fn steps(&self, x: &[u8]) -> u64 {
        let mut stream = HashStream::new("prf-steps", &[&self.key, x]);
        self.n_min() + stream.below(1 << PRF_STEP_RANGE_LOG2)
    }
}

/// F_K(x) = Extract_m(φ(T^H(K,x)(s_K))·h).
pub fn prf_eval(key: &PrfKey, x: &[u8], m: usize) -> Result<Vec<bool>> {
    let n = key.start.len() as u64;
    let offset = (key.steps(x) % n) as usize;
    let point = key.sys.lattice_point(&key.start, offset)?;
    extract_m(&point, m)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::lattice::{NtruParams, SystemConfig};

    fn system(n: usize, q: u64, window: usize, forbidden: &[&str]) -> Arc<LatticeSymbolicSystem> {
        Arc::new(
            LatticeSymbolicSystem::new(&SystemConfig {
                n,
                q,
                window,
                forbidden: forbidden.iter().map(|s| s.to_string()).collect(),
                ..SystemConfig::default()
            })
            .unwrap(),
        )
    }

    #[test]
    fn seed_mapping_is_literal_for_long_seeds() {
        let sys = system(8, 17, 2, &[]);
        // 00 01 10 11 | 00 00 01 01 | 10 10 ...
        let state = seed_to_state(&[0b0001_1011, 0b0000_0101, 0b1010_1010], &sys).unwrap();
        // symbols: 0 1 2 | 0 0 1 1 | 2 2 2 2 → fold positions 8..10 onto 0..2
        assert_eq!(state, vec![2, 0, 1, 0, 0, 1, 1, 2]);
    }

    #[test]
    fn seed_to_state_rules() {
        let sys = system(64, 257, 8, &[]);
        assert!(seed_to_state(&[0xAB], &sys).is_err());
        let a = seed_to_state(&[0xDE, 0xAD], &sys).unwrap();
        assert_eq!(a, seed_to_state(&[0xDE, 0xAD], &sys).unwrap());
        assert_eq!(a.len(), 64);
        // 0xDE = 11 01 11 10, 0xAD = 10 10 11 01
        assert_eq!(&a[..5], &[1, 2, 2, 2, 1]);

        let constrained = system(64, 257, 8, &["1 1", "-1 -1"]);
        let s = seed_to_state(&[0xFF, 0xFF, 0xAA, 0xAA], &constrained).unwrap();
        assert!(constrained.sft().allows_cyclic(&s));
    }

    #[test]
    fn one_bit_seed_changes_move_the_state() {
        let sys = system(64, 257, 8, &[]);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..2000 {
            let len = rng.gen_range(2..40);
            let seed: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            let mut flipped = seed.clone();
            let bit = rng.gen_range(0..len * 8);
            flipped[bit / 8] ^= 0x80 >> (bit % 8);
            assert_ne!(seed_to_state(&seed, &sys).unwrap(), seed_to_state(&flipped, &sys).unwrap());
        }
    }

    #[test]
    fn extraction() {
        let p = NtruParams::new(4, 257).unwrap();
        assert_eq!(extract_m(&RingElement::zero(p), 32).unwrap(), vec![false; 32]);
        let e = RingElement::from_coeffs(p, vec![1, 0, 256, 3]).unwrap();
        assert_eq!(bits_to_string(&extract_m(&e, 8).unwrap()), "00000001");
        let full = extract_m(&e, 32).unwrap();
        assert_eq!(bits_to_string(&full[16..]), "0000000000000011");
        assert_eq!(extract_m(&e, 8).unwrap(), extract_m(&e, 16).unwrap()[..8]);
        assert!(extract_m(&e, 33).is_err());
        assert!(extract_m(&e, 0).is_err());
        // q = 4099 keeps 12 bits, dropping the top bit of 4098
        let p = NtruParams::new(1, 4099).unwrap();
        let e = RingElement::from_coeffs(p, vec![4098]).unwrap();
        assert_eq!(bits_to_string(&extract_m(&e, 12).unwrap()), "000000000010");
    }

    #[test]
    fn bit_packing_roundtrip() {
        let bits = unpack_bits(&[0xDE, 0xAD]);
        assert_eq!(bits_to_string(&bits), "1101111010101101");
        assert_eq!(pack_bits(&bits), vec![0xDE, 0xAD]);
        assert_eq!(pack_bits(&[true, false, true]), vec![0b1010_0000]);
    }

    #[test]
    fn golden_vector() {
        let sys = system(64, 257, 8, &[]);
        let mut g = PrgState::new(sys, &[0xDE, 0xAD, 0xBE, 0xEF]).unwrap();
        assert_eq!(
            bits_to_string(&g.next_bits(32).unwrap()),
            "11100101001111100111101110001101"
        );
    }

    #[test]
    fn prg_chunking_does_not_matter() {
        let sys = system(64, 257, 8, &[]);
        let mut a = PrgState::new(sys.clone(), &[1, 2, 3]).unwrap();
        let mut b = PrgState::new(sys, &[1, 2, 3]).unwrap();
        let mut left = a.next_bits(4).unwrap();
        left.extend(a.next_bits(4).unwrap());
        assert_eq!(left, b.next_bits(8).unwrap());
        let mut left = Vec::new();
        for m in [1, 511, 7, 2000, 3] {
            left.extend(a.next_bits(m).unwrap());
        }
        assert_eq!(left, b.next_bits(2522).unwrap());
        assert!(a.next_bits(0).is_err());
    }

    #[test]
    fn prg_first_block_follows_definition() {
        let sys = system(64, 257, 8, &[]);
        let mut g = PrgState::new(sys.clone(), &[9, 9]).unwrap();
        let x = g.initial_state().to_vec();
        let expected = extract_m(&sys.lattice_point(&x, 17).unwrap(), 512).unwrap();
        assert_eq!(g.next_bits(512).unwrap(), expected);
        let second = extract_m(&sys.lattice_point(&x, 34).unwrap(), 512).unwrap();
        assert_eq!(g.next_bits(512).unwrap(), second);
        assert_eq!(g.steps_taken(), 34);
    }

    #[test]
    fn unit_step_walks_one_symbol_per_block() {
        let sys = Arc::new(
            LatticeSymbolicSystem::new(&SystemConfig {
                n: 64,
                q: 257,
                window: 8,
                step: Some(1),
                ..SystemConfig::default()
            })
            .unwrap(),
        );
        let mut g = PrgState::new(sys.clone(), &[9, 9]).unwrap();
        let x = g.initial_state().to_vec();
        g.next_bits(512).unwrap();
        let second = extract_m(&sys.lattice_point(&x, 2).unwrap(), 512).unwrap();
        assert_eq!(g.next_bits(512).unwrap(), second);
        assert_eq!(g.steps_taken(), 2);
    }

    #[test]
    fn degenerate_shift_gives_constant_output() {
        let sys = Arc::new(
            LatticeSymbolicSystem::new(&SystemConfig {
                n: 64,
                q: 257,
                window: 8,
                forbidden: vec!["-1".into(), "1".into()],
                entropy_floor: 0.0,
                ..SystemConfig::default()
            })
            .unwrap(),
        );
        let mut g = PrgState::new(sys, &[0xDE, 0xAD, 0xBE, 0xEF]).unwrap();
        let bits = g.next_bits(4096).unwrap();
        assert!(bits.iter().all(|&b| !b));
        assert!(!monobit_test(&bits).unwrap().passed);
    }

    #[test]
    fn prf_basics() {
        let sys = system(64, 257, 8, &[]);
        let key = PrfKey::new(sys.clone(), b"key material").unwrap();
        let a = prf_eval(&key, b"input", 64).unwrap();
        assert_eq!(a, prf_eval(&key, b"input", 64).unwrap());
        let h = key.steps(b"input");
        assert!(h >= 64 && h < 64 + (1 << 20));
        let other = PrfKey::new(sys, b"other key").unwrap();
        assert_ne!(a, prf_eval(&other, b"input", 64).unwrap());
        assert!(prf_eval(&key, b"input", 513).is_err());
    }
}
