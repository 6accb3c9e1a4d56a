//! Deterministic byte streams from SHA-256 in counter mode.

use sha2::{Digest, Sha256};

/// `SHA-256(prefix || counter)` for counter = 0, 1, 2, ...; the prefix is a
/// domain tag followed by length-prefixed inputs, so distinct input tuples
/// never share a prefix.
#[derive(Debug, Clone)]
pub struct HashStream {
    prefix: Vec<u8>,
    counter: u64,
    block: [u8; 32],
    pos: usize,
}

impl HashStream {
    pub fn new(domain: &str, inputs: &[&[u8]]) -> Self {
        let mut prefix = Vec::new();
        for part in std::iter::once(domain.as_bytes()).chain(inputs.iter().copied()) {
            prefix.extend_from_slice(&(part.len() as u64).to_be_bytes());
            prefix.extend_from_slice(part);
        }
        HashStream {
            prefix,
            counter: 0,
            block: [0; 32],
            pos: 32,
        }
    }

    pub fn next_byte(&mut self) -> u8 {
        if self.pos == 32 {
            let mut h = Sha256::new();
            h.update(&self.prefix);
            h.update(self.counter.to_be_bytes());
            self.block.copy_from_slice(&h.finalize());
            self.counter += 1;
            self.pos = 0;
        }
        let b = self.block[self.pos];
        self.pos += 1;
        b
    }

    pub fn fill(&mut self, out: &mut [u8]) {
        for b in out {
            *b = self.next_byte();
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut buf = [0u8; 8];
        self.fill(&mut buf);
        u64::from_be_bytes(buf)
    }

    /// Uniform integer in `[0, bound)` by rejection sampling.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}

/// Single SHA-256 digest of a domain-separated input tuple.
pub fn digest(domain: &str, inputs: &[&[u8]]) -> [u8; 32] {
    let mut out = [0u8; 32];
    HashStream::new(domain, inputs).fill(&mut out);
    out
}
