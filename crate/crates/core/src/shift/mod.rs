//! Shifts of finite type and topological entropy.
//!
//! Points of a shift are represented as finite circular buffers, i.e.
//! periodic points; the language of a shift is the set of finite words in
//! which no forbidden word occurs.

mod entropy;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Budget, Symbol, Word};

pub use entropy::{
    entropy_finite_slope, entropy_transfer_matrix, log2_biguint, EntropyEstimate, EntropyMethod,
    MAX_POWER_ITERATIONS, POWER_ITERATION_TOLERANCE,
};

/// A shift space defined by a finite list of forbidden words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftOfFiniteType {
    alphabet: Arc<Alphabet>,
    forbidden: Vec<Vec<Symbol>>,
    memory: usize,
}

impl ShiftOfFiniteType {
    /// The full shift: nothing forbidden, memory 0.
    pub fn full(alphabet: Arc<Alphabet>) -> Self {
        ShiftOfFiniteType {
            alphabet,
            forbidden: Vec::new(),
            memory: 0,
        }
    }

    pub fn new(alphabet: Arc<Alphabet>, forbidden: &[Word]) -> Result<Self> {
        let mut raw = Vec::with_capacity(forbidden.len());
        for w in forbidden {
            if w.alphabet().as_ref() != alphabet.as_ref() {
                return Err(Error::domain(format!(
                    "forbidden word {w} is over a different alphabet"
                )));
            }
            raw.push(w.symbols().to_vec());
        }
        Self::from_indices(alphabet, raw)
    }

    pub fn from_indices(alphabet: Arc<Alphabet>, mut forbidden: Vec<Vec<Symbol>>) -> Result<Self> {
        let k = alphabet.len() as Symbol;
        for f in &forbidden {
            if f.is_empty() {
                return Err(Error::domain("forbidden words must be nonempty"));
            }
            if f.iter().any(|&s| s >= k) {
                return Err(Error::domain("forbidden word uses a symbol outside the alphabet"));
            }
        }
        forbidden.sort();
        forbidden.dedup();
        let memory = forbidden.iter().map(Vec::len).max().unwrap_or(0);
        Ok(ShiftOfFiniteType {
            alphabet,
            forbidden,
            memory,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// Length of the longest forbidden word; 0 for the full shift.
    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn forbidden(&self) -> &[Vec<Symbol>] {
        &self.forbidden
    }

    pub fn forbidden_words(&self) -> Vec<Word> {
        self.forbidden
            .iter()
            .map(|f| Word::from_trusted(Arc::clone(&self.alphabet), f.clone()))
            .collect()
    }

    pub fn is_full(&self) -> bool {
        self.forbidden.is_empty()
    }

    /// Membership of a word in the language: no forbidden factor occurs.
    pub fn contains(&self, w: &Word) -> Result<bool> {
        if w.alphabet().as_ref() != self.alphabet.as_ref() {
            return Err(Error::domain(format!(
                "word over {} tested against a shift over {}",
                w.alphabet(),
                self.alphabet
            )));
        }
        Ok(self.allows(w.symbols()))
    }

    /// Language membership for raw symbol indices.
    pub fn allows(&self, w: &[Symbol]) -> bool {
        self.forbidden
            .iter()
            .all(|f| f.len() > w.len() || !w.windows(f.len()).any(|win| win == f.as_slice()))
    }

    /// True if some forbidden word ends at position `j` of the circular buffer.
    pub fn forbidden_ends_at(&self, buf: &[Symbol], j: usize) -> bool {
        let len = buf.len();
        self.forbidden.iter().any(|f| {
            let flen = f.len();
            f.iter().enumerate().all(|(t, &s)| {
                // position j - (flen - 1) + t, taken cyclically
                let back = (flen - 1 - t) % len;
                buf[(j + len - back) % len] == s
            })
        })
    }

    /// True if the periodic point with period `buf` lies in the shift.
    pub fn allows_cyclic(&self, buf: &[Symbol]) -> bool {
        !buf.is_empty() && (0..buf.len()).all(|j| !self.forbidden_ends_at(buf, j))
    }

    /// Rewrites `buf` in place until it is cyclically allowed, substituting
    /// the symbol at the end of each forbidden occurrence, scanning left to
    /// right. Returns the number of substitutions made.
    pub fn repair_cyclic(&self, buf: &mut [Symbol]) -> Result<usize> {
        if buf.is_empty() {
            return Err(Error::domain("cannot repair an empty buffer"));
        }
        let k = self.alphabet.len() as Symbol;
        let mut total = 0;
        for _pass in 0..=buf.len() {
            let mut changed = 0;
            for j in 0..buf.len() {
                if !self.forbidden_ends_at(buf, j) {
                    continue;
                }
                let orig = buf[j];
                let mut replacement = (orig + 1) % k;
                for d in 1..k {
                    buf[j] = (orig + d) % k;
                    if !self.forbidden_ends_at(buf, j) {
                        replacement = buf[j];
                        break;
                    }
                }
                buf[j] = replacement;
                changed += 1;
            }
            total += changed;
            if changed == 0 {
                return Ok(total);
            }
        }
        Err(Error::construction(
            "shift is too constrained: repair did not converge",
        ))
    }

    /// Number of allowed symbols, i.e. |B_1|.
    pub fn allowed_symbol_count(&self) -> usize {
        (0..self.alphabet.len() as Symbol)
            .filter(|&a| self.allows(&[a]))
            .count()
    }

    /// The block graph on allowed words of length `memory - 1`.
    pub fn block_graph(&self, budget: &Budget) -> Result<BlockGraph> {
        BlockGraph::build(self, budget)
    }

    /// |B_n(X)|, the number of allowed words of length `n`.
    pub fn count_words(&self, n: usize) -> Result<BigUint> {
        self.count_words_with_budget(n, &Budget::default())
    }

    pub fn count_words_with_budget(&self, n: usize, budget: &Budget) -> Result<BigUint> {
        if n == 0 {
            return Err(Error::domain("count_words requires n >= 1"));
        }
        let graph = self.block_graph(budget)?;
        let block = graph.block_len;
        if n < block {
            let k = self.alphabet.len();
            budget.check_power(k as u64, n as u32)?;
            let mut count = 0u64;
            let mut prefix = Vec::with_capacity(n);
            self.count_extensions(&mut prefix, n, &mut count);
            return Ok(BigUint::from(count));
        }
        let mut counts: Vec<BigUint> = vec![BigUint::one(); graph.states.len()];
        for _ in block..n {
            let mut next = vec![BigUint::zero(); graph.states.len()];
            for &(s, t) in &graph.edges {
                if !counts[s].is_zero() {
                    next[t] += &counts[s];
                }
            }
            counts = next;
        }
        Ok(counts.into_iter().sum())
    }

    fn count_extensions(&self, prefix: &mut Vec<Symbol>, n: usize, count: &mut u64) {
        if prefix.len() == n {
            *count += 1;
            return;
        }
        for a in 0..self.alphabet.len() as Symbol {
            prefix.push(a);
            if self.suffix_ok(prefix) {
                self.count_extensions(prefix, n, count);
            }
            prefix.pop();
        }
    }

    /// True if no forbidden word is a suffix of `w`.
    fn suffix_ok(&self, w: &[Symbol]) -> bool {
        self.forbidden
            .iter()
            .all(|f| f.len() > w.len() || !w.ends_with(f))
    }
}

impl fmt::Display for ShiftOfFiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alphabet={} forbidden=[", self.alphabet)?;
        for (i, w) in self.forbidden_words().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("]")
    }
}

/// Transition structure on allowed blocks of length `memory - 1`; an edge
/// `s -> t` exists for every symbol `a` with `s·a` allowed and `t` the
/// last `memory - 1` symbols of `s·a`. Parallel edges are kept.
#[derive(Debug, Clone)]
pub struct BlockGraph {
    pub block_len: usize,
    pub states: Vec<Vec<Symbol>>,
    pub edges: Vec<(usize, usize)>,
}

impl BlockGraph {
    fn build(sft: &ShiftOfFiniteType, budget: &Budget) -> Result<BlockGraph> {
        let block_len = sft.memory.saturating_sub(1);
        let k = sft.alphabet.len();
        budget.check_power(k as u64, block_len as u32 + 1)?;
        let mut states = Vec::new();
        let mut prefix = Vec::with_capacity(block_len);
        collect_allowed(sft, &mut prefix, block_len, &mut states);
        let index: HashMap<&[Symbol], usize> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let mut edges = Vec::new();
        let mut extended = Vec::with_capacity(block_len + 1);
        for (i, s) in states.iter().enumerate() {
            for a in 0..k as Symbol {
                extended.clear();
                extended.extend_from_slice(s);
                extended.push(a);
                if sft.suffix_ok(&extended) {
                    let target = &extended[extended.len() - block_len..];
                    edges.push((i, index[target]));
                }
            }
        }
        Ok(BlockGraph {
            block_len,
            states,
            edges,
        })
    }
}

fn collect_allowed(
    sft: &ShiftOfFiniteType,
    prefix: &mut Vec<Symbol>,
    len: usize,
    out: &mut Vec<Vec<Symbol>>,
) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    for a in 0..sft.alphabet.len() as Symbol {
        prefix.push(a);
        if sft.suffix_ok(prefix) {
            collect_allowed(sft, prefix, len, out);
        }
        prefix.pop();
    }
}

/// Applies the shift map `steps` times to a circular buffer: position `i`
/// of the result holds position `i + steps` of the input.
pub fn shift_apply<T: Clone>(x: &[T], steps: usize) -> Result<Vec<T>> {
    if x.is_empty() {
        return Err(Error::domain("shift of an empty buffer"));
    }
    let mut out = x.to_vec();
    out.rotate_left(steps % x.len());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> Arc<Alphabet> {
        Arc::new(Alphabet::numeric(2).unwrap())
    }

    fn sft(alphabet: &Arc<Alphabet>, forbidden: &[&str]) -> ShiftOfFiniteType {
        let words: Vec<Word> = forbidden
            .iter()
            .map(|f| alphabet.parse_word(f).unwrap())
            .collect();
        ShiftOfFiniteType::new(Arc::clone(alphabet), &words).unwrap()
    }

    fn brute_count(s: &ShiftOfFiniteType, n: usize) -> u64 {
        let k = s.alphabet().len() as u64;
        (0..k.pow(n as u32))
            .filter(|&code| {
                let mut c = code;
                let mut w = vec![0; n];
                for slot in w.iter_mut().rev() {
                    *slot = (c % k) as Symbol;
                    c /= k;
                }
                s.allows(&w)
            })
            .count() as u64
    }

    #[test]
    fn contains_examples() {
        let b = binary();
        let full = ShiftOfFiniteType::full(b.clone());
        assert!(full.contains(&b.parse_word("0110").unwrap()).unwrap());
        let golden = sft(&b, &["11"]);
        assert!(!golden.contains(&b.parse_word("0110").unwrap()).unwrap());
        assert!(golden.contains(&b.parse_word("01010").unwrap()).unwrap());
        let other = Arc::new(Alphabet::from_chars("ab").unwrap());
        assert!(golden.contains(&other.parse_word("ab").unwrap()).is_err());
    }

    #[test]
    fn rejects_empty_forbidden_word() {
        let b = binary();
        assert!(ShiftOfFiniteType::new(b.clone(), &[Word::empty(b.clone())]).is_err());
        assert!(ShiftOfFiniteType::from_indices(b, vec![vec![2]]).is_err());
    }

    #[test]
    fn memory_tracks_longest_word() {
        let b = binary();
        assert_eq!(ShiftOfFiniteType::full(b.clone()).memory(), 0);
        assert_eq!(sft(&b, &["11", "010"]).memory(), 3);
    }

    #[test]
    fn count_examples() {
        let b = binary();
        assert_eq!(
            ShiftOfFiniteType::full(b.clone()).count_words(5).unwrap(),
            BigUint::from(32u32)
        );
        let golden = sft(&b, &["11"]);
        let counts: Vec<BigUint> = (1..=4).map(|n| golden.count_words(n).unwrap()).collect();
        assert_eq!(counts, [2u32, 3, 5, 8].map(BigUint::from).to_vec());
        assert_eq!(sft(&b, &["0"]).count_words(4).unwrap(), BigUint::one());
        assert!(golden.count_words(0).is_err());
    }

    #[test]
    fn count_matches_brute_force_for_mixed_lengths() {
        let t = Arc::new(Alphabet::numeric(3).unwrap());
        let s = sft(&t, &["2", "010", "11"]);
        for n in 1..=9 {
            assert_eq!(s.count_words(n).unwrap(), BigUint::from(brute_count(&s, n)), "n={n}");
        }
    }

    #[test]
    fn cyclic_membership_wraps() {
        let b = binary();
        let golden = sft(&b, &["11"]);
        assert!(golden.allows(&[1, 0, 1]));
        assert!(!golden.allows_cyclic(&[1, 0, 1]));
        assert!(golden.allows_cyclic(&[1, 0, 1, 0]));
        // a forbidden word longer than the period still wraps around
        assert!(!golden.allows_cyclic(&[1]));
    }

    #[test]
    fn repair_produces_allowed_buffers() {
        let b = binary();
        let golden = sft(&b, &["11"]);
        let mut buf = vec![1, 1, 1, 0, 1, 1];
        let fixes = golden.repair_cyclic(&mut buf).unwrap();
        assert!(fixes > 0);
        assert!(golden.allows_cyclic(&buf));

        let mut ok = vec![0, 1, 0, 1];
        assert_eq!(golden.repair_cyclic(&mut ok).unwrap(), 0);
        assert_eq!(ok, vec![0, 1, 0, 1]);

        let dead = sft(&b, &["0", "1"]);
        assert!(matches!(dead.repair_cyclic(&mut [0, 1]), Err(Error::Construction(_))));
    }

    #[test]
    fn shift_apply_examples() {
        let x = ['a', 'b', 'c'];
        assert_eq!(shift_apply(&x, 0).unwrap(), vec!['a', 'b', 'c']);
        assert_eq!(shift_apply(&x, 1).unwrap(), vec!['b', 'c', 'a']);
        assert_eq!(shift_apply(&x, 3).unwrap(), vec!['a', 'b', 'c']);
        assert!(shift_apply::<char>(&[], 1).is_err());
    }
}
