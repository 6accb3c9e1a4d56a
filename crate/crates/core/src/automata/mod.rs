//! Synchronizing automata, edit distance and block codes.

mod codes;

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Symbol, Word};

pub use codes::{edit_distance, error_capability, levenshtein, min_distance, BlockCode, ErrorCapability};

/// Largest automaton accepted by [`shortest_sync_word`]; the subset search
/// visits up to `2^n` subsets.
pub const MAX_SYNC_STATES: usize = 14;

/// A complete deterministic automaton without initial or final states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Arc<Alphabet>,
    delta: Vec<Vec<usize>>,
}

impl Dfa {
    /// `delta[state][symbol]` is the successor state.
    pub fn new(alphabet: Arc<Alphabet>, delta: Vec<Vec<usize>>) -> Result<Self> {
        let n = delta.len();
        if n == 0 {
            return Err(Error::domain("automaton needs at least one state"));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::domain(format!(
                    "state {q} has {} transitions, expected {}",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::domain(format!("state {q} targets missing state {t}")));
            }
        }
        Ok(Dfa { alphabet, delta })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn transitions(&self) -> &[Vec<usize>] {
        &self.delta
    }

    pub fn step(&self, q: usize, a: Symbol) -> usize {
        self.delta[q][a as usize]
    }

    pub fn run(&self, q: usize, w: &[Symbol]) -> usize {
        w.iter().fold(q, |q, &a| self.step(q, a))
    }

    /// True iff every pair of states can be merged by some word, which holds
    /// exactly when the automaton has a synchronizing word.
    pub fn is_synchronizing(&self) -> bool {
        let n = self.state_count();
        let k = self.alphabet.len();
        // preimage[a][r] = states p with delta(p, a) = r
        let mut preimage = vec![vec![Vec::new(); n]; k];
        for (p, row) in self.delta.iter().enumerate() {
            for (a, &r) in row.iter().enumerate() {
                preimage[a][r].push(p);
            }
        }
        let mut mergeable = vec![false; n * n];
        let mut queue: VecDeque<(usize, usize)> = (0..n).map(|q| (q, q)).collect();
        let mut remaining = n * (n - 1) / 2;
        while let Some((r, s)) = queue.pop_front() {
            for pre in &preimage {
                for &p in &pre[r] {
                    for &q in &pre[s] {
                        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
                        if lo != hi && !mergeable[lo * n + hi] {
                            mergeable[lo * n + hi] = true;
                            remaining -= 1;
                            queue.push_back((lo, hi));
                        }
                    }
                }
            }
        }
        remaining == 0
    }
}

pub fn is_synchronizing_word(dfa: &Dfa, w: &Word) -> Result<bool> {
    if w.alphabet().as_ref() != dfa.alphabet.as_ref() {
        return Err(Error::domain("word and automaton use different alphabets"));
    }
    let target = dfa.run(0, w.symbols());
    Ok((1..dfa.state_count()).all(|q| dfa.run(q, w.symbols()) == target))
}

/// A shortest synchronizing word, found by breadth-first search over subsets
/// of states with symbols tried in alphabet order. Among shortest words the
/// lexicographically least is returned. `None` when the automaton does not
/// synchronize.
pub fn shortest_sync_word(dfa: &Dfa) -> Result<Option<Word>> {
    let n = dfa.state_count();
    if n > MAX_SYNC_STATES {
        return Err(Error::resource(format!(
            "subset search limited to {MAX_SYNC_STATES} states, automaton has {n}"
        )));
    }
    if !dfa.is_synchronizing() {
        return Ok(None);
    }
    let k = dfa.alphabet.len();
    let full: u32 = (1u32 << n) - 1;
    // parent[subset] = (previous subset, symbol); u32::MAX marks unvisited
    let mut parent = vec![(u32::MAX, 0 as Symbol); 1usize << n];
    parent[full as usize] = (full, 0);
    let mut queue = VecDeque::from([full]);
    let mut found = None;
    'search: while let Some(set) = queue.pop_front() {
        if set.count_ones() == 1 {
            found = Some(set);
            break;
        }
        for a in 0..k as Symbol {
            let mut image = 0u32;
            let mut rest = set;
            while rest != 0 {
                let q = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                image |= 1 << dfa.step(q, a);
            }
            if parent[image as usize].0 == u32::MAX {
                parent[image as usize] = (set, a);
                if image.count_ones() == 1 {
                    found = Some(image);
                    break 'search;
                }
                queue.push_back(image);
            }
        }
    }
    let mut set = found.expect("synchronizing automaton reaches a singleton");
    let mut word = Vec::new();
    while set != full {
        let (prev, a) = parent[set as usize];
        word.push(a);
        set = prev;
    }
    word.reverse();
    Ok(Some(Word::new(Arc::clone(&dfa.alphabet), word)?))
}

/// The Černý automaton on `n` states over `{a, b}`: `a` rotates
/// `i -> i+1 mod n`, `b` sends `0 -> 1` and fixes every other state.
pub fn cerny_automaton(n: usize) -> Result<Dfa> {
    if n < 2 {
        return Err(Error::domain("Černý automaton needs n >= 2"));
    }
    let alphabet = Arc::new(Alphabet::new(["a", "b"])?);
    let delta = (0..n)
        .map(|i| vec![(i + 1) % n, if i == 0 { 1 } else { i }])
        .collect();
    Dfa::new(alphabet, delta)
}

/// The Černý bound `(n-1)^2`.
pub fn cerny_bound(n: usize) -> usize {
    n.saturating_sub(1).pow(2)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn identity(n: usize) -> Dfa {
        let ab = Arc::new(Alphabet::new(["a", "b"]).unwrap());
        Dfa::new(ab, (0..n).map(|q| vec![q, q]).collect()).unwrap()
    }

    /// Shortest synchronizing length by trying every word in order of length.
    fn exhaustive_reset_length(dfa: &Dfa, max_len: usize) -> Option<usize> {
        let k = dfa.alphabet().len();
        for len in 0..=max_len {
            let total = k.pow(len as u32);
            for mut code in 0..total {
                let mut w = vec![0; len];
                for slot in w.iter_mut().rev() {
                    *slot = (code % k) as Symbol;
                    code /= k;
                }
                let t = dfa.run(0, &w);
                if (1..dfa.state_count()).all(|q| dfa.run(q, &w) == t) {
                    return Some(len);
                }
            }
        }
        None
    }

    fn random_dfa(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Dfa {
        let ab = Arc::new(Alphabet::numeric(k).unwrap());
        let delta = (0..n)
            .map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect())
            .collect();
        Dfa::new(ab, delta).unwrap()
    }

    #[test]
    fn dfa_validation() {
        let ab = Arc::new(Alphabet::new(["a", "b"]).unwrap());
        assert!(Dfa::new(ab.clone(), vec![]).is_err());
        assert!(Dfa::new(ab.clone(), vec![vec![0]]).is_err());
        assert!(Dfa::new(ab, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn sync_word_examples() {
        let one = identity(1);
        let w = one.alphabet().parse_word("abba").unwrap();
        assert!(is_synchronizing_word(&one, &w).unwrap());
        let id = identity(3);
        assert!(!is_synchronizing_word(&id, &w).unwrap());
        assert_eq!(shortest_sync_word(&id).unwrap(), None);

        let c4 = cerny_automaton(4).unwrap();
        let reset = shortest_sync_word(&c4).unwrap().unwrap();
        assert_eq!(reset.len(), 9);
        assert!(is_synchronizing_word(&c4, &reset).unwrap());
        let other = Arc::new(Alphabet::numeric(2).unwrap());
        assert!(is_synchronizing_word(&c4, &other.parse_word("01").unwrap()).is_err());
    }

    #[test]
    fn single_state_has_empty_reset_word() {
        assert_eq!(shortest_sync_word(&identity(1)).unwrap().unwrap().len(), 0);
    }

    #[test]
    fn cerny_lengths_match_exhaustive_search() {
        for n in 2..=5 {
            let dfa = cerny_automaton(n).unwrap();
            let bfs = shortest_sync_word(&dfa).unwrap().unwrap().len();
            assert_eq!(Some(bfs), exhaustive_reset_length(&dfa, 16));
            assert_eq!(bfs, cerny_bound(n));
        }
        assert!(cerny_automaton(1).is_err());
    }

    #[test]
    fn bfs_returns_least_shortest_word() {
        let c3 = cerny_automaton(3).unwrap();
        assert_eq!(shortest_sync_word(&c3).unwrap().unwrap().to_string(), "baab");
    }

    #[test]
    fn pair_check_agrees_with_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let k = rng.gen_range(1..=3);
            let dfa = random_dfa(&mut rng, n, k);
            let exhaustive = exhaustive_reset_length(&dfa, 10);
            let bfs = shortest_sync_word(&dfa).unwrap();
            match bfs {
                Some(w) => {
                    assert!(is_synchronizing_word(&dfa, &w).unwrap());
                    assert!(w.len() <= cerny_bound(n));
                    assert_eq!(Some(w.len()), exhaustive);
                }
                None => {
                    assert!(!dfa.is_synchronizing());
                    assert_eq!(exhaustive, None);
                }
            }
        }
    }

    #[test]
    fn state_budget() {
        let big = identity(MAX_SYNC_STATES + 1);
        assert!(matches!(shortest_sync_word(&big), Err(Error::Resource(_))));
    }
}
