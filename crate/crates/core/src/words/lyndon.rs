use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use super::{Alphabet, Budget, Symbol, Word};
use crate::error::{Error, Result};

/// The Möbius function.
pub fn mobius(d: u64) -> Result<i8> {
    if d == 0 {
        return Err(Error::domain("mobius is undefined at 0"));
    }
    let mut n = d;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// Number of Lyndon words of length `n` over `k` symbols, via Möbius
/// inversion of the necklace count. Exact for all inputs.
pub fn count_lyndon(n: u32, k: u64) -> Result<BigUint> {
    if n == 0 || k == 0 {
        return Err(Error::domain("count_lyndon requires n >= 1 and k >= 1"));
    }
    let base = BigInt::from(k);
    let mut sum = BigInt::zero();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        match mobius(d as u64)? {
            0 => {}
            1 => sum += num_traits::pow(base.clone(), (n / d) as usize),
            _ => sum -= num_traits::pow(base.clone(), (n / d) as usize),
        }
    }
    let (quot, rem) = sum.div_rem(&BigInt::from(n));
    assert!(
        rem.is_zero(),
        "necklace sum for n={n}, k={k} is not divisible by n"
    );
    Ok(quot
        .to_biguint()
        .expect("Lyndon counts are nonnegative"))
}

/// Lyndon test on a raw sequence: strictly smaller than every proper rotation.
/// Empty input is not Lyndon.
pub fn is_lyndon_slice<T: Ord>(s: &[T]) -> bool {
    let n = s.len();
    if n == 0 {
        return false;
    }
    // One Duval scan: s is Lyndon iff the scan reaches the end with period n.
    let (mut k, mut j) = (0usize, 1usize);
    while j < n {
        match s[k].cmp(&s[j]) {
            std::cmp::Ordering::Less => k = 0,
            std::cmp::Ordering::Equal => k += 1,
            std::cmp::Ordering::Greater => return false,
        }
        j += 1;
    }
    k == 0
}

pub fn is_lyndon(w: &Word) -> Result<bool> {
    w.require_nonempty()?;
    Ok(is_lyndon_slice(w.symbols()))
}

/// Lengths of the Chen-Fox-Lyndon factors of `s`, left to right (Duval).
pub fn duval_factor_lengths<T: Ord>(s: &[T]) -> Vec<usize> {
    let n = s.len();
    let mut lengths = Vec::new();
    let mut i = 0;
    while i < n {
        let (mut k, mut j) = (i, i + 1);
        while j < n && s[k] <= s[j] {
            if s[k] < s[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        let period = j - k;
        while i <= k {
            lengths.push(period);
            i += period;
        }
    }
    lengths
}

/// A word written as a nonincreasing product of Lyndon words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LyndonFactorization {
    factors: Vec<Word>,
}

impl LyndonFactorization {
    pub fn factors(&self) -> &[Word] {
        &self.factors
    }

    pub fn into_factors(self) -> Vec<Word> {
        self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn concatenation(&self) -> Word {
        let alphabet = Arc::clone(self.factors[0].alphabet());
        Word::concat(alphabet, &self.factors)
    }
}

impl std::fmt::Display for LyndonFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, w) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if w.alphabet().is_compact() {
                write!(f, "{w}")?;
            } else {
                write!(f, "({w})")?;
            }
        }
        Ok(())
    }
}

/// Chen-Fox-Lyndon factorization in linear time.
pub fn duval_factorize(w: &Word) -> Result<LyndonFactorization> {
    w.require_nonempty()?;
    let mut start = 0;
    let factors = duval_factor_lengths(w.symbols())
        .into_iter()
        .map(|len| {
            let f = w.slice(start..start + len);
            start += len;
            f
        })
        .collect();
    Ok(LyndonFactorization { factors })
}

/// Visits every Lyndon word over `0..k` whose length divides `n`, in
/// increasing lexicographic order (Fredricksen-Kessler-Maiorana successor rule).
pub(crate) fn for_each_lyndon_dividing<F: FnMut(&[Symbol])>(n: usize, k: Symbol, mut visit: F) {
    debug_assert!(n >= 1 && k >= 1);
    let top = k - 1;
    let divides: Vec<bool> = (0..=n).map(|len| len > 0 && n % len == 0).collect();
    let mut w: Vec<Symbol> = Vec::with_capacity(n);
    w.push(0);
    loop {
        if divides[w.len()] {
            visit(&w);
        }
        let period = w.len();
        while w.len() < n {
            w.push(w[w.len() - period]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
}

fn check_enumeration(n: u32, k: usize, budget: &Budget) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("length must be at least 1"));
    }
    if k == 0 {
        return Err(Error::domain("alphabet must be nonempty"));
    }
    budget.check_power(k as u64, n)?;
    Ok(())
}

/// Lyndon words over `0..k` with length dividing `n`, as raw index vectors.
pub fn lyndon_indices_dividing(n: u32, k: usize, budget: &Budget) -> Result<Vec<Vec<Symbol>>> {
    check_enumeration(n, k, budget)?;
    let mut out = Vec::new();
    for_each_lyndon_dividing(n as usize, k as Symbol, |w| out.push(w.to_vec()));
    Ok(out)
}

/// All Lyndon words over `alphabet` whose length divides `n`, in strictly
/// increasing lexicographic order.
pub fn lyndon_words_dividing(
    n: u32,
    alphabet: &Arc<Alphabet>,
    budget: &Budget,
) -> Result<Vec<Word>> {
    Ok(lyndon_indices_dividing(n, alphabet.len(), budget)?
        .into_iter()
        .map(|s| Word::from_trusted(Arc::clone(alphabet), s))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force straight from the definition.
    fn lyndon_by_rotations(s: &[Symbol]) -> bool {
        !s.is_empty()
            && (1..s.len()).all(|r| {
                let rot: Vec<Symbol> = s[r..].iter().chain(&s[..r]).copied().collect();
                s < rot.as_slice()
            })
    }

    fn all_words(n: usize, k: Symbol) -> impl Iterator<Item = Vec<Symbol>> {
        let total = (k as u64).pow(n as u32);
        (0..total).map(move |mut code| {
            let mut w = vec![0; n];
            for slot in w.iter_mut().rev() {
                *slot = (code % k as u64) as Symbol;
                code /= k as u64;
            }
            w
        })
    }

    fn trial_division_mobius(d: u64) -> i8 {
        let mut factors = Vec::new();
        let mut n = d;
        for p in 2..=d {
            while n % p == 0 {
                factors.push(p);
                n /= p;
            }
        }
        let mut distinct = factors.clone();
        distinct.dedup();
        if distinct.len() != factors.len() {
            0
        } else if factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(4).unwrap(), 0);
        assert_eq!(mobius(6).unwrap(), 1);
        assert!(mobius(0).is_err());
        for d in 1..500 {
            assert_eq!(mobius(d).unwrap(), trial_division_mobius(d), "d={d}");
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_lyndon(1, 7).unwrap(), BigUint::from(7u32));
        assert_eq!(count_lyndon(4, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(count_lyndon(6, 2).unwrap(), BigUint::from(9u32));
        assert!(count_lyndon(0, 2).is_err());
        assert!(count_lyndon(3, 0).is_err());
    }

    #[test]
    fn count_matches_enumeration() {
        for (k, max_n) in [(2, 12), (3, 7)] {
            for n in 1..=max_n {
                let brute = all_words(n, k).filter(|w| lyndon_by_rotations(w)).count();
                assert_eq!(count_lyndon(n as u32, k as u64).unwrap(), BigUint::from(brute));
            }
        }
    }

    #[test]
    fn count_handles_wide_results() {
        // 2^127 / 127 territory overflows u128 intermediate arithmetic.
        let c = count_lyndon(127, 2).unwrap();
        let expected = (BigUint::from(1u8) << 127usize) - BigUint::from(2u8);
        assert_eq!(c, expected / BigUint::from(127u8));
    }

    #[test]
    fn necklace_identity() {
        for k in 1..=4u64 {
            for n in 1..=20u32 {
                let total: BigUint = (1..=n)
                    .filter(|d| n % d == 0)
                    .map(|d| count_lyndon(d, k).unwrap() * BigUint::from(d))
                    .sum();
                assert_eq!(total, num_traits::pow(BigUint::from(k), n as usize));
            }
        }
    }

    #[test]
    fn lyndon_examples() {
        let ab = Arc::new(Alphabet::from_chars("abn").unwrap());
        assert!(is_lyndon(&ab.parse_word("aab").unwrap()).unwrap());
        assert!(!is_lyndon(&ab.parse_word("anan").unwrap()).unwrap());
        assert!(is_lyndon(&ab.parse_word("a").unwrap()).unwrap());
        assert!(is_lyndon(&Word::empty(ab)).is_err());
    }

    #[test]
    fn lyndon_scan_agrees_with_rotations() {
        for n in 1..=9 {
            for w in all_words(n, 3) {
                assert_eq!(is_lyndon_slice(&w), lyndon_by_rotations(&w), "{w:?}");
            }
        }
    }

    #[test]
    fn factorize_examples() {
        let ab = Arc::new(Alphabet::from_chars("abn").unwrap());
        let show = |s: &str| duval_factorize(&ab.parse_word(s).unwrap()).unwrap().to_string();
        assert_eq!(show("banana"), "b an an a");
        assert_eq!(show("ab"), "ab");
        assert_eq!(show("aaaa"), "a a a a");
        assert!(duval_factorize(&Word::empty(ab.clone())).is_err());
    }

    /// Every split of `s` into nonincreasing Lyndon factors.
    fn all_lyndon_factorizations(s: &[Symbol]) -> Vec<Vec<usize>> {
        fn go(s: &[Symbol], prev: Option<&[Symbol]>, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if s.is_empty() {
                out.push(acc.clone());
                return;
            }
            for len in 1..=s.len() {
                let f = &s[..len];
                if lyndon_by_rotations(f) && prev.map_or(true, |p| p >= f) {
                    acc.push(len);
                    go(&s[len..], Some(f), acc, out);
                    acc.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(s, None, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn factorization_is_the_unique_one() {
        for n in 1..=8 {
            for w in all_words(n, 3) {
                let all = all_lyndon_factorizations(&w);
                assert_eq!(all.len(), 1, "{w:?}");
                assert_eq!(all[0], duval_factor_lengths(&w), "{w:?}");
            }
        }
    }

    #[test]
    fn dividing_examples() {
        let b = Budget::default();
        assert_eq!(
            lyndon_indices_dividing(2, 2, &b).unwrap(),
            vec![vec![0], vec![0, 1], vec![1]]
        );
        assert_eq!(
            lyndon_indices_dividing(3, 2, &b).unwrap(),
            vec![vec![0], vec![0, 0, 1], vec![0, 1, 1], vec![1]]
        );
        let a = Arc::new(Alphabet::new(["a"]).unwrap());
        let words = lyndon_words_dividing(1, &a, &b).unwrap();
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].to_string(), "a");
    }

    #[test]
    fn dividing_matches_filter() {
        let b = Budget::default();
        for k in 1..=3 {
            for n in 1..=8usize {
                let mut expected: Vec<Vec<Symbol>> = (1..=n)
                    .filter(|d| n % d == 0)
                    .flat_map(|d| all_words(d, k).filter(|w| lyndon_by_rotations(w)))
                    .collect();
                expected.sort();
                assert_eq!(lyndon_indices_dividing(n as u32, k as usize, &b).unwrap(), expected);
            }
        }
    }

    #[test]
    fn dividing_respects_budget() {
        let small = Budget::new(1000);
        assert!(matches!(
            lyndon_indices_dividing(10, 2, &small),
            Err(Error::Resource(_))
        ));
        assert!(lyndon_indices_dividing(0, 2, &small).is_err());
    }
}
