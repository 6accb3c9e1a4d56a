//! Alphabets, words, Lyndon words and de Bruijn constructions.
//!
//! Symbols are stored as indices into their [`Alphabet`]; the lexicographic
//! order of words is the order induced by the alphabet's symbol list.

mod debruijn;
mod lyndon;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use debruijn::{de_bruijn_graph, de_bruijn_indices, de_bruijn_sequence, DeBruijnGraph, Edge};
pub use lyndon::{
    count_lyndon, duval_factorize, duval_factor_lengths, is_lyndon, is_lyndon_slice,
    lyndon_indices_dividing, lyndon_words_dividing, mobius, LyndonFactorization,
};

/// Index of a symbol within its alphabet.
pub type Symbol = u32;

/// Default cap on `k^n` for enumerating constructions.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1 << 20;

/// Upper bound on the size of exhaustive enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_enumeration: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_enumeration: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

impl Budget {
    pub fn new(max_enumeration: u64) -> Self {
        Budget { max_enumeration }
    }

    /// Checks that `k^n` fits the budget and returns it.
    pub fn check_power(&self, k: u64, n: u32) -> Result<u64> {
        match k.checked_pow(n) {
            Some(total) if total <= self.max_enumeration => Ok(total),
            _ => Err(Error::resource(format!(
                "{k}^{n} exceeds the enumeration budget of {}",
                self.max_enumeration
            ))),
        }
    }
}

/// An ordered, finite set of distinct symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::domain("alphabet must contain at least one symbol"));
        }
        if symbols.len() > Symbol::MAX as usize {
            return Err(Error::domain("alphabet too large"));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) || s.contains(',') {
                return Err(Error::domain(format!("invalid symbol {s:?}")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::domain(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// The alphabet `0 < 1 < ... < k-1` with decimal symbol names.
    pub fn numeric(k: usize) -> Result<Self> {
        Alphabet::new((0..k).map(|i| i.to_string()))
    }

    /// The alphabet of distinct characters in `text`, ordered by code point.
    pub fn from_chars(text: &str) -> Result<Self> {
        let mut chars: Vec<char> = text.chars().collect();
        chars.sort_unstable();
        chars.dedup();
        Alphabet::new(chars.into_iter().map(String::from))
    }

    /// The ternary alphabet `-1 < 0 < 1`.
    pub fn ternary() -> Self {
        Alphabet {
            symbols: vec!["-1".into(), "0".into(), "1".into()],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: Symbol) -> Option<&str> {
        self.symbols.get(index as usize).map(String::as_str)
    }

    pub fn index_of(&self, symbol: &str) -> Option<Symbol> {
        self.symbols
            .iter()
            .position(|s| s == symbol)
            .map(|i| i as Symbol)
    }

    /// True when every symbol is a single character, so words can be
    /// written without separators.
    pub fn is_compact(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a word. Compact alphabets accept a plain string of symbols;
    /// otherwise symbols are separated by whitespace or commas.
    pub fn parse_word(self: &Arc<Self>, text: &str) -> Result<Word> {
        let tokens: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        let mut symbols = Vec::new();
        if self.is_compact() && tokens.len() <= 1 {
            for c in tokens.first().copied().unwrap_or("").chars() {
                let mut buf = [0u8; 4];
                let s = c.encode_utf8(&mut buf);
                symbols.push(
                    self.index_of(s)
                        .ok_or_else(|| Error::domain(format!("symbol {s:?} not in alphabet")))?,
                );
            }
        } else {
            for t in tokens {
                symbols.push(
                    self.index_of(t)
                        .ok_or_else(|| Error::domain(format!("symbol {t:?} not in alphabet")))?,
                );
            }
        }
        Ok(Word {
            alphabet: Arc::clone(self),
            symbols,
        })
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols.join(","))
    }
}

/// A finite sequence of symbols over a shared alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    symbols: Vec<Symbol>,
}

impl Word {
    pub fn new(alphabet: Arc<Alphabet>, symbols: Vec<Symbol>) -> Result<Self> {
        let k = alphabet.len() as Symbol;
        if let Some(bad) = symbols.iter().find(|&&s| s >= k) {
            return Err(Error::domain(format!(
                "symbol index {bad} out of range for alphabet of size {k}"
            )));
        }
        Ok(Word { alphabet, symbols })
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Word {
            alphabet,
            symbols: Vec::new(),
        }
    }

    /// Builds a word without range-checking; callers guarantee `symbols[i] < k`.
    pub(crate) fn from_trusted(alphabet: Arc<Alphabet>, symbols: Vec<Symbol>) -> Self {
        debug_assert!(symbols.iter().all(|&s| (s as usize) < alphabet.len()));
        Word { alphabet, symbols }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn same_alphabet(&self, other: &Word) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet
    }

    pub(crate) fn require_same_alphabet(&self, other: &Word) -> Result<()> {
        if self.same_alphabet(other) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "alphabet mismatch: {} vs {}",
                self.alphabet, other.alphabet
            )))
        }
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::domain("operation requires a nonempty word"))
        } else {
            Ok(())
        }
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word::from_trusted(Arc::clone(&self.alphabet), self.symbols[range].to_vec())
    }

    pub fn concat<'a, I: IntoIterator<Item = &'a Word>>(alphabet: Arc<Alphabet>, parts: I) -> Word {
        let symbols = parts
            .into_iter()
            .flat_map(|w| w.symbols.iter().copied())
            .collect();
        Word::from_trusted(alphabet, symbols)
    }
}

impl PartialOrd for Word {
    /// Lexicographic order; words over different alphabets are incomparable.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.same_alphabet(other) {
            Some(self.symbols.cmp(&other.symbols))
        } else {
            None
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.alphabet.is_compact() { "" } else { " " };
        for (i, &s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            f.write_str(&self.alphabet.symbols[s as usize])?;
        }
        Ok(())
    }
}
