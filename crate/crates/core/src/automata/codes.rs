use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::Word;

/// Levenshtein distance with unit costs.
pub fn levenshtein<T: Eq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, x) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let next = (diag + usize::from(x != y))
                .min(row[j] + 1)
                .min(row[j + 1] + 1);
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[b.len()]
}

pub fn edit_distance(u: &Word, v: &Word) -> Result<usize> {
    u.require_same_alphabet(v)?;
    Ok(levenshtein(u.symbols(), v.symbols()))
}

/// A block code: distinct codewords of one common length.
#[derive(Debug, Clone)]
pub struct BlockCode {
    codewords: Vec<Word>,
}

impl BlockCode {
    pub fn new(codewords: Vec<Word>) -> Result<Self> {
        let Some(first) = codewords.first() else {
            return Err(Error::domain("a code needs at least one codeword"));
        };
        let len = first.len();
        for (i, w) in codewords.iter().enumerate() {
            first.require_same_alphabet(w)?;
            if w.len() != len {
                return Err(Error::domain(format!(
                    "codeword {w} has length {}, expected {len}",
                    w.len()
                )));
            }
            if codewords[..i].iter().any(|v| v.symbols() == w.symbols()) {
                return Err(Error::domain(format!("duplicate codeword {w}")));
            }
        }
        Ok(BlockCode { codewords })
    }

    pub fn codewords(&self) -> &[Word] {
        &self.codewords
    }

    pub fn block_length(&self) -> usize {
        self.codewords[0].len()
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }
}

fn hamming(u: &Word, v: &Word) -> usize {
    u.symbols()
        .iter()
        .zip(v.symbols())
        .filter(|(a, b)| a != b)
        .count()
}

/// Minimum pairwise Hamming distance.
pub fn min_distance(code: &BlockCode) -> Result<usize> {
    let words = code.codewords();
    if words.len() < 2 {
        return Err(Error::domain("minimum distance needs at least two codewords"));
    }
    let mut best = usize::MAX;
    for (i, u) in words.iter().enumerate() {
        for v in &words[i + 1..] {
            best = best.min(hamming(u, v));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ErrorCapability {
    pub detect: usize,
    pub correct: usize,
}

/// Errors detectable (`d - 1`) and correctable (`⌊(d - 1) / 2⌋`) by a code
/// of minimum distance `d`.
pub fn error_capability(d: usize) -> Result<ErrorCapability> {
    if d == 0 {
        return Err(Error::domain("minimum distance must be positive"));
    }
    Ok(ErrorCapability {
        detect: d - 1,
        correct: (d - 1) / 2,
    })
}
