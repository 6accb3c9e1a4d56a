use std::sync::Arc;

use super::lyndon::for_each_lyndon_dividing;
use super::{Alphabet, Budget, Symbol, Word};
use crate::error::{Error, Result};

/// A de Bruijn sequence of order `n` over `0..k`, as raw indices.
///
/// The sequence is the concatenation, in lexicographic order, of the Lyndon
/// words whose length divides `n`. Read cyclically, every length-`n` word
/// occurs exactly once.
pub fn de_bruijn_indices(n: u32, k: usize, budget: &Budget) -> Result<Vec<Symbol>> {
    if n == 0 {
        return Err(Error::domain("order must be at least 1"));
    }
    if k == 0 {
        return Err(Error::domain("alphabet must be nonempty"));
    }
    let total = budget.check_power(k as u64, n)?;
    let mut seq = Vec::with_capacity(total as usize);
    for_each_lyndon_dividing(n as usize, k as Symbol, |w| seq.extend_from_slice(w));
    debug_assert_eq!(seq.len() as u64, total);
    Ok(seq)
}

pub fn de_bruijn_sequence(n: u32, alphabet: &Arc<Alphabet>, budget: &Budget) -> Result<Word> {
    let seq = de_bruijn_indices(n, alphabet.len(), budget)?;
    Ok(Word::from_trusted(Arc::clone(alphabet), seq))
}

/// Edge `source -> target` labelled by the appended symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub symbol: Symbol,
}

/// The de Bruijn graph B(k, n): vertices are the words of length `n - 1`,
/// encoded as base-`k` integers with the first symbol most significant.
/// Edge `source * k + symbol` corresponds to the `n`-word `source · symbol`.
#[derive(Debug, Clone)]
pub struct DeBruijnGraph {
    order: u32,
    alphabet: Arc<Alphabet>,
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl DeBruijnGraph {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Index of the edge spelling `source · symbol`.
    pub fn edge_index(&self, source: usize, symbol: Symbol) -> usize {
        source * self.alphabet.len() + symbol as usize
    }

    pub fn vertex_word(&self, v: usize) -> Word {
        let k = self.alphabet.len();
        let mut symbols = vec![0; self.order as usize - 1];
        let mut code = v;
        for slot in symbols.iter_mut().rev() {
            *slot = (code % k) as Symbol;
            code /= k;
        }
        Word::from_trusted(Arc::clone(&self.alphabet), symbols)
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            deg[e.source] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            deg[e.target] += 1;
        }
        deg
    }
}

pub fn de_bruijn_graph(n: u32, alphabet: &Arc<Alphabet>, budget: &Budget) -> Result<DeBruijnGraph> {
    if n < 2 {
        return Err(Error::domain("de Bruijn graph requires order n >= 2"));
    }
    let k = alphabet.len();
    let edge_total = budget.check_power(k as u64, n)? as usize;
    let vertex_count = edge_total / k;
    let mut edges = Vec::with_capacity(edge_total);
    for source in 0..vertex_count {
        for a in 0..k {
            edges.push(Edge {
                source,
                target: (source * k + a) % vertex_count,
                symbol: a as Symbol,
            });
        }
    }
    let graph = DeBruijnGraph {
        order: n,
        alphabet: Arc::clone(alphabet),
        vertex_count,
        edges,
    };
    assert!(graph.out_degrees().iter().all(|&d| d == k));
    assert!(graph.in_degrees().iter().all(|&d| d == k));
    Ok(graph)
}
