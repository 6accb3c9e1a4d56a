use num_bigint::BigUint;
use num_traits::ToPrimitive;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::ShiftOfFiniteType;
use crate::error::{Error, Result};
use crate::words::Budget;

/// Relative tolerance on the Perron root bracket.
pub const POWER_ITERATION_TOLERANCE: f64 = 1e-10;
pub const MAX_POWER_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyMethod {
    FiniteSlope,
    TransferMatrix,
}

impl std::fmt::Display for EntropyMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EntropyMethod::FiniteSlope => "finite-slope",
            EntropyMethod::TransferMatrix => "transfer-matrix",
        })
    }
}

/// Topological entropy in bits per symbol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub method: EntropyMethod,
    /// Word length for the finite slope; iteration count for the transfer matrix.
    pub n_used: usize,
    pub error_bound: Option<f64>,
    /// Set when the shift has no points (or no words at `n_used`).
    pub empty_language: bool,
}

impl EntropyEstimate {
    fn empty(method: EntropyMethod, n_used: usize) -> Self {
        EntropyEstimate {
            value: 0.0,
            method,
            n_used,
            error_bound: Some(0.0),
            empty_language: true,
        }
    }
}

/// log2 of a big integer; exact for powers of two.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return x.to_u64().expect("fits in 64 bits").to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits in 64 bits");
    (top as f64).log2() + shift as f64
}

/// `log2 |B_n| / n` at `n = n_max`. For a shift of finite type this never
/// underestimates the entropy.
pub fn entropy_finite_slope(sft: &ShiftOfFiniteType, n_max: usize) -> Result<EntropyEstimate> {
    if n_max < 2 {
        return Err(Error::domain("finite-slope entropy requires n_max >= 2"));
    }
    let count = sft.count_words(n_max)?;
    if count.bits() == 0 {
        return Ok(EntropyEstimate::empty(EntropyMethod::FiniteSlope, n_max));
    }
    let ceiling = (sft.alphabet().len() as f64).log2();
    let value = (log2_biguint(&count) / n_max as f64).clamp(0.0, ceiling);
    Ok(EntropyEstimate {
        value,
        method: EntropyMethod::FiniteSlope,
        n_used: n_max,
        error_bound: None,
        empty_language: false,
    })
}

/// log2 of the spectral radius of the block transition matrix.
///
/// The Perron root is computed per strongly connected component by power
/// iteration on `A + I` from the all-ones vector; the Collatz-Wielandt
/// quotients bracket the root and give the reported error bound.
pub fn entropy_transfer_matrix(sft: &ShiftOfFiniteType) -> Result<EntropyEstimate> {
    let graph = sft.block_graph(&Budget::default())?;
    let mut g: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<_> = (0..graph.states.len()).map(|_| g.add_node(())).collect();
    for &(s, t) in &graph.edges {
        g.add_edge(nodes[s], nodes[t], ());
    }

    let mut best: Option<PerronRoot> = None;
    let mut iterations = 0;
    for component in tarjan_scc(&g) {
        let members: Vec<usize> = component.iter().map(|n| n.index()).collect();
        let mut local = vec![usize::MAX; graph.states.len()];
        for (i, &m) in members.iter().enumerate() {
            local[m] = i;
        }
        let edges: Vec<(usize, usize)> = graph
            .edges
            .iter()
            .filter(|&&(s, t)| local[s] != usize::MAX && local[t] != usize::MAX)
            .map(|&(s, t)| (local[s], local[t]))
            .collect();
        if edges.is_empty() {
            continue;
        }
        let root = perron_root(members.len(), &edges);
        iterations += root.iterations;
        if best.as_ref().map_or(true, |b| root.estimate > b.estimate) {
            best = Some(root);
        }
    }

    let Some(root) = best else {
        return Ok(EntropyEstimate::empty(EntropyMethod::TransferMatrix, iterations));
    };
    let ceiling = (sft.alphabet().len() as f64).log2();
    let value = root.estimate.log2().clamp(0.0, ceiling);
    let lo = root.lower.max(1.0).log2();
    let hi = root.upper.log2();
    let error_bound = (hi - value).max(value - lo).max(0.0);
    Ok(EntropyEstimate {
        value,
        method: EntropyMethod::TransferMatrix,
        n_used: iterations,
        error_bound: Some(error_bound),
        empty_language: false,
    })
}

struct PerronRoot {
    estimate: f64,
    lower: f64,
    upper: f64,
    iterations: usize,
}

/// Perron root of an irreducible nonnegative integer matrix given by its
/// (multi-)edge list.
fn perron_root(n: usize, edges: &[(usize, usize)]) -> PerronRoot {
    let mut v = vec![1.0f64; n];
    let mut w = vec![0.0f64; n];
    let (mut lower, mut upper) = (0.0, f64::INFINITY);
    let mut iterations = 0;
    while iterations < MAX_POWER_ITERATIONS {
        iterations += 1;
        w.copy_from_slice(&v);
        for &(s, t) in edges {
            w[s] += v[t];
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (wi, vi) in w.iter().zip(&v) {
            let r = wi / vi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        // bracket for the root of A + I
        lower = lo - 1.0;
        upper = hi - 1.0;
        let scale = hi.max(f64::MIN_POSITIVE);
        let norm = w.iter().cloned().fold(0.0f64, f64::max);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
        if hi - lo <= POWER_ITERATION_TOLERANCE * scale {
            break;
        }
    }
    PerronRoot {
        estimate: 0.5 * (lower + upper),
        lower,
        upper,
        iterations,
    }
}
