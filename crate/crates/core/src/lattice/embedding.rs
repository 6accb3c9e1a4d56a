use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::Symbol;

/// Converts a ternary symbol index (alphabet order `-1, 0, 1`) to its value.
pub fn trit_value(s: Symbol) -> i64 {
    s as i64 - 1
}

/// Inverse of [`trit_value`].
pub fn trit_symbol(v: i64) -> Result<Symbol> {
    match v {
        -1..=1 => Ok((v + 1) as Symbol),
        _ => Err(Error::domain(format!("{v} is not a ternary symbol"))),
    }
}

/// The map ψ from `{-1, 0, 1}` to integer vectors of length `N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolEmbedding {
    table: [Vec<i64>; 3],
    separation: f64,
}

fn euclidean(a: &[i64], b: &[i64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = (x - y) as i128;
            (d * d) as f64
        })
        .sum::<f64>()
        .sqrt()
}

impl SymbolEmbedding {
    /// ψ(±1) = ±s·e₁, ψ(0) = 0.
    pub fn unit_axis(dim: usize, scale: i64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("embedding dimension must be positive"));
        }
        if scale <= 0 {
            return Err(Error::domain(format!("embedding scale must be positive, got {scale}")));
        }
        let axis = |v: i64| {
            let mut e = vec![0; dim];
            e[0] = v;
            e
        };
        Self::custom([axis(-scale), axis(0), axis(scale)])
    }

    /// Arbitrary table indexed by symbol (`-1, 0, 1`). The images must be
    /// pairwise distinct and of equal dimension.
    pub fn custom(table: [Vec<i64>; 3]) -> Result<Self> {
        let dim = table[0].len();
        if dim == 0 || table.iter().any(|v| v.len() != dim) {
            return Err(Error::domain("embedding vectors must share a positive dimension"));
        }
        let separation = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(a, b)| euclidean(&table[a], &table[b]))
            .fold(f64::INFINITY, f64::min);
        if separation == 0.0 {
            return Err(Error::domain("embedding is not injective"));
        }
        Ok(SymbolEmbedding { table, separation })
    }

    pub fn dimension(&self) -> usize {
        self.table[0].len()
    }

    /// Minimum pairwise Euclidean distance between images.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Requires separation ≥ λ₁/2 for a declared lower bound λ₁.
    pub fn check_lambda1(&self, lambda1: f64) -> Result<()> {
        if !(lambda1.is_finite() && lambda1 > 0.0) {
            return Err(Error::domain(format!("declared lambda1 must be positive, got {lambda1}")));
        }
        if self.separation < lambda1 / 2.0 {
            return Err(Error::construction(format!(
                "embedding separation {} is below lambda1/2 = {}",
                self.separation,
                lambda1 / 2.0
            )));
        }
        Ok(())
    }

    pub fn vector(&self, s: Symbol) -> &[i64] {
        &self.table[s as usize]
    }

    /// d_L(ψ(a), ψ(b)).
    pub fn distance(&self, a: Symbol, b: Symbol) -> f64 {
        if a == b {
            0.0
        } else {
            euclidean(&self.table[a as usize], &self.table[b as usize])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_axis_distances() {
        let e = SymbolEmbedding::unit_axis(4, 3).unwrap();
        assert_eq!(e.vector(0), &[-3, 0, 0, 0]);
        assert_eq!(e.vector(1), &[0, 0, 0, 0]);
        assert_eq!(e.separation(), 3.0);
        assert_eq!(e.distance(0, 2), 6.0);
        assert_eq!(e.distance(2, 2), 0.0);
    }

    #[test]
    fn lambda1_check() {
        let e = SymbolEmbedding::unit_axis(4, 1).unwrap();
        assert!(e.check_lambda1(2.0).is_ok());
        assert!(e.check_lambda1(2.5).is_err());
        assert!(e.check_lambda1(0.0).is_err());
    }

    #[test]
    fn custom_rejects_collisions() {
        assert!(SymbolEmbedding::custom([vec![1, 0], vec![1, 0], vec![0, 1]]).is_err());
        assert!(SymbolEmbedding::custom([vec![1], vec![0, 0], vec![0]]).is_err());
        let e = SymbolEmbedding::custom([vec![3, 0], vec![0, 0], vec![0, 4]]).unwrap();
        assert_eq!(e.separation(), 3.0);
        assert_eq!(e.distance(0, 2), 5.0);
    }

    #[test]
    fn trits() {
        assert_eq!(trit_value(0), -1);
        assert_eq!(trit_symbol(1).unwrap(), 2);
        assert!(trit_symbol(2).is_err());
    }
}
