//! Combinatorics on words and symbolic dynamics.
//!
//! * [`words`]: alphabets, words, Lyndon words, Duval factorization and
//!   de Bruijn sequences/graphs.
//! * [`shift`]: shifts of finite type, their complexity function and
//!   topological entropy.
//! * [`automata`]: synchronizing words, edit distance and block-code
//!   error capability.
//! * [`lattice`]: the NTRU ring, symbol embeddings and the lattice-symbolic
//!   system built on a ternary shift.
//! * [`prng`]: a generator and keyed function built on a lattice-symbolic
//!   system, plus frequency/runs tests and a distinguisher harness.
//!
//! Entropies and logarithms are base 2 throughout.

pub mod automata;
pub mod error;
pub mod format;
pub mod hashing;
pub mod lattice;
pub mod prng;
pub mod shift;
pub mod words;

pub use error::{Error, Result};
