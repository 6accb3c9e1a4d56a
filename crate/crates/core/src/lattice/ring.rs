use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Parameters of the ring `Z_q[X] / (X^N - 1)`.
///
/// `q` must be prime and below 2^32, so coefficient products fit in 64 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct NtruParams {
    n: usize,
    q: u64,
}

impl NtruParams {
    pub fn new(n: usize, q: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("ring dimension N must be positive"));
        }
        if q > u32::MAX as u64 {
            return Err(Error::domain(format!("modulus {q} exceeds 2^32")));
        }
        if !is_prime(q) {
            return Err(Error::domain(format!("modulus {q} is not prime")));
        }
        Ok(NtruParams { n, q })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `floor(log2 q)`: the number of low-order bits taken per coefficient.
    pub fn bits_per_coefficient(&self) -> usize {
        (63 - self.q.leading_zeros()) as usize
    }

    /// log2 of the lattice determinant, `N log2 q`.
    pub fn log2_determinant(&self) -> f64 {
        self.n as f64 * (self.q as f64).log2()
    }

    fn reduce_signed(&self, v: i64) -> u64 {
        v.rem_euclid(self.q as i64) as u64
    }
}

impl fmt::Display for NtruParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} q={}", self.n, self.q)
    }
}

/// An element of `R_q`, stored as canonical coefficients in `[0, q)`;
/// index `i` holds the coefficient of `X^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    params: NtruParams,
    coeffs: Vec<u64>,
}

impl RingElement {
    pub fn zero(params: NtruParams) -> Self {
        RingElement {
            params,
            coeffs: vec![0; params.n],
        }
    }

    pub fn one(params: NtruParams) -> Self {
        Self::monomial(params, 0)
    }

    /// `X^e`, with negative exponents read modulo `N`.
    pub fn monomial(params: NtruParams, e: i64) -> Self {
        let mut r = Self::zero(params);
        r.coeffs[e.rem_euclid(params.n as i64) as usize] = 1;
        r
    }

    pub fn from_coeffs(params: NtruParams, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != params.n {
            return Err(Error::domain(format!(
                "expected {} coefficients, got {}",
                params.n,
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= params.q) {
            return Err(Error::domain(format!("coefficient {c} not reduced mod {}", params.q)));
        }
        Ok(RingElement { params, coeffs })
    }

    /// Reduces arbitrary signed coefficients into canonical form.
    pub fn from_signed(params: NtruParams, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() != params.n {
            return Err(Error::domain(format!(
                "expected {} coefficients, got {}",
                params.n,
                coeffs.len()
            )));
        }
        Ok(RingElement {
            params,
            coeffs: coeffs.iter().map(|&c| params.reduce_signed(c)).collect(),
        })
    }

    pub fn params(&self) -> NtruParams {
        self.params
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Representatives in `(-q/2, q/2]`.
    pub fn centered(&self) -> Vec<i64> {
        let q = self.params.q as i64;
        self.coeffs
            .iter()
            .map(|&c| {
                let c = c as i64;
                if c > q / 2 {
                    c - q
                } else {
                    c
                }
            })
            .collect()
    }

    /// Euclidean distance between centered representatives of `self - other`.
    pub fn centered_distance(&self, other: &RingElement) -> Result<f64> {
        let diff = ring_sub(self, other)?;
        Ok(diff
            .centered()
            .iter()
            .map(|&c| (c as f64) * (c as f64))
            .sum::<f64>()
            .sqrt())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub(crate) fn add_signed_at(&mut self, index: usize, v: i64) {
        let q = self.params.q;
        self.coeffs[index] = (self.coeffs[index] + self.params.reduce_signed(v)) % q;
    }
}

fn same_params(a: &RingElement, b: &RingElement) -> Result<NtruParams> {
    if a.params != b.params {
        return Err(Error::domain(format!(
            "ring parameter mismatch: {} vs {}",
            a.params, b.params
        )));
    }
    Ok(a.params)
}

pub fn ring_add(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    let p = same_params(a, b)?;
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| (x + y) % p.q)
        .collect();
    Ok(RingElement { params: p, coeffs })
}

pub fn ring_sub(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    let p = same_params(a, b)?;
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| (x + p.q - y) % p.q)
        .collect();
    Ok(RingElement { params: p, coeffs })
}

/// Cyclic convolution modulo `(X^N - 1, q)`.
pub fn ring_mul(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    let p = same_params(a, b)?;
    let n = p.n;
    let mut acc = vec![0u128; n];
    for (i, &x) in a.coeffs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        // X^i * X^j = X^((i + j) mod N)
        let (head, tail) = b.coeffs.split_at(n - i);
        for (slot, &y) in acc[i..].iter_mut().zip(head) {
            *slot += (x * y) as u128;
        }
        for (slot, &y) in acc[..i].iter_mut().zip(tail) {
            *slot += (x * y) as u128;
        }
    }
    let coeffs = acc.into_iter().map(|c| (c % p.q as u128) as u64).collect();
    Ok(RingElement { params: p, coeffs })
}
