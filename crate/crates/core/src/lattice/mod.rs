//! NTRU ring arithmetic and the lattice-symbolic system built on it.

mod embedding;
mod params;
mod ring;
mod system;

pub use embedding::{trit_symbol, trit_value, SymbolEmbedding};
pub use params::{
    delta_bound, delta_bound_raw, validate_parameters, validate_parameters_with, Condition,
    DeltaParams, ValidationPolicy, ValidationReport, DEFAULT_DELTA_CONSTANT,
    DEFAULT_ENTROPY_FLOOR, REFERENCE_DIMENSION, REFERENCE_SECURITY_BITS,
};
pub use ring::{is_prime, ring_add, ring_mul, ring_sub, NtruParams, RingElement};
pub use system::{
    d_sl, derive_public_polynomial, BoundedDistanceReport, LatticeSymbolicSystem, MetricValue,
    SystemConfig, WeightedPoint, DEFAULT_PUBLIC_SEED,
};

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::words::Symbol;

    fn small(n: usize, q: u64, window: usize) -> LatticeSymbolicSystem {
        LatticeSymbolicSystem::new(&SystemConfig {
            n,
            q,
            window,
            ..SystemConfig::default()
        })
        .unwrap()
    }

    fn random_trits(rng: &mut ChaCha8Rng, len: usize) -> Vec<Symbol> {
        (0..len).map(|_| rng.gen_range(0..3)).collect()
    }

    #[test]
    fn default_system_builds() {
        let sys = LatticeSymbolicSystem::new(&SystemConfig::default()).unwrap();
        assert_eq!(sys.params().dimension(), 512);
        assert_eq!(sys.window_len(), 17);
        assert!((sys.entropy().value - 3f64.log2()).abs() < 1e-9);
        assert_eq!(sys.public_polynomial().coeffs().len(), 512);
    }

    #[test]
    fn construction_errors() {
        let base = SystemConfig {
            n: 16,
            q: 17,
            window: 2,
            ..SystemConfig::default()
        };
        let bad = |f: fn(&mut SystemConfig)| {
            let mut c = base.clone();
            f(&mut c);
            LatticeSymbolicSystem::new(&c)
        };
        assert!(bad(|c| c.window = 8).is_err());
        assert!(bad(|c| c.window = 0).is_err());
        assert!(bad(|c| c.q = 16).is_err());
        assert!(bad(|c| c.lambda1 = 3.0).is_err());
        assert!(bad(|c| c.forbidden = vec!["2".into()]).is_err());
        // {0}^Z alone has entropy 0
        let e = bad(|c| c.forbidden = vec!["-1".into(), "1".into()]).unwrap_err();
        assert!(matches!(e, crate::Error::Construction(_)));
        assert!(bad(|c| {
            c.forbidden = vec!["-1".into(), "1".into()];
            c.entropy_floor = 0.0;
        })
        .is_ok());
        // forbidding 11 in a ternary shift keeps entropy ≈ 1.27
        assert!(bad(|c| c.forbidden = vec!["1 1".into()]).is_ok());
    }

    #[test]
    fn phi_ntru_basics() {
        let sys = small(16, 257, 3);
        assert!(sys.phi_ntru(&[1; 7]).unwrap().is_zero());
        let mut w = vec![1; 7];
        w[3] = 2;
        assert_eq!(sys.phi_ntru(&w).unwrap(), RingElement::one(sys.params()));
        w[3] = 0;
        assert_eq!(sys.phi_ntru(&w).unwrap().centered()[0], -1);
        assert!(sys.phi_ntru(&[1; 6]).is_err());
        assert!(sys.phi_ntru(&[3; 7]).is_err());
    }

    #[test]
    fn phi_ntru_matches_term_by_term_sum() {
        let sys = small(16, 257, 5);
        let p = sys.params();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let w = random_trits(&mut rng, 11);
            let mut acc = RingElement::zero(p);
            for (j, &s) in w.iter().enumerate() {
                let psi = RingElement::from_signed(p, sys.embedding().vector(s)).unwrap();
                let term = ring_mul(&psi, &RingElement::monomial(p, j as i64 - 5)).unwrap();
                acc = ring_add(&acc, &term).unwrap();
            }
            assert_eq!(sys.phi_ntru(&w).unwrap(), acc);
        }
    }

    #[test]
    fn phi_ntru_shift_relation() {
        // With σ(x)_i = x_{i+1}: φ(σx) = φ(x)·X⁻¹ + ψ(x_{k+1})X^k − ψ(x_{−k})X^{−k−1}.
        let sys = small(32, 257, 4);
        let p = sys.params();
        let k = 4i64;
        let x_inv = RingElement::monomial(p, -1);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..300 {
            let buf = random_trits(&mut rng, 32);
            let c = rng.gen_range(0..32);
            let lhs = sys.phi_ntru_at(&shift_apply_ok(&buf, 1), c).unwrap();
            let mut rhs = ring_mul(&sys.phi_ntru_at(&buf, c).unwrap(), &x_inv).unwrap();
            let entering = trit_value(buf[(c + 5) % 32]);
            let leaving = trit_value(buf[(c + 32 - 4) % 32]);
            rhs = ring_add(&rhs, &signed_monomial(p, entering, k)).unwrap();
            rhs = ring_sub(&rhs, &signed_monomial(p, leaving, -k - 1)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn phi_ntru_equivariant_when_window_is_whole_buffer() {
        let sys = small(9, 17, 4);
        let x_inv = RingElement::monomial(sys.params(), -1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let buf = random_trits(&mut rng, 9);
            let shifted = shift_apply_ok(&buf, 1);
            assert_eq!(
                sys.phi_ntru_at(&shifted, 0).unwrap(),
                ring_mul(&sys.phi_ntru_at(&buf, 0).unwrap(), &x_inv).unwrap()
            );
        }
    }

    #[test]
    fn phi_ntru_equivariant_for_interior_support() {
        // Content away from both window ends: the inverse shift multiplies by X.
        let sys = small(32, 257, 4);
        let x = RingElement::monomial(sys.params(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let mut w = random_trits(&mut rng, 9);
            w[8] = 1;
            let mut right = vec![1];
            right.extend_from_slice(&w[..8]);
            assert_eq!(
                sys.phi_ntru(&right).unwrap(),
                ring_mul(&sys.phi_ntru(&w).unwrap(), &x).unwrap()
            );
        }
    }

    fn shift_apply_ok(buf: &[Symbol], steps: usize) -> Vec<Symbol> {
        crate::shift::shift_apply(buf, steps).unwrap()
    }

    fn signed_monomial(p: NtruParams, c: i64, e: i64) -> RingElement {
        let mut coeffs = vec![0; p.dimension()];
        coeffs[e.rem_euclid(p.dimension() as i64) as usize] = c;
        RingElement::from_signed(p, &coeffs).unwrap()
    }

    #[test]
    fn phi_weighted_exact_and_float_agree() {
        let sys = small(64, 4099, 20);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let w = random_trits(&mut rng, 41);
            let exact = sys.phi_weighted(&w).unwrap().to_f64();
            let mut float = vec![0.0; 64];
            for (j, &s) in w.iter().enumerate() {
                let weight = 2f64.powi(-(j.abs_diff(20) as i32));
                for (f, &c) in float.iter_mut().zip(sys.embedding().vector(s)) {
                    *f += c as f64 * weight;
                }
            }
            for (a, b) in exact.iter().zip(&float) {
                assert!((a - b).abs() <= 2f64.powi(-40));
            }
        }
    }

    #[test]
    fn phi_weighted_edge_difference() {
        let sys = small(16, 257, 3);
        let mut a = vec![1; 7];
        let mut b = vec![1; 7];
        a[0] = 2;
        b[0] = 0;
        let pa = sys.phi_weighted(&a).unwrap();
        let pb = sys.phi_weighted(&b).unwrap();
        assert_eq!(pa.to_f64()[0] - pb.to_f64()[0], 2.0 * 2f64.powi(-3));
        assert_eq!(pa.distance(&pb).unwrap(), 0.25);
        assert!(sys.phi_weighted(&[1; 7]).unwrap().to_f64().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn d_sl_examples() {
        let sys = small(16, 257, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let x = random_trits(&mut rng, 16);
        let y = random_trits(&mut rng, 16);
        for p in [0, 1, 5, 40] {
            assert_eq!(sys.d_sl(&x, &x, p).unwrap().value, 0.0);
            assert_eq!(sys.d_sl(&x, &y, p).unwrap(), sys.d_sl(&y, &x, p).unwrap());
        }
        let mut z = x.clone();
        z[0] = (x[0] + 1) % 3;
        assert_eq!(sys.d_sl(&x, &z, 6).unwrap().value, 1.0);
        assert_eq!(sys.d_sl(&x, &z, 6).unwrap().tail_bound, 2f64.powi(-5));
        assert!(sys.d_sl(&x, &z[..15], 6).is_err());
        let all = sys.d_sl(&[0; 64], &[2; 64], 31).unwrap();
        assert!(all.value <= 3.0 && all.value + all.tail_bound >= 3.0);
    }

    #[test]
    fn system_step_rules() {
        let sys = LatticeSymbolicSystem::new(&SystemConfig {
            n: 16,
            q: 17,
            window: 2,
            forbidden: vec!["1 1".into()],
            ..SystemConfig::default()
        })
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let state = sys.sample_state(&mut rng, None).unwrap();
        assert_eq!(sys.system_step(&state, 0).unwrap(), state);
        assert_eq!(sys.system_step(&state, 16).unwrap(), state);
        for a in 0..20 {
            for b in 0..20 {
                let ab = sys.system_step(&sys.system_step(&state, a).unwrap(), b).unwrap();
                assert_eq!(ab, sys.system_step(&state, a + b).unwrap());
                assert!(sys.sft().allows_cyclic(&ab));
            }
        }
        let mut bad = state.clone();
        bad[0] = 2;
        bad[1] = 2;
        assert!(sys.system_step(&bad, 1).is_err());
    }

    #[test]
    fn bounded_distance() {
        let sys = small(64, 4099, 8);
        assert_eq!(sys.shift_distance(&[1; 64]).unwrap(), 0.0);
        let a = sys.check_bounded_distance(1000, 42, None).unwrap();
        let b = sys.check_bounded_distance(1000, 42, None).unwrap();
        assert_eq!(a, b);
        assert!(a.max_distance.is_finite() && a.max_distance <= 2.0 * 17f64.sqrt());
        let small_run = sys.check_bounded_distance(100, 1, Some(4)).unwrap();
        let large_run = sys.check_bounded_distance(1000, 1, Some(4)).unwrap();
        assert_eq!(small_run.max_distance, large_run.max_distance);
        assert!(sys.check_bounded_distance(0, 1, None).is_err());
        assert!(sys.check_bounded_distance(1, 1, Some(5)).is_err());
    }
}
