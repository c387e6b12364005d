//! Exact and floating arithmetic for exponential polynomials
//! Σ aⱼ e^{jz/den}, together with scalar complex numbers and Laurent root
//! extraction.

pub mod cnum;
pub mod exppoly;
pub mod roots;

pub use cnum::{parse_rational, rational_string, CNum, FLOAT_ZERO_TOL};
pub use exppoly::{EvalError, ExpPoly, RingOp};
pub use roots::{cnum_poly_roots, laurent_roots, mpc_poly_roots, RootError, RootOpts};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::MpC;
    use alloc::vec::Vec;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};

    fn e(j: i64, c: i64) -> (i64, CNum) {
        (j, CNum::from_i64(c))
    }

    fn poly(terms: &[(i64, i64)]) -> ExpPoly {
        ExpPoly::from_terms(1, terms.iter().map(|&(j, c)| e(j, c)))
    }

    #[test]
    fn difference_of_squares() {
        // (e^z + 1)(e^z − 1) = e^{2z} − 1
        let a = poly(&[(1, 1), (0, 1)]);
        let b = poly(&[(1, 1), (0, -1)]);
        let prod = a.mul(&b);
        assert!(prod.eq_exact(&poly(&[(2, 1), (0, -1)])));
    }

    #[test]
    fn add_cancels_to_constant() {
        // (1 − 2e^z) + 2e^z = 1
        let a = poly(&[(0, 1), (1, -2)]);
        let b = poly(&[(1, 2)]);
        assert!(a.add(&b).eq_exact(&ExpPoly::one()));
    }

    /// Independent convolution oracle: expands a product over all exponent
    /// pairs without going through `combine`.
    fn convolve_oracle(a: &ExpPoly, b: &ExpPoly) -> Vec<(i64, CNum)> {
        let mut acc: alloc::collections::BTreeMap<i64, CNum> = alloc::collections::BTreeMap::new();
        for (&j1, c1) in a.terms() {
            for (&j2, c2) in b.terms() {
                let cur = acc.get(&(j1 + j2)).cloned().unwrap_or_else(CNum::zero);
                acc.insert(j1 + j2, cur.add(&c1.mul(c2)));
            }
        }
        acc.into_iter().collect()
    }

    #[test]
    fn square_matches_bruteforce_convolution() {
        // (e^{2z} + 2e^z − 2)² = e^{4z} + 4e^{3z} + 0·e^{2z} − 8e^z + 4
        let a = poly(&[(2, 1), (1, 2), (0, -2)]);
        let sq = a.mul(&a);
        assert!(sq.eq_exact(&poly(&[(4, 1), (3, 4), (1, -8), (0, 4)])));
        // cross-check against the oracle
        for (j, c) in convolve_oracle(&a, &a) {
            assert!(sq.coeff(j).sub(&c).is_zero_tol(0.0), "mismatch at exponent {j}");
        }
        // the e^{2z} coefficient cancelled exactly
        assert!(sq.coeff(2).is_zero_tol(0.0));
    }

    #[test]
    fn differentiate_basics() {
        assert!(poly(&[(2, 1)]).differentiate().eq_exact(&poly(&[(2, 2)])));
        assert!(poly(&[(0, 5)]).differentiate().is_structurally_zero());
        // d/dz(3e^{z/2}) = (3/2)e^{z/2}
        let half = ExpPoly::monomial(2, 1, CNum::from_i64(3));
        let d = half.differentiate();
        assert!(d.coeff(1).eq_exact(&CNum::ratio(3, 2)));
        assert_eq!(d.den(), 2);
    }

    #[test]
    fn evaluate_basics() {
        let p = 128;
        let ez = poly(&[(1, 1)]);
        let at0 = ez.evaluate(&MpC::zero(p)).unwrap();
        assert!(at0.sub(&MpC::one(p)).abs().to_f64() < 1e-30);

        let ipi = MpC::new(crate::mp::MpFloat::zero(p), crate::mp::MpFloat::pi(p));
        let atpi = ez.evaluate(&ipi).unwrap();
        assert!(atpi.add(&MpC::one(p)).abs().to_f64() < 1e-30);

        // (1 − 2e^z) at z = −ln 2 vanishes
        let q = poly(&[(0, 1), (1, -2)]);
        let z = MpC::new(crate::mp::MpFloat::from_i64(2, p).ln().neg(), crate::mp::MpFloat::zero(p));
        assert!(q.evaluate(&z).unwrap().abs().to_f64() < 1e-30);
    }

    #[test]
    fn evaluate_overflow_guard() {
        let p = poly(&[(1, 1)]);
        let z = MpC::from_f64(1.0e9, 0.0, 64);
        assert!(matches!(p.evaluate(&z), Err(EvalError::ExpOutOfRange)));
    }

    #[test]
    fn canonical_form_reduces_even_half_lattice() {
        let p = ExpPoly::from_terms(2, [(2, CNum::one()), (-4, CNum::from_i64(3))]);
        assert_eq!(p.den(), 1);
        assert_eq!(p.min_exp(), Some(-2));
        assert_eq!(p.max_exp(), Some(1));
        let q = ExpPoly::from_terms(2, [(1, CNum::one()), (2, CNum::one())]);
        assert_eq!(q.den(), 2);
    }

    #[test]
    fn mixed_den_arithmetic() {
        let whole = poly(&[(1, 1)]); // e^z
        let half = ExpPoly::monomial(2, 1, CNum::one()); // e^{z/2}
        let prod = whole.mul(&half);
        assert_eq!(prod.den(), 2);
        assert_eq!(prod.max_exp(), Some(3));
        // e^{z/2} · e^{z/2} = e^z collapses back to den = 1
        let sq = half.mul(&half);
        assert_eq!(sq.den(), 1);
        assert!(sq.eq_exact(&poly(&[(1, 1)])));
    }

    fn random_exact_poly(rng: &mut impl Rng) -> ExpPoly {
        let den = if rng.gen_bool(0.3) { 2 } else { 1 };
        let n = rng.gen_range(0..5);
        ExpPoly::from_terms(
            den,
            (0..n).map(|_| {
                let j = rng.gen_range(-3..=4);
                let re = BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into());
                let im = BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into());
                (j, CNum::from_rationals(re, im))
            }),
        )
    }

    #[test]
    fn ring_laws_hold_exactly() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let a = random_exact_poly(&mut rng);
            let b = random_exact_poly(&mut rng);
            let c = random_exact_poly(&mut rng);
            let assoc = a.mul(&b).mul(&c).sub(&a.mul(&b.mul(&c)));
            assert!(assoc.is_zero_tol(0.0));
            let dist = a.mul(&b.add(&c)).sub(&a.mul(&b).add(&a.mul(&c)));
            assert!(dist.is_zero_tol(0.0));
            let comm = a.mul(&b).sub(&b.mul(&a));
            assert!(comm.is_zero_tol(0.0));
        }
    }

    #[test]
    fn leibniz_rule_exact() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(8);
        for _ in 0..200 {
            let a = random_exact_poly(&mut rng);
            let b = random_exact_poly(&mut rng);
            let lhs = a.mul(&b).differentiate();
            let rhs = a.differentiate().mul(&b).add(&a.mul(&b.differentiate()));
            assert!(lhs.sub(&rhs).is_zero_tol(0.0));
        }
    }

    #[test]
    fn evaluate_is_ring_homomorphism() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        let p = 128;
        for _ in 0..50 {
            let a = random_exact_poly(&mut rng);
            let b = random_exact_poly(&mut rng);
            let z = MpC::from_f64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), p);
            let lhs = a.mul(&b).evaluate(&z).unwrap();
            let rhs = a.evaluate(&z).unwrap().mul(&b.evaluate(&z).unwrap());
            let scale = lhs.abs().to_f64().max(rhs.abs().to_f64()).max(1.0);
            assert!(lhs.sub(&rhs).abs().to_f64() / scale < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_central_differences() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(10);
        let p = 128;
        let h = 1e-5;
        for _ in 0..30 {
            let a = random_exact_poly(&mut rng);
            let z0 = MpC::from_f64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), p);
            let hp = MpC::from_f64(h, 0.0, p);
            let plus = a.evaluate(&z0.add(&hp)).unwrap();
            let minus = a.evaluate(&z0.sub(&hp)).unwrap();
            let fd = plus.sub(&minus).div(&MpC::from_f64(2.0 * h, 0.0, p));
            let exact = a.differentiate().evaluate(&z0).unwrap();
            assert!(fd.sub(&exact).abs().to_f64() < 1e-6);
        }
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let a = random_exact_poly(&mut rng);
            let b = random_exact_poly(&mut rng);
            let mut prod = a.mul(&b);
            let before = prod.clone();
            prod.canonicalize();
            assert!(prod.eq_exact(&before));
        }
    }

    #[test]
    fn antiderivative_inverts_differentiate() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(12);
        for _ in 0..100 {
            let a = random_exact_poly(&mut rng);
            let (exp_part, linear) = a.antiderivative_split();
            let back = exp_part.differentiate().add(&ExpPoly::constant(linear));
            assert!(back.sub(&a).is_zero_tol(0.0));
        }
    }
}
