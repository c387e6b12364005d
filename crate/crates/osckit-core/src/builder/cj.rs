//! Coefficient ladder for the exponential ansatz g = Σ cⱼ e^{(m+1−jt)z}.
//!
//! Raising g's exponential sum to the n-th power produces multinomial
//! coefficients C_{k₀}; requiring C_{k₀} = 0 for k₀ = 2..m determines
//! c₂…c_m successively as exact rational multiples of c₁^j / c₀^{j−1}.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::expalg::CNum;

/// Enumerates all (j₀..j_m) with Σjᵢ = n and Σ i·jᵢ = k₀, passing the
/// multinomial weight n!/(j₀!…j_m!) to the callback.
fn for_each_composition(n: u32, m: usize, k0: u32, f: &mut impl FnMut(&[u32], &BigInt)) {
    fn rec(
        idx: usize,
        remaining_n: u32,
        remaining_k: i64,
        m: usize,
        current: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32], &BigInt),
    ) {
        if idx == m {
            // last slot takes everything left
            if remaining_k == (m as i64) * remaining_n as i64 {
                current.push(remaining_n);
                let w = multinomial_weight(current);
                f(current, &w);
                current.pop();
            }
            return;
        }
        for j in 0..=remaining_n {
            let k_used = (idx as i64) * j as i64;
            if k_used > remaining_k {
                break;
            }
            current.push(j);
            rec(idx + 1, remaining_n - j, remaining_k - k_used, m, current, f);
            current.pop();
        }
    }
    let mut current = Vec::with_capacity(m + 1);
    rec(0, n, k0 as i64, m, &mut current, f);
}

fn multinomial_weight(js: &[u32]) -> BigInt {
    let n: u32 = js.iter().sum();
    let mut acc = factorial(n);
    for &j in js {
        acc /= factorial(j);
    }
    acc
}

fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// The multinomial coefficient C_{k₀} of (Σ cⱼ xʲ)ⁿ: the sum over all
/// compositions j₀+…+j_m = n with weighted sum k₀ of n!/(j₀!…j_m!)·Π cᵢ^{jᵢ}.
pub fn multinomial_c(n: u32, coeffs: &[CNum], k0: u32) -> CNum {
    if coeffs.is_empty() {
        return CNum::zero();
    }
    let m = coeffs.len() - 1;
    let mut acc = CNum::zero();
    for_each_composition(n, m, k0, &mut |js, w| {
        let mut term = CNum::from_rational(BigRational::from(w.clone()));
        for (i, &j) in js.iter().enumerate() {
            if j > 0 {
                term = term.mul(&coeffs[i].pow_u(j as u64));
            }
        }
        acc = acc.add(&term);
    });
    acc
}

fn multinomial_c_rational(n: u32, coeffs: &[BigRational], k0: u32) -> BigRational {
    let m = coeffs.len() - 1;
    let mut acc = BigRational::zero();
    for_each_composition(n, m, k0, &mut |js, w| {
        let mut term = BigRational::from(w.clone());
        for (i, &j) in js.iter().enumerate() {
            for _ in 0..j {
                term *= &coeffs[i];
            }
        }
        acc += term;
    });
    acc
}

/// Solves C_{k₀} = 0 successively for k₀ = 2..m, returning ratios r₀..r_m
/// with cⱼ = rⱼ·c₁ʲ/c₀^{j−1}. By homogeneity the ratios are computed once
/// at c₀ = c₁ = 1 and scale to every branch.
pub fn cj_sequence(n: u32, m: usize) -> Vec<BigRational> {
    assert!(n >= 2, "the ansatz power must be at least 2");
    let mut rs: Vec<BigRational> = vec![BigRational::one()];
    if m >= 1 {
        rs.push(BigRational::one());
    }
    for k0 in 2..=m {
        // C_{k0} = n·r_{k0} + (terms in r_1..r_{k0-1}); solve for r_{k0}.
        let mut trial = rs.clone();
        trial.push(BigRational::zero());
        let rest = multinomial_c_rational(n, &trial, k0 as u32);
        rs.push(-rest / BigRational::from(BigInt::from(n)));
    }
    rs
}

/// Instantiates cⱼ = rⱼ·c₁ʲ/c₀^{j−1} for a concrete branch.
pub fn cj_values(c0: &CNum, c1: &CNum, rs: &[BigRational]) -> Vec<CNum> {
    rs.iter()
        .enumerate()
        .map(|(j, r)| {
            let mut v = CNum::from_rational(r.clone());
            if j == 0 {
                return v.mul(c0);
            }
            v = v.mul(&c1.pow_u(j as u64));
            if j >= 1 {
                let c0_pow = c0.pow_u((j - 1) as u64);
                v = v.div(&c0_pow).expect("c0 is a unit");
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyq::RatPoly;
    use rand::{Rng, SeedableRng};

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn evaluator_reproduces_power_normalizations() {
        // (c0)^n at k0 = 0 and n·c0^{n-1}c1 at k0 = 1
        let c0 = CNum::ratio(2, 3);
        let c1 = CNum::ratio(-1, 7);
        let coeffs = [c0.clone(), c1.clone()];
        let at0 = multinomial_c(3, &coeffs, 0);
        assert!(at0.eq_exact(&c0.pow_u(3)));
        let at1 = multinomial_c(3, &coeffs, 1);
        let expected = c0.pow_u(2).mul(&c1).scale_i64(3);
        assert!(at1.eq_exact(&expected));
    }

    #[test]
    fn n2_m2_forces_c2() {
        // C₂ = c1² + 2c0c2 = 0 forces c2 = −c1²/(2c0)
        let rs = cj_sequence(2, 2);
        assert_eq!(rs.len(), 3);
        assert_eq!(rs[2], rat(-1, 2));
        let c0 = CNum::from_i64(-1);
        let c1 = CNum::ratio(3, 5);
        let cs = cj_values(&c0, &c1, &rs);
        let c2_expected = c1.mul(&c1).neg().div(&c0.scale_i64(2)).unwrap();
        assert!(cs[2].sub(&c2_expected).is_zero_tol(0.0));
        // and C₂ really vanishes there
        assert!(multinomial_c(2, &cs, 2).is_zero_tol(0.0));
    }

    #[test]
    fn sequence_zeroes_all_middle_coefficients() {
        for n in 2..=4u32 {
            for m in 2..=5usize {
                let rs = cj_sequence(n, m);
                let cs = cj_values(&CNum::one(), &CNum::one(), &rs);
                for k0 in 2..=m as u32 {
                    let c = multinomial_c(n, &cs, k0);
                    assert!(c.is_zero_tol(0.0), "C_{k0} != 0 for n={n}, m={m}");
                }
            }
        }
    }

    #[test]
    fn evaluator_matches_bruteforce_expansion() {
        // (Σ cⱼ xʲ)ⁿ expanded by repeated polynomial multiplication.
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        for _ in 0..25 {
            let m = rng.gen_range(1..=4usize);
            let n = rng.gen_range(2..=4u32);
            let coeffs: Vec<BigRational> =
                (0..=m).map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect();
            let base = RatPoly::from_coeffs(coeffs.clone());
            let mut power = RatPoly::one();
            for _ in 0..n {
                power = power.mul(&base);
            }
            let cn: Vec<CNum> = coeffs.iter().map(|c| CNum::from_rational(c.clone())).collect();
            for k0 in 0..=(m as u32 * n) {
                let got = multinomial_c(n, &cn, k0);
                let want = CNum::from_rational(power.coeff(k0 as usize));
                assert!(got.eq_exact(&want), "coefficient {k0} mismatch");
            }
        }
    }

    #[test]
    fn half_power_series_consistency() {
        // For n = 2 the ladder matches the Taylor coefficients of
        // c0·sqrt(1 + 2x/c0·c1/c0...), equivalently (Σ cⱼ xʲ)² must be
        // exactly c0² + 2c0c1x modulo x^{m+1}.
        let rs = cj_sequence(2, 5);
        let cs = cj_values(&CNum::one(), &CNum::ratio(2, 3), &rs);
        let poly = RatPoly::from_coeffs(
            cs.iter()
                .map(|c| {
                    let (re, _) = c.as_exact().expect("exact");
                    re.clone()
                })
                .collect(),
        );
        let sq = poly.mul(&poly);
        for k0 in 2..=5usize {
            assert!(sq.coeff(k0).is_zero(), "degree {k0} must cancel");
        }
    }
}
