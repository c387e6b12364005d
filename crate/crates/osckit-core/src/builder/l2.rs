//! Builders for the l = 2, s = 1 family, where g = c₀e^z + c.
//!
//! Matching coefficients in the residual forces 2c₀(c + k) + c₀ = b₂ and
//! c² = b₃, and the κ coefficients satisfy the downward recursion
//! 2c₀(k+1−i)a_{i−1} = (2ic + i²)aᵢ. Each emitted form is normalized to
//! aₖ = 1 and passes the residual verifier.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::{downward_kappa, kappa_from_coeffs, BuildError, BuildOpts, EqSpec, SolutionForm};
use crate::expalg::{CNum, ExpPoly};
use crate::verify::residual_raw;

/// Tolerance for the k-must-be-an-integer test on float branches.
const INTEGER_TOL: f64 = 1e-20;

fn assemble(
    spec: &EqSpec,
    k: usize,
    c0: &CNum,
    c: &CNum,
    sigma: i64,
    branch: &str,
    opts: &BuildOpts,
) -> Option<SolutionForm> {
    let coeffs = downward_kappa(k, c, c0, sigma, opts.residual_tol)?;
    let kappa = kappa_from_coeffs(&coeffs);
    let g = ExpPoly::from_terms(1, [(1, c0.scale_i64(sigma)), (0, c.clone())]);
    let r = residual_raw(&spec.coefficient_poly(), &kappa, &g);
    let verified = r.is_zero_tol(opts.residual_tol);
    debug_assert!(verified, "recursion output failed residual check: {r}");
    if !verified {
        return None;
    }
    Some(SolutionForm {
        l: spec.l,
        s: spec.s,
        b2: spec.b2.clone(),
        b3: spec.b3.clone(),
        kappa,
        g,
        k,
        c0: c0.scale_i64(sigma),
        c: c.clone(),
        branch: branch.to_string(),
        verified,
    })
}

/// All solution forms of f″ = (e^{2z} + b₂e^z + b₃)f with finitely many
/// zeros: for each branch c₀ = ±1 and each square root c of b₃, the degree
/// k = (c₀b₂ − 1)/2 − c must be a nonnegative integer, and a₀ must survive
/// the downward recursion. No matching branch yields an empty list.
pub fn build_l2(b2: &CNum, b3: &CNum, opts: &BuildOpts) -> Result<Vec<SolutionForm>, BuildError> {
    let spec = EqSpec::new(2, 1, b2.clone(), b3.clone())?;
    let mut out = Vec::new();
    for c0_sign in [1i64, -1] {
        let c0 = CNum::from_i64(c0_sign);
        for (idx, c) in b3.sqrt_both(opts.precision).into_iter().enumerate() {
            // k = (c0·b2 − 1)/2 − c
            let k_val = b2.mul(&c0).sub(&CNum::one()).scale_ratio(1, 2).sub(&c);
            let Some(k) = k_val.as_integer(INTEGER_TOL) else {
                continue;
            };
            if k < 0 {
                continue;
            }
            let branch = format!("c0={c0_sign:+}, c-branch={idx}");
            if let Some(sol) = assemble(&spec, k as usize, &c0, &c, 1, &branch, opts) {
                out.push(sol);
            }
        }
    }
    out.sort_by(|a, b| (a.k, a.branch.clone()).cmp(&(b.k, b.branch.clone())));
    Ok(out)
}

/// Constructs the two-solution family for distinct degrees k₁ ≠ k₂:
/// c = −(k₁+k₂+1)/2, b₂ = c₀(k₁−k₂), b₃ = c². The first form uses (c₀, k₁),
/// the second the opposite exponential sign (−c₀, k₂); their Wronskian is a
/// nonzero constant.
pub fn build_pair(
    k1: usize,
    k2: usize,
    c0_sign: i64,
    opts: &BuildOpts,
) -> Result<(EqSpec, SolutionForm, SolutionForm), BuildError> {
    if k1 == k2 {
        return Err(BuildError::DistinctDegreesRequired);
    }
    assert!(c0_sign == 1 || c0_sign == -1, "c0 must be +1 or -1");
    let c0 = CNum::from_i64(c0_sign);
    let c = CNum::ratio(-(k1 as i64 + k2 as i64 + 1), 2);
    let b2 = c0.scale_i64(k1 as i64 - k2 as i64);
    let b3 = c.mul(&c);
    let spec = EqSpec::new(2, 1, b2, b3)?;

    let f1 = assemble(&spec, k1, &c0, &c, 1, &format!("pair k1={k1}, c0={c0_sign:+}"), opts)
        .expect("a0 != 0 holds: 2ic + i^2 never vanishes for i <= k1");
    let f2 = assemble(&spec, k2, &c0, &c, -1, &format!("pair k2={k2}, c0={:+}", -c0_sign), opts)
        .expect("a0 != 0 holds: 2ic + i^2 never vanishes for i <= k2");

    let w = crate::verify::wronskian(&f1, &f2, opts.residual_tol)
        .expect("pair shares the linear part of h");
    assert!(!w.is_zero_tol(opts.residual_tol), "pair must be linearly independent");
    Ok((spec, f1, f2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{pair_report, residual, wronskian};

    fn opts() -> BuildOpts {
        BuildOpts::default()
    }

    /// Proportionality of exponential polynomials, as scalar check.
    fn proportional(a: &ExpPoly, b: &ExpPoly) -> bool {
        let Some(j) = a.max_exp() else {
            return b.is_zero();
        };
        let ratio = b.coeff(j).div(&a.coeff(j)).expect("leading coefficient nonzero");
        a.scale(&ratio).sub(b).is_zero_tol(1e-25)
    }

    #[test]
    fn unit_b2_b3_yields_two_forms() {
        let sols = build_l2(&CNum::one(), &CNum::one(), &opts()).unwrap();
        assert_eq!(sols.len(), 2);
        // k = 0 branch: c0 = −1, c = −1, κ = 1
        let k0 = &sols[0];
        assert_eq!(k0.k, 0);
        assert!(k0.c0.eq_exact(&CNum::from_i64(-1)));
        assert!(k0.c.eq_exact(&CNum::from_i64(-1)));
        assert!(k0.kappa.eq_exact(&ExpPoly::one()));
        // k = 1 branch: c0 = 1, c = −1, κ ∝ 1 − 2e^z
        let k1 = &sols[1];
        assert_eq!(k1.k, 1);
        assert!(k1.c0.eq_exact(&CNum::one()));
        assert!(k1.c.eq_exact(&CNum::from_i64(-1)));
        let target = ExpPoly::from_terms(1, [(0, CNum::one()), (1, CNum::from_i64(-2))]);
        assert!(proportional(&k1.kappa, &target));
        for s in &sols {
            assert!(s.verified);
            assert!(s.check_invariants(1e-25).is_ok());
        }
    }

    #[test]
    fn zero_b3_single_branch() {
        // b2 = 3, b3 = 0 → k = 1, c0 = 1, c = 0, κ ∝ 1 + 2e^z
        let sols = build_l2(&CNum::from_i64(3), &CNum::zero(), &opts()).unwrap();
        assert_eq!(sols.len(), 1);
        let s = &sols[0];
        assert_eq!(s.k, 1);
        assert!(s.c0.eq_exact(&CNum::one()));
        assert!(s.c.eq_exact(&CNum::zero()));
        let target = ExpPoly::from_terms(1, [(0, CNum::one()), (1, CNum::from_i64(2))]);
        assert!(proportional(&s.kappa, &target));
    }

    #[test]
    fn non_integer_degree_gives_empty() {
        let sols = build_l2(&CNum::ratio(1, 2), &CNum::one(), &opts()).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn float_b3_branch_works() {
        // b3 = 2: c = ±√2 float; choose b2 so a branch closes: b2 = c0(2c+2k+1)
        // with c = −√2 − ... pick b2 = 3 − 2√2 ≈ 0.1716: k = (b2−1)/2 + √2 = 1
        let sqrt2 = CNum::from_i64(2).sqrt(113);
        let b2 = CNum::from_i64(3).sub(&sqrt2.scale_i64(2));
        let sols = build_l2(&b2, &CNum::from_i64(2), &opts()).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            assert!(s.verified);
            let r = residual(&s.eq_spec(), s);
            assert!(r.is_zero_tol(1e-25));
        }
    }

    #[test]
    fn pair_construction_basics() {
        let (spec, f1, f2) = build_pair(1, 0, 1, &opts()).unwrap();
        assert!(spec.b2.eq_exact(&CNum::one()));
        assert!(spec.b3.eq_exact(&CNum::one()));
        // f1 ∝ (1 − 2e^z)e^{e^z − z}: g1 = e^z − 1
        assert!(f1.g.eq_exact(&ExpPoly::from_terms(
            1,
            [(1, CNum::one()), (0, CNum::from_i64(-1))]
        )));
        // f2 = e^{−e^z − z}: κ = 1, g2 = −e^z − 1
        assert!(f2.kappa.eq_exact(&ExpPoly::one()));
        assert!(f2.g.eq_exact(&ExpPoly::from_terms(
            1,
            [(1, CNum::from_i64(-1)), (0, CNum::from_i64(-1))]
        )));
        let w = wronskian(&f1, &f2, 1e-25).unwrap();
        assert!(!w.is_zero());
        let report = pair_report(&spec, &f1, &f2, 1e-25);
        assert!(report.is_solution);
    }

    #[test]
    fn pair_formulas_hold() {
        // b2 = c0(k1−k2), 4b3 = (k1+k2+1)²
        let (spec, _, _) = build_pair(2, 1, -1, &opts()).unwrap();
        assert!(spec.b2.eq_exact(&CNum::from_i64(-1)));
        assert!(spec.b3.eq_exact(&CNum::from_i64(4)));
    }

    #[test]
    fn pair_requires_distinct_degrees() {
        assert!(matches!(build_pair(1, 1, 1, &opts()), Err(BuildError::DistinctDegreesRequired)));
    }

    #[test]
    fn pair_round_trips_through_build_l2() {
        for (k1, k2, c0) in [(1usize, 0usize, 1i64), (3, 1, -1), (4, 2, 1), (2, 5, 1)] {
            let (spec, f1, f2) = build_pair(k1, k2, c0, &opts()).unwrap();
            let sols = build_l2(&spec.b2, &spec.b3, &opts()).unwrap();
            assert_eq!(sols.len(), 2, "expected both members for ({k1},{k2},{c0})");
            for f in [&f1, &f2] {
                let twin = sols
                    .iter()
                    .find(|s| s.k == f.k && s.c0.sub(&f.c0).is_zero())
                    .expect("matching branch");
                // identical up to the a_k = 1 normalization both use
                assert!(twin.kappa.sub(&f.kappa).is_zero_tol(1e-25));
            }
        }
    }

    #[test]
    fn pair_symmetry_in_arguments() {
        let (sa, a1, a2) = build_pair(3, 1, 1, &opts()).unwrap();
        let (sb, b1, b2) = build_pair(1, 3, -1, &opts()).unwrap();
        assert!(sa.b2.sub(&sb.b2).is_zero());
        assert!(sa.b3.sub(&sb.b3).is_zero());
        // same pair with roles swapped
        assert!(a1.kappa.sub(&b2.kappa).is_zero_tol(1e-25));
        assert!(a2.kappa.sub(&b1.kappa).is_zero_tol(1e-25));
        assert!(a1.g.sub(&b2.g).is_zero_tol(1e-25));
    }
}
