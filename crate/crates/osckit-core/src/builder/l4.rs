//! Builders for the two l = 4 families.
//!
//! For s = 1: g = c₀e^{2z} + c with 2c + 2k + 2 = 0 and b₃ = c² forced, and
//! b₂ left free; the upward recursion
//! 2c₀(k−i+2)a_{i−2} = −b₂a_{i−1} + (2ic + i²)aᵢ threads b₂ through as a
//! polynomial unknown and terminates only on the closure polynomial
//! P(b₂) = 2c₀a_{k−1} + b₂aₖ = 0.
//!
//! For s = 3: g = c₀e^{2z} + c₁e^z + c with 2c₀c₁ = b₂, c² = b₃ and
//! c₁² + (2 + 2c + 2k)c₀ = 0. Substituting the c₁² relation into the upward
//! recursion (2k−2i+4)c₀a_{i−2} = (2c+2i−1)c₁a_{i−1} + (2ic+i²)aᵢ makes each
//! aᵢ equal c₁^(i mod 2)·c₀^⌊i/2⌋ times a rational function of t = 2c that
//! carries no c₀, and closure at i = k + 1 yields a polynomial P(t) with
//! exact rational coefficients.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use super::{
    kappa_from_coeffs, BuildError, BuildOpts, ClosureRoot, ClosureSystem, EqSpec, SolutionForm,
    Unknown,
};
use crate::expalg::{cnum_poly_roots, CNum, ExpPoly};
use crate::polyq::{RatFunc, RatPoly};
use crate::verify::residual_raw;

/// Collects roots of a primitive closure polynomial: exact rational roots
/// first, then the numerically polished remainder.
fn closure_roots(p: &RatPoly, opts: &BuildOpts) -> Result<Vec<CNum>, BuildError> {
    let (rational, rest) = p.rational_roots();
    let mut out: Vec<CNum> = Vec::new();
    for (r, mult) in rational {
        for _ in 0..mult {
            out.push(CNum::from_rational(r.clone()));
        }
    }
    if rest.degree().map_or(false, |d| d >= 1) {
        let numeric = cnum_poly_roots(&rest.to_cnum_coeffs(), &opts.root_opts())?;
        for (z, mult) in numeric {
            for _ in 0..mult {
                out.push(CNum::from_mpc(z.clone()));
            }
        }
    }
    // stable order: by real part, then imaginary part
    out.sort_by(|a, b| {
        let pa = a.to_f64_pair();
        let pb = b.to_f64_pair();
        pa.partial_cmp(&pb).unwrap_or(core::cmp::Ordering::Equal)
    });
    Ok(out)
}

/// The (l, s) = (4, 1) builder: fixes c = −(k+1), b₃ = (k+1)², treats b₂ as
/// the unknown, and returns the closure polynomial P(b₂) together with one
/// verified solution form per admissible root.
pub fn build_l4_s1(
    k: usize,
    c0_sign: i64,
    opts: &BuildOpts,
) -> Result<(ClosureSystem, Vec<SolutionForm>), BuildError> {
    if k == 0 {
        return Err(BuildError::DegreeAtLeastOne);
    }
    assert!(c0_sign == 1 || c0_sign == -1, "c0 must be +1 or -1");
    let c = CNum::from_i64(-(k as i64) - 1);
    let b3 = c.mul(&c);

    // aᵢ as exact polynomials in b₂: aᵢ = [2c₀(k−i+2)a_{i−2} + b₂a_{i−1}] / (i(i−2k−2))
    let mut a: Vec<RatPoly> = vec![RatPoly::one()];
    for i in 1..=k {
        let ii = i as i64;
        let prev2 = if i >= 2 { a[i - 2].clone() } else { RatPoly::zero() };
        let numer = prev2
            .scale(&BigRational::from_integer((2 * c0_sign * (k as i64 - ii + 2)).into()))
            .add(&a[i - 1].shift_up(1));
        let denom = BigRational::from_integer((ii * (ii - 2 * k as i64 - 2)).into());
        a.push(numer.scale(&(BigRational::from_integer(1.into()) / denom)));
    }
    let closure = a[k - 1]
        .scale(&BigRational::from_integer((2 * c0_sign).into()))
        .add(&a[k].shift_up(1))
        .primitive();
    debug_assert_eq!(closure.degree(), Some(k + 1));

    let mut roots = Vec::new();
    let mut sols = Vec::new();
    for (idx, b2) in closure_roots(&closure, opts)?.into_iter().enumerate() {
        if b2.is_zero_tol(opts.residual_tol) {
            roots.push(ClosureRoot {
                value: b2,
                diagnostic: Some(String::from("b2 = 0 is outside the equation family")),
            });
            continue;
        }
        let coeffs: Vec<CNum> = a.iter().map(|p| p.eval_cnum(&b2)).collect();
        if coeffs[k].is_zero_tol(opts.residual_tol) {
            roots.push(ClosureRoot {
                value: b2,
                diagnostic: Some(String::from("leading coefficient a_k vanishes")),
            });
            continue;
        }
        let spec = EqSpec::new(4, 1, b2.clone(), b3.clone())?;
        let kappa = kappa_from_coeffs(&coeffs);
        let g = ExpPoly::from_terms(1, [(2, CNum::from_i64(c0_sign)), (0, c.clone())]);
        let r = residual_raw(&spec.coefficient_poly(), &kappa, &g);
        let verified = r.is_zero_tol(opts.residual_tol);
        debug_assert!(verified, "closure root failed residual: {r}");
        if !verified {
            roots.push(ClosureRoot {
                value: b2,
                diagnostic: Some(format!("residual {:.3e}", r.max_coeff_modulus())),
            });
            continue;
        }
        roots.push(ClosureRoot { value: b2.clone(), diagnostic: None });
        sols.push(SolutionForm {
            l: 4,
            s: 1,
            b2,
            b3: b3.clone(),
            kappa,
            g,
            k,
            c0: CNum::from_i64(c0_sign),
            c: c.clone(),
            branch: format!("c0={c0_sign:+}, root={idx}"),
            verified,
        });
    }
    let system =
        ClosureSystem::Univariate { unknown: Unknown::B2, equations: vec![closure], roots };
    Ok((system, sols))
}

/// Parity-reduced coefficients for the (4, 3) elimination: Aᵢ with
/// aᵢ = c₁^(i mod 2)·c₀^⌊i/2⌋·Aᵢ(t), after replacing every c₁² by
/// −(t + 2k + 2)c₀. The recursions are c₀-free:
///
/// ```text
/// even i: i(t+i)Aᵢ = (2k−2i+4)A_{i−2} + (t+2i−1)(t+2k+2)A_{i−1}
/// odd  i: i(t+i)Aᵢ = (2k−2i+4)A_{i−2} − (t+2i−1)A_{i−1}
/// ```
fn l4_s3_parity_coeffs(k: usize) -> Vec<RatFunc> {
    let mut a: Vec<RatFunc> = vec![RatFunc::one()];
    for i in 1..=k {
        let ii = i as i64;
        let prev2 = if i >= 2 { a[i - 2].clone() } else { RatFunc::zero() };
        let scale2k = BigRational::from_integer((2 * (k as i64) - 2 * ii + 4).into());
        let f = RatPoly::x_plus(2 * ii - 1);
        let coupled = if i % 2 == 0 {
            a[i - 1].mul_poly(&f.mul(&RatPoly::x_plus(2 * k as i64 + 2)))
        } else {
            a[i - 1].mul_poly(&f).neg()
        };
        let numer = prev2.scale(&scale2k).add(&coupled);
        let denom = RatPoly::x_plus(ii).scale(&BigRational::from_integer(ii.into()));
        a.push(numer.div_poly(&denom));
    }
    a
}

/// Closure polynomial P(t) for the (4, 3) family at degree k, primitive and
/// independent of c₀ and c₁.
pub(crate) fn l4_s3_closure(k: usize) -> RatPoly {
    if k == 0 {
        // (t + 1)c₁a₀ = 0 with c₁ ≠ 0 and a₀ = 1
        return RatPoly::x_plus(1);
    }
    let a = l4_s3_parity_coeffs(k);
    let e1 = if k % 2 == 0 {
        a[k].mul_poly(&RatPoly::x_plus(2 * k as i64 + 1))
            .sub(&a[k - 1].scale(&BigRational::from_integer(2.into())))
    } else {
        a[k].mul_poly(&RatPoly::x_plus(2 * k as i64 + 1).mul(&RatPoly::x_plus(2 * k as i64 + 2)))
            .add(&a[k - 1].scale(&BigRational::from_integer(2.into())))
    };
    e1.num().primitive()
}

/// The (l, s) = (4, 3) builder: eliminates the recursion with t = 2c
/// symbolic, returns the closure polynomial P(t), and for every
/// non-degenerate root emits residual-verified solution forms over all
/// branches of c₀ and c₁.
pub fn build_l4_s3(
    k: usize,
    opts: &BuildOpts,
) -> Result<(ClosureSystem, Vec<SolutionForm>), BuildError> {
    let closure = l4_s3_closure(k);
    let mut roots = Vec::new();
    let mut sols = Vec::new();

    for (idx, t) in closure_roots(&closure, opts)?.into_iter().enumerate() {
        // Roots colliding with a recursion denominator i(t + i), 1 <= i <= k,
        // fall outside the elimination's validity.
        let degenerate = (1..=k as i64).any(|i| t.add(&CNum::from_i64(i)).is_zero_tol(1e-12));
        if degenerate {
            roots.push(ClosureRoot {
                value: t,
                diagnostic: Some(String::from(
                    "degenerate: recursion denominator i(t+i) vanishes for some 1 <= i <= k",
                )),
            });
            continue;
        }
        roots.push(ClosureRoot { value: t.clone(), diagnostic: None });
        let c = t.scale_ratio(1, 2);
        let b3 = c.mul(&c);
        for c0_sign in [1i64, -1] {
            let c0 = CNum::from_i64(c0_sign);
            // c₁² = −(2 + t + 2k)c₀
            let c1_sq = t.add(&CNum::from_i64(2 + 2 * k as i64)).neg().mul(&c0);
            for (c1_idx, c1) in c1_sq.sqrt_both(opts.precision).into_iter().enumerate() {
                if c1.is_zero_tol(opts.residual_tol) {
                    continue; // b2 would vanish
                }
                let b2 = c0.scale_i64(2).mul(&c1);
                let spec = EqSpec::new(4, 3, b2.clone(), b3.clone())?;
                // numeric upward recursion
                let mut coeffs: Vec<CNum> = vec![CNum::one()];
                for i in 1..=k {
                    let ii = i as i64;
                    let prev2 = if i >= 2 { coeffs[i - 2].clone() } else { CNum::zero() };
                    let lead = prev2.mul(&c0).scale_i64(2 * (k as i64) - 2 * ii + 4);
                    let coupled =
                        coeffs[i - 1].mul(&c1).mul(&t.add(&CNum::from_i64(2 * ii - 1)));
                    let denom = t.add(&CNum::from_i64(ii)).scale_i64(ii);
                    coeffs.push(lead.sub(&coupled).div(&denom).expect("non-degenerate root"));
                }
                if coeffs[k].is_zero_tol(opts.residual_tol) {
                    continue;
                }
                let kappa = kappa_from_coeffs(&coeffs);
                let g = ExpPoly::from_terms(
                    1,
                    [(2, c0.clone()), (1, c1.clone()), (0, c.clone())],
                );
                let r = residual_raw(&spec.coefficient_poly(), &kappa, &g);
                let verified = r.is_zero_tol(opts.residual_tol);
                debug_assert!(verified, "closure root failed residual: {r}");
                if !verified {
                    continue;
                }
                sols.push(SolutionForm {
                    l: 4,
                    s: 3,
                    b2,
                    b3: b3.clone(),
                    kappa,
                    g,
                    k,
                    c0: c0.clone(),
                    c: c.clone(),
                    branch: format!("root={idx}, c0={c0_sign:+}, c1-branch={c1_idx}"),
                    verified,
                });
            }
        }
    }
    let system =
        ClosureSystem::Univariate { unknown: Unknown::T, equations: vec![closure], roots };
    Ok((system, sols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::residual;

    fn opts() -> BuildOpts {
        BuildOpts::default()
    }

    #[test]
    fn s1_degree_one_closure_is_b2_squared_minus_six() {
        let (system, sols) = build_l4_s1(1, 1, &opts()).unwrap();
        let ClosureSystem::Univariate { unknown, equations, roots } = &system else {
            panic!("expected univariate closure");
        };
        assert_eq!(*unknown, Unknown::B2);
        assert_eq!(equations[0], RatPoly::from_i64_coeffs(&[-6, 0, 1]));
        assert_eq!(roots.len(), 2);
        assert_eq!(sols.len(), 2);
        for s in &sols {
            assert!(s.verified);
            assert!(s.c.eq_exact(&CNum::from_i64(-2)));
            assert!(s.b3.eq_exact(&CNum::from_i64(4)));
            // kappa = 1 − (b2/3)e^z
            let expected_a1 = s.b2.scale_ratio(-1, 3);
            assert!(s.kappa.coeff(1).sub(&expected_a1).is_zero_tol(1e-30));
            assert!(s.kappa.coeff(0).eq_exact(&CNum::one()));
            // roots are ±√6
            let b2sq = s.b2.mul(&s.b2).sub(&CNum::from_i64(6));
            assert!(b2sq.is_zero_tol(1e-30));
        }
    }

    #[test]
    fn s1_negative_branch_has_imaginary_roots() {
        let (system, sols) = build_l4_s1(1, -1, &opts()).unwrap();
        let ClosureSystem::Univariate { equations, .. } = &system else {
            panic!("expected univariate closure");
        };
        // b2² + 6 = 0
        assert_eq!(equations[0], RatPoly::from_i64_coeffs(&[6, 0, 1]));
        assert_eq!(sols.len(), 2);
        for s in &sols {
            let (re, im) = s.b2.to_f64_pair();
            assert!(re.abs() < 1e-25);
            assert!((im.abs() - 6f64.sqrt()).abs() < 1e-12);
            assert!(s.verified);
        }
    }

    #[test]
    fn s1_degree_two_roots_all_verified() {
        let (system, sols) = build_l4_s1(2, 1, &opts()).unwrap();
        let ClosureSystem::Univariate { equations, roots, .. } = &system else {
            panic!("expected univariate closure");
        };
        assert_eq!(equations[0].degree(), Some(3));
        // root b2 = 0 is excluded with a diagnostic, ±6 produce solutions
        assert_eq!(roots.len(), 3);
        assert_eq!(roots.iter().filter(|r| r.diagnostic.is_some()).count(), 1);
        assert_eq!(sols.len(), 2);
        for s in &sols {
            assert!(s.verified);
            let r = residual(&s.eq_spec(), s);
            assert!(r.is_zero_tol(0.0), "exact rational root must verify exactly");
        }
    }

    #[test]
    fn s1_closure_parity_symmetry() {
        // odd k: root set symmetric under b2 ↦ −b2; degree always k+1
        for k in 1..=4usize {
            let (system, _) = build_l4_s1(k, 1, &opts()).unwrap();
            let ClosureSystem::Univariate { equations, .. } = &system else {
                panic!()
            };
            let p = &equations[0];
            assert_eq!(p.degree(), Some(k + 1));
            if k % 2 == 1 {
                // p(x) and p(−x) agree up to sign
                let flipped = RatPoly::from_coeffs(
                    p.coeffs()
                        .iter()
                        .enumerate()
                        .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                        .collect(),
                );
                let matches_even = flipped.sub(p).is_zero();
                let matches_odd = flipped.add(p).is_zero();
                assert!(matches_even || matches_odd, "k={k} closure lacks parity");
            }
        }
    }

    #[test]
    fn s1_rejects_degree_zero() {
        assert!(matches!(build_l4_s1(0, 1, &opts()), Err(BuildError::DegreeAtLeastOne)));
    }

    #[test]
    fn s3_degree_one_closure_factors() {
        let (system, sols) = build_l4_s3(1, &opts()).unwrap();
        let ClosureSystem::Univariate { unknown, equations, roots } = &system else {
            panic!("expected univariate closure");
        };
        assert_eq!(*unknown, Unknown::T);
        // (t+2)(t+5) = t² + 7t + 10
        assert_eq!(equations[0], RatPoly::from_i64_coeffs(&[10, 7, 1]));
        let mut vals: Vec<f64> = roots.iter().map(|r| r.value.to_f64_pair().0).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] + 5.0).abs() < 1e-25 && (vals[1] + 2.0).abs() < 1e-25);
        assert!(!sols.is_empty());
        for s in &sols {
            assert!(s.verified);
        }
    }

    #[test]
    fn s3_root_minus_five_branches() {
        // t = −5, c0 = 1: c = −5/2, c1² = 1, b2 = ±2, b3 = 25/4
        let (_, sols) = build_l4_s3(1, &opts()).unwrap();
        let matching: Vec<&SolutionForm> = sols
            .iter()
            .filter(|s| {
                s.c.eq_exact(&CNum::ratio(-5, 2)) && s.c0.eq_exact(&CNum::one())
            })
            .collect();
        assert_eq!(matching.len(), 2);
        for s in &matching {
            assert!(s.b3.eq_exact(&CNum::ratio(25, 4)));
            let b2sq = s.b2.mul(&s.b2);
            assert!(b2sq.eq_exact(&CNum::from_i64(4)));
        }
    }

    #[test]
    fn s3_root_minus_two_negative_c0() {
        // t = −2, c0 = −1: c1² = 2, b2 = ∓2√2, b3 = 1
        let (_, sols) = build_l4_s3(1, &opts()).unwrap();
        let matching: Vec<&SolutionForm> = sols
            .iter()
            .filter(|s| {
                s.c.eq_exact(&CNum::from_i64(-1)) && s.c0.eq_exact(&CNum::from_i64(-1))
            })
            .collect();
        assert_eq!(matching.len(), 2);
        for s in &matching {
            assert!(s.b3.eq_exact(&CNum::one()));
            let b2sq = s.b2.mul(&s.b2).sub(&CNum::from_i64(8));
            assert!(b2sq.is_zero_tol(1e-28), "b2 = ±2√2");
            assert!(s.verified);
        }
    }

    #[test]
    fn s3_degree_zero_gives_quarter() {
        // closure t + 1: c = −1/2, b3 = 1/4; both c0 branches verify exactly
        let (system, sols) = build_l4_s3(0, &opts()).unwrap();
        let ClosureSystem::Univariate { equations, .. } = &system else {
            panic!()
        };
        assert_eq!(equations[0], RatPoly::from_i64_coeffs(&[1, 1]));
        assert_eq!(sols.len(), 4);
        for s in &sols {
            assert!(s.b3.eq_exact(&CNum::ratio(1, 4)));
            assert!(s.verified);
            let r = residual(&s.eq_spec(), s);
            // c0 = −1 gives c1 = ±1 and c0 = +1 gives c1 = ±i, both exact
            assert!(r.is_zero_tol(0.0));
        }
    }

    #[test]
    fn s3_parity_reduction_matches_raw_recursion() {
        // Evaluate the parity-reduced coefficients at a sample t and compare
        // with the raw recursion run numerically for both signs of c0.
        let k = 3usize;
        let t = CNum::from_i64(7);
        let a_sym = l4_s3_parity_coeffs(k);
        for c0_sign in [1i64, -1] {
            let c0 = CNum::from_i64(c0_sign);
            let c1_sq = t.add(&CNum::from_i64(2 + 2 * k as i64)).neg().mul(&c0);
            let c1 = c1_sq.sqrt(128);
            let mut raw: Vec<CNum> = vec![CNum::one()];
            for i in 1..=k {
                let ii = i as i64;
                let prev2 = if i >= 2 { raw[i - 2].clone() } else { CNum::zero() };
                let lead = prev2.mul(&c0).scale_i64(2 * (k as i64) - 2 * ii + 4);
                let coupled = raw[i - 1].mul(&c1).mul(&t.add(&CNum::from_i64(2 * ii - 1)));
                let denom = t.add(&CNum::from_i64(ii)).scale_i64(ii);
                raw.push(lead.sub(&coupled).div(&denom).unwrap());
            }
            for i in 0..=k {
                let par = a_sym[i].eval_cnum(&t).expect("no pole at t = 7");
                let c0_pow = c0.pow_u((i / 2) as u64);
                let c1_pow = c1.pow_u((i % 2) as u64);
                let predicted = par.mul(&c0_pow).mul(&c1_pow);
                assert!(
                    raw[i].sub(&predicted).is_zero_tol(1e-25),
                    "parity mismatch at i={i}, c0={c0_sign}"
                );
            }
        }
    }
}
