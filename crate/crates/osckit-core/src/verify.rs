//! Exact verification of candidate solutions.
//!
//! For f = κe^h with g = h′, the function f solves f″ − A·f = 0 exactly when
//! the κ-cleared residual
//!
//! ```text
//! R = κ(g² + g′) + 2κ′g + κ″ − Aκ
//! ```
//!
//! vanishes. Working with R keeps everything inside the exponential
//! polynomial ring: no division ever occurs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::builder::{EqSpec, SolutionForm};
use crate::expalg::{CNum, ExpPoly, FLOAT_ZERO_TOL};

#[derive(Clone, Debug)]
pub enum VerifyError {
    /// e^{h₁+h₂} does not reduce to an integer power of e^z, so the
    /// Wronskian is not an exponential polynomial.
    StructuralIncompatibility(String),
    /// The computed Wronskian kept a non-constant part: the two forms do not
    /// solve the same equation.
    WronskianNotConstant(ExpPoly),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::StructuralIncompatibility(msg) => {
                write!(f, "incompatible solution pair: {msg}")
            }
            VerifyError::WronskianNotConstant(w) => {
                write!(f, "wronskian is not constant: {w}")
            }
        }
    }
}

impl core::error::Error for VerifyError {}

/// Verification outcome for one candidate (or pair).
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub residual: ExpPoly,
    pub is_solution: bool,
    pub wronskian_constant: Option<CNum>,
    pub notes: Vec<String>,
}

/// κ-cleared residual of f = κe^h against the coefficient A.
pub fn residual_raw(a: &ExpPoly, kappa: &ExpPoly, g: &ExpPoly) -> ExpPoly {
    let quad = g.mul(g).add(&g.differentiate()).sub(a);
    let kp = kappa.differentiate();
    let kpp = kp.differentiate();
    kappa.mul(&quad).add(&kp.mul(g).scale(&CNum::from_i64(2))).add(&kpp)
}

/// Residual of a solution form against its equation.
pub fn residual(spec: &EqSpec, sol: &SolutionForm) -> ExpPoly {
    residual_raw(&spec.coefficient_poly(), &sol.kappa, &sol.g)
}

/// Residual check at the given tolerance (exact forms must vanish
/// structurally; float forms must stay below `tol` in max coefficient
/// modulus).
pub fn verify_solution(spec: &EqSpec, sol: &SolutionForm, tol: f64) -> VerifyReport {
    let r = residual(spec, sol);
    let ok = r.is_zero_tol(tol);
    let mut notes = Vec::new();
    if !ok {
        notes.push(format!("residual max coefficient modulus {:.3e}", r.max_coeff_modulus()));
    }
    VerifyReport { residual: r, is_solution: ok, wronskian_constant: None, notes }
}

/// Wronskian f₁′f₂ − f₁f₂′ of two solution forms, as an exponential
/// polynomial collapsed to its constant value.
///
/// The product e^{h₁+h₂} must reduce to an integer power of e^z; this holds
/// exactly when g₁ + g₂ is a constant integer (the exponential parts cancel).
pub fn wronskian(f1: &SolutionForm, f2: &SolutionForm, tol: f64) -> Result<CNum, VerifyError> {
    let gsum = f1.g.add(&f2.g);
    let (exp_part, linear) = gsum.antiderivative_split();
    if !exp_part.is_zero_tol(tol) {
        return Err(VerifyError::StructuralIncompatibility(format!(
            "exponential parts of h1 + h2 do not cancel: {exp_part}"
        )));
    }
    let Some(n) = linear.as_integer(tol) else {
        return Err(VerifyError::StructuralIncompatibility(format!(
            "h1 + h2 has non-integer linear coefficient {linear}"
        )));
    };
    let k1p = f1.kappa.differentiate();
    let k2p = f2.kappa.differentiate();
    let core = k1p
        .mul(&f2.kappa)
        .sub(&f1.kappa.mul(&k2p))
        .add(&f1.g.sub(&f2.g).mul(&f1.kappa).mul(&f2.kappa));
    let w = core.mul(&ExpPoly::monomial(1, n, CNum::one()));
    let mut nonconstant = w.clone();
    let constant = w.coeff(0);
    nonconstant = nonconstant.sub(&ExpPoly::constant(constant.clone()));
    if !nonconstant.is_zero_tol(tol) {
        return Err(VerifyError::WronskianNotConstant(w));
    }
    Ok(constant)
}

/// Full report for a pair: residuals of both forms plus their Wronskian.
pub fn pair_report(spec: &EqSpec, f1: &SolutionForm, f2: &SolutionForm, tol: f64) -> VerifyReport {
    let r1 = residual(spec, f1);
    let r2 = residual(spec, f2);
    let residual_sum = r1.add(&r2);
    let mut notes = Vec::new();
    let mut ok = r1.is_zero_tol(tol) && r2.is_zero_tol(tol);
    let wr = match wronskian(f1, f2, tol) {
        Ok(w) => {
            if w.is_zero_tol(tol) {
                notes.push(String::from("wronskian vanishes: solutions are linearly dependent"));
            }
            Some(w)
        }
        Err(e) => {
            ok = false;
            notes.push(format!("{e}"));
            None
        }
    };
    VerifyReport { residual: residual_sum, is_solution: ok, wronskian_constant: wr, notes }
}

/// Default residual tolerance used by builders.
pub const RESIDUAL_TOL: f64 = FLOAT_ZERO_TOL;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_pair, BuildOpts};
    use crate::mp::MpC;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};

    fn opts() -> BuildOpts {
        BuildOpts::default()
    }

    fn cn(n: i64) -> CNum {
        CNum::from_i64(n)
    }

    #[test]
    fn pair_member_residual_vanishes_exactly() {
        let (spec, f1, _) = build_pair(1, 0, 1, &opts()).unwrap();
        let r = residual(&spec, &f1);
        assert!(r.is_structurally_zero());
    }

    #[test]
    fn perturbed_constant_term_leaves_minus_kappa() {
        let (spec, f1, _) = build_pair(1, 0, 1, &opts()).unwrap();
        let mut bumped = spec.clone();
        bumped.b3 = bumped.b3.add(&CNum::one());
        let r = residual(&bumped, &f1);
        assert!(r.add(&f1.kappa).is_structurally_zero(), "residual must equal -kappa");
    }

    #[test]
    fn degree_zero_residual_matches_symbolic_expansion() {
        // κ = 1, g = c0·e^z + c against l = 2, s = 1:
        // R = (c0² − 1)e^{2z} + (2c0c + c0 − b2)e^z + (c² − b3)
        let mut rng = rand::rngs::StdRng::seed_from_u64(31);
        for _ in 0..50 {
            let pick = |rng: &mut rand::rngs::StdRng| {
                CNum::from_rational(BigRational::new(
                    BigInt::from(rng.gen_range(-9i64..=9)),
                    BigInt::from(rng.gen_range(1i64..=5)),
                ))
            };
            let c0 = pick(&mut rng);
            let c = pick(&mut rng);
            let b2 = pick(&mut rng);
            let b3 = pick(&mut rng);
            let a = ExpPoly::from_terms(1, [(2, CNum::one()), (1, b2.clone()), (0, b3.clone())]);
            let kappa = ExpPoly::one();
            let g = ExpPoly::from_terms(1, [(1, c0.clone()), (0, c.clone())]);
            let r = residual_raw(&a, &kappa, &g);
            let expected = ExpPoly::from_terms(
                1,
                [
                    (2, c0.mul(&c0).sub(&CNum::one())),
                    (1, c0.mul(&c).scale_i64(2).add(&c0).sub(&b2)),
                    (0, c.mul(&c).sub(&b3)),
                ],
            );
            assert!(r.sub(&expected).is_structurally_zero());
        }
    }

    #[test]
    fn residual_is_linear_in_kappa() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(32);
        let a = ExpPoly::from_terms(1, [(2, cn(1)), (1, cn(1)), (0, cn(1))]);
        let g = ExpPoly::from_terms(1, [(1, cn(1)), (0, cn(-1))]);
        for _ in 0..50 {
            let rand_poly = |rng: &mut rand::rngs::StdRng| {
                ExpPoly::from_terms(
                    1,
                    (0..4).map(|j| (j, cn(rng.gen_range(-5..=5)))),
                )
            };
            let k1 = rand_poly(&mut rng);
            let k2 = rand_poly(&mut rng);
            let lhs = residual_raw(&a, &k1.add(&k2), &g);
            let rhs = residual_raw(&a, &k1, &g).add(&residual_raw(&a, &k2, &g));
            assert!(lhs.sub(&rhs).is_structurally_zero());
        }
    }

    #[test]
    fn wronskian_of_constructed_pair_is_nonzero_constant() {
        let (_, f1, f2) = build_pair(1, 0, 1, &opts()).unwrap();
        let w = wronskian(&f1, &f2, 1e-25).unwrap();
        assert!(!w.is_zero());
        // for this normalization the constant comes out exactly
        assert!(w.eq_exact(&cn(2)));
    }

    #[test]
    fn identical_forms_have_zero_wronskian() {
        let (_, f1, _) = build_pair(2, 1, 1, &opts()).unwrap();
        // relabel the second copy so the structural check passes
        let mut twin = f1.clone();
        twin.g = f1.g.clone();
        // w(f, f) needs g1 + g2 to reduce: e^{2h} is not a power of e^z in
        // general, so check dependence through the core formula directly:
        // κ′κ − κκ′ + (g − g)κ² = 0.
        let core = f1
            .kappa
            .differentiate()
            .mul(&twin.kappa)
            .sub(&f1.kappa.mul(&twin.kappa.differentiate()))
            .add(&f1.g.sub(&twin.g).mul(&f1.kappa).mul(&twin.kappa));
        assert!(core.is_structurally_zero());
    }

    #[test]
    fn wronskian_antisymmetry_and_bilinearity() {
        let (_, f1, f2) = build_pair(3, 1, -1, &opts()).unwrap();
        let w12 = wronskian(&f1, &f2, 1e-25).unwrap();
        let w21 = wronskian(&f2, &f1, 1e-25).unwrap();
        assert!(w12.add(&w21).is_zero_tol(0.0));
        // scaling both members scales the constant
        let mut af1 = f1.clone();
        af1.kappa = f1.kappa.scale(&cn(3));
        let mut bf2 = f2.clone();
        bf2.kappa = f2.kappa.scale(&CNum::ratio(-1, 2));
        let w_scaled = wronskian(&af1, &bf2, 1e-25).unwrap();
        let expected = w12.mul(&cn(3)).mul(&CNum::ratio(-1, 2));
        assert!(w_scaled.sub(&expected).is_zero_tol(0.0));
    }

    #[test]
    fn incompatible_pair_is_rejected() {
        let (_, f1, _) = build_pair(1, 0, 1, &opts()).unwrap();
        let (_, g1, _) = build_pair(2, 0, 1, &opts()).unwrap();
        // g sums to a non-constant exponential part
        assert!(matches!(
            wronskian(&f1, &g1, 1e-25),
            Err(VerifyError::StructuralIncompatibility(_))
        ));
    }

    #[test]
    fn symbolic_wronskian_matches_numeric_samples() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(33);
        for (k1, k2, c0) in [(1usize, 0usize, 1i64), (2, 0, -1), (3, 2, 1)] {
            let (_, f1, f2) = build_pair(k1, k2, c0, &opts()).unwrap();
            let w = wronskian(&f1, &f2, 1e-25).unwrap();
            let (w_re, w_im) = w.to_f64_pair();
            for _ in 0..5 {
                let z = MpC::from_f64(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    128,
                );
                let numeric = f1
                    .fprime_at(&z)
                    .unwrap()
                    .mul(&f2.f_at(&z).unwrap())
                    .sub(&f1.f_at(&z).unwrap().mul(&f2.fprime_at(&z).unwrap()));
                let (n_re, n_im) = numeric.to_f64_pair();
                let scale = (w_re * w_re + w_im * w_im).sqrt().max(1.0);
                assert!(
                    ((n_re - w_re).powi(2) + (n_im - w_im).powi(2)).sqrt() / scale < 1e-10,
                    "numeric wronskian {n_re}+{n_im}i vs constant {w_re}+{w_im}i"
                );
            }
        }
    }

    #[test]
    fn pair_report_aggregates() {
        let (spec, f1, f2) = build_pair(1, 0, 1, &opts()).unwrap();
        let report = pair_report(&spec, &f1, &f2, 1e-25);
        assert!(report.is_solution);
        assert!(report.wronskian_constant.is_some());
        assert!(report.residual.is_structurally_zero());
    }
}
