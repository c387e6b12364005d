//! Construction of zero-scarce solution forms f = κe^h and the parameter
//! constraints they force.
//!
//! Solutions of f″ = (e^{lz} + b₂e^{sz} + b₃)f with finitely many zeros are
//! κ·e^h with κ a polynomial in e^z and g = h′ an exponential polynomial
//! whose constant term c satisfies c² = b₃. The builders in this module
//! run the coefficient recursions each case forces, emit the closure
//! polynomials on the free parameters, and residual-verify every candidate
//! before returning it.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::expalg::{CNum, EvalError, ExpPoly, RootError};
use crate::mp::{MpC, DEFAULT_PRECISION};
use crate::polyq::{BiPoly, RatPoly};

mod cj;
mod l2;
mod l4;
mod probe;

pub use cj::{cj_sequence, cj_values, multinomial_c};
pub use l2::{build_l2, build_pair};
pub use l4::{build_l4_s1, build_l4_s3};
pub use probe::{general_probe, l2_closure_relation, ProbeBranch};

#[derive(Clone, Debug)]
pub enum BuildError {
    /// Parameters violate l > s ≥ 1, gcd(l, s) = 1 or b₂ ≠ 0.
    InvalidEquation(String),
    /// Pair construction needs two distinct nonnegative integers.
    DistinctDegreesRequired,
    /// The (l, s) = (4, 1) family starts at k = 1.
    DegreeAtLeastOne,
    /// Odd l admits no solution with finitely many zeros.
    OddExponent,
    /// α must lie strictly between 0 and 1.
    AlphaOutOfRange,
    /// Numeric root extraction failed.
    Roots(RootError),
    /// Numeric evaluation failed.
    Eval(EvalError),
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::InvalidEquation(msg) => write!(f, "invalid equation parameters: {msg}"),
            BuildError::DistinctDegreesRequired => {
                write!(f, "pair construction requires two distinct nonnegative integers")
            }
            BuildError::DegreeAtLeastOne => write!(f, "this family requires k >= 1"),
            BuildError::OddExponent => {
                write!(f, "no zero-scarce solutions exist: l must be even")
            }
            BuildError::AlphaOutOfRange => write!(f, "alpha must satisfy 0 < alpha < 1"),
            BuildError::Roots(e) => write!(f, "root extraction failed: {e}"),
            BuildError::Eval(e) => write!(f, "evaluation failed: {e}"),
        }
    }
}

impl core::error::Error for BuildError {}

impl From<RootError> for BuildError {
    fn from(e: RootError) -> Self {
        BuildError::Roots(e)
    }
}

impl From<EvalError> for BuildError {
    fn from(e: EvalError) -> Self {
        BuildError::Eval(e)
    }
}

/// Numeric tunables shared by all builders.
#[derive(Clone, Debug)]
pub struct BuildOpts {
    /// Float-backend working precision in bits.
    pub precision: usize,
    /// Residual tolerance for the float backend.
    pub residual_tol: f64,
}

impl Default for BuildOpts {
    fn default() -> Self {
        BuildOpts { precision: DEFAULT_PRECISION, residual_tol: crate::expalg::FLOAT_ZERO_TOL }
    }
}

impl BuildOpts {
    pub fn root_opts(&self) -> crate::expalg::RootOpts {
        crate::expalg::RootOpts {
            precision: 2 * self.precision,
            residual_tol: 1e-20,
            cluster_rel: 1e-8,
        }
    }
}

/// Parameters (l, s, b₂, b₃) of the equation f″ = (e^{lz} + b₂e^{sz} + b₃)f.
#[derive(Clone, Debug)]
pub struct EqSpec {
    pub l: u32,
    pub s: u32,
    pub b2: CNum,
    pub b3: CNum,
}

impl EqSpec {
    pub fn new(l: u32, s: u32, b2: CNum, b3: CNum) -> Result<Self, BuildError> {
        if s < 1 || l <= s {
            return Err(BuildError::InvalidEquation(format!("need l > s >= 1, got l={l}, s={s}")));
        }
        if num_integer::gcd(l, s) != 1 {
            return Err(BuildError::InvalidEquation(format!("l={l} and s={s} are not coprime")));
        }
        if b2.is_zero() {
            return Err(BuildError::InvalidEquation(String::from("b2 must be nonzero")));
        }
        Ok(EqSpec { l, s, b2, b3 })
    }

    /// Skips parameter validation. Intended for degenerate diagnostics such
    /// as constant-coefficient ray checks.
    pub fn new_unchecked(l: u32, s: u32, b2: CNum, b3: CNum) -> Self {
        EqSpec { l, s, b2, b3 }
    }

    /// The coefficient A(z) = e^{lz} + b₂e^{sz} + b₃ as an ExpPoly.
    pub fn coefficient_poly(&self) -> ExpPoly {
        ExpPoly::from_terms(
            1,
            [
                (self.l as i64, CNum::one()),
                (self.s as i64, self.b2.clone()),
                (0, self.b3.clone()),
            ],
        )
    }

    /// m + 1 = l/2 for even l.
    pub fn m_plus_one(&self) -> Option<u32> {
        if self.l % 2 == 0 {
            Some(self.l / 2)
        } else {
            None
        }
    }

    pub fn t(&self) -> u32 {
        self.l - self.s
    }

    /// Smallest q ≥ 0 with s/l ≤ [2(q+1)−1]/[2(q+1)], i.e. q = ⌈(m+1)/t⌉ − 1.
    pub fn q(&self) -> Option<u32> {
        let m1 = self.m_plus_one()?;
        let t = self.t();
        Some((m1 + t - 1) / t - 1)
    }
}

/// Derived q and t for a raw (l, s) pair with even l.
pub fn derived_qt(l: u32, s: u32) -> Option<(u32, u32)> {
    if l % 2 != 0 || s >= l {
        return None;
    }
    let m1 = l / 2;
    let t = l - s;
    Some(((m1 + t - 1) / t - 1, t))
}

/// A candidate zero-scarce solution f = κe^h encoded by (κ, g = h′).
#[derive(Clone, Debug)]
pub struct SolutionForm {
    pub l: u32,
    pub s: u32,
    pub b2: CNum,
    pub b3: CNum,
    /// Polynomial in e^z, exponents 0..=k, nonzero ends.
    pub kappa: ExpPoly,
    /// g = h′ including the constant term c at exponent 0.
    pub g: ExpPoly,
    pub k: usize,
    pub c0: CNum,
    pub c: CNum,
    /// Human-readable branch label, stable across runs.
    pub branch: String,
    pub verified: bool,
}

impl SolutionForm {
    pub fn eq_spec(&self) -> EqSpec {
        EqSpec::new_unchecked(self.l, self.s, self.b2.clone(), self.b3.clone())
    }

    /// h(z) split into its exponential part and the linear coefficient c.
    pub fn h_parts(&self) -> (ExpPoly, CNum) {
        self.g.antiderivative_split()
    }

    /// Evaluates f(z) = κ(z)·e^{h(z)}.
    pub fn f_at(&self, z: &MpC) -> Result<MpC, EvalError> {
        let p = z.precision();
        let (hexp, c) = self.h_parts();
        let h = hexp.evaluate(z)?.add(&c.to_mpc(p).mul(z));
        if h.re.to_f64().abs() > 1.0e8 {
            return Err(EvalError::ExpOutOfRange);
        }
        Ok(self.kappa.evaluate(z)?.mul(&h.exp()))
    }

    /// Evaluates f′(z) = (κ′ + κg)(z)·e^{h(z)}.
    pub fn fprime_at(&self, z: &MpC) -> Result<MpC, EvalError> {
        let p = z.precision();
        let (hexp, c) = self.h_parts();
        let h = hexp.evaluate(z)?.add(&c.to_mpc(p).mul(z));
        if h.re.to_f64().abs() > 1.0e8 {
            return Err(EvalError::ExpOutOfRange);
        }
        let pre = self.kappa.differentiate().add(&self.kappa.mul(&self.g));
        Ok(pre.evaluate(z)?.mul(&h.exp()))
    }

    /// Logarithmic derivative f′/f = κ′/κ + g at z, in double precision.
    pub fn log_derivative_f64(
        &self,
        z: num_complex::Complex64,
    ) -> Result<num_complex::Complex64, EvalError> {
        let kv = self.kappa.evaluate_f64(z)?;
        let kp = self.kappa.differentiate().evaluate_f64(z)?;
        let gv = self.g.evaluate_f64(z)?;
        Ok(kp / kv + gv)
    }

    /// Structural invariants: c₀² = 1, κ ends nonzero, g matches the
    /// (m+1−jt) exponent ladder with leading coefficient c₀.
    pub fn check_invariants(&self, tol: f64) -> Result<(), String> {
        if !self.c0.mul(&self.c0).sub(&CNum::one()).is_zero_tol(tol) {
            return Err(format!("c0^2 != 1 (c0 = {})", self.c0));
        }
        if self.kappa.coeff(0).is_zero_tol(tol) {
            return Err(String::from("kappa constant term vanishes"));
        }
        if self.kappa.coeff(self.k as i64).is_zero_tol(tol) {
            return Err(String::from("kappa leading term vanishes"));
        }
        if self.kappa.min_exp().map_or(true, |j| j < 0)
            || self.kappa.max_exp().map_or(true, |j| j > self.k as i64)
        {
            return Err(String::from("kappa exponents outside 0..=k"));
        }
        let Some((q, t)) = derived_qt(self.l, self.s) else {
            return Err(String::from("l must be even"));
        };
        let m1 = (self.l / 2) as i64;
        let expected: Vec<i64> =
            (0..=q as i64).map(|j| m1 - j * t as i64).filter(|&e| e > 0).collect();
        for (&j, coeff) in self.g.terms() {
            if j != 0 && !expected.contains(&j) && !coeff.is_zero_tol(tol) {
                return Err(format!("unexpected exponent {j} in g"));
            }
        }
        if !self.g.coeff(m1).sub(&self.c0).is_zero_tol(tol) {
            return Err(String::from("leading coefficient of g is not c0"));
        }
        Ok(())
    }
}

/// One root of a closure polynomial, with its admissibility status.
#[derive(Clone, Debug)]
pub struct ClosureRoot {
    pub value: CNum,
    /// Excluded roots carry a diagnostic instead of a solution.
    pub diagnostic: Option<String>,
}

/// Symbolic unknown a closure system constrains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unknown {
    B2,
    /// t = 2c.
    T,
    C1,
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unknown::B2 => write!(f, "b2"),
            Unknown::T => write!(f, "t"),
            Unknown::C1 => write!(f, "c1"),
        }
    }
}

/// The polynomial constraints a builder derives for its free parameters.
#[derive(Clone, Debug)]
pub enum ClosureSystem {
    /// Finitely many candidate roots of univariate polynomial equations.
    Univariate {
        unknown: Unknown,
        /// Primitive integer-normalized polynomials, ascending degree.
        equations: Vec<RatPoly>,
        roots: Vec<ClosureRoot>,
    },
    /// A one-parameter family: a single linear relation between b₂ and
    /// t = 2c (the l = 2 case).
    Parametric {
        /// Polynomial in (X = t, Y = b₂) that vanishes on the family.
        relation: BiPoly,
        note: String,
    },
}

impl ClosureSystem {
    /// Equations normalized for set comparison (primitive, ascending degree,
    /// sorted).
    pub fn normalized_equations(&self) -> Vec<RatPoly> {
        match self {
            ClosureSystem::Univariate { equations, .. } => {
                let mut eqs: Vec<RatPoly> = equations.iter().map(|p| p.primitive()).collect();
                eqs.sort_by_key(|p| (p.degree().unwrap_or(0), format!("{p}")));
                eqs
            }
            ClosureSystem::Parametric { .. } => Vec::new(),
        }
    }
}

/// Admissibility test for the second-exponent ratio: the smallest m with
/// α ≤ [2(m+1)−1]/[2(m+1)], and whether equality holds.
pub fn alpha_admissible(alpha: &BigRational) -> Result<(u32, bool), BuildError> {
    if !alpha.is_positive() || alpha >= &BigRational::one() {
        return Err(BuildError::AlphaOutOfRange);
    }
    // α ≤ 1 − 1/(2(m+1))  ⇔  m+1 ≥ 1/(2(1−α))
    let two = BigRational::from(BigInt::from(2));
    let bound = BigRational::one() / (&two * (BigRational::one() - alpha));
    let m1 = bound.ceil().to_integer().max(BigInt::one());
    let m1_rat = BigRational::from(m1.clone());
    let admissible = alpha == &((&two * &m1_rat - BigRational::one()) / (&two * &m1_rat));
    let m = u32::try_from(m1 - BigInt::one())
        .map_err(|_| BuildError::AlphaOutOfRange)?;
    Ok((m, admissible))
}

/// Exponent condition for subnormal solutions of
/// w″ + P(e^z)w′ + Q(e^z)w = 0: the constant c satisfies c² + cP(0) + Q(0) = 0.
pub fn subnormal_exponent_check(p0: &CNum, q0: &CNum, c: &CNum) -> bool {
    c.mul(c).add(&c.mul(p0)).add(q0).is_zero()
}

/// Shared downward recursion: with aₖ = 1 and sign σ ∈ {+1, −1}, fills
/// a_{i−1} = i(2c + i)·a_i / (2σc₀(k + 1 − i)) for i = k..1.
///
/// Returns ascending coefficients a₀..aₖ, or `None` if a₀ vanishes.
pub(crate) fn downward_kappa(
    k: usize,
    c: &CNum,
    c0: &CNum,
    sigma: i64,
    tol: f64,
) -> Option<Vec<CNum>> {
    let mut coeffs = vec![CNum::zero(); k + 1];
    coeffs[k] = CNum::one();
    let two_c = c.scale_i64(2);
    for i in (1..=k).rev() {
        let ii = i as i64;
        let numer = two_c.add(&CNum::from_i64(ii)).scale_i64(ii);
        let denom = c0.scale_i64(2 * sigma * (k as i64 + 1 - ii));
        let next = coeffs[i].mul(&numer).div(&denom).expect("denominator is a nonzero unit");
        coeffs[i - 1] = next;
    }
    if coeffs[0].is_zero_tol(tol) {
        None
    } else {
        Some(coeffs)
    }
}

/// Builds κ = Σ aᵢ e^{iz} from ascending coefficients.
pub(crate) fn kappa_from_coeffs(coeffs: &[CNum]) -> ExpPoly {
    ExpPoly::from_terms(1, coeffs.iter().cloned().enumerate().map(|(i, c)| (i as i64, c)))
}
