//! Exponential polynomials Σ aⱼ e^{jz/den}, the carrier of every symbolic
//! computation in the crate.
//!
//! An `ExpPoly` is equivalently a Laurent polynomial in ζ = e^{z/den}. The
//! exponent denominator is restricted to 1 or 2: integer and half-integer
//! exponent lattices cover every solution form this toolkit constructs.
//! Canonical form stores no structurally-zero coefficient and reduces
//! den = 2 to den = 1 whenever every exponent is even.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use super::cnum::{CNum, FLOAT_ZERO_TOL};
use crate::mp::MpC;

/// Re(j·z/den) beyond this magnitude signals exp overflow for `evaluate`.
const EXP_ARG_LIMIT: f64 = 1.0e8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    /// The real part of some j·z/den exceeds the safe exponent range.
    ExpOutOfRange,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::ExpOutOfRange => write!(f, "exponential argument out of representable range"),
        }
    }
}

impl core::error::Error for EvalError {}

/// Binary ring operation selector for [`ExpPoly::combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

/// Finite sum Σⱼ aⱼ e^{jz/den} with exact or floating coefficients.
#[derive(Clone, Debug)]
pub struct ExpPoly {
    den: u8,
    terms: BTreeMap<i64, CNum>,
}

impl ExpPoly {
    /// Empty (zero) polynomial on the given exponent lattice.
    ///
    /// Panics if `den` is not 1 or 2; finer lattices are rejected at
    /// construction.
    pub fn new(den: u8) -> Self {
        assert!(den == 1 || den == 2, "exponent denominator must be 1 or 2");
        ExpPoly { den, terms: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Self::new(1)
    }

    pub fn constant(c: CNum) -> Self {
        let mut p = Self::new(1);
        p.set_term(0, c);
        p
    }

    pub fn one() -> Self {
        Self::constant(CNum::one())
    }

    /// Single term c·e^{jz/den}.
    pub fn monomial(den: u8, j: i64, c: CNum) -> Self {
        let mut p = Self::new(den);
        p.set_term(j, c);
        p
    }

    pub fn from_terms(den: u8, terms: impl IntoIterator<Item = (i64, CNum)>) -> Self {
        let mut p = Self::new(den);
        for (j, c) in terms {
            let cur = p.coeff(j).add(&c);
            p.set_term(j, cur);
        }
        p.canonicalize();
        p
    }

    pub fn den(&self) -> u8 {
        self.den
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &CNum)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, j: i64) -> CNum {
        self.terms.get(&j).cloned().unwrap_or_else(CNum::zero)
    }

    fn set_term(&mut self, j: i64, c: CNum) {
        if is_structural_zero(&c) {
            self.terms.remove(&j);
        } else {
            self.terms.insert(j, c);
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Backend-aware zero test: empty map, or every float coefficient's
    /// modulus below `tol`.
    pub fn is_zero_tol(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_zero_tol(tol))
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero_tol(FLOAT_ZERO_TOL)
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.terms.values().map(|c| c.modulus_f64()).fold(0.0, f64::max)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&j| j == 0)
    }

    /// Re-canonicalizes: drops structural zeros and reduces the lattice.
    /// Idempotent by construction.
    pub fn canonicalize(&mut self) {
        self.terms.retain(|_, c| !is_structural_zero(c));
        if self.den == 2 && self.terms.keys().all(|j| j % 2 == 0) {
            let reduced: BTreeMap<i64, CNum> =
                core::mem::take(&mut self.terms).into_iter().map(|(j, c)| (j / 2, c)).collect();
            self.terms = reduced;
            self.den = 1;
        }
    }

    /// Lifts both operands onto a common exponent lattice.
    fn unify(a: &ExpPoly, b: &ExpPoly) -> (ExpPoly, ExpPoly) {
        if a.den == b.den {
            return (a.clone(), b.clone());
        }
        let lift = |p: &ExpPoly| -> ExpPoly {
            let mut q = ExpPoly::new(2);
            for (&j, c) in &p.terms {
                q.terms.insert(2 * j, c.clone());
            }
            q
        };
        if a.den == 1 {
            (lift(a), b.clone())
        } else {
            (a.clone(), lift(b))
        }
    }

    /// Ring operation dispatcher; results are canonical.
    pub fn combine(a: &ExpPoly, b: &ExpPoly, op: RingOp) -> ExpPoly {
        let (x, y) = Self::unify(a, b);
        let mut out = ExpPoly::new(x.den);
        match op {
            RingOp::Add | RingOp::Sub => {
                out.terms = x.terms.clone();
                for (&j, c) in &y.terms {
                    let cur = out.coeff(j);
                    let next = if op == RingOp::Add { cur.add(c) } else { cur.sub(c) };
                    out.set_term(j, next);
                }
            }
            RingOp::Mul => {
                for (&j1, c1) in &x.terms {
                    for (&j2, c2) in &y.terms {
                        let cur = out.coeff(j1 + j2);
                        out.set_term(j1 + j2, cur.add(&c1.mul(c2)));
                    }
                }
            }
        }
        out.canonicalize();
        out
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        Self::combine(self, other, RingOp::Add)
    }

    pub fn sub(&self, other: &ExpPoly) -> ExpPoly {
        Self::combine(self, other, RingOp::Sub)
    }

    pub fn mul(&self, other: &ExpPoly) -> ExpPoly {
        Self::combine(self, other, RingOp::Mul)
    }

    pub fn neg(&self) -> ExpPoly {
        let mut out = ExpPoly::new(self.den);
        for (&j, c) in &self.terms {
            out.terms.insert(j, c.neg());
        }
        out
    }

    pub fn scale(&self, s: &CNum) -> ExpPoly {
        let mut out = ExpPoly::new(self.den);
        for (&j, c) in &self.terms {
            out.set_term(j, c.mul(s));
        }
        out.canonicalize();
        out
    }

    /// Multiplies by e^{kz/den} (a lattice shift).
    pub fn shift(&self, k: i64) -> ExpPoly {
        let mut out = ExpPoly::new(self.den);
        for (&j, c) in &self.terms {
            out.terms.insert(j + k, c.clone());
        }
        out
    }

    /// d/dz: each coefficient aⱼ maps to (j/den)·aⱼ; the constant term
    /// vanishes.
    pub fn differentiate(&self) -> ExpPoly {
        let mut out = ExpPoly::new(self.den);
        for (&j, c) in &self.terms {
            if j != 0 {
                out.set_term(j, c.scale_ratio(j, self.den as i64));
            }
        }
        out.canonicalize();
        out
    }

    /// Splits an antiderivative: the exponential part Σ_{j≠0} (den/j)aⱼ e^{jz/den}
    /// and the coefficient of z contributed by the constant term.
    pub fn antiderivative_split(&self) -> (ExpPoly, CNum) {
        let mut exp_part = ExpPoly::new(self.den);
        for (&j, c) in &self.terms {
            if j != 0 {
                exp_part.set_term(j, c.scale_ratio(self.den as i64, j));
            }
        }
        exp_part.canonicalize();
        (exp_part, self.coeff(0))
    }

    /// Σ aⱼ exp(j·z/den) at the precision of `z`. The lattice generator
    /// ζ = e^{z/den} is exponentiated once; terms are assembled from its
    /// integer powers.
    pub fn evaluate(&self, z: &MpC) -> Result<MpC, EvalError> {
        let p = z.precision();
        let Some(lo) = self.min_exp() else {
            return Ok(MpC::zero(p));
        };
        let hi = self.max_exp().expect("nonempty");
        let (zre, _) = z.to_f64_pair();
        let worst = (zre * (lo as f64).abs().max(hi as f64) / self.den as f64).abs();
        if worst > EXP_ARG_LIMIT {
            return Err(EvalError::ExpOutOfRange);
        }
        let den_inv = crate::mp::MpFloat::from_i64(1, p)
            .div(&crate::mp::MpFloat::from_i64(self.den as i64, p));
        let zeta = z.scale(&den_inv).exp();
        // Horner over the dense exponent range lo..=hi, then shift by ζ^lo.
        let mut acc = MpC::zero(p);
        for j in (lo..=hi).rev() {
            acc = acc.mul(&zeta);
            if let Some(c) = self.terms.get(&j) {
                acc = acc.add(&c.to_mpc(p));
            }
        }
        if lo != 0 {
            let mag = lo.unsigned_abs();
            let shift = zeta.powi(mag);
            if lo > 0 {
                acc = acc.mul(&shift);
            } else {
                acc = acc.div(&shift);
            }
        }
        Ok(acc)
    }

    /// Fast double-precision evaluation.
    pub fn evaluate_f64(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&j, c) in &self.terms {
            let scale = j as f64 / self.den as f64;
            if (z.re * scale).abs() > 600.0 {
                return Err(EvalError::ExpOutOfRange);
            }
            let (re, im) = c.to_f64_pair();
            acc += Complex64::new(re, im) * (z * scale).exp();
        }
        Ok(acc)
    }

    /// True when every coefficient is exact.
    pub fn is_exact(&self) -> bool {
        self.terms.values().all(|c| c.is_exact())
    }

    /// Structural equality on exact polynomials.
    pub fn eq_exact(&self, other: &ExpPoly) -> bool {
        self.den == other.den
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(other.terms.iter())
                .all(|((j1, c1), (j2, c2))| j1 == j2 && c1.eq_exact(c2))
    }

    pub fn approx_eq(&self, other: &ExpPoly, tol: f64) -> bool {
        self.sub(other).is_zero_tol(tol)
    }

    /// Dense ζ-coefficient vector between `min_exp` and `max_exp`.
    pub fn zeta_coefficients(&self) -> (i64, Vec<CNum>) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut coeffs = Vec::with_capacity((hi - lo + 1) as usize);
        for j in lo..=hi {
            coeffs.push(self.coeff(j));
        }
        (lo, coeffs)
    }
}

fn is_structural_zero(c: &CNum) -> bool {
    match c {
        CNum::Exact { .. } => c.is_zero_tol(0.0),
        // Floats are dropped only when they are literal zero; small residual
        // coefficients stay visible for diagnostics.
        CNum::Float(z) => z.is_zero(),
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&j, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "({})", c)?;
            } else if self.den == 1 {
                write!(f, "({})e^{{{}z}}", c, j)?;
            } else {
                write!(f, "({})e^{{{}z/2}}", c, j)?;
            }
        }
        Ok(())
    }
}

/// Renders an ExpPoly for diagnostics.
pub fn display_exppoly(p: &ExpPoly) -> String {
    alloc::format!("{}", p)
}
