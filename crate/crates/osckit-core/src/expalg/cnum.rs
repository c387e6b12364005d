//! Complex scalars with an exact rational backend and a multiprecision
//! float backend.
//!
//! Exact values are pairs of reduced `BigRational`s. Mixed-backend binary
//! operations promote the exact side to float at the float side's precision.
//! Identity tests on the float backend always go through a modulus
//! tolerance, never bit equality.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::mp::{MpC, MpFloat, DEFAULT_PRECISION};

/// Modulus below which a float-backend value counts as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-25;

/// Complex number, exact or floating.
#[derive(Clone, Debug)]
pub enum CNum {
    Exact { re: BigRational, im: BigRational },
    Float(MpC),
}

impl CNum {
    pub fn zero() -> Self {
        CNum::Exact { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        CNum::Exact { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        CNum::Exact { re: BigRational::from(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_rational(re: BigRational) -> Self {
        CNum::Exact { re, im: BigRational::zero() }
    }

    pub fn from_rationals(re: BigRational, im: BigRational) -> Self {
        CNum::Exact { re, im }
    }

    /// Rational p/q as a convenience for tests and builders.
    pub fn ratio(p: i64, q: i64) -> Self {
        CNum::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_mpc(z: MpC) -> Self {
        CNum::Float(z)
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        CNum::Float(MpC::from_f64(re, im, prec))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CNum::Exact { .. })
    }

    /// Exact payload if this is an exact value.
    pub fn as_exact(&self) -> Option<(&BigRational, &BigRational)> {
        match self {
            CNum::Exact { re, im } => Some((re, im)),
            CNum::Float(_) => None,
        }
    }

    pub fn to_mpc(&self, prec: usize) -> MpC {
        match self {
            CNum::Exact { re, im } => MpC::from_rationals(re, im, prec),
            CNum::Float(z) => z.clone(),
        }
    }

    fn float_prec(&self) -> Option<usize> {
        match self {
            CNum::Exact { .. } => None,
            CNum::Float(z) => Some(z.precision()),
        }
    }

    fn promote_pair(a: &CNum, b: &CNum) -> Option<(MpC, MpC)> {
        let p = match (a.float_prec(), b.float_prec()) {
            (None, None) => return None,
            (pa, pb) => pa.unwrap_or(DEFAULT_PRECISION).max(pb.unwrap_or(DEFAULT_PRECISION)),
        };
        Some((a.to_mpc(p), b.to_mpc(p)))
    }

    pub fn add(&self, other: &Self) -> Self {
        match Self::promote_pair(self, other) {
            None => match (self, other) {
                (CNum::Exact { re: a, im: b }, CNum::Exact { re: c, im: d }) => {
                    CNum::Exact { re: a + c, im: b + d }
                }
                _ => unreachable!(),
            },
            Some((x, y)) => CNum::Float(x.add(&y)),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match Self::promote_pair(self, other) {
            None => match (self, other) {
                (CNum::Exact { re: a, im: b }, CNum::Exact { re: c, im: d }) => CNum::Exact {
                    re: a * c - b * d,
                    im: a * d + b * c,
                },
                _ => unreachable!(),
            },
            Some((x, y)) => CNum::Float(x.mul(&y)),
        }
    }

    /// Division; exact inputs with a zero divisor return `None`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        match Self::promote_pair(self, other) {
            None => match (self, other) {
                (CNum::Exact { re: a, im: b }, CNum::Exact { re: c, im: d }) => {
                    let n = c * c + d * d;
                    if n.is_zero() {
                        return None;
                    }
                    Some(CNum::Exact {
                        re: (a * c + b * d) / &n,
                        im: (b * c - a * d) / &n,
                    })
                }
                _ => unreachable!(),
            },
            Some((x, y)) => {
                if y.is_zero() {
                    return None;
                }
                Some(CNum::Float(x.div(&y)))
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            CNum::Exact { re, im } => CNum::Exact { re: -re, im: -im },
            CNum::Float(z) => CNum::Float(z.neg()),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            CNum::Exact { re, im } => CNum::Exact { re: re.clone(), im: -im },
            CNum::Float(z) => CNum::Float(MpC::new(z.re.clone(), z.im.neg())),
        }
    }

    pub fn scale_i64(&self, n: i64) -> Self {
        self.mul(&CNum::from_i64(n))
    }

    pub fn scale_ratio(&self, p: i64, q: i64) -> Self {
        self.mul(&CNum::ratio(p, q))
    }

    /// Zero test: structural for exact values, modulus below `tol` for floats.
    pub fn is_zero_tol(&self, tol: f64) -> bool {
        match self {
            CNum::Exact { re, im } => re.is_zero() && im.is_zero(),
            CNum::Float(z) => z.abs().to_f64() < tol,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero_tol(FLOAT_ZERO_TOL)
    }

    pub fn modulus_f64(&self) -> f64 {
        match self {
            CNum::Exact { re, im } => {
                let re = rational_to_f64(re);
                let im = rational_to_f64(im);
                libm::sqrt(re * re + im * im)
            }
            CNum::Float(z) => z.abs().to_f64(),
        }
    }

    pub fn modulus_mp(&self, prec: usize) -> MpFloat {
        self.to_mpc(prec).abs()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        match self {
            CNum::Exact { re, im } => (rational_to_f64(re), rational_to_f64(im)),
            CNum::Float(z) => z.to_f64_pair(),
        }
    }

    /// Exact structural equality for exact pairs; float comparisons go
    /// through the difference modulus.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (CNum::Exact { re: a, im: b }, CNum::Exact { re: c, im: d }) => a == c && b == d,
            _ => self.sub(other).is_zero_tol(tol),
        }
    }

    pub fn eq_exact(&self, other: &Self) -> bool {
        match (self, other) {
            (CNum::Exact { re: a, im: b }, CNum::Exact { re: c, im: d }) => a == c && b == d,
            _ => false,
        }
    }

    /// Real-integer test: exact values must be integral reals; float values
    /// must be within `tol` of a real integer.
    pub fn as_integer(&self, tol: f64) -> Option<i64> {
        match self {
            CNum::Exact { re, im } => {
                if !im.is_zero() || !re.is_integer() {
                    return None;
                }
                i64::try_from(re.to_integer()).ok()
            }
            CNum::Float(z) => {
                if z.im.abs().to_f64() > tol {
                    return None;
                }
                z.re.round_to_integer(tol)
            }
        }
    }

    /// Principal square root. Exact inputs stay exact when the root is a
    /// rational complex number; otherwise the result moves to the float
    /// backend at `prec` bits.
    pub fn sqrt(&self, prec: usize) -> Self {
        if let CNum::Exact { re, im } = self {
            if let Some(root) = exact_complex_sqrt(re, im) {
                return CNum::Exact { re: root.0, im: root.1 };
            }
        }
        CNum::Float(self.to_mpc(prec).sqrt())
    }

    /// Both square roots, principal first.
    pub fn sqrt_both(&self, prec: usize) -> Vec<Self> {
        let r = self.sqrt(prec);
        if r.is_zero() {
            return alloc::vec![r];
        }
        let n = r.neg();
        alloc::vec![r, n]
    }

    pub fn exp(&self, prec: usize) -> MpC {
        self.to_mpc(prec).exp()
    }

    pub fn pow_u(&self, mut n: u64) -> Self {
        let mut acc = CNum::one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl fmt::Display for CNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CNum::Exact { re, im } => {
                if im.is_zero() {
                    write!(f, "{}", re)
                } else if re.is_zero() {
                    write!(f, "{}i", im)
                } else if im.is_negative() {
                    write!(f, "{}{}i", re, im)
                } else {
                    write!(f, "{}+{}i", re, im)
                }
            }
            CNum::Float(z) => {
                let (re, im) = z.to_f64_pair();
                if im == 0.0 {
                    write!(f, "{}", re)
                } else {
                    write!(f, "{}{}{}i", re, if im < 0.0 { "" } else { "+" }, im)
                }
            }
        }
    }
}

/// Lossy rational-to-f64 via string round trip on small values, ratio of
/// doubles otherwise.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    let num = bigint_to_f64(q.numer());
    let den = bigint_to_f64(q.denom());
    if num.is_finite() && den.is_finite() && den != 0.0 {
        return num / den;
    }
    // Fall back to multiprecision for extreme magnitudes.
    MpFloat::from_rational(q, 64).to_f64()
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    let (sign, digits) = n.to_u64_digits();
    let mut acc = 0.0f64;
    for d in digits.iter().rev() {
        acc = acc * 1.8446744073709552e19 + *d as f64;
    }
    if sign == Sign::Minus {
        -acc
    } else {
        acc
    }
}

/// Rational square root when numerator and denominator are perfect squares.
pub fn exact_rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Exact principal square root of a rational complex number, when it exists
/// in the rational complex field.
fn exact_complex_sqrt(re: &BigRational, im: &BigRational) -> Option<(BigRational, BigRational)> {
    if im.is_zero() {
        if !re.is_negative() {
            let r = exact_rational_sqrt(re)?;
            return Some((r, BigRational::zero()));
        }
        let r = exact_rational_sqrt(&-re)?;
        return Some((BigRational::zero(), r));
    }
    // |z| must be rational, then x^2 = (|z| + re)/2 must be a perfect square.
    let norm = re * re + im * im;
    let r = exact_rational_sqrt(&norm)?;
    let two = BigRational::from(BigInt::from(2));
    let x2 = (&r + re) / &two;
    let x = exact_rational_sqrt(&x2)?;
    if x.is_zero() {
        return None;
    }
    let y = im / (&x * &two);
    // principal branch: Re > 0, or Re == 0 with Im >= 0
    Some((x, y))
}

/// Parses "p/q", a decimal literal, or an integer into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let int_val: BigInt = if int_digits.is_empty() { BigInt::zero() } else { int_digits.parse().ok()? };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let frac_val: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut v = BigRational::from(int_val) + BigRational::new(frac_val, scale);
        if neg {
            v = -v;
        }
        return Some(v);
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from(n))
}

/// Formats a rational as `p/q` (or `p` when the denominator is one).
pub fn rational_string(q: &BigRational) -> alloc::string::String {
    q.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn exact_field_ops() {
        let a = CNum::from_rationals(rat(1, 2), rat(-3, 4));
        let b = CNum::from_rationals(rat(2, 3), rat(5, 7));
        let prod = a.mul(&b);
        let back = prod.div(&b).unwrap();
        assert!(back.eq_exact(&a));
        let s = a.add(&b).sub(&b);
        assert!(s.eq_exact(&a));
    }

    #[test]
    fn mixed_ops_promote_to_float() {
        let a = CNum::from_i64(2);
        let b = CNum::from_f64(0.5, 0.0, 128);
        let c = a.mul(&b);
        assert!(!c.is_exact());
        assert!(c.sub(&CNum::one()).is_zero());
    }

    #[test]
    fn exact_sqrt_perfect_squares() {
        assert!(CNum::ratio(9, 4).sqrt(113).eq_exact(&CNum::ratio(3, 2)));
        assert!(CNum::from_i64(-4).sqrt(113).eq_exact(&CNum::from_rationals(rat(0, 1), rat(2, 1))));
        // 3+4i = (2+i)^2
        let z = CNum::from_rationals(rat(3, 1), rat(4, 1));
        let r = z.sqrt(113);
        assert!(r.eq_exact(&CNum::from_rationals(rat(2, 1), rat(1, 1))));
    }

    #[test]
    fn inexact_sqrt_moves_to_float() {
        let r = CNum::from_i64(6).sqrt(113);
        assert!(!r.is_exact());
        let err = r.mul(&r).sub(&CNum::from_i64(6));
        assert!(err.is_zero_tol(1e-30));
    }

    #[test]
    fn integer_detection() {
        assert_eq!(CNum::from_i64(-7).as_integer(1e-20), Some(-7));
        assert_eq!(CNum::ratio(1, 2).as_integer(1e-20), None);
        let nearly = CNum::from_f64(3.0 + 1e-30, 1e-30, 128);
        assert_eq!(nearly.as_integer(1e-25), Some(3));
        let off = CNum::from_f64(3.0001, 0.0, 128);
        assert_eq!(off.as_integer(1e-8), None);
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rational("-6"), Some(rat(-6, 1)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn zero_tolerance_semantics() {
        let tiny = CNum::from_f64(1e-30, 0.0, 113);
        assert!(tiny.is_zero());
        let not_tiny = CNum::from_f64(1e-20, 0.0, 113);
        assert!(!not_tiny.is_zero());
        assert!(CNum::zero().is_zero());
    }
}
