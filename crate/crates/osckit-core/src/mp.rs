//! Multiprecision real and complex floating point built on [`astro_float`].
//!
//! Every value carries its own precision; binary operations compute at the
//! larger of the two operand precisions. Transcendental functions share a
//! global constants cache (π, ln 2) behind a spin lock.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use spin::Mutex;

/// Default working precision in bits. 113 bits matches IEEE binary128
/// significand width and comfortably resolves the 1e-25 residual tolerance.
pub const DEFAULT_PRECISION: usize = 113;

const RM: RoundingMode = RoundingMode::ToEven;

static CONSTS: Mutex<Option<Consts>> = Mutex::new(None);

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    let mut guard = CONSTS.lock();
    if guard.is_none() {
        *guard = Some(Consts::new().expect("constants cache allocation"));
    }
    f(guard.as_mut().expect("initialized above"))
}

/// Arbitrary-precision real number.
#[derive(Clone, Debug)]
pub struct MpFloat {
    value: BigFloat,
    prec: usize,
}

impl MpFloat {
    pub fn zero(prec: usize) -> Self {
        MpFloat { value: BigFloat::new(prec), prec }
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        MpFloat { value: BigFloat::from_f64(x, prec), prec }
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        MpFloat { value: BigFloat::from_i64(x, prec), prec }
    }

    /// Exact conversion of a big integer, then rounding to `prec` bits.
    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        if n.is_zero() {
            return Self::zero(prec);
        }
        let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
        let digits = n.magnitude().to_u64_digits();
        let bits = 64i64 * digits.len() as i64;
        let raw = BigFloat::from_words(&digits, sign, bits as astro_float::Exponent);
        // Round to the working precision.
        let value = raw.add(&BigFloat::new(prec), prec, RM);
        MpFloat { value, prec }
    }

    pub fn from_rational(q: &BigRational, prec: usize) -> Self {
        let num = Self::from_bigint(q.numer(), prec + 32);
        let den = Self::from_bigint(q.denom(), prec + 32);
        MpFloat { value: num.value.div(&den.value, prec, RM), prec }
    }

    /// Parses a decimal string (plain or scientific notation).
    pub fn parse(s: &str, prec: usize) -> Option<Self> {
        let value = with_consts(|cc| BigFloat::parse(s, Radix::Dec, prec, RM, cc));
        if value.is_nan() && s.trim().to_lowercase() != "nan" {
            return None;
        }
        Some(MpFloat { value, prec })
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.value.is_inf() && !self.value.is_nan()
    }

    fn join(&self, other: &Self) -> usize {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.join(other);
        MpFloat { value: self.value.add(&other.value, p, RM), prec: p }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.join(other);
        MpFloat { value: self.value.sub(&other.value, p, RM), prec: p }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.join(other);
        MpFloat { value: self.value.mul(&other.value, p, RM), prec: p }
    }

    pub fn div(&self, other: &Self) -> Self {
        let p = self.join(other);
        MpFloat { value: self.value.div(&other.value, p, RM), prec: p }
    }

    pub fn neg(&self) -> Self {
        MpFloat { value: self.value.neg(), prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        MpFloat { value: self.value.abs(), prec: self.prec }
    }

    pub fn sqrt(&self) -> Self {
        MpFloat { value: self.value.sqrt(self.prec, RM), prec: self.prec }
    }

    pub fn exp(&self) -> Self {
        let value = with_consts(|cc| self.value.exp(self.prec, RM, cc));
        MpFloat { value, prec: self.prec }
    }

    pub fn ln(&self) -> Self {
        let value = with_consts(|cc| self.value.ln(self.prec, RM, cc));
        MpFloat { value, prec: self.prec }
    }

    pub fn sin(&self) -> Self {
        let value = with_consts(|cc| self.value.sin(self.prec, RM, cc));
        MpFloat { value, prec: self.prec }
    }

    pub fn cos(&self) -> Self {
        let value = with_consts(|cc| self.value.cos(self.prec, RM, cc));
        MpFloat { value, prec: self.prec }
    }

    pub fn atan(&self) -> Self {
        let value = with_consts(|cc| self.value.atan(self.prec, RM, cc));
        MpFloat { value, prec: self.prec }
    }

    pub fn powi(&self, n: usize) -> Self {
        MpFloat { value: self.value.powi(n, self.prec, RM), prec: self.prec }
    }

    pub fn pi(prec: usize) -> Self {
        let value = with_consts(|cc| cc.pi(prec, RM));
        MpFloat { value, prec }
    }

    /// Four-quadrant arctangent of `self / x` with the usual conventions.
    pub fn atan2(&self, x: &Self) -> Self {
        let p = self.join(x);
        let pi = Self::pi(p);
        if x.is_zero() && self.is_zero() {
            return Self::zero(p);
        }
        if x.is_zero() {
            let half_pi = pi.div(&Self::from_i64(2, p));
            return if self.is_negative() { half_pi.neg() } else { half_pi };
        }
        let base = self.div(x).atan();
        match x.cmp(&Self::zero(p)) {
            Some(Ordering::Greater) => base,
            _ => {
                if self.is_negative() {
                    base.sub(&pi)
                } else {
                    base.add(&pi)
                }
            }
        }
    }

    pub fn cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|i| i.cmp(&0))
    }

    pub fn less_than(&self, other: &Self) -> bool {
        matches!(self.cmp(other), Some(Ordering::Less))
    }

    pub fn to_f64(&self) -> f64 {
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.value.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.value.is_zero() {
            return 0.0;
        }
        let (words, _, sign, exp, _) = self.value.as_raw_parts().expect("finite value");
        let len = words.len();
        let mut mantissa = (words[len - 1] as u128) << 64;
        if len >= 2 {
            mantissa |= words[len - 2] as u128;
        }
        let mag = libm::scalbn(mantissa as f64, exp as i32 - 128);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Decimal string that parses back to the identical value at the same
    /// precision. Normalized to be a valid JSON number literal (an empty
    /// fraction like "2.e+0" gains an explicit zero digit).
    pub fn to_decimal_string(&self) -> String {
        let raw = with_consts(|cc| self.value.format(Radix::Dec, RM, cc))
            .unwrap_or_else(|_| String::from("NaN"));
        if let Some(idx) = raw.find('.') {
            let after = raw.as_bytes().get(idx + 1).copied();
            if !matches!(after, Some(b'0'..=b'9')) {
                let mut fixed = String::with_capacity(raw.len() + 1);
                fixed.push_str(&raw[..=idx]);
                fixed.push('0');
                fixed.push_str(&raw[idx + 1..]);
                return fixed;
            }
        }
        raw
    }

    /// Nearest integer, provided the value is within `tol` of one.
    pub fn round_to_integer(&self, tol: f64) -> Option<i64> {
        let x = self.to_f64();
        if !x.is_finite() || x.abs() > 9.0e15 {
            return None;
        }
        let r = libm::round(x);
        let diff = self.sub(&Self::from_f64(r, self.prec)).abs();
        if diff.to_f64() <= tol {
            Some(r as i64)
        } else {
            None
        }
    }
}

impl fmt::Display for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

/// Arbitrary-precision complex number.
#[derive(Clone, Debug)]
pub struct MpC {
    pub re: MpFloat,
    pub im: MpFloat,
}

impl MpC {
    pub fn new(re: MpFloat, im: MpFloat) -> Self {
        MpC { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        MpC { re: MpFloat::zero(prec), im: MpFloat::zero(prec) }
    }

    pub fn one(prec: usize) -> Self {
        MpC { re: MpFloat::from_i64(1, prec), im: MpFloat::zero(prec) }
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        MpC { re: MpFloat::from_f64(re, prec), im: MpFloat::from_f64(im, prec) }
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational, prec: usize) -> Self {
        MpC { re: MpFloat::from_rational(re, prec), im: MpFloat::from_rational(im, prec) }
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn add(&self, other: &Self) -> Self {
        MpC { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        MpC { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        MpC { re, im }
    }

    pub fn div(&self, other: &Self) -> Self {
        let d = other.norm_sqr();
        let re = self.re.mul(&other.re).add(&self.im.mul(&other.im)).div(&d);
        let im = self.im.mul(&other.re).sub(&self.re.mul(&other.im)).div(&d);
        MpC { re, im }
    }

    pub fn neg(&self) -> Self {
        MpC { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn scale(&self, s: &MpFloat) -> Self {
        MpC { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn norm_sqr(&self) -> MpFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> MpFloat {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> MpFloat {
        self.im.atan2(&self.re)
    }

    pub fn exp(&self) -> Self {
        let p = self.precision();
        if self.im.is_zero() {
            return MpC { re: self.re.exp(), im: MpFloat::zero(p) };
        }
        let (cos, sin) = (self.im.cos(), self.im.sin());
        if self.re.is_zero() {
            return MpC { re: cos, im: sin };
        }
        let r = self.re.exp();
        MpC { re: r.mul(&cos), im: r.mul(&sin) }
    }

    /// 1-norm |re| + |im|: a cheap magnitude proxy for tolerance scaling.
    pub fn norm1(&self) -> MpFloat {
        self.re.abs().add(&self.im.abs())
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        MpC { re: self.abs().ln(), im: self.arg() }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.precision();
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs();
        let two = MpFloat::from_i64(2, p);
        if !self.re.is_negative() {
            let x = r.add(&self.re).div(&two).sqrt();
            let y = self.im.div(&x.mul(&two));
            MpC { re: x, im: y }
        } else {
            let mut y = r.sub(&self.re).div(&two).sqrt();
            if self.im.is_negative() {
                y = y.neg();
            }
            let x = self.im.div(&y.mul(&two));
            MpC { re: x, im: y }
        }
    }

    /// Principal power `self^w` via exp(w ln self).
    pub fn pow(&self, w: &Self) -> Self {
        w.mul(&self.ln()).exp()
    }

    pub fn powi(&self, mut n: u64) -> Self {
        let p = self.precision();
        let mut acc = Self::one(p);
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

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for MpC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

/// Evaluates a dense polynomial (ascending coefficients) by Horner's rule.
pub fn horner(coeffs: &[MpC], z: &MpC) -> MpC {
    let p = z.precision();
    let mut acc = MpC::zero(p);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

/// Evaluates a polynomial and its derivative simultaneously.
pub fn horner_with_derivative(coeffs: &[MpC], z: &MpC) -> (MpC, MpC) {
    let p = z.precision();
    let mut val = MpC::zero(p);
    let mut der = MpC::zero(p);
    for c in coeffs.iter().rev() {
        der = der.mul(z).add(&val);
        val = val.mul(z).add(c);
    }
    (val, der)
}

/// Collects polynomial coefficients scaled into `MpC` at the given precision.
pub fn rationals_to_mpc(coeffs: &[(BigRational, BigRational)], prec: usize) -> Vec<MpC> {
    coeffs.iter().map(|(re, im)| MpC::from_rationals(re, im, prec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_round_trip() {
        let a = MpFloat::from_f64(2.0, 128);
        let s = a.sqrt();
        let back = s.mul(&s).sub(&a);
        assert!(back.abs().to_f64() < 1e-36);
        assert!((s.to_f64() - core::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn decimal_string_round_trip() {
        let x = MpFloat::from_f64(2.0, 128).sqrt();
        let s = x.to_decimal_string();
        let y = MpFloat::parse(&s, 128).unwrap();
        assert!(x.sub(&y).abs().is_zero());
    }

    #[test]
    fn bigint_conversion_is_exact() {
        let n: BigInt = BigInt::from(3).pow(100);
        let x = MpFloat::from_bigint(&n, 512);
        let expected = MpFloat::from_f64(3.0, 512).powi(100);
        assert!(x.sub(&expected).abs().div(&expected).to_f64() < 1e-130);
    }

    #[test]
    fn complex_exp_of_i_pi() {
        let p = 128;
        let z = MpC::new(MpFloat::zero(p), MpFloat::pi(p));
        let e = z.exp();
        assert!(e.re.add(&MpFloat::from_i64(1, p)).abs().to_f64() < 1e-35);
        assert!(e.im.abs().to_f64() < 1e-35);
    }

    #[test]
    fn complex_sqrt_branches() {
        let p = 128;
        for (re, im) in [(3.0, 4.0), (-3.0, 4.0), (-3.0, -4.0), (1.0, 0.0), (-1.0, 0.0)] {
            let z = MpC::from_f64(re, im, p);
            let s = z.sqrt();
            let back = s.mul(&s).sub(&z);
            assert!(back.abs().to_f64() < 1e-30, "sqrt failed for {re}+{im}i");
            // principal branch: Re >= 0
            assert!(s.re.to_f64() >= -1e-30);
        }
    }

    #[test]
    fn atan2_quadrants() {
        let p = 96;
        let cases = [
            (1.0, 1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (1.0, 0.0),
            (-1.0, 0.0),
        ];
        for (y, x) in cases {
            let got = MpFloat::from_f64(y, p).atan2(&MpFloat::from_f64(x, p)).to_f64();
            let want = y.atan2(x);
            assert!((got - want).abs() < 1e-14, "atan2({y},{x}): {got} vs {want}");
        }
    }

    #[test]
    fn ln_of_negative_real_has_pi_imaginary() {
        let p = 128;
        let z = MpC::from_f64(-1.0, 0.0, p);
        let l = z.ln();
        assert!(l.re.abs().to_f64() < 1e-30);
        assert!((l.im.to_f64() - core::f64::consts::PI).abs() < 1e-30);
    }

    #[test]
    fn to_f64_handles_scales() {
        for x in [1.5e300, -2.25e-300, 1.0, -1.0, 0.0, 12345.6789] {
            let m = MpFloat::from_f64(x, 128);
            assert_eq!(m.to_f64(), x);
        }
    }
}
