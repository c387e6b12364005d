//! Dense univariate and bivariate polynomials over the exact rationals.
//!
//! These back the closure-polynomial elimination: recursion coefficients are
//! threaded through as `RatPoly` values in a symbolic unknown, and the probe
//! uses `BiPoly` (polynomials in the pair (X, Y)) plus Sylvester resultants
//! when two unknowns survive the triangular elimination.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::expalg::cnum::CNum;
use crate::mp::MpC;

/// Dense polynomial over ℚ with ascending coefficients and no trailing zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = RatPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(BigRational::from(BigInt::from(c)))
    }

    /// The variable itself.
    pub fn x() -> Self {
        RatPoly { coeffs: vec![BigRational::zero(), BigRational::one()] }
    }

    /// x + a for integer a.
    pub fn x_plus(a: i64) -> Self {
        RatPoly { coeffs: vec![BigRational::from(BigInt::from(a)), BigRational::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = RatPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect())
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplies by x^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs: out }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_cnum(&self, x: &CNum) -> CNum {
        let mut iter = self.coeffs.iter().rev();
        let Some(first) = iter.next() else {
            return CNum::zero();
        };
        let mut acc = CNum::from_rational(first.clone());
        for c in iter {
            acc = acc.mul(x).add(&CNum::from_rational(c.clone()));
        }
        acc
    }

    pub fn to_cnum_coeffs(&self) -> Vec<CNum> {
        self.coeffs.iter().map(|c| CNum::from_rational(c.clone())).collect()
    }

    pub fn to_mpc_coeffs(&self, prec: usize) -> Vec<MpC> {
        self.coeffs
            .iter()
            .map(|c| MpC::from_rationals(c, &BigRational::zero(), prec))
            .collect()
    }

    /// Euclidean division: returns (quotient, remainder).
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().expect("nonzero");
        let lead = divisor.leading().expect("nonzero").clone();
        let mut rem = self.clone();
        let mut quo = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd || rem.is_zero() {
                break;
            }
            let factor = rem.coeff(rd) / &lead;
            let k = rd - dd;
            quo[k] = factor.clone();
            let scaled = divisor.scale(&factor).shift_up(k);
            rem = rem.sub(&scaled);
        }
        (Self::from_coeffs(quo), rem)
    }

    /// Exact division; `None` when the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.divrem(divisor);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic normalization.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = BigRational::one() / l;
                self.scale(&inv)
            }
        }
    }

    /// Integer-primitive normalization with positive leading coefficient:
    /// clears denominators, divides by the integer content, fixes the sign.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * BigRational::from(lcm.clone())).to_integer()).collect();
        let mut gcd = BigInt::zero();
        for v in &ints {
            gcd = num_integer::gcd(gcd, v.clone());
        }
        let sign_fix = if ints.last().expect("nonzero").is_negative() { -BigInt::one() } else { BigInt::one() };
        let div = gcd * sign_fix;
        Self::from_coeffs(ints.iter().map(|v| BigRational::from(v / &div)).collect())
    }

    /// Polynomial gcd (monic), by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extracts all rational roots with multiplicities; returns the roots
    /// and the deflated polynomial. Root candidates come from the rational
    /// root theorem on the primitive form; factorization of oversized
    /// endpoints is skipped (the numeric stage covers those roots).
    pub fn rational_roots(&self) -> (Vec<(BigRational, usize)>, Self) {
        let mut found: Vec<(BigRational, usize)> = Vec::new();
        let mut rest = self.clone();
        if rest.is_zero() {
            return (found, rest);
        }
        // roots at zero
        let mut zero_mult = 0usize;
        while rest.coeff(0).is_zero() && rest.degree().map_or(false, |d| d >= 1) {
            rest = rest.exact_div(&RatPoly::x()).expect("x divides");
            zero_mult += 1;
        }
        if zero_mult > 0 {
            found.push((BigRational::zero(), zero_mult));
        }
        let prim = rest.primitive();
        let (Some(a0), Some(an)) = (prim.coeffs.first(), prim.leading()) else {
            return (found, rest);
        };
        let p_divs = small_divisors(&a0.numer().abs());
        let q_divs = small_divisors(&an.numer().abs());
        let (Some(p_divs), Some(q_divs)) = (p_divs, q_divs) else {
            return (found, rest);
        };
        let mut candidates: Vec<BigRational> = Vec::new();
        for p in &p_divs {
            for q in &q_divs {
                let c = BigRational::new(p.clone(), q.clone());
                if !candidates.contains(&c) {
                    candidates.push(c.clone());
                    candidates.push(-c);
                }
            }
        }
        for cand in candidates {
            let mut mult = 0usize;
            loop {
                if rest.degree().map_or(true, |d| d == 0) {
                    break;
                }
                if !rest.eval(&cand).is_zero() {
                    break;
                }
                let linear = RatPoly::from_coeffs(vec![-cand.clone(), BigRational::one()]);
                rest = rest.exact_div(&linear).expect("verified root divides");
                mult += 1;
            }
            if mult > 0 {
                found.push((cand, mult));
            }
        }
        (found, rest)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", c)?;
            } else if i == 1 {
                write!(f, "({})x", c)?;
            } else {
                write!(f, "({})x^{}", c, i)?;
            }
        }
        Ok(())
    }
}

/// Divisors of |n|, or `None` when n is too large to factor cheaply.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    if n.is_zero() {
        return Some(vec![BigInt::one()]);
    }
    let n_u: u128 = u128::try_from(n.magnitude().clone()).ok()?;
    if n_u > 1_000_000_000_000u128 {
        return None;
    }
    let mut divs: Vec<u128> = Vec::new();
    let mut d = 1u128;
    while d * d <= n_u {
        if n_u % d == 0 {
            divs.push(d);
            divs.push(n_u / d);
        }
        d += 1;
        if divs.len() > 4096 {
            return None;
        }
    }
    divs.sort_unstable();
    divs.dedup();
    Some(divs.into_iter().map(BigInt::from).collect())
}

/// Polynomial in two variables (X, Y), stored as Y-coefficients that are
/// polynomials in X.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    /// ys[i] is the coefficient of Y^i.
    ys: Vec<RatPoly>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { ys: Vec::new() }
    }

    pub fn from_x(p: RatPoly) -> Self {
        let mut b = BiPoly { ys: vec![p] };
        b.trim();
        b
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_x(RatPoly::constant(c))
    }

    pub fn from_i64(c: i64) -> Self {
        Self::from_x(RatPoly::from_i64(c))
    }

    pub fn x() -> Self {
        Self::from_x(RatPoly::x())
    }

    pub fn y() -> Self {
        BiPoly { ys: vec![RatPoly::zero(), RatPoly::one()] }
    }

    pub fn from_y_coeffs(ys: Vec<RatPoly>) -> Self {
        let mut b = BiPoly { ys };
        b.trim();
        b
    }

    fn trim(&mut self) {
        while matches!(self.ys.last(), Some(p) if p.is_zero()) {
            self.ys.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.ys.len().checked_sub(1)
    }

    pub fn y_coeff(&self, i: usize) -> RatPoly {
        self.ys.get(i).cloned().unwrap_or_else(RatPoly::zero)
    }

    pub fn y_coeffs(&self) -> &[RatPoly] {
        &self.ys
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.ys.len().max(other.ys.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.y_coeff(i).add(&other.y_coeff(i)));
        }
        Self::from_y_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BiPoly { ys: self.ys.iter().map(|p| p.neg()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![RatPoly::zero(); self.ys.len() + other.ys.len() - 1];
        for (i, a) in self.ys.iter().enumerate() {
            for (j, b) in other.ys.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_y_coeffs(out)
    }

    pub fn mul_x_poly(&self, p: &RatPoly) -> Self {
        BiPoly::from_y_coeffs(self.ys.iter().map(|q| q.mul(p)).collect())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        BiPoly::from_y_coeffs(self.ys.iter().map(|q| q.scale(s)).collect())
    }

    /// Substitutes a rational value for X, leaving a polynomial in Y.
    pub fn eval_x(&self, x: &BigRational) -> RatPoly {
        RatPoly::from_coeffs(self.ys.iter().map(|p| p.eval(x)).collect())
    }

    /// Substitutes a rational value for Y, leaving a polynomial in X.
    pub fn eval_y(&self, y: &BigRational) -> RatPoly {
        let mut acc = RatPoly::zero();
        for p in self.ys.iter().rev() {
            acc = acc.mul(&RatPoly::constant(y.clone())).add(p);
        }
        acc
    }

    /// Numeric evaluation at a complex point (x, y).
    pub fn eval_cnum(&self, x: &CNum, y: &CNum) -> CNum {
        let mut iter = self.ys.iter().rev();
        let Some(first) = iter.next() else {
            return CNum::zero();
        };
        let mut acc = first.eval_cnum(x);
        for p in iter {
            acc = acc.mul(y).add(&p.eval_cnum(x));
        }
        acc
    }

    /// The univariate Y-polynomial, if no X appears.
    pub fn as_univariate_y(&self) -> Option<RatPoly> {
        let mut coeffs = Vec::with_capacity(self.ys.len());
        for p in &self.ys {
            if let Some(d) = p.degree() {
                if d > 0 {
                    return None;
                }
            }
            coeffs.push(p.coeff(0));
        }
        Some(RatPoly::from_coeffs(coeffs))
    }

    /// The univariate X-polynomial, if no Y appears.
    pub fn as_univariate_x(&self) -> Option<RatPoly> {
        match self.deg_y() {
            None => Some(RatPoly::zero()),
            Some(0) => Some(self.ys[0].clone()),
            Some(_) => None,
        }
    }

    pub fn max_x_degree(&self) -> usize {
        self.ys.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, p) in self.ys.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
            write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "[{}]", p)?;
            } else if i == 1 {
                write!(f, "[{}]y", p)?;
            } else {
                write!(f, "[{}]y^{}", p, i)?;
            }
        }
        Ok(())
    }
}

/// Reduced rational function num/den over ℚ, with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: RatPoly,
    den: RatPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: RatPoly::zero(), den: RatPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: RatPoly::one(), den: RatPoly::one() }
    }

    pub fn from_poly(p: RatPoly) -> Self {
        RatFunc { num: p, den: RatPoly::one() }
    }

    pub fn new(num: RatPoly, den: RatPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let mut f = RatFunc { num, den };
        f.reduce();
        f
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = RatPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree().map_or(false, |d| d > 0) {
            self.num = self.num.exact_div(&g).expect("gcd divides");
            self.den = self.den.exact_div(&g).expect("gcd divides");
        }
        // monic denominator
        let lead = self.den.leading().expect("nonzero").clone();
        if !lead.is_one() {
            let inv = BigRational::one() / lead;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn num(&self) -> &RatPoly {
        &self.num
    }

    pub fn den(&self) -> &RatPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn mul_poly(&self, p: &RatPoly) -> Self {
        Self::new(self.num.mul(p), self.den.clone())
    }

    pub fn div_poly(&self, p: &RatPoly) -> Self {
        Self::new(self.num.clone(), self.den.mul(p))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.num.scale(s), self.den.clone())
    }

    /// Numeric evaluation; `None` at a pole.
    pub fn eval_cnum(&self, x: &CNum) -> Option<CNum> {
        let d = self.den.eval_cnum(x);
        if d.is_zero() {
            return None;
        }
        self.num.eval_cnum(x).div(&d)
    }
}

/// Exact determinant of a square rational matrix by Gaussian elimination.
pub fn rational_determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Lagrange interpolation through exact points (xᵢ, yᵢ) with distinct xᵢ.
pub fn lagrange_interpolate(points: &[(BigRational, BigRational)]) -> RatPoly {
    let mut acc = RatPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = RatPoly::one();
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&RatPoly::from_coeffs(vec![-xj.clone(), BigRational::one()]));
            denom *= xi - xj;
        }
        acc = acc.add(&basis.scale(&(yi / denom)));
    }
    acc
}

/// Sylvester resultant Res_Y(a, b) of two bivariate polynomials, as an exact
/// polynomial in X, computed by evaluation and interpolation.
pub fn resultant_y(a: &BiPoly, b: &BiPoly) -> RatPoly {
    let (Some(da), Some(db)) = (a.deg_y(), b.deg_y()) else {
        return RatPoly::zero();
    };
    if da == 0 && db == 0 {
        return RatPoly::one();
    }
    // Degree bound for the resultant in X.
    let bound = da * b.max_x_degree() + db * a.max_x_degree();
    let lead_a = a.y_coeff(da);
    let lead_b = b.y_coeff(db);
    let mut points: Vec<(BigRational, BigRational)> = Vec::with_capacity(bound + 1);
    let mut t: i64 = 0;
    while points.len() < bound + 1 {
        let x = BigRational::from(BigInt::from(t));
        t += 1;
        // Leading coefficients must not vanish at the sample or the
        // evaluated Sylvester matrix would describe lower-degree inputs.
        if lead_a.eval(&x).is_zero() || lead_b.eval(&x).is_zero() {
            continue;
        }
        let pa = a.eval_x(&x);
        let pb = b.eval_x(&x);
        let det = sylvester_determinant(&pa, &pb, da, db);
        points.push((x, det));
    }
    lagrange_interpolate(&points)
}

fn sylvester_determinant(a: &RatPoly, b: &RatPoly, da: usize, db: usize) -> BigRational {
    let n = da + db;
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for row in 0..db {
        for k in 0..=da {
            m[row][row + k] = a.coeff(da - k);
        }
    }
    for row in 0..da {
        for k in 0..=db {
            m[db + row][row + k] = b.coeff(db - k);
        }
    }
    rational_determinant(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn division_and_gcd() {
        // (x+2)(x+5) and (x+2)(x-1)
        let a = RatPoly::x_plus(2).mul(&RatPoly::x_plus(5));
        let b = RatPoly::x_plus(2).mul(&RatPoly::x_plus(-1));
        let g = a.gcd(&b);
        assert_eq!(g, RatPoly::x_plus(2));
        assert_eq!(a.exact_div(&RatPoly::x_plus(5)), Some(RatPoly::x_plus(2)));
        assert_eq!(a.exact_div(&RatPoly::x_plus(3)), None);
    }

    #[test]
    fn primitive_normalization() {
        // 2 − x²/3 → x² − 6
        let p = RatPoly::from_coeffs(vec![rat(2, 1), rat(0, 1), rat(-1, 3)]);
        let prim = p.primitive();
        assert_eq!(prim, RatPoly::from_i64_coeffs(&[-6, 0, 1]));
    }

    #[test]
    fn rational_root_extraction() {
        // x(x+2)(x+5)(x² − 2)
        let p = RatPoly::x()
            .mul(&RatPoly::x_plus(2))
            .mul(&RatPoly::x_plus(5))
            .mul(&RatPoly::from_i64_coeffs(&[-2, 0, 1]));
        let (roots, rest) = p.rational_roots();
        let mut vals: Vec<BigRational> = roots.iter().map(|(r, _)| r.clone()).collect();
        vals.sort();
        assert_eq!(vals, vec![rat(-5, 1), rat(-2, 1), rat(0, 1)]);
        assert_eq!(rest.primitive(), RatPoly::from_i64_coeffs(&[-2, 0, 1]));
    }

    #[test]
    fn halfinteger_rational_roots() {
        // (2x+1)(x−3) = 2x² − 5x − 3
        let p = RatPoly::from_i64_coeffs(&[-3, -5, 2]);
        let (roots, rest) = p.rational_roots();
        assert!(rest.degree().is_none() || rest.degree() == Some(0));
        let mut vals: Vec<BigRational> = roots.iter().map(|(r, _)| r.clone()).collect();
        vals.sort();
        assert_eq!(vals, vec![rat(-1, 2), rat(3, 1)]);
    }

    #[test]
    fn determinant_and_interpolation() {
        let m = vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(3, 1), rat(4, 1)],
        ];
        assert_eq!(rational_determinant(m), rat(-2, 1));
        let pts = vec![(rat(0, 1), rat(1, 1)), (rat(1, 1), rat(4, 1)), (rat(2, 1), rat(9, 1))];
        let p = lagrange_interpolate(&pts);
        assert_eq!(p, RatPoly::from_i64_coeffs(&[1, 2, 1]));
    }

    #[test]
    fn resultant_known_cases() {
        // Res_Y(Y² − X, Y − X) = X² − X
        let a = BiPoly::from_y_coeffs(vec![RatPoly::x().neg(), RatPoly::zero(), RatPoly::one()]);
        let b = BiPoly::from_y_coeffs(vec![RatPoly::x().neg(), RatPoly::one()]);
        let r = resultant_y(&a, &b);
        assert_eq!(r, RatPoly::from_i64_coeffs(&[0, -1, 1]));

        // Res_Y(Y² + 1, Y² + X) has root X = 1 (shared root at Y = ±i)
        let c = BiPoly::from_y_coeffs(vec![RatPoly::one(), RatPoly::zero(), RatPoly::one()]);
        let d = BiPoly::from_y_coeffs(vec![RatPoly::x(), RatPoly::zero(), RatPoly::one()]);
        let r2 = resultant_y(&c, &d);
        assert!(r2.eval(&rat(1, 1)).is_zero());
        assert!(!r2.eval(&rat(2, 1)).is_zero());
    }

    #[test]
    fn ratfunc_reduction_and_arithmetic() {
        // (x² − 1)/(x − 1) reduces to x + 1
        let f = RatFunc::new(RatPoly::from_i64_coeffs(&[-1, 0, 1]), RatPoly::x_plus(-1));
        assert_eq!(f.num(), &RatPoly::x_plus(1));
        assert_eq!(f.den(), &RatPoly::one());
        // 1/(x+1) + 1/(x-1) = 2x/(x²−1)
        let a = RatFunc::new(RatPoly::one(), RatPoly::x_plus(1));
        let b = RatFunc::new(RatPoly::one(), RatPoly::x_plus(-1));
        let s = a.add(&b);
        assert_eq!(s.num(), &RatPoly::from_i64_coeffs(&[0, 2]));
        assert_eq!(s.den(), &RatPoly::from_i64_coeffs(&[-1, 0, 1]));
        assert!(s.eval_cnum(&CNum::from_i64(1)).is_none());
        let v = s.eval_cnum(&CNum::from_i64(2)).unwrap();
        assert!(v.eq_exact(&CNum::ratio(4, 3)));
    }

    #[test]
    fn bipoly_arithmetic() {
        // (X + Y)² = X² + 2XY + Y²
        let s = BiPoly::x().add(&BiPoly::y());
        let sq = s.mul(&s);
        assert_eq!(sq.y_coeff(0), RatPoly::from_i64_coeffs(&[0, 0, 1]));
        assert_eq!(sq.y_coeff(1), RatPoly::from_i64_coeffs(&[0, 2]));
        assert_eq!(sq.y_coeff(2), RatPoly::one());
        assert_eq!(sq.eval_y(&rat(1, 1)), RatPoly::from_i64_coeffs(&[1, 2, 1]));
    }
}
