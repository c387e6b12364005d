//! Truncated power series with exact-or-float complex coefficients.
//!
//! A series stores coefficients c₀..c_N; arithmetic is exact through the
//! common truncation order. `exp` requires a vanishing constant term, `ln`
//! a unit constant term.

use alloc::vec;
use alloc::vec::Vec;

use crate::expalg::CNum;
use crate::mp::MpC;

#[derive(Clone, Debug)]
pub struct PowerSeries {
    coeffs: Vec<CNum>,
}

impl PowerSeries {
    /// Zero series of the given truncation order.
    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![CNum::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = CNum::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<CNum>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least its constant term");
        PowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> CNum {
        self.coeffs.get(i).cloned().unwrap_or_else(CNum::zero)
    }

    pub fn coeffs(&self) -> &[CNum] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, c: CNum) {
        assert!(i < self.coeffs.len());
        self.coeffs[i] = c;
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, CNum::zero());
        PowerSeries { coeffs }
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        PowerSeries {
            coeffs: (0..=n).map(|i| self.coeff(i).add(&other.coeff(i))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        PowerSeries {
            coeffs: (0..=n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, s: &CNum) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        let mut out = vec![CNum::zero(); n + 1];
        for i in 0..=n {
            for j in 0..=(n - i) {
                let term = self.coeff(i).mul(&other.coeff(j));
                out[i + j] = out[i + j].add(&term);
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplies by x^k, keeping the truncation order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![CNum::zero(); n + 1];
        for i in k..=n {
            out[i] = self.coeff(i - k);
        }
        PowerSeries { coeffs: out }
    }

    pub fn differentiate(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        PowerSeries {
            coeffs: (1..self.coeffs.len())
                .map(|i| self.coeff(i).scale_i64(i as i64))
                .collect(),
        }
    }

    /// exp of a series with zero constant term:
    /// E₀ = 1, Eₙ = (1/n)·Σ_{j=1}^n j·uⱼ·E_{n−j}.
    pub fn exp(&self) -> Self {
        assert!(
            self.coeff(0).is_zero_tol(0.0) || self.coeff(0).is_zero(),
            "exp needs a positive-order leading term"
        );
        let n = self.order();
        let mut out = vec![CNum::zero(); n + 1];
        out[0] = CNum::one();
        for i in 1..=n {
            let mut acc = CNum::zero();
            for j in 1..=i {
                acc = acc.add(&self.coeff(j).scale_i64(j as i64).mul(&out[i - j]));
            }
            out[i] = acc.scale_ratio(1, i as i64);
        }
        PowerSeries { coeffs: out }
    }

    /// log of a series with constant term 1:
    /// Lₙ = uₙ − (1/n)·Σ_{j=1}^{n−1} j·Lⱼ·u_{n−j}.
    pub fn ln(&self) -> Self {
        assert!(
            self.coeff(0).sub(&CNum::one()).is_zero(),
            "ln needs constant term 1"
        );
        let n = self.order();
        let mut out = vec![CNum::zero(); n + 1];
        for i in 1..=n {
            let mut acc = CNum::zero();
            for j in 1..i {
                acc = acc.add(&out[j].scale_i64(j as i64).mul(&self.coeff(i - j)));
            }
            out[i] = self.coeff(i).sub(&acc.scale_ratio(1, i as i64));
        }
        PowerSeries { coeffs: out }
    }

    /// Index of the first coefficient that is not zero at tolerance `tol`.
    pub fn vanishing_order(&self, tol: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero_tol(tol))
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.modulus_f64()).fold(0.0, f64::max)
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, x: &MpC) -> MpC {
        let p = x.precision();
        let mut acc = MpC::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&c.to_mpc(p));
        }
        acc
    }

    /// Last-term truncation-error heuristic at |x| = r:
    /// max over the trailing coefficients of |cᵢ|rⁱ, amplified by the
    /// geometric factor 1/(1−r) when r < 1.
    pub fn tail_estimate(&self, r: f64) -> f64 {
        let n = self.order();
        let lo = n.saturating_sub(2);
        let mut worst = 0.0f64;
        for i in lo..=n {
            let mag = self.coeff(i).modulus_f64() * libm::pow(r, i as f64);
            worst = worst.max(mag);
        }
        if r < 1.0 {
            worst / (1.0 - r)
        } else {
            f64::INFINITY
        }
    }
}
