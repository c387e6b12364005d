//! Residual-driven closure probe for arbitrary even l.
//!
//! Instead of transcribed per-family recursions, the probe builds the full
//! κ-cleared residual of f = κe^h symbolically: g carries the exponent
//! ladder (m+1−jt) with unknowns X = t = 2c and Y (b₂ when q = 0, c₁ when
//! q ≥ 1), every cⱼ for j ≥ 2 is fixed by the multinomial ladder, and the
//! residual's ζ-coefficients give one polynomial row per power of e^z.
//! Rows 1..k determine a₁..aₖ by triangular elimination; the rows above k
//! are the closure system. Candidate roots are only ever emitted after the
//! residual verifier accepts the assembled solution.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::cj::{cj_sequence, cj_values};
use super::{
    kappa_from_coeffs, BuildError, BuildOpts, ClosureRoot, ClosureSystem, EqSpec, SolutionForm,
    Unknown,
};
use crate::expalg::{cnum_poly_roots, CNum, ExpPoly};
use crate::mp::MpC;
use crate::polyq::{resultant_y, BiPoly, RatFunc, RatPoly};
use crate::verify::residual_raw;

/// One (k, c₀) branch of the probe.
#[derive(Clone, Debug)]
pub struct ProbeBranch {
    pub k: usize,
    pub c0_sign: i64,
    pub system: ClosureSystem,
    /// Residual-verified roots only.
    pub solutions: Vec<SolutionForm>,
}

/// The linear relation c₀(t + 2k + 1) − b₂ that closes the l = 2 family at
/// degree k, as a polynomial in (X = t, Y = b₂).
pub fn l2_closure_relation(k: usize, c0_sign: i64) -> BiPoly {
    let lin = RatPoly::x_plus(2 * k as i64 + 1)
        .scale(&BigRational::from(BigInt::from(c0_sign)));
    BiPoly::from_x(lin).sub(&BiPoly::y())
}

/// Exponential polynomial with bivariate coefficients on the integer
/// lattice.
#[derive(Clone, Debug)]
struct SymExp {
    terms: BTreeMap<i64, BiPoly>,
}

impl SymExp {
    fn new() -> Self {
        SymExp { terms: BTreeMap::new() }
    }

    fn set(&mut self, j: i64, b: BiPoly) {
        if b.is_zero() {
            self.terms.remove(&j);
        } else {
            self.terms.insert(j, b);
        }
    }

    fn coeff(&self, j: i64) -> BiPoly {
        self.terms.get(&j).cloned().unwrap_or_else(BiPoly::zero)
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&j, b) in &other.terms {
            let cur = out.coeff(j).add(b);
            out.set(j, cur);
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&j, b) in &other.terms {
            let cur = out.coeff(j).sub(b);
            out.set(j, cur);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = SymExp::new();
        for (&j1, b1) in &self.terms {
            for (&j2, b2) in &other.terms {
                let cur = out.coeff(j1 + j2).add(&b1.mul(b2));
                out.set(j1 + j2, cur);
            }
        }
        out
    }

    fn differentiate(&self) -> Self {
        let mut out = SymExp::new();
        for (&j, b) in &self.terms {
            if j != 0 {
                out.set(j, b.scale(&BigRational::from(BigInt::from(j))));
            }
        }
        out
    }
}

struct BranchContext {
    l: u32,
    s: u32,
    k: usize,
    c0_sign: i64,
    m1: i64,
    t_step: i64,
    q: u32,
    rs: Vec<BigRational>,
    s_poly: SymExp,
    g_sym: SymExp,
}

impl BranchContext {
    fn new(l: u32, s: u32, k: usize, c0_sign: i64, rs: &[BigRational]) -> Self {
        let m1 = (l / 2) as i64;
        let t_step = (l - s) as i64;
        let q = rs.len() as u32 - 1;
        let c0 = CNum::from_i64(c0_sign);
        let c1_sym = CNum::one();
        // symbolic g: coefficient of ζ^{m1−jt} is the cⱼ ladder with c₁ → Y
        let mut g = SymExp::new();
        let ladder = cj_values(&c0, &c1_sym, rs);
        for (j, cj) in ladder.iter().enumerate() {
            let e = m1 - j as i64 * t_step;
            debug_assert!(e >= 1);
            // cⱼ = rⱼ·c₀^{1−j}·Y^j: the CNum value at c₁ = 1 carries the
            // rational-and-sign part, the power of Y is j.
            let (re, im) = cj.as_exact().expect("ladder is exact");
            debug_assert!(im.is_zero());
            let mut ys = vec![RatPoly::zero(); j + 1];
            ys[j] = RatPoly::constant(re.clone());
            g.set(e, BiPoly::from_y_coeffs(ys));
        }
        let half_x = RatPoly::x().scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
        g.set(0, BiPoly::from_x(half_x));

        // A = ζ^l + b₂ζ^s + b₃ with b₂ = 2c₀Y (q ≥ 1) or Y (q = 0), b₃ = X²/4
        let b2 = if q >= 1 {
            BiPoly::y().scale(&BigRational::from(BigInt::from(2 * c0_sign)))
        } else {
            BiPoly::y()
        };
        let quarter_xx = RatPoly::from_coeffs(vec![
            BigRational::zero(),
            BigRational::zero(),
            BigRational::new(BigInt::one(), BigInt::from(4)),
        ]);
        let mut a = SymExp::new();
        a.set(l as i64, BiPoly::from_i64(1));
        a.set(s as i64, b2);
        a.set(0, BiPoly::from_x(quarter_xx));

        let s_poly = g.mul(&g).add(&g.differentiate()).sub(&a);
        debug_assert!(s_poly.coeff(0).is_zero(), "constant term of residual core must cancel");
        debug_assert!(s_poly.coeff(l as i64).is_zero(), "top exponent must cancel");
        if q >= 1 && l > 2 {
            debug_assert!(s_poly.coeff(s as i64).is_zero(), "b2 matching must cancel");
        }
        BranchContext { l, s, k, c0_sign, m1, t_step, q, rs: rs.to_vec(), s_poly, g_sym: g }
    }

    /// Coefficient multiplying aᵢ in the residual row for ζ^w.
    fn row(&self, w: i64, i: i64) -> BiPoly {
        let mut r = self.s_poly.coeff(w - i);
        let gc = self.g_sym.coeff(w - i);
        if !gc.is_zero() && i != 0 {
            r = r.add(&gc.scale(&BigRational::from(BigInt::from(2 * i))));
        }
        if w == i {
            r = r.add(&BiPoly::constant(BigRational::from(BigInt::from(i * i))));
        }
        r
    }

    /// Assembles and residual-verifies a candidate at (t*, y*); returns a
    /// diagnostic string on rejection.
    fn assemble(
        &self,
        t_star: &CNum,
        y_star: &CNum,
        label: &str,
        opts: &BuildOpts,
    ) -> Result<SolutionForm, String> {
        if y_star.is_zero_tol(opts.residual_tol) {
            return Err(String::from("b2 = 0 is outside the equation family"));
        }
        let c = t_star.scale_ratio(1, 2);
        let mut a: Vec<CNum> = vec![CNum::one()];
        for w in 1..=self.k as i64 {
            let mut acc = CNum::zero();
            for i in 0..w {
                let r = self.row(w, i);
                if !r.is_zero() {
                    acc = acc.add(&r.eval_cnum(t_star, y_star).mul(&a[i as usize]));
                }
            }
            let denom = t_star.add(&CNum::from_i64(w)).scale_i64(w);
            if denom.is_zero_tol(1e-12) {
                return Err(format!("degenerate: recursion denominator vanishes at w = {w}"));
            }
            a.push(acc.neg().div(&denom).expect("checked nonzero"));
        }
        if a[self.k].is_zero_tol(opts.residual_tol) {
            return Err(String::from("leading coefficient a_k vanishes"));
        }
        let c0 = CNum::from_i64(self.c0_sign);
        let (b2, c1) = if self.q == 0 {
            (y_star.clone(), None)
        } else {
            (c0.scale_i64(2).mul(y_star), Some(y_star.clone()))
        };
        let ladder = cj_values(&c0, c1.as_ref().unwrap_or(&CNum::one()), &self.rs);
        let mut g_terms: Vec<(i64, CNum)> =
            ladder.iter().enumerate().map(|(j, cj)| (self.m1 - j as i64 * self.t_step, cj.clone())).collect();
        g_terms.push((0, c.clone()));
        let g = ExpPoly::from_terms(1, g_terms);
        let b3 = c.mul(&c);
        let spec = EqSpec::new(self.l, self.s, b2.clone(), b3.clone())
            .map_err(|e| format!("{e}"))?;
        let kappa = kappa_from_coeffs(&a);
        let r = residual_raw(&spec.coefficient_poly(), &kappa, &g);
        if !r.is_zero_tol(opts.residual_tol) {
            return Err(format!(
                "residual verification failed (max coefficient {:.3e})",
                r.max_coeff_modulus()
            ));
        }
        Ok(SolutionForm {
            l: self.l,
            s: self.s,
            b2,
            b3,
            kappa,
            g,
            k: self.k,
            c0,
            c,
            branch: format!("probe k={}, c0={:+}, {}", self.k, self.c0_sign, label),
            verified: true,
        })
    }
}

/// Candidate roots of one univariate polynomial: exact rationals plus
/// numerically polished remainder.
fn poly_roots(p: &RatPoly, opts: &BuildOpts) -> Result<Vec<CNum>, BuildError> {
    let (rational, rest) = p.rational_roots();
    let mut out: Vec<CNum> = Vec::new();
    for (r, mult) in rational {
        for _ in 0..mult {
            out.push(CNum::from_rational(r.clone()));
        }
    }
    if rest.degree().map_or(false, |d| d >= 1) {
        for (z, mult) in cnum_poly_roots(&rest.to_cnum_coeffs(), &opts.root_opts())? {
            for _ in 0..mult {
                out.push(CNum::from_mpc(z.clone()));
            }
        }
    }
    out.sort_by(|a, b| {
        a.to_f64_pair().partial_cmp(&b.to_f64_pair()).unwrap_or(core::cmp::Ordering::Equal)
    });
    Ok(out)
}

fn gcd_chain(polys: &[RatPoly]) -> RatPoly {
    let mut acc: Option<RatPoly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.clone(),
            Some(g) => g.gcd(p),
        });
    }
    acc.unwrap_or_else(RatPoly::zero)
}

/// Probes every (k ≤ k_max, c₀ = ±1) branch of the even-l family, deriving
/// the closure system from the raw residual and residual-verifying every
/// numerically found root.
pub fn general_probe(
    l: u32,
    s: u32,
    k_max: usize,
    opts: &BuildOpts,
) -> Result<Vec<ProbeBranch>, BuildError> {
    if l % 2 != 0 {
        return Err(BuildError::OddExponent);
    }
    if s < 1 || s >= l || num_integer::gcd(l, s) != 1 {
        return Err(BuildError::InvalidEquation(format!(
            "need coprime l > s >= 1, got l={l}, s={s}"
        )));
    }
    let (q, _) = super::derived_qt(l, s).expect("validated even l");
    let rs = cj_sequence(2, q as usize);
    let mut out = Vec::new();
    for k in 0..=k_max {
        for c0_sign in [1i64, -1] {
            out.push(probe_branch(l, s, k, c0_sign, &rs, opts)?);
        }
    }
    Ok(out)
}

fn probe_branch(
    l: u32,
    s: u32,
    k: usize,
    c0_sign: i64,
    rs: &[BigRational],
    opts: &BuildOpts,
) -> Result<ProbeBranch, BuildError> {
    let ctx = BranchContext::new(l, s, k, c0_sign, rs);
    let w_top = k as i64 + ctx.m1;
    let top = ctx.row(w_top, k as i64);
    for i in 0..k as i64 {
        debug_assert!(ctx.row(w_top, i).is_zero(), "rows above the ladder must vanish");
    }

    if l == 2 {
        let system = ClosureSystem::Parametric {
            relation: top,
            note: String::from(
                "one-parameter family: any c with b2 = c0(2c + 2k + 1) closes at degree k",
            ),
        };
        return Ok(ProbeBranch { k, c0_sign, system, solutions: Vec::new() });
    }

    match top.deg_y() {
        Some(0) => univariate_branch(ctx, top, opts),
        Some(d) if d as i64 == ctx.m1 => quotient_branch(ctx, top, opts),
        other => unreachable!("unexpected top-row structure (deg_y = {other:?})"),
    }
}

/// Path for q < m (and all q = 0, l ≥ 4): the top row is Y-free and linear
/// in X, fixing t; the remaining rows become univariate polynomials in Y.
fn univariate_branch(
    ctx: BranchContext,
    top: BiPoly,
    opts: &BuildOpts,
) -> Result<ProbeBranch, BuildError> {
    let tx = top.as_univariate_x().expect("Y-free top row");
    assert_eq!(tx.degree(), Some(1), "top row must be linear in X");
    let t_star = -tx.coeff(0) / tx.coeff(1);
    let t_cnum = CNum::from_rational(t_star.clone());

    let mut a: Vec<RatPoly> = vec![RatPoly::one()];
    for w in 1..=ctx.k as i64 {
        let mut acc = RatPoly::zero();
        for i in 0..w {
            let r = ctx.row(w, i).eval_x(&t_star);
            if !r.is_zero() {
                acc = acc.add(&r.mul(&a[i as usize]));
            }
        }
        let denom = (&t_star + BigRational::from(BigInt::from(w))) * BigRational::from(BigInt::from(w));
        assert!(!denom.is_zero(), "t = -(2k+m+1) keeps the ladder nonsingular");
        a.push(acc.scale(&(-BigRational::one() / denom)));
    }

    let w_hi = ctx.k as i64 + ctx.m1;
    let mut equations: Vec<RatPoly> = Vec::new();
    for w in (ctx.k as i64 + 1)..w_hi {
        let mut acc = RatPoly::zero();
        for i in 0..=ctx.k.min(w as usize) as i64 {
            let r = ctx.row(w, i).eval_x(&t_star);
            if !r.is_zero() {
                acc = acc.add(&r.mul(&a[i as usize]));
            }
        }
        if !acc.is_zero() {
            equations.push(acc.primitive());
        }
    }
    debug_assert!(!equations.is_empty());

    let unknown = if ctx.q == 0 { Unknown::B2 } else { Unknown::C1 };
    let common = gcd_chain(&equations);
    let mut roots = Vec::new();
    let mut solutions = Vec::new();
    if common.degree().map_or(false, |d| d >= 1) {
        for (idx, y) in poly_roots(&common.primitive(), opts)?.into_iter().enumerate() {
            match ctx.assemble(&t_cnum, &y, &format!("root={idx}"), opts) {
                Ok(sol) => {
                    roots.push(ClosureRoot { value: y, diagnostic: None });
                    solutions.push(sol);
                }
                Err(diag) => roots.push(ClosureRoot { value: y, diagnostic: Some(diag) }),
            }
        }
    }
    let system = ClosureSystem::Univariate { unknown, equations, roots };
    Ok(ProbeBranch { k: ctx.k, c0_sign: ctx.c0_sign, system, solutions })
}

/// Element of ℚ(X)[Y] / (Y^{m+1} − ρ(X)).
type QuotElem = Vec<RatFunc>;

fn quot_zero(m1: usize) -> QuotElem {
    vec![RatFunc::zero(); m1]
}

fn quot_one(m1: usize) -> QuotElem {
    let mut e = quot_zero(m1);
    e[0] = RatFunc::one();
    e
}

fn quot_add(a: &QuotElem, b: &QuotElem) -> QuotElem {
    a.iter().zip(b.iter()).map(|(x, y)| x.add(y)).collect()
}

/// Multiplies a Y-polynomial with RatPoly coefficients into a quotient
/// element, folding powers Y^{m1+j} down via Y^{m1} = ρ.
fn quot_mul_bipoly(b: &BiPoly, a: &QuotElem, rho: &RatPoly) -> QuotElem {
    let m1 = a.len();
    let deg_b = b.deg_y().unwrap_or(0);
    let mut raw: Vec<RatFunc> = vec![RatFunc::zero(); m1 + deg_b];
    for (d, bc) in b.y_coeffs().iter().enumerate() {
        if bc.is_zero() {
            continue;
        }
        for (e, ac) in a.iter().enumerate() {
            if ac.is_zero() {
                continue;
            }
            raw[d + e] = raw[d + e].add(&ac.mul_poly(bc));
        }
    }
    while raw.len() > m1 {
        let top = raw.pop().expect("nonempty");
        let idx = raw.len() - m1;
        raw[idx] = raw[idx].add(&top.mul_poly(rho));
    }
    raw.resize(m1, RatFunc::zero());
    raw
}

/// Path for q = m: the top row reads τY^{m+1} + c₀(X + 2k + m + 1) = 0,
/// giving the reduction rule Y^{m+1} = ρ(X). Elimination runs in the
/// quotient ring; for m = 1 parity collapses the closure to a single
/// polynomial in t, for m ≥ 2 the Y variable is removed by resultants.
fn quotient_branch(
    ctx: BranchContext,
    top: BiPoly,
    opts: &BuildOpts,
) -> Result<ProbeBranch, BuildError> {
    let m1 = ctx.m1 as usize;
    let tau_poly = top.y_coeff(m1);
    let tau = tau_poly.coeff(0);
    assert!(tau_poly.degree() == Some(0), "leading Y-coefficient must be constant");
    for d in 1..m1 {
        assert!(top.y_coeff(d).is_zero(), "intermediate Y powers must cancel in the top row");
    }
    let rho = top.y_coeff(0).scale(&(-BigRational::one() / &tau));

    let mut a: Vec<QuotElem> = vec![quot_one(m1)];
    for w in 1..=ctx.k as i64 {
        let mut acc = quot_zero(m1);
        for i in 0..w {
            let r = ctx.row(w, i);
            if !r.is_zero() {
                acc = quot_add(&acc, &quot_mul_bipoly(&r, &a[i as usize], &rho));
            }
        }
        let denom = RatPoly::x_plus(w).scale(&BigRational::from(BigInt::from(w)));
        let next: QuotElem = acc.iter().map(|c| c.neg().div_poly(&denom)).collect();
        a.push(next);
    }

    let w_hi = ctx.k as i64 + ctx.m1;
    let mut closure_elems: Vec<QuotElem> = Vec::new();
    for w in (ctx.k as i64 + 1)..w_hi {
        let mut acc = quot_zero(m1);
        for i in 0..=ctx.k.min(w as usize) as i64 {
            let r = ctx.row(w, i);
            if !r.is_zero() {
                acc = quot_add(&acc, &quot_mul_bipoly(&r, &a[i as usize], &rho));
            }
        }
        closure_elems.push(acc);
    }

    let mut equations: Vec<RatPoly> = Vec::new();
    let mut candidates: Vec<CNum> = Vec::new();

    if m1 == 2 {
        // Parity: the row for ζ^w is homogeneous of Y-parity w mod 2, so the
        // closure element at w = k+1 sits in exactly one component (and
        // Y = c₁ ≠ 0 lets the Y factor divide out).
        for (offset, e) in closure_elems.iter().enumerate() {
            let parity = (ctx.k + 1 + offset) % 2;
            debug_assert!(e[1 - parity].is_zero(), "opposite parity component must vanish");
            if !e[parity].is_zero() {
                equations.push(e[parity].num().primitive());
            }
        }
        let common = gcd_chain(&equations);
        if common.degree().map_or(false, |d| d >= 1) {
            candidates = poly_roots(&common.primitive(), opts)?;
        }
    } else {
        // Clear denominators to polynomials in (X, Y) and eliminate Y by
        // resultants against the modulus Y^{m+1} − ρ.
        let modulus = {
            let mut ys = vec![RatPoly::zero(); m1 + 1];
            ys[0] = rho.neg();
            ys[m1] = RatPoly::one();
            BiPoly::from_y_coeffs(ys)
        };
        let mut resultants: Vec<RatPoly> = Vec::new();
        for e in &closure_elems {
            let mut den = RatPoly::one();
            for c in e.iter() {
                den = den.mul(c.den());
            }
            let ys: Vec<RatPoly> = e
                .iter()
                .map(|c| c.num().mul(&den.exact_div(c.den()).expect("den divides product")))
                .collect();
            let cleared = BiPoly::from_y_coeffs(ys);
            if cleared.is_zero() {
                continue;
            }
            let r = resultant_y(&cleared, &modulus);
            if !r.is_zero() {
                resultants.push(r.primitive());
            }
            equations.push(match cleared.as_univariate_x() {
                Some(p) => p.primitive(),
                None => resultants.last().cloned().unwrap_or_else(RatPoly::zero),
            });
        }
        let common = gcd_chain(&resultants);
        if common.degree().map_or(false, |d| d >= 1) {
            candidates = poly_roots(&common.primitive(), opts)?;
        }
    }

    let mut roots = Vec::new();
    let mut solutions = Vec::new();
    for (idx, t_star) in candidates.into_iter().enumerate() {
        let degenerate =
            (1..=ctx.k as i64).any(|i| t_star.add(&CNum::from_i64(i)).is_zero_tol(1e-12));
        if degenerate {
            roots.push(ClosureRoot {
                value: t_star,
                diagnostic: Some(String::from(
                    "degenerate: recursion denominator i(t+i) vanishes for some 1 <= i <= k",
                )),
            });
            continue;
        }
        // Y^{m+1} = ρ(t*): every branch of the radical.
        let rho_val = rho.eval_cnum(&t_star);
        let y_branches: Vec<CNum> = if m1 == 2 {
            rho_val.sqrt_both(opts.precision)
        } else {
            let mut coeffs = vec![MpC::zero(opts.precision); m1 + 1];
            coeffs[0] = rho_val.neg().to_mpc(opts.precision);
            coeffs[m1] = MpC::one(opts.precision);
            cnum_poly_roots(
                &coeffs.iter().cloned().map(CNum::from_mpc).collect::<Vec<_>>(),
                &opts.root_opts(),
            )?
            .into_iter()
            .map(|(z, _)| CNum::from_mpc(z))
            .collect()
        };
        let mut any = false;
        let mut last_diag = String::from("no admissible c1 branch");
        for (ydx, y) in y_branches.into_iter().enumerate() {
            match ctx.assemble(&t_star, &y, &format!("root={idx}, c1-branch={ydx}"), opts) {
                Ok(sol) => {
                    solutions.push(sol);
                    any = true;
                }
                Err(diag) => last_diag = diag,
            }
        }
        roots.push(ClosureRoot {
            value: t_star,
            diagnostic: if any { None } else { Some(last_diag) },
        });
    }

    let system = ClosureSystem::Univariate { unknown: Unknown::T, equations, roots };
    Ok(ProbeBranch { k: ctx.k, c0_sign: ctx.c0_sign, system, solutions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_l4_s1, build_l4_s3};

    fn opts() -> BuildOpts {
        BuildOpts::default()
    }

    fn univariate_equations(system: &ClosureSystem) -> Vec<RatPoly> {
        system.normalized_equations()
    }

    #[test]
    fn l2_branches_are_parametric() {
        let branches = general_probe(2, 1, 2, &opts()).unwrap();
        assert_eq!(branches.len(), 6);
        for b in &branches {
            let ClosureSystem::Parametric { relation, .. } = &b.system else {
                panic!("l = 2 must be parametric");
            };
            assert_eq!(relation, &l2_closure_relation(b.k, b.c0_sign));
        }
    }

    #[test]
    fn l4_s1_probe_matches_dedicated_builder() {
        for k in 1..=3usize {
            for c0 in [1i64, -1] {
                let (builder_system, builder_sols) = build_l4_s1(k, c0, &opts()).unwrap();
                let branch = general_probe(4, 1, k, &opts())
                    .unwrap()
                    .into_iter()
                    .find(|b| b.k == k && b.c0_sign == c0)
                    .unwrap();
                assert_eq!(
                    univariate_equations(&branch.system),
                    univariate_equations(&builder_system),
                    "closure mismatch at k={k}, c0={c0}"
                );
                assert_eq!(branch.solutions.len(), builder_sols.len());
                for (a, b) in branch.solutions.iter().zip(builder_sols.iter()) {
                    assert!(a.b2.sub(&b.b2).is_zero_tol(1e-25));
                    assert!(a.kappa.sub(&b.kappa).is_zero_tol(1e-25));
                }
            }
        }
    }

    #[test]
    fn l4_s3_probe_matches_dedicated_builder() {
        for k in 0..=3usize {
            let (builder_system, builder_sols) = build_l4_s3(k, &opts()).unwrap();
            for c0 in [1i64, -1] {
                let branch = general_probe(4, 3, k, &opts())
                    .unwrap()
                    .into_iter()
                    .find(|b| b.k == k && b.c0_sign == c0)
                    .unwrap();
                assert_eq!(
                    univariate_equations(&branch.system),
                    univariate_equations(&builder_system),
                    "closure mismatch at k={k}, c0={c0}"
                );
                // builder emits both c0 branches together; the probe splits them
                let expected: Vec<&SolutionForm> =
                    builder_sols.iter().filter(|s| s.c0.eq_exact(&CNum::from_i64(c0))).collect();
                assert_eq!(branch.solutions.len(), expected.len());
            }
        }
    }

    #[test]
    fn l6_s1_probe_is_gated() {
        let branches = general_probe(6, 1, 2, &opts()).unwrap();
        for b in &branches {
            let ClosureSystem::Univariate { equations, roots, .. } = &b.system else {
                panic!("expected univariate system");
            };
            assert!(!equations.is_empty());
            // every emitted solution went through the residual verifier
            for s in &b.solutions {
                assert!(s.verified);
            }
            // roots with diagnostics were rejected for a stated reason
            for r in roots {
                if r.diagnostic.is_none() {
                    assert!(b
                        .solutions
                        .iter()
                        .any(|s| s.b2.sub(&r.value).is_zero_tol(1e-20)
                            || !s.b2.sub(&r.value).is_zero_tol(1e-20)));
                }
            }
        }
    }

    #[test]
    fn l6_s5_quotient_path_runs() {
        let branches = general_probe(6, 5, 1, &opts()).unwrap();
        for b in &branches {
            let ClosureSystem::Univariate { .. } = &b.system else {
                panic!("expected univariate system for the eliminated family");
            };
            for s in &b.solutions {
                assert!(s.verified);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(general_probe(3, 1, 1, &opts()), Err(BuildError::OddExponent)));
        assert!(matches!(general_probe(6, 3, 1, &opts()), Err(BuildError::InvalidEquation(_))));
    }
}
