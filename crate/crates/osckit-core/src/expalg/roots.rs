//! Polynomial root extraction for the Laurent representation of an
//! [`ExpPoly`].
//!
//! Roots are located in double precision with the Aberth–Ehrlich
//! simultaneous iteration, clustered into multiplicity groups at relative
//! distance 1e-8, then polished by multiprecision Newton iteration (on the
//! (ν−1)-st derivative for a cluster of size ν).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use super::cnum::CNum;
use super::exppoly::ExpPoly;
use crate::mp::{horner_with_derivative, MpC, MpFloat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootError {
    /// Zero polynomial: every point would be a root.
    ZeroPolynomial,
    /// The double-precision stage failed to converge.
    NoConvergence,
    /// A polished root still has residual above tolerance.
    ResidualTooLarge,
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::ZeroPolynomial => write!(f, "roots of the zero polynomial are undefined"),
            RootError::NoConvergence => write!(f, "root iteration failed to converge"),
            RootError::ResidualTooLarge => write!(f, "polished root residual above tolerance"),
        }
    }
}

impl core::error::Error for RootError {}

/// Tunables for root extraction.
#[derive(Clone, Debug)]
pub struct RootOpts {
    /// Working precision for the polish stage.
    pub precision: usize,
    /// Residual bound relative to Σ|aᵢ||ζ|ⁱ.
    pub residual_tol: f64,
    /// Relative distance for multiplicity clustering.
    pub cluster_rel: f64,
}

impl Default for RootOpts {
    fn default() -> Self {
        RootOpts { precision: 2 * crate::mp::DEFAULT_PRECISION, residual_tol: 1e-20, cluster_rel: 1e-8 }
    }
}

/// All roots ζ₀ ≠ 0 of the Laurent polynomial Σ aⱼζʲ underlying `a`,
/// with multiplicities summing to max j − min j.
pub fn laurent_roots(a: &ExpPoly, opts: &RootOpts) -> Result<Vec<(MpC, usize)>, RootError> {
    if a.is_structurally_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let (_, coeffs) = a.zeta_coefficients();
    let mpc: Vec<MpC> = coeffs.iter().map(|c| c.to_mpc(opts.precision)).collect();
    mpc_poly_roots(&mpc, opts)
}

/// Roots (with multiplicity) of a dense polynomial with ascending `MpC`
/// coefficients. The constant and leading coefficients must be nonzero;
/// callers strip zero tails (those correspond to roots at the origin or a
/// degree drop).
pub fn mpc_poly_roots(coeffs: &[MpC], opts: &RootOpts) -> Result<Vec<(MpC, usize)>, RootError> {
    // Strip trailing (leading-degree) zeros.
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].is_zero() {
        hi -= 1;
    }
    if hi == 0 {
        return Err(RootError::ZeroPolynomial);
    }
    let mut lo = 0;
    while lo < hi && coeffs[lo].is_zero() {
        lo += 1;
    }
    let work = &coeffs[lo..hi];
    let n = work.len() - 1;
    let mut out: Vec<(MpC, usize)> = Vec::new();
    if lo > 0 {
        out.push((MpC::zero(opts.precision), lo));
    }
    if n == 0 {
        return Ok(out);
    }

    let f64_coeffs: Vec<Complex64> = work
        .iter()
        .map(|c| {
            let (re, im) = c.to_f64_pair();
            Complex64::new(re, im)
        })
        .collect();
    let approx = aberth(&f64_coeffs).ok_or(RootError::NoConvergence)?;
    let clusters = cluster(&approx, opts.cluster_rel);

    for group in clusters {
        let nu = group.len();
        let centroid = group.iter().sum::<Complex64>() / nu as f64;
        let polished = polish(work, centroid, nu, opts);
        // Residual gate against a scale-aware bound.
        let scale = residual_scale(work, &polished);
        let val = crate::mp::horner(work, &polished);
        if val.abs().to_f64() > opts.residual_tol * scale.max(1e-300) {
            return Err(RootError::ResidualTooLarge);
        }
        out.push((polished, nu));
    }
    out.sort_by(|a, b| {
        let (ar, ai) = a.0.to_f64_pair();
        let (br, bi) = b.0.to_f64_pair();
        (ar, ai).partial_cmp(&(br, bi)).unwrap_or(core::cmp::Ordering::Equal)
    });
    Ok(out)
}

fn residual_scale(coeffs: &[MpC], z: &MpC) -> f64 {
    let r = z.abs().to_f64();
    let mut scale = 0.0f64;
    let mut pw = 1.0f64;
    for c in coeffs {
        scale += c.abs().to_f64() * pw;
        pw *= r;
    }
    scale
}

/// Aberth–Ehrlich simultaneous iteration in double precision.
fn aberth(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if lead.norm() == 0.0 {
        return None;
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic.iter().take(n).map(|c| c.norm()).fold(0.0, f64::max);

    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * core::f64::consts::PI * k as f64 / n as f64 + 0.4;
            let r = radius * (0.5 + 0.5 * (k + 1) as f64 / n as f64);
            Complex64::from_polar(r, angle)
        })
        .collect();

    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner_f64(&monic, z[k]);
            if !p.is_finite() || !dp.is_finite() {
                z[k] *= Complex64::new(0.9, 0.05);
                max_step = f64::INFINITY;
                continue;
            }
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() == 0.0 { Complex64::new(1e-12, 1e-12) } else { p / dp };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 1e-300 {
                        s += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() < 1e-300 { w } else { w / denom };
            z[k] -= step;
            let rel = step.norm() / (1.0 + z[k].norm());
            max_step = max_step.max(rel);
        }
        if max_step < 1e-14 {
            return Some(z);
        }
    }
    // Accept slow convergence: polish repairs the residual or errors out.
    Some(z)
}

fn horner_f64(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut val = Complex64::new(0.0, 0.0);
    let mut der = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        der = der * z + val;
        val = val * z + c;
    }
    (val, der)
}

/// Groups approximate roots lying within relative distance `rel`.
fn cluster(roots: &[Complex64], rel: f64) -> Vec<Vec<Complex64>> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= rel * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<Vec<Complex64>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(roots[i]);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

/// Multiprecision Newton polish. A cluster of size ν is polished on the
/// (ν−1)-st derivative, where the root is simple.
fn polish(coeffs: &[MpC], start: Complex64, multiplicity: usize, opts: &RootOpts) -> MpC {
    let p = opts.precision;
    let mut target: Vec<MpC> = coeffs.to_vec();
    for _ in 1..multiplicity {
        target = differentiate_coeffs(&target);
    }
    let mut z = MpC::from_f64(start.re, start.im, p);
    for _ in 0..64 {
        let (val, der) = horner_with_derivative(&target, &z);
        if der.is_zero() {
            break;
        }
        let step = val.div(&der);
        z = z.sub(&step);
        let step_mag = step.abs().to_f64();
        let z_mag = z.abs().to_f64().max(1.0);
        if step_mag < z_mag * libm::exp2(-(p as f64) + 6.0) {
            break;
        }
    }
    z
}

fn differentiate_coeffs(coeffs: &[MpC]) -> Vec<MpC> {
    let p = coeffs.first().map(|c| c.precision()).unwrap_or(crate::mp::DEFAULT_PRECISION);
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&MpFloat::from_i64(i as i64, p)))
        .collect()
}

/// Roots of a polynomial with exact complex rational coefficients.
pub fn cnum_poly_roots(coeffs: &[CNum], opts: &RootOpts) -> Result<Vec<(MpC, usize)>, RootError> {
    let mpc: Vec<MpC> = coeffs.iter().map(|c| c.to_mpc(opts.precision)).collect();
    mpc_poly_roots(&mpc, opts)
}
