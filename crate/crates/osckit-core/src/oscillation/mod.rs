//! Zero distribution and growth tooling for constructed solutions.
//!
//! Zeros of f = κe^h are exactly the zeros of κ(e^{z/den}): each root ζ₀ of
//! the Laurent polynomial contributes the vertical lattice
//! den·(Log ζ₀ + 2πi·m), m ∈ ℤ. Counting functions, the exponent-of-
//! convergence estimate, and an argument-principle cross-check all operate
//! on that lattice; a multiprecision adaptive integrator follows solutions
//! along rays for the growth checks.

pub mod ray;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::builder::SolutionForm;
use crate::expalg::{laurent_roots, EvalError, RootError, RootOpts};

pub use ray::{ray_integrate, ray_integrate_coeff, RayError, RaySample, StepControl};

#[derive(Clone, Debug)]
pub enum OscError {
    Roots(RootError),
    Eval(EvalError),
    /// A zero lies within the guard distance of the integration contour.
    ZeroNearContour { distance: f64 },
    /// The quadrature failed to settle on an integer winding number.
    QuadratureInconclusive { value: f64 },
}

impl fmt::Display for OscError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OscError::Roots(e) => write!(f, "{e}"),
            OscError::Eval(e) => write!(f, "{e}"),
            OscError::ZeroNearContour { distance } => {
                write!(f, "a zero lies {distance:.3e} from the contour")
            }
            OscError::QuadratureInconclusive { value } => {
                write!(f, "contour integral {value} is not close to an integer")
            }
        }
    }
}

impl core::error::Error for OscError {}

impl From<RootError> for OscError {
    fn from(e: RootError) -> Self {
        OscError::Roots(e)
    }
}

impl From<EvalError> for OscError {
    fn from(e: EvalError) -> Self {
        OscError::Eval(e)
    }
}

/// One root of κ as a vertical lattice of zeros of f.
#[derive(Clone, Debug)]
pub struct LatticeEntry {
    /// Principal logarithm of the κ-root ζ₀.
    pub base: Complex64,
    pub multiplicity: usize,
}

/// The zeros of f: {den·(base + 2πi·m)} over all entries.
#[derive(Clone, Debug)]
pub struct ZeroLattice {
    pub entries: Vec<LatticeEntry>,
    pub den: u8,
}

impl ZeroLattice {
    /// Vertical period 2π·den of the zero set.
    pub fn period(&self) -> f64 {
        2.0 * core::f64::consts::PI * self.den as f64
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All zeros inside |z| < r.
    pub fn points_in_disc(&self, r: f64) -> Vec<(Complex64, usize)> {
        let mut out = Vec::new();
        let den = self.den as f64;
        let period = self.period();
        for e in &self.entries {
            let re = den * e.base.re;
            let im0 = den * e.base.im;
            let rhs = r * r - re * re;
            if rhs <= 0.0 {
                continue;
            }
            let bound = libm::sqrt(rhs);
            let m_lo = libm::ceil((-im0 - bound) / period) as i64;
            let m_hi = libm::floor((-im0 + bound) / period) as i64;
            for m in m_lo..=m_hi {
                out.push((Complex64::new(re, im0 + period * m as f64), e.multiplicity));
            }
        }
        out
    }
}

/// Zero lattice of a solution form: logarithms of the κ-roots. Constant κ
/// yields the empty lattice.
pub fn zeros_of(sol: &SolutionForm, opts: &RootOpts) -> Result<ZeroLattice, OscError> {
    if sol.kappa.is_constant() {
        return Ok(ZeroLattice { entries: Vec::new(), den: sol.kappa.den() });
    }
    let mut entries = Vec::new();
    for (zeta, multiplicity) in laurent_roots(&sol.kappa, opts)? {
        let log = zeta.ln();
        let (re, im) = log.to_f64_pair();
        entries.push(LatticeEntry { base: Complex64::new(re, im), multiplicity });
    }
    Ok(ZeroLattice { entries, den: sol.kappa.den() })
}

/// Number of zeros in the open disc |z| < r, counted with multiplicity.
/// Radii landing on a lattice point are perturbed outward by 1e-9.
pub fn count_zeros(lat: &ZeroLattice, r: f64) -> usize {
    assert!(r > 0.0, "radius must be positive");
    let mut r = r;
    let den = lat.den as f64;
    let period = lat.period();
    for _ in 0..4 {
        let mut clean = true;
        'outer: for e in &lat.entries {
            let re = den * e.base.re;
            let im0 = den * e.base.im;
            // nearest lattice modulus to the circle
            let m_center = (-im0) / period;
            for dm in -1..=1 {
                let m = libm::round(m_center) + dm as f64;
                let im = im0 + period * m;
                let dist = libm::sqrt(re * re + im * im) - r;
                if dist.abs() < 1e-9 {
                    clean = false;
                    break 'outer;
                }
            }
            // the extremal |im| within the disc bound also matters near the
            // crossing count boundary; the coarse check above suffices for
            // the perturbation contract
            let rhs = r * r - re * re;
            if rhs > 0.0 {
                let bound = libm::sqrt(rhs);
                for sign in [-1.0, 1.0] {
                    let m = libm::round((-im0 + sign * bound) / period);
                    let im = im0 + period * m;
                    let dist = libm::sqrt(re * re + im * im) - r;
                    if dist.abs() < 1e-9 {
                        clean = false;
                        break 'outer;
                    }
                }
            }
        }
        if clean {
            break;
        }
        r += 1e-9;
    }

    let mut count = 0usize;
    for e in &lat.entries {
        let re = den * e.base.re;
        let im0 = den * e.base.im;
        let rhs = r * r - re * re;
        if rhs <= 0.0 {
            continue;
        }
        let bound = libm::sqrt(rhs);
        let m_lo = libm::ceil((-im0 - bound) / period) as i64;
        let m_hi = libm::floor((-im0 + bound) / period) as i64;
        if m_hi >= m_lo {
            count += (m_hi - m_lo + 1) as usize * e.multiplicity;
        }
    }
    count
}

/// Least-squares slope of log n(r) against log r over the largest half of
/// the sample radii; 0 for an empty lattice. This estimates the exponent of
/// convergence of the zeros.
pub fn lambda_estimate(lat: &ZeroLattice, r_values: &[f64]) -> f64 {
    assert!(r_values.len() >= 4, "need at least four radii");
    if lat.is_empty() {
        return 0.0;
    }
    let mut rs: Vec<f64> = r_values.to_vec();
    rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let half = &rs[rs.len() / 2..];
    let pts: Vec<(f64, f64)> = half
        .iter()
        .filter_map(|&r| {
            let n = count_zeros(lat, r);
            if n == 0 {
                None
            } else {
                Some((libm::log(r), libm::log(n as f64)))
            }
        })
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Winding number of f around |z| = r by trapezoidal quadrature of
/// f′/(2πi·f), doubling the node count until two rounds agree. Must equal
/// `count_zeros` at the same radius.
pub fn argument_count(
    sol: &SolutionForm,
    lat: &ZeroLattice,
    r: f64,
    n_quad: usize,
) -> Result<usize, OscError> {
    let min_dist = lat
        .points_in_disc(r + 1.0)
        .iter()
        .map(|(z, _)| (z.norm() - r).abs())
        .fold(f64::INFINITY, f64::min);
    if min_dist < 1e-6 {
        return Err(OscError::ZeroNearContour { distance: min_dist });
    }

    let integrate = |n: usize| -> Result<f64, OscError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let theta = 2.0 * core::f64::consts::PI * j as f64 / n as f64;
            let z = Complex64::from_polar(r, theta);
            let ld = sol.log_derivative_f64(z)?;
            acc += ld * z;
        }
        Ok((acc / n as f64).re)
    };

    let mut n = n_quad.max(16);
    let mut prev = integrate(n)?;
    for _ in 0..8 {
        n *= 2;
        let next = integrate(n)?;
        let rounded = libm::round(next);
        if (next - prev).abs() < 5e-3 && (next - rounded).abs() < 0.1 {
            return Ok(rounded as usize);
        }
        prev = next;
    }
    Err(OscError::QuadratureInconclusive { value: prev })
}

/// Growth indicator δ(p, θ) = a·cos kθ − b·sin kθ for p = (a+ib)z^k.
pub fn delta(a: f64, b: f64, k: u32, theta: f64) -> f64 {
    let kt = k as f64 * theta;
    a * libm::cos(kt) - b * libm::sin(kt)
}

/// Sector decomposition induced by the sign of δ: 2k sectors of width π/k
/// whose boundaries are the zeros of δ, with alternating signs.
#[derive(Clone, Debug)]
pub struct SectorDecomp {
    pub k: u32,
    /// Boundary angles θ₁ < … < θ_{2k}, θ_{j+1} = θ_j + π/k.
    pub boundaries: Vec<f64>,
    /// Sign of δ on (θ_j, θ_{j+1}).
    pub signs: Vec<i8>,
}

impl SectorDecomp {
    /// Render as "(+,-,+,-,...)" for reports.
    pub fn sign_string(&self) -> String {
        let mut s = String::new();
        for sg in &self.signs {
            s.push(if *sg > 0 { '+' } else { '-' });
        }
        s
    }
}

/// Builds the sector decomposition anchored at the δ-zero closest to
/// `theta1` (the requested anchor is snapped onto the zero set).
pub fn delta_sectors(a: f64, b: f64, k: u32, theta1: f64) -> SectorDecomp {
    assert!(k >= 1, "degree must be positive");
    assert!(a != 0.0 || b != 0.0, "(a, b) must be nonzero");
    // δ = R·cos(kθ + φ) with φ = atan2(b, a): zeros at kθ + φ = π/2 + jπ
    let phi = libm::atan2(b, a);
    let width = core::f64::consts::PI / k as f64;
    let base = (core::f64::consts::FRAC_PI_2 - phi) / k as f64;
    let j = libm::round((theta1 - base) / width);
    let start = base + j * width;
    let boundaries: Vec<f64> = (0..2 * k).map(|i| start + i as f64 * width).collect();
    let signs: Vec<i8> = (0..2 * k as usize)
        .map(|i| {
            let mid = boundaries[i] + 0.5 * width;
            if delta(a, b, k, mid) > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    for w in signs.windows(2) {
        debug_assert!(w[0] != w[1], "sector signs must alternate");
    }
    SectorDecomp { k, boundaries, signs }
}
