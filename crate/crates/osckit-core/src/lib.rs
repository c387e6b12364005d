//! Solver and verifier toolkit for the oscillation of
//! f″ = (e^{lz} + b₂e^{sz} + b₃)f.
//!
//! Solutions with finitely many zeros have the shape f = κe^h with κ a
//! polynomial in e^z and g = h′ an exponential polynomial. This crate
//! constructs every such form the equation admits for l ∈ {2, 4} (and
//! probes general even l), derives the closure polynomials their
//! coefficient recursions force, and cross-validates three independent
//! ways: exact symbolic residuals, Frobenius series at the transformed
//! equation's regular singular point x = e^z = 0, and numerical zero
//! counting and ray integration.
//!
//! The carrier algebra is [`expalg::ExpPoly`] over [`expalg::CNum`] scalars
//! (exact rational complex numbers, promoted to configurable-precision
//! floats only when roots demand it). Everything downstream — builders,
//! verification, series, oscillation tooling — is pure and allocation-only
//! (`no_std` + `alloc`); IO, JSON and the CLI live in the companion `osckit`
//! crate.

#![no_std]
extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod builder;
pub mod expalg;
pub mod frobenius;
pub mod mp;
pub mod oscillation;
pub mod polyq;
pub mod verify;
