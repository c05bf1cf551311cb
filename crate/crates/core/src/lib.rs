//! Constructive positivity for Fourier and Fourier-Bessel pairs.
//!
//! A function is expanded on transform eigenstates (Hermite for the 1-d
//! transform, Laguerre in `r²` for the 2-d radial one). Positivity of the
//! function and of its transform then reduces to the absence of
//! nonnegative real roots of two polynomials, which is decided exactly with
//! Sturm chains. [`domains`] maps that decision over coefficient spheres and
//! [`verify`] holds independent floating-point oracles.

pub mod domains;
pub mod hermite;
pub mod laguerre;
pub mod polycore;
pub mod sturm;
pub mod verify;
mod weight;

pub use polycore::{Polynomial, Radicand, Rational, Var};
