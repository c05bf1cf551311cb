//! Derivatives of Gaussian-weighted polynomials.
//!
//! Both bases share the weight `e^{-r²/2}`, and
//! `d/dr [e^{-r²/2} M(r)] = e^{-r²/2} (M' - r M)`, so any derivative of a
//! basis mixture is again a weighted polynomial.

use crate::polycore::{PolyError, Polynomial, Var};

/// `M' - r·M`, the polynomial part of one derivative of `e^{-r²/2} M(r)`.
pub fn weighted_derivative(m: &Polynomial) -> Polynomial {
    debug_assert_eq!(m.var(), Var::R);
    m.derivative()
        .try_sub(&m.shift(1))
        .expect("both sides share the variable r")
}

/// `k` successive applications of [`weighted_derivative`].
pub fn weighted_derivative_n(m: &Polynomial, k: usize) -> Polynomial {
    (0..k).fold(m.clone(), |acc, _| weighted_derivative(&acc))
}

/// Polynomial in `ρ = r²` governing the sign of the `k`-th derivative of
/// `e^{-r²/2} M(r)` for even `M` and `r > 0`. Odd `k` yields an odd
/// polynomial whose overall factor `r` is divided out.
pub fn derivative_core(m: &Polynomial, k: usize) -> Result<Polynomial, PolyError> {
    let d = weighted_derivative_n(m, k);
    if k.is_multiple_of(2) {
        d.compress_even(Var::Rho)
    } else {
        d.compress_odd(Var::Rho)
    }
}
