//! Radial 2-d states `v_n(r) = √2 e^{-r²/2} L_n(r²)` and their Fourier-Bessel pairs.
//!
//! The cores use the sign convention with a positive leading coefficient,
//! `core_n = (-1)ⁿ L_n` in terms of the textbook Laguerre polynomials, so
//! `core_1 = ρ - 1`. Under the Hankel transform `v_n ↦ (-1)ⁿ v_n`.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::sync::OnceLock;

use crate::hermite::{BasisError, FourierPair};
use crate::polycore::{snap, Polynomial, Rational, Var};
use crate::weight;

const CACHED_ORDERS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialBasisElement {
    pub n: u32,
    /// `(-1)ⁿ L_n(ρ)`.
    pub core: Polynomial,
}

fn build_table() -> Vec<Polynomial> {
    let rho = Polynomial::from_ints(&[0, 1], Var::Rho);
    let mut out = vec![Polynomial::one(Var::Rho), Polynomial::from_ints(&[-1, 1], Var::Rho)];
    for n in 1..CACHED_ORDERS as i64 {
        // (n+1) c_{n+1} = (ρ - 2n - 1) c_n - n c_{n-1}
        let shifted = rho
            .try_sub(&Polynomial::from_ints(&[2 * n + 1], Var::Rho))
            .and_then(|f| f.try_mul(&out[n as usize]))
            .and_then(|f| f.try_sub(&out[n as usize - 1].scale(&Rational::from_integer(n.into()))))
            .expect("same variable");
        out.push(shifted.scale(&Rational::new(1.into(), (n + 1).into())));
    }
    out
}

fn table() -> &'static [Polynomial] {
    static TABLE: OnceLock<Vec<Polynomial>> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

pub fn laguerre_state(n: u32) -> RadialBasisElement {
    assert!(n <= CACHED_ORDERS, "radial order {n} above {CACHED_ORDERS}");
    RadialBasisElement {
        n,
        core: table()[n as usize].clone(),
    }
}

/// `core_n(ρ)` for `n = 0..=n_max`, floating point.
pub fn laguerre_values(n_max: u32, rho: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(rho - 1.0);
    for n in 1..n_max as usize {
        let nf = n as f64;
        out.push(((rho - 2.0 * nf - 1.0) * out[n] - nf * out[n - 1]) / (nf + 1.0));
    }
    out
}

/// Mixture coefficients on the radial basis; every order is allowed.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RadialCoefficientVector {
    entries: BTreeMap<u32, f64>,
}

impl RadialCoefficientVector {
    pub fn new(entries: impl IntoIterator<Item = (u32, f64)>) -> Result<Self, BasisError> {
        let mut map = BTreeMap::new();
        for (n, v) in entries {
            if !v.is_finite() {
                return Err(BasisError::NonFinite(n));
            }
            *map.entry(n).or_insert(0.0) += v;
        }
        Ok(RadialCoefficientVector { entries: map })
    }

    pub fn from_orders(orders: &[u32], values: &[f64]) -> Result<Self, BasisError> {
        Self::new(orders.iter().copied().zip(values.iter().copied()))
    }

    pub fn entries(&self) -> &BTreeMap<u32, f64> {
        &self.entries
    }

    pub fn truncation(&self) -> u32 {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        RadialCoefficientVector {
            entries: self.entries.iter().map(|(&n, &v)| (n, v * factor)).collect(),
        }
    }
}

fn mixture(c: &RadialCoefficientVector, bits: u32, alternate: bool, var: Var) -> Result<Polynomial, BasisError> {
    let mut acc = Polynomial::zero(var);
    for (&n, &psi) in c.entries() {
        let w = if alternate && n % 2 == 1 { -psi } else { psi };
        let core = laguerre_state(n).core.with_var(var);
        acc = acc.try_add(&core.scale(&snap(w, bits)?))?;
    }
    Ok(acc)
}

/// `M(r) = Σ ψ_n core_n(r²)` (the `√2` prefactor dropped).
pub fn mixture_in_r(c: &RadialCoefficientVector, bits: u32) -> Result<Polynomial, BasisError> {
    Ok(mixture(c, bits, false, Var::Rho)?.expand_even(Var::R))
}

/// `P(ρ) = Σ ψ_n core_n(ρ)` and `Q(σ) = Σ (-1)ⁿ ψ_n core_n(σ)`.
pub fn build_pair_2d(c: &RadialCoefficientVector, bits: u32) -> Result<FourierPair, BasisError> {
    Ok(FourierPair {
        p: mixture(c, bits, false, Var::Rho)?,
        q: mixture(c, bits, true, Var::Sigma)?,
    })
}

/// `N(ρ)` with `d³ψ/dr³ = √2 e^{-r²/2} r N(r²)`.
pub fn third_derivative_core(c: &RadialCoefficientVector, bits: u32) -> Result<Polynomial, BasisError> {
    Ok(weight::derivative_core(&mixture_in_r(c, bits)?, 3)?)
}

/// `C(ρ)` with `d²ψ/dr² = √2 e^{-r²/2} C(r²)`.
pub fn second_derivative_core_2d(c: &RadialCoefficientVector, bits: u32) -> Result<Polynomial, BasisError> {
    Ok(weight::derivative_core(&mixture_in_r(c, bits)?, 2)?)
}

/// `ψ(r) = √2 e^{-r²/2} Σ ψ_n core_n(r²)`.
pub fn eval_radial_state(c: &RadialCoefficientVector, r: f64) -> f64 {
    let lv = laguerre_values(c.truncation(), r * r);
    let sum: f64 = c.entries().iter().map(|(&n, &v)| v * lv[n as usize]).sum();
    SQRT_2 * (-0.5 * r * r).exp() * sum
}

/// Exact Hankel partner `φ(s) = √2 e^{-s²/2} Σ (-1)ⁿ ψ_n core_n(s²)`.
pub fn eval_radial_partner(c: &RadialCoefficientVector, s: f64) -> f64 {
    let lv = laguerre_values(c.truncation(), s * s);
    let sum: f64 = c
        .entries()
        .iter()
        .map(|(&n, &v)| if n % 2 == 0 { v } else { -v } * lv[n as usize])
        .sum();
    SQRT_2 * (-0.5 * s * s).exp() * sum
}
