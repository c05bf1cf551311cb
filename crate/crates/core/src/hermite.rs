//! Square-normalised Hermite states and the 1-d Fourier pair they generate.
//!
//! `u_n(r) = π^{-1/4} e^{-r²/2} H_n(r)` with `H_n = h_n / √(2ⁿ n!)`, where
//! `h_n` is the integer physicists' Hermite polynomial. The Fourier transform
//! multiplies `u_n` by `iⁿ`, so for an even mixture the orders `≡ 0 mod 4`
//! are invariant and the orders `≡ 2 mod 4` flip sign.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::polycore::{snap, PolyError, Polynomial, Radicand, Rational, Var};
use crate::weight;

/// Orders cached in the shared basis table.
pub const CACHED_ORDERS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("odd order {0} would make the transform imaginary")]
    OddOrder(u32),
    #[error("coefficient for order {0} is not finite")]
    NonFinite(u32),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `H_n = core / √norm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub n: u32,
    /// `h_n`, integer coefficients, leading coefficient `2ⁿ`.
    pub core: Polynomial,
    /// `2ⁿ n!`.
    pub norm: Radicand,
}

impl BasisElement {
    /// Primitive integer polynomial proportional to `h_n`, as printed in tables.
    pub fn bracket(&self) -> Polynomial {
        self.core.primitive()
    }

    /// `H_n = factor · bracket`, with `factor = content / √norm` returned as a radicand.
    pub fn bracket_factor(&self) -> Radicand {
        let c = self.core.content();
        Radicand::new(&c * &c / self.norm.value()).expect("square over positive norm")
    }

    /// `H_n(r)` in floating point.
    pub fn eval_f64(&self, r: f64) -> f64 {
        self.core.eval_f64(r) / self.norm.to_f64()
    }
}

fn build_table() -> Vec<BasisElement> {
    let mut out = Vec::with_capacity(CACHED_ORDERS as usize + 1);
    let two_r = Polynomial::from_ints(&[0, 2], Var::R);
    let mut prev = Polynomial::one(Var::R);
    let mut cur = two_r.clone();
    let mut norm = BigInt::one();
    for n in 0..=CACHED_ORDERS {
        let core = if n == 0 { prev.clone() } else { cur.clone() };
        out.push(BasisElement {
            n,
            core,
            norm: Radicand::from_integer(norm.clone()).expect("positive"),
        });
        norm *= BigInt::from(2 * (n + 1));
        if n >= 1 {
            // h_{n+1} = 2r h_n - 2n h_{n-1}
            let next = two_r
                .try_mul(&cur)
                .and_then(|a| a.try_sub(&prev.scale(&Rational::from_integer((2 * n).into()))))
                .expect("same variable");
            prev = std::mem::replace(&mut cur, next);
        }
    }
    out
}

fn table() -> &'static [BasisElement] {
    static TABLE: OnceLock<Vec<BasisElement>> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

/// The `n`-th square-normalised Hermite polynomial.
pub fn hermite_normalized(n: u32) -> BasisElement {
    if n <= CACHED_ORDERS {
        return table()[n as usize].clone();
    }
    let two_r = Polynomial::from_ints(&[0, 2], Var::R);
    let mut prev = Polynomial::one(Var::R);
    let mut cur = two_r.clone();
    let mut norm = BigInt::from(2);
    for k in 1..n {
        let next = two_r
            .try_mul(&cur)
            .and_then(|a| a.try_sub(&prev.scale(&Rational::from_integer((2 * k).into()))))
            .expect("same variable");
        prev = std::mem::replace(&mut cur, next);
        norm *= BigInt::from(2 * (k + 1));
    }
    BasisElement {
        n,
        core: cur,
        norm: Radicand::from_integer(norm).expect("positive"),
    }
}

fn core_ref(n: u32) -> std::borrow::Cow<'static, Polynomial> {
    if n <= CACHED_ORDERS {
        std::borrow::Cow::Borrowed(&table()[n as usize].core)
    } else {
        std::borrow::Cow::Owned(hermite_normalized(n).core)
    }
}

/// `H_n(r)` for `n = 0..=n_max` by the orthonormal three-term recursion.
pub fn hermite_values(n_max: u32, r: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * r);
    for n in 1..n_max as usize {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * r * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Whether order `n` lies in the eigenvalue `+1` or `-1` subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eigenspace {
    Plus,
    Minus,
}

/// Mixture coefficients `ψ_n` on even Hermite orders.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CoefficientVector {
    entries: BTreeMap<u32, f64>,
}

impl CoefficientVector {
    pub fn new(entries: impl IntoIterator<Item = (u32, f64)>) -> Result<Self, BasisError> {
        let mut map = BTreeMap::new();
        for (n, v) in entries {
            if n % 2 == 1 {
                return Err(BasisError::OddOrder(n));
            }
            if !v.is_finite() {
                return Err(BasisError::NonFinite(n));
            }
            *map.entry(n).or_insert(0.0) += v;
        }
        Ok(CoefficientVector { entries: map })
    }

    pub fn from_orders(orders: &[u32], values: &[f64]) -> Result<Self, BasisError> {
        Self::new(orders.iter().copied().zip(values.iter().copied()))
    }

    pub fn entries(&self) -> &BTreeMap<u32, f64> {
        &self.entries
    }

    pub fn get(&self, n: u32) -> f64 {
        self.entries.get(&n).copied().unwrap_or(0.0)
    }

    /// Largest order present.
    pub fn truncation(&self) -> u32 {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn eigenspace(n: u32) -> Eigenspace {
        if n.is_multiple_of(4) {
            Eigenspace::Plus
        } else {
            Eigenspace::Minus
        }
    }

    /// True when every `ψ_{4p+2}` vanishes, so `ψ` is its own transform.
    pub fn is_self_fourier(&self) -> bool {
        self.entries
            .iter()
            .all(|(&n, &v)| Self::eigenspace(n) == Eigenspace::Plus || v == 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        CoefficientVector {
            entries: self.entries.iter().map(|(&n, &v)| (n, v * factor)).collect(),
        }
    }
}

/// `ψ` governed by `P(ρ)`, its transform `φ` by `Q(σ)`; both carry the
/// implied positive prefactor `π^{-1/4} e^{-x²/2}` (or `√2 e^{-x²/2}` in 2-d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierPair {
    pub p: Polynomial,
    pub q: Polynomial,
}

/// Exact `Σ w_n h_n(r)` with `w_n = ψ_n / √(2ⁿ n!)` snapped to `2^-bits`,
/// optionally negating the `4p+2` orders. Equals `Σ ψ_n H_n(r)` up to snapping.
pub fn mixture_in_r(c: &CoefficientVector, bits: u32, flip_minus: bool) -> Result<Polynomial, BasisError> {
    let mut acc = Polynomial::zero(Var::R);
    for (&n, &psi) in c.entries() {
        let norm = hermite_normalized_norm(n);
        let mut w = psi / norm;
        if flip_minus && CoefficientVector::eigenspace(n) == Eigenspace::Minus {
            w = -w;
        }
        let w = snap(w, bits)?;
        acc = acc.try_add(&core_ref(n).scale(&w))?;
    }
    Ok(acc)
}

fn hermite_normalized_norm(n: u32) -> f64 {
    if n <= CACHED_ORDERS {
        table()[n as usize].norm.to_f64()
    } else {
        hermite_normalized(n).norm.to_f64()
    }
}

/// `P = P₊ + P₋` in `ρ` and `Q = P₊ - P₋` in `σ`, exact after snapping.
pub fn build_pair(c: &CoefficientVector, bits: u32) -> Result<FourierPair, BasisError> {
    let p = mixture_in_r(c, bits, false)?.compress_even(Var::Rho)?;
    let q = if c.is_self_fourier() {
        p.clone().with_var(Var::Sigma)
    } else {
        mixture_in_r(c, bits, true)?.compress_even(Var::Sigma)?
    };
    Ok(FourierPair { p, q })
}

/// `C(ρ)` with `d²ψ/dr² = π^{-1/4} e^{-r²/2} C(r²)`.
pub fn second_derivative_core(c: &CoefficientVector, bits: u32) -> Result<Polynomial, BasisError> {
    let m = mixture_in_r(c, bits, false)?;
    Ok(weight::derivative_core(&m, 2)?)
}

/// `D = Q' - Q/2`, so that `dφ/dσ ∝ e^{-σ/2} D(σ)` with a positive factor.
pub fn sigma_derivative(q: &Polynomial) -> Polynomial {
    let half = Rational::new(1.into(), 2.into());
    q.derivative()
        .try_sub(&q.scale(&half))
        .expect("same variable")
}

/// `ψ(r) = π^{-1/4} e^{-r²/2} Σ ψ_n H_n(r)`.
pub fn eval_state(c: &CoefficientVector, r: f64) -> f64 {
    let hv = hermite_values(c.truncation(), r);
    let sum: f64 = c.entries().iter().map(|(&n, &v)| v * hv[n as usize]).sum();
    PI.powf(-0.25) * (-0.5 * r * r).exp() * sum
}

/// `φ(s) = π^{-1/4} e^{-s²/2} Σ iⁿ ψ_n H_n(s)`, the exact transform of [`eval_state`].
pub fn eval_partner(c: &CoefficientVector, s: f64) -> f64 {
    let hv = hermite_values(c.truncation(), s);
    let sum: f64 = c
        .entries()
        .iter()
        .map(|(&n, &v)| {
            let phase = if n.is_multiple_of(4) { 1.0 } else { -1.0 };
            phase * v * hv[n as usize]
        })
        .sum();
    PI.powf(-0.25) * (-0.5 * s * s).exp() * sum
}

/// Convert multipliers of the printed integer brackets
/// (`ψ = e^{-r²/2} Σ b_n · bracket_n(r)`) into square-normalised `ψ_n`.
pub fn from_bracket_multipliers(multipliers: &[(u32, f64)]) -> Result<CoefficientVector, BasisError> {
    CoefficientVector::new(multipliers.iter().map(|&(n, b)| {
        let e = hermite_normalized(n);
        // bracket = H_n / factor, ψ_n π^{-1/4} factor = b
        (n, b * PI.powf(0.25) / e.bracket_factor().to_f64())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn r(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c, Var::R)
    }

    #[test]
    fn listed_states() {
        assert_eq!(hermite_normalized(0).core, r(&[1]));
        assert_eq!(hermite_normalized(0).norm.value(), &Rational::one());
        let h2 = hermite_normalized(2);
        assert_eq!(h2.core, r(&[-2, 0, 4]));
        assert_eq!(h2.norm.value(), &Rational::from_integer(8.into()));
        assert_eq!(h2.bracket(), r(&[-1, 0, 2]));
        // H2 = (2r²-1)/√2
        assert_eq!(h2.bracket_factor().value(), &Rational::new(1.into(), 2.into()));
        let h3 = hermite_normalized(3);
        assert_eq!(h3.bracket(), r(&[0, -3, 0, 2]));
        assert_eq!(h3.bracket_factor().value(), &Rational::new(1.into(), 3.into()));
        let h1 = hermite_normalized(1);
        assert_eq!(h1.bracket(), r(&[0, 1]));
        assert_eq!(h1.bracket_factor().value(), &Rational::from_integer(2.into()));
    }

    #[test]
    fn higher_brackets() {
        let h4 = hermite_normalized(4);
        assert_eq!(h4.bracket(), r(&[3, 0, -12, 0, 4]));
        assert_eq!(h4.bracket_factor().recip_value(), Rational::from_integer(24.into()));
        let h8 = hermite_normalized(8);
        assert_eq!(h8.bracket(), r(&[105, 0, -840, 0, 840, 0, -224, 0, 16]));
        assert_eq!(h8.bracket_factor().recip_value(), Rational::from_integer((24 * 24 * 70).into()));
        let h12 = hermite_normalized(12);
        assert_eq!(
            h12.bracket(),
            r(&[10395, 0, -124740, 0, 207900, 0, -110880, 0, 23760, 0, -2112, 0, 64])
        );
        assert_eq!(
            h12.bracket_factor().recip_value(),
            Rational::from_integer((1440i64 * 1440 * 231).into())
        );
    }

    trait Recip {
        fn recip_value(&self) -> Rational;
    }
    impl Recip for Radicand {
        fn recip_value(&self) -> Rational {
            self.value().recip()
        }
    }

    #[test]
    fn recursion_and_parity() {
        let two_r = r(&[0, 2]);
        for n in 1..16u32 {
            let prev = hermite_normalized(n - 1).core;
            let cur = hermite_normalized(n).core;
            let next = hermite_normalized(n + 1).core;
            let rhs = two_r
                .try_mul(&cur)
                .unwrap()
                .try_sub(&prev.scale(&Rational::from_integer((2 * n).into())))
                .unwrap();
            assert_eq!(next, rhs, "n = {n}");
            assert_eq!(cur.leading().unwrap(), &Rational::from_integer(BigInt::one() << n));
            for (k, c) in cur.coeffs().iter().enumerate() {
                if (k + n as usize) % 2 == 1 {
                    assert!(c.is_zero());
                }
            }
        }
        // uncached path agrees with the table
        let h33 = hermite_normalized(33);
        let two_r_h32 = two_r.try_mul(&hermite_normalized(32).core).unwrap();
        let expect = two_r_h32
            .try_sub(&hermite_normalized(31).core.scale(&Rational::from_integer(64.into())))
            .unwrap();
        assert_eq!(h33.core, expect);
    }

    #[test]
    fn float_values_match_exact() {
        for n in 0..=12u32 {
            let e = hermite_normalized(n);
            for &x in &[0.0, 0.3, 1.7, -2.2] {
                let v = hermite_values(12, x)[n as usize];
                assert!((v - e.eval_f64(x)).abs() < 1e-9 * (1.0 + v.abs()), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn pair_for_gaussian() {
        let c = CoefficientVector::new([(0, 0.75)]).unwrap();
        let pair = build_pair(&c, 64).unwrap();
        assert_eq!(pair.p, Polynomial::constant(Rational::new(3.into(), 4.into()), Var::Rho));
        assert_eq!(pair.q, pair.p.clone().with_var(Var::Sigma));
    }

    #[test]
    fn pair_for_mixed_parity() {
        let c = CoefficientVector::new([(0, 0.5), (2, 0.25), (4, -0.125)]).unwrap();
        let pair = build_pair(&c, 64).unwrap();
        let (s2, s6) = (2f64.sqrt(), 6f64.sqrt());
        // P = ψ0 + ψ2(2ρ-1)/√2 + ψ4(4ρ²-12ρ+3)/(2√6)
        let expect_p = [
            0.5 - 0.25 / s2 + 3.0 * -0.125 / (2.0 * s6),
            0.25 * 2.0 / s2 - 12.0 * -0.125 / (2.0 * s6),
            4.0 * -0.125 / (2.0 * s6),
        ];
        let expect_q = [
            0.5 + 0.25 / s2 + 3.0 * -0.125 / (2.0 * s6),
            -0.25 * 2.0 / s2 - 12.0 * -0.125 / (2.0 * s6),
            4.0 * -0.125 / (2.0 * s6),
        ];
        for (got, want) in pair.p.to_f64_coeffs().iter().zip(expect_p) {
            assert!((got - want).abs() < 1e-15);
        }
        for (got, want) in pair.q.to_f64_coeffs().iter().zip(expect_q) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(pair.q.var(), Var::Sigma);
    }

    #[test]
    fn pair_with_top_order_twelve() {
        let c = CoefficientVector::new([(0, 0.1), (4, 0.2), (8, 0.3), (12, 0.4)]).unwrap();
        let pair = build_pair(&c, 64).unwrap();
        assert_eq!(pair.p.degree(), Some(6));
        assert_eq!(pair.q, pair.p.clone().with_var(Var::Sigma));
        let lead = pair.p.to_f64_coeffs()[6];
        let want = 0.4 * 64.0 / (1440.0 * 231f64.sqrt());
        assert!((lead - want).abs() < 1e-15);
    }

    #[test]
    fn odd_orders_rejected() {
        assert_eq!(CoefficientVector::new([(3, 1.0)]).unwrap_err(), BasisError::OddOrder(3));
        assert!(CoefficientVector::new([(2, f64::NAN)]).is_err());
    }

    #[test]
    fn second_derivative_of_gaussian() {
        let c = CoefficientVector::new([(0, 1.0)]).unwrap();
        assert_eq!(second_derivative_core(&c, 64).unwrap(), Polynomial::from_ints(&[-1, 1], Var::Rho));
        let zero = CoefficientVector::new([(0, 0.0)]).unwrap();
        assert!(second_derivative_core(&zero, 64).unwrap().is_zero());
    }

    #[test]
    fn sigma_derivative_examples() {
        let one = Polynomial::one(Var::Sigma);
        assert_eq!(sigma_derivative(&one), Polynomial::from_ratios(&[(-1, 2)], Var::Sigma));
        let s = Polynomial::from_ints(&[0, 1], Var::Sigma);
        assert_eq!(sigma_derivative(&s), Polynomial::from_ratios(&[(1, 1), (-1, 2)], Var::Sigma));
    }

    #[test]
    fn state_values() {
        let g = CoefficientVector::new([(0, 1.0)]).unwrap();
        assert!((eval_state(&g, 0.0) - PI.powf(-0.25)).abs() < 1e-15);
        let h4 = CoefficientVector::new([(4, 1.0)]).unwrap();
        let want = PI.powf(-0.25) * 3.0 / (2.0 * 6f64.sqrt());
        assert!((eval_state(&h4, 0.0) - want).abs() < 1e-15);
        let h2 = CoefficientVector::new([(2, 1.0)]).unwrap();
        assert!((eval_partner(&h2, 0.7) + eval_state(&h2, 0.7)).abs() < 1e-15);
    }

    #[test]
    fn bracket_multipliers_round_trip() {
        let c = from_bracket_multipliers(&[(0, 0.5), (4, 0.01)]).unwrap();
        // ψ = e^{-r²/2}[0.5 + 0.01(4r⁴-12r²+3)]
        for &x in &[0.0f64, 0.8, 2.5] {
            let want = (-0.5 * x * x).exp() * (0.5 + 0.01 * (4.0 * x.powi(4) - 12.0 * x * x + 3.0));
            assert!((eval_state(&c, x) - want).abs() < 1e-14);
        }
    }
}
