//! Exact dense univariate polynomials with rational coefficients.
//!
//! Everything downstream (basis construction and Sturm chains) runs
//! on this type, so every operation here is exact. Irrational normalisation
//! constants never enter a coefficient; they are carried as [`Radicand`]s.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Self-documenting tag for the indeterminate of a [`Polynomial`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    /// The position variable `r` (or `s` for the transform side before compression).
    R,
    /// `ρ = r²`.
    Rho,
    /// `σ = s²`.
    Sigma,
}

impl Var {
    pub fn symbol(self) -> &'static str {
        match self {
            Var::R => "r",
            Var::Rho => "ρ",
            Var::Sigma => "σ",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("variable mismatch: {0} vs {1}")]
    VarMismatch(Var, Var),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("resultant of a zero polynomial is undefined")]
    ZeroResultant,
    #[error("odd power {0} present, polynomial is not even")]
    OddPower(usize),
    #[error("expected an odd polynomial, found even power {0}")]
    EvenPower(usize),
    #[error("cannot snap non-finite value {0}")]
    NonFinite(f64),
    #[error("snap precision {0} bits out of range 1..=1000")]
    SnapBits(u32),
    #[error("radicand must be nonnegative")]
    NegativeRadicand,
}

/// Dense polynomial; `coeffs[i]` multiplies `x^i`. The highest stored
/// coefficient is never zero, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
    var: Var,
}

fn trim(coeffs: &mut Vec<Rational>) {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>, var: Var) -> Self {
        trim(&mut coeffs);
        Polynomial { coeffs, var }
    }

    pub fn zero(var: Var) -> Self {
        Polynomial { coeffs: Vec::new(), var }
    }

    pub fn constant(c: Rational, var: Var) -> Self {
        Self::new(vec![c], var)
    }

    pub fn one(var: Var) -> Self {
        Self::constant(Rational::one(), var)
    }

    /// `c · x^k`.
    pub fn monomial(c: Rational, k: usize, var: Var) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs, var)
    }

    /// Integer coefficients, lowest power first.
    pub fn from_ints(coeffs: &[i64], var: Var) -> Self {
        Self::new(
            coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(),
            var,
        )
    }

    /// Rational coefficients given as `(numerator, denominator)` pairs, lowest power first.
    pub fn from_ratios(coeffs: &[(i64, i64)], var: Var) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&(n, d)| Rational::new(n.into(), d.into()))
                .collect(),
            var,
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    /// `None` is the sentinel degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Horner evaluation, exact.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of `p(x)`.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign_of(&self.eval(x))
    }

    /// Floating-point Horner evaluation for plotting and oracles.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.to_f64_coeffs()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
            .collect();
        Self::new(coeffs, self.var)
    }

    fn check_var(&self, other: &Self) -> Result<(), PolyError> {
        if self.var == other.var {
            Ok(())
        } else {
            Err(PolyError::VarMismatch(self.var, other.var))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_var(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Ok(Self::new(coeffs, self.var))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_var(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Ok(Self::new(coeffs, self.var))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_var(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.var));
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(Self::new(coeffs, self.var))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect(), self.var)
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs, self.var)
    }

    /// Euclidean division: `self = q·divisor + rem` with `deg rem < deg divisor`.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self), PolyError> {
        self.check_var(divisor)?;
        let db = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let lead = divisor.coeffs[db].clone();
        let mut rem = self.coeffs.clone();
        let Some(da) = self.degree().filter(|&da| da >= db) else {
            return Ok((Self::zero(self.var), self.clone()));
        };
        let mut quot = vec![Rational::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let c = &rem[k + db] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        rem.truncate(db);
        Ok((Self::new(quot, self.var), Self::new(rem, self.var)))
    }

    /// Leading coefficient scaled to one; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    /// Positive rational `c` with `self / c` a primitive integer polynomial.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in &self.coeffs {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        Rational::new(num, den)
    }

    /// `self / content`: integer coefficients with unit gcd and the same sign.
    pub fn primitive(&self) -> Self {
        self.scale(&self.content().recip())
    }

    /// Integer coefficient vector of [`Polynomial::primitive`].
    pub fn primitive_ints(&self) -> Vec<BigInt> {
        self.primitive()
            .coeffs
            .iter()
            .map(|c| c.numer().clone())
            .collect()
    }

    /// `q` with `q(x²) = self(x)`; fails if any odd power is present.
    pub fn compress_even(&self, into: Var) -> Result<Self, PolyError> {
        if let Some((i, _)) = self
            .coeffs
            .iter()
            .enumerate()
            .find(|(i, c)| i % 2 == 1 && !c.is_zero())
        {
            return Err(PolyError::OddPower(i));
        }
        Ok(Self::new(self.coeffs.iter().step_by(2).cloned().collect(), into))
    }

    /// `q` with `x·q(x²) = self(x)`; fails if any even power is present.
    pub fn compress_odd(&self, into: Var) -> Result<Self, PolyError> {
        if let Some((i, _)) = self
            .coeffs
            .iter()
            .enumerate()
            .find(|(i, c)| i % 2 == 0 && !c.is_zero())
        {
            return Err(PolyError::EvenPower(i));
        }
        Ok(Self::new(
            self.coeffs.iter().skip(1).step_by(2).cloned().collect(),
            into,
        ))
    }

    /// Substitute `x → y²`, the inverse of [`Polynomial::compress_even`].
    pub fn expand_even(&self, into: Var) -> Self {
        let mut coeffs = Vec::with_capacity(2 * self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                coeffs.push(Rational::zero());
            }
            coeffs.push(c.clone());
        }
        Self::new(coeffs, into)
    }

    /// Largest coefficient magnitude, zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect(), self.var)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = mag.is_one();
            if !unit || i == 0 {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({}/{})", mag.numer(), mag.denom())?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{}", self.var, i)?,
            }
        }
        Ok(())
    }
}

/// Monic greatest common divisor over the rationals.
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, PolyError> {
    a.check_var(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::GcdOfZeros);
    }
    let (mut x, mut y) = (a.monic(), b.monic());
    while !y.is_zero() {
        let (_, r) = x.divmod(&y)?;
        x = y;
        y = r.monic();
    }
    Ok(x.monic())
}

/// Determinant of the Sylvester matrix of `a` (rows first) and `b`.
///
/// The matrix is cleared of denominators row-wise and reduced with Bareiss
/// fraction-free elimination, so every intermediate stays an exact integer.
pub fn sylvester_resultant(a: &Polynomial, b: &Polynomial) -> Result<Rational, PolyError> {
    a.check_var(b)?;
    let (m, n) = match (a.degree(), b.degree()) {
        (Some(m), Some(n)) => (m, n),
        _ => return Err(PolyError::ZeroResultant),
    };
    let (ia, la) = integer_row(a);
    let (ib, lb) = integer_row(b);
    let size = m + n;
    if size == 0 {
        return Ok(Rational::one());
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (k, c) in ia.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for j in 0..m {
        for (k, c) in ib.iter().rev().enumerate() {
            mat[n + j][j + k] = c.clone();
        }
    }
    let det = bareiss_determinant(mat);
    let scale = num_traits::pow(la, n) * num_traits::pow(lb, m);
    Ok(Rational::new(det, scale))
}

/// Integer coefficients of `l·p` where `l` is the lcm of the denominators.
fn integer_row(p: &Polynomial) -> (Vec<BigInt>, BigInt) {
    let l = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let row = p
        .coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    (row, l)
}

/// Exact determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_determinant(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
            mat[i][k] = BigInt::zero();
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[n - 1][n - 1]
}

pub fn sign_of(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: go through base-2 logarithms
        let l = log2_abs(x.numer()) - log2_abs(x.denom());
        let s = if x.is_negative() { -1.0 } else { 1.0 };
        s * l.exp2()
    })
}

/// Exact binary value of a finite float.
pub fn rational_from_f64(x: f64) -> Result<Rational, PolyError> {
    Rational::from_float(x).ok_or(PolyError::NonFinite(x))
}

/// Nearest multiple of `2^-bits` to `x`.
pub fn snap(x: f64, bits: u32) -> Result<Rational, PolyError> {
    if !(1..=1000).contains(&bits) {
        return Err(PolyError::SnapBits(bits));
    }
    if !x.is_finite() {
        return Err(PolyError::NonFinite(x));
    }
    let scaled = (x * 2f64.powi(bits as i32)).round();
    let num = BigInt::from_f64(scaled).ok_or(PolyError::NonFinite(x))?;
    Ok(Rational::new(num, BigInt::one() << bits))
}

/// `log2 |n|`, `-inf` for zero. Accurate to double precision for any size.
pub fn log2_abs(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().map_or(f64::INFINITY, f64::log2);
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().map_or(f64::INFINITY, f64::log2) + shift as f64
}

/// `log2 |x|` for a rational.
pub fn log2_abs_rational(x: &Rational) -> f64 {
    log2_abs(x.numer()) - log2_abs(x.denom())
}

/// The exact nonnegative number `√value`, kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Radicand {
    value: Rational,
}

impl Radicand {
    pub fn new(value: Rational) -> Result<Self, PolyError> {
        if value.is_negative() {
            return Err(PolyError::NegativeRadicand);
        }
        Ok(Radicand { value })
    }

    pub fn from_integer(n: BigInt) -> Result<Self, PolyError> {
        Self::new(Rational::from_integer(n))
    }

    /// The number under the root.
    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn mul(&self, other: &Radicand) -> Radicand {
        Radicand {
            value: &self.value * &other.value,
        }
    }

    pub fn div(&self, other: &Radicand) -> Result<Radicand, PolyError> {
        if other.value.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Radicand {
            value: &self.value / &other.value,
        })
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value).sqrt()
    }

    /// Write `√(p/q)` as `a·√b / q` with `b` square-free.
    pub fn simplified(&self) -> (BigInt, BigInt, BigInt) {
        let q = self.value.denom().clone();
        let pq = self.value.numer() * &q;
        let (a, b) = split_square(&pq);
        let g = a.gcd(&q);
        (a / &g, b, q / g)
    }
}

impl fmt::Display for Radicand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, q) = self.simplified();
        let head = match (a.is_one(), b.is_one()) {
            (_, true) => a.to_string(),
            (true, false) => format!("√{b}"),
            (false, false) => format!("{a}√{b}"),
        };
        if q.is_one() {
            f.write_str(&head)
        } else {
            write!(f, "{head}/{q}")
        }
    }
}

/// `n = a²·b` with `b` square-free (trial division, fine for factorial-sized inputs).
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let mut rest = n.abs();
    let mut a = BigInt::one();
    let mut b = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        a *= num_traits::pow(p.clone(), (e / 2) as usize);
        if e % 2 == 1 {
            b *= &p;
        }
        p += 1;
    }
    b *= rest;
    (a, b)
}
