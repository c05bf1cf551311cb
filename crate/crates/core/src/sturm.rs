//! Sturm chains and exact real-root counting.
//!
//! For a square-free `p` the number of distinct real roots in `(a, b]` is
//! `V(a) - V(b)`, where `V(x)` counts sign changes along the chain with zeros
//! skipped. A root exactly at `a` is excluded and one exactly at `b` included,
//! which is why [`count_from`] adds an explicit zero test at the left end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polycore::{sign_of, PolyError, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SturmError {
    #[error("Sturm chain needs a nonconstant polynomial")]
    Constant,
    #[error("the zero polynomial has no root count")]
    ZeroPolynomial,
    #[error("empty interval: lower end is not below upper end")]
    EmptyInterval,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// An evaluation point, possibly at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Point {
    pub fn zero() -> Self {
        Point::Finite(Rational::zero())
    }

    fn less_than(&self, other: &Point) -> bool {
        match (self, other) {
            (Point::NegInf, Point::NegInf) | (Point::PosInf, _) => false,
            (Point::NegInf, _) | (_, Point::PosInf) => true,
            (Point::Finite(_), Point::NegInf) => false,
            (Point::Finite(a), Point::Finite(b)) => a < b,
        }
    }
}

/// How remainders are scaled while the chain is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Plain negated Euclidean remainders.
    Exact,
    /// Every element divided by its (positive) content; signs are unchanged.
    Content,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmSequence {
    chain: Vec<Polynomial>,
    /// Integer copies of `chain` for fast sign evaluation (content mode only).
    ints: Option<Vec<IntPoly>>,
    squarefree_flag: bool,
    source_degree: usize,
    derivative_resultant: Option<Fraction>,
}

fn remainder_chain(p: &Polynomial) -> Result<Vec<Polynomial>, PolyError> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        let (_, rem) = chain[n - 2].divmod(&chain[n - 1])?;
        if rem.is_zero() {
            break;
        }
        chain.push(-&rem);
    }
    Ok(chain)
}

/// Integer coefficients, lowest power first, no trailing zeros.
type IntPoly = Vec<BigInt>;

fn trim(v: &mut IntPoly) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn make_primitive(v: &mut IntPoly) -> BigInt {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_one() && !g.is_zero() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
    g
}

fn int_derivative(a: &[BigInt]) -> IntPoly {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect()
}

/// `r` and `e` with `lc(b)^e · a = q·b + r`, `deg r < deg b`.
fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> (IntPoly, u32) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    let mut e = 0;
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, c) in b.iter().enumerate() {
            r[j + dr - db] -= &lr * c;
        }
        e += 1;
        trim(&mut r);
    }
    (r, e)
}

/// Sign of `p(x)` via the homogenised integer form `den^d · p(num/den)`.
fn int_sign_at(p: &[BigInt], x: &Rational) -> i8 {
    if x.is_zero() {
        return p.first().map_or(0, |c| c.signum().to_i8().unwrap_or(0));
    }
    let (num, den) = (x.numer(), x.denom());
    // Horner from the top: step k contributes c_k num^k den^(d-k)
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    for c in p.iter().rev() {
        acc = acc * num + c * &den_pow;
        den_pow *= den;
    }
    acc.signum().to_i8().unwrap_or(0)
}

/// Unreduced fraction `num / den` with `den > 0`; reducing is left to the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Fraction {
    num: BigInt,
    den: BigInt,
}

/// Primitive pseudo-remainder chain of the integer polynomial `a`, and
/// `res(a, a')` tracked through the Euclidean recurrence
/// `res(A, B) = (-1)^{mn} lc(B)^{m-k} res(B, A mod B)`.
fn int_chain(a: IntPoly) -> (Vec<IntPoly>, Fraction) {
    let m0 = a.len() - 1;
    let mut b = int_derivative(&a);
    let cb = make_primitive(&mut b);
    let mut num = num_traits::pow(cb, m0);
    let mut den = BigInt::one();
    let mut chain = vec![a, b];
    loop {
        let n_idx = chain.len();
        let (a, b) = (&chain[n_idx - 2], &chain[n_idx - 1]);
        let (m, n) = (a.len() - 1, b.len() - 1);
        if n == 0 {
            num *= num_traits::pow(b[0].clone(), m);
            break;
        }
        let (mut r, e) = pseudo_remainder(a, b);
        if r.is_empty() {
            num = BigInt::zero();
            break;
        }
        let k = r.len() - 1;
        let lb = &b[n];
        // next = -sign(lb)^e r / c = u (a mod b) with u = -|lb|^e / c
        let flip = !(lb.is_negative() && e % 2 == 1);
        let c = make_primitive(&mut r);
        if flip {
            for x in r.iter_mut() {
                *x = -&*x;
            }
        }
        // res(A, B) = (-1)^{mn} lb^{m-k} u^{-n} res(B, next)
        num *= num_traits::pow(lb.clone(), m - k) * num_traits::pow(c, n);
        den *= num_traits::pow(lb.abs(), e as usize * n);
        if (m * n + n) % 2 == 1 {
            num = -num;
        }
        chain.push(r);
    }
    (chain, Fraction { num, den })
}

fn to_poly(v: &IntPoly, var: crate::polycore::Var) -> Polynomial {
    Polynomial::new(v.iter().cloned().map(Rational::from_integer).collect(), var)
}

impl SturmSequence {
    /// Textbook chain `S₁ = p`, `S₂ = p'`, `S_m = -rem(S_{m-2}, S_{m-1})`.
    pub fn new(p: &Polynomial) -> Result<Self, SturmError> {
        Self::with_normalization(p, Normalization::Exact)
    }

    /// Chain with every element reduced to primitive integer form.
    pub fn normalized(p: &Polynomial) -> Result<Self, SturmError> {
        Self::with_normalization(p, Normalization::Content)
    }

    pub fn with_normalization(p: &Polynomial, norm: Normalization) -> Result<Self, SturmError> {
        let source_degree = match p.degree() {
            None => return Err(SturmError::ZeroPolynomial),
            Some(0) => return Err(SturmError::Constant),
            Some(d) => d,
        };
        match norm {
            Normalization::Exact => {
                let mut chain = remainder_chain(p)?;
                let last = chain.last().expect("at least p and p'");
                let mut squarefree_flag = false;
                if !last.is_constant() {
                    // the last element is gcd(p, p') up to scale
                    let (reduced, _) = p.divmod(last)?;
                    chain = remainder_chain(&reduced)?;
                    squarefree_flag = true;
                }
                Ok(SturmSequence {
                    chain,
                    ints: None,
                    squarefree_flag,
                    source_degree,
                    derivative_resultant: None,
                })
            }
            Normalization::Content => {
                let (mut ints, res) = int_chain(p.primitive_ints());
                let squarefree_flag = ints.last().is_some_and(|l| l.len() > 1);
                if squarefree_flag {
                    let g = to_poly(ints.last().expect("nonempty"), p.var());
                    let (reduced, _) = p.divmod(&g)?;
                    ints = int_chain(reduced.primitive_ints()).0;
                }
                Ok(SturmSequence {
                    chain: ints.iter().map(|v| to_poly(v, p.var())).collect(),
                    ints: Some(ints),
                    squarefree_flag,
                    source_degree,
                    derivative_resultant: Some(res),
                })
            }
        }
    }

    /// `res(F, F')` for `F` the primitive form of the source polynomial.
    /// Available for content-normalised chains, where it falls out of the
    /// remainder sequence; zero exactly when `F` has a repeated root.
    pub fn derivative_resultant(&self) -> Option<Rational> {
        self.derivative_resultant
            .as_ref()
            .map(|f| Rational::new(f.num.clone(), f.den.clone()))
    }

    /// `log2 |res(F, F')|` without reducing the fraction; `-inf` when zero.
    pub fn derivative_resultant_log2(&self) -> Option<f64> {
        self.derivative_resultant
            .as_ref()
            .map(|f| crate::polycore::log2_abs(&f.num) - crate::polycore::log2_abs(&f.den))
    }

    pub fn chain(&self) -> &[Polynomial] {
        &self.chain
    }

    /// Whether repeated roots forced a division by `gcd(p, p')`.
    pub fn squarefree_flag(&self) -> bool {
        self.squarefree_flag
    }

    pub fn source_degree(&self) -> usize {
        self.source_degree
    }

    /// Signs of every chain element at `x`.
    pub fn signs_at(&self, x: &Point) -> Vec<i8> {
        if let (Some(ints), Point::Finite(v)) = (&self.ints, x) {
            return ints.iter().map(|p| int_sign_at(p, v)).collect();
        }
        self.chain
            .iter()
            .map(|s| match x {
                Point::Finite(v) => s.sign_at(v),
                Point::PosInf => s.leading().map_or(0, sign_of),
                Point::NegInf => {
                    let lead = s.leading().map_or(0, sign_of);
                    if s.degree().unwrap_or(0) % 2 == 1 {
                        -lead
                    } else {
                        lead
                    }
                }
            })
            .collect()
    }

    pub fn sign_variations(&self, x: &Point) -> usize {
        sign_variations_of(&self.signs_at(x))
    }
}

/// Strict sign alternations in a sign list, zeros skipped.
pub fn sign_variations_of(signs: &[i8]) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for &s in signs.iter().filter(|&&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCount {
    pub lower: Point,
    pub upper: Point,
    /// Distinct real roots in `(lower, upper]`.
    pub count: usize,
    pub lower_is_root: bool,
    pub upper_is_root: bool,
    /// Repeated roots were present (a tangency in parameter space).
    pub repeated: bool,
}

fn is_root(p: &Polynomial, x: &Point) -> bool {
    matches!(x, Point::Finite(v) if p.eval(v).is_zero())
}

/// Distinct real roots of `p` in `(a, b]`.
pub fn count_roots(p: &Polynomial, a: &Point, b: &Point) -> Result<RootCount, SturmError> {
    if !a.less_than(b) {
        return Err(SturmError::EmptyInterval);
    }
    if p.is_zero() {
        return Err(SturmError::ZeroPolynomial);
    }
    let (count, repeated) = if p.is_constant() {
        (0, false)
    } else {
        let seq = SturmSequence::normalized(p)?;
        let (va, vb) = (seq.sign_variations(a), seq.sign_variations(b));
        (va.abs_diff(vb), seq.squarefree_flag())
    };
    Ok(RootCount {
        lower: a.clone(),
        upper: b.clone(),
        count,
        lower_is_root: is_root(p, a),
        upper_is_root: is_root(p, b),
        repeated,
    })
}

/// Result of counting on a closed half-line `[a, +∞)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfLineCount {
    /// Distinct real roots in `[a, +∞)`.
    pub roots: usize,
    /// Sign of `p(a)`.
    pub sign_at_start: i8,
    pub root_at_start: bool,
    pub repeated: bool,
}

/// Distinct real roots of `p` in `[a, +∞)`, plus the sign at `a`.
pub fn count_from(p: &Polynomial, a: &Rational) -> Result<HalfLineCount, SturmError> {
    let rc = count_roots(p, &Point::Finite(a.clone()), &Point::PosInf)?;
    Ok(HalfLineCount {
        roots: rc.count + usize::from(rc.lower_is_root),
        sign_at_start: p.sign_at(a),
        root_at_start: rc.lower_is_root,
        repeated: rc.repeated,
    })
}

/// Distinct roots in `[0, +∞)`: the positivity test in `ρ` or `σ`.
pub fn count_nonneg(p: &Polynomial) -> Result<usize, SturmError> {
    Ok(count_from(p, &Rational::zero())?.roots)
}

/// Distinct real roots on the whole line.
pub fn count_real(p: &Polynomial) -> Result<usize, SturmError> {
    Ok(count_roots(p, &Point::NegInf, &Point::PosInf)?.count)
}

/// Magnitude bound: all real roots lie in `(-B, B)` (Cauchy).
pub fn cauchy_bound(p: &Polynomial) -> Option<Rational> {
    let lead = p.leading()?.abs();
    let max = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    Some(Rational::from_integer(1.into()) + max / lead)
}
