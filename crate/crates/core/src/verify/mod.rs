//! Floating-point oracles, deliberately disjoint from the exact path.
//!
//! Transforms are computed by quadrature rather than by eigenvalue
//! bookkeeping, root counts by companion-matrix eigenvalues rather than Sturm
//! signs, derivatives by finite differences rather than weighted-derivative
//! cores.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hermite::{hermite_values, CoefficientVector};
use crate::laguerre::{laguerre_values, RadialCoefficientVector};
use crate::Polynomial;

pub mod suites;

/// Gauss-Hermite order used for the Fourier integral.
pub const FT_ORDER: usize = 96;
/// Truncation radius and panel count of the Hankel trapezoid.
pub const HANKEL_RMAX: f64 = 12.0;
pub const HANKEL_PANELS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("quadrature order {order} too low for truncation {truncation}")]
    OrderTooLow { order: usize, truncation: u32 },
    #[error("finite differences support orders 2 and 3, got {0}")]
    DerivativeOrder(u32),
    #[error("need at least {0} points")]
    TooFewPoints(usize),
    #[error("oracle needs a nonconstant polynomial")]
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureKind {
    /// `∫ f(t) e^{-t²} dt` over the line.
    GaussHermite,
    /// `∫ f(t) e^{-t} dt` over `[0, ∞)`; radial integrals after `t = r²`.
    GaussLaguerreRadial,
    /// Composite trapezoid on `[0, r_max]`, endpoints half-weighted.
    TrapezoidTruncated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl QuadratureRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Orthonormal polynomials of a Jacobi operator with zero diagonal offset
/// `a_k` and off-diagonal `b_k`, evaluated at `x` up to degree `n`.
fn orthonormal_values(n: usize, x: f64, p0: f64, a: impl Fn(usize) -> f64, b: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(p0);
    if n == 0 {
        return p;
    }
    p.push((x - a(0)) * p0 / b(1));
    for k in 1..n {
        let next = ((x - a(k)) * p[k] - b(k) * p[k - 1]) / b(k + 1);
        p.push(next);
    }
    p
}

/// Golub-Welsch nodes refined by Newton steps on `p_n`, with Christoffel
/// weights `1 / Σ_{k<n} p_k(x)²`, which stay accurate for tiny weights.
fn gauss_rule(n: usize, p0: f64, a: impl Fn(usize) -> f64 + Copy, b: impl Fn(usize) -> f64 + Copy) -> (Vec<f64>, Vec<f64>) {
    let jac = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            a(i)
        } else if i + 1 == j {
            b(j)
        } else if j + 1 == i {
            b(i)
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let p = orthonormal_values(n, *x, p0, a, b);
            let dp = orthonormal_derivative(n, *x, a, b, &p);
            if dp != 0.0 {
                let step = p[n] / dp;
                if step.is_finite() {
                    *x -= step;
                }
            }
        }
        let p = orthonormal_values(n - 1, *x, p0, a, b);
        weights.push(1.0 / p.iter().map(|v| v * v).sum::<f64>());
    }
    (nodes, weights)
}

/// `p_n'(x)` by differentiating the recurrence, given the values `p`.
fn orthonormal_derivative(
    n: usize,
    x: f64,
    a: impl Fn(usize) -> f64,
    b: impl Fn(usize) -> f64,
    p: &[f64],
) -> f64 {
    let mut d = vec![0.0; n + 1];
    if n == 0 {
        return 0.0;
    }
    d[1] = p[0] / b(1);
    for k in 1..n {
        d[k + 1] = (p[k] + (x - a(k)) * d[k] - b(k) * d[k - 1]) / b(k + 1);
    }
    d[n]
}

/// Gauss-Hermite rule for the weight `e^{-t²}`.
pub fn gauss_hermite(n: usize) -> QuadratureRule {
    let (nodes, weights) = gauss_rule(n, PI.powf(-0.25), |_| 0.0, |k| (k as f64 / 2.0).sqrt());
    QuadratureRule {
        kind: QuadratureKind::GaussHermite,
        nodes,
        weights,
        order: n,
    }
}

/// Gauss-Laguerre rule for the weight `e^{-t}` on `[0, ∞)`.
pub fn gauss_laguerre(n: usize) -> QuadratureRule {
    // monic-orthonormal Laguerre: a_k = 2k+1, b_k = k (sign flips do not matter)
    let (nodes, weights) = gauss_rule(n, 1.0, |k| 2.0 * k as f64 + 1.0, |k| k as f64);
    QuadratureRule {
        kind: QuadratureKind::GaussLaguerreRadial,
        nodes,
        weights,
        order: n,
    }
}

/// Composite trapezoid on `[0, r_max]` with `panels` intervals.
pub fn trapezoid(r_max: f64, panels: usize) -> QuadratureRule {
    let h = r_max / panels as f64;
    let nodes: Vec<f64> = (0..=panels).map(|k| k as f64 * h).collect();
    let weights = (0..=panels)
        .map(|k| if k == 0 || k == panels { 0.5 * h } else { h })
        .collect();
    QuadratureRule {
        kind: QuadratureKind::TrapezoidTruncated,
        nodes,
        weights,
        order: panels,
    }
}

fn default_hermite_rule() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_hermite(FT_ORDER))
}

fn default_trapezoid() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| trapezoid(HANKEL_RMAX, HANKEL_PANELS))
}

/// Bessel `J₀`: power series below 12, Hankel asymptotic series above.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < 12.0 {
        let q = -0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..80 {
            term *= q / (k * k) as f64;
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        return sum;
    }
    // P ~ 1 - a_2/x² + a_4/x⁴ - ..., Q ~ -a_1/x + a_3/x³ - ...,
    // a_k = (1·9·25···(2k-1)²) / (k! 8^k)
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60 {
        let term = a / x.powi(k);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        match k % 4 {
            0 => p += term,
            1 => q -= term,
            2 => p -= term,
            _ => q += term,
        }
        let m = (2 * k + 1) as f64;
        a *= m * m / (8.0 * (k + 1) as f64);
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `φ(s) = (2π)^{-1/2} ∫ ψ(r) cos(sr) dr` by Gauss-Hermite after `r = √2 t`.
pub fn numeric_ft(c: &CoefficientVector, s_grid: &[f64]) -> Result<Vec<f64>, VerifyError> {
    numeric_ft_with(default_hermite_rule(), c, s_grid)
}

pub fn numeric_ft_with(rule: &QuadratureRule, c: &CoefficientVector, s_grid: &[f64]) -> Result<Vec<f64>, VerifyError> {
    let big_n = c.truncation();
    if (big_n as usize) >= rule.order {
        return Err(VerifyError::OrderTooLow {
            order: rule.order,
            truncation: big_n,
        });
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    // polynomial part M(√2 t_k) of ψ, shared by every s
    let m: Vec<f64> = rule
        .nodes
        .iter()
        .map(|&t| {
            let hv = hermite_values(big_n, sqrt2 * t);
            c.entries().iter().map(|(&n, &v)| v * hv[n as usize]).sum()
        })
        .collect();
    let pref = PI.powf(-0.75);
    Ok(s_grid
        .iter()
        .map(|&s| {
            pref * rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .zip(&m)
                .map(|((&t, &w), &mk)| w * mk * (sqrt2 * s * t).cos())
                .sum::<f64>()
        })
        .collect())
}

/// `φ(s) = ∫₀^∞ ψ(r) J₀(sr) r dr` by the truncated trapezoid. The
/// integrand is odd in `r`, so the first Euler-Maclaurin correction
/// `h²/12 · ψ(0)` removes the `O(h²)` error and leaves `O(h⁴)`.
pub fn numeric_hankel(c: &RadialCoefficientVector, s_grid: &[f64]) -> Vec<f64> {
    let rule = default_trapezoid();
    let h = HANKEL_RMAX / HANKEL_PANELS as f64;
    let psi: Vec<f64> = rule
        .nodes
        .iter()
        .map(|&r| crate::laguerre::eval_radial_state(c, r))
        .collect();
    s_grid
        .iter()
        .map(|&s| {
            let t: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .zip(&psi)
                .map(|((&r, &w), &p)| w * p * bessel_j0(s * r) * r)
                .sum();
            t + h * h / 12.0 * psi[0]
        })
        .collect()
}

/// `max_{m,n ≤ n_max} |∫ u_m u_n - δ_mn|` for the even-and-odd Hermite functions.
pub fn hermite_orthonormality_error(n_max: u32, rule: &QuadratureRule) -> f64 {
    // ∫ u_m u_n dr = π^{-1/2} ∫ e^{-r²} H_m H_n dr
    let vals: Vec<Vec<f64>> = rule.nodes.iter().map(|&t| hermite_values(n_max, t)).collect();
    gram_error(n_max, &rule.weights, &vals, PI.powf(-0.5))
}

/// `max |∫ v_m v_n r dr - δ_mn|`; with `t = r²` this is `∫ e^{-t} core_m core_n dt`.
pub fn laguerre_orthonormality_error(n_max: u32, rule: &QuadratureRule) -> f64 {
    let vals: Vec<Vec<f64>> = rule.nodes.iter().map(|&t| laguerre_values(n_max, t)).collect();
    gram_error(n_max, &rule.weights, &vals, 1.0)
}

fn gram_error(n_max: u32, weights: &[f64], vals: &[Vec<f64>], scale: f64) -> f64 {
    let n = n_max as usize;
    let mut worst: f64 = 0.0;
    for a in 0..=n {
        for b in 0..=n {
            let g: f64 = weights.iter().zip(vals).map(|(&w, v)| w * v[a] * v[b]).sum::<f64>() * scale;
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g - target).abs());
        }
    }
    worst
}

/// Half-open or closed real interval; infinite ends allowed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn nonneg() -> Self {
        Interval {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn line() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn from(lo: f64) -> Self {
        Interval { lo, hi: f64::INFINITY }
    }
}

/// Companion-matrix root count on a closed interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCount {
    /// Distinct real roots in `[lo, hi]` after clustering.
    pub count: usize,
    /// Clustered real roots, ascending.
    pub real_roots: Vec<f64>,
    /// Smallest distance between any two eigenvalues.
    pub min_separation: f64,
    /// False when a root is near the real/complex tolerance, near an end of
    /// the interval, or clustered.
    pub confident: bool,
}

pub const IMAG_TOL: f64 = 1e-9;
pub const CLUSTER_TOL: f64 = 1e-6;

pub fn oracle_root_count(p: &Polynomial, interval: Interval) -> Result<OracleCount, VerifyError> {
    let c = p.to_f64_coeffs();
    let d = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(VerifyError::Constant),
    };
    let lead = c[d];
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -c[i] / lead;
    }
    let eig = comp.complex_eigenvalues();
    let zs: Vec<(f64, f64)> = eig.iter().map(|z| (z.re, z.im)).collect();
    let mut min_sep = f64::INFINITY;
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            let (dr, di) = (zs[i].0 - zs[j].0, zs[i].1 - zs[j].1);
            min_sep = min_sep.min((dr * dr + di * di).sqrt());
        }
    }
    let mut confident = true;
    let mut reals = Vec::new();
    for &(re, im) in &zs {
        let scale = re.hypot(im).max(1.0);
        if im.abs() <= IMAG_TOL * scale {
            reals.push(re);
        } else if im.abs() <= CLUSTER_TOL * scale {
            confident = false;
        }
    }
    reals.sort_by(f64::total_cmp);
    let mut clustered: Vec<f64> = Vec::new();
    for r in reals {
        match clustered.last() {
            Some(&last) if (r - last).abs() <= CLUSTER_TOL * last.abs().max(1.0) => confident = false,
            _ => clustered.push(r),
        }
    }
    let near = |x: f64, e: f64| e.is_finite() && (x - e).abs() <= CLUSTER_TOL * e.abs().max(1.0);
    if clustered.iter().any(|&r| near(r, interval.lo) || near(r, interval.hi)) {
        confident = false;
    }
    if min_sep <= CLUSTER_TOL {
        confident = false;
    }
    let inside: Vec<f64> = clustered
        .into_iter()
        .filter(|&r| r >= interval.lo && r <= interval.hi)
        .collect();
    Ok(OracleCount {
        count: inside.len(),
        real_roots: inside,
        min_separation: min_sep,
        confident,
    })
}

/// Comparison of computed values with references at a threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub quantity: String,
    pub computed: Vec<f64>,
    pub reference: Vec<f64>,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl OracleReport {
    /// Pass when the max absolute error is within `threshold`.
    pub fn compare(quantity: impl Into<String>, computed: Vec<f64>, reference: Vec<f64>, threshold: f64) -> Self {
        let mut abs: f64 = 0.0;
        let mut rel: f64 = 0.0;
        for (c, r) in computed.iter().zip(&reference) {
            let e = (c - r).abs();
            abs = abs.max(e);
            if *r != 0.0 {
                rel = rel.max(e / r.abs());
            }
        }
        let pass = computed.len() == reference.len() && abs <= threshold;
        OracleReport {
            quantity: quantity.into(),
            computed,
            reference,
            max_abs_error: abs,
            max_rel_error: rel,
            threshold,
            pass,
        }
    }

    /// One-sided check `value ≥ -threshold`; the error is the shortfall below zero.
    pub fn lower_bound(quantity: impl Into<String>, value: f64, threshold: f64) -> Self {
        let err = (-value).max(0.0);
        OracleReport {
            quantity: quantity.into(),
            computed: vec![value],
            reference: vec![0.0],
            max_abs_error: err,
            max_rel_error: err,
            threshold,
            pass: err <= threshold,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

/// Smallest eigenvalue of `φ(x_i - x_j)` over `trials` random point sets
/// of size `k` drawn from `[-spread, spread]`. Passes when it is `≥ -tol`.
pub fn gram_psd_check(
    phi: impl Fn(f64) -> f64,
    k: usize,
    trials: usize,
    spread: f64,
    tol: f64,
    seed: u64,
) -> Result<OracleReport, VerifyError> {
    if k < 2 {
        return Err(VerifyError::TooFewPoints(2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let xs: Vec<f64> = (0..k).map(|_| rng.gen_range(-spread..=spread)).collect();
        let g = DMatrix::from_fn(k, k, |i, j| phi(xs[i] - xs[j]));
        let g = (&g + g.transpose()) * 0.5;
        let min = SymmetricEigen::new(g).eigenvalues.min();
        worst = worst.min(min);
    }
    Ok(OracleReport::lower_bound("gram_min_eigenvalue", worst, tol))
}

/// Central finite difference of order 2 or 3, Richardson-extrapolated once.
///
/// Steps: `1e-4` for the second derivative, `1e-2` for the third, where the
/// `h^-3` rounding amplification would otherwise dominate.
pub fn finite_difference(f: impl Fn(f64) -> f64, r: f64, order: u32) -> Result<f64, VerifyError> {
    let stencil = |h: f64| -> f64 {
        match order {
            2 => (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h),
            _ => (f(r + 2.0 * h) - 2.0 * f(r + h) + 2.0 * f(r - h) - f(r - 2.0 * h)) / (2.0 * h * h * h),
        }
    };
    let h = match order {
        2 => 1e-4,
        3 => 1e-2,
        o => return Err(VerifyError::DerivativeOrder(o)),
    };
    let (coarse, fine) = (stencil(h), stencil(h / 2.0));
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Minimum of `f` on `n` equispaced samples of `[lo, hi]` and where it occurs.
pub fn sampled_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let mut best = (f64::INFINITY, lo);
    for k in 0..n {
        let x = if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
        let v = f(x);
        if v < best.0 {
            best = (v, x);
        }
    }
    best
}
