//! Feasibility maps over coefficient spheres.
//!
//! A mixture on three orders is parametrised by a half 2-sphere `(α, β)`, a
//! mixture on four orders by a 3-sphere `(α, β, γ)` explored in cuts of fixed
//! `γ`. Each grid cell is classified exactly: the real coefficients are
//! snapped to dyadic rationals and every constraint polynomial goes through a
//! Sturm count.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hermite::{self, BasisError, CoefficientVector};
use crate::laguerre::{self, RadialCoefficientVector};
use crate::polycore::{
    log2_abs, log2_abs_rational, rational_from_f64, sylvester_resultant, PolyError, Polynomial, Rational,
};
use crate::sturm::{sign_variations_of, Point, SturmError, SturmSequence};

pub mod output;

/// Default dyadic snapping precision, in bits.
pub const DEFAULT_SNAP_BITS: u32 = 64;
/// Cells whose normalised resultant or start value falls below `2^-BORDER_BITS` are flagged.
pub const BORDER_BITS: f64 = 40.0;
/// Class of a cell where a constraint fails without any root: the sign is wrong everywhere.
pub const CLASS_WRONG_SIGN: u8 = 255;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("angle {name} = {value} outside its range {range}")]
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("{angles} angles cannot parametrise {orders} orders")]
    DimensionMismatch { angles: usize, orders: usize },
    #[error("invalid axis: {0}")]
    InvalidAxis(String),
    #[error("constraint set is empty")]
    EmptyConstraints,
    #[error("constraint threshold must be positive and finite, got {0}")]
    BadThreshold(f64),
    #[error("orders must be distinct and nonempty")]
    BadOrders,
    #[error("need at least two γ cuts to bisect: {0}")]
    Bisection(String),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Sturm(#[from] SturmError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Hermite,
    Laguerre,
}

/// A sign condition on one polynomial over a half-line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    /// `P > 0` on `ρ ≥ 0`: ψ positive.
    PositivityP,
    /// `Q > 0` on `σ ≥ 0`: φ positive.
    PositivityQ,
    /// `Q' - Q/2 < 0` on `σ ≥ 0`: φ decreasing on `s ≥ 0`.
    MonotonePhi,
    /// `d²ψ/dr² > 0` for `r² ≥ rc2`.
    ConvexPsi { rc2: f64 },
    /// `d³ψ/dr³ < 0` for `r² ≥ rt2`.
    ThirdDerivNegative { rt2: f64 },
}

impl Constraint {
    pub fn name(&self) -> &'static str {
        match self {
            Constraint::PositivityP => "positivity_p",
            Constraint::PositivityQ => "positivity_q",
            Constraint::MonotonePhi => "monotone_phi",
            Constraint::ConvexPsi { .. } => "convex_psi",
            Constraint::ThirdDerivNegative { .. } => "third_deriv_negative",
        }
    }

    /// Sign the constraint polynomial must keep on its half-line.
    pub fn wanted_sign(&self) -> i8 {
        match self {
            Constraint::PositivityP | Constraint::PositivityQ | Constraint::ConvexPsi { .. } => 1,
            Constraint::MonotonePhi | Constraint::ThirdDerivNegative { .. } => -1,
        }
    }

    fn threshold(&self) -> Option<f64> {
        match *self {
            Constraint::ConvexPsi { rc2 } => Some(rc2),
            Constraint::ThirdDerivNegative { rt2 } => Some(rt2),
            _ => None,
        }
    }
}

/// Nonempty ordered list of constraints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Constraint>", into = "Vec<Constraint>")]
pub struct ConstraintSet(Vec<Constraint>);

impl ConstraintSet {
    pub fn new(constraints: Vec<Constraint>) -> Result<Self, DomainError> {
        if constraints.is_empty() {
            return Err(DomainError::EmptyConstraints);
        }
        for c in &constraints {
            if let Some(t) = c.threshold() {
                if !(t.is_finite() && t > 0.0) {
                    return Err(DomainError::BadThreshold(t));
                }
            }
        }
        Ok(ConstraintSet(constraints))
    }

    pub fn as_slice(&self) -> &[Constraint] {
        &self.0
    }
}

impl TryFrom<Vec<Constraint>> for ConstraintSet {
    type Error = DomainError;

    fn try_from(v: Vec<Constraint>) -> Result<Self, Self::Error> {
        ConstraintSet::new(v)
    }
}

impl From<ConstraintSet> for Vec<Constraint> {
    fn from(c: ConstraintSet) -> Self {
        c.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    /// `−π < α ≤ π`, `0 ≤ β ≤ π/2`.
    S2 { alpha: f64, beta: f64 },
    /// `−π/2 < α ≤ π/2`, `−π < β ≤ π`, `0 ≤ γ ≤ π/2`.
    S3 { alpha: f64, beta: f64, gamma: f64 },
}

impl SpherePoint {
    pub fn from_angles(angles: &[f64]) -> Result<Self, DomainError> {
        match *angles {
            [alpha, beta] => Ok(SpherePoint::S2 { alpha, beta }),
            [alpha, beta, gamma] => Ok(SpherePoint::S3 { alpha, beta, gamma }),
            _ => Err(DomainError::DimensionMismatch {
                angles: angles.len(),
                orders: angles.len() + 1,
            }),
        }
    }

    fn dims(&self) -> usize {
        match self {
            SpherePoint::S2 { .. } => 2,
            SpherePoint::S3 { .. } => 3,
        }
    }
}

fn check(name: &'static str, value: f64, lo: f64, lo_open: bool, hi: f64, range: &'static str) -> Result<(), DomainError> {
    let above = if lo_open { value > lo } else { value >= lo };
    if value.is_finite() && above && value <= hi {
        Ok(())
    } else {
        Err(DomainError::AngleOutOfRange { name, value, range })
    }
}

/// Unit-norm coefficients for the given sphere point, in order of `orders`.
///
/// The top angle may sit exactly at 0 (top coefficient vanishes); such
/// degenerate slices are accepted and reported by [`CellRecord::degenerate`].
pub fn sphere_to_coeffs(pt: &SpherePoint, orders: &[u32]) -> Result<Vec<f64>, DomainError> {
    if orders.len() != pt.dims() + 1 {
        return Err(DomainError::DimensionMismatch {
            angles: pt.dims(),
            orders: orders.len(),
        });
    }
    match *pt {
        SpherePoint::S2 { alpha, beta } => {
            check("alpha", alpha, -PI, true, PI, "(-π, π]")?;
            check("beta", beta, 0.0, false, FRAC_PI_2, "[0, π/2]")?;
            let (sa, ca) = alpha.sin_cos();
            let (sb, cb) = beta.sin_cos();
            Ok(vec![ca * cb, sa * cb, sb])
        }
        SpherePoint::S3 { alpha, beta, gamma } => {
            check("alpha", alpha, -FRAC_PI_2, true, FRAC_PI_2, "(-π/2, π/2]")?;
            check("beta", beta, -PI, true, PI, "(-π, π]")?;
            check("gamma", gamma, 0.0, false, FRAC_PI_2, "[0, π/2]")?;
            let (sa, ca) = alpha.sin_cos();
            let (sb, cb) = beta.sin_cos();
            let (sg, cg) = gamma.sin_cos();
            Ok(vec![ca * cb * cg, sa * cb * cg, sb * cg, sg])
        }
    }
}

/// Coefficients attached to the basis they expand on.
#[derive(Clone, Debug, PartialEq)]
pub enum Mixture {
    Hermite(CoefficientVector),
    Laguerre(RadialCoefficientVector),
}

impl Mixture {
    pub fn new(basis: BasisKind, orders: &[u32], values: &[f64]) -> Result<Self, BasisError> {
        Ok(match basis {
            BasisKind::Hermite => Mixture::Hermite(CoefficientVector::from_orders(orders, values)?),
            BasisKind::Laguerre => Mixture::Laguerre(RadialCoefficientVector::from_orders(orders, values)?),
        })
    }

    /// Sampled `ψ(r)`.
    pub fn eval_state(&self, r: f64) -> f64 {
        match self {
            Mixture::Hermite(c) => hermite::eval_state(c, r),
            Mixture::Laguerre(c) => laguerre::eval_radial_state(c, r),
        }
    }

    /// Sampled transform partner `φ(s)`, from the eigenvalue bookkeeping.
    pub fn eval_partner(&self, s: f64) -> f64 {
        match self {
            Mixture::Hermite(c) => hermite::eval_partner(c, s),
            Mixture::Laguerre(c) => laguerre::eval_radial_partner(c, s),
        }
    }
}

/// One constraint reduced to "`poly` keeps sign `wanted_sign` on `[start, ∞)`".
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintPoly {
    pub poly: Polynomial,
    pub start: Rational,
    pub wanted_sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintOutcome {
    /// Distinct roots in `[start, ∞)`.
    pub roots: u32,
    pub sign_at_start: i8,
    pub satisfied: bool,
    /// A repeated root or a start value numerically close to a root.
    pub near_border: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub outcomes: Vec<ConstraintOutcome>,
    /// 0: every constraint holds; k: largest root count among failing
    /// constraints; [`CLASS_WRONG_SIGN`]: a constraint fails with no root.
    pub class: u8,
    pub boundary_uncertain: bool,
    /// The top-order coefficient is exactly zero.
    pub degenerate: bool,
}

impl CellRecord {
    pub fn feasible(&self) -> bool {
        self.class == 0
    }
}

/// What to classify; everything except the coefficients themselves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub basis: BasisKind,
    pub orders: Vec<u32>,
    pub constraints: ConstraintSet,
    pub snap_bits: u32,
}

impl Problem {
    pub fn new(
        basis: BasisKind,
        orders: Vec<u32>,
        constraints: ConstraintSet,
        snap_bits: u32,
    ) -> Result<Self, DomainError> {
        let mut sorted = orders.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if orders.is_empty() || sorted.len() != orders.len() {
            return Err(DomainError::BadOrders);
        }
        if basis == BasisKind::Hermite {
            if let Some(&n) = orders.iter().find(|&&n| n % 2 == 1) {
                return Err(BasisError::OddOrder(n).into());
            }
        }
        if !(1..=1000).contains(&snap_bits) {
            return Err(PolyError::SnapBits(snap_bits).into());
        }
        Ok(Problem {
            basis,
            orders,
            constraints,
            snap_bits,
        })
    }

    pub fn mixture(&self, values: &[f64]) -> Result<Mixture, DomainError> {
        if values.len() != self.orders.len() {
            return Err(DomainError::DimensionMismatch {
                angles: values.len(),
                orders: self.orders.len(),
            });
        }
        Ok(Mixture::new(self.basis, &self.orders, values)?)
    }

    /// Upper bound on the root count of any constraint polynomial.
    pub fn max_root_count(&self) -> u32 {
        let top = self.orders.iter().copied().max().unwrap_or(0);
        let deg_p = match self.basis {
            BasisKind::Hermite => top / 2,
            BasisKind::Laguerre => top,
        };
        let raises = self.constraints.as_slice().iter().any(|c| {
            matches!(c, Constraint::ConvexPsi { .. } | Constraint::ThirdDerivNegative { .. })
        });
        deg_p + u32::from(raises)
    }

    /// Build the exact constraint polynomials for explicit coefficients.
    pub fn constraint_polys(&self, values: &[f64]) -> Result<Vec<ConstraintPoly>, DomainError> {
        let mixture = self.mixture(values)?;
        let bits = self.snap_bits;
        let pair = match &mixture {
            Mixture::Hermite(c) => hermite::build_pair(c, bits)?,
            Mixture::Laguerre(c) => laguerre::build_pair_2d(c, bits)?,
        };
        let mut out = Vec::with_capacity(self.constraints.as_slice().len());
        for c in self.constraints.as_slice() {
            let (poly, start) = match *c {
                Constraint::PositivityP => (pair.p.clone(), Rational::zero()),
                Constraint::PositivityQ => (pair.q.clone(), Rational::zero()),
                Constraint::MonotonePhi => (hermite::sigma_derivative(&pair.q), Rational::zero()),
                Constraint::ConvexPsi { rc2 } => {
                    let poly = match &mixture {
                        Mixture::Hermite(c) => hermite::second_derivative_core(c, bits)?,
                        Mixture::Laguerre(c) => laguerre::second_derivative_core_2d(c, bits)?,
                    };
                    (poly, rational_from_f64(rc2)?)
                }
                Constraint::ThirdDerivNegative { rt2 } => {
                    let poly = match &mixture {
                        Mixture::Hermite(c) => {
                            let m = hermite::mixture_in_r(c, bits, false)?;
                            crate::weight::derivative_core(&m, 3)?
                        }
                        Mixture::Laguerre(c) => laguerre::third_derivative_core(c, bits)?,
                    };
                    (poly, rational_from_f64(rt2)?)
                }
            };
            out.push(ConstraintPoly {
                poly,
                start,
                wanted_sign: c.wanted_sign(),
            });
        }
        Ok(out)
    }

    /// Classify explicit coefficients (aligned with `orders`).
    pub fn classify_values(&self, values: &[f64]) -> Result<CellRecord, DomainError> {
        let polys = self.constraint_polys(values)?;
        let mut outcomes = Vec::with_capacity(polys.len());
        for cp in &polys {
            outcomes.push(evaluate(cp)?);
        }
        let degenerate = values.last().is_some_and(|&v| v == 0.0);
        Ok(assemble(outcomes, degenerate))
    }
}

fn evaluate(cp: &ConstraintPoly) -> Result<ConstraintOutcome, DomainError> {
    match cp.poly.degree() {
        None => {
            return Ok(ConstraintOutcome {
                roots: 0,
                sign_at_start: 0,
                satisfied: false,
                near_border: true,
            })
        }
        Some(0) => {
            let s = cp.poly.sign_at(&cp.start);
            return Ok(ConstraintOutcome {
                roots: 0,
                sign_at_start: s,
                satisfied: s == cp.wanted_sign,
                near_border: false,
            });
        }
        Some(_) => {}
    }
    let f = cp.poly.primitive();
    let seq = SturmSequence::normalized(&f)?;
    let at = Point::Finite(cp.start.clone());
    let signs = seq.signs_at(&at);
    // the chain head is F itself unless repeated roots were divided out
    let sign_at_start = if seq.squarefree_flag() { f.sign_at(&cp.start) } else { signs[0] };
    let count = sign_variations_of(&signs).abs_diff(seq.sign_variations(&Point::PosInf));
    let roots = u32::try_from(count).unwrap_or(u32::MAX) + u32::from(sign_at_start == 0);
    let log_res = seq.derivative_resultant_log2().expect("content-normalised chain");
    let m = border_margins(&f, &cp.start, log_res);
    Ok(ConstraintOutcome {
        roots,
        sign_at_start,
        satisfied: roots == 0 && sign_at_start == cp.wanted_sign,
        near_border: seq.squarefree_flag() || m.separation < -BORDER_BITS || m.start < -BORDER_BITS,
    })
}

/// Scale-free distances (in bits) of a constraint polynomial from a change
/// in its root count on `[start, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BorderMargins {
    /// `log2 |res(F, F')| - (2d-1) log2 |lc F|`, i.e. `log2 Π (r_i - r_j)²`:
    /// very negative when two roots are about to merge.
    pub separation: f64,
    /// `log2 |F(start)| - log2 max|F| - d log2 max(1, |start|)`:
    /// very negative when a root sits close to the start point.
    pub start: f64,
}

/// Margins of `p` given `log2 |res(F, F')|` for its primitive form `F`.
pub fn border_margins(p: &Polynomial, start: &Rational, log_res: f64) -> BorderMargins {
    let d = p.degree().unwrap_or(0);
    if d == 0 {
        return BorderMargins {
            separation: f64::INFINITY,
            start: f64::INFINITY,
        };
    }
    let f = if p.content().is_one() { p.clone() } else { p.primitive() };
    let log_max = f
        .coeffs()
        .iter()
        .map(|c| log2_abs(c.numer()))
        .fold(f64::NEG_INFINITY, f64::max);
    let log_lead = f.leading().map_or(f64::NEG_INFINITY, |c| log2_abs(c.numer()));
    let start_mag = if start.abs() > Rational::one() {
        log2_abs_rational(start)
    } else {
        0.0
    };
    BorderMargins {
        separation: log_res - (2 * d - 1) as f64 * log_lead,
        start: log2_abs_rational(&f.eval(start)) - log_max - d as f64 * start_mag,
    }
}

/// Whether `p` is within `2^-BORDER_BITS` of a root-count change on `[start, ∞)`.
pub fn near_border(p: &Polynomial, start: &Rational) -> Result<bool, DomainError> {
    if p.is_zero() {
        return Ok(true);
    }
    if p.is_constant() {
        return Ok(false);
    }
    let f = p.primitive();
    let res = sylvester_resultant(&f, &f.derivative())?;
    let m = border_margins(p, start, log2_abs_rational(&res));
    Ok(res.is_zero() || m.separation < -BORDER_BITS || m.start < -BORDER_BITS)
}

fn assemble(outcomes: Vec<ConstraintOutcome>, degenerate: bool) -> CellRecord {
    let failing: Vec<_> = outcomes.iter().filter(|o| !o.satisfied).collect();
    let class = if failing.is_empty() {
        0
    } else {
        let worst = failing.iter().map(|o| o.roots).max().unwrap_or(0);
        if worst == 0 {
            CLASS_WRONG_SIGN
        } else {
            worst.min(u32::from(CLASS_WRONG_SIGN) - 1) as u8
        }
    };
    let boundary_uncertain = outcomes.iter().any(|o| o.near_border);
    CellRecord {
        outcomes,
        class,
        boundary_uncertain,
        degenerate,
    }
}

/// Classify one sphere point.
pub fn classify_point(problem: &Problem, pt: &SpherePoint) -> Result<CellRecord, DomainError> {
    let values = sphere_to_coeffs(pt, &problem.orders)?;
    problem.classify_values(&values)
}

/// Uniform axis sampled at cell centres.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64, n: usize) -> Self {
        AxisRange { lo, hi, n }
    }

    pub fn center(&self, i: usize) -> f64 {
        if self.n == 1 {
            return 0.5 * (self.lo + self.hi);
        }
        self.lo + (i as f64 + 0.5) * (self.hi - self.lo) / self.n as f64
    }

    fn validate(&self, name: &str) -> Result<(), DomainError> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo > self.hi {
            return Err(DomainError::InvalidAxis(format!("{name}: bad range [{}, {}]", self.lo, self.hi)));
        }
        let point_axis = self.lo == self.hi && self.n == 1;
        if !point_axis && (self.n < 2 || self.lo == self.hi) {
            return Err(DomainError::InvalidAxis(format!(
                "{name}: need resolution >= 2 over a nonempty range (or a single point)"
            )));
        }
        Ok(())
    }
}

/// Grid over `(α, β)`, optionally at fixed `γ` for four-order mixtures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub alpha: AxisRange,
    pub beta: AxisRange,
    pub gamma: Option<f64>,
}

impl MapSpec {
    /// Full parameter range of the sphere appropriate for `n_orders`.
    pub fn full(n_orders: usize, res: usize, gamma: Option<f64>) -> Self {
        if n_orders == 4 {
            MapSpec {
                alpha: AxisRange::new(-FRAC_PI_2, FRAC_PI_2, res),
                beta: AxisRange::new(-PI, PI, res),
                gamma,
            }
        } else {
            MapSpec {
                alpha: AxisRange::new(-PI, PI, res),
                beta: AxisRange::new(0.0, FRAC_PI_2, res),
                gamma: None,
            }
        }
    }

    pub fn point(&self, i: usize, j: usize) -> SpherePoint {
        let (alpha, beta) = (self.alpha.center(i), self.beta.center(j));
        match self.gamma {
            Some(gamma) => SpherePoint::S3 { alpha, beta, gamma },
            None => SpherePoint::S2 { alpha, beta },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainMap {
    pub problem: Problem,
    pub spec: MapSpec,
    /// Row-major, row `j` holds `β = spec.beta.center(j)`.
    pub cells: Vec<CellRecord>,
    /// Some cell sits on a slice where the top coefficient vanishes.
    pub degenerate: bool,
}

impl DomainMap {
    pub fn width(&self) -> usize {
        self.spec.alpha.n
    }

    pub fn height(&self) -> usize {
        self.spec.beta.n
    }

    pub fn cell(&self, i: usize, j: usize) -> &CellRecord {
        &self.cells[j * self.width() + i]
    }

    pub fn classes(&self) -> Vec<u8> {
        self.cells.iter().map(|c| c.class).collect()
    }

    pub fn feasible_count(&self) -> usize {
        self.cells.iter().filter(|c| c.feasible()).count()
    }
}

/// Classify every cell centre of `spec`; cells are independent and run in parallel.
pub fn scan_map(problem: &Problem, spec: &MapSpec) -> Result<DomainMap, DomainError> {
    spec.alpha.validate("alpha")?;
    spec.beta.validate("beta")?;
    let sphere_dims = if spec.gamma.is_some() { 3 } else { 2 };
    if problem.orders.len() != sphere_dims + 1 {
        return Err(DomainError::DimensionMismatch {
            angles: sphere_dims,
            orders: problem.orders.len(),
        });
    }
    // corner centres carry the extreme angles; reject bad ranges up front
    let (w, h) = (spec.alpha.n, spec.beta.n);
    for (i, j) in [(0, 0), (w - 1, h - 1)] {
        sphere_to_coeffs(&spec.point(i, j), &problem.orders)?;
    }
    let cells = (0..w * h)
        .into_par_iter()
        .map(|k| classify_point(problem, &spec.point(k % w, k / w)))
        .collect::<Result<Vec<_>, _>>()?;
    let degenerate = cells.iter().any(|c| c.degenerate);
    Ok(DomainMap {
        problem: problem.clone(),
        spec: *spec,
        cells,
        degenerate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionStats {
    pub total: usize,
    pub class_counts: BTreeMap<u8, usize>,
    pub feasible: usize,
    /// `[α_lo, α_hi, β_lo, β_hi]` over feasible cell centres.
    pub feasible_bbox: Option<[f64; 4]>,
    pub boundary_uncertain: usize,
}

pub fn region_stats(map: &DomainMap) -> RegionStats {
    let mut class_counts = BTreeMap::new();
    let mut bbox: Option<[f64; 4]> = None;
    let mut uncertain = 0;
    for j in 0..map.height() {
        for i in 0..map.width() {
            let cell = map.cell(i, j);
            *class_counts.entry(cell.class).or_insert(0) += 1;
            uncertain += usize::from(cell.boundary_uncertain);
            if cell.feasible() {
                let (a, b) = (map.spec.alpha.center(i), map.spec.beta.center(j));
                bbox = Some(match bbox {
                    None => [a, a, b, b],
                    Some([a0, a1, b0, b1]) => [a0.min(a), a1.max(a), b0.min(b), b1.max(b)],
                });
            }
        }
    }
    RegionStats {
        total: map.cells.len(),
        feasible: class_counts.get(&0).copied().unwrap_or(0),
        class_counts,
        feasible_bbox: bbox,
        boundary_uncertain: uncertain,
    }
}

/// Bisect on `γ` for the cut where the feasible region disappears.
///
/// Requires feasible cells at `lo` and none at `hi`; returns the final
/// bracket `(last γ with feasible cells, first γ without)`.
pub fn feasible_gamma_threshold(
    problem: &Problem,
    alpha: AxisRange,
    beta: AxisRange,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<(f64, f64), DomainError> {
    let has = |g: f64| -> Result<bool, DomainError> {
        let spec = MapSpec {
            alpha,
            beta,
            gamma: Some(g),
        };
        Ok(scan_map(problem, &spec)?.feasible_count() > 0)
    };
    if !has(lo)? {
        return Err(DomainError::Bisection(format!("no feasible cell at γ = {lo}")));
    }
    if has(hi)? {
        return Err(DomainError::Bisection(format!("feasible cells remain at γ = {hi}")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if has(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}
