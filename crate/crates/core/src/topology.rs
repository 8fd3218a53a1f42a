//! Subbase sets and topology comparisons for triple assignments.
//!
//! A sub-Moebius map induces a topology on its point set through the
//! subbase of all open alpha- and beta-balls
//!
//! ```text
//!   ball:        { x : d_A^side(x, y) < t }
//!   complement:  { x : d_A^side(x, y) > t }
//! ```
//!
//! over all scale triples `A`, centers `y` in the side's domain, and
//! positive radii `t`.  Complements are themselves balls after exchanging
//! the roles of the center and the remote point — the chart `(alpha,
//! omega, y)` turns `{ d_A^alpha(x, y) > t }` into a ball of radius
//! `lambda / t` centered at `omega` — so both kinds belong to the same
//! subbase.
//!
//! For a Gromov-product model the reference sets live at the basepoint
//! scale: `U`-sets `{ x : (x|y)_{A,o} > t }` built from the scaled
//! product
//!
//! ```text
//!   (x|y)_{A,o} = (x|y)_omega - (alpha|beta)_omega,
//!   (x|y)_omega = (x|y)_o - (x|omega)_o - (y|omega)_o,
//! ```
//!
//! and the equivalent balls of the inverted semi-metric `d_{A,o}(x, y) =
//! e^{-(x|y)_{A,o}}`.  Two quantitative sandwich estimates connect the
//! families: the basepoint sets are pinched between scaled `U`-sets with
//! an additive shift `c = 2 (y|omega)_o + |(alpha|beta)_omega| + h`, and
//! the map balls of a structure within `10h` of the basepoint structure
//! are pinched between basepoint balls with radius factors `e^{+-20h}`.
//! At `h = 0` both collapse to equalities.
//!
//! Everything here is a finite, exact set computation.  On a finite
//! separated point set every such topology is discrete, so the interest
//! is in the setwise identities and the quantitative inclusions;
//! [`same_topology`] generates and compares full open-set families as a
//! sanity harness.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use thiserror::Error;

use crate::cross_ratio::SubMoebiusMap;
use crate::hyperbolic::GromovProductModel;
use crate::reconstruction::{scaled_distance, ScaleTriple, ScaleTripleError, Side};
use crate::space::SemiMetricSpace;
use crate::tuple::Point;
use crate::value::{ExtReal, LogRat, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error(transparent)]
    ScaleTriple(#[from] ScaleTripleError),
    #[error("point index out of range")]
    PointOutOfRange,
    #[error("center {y} is outside the domain of a {kind}")]
    CenterOutsideDomain { kind: SetKind, y: Point },
    #[error("{kind} cannot be built from a sub-Moebius map")]
    KindNeedsModel { kind: SetKind },
    #[error("the scaled product is undefined when both arguments are the remote point")]
    UndefinedProduct,
    #[error("the map and the model are over different point sets")]
    LabelMismatch,
    #[error("a universe of {n} points exceeds the supported size")]
    UniverseTooLarge { n: usize },
}

/// The kinds of subbase sets.
///
/// The four map-level kinds are cut out by a scaled distance of a
/// sub-Moebius map; the two standard kinds are cut out by the basepoint
/// products of a Gromov-product model, and differ only in how their
/// threshold is quoted (a product bound for `U`-sets, a radius for
/// balls).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SetKind {
    AlphaBall,
    BetaBall,
    AlphaComplement,
    BetaComplement,
    StandardUSet,
    StandardBall,
}

impl SetKind {
    fn side(self) -> Side {
        match self {
            SetKind::AlphaBall | SetKind::AlphaComplement => Side::Alpha,
            SetKind::BetaBall | SetKind::BetaComplement => Side::Beta,
            SetKind::StandardUSet | SetKind::StandardBall => {
                unreachable!("standard kinds carry no side")
            }
        }
    }
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SetKind::AlphaBall => "alpha-ball",
            SetKind::BetaBall => "beta-ball",
            SetKind::AlphaComplement => "alpha-complement",
            SetKind::BetaComplement => "beta-complement",
            SetKind::StandardUSet => "standard U-set",
            SetKind::StandardBall => "standard ball",
        };
        f.write_str(name)
    }
}

/// One member of a subbase: its defining data and its exact point-id
/// membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubbaseSet<V: Value> {
    kind: SetKind,
    scale: ScaleTriple,
    center: Point,
    radius: V,
    members: BTreeSet<Point>,
}

impl<V: Value> SubbaseSet<V> {
    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn scale(&self) -> &ScaleTriple {
        &self.scale
    }

    pub fn center(&self) -> Point {
        self.center
    }

    /// The multiplicative threshold.  For a `U`-set with product bound
    /// `t` this is the equivalent ball radius `e^{-t}`.
    pub fn radius(&self) -> &V {
        &self.radius
    }

    pub fn members(&self) -> &BTreeSet<Point> {
        &self.members
    }

    pub fn contains(&self, x: Point) -> bool {
        self.members.contains(&x)
    }
}

fn check_scale_range(a: &ScaleTriple, n: usize) -> Result<(), TopologyError> {
    if a.alpha() >= n || a.beta() >= n || a.omega() >= n {
        return Err(TopologyError::PointOutOfRange);
    }
    Ok(())
}

/// The ball or complement cut out of a sub-Moebius map by a scaled
/// distance.
///
/// Balls require the center off the scale point of their side;
/// complements additionally require it off the remote point.  Thresholds
/// are interpreted literally, with two sentinels taken from the
/// interval-preimage calculus: a ball of infinite radius and a complement
/// at threshold zero are both the whole space.
pub fn ball<V: Value>(
    m: &SubMoebiusMap<V>,
    a: &ScaleTriple,
    y: Point,
    t: &V,
    kind: SetKind,
) -> Result<SubbaseSet<V>, TopologyError> {
    let n = m.n();
    check_scale_range(a, n)?;
    if y >= n {
        return Err(TopologyError::PointOutOfRange);
    }
    let out_of_domain = match kind {
        SetKind::AlphaBall => y == a.alpha(),
        SetKind::BetaBall => y == a.beta(),
        SetKind::AlphaComplement => y == a.alpha() || y == a.omega(),
        SetKind::BetaComplement => y == a.beta() || y == a.omega(),
        SetKind::StandardUSet | SetKind::StandardBall => {
            return Err(TopologyError::KindNeedsModel { kind })
        }
    };
    if out_of_domain {
        return Err(TopologyError::CenterOutsideDomain { kind, y });
    }
    let is_ball = matches!(kind, SetKind::AlphaBall | SetKind::BetaBall);
    let whole_space = if is_ball {
        *t == V::infinity()
    } else {
        *t == V::zero()
    };
    let mut members = BTreeSet::new();
    for x in 0..n {
        let keep = whole_space || {
            let d = scaled_distance(m, a, x, y, kind.side())
                .expect("arguments are range checked and inside the side's domain");
            if is_ball {
                d < *t
            } else {
                d > *t
            }
        };
        if keep {
            members.insert(x);
        }
    }
    Ok(SubbaseSet {
        kind,
        scale: *a,
        center: y,
        radius: t.clone(),
        members,
    })
}

/// `(x|y)_omega`: the basepoint product inverted at the remote point.
/// Defined unless both arguments equal the remote point.
fn product_at_remote(
    model: &GromovProductModel,
    omega: Point,
    x: Point,
    y: Point,
) -> Result<ExtReal, TopologyError> {
    let step = model
        .product(x, y)
        .checked_sub(model.product(x, omega))
        .ok_or(TopologyError::UndefinedProduct)?;
    step.checked_sub(model.product(y, omega))
        .ok_or(TopologyError::UndefinedProduct)
}

/// The Gromov product rescaled to a scale triple:
///
/// ```text
///   (x|y)_{A,o} = (x|y)_omega - (alpha|beta)_omega.
/// ```
///
/// Infinite values are meaningful (`+inf` on the diagonal, `-inf`
/// against the remote point); only the pair `(omega, omega)` is
/// rejected.
pub fn scaled_gromov_product(
    model: &GromovProductModel,
    a: &ScaleTriple,
    x: Point,
    y: Point,
) -> Result<ExtReal, TopologyError> {
    let n = model.n();
    check_scale_range(a, n)?;
    if x >= n || y >= n {
        return Err(TopologyError::PointOutOfRange);
    }
    let base = product_at_remote(model, a.omega(), x, y)?;
    let norm = product_at_remote(model, a.omega(), a.alpha(), a.beta())
        .expect("scale points are distinct from the remote point");
    Ok(base
        .checked_sub(&norm)
        .expect("the normalizing product is finite"))
}

/// The semi-metric `d_{A,o}(x, y) = e^{-(x|y)_{A,o}}` of the scaled
/// products: the metric inversion of the basepoint semi-metric at the
/// remote point, normalized so the scale pair sits at distance one.
pub fn inverted_semimetric(
    model: &GromovProductModel,
    a: &ScaleTriple,
) -> Result<SemiMetricSpace<LogRat>, TopologyError> {
    check_scale_range(a, model.n())?;
    let labels = model.labels().to_vec();
    Ok(SemiMetricSpace::from_fn(labels, Some(a.omega()), |x, y| {
        let product = scaled_gromov_product(model, a, x, y)
            .expect("off-diagonal pairs never hit the undefined case");
        LogRat::from_log(product.neg())
    }))
}

/// The plain distance ball `{ x : d(x, y) < t }` of a semi-metric, with
/// the infinite-radius sentinel meaning the whole space.
pub fn distance_ball<V: Value>(
    space: &SemiMetricSpace<V>,
    y: Point,
    t: &V,
) -> Result<BTreeSet<Point>, TopologyError> {
    if y >= space.n() {
        return Err(TopologyError::PointOutOfRange);
    }
    let whole_space = *t == V::infinity();
    Ok((0..space.n())
        .filter(|&x| whole_space || *space.distance(x, y) < *t)
        .collect())
}

/// The standard set `U_{A,t,o}(y) = { x : (x|y)_{A,o} > t }` of a model.
/// The center must differ from the remote point.
pub fn standard_u_set(
    model: &GromovProductModel,
    a: &ScaleTriple,
    y: Point,
    t: &ExtReal,
) -> Result<SubbaseSet<LogRat>, TopologyError> {
    let n = model.n();
    check_scale_range(a, n)?;
    if y >= n {
        return Err(TopologyError::PointOutOfRange);
    }
    if y == a.omega() {
        return Err(TopologyError::CenterOutsideDomain {
            kind: SetKind::StandardUSet,
            y,
        });
    }
    let members = (0..n)
        .filter(|&x| {
            scaled_gromov_product(model, a, x, y)
                .expect("the center differs from the remote point")
                > *t
        })
        .collect();
    Ok(SubbaseSet {
        kind: SetKind::StandardUSet,
        scale: *a,
        center: y,
        radius: LogRat::from_log(t.neg()),
        members,
    })
}

/// The standard ball `B_{A,t,o}(y) = { x : d_{A,o}(x, y) < t }`: the same
/// family as [`standard_u_set`] with the threshold quoted as a radius.
pub fn standard_ball(
    model: &GromovProductModel,
    a: &ScaleTriple,
    y: Point,
    t: &LogRat,
) -> Result<SubbaseSet<LogRat>, TopologyError> {
    let n = model.n();
    check_scale_range(a, n)?;
    if y >= n {
        return Err(TopologyError::PointOutOfRange);
    }
    if y == a.omega() {
        return Err(TopologyError::CenterOutsideDomain {
            kind: SetKind::StandardBall,
            y,
        });
    }
    let space = inverted_semimetric(model, a)?;
    let members = distance_ball(&space, y, t)?;
    Ok(SubbaseSet {
        kind: SetKind::StandardBall,
        scale: *a,
        center: y,
        radius: t.clone(),
        members,
    })
}

/// Which sandwich estimate to verify, together with its threshold.
#[derive(Clone, Debug)]
pub enum SandwichVariant<'a> {
    /// The basepoint set `U_{t,o}(y)` pinched between scaled `U`-sets
    /// shifted by `c = 2 (y|omega)_o + |(alpha|beta)_omega| + h`:
    ///
    /// ```text
    ///   U_{A,t+c,o}(y)  subset of  U_{t,o}(y)  subset of  U_{A,t-c,o}(y),
    /// ```
    ///
    /// valid for every product bound `t > (y|omega)_o + h`.
    Standard { threshold: BigRational },
    /// The map ball pinched between standard balls with radius factors
    /// `e^{+-20h}`:
    ///
    /// ```text
    ///   B_{A, t e^{-20h}, o}(y)  subset of  map ball of radius t
    ///                            subset of  B_{A, t e^{20h}, o}(y),
    /// ```
    ///
    /// valid whenever the map stays within `10h` of the basepoint
    /// structure on every tuple.
    SubMoebius {
        map: &'a SubMoebiusMap<LogRat>,
        side: Side,
        radius: LogRat,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SandwichOutcome {
    Pass,
    Fail,
    /// The hypothesis of the estimate does not cover this threshold.
    Skipped,
}

/// The result of one sandwich verification: which points, if any, break
/// the lower (inner-set) or upper (outer-set) inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichReport {
    pub outcome: SandwichOutcome,
    pub lower_violations: Vec<Point>,
    pub upper_violations: Vec<Point>,
    pub skip_reason: Option<String>,
}

impl SandwichReport {
    fn from_inclusions(inner: &BTreeSet<Point>, mid: &BTreeSet<Point>, outer: &BTreeSet<Point>) -> Self {
        let lower_violations: Vec<Point> = inner.difference(mid).copied().collect();
        let upper_violations: Vec<Point> = mid.difference(outer).copied().collect();
        let outcome = if lower_violations.is_empty() && upper_violations.is_empty() {
            SandwichOutcome::Pass
        } else {
            SandwichOutcome::Fail
        };
        SandwichReport {
            outcome,
            lower_violations,
            upper_violations,
            skip_reason: None,
        }
    }

    fn skipped(reason: String) -> Self {
        SandwichReport {
            outcome: SandwichOutcome::Skipped,
            lower_violations: Vec::new(),
            upper_violations: Vec::new(),
            skip_reason: Some(reason),
        }
    }
}

/// Verifies one sandwich estimate at a single center and threshold.
/// Hypothesis violations are reported as skipped, never as failed.
pub fn sandwich_check(
    model: &GromovProductModel,
    a: &ScaleTriple,
    y: Point,
    variant: &SandwichVariant,
) -> Result<SandwichReport, TopologyError> {
    let n = model.n();
    check_scale_range(a, n)?;
    if y >= n {
        return Err(TopologyError::PointOutOfRange);
    }
    match variant {
        SandwichVariant::Standard { threshold } => {
            if y == a.omega() {
                return Err(TopologyError::CenterOutsideDomain {
                    kind: SetKind::StandardUSet,
                    y,
                });
            }
            let y_omega = model
                .product(y, a.omega())
                .as_rational()
                .expect("the center differs from the remote point")
                .clone();
            let h = model.hyperbolicity_constant();
            if *threshold <= &y_omega + h {
                return Ok(SandwichReport::skipped(format!(
                    "threshold {threshold} does not exceed the center's remote product {y_omega} plus h = {h}"
                )));
            }
            let norm = product_at_remote(model, a.omega(), a.alpha(), a.beta())
                .expect("scale points are distinct from the remote point")
                .as_rational()
                .expect("finite")
                .clone();
            let c = BigRational::from_integer(BigInt::from(2)) * &y_omega + norm.abs() + h;
            let scaled: Vec<ExtReal> = (0..n)
                .map(|x| scaled_gromov_product(model, a, x, y).expect("center off the remote point"))
                .collect();
            let inner: BTreeSet<Point> = (0..n)
                .filter(|&x| scaled[x] > ExtReal::Finite(threshold + &c))
                .collect();
            let mid: BTreeSet<Point> = (0..n)
                .filter(|&x| *model.product(x, y) > ExtReal::Finite(threshold.clone()))
                .collect();
            let outer: BTreeSet<Point> = (0..n)
                .filter(|&x| scaled[x] > ExtReal::Finite(threshold - &c))
                .collect();
            Ok(SandwichReport::from_inclusions(&inner, &mid, &outer))
        }
        SandwichVariant::SubMoebius { map, side, radius } => {
            if map.labels() != model.labels() {
                return Err(TopologyError::LabelMismatch);
            }
            let (ball_kind, scale_point) = match side {
                Side::Alpha => (SetKind::AlphaBall, a.alpha()),
                Side::Beta => (SetKind::BetaBall, a.beta()),
            };
            if y == scale_point || y == a.omega() {
                return Err(TopologyError::CenterOutsideDomain { kind: ball_kind, y });
            }
            let h = model.hyperbolicity_constant();
            let factor = LogRat::from_log_rational(BigRational::from_integer(BigInt::from(20)) * h);
            let inner_radius = radius
                .checked_mul(&factor.recip())
                .expect("positive radius times a finite factor");
            let outer_radius = radius
                .checked_mul(&factor)
                .expect("positive radius times a finite factor");
            let inner = standard_ball(model, a, y, &inner_radius)?;
            let mid = ball(map, a, y, radius, ball_kind)?;
            let outer = standard_ball(model, a, y, &outer_radius)?;
            Ok(SandwichReport::from_inclusions(
                inner.members(),
                mid.members(),
                outer.members(),
            ))
        }
    }
}

/// The aggregate outcome of sweeping one sandwich estimate over all valid
/// centers and all thresholds where memberships can change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichScan {
    pub scale: ScaleTriple,
    /// `None` for the standard estimate, the ball side otherwise.
    pub side: Option<Side>,
    pub checked: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failed: usize,
    /// Center and displayed threshold of the first failure in scan order.
    pub first_failure: Option<(Point, String)>,
}

impl SandwichScan {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

/// Sorted deduplicated values plus the midpoint of every consecutive
/// pair and one value beyond each end.
fn enrich_with_midpoints(mut values: Vec<BigRational>) -> Vec<BigRational> {
    values.sort();
    values.dedup();
    let mut out = Vec::with_capacity(2 * values.len() + 1);
    let one = BigRational::from_integer(BigInt::from(1));
    if let Some(first) = values.first() {
        out.push(first - &one);
    }
    for pair in values.windows(2) {
        out.push(pair[0].clone());
        out.push((&pair[0] + &pair[1]) / BigRational::from_integer(BigInt::from(2)));
    }
    if let Some(last) = values.last() {
        out.push(last.clone());
        out.push(last + &one);
    }
    out
}

fn fold_scan(
    scale: ScaleTriple,
    side: Option<Side>,
    per_center: Vec<(Point, Vec<(String, SandwichReport)>)>,
) -> SandwichScan {
    let mut scan = SandwichScan {
        scale,
        side,
        checked: 0,
        passed: 0,
        skipped: 0,
        failed: 0,
        first_failure: None,
    };
    for (y, reports) in per_center {
        for (shown, report) in reports {
            scan.checked += 1;
            match report.outcome {
                SandwichOutcome::Pass => scan.passed += 1,
                SandwichOutcome::Skipped => scan.skipped += 1,
                SandwichOutcome::Fail => {
                    scan.failed += 1;
                    if scan.first_failure.is_none() {
                        scan.first_failure = Some((y, shown));
                    }
                }
            }
        }
    }
    scan
}

/// Sweeps the standard sandwich estimate over every center other than
/// the remote point.  Product bounds range over every value at which one
/// of the three set memberships changes, their midpoints, and one value
/// beyond each end; bounds outside the hypothesis are counted as
/// skipped.
pub fn standard_sandwich_scan(
    model: &GromovProductModel,
    a: &ScaleTriple,
) -> Result<SandwichScan, TopologyError> {
    let n = model.n();
    check_scale_range(a, n)?;
    let centers: Vec<Point> = (0..n).filter(|&y| y != a.omega()).collect();
    let per_center: Vec<(Point, Vec<(String, SandwichReport)>)> = centers
        .par_iter()
        .map(|&y| {
            let norm = product_at_remote(model, a.omega(), a.alpha(), a.beta())
                .expect("scale points are distinct from the remote point")
                .as_rational()
                .expect("finite")
                .clone();
            let y_omega = model.product(y, a.omega()).as_rational().expect("finite");
            let c = BigRational::from_integer(BigInt::from(2)) * y_omega
                + norm.abs()
                + model.hyperbolicity_constant();
            let mut breakpoints = Vec::new();
            // Seed one bound strictly inside the hypothesis so the scan
            // always exercises at least one genuine check.
            breakpoints
                .push(y_omega + model.hyperbolicity_constant() + BigRational::from_integer(BigInt::from(1)));
            for x in 0..n {
                if let Some(q) = model.product(x, y).as_rational() {
                    breakpoints.push(q.clone());
                }
                if let Ok(ExtReal::Finite(q)) = scaled_gromov_product(model, a, x, y) {
                    breakpoints.push(&q - &c);
                    breakpoints.push(&q + &c);
                }
            }
            let reports = enrich_with_midpoints(breakpoints)
                .into_iter()
                .map(|threshold| {
                    let shown = threshold.to_string();
                    let report = sandwich_check(
                        model,
                        a,
                        y,
                        &SandwichVariant::Standard { threshold },
                    )
                    .expect("center and scale are range checked");
                    (shown, report)
                })
                .collect();
            (y, reports)
        })
        .collect();
    Ok(fold_scan(*a, None, per_center))
}

/// Sweeps the sub-Moebius sandwich estimate over every center in the
/// side's domain.  Radii range over every distance value of either
/// family, those values shifted by the `e^{+-20h}` factors, geometric
/// midpoints of consecutive radii, and one value beyond each end.
pub fn submoebius_sandwich_scan(
    model: &GromovProductModel,
    map: &SubMoebiusMap<LogRat>,
    a: &ScaleTriple,
    side: Side,
) -> Result<SandwichScan, TopologyError> {
    let n = model.n();
    check_scale_range(a, n)?;
    if map.labels() != model.labels() {
        return Err(TopologyError::LabelMismatch);
    }
    let scale_point = match side {
        Side::Alpha => a.alpha(),
        Side::Beta => a.beta(),
    };
    let centers: Vec<Point> = (0..n)
        .filter(|&y| y != scale_point && y != a.omega())
        .collect();
    let twenty_h =
        BigRational::from_integer(BigInt::from(20)) * model.hyperbolicity_constant();
    let per_center: Vec<(Point, Vec<(String, SandwichReport)>)> = centers
        .par_iter()
        .map(|&y| {
            // Collect the logarithms of every radius at which one of the
            // three memberships can change.
            let mut log_radii = Vec::new();
            for x in 0..n {
                if let Ok(ExtReal::Finite(q)) = scaled_gromov_product(model, a, x, y) {
                    log_radii.push(-&q);
                    log_radii.push(-&q - &twenty_h);
                    log_radii.push(-&q + &twenty_h);
                }
                let d = scaled_distance(map, a, x, y, side)
                    .expect("centers are restricted to the side's domain");
                if let ExtReal::Finite(q) = d.log() {
                    log_radii.push(q.clone());
                }
            }
            let reports = enrich_with_midpoints(log_radii)
                .into_iter()
                .map(|log_radius| {
                    let radius = LogRat::from_log_rational(log_radius);
                    let shown = radius.encode();
                    let report = sandwich_check(
                        model,
                        a,
                        y,
                        &SandwichVariant::SubMoebius {
                            map,
                            side,
                            radius,
                        },
                    )
                    .expect("center and scale are range checked");
                    (shown, report)
                })
                .collect();
            (y, reports)
        })
        .collect();
    Ok(fold_scan(*a, Some(side), per_center))
}

fn mask_of(n: usize, set: &BTreeSet<Point>) -> Result<u64, TopologyError> {
    if n > 64 {
        return Err(TopologyError::UniverseTooLarge { n });
    }
    let mut mask = 0u64;
    for &p in set {
        if p >= n {
            return Err(TopologyError::PointOutOfRange);
        }
        mask |= 1 << p;
    }
    Ok(mask)
}

fn close_under(base: &mut BTreeSet<u64>, op: impl Fn(u64, u64) -> u64) {
    loop {
        let snapshot: Vec<u64> = base.iter().copied().collect();
        let mut grew = false;
        for (i, &a) in snapshot.iter().enumerate() {
            for &b in &snapshot[i + 1..] {
                grew |= base.insert(op(a, b));
            }
        }
        if !grew {
            break;
        }
    }
}

/// Generates the full open-set family of the topology with the given
/// subbase: close under finite intersection to get a base, then under
/// union.  Exponential in the worst case; intended for small universes
/// (at most 64 points).
pub fn generate_topology(
    n: usize,
    subbase: &[BTreeSet<Point>],
) -> Result<BTreeSet<BTreeSet<Point>>, TopologyError> {
    if n > 64 {
        return Err(TopologyError::UniverseTooLarge { n });
    }
    let full = if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    };
    // The empty intersection is the whole space; the empty union is the
    // empty set.
    let mut base: BTreeSet<u64> = [full].into_iter().collect();
    for set in subbase {
        base.insert(mask_of(n, set)?);
    }
    close_under(&mut base, |a, b| a & b);
    base.insert(0);
    close_under(&mut base, |a, b| a | b);
    Ok(base
        .into_iter()
        .map(|mask| (0..n).filter(|&p| mask & (1 << p) != 0).collect())
        .collect())
}

/// Whether two subbases over the same finite universe generate the same
/// topology.
pub fn same_topology(
    n: usize,
    first: &[BTreeSet<Point>],
    second: &[BTreeSet<Point>],
) -> Result<bool, TopologyError> {
    Ok(generate_topology(n, first)? == generate_topology(n, second)?)
}
