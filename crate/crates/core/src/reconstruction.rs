//! Recovering a semi-metric from its triple assignment.
//!
//! A scale triple `A = (alpha, beta, omega)` of pairwise distinct points
//! fixes a chart: `omega` is declared infinitely remote and the distance
//! from `alpha` to `beta` is the unit.  Relative to a chart, every map
//! value spawns two candidate distance functions,
//!
//! ```text
//!   d_A^alpha(x, y) = 1 / (v(P1) v(P4))        for y != alpha
//!   d_A^beta(x, y)  = u(P1) / v(P3)            for y != beta
//! ```
//!
//! where `P1..P4` are the one-point deletions of the 5-tuple
//! `(x, y, alpha, beta, omega)` and `(u, v, w)` are map values; an
//! inadmissible 5-tuple yields 0.  The map comes from a semi-metric
//! exactly when two families of multiplicative conditions hold:
//!
//! ```text
//!   (A)  v(P1) v(P4) = v(P3) / u(P1)           for y != alpha, beta
//!   (B)  v(P2) = v(P1) / u(P4)                 for y != alpha, omega
//! ```
//!
//! [`is_moebius`] scans every chart for a violated condition and
//! [`reconstruct_semimetric`] rebuilds the semi-metric when none exists.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::cross_ratio::{CrossRatioError, MoebiusTable, SubMoebiusMap};
use crate::space::{SemiMetricSpace, SpaceError};
use crate::tuple::{is_admissible, Point, Tuple4};
use crate::value::Value;

/// An ordered triple of pairwise distinct points: the remote point and
/// unit of scale for one reconstruction chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScaleTriple {
    alpha: Point,
    beta: Point,
    omega: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructionError<V: Value> {
    #[error(transparent)]
    ScaleTriple(#[from] ScaleTripleError),
    #[error("point index out of range for this domain")]
    PointOutOfRange,
    #[error("the {side} scaled distance is undefined at y = {y}")]
    OutsideDomain { side: Side, y: Point },
    #[error("the scale factor at y = {y} is undefined")]
    FactorOutsideDomain { y: Point },
    #[error("5-tuple {tuple:?} is not admissible")]
    InadmissibleTuple { tuple: [Point; 5] },
    #[error("the map does not come from a semi-metric: {witness}")]
    NotMoebius { witness: Box<MoebiusWitness<V>> },
    #[error(transparent)]
    CrossRatio(#[from] CrossRatioError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

impl ScaleTriple {
    pub fn new(alpha: Point, beta: Point, omega: Point) -> Result<Self, ScaleTripleError> {
        if alpha == beta || alpha == omega || beta == omega {
            return Err(ScaleTripleError { alpha, beta, omega });
        }
        Ok(ScaleTriple { alpha, beta, omega })
    }

    pub fn alpha(&self) -> Point {
        self.alpha
    }

    pub fn beta(&self) -> Point {
        self.beta
    }

    pub fn omega(&self) -> Point {
        self.omega
    }

    /// The 5-tuple `(x, y, alpha, beta, omega)` of one condition site.
    pub fn tuple5(&self, x: Point, y: Point) -> [Point; 5] {
        [x, y, self.alpha, self.beta, self.omega]
    }

    fn max_point(&self) -> Point {
        self.alpha.max(self.beta).max(self.omega)
    }
}

/// Standalone error for [`ScaleTriple::new`], so triple construction does
/// not force a scalar type parameter on callers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("scale triple ({alpha}, {beta}, {omega}) has repeated points")]
pub struct ScaleTripleError {
    pub alpha: Point,
    pub beta: Point,
    pub omega: Point,
}

impl fmt::Display for ScaleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.omega)
    }
}

/// All scale triples over `0..n` in lexicographic order.
pub fn all_scale_triples(n: usize) -> Vec<ScaleTriple> {
    let mut out = Vec::new();
    for alpha in 0..n {
        for beta in 0..n {
            for omega in 0..n {
                if let Ok(t) = ScaleTriple::new(alpha, beta, omega) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Which of the two candidate distance functions of a chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Alpha,
    Beta,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Alpha => write!(f, "alpha-side"),
            Side::Beta => write!(f, "beta-side"),
        }
    }
}

/// The two condition families deciding whether a map is metric-induced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    A,
    B,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::A => write!(f, "A"),
            Condition::B => write!(f, "B"),
        }
    }
}

/// Both sides of one condition instance, exactly evaluated.  `None` marks
/// a side whose product or quotient is undefined (possible only for raw
/// tables in diagnostics mode, never for map-backed evaluation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionCheck<V: Value> {
    pub condition: Condition,
    pub left: Option<V>,
    pub right: Option<V>,
}

impl<V: Value> ConditionCheck<V> {
    pub fn holds(&self) -> bool {
        self.left.is_some() && self.left == self.right
    }
}

/// Verdict of the full chart scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusVerdict<V: Value> {
    pub is_moebius: bool,
    pub witness: Option<MoebiusWitness<V>>,
}

/// The lexicographically first failing condition instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusWitness<V: Value> {
    pub scale: ScaleTriple,
    pub x: Point,
    pub y: Point,
    pub condition: Condition,
    pub left: Option<V>,
    pub right: Option<V>,
}

impl<V: Value> MoebiusWitness<V> {
    pub fn tuple5(&self) -> [Point; 5] {
        self.scale.tuple5(self.x, self.y)
    }
}

fn display_side<V: Value>(side: &Option<V>) -> String {
    match side {
        Some(v) => v.to_string(),
        None => "undefined".to_string(),
    }
}

impl<V: Value> fmt::Display for MoebiusWitness<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "condition ({}) fails at scale {}, x = {}, y = {}: left = {}, right = {}",
            self.condition,
            self.scale,
            self.x,
            self.y,
            display_side(&self.left),
            display_side(&self.right),
        )
    }
}

/// Raw triple lookup used by both the map-backed scan and the table
/// diagnostics mode: admissible tuple in, `(u, v, w)` coordinates out.
type Eval<'a, V> = dyn Fn(&Tuple4) -> Option<[V; 3]> + Sync + 'a;

fn eval_of_map<V: Value>(m: &SubMoebiusMap<V>) -> impl Fn(&Tuple4) -> Option<[V; 3]> + Sync + '_ {
    |t| m.eval(t).ok().map(|p| p.into_coords())
}

fn eval_of_table<V: Value>(
    t: &MoebiusTable<V>,
) -> impl Fn(&Tuple4) -> Option<[V; 3]> + Sync + '_ {
    |tuple| t.get(tuple.entries()).cloned()
}

fn condition_sides<V: Value>(
    ev: &Eval<'_, V>,
    a: &ScaleTriple,
    x: Point,
    y: Point,
    condition: Condition,
) -> ConditionCheck<V> {
    let p1 = ev(&Tuple4([y, a.alpha, a.beta, a.omega]));
    let (left, right) = match condition {
        Condition::A => {
            let p4 = ev(&Tuple4([x, y, a.alpha, a.omega]));
            let p3 = ev(&Tuple4([x, y, a.beta, a.omega]));
            let left = match (&p1, &p4) {
                (Some(c1), Some(c4)) => c1[1].checked_mul(&c4[1]),
                _ => None,
            };
            let right = match (&p3, &p1) {
                (Some(c3), Some(c1)) => c3[1].checked_div(&c1[0]),
                _ => None,
            };
            (left, right)
        }
        Condition::B => {
            let p2 = ev(&Tuple4([x, a.alpha, a.beta, a.omega]));
            let p4 = ev(&Tuple4([x, y, a.alpha, a.omega]));
            let left = p2.map(|c2| c2[1].clone());
            let right = match (&p1, &p4) {
                (Some(c1), Some(c4)) => c1[1].checked_div(&c4[0]),
                _ => None,
            };
            (left, right)
        }
    };
    ConditionCheck {
        condition,
        left,
        right,
    }
}

/// The conditions applicable at one site `(x, y)` of a chart, in the
/// order they are scanned.
fn applicable_conditions(a: &ScaleTriple, y: Point) -> Vec<Condition> {
    let mut out = Vec::with_capacity(2);
    if y != a.alpha && y != a.beta {
        out.push(Condition::A);
    }
    if y != a.alpha && y != a.omega {
        out.push(Condition::B);
    }
    out
}

/// Evaluates every applicable condition at one admissible site.
pub fn check_conditions<V: Value>(
    m: &SubMoebiusMap<V>,
    a: &ScaleTriple,
    x: Point,
    y: Point,
) -> Result<Vec<ConditionCheck<V>>, ReconstructionError<V>> {
    if a.max_point() >= m.n() || x >= m.n() || y >= m.n() {
        return Err(ReconstructionError::PointOutOfRange);
    }
    let five = a.tuple5(x, y);
    if !is_admissible(&five) {
        return Err(ReconstructionError::InadmissibleTuple { tuple: five });
    }
    let ev = eval_of_map(m);
    Ok(applicable_conditions(a, y)
        .into_iter()
        .map(|c| condition_sides(&ev, a, x, y, c))
        .collect())
}

fn first_failure_in_chart<V: Value>(
    n: usize,
    ev: &Eval<'_, V>,
    a: &ScaleTriple,
) -> Option<MoebiusWitness<V>> {
    for x in 0..n {
        for y in 0..n {
            if !is_admissible(&a.tuple5(x, y)) {
                continue;
            }
            for condition in applicable_conditions(a, y) {
                let check = condition_sides(ev, a, x, y, condition);
                if !check.holds() {
                    return Some(MoebiusWitness {
                        scale: *a,
                        x,
                        y,
                        condition,
                        left: check.left,
                        right: check.right,
                    });
                }
            }
        }
    }
    None
}

fn scan<V: Value>(n: usize, ev: &Eval<'_, V>) -> MoebiusVerdict<V> {
    let triples = all_scale_triples(n);
    let witness = triples
        .par_iter()
        .enumerate()
        .filter_map(|(i, a)| first_failure_in_chart(n, ev, a).map(|w| (i, w)))
        .min_by_key(|(i, w)| (*i, w.x, w.y, w.condition))
        .map(|(_, w)| w);
    MoebiusVerdict {
        is_moebius: witness.is_none(),
        witness,
    }
}

/// Decides whether the map is the triple assignment of some semi-metric,
/// by scanning all charts for a violated condition.  Charts are examined
/// in lexicographic order and the first failure (by chart, then site,
/// then condition tag) is the witness, independent of parallelism.  The
/// verdict is cached on the map.
pub fn is_moebius<V: Value>(m: &SubMoebiusMap<V>) -> MoebiusVerdict<V> {
    m.verdict_cache()
        .get_or_init(|| scan(m.n(), &eval_of_map(m)))
        .clone()
}

/// Diagnostics mode: the same scan over a raw table, with no validity
/// assumptions.  Missing or undefined entries fail the conditions they
/// touch.
pub fn scan_table<V: Value>(t: &MoebiusTable<V>) -> MoebiusVerdict<V> {
    scan(t.n(), &eval_of_table(t))
}

/// One candidate distance value in the chart `a`; 0 when the underlying
/// 5-tuple is inadmissible.
pub fn scaled_distance<V: Value>(
    m: &SubMoebiusMap<V>,
    a: &ScaleTriple,
    x: Point,
    y: Point,
    side: Side,
) -> Result<V, ReconstructionError<V>> {
    if a.max_point() >= m.n() || x >= m.n() || y >= m.n() {
        return Err(ReconstructionError::PointOutOfRange);
    }
    match side {
        Side::Alpha if y == a.alpha => return Err(ReconstructionError::OutsideDomain { side, y }),
        Side::Beta if y == a.beta => return Err(ReconstructionError::OutsideDomain { side, y }),
        _ => {}
    }
    let five = a.tuple5(x, y);
    if !is_admissible(&five) {
        return Ok(V::zero());
    }
    let p1 = m.eval(&Tuple4([y, a.alpha, a.beta, a.omega]))?;
    match side {
        Side::Alpha => {
            let p4 = m.eval(&Tuple4([x, y, a.alpha, a.omega]))?;
            let product = p1
                .v()
                .checked_mul(p4.v())
                .expect("defined in the side's domain for map-backed values");
            Ok(product.recip())
        }
        Side::Beta => {
            let p3 = m.eval(&Tuple4([x, y, a.beta, a.omega]))?;
            Ok(p1
                .u()
                .checked_div(p3.v())
                .expect("defined in the side's domain for map-backed values"))
        }
    }
}

/// The constant relating a chart to the chart `(alpha, omega, y)` with the
/// roles of `y` and `omega` exchanged:
///
/// ```text
///   d_A^alpha(x, y) * d_A'^alpha(x, omega) = lambda   (A' = (alpha, omega, y))
/// ```
///
/// for every `x` outside `{y, omega}` with `(x, y, A)` admissible.
/// Requires `y` outside `{alpha, omega}`; always finite and positive.
pub fn lambda_factor<V: Value>(
    m: &SubMoebiusMap<V>,
    a: &ScaleTriple,
    y: Point,
) -> Result<V, ReconstructionError<V>> {
    if a.max_point() >= m.n() || y >= m.n() {
        return Err(ReconstructionError::PointOutOfRange);
    }
    if y == a.alpha || y == a.omega {
        return Err(ReconstructionError::FactorOutsideDomain { y });
    }
    let p1 = m.eval(&Tuple4([y, a.alpha, a.beta, a.omega]))?;
    Ok(p1.v().recip())
}

/// The beta-side analogue of [`lambda_factor`]:
///
/// ```text
///   d_A^beta(x, y) * d_A''^beta(x, omega) = mu        (A'' = (omega, beta, y))
/// ```
///
/// for every `x` outside `{y, omega}` with `(x, y, A)` admissible.
/// Requires `y` outside `{beta, omega}`.
pub fn mu_factor<V: Value>(
    m: &SubMoebiusMap<V>,
    a: &ScaleTriple,
    y: Point,
) -> Result<V, ReconstructionError<V>> {
    if a.max_point() >= m.n() || y >= m.n() {
        return Err(ReconstructionError::PointOutOfRange);
    }
    if y == a.beta || y == a.omega {
        return Err(ReconstructionError::FactorOutsideDomain { y });
    }
    let p1 = m.eval(&Tuple4([y, a.alpha, a.beta, a.omega]))?;
    Ok(p1.u().clone())
}

/// The distance the chart assigns to `(x, y)`: the alpha-side value, or
/// the beta-side value exactly when `y = alpha`.
fn chart_distance<V: Value>(
    m: &SubMoebiusMap<V>,
    a: &ScaleTriple,
    x: Point,
    y: Point,
) -> Result<V, ReconstructionError<V>> {
    if y != a.alpha {
        scaled_distance(m, a, x, y, Side::Alpha)
    } else {
        scaled_distance(m, a, x, y, Side::Beta)
    }
}

/// Rebuilds the semi-metric inducing the map, in the given chart.  The
/// result has `omega` infinitely remote and unit distance from `alpha` to
/// `beta`.  Fails with the scan witness when the map is not metric-induced.
///
/// Every entry is computed independently — symmetry is a consequence of the
/// conditions, not an assumption — so the output is validated before it is
/// returned.
pub fn reconstruct_semimetric<V: Value>(
    m: &SubMoebiusMap<V>,
    a: &ScaleTriple,
) -> Result<SemiMetricSpace<V>, ReconstructionError<V>> {
    let n = m.n();
    if a.max_point() >= n {
        return Err(ReconstructionError::PointOutOfRange);
    }
    let verdict = is_moebius(m);
    if let Some(witness) = verdict.witness {
        return Err(ReconstructionError::NotMoebius {
            witness: Box::new(witness),
        });
    }
    let mut matrix = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            row.push(chart_distance(m, a, x, y)?);
        }
        matrix.push(row);
    }
    let space = SemiMetricSpace::from_parts(m.labels().to_vec(), matrix, Some(a.omega))?;
    debug_assert!(space.is_valid());
    Ok(space)
}
