//! Cross-ratio triples of a semi-metric and the maps they form.
//!
//! Every admissible 4-tuple `P = (x1,x2,x3,x4)` of a semi-metric space is
//! assigned the triple `(u, v, w)` of cross-ratios
//!
//! ```text
//!   u = d13 d24 / (d14 d23)
//!   v = d14 d23 / (d12 d34)
//!   w = d12 d34 / (d13 d24)
//! ```
//!
//! whose product is one.  Tuples with a repeated entry receive the pinned
//! degenerate patterns instead.  Infinite factors contributed by a remote
//! point cancel pairwise before evaluation, so tuples containing the remote
//! point evaluate exactly.
//!
//! Two representations of such an assignment exist side by side:
//! [`SubMoebiusMap`] stores one value per sorted 4-point combination and
//! completes the rest through the signed permutation action, while
//! [`MoebiusTable`] is an extensional table with one raw triple per
//! admissible tuple.  Tables can hold arbitrary values — including invalid
//! ones — so that [`MoebiusTable::check_axioms`] has something to diagnose;
//! a clean table upgrades to a map via [`MoebiusTable::validate`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::l4::{classify_triple, signed_permute_triple, Degenerate, L4Point};
use crate::reconstruction::MoebiusVerdict;
use crate::space::SemiMetricSpace;
use crate::symmetry::Perm4;
use crate::tuple::{admissible_tuples, sorted_representatives, Point, Tuple4};
use crate::value::{eval_fraction, Value};

/// Index pairs defining each cross-ratio coordinate: two numerator distance
/// factors and two denominator distance factors, by tuple position.
pub(crate) const COORD_PAIRS: [([(usize, usize); 2], [(usize, usize); 2]); 3] = [
    ([(0, 2), (1, 3)], [(0, 3), (1, 2)]),
    ([(0, 3), (1, 2)], [(0, 1), (2, 3)]),
    ([(0, 1), (2, 3)], [(0, 2), (1, 3)]),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrossRatioError {
    #[error("tuple {tuple:?} is not admissible")]
    InadmissibleTuple { tuple: Vec<Point> },
    #[error("space fails semi-metric validation with {violations} violation(s)")]
    SpaceNotValid { violations: usize },
    #[error("spaces are over different point sets")]
    PointSetMismatch,
    #[error("tuple {tuple:?} uses a point outside the domain")]
    PointOutOfRange { tuple: Vec<Point> },
    #[error("no stored value for representative {tuple:?}")]
    MissingRepresentative { tuple: [Point; 4] },
    #[error("representative key {tuple:?} is not strictly increasing")]
    BadRepresentative { tuple: [Point; 4] },
    #[error("cross-ratio of {tuple:?} is undefined (the space is degenerate)")]
    UndefinedValue { tuple: [Point; 4] },
    #[error("cross-ratio of {tuple:?} does not lie on the surface")]
    OffSurface { tuple: [Point; 4] },
}

fn check_range(tuple: &Tuple4, n: usize) -> Result<(), CrossRatioError> {
    if tuple.entries().iter().any(|&p| p >= n) {
        return Err(CrossRatioError::PointOutOfRange {
            tuple: tuple.entries().to_vec(),
        });
    }
    Ok(())
}

/// Raw coordinate evaluation for a nondegenerate tuple; `None` when the
/// space fails the semi-metric axioms badly enough to leave `0 * inf`.
fn raw_coords<V: Value>(space: &SemiMetricSpace<V>, t: &Tuple4) -> Option<[V; 3]> {
    let e = t.entries();
    let mut out: [Option<V>; 3] = [None, None, None];
    for (k, (num, den)) in COORD_PAIRS.iter().enumerate() {
        let n0 = space.distance(e[num[0].0], e[num[0].1]);
        let n1 = space.distance(e[num[1].0], e[num[1].1]);
        let d0 = space.distance(e[den[0].0], e[den[0].1]);
        let d1 = space.distance(e[den[1].0], e[den[1].1]);
        out[k] = eval_fraction(&[n0, n1], &[d0, d1]);
    }
    match out {
        [Some(u), Some(v), Some(w)] => Some([u, v, w]),
        _ => None,
    }
}

/// The cross-ratio triple of one admissible tuple, evaluated directly from
/// the distance matrix.
pub fn moebius_point<V: Value>(
    space: &SemiMetricSpace<V>,
    t: &Tuple4,
) -> Result<L4Point<V>, CrossRatioError> {
    check_range(t, space.n())?;
    if !t.is_admissible() {
        return Err(CrossRatioError::InadmissibleTuple {
            tuple: t.entries().to_vec(),
        });
    }
    if let Some(kind) = t.degeneracy() {
        return Ok(L4Point::degenerate(kind));
    }
    let coords = raw_coords(space, t).ok_or(CrossRatioError::UndefinedValue {
        tuple: *t.entries(),
    })?;
    L4Point::from_coords(coords).map_err(|_| CrossRatioError::OffSurface {
        tuple: *t.entries(),
    })
}

/// The first cross-ratio coordinate of an admissible tuple, multiplicative
/// scale.  The logarithmic reading is available through the scalar: exactly
/// via [`crate::value::LogRat::log`] on a log-backed space, approximately
/// via [`Value::log_f64`].
pub fn cross_difference<V: Value>(
    space: &SemiMetricSpace<V>,
    t: &Tuple4,
) -> Result<V, CrossRatioError> {
    let point = moebius_point(space, t)?;
    Ok(point.u().clone())
}

/// A complete triple assignment stored on sorted representatives and
/// extended to every admissible tuple through the signed permutation
/// action; degenerate tuples always read the pinned patterns.
///
/// The expensive scale-triple scan deciding whether the map comes from a
/// semi-metric is memoized here, so repeated reconstructions pay for it
/// once.  The cache never enters equality comparisons.
#[derive(Clone, Debug)]
pub struct SubMoebiusMap<V: Value> {
    labels: Vec<String>,
    reps: BTreeMap<[Point; 4], L4Point<V>>,
    verdict: OnceLock<MoebiusVerdict<V>>,
}

impl<V: Value> PartialEq for SubMoebiusMap<V> {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.reps == other.reps
    }
}

impl<V: Value> Eq for SubMoebiusMap<V> {}

/// The triple assignment of a semi-metric space.
pub fn moebius_of<V: Value>(
    space: &SemiMetricSpace<V>,
) -> Result<SubMoebiusMap<V>, CrossRatioError> {
    let report = space.validate();
    if !report.is_valid() {
        return Err(CrossRatioError::SpaceNotValid {
            violations: report.violations.len(),
        });
    }
    let mut reps = BTreeMap::new();
    for rep in sorted_representatives(space.n()) {
        let point = moebius_point(space, &Tuple4(rep))?;
        reps.insert(rep, point);
    }
    Ok(SubMoebiusMap {
        labels: space.labels().to_vec(),
        reps,
        verdict: OnceLock::new(),
    })
}

impl<V: Value> SubMoebiusMap<V> {
    /// Assembles a map from explicit representative values.  Keys must be
    /// exactly the strictly increasing 4-point combinations of the domain.
    pub fn from_reps(
        labels: Vec<String>,
        reps: BTreeMap<[Point; 4], L4Point<V>>,
    ) -> Result<Self, CrossRatioError> {
        let n = labels.len();
        for key in reps.keys() {
            if !(key[0] < key[1] && key[1] < key[2] && key[2] < key[3]) {
                return Err(CrossRatioError::BadRepresentative { tuple: *key });
            }
            if key[3] >= n {
                return Err(CrossRatioError::PointOutOfRange {
                    tuple: key.to_vec(),
                });
            }
        }
        for rep in sorted_representatives(n) {
            if !reps.contains_key(&rep) {
                return Err(CrossRatioError::MissingRepresentative { tuple: rep });
            }
        }
        Ok(SubMoebiusMap {
            labels,
            reps,
            verdict: OnceLock::new(),
        })
    }

    pub(crate) fn verdict_cache(&self) -> &OnceLock<MoebiusVerdict<V>> {
        &self.verdict
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: Point) -> &str {
        &self.labels[x]
    }

    pub fn reps(&self) -> impl Iterator<Item = (&[Point; 4], &L4Point<V>)> {
        self.reps.iter()
    }

    /// The value at any admissible tuple.  Nondegenerate tuples are reduced
    /// to their sorted representative and the stored value is carried over
    /// by the signed action of the reducing permutation.
    pub fn eval(&self, t: &Tuple4) -> Result<L4Point<V>, CrossRatioError> {
        check_range(t, self.n())?;
        if !t.is_admissible() {
            return Err(CrossRatioError::InadmissibleTuple {
                tuple: t.entries().to_vec(),
            });
        }
        if let Some(kind) = t.degeneracy() {
            return Ok(L4Point::degenerate(kind));
        }
        let rep = t.sorted();
        let stored = self
            .reps
            .get(&rep)
            .ok_or(CrossRatioError::MissingRepresentative { tuple: rep })?;
        let pi = t.perm_from_sorted();
        Ok(stored.signed_permute(&pi.phi(), pi.sign()))
    }

    /// Expands the map into an extensional table over all admissible
    /// tuples, degenerate patterns included.
    pub fn to_table(&self) -> MoebiusTable<V> {
        let mut entries = BTreeMap::new();
        for t in admissible_tuples(self.n()) {
            let point = self.eval(&t).expect("admissible tuples evaluate");
            entries.insert(*t.entries(), point.into_coords());
        }
        MoebiusTable {
            labels: self.labels.clone(),
            entries,
        }
    }
}

/// One violation found by [`MoebiusTable::check_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation<V: Value> {
    /// An admissible tuple with no entry.
    Missing { tuple: [Point; 4] },
    /// A nondegenerate tuple whose value is not a finite positive triple
    /// with product one.
    NotRegular { tuple: [Point; 4], value: [V; 3] },
    /// A degenerate tuple whose value differs from its pinned pattern.
    WrongDegenerateValue {
        tuple: [Point; 4],
        expected: Degenerate,
        value: [V; 3],
    },
    /// A pair of tuples related by a permutation whose values fail the
    /// signed action relation.
    Equivariance {
        base: [Point; 4],
        perm: Perm4,
        tuple: [Point; 4],
        expected: [V; 3],
        found: [V; 3],
    },
}

impl<V: Value> fmt::Display for AxiomViolation<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Missing { tuple } => write!(f, "missing entry for tuple {tuple:?}"),
            AxiomViolation::NotRegular { tuple, value } => write!(
                f,
                "tuple {tuple:?} needs a finite positive product-one triple, found ({}, {}, {})",
                value[0], value[1], value[2]
            ),
            AxiomViolation::WrongDegenerateValue {
                tuple,
                expected,
                value,
            } => write!(
                f,
                "degenerate tuple {tuple:?} must carry pattern {expected}, found ({}, {}, {})",
                value[0], value[1], value[2]
            ),
            AxiomViolation::Equivariance {
                base,
                perm,
                tuple,
                expected,
                found,
            } => write!(
                f,
                "tuple {tuple:?} (= {perm} acting on {base:?}) breaks the signed action: \
                 expected ({}, {}, {}), found ({}, {}, {})",
                expected[0], expected[1], expected[2], found[0], found[1], found[2]
            ),
        }
    }
}

/// Result of checking a table; empty means the table is a valid map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport<V: Value> {
    pub violations: Vec<AxiomViolation<V>>,
}

impl<V: Value> AxiomReport<V> {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An extensional triple table: raw values for every admissible tuple, with
/// no validity guarantees until checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusTable<V: Value> {
    labels: Vec<String>,
    entries: BTreeMap<[Point; 4], [V; 3]>,
}

impl<V: Value> MoebiusTable<V> {
    pub fn new(labels: Vec<String>, entries: BTreeMap<[Point; 4], [V; 3]>) -> Self {
        MoebiusTable { labels, entries }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[Point; 4], &[V; 3])> {
        self.entries.iter()
    }

    pub fn get(&self, tuple: &[Point; 4]) -> Option<&[V; 3]> {
        self.entries.get(tuple)
    }

    pub fn set(&mut self, tuple: [Point; 4], value: [V; 3]) {
        self.entries.insert(tuple, value);
    }

    pub fn remove(&mut self, tuple: &[Point; 4]) -> Option<[V; 3]> {
        self.entries.remove(tuple)
    }

    /// Checks the three defining properties over the whole table:
    ///
    /// 1. every value is regular exactly on nondegenerate tuples, and
    ///    degenerate tuples carry their pinned patterns;
    /// 2. the signed permutation action relates the values of every
    ///    tuple orbit (checked per sorted representative, which covers
    ///    all permutation pairs by composition);
    /// 3. nothing is missing.
    ///
    /// Violations are reported in deterministic order with witnesses.
    pub fn check_axioms(&self) -> AxiomReport<V> {
        let mut violations = Vec::new();
        for t in admissible_tuples(self.n()) {
            let Some(value) = self.entries.get(t.entries()) else {
                violations.push(AxiomViolation::Missing { tuple: *t.entries() });
                continue;
            };
            match t.degeneracy() {
                Some(kind) => {
                    if value != &kind.pattern::<V>() {
                        violations.push(AxiomViolation::WrongDegenerateValue {
                            tuple: *t.entries(),
                            expected: kind,
                            value: value.clone(),
                        });
                    }
                }
                None => {
                    if classify_triple(value) != Ok(None) {
                        violations.push(AxiomViolation::NotRegular {
                            tuple: *t.entries(),
                            value: value.clone(),
                        });
                    }
                }
            }
        }
        for rep in sorted_representatives(self.n()) {
            let Some(base_value) = self.entries.get(&rep) else {
                continue;
            };
            for pi in Perm4::all() {
                let image = Tuple4(rep).apply(pi);
                let Some(found) = self.entries.get(image.entries()) else {
                    continue;
                };
                let expected = signed_permute_triple(&pi.phi(), pi.sign(), base_value);
                if found != &expected {
                    violations.push(AxiomViolation::Equivariance {
                        base: rep,
                        perm: pi.clone(),
                        tuple: *image.entries(),
                        expected,
                        found: found.clone(),
                    });
                }
            }
        }
        AxiomReport { violations }
    }

    /// Upgrades a clean table to a representative-stored map; a dirty table
    /// comes back as the full violation report.
    pub fn validate(&self) -> Result<SubMoebiusMap<V>, AxiomReport<V>> {
        let report = self.check_axioms();
        if !report.is_valid() {
            return Err(report);
        }
        let reps = sorted_representatives(self.n())
            .into_iter()
            .map(|rep| {
                let coords = self.entries.get(&rep).expect("checked above").clone();
                let point = L4Point::from_coords(coords).expect("checked above");
                (rep, point)
            })
            .collect();
        Ok(SubMoebiusMap {
            labels: self.labels.clone(),
            reps,
            verdict: OnceLock::new(),
        })
    }
}

/// Compares the triple assignments of two spaces over the same point set.
/// Returns the first sorted 4-point combination where they differ, or
/// `None` when the assignments agree on every admissible tuple.
///
/// Comparing representatives suffices: both assignments transform the same
/// way under the permutation action, so they agree on an orbit exactly when
/// they agree on its representative; degenerate tuples always agree.
pub fn moebius_equivalent<V: Value>(
    s1: &SemiMetricSpace<V>,
    s2: &SemiMetricSpace<V>,
) -> Result<Option<[Point; 4]>, CrossRatioError> {
    if s1.labels() != s2.labels() {
        return Err(CrossRatioError::PointSetMismatch);
    }
    for rep in sorted_representatives(s1.n()) {
        let t = Tuple4(rep);
        let p1 = moebius_point(s1, &t)?;
        let p2 = moebius_point(s2, &t)?;
        if p1 != p2 {
            return Ok(Some(rep));
        }
    }
    Ok(None)
}
