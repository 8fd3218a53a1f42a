//! Finite semi-metric spaces.
//!
//! A semi-metric is symmetric, vanishes exactly on the diagonal and is
//! positive elsewhere; the triangle inequality is *not* required.  At most
//! one point may be infinitely remote, meaning its distance to every other
//! point is `inf`.  Validation reports all violations with witnesses rather
//! than failing on the first.

use std::fmt;

use thiserror::Error;

use crate::tuple::Point;
use crate::value::{eval_fraction, Value};

/// A finite labelled point set with a distance matrix.  The matrix is stored
/// fully (no implied symmetry completion) so that validation is meaningful.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiMetricSpace<V: Value> {
    labels: Vec<String>,
    dist: Vec<V>,
    omega: Option<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("distance matrix is {rows}x{cols}, expected {n}x{n}")]
    Shape { n: usize, rows: usize, cols: usize },
    #[error("duplicate point label {label:?}")]
    DuplicateLabel { label: String },
    #[error("omega index {omega} out of range for {n} points")]
    OmegaOutOfRange { omega: usize, n: usize },
    #[error("point index out of range")]
    PointOutOfRange,
    #[error("inversion center is already infinitely remote")]
    CenterAlreadyRemote,
    #[error("rescaling factor must be finite and positive")]
    BadScaleFactor,
}

/// One violation of the semi-metric axioms, with witness indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceViolation {
    NonzeroDiagonal { x: Point },
    Asymmetric { x: Point, y: Point },
    ZeroOffDiagonal { x: Point, y: Point },
    /// More than one infinitely remote point.
    MultipleRemote { first: Point, second: Point },
    /// An `inf` entry not explained by an infinitely remote point.
    StrayInfinity { x: Point, y: Point },
    /// The declared omega is inconsistent with the matrix.
    OmegaMismatch { declared: Option<Point>, found: Option<Point> },
}

impl fmt::Display for SpaceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceViolation::NonzeroDiagonal { x } => write!(f, "d({x},{x}) is not zero"),
            SpaceViolation::Asymmetric { x, y } => write!(f, "d({x},{y}) differs from d({y},{x})"),
            SpaceViolation::ZeroOffDiagonal { x, y } => {
                write!(f, "d({x},{y}) is zero off the diagonal")
            }
            SpaceViolation::MultipleRemote { first, second } => write!(
                f,
                "more than one infinitely remote point: {first} and {second}"
            ),
            SpaceViolation::StrayInfinity { x, y } => {
                write!(f, "d({x},{y}) is infinite but neither point is remote")
            }
            SpaceViolation::OmegaMismatch { declared, found } => write!(
                f,
                "declared remote point {declared:?} does not match matrix {found:?}"
            ),
        }
    }
}

/// Result of validating a space; empty means valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<SpaceViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<V: Value> SemiMetricSpace<V> {
    /// Builds a space from explicit parts.  Only shape errors are rejected
    /// here; semantic violations are the business of [`Self::validate`].
    pub fn from_parts(
        labels: Vec<String>,
        matrix: Vec<Vec<V>>,
        omega: Option<Point>,
    ) -> Result<Self, SpaceError> {
        let n = labels.len();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SpaceError::DuplicateLabel { label: l.clone() });
            }
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(SpaceError::Shape {
                n,
                rows: matrix.len(),
                cols: matrix.first().map_or(0, Vec::len),
            });
        }
        if let Some(w) = omega {
            if w >= n {
                return Err(SpaceError::OmegaOutOfRange { omega: w, n });
            }
        }
        let dist = matrix.into_iter().flatten().collect();
        Ok(SemiMetricSpace {
            labels,
            dist,
            omega,
        })
    }

    /// Builds from a distance function over indices; the diagonal is forced
    /// to zero and symmetry to the upper triangle.
    pub fn from_fn(labels: Vec<String>, omega: Option<Point>, mut d: impl FnMut(Point, Point) -> V) -> Self {
        let n = labels.len();
        let mut dist = vec![V::zero(); n * n];
        for x in 0..n {
            for y in x + 1..n {
                let v = d(x, y);
                dist[x * n + y] = v.clone();
                dist[y * n + x] = v;
            }
        }
        SemiMetricSpace {
            labels,
            dist,
            omega,
        }
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

    pub fn index_of(&self, label: &str) -> Option<Point> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn omega(&self) -> Option<Point> {
        self.omega
    }

    pub fn distance(&self, x: Point, y: Point) -> &V {
        &self.dist[x * self.n() + y]
    }

    /// Checks all semi-metric axioms and reports every violation.
    pub fn validate(&self) -> ValidationReport {
        let n = self.n();
        let mut violations = Vec::new();
        for x in 0..n {
            if !self.distance(x, x).is_zero() {
                violations.push(SpaceViolation::NonzeroDiagonal { x });
            }
            for y in x + 1..n {
                if self.distance(x, y) != self.distance(y, x) {
                    violations.push(SpaceViolation::Asymmetric { x, y });
                }
                if self.distance(x, y).is_zero() {
                    violations.push(SpaceViolation::ZeroOffDiagonal { x, y });
                }
            }
        }

        // A point is remote when every off-diagonal entry of its row is inf.
        let remote: Vec<Point> = (0..n)
            .filter(|&x| n > 1 && (0..n).all(|y| y == x || self.distance(x, y).is_infinite()))
            .collect();
        for pair in remote.windows(2) {
            violations.push(SpaceViolation::MultipleRemote {
                first: pair[0],
                second: pair[1],
            });
        }
        let found = remote.first().copied();
        if self.omega != found && remote.len() <= 1 {
            violations.push(SpaceViolation::OmegaMismatch {
                declared: self.omega,
                found,
            });
        }
        for x in 0..n {
            for y in 0..n {
                if x != y
                    && self.distance(x, y).is_infinite()
                    && !remote.contains(&x)
                    && !remote.contains(&y)
                {
                    violations.push(SpaceViolation::StrayInfinity { x, y });
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// Multiplies every distance by a finite positive factor.
    pub fn rescale(&self, factor: &V) -> Result<Self, SpaceError> {
        if !factor.is_finite_positive() {
            return Err(SpaceError::BadScaleFactor);
        }
        let dist = self
            .dist
            .iter()
            .map(|d| d.checked_mul(factor).expect("finite factor"))
            .collect();
        Ok(SemiMetricSpace {
            labels: self.labels.clone(),
            dist,
            omega: self.omega,
        })
    }

    /// Metric inversion centered at `center` with radius `r`:
    ///
    /// ```text
    ///   d'(x, y) = r^2 d(x, y) / (d(x, center) d(y, center))
    /// ```
    ///
    /// The center becomes the infinitely remote point of the result.  When
    /// the input has a remote point, its entries are computed by cancelling
    /// the infinite factor symbolically: `d'(x, old) = r^2 / d(x, center)`.
    pub fn metric_inversion(&self, center: Point, r: &V) -> Result<Self, SpaceError> {
        let n = self.n();
        if center >= n {
            return Err(SpaceError::PointOutOfRange);
        }
        if !r.is_finite_positive() {
            return Err(SpaceError::BadScaleFactor);
        }
        if self.omega == Some(center)
            || (n > 1 && (0..n).all(|y| y == center || self.distance(center, y).is_infinite()))
        {
            return Err(SpaceError::CenterAlreadyRemote);
        }
        let mut dist = vec![V::zero(); n * n];
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let value = eval_fraction(
                    &[r, r, self.distance(x, y)],
                    &[self.distance(x, center), self.distance(y, center)],
                )
                .expect("inversion is defined away from the diagonal");
                dist[x * n + y] = value;
            }
        }
        Ok(SemiMetricSpace {
            labels: self.labels.clone(),
            dist,
            omega: Some(center),
        })
    }

    /// Extends the space by a fresh infinitely remote point.
    pub fn with_remote_point(&self, label: &str) -> Result<Self, SpaceError> {
        if self.omega.is_some() {
            return Err(SpaceError::CenterAlreadyRemote);
        }
        if self.labels.iter().any(|l| l == label) {
            return Err(SpaceError::DuplicateLabel {
                label: label.to_string(),
            });
        }
        let n = self.n();
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        let m = n + 1;
        let mut dist = vec![V::zero(); m * m];
        for x in 0..n {
            for y in 0..n {
                dist[x * m + y] = self.distance(x, y).clone();
            }
            dist[x * m + n] = V::infinity();
            dist[n * m + x] = V::infinity();
        }
        Ok(SemiMetricSpace {
            labels,
            dist,
            omega: Some(n),
        })
    }
}

/// A line segment space: points on the real line with `|s - t|` distances.
/// Labels are the coordinate values.  Test and demo fixture.
pub fn line_space(coords: &[i64]) -> SemiMetricSpace<crate::value::MulRat> {
    use crate::value::MulRat;
    let labels = coords.iter().map(|c| c.to_string()).collect();
    SemiMetricSpace::from_fn(labels, None, |x, y| {
        MulRat::from_int(coords[x].abs_diff(coords[y]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::MulRat;

    #[test]
    fn line_space_is_valid() {
        let s = line_space(&[0, 1, 3, 7]);
        assert!(s.validate().is_valid());
        assert_eq!(s.distance(1, 2), &MulRat::from_int(2));
        assert_eq!(s.omega(), None);
    }

    #[test]
    fn with_remote_point_is_valid() {
        let s = line_space(&[0, 1, 3, 7]).with_remote_point("w").unwrap();
        assert!(s.validate().is_valid());
        assert_eq!(s.omega(), Some(4));
        assert!(s.distance(0, 4).is_infinite());
    }

    #[test]
    fn validate_flags_asymmetry() {
        let mut matrix = vec![
            vec![MulRat::from_int(0), MulRat::from_int(1)],
            vec![MulRat::from_int(2), MulRat::from_int(0)],
        ];
        matrix[0][0] = MulRat::Zero;
        let s =
            SemiMetricSpace::from_parts(vec!["a".into(), "b".into()], matrix, None).unwrap();
        let report = s.validate();
        assert!(report
            .violations
            .contains(&SpaceViolation::Asymmetric { x: 0, y: 1 }));
    }

    #[test]
    fn validate_flags_two_remote_points() {
        let inf = MulRat::Inf;
        let z = MulRat::Zero;
        let one = MulRat::from_int(1);
        let matrix = vec![
            vec![z.clone(), one.clone(), inf.clone()],
            vec![one.clone(), z.clone(), inf.clone()],
            vec![inf.clone(), inf.clone(), z.clone()],
        ];
        let labels = vec!["a".into(), "b".into(), "w".into()];
        let s = SemiMetricSpace::from_parts(labels.clone(), matrix, Some(2)).unwrap();
        assert!(s.validate().is_valid());

        let matrix = vec![
            vec![z.clone(), inf.clone(), inf.clone()],
            vec![inf.clone(), z.clone(), inf.clone()],
            vec![inf.clone(), inf.clone(), z.clone()],
        ];
        let s = SemiMetricSpace::from_parts(labels, matrix, Some(2)).unwrap();
        let report = s.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, SpaceViolation::MultipleRemote { .. })));
    }

    #[test]
    fn validate_flags_diagonal_zero_and_stray_entries() {
        let one = MulRat::from_int(1);
        let matrix = vec![
            vec![one.clone(), one.clone(), one.clone()],
            vec![one.clone(), MulRat::Zero, MulRat::Inf],
            vec![one.clone(), MulRat::Inf, MulRat::Zero],
        ];
        let s = SemiMetricSpace::from_parts(
            vec!["a".into(), "b".into(), "c".into()],
            matrix,
            None,
        )
        .unwrap();
        let report = s.validate();
        assert!(report
            .violations
            .contains(&SpaceViolation::NonzeroDiagonal { x: 0 }));
        assert!(report
            .violations
            .contains(&SpaceViolation::StrayInfinity { x: 1, y: 2 }));
    }

    #[test]
    fn inversion_example_on_the_line() {
        let s = line_space(&[0, 1, 3, 7]);
        let inverted = s.metric_inversion(0, &MulRat::one()).unwrap();
        // d'(1,3) = d(1,3)/(d(1,0) d(3,0)) = 2/3.
        assert_eq!(inverted.distance(1, 2), &MulRat::ratio(2, 3));
        assert!(inverted.distance(0, 1).is_infinite());
        assert_eq!(inverted.omega(), Some(0));
        assert!(inverted.validate().is_valid());
    }

    #[test]
    fn inversion_handles_an_existing_remote_point() {
        let s = line_space(&[0, 1, 3, 7]).with_remote_point("w").unwrap();
        let inverted = s.metric_inversion(0, &MulRat::one()).unwrap();
        // d'(x, old omega) = r^2 / d(x, center) by symbolic cancellation.
        assert_eq!(inverted.distance(1, 4), &MulRat::one());
        assert_eq!(inverted.distance(2, 4), &MulRat::ratio(1, 3));
        assert!(inverted.validate().is_valid());
    }

    #[test]
    fn double_inversion_restores_a_space_with_remote_point() {
        let s = line_space(&[0, 1, 3, 7]).with_remote_point("w").unwrap();
        let r = MulRat::ratio(3, 2);
        let once = s.metric_inversion(1, &r).unwrap();
        // Inverting back at the original remote point undoes the inversion.
        let twice = once.metric_inversion(4, &r).unwrap();
        assert_eq!(twice, s);
    }

    #[test]
    fn inversion_rejects_remote_center() {
        let s = line_space(&[0, 1, 3, 7]).with_remote_point("w").unwrap();
        assert_eq!(
            s.metric_inversion(4, &MulRat::one()).unwrap_err(),
            SpaceError::CenterAlreadyRemote
        );
    }

    #[test]
    fn rescale_preserves_validity() {
        let s = line_space(&[0, 2, 5]).with_remote_point("w").unwrap();
        let scaled = s.rescale(&MulRat::ratio(1, 2)).unwrap();
        assert_eq!(scaled.distance(0, 1), &MulRat::one());
        assert!(scaled.distance(0, 3).is_infinite());
        assert!(scaled.validate().is_valid());
        assert!(s.rescale(&MulRat::Inf).is_err());
    }
}
