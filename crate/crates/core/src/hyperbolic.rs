//! Gromov-product models and the canonical symmetrized structure.
//!
//! A model records, for a finite boundary point set, the pairwise Gromov
//! products `(x|y)` with respect to a basepoint — log-scale rationals with
//! `+inf` on the diagonal — together with the hyperbolicity constant `h`:
//! the largest gap between the two smallest products over any point
//! triple.  Two sources are supported: a finite metric space with a
//! chosen basepoint (products by the half-sum formula) and a rooted tree
//! whose leaves form the boundary (products by lowest-common-ancestor
//! depth, which always gives `h = 0`).
//!
//! The model induces the semi-metric `d(x, y) = e^{-(x|y)}` and hence a
//! triple assignment; everything stays exact because the scalars carry
//! logarithms ([`LogRat`]).  On top of that sit the operations this
//! module exists for: [`perturb`] shifts every nondegenerate table entry
//! by seeded noise within `[-eps, eps]` per coordinate, [`symmetrize`]
//! projects any such raw table back onto the signed-equivariant maps by
//! averaging over all 24 permutations, and [`deviation_check`] measures
//! the largest Euclidean distance between two assignments in log scale
//! against the `10h` bound.  With per-coordinate noise at most `4h` the
//! symmetrized structure provably stays within `sqrt(96) h < 10h` of the
//! unperturbed one.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cross_ratio::{moebius_of, MoebiusTable, SubMoebiusMap};
use crate::l4::L4Point;
use crate::space::SemiMetricSpace;
use crate::symmetry::Perm4;
use crate::tuple::{admissible_tuples, nondegenerate_tuples, sorted_representatives, Point, Tuple4};
use crate::value::{ExtReal, LogRat, MulRat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("source space fails semi-metric validation with {violations} violation(s)")]
    SpaceInvalid { violations: usize },
    #[error("sources with an infinitely remote point are not supported")]
    RemotePointUnsupported,
    #[error("basepoint index out of range")]
    BasepointOutOfRange,
    #[error("triangle inequality fails on ({x}, {y}, {z})")]
    TriangleViolation { x: Point, y: Point, z: Point },
    #[error("product matrix shape does not match the boundary")]
    MatrixShape,
    #[error("duplicate boundary label {label:?}")]
    DuplicateLabel { label: String },
    #[error("diagonal product at {x} must be +inf")]
    DiagonalNotInfinite { x: Point },
    #[error("product matrix is asymmetric at ({x}, {y})")]
    Asymmetric { x: Point, y: Point },
    #[error("off-diagonal product at ({x}, {y}) must be finite")]
    OffDiagonalNotFinite { x: Point, y: Point },
    #[error("product at ({x}, {y}) must be nonnegative")]
    NegativeProduct { x: Point, y: Point },
    #[error("the two assignments are over different domains")]
    DomainMismatch,
    #[error("the noise amplitude must be nonnegative")]
    NegativeEps,
    #[error("the hyperbolicity constant must be nonnegative")]
    NegativeH,
    #[error("a boundary needs at least two leaves")]
    TooFewLeaves,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("edge {parent:?} -> {child:?} must have positive length")]
    NonpositiveLength { parent: String, child: String },
    #[error("node {child:?} has more than one parent")]
    MultipleParents { child: String },
    #[error("the root cannot appear as a child")]
    RootHasParent,
    #[error("edge {parent:?} -> {child:?} is a self-loop")]
    SelfLoop { parent: String, child: String },
    #[error("node {label:?} is not connected to the root")]
    Disconnected { label: String },
}

/// A rooted tree with positive rational edge lengths; the leaf set is a
/// boundary model source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    labels: Vec<String>,
    parent: Vec<Option<(usize, BigRational)>>,
    children: Vec<usize>,
    root: usize,
}

impl Tree {
    /// Builds a tree from `(parent, child, length)` edges.  Every node
    /// except the root must appear exactly once as a child, with positive
    /// edge length, and must reach the root through parent links.
    pub fn from_edges(
        root: &str,
        edges: &[(String, String, BigRational)],
    ) -> Result<Self, TreeError> {
        let mut labels: Vec<String> = vec![root.to_string()];
        let mut index = BTreeMap::new();
        index.insert(root.to_string(), 0usize);
        let intern = |labels: &mut Vec<String>, index: &mut BTreeMap<String, usize>, l: &str| {
            *index.entry(l.to_string()).or_insert_with(|| {
                labels.push(l.to_string());
                labels.len() - 1
            })
        };
        let mut parent: Vec<Option<(usize, BigRational)>> = vec![None];
        let mut children = vec![0usize];
        for (p, c, len) in edges {
            if p == c {
                return Err(TreeError::SelfLoop {
                    parent: p.clone(),
                    child: c.clone(),
                });
            }
            if !len.is_positive() {
                return Err(TreeError::NonpositiveLength {
                    parent: p.clone(),
                    child: c.clone(),
                });
            }
            let pi = intern(&mut labels, &mut index, p);
            let ci = intern(&mut labels, &mut index, c);
            parent.resize(labels.len(), None);
            children.resize(labels.len(), 0);
            if ci == 0 {
                return Err(TreeError::RootHasParent);
            }
            if parent[ci].is_some() {
                return Err(TreeError::MultipleParents { child: c.clone() });
            }
            parent[ci] = Some((pi, len.clone()));
            children[pi] += 1;
        }
        let tree = Tree {
            labels,
            parent,
            children,
            root: 0,
        };
        // Every node must reach the root; a missing parent link or a
        // parent cycle both surface as a failed walk.
        for id in 0..tree.labels.len() {
            let mut cursor = id;
            let mut steps = 0;
            while cursor != tree.root {
                match tree.parent[cursor] {
                    Some((up, _)) if steps <= tree.labels.len() => {
                        cursor = up;
                        steps += 1;
                    }
                    _ => {
                        return Err(TreeError::Disconnected {
                            label: tree.labels[id].clone(),
                        })
                    }
                }
            }
        }
        Ok(tree)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn node_label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The `(parent, child, length)` edges in child-id order.
    pub fn edges(&self) -> Vec<(String, String, BigRational)> {
        (0..self.labels.len())
            .filter_map(|id| {
                self.parent[id].as_ref().map(|(up, len)| {
                    (self.labels[*up].clone(), self.labels[id].clone(), len.clone())
                })
            })
            .collect()
    }

    /// Leaf node ids, sorted by label.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.labels.len())
            .filter(|&id| id != self.root && self.children[id] == 0)
            .collect();
        out.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        out
    }

    /// Length of the path from the root down to `id`.
    pub fn depth(&self, id: usize) -> BigRational {
        let mut total = BigRational::zero();
        let mut cursor = id;
        while let Some((up, len)) = &self.parent[cursor] {
            total += len;
            cursor = *up;
        }
        total
    }

    /// Deepest common ancestor of two nodes.
    pub fn lca(&self, a: usize, b: usize) -> usize {
        let mut ancestors = vec![a];
        let mut cursor = a;
        while let Some((up, _)) = &self.parent[cursor] {
            cursor = *up;
            ancestors.push(cursor);
        }
        let mut cursor = b;
        loop {
            if ancestors.contains(&cursor) {
                return cursor;
            }
            match &self.parent[cursor] {
                Some((up, _)) => cursor = *up,
                None => return self.root,
            }
        }
    }
}

/// A complete balanced binary tree with unit edge lengths, leaves at the
/// given depth.  Nodes are labelled by their root path over `{0, 1}`.
/// Test and demo fixture.
pub fn balanced_binary_tree(depth: usize) -> Tree {
    let mut edges = Vec::new();
    let mut frontier = vec!["r".to_string()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for node in &frontier {
            for bit in ["0", "1"] {
                let child = format!("{node}{bit}");
                edges.push((node.clone(), child.clone(), BigRational::one()));
                next.push(child);
            }
        }
        frontier = next;
    }
    Tree::from_edges("r", &edges).expect("construction is well-formed")
}

/// Pairwise Gromov products of a finite boundary with respect to a
/// basepoint, plus the hyperbolicity constant they exhibit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GromovProductModel {
    labels: Vec<String>,
    gp: Vec<ExtReal>,
    h: BigRational,
}

impl GromovProductModel {
    /// Builds a model from an explicit product matrix: symmetric, `+inf`
    /// exactly on the diagonal, finite and nonnegative elsewhere.
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<ExtReal>>) -> Result<Self, ModelError> {
        let n = labels.len();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(ModelError::DuplicateLabel { label: l.clone() });
            }
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(ModelError::MatrixShape);
        }
        for x in 0..n {
            if matrix[x][x] != ExtReal::PosInf {
                return Err(ModelError::DiagonalNotInfinite { x });
            }
            for y in x + 1..n {
                if matrix[x][y] != matrix[y][x] {
                    return Err(ModelError::Asymmetric { x, y });
                }
                match matrix[x][y].as_rational() {
                    None => return Err(ModelError::OffDiagonalNotFinite { x, y }),
                    // Products with respect to a basepoint are half-sums
                    // of distances and never negative; several topology
                    // bounds rely on this.
                    Some(q) if q.is_negative() => {
                        return Err(ModelError::NegativeProduct { x, y })
                    }
                    Some(_) => {}
                }
            }
        }
        let gp: Vec<ExtReal> = matrix.into_iter().flatten().collect();
        let h = hyperbolicity_of(n, &gp);
        Ok(GromovProductModel { labels, gp, h })
    }

    /// Products from a metric space: `(x|y) = (|xo| + |yo| - |xy|) / 2`
    /// over the points other than the basepoint `o`.  The source must be
    /// a genuine finite metric (triangle inequality included).
    pub fn from_metric(
        space: &SemiMetricSpace<MulRat>,
        basepoint: Point,
    ) -> Result<Self, ModelError> {
        let n = space.n();
        if basepoint >= n {
            return Err(ModelError::BasepointOutOfRange);
        }
        let report = space.validate();
        if !report.is_valid() {
            return Err(ModelError::SpaceInvalid {
                violations: report.violations.len(),
            });
        }
        if space.omega().is_some() {
            return Err(ModelError::RemotePointUnsupported);
        }
        let dist = |x: Point, y: Point| -> BigRational {
            match space.distance(x, y) {
                MulRat::Zero => BigRational::zero(),
                MulRat::Pos(q) => q.clone(),
                // A valid space with no declared remote point has no
                // infinite entries.
                MulRat::Inf => unreachable!("validated finite metric"),
            }
        };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if dist(x, z) > dist(x, y) + dist(y, z) {
                        return Err(ModelError::TriangleViolation { x, y, z });
                    }
                }
            }
        }
        let boundary: Vec<Point> = (0..n).filter(|&x| x != basepoint).collect();
        let labels = boundary
            .iter()
            .map(|&x| space.label(x).to_string())
            .collect();
        let m = boundary.len();
        let mut gp = vec![ExtReal::PosInf; m * m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    let (x, y) = (boundary[i], boundary[j]);
                    let value =
                        (dist(x, basepoint) + dist(y, basepoint) - dist(x, y)) / BigInt::from(2);
                    gp[i * m + j] = ExtReal::Finite(value);
                }
            }
        }
        let h = hyperbolicity_of(m, &gp);
        Ok(GromovProductModel { labels, gp, h })
    }

    /// Products from a rooted tree: the boundary is the leaf set (sorted
    /// by label) and `(u|v)` is the depth of the lowest common ancestor.
    pub fn from_tree(tree: &Tree) -> Result<Self, ModelError> {
        let leaves = tree.leaves();
        if leaves.len() < 2 {
            return Err(ModelError::TooFewLeaves);
        }
        let labels = leaves
            .iter()
            .map(|&id| tree.node_label(id).to_string())
            .collect();
        let m = leaves.len();
        let mut gp = vec![ExtReal::PosInf; m * m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    gp[i * m + j] = ExtReal::Finite(tree.depth(tree.lca(leaves[i], leaves[j])));
                }
            }
        }
        let h = hyperbolicity_of(m, &gp);
        Ok(GromovProductModel { labels, gp, h })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<Point> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn product(&self, x: Point, y: Point) -> &ExtReal {
        &self.gp[x * self.n() + y]
    }

    /// The hyperbolicity constant: the largest gap between the two
    /// smallest products over any triple of distinct boundary points.
    pub fn hyperbolicity_constant(&self) -> &BigRational {
        &self.h
    }

    /// The boundary semi-metric `d(x, y) = e^{-(x|y)}`.
    pub fn semimetric(&self) -> SemiMetricSpace<LogRat> {
        SemiMetricSpace::from_fn(self.labels.clone(), None, |x, y| {
            LogRat::from_log(self.product(x, y).neg())
        })
    }

    /// The triple assignment of the boundary semi-metric.
    pub fn basepoint_moebius(&self) -> SubMoebiusMap<LogRat> {
        moebius_of(&self.semimetric()).expect("model semi-metrics are valid")
    }
}

fn hyperbolicity_of(n: usize, gp: &[ExtReal]) -> BigRational {
    let mut h = BigRational::zero();
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                let mut triple = [
                    gp[x * n + y].as_rational().expect("off-diagonal finite"),
                    gp[x * n + z].as_rational().expect("off-diagonal finite"),
                    gp[y * n + z].as_rational().expect("off-diagonal finite"),
                ];
                triple.sort();
                let gap = triple[1] - triple[0];
                if gap > h {
                    h = gap;
                }
            }
        }
    }
    h
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetrizeError {
    #[error("missing entry for tuple {tuple:?}")]
    Missing { tuple: [Point; 4] },
    #[error("degenerate tuple {tuple:?} must carry its pinned pattern")]
    DegenerateMismatch { tuple: [Point; 4] },
    #[error("entry for tuple {tuple:?} must be finite")]
    NotFinite { tuple: [Point; 4] },
    #[error("entry for tuple {tuple:?} must have log-coordinates summing to zero")]
    NotClosed { tuple: [Point; 4] },
}

fn finite_logs(coords: &[LogRat; 3]) -> Option<[&BigRational; 3]> {
    match (
        coords[0].log().as_rational(),
        coords[1].log().as_rational(),
        coords[2].log().as_rational(),
    ) {
        (Some(a), Some(b), Some(c)) => Some([a, b, c]),
        _ => None,
    }
}

/// The averaged value at one nondegenerate tuple:
///
/// ```text
///   M(P) = (1/24) sum over rho of sign(rho) phi(rho^-1) Mt(rho P)
/// ```
///
/// in log coordinates.  This is exactly the value [`symmetrize`] assigns;
/// it is exposed so the equivariance of the construction can be verified
/// at arbitrary tuples, not just representatives.
pub fn symmetrized_value(
    table: &MoebiusTable<LogRat>,
    t: &Tuple4,
) -> Result<[BigRational; 3], SymmetrizeError> {
    debug_assert!(t.is_nondegenerate());
    let mut sums = [
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    ];
    for rho in Perm4::all() {
        let image = t.apply(rho);
        let coords = table
            .get(image.entries())
            .ok_or(SymmetrizeError::Missing {
                tuple: *image.entries(),
            })?;
        let signed = crate::l4::signed_permute_triple(&rho.inverse().phi(), rho.sign(), coords);
        let logs = finite_logs(&signed).ok_or(SymmetrizeError::NotFinite {
            tuple: *image.entries(),
        })?;
        for k in 0..3 {
            sums[k] += logs[k];
        }
    }
    let size = BigRational::from_integer(BigInt::from(24));
    Ok(sums.map(|s| s / &size))
}

/// Projects a raw table onto the signed-equivariant maps by averaging
/// each orbit with signs and coordinate permutations.  Degenerate tuples
/// must already carry their pinned patterns and are passed through
/// unchanged; nondegenerate entries must be finite with log-coordinates
/// summing to zero.  Equivariant inputs are fixed points.
pub fn symmetrize(table: &MoebiusTable<LogRat>) -> Result<SubMoebiusMap<LogRat>, SymmetrizeError> {
    let n = table.n();
    for t in admissible_tuples(n) {
        let coords = table.get(t.entries()).ok_or(SymmetrizeError::Missing {
            tuple: *t.entries(),
        })?;
        match t.degeneracy() {
            Some(kind) => {
                if coords != &kind.pattern::<LogRat>() {
                    return Err(SymmetrizeError::DegenerateMismatch {
                        tuple: *t.entries(),
                    });
                }
            }
            None => {
                let logs = finite_logs(coords).ok_or(SymmetrizeError::NotFinite {
                    tuple: *t.entries(),
                })?;
                if !(logs[0] + logs[1] + logs[2]).is_zero() {
                    return Err(SymmetrizeError::NotClosed {
                        tuple: *t.entries(),
                    });
                }
            }
        }
    }
    let mut reps = BTreeMap::new();
    for rep in sorted_representatives(n) {
        let avg = symmetrized_value(table, &Tuple4(rep))?;
        let coords = avg.map(LogRat::from_log_rational);
        let point = L4Point::from_coords(coords).expect("averages of closed triples are closed");
        reps.insert(rep, point);
    }
    Ok(SubMoebiusMap::from_reps(table.labels().to_vec(), reps)
        .expect("representatives are complete by construction"))
}

fn tuple_rng(seed: u64, tuple: &[Point; 4]) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    for (i, &p) in tuple.iter().enumerate() {
        key[8 + 2 * i..10 + 2 * i].copy_from_slice(&(p as u16).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Shifts the first two log-coordinates of every nondegenerate entry of
/// the model's assignment by independent deterministic noise in
/// `[-eps, eps]`, re-closing the third coordinate to keep the sum zero;
/// degenerate tuples are untouched.  Noise is keyed by `(seed, tuple)`,
/// so the result is independent of evaluation order; amplitudes are
/// quantized to `eps * k / 1024` with integer `k`.
pub fn perturb(
    model: &GromovProductModel,
    eps: &BigRational,
    seed: u64,
) -> Result<MoebiusTable<LogRat>, ModelError> {
    if eps.is_negative() {
        return Err(ModelError::NegativeEps);
    }
    let mut table = model.basepoint_moebius().to_table();
    let grain = BigRational::from_integer(BigInt::from(1024));
    for t in nondegenerate_tuples(model.n()) {
        let coords = table.get(t.entries()).expect("complete table").clone();
        let logs = finite_logs(&coords).expect("nondegenerate values are finite");
        let mut rng = tuple_rng(seed, t.entries());
        let mut draw = || {
            let k = rng.gen_range(-1024i64..=1024);
            eps * BigRational::from_integer(BigInt::from(k)) / &grain
        };
        let u = logs[0] + draw();
        let v = logs[1] + draw();
        let w = -(&u + &v);
        table.set(
            *t.entries(),
            [
                LogRat::from_log_rational(u),
                LogRat::from_log_rational(v),
                LogRat::from_log_rational(w),
            ],
        );
    }
    Ok(table)
}

/// Outcome of comparing two assignments in log scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationReport {
    /// Largest squared Euclidean coordinate distance over nondegenerate
    /// tuples.
    pub max_squared: BigRational,
    /// The squared acceptance bound `(10h)^2`.
    pub bound_squared: BigRational,
    pub pass: bool,
    /// The first tuple attaining the maximum.
    pub worst: Option<[Point; 4]>,
}

/// Measures the worst-case disagreement between two assignments over the
/// same domain and compares it against the `10h` bound.
pub fn deviation_check(
    m: &SubMoebiusMap<LogRat>,
    m_o: &SubMoebiusMap<LogRat>,
    h: &BigRational,
) -> Result<DeviationReport, ModelError> {
    if m.labels() != m_o.labels() {
        return Err(ModelError::DomainMismatch);
    }
    if h.is_negative() {
        return Err(ModelError::NegativeH);
    }
    let mut max_squared = BigRational::zero();
    let mut worst = None;
    for t in nondegenerate_tuples(m.n()) {
        let a = m.eval(&t).expect("admissible");
        let b = m_o.eval(&t).expect("admissible");
        let la = finite_logs(a.coords()).expect("regular values");
        let lb = finite_logs(b.coords()).expect("regular values");
        let mut squared = BigRational::zero();
        for k in 0..3 {
            let diff = la[k] - lb[k];
            squared += &diff * &diff;
        }
        if squared > max_squared {
            max_squared = squared;
            worst = Some(*t.entries());
        }
    }
    let ten_h = BigRational::from_integer(BigInt::from(10)) * h;
    let bound_squared = &ten_h * &ten_h;
    let pass = max_squared <= bound_squared;
    Ok(DeviationReport {
        max_squared,
        bound_squared,
        pass,
        worst,
    })
}

impl fmt::Display for DeviationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max squared deviation {} against bound {}: {}",
            self.max_squared,
            self.bound_squared,
            if self.pass { "pass" } else { "fail" }
        )
    }
}
