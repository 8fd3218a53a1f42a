//! Shared fixtures for the acceptance suite: a deterministic corpus of
//! random rational semi-metric spaces plus the tree and graph models the
//! hyperbolic criteria exercise.  Everything here is seeded, so every run
//! sees byte-identical inputs.

use moebius_core::{GromovProductModel, MulRat, SemiMetricSpace, Tree, Value};
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One random space on `n` points: symmetric positive rationals with
/// numerators and denominators up to 12, and, when requested, the last
/// point infinitely remote.
pub fn random_space(n: usize, with_remote: bool, seed: u64) -> SemiMetricSpace<MulRat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..n).map(|i| format!("p{i}")).collect::<Vec<_>>();
    let omega = with_remote.then_some(n - 1);
    let mut matrix = vec![vec![MulRat::Zero; n]; n];
    for x in 0..n {
        for y in (x + 1)..n {
            let value = if omega == Some(y) {
                MulRat::infinity()
            } else {
                MulRat::ratio(rng.gen_range(1..=12), rng.gen_range(1..=12))
            };
            matrix[x][y] = value.clone();
            matrix[y][x] = value;
        }
    }
    let space = SemiMetricSpace::from_parts(labels, matrix, omega).expect("well-formed matrix");
    assert!(space.is_valid());
    space
}

/// The corpus every exhaustive criterion runs over: 104 spaces, thirteen
/// with and thirteen without a remote point for each size in `4..=7`.
pub fn standard_corpus() -> Vec<SemiMetricSpace<MulRat>> {
    let mut out = Vec::with_capacity(104);
    for n in 4..=7usize {
        for k in 0..13u64 {
            out.push(random_space(n, false, 1000 * n as u64 + 2 * k));
            out.push(random_space(n, true, 1000 * n as u64 + 2 * k + 1));
        }
    }
    out
}

/// A random metric space with all distances in `[1, 2]`.  Any such matrix
/// satisfies the triangle inequality outright, so it always yields a
/// Gromov-product model, and generic instances have a strictly positive
/// hyperbolicity constant.
pub fn band_metric_space(n: usize, seed: u64) -> SemiMetricSpace<MulRat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..n).map(|i| format!("q{i}")).collect::<Vec<_>>();
    let space = SemiMetricSpace::from_fn(labels, None, |_, _| {
        let twelfths: i64 = rng.gen_range(12..=24);
        MulRat::ratio(twelfths, 12)
    });
    assert!(space.is_valid());
    space
}

/// A five-leaf tree with mixed integer edge lengths; its leaves carry an
/// exactly tree-like (0-hyperbolic) Gromov-product model.
pub fn five_leaf_tree() -> Tree {
    let e = |p: &str, c: &str, n: i64| {
        (
            p.to_string(),
            c.to_string(),
            BigRational::from_integer(n.into()),
        )
    };
    Tree::from_edges(
        "r",
        &[
            e("r", "a", 1),
            e("r", "b", 2),
            e("a", "c", 1),
            e("a", "l1", 3),
            e("c", "l2", 1),
            e("c", "l3", 2),
            e("b", "l4", 1),
            e("b", "l5", 5),
        ],
    )
    .expect("well-formed tree")
}

/// A 4-cycle graph metric with a pendant basepoint; its Gromov-product
/// model has hyperbolicity constant exactly 1, giving the perturbation
/// criteria a genuinely non-tree-like h to work with.
pub fn cycle_with_basepoint() -> SemiMetricSpace<MulRat> {
    let labels = ["o", "a", "b", "c", "d"].map(String::from).to_vec();
    let graph = [
        [0, 1, 2, 3, 2],
        [1, 0, 1, 2, 1],
        [2, 1, 0, 1, 2],
        [3, 2, 1, 0, 1],
        [2, 1, 2, 1, 0],
    ];
    SemiMetricSpace::from_fn(labels, None, |x, y| MulRat::from_int(graph[x][y]))
}

/// The cycle model, together with its hyperbolicity constant.
pub fn cycle_model() -> (GromovProductModel, BigRational) {
    let model = GromovProductModel::from_metric(&cycle_with_basepoint(), 0)
        .expect("graph metric satisfies the triangle inequality");
    let h = model.hyperbolicity_constant().clone();
    (model, h)
}
