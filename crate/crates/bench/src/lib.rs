//! Deterministic fixtures shared by the criterion benchmarks.

use moebius_core::{
    balanced_binary_tree, line_space, moebius_of, GromovProductModel, MulRat, SemiMetricSpace,
    SubMoebiusMap,
};

/// Line space on the integer coordinates `0..coords` plus one infinitely
/// remote point, so the benchmarked instances have `coords + 1` points.
pub fn line_with_remote(coords: i64) -> SemiMetricSpace<MulRat> {
    let coords: Vec<i64> = (0..coords).collect();
    line_space(&coords)
        .with_remote_point("w")
        .expect("the remote label is fresh")
}

/// Cross-ratio assignment of [`line_with_remote`].
pub fn line_map(coords: i64) -> SubMoebiusMap<MulRat> {
    moebius_of(&line_with_remote(coords)).expect("line spaces are valid")
}

/// Boundary model of the balanced binary tree of the given depth, giving
/// `2^depth` boundary points with hyperbolicity constant zero.
pub fn tree_model(depth: usize) -> GromovProductModel {
    GromovProductModel::from_tree(&balanced_binary_tree(depth))
        .expect("balanced trees have enough leaves")
}
