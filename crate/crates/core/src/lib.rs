//! Exact arithmetic for Moebius and sub-Moebius structures on finite point
//! sets.
//!
//! A semi-metric on a finite set assigns every four points a cross-ratio
//! triple; the map from four-point tuples to such triples is the Moebius
//! structure of the semi-metric.  This crate computes these structures with
//! exact rational arithmetic, verifies the axioms that characterise them,
//! decides when an abstract triple assignment comes from a semi-metric, and
//! reconstructs the semi-metric when it does.  It also covers the metric
//! side of Gromov hyperbolic spaces: boundary semi-metrics at infinity,
//! controlled perturbations, symmetrization, and the topologies generated
//! by quasi-metric balls.
//!
//! Scalars come in two interchangeable backings: [`value::MulRat`] stores
//! the value itself as a big rational and [`value::LogRat`] stores its
//! logarithm, which keeps exponential expressions exact.  All algorithms
//! are generic over the [`value::Value`] trait.
//!
//! # Example
//!
//! ```
//! use moebius_core::{is_moebius, line_space, moebius_of, reconstruct_semimetric, ScaleTriple};
//!
//! // The line 0-1-3 with one infinitely remote point.
//! let space = line_space(&[0, 1, 3]).with_remote_point("w")?;
//! let m = moebius_of(&space)?;
//!
//! // The assignment satisfies every chart condition ...
//! assert!(is_moebius(&m).is_moebius);
//!
//! // ... so the chart fixing (0, 1, w) rebuilds the inducing semi-metric.
//! let chart = ScaleTriple::new(0, 1, 3)?;
//! assert_eq!(reconstruct_semimetric(&m, &chart)?, space);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cross_ratio;
pub mod hyperbolic;
pub mod io;
pub mod l4;
pub mod reconstruction;
pub mod space;
pub mod symmetry;
pub mod topology;
pub mod tuple;
pub mod value;

pub use cross_ratio::{
    cross_difference, moebius_equivalent, moebius_of, moebius_point, AxiomReport, AxiomViolation,
    CrossRatioError, MoebiusTable, SubMoebiusMap,
};
pub use hyperbolic::{
    balanced_binary_tree, deviation_check, perturb, symmetrize, symmetrized_value,
    DeviationReport, GromovProductModel, ModelError, SymmetrizeError, Tree, TreeError,
};
pub use io::{
    model_from_json, model_to_json, space_from_json, space_to_json, table_from_json,
    table_to_json, tree_from_json, tree_to_json, AnySpace, AnyTable, IoError,
};
pub use l4::{classify_triple, signed_permute_triple, Degenerate, L4Error, L4Point};
pub use reconstruction::{
    all_scale_triples, check_conditions, is_moebius, lambda_factor, mu_factor,
    reconstruct_semimetric, scaled_distance, scan_table, Condition, ConditionCheck,
    MoebiusVerdict, MoebiusWitness, ReconstructionError, ScaleTriple, ScaleTripleError, Side,
};
pub use space::{line_space, SemiMetricSpace, SpaceError, SpaceViolation, ValidationReport};
pub use symmetry::{phi, sign_of, Perm3, Perm4, PermError, Sign};
pub use topology::{
    ball, distance_ball, generate_topology, inverted_semimetric, same_topology,
    sandwich_check, scaled_gromov_product, standard_ball, standard_sandwich_scan,
    standard_u_set, submoebius_sandwich_scan, SandwichOutcome, SandwichReport, SandwichScan,
    SandwichVariant, SetKind, SubbaseSet, TopologyError,
};
pub use tuple::{
    admissible_tuples, is_admissible, nondegenerate_tuples, sorted_representatives, Point, Tuple4,
};
pub use value::{
    eval_fraction, parse_rational, ExtReal, LogRat, MulRat, Scale, Value, ValueParseError,
};
