//! JSON readers and writers for spaces, assignment tables, trees, and
//! Gromov-product models.
//!
//! All writers are deterministic: object keys are emitted in sorted
//! order and collections in their canonical internal order, so equal
//! inputs always serialize to identical bytes.  Readers validate
//! strictly — unknown or missing fields, malformed value strings, and
//! semantically invalid data are all reported with the offending field
//! or tuple named.
//!
//! Formats (all scalars are strings; `"inf"` denotes infinity):
//!
//! ```text
//! space:  { "points": [labels], "omega": label or null,
//!           "scale": "multiplicative" | "log",
//!           "matrix": [[distance strings]] }
//! table:  { "points": [labels], "scale": "multiplicative" | "log",
//!           "entries": [ { "tuple": [indices], "value": [3 strings] } ] }
//! tree:   { "root": label, "edges": [[parent, child, length]] }
//! model:  { "boundary": [labels], "gp": [[log-rational strings]] }
//! ```
//!
//! Space matrices must be fully populated — symmetry is validated,
//! never assumed.  Space and table entry strings are read on the
//! declared scale (multiplicative when the field is absent).
//! Model matrices carry base-point products in log scale with `"inf"`
//! exactly on the diagonal.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::cross_ratio::MoebiusTable;
use crate::hyperbolic::{GromovProductModel, ModelError, Tree, TreeError};
use crate::space::{SemiMetricSpace, SpaceError};
use crate::tuple::Point;
use crate::value::{parse_rational, ExtReal, LogRat, MulRat, Scale, Value, ValueParseError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field {field:?}: {message}")]
    Schema { field: String, message: String },
    #[error(transparent)]
    Value(#[from] ValueParseError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn schema(field: &str, message: impl Into<String>) -> IoError {
    IoError::Schema {
        field: field.to_string(),
        message: message.into(),
    }
}

/// A deserialized table together with the scale its entries were read
/// on.
#[derive(Clone, Debug)]
pub enum AnyTable {
    Multiplicative(MoebiusTable<MulRat>),
    Logarithmic(MoebiusTable<LogRat>),
}

impl AnyTable {
    pub fn scale(&self) -> Scale {
        match self {
            AnyTable::Multiplicative(_) => Scale::Multiplicative,
            AnyTable::Logarithmic(_) => Scale::Logarithmic,
        }
    }

    pub fn labels(&self) -> &[String] {
        match self {
            AnyTable::Multiplicative(t) => t.labels(),
            AnyTable::Logarithmic(t) => t.labels(),
        }
    }
}

fn object<'a>(value: &'a Json, what: &str, allowed: &[&str]) -> Result<&'a Map<String, Json>, IoError> {
    let map = value
        .as_object()
        .ok_or_else(|| schema(what, "expected a JSON object"))?;
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema(key, format!("unknown field in {what}")));
        }
    }
    Ok(map)
}

fn field<'a>(map: &'a Map<String, Json>, name: &str) -> Result<&'a Json, IoError> {
    map.get(name)
        .ok_or_else(|| schema(name, "missing required field"))
}

fn string_array(value: &Json, field_name: &str) -> Result<Vec<String>, IoError> {
    let array = value
        .as_array()
        .ok_or_else(|| schema(field_name, "expected an array"))?;
    array
        .iter()
        .map(|entry| {
            entry
                .as_str()
                .map(str::to_string)
                .ok_or_else(|| schema(field_name, "expected an array of strings"))
        })
        .collect()
}

fn value_matrix<V: Value>(value: &Json, field_name: &str, n: usize) -> Result<Vec<Vec<V>>, IoError> {
    let rows = value
        .as_array()
        .ok_or_else(|| schema(field_name, "expected an array of rows"))?;
    if rows.len() != n {
        return Err(schema(
            field_name,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let cells = row
                .as_array()
                .ok_or_else(|| schema(field_name, format!("row {i} is not an array")))?;
            if cells.len() != n {
                return Err(schema(
                    field_name,
                    format!("row {i} has {} entries, expected {n}", cells.len()),
                ));
            }
            cells
                .iter()
                .map(|cell| {
                    let text = cell
                        .as_str()
                        .ok_or_else(|| schema(field_name, format!("row {i} holds a non-string entry")))?;
                    Ok(V::decode(text)?)
                })
                .collect()
        })
        .collect()
}

/// A deserialized space together with the scale its entries were read
/// on.
#[derive(Clone, Debug)]
pub enum AnySpace {
    Multiplicative(SemiMetricSpace<MulRat>),
    Logarithmic(SemiMetricSpace<LogRat>),
}

impl AnySpace {
    pub fn scale(&self) -> Scale {
        match self {
            AnySpace::Multiplicative(_) => Scale::Multiplicative,
            AnySpace::Logarithmic(_) => Scale::Logarithmic,
        }
    }

    pub fn labels(&self) -> &[String] {
        match self {
            AnySpace::Multiplicative(s) => s.labels(),
            AnySpace::Logarithmic(s) => s.labels(),
        }
    }
}

/// Serializes a space to the canonical pretty JSON form; the matrix
/// entries are written on the backing's scale, which is recorded in the
/// `scale` field.
pub fn space_to_json<V: Value>(space: &SemiMetricSpace<V>) -> String {
    let n = space.n();
    let matrix: Vec<Vec<String>> = (0..n)
        .map(|x| (0..n).map(|y| space.distance(x, y).encode()).collect())
        .collect();
    let omega = match space.omega() {
        Some(w) => json!(space.label(w)),
        None => Json::Null,
    };
    let doc = json!({
        "points": space.labels(),
        "omega": omega,
        "scale": V::SCALE.as_str(),
        "matrix": matrix,
    });
    serde_json::to_string_pretty(&doc).expect("serialization of plain maps cannot fail")
}

/// Reads a space from JSON on whichever scale it declares
/// (multiplicative when the `scale` field is absent), including full
/// construction checks (shape, duplicate labels, remote-point
/// resolution).
pub fn space_from_json(text: &str) -> Result<AnySpace, IoError> {
    let doc: Json = serde_json::from_str(text)?;
    let map = object(&doc, "space", &["points", "omega", "scale", "matrix"])?;
    let labels = string_array(field(map, "points")?, "points")?;
    let omega = match field(map, "omega")? {
        Json::Null => None,
        Json::String(label) => {
            let index = labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| schema("omega", format!("label {label:?} is not in points")))?;
            Some(index)
        }
        _ => return Err(schema("omega", "expected a label string or null")),
    };
    let scale = match map.get("scale") {
        None => Scale::Multiplicative,
        Some(Json::String(s)) if s == Scale::Multiplicative.as_str() => Scale::Multiplicative,
        Some(Json::String(s)) if s == Scale::Logarithmic.as_str() => Scale::Logarithmic,
        Some(Json::String(s)) => {
            return Err(schema("scale", format!("unknown scale {s:?}")));
        }
        Some(_) => return Err(schema("scale", "expected a string")),
    };
    let matrix_json = field(map, "matrix")?;
    let n = labels.len();
    Ok(match scale {
        Scale::Multiplicative => {
            let matrix = value_matrix::<MulRat>(matrix_json, "matrix", n)?;
            AnySpace::Multiplicative(SemiMetricSpace::from_parts(labels, matrix, omega)?)
        }
        Scale::Logarithmic => {
            let matrix = value_matrix::<LogRat>(matrix_json, "matrix", n)?;
            AnySpace::Logarithmic(SemiMetricSpace::from_parts(labels, matrix, omega)?)
        }
    })
}

/// Serializes a table to the canonical pretty JSON form; the entry
/// strings are written on the backing's scale, which is recorded in the
/// `scale` field.
pub fn table_to_json<V: Value>(table: &MoebiusTable<V>) -> String {
    let entries: Vec<Json> = table
        .entries()
        .map(|(tuple, value)| {
            json!({
                "tuple": tuple,
                "value": value.iter().map(Value::encode).collect::<Vec<String>>(),
            })
        })
        .collect();
    let doc = json!({
        "points": table.labels(),
        "scale": V::SCALE.as_str(),
        "entries": entries,
    });
    serde_json::to_string_pretty(&doc).expect("serialization of plain maps cannot fail")
}

fn table_entries_from_json<V: Value>(
    entries: &[Json],
    n: usize,
) -> Result<BTreeMap<[Point; 4], [V; 3]>, IoError> {
    let mut out = BTreeMap::new();
    for (i, entry) in entries.iter().enumerate() {
        let map = object(entry, "entries", &["tuple", "value"])?;
        let tuple_json = field(map, "tuple")?
            .as_array()
            .ok_or_else(|| schema("tuple", format!("entry {i}: expected an array")))?;
        if tuple_json.len() != 4 {
            return Err(schema(
                "tuple",
                format!("entry {i}: expected 4 point indices, found {}", tuple_json.len()),
            ));
        }
        let mut tuple = [0 as Point; 4];
        for (slot, cell) in tuple.iter_mut().zip(tuple_json) {
            let id = cell
                .as_u64()
                .ok_or_else(|| schema("tuple", format!("entry {i}: indices must be nonnegative integers")))?;
            if id as usize >= n {
                return Err(schema(
                    "tuple",
                    format!("entry {i}: index {id} is outside the {n} declared points"),
                ));
            }
            *slot = id as Point;
        }
        let value_json = field(map, "value")?
            .as_array()
            .ok_or_else(|| schema("value", format!("entry {i}: expected an array")))?;
        if value_json.len() != 3 {
            return Err(schema(
                "value",
                format!("entry {i}: expected 3 coordinates, found {}", value_json.len()),
            ));
        }
        let mut coords = Vec::with_capacity(3);
        for cell in value_json {
            let text = cell
                .as_str()
                .ok_or_else(|| schema("value", format!("entry {i}: coordinates must be strings")))?;
            coords.push(V::decode(text)?);
        }
        let coords: [V; 3] = coords.try_into().expect("length checked above");
        if out.insert(tuple, coords).is_some() {
            return Err(schema("tuple", format!("entry {i}: duplicate tuple {tuple:?}")));
        }
    }
    Ok(out)
}

/// Reads a table from JSON on whichever scale it declares
/// (multiplicative when the `scale` field is absent).
pub fn table_from_json(text: &str) -> Result<AnyTable, IoError> {
    let doc: Json = serde_json::from_str(text)?;
    let map = object(&doc, "table", &["points", "scale", "entries"])?;
    let labels = string_array(field(map, "points")?, "points")?;
    for (i, label) in labels.iter().enumerate() {
        if labels[..i].contains(label) {
            return Err(schema("points", format!("duplicate label {label:?}")));
        }
    }
    let scale = match map.get("scale") {
        None => Scale::Multiplicative,
        Some(Json::String(s)) if s == Scale::Multiplicative.as_str() => Scale::Multiplicative,
        Some(Json::String(s)) if s == Scale::Logarithmic.as_str() => Scale::Logarithmic,
        Some(Json::String(s)) => {
            return Err(schema("scale", format!("unknown scale {s:?}")));
        }
        Some(_) => return Err(schema("scale", "expected a string")),
    };
    let entries = field(map, "entries")?
        .as_array()
        .ok_or_else(|| schema("entries", "expected an array"))?;
    let n = labels.len();
    Ok(match scale {
        Scale::Multiplicative => {
            AnyTable::Multiplicative(MoebiusTable::new(labels, table_entries_from_json(entries, n)?))
        }
        Scale::Logarithmic => {
            AnyTable::Logarithmic(MoebiusTable::new(labels, table_entries_from_json(entries, n)?))
        }
    })
}

/// Serializes a tree to the canonical pretty JSON form.
pub fn tree_to_json(tree: &Tree) -> String {
    let edges: Vec<Json> = tree
        .edges()
        .into_iter()
        .map(|(parent, child, length)| json!([parent, child, length.to_string()]))
        .collect();
    let doc = json!({
        "root": tree.node_label(tree.root()),
        "edges": edges,
    });
    serde_json::to_string_pretty(&doc).expect("serialization of plain maps cannot fail")
}

/// Reads a tree from JSON, enforcing the usual structural rules
/// (positive lengths, unique parents, connectivity).
pub fn tree_from_json(text: &str) -> Result<Tree, IoError> {
    let doc: Json = serde_json::from_str(text)?;
    let map = object(&doc, "tree", &["root", "edges"])?;
    let root = field(map, "root")?
        .as_str()
        .ok_or_else(|| schema("root", "expected a label string"))?;
    let edges_json = field(map, "edges")?
        .as_array()
        .ok_or_else(|| schema("edges", "expected an array"))?;
    let mut edges: Vec<(String, String, BigRational)> = Vec::with_capacity(edges_json.len());
    for (i, edge) in edges_json.iter().enumerate() {
        let triple = edge
            .as_array()
            .filter(|parts| parts.len() == 3)
            .ok_or_else(|| schema("edges", format!("edge {i}: expected [parent, child, length]")))?;
        let parent = triple[0]
            .as_str()
            .ok_or_else(|| schema("edges", format!("edge {i}: parent must be a string")))?;
        let child = triple[1]
            .as_str()
            .ok_or_else(|| schema("edges", format!("edge {i}: child must be a string")))?;
        let length_text = triple[2]
            .as_str()
            .ok_or_else(|| schema("edges", format!("edge {i}: length must be a rational string")))?;
        let length = parse_rational("edge length", length_text)?;
        edges.push((parent.to_string(), child.to_string(), length));
    }
    Ok(Tree::from_edges(root, &edges)?)
}

/// Serializes a model to the canonical pretty JSON form: base-point
/// products as log-rational strings, `"inf"` on the diagonal.
pub fn model_to_json(model: &GromovProductModel) -> String {
    let n = model.n();
    let gp: Vec<Vec<String>> = (0..n)
        .map(|x| (0..n).map(|y| model.product(x, y).to_string()).collect())
        .collect();
    let doc = json!({
        "boundary": model.labels(),
        "gp": gp,
    });
    serde_json::to_string_pretty(&doc).expect("serialization of plain maps cannot fail")
}

/// Reads a model from JSON, enforcing symmetry, the infinite diagonal,
/// and finite nonnegative off-diagonal products.
pub fn model_from_json(text: &str) -> Result<GromovProductModel, IoError> {
    let doc: Json = serde_json::from_str(text)?;
    let map = object(&doc, "model", &["boundary", "gp"])?;
    let labels = string_array(field(map, "boundary")?, "boundary")?;
    let n = labels.len();
    let rows = field(map, "gp")?
        .as_array()
        .ok_or_else(|| schema("gp", "expected an array of rows"))?;
    if rows.len() != n {
        return Err(schema("gp", format!("expected {n} rows, found {}", rows.len())));
    }
    let mut matrix = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| schema("gp", format!("row {i} is not an array")))?;
        if cells.len() != n {
            return Err(schema(
                "gp",
                format!("row {i} has {} entries, expected {n}", cells.len()),
            ));
        }
        let mut out_row = Vec::with_capacity(n);
        for cell in cells {
            let text = cell
                .as_str()
                .ok_or_else(|| schema("gp", format!("row {i} holds a non-string entry")))?;
            out_row.push(text.parse::<ExtReal>()?);
        }
        matrix.push(out_row);
    }
    Ok(GromovProductModel::new(labels, matrix)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cross_ratio::moebius_of;
    use crate::hyperbolic::balanced_binary_tree;
    use crate::reconstruction::{reconstruct_semimetric, ScaleTriple};
    use crate::space::line_space;

    fn line5() -> SemiMetricSpace<MulRat> {
        line_space(&[0, 1, 2, 3, 7])
    }

    #[test]
    fn space_roundtrips_including_remote_points() {
        let spaces = [line5(), line5().with_remote_point("w").unwrap()];
        for space in spaces {
            let text = space_to_json(&space);
            let AnySpace::Multiplicative(back) = space_from_json(&text).unwrap() else {
                panic!("scale not preserved");
            };
            assert_eq!(back, space);
            // Serialization is deterministic.
            assert_eq!(space_to_json(&back), text);
        }
    }

    #[test]
    fn log_spaces_roundtrip() {
        let model =
            GromovProductModel::from_tree(&balanced_binary_tree(2)).unwrap();
        let chart = ScaleTriple::new(0, 1, 2).unwrap();
        let rec = reconstruct_semimetric(&model.basepoint_moebius(), &chart).unwrap();
        let text = space_to_json(&rec);
        assert!(text.contains("\"log\""));
        let AnySpace::Logarithmic(back) = space_from_json(&text).unwrap() else {
            panic!("scale not preserved");
        };
        assert_eq!(back, rec);
        assert_eq!(space_to_json(&back), text);
    }

    #[test]
    fn space_scale_defaults_to_multiplicative() {
        let absent = r#"{ "points": ["a", "b"], "omega": null,
                          "matrix": [["0", "1"], ["1", "0"]] }"#;
        let read = space_from_json(absent).unwrap();
        assert!(matches!(read, AnySpace::Multiplicative(_)));
        assert_eq!(read.scale(), Scale::Multiplicative);
        assert_eq!(read.labels(), ["a", "b"]);
        let unknown = r#"{ "points": ["a"], "omega": null, "scale": "decibel",
                           "matrix": [["0"]] }"#;
        assert!(matches!(
            space_from_json(unknown),
            Err(IoError::Schema { field, .. }) if field == "scale"
        ));
    }

    #[test]
    fn space_reader_rejects_malformed_documents() {
        assert!(matches!(space_from_json("not json"), Err(IoError::Json(_))));
        let missing = r#"{ "points": ["a"], "matrix": [["0"]] }"#;
        assert!(matches!(
            space_from_json(missing),
            Err(IoError::Schema { field, .. }) if field == "omega"
        ));
        let unknown = r#"{ "points": ["a"], "omega": null, "matrix": [["0"]], "extra": 1 }"#;
        assert!(matches!(
            space_from_json(unknown),
            Err(IoError::Schema { field, .. }) if field == "extra"
        ));
        let bad_omega = r#"{ "points": ["a"], "omega": "b", "matrix": [["0"]] }"#;
        assert!(matches!(
            space_from_json(bad_omega),
            Err(IoError::Schema { field, .. }) if field == "omega"
        ));
        let ragged = r#"{ "points": ["a", "b"], "omega": null, "matrix": [["0"]] }"#;
        assert!(matches!(
            space_from_json(ragged),
            Err(IoError::Schema { field, .. }) if field == "matrix"
        ));
        let bad_value = r#"{ "points": ["a"], "omega": null, "matrix": [["zero"]] }"#;
        assert!(matches!(space_from_json(bad_value), Err(IoError::Value(_))));
        let dup = r#"{ "points": ["a", "a"], "omega": null,
                       "matrix": [["0", "1"], ["1", "0"]] }"#;
        assert!(matches!(space_from_json(dup), Err(IoError::Space(_))));
    }

    #[test]
    fn multiplicative_tables_roundtrip() {
        let table = moebius_of(&line5()).unwrap().to_table();
        let text = table_to_json(&table);
        match table_from_json(&text).unwrap() {
            AnyTable::Multiplicative(back) => assert_eq!(back, table),
            AnyTable::Logarithmic(_) => panic!("scale not preserved"),
        }
    }

    #[test]
    fn log_tables_roundtrip() {
        let model =
            GromovProductModel::from_tree(&balanced_binary_tree(2)).unwrap();
        let table = model.basepoint_moebius().to_table();
        let text = table_to_json(&table);
        assert!(text.contains("\"log\""));
        match table_from_json(&text).unwrap() {
            AnyTable::Logarithmic(back) => assert_eq!(back, table),
            AnyTable::Multiplicative(_) => panic!("scale not preserved"),
        }
    }

    #[test]
    fn table_scale_defaults_to_multiplicative() {
        let text = r#"{
            "points": ["a", "b", "c", "d"],
            "entries": [ { "tuple": [0, 1, 2, 3], "value": ["1", "1", "1"] } ]
        }"#;
        match table_from_json(text).unwrap() {
            AnyTable::Multiplicative(table) => {
                assert_eq!(
                    table.get(&[0, 1, 2, 3]),
                    Some(&[MulRat::from_int(1), MulRat::from_int(1), MulRat::from_int(1)])
                );
            }
            AnyTable::Logarithmic(_) => panic!("default scale must be multiplicative"),
        }
    }

    #[test]
    fn table_reader_names_offending_entries() {
        let short = r#"{ "points": ["a"], "entries": [ { "tuple": [0, 0], "value": [] } ] }"#;
        assert!(matches!(
            table_from_json(short),
            Err(IoError::Schema { field, .. }) if field == "tuple"
        ));
        let out_of_range = r#"{ "points": ["a"],
            "entries": [ { "tuple": [0, 0, 0, 7], "value": ["1", "1", "1"] } ] }"#;
        let err = table_from_json(out_of_range).unwrap_err();
        assert!(err.to_string().contains('7'), "{err}");
        let bad_scale = r#"{ "points": [], "scale": "decimal", "entries": [] }"#;
        assert!(matches!(
            table_from_json(bad_scale),
            Err(IoError::Schema { field, .. }) if field == "scale"
        ));
        let duplicate = r#"{ "points": ["a", "b", "c", "d"], "entries": [
            { "tuple": [0, 1, 2, 3], "value": ["1", "1", "1"] },
            { "tuple": [0, 1, 2, 3], "value": ["2", "2", "2"] } ] }"#;
        assert!(matches!(
            table_from_json(duplicate),
            Err(IoError::Schema { field, .. }) if field == "tuple"
        ));
    }

    #[test]
    fn trees_roundtrip() {
        let tree = balanced_binary_tree(2);
        let text = tree_to_json(&tree);
        let back = tree_from_json(&text).unwrap();
        assert_eq!(back, tree);
        assert_eq!(tree_to_json(&back), text);
    }

    #[test]
    fn tree_reader_validates_structure() {
        let loop_doc = r#"{ "root": "r", "edges": [["r", "r", "1"]] }"#;
        assert!(matches!(tree_from_json(loop_doc), Err(IoError::Tree(_))));
        let bad_length = r#"{ "root": "r", "edges": [["r", "a", "x"]] }"#;
        assert!(matches!(tree_from_json(bad_length), Err(IoError::Value(_))));
        let not_triple = r#"{ "root": "r", "edges": [["r", "a"]] }"#;
        assert!(matches!(
            tree_from_json(not_triple),
            Err(IoError::Schema { field, .. }) if field == "edges"
        ));
    }

    #[test]
    fn models_roundtrip() {
        let model = GromovProductModel::from_tree(&balanced_binary_tree(2)).unwrap();
        let text = model_to_json(&model);
        assert!(text.contains("\"inf\""));
        let back = model_from_json(&text).unwrap();
        assert_eq!(back, model);
        assert_eq!(model_to_json(&back), text);
    }

    #[test]
    fn model_reader_applies_model_validation() {
        let asymmetric = r#"{ "boundary": ["a", "b"],
            "gp": [["inf", "1"], ["2", "inf"]] }"#;
        assert!(matches!(model_from_json(asymmetric), Err(IoError::Model(_))));
        let finite_diagonal = r#"{ "boundary": ["a", "b"],
            "gp": [["0", "1"], ["1", "inf"]] }"#;
        assert!(matches!(
            model_from_json(finite_diagonal),
            Err(IoError::Model(_))
        ));
        let negative = r#"{ "boundary": ["a", "b"],
            "gp": [["inf", "-1"], ["-1", "inf"]] }"#;
        assert!(matches!(model_from_json(negative), Err(IoError::Model(_))));
    }
}
