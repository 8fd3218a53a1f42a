//! Input plumbing: reading documents, telling the four document kinds
//! apart, resolving point labels, and parsing the scalar flags.
//!
//! Error taxonomy: [`CliError::Input`] is anything wrong with the
//! invocation or the bytes of an input file (exit code 2), while
//! [`CliError::Precondition`] is a well-formed document that the
//! requested operation cannot accept (exit code 3).  Failed mathematical
//! checks are not errors at all — they come back as failed reports.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use moebius_core::{
    model_from_json, moebius_of, parse_rational, space_from_json, table_from_json, tree_from_json,
    AnySpace, AnyTable, CrossRatioError, GromovProductModel, IoError, LogRat, MoebiusTable,
    MulRat, ScaleTriple, SubMoebiusMap, Tree, Value,
};
use num_rational::BigRational;
use serde_json::Value as Json;

#[derive(Clone, Debug)]
pub enum CliError {
    /// Malformed invocation or input document; exit code 2.
    Input(String),
    /// Well-formed input the operation cannot accept; exit code 3.
    Precondition(String),
}

impl CliError {
    pub fn input(message: impl Display) -> Self {
        CliError::Input(message.to_string())
    }

    pub fn precondition(message: impl Display) -> Self {
        CliError::Precondition(message.to_string())
    }
}

/// What a JSON document describes, decided by its top-level keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocKind {
    Space,
    Table,
    Model,
    Tree,
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn bad_document(path: &Path, error: &IoError) -> CliError {
    CliError::input(format!("{}: {error}", path.display()))
}

/// Decides the document kind from the top-level object keys: spaces have
/// a `matrix`, tables an `entries` list, models a `gp` matrix, and trees
/// an `edges` list.
pub fn detect_kind(path: &Path, text: &str) -> Result<DocKind, CliError> {
    let doc: Json = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("{}: invalid JSON: {e}", path.display())))?;
    let Some(map) = doc.as_object() else {
        return Err(CliError::input(format!(
            "{}: expected a JSON object at the top level",
            path.display()
        )));
    };
    if map.contains_key("matrix") {
        Ok(DocKind::Space)
    } else if map.contains_key("entries") {
        Ok(DocKind::Table)
    } else if map.contains_key("gp") {
        Ok(DocKind::Model)
    } else if map.contains_key("edges") {
        Ok(DocKind::Tree)
    } else {
        Err(CliError::input(format!(
            "{}: unrecognized document: expected a space (matrix), table (entries), \
             model (gp), or tree (edges)",
            path.display()
        )))
    }
}

fn kind_name(kind: DocKind) -> &'static str {
    match kind {
        DocKind::Space => "space",
        DocKind::Table => "table",
        DocKind::Model => "model",
        DocKind::Tree => "tree",
    }
}

fn expect_kind(path: &Path, text: &str, wanted: &[DocKind]) -> Result<DocKind, CliError> {
    let kind = detect_kind(path, text)?;
    if wanted.contains(&kind) {
        return Ok(kind);
    }
    let wanted_names: Vec<&str> = wanted.iter().map(|&k| kind_name(k)).collect();
    Err(CliError::input(format!(
        "{}: found a {} document where a {} document was expected",
        path.display(),
        kind_name(kind),
        wanted_names.join(" or "),
    )))
}

pub fn load_space(path: &Path) -> Result<AnySpace, CliError> {
    let text = read_file(path)?;
    expect_kind(path, &text, &[DocKind::Space])?;
    space_from_json(&text).map_err(|e| bad_document(path, &e))
}

pub fn load_table(path: &Path) -> Result<AnyTable, CliError> {
    let text = read_file(path)?;
    expect_kind(path, &text, &[DocKind::Table])?;
    table_from_json(&text).map_err(|e| bad_document(path, &e))
}

pub fn load_model(path: &Path) -> Result<GromovProductModel, CliError> {
    let text = read_file(path)?;
    expect_kind(path, &text, &[DocKind::Model])?;
    model_from_json(&text).map_err(|e| bad_document(path, &e))
}

/// Loads either a tree or a space, for commands that can build a model
/// from both.
pub fn load_tree_or_space(path: &Path) -> Result<TreeOrSpace, CliError> {
    let text = read_file(path)?;
    match expect_kind(path, &text, &[DocKind::Tree, DocKind::Space])? {
        DocKind::Tree => Ok(TreeOrSpace::Tree(
            tree_from_json(&text).map_err(|e| bad_document(path, &e))?,
        )),
        _ => Ok(TreeOrSpace::Space(
            space_from_json(&text).map_err(|e| bad_document(path, &e))?,
        )),
    }
}

#[derive(Clone, Debug)]
pub enum TreeOrSpace {
    Tree(Tree),
    Space(AnySpace),
}

/// Loads either a space or a raw table, for commands accepting both.
pub fn load_space_or_table(path: &Path) -> Result<SpaceOrTable, CliError> {
    let text = read_file(path)?;
    match expect_kind(path, &text, &[DocKind::Space, DocKind::Table])? {
        DocKind::Space => Ok(SpaceOrTable::Space(
            space_from_json(&text).map_err(|e| bad_document(path, &e))?,
        )),
        _ => Ok(SpaceOrTable::Table(
            table_from_json(&text).map_err(|e| bad_document(path, &e))?,
        )),
    }
}

#[derive(Clone, Debug)]
pub enum SpaceOrTable {
    Space(AnySpace),
    Table(AnyTable),
}

/// Loads either a model or a raw table, for the deviation command.
pub fn load_model_or_table(path: &Path) -> Result<ModelOrTable, CliError> {
    let text = read_file(path)?;
    match expect_kind(path, &text, &[DocKind::Model, DocKind::Table])? {
        DocKind::Model => Ok(ModelOrTable::Model(
            model_from_json(&text).map_err(|e| bad_document(path, &e))?,
        )),
        _ => Ok(ModelOrTable::Table(
            table_from_json(&text).map_err(|e| bad_document(path, &e))?,
        )),
    }
}

#[derive(Clone, Debug)]
pub enum ModelOrTable {
    Model(GromovProductModel),
    Table(AnyTable),
}

/// A sub-Moebius map on either scale, as produced from a space or an
/// already-validated table.
#[derive(Clone, Debug)]
pub enum AnyMap {
    Multiplicative(SubMoebiusMap<MulRat>),
    Logarithmic(SubMoebiusMap<LogRat>),
}

impl AnyMap {
    pub fn labels(&self) -> &[String] {
        match self {
            AnyMap::Multiplicative(m) => m.labels(),
            AnyMap::Logarithmic(m) => m.labels(),
        }
    }

    pub fn n(&self) -> usize {
        self.labels().len()
    }
}

fn space_not_valid(path: &Path, error: &CrossRatioError) -> CliError {
    CliError::precondition(format!(
        "{}: the space must satisfy the semi-metric axioms before its \
         assignment can be computed ({error}); run `validate` for the full list",
        path.display()
    ))
}

/// Computes the induced assignment of a space; an invalid space is a
/// precondition failure.
pub fn map_of_space(path: &Path, space: &AnySpace) -> Result<AnyMap, CliError> {
    match space {
        AnySpace::Multiplicative(s) => moebius_of(s)
            .map(AnyMap::Multiplicative)
            .map_err(|e| space_not_valid(path, &e)),
        AnySpace::Logarithmic(s) => moebius_of(s)
            .map(AnyMap::Logarithmic)
            .map_err(|e| space_not_valid(path, &e)),
    }
}

/// Upgrades a table to a map; a table that breaks the sub-Moebius axioms
/// is a precondition failure naming the first offending tuple.
pub fn map_of_table(path: &Path, table: &AnyTable) -> Result<AnyMap, CliError> {
    fn upgrade<V: Value>(
        path: &Path,
        table: &MoebiusTable<V>,
    ) -> Result<SubMoebiusMap<V>, CliError> {
        table.validate().map_err(|report| {
            let first = report
                .violations
                .first()
                .map(|v| v.to_string())
                .unwrap_or_else(|| "no violations recorded".to_string());
            CliError::precondition(format!(
                "{}: the table breaks the sub-Moebius axioms ({} violations; first: {first}); \
                 run `submoebius-check` for the full list",
                path.display(),
                report.violations.len(),
            ))
        })
    }
    match table {
        AnyTable::Multiplicative(t) => Ok(AnyMap::Multiplicative(upgrade(path, t)?)),
        AnyTable::Logarithmic(t) => Ok(AnyMap::Logarithmic(upgrade(path, t)?)),
    }
}

/// Loads a space or table and turns it into a validated map either way.
pub fn load_map(path: &Path) -> Result<AnyMap, CliError> {
    let text = read_file(path)?;
    match expect_kind(path, &text, &[DocKind::Space, DocKind::Table])? {
        DocKind::Space => {
            let space = space_from_json(&text).map_err(|e| bad_document(path, &e))?;
            map_of_space(path, &space)
        }
        _ => {
            let table = table_from_json(&text).map_err(|e| bad_document(path, &e))?;
            map_of_table(path, &table)
        }
    }
}

/// Resolves one point label against a loaded domain.
pub fn resolve_label(labels: &[String], label: &str, what: &str) -> Result<usize, CliError> {
    labels.iter().position(|l| l == label).ok_or_else(|| {
        CliError::input(format!(
            "{what}: unknown point label {label:?} (domain: {})",
            labels.join(", ")
        ))
    })
}

/// Parses `--scale alpha,beta,omega` against a loaded domain.
pub fn parse_scale(text: &str, labels: &[String]) -> Result<ScaleTriple, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [alpha, beta, omega] = parts.as_slice() else {
        return Err(CliError::input(format!(
            "scale: expected three comma-separated labels alpha,beta,omega, found {text:?}"
        )));
    };
    let alpha = resolve_label(labels, alpha, "scale")?;
    let beta = resolve_label(labels, beta, "scale")?;
    let omega = resolve_label(labels, omega, "scale")?;
    ScaleTriple::new(alpha, beta, omega).map_err(CliError::precondition)
}

/// Parses an exact-rational flag such as `--eps 1/8`.
pub fn parse_rational_flag(
    name: &'static str,
    value: Option<&str>,
) -> Result<Option<BigRational>, CliError> {
    match value {
        None => Ok(None),
        Some(text) => parse_rational(name, text)
            .map(Some)
            .map_err(CliError::input),
    }
}

/// Enforces the input arity of a subcommand.
pub fn expect_inputs<'a>(
    inputs: &'a [PathBuf],
    arity: usize,
    usage: &str,
) -> Result<&'a [PathBuf], CliError> {
    if inputs.len() == arity {
        return Ok(inputs);
    }
    Err(CliError::input(format!(
        "expected {arity} --input file(s) ({usage}), found {}",
        inputs.len()
    )))
}
