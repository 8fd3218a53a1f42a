//! One function per subcommand.  Every function returns either a
//! [`Report`] — whose verdict decides between exit codes 0 and 1 — or a
//! [`CliError`] for malformed input (2) and precondition failures (3).

use std::collections::BTreeSet;

use moebius_core::{
    all_scale_triples, ball, deviation_check, generate_topology, is_moebius, model_to_json,
    moebius_equivalent, moebius_point, perturb, reconstruct_semimetric, scaled_distance,
    scan_table, space_to_json, standard_sandwich_scan, submoebius_sandwich_scan, symmetrize,
    table_to_json, AnySpace, AnyTable, AxiomReport, CrossRatioError, GromovProductModel, L4Point,
    LogRat, MoebiusTable, MoebiusVerdict, MoebiusWitness, ModelError, Point, SandwichScan, Scale,
    ScaleTriple, SemiMetricSpace, SetKind, Side, SubMoebiusMap, Tuple4, Value,
};
use serde_json::{json, Value as Json};

use crate::inputs::{
    expect_inputs, load_map, load_model, load_model_or_table, load_space, load_space_or_table,
    load_table, load_tree_or_space, map_of_space, map_of_table, parse_rational_flag, parse_scale,
    resolve_label, AnyMap, CliError, ModelOrTable, SpaceOrTable, TreeOrSpace,
};
use crate::report::{payload, Report};
use crate::RunConfig;

/// How many violations a report spells out in full before switching to a
/// count; keeps reports on garbage inputs bounded.
const SHOWN_VIOLATIONS: usize = 20;
const SHOWN_LINES: usize = 5;

fn label_list(labels: &[String], points: &[Point]) -> String {
    points
        .iter()
        .map(|&i| labels[i].as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

fn labels_json(labels: &[String], points: &[Point]) -> Json {
    json!(points.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>())
}

fn chart_points(a: &ScaleTriple) -> [Point; 3] {
    [a.alpha(), a.beta(), a.omega()]
}

fn opt_value_text<V: Value>(value: &Option<V>) -> String {
    match value {
        Some(v) => v.to_string(),
        None => "undefined".to_string(),
    }
}

pub(crate) fn witness_json<V: Value>(labels: &[String], w: &MoebiusWitness<V>) -> Json {
    json!({
        "chart": labels_json(labels, &chart_points(&w.scale)),
        "x": labels[w.x],
        "y": labels[w.y],
        "condition": w.condition.to_string(),
        "left": opt_value_text(&w.left),
        "right": opt_value_text(&w.right),
    })
}

pub(crate) fn witness_line<V: Value>(labels: &[String], w: &MoebiusWitness<V>) -> String {
    format!(
        "witness: chart ({}) x={} y={} condition {} left {} right {}",
        label_list(labels, &chart_points(&w.scale)),
        labels[w.x],
        labels[w.y],
        w.condition,
        opt_value_text(&w.left),
        opt_value_text(&w.right),
    )
}

fn axioms_json<V: Value>(axioms: &AxiomReport<V>) -> Json {
    let shown: Vec<String> = axioms
        .violations
        .iter()
        .take(SHOWN_VIOLATIONS)
        .map(|v| v.to_string())
        .collect();
    json!({
        "valid": axioms.is_valid(),
        "total_violations": axioms.violations.len(),
        "violations_shown": shown,
    })
}

fn axiom_lines<V: Value>(axioms: &AxiomReport<V>, what: &str, report: &mut Report) {
    if axioms.is_valid() {
        report.line(format!("{what}: all hold"));
        return;
    }
    report.fail();
    for v in axioms.violations.iter().take(SHOWN_LINES) {
        report.line(format!("{what} violation: {v}"));
    }
    if axioms.violations.len() > SHOWN_LINES {
        report.line(format!(
            "({} more violations not shown)",
            axioms.violations.len() - SHOWN_LINES
        ));
    }
}

fn push_payload_lines(report: &mut Report, text: &str) {
    for line in text.lines() {
        report.line(line);
    }
}

fn coords_json<V: Value>(point: &L4Point<V>) -> Json {
    json!(point
        .coords()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>())
}

pub fn validate(cfg: &RunConfig) -> Result<Report, CliError> {
    let inputs = expect_inputs(&cfg.inputs, 1, "a space document")?;
    let space = load_space(&inputs[0])?;
    let mut report = Report::new("validate");
    match &space {
        AnySpace::Multiplicative(s) => run_validate(s, &mut report),
        AnySpace::Logarithmic(s) => run_validate(s, &mut report),
    }
    Ok(report)
}

fn run_validate<V: Value>(space: &SemiMetricSpace<V>, report: &mut Report) {
    let remote = match space.omega() {
        Some(w) => format!(", remote point {}", space.label(w)),
        None => ", no remote point".to_string(),
    };
    report.line(format!(
        "space: {} points on the {} scale{remote}",
        space.n(),
        V::SCALE.as_str()
    ));
    let checked = space.validate();
    let texts: Vec<String> = checked.violations.iter().map(|v| v.to_string()).collect();
    if texts.is_empty() {
        report.line("semi-metric axioms: all hold");
    } else {
        report.fail();
        for text in &texts {
            report.line(format!("violation: {text}"));
        }
    }
    report.set("points", json!(space.labels()));
    report.set("scale", json!(V::SCALE.as_str()));
    report.set(
        "omega",
        match space.omega() {
            Some(w) => json!(space.label(w)),
            None => Json::Null,
        },
    );
    report.set("violations", json!(texts));
}

pub fn moebius(cfg: &RunConfig) -> Result<Report, CliError> {
    let inputs = expect_inputs(&cfg.inputs, 1, "a space document")?;
    let space = load_space(&inputs[0])?;
    let map = map_of_space(&inputs[0], &space)?;
    let mut report = Report::new("moebius");
    match &map {
        AnyMap::Multiplicative(m) => run_moebius(m, &mut report),
        AnyMap::Logarithmic(m) => run_moebius(m, &mut report),
    }
    Ok(report)
}

fn run_moebius<V: Value>(m: &SubMoebiusMap<V>, report: &mut Report) {
    let table = m.to_table();
    let axioms = table.check_axioms();
    report.line(format!(
        "assignment: {} points, {} admissible tuples on the {} scale",
        m.n(),
        table.entries().count(),
        V::SCALE.as_str()
    ));
    axiom_lines(&axioms, "table axioms", report);
    let text = table_to_json(&table);
    report.set("points", json!(m.labels()));
    report.set("axioms", axioms_json(&axioms));
    report.set("table", payload(&text));
    push_payload_lines(report, &text);
}

pub fn submoebius_check(cfg: &RunConfig) -> Result<Report, CliError> {
    let inputs = expect_inputs(&cfg.inputs, 1, "a table or space document")?;
    let mut report = Report::new("submoebius-check");
    match load_space_or_table(&inputs[0])? {
        SpaceOrTable::Table(AnyTable::Multiplicative(t)) => run_submoebius_check(&t, &mut report),
        SpaceOrTable::Table(AnyTable::Logarithmic(t)) => run_submoebius_check(&t, &mut report),
        SpaceOrTable::Space(space) => match map_of_space(&inputs[0], &space)? {
            AnyMap::Multiplicative(m) => run_submoebius_check(&m.to_table(), &mut report),
            AnyMap::Logarithmic(m) => run_submoebius_check(&m.to_table(), &mut report),
        },
    }
    Ok(report)
}

fn run_submoebius_check<V: Value>(table: &MoebiusTable<V>, report: &mut Report) {
    let axioms = table.check_axioms();
    report.line(format!(
        "table: {} points, {} entries on the {} scale",
        table.n(),
        table.entries().count(),
        V::SCALE.as_str()
    ));
    axiom_lines(&axioms, "sub-Moebius axioms", report);
    report.set("points", json!(table.labels()));
    report.set("axioms", axioms_json(&axioms));
}

pub fn is_moebius_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let inputs = expect_inputs(&cfg.inputs, 1, "a table or space document")?;
    let mut report = Report::new("is-moebius");
    match load_space_or_table(&inputs[0])? {
        SpaceOrTable::Space(space) => match map_of_space(&inputs[0], &space)? {
            AnyMap::Multiplicative(m) => run_is_moebius(m.labels(), &is_moebius(&m), &mut report),
            AnyMap::Logarithmic(m) => run_is_moebius(m.labels(), &is_moebius(&m), &mut report),
        },
        // Tables are scanned as-is, with no validity gate: missing or
        // undefined entries simply fail the conditions they touch.
        SpaceOrTable::Table(AnyTable::Multiplicative(t)) => {
            run_is_moebius(t.labels(), &scan_table(&t), &mut report)
        }
        SpaceOrTable::Table(AnyTable::Logarithmic(t)) => {
            run_is_moebius(t.labels(), &scan_table(&t), &mut report)
        }
    }
    Ok(report)
}

fn run_is_moebius<V: Value>(
    labels: &[String],
    verdict: &MoebiusVerdict<V>,
    report: &mut Report,
) {
    report.set("is_moebius", json!(verdict.is_moebius));
    if verdict.is_moebius {
        report.line("chart conditions: hold at every site; the assignment is metric-induced");
        return;
    }
    report.fail();
    report.line("chart conditions: FAILED; the assignment is not metric-induced");
    if let Some(w) = &verdict.witness {
        report.line(witness_line(labels, w));
        report.set("witness", witness_json(labels, w));
    }
}

pub fn reconstruct(cfg: &RunConfig) -> Result<Report, CliError> {
    let inputs = expect_inputs(&cfg.inputs, 1, "a space or table document")?;
    let map = load_map(&inputs[0])?;
    let scale_text = cfg
        .scale
        .as_deref()
        .ok_or_else(|| CliError::input("reconstruct needs --scale alpha,beta,omega"))?;
    let chart = parse_scale(scale_text, map.labels())?;
    let mut report = Report::new("reconstruct");
    match &map {
        AnyMap::Multiplicative(m) => run_reconstruct(m, &chart, &mut report)?,
        AnyMap::Logarithmic(m) => run_reconstruct(m, &chart, &mut report)?,
    }
    Ok(report)
}

fn run_reconstruct<V: Value>(
    m: &SubMoebiusMap<V>,
    chart: &ScaleTriple,
    report: &mut Report,
) -> Result<(), CliError> {
    use moebius_core::ReconstructionError;

    let labels = m.labels();
    report.set("chart", labels_json(labels, &chart_points(chart)));
    match reconstruct_semimetric(m, chart) {
        Ok(space) => {
            report.line(format!(
                "reconstructed: {} points with {} infinitely remote and d({}, {}) = 1",
                space.n(),
                labels[chart.omega()],
                labels[chart.alpha()],
                labels[chart.beta()],
            ));
            let text = space_to_json(&space);
            report.set("space", payload(&text));
            push_payload_lines(report, &text);
            Ok(())
        }
        Err(ReconstructionError::NotMoebius { witness }) => {
            report.fail();
            report.line("reconstruction impossible: the assignment is not metric-induced");
            report.line(witness_line(labels, &witness));
            report.set("witness", witness_json(labels, &witness));
            Ok(())
        }
        Err(other) => Err(CliError::precondition(other)),
    }
}

pub fn equivalent(cfg: &RunConfig) -> Result<Report, CliError> {
    let inputs = expect_inputs(&cfg.inputs, 2, "two space documents")?;
    let first = load_space(&inputs[0])?;
    let second = load_space(&inputs[1])?;
    let mut report = Report::new("equivalent");
    match (&first, &second) {
        (AnySpace::Multiplicative(a), AnySpace::Multiplicative(b)) => {
            run_equivalent(a, b, &mut report)?
        }
        (AnySpace::Logarithmic(a), AnySpace::Logarithmic(b)) => run_equivalent(a, b, &mut report)?,
        _ => {
            return Err(CliError::precondition(
                "the two spaces must be written on the same scale to compare",
            ))
        }
    }
    Ok(report)
}

fn run_equivalent<V: Value>(
    a: &SemiMetricSpace<V>,
    b: &SemiMetricSpace<V>,
    report: &mut Report,
) -> Result<(), CliError> {
    match moebius_equivalent(a, b) {
        Ok(None) => {
            report.line("assignments: agree on every admissible tuple");
            report.set("equivalent", json!(true));
            Ok(())
        }
        Ok(Some(rep)) => {
            report.fail();
            report.set("equivalent", json!(false));
            let tuple = Tuple4(rep);
            let va = moebius_point(a, &tuple).map_err(CliError::precondition)?;
            let vb = moebius_point(b, &tuple).map_err(CliError::precondition)?;
            report.line(format!(
                "assignments differ at tuple ({}): first ({}, {}, {}), second ({}, {}, {})",
                label_list(a.labels(), &rep),
                va.coords()[0],
                va.coords()[1],
                va.coords()[2],
                vb.coords()[0],
                vb.coords()[1],
                vb.coords()[2],
            ));
            report.set(
                "first_difference",
                json!({
                    "tuple": labels_json(a.labels(), &rep),
                    "first": coords_json(&va),
                    "second": coords_json(&vb),
                }),
            );
            Ok(())
        }
        Err(CrossRatioError::PointSetMismatch) => Err(CliError::precondition(
            "the two spaces must share one point-label set",
        )),
        Err(other) => Err(CliError::precondition(other)),
    }
}

pub fn hyperbolic_build(cfg: &RunConfig, basepoint: Option<&str>) -> Result<Report, CliError> {
    let inputs = expect_inputs(&cfg.inputs, 1, "a tree or metric-space document")?;
    let mut report = Report::new("hyperbolic build");
    let model = match load_tree_or_space(&inputs[0])? {
        TreeOrSpace::Tree(tree) => {
            report.line(format!(
                "source: tree with {} nodes rooted at {}",
                tree.node_count(),
                tree.node_label(tree.root()),
            ));
            GromovProductModel::from_tree(&tree).map_err(CliError::precondition)?
        }
        TreeOrSpace::Space(AnySpace::Multiplicative(space)) => {
            let label = basepoint.ok_or_else(|| {
                CliError::input("building from a metric space needs --basepoint LABEL")
            })?;
            let o = resolve_label(space.labels(), label, "basepoint")?;
            report.line(format!("source: metric space with basepoint {label}"));
            GromovProductModel::from_metric(&space, o).map_err(CliError::precondition)?
        }
        TreeOrSpace::Space(AnySpace::Logarithmic(_)) => {
            return Err(CliError::precondition(
                "building a model needs a multiplicative metric space",
            ))
        }
    };
    report.line(format!(
        "model: {} boundary points, hyperbolicity constant {}",
        model.n(),
        model.hyperbolicity_constant(),
    ));
    let text = model_to_json(&model);
    report.set("boundary", json!(model.labels()));
    report.set("h", json!(model.hyperbolicity_constant().to_string()));
    report.set("model", payload(&text));
    push_payload_lines(&mut report, &text);
    Ok(report)
}

pub fn hyperbolic_perturb(cfg: &RunConfig) -> Result<Report, CliError> {
    let inputs = expect_inputs(&cfg.inputs, 1, "a model document")?;
    let model = load_model(&inputs[0])?;
    let eps = parse_rational_flag("eps", cfg.eps.as_deref())?
        .ok_or_else(|| CliError::input("perturb needs --eps Q (an exact rational amplitude)"))?;
    let table = perturb(&model, &eps, cfg.seed).map_err(CliError::precondition)?;
    let mut report = Report::new("hyperbolic perturb");
    report.line(format!(
        "perturbed: {} points, amplitude {eps}, seed {}",
        model.n(),
        cfg.seed,
    ));
    let text = table_to_json(&table);
    report.set("eps", json!(eps.to_string()));
    report.set("seed", json!(cfg.seed));
    report.set("table", payload(&text));
    push_payload_lines(&mut report, &text);
    Ok(report)
}

pub fn hyperbolic_symmetrize(cfg: &RunConfig) -> Result<Report, CliError> {
    let inputs = expect_inputs(&cfg.inputs, 1, "a log-scale table document")?;
    let table = match load_table(&inputs[0])? {
        AnyTable::Logarithmic(t) => t,
        AnyTable::Multiplicative(_) => {
            return Err(CliError::precondition(
                "symmetrize averages log coordinates and needs a log-scale table",
            ))
        }
    };
    let map = symmetrize(&table).map_err(CliError::precondition)?;
    let out = map.to_table();
    let mut report = Report::new("hyperbolic symmetrize");
    report.line(format!(
        "symmetrized: {} points, {} entries",
        out.n(),
        out.entries().count(),
    ));
    let text = table_to_json(&out);
    report.set("table", payload(&text));
    push_payload_lines(&mut report, &text);
    Ok(report)
}

pub fn hyperbolic_deviation(cfg: &RunConfig) -> Result<Report, CliError> {
    let inputs = expect_inputs(&cfg.inputs, 2, "a model or log-scale table each")?;
    let first = load_deviation_input(&inputs[0])?;
    let second = load_deviation_input(&inputs[1])?;
    let h = match parse_rational_flag("h", cfg.h.as_deref())? {
        Some(h) => h,
        None => match (&first, &second) {
            (DeviationInput::Model(m), _) | (_, DeviationInput::Model(m)) => {
                m.hyperbolicity_constant().clone()
            }
            _ => {
                return Err(CliError::input(
                    "deviation needs --h Q when neither input is a model",
                ))
            }
        },
    };
    let m1 = first.into_map();
    let m2 = second.into_map();
    let outcome = deviation_check(&m1, &m2, &h).map_err(|e| match e {
        ModelError::DomainMismatch => {
            CliError::precondition("the two assignments must share one point-label set")
        }
        other => CliError::precondition(other),
    })?;
    let mut report = Report::new("hyperbolic deviation");
    report.line(format!(
        "deviation: max squared log distance {} against bound (10h)^2 = {} at h = {h}",
        outcome.max_squared, outcome.bound_squared,
    ));
    if let Some(worst) = &outcome.worst {
        report.line(format!(
            "largest disagreement at tuple ({})",
            label_list(m1.labels(), worst),
        ));
        report.set("worst", labels_json(m1.labels(), worst));
    }
    if !outcome.pass {
        report.fail();
    }
    report.set("h", json!(h.to_string()));
    report.set("max_squared", json!(outcome.max_squared.to_string()));
    report.set("bound_squared", json!(outcome.bound_squared.to_string()));
    report.set("within_bound", json!(outcome.pass));
    Ok(report)
}

enum DeviationInput {
    Model(GromovProductModel),
    Map(SubMoebiusMap<LogRat>),
}

impl DeviationInput {
    fn into_map(self) -> SubMoebiusMap<LogRat> {
        match self {
            DeviationInput::Model(m) => m.basepoint_moebius(),
            DeviationInput::Map(m) => m,
        }
    }
}

fn load_deviation_input(path: &std::path::Path) -> Result<DeviationInput, CliError> {
    match load_model_or_table(path)? {
        ModelOrTable::Model(model) => Ok(DeviationInput::Model(model)),
        ModelOrTable::Table(table @ AnyTable::Logarithmic(_)) => {
            match map_of_table(path, &table)? {
                AnyMap::Logarithmic(m) => Ok(DeviationInput::Map(m)),
                AnyMap::Multiplicative(_) => unreachable!("log tables validate to log maps"),
            }
        }
        ModelOrTable::Table(AnyTable::Multiplicative(_)) => Err(CliError::precondition(
            "deviation compares log-scale assignments; this table is multiplicative",
        )),
    }
}

pub fn topology_sandwich(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.inputs.is_empty() || cfg.inputs.len() > 2 {
        return Err(CliError::input(
            "expected --input MODEL and optionally --input TABLE (a log-scale table)",
        ));
    }
    let model = load_model(&cfg.inputs[0])?;
    let map = match cfg.inputs.get(1) {
        None => None,
        Some(path) => {
            let table = load_table(path)?;
            if matches!(table, AnyTable::Multiplicative(_)) {
                return Err(CliError::precondition(
                    "the sandwich map must be a log-scale table",
                ));
            }
            let AnyMap::Logarithmic(m) = map_of_table(path, &table)? else {
                unreachable!("log tables validate to log maps")
            };
            if m.labels() != model.labels() {
                return Err(CliError::precondition(
                    "the table and the model must share one point-label set",
                ));
            }
            Some(m)
        }
    };
    let charts = match cfg.scale.as_deref() {
        Some(text) => vec![parse_scale(text, model.labels())?],
        None => all_scale_triples(model.n()),
    };
    let mut report = Report::new("topology sandwich");
    let mut rows = Vec::new();
    let mut totals = ScanTotals::default();
    for chart in &charts {
        let scan = standard_sandwich_scan(&model, chart).map_err(CliError::precondition)?;
        totals.add(model.labels(), "standard", &scan, &mut rows, &mut report);
        if let Some(m) = &map {
            let alpha = submoebius_sandwich_scan(&model, m, chart, Side::Alpha)
                .map_err(CliError::precondition)?;
            totals.add(model.labels(), "alpha-ball", &alpha, &mut rows, &mut report);
            let beta = submoebius_sandwich_scan(&model, m, chart, Side::Beta)
                .map_err(CliError::precondition)?;
            totals.add(model.labels(), "beta-ball", &beta, &mut rows, &mut report);
        }
    }
    report.line(format!(
        "sandwich estimates over {} charts: {} checked, {} passed, {} skipped \
         (outside the hypothesis), {} failed",
        charts.len(),
        totals.checked,
        totals.passed,
        totals.skipped,
        totals.failed,
    ));
    if totals.failed > 0 || totals.checked == 0 {
        report.fail();
    }
    report.set("h", json!(model.hyperbolicity_constant().to_string()));
    report.set("charts", json!(charts.len()));
    report.set(
        "totals",
        json!({
            "checked": totals.checked,
            "passed": totals.passed,
            "skipped": totals.skipped,
            "failed": totals.failed,
        }),
    );
    report.set("rows", Json::Array(rows));
    Ok(report)
}

#[derive(Default)]
struct ScanTotals {
    checked: usize,
    passed: usize,
    skipped: usize,
    failed: usize,
}

impl ScanTotals {
    fn add(
        &mut self,
        labels: &[String],
        kind: &str,
        scan: &SandwichScan,
        rows: &mut Vec<Json>,
        report: &mut Report,
    ) {
        self.checked += scan.checked;
        self.passed += scan.passed;
        self.skipped += scan.skipped;
        self.failed += scan.failed;
        let first_failure = match &scan.first_failure {
            Some((center, threshold)) => json!({
                "center": labels[*center],
                "threshold": threshold,
            }),
            None => Json::Null,
        };
        if let Some((center, threshold)) = &scan.first_failure {
            report.line(format!(
                "FAILED: chart ({}) {kind} at center {} threshold {threshold}",
                label_list(labels, &chart_points(&scan.scale)),
                labels[*center],
            ));
        }
        rows.push(json!({
            "scale": labels_json(labels, &chart_points(&scan.scale)),
            "kind": kind,
            "checked": scan.checked,
            "passed": scan.passed,
            "skipped": scan.skipped,
            "failed": scan.failed,
            "first_failure": first_failure,
        }));
    }
}

pub fn topology_compare(cfg: &RunConfig) -> Result<Report, CliError> {
    let inputs = expect_inputs(&cfg.inputs, 2, "a space or table document each")?;
    let first = load_map(&inputs[0])?;
    let second = load_map(&inputs[1])?;
    if first.labels() != second.labels() {
        return Err(CliError::precondition(
            "the two structures must share one point-label set",
        ));
    }
    let n = first.n();
    let sub1 = subbase_sets(&first);
    let sub2 = subbase_sets(&second);
    let open1 = generate_topology(n, &sub1).map_err(CliError::precondition)?;
    let open2 = generate_topology(n, &sub2).map_err(CliError::precondition)?;
    let same = open1 == open2;
    let mut report = Report::new("topology compare");
    report.line(format!(
        "ball subbases of {} and {} sets generate {} and {} open sets",
        sub1.len(),
        sub2.len(),
        open1.len(),
        open2.len(),
    ));
    report.set("subbase_sizes", json!([sub1.len(), sub2.len()]));
    report.set("open_set_counts", json!([open1.len(), open2.len()]));
    report.set("same_topology", json!(same));
    if same {
        report.line("topologies: identical");
    } else {
        report.fail();
        report.line("topologies: DIFFERENT");
        if let Some(diff) = open1.symmetric_difference(&open2).next() {
            let members: Vec<Point> = diff.iter().copied().collect();
            report.line(format!(
                "open in exactly one of them: {{{}}}",
                label_list(first.labels(), &members),
            ));
            report.set("first_difference", labels_json(first.labels(), &members));
        }
    }
    Ok(report)
}

/// The full ball subbase of a map: alpha- and beta-balls over every
/// chart, every admissible center, and every radius at which a
/// membership can change (each scaled distance value, an exact value
/// between each consecutive pair, and one value beyond the largest).
pub(crate) fn subbase_sets(map: &AnyMap) -> Vec<BTreeSet<Point>> {
    match map {
        AnyMap::Multiplicative(m) => subbase_of(m),
        AnyMap::Logarithmic(m) => subbase_of(m),
    }
}

pub(crate) fn subbase_of<V: Value>(m: &SubMoebiusMap<V>) -> Vec<BTreeSet<Point>> {
    let n = m.n();
    let mut sets = BTreeSet::new();
    for chart in all_scale_triples(n) {
        for (kind, side, scale_point) in [
            (SetKind::AlphaBall, Side::Alpha, chart.alpha()),
            (SetKind::BetaBall, Side::Beta, chart.beta()),
        ] {
            for y in (0..n).filter(|&y| y != scale_point) {
                for radius in ball_radii(m, &chart, y, side) {
                    let set = ball(m, &chart, y, &radius, kind)
                        .expect("center and chart are range checked");
                    sets.insert(set.members().clone());
                }
            }
        }
    }
    sets.into_iter().collect()
}

/// A factor strictly greater than one on either scale, used to step past
/// the largest finite distance.
fn growth_factor<V: Value>() -> V {
    let text = match V::SCALE {
        Scale::Multiplicative => "2",
        Scale::Logarithmic => "1",
    };
    V::decode(text).expect("fixed literal")
}

fn ball_radii<V: Value>(m: &SubMoebiusMap<V>, chart: &ScaleTriple, y: Point, side: Side) -> Vec<V> {
    let mut finite: Vec<V> = (0..m.n())
        .filter_map(|x| {
            let d = scaled_distance(m, chart, x, y, side)
                .expect("the center is inside the side's domain");
            d.is_finite_positive().then_some(d)
        })
        .collect();
    finite.sort();
    finite.dedup();
    let mut radii = vec![V::one()];
    for (i, value) in finite.iter().enumerate() {
        radii.push(value.clone());
        match finite.get(i + 1) {
            Some(next) => radii.push(value.between(next)),
            None => radii.push(
                value
                    .checked_mul(&growth_factor::<V>())
                    .expect("product of finite values"),
            ),
        }
    }
    radii
}
