//! Batch front end for the `trigauge` library: graph loading, command
//! dispatch, and JSON/CSV report rendering.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use trigauge::florentino::{default_twist, verify_injectivity, verify_section, InjectivityCheck};
use trigauge::su2::stream_rng;
use trigauge::{verify_abelian, GraphPolytope, RawGraph, TrivalentGraph};

/// Minimum sup-norm separation of injectivity pairs.
pub const PAIR_SEPARATION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Info,
    Polytope,
    Volume,
    SectionCheck,
    FlorentinoCheck,
    AbelianCheck,
}

impl Command {
    /// Tolerance used when none is given on the command line.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Command::FlorentinoCheck => 1e-6,
            Command::AbelianCheck => 1e-10,
            _ => 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Everything needed to replay a run; embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub graph: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub output: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<f64>>,
}

/// Rejected input: exit status 2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputError {
    pub kind: &'static str,
    pub message: String,
}

impl InputError {
    fn new(kind: &'static str, message: impl fmt::Display) -> Self {
        InputError {
            kind,
            message: message.to_string(),
        }
    }

    /// Machine-readable error record.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&json!({ "error": self })).expect("error record serializes")
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for InputError {}

impl From<trigauge::Error> for InputError {
    fn from(e: trigauge::Error) -> Self {
        InputError::new("invalid-input", e)
    }
}

/// A finished run: the report document and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub report: Value,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Builtin name (`theta`, `gamma2`, `theta3`, `theta^k`) or a path to a JSON
/// or TOML graph file with `vertices` and `edges`.
pub fn load_graph(source: &str) -> Result<TrivalentGraph, InputError> {
    match source {
        "theta" => return Ok(TrivalentGraph::theta()),
        "gamma2" => return Ok(TrivalentGraph::gamma2()),
        "theta3" => return Ok(TrivalentGraph::theta3()),
        _ => {}
    }
    if let Some(k) = source.strip_prefix("theta^") {
        return match k.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(TrivalentGraph::theta_power(k)),
            _ => Err(InputError::new(
                "unknown-graph",
                format!("bad theta power {source:?}"),
            )),
        };
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(InputError::new(
            "unknown-graph",
            format!("{source:?} is neither a builtin graph nor an existing file"),
        ));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::new("io", format!("{source}: {e}")))?;
    let raw: RawGraph = if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str(&text).map_err(|e| InputError::new("parse", format!("{source}: {e}")))?
    } else {
        serde_json::from_str(&text)
            .map_err(|e| InputError::new("parse", format!("{source}: {e}")))?
    };
    Ok(TrivalentGraph::validate(&raw)?)
}

fn check_config(config: &RunConfig) -> Result<(), InputError> {
    if config.samples == 0 {
        return Err(InputError::new(
            "invalid-config",
            "samples must be at least 1",
        ));
    }
    if !(config.tolerance > 0.0 && config.tolerance.is_finite()) {
        return Err(InputError::new(
            "invalid-config",
            "tolerance must be positive",
        ));
    }
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Runs one command. The report is a pure function of `config`.
pub fn run(config: &RunConfig) -> Result<Outcome, InputError> {
    check_config(config)?;
    let graph = Arc::new(load_graph(&config.graph)?);
    if let Some(twist) = &config.twist {
        if let Some(&e) = twist.iter().find(|&&e| e >= graph.edge_count()) {
            return Err(InputError::new(
                "invalid-config",
                format!(
                    "twist edge {e} out of range for {} edges",
                    graph.edge_count()
                ),
            ));
        }
    }
    let (passed, result) = match config.command {
        Command::Info => (true, info(&graph)?),
        Command::Polytope => (true, polytope(&graph, &config.points)?),
        Command::Volume => volume(&graph, config),
        Command::SectionCheck => {
            let r = verify_section(&graph, config.samples, config.seed, config.tolerance)?;
            (r.passed, to_value(&r))
        }
        Command::FlorentinoCheck => {
            let mut check =
                InjectivityCheck::new(config.samples, PAIR_SEPARATION, config.tolerance);
            check.twist = config.twist.clone();
            let r = verify_injectivity(&graph, &check, config.seed)?;
            (r.passed, to_value(&r))
        }
        Command::AbelianCheck => {
            let r = verify_abelian(&graph, config.samples, config.seed, config.tolerance)?;
            (r.passed, to_value(&r))
        }
    };
    let report = json!({
        "config": config,
        "passed": passed,
        "result": result,
    });
    Ok(Outcome { passed, report })
}

fn info(graph: &TrivalentGraph) -> Result<Value, InputError> {
    let split = graph.hyperbolic_split();
    let orientation = match &split {
        Some(s) => {
            let o = graph.decay_orientation(s)?;
            Some(
                o.iter()
                    .map(|step| [graph.source(step), graph.target(step)])
                    .collect::<Vec<_>>(),
            )
        }
        None => None,
    };
    let twist = split.as_ref().map(|s| default_twist(graph, s));
    Ok(json!({
        "id": graph.structural_id(),
        "genus": graph.genus(),
        "vertices": graph.vertex_count(),
        "edges": graph.to_raw().edges,
        "connected": graph.is_connected(),
        "q": graph.adjacency_form(),
        "hyperbolic": split.is_some(),
        "split": split,
        "decay_orientation": orientation,
        "default_twist": twist,
    }))
}

fn polytope(graph: &TrivalentGraph, points: &[Vec<f64>]) -> Result<Value, InputError> {
    let p = GraphPolytope::of_graph(graph);
    let mut rows = Vec::with_capacity(points.len());
    for x in points {
        let violation = p.first_violation(x)?;
        rows.push(json!({
            "point": x,
            "member": violation.is_none(),
            "first_violated_vertex": violation,
            "slack": p.slack(x),
        }));
    }
    Ok(json!({
        "dimension": p.dimension,
        "blocks": p.blocks,
        "points": rows,
    }))
}

/// Volumes with a closed form: `theta^k` has volume `3^-k`.
fn reference_volume(graph: &TrivalentGraph) -> Option<f64> {
    let k = graph.vertex_count() / 2;
    (*graph == TrivalentGraph::theta_power(k.max(1))).then(|| 3f64.powi(-(k as i32)))
}

fn volume(graph: &TrivalentGraph, config: &RunConfig) -> (bool, Value) {
    let est = GraphPolytope::of_graph(graph)
        .mc_volume(config.samples as u64, &mut stream_rng(config.seed, 0));
    let mut out = to_value(&est);
    let mut passed = true;
    if let Some(exact) = reference_volume(graph) {
        let z = if est.stderr > 0.0 {
            (est.estimate - exact) / est.stderr
        } else if est.estimate == exact {
            0.0
        } else {
            f64::INFINITY
        };
        passed = z.abs() <= 3.0;
        out["reference"] = json!(exact);
        out["z_score"] = json!(z);
    }
    (passed, out)
}

/// Serializes a report in `format`. JSON is pretty-printed; CSV is a header
/// row of dotted paths and one value row.
pub fn render(report: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut cells = Vec::new();
            flatten("", report, &mut cells);
            let header: Vec<String> = cells.iter().map(|(k, _)| csv_field(k)).collect();
            let values: Vec<String> = cells.iter().map(|(_, v)| csv_field(v)).collect();
            format!("{}\n{}\n", header.join(","), values.join(","))
        }
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => flatten_map(map, &key, out),
        Value::Array(items) if !items.is_empty() => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::Array(_) => out.push((prefix.to_string(), String::new())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn flatten_map(
    map: &Map<String, Value>,
    key: &dyn Fn(&str) -> String,
    out: &mut Vec<(String, String)>,
) {
    for (k, v) in map {
        flatten(&key(k), v, out);
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(command: Command, graph: &str) -> RunConfig {
        RunConfig {
            command,
            graph: graph.into(),
            seed: 1,
            samples: 100,
            tolerance: command.default_tolerance(),
            output: OutputFormat::Json,
            twist: None,
            points: Vec::new(),
        }
    }

    #[test]
    fn builtins_resolve() {
        assert_eq!(load_graph("theta").unwrap().genus(), 2);
        assert_eq!(load_graph("theta3").unwrap().genus(), 3);
        assert_eq!(load_graph("theta^3").unwrap().genus(), 4);
        assert!(load_graph("theta^0").is_err());
        assert!(load_graph("nope").is_err());
    }

    #[test]
    fn reference_volume_only_for_theta_powers() {
        assert_eq!(reference_volume(&TrivalentGraph::theta()), Some(1.0 / 3.0));
        assert_eq!(
            reference_volume(&TrivalentGraph::theta_power(2)),
            Some(1.0 / 9.0)
        );
        assert_eq!(reference_volume(&TrivalentGraph::theta3()), None);
        assert_eq!(reference_volume(&TrivalentGraph::gamma2()), None);
    }

    #[test]
    fn csv_flattens_with_dotted_paths() {
        let v = json!({"a": {"b": [1, 2]}, "c": "x,y", "d": null});
        assert_eq!(
            render(&v, OutputFormat::Csv),
            "a.b.0,a.b.1,c,d\n1,2,\"x,y\",\n"
        );
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut c = config(Command::Info, "theta");
        c.samples = 0;
        assert_eq!(run(&c).unwrap_err().kind, "invalid-config");
        let mut c = config(Command::Info, "theta");
        c.tolerance = 0.0;
        assert!(run(&c).is_err());
        let mut c = config(Command::FlorentinoCheck, "theta");
        c.twist = Some(vec![3]);
        assert!(run(&c).is_err());
        let mut c = config(Command::Polytope, "theta");
        c.points = vec![vec![0.5, 0.5]];
        assert!(run(&c).is_err());
    }

    #[test]
    fn non_hyperbolic_graph_is_an_input_error() {
        assert!(run(&config(Command::SectionCheck, "gamma2")).is_err());
        assert!(run(&config(Command::Info, "gamma2")).unwrap().passed);
    }
}
