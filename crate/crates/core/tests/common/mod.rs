//! Helpers shared by the integration tests: a random model generator, a
//! brute-force expectation oracle and a DOT grammar checker.
#![allow(dead_code)]

pub mod dot;
pub mod oracle;

use std::path::{Path, PathBuf};

use rand::prelude::*;

use daqforge::mapper::mapper_table;
use daqforge::model::*;

pub fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn sample(name: &str) -> PathBuf {
    crate_dir().join("samples").join(name)
}

pub fn test_data(name: &str) -> PathBuf {
    crate_dir().join("tests").join("data").join(name)
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn load_sample(name: &str) -> ArchitectureModel {
    daqforge::dsl::parse_model(&read(&sample(name))).expect("sample parses")
}

/// Names drawn for every kind of declaration. Several are keywords of the
/// text format, which is legal in name positions.
const NAMES: &[&str] = &[
    "a", "b", "c", "d", "e", "f", "g", "h", "node", "source", "column", "link", "port", "via", "format",
    "in", "out", "action", "event", "level", "x1", "y_2", "Hub", "Sink", "_tmp",
];
const SOURCE_NAMES: &[&str] = &["users", "orders", "s", "source", "column", "t_1"];
const PARAM_KEYS: &[&str] = &[
    "min_value", "max_value", "regex", "value_set", "strictly", "mostly", "min", "type_", "x",
];
const STRING_CHARS: &[char] = &['a', 'Z', '0', ' ', '"', '\\', '\n', '\t', '\r', 'é', '.', '/', '-', '{', '}', '<', '&'];

fn names<R: Rng>(rng: &mut R, pool: &[&str], max: usize) -> Vec<String> {
    let n = rng.gen_range(0..=max.min(pool.len()));
    pool.choose_multiple(rng, n).map(|s| s.to_string()).collect()
}

fn subset<R: Rng, T: Copy>(rng: &mut R, all: &[T], max: usize) -> Vec<T> {
    let n = rng.gen_range(0..=max.min(all.len()));
    all.choose_multiple(rng, n).copied().collect()
}

pub fn random_string<R: Rng>(rng: &mut R, max: usize) -> String {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| *STRING_CHARS.choose(rng).unwrap()).collect()
}

pub fn random_param<R: Rng>(rng: &mut R, nested: bool) -> ParamValue {
    match rng.gen_range(0..if nested { 4 } else { 5 }) {
        0 => ParamValue::Int(rng.gen_range(-1000..=1000)),
        1 => ParamValue::Num(rng.gen_range(-1e6..1e6)),
        2 => ParamValue::Str(random_string(rng, 6)),
        3 => ParamValue::Bool(rng.gen()),
        _ => ParamValue::List((0..rng.gen_range(0..4)).map(|_| random_param(rng, true)).collect()),
    }
}

fn random_source<R: Rng>(rng: &mut R, name: String) -> SourceBinding {
    let kind = *SourceKind::ALL.choose(rng).unwrap();
    let connection = kind
        .required_keys()
        .iter()
        .map(|k| (k.to_string(), random_string(rng, 10)))
        .collect();
    let columns = names(rng, NAMES, 4)
        .into_iter()
        .map(|c| ColumnMeta::new(c, *ColumnType::ALL.choose(rng).unwrap()))
        .collect();
    SourceBinding {
        name,
        kind,
        connection,
        columns,
    }
}

fn random_rule<R: Rng>(rng: &mut R, source: Option<&SourceBinding>) -> QualityRule {
    let column = match source.filter(|s| !s.columns.is_empty() && rng.gen_bool(0.8)) {
        Some(s) => s.columns.choose(rng).unwrap().name.clone(),
        None => NAMES.choose(rng).unwrap().to_string(),
    };
    let (dimension, expectation) = *mapper_table().choose(rng).unwrap();
    let params = names(rng, PARAM_KEYS, 3)
        .into_iter()
        .map(|k| (k, random_param(rng, false)))
        .collect();
    QualityRule {
        column,
        dimension,
        expectation: expectation.to_string(),
        params,
    }
}

fn random_element<R: Rng>(
    rng: &mut R,
    name: String,
    ports: &[Port],
    sources: &[SourceBinding],
) -> BehaviorElement {
    let port = |rng: &mut R| match ports.choose(rng) {
        Some(p) if rng.gen_bool(0.8) => p.name.clone(),
        _ => NAMES.choose(rng).unwrap().to_string(),
    };
    match rng.gen_range(0..9) {
        0 => BehaviorElement::event(name, Event::ReceiveData { port: port(rng) }),
        1 => BehaviorElement::action(name, Action::SendData { port: port(rng) }),
        2 => {
            let source = sources.choose(rng).filter(|_| rng.gen_bool(0.9));
            let spec = QualitySpec {
                source: source.map_or_else(|| "nowhere".to_string(), |s| s.name.clone()),
                rules: (0..rng.gen_range(0..4)).map(|_| random_rule(rng, source)).collect(),
            };
            BehaviorElement::action(name, Action::VerifyData(spec))
        }
        _ => {
            let simple = [
                ActionKind::Generation,
                ActionKind::Ingestion,
                ActionKind::Process,
                ActionKind::Store,
                ActionKind::Analyze,
                ActionKind::Consume,
            ];
            let kind = *simple.choose(rng).unwrap();
            let sub = kind.sub_kinds().choose(rng).copied().filter(|_| rng.gen_bool(0.6));
            BehaviorElement::action(name, Action::simple(kind, sub).expect("sub-kind from the kind's vocabulary"))
        }
    }
}

fn random_node<R: Rng>(rng: &mut R, name: String, sources: &[SourceBinding]) -> DataNode {
    let mut node = DataNode::new(name);
    node.representation = DataRepresentation {
        formats: subset(rng, DataFormat::ALL, 4),
        storage: StorageTech::ALL.choose(rng).copied().filter(|_| rng.gen_bool(0.5)),
        location: Location::ALL.choose(rng).copied().filter(|_| rng.gen_bool(0.5)),
        processing: subset(rng, Processing::ALL, 2),
    };
    node.ports = names(rng, NAMES, 4)
        .into_iter()
        .map(|p| Port::new(p, *Direction::ALL.choose(rng).unwrap()))
        .collect();
    if rng.gen_bool(0.7) {
        let elements: Vec<BehaviorElement> = names(rng, NAMES, 10)
            .into_iter()
            .map(|e| random_element(rng, e, &node.ports, sources))
            .collect();
        let mut links: Vec<Link> = Vec::new();
        if !elements.is_empty() {
            for _ in 0..rng.gen_range(0..=6) {
                let from = elements.choose(rng).unwrap().name.clone();
                let to = elements.choose(rng).unwrap().name.clone();
                if !links.iter().any(|l| l.from == from && l.to == to) {
                    links.push(Link::new(from, to));
                }
            }
        }
        node.behavior = Some(NodeBehavior { elements, links });
    }
    node
}

/// A structurally well-formed model: ≤6 nodes, ≤10 behavior elements per
/// node, unique names per scope. It need not pass validation.
pub fn random_model<R: Rng>(rng: &mut R) -> ArchitectureModel {
    let level = *Level::ALL.choose(rng).unwrap();
    let mut model = ArchitectureModel::new(*NAMES.choose(rng).unwrap(), level);
    model.sources = names(rng, SOURCE_NAMES, 2)
        .into_iter()
        .map(|s| random_source(rng, s))
        .collect();
    model.nodes = names(rng, NAMES, 6)
        .into_iter()
        .map(|n| random_node(rng, n, &model.sources))
        .collect();
    let ends: Vec<PortRef> = model
        .nodes
        .iter()
        .flat_map(|n| n.ports.iter().map(|p| PortRef::new(n.name.clone(), p.name.clone())))
        .collect();
    if !ends.is_empty() {
        for _ in 0..rng.gen_range(0..=4) {
            let from = ends.choose(rng).unwrap().clone();
            let to = ends.choose(rng).unwrap().clone();
            let c = Connection::new(from, to, *Pattern::ALL.choose(rng).unwrap(), *Mode::ALL.choose(rng).unwrap());
            if !model.connections.iter().any(|d| d.id == c.id) {
                model.connections.push(c);
            }
        }
    }
    model
}
