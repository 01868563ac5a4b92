//! Graphviz DOT views of a model.
//!
//! The HLA view draws one box per node and one edge per connection. The LLA
//! view draws each node as a cluster of its behavior elements joined by the
//! behavior links.

use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use crate::diag::Diagnostic;
use crate::model::*;

const DOT_KEYWORDS: [&str; 6] = ["node", "edge", "graph", "digraph", "subgraph", "strict"];

/// Hands out sanitized, collision-free DOT identifiers.
#[derive(Default)]
struct Ids {
    taken: HashSet<String>,
}

impl Ids {
    fn fresh(&mut self, raw: &str) -> String {
        let base = sanitize(raw);
        let mut id = base.clone();
        let mut n = 2;
        while !self.taken.insert(id.clone()) {
            id = format!("{base}_{n}");
            n += 1;
        }
        id
    }
}

/// Non-alphanumerics become `_`; a leading digit or a DOT keyword gets an
/// extra `_`.
pub fn sanitize(raw: &str) -> String {
    let mut s: String = raw
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit()) {
        s.insert(0, '_');
    }
    if DOT_KEYWORDS.contains(&s.to_ascii_lowercase().as_str()) {
        s.push('_');
    }
    s
}

fn label<S: AsRef<str>>(lines: &[S]) -> String {
    let escaped: Vec<String> = lines
        .iter()
        .map(|l| l.as_ref().replace('\\', "\\\\").replace('"', "\\\""))
        .collect();
    format!("\"{}\"", escaped.join("\\n"))
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn representation_lines(rep: &DataRepresentation) -> Vec<String> {
    let mut lines = Vec::new();
    if !rep.formats.is_empty() {
        lines.push(format!("format: {}", join(&rep.formats)));
    }
    if !rep.processing.is_empty() {
        lines.push(format!("processing: {}", join(&rep.processing)));
    }
    if let Some(s) = rep.storage {
        lines.push(format!("storage: {} {s}", s.family()));
    }
    if let Some(l) = rep.location {
        lines.push(format!("location: {l}"));
    }
    lines
}

fn element_kind(e: &BehaviorElement) -> String {
    match &e.kind {
        ElementKind::Event(Event::ReceiveData { port }) => format!("event receive via {port}"),
        ElementKind::Action(Action::SendData { port }) => format!("action send_data via {port}"),
        ElementKind::Action(Action::VerifyData(spec)) => {
            format!("action verify_data on {} ({} rules)", spec.source, spec.rules.len())
        }
        ElementKind::Action(a) => match a.sub_kind() {
            Some(sub) => format!("action {}.{sub}", a.kind()),
            None => format!("action {}", a.kind()),
        },
    }
}

/// Renders `model` at `level`. An LLA view of an HLA model is refused with
/// `D001`; the HLA view is available for either level.
pub fn to_dot(model: &ArchitectureModel, level: Level) -> Result<String, Diagnostic> {
    if level == Level::Lla && model.level == Level::Hla {
        return Err(Diagnostic::error(
            "D001",
            format!("model {} is declared at HLA and has no LLA view", model.name),
        ));
    }
    let mut ids = Ids::default();
    let graph = sanitize(&model.name);
    let mut out = format!("digraph {graph} {{\n");
    match level {
        Level::Hla => hla(model, &mut ids, &mut out),
        Level::Lla => lla(model, &mut ids, &mut out),
    }
    out.push_str("}\n");
    Ok(out)
}

fn hla(model: &ArchitectureModel, ids: &mut Ids, out: &mut String) {
    let mut node_ids: HashMap<&str, String> = HashMap::new();
    for n in &model.nodes {
        let id = ids.fresh(&n.name);
        let mut lines = vec![n.name.clone()];
        lines.extend(representation_lines(&n.representation));
        let _ = writeln!(out, "  {id} [shape=box, label={}];", label(&lines));
        node_ids.insert(&n.name, id);
    }
    for c in &model.connections {
        let mut end = |name: &str| -> String {
            if let Some(id) = node_ids.get(name) {
                return id.clone();
            }
            ids.fresh(name)
        };
        let (from, to) = (end(&c.from.node), end(&c.to.node));
        let text = format!("{}/{}", c.pattern, c.mode);
        let _ = writeln!(
            out,
            "  {from} -> {to} [label={}, taillabel={}, headlabel={}];",
            label(&[text]),
            label(&[&c.from.port]),
            label(&[&c.to.port])
        );
    }
}

fn lla(model: &ArchitectureModel, ids: &mut Ids, out: &mut String) {
    for n in &model.nodes {
        let cluster = ids.fresh(&format!("cluster_{}", n.name));
        let _ = writeln!(out, "  subgraph {cluster} {{");
        let _ = writeln!(out, "    label={};", label(&[&n.name]));
        let Some(behavior) = &n.behavior else {
            let _ = writeln!(out, "  }}");
            continue;
        };
        let mut element_ids: HashMap<&str, String> = HashMap::new();
        for e in &behavior.elements {
            let id = ids.fresh(&format!("{}_{}", n.name, e.name));
            let shape = match e.kind {
                ElementKind::Action(_) => "box",
                ElementKind::Event(_) => "ellipse",
            };
            let _ = writeln!(
                out,
                "    {id} [shape={shape}, label={}];",
                label(&[e.name.clone(), element_kind(e)])
            );
            element_ids.insert(&e.name, id);
        }
        for l in &behavior.links {
            let mut end = |name: &str| -> String {
                if let Some(id) = element_ids.get(name) {
                    return id.clone();
                }
                ids.fresh(&format!("{}_{name}", n.name))
            };
            let (from, to) = (end(&l.from), end(&l.to));
            let _ = writeln!(out, "    {from} -> {to};");
        }
        let _ = writeln!(out, "  }}");
    }
}
