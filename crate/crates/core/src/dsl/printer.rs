use std::fmt::Write;

use crate::mapper::abbreviate_expectation;
use crate::model::*;

use super::lexer::quote;

/// Canonical `.daml` text: two-space indentation, one declaration per line,
/// declaration order preserved. Parsing the output yields the same model.
pub fn pretty_print(model: &ArchitectureModel) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "architecture {} level {} {{", model.name, model.level);
    for node in &model.nodes {
        print_node(w, node);
    }
    for c in &model.connections {
        let _ = writeln!(
            w,
            "  connect {} -> {} pattern {} mode {};",
            c.from, c.to, c.pattern, c.mode
        );
    }
    for s in &model.sources {
        let _ = writeln!(w, "  source {} {{", s.name);
        let _ = writeln!(w, "    kind {};", s.kind);
        for (key, value) in &s.connection {
            let _ = writeln!(w, "    {key} {};", quote(value));
        }
        for col in &s.columns {
            let _ = writeln!(w, "    column {}: {};", col.name, col.ty);
        }
        let _ = writeln!(w, "  }}");
    }
    out.push_str("}\n");
    out
}

fn print_node(w: &mut String, node: &DataNode) {
    let _ = writeln!(w, "  node {} {{", node.name);
    let rep = &node.representation;
    if !rep.is_empty() {
        let _ = writeln!(w, "    represent {{");
        if !rep.formats.is_empty() {
            let _ = writeln!(w, "      format {};", join(&rep.formats));
        }
        if !rep.processing.is_empty() {
            let _ = writeln!(w, "      processing {};", join(&rep.processing));
        }
        if let Some(s) = rep.storage {
            let _ = writeln!(w, "      storage {} {};", s.family(), s);
        }
        if let Some(l) = rep.location {
            let _ = writeln!(w, "      location {l};");
        }
        let _ = writeln!(w, "    }}");
    }
    for p in &node.ports {
        let _ = writeln!(w, "    port {} {};", p.direction, p.name);
    }
    if let Some(b) = &node.behavior {
        let _ = writeln!(w, "    behavior {{");
        for e in &b.elements {
            print_element(w, e);
        }
        for l in &b.links {
            let _ = writeln!(w, "      link {} -> {};", l.from, l.to);
        }
        let _ = writeln!(w, "    }}");
    }
    let _ = writeln!(w, "  }}");
}

fn print_element(w: &mut String, e: &BehaviorElement) {
    match &e.kind {
        ElementKind::Event(Event::ReceiveData { port }) => {
            let _ = writeln!(w, "      event receive {} via {port};", e.name);
        }
        ElementKind::Action(Action::SendData { port }) => {
            let _ = writeln!(w, "      action send_data {} via {port};", e.name);
        }
        ElementKind::Action(Action::VerifyData(spec)) => {
            let _ = writeln!(w, "      action verify_data {} on source {} {{", e.name, spec.source);
            // Consecutive rules on one column share a block.
            let mut i = 0;
            while i < spec.rules.len() {
                let column = &spec.rules[i].column;
                let _ = writeln!(w, "        column {column} {{");
                while i < spec.rules.len() && spec.rules[i].column == *column {
                    print_rule(w, &spec.rules[i]);
                    i += 1;
                }
                let _ = writeln!(w, "        }}");
            }
            let _ = writeln!(w, "      }}");
        }
        ElementKind::Action(a) => {
            let kind = match a.sub_kind() {
                Some(sub) => format!("{}.{sub}", a.kind()),
                None => a.kind().to_string(),
            };
            let _ = writeln!(w, "      action {kind} {};", e.name);
        }
    }
}

fn print_rule(w: &mut String, rule: &QualityRule) {
    let _ = write!(
        w,
        "          {} {}",
        rule.dimension,
        abbreviate_expectation(&rule.expectation)
    );
    for (k, v) in &rule.params {
        let _ = write!(w, " {k}={}", format_value(v));
    }
    w.push_str(";\n");
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

pub(crate) fn format_value(v: &ParamValue) -> String {
    match v {
        ParamValue::Int(i) => i.to_string(),
        ParamValue::Num(n) => format_number(*n),
        ParamValue::Str(s) => quote(s),
        ParamValue::Bool(b) => b.to_string(),
        ParamValue::List(items) => format!(
            "[{}]",
            items.iter().map(format_value).collect::<Vec<_>>().join(", ")
        ),
    }
}

/// Shortest decimal that reads back as the same `f64`, always with a
/// fractional part so it is not mistaken for an integer.
pub fn format_number(n: f64) -> String {
    let s = n.to_string();
    if s.contains(['.', 'e', 'E']) || !n.is_finite() {
        s
    } else {
        format!("{s}.0")
    }
}
