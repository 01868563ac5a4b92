//! Semantic rules over a parsed model.
//!
//! | code | severity | rule |
//! |------|----------|------|
//! | R001 | error    | connections run from a declared out-port to a declared in-port |
//! | R002 | error    | a connection joins two different nodes |
//! | R003 | error    | at LLA every node has a behavior |
//! | R004 | error    | behavior links name declared elements and form no cycle |
//! | R005 | error    | receive events use own in-ports, send actions own out-ports |
//! | R006 | error    | verify actions have rules; each rule is mapped, well-parameterized and names a source column |
//! | R007 | warning  | a node with a generation action also receives data |
//! | R008 | warning  | connected nodes declare disjoint, non-empty format sets |
//!
//! Only R001, R002 and R008 apply at HLA.

use crate::diag::{has_errors, sort_diagnostics, Diagnostic, Span};
use crate::dsl::{ModelPath, SourceMap};
use crate::mapper::resolve_rule;
use crate::model::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelStatus {
    HlaOk,
    LlaOk,
}

pub fn validate(model: &ArchitectureModel) -> Vec<Diagnostic> {
    validate_with_spans(model, &SourceMap::default())
}

/// Like [`validate`], attaching positions from `spans` to each diagnostic.
pub fn validate_with_spans(model: &ArchitectureModel, spans: &SourceMap) -> Vec<Diagnostic> {
    let mut v = Validator {
        model,
        spans,
        diags: Vec::new(),
    };
    v.connections();
    if model.level == Level::Lla {
        for node in &model.nodes {
            v.node(node);
        }
    }
    let mut diags = v.diags;
    sort_diagnostics(&mut diags);
    diags
}

/// Classifies the model at its declared level. Warnings do not fail a level.
pub fn validate_level(model: &ArchitectureModel) -> Result<LevelStatus, Vec<Diagnostic>> {
    let diags = validate(model);
    if has_errors(&diags) {
        return Err(diags);
    }
    Ok(match model.level {
        Level::Hla => LevelStatus::HlaOk,
        Level::Lla => LevelStatus::LlaOk,
    })
}

struct Validator<'a> {
    model: &'a ArchitectureModel,
    spans: &'a SourceMap,
    diags: Vec<Diagnostic>,
}

impl<'a> Validator<'a> {
    fn push(&mut self, d: Diagnostic, span: Option<Span>) {
        self.diags.push(d.with_span(span));
    }

    fn element_span(&self, node: &str, element: &str) -> Option<Span> {
        self.spans.get(&ModelPath::Element {
            node: node.to_string(),
            element: element.to_string(),
        })
    }

    fn connections(&mut self) {
        for c in &self.model.connections {
            let span = self.spans.get(&ModelPath::Connection(c.id.clone()));
            for (end, expected) in [(&c.from, Direction::Out), (&c.to, Direction::In)] {
                let role = if expected == Direction::Out { "source" } else { "target" };
                match self.model.resolve(end) {
                    None => self.push(
                        Diagnostic::error("R001", format!("connection {}: {role} port {end} is not declared", c.id)),
                        span,
                    ),
                    Some(p) if p.direction != expected => self.push(
                        Diagnostic::error(
                            "R001",
                            format!(
                                "connection {}: {role} port {end} must be an {expected}-port, found {}",
                                c.id, p.direction
                            ),
                        ),
                        span,
                    ),
                    Some(_) => {}
                }
            }
            if c.from.node == c.to.node {
                self.push(
                    Diagnostic::error(
                        "R002",
                        format!("connection {} joins node {} to itself", c.id, c.from.node),
                    ),
                    span,
                );
            }
            let formats = |end: &PortRef| {
                self.model
                    .node(&end.node)
                    .map(|n| n.representation.formats.as_slice())
                    .unwrap_or_default()
            };
            let (a, b) = (formats(&c.from), formats(&c.to));
            if !a.is_empty() && !b.is_empty() && !a.iter().any(|f| b.contains(f)) {
                self.push(
                    Diagnostic::warning(
                        "R008",
                        format!(
                            "connection {}: {} and {} share no data format",
                            c.id, c.from.node, c.to.node
                        ),
                    ),
                    span,
                );
            }
        }
    }

    fn node(&mut self, node: &DataNode) {
        let node_span = self.spans.node(&node.name);
        let Some(behavior) = &node.behavior else {
            self.push(
                Diagnostic::error("R003", format!("node {} has no behavior at LLA", node.name)),
                node_span,
            );
            return;
        };

        let behavior_span = self.spans.get(&ModelPath::Behavior(node.name.clone())).or(node_span);
        for (i, link) in behavior.links.iter().enumerate() {
            for end in [&link.from, &link.to] {
                if behavior.element(end).is_none() {
                    let span = self
                        .spans
                        .get(&ModelPath::Link {
                            node: node.name.clone(),
                            index: i,
                        })
                        .or(behavior_span);
                    self.push(
                        Diagnostic::error(
                            "R004",
                            format!("node {}: link {} -> {} names undeclared element {end}", node.name, link.from, link.to),
                        ),
                        span,
                    );
                }
            }
        }
        if let Err(OrderError::Cycle(cycle)) = behavior_order(behavior) {
            self.push(
                Diagnostic::error(
                    "R004",
                    format!("node {}: behavior links form a cycle through {}", node.name, cycle.join(", ")),
                ),
                behavior_span,
            );
        }

        let mut generates = false;
        let mut receives = false;
        for e in &behavior.elements {
            let span = self.element_span(&node.name, &e.name).or(behavior_span);
            let port_check = |port: &str, expected: Direction, what: &str| match node.port(port) {
                None => Some(format!(
                    "node {}: {what} {} uses undeclared port {port}",
                    node.name, e.name
                )),
                Some(p) if p.direction != expected => Some(format!(
                    "node {}: {what} {} needs an {expected}-port but {port} is an {}-port",
                    node.name, e.name, p.direction
                )),
                Some(_) => None,
            };
            match &e.kind {
                ElementKind::Event(Event::ReceiveData { port }) => {
                    receives = true;
                    if let Some(msg) = port_check(port, Direction::In, "receive event") {
                        self.push(Diagnostic::error("R005", msg), span);
                    }
                }
                ElementKind::Action(Action::SendData { port }) => {
                    if let Some(msg) = port_check(port, Direction::Out, "send action") {
                        self.push(Diagnostic::error("R005", msg), span);
                    }
                }
                ElementKind::Action(Action::VerifyData(spec)) => self.verify(node, &e.name, spec, span),
                ElementKind::Action(Action::Generation) => generates = true,
                ElementKind::Action(_) => {}
            }
        }
        if generates && receives {
            self.push(
                Diagnostic::warning(
                    "R007",
                    format!(
                        "node {} both generates data and receives it; data sources normally only originate data",
                        node.name
                    ),
                ),
                node_span,
            );
        }
    }

    fn verify(&mut self, node: &DataNode, element: &str, spec: &QualitySpec, span: Option<Span>) {
        let Some(source) = self.model.source(&spec.source) else {
            self.push(
                Diagnostic::error(
                    "R006",
                    format!("node {}: verify action {element} names undeclared source {}", node.name, spec.source),
                ),
                span,
            );
            return;
        };
        if spec.rules.is_empty() {
            self.push(
                Diagnostic::error(
                    "R006",
                    format!("node {}: verify action {element} declares no quality rules", node.name),
                ),
                span,
            );
        }
        for (i, rule) in spec.rules.iter().enumerate() {
            if let Err(d) = resolve_rule(rule, source) {
                let rule_span = self
                    .spans
                    .get(&ModelPath::Rule {
                        node: node.name.clone(),
                        element: element.to_string(),
                        index: i,
                    })
                    .or(span);
                self.push(
                    Diagnostic::error(
                        "R006",
                        format!("node {}: verify action {element}: {} ({})", node.name, d.message, d.code),
                    ),
                    rule_span,
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_model;

    fn codes(src: &str) -> Vec<String> {
        validate(&parse_model(src).unwrap()).into_iter().map(|d| d.code).collect()
    }

    #[test]
    fn minimal_hla_is_valid() {
        assert!(codes("architecture M level HLA { }").is_empty());
        assert_eq!(
            validate_level(&parse_model("architecture M level HLA { }").unwrap()),
            Ok(LevelStatus::HlaOk)
        );
    }

    #[test]
    fn in_to_in_connection() {
        let src = "architecture M level HLA { node A { port in a; } node B { port in b; } connect A.a -> B.b; }";
        assert_eq!(codes(src), ["R001"]);
    }

    #[test]
    fn unresolved_endpoint() {
        let src = "architecture M level HLA { node A { port out a; } connect A.a -> B.b; }";
        assert_eq!(codes(src), ["R001"]);
    }

    #[test]
    fn hla_nodes_need_no_behavior_but_lla_nodes_do() {
        let hla = "architecture M level HLA { node A { } node B { } }";
        assert_eq!(validate_level(&parse_model(hla).unwrap()), Ok(LevelStatus::HlaOk));
        let lla = hla.replace("HLA", "LLA");
        let errs = validate_level(&parse_model(&lla).unwrap()).unwrap_err();
        assert_eq!(errs.iter().map(|d| d.code.as_str()).collect::<Vec<_>>(), ["R003", "R003"]);
    }

    #[test]
    fn hla_ignores_behavior_rules() {
        let src = "architecture M level HLA { node A { behavior { link a -> b; } } }";
        assert!(codes(src).is_empty());
        assert_eq!(codes(&src.replace("HLA", "LLA")), ["R004", "R004"]);
    }

    #[test]
    fn uniqueness_with_not_null_is_r006() {
        let src = r#"architecture M level LLA {
  node A { behavior { action verify_data v on source s { column id { uniqueness expect_column_values_to_not_be_null; } } } }
  source s { kind csvfile; path "s.csv"; column id: integer; }
}"#;
        let (model, spans) = crate::dsl::parse_model_with_spans(src).unwrap();
        let diags = validate_with_spans(&model, &spans);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, "R006");
        assert!(diags[0].message.contains("M001"), "{}", diags[0].message);
        assert_eq!(diags[0].span.unwrap().line, 2);
    }

    #[test]
    fn diagnostics_are_sorted() {
        let src = "architecture M level LLA { node A { port in i; } node B { port in j; } connect A.i -> B.j; connect B.j -> B.j; }";
        assert_eq!(codes(src), ["R001", "R001", "R002", "R003", "R003"]);
    }
}
