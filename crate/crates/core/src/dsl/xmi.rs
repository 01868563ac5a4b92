//! XMI interchange subset.
//!
//! One element per metaclass, cross-references by name:
//!
//! ```text
//! architecture(name, level)
//!   node(name)
//!     represent(formats, processing, storage, location)
//!     port(name, direction)
//!     behavior
//!       action(name, kind, subkind?, port?, source?)
//!         rule(column, dimension, expectation?, params?)
//!       event(name, kind?, port)
//!       link(from, to)
//!   connection(from, to, pattern?, mode?)
//!   source(name, kind, host?, database?, table?, path?)
//!     column(name, type)
//! ```
//!
//! `formats` and `processing` are space-separated keyword lists; `storage`
//! is `<family> <kind>`; `params` uses the DSL's `key=value` syntax. A root
//! element with local name `XMI` wrapping the `architecture` element is
//! accepted. Anything else (tool metadata, layout notes, vendor attributes)
//! is skipped with a warning.
//!
//! Diagnostic codes: `X001` malformed XML, `X010` missing required
//! attribute, `X011` invalid attribute value, `X020` skipped element or
//! attribute (warning); `P010`/`P012` as in the text parser.

use roxmltree::{Document, Node};

use crate::diag::{Diagnostic, Span};
use crate::mapper::{default_expectation, expand_expectation};
use crate::model::*;

use super::lexer::is_identifier;
use super::parser::parse_params;
use super::printer::format_value;

/// Imports a model. On success the second element holds the warnings.
pub fn import_xmi(xml: &str) -> Result<(ArchitectureModel, Vec<Diagnostic>), Vec<Diagnostic>> {
    let doc = Document::parse(xml).map_err(|e| {
        let pos = e.pos();
        vec![Diagnostic::error("X001", format!("malformed XML: {e}")).at(Span::new(pos.row, pos.col, 0, 0))]
    })?;
    let mut imp = Importer {
        doc: &doc,
        diags: Vec::new(),
    };
    let root = doc.root_element();
    let arch = if root.tag_name().name() == "architecture" {
        Some(root)
    } else if root.tag_name().name() == "XMI" {
        let mut found = None;
        for child in root.children().filter(Node::is_element) {
            if child.tag_name().name() == "architecture" && found.is_none() {
                found = Some(child);
            } else {
                imp.skip(child);
            }
        }
        found
    } else {
        None
    };
    let Some(arch) = arch else {
        return Err(vec![imp.error(root, "X010", "document requires an architecture element")]);
    };
    let model = imp.architecture(arch);
    match model {
        Some(m) => {
            let mut structural = super_checks(&m);
            if imp.diags.iter().any(Diagnostic::is_error) || !structural.is_empty() {
                imp.diags.append(&mut structural);
                Err(imp.diags)
            } else {
                Ok((m, imp.diags))
            }
        }
        None => Err(imp.diags),
    }
}

struct Importer<'a, 'input> {
    doc: &'a Document<'input>,
    diags: Vec<Diagnostic>,
}

impl<'a, 'input> Importer<'a, 'input> {
    fn span(&self, node: Node) -> Span {
        let range = node.range();
        let pos = self.doc.text_pos_at(range.start);
        Span::new(pos.row, pos.col, range.start, range.len())
    }

    fn error(&self, node: Node, code: &str, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::error(code, msg).at(self.span(node))
    }

    fn skip(&mut self, node: Node) {
        let d = Diagnostic::warning("X020", format!("skipped {}", node.tag_name().name())).at(self.span(node));
        self.diags.push(d);
    }

    /// Warns about attributes outside `known`.
    fn check_attrs(&mut self, node: Node, known: &[&str]) {
        for attr in node.attributes() {
            if attr.namespace().is_some() || !known.contains(&attr.name()) {
                let d = Diagnostic::warning(
                    "X020",
                    format!("skipped attribute {} on {}", attr.name(), node.tag_name().name()),
                )
                .at(self.span(node));
                self.diags.push(d);
            }
        }
    }

    fn required(&mut self, node: Node, attr: &str) -> Option<String> {
        match node.attribute(attr) {
            Some(v) => Some(v.to_string()),
            None => {
                let d = self.error(node, "X010", format!("{} requires {attr}", node.tag_name().name()));
                self.diags.push(d);
                None
            }
        }
    }

    fn name_attr(&mut self, node: Node, attr: &str) -> Option<String> {
        let v = self.required(node, attr)?;
        if is_identifier(&v) {
            Some(v)
        } else {
            let d = self.error(
                node,
                "X011",
                format!("{} {attr} `{v}` is not an identifier", node.tag_name().name()),
            );
            self.diags.push(d);
            None
        }
    }

    fn lookup<T>(&mut self, node: Node, attr: &str, value: &str, f: fn(&str) -> Option<T>) -> Option<T> {
        let r = f(value);
        if r.is_none() {
            let d = self.error(
                node,
                "X011",
                format!("invalid {attr} `{value}` on {}", node.tag_name().name()),
            );
            self.diags.push(d);
        }
        r
    }

    fn enum_attr<T>(&mut self, node: Node, attr: &str, f: fn(&str) -> Option<T>) -> Option<T> {
        let v = self.required(node, attr)?;
        self.lookup(node, attr, &v, f)
    }

    fn opt_enum_attr<T>(&mut self, node: Node, attr: &str, f: fn(&str) -> Option<T>, default: T) -> Option<T> {
        match node.attribute(attr) {
            None => Some(default),
            Some(v) => self.lookup(node, attr, v, f),
        }
    }

    fn architecture(&mut self, el: Node) -> Option<ArchitectureModel> {
        self.check_attrs(el, &["name", "level"]);
        let name = self.name_attr(el, "name");
        let level = self.enum_attr(el, "level", Level::from_keyword);
        let mut nodes = Vec::new();
        let mut connections = Vec::new();
        let mut sources = Vec::new();
        for child in el.children().filter(Node::is_element) {
            match child.tag_name().name() {
                "node" => nodes.extend(self.node(child)),
                "connection" => connections.extend(self.connection(child)),
                "source" => sources.extend(self.source(child)),
                _ => self.skip(child),
            }
        }
        Some(ArchitectureModel {
            name: name?,
            level: level?,
            nodes,
            connections,
            sources,
        })
    }

    fn node(&mut self, el: Node) -> Option<DataNode> {
        self.check_attrs(el, &["name"]);
        let name = self.name_attr(el, "name");
        let mut representation = DataRepresentation::default();
        let mut ports = Vec::new();
        let mut behavior = None;
        for child in el.children().filter(Node::is_element) {
            match child.tag_name().name() {
                "represent" => {
                    if let Some(r) = self.represent(child) {
                        representation = r;
                    }
                }
                "port" => ports.extend(self.port(child)),
                "behavior" => behavior = self.behavior(child),
                _ => self.skip(child),
            }
        }
        Some(DataNode {
            name: name?,
            representation,
            ports,
            behavior,
        })
    }

    fn represent(&mut self, el: Node) -> Option<DataRepresentation> {
        self.check_attrs(el, &["formats", "processing", "storage", "location"]);
        for child in el.children().filter(Node::is_element) {
            self.skip(child);
        }
        let mut rep = DataRepresentation::default();
        let mut ok = true;
        for w in el.attribute("formats").unwrap_or("").split_whitespace() {
            match self.lookup(el, "format", w, DataFormat::from_keyword) {
                Some(f) => rep.formats.push(f),
                None => ok = false,
            }
        }
        for w in el.attribute("processing").unwrap_or("").split_whitespace() {
            match self.lookup(el, "processing", w, Processing::from_keyword) {
                Some(p) => rep.processing.push(p),
                None => ok = false,
            }
        }
        if let Some(storage) = el.attribute("storage") {
            let parts: Vec<&str> = storage.split_whitespace().collect();
            let tech = match parts[..] {
                [family, kind] => StorageFamily::from_keyword(family)
                    .zip(StorageTech::from_keyword(kind))
                    .filter(|(f, k)| k.family() == *f)
                    .map(|(_, k)| k),
                _ => None,
            };
            if tech.is_none() {
                let d = self.error(el, "X011", format!("invalid storage `{storage}`"));
                self.diags.push(d);
                ok = false;
            }
            rep.storage = tech;
        }
        if let Some(loc) = el.attribute("location") {
            rep.location = self.lookup(el, "location", loc, Location::from_keyword);
            ok &= rep.location.is_some();
        }
        ok.then_some(rep)
    }

    fn port(&mut self, el: Node) -> Option<Port> {
        self.check_attrs(el, &["name", "direction"]);
        let name = self.name_attr(el, "name");
        let direction = self.enum_attr(el, "direction", Direction::from_keyword);
        Some(Port::new(name?, direction?))
    }

    fn behavior(&mut self, el: Node) -> Option<NodeBehavior> {
        self.check_attrs(el, &[]);
        let mut b = NodeBehavior::default();
        for child in el.children().filter(Node::is_element) {
            match child.tag_name().name() {
                "action" => b.elements.extend(self.action(child)),
                "event" => b.elements.extend(self.event(child)),
                "link" => {
                    self.check_attrs(child, &["from", "to"]);
                    let from = self.name_attr(child, "from");
                    let to = self.name_attr(child, "to");
                    if let (Some(from), Some(to)) = (from, to) {
                        b.links.push(Link::new(from, to));
                    }
                }
                _ => self.skip(child),
            }
        }
        Some(b)
    }

    fn action(&mut self, el: Node) -> Option<BehaviorElement> {
        let name = self.name_attr(el, "name");
        let kind = self.enum_attr(el, "kind", ActionKind::from_keyword);
        let action = match kind? {
            ActionKind::SendData => {
                self.check_attrs(el, &["name", "kind", "port"]);
                self.children_unexpected(el);
                Action::SendData {
                    port: self.name_attr(el, "port")?,
                }
            }
            ActionKind::VerifyData => {
                self.check_attrs(el, &["name", "kind", "source"]);
                let source = self.name_attr(el, "source");
                let mut rules = Vec::new();
                let mut ok = true;
                for child in el.children().filter(Node::is_element) {
                    if child.tag_name().name() == "rule" {
                        match self.rule(child) {
                            Some(r) => rules.push(r),
                            None => ok = false,
                        }
                    } else {
                        self.skip(child);
                    }
                }
                if !ok {
                    return None;
                }
                Action::VerifyData(QualitySpec { source: source?, rules })
            }
            kind => {
                self.check_attrs(el, &["name", "kind", "subkind"]);
                self.children_unexpected(el);
                let sub = el.attribute("subkind");
                match Action::simple(kind, sub) {
                    Some(a) => a,
                    None => {
                        let d = self.error(
                            el,
                            "X011",
                            format!("invalid subkind `{}` for {kind}", sub.unwrap_or("")),
                        );
                        self.diags.push(d);
                        return None;
                    }
                }
            }
        };
        Some(BehaviorElement::action(name?, action))
    }

    fn children_unexpected(&mut self, el: Node) {
        for child in el.children().filter(Node::is_element) {
            self.skip(child);
        }
    }

    fn event(&mut self, el: Node) -> Option<BehaviorElement> {
        self.check_attrs(el, &["name", "kind", "port"]);
        self.children_unexpected(el);
        let name = self.name_attr(el, "name");
        let kind_ok = match el.attribute("kind") {
            None | Some("receive") => true,
            Some(other) => {
                let d = self.error(el, "X011", format!("invalid event kind `{other}`"));
                self.diags.push(d);
                false
            }
        };
        let port = self.name_attr(el, "port");
        if !kind_ok {
            return None;
        }
        Some(BehaviorElement::event(name?, Event::ReceiveData { port: port? }))
    }

    fn rule(&mut self, el: Node) -> Option<QualityRule> {
        self.check_attrs(el, &["column", "dimension", "expectation", "params"]);
        self.children_unexpected(el);
        let column = self.name_attr(el, "column");
        let dimension = self.enum_attr(el, "dimension", Dimension::from_keyword)?;
        let expectation = el
            .attribute("expectation")
            .map(expand_expectation)
            .unwrap_or_else(|| default_expectation(dimension).to_string());
        let params = match parse_params(el.attribute("params").unwrap_or("")) {
            Ok(p) => p,
            Err(e) => {
                let d = self.error(el, "X011", format!("invalid params: {}", e.message));
                self.diags.push(d);
                return None;
            }
        };
        Some(QualityRule {
            column: column?,
            dimension,
            expectation,
            params,
        })
    }

    fn port_ref(&mut self, el: Node, attr: &str) -> Option<PortRef> {
        let v = self.required(el, attr)?;
        match v.split_once('.') {
            Some((n, p)) if is_identifier(n) && is_identifier(p) => Some(PortRef::new(n, p)),
            _ => {
                let d = self.error(el, "X011", format!("{attr} `{v}` must be <node>.<port>"));
                self.diags.push(d);
                None
            }
        }
    }

    fn connection(&mut self, el: Node) -> Option<Connection> {
        self.check_attrs(el, &["from", "to", "pattern", "mode"]);
        self.children_unexpected(el);
        let from = self.port_ref(el, "from");
        let to = self.port_ref(el, "to");
        let pattern = self.opt_enum_attr(el, "pattern", Pattern::from_keyword, Pattern::SendReceive);
        let mode = self.opt_enum_attr(el, "mode", Mode::from_keyword, Mode::Async);
        Some(Connection::new(from?, to?, pattern?, mode?))
    }

    fn source(&mut self, el: Node) -> Option<SourceBinding> {
        let mut known = vec!["name", "kind"];
        known.extend_from_slice(CONNECTION_KEYS);
        self.check_attrs(el, &known);
        let name = self.name_attr(el, "name");
        let kind = self.enum_attr(el, "kind", SourceKind::from_keyword);
        let connection = CONNECTION_KEYS
            .iter()
            .filter_map(|k| el.attribute(*k).map(|v| (k.to_string(), v.to_string())))
            .collect();
        let mut columns = Vec::new();
        for child in el.children().filter(Node::is_element) {
            if child.tag_name().name() == "column" {
                self.check_attrs(child, &["name", "type"]);
                self.children_unexpected(child);
                let cname = self.name_attr(child, "name");
                let ty = self.enum_attr(child, "type", ColumnType::from_keyword);
                if let (Some(n), Some(t)) = (cname, ty) {
                    columns.push(ColumnMeta::new(n, t));
                }
            } else {
                self.skip(child);
            }
        }
        Some(SourceBinding {
            name: name?,
            kind: kind?,
            connection,
            columns,
        })
    }
}

/// Name uniqueness and source-key checks the text parser performs inline.
fn super_checks(m: &ArchitectureModel) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let dup = |diags: &mut Vec<Diagnostic>, what: &str, names: Vec<&str>| {
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                diags.push(Diagnostic::error("P010", format!("duplicate {what} name {n}")));
            }
        }
    };
    dup(&mut diags, "node", m.nodes.iter().map(|n| n.name.as_str()).collect());
    dup(&mut diags, "connection", m.connections.iter().map(|c| c.id.as_str()).collect());
    dup(&mut diags, "source", m.sources.iter().map(|s| s.name.as_str()).collect());
    for n in &m.nodes {
        dup(&mut diags, "port", n.ports.iter().map(|p| p.name.as_str()).collect());
        dup(&mut diags, "format", n.representation.formats.iter().map(|f| f.keyword()).collect());
        dup(&mut diags, "processing", n.representation.processing.iter().map(|p| p.keyword()).collect());
        if let Some(b) = &n.behavior {
            dup(&mut diags, "behavior element", b.elements.iter().map(|e| e.name.as_str()).collect());
        }
    }
    for s in &m.sources {
        dup(&mut diags, "column", s.columns.iter().map(|c| c.name.as_str()).collect());
        let required = s.kind.required_keys();
        for (key, _) in &s.connection {
            if !required.contains(&key.as_str()) {
                diags.push(Diagnostic::error(
                    "P012",
                    format!("`{key}` does not apply to {} source {}", s.kind, s.name),
                ));
            }
        }
        for key in required {
            if s.connection_value(key).is_none() {
                diags.push(Diagnostic::error(
                    "P012",
                    format!("{} source {} requires `{key}`", s.kind, s.name),
                ));
            }
        }
    }
    diags
}

/// Serializes a model to the XMI subset read by [`import_xmi`].
pub fn export_xmi(model: &ArchitectureModel) -> String {
    let mut w = XmlWriter {
        out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"),
    };
    w.start(0, "architecture", &[("name", model.name.clone()), ("level", model.level.to_string())]);
    for node in &model.nodes {
        w.start(1, "node", &[("name", node.name.clone())]);
        let rep = &node.representation;
        if !rep.is_empty() {
            let mut attrs = Vec::new();
            if !rep.formats.is_empty() {
                attrs.push(("formats", words(&rep.formats)));
            }
            if !rep.processing.is_empty() {
                attrs.push(("processing", words(&rep.processing)));
            }
            if let Some(s) = rep.storage {
                attrs.push(("storage", format!("{} {s}", s.family())));
            }
            if let Some(l) = rep.location {
                attrs.push(("location", l.to_string()));
            }
            w.empty(2, "represent", &attrs);
        }
        for p in &node.ports {
            w.empty(2, "port", &[("name", p.name.clone()), ("direction", p.direction.to_string())]);
        }
        if let Some(b) = &node.behavior {
            w.start(2, "behavior", &[]);
            for e in &b.elements {
                write_element(&mut w, e);
            }
            for l in &b.links {
                w.empty(3, "link", &[("from", l.from.clone()), ("to", l.to.clone())]);
            }
            w.end(2, "behavior");
        }
        w.end(1, "node");
    }
    for c in &model.connections {
        w.empty(
            1,
            "connection",
            &[
                ("from", c.from.to_string()),
                ("to", c.to.to_string()),
                ("pattern", c.pattern.to_string()),
                ("mode", c.mode.to_string()),
            ],
        );
    }
    for s in &model.sources {
        let mut attrs = vec![("name", s.name.clone()), ("kind", s.kind.to_string())];
        for key in CONNECTION_KEYS {
            if let Some(v) = s.connection_value(key) {
                attrs.push((key, v.to_string()));
            }
        }
        if s.columns.is_empty() {
            w.empty(1, "source", &attrs);
            continue;
        }
        w.start(1, "source", &attrs);
        for col in &s.columns {
            w.empty(2, "column", &[("name", col.name.clone()), ("type", col.ty.to_string())]);
        }
        w.end(1, "source");
    }
    w.end(0, "architecture");
    w.out
}

fn write_element(w: &mut XmlWriter, e: &BehaviorElement) {
    let name = ("name", e.name.clone());
    match &e.kind {
        ElementKind::Event(Event::ReceiveData { port }) => {
            w.empty(3, "event", &[name, ("kind", "receive".into()), ("port", port.clone())])
        }
        ElementKind::Action(Action::SendData { port }) => {
            w.empty(3, "action", &[name, ("kind", "send_data".into()), ("port", port.clone())])
        }
        ElementKind::Action(Action::VerifyData(spec)) => {
            let attrs = [name, ("kind", "verify_data".into()), ("source", spec.source.clone())];
            if spec.rules.is_empty() {
                return w.empty(3, "action", &attrs);
            }
            w.start(3, "action", &attrs);
            for r in &spec.rules {
                let mut attrs = vec![
                    ("column", r.column.clone()),
                    ("dimension", r.dimension.to_string()),
                    ("expectation", r.expectation.clone()),
                ];
                if !r.params.is_empty() {
                    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={}", format_value(v))).collect();
                    attrs.push(("params", params.join(" ")));
                }
                w.empty(4, "rule", &attrs);
            }
            w.end(3, "action");
        }
        ElementKind::Action(a) => {
            let mut attrs = vec![name, ("kind", a.kind().to_string())];
            if let Some(sub) = a.sub_kind() {
                attrs.push(("subkind", sub.to_string()));
            }
            w.empty(3, "action", &attrs);
        }
    }
}

struct XmlWriter {
    out: String,
}

impl XmlWriter {
    fn open_tag(&mut self, indent: usize, tag: &str, attrs: &[(&str, String)]) {
        self.out.push_str(&"  ".repeat(indent));
        self.out.push('<');
        self.out.push_str(tag);
        for (k, v) in attrs {
            self.out.push_str(&format!(" {k}=\"{}\"", escape(v)));
        }
    }

    fn start(&mut self, indent: usize, tag: &str, attrs: &[(&str, String)]) {
        self.open_tag(indent, tag, attrs);
        self.out.push_str(">\n");
    }

    fn empty(&mut self, indent: usize, tag: &str, attrs: &[(&str, String)]) {
        self.open_tag(indent, tag, attrs);
        self.out.push_str("/>\n");
    }

    fn end(&mut self, indent: usize, tag: &str) {
        self.out.push_str(&format!("{}</{tag}>\n", "  ".repeat(indent)));
    }
}

fn words<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}
