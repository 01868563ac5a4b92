//! Recursive-descent parser for `.daml` text.
//!
//! Syntax errors stop the parse at the first offending token. Duplicate
//! declarations are collected and reported together once the whole input
//! has been read.
//!
//! Error codes:
//! - `P001`..`P003` lexical errors (see [`tokenize`])
//! - `P004` unexpected token
//! - `P005` unknown vocabulary word (format, storage kind, sub-kind, ...)
//! - `P006` numeric literal out of range
//! - `P010` duplicate name or repeated singular clause
//! - `P012` source connection keys inconsistent with the source kind

use crate::diag::{Diagnostic, Span};
use crate::mapper::expand_expectation;
use crate::model::*;

use super::lexer::{tokenize, Token, TokenKind};
use super::{ModelPath, SourceMap};

pub fn parse_model(text: &str) -> Result<ArchitectureModel, Vec<Diagnostic>> {
    parse_model_with_spans(text).map(|(m, _)| m)
}

pub fn parse_model_with_spans(text: &str) -> Result<(ArchitectureModel, SourceMap), Vec<Diagnostic>> {
    let tokens = tokenize(text).map_err(|d| vec![d])?;
    let mut p = Parser {
        tokens,
        pos: 0,
        map: SourceMap::default(),
        diags: Vec::new(),
    };
    match p.model() {
        Ok(model) if p.diags.is_empty() => Ok((model, p.map)),
        Ok(_) => Err(p.diags),
        Err(d) => {
            p.diags.push(d);
            Err(p.diags)
        }
    }
}

/// Parses a space-separated `key=value` list, the parameter syntax of a
/// quality rule. Used for the `params` attribute of XMI rules.
pub(crate) fn parse_params(text: &str) -> Result<Vec<(String, ParamValue)>, Diagnostic> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        map: SourceMap::default(),
        diags: Vec::new(),
    };
    let mut params: Vec<(String, ParamValue)> = Vec::new();
    while p.peek().kind != TokenKind::Eof {
        let (key, span) = p.name()?;
        p.punct("=")?;
        let value = p.value(true)?;
        if params.iter().any(|(k, _)| *k == key) {
            return Err(Diagnostic::error("P010", format!("duplicate parameter {key}")).at(span));
        }
        params.push((key, value));
    }
    Ok(params)
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    map: SourceMap,
    diags: Vec<Diagnostic>,
}

/// Tracks names within one scope and reports repeats as `P010`.
struct Names<'a> {
    what: &'a str,
    seen: Vec<String>,
}

impl<'a> Names<'a> {
    fn new(what: &'a str) -> Self {
        Names {
            what,
            seen: Vec::new(),
        }
    }

    fn claim(&mut self, name: &str, span: Span, diags: &mut Vec<Diagnostic>) -> bool {
        if self.seen.iter().any(|s| s == name) {
            diags.push(Diagnostic::error("P010", format!("duplicate {} name {name}", self.what)).at(span));
            false
        } else {
            self.seen.push(name.to_string());
            true
        }
    }
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, n: usize) -> &Token {
        let last = self.tokens.len() - 1;
        &self.tokens[(self.pos + n).min(last)]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error("P004", format!("expected {expected}, found {}", t.describe())).at(t.span)
    }

    fn punct(&mut self, p: &str) -> PResult<Token> {
        if self.peek().is_punct(p) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&format!("`{p}`")))
        }
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.peek().is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Token> {
        if self.peek().is_keyword(kw) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    /// Contextual word: an identifier with fixed spelling.
    fn word(&mut self, w: &str) -> PResult<Token> {
        if self.peek().is(TokenKind::Ident, w) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&format!("`{w}`")))
        }
    }

    fn at_name(&self) -> bool {
        matches!(self.peek().kind, TokenKind::Ident | TokenKind::Keyword)
    }

    /// Identifier in a name position; keywords are accepted here.
    fn name(&mut self) -> PResult<(String, Span)> {
        if self.at_name() {
            let t = self.bump();
            Ok((t.text, t.span))
        } else {
            Err(self.unexpected("a name"))
        }
    }

    /// A vocabulary word. Keywords qualify: `column` is a storage technology.
    fn vocab<T>(&mut self, what: &str, lookup: fn(&str) -> Option<T>, expected: String) -> PResult<(T, Span)> {
        if !self.at_name() {
            return Err(self.unexpected(what));
        }
        let t = self.bump();
        match lookup(&t.text) {
            Some(v) => Ok((v, t.span)),
            None => Err(Diagnostic::error(
                "P005",
                format!("unknown {what} `{}`; expected one of {expected}", t.text),
            )
            .at(t.span)),
        }
    }

    fn model(&mut self) -> PResult<ArchitectureModel> {
        let start = self.keyword("architecture")?.span;
        let (name, _) = self.name()?;
        self.keyword("level")?;
        let level = if self.peek().kind == TokenKind::Ident {
            let t = self.bump();
            Level::from_keyword(&t.text).ok_or_else(|| {
                Diagnostic::error("P005", format!("unknown level `{}`; expected HLA or LLA", t.text)).at(t.span)
            })?
        } else {
            return Err(self.unexpected("`HLA` or `LLA`"));
        };
        self.map.insert(ModelPath::Model, start);
        self.punct("{")?;

        let mut model = ArchitectureModel::new(name, level);
        let mut nodes = Names::new("node");
        let mut connections = Names::new("connection");
        let mut sources = Names::new("source");
        loop {
            let t = self.peek();
            if t.is_keyword("node") {
                let (node, span) = self.node()?;
                if nodes.claim(&node.name, span, &mut self.diags) {
                    self.map.insert(ModelPath::Node(node.name.clone()), span);
                }
                model.nodes.push(node);
            } else if t.is_keyword("connect") {
                let (conn, span) = self.connection()?;
                if connections.claim(&conn.id, span, &mut self.diags) {
                    self.map.insert(ModelPath::Connection(conn.id.clone()), span);
                }
                model.connections.push(conn);
            } else if t.is_keyword("source") {
                let (source, span) = self.source()?;
                if sources.claim(&source.name, span, &mut self.diags) {
                    self.map.insert(ModelPath::Source(source.name.clone()), span);
                }
                model.sources.push(source);
            } else if t.is_punct("}") {
                self.bump();
                break;
            } else {
                return Err(self.unexpected("`node`, `connect`, `source` or `}`"));
            }
        }
        if self.peek().kind != TokenKind::Eof {
            return Err(self.unexpected("end of input"));
        }
        Ok(model)
    }

    fn node(&mut self) -> PResult<(DataNode, Span)> {
        self.keyword("node")?;
        let (name, span) = self.name()?;
        self.punct("{")?;
        let mut node = DataNode::new(name.clone());
        let mut ports = Names::new("port");
        let mut represented = false;
        loop {
            let t = self.peek().clone();
            if t.is_keyword("represent") {
                if represented {
                    self.diags.push(
                        Diagnostic::error("P010", format!("node {name} has more than one represent block")).at(t.span),
                    );
                }
                represented = true;
                node.representation = self.representation()?;
            } else if t.is_keyword("port") {
                self.bump();
                let (direction, _) = self.vocab("port direction", Direction::from_keyword, Direction::expected())?;
                let (pname, pspan) = self.name()?;
                self.punct(";")?;
                if ports.claim(&pname, pspan, &mut self.diags) {
                    self.map.insert(
                        ModelPath::Port {
                            node: name.clone(),
                            port: pname.clone(),
                        },
                        pspan,
                    );
                }
                node.ports.push(Port::new(pname, direction));
            } else if t.is_keyword("behavior") {
                if node.behavior.is_some() {
                    self.diags.push(
                        Diagnostic::error("P010", format!("node {name} has more than one behavior block")).at(t.span),
                    );
                }
                self.map.insert(ModelPath::Behavior(name.clone()), t.span);
                node.behavior = Some(self.behavior(&name)?);
            } else if t.is_punct("}") {
                self.bump();
                return Ok((node, span));
            } else {
                return Err(self.unexpected("`represent`, `port`, `behavior` or `}`"));
            }
        }
    }

    fn representation(&mut self) -> PResult<DataRepresentation> {
        self.keyword("represent")?;
        self.punct("{")?;
        let mut rep = DataRepresentation::default();
        let mut seen: Vec<String> = Vec::new();
        loop {
            let t = self.peek().clone();
            if t.is_punct("}") {
                self.bump();
                return Ok(rep);
            }
            if t.kind != TokenKind::Ident {
                return Err(self.unexpected("`format`, `processing`, `storage`, `location` or `}`"));
            }
            if seen.contains(&t.text) {
                self.diags
                    .push(Diagnostic::error("P010", format!("repeated `{}` clause", t.text)).at(t.span));
            }
            seen.push(t.text.clone());
            match t.text.as_str() {
                "format" => {
                    self.bump();
                    loop {
                        let (f, span) = self.vocab("data format", DataFormat::from_keyword, DataFormat::expected())?;
                        if rep.formats.contains(&f) {
                            self.diags
                                .push(Diagnostic::error("P010", format!("duplicate format {f}")).at(span));
                        }
                        rep.formats.push(f);
                        if !self.eat_punct(",") {
                            break;
                        }
                    }
                }
                "processing" => {
                    self.bump();
                    loop {
                        let (p, span) =
                            self.vocab("processing type", Processing::from_keyword, Processing::expected())?;
                        if rep.processing.contains(&p) {
                            self.diags
                                .push(Diagnostic::error("P010", format!("duplicate processing type {p}")).at(span));
                        }
                        rep.processing.push(p);
                        if !self.eat_punct(",") {
                            break;
                        }
                    }
                }
                "storage" => {
                    self.bump();
                    let (family, _) =
                        self.vocab("storage family", StorageFamily::from_keyword, StorageFamily::expected())?;
                    let kinds: Vec<&str> = StorageTech::in_family(family).map(StorageTech::keyword).collect();
                    let (kind, span) =
                        self.vocab("storage technology", StorageTech::from_keyword, kinds.join(", "))?;
                    if kind.family() != family {
                        return Err(Diagnostic::error(
                            "P005",
                            format!("{kind} is not a {family} technology; expected one of {}", kinds.join(", ")),
                        )
                        .at(span));
                    }
                    rep.storage = Some(kind);
                }
                "location" => {
                    self.bump();
                    let (loc, _) = self.vocab("location", Location::from_keyword, Location::expected())?;
                    rep.location = Some(loc);
                }
                _ => return Err(self.unexpected("`format`, `processing`, `storage`, `location` or `}`")),
            }
            self.punct(";")?;
        }
    }

    fn behavior(&mut self, node: &str) -> PResult<NodeBehavior> {
        self.keyword("behavior")?;
        self.punct("{")?;
        let mut behavior = NodeBehavior::default();
        let mut names = Names::new("behavior element");
        loop {
            let t = self.peek().clone();
            if t.is_keyword("action") || t.is_keyword("event") {
                let (element, span) = if t.is_keyword("action") {
                    self.action(node)?
                } else {
                    self.event()?
                };
                if names.claim(&element.name, span, &mut self.diags) {
                    self.map.insert(
                        ModelPath::Element {
                            node: node.to_string(),
                            element: element.name.clone(),
                        },
                        span,
                    );
                }
                behavior.elements.push(element);
            } else if t.is_keyword("link") {
                self.bump();
                let (from, _) = self.name()?;
                self.punct("->")?;
                let (to, _) = self.name()?;
                self.punct(";")?;
                self.map.insert(
                    ModelPath::Link {
                        node: node.to_string(),
                        index: behavior.links.len(),
                    },
                    t.span,
                );
                behavior.links.push(Link::new(from, to));
            } else if t.is_punct("}") {
                self.bump();
                return Ok(behavior);
            } else {
                return Err(self.unexpected("`action`, `event`, `link` or `}`"));
            }
        }
    }

    fn action(&mut self, node: &str) -> PResult<(BehaviorElement, Span)> {
        let start = self.keyword("action")?.span;
        let (kind, kind_span) = self.vocab("action kind", ActionKind::from_keyword, ActionKind::expected())?;
        let sub = if self.eat_punct(".") {
            if self.peek().kind != TokenKind::Ident {
                return Err(self.unexpected("a sub-kind"));
            }
            Some(self.bump())
        } else {
            None
        };
        let (name, _) = self.name()?;

        let action = match kind {
            ActionKind::SendData | ActionKind::VerifyData if sub.is_some() => {
                let s = sub.unwrap();
                return Err(Diagnostic::error("P005", format!("{kind} takes no sub-kind")).at(s.span));
            }
            ActionKind::SendData => {
                self.keyword("via")?;
                let (port, _) = self.name()?;
                Action::SendData { port }
            }
            ActionKind::VerifyData => {
                self.keyword("on")?;
                self.keyword("source")?;
                let (source, _) = self.name()?;
                let rules = self.column_rules(node, &name)?;
                self.eat_punct(";");
                return Ok((
                    BehaviorElement::action(name, Action::VerifyData(QualitySpec { source, rules })),
                    start,
                ));
            }
            _ => match Action::simple(kind, sub.as_ref().map(|t| t.text.as_str())) {
                Some(a) => a,
                None => {
                    let span = sub.as_ref().map_or(kind_span, |t| t.span);
                    let allowed = kind.sub_kinds();
                    let msg = if allowed.is_empty() {
                        format!("{kind} takes no sub-kind")
                    } else {
                        format!(
                            "unknown {kind} sub-kind `{}`; expected one of {}",
                            sub.as_ref().map_or("", |t| t.text.as_str()),
                            allowed.join(", ")
                        )
                    };
                    return Err(Diagnostic::error("P005", msg).at(span));
                }
            },
        };
        self.punct(";")?;
        Ok((BehaviorElement::action(name, action), start))
    }

    fn event(&mut self) -> PResult<(BehaviorElement, Span)> {
        let start = self.keyword("event")?.span;
        self.word("receive")?;
        let (name, _) = self.name()?;
        self.keyword("via")?;
        let (port, _) = self.name()?;
        self.punct(";")?;
        Ok((BehaviorElement::event(name, Event::ReceiveData { port }), start))
    }

    fn column_rules(&mut self, node: &str, element: &str) -> PResult<Vec<QualityRule>> {
        self.punct("{")?;
        let mut rules = Vec::new();
        loop {
            if self.eat_punct("}") {
                return Ok(rules);
            }
            self.keyword("column")?;
            let (column, _) = self.name()?;
            self.punct("{")?;
            while !self.eat_punct("}") {
                let t = self.peek().clone();
                let (dimension, _) = self.vocab("quality dimension", Dimension::from_keyword, Dimension::expected())?;
                let expectation = if self.at_name() && !self.peek_at(1).is_punct("=") {
                    expand_expectation(&self.bump().text)
                } else {
                    crate::mapper::default_expectation(dimension).to_string()
                };
                let mut params: Vec<(String, ParamValue)> = Vec::new();
                while self.at_name() && self.peek_at(1).is_punct("=") {
                    let (key, kspan) = self.name()?;
                    self.punct("=")?;
                    let value = self.value(true)?;
                    if params.iter().any(|(k, _)| *k == key) {
                        self.diags
                            .push(Diagnostic::error("P010", format!("duplicate parameter {key}")).at(kspan));
                    }
                    params.push((key, value));
                }
                self.punct(";")?;
                self.map.insert(
                    ModelPath::Rule {
                        node: node.to_string(),
                        element: element.to_string(),
                        index: rules.len(),
                    },
                    t.span,
                );
                rules.push(QualityRule {
                    column: column.clone(),
                    dimension,
                    expectation,
                    params,
                });
            }
        }
    }

    fn value(&mut self, allow_list: bool) -> PResult<ParamValue> {
        let t = self.peek().clone();
        let out_of_range = || Diagnostic::error("P006", format!("numeric literal {} out of range", t.text)).at(t.span);
        match t.kind {
            TokenKind::Integer => {
                self.bump();
                t.text.parse().map(ParamValue::Int).map_err(|_| out_of_range())
            }
            TokenKind::Number => {
                self.bump();
                match t.text.parse::<f64>() {
                    Ok(n) if n.is_finite() => Ok(ParamValue::Num(n)),
                    _ => Err(out_of_range()),
                }
            }
            TokenKind::String => {
                self.bump();
                Ok(ParamValue::Str(t.string_value()))
            }
            TokenKind::Ident if t.text == "true" || t.text == "false" => {
                self.bump();
                Ok(ParamValue::Bool(t.text == "true"))
            }
            TokenKind::Punct if t.text == "[" && allow_list => {
                self.bump();
                let mut items = Vec::new();
                if !self.eat_punct("]") {
                    loop {
                        items.push(self.value(false)?);
                        if self.eat_punct("]") {
                            break;
                        }
                        self.punct(",")?;
                    }
                }
                Ok(ParamValue::List(items))
            }
            _ => Err(self.unexpected(if allow_list { "a value" } else { "a scalar value" })),
        }
    }

    fn port_ref(&mut self) -> PResult<PortRef> {
        let (node, _) = self.name()?;
        self.punct(".")?;
        let (port, _) = self.name()?;
        Ok(PortRef::new(node, port))
    }

    fn connection(&mut self) -> PResult<(Connection, Span)> {
        let span = self.keyword("connect")?.span;
        let from = self.port_ref()?;
        self.punct("->")?;
        let to = self.port_ref()?;
        let mut pattern = Pattern::SendReceive;
        let mut mode = Mode::Async;
        if self.peek().is_keyword("pattern") {
            self.bump();
            pattern = self.vocab("messaging pattern", Pattern::from_keyword, Pattern::expected())?.0;
        }
        if self.peek().is_keyword("mode") {
            self.bump();
            mode = self.vocab("messaging mode", Mode::from_keyword, Mode::expected())?.0;
        }
        self.punct(";")?;
        Ok((Connection::new(from, to, pattern, mode), span))
    }

    fn source(&mut self) -> PResult<(SourceBinding, Span)> {
        self.keyword("source")?;
        let (name, span) = self.name()?;
        self.punct("{")?;
        let mut kind: Option<SourceKind> = None;
        let mut connection: Vec<(String, String)> = Vec::new();
        let mut key_spans: Vec<Span> = Vec::new();
        let mut columns: Vec<ColumnMeta> = Vec::new();
        let mut names = Names::new("column");
        loop {
            let t = self.peek().clone();
            if t.is_punct("}") {
                self.bump();
                break;
            }
            if t.is_keyword("column") {
                self.bump();
                let (col, cspan) = self.name()?;
                self.punct(":")?;
                let (ty, _) = self.vocab("column type", ColumnType::from_keyword, ColumnType::expected())?;
                self.punct(";")?;
                if names.claim(&col, cspan, &mut self.diags) {
                    self.map.insert(
                        ModelPath::Column {
                            source: name.clone(),
                            column: col.clone(),
                        },
                        cspan,
                    );
                }
                columns.push(ColumnMeta::new(col, ty));
            } else if t.is(TokenKind::Ident, "kind") {
                self.bump();
                if kind.is_some() {
                    self.diags
                        .push(Diagnostic::error("P010", "repeated `kind` clause").at(t.span));
                }
                kind = Some(self.vocab("source kind", SourceKind::from_keyword, SourceKind::expected())?.0);
                self.punct(";")?;
            } else if t.kind == TokenKind::Ident && CONNECTION_KEYS.contains(&t.text.as_str()) {
                self.bump();
                if self.peek().kind != TokenKind::String {
                    return Err(self.unexpected("a string"));
                }
                let value = self.bump().string_value();
                self.punct(";")?;
                if connection.iter().any(|(k, _)| *k == t.text) {
                    self.diags
                        .push(Diagnostic::error("P010", format!("repeated `{}` clause", t.text)).at(t.span));
                }
                connection.push((t.text.clone(), value));
                key_spans.push(t.span);
            } else {
                return Err(self.unexpected("`kind`, `host`, `database`, `table`, `path`, `column` or `}`"));
            }
        }

        let Some(kind) = kind else {
            return Err(Diagnostic::error("P012", format!("source {name} requires a kind")).at(span));
        };
        let required = kind.required_keys();
        for ((key, _), kspan) in connection.iter().zip(&key_spans) {
            if !required.contains(&key.as_str()) {
                self.diags.push(
                    Diagnostic::error("P012", format!("`{key}` does not apply to {kind} source {name}")).at(*kspan),
                );
            }
        }
        for key in required {
            if !connection.iter().any(|(k, _)| k == key) {
                self.diags
                    .push(Diagnostic::error("P012", format!("{kind} source {name} requires `{key}`")).at(span));
            }
        }
        Ok((
            SourceBinding {
                name,
                kind,
                connection,
                columns,
            },
            span,
        ))
    }
}
