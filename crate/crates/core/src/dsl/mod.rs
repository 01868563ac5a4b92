//! Concrete syntax for architecture models: the `.daml` text format and an
//! XMI interchange subset.

pub mod lexer;
mod parser;
mod printer;
pub mod xmi;

use std::collections::HashMap;

use crate::diag::Span;

pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_model, parse_model_with_spans};
pub use printer::{format_number, pretty_print};
pub(crate) use printer::format_value;
pub use xmi::{export_xmi, import_xmi};

/// Addresses a declaration inside a model, for attaching source positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ModelPath {
    Model,
    Node(String),
    Port { node: String, port: String },
    Behavior(String),
    Element { node: String, element: String },
    Link { node: String, index: usize },
    Rule { node: String, element: String, index: usize },
    Connection(String),
    Source(String),
    Column { source: String, column: String },
}

/// Positions of declarations in the text a model was parsed from.
#[derive(Debug, Clone, Default)]
pub struct SourceMap {
    spans: HashMap<ModelPath, Span>,
}

impl SourceMap {
    pub fn insert(&mut self, path: ModelPath, span: Span) {
        self.spans.entry(path).or_insert(span);
    }

    pub fn get(&self, path: &ModelPath) -> Option<Span> {
        self.spans.get(path).copied()
    }

    pub fn node(&self, node: &str) -> Option<Span> {
        self.get(&ModelPath::Node(node.to_string()))
    }

    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn spans(&self) -> impl Iterator<Item = (&ModelPath, &Span)> {
        self.spans.iter()
    }
}
