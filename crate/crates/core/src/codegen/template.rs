use std::collections::BTreeMap;

use thiserror::Error;

/// A text body with `{name}` slots. `{{` and `}}` stand for literal braces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub name: String,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("template {template}: no binding for {}", .names.join(", "))]
    MissingBinding { template: String, names: Vec<String> },
    #[error("template {template}: {message} at byte {offset}")]
    Syntax {
        template: String,
        offset: usize,
        message: String,
    },
}

enum Piece<'a> {
    Text(&'a str),
    Slot(&'a str),
}

impl Template {
    pub fn new(name: impl Into<String>, body: impl Into<String>) -> Self {
        Template {
            name: name.into(),
            body: body.into(),
        }
    }

    fn syntax(&self, offset: usize, message: &str) -> RenderError {
        RenderError::Syntax {
            template: self.name.clone(),
            offset,
            message: message.to_string(),
        }
    }

    fn pieces(&self) -> Result<Vec<Piece<'_>>, RenderError> {
        let body = self.body.as_str();
        let bytes = body.as_bytes();
        let mut pieces = Vec::new();
        let mut start = 0;
        let mut i = 0;
        while i < bytes.len() {
            match bytes[i] {
                b'{' if bytes.get(i + 1) == Some(&b'{') => {
                    pieces.push(Piece::Text(&body[start..i + 1]));
                    i += 2;
                    start = i;
                }
                b'}' if bytes.get(i + 1) == Some(&b'}') => {
                    pieces.push(Piece::Text(&body[start..i + 1]));
                    i += 2;
                    start = i;
                }
                b'{' => {
                    let close = body[i + 1..]
                        .find('}')
                        .map(|n| i + 1 + n)
                        .ok_or_else(|| self.syntax(i, "unclosed placeholder"))?;
                    let name = &body[i + 1..close];
                    if !is_placeholder_name(name) {
                        return Err(self.syntax(i, &format!("invalid placeholder {{{name}}}")));
                    }
                    pieces.push(Piece::Text(&body[start..i]));
                    pieces.push(Piece::Slot(name));
                    i = close + 1;
                    start = i;
                }
                b'}' => return Err(self.syntax(i, "unmatched }")),
                _ => i += 1,
            }
        }
        pieces.push(Piece::Text(&body[start..]));
        Ok(pieces)
    }

    /// Distinct placeholder names in order of first use.
    pub fn placeholders(&self) -> Result<Vec<String>, RenderError> {
        let mut names: Vec<String> = Vec::new();
        for p in self.pieces()? {
            if let Piece::Slot(n) = p {
                if !names.iter().any(|m| m == n) {
                    names.push(n.to_string());
                }
            }
        }
        Ok(names)
    }
}

fn is_placeholder_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase() || c == '_')
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Substitutes every slot. Bindings that the template does not use are
/// ignored.
pub fn render(template: &Template, bindings: &BTreeMap<String, String>) -> Result<String, RenderError> {
    let pieces = template.pieces()?;
    let mut missing: Vec<String> = Vec::new();
    let mut out = String::with_capacity(template.body.len());
    for p in pieces {
        match p {
            Piece::Text(t) => out.push_str(t),
            Piece::Slot(n) => match bindings.get(n) {
                Some(v) => out.push_str(v),
                None => {
                    if !missing.iter().any(|m| m == n) {
                        missing.push(n.to_string());
                    }
                }
            },
        }
    }
    if missing.is_empty() {
        Ok(out)
    } else {
        Err(RenderError::MissingBinding {
            template: template.name.clone(),
            names: missing,
        })
    }
}
