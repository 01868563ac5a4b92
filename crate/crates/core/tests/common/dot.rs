//! A small recursive-descent checker for the Graphviz DOT language, used to
//! confirm generated diagrams are well formed without shelling out to `dot`.

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Quoted(String),
    Sym(&'static str),
}

const KEYWORDS: &[&str] = &["strict", "graph", "digraph", "node", "edge", "subgraph"];

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') => {
                        let next = *chars.get(i + 1).ok_or("dangling escape")?;
                        s.push('\\');
                        s.push(next);
                        i += 2;
                    }
                    Some('\n') | Some('\r') => return Err("raw newline inside string".into()),
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(Tok::Quoted(s));
        } else if c == '-' && matches!(chars.get(i + 1), Some('>') | Some('-')) {
            out.push(Tok::Sym(if chars[i + 1] == '>' { "->" } else { "--" }));
            i += 2;
        } else if "{}[];,=:".contains(c) {
            let sym = match c {
                '{' => "{",
                '}' => "}",
                '[' => "[",
                ']' => "]",
                ';' => ";",
                ',' => ",",
                '=' => "=",
                _ => ":",
            };
            out.push(Tok::Sym(sym));
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Id(chars[start..i].iter().collect()));
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                return Err(format!("identifier cannot start with a digit at {start}"));
            }
            out.push(Tok::Id(chars[start..i].iter().collect()));
        } else {
            return Err(format!("unexpected character {c:?} at {i}"));
        }
    }
    Ok(out)
}

/// What a well-formed graph contains.
#[derive(Debug, Default)]
pub struct DotSummary {
    pub name: String,
    pub directed: bool,
    pub nodes: BTreeSet<String>,
    pub edges: Vec<(String, String)>,
    pub clusters: Vec<String>,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    summary: DotSummary,
}

fn is_keyword(s: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(s))
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Id(x)) if x.eq_ignore_ascii_case(kw))
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.at_sym(s);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), String> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(format!("expected `{s}`, found {:?}", self.peek()))
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.peek().cloned() {
            Some(Tok::Id(s)) if !is_keyword(&s) => {
                self.pos += 1;
                Ok(s)
            }
            Some(Tok::Quoted(s)) => {
                self.pos += 1;
                Ok(s)
            }
            other => Err(format!("expected an ID, found {other:?}")),
        }
    }

    fn at_id(&self) -> bool {
        match self.peek() {
            Some(Tok::Id(s)) => !is_keyword(s),
            Some(Tok::Quoted(_)) => true,
            _ => false,
        }
    }

    fn graph(&mut self) -> Result<(), String> {
        if self.at_kw("strict") {
            self.pos += 1;
        }
        if self.at_kw("digraph") {
            self.summary.directed = true;
        } else if !self.at_kw("graph") {
            return Err("expected graph or digraph".into());
        }
        self.pos += 1;
        if self.at_id() {
            self.summary.name = self.id()?;
        }
        self.expect_sym("{")?;
        self.stmt_list()?;
        self.expect_sym("}")?;
        if self.pos != self.toks.len() {
            return Err(format!("trailing input {:?}", self.peek()));
        }
        Ok(())
    }

    fn stmt_list(&mut self) -> Result<(), String> {
        while !self.at_sym("}") && self.peek().is_some() {
            self.stmt()?;
            self.eat_sym(";");
        }
        Ok(())
    }

    fn attr_list(&mut self) -> Result<(), String> {
        while self.eat_sym("[") {
            while !self.eat_sym("]") {
                self.id()?;
                self.expect_sym("=")?;
                self.id()?;
                if !self.eat_sym(";") {
                    self.eat_sym(",");
                }
            }
        }
        Ok(())
    }

    fn subgraph(&mut self) -> Result<Vec<String>, String> {
        let before = self.summary.nodes.clone();
        if self.at_kw("subgraph") {
            self.pos += 1;
            if self.at_id() {
                let name = self.id()?;
                if name.starts_with("cluster") {
                    self.summary.clusters.push(name);
                }
            }
        }
        self.expect_sym("{")?;
        self.stmt_list()?;
        self.expect_sym("}")?;
        Ok(self.summary.nodes.difference(&before).cloned().collect())
    }

    /// A node id or subgraph as an edge operand; returns the nodes it names.
    fn operand(&mut self) -> Result<Vec<String>, String> {
        if self.at_kw("subgraph") || self.at_sym("{") {
            return self.subgraph();
        }
        let id = self.id()?;
        if self.eat_sym(":") {
            self.id()?;
            if self.eat_sym(":") {
                self.id()?;
            }
        }
        self.summary.nodes.insert(id.clone());
        Ok(vec![id])
    }

    fn stmt(&mut self) -> Result<(), String> {
        if self.at_kw("graph") || self.at_kw("node") || self.at_kw("edge") {
            self.pos += 1;
            if !self.at_sym("[") {
                return Err("attribute statement needs a list".into());
            }
            return self.attr_list();
        }
        // ID '=' ID
        if self.at_id() && matches!(self.toks.get(self.pos + 1), Some(Tok::Sym("="))) {
            self.id()?;
            self.pos += 1;
            self.id()?;
            return Ok(());
        }
        let mut left = self.operand()?;
        let op = if self.summary.directed { "->" } else { "--" };
        let wrong = if self.summary.directed { "--" } else { "->" };
        if self.at_sym(wrong) {
            return Err(format!("edge operator `{wrong}` in the wrong kind of graph"));
        }
        while self.eat_sym(op) {
            let right = self.operand()?;
            for a in &left {
                for b in &right {
                    self.summary.edges.push((a.clone(), b.clone()));
                }
            }
            left = right;
        }
        self.attr_list()
    }
}

/// Parses `src` as a DOT graph.
pub fn check_dot(src: &str) -> Result<DotSummary, String> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        summary: DotSummary::default(),
    };
    p.graph()?;
    Ok(p.summary)
}
