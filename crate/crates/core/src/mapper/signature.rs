//! Parameter signatures for every mapped expectation, loaded from the
//! key/value table in `data/signatures.txt`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::model::{Dimension, ParamValue};

const BUILTIN: &str = include_str!("../../data/signatures.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamType {
    Int,
    Number,
    String,
    Bool,
    Bound,
    List,
    StringList,
    Json,
}

impl ParamType {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "int" => ParamType::Int,
            "number" => ParamType::Number,
            "string" => ParamType::String,
            "bool" => ParamType::Bool,
            "bound" => ParamType::Bound,
            "list" => ParamType::List,
            "string_list" => ParamType::StringList,
            "json" => ParamType::Json,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ParamType::Int => "int",
            ParamType::Number => "number",
            ParamType::String => "string",
            ParamType::Bool => "bool",
            ParamType::Bound => "bound",
            ParamType::List => "list",
            ParamType::StringList => "string_list",
            ParamType::Json => "json",
        }
    }

    pub fn accepts(self, value: &ParamValue) -> bool {
        use ParamValue as V;
        let scalar = |v: &ParamValue| !matches!(v, V::List(_));
        match self {
            ParamType::Int => matches!(value, V::Int(_)),
            ParamType::Number => matches!(value, V::Int(_) | V::Num(_)),
            ParamType::String => matches!(value, V::Str(_)),
            ParamType::Bool => matches!(value, V::Bool(_)),
            ParamType::Bound => matches!(value, V::Int(_) | V::Num(_) | V::Str(_)),
            ParamType::List => matches!(value, V::List(items) if items.iter().all(scalar)),
            ParamType::StringList => {
                matches!(value, V::List(items) if items.iter().all(|v| matches!(v, V::Str(_))))
            }
            ParamType::Json => {
                matches!(value, V::Str(s) if serde_json::from_str::<serde_json::Value>(s).is_ok())
            }
        }
    }
}

impl fmt::Display for ParamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSpec {
    pub keyword: String,
    pub ty: ParamType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectationSignature {
    pub name: String,
    pub dimensions: Vec<Dimension>,
    pub required: Vec<ParamSpec>,
    pub optional: Vec<ParamSpec>,
    pub at_least_one: Vec<String>,
    /// Evaluable by the native checker.
    pub core: bool,
}

impl ExpectationSignature {
    /// Required then optional parameters; the emission order of kwargs.
    pub fn params(&self) -> impl Iterator<Item = &ParamSpec> {
        self.required.iter().chain(&self.optional)
    }

    pub fn param(&self, keyword: &str) -> Option<&ParamSpec> {
        self.params().find(|p| p.keyword == keyword)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SignatureTable {
    pub aliases: Vec<(String, String)>,
    pub signatures: Vec<ExpectationSignature>,
    by_name: HashMap<String, usize>,
}

impl SignatureTable {
    pub fn get(&self, name: &str) -> Option<&ExpectationSignature> {
        self.by_name.get(name).map(|&i| &self.signatures[i])
    }

    /// Canonical keyword for `keyword` under `sig`: the keyword itself if
    /// the signature declares it, else its alias target if that is declared.
    pub fn canonical_keyword<'a>(&'a self, sig: &ExpectationSignature, keyword: &'a str) -> Option<&'a str> {
        if sig.param(keyword).is_some() {
            return Some(keyword);
        }
        self.aliases
            .iter()
            .find(|(alias, target)| alias == keyword && sig.param(target).is_some())
            .map(|(_, target)| target.as_str())
    }
}

pub fn signatures() -> &'static SignatureTable {
    static TABLE: OnceLock<SignatureTable> = OnceLock::new();
    TABLE.get_or_init(|| parse_signature_table(BUILTIN).expect("builtin signature table is well-formed"))
}

pub fn parse_signature_table(text: &str) -> Result<SignatureTable, String> {
    let mut table = SignatureTable::default();
    let mut section: Option<String> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim().to_string();
            if name != "aliases" {
                if table.by_name.contains_key(&name) {
                    return Err(format!("line {lineno}: duplicate block [{name}]"));
                }
                table.by_name.insert(name.clone(), table.signatures.len());
                table.signatures.push(ExpectationSignature {
                    name: name.clone(),
                    dimensions: Vec::new(),
                    required: Vec::new(),
                    optional: Vec::new(),
                    at_least_one: Vec::new(),
                    core: false,
                });
            }
            section = Some(name);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| format!("line {lineno}: expected `key = value`"))?;
        let Some(current) = section.as_deref() else {
            return Err(format!("line {lineno}: entry outside of a block"));
        };
        if current == "aliases" {
            table.aliases.push((key.to_string(), value.to_string()));
            continue;
        }
        let sig = table.signatures.last_mut().expect("block opened");
        let words = value.split_whitespace();
        match key {
            "dimensions" => {
                for w in words {
                    let d = Dimension::from_keyword(w)
                        .ok_or_else(|| format!("line {lineno}: unknown dimension `{w}`"))?;
                    sig.dimensions.push(d);
                }
            }
            "required" | "optional" => {
                for w in words {
                    let (kw, ty) = w
                        .split_once(':')
                        .ok_or_else(|| format!("line {lineno}: expected `keyword:type`, found `{w}`"))?;
                    let ty = ParamType::parse(ty)
                        .ok_or_else(|| format!("line {lineno}: unknown parameter type `{ty}`"))?;
                    let spec = ParamSpec {
                        keyword: kw.to_string(),
                        ty,
                    };
                    if key == "required" {
                        sig.required.push(spec);
                    } else {
                        sig.optional.push(spec);
                    }
                }
            }
            "at_least_one" => sig.at_least_one = words.map(str::to_string).collect(),
            "core" => {
                sig.core = match value {
                    "yes" => true,
                    "no" => false,
                    other => return Err(format!("line {lineno}: core must be yes or no, found `{other}`")),
                }
            }
            other => return Err(format!("line {lineno}: unknown key `{other}`")),
        }
    }

    for sig in &table.signatures {
        if sig.dimensions.is_empty() {
            return Err(format!("[{}] declares no dimensions", sig.name));
        }
        if let Some(kw) = sig.at_least_one.iter().find(|k| sig.param(k).is_none()) {
            return Err(format!("[{}] at_least_one names undeclared `{kw}`", sig.name));
        }
    }
    Ok(table)
}
