//! Check-script generation for the Great Expectations framework.
//!
//! One script per data source, rendered from the templates in `templates/`.
//! A template directory may override any subset of them.

mod template;

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diag::{has_errors, Diagnostic};
use crate::dsl::format_number;
use crate::mapper::{collect_suites, ExpectationCall, SuiteBundle};
use crate::model::{ArchitectureModel, ParamValue, SourceKind};
use crate::validate::validate;

pub use template::{render, RenderError, Template};

pub const MANIFEST_NAME: &str = "manifest.json";

const BUILTIN_TEMPLATES: [(&str, &str); 5] = [
    ("suite.py.tmpl", include_str!("../../templates/suite.py.tmpl")),
    ("batch_mysql.py.tmpl", include_str!("../../templates/batch_mysql.py.tmpl")),
    ("batch_csvfile.py.tmpl", include_str!("../../templates/batch_csvfile.py.tmpl")),
    ("batch_jsonfile.py.tmpl", include_str!("../../templates/batch_jsonfile.py.tmpl")),
    ("expectation.py.tmpl", include_str!("../../templates/expectation.py.tmpl")),
];

#[derive(Debug, Error)]
pub enum CodegenError {
    #[error("model has validation errors")]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CodegenError + '_ {
    move |source| CodegenError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// The five templates a script is assembled from.
#[derive(Debug, Clone)]
pub struct TemplateSet {
    templates: Vec<Template>,
}

impl Default for TemplateSet {
    fn default() -> Self {
        Self::builtin()
    }
}

impl TemplateSet {
    pub fn builtin() -> Self {
        TemplateSet {
            templates: BUILTIN_TEMPLATES
                .iter()
                .map(|(name, body)| Template::new(*name, *body))
                .collect(),
        }
    }

    /// Builtins, with any same-named file in `dir` taking precedence.
    pub fn load(dir: &Path) -> Result<Self, CodegenError> {
        let mut set = Self::builtin();
        for t in &mut set.templates {
            let path = dir.join(&t.name);
            match fs::read_to_string(&path) {
                Ok(body) => t.body = body.replace("\r\n", "\n"),
                Err(e) if e.kind() == io::ErrorKind::NotFound => {}
                Err(e) => return Err(io_err(&path)(e)),
            }
        }
        Ok(set)
    }

    pub fn names() -> impl Iterator<Item = &'static str> {
        BUILTIN_TEMPLATES.iter().map(|(n, _)| *n)
    }

    pub fn get(&self, name: &str) -> &Template {
        self.templates
            .iter()
            .find(|t| t.name == name)
            .expect("template set holds every builtin name")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedFile {
    pub path: String,
    pub contents: String,
    pub checksum: String,
}

impl GeneratedFile {
    pub fn new(path: impl Into<String>, contents: String) -> Self {
        let mut contents = contents.replace("\r\n", "\n");
        let trimmed = contents.trim_end_matches('\n').len();
        contents.truncate(trimmed);
        contents.push('\n');
        let checksum = sha256_hex(contents.as_bytes());
        GeneratedFile {
            path: path.into(),
            contents,
            checksum,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Result of [`generate_all`]: the manifest plus the files actually written.
#[derive(Debug, Clone, Default)]
pub struct GenerateReport {
    pub manifest: Manifest,
    pub written: Vec<PathBuf>,
}

/// Contents of a double-quoted Python string literal, without the quotes.
fn py_escape(s: &str) -> String {
    let quoted = serde_json::to_string(s).expect("strings serialize");
    quoted[1..quoted.len() - 1].to_string()
}

fn py_literal(v: &ParamValue) -> String {
    match v {
        ParamValue::Int(i) => i.to_string(),
        ParamValue::Num(n) if n.is_nan() => "float(\"nan\")".into(),
        ParamValue::Num(n) if n.is_infinite() => {
            if *n > 0.0 { "float(\"inf\")" } else { "float(\"-inf\")" }.into()
        }
        ParamValue::Num(n) => format_number(*n),
        ParamValue::Str(s) => format!("\"{}\"", py_escape(s)),
        ParamValue::Bool(true) => "True".into(),
        ParamValue::Bool(false) => "False".into(),
        ParamValue::List(items) => format!(
            "[{}]",
            items.iter().map(py_literal).collect::<Vec<_>>().join(", ")
        ),
    }
}

fn is_json_param(call: &ExpectationCall, key: &str) -> bool {
    crate::mapper::signatures()
        .get(&call.name)
        .and_then(|sig| sig.param(key))
        .is_some_and(|p| p.ty == crate::mapper::ParamType::Json)
}

/// `, key=value` for each kwarg, in the call's (signature) order.
fn kwargs_text(call: &ExpectationCall) -> String {
    let mut out = String::new();
    for (k, v) in &call.kwargs {
        let value = match v {
            ParamValue::Str(s) if is_json_param(call, k) => {
                format!("json.loads(\"{}\")", py_escape(s))
            }
            _ => py_literal(v),
        };
        out.push_str(&format!(", {k}={value}"));
    }
    out
}

pub fn script_name(source: &str) -> String {
    format!("check_{source}.py")
}

/// Renders the check script for one bundle.
pub fn generate_suite(bundle: &SuiteBundle, templates: &TemplateSet) -> Result<GeneratedFile, CodegenError> {
    generate_suite_for(bundle, "", templates)
}

fn generate_suite_for(
    bundle: &SuiteBundle,
    model_name: &str,
    templates: &TemplateSet,
) -> Result<GeneratedFile, CodegenError> {
    let source = &bundle.source;
    let mut bindings: BTreeMap<String, String> = BTreeMap::new();
    bindings.insert("source".into(), py_escape(&source.name));
    bindings.insert("model".into(), py_escape(model_name));
    for (k, v) in &source.connection {
        bindings.insert(k.clone(), py_escape(v));
    }
    let batch_name = match source.kind {
        SourceKind::Mysql => "batch_mysql.py.tmpl",
        SourceKind::CsvFile => "batch_csvfile.py.tmpl",
        SourceKind::JsonFile => "batch_jsonfile.py.tmpl",
    };
    let batch = render(templates.get(batch_name), &bindings)?;

    let line = templates.get("expectation.py.tmpl");
    let mut expectations = String::new();
    for call in &bundle.calls {
        let mut b = bindings.clone();
        b.insert("name".into(), call.name.clone());
        b.insert("column".into(), py_escape(&call.column));
        b.insert("kwargs".into(), kwargs_text(call));
        expectations.push_str(&render(line, &b)?);
    }
    if bundle.calls.iter().any(|c| c.kwargs.iter().any(|(k, _)| is_json_param(c, k))) {
        expectations.insert_str(0, "    import json\n");
    }

    bindings.insert("batch".into(), batch.trim_end_matches('\n').to_string());
    bindings.insert("expectations".into(), expectations.trim_end_matches('\n').to_string());
    let script = render(templates.get("suite.py.tmpl"), &bindings)?;
    Ok(GeneratedFile::new(script_name(&source.name), script))
}

/// Validates `model`, renders one script per source and writes the scripts
/// and `manifest.json` into `out_dir`. Files whose contents are unchanged
/// are left untouched.
pub fn generate_all(
    model: &ArchitectureModel,
    out_dir: &Path,
    templates: &TemplateSet,
) -> Result<GenerateReport, CodegenError> {
    let diags = validate(model);
    if has_errors(&diags) {
        return Err(CodegenError::Invalid(diags));
    }
    let bundles = collect_suites(model).map_err(CodegenError::Invalid)?;
    let files = bundles
        .par_iter()
        .map(|b| generate_suite_for(b, &model.name, templates))
        .collect::<Result<Vec<_>, _>>()?;

    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut report = GenerateReport::default();
    for f in &files {
        let path = out_dir.join(&f.path);
        if write_if_changed(&path, &f.contents)? {
            report.written.push(path);
        }
        report.manifest.files.push(ManifestEntry {
            path: f.path.clone(),
            sha256: f.checksum.clone(),
        });
    }
    let manifest_path = out_dir.join(MANIFEST_NAME);
    if write_if_changed(&manifest_path, &report.manifest.to_json())? {
        report.written.push(manifest_path);
    }
    Ok(report)
}

fn write_if_changed(path: &Path, contents: &str) -> Result<bool, CodegenError> {
    match fs::read(path) {
        Ok(existing) if existing == contents.as_bytes() => return Ok(false),
        Ok(_) => {}
        Err(e) if e.kind() == io::ErrorKind::NotFound => {}
        Err(e) => return Err(io_err(path)(e)),
    }
    fs::write(path, contents).map_err(io_err(path))?;
    Ok(true)
}
