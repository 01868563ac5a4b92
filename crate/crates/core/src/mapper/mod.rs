//! Maps declared quality rules onto named, parameterized expectations and
//! groups them per data source.

mod signature;
mod table;

use crate::diag::Diagnostic;
use crate::model::{Action, ArchitectureModel, Dimension, Level, ParamValue, QualityRule, SourceBinding};

pub use signature::{parse_signature_table, signatures, ExpectationSignature, ParamSpec, ParamType, SignatureTable};

const VALUES_PREFIX: &str = "expect_column_values_to_";
const COLUMN_PREFIX: &str = "expect_column_";

/// The dimension to expectation mapping, 72 pairs in table order.
pub fn mapper_table() -> &'static [(Dimension, &'static str)] {
    &table::MAPPER_TABLE
}

pub fn is_mapped(dimension: Dimension, expectation: &str) -> bool {
    mapper_table()
        .iter()
        .any(|&(d, e)| d == dimension && e == expectation)
}

pub fn is_known_expectation(name: &str) -> bool {
    mapper_table().iter().any(|&(_, e)| e == name)
}

/// First table row for the dimension; used when a rule omits the expectation.
pub fn default_expectation(dimension: Dimension) -> &'static str {
    mapper_table()
        .iter()
        .find(|&&(d, _)| d == dimension)
        .map(|&(_, e)| e)
        .expect("every dimension has at least one row")
}

/// Expands a DSL expectation spelling to the full identifier. Full names
/// pass through; `be_unique` becomes `expect_column_values_to_be_unique`
/// and `min_to_be_between` becomes `expect_column_min_to_be_between`.
pub fn expand_expectation(spelling: &str) -> String {
    if spelling.starts_with("expect_") {
        return spelling.to_string();
    }
    let values = format!("{VALUES_PREFIX}{spelling}");
    if is_known_expectation(&values) {
        return values;
    }
    let column = format!("{COLUMN_PREFIX}{spelling}");
    if is_known_expectation(&column) {
        return column;
    }
    values
}

/// Shortest spelling that `expand_expectation` maps back to `name`.
pub fn abbreviate_expectation(name: &str) -> &str {
    for prefix in [VALUES_PREFIX, COLUMN_PREFIX] {
        if let Some(short) = name.strip_prefix(prefix) {
            if !short.is_empty() && expand_expectation(short) == name {
                return short;
            }
        }
    }
    name
}

/// One expectation bound to a column, with keyword arguments in signature
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationCall {
    pub name: String,
    pub column: String,
    pub kwargs: Vec<(String, ParamValue)>,
}

impl ExpectationCall {
    pub fn new(name: impl Into<String>, column: impl Into<String>) -> Self {
        ExpectationCall {
            name: name.into(),
            column: column.into(),
            kwargs: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: ParamValue) -> Self {
        self.kwargs.push((key.to_string(), value));
        self
    }

    pub fn kwarg(&self, key: &str) -> Option<&ParamValue> {
        self.kwargs.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

/// Every resolved call for one data source.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteBundle {
    pub source: SourceBinding,
    pub calls: Vec<ExpectationCall>,
}

impl SuiteBundle {
    pub fn empty(source: SourceBinding) -> Self {
        SuiteBundle {
            source,
            calls: Vec::new(),
        }
    }
}

/// Checks a rule against the mapper table and its expectation's signature.
///
/// Error codes: `M001` dimension/expectation pair not in the table, `M002`
/// missing, unknown, duplicated or ill-typed parameter, `M003` column not
/// declared by the source.
pub fn resolve_rule(rule: &QualityRule, source: &SourceBinding) -> Result<ExpectationCall, Diagnostic> {
    if !is_mapped(rule.dimension, &rule.expectation) {
        return Err(Diagnostic::error(
            "M001",
            format!(
                "{} is not mapped to {}",
                rule.dimension.label(),
                rule.expectation
            ),
        ));
    }
    if source.column(&rule.column).is_none() {
        return Err(Diagnostic::error(
            "M003",
            format!("source {} has no column {}", source.name, rule.column),
        ));
    }

    let table = signatures();
    let sig = table
        .get(&rule.expectation)
        .expect("every mapped expectation has a signature");
    let m002 = |msg: String| Diagnostic::error("M002", format!("{}: {msg}", rule.expectation));

    let mut bound: Vec<(&str, &ParamValue)> = Vec::new();
    for (keyword, value) in &rule.params {
        let canonical = table
            .canonical_keyword(sig, keyword)
            .ok_or_else(|| m002(format!("unknown parameter `{keyword}`")))?;
        if bound.iter().any(|(k, _)| *k == canonical) {
            return Err(m002(format!("parameter `{canonical}` given more than once")));
        }
        let spec = sig.param(canonical).expect("canonical keyword is declared");
        if !spec.ty.accepts(value) {
            return Err(m002(format!("parameter `{canonical}` must be {}", spec.ty)));
        }
        bound.push((canonical, value));
    }
    if let Some(missing) = sig
        .required
        .iter()
        .find(|p| !bound.iter().any(|(k, _)| *k == p.keyword))
    {
        return Err(m002(format!("missing required parameter `{}`", missing.keyword)));
    }
    if !sig.at_least_one.is_empty()
        && !sig
            .at_least_one
            .iter()
            .any(|kw| bound.iter().any(|(k, _)| k == kw))
    {
        return Err(m002(format!(
            "at least one of {} is required",
            sig.at_least_one.join(", ")
        )));
    }

    let kwargs = sig
        .params()
        .filter_map(|p| {
            bound
                .iter()
                .find(|(k, _)| *k == p.keyword)
                .map(|(k, v)| (k.to_string(), (*v).clone()))
        })
        .collect();
    Ok(ExpectationCall {
        name: rule.expectation.clone(),
        column: rule.column.clone(),
        kwargs,
    })
}

/// One bundle per source referenced by a verify action, in order of first
/// reference; calls in node then rule declaration order. High-level models
/// yield no bundles since their behaviors are not acted on.
pub fn collect_suites(model: &ArchitectureModel) -> Result<Vec<SuiteBundle>, Vec<Diagnostic>> {
    let mut bundles: Vec<SuiteBundle> = Vec::new();
    let mut diags = Vec::new();
    if model.level == Level::Hla {
        return Ok(bundles);
    }

    for node in &model.nodes {
        let Some(behavior) = &node.behavior else { continue };
        for (action_name, action) in behavior.actions() {
            let Action::VerifyData(spec) = action else { continue };
            let Some(source) = model.source(&spec.source) else {
                diags.push(Diagnostic::error(
                    "M004",
                    format!(
                        "{}.{}: unknown source {}",
                        node.name, action_name, spec.source
                    ),
                ));
                continue;
            };
            let idx = match bundles.iter().position(|b| b.source.name == source.name) {
                Some(i) => i,
                None => {
                    bundles.push(SuiteBundle::empty(source.clone()));
                    bundles.len() - 1
                }
            };
            for (i, rule) in spec.rules.iter().enumerate() {
                match resolve_rule(rule, source) {
                    Ok(call) => bundles[idx].calls.push(call),
                    Err(mut d) => {
                        d.message = format!("{}.{} rule {}: {}", node.name, action_name, i + 1, d.message);
                        diags.push(d);
                    }
                }
            }
        }
    }
    if diags.is_empty() {
        Ok(bundles)
    } else {
        Err(diags)
    }
}
