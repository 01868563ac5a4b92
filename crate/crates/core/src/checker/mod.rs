//! Native evaluation of the core expectation subset against CSV and JSON
//! tables.
//!
//! Conventions:
//! - row-level expectations skip Null cells, except the null family which
//!   looks at every row; `element_count` counts the cells looked at
//! - zero evaluated cells is a pass
//! - `min`/`max` aggregates never report unexpected cells; with no non-Null
//!   value they fail with the note "no data"
//! - lengths and regexes apply to a cell's display text
//!
//! Error codes: `C001` missing column, `C002` unreadable table, `C003`
//! (warning) cells that did not parse as the declared type, `C010` bad
//! regex, `C011` parameters that do not fit the expectation or the column,
//! `C020` expectation outside the core subset.

mod load;

use std::cmp::Ordering;
use std::collections::HashMap;

use chrono::NaiveDate;
use rayon::prelude::*;
use regex::Regex;
use serde::Serialize;
use serde_json::Value;

use crate::diag::{sort_diagnostics, Diagnostic};
use crate::dsl::format_number;
use crate::mapper::{signatures, ExpectationCall, SuiteBundle};
use crate::model::ParamValue;

pub use load::{load_table, load_table_str, TableFormat};

pub const PARTIAL_LIST_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Null,
    Text(String),
    Int(i64),
    Num(f64),
    Bool(bool),
    Date(NaiveDate),
}

impl Cell {
    pub fn is_null(&self) -> bool {
        matches!(self, Cell::Null)
    }

    /// Text that lengths and regexes are measured on. Numbers keep a
    /// fractional part, booleans are lowercase, dates are ISO-8601.
    pub fn display(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(n) => format_number(*n),
            Cell::Bool(b) => b.to_string(),
            Cell::Date(d) => d.format("%Y-%m-%d").to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Cell::Null => Value::Null,
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => (*i).into(),
            Cell::Num(n) => serde_json::Number::from_f64(*n).map(Value::Number).unwrap_or(Value::Null),
            Cell::Bool(b) => (*b).into(),
            Cell::Date(_) => Value::String(self.display()),
        }
    }

    fn tag(&self) -> u8 {
        match self {
            Cell::Null => 0,
            Cell::Text(_) => 1,
            Cell::Int(_) => 2,
            Cell::Num(_) => 3,
            Cell::Bool(_) => 4,
            Cell::Date(_) => 5,
        }
    }

    /// Orders cells of compatible types; `None` otherwise.
    pub fn compare(&self, other: &Cell) -> Option<Ordering> {
        match (self, other) {
            (Cell::Int(a), Cell::Int(b)) => Some(a.cmp(b)),
            (Cell::Int(_) | Cell::Num(_), Cell::Int(_) | Cell::Num(_)) => {
                self.as_f64()?.partial_cmp(&other.as_f64()?)
            }
            (Cell::Text(a), Cell::Text(b)) => Some(a.cmp(b)),
            (Cell::Bool(a), Cell::Bool(b)) => Some(a.cmp(b)),
            (Cell::Date(a), Cell::Date(b)) => Some(a.cmp(b)),
            _ => None,
        }
    }

    fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Num(n) => Some(*n),
            _ => None,
        }
    }

    /// Orders a cell against a parameter literal. Dates compare with
    /// `YYYY-MM-DD` strings.
    pub fn compare_param(&self, p: &ParamValue) -> Option<Ordering> {
        match (self, p) {
            (Cell::Int(a), ParamValue::Int(b)) => Some(a.cmp(b)),
            (Cell::Int(_) | Cell::Num(_), ParamValue::Int(_) | ParamValue::Num(_)) => {
                self.as_f64()?.partial_cmp(&p.as_f64()?)
            }
            (Cell::Text(a), ParamValue::Str(b)) => Some(a.as_str().cmp(b)),
            (Cell::Bool(a), ParamValue::Bool(b)) => Some(a.cmp(b)),
            (Cell::Date(a), ParamValue::Str(b)) => Some(a.cmp(&parse_date(b)?)),
            _ => None,
        }
    }

    pub fn equals_param(&self, p: &ParamValue) -> bool {
        self.compare_param(p) == Some(Ordering::Equal)
    }
}

fn parse_date(s: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub cells: Vec<Cell>,
    /// Cells that did not parse as the declared type and were read as Null.
    pub parse_warnings: usize,
}

impl Column {
    pub fn new(name: impl Into<String>, cells: Vec<Cell>) -> Self {
        Column {
            name: name.into(),
            cells,
            parse_warnings: 0,
        }
    }

    fn empty(name: &str) -> Self {
        Column::new(name, Vec::new())
    }

    fn push_coerced(&mut self, cell: Option<Cell>) {
        match cell {
            Some(c) => self.cells.push(c),
            None => {
                self.parse_warnings += 1;
                self.cells.push(Cell::Null);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub columns: Vec<Column>,
    pub row_count: usize,
}

impl Dataset {
    /// Fails when the columns differ in length.
    pub fn new(name: impl Into<String>, columns: Vec<Column>) -> Result<Self, String> {
        let row_count = columns.first().map_or(0, |c| c.cells.len());
        if let Some(c) = columns.iter().find(|c| c.cells.len() != row_count) {
            return Err(format!(
                "column {} has {} cells, expected {row_count}",
                c.name,
                c.cells.len()
            ));
        }
        Ok(Dataset {
            name: name.into(),
            columns,
            row_count,
        })
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// One `C003` warning per column with unparsable cells.
    pub fn warnings(&self) -> Vec<Diagnostic> {
        self.columns
            .iter()
            .filter(|c| c.parse_warnings > 0)
            .map(|c| {
                Diagnostic::warning(
                    "C003",
                    format!(
                        "{}: column {}: {} cell(s) could not be read as the declared type and were treated as null",
                        self.name, c.name, c.parse_warnings
                    ),
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationResult {
    pub expectation: String,
    pub column: String,
    pub success: bool,
    pub element_count: usize,
    pub unexpected_count: usize,
    pub partial_unexpected_list: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub success: bool,
    pub results: Vec<ExpectationResult>,
}

impl CheckReport {
    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| !r.success).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Whether the checker can evaluate `name`.
pub fn is_core(name: &str) -> bool {
    signatures().get(name).is_some_and(|s| s.core)
}

/// The core subset in signature-table order.
pub fn core_expectations() -> Vec<&'static str> {
    signatures()
        .signatures
        .iter()
        .filter(|s| s.core)
        .map(|s| s.name.as_str())
        .collect()
}

/// Evaluates every call of `bundle` against `data`; results follow call
/// order.
pub fn run_suite(bundle: &SuiteBundle, data: &Dataset) -> Result<CheckReport, Vec<Diagnostic>> {
    let outcomes: Vec<_> = bundle.calls.par_iter().map(|c| eval_expectation(c, data)).collect();
    let mut results = Vec::with_capacity(outcomes.len());
    let mut errors = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => results.push(r),
            Err(d) => errors.push(d),
        }
    }
    if !errors.is_empty() {
        sort_diagnostics(&mut errors);
        return Err(errors);
    }
    Ok(CheckReport {
        suite: bundle.source.name.clone(),
        success: results.iter().all(|r| r.success),
        results,
    })
}

struct Eval<'a> {
    call: &'a ExpectationCall,
}

impl Eval<'_> {
    fn bad_param(&self, detail: impl std::fmt::Display) -> Diagnostic {
        Diagnostic::error(
            "C011",
            format!("{} on {}: {detail}", self.call.name, self.call.column),
        )
    }

    fn required(&self, key: &str) -> Result<&ParamValue, Diagnostic> {
        self.call
            .kwarg(key)
            .ok_or_else(|| self.bad_param(format!("missing parameter {key}")))
    }

    fn string(&self, key: &str) -> Result<&str, Diagnostic> {
        self.required(key)?
            .as_str()
            .ok_or_else(|| self.bad_param(format!("{key} must be a string")))
    }

    fn list(&self, key: &str) -> Result<&[ParamValue], Diagnostic> {
        match self.required(key)? {
            ParamValue::List(items) => Ok(items),
            _ => Err(self.bad_param(format!("{key} must be a list"))),
        }
    }

    fn string_list(&self, key: &str) -> Result<Vec<&str>, Diagnostic> {
        self.list(key)?
            .iter()
            .map(|v| v.as_str().ok_or_else(|| self.bad_param(format!("{key} must hold strings"))))
            .collect()
    }

    fn flag(&self, key: &str) -> Result<bool, Diagnostic> {
        match self.call.kwarg(key) {
            None => Ok(false),
            Some(ParamValue::Bool(b)) => Ok(*b),
            Some(_) => Err(self.bad_param(format!("{key} must be true or false"))),
        }
    }

    fn bounds(&self) -> Result<(Option<&ParamValue>, Option<&ParamValue>), Diagnostic> {
        let (lo, hi) = (self.call.kwarg("min_value"), self.call.kwarg("max_value"));
        if lo.is_none() && hi.is_none() {
            return Err(self.bad_param("needs min_value or max_value"));
        }
        Ok((lo, hi))
    }

    /// `Some(true)` inside the inclusive range, `None` when a bound cannot be
    /// compared with the cell.
    fn within(&self, cell: &Cell, lo: Option<&ParamValue>, hi: Option<&ParamValue>) -> Result<bool, Diagnostic> {
        let mut ok = true;
        for (bound, reject) in [(lo, Ordering::Less), (hi, Ordering::Greater)] {
            if let Some(b) = bound {
                let ord = cell.compare_param(b).ok_or_else(|| {
                    self.bad_param(format!(
                        "bound {} cannot be compared with value {}",
                        crate::dsl::format_value(b),
                        cell.display()
                    ))
                })?;
                ok &= ord != reject;
            }
        }
        Ok(ok)
    }

    fn length_bound(&self, key: &str) -> Result<Option<usize>, Diagnostic> {
        match self.call.kwarg(key) {
            None => Ok(None),
            Some(ParamValue::Int(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(_) => Err(self.bad_param(format!("{key} must be a non-negative integer"))),
        }
    }
}

fn type_matches(cell: &Cell, name: &str) -> Option<bool> {
    Some(match name.to_ascii_lowercase().as_str() {
        "str" | "string" | "text" => matches!(cell, Cell::Text(_)),
        "int" | "integer" | "int64" => matches!(cell, Cell::Int(_)),
        "float" | "number" | "float64" => matches!(cell, Cell::Int(_) | Cell::Num(_)),
        "bool" | "boolean" => matches!(cell, Cell::Bool(_)),
        "date" | "datetime" => matches!(cell, Cell::Date(_)),
        _ => return None,
    })
}

fn compile(e: &Eval, pattern: &str) -> Result<Regex, Diagnostic> {
    Regex::new(pattern).map_err(|err| {
        Diagnostic::error(
            "C010",
            format!("{} on {}: invalid regex {pattern:?}: {err}", e.call.name, e.call.column),
        )
    })
}

fn short(name: &str) -> &str {
    name.strip_prefix("expect_column_")
        .map(|s| s.strip_prefix("values_to_").unwrap_or(s))
        .unwrap_or(name)
}

/// Evaluates one call. The call's column must exist in `data`.
pub fn eval_expectation(call: &ExpectationCall, data: &Dataset) -> Result<ExpectationResult, Diagnostic> {
    if !is_core(&call.name) {
        return Err(Diagnostic::error(
            "C020",
            format!("{} is a generate-only expectation", call.name),
        ));
    }
    let column = data.column(&call.column).ok_or_else(|| {
        Diagnostic::error("C001", format!("{}: no column {}", data.name, call.column))
    })?;
    let e = Eval { call };
    let cells = &column.cells;
    let non_null = || cells.iter().filter(|c| !c.is_null());

    // Row-level expectations yield (evaluated cells, unexpected cells).
    let row_level = |evaluated: usize, unexpected: Vec<&Cell>| ExpectationResult {
        expectation: call.name.clone(),
        column: call.column.clone(),
        success: unexpected.is_empty(),
        element_count: evaluated,
        unexpected_count: unexpected.len(),
        partial_unexpected_list: unexpected.iter().take(PARTIAL_LIST_LIMIT).map(|c| c.to_json()).collect(),
        note: None,
    };
    let filter = |pred: &dyn Fn(&Cell) -> Result<bool, Diagnostic>| -> Result<ExpectationResult, Diagnostic> {
        let mut evaluated = 0;
        let mut unexpected = Vec::new();
        for c in non_null() {
            evaluated += 1;
            if !pred(c)? {
                unexpected.push(c);
            }
        }
        Ok(row_level(evaluated, unexpected))
    };

    match short(&call.name) {
        "be_unique" => {
            let mut counts: HashMap<(u8, String), usize> = HashMap::new();
            for c in non_null() {
                *counts.entry((c.tag(), c.display())).or_default() += 1;
            }
            filter(&|c| Ok(counts[&(c.tag(), c.display())] == 1))
        }
        "not_be_null" => Ok(row_level(cells.len(), cells.iter().filter(|c| c.is_null()).collect())),
        "be_null" => Ok(row_level(cells.len(), non_null().collect())),
        "be_of_type" => {
            let name = e.string("type_")?;
            type_matches(&Cell::Null, name).ok_or_else(|| e.bad_param(format!("unknown type {name:?}")))?;
            filter(&|c| Ok(type_matches(c, name) == Some(true)))
        }
        "be_in_type_list" => {
            let names = e.string_list("type_list")?;
            for n in &names {
                type_matches(&Cell::Null, n).ok_or_else(|| e.bad_param(format!("unknown type {n:?}")))?;
            }
            filter(&|c| Ok(names.iter().any(|n| type_matches(c, n) == Some(true))))
        }
        "be_between" => {
            let (lo, hi) = e.bounds()?;
            filter(&|c| e.within(c, lo, hi))
        }
        "be_in_set" => {
            let set = e.list("value_set")?;
            filter(&|c| Ok(set.iter().any(|p| c.equals_param(p))))
        }
        "not_be_in_set" => {
            let set = e.list("value_set")?;
            filter(&|c| Ok(!set.iter().any(|p| c.equals_param(p))))
        }
        "value_lengths_to_be_between" => {
            let (lo, hi) = (e.length_bound("min_value")?, e.length_bound("max_value")?);
            if lo.is_none() && hi.is_none() {
                return Err(e.bad_param("needs min_value or max_value"));
            }
            filter(&|c| {
                let n = c.display().chars().count();
                Ok(lo.is_none_or(|lo| n >= lo) && hi.is_none_or(|hi| n <= hi))
            })
        }
        "value_lengths_to_equal" => {
            let want = e.length_bound("value")?.ok_or_else(|| e.bad_param("missing parameter value"))?;
            filter(&|c| Ok(c.display().chars().count() == want))
        }
        "match_regex" => {
            let re = compile(&e, e.string("regex")?)?;
            filter(&|c| Ok(re.is_match(&c.display())))
        }
        "match_regex_list" => {
            let res = e
                .string_list("regex_list")?
                .into_iter()
                .map(|p| compile(&e, p))
                .collect::<Result<Vec<_>, _>>()?;
            filter(&|c| {
                let text = c.display();
                Ok(res.iter().any(|re| re.is_match(&text)))
            })
        }
        "be_increasing" | "be_decreasing" => {
            let strictly = e.flag("strictly")?;
            let breaks = if short(&call.name) == "be_increasing" {
                Ordering::Greater
            } else {
                Ordering::Less
            };
            let mut prev: Option<&Cell> = None;
            let mut evaluated = 0;
            let mut unexpected = Vec::new();
            for c in non_null() {
                evaluated += 1;
                if let Some(p) = prev {
                    let ok = match p.compare(c) {
                        Some(Ordering::Equal) => !strictly,
                        Some(o) => o != breaks,
                        None => false,
                    };
                    if !ok {
                        unexpected.push(c);
                    }
                }
                prev = Some(c);
            }
            Ok(row_level(evaluated, unexpected))
        }
        agg @ ("min_to_be_between" | "max_to_be_between") => {
            let (lo, hi) = e.bounds()?;
            let want = if agg == "min_to_be_between" {
                Ordering::Less
            } else {
                Ordering::Greater
            };
            let mut observed: Option<&Cell> = None;
            let mut count = 0;
            for c in non_null() {
                count += 1;
                observed = match observed {
                    None => Some(c),
                    Some(o) => match c.compare(o) {
                        Some(ord) if ord == want => Some(c),
                        Some(_) => Some(o),
                        None => return Err(e.bad_param("column mixes incomparable values")),
                    },
                };
            }
            let (success, note) = match observed {
                None => (false, "no data".to_string()),
                Some(o) => (e.within(o, lo, hi)?, format!("observed value {}", o.display())),
            };
            Ok(ExpectationResult {
                expectation: call.name.clone(),
                column: call.column.clone(),
                success,
                element_count: count,
                unexpected_count: 0,
                partial_unexpected_list: Vec::new(),
                note: Some(note),
            })
        }
        other => unreachable!("core expectation {other} has no evaluator"),
    }
}
