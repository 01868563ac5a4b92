//! A deliberately naive restatement of the core expectation semantics, used
//! to cross-check the checker. Nothing here calls into the checker.

use std::cmp::Ordering;

use chrono::NaiveDate;
use rand::prelude::*;
use regex::Regex;

use daqforge::checker::Cell;
use daqforge::model::ParamValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub success: bool,
    pub element_count: usize,
    pub unexpected_count: usize,
}

fn kw<'a>(kwargs: &'a [(String, ParamValue)], key: &str) -> Option<&'a ParamValue> {
    kwargs.iter().find(|(k, _)| k == key).map(|(_, v)| v)
}

fn same_value(a: &Cell, b: &Cell) -> bool {
    match (a, b) {
        (Cell::Text(x), Cell::Text(y)) => x == y,
        (Cell::Int(x), Cell::Int(y)) => x == y,
        (Cell::Num(x), Cell::Num(y)) => x == y,
        (Cell::Bool(x), Cell::Bool(y)) => x == y,
        (Cell::Date(x), Cell::Date(y)) => x == y,
        _ => false,
    }
}

fn order(a: &Cell, b: &Cell) -> Option<Ordering> {
    match (a, b) {
        (Cell::Int(x), Cell::Int(y)) => Some(x.cmp(y)),
        (Cell::Int(x), Cell::Num(y)) => (*x as f64).partial_cmp(y),
        (Cell::Num(x), Cell::Int(y)) => x.partial_cmp(&(*y as f64)),
        (Cell::Num(x), Cell::Num(y)) => x.partial_cmp(y),
        (Cell::Text(x), Cell::Text(y)) => Some(x.cmp(y)),
        (Cell::Date(x), Cell::Date(y)) => Some(x.cmp(y)),
        (Cell::Bool(x), Cell::Bool(y)) => Some(x.cmp(y)),
        _ => None,
    }
}

/// A parameter literal as a cell, for comparisons.
fn as_cell(p: &ParamValue, like: &Cell) -> Cell {
    match (p, like) {
        (ParamValue::Str(s), Cell::Date(_)) => Cell::Date(NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()),
        (ParamValue::Str(s), _) => Cell::Text(s.clone()),
        (ParamValue::Int(i), _) => Cell::Int(*i),
        (ParamValue::Num(n), _) => Cell::Num(*n),
        (ParamValue::Bool(b), _) => Cell::Bool(*b),
        (ParamValue::List(_), _) => Cell::Null,
    }
}

fn in_range(c: &Cell, kwargs: &[(String, ParamValue)]) -> bool {
    let lo_ok = kw(kwargs, "min_value").is_none_or(|lo| order(c, &as_cell(lo, c)) != Some(Ordering::Less));
    let hi_ok = kw(kwargs, "max_value").is_none_or(|hi| order(c, &as_cell(hi, c)) != Some(Ordering::Greater));
    lo_ok && hi_ok
}

fn has_type(c: &Cell, t: &str) -> bool {
    match t {
        "str" | "string" | "text" => matches!(c, Cell::Text(_)),
        "int" | "integer" | "int64" => matches!(c, Cell::Int(_)),
        "float" | "number" | "float64" => matches!(c, Cell::Int(_) | Cell::Num(_)),
        "bool" | "boolean" => matches!(c, Cell::Bool(_)),
        "date" | "datetime" => matches!(c, Cell::Date(_)),
        _ => panic!("oracle: unknown type {t}"),
    }
}

fn strings(p: Option<&ParamValue>) -> Vec<String> {
    match p {
        Some(ParamValue::List(items)) => items
            .iter()
            .map(|v| match v {
                ParamValue::Str(s) => s.clone(),
                other => panic!("oracle: expected string, got {other:?}"),
            })
            .collect(),
        other => panic!("oracle: expected list, got {other:?}"),
    }
}

fn text(c: &Cell) -> &str {
    match c {
        Cell::Text(s) => s,
        other => panic!("oracle: text expectations run on text cells, got {other:?}"),
    }
}

pub fn oracle(name: &str, kwargs: &[(String, ParamValue)], cells: &[Cell]) -> Outcome {
    let present: Vec<&Cell> = cells.iter().filter(|c| !matches!(c, Cell::Null)).collect();
    let row_level = |evaluated: usize, unexpected: usize| Outcome {
        success: unexpected == 0,
        element_count: evaluated,
        unexpected_count: unexpected,
    };
    let count = |pred: &dyn Fn(&Cell) -> bool| present.iter().filter(|c| !pred(c)).count();
    let short = name.strip_prefix("expect_column_").unwrap();
    match short {
        "values_to_be_unique" => {
            let dup = |c: &Cell| present.iter().filter(|d| same_value(c, d)).count() > 1;
            row_level(present.len(), present.iter().filter(|c| dup(c)).count())
        }
        "values_to_not_be_null" => row_level(cells.len(), cells.len() - present.len()),
        "values_to_be_null" => row_level(cells.len(), present.len()),
        "values_to_be_of_type" => {
            let ParamValue::Str(t) = kw(kwargs, "type_").unwrap() else { panic!() };
            row_level(present.len(), count(&|c| has_type(c, t)))
        }
        "values_to_be_in_type_list" => {
            let ts = strings(kw(kwargs, "type_list"));
            row_level(present.len(), count(&|c| ts.iter().any(|t| has_type(c, t))))
        }
        "values_to_be_between" => row_level(present.len(), count(&|c| in_range(c, kwargs))),
        "values_to_be_in_set" | "values_to_not_be_in_set" => {
            let Some(ParamValue::List(set)) = kw(kwargs, "value_set") else { panic!() };
            let member = |c: &Cell| set.iter().any(|p| order(c, &as_cell(p, c)) == Some(Ordering::Equal));
            if short == "values_to_be_in_set" {
                row_level(present.len(), count(&member))
            } else {
                row_level(present.len(), count(&|c| !member(c)))
            }
        }
        "value_lengths_to_be_between" => {
            let bound = |k| match kw(kwargs, k) {
                Some(ParamValue::Int(i)) => Some(*i as usize),
                _ => None,
            };
            let (lo, hi) = (bound("min_value"), bound("max_value"));
            row_level(
                present.len(),
                count(&|c| {
                    let n = text(c).chars().count();
                    lo.is_none_or(|lo| n >= lo) && hi.is_none_or(|hi| n <= hi)
                }),
            )
        }
        "value_lengths_to_equal" => {
            let Some(ParamValue::Int(want)) = kw(kwargs, "value") else { panic!() };
            row_level(present.len(), count(&|c| text(c).chars().count() == *want as usize))
        }
        "values_to_match_regex" => {
            let Some(ParamValue::Str(p)) = kw(kwargs, "regex") else { panic!() };
            let re = Regex::new(p).unwrap();
            row_level(present.len(), count(&|c| re.is_match(text(c))))
        }
        "values_to_match_regex_list" => {
            let res: Vec<Regex> = strings(kw(kwargs, "regex_list")).iter().map(|p| Regex::new(p).unwrap()).collect();
            row_level(present.len(), count(&|c| res.iter().any(|re| re.is_match(text(c)))))
        }
        "values_to_be_increasing" | "values_to_be_decreasing" => {
            let strictly = matches!(kw(kwargs, "strictly"), Some(ParamValue::Bool(true)));
            let rising = short == "values_to_be_increasing";
            let bad = (1..present.len())
                .filter(|&i| {
                    let o = order(present[i - 1], present[i]).unwrap();
                    let o = if rising { o } else { o.reverse() };
                    o == Ordering::Greater || (strictly && o == Ordering::Equal)
                })
                .count();
            row_level(present.len(), bad)
        }
        "min_to_be_between" | "max_to_be_between" => {
            let mut sorted = present.clone();
            sorted.sort_by(|a, b| order(a, b).unwrap());
            let pick = if short == "min_to_be_between" { sorted.first() } else { sorted.last() };
            Outcome {
                success: pick.is_some_and(|c| in_range(c, kwargs)),
                element_count: present.len(),
                unexpected_count: 0,
            }
        }
        other => panic!("oracle: no semantics for {other}"),
    }
}

fn maybe_null<R: Rng>(rng: &mut R, null_rate: f64, make: impl FnOnce(&mut R) -> Cell) -> Cell {
    if rng.gen_bool(null_rate) {
        Cell::Null
    } else {
        make(rng)
    }
}

fn date<R: Rng>(rng: &mut R) -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 1, 1).unwrap() + chrono::Days::new(rng.gen_range(0..60))
}

const ALPHABET: &[char] = &['a', 'b', 'c', 'é', '1', '-'];

fn word<R: Rng>(rng: &mut R, max: usize) -> String {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| *ALPHABET.choose(rng).unwrap()).collect()
}

/// Any cell type, for the type expectations.
fn mixed<R: Rng>(rng: &mut R) -> Cell {
    match rng.gen_range(0..5) {
        0 => Cell::Text(word(rng, 3)),
        1 => Cell::Int(rng.gen_range(-5..5)),
        2 => Cell::Num(rng.gen_range(-5.0..5.0)),
        3 => Cell::Bool(rng.gen()),
        _ => Cell::Date(date(rng)),
    }
}

/// A column family with comparable values, and a matching bound generator.
#[derive(Clone, Copy)]
enum Ordered {
    Int,
    Num,
    Date,
    Text,
}

impl Ordered {
    fn random<R: Rng>(rng: &mut R) -> Self {
        *[Ordered::Int, Ordered::Num, Ordered::Date, Ordered::Text].choose(rng).unwrap()
    }

    fn cell<R: Rng>(self, rng: &mut R) -> Cell {
        match self {
            Ordered::Int => Cell::Int(rng.gen_range(-20..20)),
            Ordered::Num => Cell::Num((rng.gen_range(-40..40) as f64) / 2.0),
            Ordered::Date => Cell::Date(date(rng)),
            Ordered::Text => Cell::Text(word(rng, 3)),
        }
    }

    fn bound<R: Rng>(self, rng: &mut R) -> ParamValue {
        match self {
            Ordered::Int | Ordered::Num if rng.gen() => ParamValue::Int(rng.gen_range(-20..20)),
            Ordered::Int | Ordered::Num => ParamValue::Num((rng.gen_range(-40..40) as f64) / 2.0),
            Ordered::Date => ParamValue::Str(date(rng).format("%Y-%m-%d").to_string()),
            Ordered::Text => ParamValue::Str(word(rng, 3)),
        }
    }
}

fn bounds<R: Rng>(rng: &mut R, make: impl Fn(&mut R) -> ParamValue) -> Vec<(String, ParamValue)> {
    let mut kwargs = Vec::new();
    let which = rng.gen_range(0..3);
    if which != 1 {
        kwargs.push(("min_value".to_string(), make(rng)));
    }
    if which != 0 {
        kwargs.push(("max_value".to_string(), make(rng)));
    }
    kwargs
}

const TYPE_NAMES: &[&str] = &["str", "string", "int", "integer", "float", "number", "bool", "boolean", "date"];
const PATTERNS: &[&str] = &["^a", "b$", "é", "^[abc]+$", "1-", "^$", "c.?a"];

/// A random (kwargs, column) pair suitable for `expectation`, at most
/// `max_rows` rows.
pub fn random_case<R: Rng>(rng: &mut R, expectation: &str, max_rows: usize) -> (Vec<(String, ParamValue)>, Vec<Cell>) {
    let rows = rng.gen_range(0..=max_rows);
    let null_rate = *[0.0, 0.1, 0.5].choose(rng).unwrap();
    let column = |rng: &mut R, f: &dyn Fn(&mut R) -> Cell| -> Vec<Cell> {
        (0..rows).map(|_| maybe_null(rng, null_rate, f)).collect()
    };
    let short = expectation.strip_prefix("expect_column_").unwrap();
    match short {
        "values_to_be_unique" | "values_to_not_be_null" | "values_to_be_null" => {
            let family = Ordered::random(rng);
            (vec![], column(rng, &|r| family.cell(r)))
        }
        "values_to_be_of_type" => {
            let t = TYPE_NAMES.choose(rng).unwrap().to_string();
            (vec![("type_".into(), ParamValue::Str(t))], column(rng, &mixed))
        }
        "values_to_be_in_type_list" => {
            let n = rng.gen_range(0..3);
            let ts = TYPE_NAMES
                .choose_multiple(rng, n)
                .map(|t| ParamValue::Str(t.to_string()))
                .collect();
            (vec![("type_list".into(), ParamValue::List(ts))], column(rng, &mixed))
        }
        "values_to_be_between" | "min_to_be_between" | "max_to_be_between" => {
            let family = Ordered::random(rng);
            (bounds(rng, |r| family.bound(r)), column(rng, &|r| family.cell(r)))
        }
        "values_to_be_in_set" | "values_to_not_be_in_set" => {
            let family = *[Ordered::Int, Ordered::Text].choose(rng).unwrap();
            let set = (0..rng.gen_range(0..5)).map(|_| family.bound(rng)).collect();
            (vec![("value_set".into(), ParamValue::List(set))], column(rng, &|r| family.cell(r)))
        }
        "value_lengths_to_be_between" => (
            bounds(rng, |r| ParamValue::Int(r.gen_range(0..5))),
            column(rng, &|r| Cell::Text(word(r, 5))),
        ),
        "value_lengths_to_equal" => (
            vec![("value".into(), ParamValue::Int(rng.gen_range(0..4)))],
            column(rng, &|r| Cell::Text(word(r, 4))),
        ),
        "values_to_match_regex" => (
            vec![("regex".into(), ParamValue::Str(PATTERNS.choose(rng).unwrap().to_string()))],
            column(rng, &|r| Cell::Text(word(r, 4))),
        ),
        "values_to_match_regex_list" => {
            let n = rng.gen_range(0..3);
            let ps = PATTERNS
                .choose_multiple(rng, n)
                .map(|p| ParamValue::Str(p.to_string()))
                .collect();
            (vec![("regex_list".into(), ParamValue::List(ps))], column(rng, &|r| Cell::Text(word(r, 4))))
        }
        "values_to_be_increasing" | "values_to_be_decreasing" => {
            let family = Ordered::random(rng);
            let kwargs = match rng.gen_range(0..3) {
                0 => vec![],
                n => vec![("strictly".into(), ParamValue::Bool(n == 1))],
            };
            // Mostly sorted columns so both outcomes are common.
            let mut cells = column(rng, &|r| family.cell(r));
            if rng.gen_bool(0.5) {
                let mut present: Vec<Cell> = cells.iter().filter(|c| !c.is_null()).cloned().collect();
                present.sort_by(|a, b| order(a, b).unwrap());
                if short.ends_with("decreasing") {
                    present.reverse();
                }
                let mut it = present.into_iter();
                for c in cells.iter_mut().filter(|c| !c.is_null()) {
                    *c = it.next().unwrap();
                }
            }
            (kwargs, cells)
        }
        other => panic!("no generator for {other}"),
    }
}
