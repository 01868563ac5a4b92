mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use daqforge::diag::{has_errors, Diagnostic, Severity};
use daqforge::dsl::{parse_model, parse_model_with_spans};
use daqforge::model::{behavior_order, Action, ElementKind, Level, NodeBehavior};
use daqforge::validate::{validate, validate_level, validate_with_spans, LevelStatus};

use common::{crate_dir, random_model, read};

fn fixture(name: &str) -> String {
    read(&crate_dir().join("tests/fixtures/validator").join(name))
}

fn codes(diags: &[Diagnostic]) -> Vec<&str> {
    diags.iter().map(|d| d.code.as_str()).collect()
}

#[test]
fn each_bad_fixture_trips_exactly_its_rule() {
    for n in 1..=8 {
        let (model, spans) = parse_model_with_spans(&fixture(&format!("r{n}_bad.daml"))).unwrap();
        let diags = validate_with_spans(&model, &spans);
        let code = format!("R00{n}");
        assert!(!diags.is_empty(), "r{n}_bad is clean");
        assert!(diags.iter().all(|d| d.code == code), "r{n}_bad: {:?}", codes(&diags));
        let severity = if n >= 7 { Severity::Warning } else { Severity::Error };
        assert!(diags.iter().all(|d| d.severity == severity));
        assert!(diags.iter().all(|d| d.span.is_some()), "r{n}_bad lacks a position");
    }
}

#[test]
fn each_fixed_fixture_is_clean() {
    for n in 1..=8 {
        let model = parse_model(&fixture(&format!("r{n}_fixed.daml"))).unwrap();
        assert_eq!(codes(&validate(&model)), Vec::<&str>::new(), "r{n}_fixed");
    }
}

#[test]
fn samples_are_valid_lla_models() {
    for name in ["adw.daml", "users.daml", "orders.daml"] {
        let model = common::load_sample(name);
        assert_eq!(validate(&model), vec![], "{name}");
        assert_eq!(validate_level(&model), Ok(LevelStatus::LlaOk), "{name}");
    }
}

#[test]
fn hla_checks_skip_behavior_rules() {
    let mut model = parse_model(&fixture("r3_bad.daml")).unwrap();
    assert!(has_errors(&validate(&model)));
    model.level = Level::Hla;
    assert_eq!(validate_level(&model), Ok(LevelStatus::HlaOk));
}

fn tally(diags: &[Diagnostic]) -> HashMap<(String, String), usize> {
    let mut m = HashMap::new();
    for d in diags {
        *m.entry((d.code.clone(), d.message.clone())).or_insert(0) += 1;
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Removing a connection only ever removes diagnostics.
    #[test]
    fn dropping_a_connection_adds_nothing(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let model = random_model(&mut rng);
        prop_assume!(!model.connections.is_empty());
        let before = tally(&validate(&model));
        let mut smaller = model.clone();
        smaller.connections.remove(rng.gen_range(0..model.connections.len()));
        for (key, n) in tally(&validate(&smaller)) {
            prop_assert!(before.get(&key).copied().unwrap_or(0) >= n, "new diagnostic {:?}", key);
        }
    }

    #[test]
    fn valid_lla_models_have_an_order(seed in any::<u64>()) {
        let mut model = random_model(&mut StdRng::seed_from_u64(seed));
        // Keep only what R004 judges, leaving links
        // as the only thing that can fail.
        model.level = Level::Lla;
        model.connections.clear();
        for node in &mut model.nodes {
            let behavior = node.behavior.get_or_insert_with(NodeBehavior::default);
            for e in &mut behavior.elements {
                e.kind = ElementKind::Action(Action::Store(None));
            }
        }
        let ordered = model
            .nodes
            .iter()
            .all(|n| behavior_order(n.behavior.as_ref().unwrap()).is_ok());
        prop_assert_eq!(validate_level(&model) == Ok(LevelStatus::LlaOk), ordered);
    }

    #[test]
    fn validation_is_deterministic_and_sorted(seed in any::<u64>()) {
        let model = random_model(&mut StdRng::seed_from_u64(seed));
        let diags = validate(&model);
        prop_assert_eq!(&diags, &validate(&model));
        prop_assert_eq!(validate_level(&model).is_err(), has_errors(&diags));
    }
}
