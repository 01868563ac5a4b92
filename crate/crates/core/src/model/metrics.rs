use std::collections::HashMap;

use thiserror::Error;

use super::{ArchitectureModel, NodeBehavior};

/// Size of a model: node count, and the number of internal elements summed
/// over nodes (ports, behavior elements, links and representation
/// attributes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Complexity {
    pub node_count: usize,
    pub internal_elements: usize,
}

pub fn complexity(model: &ArchitectureModel) -> Complexity {
    let internal_elements = model
        .nodes
        .iter()
        .map(|node| {
            let (elements, links) = node
                .behavior
                .as_ref()
                .map_or((0, 0), |b| (b.elements.len(), b.links.len()));
            node.ports.len() + elements + links + node.representation.attribute_count()
        })
        .sum();
    Complexity {
        node_count: model.nodes.len(),
        internal_elements,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    /// Elements lying on at least one cycle, in declaration order.
    #[error("behavior links form a cycle through {}", .0.join(", "))]
    Cycle(Vec<String>),
    #[error("link references undeclared element `{0}`")]
    UnknownElement(String),
}

/// Topological order of a behavior's elements. Among elements whose
/// predecessors are all placed, the earliest declared goes first.
pub fn behavior_order(behavior: &NodeBehavior) -> Result<Vec<String>, OrderError> {
    let n = behavior.elements.len();
    let index: HashMap<&str, usize> = behavior
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.name.as_str(), i))
        .collect();

    let mut succ = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for link in &behavior.links {
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| OrderError::UnknownElement(name.to_string()))
        };
        let (u, v) = (lookup(&link.from)?, lookup(&link.to)?);
        succ[u].push(v);
        indegree[v] += 1;
    }

    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    // Quadratic scan keeps the tie-break trivially declaration-stable;
    // behaviors are small.
    while order.len() < n {
        let Some(next) = (0..n).find(|&i| !placed[i] && indegree[i] == 0) else {
            return Err(OrderError::Cycle(cyclic_elements(behavior, &succ, &placed)));
        };
        placed[next] = true;
        order.push(behavior.elements[next].name.clone());
        for &v in &succ[next] {
            indegree[v] -= 1;
        }
    }
    Ok(order)
}

/// Unplaced elements that can reach themselves; unplaced elements that are
/// merely downstream of a cycle are excluded.
fn cyclic_elements(behavior: &NodeBehavior, succ: &[Vec<usize>], placed: &[bool]) -> Vec<String> {
    let n = succ.len();
    (0..n)
        .filter(|&start| !placed[start])
        .filter(|&start| {
            let mut seen = vec![false; n];
            let mut stack: Vec<usize> = succ[start].clone();
            while let Some(v) = stack.pop() {
                if v == start {
                    return true;
                }
                if !std::mem::replace(&mut seen[v], true) {
                    stack.extend(&succ[v]);
                }
            }
            false
        })
        .map(|i| behavior.elements[i].name.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    fn behavior(names: &[&str], links: &[(&str, &str)]) -> NodeBehavior {
        NodeBehavior {
            elements: names
                .iter()
                .map(|n| BehaviorElement::action(*n, Action::Generation))
                .collect(),
            links: links.iter().map(|(a, b)| Link::new(*a, *b)).collect(),
        }
    }

    #[test]
    fn empty_model_has_zero_complexity() {
        let m = ArchitectureModel::new("M", Level::Hla);
        assert_eq!(
            complexity(&m),
            Complexity {
                node_count: 0,
                internal_elements: 0
            }
        );
    }

    #[test]
    fn single_node_hand_count() {
        // 2 ports + 3 actions + 2 links + 1 format + 1 processing = 9
        let mut node = DataNode::new("A");
        node.ports = vec![Port::new("i", Direction::In), Port::new("o", Direction::Out)];
        node.behavior = Some(behavior(&["a", "b", "c"], &[("a", "b"), ("b", "c")]));
        node.representation.formats = vec![DataFormat::Csv];
        node.representation.processing = vec![Processing::Batch];
        let mut m = ArchitectureModel::new("M", Level::Lla);
        m.nodes.push(node);
        assert_eq!(
            complexity(&m),
            Complexity {
                node_count: 1,
                internal_elements: 9
            }
        );
    }

    #[test]
    fn forced_order() {
        let b = behavior(&["a", "b"], &[("a", "b")]);
        assert_eq!(behavior_order(&b).unwrap(), ["a", "b"]);
        let b = behavior(&["b", "a"], &[("a", "b")]);
        assert_eq!(behavior_order(&b).unwrap(), ["a", "b"]);
    }

    #[test]
    fn ties_follow_declaration_order() {
        let b = behavior(&["a", "b", "c"], &[("a", "c"), ("b", "c")]);
        assert_eq!(behavior_order(&b).unwrap(), ["a", "b", "c"]);
        let b = behavior(&["c", "b", "a"], &[]);
        assert_eq!(behavior_order(&b).unwrap(), ["c", "b", "a"]);
    }

    #[test]
    fn two_cycle_is_reported() {
        let b = behavior(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert_eq!(
            behavior_order(&b),
            Err(OrderError::Cycle(vec!["a".into(), "b".into()]))
        );
    }

    #[test]
    fn cycle_report_excludes_downstream_elements() {
        let b = behavior(
            &["x", "a", "b", "tail"],
            &[("x", "a"), ("a", "b"), ("b", "a"), ("b", "tail")],
        );
        assert_eq!(
            behavior_order(&b),
            Err(OrderError::Cycle(vec!["a".into(), "b".into()]))
        );
        let b = behavior(&["s"], &[("s", "s")]);
        assert_eq!(behavior_order(&b), Err(OrderError::Cycle(vec!["s".into()])));
    }

    #[test]
    fn unknown_link_endpoint() {
        let b = behavior(&["a"], &[("a", "ghost")]);
        assert_eq!(
            behavior_order(&b),
            Err(OrderError::UnknownElement("ghost".into()))
        );
    }
}
