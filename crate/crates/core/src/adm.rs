//! The parity graph: vertices joined when both parities of the pair are odd,
//! its components coloured red, green or blue, and the admissible `{1,2}`
//! colourings of those components.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{CartanMatrix, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Colour {
    #[serde(rename = "r")]
    Red,
    #[serde(rename = "g")]
    Green,
    #[serde(rename = "b")]
    Blue,
}

impl Colour {
    pub fn letter(self) -> char {
        match self {
            Colour::Red => 'r',
            Colour::Green => 'g',
            Colour::Blue => 'b',
        }
    }

    fn dot_name(self) -> &'static str {
        match self {
            Colour::Red => "red",
            Colour::Green => "green",
            Colour::Blue => "blue",
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Sorted 0-based vertices.
    pub vertices: Vec<usize>,
    pub colour: Colour,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdmError {
    #[error("kappa has {got} values but the graph has {expected} components")]
    KappaLength { expected: usize, got: usize },
    #[error("kappa value {value} on component {component} is not 1 or 2")]
    KappaValue { component: usize, value: u8 },
    #[error("kappa must be 1 on red component {0}")]
    RedNotOne(String),
    #[error("kappa bitstring has {got} characters, expected {expected} (one per free component)")]
    BitsLength { expected: usize, got: usize },
    #[error("kappa bitstring may only contain '1' and '2', found `{0}`")]
    BitsChar(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmGraph {
    rank: usize,
    edges: Vec<(usize, usize)>,
    components: Vec<Component>,
    component_of: Vec<usize>,
}

/// Whether vertex `i` forces red: some `j` has `ε(i,j) = 1` and `ε(j,i) = -1`.
fn forces_red(m: &CartanMatrix, i: usize) -> bool {
    (0..m.rank())
        .any(|j| j != i && m.epsilon(i, j) == Parity::Plus && m.epsilon(j, i) == Parity::Minus)
}

impl AdmGraph {
    pub fn build(m: &CartanMatrix) -> AdmGraph {
        let n = m.rank();
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if m.epsilon(i, j) == Parity::Minus && m.epsilon(j, i) == Parity::Minus {
                    edges.push((i, j));
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }

        let mut component_of = vec![usize::MAX; n];
        let mut components = Vec::new();
        for start in 0..n {
            if component_of[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            component_of[start] = id;
            let mut vertices = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adjacency[v] {
                    if component_of[w] == usize::MAX {
                        component_of[w] = id;
                        vertices.push(w);
                        queue.push_back(w);
                    }
                }
            }
            vertices.sort_unstable();
            let colour = if vertices.iter().any(|&v| forces_red(m, v)) {
                Colour::Red
            } else if vertices.len() == 1 {
                Colour::Green
            } else {
                Colour::Blue
            };
            components.push(Component { vertices, colour });
        }

        AdmGraph {
            rank: n,
            edges,
            components,
            component_of,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Edges `(i, j)` with `i < j`, lexicographically ordered.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Components ordered by smallest vertex.
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_of(&self, vertex: usize) -> usize {
        self.component_of[vertex]
    }

    pub fn colour_of(&self, vertex: usize) -> Colour {
        self.components[self.component_of[vertex]].colour
    }

    /// Indices of the components that are not red, in canonical order.
    pub fn free_components(&self) -> Vec<usize> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.colour != Colour::Red)
            .map(|(k, _)| k)
            .collect()
    }

    /// All admissible colourings. Free components are bits, the first free
    /// component is the least significant one, and value 1 is bit 0; so the
    /// trivial colouring comes first.
    pub fn enumerate_kappa(&self) -> Vec<KappaColouring> {
        let free = self.free_components();
        assert!(free.len() < usize::BITS as usize, "too many free components");
        (0..1usize << free.len())
            .map(|mask| {
                let mut values = vec![1u8; self.components.len()];
                for (bit, &k) in free.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        values[k] = 2;
                    }
                }
                KappaColouring { values }
            })
            .collect()
    }

    pub fn check_kappa(&self, kappa: &KappaColouring) -> Result<(), AdmError> {
        if kappa.values.len() != self.components.len() {
            return Err(AdmError::KappaLength {
                expected: self.components.len(),
                got: kappa.values.len(),
            });
        }
        for (k, (&v, c)) in kappa.values.iter().zip(&self.components).enumerate() {
            if v != 1 && v != 2 {
                return Err(AdmError::KappaValue { component: k, value: v });
            }
            if c.colour == Colour::Red && v != 1 {
                return Err(AdmError::RedNotOne(crate::format_index_set(&c.vertices)));
            }
        }
        Ok(())
    }

    /// Builds a colouring from one `'1'`/`'2'` character per free component.
    pub fn kappa_from_bits(&self, bits: &str) -> Result<KappaColouring, AdmError> {
        let free = self.free_components();
        let chars: Vec<char> = bits.trim().chars().collect();
        if chars.len() != free.len() {
            return Err(AdmError::BitsLength {
                expected: free.len(),
                got: chars.len(),
            });
        }
        let mut values = vec![1u8; self.components.len()];
        for (&k, &c) in free.iter().zip(&chars) {
            values[k] = match c {
                '1' => 1,
                '2' => 2,
                other => return Err(AdmError::BitsChar(other)),
            };
        }
        Ok(KappaColouring { values })
    }

    /// Constant colouring with value `v` on every free component.
    pub fn constant_kappa(&self, v: u8) -> KappaColouring {
        let values = self
            .components
            .iter()
            .map(|c| if c.colour == Colour::Red { 1 } else { v })
            .collect();
        KappaColouring { values }
    }

    pub fn counts(&self, kappa: Option<&KappaColouring>) -> Result<ColourCounts, AdmError> {
        let count = |col: Colour| self.components.iter().filter(|c| c.colour == col).count();
        let mut out = ColourCounts {
            red: count(Colour::Red),
            green: count(Colour::Green),
            blue: count(Colour::Blue),
            blue_kappa_one: None,
            kappa_two: None,
        };
        if let Some(k) = kappa {
            self.check_kappa(k)?;
            let pairs = || self.components.iter().zip(&k.values);
            out.blue_kappa_one = Some(
                pairs()
                    .filter(|(c, &v)| c.colour == Colour::Blue && v == 1)
                    .count(),
            );
            out.kappa_two = Some(pairs().filter(|(_, &v)| v == 2).count());
        }
        Ok(out)
    }

    /// Graphviz rendering with vertices filled by colour, 1-based labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph adm {\n    node [shape=circle, style=filled];\n");
        for v in 0..self.rank {
            let colour = self.colour_of(v);
            let font = if colour == Colour::Blue { ", fontcolor=white" } else { "" };
            let _ = writeln!(
                out,
                "    {} [fillcolor={}, label=\"{}\"{}];",
                v + 1,
                colour.dot_name(),
                v + 1,
                font
            );
        }
        for &(i, j) in &self.edges {
            let _ = writeln!(out, "    {} -- {};", i + 1, j + 1);
        }
        out.push_str("}\n");
        out
    }

    /// `{components: [{vertices, colour, kappa?}], counts}`, vertices 1-based.
    pub fn to_json(&self, kappa: Option<&KappaColouring>) -> Result<serde_json::Value, AdmError> {
        let counts = self.counts(kappa)?;
        let components: Vec<serde_json::Value> = self
            .components
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut obj = serde_json::json!({
                    "vertices": c.vertices.iter().map(|v| v + 1).collect::<Vec<_>>(),
                    "colour": c.colour,
                });
                if let Some(kappa) = kappa {
                    obj["kappa"] = serde_json::json!(kappa.values[k]);
                }
                obj
            })
            .collect();
        Ok(serde_json::json!({ "components": components, "counts": counts }))
    }
}

/// Value 1 or 2 on each component of the parity graph, in the graph's
/// canonical component order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KappaColouring {
    values: Vec<u8>,
}

impl KappaColouring {
    /// Unchecked; validate with [`AdmGraph::check_kappa`].
    pub fn from_values(values: Vec<u8>) -> Self {
        KappaColouring { values }
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn value_on(&self, graph: &AdmGraph, vertex: usize) -> u8 {
        self.values[graph.component_of(vertex)]
    }

    /// Inverse of [`AdmGraph::kappa_from_bits`].
    pub fn to_bits(&self, graph: &AdmGraph) -> String {
        graph
            .free_components()
            .into_iter()
            .map(|k| if self.values[k] == 2 { '2' } else { '1' })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourCounts {
    #[serde(rename = "n_r")]
    pub red: usize,
    #[serde(rename = "n_g")]
    pub green: usize,
    #[serde(rename = "n_b")]
    pub blue: usize,
    #[serde(rename = "n_b_kappa1", skip_serializing_if = "Option::is_none")]
    pub blue_kappa_one: Option<usize>,
    #[serde(rename = "c", skip_serializing_if = "Option::is_none")]
    pub kappa_two: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(name: &str) -> AdmGraph {
        AdmGraph::build(&CartanMatrix::from_named(name).unwrap())
    }

    fn summary(g: &AdmGraph) -> Vec<(Vec<usize>, Colour)> {
        g.components()
            .iter()
            .map(|c| (c.vertices.iter().map(|v| v + 1).collect(), c.colour))
            .collect()
    }

    #[test]
    fn classical_rows() {
        assert_eq!(summary(&graph("A5")), vec![(vec![1, 2, 3, 4, 5], Colour::Blue)]);
        assert_eq!(
            summary(&graph("C4")),
            vec![(vec![1, 2, 3], Colour::Red), (vec![4], Colour::Green)]
        );
        assert_eq!(
            summary(&graph("B2")),
            vec![(vec![1], Colour::Green), (vec![2], Colour::Red)]
        );
        assert_eq!(
            summary(&graph("B4")),
            vec![(vec![1, 2, 3], Colour::Blue), (vec![4], Colour::Red)]
        );
        assert_eq!(
            summary(&graph("F4")),
            vec![(vec![1, 2], Colour::Red), (vec![3, 4], Colour::Blue)]
        );
        assert_eq!(summary(&graph("G2")), vec![(vec![1, 2], Colour::Blue)]);
        assert_eq!(summary(&graph("A1")), vec![(vec![1], Colour::Green)]);
    }

    #[test]
    fn kappa_enumeration_order() {
        let g = graph("C3");
        let all = g.enumerate_kappa();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].values(), &[1, 1]);
        assert_eq!(all[1].values(), &[1, 2]);
        assert_eq!(all[1].to_bits(&g), "2");
        assert_eq!(g.kappa_from_bits("2").unwrap(), all[1]);
        assert_eq!(g.kappa_from_bits("21"), Err(AdmError::BitsLength { expected: 1, got: 2 }));
        assert_eq!(g.kappa_from_bits("3"), Err(AdmError::BitsChar('3')));
    }

    #[test]
    fn inadmissible_kappa_is_rejected() {
        let g = graph("C3");
        let bad = KappaColouring::from_values(vec![2, 2]);
        assert!(matches!(g.counts(Some(&bad)), Err(AdmError::RedNotOne(_))));
        let short = KappaColouring::from_values(vec![1]);
        assert!(matches!(g.check_kappa(&short), Err(AdmError::KappaLength { .. })));
        let zero = KappaColouring::from_values(vec![1, 0]);
        assert!(matches!(g.check_kappa(&zero), Err(AdmError::KappaValue { .. })));
    }

    #[test]
    fn counts_examples() {
        let e10 = graph("E10");
        let c = e10.counts(None).unwrap();
        assert_eq!((c.red, c.green, c.blue), (0, 0, 1));
        let a2 = graph("A2");
        let two = a2.constant_kappa(2);
        let c = a2.counts(Some(&two)).unwrap();
        assert_eq!(c.kappa_two, Some(1));
        assert_eq!(c.blue_kappa_one, Some(0));
    }

    #[test]
    fn dot_output() {
        let a1 = graph("A1").to_dot();
        assert!(a1.contains("1 [fillcolor=green"));
        assert!(!a1.contains("--"));
        let a2 = graph("A2").to_dot();
        assert_eq!(a2.matches("fillcolor=blue").count(), 2);
        assert_eq!(a2.matches(" -- ").count(), 1);
        let c3 = graph("C3").to_dot();
        assert_eq!(c3.matches("fillcolor=red").count(), 2);
        assert_eq!(c3.matches("fillcolor=green").count(), 1);
        assert!(c3.contains("    1 -- 2;\n"));
        assert_eq!(c3.matches(" -- ").count(), 1);
    }

    #[test]
    fn json_shape() {
        let g = graph("C3");
        let kappa = g.constant_kappa(2);
        let v = g.to_json(Some(&kappa)).unwrap();
        assert_eq!(v["components"][0]["vertices"], serde_json::json!([1, 2]));
        assert_eq!(v["components"][0]["colour"], "r");
        assert_eq!(v["components"][1]["kappa"], 2);
        assert_eq!(v["counts"]["n_g"], 1);
        assert_eq!(v["counts"]["c"], 1);
        let plain = g.to_json(None).unwrap();
        assert!(plain["counts"].get("c").is_none());
    }
}
