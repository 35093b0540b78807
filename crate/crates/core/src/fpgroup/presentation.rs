use std::fmt;

use serde::{Deserialize, Serialize};

use super::FpError;

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, exponent: i32) -> Letter {
        debug_assert!(exponent == 1 || exponent == -1);
        Letter {
            generator,
            inverse: exponent < 0,
        }
    }

    pub fn exponent(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    /// Builds the freely reduced form of `letters`.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// From `(generator, ±1)` pairs.
    pub fn from_pairs(pairs: &[(usize, i32)]) -> Word {
        Word::new(pairs.iter().map(|&(g, e)| Letter::new(g, e)))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Strips matching letter pairs from both ends.
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = 0;
        let mut e = self.0.len();
        while e - s >= 2 && self.0[s] == self.0[e - 1].inv() {
            s += 1;
            e -= 1;
        }
        Word(self.0[s..e].to_vec())
    }

    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.0.len()).map(move |k| {
            let mut v = self.0[k..].to_vec();
            v.extend_from_slice(&self.0[..k]);
            Word(v)
        })
    }

    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut out = vec![0i64; generators];
        for l in &self.0 {
            out[l.generator] += i64::from(l.exponent());
        }
        out
    }

    fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                let name = &names[l.generator];
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect();
        parts.join("*")
    }
}

/// Generators with names, and freely reduced, non-empty relator words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    generators: Vec<String>,
    relators: Vec<Vec<(usize, i32)>>,
}

impl Presentation {
    /// Relators are freely reduced and trivial ones dropped.
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Presentation, FpError> {
        let count = names.len();
        let mut kept = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(l) = r.letters().iter().find(|l| l.generator >= count) {
                return Err(FpError::GeneratorOutOfRange {
                    index: l.generator,
                    count,
                });
            }
            let r = Word::new(r.0);
            if !r.is_empty() {
                kept.push(r);
            }
        }
        Ok(Presentation {
            names,
            relators: kept,
        })
    }

    /// Generators named `x1, x2, ...`.
    pub fn with_indexed_names(count: usize, relators: Vec<Word>) -> Result<Presentation, FpError> {
        Presentation::new((1..=count).map(|i| format!("x{i}")).collect(), relators)
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Relator exponent-sum matrix, one row per relator.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| r.exponent_sums(self.generator_count()))
            .collect()
    }

    /// Text form `<x1,x2 | x1*x2^-1*x1^-1*x2^-1, ...>`.
    pub fn to_text(&self) -> String {
        let rels: Vec<String> = self.relators.iter().map(|r| r.render(&self.names)).collect();
        format!("<{} | {}>", self.names.join(","), rels.join(", "))
    }

    pub fn parse_text(text: &str) -> Result<Presentation, FpError> {
        let bad = |msg: &str| FpError::Parse(msg.to_string());
        let t = text.trim();
        let inner = t
            .strip_prefix('<')
            .and_then(|s| s.strip_suffix('>'))
            .ok_or_else(|| bad("presentation must be enclosed in < >"))?;
        let (gens, rels) = inner
            .split_once('|')
            .ok_or_else(|| bad("missing `|` between generators and relators"))?;
        let names: Vec<String> = gens
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        let mut relators = Vec::new();
        for rel in rels.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if rel == "1" {
                continue;
            }
            let mut letters = Vec::new();
            for factor in rel.split('*').map(str::trim) {
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => {
                        let e: i32 = e.trim().parse().map_err(|_| bad(&format!("bad exponent in `{factor}`")))?;
                        (n.trim(), e)
                    }
                    None => (factor, 1),
                };
                let g = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| FpError::Parse(format!("unknown generator `{name}`")))?;
                let unit = if exp < 0 { -1 } else { 1 };
                for _ in 0..exp.unsigned_abs() {
                    letters.push(Letter::new(g, unit));
                }
            }
            relators.push(Word::new(letters));
        }
        Presentation::new(names, relators)
    }

    /// `{generators, relators: [[[i, e], ...], ...]}` with `i` a 0-based
    /// position in `generators`.
    pub fn to_json(&self) -> serde_json::Value {
        let rels = self
            .relators
            .iter()
            .map(|r| r.letters().iter().map(|l| (l.generator, l.exponent())).collect())
            .collect();
        serde_json::to_value(PresentationJson {
            generators: self.names.clone(),
            relators: rels,
        })
        .expect("presentation serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Presentation, FpError> {
        let p: PresentationJson =
            serde_json::from_value(value.clone()).map_err(|e| FpError::Parse(e.to_string()))?;
        let mut relators = Vec::new();
        for r in p.relators {
            if let Some(&(_, e)) = r.iter().find(|(_, e)| *e != 1 && *e != -1) {
                return Err(FpError::Parse(format!("exponent {e} is not +1 or -1")));
            }
            relators.push(Word::from_pairs(&r));
        }
        Presentation::new(p.generators, relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        let w = Word::from_pairs(&[(0, 1), (1, 1), (1, -1), (0, 1)]);
        assert_eq!(w, Word::from_pairs(&[(0, 1), (0, 1)]));
        assert!(Word::from_pairs(&[(0, 1), (0, -1)]).is_empty());
        let c = Word::from_pairs(&[(1, 1), (0, 1), (1, -1)]).cyclically_reduced();
        assert_eq!(c, Word::from_pairs(&[(0, 1)]));
        assert_eq!(w.exponent_sums(2), vec![2, 0]);
    }

    #[test]
    fn text_round_trip() {
        let p = Presentation::with_indexed_names(
            2,
            vec![
                Word::from_pairs(&[(0, 1), (1, -1), (0, -1), (1, -1)]),
                Word::from_pairs(&[(1, 1)]),
            ],
        )
        .unwrap();
        assert_eq!(p.to_text(), "<x1,x2 | x1*x2^-1*x1^-1*x2^-1, x2>");
        assert_eq!(Presentation::parse_text(&p.to_text()).unwrap(), p);
        let json = p.to_json();
        assert_eq!(json["relators"][1], serde_json::json!([[1, 1]]));
        assert_eq!(Presentation::from_json(&json).unwrap(), p);
    }

    #[test]
    fn parse_powers_and_empty() {
        let p = Presentation::parse_text("<x | x^2>").unwrap();
        assert_eq!(p.relators()[0].len(), 2);
        let free = Presentation::parse_text("<x | >").unwrap();
        assert!(free.relators().is_empty());
        assert!(Presentation::parse_text("<x | y>").is_err());
        assert!(Presentation::parse_text("x | y").is_err());
    }

    #[test]
    fn rejects_bad_indices() {
        let r = Presentation::with_indexed_names(1, vec![Word::from_pairs(&[(3, 1)])]);
        assert_eq!(r, Err(FpError::GeneratorOutOfRange { index: 3, count: 1 }));
    }
}
