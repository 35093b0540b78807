//! Finitely presented groups: presentations built from a Cartan matrix,
//! abelianization by Smith normal form, and Todd–Coxeter coset enumeration.

mod presentation;
mod smith;
mod todd_coxeter;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::adm::Colour;
use crate::cartan::{CartanMatrix, Parity};
use crate::coxeter::{CoxeterWord, WeylGroup};

pub use presentation::{Letter, Presentation, Word};
pub use smith::smith_diagonal;
pub use todd_coxeter::{todd_coxeter_with, EnumerationResult, Strategy};

pub const DEFAULT_MAX_COSETS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("generator index {index} out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("cannot parse presentation: {0}")]
    Parse(String),
    #[error("coset cap must be at least 1")]
    ZeroCap,
    #[error("index set must be non-empty")]
    EmptySet,
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("a green component has exactly one vertex, got {size}")]
    GreenSize { size: usize },
    #[error("component size must be at least 1")]
    ZeroSize,
}

/// `Z^free_rank x C_{d1} x C_{d2} x ...` with `d1 | d2 | ...`, all `d > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl AbelianInvariants {
    pub fn new(free_rank: usize, torsion: &[u64]) -> AbelianInvariants {
        AbelianInvariants {
            free_rank,
            torsion: torsion.iter().map(|&d| BigUint::from(d)).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<BigUint> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Every torsion coefficient equals 2.
    pub fn is_elementary_2(&self) -> bool {
        self.torsion.iter().all(|d| *d == BigUint::from(2u8))
    }

    /// Invariants of the direct sum.
    pub fn direct_sum(&self, other: &AbelianInvariants) -> AbelianInvariants {
        // recompute the divisibility chain from the diagonal matrix
        let cols = self.torsion.len() + other.torsion.len();
        let mut rows = Vec::with_capacity(cols);
        for (k, d) in self.torsion.iter().chain(&other.torsion).enumerate() {
            let mut row = vec![0i64; cols];
            row[k] = d.to_i64().expect("torsion coefficient fits in i64");
            rows.push(row);
        }
        let diag = smith_diagonal(&rows, cols);
        AbelianInvariants {
            free_rank: self.free_rank + other.free_rank,
            torsion: diag
                .into_iter()
                .filter_map(|d| d.to_biguint())
                .filter(|d| !d.is_one())
                .collect(),
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        // runs of equal coefficients as powers
        let mut k = 0;
        while k < self.torsion.len() {
            let d = &self.torsion[k];
            let run = self.torsion[k..].iter().take_while(|e| *e == d).count();
            parts.push(if run == 1 { format!("C{d}") } else { format!("C{d}^{run}") });
            k += run;
        }
        f.write_str(&parts.join(" x "))
    }
}

impl Serialize for AbelianInvariants {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Coeff {
            Small(u64),
            Big(String),
        }
        #[derive(Serialize)]
        struct Repr {
            free_rank: usize,
            torsion: Vec<Coeff>,
        }
        Repr {
            free_rank: self.free_rank,
            torsion: self
                .torsion
                .iter()
                .map(|d| d.to_u64().map_or_else(|| Coeff::Big(d.to_string()), Coeff::Small))
                .collect(),
        }
        .serialize(s)
    }
}

pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let gens = p.generator_count();
    let diag = smith_diagonal(&p.relation_matrix(), gens);
    AbelianInvariants {
        free_rank: gens - diag.len(),
        torsion: diag
            .into_iter()
            .filter_map(|d| d.to_biguint())
            .filter(|d| !d.is_one())
            .collect(),
    }
}

/// Coset enumeration with the default strategy.
pub fn todd_coxeter(
    p: &Presentation,
    subgroup: &[Word],
    max_cosets: usize,
) -> Result<EnumerationResult, FpError> {
    todd_coxeter_with(p, subgroup, max_cosets, Strategy::default())
}

/// `x_i x_j^{ε(i,j)} x_i^{-1} x_j^{-1}` over generator positions `gi`, `gj`.
fn pair_relator(m: &CartanMatrix, i: usize, j: usize, gi: usize, gj: usize) -> Word {
    let e = match m.epsilon(i, j) {
        Parity::Plus => 1,
        Parity::Minus => -1,
    };
    Word::from_pairs(&[(gi, 1), (gj, e), (gi, -1), (gj, -1)])
}

fn named(indices: &[usize]) -> Vec<String> {
    indices.iter().map(|i| format!("x{}", i + 1)).collect()
}

fn check_set(m: &CartanMatrix, set: &[usize]) -> Result<(), FpError> {
    match set.iter().find(|&&k| k >= m.rank()) {
        Some(&k) => Err(FpError::IndexOutOfRange {
            index: k + 1,
            rank: m.rank(),
        }),
        None => Ok(()),
    }
}

fn sorted(set: &[usize]) -> Vec<usize> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// `H_J`: generators `x_i` for `i ∈ J`, one commutation relator for each
/// ordered pair of distinct indices in `J`.
pub fn h_j_presentation(m: &CartanMatrix, set: &[usize]) -> Result<Presentation, FpError> {
    check_set(m, set)?;
    let set = sorted(set);
    if set.is_empty() {
        return Err(FpError::EmptySet);
    }
    let mut rels = Vec::new();
    for (gi, &i) in set.iter().enumerate() {
        for (gj, &j) in set.iter().enumerate() {
            if i != j {
                rels.push(pair_relator(m, i, j, gi, gj));
            }
        }
    }
    Presentation::new(named(&set), rels)
}

/// All pair relators on `I`, with `x_k` killed for `k ∈ J`.
pub fn flag_presentation(m: &CartanMatrix, set: &[usize]) -> Result<Presentation, FpError> {
    check_set(m, set)?;
    let n = m.rank();
    let mut rels = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                rels.push(pair_relator(m, i, j, i, j));
            }
        }
    }
    rels.extend(sorted(set).into_iter().map(|k| Word::from_pairs(&[(k, 1)])));
    Presentation::with_indexed_names(n, rels)
}

/// Relators read off the 2-cells of `G/P_J`: `x_k` for `k ∈ J`, and the pair
/// relator for `(i, j)` only when `σ_iσ_j` is a minimal coset representative.
pub fn cw_presentation(m: &CartanMatrix, set: &[usize], w: &WeylGroup) -> Result<Presentation, FpError> {
    check_set(m, set)?;
    let set = sorted(set);
    let n = m.rank();
    let mut rels: Vec<Word> = set.iter().map(|&k| Word::from_pairs(&[(k, 1)])).collect();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let e = w
                .element_from_word(&CoxeterWord(vec![i, j]))
                .expect("rank-2 products of generators stay small");
            if e.length() == 2 && w.is_minimal_rep(&e, &set) {
                rels.push(pair_relator(m, i, j, i, j));
            }
        }
    }
    Presentation::with_indexed_names(n, rels)
}

/// The factor of `H_I` attached to `J`: every pair relator on `I` with
/// `x_k = 1` substituted for `k ∉ J`. For a component of the parity graph
/// this is isomorphic to the `J`-factor of `H_I`; it agrees with
/// [`h_j_presentation`] except for red components, where relators through
/// outside neighbours contribute `x_i^2`.
pub fn component_presentation(m: &CartanMatrix, set: &[usize]) -> Result<Presentation, FpError> {
    check_set(m, set)?;
    let set = sorted(set);
    if set.is_empty() {
        return Err(FpError::EmptySet);
    }
    let pos = |k: usize| set.iter().position(|&s| s == k);
    let n = m.rank();
    let mut rels = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let e = match m.epsilon(i, j) {
                Parity::Plus => 1,
                Parity::Minus => -1,
            };
            let letters: Vec<Letter> = [(i, 1), (j, e), (i, -1), (j, -1)]
                .into_iter()
                .filter_map(|(k, x)| pos(k).map(|g| Letter::new(g, x)))
                .collect();
            let w = Word::new(letters);
            if !w.is_empty() && !rels.contains(&w) {
                rels.push(w);
            }
        }
    }
    Presentation::new(named(&set), rels)
}

/// What the structure lemma predicts for a component group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentGroup {
    /// `C2^rank`, abelian of order `2^rank`.
    Elementary { rank: usize },
    InfiniteCyclic,
    /// Only the order `2^(size+1)` is predicted.
    OrderOnly { order_log2: usize },
}

impl ComponentGroup {
    pub fn order(self) -> Option<BigUint> {
        match self {
            ComponentGroup::Elementary { rank } => Some(BigUint::one() << rank),
            ComponentGroup::InfiniteCyclic => None,
            ComponentGroup::OrderOnly { order_log2 } => Some(BigUint::one() << order_log2),
        }
    }

    pub fn abelian(self) -> Option<AbelianInvariants> {
        match self {
            ComponentGroup::Elementary { rank } => Some(AbelianInvariants::new(0, &vec![2; rank])),
            ComponentGroup::InfiniteCyclic => Some(AbelianInvariants::new(1, &[])),
            ComponentGroup::OrderOnly { .. } => None,
        }
    }
}

impl fmt::Display for ComponentGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentGroup::Elementary { rank: 0 } => f.write_str("1"),
            ComponentGroup::Elementary { rank: 1 } => f.write_str("C2"),
            ComponentGroup::Elementary { rank } => write!(f, "C2^{rank}"),
            ComponentGroup::InfiniteCyclic => f.write_str("Z"),
            ComponentGroup::OrderOnly { order_log2 } => write!(f, "order 2^{order_log2}"),
        }
    }
}

pub fn classify_component_group(colour: Colour, size: usize) -> Result<ComponentGroup, FpError> {
    match (colour, size) {
        (_, 0) => Err(FpError::ZeroSize),
        (Colour::Red, s) => Ok(ComponentGroup::Elementary { rank: s }),
        (Colour::Green, 1) => Ok(ComponentGroup::InfiniteCyclic),
        (Colour::Green, s) => Err(FpError::GreenSize { size: s }),
        (Colour::Blue, s) => Ok(ComponentGroup::OrderOnly { order_log2: s + 1 }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentVerification {
    /// 0-based.
    #[serde(skip)]
    pub vertices: Vec<usize>,
    pub colour: Colour,
    pub predicted: ComponentGroup,
    pub presentation: String,
    pub abelian: AbelianInvariants,
    pub enumeration: EnumerationResult,
    pub checks: Vec<Check>,
}

impl ComponentVerification {
    pub fn status(&self) -> CheckStatus {
        if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else if self.checks.iter().any(|c| c.status == CheckStatus::Inconclusive) {
            CheckStatus::Inconclusive
        } else {
            CheckStatus::Pass
        }
    }
}

/// Enumerates and abelianizes the component group of `set` and compares
/// both against [`classify_component_group`].
pub fn verify_component(
    m: &CartanMatrix,
    set: &[usize],
    colour: Colour,
    max_cosets: usize,
) -> Result<ComponentVerification, FpError> {
    let set = sorted(set);
    let predicted = classify_component_group(colour, set.len())?;
    let p = component_presentation(m, &set)?;
    let abelian = abelianization(&p);
    let enumeration = todd_coxeter(&p, &[], max_cosets)?;
    let mut checks = Vec::new();

    let observed_order = match enumeration {
        EnumerationResult::Finite { index } => format!("{index}"),
        EnumerationResult::Exhausted { limit } => format!("exhausted at {limit} cosets"),
    };
    let order_status = match (predicted.order(), enumeration) {
        (Some(o), EnumerationResult::Finite { index }) => pass_if(o == BigUint::from(index)),
        (Some(_), EnumerationResult::Exhausted { .. }) => CheckStatus::Inconclusive,
        (None, EnumerationResult::Finite { .. }) => CheckStatus::Fail,
        // an infinite abelianization already proves the group infinite
        (None, EnumerationResult::Exhausted { .. }) => pass_if(abelian.free_rank > 0),
    };
    checks.push(Check {
        name: "order".into(),
        expected: predicted.order().map_or_else(|| "infinite".into(), |o| o.to_string()),
        observed: observed_order,
        status: order_status,
    });
    if let Some(expected) = predicted.abelian() {
        checks.push(Check {
            name: "abelianization".into(),
            expected: expected.to_string(),
            observed: abelian.to_string(),
            status: pass_if(expected == abelian),
        });
    }
    Ok(ComponentVerification {
        vertices: set,
        colour,
        predicted,
        presentation: p.to_text(),
        abelian,
        enumeration,
        checks,
    })
}

fn pass_if(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}
