//! Fundamental groups of `G`, `K`, the spin covers and the flag varieties
//! `G/P_J`, assembled from the parity graph and cross-checked against the
//! presentation engine.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::adm::{AdmError, AdmGraph, Colour, KappaColouring};
use crate::cartan::{CartanMatrix, HypothesisReport};
use crate::fpgroup::{self, AbelianInvariants, EnumerationResult, FpError, Presentation};

/// Resource limits for the enumerating parts of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_cosets: usize,
    pub max_elements: usize,
    /// Spin colourings listed in a full report.
    pub max_kappa: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_cosets: fpgroup::DEFAULT_MAX_COSETS,
            max_elements: crate::coxeter::DEFAULT_ELEMENT_CAP,
            max_kappa: 1024,
        }
    }
}

/// `Z^free_rank x C2^c2_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Pi1Type {
    #[serde(rename = "z")]
    pub free_rank: usize,
    #[serde(rename = "c2")]
    pub c2_count: usize,
}

impl Pi1Type {
    pub const TRIVIAL: Pi1Type = Pi1Type {
        free_rank: 0,
        c2_count: 0,
    };

    pub fn new(free_rank: usize, c2_count: usize) -> Pi1Type {
        Pi1Type { free_rank, c2_count }
    }

    pub fn is_trivial(self) -> bool {
        self == Pi1Type::TRIVIAL
    }

    pub fn abelian(self) -> AbelianInvariants {
        AbelianInvariants::new(self.free_rank, &vec![2; self.c2_count])
    }
}

impl Add for Pi1Type {
    type Output = Pi1Type;

    fn add(self, rhs: Pi1Type) -> Pi1Type {
        Pi1Type::new(self.free_rank + rhs.free_rank, self.c2_count + rhs.c2_count)
    }
}

impl std::iter::Sum for Pi1Type {
    fn sum<I: Iterator<Item = Pi1Type>>(iter: I) -> Pi1Type {
        iter.fold(Pi1Type::TRIVIAL, Add::add)
    }
}

impl fmt::Display for Pi1Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        match self.c2_count {
            0 => {}
            1 => parts.push("C2".to_string()),
            c => parts.push(format!("C2^{c}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Pi1Error {
    #[error("the diagram is reducible with {} irreducible factors; use the product form", .factors.len())]
    Reducible { factors: Vec<Vec<usize>> },
    #[error("the matrix is neither symmetrizable nor two-spherical, so the Bruhat decomposition is not known to be a CW decomposition (override with force)")]
    HypothesisRefused(HypothesisReport),
    #[error(transparent)]
    Adm(#[from] AdmError),
    #[error(transparent)]
    Fp(#[from] FpError),
}

type Result<T> = std::result::Result<T, Pi1Error>;

/// Refuses unless `m` is symmetrizable or two-spherical, or `force` is set.
pub fn check_gate(m: &CartanMatrix, force: bool) -> Result<()> {
    if force || m.is_symmetrizable() || m.is_two_spherical() {
        Ok(())
    } else {
        Err(Pi1Error::HypothesisRefused(m.hypotheses()))
    }
}

fn require_irreducible(m: &CartanMatrix) -> Result<()> {
    let factors = m.irreducible_components();
    if factors.len() > 1 {
        return Err(Pi1Error::Reducible { factors });
    }
    Ok(())
}

/// What one component of the parity graph contributes to `π₁(G)`.
pub fn contribution(colour: Colour) -> Pi1Type {
    match colour {
        Colour::Red => Pi1Type::TRIVIAL,
        Colour::Green => Pi1Type::new(1, 0),
        Colour::Blue => Pi1Type::new(0, 1),
    }
}

fn closed_form(m: &CartanMatrix) -> Pi1Type {
    AdmGraph::build(m)
        .components()
        .iter()
        .map(|c| contribution(c.colour))
        .sum()
}

/// `π₁(G) = Z^{n_g} x C2^{n_b}` for irreducible `m`.
pub fn pi1_group(m: &CartanMatrix, force: bool) -> Result<Pi1Type> {
    require_irreducible(m)?;
    check_gate(m, force)?;
    Ok(closed_form(m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor {
    /// 1-based.
    pub vertices: Vec<usize>,
    pub pi1: Pi1Type,
}

/// Per irreducible factor answers of a possibly reducible matrix, and their
/// product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductAnswer {
    pub factors: Vec<Factor>,
    pub product: Pi1Type,
}

pub fn pi1_group_product(m: &CartanMatrix, force: bool) -> Result<ProductAnswer> {
    let mut factors = Vec::new();
    for vertices in m.irreducible_components() {
        let sub = m.submatrix(&vertices).expect("component indices are in range");
        check_gate(&sub, force)?;
        factors.push(Factor {
            vertices: vertices.iter().map(|v| v + 1).collect(),
            pi1: closed_form(&sub),
        });
    }
    let product = factors.iter().map(|f| f.pi1).sum();
    Ok(ProductAnswer { factors, product })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MaximalCompact {
    #[serde(flatten)]
    pub pi1: Pi1Type,
    /// Set when `m` is not symmetrizable: the equivalence `K ≃ G` is only
    /// established in the symmetrizable case.
    pub caveat: bool,
}

/// `π₁(K)`, equal to `π₁(G)`.
pub fn pi1_maximal_compact(m: &CartanMatrix, force: bool) -> Result<MaximalCompact> {
    let pi1 = pi1_group(m, force)?;
    Ok(MaximalCompact {
        pi1,
        caveat: !m.is_symmetrizable(),
    })
}

/// `π₁(Spin(Π,κ)) = Z^{n_g} x C2^{n_b,κ=1}`.
pub fn pi1_spin(m: &CartanMatrix, kappa: &KappaColouring, force: bool) -> Result<Pi1Type> {
    require_irreducible(m)?;
    check_gate(m, force)?;
    spin_of(&AdmGraph::build(m), kappa)
}

fn spin_of(g: &AdmGraph, kappa: &KappaColouring) -> Result<Pi1Type> {
    let counts = g.counts(Some(kappa))?;
    Ok(Pi1Type::new(
        counts.green,
        counts.blue_kappa_one.expect("kappa was supplied"),
    ))
}

/// `2^(n - |J|)`.
pub fn covering_degree(n: usize, set: &[usize]) -> BigUint {
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    BigUint::one() << n.saturating_sub(set.len())
}

/// Order of a group as far as it could be decided.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GroupOrder {
    Finite { order: usize },
    /// The abelianization has positive rank.
    Infinite,
    /// Enumeration hit the coset cap.
    Exhausted { limit: usize },
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Finite { order } => write!(f, "{order}"),
            GroupOrder::Infinite => f.write_str("infinite"),
            GroupOrder::Exhausted { limit } => write!(f, "unknown (coset cap {limit} reached)"),
        }
    }
}

/// Decides the order of `p`: infinite from the abelianization, otherwise by
/// coset enumeration.
pub fn group_order(p: &Presentation, abelian: &AbelianInvariants, max_cosets: usize) -> Result<GroupOrder> {
    if abelian.free_rank > 0 {
        return Ok(GroupOrder::Infinite);
    }
    Ok(match fpgroup::todd_coxeter(p, &[], max_cosets)? {
        EnumerationResult::Finite { index } => GroupOrder::Finite { order: index },
        EnumerationResult::Exhausted { limit } => GroupOrder::Exhausted { limit },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagReport {
    /// 0-based, sorted.
    #[serde(skip)]
    pub set: Vec<usize>,
    #[serde(skip)]
    pub presentation: Presentation,
    pub abelian: AbelianInvariants,
    pub order: GroupOrder,
    /// `C2^(n-|J|)` for simply-laced `m` and non-empty `J`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<Pi1Type>,
}

impl FlagReport {
    /// Whether the closed form (if any) agrees with the computed invariants.
    pub fn consistent(&self) -> bool {
        match self.closed_form {
            None => true,
            Some(c) => {
                let order_ok = match &self.order {
                    GroupOrder::Finite { order } => BigUint::from(*order) == BigUint::one() << c.c2_count,
                    GroupOrder::Infinite => false,
                    GroupOrder::Exhausted { .. } => true,
                };
                c.abelian() == self.abelian && order_ok
            }
        }
    }
}

/// `π₁(G/P_J)` through its presentation.
pub fn pi1_flag(m: &CartanMatrix, set: &[usize], caps: Caps, force: bool) -> Result<FlagReport> {
    check_gate(m, force)?;
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    let presentation = fpgroup::flag_presentation(m, &set)?;
    let abelian = fpgroup::abelianization(&presentation);
    let order = group_order(&presentation, &abelian, caps.max_cosets)?;
    let closed_form = (m.is_simply_laced() && !set.is_empty() && m.is_irreducible())
        .then(|| Pi1Type::new(0, m.rank() - set.len()));
    Ok(FlagReport {
        set,
        presentation,
        abelian,
        order,
        closed_form,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentRow {
    /// 1-based.
    pub vertices: Vec<usize>,
    pub colour: Colour,
    pub contribution: Pi1Type,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpinRow {
    pub kappa: String,
    #[serde(flatten)]
    pub pi1: Pi1Type,
}

#[derive(Debug, Clone, Serialize)]
pub struct Pi1Report {
    pub hypotheses: HypothesisReport,
    pub components: Vec<ComponentRow>,
    #[serde(rename = "pi1_G")]
    pub pi1_g: Pi1Type,
    #[serde(rename = "pi1_K")]
    pub pi1_k: MaximalCompact,
    /// Present only for reducible input, whose answer is the product.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Factor>>,
    pub spin: Vec<SpinRow>,
    /// False when the colourings were cut at [`Caps::max_kappa`].
    pub spin_complete: bool,
    /// `J = ∅` first, then the singletons; serialized as a map keyed by the
    /// 1-based set, e.g. `{}` or `{2}`.
    #[serde(serialize_with = "flags_by_key")]
    pub flags: Vec<FlagReport>,
}

fn flags_by_key<S: serde::Serializer>(flags: &[FlagReport], s: S) -> std::result::Result<S::Ok, S::Error> {
    let map: BTreeMap<String, &FlagReport> = flags
        .iter()
        .map(|f| (crate::format_index_set(&f.set), f))
        .collect();
    map.serialize(s)
}

impl Pi1Report {
    pub fn flag(&self, set: &[usize]) -> Option<&FlagReport> {
        self.flags.iter().find(|f| f.set == set)
    }

    /// Some flag order could not be decided within the coset cap.
    pub fn exhausted(&self) -> bool {
        self.flags
            .iter()
            .any(|f| matches!(f.order, GroupOrder::Exhausted { .. }))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Everything at once: hypotheses, component table, `G`, `K`, spin covers and
/// the flag varieties for `J = ∅` and every singleton `J`.
pub fn full_report(m: &CartanMatrix, caps: Caps, force: bool) -> Result<Pi1Report> {
    let product = pi1_group_product(m, force)?;
    let reducible = product.factors.len() > 1;
    let g = AdmGraph::build(m);
    let components: Vec<ComponentRow> = g
        .components()
        .iter()
        .map(|c| ComponentRow {
            vertices: c.vertices.iter().map(|v| v + 1).collect(),
            colour: c.colour,
            contribution: contribution(c.colour),
        })
        .collect();
    let pi1_g: Pi1Type = components.iter().map(|c| c.contribution).sum();
    debug_assert_eq!(pi1_g, product.product);

    let free = g.free_components().len();
    let spin_complete = free < usize::BITS as usize && (1usize << free) <= caps.max_kappa;
    let kappas = if spin_complete {
        g.enumerate_kappa()
    } else {
        vec![g.constant_kappa(1), g.constant_kappa(2)]
    };
    let spin = kappas
        .iter()
        .map(|k| {
            Ok(SpinRow {
                kappa: k.to_bits(&g),
                pi1: spin_of(&g, k)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let flags = std::iter::once(Vec::new())
        .chain((0..m.rank()).map(|i| vec![i]))
        .map(|set| pi1_flag(m, &set, caps, force))
        .collect::<Result<Vec<_>>>()?;

    Ok(Pi1Report {
        hypotheses: m.hypotheses(),
        components,
        pi1_g,
        pi1_k: MaximalCompact {
            pi1: pi1_g,
            caveat: !m.is_symmetrizable(),
        },
        factors: reducible.then_some(product.factors),
        spin,
        spin_complete,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcm(name: &str) -> CartanMatrix {
        CartanMatrix::from_named(name).unwrap()
    }

    #[test]
    fn rendering() {
        assert_eq!(Pi1Type::TRIVIAL.to_string(), "1");
        assert_eq!(Pi1Type::new(1, 0).to_string(), "Z");
        assert_eq!(Pi1Type::new(0, 1).to_string(), "C2");
        assert_eq!(Pi1Type::new(2, 2).to_string(), "Z^2 x C2^2");
        assert_eq!(
            serde_json::to_value(Pi1Type::new(1, 0)).unwrap(),
            serde_json::json!({"z": 1, "c2": 0})
        );
    }

    #[test]
    fn group_examples() {
        assert_eq!(pi1_group(&gcm("A1"), false).unwrap(), Pi1Type::new(1, 0));
        for n in 2..=6 {
            assert_eq!(pi1_group(&gcm(&format!("C{n}")), false).unwrap(), Pi1Type::new(1, 0));
        }
        assert_eq!(pi1_group(&gcm("E10"), false).unwrap(), Pi1Type::new(0, 1));
        assert_eq!(pi1_group(&gcm("G2"), false).unwrap(), Pi1Type::new(0, 1));
        assert_eq!(pi1_group(&crate::cartan::rank16_example(), false).unwrap(), Pi1Type::new(2, 2));
    }

    #[test]
    fn compact_examples() {
        for name in ["A2", "A5", "F4"] {
            let k = pi1_maximal_compact(&gcm(name), false).unwrap();
            assert_eq!(k.pi1, Pi1Type::new(0, 1));
            assert!(!k.caveat);
        }
        assert_eq!(pi1_maximal_compact(&gcm("B2"), false).unwrap().pi1, Pi1Type::new(1, 0));
        // two-spherical but not symmetrizable
        let m = CartanMatrix::new(vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-2, -1, 2]]).unwrap();
        assert!(!m.is_symmetrizable() && m.is_two_spherical());
        assert!(pi1_maximal_compact(&m, false).unwrap().caveat);
    }

    #[test]
    fn gate() {
        let m = CartanMatrix::new(vec![vec![2, -3, -1], vec![-2, 2, -1], vec![-1, -1, 2]]).unwrap();
        assert!(!m.is_symmetrizable() && !m.is_two_spherical());
        assert!(matches!(pi1_group(&m, false), Err(Pi1Error::HypothesisRefused(_))));
        assert!(pi1_group(&m, true).is_ok());
        let affine = gcm("A1~");
        assert!(!affine.is_two_spherical() && affine.is_symmetrizable());
        assert!(pi1_group(&affine, false).is_ok());
    }

    #[test]
    fn reducible_input() {
        let m = CartanMatrix::new(vec![vec![2, 0], vec![0, 2]]).unwrap();
        assert!(matches!(pi1_group(&m, false), Err(Pi1Error::Reducible { .. })));
        let p = pi1_group_product(&m, false).unwrap();
        assert_eq!(p.product, Pi1Type::new(2, 0));
        assert_eq!(p.factors.len(), 2);
    }

    #[test]
    fn spin_examples() {
        for name in ["A2", "A4", "D4", "E6", "E10"] {
            let m = gcm(name);
            let g = AdmGraph::build(&m);
            assert_eq!(g.enumerate_kappa().len(), 2);
            assert_eq!(pi1_spin(&m, &g.constant_kappa(2), false).unwrap(), Pi1Type::TRIVIAL);
            assert_eq!(pi1_spin(&m, &g.constant_kappa(1), false).unwrap(), Pi1Type::new(0, 1));
        }
        let c3 = gcm("C3");
        let g = AdmGraph::build(&c3);
        for k in g.enumerate_kappa() {
            assert_eq!(pi1_spin(&c3, &k, false).unwrap(), Pi1Type::new(1, 0));
        }
        let bad = KappaColouring::from_values(vec![2, 2]);
        assert!(matches!(pi1_spin(&c3, &bad, false), Err(Pi1Error::Adm(_))));
    }

    #[test]
    fn flag_examples() {
        let a3 = gcm("A3");
        let f = pi1_flag(&a3, &[0], Caps::default(), false).unwrap();
        assert_eq!(f.closed_form, Some(Pi1Type::new(0, 2)));
        assert_eq!(f.order, GroupOrder::Finite { order: 4 });
        assert!(f.consistent());
        let all = pi1_flag(&a3, &[0, 1, 2], Caps::default(), false).unwrap();
        assert_eq!(all.order, GroupOrder::Finite { order: 1 });
        let b3 = pi1_flag(&gcm("B3"), &[], Caps::default(), false).unwrap();
        assert_eq!(b3.order, GroupOrder::Finite { order: 16 });
        assert_eq!(b3.closed_form, None);
        let a1 = pi1_flag(&gcm("A1"), &[], Caps::default(), false).unwrap();
        assert_eq!(a1.order, GroupOrder::Infinite);
        let c2 = pi1_flag(&gcm("C2"), &[], Caps::default(), false).unwrap();
        assert_eq!(c2.order, GroupOrder::Infinite);
    }

    #[test]
    fn covering_degrees() {
        assert_eq!(covering_degree(3, &[]), BigUint::from(8u8));
        assert_eq!(covering_degree(3, &[0, 1, 2]), BigUint::one());
        assert_eq!(covering_degree(2, &[0]), BigUint::from(2u8));
    }

    #[test]
    fn reports() {
        let d4 = full_report(&gcm("D4"), Caps::default(), false).unwrap();
        assert_eq!(d4.pi1_g, Pi1Type::new(0, 1));
        assert_eq!(d4.spin.len(), 2);
        assert_eq!(d4.spin[1].pi1, Pi1Type::TRIVIAL);
        assert_eq!(d4.flags.len(), 5);
        assert_eq!(d4.flag(&[1]).unwrap().abelian, AbelianInvariants::new(0, &[2, 2, 2]));
        assert!(d4.flags.iter().all(FlagReport::consistent));
        assert!(d4.to_json()["flags"]["{2}"].is_object());
        let json = d4.to_json();
        assert_eq!(json["pi1_G"], serde_json::json!({"z": 0, "c2": 1}));
        assert_eq!(json["pi1_K"]["caveat"], serde_json::json!(false));

        let g2 = full_report(&gcm("G2"), Caps::default(), false).unwrap();
        assert_eq!(g2.pi1_g, Pi1Type::new(0, 1));

        let x = full_report(&crate::cartan::rank16_example(), Caps::default(), false).unwrap();
        assert_eq!(x.pi1_g, Pi1Type::new(2, 2));
        assert_eq!(x.flag(&[]).unwrap().order, GroupOrder::Infinite);
    }
}
