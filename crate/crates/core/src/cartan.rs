//! Generalized Cartan matrices.
//!
//! Entry `a[i][j]` is the pairing of the `i`-th simple coroot with the `j`-th
//! simple root. Indices are 0-based in the library API and 1-based in every
//! text format and message.

mod named;
mod parse;

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use named::rank16_example;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invariant(InvariantViolation),
    #[error("unknown type name `{0}`")]
    UnknownName(String),
    #[error("rank {rank} is out of range for type {family}")]
    RankOutOfRange { family: String, rank: usize },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
}

/// Which defining property of a generalized Cartan matrix failed, with the
/// offending entry (1-based in the message).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantViolation {
    EmptyMatrix,
    Diagonal { i: usize, value: i64 },
    PositiveOffDiagonal { i: usize, j: usize, value: i64 },
    ZeroSymmetry { i: usize, j: usize, value: i64 },
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InvariantViolation::EmptyMatrix => write!(f, "rank must be positive"),
            InvariantViolation::Diagonal { i, value } => write!(
                f,
                "diagonal violated: a[{0}][{0}] = {1}, expected 2",
                i + 1,
                value
            ),
            InvariantViolation::PositiveOffDiagonal { i, j, value } => write!(
                f,
                "sign violated: a[{}][{}] = {} is positive",
                i + 1,
                j + 1,
                value
            ),
            InvariantViolation::ZeroSymmetry { i, j, value } => write!(
                f,
                "zero-symmetry violated: a[{}][{}] = {} but a[{}][{}] = 0",
                i + 1,
                j + 1,
                value,
                j + 1,
                i + 1
            ),
        }
    }
}

/// Sign `(-1)^a[i][j]` of a Cartan entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn of(entry: i64) -> Parity {
        if entry.rem_euclid(2) == 0 {
            Parity::Plus
        } else {
            Parity::Minus
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Parity::Plus => 1,
            Parity::Minus => -1,
        }
    }
}

impl std::ops::Mul for Parity {
    type Output = Parity;

    fn mul(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Plus
        } else {
            Parity::Minus
        }
    }
}

/// Integer matrix with 2 on the diagonal, non-positive entries elsewhere and
/// a symmetric zero pattern. Immutable once constructed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    rank: usize,
    entries: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub irreducible: bool,
    pub symmetrizable: bool,
    pub two_spherical: bool,
    pub spherical: bool,
}

impl CartanMatrix {
    /// Validates the three defining invariants.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let rank = rows.len();
        if rank == 0 {
            return Err(CartanError::Invariant(InvariantViolation::EmptyMatrix));
        }
        let mut entries = Vec::with_capacity(rank * rank);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(CartanError::Syntax {
                    line: i + 1,
                    column: 1,
                    message: format!("row {} has {} entries, expected {}", i + 1, row.len(), rank),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::from_flat(rank, entries)
    }

    pub(crate) fn from_flat(rank: usize, entries: Vec<i64>) -> Result<Self, CartanError> {
        debug_assert_eq!(entries.len(), rank * rank);
        let m = CartanMatrix { rank, entries };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), CartanError> {
        let n = self.rank;
        if n == 0 {
            return Err(CartanError::Invariant(InvariantViolation::EmptyMatrix));
        }
        for i in 0..n {
            let d = self.a(i, i);
            if d != 2 {
                return Err(CartanError::Invariant(InvariantViolation::Diagonal {
                    i,
                    value: d,
                }));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let v = self.a(i, j);
                if v > 0 {
                    return Err(CartanError::Invariant(
                        InvariantViolation::PositiveOffDiagonal { i, j, value: v },
                    ));
                }
                if v != 0 && self.a(j, i) == 0 {
                    return Err(CartanError::Invariant(InvariantViolation::ZeroSymmetry {
                        i,
                        j,
                        value: v,
                    }));
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, CartanError> {
        parse::parse_matrix(text)
    }

    pub fn from_named(name: &str) -> Result<Self, CartanError> {
        named::from_named(name)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Entry `a[i][j]`, 0-based. Panics when out of range.
    #[inline]
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.rank + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    pub fn parity(&self, i: usize, j: usize) -> Result<Parity, CartanError> {
        for index in [i, j] {
            if index >= self.rank {
                return Err(CartanError::IndexOutOfRange {
                    index: index + 1,
                    rank: self.rank,
                });
            }
        }
        Ok(self.epsilon(i, j))
    }

    #[inline]
    pub(crate) fn epsilon(&self, i: usize, j: usize) -> Parity {
        Parity::of(self.a(i, j))
    }

    /// Unordered pairs `{i, j}` with a non-zero entry, i.e. the Dynkin diagram edges.
    pub fn diagram_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.rank;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .filter(move |&(i, j)| self.a(i, j) != 0)
    }

    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank).filter(move |&j| j != i && self.a(i, j) != 0)
    }

    /// Connected components of the Dynkin diagram, each sorted, ordered by
    /// smallest vertex.
    pub fn irreducible_components(&self) -> Vec<Vec<usize>> {
        let n = self.rank;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Principal submatrix on `indices` (in the given order).
    pub fn submatrix(&self, indices: &[usize]) -> Result<CartanMatrix, CartanError> {
        for &i in indices {
            if i >= self.rank {
                return Err(CartanError::IndexOutOfRange {
                    index: i + 1,
                    rank: self.rank,
                });
            }
        }
        let entries = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.a(i, j))
            .collect();
        CartanMatrix::from_flat(indices.len(), entries)
    }

    /// Simultaneous row/column relabelling: new index `k` is old index `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<CartanMatrix, CartanError> {
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (0..self.rank).collect::<Vec<_>>() {
            return Err(CartanError::IndexOutOfRange {
                index: perm.iter().copied().max().unwrap_or(0) + 1,
                rank: self.rank,
            });
        }
        self.submatrix(perm)
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible_components().len() == 1
    }

    pub fn is_two_spherical(&self) -> bool {
        let n = self.rank;
        (0..n).all(|i| (0..n).all(|j| i == j || self.a(i, j) * self.a(j, i) <= 3))
    }

    pub fn is_simply_laced(&self) -> bool {
        let n = self.rank;
        (0..n).all(|i| (0..n).all(|j| i == j || self.a(i, j) >= -1))
    }

    /// A positive diagonal `d` with `d_i a[i][j] = d_j a[j][i]`, if one exists.
    ///
    /// Ratios are propagated along a spanning forest of the diagram; every
    /// non-tree edge is then checked for consistency.
    pub fn symmetrizer(&self) -> Option<Vec<BigRational>> {
        let n = self.rank;
        let mut d: Vec<Option<BigRational>> = vec![None; n];
        for root in 0..n {
            if d[root].is_some() {
                continue;
            }
            d[root] = Some(BigRational::one());
            let mut queue = VecDeque::from([root]);
            while let Some(i) = queue.pop_front() {
                let di = d[i].clone().expect("visited vertex has a value");
                for j in self.neighbours(i) {
                    let ratio = BigRational::new(
                        BigInt::from(self.a(i, j)),
                        BigInt::from(self.a(j, i)),
                    );
                    let dj = &di * ratio;
                    match &d[j] {
                        None => {
                            d[j] = Some(dj);
                            queue.push_back(j);
                        }
                        Some(existing) => {
                            if *existing != dj {
                                return None;
                            }
                        }
                    }
                }
            }
        }
        Some(d.into_iter().map(|x| x.expect("all vertices visited")).collect())
    }

    pub fn is_symmetrizable(&self) -> bool {
        self.symmetrizer().is_some()
    }

    /// Finite Weyl group. A GCM is of finite type iff it is symmetrizable with
    /// a positive definite symmetrization; checked by exact LDLᵀ pivots.
    #[allow(clippy::needless_range_loop)]
    pub fn is_spherical(&self) -> bool {
        let Some(d) = self.symmetrizer() else {
            return false;
        };
        let n = self.rank;
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| &d[i] * BigRational::from_integer(BigInt::from(self.a(i, j))))
                    .collect()
            })
            .collect();
        for k in 0..n {
            let pivot = m[k][k].clone();
            if !pivot.is_positive() {
                return false;
            }
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let factor = &m[i][k] / &pivot;
                for j in k..n {
                    let delta = &factor * &m[k][j];
                    m[i][j] -= delta;
                }
            }
        }
        true
    }

    pub fn hypotheses(&self) -> HypothesisReport {
        HypothesisReport {
            irreducible: self.is_irreducible(),
            symmetrizable: self.is_symmetrizable(),
            two_spherical: self.is_two_spherical(),
            spherical: self.is_spherical(),
        }
    }

    /// Plain text form accepted by [`CartanMatrix::parse`].
    pub fn to_plain(&self) -> String {
        let mut out = format!("{}\n", self.rank);
        for row in self.entries.chunks(self.rank) {
            let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "size": self.rank, "entries": self.rows() })
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for (r, row) in self.entries.chunks(self.rank).enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> CartanMatrix {
        CartanMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn invariants_are_checked() {
        let err = CartanMatrix::new(vec![vec![2, -1], vec![0, 2]]).unwrap_err();
        assert_eq!(
            err,
            CartanError::Invariant(InvariantViolation::ZeroSymmetry { i: 0, j: 1, value: -1 })
        );
        assert!(err.to_string().contains("a[1][2] = -1 but a[2][1] = 0"));
        assert!(matches!(
            CartanMatrix::new(vec![vec![2, 1], vec![1, 2]]),
            Err(CartanError::Invariant(InvariantViolation::PositiveOffDiagonal { .. }))
        ));
        assert!(matches!(
            CartanMatrix::new(vec![vec![1]]),
            Err(CartanError::Invariant(InvariantViolation::Diagonal { .. }))
        ));
        assert!(CartanMatrix::new(vec![]).is_err());
    }

    #[test]
    fn parity_values() {
        let a2 = CartanMatrix::from_named("A2").unwrap();
        assert_eq!(a2.parity(0, 1).unwrap(), Parity::Minus);
        let b3 = CartanMatrix::from_named("B3").unwrap();
        assert_eq!(b3.parity(2, 1).unwrap(), Parity::Plus);
        assert_eq!(b3.parity(1, 2).unwrap(), Parity::Minus);
        for i in 0..3 {
            assert_eq!(b3.parity(i, i).unwrap(), Parity::Plus);
        }
        assert_eq!(
            b3.parity(3, 0),
            Err(CartanError::IndexOutOfRange { index: 4, rank: 3 })
        );
    }

    #[test]
    fn symmetrizability() {
        assert!(CartanMatrix::from_named("A5").unwrap().is_symmetrizable());
        assert!(m(&[&[2, -2], &[-2, 2]]).is_symmetrizable());
        assert!(!m(&[&[2, -1, -2], &[-2, 2, -1], &[-1, -2, 2]]).is_symmetrizable());
        assert!(CartanMatrix::from_named("G2").unwrap().is_symmetrizable());
        // cycle with consistent products
        assert!(m(&[&[2, -1, -1], &[-2, 2, -1], &[-2, -1, 2]]).is_symmetrizable());
    }

    #[test]
    fn two_spherical_and_irreducible() {
        assert!(CartanMatrix::from_named("G2").unwrap().is_two_spherical());
        assert!(!m(&[&[2, -2], &[-2, 2]]).is_two_spherical());
        assert!(CartanMatrix::from_named("E10").unwrap().is_two_spherical());
        assert!(CartanMatrix::from_named("A3").unwrap().is_irreducible());
        assert!(!m(&[&[2, 0], &[0, 2]]).is_irreducible());
        assert!(CartanMatrix::from_named("E10").unwrap().is_irreducible());
    }

    #[test]
    fn spherical_detection() {
        for name in ["A1", "A4", "B3", "C4", "D5", "E6", "E7", "E8", "F4", "G2"] {
            assert!(CartanMatrix::from_named(name).unwrap().is_spherical(), "{name}");
        }
        for name in ["A1~", "A3~", "E9", "E10", "G2~", "F4~"] {
            assert!(!CartanMatrix::from_named(name).unwrap().is_spherical(), "{name}");
        }
        assert!(!m(&[&[2, -1, -2], &[-2, 2, -1], &[-1, -2, 2]]).is_spherical());
    }

    #[test]
    fn components_and_submatrix() {
        let x = m(&[&[2, 0, -1], &[0, 2, 0], &[-1, 0, 2]]);
        assert_eq!(x.irreducible_components(), vec![vec![0, 2], vec![1]]);
        assert_eq!(x.submatrix(&[0, 2]).unwrap(), CartanMatrix::from_named("A2").unwrap());
        let p = x.permuted(&[1, 0, 2]).unwrap();
        assert_eq!(p.a(1, 2), -1);
        assert!(x.permuted(&[0, 0, 1]).is_err());
    }

    #[test]
    fn display_is_aligned() {
        let g2 = CartanMatrix::from_named("G2").unwrap();
        assert_eq!(g2.to_string(), "[ 2 -1]\n[-3  2]");
    }
}
