//! Weyl groups acting on the root lattice.
//!
//! An element is stored as its integer matrix on the simple-root basis (the
//! `j`-th column is the image of `α_j`) together with the matrix of its
//! inverse. The action is faithful for crystallographic Coxeter groups, so
//! the matrix is the element's identity. All arithmetic is checked and
//! overflow is reported as an error: root coordinates grow quickly in
//! indefinite types.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::cartan::CartanMatrix;

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("integer overflow in root lattice arithmetic")]
    Overflow,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element cap of {cap} exceeded")]
    ElementCap { cap: usize },
    #[error("generator {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("element {word} has a right descent in the parabolic set")]
    NotMinimal { word: String },
}

type Result<T> = std::result::Result<T, CoxeterError>;

/// Coordinates in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn simple(rank: usize, i: usize) -> RootVector {
        let mut v = vec![0; rank];
        v[i] = 1;
        RootVector(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c != 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&c| c <= 0) && self.0.iter().any(|&c| c != 0)
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A word in the simple reflections, 0-based letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CoxeterWord(pub Vec<usize>);

impl CoxeterWord {
    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses a 1-based comma list (`1,2,1`); `e` or an empty string is the identity.
    pub fn parse(text: &str, rank: usize) -> Result<CoxeterWord> {
        let t = text.trim();
        if t.is_empty() || t == "e" {
            return Ok(CoxeterWord::default());
        }
        let mut letters = Vec::new();
        for piece in t.split(',') {
            let v: usize = piece
                .trim()
                .parse()
                .map_err(|_| CoxeterError::IndexOutOfRange { index: 0, rank })?;
            if v == 0 || v > rank {
                return Err(CoxeterError::IndexOutOfRange { index: v, rank });
            }
            letters.push(v - 1);
        }
        Ok(CoxeterWord(letters))
    }
}

impl fmt::Display for CoxeterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct WeylElement {
    rank: usize,
    action: Vec<i64>,
    inverse: Vec<i64>,
    length: usize,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.action == other.action
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.action.hash(state);
    }
}

fn identity_matrix(n: usize) -> Vec<i64> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

impl WeylElement {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// Row-major action matrix.
    pub fn matrix(&self) -> &[i64] {
        &self.action
    }

    /// Image of the simple root `α_i`: column `i` of the action matrix.
    fn image_of_simple(m: &[i64], n: usize, i: usize) -> impl Iterator<Item = i64> + '_ {
        (0..n).map(move |r| m[r * n + i])
    }

    fn column_is_negative(m: &[i64], n: usize, i: usize) -> bool {
        // images of simple roots are sign-coherent
        Self::image_of_simple(m, n, i)
            .find(|&c| c != 0)
            .map(|c| c < 0)
            .unwrap_or(false)
    }

    /// `σ_i` sends `α_i` to a negative root under this element.
    pub fn has_right_descent(&self, i: usize) -> bool {
        Self::column_is_negative(&self.action, self.rank, i)
    }

    pub fn has_left_descent(&self, i: usize) -> bool {
        Self::column_is_negative(&self.inverse, self.rank, i)
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            rank: self.rank,
            action: self.inverse.clone(),
            inverse: self.action.clone(),
            length: self.length,
        }
    }
}

/// The Weyl group of a generalized Cartan matrix, generated by
/// `σ_i(α_j) = α_j - a[i][j] α_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylGroup {
    cartan: CartanMatrix,
}

impl WeylGroup {
    pub fn new(cartan: &CartanMatrix) -> WeylGroup {
        WeylGroup {
            cartan: cartan.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn identity(&self) -> WeylElement {
        let n = self.rank();
        WeylElement {
            rank: n,
            action: identity_matrix(n),
            inverse: identity_matrix(n),
            length: 0,
        }
    }

    /// Matrix of the simple reflection `σ_i`.
    pub fn reflection_matrix(&self, i: usize) -> Vec<i64> {
        let n = self.rank();
        let mut m = identity_matrix(n);
        for j in 0..n {
            m[i * n + j] -= self.cartan.a(i, j);
        }
        m
    }

    pub fn generator(&self, i: usize) -> Result<WeylElement> {
        self.check_index(i)?;
        let m = self.reflection_matrix(i);
        Ok(WeylElement {
            rank: self.rank(),
            action: m.clone(),
            inverse: m,
            length: 1,
        })
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.rank() {
            return Err(CoxeterError::IndexOutOfRange {
                index: i + 1,
                rank: self.rank(),
            });
        }
        Ok(())
    }

    fn check_element(&self, w: &WeylElement) -> Result<()> {
        if w.rank != self.rank() {
            return Err(CoxeterError::DimensionMismatch {
                expected: self.rank(),
                got: w.rank,
            });
        }
        Ok(())
    }

    /// `m ← m σ_i`: column `j` becomes `col_j - a[i][j] col_i`.
    fn right_reflect(&self, m: &mut [i64], i: usize) -> Result<()> {
        let n = self.rank();
        let col: Vec<i64> = (0..n).map(|r| m[r * n + i]).collect();
        for j in 0..n {
            let a = self.cartan.a(i, j);
            if a == 0 {
                continue;
            }
            for r in 0..n {
                let delta = a.checked_mul(col[r]).ok_or(CoxeterError::Overflow)?;
                m[r * n + j] = m[r * n + j]
                    .checked_sub(delta)
                    .ok_or(CoxeterError::Overflow)?;
            }
        }
        Ok(())
    }

    /// `m ← σ_i m`: row `i` becomes `row_i - Σ_k a[i][k] row_k`.
    fn left_reflect(&self, m: &mut [i64], i: usize) -> Result<()> {
        let n = self.rank();
        let mut row = vec![0i64; n];
        for (c, slot) in row.iter_mut().enumerate() {
            let mut acc: i64 = m[i * n + c];
            for k in 0..n {
                let a = self.cartan.a(i, k);
                if a == 0 {
                    continue;
                }
                let delta = a.checked_mul(m[k * n + c]).ok_or(CoxeterError::Overflow)?;
                acc = acc.checked_sub(delta).ok_or(CoxeterError::Overflow)?;
            }
            *slot = acc;
        }
        m[i * n..(i + 1) * n].copy_from_slice(&row);
        Ok(())
    }

    /// `w σ_i`, with the length updated from the sign of `w(α_i)`.
    pub fn right_multiply_generator(&self, w: &WeylElement, i: usize) -> Result<WeylElement> {
        self.check_element(w)?;
        self.check_index(i)?;
        let descent = w.has_right_descent(i);
        let mut action = w.action.clone();
        self.right_reflect(&mut action, i)?;
        let mut inverse = w.inverse.clone();
        self.left_reflect(&mut inverse, i)?;
        Ok(WeylElement {
            rank: w.rank,
            action,
            inverse,
            length: if descent { w.length - 1 } else { w.length + 1 },
        })
    }

    /// `σ_i w`.
    pub fn left_multiply_generator(&self, i: usize, w: &WeylElement) -> Result<WeylElement> {
        self.check_element(w)?;
        self.check_index(i)?;
        let descent = w.has_left_descent(i);
        let mut action = w.action.clone();
        self.left_reflect(&mut action, i)?;
        let mut inverse = w.inverse.clone();
        self.right_reflect(&mut inverse, i)?;
        Ok(WeylElement {
            rank: w.rank,
            action,
            inverse,
            length: if descent { w.length - 1 } else { w.length + 1 },
        })
    }

    pub fn element_from_word(&self, word: &CoxeterWord) -> Result<WeylElement> {
        let mut w = self.identity();
        for &i in word.letters() {
            w = self.right_multiply_generator(&w, i)?;
        }
        Ok(w)
    }

    pub fn act(&self, w: &WeylElement, v: &RootVector) -> Result<RootVector> {
        self.check_element(w)?;
        let n = self.rank();
        if v.0.len() != n {
            return Err(CoxeterError::DimensionMismatch {
                expected: n,
                got: v.0.len(),
            });
        }
        let mut out = vec![0i64; n];
        for (r, slot) in out.iter_mut().enumerate() {
            let mut acc: i64 = 0;
            for c in 0..n {
                let t = w.action[r * n + c]
                    .checked_mul(v.0[c])
                    .ok_or(CoxeterError::Overflow)?;
                acc = acc.checked_add(t).ok_or(CoxeterError::Overflow)?;
            }
            *slot = acc;
        }
        Ok(RootVector(out))
    }

    fn matmul(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
        let n = self.rank();
        let mut out = vec![0i64; n * n];
        for r in 0..n {
            for k in 0..n {
                let x = a[r * n + k];
                if x == 0 {
                    continue;
                }
                for c in 0..n {
                    let t = x.checked_mul(b[k * n + c]).ok_or(CoxeterError::Overflow)?;
                    out[r * n + c] = out[r * n + c]
                        .checked_add(t)
                        .ok_or(CoxeterError::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    /// Counts right-descent stripping steps (least index first) down to the
    /// identity.
    fn length_of(&self, action: &[i64]) -> Result<usize> {
        let n = self.rank();
        let mut m = action.to_vec();
        let id = identity_matrix(n);
        let mut steps = 0;
        while m != id {
            let i = (0..n)
                .find(|&i| WeylElement::column_is_negative(&m, n, i))
                .expect("a non-identity element has a right descent");
            self.right_reflect(&mut m, i)?;
            steps += 1;
        }
        Ok(steps)
    }

    pub fn multiply(&self, u: &WeylElement, w: &WeylElement) -> Result<WeylElement> {
        self.check_element(u)?;
        self.check_element(w)?;
        let action = self.matmul(&u.action, &w.action)?;
        let inverse = self.matmul(&w.inverse, &u.inverse)?;
        let length = self.length_of(&action)?;
        Ok(WeylElement {
            rank: u.rank,
            action,
            inverse,
            length,
        })
    }

    pub fn invert(&self, w: &WeylElement) -> WeylElement {
        w.inverse()
    }

    /// Length recomputed from the action matrix by descent stripping.
    pub fn length(&self, w: &WeylElement) -> Result<usize> {
        self.check_element(w)?;
        self.length_of(&w.action)
    }

    /// Lexicographically least reduced word: repeatedly strip the least left
    /// descent.
    pub fn reduced_word(&self, w: &WeylElement) -> Result<CoxeterWord> {
        self.check_element(w)?;
        let n = self.rank();
        let mut inv = w.inverse.clone();
        let mut letters = Vec::with_capacity(w.length);
        for _ in 0..w.length {
            let i = (0..n)
                .find(|&i| WeylElement::column_is_negative(&inv, n, i))
                .expect("a non-identity element has a left descent");
            letters.push(i);
            self.right_reflect(&mut inv, i)?;
        }
        debug_assert_eq!(inv, identity_matrix(n));
        Ok(CoxeterWord(letters))
    }

    /// `β_k = σ_{i_1} ⋯ σ_{i_{k-1}}(α_{i_k})` for each position of the word.
    pub fn root_sequence(&self, word: &CoxeterWord) -> Result<Vec<RootVector>> {
        let n = self.rank();
        let mut prefix = identity_matrix(n);
        let mut out = Vec::with_capacity(word.len());
        for &i in word.letters() {
            self.check_index(i)?;
            out.push(RootVector(
                WeylElement::image_of_simple(&prefix, n, i).collect(),
            ));
            self.right_reflect(&mut prefix, i)?;
        }
        Ok(out)
    }

    /// A word is reduced iff every root in its root sequence is positive.
    pub fn is_reduced(&self, word: &CoxeterWord) -> Result<bool> {
        Ok(self.root_sequence(word)?.iter().all(RootVector::is_positive))
    }

    /// Strong Bruhat order. Walks a reduced word of `w` from the right and
    /// strips each letter that is a right descent of (the current) `v`; then
    /// `v ≤ w` iff nothing is left.
    pub fn bruhat_leq(&self, v: &WeylElement, w: &WeylElement) -> Result<bool> {
        self.check_element(v)?;
        self.check_element(w)?;
        if v.length > w.length {
            return Ok(false);
        }
        let word = self.reduced_word(w)?;
        let mut cur = v.clone();
        for &s in word.letters().iter().rev() {
            if cur.length == 0 {
                break;
            }
            if cur.has_right_descent(s) {
                cur = self.right_multiply_generator(&cur, s)?;
            }
        }
        Ok(cur.length == 0)
    }

    /// Weak order: `ℓ(w) = ℓ(v) + ℓ(v⁻¹w)`.
    pub fn weak_leq(&self, v: &WeylElement, w: &WeylElement) -> Result<bool> {
        let quotient = self.multiply(&v.inverse(), w)?;
        Ok(w.length == v.length + quotient.length)
    }

    pub fn is_minimal_rep(&self, w: &WeylElement, parabolic: &[usize]) -> bool {
        parabolic.iter().all(|&j| !w.has_right_descent(j))
    }

    pub fn elements_up_to(&self, max_length: usize, cap: usize) -> Result<Vec<WeylElement>> {
        self.minimal_reps(&[], max_length, cap)
    }

    /// Minimal coset representatives `W^J` of length at most `max_length`,
    /// in breadth-first order. Grown by left multiplication, since `W^J` is
    /// closed under taking suffixes of reduced words.
    pub fn minimal_reps(
        &self,
        parabolic: &[usize],
        max_length: usize,
        cap: usize,
    ) -> Result<Vec<WeylElement>> {
        for &j in parabolic {
            self.check_index(j)?;
        }
        let n = self.rank();
        let id = self.identity();
        let mut seen: HashSet<Vec<i64>> = HashSet::from([id.action.clone()]);
        let mut all = vec![id];
        if cap == 0 {
            return Err(CoxeterError::ElementCap { cap });
        }
        let mut level_start = 0;
        for _ in 0..max_length {
            let level_end = all.len();
            if level_start == level_end {
                break;
            }
            for idx in level_start..level_end {
                for i in 0..n {
                    if all[idx].has_left_descent(i) {
                        continue;
                    }
                    let next = self.left_multiply_generator(i, &all[idx])?;
                    if !self.is_minimal_rep(&next, parabolic) || seen.contains(&next.action) {
                        continue;
                    }
                    if all.len() >= cap {
                        return Err(CoxeterError::ElementCap { cap });
                    }
                    seen.insert(next.action.clone());
                    all.push(next);
                }
            }
            level_start = level_end;
        }
        Ok(all)
    }

    /// Number of Schubert cells of each dimension up to `max_length`.
    pub fn cell_counts(
        &self,
        parabolic: &[usize],
        max_length: usize,
        cap: usize,
    ) -> Result<BTreeMap<usize, usize>> {
        let mut out = BTreeMap::new();
        for w in self.minimal_reps(parabolic, max_length, cap)? {
            *out.entry(w.length).or_insert(0) += 1;
        }
        Ok(out)
    }

    /// Cells in the closure of the cell of `w`: `{x ∈ W^J : x ≤ w}`.
    pub fn closure_cells(
        &self,
        w: &WeylElement,
        parabolic: &[usize],
        cap: usize,
    ) -> Result<Vec<WeylElement>> {
        self.check_element(w)?;
        if !self.is_minimal_rep(w, parabolic) {
            return Err(CoxeterError::NotMinimal {
                word: self.reduced_word(w)?.to_string(),
            });
        }
        let mut out = Vec::new();
        for x in self.minimal_reps(parabolic, w.length, cap)? {
            if self.bruhat_leq(&x, w)? {
                out.push(x);
            }
        }
        Ok(out)
    }
}
