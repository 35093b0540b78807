//! Coset enumeration.

#![allow(clippy::needless_range_loop)]
//!
//! Two strategies share one coset table: HLT (scan and fill every relator at
//! every coset, with a lookahead pass and compaction when the table is full)
//! and Felsch (define one coset at a time and close all consequences through
//! a deduction stack).

use std::collections::VecDeque;

use serde::Serialize;

use super::presentation::{Letter, Presentation, Word};
use super::FpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EnumerationResult {
    /// The table closed with this many cosets.
    Finite { index: usize },
    /// The coset table hit its capacity; nothing can be concluded.
    Exhausted { limit: usize },
}

impl EnumerationResult {
    pub fn index(self) -> Option<usize> {
        match self {
            EnumerationResult::Finite { index } => Some(index),
            EnumerationResult::Exhausted { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    HltLookahead,
    Felsch,
}

const UNDEF: usize = usize::MAX;

struct Full;

fn col(l: Letter) -> usize {
    2 * l.generator + usize::from(l.inverse)
}

struct Table {
    ncols: usize,
    cap: usize,
    rows: Vec<usize>,
    parent: Vec<usize>,
    live: usize,
    queue: VecDeque<usize>,
    deductions: Vec<(usize, usize)>,
    record_deductions: bool,
}

impl Table {
    fn new(gens: usize, cap: usize, record_deductions: bool) -> Table {
        let ncols = 2 * gens;
        Table {
            ncols,
            cap,
            rows: vec![UNDEF; ncols],
            parent: vec![0],
            live: 1,
            queue: VecDeque::new(),
            deductions: Vec::new(),
            record_deductions,
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, coset: usize, c: usize) -> usize {
        self.rows[coset * self.ncols + c]
    }

    #[inline]
    fn set(&mut self, coset: usize, c: usize, v: usize) {
        self.rows[coset * self.ncols + c] = v;
    }

    fn alive(&self, coset: usize) -> bool {
        self.parent[coset] == coset
    }

    fn link(&mut self, a: usize, c: usize, b: usize) {
        self.set(a, c, b);
        self.set(b, c ^ 1, a);
        if self.record_deductions {
            self.deductions.push((a, c));
        }
    }

    fn define(&mut self, coset: usize, c: usize) -> Result<usize, Full> {
        if self.len() >= self.cap {
            return Err(Full);
        }
        let new = self.len();
        self.parent.push(new);
        self.rows.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.live += 1;
        self.link(coset, c, new);
        Ok(new)
    }

    fn rep(&mut self, k: usize) -> usize {
        let mut root = k;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = k;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn merge(&mut self, k: usize, l: usize) {
        let a = self.rep(k);
        let b = self.rep(l);
        if a == b {
            return;
        }
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        self.parent[drop] = keep;
        self.live -= 1;
        self.queue.push_back(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(dead) = self.queue.pop_front() {
            for c in 0..self.ncols {
                let d = self.get(dead, c);
                if d == UNDEF {
                    continue;
                }
                self.set(d, c ^ 1, UNDEF);
                let mu = self.rep(dead);
                let nu = self.rep(d);
                let mu_c = self.get(mu, c);
                if mu_c != UNDEF {
                    self.merge(nu, mu_c);
                } else {
                    let nu_inv = self.get(nu, c ^ 1);
                    if nu_inv != UNDEF {
                        self.merge(mu, nu_inv);
                    } else {
                        self.link(mu, c, nu);
                    }
                }
            }
        }
    }

    /// Traces `word` from `coset` in both directions. With `fill`, defines
    /// new cosets to close the gap; otherwise only a gap of length one is
    /// closed (as a deduction). Returns `Err(Full)` if a definition was
    /// needed but the table is at capacity.
    fn scan(&mut self, coset: usize, word: &[usize], fill: bool) -> Result<(), Full> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = coset;
        let mut i = 0usize;
        let mut b = coset;
        let mut j = word.len() - 1;
        loop {
            while i <= j && self.get(f, word[i]) != UNDEF {
                f = self.get(f, word[i]);
                i += 1;
            }
            if i > j {
                if f != coset {
                    self.coincidence(f, coset);
                }
                return Ok(());
            }
            while j >= i && self.get(b, word[j] ^ 1) != UNDEF {
                b = self.get(b, word[j] ^ 1);
                if j == 0 {
                    // whole word traced backwards; i == 0 here
                    self.coincidence(f, b);
                    return Ok(());
                }
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                self.link(f, word[i], b);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }

    fn first_live_from(&self, start: usize) -> Option<usize> {
        (start..self.len()).find(|&k| self.alive(k))
    }

    /// Renumbers live cosets contiguously, preserving order. Returns the new
    /// index of each old live coset (UNDEF for dead ones).
    fn compact(&mut self) -> Vec<usize> {
        debug_assert!(self.queue.is_empty());
        let mut map = vec![UNDEF; self.len()];
        let mut next = 0;
        for k in 0..self.len() {
            if self.alive(k) {
                map[k] = next;
                next += 1;
            }
        }
        let mut rows = Vec::with_capacity(next * self.ncols);
        for k in 0..self.len() {
            if map[k] == UNDEF {
                continue;
            }
            for c in 0..self.ncols {
                let v = self.get(k, c);
                rows.push(if v == UNDEF { UNDEF } else { map[v] });
            }
        }
        self.rows = rows;
        self.parent = (0..next).collect();
        self.live = next;
        self.deductions.clear();
        map
    }

    fn complete(&self) -> bool {
        (0..self.len())
            .filter(|&k| self.alive(k))
            .all(|k| (0..self.ncols).all(|c| self.get(k, c) != UNDEF))
    }
}

fn encode(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|&l| col(l)).collect()
}

/// Index of the subgroup generated by `subgroup` in the group presented by
/// `p`, or `Exhausted` once more than `max_cosets` cosets are needed at once.
pub fn todd_coxeter_with(
    p: &Presentation,
    subgroup: &[Word],
    max_cosets: usize,
    strategy: Strategy,
) -> Result<EnumerationResult, FpError> {
    if max_cosets == 0 {
        return Err(FpError::ZeroCap);
    }
    let gens = p.generator_count();
    for w in subgroup {
        if let Some(l) = w.letters().iter().find(|l| l.generator >= gens) {
            return Err(FpError::GeneratorOutOfRange {
                index: l.generator,
                count: gens,
            });
        }
    }
    if gens == 0 {
        return Ok(EnumerationResult::Finite { index: 1 });
    }
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| encode(&r.cyclically_reduced()))
        .filter(|r| !r.is_empty())
        .collect();
    let subgroup: Vec<Vec<usize>> = subgroup.iter().map(encode).collect();
    let outcome = match strategy {
        Strategy::HltLookahead => hlt(gens, &relators, &subgroup, max_cosets),
        Strategy::Felsch => felsch(gens, p, &subgroup, max_cosets),
    };
    Ok(outcome)
}

fn hlt(gens: usize, relators: &[Vec<usize>], subgroup: &[Vec<usize>], cap: usize) -> EnumerationResult {
    let mut t = Table::new(gens, cap, false);
    let exhausted = EnumerationResult::Exhausted { limit: cap };
    for w in subgroup {
        if t.scan(0, w, true).is_err() && !lookahead_and_compact(&mut t, relators, &mut 0) {
            return exhausted;
        }
    }
    let mut alpha = 0;
    while alpha < t.len() {
        if !t.alive(alpha) {
            alpha += 1;
            continue;
        }
        let mut stalled = false;
        for r in relators {
            if !t.alive(alpha) {
                break;
            }
            if t.scan(alpha, r, true).is_err() {
                stalled = true;
                break;
            }
        }
        if !stalled && t.alive(alpha) {
            for c in 0..t.ncols {
                if t.get(alpha, c) == UNDEF && t.define(alpha, c).is_err() {
                    stalled = true;
                    break;
                }
            }
        }
        if stalled {
            // retry the same coset after freeing space
            if !lookahead_and_compact(&mut t, relators, &mut alpha) {
                return exhausted;
            }
            continue;
        }
        alpha += 1;
    }
    debug_assert!(t.complete());
    EnumerationResult::Finite { index: t.live }
}

/// Scans every relator at every live coset without defining anything, then
/// compacts. Returns false if no space was recovered. `alpha` is remapped.
fn lookahead_and_compact(t: &mut Table, relators: &[Vec<usize>], alpha: &mut usize) -> bool {
    let before = t.len();
    let mut k = 0;
    while k < t.len() {
        if t.alive(k) {
            for r in relators {
                if !t.alive(k) {
                    break;
                }
                let _ = t.scan(k, r, false);
            }
        }
        k += 1;
    }
    let resume = t.first_live_from(*alpha);
    let map = t.compact();
    *alpha = match resume {
        Some(old) => map[old],
        None => t.len(),
    };
    t.len() < before
}

fn felsch(gens: usize, p: &Presentation, subgroup: &[Vec<usize>], cap: usize) -> EnumerationResult {
    // cyclic conjugates of relators and their inverses, grouped by first column
    let ncols = 2 * gens;
    let mut by_first: Vec<Vec<Vec<usize>>> = vec![Vec::new(); ncols];
    for r in p.relators() {
        let r = r.cyclically_reduced();
        if r.is_empty() {
            continue;
        }
        for base in [r.clone(), r.inverse()] {
            for rot in base.rotations() {
                let enc = encode(&rot);
                let bucket = &mut by_first[enc[0]];
                if !bucket.contains(&enc) {
                    bucket.push(enc);
                }
            }
        }
    }
    let mut t = Table::new(gens, cap, true);
    let exhausted = EnumerationResult::Exhausted { limit: cap };
    for w in subgroup {
        if t.scan(0, w, true).is_err() {
            return exhausted;
        }
    }
    process_deductions(&mut t, &by_first);
    let mut alpha = 0;
    while alpha < t.len() {
        let mut c = 0;
        while c < ncols && t.alive(alpha) {
            if t.get(alpha, c) == UNDEF {
                if t.define(alpha, c).is_err() {
                    if t.live == t.len() {
                        return exhausted;
                    }
                    let map = t.compact();
                    alpha = map[alpha];
                    continue;
                }
                process_deductions(&mut t, &by_first);
            }
            c += 1;
        }
        alpha += 1;
    }
    debug_assert!(t.complete());
    EnumerationResult::Finite { index: t.live }
}

fn process_deductions(t: &mut Table, by_first: &[Vec<Vec<usize>>]) {
    while let Some((coset, c)) = t.deductions.pop() {
        if t.alive(coset) {
            for w in &by_first[c] {
                if !t.alive(coset) {
                    break;
                }
                let _ = t.scan(coset, w, false);
            }
        }
        let coset = t.rep(coset);
        let target = t.get(coset, c);
        if target != UNDEF {
            let target = t.rep(target);
            for w in &by_first[c ^ 1] {
                if !t.alive(target) {
                    break;
                }
                let _ = t.scan(target, w, false);
            }
        }
    }
}
