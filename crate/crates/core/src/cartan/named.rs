//! Named Cartan matrices.
//!
//! Orientation: a multiple edge drawn as an arrow from `p` to `q` with
//! multiplicity `m` gives `a[q][p] = -m` and `a[p][q] = -1`. With this rule
//! `B_n` has its red (short) node at `n`, `C_n` has its green node at `n`, and
//! `F_4` colours nodes 1, 2 red and 3, 4 blue.
//!
//! Affine (`~`) matrices append the extra node as the last index, so the
//! finite diagram keeps its labels.

use super::{CartanError, CartanMatrix};

struct Builder {
    n: usize,
    entries: Vec<i64>,
}

impl Builder {
    fn new(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 2;
        }
        Builder { n, entries }
    }

    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[(i - 1) * self.n + (j - 1)] = v;
    }

    /// Single edge between 1-based nodes.
    fn simple(&mut self, i: usize, j: usize) -> &mut Self {
        self.set(i, j, -1);
        self.set(j, i, -1);
        self
    }

    fn arrow(&mut self, p: usize, q: usize, multiplicity: i64) -> &mut Self {
        self.set(q, p, -multiplicity);
        self.set(p, q, -1);
        self
    }

    fn chain(&mut self, from: usize, to: usize) -> &mut Self {
        for i in from..to {
            self.simple(i, i + 1);
        }
        self
    }

    fn build(&self) -> CartanMatrix {
        CartanMatrix::from_flat(self.n, self.entries.clone()).expect("named diagrams are valid")
    }
}

fn out_of_range(family: &str, rank: usize) -> CartanError {
    CartanError::RankOutOfRange {
        family: family.to_string(),
        rank,
    }
}

/// Grammar: a family letter `A`..`G`, the rank, then an optional `~` for the
/// untwisted affine extension (which has rank + 1 nodes). `X16` is
/// [`rank16_example`].
pub(super) fn from_named(name: &str) -> Result<CartanMatrix, CartanError> {
    let unknown = || CartanError::UnknownName(name.to_string());
    let trimmed = name.trim();
    if trimmed.eq_ignore_ascii_case("X16") {
        return Ok(rank16_example());
    }
    let (body, affine) = match trimmed.strip_suffix('~') {
        Some(b) => (b, true),
        None => (trimmed, false),
    };
    let mut chars = body.chars();
    let family = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
    let digits = chars.as_str();
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(unknown());
    }
    let rank: usize = digits.parse().map_err(|_| unknown())?;
    let label = format!("{family}{}", if affine { "~" } else { "" });
    if affine {
        affine_type(family, rank).ok_or_else(|| {
            if ('A'..='G').contains(&family) {
                out_of_range(&label, rank)
            } else {
                unknown()
            }
        })
    } else {
        finite_type(family, rank).ok_or_else(|| {
            if ('A'..='G').contains(&family) {
                out_of_range(&label, rank)
            } else {
                unknown()
            }
        })
    }
}

// Guard against absurd allocations from user input.
const MAX_RANK: usize = 512;

fn finite_builder(family: char, n: usize) -> Option<Builder> {
    if n > MAX_RANK {
        return None;
    }
    let b = match family {
        'A' if n >= 1 => {
            let mut b = Builder::new(n);
            b.chain(1, n);
            b
        }
        'B' if n >= 2 => {
            let mut b = Builder::new(n);
            b.chain(1, n - 1).arrow(n - 1, n, 2);
            b
        }
        'C' if n >= 2 => {
            let mut b = Builder::new(n);
            b.chain(1, n - 1).arrow(n, n - 1, 2);
            b
        }
        'D' if n >= 3 => {
            let mut b = Builder::new(n);
            b.chain(1, n - 1).simple(n - 2, n);
            b
        }
        // Chain 1..n-1 with node n attached to node n-3, as in the E10 figure.
        'E' if (6..=10).contains(&n) => {
            let mut b = Builder::new(n);
            b.chain(1, n - 1).simple(n - 3, n);
            b
        }
        'F' if n == 4 => {
            let mut b = Builder::new(4);
            b.simple(1, 2).arrow(3, 2, 2).simple(3, 4);
            b
        }
        'G' if n == 2 => {
            let mut b = Builder::new(2);
            b.arrow(1, 2, 3);
            b
        }
        _ => return None,
    };
    Some(b)
}

fn finite_type(family: char, n: usize) -> Option<CartanMatrix> {
    finite_builder(family, n).map(|b| b.build())
}

fn affine_type(family: char, n: usize) -> Option<CartanMatrix> {
    if n > MAX_RANK {
        return None;
    }
    if family == 'A' && n == 1 {
        return CartanMatrix::new(vec![vec![2, -2], vec![-2, 2]]).ok();
    }
    let valid = match family {
        'A' => n >= 2,
        'B' => n >= 3,
        'C' => n >= 2,
        'D' => n >= 4,
        'E' => (6..=8).contains(&n),
        'F' => n == 4,
        'G' => n == 2,
        _ => false,
    };
    if !valid {
        return None;
    }
    let finite = finite_builder(family, n)?;
    let mut b = Builder::new(n + 1);
    for i in 0..n {
        for j in 0..n {
            b.entries[i * (n + 1) + j] = finite.entries[i * n + j];
        }
    }
    let x = n + 1;
    match family {
        'A' => {
            b.simple(x, 1).simple(x, n);
        }
        'B' | 'D' => {
            b.simple(x, 2);
        }
        // extra node is long, node 1 short
        'C' => {
            b.arrow(x, 1, 2);
        }
        // extend the shortest arm of the star (nodes 6, 7, 8 hang off n-3)
        'E' => {
            let attach = match n {
                6 => 6,
                7 => 6,
                _ => 1,
            };
            b.simple(x, attach);
        }
        // nodes 3, 4 are the long ones
        'F' => {
            b.simple(x, 4);
        }
        'G' => {
            b.simple(x, 1);
        }
        _ => unreachable!(),
    }
    Some(b.build())
}

/// The rank-16 indefinite diagram of the introduction's second table, rows
/// labelled `1a 1b 1c 2a 2b 2c 3a 3b 3c 4a 4b 4c 5a 5b 5c 6a` as indices 1..16.
pub fn rank16_example() -> CartanMatrix {
    const LABELS: [&str; 16] = [
        "1a", "1b", "1c", "2a", "2b", "2c", "3a", "3b", "3c", "4a", "4b", "4c", "5a", "5b", "5c",
        "6a",
    ];
    let idx = |l: &str| LABELS.iter().position(|x| *x == l).expect("known label") + 1;
    let mut b = Builder::new(16);
    // (from, to, multiplicity); multiplicity 1 is a plain edge
    let edges: [(&str, &str, i64); 18] = [
        ("1a", "1b", 3),
        ("1b", "1c", 1),
        ("2a", "1a", 2),
        ("2a", "2b", 2),
        ("2c", "1c", 2),
        ("2c", "2b", 2),
        ("2c", "3c", 2),
        ("3a", "2a", 1),
        ("3b", "3a", 2),
        ("3b", "3c", 2),
        ("3b", "4b", 2),
        ("3c", "4c", 3),
        ("4a", "3a", 2),
        ("4a", "4b", 2),
        ("4a", "5a", 1),
        ("5b", "4b", 2),
        ("5b", "5c", 1),
        ("5a", "6a", 1),
    ];
    for (p, q, m) in edges {
        if m == 1 {
            b.simple(idx(p), idx(q));
        } else {
            b.arrow(idx(p), idx(q), m);
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(name: &str) -> Vec<Vec<i64>> {
        from_named(name).unwrap().rows()
    }

    #[test]
    fn small_examples() {
        assert_eq!(rows("G2"), vec![vec![2, -1], vec![-3, 2]]);
        assert_eq!(rows("B3"), vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]]);
        assert_eq!(rows("C3"), vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]]);
        assert_eq!(rows("A1~"), vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(
            rows("A2~"),
            vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]
        );
        assert_eq!(rows("c2"), rows("C2"));
    }

    #[test]
    fn e10_matches_figure() {
        let e10 = from_named("E10").unwrap();
        assert_eq!(e10.rank(), 10);
        let mut edges: Vec<(usize, usize)> =
            e10.diagram_edges().map(|(i, j)| (i + 1, j + 1)).collect();
        edges.sort();
        let mut expected: Vec<(usize, usize)> = (1..9).map(|i| (i, i + 1)).collect();
        expected.push((7, 10));
        expected.sort();
        assert_eq!(edges, expected);
        assert!(e10.is_simply_laced());
    }

    #[test]
    fn errors() {
        assert_eq!(from_named("Q3"), Err(CartanError::UnknownName("Q3".into())));
        assert_eq!(from_named("A"), Err(CartanError::UnknownName("A".into())));
        assert_eq!(from_named(""), Err(CartanError::UnknownName("".into())));
        assert!(matches!(from_named("E5"), Err(CartanError::RankOutOfRange { .. })));
        assert!(matches!(from_named("F5"), Err(CartanError::RankOutOfRange { .. })));
        assert!(matches!(from_named("A0"), Err(CartanError::RankOutOfRange { .. })));
        assert!(matches!(from_named("B2~"), Err(CartanError::RankOutOfRange { .. })));
        assert!(matches!(from_named("E9~"), Err(CartanError::RankOutOfRange { .. })));
    }

    #[test]
    fn affine_ranks() {
        for (name, rank) in [("B3~", 4), ("C2~", 3), ("D4~", 5), ("E6~", 7), ("E7~", 8), ("E8~", 9), ("F4~", 5), ("G2~", 3)] {
            assert_eq!(from_named(name).unwrap().rank(), rank, "{name}");
        }
    }

    #[test]
    fn rank16_is_connected_and_two_spherical() {
        let x = rank16_example();
        assert_eq!(x.rank(), 16);
        assert!(x.is_irreducible());
        assert!(x.is_two_spherical());
        assert_eq!(x.diagram_edges().count(), 18);
    }
}
