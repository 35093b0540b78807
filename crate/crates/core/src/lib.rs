//! Fundamental groups of split real Kac–Moody groups, their maximal compact
//! subgroups, spin covers and generalized flag varieties, read off from a
//! generalized Cartan matrix.
//!
//! The closed-form answers come from the parity graph in [`adm`]. The
//! [`fpgroup`] engine (Smith normal form and Todd–Coxeter enumeration) and the
//! [`coxeter`] engine (Weyl group, Bruhat order, Schubert cells) check the
//! structural statements behind them.

pub mod adm;
pub mod cartan;
pub mod coxeter;
pub mod fpgroup;
pub mod pi1;

pub use adm::{AdmGraph, Colour, ColourCounts, KappaColouring};
pub use cartan::{CartanError, CartanMatrix, HypothesisReport, Parity};
pub use coxeter::{CoxeterError, RootVector, WeylElement, WeylGroup};
pub use fpgroup::{AbelianInvariants, EnumerationResult, Presentation, Word};
pub use pi1::{Caps, Pi1Error, Pi1Report, Pi1Type};

/// Parses a 1-based comma list such as `1,3` into sorted 0-based indices.
pub fn parse_index_set(text: &str, rank: usize) -> Result<Vec<usize>, CartanError> {
    let mut out = Vec::new();
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(out);
    }
    for (pos, piece) in trimmed.split(',').enumerate() {
        let piece = piece.trim();
        let value: usize = piece.parse().map_err(|_| CartanError::Syntax {
            line: 1,
            column: pos + 1,
            message: format!("expected a 1-based index, found `{piece}`"),
        })?;
        if value == 0 || value > rank {
            return Err(CartanError::IndexOutOfRange { index: value, rank });
        }
        out.push(value - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Renders 0-based indices as a 1-based set, e.g. `{1,3}`.
pub fn format_index_set(set: &[usize]) -> String {
    let items: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_sets() {
        assert_eq!(parse_index_set("3,1", 3).unwrap(), vec![0, 2]);
        assert_eq!(parse_index_set("", 3).unwrap(), Vec::<usize>::new());
        assert!(parse_index_set("4", 3).is_err());
        assert!(parse_index_set("0", 3).is_err());
        assert!(parse_index_set("a", 3).is_err());
        assert_eq!(format_index_set(&[0, 2]), "{1,3}");
        assert_eq!(format_index_set(&[]), "{}");
    }
}
