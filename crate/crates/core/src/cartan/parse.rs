use serde::Deserialize;

use super::{CartanError, CartanMatrix};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonMatrix {
    size: usize,
    entries: Vec<Vec<i64>>,
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokens(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let mut offset = 0;
        for piece in content.split_whitespace() {
            let start = offset + content[offset..].find(piece).expect("piece is a substring");
            offset = start + piece.len();
            out.push(Token {
                text: piece,
                line: line_no + 1,
                column: start + 1,
            });
        }
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CartanError {
    CartanError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Accepts the plain whitespace format (rank, then the entries row-major,
/// `#` comments allowed) or a JSON object `{"size": n, "entries": [[..]]}`.
pub(super) fn parse_matrix(text: &str) -> Result<CartanMatrix, CartanError> {
    if text.trim_start().starts_with('{') {
        return parse_json(text);
    }
    let toks = tokens(text);
    let Some(first) = toks.first() else {
        return Err(syntax(1, 1, "empty input"));
    };
    let rank: usize = first
        .text
        .parse()
        .map_err(|_| syntax(first.line, first.column, format!("expected rank, found `{}`", first.text)))?;
    if rank == 0 {
        return Err(syntax(first.line, first.column, "rank must be positive"));
    }
    let expected = rank
        .checked_mul(rank)
        .ok_or_else(|| syntax(first.line, first.column, "rank too large"))?;
    let mut entries = Vec::with_capacity(expected);
    for tok in toks.iter().skip(1) {
        if entries.len() == expected {
            return Err(syntax(tok.line, tok.column, format!("unexpected trailing token `{}`", tok.text)));
        }
        let v: i64 = tok
            .text
            .parse()
            .map_err(|_| syntax(tok.line, tok.column, format!("expected integer, found `{}`", tok.text)))?;
        entries.push(v);
    }
    if entries.len() < expected {
        let (line, column) = toks
            .last()
            .map(|t| (t.line, t.column + t.text.len()))
            .unwrap_or((1, 1));
        return Err(syntax(
            line,
            column,
            format!("expected {} entries, found {}", expected, entries.len()),
        ));
    }
    CartanMatrix::from_flat(rank, entries)
}

fn parse_json(text: &str) -> Result<CartanMatrix, CartanError> {
    let parsed: JsonMatrix = serde_json::from_str(text)
        .map_err(|e| syntax(e.line(), e.column(), e.to_string()))?;
    if parsed.entries.len() != parsed.size {
        return Err(syntax(
            1,
            1,
            format!("size is {} but entries has {} rows", parsed.size, parsed.entries.len()),
        ));
    }
    CartanMatrix::new(parsed.entries)
}
