//! Minimal nested-list reader for the spec and plan grammars.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum SExpr {
    Atom { text: String, line: usize },
    List { items: Vec<SExpr>, line: usize },
}

impl SExpr {
    pub(crate) fn line(&self) -> usize {
        match self {
            SExpr::Atom { line, .. } | SExpr::List { line, .. } => *line,
        }
    }

    pub(crate) fn as_list(&self, what: &str) -> Result<&[SExpr]> {
        match self {
            SExpr::List { items, .. } => Ok(items),
            SExpr::Atom { text, line } => Err(Error::parse(
                *line,
                format!("expected {what}, found `{text}`"),
            )),
        }
    }

    pub(crate) fn as_number(&self, what: &str) -> Result<u64> {
        match self {
            SExpr::Atom { text, line } => text
                .parse()
                .map_err(|_| Error::parse(*line, format!("expected {what}, found `{text}`"))),
            SExpr::List { line, .. } => {
                Err(Error::parse(*line, format!("expected {what}, found a list")))
            }
        }
    }
}

/// Parses exactly one expression; `#` starts a comment running to end of line.
pub(crate) fn parse(text: &str) -> Result<SExpr> {
    let mut tokens = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let spaced = content.replace('(', " ( ").replace(')', " ) ");
        for tok in spaced.split_whitespace() {
            tokens.push((tok.to_string(), line));
        }
    }
    let last_line = text.lines().count().max(1);
    let mut pos = 0;
    let expr = read(&tokens, &mut pos, last_line)?;
    if let Some((tok, line)) = tokens.get(pos) {
        return Err(Error::parse(*line, format!("unexpected `{tok}` after expression")));
    }
    Ok(expr)
}

fn read(tokens: &[(String, usize)], pos: &mut usize, last_line: usize) -> Result<SExpr> {
    let Some((tok, line)) = tokens.get(*pos) else {
        return Err(Error::parse(last_line, "unexpected end of input"));
    };
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(Error::parse(last_line, "unclosed `(`")),
                    Some((t, _)) if t == ")" => {
                        *pos += 1;
                        return Ok(SExpr::List { items, line: *line });
                    }
                    Some(_) => items.push(read(tokens, pos, last_line)?),
                }
            }
        }
        ")" => Err(Error::parse(*line, "unexpected `)`")),
        _ => Ok(SExpr::Atom {
            text: tok.clone(),
            line: *line,
        }),
    }
}
