//! Stable on-disk formats for presentations and diagrams.
//!
//! Text presentations carry a `#` header comment naming the format
//! version, then `n=<int>`, then one relator per line. Comment lines are
//! ignored anywhere; serialization is canonical (sorted relators), so
//! `to_text(parse_text(s)) == s` for every serialized `s`.

use serde::{Deserialize, Serialize};
use thiserror::Error;
use trigroup_core::davkd::diagram::{Diagram, DiagramError, DiagramJson};
use trigroup_core::letter::Letter;
use trigroup_core::presentation::Presentation;
use trigroup_core::relator::RelatorError;

pub const PRESENTATION_VERSION: u32 = 1;
pub const PRESENTATION_HEADER: &str = "# trigroup presentation v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: expected header `n=<int>`, found {found:?}")]
    Header { line: usize, found: String },
    #[error("missing header `n=<int>`")]
    MissingHeader,
    #[error("line {line}: expected 3 tokens, found {count}")]
    TokenCount { line: usize, count: usize },
    #[error("line {line}: bad token {token:?} (expected gK or GK)")]
    Token { line: usize, token: String },
    #[error("line {line}: {source}")]
    Relator { line: usize, source: RelatorError },
    #[error("n must be at least 1")]
    ZeroGenerators,
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("invalid JSON: {0}")]
    Json(String),
}

pub fn to_text(p: &Presentation) -> String {
    let mut s = format!("{PRESENTATION_HEADER}\nn={}\n", p.n());
    for r in p.relators() {
        let [a, b, c] = r.letters();
        s.push_str(&format!("{a} {b} {c}\n"));
    }
    s
}

pub fn parse_text(text: &str) -> Result<Presentation, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let n: u32 = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| ParseError::Header {
            line: hline,
            found: header.to_string(),
        })?;
    if n == 0 {
        return Err(ParseError::ZeroGenerators);
    }
    let mut words = Vec::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(ParseError::TokenCount {
                line,
                count: toks.len(),
            });
        }
        let mut w = [Letter::pos(1); 3];
        for (slot, t) in w.iter_mut().zip(&toks) {
            *slot = Letter::parse_token(t).ok_or_else(|| ParseError::Token {
                line,
                token: t.to_string(),
            })?;
        }
        trigroup_core::relator::Relator::new(w, n).map_err(|source| ParseError::Relator { line, source })?;
        words.push(w);
    }
    Ok(Presentation::from_words(n, words).expect("words validated above"))
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    #[serde(default = "default_version")]
    version: u32,
    n: u32,
    relators: Vec<[Letter; 3]>,
}

fn default_version() -> u32 {
    PRESENTATION_VERSION
}

/// `{"version": 1, "n": 3, "relators": [["g1","g1","G2"], ...]}`.
pub fn to_json(p: &Presentation) -> String {
    let j = PresentationJson {
        version: PRESENTATION_VERSION,
        n: p.n(),
        relators: p.relators().iter().map(|r| r.letters()).collect(),
    };
    serde_json::to_string(&j).expect("plain data")
}

pub fn parse_json(text: &str) -> Result<Presentation, ParseError> {
    let j: PresentationJson = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    if j.version != PRESENTATION_VERSION {
        return Err(ParseError::Version(j.version));
    }
    if j.n == 0 {
        return Err(ParseError::ZeroGenerators);
    }
    for (i, w) in j.relators.iter().enumerate() {
        trigroup_core::relator::Relator::new(*w, j.n).map_err(|source| ParseError::Relator { line: i + 1, source })?;
    }
    Ok(Presentation::from_words(j.n, j.relators).expect("words validated above"))
}

/// Either format, chosen by the first non-blank character.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

#[derive(Debug, Error)]
pub enum DiagramFileError {
    #[error("invalid diagram JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid diagram: {0}")]
    Diagram(#[from] DiagramError),
}

pub fn diagram_to_json(d: &Diagram) -> String {
    serde_json::to_string(&d.to_json()).expect("plain data")
}

pub fn parse_diagram(text: &str) -> Result<Diagram, DiagramFileError> {
    let j: DiagramJson = serde_json::from_str(text)?;
    Ok(Diagram::from_json(&j)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_examples() {
        let p = parse_text("n=2\ng1 g1 g2\n").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.relators()[0].letters(), [Letter::pos(1), Letter::pos(1), Letter::pos(2)]);
        assert!(matches!(
            parse_text("n=2\ng1 G1 g2\n"),
            Err(ParseError::Relator {
                line: 2,
                source: RelatorError::NotCyclicallyReduced(_)
            })
        ));
        let free = parse_text("n=5\n").unwrap();
        assert!(free.is_empty() && free.n() == 5);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        assert_eq!(
            parse_text("# c\nn=2\n\ng1 g2\n"),
            Err(ParseError::TokenCount { line: 4, count: 2 })
        );
        assert_eq!(
            parse_text("n=2\ng1 x g2\n"),
            Err(ParseError::Token {
                line: 2,
                token: "x".into()
            })
        );
        assert!(matches!(parse_text("m=2\n"), Err(ParseError::Header { line: 1, .. })));
        assert_eq!(parse_text(""), Err(ParseError::MissingHeader));
        assert!(matches!(
            parse_text("n=2\ng1 g1 g3\n"),
            Err(ParseError::Relator {
                source: RelatorError::GeneratorOutOfRange { .. },
                ..
            })
        ));
    }

    #[test]
    fn canonical_text_round_trip() {
        let text = "n=3\ng2 g2 g1\ng1 g1 g2\ng1 g1 g2\nG3 g1 g1\n";
        let p = parse_text(text).unwrap();
        let canon = to_text(&p);
        assert_eq!(p.len(), 3);
        assert_eq!(to_text(&parse_text(&canon).unwrap()), canon);
        assert!(canon.starts_with(PRESENTATION_HEADER));
    }

    #[test]
    fn json_round_trip() {
        let p = parse_text("n=3\ng1 g1 G2\ng3 g2 g1\n").unwrap();
        let j = to_json(&p);
        assert_eq!(j, r#"{"version":1,"n":3,"relators":[["g1","g1","G2"],["g3","g2","g1"]]}"#);
        assert_eq!(parse_json(&j).unwrap(), p);
        assert_eq!(parse_presentation(&j).unwrap(), p);
        assert!(parse_json(r#"{"n":2,"relators":[["g1","G1","g2"]]}"#).is_err());
        assert!(matches!(
            parse_json(r#"{"version":7,"n":2,"relators":[]}"#),
            Err(ParseError::Version(7))
        ));
    }
}
