//! The qst1 state-file format: a `format qst1` tag, a `kind` of matrix, cs or
//! x, and a whitespace-separated numeric payload (32 reals as row-major
//! re/im pairs for matrices, 7 reals for the parameter families). '#' starts
//! a comment; blank lines are ignored. Printing uses 17 significant digits so
//! a parse of the printed form is bit-exact.

use crate::matkit::CMat;
use crate::states::{cs_to_matrix, x_to_matrix, CsParams, DensityMatrix, StateError, XParams};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QstError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] StateError),
}

#[derive(Clone, Debug)]
pub enum ParsedState {
    Matrix(DensityMatrix),
    Cs(CsParams),
    X(XParams),
}

impl ParsedState {
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedState::Matrix(_) => "matrix",
            ParsedState::Cs(_) => "cs",
            ParsedState::X(_) => "x",
        }
    }

    /// The density matrix the file denotes; parameter kinds are assembled.
    pub fn to_density(&self) -> Result<DensityMatrix, StateError> {
        match self {
            ParsedState::Matrix(rho) => Ok(rho.clone()),
            ParsedState::Cs(p) => cs_to_matrix(p),
            ParsedState::X(q) => x_to_matrix(q),
        }
    }
}

struct Token<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    for (line_index, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let token_rest = &rest[start..];
            let end = token_rest
                .find(char::is_whitespace)
                .unwrap_or(token_rest.len());
            tokens.push(Token {
                line: line_index + 1,
                column: offset + start + 1,
                text: &token_rest[..end],
            });
            offset += start + end;
            rest = &token_rest[end..];
        }
    }
    tokens
}

fn parse_err(token: Option<&Token>, message: String) -> QstError {
    match token {
        Some(t) => QstError::Parse {
            line: t.line,
            column: t.column,
            message,
        },
        None => QstError::Parse {
            line: 0,
            column: 0,
            message,
        },
    }
}

fn expect_word<'a>(
    tokens: &'a [Token],
    index: usize,
    expected: &str,
) -> Result<&'a Token<'a>, QstError> {
    match tokens.get(index) {
        Some(t) if t.text == expected => Ok(t),
        Some(t) => Err(parse_err(
            Some(t),
            format!("expected '{expected}', got '{}'", t.text),
        )),
        None => Err(parse_err(None, format!("expected '{expected}', got end of input"))),
    }
}

fn parse_numbers(tokens: &[Token], from: usize, count: usize) -> Result<Vec<f64>, QstError> {
    let available = tokens.len().saturating_sub(from);
    if available < count {
        return Err(parse_err(
            tokens.last(),
            format!("expected {count} numbers, found {available}"),
        ));
    }
    if available > count {
        let extra = &tokens[from + count];
        return Err(parse_err(
            Some(extra),
            format!("unexpected trailing token '{}'", extra.text),
        ));
    }
    tokens[from..from + count]
        .iter()
        .map(|t| {
            t.text
                .parse::<f64>()
                .map_err(|_| parse_err(Some(t), format!("'{}' is not a number", t.text)))
        })
        .collect()
}

/// Parses qst1 text into a state, validating the denoted density matrix.
pub fn parse_state(text: &str) -> Result<ParsedState, QstError> {
    let tokens = tokenize(text);
    expect_word(&tokens, 0, "format")?;
    expect_word(&tokens, 1, "qst1")?;
    expect_word(&tokens, 2, "kind")?;
    let kind = tokens
        .get(3)
        .ok_or_else(|| parse_err(None, "expected a state kind".to_string()))?;
    match kind.text {
        "matrix" => {
            let values = parse_numbers(&tokens, 4, 32)?;
            let m = CMat::from_fn(4, 4, |i, j| {
                let base = 2 * (4 * i + j);
                Complex64::new(values[base], values[base + 1])
            });
            Ok(ParsedState::Matrix(DensityMatrix::new(m)?))
        }
        "cs" => {
            let values = parse_numbers(&tokens, 4, 7)?;
            let p = CsParams::new(values.try_into().unwrap());
            cs_to_matrix(&p)?;
            Ok(ParsedState::Cs(p))
        }
        "x" => {
            let values = parse_numbers(&tokens, 4, 7)?;
            let q = XParams::new(values.try_into().unwrap());
            x_to_matrix(&q)?;
            Ok(ParsedState::X(q))
        }
        other => Err(parse_err(
            Some(kind),
            format!("unknown kind '{other}' (expected matrix, cs or x)"),
        )),
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_matrix(rho: &DensityMatrix) -> String {
    let m = rho.matrix();
    let mut out = String::from("format qst1\nkind matrix\n");
    for i in 0..4 {
        let row: Vec<String> = (0..4)
            .flat_map(|j| [fmt(m[(i, j)].re), fmt(m[(i, j)].im)])
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn format_cs(p: &CsParams) -> String {
    let values: Vec<String> = p.as_array().iter().map(|v| fmt(*v)).collect();
    format!("format qst1\nkind cs\n{}\n", values.join(" "))
}

pub fn format_x(q: &XParams) -> String {
    let values: Vec<String> = q.as_array().iter().map(|v| fmt(*v)).collect();
    format!("format qst1\nkind x\n{}\n", values.join(" "))
}
