//! Operator text grammar.
//!
//! ```text
//! sum    := [sign] term { sign term }
//! term   := coeff [ '*' ] product | coeff | product
//! product:= factor { ['*'] factor }
//! factor := ('X' | 'Y' | 'Z') site | 'I' [site]
//! ```
//!
//! Sites are 1-based, tokens are case-insensitive, and a site may appear at
//! most once per term.

use super::{Cell, PauliString, WeightedPauliSum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Factor(Cell, Option<usize>),
    Plus,
    Minus,
    Star,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = i + 1;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((col, Token::Plus));
                i += 1;
            }
            b'-' => {
                out.push((col, Token::Minus));
                i += 1;
            }
            b'*' => {
                out.push((col, Token::Star));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let literal = &text[start..i];
                let value: f64 = literal
                    .parse()
                    .map_err(|_| Error::parse(col, format!("bad number '{literal}'")))?;
                out.push((col, Token::Number(value)));
            }
            _ if c.is_ascii_alphabetic() => {
                let cell = match c.to_ascii_uppercase() {
                    b'I' => Cell::I,
                    b'X' => Cell::X,
                    b'Y' => Cell::Y,
                    b'Z' => Cell::Z,
                    other => {
                        return Err(Error::parse(
                            col,
                            format!("unknown operator '{}'", other as char),
                        ))
                    }
                };
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let site = if start == i {
                    if cell != Cell::I {
                        return Err(Error::parse(
                            col,
                            format!("'{}' needs a site index", cell.symbol()),
                        ));
                    }
                    None
                } else {
                    let k: usize = text[start..i]
                        .parse()
                        .map_err(|_| Error::parse(col, "site index too large"))?;
                    if k == 0 {
                        return Err(Error::parse(col, "site indices are 1-based"));
                    }
                    Some(k)
                };
                if i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    return Err(Error::parse(
                        i + 1,
                        "expected whitespace or '*' between factors",
                    ));
                }
                out.push((col, Token::Factor(cell, site)));
            }
            _ => {
                return Err(Error::parse(
                    col,
                    format!("unexpected character '{}'", c as char),
                ))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
    end_col: usize,
    n_qubits: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn term(&mut self) -> Result<(f64, PauliString)> {
        let mut coeff = 1.0;
        let mut saw_number = false;
        if let Some(Token::Number(v)) = self.peek() {
            coeff = *v;
            saw_number = true;
            self.pos += 1;
            if let Some(Token::Star) = self.peek() {
                self.pos += 1;
                if !matches!(self.peek(), Some(Token::Factor(..))) {
                    return Err(Error::parse(self.col(), "expected an operator after '*'"));
                }
            }
        }
        let mut cells: Vec<(usize, Cell)> = Vec::new();
        let mut saw_factor = false;
        while let Some(Token::Factor(cell, site)) = self.peek() {
            let col = self.col();
            saw_factor = true;
            if let Some(k) = *site {
                if k > self.n_qubits {
                    return Err(Error::SiteOutOfRange {
                        site: k,
                        n_qubits: self.n_qubits,
                    });
                }
                if cells.iter().any(|&(s, _)| s == k - 1) {
                    return Err(Error::parse(col, format!("site {k} repeated in term")));
                }
                cells.push((k - 1, *cell));
            }
            self.pos += 1;
            if let Some(Token::Star) = self.peek() {
                self.pos += 1;
                if !matches!(self.peek(), Some(Token::Factor(..))) {
                    return Err(Error::parse(self.col(), "expected an operator after '*'"));
                }
            }
        }
        if !saw_number && !saw_factor {
            return Err(Error::parse(self.col(), "expected a term"));
        }
        let string = PauliString::from_sparse(self.n_qubits, &cells)?;
        Ok((coeff, string))
    }

    fn sum(&mut self) -> Result<WeightedPauliSum> {
        let mut sum = WeightedPauliSum::new(self.n_qubits);
        let mut sign = 1.0;
        if let Some(Token::Minus) = self.peek() {
            sign = -1.0;
            self.pos += 1;
        } else if let Some(Token::Plus) = self.peek() {
            self.pos += 1;
        }
        loop {
            let (c, s) = self.term()?;
            sum.add(sign * c, s)?;
            match self.peek() {
                None => break,
                Some(Token::Plus) => sign = 1.0,
                Some(Token::Minus) => sign = -1.0,
                Some(_) => {
                    return Err(Error::parse(
                        self.col(),
                        "expected '+' or '-' between terms",
                    ))
                }
            }
            self.pos += 1;
        }
        Ok(sum)
    }
}

/// Parses a weighted sum such as `0.5 * X1 X2 + 0.5 * Y1 Y2`.
///
/// Repeated strings are merged by adding their coefficients; zero
/// coefficients are kept.
pub fn parse_sum(text: &str, n_qubits: usize) -> Result<WeightedPauliSum> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::parse(1, "empty operator expression"));
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end_col: text.len() + 1,
        n_qubits,
    };
    parser.sum()
}

/// Parses a single coefficient-free term such as `Z1 Z2 X3`.
pub fn parse_string(text: &str, n_qubits: usize) -> Result<PauliString> {
    let tokens = tokenize(text)?;
    if tokens
        .iter()
        .any(|(_, t)| !matches!(t, Token::Factor(..) | Token::Star))
    {
        return Err(Error::parse(
            1,
            format!("'{text}' is not a single Pauli string"),
        ));
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end_col: text.len() + 1,
        n_qubits,
    };
    let (_, s) = parser.term()?;
    if parser.pos != tokens.len() {
        return Err(Error::parse(parser.col(), "trailing input"));
    }
    Ok(s)
}

/// Largest 1-based site index mentioned in `text` (0 if none).
pub fn max_site(text: &str) -> Result<usize> {
    Ok(tokenize(text)?
        .into_iter()
        .filter_map(|(_, t)| match t {
            Token::Factor(_, site) => site,
            _ => None,
        })
        .max()
        .unwrap_or(0))
}

/// Parses a string on the smallest register that holds it.
pub(crate) fn parse_string_min(text: &str) -> Result<PauliString> {
    parse_string(text, max_site(text)?.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sum_with_coefficients() {
        let s = parse_sum("0.5 * X1 X2 + 0.5 * Y1 Y2", 2).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.terms()[0].0, 0.5);
        assert_eq!(s.terms()[1].1.to_string(), "Y1 Y2");
    }

    #[test]
    fn parses_case_insensitive_and_star_separators() {
        let a = parse_string("z1*z2 * x3", 3).unwrap();
        assert_eq!(a.to_string(), "Z1 Z2 X3");
    }

    #[test]
    fn parses_scientific_and_negative_terms() {
        let s = parse_sum("-1e-1 * Z1 - 2.5E1 X2", 2).unwrap();
        assert_eq!(s.terms()[0].0, -0.1);
        assert_eq!(s.terms()[1].0, -25.0);
    }

    #[test]
    fn identity_term() {
        let s = parse_sum("I", 3).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.terms()[0].1.is_identity());
        let s = parse_sum("3", 1).unwrap();
        assert_eq!(s.terms()[0], (3.0, PauliString::identity(1)));
    }

    #[test]
    fn rejects_zero_index() {
        let err = parse_string("X0", 2).unwrap_err();
        assert!(matches!(err, Error::Parse { column: 1, .. }), "{err}");
    }

    #[test]
    fn rejects_out_of_range_and_duplicates() {
        assert!(matches!(
            parse_string("X3", 2),
            Err(Error::SiteOutOfRange { site: 3, .. })
        ));
        assert!(matches!(
            parse_string("X1 Z1", 2),
            Err(Error::Parse { column: 4, .. })
        ));
    }

    #[test]
    fn reports_position_of_garbage() {
        match parse_sum("X1 + Q2", 2) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_sum("X1 +", 2).is_err());
        assert!(parse_sum("2 *", 2).is_err());
        assert!(parse_sum("", 2).is_err());
    }

    #[test]
    fn max_site_scans_all_terms() {
        assert_eq!(max_site("2.5 * Z1 Z5 + X2").unwrap(), 5);
        assert_eq!(max_site("I").unwrap(), 0);
    }
}
