//! Command-line expression parsers.
//!
//! Polynomials use a one-line grammar (whitespace is free):
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := primary ['^' integer]
//! primary  := rational | variable | '(' expr ')'
//! rational := digits ['/' digits]
//! variable := 'u' digits              (1-based, e.g. u1, u2)
//! ```
//!
//! Vectors (elements of a finite algebra) are bracketed rational lists:
//! `[2, -1/3, 0]`. Errors carry the byte position of the offending token.

use std::fmt;

use frobsym::polynomial::Polynomial;
use frobsym::GaussianRational;

type Q = GaussianRational;

#[derive(Debug, Clone)]
pub struct ParseError {
    /// 0-based byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at position {}: {}",
            self.position + 1,
            self.message
        )
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor {
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(u8::is_ascii_whitespace)
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8, what: &str) -> Result<(), ParseError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    // A run of ASCII digits, as a slice.
    fn digits(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits are ascii"))
    }

    // digits ['/' digits], as a nonnegative rational
    fn rational(&mut self) -> Result<Q, ParseError> {
        let start = self.pos;
        let numerator = self.digits()?;
        let text = if self.eat(b'/') {
            let denominator = self.digits()?;
            if denominator.chars().all(|c| c == '0') {
                return Err(ParseError {
                    position: start,
                    message: "denominator is zero".into(),
                });
            }
            format!("{numerator}/{denominator}")
        } else {
            numerator.to_string()
        };
        GaussianRational::parse_rational(&text)
            .map(Q::from_rational)
            .map_err(|e| ParseError {
                position: start,
                message: e.to_string(),
            })
    }

    // 'u' digits, as a 0-based variable index
    fn variable(&mut self, num_vars: usize) -> Result<usize, ParseError> {
        let start = self.pos;
        self.expect(b'u', "a variable like u1")?;
        let digits = self.digits().map_err(|_| ParseError {
            position: start,
            message: "expected a variable index after 'u'".into(),
        })?;
        let index: usize = digits.parse().map_err(|_| ParseError {
            position: start,
            message: format!("variable index {digits} is out of range"),
        })?;
        if index == 0 {
            return Err(ParseError {
                position: start,
                message: "variable indices start at u1".into(),
            });
        }
        if index > num_vars {
            return Err(ParseError {
                position: start,
                message: format!("variable u{index} out of range: only {num_vars} variable(s)"),
            });
        }
        Ok(index - 1)
    }
}

/// Parses the polynomial grammar over `num_vars` variables.
pub fn parse_polynomial(input: &str, num_vars: usize) -> Result<Polynomial<Q>, ParseError> {
    let mut cursor = Cursor::new(input);
    let poly = expr(&mut cursor, num_vars)?;
    if !cursor.at_end() {
        return Err(cursor.error("unexpected trailing input"));
    }
    Ok(poly)
}

fn expr(c: &mut Cursor, num_vars: usize) -> Result<Polynomial<Q>, ParseError> {
    let mut acc = if c.eat(b'-') {
        term(c, num_vars)?.neg()
    } else {
        c.eat(b'+');
        term(c, num_vars)?
    };
    loop {
        if c.eat(b'+') {
            acc = acc.add(&term(c, num_vars)?);
        } else if c.eat(b'-') {
            acc = acc.sub(&term(c, num_vars)?);
        } else {
            return Ok(acc);
        }
    }
}

fn term(c: &mut Cursor, num_vars: usize) -> Result<Polynomial<Q>, ParseError> {
    let mut acc = factor(c, num_vars)?;
    while c.eat(b'*') {
        acc = acc.mul(&factor(c, num_vars)?);
    }
    Ok(acc)
}

fn factor(c: &mut Cursor, num_vars: usize) -> Result<Polynomial<Q>, ParseError> {
    let base = primary(c, num_vars)?;
    if c.eat(b'^') {
        let at = c.pos;
        let digits = c.digits()?;
        let exponent: u32 = digits.parse().map_err(|_| ParseError {
            position: at,
            message: format!("exponent {digits} is too large"),
        })?;
        Ok(base.pow(exponent))
    } else {
        Ok(base)
    }
}

fn primary(c: &mut Cursor, num_vars: usize) -> Result<Polynomial<Q>, ParseError> {
    match c.peek() {
        Some(b'(') => {
            c.eat(b'(');
            let inner = expr(c, num_vars)?;
            c.expect(b')', "a closing parenthesis")?;
            Ok(inner)
        }
        Some(b'u') => {
            let index = c.variable(num_vars)?;
            Ok(Polynomial::variable(num_vars, index))
        }
        Some(d) if d.is_ascii_digit() => {
            let value = c.rational()?;
            Ok(Polynomial::constant(num_vars, value))
        }
        _ => Err(c.error("expected a number, a variable like u1, or '('")),
    }
}

/// Parses a bracketed vector of rationals: `[2, -1/3, 0]`.
pub fn parse_vector(input: &str) -> Result<Vec<Q>, ParseError> {
    let mut c = Cursor::new(input);
    c.expect(b'[', "'[' to open the vector")?;
    let mut out = Vec::new();
    if !c.eat(b']') {
        loop {
            let negative = c.eat(b'-');
            let value = c.rational()?;
            out.push(if negative { -value } else { value });
            if c.eat(b']') {
                break;
            }
            c.expect(b',', "',' or ']'")?;
        }
    }
    if !c.at_end() {
        return Err(c.error("unexpected trailing input"));
    }
    if out.is_empty() {
        return Err(c.error("vector must have at least one entry"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use frobsym::polynomial::Monomial;
    use frobsym::Scalar;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn parses_standard_shapes() {
        let p = parse_polynomial("3/2*u1^2*u2 - u1 + 2", 2).unwrap();
        assert_eq!(
            p.coefficient(&Monomial::new(vec![2, 1])),
            Q::from_ratio(3, 2)
        );
        assert_eq!(p.coefficient(&Monomial::new(vec![1, 0])), q(-1));
        assert_eq!(p.coefficient(&Monomial::new(vec![0, 0])), q(2));
    }

    #[test]
    fn parses_parens_and_leading_minus() {
        let p = parse_polynomial("-(u1 - 2)^2", 1).unwrap();
        assert_eq!(p.coefficient(&Monomial::new(vec![2])), q(-1));
        assert_eq!(p.coefficient(&Monomial::new(vec![1])), q(4));
        assert_eq!(p.coefficient(&Monomial::new(vec![0])), q(-4));
    }

    #[test]
    fn rejects_out_of_range_variables() {
        let err = parse_polynomial("u3 + 1", 2).unwrap_err();
        assert_eq!(err.position, 0);
        assert!(err.message.contains("u3"));
    }

    #[test]
    fn rejects_trailing_garbage_with_position() {
        let err = parse_polynomial("u1 + ", 1).unwrap_err();
        assert!(err.message.contains("expected"));
        let err = parse_polynomial("u1 ) ", 1).unwrap_err();
        assert_eq!(err.position, 3);
    }

    #[test]
    fn rejects_zero_denominator() {
        let err = parse_polynomial("1/0", 1).unwrap_err();
        assert!(err.message.contains("denominator"));
    }

    #[test]
    fn parses_vectors() {
        assert_eq!(
            parse_vector("[2, -1/3, 0]").unwrap(),
            vec![q(2), Q::from_ratio(-1, 3), q(0)]
        );
        assert!(parse_vector("[]").is_err());
        assert!(parse_vector("[1, 2] junk").is_err());
    }
}
