//! Recursive-descent parser for scalar-field expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' power)?          exponent must be a nonnegative integer
//! atom   := integer | identifier | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::chart::Chart;
use super::field::ScalarField;
use super::poly::Rational;
use crate::error::{Error, Result};

pub fn parse_scalar(text: &str, chart: &Chart) -> Result<ScalarField> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, chart };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(&["operator", "end of input"]));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    chart: &'a Chart,
}

const OPERAND: &[&str] = &["number", "identifier", "'('", "'-'"];

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.chart.dim()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, expected: &[&str]) -> Error {
        Error::SyntaxError { offset: self.pos, expected: expected.iter().map(|s| s.to_string()).collect() }
    }

    fn expr(&mut self) -> Result<ScalarField> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarField> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ScalarField> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarField> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let exponent = self.power()?;
        let e = exponent
            .constant_value()
            .filter(|c| c.is_integer() && !c.is_negative())
            .and_then(|c| c.to_integer().to_u32())
            .ok_or(Error::SyntaxError { offset: at, expected: vec!["nonnegative integer exponent".into()] })?;
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<ScalarField> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax(&["')'"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let n: BigInt = digits.parse().expect("digits");
                Ok(ScalarField::constant(self.nvars(), Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.chart.index_of(name) {
                    Some(i) => Ok(ScalarField::var(self.nvars(), i)),
                    None => Err(Error::UnknownIdentifier { name: name.to_string(), offset: start }),
                }
            }
            _ => Err(self.syntax(OPERAND)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> Chart {
        Chart::new(["x", "y", "z"]).unwrap()
    }

    fn show(text: &str) -> String {
        let chart = xyz();
        parse_scalar(text, &chart).unwrap().display(&chart).to_string()
    }

    #[test]
    fn literals_and_cancellation() {
        assert_eq!(show("1+z^2"), "1+z^2");
        assert_eq!(show("(x^2-y^2)/(x-y)"), "y+x");
        assert_eq!(show("3/4"), "3/4");
        assert_eq!(show("z*(1+z^2)"), "z+z^3");
    }

    #[test]
    fn precedence() {
        assert_eq!(show("-x^2"), "-x^2");
        assert_eq!(show("2^3^2"), "512");
        assert_eq!(show("1-2-3"), "-4");
        assert_eq!(show("12/2/3"), "2");
        assert_eq!(show("-(x+y)*2"), "-2*y-2*x");
    }

    #[test]
    fn errors() {
        let chart = xyz();
        assert_eq!(
            parse_scalar("x+", &chart).unwrap_err(),
            Error::SyntaxError { offset: 2, expected: OPERAND.iter().map(|s| s.to_string()).collect() }
        );
        assert!(matches!(parse_scalar("w+1", &chart), Err(Error::UnknownIdentifier { offset: 0, .. })));
        assert!(matches!(parse_scalar("x^-1", &chart), Err(Error::SyntaxError { offset: 2, .. })));
        assert!(matches!(parse_scalar("x^y", &chart), Err(Error::SyntaxError { offset: 2, .. })));
        assert!(matches!(parse_scalar("(x", &chart), Err(Error::SyntaxError { offset: 2, .. })));
        assert!(matches!(parse_scalar("x y", &chart), Err(Error::SyntaxError { offset: 2, .. })));
        assert_eq!(parse_scalar("1/(x-x)", &chart), Err(Error::DivisionByZeroField));
    }

    #[test]
    fn printed_rational_functions_reparse() {
        let chart = xyz();
        for text in ["1/(1+z^2)", "-2*z/(1+2*z^2+z^4)", "(x+y)/(x-y)", "3/4*x/y^2", "x/(y*z)", "-x/(2*y)"] {
            let f = parse_scalar(text, &chart).unwrap();
            let printed = f.display(&chart).to_string();
            assert_eq!(parse_scalar(&printed, &chart).unwrap(), f, "{text} -> {printed}");
        }
    }
}
