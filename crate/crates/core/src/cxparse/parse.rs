use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use num_complex::Complex64;

use super::{BinOp, Expr, Func, Grammar};
use crate::{Error, ParseError, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
    text: String,
}

const START_OF_OPERAND: &[&str] = &["number", "identifier", "'('", "'-'"];

fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // Exponent only when digits follow, so `2e` stays a syntax error rather than a number.
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
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| {
                Error::Syntax(ParseError { offset: start, expected: vec!["number"], found: text.to_string() })
            })?;
            if !value.is_finite() {
                return Err(Error::Overflow);
            }
            out.push(Token { tok: Tok::Num(value), offset: start, text: text.to_string() });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let text = &src[start..i];
            out.push(Token { tok: Tok::Ident(text.to_string()), offset: start, text: text.to_string() });
            continue;
        }
        let tok = match c {
            b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c as char),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax(ParseError {
                    offset: start,
                    expected: START_OF_OPERAND.to_vec(),
                    found: ch.to_string(),
                }));
            }
        };
        i += 1;
        out.push(Token { tok, offset: start, text: src[start..i].to_string() });
    }
    out.push(Token { tok: Tok::Eof, offset: src.len(), text: String::new() });
    Ok(out)
}

struct Parser<'g> {
    tokens: Vec<Token>,
    pos: usize,
    grammar: &'g Grammar,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> Error {
        let t = self.peek();
        Error::Syntax(ParseError { offset: t.offset, expected: expected.to_vec(), found: t.text.clone() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek().tok == Tok::Op('^') {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(x) => {
                self.bump();
                Ok(Expr::constant(x))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(ref name) => {
                self.bump();
                if let Some(func) = Func::from_name(name) {
                    if self.peek().tok != Tok::LParen {
                        return Err(self.error(&["'('"]));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                self.identifier(name, t.offset)
            }
            _ => Err(self.error(START_OF_OPERAND)),
        }
    }

    fn identifier(&self, name: &str, offset: usize) -> Result<Expr> {
        if let Some(k) = self.grammar.vars.iter().position(|v| *v == name) {
            return Ok(Expr::Var(k));
        }
        match name {
            "pi" => Ok(Expr::constant(PI)),
            "e" => Ok(Expr::constant(E)),
            "i" if self.grammar.complex => Ok(Expr::Const(Complex64::new(0.0, 1.0))),
            _ => Err(Error::UnknownIdentifier { name: name.to_string(), offset }),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if self.peek().tok == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&["')'", "operator"]))
        }
    }
}

/// Parses `src` under the given grammar.
pub fn parse_with(src: &str, grammar: &Grammar) -> Result<Expr> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0, grammar };
    if p.peek().tok == Tok::Eof {
        return Err(p.error(START_OF_OPERAND));
    }
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

/// Parses a holomorphic expression in `z`.
pub fn parse_expr(src: &str) -> Result<Expr> {
    parse_with(src, &Grammar::COMPLEX)
}

/// Parses a real expression in `u`, `v`.
pub fn parse_real(src: &str) -> Result<Expr> {
    parse_with(src, &Grammar::REAL_UV)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syntax(src: &str) -> ParseError {
        match parse_expr(src) {
            Err(Error::Syntax(p)) => p,
            other => panic!("expected syntax error for {src:?}, got {other:?}"),
        }
    }

    #[test]
    fn trailing_operator_reports_end_offset() {
        let e = syntax("z +");
        assert_eq!(e.offset, 3);
        assert!(e.expected.contains(&"number"));
        assert!(e.found.is_empty());
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse_expr(" z ^ 2 +1 ").unwrap(), parse_expr("z^2+1").unwrap());
    }

    #[test]
    fn power_is_right_associative_and_above_negation() {
        let e = parse_expr("-z^2^3").unwrap();
        let Expr::Neg(inner) = e else { panic!("expected negation on top") };
        let Expr::Binary(BinOp::Pow, base, exp) = *inner else { panic!() };
        assert_eq!(*base, Expr::Var(0));
        assert!(matches!(*exp, Expr::Binary(BinOp::Pow, ..)));
    }

    #[test]
    fn unknown_identifier_has_offset() {
        assert_eq!(
            parse_expr("z + w").unwrap_err(),
            Error::UnknownIdentifier { name: "w".into(), offset: 4 }
        );
    }

    #[test]
    fn real_grammar_rejects_i_and_z() {
        assert!(matches!(parse_real("u*i"), Err(Error::UnknownIdentifier { .. })));
        assert!(matches!(parse_real("z"), Err(Error::UnknownIdentifier { .. })));
        assert_eq!(parse_real("u*v").unwrap().size(), 3);
    }

    #[test]
    fn misc_syntax_errors() {
        assert_eq!(syntax("").offset, 0);
        assert_eq!(syntax("(z").offset, 2);
        assert_eq!(syntax("z z").offset, 2);
        assert_eq!(syntax("exp z").offset, 4);
        assert_eq!(syntax("z # 1").offset, 2);
        assert_eq!(syntax("2e").offset, 1);
    }

    #[test]
    fn scientific_literals() {
        assert_eq!(parse_expr("1.5e-3").unwrap(), Expr::constant(1.5e-3));
        assert_eq!(parse_expr(".5").unwrap(), Expr::constant(0.5));
    }
}
