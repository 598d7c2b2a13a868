//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := primary ('^' int)*
//! primary:= number | 'x'digit | '(' expr ')'
//!         | ('abs'|'sin'|'cos'|'exp') '(' expr ')'
//!         | 'max' '(' expr (',' expr)+ ')'
//!         | 'norm2sq' '(' ')'
//! ```
//!
//! Numbers are nonnegative decimal literals with optional exponent; a
//! leading minus parses as `Sub(0, term)` so that printing round-trips.

use super::ast::Expr;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<(Tok, usize)>> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b',' => {
                self.pos += 1;
                Tok::Comma
            }
            b'0'..=b'9' | b'.' => {
                let mut end = self.pos;
                let mut seen_e = false;
                while end < self.src.len() {
                    let ch = self.src[end];
                    let ok = ch.is_ascii_digit()
                        || ch == b'.'
                        || ch == b'e'
                        || ch == b'E'
                        || (seen_e
                            && (ch == b'+' || ch == b'-')
                            && matches!(self.src[end - 1], b'e' | b'E'));
                    if !ok {
                        break;
                    }
                    if ch == b'e' || ch == b'E' {
                        seen_e = true;
                    }
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                let v: f64 = text.parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: format!("invalid number literal {text:?}"),
                })?;
                self.pos = end;
                Tok::Num(v)
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let name = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_string();
                self.pos = end;
                Tok::Ident(name)
            }
            other => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character {:?}", other as char),
                })
            }
        };
        Ok(Some((tok, start)))
    }
}

pub struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    len: usize,
}

impl Parser {
    pub fn parse(src: &str) -> Result<Expr> {
        let toks = Lexer::tokens(src)?;
        let mut p = Parser {
            toks,
            idx: 0,
            len: src.len(),
        };
        let e = p.expr()?;
        if let Some((t, pos)) = p.peek_at() {
            return Err(Error::Parse {
                pos,
                msg: format!("unexpected trailing token {t:?}"),
            });
        }
        Ok(e)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    fn peek_at(&self) -> Option<(Tok, usize)> {
        self.toks.get(self.idx).cloned()
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.len, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _)| t.clone());
        self.idx += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            got => Err(Error::Parse {
                pos,
                msg: format!("expected {want:?}, got {got:?}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            Expr::Sub(Box::new(Expr::Num(0.0)), Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let mut base = self.primary()?;
        while matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Num(v)) if v >= 0.0 && v.fract() == 0.0 && v <= 1000.0 => {
                    base = Expr::Pow(Box::new(base), v as u32);
                }
                got => {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("exponent must be a nonnegative integer, got {got:?}"),
                    })
                }
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => self.ident(&name, pos),
            got => Err(Error::Parse {
                pos,
                msg: format!("expected a number, variable, call, or '(', got {got:?}"),
            }),
        }
    }

    fn ident(&mut self, name: &str, pos: usize) -> Result<Expr> {
        // Variables: x1 .. x9
        if let Some(rest) = name.strip_prefix('x') {
            if rest.len() == 1 && rest.as_bytes()[0].is_ascii_digit() && rest != "0" {
                return Ok(Expr::Var(rest.parse().unwrap()));
            }
        }
        let unary = |p: &mut Parser, wrap: fn(Box<Expr>) -> Expr| -> Result<Expr> {
            p.expect(Tok::LParen)?;
            let e = p.expr()?;
            p.expect(Tok::RParen)?;
            Ok(wrap(Box::new(e)))
        };
        match name {
            "abs" => unary(self, Expr::Abs),
            "sin" => unary(self, Expr::Sin),
            "cos" => unary(self, Expr::Cos),
            "exp" => unary(self, Expr::Exp),
            "max" => {
                self.expect(Tok::LParen)?;
                let mut args = vec![self.expr()?];
                while matches!(self.peek(), Some(Tok::Comma)) {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Tok::RParen)?;
                if args.len() < 2 {
                    return Err(Error::Parse {
                        pos,
                        msg: "max needs at least two arguments".into(),
                    });
                }
                Ok(Expr::Max(args))
            }
            "norm2sq" => {
                self.expect(Tok::LParen)?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Norm2Sq)
            }
            other => Err(Error::UnknownIdentifier {
                name: other.to_string(),
                pos,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Expr {
        Parser::parse(s).unwrap()
    }

    #[test]
    fn simple_forms() {
        assert_eq!(parse("sin(x1)"), Expr::Sin(Box::new(Expr::Var(1))));
        assert_eq!(parse("x1^3"), Expr::Pow(Box::new(Expr::Var(1)), 3));
        assert_eq!(
            parse("-0.25*x1^2"),
            Expr::Sub(
                Box::new(Expr::Num(0.0)),
                Box::new(Expr::Mul(
                    Box::new(Expr::Num(0.25)),
                    Box::new(Expr::Pow(Box::new(Expr::Var(1)), 2))
                ))
            )
        );
    }

    #[test]
    fn errors_carry_positions() {
        match Parser::parse("1 + @") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match Parser::parse("1 + foo(2)") {
            Err(Error::UnknownIdentifier { name, pos }) => {
                assert_eq!(name, "foo");
                assert_eq!(pos, 4);
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn precedence() {
        // 1 + 2*x1^2 = Add(1, Mul(2, Pow(x1, 2)))
        let e = parse("1 + 2*x1^2");
        assert_eq!(e.eval_raw(&[3.0]).unwrap(), 19.0);
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "sin(x1)",
            "-0.25*x1^2",
            "x1^3",
            "abs(x1 - 2) + 0.5*x2",
            "max(x1, 0, 1 - x1)",
            "norm2sq() - x1*x2",
            "(x1 + x2)^2*0.5",
            "exp(x1) - 1",
        ] {
            let e = parse(s);
            let printed = e.to_text();
            assert_eq!(parse(&printed), e, "round trip failed for {s:?} -> {printed:?}");
        }
    }
}
