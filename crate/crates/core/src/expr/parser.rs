//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (("+"|"-") term)* ;
//! term   := factor (("*"|"/") factor)* ;
//! factor := "-" factor | power ;
//! power  := atom ("^" factor)? ;
//! atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")" ;
//! ```
//!
//! `^` is right-associative. `pi` is a built-in constant; `i` is the
//! imaginary unit (valid only under complex evaluation); `e` is rejected
//! with a hint to use `exp`.

use super::ast::{Ast, AstKind, BinOp};
use super::lexer::{tokenize, SpannedTok, Tok};
use crate::error::ParseError;
use crate::field::Func;

pub(crate) struct ParseOutput {
    pub ast: Ast,
    pub params: Vec<String>,
}

struct Parser<'a> {
    toks: Vec<SpannedTok>,
    pos: usize,
    vars: &'a [String],
    params: Vec<String>,
}

pub(crate) fn parse(src: &str, vars: &[String]) -> Result<ParseOutput, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, vars, params: Vec::new() };
    let ast = p.expr()?;
    match &p.peek().tok {
        Tok::End => Ok(ParseOutput { ast, params: p.params }),
        other => Err(ParseError::Syntax {
            pos: p.peek().start,
            found: other.describe(),
            expected: vec!["`+`", "`-`", "`*`", "`/`", "`^`", "end of input"],
        }),
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &SpannedTok {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> SpannedTok {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &'static str) -> Result<SpannedTok, ParseError> {
        if self.peek().tok == want {
            Ok(self.bump())
        } else {
            Err(ParseError::Syntax {
                pos: self.peek().start,
                found: self.peek().tok.describe(),
                expected: vec![what],
            })
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            let span = (lhs.span.0, rhs.span.1);
            lhs = Ast { kind: AstKind::Bin(op, Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            let span = (lhs.span.0, rhs.span.1);
            lhs = Ast { kind: AstKind::Bin(op, Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        if self.peek().tok == Tok::Minus {
            let start = self.peek().start;
            self.bump();
            let inner = self.factor()?;
            let span = (start, inner.span.1);
            // Fold negation of a literal so `x^-2` keeps its integer-power
            // form through a print/parse round trip.
            if let AstKind::Num(n) = inner.kind {
                return Ok(Ast { kind: AstKind::Num(-n), span });
            }
            return Ok(Ast { kind: AstKind::Neg(Box::new(inner)), span });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let exponent = self.factor()?;
            let span = (base.span.0, exponent.span.1);
            // Literal integer exponents of modest size use the repeated-
            // multiplication route, which is defined for negative bases.
            if let AstKind::Num(n) = exponent.kind {
                if n.fract() == 0.0 && n.abs() <= 16.0 {
                    return Ok(Ast {
                        kind: AstKind::PowInt(Box::new(base), n as i32),
                        span,
                    });
                }
            }
            return Ok(Ast {
                kind: AstKind::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)),
                span,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Number(n) => Ok(Ast { kind: AstKind::Num(n), span: (t.start, t.end) }),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Ast { kind: inner.kind, span: (t.start, close.end) })
            }
            Tok::Ident(name) => self.ident(name, t.start, t.end),
            other => Err(ParseError::Syntax {
                pos: t.start,
                found: other.describe(),
                expected: vec!["number", "identifier", "`(`", "`-`"],
            }),
        }
    }

    fn ident(&mut self, name: String, start: usize, end: usize) -> Result<Ast, ParseError> {
        if self.peek().tok == Tok::LParen {
            // Function application.
            let func = Func::from_name(&name).ok_or(ParseError::UnknownFunction {
                name: name.clone(),
                pos: start,
            })?;
            self.bump();
            let mut args = vec![self.expr()?];
            while self.peek().tok == Tok::Comma {
                self.bump();
                args.push(self.expr()?);
            }
            let close = self.expect(Tok::RParen, "`)`")?;
            if args.len() != 1 {
                return Err(ParseError::WrongArity {
                    name,
                    expected: 1,
                    got: args.len(),
                    pos: start,
                });
            }
            let arg = args.pop().expect("one argument");
            return Ok(Ast {
                kind: AstKind::Call(func, Box::new(arg)),
                span: (start, close.end),
            });
        }

        if let Some(idx) = self.vars.iter().position(|v| v == &name) {
            return Ok(Ast { kind: AstKind::Var(idx), span: (start, end) });
        }
        match name.as_str() {
            "pi" => Ok(Ast { kind: AstKind::Pi, span: (start, end) }),
            "i" => Ok(Ast { kind: AstKind::ImUnit, span: (start, end) }),
            "e" => Err(ParseError::UnknownIdentifier {
                name,
                pos: start,
                hint: " (exponentials must be written `exp(u)`)".into(),
            }),
            _ if Func::from_name(&name).is_some() => Err(ParseError::UnknownIdentifier {
                name,
                pos: start,
                hint: " (function names need an argument list)".into(),
            }),
            _ => {
                let idx = match self.params.iter().position(|p| p == &name) {
                    Some(i) => i,
                    None => {
                        self.params.push(name);
                        self.params.len() - 1
                    }
                };
                Ok(Ast { kind: AstKind::Param(idx), span: (start, end) })
            }
        }
    }
}
