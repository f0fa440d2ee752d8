//! Expression trees and the canonical printer.

use crate::error::Span;
use crate::field::Func;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum AstKind {
    Num(f64),
    Pi,
    ImUnit,
    Var(usize),
    Param(usize),
    Neg(Box<Ast>),
    Bin(BinOp, Box<Ast>, Box<Ast>),
    /// `base ^ n` for a literal integer exponent; evaluated by repeated
    /// multiplication so negative bases stay in-domain.
    PowInt(Box<Ast>, i32),
    Call(Func, Box<Ast>),
}

#[derive(Debug, Clone)]
pub(crate) struct Ast {
    pub kind: AstKind,
    pub span: Span,
}

impl Ast {
    /// Structural equality, ignoring spans.
    pub(crate) fn structurally_equal(&self, other: &Ast) -> bool {
        match (&self.kind, &other.kind) {
            (AstKind::Num(a), AstKind::Num(b)) => a.to_bits() == b.to_bits(),
            (AstKind::Pi, AstKind::Pi) => true,
            (AstKind::ImUnit, AstKind::ImUnit) => true,
            (AstKind::Var(a), AstKind::Var(b)) => a == b,
            (AstKind::Param(a), AstKind::Param(b)) => a == b,
            (AstKind::Neg(a), AstKind::Neg(b)) => a.structurally_equal(b),
            (AstKind::Bin(op_a, a1, a2), AstKind::Bin(op_b, b1, b2)) => {
                op_a == op_b && a1.structurally_equal(b1) && a2.structurally_equal(b2)
            }
            (AstKind::PowInt(a, n), AstKind::PowInt(b, m)) => {
                n == m && a.structurally_equal(b)
            }
            (AstKind::Call(f, a), AstKind::Call(g, b)) => {
                f == g && a.structurally_equal(b)
            }
            _ => false,
        }
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            AstKind::Num(n) if *n < 0.0 => 3,
            AstKind::Num(_)
            | AstKind::Pi
            | AstKind::ImUnit
            | AstKind::Var(_)
            | AstKind::Param(_)
            | AstKind::Call(..) => 5,
            AstKind::Neg(_) => 3,
            AstKind::Bin(op, ..) => op.precedence(),
            AstKind::PowInt(..) => 4,
        }
    }

    /// Canonical source form; reparsing yields a structurally identical tree.
    pub(crate) fn print(&self, vars: &[String], params: &[String], out: &mut String) {
        match &self.kind {
            AstKind::Num(n) => {
                // `{:?}` is the shortest representation that round-trips, and
                // it stays inside the literal grammar (digits, fraction, exp).
                out.push_str(&format!("{n:?}"));
            }
            AstKind::Pi => out.push_str("pi"),
            AstKind::ImUnit => out.push('i'),
            AstKind::Var(k) => out.push_str(&vars[*k]),
            AstKind::Param(k) => out.push_str(&params[*k]),
            AstKind::Neg(inner) => {
                out.push('-');
                self.print_child(inner, 3, vars, params, out);
            }
            AstKind::Bin(BinOp::Pow, lhs, rhs) => {
                // Grammar: power := atom ("^" factor)?; the base must print
                // at atom level, the exponent at factor level.
                self.print_child(lhs, 5, vars, params, out);
                out.push('^');
                self.print_child(rhs, 3, vars, params, out);
            }
            AstKind::Bin(op, lhs, rhs) => {
                let p = op.precedence();
                self.print_child(lhs, p, vars, params, out);
                out.push_str(op.symbol());
                self.print_child(rhs, p + 1, vars, params, out);
            }
            AstKind::PowInt(base, n) => {
                self.print_child(base, 5, vars, params, out);
                out.push('^');
                if *n < 0 {
                    out.push('-');
                }
                out.push_str(&n.unsigned_abs().to_string());
            }
            AstKind::Call(f, arg) => {
                out.push_str(f.name());
                out.push('(');
                arg.print(vars, params, out);
                out.push(')');
            }
        }
    }

    fn print_child(
        &self,
        child: &Ast,
        min_prec: u8,
        vars: &[String],
        params: &[String],
        out: &mut String,
    ) {
        if child.precedence() < min_prec {
            out.push('(');
            child.print(vars, params, out);
            out.push(')');
        } else {
            child.print(vars, params, out);
        }
    }
}
