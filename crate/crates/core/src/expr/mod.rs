//! A small arithmetic expression language for surface definitions.
//!
//! Expressions are parsed once into an immutable [`CompiledExpr`] and then
//! evaluated generically over any [`Scalar`]: plain reals, complex numbers,
//! or second-order jets of either. That single code path supplies values,
//! gradients, and Hessians everywhere the toolkit needs them.
//!
//! The grammar (normative):
//!
//! ```text
//! expr   := term (("+"|"-") term)* ;
//! term   := factor (("*"|"/") factor)* ;
//! factor := "-" factor | power ;
//! power  := atom ("^" factor)? ;
//! atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")" ;
//! ```
//!
//! Functions: sin, cos, tan, sinh, cosh, tanh, asinh, exp, log, sqrt, abs.
//! `pi` is a built-in constant; `i` is the imaginary unit and errors under
//! real evaluation. There is no implicit multiplication and no `e` constant.
//! Identifiers that are neither declared variables nor built-ins become
//! real-valued parameters, bound at evaluation time.

mod ast;
mod lexer;
mod parser;

use std::collections::BTreeMap;

use crate::error::{EvalError, MathError, ParseError};
use crate::field::{powi, Scalar};

use ast::{Ast, AstKind, BinOp};

/// Raw expression source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceExpr(pub String);

impl<T: Into<String>> From<T> for SourceExpr {
    fn from(s: T) -> Self {
        SourceExpr(s.into())
    }
}

/// A parsed, immutable expression over one or two variables plus named
/// real parameters. Safe to share across threads; evaluation is reentrant.
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    source: String,
    ast: Ast,
    vars: Vec<String>,
    params: Vec<String>,
}

impl CompiledExpr {
    /// Parse `src` with the given variable names (one or two, distinct,
    /// none of them reserved).
    pub fn parse(src: impl Into<SourceExpr>, variables: &[&str]) -> Result<Self, ParseError> {
        let src = src.into().0;
        if variables.is_empty() || variables.len() > 2 {
            return Err(ParseError::BadVariableList);
        }
        if variables.len() == 2 && variables[0] == variables[1] {
            return Err(ParseError::BadVariableList);
        }
        for v in variables {
            let reserved =
                *v == "pi" || *v == "i" || *v == "e" || crate::field::Func::from_name(v).is_some();
            if reserved {
                return Err(ParseError::ReservedName { name: v.to_string() });
            }
        }
        let vars: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        let out = parser::parse(&src, &vars)?;
        Ok(CompiledExpr { source: src, ast: out.ast, vars, params: out.params })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Number of free variables (1 or 2).
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    /// Parameter names in first-occurrence order.
    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Canonical printed form; parsing it back yields a structurally
    /// identical tree.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        self.ast.print(&self.vars, &self.params, &mut out);
        out
    }

    /// Structural equality of the parse trees (spans and source ignored).
    pub fn structurally_equal(&self, other: &CompiledExpr) -> bool {
        self.vars == other.vars
            && self.params == other.params
            && self.ast.structurally_equal(&other.ast)
    }

    /// Evaluate at `point` (length must equal [`CompiledExpr::arity`]) with
    /// every parameter bound in `params`.
    pub fn eval<S: Scalar>(
        &self,
        point: &[S],
        params: &BTreeMap<String, f64>,
    ) -> Result<S, EvalError> {
        assert_eq!(
            point.len(),
            self.vars.len(),
            "point arity {} does not match expression arity {}",
            point.len(),
            self.vars.len()
        );
        let mut bound = Vec::with_capacity(self.params.len());
        for name in &self.params {
            match params.get(name) {
                Some(v) => bound.push(S::from_f64(*v)),
                None => return Err(EvalError::unbound_param(name, &self.source)),
            }
        }
        self.eval_node(&self.ast, point, &bound)
    }

    fn eval_node<S: Scalar>(&self, node: &Ast, point: &[S], bound: &[S]) -> Result<S, EvalError> {
        let fail = |m: MathError, span: crate::error::Span| EvalError {
            source: m,
            span,
            snippet: self.source[span.0..span.1].to_string(),
        };
        match &node.kind {
            AstKind::Num(n) => Ok(S::from_f64(*n)),
            AstKind::Pi => Ok(S::from_f64(std::f64::consts::PI)),
            AstKind::ImUnit => S::imaginary_unit().map_err(|m| fail(m, node.span)),
            AstKind::Var(k) => Ok(point[*k].clone()),
            AstKind::Param(k) => Ok(bound[*k].clone()),
            AstKind::Neg(inner) => Ok(self.eval_node(inner, point, bound)?.neg()),
            AstKind::Bin(op, lhs, rhs) => {
                let a = self.eval_node(lhs, point, bound)?;
                let b = self.eval_node(rhs, point, bound)?;
                match op {
                    BinOp::Add => Ok(a.add(&b)),
                    BinOp::Sub => Ok(a.sub(&b)),
                    BinOp::Mul => Ok(a.mul(&b)),
                    BinOp::Div => a.div(&b).map_err(|m| fail(m, node.span)),
                    BinOp::Pow => a.pow(&b).map_err(|m| fail(m, node.span)),
                }
            }
            AstKind::PowInt(base, n) => {
                let b = self.eval_node(base, point, bound)?;
                powi(&b, *n).map_err(|m| fail(m, node.span))
            }
            AstKind::Call(f, arg) => {
                let a = self.eval_node(arg, point, bound)?;
                a.apply(*f).map_err(|m| fail(m, node.span))
            }
        }
    }
}

/// Convenience: evaluate a real expression of two variables.
pub fn eval_real2(
    e: &CompiledExpr,
    p: (f64, f64),
    params: &BTreeMap<String, f64>,
) -> Result<f64, EvalError> {
    e.eval(&[p.0, p.1], params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Func;
    use num_complex::Complex64;

    fn no_params() -> BTreeMap<String, f64> {
        BTreeMap::new()
    }

    #[test]
    fn collects_params() {
        let e = CompiledExpr::parse("a*asinh(sqrt(x^2+y^2)/a)", &["x", "y"]).unwrap();
        assert_eq!(e.params(), &["a".to_string()]);
        assert_eq!(e.arity(), 2);
    }

    #[test]
    fn rejects_euler_identifier() {
        let err = CompiledExpr::parse("-e^u", &["u"]).unwrap_err();
        match err {
            ParseError::UnknownIdentifier { name, hint, .. } => {
                assert_eq!(name, "e");
                assert!(hint.contains("exp"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn catalog_sources_have_empty_params() {
        let e = CompiledExpr::parse("sinh(u)+sinh(v)", &["u", "v"]).unwrap();
        assert!(e.params().is_empty());
    }

    #[test]
    fn pythagorean_eval() {
        let e = CompiledExpr::parse("sqrt(x^2+y^2)", &["x", "y"]).unwrap();
        let v = e.eval(&[3.0, 4.0], &no_params()).unwrap();
        assert_eq!(v, 5.0);
    }

    #[test]
    fn complex_principal_branch_eval() {
        let e = CompiledExpr::parse("sqrt(x^2+y^2)", &["x", "y"]).unwrap();
        let v = e
            .eval(
                &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)],
                &no_params(),
            )
            .unwrap();
        assert!(v.re.abs() < 1e-15);
        assert!((v.im - 3.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn imaginary_unit_errors_over_reals() {
        let e = CompiledExpr::parse("i*x", &["x"]).unwrap();
        let err = e.eval(&[1.0_f64], &no_params()).unwrap_err();
        assert_eq!(err.source, MathError::ImaginaryUnitInRealContext);
        assert!(e.eval(&[Complex64::new(1.0, 0.0)], &no_params()).is_ok());
    }

    #[test]
    fn caret_is_right_associative() {
        let e = CompiledExpr::parse("x^2^3", &["x"]).unwrap();
        // x^(2^3) = x^8: 2^(2^3) = 256.
        let v = e.eval(&[2.0_f64], &no_params()).unwrap();
        assert_eq!(v, 256.0);
    }

    #[test]
    fn unary_minus_binds_below_power() {
        let e = CompiledExpr::parse("-x^2", &["x"]).unwrap();
        let v = e.eval(&[3.0_f64], &no_params()).unwrap();
        assert_eq!(v, -9.0);
    }

    #[test]
    fn negative_base_integer_power() {
        let e = CompiledExpr::parse("x^2", &["x"]).unwrap();
        assert_eq!(e.eval(&[-3.0_f64], &no_params()).unwrap(), 9.0);
    }

    #[test]
    fn domain_error_carries_snippet() {
        let e = CompiledExpr::parse("1+sqrt(x-2)", &["x"]).unwrap();
        let err = e.eval(&[0.0_f64], &no_params()).unwrap_err();
        assert_eq!(err.source, MathError::Domain { func: "sqrt" });
        assert_eq!(err.snippet, "sqrt(x-2)");
    }

    #[test]
    fn unbound_parameter_is_reported() {
        let e = CompiledExpr::parse("a*x", &["x"]).unwrap();
        assert!(e.eval(&[1.0_f64], &no_params()).is_err());
    }

    #[test]
    fn wrong_arity_call() {
        let err = CompiledExpr::parse("sin(x,y)", &["x", "y"]).unwrap_err();
        assert!(matches!(err, ParseError::WrongArity { got: 2, .. }));
    }

    #[test]
    fn unknown_function_call() {
        let err = CompiledExpr::parse("foo(x)", &["x"]).unwrap_err();
        assert!(matches!(err, ParseError::UnknownFunction { .. }));
    }

    #[test]
    fn print_parse_round_trip_samples() {
        // Undeclared identifiers (u, v, a) round-trip as parameters.
        for src in [
            "a*asinh(sqrt(x^2+y^2)/a)",
            "-(sinh(u)+sinh(v))",
            "x^-2",
            "x^2^3",
            "1/(x*y)",
            "x-(y-1)",
            "-x^2+3.5e-2",
            "pi*cos(x/2)",
        ] {
            let e = CompiledExpr::parse(src, &["x", "y"]).unwrap();
            let printed = e.to_source();
            let reparsed = CompiledExpr::parse(printed.as_str(), &["x", "y"]).unwrap();
            assert!(
                e.structurally_equal(&reparsed),
                "round trip failed: {src} -> {printed}"
            );
        }
    }

    #[test]
    fn func_set_is_closed() {
        for name in [
            "sin", "cos", "tan", "sinh", "cosh", "tanh", "asinh", "exp", "log", "sqrt", "abs",
        ] {
            assert!(Func::from_name(name).is_some());
        }
        assert!(Func::from_name("atan").is_none());
    }
}
