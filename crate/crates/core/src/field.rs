//! Base scalar fields (`f64`, `Complex64`) and the generic [`Scalar`] interface
//! the expression evaluator works over.
//!
//! `Field` is the arithmetic the jet algebra is built on; `Scalar` is what
//! [`crate::expr::CompiledExpr::eval`] requires. Every `Field` is a `Scalar`,
//! and so is a second-order jet over a `Field`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::MathError;

/// The function set of the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Asinh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Asinh => "asinh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "asinh" => Func::Asinh,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// A base field for jets: closed under +, -, ×, checked ÷, with the
/// elementary function set and the derivative data the chain rule needs.
///
/// Implemented for `f64` (real evaluation) and `Complex64` (principal
/// branches everywhere).
pub trait Field:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn is_zero(self) -> bool;
    /// Real and imaginary parts (imaginary part 0 for real fields).
    fn re_im(self) -> (f64, f64);

    fn div(self, rhs: Self) -> Result<Self, MathError>;
    fn imaginary_unit() -> Result<Self, MathError>;

    // Elementary functions on values. Entire functions are infallible; the
    // rest carry the base field's domain rules.
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn tanh(self) -> Self;
    fn exp(self) -> Self;
    fn tan(self) -> Result<Self, MathError>;
    fn asinh(self) -> Result<Self, MathError>;
    fn log(self) -> Result<Self, MathError>;
    fn sqrt(self) -> Result<Self, MathError>;
    fn abs(self) -> Result<Self, MathError>;
    fn pow(self, e: Self) -> Result<Self, MathError>;

    // (f, f', f'') triples for the second-order chain rule. Only the
    // functions whose derivative domain differs from the value domain need
    // per-field care; the rest have generic defaults.
    fn sqrt_d(self) -> Result<(Self, Self, Self), MathError>;
    fn log_d(self) -> Result<(Self, Self, Self), MathError>;
    fn asinh_d(self) -> Result<(Self, Self, Self), MathError>;
    fn abs_d(self) -> Result<(Self, Self, Self), MathError>;

    fn sin_d(self) -> (Self, Self, Self) {
        let s = self.sin();
        let c = self.cos();
        (s, c, -s)
    }
    fn cos_d(self) -> (Self, Self, Self) {
        let s = self.sin();
        let c = self.cos();
        (c, -s, -c)
    }
    fn sinh_d(self) -> (Self, Self, Self) {
        let s = self.sinh();
        let c = self.cosh();
        (s, c, s)
    }
    fn cosh_d(self) -> (Self, Self, Self) {
        let s = self.sinh();
        let c = self.cosh();
        (c, s, c)
    }
    fn exp_d(self) -> (Self, Self, Self) {
        let e = self.exp();
        (e, e, e)
    }
    fn tan_d(self) -> Result<(Self, Self, Self), MathError> {
        let t = self.tan()?;
        let d1 = Self::one() + t * t;
        let d2 = Self::from_f64(2.0) * t * d1;
        Ok((t, d1, d2))
    }
    fn tanh_d(self) -> (Self, Self, Self) {
        let t = self.tanh();
        let d1 = Self::one() - t * t;
        let d2 = Self::from_f64(-2.0) * t * d1;
        (t, d1, d2)
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn is_zero(self) -> bool {
        self == 0.0
    }
    fn re_im(self) -> (f64, f64) {
        (self, 0.0)
    }

    fn div(self, rhs: Self) -> Result<Self, MathError> {
        if rhs == 0.0 {
            Err(MathError::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }

    fn imaginary_unit() -> Result<Self, MathError> {
        Err(MathError::ImaginaryUnitInRealContext)
    }

    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn tanh(self) -> Self {
        f64::tanh(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn tan(self) -> Result<Self, MathError> {
        // No f64 is an exact odd multiple of pi/2, so tan is finite.
        Ok(f64::tan(self))
    }
    fn asinh(self) -> Result<Self, MathError> {
        Ok(f64::asinh(self))
    }
    fn log(self) -> Result<Self, MathError> {
        if self > 0.0 {
            Ok(f64::ln(self))
        } else {
            Err(MathError::Domain { func: "log" })
        }
    }
    fn sqrt(self) -> Result<Self, MathError> {
        if self >= 0.0 {
            Ok(f64::sqrt(self))
        } else {
            Err(MathError::Domain { func: "sqrt" })
        }
    }
    fn abs(self) -> Result<Self, MathError> {
        Ok(f64::abs(self))
    }
    fn pow(self, e: Self) -> Result<Self, MathError> {
        if self > 0.0 {
            Ok(self.powf(e))
        } else if self == 0.0 {
            if e > 0.0 {
                Ok(0.0)
            } else {
                Err(MathError::ZeroToNonPositivePower)
            }
        } else if e.fract() == 0.0 && e.abs() < 4.0e18 {
            Ok(self.powf(e))
        } else {
            Err(MathError::Domain { func: "pow" })
        }
    }

    fn sqrt_d(self) -> Result<(Self, Self, Self), MathError> {
        if self < 0.0 {
            return Err(MathError::Domain { func: "sqrt" });
        }
        if self == 0.0 {
            return Err(MathError::DerivativeSingularity { func: "sqrt" });
        }
        let s = f64::sqrt(self);
        let d1 = 0.5 / s;
        let d2 = -0.25 / (s * self);
        Ok((s, d1, d2))
    }
    fn log_d(self) -> Result<(Self, Self, Self), MathError> {
        if self <= 0.0 {
            return Err(MathError::Domain { func: "log" });
        }
        Ok((f64::ln(self), 1.0 / self, -1.0 / (self * self)))
    }
    fn asinh_d(self) -> Result<(Self, Self, Self), MathError> {
        let w = 1.0 + self * self;
        let s = f64::sqrt(w);
        Ok((f64::asinh(self), 1.0 / s, -self / (w * s)))
    }
    fn abs_d(self) -> Result<(Self, Self, Self), MathError> {
        if self == 0.0 {
            return Err(MathError::DerivativeSingularity { func: "abs" });
        }
        Ok((self.abs(), self.signum(), 0.0))
    }
}

impl Field for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn is_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn re_im(self) -> (f64, f64) {
        (self.re, self.im)
    }

    fn div(self, rhs: Self) -> Result<Self, MathError> {
        if rhs.is_zero() {
            Err(MathError::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }

    fn imaginary_unit() -> Result<Self, MathError> {
        Ok(Complex64::new(0.0, 1.0))
    }

    fn sin(self) -> Self {
        Complex64::sin(self)
    }
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
    fn sinh(self) -> Self {
        Complex64::sinh(self)
    }
    fn cosh(self) -> Self {
        Complex64::cosh(self)
    }
    fn tanh(self) -> Self {
        Complex64::tanh(self)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn tan(self) -> Result<Self, MathError> {
        if Complex64::cos(self).is_zero() {
            Err(MathError::DivisionByZero)
        } else {
            Ok(Complex64::tan(self))
        }
    }
    fn asinh(self) -> Result<Self, MathError> {
        // Principal branch: log(z + sqrt(z^2 + 1)).
        let w = self * self + Complex64::new(1.0, 0.0);
        let arg = self + w.sqrt();
        if arg.is_zero() {
            return Err(MathError::Domain { func: "asinh" });
        }
        Ok(arg.ln())
    }
    fn log(self) -> Result<Self, MathError> {
        if self.is_zero() {
            Err(MathError::Domain { func: "log" })
        } else {
            Ok(Complex64::ln(self))
        }
    }
    fn sqrt(self) -> Result<Self, MathError> {
        Ok(Complex64::sqrt(self))
    }
    fn abs(self) -> Result<Self, MathError> {
        Ok(Complex64::new(self.norm(), 0.0))
    }
    fn pow(self, e: Self) -> Result<Self, MathError> {
        if self.is_zero() {
            if e.re > 0.0 {
                Ok(Complex64::new(0.0, 0.0))
            } else {
                Err(MathError::ZeroToNonPositivePower)
            }
        } else {
            Ok(self.powc(e))
        }
    }

    fn sqrt_d(self) -> Result<(Self, Self, Self), MathError> {
        if self.is_zero() {
            return Err(MathError::DerivativeSingularity { func: "sqrt" });
        }
        let s = Complex64::sqrt(self);
        let d1 = Complex64::new(0.5, 0.0) / s;
        let d2 = Complex64::new(-0.25, 0.0) / (s * self);
        Ok((s, d1, d2))
    }
    fn log_d(self) -> Result<(Self, Self, Self), MathError> {
        if self.is_zero() {
            return Err(MathError::Domain { func: "log" });
        }
        let one = Complex64::new(1.0, 0.0);
        Ok((Complex64::ln(self), one / self, -one / (self * self)))
    }
    fn asinh_d(self) -> Result<(Self, Self, Self), MathError> {
        let w = self * self + Complex64::new(1.0, 0.0);
        if w.is_zero() {
            return Err(MathError::DerivativeSingularity { func: "asinh" });
        }
        let s = w.sqrt();
        let val = Field::asinh(self)?;
        let one = Complex64::new(1.0, 0.0);
        Ok((val, one / s, -self / (w * s)))
    }
    fn abs_d(self) -> Result<(Self, Self, Self), MathError> {
        Err(MathError::NotDifferentiable { func: "abs" })
    }
}

/// What the expression evaluator needs of a scalar type.
///
/// Implemented for both base fields and for second-order jets over them, so
/// one compiled expression evaluates over reals, complexes, and jets.
pub trait Scalar: Clone + Debug + Send + Sync {
    fn from_f64(x: f64) -> Self;
    fn imaginary_unit() -> Result<Self, MathError>;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self, MathError>;
    fn pow(&self, e: &Self) -> Result<Self, MathError>;
    fn apply(&self, f: Func) -> Result<Self, MathError>;
}

impl<F: Field> Scalar for F {
    fn from_f64(x: f64) -> Self {
        Field::from_f64(x)
    }
    fn imaginary_unit() -> Result<Self, MathError> {
        Field::imaginary_unit()
    }
    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn div(&self, rhs: &Self) -> Result<Self, MathError> {
        Field::div(*self, *rhs)
    }
    fn pow(&self, e: &Self) -> Result<Self, MathError> {
        Field::pow(*self, *e)
    }
    fn apply(&self, f: Func) -> Result<Self, MathError> {
        match f {
            Func::Sin => Ok(Field::sin(*self)),
            Func::Cos => Ok(Field::cos(*self)),
            Func::Sinh => Ok(Field::sinh(*self)),
            Func::Cosh => Ok(Field::cosh(*self)),
            Func::Tanh => Ok(Field::tanh(*self)),
            Func::Exp => Ok(Field::exp(*self)),
            Func::Tan => Field::tan(*self),
            Func::Asinh => Field::asinh(*self),
            Func::Log => Field::log(*self),
            Func::Sqrt => Field::sqrt(*self),
            Func::Abs => Field::abs(*self),
        }
    }
}

/// Integer power by repeated multiplication; the route taken for literal
/// integer exponents, valid for negative bases over every scalar.
pub fn powi<S: Scalar>(base: &S, n: i32) -> Result<S, MathError> {
    if n == 0 {
        return Ok(S::from_f64(1.0));
    }
    let m = n.unsigned_abs();
    let mut acc = base.clone();
    for _ in 1..m {
        acc = acc.mul(base);
    }
    if n < 0 {
        S::from_f64(1.0).div(&acc)
    } else {
        Ok(acc)
    }
}
