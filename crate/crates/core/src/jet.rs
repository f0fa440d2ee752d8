//! Second-order forward-mode jets over a configurable base field.
//!
//! A [`Jet2`] carries a value, both first partials, and the three distinct
//! second partials of a function of up to two variables. Propagation is the
//! truncated Taylor algebra: for `f(u)`,
//! `val = f(u)`, `d = f'(u) u_d`, `h = f'(u) u_h + f''(u) u_d u_d^T`.
//!
//! Mixed-partial terms are grouped symmetrically in every rule, so swapping
//! the two seed slots commutes with evaluation bit-for-bit.

use crate::error::MathError;
use crate::field::{Field, Func, Scalar};

/// Value, gradient, and symmetric Hessian of a two-variable function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2<B> {
    pub val: B,
    pub dx: B,
    pub dy: B,
    pub dxx: B,
    pub dxy: B,
    pub dyy: B,
}

impl<B: Field> Jet2<B> {
    pub fn constant(val: B) -> Self {
        Jet2 {
            val,
            dx: B::zero(),
            dy: B::zero(),
            dxx: B::zero(),
            dxy: B::zero(),
            dyy: B::zero(),
        }
    }

    /// Identity jet for the first variable: value `val`, `dx = 1`.
    pub fn seed_x(val: B) -> Self {
        Jet2 { dx: B::one(), ..Jet2::constant(val) }
    }

    /// Identity jet for the second variable: value `val`, `dy = 1`.
    pub fn seed_y(val: B) -> Self {
        Jet2 { dy: B::one(), ..Jet2::constant(val) }
    }

    /// Identity jets for a coordinate pair.
    pub fn seed_pair(point: (B, B)) -> (Self, Self) {
        (Jet2::seed_x(point.0), Jet2::seed_y(point.1))
    }

    /// Identity jet for a single-variable function (first slot carries d/dt).
    pub fn seed_single(t: B) -> Self {
        Jet2::seed_x(t)
    }

    /// Seed with an arbitrary first-derivative direction, as needed when the
    /// variable is itself a linear function of the evaluation coordinate.
    pub fn seed_directional(val: B, dx: B, dy: B) -> Self {
        Jet2 { val, dx, dy, dxx: B::zero(), dxy: B::zero(), dyy: B::zero() }
    }

    /// Chain rule for a univariate `f` given `(f(val), f'(val), f''(val))`.
    fn lift(&self, f: B, d1: B, d2: B) -> Self {
        Jet2 {
            val: f,
            dx: d1 * self.dx,
            dy: d1 * self.dy,
            dxx: d1 * self.dxx + d2 * (self.dx * self.dx),
            dxy: d1 * self.dxy + d2 * (self.dx * self.dy),
            dyy: d1 * self.dyy + d2 * (self.dy * self.dy),
        }
    }

    fn add_jet(&self, r: &Self) -> Self {
        Jet2 {
            val: self.val + r.val,
            dx: self.dx + r.dx,
            dy: self.dy + r.dy,
            dxx: self.dxx + r.dxx,
            dxy: self.dxy + r.dxy,
            dyy: self.dyy + r.dyy,
        }
    }

    fn sub_jet(&self, r: &Self) -> Self {
        Jet2 {
            val: self.val - r.val,
            dx: self.dx - r.dx,
            dy: self.dy - r.dy,
            dxx: self.dxx - r.dxx,
            dxy: self.dxy - r.dxy,
            dyy: self.dyy - r.dyy,
        }
    }

    fn mul_jet(&self, r: &Self) -> Self {
        let two = B::from_f64(2.0);
        Jet2 {
            val: self.val * r.val,
            dx: self.dx * r.val + self.val * r.dx,
            dy: self.dy * r.val + self.val * r.dy,
            dxx: self.dxx * r.val + two * (self.dx * r.dx) + self.val * r.dxx,
            dxy: self.dxy * r.val + (self.dx * r.dy + self.dy * r.dx) + self.val * r.dxy,
            dyy: self.dyy * r.val + two * (self.dy * r.dy) + self.val * r.dyy,
        }
    }

    fn neg_jet(&self) -> Self {
        Jet2 {
            val: -self.val,
            dx: -self.dx,
            dy: -self.dy,
            dxx: -self.dxx,
            dxy: -self.dxy,
            dyy: -self.dyy,
        }
    }

    /// Quotient rule, derived from `a = w * b`.
    fn div_jet(&self, b: &Self) -> Result<Self, MathError> {
        let inv = B::one().div(b.val)?;
        let two = B::from_f64(2.0);
        let val = self.val * inv;
        let dx = (self.dx - val * b.dx) * inv;
        let dy = (self.dy - val * b.dy) * inv;
        let dxx = (self.dxx - two * (dx * b.dx) - val * b.dxx) * inv;
        let dxy = (self.dxy - (dx * b.dy + dy * b.dx) - val * b.dxy) * inv;
        let dyy = (self.dyy - two * (dy * b.dy) - val * b.dyy) * inv;
        Ok(Jet2 { val, dx, dy, dxx, dxy, dyy })
    }
}

impl<B: Field> Scalar for Jet2<B> {
    fn from_f64(x: f64) -> Self {
        Jet2::constant(B::from_f64(x))
    }

    fn imaginary_unit() -> Result<Self, MathError> {
        Ok(Jet2::constant(B::imaginary_unit()?))
    }

    fn add(&self, rhs: &Self) -> Self {
        self.add_jet(rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.sub_jet(rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.mul_jet(rhs)
    }
    fn neg(&self) -> Self {
        self.neg_jet()
    }
    fn div(&self, rhs: &Self) -> Result<Self, MathError> {
        self.div_jet(rhs)
    }

    fn pow(&self, e: &Self) -> Result<Self, MathError> {
        // General powers go through exp(e * log(base)); literal integer
        // exponents never reach here (see `field::powi`).
        let ln = self.apply(Func::Log)?;
        ln.mul_jet(e).apply(Func::Exp)
    }

    fn apply(&self, f: Func) -> Result<Self, MathError> {
        let v = self.val;
        let (fv, d1, d2) = match f {
            Func::Sin => v.sin_d(),
            Func::Cos => v.cos_d(),
            Func::Sinh => v.sinh_d(),
            Func::Cosh => v.cosh_d(),
            Func::Tanh => v.tanh_d(),
            Func::Exp => v.exp_d(),
            Func::Tan => v.tan_d()?,
            Func::Asinh => v.asinh_d()?,
            Func::Log => v.log_d()?,
            Func::Sqrt => v.sqrt_d()?,
            Func::Abs => v.abs_d()?,
        };
        Ok(self.lift(fv, d1, d2))
    }
}

impl Jet2<num_complex::Complex64> {
    /// Largest imaginary magnitude over all six stored components.
    pub fn max_imag_abs(&self) -> f64 {
        [self.val, self.dx, self.dy, self.dxx, self.dxy, self.dyy]
            .iter()
            .map(|c| c.im.abs())
            .fold(0.0, f64::max)
    }

    /// Drop imaginary parts, keeping the real jet.
    pub fn real_part(&self) -> Jet2<f64> {
        Jet2 {
            val: self.val.re,
            dx: self.dx.re,
            dy: self.dy.re,
            dxx: self.dxx.re,
            dxy: self.dxy.re,
            dyy: self.dyy.re,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn seed_is_identity_jet() {
        let (jx, jy) = Jet2::<f64>::seed_pair((2.0, 3.0));
        assert_eq!(jx.val, 2.0);
        assert_eq!((jx.dx, jx.dy), (1.0, 0.0));
        assert_eq!((jy.dx, jy.dy), (0.0, 1.0));
        assert_eq!((jx.dxx, jx.dxy, jx.dyy), (0.0, 0.0, 0.0));
    }

    #[test]
    fn product_rule_x_times_y() {
        let (jx, jy) = Jet2::<f64>::seed_pair((2.0, 3.0));
        let p = jx.mul(&jy);
        assert_eq!(p.val, 6.0);
        assert_eq!((p.dx, p.dy), (3.0, 2.0));
        assert_eq!((p.dxx, p.dxy, p.dyy), (0.0, 1.0, 0.0));
    }

    #[test]
    fn asinh_lift_at_zero() {
        // asinh''(0) = 0, asinh'(0) = 1.
        let j = Jet2::<f64>::seed_x(0.0);
        let r = j.apply(Func::Asinh).unwrap();
        assert_eq!(r.val, 0.0);
        assert_eq!(r.dx, 1.0);
        assert_eq!(r.dxx, 0.0);
    }

    #[test]
    fn div_by_zero_value_jet() {
        let a = Jet2::<f64>::seed_x(1.0);
        let b = Jet2::<f64>::constant(0.0);
        assert_eq!(a.div(&b), Err(MathError::DivisionByZero));
    }

    #[test]
    fn composition_matches_analytic() {
        // d/dx sin(exp(x)) = cos(exp(x)) exp(x);
        // d2 = -sin(exp(x)) exp(2x) + cos(exp(x)) exp(x)
        for &x in &[-1.0, -0.3, 0.2, 0.9, 1.7] {
            let j = Jet2::<f64>::seed_x(x);
            let r = j.apply(Func::Exp).unwrap().apply(Func::Sin).unwrap();
            let e = x.exp();
            assert!(close(r.val, e.sin(), 1e-14));
            assert!(close(r.dx, e.cos() * e, 1e-13));
            assert!(close(r.dxx, -e.sin() * e * e + e.cos() * e, 1e-13));
        }
    }

    #[test]
    fn slot_swap_equivariance_is_bitwise() {
        // Evaluating with swapped seeds must produce exactly swapped slots.
        let f = |a: Jet2<f64>, b: Jet2<f64>| -> Jet2<f64> {
            let s = a.mul(&a).add(&b.mul(&a));
            let q = s.apply(Func::Sin).unwrap();
            q.div(&b.add(&Jet2::from_f64(3.0))).unwrap()
        };
        let (x0, y0) = (0.73, -1.21);
        let r1 = f(Jet2::seed_x(x0), Jet2::seed_y(y0));
        let r2 = f(Jet2::seed_y(x0), Jet2::seed_x(y0));
        assert_eq!(r1.val.to_bits(), r2.val.to_bits());
        assert_eq!(r1.dx.to_bits(), r2.dy.to_bits());
        assert_eq!(r1.dy.to_bits(), r2.dx.to_bits());
        assert_eq!(r1.dxx.to_bits(), r2.dyy.to_bits());
        assert_eq!(r1.dyy.to_bits(), r2.dxx.to_bits());
        assert_eq!(r1.dxy.to_bits(), r2.dxy.to_bits());
    }

    #[test]
    fn complex_seed_has_identity_structure() {
        use num_complex::Complex64;
        let i = Complex64::new(0.0, 1.0);
        let (jx, jy) = Jet2::<Complex64>::seed_pair((Complex64::new(1.0, 0.0), i));
        assert_eq!(jx.val, Complex64::new(1.0, 0.0));
        assert_eq!(jy.val, i);
        assert_eq!(jx.dx, Complex64::new(1.0, 0.0));
        assert_eq!(jy.dy, Complex64::new(1.0, 0.0));
        assert_eq!(jx.dy, Complex64::new(0.0, 0.0));
        assert_eq!(jy.dxx, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn complex_jet_real_part_extraction() {
        use num_complex::Complex64;
        let j = Jet2::<Complex64>::seed_x(Complex64::new(0.5, 0.0));
        let r = j.apply(Func::Exp).unwrap();
        assert_eq!(r.max_imag_abs(), 0.0);
        assert!(close(r.real_part().val, 0.5f64.exp(), 1e-15));
    }
}
