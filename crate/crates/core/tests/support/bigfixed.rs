//! Fixed-point big-integer arithmetic (256 fractional bits, almost 77
//! decimal digits) and an independent evaluator for the helicoid
//! infinite-product identities. Test-support code: shares nothing with the
//! double-precision implementation it is used to check.

use num_bigint::BigInt;
use num_complex::Complex64;

use lms_core::identities::IdentityId;

pub const SHIFT: u32 = 256;

/// 110 decimal digits of pi.
pub const PI_DIGITS: &str =
    "3.1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679821480865132";

#[derive(Clone, Debug)]
pub struct Fx(pub BigInt);

impl Fx {
    pub fn zero() -> Fx {
        Fx(BigInt::from(0))
    }

    pub fn one() -> Fx {
        Fx(BigInt::from(1) << SHIFT)
    }

    /// Exact embedding of a finite double.
    pub fn from_f64(x: f64) -> Fx {
        assert!(x.is_finite());
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & 0xf_ffff_ffff_ffff;
        let (mant, exp) = if exponent == 0 {
            (fraction, -1074i64)
        } else {
            (fraction | (1 << 52), exponent - 1075)
        };
        let mut v = BigInt::from(mant) * sign;
        let shift = SHIFT as i64 + exp;
        if shift >= 0 {
            v <<= shift as u32;
        } else {
            v >>= (-shift) as u32;
        }
        Fx(v)
    }

    pub fn from_decimal(s: &str) -> Fx {
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        let digits: BigInt = format!("{int_part}{frac_part}").parse().expect("decimal digits");
        let scale = BigInt::from(10).pow(frac_part.len() as u32);
        Fx((digits << SHIFT) / scale)
    }

    pub fn to_f64(&self) -> f64 {
        // Through the decimal representation; fine at test scale.
        let s = self.0.to_string();
        let v: f64 = s.parse().unwrap_or(f64::NAN);
        v * 2f64.powi(-(SHIFT as i32))
    }

    pub fn add(&self, r: &Fx) -> Fx {
        Fx(&self.0 + &r.0)
    }

    pub fn sub(&self, r: &Fx) -> Fx {
        Fx(&self.0 - &r.0)
    }

    pub fn mul(&self, r: &Fx) -> Fx {
        Fx((&self.0 * &r.0) >> SHIFT)
    }

    pub fn div(&self, r: &Fx) -> Fx {
        Fx((&self.0 << SHIFT) / &r.0)
    }

    pub fn mul_i64(&self, k: i64) -> Fx {
        Fx(&self.0 * k)
    }

    pub fn neg(&self) -> Fx {
        Fx(-&self.0)
    }
}

#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Fx,
    pub im: Fx,
}

impl Cx {
    pub fn real(re: Fx) -> Cx {
        Cx { re, im: Fx::zero() }
    }

    pub fn mul(&self, r: &Cx) -> Cx {
        Cx {
            re: self.re.mul(&r.re).sub(&self.im.mul(&r.im)),
            im: self.re.mul(&r.im).add(&self.im.mul(&r.re)),
        }
    }

    pub fn div(&self, r: &Cx) -> Cx {
        let denom = r.re.mul(&r.re).add(&r.im.mul(&r.im));
        let num = self.mul(&Cx { re: r.re.clone(), im: r.im.neg() });
        Cx { re: num.re.div(&denom), im: num.im.div(&denom) }
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Oracle partial product: the printed factor pairing, multiplied in
/// increasing order, prefactor applied last. `a` is the real part of the
/// identity argument.
pub fn oracle_partial_product(id: IdentityId, a: f64, n: usize) -> Cx {
    let pi = Fx::from_decimal(PI_DIGITS);
    let half_pi = pi.div(&Fx::from_f64(2.0));
    let a_fx = Fx::from_f64(a);
    let mut prod = Cx::real(Fx::one());
    for k in 1..=n as i64 {
        let k_pi = pi.mul_i64(k);
        let km1_pi = pi.mul_i64(k - 1);
        let khalf_pi = k_pi.sub(&half_pi);
        let (f1, f2) = match id {
            IdentityId::SpacelikeAxis => (
                Cx { re: km1_pi, im: a_fx.neg() }
                    .div(&Cx { re: khalf_pi.clone(), im: a_fx.neg() }),
                Cx { re: k_pi, im: a_fx.clone() }.div(&Cx { re: khalf_pi, im: a_fx.clone() }),
            ),
            IdentityId::TimelikeAxis => (
                Cx::real(km1_pi.sub(&a_fx)).div(&Cx::real(khalf_pi.sub(&a_fx))),
                Cx::real(k_pi.add(&a_fx)).div(&Cx::real(khalf_pi.add(&a_fx))),
            ),
        };
        prod = prod.mul(&f1).mul(&f2);
    }
    match id {
        IdentityId::SpacelikeAxis => prod.mul(&Cx { re: Fx::zero(), im: Fx::one() }),
        IdentityId::TimelikeAxis => prod,
    }
}
