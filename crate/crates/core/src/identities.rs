//! Certification of the two infinite-product identities attached to the
//! Lorentz helicoids.
//!
//! Spacelike axis:
//! `(sinh z + sinh conj(z)) / (cosh z + cosh conj(z))`
//! `= i * prod_k [((k-1)pi - i a) / ((k-1/2)pi - i a)] * [(k pi + i a) / ((k-1/2)pi + i a)]`
//! with `a = Re z`; by the addition formulas the left side is `tanh(a)`.
//!
//! Timelike axis: the analogue with circular functions, no `i` factors, and
//! left side `tan(a)`. The printed form of the timelike display converges to
//! `-tan(a)`; the empirical sign is reported as `sign_constant` and never
//! silently applied.
//!
//! Partial products multiply the two parenthesized factors of each index in
//! increasing order with no re-association; the prefactor is applied last.
//! Products are evaluated sequentially: chunked evaluation with tree-order
//! recombination is not bit-identical to the sequential product at double
//! precision, so the parallel path stays disabled.

use num_complex::Complex64;
use thiserror::Error;

pub const DENOMINATOR_TOL: f64 = 1e-12;
pub const CROSS_CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum IdentityError {
    #[error("vanishing denominator: |cos-type sum| = {0:.3e} <= 1e-12")]
    VanishingDenominator(f64),
    #[error("factor denominator vanishes at k = {k}")]
    FactorDenominatorZero { k: usize },
    #[error("quotient route and addition-formula route disagree by {0:.3e}")]
    CrossCheckFailed(f64),
    #[error("truncation ladder must be non-empty and strictly increasing")]
    BadLadder,
}

/// Which helicoid's identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityId {
    SpacelikeAxis,
    TimelikeAxis,
}

impl IdentityId {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::SpacelikeAxis => "spacelike",
            IdentityId::TimelikeAxis => "timelike",
        }
    }

    pub fn from_str(s: &str) -> Option<IdentityId> {
        Some(match s {
            "spacelike" | "spacelike-axis" => IdentityId::SpacelikeAxis,
            "timelike" | "timelike-axis" => IdentityId::TimelikeAxis,
            _ => return None,
        })
    }
}

/// Left side of the identity at `z`, computed as the literal quotient and
/// cross-checked against the addition-formula collapse (`tanh(Re z)` or
/// `tan(Re z)`), which must agree to 1e-12.
pub fn lhs(id: IdentityId, z: Complex64) -> Result<Complex64, IdentityError> {
    let zc = z.conj();
    let (num, den, collapsed) = match id {
        IdentityId::SpacelikeAxis => {
            (z.sinh() + zc.sinh(), z.cosh() + zc.cosh(), z.re.tanh())
        }
        IdentityId::TimelikeAxis => (z.sin() + zc.sin(), z.cos() + zc.cos(), z.re.tan()),
    };
    if den.norm() <= DENOMINATOR_TOL {
        return Err(IdentityError::VanishingDenominator(den.norm()));
    }
    let quotient = num / den;
    let gap = (quotient - Complex64::new(collapsed, 0.0)).norm();
    if gap > CROSS_CHECK_TOL * collapsed.abs().max(1.0) {
        return Err(IdentityError::CrossCheckFailed(gap));
    }
    Ok(quotient)
}

/// Product of the first `n` factor pairs times the display prefactor
/// (`i` for the spacelike identity, `1` for the timelike one).
pub fn partial_product(id: IdentityId, z: Complex64, n: usize) -> Result<Complex64, IdentityError> {
    let mut state = ProductState::new(id, z);
    state.extend_to(n)?;
    Ok(state.value())
}

/// Incremental product evaluator; extending to larger `n` multiplies the
/// same factor sequence a fresh run would, so ladder evaluation is
/// bit-identical to independent evaluation at each rung.
struct ProductState {
    id: IdentityId,
    a: f64,
    k_done: usize,
    running: Complex64,
}

impl ProductState {
    fn new(id: IdentityId, z: Complex64) -> ProductState {
        ProductState { id, a: z.re, k_done: 0, running: Complex64::new(1.0, 0.0) }
    }

    fn extend_to(&mut self, n: usize) -> Result<(), IdentityError> {
        let pi = std::f64::consts::PI;
        while self.k_done < n {
            let k = (self.k_done + 1) as f64;
            let (f1, f2) = match self.id {
                IdentityId::SpacelikeAxis => {
                    let ia = Complex64::new(0.0, self.a);
                    let d1 = Complex64::new((k - 0.5) * pi, 0.0) - ia;
                    let d2 = Complex64::new((k - 0.5) * pi, 0.0) + ia;
                    if d1.norm() == 0.0 || d2.norm() == 0.0 {
                        return Err(IdentityError::FactorDenominatorZero { k: self.k_done + 1 });
                    }
                    (
                        (Complex64::new((k - 1.0) * pi, 0.0) - ia) / d1,
                        (Complex64::new(k * pi, 0.0) + ia) / d2,
                    )
                }
                IdentityId::TimelikeAxis => {
                    let d1 = (k - 0.5) * pi - self.a;
                    let d2 = (k - 0.5) * pi + self.a;
                    if d1 == 0.0 || d2 == 0.0 {
                        return Err(IdentityError::FactorDenominatorZero { k: self.k_done + 1 });
                    }
                    (
                        Complex64::new(((k - 1.0) * pi - self.a) / d1, 0.0),
                        Complex64::new((k * pi + self.a) / d2, 0.0),
                    )
                }
            };
            self.running = self.running * f1 * f2;
            self.k_done += 1;
        }
        Ok(())
    }

    fn value(&self) -> Complex64 {
        match self.id {
            IdentityId::SpacelikeAxis => Complex64::new(0.0, 1.0) * self.running,
            IdentityId::TimelikeAxis => self.running,
        }
    }
}

/// Convergence report over a truncation ladder.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub z: Complex64,
    pub lhs: Complex64,
    pub partial_products: Vec<(usize, Complex64)>,
    /// Empirical sign minimizing `|lhs - sign * product|` at the largest
    /// rung; reported, never silently applied to the printed display.
    pub sign_constant: i8,
    /// `|lhs - sign * product|` per rung.
    pub errors: Vec<(usize, f64)>,
    pub abs_error_at_n: f64,
    /// Least-squares slope of `log|error|` against `log N` over the top
    /// half of the ladder, negated (1.0 means first-order convergence).
    pub estimated_order: f64,
    /// Errors decrease monotonically over rungs beyond N = 100.
    pub monotone_tail: bool,
}

/// Evaluate the left side and the partial products over `ladder`, determine
/// the empirical sign constant, and fit the convergence order.
pub fn certify(
    id: IdentityId,
    z: Complex64,
    ladder: &[usize],
) -> Result<IdentityReport, IdentityError> {
    if ladder.is_empty() || ladder.windows(2).any(|w| w[0] >= w[1]) || ladder[0] == 0 {
        return Err(IdentityError::BadLadder);
    }
    let lhs_value = lhs(id, z)?;
    let mut state = ProductState::new(id, z);
    let mut partial_products = Vec::with_capacity(ladder.len());
    for &n in ladder {
        state.extend_to(n)?;
        partial_products.push((n, state.value()));
    }

    let last = partial_products.last().expect("non-empty ladder").1;
    let sign_constant: i8 =
        if (lhs_value - last).norm() <= (lhs_value + last).norm() { 1 } else { -1 };

    let errors: Vec<(usize, f64)> = partial_products
        .iter()
        .map(|&(n, p)| (n, (lhs_value - p * Complex64::new(sign_constant as f64, 0.0)).norm()))
        .collect();
    let abs_error_at_n = errors.last().expect("non-empty").1;

    // Slope fit over the top half of the ladder.
    let half = errors.len().div_ceil(2);
    let tail = &errors[errors.len() - half..];
    let estimated_order = if tail.len() >= 2 && tail.iter().all(|&(_, e)| e > 0.0) {
        let pts: Vec<(f64, f64)> =
            tail.iter().map(|&(n, e)| ((n as f64).ln(), e.ln())).collect();
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        -((n * sxy - sx * sy) / (n * sxx - sx * sx))
    } else {
        f64::NAN
    };

    let monotone_tail = errors
        .windows(2)
        .filter(|w| w[0].0 >= 100)
        .all(|w| w[1].1 <= w[0].1);

    Ok(IdentityReport {
        id,
        z,
        lhs: lhs_value,
        partial_products,
        sign_constant,
        errors,
        abs_error_at_n,
        estimated_order,
        monotone_tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lhs_collapses_to_real_axis_functions() {
        let v = lhs(IdentityId::SpacelikeAxis, c(1.0, 0.5)).unwrap();
        assert!((v.re - 1.0f64.tanh()).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);

        let v = lhs(IdentityId::TimelikeAxis, c(0.5, 2.0)).unwrap();
        assert!((v.re - 0.5f64.tan()).abs() < 1e-12);
    }

    #[test]
    fn lhs_vanishing_denominator() {
        // cos z + cos conj(z) = 2 cos(Re z) cosh(Im z) = 0 at Re z = pi/2.
        let err = lhs(IdentityId::TimelikeAxis, c(std::f64::consts::FRAC_PI_2, 0.3));
        assert!(matches!(err, Err(IdentityError::VanishingDenominator(_))));
    }

    #[test]
    fn lhs_is_independent_of_imaginary_part() {
        for id in [IdentityId::SpacelikeAxis, IdentityId::TimelikeAxis] {
            let a = lhs(id, c(0.8, 0.9)).unwrap();
            let b = lhs(id, c(0.8, -2.3)).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_real_part_kills_the_product() {
        for id in [IdentityId::SpacelikeAxis, IdentityId::TimelikeAxis] {
            let p = partial_product(id, c(0.0, 1.3), 17).unwrap();
            assert_eq!(p.norm(), 0.0);
            let l = lhs(id, c(0.0, 1.3)).unwrap();
            assert!(l.norm() < 1e-15);
        }
    }

    #[test]
    fn spacelike_product_approaches_tanh() {
        let p = partial_product(IdentityId::SpacelikeAxis, c(1.0, 0.0), 1000).unwrap();
        let err = (p - c(1.0f64.tanh(), 0.0)).norm();
        assert!(err < 2e-3, "error {err}");
    }

    #[test]
    fn timelike_product_needs_minus_one() {
        let p = partial_product(IdentityId::TimelikeAxis, c(0.5, 0.0), 1000).unwrap();
        let plus = (p - c(0.5f64.tan(), 0.0)).norm();
        let minus = (-p - c(0.5f64.tan(), 0.0)).norm();
        assert!(minus < 2e-3, "error with -1: {minus}");
        assert!(plus > 1.0, "printed sign should not fit: {plus}");
    }

    #[test]
    fn certify_spacelike_sign_and_order() {
        let rep = certify(IdentityId::SpacelikeAxis, c(1.0, 0.0), &[100, 1000, 10000]).unwrap();
        assert_eq!(rep.sign_constant, 1);
        assert!(rep.abs_error_at_n < 5e-4);
        assert!((rep.estimated_order - 1.0).abs() < 0.15, "order {}", rep.estimated_order);
        assert!(rep.monotone_tail);
    }

    #[test]
    fn certify_timelike_sign_is_negative() {
        let rep = certify(IdentityId::TimelikeAxis, c(0.5, 0.0), &[100, 1000, 10000]).unwrap();
        assert_eq!(rep.sign_constant, -1);
        assert!(rep.abs_error_at_n < 5e-4);
    }

    #[test]
    fn bad_ladders_are_rejected() {
        assert!(matches!(
            certify(IdentityId::SpacelikeAxis, c(1.0, 0.0), &[]),
            Err(IdentityError::BadLadder)
        ));
        assert!(matches!(
            certify(IdentityId::SpacelikeAxis, c(1.0, 0.0), &[100, 100]),
            Err(IdentityError::BadLadder)
        ));
    }

    #[test]
    fn certify_at_zero_real_part_is_exact() {
        // lhs and every partial product vanish exactly; errors are 0 at
        // every rung and the order fit is undefined (NaN).
        let rep = certify(IdentityId::SpacelikeAxis, c(0.0, 0.7), &[10, 100]).unwrap();
        assert_eq!(rep.lhs.norm(), 0.0);
        assert_eq!(rep.abs_error_at_n, 0.0);
        assert!(rep.errors.iter().all(|&(_, e)| e == 0.0));
        assert!(rep.estimated_order.is_nan());
    }

    #[test]
    fn incremental_equals_fresh_evaluation() {
        let rep =
            certify(IdentityId::SpacelikeAxis, c(0.7, 0.2), &[10, 100, 1000]).unwrap();
        for &(n, p) in &rep.partial_products {
            let fresh = partial_product(IdentityId::SpacelikeAxis, c(0.7, 0.2), n).unwrap();
            assert_eq!(p.re.to_bits(), fresh.re.to_bits());
            assert_eq!(p.im.to_bits(), fresh.im.to_bits());
        }
    }

    #[test]
    fn spacelike_imaginary_tail_is_order_one_over_n() {
        // The telescoped closed form shows Im(P_N) = Theta(a / N) at real z,
        // not rounding-level; assert the true scaling.
        for &n in &[100usize, 1000, 10000] {
            let p = partial_product(IdentityId::SpacelikeAxis, c(1.0, 0.0), n).unwrap();
            let bound = 2.0 / (n as f64);
            assert!(p.im.abs() < bound, "Im {} vs bound {bound}", p.im);
            assert!(p.im.abs() > 1e-3 / (n as f64), "Im should be Theta(1/N)");
        }
    }
}
