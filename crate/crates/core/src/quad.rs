//! Adaptive Simpson quadrature with deterministic recursion order.
//!
//! Each interval is split left before right; an interval is accepted when
//! the Richardson estimate `|S_halves - S_whole| / 15` drops below its
//! tolerance budget, which halves with each split.

use thiserror::Error;

use crate::error::EvalError;

pub const DEFAULT_MAX_DEPTH: usize = 48;

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("quadrature did not converge on [{a}, {b}] (estimate {estimate:.3e})")]
    NonConvergent { a: f64, b: f64, estimate: f64 },
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64, QuadratureError>
where
    F: Fn(f64) -> Result<f64, EvalError>,
{
    adaptive_simpson_depth(f, a, b, tol, DEFAULT_MAX_DEPTH)
}

pub fn adaptive_simpson_depth<F>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: usize,
) -> Result<f64, QuadratureError>
where
    F: Fn(f64) -> Result<f64, EvalError>,
{
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let fa = f(a)?;
    let fm = f(m)?;
    let fb = f(b)?;
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64, QuadratureError>
where
    F: Fn(f64) -> Result<f64, EvalError>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let estimate = (left + right - whole) / 15.0;
    if estimate.abs() <= tol {
        return Ok(left + right + estimate);
    }
    if depth == 0 {
        return Err(QuadratureError::NonConvergent { a, b, estimate: estimate.abs() });
    }
    let half_tol = 0.5 * tol;
    let l = recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1)?;
    let r = recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1)?;
    Ok(l + r)
}
