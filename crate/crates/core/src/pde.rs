//! Residual operators for the two governing equations, metric-degeneracy
//! functions, pointwise classification, grid reports, singular-locus
//! extraction, and the mean-curvature minimality check for parametric
//! patches.
//!
//! A graph `(x, y, z(x,y))` is maximal iff
//! `(1 - z_x^2) z_yy + 2 z_x z_y z_xy + (1 - z_y^2) z_xx = 0`,
//! and a graph `(u, v, w(u,v))` is timelike minimal iff it satisfies the
//! Born-Infeld equation
//! `(w_u^2 - 1) w_vv - 2 w_u w_v w_uv + (1 + w_v^2) w_uu = 0`.
//! The induced metric degenerates exactly where `z_x^2 + z_y^2 - 1 = 0`
//! (maximal case) or `w_u^2 - w_v^2 - 1 = 0` (timelike case).
//!
//! Residuals are reported unnormalized: the equations are polynomial in the
//! jet entries, so the raw values are exactly testable.

use thiserror::Error;

use crate::error::EvalError;
use crate::exec;
use crate::jet::Jet2;
use crate::surface::{GraphSurface, ParametricSurface, Signature, SurfaceClass};

pub use crate::locus::{LocusPolyline, LocusReport};

pub const DEFAULT_REFINE_TOL: f64 = 1e-10;
pub const DEFAULT_GRID: usize = 201;
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum PdeError {
    #[error("point ({0}, {1}) lies outside the surface domain")]
    OutsideDomain(f64, f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("no admissible grid samples (grid {nx}x{ny})")]
    EmptyGrid { nx: usize, ny: usize },
    #[error("grid must be at least 2x2, got {nx}x{ny}")]
    GridTooSmall { nx: usize, ny: usize },
    #[error("degenerate tangent plane at ({0}, {1})")]
    DegenerateTangentPlane(f64, f64),
}

/// Aggregate residual statistics over a sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub n_samples: usize,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Euclidean norm of the residual vector over the samples.
    pub l2: f64,
    pub worst_point: (f64, f64),
}

/// Pointwise classification against the degeneracy function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Regular,
    Singular,
}

fn jet_at(s: &GraphSurface, p: (f64, f64)) -> Result<Jet2<f64>, PdeError> {
    if !s.domain.contains(p) {
        return Err(PdeError::OutsideDomain(p.0, p.1));
    }
    Ok(s.jet(p)?)
}

/// Maximal-surface residual from a height jet.
pub fn residual_maximal_jet(j: &Jet2<f64>) -> f64 {
    // Grouped so that swapping the two slots is an exact symmetry.
    ((1.0 - j.dx * j.dx) * j.dyy + (1.0 - j.dy * j.dy) * j.dxx)
        + (2.0 * (j.dx * j.dy)) * j.dxy
}

/// Born-Infeld residual from a height jet (slots are `u`, `v`).
pub fn residual_borninfeld_jet(j: &Jet2<f64>) -> f64 {
    ((j.dx * j.dx - 1.0) * j.dyy + (1.0 + j.dy * j.dy) * j.dxx)
        - (2.0 * (j.dx * j.dy)) * j.dxy
}

pub fn residual_maximal(s: &GraphSurface, p: (f64, f64)) -> Result<f64, PdeError> {
    Ok(residual_maximal_jet(&jet_at(s, p)?))
}

pub fn residual_borninfeld(s: &GraphSurface, p: (f64, f64)) -> Result<f64, PdeError> {
    Ok(residual_borninfeld_jet(&jet_at(s, p)?))
}

/// The residual appropriate to the surface's class. Non-solution controls
/// are measured against the maximal-surface equation.
pub fn residual_for_kind(s: &GraphSurface, p: (f64, f64)) -> Result<f64, PdeError> {
    match s.kind {
        SurfaceClass::TimelikeMinimal => residual_borninfeld(s, p),
        SurfaceClass::Maximal | SurfaceClass::NonSolution => residual_maximal(s, p),
    }
}

/// `z_x^2 + z_y^2 - 1`: zero exactly where a maximal graph's metric
/// degenerates.
pub fn degeneracy_maximal(s: &GraphSurface, p: (f64, f64)) -> Result<f64, PdeError> {
    let j = jet_at(s, p)?;
    Ok((j.dx * j.dx + j.dy * j.dy) - 1.0)
}

/// `w_u^2 - w_v^2 - 1`: zero exactly where a timelike graph's metric
/// degenerates.
pub fn degeneracy_timelike(s: &GraphSurface, p: (f64, f64)) -> Result<f64, PdeError> {
    let j = jet_at(s, p)?;
    Ok((j.dx * j.dx - j.dy * j.dy) - 1.0)
}

pub fn degeneracy_for_kind(s: &GraphSurface, p: (f64, f64)) -> Result<f64, PdeError> {
    match s.kind {
        SurfaceClass::TimelikeMinimal => degeneracy_timelike(s, p),
        SurfaceClass::Maximal | SurfaceClass::NonSolution => degeneracy_maximal(s, p),
    }
}

/// Singular iff `|degeneracy| <= tol` (ties count as singular).
pub fn classify(s: &GraphSurface, p: (f64, f64), tol: f64) -> Result<PointClass, PdeError> {
    let d = degeneracy_for_kind(s, p)?;
    Ok(if d.abs() <= tol { PointClass::Singular } else { PointClass::Regular })
}

/// Threading mode selector, exposed so the benchmark suite can pin a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threading {
    Auto,
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

fn map_nodes<T, F>(n: usize, mode: Threading, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        Threading::Auto => exec::map_indexed(n, f),
        Threading::Sequential => exec::map_indexed_seq(n, f),
        #[cfg(feature = "parallel")]
        Threading::Parallel => exec::map_indexed_par(n, f),
    }
}

/// Sample the class-appropriate residual over an `nx x ny` grid of the
/// domain (admissible nodes only) and aggregate deterministically.
pub fn residual_grid(s: &GraphSurface, nx: usize, ny: usize) -> Result<ResidualReport, PdeError> {
    residual_grid_mode(s, nx, ny, Threading::Auto)
}

#[doc(hidden)]
pub fn residual_grid_mode(
    s: &GraphSurface,
    nx: usize,
    ny: usize,
    mode: Threading,
) -> Result<ResidualReport, PdeError> {
    if nx < 2 || ny < 2 {
        return Err(PdeError::GridTooSmall { nx, ny });
    }
    let values = map_nodes(nx * ny, mode, |idx| {
        let i = idx % nx;
        let j = idx / nx;
        let p = (s.domain.node_x(i, nx), s.domain.node_y(j, ny));
        if !s.admits(p) {
            return None;
        }
        Some(residual_for_kind(s, p).map(|r| (p, r)))
    });

    let mut samples: Vec<((f64, f64), f64)> = Vec::new();
    for v in values {
        match v {
            None => {}
            Some(Ok(pr)) => samples.push(pr),
            Some(Err(e)) => return Err(e),
        }
    }
    if samples.is_empty() {
        return Err(PdeError::EmptyGrid { nx, ny });
    }

    let abs: Vec<f64> = samples.iter().map(|(_, r)| r.abs()).collect();
    let sq: Vec<f64> = samples.iter().map(|(_, r)| r * r).collect();
    let mut max_abs = f64::NEG_INFINITY;
    let mut worst = samples[0].0;
    for ((p, _), a) in samples.iter().zip(&abs) {
        if *a > max_abs {
            max_abs = *a;
            worst = *p;
        }
    }
    Ok(ResidualReport {
        n_samples: samples.len(),
        max_abs,
        mean_abs: exec::pairwise_sum(&abs) / abs.len() as f64,
        l2: exec::pairwise_sum(&sq).sqrt(),
        worst_point: worst,
    })
}

/// Marching-squares extraction of the degeneracy function's zero set, with
/// every crossing refined by bisection along grid edges.
pub fn singular_locus(
    s: &GraphSurface,
    nx: usize,
    ny: usize,
    refine_tol: f64,
) -> Result<LocusReport, PdeError> {
    if nx < 2 || ny < 2 {
        return Err(PdeError::GridTooSmall { nx, ny });
    }
    crate::locus::extract(s, nx, ny, refine_tol)
}

/// Numerator of the mean curvature of a parametric patch under the given
/// signature: `e G - 2 f F + g E` with the (unnormalized) metric-adapted
/// normal. Zero iff the surface is minimal at `p`; the zero set does not
/// depend on normal scaling.
pub fn mean_curvature_numerator(
    s: &ParametricSurface,
    p: (f64, f64),
    sig: Signature,
) -> Result<f64, PdeError> {
    if !s.domain.contains(p) {
        return Err(PdeError::OutsideDomain(p.0, p.1));
    }
    let [jx, jy, jz] = s.jets(p)?;
    let xu = [jx.dx, jy.dx, jz.dx];
    let xv = [jx.dy, jy.dy, jz.dy];
    let xuu = [jx.dxx, jy.dxx, jz.dxx];
    let xuv = [jx.dxy, jy.dxy, jz.dxy];
    let xvv = [jx.dyy, jy.dyy, jz.dyy];

    let e_1 = sig.dot(xu, xu);
    let f_1 = sig.dot(xu, xv);
    let g_1 = sig.dot(xv, xv);
    if (e_1 * g_1 - f_1 * f_1).abs() <= 1e-12 {
        return Err(PdeError::DegenerateTangentPlane(p.0, p.1));
    }
    let n = sig.cross(xu, xv);
    let e_2 = sig.dot(xuu, n);
    let f_2 = sig.dot(xuv, n);
    let g_2 = sig.dot(xvv, n);
    Ok((e_2 * g_1 + g_2 * e_1) - 2.0 * (f_2 * f_1))
}
