//! The Wick-rotation correspondence between maximal graphs and timelike
//! minimal graphs: complex continuation in the second coordinate, the boost
//! family of reparametrizations, and the singular-point correspondence.
//!
//! The canonical continuation takes a graph height `z(x, y)` to
//! `w(u, v) = z(u, i*v)` restricted to real `(u, v)`; the inverse direction
//! applies the same substitution to a timelike graph. A round trip composes
//! to `i * i = -1` on the second coordinate, i.e. the reflection `y -> -y`,
//! which the result records. The general correspondence is the canonical one
//! composed with a boost (rapidity theta) and axis reflections.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::EvalError;
use crate::jet::Jet2;
use crate::pde::{self, PdeError};
use crate::surface::{lerp, DomainConstraint, GraphSurface, Rect, SurfaceClass};

pub const DEFAULT_IM_TOL: f64 = 1e-9;
/// Half-width of the light-cone guard strip applied to continued graphs.
pub const LIGHT_CONE_STRIP: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum WickError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("imaginary part {magnitude:.3e} of {component} exceeds im_tol at {point:?}")]
    ImaginaryPart {
        point: (f64, f64),
        component: &'static str,
        magnitude: f64,
    },
    #[error("point ({0}, {1}) lies outside the continued domain")]
    OutsideDomain(f64, f64),
    #[error("boosted surface is not a graph over the target rectangle: preimage of ({0}, {1}) leaves the base domain")]
    NotAGraph(f64, f64),
    #[error("boost requires a timelike-minimal graph, got {0}")]
    WrongKind(&'static str),
    #[error("could not sample {want} admissible points (got {got})")]
    Sampling { want: usize, got: usize },
    #[error(transparent)]
    Pde(#[from] PdeError),
}

/// Direction of the correspondence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToTimelike,
    ToMaximal,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::ToTimelike => "to-timelike",
            Direction::ToMaximal => "to-maximal",
        }
    }

    pub fn from_str(s: &str) -> Option<Direction> {
        Some(match s {
            "to-timelike" => Direction::ToTimelike,
            "to-maximal" => Direction::ToMaximal,
            _ => return None,
        })
    }

    fn target_kind(self) -> SurfaceClass {
        match self {
            Direction::ToTimelike => SurfaceClass::TimelikeMinimal,
            Direction::ToMaximal => SurfaceClass::Maximal,
        }
    }
}

/// A graph continued through `y -> i*y`, evaluated on the real slice.
#[derive(Debug, Clone)]
pub struct ContinuedGraph {
    pub base: GraphSurface,
    pub direction: Direction,
    pub im_tol: f64,
    /// Accumulated factor on the second coordinate: `i` after one
    /// continuation, `-1` (a pure reflection) after a round trip.
    y_factor: Complex64,
    pub constraints: Vec<DomainConstraint>,
}

/// Continue a graph across the correspondence. The result evaluates on the
/// same parameter rectangle; points whose value or jet picks up an imaginary
/// part above `im_tol` are rejected at evaluation time. A guard strip around
/// the lightlike lines `u = +-v` is always installed: principal-branch
/// square-root derivatives blow up there for the catenoid family.
pub fn continue_graph(s: &GraphSurface, direction: Direction, im_tol: f64) -> ContinuedGraph {
    let mut constraints = vec![DomainConstraint::ExcludeQuadStrip { eps: LIGHT_CONE_STRIP }];
    // Point exclusions guard degeneracies that stay put under continuation.
    for c in &s.constraints {
        if let DomainConstraint::ExcludeDisk { .. } = c {
            constraints.push(*c);
        }
    }
    ContinuedGraph {
        base: s.clone(),
        direction,
        im_tol,
        y_factor: Complex64::new(0.0, 1.0),
        constraints,
    }
}

impl ContinuedGraph {
    /// The surface class the continuation lands in.
    pub fn kind(&self) -> SurfaceClass {
        self.direction.target_kind()
    }

    /// Continue once more. Two applications compose to the reflection
    /// `y -> -y` on the base graph.
    pub fn and_continue(&self, direction: Direction) -> ContinuedGraph {
        ContinuedGraph {
            base: self.base.clone(),
            direction,
            im_tol: self.im_tol,
            y_factor: self.y_factor * Complex64::new(0.0, 1.0),
            constraints: self.constraints.clone(),
        }
    }

    /// True when the accumulated factor is the real reflection `y -> -y`.
    pub fn is_reflection(&self) -> bool {
        self.y_factor.im == 0.0
    }

    pub fn domain(&self) -> Rect {
        self.base.domain
    }

    pub fn admits(&self, p: (f64, f64)) -> bool {
        self.base.domain.contains(p) && self.constraints.iter().all(|c| c.admits(p))
    }

    /// Real-part jet `(value, w_u, w_v, w_uu, w_uv, w_vv)` at a real point,
    /// with every imaginary component checked against `im_tol`.
    pub fn jet(&self, p: (f64, f64)) -> Result<Jet2<f64>, WickError> {
        if !self.base.domain.contains(p) {
            return Err(WickError::OutsideDomain(p.0, p.1));
        }
        let ju = Jet2::seed_x(Complex64::new(p.0, 0.0));
        let jv = Jet2::seed_directional(
            self.y_factor * Complex64::new(p.1, 0.0),
            Complex64::new(0.0, 0.0),
            self.y_factor,
        );
        let jet: Jet2<Complex64> = self.base.z.eval(&[ju, jv], &self.base.params)?;
        let comps: [(&'static str, Complex64); 6] = [
            ("value", jet.val),
            ("w_u", jet.dx),
            ("w_v", jet.dy),
            ("w_uu", jet.dxx),
            ("w_uv", jet.dxy),
            ("w_vv", jet.dyy),
        ];
        for (component, c) in comps {
            if c.im.abs() > self.im_tol {
                return Err(WickError::ImaginaryPart {
                    point: p,
                    component,
                    magnitude: c.im.abs(),
                });
            }
        }
        Ok(jet.real_part())
    }

    /// Height of the continued graph at a real point.
    pub fn height(&self, p: (f64, f64)) -> Result<f64, WickError> {
        if !self.base.domain.contains(p) {
            return Err(WickError::OutsideDomain(p.0, p.1));
        }
        let u = Complex64::new(p.0, 0.0);
        let v = self.y_factor * Complex64::new(p.1, 0.0);
        let val: Complex64 = self.base.z.eval(&[u, v], &self.base.params)?;
        if val.im.abs() > self.im_tol {
            return Err(WickError::ImaginaryPart {
                point: p,
                component: "value",
                magnitude: val.im.abs(),
            });
        }
        Ok(val.re)
    }

    /// Residual of the target equation at a real point of the continuation.
    pub fn residual(&self, p: (f64, f64)) -> Result<f64, WickError> {
        let j = self.jet(p)?;
        Ok(match self.kind() {
            SurfaceClass::TimelikeMinimal => pde::residual_borninfeld_jet(&j),
            _ => pde::residual_maximal_jet(&j),
        })
    }

    /// Deterministic rejection sampling of points where the continuation is
    /// defined (admissible and evaluating within `im_tol`).
    pub fn sample_admissible(&self, n: usize, seed: u64) -> Result<Vec<(f64, f64)>, WickError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0usize;
        let budget = 10_000 * n.max(1);
        while out.len() < n && attempts < budget {
            attempts += 1;
            let x = lerp(self.base.domain.x0, self.base.domain.x1, rng.gen::<f64>());
            let y = lerp(self.base.domain.y0, self.base.domain.y1, rng.gen::<f64>());
            if !self.admits((x, y)) {
                continue;
            }
            if self.jet((x, y)).is_ok() {
                out.push((x, y));
            }
        }
        if out.len() < n {
            return Err(WickError::Sampling { want: n, got: out.len() });
        }
        Ok(out)
    }
}

/// The boost family: rapidity plus optional axis reflections. Composed with
/// the canonical continuation it carries the complex Jacobian
/// `[[cosh t, sinh t], [i sinh t, i cosh t]]`, whose squared determinant is
/// `-1`; the first-partial relations of the correspondence hold identically
/// in the rapidity.
#[derive(Debug, Clone, Copy)]
pub struct BoostMap {
    pub rapidity: f64,
    pub reflect_u: bool,
    pub reflect_v: bool,
}

impl BoostMap {
    pub fn new(rapidity: f64) -> BoostMap {
        BoostMap { rapidity, reflect_u: false, reflect_v: false }
    }

    /// Real 2x2 matrix of the plane boost (with reflections applied).
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let c = self.rapidity.cosh();
        let s = self.rapidity.sinh();
        let ru = if self.reflect_u { -1.0 } else { 1.0 };
        let rv = if self.reflect_v { -1.0 } else { 1.0 };
        [[ru * c, ru * s], [rv * s, rv * c]]
    }

    pub fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        let m = self.matrix();
        (m[0][0] * p.0 + m[0][1] * p.1, m[1][0] * p.0 + m[1][1] * p.1)
    }

    pub fn inverse_apply(&self, p: (f64, f64)) -> (f64, f64) {
        // det = ru * rv * (cosh^2 - sinh^2) = +-1.
        let m = self.matrix();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        (
            (m[1][1] * p.0 - m[0][1] * p.1) / det,
            (-m[1][0] * p.0 + m[0][0] * p.1) / det,
        )
    }

    pub fn jacobian_det(&self) -> f64 {
        let m = self.matrix();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Complex Jacobian of boost composed with the canonical continuation.
    pub fn complex_jacobian(&self) -> [[Complex64; 2]; 2] {
        let m = self.matrix();
        let i = Complex64::new(0.0, 1.0);
        [
            [Complex64::new(m[0][0], 0.0), Complex64::new(m[0][1], 0.0)],
            [i * m[1][0], i * m[1][1]],
        ]
    }

    /// Deviations from the four first-partial relations of the
    /// correspondence: `x_u^2 - x_v^2 = 1`, `y_u^2 - y_v^2 = 1`,
    /// `x_u y_u - x_v y_v = 0`, and `(x_u y_v - x_v y_u)^2 = -1` over the
    /// complex extension.
    pub fn correspondence_residuals(&self) -> [f64; 4] {
        let j = self.complex_jacobian();
        let one = Complex64::new(1.0, 0.0);
        let r1 = j[0][0] * j[0][0] - j[0][1] * j[0][1] - one;
        let r2 = j[1][0] * j[1][0] - j[1][1] * j[1][1] - one;
        let r3 = j[0][0] * j[1][0] - j[0][1] * j[1][1];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let r4 = det * det + one;
        [r1.norm(), r2.norm(), r3.norm(), r4.norm()]
    }
}

/// A boosted timelike graph, represented as sampled heights over a target
/// rectangle (the reparametrized height has no closed form in general).
#[derive(Debug, Clone)]
pub struct SampledGraph {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    /// Row-major heights: index `j * nx + i`.
    pub heights: Vec<f64>,
}

impl SampledGraph {
    pub fn height(&self, i: usize, j: usize) -> f64 {
        self.heights[j * self.nx + i]
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (self.rect.node_x(i, self.nx), self.rect.node_y(j, self.ny))
    }

    pub fn spacing(&self) -> (f64, f64) {
        self.rect.spacing(self.nx, self.ny)
    }
}

/// Reparametrize a timelike graph by the plane boost of rapidity `theta`,
/// sampling the new height function over `target` (default: the base
/// rectangle shrunk by `exp(-|theta|)`, which the boost preimage of is
/// guaranteed to stay inside a centered base rectangle).
pub fn boost(
    theta: f64,
    s: &GraphSurface,
    target: Option<Rect>,
    nx: usize,
    ny: usize,
) -> Result<SampledGraph, WickError> {
    if s.kind != SurfaceClass::TimelikeMinimal {
        return Err(WickError::WrongKind(s.kind.as_str()));
    }
    let map = BoostMap::new(theta);
    let rect = target.unwrap_or_else(|| s.domain.scaled((-theta.abs()).exp()));
    let mut heights = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let p = (rect.node_x(i, nx), rect.node_y(j, ny));
            let q = map.inverse_apply(p);
            if !s.admits(q) {
                return Err(WickError::NotAGraph(p.0, p.1));
            }
            heights.push(s.height(q)?);
        }
    }
    Ok(SampledGraph { rect, nx, ny, heights })
}

/// Report of the solution- and singularity-transport checks for a
/// maximal/timelike pair linked by the canonical continuation.
#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    /// Max Born-Infeld residual of the timelike graph over sampled points.
    pub bi_residual_max: f64,
    pub n_residual_samples: usize,
    /// Degeneracy values at locus vertices of the maximal side, paired with
    /// the timelike degeneracy at the identified coordinates (evaluated
    /// where admissible).
    pub locus_pairs: Vec<((f64, f64), f64, Option<f64>)>,
    /// Both degeneracy functions along the matched axis sequence `(t, 0)`.
    pub axis_sequence: Vec<(f64, f64, f64)>,
    /// Degenerate-field flags from the locus extraction of each side.
    pub degenerate_field_max: bool,
    pub degenerate_field_tl: bool,
}

/// Check Born-Infeld satisfaction of `tl_s` and the transport of singular
/// loci from `max_s` under the coordinate identification of the real slice.
/// The matched axis sequence samples both degeneracy functions along
/// `(t, 0)` for `t` in a decade ladder; for continuations of rotationally
/// symmetric graphs the two values agree and tend to zero together.
pub fn correspondence_check(
    max_s: &GraphSurface,
    tl_s: &GraphSurface,
    n: usize,
) -> Result<CorrespondenceReport, WickError> {
    // (a) Born-Infeld residual over sampled admissible points.
    let pts = tl_s.sample_admissible(n, 0x4c4d53)?;
    let mut bi_max: f64 = 0.0;
    for p in &pts {
        bi_max = bi_max.max(pde::residual_borninfeld(tl_s, *p)?.abs());
    }

    // (b) Locus transport under (x, y) = (u, v).
    let max_locus = pde::singular_locus(max_s, pde::DEFAULT_GRID, pde::DEFAULT_GRID, pde::DEFAULT_REFINE_TOL)?;
    let tl_locus = pde::singular_locus(tl_s, pde::DEFAULT_GRID, pde::DEFAULT_GRID, pde::DEFAULT_REFINE_TOL)?;
    let mut locus_pairs = Vec::new();
    let vertices: Vec<(f64, f64)> =
        max_locus.polylines.iter().flat_map(|p| p.points.iter().copied()).collect();
    let step = (vertices.len() / n.max(1)).max(1);
    for p in vertices.iter().step_by(step).take(n) {
        let eq4 = pde::degeneracy_maximal(max_s, *p)?;
        let eq5 = if tl_s.domain.contains(*p) {
            pde::degeneracy_timelike(tl_s, *p).ok()
        } else {
            None
        };
        locus_pairs.push((*p, eq4, eq5));
    }

    // Matched approach sequence toward the isolated cone point.
    let mut axis_sequence = Vec::new();
    for k in 1..=4 {
        let t = 10f64.powi(-k);
        let p = (t, 0.0);
        if max_s.domain.contains(p) && tl_s.domain.contains(p) {
            let d_max = pde::degeneracy_maximal(max_s, p)?;
            let d_tl = pde::degeneracy_timelike(tl_s, p)?;
            axis_sequence.push((t, d_max, d_tl));
        }
    }

    Ok(CorrespondenceReport {
        bi_residual_max: bi_max,
        n_residual_samples: pts.len(),
        locus_pairs,
        axis_sequence,
        degenerate_field_max: max_locus.degenerate_field,
        degenerate_field_tl: tl_locus.degenerate_field,
    })
}
