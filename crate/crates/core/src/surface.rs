//! Surface descriptions: graphs over a planar domain, parametric patches
//! over a parameter rectangle, and Weierstrass-type integration data.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{EvalError, ParseError};
use crate::expr::CompiledExpr;
use crate::jet::Jet2;

/// Expected class of a surface graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceClass {
    Maximal,
    TimelikeMinimal,
    NonSolution,
}

impl SurfaceClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SurfaceClass::Maximal => "maximal",
            SurfaceClass::TimelikeMinimal => "timelike-minimal",
            SurfaceClass::NonSolution => "non-solution",
        }
    }

    pub fn from_str(s: &str) -> Option<Self> {
        Some(match s {
            "maximal" => SurfaceClass::Maximal,
            "timelike-minimal" => SurfaceClass::TimelikeMinimal,
            "non-solution" => SurfaceClass::NonSolution,
            _ => return None,
        })
    }
}

/// Ambient metric signature, as the diagonal signs of the inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature(pub [i8; 3]);

impl Signature {
    /// (+, +, -): third coordinate timelike.
    pub const PPM: Signature = Signature([1, 1, -1]);
    /// (-, +, +): first coordinate timelike.
    pub const MPP: Signature = Signature([-1, 1, 1]);
    /// (+, +, +): Euclidean control.
    pub const EUCLIDEAN: Signature = Signature([1, 1, 1]);

    pub fn dot(&self, a: [f64; 3], b: [f64; 3]) -> f64 {
        let e = self.0;
        (e[0] as f64) * (a[0] * b[0]) + (e[1] as f64) * (a[1] * b[1]) + (e[2] as f64) * (a[2] * b[2])
    }

    /// Cross product adapted to the metric, so that `dot(cross(a,b), c)` is
    /// the Euclidean determinant `det[a; b; c]`.
    pub fn cross(&self, a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        let e = self.0;
        [
            (e[0] as f64) * (a[1] * b[2] - a[2] * b[1]),
            (e[1] as f64) * (a[2] * b[0] - a[0] * b[2]),
            (e[2] as f64) * (a[0] * b[1] - a[1] * b[0]),
        ]
    }

    pub fn as_str(&self) -> &'static str {
        match self.0 {
            [1, 1, -1] => "++-",
            [-1, 1, 1] => "-++",
            [1, 1, 1] => "+++",
            _ => "custom",
        }
    }

    pub fn from_str(s: &str) -> Option<Signature> {
        Some(match s {
            "++-" | "(+,+,-)" => Signature::PPM,
            "-++" | "(-,+,+)" => Signature::MPP,
            "+++" | "(+,+,+)" => Signature::EUCLIDEAN,
            _ => return None,
        })
    }
}

/// An axis-aligned parameter rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Rect {
        Rect { x0, x1, y0, y1 }
    }

    pub fn square(half: f64) -> Rect {
        Rect::new(-half, half, -half, half)
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        p.0 >= self.x0 && p.0 <= self.x1 && p.1 >= self.y0 && p.1 <= self.y1
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    /// Grid node `i` of `n` along x; endpoints land exactly on the bounds.
    pub fn node_x(&self, i: usize, n: usize) -> f64 {
        lerp(self.x0, self.x1, i as f64 / (n - 1) as f64)
    }

    pub fn node_y(&self, j: usize, n: usize) -> f64 {
        lerp(self.y0, self.y1, j as f64 / (n - 1) as f64)
    }

    pub fn spacing(&self, nx: usize, ny: usize) -> (f64, f64) {
        (
            (self.x1 - self.x0) / (nx - 1) as f64,
            (self.y1 - self.y0) / (ny - 1) as f64,
        )
    }

    /// Rectangle scaled about its center.
    pub fn scaled(&self, factor: f64) -> Rect {
        let (cx, cy) = self.center();
        let hx = 0.5 * (self.x1 - self.x0) * factor;
        let hy = 0.5 * (self.y1 - self.y0) * factor;
        Rect::new(cx - hx, cx + hx, cy - hy, cy + hy)
    }

    /// Parse `x0:x1:y0:y1`.
    pub fn parse(s: &str) -> Option<Rect> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return None;
        }
        let v: Option<Vec<f64>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
        let v = v?;
        (v[0] < v[1] && v[2] < v[3]).then(|| Rect::new(v[0], v[1], v[2], v[3]))
    }
}

pub fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a * (1.0 - t) + b * t
}

/// Domain constraints layered on top of the rectangle. Grid samplers and
/// meshing honor these; pointwise operators only require the rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainConstraint {
    /// Drop points strictly inside the disk.
    ExcludeDisk { cx: f64, cy: f64, r: f64 },
    /// Keep only points with `x^2 > y^2` (the cone where the second-kind
    /// catenoid's radicand is positive).
    RequireConeInterior,
    /// Drop points within `half_width` (Euclidean distance) of either line
    /// `x = y` or `x = -y`.
    ExcludeLightConeStrip { half_width: f64 },
    /// Drop points with `|x^2 - y^2| < eps`.
    ExcludeQuadStrip { eps: f64 },
    /// Drop points with `|x - center| < half_width`.
    ExcludeVerticalStrip { center: f64, half_width: f64 },
}

impl DomainConstraint {
    pub fn admits(&self, p: (f64, f64)) -> bool {
        let (x, y) = p;
        match *self {
            DomainConstraint::ExcludeDisk { cx, cy, r } => {
                (x - cx) * (x - cx) + (y - cy) * (y - cy) >= r * r
            }
            DomainConstraint::RequireConeInterior => x * x > y * y,
            DomainConstraint::ExcludeLightConeStrip { half_width } => {
                let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
                let d1 = (x - y).abs() * inv_sqrt2;
                let d2 = (x + y).abs() * inv_sqrt2;
                d1 >= half_width && d2 >= half_width
            }
            DomainConstraint::ExcludeQuadStrip { eps } => (x * x - y * y).abs() >= eps,
            DomainConstraint::ExcludeVerticalStrip { center, half_width } => {
                (x - center).abs() >= half_width
            }
        }
    }
}

/// A surface given as the graph of a height expression over a rectangle.
#[derive(Debug, Clone)]
pub struct GraphSurface {
    pub name: String,
    pub z: CompiledExpr,
    pub domain: Rect,
    pub constraints: Vec<DomainConstraint>,
    pub kind: SurfaceClass,
    pub params: BTreeMap<String, f64>,
}

impl GraphSurface {
    pub fn new(
        name: impl Into<String>,
        z_source: &str,
        variables: &[&str; 2],
        domain: Rect,
        kind: SurfaceClass,
    ) -> Result<GraphSurface, ParseError> {
        Ok(GraphSurface {
            name: name.into(),
            z: CompiledExpr::parse(z_source, variables)?,
            domain,
            constraints: Vec::new(),
            kind,
            params: BTreeMap::new(),
        })
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn with_constraint(mut self, c: DomainConstraint) -> Self {
        self.constraints.push(c);
        self
    }

    pub fn with_kind(mut self, kind: SurfaceClass) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = domain;
        self
    }

    /// Point acceptable to grid samplers: inside the rectangle and passing
    /// every domain constraint.
    pub fn admits(&self, p: (f64, f64)) -> bool {
        self.domain.contains(p) && self.constraints.iter().all(|c| c.admits(p))
    }

    /// Height value at `p`.
    pub fn height(&self, p: (f64, f64)) -> Result<f64, EvalError> {
        self.z.eval(&[p.0, p.1], &self.params)
    }

    /// Height with first and second partials at `p`.
    pub fn jet(&self, p: (f64, f64)) -> Result<Jet2<f64>, EvalError> {
        let (jx, jy) = Jet2::seed_pair((p.0, p.1));
        self.z.eval(&[jx, jy], &self.params)
    }

    /// Deterministic rejection sampling of admissible points where the jet
    /// evaluates. Returns an error if the acceptance rate collapses.
    pub fn sample_admissible(&self, n: usize, seed: u64) -> Result<Vec<(f64, f64)>, EvalError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0usize;
        let budget = 10_000 * n.max(1);
        let mut last_err = None;
        while out.len() < n && attempts < budget {
            attempts += 1;
            let x = lerp(self.domain.x0, self.domain.x1, rng.gen::<f64>());
            let y = lerp(self.domain.y0, self.domain.y1, rng.gen::<f64>());
            if !self.admits((x, y)) {
                continue;
            }
            match self.jet((x, y)) {
                Ok(_) => out.push((x, y)),
                Err(e) => last_err = Some(e),
            }
        }
        if out.len() < n {
            return Err(last_err.unwrap_or_else(|| {
                EvalError::unbound_param("admissible sample budget exhausted", self.z.source())
            }));
        }
        Ok(out)
    }
}

/// A surface given by three coordinate expressions over a rectangle.
#[derive(Debug, Clone)]
pub struct ParametricSurface {
    pub name: String,
    pub x: CompiledExpr,
    pub y: CompiledExpr,
    pub z: CompiledExpr,
    pub domain: Rect,
    pub convention: Signature,
    pub params: BTreeMap<String, f64>,
}

impl ParametricSurface {
    pub fn new(
        name: impl Into<String>,
        sources: [&str; 3],
        variables: &[&str; 2],
        domain: Rect,
        convention: Signature,
    ) -> Result<ParametricSurface, ParseError> {
        Ok(ParametricSurface {
            name: name.into(),
            x: CompiledExpr::parse(sources[0], variables)?,
            y: CompiledExpr::parse(sources[1], variables)?,
            z: CompiledExpr::parse(sources[2], variables)?,
            domain,
            convention,
            params: BTreeMap::new(),
        })
    }

    pub fn position(&self, p: (f64, f64)) -> Result<[f64; 3], EvalError> {
        let pt = [p.0, p.1];
        Ok([
            self.x.eval(&pt, &self.params)?,
            self.y.eval(&pt, &self.params)?,
            self.z.eval(&pt, &self.params)?,
        ])
    }

    pub fn jets(&self, p: (f64, f64)) -> Result<[Jet2<f64>; 3], EvalError> {
        let (ju, jv) = Jet2::seed_pair((p.0, p.1));
        let pt = [ju, jv];
        Ok([
            self.x.eval(&pt, &self.params)?,
            self.y.eval(&pt, &self.params)?,
            self.z.eval(&pt, &self.params)?,
        ])
    }

    /// Position in Lorentz isothermal coordinates, i.e. evaluated at the
    /// null-coordinate image `(u, v) = (x + y, -x + y)`.
    pub fn at_isothermal(&self, p: (f64, f64)) -> Result<[f64; 3], EvalError> {
        self.position((p.0 + p.1, -p.0 + p.1))
    }
}

/// Weierstrass-type integration data: `q`, `f` univariate in `u`; `r`, `g`
/// univariate in `v`; optional integration base points. The signature
/// convention is fixed to (-,+,+): the first ambient coordinate is timelike.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    pub name: String,
    pub q: CompiledExpr,
    pub f: CompiledExpr,
    pub r: CompiledExpr,
    pub g: CompiledExpr,
    pub u0: Option<f64>,
    pub v0: Option<f64>,
    pub params: BTreeMap<String, f64>,
}

impl WeierstrassData {
    pub fn new(
        name: impl Into<String>,
        q: &str,
        f: &str,
        r: &str,
        g: &str,
    ) -> Result<WeierstrassData, ParseError> {
        Ok(WeierstrassData {
            name: name.into(),
            q: CompiledExpr::parse(q, &["u"])?,
            f: CompiledExpr::parse(f, &["u"])?,
            r: CompiledExpr::parse(r, &["v"])?,
            g: CompiledExpr::parse(g, &["v"])?,
            u0: None,
            v0: None,
            params: BTreeMap::new(),
        })
    }
}
