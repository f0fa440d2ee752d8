//! Built-in definitions of the surfaces the toolkit certifies, plus a
//! plain-text definition-file loader.
//!
//! Registered ids:
//!
//! | id | primary form | class |
//! |----|--------------|-------|
//! | `elliptic-catenoid` | graph `z = a*asinh(sqrt(x^2+y^2)/a)` | maximal |
//! | `catenoid-2nd-kind` | graph `z = -a*asinh(sqrt(u^2-v^2)/a)`, `u^2 > v^2` | timelike-minimal |
//! | `helicoid-spacelike-axis` | parametric (null coordinates), (-,+,+) | timelike-minimal |
//! | `helicoid-timelike-axis` | parametric (null coordinates), (-,+,+) | timelike-minimal |
//! | `helicoid-timelike-axis-graph` | graph `z = v*cos(u/2)/sin(u/2)` | timelike-minimal |
//! | `plane` | graph `z = c` | maximal (solves both equations) |
//! | `paraboloid` | graph `z = x^2+y^2` | non-solution (negative control) |
//!
//! The helicoid entries also carry their isothermal forms and Weierstrass
//! data. `helicoid-timelike-axis-graph` is the timelike-axis helicoid solved
//! for its height over the first two ambient coordinates; its gradient is
//! 2*pi-periodic in `u`, which makes it the stock example of a timelike
//! graph whose Gauss map is not one-to-one.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::error::ParseError;
use crate::surface::{
    DomainConstraint, GraphSurface, ParametricSurface, Rect, Signature, SurfaceClass,
    WeierstrassData,
};

pub const DEFAULT_EXCLUSION_HALF_WIDTH: f64 = 1e-3;
const TAU: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown surface id `{0}`")]
    UnknownId(String),
    #[error("definition parse error: {0}")]
    Expr(#[from] ParseError),
    #[error("definition file line {line}: {message}")]
    File { line: usize, message: String },
    #[error("i/o error reading definition file: {0}")]
    Io(#[from] std::io::Error),
}

/// One of the three surface descriptions a catalog id can resolve to.
#[derive(Debug, Clone)]
pub enum SurfaceDef {
    Graph(GraphSurface),
    Parametric(ParametricSurface),
    Weierstrass(WeierstrassData),
}

impl SurfaceDef {
    pub fn name(&self) -> &str {
        match self {
            SurfaceDef::Graph(g) => &g.name,
            SurfaceDef::Parametric(p) => &p.name,
            SurfaceDef::Weierstrass(w) => &w.name,
        }
    }
}

/// Every form registered for one id.
#[derive(Debug, Clone, Default)]
pub struct CatalogEntry {
    pub id: String,
    pub graph: Option<GraphSurface>,
    pub parametric: Option<ParametricSurface>,
    pub isothermal: Option<ParametricSurface>,
    pub weierstrass: Option<WeierstrassData>,
    /// Human-readable graph relation satisfied by the isothermal form.
    pub graph_relation: Option<&'static str>,
}

pub fn ids() -> &'static [&'static str] {
    &[
        "elliptic-catenoid",
        "catenoid-2nd-kind",
        "helicoid-spacelike-axis",
        "helicoid-timelike-axis",
        "helicoid-timelike-axis-graph",
        "plane",
        "paraboloid",
    ]
}

/// Full record for an id.
pub fn entry(id: &str) -> Result<CatalogEntry, CatalogError> {
    let mut e = CatalogEntry { id: id.to_string(), ..CatalogEntry::default() };
    match id {
        "elliptic-catenoid" => {
            e.graph = Some(
                GraphSurface::new(
                    id,
                    "a*asinh(sqrt(x^2+y^2)/a)",
                    &["x", "y"],
                    Rect::square(2.0),
                    SurfaceClass::Maximal,
                )?
                .with_param("a", 1.0)
                .with_constraint(DomainConstraint::ExcludeDisk {
                    cx: 0.0,
                    cy: 0.0,
                    r: DEFAULT_EXCLUSION_HALF_WIDTH,
                }),
            );
        }
        "catenoid-2nd-kind" => {
            e.graph = Some(
                GraphSurface::new(
                    id,
                    "-a*asinh(sqrt(u^2-v^2)/a)",
                    &["u", "v"],
                    Rect::square(2.0),
                    SurfaceClass::TimelikeMinimal,
                )?
                .with_param("a", 1.0)
                .with_constraint(DomainConstraint::RequireConeInterior)
                .with_constraint(DomainConstraint::ExcludeLightConeStrip {
                    half_width: DEFAULT_EXCLUSION_HALF_WIDTH,
                }),
            );
        }
        "helicoid-spacelike-axis" => {
            e.parametric = Some(ParametricSurface::new(
                id,
                ["-(sinh(u)+sinh(v))", "-(cosh(u)+cosh(v))", "-(u+v)"],
                &["u", "v"],
                Rect::square(2.0),
                Signature::MPP,
            )?);
            e.isothermal = Some(ParametricSurface::new(
                format!("{id}-isothermal"),
                ["-(2*cosh(x)*sinh(y))", "-(2*cosh(x)*cosh(y))", "-(2*y)"],
                &["x", "y"],
                Rect::square(2.0),
                Signature::MPP,
            )?);
            e.weierstrass = Some(WeierstrassData::new(
                id,
                "-exp(u)",
                "-exp(-u)",
                "exp(-v)",
                "-exp(v)",
            )?);
            e.graph_relation = Some("X/Y = tanh(Z/2)");
        }
        "helicoid-timelike-axis" => {
            e.parametric = Some(ParametricSurface::new(
                id,
                ["-(u+v)", "-(sin(u)+sin(v))", "cos(u)+cos(v)"],
                &["u", "v"],
                Rect::square(2.0),
                Signature::MPP,
            )?);
            e.isothermal = Some(ParametricSurface::new(
                format!("{id}-isothermal"),
                ["-(2*y)", "-(2*cos(x)*sin(y))", "2*cos(x)*cos(y)"],
                &["x", "y"],
                Rect::square(2.0),
                Signature::MPP,
            )?);
            e.weierstrass = Some(WeierstrassData::new(
                id,
                "sin(u)/(-1+cos(u))",
                "-1+cos(u)",
                "sin(v)/(1+cos(v))",
                "-(1+cos(v))",
            )?);
            e.graph_relation = Some("Y/Z = -tan(X/2)");
        }
        "helicoid-timelike-axis-graph" => {
            // Height of the timelike-axis helicoid over its first two ambient
            // coordinates; poles at u in 2*pi*Z.
            e.graph = Some(
                GraphSurface::new(
                    id,
                    "v*cos(u/2)/sin(u/2)",
                    &["u", "v"],
                    Rect::new(0.5, 0.5 + TAU, -2.0, 2.0),
                    SurfaceClass::TimelikeMinimal,
                )?
                .with_constraint(DomainConstraint::ExcludeVerticalStrip {
                    center: TAU,
                    half_width: DEFAULT_EXCLUSION_HALF_WIDTH,
                }),
            );
        }
        "plane" => {
            // Solves both governing equations; registered as maximal so the
            // graph operators have a definite class to dispatch on.
            e.graph = Some(
                GraphSurface::new(id, "c", &["x", "y"], Rect::square(2.0), SurfaceClass::Maximal)?
                    .with_param("c", 0.0),
            );
        }
        "paraboloid" => {
            e.graph = Some(GraphSurface::new(
                id,
                "x^2+y^2",
                &["x", "y"],
                Rect::square(2.0),
                SurfaceClass::NonSolution,
            )?);
        }
        other => return Err(CatalogError::UnknownId(other.to_string())),
    }
    Ok(e)
}

/// Primary definition for an id: graph form where one exists, else the
/// null-coordinate parametric form, else the Weierstrass data.
pub fn get(id: &str) -> Result<SurfaceDef, CatalogError> {
    let e = entry(id)?;
    if let Some(g) = e.graph {
        return Ok(SurfaceDef::Graph(g));
    }
    if let Some(p) = e.parametric {
        return Ok(SurfaceDef::Parametric(p));
    }
    if let Some(w) = e.weierstrass {
        return Ok(SurfaceDef::Weierstrass(w));
    }
    Err(CatalogError::UnknownId(id.to_string()))
}

/// Graph form for an id, when registered.
pub fn graph(id: &str) -> Result<GraphSurface, CatalogError> {
    entry(id)?
        .graph
        .ok_or_else(|| CatalogError::UnknownId(format!("{id} (no graph form)")))
}

/// Weierstrass data for an id, when registered.
pub fn weierstrass(id: &str) -> Result<WeierstrassData, CatalogError> {
    entry(id)?
        .weierstrass
        .ok_or_else(|| CatalogError::UnknownId(format!("{id} (no Weierstrass data)")))
}

/// Load a surface from a `key = value` definition file. `#` starts a
/// comment. Recognized keys: `name`, `kind`, `vars`, `z` or `X`,`Y`,`Z` or
/// `q`,`f`,`r`,`g`, `domain` (`x0:x1:y0:y1`), `params` (`a=1,c=0.5`),
/// `convention` (`-++`, `++-`, `+++`), and `u0`,`v0` base points for
/// Weierstrass data.
pub fn load_file(path: impl AsRef<Path>) -> Result<SurfaceDef, CatalogError> {
    let text = std::fs::read_to_string(path)?;
    parse_definition(&text)
}

pub fn parse_definition(text: &str) -> Result<SurfaceDef, CatalogError> {
    let mut keys: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(idx) => &raw[..idx],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(CatalogError::File {
            line: lineno + 1,
            message: "expected `key = value`".into(),
        })?;
        keys.insert(k.trim().to_string(), (lineno + 1, v.trim().to_string()));
    }

    let take = |keys: &BTreeMap<String, (usize, String)>, k: &str| -> Option<String> {
        keys.get(k).map(|(_, v)| v.clone())
    };
    let require = |k: &str| -> Result<String, CatalogError> {
        take(&keys, k).ok_or(CatalogError::File { line: 0, message: format!("missing key `{k}`") })
    };

    let name = require("name")?;
    let vars_raw = take(&keys, "vars").unwrap_or_else(|| "x,y".to_string());
    let vars: Vec<String> = vars_raw.split(',').map(|s| s.trim().to_string()).collect();
    if vars.len() != 2 {
        return Err(CatalogError::File { line: 0, message: "`vars` must name two variables".into() });
    }
    let var_pair: [&str; 2] = [vars[0].as_str(), vars[1].as_str()];

    let domain = match take(&keys, "domain") {
        Some(d) => Rect::parse(&d).ok_or(CatalogError::File {
            line: 0,
            message: format!("bad domain `{d}`, expected x0:x1:y0:y1"),
        })?,
        None => Rect::square(2.0),
    };

    let mut params = BTreeMap::new();
    if let Some(p) = take(&keys, "params") {
        for item in p.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item.split_once('=').ok_or(CatalogError::File {
                line: 0,
                message: format!("bad params item `{item}`, expected name=value"),
            })?;
            let value: f64 = v.trim().parse().map_err(|_| CatalogError::File {
                line: 0,
                message: format!("bad params value `{v}`"),
            })?;
            params.insert(k.trim().to_string(), value);
        }
    }

    let convention = match take(&keys, "convention") {
        Some(c) => Signature::from_str(&c).ok_or(CatalogError::File {
            line: 0,
            message: format!("bad convention `{c}`"),
        })?,
        None => Signature::MPP,
    };

    if let Some(z) = take(&keys, "z") {
        let kind_raw = require("kind")?;
        let kind = SurfaceClass::from_str(&kind_raw).ok_or(CatalogError::File {
            line: 0,
            message: format!("bad kind `{kind_raw}`"),
        })?;
        let mut g = GraphSurface::new(name, &z, &var_pair, domain, kind)?;
        g.params = params;
        return Ok(SurfaceDef::Graph(g));
    }

    if keys.contains_key("X") || keys.contains_key("Y") || keys.contains_key("Z") {
        let (xs, ys, zs) = (require("X")?, require("Y")?, require("Z")?);
        let mut p =
            ParametricSurface::new(name, [&xs[..], &ys[..], &zs[..]], &var_pair, domain, convention)?;
        p.params = params;
        return Ok(SurfaceDef::Parametric(p));
    }

    if keys.contains_key("q") || keys.contains_key("f") {
        let (q, f, r, g) = (require("q")?, require("f")?, require("r")?, require("g")?);
        let mut w = WeierstrassData::new(name, &q, &f, &r, &g)?;
        w.u0 = take(&keys, "u0").and_then(|s| s.parse().ok());
        w.v0 = take(&keys, "v0").and_then(|s| s.parse().ok());
        w.params = params;
        return Ok(SurfaceDef::Weierstrass(w));
    }

    Err(CatalogError::File {
        line: 0,
        message: "definition needs `z`, or `X`,`Y`,`Z`, or `q`,`f`,`r`,`g`".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ids_resolve() {
        for id in ids() {
            let e = entry(id).unwrap();
            assert!(
                e.graph.is_some() || e.parametric.is_some() || e.weierstrass.is_some(),
                "{id} registered no form"
            );
        }
        assert!(get("nonexistent").is_err());
    }

    #[test]
    fn plane_default_height_is_zero() {
        let g = graph("plane").unwrap();
        assert_eq!(g.height((0.3, -0.7)).unwrap(), 0.0);
    }

    #[test]
    fn spacelike_helicoid_parametric_at_origin() {
        let e = entry("helicoid-spacelike-axis").unwrap();
        let p = e.parametric.unwrap().position((0.0, 0.0)).unwrap();
        assert_eq!(p, [0.0, -2.0, 0.0]);
    }

    #[test]
    fn second_kind_catenoid_value() {
        // z(2, 0) = -asinh(2) for a = 1; asinh(2) = ln(2 + sqrt(5)).
        let g = graph("catenoid-2nd-kind").unwrap();
        let v = g.height((2.0, 0.0)).unwrap();
        let expected = -(2.0f64 + 5.0f64.sqrt()).ln();
        assert!((v - expected).abs() < 1e-15);
        assert!((v - (-1.4436354751788103)).abs() < 1e-15);
    }

    #[test]
    fn catenoid_domain_excludes_light_cone() {
        let g = graph("catenoid-2nd-kind").unwrap();
        assert!(!g.admits((1.0, 1.0)));
        assert!(!g.admits((0.5, 1.0)));
        assert!(g.admits((1.5, 0.5)));
    }

    #[test]
    fn definition_file_round_trip() {
        let def = "
# a translated paraboloid
name = bump
kind = non-solution
vars = x,y
z = h*(x^2+y^2)
domain = -1:1:-1:1
params = h=0.5
";
        match parse_definition(def).unwrap() {
            SurfaceDef::Graph(g) => {
                assert_eq!(g.name, "bump");
                assert_eq!(g.height((1.0, 1.0)).unwrap(), 1.0);
                assert_eq!(g.domain, Rect::new(-1.0, 1.0, -1.0, 1.0));
            }
            other => panic!("expected graph, got {other:?}"),
        }
    }

    #[test]
    fn definition_file_weierstrass() {
        let def = "name = wdata\nq = -exp(u)\nf = -exp(-u)\nr = exp(-v)\ng = -exp(v)\nu0 = 0\nv0 = 0\n";
        match parse_definition(def).unwrap() {
            SurfaceDef::Weierstrass(w) => {
                assert_eq!(w.u0, Some(0.0));
                assert_eq!(w.name, "wdata");
            }
            other => panic!("expected weierstrass, got {other:?}"),
        }
    }

    #[test]
    fn definition_file_errors() {
        assert!(parse_definition("name = x\nbad line").is_err());
        assert!(parse_definition("name = x\n").is_err());
    }
}
