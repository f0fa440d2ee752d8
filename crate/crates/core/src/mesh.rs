//! Triangle meshes sampled from graph, parametric, and integrated surfaces,
//! plus deterministic OBJ and CSV writers.

use std::io::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::error::EvalError;
use crate::exec;
use crate::locus::LocusPolyline;
use crate::pde;
use crate::surface::{GraphSurface, ParametricSurface};
use crate::weierstrass::IntegratedSurface;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("every grid cell intersects the exclusion set")]
    AllCellsExcluded,
    #[error("mesh is empty; nothing written")]
    EmptyMesh,
    #[error("grid must be at least 2x2, got {nx}x{ny}")]
    GridTooSmall { nx: usize, ny: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed OBJ at line {line}: {message}")]
    ObjParse { line: usize, message: String },
    #[error(transparent)]
    Weierstrass(#[from] crate::weierstrass::WeierstrassError),
}

/// An indexed triangle mesh with an optional per-vertex scalar attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[u32; 3]>,
    pub attributes: Option<Vec<f64>>,
}

impl TriMesh {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() || self.triangles.is_empty()
    }

    /// Index validity: every triangle references three distinct in-range
    /// vertices, and the attribute vector (when present) matches the
    /// vertex count.
    pub fn validate(&self) -> Result<(), MeshError> {
        let n = self.vertices.len() as u32;
        for (k, t) in self.triangles.iter().enumerate() {
            if t[0] >= n || t[1] >= n || t[2] >= n {
                return Err(MeshError::ObjParse {
                    line: k,
                    message: "triangle index out of range".into(),
                });
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(MeshError::ObjParse {
                    line: k,
                    message: "degenerate triangle".into(),
                });
            }
        }
        if let Some(a) = &self.attributes {
            if a.len() != self.vertices.len() {
                return Err(MeshError::ObjParse {
                    line: 0,
                    message: "attribute count mismatch".into(),
                });
            }
        }
        Ok(())
    }

    /// Vertex/edge/face counts for Euler-characteristic checks; edges are
    /// counted as undirected pairs.
    pub fn euler_counts(&self) -> (usize, usize, usize) {
        use std::collections::BTreeSet;
        let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        (self.vertices.len(), edges.len(), self.triangles.len())
    }
}

/// Sample a graph surface over an `nx x ny` grid. Cells whose corners are
/// not all admissible and evaluable are omitted; each remaining quad splits
/// along the diagonal toward increasing coordinates. Vertex attributes carry
/// the degeneracy value.
pub fn sample_graph(s: &GraphSurface, nx: usize, ny: usize) -> Result<TriMesh, MeshError> {
    if nx < 2 || ny < 2 {
        return Err(MeshError::GridTooSmall { nx, ny });
    }
    // Vertex candidates: position plus degeneracy attribute where the jet
    // evaluates; None where excluded or not evaluable.
    let verts = exec::map_indexed(nx * ny, |idx| {
        let i = idx % nx;
        let j = idx / nx;
        let p = (s.domain.node_x(i, nx), s.domain.node_y(j, ny));
        if !s.admits(p) {
            return None;
        }
        let height = s.height(p).ok()?;
        let degeneracy = pde::degeneracy_for_kind(s, p).ok()?;
        Some(([p.0, p.1, height], degeneracy))
    });

    let mut index_map = vec![u32::MAX; nx * ny];
    let mut vertices = Vec::new();
    let mut attributes = Vec::new();
    let mut triangles = Vec::new();
    let mut any_cell = false;
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let corners = [j * nx + i, j * nx + i + 1, (j + 1) * nx + i + 1, (j + 1) * nx + i];
            if corners.iter().any(|&c| verts[c].is_none()) {
                continue;
            }
            any_cell = true;
            let mut ids = [0u32; 4];
            for (slot, &c) in ids.iter_mut().zip(&corners) {
                if index_map[c] == u32::MAX {
                    let (v, a) = verts[c].expect("checked");
                    index_map[c] = vertices.len() as u32;
                    vertices.push(v);
                    attributes.push(a);
                }
                *slot = index_map[c];
            }
            // Diagonal from (i, j) to (i+1, j+1).
            triangles.push([ids[0], ids[1], ids[2]]);
            triangles.push([ids[0], ids[2], ids[3]]);
        }
    }
    if !any_cell {
        return Err(MeshError::AllCellsExcluded);
    }
    Ok(TriMesh { vertices, triangles, attributes: Some(attributes) })
}

/// Sample a parametric surface over its domain rectangle.
pub fn sample_parametric(s: &ParametricSurface, nx: usize, ny: usize) -> Result<TriMesh, MeshError> {
    if nx < 2 || ny < 2 {
        return Err(MeshError::GridTooSmall { nx, ny });
    }
    let mut vertices = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let p = (s.domain.node_x(i, nx), s.domain.node_y(j, ny));
            vertices.push(s.position(p)?);
        }
    }
    Ok(TriMesh { vertices, triangles: grid_triangles(nx, ny), attributes: None })
}

/// Mesh an integrated translation surface on its sample nodes.
pub fn sample_integrated(s: &IntegratedSurface) -> Result<TriMesh, MeshError> {
    let nx = s.u_nodes.len();
    let ny = s.v_nodes.len();
    if nx < 2 || ny < 2 {
        return Err(MeshError::GridTooSmall { nx, ny });
    }
    Ok(TriMesh {
        vertices: s.position_grid(),
        triangles: grid_triangles(nx, ny),
        attributes: None,
    })
}

fn grid_triangles(nx: usize, ny: usize) -> Vec<[u32; 3]> {
    let mut triangles = Vec::with_capacity(2 * (nx - 1) * (ny - 1));
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let a = (j * nx + i) as u32;
            let b = (j * nx + i + 1) as u32;
            let c = ((j + 1) * nx + i + 1) as u32;
            let d = ((j + 1) * nx + i) as u32;
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    triangles
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write an OBJ file: `v` lines with 17 significant digits, then 1-based
/// `f` lines, LF endings, bit-stable across runs. Empty meshes error and
/// leave no file behind.
pub fn write_obj(m: &TriMesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    if m.is_empty() {
        return Err(MeshError::EmptyMesh);
    }
    let mut out = String::new();
    for v in &m.vertices {
        out.push_str(&format!("v {} {} {}\n", fmt17(v[0]), fmt17(v[1]), fmt17(v[2])));
    }
    for t in &m.triangles {
        out.push_str(&format!("f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1));
    }
    write_atomic(path.as_ref(), out.as_bytes())?;
    Ok(())
}

/// Read back an OBJ written by [`write_obj`] (vertices and faces only).
pub fn read_obj(path: impl AsRef<Path>) -> Result<TriMesh, MeshError> {
    let text = std::fs::read_to_string(path)?;
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let mut v = [0.0f64; 3];
                for slot in &mut v {
                    *slot = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or(MeshError::ObjParse {
                            line: lineno + 1,
                            message: "bad vertex".into(),
                        })?;
                }
                vertices.push(v);
            }
            Some("f") => {
                let mut t = [0u32; 3];
                for slot in &mut t {
                    let idx: u32 = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or(MeshError::ObjParse {
                            line: lineno + 1,
                            message: "bad face".into(),
                        })?;
                    *slot = idx - 1;
                }
                triangles.push(t);
            }
            _ => {}
        }
    }
    Ok(TriMesh { vertices, triangles, attributes: None })
}

/// Write one locus polyline as CSV with header `x,y`, one vertex per row.
pub fn write_polyline_csv(l: &LocusPolyline, path: impl AsRef<Path>) -> Result<(), MeshError> {
    write_polylines_csv(std::slice::from_ref(l), path)
}

/// Write several polylines into one CSV (vertices concatenated in order).
pub fn write_polylines_csv(ls: &[LocusPolyline], path: impl AsRef<Path>) -> Result<(), MeshError> {
    if ls.iter().all(|l| l.points.is_empty()) {
        return Err(MeshError::EmptyMesh);
    }
    let mut out = String::from("x,y\n");
    for l in ls {
        for &(x, y) in &l.points {
            out.push_str(&format!("{},{}\n", fmt17(x), fmt17(y)));
        }
    }
    write_atomic(path.as_ref(), out.as_bytes())?;
    Ok(())
}

/// Write via a sibling temp file and rename, so partial output never lands
/// at the destination.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension({
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        format!("{ext}.tmp")
    });
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}
