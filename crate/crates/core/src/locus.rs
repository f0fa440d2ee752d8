//! Marching-squares extraction of degeneracy-function zero sets.
//!
//! Cells are scanned row-major; every edge crossing is refined by bisection
//! along the grid edge until the degeneracy value drops below the refinement
//! tolerance; polylines are assembled by shared-edge adjacency. Saddle cells
//! are disambiguated by the sign of a cell-center sample. If at least half
//! of the sampled cells have all four corners within the refinement
//! tolerance of zero, the field is reported as degenerate instead of being
//! contoured (an identically lightlike graph such as `z = x` has no
//! meaningful contour).

use std::collections::HashMap;

use crate::exec;
use crate::pde::{degeneracy_for_kind, PdeError};
use crate::surface::{lerp, GraphSurface};

/// A refined zero-level polyline.
#[derive(Debug, Clone)]
pub struct LocusPolyline {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
    /// Max |degeneracy| over the refined vertices.
    pub residual_bound: f64,
}

/// Outcome of a locus extraction.
#[derive(Debug, Clone)]
pub struct LocusReport {
    pub degenerate_field: bool,
    /// Fraction of sampled cells whose four corners all sit within the
    /// refinement tolerance of zero.
    pub degenerate_cell_fraction: f64,
    pub polylines: Vec<LocusPolyline>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeKey {
    H(usize, usize),
    V(usize, usize),
}

/// A grid edge with its two corner positions and values.
type EdgeSample = (EdgeKey, (f64, f64), f64, (f64, f64), f64);

struct Segment {
    a: EdgeKey,
    b: EdgeKey,
}

pub(crate) fn extract(
    s: &GraphSurface,
    nx: usize,
    ny: usize,
    refine_tol: f64,
) -> Result<LocusReport, PdeError> {
    // Corner values; None marks inadmissible nodes.
    let raw = exec::map_indexed(nx * ny, |idx| {
        let i = idx % nx;
        let j = idx / nx;
        let p = (s.domain.node_x(i, nx), s.domain.node_y(j, ny));
        if !s.admits(p) {
            return None;
        }
        Some(degeneracy_for_kind(s, p))
    });
    let mut values: Vec<Option<f64>> = Vec::with_capacity(raw.len());
    for v in raw {
        match v {
            None => values.push(None),
            Some(Ok(x)) => values.push(Some(x)),
            Some(Err(e)) => return Err(e),
        }
    }
    let value = |i: usize, j: usize| values[j * nx + i];
    let node = |i: usize, j: usize| (s.domain.node_x(i, nx), s.domain.node_y(j, ny));

    // Degenerate-field sentinel.
    let mut sampled_cells = 0usize;
    let mut degenerate_cells = 0usize;
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let corners = [value(i, j), value(i + 1, j), value(i + 1, j + 1), value(i, j + 1)];
            if corners.iter().any(|c| c.is_none()) {
                continue;
            }
            sampled_cells += 1;
            if corners.iter().all(|c| c.unwrap().abs() <= refine_tol) {
                degenerate_cells += 1;
            }
        }
    }
    let fraction = if sampled_cells == 0 {
        0.0
    } else {
        degenerate_cells as f64 / sampled_cells as f64
    };
    if sampled_cells > 0 && 2 * degenerate_cells >= sampled_cells {
        return Ok(LocusReport {
            degenerate_field: true,
            degenerate_cell_fraction: fraction,
            polylines: Vec::new(),
        });
    }

    let inside = |v: f64| v <= 0.0;

    // Refined crossing per edge, computed once and shared by both cells.
    let mut crossings: HashMap<EdgeKey, ((f64, f64), f64)> = HashMap::new();
    let refine = |key: EdgeKey,
                      pa: (f64, f64),
                      fa: f64,
                      pb: (f64, f64),
                      fb: f64,
                      crossings: &mut HashMap<EdgeKey, ((f64, f64), f64)>|
     -> Result<(), PdeError> {
        if crossings.contains_key(&key) {
            return Ok(());
        }
        let mut ta = 0.0f64;
        let mut tb = 1.0f64;
        let mut va = fa;
        let mut best = if fa.abs() <= fb.abs() { (pa, fa.abs()) } else { (pb, fb.abs()) };
        if best.1 > refine_tol {
            for _ in 0..200 {
                let tm = 0.5 * (ta + tb);
                if tm == ta || tm == tb {
                    break;
                }
                let pm = (lerp(pa.0, pb.0, tm), lerp(pa.1, pb.1, tm));
                let fm = degeneracy_for_kind(s, pm)?;
                if fm.abs() < best.1 {
                    best = (pm, fm.abs());
                }
                if fm.abs() <= refine_tol {
                    break;
                }
                if inside(fm) == inside(va) {
                    ta = tm;
                    va = fm;
                } else {
                    tb = tm;
                }
            }
        }
        crossings.insert(key, best);
        Ok(())
    };

    let mut segments: Vec<Segment> = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let (f00, f10, f11, f01) = match (
                value(i, j),
                value(i + 1, j),
                value(i + 1, j + 1),
                value(i, j + 1),
            ) {
                (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
                _ => continue,
            };
            let p00 = node(i, j);
            let p10 = node(i + 1, j);
            let p11 = node(i + 1, j + 1);
            let p01 = node(i, j + 1);

            let bottom = EdgeKey::H(i, j);
            let top = EdgeKey::H(i, j + 1);
            let left = EdgeKey::V(i, j);
            let right = EdgeKey::V(i + 1, j);

            let case = (inside(f00) as u8)
                | ((inside(f10) as u8) << 1)
                | ((inside(f11) as u8) << 2)
                | ((inside(f01) as u8) << 3);

            let emit = |edges: &[EdgeSample],
                            pairs: &[(usize, usize)],
                            segments: &mut Vec<Segment>,
                            crossings: &mut HashMap<EdgeKey, ((f64, f64), f64)>|
             -> Result<(), PdeError> {
                for &(key, pa, fa, pb, fb) in edges {
                    refine(key, pa, fa, pb, fb, crossings)?;
                }
                for &(a, b) in pairs {
                    segments.push(Segment { a: edges[a].0, b: edges[b].0 });
                }
                Ok(())
            };

            let e_bottom = (bottom, p00, f00, p10, f10);
            let e_top = (top, p01, f01, p11, f11);
            let e_left = (left, p00, f00, p01, f01);
            let e_right = (right, p10, f10, p11, f11);

            match case {
                0 | 15 => {}
                1 | 14 => emit(&[e_left, e_bottom], &[(0, 1)], &mut segments, &mut crossings)?,
                2 | 13 => emit(&[e_bottom, e_right], &[(0, 1)], &mut segments, &mut crossings)?,
                3 | 12 => emit(&[e_left, e_right], &[(0, 1)], &mut segments, &mut crossings)?,
                4 | 11 => emit(&[e_top, e_right], &[(0, 1)], &mut segments, &mut crossings)?,
                6 | 9 => emit(&[e_bottom, e_top], &[(0, 1)], &mut segments, &mut crossings)?,
                7 | 8 => emit(&[e_left, e_top], &[(0, 1)], &mut segments, &mut crossings)?,
                5 | 10 => {
                    // Saddle: resolve by the cell-center sample. Treat an
                    // unsampleable center as outside.
                    let c = (0.5 * (p00.0 + p10.0), 0.5 * (p00.1 + p01.1));
                    let center_inside = if s.admits(c) {
                        inside(degeneracy_for_kind(s, c)?)
                    } else {
                        false
                    };
                    let join_00_11 = (case == 5) == center_inside;
                    if join_00_11 {
                        // Arcs hug the corners c10 and c01.
                        emit(
                            &[e_bottom, e_right, e_left, e_top],
                            &[(0, 1), (2, 3)],
                            &mut segments,
                            &mut crossings,
                        )?;
                    } else {
                        // Arcs hug the corners c00 and c11.
                        emit(
                            &[e_left, e_bottom, e_top, e_right],
                            &[(0, 1), (2, 3)],
                            &mut segments,
                            &mut crossings,
                        )?;
                    }
                }
                _ => unreachable!("4-bit case"),
            }
        }
    }

    // Chain segments into polylines by shared edges.
    let mut incident: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (idx, seg) in segments.iter().enumerate() {
        incident.entry(seg.a).or_default().push(idx);
        incident.entry(seg.b).or_default().push(idx);
    }
    let mut visited = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut chain: std::collections::VecDeque<EdgeKey> = std::collections::VecDeque::new();
        chain.push_back(segments[start].a);
        chain.push_back(segments[start].b);
        let mut closed = false;

        // Extend forward from the back, then backward from the front.
        loop {
            let back = *chain.back().unwrap();
            let next = incident[&back].iter().copied().find(|&i| !visited[i]);
            match next {
                Some(i) => {
                    visited[i] = true;
                    let other = if segments[i].a == back { segments[i].b } else { segments[i].a };
                    if other == *chain.front().unwrap() {
                        closed = true;
                        break;
                    }
                    chain.push_back(other);
                }
                None => break,
            }
        }
        if !closed {
            loop {
                let front = *chain.front().unwrap();
                let next = incident[&front].iter().copied().find(|&i| !visited[i]);
                match next {
                    Some(i) => {
                        visited[i] = true;
                        let other =
                            if segments[i].a == front { segments[i].b } else { segments[i].a };
                        if other == *chain.back().unwrap() {
                            closed = true;
                            break;
                        }
                        chain.push_front(other);
                    }
                    None => break,
                }
            }
        }

        let mut points = Vec::with_capacity(chain.len());
        let mut bound: f64 = 0.0;
        for key in &chain {
            let (p, r) = crossings[key];
            points.push(p);
            bound = bound.max(r);
        }
        polylines.push(LocusPolyline { points, closed, residual_bound: bound });
    }

    Ok(LocusReport { degenerate_field: false, degenerate_cell_fraction: fraction, polylines })
}
