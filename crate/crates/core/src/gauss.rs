//! Gauss maps of maximal and timelike graphs into the two unit hyperboloids,
//! grid-scale injectivity scanning with a spatial hash, and the transport
//! check linking images across the Wick correspondence.
//!
//! A maximal graph sends a point to the raw vector `(z_x, z_y, 1)`; after
//! Lorentz normalization by `sqrt(1 - z_x^2 - z_y^2)` the image lies on the
//! upper sheet of the two-sheeted hyperboloid `X^2 + Y^2 - Z^2 = -1`. A
//! timelike graph sends a point to raw `(w_u, -w_v, 1)`, normalized by
//! `sqrt(1 + w_v^2 - w_u^2)` onto the one-sheeted hyperboloid
//! `-U^2 + V^2 + W^2 = 1`. The raw vectors land on the quadrics only after
//! this normalization, which the module therefore always applies.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::EvalError;
use crate::exec;
use crate::pde::{PdeError, Threading};
use crate::surface::{lerp, GraphSurface, SurfaceClass};
use crate::wick::ContinuedGraph;

pub const DEFAULT_IMAGE_EPS: f64 = 1e-8;
pub const DEFAULT_BASE_DELTA: f64 = 1e-6;
/// Points with normalization radicand at or below this count as degenerate.
pub const RADICAND_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GaussError {
    #[error("singular or degenerate point ({0}, {1}): radicand {2:.3e} <= tolerance")]
    DegeneratePoint(f64, f64, f64),
    #[error("point ({0}, {1}) lies outside the surface domain")]
    OutsideDomain(f64, f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Pde(#[from] PdeError),
    #[error(transparent)]
    Wick(#[from] crate::wick::WickError),
}

/// Target quadric of a Gauss image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadric {
    /// `X^2 + Y^2 - Z^2 = -1` (maximal graphs; upper sheet).
    TwoSheeted,
    /// `-U^2 + V^2 + W^2 = 1` (timelike graphs).
    OneSheeted,
}

impl Quadric {
    /// Signed quadric form evaluated on a vector.
    pub fn form(self, v: [f64; 3]) -> f64 {
        match self {
            Quadric::TwoSheeted => v[0] * v[0] + v[1] * v[1] - v[2] * v[2],
            Quadric::OneSheeted => -v[0] * v[0] + v[1] * v[1] + v[2] * v[2],
        }
    }

    /// Value the form takes on the quadric.
    pub fn level(self) -> f64 {
        match self {
            Quadric::TwoSheeted => -1.0,
            Quadric::OneSheeted => 1.0,
        }
    }
}

/// Raw and normalized Gauss images at a point.
#[derive(Debug, Clone, Copy)]
pub struct GaussImage {
    pub raw: [f64; 3],
    pub normalized: [f64; 3],
    pub quadric: Quadric,
}

/// Gauss image of a graph at a regular point. Errors when the normalization
/// radicand is within [`RADICAND_TOL`] of zero or negative (singular or
/// degenerate points have no hyperboloid image).
pub fn gauss_map(s: &GraphSurface, p: (f64, f64)) -> Result<GaussImage, GaussError> {
    if !s.domain.contains(p) {
        return Err(GaussError::OutsideDomain(p.0, p.1));
    }
    let j = s.jet(p)?;
    gauss_image_from_gradient(s.kind, p, (j.dx, j.dy))
}

fn gauss_image_from_gradient(
    kind: SurfaceClass,
    p: (f64, f64),
    grad: (f64, f64),
) -> Result<GaussImage, GaussError> {
    let (gx, gy) = grad;
    match kind {
        SurfaceClass::Maximal | SurfaceClass::NonSolution => {
            let raw = [gx, gy, 1.0];
            let radicand = 1.0 - (gx * gx + gy * gy);
            if radicand <= RADICAND_TOL {
                return Err(GaussError::DegeneratePoint(p.0, p.1, radicand));
            }
            let inv = 1.0 / radicand.sqrt();
            Ok(GaussImage {
                raw,
                normalized: [raw[0] * inv, raw[1] * inv, raw[2] * inv],
                quadric: Quadric::TwoSheeted,
            })
        }
        SurfaceClass::TimelikeMinimal => {
            let raw = [gx, -gy, 1.0];
            let radicand = 1.0 + gy * gy - gx * gx;
            if radicand <= RADICAND_TOL {
                return Err(GaussError::DegeneratePoint(p.0, p.1, radicand));
            }
            let inv = 1.0 / radicand.sqrt();
            Ok(GaussImage {
                raw,
                normalized: [raw[0] * inv, raw[1] * inv, raw[2] * inv],
                quadric: Quadric::OneSheeted,
            })
        }
    }
}

/// A pair of distinct base points with (numerically) coincident images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionPair {
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub image_dist: f64,
    pub base_dist: f64,
}

/// Injectivity-scan outcome.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub collisions: Vec<CollisionPair>,
    pub n_sampled: usize,
    pub n_skipped: usize,
    /// Set when every sampled image sits within half the collision radius of
    /// the first; pair enumeration is skipped (every pair would collide).
    pub constant_gauss_map: bool,
}

/// Scan an `nx x ny` grid for Gauss-image collisions: pairs whose normalized
/// images differ by less than `image_eps` while the base points differ by
/// more than `base_delta`. Candidate pairs come from a spatial hash over
/// quantized images (cell edge = `image_eps`, 27-neighborhood probes), so
/// results match the all-pairs reference exactly.
pub fn injectivity_scan(
    s: &GraphSurface,
    nx: usize,
    ny: usize,
    image_eps: f64,
    base_delta: f64,
) -> Result<ScanReport, GaussError> {
    injectivity_scan_mode(s, nx, ny, image_eps, base_delta, Threading::Auto)
}

#[doc(hidden)]
pub fn injectivity_scan_mode(
    s: &GraphSurface,
    nx: usize,
    ny: usize,
    image_eps: f64,
    base_delta: f64,
    mode: Threading,
) -> Result<ScanReport, GaussError> {
    let samples = collect_images(s, nx, ny, mode)?;
    let n_sampled = samples.len();
    let n_skipped = nx * ny - n_sampled;

    if images_constant(&samples, image_eps) {
        return Ok(ScanReport {
            collisions: Vec::new(),
            n_sampled,
            n_skipped,
            constant_gauss_map: true,
        });
    }

    let mut cells: HashMap<(i64, i64, i64), Vec<u32>> = HashMap::new();
    let key_of = |img: [f64; 3]| {
        (
            (img[0] / image_eps).floor() as i64,
            (img[1] / image_eps).floor() as i64,
            (img[2] / image_eps).floor() as i64,
        )
    };
    let mut collisions = Vec::new();
    for (idx, (p, img)) in samples.iter().enumerate() {
        let key = key_of(*img);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let probe = (key.0 + dx, key.1 + dy, key.2 + dz);
                    if let Some(bucket) = cells.get(&probe) {
                        for &j in bucket {
                            let (q, qimg) = samples[j as usize];
                            let image_dist = dist3(*img, qimg);
                            let base_dist = dist2(*p, q);
                            if image_dist < image_eps && base_dist > base_delta {
                                collisions.push(CollisionPair {
                                    a: q,
                                    b: *p,
                                    image_dist,
                                    base_dist,
                                });
                            }
                        }
                    }
                }
            }
        }
        cells.entry(key).or_default().push(idx as u32);
    }
    sort_collisions(&mut collisions);
    Ok(ScanReport { collisions, n_sampled, n_skipped, constant_gauss_map: false })
}

/// All-pairs reference scanner; output must equal the spatial-hash scan
/// exactly (both share the image collection and the constant-map shortcut;
/// only the candidate-pair generation differs).
pub fn injectivity_scan_bruteforce(
    s: &GraphSurface,
    nx: usize,
    ny: usize,
    image_eps: f64,
    base_delta: f64,
) -> Result<ScanReport, GaussError> {
    let samples = collect_images(s, nx, ny, Threading::Sequential)?;
    let n_sampled = samples.len();
    let n_skipped = nx * ny - n_sampled;
    if images_constant(&samples, image_eps) {
        return Ok(ScanReport {
            collisions: Vec::new(),
            n_sampled,
            n_skipped,
            constant_gauss_map: true,
        });
    }
    let mut collisions = Vec::new();
    for i in 0..samples.len() {
        for j in 0..i {
            let (p, pimg) = samples[i];
            let (q, qimg) = samples[j];
            let image_dist = dist3(pimg, qimg);
            let base_dist = dist2(p, q);
            if image_dist < image_eps && base_dist > base_delta {
                collisions.push(CollisionPair { a: q, b: p, image_dist, base_dist });
            }
        }
    }
    sort_collisions(&mut collisions);
    Ok(ScanReport { collisions, n_sampled, n_skipped, constant_gauss_map: false })
}

fn collect_images(
    s: &GraphSurface,
    nx: usize,
    ny: usize,
    mode: Threading,
) -> Result<Vec<((f64, f64), [f64; 3])>, GaussError> {
    // Irregular points (evaluation failures, singular, degenerate radicand)
    // are skipped and counted by the caller.
    let eval = |idx: usize| {
        let i = idx % nx;
        let j = idx / nx;
        let p = (s.domain.node_x(i, nx), s.domain.node_y(j, ny));
        if !s.admits(p) {
            return None;
        }
        gauss_map(s, p).ok().map(|g| (p, g.normalized))
    };
    let raw = match mode {
        Threading::Auto => exec::map_indexed(nx * ny, eval),
        Threading::Sequential => exec::map_indexed_seq(nx * ny, eval),
        #[cfg(feature = "parallel")]
        Threading::Parallel => exec::map_indexed_par(nx * ny, eval),
    };
    Ok(raw.into_iter().flatten().collect())
}

fn images_constant(samples: &[((f64, f64), [f64; 3])], image_eps: f64) -> bool {
    match samples.first() {
        Some(first) => samples.iter().all(|(_, img)| dist3(*img, first.1) <= 0.5 * image_eps),
        None => false,
    }
}

fn sort_collisions(collisions: &mut [CollisionPair]) {
    collisions.sort_by(|l, r| {
        (l.a.0, l.a.1, l.b.0, l.b.1)
            .partial_cmp(&(r.a.0, r.a.1, r.b.0, r.b.1))
            .expect("finite coordinates")
    });
}

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d0 = a[0] - b[0];
    let d1 = a[1] - b[1];
    let d2 = a[2] - b[2];
    (d0 * d0 + d1 * d1 + d2 * d2).sqrt()
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    let d0 = a.0 - b.0;
    let d1 = a.1 - b.1;
    (d0 * d0 + d1 * d1).sqrt()
}

/// Result of the image-coincidence transport check.
#[derive(Debug, Clone)]
pub struct TransportReport {
    pub n_pairs: usize,
    /// Pairs whose timelike images coincide within `image_eps`.
    pub n_candidates: usize,
    /// Candidates whose pulled-back maximal images separate beyond the
    /// derived tolerance.
    pub n_violations: usize,
    pub max_pullback_dist: f64,
    /// Set when the timelike image is constant across the sample.
    pub degenerate: bool,
}

/// For random point pairs on the continued graph whose timelike Gauss images
/// coincide within `image_eps`, verify the maximal images at the identified
/// coordinates coincide within a derived tolerance. The derived constant
/// chains the operator norm of the (canonical) linear identification with
/// Lipschitz bounds of the two normalization maps, computed from the actual
/// radicands of each pair.
pub fn transport_check(
    max_s: &GraphSurface,
    tl: &ContinuedGraph,
    n_pairs: usize,
    image_eps: f64,
) -> Result<TransportReport, GaussError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x74726e73);
    let rect = tl.domain();
    let mut pairs: Vec<((f64, f64), (f64, f64))> = Vec::new();
    let mut attempts = 0usize;
    while pairs.len() < n_pairs && attempts < 10_000 * n_pairs.max(1) {
        attempts += 1;
        let p = (lerp(rect.x0, rect.x1, rng.gen::<f64>()), lerp(rect.y0, rect.y1, rng.gen::<f64>()));
        // Half the pairs are exact duplicates: the coincidence case the
        // transport argument is really about.
        let q = if pairs.len() % 2 == 0 {
            p
        } else {
            (lerp(rect.x0, rect.x1, rng.gen::<f64>()), lerp(rect.y0, rect.y1, rng.gen::<f64>()))
        };
        if !tl.admits(p) || !tl.admits(q) || !max_s.admits(p) || !max_s.admits(q) {
            continue;
        }
        if tl_image(tl, p).is_some()
            && tl_image(tl, q).is_some()
            && gauss_map(max_s, p).is_ok()
            && gauss_map(max_s, q).is_ok()
        {
            pairs.push((p, q));
        }
    }

    let mut images: Vec<[f64; 3]> = Vec::new();
    for (p, q) in &pairs {
        images.push(tl_image(tl, *p).expect("validated"));
        images.push(tl_image(tl, *q).expect("validated"));
    }
    let degenerate = !images.is_empty()
        && images.iter().all(|img| dist3(*img, images[0]) <= 0.5 * image_eps);

    let mut n_candidates = 0usize;
    let mut n_violations = 0usize;
    let mut max_pullback: f64 = 0.0;
    for (p, q) in &pairs {
        let ip = tl_image(tl, *p).expect("validated");
        let iq = tl_image(tl, *q).expect("validated");
        if dist3(ip, iq) >= image_eps {
            continue;
        }
        n_candidates += 1;
        let gp = gauss_map(max_s, *p).expect("validated");
        let gq = gauss_map(max_s, *q).expect("validated");
        let d = dist3(gp.normalized, gq.normalized);
        max_pullback = max_pullback.max(d);

        // Lipschitz chain: identification operator norm (1 for the canonical
        // continuation) times normalization stretch bounds 1/rad^(3/2) on
        // both sides.
        let jp = tl.jet(*p)?;
        let jq = tl.jet(*q)?;
        let rad_tl = (1.0 + jp.dy * jp.dy - jp.dx * jp.dx)
            .min(1.0 + jq.dy * jq.dy - jq.dx * jq.dx)
            .max(RADICAND_TOL);
        let mp = max_s.jet(*p)?;
        let mq = max_s.jet(*q)?;
        let rad_max = (1.0 - mp.dx * mp.dx - mp.dy * mp.dy)
            .min(1.0 - mq.dx * mq.dx - mq.dy * mq.dy)
            .max(RADICAND_TOL);
        let derived_tol = image_eps * (1.0 / rad_tl.powf(1.5)) * (1.0 / rad_max.powf(1.5));
        if d > derived_tol {
            n_violations += 1;
        }
    }

    Ok(TransportReport {
        n_pairs: pairs.len(),
        n_candidates,
        n_violations,
        max_pullback_dist: max_pullback,
        degenerate,
    })
}

fn tl_image(tl: &ContinuedGraph, p: (f64, f64)) -> Option<[f64; 3]> {
    let j = tl.jet(p).ok()?;
    gauss_image_from_gradient(SurfaceClass::TimelikeMinimal, p, (j.dx, j.dy))
        .ok()
        .map(|g| g.normalized)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::wick::{continue_graph, Direction, DEFAULT_IM_TOL};

    #[test]
    fn plane_image_is_vertical() {
        let s = catalog::graph("plane").unwrap();
        let g = gauss_map(&s, (0.4, -1.3)).unwrap();
        assert_eq!(g.raw, [0.0, 0.0, 1.0]);
        assert_eq!(g.normalized, [0.0, 0.0, 1.0]);
        assert_eq!(g.quadric, Quadric::TwoSheeted);
    }

    #[test]
    fn elliptic_catenoid_image_at_unit_x() {
        // z_x = 1/sqrt(2), z_y = 0; normalized (1, 0, sqrt(2)).
        let s = catalog::graph("elliptic-catenoid").unwrap();
        let g = gauss_map(&s, (1.0, 0.0)).unwrap();
        assert!((g.raw[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!(g.raw[1].abs() < 1e-14);
        assert!((g.normalized[0] - 1.0).abs() < 1e-13);
        assert!((g.normalized[2] - std::f64::consts::SQRT_2).abs() < 1e-13);
        let membership = g.quadric.form(g.normalized) - g.quadric.level();
        assert!(membership.abs() < 1e-13);
    }

    #[test]
    fn degenerate_point_is_rejected() {
        // Gradient (2, 0): one-sheeted radicand 1 + 0 - 4 < 0.
        let steep = crate::surface::GraphSurface::new(
            "steep",
            "2*u",
            &["u", "v"],
            crate::surface::Rect::square(2.0),
            SurfaceClass::TimelikeMinimal,
        )
        .unwrap();
        assert!(matches!(gauss_map(&steep, (0.1, 0.1)), Err(GaussError::DegeneratePoint(..))));

        // Lightlike gradient (1, 0): radicand exactly 0 on the maximal side.
        let tilted = crate::surface::GraphSurface::new(
            "tilted",
            "x",
            &["x", "y"],
            crate::surface::Rect::square(2.0),
            SurfaceClass::Maximal,
        )
        .unwrap();
        assert!(matches!(gauss_map(&tilted, (0.0, 0.0)), Err(GaussError::DegeneratePoint(..))));
    }

    #[test]
    fn quadric_membership_upper_sheet() {
        let s = catalog::graph("elliptic-catenoid").unwrap();
        let pts = s.sample_admissible(200, 99).unwrap();
        for p in pts {
            match gauss_map(&s, p) {
                Ok(g) => {
                    let m = g.quadric.form(g.normalized) - g.quadric.level();
                    assert!(m.abs() < 1e-10, "membership {m} at {p:?}");
                    assert!(g.normalized[2] >= 1.0, "upper sheet");
                }
                Err(GaussError::DegeneratePoint(..)) => {}
                Err(e) => panic!("unexpected {e}"),
            }
        }
    }

    #[test]
    fn elliptic_catenoid_scan_is_injective() {
        let s = catalog::graph("elliptic-catenoid").unwrap();
        let rep = injectivity_scan(&s, 101, 101, DEFAULT_IMAGE_EPS, DEFAULT_BASE_DELTA).unwrap();
        assert!(rep.collisions.is_empty());
        assert!(!rep.constant_gauss_map);
        assert!(rep.n_skipped >= 1, "the excluded cone point is skipped");
    }

    #[test]
    fn plane_scan_flags_constant_map() {
        let s = catalog::graph("plane").unwrap();
        let rep = injectivity_scan(&s, 21, 21, DEFAULT_IMAGE_EPS, DEFAULT_BASE_DELTA).unwrap();
        assert!(rep.constant_gauss_map);
        assert!(rep.collisions.is_empty());
    }

    #[test]
    fn periodic_helicoid_graph_has_collisions() {
        // Gradient repeats across a 2*pi shift in u; the scan spans one
        // full period so wrap pairs collide.
        let s = catalog::graph("helicoid-timelike-axis-graph").unwrap();
        let rep = injectivity_scan(&s, 101, 101, DEFAULT_IMAGE_EPS, DEFAULT_BASE_DELTA).unwrap();
        assert!(
            !rep.collisions.is_empty(),
            "expected period-wrap collisions, skipped={}",
            rep.n_skipped
        );
        for c in &rep.collisions {
            assert!((c.base_dist - 2.0 * std::f64::consts::PI).abs() < 1e-6);
        }
    }

    #[test]
    fn hash_scan_equals_bruteforce() {
        for id in ["elliptic-catenoid", "helicoid-timelike-axis-graph"] {
            let s = catalog::graph(id).unwrap();
            let a = injectivity_scan(&s, 21, 21, DEFAULT_IMAGE_EPS, DEFAULT_BASE_DELTA).unwrap();
            let b =
                injectivity_scan_bruteforce(&s, 21, 21, DEFAULT_IMAGE_EPS, DEFAULT_BASE_DELTA)
                    .unwrap();
            assert_eq!(a.n_sampled, b.n_sampled);
            assert_eq!(a.collisions.len(), b.collisions.len(), "{id}");
            for (x, y) in a.collisions.iter().zip(&b.collisions) {
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn transport_zero_violations_for_catenoid_pair() {
        let max_s = catalog::graph("elliptic-catenoid").unwrap();
        let tl = continue_graph(&max_s, Direction::ToTimelike, DEFAULT_IM_TOL);
        let rep = transport_check(&max_s, &tl, 60, DEFAULT_IMAGE_EPS).unwrap();
        assert_eq!(rep.n_violations, 0);
        assert!(rep.n_candidates >= rep.n_pairs / 2, "duplicate pairs are candidates");
        assert!(!rep.degenerate);
    }

    #[test]
    fn transport_flags_degenerate_plane() {
        let plane = catalog::graph("plane").unwrap();
        let tl = continue_graph(&plane, Direction::ToTimelike, DEFAULT_IM_TOL);
        let rep = transport_check(&plane, &tl, 20, DEFAULT_IMAGE_EPS).unwrap();
        assert!(rep.degenerate);
        assert_eq!(rep.n_violations, 0);
    }
}
