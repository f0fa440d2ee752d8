//! Jet derivatives against a central finite-difference oracle.
//!
//! The oracle differentiates the plain real evaluation path, so it is
//! independent of the jet algebra it checks. First partials use the stated
//! steps 1e-4 and 1e-5; second partials use the wider step only.

use std::collections::BTreeMap;

use lms_core::catalog;
use lms_core::expr::CompiledExpr;
use lms_core::jet::Jet2;
use lms_core::surface::GraphSurface;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct FdOracle<'a> {
    expr: &'a CompiledExpr,
    params: &'a BTreeMap<String, f64>,
}

impl<'a> FdOracle<'a> {
    fn value(&self, p: (f64, f64)) -> f64 {
        self.expr.eval(&[p.0, p.1], self.params).expect("oracle point evaluable")
    }

    fn grad(&self, p: (f64, f64), h: f64) -> (f64, f64) {
        let fx = (self.value((p.0 + h, p.1)) - self.value((p.0 - h, p.1))) / (2.0 * h);
        let fy = (self.value((p.0, p.1 + h)) - self.value((p.0, p.1 - h))) / (2.0 * h);
        (fx, fy)
    }

    fn hessian(&self, p: (f64, f64), h: f64) -> (f64, f64, f64) {
        let f0 = self.value(p);
        let fxx =
            (self.value((p.0 + h, p.1)) - 2.0 * f0 + self.value((p.0 - h, p.1))) / (h * h);
        let fyy =
            (self.value((p.0, p.1 + h)) - 2.0 * f0 + self.value((p.0, p.1 - h))) / (h * h);
        let fxy = (self.value((p.0 + h, p.1 + h)) - self.value((p.0 + h, p.1 - h))
            - self.value((p.0 - h, p.1 + h))
            + self.value((p.0 - h, p.1 - h)))
            / (4.0 * h * h);
        (fxx, fxy, fyy)
    }
}

fn rel_close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * (scale + a.abs().max(b.abs()))
}

/// Sample admissible points with margin from the exclusion sets. The margin
/// is far wider than the stencil: near the excluded degeneracies the third
/// derivatives blow up and central differences would not themselves be
/// accurate to the comparison threshold.
fn stencil_safe_points(s: &GraphSurface, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let margin = 0.05;
    while out.len() < n {
        let x = s.domain.x0 + (s.domain.x1 - s.domain.x0) * rng.gen::<f64>();
        let y = s.domain.y0 + (s.domain.y1 - s.domain.y0) * rng.gen::<f64>();
        let stencil_ok = [-margin, 0.0, margin].iter().all(|&dx| {
            [-margin, 0.0, margin]
                .iter()
                .all(|&dy| s.admits((x + dx, y + dy)) && s.jet((x + dx, y + dy)).is_ok())
        });
        if stencil_ok {
            out.push((x, y));
        }
    }
    out
}

#[test]
fn catalog_expressions_match_finite_differences() {
    for id in [
        "elliptic-catenoid",
        "catenoid-2nd-kind",
        "plane",
        "paraboloid",
        "helicoid-timelike-axis-graph",
    ] {
        let s = catalog::graph(id).unwrap();
        let oracle = FdOracle { expr: &s.z, params: &s.params };
        for p in stencil_safe_points(&s, 100, 0xfd0 ^ id.len() as u64) {
            let jet = s.jet(p).unwrap();
            for &h in &[1e-4, 1e-5] {
                let (gx, gy) = oracle.grad(p, h);
                assert!(rel_close(jet.dx, gx, 1e-5, 1.0), "{id} dx at {p:?} (h={h})");
                assert!(rel_close(jet.dy, gy, 1e-5, 1.0), "{id} dy at {p:?} (h={h})");
            }
            let (hxx, hxy, hyy) = oracle.hessian(p, 1e-4);
            assert!(rel_close(jet.dxx, hxx, 1e-5, 1.0), "{id} dxx at {p:?}");
            assert!(rel_close(jet.dxy, hxy, 1e-5, 1.0), "{id} dxy at {p:?}");
            assert!(rel_close(jet.dyy, hyy, 1e-5, 1.0), "{id} dyy at {p:?}");
        }
    }
}

#[test]
fn asinh_jet_matches_finite_differences_tightly() {
    // asinh(sqrt(x^2+y^2)/a) seeded at (1, 1): first partials to 1e-7.
    let s = catalog::graph("elliptic-catenoid").unwrap();
    let oracle = FdOracle { expr: &s.z, params: &s.params };
    let p = (1.0, 1.0);
    let jet = s.jet(p).unwrap();
    let (gx, gy) = oracle.grad(p, 1e-5);
    assert!((jet.dx - gx).abs() < 1e-7);
    assert!((jet.dy - gy).abs() < 1e-7);
}

#[test]
fn exp_lift_matches_finite_differences() {
    let e = CompiledExpr::parse("exp(x)", &["x", "y"]).unwrap();
    let no_params = BTreeMap::new();
    let oracle = FdOracle { expr: &e, params: &no_params };
    let p = (1.0, 0.0);
    let (jx, jy) = Jet2::seed_pair(p);
    let jet: Jet2<f64> = e.eval(&[jx, jy], &no_params).unwrap();
    let (gx, _) = oracle.grad(p, 1e-5);
    assert!((jet.dx - gx).abs() < 1e-7, "exp'(1): jet {} vs fd {gx}", jet.dx);
}

#[test]
fn complex_eval_at_real_points_is_exactly_real() {
    // Real-analytic path: every catalog expression at admissible real
    // points has imaginary part exactly 0 when evaluated over complexes.
    for id in ["elliptic-catenoid", "catenoid-2nd-kind", "plane", "paraboloid"] {
        let s = catalog::graph(id).unwrap();
        for p in stencil_safe_points(&s, 25, 0xc0) {
            let v: Complex64 = s
                .z
                .eval(&[Complex64::new(p.0, 0.0), Complex64::new(p.1, 0.0)], &s.params)
                .unwrap();
            assert_eq!(v.im, 0.0, "{id} at {p:?}");
            // The two routes use different elementary-function kernels, so
            // agreement is to ulps, not bitwise.
            let r: f64 = s.z.eval(&[p.0, p.1], &s.params).unwrap();
            assert!(
                (v.re - r).abs() <= 1e-14 * (1.0 + r.abs()),
                "{id}: complex route {} vs real route {r}",
                v.re
            );
        }
    }
}

#[test]
fn jet_algebra_laws_on_random_jets() {
    use lms_core::field::Scalar;
    let mut rng = ChaCha8Rng::seed_from_u64(0xa1);
    let rand_jet = |rng: &mut ChaCha8Rng| Jet2::<f64> {
        val: rng.gen_range(-2.0..2.0),
        dx: rng.gen_range(-1.0..1.0),
        dy: rng.gen_range(-1.0..1.0),
        dxx: rng.gen_range(-1.0..1.0),
        dxy: rng.gen_range(-1.0..1.0),
        dyy: rng.gen_range(-1.0..1.0),
    };
    let close = |a: &Jet2<f64>, b: &Jet2<f64>| {
        let pairs = [
            (a.val, b.val),
            (a.dx, b.dx),
            (a.dy, b.dy),
            (a.dxx, b.dxx),
            (a.dxy, b.dxy),
            (a.dyy, b.dyy),
        ];
        pairs.iter().all(|(x, y)| (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs())))
    };
    for _ in 0..200 {
        let a = rand_jet(&mut rng);
        let b = rand_jet(&mut rng);
        let c = rand_jet(&mut rng);
        assert!(close(&a.add(&b), &b.add(&a)));
        assert!(close(&a.mul(&b), &b.mul(&a)));
        assert!(close(&a.add(&b).add(&c), &a.add(&b.add(&c))));
        assert!(close(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
        // Product rule holds exactly in the jet algebra.
        let prod = a.mul(&b);
        assert_eq!(prod.dx.to_bits(), (a.dx * b.val + a.val * b.dx).to_bits());
        assert_eq!(prod.dy.to_bits(), (a.dy * b.val + a.val * b.dy).to_bits());
    }
}

#[test]
fn sin_exp_composition_matches_analytic() {
    let e = CompiledExpr::parse("sin(exp(x))", &["x", "y"]).unwrap();
    let no_params = BTreeMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    for _ in 0..50 {
        let x: f64 = rng.gen_range(-1.5..1.5);
        let (jx, jy) = Jet2::seed_pair((x, 0.0));
        let jet: Jet2<f64> = e.eval(&[jx, jy], &no_params).unwrap();
        let ex = x.exp();
        let d1 = ex.cos() * ex;
        let d2 = -ex.sin() * ex * ex + ex.cos() * ex;
        assert!(rel_close(jet.val, ex.sin(), 1e-10, 1.0));
        assert!(rel_close(jet.dx, d1, 1e-10, 1.0), "x={x}");
        assert!(rel_close(jet.dxx, d2, 1e-10, 1.0), "x={x}");
    }
}
