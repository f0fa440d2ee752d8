//! `lms`: run surface checks from the command line and emit canonical JSON
//! reports plus OBJ/CSV geometry.
//!
//! Exit codes: 0 all checks within tolerance; 1 checks ran and some failed
//! (the report is still written); 2 usage error; 3 runtime evaluation error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use lms_core::catalog::{self, SurfaceDef};
use lms_core::gauss;
use lms_core::identities::{self, IdentityId};
use lms_core::mesh;
use lms_core::pde;
use lms_core::report::{float, float_pair, float_triple, to_canonical_json, write_json};
use lms_core::surface::{GraphSurface, Rect, WeierstrassData};
use lms_core::weierstrass;
use lms_core::wick::{self, Direction};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "lms",
    version,
    about = "Checks for maximal and timelike minimal surface graphs",
    after_help = "Internal parallelism is capped by LMS_THREADS (0 = sequential; reports are byte-identical either way)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the governing-equation residual over a grid.
    Residual(ResidualArgs),
    /// Extract the singular locus (degeneracy zero set) as polylines.
    Locus(LocusArgs),
    /// Continue a graph across the Wick correspondence and optionally check it.
    Wick(WickArgs),
    /// Scan the Gauss map for collisions (injectivity check).
    Gauss(GaussArgs),
    /// Integrate Weierstrass-type data and certify against a reference.
    Weierstrass(WeierstrassArgs),
    /// Certify an infinite-product identity over a truncation ladder.
    Identity(IdentityArgs),
    /// Sample a surface into a triangle mesh and write an OBJ file.
    Mesh(MeshArgs),
    /// List registered catalog surfaces.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct SurfaceArg {
    /// Catalog id or path to a key=value definition file.
    #[arg(long)]
    surface: String,
    /// Override a surface parameter, e.g. --param a=2 (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Override the surface domain as x0:x1:y0:y1.
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
}

#[derive(Args)]
struct ResidualArgs {
    #[command(flatten)]
    surface: SurfaceArg,
    /// Grid as NXxNY.
    #[arg(long, default_value = "201x201")]
    grid: String,
    /// Pass threshold on max |residual|.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the JSON report here (also printed to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LocusArgs {
    #[command(flatten)]
    surface: SurfaceArg,
    #[arg(long, default_value = "201x201")]
    grid: String,
    /// Bisection refinement tolerance on |degeneracy|.
    #[arg(long = "refine-tol", default_value_t = 1e-10)]
    refine_tol: f64,
    /// Write polyline vertices here as CSV (header x,y).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the JSON report here (also printed to stdout).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct WickArgs {
    #[command(flatten)]
    surface: SurfaceArg,
    /// to-timelike or to-maximal.
    #[arg(long)]
    direction: String,
    /// Imaginary-part tolerance for the continued values and jets.
    #[arg(long = "im-tol", default_value_t = wick::DEFAULT_IM_TOL)]
    im_tol: f64,
    /// Run the solution-transport and round-trip checks.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GaussArgs {
    #[command(flatten)]
    surface: SurfaceArg,
    #[arg(long, default_value = "101x101")]
    grid: String,
    /// Image-coincidence radius.
    #[arg(long = "image-eps", default_value_t = gauss::DEFAULT_IMAGE_EPS)]
    image_eps: f64,
    /// Minimum base-point separation for a collision.
    #[arg(long = "base-delta", default_value_t = gauss::DEFAULT_BASE_DELTA)]
    base_delta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WeierstrassArgs {
    /// Catalog id with Weierstrass data, or a definition file with q,f,r,g.
    #[arg(long)]
    data: String,
    /// u-range as a:b.
    #[arg(long, allow_hyphen_values = true)]
    urange: String,
    /// v-range as a:b.
    #[arg(long, allow_hyphen_values = true)]
    vrange: String,
    #[arg(long = "quad-tol", default_value_t = weierstrass::DEFAULT_QUAD_TOL)]
    quad_tol: f64,
    /// Samples per curve.
    #[arg(long, default_value_t = weierstrass::DEFAULT_SAMPLES)]
    samples: usize,
    /// Certify against this catalog id's parametric form.
    #[arg(long)]
    certify: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IdentityArgs {
    /// spacelike or timelike.
    #[arg(long)]
    id: String,
    /// Complex argument as RE,IM (IM optional).
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    /// Truncation ladder, e.g. 100,1000,10000.
    #[arg(long, default_value = "100,1000,10000,100000")]
    ladder: String,
    /// Pass threshold on |lhs - sign*product| at the largest rung.
    #[arg(long, default_value_t = 5e-4)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MeshArgs {
    #[command(flatten)]
    surface: SurfaceArg,
    #[arg(long, default_value = "101x101")]
    grid: String,
    /// Output OBJ path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CatalogArgs {
    /// List registered surface ids (the default action).
    #[arg(long)]
    list: bool,
}

/// A check failure (exit 1) versus a runtime error (exit 3).
enum RunError {
    Runtime(String),
}

type RunResult = Result<bool, RunError>;

fn runtime<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Runtime(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Residual(a) => cmd_residual(a),
        Command::Locus(a) => cmd_locus(a),
        Command::Wick(a) => cmd_wick(a),
        Command::Gauss(a) => cmd_gauss(a),
        Command::Weierstrass(a) => cmd_weierstrass(a),
        Command::Identity(a) => cmd_identity(a),
        Command::Mesh(a) => cmd_mesh(a),
        Command::Catalog(a) => cmd_catalog(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(RunError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize), RunError> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| RunError::Runtime(format!("bad grid `{s}`, expected NXxNY")))?;
    let nx = a.parse().map_err(|_| RunError::Runtime(format!("bad grid `{s}`")))?;
    let ny = b.parse().map_err(|_| RunError::Runtime(format!("bad grid `{s}`")))?;
    Ok((nx, ny))
}

fn parse_range(s: &str) -> Result<(f64, f64), RunError> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| RunError::Runtime(format!("bad range `{s}`, expected a:b")))?;
    let lo: f64 = a.trim().parse().map_err(|_| RunError::Runtime(format!("bad range `{s}`")))?;
    let hi: f64 = b.trim().parse().map_err(|_| RunError::Runtime(format!("bad range `{s}`")))?;
    if lo >= hi {
        return Err(RunError::Runtime(format!("empty range `{s}`")));
    }
    Ok((lo, hi))
}

fn parse_complex(s: &str) -> Result<Complex64, RunError> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a, b),
        None => (s, "0"),
    };
    Ok(Complex64::new(
        re.trim().parse().map_err(|_| RunError::Runtime(format!("bad complex `{s}`")))?,
        im.trim().parse().map_err(|_| RunError::Runtime(format!("bad complex `{s}`")))?,
    ))
}

fn parse_param_overrides(items: &[String]) -> Result<Vec<(String, f64)>, RunError> {
    items
        .iter()
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| RunError::Runtime(format!("bad --param `{item}`")))?;
            let value: f64 =
                v.trim().parse().map_err(|_| RunError::Runtime(format!("bad --param `{item}`")))?;
            Ok((k.trim().to_string(), value))
        })
        .collect()
}

fn load_surface(arg: &SurfaceArg) -> Result<SurfaceDef, RunError> {
    let mut def = if Path::new(&arg.surface).is_file() {
        catalog::load_file(&arg.surface).map_err(runtime)?
    } else {
        catalog::get(&arg.surface).map_err(runtime)?
    };
    let overrides = parse_param_overrides(&arg.params)?;
    match &mut def {
        SurfaceDef::Graph(g) => {
            for (k, v) in &overrides {
                g.params.insert(k.clone(), *v);
            }
            if let Some(d) = &arg.domain {
                g.domain = Rect::parse(d)
                    .ok_or_else(|| RunError::Runtime(format!("bad --domain `{d}`")))?;
            }
        }
        SurfaceDef::Parametric(p) => {
            for (k, v) in &overrides {
                p.params.insert(k.clone(), *v);
            }
            if let Some(d) = &arg.domain {
                p.domain = Rect::parse(d)
                    .ok_or_else(|| RunError::Runtime(format!("bad --domain `{d}`")))?;
            }
        }
        SurfaceDef::Weierstrass(w) => {
            for (k, v) in &overrides {
                w.params.insert(k.clone(), *v);
            }
        }
    }
    Ok(def)
}

fn load_graph(arg: &SurfaceArg) -> Result<GraphSurface, RunError> {
    match load_surface(arg)? {
        SurfaceDef::Graph(g) => Ok(g),
        other => Err(RunError::Runtime(format!(
            "surface `{}` has no graph form (got a {} definition)",
            arg.surface,
            match other {
                SurfaceDef::Parametric(_) => "parametric",
                SurfaceDef::Weierstrass(_) => "Weierstrass-data",
                SurfaceDef::Graph(_) => unreachable!(),
            }
        ))),
    }
}

fn load_weierstrass(id_or_path: &str) -> Result<WeierstrassData, RunError> {
    if Path::new(id_or_path).is_file() {
        match catalog::load_file(id_or_path).map_err(runtime)? {
            SurfaceDef::Weierstrass(w) => Ok(w),
            _ => Err(RunError::Runtime(format!("`{id_or_path}` does not define q,f,r,g data"))),
        }
    } else {
        catalog::weierstrass(id_or_path).map_err(runtime)
    }
}

/// Assemble, print, and optionally persist a canonical report.
fn emit_report(
    subcommand: &str,
    config: Value,
    results: Value,
    pass: bool,
    out: Option<&Path>,
) -> Result<(), RunError> {
    let report = json!({
        "tool_version": TOOL_VERSION,
        "subcommand": subcommand,
        "config": config,
        "results": results,
        "pass": pass,
    });
    print!("{}", to_canonical_json(&report));
    if let Some(path) = out {
        write_json(&report, path).map_err(runtime)?;
    }
    Ok(())
}

fn surface_config(arg: &SurfaceArg, g: &GraphSurface) -> Value {
    json!({
        "surface": arg.surface,
        "kind": g.kind.as_str(),
        "domain": [float(g.domain.x0), float(g.domain.x1), float(g.domain.y0), float(g.domain.y1)],
        "params": g.params.iter().map(|(k, v)| (k.clone(), float(*v))).collect::<serde_json::Map<_, _>>(),
    })
}

fn cmd_residual(a: ResidualArgs) -> RunResult {
    let (nx, ny) = parse_grid(&a.grid)?;
    let g = load_graph(&a.surface)?;
    let rep = pde::residual_grid(&g, nx, ny).map_err(runtime)?;
    let pass = rep.max_abs <= a.tol;
    let mut config = surface_config(&a.surface, &g);
    config["grid"] = json!([nx, ny]);
    config["tol"] = float(a.tol);
    let results = json!({
        "n_samples": rep.n_samples,
        "max_abs": float(rep.max_abs),
        "mean_abs": float(rep.mean_abs),
        "l2": float(rep.l2),
        "worst_point": float_pair(rep.worst_point),
    });
    emit_report("residual", config, results, pass, a.out.as_deref())?;
    Ok(pass)
}

fn cmd_locus(a: LocusArgs) -> RunResult {
    let (nx, ny) = parse_grid(&a.grid)?;
    let g = load_graph(&a.surface)?;
    let rep = pde::singular_locus(&g, nx, ny, a.refine_tol).map_err(runtime)?;
    if let Some(csv) = &a.out {
        if !rep.degenerate_field && !rep.polylines.is_empty() {
            mesh::write_polylines_csv(&rep.polylines, csv).map_err(runtime)?;
        }
    }
    let mut config = surface_config(&a.surface, &g);
    config["grid"] = json!([nx, ny]);
    config["refine_tol"] = float(a.refine_tol);
    let results = json!({
        "degenerate_field": rep.degenerate_field,
        "degenerate_cell_fraction": float(rep.degenerate_cell_fraction),
        "n_polylines": rep.polylines.len(),
        "polylines": rep.polylines.iter().map(|p| json!({
            "n_points": p.points.len(),
            "closed": p.closed,
            "residual_bound": float(p.residual_bound),
        })).collect::<Vec<_>>(),
    });
    emit_report("locus", config, results, true, a.report.as_deref())?;
    Ok(true)
}

fn cmd_wick(a: WickArgs) -> RunResult {
    let direction = Direction::from_str(&a.direction)
        .ok_or_else(|| RunError::Runtime(format!("bad --direction `{}`", a.direction)))?;
    let g = load_graph(&a.surface)?;
    let cont = wick::continue_graph(&g, direction, a.im_tol);

    let sample = cont.sample_admissible(200, 0x77636b).map_err(runtime)?;
    let mut residual_max: f64 = 0.0;
    for p in &sample {
        residual_max = residual_max.max(cont.residual(*p).map_err(runtime)?.abs());
    }

    let mut results = json!({
        "direction": direction.as_str(),
        "target_kind": cont.kind().as_str(),
        "n_admissible_samples": sample.len(),
        "residual_max": float(residual_max),
    });
    let mut pass = true;
    if a.check {
        let back = cont.and_continue(match direction {
            Direction::ToTimelike => Direction::ToMaximal,
            Direction::ToMaximal => Direction::ToTimelike,
        });
        let mut roundtrip_max: f64 = 0.0;
        for p in &sample {
            let direct = g.height((p.0, -p.1)).map_err(runtime)?;
            let through = back.height(*p).map_err(runtime)?;
            roundtrip_max = roundtrip_max.max((direct - through).abs());
        }
        pass = residual_max < 1e-9 && roundtrip_max < 1e-12;
        results["roundtrip_max"] = float(roundtrip_max);
        results["residual_tol"] = float(1e-9);
        results["roundtrip_tol"] = float(1e-12);
    }

    let mut config = surface_config(&a.surface, &g);
    config["im_tol"] = float(a.im_tol);
    config["check"] = json!(a.check);
    emit_report("wick", config, results, pass, a.out.as_deref())?;
    Ok(pass)
}

fn cmd_gauss(a: GaussArgs) -> RunResult {
    let (nx, ny) = parse_grid(&a.grid)?;
    let g = load_graph(&a.surface)?;
    let rep = gauss::injectivity_scan(&g, nx, ny, a.image_eps, a.base_delta).map_err(runtime)?;
    let pass = rep.collisions.is_empty() && !rep.constant_gauss_map;
    let mut config = surface_config(&a.surface, &g);
    config["grid"] = json!([nx, ny]);
    config["image_eps"] = float(a.image_eps);
    config["base_delta"] = float(a.base_delta);
    let results = json!({
        "n_sampled": rep.n_sampled,
        "n_skipped": rep.n_skipped,
        "constant_gauss_map": rep.constant_gauss_map,
        "n_collisions": rep.collisions.len(),
        "collisions": rep.collisions.iter().take(10).map(|c| json!({
            "a": float_pair(c.a),
            "b": float_pair(c.b),
            "image_dist": float(c.image_dist),
            "base_dist": float(c.base_dist),
        })).collect::<Vec<_>>(),
    });
    emit_report("gauss", config, results, pass, a.out.as_deref())?;
    Ok(pass)
}

fn cmd_weierstrass(a: WeierstrassArgs) -> RunResult {
    let data = load_weierstrass(&a.data)?;
    let u_range = parse_range(&a.urange)?;
    let v_range = parse_range(&a.vrange)?;
    let surf = weierstrass::integrate(&data, u_range, v_range, a.samples, a.quad_tol)
        .map_err(runtime)?;

    let null_defect = surf.null_defect_max(100).map_err(runtime)?;
    let fd_mixed = surf.fd_mixed_max();
    let (curv_max, curv_mean) = surf.curvature_stats(41).map_err(runtime)?;

    let mut pass = null_defect < 1e-9 && fd_mixed < 1e-8 && curv_max < 1e-6;
    let mut results = json!({
        "data": data.name,
        "null_defect_max": float(null_defect),
        "fd_mixed_max": float(fd_mixed),
        "curvature_max": float(curv_max),
        "curvature_mean_abs": float(curv_mean),
        "base": float_pair(surf.base),
    });

    if let Some(ref_id) = &a.certify {
        let reference = catalog::entry(ref_id)
            .map_err(runtime)?
            .parametric
            .ok_or_else(|| RunError::Runtime(format!("`{ref_id}` has no parametric form")))?;
        let cert = weierstrass::certify_integrated(&surf, &reference).map_err(runtime)?;
        pass = pass && cert.residual < 1e-8;
        results["certify"] = json!({
            "reference": ref_id,
            "sigma": cert.sigma.to_vec(),
            "translation": float_triple(cert.translation),
            "residual": float(cert.residual),
        });
    }

    let config = json!({
        "data": a.data,
        "urange": [float(u_range.0), float(u_range.1)],
        "vrange": [float(v_range.0), float(v_range.1)],
        "samples": a.samples,
        "quad_tol": float(a.quad_tol),
        "certify": a.certify,
    });
    emit_report("weierstrass", config, results, pass, a.out.as_deref())?;
    Ok(pass)
}

fn cmd_identity(a: IdentityArgs) -> RunResult {
    let id = IdentityId::from_str(&a.id)
        .ok_or_else(|| RunError::Runtime(format!("bad --id `{}`", a.id)))?;
    let z = parse_complex(&a.z)?;
    let ladder: Vec<usize> = a
        .ladder
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| RunError::Runtime(format!("bad --ladder `{}`", a.ladder)))?;
    let rep = identities::certify(id, z, &ladder).map_err(runtime)?;
    let pass = rep.abs_error_at_n < a.tol;
    let config = json!({
        "id": id.as_str(),
        "z": [float(z.re), float(z.im)],
        "ladder": ladder,
        "tol": float(a.tol),
    });
    let results = json!({
        "lhs": [float(rep.lhs.re), float(rep.lhs.im)],
        "sign_constant": rep.sign_constant as i64,
        "printed_sign_discrepancy": rep.sign_constant == -1,
        "abs_error_at_n": float(rep.abs_error_at_n),
        "estimated_order": float(rep.estimated_order),
        "monotone_tail": rep.monotone_tail,
        "partial_products": rep.partial_products.iter().map(|(n, p)| json!({
            "n": n,
            "value": [float(p.re), float(p.im)],
        })).collect::<Vec<_>>(),
        "errors": rep.errors.iter().map(|(n, e)| json!({
            "n": n,
            "abs_error": float(*e),
        })).collect::<Vec<_>>(),
    });
    emit_report("identity", config, results, pass, a.out.as_deref())?;
    Ok(pass)
}

fn cmd_mesh(a: MeshArgs) -> RunResult {
    let (nx, ny) = parse_grid(&a.grid)?;
    let def = load_surface(&a.surface)?;
    let m = match &def {
        SurfaceDef::Graph(g) => mesh::sample_graph(g, nx, ny).map_err(runtime)?,
        SurfaceDef::Parametric(p) => mesh::sample_parametric(p, nx, ny).map_err(runtime)?,
        SurfaceDef::Weierstrass(_) => {
            return Err(RunError::Runtime(
                "mesh needs a graph or parametric surface; integrate Weierstrass data first".into(),
            ))
        }
    };
    mesh::write_obj(&m, &a.out).map_err(runtime)?;
    let config = json!({
        "surface": a.surface.surface,
        "grid": [nx, ny],
        "out": a.out.display().to_string(),
    });
    let results = json!({
        "n_vertices": m.vertices.len(),
        "n_triangles": m.triangles.len(),
    });
    emit_report("mesh", config, results, true, None)?;
    Ok(true)
}

fn cmd_catalog(_a: CatalogArgs) -> RunResult {
    for id in catalog::ids() {
        println!("{id}");
    }
    Ok(true)
}
