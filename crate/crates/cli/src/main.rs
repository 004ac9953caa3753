//! Single-binary front end: runs the library pipelines and emits JSON
//! certificates (schema `spiralbend/1`) and optional SVG figures.
//!
//! Exit codes: 0 pass, 1 certified-fail, 2 usage/input error, 3 internal
//! consistency failure.

mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use spiralbend::annulus::{self, build_schedule_with_constant, choose_parameters, PointCloud};
use spiralbend::bending::{BendingMap, BendingParams, RadialLaw};
use spiralbend::capspace::{self, CapSpaceConfig, FlatnessOutcome};
use spiralbend::invariance::{self, ExtractCfg, PairedSpace};
use spiralbend::model_space::Subspace;
use spiralbend::norms2d::UncondNorm2;
use spiralbend::polygon;
use spiralbend::Error;

const SCHEMA: &str = "spiralbend/1";

#[derive(Parser)]
#[command(name = "spiralbend", version, about = "numerical certifier for bending maps, annulus embeddings, covering polygons, and the cap-cut norm")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Derived constants and invariant validation of a combiner norm
    Norms(NormsArgs),
    /// Build a bending map and certify its distortion by seeded sampling
    Bend(BendArgs),
    /// Embed a point cloud through the annulus charts and measure distortion
    Embed(EmbedArgs),
    /// Build the covering polygon of a planar body and certify containment
    Polygon(PolygonArgs),
    /// Build the cap-cut norm on R4 and certify its properties
    Capspace(CapArgs),
    /// Invariance defect, combiner extraction, and the transfer calculators
    Invariance(InvArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG output path, where the command supports a figure
    #[arg(long)]
    svg: Option<PathBuf>,
    /// suppress SVG emission even when --svg is given
    #[arg(long)]
    json_only: bool,
    /// thread cap (default: SPIRALBEND_THREADS or all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// optional JSON config file; flags override its keys
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct NormsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// norm family: l1 | l2 | linf | l<p> | wlp:p,w1,w2 | max:a,b;... | tab:path
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    grid: Option<usize>,
    /// validation sample count
    #[arg(long)]
    samples: Option<usize>,
    /// seed for validation sampling (defaults to 0; the constants are
    /// deterministic grids)
    #[arg(long)]
    seed: Option<u64>,
    /// pass/fail tolerance on the worst validation violation
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct BendArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    eps: Option<f64>,
    /// combiner family
    #[arg(long = "Z", alias = "z")]
    z: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// inner radius
    #[arg(long)]
    r: Option<f64>,
    /// curve constant: a number in [2/pi, 4], or "exact" for the measured c_Z
    #[arg(long)]
    curve: Option<String>,
}

#[derive(Args)]
struct EmbedArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// point cloud JSON: { "dim": n, "points": [[..], ..] }
    #[arg(long)]
    cloud: Option<PathBuf>,
    /// target distortion excess; parameters solved automatically
    #[arg(long)]
    eps: Option<f64>,
    /// manual chart budget (overrides the solver together with --d)
    #[arg(long)]
    psi: Option<f64>,
    /// manual gap ratio numerator
    #[arg(long)]
    d: Option<u32>,
    /// comma-separated combiner families cycled over the chart pairs
    #[arg(long = "Z", alias = "z")]
    z: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// schedule curve constant: a number in [2/pi, 4] (default 4, safe for
    /// every combiner), or "exact" to measure the combiners and tighten
    /// the ladder
    #[arg(long)]
    curve: Option<String>,
}

#[derive(Args)]
struct PolygonArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// body: disk | l1 | square | superellipse:<p> | any norm family
    #[arg(long)]
    body: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    /// boundary sample budget for the containment oracle
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct CapArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// net plane budget beyond the two coordinate planes
    #[arg(long)]
    net_budget: Option<usize>,
    /// candidate pool size for the greedy net
    #[arg(long)]
    net_pool: Option<usize>,
    /// sample count for the property certificates
    #[arg(long)]
    samples: Option<usize>,
    /// number of random planes probed for flatness witnesses (0 disables)
    #[arg(long)]
    flatness_planes: Option<usize>,
    /// opening threshold for probed planes (default 2*delta)
    #[arg(long)]
    gamma: Option<f64>,
    /// evaluate the non-bendability parameter chain at this "gamma,eps"
    #[arg(long)]
    precondition: Option<String>,
    /// serialize the built space for bit-reproducible reload
    #[arg(long)]
    save_space: Option<PathBuf>,
    /// reload a serialized space instead of building
    #[arg(long)]
    load_space: Option<PathBuf>,
}

#[derive(Args)]
struct InvArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// paired space: sum:<family> | euclidean | crossterm
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// 0-invariance tolerance for pass/fail and extraction
    #[arg(long)]
    tol: Option<f64>,
    /// net-transfer bracket inputs "alpha,A"
    #[arg(long)]
    net_bounds: Option<String>,
    /// dimension-iteration inputs "ln_n,delta,sigma,beta,iters"
    #[arg(long)]
    gordon: Option<String>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InternalConsistency(_) => 3,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Norms(a) => cmd_norms(a),
        Cmd::Bend(a) => cmd_bend(a),
        Cmd::Embed(a) => cmd_embed(a),
        Cmd::Polygon(a) => cmd_polygon(a),
        Cmd::Capspace(a) => cmd_capspace(a),
        Cmd::Invariance(a) => cmd_invariance(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

// ---------------------------------------------------------------------------
// config / common plumbing
// ---------------------------------------------------------------------------

fn load_config(common: &CommonArgs) -> Result<Value, Failure> {
    let Some(path) = &common.config else {
        return Ok(Value::Null);
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("config: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("config: {e}")))
}

fn cfg_f64(cfg: &Value, key: &str) -> Option<f64> {
    cfg.get(key).and_then(Value::as_f64)
}

fn cfg_u64(cfg: &Value, key: &str) -> Option<u64> {
    cfg.get(key).and_then(Value::as_u64)
}

fn cfg_usize(cfg: &Value, key: &str) -> Option<usize> {
    cfg_u64(cfg, key).map(|v| v as usize)
}

fn cfg_str(cfg: &Value, key: &str) -> Option<String> {
    cfg.get(key).and_then(Value::as_str).map(str::to_owned)
}

fn init_threads(common: &CommonArgs, cfg: &Value) -> Result<(), Failure> {
    let env_threads = std::env::var("SPIRALBEND_THREADS").ok().and_then(|v| v.parse().ok());
    let threads = common.threads.or(cfg_usize(cfg, "threads")).or(env_threads);
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn require_seed(flag: Option<u64>, cfg: &Value) -> Result<u64, Failure> {
    flag.or(cfg_u64(cfg, "seed"))
        .ok_or_else(|| Failure::usage("--seed is mandatory for stochastic commands"))
}

fn emit_json<T: Serialize>(common: &CommonArgs, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 3, msg: e.to_string() })?;
    text.push('\n');
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::usage(format!("write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_svg(common: &CommonArgs, content: &str) -> Result<(), Failure> {
    if common.json_only {
        return Ok(());
    }
    if let Some(path) = &common.svg {
        std::fs::write(path, content).map_err(|e| Failure::usage(format!("write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn parse_norm(spec: &str) -> Result<UncondNorm2, Failure> {
    match spec {
        "disk" => Ok(UncondNorm2::l2()),
        "square" => Ok(UncondNorm2::linf()),
        other => {
            if let Some(p) = other.strip_prefix("superellipse:") {
                let p: f64 = p.parse().map_err(|_| Failure::usage("bad superellipse exponent"))?;
                return UncondNorm2::lp(p).map_err(Failure::from);
            }
            other.parse::<UncondNorm2>().map_err(Failure::from)
        }
    }
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

fn cmd_norms(a: NormsArgs) -> Result<bool, Failure> {
    let cfg = load_config(&a.common)?;
    init_threads(&a.common, &cfg)?;
    let family = a
        .family
        .or(cfg_str(&cfg, "family"))
        .ok_or_else(|| Failure::usage("--family is required"))?;
    let grid = a.grid.or(cfg_usize(&cfg, "grid")).unwrap_or(4096);
    let samples = a.samples.or(cfg_usize(&cfg, "samples")).unwrap_or(10_000);
    let seed = a.seed.or(cfg_u64(&cfg, "seed")).unwrap_or(0);
    let tol = a.tol.or(cfg_f64(&cfg, "tol")).unwrap_or(1e-9);

    let z = parse_norm(&family)?;
    let constants = z.constants(grid)?;
    let validation = z.validate(samples, seed)?;
    let passed = validation.passed(tol);

    emit_json(
        &a.common,
        &json!({
            "schema": SCHEMA,
            "command": "norms",
            "family": family,
            "constants": constants,
            "validation": validation,
            "tolerance": tol,
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn cmd_bend(a: BendArgs) -> Result<bool, Failure> {
    let cfg = load_config(&a.common)?;
    init_threads(&a.common, &cfg)?;
    let eps = a.eps.or(cfg_f64(&cfg, "eps")).ok_or_else(|| Failure::usage("--eps is required"))?;
    let family = a.z.or(cfg_str(&cfg, "Z")).unwrap_or_else(|| "l2".into());
    let dim = a.dim.or(cfg_usize(&cfg, "dim")).unwrap_or(2);
    let pairs = a.pairs.or(cfg_usize(&cfg, "pairs")).unwrap_or(100_000);
    let seed = require_seed(a.seed, &cfg)?;
    let r = a.r.or(cfg_f64(&cfg, "r")).unwrap_or(1.0);
    let curve_spec = a.curve.or(cfg_str(&cfg, "curve")).unwrap_or_else(|| "4".into());

    let z = parse_norm(&family)?;
    let curve = if curve_spec == "exact" {
        z.curve_lipschitz(1024)?
    } else {
        curve_spec.parse::<f64>().map_err(|_| Failure::usage("--curve must be a number or \"exact\""))?
    };
    let params = BendingParams::new(eps, r, curve, z, dim)?;
    let map = BendingMap::new(params);
    let report = map.verify_distortion(pairs, seed, &RadialLaw::default())?;
    let passed = report.passed();

    emit_svg(&a.common, &svg::spiral_figure(&map.params))?;
    emit_json(
        &a.common,
        &json!({
            "schema": SCHEMA,
            "command": "bend",
            "family": family,
            "eps": eps,
            "dim": dim,
            "inner_radius": r,
            "outer_radius": map.params.big_r,
            "ln_outer_radius": map.params.ln_big_r,
            "curve_constant": curve,
            "report": report,
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn cmd_embed(a: EmbedArgs) -> Result<bool, Failure> {
    let cfg = load_config(&a.common)?;
    init_threads(&a.common, &cfg)?;
    let cloud_path = a
        .cloud
        .or(cfg_str(&cfg, "cloud").map(PathBuf::from))
        .ok_or_else(|| Failure::usage("--cloud is required"))?;
    let eps = a.eps.or(cfg_f64(&cfg, "eps")).unwrap_or(0.5);
    let seed = require_seed(a.seed, &cfg)?;
    let zs_spec = a.z.or(cfg_str(&cfg, "Z")).unwrap_or_else(|| "l2".into());
    let zs: Vec<UncondNorm2> = zs_spec.split(',').map(parse_norm).collect::<Result<_, _>>()?;

    let text = std::fs::read_to_string(&cloud_path)
        .map_err(|e| Failure::usage(format!("cloud {}: {e}", cloud_path.display())))?;
    let cloud = PointCloud::from_json(&text)?;

    let manual_psi = a.psi.or(cfg_f64(&cfg, "psi"));
    let manual_d = a.d.or(cfg_u64(&cfg, "d").map(|v| v as u32));
    let (psi, d, params_source) = match (manual_psi, manual_d) {
        (Some(p), Some(dd)) => (p, dd, "manual"),
        (None, None) => {
            let p = choose_parameters(eps)?;
            (p.psi, p.d, "solved")
        }
        _ => return Err(Failure::usage("--psi and --d must be given together")),
    };

    let curve_spec = a.curve.or(cfg_str(&cfg, "curve")).unwrap_or_else(|| "4".into());
    let curve = if curve_spec == "exact" {
        // the ladder constant must dominate every chart combiner, with the
        // even charts pairing by the Euclidean norm
        let mut c = 1.0f64;
        for z in &zs {
            c = c.max(z.curve_lipschitz(1024)?);
        }
        c
    } else {
        curve_spec.parse::<f64>().map_err(|_| Failure::usage("--curve must be a number or \"exact\""))?
    };
    let mut schedule = build_schedule_with_constant(psi, eps, d, 4, curve)?;
    let outcome = annulus::embed_cloud(&cloud, &mut schedule, &zs, seed)?;
    let passed = outcome.report.measured.distortion <= outcome.report.theoretical_bound;

    emit_svg(&a.common, &svg::schedule_figure(&schedule))?;
    emit_json(
        &a.common,
        &json!({
            "schema": SCHEMA,
            "command": "embed",
            "cloud": cloud_path.display().to_string(),
            "eps_target": eps,
            "params_source": params_source,
            "psi": psi,
            "d": d,
            "curve_constant": curve,
            "combiners": zs_spec,
            "schedule_ln_radii": schedule.ln_radii,
            "schedule_radii": schedule.linear_radii(),
            "report": outcome.report,
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn cmd_polygon(a: PolygonArgs) -> Result<bool, Failure> {
    let cfg = load_config(&a.common)?;
    init_threads(&a.common, &cfg)?;
    let body_spec = a.body.or(cfg_str(&cfg, "body")).ok_or_else(|| Failure::usage("--body is required"))?;
    let k = a.k.or(cfg_usize(&cfg, "k")).unwrap_or(16);
    let samples = a.samples.or(cfg_usize(&cfg, "samples")).unwrap_or(10_000);

    let body = parse_norm(&body_spec)?;
    let profile = polygon::sample_profile(&body, k)?;
    let cover = polygon::build_polygon(&profile)?;
    let certificate = polygon::verify_containment(&cover, &profile, samples)?;
    let passed = certificate.passed;

    emit_svg(&a.common, &svg::polygon_figure(&cover, &body))?;
    emit_json(
        &a.common,
        &json!({
            "schema": SCHEMA,
            "command": "polygon",
            "body": body_spec,
            "k": k,
            "flat_top": profile.flat_top,
            "radii": profile.radii,
            "polygon": cover,
            "certificate": certificate,
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn cmd_capspace(a: CapArgs) -> Result<bool, Failure> {
    let cfg = load_config(&a.common)?;
    init_threads(&a.common, &cfg)?;
    let delta = a.delta.or(cfg_f64(&cfg, "delta")).ok_or_else(|| Failure::usage("--delta is required"))?;
    let seed = require_seed(a.seed, &cfg)?;
    let net_budget = a.net_budget.or(cfg_usize(&cfg, "net_budget")).unwrap_or(3000);
    let net_pool = a.net_pool.or(cfg_usize(&cfg, "net_pool")).unwrap_or(100_000);
    let samples = a.samples.or(cfg_usize(&cfg, "samples")).unwrap_or(100_000);
    let flatness_planes = a.flatness_planes.or(cfg_usize(&cfg, "flatness_planes")).unwrap_or(1000);

    let space = match &a.load_space {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("load {}: {e}", path.display())))?;
            capspace::CapSpace4::from_json(&text)?
        }
        None => capspace::build_capspace(delta, &CapSpaceConfig { net_budget, pool: net_pool, seed })?,
    };
    let gamma = a.gamma.or(cfg_f64(&cfg, "gamma")).unwrap_or(2.0 * space.delta);
    if let Some(path) = &a.save_space {
        std::fs::write(path, space.to_json())
            .map_err(|e| Failure::usage(format!("save {}: {e}", path.display())))?;
    }

    let certificate = capspace::certify_properties(&space, samples, seed)?;

    // flatness probe over seeded planes with openings at least gamma
    let mut found = 0usize;
    let mut misses: Vec<f64> = Vec::new();
    if flatness_planes > 0 {
        use rand::SeedableRng;
        use rayon::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let mut planes = Vec::with_capacity(flatness_planes);
        while planes.len() < flatness_planes {
            let p = Subspace::random(&mut rng, 4, 2);
            let o1 = spiralbend::model_space::spherical_opening(&p, &capspace::y1())?;
            let o2 = spiralbend::model_space::spherical_opening(&p, &capspace::y2())?;
            if o1 >= gamma && o2 >= gamma {
                planes.push(p);
            }
        }
        let outcomes: Vec<FlatnessOutcome> = planes
            .par_iter()
            .map(|p| capspace::flatness_witness(&space, p, gamma).expect("preconditions checked"))
            .collect();
        for o in outcomes {
            match o {
                FlatnessOutcome::Witness(_) => found += 1,
                FlatnessOutcome::None { nearest_miss } => misses.push(nearest_miss),
            }
        }
    }
    let flatness_rate = if flatness_planes > 0 { found as f64 / flatness_planes as f64 } else { 1.0 };

    let preconditions = match a.precondition.or(cfg_str(&cfg, "precondition")) {
        Some(spec) => {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 2 {
                return Err(Failure::usage("--precondition expects \"gamma,eps\""));
            }
            let g: f64 = parts[0].parse().map_err(|_| Failure::usage("bad gamma"))?;
            let e: f64 = parts[1].parse().map_err(|_| Failure::usage("bad eps"))?;
            Some(capspace::precondition_chain(g, e, delta))
        }
        None => None,
    };

    let passed = certificate.passed && flatness_rate >= 0.99;
    emit_json(
        &a.common,
        &json!({
            "schema": SCHEMA,
            "command": "capspace",
            "delta": delta,
            "seed": seed,
            "cap_count": space.caps.len(),
            "structured_count": space.structured_count,
            "net_planes": space.net_planes,
            "covering_radius_achieved": space.covering_radius_achieved,
            "covering_achieved": space.covering_achieved,
            "net_min_separation": space.net_min_separation,
            "certificate": certificate,
            "flatness": {
                "planes": flatness_planes,
                "gamma": gamma,
                "found": found,
                "rate": flatness_rate,
                "miss_margins": misses,
            },
            "preconditions": preconditions,
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn cmd_invariance(a: InvArgs) -> Result<bool, Failure> {
    let cfg = load_config(&a.common)?;
    init_threads(&a.common, &cfg)?;
    let space_spec = a.space.or(cfg_str(&cfg, "space")).unwrap_or_else(|| "euclidean".into());
    let n1 = a.n1.or(cfg_usize(&cfg, "n1")).unwrap_or(2);
    let n2 = a.n2.or(cfg_usize(&cfg, "n2")).unwrap_or(2);
    let samples = a.samples.or(cfg_usize(&cfg, "samples")).unwrap_or(10_000);
    let seed = require_seed(a.seed, &cfg)?;
    let tol = a.tol.or(cfg_f64(&cfg, "tol")).unwrap_or(1e-6);

    let space = match space_spec.as_str() {
        "euclidean" => PairedSpace::euclidean(n1, n2),
        "crossterm" => PairedSpace::cross_term(n1, n2),
        other => {
            let fam = other
                .strip_prefix("sum:")
                .ok_or_else(|| Failure::usage("--space must be sum:<family> | euclidean | crossterm"))?;
            PairedSpace::direct_sum(n1, n2, parse_norm(fam)?)
        }
    };

    let defect = invariance::invariance_defect(&space, samples, seed)?;
    let restriction = space.restriction_defect(2000, seed);
    let extraction = if defect.epsilon <= tol {
        let z = invariance::extract_z(&space, &ExtractCfg { tolerance: tol, seed, ..Default::default() })?;
        let table = z.radial_table().expect("extraction tabulates");
        Some(json!({
            "resolution": table.angles.len() - 1,
            "radius_at_0": table.radii[0],
            "radius_at_mid": table.radii[table.radii.len() / 2],
            "radius_at_end": *table.radii.last().unwrap(),
        }))
    } else {
        None
    };

    let net_bounds = match a.net_bounds.or(cfg_str(&cfg, "net_bounds")) {
        Some(spec) => {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 2 {
                return Err(Failure::usage("--net-bounds expects \"alpha,A\""));
            }
            let alpha: f64 = parts[0].parse().map_err(|_| Failure::usage("bad alpha"))?;
            let big_a: f64 = parts[1].parse().map_err(|_| Failure::usage("bad A"))?;
            let (lo, hi) = invariance::net_to_every_bounds(alpha, big_a)?;
            Some(json!({ "alpha": alpha, "A": big_a, "lower": lo, "upper": hi }))
        }
        None => None,
    };

    let gordon = match a.gordon.or(cfg_str(&cfg, "gordon")) {
        Some(spec) => {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 5 {
                return Err(Failure::usage("--gordon expects \"ln_n,delta,sigma,beta,iters\""));
            }
            let ln_n: f64 = parts[0].parse().map_err(|_| Failure::usage("bad ln_n"))?;
            let delta: f64 = parts[1].parse().map_err(|_| Failure::usage("bad delta"))?;
            let sigma: f64 = parts[2].parse().map_err(|_| Failure::usage("bad sigma"))?;
            let beta: f64 = parts[3].parse().map_err(|_| Failure::usage("bad beta"))?;
            let iters: usize = parts[4].parse().map_err(|_| Failure::usage("bad iters"))?;
            Some(invariance::gordon_dimension_ln(ln_n, delta, sigma, beta, iters)?)
        }
        None => None,
    };

    let passed = defect.epsilon <= tol;
    emit_json(
        &a.common,
        &json!({
            "schema": SCHEMA,
            "command": "invariance",
            "space": space_spec,
            "n1": n1,
            "n2": n2,
            "defect": defect,
            "restriction_defect": restriction,
            "tolerance": tol,
            "extraction": extraction,
            "net_bounds": net_bounds,
            "gordon": gordon,
            "passed": passed,
        }),
    )?;
    Ok(passed)
}
