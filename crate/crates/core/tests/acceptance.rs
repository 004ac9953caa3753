//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Timed criteria serialize on a shared lock so their runtime measurements
//! are not distorted by concurrently running tests.

use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spiralbend::annulus::{build_schedule_with_constant, choose_parameters, embed_cloud, PointCloud};
use spiralbend::bending::{BendingMap, BendingParams, RadialLaw};
use spiralbend::capspace::{self, CapSpaceConfig, FlatnessOutcome};
use spiralbend::invariance::{self, ExtractCfg, PairedSpace};
use spiralbend::linalg::{norm2, unit_vector};
use spiralbend::model_space::{spherical_opening, Subspace};
use spiralbend::norms2d::UncondNorm2;
use spiralbend::polygon::{build_polygon, sample_profile, verify_containment};

static TIMED: Mutex<()> = Mutex::new(());

fn timed_guard() -> std::sync::MutexGuard<'static, ()> {
    TIMED.lock().unwrap_or_else(|e| e.into_inner())
}

fn families() -> Vec<(&'static str, UncondNorm2)> {
    vec![
        ("l1", UncondNorm2::l1()),
        ("l1.5", UncondNorm2::lp(1.5).unwrap()),
        ("l2", UncondNorm2::l2()),
        ("linf", UncondNorm2::linf()),
    ]
}

fn report(n: usize, name: &str, failures: &[String], extra: &str) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {n} ({name}): {status}{}{extra}", if extra.is_empty() { "" } else { " — " });
    for f in failures {
        println!("    failure: {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

#[test]
fn criterion_1_bending_distortion() {
    let _guard = timed_guard();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut seed = 1000u64;
    for (zname, z) in families() {
        for dim in [2usize, 4, 8] {
            for eps in [0.05f64, 0.1, 0.2] {
                seed += 1;
                let params = BendingParams::new(eps, 1.0, 4.0, z.clone(), dim).unwrap();
                let map = BendingMap::new(params);
                let rep = map.verify_distortion(100_000, seed, &RadialLaw::default()).unwrap();
                if !rep.violations.is_empty() {
                    failures.push(format!(
                        "{zname} dim={dim} eps={eps}: {} ratios outside [1−ε, 1+ε], first {:?}",
                        rep.violations.len(),
                        rep.violations.first().map(|w| w.ratio)
                    ));
                }
                if rep.norm_preservation_worst_rel > 1e-10 {
                    failures.push(format!(
                        "{zname} dim={dim} eps={eps}: norm preservation {} > 1e-10",
                        rep.norm_preservation_worst_rel
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 60.0 {
        failures.push(format!("runtime {elapsed:.1}s exceeds 60s"));
    }
    report(1, "bending distortion bracket", &failures, &format!("36 grids x 1e5 pairs in {elapsed:.1}s"));
}

#[test]
fn criterion_2_boundary_regimes_bit_exact() {
    let mut failures = Vec::new();
    for (zname, z) in families() {
        let params = BendingParams::new(0.1, 1.0, 4.0, z, 4).unwrap();
        let big_r = params.big_r.unwrap();
        let map = BendingMap::new(params);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for i in 0..1000 {
            let dir = unit_vector(&mut rng, 4);
            let t: f64 = rng.random_range(0.0..1.0);
            let x: Vec<f64> = dir.iter().map(|v| v * t).collect();
            let (a, b) = map.apply(&x).unwrap();
            let inner_ok = a.iter().zip(&x).all(|(p, q)| p.to_bits() == q.to_bits())
                && b.iter().all(|p| p.to_bits() == 0.0f64.to_bits());
            if !inner_ok {
                failures.push(format!("{zname}: inner regime not bit-exact at sample {i}"));
                break;
            }
            let s: f64 = rng.random_range(1.0..3.0);
            let y: Vec<f64> = dir.iter().map(|v| v * s * big_r).collect();
            let (a, b) = map.apply(&y).unwrap();
            let outer_ok = b.iter().zip(&y).all(|(p, q)| p.to_bits() == q.to_bits())
                && a.iter().all(|p| p.to_bits() == 0.0f64.to_bits());
            if !outer_ok {
                failures.push(format!("{zname}: outer regime not bit-exact at sample {i}"));
                break;
            }
        }
    }
    report(2, "exact boundary regimes", &failures, "1e3 samples per regime, bit compare");
}

#[test]
fn criterion_3_end_to_end_embedding() {
    let _guard = timed_guard();
    let start = Instant::now();
    let mut failures = Vec::new();

    let params = choose_parameters(0.5).unwrap();
    let bounds = params.bounds();
    let z_choices: Vec<Vec<UncondNorm2>> = vec![
        vec![UncondNorm2::l2()],
        vec![UncondNorm2::linf()],
        vec![UncondNorm2::l1()],
        vec![UncondNorm2::lp(1.5).unwrap()],
        vec![UncondNorm2::l2(), UncondNorm2::linf()],
    ];
    for (ci, zs) in z_choices.iter().enumerate() {
        let template = build_schedule_with_constant(params.psi, params.eps, params.d, 10, 4.0).unwrap();
        // radii spanning more than two schedule periods (charts up to 4)
        let max_ln = 0.95 * template.ln_radius(9);
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + ci as u64);
        let mut points = vec![vec![0.0; 3]];
        for _ in 1..500 {
            let r = rng.random_range(-2.0..max_ln).exp();
            let dir = unit_vector(&mut rng, 3);
            points.push(dir.iter().map(|v| v * r).collect());
        }
        let cloud = PointCloud { dim: 3, points, contains_origin: true };
        let mut schedule = template.clone();
        match embed_cloud(&cloud, &mut schedule, zs, 1) {
            Ok(out) => {
                if !out.report.overlap_consistent {
                    failures.push(format!("cloud {ci}: overlap inconsistency"));
                }
                // overlap consistency must be exact: both chart bendings
                // produce bit-identical images on shared points
                let mut overlap_points = 0usize;
                for (p, charts) in cloud.points.iter().zip(&out.report.charts) {
                    if charts.len() == 2 {
                        overlap_points += 1;
                        let ta = schedule.chart_bending(charts[0], zs, 3).unwrap();
                        let tb = schedule.chart_bending(charts[1], zs, 3).unwrap();
                        let (_, hi) = ta.apply(p).unwrap();
                        let (lo, _) = tb.apply(p).unwrap();
                        if hi.iter().zip(&lo).any(|(a, b)| a.to_bits() != b.to_bits()) {
                            failures.push(format!("cloud {ci}: overlap images not bit-identical"));
                            break;
                        }
                    }
                }
                if overlap_points == 0 {
                    failures.push(format!("cloud {ci}: no overlap points sampled"));
                }
                if !out.report.measured.exhaustive {
                    failures.push(format!("cloud {ci}: distortion not exhaustive"));
                }
                let d = out.report.measured.distortion;
                if d > bounds.case3_quotient {
                    failures.push(format!(
                        "cloud {ci}: measured distortion {d} exceeds Case-3 quotient {}",
                        bounds.case3_quotient
                    ));
                }
                if d > 1.5 {
                    failures.push(format!("cloud {ci}: measured distortion {d} exceeds 1.5"));
                }
                if out.report.max_chart < 4 {
                    failures.push(format!("cloud {ci}: spans only {} charts", out.report.max_chart));
                }
            }
            Err(e) => failures.push(format!("cloud {ci}: {e}")),
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 120.0 {
        failures.push(format!("runtime {elapsed:.1}s exceeds 120s"));
    }
    report(
        3,
        "end-to-end annulus embedding",
        &failures,
        &format!("psi={:.4} d={} case3={:.4}, 5 clouds x C(500,2) pairs in {elapsed:.1}s", params.psi, params.d, bounds.case3_quotient),
    );
}

#[test]
fn criterion_4_covering_certificates() {
    let _guard = timed_guard();
    let start = Instant::now();
    let mut failures = Vec::new();
    let bodies: Vec<(&str, UncondNorm2)> = vec![
        ("disk", UncondNorm2::l2()),
        ("l1-ball", UncondNorm2::l1()),
        ("square", UncondNorm2::linf()),
        ("superellipse3", UncondNorm2::lp(3.0).unwrap()),
    ];
    for (name, body) in &bodies {
        for k in [8usize, 16, 32, 64] {
            let profile = match sample_profile(body, k) {
                Ok(p) => p,
                Err(e) => {
                    failures.push(format!("{name} k={k}: profile: {e}"));
                    continue;
                }
            };
            let cover = match build_polygon(&profile) {
                Ok(c) => c,
                Err(e) => {
                    failures.push(format!("{name} k={k}: polygon: {e}"));
                    continue;
                }
            };
            match verify_containment(&cover, &profile, 10_000) {
                Ok(cert) => {
                    if !cert.counterexamples.is_empty() {
                        failures.push(format!(
                            "{name} k={k}: {} counterexample samples, first {:?}",
                            cert.counterexamples.len(),
                            cert.counterexamples.first()
                        ));
                    }
                    for clause in cert.clauses.iter().filter(|c| !c.ok) {
                        failures.push(format!("{name} k={k}: clause {} idx {:?} fails", clause.name, clause.index));
                    }
                }
                Err(e) => failures.push(format!("{name} k={k}: {e}")),
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 30.0 {
        failures.push(format!("runtime {elapsed:.1}s exceeds 30s"));
    }
    report(4, "covering certificates", &failures, &format!("4 bodies x 4 subdivisions in {elapsed:.1}s"));
}

#[test]
fn criterion_5_cap_space() {
    let _guard = timed_guard();
    let start = Instant::now();
    let mut failures = Vec::new();
    for delta in [0.1f64, 0.2] {
        let space = capspace::build_capspace(delta, &CapSpaceConfig { seed: 7, ..Default::default() }).unwrap();
        let cert = capspace::certify_properties(&space, 100_000, 7).unwrap();
        if cert.isometry_on_planes > 1e-12 {
            failures.push(format!("delta={delta}: (i) plane isometry deviation {}", cert.isometry_on_planes));
        }
        if cert.projection_max_ratio > 1.0 + 1e-12 || !cert.projection_equality_attained {
            failures.push(format!(
                "delta={delta}: (ii) projections ratio {} equality {}",
                cert.projection_max_ratio, cert.projection_equality_attained
            ));
        }
        if !cert.sandwich_ok || cert.sandwich_min < 1.0 - delta * delta / 2.0 - 1e-9 {
            failures.push(format!(
                "delta={delta}: (iv) sandwich range [{}, {}]",
                cert.sandwich_min, cert.sandwich_max
            ));
        }
        if cert.triangle_violation > 1e-12 || cert.homogeneity_violation > 1e-12 || !cert.homogeneity_pow2_exact {
            failures.push(format!(
                "delta={delta}: norm axioms (triangle {}, homogeneity {})",
                cert.triangle_violation, cert.homogeneity_violation
            ));
        }

        // flatness probe on 1e3 planes with min-opening at least 2*delta
        let gamma = 2.0 * delta;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut planes = Vec::with_capacity(1000);
        while planes.len() < 1000 {
            let p = Subspace::random(&mut rng, 4, 2);
            let o1 = spherical_opening(&p, &capspace::y1()).unwrap();
            let o2 = spherical_opening(&p, &capspace::y2()).unwrap();
            if o1 >= gamma && o2 >= gamma {
                planes.push(p);
            }
        }
        let mut found = 0usize;
        let mut margins = Vec::new();
        for p in &planes {
            match capspace::flatness_witness(&space, p, gamma).unwrap() {
                FlatnessOutcome::Witness(w) => {
                    if (w.midpoint_norm - 1.0).abs() > 1e-10 {
                        failures.push(format!("delta={delta}: witness midpoint norm {}", w.midpoint_norm));
                    }
                    found += 1;
                }
                FlatnessOutcome::None { nearest_miss } => margins.push(nearest_miss),
            }
        }
        let rate = found as f64 / planes.len() as f64;
        println!(
            "    delta={delta}: flatness {found}/1000 ({:.1}%), shortfall margins: {:?}",
            100.0 * rate,
            &margins[..margins.len().min(5)]
        );
        if rate < 0.99 {
            failures.push(format!("delta={delta}: flatness rate {rate} below 0.99"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 90.0 {
        failures.push(format!("runtime {elapsed:.1}s exceeds 90s"));
    }
    report(5, "cap space certificates", &failures, &format!("two builds + probes in {elapsed:.1}s"));
}

#[test]
fn criterion_6_constants() {
    let mut failures = Vec::new();
    let analytic = [
        ("l1", UncondNorm2::l1(), 1.0, std::f64::consts::SQRT_2),
        ("l2", UncondNorm2::l2(), 1.0, 1.0),
        ("linf", UncondNorm2::linf(), std::f64::consts::FRAC_1_SQRT_2, 1.0),
    ];
    for (name, z, m_ref, mm_ref) in analytic {
        let (m, mm) = z.extremal_constants(4096).unwrap();
        if (m - m_ref).abs() > 1e-8 || (mm - mm_ref).abs() > 1e-8 {
            failures.push(format!("{name}: (m, M) = ({m}, {mm}) vs analytic ({m_ref}, {mm_ref})"));
        }
    }
    let c2 = UncondNorm2::l2().curve_lipschitz(4096).unwrap();
    if !(0.999..=1.0).contains(&c2) {
        failures.push(format!("c_l2 = {c2} outside [0.999, 1.0]"));
    }
    let mut checked = families();
    checked.push(("l3", UncondNorm2::lp(3.0).unwrap()));
    checked.push(("tabulated-l1.5", UncondNorm2::lp(1.5).unwrap().tabulate(2048).unwrap()));
    for (name, z) in checked {
        let c = z.curve_lipschitz(1024).unwrap();
        if !(2.0 / std::f64::consts::PI..=4.0).contains(&c) {
            failures.push(format!("c_{name} = {c} outside [2/pi, 4]"));
        }
    }
    report(6, "derived constants", &failures, &format!("c_l2 = {c2:.12}"));
}

#[test]
fn criterion_7_invariance_suite() {
    let mut failures = Vec::new();
    for (name, z) in families() {
        let space = PairedSpace::direct_sum(3, 2, z);
        let defect = invariance::invariance_defect(&space, 10_000, 5).unwrap();
        if defect.epsilon > 1e-10 {
            failures.push(format!("sum:{name}: defect {} above 1e-10", defect.epsilon));
        }
    }
    let space = PairedSpace::direct_sum(3, 3, UncondNorm2::lp(1.5).unwrap());
    let z = invariance::extract_z(&space, &ExtractCfg::default()).unwrap();
    let reference = UncondNorm2::lp(1.5).unwrap();
    let mut worst = 0.0f64;
    for i in 0..=256 {
        let t = i as f64 * std::f64::consts::FRAC_PI_2 / 256.0;
        worst = worst.max((z.eval(t.cos(), t.sin()) - reference.eval(t.cos(), t.sin())).abs());
    }
    if worst > 1e-9 {
        failures.push(format!("extraction drift {worst} above 1e-9 on the 256-point grid"));
    }
    match invariance::net_to_every_bounds(0.01, 1.0) {
        Ok((lo, hi)) => {
            if (lo - 0.94109).abs() > 1e-5 || (hi - 1.06111).abs() > 1e-5 {
                failures.push(format!("net bounds ({lo}, {hi}) vs (0.94109, 1.06111)"));
            }
        }
        Err(e) => failures.push(format!("net bounds: {e}")),
    }
    report(7, "invariance suite", &failures, &format!("extraction drift {worst:.2e}"));
}

#[test]
fn criterion_8_counterexample_arithmetic() {
    let mut failures = Vec::new();
    let rep = capspace::precondition_chain(0.1, 0.05, 0.1);
    if !rep.cond_gamma {
        failures.push("gamma condition should hold at 0.1".into());
    }
    if !rep.cond_eps_lt_gamma {
        failures.push("eps < gamma should hold at (0.05, 0.1)".into());
    }
    if !rep.cond_delta || (rep.delta_lhs - 0.995).abs() > 1e-12 {
        failures.push(format!("delta condition: lhs {} rhs {}", rep.delta_lhs, rep.delta_rhs));
    }
    if (rep.delta_rhs - (1.1f64).powi(3) / std::f64::consts::SQRT_2).abs() > 1e-12 {
        failures.push(format!("delta rhs {} mismatch", rep.delta_rhs));
    }
    if rep.contradiction_inequality_holds {
        failures.push("the bending-forced inequality should be false at (0.1, 0.05, 0.1)".into());
    }
    let boundary = capspace::precondition_chain(2.0f64.powf(1.0 / 6.0) - 1.0, 0.05, 0.1);
    if boundary.cond_gamma {
        failures.push("gamma boundary value must fail the strict condition".into());
    }

    // discrete fundamental-theorem identity: first-order convergence on a
    // smooth map
    let smooth = |p: &[f64; 2]| {
        [
            (p[0] + 0.3 * p[1]).sin(),
            p[1] * p[1] * 0.25,
            (0.5 * p[0]).cos() * p[1],
            p[0] * 0.2,
        ]
    };
    let mut prev = f64::INFINITY;
    for n in [125usize, 250, 500, 1000] {
        let prof = capspace::color_segment(&smooth, [0.1, -0.4], [1.3, 0.9], 0.3, n, 1e-6).unwrap();
        if prof.ftc_residual > prev / 1.5 + 1e-12 {
            failures.push(format!("FTC residual not first-order at n={n}: {} vs {prev}", prof.ftc_residual));
        }
        prev = prof.ftc_residual;
    }
    let prof = capspace::color_segment(&smooth, [0.1, -0.4], [1.3, 0.9], 0.3, 1000, 1e-6).unwrap();
    if prof.ftc_residual > 1e-4 * prof.segment_len {
        failures.push(format!("FTC residual {} above 1e-4 of segment length", prof.ftc_residual));
    }
    report(8, "counterexample arithmetic", &failures, &format!("final FTC residual {:.2e}", prof.ftc_residual));
}

// Criterion 9 (byte-identical JSON across seeds and thread counts) runs in
// the CLI crate's test suite, where the binary is available.

#[test]
fn norm_preservation_bulk() {
    // companion check to criterion 1: a million seeded single points
    let z = UncondNorm2::lp(1.5).unwrap();
    let map = BendingMap::new(BendingParams::new(0.1, 1.0, 4.0, z, 4).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..1_000_000 {
        let ln_t: f64 = rng.random_range(-3.0..(map.params.ln_big_r + 3.0));
        let x: Vec<f64> = unit_vector(&mut rng, 4).iter().map(|v| v * ln_t.exp()).collect();
        let img = map.apply(&x).unwrap();
        let n = norm2(&x);
        worst = worst.max((map.image_norm(&img) - n).abs() / n);
    }
    assert!(worst <= 1e-10, "norm preservation {worst}");
}
