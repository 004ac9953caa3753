//! A 4-dimensional norm built by cutting symmetric cap pairs from the
//! Euclidean ball so that every 2-plane far from the two distinguished
//! coordinate planes carries a flat spot, plus the numeric probes used by
//! the non-bendability argument: component bounds, derivative coloring, the
//! discrete fundamental-theorem identity, and the parameter chain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add, dot, norm2, scale, sub};
use crate::model_space::{opening_2planes, spherical_opening, Subspace};

/// One cap: the region of the unit ball beyond the hyperplane
/// `⟨w, x⟩ = h`. The chordal radius δ fixes `h = 1 − δ²/2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapSpec {
    pub center: [f64; 4],
    pub height: f64,
}

impl CapSpec {
    pub fn from_chordal(center: [f64; 4], delta: f64) -> Self {
        CapSpec { center, height: 1.0 - delta * delta / 2.0 }
    }
}

/// The cap-cut norm on ℝ⁴:
/// `‖x‖ = max(‖x‖₂, max over caps |⟨w, x⟩|/h)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapSpace4 {
    pub delta: f64,
    pub seed: u64,
    pub caps: Vec<CapSpec>,
    pub structured_count: usize,
    /// net planes beyond Y₁ and Y₂ that contributed a cap pair
    pub net_planes: usize,
    /// covering radius of the net measured against the candidate pool
    pub covering_radius_achieved: f64,
    /// whether the pool was δ-covered within the budget
    pub covering_achieved: bool,
    /// minimum pairwise opening over the net (must be ≥ δ)
    pub net_min_separation: f64,
    /// centers rejected because no point of the plane's circle kept
    /// distance δ from both coordinate spheres (none expected)
    pub rejected_centers: usize,
}

#[derive(Debug, Clone)]
pub struct CapSpaceConfig {
    /// maximum number of net planes beyond Y₁, Y₂
    pub net_budget: usize,
    /// candidate pool size for the greedy net
    pub pool: usize,
    pub seed: u64,
}

impl Default for CapSpaceConfig {
    fn default() -> Self {
        CapSpaceConfig { net_budget: 3000, pool: 100_000, seed: 0 }
    }
}

pub fn y1() -> Subspace {
    Subspace::coordinate_plane(4, &[0, 1]).unwrap()
}

pub fn y2() -> Subspace {
    Subspace::coordinate_plane(4, &[2, 3]).unwrap()
}

/// Distance from a unit vector to the unit sphere of a coordinate plane:
/// `sqrt(2 − 2‖P w‖)`.
fn dist_to_plane_sphere(w: &[f64], axes: (usize, usize)) -> f64 {
    let p = (w[axes.0] * w[axes.0] + w[axes.1] * w[axes.1]).sqrt();
    (2.0 - 2.0 * p.min(1.0)).max(0.0).sqrt()
}

/// Builds the cap space: 32 structured caps tangent to the two coordinate
/// spheres, then greedy farthest-point net caps over a seeded pool of
/// 2-planes under the spherical opening.
pub fn build_capspace(delta: f64, cfg: &CapSpaceConfig) -> Result<CapSpace4> {
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::invalid(format!("δ must lie in (0, 1/4), got {delta}")));
    }
    if cfg.pool < 1 || cfg.net_budget < 1 {
        return Err(Error::invalid("net pool and budget must be positive"));
    }
    let sigma = 1.0 - delta * delta / 2.0;
    let a = (1.0 / (sigma * sigma) - 1.0).sqrt();
    let tau = a * sigma;

    let mut caps = Vec::new();
    // 16 caps tangent to S(Y₁): ±σe_j ± τe_l, j ∈ {1,2}, l ∈ {3,4}
    // 16 caps tangent to S(Y₂): the mirrored pairings
    for &(j, l) in &[(0usize, 2usize), (0, 3), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0), (3, 1)] {
        for (sj, sl) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let mut c = [0.0; 4];
            c[j] = sj * sigma;
            c[l] = sl * tau;
            caps.push(CapSpec::from_chordal(c, delta));
        }
    }
    let structured_count = caps.len();
    debug_assert_eq!(structured_count, 32);

    // greedy δ-separated net over the pool, Y₁ and Y₂ forced members
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pool: Vec<Subspace> = (0..cfg.pool).map(|_| Subspace::random(&mut rng, 4, 2)).collect();
    let mut net: Vec<Subspace> = vec![y1(), y2()];
    let mut dist: Vec<f64> = pool
        .par_iter()
        .map(|p| opening_2planes(&p.frame, &net[0].frame).min(opening_2planes(&p.frame, &net[1].frame)))
        .collect();
    let mut covering_radius = f64::INFINITY;
    while net.len() < 2 + cfg.net_budget {
        let (best_idx, best_dist) = dist
            .par_iter()
            .cloned()
            .enumerate()
            .reduce(
                || (usize::MAX, f64::NEG_INFINITY),
                |a, b| {
                    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                        b
                    } else {
                        a
                    }
                },
            );
        covering_radius = best_dist;
        if best_dist < delta {
            break;
        }
        let chosen = pool[best_idx].clone();
        dist.par_iter_mut().zip(&pool).for_each(|(d, p)| {
            let nd = opening_2planes(&p.frame, &chosen.frame);
            if nd < *d {
                *d = nd;
            }
        });
        net.push(chosen);
    }
    if net.len() == 2 + cfg.net_budget {
        // budget exhausted: recompute the residual covering radius
        covering_radius = dist
            .par_iter()
            .cloned()
            .reduce(|| f64::NEG_INFINITY, f64::max);
    }
    let covering_achieved = covering_radius < delta;

    let mut net_min_separation = f64::INFINITY;
    for i in 0..net.len() {
        for j in (i + 1)..net.len() {
            net_min_separation = net_min_separation.min(opening_2planes(&net[i].frame, &net[j].frame));
        }
    }

    // cap centers on each net plane: maximize the min distance to the two
    // coordinate spheres over the plane's circle
    let mut rejected = 0usize;
    let mut net_planes = 0usize;
    for w_plane in net.iter().skip(2) {
        let objective = |phi: f64| {
            let w = w_plane.circle_point(phi);
            dist_to_plane_sphere(&w, (0, 1)).min(dist_to_plane_sphere(&w, (2, 3)))
        };
        let grid = 256;
        let mut best_phi = 0.0;
        let mut best = f64::NEG_INFINITY;
        for i in 0..grid {
            let phi = std::f64::consts::PI * i as f64 / grid as f64;
            let v = objective(phi);
            if v > best {
                best = v;
                best_phi = phi;
            }
        }
        let step = std::f64::consts::PI / grid as f64;
        let (mut lo, mut hi) = (best_phi - step, best_phi + step);
        for _ in 0..60 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if objective(m1) > objective(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let phi = 0.5 * (lo + hi);
        if objective(phi) < delta - 1e-12 {
            rejected += 1;
            continue;
        }
        let w = w_plane.circle_point(phi);
        let c: [f64; 4] = [w[0], w[1], w[2], w[3]];
        caps.push(CapSpec::from_chordal(c, delta));
        let neg: [f64; 4] = [-w[0], -w[1], -w[2], -w[3]];
        caps.push(CapSpec::from_chordal(neg, delta));
        net_planes += 1;
    }

    Ok(CapSpace4 {
        delta,
        seed: cfg.seed,
        caps,
        structured_count,
        net_planes,
        covering_radius_achieved: covering_radius,
        covering_achieved,
        net_min_separation,
        rejected_centers: rejected,
    })
}

impl CapSpace4 {
    pub fn height(&self) -> f64 {
        1.0 - self.delta * self.delta / 2.0
    }

    /// `max(‖x‖₂, max over caps |⟨w,x⟩|/h)`.
    pub fn norm(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), 4);
        let mut best = norm2(x);
        for cap in &self.caps {
            let v = (cap.center[0] * x[0] + cap.center[1] * x[1] + cap.center[2] * x[2] + cap.center[3] * x[3])
                .abs()
                / cap.height;
            if v > best {
                best = v;
            }
        }
        best
    }

    /// Index and value of the dominating cap functional, if any exceeds the
    /// Euclidean norm.
    fn dominating_cap(&self, x: &[f64]) -> Option<(usize, f64)> {
        let eu = norm2(x);
        let mut best = (usize::MAX, eu);
        for (i, cap) in self.caps.iter().enumerate() {
            let v = (dot(&cap.center, x)).abs() / cap.height;
            if v > best.1 {
                best = (i, v);
            }
        }
        if best.0 == usize::MAX {
            None
        } else {
            Some(best)
        }
    }

    /// max over caps of `‖P_{Yᵢ} w‖ − h`: ≤ 0 means no cap cuts the
    /// coordinate spheres.
    pub fn cap_plane_margin(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for cap in &self.caps {
            let p1 = (cap.center[0] * cap.center[0] + cap.center[1] * cap.center[1]).sqrt();
            let p2 = (cap.center[2] * cap.center[2] + cap.center[3] * cap.center[3]).sqrt();
            worst = worst.max(p1 - cap.height).max(p2 - cap.height);
        }
        worst
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapCertificate {
    pub samples: usize,
    pub seed: u64,
    /// (i) worst |‖y‖_X − 1| over the two coordinate unit circles
    pub isometry_on_planes: f64,
    /// (ii) max projection ratio over samples, and whether 1 was attained
    pub projection_max_ratio: f64,
    pub projection_equality_attained: bool,
    /// (iv) range of ‖x‖₂/‖x‖_X over samples
    pub sandwich_min: f64,
    pub sandwich_max: f64,
    pub sandwich_ok: bool,
    /// norm axioms on sampled triples
    pub triangle_violation: f64,
    pub homogeneity_violation: f64,
    pub homogeneity_pow2_exact: bool,
    /// max over caps of ‖P w‖ − h (≤ 0: no cap cuts the coordinate spheres)
    pub cap_plane_margin: f64,
    pub sampled_plane_cut_margin: f64,
    /// worst |‖w‖₂ − 1| over cap centers
    pub center_norm_defect: f64,
    pub passed: bool,
}

/// Certifies the isometric planes, norm-1 projections, Euclidean sandwich,
/// and norm axioms on seeded samples.
pub fn certify_properties(space: &CapSpace4, samples: usize, seed: u64) -> Result<CapCertificate> {
    if samples < 1 {
        return Err(Error::invalid("need samples ≥ 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = space.height();

    // (i) both coordinate circles keep the Euclidean norm exactly
    let plane_samples = samples.min(10_000);
    let (iso_dev, plane_cut) = (0..plane_samples)
        .into_par_iter()
        .map(|i| {
            let phi = std::f64::consts::TAU * i as f64 / plane_samples as f64;
            let mut dev = 0.0f64;
            let mut cut = f64::NEG_INFINITY;
            for axes in [(0usize, 1usize), (2, 3)] {
                let mut y = [0.0; 4];
                y[axes.0] = phi.cos();
                y[axes.1] = phi.sin();
                dev = dev.max((space.norm(&y) - 1.0).abs());
                for cap in &space.caps {
                    cut = cut.max(dot(&cap.center, &y).abs() - h);
                }
            }
            (dev, cut)
        })
        .reduce(|| (0.0, f64::NEG_INFINITY), |a, b| (a.0.max(b.0), a.1.max(b.1)));

    // (ii) and (iv) on random samples
    let pts: Vec<[f64; 4]> = (0..samples)
        .map(|_| {
            let mut x = [0.0; 4];
            for v in &mut x {
                *v = rng.random_range(-1.0..1.0);
            }
            x
        })
        .collect();
    let (mut proj_max, sandwich_min, sandwich_max) = pts
        .par_iter()
        .map(|x| {
            let n = space.norm(x);
            if n < 1e-12 {
                return (0.0, f64::INFINITY, f64::NEG_INFINITY);
            }
            let p1 = [x[0], x[1], 0.0, 0.0];
            let p2 = [0.0, 0.0, x[2], x[3]];
            let proj = (space.norm(&p1) / n).max(space.norm(&p2) / n);
            let ratio = norm2(x) / n;
            (proj, ratio, ratio)
        })
        .reduce(
            || (0.0, f64::INFINITY, f64::NEG_INFINITY),
            |a, b| (a.0.max(b.0), a.1.min(b.1), a.2.max(b.2)),
        );
    // equality case of (ii): a point already inside Y₁
    let y_in = [0.7, -0.2, 0.0, 0.0];
    let eq_ratio = space.norm(&[y_in[0], y_in[1], 0.0, 0.0]) / space.norm(&y_in);
    let projection_equality_attained = (eq_ratio - 1.0).abs() <= 1e-15;
    proj_max = proj_max.max(eq_ratio);

    // norm axioms on triples
    let triples: Vec<([f64; 4], [f64; 4], f64)> = (0..samples)
        .map(|_| {
            let mut x = [0.0; 4];
            let mut y = [0.0; 4];
            for i in 0..4 {
                x[i] = rng.random_range(-1.0..1.0);
                y[i] = rng.random_range(-1.0..1.0);
            }
            (x, y, rng.random_range(-2.0..2.0))
        })
        .collect();
    let (triangle, homogeneity, pow2_exact) = triples
        .par_iter()
        .map(|(x, y, t)| {
            let s = [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]];
            let tri = space.norm(&s) - space.norm(x) - space.norm(y);
            let nx = space.norm(x);
            let tx = [t * x[0], t * x[1], t * x[2], t * x[3]];
            let hom = (space.norm(&tx) - t.abs() * nx).abs() / nx.max(1e-300);
            let dx = [2.0 * x[0], 2.0 * x[1], 2.0 * x[2], 2.0 * x[3]];
            let pow2 = space.norm(&dx).to_bits() == (2.0 * nx).to_bits();
            (tri, hom, pow2)
        })
        .reduce(
            || (f64::NEG_INFINITY, 0.0, true),
            |a, b| (a.0.max(b.0), a.1.max(b.1), a.2 && b.2),
        );

    let cap_margin = space.cap_plane_margin();
    let center_norm_defect = space
        .caps
        .iter()
        .map(|c| (norm2(&c.center) - 1.0).abs())
        .fold(0.0f64, f64::max);
    let sandwich_ok = sandwich_min >= 1.0 - space.delta * space.delta / 2.0 - 1e-9 && sandwich_max <= 1.0 + 1e-12;
    let passed = iso_dev <= 1e-12
        && center_norm_defect <= 1e-12
        && plane_cut <= 1e-12
        && proj_max <= 1.0 + 1e-12
        && projection_equality_attained
        && sandwich_ok
        && triangle <= 1e-12
        && homogeneity <= 1e-12
        && pow2_exact
        && cap_margin <= 1e-12;
    Ok(CapCertificate {
        samples,
        seed,
        isometry_on_planes: iso_dev,
        projection_max_ratio: proj_max,
        projection_equality_attained,
        sandwich_min,
        sandwich_max,
        sandwich_ok,
        triangle_violation: triangle,
        homogeneity_violation: homogeneity,
        homogeneity_pow2_exact: pow2_exact,
        cap_plane_margin: cap_margin,
        sampled_plane_cut_margin: plane_cut,
        center_norm_defect,
        passed,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatnessWitness {
    pub cap_index: usize,
    pub u: [f64; 4],
    pub v: [f64; 4],
    pub chord_len: f64,
    pub midpoint_norm: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum FlatnessOutcome {
    Witness(FlatnessWitness),
    /// no cap reaches the plane's circle; carries the nearest-miss margin
    /// `max over the circle of (max cap functional) − 1`
    None { nearest_miss: f64 },
}

/// Searches the caps for a flat chord on the X-unit sphere of a 2-plane far
/// from both coordinate planes.
///
/// The circle maximum of each cap functional has the closed form
/// `max over φ of |⟨w, z(φ)⟩| = ‖P_plane w‖`, attained at
/// `φ = atan2(⟨w,b₂⟩, ⟨w,b₁⟩)`, so no grid scan is needed to find the
/// dominating cap.
pub fn flatness_witness(space: &CapSpace4, plane: &Subspace, gamma: f64) -> Result<FlatnessOutcome> {
    if plane.dim() != 2 || plane.ambient != 4 {
        return Err(Error::invalid("flatness probe needs a 2-plane in ℝ⁴"));
    }
    let om1 = spherical_opening(plane, &y1())?;
    let om2 = spherical_opening(plane, &y2())?;
    if om1 < gamma || om2 < gamma {
        return Err(Error::invalid(format!(
            "plane too close to a coordinate plane: Ω = ({om1:.4}, {om2:.4}) < γ = {gamma}"
        )));
    }

    let h = space.height();
    let mut cap_idx = usize::MAX;
    let mut best_val = f64::NEG_INFINITY;
    let mut best_phi = 0.0;
    for (i, cap) in space.caps.iter().enumerate() {
        let p = dot(&cap.center, &plane.frame[0]);
        let q = dot(&cap.center, &plane.frame[1]);
        let v = (p * p + q * q).sqrt() / cap.height;
        if v > best_val {
            best_val = v;
            cap_idx = i;
            best_phi = q.atan2(p);
        }
    }
    if best_val <= 1.0 {
        return Ok(FlatnessOutcome::None { nearest_miss: best_val - 1.0 });
    }
    let cap = &space.caps[cap_idx];
    let sign = 1.0f64;

    // the cap stays dominant on an arc around φ*; walk outward, then refine
    let dominant = |phi: f64| -> bool {
        let z = plane.circle_point(phi);
        let val = sign * dot(&cap.center, &z) / h;
        val > 1.0 && match space.dominating_cap(&z) {
            Some((_, top)) => val >= top * (1.0 - 1e-13),
            None => false,
        }
    };
    let step = std::f64::consts::PI / 2048.0;
    let edge = |dir: f64| -> f64 {
        let mut inside = best_phi;
        let mut probe = best_phi + dir * step;
        while dominant(probe) {
            inside = probe;
            probe += dir * step;
        }
        // bisect between the last dominant angle and the first failure
        let (mut lo, mut hi) = (inside, probe);
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if dominant(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let left = edge(-1.0);
    let right = edge(1.0);

    for shrink in [0.8, 0.5, 0.25, 0.05] {
        let phi_u = best_phi + shrink * (left - best_phi);
        let phi_v = best_phi + shrink * (right - best_phi);
        let zu = plane.circle_point(phi_u);
        let zv = plane.circle_point(phi_v);
        let u = scale(&zu, 1.0 / space.norm(&zu));
        let v = scale(&zv, 1.0 / space.norm(&zv));
        let mid = scale(&add(&u, &v), 0.5);
        let mid_norm = space.norm(&mid);
        let chord = norm2(&sub(&u, &v));
        if (mid_norm - 1.0).abs() <= 1e-10 && chord > 1e-9 {
            return Ok(FlatnessOutcome::Witness(FlatnessWitness {
                cap_index: cap_idx,
                u: [u[0], u[1], u[2], u[3]],
                v: [v[0], v[1], v[2], v[3]],
                chord_len: chord,
                midpoint_norm: mid_norm,
            }));
        }
    }
    Ok(FlatnessOutcome::None { nearest_miss: best_val - 1.0 })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentBoundReport {
    pub plane_openings: (f64, f64),
    pub close_to: usize,
    pub samples: usize,
    /// max of ‖far component‖₂ − γ‖y‖_X (≤ 0 certifies the bound)
    pub worst_excess: f64,
    pub passed: bool,
}

/// For a plane γ-close to one coordinate plane, checks that the other
/// component of every sampled vector is γ-small in the cap norm.
pub fn component_bound_check(
    space: &CapSpace4,
    plane: &Subspace,
    gamma: f64,
    samples: usize,
    seed: u64,
) -> Result<ComponentBoundReport> {
    let om1 = spherical_opening(plane, &y1())?;
    let om2 = spherical_opening(plane, &y2())?;
    // ulp-level slack so openings computed exactly at γ classify as close
    let close_to = if om1 <= gamma + 1e-12 {
        1
    } else if om2 <= gamma + 1e-12 {
        2
    } else {
        return Err(Error::invalid(format!(
            "plane is γ-close to neither coordinate plane: Ω = ({om1:.4}, {om2:.4})"
        )));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let t: f64 = rng.random_range(-2.0..2.0);
        let y = scale(&plane.circle_point(phi), t.exp());
        let far = if close_to == 1 {
            norm2(&[y[2], y[3]])
        } else {
            norm2(&[y[0], y[1]])
        };
        worst = worst.max(far - gamma * space.norm(&y));
    }
    Ok(ComponentBoundReport {
        plane_openings: (om1, om2),
        close_to,
        samples,
        worst_excess: worst,
        passed: worst <= 1e-12,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Color {
    Blue,
    Yellow,
    Neither,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColoringProfile {
    pub samples: usize,
    pub blue_fraction: f64,
    pub yellow_fraction: f64,
    pub neither_fraction: f64,
    /// samples where both openings were below γ (impossible for valid γ)
    pub both_count: usize,
    /// samples with non-finite differences or degenerate Jacobians
    pub flagged: usize,
    pub segment_len: f64,
    /// ‖(T(b)−T(a)) − Σ DT·u Δt‖₂
    pub ftc_residual: f64,
    pub ftc_residual_rel: f64,
}

/// Colors a segment by the plane the finite-difference derivative is close
/// to, and checks the discrete fundamental-theorem identity along it.
pub fn color_segment(
    map: &(dyn Fn(&[f64; 2]) -> [f64; 4] + Sync),
    a: [f64; 2],
    b: [f64; 2],
    gamma: f64,
    samples: usize,
    fd_step_rel: f64,
) -> Result<ColoringProfile> {
    if samples < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    let seg = [b[0] - a[0], b[1] - a[1]];
    let len = norm2(&seg);
    if len == 0.0 {
        return Err(Error::invalid("segment endpoints coincide"));
    }
    let u = [seg[0] / len, seg[1] / len];
    let h = fd_step_rel * len;
    let plane1 = y1();
    let plane2 = y2();

    #[derive(PartialEq)]
    enum SampleStatus {
        Ok,
        NonFinite,
        Degenerate,
        BothClose,
    }

    let ds = len / samples as f64;
    let evals: Vec<(Color, SampleStatus, [f64; 4])> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = (i as f64 + 0.5) * ds;
            let p = [a[0] + s * u[0], a[1] + s * u[1]];
            let jac_col = |e: [f64; 2]| -> [f64; 4] {
                let hi = map(&[p[0] + h * e[0], p[1] + h * e[1]]);
                let lo = map(&[p[0] - h * e[0], p[1] - h * e[1]]);
                [
                    (hi[0] - lo[0]) / (2.0 * h),
                    (hi[1] - lo[1]) / (2.0 * h),
                    (hi[2] - lo[2]) / (2.0 * h),
                    (hi[3] - lo[3]) / (2.0 * h),
                ]
            };
            let c1 = jac_col([1.0, 0.0]);
            let c2 = jac_col([0.0, 1.0]);
            if c1.iter().chain(&c2).any(|v| !v.is_finite()) {
                return (Color::Neither, SampleStatus::NonFinite, [0.0; 4]);
            }
            let du = [
                c1[0] * u[0] + c2[0] * u[1],
                c1[1] * u[0] + c2[1] * u[1],
                c1[2] * u[0] + c2[2] * u[1],
                c1[3] * u[0] + c2[3] * u[1],
            ];
            let span = match Subspace::from_span(4, &[c1.to_vec(), c2.to_vec()]) {
                Ok(s) => s,
                Err(_) => return (Color::Neither, SampleStatus::Degenerate, du),
            };
            let om1 = opening_2planes(&span.frame, &plane1.frame);
            let om2 = opening_2planes(&span.frame, &plane2.frame);
            match (om1 < gamma, om2 < gamma) {
                (true, true) => (Color::Neither, SampleStatus::BothClose, du),
                (true, false) => (Color::Blue, SampleStatus::Ok, du),
                (false, true) => (Color::Yellow, SampleStatus::Ok, du),
                (false, false) => (Color::Neither, SampleStatus::Ok, du),
            }
        })
        .collect();

    let mut blue = 0usize;
    let mut yellow = 0usize;
    let mut neither = 0usize;
    let mut both = 0usize;
    let mut flagged = 0usize;
    let mut integral = [0.0f64; 4];
    for (color, status, du) in &evals {
        match color {
            Color::Blue => blue += 1,
            Color::Yellow => yellow += 1,
            Color::Neither => neither += 1,
        }
        match status {
            SampleStatus::Ok => {}
            SampleStatus::BothClose => both += 1,
            SampleStatus::NonFinite | SampleStatus::Degenerate => flagged += 1,
        }
        for (acc, d) in integral.iter_mut().zip(du) {
            *acc += d * ds;
        }
    }

    let ta = map(&a);
    let tb = map(&b);
    let residual = norm2(&[
        tb[0] - ta[0] - integral[0],
        tb[1] - ta[1] - integral[1],
        tb[2] - ta[2] - integral[2],
        tb[3] - ta[3] - integral[3],
    ]);

    let n = samples as f64;
    Ok(ColoringProfile {
        samples,
        blue_fraction: blue as f64 / n,
        yellow_fraction: yellow as f64 / n,
        neither_fraction: neither as f64 / n,
        both_count: both,
        flagged,
        segment_len: len,
        ftc_residual: residual,
        ftc_residual_rel: residual / len,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreconditionReport {
    pub gamma: f64,
    pub eps: f64,
    pub delta: f64,
    /// 0 < γ < 2^{1/6} − 1
    pub cond_gamma: bool,
    pub gamma_bound: f64,
    /// ε < γ (the companion ε(γ) bound exists non-constructively and is
    /// reported, not certified)
    pub cond_eps_lt_gamma: bool,
    pub eps_of_gamma_note: String,
    /// 1 − δ²/2 > (1+γ)³/√2
    pub cond_delta: bool,
    pub delta_lhs: f64,
    pub delta_rhs: f64,
    /// whether 1 − δ²/2 ≤ (1+γ)(1+ε)²/√2 (the inequality a bending would
    /// force); false means the bending is excluded
    pub contradiction_inequality_holds: bool,
    pub contradiction_lhs: f64,
    pub contradiction_rhs: f64,
}

/// Evaluates the parameter chain of the non-bendability argument.
pub fn precondition_chain(gamma: f64, eps: f64, delta: f64) -> PreconditionReport {
    let gamma_bound = 2.0f64.powf(1.0 / 6.0) - 1.0;
    let delta_lhs = 1.0 - delta * delta / 2.0;
    let delta_rhs = (1.0 + gamma).powi(3) / std::f64::consts::SQRT_2;
    let contradiction_rhs = (1.0 + gamma) * (1.0 + eps) * (1.0 + eps) / std::f64::consts::SQRT_2;
    PreconditionReport {
        gamma,
        eps,
        delta,
        cond_gamma: gamma > 0.0 && gamma < gamma_bound,
        gamma_bound,
        cond_eps_lt_gamma: eps < gamma,
        eps_of_gamma_note: "ε(γ) from the flatness threshold exists non-constructively; only ε < γ is checked".into(),
        cond_delta: delta_lhs > delta_rhs,
        delta_lhs,
        delta_rhs,
        contradiction_inequality_holds: delta_lhs <= contradiction_rhs,
        contradiction_lhs: delta_lhs,
        contradiction_rhs,
    }
}
