//! The planar covering construction: radial profiles of symmetric convex
//! bodies, the alternating corner polygon, and containment certificates with
//! the full inequality-clause breakdown.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms2d::UncondNorm2;

/// Height-indexed boundary radii of a symmetric convex planar body
/// normalized to pass through (±1, 0) and (0, ±1). `radii[i]` is the
/// boundary x at height `1 − i·δ`, `δ = 1/k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialProfile {
    pub k: usize,
    pub radii: Vec<f64>,
    pub flat_top: bool,
    #[serde(skip)]
    pub body: Option<UncondNorm2>,
}

// gauge(x, 1) of a smooth body is indistinguishable from 1.0 in f64 for
// x up to ~1.5e-8, so the flat-top dispatch threshold must sit above that
// plateau.
const FLAT_TOP_THRESHOLD: f64 = 1e-6;

impl RadialProfile {
    pub fn delta(&self) -> f64 {
        1.0 / self.k as f64
    }

    pub fn height(&self, i: usize) -> f64 {
        1.0 - i as f64 * self.delta()
    }

    /// `Lᵢ = rᵢ − r_{i−1}`.
    pub fn ell(&self, i: usize) -> f64 {
        self.radii[i] - self.radii[i - 1]
    }

    pub fn gauge(&self, x: f64, y: f64) -> Result<f64> {
        let body = self.body.as_ref().ok_or_else(|| Error::invalid("profile carries no body oracle"))?;
        Ok(body.eval(x, y))
    }

    /// Builds a profile from raw radii; validates the normalization and the
    /// nonincreasing-increment consequence of convexity (r₀ exempt).
    pub fn from_radii(radii: Vec<f64>, body: Option<UncondNorm2>) -> Result<Self> {
        let k = radii.len().checked_sub(1).ok_or_else(|| Error::invalid("empty profile"))?;
        if k < 5 {
            return Err(Error::InvalidBody("need k ≥ 5 subdivisions".into()));
        }
        if (radii[k] - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidBody(format!("r_k must be 1, got {}", radii[k])));
        }
        if radii.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::InvalidBody("radii must be finite and nonnegative".into()));
        }
        // L₁ ≥ L₂ ≥ … ≥ L_k (convexity); L₀ = r₀ carries no constraint
        for i in 2..=k {
            let l_prev = radii[i - 1] - radii[i - 2];
            let l_cur = radii[i] - radii[i - 1];
            if l_cur > l_prev + 1e-9 {
                return Err(Error::InvalidBody(format!("increments not monotone at level {i}")));
            }
            if l_cur < -1e-9 {
                return Err(Error::InvalidBody(format!("radii decrease at level {i}")));
            }
        }
        let flat_top = radii[0] > FLAT_TOP_THRESHOLD;
        Ok(RadialProfile { k, radii, flat_top, body })
    }
}

/// Samples the profile of a body given by its gauge, solving each boundary
/// radius by bisection on the horizontal ray.
pub fn sample_profile(body: &UncondNorm2, k: usize) -> Result<RadialProfile> {
    if k < 5 {
        return Err(Error::InvalidBody("need k ≥ 5 subdivisions".into()));
    }
    if (body.eval(1.0, 0.0) - 1.0).abs() > 1e-9 || (body.eval(0.0, 1.0) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidBody("body must pass through (±1,0) and (0,±1)".into()));
    }
    let delta = 1.0 / k as f64;
    let mut radii = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let y = 1.0 - i as f64 * delta;
        radii.push(boundary_x(body, y));
    }
    radii[k] = 1.0;
    RadialProfile::from_radii(radii, Some(body.clone()))
}

/// Largest x ≥ 0 with gauge(x, y) ≤ 1.
fn boundary_x(body: &UncondNorm2, y: f64) -> f64 {
    if body.eval(0.0, y) > 1.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.5f64);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if body.eval(mid, y) <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialCheckReport {
    pub concavity_violation: f64,
    pub evenness_violation: f64,
    pub monotonicity_violation: f64,
}

impl RadialCheckReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.concavity_violation <= tol && self.evenness_violation <= tol && self.monotonicity_violation <= tol
    }
}

/// Checks discrete concavity, even symmetry, and non-increase on [0, 1] of
/// radius samples on an equally spaced grid over [−1, 1].
pub fn check_radial_function(samples: &[f64]) -> Result<RadialCheckReport> {
    let n = samples.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::invalid("need an odd number (≥3) of samples over [−1, 1]"));
    }
    let mut rep = RadialCheckReport {
        concavity_violation: 0.0,
        evenness_violation: 0.0,
        monotonicity_violation: 0.0,
    };
    for i in 1..n - 1 {
        let second = samples[i + 1] - 2.0 * samples[i] + samples[i - 1];
        rep.concavity_violation = rep.concavity_violation.max(second);
    }
    for i in 0..n {
        rep.evenness_violation = rep.evenness_violation.max((samples[i] - samples[n - 1 - i]).abs());
    }
    let mid = n / 2;
    for i in mid..n - 1 {
        rep.monotonicity_violation = rep.monotonicity_violation.max(samples[i + 1] - samples[i]);
    }
    Ok(rep)
}

/// The alternating corner polygon built over a profile, with the diagnostic
/// points used by the covering proof.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverPolygon {
    pub k: usize,
    pub delta: f64,
    /// ω(δ) = 4δ + √δ
    pub omega: f64,
    pub sharp_top: bool,
    /// P₀ … P_k
    pub p: Vec<[f64; 2]>,
    /// R₀ … R_{k−1}
    pub r: Vec<[f64; 2]>,
    /// Q₀ … Q_{k−1} (x-coordinates from the closed forms)
    pub q: Vec<[f64; 2]>,
    /// T₂ … T_k, stored with their level index
    pub t: Vec<(usize, [f64; 2])>,
    /// sharp-top intersection parameter α (when r₀ = 0)
    pub alpha: Option<f64>,
}

impl CoverPolygon {
    /// The boundary chain P₀, R₀, P₁, …, R_{k−1}, P_k.
    pub fn chain(&self) -> Vec<[f64; 2]> {
        let mut out = Vec::with_capacity(2 * self.k + 1);
        for i in 0..self.k {
            out.push(self.p[i]);
            out.push(self.r[i]);
        }
        out.push(self.p[self.k]);
        out
    }
}

pub fn omega_of(delta: f64) -> f64 {
    4.0 * delta + delta.sqrt()
}

fn line_intersect(a1: [f64; 2], a2: [f64; 2], b1: [f64; 2], b2: [f64; 2]) -> Option<[f64; 2]> {
    let d1 = [a2[0] - a1[0], a2[1] - a1[1]];
    let d2 = [b2[0] - b1[0], b2[1] - b1[1]];
    let det = d1[0] * d2[1] - d1[1] * d2[0];
    let scale = (d1[0].abs() + d1[1].abs()) * (d2[0].abs() + d2[1].abs());
    if det.abs() <= 1e-14 * scale.max(1e-300) {
        return None;
    }
    let rhs = [b1[0] - a1[0], b1[1] - a1[1]];
    let t = (rhs[0] * d2[1] - rhs[1] * d2[0]) / det;
    Some([a1[0] + t * d1[0], a1[1] + t * d1[1]])
}

pub fn build_polygon(profile: &RadialProfile) -> Result<CoverPolygon> {
    let k = profile.k;
    let delta = profile.delta();
    if !(delta < 0.25) {
        return Err(Error::invalid("polygon construction needs δ < 1/4"));
    }
    let r = &profile.radii;
    let y = |i: usize| profile.height(i);

    let mut p = Vec::with_capacity(k + 1);
    p.push([0.0, 1.0]);
    for i in 1..=k {
        p.push([(1.0 + delta) * r[i], y(i)]);
    }

    let mut corners: Vec<Option<[f64; 2]>> = vec![None; k];
    let mut degenerate = Vec::new();
    // R_i for 1 ≤ i ≤ k−2
    for i in 1..=k.saturating_sub(2) {
        let line_a = ([r[i - 1], y(i - 1)], p[i]);
        let line_b = (p[i + 1], [r[i + 2], y(i + 2)]);
        match line_intersect(line_a.0, line_a.1, line_b.0, line_b.1) {
            Some(pt) => corners[i] = Some(pt),
            None => degenerate.push(i),
        }
    }
    // R_{k−1}: reflected last chord against the previous edge line
    {
        let line_a = ([r[k - 1], -delta], [1.0 + delta, 0.0]);
        let line_b = ([r[k - 2], 2.0 * delta], p[k - 1]);
        match line_intersect(line_a.0, line_a.1, line_b.0, line_b.1) {
            Some(pt) => corners[k - 1] = Some(pt),
            None => degenerate.push(k - 1),
        }
    }
    // R₀ by the flat-top / sharp-top dispatch
    let mut alpha = None;
    if profile.flat_top {
        let line_a = (p[1], [r[2], y(2)]);
        match line_intersect(line_a.0, line_a.1, [0.0, 1.0], [1.0, 1.0]) {
            Some(pt) => corners[0] = Some(pt),
            None => degenerate.push(0),
        }
    } else {
        let line_a = ([-r[1], y(1)], [0.0, 1.0]);
        let line_b = ([1.0, 0.0], p[1]);
        match line_intersect(line_a.0, line_a.1, line_b.0, line_b.1) {
            Some(pt) => corners[0] = Some(pt),
            None => degenerate.push(0),
        }
        let a = ((1.0 + delta) * r[1] - delta) / ((1.0 - 2.0 * delta - delta * delta) * r[1] + delta);
        alpha = Some(a);
    }
    if !degenerate.is_empty() {
        return Err(Error::InvalidBody(format!("degenerate line intersections at corners {degenerate:?}")));
    }

    // diagnostic points from the closed forms
    let mut q = Vec::with_capacity(k);
    for i in 1..=k - 1 {
        let x = r[i - 1] + 2.0 * delta * r[i] + (profile.ell(i) - profile.ell(i + 1));
        q.push([x, y(i - 1)]);
    }
    q.push([2.0 + 2.0 * delta - r[k - 1], delta]);
    let mut t = Vec::with_capacity(k - 1);
    for i in 2..=k {
        let x = r[i] + 2.0 * delta * r[i - 1] + (profile.ell(i - 1) - profile.ell(i));
        t.push((i, [x, y(i)]));
    }

    Ok(CoverPolygon {
        k,
        delta,
        omega: omega_of(delta),
        sharp_top: !profile.flat_top,
        p,
        r: corners.into_iter().map(|c| c.unwrap()).collect(),
        q,
        t,
        alpha,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub index: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

impl Clause {
    fn geq(name: &str, index: Option<usize>, lhs: f64, rhs: f64) -> Self {
        Clause { name: name.into(), index, lhs, rhs, ok: lhs >= rhs - 1e-9 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub x: f64,
    pub y: f64,
    pub gauge: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContainmentCertificate {
    pub passed: bool,
    pub k: usize,
    pub delta: f64,
    pub omega: f64,
    pub vertex_max_gauge: f64,
    pub boundary_max_gauge: f64,
    pub boundary_samples: usize,
    pub clauses: Vec<Clause>,
    pub counterexamples: Vec<Counterexample>,
}

/// Certifies `C ⊆ (1+ω(δ))A`: exact vertex checks (the gauge is convex, so
/// vertex checks certify the whole polygon), dense boundary sampling as an
/// independent oracle, and the proof's inequality clauses.
pub fn verify_containment(
    cover: &CoverPolygon,
    profile: &RadialProfile,
    boundary_samples: usize,
) -> Result<ContainmentCertificate> {
    let body = profile.body.as_ref().ok_or_else(|| Error::invalid("profile carries no body oracle"))?;
    let k = cover.k;
    let delta = cover.delta;
    let omega = cover.omega;
    let budget = 1.0 + omega + 1e-9;
    let mut counterexamples = Vec::new();

    let mut vertex_max: f64 = 0.0;
    for pt in cover.p.iter().chain(cover.r.iter()) {
        let g = body.eval(pt[0], pt[1]);
        vertex_max = vertex_max.max(g);
        if g > budget {
            counterexamples.push(Counterexample { x: pt[0], y: pt[1], gauge: g });
        }
    }

    let chain = cover.chain();
    let per_segment = (boundary_samples / chain.len().max(1)).max(2);
    let mut boundary_max: f64 = 0.0;
    let mut sampled = 0usize;
    for seg in chain.windows(2) {
        for s in 0..=per_segment {
            let t = s as f64 / per_segment as f64;
            let x = seg[0][0] + t * (seg[1][0] - seg[0][0]);
            let y = seg[0][1] + t * (seg[1][1] - seg[0][1]);
            let g = body.eval(x, y);
            sampled += 1;
            boundary_max = boundary_max.max(g);
            if g > budget {
                counterexamples.push(Counterexample { x, y, gauge: g });
            }
        }
    }

    let mut clauses = Vec::new();
    let r = &profile.radii;
    let i_min = (((k as f64).sqrt() + 1.0).ceil() as usize).max(2);
    for i in i_min..=k - 1 {
        let rhs = r[i - 1] + 2.0 * delta * r[i] + (profile.ell(i) - profile.ell(i + 1));
        clauses.push(Clause::geq("horizontal-stretch-B", Some(i), (1.0 + omega) * r[i - 1], rhs));
    }
    for i in i_min..=k {
        let rhs = r[i] + 2.0 * delta * r[i - 1] + (profile.ell(i - 1) - profile.ell(i));
        clauses.push(Clause::geq("horizontal-stretch-T", Some(i), (1.0 + omega) * r[i], rhs));
    }
    clauses.push(Clause::geq(
        "last-corner",
        Some(k - 1),
        (1.0 + omega) * r[k - 1],
        2.0 + 2.0 * delta - r[k - 1],
    ));
    let mut i = 1usize;
    while (i as f64 - 1.0) < (k as f64).sqrt() && i <= k {
        clauses.push(Clause::geq(
            "lift",
            Some(i),
            (1.0 + omega) * (1.0 - i as f64 * delta),
            1.0 - (i as f64 - 1.0) * delta,
        ));
        i += 1;
    }
    for i in 1..=k - 1 {
        let rhs = r[i - 1] + 2.0 * delta * r[i] + (profile.ell(i) - profile.ell(i + 1));
        clauses.push(Clause::geq("convexity-step", Some(i), (1.0 + 4.0 * delta) * r[i], rhs));
    }
    if cover.sharp_top {
        let r0 = cover.r[0];
        clauses.push(Clause::geq("sharp-top-x", Some(0), (1.0 + omega) * r[1], r0[0]));
        clauses.push(Clause::geq("sharp-top-y", Some(0), (1.0 + omega) * (1.0 - delta), r0[1]));
        let alpha = cover.alpha.expect("sharp top stores alpha");
        // two-case analysis of the narrow inequality
        if (3.0 + delta) * r[1] <= 2.0 {
            clauses.push(Clause { name: "narrow-case-I".into(), index: None, lhs: 0.0, rhs: (3.0 + delta) * r[1] - 2.0, ok: true });
        } else {
            let frac = delta * ((3.0 + delta) * r[1] - 2.0) / ((1.0 - 2.0 * delta - delta * delta) * r[1] + delta);
            let upper = delta * (3.0 + 4.0 * delta + delta * delta) / (2.0 - delta - delta * delta);
            clauses.push(Clause::geq("narrow-case-II-majorant", None, upper, frac));
            clauses.push(Clause::geq("narrow-case-II-4delta", None, 4.0 * delta, upper));
        }
        clauses.push(Clause::geq("narrow", None, omega, delta * (alpha - 1.0)));
    }

    let passed = counterexamples.is_empty() && clauses.iter().all(|c| c.ok);
    Ok(ContainmentCertificate {
        passed,
        k,
        delta,
        omega,
        vertex_max_gauge: vertex_max,
        boundary_max_gauge: boundary_max,
        boundary_samples: sampled,
        clauses,
        counterexamples,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalCheck {
    pub level: usize,
    pub quadrant: usize,
    pub crossed: bool,
    pub crossing_x: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalBodyCertificate {
    pub hypothesis_ok: bool,
    pub intervals: Vec<IntervalCheck>,
    pub contains_profile_body: bool,
    pub anchors_ok: bool,
    pub failed_interval: Option<(usize, usize)>,
    pub boundary_max_gauge: f64,
    pub passed: bool,
    /// informational: whether level k satisfies the interval hypothesis
    pub level_k_crossed: bool,
}

/// Certifies that a convex 0-symmetric domain `H` which contains `A`, whose
/// boundary meets every bracket interval `[(rᵢ, 1−iδ), ((1+δ)rᵢ, 1−iδ)]`,
/// and whose horizontal extent at height 0 stays within `1+δ`, is inside
/// `(1+ω(δ))A`. The hypothesis clauses are recorded level by level; the
/// conclusion is certified by dense boundary sampling.
pub fn verify_interval_body(
    h_gauge: &dyn Fn(f64, f64) -> f64,
    profile: &RadialProfile,
    boundary_samples: usize,
) -> Result<IntervalBodyCertificate> {
    let body = profile.body.as_ref().ok_or_else(|| Error::invalid("profile carries no body oracle"))?;
    let k = profile.k;
    let delta = profile.delta();
    let omega = omega_of(delta);

    // anchors: the four normalization points belong to H, and H does not
    // spill past the polygon's last vertex on the x-axis
    let mut anchors_ok = true;
    for (x, y) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
        if h_gauge(x, y) > 1.0 + 1e-9 {
            anchors_ok = false;
        }
    }
    if h_gauge(1.0 + delta, 0.0) < 1.0 - 1e-9 || h_gauge(0.0, 1.0 + delta) < 1.0 - 1e-9 {
        anchors_ok = false;
    }

    // containment of A in H, sampled on A's boundary
    let mut contains = true;
    for s in 0..512 {
        let th = std::f64::consts::TAU * s as f64 / 512.0;
        let g = body.eval(th.cos(), th.sin());
        let (x, y) = (th.cos() / g, th.sin() / g);
        if h_gauge(x, y) > 1.0 + 1e-9 {
            contains = false;
        }
    }

    // bracket intervals level by level, all four reflections
    let mut intervals = Vec::new();
    let mut failed_interval = None;
    for i in 1..=k - 1 {
        let y = profile.height(i);
        let r_i = profile.radii[i];
        for (quadrant, (sx, sy)) in [(0usize, (1.0, 1.0)), (1, (-1.0, 1.0)), (2, (-1.0, -1.0)), (3, (1.0, -1.0))] {
            let (x0, x1) = (sx * r_i, sx * (1.0 + delta) * r_i);
            let (g0, g1) = (h_gauge(x0, sy * y), h_gauge(x1, sy * y));
            let crossed = g0 <= 1.0 + 1e-9 && g1 >= 1.0 - 1e-9;
            let crossing_x = if crossed {
                // bisection on the gauge along the interval
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let x = x0 + mid * (x1 - x0);
                    if h_gauge(x, sy * y) <= 1.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Some(x0 + 0.5 * (lo + hi) * (x1 - x0))
            } else {
                None
            };
            if !crossed && failed_interval.is_none() {
                failed_interval = Some((i, quadrant));
            }
            intervals.push(IntervalCheck { level: i, quadrant, crossed, crossing_x });
        }
    }
    if let Some((level, quadrant)) = failed_interval {
        return Err(Error::InvalidBody(format!(
            "interval hypothesis fails at level {level}, quadrant {quadrant}"
        )));
    }
    if !contains {
        return Err(Error::InvalidBody("H does not contain the reference body".into()));
    }
    if !anchors_ok {
        return Err(Error::InvalidBody("H violates the anchor conditions".into()));
    }
    let hypothesis_ok = true;

    // informational level-k status
    let level_k_crossed = {
        let (g0, g1) = (h_gauge(1.0, 0.0), h_gauge(1.0 + delta, 0.0));
        g0 <= 1.0 + 1e-9 && g1 >= 1.0 - 1e-9
    };

    // conclusion: H's boundary inside (1+ω)A
    let mut boundary_max: f64 = 0.0;
    for s in 0..boundary_samples {
        let th = std::f64::consts::TAU * s as f64 / boundary_samples as f64;
        let g = h_gauge(th.cos(), th.sin());
        let (x, y) = (th.cos() / g, th.sin() / g);
        boundary_max = boundary_max.max(body.eval(x, y));
    }
    let passed = hypothesis_ok && boundary_max <= 1.0 + omega + 1e-9;

    Ok(IntervalBodyCertificate {
        hypothesis_ok,
        intervals,
        contains_profile_body: contains,
        anchors_ok,
        failed_interval,
        boundary_max_gauge: boundary_max,
        passed,
        level_k_crossed,
    })
}

/// Two-dimensional section comparison: treats the section `{|x| ≤ r(y)}`
/// described by `d_profile` as the reference body and the other section as
/// `H`. The caller iterates over section directions.
pub fn section_check(
    d_profile: &RadialProfile,
    h_gauge: &dyn Fn(f64, f64) -> f64,
    boundary_samples: usize,
) -> Result<IntervalBodyCertificate> {
    // even extension of the radial function over [−1, 1]: must be concave,
    // even, and non-increasing on [0, 1]
    let k = d_profile.k;
    let even_samples: Vec<f64> = (0..=2 * k).map(|j| d_profile.radii[j.min(2 * k - j)]).collect();
    let rep = check_radial_function(&even_samples)?;
    if !rep.passed(1e-9) {
        return Err(Error::InvalidBody(format!(
            "section radial function fails concavity/evenness: {rep:?}"
        )));
    }
    verify_interval_body(h_gauge, d_profile, boundary_samples)
}
