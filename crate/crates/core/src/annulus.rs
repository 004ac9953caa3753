//! Radius schedules, annulus charts, and the glued piecewise embedding Φ of a
//! finite point set into the block model space, with the three-case
//! distortion bound calculators.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bending::{BendingMap, BendingParams, MAX_FINITE_LN};
use crate::error::{Error, Result};
use crate::harness::{pairwise_distortion, DistortionReport, PairMode};
use crate::linalg::{norm2, sub};
use crate::model_space::{BlockPair, ModelSpace, ModelVector};
use crate::norms2d::UncondNorm2;

/// Distortion brackets for the three pair configurations, plus the global
/// quotient (max upper over min lower).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CaseBounds {
    pub case1: (f64, f64),
    pub case2: (f64, f64),
    pub case3: (f64, f64),
    pub case3_quotient: f64,
    pub overall_quotient: f64,
}

/// Bracket calculators for within-odd-chart, within-even-chart, and
/// cross-annulus pairs.
pub fn case_bounds(psi: f64, gamma: f64, zeta: f64, d: u32, eps: f64) -> Result<CaseBounds> {
    if !(psi > 0.0 && psi < 1.0) {
        return Err(Error::invalid(format!("ψ must lie in (0,1), got {psi}")));
    }
    if !(0.0..1.0).contains(&gamma) || !(0.0..1.0).contains(&zeta) {
        return Err(Error::invalid("γ and ζ must lie in [0,1)"));
    }
    if d < 1 {
        return Err(Error::invalid("d must be a positive integer"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("ε must lie in (0,1), got {eps}")));
    }
    let k = (1.0 + zeta) * (1.0 + gamma) * (1.0 + gamma);
    let q = eps / d as f64;
    let case1 = ((1.0 - psi) / k, 1.0 + psi);
    let case2 = ((1.0 - psi) / (1.0 + gamma), 1.0 + psi);
    let case3_lo = (1.0 / (1.0 + q)) * (1.0 / k - q);
    if case3_lo <= 0.0 {
        return Err(Error::invalid(format!(
            "Case-3 lower bound nonpositive (1/K − ε/d = {}); decrease ε/d or γ, ζ",
            1.0 / k - q
        )));
    }
    let case3 = (case3_lo, (1.0 + q) / (1.0 - q));
    let upper = case1.1.max(case2.1).max(case3.1);
    let lower = case1.0.min(case2.0).min(case3.0);
    Ok(CaseBounds {
        case1,
        case2,
        case3,
        case3_quotient: case3.1 / case3.0,
        overall_quotient: upper / lower,
    })
}

/// Parameter bundle for a target distortion 1+ε.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamSet {
    pub eps: f64,
    pub gamma: f64,
    pub psi: f64,
    pub zeta: f64,
    pub d: u32,
    /// γᵢ = ln(1+γ)/2ⁱ so that Π(1+γᵢ) < 1+γ.
    pub gamma_seq: Vec<f64>,
}

impl ParamSet {
    pub fn new(eps: f64, gamma: f64, psi: f64, zeta: f64, d: u32) -> Result<Self> {
        let bounds = case_bounds(psi, gamma, zeta, d, eps)?;
        if bounds.overall_quotient > 1.0 + eps + 1e-12 {
            return Err(Error::invalid(format!(
                "case-bound quotient {} exceeds 1+ε = {}",
                bounds.overall_quotient,
                1.0 + eps
            )));
        }
        let gamma_seq: Vec<f64> = (1..=48).map(|i| (1.0 + gamma).ln() / (1u64 << i) as f64).collect();
        if gamma > 0.0 {
            let product: f64 = gamma_seq.iter().map(|g| 1.0 + g).product();
            if product >= 1.0 + gamma {
                return Err(Error::InternalConsistency("γᵢ product constraint violated".into()));
            }
        }
        Ok(ParamSet { eps, gamma, psi, zeta, d, gamma_seq })
    }

    pub fn bounds(&self) -> CaseBounds {
        case_bounds(self.psi, self.gamma, self.zeta, self.d, self.eps).expect("validated at construction")
    }
}

/// Smallest-d, largest-ψ parameters whose case-bound quotient stays below
/// 1+ε, with the Case-1/2 brackets nested inside the Case-3 bracket so the
/// Case-3 quotient is the global bound. Deterministic bisection.
pub fn choose_parameters(eps: f64) -> Result<ParamSet> {
    choose_parameters_with(eps, 0.0, 0.0)
}

pub fn choose_parameters_with(eps: f64, gamma: f64, zeta: f64) -> Result<ParamSet> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("target ε must lie in (0,1), got {eps}")));
    }
    let feasible = |psi: f64, d: u32| -> bool {
        match case_bounds(psi, gamma, zeta, d, eps) {
            Ok(b) => {
                let nested = b.case1.1 <= b.case3.1
                    && b.case2.1 <= b.case3.1
                    && b.case1.0 >= b.case3.0
                    && b.case2.0 >= b.case3.0;
                nested && b.overall_quotient <= 1.0 + eps
            }
            Err(_) => false,
        }
    };
    let mut d = 1u32;
    let probe = 1e-9;
    while d < 1_000_000_000 && !feasible(probe, d) {
        d += 1;
    }
    if !feasible(probe, d) {
        return Err(Error::invalid("no feasible d for the requested ε, γ, ζ"));
    }
    let mut lo = probe;
    let mut hi = 1.0 - 1e-12;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid, d) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ParamSet::new(eps, gamma, lo, zeta, d)
}

/// The recursive radius ladder. Radii are carried as logarithms; linear
/// values are exposed where representable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadiusSchedule {
    /// ln R₁, ln R₂, ...; R₁ = 1.
    pub ln_radii: Vec<f64>,
    pub psi: f64,
    pub eps: f64,
    pub d: u32,
    /// constant in rule (ii); 4 certifies every combiner, the exact c_Z
    /// tightens the ladder.
    pub curve_constant: f64,
}

/// `(ψ/c)·ln(R_{2i}/R_{2i−1}) = π/2` and `R_{2i+1}/R_{2i} = d/ε`, from R₁ = 1.
pub fn build_schedule(psi: f64, eps: f64, d: u32, count: usize) -> Result<RadiusSchedule> {
    build_schedule_with_constant(psi, eps, d, count, 4.0)
}

pub fn build_schedule_with_constant(psi: f64, eps: f64, d: u32, count: usize, c: f64) -> Result<RadiusSchedule> {
    if !(psi > 0.0 && psi < 1.0) || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("ψ and ε must lie in (0,1)"));
    }
    if d < 1 || count < 2 {
        return Err(Error::invalid("need d ≥ 1 and at least two radii"));
    }
    if !(2.0 / PI..=4.0).contains(&c) {
        return Err(Error::invalid("curve constant must lie in [2/π, 4]"));
    }
    let mut s = RadiusSchedule { ln_radii: vec![0.0], psi, eps, d, curve_constant: c };
    while s.ln_radii.len() < count {
        s.push_next();
    }
    Ok(s)
}

impl RadiusSchedule {
    fn push_next(&mut self) {
        let m = self.ln_radii.len(); // next index is m+1 (1-based)
        let last = *self.ln_radii.last().unwrap();
        let next = if (m + 1).is_multiple_of(2) {
            // even index: spiral stage
            last + self.curve_constant * PI / (2.0 * self.psi)
        } else {
            // odd index: gap stage
            last + (self.d as f64 / self.eps).ln()
        };
        self.ln_radii.push(next);
    }

    /// ln Rᵢ for 1-based i; R₀ = 0 is represented as −∞.
    pub fn ln_radius(&self, i: usize) -> f64 {
        if i == 0 {
            f64::NEG_INFINITY
        } else {
            self.ln_radii[i - 1]
        }
    }

    /// Linear radii where representable.
    pub fn linear_radii(&self) -> Vec<Option<f64>> {
        self.ln_radii
            .iter()
            .map(|&ln| if ln <= MAX_FINITE_LN { Some(ln.exp()) } else { None })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.ln_radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_radii.is_empty()
    }

    /// Grows the ladder until chart coverage exists for the given ln-norm.
    pub fn extend_to_cover(&mut self, ln_norm: f64) {
        loop {
            let c = self.smallest_chart(ln_norm);
            // the chart's bending needs R_{2c}; overlap probing needs R_{2c+1}
            if let Some(c) = c {
                if 2 * c < self.len() {
                    return;
                }
            }
            self.push_next();
        }
    }

    fn smallest_chart(&self, ln_norm: f64) -> Option<usize> {
        let mut c = 1usize;
        while 2 * c < self.len() {
            if ln_norm <= self.ln_radius(2 * c + 1) {
                return Some(c);
            }
            c += 1;
        }
        None
    }

    /// Rescales every radius by λ (breaks the R₁ = 1 normalization; used to
    /// exercise the homogeneity of the pipeline).
    pub fn scale(&mut self, lambda: f64) {
        let shift = lambda.ln();
        for ln in &mut self.ln_radii {
            *ln += shift;
        }
    }

    /// All chart ids whose closed annulus `[R_{2c−2}, R_{2c+1}]` contains the
    /// given norm; one chart interior, two on overlaps.
    pub fn assign_annuli(&self, norm: f64) -> Result<Vec<usize>> {
        if !(norm >= 0.0) || !norm.is_finite() {
            return Err(Error::invalid(format!("point norm must be finite and nonnegative, got {norm}")));
        }
        let ln_norm = if norm == 0.0 { f64::NEG_INFINITY } else { norm.ln() };
        let Some(c) = self.smallest_chart(ln_norm) else {
            return Err(Error::ScheduleTooShort {
                needed_ln: ln_norm,
                have_ln: *self.ln_radii.last().unwrap(),
            });
        };
        let mut charts = vec![c];
        if ln_norm >= self.ln_radius(2 * c) {
            charts.push(c + 1);
        }
        Ok(charts)
    }

    /// The bending used by chart `c` (parameters `(R_{2c−1}, R_{2c})`).
    pub fn chart_bending(&self, c: usize, zs: &[UncondNorm2], dim: usize) -> Result<BendingMap> {
        if c < 1 || 2 * c > self.len() {
            return Err(Error::ScheduleTooShort {
                needed_ln: f64::NAN,
                have_ln: *self.ln_radii.last().unwrap(),
            });
        }
        let z = if c % 2 == 1 {
            let pair = c.div_ceil(2);
            zs[(pair - 1) % zs.len()].clone()
        } else {
            UncondNorm2::l2()
        };
        let params = BendingParams::from_ln_inner_radius(self.psi, self.ln_radius(2 * c - 1), self.curve_constant, z, dim)?;
        debug_assert!((params.ln_big_r - self.ln_radius(2 * c)).abs() < 1e-9 * (1.0 + params.ln_big_r.abs()));
        Ok(BendingMap::new(params))
    }
}

/// A finite point set in ℝⁿ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointCloud {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub contains_origin: bool,
}

impl PointCloud {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: PointCloud = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::invalid("cloud dimension must be positive"));
        }
        if self.points.len() < 2 {
            return Err(Error::invalid("cloud needs at least two points"));
        }
        for p in &self.points {
            if p.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: p.len() });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("cloud points must be finite"));
            }
        }
        if self.contains_origin && !self.points.iter().any(|p| p.iter().all(|x| *x == 0.0)) {
            return Err(Error::invalid("contains_origin set but 0 is not a member"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub point_count: usize,
    pub max_chart: usize,
    pub charts: Vec<Vec<usize>>,
    /// translation applied to bring the closest point to the origin
    pub translation: Option<Vec<f64>>,
    pub overlap_consistent: bool,
    pub measured: DistortionReport,
    pub theoretical_bound: f64,
    pub case3_quotient: f64,
}

pub struct EmbedOutcome {
    pub model: ModelSpace,
    pub images: Vec<ModelVector>,
    pub report: EmbeddingReport,
}

/// Embeds a finite cloud through the chart bendings into the block model
/// with blocks of the full ambient dimension. The schedule is extended in
/// place until it covers the cloud.
pub fn embed_cloud(
    cloud: &PointCloud,
    schedule: &mut RadiusSchedule,
    zs: &[UncondNorm2],
    seed: u64,
) -> Result<EmbedOutcome> {
    embed_impl(cloud, schedule, zs, seed, false)
}

/// Same pipeline with per-pair blocks shrunk to the rank of the points
/// inside the pair's reference ball (column-pivoted span bases). Images are
/// expressed in those orthonormal bases, so all norms and distances match
/// the full embedding.
pub fn embed_cloud_compact(
    cloud: &PointCloud,
    schedule: &mut RadiusSchedule,
    zs: &[UncondNorm2],
    seed: u64,
) -> Result<EmbedOutcome> {
    embed_impl(cloud, schedule, zs, seed, true)
}

fn embed_impl(
    cloud: &PointCloud,
    schedule: &mut RadiusSchedule,
    zs: &[UncondNorm2],
    seed: u64,
    compact: bool,
) -> Result<EmbedOutcome> {
    cloud.validate()?;
    if zs.is_empty() {
        return Err(Error::invalid("need at least one combiner norm"));
    }

    // translate so that 0 ∈ cloud, recording the shift
    let mut points = cloud.points.clone();
    let mut translation = None;
    if !cloud.contains_origin {
        let closest = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, norm2(p)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)))
            .map(|(i, _)| i)
            .unwrap();
        let shift = points[closest].clone();
        if shift.iter().any(|x| *x != 0.0) {
            for p in &mut points {
                for (pi, si) in p.iter_mut().zip(&shift) {
                    *pi -= si;
                }
            }
            translation = Some(shift);
        }
    }

    let norms: Vec<f64> = points.iter().map(|p| norm2(p)).collect();
    let max_norm = norms.iter().cloned().fold(0.0f64, f64::max);
    schedule.extend_to_cover(if max_norm == 0.0 { 0.0 } else { max_norm.ln() });

    let mut charts_per_point = Vec::with_capacity(points.len());
    let mut max_chart = 0usize;
    for n in &norms {
        let charts = schedule.assign_annuli(*n)?;
        max_chart = max_chart.max(*charts.last().unwrap());
        charts_per_point.push(charts);
    }

    let pair_count = (max_chart + 2) / 2;

    // per-pair bases: either the raw coordinate frame, or the span of the
    // points inside the pair's reference ball (blocks shrink to its rank)
    let bases: Option<Vec<Vec<Vec<f64>>>> = if compact {
        while schedule.len() < 4 * pair_count {
            schedule.push_next();
        }
        let mut bases = Vec::with_capacity(pair_count);
        for i in 1..=pair_count {
            let ball_ln = schedule.ln_radius(4 * i);
            let inside: Vec<Vec<f64>> = points
                .iter()
                .zip(&norms)
                .filter(|(_, n)| **n == 0.0 || n.ln() <= ball_ln)
                .map(|(p, _)| p.clone())
                .collect();
            bases.push(crate::linalg::pivoted_span_basis(&inside, 1e-12));
        }
        Some(bases)
    } else {
        None
    };
    let block_dim = |pair: usize| -> usize {
        match &bases {
            Some(b) => b[pair - 1].len(),
            None => cloud.dim,
        }
    };
    let pairs: Vec<BlockPair> = (1..=pair_count)
        .map(|i| BlockPair { dim: block_dim(i), z: zs[(i - 1) % zs.len()].clone() })
        .collect();
    let model = ModelSpace::new(pairs);

    let mut bendings = Vec::with_capacity(max_chart);
    for c in 1..=max_chart {
        bendings.push(schedule.chart_bending(c, zs, cloud.dim)?);
    }

    // block j (1-based) belongs to pair (j+1)/2; express a raw component in
    // that pair's basis when compact
    let block_coords = |j: usize, raw: Vec<f64>| -> Vec<f64> {
        match &bases {
            Some(b) => b[j.div_ceil(2) - 1].iter().map(|q| crate::linalg::dot(&raw, q)).collect(),
            None => raw,
        }
    };

    let mut images: Vec<ModelVector> = Vec::with_capacity(points.len());
    for (p, charts) in points.iter().zip(&charts_per_point) {
        let place = |c: usize| -> Result<ModelVector> {
            let (a, b) = bendings[c - 1].apply(p)?;
            let mut v = model.zero_vector();
            v[c - 1] = block_coords(c, a);
            v[c] = block_coords(c + 1, b);
            Ok(v)
        };
        let img = place(charts[0])?;
        if charts.len() == 2 {
            let other = place(charts[1])?;
            let dev = model.diff_norm(&img, &other)?;
            let scale = model.norm(&img)?.max(1.0);
            if dev > 1e-12 * scale {
                return Err(Error::InternalConsistency(format!(
                    "charts {} and {} disagree by {dev} on an overlap point",
                    charts[0], charts[1]
                )));
            }
        }
        images.push(img);
    }
    let overlap_consistent = true;

    let bounds = case_bounds(schedule.psi, 0.0, 0.0, schedule.d, schedule.eps)?;
    let measured = pairwise_distortion(
        points.len(),
        |i, j| norm2(&sub(&points[i], &points[j])),
        |i, j| model.diff_norm(&images[i], &images[j]).expect("shapes validated"),
        PairMode::Auto { seed },
    )?;

    let report = EmbeddingReport {
        point_count: points.len(),
        max_chart,
        charts: charts_per_point,
        translation,
        overlap_consistent,
        measured,
        theoretical_bound: bounds.overall_quotient,
        case3_quotient: bounds.case3_quotient,
    };
    Ok(EmbedOutcome { model, images, report })
}
