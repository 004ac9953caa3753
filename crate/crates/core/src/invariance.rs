//! ε-invariance measurement for two-summand norms, symmetrization,
//! extraction of the 1-unconditional combiner, net-transfer bounds, and the
//! iterated dimension calculator.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{gaussian_vector, norm2};
use crate::norms2d::UncondNorm2;

/// Orthogonal operator as a product of Givens rotations, optionally composed
/// with one coordinate reflection (to reach both components of O(n)).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrthogonalOp {
    pub dim: usize,
    pub rotations: Vec<(usize, usize, f64)>,
    pub reflect: bool,
}

impl OrthogonalOp {
    pub fn identity(dim: usize) -> Self {
        OrthogonalOp { dim, rotations: Vec::new(), reflect: false }
    }

    pub fn sample<R: Rng>(rng: &mut R, dim: usize) -> Self {
        let mut rotations = Vec::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                rotations.push((i, j, rng.random_range(0.0..std::f64::consts::TAU)));
            }
        }
        OrthogonalOp { dim, rotations, reflect: rng.random::<bool>() }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.dim);
        let mut out = v.to_vec();
        if self.reflect {
            out[0] = -out[0];
        }
        for &(i, j, theta) in &self.rotations {
            let (s, c) = theta.sin_cos();
            let (vi, vj) = (out[i], out[j]);
            out[i] = c * vi - s * vj;
            out[j] = s * vi + c * vj;
        }
        out
    }
}

type JointNorm = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

/// Two Euclidean summands with a joint norm whose restrictions to each
/// summand are Euclidean.
#[derive(Clone)]
pub struct PairedSpace {
    pub n1: usize,
    pub n2: usize,
    norm: JointNorm,
}

impl PairedSpace {
    pub fn new(n1: usize, n2: usize, f: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static) -> Self {
        PairedSpace { n1, n2, norm: Arc::new(f) }
    }

    /// `‖(y₁,y₂)‖ = Z(‖y₁‖₂, ‖y₂‖₂)`; 0-invariant by construction.
    pub fn direct_sum(n1: usize, n2: usize, z: UncondNorm2) -> Self {
        Self::new(n1, n2, move |a, b| z.eval(norm2(a), norm2(b)))
    }

    pub fn euclidean(n1: usize, n2: usize) -> Self {
        Self::direct_sum(n1, n2, UncondNorm2::l2())
    }

    /// `max{‖y₁‖₂, ‖y₂‖₂, |y₁[0]+y₂[0]|/√2}`: Euclidean on each summand but
    /// not rotation-invariant; the stock positive-defect example.
    pub fn cross_term(n1: usize, n2: usize) -> Self {
        Self::new(n1, n2, |a, b| {
            norm2(a).max(norm2(b)).max((a[0] + b[0]).abs() / std::f64::consts::SQRT_2)
        })
    }

    pub fn norm(&self, y1: &[f64], y2: &[f64]) -> f64 {
        (self.norm)(y1, y2)
    }

    /// Worst deviation of the summand restrictions from the Euclidean norm.
    pub fn restriction_defect(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        let zero1 = vec![0.0; self.n1];
        let zero2 = vec![0.0; self.n2];
        for _ in 0..samples {
            let y1 = gaussian_vector(&mut rng, self.n1);
            let y2 = gaussian_vector(&mut rng, self.n2);
            worst = worst.max((self.norm(&y1, &zero2) - norm2(&y1)).abs());
            worst = worst.max((self.norm(&zero1, &y2) - norm2(&y2)).abs());
        }
        worst
    }
}

impl std::fmt::Debug for PairedSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PairedSpace({}⊕{})", self.n1, self.n2)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvarianceDefect {
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
    pub worst_ratio: f64,
    pub worst_left: OrthogonalOp,
    pub worst_right: OrthogonalOp,
}

/// Monte Carlo estimate of the least ε with
/// `(1−ε)‖y₁+y₂‖ ≤ ‖O₁y₁+O₂y₂‖ ≤ (1+ε)‖y₁+y₂‖`, with angle-wise local
/// refinement of the worst sample.
pub fn invariance_defect(space: &PairedSpace, samples: usize, seed: u64) -> Result<InvarianceDefect> {
    if space.n1 > 6 || space.n2 > 6 {
        return Err(Error::invalid("orthogonal-group sampling budget caps summand dimensions at 6"));
    }
    if samples < 1 {
        return Err(Error::invalid("need samples ≥ 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (0.0f64, 1.0f64, OrthogonalOp::identity(space.n1), OrthogonalOp::identity(space.n2), Vec::new(), Vec::new());
    for _ in 0..samples {
        let y1 = gaussian_vector(&mut rng, space.n1);
        let scale: f64 = rng.random_range(-2.0..2.0);
        let y2: Vec<f64> = gaussian_vector(&mut rng, space.n2).iter().map(|v| v * scale.exp()).collect();
        let base = space.norm(&y1, &y2);
        if base < 1e-12 {
            continue;
        }
        let o1 = OrthogonalOp::sample(&mut rng, space.n1);
        let o2 = OrthogonalOp::sample(&mut rng, space.n2);
        let ratio = space.norm(&o1.apply(&y1), &o2.apply(&y2)) / base;
        let defect = (ratio - 1.0).abs();
        if defect > worst.0 {
            worst = (defect, ratio, o1, o2, y1, y2);
        }
    }
    // local refinement: angle-wise ternary ascent on the worst configuration
    let (mut eps, mut ratio, mut o1, mut o2, y1, y2) = worst;
    if !y1.is_empty() {
        let base = space.norm(&y1, &y2);
        for _round in 0..3 {
            for side in 0..2 {
                let op_len = if side == 0 { o1.rotations.len() } else { o2.rotations.len() };
                for k in 0..op_len {
                    let (best_theta, best_val) = {
                        let eval = |theta: f64| {
                            let mut a = o1.clone();
                            let mut b = o2.clone();
                            if side == 0 {
                                a.rotations[k].2 = theta;
                            } else {
                                b.rotations[k].2 = theta;
                            }
                            let r = space.norm(&a.apply(&y1), &b.apply(&y2)) / base;
                            (r - 1.0).abs()
                        };
                        let center = if side == 0 { o1.rotations[k].2 } else { o2.rotations[k].2 };
                        let (mut lo, mut hi) = (center - 0.4, center + 0.4);
                        for _ in 0..40 {
                            let m1 = lo + (hi - lo) / 3.0;
                            let m2 = hi - (hi - lo) / 3.0;
                            if eval(m1) > eval(m2) {
                                hi = m2;
                            } else {
                                lo = m1;
                            }
                        }
                        let theta = 0.5 * (lo + hi);
                        (theta, eval(theta))
                    };
                    if best_val > eps {
                        if side == 0 {
                            o1.rotations[k].2 = best_theta;
                        } else {
                            o2.rotations[k].2 = best_theta;
                        }
                        eps = best_val;
                        ratio = space.norm(&o1.apply(&y1), &o2.apply(&y2)) / base;
                    }
                }
            }
        }
    }
    Ok(InvarianceDefect { epsilon: eps, samples, seed, worst_ratio: ratio, worst_left: o1, worst_right: o2 })
}

/// `|||y₁+y₂||| = sup ‖O₁y₁+O₂y₂‖` over sampled-and-refined orthogonal
/// pairs. Estimates only grow under sample refinement.
pub fn symmetrize_norm(space: &PairedSpace, y1: &[f64], y2: &[f64], samples: usize, seed: u64) -> Result<f64> {
    if y1.len() != space.n1 || y2.len() != space.n2 {
        return Err(Error::DimensionMismatch { expected: space.n1 + space.n2, got: y1.len() + y2.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = space.norm(y1, y2);
    let mut best_ops = (OrthogonalOp::identity(space.n1), OrthogonalOp::identity(space.n2));
    for _ in 0..samples {
        let o1 = OrthogonalOp::sample(&mut rng, space.n1);
        let o2 = OrthogonalOp::sample(&mut rng, space.n2);
        let v = space.norm(&o1.apply(y1), &o2.apply(y2));
        if v > best {
            best = v;
            best_ops = (o1, o2);
        }
    }
    let (mut o1, mut o2) = best_ops;
    for _round in 0..2 {
        for side in 0..2 {
            let op_len = if side == 0 { o1.rotations.len() } else { o2.rotations.len() };
            for k in 0..op_len {
                let (best_theta, best_val) = {
                    let eval = |theta: f64| {
                        let mut a = o1.clone();
                        let mut b = o2.clone();
                        if side == 0 {
                            a.rotations[k].2 = theta;
                        } else {
                            b.rotations[k].2 = theta;
                        }
                        space.norm(&a.apply(y1), &b.apply(y2))
                    };
                    let center = if side == 0 { o1.rotations[k].2 } else { o2.rotations[k].2 };
                    let (mut lo, mut hi) = (center - 0.4, center + 0.4);
                    for _ in 0..40 {
                        let m1 = lo + (hi - lo) / 3.0;
                        let m2 = hi - (hi - lo) / 3.0;
                        if eval(m1) > eval(m2) {
                            hi = m2;
                        } else {
                            lo = m1;
                        }
                    }
                    let theta = 0.5 * (lo + hi);
                    (theta, eval(theta))
                };
                if best_val > best {
                    best = best_val;
                    if side == 0 {
                        o1.rotations[k].2 = best_theta;
                    } else {
                        o2.rotations[k].2 = best_theta;
                    }
                }
            }
        }
    }
    Ok(best)
}

/// Configuration for combiner extraction.
#[derive(Debug, Clone)]
pub struct ExtractCfg {
    /// defect level accepted as "certified 0-invariant"
    pub tolerance: f64,
    pub defect_samples: usize,
    pub seed: u64,
    /// angle resolution of the tabulated output
    pub resolution: usize,
    pub unit_left: Option<Vec<f64>>,
    pub unit_right: Option<Vec<f64>>,
}

impl Default for ExtractCfg {
    fn default() -> Self {
        ExtractCfg {
            tolerance: 1e-6,
            defect_samples: 2000,
            seed: 0,
            resolution: 32_768,
            unit_left: None,
            unit_right: None,
        }
    }
}

/// Tabulates the 1-unconditional combiner `Z(a₁,a₂) = ‖a₁u₁ + a₂u₂‖` of a
/// rotation-invariant paired norm. Refuses when the measured invariance
/// defect exceeds the tolerance.
pub fn extract_z(space: &PairedSpace, cfg: &ExtractCfg) -> Result<UncondNorm2> {
    let defect = invariance_defect(space, cfg.defect_samples, cfg.seed)?;
    if defect.epsilon > cfg.tolerance {
        return Err(Error::DefectTooLarge { measured: defect.epsilon, tolerance: cfg.tolerance });
    }
    let mut u1 = vec![0.0; space.n1];
    u1[0] = 1.0;
    let mut u2 = vec![0.0; space.n2];
    u2[0] = 1.0;
    let u1 = cfg.unit_left.clone().unwrap_or(u1);
    let u2 = cfg.unit_right.clone().unwrap_or(u2);
    if (norm2(&u1) - 1.0).abs() > 1e-12 || (norm2(&u2) - 1.0).abs() > 1e-12 {
        return Err(Error::invalid("extraction unit vectors must have Euclidean norm 1"));
    }
    let n = cfg.resolution;
    let angles: Vec<f64> = (0..=n).map(|i| i as f64 * std::f64::consts::FRAC_PI_2 / n as f64).collect();
    let radii: Vec<f64> = angles
        .iter()
        .map(|&t| {
            let a: Vec<f64> = u1.iter().map(|v| v * t.cos()).collect();
            let b: Vec<f64> = u2.iter().map(|v| v * t.sin()).collect();
            1.0 / space.norm(&a, &b)
        })
        .collect();
    Ok(UncondNorm2::tabulated(crate::norms2d::RadialTable::new(angles, radii)?))
}

/// The net-to-everywhere transfer bracket
/// `((1−α(1+(2−α)A))², (1+α(1+(2+α)A))²)`.
pub fn net_to_every_bounds(alpha: f64, a: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("α must lie in (0,1), got {alpha}")));
    }
    if !(a >= 1.0) {
        return Err(Error::invalid(format!("projection bound A must be ≥ 1, got {a}")));
    }
    let low_base = 1.0 - alpha * (1.0 + (2.0 - alpha) * a);
    if low_base <= 0.0 {
        return Err(Error::invalid(format!("positivity proviso violated: 1−α(1+(2−α)A) = {low_base}")));
    }
    let high_base = 1.0 + alpha * (1.0 + (2.0 + alpha) * a);
    Ok((low_base * low_base, high_base * high_base))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GordonReport {
    /// value after each iteration, floored
    pub values: Vec<u64>,
    /// first iteration (1-based) whose value dropped below 1
    pub first_below_one: Option<usize>,
}

/// Iterates `g(N, δ) = δ²·ln(σN)/β`, flooring to an integer at each step.
/// σ and β stand in for unspecified universal constants; outputs are
/// schedule-planning estimates, never certified dimensions.
pub fn gordon_dimension(n: u64, delta: f64, sigma: f64, beta: f64, iterations: usize) -> Result<GordonReport> {
    if n < 1 {
        return Err(Error::invalid("N must be ≥ 1"));
    }
    gordon_dimension_ln((n as f64).ln(), delta, sigma, beta, iterations)
}

/// Same iteration with the first argument given as ln N, for ladders like
/// N = e^(2^k) whose linear value is unrepresentable.
pub fn gordon_dimension_ln(ln_n: f64, delta: f64, sigma: f64, beta: f64, iterations: usize) -> Result<GordonReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("δ must lie in (0,1)"));
    }
    if !(sigma > 0.0) || !(beta > 0.0) {
        return Err(Error::invalid("σ and β must be positive"));
    }
    if iterations < 1 {
        return Err(Error::invalid("need at least one iteration"));
    }
    let step_ln = |ln_cur: f64| -> u64 {
        let v = delta * delta * (sigma.ln() + ln_cur) / beta;
        if v < 1.0 {
            if v < 0.0 {
                0
            } else {
                v.floor() as u64
            }
        } else {
            v.floor() as u64
        }
    };
    let mut values = Vec::with_capacity(iterations);
    let mut first_below_one = None;
    let mut cur = step_ln(ln_n);
    values.push(cur);
    if cur < 1 {
        first_below_one = Some(1);
    }
    for it in 2..=iterations {
        if cur < 1 {
            values.push(0);
            continue;
        }
        cur = step_ln((cur as f64).ln());
        values.push(cur);
        if cur < 1 && first_below_one.is_none() {
            first_below_one = Some(it);
        }
    }
    Ok(GordonReport { values, first_below_one })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_ops_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let o = OrthogonalOp::sample(&mut rng, 4);
            let v = gaussian_vector(&mut rng, 4);
            let w = gaussian_vector(&mut rng, 4);
            assert!((norm2(&o.apply(&v)) - norm2(&v)).abs() <= 1e-12 * norm2(&v));
            let lhs = crate::linalg::dot(&o.apply(&v), &o.apply(&w));
            assert!((lhs - crate::linalg::dot(&v, &w)).abs() <= 1e-12 * norm2(&v) * norm2(&w));
        }
    }

    #[test]
    fn direct_sums_are_zero_invariant() {
        for z in [UncondNorm2::l1(), UncondNorm2::lp(1.5).unwrap(), UncondNorm2::l2(), UncondNorm2::linf()] {
            let s = PairedSpace::direct_sum(3, 2, z);
            let d = invariance_defect(&s, 5000, 7).unwrap();
            assert!(d.epsilon <= 1e-10, "defect {}", d.epsilon);
        }
        let s = PairedSpace::euclidean(2, 2);
        let d = invariance_defect(&s, 5000, 7).unwrap();
        assert!(d.epsilon <= 1e-10);
        assert!(invariance_defect(&PairedSpace::euclidean(7, 2), 10, 0).is_err());
    }

    #[test]
    fn cross_term_defect_regression() {
        // analytic supremum: sqrt(2) − 1, attained rotating (e₁,e₁) onto
        // axes where the cross functional vanishes
        let s = PairedSpace::cross_term(2, 2);
        assert!(s.restriction_defect(2000, 1) <= 1e-12);
        let d = invariance_defect(&s, 100_000, 3).unwrap();
        assert!(d.epsilon <= std::f64::consts::SQRT_2 - 1.0 + 1e-9, "defect {}", d.epsilon);
        // regression constant for this seed
        assert!((d.epsilon - 0.409599135).abs() < 1e-6, "defect drifted: {}", d.epsilon);
    }

    #[test]
    fn symmetrize_examples() {
        // 0-invariant input: the orbit is constant
        let s = PairedSpace::direct_sum(2, 2, UncondNorm2::lp(1.5).unwrap());
        let y1 = [0.6, -0.2];
        let y2 = [0.1, 0.9];
        let direct = s.norm(&y1, &y2);
        let sym = symmetrize_norm(&s, &y1, &y2, 500, 11).unwrap();
        assert!((sym - direct).abs() <= 1e-10);
        // (y₁, 0): coincides with the Euclidean norm of y₁
        let sym = symmetrize_norm(&s, &y1, &[0.0, 0.0], 200, 11).unwrap();
        assert!((sym - norm2(&y1)).abs() <= 1e-10);
        // cross-term norm: the orbit supremum has the closed form
        // max(‖y₁‖, ‖y₂‖, (‖y₁‖+‖y₂‖)/√2), attained by rotating both parts
        // onto e₁ with aligned signs
        let s = PairedSpace::cross_term(2, 2);
        let measured = invariance_defect(&s, 100_000, 3).unwrap().epsilon;
        // the Monte Carlo sup underestimates the true defect by at most the
        // refinement gap; 0.006 covers it for this norm (true value √2 − 1)
        let sup_gap = 0.006;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let y1 = gaussian_vector(&mut rng, 2);
            let y2 = gaussian_vector(&mut rng, 2);
            let base = s.norm(&y1, &y2);
            let sym = symmetrize_norm(&s, &y1, &y2, 400, 13).unwrap();
            let (n1, n2) = (norm2(&y1), norm2(&y2));
            let oracle = n1.max(n2).max((n1 + n2) / std::f64::consts::SQRT_2);
            assert!(sym >= base - 1e-12);
            assert!(sym <= oracle * (1.0 + 1e-12), "sym {sym} above oracle {oracle}");
            assert!(sym >= oracle * (1.0 - 1e-3), "sym {sym} below oracle {oracle}");
            // the sandwich of the symmetrized norm against the measured defect
            assert!(sym <= (1.0 + measured + sup_gap) * base, "sym {sym} vs sandwich at base {base}");
        }
    }

    #[test]
    fn symmetrize_monotone_in_samples() {
        let s = PairedSpace::cross_term(2, 2);
        let y1 = [0.3, 0.7];
        let y2 = [-0.5, 0.2];
        let mut prev = 0.0;
        for samples in [10, 50, 250, 1250] {
            let v = symmetrize_norm(&s, &y1, &y2, samples, 21).unwrap();
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn extract_z_recovers_lp() {
        let p = 1.5;
        let s = PairedSpace::direct_sum(3, 3, UncondNorm2::lp(p).unwrap());
        let z = extract_z(&s, &ExtractCfg::default()).unwrap();
        let reference = UncondNorm2::lp(p).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=256 {
            let t = i as f64 * std::f64::consts::FRAC_PI_2 / 256.0;
            worst = worst.max((z.eval(t.cos(), t.sin()) - reference.eval(t.cos(), t.sin())).abs());
        }
        assert!(worst <= 1e-9, "worst deviation {worst}");
        assert!(z.validate(5000, 3).unwrap().worst_violation <= 1e-7);

        let z2 = extract_z(&PairedSpace::euclidean(2, 2), &ExtractCfg::default()).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=256 {
            let t = i as f64 * std::f64::consts::FRAC_PI_2 / 256.0;
            worst = worst.max((z2.eval(t.cos(), t.sin()) - 1.0).abs());
        }
        assert!(worst <= 1e-12);
    }

    #[test]
    fn extract_z_unit_choice_irrelevant() {
        let s = PairedSpace::direct_sum(3, 3, UncondNorm2::lp(2.5).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let cfg_a = ExtractCfg {
            unit_left: Some(crate::linalg::unit_vector(&mut rng, 3)),
            unit_right: Some(crate::linalg::unit_vector(&mut rng, 3)),
            resolution: 4096,
            ..Default::default()
        };
        let cfg_b = ExtractCfg { resolution: 4096, ..Default::default() };
        let za = extract_z(&s, &cfg_a).unwrap();
        let zb = extract_z(&s, &cfg_b).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=200 {
            let t = i as f64 * std::f64::consts::FRAC_PI_2 / 200.0;
            worst = worst.max((za.eval(t.cos(), t.sin()) - zb.eval(t.cos(), t.sin())).abs());
        }
        assert!(worst <= 1e-9, "unit-choice drift {worst}");
    }

    #[test]
    fn extract_z_refuses_noninvariant_input() {
        let s = PairedSpace::cross_term(2, 2);
        match extract_z(&s, &ExtractCfg::default()) {
            Err(Error::DefectTooLarge { measured, .. }) => assert!(measured > 0.1),
            other => panic!("expected DefectTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn net_bounds_examples() {
        let (lo, hi) = net_to_every_bounds(0.01, 1.0).unwrap();
        assert!((lo - 0.94109).abs() < 1e-5);
        assert!((hi - 1.06111).abs() < 1e-5);
        // α → 0 limit
        let (lo, hi) = net_to_every_bounds(1e-9, 1.0).unwrap();
        assert!((lo - 1.0).abs() < 1e-8 && (hi - 1.0).abs() < 1e-8);
        assert!(net_to_every_bounds(0.5, 2.0).is_err());
        assert!(net_to_every_bounds(0.01, 0.5).is_err());
    }

    #[test]
    fn gordon_examples() {
        // δ²·ln N with ln N = 8 gives exactly 2
        let rep = gordon_dimension_ln(8.0, 0.5, 1.0, 1.0, 1).unwrap();
        assert_eq!(rep.values, vec![2]);
        // two iterations from ln N = 32: 8, then floor(0.25·ln 8) = 0
        let rep = gordon_dimension_ln(32.0, 0.5, 1.0, 1.0, 2).unwrap();
        assert_eq!(rep.values, vec![8, 0]);
        assert_eq!(rep.first_below_one, Some(2));
        // count-based entry point
        let rep = gordon_dimension(3000, 0.5, 1.0, 1.0, 1).unwrap();
        assert_eq!(rep.values, vec![2]);
        assert!(gordon_dimension(0, 0.5, 1.0, 1.0, 1).is_err());
    }

    #[test]
    fn gordon_ig_ladder_monotone() {
        // N = e^(2^k), k = 4..20: first-step values grow without bound
        let mut prev = 0;
        for k in 4..=20 {
            let ln_n = (1u64 << k) as f64;
            let rep = gordon_dimension_ln(ln_n, 0.3, 1.0, 1.0, 1).unwrap();
            assert!(rep.values[0] >= prev);
            prev = rep.values[0];
        }
        assert!(prev > 90_000);
    }

    #[test]
    fn net_bracket_covers_full_defect() {
        // Norm with a small controlled defect: interpolate the Euclidean
        // joint norm with the cross-term norm.
        let s_mix = 0.08;
        let space = PairedSpace::new(2, 2, move |a, b| {
            let mut joint = a.to_vec();
            joint.extend_from_slice(b);
            (1.0 - s_mix) * norm2(&joint)
                + s_mix * norm2(a).max(norm2(b)).max((a[0] + b[0]).abs() / std::f64::consts::SQRT_2)
        });
        // circle nets of the summand spheres with known covering radius
        let m = 48usize;
        let net: Vec<[f64; 2]> = (0..m)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / m as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        let covering = 2.0 * (std::f64::consts::PI / (2 * m) as f64).sin();
        // measured closeness on net-pinned configurations (conditions A and B)
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut alpha_net = 0.0f64;
        for _ in 0..40_000 {
            let free = gaussian_vector(&mut rng, 2);
            let dir = net[rng.random_range(0..m)];
            let t: f64 = rng.random_range(0.1..2.0);
            let pinned = [dir[0] * t, dir[1] * t];
            let o = OrthogonalOp::sample(&mut rng, 2);
            // condition A: y₂ pinned to a net multiple, O₁ free
            let base = space.norm(&free, &pinned);
            let turned = space.norm(&o.apply(&free), &pinned);
            alpha_net = alpha_net.max((turned / base - 1.0).abs());
            // condition B: y₁ pinned, O₂ free
            let base = space.norm(&pinned, &free);
            let turned = space.norm(&pinned, &o.apply(&free));
            alpha_net = alpha_net.max((turned / base - 1.0).abs());
        }
        let alpha_eff = covering.max(alpha_net * 1.3);
        let (lo, hi) = net_to_every_bounds(alpha_eff, 1.0).unwrap();
        let full = invariance_defect(&space, 60_000, 9).unwrap().epsilon;
        assert!(1.0 + full <= hi, "1+defect {} vs upper {hi}", 1.0 + full);
        assert!(1.0 - full >= lo, "1−defect {} vs lower {lo}", 1.0 - full);
    }
}
