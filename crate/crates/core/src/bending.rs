//! Bending maps between the two coordinate embeddings of a direct sum.
//!
//! A bending with parameters `(r, R)` is the identity onto the first summand
//! inside the ball of radius `r`, the identity onto the second summand
//! outside the ball of radius `R`, and a logarithmic-spiral interpolation in
//! between: `T x = (c(x)·x, s(x)·x)` with `(c, s) = u(τ(‖x‖))` on the
//! Z-sphere. The radii are tied by `(ε/c)·ln(R/r) = π/2`, which pins the
//! distortion to `[1−ε, 1+ε]`.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm2, unit_vector};
use crate::norms2d::UncondNorm2;

/// Largest ln-value whose exp is a finite f64.
pub const MAX_FINITE_LN: f64 = 709.0;

/// Outer radius in both linear and log form.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OuterRadius {
    pub ln: f64,
    pub linear: Option<f64>,
}

/// `R = r·exp(π·c/(2ε))`, the unique outer radius satisfying
/// `(ε/c)·ln(R/r) = π/2`.
pub fn solve_outer_radius(eps: f64, r: f64, c: f64) -> Result<OuterRadius> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("ε must lie in (0,1), got {eps}")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("inner radius must be positive and finite, got {r}")));
    }
    if !(2.0 / PI..=4.0).contains(&c) {
        return Err(Error::invalid(format!("curve constant must lie in [2/π, 4], got {c}")));
    }
    let ln = r.ln() + PI * c / (2.0 * eps);
    let linear = if ln <= MAX_FINITE_LN { Some(ln.exp()) } else { None };
    Ok(OuterRadius { ln, linear })
}

/// Parameters of a bending: distortion budget, radii, curve constant,
/// combiner, block dimension.
#[derive(Debug, Clone)]
pub struct BendingParams {
    pub eps: f64,
    pub r: Option<f64>,
    pub ln_r: f64,
    pub big_r: Option<f64>,
    pub ln_big_r: f64,
    pub c: f64,
    pub z: UncondNorm2,
    pub dim: usize,
}

impl BendingParams {
    pub fn new(eps: f64, r: f64, c: f64, z: UncondNorm2, dim: usize) -> Result<Self> {
        let outer = solve_outer_radius(eps, r, c)?;
        if dim == 0 {
            return Err(Error::invalid("block dimension must be positive"));
        }
        Ok(BendingParams {
            eps,
            r: Some(r),
            ln_r: r.ln(),
            big_r: outer.linear,
            ln_big_r: outer.ln,
            c,
            z,
            dim,
        })
    }

    /// Same construction with the inner radius given in log form, for radii
    /// beyond the f64 range.
    pub fn from_ln_inner_radius(eps: f64, ln_r: f64, c: f64, z: UncondNorm2, dim: usize) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid(format!("ε must lie in (0,1), got {eps}")));
        }
        if !(2.0 / PI..=4.0).contains(&c) {
            return Err(Error::invalid(format!("curve constant must lie in [2/π, 4], got {c}")));
        }
        if dim == 0 {
            return Err(Error::invalid("block dimension must be positive"));
        }
        let ln_big_r = ln_r + PI * c / (2.0 * eps);
        Ok(BendingParams {
            eps,
            r: if ln_r.abs() <= MAX_FINITE_LN { Some(ln_r.exp()) } else { None },
            ln_r,
            big_r: if ln_big_r <= MAX_FINITE_LN { Some(ln_big_r.exp()) } else { None },
            ln_big_r,
            c,
            z,
            dim,
        })
    }

    /// `τ(t) = (ε/c)·ln(t/r)`, clamped to 0 below `r` and π/2 above `R`.
    pub fn tau(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.tau_ln(t.ln())
    }

    pub fn tau_ln(&self, ln_t: f64) -> f64 {
        if ln_t <= self.ln_r {
            0.0
        } else if ln_t >= self.ln_big_r {
            FRAC_PI_2
        } else {
            ((self.eps / self.c) * (ln_t - self.ln_r)).clamp(0.0, FRAC_PI_2)
        }
    }

    /// The three-regime coefficient pair; always `Z(c, s) = 1`.
    pub fn coefficients_at(&self, t: f64) -> (f64, f64) {
        match self.regime(t) {
            Regime::Inner => (1.0, 0.0),
            Regime::Outer => (0.0, 1.0),
            Regime::Spiral => self.coefficients_at_tau(self.tau(t)),
        }
    }

    pub fn coefficients_at_ln(&self, ln_t: f64) -> (f64, f64) {
        if ln_t <= self.ln_r {
            (1.0, 0.0)
        } else if ln_t >= self.ln_big_r {
            (0.0, 1.0)
        } else {
            self.coefficients_at_tau(self.tau_ln(ln_t))
        }
    }

    fn coefficients_at_tau(&self, tau: f64) -> (f64, f64) {
        let (co, si) = (tau.cos(), tau.sin());
        let z = self.z.eval(co, si);
        (co / z, si / z)
    }

    fn regime(&self, t: f64) -> Regime {
        if let Some(r) = self.r {
            if t <= r {
                return Regime::Inner;
            }
        } else if t.ln() <= self.ln_r {
            return Regime::Inner;
        }
        match self.big_r {
            Some(big) if t >= big => Regime::Outer,
            None if t.ln() >= self.ln_big_r => Regime::Outer,
            _ => Regime::Spiral,
        }
    }
}

enum Regime {
    Inner,
    Spiral,
    Outer,
}

/// The bending map itself.
#[derive(Debug, Clone)]
pub struct BendingMap {
    pub params: BendingParams,
}

impl BendingMap {
    pub fn new(params: BendingParams) -> Self {
        BendingMap { params }
    }

    /// `x ↦ (c(x)·x, s(x)·x)`. The inner and outer regimes copy `x`
    /// verbatim so those branches are bit-exact.
    pub fn apply(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if x.len() != self.params.dim {
            return Err(Error::DimensionMismatch { expected: self.params.dim, got: x.len() });
        }
        let t = norm2(x);
        Ok(match self.params.regime(t) {
            Regime::Inner => (x.to_vec(), vec![0.0; x.len()]),
            Regime::Outer => (vec![0.0; x.len()], x.to_vec()),
            Regime::Spiral => {
                let (c, s) = self.params.coefficients_at(t);
                (x.iter().map(|v| c * v).collect(), x.iter().map(|v| s * v).collect())
            }
        })
    }

    /// Image norm in `Y ⊕_Z Y`.
    pub fn image_norm(&self, pair: &(Vec<f64>, Vec<f64>)) -> f64 {
        self.params.z.eval(norm2(&pair.0), norm2(&pair.1))
    }

    /// Samples point pairs under `law` and measures the distortion of the
    /// map, the stronger coefficient-difference bound, and norm
    /// preservation. All radius arithmetic runs in the log domain, so the
    /// check is valid for arbitrarily large `R`.
    pub fn verify_distortion(&self, pairs: usize, seed: u64, law: &RadialLaw) -> Result<BendVerifyReport> {
        if pairs < 1 {
            return Err(Error::invalid("verify_distortion needs pairs ≥ 1"));
        }
        let p = &self.params;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<PairSample> = (0..pairs)
            .map(|_| PairSample {
                dir_a: unit_vector(&mut rng, p.dim),
                ln_a: law.sample_ln_radius(&mut rng, p),
                dir_b: unit_vector(&mut rng, p.dim),
                ln_b: law.sample_ln_radius(&mut rng, p),
            })
            .collect();

        let evals: Vec<PairEval> = samples
            .par_iter()
            .enumerate()
            .map(|(i, s)| self.eval_pair(i, s))
            .collect();

        let mut min_ratio = f64::INFINITY;
        let mut max_ratio = f64::NEG_INFINITY;
        let mut argmin = 0usize;
        let mut argmax = 0usize;
        let mut str_excess = f64::NEG_INFINITY;
        let mut norm_dev = 0.0f64;
        let mut violations = Vec::new();
        for e in &evals {
            if e.ratio < min_ratio || (e.ratio == min_ratio && e.index < argmin) {
                min_ratio = e.ratio;
                argmin = e.index;
            }
            if e.ratio > max_ratio || (e.ratio == max_ratio && e.index < argmax) {
                max_ratio = e.ratio;
                argmax = e.index;
            }
            str_excess = str_excess.max(e.str_excess);
            norm_dev = norm_dev.max(e.norm_dev);
            if e.ratio < 1.0 - p.eps || e.ratio > 1.0 + p.eps {
                violations.push(RatioWitness::from_sample(&samples[e.index], e.index, e.ratio));
            }
        }

        Ok(BendVerifyReport {
            pairs,
            seed,
            eps: p.eps,
            min_ratio,
            max_ratio,
            distortion: max_ratio / min_ratio,
            argmin: RatioWitness::from_sample(&samples[argmin], argmin, min_ratio),
            argmax: RatioWitness::from_sample(&samples[argmax], argmax, max_ratio),
            str_bound_excess: str_excess,
            norm_preservation_worst_rel: norm_dev,
            violations,
        })
    }

    fn eval_pair(&self, index: usize, s: &PairSample) -> PairEval {
        let p = &self.params;
        let m = s.ln_a.max(s.ln_b);
        let sa = (s.ln_a - m).exp();
        let sb = (s.ln_b - m).exp();
        let (ca, sa_c) = p.coefficients_at_ln(s.ln_a);
        let (cb, sb_c) = p.coefficients_at_ln(s.ln_b);

        let dim = p.dim;
        let mut src = vec![0.0; dim];
        let mut blk1 = vec![0.0; dim];
        let mut blk2 = vec![0.0; dim];
        for i in 0..dim {
            let xa = sa * s.dir_a[i];
            let xb = sb * s.dir_b[i];
            src[i] = xa - xb;
            blk1[i] = ca * xa - cb * xb;
            blk2[i] = sa_c * xa - sb_c * xb;
        }
        let src_n = norm2(&src);
        let tgt_n = p.z.eval(norm2(&blk1), norm2(&blk2));
        let ratio = if src_n == 0.0 { 1.0 } else { tgt_n / src_n };

        // stronger coefficient bound, ordered ‖x‖ ≥ ‖y‖ > 0
        let (ln_hi, ln_lo, chi, shi, clo, slo) = if s.ln_a >= s.ln_b {
            (s.ln_a, s.ln_b, ca, sa_c, cb, sb_c)
        } else {
            (s.ln_b, s.ln_a, cb, sb_c, ca, sa_c)
        };
        let str_excess = if ln_lo.is_finite() {
            let lhs = p.z.eval(chi - clo, shi - slo);
            let rhs = p.eps * ((ln_hi - ln_lo).exp() - 1.0);
            lhs - rhs
        } else {
            f64::NEG_INFINITY
        };

        // norm preservation at both sampled points
        let np = |dir: &[f64], c: f64, s: f64| -> f64 {
            let n = norm2(dir);
            (p.z.eval(c * n, s * n) - n).abs() / n
        };
        let norm_dev = np(&s.dir_a, ca, sa_c).max(np(&s.dir_b, cb, sb_c));

        PairEval { index, ratio, str_excess, norm_dev }
    }
}

struct PairSample {
    dir_a: Vec<f64>,
    ln_a: f64,
    dir_b: Vec<f64>,
    ln_b: f64,
}

struct PairEval {
    index: usize,
    ratio: f64,
    str_excess: f64,
    norm_dev: f64,
}

/// Radial sampling law for verification: log-uniform across the full
/// spiral range plus stratified shells hugging both radius boundaries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialLaw {
    /// ln-offset below `r` for the log-uniform component (default ln 10).
    pub below_ln: f64,
    /// ln-offset above `R` (default ln 10).
    pub above_ln: f64,
    /// fraction of radii drawn from boundary shells (default 0.2).
    pub boundary_fraction: f64,
    /// half-width of a boundary shell in ln-radius (default 1e-3).
    pub shell_halfwidth_ln: f64,
}

impl Default for RadialLaw {
    fn default() -> Self {
        RadialLaw {
            below_ln: std::f64::consts::LN_10,
            above_ln: std::f64::consts::LN_10,
            boundary_fraction: 0.2,
            shell_halfwidth_ln: 1e-3,
        }
    }
}

impl RadialLaw {
    fn sample_ln_radius<R: Rng>(&self, rng: &mut R, p: &BendingParams) -> f64 {
        if rng.random::<f64>() < self.boundary_fraction {
            let center = if rng.random::<bool>() { p.ln_r } else { p.ln_big_r };
            center + rng.random_range(-self.shell_halfwidth_ln..self.shell_halfwidth_ln)
        } else {
            rng.random_range((p.ln_r - self.below_ln)..(p.ln_big_r + self.above_ln))
        }
    }
}

/// One witnessed ratio; coordinates are populated when representable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioWitness {
    pub index: usize,
    pub ratio: f64,
    pub ln_radius_a: f64,
    pub ln_radius_b: f64,
    pub point_a: Option<Vec<f64>>,
    pub point_b: Option<Vec<f64>>,
}

impl RatioWitness {
    fn from_sample(s: &PairSample, index: usize, ratio: f64) -> Self {
        let mk = |dir: &[f64], ln: f64| {
            if ln <= MAX_FINITE_LN {
                Some(dir.iter().map(|d| d * ln.exp()).collect())
            } else {
                None
            }
        };
        RatioWitness {
            index,
            ratio,
            ln_radius_a: s.ln_a,
            ln_radius_b: s.ln_b,
            point_a: mk(&s.dir_a, s.ln_a),
            point_b: mk(&s.dir_b, s.ln_b),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BendVerifyReport {
    pub pairs: usize,
    pub seed: u64,
    pub eps: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub distortion: f64,
    pub argmin: RatioWitness,
    pub argmax: RatioWitness,
    /// worst `‖U(x)−U(y)‖_Z − ε(‖x‖−‖y‖)/‖y‖`; ≤ 0 when the stronger bound holds
    pub str_bound_excess: f64,
    pub norm_preservation_worst_rel: f64,
    pub violations: Vec<RatioWitness>,
}

impl BendVerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
            && self.str_bound_excess <= 1e-12
            && self.norm_preservation_worst_rel <= 1e-10
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(eps: f64, z: UncondNorm2, dim: usize) -> BendingParams {
        BendingParams::new(eps, 1.0, 4.0, z, dim).unwrap()
    }

    #[test]
    fn outer_radius_examples() {
        let o = solve_outer_radius(0.2, 1.0, 4.0).unwrap();
        assert!((o.ln - 10.0 * PI).abs() < 1e-12);
        assert!((o.linear.unwrap() - 4.4031e13).abs() / 4.4031e13 < 1e-4);
        let o = solve_outer_radius(0.5, 1.0, 4.0).unwrap();
        assert!((o.ln - 4.0 * PI).abs() < 1e-12);
        assert!((o.linear.unwrap() - 2.8675e5).abs() / 2.8675e5 < 1e-4);
        let o = solve_outer_radius(0.1, 2.0, 1.0).unwrap();
        assert!((o.linear.unwrap() - 2.0 * (5.0 * PI).exp()).abs() / o.linear.unwrap() < 1e-12);
        assert!(solve_outer_radius(0.0, 1.0, 4.0).is_err());
        assert!(solve_outer_radius(0.1, -1.0, 4.0).is_err());
        assert!(solve_outer_radius(0.1, 1.0, 5.0).is_err());
        // tiny ε overflows the linear form but keeps the log form
        let o = solve_outer_radius(0.005, 1.0, 4.0).unwrap();
        assert!(o.linear.is_none() && o.ln > 1000.0);
    }

    #[test]
    fn condition_holds_at_construction() {
        for eps in [0.05, 0.1, 0.2, 0.5] {
            let p = params(eps, UncondNorm2::l2(), 3);
            assert!(((p.eps / p.c) * (p.ln_big_r - p.ln_r) - FRAC_PI_2).abs() < 1e-12);
            assert!(p.ln_r < p.ln_big_r);
        }
    }

    #[test]
    fn tau_examples() {
        let p = params(0.2, UncondNorm2::l2(), 2);
        assert_eq!(p.tau(1.0), 0.0);
        assert_eq!(p.tau(0.0), 0.0);
        assert!((p.tau(p.big_r.unwrap()) - FRAC_PI_2).abs() < 1e-12);
        let mid = (p.ln_r + p.ln_big_r) / 2.0;
        assert!((p.tau_ln(mid) - PI / 4.0).abs() < 1e-12);
        // monotone
        let mut prev = -1.0;
        for i in 0..200 {
            let t = 0.5 * (1.1f64).powi(i);
            let tau = p.tau(t);
            assert!(tau >= prev);
            prev = tau;
        }
    }

    #[test]
    fn tau_mean_value_bound() {
        let p = params(0.3, UncondNorm2::l1(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let a = rng.random_range(p.ln_r..p.ln_big_r).exp();
            let b = rng.random_range(p.ln_r..p.ln_big_r).exp();
            let (t1, t2) = if a <= b { (a, b) } else { (b, a) };
            let lhs = p.tau(t2) - p.tau(t1);
            let rhs = (p.eps / p.c) * (t2 - t1) / t1;
            assert!(lhs <= rhs + 1e-12);
        }
    }

    #[test]
    fn coefficients_examples() {
        let p = params(0.2, UncondNorm2::l2(), 2);
        assert_eq!(p.coefficients_at(0.5), (1.0, 0.0));
        assert_eq!(p.coefficients_at(p.big_r.unwrap() * 2.0), (0.0, 1.0));
        let mid = ((p.ln_r + p.ln_big_r) / 2.0).exp();
        let (c, s) = p.coefficients_at(mid);
        let half = std::f64::consts::SQRT_2 / 2.0;
        assert!((c - half).abs() < 1e-12 && (s - half).abs() < 1e-12);
        // normalization across regimes
        for ln_t in [-3.0, 0.0, 2.0, 20.0, p.ln_big_r + 5.0] {
            let (c, s) = p.coefficients_at_ln(ln_t);
            assert!((p.z.eval(c, s) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn apply_regimes_bit_exact() {
        let p = params(0.2, UncondNorm2::linf(), 3);
        let t = BendingMap::new(p);
        let x = [0.1, -0.3, 0.2];
        let (a, b) = t.apply(&x).unwrap();
        assert_eq!(a, x.to_vec());
        assert!(b.iter().all(|v| v.to_bits() == 0.0f64.to_bits()));
        let big = t.params.big_r.unwrap() * 1.5;
        let x = [big, 0.0, big];
        let (a, b) = t.apply(&x).unwrap();
        assert_eq!(b, x.to_vec());
        assert!(a.iter().all(|v| v.to_bits() == 0.0f64.to_bits()));
        assert!(t.apply(&[1.0]).is_err());
    }

    #[test]
    fn image_norm_preserved() {
        let z = UncondNorm2::lp(1.5).unwrap();
        let t = BendingMap::new(params(0.1, z, 4));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5000 {
            let ln_t = rng.random_range(-3.0..(t.params.ln_big_r + 3.0));
            let x: Vec<f64> = unit_vector(&mut rng, 4).iter().map(|v| v * ln_t.exp()).collect();
            let img = t.apply(&x).unwrap();
            let n = norm2(&x);
            assert!((t.image_norm(&img) - n).abs() <= 1e-10 * n);
        }
    }

    #[test]
    fn boundary_continuity() {
        // across each regime boundary the finite difference shrinks linearly
        // with the step; the Richardson-extrapolated jump must vanish
        let t = BendingMap::new(params(0.2, UncondNorm2::l2(), 2));
        let r = t.params.r.unwrap();
        let big = t.params.big_r.unwrap();
        let diff = |bound: f64, h: f64| -> f64 {
            let lo = t.apply(&[bound * (1.0 - h), 0.0]).unwrap();
            let hi = t.apply(&[bound * (1.0 + h), 0.0]).unwrap();
            norm2(&[lo.0[0] - hi.0[0], lo.0[1] - hi.0[1], lo.1[0] - hi.1[0], lo.1[1] - hi.1[1]])
        };
        for bound in [r, big] {
            let h = 1e-6;
            let d1 = diff(bound, h);
            let d2 = diff(bound, h / 2.0);
            assert!(d1 <= 4.0 * h * bound, "finite difference {d1} too large at bound {bound}");
            let jump = (2.0 * d2 - d1).abs();
            assert!(jump <= 1e-8 * bound, "extrapolated jump {jump} at bound {bound}");
        }
    }

    #[test]
    fn verify_distortion_in_bracket() {
        for z in [UncondNorm2::l1(), UncondNorm2::l2(), UncondNorm2::linf()] {
            let t = BendingMap::new(params(0.1, z, 4));
            let rep = t.verify_distortion(100_000, 7, &RadialLaw::default()).unwrap();
            assert!(rep.passed(), "violations: {:?}", rep.violations.first());
            assert!(rep.min_ratio >= 0.9 && rep.max_ratio <= 1.1);
            assert!(rep.distortion <= 1.1 / 0.9 + 1e-12);
        }
    }

    #[test]
    fn isometric_regimes_ratio_one() {
        let t = BendingMap::new(params(0.2, UncondNorm2::l2(), 3));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            // both inside r
            let x: Vec<f64> = unit_vector(&mut rng, 3).iter().map(|v| v * 0.3).collect();
            let y: Vec<f64> = unit_vector(&mut rng, 3).iter().map(|v| v * 0.8).collect();
            let (tx, ty) = (t.apply(&x).unwrap(), t.apply(&y).unwrap());
            let d_img = t.params.z.eval(
                norm2(&crate::linalg::sub(&tx.0, &ty.0)),
                norm2(&crate::linalg::sub(&tx.1, &ty.1)),
            );
            let d_src = crate::linalg::dist2(&x, &y);
            assert!((d_img / d_src - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn remark_widening_keeps_the_bending() {
        // built with (r, R); redeclared with r1 ≤ r and R1 ≥ R
        let t = BendingMap::new(params(0.2, UncondNorm2::l2(), 2));
        let r1 = 0.25 * t.params.r.unwrap();
        let big1 = 4.0 * t.params.big_r.unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let d = unit_vector(&mut rng, 2);
            let inner: Vec<f64> = d.iter().map(|v| v * r1 * rng.random::<f64>()).collect();
            let (a, b) = t.apply(&inner).unwrap();
            assert_eq!(a, inner);
            assert!(b.iter().all(|v| *v == 0.0));
            let outer: Vec<f64> = d.iter().map(|v| v * big1 * (1.0 + rng.random::<f64>())).collect();
            let (a, b) = t.apply(&outer).unwrap();
            assert_eq!(b, outer);
            assert!(a.iter().all(|v| *v == 0.0));
        }
        let rep = t.verify_distortion(20_000, 5, &RadialLaw::default()).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn scaled_pair_evaluation_matches_direct_computation() {
        // the radial-form evaluation must agree with applying the map in
        // the linear domain wherever both are representable
        let z = UncondNorm2::lp(1.5).unwrap();
        let map = BendingMap::new(params(0.2, z.clone(), 3));
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for i in 0..2000 {
            let s = PairSample {
                dir_a: unit_vector(&mut rng, 3),
                ln_a: rng.random_range(-2.0..(map.params.ln_big_r + 2.0)),
                dir_b: unit_vector(&mut rng, 3),
                ln_b: rng.random_range(-2.0..(map.params.ln_big_r + 2.0)),
            };
            let e = map.eval_pair(i, &s);
            let x: Vec<f64> = s.dir_a.iter().map(|v| v * s.ln_a.exp()).collect();
            let y: Vec<f64> = s.dir_b.iter().map(|v| v * s.ln_b.exp()).collect();
            let (xa, xb) = map.apply(&x).unwrap();
            let (ya, yb) = map.apply(&y).unwrap();
            let tgt = z.eval(
                norm2(&crate::linalg::sub(&xa, &ya)),
                norm2(&crate::linalg::sub(&xb, &yb)),
            );
            let direct = tgt / crate::linalg::dist2(&x, &y);
            assert!((e.ratio - direct).abs() <= 1e-11 * direct, "{} vs {direct}", e.ratio);
        }
    }

    #[test]
    fn log_domain_verification_survives_huge_radii() {
        // ln R ≈ 1257: far beyond linear f64, still verifiable
        let p = BendingParams::new(0.005, 1.0, 4.0, UncondNorm2::l2(), 2).unwrap();
        assert!(p.big_r.is_none());
        let rep = BendingMap::new(p).verify_distortion(20_000, 11, &RadialLaw::default()).unwrap();
        assert!(rep.passed(), "min {} max {}", rep.min_ratio, rep.max_ratio);
        assert!(rep.min_ratio >= 0.995 && rep.max_ratio <= 1.005);
    }
}
