//! Finite-dimensional normed-space plumbing: Z-combined direct sums, the
//! exact block model used by the annulus embedding, the max-renorm, and the
//! spherical opening between subspaces.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, orthonormalize, singular_values, sub, unit_vector};
use crate::norms2d::UncondNorm2;

pub type NormOracle = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

pub fn euclidean_oracle() -> NormOracle {
    Arc::new(|v: &[f64]| norm2(v))
}

/// Two normed summands joined by a combiner `Z`:
/// `‖(u, v)‖ = Z(‖u‖_left, ‖v‖_right)`.
pub struct DirectSum {
    pub dim_left: usize,
    pub dim_right: usize,
    left: NormOracle,
    right: NormOracle,
    pub z: UncondNorm2,
}

impl DirectSum {
    pub fn new(dim_left: usize, dim_right: usize, left: NormOracle, right: NormOracle, z: UncondNorm2) -> Self {
        DirectSum { dim_left, dim_right, left, right, z }
    }

    /// Euclidean summands, arbitrary combiner.
    pub fn euclidean(dim_left: usize, dim_right: usize, z: UncondNorm2) -> Self {
        Self::new(dim_left, dim_right, euclidean_oracle(), euclidean_oracle(), z)
    }

    pub fn norm(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        if u.len() != self.dim_left {
            return Err(Error::DimensionMismatch { expected: self.dim_left, got: u.len() });
        }
        if v.len() != self.dim_right {
            return Err(Error::DimensionMismatch { expected: self.dim_right, got: v.len() });
        }
        Ok(self.z.eval((self.left)(u), (self.right)(v)))
    }
}

/// `max{‖x₁‖~, ‖x₂‖~, ‖x₁+x₂‖}`. With tilde norms carrying a certified
/// (1+γ) equivalence to the ambient norm, the result is sandwiched between
/// `‖(x₁,x₂)‖` and `(1+γ)²‖(x₁,x₂)‖`.
pub fn max_renorm(
    x1: &[f64],
    x2: &[f64],
    ambient: impl Fn(&[f64], &[f64]) -> f64,
    tilde1: impl Fn(&[f64]) -> f64,
    tilde2: impl Fn(&[f64]) -> f64,
) -> f64 {
    tilde1(x1).max(tilde2(x2)).max(ambient(x1, x2))
}

/// One pair of equal-dimension blocks joined by a combiner.
#[derive(Debug, Clone)]
pub struct BlockPair {
    pub dim: usize,
    pub z: UncondNorm2,
}

/// The computable block-decomposition model: pairs of
/// Euclidean blocks, each pair combined by its own `Zᵢ`, pairs joined by an
/// outer ℓ₂ sum:
///
/// `‖x‖ = ( Σᵢ Zᵢ(‖x_{2i−1}‖₂, ‖x_{2i}‖₂)² )^{1/2}`
///
/// Blocks carry exactly the Euclidean norm, within-pair sums exactly the
/// combiner value, and adjacent-across-pairs sums exactly the ℓ₂ value
/// (the last is forced by `Z(t,0) = Z(0,t) = t`).
#[derive(Debug, Clone)]
pub struct ModelSpace {
    pub pairs: Vec<BlockPair>,
}

/// Block-indexed vector; `blocks.len() == 2 * pairs.len()`, empty blocks mean
/// zero.
pub type ModelVector = Vec<Vec<f64>>;

impl ModelSpace {
    pub fn new(pairs: Vec<BlockPair>) -> Self {
        ModelSpace { pairs }
    }

    /// Uniform block dimension, cycling combiners from `zs`.
    pub fn uniform(pair_count: usize, dim: usize, zs: &[UncondNorm2]) -> Self {
        let pairs = (0..pair_count)
            .map(|i| BlockPair { dim, z: zs[i % zs.len()].clone() })
            .collect();
        ModelSpace { pairs }
    }

    pub fn block_count(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn zero_vector(&self) -> ModelVector {
        self.pairs.iter().flat_map(|p| [vec![0.0; p.dim], vec![0.0; p.dim]]).collect()
    }

    pub fn check_shape(&self, x: &ModelVector) -> Result<()> {
        if x.len() != self.block_count() {
            return Err(Error::DimensionMismatch { expected: self.block_count(), got: x.len() });
        }
        for (b, blk) in x.iter().enumerate() {
            let want = self.pairs[b / 2].dim;
            if !blk.is_empty() && blk.len() != want {
                return Err(Error::DimensionMismatch { expected: want, got: blk.len() });
            }
        }
        Ok(())
    }

    pub fn norm(&self, x: &ModelVector) -> Result<f64> {
        self.check_shape(x)?;
        let mut contribs = Vec::with_capacity(self.pairs.len());
        for (i, p) in self.pairs.iter().enumerate() {
            let a = block_norm(&x[2 * i]);
            let b = block_norm(&x[2 * i + 1]);
            contribs.push(p.z.eval(a, b));
        }
        Ok(norm2(&contribs))
    }

    pub fn diff_norm(&self, x: &ModelVector, y: &ModelVector) -> Result<f64> {
        self.check_shape(x)?;
        self.check_shape(y)?;
        let d: ModelVector = x
            .iter()
            .zip(y)
            .enumerate()
            .map(|(b, (xa, ya))| {
                let dim = self.pairs[b / 2].dim;
                let get = |v: &Vec<f64>, j: usize| if v.is_empty() { 0.0 } else { v[j] };
                (0..dim).map(|j| get(xa, j) - get(ya, j)).collect()
            })
            .collect();
        self.norm(&d)
    }
}

fn block_norm(b: &[f64]) -> f64 {
    if b.is_empty() {
        0.0
    } else {
        norm2(b)
    }
}

/// A linear subspace given by an orthonormal frame (columns in ℝⁿ).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Subspace {
    pub ambient: usize,
    pub frame: Vec<Vec<f64>>,
}

impl Subspace {
    /// Orthonormalizes a spanning set. Fails on dependent spans.
    pub fn from_span(ambient: usize, span: &[Vec<f64>]) -> Result<Self> {
        if span.is_empty() || span.len() > ambient {
            return Err(Error::invalid("subspace dimension must be in [1, ambient]"));
        }
        if span.iter().any(|v| v.len() != ambient) {
            return Err(Error::invalid("span vectors must match the ambient dimension"));
        }
        let frame = orthonormalize(span).ok_or_else(|| Error::invalid("span is numerically dependent"))?;
        Ok(Subspace { ambient, frame })
    }

    pub fn coordinate_plane(ambient: usize, axes: &[usize]) -> Result<Self> {
        let span: Vec<Vec<f64>> = axes
            .iter()
            .map(|&a| {
                let mut e = vec![0.0; ambient];
                e[a] = 1.0;
                e
            })
            .collect();
        Self::from_span(ambient, &span)
    }

    /// Seeded random subspace.
    pub fn random<R: rand::Rng>(rng: &mut R, ambient: usize, dim: usize) -> Self {
        loop {
            let span: Vec<Vec<f64>> = (0..dim).map(|_| unit_vector(rng, ambient)).collect();
            if let Ok(s) = Self::from_span(ambient, &span) {
                return s;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    /// Frame orthonormality defect (max |⟨qᵢ,qⱼ⟩ − δᵢⱼ|).
    pub fn frame_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.frame.len() {
            for j in i..self.frame.len() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(&self.frame[i], &self.frame[j]) - target).abs());
            }
        }
        worst
    }

    /// Norm of the orthogonal projection of `v` onto the subspace.
    pub fn projection_norm(&self, v: &[f64]) -> f64 {
        let coeffs: Vec<f64> = self.frame.iter().map(|q| dot(v, q)).collect();
        norm2(&coeffs)
    }

    /// Point on the unit sphere of a 2-dimensional subspace at angle φ.
    pub fn circle_point(&self, phi: f64) -> Vec<f64> {
        assert_eq!(self.dim(), 2, "circle_point needs a 2-dimensional subspace");
        let (c, s) = (phi.cos(), phi.sin());
        (0..self.ambient).map(|i| c * self.frame[0][i] + s * self.frame[1][i]).collect()
    }

    /// Principal angles against another subspace of the same dimension,
    /// ascending, from the singular values of the frame product.
    pub fn principal_angles(&self, other: &Subspace) -> Result<Vec<f64>> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: other.ambient });
        }
        if self.dim() != other.dim() || self.dim() == 0 || self.dim() >= self.ambient {
            return Err(Error::invalid("principal angles need equal subspace dimension in [1, n−1]"));
        }
        let k = self.dim();
        let m: Vec<Vec<f64>> = (0..k)
            .map(|i| (0..k).map(|j| dot(&self.frame[i], &other.frame[j])).collect())
            .collect();
        let mut sv = singular_values(&m);
        for s in &mut sv {
            *s = s.clamp(0.0, 1.0);
        }
        let mut angles: Vec<f64> = sv.iter().map(|s| s.acos()).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(angles)
    }
}

/// Spherical opening `Ω(U, W)` in the Euclidean ambient: `2·sin(θ_max/2)`
/// with `θ_max` the largest principal angle.
pub fn spherical_opening(u: &Subspace, w: &Subspace) -> Result<f64> {
    let angles = u.principal_angles(w)?;
    let theta_max = *angles.last().unwrap();
    Ok(2.0 * (theta_max / 2.0).sin())
}

/// Allocation-free opening between two 2-dimensional subspaces given by
/// orthonormal frames; the hot path of the net builder. Uses the stable
/// closed form for the smaller singular value of the 2×2 frame product.
pub fn opening_2planes(u_frame: &[Vec<f64>], w_frame: &[Vec<f64>]) -> f64 {
    debug_assert_eq!(u_frame.len(), 2);
    debug_assert_eq!(w_frame.len(), 2);
    let m00 = dot(&u_frame[0], &w_frame[0]);
    let m01 = dot(&u_frame[0], &w_frame[1]);
    let m10 = dot(&u_frame[1], &w_frame[0]);
    let m11 = dot(&u_frame[1], &w_frame[1]);
    let f = m00 * m00 + m01 * m01 + m10 * m10 + m11 * m11;
    let det = (m00 * m11 - m01 * m10).abs();
    let disc = (f * f - 4.0 * det * det).max(0.0).sqrt();
    let sigma_min_sq = if f + disc > 0.0 { 2.0 * det * det / (f + disc) } else { 0.0 };
    let theta_max = sigma_min_sq.sqrt().clamp(0.0, 1.0).acos();
    2.0 * (theta_max / 2.0).sin()
}

/// Grid-search cross-check of the opening for 1- and 2-dimensional
/// subspaces: max over both unit-sphere grids of the distance to the other
/// sphere's grid. Agrees with the closed form within ~2 grid steps.
pub fn spherical_opening_grid(u: &Subspace, w: &Subspace, grid: usize) -> Result<f64> {
    if u.dim() > 2 || w.dim() > 2 {
        return Err(Error::invalid("grid opening implemented for subspace dimension ≤ 2"));
    }
    if u.dim() != w.dim() || u.ambient != w.ambient || u.dim() == 0 {
        return Err(Error::invalid("grid opening needs matching nonzero dimensions"));
    }
    let sphere = |s: &Subspace| -> Vec<Vec<f64>> {
        if s.dim() == 1 {
            vec![s.frame[0].clone(), s.frame[0].iter().map(|x| -x).collect()]
        } else {
            (0..grid).map(|i| s.circle_point(2.0 * std::f64::consts::PI * i as f64 / grid as f64)).collect()
        }
    };
    let su = sphere(u);
    let sw = sphere(w);
    let one_sided = |a: &[Vec<f64>], b: &[Vec<f64>]| {
        a.iter()
            .map(|p| b.iter().map(|q| norm2(&sub(p, q))).fold(f64::INFINITY, f64::min))
            .fold(0.0f64, f64::max)
    };
    Ok(one_sided(&su, &sw).max(one_sided(&sw, &su)))
}
