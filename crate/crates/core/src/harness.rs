//! Pairwise distortion measurement shared by the embedding pipelines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How pairs are enumerated.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum PairMode {
    /// All n(n−1)/2 pairs.
    Exhaustive,
    /// Seeded random pairs.
    Sampled { pairs: usize, seed: u64 },
    /// Exhaustive up to the cutoff, sampled above it (cutoff 2000,
    /// 10⁶ sampled pairs).
    Auto { seed: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistortionReport {
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// max/min ratio; `inf` when some pair collapses (non-embedding).
    pub distortion: f64,
    pub arg_min: (usize, usize),
    pub arg_max: (usize, usize),
    pub pair_count: usize,
    pub seed: Option<u64>,
    pub exhaustive: bool,
    /// true when a pair of distinct sources mapped to equal targets
    pub non_embedding: bool,
}

/// Distance callback pair: source metric and target metric, both indexed by
/// point position.
pub fn pairwise_distortion<S, T>(
    n: usize,
    source_dist: S,
    target_dist: T,
    mode: PairMode,
) -> Result<DistortionReport>
where
    S: Fn(usize, usize) -> f64 + Sync,
    T: Fn(usize, usize) -> f64 + Sync,
{
    if n < 2 {
        return Err(Error::invalid("need at least two points"));
    }
    let pairs: Vec<(usize, usize)> = match mode {
        PairMode::Exhaustive => all_pairs(n),
        PairMode::Sampled { pairs, seed } => sampled_pairs(n, pairs, seed),
        PairMode::Auto { seed } => {
            if n <= 2000 {
                all_pairs(n)
            } else {
                sampled_pairs(n, 1_000_000, seed)
            }
        }
    };
    let exhaustive = pairs.len() == n * (n - 1) / 2;

    struct Acc {
        min: f64,
        max: f64,
        arg_min: (usize, usize),
        arg_max: (usize, usize),
        non_embedding: bool,
        dup_source: Option<(usize, usize)>,
    }
    let identity = || Acc {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        arg_min: (usize::MAX, usize::MAX),
        arg_max: (usize::MAX, usize::MAX),
        non_embedding: false,
        dup_source: None,
    };
    let acc = pairs
        .par_iter()
        .fold(identity, |mut acc, &(i, j)| {
            let ds = source_dist(i, j);
            if ds == 0.0 {
                acc.dup_source.get_or_insert((i, j));
                return acc;
            }
            let dt = target_dist(i, j);
            let ratio = ratio_safe(dt, ds);
            if ratio == 0.0 {
                acc.non_embedding = true;
            }
            if ratio < acc.min || (ratio == acc.min && (i, j) < acc.arg_min) {
                acc.min = ratio;
                acc.arg_min = (i, j);
            }
            if ratio > acc.max || (ratio == acc.max && (i, j) < acc.arg_max) {
                acc.max = ratio;
                acc.arg_max = (i, j);
            }
            acc
        })
        .reduce(identity, |mut a, b| {
            if b.min < a.min || (b.min == a.min && b.arg_min < a.arg_min) {
                a.min = b.min;
                a.arg_min = b.arg_min;
            }
            if b.max > a.max || (b.max == a.max && b.arg_max < a.arg_max) {
                a.max = b.max;
                a.arg_max = b.arg_max;
            }
            a.non_embedding |= b.non_embedding;
            a.dup_source = match (a.dup_source, b.dup_source) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            a
        });

    if let Some((i, j)) = acc.dup_source {
        return Err(Error::invalid(format!("duplicate source points at indices {i} and {j}; ratio undefined")));
    }

    let (seed, _) = match mode {
        PairMode::Sampled { seed, .. } | PairMode::Auto { seed } => (Some(seed), ()),
        PairMode::Exhaustive => (None, ()),
    };
    let non_embedding = acc.non_embedding;
    Ok(DistortionReport {
        min_ratio: acc.min,
        max_ratio: acc.max,
        distortion: if non_embedding { f64::INFINITY } else { acc.max / acc.min },
        arg_min: acc.arg_min,
        arg_max: acc.arg_max,
        pair_count: pairs.len(),
        seed,
        exhaustive,
        non_embedding,
    })
}

/// max |ratio − 1| over pairs.
pub fn isometry_defect<S, T>(n: usize, source_dist: S, target_dist: T, mode: PairMode) -> Result<f64>
where
    S: Fn(usize, usize) -> f64 + Sync,
    T: Fn(usize, usize) -> f64 + Sync,
{
    let rep = pairwise_distortion(n, source_dist, target_dist, mode)?;
    Ok((rep.max_ratio - 1.0).abs().max((rep.min_ratio - 1.0).abs()))
}

/// Point-list front end: distances are the given norms of coordinate
/// differences.
pub fn pairwise_distortion_points<S, T>(
    points: &[Vec<f64>],
    images: &[Vec<f64>],
    source_norm: S,
    target_norm: T,
    mode: PairMode,
) -> Result<DistortionReport>
where
    S: Fn(&[f64]) -> f64 + Sync,
    T: Fn(&[f64]) -> f64 + Sync,
{
    if points.len() != images.len() {
        return Err(Error::invalid(format!(
            "point/image lists differ in length: {} vs {}",
            points.len(),
            images.len()
        )));
    }
    pairwise_distortion(
        points.len(),
        |i, j| source_norm(&crate::linalg::sub(&points[i], &points[j])),
        |i, j| target_norm(&crate::linalg::sub(&images[i], &images[j])),
        mode,
    )
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            v.push((i, j));
        }
    }
    v
}

fn sampled_pairs(n: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            loop {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                if i != j {
                    return (i.min(j), i.max(j));
                }
            }
        })
        .collect()
}

/// Ratio in the log domain when magnitudes would overflow plain division.
fn ratio_safe(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        return 0.0;
    }
    if num < 1e300 && den > 1e-300 {
        num / den
    } else {
        (num.ln() - den.ln()).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dist2;

    fn cloud(n: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| (0..3).map(|_| rng.random_range(-5.0..5.0)).collect()).collect()
    }

    #[test]
    fn identity_and_scaling() {
        let pts = cloud(50, 1);
        let d = |i: usize, j: usize| dist2(&pts[i], &pts[j]);
        let rep = pairwise_distortion(pts.len(), d, d, PairMode::Exhaustive).unwrap();
        assert_eq!(rep.distortion, 1.0);
        assert!(rep.exhaustive && rep.pair_count == 50 * 49 / 2);
        let d2x = |i: usize, j: usize| 2.0 * dist2(&pts[i], &pts[j]);
        let rep = pairwise_distortion(pts.len(), d, d2x, PairMode::Exhaustive).unwrap();
        assert!((rep.distortion - 1.0).abs() < 1e-12);
        assert!((rep.max_ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn duplicate_sources_rejected_duplicate_targets_reported() {
        let mut pts = cloud(10, 2);
        pts.push(pts[0].clone());
        let d = |i: usize, j: usize| dist2(&pts[i], &pts[j]);
        assert!(pairwise_distortion(pts.len(), d, d, PairMode::Exhaustive).is_err());

        let pts = cloud(10, 3);
        let d = |i: usize, j: usize| dist2(&pts[i], &pts[j]);
        // constant target map: every pair collapses
        let zero = |_: usize, _: usize| 0.0;
        let rep = pairwise_distortion(pts.len(), d, zero, PairMode::Exhaustive).unwrap();
        assert!(rep.non_embedding && rep.distortion.is_infinite());
    }

    #[test]
    fn permutation_invariance() {
        let pts = cloud(40, 4);
        let img: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| 1.5 * x + 0.3).collect()).collect();
        let rep1 = {
            let d = |i: usize, j: usize| dist2(&pts[i], &pts[j]);
            let t = |i: usize, j: usize| dist2(&img[i], &img[j]);
            pairwise_distortion(pts.len(), d, t, PairMode::Exhaustive).unwrap()
        };
        let perm: Vec<usize> = (0..pts.len()).rev().collect();
        let rep2 = {
            let d = |i: usize, j: usize| dist2(&pts[perm[i]], &pts[perm[j]]);
            let t = |i: usize, j: usize| dist2(&img[perm[i]], &img[perm[j]]);
            pairwise_distortion(pts.len(), d, t, PairMode::Exhaustive).unwrap()
        };
        assert_eq!(rep1.min_ratio, rep2.min_ratio);
        assert_eq!(rep1.max_ratio, rep2.max_ratio);
        assert_eq!(rep1.distortion, rep2.distortion);
    }

    #[test]
    fn sampled_is_submax_of_exhaustive() {
        let pts = cloud(300, 5);
        let img: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| vec![p[0] + 0.1 * (p[1] * 3.0).sin(), p[1], p[2] - 0.05 * p[0]])
            .collect();
        let d = |i: usize, j: usize| dist2(&pts[i], &pts[j]);
        let t = |i: usize, j: usize| dist2(&img[i], &img[j]);
        let full = pairwise_distortion(pts.len(), d, t, PairMode::Exhaustive).unwrap();
        let sampled = pairwise_distortion(pts.len(), d, t, PairMode::Sampled { pairs: 5000, seed: 9 }).unwrap();
        assert!(sampled.distortion <= full.distortion + 1e-15);
        assert!(sampled.max_ratio <= full.max_ratio + 1e-15);
        assert!(sampled.min_ratio >= full.min_ratio - 1e-15);
    }

    #[test]
    fn log_domain_ratios() {
        // distances near the top of the f64 range
        let src = [0.0, 1.0];
        let d = move |_i: usize, _j: usize| 2.0e300_f64;
        let t = move |_i: usize, _j: usize| 1.0e300_f64;
        let rep = pairwise_distortion(src.len(), d, t, PairMode::Exhaustive).unwrap();
        assert!((rep.max_ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn isometry_defect_examples() {
        let pts = cloud(30, 6);
        let d = |i: usize, j: usize| dist2(&pts[i], &pts[j]);
        assert_eq!(isometry_defect(pts.len(), d, d, PairMode::Exhaustive).unwrap(), 0.0);
    }

    #[test]
    fn point_list_front_end() {
        use crate::linalg::norm2;
        let pts = cloud(25, 8);
        let imgs: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| 3.0 * x).collect()).collect();
        let rep = pairwise_distortion_points(&pts, &imgs, |v| norm2(v), |v| norm2(v), PairMode::Exhaustive).unwrap();
        assert!((rep.distortion - 1.0).abs() < 1e-12);
        assert!((rep.max_ratio - 3.0).abs() < 1e-12);
        // measuring against the taxicab norm instead changes the ratios
        let taxi = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
        let rep = pairwise_distortion_points(&pts, &imgs, |v| norm2(v), taxi, PairMode::Exhaustive).unwrap();
        assert!(rep.max_ratio <= 3.0 * (3.0f64).sqrt() + 1e-12);
        assert!(rep.min_ratio >= 3.0 - 1e-12);
        assert!(pairwise_distortion_points(&pts, &imgs[..3].to_vec(), |v| norm2(v), |v| norm2(v), PairMode::Exhaustive).is_err());
    }
}
