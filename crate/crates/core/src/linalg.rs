//! Small dense vector/matrix helpers shared across the crate.
//!
//! Everything here operates on `&[f64]` slices; ambient dimensions are tiny
//! (≤ 8) so no BLAS-style machinery is warranted.

use rand::Rng;
use rand_distr::StandardNormal;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm with max-scaling, safe for entries up to ~1e307.
pub fn norm2(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = v.iter().map(|x| (x / scale) * (x / scale)).sum();
    scale * s.sqrt()
}

/// ln of the Euclidean norm; finite for any nonzero finite vector.
pub fn ln_norm2(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return f64::NEG_INFINITY;
    }
    let s: f64 = v.iter().map(|x| (x / scale) * (x / scale)).sum();
    scale.ln() + 0.5 * s.ln()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(v: &[f64], t: f64) -> Vec<f64> {
    v.iter().map(|x| x * t).collect()
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    norm2(&sub(a, b))
}

pub fn normalize(v: &[f64]) -> Vec<f64> {
    let n = norm2(v);
    v.iter().map(|x| x / n).collect()
}

/// Gaussian vector in the given dimension.
pub fn gaussian_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform point on the Euclidean unit sphere S^{dim-1}.
pub fn unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vector(rng, dim);
        let n = norm2(&v);
        if n > 1e-12 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Modified Gram–Schmidt. Returns `k` orthonormal columns, or `None` if the
/// input columns are numerically dependent.
pub fn orthonormalize(cols: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    for c in cols {
        let mut v = c.clone();
        // two MGS passes for re-orthogonalization
        for _ in 0..2 {
            for q in &out {
                let p = dot(&v, q);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let n = norm2(&v);
        if n < 1e-10 {
            return None;
        }
        out.push(v.iter().map(|x| x / n).collect());
    }
    Some(out)
}

/// Orthonormal basis of the span of a point set by greedy column pivoting:
/// repeatedly absorb the point with the largest residual, relative to its
/// own magnitude, until every residual drops below `rel_tol`. Scale-robust
/// for point sets spanning many orders of magnitude.
pub fn pivoted_span_basis(points: &[Vec<f64>], rel_tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut residuals: Vec<Vec<f64>> = points.to_vec();
    let scales: Vec<f64> = points.iter().map(|p| norm2(p).max(1e-300)).collect();
    let dim = points.first().map_or(0, |p| p.len());
    while basis.len() < dim {
        let mut best = (0usize, 0.0f64);
        for (i, r) in residuals.iter().enumerate() {
            let rel = norm2(r) / scales[i];
            if rel > best.1 {
                best = (i, rel);
            }
        }
        if best.1 <= rel_tol {
            break;
        }
        let q = normalize(&residuals[best.0]);
        for r in &mut residuals {
            let p = dot(r, &q);
            for (ri, qi) in r.iter_mut().zip(&q) {
                *ri -= p * qi;
            }
        }
        basis.push(q);
    }
    basis
}

/// Singular values of a small dense matrix (`rows × cols` in row-major
/// `a[r][c]` layout), descending. One-sided Jacobi on the columns.
pub fn singular_values(a: &[Vec<f64>]) -> Vec<f64> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    // work on columns
    let mut u: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect();
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let app = dot(&u[p], &u[p]);
                let aqq = dot(&u[q], &u[q]);
                let apq = dot(&u[p], &u[q]);
                off = off.max(apq.abs() / (app * aqq).sqrt().max(1e-300));
                if apq.abs() <= 1e-15 * (app * aqq).sqrt() {
                    continue;
                }
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let up = u[p][i];
                    let uq = u[q][i];
                    u[p][i] = c * up - s * uq;
                    u[q][i] = s * up + c * uq;
                }
            }
        }
        if off < 1e-14 {
            break;
        }
    }
    let mut sv: Vec<f64> = u.iter().map(|col| norm2(col)).collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_basics() {
        assert_eq!(norm2(&[3.0, 4.0]), 5.0);
        assert!((ln_norm2(&[3.0, 4.0]) - 5.0f64.ln()).abs() < 1e-14);
        // scaling safety near the top of the f64 range
        let big = [3.0e300, 4.0e300];
        assert!((norm2(&big) - 5.0e300).abs() / 5.0e300 < 1e-14);
    }

    #[test]
    fn mgs_orthonormal() {
        let cols = vec![vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]];
        let q = orthonormalize(&cols).unwrap();
        assert!((norm2(&q[0]) - 1.0).abs() < 1e-12);
        assert!((norm2(&q[1]) - 1.0).abs() < 1e-12);
        assert!(dot(&q[0], &q[1]).abs() < 1e-12);
        assert!(orthonormalize(&[vec![1.0, 0.0], vec![2.0, 0.0]]).is_none());
    }

    #[test]
    fn jacobi_singular_values() {
        // diag(3, 2) embedded in a rotation: singular values stay {3, 2}
        let a = vec![vec![3.0, 0.0], vec![0.0, 2.0]];
        let sv = singular_values(&a);
        assert!((sv[0] - 3.0).abs() < 1e-12 && (sv[1] - 2.0).abs() < 1e-12);
        // hand-checked 2x2: [[1,1],[0,1]] has sv sqrt((3±sqrt5)/2)
        let b = vec![vec![1.0, 1.0], vec![0.0, 1.0]];
        let sv = singular_values(&b);
        let hi = ((3.0 + 5.0f64.sqrt()) / 2.0).sqrt();
        let lo = ((3.0 - 5.0f64.sqrt()) / 2.0).sqrt();
        assert!((sv[0] - hi).abs() < 1e-12 && (sv[1] - lo).abs() < 1e-12);
    }
}
