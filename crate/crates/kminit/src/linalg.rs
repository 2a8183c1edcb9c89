//! Covariance matrices and principal-eigenvector extraction by the power
//! method, as needed for PCA-based splitting.

use crate::error::{Error, Result};

/// Symmetric D x D covariance matrix under the population (1/n) convention.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    m: Vec<f64>, // row-major, d * d
    d: usize,
    pub sample_count: usize,
}

impl CovarianceMatrix {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.d + j]
    }

    fn mul(&self, v: &[f64], out: &mut [f64]) {
        for i in 0..self.d {
            let row = &self.m[i * self.d..(i + 1) * self.d];
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }
}

/// Population covariance of a set of points given as rows.
pub fn covariance<'a, I>(points: I) -> CovarianceMatrix
where
    I: IntoIterator<Item = &'a [f64]>,
    I::IntoIter: Clone,
{
    let iter = points.into_iter();
    let d = iter.clone().next().expect("covariance of empty set").len();
    let mut n = 0usize;
    let mut mean = vec![0.0; d];
    for row in iter.clone() {
        n += 1;
        for (m, &v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut m = vec![0.0; d * d];
    for row in iter {
        for j in 0..d {
            let dj = row[j] - mean[j];
            for l in j..d {
                m[j * d + l] += dj * (row[l] - mean[l]);
            }
        }
    }
    let inv = 1.0 / n as f64;
    for j in 0..d {
        for l in j..d {
            let v = m[j * d + l] * inv;
            m[j * d + l] = v;
            m[l * d + j] = v;
        }
    }
    CovarianceMatrix { m, d, sample_count: n }
}

/// Per-axis population variance, computed without forming the full matrix.
pub fn variance_per_axis<'a, I>(points: I) -> Vec<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
    I::IntoIter: Clone,
{
    let iter = points.into_iter();
    let d = iter.clone().next().expect("variance of empty set").len();
    let mut n = 0usize;
    let mut mean = vec![0.0; d];
    for row in iter.clone() {
        n += 1;
        for (m, &v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut var = vec![0.0; d];
    for row in iter {
        for j in 0..d {
            let diff = row[j] - mean[j];
            var[j] += diff * diff;
        }
    }
    for v in &mut var {
        *v /= n as f64;
    }
    var
}

/// Principal eigenvector of a symmetric matrix by power iteration.
///
/// Starts from the coordinate axis with the greatest diagonal entry (ties
/// to the lowest index) and iterates until the residual ||Cv - λv|| drops
/// below `tol`·|λ| or `max_iter` steps elapse. The sign is fixed so the
/// first component exceeding 1e-12 in magnitude is positive.
pub fn principal_eigenvector(
    c: &CovarianceMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let d = c.d;
    let mut start_axis = 0;
    for j in 1..d {
        if c.entry(j, j) > c.entry(start_axis, start_axis) {
            start_axis = j;
        }
    }
    if c.m.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateCovariance);
    }

    let mut v = vec![0.0; d];
    v[start_axis] = 1.0;
    let mut next = vec![0.0; d];
    for _ in 0..max_iter {
        c.mul(&v, &mut next);
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            // v landed in the null space; the dominant direction is the
            // start axis itself (possible only for degenerate spectra).
            break;
        }
        for x in &mut next {
            *x /= norm;
        }
        std::mem::swap(&mut v, &mut next);
        // Residual test against the Rayleigh quotient.
        c.mul(&v, &mut next);
        let lambda: f64 = v.iter().zip(&next).map(|(a, b)| a * b).sum();
        let residual: f64 = next
            .iter()
            .zip(&v)
            .map(|(cv, vi)| {
                let r = cv - lambda * vi;
                r * r
            })
            .sum::<f64>()
            .sqrt();
        if residual <= tol * lambda.abs() {
            break;
        }
    }
    fix_sign(&mut v);
    Ok(v)
}

fn fix_sign(v: &mut [f64]) {
    for &x in v.iter() {
        if x.abs() > 1e-12 {
            if x < 0.0 {
                for y in v.iter_mut() {
                    *y = -*y;
                }
            }
            return;
        }
    }
}

/// Rayleigh quotient vᵀCv for a unit vector v.
pub fn rayleigh_quotient(c: &CovarianceMatrix, v: &[f64]) -> f64 {
    let mut cv = vec![0.0; c.d];
    c.mul(v, &mut cv);
    v.iter().zip(&cv).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
pub(crate) fn matrix_from_rows(rows: &[&[f64]]) -> CovarianceMatrix {
    let d = rows.len();
    let mut m = Vec::with_capacity(d * d);
    for r in rows {
        assert_eq!(r.len(), d);
        m.extend_from_slice(r);
    }
    CovarianceMatrix { m, d, sample_count: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn covariance_hand_values() {
        // Single point: zero matrix.
        let single = [&[1.0, 2.0][..]];
        let c = covariance(single.iter().copied());
        assert_eq!(c.entry(0, 0), 0.0);
        assert_eq!(c.entry(1, 1), 0.0);

        // 1-D {0, 2}: variance 1.
        let pts = [&[0.0][..], &[2.0][..]];
        let c = covariance(pts.iter().copied());
        assert_eq!(c.entry(0, 0), 1.0);

        // 2-D {(0,0),(1,1)}: all entries 0.25.
        let pts = [&[0.0, 0.0][..], &[1.0, 1.0][..]];
        let c = covariance(pts.iter().copied());
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(c.entry(i, j), 0.25);
            }
        }
    }

    #[test]
    fn variance_matches_covariance_diagonal() {
        let pts = [&[0.0, 0.0][..], &[0.0, 10.0][..]];
        assert_eq!(variance_per_axis(pts.iter().copied()), vec![0.0, 25.0]);

        let pts = [&[3.0, -1.0][..], &[5.0, 0.5][..], &[9.0, 2.0][..]];
        let var = variance_per_axis(pts.iter().copied());
        let c = covariance(pts.iter().copied());
        for j in 0..2 {
            assert_abs_diff_eq!(var[j], c.entry(j, j), epsilon = 1e-12);
        }

        let same = [&[4.0, 4.0][..], &[4.0, 4.0][..]];
        assert_eq!(variance_per_axis(same.iter().copied()), vec![0.0, 0.0]);
    }

    #[test]
    fn eigenvector_axis_aligned() {
        let c = matrix_from_rows(&[&[4.0, 0.0], &[0.0, 1.0]]);
        let v = principal_eigenvector(&c, 1e-10, 1000).unwrap();
        assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(v[1], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn eigenvector_analytic_2x2() {
        // [[2,1],[1,2]] has eigenpairs (3, (1,1)/sqrt2) and (1, (1,-1)/sqrt2).
        let c = matrix_from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let v = principal_eigenvector(&c, 1e-10, 1000).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(v[0], s, epsilon = 1e-8);
        assert_abs_diff_eq!(v[1], s, epsilon = 1e-8);
        assert_abs_diff_eq!(rayleigh_quotient(&c, &v), 3.0, epsilon = 1e-8);
    }

    #[test]
    fn isotropic_matrix_is_deterministic() {
        let c = matrix_from_rows(&[&[3.0, 0.0], &[0.0, 3.0]]);
        let v = principal_eigenvector(&c, 1e-10, 1000).unwrap();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rayleigh_quotient(&c, &v), 3.0, epsilon = 1e-8);
        // Start rule pins the output: axis 0 has the (tied) greatest variance.
        assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn zero_matrix_is_degenerate() {
        let c = matrix_from_rows(&[&[0.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(
            principal_eigenvector(&c, 1e-10, 1000),
            Err(Error::DegenerateCovariance)
        ));
    }

    #[test]
    fn unit_norm_and_sign_convention() {
        let c = matrix_from_rows(&[&[1.0, -2.0, 0.5], &[-2.0, 5.0, 1.0], &[0.5, 1.0, 2.0]]);
        let v = principal_eigenvector(&c, 1e-10, 1000).unwrap();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        let first = v.iter().find(|x| x.abs() > 1e-12).unwrap();
        assert!(*first > 0.0);
        // Dominant eigenvalue beats every axis variance.
        let lambda = rayleigh_quotient(&c, &v);
        for j in 0..3 {
            assert!(lambda >= c.entry(j, j) - 1e-9);
        }
    }
}
