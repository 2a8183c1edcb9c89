//! Distances, assignments, centroids and the sum-of-squared-error
//! objective, plus small combinatorial utilities.
//!
//! All ties break to the lowest index and all accumulation runs in point
//! order, so every deterministic caller is bit-reproducible.

use num_bigint::BigUint;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// An ordered list of K centers in R^D.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSet {
    centers: Vec<f64>, // row-major, k * d
    k: usize,
    d: usize,
}

impl CenterSet {
    pub fn new(centers: Vec<Vec<f64>>) -> Self {
        assert!(!centers.is_empty(), "a CenterSet holds at least one center");
        let d = centers[0].len();
        let k = centers.len();
        let mut flat = Vec::with_capacity(k * d);
        for c in &centers {
            assert_eq!(c.len(), d, "all centers share one dimension");
            flat.extend_from_slice(c);
        }
        Self { centers: flat, k, d }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn center(&self, i: usize) -> &[f64] {
        &self.centers[i * self.d..(i + 1) * self.d]
    }

    pub fn centers(&self) -> impl Iterator<Item = &[f64]> {
        self.centers.chunks_exact(self.d)
    }

    /// Centers sorted lexicographically; a canonical form for comparing
    /// center sets that may differ only in order.
    pub fn sorted(&self) -> Vec<Vec<f64>> {
        let mut rows: Vec<Vec<f64>> = self.centers().map(|c| c.to_vec()).collect();
        rows.sort_by(|a, b| a.partial_cmp(b).unwrap());
        rows
    }
}

/// A nearest-center assignment of every point, with cluster sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub labels: Vec<usize>,
    pub counts: Vec<usize>,
}

/// Squared Euclidean distance between two vectors of equal dimension.
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(squared_euclidean_unchecked(a, b))
}

#[inline]
pub(crate) fn squared_euclidean_unchecked(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let diff = x - y;
        acc += diff * diff;
    }
    acc
}

/// Index and squared distance of the nearest center; ties break to the
/// lowest center index.
pub fn nearest_center(point: &[f64], cs: &CenterSet) -> (usize, f64) {
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (i, c) in cs.centers().enumerate() {
        let dist = squared_euclidean_unchecked(point, c);
        if dist < best_dist {
            best = i;
            best_dist = dist;
        }
    }
    (best, best_dist)
}

/// Assign every point to its nearest center.
pub fn assign_nearest(ds: &Dataset, cs: &CenterSet) -> Assignment {
    let mut labels = Vec::with_capacity(ds.n());
    let mut counts = vec![0usize; cs.k()];
    for row in ds.rows() {
        let (i, _) = nearest_center(row, cs);
        labels.push(i);
        counts[i] += 1;
    }
    Assignment { labels, counts }
}

/// Recompute each center as the mean of its members. An empty cluster
/// keeps its previous center.
pub fn centroids(ds: &Dataset, a: &Assignment, k: usize, previous: &CenterSet) -> CenterSet {
    let d = ds.d();
    let mut sums = vec![0.0; k * d];
    for (row, &label) in ds.rows().zip(&a.labels) {
        let dst = &mut sums[label * d..(label + 1) * d];
        for (acc, &v) in dst.iter_mut().zip(row) {
            *acc += v;
        }
    }
    let mut centers = Vec::with_capacity(k);
    for i in 0..k {
        if a.counts[i] == 0 {
            centers.push(previous.center(i).to_vec());
        } else {
            let inv = 1.0 / a.counts[i] as f64;
            centers.push(sums[i * d..(i + 1) * d].iter().map(|s| s * inv).collect());
        }
    }
    CenterSet::new(centers)
}

/// Sum of squared distances from each point to its assigned center,
/// accumulated in point order.
pub fn sse(ds: &Dataset, cs: &CenterSet, a: &Assignment) -> f64 {
    let mut total = 0.0;
    for (row, &label) in ds.rows().zip(&a.labels) {
        total += squared_euclidean_unchecked(row, cs.center(label));
    }
    total
}

/// Stirling number of the second kind S(n, k): the number of ways to
/// partition n objects into k nonempty groups.
pub fn stirling_second(n: u32, k: u32) -> Result<BigUint> {
    if k < 1 || k > n {
        return Err(Error::Domain(format!("S({n}, {k}) requires 1 <= k <= n")));
    }
    // S(n,k) = k*S(n-1,k) + S(n-1,k-1), rolled over one row.
    let k = k as usize;
    let mut row: Vec<BigUint> = vec![BigUint::from(0u32); k + 1];
    row[1] = BigUint::from(1u32); // S(1,1)
    for _ in 2..=n {
        for j in (1..=k).rev() {
            let carry = row[j - 1].clone();
            row[j] = &row[j] * j as u32 + carry;
        }
    }
    Ok(row[k].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;

    fn ds(rows: Vec<Vec<f64>>) -> Dataset {
        Dataset::from_rows("t", rows, None).unwrap()
    }

    #[test]
    fn squared_euclidean_basics() {
        assert_eq!(squared_euclidean(&[0.0, 0.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(squared_euclidean(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 25.0);
        assert_eq!(
            squared_euclidean(&[1.0, 2.0, 3.0], &[4.0, 6.0, 3.0]).unwrap(),
            25.0
        );
        assert!(matches!(
            squared_euclidean(&[1.0], &[1.0, 2.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn assignment_and_tie_rule() {
        let data = ds(vec![vec![0.0], vec![10.0]]);
        let cs = CenterSet::new(vec![vec![1.0], vec![9.0]]);
        let a = assign_nearest(&data, &cs);
        assert_eq!(a.labels, vec![0, 1]);
        assert_eq!(a.counts, vec![1, 1]);

        // Equidistant point goes to the lowest center index.
        let tie = ds(vec![vec![5.0]]);
        let cs = CenterSet::new(vec![vec![4.0], vec![6.0]]);
        assert_eq!(assign_nearest(&tie, &cs).labels, vec![0]);
    }

    #[test]
    fn assignment_two_dimensional() {
        let data = ds(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![9.0, 9.0]]);
        let cs = CenterSet::new(vec![vec![0.0, 0.0], vec![10.0, 10.0]]);
        assert_eq!(assign_nearest(&data, &cs).labels, vec![0, 0, 1]);
    }

    #[test]
    fn centroid_update_and_empty_cluster() {
        let data = ds(vec![vec![0.0, 0.0], vec![2.0, 2.0]]);
        let prev = CenterSet::new(vec![vec![1.0, 0.0], vec![5.0, 5.0]]);
        let a = Assignment {
            labels: vec![0, 0],
            counts: vec![2, 0],
        };
        let cs = centroids(&data, &a, 2, &prev);
        assert_eq!(cs.center(0), &[1.0, 1.0]);
        assert_eq!(cs.center(1), &[5.0, 5.0]); // empty cluster keeps previous

        let data = ds(vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![6.0, 0.0]]);
        let a = Assignment {
            labels: vec![0, 0, 0],
            counts: vec![3],
        };
        let prev = CenterSet::new(vec![vec![0.0, 0.0]]);
        assert_eq!(centroids(&data, &a, 1, &prev).center(0), &[3.0, 0.0]);
    }

    #[test]
    fn sse_hand_values() {
        let data = ds(vec![vec![0.0], vec![2.0]]);
        let cs = CenterSet::new(vec![vec![1.0]]);
        let a = assign_nearest(&data, &cs);
        assert_eq!(sse(&data, &cs, &a), 2.0);

        let cs = CenterSet::new(vec![vec![0.0], vec![2.0]]);
        let a = assign_nearest(&data, &cs);
        assert_eq!(sse(&data, &cs, &a), 0.0);
    }

    #[test]
    fn centroid_is_optimal_for_fixed_assignment() {
        let data = ds(vec![vec![0.0, 1.0], vec![3.0, -1.0], vec![7.0, 2.0]]);
        let cs = CenterSet::new(vec![vec![1.0, 1.0], vec![6.0, 0.0]]);
        let a = assign_nearest(&data, &cs);
        let updated = centroids(&data, &a, 2, &cs);
        assert!(sse(&data, &updated, &a) <= sse(&data, &cs, &a));
    }

    // Brute-force oracle: count partitions of {0..n-1} into k nonempty
    // groups by enumerating all label vectors in restricted growth form.
    fn count_partitions(n: u32, k: u32) -> u64 {
        fn rec(labels: &mut Vec<u32>, n: u32, k: u32, used: u32) -> u64 {
            if labels.len() == n as usize {
                return u64::from(used == k);
            }
            let mut total = 0;
            for label in 0..=used.min(k - 1) {
                labels.push(label);
                let next_used = used.max(label + 1);
                total += rec(labels, n, k, next_used);
                labels.pop();
            }
            total
        }
        rec(&mut Vec::new(), n, k, 0)
    }

    #[test]
    fn stirling_matches_enumeration_up_to_ten() {
        for n in 1..=10u32 {
            for k in 1..=n {
                let expected = count_partitions(n, k);
                assert_eq!(
                    stirling_second(n, k).unwrap(),
                    BigUint::from(expected),
                    "S({n},{k})"
                );
            }
        }
    }

    #[test]
    fn stirling_known_values() {
        assert_eq!(stirling_second(4, 2).unwrap(), BigUint::from(7u32));
        assert_eq!(stirling_second(10, 3).unwrap(), BigUint::from(9330u32));
        for n in [1u32, 5, 9] {
            assert_eq!(stirling_second(n, 1).unwrap(), BigUint::from(1u32));
        }
        assert!(stirling_second(3, 4).is_err());
        assert!(stirling_second(3, 0).is_err());
    }
}
