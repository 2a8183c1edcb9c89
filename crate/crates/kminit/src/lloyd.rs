//! Batch k-means (Lloyd's algorithm) with relative-improvement
//! convergence and per-iteration SSE accounting.

use crate::core::{assign_nearest, centroids, sse, Assignment, CenterSet};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Iteration cap and convergence threshold.
#[derive(Debug, Clone, Copy)]
pub struct KMeansConfig {
    pub max_iters: usize,
    pub epsilon: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            max_iters: 100,
            epsilon: 1e-6,
        }
    }
}

/// Outcome of one k-means run.
#[derive(Debug, Clone)]
pub struct KMeansResult {
    pub centers: CenterSet,
    pub assignment: Assignment,
    /// SSE of the initial centers, before any centroid update.
    pub initial_sse: f64,
    pub final_sse: f64,
    pub iterations: usize,
    /// SSE after each iteration's centroid update.
    pub sse_trace: Vec<f64>,
}

/// Run Lloyd's algorithm from the given initial centers.
///
/// One iteration is an assignment pass followed by a centroid update,
/// with SSE recorded after the update. The run stops when the relative
/// improvement (SSE_prev - SSE_cur)/SSE_cur drops to `epsilon` or below,
/// when SSE reaches exactly zero, or at `max_iters`.
pub fn run_kmeans(ds: &Dataset, init: CenterSet, cfg: &KMeansConfig) -> Result<KMeansResult> {
    if init.d() != ds.d() {
        return Err(Error::Dimension {
            left: init.d(),
            right: ds.d(),
        });
    }
    if init.k() > ds.n() {
        return Err(Error::TooManyClusters {
            k: init.k(),
            n: ds.n(),
        });
    }
    let k = init.k();
    let mut centers = init;
    let mut assignment = assign_nearest(ds, &centers);
    let initial_sse = sse(ds, &centers, &assignment);

    let mut prev = initial_sse;
    let mut trace = Vec::new();
    for _ in 0..cfg.max_iters {
        assignment = assign_nearest(ds, &centers);
        centers = centroids(ds, &assignment, k, &centers);
        let cur = sse(ds, &centers, &assignment);
        trace.push(cur);
        if cur == 0.0 {
            break;
        }
        if (prev - cur) / cur <= cfg.epsilon {
            break;
        }
        prev = cur;
    }
    Ok(KMeansResult {
        final_sse: *trace.last().unwrap(),
        iterations: trace.len(),
        sse_trace: trace,
        centers,
        assignment,
        initial_sse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ds1(values: &[f64]) -> Dataset {
        Dataset::from_rows("t", values.iter().map(|&v| vec![v]).collect(), None).unwrap()
    }

    #[test]
    fn separated_clusters_converge_in_one_iteration() {
        let data = ds1(&[0.0, 1.0, 10.0, 11.0]);
        let init = CenterSet::new(vec![vec![0.5], vec![10.5]]);
        let r = run_kmeans(&data, init, &KMeansConfig::default()).unwrap();
        assert_eq!(r.iterations, 1);
        assert_abs_diff_eq!(r.final_sse, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.initial_sse, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fixed_point_keeps_sse() {
        let data = ds1(&[0.0, 2.0, 7.0, 9.0]);
        let init = CenterSet::new(vec![vec![0.0], vec![9.0]]);
        let first = run_kmeans(&data, init, &KMeansConfig::default()).unwrap();
        // Restarting from the output centers terminates in one iteration
        // with unchanged SSE.
        let second = run_kmeans(&data, first.centers.clone(), &KMeansConfig::default()).unwrap();
        assert_eq!(second.iterations, 1);
        assert_eq!(second.initial_sse, first.final_sse);
        assert_eq!(second.final_sse, first.final_sse);
    }

    #[test]
    fn trace_is_non_increasing() {
        let data = ds1(&[0.0, 3.0, 4.0, 8.0, 13.0, 14.0, 20.0]);
        let init = CenterSet::new(vec![vec![0.0], vec![1.0], vec![2.0]]);
        let r = run_kmeans(&data, init, &KMeansConfig::default()).unwrap();
        assert!(r.initial_sse >= r.sse_trace[0]);
        for w in r.sse_trace.windows(2) {
            assert!(w[0] >= w[1]);
        }
        assert_eq!(r.final_sse, *r.sse_trace.last().unwrap());
        assert_eq!(r.iterations, r.sse_trace.len());
    }

    #[test]
    fn perfect_clustering_terminates_immediately() {
        let data = ds1(&[1.0, 5.0]);
        let init = CenterSet::new(vec![vec![1.0], vec![5.0]]);
        let r = run_kmeans(&data, init, &KMeansConfig::default()).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.initial_sse, 0.0);
        assert_eq!(r.final_sse, 0.0);
    }

    #[test]
    fn respects_iteration_cap() {
        let data = ds1(&[0.0, 1.0, 2.0, 3.0, 10.0, 11.0, 12.0, 30.0, 31.0]);
        let init = CenterSet::new(vec![vec![0.0], vec![0.5], vec![1.0]]);
        let cfg = KMeansConfig {
            max_iters: 2,
            epsilon: 0.0,
        };
        let r = run_kmeans(&data, init, &cfg).unwrap();
        assert!(r.iterations <= 2);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let data = ds1(&[0.0, 1.0]);
        let init = CenterSet::new(vec![vec![0.0, 0.0]]);
        assert!(matches!(
            run_kmeans(&data, init, &KMeansConfig::default()),
            Err(Error::Dimension { .. })
        ));
    }
}
