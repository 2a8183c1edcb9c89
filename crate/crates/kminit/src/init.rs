//! The eight initialization methods: Forgy (F), MacQueen random (M),
//! maximin (X), k-means++ (K), Var-Part (V), PCA-Part (P) and the
//! Otsu-threshold variants Otsu Var-Part (OV) and Otsu PCA-Part (OP).
//!
//! F, M and K are random; the rest are deterministic and order-invariant.
//! The four hierarchical methods (V, P, OV, OP) share one divisive
//! engine parameterized by an axis rule and a split rule.

use std::fmt;
use std::str::FromStr;

use crate::core::{squared_euclidean_unchecked, CenterSet};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{covariance, principal_eigenvector, variance_per_axis};
use crate::otsu::{build_histogram, otsu_threshold, OtsuResult};
use crate::rng::SeededRng;

pub const DEFAULT_BINS: usize = 256;

/// Which direction a hierarchical split projects onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisRule {
    /// The coordinate axis with the greatest variance (ties to the lowest
    /// axis index).
    Variance,
    /// The principal eigenvector of the node covariance matrix; falls
    /// back to the variance axis when the covariance is zero.
    Pca,
}

/// Where a hierarchical split cuts the projected values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitRule {
    /// Cut at the mean projection: strictly-less goes left.
    Mean,
    /// Cut at the Otsu threshold of an L-bin histogram: bins <= t* go left.
    Otsu,
}

/// Canonical method identifiers as used in reports and on the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InitMethod {
    /// Forgy: random labels, centers are group centroids.
    F,
    /// MacQueen: k distinct random points.
    M,
    /// maximin: greedy farthest-point, seeded at the dataset centroid.
    X,
    /// k-means++: probabilistic farthest-point.
    K,
    /// Var-Part: variance axis, mean split.
    V,
    /// PCA-Part: principal eigenvector, mean split.
    P,
    /// Otsu Var-Part: variance axis, Otsu split.
    OV,
    /// Otsu PCA-Part: principal eigenvector, Otsu split.
    OP,
}

impl InitMethod {
    pub const ALL: [InitMethod; 8] = [
        InitMethod::F,
        InitMethod::M,
        InitMethod::X,
        InitMethod::K,
        InitMethod::V,
        InitMethod::P,
        InitMethod::OV,
        InitMethod::OP,
    ];

    pub fn is_random(self) -> bool {
        matches!(self, InitMethod::F | InitMethod::M | InitMethod::K)
    }

    /// Axis and split rules for the hierarchical methods, None otherwise.
    pub fn hierarchy_rules(self) -> Option<(AxisRule, SplitRule)> {
        match self {
            InitMethod::V => Some((AxisRule::Variance, SplitRule::Mean)),
            InitMethod::P => Some((AxisRule::Pca, SplitRule::Mean)),
            InitMethod::OV => Some((AxisRule::Variance, SplitRule::Otsu)),
            InitMethod::OP => Some((AxisRule::Pca, SplitRule::Otsu)),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            InitMethod::F => "F",
            InitMethod::M => "M",
            InitMethod::X => "X",
            InitMethod::K => "K",
            InitMethod::V => "V",
            InitMethod::P => "P",
            InitMethod::OV => "OV",
            InitMethod::OP => "OP",
        }
    }
}

impl fmt::Display for InitMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "F" => Ok(InitMethod::F),
            "M" => Ok(InitMethod::M),
            "X" => Ok(InitMethod::X),
            "K" => Ok(InitMethod::K),
            "V" => Ok(InitMethod::V),
            "P" => Ok(InitMethod::P),
            "OV" => Ok(InitMethod::OV),
            "OP" => Ok(InitMethod::OP),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

/// A node of the divisive hierarchy: a subset of point indices with its
/// centroid and within-node SSE cached.
#[derive(Debug, Clone)]
pub struct ClusterNode {
    pub members: Vec<usize>,
    pub centroid: Vec<f64>,
    pub sse: f64,
}

impl ClusterNode {
    pub fn new(ds: &Dataset, members: Vec<usize>) -> Self {
        assert!(!members.is_empty(), "a ClusterNode holds at least one point");
        let d = ds.d();
        let mut centroid = vec![0.0; d];
        for &i in &members {
            for (c, &v) in centroid.iter_mut().zip(ds.row(i)) {
                *c += v;
            }
        }
        let inv = 1.0 / members.len() as f64;
        for c in &mut centroid {
            *c *= inv;
        }
        let mut sse = 0.0;
        for &i in &members {
            sse += squared_euclidean_unchecked(ds.row(i), &centroid);
        }
        Self { members, centroid, sse }
    }

    /// Root node holding the whole dataset.
    pub fn root(ds: &Dataset) -> Self {
        Self::new(ds, (0..ds.n()).collect())
    }
}

/// The direction a node was projected onto before splitting.
#[derive(Debug, Clone, PartialEq)]
pub enum SplitAxis {
    Coordinate(usize),
    Principal(Vec<f64>),
}

/// Project a node's members onto the split direction chosen by `rule`.
///
/// Returns the per-member projections (in member order) and the direction.
/// A degenerate covariance under the PCA rule falls back to the variance
/// axis; a node with zero variance on every axis is unsplittable.
pub fn project_node(ds: &Dataset, node: &ClusterNode, rule: AxisRule) -> Result<(Vec<f64>, SplitAxis)> {
    let rows = node.members.iter().map(|&i| ds.row(i));
    if rule == AxisRule::Pca {
        let cov = covariance(rows.clone());
        match principal_eigenvector(&cov, 1e-10, 1000) {
            Ok(v) => {
                let projections = node
                    .members
                    .iter()
                    .map(|&i| dot(ds.row(i), &v))
                    .collect();
                return Ok((projections, SplitAxis::Principal(v)));
            }
            Err(Error::DegenerateCovariance) => {} // fall back to variance axis
            Err(e) => return Err(e),
        }
    }
    let var = variance_per_axis(rows);
    let mut axis = 0;
    for j in 1..var.len() {
        if var[j] > var[axis] {
            axis = j;
        }
    }
    if var[axis] == 0.0 {
        return Err(Error::DegenerateRange);
    }
    let projections = node.members.iter().map(|&i| ds.row(i)[axis]).collect();
    Ok((projections, SplitAxis::Coordinate(axis)))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Result of splitting one node into two children.
#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub left: ClusterNode,
    pub right: ClusterNode,
    pub axis: SplitAxis,
    /// The cut in projection units: mean of the projections (mean rule)
    /// or the Otsu cut value (otsu rule).
    pub threshold: f64,
    /// Mean of the projections, recorded for both rules.
    pub projection_mean: f64,
    /// Present for the otsu rule only.
    pub otsu: Option<OtsuResult>,
}

/// Split a node in two along the chosen axis and rule.
///
/// Mean rule: projection < mean goes left, >= mean goes right. Otsu rule:
/// histogram bin <= t* goes left. Both children are always nonempty.
pub fn split_node(
    ds: &Dataset,
    node: &ClusterNode,
    axis_rule: AxisRule,
    split_rule: SplitRule,
    bins: usize,
) -> Result<SplitOutcome> {
    if node.members.len() < 2 {
        return Err(Error::DegenerateRange);
    }
    let (projections, axis) = project_node(ds, node, axis_rule)?;
    let mean = projections.iter().sum::<f64>() / projections.len() as f64;

    let (threshold, otsu, go_left): (f64, Option<OtsuResult>, Box<dyn Fn(f64) -> bool>) =
        match split_rule {
            SplitRule::Mean => (mean, None, Box::new(move |p| p < mean)),
            SplitRule::Otsu => {
                let hist = build_histogram(&projections, bins)?;
                let result = otsu_threshold(&hist)?;
                let cut = result.cut_value;
                let t = result.threshold_bin;
                let h = hist.clone();
                (cut, Some(result), Box::new(move |p| h.bin_of(p) <= t))
            }
        };

    let mut left = Vec::new();
    let mut right = Vec::new();
    for (&idx, &p) in node.members.iter().zip(&projections) {
        if go_left(p) {
            left.push(idx);
        } else {
            right.push(idx);
        }
    }
    if left.is_empty() || right.is_empty() {
        return Err(Error::DegenerateRange);
    }
    Ok(SplitOutcome {
        left: ClusterNode::new(ds, left),
        right: ClusterNode::new(ds, right),
        axis,
        threshold,
        projection_mean: mean,
        otsu,
    })
}

/// One entry of a hierarchical initialization trace.
#[derive(Debug, Clone)]
pub struct SplitRecord {
    pub parent_sse: f64,
    pub axis: SplitAxis,
    pub threshold: f64,
    pub left_sse: f64,
    pub right_sse: f64,
}

/// Divisive hierarchical initialization: repeatedly split the
/// greatest-SSE leaf until k leaves exist, then return their centroids.
///
/// SSE ties select the oldest node; a leaf that cannot be split (singleton
/// or zero projection range) is passed over for the next-greatest leaf.
pub fn hierarchical_init(
    ds: &Dataset,
    k: usize,
    axis_rule: AxisRule,
    split_rule: SplitRule,
    bins: usize,
) -> Result<CenterSet> {
    hierarchical_init_trace(ds, k, axis_rule, split_rule, bins).map(|(cs, _)| cs)
}

/// As [`hierarchical_init`], also returning the sequence of splits.
pub fn hierarchical_init_trace(
    ds: &Dataset,
    k: usize,
    axis_rule: AxisRule,
    split_rule: SplitRule,
    bins: usize,
) -> Result<(CenterSet, Vec<SplitRecord>)> {
    check_k(ds, k)?;
    // Leaves in creation order; `splittable` goes false once a split fails.
    let mut leaves = vec![ClusterNode::root(ds)];
    let mut splittable = vec![true];
    let mut trace = Vec::with_capacity(k - 1);

    while leaves.len() < k {
        // Greatest-SSE splittable leaf; strict comparison keeps the oldest
        // on ties.
        let mut candidate: Option<usize> = None;
        for (i, node) in leaves.iter().enumerate() {
            if splittable[i] && candidate.map_or(true, |c| node.sse > leaves[c].sse) {
                candidate = Some(i);
            }
        }
        let Some(i) = candidate else {
            return Err(Error::UnsplittableData {
                leaves: leaves.len(),
                requested: k,
            });
        };
        match split_node(ds, &leaves[i], axis_rule, split_rule, bins) {
            Ok(outcome) => {
                trace.push(SplitRecord {
                    parent_sse: leaves[i].sse,
                    axis: outcome.axis,
                    threshold: outcome.threshold,
                    left_sse: outcome.left.sse,
                    right_sse: outcome.right.sse,
                });
                leaves[i] = outcome.left;
                leaves.push(outcome.right);
                splittable.push(true);
            }
            Err(Error::DegenerateRange) | Err(Error::DegenerateHistogram) => {
                splittable[i] = false;
            }
            Err(e) => return Err(e),
        }
    }
    let centers = CenterSet::new(leaves.into_iter().map(|n| n.centroid).collect());
    Ok((centers, trace))
}

fn check_k(ds: &Dataset, k: usize) -> Result<()> {
    if k < 1 || k > ds.n() {
        return Err(Error::TooManyClusters { k, n: ds.n() });
    }
    Ok(())
}

/// Forgy: assign each point a uniform random label and use the group
/// centroids. A group that comes out empty has its center re-drawn as a
/// uniformly random data point.
pub fn forgy(ds: &Dataset, k: usize, rng: &mut SeededRng) -> Result<CenterSet> {
    check_k(ds, k)?;
    let d = ds.d();
    let mut sums = vec![0.0; k * d];
    let mut counts = vec![0usize; k];
    for row in ds.rows() {
        let g = rng.next_index(k);
        counts[g] += 1;
        for (acc, &v) in sums[g * d..(g + 1) * d].iter_mut().zip(row) {
            *acc += v;
        }
    }
    let mut centers = Vec::with_capacity(k);
    for g in 0..k {
        if counts[g] == 0 {
            centers.push(ds.row(rng.next_index(ds.n())).to_vec());
        } else {
            let inv = 1.0 / counts[g] as f64;
            centers.push(sums[g * d..(g + 1) * d].iter().map(|s| s * inv).collect());
        }
    }
    Ok(CenterSet::new(centers))
}

/// MacQueen's random method: k distinct points drawn uniformly without
/// replacement.
pub fn macqueen_random(ds: &Dataset, k: usize, rng: &mut SeededRng) -> Result<CenterSet> {
    check_k(ds, k)?;
    let picks = rng.sample_indices(ds.n(), k);
    Ok(CenterSet::new(picks.into_iter().map(|i| ds.row(i).to_vec()).collect()))
}

/// maximin: the first center is the dataset centroid; each further center
/// is the point with the greatest minimum distance to the chosen centers,
/// ties to the lowest point index.
pub fn maximin(ds: &Dataset, k: usize) -> Result<CenterSet> {
    check_k(ds, k)?;
    let mut centers = vec![ds.centroid()];
    let mut min_dist: Vec<f64> = ds
        .rows()
        .map(|row| squared_euclidean_unchecked(row, &centers[0]))
        .collect();
    while centers.len() < k {
        let mut best = 0;
        for i in 1..ds.n() {
            if min_dist[i] > min_dist[best] {
                best = i;
            }
        }
        let chosen = ds.row(best).to_vec();
        for (i, row) in ds.rows().enumerate() {
            let dist = squared_euclidean_unchecked(row, &chosen);
            if dist < min_dist[i] {
                min_dist[i] = dist;
            }
        }
        centers.push(chosen);
    }
    Ok(CenterSet::new(centers))
}

/// k-means++: first center uniform over points, each next center drawn
/// with probability proportional to its squared minimum distance to the
/// chosen centers. If every remaining distance is zero (fewer than k
/// distinct points), the next center is drawn uniformly among unchosen
/// indices.
pub fn kmeanspp(ds: &Dataset, k: usize, rng: &mut SeededRng) -> Result<CenterSet> {
    check_k(ds, k)?;
    let n = ds.n();
    let first = rng.next_index(n);
    let mut chosen = vec![false; n];
    chosen[first] = true;
    let mut centers = vec![ds.row(first).to_vec()];
    let mut md: Vec<f64> = ds
        .rows()
        .map(|row| squared_euclidean_unchecked(row, &centers[0]))
        .collect();
    while centers.len() < k {
        let total: f64 = md.iter().sum();
        let next = if total > 0.0 {
            // Inverse-CDF draw over the md^2 weights.
            let target = rng.next_f64() * total;
            let mut acc = 0.0;
            let mut pick = n - 1;
            for (i, &w) in md.iter().enumerate() {
                acc += w;
                if target < acc {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            let unchosen: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            unchosen[rng.next_index(unchosen.len())]
        };
        chosen[next] = true;
        let center = ds.row(next).to_vec();
        for (i, row) in ds.rows().enumerate() {
            let dist = squared_euclidean_unchecked(row, &center);
            if dist < md[i] {
                md[i] = dist;
            }
        }
        centers.push(center);
    }
    Ok(CenterSet::new(centers))
}

/// Dispatch to the initializer named by `method`. The RNG is consumed
/// only by the random methods.
pub fn initialize(
    ds: &Dataset,
    method: InitMethod,
    k: usize,
    bins: usize,
    rng: &mut SeededRng,
) -> Result<CenterSet> {
    match method {
        InitMethod::F => forgy(ds, k, rng),
        InitMethod::M => macqueen_random(ds, k, rng),
        InitMethod::X => maximin(ds, k),
        InitMethod::K => kmeanspp(ds, k, rng),
        _ => {
            let (axis, split) = method.hierarchy_rules().unwrap();
            hierarchical_init(ds, k, axis, split, bins)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ds1(values: &[f64]) -> Dataset {
        Dataset::from_rows("t", values.iter().map(|&v| vec![v]).collect(), None).unwrap()
    }

    #[test]
    fn method_parsing_and_classification() {
        for m in InitMethod::ALL {
            assert_eq!(m.label().parse::<InitMethod>().unwrap(), m);
        }
        assert_eq!("ov".parse::<InitMethod>().unwrap(), InitMethod::OV);
        assert!(matches!(
            "Q".parse::<InitMethod>(),
            Err(Error::UnknownMethod(_))
        ));
        let random: Vec<_> = InitMethod::ALL.iter().filter(|m| m.is_random()).collect();
        assert_eq!(random.len(), 3); // F, M, K
        assert!(!InitMethod::X.is_random());
    }

    #[test]
    fn maximin_hand_example() {
        // Points {0, 1, 10}: centroid 11/3; 10 has min-distance 19/3 > 11/3.
        let data = ds1(&[0.0, 1.0, 10.0]);
        let cs = maximin(&data, 2).unwrap();
        assert_abs_diff_eq!(cs.center(0)[0], 11.0 / 3.0, epsilon = 1e-12);
        assert_eq!(cs.center(1)[0], 10.0);

        let cs = maximin(&data, 1).unwrap();
        assert_abs_diff_eq!(cs.center(0)[0], 11.0 / 3.0, epsilon = 1e-12);

        let corners = Dataset::from_rows(
            "t",
            vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]],
            None,
        )
        .unwrap();
        assert!(matches!(
            maximin(&corners, 5),
            Err(Error::TooManyClusters { k: 5, n: 4 })
        ));
    }

    #[test]
    fn maximin_tie_breaks_low_index() {
        // Symmetric points: 0 and 4 are equally far from the centroid 2.
        let data = ds1(&[0.0, 2.0, 4.0]);
        let cs = maximin(&data, 2).unwrap();
        assert_eq!(cs.center(1)[0], 0.0);
    }

    #[test]
    fn forgy_single_cluster_is_centroid() {
        let data = ds1(&[1.0, 2.0, 6.0]);
        let mut rng = SeededRng::new(99);
        let cs = forgy(&data, 1, &mut rng).unwrap();
        assert_abs_diff_eq!(cs.center(0)[0], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn forgy_is_seed_deterministic() {
        let data = ds1(&[0.0, 1.0, 2.0, 5.0, 9.0, 12.0]);
        let a = forgy(&data, 3, &mut SeededRng::new(7)).unwrap();
        let b = forgy(&data, 3, &mut SeededRng::new(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn macqueen_covers_all_points_at_k_equals_n() {
        let data = ds1(&[0.0, 1.0, 2.0, 3.0]);
        let cs = macqueen_random(&data, 4, &mut SeededRng::new(5)).unwrap();
        let mut picked: Vec<f64> = cs.centers().map(|c| c[0]).collect();
        picked.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(picked, vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn macqueen_single_pick_is_a_data_point() {
        let data = ds1(&[2.0, 4.0, 8.0]);
        let cs = macqueen_random(&data, 1, &mut SeededRng::new(1)).unwrap();
        assert!([2.0, 4.0, 8.0].contains(&cs.center(0)[0]));
    }

    #[test]
    fn kmeanspp_never_picks_duplicate_of_chosen_center() {
        // Two coincident points and one far away: with k=2, the second
        // center always has positive distance, so duplicates (md = 0)
        // are never selected while any md > 0 remains.
        let data = ds1(&[0.0, 0.0, 5.0]);
        for seed in 0..200 {
            let cs = kmeanspp(&data, 2, &mut SeededRng::new(seed)).unwrap();
            let d = (cs.center(0)[0] - cs.center(1)[0]).abs();
            assert_eq!(d, 5.0, "seed {seed}");
        }
    }

    #[test]
    fn kmeanspp_falls_back_when_fewer_distinct_points() {
        let data = ds1(&[3.0, 3.0, 3.0]);
        let cs = kmeanspp(&data, 3, &mut SeededRng::new(0)).unwrap();
        assert_eq!(cs.k(), 3);
        for c in cs.centers() {
            assert_eq!(c[0], 3.0);
        }
    }

    #[test]
    fn split_two_point_node() {
        let data = ds1(&[0.0, 10.0]);
        let node = ClusterNode::root(&data);
        for (axis, split) in [
            (AxisRule::Variance, SplitRule::Mean),
            (AxisRule::Pca, SplitRule::Mean),
            (AxisRule::Variance, SplitRule::Otsu),
            (AxisRule::Pca, SplitRule::Otsu),
        ] {
            let out = split_node(&data, &node, axis, split, 16).unwrap();
            assert_eq!(out.left.members, vec![0]);
            assert_eq!(out.right.members, vec![1]);
            assert_eq!(out.left.sse, 0.0);
            assert_eq!(out.right.sse, 0.0);
        }
    }

    #[test]
    fn split_partitions_members() {
        let data = ds1(&[1.0, 2.0, 3.0, 10.0, 11.0]);
        let node = ClusterNode::root(&data);
        let out = split_node(&data, &node, AxisRule::Variance, SplitRule::Mean, 16).unwrap();
        let mut all: Vec<usize> = out
            .left
            .members
            .iter()
            .chain(&out.right.members)
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3, 4]);
        // Mean = 5.4: {1,2,3} left, {10,11} right.
        assert_eq!(out.left.members, vec![0, 1, 2]);
        // Children SSEs sum to less than the parent's.
        assert!(out.left.sse + out.right.sse < node.sse);
    }

    #[test]
    fn split_singleton_or_constant_node_fails() {
        let data = ds1(&[4.0]);
        let node = ClusterNode::root(&data);
        assert!(matches!(
            split_node(&data, &node, AxisRule::Variance, SplitRule::Mean, 16),
            Err(Error::DegenerateRange)
        ));
        let flat = ds1(&[4.0, 4.0, 4.0]);
        let node = ClusterNode::root(&flat);
        assert!(matches!(
            split_node(&flat, &node, AxisRule::Pca, SplitRule::Otsu, 16),
            Err(Error::DegenerateRange)
        ));
    }

    #[test]
    fn hierarchical_k1_is_centroid() {
        let data = ds1(&[1.0, 2.0, 9.0]);
        let cs = hierarchical_init(&data, 1, AxisRule::Variance, SplitRule::Mean, 16).unwrap();
        assert_eq!(cs.k(), 1);
        assert_abs_diff_eq!(cs.center(0)[0], 4.0, epsilon = 1e-12);
    }

    #[test]
    fn hierarchical_leaf_sse_is_non_increasing() {
        let data = ds1(&[0.0, 1.0, 2.0, 8.0, 9.0, 20.0, 21.0, 22.0]);
        let (_, trace) =
            hierarchical_init_trace(&data, 4, AxisRule::Variance, SplitRule::Mean, 16).unwrap();
        assert_eq!(trace.len(), 3);
        for r in &trace {
            assert!(r.left_sse + r.right_sse <= r.parent_sse + 1e-12);
        }
    }

    #[test]
    fn hierarchical_reports_unsplittable_data() {
        let data = ds1(&[5.0, 5.0, 5.0, 5.0]);
        match hierarchical_init(&data, 3, AxisRule::Variance, SplitRule::Mean, 16) {
            Err(Error::UnsplittableData { leaves, requested }) => {
                assert_eq!(leaves, 1);
                assert_eq!(requested, 3);
            }
            other => panic!("expected UnsplittableData, got {other:?}"),
        }
    }

    #[test]
    fn hierarchical_skips_unsplittable_node() {
        // Three coincident points (SSE 0 node after split) plus a spread
        // group; the engine must keep splitting the spread side.
        let data = ds1(&[5.0, 5.0, 5.0, 0.0, 1.0, 10.0]);
        let cs = hierarchical_init(&data, 3, AxisRule::Variance, SplitRule::Mean, 16).unwrap();
        assert_eq!(cs.k(), 3);
    }

    #[test]
    fn pca_falls_back_to_variance_axis() {
        // Variance only along axis 1; covariance is rank-1, fine for PCA,
        // so instead make covariance zero in one direction but nonzero in
        // the other: PCA works. For the true fallback, use a node whose
        // covariance is exactly zero except... a zero matrix only arises
        // for coincident points, which is unsplittable anyway; so verify
        // the PCA rule agrees with the variance rule on axis-aligned data.
        let data = Dataset::from_rows(
            "t",
            vec![vec![1.0, 0.0], vec![1.0, 4.0], vec![1.0, 8.0]],
            None,
        )
        .unwrap();
        let node = ClusterNode::root(&data);
        let (proj_p, axis_p) = project_node(&data, &node, AxisRule::Pca).unwrap();
        let (proj_v, axis_v) = project_node(&data, &node, AxisRule::Variance).unwrap();
        assert_eq!(axis_v, SplitAxis::Coordinate(1));
        match axis_p {
            SplitAxis::Principal(v) => {
                assert_abs_diff_eq!(v[1].abs(), 1.0, epsilon = 1e-9);
            }
            other => panic!("unexpected axis {other:?}"),
        }
        // Projections differ only by the constant first coordinate.
        for (a, b) in proj_p.iter().zip(&proj_v) {
            assert_abs_diff_eq!(a - proj_p[0], b - proj_v[0], epsilon = 1e-9);
        }
    }

    #[test]
    fn deterministic_methods_are_bit_identical() {
        let data = Dataset::from_rows(
            "t",
            vec![
                vec![0.1, 0.9],
                vec![0.2, 0.8],
                vec![0.9, 0.1],
                vec![0.8, 0.2],
                vec![0.5, 0.5],
                vec![0.4, 0.6],
            ],
            None,
        )
        .unwrap();
        for m in [InitMethod::X, InitMethod::V, InitMethod::P, InitMethod::OV, InitMethod::OP] {
            let mut rng = SeededRng::new(0);
            let a = initialize(&data, m, 3, 16, &mut rng).unwrap();
            let b = initialize(&data, m, 3, 16, &mut rng).unwrap();
            assert_eq!(a, b, "method {m}");
        }
    }
}
