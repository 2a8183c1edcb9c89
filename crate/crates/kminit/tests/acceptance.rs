//! Acceptance gate: six criteria, one pass/fail line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines for passing criteria too. Criteria that need dataset files look
//! under `data/` at the workspace root (override with KMINIT_DATA_DIR)
//! and are skipped when the files are absent.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use kminit::bench::{
    compute_stats, normalize_criteria, relative_compare, summarize, CompareMode, Criterion,
    MethodStats, RunRecord,
};
use kminit::core::{assign_nearest, sse};
use kminit::dataset::{load_delimited, Dataset, DatasetSchema};
use kminit::init::{
    hierarchical_init_trace, initialize, kmeanspp, macqueen_random, project_node, split_node,
    AxisRule, ClusterNode, InitMethod, SplitAxis, SplitRule,
};
use kminit::linalg::{covariance, principal_eigenvector, rayleigh_quotient};
use kminit::lloyd::{run_kmeans, KMeansConfig};
use kminit::manifest::load_manifest;
use kminit::otsu::{between_class_variance, build_histogram, otsu_threshold};
use kminit::rng::SeededRng;

fn data_dir() -> PathBuf {
    match std::env::var_os("KMINIT_DATA_DIR") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

fn pass(n: usize, what: &str) {
    println!("[PASS] criterion {n}: {what}");
}

fn skip(n: usize, what: &str) {
    println!("[SKIP] criterion {n}: {what}");
}

/// Load one manifest dataset, min-max normalized, with its k.
fn load_normalized(name: &str) -> Option<(Dataset, usize)> {
    let dir = data_dir();
    let entries = load_manifest(&dir.join("manifest.toml")).ok()?;
    let entry = entries.iter().find(|e| e.name == name)?;
    entry.load_normalized(&dir).ok()
}

#[test]
fn criterion_1_ruspini_golden_trace() {
    let path = data_dir().join("ruspini.csv");
    if !path.is_file() {
        skip(1, "ruspini.csv not present");
        return;
    }
    let started = Instant::now();
    let schema = DatasetSchema::default();
    let file = std::fs::File::open(&path).unwrap();
    let ds = load_delimited("ruspini", std::io::BufReader::new(file), &schema).unwrap();
    assert_eq!(ds.n(), 75);

    // Raw coordinates, Var-Part, k=4.
    let (_, trace) =
        hierarchical_init_trace(&ds, 4, AxisRule::Variance, SplitRule::Mean, 256).unwrap();
    let expected = [(1usize, 92.026667), (0, 66.975000), (0, 41.057143)];
    assert_eq!(trace.len(), 3);
    for (record, (axis, threshold)) in trace.iter().zip(expected) {
        assert_eq!(record.axis, SplitAxis::Coordinate(axis), "split axis");
        assert!(
            (record.threshold - threshold).abs() <= 1e-4,
            "threshold {} vs expected {threshold}",
            record.threshold
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(1, "Ruspini split thresholds 92.026667/Y, 66.975000/X, 41.057143/X");
}

/// Initial/final SSE of the four deterministic hierarchical methods.
fn hierarchical_sse(ds: &Dataset, k: usize, method: InitMethod) -> (f64, f64) {
    let mut rng = SeededRng::new(0);
    let centers = initialize(ds, method, k, 256, &mut rng).unwrap();
    let initial = {
        let a = assign_nearest(ds, &centers);
        sse(ds, &centers, &a)
    };
    let result = run_kmeans(ds, centers, &KMeansConfig::default()).unwrap();
    (initial, result.final_sse)
}

#[test]
fn criterion_2_iris_wine_tables() {
    let (Some((iris, iris_k)), Some((wine, wine_k))) =
        (load_normalized("iris"), load_normalized("wine"))
    else {
        skip(2, "iris/wine not present");
        return;
    };
    let started = Instant::now();
    // (dataset, k, method, expected initial SSE, expected final SSE).
    // Tabulated values are integer-rounded (tolerance 0.5), with an
    // extra unit of slack for the eigenvector-dependent PCA methods.
    let cases = [
        (&iris, iris_k, InitMethod::V, 8.0, 7.0, 0.5),
        (&iris, iris_k, InitMethod::P, 8.0, 7.0, 1.5),
        (&iris, iris_k, InitMethod::OV, 7.0, 7.0, 0.5),
        (&iris, iris_k, InitMethod::OP, 7.0, 7.0, 1.5),
        (&wine, wine_k, InitMethod::V, 51.0, 49.0, 0.5),
        (&wine, wine_k, InitMethod::P, 53.0, 49.0, 1.5),
        (&wine, wine_k, InitMethod::OV, 50.0, 49.0, 0.5),
        (&wine, wine_k, InitMethod::OP, 51.0, 49.0, 1.5),
    ];
    for (ds, k, method, want_initial, want_final, tol) in cases {
        let (initial, final_sse) = hierarchical_sse(ds, k, method);
        assert!(
            (initial - want_initial).abs() <= tol,
            "{} {method}: initial {initial:.3} vs {want_initial} (tol {tol})",
            ds.name
        );
        assert!(
            (final_sse - want_final).abs() <= tol,
            "{} {method}: final {final_sse:.3} vs {want_final} (tol {tol})",
            ds.name
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(2, "Iris initial SSE 8/8/7/7, Wine 51/53/50/51, final 7 and 49");
}

#[test]
fn criterion_3_shuttle_split_example() {
    let Some((shuttle, _)) = load_normalized("shuttle") else {
        skip(3, "shuttle not present");
        return;
    };
    let started = Instant::now();
    assert_eq!(shuttle.n(), 58000);
    let root = ClusterNode::root(&shuttle);
    assert!((root.sse - 1836.0).abs() <= 2.0, "root SSE {:.2}", root.sse);

    let children = |rule: SplitRule| {
        let out = split_node(&shuttle, &root, AxisRule::Pca, rule, 256).unwrap();
        let mut pair = [out.left.sse, out.right.sse];
        pair.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pair
    };
    let mean_pair = children(SplitRule::Mean);
    assert!((mean_pair[0] - 408.0).abs() <= 2.0, "mean children {mean_pair:?}");
    assert!((mean_pair[1] - 809.0).abs() <= 2.0, "mean children {mean_pair:?}");
    let otsu_pair = children(SplitRule::Otsu);
    assert!((otsu_pair[0] - 101.0).abs() <= 2.0, "otsu children {otsu_pair:?}");
    assert!((otsu_pair[1] - 943.0).abs() <= 2.0, "otsu children {otsu_pair:?}");

    // Threshold bins: Otsu picks bin ~105 while the mean sits near bin 61.
    // The sigma_B^2 curve is numerically flat at its peak here (bins 104
    // and 105 differ by ~2.5e-7 relative, robust to eigenvector precision
    // from 1e-6 down to exact convergence), so the argmax between the two
    // is below reproducible precision; either neighbour is accepted. The
    // children SSEs above pin the split itself.
    let (projections, _) = project_node(&shuttle, &root, AxisRule::Pca).unwrap();
    let hist = build_histogram(&projections, 256).unwrap();
    let otsu = otsu_threshold(&hist).unwrap();
    assert!(
        otsu.threshold_bin == 104 || otsu.threshold_bin == 105,
        "otsu bin {} not in {{104, 105}}",
        otsu.threshold_bin
    );
    let mean = projections.iter().sum::<f64>() / projections.len() as f64;
    let mean_bin = hist.bin_of(mean);
    let binned_mean = hist
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| i as f64 * c as f64)
        .sum::<f64>()
        / hist.total as f64;
    let binned_mean_bin = binned_mean.round() as i64;
    let near_61 = |b: i64| (b - 61).abs() <= 1;
    assert!(
        near_61(mean_bin as i64) || near_61(binned_mean_bin),
        "mean bin {mean_bin}, binned-distribution mean {binned_mean:.2}"
    );
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    pass(3, "Shuttle PCA node 1836 -> mean {408,809}, Otsu {943,101}, bin 104/105 vs 61");
}

/// The full benchmark corpus: every dataset name with its original row
/// count. The comparison tallies and the summary ordering are only
/// asserted when all of these load at full size.
const FULL_CORPUS: [(&str, usize); 24] = [
    ("abalone", 4177),
    ("bcw", 683),
    ("breast_tissue", 106),
    ("ecoli", 336),
    ("glass", 214),
    ("heart", 297),
    ("ionosphere", 351),
    ("iris", 150),
    ("isolet", 7797),
    ("landsat", 6435),
    ("letter", 20000),
    ("magic", 19020),
    ("mfeat_fourier", 2000),
    ("musk2", 6598),
    ("optdigits", 5620),
    ("page_blocks", 5473),
    ("pima", 768),
    ("shuttle", 58000),
    ("spambase", 4601),
    ("spectf", 267),
    ("wall_following", 5456),
    ("wine_quality", 6497),
    ("wine", 178),
    ("yeast", 1484),
];

/// Deterministic-method runs over every loadable manifest dataset,
/// shared by criteria 4 and 6. The bool is true when the full corpus
/// loaded at its original sizes.
fn deterministic_runs() -> &'static (Vec<RunRecord>, bool) {
    static RUNS: OnceLock<(Vec<RunRecord>, bool)> = OnceLock::new();
    RUNS.get_or_init(|| {
        let dir = data_dir();
        let methods = [
            InitMethod::X,
            InitMethod::V,
            InitMethod::P,
            InitMethod::OV,
            InitMethod::OP,
        ];
        let Ok(entries) = load_manifest(&dir.join("manifest.toml")) else {
            return (Vec::new(), false);
        };
        let mut records = Vec::new();
        let mut sizes: BTreeMap<String, usize> = BTreeMap::new();
        for entry in &entries {
            let Ok((ds, k)) = entry.load_normalized(&dir) else { continue };
            sizes.insert(entry.name.clone(), ds.n());
            for method in methods {
                let mut rng = SeededRng::new(0);
                let centers = initialize(&ds, method, k, 256, &mut rng).unwrap();
                let r = run_kmeans(&ds, centers, &KMeansConfig::default()).unwrap();
                records.push(RunRecord {
                    dataset: entry.name.clone(),
                    method,
                    seed: None,
                    initial_sse: r.initial_sse,
                    final_sse: r.final_sse,
                    iterations: r.iterations,
                    cpu_ms: 0.0,
                });
            }
        }
        let complete = FULL_CORPUS
            .iter()
            .all(|&(name, n)| sizes.get(name) == Some(&n));
        (records, complete)
    })
}

fn stats_of_runs(records: &[RunRecord]) -> BTreeMap<(String, InitMethod), MethodStats> {
    compute_stats(records)
}

#[test]
fn criterion_4_relative_comparisons() {
    let (records, complete) = deterministic_runs();
    if records.is_empty() {
        skip(4, "no manifest datasets present");
        return;
    }
    let stats = stats_of_runs(records);
    let op_p = relative_compare(&stats, InitMethod::OP, InitMethod::P, CompareMode::Rounded);
    let ov_v = relative_compare(&stats, InitMethod::OV, InitMethod::V, CompareMode::Rounded);
    let initial = Criterion::InitialSse;
    let fin = Criterion::FinalSse;
    let pick = |tallies: [(usize, usize, usize); 4], c: Criterion| {
        tallies[match c {
            Criterion::InitialSse => 0,
            Criterion::FinalSse => 1,
            Criterion::Iterations => 2,
            Criterion::CpuMs => 3,
        }]
    };
    let got_op = pick(op_p, initial);
    let got_ov = pick(ov_v, fin);
    if !complete {
        skip(
            4,
            &format!(
                "partial manifest: OP vs P initial SSE {got_op:?}, OV vs V final SSE {got_ov:?} (not asserted)"
            ),
        );
        return;
    }
    assert_eq!(got_op, (1, 2, 21), "OP vs P on initial SSE");
    assert_eq!(got_ov, (6, 16, 2), "OV vs V on final SSE");
    pass(4, "OP vs P initial SSE (1,2,21); OV vs V final SSE (6,16,2)");
}

// ---- criterion 5: dataset-free property suite --------------------------

fn random_dataset(rng: &mut SeededRng) -> (Dataset, usize) {
    let n = 2 + rng.next_index(199); // 2..=200
    let d = 1 + rng.next_index(8); // 1..=8
    let k = 1 + rng.next_index(n.min(6)); // 1..=min(6,n)
    let rows = (0..n)
        .map(|_| (0..d).map(|_| rng.next_f64()).collect())
        .collect();
    (Dataset::from_rows("rand", rows, None).unwrap(), k)
}

fn check_lloyd_monotone() {
    let mut rng = SeededRng::new(101);
    for _ in 0..1000 {
        let (ds, k) = random_dataset(&mut rng);
        let init = macqueen_random(&ds, k, &mut rng).unwrap();
        let r = run_kmeans(&ds, init, &KMeansConfig::default()).unwrap();
        assert!(r.initial_sse >= r.sse_trace[0] - 1e-12 * r.initial_sse.abs());
        for w in r.sse_trace.windows(2) {
            assert!(w[0] >= w[1] - 1e-12 * w[0].abs(), "trace increased: {w:?}");
        }
        assert!(r.iterations <= 100);
    }
}

fn check_otsu_against_oracle() {
    let mut rng = SeededRng::new(202);
    let mut done = 0;
    while done < 1000 {
        let bins = 4 + rng.next_index(1021); // 4..=1024
        let counts: Vec<u64> = (0..bins)
            .map(|_| {
                if rng.next_f64() < 0.3 {
                    0
                } else {
                    rng.next_index(50) as u64
                }
            })
            .collect();
        if counts.iter().filter(|&&c| c > 0).count() < 2 {
            continue;
        }
        let h = kminit::otsu::Histogram {
            total: counts.iter().sum(),
            counts,
            lo: 0.0,
            hi: 1.0,
        };
        // Exhaustive-scan oracle over every threshold.
        let n = h.total as f64;
        let mu_t: f64 = h
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| i as f64 * c as f64 / n)
            .sum();
        // Total histogram variance: the scale of the terms cancelled in
        // sigma_B^2, and its upper bound. Where sigma_B^2 itself is near
        // zero the two formulas agree only up to rounding at this scale,
        // so the relative tolerance is taken against it.
        let total_var: f64 = h
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as f64 - mu_t).powi(2) * c as f64 / n)
            .sum();
        let mut best_t = 0;
        let mut best = -1.0;
        for t in 0..h.bins() - 1 {
            let s = between_class_variance(&h, t).unwrap();
            if s > best {
                best = s;
                best_t = t;
            }
            // Efficient formula vs definitional p0*p1*(mu0-mu1)^2.
            let p0: f64 = h.counts[..=t].iter().map(|&c| c as f64 / n).sum();
            let p1 = 1.0 - p0;
            if p0 > 0.0 && p1 > 0.0 {
                let mu0 = h.counts[..=t]
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| i as f64 * c as f64 / n)
                    .sum::<f64>()
                    / p0;
                let mu1 = h.counts[t + 1..]
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (t + 1 + i) as f64 * c as f64 / n)
                    .sum::<f64>()
                    / p1;
                let definitional = p0 * p1 * (mu0 - mu1) * (mu0 - mu1);
                assert!(
                    (s - definitional).abs() <= 1e-9 * definitional.max(total_var),
                    "sigma identity broke at t={t}: {s} vs {definitional}"
                );
            }
        }
        let got = otsu_threshold(&h).unwrap();
        assert_eq!(got.threshold_bin, best_t, "single-pass vs exhaustive");
        done += 1;
    }
}

/// Random symmetric PSD matrix with a known largest eigenvalue, built
/// as Q diag(lambda) Q^T from a random orthonormal basis.
fn random_psd(rng: &mut SeededRng, d: usize) -> (Vec<Vec<f64>>, f64) {
    // Random orthonormal basis by Gram-Schmidt.
    let mut q: Vec<Vec<f64>> = Vec::new();
    while q.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
        for u in &q {
            let proj: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        for x in &mut v {
            *x /= norm;
        }
        q.push(v);
    }
    // Eigenvalues with a clear spectral gap so power iteration converges.
    let mut lambdas = vec![1.0 + rng.next_f64()];
    for _ in 1..d {
        lambdas.push(rng.next_f64() * (lambdas[0] - 0.2));
    }
    let mut m = vec![vec![0.0; d]; d];
    for (idx, l) in lambdas.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                m[i][j] += l * q[idx][i] * q[idx][j];
            }
        }
    }
    (m, lambdas[0])
}

fn check_power_method() {
    let mut rng = SeededRng::new(303);
    for d in [2usize, 3] {
        for _ in 0..500 {
            let (m, lambda_max) = random_psd(&mut rng, d);
            let cov = covariance_with_entries(&m);
            let v = principal_eigenvector(&cov, 1e-12, 10000).unwrap();
            let lambda = rayleigh_quotient(&cov, &v);
            assert!(
                (lambda - lambda_max).abs() <= 1e-8 * lambda_max.max(1.0),
                "d={d}: rayleigh {lambda} vs analytic {lambda_max}"
            );
        }
    }
}

/// Build a CovarianceMatrix whose entries equal `m`, staying within the
/// public API: for a Cholesky factor L of m, the 2d zero-mean points
/// {±sqrt(d)·L[:,i]} have population covariance exactly L·L^T = m.
fn covariance_with_entries(m: &[Vec<f64>]) -> kminit::linalg::CovarianceMatrix {
    let d = m.len();
    let mut l = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let mut sum = m[i][j];
            for p in 0..j {
                sum -= l[i][p] * l[j][p];
            }
            if i == j {
                l[i][j] = sum.max(0.0).sqrt();
            } else {
                l[i][j] = if l[j][j] > 1e-300 { sum / l[j][j] } else { 0.0 };
            }
        }
    }
    let scale = (d as f64).sqrt();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for col in 0..d {
        let r: Vec<f64> = (0..d).map(|i| l[i][col] * scale).collect();
        rows.push(r.iter().map(|x| -x).collect());
        rows.push(r);
    }
    covariance(rows.iter().map(|r| r.as_slice()))
}

fn check_kmeanspp_distribution() {
    let ds = Dataset::from_rows("pp", vec![vec![0.0], vec![1.0], vec![3.0]], None).unwrap();
    let mut seed = 0u64;
    let mut trials = 0;
    let mut picked_one = 0;
    while trials < 10_000 {
        let mut rng = SeededRng::new(seed);
        seed += 1;
        let cs = kmeanspp(&ds, 2, &mut rng).unwrap();
        if cs.center(0)[0] != 0.0 {
            continue; // condition on the first center being point 0
        }
        trials += 1;
        if cs.center(1)[0] == 1.0 {
            picked_one += 1;
        }
    }
    let freq = picked_one as f64 / 10_000.0;
    assert!(
        (freq - 0.1).abs() <= 0.02,
        "second-center frequency for point 1: {freq}"
    );
}

fn check_order_invariance() {
    let mut rng = SeededRng::new(404);
    let methods = [
        InitMethod::X,
        InitMethod::V,
        InitMethod::P,
        InitMethod::OV,
        InitMethod::OP,
    ];
    for _ in 0..100 {
        let (ds, k) = random_dataset(&mut rng);
        // Permuted copy of the same points.
        let mut order: Vec<usize> = (0..ds.n()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.next_index(i + 1));
        }
        let permuted = Dataset::from_rows(
            "perm",
            order.iter().map(|&i| ds.row(i).to_vec()).collect(),
            None,
        )
        .unwrap();
        for method in methods {
            let mut r1 = SeededRng::new(0);
            let Ok(a) = initialize(&ds, method, k, 64, &mut r1) else { continue };
            // Identical input -> bit-identical output.
            let mut r2 = SeededRng::new(0);
            let a2 = initialize(&ds, method, k, 64, &mut r2).unwrap();
            assert_eq!(a, a2, "{method}: rerun not bit-identical");
            // Permuted input -> same centers up to ordering.
            let mut r3 = SeededRng::new(0);
            let Ok(b) = initialize(&permuted, method, k, 64, &mut r3) else {
                panic!("{method}: split succeeded only in one point order")
            };
            let sa = a.sorted();
            let sb = b.sorted();
            for (ca, cb) in sa.iter().zip(&sb) {
                for (x, y) in ca.iter().zip(cb) {
                    assert!(
                        (x - y).abs() <= 1e-9 * x.abs().max(1.0),
                        "{method}: permuted centers differ: {sa:?} vs {sb:?}"
                    );
                }
            }
        }
    }
}

fn check_stirling() {
    use num_bigint::BigUint;
    assert_eq!(
        kminit::core::stirling_second(4, 2).unwrap(),
        BigUint::from(7u32)
    );
    assert_eq!(
        kminit::core::stirling_second(10, 3).unwrap(),
        BigUint::from(9330u32)
    );
}

#[test]
fn criterion_5_property_suite() {
    check_lloyd_monotone();
    check_otsu_against_oracle();
    check_power_method();
    check_kmeanspp_distribution();
    check_order_invariance();
    check_stirling();
    pass(5, "Lloyd monotone, Otsu oracle, power method, k-means++ frequencies, order invariance, Stirling");
}

#[test]
fn criterion_6_deterministic_summary() {
    let (records, complete) = deterministic_runs();
    if records.is_empty() {
        skip(6, "no manifest datasets present");
        return;
    }
    let stats = stats_of_runs(records);
    let normalized = normalize_criteria(&stats);
    let summary = summarize(&normalized);
    let value = |m: InitMethod| summary[&m][0].min; // normalized min initial SSE
    let got = [
        (InitMethod::OP, value(InitMethod::OP)),
        (InitMethod::P, value(InitMethod::P)),
        (InitMethod::OV, value(InitMethod::OV)),
        (InitMethod::V, value(InitMethod::V)),
        (InitMethod::X, value(InitMethod::X)),
    ];
    let line = got
        .iter()
        .map(|(m, v)| format!("{m}={v:.3}"))
        .collect::<Vec<_>>()
        .join(" ");
    // Values are asserted on however much of the corpus is available;
    // the strict ordering only on the full corpus at original sizes.
    let expected = [1.002, 1.043, 1.067, 1.107, 2.184];
    for ((m, v), e) in got.iter().zip(expected) {
        assert!((v - e).abs() <= 0.05, "{m}: normalized min initial SSE {v:.3} vs {e}");
    }
    if *complete {
        for w in got.windows(2) {
            assert!(w[0].1 < w[1].1, "ordering OP < P < OV < V < X broke: {line}");
        }
        pass(6, &format!("normalized min initial SSE summary {line}"));
    } else {
        pass(
            6,
            &format!("normalized min initial SSE summary {line} (partial corpus; ordering not asserted)"),
        );
    }
}
