//! Benchmark harness: seeded multi-run execution, per-method statistics,
//! normalized criteria, overall summaries, relative comparisons, and
//! report emission (tables, run log, box-plot data).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::core::sse;
use crate::core::assign_nearest;
use crate::dataset::Dataset;
use crate::error::Result;
use crate::init::{initialize, InitMethod};
use crate::lloyd::{run_kmeans, KMeansConfig};
use crate::rng::SeededRng;

/// The four evaluation criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    InitialSse,
    FinalSse,
    Iterations,
    CpuMs,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::InitialSse,
        Criterion::FinalSse,
        Criterion::Iterations,
        Criterion::CpuMs,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Criterion::InitialSse => "initial_sse",
            Criterion::FinalSse => "final_sse",
            Criterion::Iterations => "iterations",
            Criterion::CpuMs => "cpu_ms",
        }
    }

    fn index(self) -> usize {
        match self {
            Criterion::InitialSse => 0,
            Criterion::FinalSse => 1,
            Criterion::Iterations => 2,
            Criterion::CpuMs => 3,
        }
    }
}

/// One (dataset, method, seed) execution.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub dataset: String,
    pub method: InitMethod,
    /// Seed used by the initializer; None for deterministic methods.
    pub seed: Option<u64>,
    pub initial_sse: f64,
    pub final_sse: f64,
    pub iterations: usize,
    /// Initialization plus clustering CPU time (user + system).
    pub cpu_ms: f64,
}

impl RunRecord {
    pub fn value(&self, c: Criterion) -> f64 {
        match c {
            Criterion::InitialSse => self.initial_sse,
            Criterion::FinalSse => self.final_sse,
            Criterion::Iterations => self.iterations as f64,
            Criterion::CpuMs => self.cpu_ms,
        }
    }
}

/// A run that failed during initialization or clustering; excluded from
/// statistics but reported.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub dataset: String,
    pub method: InitMethod,
    pub seed: Option<u64>,
    pub message: String,
}

/// min/mean/stdev of one criterion over a method's runs.
#[derive(Debug, Clone, Copy, Default)]
pub struct Stats {
    pub min: f64,
    pub mean: f64,
    pub stdev: f64,
    pub runs: usize,
}

/// Per-criterion statistics for one (dataset, method) cell.
#[derive(Debug, Clone, Default)]
pub struct MethodStats {
    per_criterion: [Stats; 4],
}

impl MethodStats {
    pub fn get(&self, c: Criterion) -> Stats {
        self.per_criterion[c.index()]
    }
}

/// Welford one-pass accumulation; stdev is the sample (n-1) form.
fn stats_of(values: &[f64]) -> Stats {
    let mut min = f64::INFINITY;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &v) in values.iter().enumerate() {
        if v < min {
            min = v;
        }
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    let n = values.len();
    let stdev = if n > 1 { (m2 / (n - 1) as f64).sqrt() } else { 0.0 };
    Stats { min, mean, stdev, runs: n }
}

/// Normalized ratios for one cell: value / best value on that dataset.
/// The stdev ratio is absent for deterministic methods.
#[derive(Debug, Clone, Copy, Default)]
pub struct NormalizedStats {
    pub min: f64,
    pub mean: f64,
    pub stdev: Option<f64>,
}

/// Per-method summary over datasets: mean of normalized min and mean,
/// median of normalized stdev (random methods only).
#[derive(Debug, Clone, Copy, Default)]
pub struct SummaryRow {
    pub min: f64,
    pub mean: f64,
    pub stdev: Option<f64>,
}

/// Statistics, normalized ratios, and summaries for a benchmark run.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub datasets: Vec<String>,
    pub methods: Vec<InitMethod>,
    pub records: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
    pub stats: BTreeMap<(String, InitMethod), MethodStats>,
    pub normalized: BTreeMap<(String, InitMethod), [NormalizedStats; 4]>,
    pub summary: BTreeMap<InitMethod, [SummaryRow; 4]>,
}

/// Process CPU time (user + system) in milliseconds.
pub fn cpu_time_ms() -> f64 {
    let mut usage = unsafe { std::mem::zeroed::<libc::rusage>() };
    let rc = unsafe { libc::getrusage(libc::RUSAGE_SELF, &mut usage) };
    assert_eq!(rc, 0, "getrusage failed");
    let to_ms = |tv: libc::timeval| tv.tv_sec as f64 * 1e3 + tv.tv_usec as f64 * 1e-3;
    to_ms(usage.ru_utime) + to_ms(usage.ru_stime)
}

/// Execute the protocol: each random method runs `runs_random` times with
/// seeds base_seed..base_seed+runs_random-1, each deterministic method
/// once. Failed runs are collected separately.
pub fn run_benchmark(
    tasks: &[(&Dataset, usize)],
    methods: &[InitMethod],
    runs_random: usize,
    base_seed: u64,
    cfg: &KMeansConfig,
    bins: usize,
) -> (Vec<RunRecord>, Vec<RunFailure>) {
    assert!(runs_random >= 1);
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for &(ds, k) in tasks {
        for &method in methods {
            let seeds: Vec<Option<u64>> = if method.is_random() {
                (0..runs_random as u64).map(|i| Some(base_seed + i)).collect()
            } else {
                vec![None]
            };
            for seed in seeds {
                let mut rng = SeededRng::new(seed.unwrap_or(0));
                let started = cpu_time_ms();
                let outcome = initialize(ds, method, k, bins, &mut rng)
                    .and_then(|cs| run_kmeans(ds, cs, cfg));
                let cpu_ms = cpu_time_ms() - started;
                match outcome {
                    Ok(r) => records.push(RunRecord {
                        dataset: ds.name.clone(),
                        method,
                        seed,
                        initial_sse: r.initial_sse,
                        final_sse: r.final_sse,
                        iterations: r.iterations,
                        cpu_ms,
                    }),
                    Err(e) => failures.push(RunFailure {
                        dataset: ds.name.clone(),
                        method,
                        seed,
                        message: e.to_string(),
                    }),
                }
            }
        }
    }
    (records, failures)
}

/// Group records into per-(dataset, method) statistics.
pub fn compute_stats(records: &[RunRecord]) -> BTreeMap<(String, InitMethod), MethodStats> {
    let mut grouped: BTreeMap<(String, InitMethod), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        grouped.entry((r.dataset.clone(), r.method)).or_default().push(r);
    }
    grouped
        .into_iter()
        .map(|(key, runs)| {
            let mut ms = MethodStats::default();
            for c in Criterion::ALL {
                let values: Vec<f64> = runs.iter().map(|r| r.value(c)).collect();
                ms.per_criterion[c.index()] = stats_of(&values);
            }
            (key, ms)
        })
        .collect()
}

/// Divide each statistic by the best (least) value among methods on the
/// same dataset and criterion. Stdev ratios use the best nonzero stdev
/// among random methods and are absent for deterministic methods.
pub fn normalize_criteria(
    stats: &BTreeMap<(String, InitMethod), MethodStats>,
) -> BTreeMap<(String, InitMethod), [NormalizedStats; 4]> {
    let datasets: Vec<String> = {
        let mut v: Vec<String> = stats.keys().map(|(d, _)| d.clone()).collect();
        v.dedup();
        v
    };
    let mut out = BTreeMap::new();
    for ds in &datasets {
        let cells: Vec<(&InitMethod, &MethodStats)> = stats
            .iter()
            .filter(|((d, _), _)| d == ds)
            .map(|((_, m), s)| (m, s))
            .collect();
        for c in Criterion::ALL {
            let ratio = |v: f64, best: f64| {
                if best == 0.0 {
                    if v == 0.0 { 1.0 } else { f64::INFINITY }
                } else {
                    v / best
                }
            };
            let best_min = cells.iter().map(|(_, s)| s.get(c).min).fold(f64::INFINITY, f64::min);
            let best_mean = cells.iter().map(|(_, s)| s.get(c).mean).fold(f64::INFINITY, f64::min);
            let best_stdev = cells
                .iter()
                .filter(|(m, _)| m.is_random())
                .map(|(_, s)| s.get(c).stdev)
                .filter(|&s| s > 0.0)
                .fold(f64::INFINITY, f64::min);
            for (m, s) in &cells {
                let entry: &mut [NormalizedStats; 4] =
                    out.entry((ds.clone(), **m)).or_insert_with(Default::default);
                entry[c.index()] = NormalizedStats {
                    min: ratio(s.get(c).min, best_min),
                    mean: ratio(s.get(c).mean, best_mean),
                    stdev: if m.is_random() && best_stdev.is_finite() {
                        Some(s.get(c).stdev / best_stdev)
                    } else {
                        None
                    },
                };
            }
        }
    }
    out
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Summarize normalized ratios over datasets: mean for the min and mean
/// statistics, median for stdev (random methods only).
pub fn summarize(
    normalized: &BTreeMap<(String, InitMethod), [NormalizedStats; 4]>,
) -> BTreeMap<InitMethod, [SummaryRow; 4]> {
    let mut methods: Vec<InitMethod> = normalized.keys().map(|(_, m)| *m).collect();
    methods.sort_unstable();
    methods.dedup();
    let mut out = BTreeMap::new();
    for m in methods {
        let cells: Vec<&[NormalizedStats; 4]> = normalized
            .iter()
            .filter(|((_, mm), _)| *mm == m)
            .map(|(_, v)| v)
            .collect();
        let mut rows = [SummaryRow::default(); 4];
        for c in Criterion::ALL {
            let n = cells.len() as f64;
            let min_mean = cells.iter().map(|v| v[c.index()].min).sum::<f64>() / n;
            let mean_mean = cells.iter().map(|v| v[c.index()].mean).sum::<f64>() / n;
            let mut stdevs: Vec<f64> =
                cells.iter().filter_map(|v| v[c.index()].stdev).collect();
            stdevs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            rows[c.index()] = SummaryRow {
                min: min_mean,
                mean: mean_mean,
                stdev: if stdevs.is_empty() { None } else { Some(median(&stdevs)) },
            };
        }
        out.insert(m, rows);
    }
    out
}

/// How values are compared in [`relative_compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMode {
    /// Round both mean values to integers before comparing.
    Rounded,
    /// Compare the exact floating-point means.
    Exact,
}

/// Per criterion: on how many datasets method `a`'s mean value is worse
/// (greater), the same, or better (less) than method `b`'s.
pub fn relative_compare(
    stats: &BTreeMap<(String, InitMethod), MethodStats>,
    a: InitMethod,
    b: InitMethod,
    mode: CompareMode,
) -> [(usize, usize, usize); 4] {
    let mut out = [(0usize, 0usize, 0usize); 4];
    for ((ds, m), sa) in stats {
        if *m != a {
            continue;
        }
        let Some(sb) = stats.get(&(ds.clone(), b)) else { continue };
        for c in Criterion::ALL {
            let (va, vb) = match mode {
                CompareMode::Rounded => (sa.get(c).mean.round(), sb.get(c).mean.round()),
                CompareMode::Exact => (sa.get(c).mean, sb.get(c).mean),
            };
            let slot = &mut out[c.index()];
            if va > vb {
                slot.0 += 1;
            } else if va == vb {
                slot.1 += 1;
            } else {
                slot.2 += 1;
            }
        }
    }
    out
}

impl BenchReport {
    /// Assemble stats, normalized ratios and summaries from raw records.
    pub fn from_records(records: Vec<RunRecord>, failures: Vec<RunFailure>) -> Self {
        let mut datasets: Vec<String> = records.iter().map(|r| r.dataset.clone()).collect();
        datasets.dedup();
        let mut methods: Vec<InitMethod> = records.iter().map(|r| r.method).collect();
        methods.sort_unstable();
        methods.dedup();
        let stats = compute_stats(&records);
        let normalized = normalize_criteria(&stats);
        let summary = summarize(&normalized);
        Self {
            datasets,
            methods,
            records,
            failures,
            stats,
            normalized,
            summary,
        }
    }
}

/// Linearly interpolated quantile of a sorted slice.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Box-plot summary of a value list: min, Q1, median, Q3, max, mean.
pub fn box_summary(values: &[f64]) -> [f64; 6] {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
    [
        sorted[0],
        quantile(&sorted, 0.25),
        quantile(&sorted, 0.5),
        quantile(&sorted, 0.75),
        sorted[sorted.len() - 1],
        mean,
    ]
}

/// Write per-criterion tables, the machine-readable run log, failure
/// notes, the summary table, and box-plot data under `dir`.
pub fn emit_report(report: &BenchReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;

    // One table per criterion: dataset rows, per-method min/mean/stdev.
    for c in Criterion::ALL {
        let mut text = String::from("dataset");
        for m in &report.methods {
            write!(text, "\t{m}_min\t{m}_mean\t{m}_stdev").unwrap();
        }
        text.push('\n');
        for ds in &report.datasets {
            text.push_str(ds);
            for m in &report.methods {
                match report.stats.get(&(ds.clone(), *m)) {
                    Some(s) => {
                        let s = s.get(c);
                        write!(text, "\t{:.6}\t{:.6}\t{:.6}", s.min, s.mean, s.stdev).unwrap();
                    }
                    None => text.push_str("\t-\t-\t-"),
                }
            }
            text.push('\n');
        }
        fs::write(dir.join(format!("table_{}.tsv", c.label())), text)?;
    }

    // Machine-readable run log, one record per run.
    let mut log = String::from("dataset\tmethod\tseed\tinitial_sse\tfinal_sse\titerations\tcpu_ms\n");
    for r in &report.records {
        let seed = r.seed.map_or_else(|| "-".to_string(), |s| s.to_string());
        writeln!(
            log,
            "{}\t{}\t{}\t{:.6}\t{:.6}\t{}\t{}",
            r.dataset, r.method, seed, r.initial_sse, r.final_sse, r.iterations,
            r.cpu_ms.round() as i64
        )
        .unwrap();
    }
    fs::write(dir.join("runs.tsv"), log)?;

    if !report.failures.is_empty() {
        let mut text = String::from("dataset\tmethod\tseed\terror\n");
        for f in &report.failures {
            let seed = f.seed.map_or_else(|| "-".to_string(), |s| s.to_string());
            writeln!(text, "{}\t{}\t{}\t{}", f.dataset, f.method, seed, f.message).unwrap();
        }
        fs::write(dir.join("failures.tsv"), text)?;
    }

    // Overall summary (normalized; stdev rows blank for deterministic).
    let mut text = String::from("method\tcriterion\tnorm_min_mean\tnorm_mean_mean\tnorm_stdev_median\n");
    for m in &report.methods {
        if let Some(rows) = report.summary.get(m) {
            for c in Criterion::ALL {
                let row = rows[c.index()];
                let stdev = row
                    .stdev
                    .map_or_else(|| "--".to_string(), |v| format!("{v:.3}"));
                writeln!(
                    text,
                    "{}\t{}\t{:.3}\t{:.3}\t{}",
                    m,
                    c.label(),
                    row.min,
                    row.mean,
                    stdev
                )
                .unwrap();
            }
        }
    }
    fs::write(dir.join("summary.tsv"), text)?;

    // Box-plot data: per (method, criterion, statistic) the six summary
    // numbers over the normalized per-dataset ratios.
    let mut text = String::from("method\tcriterion\tstatistic\tmin\tq1\tmedian\tq3\tmax\tmean\n");
    for m in &report.methods {
        for c in Criterion::ALL {
            let collect = |pick: &dyn Fn(&NormalizedStats) -> Option<f64>| -> Vec<f64> {
                report
                    .normalized
                    .iter()
                    .filter(|((_, mm), _)| mm == m)
                    .filter_map(|(_, v)| pick(&v[c.index()]))
                    .collect()
            };
            let groups: [(&str, Vec<f64>); 3] = [
                ("min", collect(&|n| Some(n.min))),
                ("mean", collect(&|n| Some(n.mean))),
                ("stdev", collect(&|n| n.stdev)),
            ];
            for (stat, values) in groups {
                if values.is_empty() {
                    continue;
                }
                let b = box_summary(&values);
                writeln!(
                    text,
                    "{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
                    m, c.label(), stat, b[0], b[1], b[2], b[3], b[4], b[5]
                )
                .unwrap();
            }
        }
    }
    fs::write(dir.join("boxplot.tsv"), text)?;
    Ok(())
}

/// Initial SSE of a center set on a dataset (convenience for reports).
pub fn initial_sse_of(ds: &Dataset, cs: &crate::core::CenterSet) -> f64 {
    let a = assign_nearest(ds, cs);
    sse(ds, cs, &a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tiny_dataset(name: &str, shift: f64) -> Dataset {
        let rows = (0..12)
            .map(|i| {
                let base = if i < 6 { 0.0 } else { 10.0 };
                vec![base + (i % 6) as f64 * 0.3 + shift, (i % 3) as f64]
            })
            .collect();
        Dataset::from_rows(name, rows, None).unwrap()
    }

    #[test]
    fn deterministic_method_runs_once() {
        let ds = tiny_dataset("a", 0.0);
        let (records, failures) = run_benchmark(
            &[(&ds, 2)],
            &[InitMethod::V],
            100,
            1,
            &KMeansConfig::default(),
            16,
        );
        assert!(failures.is_empty());
        assert_eq!(records.len(), 1);
        assert!(records[0].seed.is_none());
    }

    #[test]
    fn random_method_runs_with_distinct_seeds() {
        let ds = tiny_dataset("a", 0.0);
        let (records, _) = run_benchmark(
            &[(&ds, 2)],
            &[InitMethod::K],
            100,
            500,
            &KMeansConfig::default(),
            16,
        );
        assert_eq!(records.len(), 100);
        let mut seeds: Vec<u64> = records.iter().map(|r| r.seed.unwrap()).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 100);
        assert_eq!(seeds[0], 500);
        assert_eq!(seeds[99], 599);
    }

    #[test]
    fn record_counting_all_methods() {
        let a = tiny_dataset("a", 0.0);
        let b = tiny_dataset("b", 1.0);
        let (records, _) = run_benchmark(
            &[(&a, 2), (&b, 2)],
            &InitMethod::ALL,
            10,
            0,
            &KMeansConfig::default(),
            16,
        );
        // 2 datasets x (3 random x 10 + 5 deterministic x 1).
        assert_eq!(records.len(), 2 * (3 * 10 + 5));
    }

    #[test]
    fn stats_basics() {
        let s = stats_of(&[3.0, 1.0, 2.0]);
        assert_eq!(s.min, 1.0);
        assert_abs_diff_eq!(s.mean, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.stdev, 1.0, epsilon = 1e-12); // sample stdev
        assert!(s.mean >= s.min);

        let single = stats_of(&[5.0]);
        assert_eq!(single.min, 5.0);
        assert_eq!(single.mean, 5.0);
        assert_eq!(single.stdev, 0.0);
    }

    #[test]
    fn deterministic_stats_have_min_equal_mean() {
        let ds = tiny_dataset("a", 0.0);
        let (records, _) = run_benchmark(
            &[(&ds, 2)],
            &[InitMethod::V, InitMethod::X],
            5,
            0,
            &KMeansConfig::default(),
            16,
        );
        let stats = compute_stats(&records);
        for (_, s) in stats {
            for c in Criterion::ALL {
                let st = s.get(c);
                assert_eq!(st.min, st.mean);
                assert_eq!(st.stdev, 0.0);
            }
        }
    }

    fn record(ds: &str, m: InitMethod, seed: Option<u64>, init: f64, fin: f64) -> RunRecord {
        RunRecord {
            dataset: ds.into(),
            method: m,
            seed,
            initial_sse: init,
            final_sse: fin,
            iterations: 3,
            cpu_ms: 1.0,
        }
    }

    #[test]
    fn normalization_best_is_one() {
        let records = vec![
            record("a", InitMethod::V, None, 20.0, 10.0),
            record("a", InitMethod::P, None, 40.0, 10.0),
        ];
        let stats = compute_stats(&records);
        let norm = normalize_criteria(&stats);
        let v = &norm[&("a".to_string(), InitMethod::V)];
        let p = &norm[&("a".to_string(), InitMethod::P)];
        assert_eq!(v[Criterion::InitialSse.index()].min, 1.0);
        assert_eq!(p[Criterion::InitialSse.index()].min, 2.0);
        // Equal values both get ratio 1.
        assert_eq!(v[Criterion::FinalSse.index()].min, 1.0);
        assert_eq!(p[Criterion::FinalSse.index()].min, 1.0);
        // Deterministic methods carry no stdev ratio.
        assert!(v[Criterion::InitialSse.index()].stdev.is_none());
    }

    #[test]
    fn normalization_is_scale_free() {
        let base = vec![
            record("a", InitMethod::V, None, 20.0, 10.0),
            record("a", InitMethod::P, None, 30.0, 15.0),
        ];
        let scaled: Vec<RunRecord> = base
            .iter()
            .map(|r| record("a", r.method, r.seed, r.initial_sse * 7.0, r.final_sse * 7.0))
            .collect();
        let n1 = normalize_criteria(&compute_stats(&base));
        let n2 = normalize_criteria(&compute_stats(&scaled));
        for (k, v1) in &n1 {
            let v2 = &n2[k];
            for c in [Criterion::InitialSse, Criterion::FinalSse] {
                assert_abs_diff_eq!(v1[c.index()].min, v2[c.index()].min, epsilon = 1e-12);
                assert_abs_diff_eq!(v1[c.index()].mean, v2[c.index()].mean, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn single_dataset_summary_equals_normalized_row() {
        let records = vec![
            record("a", InitMethod::V, None, 20.0, 10.0),
            record("a", InitMethod::P, None, 40.0, 12.0),
        ];
        let stats = compute_stats(&records);
        let norm = normalize_criteria(&stats);
        let summary = summarize(&norm);
        let row = summary[&InitMethod::P][Criterion::InitialSse.index()];
        let cell = norm[&("a".to_string(), InitMethod::P)][Criterion::InitialSse.index()];
        assert_eq!(row.min, cell.min);
        assert_eq!(row.mean, cell.mean);
    }

    #[test]
    fn all_equal_methods_summarize_to_one() {
        let records = vec![
            record("a", InitMethod::V, None, 20.0, 10.0),
            record("a", InitMethod::P, None, 20.0, 10.0),
            record("b", InitMethod::V, None, 8.0, 4.0),
            record("b", InitMethod::P, None, 8.0, 4.0),
        ];
        let summary = summarize(&normalize_criteria(&compute_stats(&records)));
        for rows in summary.values() {
            for c in [Criterion::InitialSse, Criterion::FinalSse] {
                assert_eq!(rows[c.index()].min, 1.0);
                assert_eq!(rows[c.index()].mean, 1.0);
            }
        }
    }

    #[test]
    fn relative_compare_self_is_all_same() {
        let records = vec![
            record("a", InitMethod::V, None, 20.0, 10.0),
            record("b", InitMethod::V, None, 8.0, 4.0),
        ];
        let stats = compute_stats(&records);
        let cmp = relative_compare(&stats, InitMethod::V, InitMethod::V, CompareMode::Rounded);
        for c in Criterion::ALL {
            assert_eq!(cmp[c.index()], (0, 2, 0));
        }
    }

    #[test]
    fn relative_compare_rounded_vs_exact() {
        let records = vec![
            record("a", InitMethod::OV, None, 50.2, 10.0),
            record("a", InitMethod::V, None, 50.4, 11.0),
        ];
        let stats = compute_stats(&records);
        let rounded = relative_compare(&stats, InitMethod::OV, InitMethod::V, CompareMode::Rounded);
        let exact = relative_compare(&stats, InitMethod::OV, InitMethod::V, CompareMode::Exact);
        // 50.2 and 50.4 both round to 50: same. Exactly: OV better.
        assert_eq!(rounded[Criterion::InitialSse.index()], (0, 1, 0));
        assert_eq!(exact[Criterion::InitialSse.index()], (0, 0, 1));
        // Final SSE differs by a full unit either way.
        assert_eq!(rounded[Criterion::FinalSse.index()], (0, 0, 1));
    }

    #[test]
    fn box_summary_ordering_and_oracle() {
        let values = [4.0, 1.0, 3.0, 2.0, 5.0, 9.0, 2.5];
        let b = box_summary(&values);
        assert!(b[0] <= b[1] && b[1] <= b[2] && b[2] <= b[3] && b[3] <= b[4]);
        assert_eq!(b[0], 1.0);
        assert_eq!(b[4], 9.0);
        assert_eq!(b[2], 3.0); // median of 7 sorted values
        // Independent quantile check by full sort + interpolation.
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_abs_diff_eq!(b[1], quantile(&sorted, 0.25), epsilon = 1e-12);
        assert_abs_diff_eq!(b[3], quantile(&sorted, 0.75), epsilon = 1e-12);
    }

    #[test]
    fn emit_report_writes_expected_files() {
        let ds = tiny_dataset("a", 0.0);
        let (records, failures) = run_benchmark(
            &[(&ds, 2)],
            &[InitMethod::V, InitMethod::P, InitMethod::K],
            5,
            0,
            &KMeansConfig::default(),
            16,
        );
        let report = BenchReport::from_records(records, failures);
        let dir = tempfile::tempdir().unwrap();
        emit_report(&report, dir.path()).unwrap();
        for name in [
            "table_initial_sse.tsv",
            "table_final_sse.tsv",
            "table_iterations.tsv",
            "table_cpu_ms.tsv",
            "runs.tsv",
            "summary.tsv",
            "boxplot.tsv",
        ] {
            let path = dir.path().join(name);
            assert!(path.exists(), "{name} missing");
            let text = fs::read_to_string(path).unwrap();
            assert!(text.lines().count() >= 2, "{name} has no data rows");
        }
        // Deterministic stdev summary rows are blank markers.
        let summary = fs::read_to_string(dir.path().join("summary.tsv")).unwrap();
        let v_line = summary
            .lines()
            .find(|l| l.starts_with("V\tinitial_sse"))
            .unwrap();
        assert!(v_line.ends_with("--"));
    }

    #[test]
    fn benchmark_repeat_is_bit_identical_for_sse() {
        let ds = tiny_dataset("a", 0.0);
        let run = || {
            run_benchmark(
                &[(&ds, 3)],
                &[InitMethod::V, InitMethod::OP, InitMethod::K],
                5,
                7,
                &KMeansConfig::default(),
                16,
            )
            .0
        };
        let a = run();
        let b = run();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.initial_sse.to_bits(), y.initial_sse.to_bits());
            assert_eq!(x.final_sse.to_bits(), y.final_sse.to_bits());
            assert_eq!(x.iterations, y.iterations);
        }
    }

    #[test]
    fn cpu_time_is_monotone() {
        let a = cpu_time_ms();
        let mut acc = 0.0f64;
        for i in 0..200_000 {
            acc += (i as f64).sqrt();
        }
        std::hint::black_box(acc);
        let b = cpu_time_ms();
        assert!(b >= a);
    }
}
