//! Histogram construction over 1-D projections and Otsu's
//! between-class-variance-maximizing threshold.

use crate::error::{Error, Result};

/// L-bin histogram of projected values, remembering the projection range
/// that defined the binning.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub total: u64,
    pub lo: f64,
    pub hi: f64,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Bin index for a value inside [lo, hi]; the maximum clamps to the
    /// last bin.
    pub fn bin_of(&self, value: f64) -> usize {
        bin_index(value, self.lo, self.hi, self.bins())
    }
}

fn bin_index(value: f64, lo: f64, hi: f64, bins: usize) -> usize {
    let b = ((bins as f64) * (value - lo) / (hi - lo)).floor() as isize;
    b.clamp(0, bins as isize - 1) as usize
}

/// Result of the threshold search: the cut bin, its between-class
/// variance, and the cut in projection units (upper edge of bin t*).
/// Points with bin index <= threshold_bin belong to the left class.
#[derive(Debug, Clone, PartialEq)]
pub struct OtsuResult {
    pub threshold_bin: usize,
    pub sigma_b: f64,
    pub cut_value: f64,
}

/// Bin `values` into an L-bin histogram over their own min/max range.
pub fn build_histogram(values: &[f64], bins: usize) -> Result<Histogram> {
    assert!(bins >= 2, "a histogram needs at least 2 bins");
    assert!(!values.is_empty(), "cannot bin an empty value list");
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return Err(Error::DegenerateRange);
    }
    let mut counts = vec![0u64; bins];
    for &v in values {
        counts[bin_index(v, lo, hi, bins)] += 1;
    }
    Ok(Histogram {
        counts,
        total: values.len() as u64,
        lo,
        hi,
    })
}

/// Between-class variance σ_B²(t) = [μ_T·p0(t) − μ(t)]² / (p0(t)·p1(t)),
/// where class 0 holds bins 0..=t. Returns 0 when either class is empty.
pub fn between_class_variance(h: &Histogram, t: usize) -> Result<f64> {
    let bins = h.bins();
    if t > bins - 2 {
        return Err(Error::Domain(format!(
            "threshold {t} out of range [0, {}]",
            bins - 2
        )));
    }
    let n = h.total as f64;
    let mu_total: f64 = h
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| i as f64 * c as f64 / n)
        .sum();
    let mut p0 = 0.0;
    let mut mu = 0.0;
    for i in 0..=t {
        let p = h.counts[i] as f64 / n;
        p0 += p;
        mu += i as f64 * p;
    }
    let p1 = 1.0 - p0;
    if p0 <= 0.0 || p1 <= 0.0 {
        return Ok(0.0);
    }
    let num = mu_total * p0 - mu;
    Ok(num * num / (p0 * p1))
}

/// Find t* maximizing σ_B² over t in [0, L−2] in a single pass with
/// running class probability and mean; ties break to the lowest t.
pub fn otsu_threshold(h: &Histogram) -> Result<OtsuResult> {
    let bins = h.bins();
    if h.counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::DegenerateHistogram);
    }
    let n = h.total as f64;
    let mu_total: f64 = h
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| i as f64 * c as f64 / n)
        .sum();

    let mut p0 = 0.0;
    let mut mu = 0.0;
    let mut best_t = 0;
    let mut best_sigma = -1.0;
    for t in 0..=bins - 2 {
        let p = h.counts[t] as f64 / n;
        p0 += p;
        mu += t as f64 * p;
        let p1 = 1.0 - p0;
        let sigma = if p0 <= 0.0 || p1 <= 0.0 {
            0.0
        } else {
            let num = mu_total * p0 - mu;
            num * num / (p0 * p1)
        };
        if sigma > best_sigma {
            best_sigma = sigma;
            best_t = t;
        }
    }
    let cut_value = h.lo + (best_t as f64 + 1.0) * (h.hi - h.lo) / bins as f64;
    Ok(OtsuResult {
        threshold_bin: best_t,
        sigma_b: best_sigma,
        cut_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn hist(counts: &[u64]) -> Histogram {
        Histogram {
            counts: counts.to_vec(),
            total: counts.iter().sum(),
            lo: 0.0,
            hi: 1.0,
        }
    }

    #[test]
    fn binning_formula_and_clamp() {
        let h = build_histogram(&[0.0, 1.0], 256).unwrap();
        assert_eq!(h.counts[0], 1);
        assert_eq!(h.counts[255], 1); // max value clamps into the last bin

        let h = build_histogram(&[0.0, 4.0, 8.0], 4).unwrap();
        assert_eq!(h.bin_of(0.0), 0);
        assert_eq!(h.bin_of(4.0), 2);
        assert_eq!(h.bin_of(8.0), 3); // floor gives 4, clamped to 3
        assert_eq!(h.counts, vec![1, 0, 1, 1]);
    }

    #[test]
    fn counts_are_conserved() {
        let values: Vec<f64> = (0..97).map(|i| (i as f64).sin()).collect();
        let h = build_histogram(&values, 16).unwrap();
        assert_eq!(h.counts.iter().sum::<u64>(), 97);
        assert_eq!(h.total, 97);
    }

    #[test]
    fn constant_values_are_degenerate() {
        assert!(matches!(
            build_histogram(&[2.0, 2.0, 2.0], 8),
            Err(Error::DegenerateRange)
        ));
    }

    #[test]
    fn between_class_variance_hand_values() {
        // counts {2,1,0,0,1,2}: mu_T = 2.5.
        let h = hist(&[2, 1, 0, 0, 1, 2]);
        // t=1: p0 = 1/2, mu = 1/6 -> (2.5*0.5 - 1/6)^2 / 0.25 = 169/36.
        assert_abs_diff_eq!(
            between_class_variance(&h, 1).unwrap(),
            169.0 / 36.0,
            epsilon = 1e-12
        );
        // t=0: p0 = 1/3, mu = 0 -> (2.5/3)^2 / (2/9) = 3.125.
        assert_abs_diff_eq!(between_class_variance(&h, 0).unwrap(), 3.125, epsilon = 1e-12);
        // Empty class scores zero.
        let h2 = hist(&[0, 3, 0, 0, 3]);
        assert_eq!(between_class_variance(&h2, 0).unwrap(), 0.0);
        // Out-of-range threshold is rejected.
        assert!(between_class_variance(&h, 5).is_err());
    }

    #[test]
    fn sigma_identity_with_class_means() {
        // sigma_B^2 = p0*p1*(mu0 - mu1)^2 wherever both classes are nonempty.
        let h = hist(&[3, 0, 5, 1, 0, 2, 7]);
        let n = h.total as f64;
        for t in 0..h.bins() - 1 {
            let p0: f64 = h.counts[..=t].iter().map(|&c| c as f64 / n).sum();
            let p1 = 1.0 - p0;
            if p0 == 0.0 || p1 == 0.0 {
                continue;
            }
            let mu0: f64 = h.counts[..=t]
                .iter()
                .enumerate()
                .map(|(i, &c)| i as f64 * c as f64 / n)
                .sum::<f64>()
                / p0;
            let mu1: f64 = h.counts[t + 1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| (t + 1 + i) as f64 * c as f64 / n)
                .sum::<f64>()
                / p1;
            let definitional = p0 * p1 * (mu0 - mu1) * (mu0 - mu1);
            let efficient = between_class_variance(&h, t).unwrap();
            assert_abs_diff_eq!(efficient, definitional, epsilon = 1e-9 * definitional.max(1.0));
        }
    }

    #[test]
    fn threshold_tie_breaks_low() {
        // sigma ties over t in {1,2,3}; the lowest wins.
        let h = hist(&[2, 1, 0, 0, 1, 2]);
        let r = otsu_threshold(&h).unwrap();
        assert_eq!(r.threshold_bin, 1);
        assert_abs_diff_eq!(r.sigma_b, 169.0 / 36.0, epsilon = 1e-12);

        let h = hist(&[0, 3, 0, 0, 3]);
        let r = otsu_threshold(&h).unwrap();
        assert_eq!(r.threshold_bin, 1);
        assert_abs_diff_eq!(r.sigma_b, 2.25, epsilon = 1e-12);
    }

    #[test]
    fn threshold_matches_exhaustive_scan() {
        let h = hist(&[5, 1, 0, 9, 2, 2, 0, 4, 1, 6]);
        let r = otsu_threshold(&h).unwrap();
        let mut best_t = 0;
        let mut best = -1.0;
        for t in 0..h.bins() - 1 {
            let s = between_class_variance(&h, t).unwrap();
            if s > best {
                best = s;
                best_t = t;
            }
        }
        assert_eq!(r.threshold_bin, best_t);
        assert_abs_diff_eq!(r.sigma_b, best, epsilon = 1e-12);
    }

    #[test]
    fn cut_value_is_upper_bin_edge() {
        let values = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        let h = build_histogram(&values, 8).unwrap();
        let r = otsu_threshold(&h).unwrap();
        assert_abs_diff_eq!(
            r.cut_value,
            h.lo + (r.threshold_bin as f64 + 1.0) * (h.hi - h.lo) / 8.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn single_bin_occupancy_is_degenerate() {
        let h = hist(&[0, 7, 0, 0]);
        assert!(matches!(otsu_threshold(&h), Err(Error::DegenerateHistogram)));
    }

    #[test]
    fn threshold_is_affine_invariant() {
        let base: Vec<f64> = vec![0.1, 0.4, 0.45, 0.9, 0.95, 0.92, 0.13];
        let r0 = otsu_threshold(&build_histogram(&base, 64).unwrap()).unwrap();
        let shifted: Vec<f64> = base.iter().map(|v| v + 17.0).collect();
        let scaled: Vec<f64> = base.iter().map(|v| v * 3.5).collect();
        let r1 = otsu_threshold(&build_histogram(&shifted, 64).unwrap()).unwrap();
        let r2 = otsu_threshold(&build_histogram(&scaled, 64).unwrap()).unwrap();
        assert_eq!(r0.threshold_bin, r1.threshold_bin);
        assert_eq!(r0.threshold_bin, r2.threshold_bin);
    }

    #[test]
    fn sigma_bounded_by_total_variance() {
        let h = hist(&[4, 0, 2, 8, 1, 0, 3]);
        let n = h.total as f64;
        let mu_t: f64 = h
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| i as f64 * c as f64 / n)
            .sum();
        let total_var: f64 = h
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as f64 - mu_t).powi(2) * c as f64 / n)
            .sum();
        for t in 0..h.bins() - 1 {
            let s = between_class_variance(&h, t).unwrap();
            assert!(s >= 0.0);
            assert!(s <= total_var + 1e-12);
        }
    }
}
