//! Seedable 64-bit Mersenne Twister (MT19937-64).
//!
//! The seed, not the algorithm, is the reproducibility contract: identical
//! seeds yield identical draw sequences on every platform. The generator
//! matches the Matsumoto–Nishimura mt19937-64 reference, so sequences can
//! be cross-checked against other implementations of the same variant.

const NN: usize = 312;
const MM: usize = 156;
const MATRIX_A: u64 = 0xB502_6F5A_A966_19E9;
const UPPER_MASK: u64 = 0xFFFF_FFFF_8000_0000;
const LOWER_MASK: u64 = 0x7FFF_FFFF;

/// MT19937-64 generator seeded from a single 64-bit value.
#[derive(Clone)]
pub struct SeededRng {
    mt: Box<[u64; NN]>,
    index: usize,
    seed: u64,
}

impl std::fmt::Debug for SeededRng {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SeededRng").field("seed", &self.seed).finish()
    }
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        let mut mt = Box::new([0u64; NN]);
        mt[0] = seed;
        for i in 1..NN {
            mt[i] = 6_364_136_223_846_793_005u64
                .wrapping_mul(mt[i - 1] ^ (mt[i - 1] >> 62))
                .wrapping_add(i as u64);
        }
        Self { mt, index: NN, seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn twist(&mut self) {
        for i in 0..NN {
            let x = (self.mt[i] & UPPER_MASK) | (self.mt[(i + 1) % NN] & LOWER_MASK);
            let mut next = x >> 1;
            if x & 1 != 0 {
                next ^= MATRIX_A;
            }
            self.mt[i] = self.mt[(i + MM) % NN] ^ next;
        }
        self.index = 0;
    }

    pub fn next_u64(&mut self) -> u64 {
        if self.index >= NN {
            self.twist();
        }
        let mut x = self.mt[self.index];
        self.index += 1;
        x ^= (x >> 29) & 0x5555_5555_5555_5555;
        x ^= (x << 17) & 0x71D6_7FFF_EDA6_0000;
        x ^= (x << 37) & 0xFFF7_EEE0_0000_0000;
        x ^= x >> 43;
        x
    }

    /// Uniform real in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform integer in [0, bound) via rejection sampling (unbiased).
    pub fn next_index(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "bound must be positive");
        let bound = bound as u64;
        let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return (v % bound) as usize;
            }
        }
    }

    /// k distinct indices from [0, n), drawn uniformly without replacement
    /// by a partial Fisher-Yates shuffle; order of selection is preserved.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot sample {k} of {n} without replacement");
        let mut pool: Vec<usize> = (0..n).collect();
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let j = i + self.next_index(n - i);
            pool.swap(i, j);
            out.push(pool[i]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference outputs of the mt19937-64 algorithm for seed 5489,
    // cross-checked against an independent implementation.
    #[test]
    fn matches_reference_sequence() {
        let mut rng = SeededRng::new(5489);
        let expected: [u64; 5] = [
            14514284786278117030,
            4620546740167642908,
            13109570281517897720,
            17462938647148434322,
            355488278567739596,
        ];
        for e in expected {
            assert_eq!(rng.next_u64(), e);
        }
    }

    #[test]
    fn ten_thousandth_draw() {
        let mut rng = SeededRng::new(5489);
        let mut v = 0;
        for _ in 0..10_000 {
            v = rng.next_u64();
        }
        assert_eq!(v, 9981545732273789042);
    }

    #[test]
    fn other_seeds_match_reference() {
        let mut rng = SeededRng::new(20120915);
        assert_eq!(rng.next_u64(), 930759257622639005);
        assert_eq!(rng.next_u64(), 12306499828466007152);
        assert_eq!(rng.next_u64(), 16437216835249177267);

        let mut rng = SeededRng::new(0);
        assert_eq!(rng.next_u64(), 2947667278772165694);
        assert_eq!(rng.next_u64(), 18301848765998365067);
        assert_eq!(rng.next_u64(), 729919693006235833);
    }

    #[test]
    fn same_seed_same_sequence() {
        let mut a = SeededRng::new(42);
        let mut b = SeededRng::new(42);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn f64_in_unit_interval() {
        let mut rng = SeededRng::new(7);
        let mut sum = 0.0;
        for _ in 0..10_000 {
            let v = rng.next_f64();
            assert!((0.0..1.0).contains(&v));
            sum += v;
        }
        assert!((sum / 10_000.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn index_bounds_and_uniformity() {
        let mut rng = SeededRng::new(11);
        let mut counts = [0usize; 10];
        for _ in 0..100_000 {
            counts[rng.next_index(10)] += 1;
        }
        for c in counts {
            let freq = c as f64 / 100_000.0;
            assert!((freq - 0.1).abs() < 0.01, "freq {freq}");
        }
    }

    #[test]
    fn sampling_without_replacement() {
        let mut rng = SeededRng::new(3);
        for _ in 0..100 {
            let mut s = rng.sample_indices(20, 8);
            assert_eq!(s.len(), 8);
            s.sort_unstable();
            s.dedup();
            assert_eq!(s.len(), 8);
            assert!(s.iter().all(|&i| i < 20));
        }
        // k = n is a permutation of all indices.
        let mut all = rng.sample_indices(10, 10);
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }
}
