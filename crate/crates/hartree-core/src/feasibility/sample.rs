//! Seeded rational samplers over the admitted parameter range, plus the
//! exact coverage check for dimensions 5 and 6.
//!
//! Sampling stays rational end to end: a random denominator is drawn, then
//! a numerator uniform among those falling inside the target interval, so
//! every generated point is exact and every run is reproducible from the
//! seed. A fixed fraction of samples is snapped onto the two closed
//! boundary families (the feasibility gate `b = (α−n+4)/n` and the range
//! ceiling `b = (α−n+4)/2`, where the critical power degenerates to 2).

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exponent::{
    classify, in_range, kim_b_lower, range_alpha_lower, range_b_upper, theorem_b_upper,
    ParamPoint, RegionLabel,
};
use crate::scalar::{rat, rdim, rint, ExactInt};

/// Uniform rational in the interval from `lo` to `hi` with the stated
/// endpoint inclusions: draw a denominator, then a numerator uniformly
/// among the admissible ones; retry with a finer denominator when the
/// interval contains no such fraction.
fn rand_rational_between<I: ExactInt>(
    rng: &mut impl Rng,
    lo: &Ratio<I>,
    hi: &Ratio<I>,
    include_hi: bool,
) -> Ratio<I> {
    assert!(lo < hi, "empty sampling interval");
    let mut den_cap: i64 = 720;
    loop {
        let d: i64 = rng.gen_range(2..=den_cap);
        let dr = rint::<I>(d);
        // Smallest numerator with k/d > lo, largest with k/d < hi (or ≤ hi).
        let k_min = (lo * &dr).floor().to_integer() + I::one();
        let hi_scaled = hi * &dr;
        let k_max = if include_hi {
            hi_scaled.floor().to_integer()
        } else {
            let f = hi_scaled.floor();
            if f == hi_scaled {
                f.to_integer() - I::one()
            } else {
                f.to_integer()
            }
        };
        if k_min > k_max {
            den_cap = den_cap.saturating_mul(4);
            continue;
        }
        let span = (k_max.clone() - k_min.clone()).to_i64().expect("span fits i64");
        let k = k_min + I::from_i64(rng.gen_range(0..=span)).unwrap();
        return Ratio::new(k, dr.to_integer());
    }
}

/// One uniform in-range point: `α` strictly inside the α-range, `b` in the
/// half-open range `(0, (α−n+4)/2]`.
pub fn sample_in_range<I: ExactInt>(n: u32, rng: &mut impl Rng) -> ParamPoint<I> {
    let alpha_lo = range_alpha_lower::<I>(n);
    let alpha_hi = rdim::<I>(n);
    let alpha = rand_rational_between(rng, &alpha_lo, &alpha_hi, false);
    let probe = ParamPoint::new(n, alpha.clone(), rat::<I>(1, 2)).expect("n ≥ 3");
    let b_hi = range_b_upper(&probe);
    let b = rand_rational_between(rng, &Ratio::zero(), &b_hi, true);
    ParamPoint::new(n, alpha, b).expect("n ≥ 3")
}

fn mixed_seed(seed: u64, n: u32) -> u64 {
    seed ^ (u64::from(n)).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Deterministic batch of in-range points. Every 8th sample is snapped to
/// the closed gate boundary `b = (α−n+4)/n` and every 16th to the range
/// ceiling `b = (α−n+4)/2`, so both closed edges are always exercised.
pub fn sample_in_range_batch<I: ExactInt>(
    n: u32,
    count: usize,
    seed: u64,
) -> Vec<ParamPoint<I>> {
    let mut rng = ChaCha8Rng::seed_from_u64(mixed_seed(seed, n));
    (0..count)
        .map(|i| {
            let pt = sample_in_range::<I>(n, &mut rng);
            if i % 16 == 7 {
                let b = range_b_upper(&pt);
                ParamPoint::new(n, pt.alpha, b).unwrap()
            } else if i % 8 == 3 {
                let b = theorem_b_upper(&pt);
                ParamPoint::new(n, pt.alpha, b).unwrap()
            } else {
                pt
            }
        })
        .collect()
}

/// Result of [`coverage56`]; `failure` carries the first in-range point
/// whose label was anything other than the two covering regions.
#[derive(Clone, Debug)]
pub struct CoverageReport<I: ExactInt> {
    pub checked: usize,
    pub failure: Option<(ParamPoint<I>, RegionLabel)>,
}

impl<I: ExactInt> CoverageReport<I> {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

fn record_covered<I: ExactInt>(pt: &ParamPoint<I>, report: &mut CoverageReport<I>) {
    if report.failure.is_some() || !in_range(pt) {
        return;
    }
    report.checked += 1;
    let label = classify(pt);
    if label != RegionLabel::ThisPaper && label != RegionLabel::Kim {
        report.failure = Some((pt.clone(), label));
    }
}

/// Exact rational neighbors of the surd-valued lower region boundary at a
/// given α: the nearest fractions with denominator 10⁷ strictly below and
/// strictly above, adjusted by exact comparison so float rounding cannot
/// put a neighbor on the wrong side.
fn surd_neighbors<I: ExactInt>(pt: &ParamPoint<I>) -> (Ratio<I>, Ratio<I>) {
    let surd = kim_b_lower(pt);
    let m: i64 = 10_000_000;
    let approx = (surd.to_f64() * m as f64).floor() as i64;
    let mut below = rat::<I>(approx, m);
    while surd.cmp_rational(&below) != std::cmp::Ordering::Greater {
        below = below - rat::<I>(1, m);
    }
    let mut above = &below + rat::<I>(1, m);
    while surd.cmp_rational(&above) != std::cmp::Ordering::Less {
        above = above + rat::<I>(1, m);
    }
    (below, above)
}

/// Verify, for dimensions 5 and 6, that every sampled in-range point is
/// labeled by one of the two covering regions: `samples_per_n` seeded
/// random points plus `boundary_per_n` sweeps along the α-axis that probe
/// the gate boundary, the range ceiling, and exact rational neighbors of
/// the surd-valued lower boundary.
pub fn coverage56<I: ExactInt>(
    samples_per_n: usize,
    boundary_per_n: usize,
    seed: u64,
) -> CoverageReport<I> {
    let mut report = CoverageReport { checked: 0, failure: None };
    for n in [5u32, 6u32] {
        for pt in sample_in_range_batch::<I>(n, samples_per_n, seed) {
            record_covered(&pt, &mut report);
        }
        let alpha_lo = range_alpha_lower::<I>(n);
        let alpha_hi = rdim::<I>(n);
        let width = &alpha_hi - &alpha_lo;
        for j in 1..=boundary_per_n {
            let frac = rat::<I>(j as i64, (boundary_per_n + 1) as i64);
            let alpha = &alpha_lo + &width * frac;
            let probe = ParamPoint::new(n, alpha.clone(), rat::<I>(1, 2)).unwrap();
            let ceiling = range_b_upper(&probe);
            let gate = theorem_b_upper(&probe);
            let (below, above) = surd_neighbors(&probe);
            for b in [gate, ceiling.clone(), below, above] {
                if b.is_positive() && b <= ceiling {
                    let pt = ParamPoint::new(n, alpha.clone(), b).unwrap();
                    record_covered(&pt, &mut report);
                }
            }
        }
        if report.failure.is_some() {
            break;
        }
    }
    report
}
