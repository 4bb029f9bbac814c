//! Exact feasibility decisions and witness construction.
//!
//! The equality rows make every reciprocal variable an affine function of
//! `x = n/r`. Substituting those forms turns each constraint row into a
//! one-variable relation `A·x + C REL 0`, so the feasible set is an interval
//! with exactly tracked open/closed endpoints. Witness selection takes the
//! interval midpoint; equivalence checking intersects intervals instead of
//! searching, with a brute-force rational grid scan as a cross-check.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::{
    raw_constraints, reduced_constraints, ConstraintSet, ExponentAssignment, ReciprocalVar,
    RelKind,
};
use crate::exponent::{theorem_region, ExponentError, ParamPoint};
use crate::scalar::{rat, rdim, rint, ExactInt};

/// One endpoint of a feasibility interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound<I: ExactInt> {
    pub value: Ratio<I>,
    pub strict: bool,
}

/// Interval over `x = n/r` with exact endpoint bookkeeping. `None` means
/// unbounded on that side; `contradictory` records a variable-free row that
/// failed outright.
#[derive(Clone, Debug)]
pub struct Window<I: ExactInt> {
    pub lo: Option<Bound<I>>,
    pub hi: Option<Bound<I>>,
    contradictory: bool,
}

impl<I: ExactInt> Window<I> {
    pub fn unbounded() -> Self {
        Window { lo: None, hi: None, contradictory: false }
    }

    pub fn mark_contradictory(&mut self) {
        self.contradictory = true;
    }

    pub fn clamp_lower(&mut self, b: Bound<I>) {
        let replace = match &self.lo {
            None => true,
            Some(cur) => b.value > cur.value || (b.value == cur.value && b.strict && !cur.strict),
        };
        if replace {
            self.lo = Some(b);
        }
    }

    pub fn clamp_upper(&mut self, b: Bound<I>) {
        let replace = match &self.hi {
            None => true,
            Some(cur) => b.value < cur.value || (b.value == cur.value && b.strict && !cur.strict),
        };
        if replace {
            self.hi = Some(b);
        }
    }

    pub fn is_empty(&self) -> bool {
        if self.contradictory {
            return true;
        }
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => {
                lo.value > hi.value
                    || (lo.value == hi.value && (lo.strict || hi.strict))
            }
            _ => false,
        }
    }

    /// Deterministic interior point: the midpoint, or the common endpoint
    /// when the interval degenerates to a single (closed) point.
    pub fn pick(&self) -> Option<Ratio<I>> {
        if self.is_empty() {
            return None;
        }
        Some(match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => {
                if lo.value == hi.value {
                    lo.value.clone()
                } else {
                    (&lo.value + &hi.value) / rint::<I>(2)
                }
            }
            (Some(lo), None) => &lo.value + rint::<I>(1),
            (None, Some(hi)) => &hi.value - rint::<I>(1),
            (None, None) => Ratio::zero(),
        })
    }

    /// Whether `x` lies inside the window.
    pub fn contains(&self, x: &Ratio<I>) -> bool {
        if self.contradictory {
            return false;
        }
        let above = match &self.lo {
            None => true,
            Some(lo) => {
                if lo.strict {
                    x > &lo.value
                } else {
                    x >= &lo.value
                }
            }
        };
        let below = match &self.hi {
            None => true,
            Some(hi) => {
                if hi.strict {
                    x < &hi.value
                } else {
                    x <= &hi.value
                }
            }
        };
        above && below
    }
}

/// Affine form `slope·x + icept` with `x = n/r`.
#[derive(Clone, Debug)]
struct AffineForm<I: ExactInt> {
    slope: Ratio<I>,
    icept: Ratio<I>,
}

/// Every reciprocal as an affine function of `x = n/r`, derived from the
/// equality chain: the admissibility scalings, the time-exponent pairing,
/// and the six weighted-embedding scale equalities.
fn affine_forms<I: ExactInt>(
    pt: &ParamPoint<I>,
    p: &Ratio<I>,
) -> BTreeMap<ReciprocalVar, AffineForm<I>> {
    let n = rdim::<I>(pt.n);
    let one = rint::<I>(1);
    let two = rint::<I>(2);
    let tp1 = p * &two - &one; // 2p − 1
    let b = &pt.b;
    let mut forms = BTreeMap::new();
    let mut put = |v: ReciprocalVar, slope: Ratio<I>, icept: Ratio<I>| {
        forms.insert(v, AffineForm { slope, icept });
    };
    // inv_r = x/n.
    put(ReciprocalVar::InvR, &one / &n, Ratio::zero());
    // 2/q = n/2 − x.
    put(ReciprocalVar::InvQ, rat::<I>(-1, 2), &n / rint::<I>(4));
    // 1/q̃ = 1 − (2p−1)/q.
    put(
        ReciprocalVar::InvQt,
        &tp1 / &two,
        &one - &tp1 * &n / rint::<I>(4),
    );
    // n/r̃ = pn − 2 − (2p−1)x.
    put(
        ReciprocalVar::InvRt,
        -(&tp1 / &n),
        (p * &n - &two) / &n,
    );
    // n/rᵢ = (w − f) + f·x with the block's factor f and weight w.
    let pm1 = p - &one;
    let pm2 = p - &two;
    let b1 = b + &one;
    put(ReciprocalVar::InvR1, &pm1 / &n, (&b1 - &pm1) / &n);
    put(ReciprocalVar::InvR2, p / &n, (b - p) / &n);
    put(ReciprocalVar::InvR3, &pm1 / &n, (b - &pm1) / &n);
    put(ReciprocalVar::InvR4, p / &n, (&b1 - p) / &n);
    put(ReciprocalVar::InvR5, &pm2 / &n, (b - &pm2) / &n);
    put(ReciprocalVar::InvR6, &pm1 / &n, (b - &pm1) / &n);
    forms
}

/// Substitute the affine forms into every row of `set` and intersect the
/// induced interval bounds over `x`.
fn window_of<I: ExactInt>(
    set: &ConstraintSet<I>,
    forms: &BTreeMap<ReciprocalVar, AffineForm<I>>,
) -> Window<I> {
    let mut w = Window::unbounded();
    for c in &set.constraints {
        let diff = c.difference();
        let mut slope = Ratio::zero();
        let mut icept = diff.constant.clone();
        for (v, coeff) in &diff.coeffs {
            let f = &forms[v];
            slope = slope + coeff * &f.slope;
            icept = icept + coeff * &f.icept;
        }
        if slope.is_zero() {
            let ok = c.kind.satisfied(&icept);
            if !ok {
                w.mark_contradictory();
                return w;
            }
            continue;
        }
        // slope·x + icept REL 0 ⇔ x REL' −icept/slope.
        let pivot = -&icept / &slope;
        match c.kind {
            RelKind::Equality => {
                w.clamp_lower(Bound { value: pivot.clone(), strict: false });
                w.clamp_upper(Bound { value: pivot, strict: false });
            }
            RelKind::LessEq | RelKind::StrictLess => {
                let strict = c.kind == RelKind::StrictLess;
                if slope.is_positive() {
                    w.clamp_upper(Bound { value: pivot, strict });
                } else {
                    w.clamp_lower(Bound { value: pivot, strict });
                }
            }
        }
        if w.is_empty() {
            return w;
        }
    }
    w
}

/// Feasibility window of the full labeled system over `x = n/r`.
pub fn raw_window<I: ExactInt>(pt: &ParamPoint<I>) -> Result<Window<I>, ExponentError> {
    let set = raw_constraints(pt)?;
    let forms = affine_forms(pt, &set.p);
    Ok(window_of(&set, &forms))
}

/// Feasibility window of the reduced three-part system over `x = n/r`.
pub fn reduced_window<I: ExactInt>(pt: &ParamPoint<I>) -> Result<Window<I>, ExponentError> {
    let set = reduced_constraints(pt)?;
    let forms = affine_forms(pt, &set.p);
    Ok(window_of(&set, &forms))
}

/// Assignment of all ten reciprocals at a given `x = n/r`.
fn assignment_at<I: ExactInt>(
    forms: &BTreeMap<ReciprocalVar, AffineForm<I>>,
    x: &Ratio<I>,
) -> ExponentAssignment<I> {
    let values = forms
        .iter()
        .map(|(v, f)| (*v, &f.slope * x + &f.icept))
        .collect();
    ExponentAssignment { values }
}

/// Witness assignment from the reduced window midpoint, back-substituted
/// through the equality chain; `None` when the system is infeasible.
pub fn find_witness<I: ExactInt>(
    pt: &ParamPoint<I>,
) -> Result<Option<ExponentAssignment<I>>, ExponentError> {
    let set = reduced_constraints(pt)?;
    let forms = affine_forms(pt, &set.p);
    let w = window_of(&set, &forms);
    Ok(w.pick().map(|x| assignment_at(&forms, &x)))
}

/// Brute-force cross-check: scan `1/r` over the grid `{k/D : k = 0…D}` and
/// report whether any grid point, back-substituted through the equality
/// chain, satisfies every row of the full system.
pub fn grid_scan_feasible<I: ExactInt>(
    pt: &ParamPoint<I>,
    denominator: u32,
) -> Result<bool, ExponentError> {
    let set = raw_constraints(pt)?;
    let forms = affine_forms(pt, &set.p);
    let n = rdim::<I>(pt.n);
    for k in 0..=denominator {
        let inv_r = rat::<I>(k as i64, denominator as i64);
        let x = &inv_r * &n;
        let a = assignment_at(&forms, &x);
        if set.check(&a).is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exact prediction of the grid scan's outcome from the interval decision:
/// the window over `1/r` contains a multiple of `1/D` iff the smallest
/// admissible numerator does not exceed the largest.
fn window_contains_grid_point<I: ExactInt>(
    window: &Window<I>,
    n: &Ratio<I>,
    denominator: u32,
) -> bool {
    if window.is_empty() {
        return false;
    }
    let d = rint::<I>(denominator as i64);
    // k range from the lower endpoint (in inv_r = x/n units, scaled by D).
    let k_min = match &window.lo {
        None => I::zero(),
        Some(lo) => {
            let scaled = &lo.value / n * &d; // lo_invr · D
            let (q, r) = scaled.numer().div_rem(scaled.denom());
            if r.is_zero() {
                if lo.strict {
                    q + I::one()
                } else {
                    q
                }
            } else if scaled.is_positive() {
                q + I::one()
            } else {
                q
            }
        }
    };
    let k_max = match &window.hi {
        None => rint::<I>(denominator as i64).to_integer(),
        Some(hi) => {
            let scaled = &hi.value / n * &d;
            let (q, r) = scaled.numer().div_rem(scaled.denom());
            if r.is_zero() {
                if hi.strict {
                    q - I::one()
                } else {
                    q
                }
            } else if scaled.is_negative() {
                q - I::one()
            } else {
                q
            }
        }
    };
    let k_min = k_min.max(I::zero());
    let k_max = k_max.min(I::from_i64(denominator as i64).unwrap());
    k_min <= k_max
}

/// First sample on which the three feasibility views disagreed.
#[derive(Clone, Debug)]
pub struct Counterexample<I: ExactInt> {
    pub pt: ParamPoint<I>,
    pub label: String,
}

/// Outcome of [`verify_reduction`]; `counterexample` is `None` on success.
#[derive(Clone, Debug)]
pub struct ReductionReport<I: ExactInt> {
    pub samples: usize,
    pub witnesses: usize,
    pub grid_checks: usize,
    pub counterexample: Option<Counterexample<I>>,
}

impl<I: ExactInt> Default for ReductionReport<I> {
    fn default() -> Self {
        ReductionReport { samples: 0, witnesses: 0, grid_checks: 0, counterexample: None }
    }
}

impl<I: ExactInt> ReductionReport<I> {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }

    fn merge(mut a: Self, b: Self) -> Self {
        a.samples += b.samples;
        a.witnesses += b.witnesses;
        a.grid_checks += b.grid_checks;
        if a.counterexample.is_none() {
            a.counterexample = b.counterexample;
        }
        a
    }
}

/// Denominator of the brute-force grid: `lcm(1…9) = 2520`, with one extra
/// factor of 2 for the half-integer admissibility endpoints.
pub const GRID_DENOMINATOR: u32 = 5040;

fn check_sample<I: ExactInt>(
    pt: &ParamPoint<I>,
    with_grid: bool,
) -> Result<(bool, bool, Option<String>), ExponentError> {
    let raw_set = raw_constraints(pt)?;
    let forms = affine_forms(pt, &raw_set.p);
    let raw_w = window_of(&raw_set, &forms);
    let red_w = reduced_window(pt)?;
    let raw_feas = !raw_w.is_empty();
    let red_feas = !red_w.is_empty();
    let thm = theorem_region(pt);
    if raw_feas != red_feas {
        return Ok((false, false, Some("raw-vs-reduced".into())));
    }
    if red_feas != thm {
        return Ok((false, false, Some("reduced-vs-theorem-gate".into())));
    }
    // Witness validity: the midpoint assignment must satisfy every raw row,
    // including strictness.
    let mut witnessed = false;
    if let Some(a) = find_witness(pt)? {
        let violated = raw_set.check(&a);
        if !violated.is_empty() {
            return Ok((false, false, Some(format!("witness-violates:{}", violated[0]))));
        }
        if !a.bands_ok() {
            return Ok((false, false, Some("witness-outside-bands".into())));
        }
        witnessed = true;
    } else if thm {
        return Ok((false, false, Some("witness-missing-in-theorem-region".into())));
    }
    if with_grid {
        let found = grid_scan_feasible(pt, GRID_DENOMINATOR)?;
        let n = rdim::<I>(pt.n);
        let predicted = window_contains_grid_point(&raw_w, &n, GRID_DENOMINATOR);
        if found != predicted {
            return Ok((witnessed, true, Some("grid-vs-interval".into())));
        }
        return Ok((witnessed, true, None));
    }
    Ok((witnessed, false, None))
}

/// Assert, over the given samples, that the full system, the reduced
/// system, and the closed-form gate `b ≤ (α−n+4)/n` agree, and that every
/// feasible sample carries a valid witness. A subset of samples is re-run
/// through the brute-force grid scan.
pub fn verify_reduction<I: ExactInt>(samples: &[ParamPoint<I>]) -> ReductionReport<I> {
    // Spread roughly 16 grid scans across the sample list.
    let stride = (samples.len() / 16).max(1);
    verify_reduction_with_stride(samples, stride)
}

/// [`verify_reduction`] with an explicit grid-scan stride (`1` = every
/// sample is also grid-scanned).
pub fn verify_reduction_with_stride<I: ExactInt>(
    samples: &[ParamPoint<I>],
    grid_stride: usize,
) -> ReductionReport<I> {
    let stride = grid_stride.max(1);
    samples
        .par_iter()
        .enumerate()
        .map(|(i, pt)| {
            let with_grid = i % stride == 0;
            let mut report = ReductionReport {
                samples: 1,
                witnesses: 0,
                grid_checks: 0,
                counterexample: None,
            };
            match check_sample(pt, with_grid) {
                Ok((witnessed, grid_checked, label)) => {
                    report.witnesses = usize::from(witnessed);
                    report.grid_checks = usize::from(grid_checked);
                    report.counterexample =
                        label.map(|label| Counterexample { pt: pt.clone(), label });
                }
                Err(e) => {
                    report.counterexample = Some(Counterexample {
                        pt: pt.clone(),
                        label: format!("error:{e}"),
                    });
                }
            }
            report
        })
        .reduce(ReductionReport::default, ReductionReport::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::in_range;
    use crate::scalar::rat;
    use num_bigint::BigInt;

    fn pt(n: u32, a: (i64, i64), b: (i64, i64)) -> ParamPoint<BigInt> {
        ParamPoint::new(n, rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    fn witness(p: &ParamPoint<BigInt>) -> ExponentAssignment<BigInt> {
        find_witness(p).unwrap().expect("feasible point")
    }

    #[test]
    fn worked_witness_3_2_1() {
        // Window [11/10, 13/10], midpoint x = n/r = 6/5.
        let a = witness(&pt(3, (2, 1), (1, 1)));
        assert_eq!(a.exponent(ReciprocalVar::InvR), Some(rat(5, 2)));
        assert_eq!(a.exponent(ReciprocalVar::InvQ), Some(rat(20, 3)));
        assert_eq!(a.exponent(ReciprocalVar::InvQt), Some(rat(4, 1)));
        assert_eq!(a.exponent(ReciprocalVar::InvRt), Some(rat(3, 1)));
        // n/rᵢ values 12/5, 8/5, 7/5, 13/5, 6/5, 7/5.
        let n = rat::<BigInt>(3, 1);
        let nr = |v| a.get(v) * &n;
        assert_eq!(nr(ReciprocalVar::InvR1), rat(12, 5));
        assert_eq!(nr(ReciprocalVar::InvR2), rat(8, 5));
        assert_eq!(nr(ReciprocalVar::InvR3), rat(7, 5));
        assert_eq!(nr(ReciprocalVar::InvR4), rat(13, 5));
        assert_eq!(nr(ReciprocalVar::InvR5), rat(6, 5));
        assert_eq!(nr(ReciprocalVar::InvR6), rat(7, 5));
        // Every raw row, including strict ones, holds exactly.
        let raw = raw_constraints(&pt(3, (2, 1), (1, 1))).unwrap();
        assert!(raw.check(&a).is_empty());
        assert!(a.bands_ok());
    }

    #[test]
    fn boundary_witness_4_2_half() {
        // b = p−2 exactly: gate holds with equality; window [3/2, 7/4],
        // midpoint x = 13/8, n/r1 = (p−1)x = 39/16.
        let p = pt(4, (2, 1), (1, 2));
        let a = witness(&p);
        let n = rat::<BigInt>(4, 1);
        assert_eq!(a.get(ReciprocalVar::InvR) * &n, rat(13, 8));
        assert_eq!(a.get(ReciprocalVar::InvR1) * &n, rat(39, 16));
        let raw = raw_constraints(&p).unwrap();
        assert!(raw.check(&a).is_empty());
    }

    #[test]
    fn infeasible_5_3_half() {
        // b = 1/2 > (α−n+4)/n = 2/5: the gate fails.
        assert!(find_witness(&pt(5, (3, 1), (1, 2))).unwrap().is_none());
    }

    #[test]
    fn theorem_boundary_feasible() {
        // b = (α−n+4)/n exactly: still feasible (closed gate).
        let p = pt(5, (3, 1), (2, 5));
        let a = find_witness(&p).unwrap().expect("closed boundary");
        assert!(raw_constraints(&p).unwrap().check(&a).is_empty());
    }

    #[test]
    fn range_upper_boundary_infeasible_everywhere() {
        // b = (α−n+4)/2 gives p = 2: raw and reduced both infeasible.
        let p = pt(4, (2, 1), (1, 1));
        assert!(in_range(&p));
        assert!(raw_window(&p).unwrap().is_empty());
        assert!(reduced_window(&p).unwrap().is_empty());
        assert!(find_witness(&p).unwrap().is_none());
    }

    #[test]
    fn windows_match_hand_values() {
        let w = reduced_window(&pt(3, (2, 1), (1, 1))).unwrap();
        let lo = w.lo.clone().unwrap();
        let hi = w.hi.clone().unwrap();
        assert_eq!(lo.value, rat(11, 10));
        assert!(!lo.strict);
        assert_eq!(hi.value, rat(13, 10));
        assert!(!hi.strict);
        // The raw window must coincide: same feasible x-interval.
        let rw = raw_window(&pt(3, (2, 1), (1, 1))).unwrap();
        assert_eq!(rw.lo.unwrap().value, rat(11, 10));
        assert_eq!(rw.hi.unwrap().value, rat(13, 10));
    }

    #[test]
    fn window_endpoint_logic() {
        let mut w = Window::<BigInt>::unbounded();
        w.clamp_lower(Bound { value: rat(1, 1), strict: false });
        w.clamp_lower(Bound { value: rat(1, 1), strict: true });
        assert!(w.lo.as_ref().unwrap().strict, "strict wins ties");
        w.clamp_upper(Bound { value: rat(1, 1), strict: false });
        assert!(w.is_empty(), "open-at-one-end point interval is empty");
        let mut w = Window::<BigInt>::unbounded();
        w.clamp_lower(Bound { value: rat(1, 1), strict: false });
        w.clamp_upper(Bound { value: rat(1, 1), strict: false });
        assert!(!w.is_empty());
        assert_eq!(w.pick(), Some(rat(1, 1)));
        assert!(w.contains(&rat(1, 1)));
        assert!(!w.contains(&rat(9, 8)));
    }

    #[test]
    fn grid_scan_agrees_with_interval_decision() {
        for (n, a, b) in [
            (3, (2i64, 1i64), (1i64, 1i64)),
            (3, (2, 1), (1, 3)),
            (4, (2, 1), (1, 2)),
            (5, (3, 1), (1, 2)),
            (5, (3, 1), (2, 5)),
            (6, (7, 2), (1, 4)),
        ] {
            let p = pt(n, a, b);
            let found = grid_scan_feasible(&p, GRID_DENOMINATOR).unwrap();
            let w = raw_window(&p).unwrap();
            let predicted =
                window_contains_grid_point(&w, &rdim::<BigInt>(p.n), GRID_DENOMINATOR);
            assert_eq!(found, predicted, "at n={n} α={a:?} b={b:?}");
        }
    }

    #[test]
    fn verify_reduction_small_batch() {
        let samples = vec![
            pt(3, (2, 1), (1, 1)),
            pt(3, (5, 2), (1, 4)),
            pt(4, (2, 1), (1, 2)),
            pt(4, (2, 1), (1, 1)),
            pt(5, (3, 1), (2, 5)),
            pt(5, (3, 1), (1, 2)),
            pt(6, (4, 1), (1, 3)),
            pt(7, (13, 2), (1, 5)),
            pt(8, (6, 1), (1, 4)),
        ];
        let report = verify_reduction_with_stride(&samples, 1);
        assert!(report.ok(), "{:?}", report.counterexample);
        assert_eq!(report.samples, 9);
        assert_eq!(report.grid_checks, 9);
        assert!(report.witnesses >= 5);
    }
}
