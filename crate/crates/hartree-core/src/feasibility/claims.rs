//! Exact checks of the redundancy claims used to collapse the constraint
//! system into its reduced form.
//!
//! Each elimination step rests on a comparison between two bounds (or on a
//! sign statement). Those comparisons are evaluated here with rational
//! arithmetic at the critical power of the given parameter point; a claim
//! "holds" when the eliminating bound really is at least as strong as the
//! eliminated one.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use super::super::exponent::{critical_power, in_range, ExponentError, ParamPoint};
use crate::scalar::{rat, rdim, rint, ExactInt};

/// One verified elimination step. `margin` is the exact slack of the
/// comparison (positive = strict, zero = tight); its required sign depends
/// on the claim and is already folded into `holds`.
#[derive(Clone, Debug)]
pub struct ClaimCheck<I: ExactInt> {
    pub label: &'static str,
    pub holds: bool,
    pub margin: Ratio<I>,
}

/// Result of [`verify_redundancy_claims`].
#[derive(Clone, Debug)]
pub struct RedundancyReport<I: ExactInt> {
    pub pt: ParamPoint<I>,
    pub claims: Vec<ClaimCheck<I>>,
}

impl<I: ExactInt> RedundancyReport<I> {
    pub fn ok(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }

    pub fn violated(&self) -> Vec<&'static str> {
        self.claims.iter().filter(|c| !c.holds).map(|c| c.label).collect()
    }
}

/// Slack of the admissibility lower bound over the scaling lower bound:
/// `(n/2 − 2/(2p−1)) − (n−2)/2 = (2p−3)/(2p−1)`. Positive precisely for
/// `p > 3/2`, and zero at `p = 3/2`; in particular the claim "the second
/// lower bound implies the first" already holds strictly at `p = 2`.
pub fn admissible_scaling_gap<I: ExactInt>(p: &Ratio<I>) -> Ratio<I> {
    let one = rint::<I>(1);
    let two = rint::<I>(2);
    &one - &two / (p * &two - &one)
}

/// Check every elimination step at the given point (with its critical
/// power): gate weakenings, upper-bound dominations, the lower-bound chain,
/// the three existence conditions, and the `b < (4+α−n)/2 < 2` envelope.
pub fn verify_redundancy_claims<I: ExactInt>(
    pt: &ParamPoint<I>,
) -> Result<RedundancyReport<I>, ExponentError> {
    if !in_range(pt) {
        return Err(ExponentError::OutOfRange);
    }
    let p = critical_power(pt);
    let n = rdim::<I>(pt.n);
    let b = &pt.b;
    let alpha = &pt.alpha;
    let one = rint::<I>(1);
    let two = rint::<I>(2);
    let pm1 = &p - &one;
    let mut claims = Vec::new();
    let mut claim = |label: &'static str, holds: bool, margin: Ratio<I>| {
        claims.push(ClaimCheck { label, holds, margin });
    };

    // Gate b ≤ p−2 implies gate b ≤ p.
    let m = &p - (&p - &two);
    claim("gate-a-implies-b", m.is_positive() || m.is_zero(), m);
    // Gate b ≤ p−2 implies gate b ≤ p−1.
    let m = &pm1 - (&p - &two);
    claim("gate-c-implies-c16", m.is_positive() || m.is_zero(), m);
    // Upper bound 1 + (n−b)/(p−1) exceeds 1 + (n−1−b)/(p−1).
    let m = (&n - b) / &pm1 - (&n - &one - b) / &pm1;
    claim("upper-c16-exceeds-a", m.is_positive(), m);
    // Upper bound 1 + (n−b)/p exceeds 1 + (n−1−b)/p.
    let m = (&n - b) / &p - (&n - &one - b) / &p;
    claim("upper-b-exceeds-c", m.is_positive(), m);
    // Upper bound 1 + (n−1−b)/(p−1) exceeds 1 + (n−1−b)/p, given b < n−1.
    let head = &n - &one - b;
    let m = &head / &pm1 - &head / &p;
    claim("upper-a-exceeds-c", head.is_positive() && m.is_positive(), m);
    // The admissibility lower bound implies the scaling lower bound
    // (n−2)/2 ≤ n/r, strictly whenever p > 3/2 — in particular for p > 2.
    let m = admissible_scaling_gap(&p);
    claim("scaling-lower-redundant", m.is_positive(), m);
    // Existence of the window: lower bounds below upper bounds.
    let m = &n - &one - b;
    claim("exists-b-below-n-minus-1", m.is_positive(), m);
    let m = &p - (rat::<I>(1, 2) + &one / (&n - &two));
    claim("exists-p-above-half-plus", m.is_positive(), m);
    let tp1 = &p * &two - &one;
    let bound = &n - (&n - &two) * &p / &two + &two * &p / &tp1 - &one;
    let m = &bound - b;
    claim("exists-admissible-vs-scale", m.is_positive(), m);
    // Envelope b ≤ (4+α−n)/2 < 2, strict in b exactly when p > 2.
    let s = (rint::<I>(4) + alpha - &n) / &two;
    let mb = &s - b;
    let p_supercritical = &p > &two;
    let b_ok = if p_supercritical { mb.is_positive() } else { !mb.is_negative() };
    claim("se-weight-bound", b_ok, mb);
    let m = &two - &s;
    claim("se-below-two", m.is_positive(), m);

    Ok(RedundancyReport { pt: pt.clone(), claims })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn pt(n: u32, a: (i64, i64), b: (i64, i64)) -> ParamPoint<BigInt> {
        ParamPoint::new(n, rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    #[test]
    fn worked_points_pass_all_claims() {
        for p in [pt(3, (2, 1), (1, 1)), pt(6, (3, 1), (1, 4))] {
            let report = verify_redundancy_claims(&p).unwrap();
            assert!(report.ok(), "violated: {:?}", report.violated());
            assert_eq!(report.claims.len(), 11);
        }
    }

    #[test]
    fn out_of_range_rejected() {
        let bad = ParamPoint::<BigInt>::new(5, rat(3, 1), rat(3, 1)).unwrap();
        assert!(verify_redundancy_claims(&bad).is_err());
    }

    #[test]
    fn scaling_gap_threshold_is_three_halves() {
        // The gap (2p−3)/(2p−1) vanishes at p = 3/2, not at p = 2: at the
        // p = 2 edge the comparison is already strict (gap 1/3).
        assert_eq!(admissible_scaling_gap(&rat::<BigInt>(3, 2)), rat(0, 1));
        assert_eq!(admissible_scaling_gap(&rat::<BigInt>(2, 1)), rat(1, 3));
        assert_eq!(admissible_scaling_gap(&rat::<BigInt>(3, 1)), rat(3, 5));
        assert!(admissible_scaling_gap(&rat::<BigInt>(5, 4)).is_negative());
    }

    #[test]
    fn p2_edge_keeps_closed_weight_bound() {
        // b = (α−n+4)/2 gives p = 2; the envelope bound then holds with
        // equality and the claim accepts it as closed.
        let report = verify_redundancy_claims(&pt(4, (2, 1), (1, 1))).unwrap();
        let se = report
            .claims
            .iter()
            .find(|c| c.label == "se-weight-bound")
            .unwrap();
        assert!(se.holds);
        assert!(se.margin.is_zero());
        assert!(report.ok());
    }

    #[test]
    fn margins_match_hand_values_3_2_1() {
        // p = 3: existence margin b < n − (n−2)p/2 + 2p/(2p−1) − 1
        //   = 3 − 3/2 + 6/5 − 1 = 17/10, slack 7/10.
        let report = verify_redundancy_claims(&pt(3, (2, 1), (1, 1))).unwrap();
        let by = |l: &str| {
            report
                .claims
                .iter()
                .find(|c| c.label == l)
                .unwrap()
                .margin
                .clone()
        };
        assert_eq!(by("exists-admissible-vs-scale"), rat(7, 10));
        assert_eq!(by("upper-c16-exceeds-a"), rat(1, 2));
        assert_eq!(by("upper-b-exceeds-c"), rat(1, 3));
        assert_eq!(by("scaling-lower-redundant"), rat(3, 5));
        assert_eq!(by("se-weight-bound"), rat(1, 2));
    }
}
