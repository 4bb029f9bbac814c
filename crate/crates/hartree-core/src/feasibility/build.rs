//! Constructors for the labeled constraint systems.
//!
//! Rows are transcribed relation-by-relation. Fractions whose denominator is
//! one of the positive Hölder factors `p−1`, `p`, `p−2` are cleared at
//! construction so every row stays affine with rational coefficients; the
//! clearing is direction-preserving except at the `p = 2` edge, where the
//! vanishing factor `p−2` turns the corresponding Hölder row into
//! `inv_r5 ≤ 0`, which together with `0 < inv_r5` is correctly infeasible —
//! exactly matching the reduced gate `b ≤ p−2` failing against `b > 0`.
//! Parameter-only sanity rows (e.g. `0 ≤ (b+1)/(p−1)`) contain no exponent
//! variables and hold throughout the admitted parameter range; they are not
//! emitted.

use num_rational::Ratio;

use super::{Constraint, ConstraintSet, LinearForm, ReciprocalVar, RelKind};
use crate::exponent::{in_range, ExponentError, ParamPoint};
use crate::scalar::{rat, rdim, rint, ExactInt};
use ReciprocalVar::*;

/// The four space-time terms whose estimates generate the exponent
/// conditions: two weight-derivative terms and two gradient terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonlinearTerm {
    A1,
    A2,
    A3,
    A4,
}

/// The two terms of the difference bound `N[u] − N[v]`; the first replaces
/// the gradient factor of [`NonlinearTerm::A3`], the second that of
/// [`NonlinearTerm::A4`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DifferenceTerm {
    D1,
    D2,
}

fn lf<I: ExactInt>() -> LinearForm<I> {
    LinearForm::zero()
}

fn row<I: ExactInt>(
    label: &str,
    kind: RelKind,
    lhs: LinearForm<I>,
    rhs: LinearForm<I>,
) -> Constraint<I> {
    Constraint::new(label, kind, lhs, rhs)
}

/// Schrödinger admissibility for both pairs: time-exponent bands `[0, 1/2]`
/// and the scaling equalities `2/q + n/r = n/2`, `2/q̃ + n/r̃ = n/2`.
fn admissibility_rows<I: ExactInt>(n: &Ratio<I>) -> Vec<Constraint<I>> {
    let half = rat::<I>(1, 2);
    vec![
        row("ad1-q-lower", RelKind::LessEq, lf(), lf().with(InvQ, rint(1))),
        row("ad1-q-upper", RelKind::LessEq, lf().with(InvQ, rint(1)), lf().plus(half.clone())),
        row(
            "ad1-q-scaling",
            RelKind::Equality,
            lf().with(InvQ, rint(2)).with(InvR, n.clone()),
            lf().plus(n / rint::<I>(2)),
        ),
        row("ad1-qt-lower", RelKind::LessEq, lf(), lf().with(InvQt, rint(1))),
        row("ad1-qt-upper", RelKind::LessEq, lf().with(InvQt, rint(1)), lf().plus(half)),
        row(
            "ad1-qt-scaling",
            RelKind::Equality,
            lf().with(InvQt, rint(2)).with(InvRt, n.clone()),
            lf().plus(n / rint::<I>(2)),
        ),
    ]
}

/// Time-exponent pairing `1/q̃′ = (2p−1)/q`, with the dual reciprocal
/// written as `1 − 1/q̃` so the row is affine.
fn q_relation_row<I: ExactInt>(p: &Ratio<I>) -> Constraint<I> {
    let two_p_minus_1 = p * rint::<I>(2) - rint::<I>(1);
    row(
        "q-relation",
        RelKind::Equality,
        lf().plus(rint(1)).with(InvQt, rint(-1)),
        lf().with(InvQ, two_p_minus_1),
    )
}

/// Convolution-splitting block: open bounds on two reciprocals plus the
/// scale-balance equality `1/r_a + 1/r_b = 1/r̃′ + α/n` (again with
/// `1/r̃′ = 1 − 1/r̃`).
fn convolution_rows<I: ExactInt>(
    prefix: &str,
    ra: ReciprocalVar,
    rb: ReciprocalVar,
    alpha_over_n: &Ratio<I>,
) -> Vec<Constraint<I>> {
    let one = rint::<I>(1);
    vec![
        row(
            &format!("{prefix}-lower-{}", ra.name()),
            RelKind::StrictLess,
            lf(),
            lf().with(ra, one.clone()),
        ),
        row(
            &format!("{prefix}-upper-{}", ra.name()),
            RelKind::StrictLess,
            lf().with(ra, one.clone()),
            lf().plus(one.clone()),
        ),
        row(
            &format!("{prefix}-lower-{}", rb.name()),
            RelKind::StrictLess,
            lf(),
            lf().with(rb, one.clone()),
        ),
        row(
            &format!("{prefix}-upper-{}", rb.name()),
            RelKind::StrictLess,
            lf().with(rb, one.clone()),
            lf().plus(one.clone()),
        ),
        row(
            &format!("{prefix}-eq"),
            RelKind::Equality,
            lf().with(ra, one.clone()).with(rb, one.clone()),
            lf().with(InvRt, -one.clone()).plus(one + alpha_over_n.clone()),
        ),
    ]
}

/// Weighted-embedding block for one auxiliary reciprocal `ri`, cleared by
/// the positive Hölder factor `f`:
/// `0 < 1/(f·ri) ≤ 1/r < 1`, `w/f < n/(f·ri)`, and the scale equality
/// `(w−f)/f = n/(f·ri) − n/r`.
fn embedding_rows<I: ExactInt>(
    prefix: &str,
    ri: ReciprocalVar,
    factor: &Ratio<I>,
    weight: &Ratio<I>,
    n: &Ratio<I>,
) -> Vec<Constraint<I>> {
    let one = rint::<I>(1);
    vec![
        row(
            &format!("{prefix}-pos"),
            RelKind::StrictLess,
            lf(),
            lf().with(ri, one.clone()),
        ),
        row(
            &format!("{prefix}-hoelder"),
            RelKind::LessEq,
            lf().with(ri, one.clone()),
            lf().with(InvR, factor.clone()),
        ),
        row(
            &format!("{prefix}-r-range"),
            RelKind::StrictLess,
            lf().with(InvR, one.clone()),
            lf().plus(one),
        ),
        row(
            &format!("{prefix}-weight"),
            RelKind::StrictLess,
            lf().plus(weight.clone()),
            lf().with(ri, n.clone()),
        ),
        row(
            &format!("{prefix}-eq"),
            RelKind::Equality,
            lf().plus(weight - factor),
            lf().with(ri, n.clone()).with(InvR, -(factor * n)),
        ),
    ]
}

/// `1/r_a = 1/r_b + 1/r`, implied by the two adjacent scale equalities and
/// carried with a label marking the redundancy.
fn split_row<I: ExactInt>(label: &str, ra: ReciprocalVar, rb: ReciprocalVar) -> Constraint<I> {
    let one = rint::<I>(1);
    row(
        label,
        RelKind::Equality,
        lf().with(ra, one.clone()),
        lf().with(rb, one.clone()).with(InvR, one),
    )
}

struct BlockCtx<I: ExactInt> {
    n: Ratio<I>,
    alpha_over_n: Ratio<I>,
    b: Ratio<I>,
    b1: Ratio<I>,
    p: Ratio<I>,
    pm1: Ratio<I>,
    pm2: Ratio<I>,
}

impl<I: ExactInt> BlockCtx<I> {
    fn new(pt: &ParamPoint<I>, p: &Ratio<I>) -> Self {
        let n = rdim::<I>(pt.n);
        BlockCtx {
            alpha_over_n: &pt.alpha / &n,
            b: pt.b.clone(),
            b1: &pt.b + rint::<I>(1),
            n,
            p: p.clone(),
            pm1: p - rint::<I>(1),
            pm2: p - rint::<I>(2),
        }
    }

    fn c7(&self) -> Vec<Constraint<I>> {
        convolution_rows("c7", InvR1, InvR2, &self.alpha_over_n)
    }
    fn c8(&self) -> Vec<Constraint<I>> {
        embedding_rows("c8", InvR1, &self.pm1, &self.b1, &self.n)
    }
    fn c9(&self) -> Vec<Constraint<I>> {
        embedding_rows("c9", InvR2, &self.p, &self.b, &self.n)
    }
    fn c10(&self) -> Vec<Constraint<I>> {
        convolution_rows("c10", InvR3, InvR4, &self.alpha_over_n)
    }
    fn c11(&self) -> Vec<Constraint<I>> {
        embedding_rows("c11", InvR3, &self.pm1, &self.b, &self.n)
    }
    fn c12(&self) -> Vec<Constraint<I>> {
        embedding_rows("c12", InvR4, &self.p, &self.b1, &self.n)
    }
    fn c2(&self) -> Vec<Constraint<I>> {
        embedding_rows("c2", InvR5, &self.pm2, &self.b, &self.n)
    }
    fn c6(&self) -> Vec<Constraint<I>> {
        embedding_rows("c6", InvR6, &self.pm1, &self.b, &self.n)
    }
}

fn require_in_range<I: ExactInt>(pt: &ParamPoint<I>) -> Result<(), ExponentError> {
    if in_range(pt) {
        Ok(())
    } else {
        Err(ExponentError::OutOfRange)
    }
}

/// The complete labeled system: admissibility, the time-exponent pairing,
/// and all four term blocks, deduplicated (first label wins).
pub fn raw_constraints<I: ExactInt>(
    pt: &ParamPoint<I>,
) -> Result<ConstraintSet<I>, ExponentError> {
    require_in_range(pt)?;
    let mut set = ConstraintSet::new(pt.clone());
    let ctx = BlockCtx::new(pt, &set.p);
    set.extend(admissibility_rows(&ctx.n));
    set.push(q_relation_row(&set.p.clone()));
    set.extend(ctx.c7());
    set.extend(ctx.c8());
    set.extend(ctx.c9());
    set.extend(ctx.c10());
    set.extend(ctx.c11());
    set.extend(ctx.c12());
    set.push(split_row("split-r1-redundant", InvR1, InvR5));
    set.extend(ctx.c2());
    set.push(split_row("split-r4-redundant", InvR4, InvR6));
    set.extend(ctx.c6());
    set.dedup();
    Ok(set)
}

/// Exponent conditions for one of the four space-time terms, deduplicated.
pub fn nonlinear_term_constraints<I: ExactInt>(
    pt: &ParamPoint<I>,
    term: NonlinearTerm,
) -> Result<ConstraintSet<I>, ExponentError> {
    require_in_range(pt)?;
    let mut set = ConstraintSet::new(pt.clone());
    let ctx = BlockCtx::new(pt, &set.p);
    match term {
        NonlinearTerm::A1 => {
            set.extend(ctx.c7());
            set.extend(ctx.c8());
            set.extend(ctx.c9());
        }
        NonlinearTerm::A2 => {
            set.extend(ctx.c10());
            set.extend(ctx.c11());
            set.extend(ctx.c12());
        }
        NonlinearTerm::A3 => {
            set.extend(ctx.c7());
            set.push(split_row("split-r1-redundant", InvR1, InvR5));
            set.extend(ctx.c9());
            set.extend(ctx.c2());
        }
        NonlinearTerm::A4 => {
            set.extend(ctx.c10());
            set.push(split_row("split-r4-redundant", InvR4, InvR6));
            set.extend(ctx.c11());
            set.extend(ctx.c6());
        }
    }
    set.dedup();
    Ok(set)
}

/// Exponent conditions for the two terms of the difference bound.
///
/// The first term replaces the modulus-gradient factor `|u|^{p−2}∇u` with
/// `(|u|^{p−2}+|v|^{p−2})|u−v|`; the Hölder splitting and weighted
/// embedding are applied to the same factors with the same exponents, so
/// the generated rows must coincide, as labeled sets, with those of the
/// corresponding gradient term. The constructor mirrors the splitting
/// step-by-step rather than delegating, precisely so that coincidence is a
/// checkable property and not a tautology.
pub fn difference_term_constraints<I: ExactInt>(
    pt: &ParamPoint<I>,
    term: DifferenceTerm,
) -> Result<ConstraintSet<I>, ExponentError> {
    require_in_range(pt)?;
    let mut set = ConstraintSet::new(pt.clone());
    let ctx = BlockCtx::new(pt, &set.p);
    match term {
        DifferenceTerm::D1 => {
            // |x|^{-b}(|u|^{p−2}+|v|^{p−2})|u−v| (I_α∗|x|^{-b}|u|^p):
            // convolution split over (r1, r2), the difference factor in
            // (q, r), |w|^{p−2} through r5 with 1/r1 = 1/r5 + 1/r, |u|^p
            // through r2.
            set.extend(convolution_rows("c7", InvR1, InvR2, &ctx.alpha_over_n));
            set.push(split_row("split-r1-redundant", InvR1, InvR5));
            set.extend(embedding_rows("c9", InvR2, &ctx.p, &ctx.b, &ctx.n));
            set.extend(embedding_rows("c2", InvR5, &ctx.pm2, &ctx.b, &ctx.n));
        }
        DifferenceTerm::D2 => {
            // |x|^{-b}|v|^{p−1} (I_α∗|x|^{-b}(|u|^{p−1}+|v|^{p−1})|u−v|):
            // convolution split over (r3, r4), |v|^{p−1} through r3, the
            // convolved factor through r4 = (r6, r) with 1/r4 = 1/r6 + 1/r.
            set.extend(convolution_rows("c10", InvR3, InvR4, &ctx.alpha_over_n));
            set.push(split_row("split-r4-redundant", InvR4, InvR6));
            set.extend(embedding_rows("c11", InvR3, &ctx.pm1, &ctx.b, &ctx.n));
            set.extend(embedding_rows("c6", InvR6, &ctx.pm1, &ctx.b, &ctx.n));
        }
    }
    set.dedup();
    Ok(set)
}

/// The equivalent three-part system over `n/r` alone: the gate `b ≤ p−2`,
/// the scale window `1 < n/r < 1 + (n−1−b)/p`, and the admissibility band
/// `n/2 − 2/(2p−1) ≤ n/r ≤ n/2 − 1/(2p−1)`.
pub fn reduced_constraints<I: ExactInt>(
    pt: &ParamPoint<I>,
) -> Result<ConstraintSet<I>, ExponentError> {
    require_in_range(pt)?;
    let mut set = ConstraintSet::new(pt.clone());
    let p = set.p.clone();
    let n = rdim::<I>(pt.n);
    let one = rint::<I>(1);
    let two = rint::<I>(2);
    let two_p_minus_1 = &p * &two - &one;
    let half_n = &n / &two;
    set.push(row(
        "r0-gate",
        RelKind::LessEq,
        lf().plus(pt.b.clone()),
        lf().plus(&p - &two),
    ));
    set.push(row(
        "r0-scale-lower",
        RelKind::StrictLess,
        lf().plus(one.clone()),
        lf().with(InvR, n.clone()),
    ));
    set.push(row(
        "r0-scale-upper",
        RelKind::StrictLess,
        lf().with(InvR, n.clone()),
        lf().plus(&one + (&n - &one - &pt.b) / &p),
    ));
    set.push(row(
        "r0-admissible-lower",
        RelKind::LessEq,
        lf().plus(&half_n - &two / &two_p_minus_1),
        lf().with(InvR, n.clone()),
    ));
    set.push(row(
        "r0-admissible-upper",
        RelKind::LessEq,
        lf().with(InvR, n),
        lf().plus(&half_n - &one / &two_p_minus_1),
    ));
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn pt(n: u32, a: (i64, i64), b: (i64, i64)) -> ParamPoint<BigInt> {
        ParamPoint::new(n, rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    #[test]
    fn raw_row_count_is_frozen() {
        // Golden enumeration: 6 admissibility + 1 pairing + 2×5 convolution
        // blocks + 6×5 embedding blocks + 2 splits = 49 rows before
        // deduplication; the four repeated positivity rows and five
        // repeated copies of 1/r < 1 collapse, leaving 40.
        let set = raw_constraints(&pt(3, (2, 1), (1, 1))).unwrap();
        assert_eq!(set.len(), 40);
        let set = raw_constraints(&pt(5, (4, 1), (1, 5))).unwrap();
        assert_eq!(set.len(), 40);
        let set = raw_constraints(&pt(7, (13, 2), (1, 2))).unwrap();
        assert_eq!(set.len(), 40);
    }

    #[test]
    fn raw_rejects_out_of_range() {
        let bad = ParamPoint::<BigInt>::new(5, rat(4, 1), rat(2, 1)).unwrap();
        assert!(raw_constraints(&bad).is_err());
    }

    #[test]
    fn c7_equality_coefficient_pattern() {
        let set = raw_constraints(&pt(3, (2, 1), (1, 1))).unwrap();
        let c7 = set.find("c7-eq").unwrap();
        assert_eq!(c7.kind, RelKind::Equality);
        assert_eq!(c7.lhs.coeffs[&InvR1], rat(1, 1));
        assert_eq!(c7.lhs.coeffs[&InvR2], rat(1, 1));
        assert!(c7.lhs.constant.is_zero());
        // Dual side: 1/r̃′ + α/n written via 1/r̃ gives −1 on inv_rt and
        // constant 1 + α/n.
        assert_eq!(c7.rhs.coeffs[&InvRt], rat(-1, 1));
        assert_eq!(c7.rhs.constant, rat(1, 1) + rat::<BigInt>(2, 3));
    }

    #[test]
    fn first_labels_survive_dedup() {
        let set = raw_constraints(&pt(3, (2, 1), (1, 1))).unwrap();
        // Positivity of inv_r1 enters at c7; the c8 copy collapses.
        assert!(set.find("c7-lower-inv_r1").is_some());
        assert!(set.find("c8-pos").is_none());
        // 1/r < 1 first appears in c8.
        assert!(set.find("c8-r-range").is_some());
        assert!(set.find("c9-r-range").is_none());
        // The r5/r6 positivity rows have no earlier copy.
        assert!(set.find("c2-pos").is_some());
        assert!(set.find("c6-pos").is_some());
        assert!(set.find("split-r1-redundant").is_some());
        assert!(set.find("split-r4-redundant").is_some());
    }

    #[test]
    fn reduced_window_3_2_1() {
        // p = 3: gate 1 ≤ 1; scale window (1, 4/3); admissibility band
        // [11/10, 13/10].
        let set = reduced_constraints(&pt(3, (2, 1), (1, 1))).unwrap();
        assert_eq!(set.len(), 5);
        let gate = set.find("r0-gate").unwrap();
        assert_eq!(gate.lhs.constant, rat(1, 1));
        assert_eq!(gate.rhs.constant, rat(1, 1));
        let su = set.find("r0-scale-upper").unwrap();
        assert_eq!(su.rhs.constant, rat(4, 3));
        let al = set.find("r0-admissible-lower").unwrap();
        assert_eq!(al.lhs.constant, rat(11, 10));
        let au = set.find("r0-admissible-upper").unwrap();
        assert_eq!(au.rhs.constant, rat(13, 10));
    }

    #[test]
    fn difference_sets_equal_gradient_sets() {
        for (n, a, b) in [(3, (2i64, 1i64), (1i64, 1i64)), (4, (2, 1), (1, 2)), (6, (3, 1), (1, 4))] {
            let pt = pt(n, a, b);
            let a3 = nonlinear_term_constraints(&pt, NonlinearTerm::A3).unwrap();
            let d1 = difference_term_constraints(&pt, DifferenceTerm::D1).unwrap();
            assert_eq!(a3.labeled_keys(), d1.labeled_keys());
            let a4 = nonlinear_term_constraints(&pt, NonlinearTerm::A4).unwrap();
            let d2 = difference_term_constraints(&pt, DifferenceTerm::D2).unwrap();
            assert_eq!(a4.labeled_keys(), d2.labeled_keys());
            // And the two gradient terms genuinely differ.
            assert_ne!(a3.labeled_keys(), a4.labeled_keys());
        }
    }

    #[test]
    fn raw_is_union_of_term_blocks() {
        use std::collections::BTreeSet;
        let pt = pt(5, (4, 1), (1, 5));
        let raw = raw_constraints(&pt).unwrap();
        let mut union: BTreeSet<String> = BTreeSet::new();
        for term in [
            NonlinearTerm::A1,
            NonlinearTerm::A2,
            NonlinearTerm::A3,
            NonlinearTerm::A4,
        ] {
            for c in &nonlinear_term_constraints(&pt, term).unwrap().constraints {
                union.insert(c.canonical_key());
            }
        }
        for c in admissibility_rows(&rdim::<BigInt>(pt.n))
            .into_iter()
            .chain([q_relation_row(&raw.p)])
        {
            union.insert(c.canonical_key());
        }
        let raw_keys: BTreeSet<String> =
            raw.constraints.iter().map(|c| c.canonical_key()).collect();
        assert_eq!(raw_keys, union);
    }

    #[test]
    fn p2_edge_embedding_degenerates_to_infeasible_rows() {
        // b at the upper end of the range makes p = 2; the r5 block must
        // then pin inv_r5 ≤ 0 against 0 < inv_r5.
        let pt = pt(4, (2, 1), (1, 1));
        let set = raw_constraints(&pt).unwrap();
        assert_eq!(set.p, rat(2, 1));
        let h = set.find("c2-hoelder").unwrap();
        assert!(h.rhs.coeffs.get(&InvR).is_none(), "factor p−2 vanishes");
    }
}
