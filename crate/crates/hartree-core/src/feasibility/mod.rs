//! Exact feasibility bookkeeping for the admissible-pair search.
//!
//! The nonlinear space-time estimates hold once a family of Lebesgue
//! exponents `(q, r, q̃, r̃, r₁ … r₆)` satisfies a list of scaling equalities
//! and Hölder-type inequalities. Everything is linear in the *reciprocals*
//! of those exponents, and the equality rows make every reciprocal an affine
//! function of the single quantity `x = n/r`. Feasibility over the continuum
//! is therefore decidable exactly: substitute the affine forms into each
//! inequality and intersect the resulting one-variable interval bounds.
//!
//! The module keeps three views of the system:
//! - [`raw_constraints`]: the full labeled row list, one row per displayed
//!   relation, deduplicated;
//! - [`reduced_constraints`]: the equivalent three-part system in `n/r`
//!   (a gate `b ≤ p−2` plus a feasibility window);
//! - [`find_witness`]: a concrete rational assignment picked from the window
//!   midpoint and back-substituted through the equality chain.
//!
//! [`verify_reduction`] checks the equivalence of the three views on sampled
//! parameter points, with a brute-force rational grid scan as a cross-check.

mod build;
mod claims;
mod sample;
mod solve;

pub use build::{
    difference_term_constraints, nonlinear_term_constraints, raw_constraints,
    reduced_constraints, DifferenceTerm, NonlinearTerm,
};
pub use claims::{verify_redundancy_claims, ClaimCheck, RedundancyReport};
pub use sample::{
    coverage56, sample_in_range, sample_in_range_batch, CoverageReport,
};
pub use solve::{
    find_witness, grid_scan_feasible, raw_window, reduced_window, verify_reduction,
    verify_reduction_with_stride, Bound, Counterexample, ReductionReport, Window,
};

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::exponent::{critical_power, ParamPoint};
use crate::scalar::ExactInt;

/// Reciprocal of one of the ten Lebesgue exponents in the estimate chain.
///
/// `InvQ = 0` encodes `q = ∞`; all other values live in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReciprocalVar {
    InvQ,
    InvR,
    InvQt,
    InvRt,
    InvR1,
    InvR2,
    InvR3,
    InvR4,
    InvR5,
    InvR6,
}

impl ReciprocalVar {
    pub const ALL: [ReciprocalVar; 10] = [
        ReciprocalVar::InvQ,
        ReciprocalVar::InvR,
        ReciprocalVar::InvQt,
        ReciprocalVar::InvRt,
        ReciprocalVar::InvR1,
        ReciprocalVar::InvR2,
        ReciprocalVar::InvR3,
        ReciprocalVar::InvR4,
        ReciprocalVar::InvR5,
        ReciprocalVar::InvR6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReciprocalVar::InvQ => "inv_q",
            ReciprocalVar::InvR => "inv_r",
            ReciprocalVar::InvQt => "inv_qt",
            ReciprocalVar::InvRt => "inv_rt",
            ReciprocalVar::InvR1 => "inv_r1",
            ReciprocalVar::InvR2 => "inv_r2",
            ReciprocalVar::InvR3 => "inv_r3",
            ReciprocalVar::InvR4 => "inv_r4",
            ReciprocalVar::InvR5 => "inv_r5",
            ReciprocalVar::InvR6 => "inv_r6",
        }
    }
}

impl fmt::Display for ReciprocalVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Relation kind carried by a constraint row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelKind {
    Equality,
    LessEq,
    StrictLess,
}

impl RelKind {
    pub fn tag(self) -> &'static str {
        match self {
            RelKind::Equality => "eq",
            RelKind::LessEq => "le",
            RelKind::StrictLess => "lt",
        }
    }

    /// Whether `diff REL 0` holds for `diff = lhs − rhs`.
    fn satisfied<I: ExactInt>(self, diff: &Ratio<I>) -> bool {
        match self {
            RelKind::Equality => diff.is_zero(),
            RelKind::LessEq => !diff.is_positive(),
            RelKind::StrictLess => diff.is_negative(),
        }
    }
}

/// Rational linear form `Σ coeffs[v]·v + constant` over the reciprocal variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm<I: ExactInt> {
    pub coeffs: BTreeMap<ReciprocalVar, Ratio<I>>,
    pub constant: Ratio<I>,
}

impl<I: ExactInt> LinearForm<I> {
    pub fn zero() -> Self {
        LinearForm { coeffs: BTreeMap::new(), constant: Ratio::zero() }
    }

    pub fn constant(c: Ratio<I>) -> Self {
        LinearForm { coeffs: BTreeMap::new(), constant: c }
    }

    /// Builder: add `c·v` to the form.
    pub fn with(mut self, v: ReciprocalVar, c: Ratio<I>) -> Self {
        if !c.is_zero() {
            let entry = self.coeffs.entry(v).or_insert_with(Ratio::zero);
            *entry = &*entry + &c;
            if entry.is_zero() {
                self.coeffs.remove(&v);
            }
        }
        self
    }

    /// Builder: add a constant term.
    pub fn plus(mut self, c: Ratio<I>) -> Self {
        self.constant = &self.constant + &c;
        self
    }

    pub fn eval(&self, values: &BTreeMap<ReciprocalVar, Ratio<I>>) -> Ratio<I> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            let x = values
                .get(v)
                .unwrap_or_else(|| panic!("assignment missing {v}"));
            acc = acc + c * x;
        }
        acc
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            out = out.with(*v, -c.clone());
        }
        out.constant = &out.constant - &other.constant;
        out
    }
}

/// One labeled row `lhs REL rhs` of a constraint system.
#[derive(Clone, Debug)]
pub struct Constraint<I: ExactInt> {
    pub label: String,
    pub kind: RelKind,
    pub lhs: LinearForm<I>,
    pub rhs: LinearForm<I>,
}

impl<I: ExactInt> Constraint<I> {
    pub fn new(label: &str, kind: RelKind, lhs: LinearForm<I>, rhs: LinearForm<I>) -> Self {
        Constraint { label: label.to_string(), kind, lhs, rhs }
    }

    /// `lhs − rhs` as a single form; the row reads `difference REL 0`.
    pub fn difference(&self) -> LinearForm<I> {
        self.lhs.sub(&self.rhs)
    }

    pub fn holds(&self, values: &BTreeMap<ReciprocalVar, Ratio<I>>) -> bool {
        self.kind.satisfied(&self.difference().eval(values))
    }

    /// Scale-normalized fingerprint of the relation content (label ignored).
    ///
    /// The difference form is divided by the absolute value of its leading
    /// coefficient, which preserves inequality direction; equalities are
    /// additionally sign-normalized. Rows with equal keys state the same
    /// relation.
    pub fn canonical_key(&self) -> String {
        let diff = self.difference();
        let lead = diff.coeffs.values().next().cloned();
        let (scale, flip) = match lead {
            Some(c) => {
                let flip = self.kind == RelKind::Equality && c.is_negative();
                (c.abs(), flip)
            }
            None => (Ratio::from_integer(I::one()), false),
        };
        let mut out = String::from(self.kind.tag());
        for (v, c) in &diff.coeffs {
            let mut c = c / &scale;
            if flip {
                c = -c;
            }
            out.push_str(&format!("|{}:{}", v.name(), c));
        }
        let mut k = &diff.constant / &scale;
        if flip {
            k = -k;
        }
        out.push_str(&format!("|const:{k}"));
        out
    }
}

/// Full rational assignment of the ten reciprocal variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentAssignment<I: ExactInt> {
    pub values: BTreeMap<ReciprocalVar, Ratio<I>>,
}

impl<I: ExactInt> ExponentAssignment<I> {
    pub fn get(&self, v: ReciprocalVar) -> &Ratio<I> {
        &self.values[&v]
    }

    /// The exponent itself, `1/value`; `None` encodes `∞` (zero reciprocal).
    pub fn exponent(&self, v: ReciprocalVar) -> Option<Ratio<I>> {
        let inv = self.get(v);
        if inv.is_zero() {
            None
        } else {
            Some(inv.recip())
        }
    }

    /// Range sanity: every reciprocal in `[0,1]`, and the two time exponents
    /// inside the admissibility band `[0, 1/2]`.
    pub fn bands_ok(&self) -> bool {
        let one = Ratio::from_integer(I::one());
        let half = crate::scalar::rat::<I>(1, 2);
        self.values.iter().all(|(v, x)| {
            let cap = match v {
                ReciprocalVar::InvQ | ReciprocalVar::InvQt => &half,
                _ => &one,
            };
            !x.is_negative() && x <= cap
        })
    }
}

/// Ordered, labeled constraint system together with the parameters it was
/// built for (the point in the `(α, b)` plane and the critical power).
#[derive(Clone, Debug)]
pub struct ConstraintSet<I: ExactInt> {
    pub pt: ParamPoint<I>,
    pub p: Ratio<I>,
    pub constraints: Vec<Constraint<I>>,
}

impl<I: ExactInt> ConstraintSet<I> {
    pub fn new(pt: ParamPoint<I>) -> Self {
        let p = critical_power(&pt);
        ConstraintSet { pt, p, constraints: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn push(&mut self, c: Constraint<I>) {
        self.constraints.push(c);
    }

    pub fn extend(&mut self, cs: Vec<Constraint<I>>) {
        self.constraints.extend(cs);
    }

    pub fn find(&self, label: &str) -> Option<&Constraint<I>> {
        self.constraints.iter().find(|c| c.label == label)
    }

    /// Drop rows whose relation content repeats an earlier row; the first
    /// label wins. Positivity rows and `1/r < 1` appear in several places.
    pub fn dedup(&mut self) {
        let mut seen = std::collections::BTreeSet::new();
        self.constraints.retain(|c| seen.insert(c.canonical_key()));
    }

    /// Evaluate every row; returns `(label, holds)` in row order.
    pub fn evaluate(&self, a: &ExponentAssignment<I>) -> Vec<(String, bool)> {
        self.constraints
            .iter()
            .map(|c| (c.label.clone(), c.holds(&a.values)))
            .collect()
    }

    /// Labels of violated rows; empty means the assignment satisfies the set.
    pub fn check(&self, a: &ExponentAssignment<I>) -> Vec<String> {
        self.evaluate(a)
            .into_iter()
            .filter_map(|(label, ok)| if ok { None } else { Some(label) })
            .collect()
    }

    /// Sorted multiset of (label, relation fingerprint) pairs, the notion of
    /// identity used when two differently-built systems must coincide.
    pub fn labeled_keys(&self) -> Vec<(String, String)> {
        let mut keys: Vec<_> = self
            .constraints
            .iter()
            .map(|c| (c.label.clone(), c.canonical_key()))
            .collect();
        keys.sort();
        keys
    }

    /// JSON document with parameters, labels, kinds, and coefficient maps;
    /// rationals are rendered as `num/den` strings so the file is exact.
    pub fn to_json(&self) -> Value {
        let form_json = |f: &LinearForm<I>| -> Value {
            let mut coeffs = Map::new();
            for (v, c) in &f.coeffs {
                coeffs.insert(v.name().to_string(), Value::String(c.to_string()));
            }
            json!({ "coeffs": coeffs, "constant": f.constant.to_string() })
        };
        let rows: Vec<Value> = self
            .constraints
            .iter()
            .map(|c| {
                json!({
                    "label": c.label,
                    "kind": c.kind.tag(),
                    "lhs": form_json(&c.lhs),
                    "rhs": form_json(&c.rhs),
                })
            })
            .collect();
        json!({
            "params": {
                "n": self.pt.n,
                "alpha": self.pt.alpha.to_string(),
                "b": self.pt.b.to_string(),
                "p": self.p.to_string(),
            },
            "constraints": rows,
        })
    }
}
