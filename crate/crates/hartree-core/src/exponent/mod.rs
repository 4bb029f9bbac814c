//! Critical exponents and parameter-region classification.
//!
//! A parameter point is (n, α, b) with n ≥ 3 the spatial dimension, α the
//! convolution-potential order, b > 0 the inhomogeneity strength. The
//! energy-critical power is
//!
//! ```text
//! p = 2 + (α − n + 4 − 2b)/(n − 2),
//! ```
//!
//! the exponent at which the rescaling u_δ(x, t) = δ^{(2−2b+α)/(2(p−1))} u(δx, δ²t)
//! leaves the homogeneous-Sobolev-1 norm of the datum invariant.
//!
//! Region predicates (all decided exactly over rationals, with Kim's
//! surd-valued boundary handled in [`QuadExt`] arithmetic):
//!
//! * [`in_range`]: max{0, n−4} < α < n and 0 < b ≤ (α−n+4)/2 — the admissible
//!   parameter rectangle (equivalently p ≥ 2).
//! * [`theorem_region`]: in-range and 0 < b ≤ (α−n+4)/n — where the
//!   well-posedness result mechanized by [`crate::feasibility`] applies.
//! * [`kim_region`]: max{(n−2)/3, n−4} < α < n and
//!   max{0, α/2 − (n−4+√(9n²−8n+16))/8} < b ≤ (α−n+4)/2.
//! * [`gx_region`] (n = 3): 0 < α < 3, 0 < b ≤ min{(α+1)/3, α/2}.
//! * [`sp_region`] (n = 3): 0 < α < 1, α/2 < b < (α+1)/2.
//!
//! [`classify`] applies them in fixed priority: out-of-range, then theorem,
//! Kim, the two n = 3 results, else open.

mod landmarks;
mod quad;

pub use landmarks::{landmarks, Landmark};
pub use quad::QuadExt;

use crate::scalar::{rat, rdim, rint, ExactInt};
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExponentError {
    #[error("spatial dimension must be at least 3, got {0}")]
    DimensionTooSmall(u32),
    #[error("region is defined only in dimension 3, got {0}")]
    NotDimensionThree(u32),
    #[error("scaling exponents are undefined at p = 1")]
    DegenerateP,
    #[error("parameter point lies outside the admitted (α, b) range")]
    OutOfRange,
}

/// Parameter point (n, α, b). `n ≥ 3` is enforced at construction; α and b
/// are otherwise unconstrained so that out-of-range points remain
/// representable (classification reports them as such).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoint<I: ExactInt> {
    pub n: u32,
    pub alpha: Ratio<I>,
    pub b: Ratio<I>,
}

impl<I: ExactInt> ParamPoint<I> {
    pub fn new(n: u32, alpha: Ratio<I>, b: Ratio<I>) -> Result<Self, ExponentError> {
        if n < 3 {
            return Err(ExponentError::DimensionTooSmall(n));
        }
        Ok(ParamPoint { n, alpha, b })
    }

    /// Dimension as a rational.
    pub fn n_rat(&self) -> Ratio<I> {
        rdim(self.n)
    }

    /// Radicand of the Kim boundary surd: 9n² − 8n + 16.
    pub fn disc(&self) -> Ratio<I> {
        let n = self.n as i64;
        rint(9 * n * n - 8 * n + 16)
    }
}

/// Region membership labels in classification priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum RegionLabel {
    ThisPaper,
    Kim,
    GuzmanXu3d,
    SaanouniPeng3d,
    Open,
    OutOfRange,
}

impl RegionLabel {
    /// Stable machine-readable tag (CSV/JSON outputs).
    pub fn tag(self) -> &'static str {
        match self {
            RegionLabel::ThisPaper => "this-paper",
            RegionLabel::Kim => "kim",
            RegionLabel::GuzmanXu3d => "guzman-xu-3d",
            RegionLabel::SaanouniPeng3d => "saanouni-peng-3d",
            RegionLabel::Open => "open",
            RegionLabel::OutOfRange => "out-of-range",
        }
    }
}

impl std::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Energy-critical power p = 2 + (α − n + 4 − 2b)/(n − 2).
pub fn critical_power<I: ExactInt>(pt: &ParamPoint<I>) -> Ratio<I> {
    let n = pt.n_rat();
    let num = &pt.alpha - &n + rint(4) - rat(2, 1) * &pt.b;
    rint::<I>(2) + num / (n - rint(2))
}

/// Scaling exponents of u_δ(x, t) = δ^amplitude · u(δx, δ²t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingExponents<I: ExactInt> {
    /// Amplitude exponent (2 − 2b + α)/(2(p − 1)).
    pub amplitude: Ratio<I>,
    /// Exponent of δ in the homogeneous-Sobolev-1 norm of the rescaled
    /// datum: 1 − n/2 + amplitude. Zero exactly at the critical power.
    pub h1dot: Ratio<I>,
}

pub fn scaling_exponents<I: ExactInt>(
    pt: &ParamPoint<I>,
) -> Result<ScalingExponents<I>, ExponentError> {
    let p = critical_power(pt);
    let pm1 = &p - rint(1);
    if pm1.is_zero() {
        return Err(ExponentError::DegenerateP);
    }
    let amplitude = (rint::<I>(2) - rat(2, 1) * &pt.b + &pt.alpha) / (rat::<I>(2, 1) * pm1);
    let h1dot = rint::<I>(1) - pt.n_rat() / rint(2) + &amplitude;
    Ok(ScalingExponents { amplitude, h1dot })
}

/// Upper limit of b in the admissible rectangle: (α − n + 4)/2.
pub fn range_b_upper<I: ExactInt>(pt: &ParamPoint<I>) -> Ratio<I> {
    (&pt.alpha - pt.n_rat() + rint(4)) / rint(2)
}

/// Upper limit of b in the theorem region: (α − n + 4)/n.
pub fn theorem_b_upper<I: ExactInt>(pt: &ParamPoint<I>) -> Ratio<I> {
    (&pt.alpha - pt.n_rat() + rint(4)) / pt.n_rat()
}

/// Lower limit of α common to the admissible rectangle: max{0, n − 4}.
pub fn range_alpha_lower<I: ExactInt>(n: u32) -> Ratio<I> {
    rint((n as i64 - 4).max(0))
}

/// Lower limit of α in Kim's region: max{(n − 2)/3, n − 4}.
pub fn kim_alpha_lower<I: ExactInt>(n: u32) -> Ratio<I> {
    let third = rat::<I>(n as i64 - 2, 3);
    let shifted = rint::<I>(n as i64 - 4);
    if third > shifted {
        third
    } else {
        shifted
    }
}

/// Kim's surd-valued lower boundary for b at the given α:
/// α/2 − (n − 4 + √(9n² − 8n + 16))/8.
pub fn kim_b_lower<I: ExactInt>(pt: &ParamPoint<I>) -> QuadExt<I> {
    let a = &pt.alpha / rint(2) - (pt.n_rat() - rint(4)) / rint(8);
    QuadExt::new(a, rat(-1, 8), pt.disc())
}

/// max{0, n−4} < α < n and 0 < b ≤ (α − n + 4)/2.
pub fn in_range<I: ExactInt>(pt: &ParamPoint<I>) -> bool {
    pt.alpha > range_alpha_lower(pt.n)
        && pt.alpha < pt.n_rat()
        && pt.b.is_positive()
        && pt.b <= range_b_upper(pt)
}

/// In-range and 0 < b ≤ (α − n + 4)/n.
pub fn theorem_region<I: ExactInt>(pt: &ParamPoint<I>) -> bool {
    in_range(pt) && pt.b <= theorem_b_upper(pt)
}

/// Kim's region; the surd-valued lower bound on b is compared exactly.
pub fn kim_region<I: ExactInt>(pt: &ParamPoint<I>) -> bool {
    pt.alpha > kim_alpha_lower(pt.n)
        && pt.alpha < pt.n_rat()
        && pt.b.is_positive()
        && pt.b <= range_b_upper(pt)
        && kim_b_lower(pt).cmp_rational(&pt.b) == Ordering::Less
}

/// n = 3 only: 0 < α < 3 and 0 < b ≤ min{(α+1)/3, α/2}.
pub fn gx_region<I: ExactInt>(pt: &ParamPoint<I>) -> Result<bool, ExponentError> {
    if pt.n != 3 {
        return Err(ExponentError::NotDimensionThree(pt.n));
    }
    let third = (&pt.alpha + rint(1)) / rint(3);
    let half = &pt.alpha / rint(2);
    let cap = if third < half { third } else { half };
    Ok(pt.alpha.is_positive() && pt.alpha < rint(3) && pt.b.is_positive() && pt.b <= cap)
}

/// n = 3 only: 0 < α < 1 and α/2 < b < (α+1)/2 (both strict).
pub fn sp_region<I: ExactInt>(pt: &ParamPoint<I>) -> Result<bool, ExponentError> {
    if pt.n != 3 {
        return Err(ExponentError::NotDimensionThree(pt.n));
    }
    Ok(pt.alpha.is_positive()
        && pt.alpha < rint(1)
        && pt.b > &pt.alpha / rint(2)
        && pt.b < (&pt.alpha + rint(1)) / rint(2))
}

/// Fixed-priority classification: out-of-range, theorem, Kim, then the two
/// dimension-3 results, else open.
pub fn classify<I: ExactInt>(pt: &ParamPoint<I>) -> RegionLabel {
    if !in_range(pt) {
        return RegionLabel::OutOfRange;
    }
    if theorem_region(pt) {
        return RegionLabel::ThisPaper;
    }
    if kim_region(pt) {
        return RegionLabel::Kim;
    }
    if pt.n == 3 {
        if gx_region(pt).expect("n = 3") {
            return RegionLabel::GuzmanXu3d;
        }
        if sp_region(pt).expect("n = 3") {
            return RegionLabel::SaanouniPeng3d;
        }
    }
    RegionLabel::Open
}
