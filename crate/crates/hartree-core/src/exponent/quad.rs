//! Exact arithmetic in the real quadratic extension ℚ(√D).
//!
//! Region boundaries involve the surd s = √(9n² − 8n + 16), which is
//! irrational for every n ≥ 3 (the radicand sits strictly between
//! consecutive squares). Numbers a + c·s are kept in exact square-root form;
//! comparisons are decided by radical isolation and integer squaring with
//! sign case analysis — never through floats.

use crate::scalar::ExactInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exact number `a + c·√disc` with rational `a`, `c` and a fixed positive
/// integer radicand `disc`.
///
/// Comparisons assume `disc` is not a perfect square, so `a + c·√disc = 0`
/// forces `a = c = 0`; the constructor checks this when the radicand fits
/// in a machine word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt<I: ExactInt> {
    pub a: Ratio<I>,
    pub c: Ratio<I>,
    pub disc: Ratio<I>,
}

impl<I: ExactInt> QuadExt<I> {
    pub fn new(a: Ratio<I>, c: Ratio<I>, disc: Ratio<I>) -> Self {
        assert!(disc.is_integer(), "radicand must be an integer");
        assert!(disc.is_positive(), "radicand must be positive");
        debug_assert!(!is_perfect_square(&disc), "radicand must be a nonsquare");
        QuadExt { a, c, disc }
    }

    /// Purely rational element (c = 0).
    pub fn from_rational(a: Ratio<I>, disc: Ratio<I>) -> Self {
        let zero = Ratio::zero();
        Self::new(a, zero, disc)
    }

    pub fn is_rational(&self) -> bool {
        self.c.is_zero()
    }

    /// Exact sign of `a + c·√disc`.
    ///
    /// Mixed-sign cases isolate the radical and square: for a > 0 > c the
    /// number is positive iff a² > c²·disc, and symmetrically.
    pub fn sign(&self) -> Ordering {
        let (sa, sc) = (rat_sign(&self.a), rat_sign(&self.c));
        match (sa, sc) {
            (_, Ordering::Equal) => sa,
            (Ordering::Equal, _) => sc,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) | (Ordering::Less, Ordering::Greater) => {
                let a2 = &self.a * &self.a;
                let c2d = &self.c * &self.c * &self.disc;
                // sign matches the dominant side of |a| vs |c|·√disc
                match a2.cmp(&c2d) {
                    Ordering::Greater => sa,
                    Ordering::Less => sc,
                    // impossible for a nonsquare radicand; kept total anyway
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_zero_exact(&self) -> bool {
        self.a.is_zero() && self.c.is_zero()
    }

    pub fn neg(&self) -> Self {
        QuadExt {
            a: -self.a.clone(),
            c: -self.c.clone(),
            disc: self.disc.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.disc, other.disc, "mismatched radicands");
        QuadExt {
            a: &self.a + &other.a,
            c: &self.c + &other.c,
            disc: self.disc.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product stays in the field: (a + c√d)(a' + c'√d) = aa' + cc'd + (ac' + a'c)√d.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.disc, other.disc, "mismatched radicands");
        QuadExt {
            a: &self.a * &other.a + &self.c * &other.c * &self.disc,
            c: &self.a * &other.c + &self.c * &other.a,
            disc: self.disc.clone(),
        }
    }

    pub fn scale(&self, k: &Ratio<I>) -> Self {
        QuadExt {
            a: &self.a * k,
            c: &self.c * k,
            disc: self.disc.clone(),
        }
    }

    pub fn add_rational(&self, k: &Ratio<I>) -> Self {
        QuadExt {
            a: &self.a + k,
            c: self.c.clone(),
            disc: self.disc.clone(),
        }
    }

    /// Exact three-way comparison (same radicand required).
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }

    pub fn cmp_rational(&self, k: &Ratio<I>) -> Ordering {
        QuadExt {
            a: &self.a - k,
            c: self.c.clone(),
            disc: self.disc.clone(),
        }
        .sign()
    }

    /// Float approximation for rendering only (never for decisions).
    pub fn to_f64(&self) -> f64 {
        let a = rat_to_f64(&self.a);
        let c = rat_to_f64(&self.c);
        let d = rat_to_f64(&self.disc);
        a + c * d.sqrt()
    }
}

impl<I: ExactInt> fmt::Display for QuadExt<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.c, self.disc);
        }
        if self.c.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.a, -self.c.clone(), self.disc)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.c, self.disc)
        }
    }
}

fn rat_sign<I: ExactInt>(r: &Ratio<I>) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

pub(crate) fn rat_to_f64<I: ExactInt>(r: &Ratio<I>) -> f64 {
    // BigInt may exceed f64 range only for absurd inputs; fall back via string
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if d != 0.0 && n.is_finite() && d.is_finite() => n / d,
        _ => f64::NAN,
    }
}

fn is_perfect_square<I: ExactInt>(r: &Ratio<I>) -> bool {
    match r.numer().to_u64() {
        Some(v) => {
            let s = (v as f64).sqrt().round() as u64;
            s.checked_mul(s) == Some(v)
        }
        // too large to check cheaply; trust the caller
        None => false,
    }
}
