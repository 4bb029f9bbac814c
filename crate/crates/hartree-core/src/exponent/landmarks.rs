//! Named landmark points of the (α, b) parameter diagram.
//!
//! All coordinates are exact: rational, or rational plus a multiple of the
//! surd s = √(9n² − 8n + 16). Points G, L, M, N exist only in the n = 3
//! diagram, I only for n ≥ 4; B, D, F, J are dimension-generic.

use super::quad::QuadExt;
use super::ExponentError;
use crate::scalar::{rat, rint, ExactInt};
use num_rational::Ratio;
use num_traits::Zero;

/// A named diagram point with exact square-root-form coordinates.
#[derive(Debug, Clone)]
pub struct Landmark<I: ExactInt> {
    pub name: &'static str,
    pub alpha: QuadExt<I>,
    pub b: QuadExt<I>,
    /// What the point marks, geometrically.
    pub caption: &'static str,
}

impl<I: ExactInt> Landmark<I> {
    pub fn to_f64(&self) -> (f64, f64) {
        (self.alpha.to_f64(), self.b.to_f64())
    }
}

/// Landmarks of the dimension-n diagram, in alphabetical order.
pub fn landmarks<I: ExactInt>(n: u32) -> Result<Vec<Landmark<I>>, ExponentError> {
    if n < 3 {
        return Err(ExponentError::DimensionTooSmall(n));
    }
    let ni = n as i64;
    let disc: Ratio<I> = rint(9 * ni * ni - 8 * ni + 16);
    let rational = |q: Ratio<I>| QuadExt::from_rational(q, disc.clone());
    let surd = |a: Ratio<I>, c: Ratio<I>| QuadExt::new(a, c, disc.clone());

    let mut pts = vec![
        Landmark {
            name: "B",
            alpha: surd(rat(ni - 4, 4), rat(1, 4)),
            b: rational(Ratio::zero()),
            caption: "surd-bounded lower boundary meets b = 0",
        },
        Landmark {
            name: "D",
            alpha: rational(rint(ni)),
            b: surd(rat(3 * ni + 4, 8), rat(-1, 8)),
            caption: "surd-bounded lower boundary at alpha = n",
        },
        Landmark {
            name: "F",
            alpha: rational(super::kim_alpha_lower(n)),
            b: rational(if n <= 5 { rat(5 - ni, 3) } else { Ratio::zero() }),
            caption: "top corner of the surd-bounded region at its alpha threshold",
        },
        Landmark {
            name: "J",
            alpha: rational(rint(ni)),
            b: rational(rat(4, ni)),
            caption: "theorem boundary b = (alpha-n+4)/n at alpha = n",
        },
    ];
    if n == 3 {
        pts.push(Landmark {
            name: "G",
            alpha: rational(Ratio::zero()),
            b: rational(rat(1, 2)),
            caption: "admissible top boundary b = (alpha+1)/2 at alpha = 0",
        });
        pts.push(Landmark {
            name: "L",
            alpha: rational(rat(1, 3)),
            b: rational(rat(1, 6)),
            caption: "line b = alpha/2 at the alpha = 1/3 threshold",
        });
        pts.push(Landmark {
            name: "M",
            alpha: rational(rint(2)),
            b: rational(rint(1)),
            caption: "intersection of b = alpha/2 with b = (alpha+1)/3",
        });
        pts.push(Landmark {
            name: "N",
            alpha: rational(rint(3)),
            b: rational(rat(4, 3)),
            caption: "theorem boundary at alpha = 3",
        });
    } else {
        pts.push(Landmark {
            name: "I",
            alpha: rational(rat(2, 3)),
            b: rational(rat(1, 6)),
            caption: "fixed marker (2/3, 1/6); theorem-boundary corner in dimension 4",
        });
    }
    pts.sort_by_key(|l| l.name);
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::super::{kim_b_lower, range_b_upper, theorem_b_upper, ParamPoint};
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Signed;

    fn get<'a>(pts: &'a [Landmark<BigInt>], name: &str) -> &'a Landmark<BigInt> {
        pts.iter().find(|l| l.name == name).unwrap()
    }

    /// The surd-valued lower boundary as a QuadExt-valued function of a
    /// QuadExt-valued α, for exact on-line checks.
    fn kim_line_at(n: u32, alpha: &QuadExt<BigInt>) -> QuadExt<BigInt> {
        let ni = n as i64;
        alpha
            .scale(&rat(1, 2))
            .add_rational(&-rat::<BigInt>(ni - 4, 8))
            .add(&QuadExt::new(rat(0, 1), rat(-1, 8), alpha.disc.clone()))
    }

    #[test]
    fn selection_per_dimension() {
        let names =
            |n: u32| -> Vec<&'static str> { landmarks::<BigInt>(n).unwrap().iter().map(|l| l.name).collect() };
        assert_eq!(names(3), vec!["B", "D", "F", "G", "J", "L", "M", "N"]);
        assert_eq!(names(4), vec!["B", "D", "F", "I", "J"]);
        assert_eq!(names(7), vec!["B", "D", "F", "I", "J"]);
        assert!(landmarks::<BigInt>(2).is_err());
    }

    #[test]
    fn frozen_coordinates() {
        let l3 = landmarks::<BigInt>(3).unwrap();
        assert_eq!(get(&l3, "B").alpha.to_string(), "-1/4 + 1/4*sqrt(73)");
        assert_eq!(get(&l3, "D").b.to_string(), "13/8 - 1/8*sqrt(73)");
        assert_eq!(get(&l3, "F").alpha.to_string(), "1/3");
        assert_eq!(get(&l3, "F").b.to_string(), "2/3");
        assert_eq!(get(&l3, "N").b.to_string(), "4/3");

        let l4 = landmarks::<BigInt>(4).unwrap();
        assert_eq!(get(&l4, "J").alpha.to_string(), "4");
        assert_eq!(get(&l4, "J").b.to_string(), "1");
        assert_eq!(get(&l4, "I").b.to_string(), "1/6");

        let l5 = landmarks::<BigInt>(5).unwrap();
        assert_eq!(get(&l5, "F").alpha.to_string(), "1");
        assert_eq!(get(&l5, "F").b.to_string(), "0");
    }

    #[test]
    fn defining_memberships_hold_exactly() {
        for n in 3u32..=8 {
            let pts = landmarks::<BigInt>(n).unwrap();

            // B: on the surd boundary with b = 0
            let b = get(&pts, "B");
            assert!(b.b.is_zero_exact());
            assert!(kim_line_at(n, &b.alpha).is_zero_exact(), "n = {n}");

            // D: α = n, b on the surd boundary
            let d = get(&pts, "D");
            assert_eq!(d.alpha.to_string(), n.to_string());
            assert!(kim_line_at(n, &d.alpha).sub(&d.b).is_zero_exact());

            // J: on the theorem boundary at α = n
            let j = get(&pts, "J");
            let pt = ParamPoint::<BigInt>::new(n, rint(n as i64), rat(4, n as i64)).unwrap();
            assert_eq!(j.b.a, theorem_b_upper(&pt));

            // F: α at the surd-region threshold, b at the clamped range top
            let f = get(&pts, "F");
            assert_eq!(f.alpha.a, super::super::kim_alpha_lower::<BigInt>(n));
            let ptf = ParamPoint::<BigInt>::new(n, f.alpha.a.clone(), rat(1, 1)).unwrap();
            let top = range_b_upper(&ptf);
            let expected = if top.is_positive() { top } else { Ratio::zero() };
            assert_eq!(f.b.a, expected);

            // D also bounds b from below at α = n in the surd region:
            // the rational b = 4/n of J lies strictly above it for n ≤ 8
            let ptj = ParamPoint::<BigInt>::new(n, rint(n as i64 - 1), rat(4, n as i64)).unwrap();
            let _ = kim_b_lower(&ptj); // constructible for every n
        }
    }

    #[test]
    fn float_projection_sane() {
        let l3 = landmarks::<BigInt>(3).unwrap();
        let (ba, bb) = get(&l3, "B").to_f64();
        assert!((ba - 1.8860009363293826).abs() < 1e-12);
        assert_eq!(bb, 0.0);
    }
}
