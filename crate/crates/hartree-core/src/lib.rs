//! Analysis and simulation toolkit for the energy-critical inhomogeneous
//! Hartree equation
//!
//! ```text
//! i u_t + Δu = ε (I_α * |x|^{-b} |u|^p) |x|^{-b} |u|^{p-2} u,   ε = ±1,
//! ```
//!
//! at the energy-critical power `p = 2 + (α − n + 4 − 2b)/(n − 2)`.
//!
//! The crate has two arithmetic worlds, both generic over their scalar type:
//!
//! * **Exact side** ([`exponent`], [`feasibility`]): rational arithmetic over
//!   `Ratio<I>` for any integer backing `I` ([`scalar::ExactInt`]), plus exact
//!   comparisons in the quadratic extension `ℚ(√(9n² − 8n + 16))`. Region
//!   membership, the critical power, the full mixed-norm exponent constraint
//!   system, and its closed-form reduction are all decided with zero rounding.
//! * **Float side** ([`riesz`], [`grid`], [`fftn`], [`sim`]): spectral
//!   numerics over any IEEE float ([`scalar::Real`], `f32`/`f64`): Riesz
//!   potentials by Fourier multiplier, weighted-norm inequality probes, and a
//!   Strang split-step evolution with Duhamel fixed-point iteration.
//!
//! Concrete aliases for the common instantiations live at the crate root.

pub mod scalar;

pub mod exponent;
pub mod feasibility;

pub mod fftn;
pub mod grid;
pub mod riesz;
pub mod sim;

/// Exact rational scalar used by default throughout the exact side.
///
/// Arbitrary-precision backing: every decision path (region classification,
/// constraint feasibility, witness verification) is overflow-free.
pub type Rational = num_rational::BigRational;

/// Integer backing of [`Rational`].
pub type Int = num_bigint::BigInt;

/// Default float scalar for the numerical side.
pub type Real = f64;

/// Parameter point at the default exact scalar.
pub type ParamPoint = exponent::ParamPoint<Int>;

/// Quadratic-extension number at the default exact scalar.
pub type QuadExt = exponent::QuadExt<Int>;

/// Constraint row at the default exact scalar.
pub type Constraint = feasibility::Constraint<Int>;

/// Labeled constraint system at the default exact scalar.
pub type ConstraintSet = feasibility::ConstraintSet<Int>;

/// Reciprocal-exponent assignment at the default exact scalar.
pub type ExponentAssignment = feasibility::ExponentAssignment<Int>;

/// Grid specification at the default float scalar.
pub type GridSpec64 = grid::GridSpec<f64>;

/// Complex field at the default float scalar.
pub type Field64 = grid::Field<f64>;

/// Complex field at single precision (halves memory for large scans).
pub type Field32 = grid::Field<f32>;

/// Convenience: build a `Rational` from a numerator/denominator pair.
pub fn rational(num: i64, den: i64) -> Rational {
    scalar::rat(num, den)
}
