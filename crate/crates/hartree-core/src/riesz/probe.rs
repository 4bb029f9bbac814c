//! Probe families with closed-form calculus, and desk-scale ratio checks
//! for the weighted convolution inequality `‖f(I_α∗g)‖_q ≤ C‖f‖_r‖g‖_s`
//! and the weighted embedding `‖|x|^b f‖_q ≤ C‖∇f‖_p`.
//!
//! The ratios are computed on the torus, where the zero-mode convention
//! makes `I_α∗g` agree with the free-space potential only for probes with
//! zero total mass (otherwise a neutralizing background shifts the
//! potential at the percent level). Scale-invariance sweeps therefore use
//! mean-zero convolution probes; refinement-stability checks are
//! convention-agnostic and work with any probe.

use num_complex::Complex;

use super::gamma::gamma;
use super::{radial_power_weights, riesz_convolve, RieszError, RieszSpec};
use crate::fftn::gradient_components;
use crate::grid::{Field, GridSpec};
use crate::scalar::Real;

/// Smooth rapidly-decaying probes with closed-form values, gradients,
/// Laplacians, and `Lᵖ` norms.
#[derive(Clone, Debug)]
pub enum TestFunction<R: Real> {
    /// `e^{−|x|²/2}`.
    Gaussian,
    /// `A e^{−|x−c|²/(2σ²)}`.
    DilatedGaussian { sigma: R, center: [R; 3], amplitude: R },
    /// `Π_a (1 − ((x_a−c_a)/w)²)₊^m` — compactly supported, `C^{m−1}`.
    BumpProduct { width: R, power: u32, center: [R; 3] },
}

impl<R: Real> TestFunction<R> {
    fn gaussian_params(&self) -> Option<(R, [R; 3], R)> {
        match self {
            TestFunction::Gaussian => Some((R::one(), [R::zero(); 3], R::one())),
            TestFunction::DilatedGaussian { sigma, center, amplitude } => {
                Some((*sigma, *center, *amplitude))
            }
            TestFunction::BumpProduct { .. } => None,
        }
    }

    pub fn eval(&self, x: &[R; 3], dim: usize) -> R {
        if let Some((sigma, c, amp)) = self.gaussian_params() {
            let mut r2 = R::zero();
            for a in 0..dim {
                let d = x[a] - c[a];
                r2 = r2 + d * d;
            }
            amp * (-r2 / (R::of(2.0) * sigma * sigma)).exp()
        } else if let TestFunction::BumpProduct { width, power, center } = self {
            let mut prod = R::one();
            for a in 0..dim {
                prod = prod * bump_axis(*width, *power, x[a] - center[a]).0;
            }
            prod
        } else {
            unreachable!()
        }
    }

    pub fn gradient(&self, x: &[R; 3], dim: usize) -> [R; 3] {
        let mut out = [R::zero(); 3];
        if let Some((sigma, c, _)) = self.gaussian_params() {
            let v = self.eval(x, dim);
            for a in 0..dim {
                out[a] = -v * (x[a] - c[a]) / (sigma * sigma);
            }
        } else if let TestFunction::BumpProduct { width, power, center } = self {
            let parts: Vec<(R, R, R)> =
                (0..dim).map(|a| bump_axis(*width, *power, x[a] - center[a])).collect();
            for a in 0..dim {
                let mut g = parts[a].1;
                for (j, p) in parts.iter().enumerate() {
                    if j != a {
                        g = g * p.0;
                    }
                }
                out[a] = g;
            }
        }
        out
    }

    pub fn laplacian(&self, x: &[R; 3], dim: usize) -> R {
        if let Some((sigma, c, _)) = self.gaussian_params() {
            let v = self.eval(x, dim);
            let s2 = sigma * sigma;
            let mut r2 = R::zero();
            for a in 0..dim {
                let d = x[a] - c[a];
                r2 = r2 + d * d;
            }
            v * (r2 / (s2 * s2) - R::of(dim as f64) / s2)
        } else if let TestFunction::BumpProduct { width, power, center } = self {
            let parts: Vec<(R, R, R)> =
                (0..dim).map(|a| bump_axis(*width, *power, x[a] - center[a])).collect();
            let mut total = R::zero();
            for a in 0..dim {
                let mut term = parts[a].2;
                for (j, p) in parts.iter().enumerate() {
                    if j != a {
                        term = term * p.0;
                    }
                }
                total = total + term;
            }
            total
        } else {
            unreachable!()
        }
    }

    /// Closed-form `Lᵖ` norm over `R^dim` for real `p > 0`.
    pub fn lp_norm(&self, p: R, dim: usize) -> R {
        let df = dim as f64;
        let pf = p.to_f64x();
        if let Some((sigma, _, amp)) = self.gaussian_params() {
            // ‖A e^{−|x|²/(2σ²)}‖_p = A (2πσ²/p)^{d/(2p)}.
            let s2 = (sigma * sigma).to_f64x();
            amp * R::of((2.0 * std::f64::consts::PI * s2 / pf).powf(df / (2.0 * pf)))
        } else if let TestFunction::BumpProduct { width, power, .. } = self {
            // Per axis: ∫ (1−u²)₊^{mp} w du = w √π Γ(mp+1)/Γ(mp+3/2).
            let mp = *power as f64 * pf;
            let axis = width.to_f64x() * std::f64::consts::PI.sqrt() * gamma(mp + 1.0)
                / gamma(mp + 1.5);
            R::of(axis.powf(df / pf))
        } else {
            unreachable!()
        }
    }

    pub fn sample(&self, spec: GridSpec<R>) -> Field<R> {
        Field::from_fn(spec, |x| Complex::new(self.eval(x, spec.dim), R::zero()))
    }
}

/// One axis factor of a product bump: value, first, and second derivative
/// of `(1 − (t/w)²)₊^m` at offset `t`. Needs `m ≥ 2` for the derivatives.
fn bump_axis<R: Real>(w: R, m: u32, t: R) -> (R, R, R) {
    assert!(m >= 2, "bump power must be ≥ 2 for C¹ derivatives");
    let u = t / w;
    let v = R::one() - u * u;
    if v <= R::zero() {
        return (R::zero(), R::zero(), R::zero());
    }
    let mf = R::of(m as f64);
    let val = v.powi(m as i32);
    let d1 = -(mf + mf) * u / w * v.powi(m as i32 - 1);
    let d2 = R::of(4.0) * mf * (mf - R::one()) * u * u / (w * w) * v.powi(m as i32 - 2)
        - (mf + mf) / (w * w) * v.powi(m as i32 - 1);
    (val, d1, d2)
}

/// Radial compactly-supported probe with zero mass *and* zero second
/// moment: `g(r) = v^m + b·v^{m+1} + c·v^{m+2}` with `v = (1 − r²/w²)₊` and
/// `(b, c)` fixed so that `∫ g = ∫ |x|² g = 0` in the ambient dimension.
/// Then `ĝ(ξ) = O(|ξ|⁴)`, so the free-space potential `I_α ∗ g` decays like
/// `|x|^{−(n−α+4)}` and both the periodization error and the zero-mode
/// offset of the torus multiplier are negligible — exactly what a
/// free-space quadrature oracle or a scale-invariance sweep needs.
#[derive(Clone, Copy, Debug)]
pub struct NeutralBump<R: Real> {
    pub width: R,
    pub power: u32,
}

impl<R: Real> NeutralBump<R> {
    /// Term coefficients `(b, c)`. With `∫_{R^d} v^k dx ∝ B(d/2, k+1)` and
    /// `∫_{R^d} r² v^k dx ∝ B(d/2+1, k+1)` (shared prefactors cancel row by
    /// row), the two moment conditions are a 2×2 linear system.
    fn coefficients(&self, dim: usize) -> (R, R) {
        let m = self.power as f64;
        let hd = dim as f64 / 2.0;
        let beta = |x: f64, y: f64| gamma(x) * gamma(y) / gamma(x + y);
        let i0 = |k: f64| beta(hd, k + 1.0);
        let i2 = |k: f64| beta(hd + 1.0, k + 1.0);
        let det = i0(m + 1.0) * i2(m + 2.0) - i0(m + 2.0) * i2(m + 1.0);
        let b = (-i0(m) * i2(m + 2.0) + i0(m + 2.0) * i2(m)) / det;
        let c = (-i0(m + 1.0) * i2(m) + i0(m) * i2(m + 1.0)) / det;
        (R::of(b), R::of(c))
    }

    pub fn eval(&self, r: R, dim: usize) -> R {
        let u = r / self.width;
        let v = R::one() - u * u;
        if v <= R::zero() {
            return R::zero();
        }
        let (b, c) = self.coefficients(dim);
        let m = self.power as i32;
        v.powi(m) + b * v.powi(m + 1) + c * v.powi(m + 2)
    }

    /// Radial Laplacian, using `Δ v^k = 4k(k−1)(r²/w⁴)v^{k−2} − (2kd/w²)v^{k−1}`.
    pub fn laplacian(&self, r: R, dim: usize) -> R {
        let w2 = self.width * self.width;
        let u2 = r * r / w2;
        let v = R::one() - u2;
        if v <= R::zero() {
            return R::zero();
        }
        let term = |k: i32| -> R {
            let kf = R::of(k as f64);
            let df = R::of(dim as f64);
            R::of(4.0) * kf * (kf - R::one()) * (r * r) / (w2 * w2) * v.powi(k - 2)
                - R::of(2.0) * kf * df / w2 * v.powi(k - 1)
        };
        let (b, c) = self.coefficients(dim);
        let m = self.power as i32;
        term(m) + b * term(m + 1) + c * term(m + 2)
    }

    pub fn sample(&self, spec: GridSpec<R>) -> Field<R> {
        assert!(self.power >= 2, "bump power must be ≥ 2");
        Field::from_fn(spec, |x| {
            let mut r2 = R::zero();
            for v in x.iter().take(spec.dim) {
                r2 = r2 + *v * *v;
            }
            Complex::new(self.eval(r2.sqrt(), spec.dim), R::zero())
        })
    }

    pub fn laplacian_field(&self, spec: GridSpec<R>) -> Field<R> {
        Field::from_fn(spec, |x| {
            let mut r2 = R::zero();
            for v in x.iter().take(spec.dim) {
                r2 = r2 + *v * *v;
            }
            Complex::new(self.laplacian(r2.sqrt(), spec.dim), R::zero())
        })
    }
}

fn require(ok: bool, what: &str, make: impl Fn(String) -> RieszError) -> Result<(), RieszError> {
    if ok {
        Ok(())
    } else {
        Err(make(what.to_string()))
    }
}

/// Quotient `‖f·(I_α∗g)‖_q / (‖f‖_r ‖g‖_s)` on a shared grid, under the
/// scale-critical relation `1/r + 1/s = 1/q + α/n` with `1 < q, r, s < ∞`.
pub fn hls_ratio<R: Real>(
    spec: &RieszSpec<R>,
    f: &Field<R>,
    g: &Field<R>,
    q: R,
    r: R,
    s: R,
) -> Result<R, RieszError> {
    assert_eq!(f.spec, g.spec, "probes must share a grid");
    let one = R::one();
    for (name, v) in [("q", q), ("r", r), ("s", s)] {
        require(
            v > one && v.is_finite(),
            &format!("{name} = {v} must lie in (1, ∞)"),
            RieszError::ExponentRange,
        )?;
    }
    let lhs = one / r + one / s;
    let rhs = one / q + spec.alpha / R::of(spec.n as f64);
    require(
        (lhs - rhs).abs() <= R::of(1e-9),
        &format!("1/r + 1/s = 1/q + α/n required, got {lhs} vs {rhs}"),
        RieszError::ExponentRelation,
    )?;
    let conv = riesz_convolve(spec, g)?;
    let prod = Field {
        spec: f.spec,
        data: f.data.iter().zip(&conv.data).map(|(a, b)| a * b).collect(),
    };
    let den = f.norm_lp(r) * g.norm_lp(s);
    require(den > R::zero(), "zero probe", RieszError::DegenerateInput)?;
    Ok(prod.norm_lp(q) / den)
}

/// Quotient `‖|x|^b f‖_q / ‖∇f‖_p` under the index relation
/// `−b−1 = n/q − n/p` with `1 < p ≤ q < ∞` and `−n/q < b ≤ 0`; the weight
/// is regularized at the origin cell. The gradient is spectral.
pub fn ckn_ratio<R: Real>(f: &Field<R>, p: R, q: R, b: R, n: u32) -> Result<R, RieszError> {
    if n as usize != f.spec.dim {
        return Err(RieszError::DimensionMismatch { riesz_n: n, field_dim: f.spec.dim });
    }
    let one = R::one();
    require(
        p > one && p <= q && q.is_finite(),
        &format!("need 1 < p ≤ q < ∞, got p = {p}, q = {q}"),
        RieszError::ExponentRange,
    )?;
    let nf = R::of(n as f64);
    require(
        b > -nf / q && b <= R::zero(),
        &format!("need −n/q < b ≤ 0, got b = {b}"),
        RieszError::ExponentRange,
    )?;
    let lhs = -b - one;
    let rhs = nf / q - nf / p;
    require(
        (lhs - rhs).abs() <= R::of(1e-9),
        &format!("−b−1 = n/q − n/p required, got {lhs} vs {rhs}"),
        RieszError::ExponentRelation,
    )?;
    require(f.norm_sup() > R::zero(), "zero probe", RieszError::DegenerateInput)?;

    let weights = radial_power_weights(f.spec, b, None);
    let vol = f.spec.volume_element();
    let mut num = R::zero();
    for (z, w) in f.data.iter().zip(&weights) {
        num = num + (z.norm() * *w).powf(q);
    }
    let num = (num * vol).powf(one / q);

    let grads = gradient_components(f);
    let mut den = R::zero();
    for idx in 0..f.data.len() {
        let mut g2 = R::zero();
        for comp in &grads {
            g2 = g2 + comp.data[idx].norm_sqr();
        }
        den = den + g2.powf(p / R::of(2.0));
    }
    let den = (den * vol).powf(one / p);
    require(den > R::zero(), "constant probe", RieszError::DegenerateInput)?;
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fftn::apply_radial_multiplier;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_lp_norms_match_grid() {
        let spec = GridSpec::new(2, 128, 8.0).unwrap();
        let tf = TestFunction::DilatedGaussian {
            sigma: 1.3,
            center: [0.5, -0.25, 0.0],
            amplitude: 2.0,
        };
        let f = tf.sample(spec);
        for p in [2.0f64, 3.5] {
            assert_relative_eq!(f.norm_lp(p), tf.lp_norm(p, 2), max_relative = 1e-8);
        }
        let plain = TestFunction::<f64>::Gaussian;
        assert_relative_eq!(
            plain.sample(spec).norm_lp(2.0),
            plain.lp_norm(2.0, 2),
            max_relative = 1e-8
        );
    }

    #[test]
    fn bump_product_lp_norms_match_grid() {
        let spec = GridSpec::new(2, 128, 8.0).unwrap();
        let tf = TestFunction::BumpProduct { width: 3.0, power: 8, center: [0.0; 3] };
        let f = tf.sample(spec);
        for p in [2.0f64, 4.0] {
            assert_relative_eq!(f.norm_lp(p), tf.lp_norm(p, 2), max_relative = 1e-6);
        }
    }

    #[test]
    fn closed_form_calculus_matches_spectral() {
        let spec = GridSpec::new(2, 128, 8.0).unwrap();
        for tf in [
            TestFunction::DilatedGaussian { sigma: 1.1, center: [0.25, 0.0, 0.0], amplitude: 1.0 },
            TestFunction::BumpProduct { width: 4.0, power: 8, center: [0.0; 3] },
        ] {
            let f = tf.sample(spec);
            // Laplacian: closed form vs −|k|² multiplier.
            let mut lap_spec = f.clone();
            apply_radial_multiplier(&mut lap_spec, |k2| Complex::new(-k2, 0.0));
            let lap_exact =
                Field::from_fn(spec, |x| Complex::new(tf.laplacian(x, 2), 0.0));
            assert!(
                lap_spec.dist_l2(&lap_exact) < 1e-6 * lap_exact.norm_l2(),
                "laplacian mismatch for {tf:?}"
            );
            // Gradient: closed form vs spectral components.
            let grads = gradient_components(&f);
            for a in 0..2 {
                let exact = Field::from_fn(spec, |x| Complex::new(tf.gradient(x, 2)[a], 0.0));
                assert!(
                    grads[a].dist_l2(&exact) < 1e-6 * (exact.norm_l2() + 1e-30),
                    "gradient axis {a} mismatch for {tf:?}"
                );
            }
        }
    }

    #[test]
    fn neutral_bump_annihilates_low_moments() {
        for dim in 1..=3usize {
            let spec = GridSpec::new(dim, 64, 8.0).unwrap();
            let bump = NeutralBump { width: 6.0, power: 8 };
            let g = bump.sample(spec);
            let vol = spec.volume_element();
            let mut mass = 0.0f64;
            let mut second = 0.0f64;
            for (idx, z) in g.data.iter().enumerate() {
                let r = spec.radius(idx);
                mass += z.re * vol;
                second += r * r * z.re * vol;
            }
            let scale = g.norm_l2();
            assert!(mass.abs() < 1e-8 * scale, "dim {dim}: residual mass {mass}");
            assert!(second.abs() < 1e-7 * scale, "dim {dim}: residual moment {second}");
        }
    }

    #[test]
    fn neutral_bump_laplacian_matches_spectral() {
        let spec = GridSpec::new(2, 128, 8.0).unwrap();
        let bump = NeutralBump { width: 6.0, power: 8 };
        let g = bump.sample(spec);
        let mut lap_spec = g.clone();
        apply_radial_multiplier(&mut lap_spec, |k2| Complex::new(-k2, 0.0));
        let lap_exact = bump.laplacian_field(spec);
        assert!(lap_spec.dist_l2(&lap_exact) < 1e-6 * lap_exact.norm_l2());
    }

    #[test]
    fn hls_rejects_bad_inputs() {
        let spec = RieszSpec::new(3, 2.0f64).unwrap();
        let gs = GridSpec::new(3, 16, 6.0).unwrap();
        let f = TestFunction::<f64>::Gaussian.sample(gs);
        // Exponent relation violated: 1/2 + 1/2 ≠ 1/2 + 2/3.
        assert!(matches!(
            hls_ratio(&spec, &f, &f, 2.0, 2.0, 2.0),
            Err(RieszError::ExponentRelation(_))
        ));
        // Endpoint exponent rejected.
        assert!(matches!(
            hls_ratio(&spec, &f, &f, 3.0, 1.0, 2.0),
            Err(RieszError::ExponentRange(_))
        ));
        // Zero probe rejected.
        let z = Field::zeros(gs);
        assert!(matches!(
            hls_ratio(&spec, &z, &z, 3.0, 2.0, 2.0),
            Err(RieszError::DegenerateInput(_))
        ));
    }

    #[test]
    fn hls_dilation_invariance() {
        // Simultaneous dilation f, g → f(λ·), g(λ·) leaves the ratio fixed
        // when 1/r + 1/s = 1/q + α/n; (q,r,s) = (3,2,2) with α = 2, n = 3.
        // g is a mean-zero Gaussian pair so the torus convolution matches
        // free-space scaling up to the zero-mode constant Φ̂(0)/(2L)³, which
        // shrinks with λ — hence a shrinking sweep; each dyadic step must
        // agree below 1%.
        let spec = RieszSpec::new(3, 2.0f64).unwrap();
        let gs = GridSpec::new(3, 128, 12.0).unwrap();
        let mass = |s: f64| (2.0 * std::f64::consts::PI * s * s).powf(1.5);
        let mut ratios = Vec::new();
        for lambda in [1.0f64, 2.0, 4.0] {
            let sf = 1.0 / lambda;
            let s1 = 1.0 / lambda;
            let s2 = 1.5 / lambda;
            let f = TestFunction::DilatedGaussian {
                sigma: sf,
                center: [0.0; 3],
                amplitude: 1.0,
            }
            .sample(gs);
            let g = Field::from_fn(gs, |x| {
                let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                let d1 = (-r2 / (2.0 * s1 * s1)).exp() / mass(s1);
                let d2 = (-r2 / (2.0 * s2 * s2)).exp() / mass(s2);
                Complex::new(d1 - d2, 0.0)
            });
            ratios.push(hls_ratio(&spec, &f, &g, 3.0, 2.0, 2.0).unwrap());
        }
        assert!(ratios.iter().all(|r| *r > 0.0), "ratios {ratios:?}");
        for pair in ratios.windows(2) {
            let rel = (pair[1] - pair[0]).abs() / pair[0];
            assert!(rel < 0.01, "dyadic step drift {rel}: ratios {ratios:?}");
        }
    }

    #[test]
    fn hls_gaussian_refinement_stable() {
        let spec = RieszSpec::new(3, 2.0f64).unwrap();
        let mut vals = Vec::new();
        for n in [64usize, 128] {
            let gs = GridSpec::new(3, n, 8.0).unwrap();
            let f = TestFunction::<f64>::Gaussian.sample(gs);
            vals.push(hls_ratio(&spec, &f, &f, 3.0, 2.0, 2.0).unwrap());
        }
        assert!(vals[0] > 0.0 && vals[0].is_finite());
        assert!((vals[0] - vals[1]).abs() / vals[1] < 0.01, "vals {vals:?}");
    }

    #[test]
    fn ckn_rejects_bad_inputs() {
        let gs = GridSpec::new(3, 16, 6.0).unwrap();
        let f = TestFunction::<f64>::Gaussian.sample(gs);
        // Positive b out of range.
        assert!(matches!(
            ckn_ratio(&f, 2.0, 3.0, 0.5, 3),
            Err(RieszError::ExponentRange(_))
        ));
        // p > q out of range.
        assert!(matches!(
            ckn_ratio(&f, 3.0, 2.0, 0.0, 3),
            Err(RieszError::ExponentRange(_))
        ));
        // Index relation violated: −b−1 = −1 but n/q − n/p = 3/3 − 3/2 = −1/2.
        assert!(matches!(
            ckn_ratio(&f, 2.0, 3.0, 0.0, 3),
            Err(RieszError::ExponentRelation(_))
        ));
        // Dimension mismatch.
        assert!(matches!(
            ckn_ratio(&f, 2.0, 6.0, 0.0, 2),
            Err(RieszError::DimensionMismatch { .. })
        ));
        // Zero probe.
        let z = Field::zeros(gs);
        assert!(matches!(
            ckn_ratio(&z, 2.0, 6.0, 0.0, 3),
            Err(RieszError::DegenerateInput(_))
        ));
    }

    #[test]
    fn ckn_sobolev_case_refinement_stable() {
        // b = 0 forces n/q = n/p − 1: the unweighted embedding with
        // (n, p, q) = (3, 2, 6).
        let mut vals = Vec::new();
        for n in [64usize, 128] {
            let gs = GridSpec::new(3, n, 8.0).unwrap();
            let f = TestFunction::<f64>::Gaussian.sample(gs);
            vals.push(ckn_ratio(&f, 2.0, 6.0, 0.0, 3).unwrap());
        }
        assert!(vals[0] > 0.05 && vals[0] < 5.0, "quotient {vals:?}");
        assert!((vals[0] - vals[1]).abs() / vals[1] < 0.01, "vals {vals:?}");
    }

    #[test]
    fn ckn_unweighted_dilation_invariance() {
        // b = 0 (Sobolev case): no weight singularity, so the full two-step
        // sweep stays within 1% total.
        let gs = GridSpec::new(3, 128, 12.0).unwrap();
        let mut ratios = Vec::new();
        for lambda in [0.5f64, 1.0, 2.0] {
            let f = TestFunction::DilatedGaussian {
                sigma: 1.0 / lambda,
                center: [0.0; 3],
                amplitude: 1.0,
            }
            .sample(gs);
            ratios.push(ckn_ratio(&f, 2.0, 6.0, 0.0, 3).unwrap());
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0f64, f64::max);
        assert!(hi > 0.0 && (hi - lo) / lo < 0.01, "ratios {ratios:?}");
    }

    #[test]
    fn ckn_weighted_dilation_invariance() {
        // (p, q, b) = (2, 3, −1/2) satisfies −b−1 = 3/3 − 3/2. The origin
        // regularization biases the weighted norm by ~(δ/σ)^{3/2}, so the
        // probes stay wide relative to h; each dyadic step must be < 1%.
        let gs = GridSpec::new(3, 128, 16.0).unwrap();
        let mut ratios = Vec::new();
        for sigma in [4.0f64, 2.0] {
            let f = TestFunction::DilatedGaussian {
                sigma,
                center: [0.0; 3],
                amplitude: 1.0,
            }
            .sample(gs);
            ratios.push(ckn_ratio(&f, 2.0, 3.0, -0.5, 3).unwrap());
        }
        let rel = (ratios[1] - ratios[0]).abs() / ratios[0];
        assert!(ratios[0] > 0.0 && rel < 0.01, "ratios {ratios:?}");
    }
}
