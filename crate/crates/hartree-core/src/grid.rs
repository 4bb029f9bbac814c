//! Periodic cubic grids and complex scalar fields on them.
//!
//! The domain is the torus `[−L, L)^d` sampled at `n` points per axis
//! (`n` a power of two, so the spectral transforms stay fast and the
//! wavenumber layout is the standard split). Indexing is row-major with
//! the last axis contiguous. Fields carry their grid so norms include the
//! volume element.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("grid dimension must be 1, 2, or 3, got {0}")]
    BadDimension(usize),
    #[error("points per axis must be a power of two ≥ 2, got {0}")]
    BadAxisLength(usize),
    #[error("half-width must be positive and finite")]
    BadHalfWidth,
}

/// Cubic periodic grid: `dim` axes, `n` points per axis, half-width `L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec<R: Real> {
    pub dim: usize,
    pub n: usize,
    pub half_width: R,
}

impl<R: Real> GridSpec<R> {
    pub fn new(dim: usize, n: usize, half_width: R) -> Result<Self, GridError> {
        if !(1..=3).contains(&dim) {
            return Err(GridError::BadDimension(dim));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(GridError::BadAxisLength(n));
        }
        if !(half_width > R::zero() && half_width.is_finite()) {
            return Err(GridError::BadHalfWidth);
        }
        Ok(GridSpec { dim, n, half_width })
    }

    /// Total number of grid points, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Mesh spacing `h = 2L/n`.
    pub fn h(&self) -> R {
        (self.half_width + self.half_width) / R::of(self.n as f64)
    }

    /// Volume element `h^dim`.
    pub fn volume_element(&self) -> R {
        let mut v = R::one();
        for _ in 0..self.dim {
            v = v * self.h();
        }
        v
    }

    /// Coordinate of a 1-d index along one axis: `−L + i·h`.
    pub fn axis_coord(&self, i: usize) -> R {
        -self.half_width + self.h() * R::of(i as f64)
    }

    /// Decompose a flat index into per-axis indices (unused axes are 0).
    pub fn unravel(&self, mut idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for axis in (0..self.dim).rev() {
            out[axis] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    /// Spatial point of a flat index (unused components are 0).
    pub fn point(&self, idx: usize) -> [R; 3] {
        let ix = self.unravel(idx);
        let mut out = [R::zero(); 3];
        for axis in 0..self.dim {
            out[axis] = self.axis_coord(ix[axis]);
        }
        out
    }

    /// Euclidean length of a point produced by [`GridSpec::point`].
    pub fn radius(&self, idx: usize) -> R {
        let x = self.point(idx);
        let mut s = R::zero();
        for v in x.iter().take(self.dim) {
            s = s + *v * *v;
        }
        s.sqrt()
    }

    /// Wavenumbers along one axis in standard FFT order:
    /// `k_m = (π/L)·m` for `m ∈ {0, …, n/2−1, −n/2, …, −1}`.
    pub fn wavenumbers(&self) -> Vec<R> {
        let scale = R::PI() / self.half_width;
        (0..self.n)
            .map(|m| {
                let m = if m < self.n / 2 {
                    m as f64
                } else {
                    m as f64 - self.n as f64
                };
                scale * R::of(m)
            })
            .collect()
    }

    /// `|k|²` for every flat index, in the same layout as field data.
    pub fn k_squared(&self) -> Vec<R> {
        let axis = self.wavenumbers();
        let mut out = vec![R::zero(); self.len()];
        for (idx, slot) in out.iter_mut().enumerate() {
            let ix = self.unravel(idx);
            let mut s = R::zero();
            for a in 0..self.dim {
                let k = axis[ix[a]];
                s = s + k * k;
            }
            *slot = s;
        }
        out
    }
}

/// Complex scalar field sampled on a [`GridSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct Field<R: Real> {
    pub spec: GridSpec<R>,
    pub data: Vec<Complex<R>>,
}

impl<R: Real> Field<R> {
    pub fn zeros(spec: GridSpec<R>) -> Self {
        Field { spec, data: vec![Complex::new(R::zero(), R::zero()); spec.len()] }
    }

    /// Sample a pointwise function of position; only the first `dim`
    /// components of the argument are meaningful.
    pub fn from_fn(spec: GridSpec<R>, f: impl Fn(&[R; 3]) -> Complex<R>) -> Self {
        let data = (0..spec.len()).map(|i| f(&spec.point(i))).collect();
        Field { spec, data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// `L²` norm including the volume element.
    pub fn norm_l2(&self) -> R {
        let mut s = R::zero();
        for z in &self.data {
            s = s + z.norm_sqr();
        }
        (s * self.spec.volume_element()).sqrt()
    }

    /// Pointwise supremum of `|u|`.
    pub fn norm_sup(&self) -> R {
        let mut m = R::zero();
        for z in &self.data {
            let a = z.norm_sqr();
            if a > m {
                m = a;
            }
        }
        m.sqrt()
    }

    /// `Lᵖ` norm for finite real `p > 0`, including the volume element.
    pub fn norm_lp(&self, p: R) -> R {
        let mut s = R::zero();
        let half_p = p / R::of(2.0);
        for z in &self.data {
            s = s + z.norm_sqr().powf(half_p);
        }
        (s * self.spec.volume_element()).powf(R::one() / p)
    }

    /// `L²` inner product `∫ ū·v` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Field<R>) -> Complex<R> {
        assert_eq!(self.spec, other.spec, "grids must match");
        let mut s = Complex::new(R::zero(), R::zero());
        for (a, b) in self.data.iter().zip(&other.data) {
            s = s + a.conj() * b;
        }
        s * Complex::new(self.spec.volume_element(), R::zero())
    }

    /// Mean value of the field over the torus (normalized integral).
    pub fn mean(&self) -> Complex<R> {
        let mut s = Complex::new(R::zero(), R::zero());
        for z in &self.data {
            s = s + z;
        }
        s / Complex::new(R::of(self.len() as f64), R::zero())
    }

    /// Pointwise difference `self − other` on the same grid.
    pub fn sub(&self, other: &Field<R>) -> Field<R> {
        assert_eq!(self.spec, other.spec, "grids must match");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Field { spec: self.spec, data }
    }

    /// `L²` distance to another field on the same grid.
    pub fn dist_l2(&self, other: &Field<R>) -> R {
        assert_eq!(self.spec, other.spec, "grids must match");
        let mut s = R::zero();
        for (a, b) in self.data.iter().zip(&other.data) {
            s = s + (a - b).norm_sqr();
        }
        (s * self.spec.volume_element()).sqrt()
    }
}
