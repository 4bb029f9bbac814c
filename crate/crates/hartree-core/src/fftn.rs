//! Multidimensional FFTs on cubic grids, built from planned 1-d transforms.
//!
//! Strategy: transform the contiguous (last) axis with a planned 1-d FFT,
//! then cyclically rotate the axes and repeat, `dim` times in total. On a
//! cubic grid the rotation is a permutation of a square/cubic array, so
//! after `dim` rounds the layout is back to the original and every axis has
//! been transformed once. Lines along the contiguous axis are independent
//! slices, so they parallelize with plain `chunks_mut`.
//!
//! Conventions: `forward` applies `û_m = Σ_j u_j e^{−i k_m · x_j}` up to the
//! usual DFT index form (no normalization); `inverse` includes the `1/n^dim`
//! factor so the round trip is the identity. The thread pool is shared and
//! sized once from `HARTREE_THREADS` (default: all cores).

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::grid::{Field, GridSpec};
use crate::scalar::Real;

/// Shared rayon pool, sized by the `HARTREE_THREADS` environment variable
/// at first use; later changes to the variable have no effect.
pub fn thread_pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var("HARTREE_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&t| t > 0);
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            builder = builder.num_threads(t);
        }
        builder.build().expect("thread pool construction")
    })
}

fn plan<R: Real>(n: usize, inverse: bool) -> Arc<dyn Fft<R>> {
    // Planner construction is cheap next to the transforms themselves, and a
    // fresh one avoids cross-type cache plumbing. Protect with a lock only to
    // keep the signature simple; callers hold plans across whole volumes.
    static LOCK: Mutex<()> = Mutex::new(());
    let _g = LOCK.lock().unwrap();
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

/// Transform every contiguous length-`n` line of `data` in place.
fn fft_lines<R: Real>(data: &mut [Complex<R>], n: usize, fft: &Arc<dyn Fft<R>>) {
    debug_assert_eq!(data.len() % n, 0);
    let scratch_len = fft.get_inplace_scratch_len();
    thread_pool().install(|| {
        data.par_chunks_mut(n).for_each_init(
            || vec![Complex::new(R::zero(), R::zero()); scratch_len],
            |scratch, line| fft.process_with_scratch(line, scratch),
        );
    });
}

/// Cyclic axis rotation `(i_0, …, i_{d−1}) ↦ (i_1, …, i_{d−1}, i_0)` on a
/// cubic array: the new last axis is the old first axis, so repeating the
/// rotation `dim` times restores the original layout.
fn rotate_axes<R: Real>(data: &[Complex<R>], out: &mut [Complex<R>], dim: usize, n: usize) {
    debug_assert_eq!(data.len(), out.len());
    match dim {
        1 => out.copy_from_slice(data),
        2 => {
            // out[i1][i0] = in[i0][i1]
            thread_pool().install(|| {
                out.par_chunks_mut(n).enumerate().for_each(|(i1, row)| {
                    for (i0, slot) in row.iter_mut().enumerate() {
                        *slot = data[i0 * n + i1];
                    }
                });
            });
        }
        3 => {
            // out[i1][i2][i0] = in[i0][i1][i2]
            thread_pool().install(|| {
                out.par_chunks_mut(n * n).enumerate().for_each(|(i1, plane)| {
                    for i2 in 0..n {
                        let row = &mut plane[i2 * n..(i2 + 1) * n];
                        for (i0, slot) in row.iter_mut().enumerate() {
                            *slot = data[(i0 * n + i1) * n + i2];
                        }
                    }
                });
            });
        }
        _ => unreachable!("grid dimension is validated at construction"),
    }
}

fn fft_all_axes<R: Real>(field: &mut Field<R>, inverse: bool) {
    let GridSpec { dim, n, .. } = field.spec;
    let fft = plan::<R>(n, inverse);
    if dim == 1 {
        fft_lines(&mut field.data, n, &fft);
    } else {
        let mut scratch = vec![Complex::new(R::zero(), R::zero()); field.data.len()];
        for _ in 0..dim {
            fft_lines(&mut field.data, n, &fft);
            rotate_axes(&field.data, &mut scratch, dim, n);
            std::mem::swap(&mut field.data, &mut scratch);
        }
    }
    if inverse {
        let scale = R::one() / R::of(field.spec.len() as f64);
        for z in &mut field.data {
            *z = Complex::new(z.re * scale, z.im * scale);
        }
    }
}

/// In-place forward DFT over all axes (unnormalized).
pub fn fft_forward<R: Real>(field: &mut Field<R>) {
    fft_all_axes(field, false);
}

/// In-place inverse DFT over all axes, normalized by `1/n^dim`.
pub fn fft_inverse<R: Real>(field: &mut Field<R>) {
    fft_all_axes(field, true);
}

/// Apply a radial Fourier multiplier `m(|k|²)` to a field in place:
/// forward transform, multiply mode-by-mode, inverse transform.
pub fn apply_radial_multiplier<R: Real>(field: &mut Field<R>, m: impl Fn(R) -> Complex<R> + Sync) {
    let k2 = field.spec.k_squared();
    fft_forward(field);
    thread_pool().install(|| {
        field
            .data
            .par_iter_mut()
            .zip(k2.par_iter())
            .for_each(|(z, &s)| *z = *z * m(s));
    });
    fft_inverse(field);
}

/// Spectral partial derivatives `∂_a u` for each axis, via the `i k_a`
/// multiplier (one forward transform shared across axes).
pub fn gradient_components<R: Real>(field: &Field<R>) -> Vec<Field<R>> {
    let mut hat = field.clone();
    fft_forward(&mut hat);
    let axis_k = field.spec.wavenumbers();
    (0..field.spec.dim)
        .map(|axis| {
            let mut comp = hat.clone();
            for (idx, z) in comp.data.iter_mut().enumerate() {
                let k = axis_k[field.spec.unravel(idx)[axis]];
                *z = *z * Complex::new(R::zero(), k);
            }
            fft_inverse(&mut comp);
            comp
        })
        .collect()
}

/// Squared homogeneous-Sobolev seminorm `‖∇u‖²_{L²} = Σ |k|² |û|² · (h^d/n^d)`
/// by Parseval, computed spectrally.
pub fn gradient_norm_sq<R: Real>(field: &Field<R>) -> R {
    let mut hat = field.clone();
    fft_forward(&mut hat);
    let k2 = field.spec.k_squared();
    let mut s = R::zero();
    for (z, &ks) in hat.data.iter().zip(&k2) {
        s = s + z.norm_sqr() * ks;
    }
    s * field.spec.volume_element() / R::of(field.spec.len() as f64)
}

/// Discrete Sobolev norm `(‖u‖²_{L²} + ‖∇u‖²_{L²})^{1/2}`.
pub fn h1_norm<R: Real>(field: &Field<R>) -> R {
    let l2 = field.norm_l2();
    (l2 * l2 + gradient_norm_sq(field)).sqrt()
}

/// Trigonometric upsampling: evaluate the band-limited interpolant of
/// `field` on the grid with `m`× as many points per axis over the same box.
/// Exact for fields representable on the coarse grid; Nyquist coefficients
/// are split symmetrically between `±n/2` so real fields stay real.
pub fn spectral_upsample<R: Real>(field: &Field<R>, m: usize) -> Field<R> {
    assert!(m.is_power_of_two(), "refinement factor must be a power of two");
    if m == 1 {
        return field.clone();
    }
    let spec = field.spec;
    let (dim, n) = (spec.dim, spec.n);
    let big = GridSpec::new(dim, n * m, spec.half_width).expect("refined grid");
    let mut hat = field.clone();
    fft_forward(&mut hat);

    // Per-axis slot table: coarse index i ↦ one or two (fine index, weight)
    // targets, preserving the signed frequency (index n/2 is the negative
    // Nyquist mode in the transform layout).
    let nb = n * m;
    let half = n / 2;
    let one = R::one();
    let half_w = R::of(0.5);
    let slots: Vec<Vec<(usize, R)>> = (0..n)
        .map(|i| {
            if i < half {
                vec![(i, one)]
            } else if i == half {
                vec![(half, half_w), (nb - half, half_w)]
            } else {
                vec![(nb - (n - i), one)]
            }
        })
        .collect();

    // Value-preserving rescale: coefficients grow by m^dim because the
    // inverse transform divides by the larger grid size.
    let scale = R::of((m as f64).powi(dim as i32));
    let mut out = Field::zeros(big);
    for (idx, &c) in hat.data.iter().enumerate() {
        let ix = spec.unravel(idx);
        let mut targets: Vec<(usize, R)> = vec![(0, scale)];
        for a in 0..dim {
            let mut next = Vec::with_capacity(targets.len() * 2);
            for &(base, w) in &targets {
                for &(t, wa) in &slots[ix[a]] {
                    next.push((base * nb + t, w * wa));
                }
            }
            targets = next;
        }
        for (t, w) in targets {
            out.data[t] = out.data[t] + c * w;
        }
    }
    fft_inverse(&mut out);
    out
}
