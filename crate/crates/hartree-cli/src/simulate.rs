//! Evolution runs driven by a JSON config: Gaussian data on a periodic
//! grid, Strang-split stepping, CSV outputs for conserved quantities,
//! snapshots, and the fixed-point / dispersion / covariance diagnostics.

use hartree_core::grid::Field;
use hartree_core::sim::{
    conserved_quantities, evolve, high_band_fraction, picard_iterate, scaling_covariance_check,
    scattering_proxy, wraparound_horizon, EvolutionConfig, ModelParams, SimError,
};
use hartree_core::{Field64, GridSpec64, ParamPoint};
use num_complex::Complex;
use serde::Deserialize;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::manifest::{atomic_write, RunManifest};
use crate::rational::parse_rational;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimConfig {
    grid: GridSection,
    params: ParamsSection,
    initial: InitialSection,
    evolution: EvolutionSection,
    #[serde(default)]
    diagnostics: Vec<DiagnosticSection>,
    output_dir: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    dim: usize,
    n: usize,
    half_width: f64,
}

/// Exact-critical parameters take rationals written as strings ("2", "7/5");
/// the power p is then pinned by the energy-critical relation. Toy
/// parameters (dimensions 1 and 2) take floats and an explicit p.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ParamsSection {
    Critical { alpha: String, b: String, epsilon: i8 },
    Toy { dim: usize, alpha: f64, b: f64, p: f64, epsilon: i8 },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum InitialSection {
    /// `A e^{−|x|²/(2σ²)} e^{i·chirp·|x|²}`.
    Gaussian {
        amplitude: f64,
        sigma: f64,
        #[serde(default)]
        chirp: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvolutionSection {
    dt: f64,
    t_end: f64,
    /// Conserved-quantity sample cadence in steps (0 = endpoints only).
    #[serde(default)]
    energy_every: usize,
    /// State snapshot cadence in steps (0 = none).
    #[serde(default)]
    snapshot_every: usize,
    /// Weight regularization radius in physical units (default h/2).
    #[serde(default)]
    weight_regularization: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum DiagnosticSection {
    /// Duhamel fixed-point iteration up to `t_end`.
    Picard { t_end: f64, k_max: usize, nodes: usize },
    /// Inverse-free-flow pullback differences at the given times.
    Scattering { sample_times: Vec<f64> },
    /// Discrete covariance defect under `u ↦ δ^κ u(δx, δ²t)`.
    Scaling {
        delta: f64,
        refine: usize,
        #[serde(default)]
        linear: bool,
    },
}

impl DiagnosticSection {
    fn tag(&self) -> &'static str {
        match self {
            DiagnosticSection::Picard { .. } => "picard",
            DiagnosticSection::Scattering { .. } => "scattering",
            DiagnosticSection::Scaling { .. } => "scaling",
        }
    }
}

fn build_params(section: &ParamsSection, grid_dim: usize) -> anyhow::Result<ModelParams<f64>> {
    match section {
        ParamsSection::Critical { alpha, b, epsilon } => {
            if grid_dim != 3 {
                anyhow::bail!("critical parameters need a dimension-3 grid, got {grid_dim}");
            }
            let alpha = parse_rational(alpha).map_err(|e| anyhow::anyhow!("alpha: {e}"))?;
            let b = parse_rational(b).map_err(|e| anyhow::anyhow!("b: {e}"))?;
            let pt = ParamPoint::new(3, alpha, b).map_err(|e| anyhow::anyhow!("{e}"))?;
            Ok(ModelParams::critical(&pt, *epsilon)?)
        }
        ParamsSection::Toy { dim, alpha, b, p, epsilon } => {
            if grid_dim != *dim {
                anyhow::bail!("toy parameters in dimension {dim} need a matching grid, got {grid_dim}");
            }
            Ok(ModelParams::toy(*dim, *alpha, *b, *p, *epsilon)?)
        }
    }
}

fn build_initial(section: &InitialSection, spec: GridSpec64) -> anyhow::Result<Field64> {
    match section {
        InitialSection::Gaussian { amplitude, sigma, chirp } => {
            let (a, s, c) = (*amplitude, *sigma, *chirp);
            if !(a > 0.0) || !a.is_finite() {
                anyhow::bail!("amplitude must be positive and finite, got {a}");
            }
            if !(s > 0.0) || !s.is_finite() {
                anyhow::bail!("sigma must be positive and finite, got {s}");
            }
            if !c.is_finite() {
                anyhow::bail!("chirp must be finite, got {c}");
            }
            Ok(Field::from_fn(spec, |x| {
                let mut r2 = 0.0;
                for v in x.iter().take(spec.dim) {
                    r2 += v * v;
                }
                Complex::from_polar(a * (-r2 / (2.0 * s * s)).exp(), c * r2)
            }))
        }
    }
}

fn csv_float(v: f64) -> String {
    format!("{v:.17e}")
}

struct Outputs {
    dir: PathBuf,
    manifest: RunManifest,
}

impl Outputs {
    fn write(&mut self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        atomic_write(&path, bytes)?;
        self.manifest.record(&path);
        Ok(())
    }
}

fn write_conservation(
    out: &mut Outputs,
    samples: &[(f64, hartree_core::sim::Conserved<f64>)],
) -> anyhow::Result<(f64, f64)> {
    let (m0, e0) = (samples[0].1.mass, samples[0].1.energy);
    let mut csv = String::from(
        "# schema conservation.v1\ntime,mass,mass_drift_rel,kinetic,potential,energy,energy_drift_rel\n",
    );
    let (mut mass_drift, mut energy_drift) = (0.0f64, 0.0f64);
    let e_scale = e0.abs().max(1e-300);
    for (t, c) in samples {
        let md = (c.mass / m0 - 1.0).abs();
        let ed = (c.energy - e0).abs() / e_scale;
        mass_drift = mass_drift.max(md);
        energy_drift = energy_drift.max(ed);
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            csv_float(*t),
            csv_float(c.mass),
            csv_float(md),
            csv_float(c.kinetic),
            csv_float(c.potential),
            csv_float(c.energy),
            csv_float(ed),
        );
    }
    out.write("conservation.csv", csv.as_bytes())?;
    Ok((mass_drift, energy_drift))
}

fn write_snapshot(out: &mut Outputs, index: usize, t: f64, u: &Field64) -> anyhow::Result<()> {
    let spec = u.spec;
    let mut csv = String::from("# schema snapshot.v1\n");
    let _ = writeln!(csv, "# t = {}", csv_float(t));
    let _ = writeln!(csv, "# dim = {} n = {} half_width = {}", spec.dim, spec.n, spec.half_width);
    csv.push_str(&"x,y,z"[..2 * spec.dim - 1]);
    csv.push_str(",re,im\n");
    for (idx, z) in u.data.iter().enumerate() {
        let x = spec.point(idx);
        for v in x.iter().take(spec.dim) {
            let _ = write!(csv, "{},", csv_float(*v));
        }
        let _ = writeln!(csv, "{},{}", csv_float(z.re), csv_float(z.im));
    }
    out.write(&format!("snapshot_{index:04}.csv"), csv.as_bytes())
}

fn run_diagnostic(
    out: &mut Outputs,
    section: &DiagnosticSection,
    params: &ModelParams<f64>,
    config: &EvolutionConfig<f64>,
    u0: &Field64,
) -> Result<(), SimError> {
    match section {
        DiagnosticSection::Picard { t_end, k_max, nodes } => {
            let report =
                picard_iterate(params, u0, *t_end, *k_max, *nodes, config.weight_regularization)?;
            let mut csv = String::from(
                "# schema picard.v1\niteration,sup_h1_diff,h1_ratio,mixed_diff,mixed_ratio\n",
            );
            for k in 0..report.sup_h1_diffs.len() {
                let ratio = |v: &Vec<f64>| {
                    if k == 0 { String::new() } else { csv_float(v[k - 1]) }
                };
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    k + 1,
                    csv_float(report.sup_h1_diffs[k]),
                    ratio(&report.h1_ratios),
                    csv_float(report.mixed_diffs[k]),
                    ratio(&report.mixed_ratios),
                );
            }
            out.write("picard.csv", csv.as_bytes()).map_err(io_sim)?;
            match (report.diverged, report.h1_ratios.last()) {
                (true, _) => println!("  picard: DIVERGED (iterates outside the contraction regime)"),
                (false, Some(r)) => println!("  picard: contracting, last sup-H1 ratio {r:.4}"),
                (false, None) => println!("  picard: single difference, no ratio"),
            }
        }
        DiagnosticSection::Scattering { sample_times } => {
            let report = scattering_proxy(params, config, u0, sample_times)?;
            let mut csv = String::from("# schema scattering.v1\n");
            let _ = writeln!(csv, "# wraparound_horizon = {}", csv_float(report.horizon));
            csv.push_str("t_lo,t_hi,h1_diff,ratio\n");
            for k in 0..report.h1_diffs.len() {
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    csv_float(report.times[k]),
                    csv_float(report.times[k + 1]),
                    csv_float(report.h1_diffs[k]),
                    if k == 0 { String::new() } else { csv_float(report.ratios[k - 1]) },
                );
            }
            out.write("scattering.csv", csv.as_bytes()).map_err(io_sim)?;
            let decaying = report.ratios.iter().all(|r| *r < 1.0);
            println!(
                "  scattering: pullback differences {}{}",
                if decaying { "decaying" } else { "NOT monotonically decaying" },
                if report.horizon_exceeded {
                    format!(" (samples beyond the wraparound horizon {:.4})", report.horizon)
                } else {
                    String::new()
                }
            );
        }
        DiagnosticSection::Scaling { delta, refine, linear } => {
            let check = scaling_covariance_check(params, config, u0, *delta, *refine, *linear)?;
            let mut csv = String::from(
                "# schema scaling.v1\ndelta,refine,linear,amplitude_exponent,rel_h1\n",
            );
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                delta,
                refine,
                linear,
                csv_float(check.amplitude_exponent),
                csv_float(check.rel_h1),
            );
            out.write("scaling.csv", csv.as_bytes()).map_err(io_sim)?;
            println!(
                "  scaling: delta = {delta}, kappa = {:.4}, relative H1 defect {:.3e}",
                check.amplitude_exponent, check.rel_h1
            );
        }
    }
    Ok(())
}

fn io_sim(e: anyhow::Error) -> SimError {
    SimError::BadParameter(format!("output write failed: {e}"))
}

pub fn run(config_path: PathBuf, dry_run: bool) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(&config_path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", config_path.display()))?;
    let config: SimConfig = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("bad config {}: {e}", config_path.display()))?;

    let spec = GridSpec64::new(config.grid.dim, config.grid.n, config.grid.half_width)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let params = build_params(&config.params, spec.dim)?;
    let evo = {
        let mut c = EvolutionConfig::new(config.evolution.dt, config.evolution.t_end);
        if let Some(delta) = config.evolution.weight_regularization {
            if !(delta > 0.0) || !delta.is_finite() {
                anyhow::bail!("weight_regularization must be positive and finite, got {delta}");
            }
            c = c.with_regularization(delta);
        }
        c
    };
    let steps = evo.step_count().map_err(|e| anyhow::anyhow!("{e}"))?;
    let u0 = build_initial(&config.initial, spec)?;

    let horizon = wraparound_horizon(spec);
    println!(
        "grid {}^{} on [-{}, {}), {} steps of dt = {} to t = {}",
        spec.n, spec.dim, spec.half_width, spec.half_width, steps, evo.dt, evo.t_end
    );
    if evo.t_end > horizon {
        eprintln!(
            "warning: t_end = {} exceeds the free-dispersion wraparound horizon {horizon:.4}; \
             dispersive diagnostics are untrusted past it",
            evo.t_end
        );
    }

    let mut out = Outputs {
        dir: config.output_dir.clone(),
        manifest: RunManifest::new(
            "simulate",
            serde_json::json!({
                "config_path": config_path.display().to_string(),
                "config": serde_json::from_str::<serde_json::Value>(&text)?,
                "dry_run": dry_run,
            }),
            None,
        ),
    };

    if dry_run {
        println!("dry run: configuration valid; diagnostics: {}", config.diagnostics.len());
        out.manifest.write(&out.dir.join("manifest.json"))?;
        return Ok(0);
    }

    let band = high_band_fraction(&u0);
    if band > 1e-6 {
        anyhow::bail!(
            "initial datum is not resolved on this grid (high-band energy fraction {band:.2e}); \
             increase n or widen the datum"
        );
    }

    // The evolution and every diagnostic report numerical failure as
    // NumericalAbort; that maps to exit code 3 rather than a usage error.
    match run_inner(&mut out, &config, &params, &evo, &u0) {
        Ok(()) => {
            out.manifest.write(&out.dir.join("manifest.json"))?;
            Ok(0)
        }
        Err(SimError::NumericalAbort { step, time, what }) => {
            eprintln!("numerical abort at step {step}, t = {time:.6}: {what}");
            out.manifest.write(&out.dir.join("manifest.json"))?;
            Ok(3)
        }
        Err(e) => Err(e.into()),
    }
}

fn run_inner(
    out: &mut Outputs,
    config: &SimConfig,
    params: &ModelParams<f64>,
    evo: &EvolutionConfig<f64>,
    u0: &Field64,
) -> Result<(), SimError> {
    let evolution = evolve(
        params,
        evo,
        u0,
        config.evolution.energy_every,
        config.evolution.snapshot_every,
    )?;
    let (mass_drift, energy_drift) = write_conservation(out, &evolution.conserved).map_err(io_sim)?;
    println!(
        "evolved {} steps; relative drift: mass {mass_drift:.3e}, energy {energy_drift:.3e}",
        evolution.steps
    );
    for (k, (t, u)) in evolution.snapshots.iter().enumerate() {
        write_snapshot(out, k, *t, u).map_err(io_sim)?;
    }
    if !evolution.snapshots.is_empty() {
        println!("wrote {} snapshots", evolution.snapshots.len());
    }
    let final_c = conserved_quantities(params, &evolution.state, evo.weight_regularization)?;
    println!(
        "final state: mass {:.6e}, energy {:.6e}",
        final_c.mass, final_c.energy
    );

    for section in &config.diagnostics {
        println!("diagnostic {}:", section.tag());
        run_diagnostic(out, section, params, evo, u0)?;
    }
    Ok(())
}
