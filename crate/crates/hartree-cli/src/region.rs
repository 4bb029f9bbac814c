//! Region diagram: sample the (alpha, b) rectangle on an exact rational
//! grid, write the labels to CSV, and render an SVG with region shading,
//! boundary curves, and captioned landmark markers.

use hartree_core::exponent::{
    classify, kim_alpha_lower, kim_b_lower, landmarks, range_alpha_lower, RegionLabel,
};
use hartree_core::{rational, Int, ParamPoint, Rational};
use num_rational::Ratio;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::manifest::{atomic_write, manifest_path_for, RunManifest};

const LABELS: [RegionLabel; 6] = [
    RegionLabel::ThisPaper,
    RegionLabel::Kim,
    RegionLabel::GuzmanXu3d,
    RegionLabel::SaanouniPeng3d,
    RegionLabel::Open,
    RegionLabel::OutOfRange,
];

fn fill_color(label: RegionLabel) -> &'static str {
    match label {
        RegionLabel::ThisPaper => "#4878cf",
        RegionLabel::Kim => "#6acc65",
        RegionLabel::GuzmanXu3d => "#956cb4",
        RegionLabel::SaanouniPeng3d => "#d5bb67",
        RegionLabel::Open => "#ee854a",
        RegionLabel::OutOfRange => "#f2f2f2",
    }
}

struct Sample {
    alpha: Rational,
    b: Rational,
    label: RegionLabel,
}

/// Exact rational sample grid over [alpha_lo, n] x [0, 2] inclusive.
fn sample_grid(n: u32, resolution: u32) -> Vec<Sample> {
    let alpha_lo = range_alpha_lower::<Int>(n);
    let alpha_hi = Rational::from(Int::from(n));
    let width = &alpha_hi - &alpha_lo;
    let b_hi = rational(2, 1);
    let res = i64::from(resolution);
    let mut out = Vec::with_capacity(((resolution + 1) * (resolution + 1)) as usize);
    for i in 0..=res {
        let alpha = &alpha_lo + &width * rational(i, res);
        for j in 0..=res {
            let b = &b_hi * rational(j, res);
            let pt = ParamPoint::new(n, alpha.clone(), b.clone()).expect("n >= 3 checked");
            out.push(Sample { alpha: alpha.clone(), b, label: classify(&pt) });
        }
    }
    out
}

fn csv_bytes(n: u32, samples: &[Sample]) -> Vec<u8> {
    let mut s = String::new();
    s.push_str("# schema region.v1\n");
    let _ = writeln!(s, "# n = {n}");
    s.push_str("alpha,b,label\n");
    for row in samples {
        let _ = writeln!(s, "{},{},{}", row.alpha, row.b, row.label.tag());
    }
    s.into_bytes()
}

fn rat_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().expect("diagram coordinates are small rationals")
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    left: f64,
    top: f64,
    plot_w: f64,
    plot_h: f64,
}

impl Frame {
    fn x(&self, alpha: f64) -> f64 {
        self.left + (alpha - self.x0) / (self.x1 - self.x0) * self.plot_w
    }

    fn y(&self, b: f64) -> f64 {
        // SVG y grows downward.
        self.top + (self.y1 - b) / (self.y1 - self.y0) * self.plot_h
    }
}

fn polyline(svg: &mut String, frame: &Frame, pts: &[(f64, f64)], stroke: &str, dash: &str) {
    if pts.len() < 2 {
        return;
    }
    let mut d = String::new();
    for (i, (a, b)) in pts.iter().enumerate() {
        let _ = write!(d, "{}{:.2},{:.2} ", if i == 0 { "M" } else { "L" }, frame.x(*a), frame.y(*b));
    }
    let _ = writeln!(
        svg,
        r#"<path d="{}" fill="none" stroke="{stroke}" stroke-width="1.8"{}/>"#,
        d.trim_end(),
        if dash.is_empty() { String::new() } else { format!(r#" stroke-dasharray="{dash}""#) }
    );
}

fn svg_bytes(n: u32, resolution: u32, samples: &[Sample]) -> anyhow::Result<Vec<u8>> {
    let alpha_lo = rat_f64(&range_alpha_lower::<Int>(n));
    let alpha_hi = n as f64;
    let frame = Frame {
        x0: alpha_lo - 0.1,
        x1: alpha_hi + 0.1,
        y0: -0.1,
        y1: 2.15,
        left: 70.0,
        top: 46.0,
        plot_w: 760.0,
        plot_h: 520.0,
    };
    let (w, h) = (880.0, 640.0);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="26" font-size="17" text-anchor="middle">known (alpha, b) regions, dimension n = {n}</text>"#,
        frame.left + frame.plot_w / 2.0
    );

    // Shaded sample cells.
    let cell_w = frame.plot_w / (frame.x1 - frame.x0) * (alpha_hi - alpha_lo) / resolution as f64;
    let cell_h = frame.plot_h / (frame.y1 - frame.y0) * 2.0 / resolution as f64;
    for s in samples {
        if s.label == RegionLabel::OutOfRange {
            continue;
        }
        let cx = frame.x(rat_f64(&s.alpha));
        let cy = frame.y(rat_f64(&s.b));
        let _ = writeln!(
            svg,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}" fill-opacity="0.75"/>"#,
            cx - cell_w / 2.0,
            cy - cell_h / 2.0,
            cell_w,
            cell_h,
            fill_color(s.label)
        );
    }

    // Boundary curves sampled densely in alpha.
    let m = 256;
    let nf = n as f64;
    let mut ceiling = Vec::new(); // b = (alpha - n + 4)/2, the range top
    let mut gate = Vec::new(); // b = (alpha - n + 4)/n
    let mut surd = Vec::new(); // lower boundary of the surd-bounded region
    let kim_lo = rat_f64(&kim_alpha_lower::<Int>(n));
    for k in 0..=m {
        let a = alpha_lo + (alpha_hi - alpha_lo) * k as f64 / m as f64;
        let c = (a - nf + 4.0) / 2.0;
        if (0.0..=2.2).contains(&c) {
            ceiling.push((a, c));
        }
        let g = (a - nf + 4.0) / nf;
        if (0.0..=2.2).contains(&g) {
            gate.push((a, g));
        }
        if a >= kim_lo {
            // Exact surd evaluated at the nearest dyadic rational.
            let ar = Ratio::new(Int::from((a * 4096.0).round() as i64), Int::from(4096));
            let pt = ParamPoint::new(n, ar, rational(1, 2)).expect("n >= 3 checked");
            let b = kim_b_lower(&pt).to_f64();
            if (0.0..=2.2).contains(&b) {
                surd.push((a, b));
            }
        }
    }
    polyline(&mut svg, &frame, &ceiling, "#333333", "");
    polyline(&mut svg, &frame, &gate, "#b22222", "");
    polyline(&mut svg, &frame, &surd, "#1a6b1a", "6,3");
    if kim_lo > alpha_lo {
        polyline(&mut svg, &frame, &[(kim_lo, 0.0), (kim_lo, 2.0)], "#1a6b1a", "2,3");
    }

    // Axes with ticks.
    let (ax0, ax1) = (frame.x(frame.x0), frame.x(frame.x1));
    let (ay0, ay1) = (frame.y(frame.y0), frame.y(frame.y1));
    let _ = writeln!(
        svg,
        r#"<rect x="{ax0:.1}" y="{ay1:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        ax1 - ax0,
        ay0 - ay1
    );
    for k in 0..=8 {
        let a = frame.x0 + (frame.x1 - frame.x0) * k as f64 / 8.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="black"/><text x="{0:.1}" y="{3:.1}" font-size="11" text-anchor="middle">{4:.2}</text>"#,
            frame.x(a), ay0, ay0 + 5.0, ay0 + 18.0, a
        );
        let b = frame.y0 + (frame.y1 - frame.y0) * k as f64 / 8.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.1}" y1="{1:.1}" x2="{2:.1}" y2="{1:.1}" stroke="black"/><text x="{3:.1}" y="{4:.1}" font-size="11" text-anchor="end">{5:.2}</text>"#,
            ax0, frame.y(b), ax0 - 5.0, ax0 - 8.0, frame.y(b) + 4.0, b
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">alpha</text>"#,
        (ax0 + ax1) / 2.0,
        ay0 + 40.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.1}" font-size="14" text-anchor="middle" transform="rotate(-90 18 {:.1})">b</text>"#,
        (ay0 + ay1) / 2.0,
        (ay0 + ay1) / 2.0
    );

    // Legend for the labels actually present, plus the boundary lines.
    let mut ly = frame.top + 8.0;
    let lx = ax1 - 168.0;
    for label in LABELS {
        if label == RegionLabel::OutOfRange || !samples.iter().any(|s| s.label == label) {
            continue;
        }
        let _ = writeln!(
            svg,
            r#"<rect x="{lx:.1}" y="{:.1}" width="12" height="12" fill="{}" fill-opacity="0.75"/><text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#,
            ly, fill_color(label), lx + 17.0, ly + 10.0, label.tag()
        );
        ly += 18.0;
    }
    for (color, dash, text) in [
        ("#333333", "", "b = (alpha-n+4)/2"),
        ("#b22222", "", "b = (alpha-n+4)/n"),
        ("#1a6b1a", "6,3", "surd lower boundary"),
    ] {
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{0:.1}" x2="{1:.1}" y2="{0:.1}" stroke="{color}"{2}/><text x="{3:.1}" y="{4:.1}" font-size="12">{text}</text>"#,
            ly + 6.0,
            lx + 12.0,
            if dash.is_empty() { String::new() } else { format!(r#" stroke-dasharray="{dash}""#) },
            lx + 17.0,
            ly + 10.0
        );
        ly += 18.0;
    }

    // Captioned landmark markers.
    for lm in landmarks::<Int>(n).map_err(|e| anyhow::anyhow!("{e}"))? {
        let (a, b) = lm.to_f64();
        if !(frame.x0..=frame.x1).contains(&a) || !(frame.y0..=frame.y1).contains(&b) {
            continue;
        }
        let _ = writeln!(
            svg,
            r#"<circle id="landmark-{0}" cx="{1:.2}" cy="{2:.2}" r="4" fill="black"/><text x="{3:.2}" y="{4:.2}" font-size="13" font-weight="bold">{0}</text><title>{0} ({5:.4}, {6:.4}): {7}</title>"#,
            lm.name,
            frame.x(a),
            frame.y(b),
            frame.x(a) + 6.0,
            frame.y(b) - 6.0,
            a,
            b,
            lm.caption
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg.into_bytes())
}

pub fn run(
    n: u32,
    resolution: u32,
    out_svg: PathBuf,
    out_csv: PathBuf,
    manifest: Option<PathBuf>,
) -> anyhow::Result<u8> {
    if n < 3 {
        anyhow::bail!("diagram needs n >= 3, got {n}");
    }
    if resolution < 16 {
        anyhow::bail!("resolution must be >= 16 samples per axis, got {resolution}");
    }
    let mut run_manifest = RunManifest::new(
        "region",
        serde_json::json!({
            "n": n,
            "resolution": resolution,
            "out_svg": out_svg.display().to_string(),
            "out_csv": out_csv.display().to_string(),
        }),
        None,
    );
    let samples = sample_grid(n, resolution);
    atomic_write(&out_csv, &csv_bytes(n, &samples))?;
    run_manifest.record(&out_csv);
    atomic_write(&out_svg, &svg_bytes(n, resolution, &samples)?)?;
    run_manifest.record(&out_svg);
    let manifest_path = manifest.unwrap_or_else(|| manifest_path_for(&out_svg));
    run_manifest.write(&manifest_path)?;
    println!(
        "region diagram n = {n}: {} samples -> {}, {}",
        samples.len(),
        out_csv.display(),
        out_svg.display()
    );
    Ok(0)
}
