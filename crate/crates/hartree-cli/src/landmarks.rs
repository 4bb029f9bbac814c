//! Named diagram points: exact coordinates, float approximations, and the
//! geometric feature each one marks.

use hartree_core::exponent::landmarks;
use hartree_core::Int;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::manifest::{atomic_write, manifest_path_for, RunManifest};

pub fn run(n: u32, out: Option<PathBuf>, manifest: Option<PathBuf>) -> anyhow::Result<u8> {
    let pts = landmarks::<Int>(n).map_err(|e| anyhow::anyhow!("{e}"))?;
    println!("landmarks of the dimension-{n} diagram:");
    for lm in &pts {
        let (a, b) = lm.to_f64();
        println!("  {:<2} alpha = {} ({a:.6}), b = {} ({b:.6})", lm.name, lm.alpha, lm.b);
        println!("     {}", lm.caption);
    }

    if let Some(path) = &out {
        let mut csv = String::from("# schema landmarks.v1\nname,alpha,b,alpha_f64,b_f64,caption\n");
        for lm in &pts {
            let (a, b) = lm.to_f64();
            let _ = writeln!(
                csv,
                "{},{},{},{a:.12},{b:.12},{}",
                lm.name,
                lm.alpha,
                lm.b,
                lm.caption.replace(',', ";")
            );
        }
        atomic_write(path, csv.as_bytes())?;
        let mut run_manifest = RunManifest::new(
            "landmarks",
            serde_json::json!({ "n": n, "out": path.display().to_string() }),
            None,
        );
        run_manifest.record(path);
        run_manifest.write(&manifest.unwrap_or_else(|| manifest_path_for(path)))?;
    }
    Ok(0)
}
