//! Point query: range membership, the closed-form gate, the reduced
//! exponent window, and (optionally) a fully checked witness.

use hartree_core::exponent::{critical_power, in_range, theorem_b_upper, theorem_region};
use hartree_core::feasibility::{
    find_witness, raw_constraints, reduced_window, ReciprocalVar, Window,
};
use hartree_core::{Int, ParamPoint, Rational};
use std::path::PathBuf;

use crate::manifest::RunManifest;

fn window_text(w: &Window<Int>) -> String {
    let end = |b: &Option<hartree_core::feasibility::Bound<Int>>, open: [char; 2], side| match b {
        Some(bd) => {
            let bracket = if bd.strict { open[side] } else { ['[', ']'][side] };
            if side == 0 {
                format!("{bracket}{}", bd.value)
            } else {
                format!("{}{bracket}", bd.value)
            }
        }
        None => if side == 0 { "(-inf".into() } else { "+inf)".into() },
    };
    format!("{}, {}", end(&w.lo, ['(', ')'], 0), end(&w.hi, ['(', ')'], 1))
}

pub fn run(
    n: u32,
    alpha: Rational,
    b: Rational,
    witness: bool,
    manifest: Option<PathBuf>,
) -> anyhow::Result<u8> {
    let params = serde_json::json!({
        "n": n, "alpha": alpha.to_string(), "b": b.to_string(), "witness": witness,
    });
    let pt = ParamPoint::new(n, alpha, b)
        .map_err(|e| anyhow::anyhow!("invalid parameter point: {e}"))?;
    println!("point: n = {}, alpha = {}, b = {}", pt.n, pt.alpha, pt.b);

    let inr = in_range(&pt);
    println!("in_range: {}", if inr { "yes" } else { "no" });
    if !inr {
        println!("range requires max(0, n-4) < alpha < n and 0 < b <= (alpha-n+4)/2");
        println!("OUT OF RANGE");
        finish(manifest, params)?;
        return Ok(0);
    }

    let p = critical_power(&pt);
    println!("critical power p = {p}");
    let gate = theorem_b_upper(&pt);
    let in_theorem = theorem_region(&pt);
    let tight = pt.b == gate;
    println!(
        "gate b <= (alpha-n+4)/n = {gate}: {}{}",
        if in_theorem { "satisfied" } else { "violated" },
        if tight { " (tight: boundary point)" } else { "" }
    );

    let window = reduced_window(&pt).map_err(|e| anyhow::anyhow!("{e}"))?;
    if window.is_empty() {
        println!("reduced n/r window: empty");
        println!("INFEASIBLE");
        if !in_theorem {
            // For in-range points the reduction makes the gate the only
            // possible obstruction.
            println!("violated: b <= p-2 (reduction gate)");
        }
        finish(manifest, params)?;
        return Ok(0);
    }
    println!("reduced n/r window: {}", window_text(&window));
    println!("FEASIBLE");

    if witness {
        let a = find_witness(&pt)
            .map_err(|e| anyhow::anyhow!("{e}"))?
            .expect("nonempty window always yields a witness");
        let x = a.get(ReciprocalVar::InvR) * Rational::from(Int::from(pt.n));
        println!("witness at window midpoint x = n/r = {x}:");
        for v in ReciprocalVar::ALL {
            let rec = a.get(v);
            match a.exponent(v) {
                Some(e) => println!("  {:<7} = {:<8} (exponent {})", v.name(), rec.to_string(), e),
                None => println!("  {:<7} = {:<8} (exponent inf)", v.name(), rec.to_string()),
            }
        }
        let raw = raw_constraints(&pt).map_err(|e| anyhow::anyhow!("{e}"))?;
        let rows = raw.evaluate(&a);
        let mut all = a.bands_ok();
        println!("raw constraint table ({} rows):", rows.len());
        for (label, ok) in &rows {
            if !ok {
                all = false;
            }
            println!("  {:<32} {}", label, if *ok { "PASS" } else { "FAIL" });
        }
        println!("exponent bands: {}", if a.bands_ok() { "PASS" } else { "FAIL" });
        println!("{}", if all { "all constraints PASS" } else { "WITNESS INVALID" });
    }

    finish(manifest, params)?;
    Ok(0)
}

fn finish(manifest: Option<PathBuf>, params: serde_json::Value) -> anyhow::Result<()> {
    if let Some(path) = manifest {
        RunManifest::new("feasible", params, None).write(&path)?;
    }
    Ok(())
}
