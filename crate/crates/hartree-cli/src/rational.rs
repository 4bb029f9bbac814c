//! Exact rational command-line arguments: `a/b` or an integer. Float-like
//! syntax is rejected outright so the exactness guarantee holds at the tool
//! boundary.

use hartree_core::{rational, Rational};

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational".into());
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(format!(
            "`{t}` looks like a float; exact commands take rationals such as 2 or 7/5"
        ));
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, b),
        None => (t, "1"),
    };
    let n: i64 = num
        .trim()
        .parse()
        .map_err(|_| format!("`{num}` is not an integer numerator"))?;
    let d: i64 = den
        .trim()
        .parse()
        .map_err(|_| format!("`{den}` is not an integer denominator"))?;
    if d == 0 {
        return Err("zero denominator".into());
    }
    Ok(rational(n, d))
}
