//! Canonical output formatting: fixed 6-significant-digit floats and
//! deterministic record ordering, so reruns with the same seed produce
//! byte-identical artifacts.

use percolab::percolation::{PcBracket, PercEstimate};
use percolab::saw::{MuEstimate, SawTable};
use percolab::trees::{BranchingBracket, LevelProfile};
use serde_json::{json, Value};

/// Round to 6 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mag = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(5 - mag);
    (x * factor).round() / factor
}

/// Canonical text form of a float: 6 significant digits, shortest decimal.
pub fn fmt_sig(x: f64) -> String {
    format!("{}", round_sig(x))
}

/// Recursively round every number in a JSON value to the canonical digits.
pub fn canonicalize(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(round_sig(f)) {
                        *value = Value::Number(rounded);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalize),
        Value::Object(map) => map.values_mut().for_each(canonicalize),
        _ => {}
    }
}

/// Serialize to canonical pretty JSON (trailing newline included).
pub fn to_canonical_json<T: serde::Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("serializable");
    canonicalize(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("printable");
    s.push('\n');
    s
}

/// CSV for percolation estimates, records sorted by `(p, radius)`.
pub fn perc_csv(estimates: &[PercEstimate]) -> String {
    let mut rows: Vec<&PercEstimate> = estimates.iter().collect();
    rows.sort_by(|a, b| {
        (a.p, a.radius)
            .partial_cmp(&(b.p, b.radius))
            .expect("finite keys")
    });
    let mut out = String::from("p,radius,successes,trials,point,ci_low,ci_high\n");
    for e in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_sig(e.p),
            e.radius,
            e.successes,
            e.trials,
            fmt_sig(e.point),
            fmt_sig(e.ci_low),
            fmt_sig(e.ci_high)
        ));
    }
    out
}

pub fn perc_json(estimates: &[PercEstimate]) -> String {
    to_canonical_json(&estimates.to_vec())
}

pub fn bracket_json(bracket: &PcBracket) -> String {
    to_canonical_json(bracket)
}

/// CSV for a SAW table: exact counts plus the running growth bound.
pub fn saw_csv(table: &SawTable, mu: &MuEstimate) -> String {
    let mut out = String::from("n,c_n,c_n_root,pc_lower_running\n");
    let mut best = f64::INFINITY;
    for (i, &c) in table.counts.iter().enumerate() {
        best = best.min(mu.per_n[i]);
        out.push_str(&format!(
            "{},{},{},{}\n",
            i + 1,
            c,
            fmt_sig(mu.per_n[i]),
            fmt_sig(1.0 / best)
        ));
    }
    out
}

/// JSON for a SAW table; counts are decimal strings because exact counts
/// outgrow 64-bit JSON consumers near n = 40 on degree-4 graphs.
pub fn saw_json(table: &SawTable, mu: &MuEstimate) -> String {
    let counts: Vec<String> = table.counts.iter().map(|c| c.to_string()).collect();
    let mut v = json!({
        "family": table.family,
        "origin": table.origin.to_string(),
        "counts": counts,
        "per_n": mu.per_n,
        "upper_bound": mu.upper_bound,
        "pc_lower": mu.pc_lower,
        "rigorous": mu.rigorous,
        "visits": table.visits,
    });
    canonicalize(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("printable");
    s.push('\n');
    s
}

pub fn levels_csv(profile: &LevelProfile) -> String {
    let mut out = String::from("n,size\n");
    for (n, s) in profile.sizes.iter().enumerate() {
        out.push_str(&format!("{n},{s}\n"));
    }
    out
}

pub fn branching_json(bracket: &BranchingBracket) -> String {
    to_canonical_json(bracket)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_digit_rounding() {
        assert_eq!(fmt_sig(0.6527034), "0.652703");
        assert_eq!(fmt_sig(1536.00001), "1536");
        assert_eq!(fmt_sig(0.0001234567), "0.000123457");
        assert_eq!(fmt_sig(-2.7182818), "-2.71828");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
    }

    #[test]
    fn canonical_json_is_stable() {
        let mut a = serde_json::json!({"x": 0.123456789, "y": [1.0000001, 2]});
        canonicalize(&mut a);
        assert_eq!(a["x"], serde_json::json!(0.123457));
        assert_eq!(a["y"][0], serde_json::json!(1.0));
    }
}
