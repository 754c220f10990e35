//! Browser bindings for the laboratory's parameter-explorable views.
//!
//! Each export takes plain scalars, runs the corresponding estimator on the
//! lazily generated graph, and returns a JSON string for the demo page to
//! plot. Build with `wasm-pack build --target web` (see the repository
//! README); the crate also compiles natively so workspace builds and tests
//! cover it.

use percolab::graphs::families::GraphSpec;
use percolab::graphs::{ball, local_girth, GraphError, GraphModel};
use percolab::percolation::theta_curve;
use percolab::saw::{count_saws, mu_estimates};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn resolve(family: &str, d: usize) -> Result<GraphModel, String> {
    GraphSpec::new(family, (d > 0).then_some(d))
        .build()
        .map_err(|e: GraphError| e.to_string())
}

/// Known family names for the demo's selector.
#[wasm_bindgen]
pub fn families() -> String {
    json!([
        "regular_tree",
        "fig1_tree",
        "fig1_graph",
        "square_lattice",
        "hexagonal_lattice",
        "ladder",
        "triangle_cactus"
    ])
    .to_string()
}

/// Crossing-probability curve over an even p-grid with Wilson intervals.
#[wasm_bindgen]
pub fn theta_curve_json(
    family: &str,
    d: usize,
    radius: u32,
    trials: u64,
    seed: u64,
    p_points: usize,
) -> Result<String, JsValue> {
    theta_curve_data(family, d, radius, trials, seed, p_points).map_err(|e| JsValue::from_str(&e))
}

/// Plain-string core of [`theta_curve_json`]; also usable off-wasm.
pub fn theta_curve_data(
    family: &str,
    d: usize,
    radius: u32,
    trials: u64,
    seed: u64,
    p_points: usize,
) -> Result<String, String> {
    let graph = resolve(family, d)?;
    let n = p_points.clamp(2, 201);
    let grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let curve = theta_curve(&graph, radius, &grid, trials.clamp(10, 200_000), seed);
    let points: Vec<_> = curve
        .iter()
        .map(|e| {
            json!({
                "p": e.p,
                "point": e.point,
                "ci_low": e.ci_low,
                "ci_high": e.ci_high,
            })
        })
        .collect();
    Ok(json!({
        "family": graph.family(),
        "radius": radius,
        "trials": trials,
        "points": points,
    })
    .to_string())
}

/// Exact SAW counts with per-n growth roots and the running p_c lower bound.
#[wasm_bindgen]
pub fn saw_growth_json(family: &str, d: usize, n_max: usize) -> Result<String, JsValue> {
    saw_growth_data(family, d, n_max).map_err(|e| JsValue::from_str(&e))
}

/// Plain-string core of [`saw_growth_json`]; also usable off-wasm.
pub fn saw_growth_data(family: &str, d: usize, n_max: usize) -> Result<String, String> {
    let graph = resolve(family, d)?;
    let n_max = n_max.clamp(1, 26);
    let table =
        count_saws(&graph, graph.root(), n_max, 200_000_000).map_err(|e| e.to_string())?;
    let transitive = matches!(
        graph.symmetry().kind,
        percolab::graphs::SymmetryKind::Transitive
    );
    let mu = mu_estimates(&table, transitive);
    let mut best = f64::INFINITY;
    let rows: Vec<_> = table
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            best = best.min(mu.per_n[i]);
            json!({
                "n": i + 1,
                "count": c.to_string(),
                "root": mu.per_n[i],
                "pc_lower_running": 1.0 / best,
            })
        })
        .collect();
    Ok(json!({
        "family": graph.family(),
        "degree_minus_one": graph.degree_bound() - 1,
        "rigorous": mu.rigorous,
        "rows": rows,
    })
    .to_string())
}

/// Local girth by distance from the root over a ball: flat on transitive
/// lattices, absent on trees, growing linearly on the pinched counterexample.
#[wasm_bindgen]
pub fn girth_profile_json(
    family: &str,
    d: usize,
    radius: u32,
    cap: u32,
) -> Result<String, JsValue> {
    girth_profile_data(family, d, radius, cap).map_err(|e| JsValue::from_str(&e))
}

/// Plain-string core of [`girth_profile_json`]; also usable off-wasm.
pub fn girth_profile_data(family: &str, d: usize, radius: u32, cap: u32) -> Result<String, String> {
    let graph = resolve(family, d)?;
    let radius = radius.min(9);
    let cap = cap.clamp(3, 40);
    let b = ball(&graph, radius).map_err(|e| e.to_string())?;
    let mut per_distance: Vec<Option<u32>> = vec![None; radius as usize + 1];
    let mut any_infinite = false;
    for i in 0..b.vertex_count() as u32 {
        let dist = b.distance(i) as usize;
        match local_girth(&graph, b.vertex(i), cap) {
            Some(g) => {
                per_distance[dist] = Some(per_distance[dist].map_or(g, |m| m.max(g)));
            }
            None => any_infinite = true,
        }
    }
    let rows: Vec<_> = per_distance
        .iter()
        .enumerate()
        .map(|(dist, g)| json!({"distance": dist, "max_girth": g}))
        .collect();
    Ok(json!({
        "family": graph.family(),
        "cap": cap,
        "any_exceeding_cap": any_infinite,
        "rows": rows,
    })
    .to_string())
}

/// Edge-list export of a ball in the canonical text format.
#[wasm_bindgen]
pub fn ball_edge_list(family: &str, d: usize, radius: u32) -> Result<String, JsValue> {
    ball_edge_list_data(family, d, radius).map_err(|e| JsValue::from_str(&e))
}

/// Plain-string core of [`ball_edge_list`]; also usable off-wasm.
pub fn ball_edge_list_data(family: &str, d: usize, radius: u32) -> Result<String, String> {
    let graph = resolve(family, d)?;
    let b = ball(&graph, radius.min(8)).map_err(|e| e.to_string())?;
    Ok(b.to_edge_list())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_curve_json_shape() {
        let text = theta_curve_data("regular_tree", 3, 6, 500, 1, 11).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["points"].as_array().unwrap().len(), 11);
        assert_eq!(v["points"][0]["point"], 0.0);
        assert_eq!(v["points"][10]["point"], 1.0);
    }

    #[test]
    fn saw_growth_json_shape() {
        let text = saw_growth_data("hexagonal_lattice", 0, 10).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["degree_minus_one"], 2);
        assert_eq!(v["rows"].as_array().unwrap().len(), 10);
        assert_eq!(v["rows"][0]["count"], "3");
    }

    #[test]
    fn girth_profile_distinguishes_families() {
        let hex: serde_json::Value =
            serde_json::from_str(&girth_profile_data("hexagonal_lattice", 0, 4, 20).unwrap())
                .unwrap();
        assert_eq!(hex["rows"][0]["max_girth"], 6);
        assert_eq!(hex["any_exceeding_cap"], false);

        let tree: serde_json::Value =
            serde_json::from_str(&girth_profile_data("regular_tree", 3, 4, 20).unwrap()).unwrap();
        assert_eq!(tree["rows"][0]["max_girth"], serde_json::Value::Null);
        assert_eq!(tree["any_exceeding_cap"], true);

        let fig1: serde_json::Value =
            serde_json::from_str(&girth_profile_data("fig1_graph", 3, 5, 30).unwrap()).unwrap();
        assert_eq!(fig1["rows"][0]["max_girth"], 3);
        assert_eq!(fig1["rows"][5]["max_girth"], 13);
    }

    #[test]
    fn errors_are_reported() {
        assert!(theta_curve_data("no_such_family", 0, 4, 100, 1, 5).is_err());
    }
}
