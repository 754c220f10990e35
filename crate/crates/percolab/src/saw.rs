//! Exact self-avoiding-walk enumeration and connective-constant bounds.
//!
//! Counts are exact integers obtained by depth-first extension with a
//! visited set; a second, deliberately naive enumerator ([`naive_saw_counts`])
//! serves as the independent oracle the optimized build is checked against.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::graphs::{GraphModel, SymmetryKind, VertexRef};

/// Default enumeration budget in node visits.
pub const DEFAULT_SAW_BUDGET: u64 = 1_000_000_000;

/// Exact SAW counts `c_1..c_n` from a fixed origin.
#[derive(Clone, Debug, Serialize)]
pub struct SawTable {
    pub family: String,
    #[serde(serialize_with = "crate::graphs::serialize_ref")]
    pub origin: VertexRef,
    /// `counts[k]` is the number of self-avoiding walks of length `k + 1`.
    pub counts: Vec<u64>,
    /// Node visits spent producing the table.
    pub visits: u64,
}

impl SawTable {
    pub fn c(&self, n: usize) -> u64 {
        self.counts[n - 1]
    }

    pub fn max_n(&self) -> usize {
        self.counts.len()
    }
}

#[derive(Debug, Error)]
pub enum SawError {
    #[error("enumeration budget {budget} exhausted; largest completed length {completed}")]
    BudgetExceeded {
        budget: u64,
        completed: usize,
        /// Table of the lengths that did complete.
        partial: SawTable,
    },
}

/// Count self-avoiding walks of lengths `1..=n_max` from `origin`, exactly.
///
/// Iterative deepening keeps the budget semantics honest: when the node-visit
/// budget runs out the error carries the table for every fully completed
/// length. Deepening only costs a constant factor on exponentially growing
/// graphs.
pub fn count_saws(
    graph: &GraphModel,
    origin: &VertexRef,
    n_max: usize,
    budget: u64,
) -> Result<SawTable, SawError> {
    assert!(n_max >= 1);
    let mut visits = 0u64;
    let mut completed: Vec<u64> = Vec::new();
    for n in 1..=n_max {
        let mut counts = vec![0u64; n];
        let mut visited = HashSet::new();
        visited.insert(origin.clone());
        let ok = extend(
            graph,
            origin,
            &mut visited,
            0,
            n,
            &mut counts,
            &mut visits,
            budget,
        );
        if !ok {
            return Err(SawError::BudgetExceeded {
                budget,
                completed: completed.len(),
                partial: SawTable {
                    family: graph.family().to_string(),
                    origin: origin.clone(),
                    counts: completed,
                    visits,
                },
            });
        }
        completed = counts;
    }
    Ok(SawTable {
        family: graph.family().to_string(),
        origin: origin.clone(),
        counts: completed,
        visits,
    })
}

#[allow(clippy::too_many_arguments)]
fn extend(
    graph: &GraphModel,
    v: &VertexRef,
    visited: &mut HashSet<VertexRef>,
    depth: usize,
    n_max: usize,
    counts: &mut [u64],
    visits: &mut u64,
    budget: u64,
) -> bool {
    for w in graph.neighbors(v) {
        if visited.contains(&w) {
            continue;
        }
        *visits += 1;
        if *visits > budget {
            return false;
        }
        counts[depth] += 1;
        if depth + 1 < n_max {
            visited.insert(w.clone());
            let ok = extend(graph, &w, visited, depth + 1, n_max, counts, visits, budget);
            visited.remove(&w);
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Count SAWs from the graph root with the default budget.
pub fn count_saws_from_root(graph: &GraphModel, n_max: usize) -> Result<SawTable, SawError> {
    count_saws(graph, graph.root(), n_max, DEFAULT_SAW_BUDGET)
}

/// One table per declared orbit representative (just the root for transitive
/// or undeclared graphs): quasi-transitive counts depend on the origin's
/// orbit only.
pub fn saw_tables(graph: &GraphModel, n_max: usize, budget: u64) -> Result<Vec<SawTable>, SawError> {
    let origins: Vec<VertexRef> = match &graph.symmetry().kind {
        SymmetryKind::QuasiTransitive { orbit_reps } => orbit_reps.clone(),
        _ => vec![graph.root().clone()],
    };
    origins
        .iter()
        .map(|o| count_saws(graph, o, n_max, budget))
        .collect()
}

/// Independent oracle: breadth-first path extension storing whole paths and
/// using linear scans for the self-avoidance check. Slow on purpose; shares
/// no code with [`count_saws`].
pub fn naive_saw_counts(graph: &GraphModel, origin: &VertexRef, n_max: usize) -> Vec<u64> {
    let mut paths: Vec<Vec<VertexRef>> = vec![vec![origin.clone()]];
    let mut counts = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let mut next = Vec::new();
        for path in &paths {
            let last = path.last().unwrap();
            for w in graph.neighbors(last) {
                if !path.contains(&w) {
                    let mut longer = path.clone();
                    longer.push(w);
                    next.push(longer);
                }
            }
        }
        counts.push(next.len() as u64);
        paths = next;
    }
    counts
}

/// Per-`n` growth estimates and the resulting `p_c` lower bound.
#[derive(Clone, Debug, Serialize)]
pub struct MuEstimate {
    /// `c_n^(1/n)` for each computed length.
    pub per_n: Vec<f64>,
    /// Least `c_n^(1/n)`: a rigorous upper bound on the connective constant
    /// when submultiplicativity applies, `None` otherwise.
    pub upper_bound: Option<f64>,
    /// Reciprocal of the best `c_n^(1/n)`; rigorous only when `rigorous`.
    pub pc_lower: f64,
    /// Whether transitivity makes the bounds rigorous
    /// (`c_(m+n) <= c_m * c_n` requires a vertex-transitive origin).
    pub rigorous: bool,
}

/// Derive growth estimates from an exact table. With `transitive` set, the
/// sequence is submultiplicative and `min_n c_n^(1/n)` bounds the connective
/// constant from above, which bounds `p_c` from below by its reciprocal.
pub fn mu_estimates(table: &SawTable, transitive: bool) -> MuEstimate {
    assert!(!table.counts.is_empty(), "table must be non-empty");
    let per_n: Vec<f64> = table
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (c as f64).powf(1.0 / (i + 1) as f64))
        .collect();
    let best = per_n.iter().cloned().fold(f64::INFINITY, f64::min);
    MuEstimate {
        per_n,
        upper_bound: transitive.then_some(best),
        pc_lower: 1.0 / best,
        rigorous: transitive,
    }
}

/// One point of the first-moment bound `P_p(o <-> boundary at n) <= c_n p^n`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FirstMomentBound {
    pub p: f64,
    pub n: usize,
    pub bound: f64,
}

/// The explicit first-moment upper bound for each `p` in the grid and each
/// computed length.
pub fn first_moment_curve(table: &SawTable, p_grid: &[f64]) -> Vec<FirstMomentBound> {
    let mut out = Vec::with_capacity(p_grid.len() * table.counts.len());
    for &p in p_grid {
        assert!((0.0..=1.0).contains(&p));
        for (i, &c) in table.counts.iter().enumerate() {
            let n = i + 1;
            out.push(FirstMomentBound {
                p,
                n,
                bound: c as f64 * p.powi(n as i32),
            });
        }
    }
    out
}
