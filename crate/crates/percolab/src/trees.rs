//! Growth rates, branching-number brackets via the min-cutset recursion,
//! and subperiodicity witnesses for rooted trees.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::graphs::{ball, GraphError, GraphModel, VertexRef, DEFAULT_BALL_BUDGET};

/// Exact level sizes `|T_0|..|T_n|` with tail-window growth estimates.
///
/// The growth estimates are max/min of the one-step ratios
/// `|T_(k+1)| / |T_k|` over the tail window: on eventually geometric level
/// sequences this estimator is exact, whereas `|T_k|^(1/k)` carries an
/// `O(1/k)` prefactor bias that dominates any bracket width reachable at
/// desk depths.
#[derive(Clone, Debug, Serialize)]
pub struct LevelProfile {
    pub family: String,
    pub sizes: Vec<u64>,
    /// max of `|T_(k+1)|/|T_k|` over the tail window.
    pub gr_upper: f64,
    /// min of `|T_(k+1)|/|T_k|` over the tail window.
    pub gr_lower: f64,
    /// First level of the tail window; earlier levels are excluded because
    /// the growth rate is a tail quantity (irregular low levels would bias
    /// it).
    pub tail_start: usize,
}

/// BFS level sizes of a rooted tree, rejecting cyclic inputs.
pub fn level_profile(tree: &GraphModel, n_max: u32) -> Result<LevelProfile, GraphError> {
    assert!(n_max >= 2);
    let mut dist: HashMap<VertexRef, u32> = HashMap::new();
    let mut parent: HashMap<VertexRef, VertexRef> = HashMap::new();
    let mut sizes = vec![0u64; n_max as usize + 1];
    let root = tree.root().clone();
    dist.insert(root.clone(), 0);
    sizes[0] = 1;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        if dv >= n_max {
            continue;
        }
        for w in tree.neighbors(&v) {
            if parent.get(&v) == Some(&w) {
                continue;
            }
            if dist.contains_key(&w) {
                return Err(GraphError::NotATree(v, w));
            }
            if dist.len() >= DEFAULT_BALL_BUDGET {
                return Err(GraphError::BudgetExceeded {
                    budget: DEFAULT_BALL_BUDGET,
                    partial_radius: dv,
                });
            }
            dist.insert(w.clone(), dv + 1);
            parent.insert(w.clone(), v.clone());
            sizes[dv as usize + 1] += 1;
            queue.push_back(w);
        }
    }

    Ok(profile_from_sizes(tree.family(), sizes))
}

/// Assemble a profile (tail-window growth estimates) from precomputed level
/// sizes.
pub fn profile_from_sizes(family: &str, sizes: Vec<u64>) -> LevelProfile {
    let n = sizes.len() - 1;
    let tail_start = n.div_ceil(2);
    let mut gr_upper = f64::NEG_INFINITY;
    let mut gr_lower = f64::INFINITY;
    for k in tail_start..n {
        if sizes[k] > 0 && sizes[k + 1] > 0 {
            let rate = sizes[k + 1] as f64 / sizes[k] as f64;
            gr_upper = gr_upper.max(rate);
            gr_lower = gr_lower.min(rate);
        }
    }
    if gr_lower > gr_upper {
        // Degenerate window (the tree died out before it): no estimate.
        gr_upper = 0.0;
        gr_lower = 0.0;
    }
    LevelProfile {
        family: family.to_string(),
        sizes,
        gr_upper,
        gr_lower,
        tail_start,
    }
}

/// Level sizes by depth-capped DFS with `O(depth)` memory, for trees too
/// large to hold a BFS frontier (tens of millions of vertices). Assumes the
/// input is a tree (no cycle detection: a cyclic input double-counts); run
/// [`level_profile`] at a shallow depth first when that is not known.
pub fn level_sizes(tree: &GraphModel, n_max: u32, budget: u64) -> Result<Vec<u64>, GraphError> {
    let mut sizes = vec![0u64; n_max as usize + 1];
    sizes[0] = 1;
    let mut visits = 0u64;
    let root = tree.root().clone();
    count_below(tree, &root, None, 1, n_max, &mut sizes, &mut visits, budget)?;
    Ok(sizes)
}

#[allow(clippy::too_many_arguments)]
fn count_below(
    tree: &GraphModel,
    v: &VertexRef,
    parent: Option<&VertexRef>,
    depth: u32,
    n_max: u32,
    sizes: &mut [u64],
    visits: &mut u64,
    budget: u64,
) -> Result<(), GraphError> {
    if depth > n_max {
        return Ok(());
    }
    for w in tree.neighbors(v) {
        if parent == Some(&w) {
            continue;
        }
        *visits += 1;
        if *visits > budget {
            return Err(GraphError::BudgetExceeded {
                budget: budget as usize,
                partial_radius: depth - 1,
            });
        }
        sizes[depth as usize] += 1;
        count_below(tree, &w, Some(v), depth + 1, n_max, sizes, visits, budget)?;
    }
    Ok(())
}

/// Minimal cutset sum at a truncation depth for one conductance decay rate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CutsetEvaluation {
    pub lambda: f64,
    pub depth: u32,
    /// `inf` over cutsets within the truncation of `sum_e lambda^(-|e|)`,
    /// where `|e|` is the depth of the edge's lower endpoint. Equals the
    /// max-flow from the root to the depth boundary by max-flow min-cut.
    pub value: f64,
}

/// Leaf-to-root recursion for the minimal cutset sum: a depth-boundary
/// vertex contributes its own edge conductance, an interior vertex the
/// cheaper of cutting its edge or cutting below all of its children, and the
/// root sums over its children.
pub fn min_cutset_value(
    tree: &GraphModel,
    depth: u32,
    lambda: f64,
) -> Result<CutsetEvaluation, GraphError> {
    assert!(lambda > 1.0, "conductance decay requires lambda > 1");
    assert!(depth >= 1);
    let root = tree.root().clone();
    let mut visited = HashSet::from([root.clone()]);
    let mut value = 0.0;
    let mut visits = 0usize;
    for child in tree.neighbors(&root) {
        value += cut_below(
            tree,
            &child,
            &root,
            1,
            depth,
            lambda,
            &mut visited,
            &mut visits,
        )?;
    }
    Ok(CutsetEvaluation {
        lambda,
        depth,
        value,
    })
}

#[allow(clippy::too_many_arguments)]
fn cut_below(
    tree: &GraphModel,
    v: &VertexRef,
    parent: &VertexRef,
    depth_v: u32,
    depth_limit: u32,
    lambda: f64,
    visited: &mut HashSet<VertexRef>,
    visits: &mut usize,
) -> Result<f64, GraphError> {
    *visits += 1;
    if *visits > DEFAULT_BALL_BUDGET {
        return Err(GraphError::BudgetExceeded {
            budget: DEFAULT_BALL_BUDGET,
            partial_radius: depth_v,
        });
    }
    if !visited.insert(v.clone()) {
        return Err(GraphError::NotATree(parent.clone(), v.clone()));
    }
    let own = lambda.powi(-(depth_v as i32));
    if depth_v == depth_limit {
        return Ok(own);
    }
    let mut below = 0.0;
    for w in tree.neighbors(v) {
        if w == *parent {
            continue;
        }
        below += cut_below(
            tree,
            &w,
            v,
            depth_v + 1,
            depth_limit,
            lambda,
            visited,
            visits,
        )?;
    }
    Ok(own.min(below))
}

/// One bisection probe of [`branching_bracket`].
#[derive(Clone, Debug, Serialize)]
pub struct LambdaDecision {
    pub lambda: f64,
    /// `(depth, value)` at the probed truncation depths.
    pub values: Vec<(u32, f64)>,
    /// Ratio of the deepest pair of values.
    pub final_ratio: f64,
    /// Whether the value stabilized (lambda at or below the branching
    /// number) rather than decayed geometrically.
    pub below_branching: bool,
}

/// Bracket claimed to contain the branching number at the tested depths.
#[derive(Clone, Debug, Serialize)]
pub struct BranchingBracket {
    pub lo: f64,
    pub hi: f64,
    pub depth: u32,
    pub decisions: Vec<LambdaDecision>,
    pub warning: Option<String>,
}

// Cutset values are non-increasing in depth; at lambda <= br they bottom out
// at a positive constant (the minimal cutset stops moving), above br the
// deepest level cut keeps shrinking. A ratio threshold of 1 (minus float
// slack) separates the two on self-similar trees, where the stabilized value
// is exactly constant.
const STABILIZATION_RATIO: f64 = 1.0 - 1e-9;

fn eval_depths(depth: u32) -> Vec<u32> {
    let mut ds = vec![depth / 4, depth / 2, depth];
    ds.retain(|&d| d >= 1);
    ds.dedup();
    ds
}

fn decide_lambda(
    tree: &GraphModel,
    lambda: f64,
    depths: &[u32],
) -> Result<LambdaDecision, GraphError> {
    let mut values = Vec::with_capacity(depths.len());
    for &d in depths {
        values.push((d, min_cutset_value(tree, d, lambda)?.value));
    }
    let deep = values[values.len() - 1].1;
    let prev = values[values.len() - 2].1;
    let final_ratio = if prev > 0.0 { deep / prev } else { 0.0 };
    Ok(LambdaDecision {
        lambda,
        values,
        final_ratio,
        below_branching: deep > 0.0 && final_ratio >= STABILIZATION_RATIO,
    })
}

/// Bisect on the conductance decay rate: values that stabilize across the
/// probe depths put `lambda` at or below the branching number, geometric
/// decay puts it above.
pub fn branching_bracket(
    tree: &GraphModel,
    depth: u32,
    lambda_tol: f64,
) -> Result<BranchingBracket, GraphError> {
    assert!(depth >= 8, "need depth >= 8 for the decay probes");
    assert!(lambda_tol > 0.0);
    let depths = eval_depths(depth);
    let mut decisions = Vec::new();

    let mut lo = 1.02;
    let mut hi = tree.degree_bound() as f64 + 0.5;
    let mut best_lo = None;
    let mut best_hi = None;
    while hi - lo > lambda_tol {
        let m = 0.5 * (lo + hi);
        let d = decide_lambda(tree, m, &depths)?;
        let below = d.below_branching;
        decisions.push(d);
        if below {
            best_lo = Some(m);
            lo = m;
        } else {
            best_hi = Some(m);
            hi = m;
        }
    }

    let mut warning = None;
    let lo = best_lo.unwrap_or_else(|| {
        warning = Some("no probe stabilized; lo fell back to 1 (br >= 1 always)".into());
        1.0
    });
    let hi = best_hi.unwrap_or_else(|| {
        warning = Some(format!(
            "no probe decayed; hi fell back to the degree bound {}",
            tree.degree_bound()
        ));
        tree.degree_bound() as f64
    });
    Ok(BranchingBracket {
        lo,
        hi,
        depth,
        decisions,
        warning,
    })
}

/// Interval for `p_c` implied by a branching bracket via `p_c = 1/br`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PcInterval {
    pub lo: f64,
    pub hi: f64,
}

pub fn pc_from_branching(bracket: &BranchingBracket) -> PcInterval {
    PcInterval {
        lo: 1.0 / bracket.hi,
        hi: 1.0 / bracket.lo,
    }
}

/// Adjacency-preserving injection evidence for one scanned vertex.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessEntry {
    #[serde(serialize_with = "crate::graphs::serialize_ref")]
    pub vertex: VertexRef,
    #[serde(serialize_with = "crate::graphs::serialize_ref")]
    pub target: VertexRef,
    /// Vertex pairs of the embedding of the truncated subtree.
    pub embedding: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubperiodicityWitness {
    pub n_shift: u32,
    pub check_depth: u32,
    pub ball_radius: u32,
    pub entries: Vec<WitnessEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub enum SubperiodicityOutcome {
    Witness(SubperiodicityWitness),
    /// No target within distance N of the root admits an embedding for this
    /// vertex at the checked depth. Finite-depth evidence only.
    Failure {
        #[serde(serialize_with = "crate::graphs::serialize_ref")]
        vertex: VertexRef,
        targets_tried: Vec<String>,
    },
}

/// Children of `v` in the rooted tree: neighbors farther from the root.
fn children(tree: &GraphModel, v: &VertexRef) -> Vec<VertexRef> {
    let dv = tree.distance_to_root(v);
    tree.neighbors(v)
        .into_iter()
        .filter(|w| tree.distance_to_root(w) > dv)
        .collect()
}

// Does the depth-truncated subtree at `u` embed into the one at `v`,
// children matched injectively (bipartite matching, recursing per pair)?
// Returns the vertex map on success.
fn embed_subtree(
    tree: &GraphModel,
    u: &VertexRef,
    v: &VertexRef,
    depth_left: u32,
) -> Option<Vec<(VertexRef, VertexRef)>> {
    if depth_left == 0 {
        return Some(vec![(u.clone(), v.clone())]);
    }
    let cu = children(tree, u);
    let cv = children(tree, v);
    if cu.is_empty() {
        return Some(vec![(u.clone(), v.clone())]);
    }
    if cu.len() > cv.len() {
        return None;
    }
    // Feasibility per child pair, then Kuhn's augmenting matching.
    let mut feasible: Vec<Vec<Option<Vec<(VertexRef, VertexRef)>>>> =
        vec![vec![None; cv.len()]; cu.len()];
    for (i, a) in cu.iter().enumerate() {
        for (j, b) in cv.iter().enumerate() {
            feasible[i][j] = embed_subtree(tree, a, b, depth_left - 1);
        }
    }
    let mut matched_to: Vec<Option<usize>> = vec![None; cv.len()];
    fn augment(
        i: usize,
        feasible: &[Vec<Option<Vec<(VertexRef, VertexRef)>>>],
        matched_to: &mut Vec<Option<usize>>,
        seen: &mut Vec<bool>,
    ) -> bool {
        for j in 0..feasible[i].len() {
            if feasible[i][j].is_some() && !seen[j] {
                seen[j] = true;
                if matched_to[j].is_none()
                    || augment(matched_to[j].unwrap(), feasible, matched_to, seen)
                {
                    matched_to[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    for i in 0..cu.len() {
        let mut seen = vec![false; cv.len()];
        if !augment(i, &feasible, &mut matched_to, &mut seen) {
            return None;
        }
    }
    let mut map = vec![(u.clone(), v.clone())];
    for (j, slot) in matched_to.iter().enumerate() {
        if let Some(i) = slot {
            map.extend(feasible[*i][j].clone().unwrap());
        }
    }
    Some(map)
}

/// Search, for every vertex `x` of the radius-`ball_radius` ball, a target
/// `f(x)` within distance `n_shift` of the root whose subtree admits a
/// depth-`check_depth` adjacency-preserving injection of the subtree at `x`.
pub fn subperiodicity_witness(
    tree: &GraphModel,
    n_shift: u32,
    check_depth: u32,
    ball_radius: u32,
) -> Result<SubperiodicityOutcome, GraphError> {
    let targets: Vec<VertexRef> = ball(tree, n_shift)?.vertices().to_vec();
    let scan = ball(tree, ball_radius)?;
    let mut entries = Vec::new();
    for x in scan.vertices() {
        let mut found = None;
        for t in &targets {
            if let Some(map) = embed_subtree(tree, x, t, check_depth) {
                found = Some(WitnessEntry {
                    vertex: x.clone(),
                    target: t.clone(),
                    embedding: map
                        .into_iter()
                        .map(|(a, b)| (a.to_string(), b.to_string()))
                        .collect(),
                });
                break;
            }
        }
        match found {
            Some(e) => entries.push(e),
            None => {
                return Ok(SubperiodicityOutcome::Failure {
                    vertex: x.clone(),
                    targets_tried: targets.iter().map(|t| t.to_string()).collect(),
                })
            }
        }
    }
    Ok(SubperiodicityOutcome::Witness(SubperiodicityWitness {
        n_shift,
        check_depth,
        ball_radius,
        entries,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{random_finite_tree, FixtureRng};
    use crate::graphs::families::*;

    #[test]
    fn level_profile_closed_forms() {
        let g = regular_tree(3).unwrap();
        let p = level_profile(&g, 10).unwrap();
        assert_eq!(p.sizes[0], 1);
        for n in 1..=10u32 {
            assert_eq!(p.sizes[n as usize], 3 * 2u64.pow(n - 1));
        }
        // Level ratios are exactly 2 everywhere.
        assert_eq!((p.gr_lower, p.gr_upper), (2.0, 2.0));

        let f3 = fig1_tree(3).unwrap();
        let p = level_profile(&f3, 12).unwrap();
        assert_eq!(&p.sizes[..6], &[1, 3, 4, 8, 16, 32]);
        // |T_k| = 2^k exactly from level 2 on, so both estimates are exactly 2.
        assert_eq!(p.gr_lower, 2.0);
        assert_eq!(p.gr_upper, 2.0);

        let f4 = fig1_tree(4).unwrap();
        let p = level_profile(&f4, 6).unwrap();
        assert_eq!(&p.sizes[..5], &[1, 4, 10, 30, 90]);
    }

    #[test]
    fn dfs_level_sizes_agree_with_bfs_profile() {
        for tree in [regular_tree(3).unwrap(), fig1_tree(4).unwrap()] {
            let profile = level_profile(&tree, 8).unwrap();
            let sizes = level_sizes(&tree, 8, 1 << 30).unwrap();
            assert_eq!(profile.sizes, sizes, "{}", tree.family());
        }
        let g = regular_tree(3).unwrap();
        assert!(matches!(
            level_sizes(&g, 12, 100),
            Err(GraphError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn level_profile_rejects_cycles() {
        let g = fig1_graph(3).unwrap();
        assert!(matches!(
            level_profile(&g, 4),
            Err(GraphError::NotATree(_, _))
        ));
    }

    #[test]
    fn cutset_values_on_regular_tree() {
        let g = regular_tree(3).unwrap();
        // At lambda = 2 every full-level cutset sums to 3/2 and nothing
        // smaller exists; the value is depth-independent.
        for depth in [4, 8, 12] {
            let v = min_cutset_value(&g, depth, 2.0).unwrap().value;
            assert!((v - 1.5).abs() < 1e-12, "depth {depth}: {v}");
        }
        // Above the branching number the deepest cut wins: 3 * 2^(d-1) / 3^d.
        let v = min_cutset_value(&g, 10, 3.0).unwrap().value;
        let expect = 3.0 * 2f64.powi(9) / 3f64.powi(10);
        assert!((v - expect).abs() < 1e-12);
        assert!((expect - 0.026).abs() < 1e-3);
        // Two-sided line: value 2 * 1.5^(-n) -> 0, consistent with br = 1.
        let line = regular_tree(2).unwrap();
        for depth in [4, 8] {
            let v = min_cutset_value(&line, depth, 1.5).unwrap().value;
            assert!((v - 2.0 * 1.5f64.powi(-(depth as i32))).abs() < 1e-12);
        }
    }

    #[test]
    fn cutset_monotone_in_depth_and_lambda() {
        for seed in 0..10u64 {
            let t = random_finite_tree(60, seed);
            let mut rng = FixtureRng::new(seed ^ 0xabcd);
            let lambda = 1.1 + rng.unit();
            let mut prev = f64::INFINITY;
            for depth in 1..=8 {
                let v = min_cutset_value(&t, depth, lambda).unwrap().value;
                assert!(v <= prev + 1e-12, "depth {depth}");
                prev = v;
            }
            let v1 = min_cutset_value(&t, 6, lambda).unwrap().value;
            let v2 = min_cutset_value(&t, 6, lambda + 0.4).unwrap().value;
            assert!(v2 <= v1 + 1e-12);
        }
    }

    #[test]
    fn full_level_cut_is_an_upper_bound() {
        let g = fig1_tree(3).unwrap();
        let profile = level_profile(&g, 10).unwrap();
        for lambda in [1.5, 2.0, 2.5] {
            for depth in [4u32, 8] {
                let v = min_cutset_value(&g, depth, lambda).unwrap().value;
                let level = profile.sizes[depth as usize] as f64 * lambda.powi(-(depth as i32));
                assert!(v <= level + 1e-12);
            }
        }
    }

    /// Generic max-flow (Edmonds-Karp on the residual graph) used as the
    /// oracle for the cutset recursion.
    fn max_flow(n: usize, edges: &[(usize, usize, f64)], s: usize, t: usize) -> f64 {
        let mut cap = vec![vec![0.0f64; n]; n];
        for &(a, b, c) in edges {
            cap[a][b] += c;
        }
        let mut flow = 0.0;
        loop {
            // BFS for an augmenting path.
            let mut prev = vec![usize::MAX; n];
            prev[s] = s;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in 0..n {
                    if prev[w] == usize::MAX && cap[v][w] > 1e-12 {
                        prev[w] = v;
                        queue.push_back(w);
                    }
                }
            }
            if prev[t] == usize::MAX {
                return flow;
            }
            let mut bottleneck = f64::INFINITY;
            let mut w = t;
            while w != s {
                bottleneck = bottleneck.min(cap[prev[w]][w]);
                w = prev[w];
            }
            let mut w = t;
            while w != s {
                cap[prev[w]][w] -= bottleneck;
                cap[w][prev[w]] += bottleneck;
                w = prev[w];
            }
            flow += bottleneck;
        }
    }

    #[test]
    fn recursion_equals_generic_max_flow_on_random_trees() {
        let mut rng = FixtureRng::new(99);
        for case in 0..100u64 {
            let n = 10 + rng.below(190) as usize; // up to ~200 edges
            let tree = random_finite_tree(n, case);
            let b = crate::graphs::ball(&tree, n as u32).unwrap();
            let depth_limit = 2 + rng.below(6) as u32;
            let lambda = 1.2 + 1.5 * rng.unit();

            let recursion = min_cutset_value(&tree, depth_limit, lambda).unwrap().value;

            // Flow network: tree edges directed away from the root with
            // capacity lambda^(-depth of lower endpoint); vertices at the
            // truncation depth drain into a sink.
            let sink = b.vertex_count();
            let mut edges = Vec::new();
            for &(i, j) in b.edges() {
                let (up, down) = if b.distance(i) < b.distance(j) {
                    (i, j)
                } else {
                    (j, i)
                };
                let depth = b.distance(down);
                if depth <= depth_limit {
                    edges.push((
                        up as usize,
                        down as usize,
                        lambda.powi(-(depth as i32)),
                    ));
                }
            }
            for v in 0..b.vertex_count() as u32 {
                if b.distance(v) == depth_limit {
                    edges.push((v as usize, sink, f64::INFINITY));
                }
            }
            let flow = max_flow(b.vertex_count() + 1, &edges, 0, sink);
            assert!(
                (recursion - flow).abs() < 1e-9 * recursion.max(1.0),
                "case {case} n={n} depth={depth_limit} lambda={lambda}: {recursion} vs {flow}"
            );
        }
    }

    #[test]
    fn branching_brackets_contain_known_values() {
        let g = regular_tree(3).unwrap();
        let br = branching_bracket(&g, 16, 0.05).unwrap();
        assert!(br.lo <= 2.0 && 2.0 <= br.hi, "[{}, {}]", br.lo, br.hi);
        assert!(br.hi - br.lo <= 0.05 + 1e-9);
        assert!(br.warning.is_none());

        let f3 = fig1_tree(3).unwrap();
        let br = branching_bracket(&f3, 16, 0.1).unwrap();
        assert!(br.lo <= 2.0 && 2.0 <= br.hi, "[{}, {}]", br.lo, br.hi);

        let f5 = fig1_tree(5).unwrap();
        let br = branching_bracket(&f5, 8, 0.1).unwrap();
        assert!(br.lo <= 4.0 && 4.0 <= br.hi, "[{}, {}]", br.lo, br.hi);

        let pc = pc_from_branching(&br);
        assert!(pc.lo <= 0.25 && 0.25 <= pc.hi);
    }

    #[test]
    fn subperiodicity_examples() {
        let tree = regular_tree(3).unwrap();
        match subperiodicity_witness(&tree, 0, 3, 2).unwrap() {
            SubperiodicityOutcome::Witness(w) => {
                assert_eq!(w.entries.len(), 10);
                for e in &w.entries {
                    assert_eq!(e.target, *tree.root());
                }
            }
            SubperiodicityOutcome::Failure { vertex, .. } => {
                panic!("homogeneous tree must be 0-subperiodic, failed at {vertex}")
            }
        }

        let f3 = fig1_tree(3).unwrap();
        match subperiodicity_witness(&f3, 1, 4, 3).unwrap() {
            SubperiodicityOutcome::Witness(w) => {
                // Embeddings must be injective and adjacency preserving.
                for e in &w.entries {
                    let targets: HashSet<&String> =
                        e.embedding.iter().map(|(_, b)| b).collect();
                    assert_eq!(targets.len(), e.embedding.len(), "not injective");
                }
            }
            SubperiodicityOutcome::Failure { vertex, .. } => {
                panic!("expected a 1-subperiodicity witness, failed at {vertex}")
            }
        }

        // With N = 0 the only target is the root, and the full binary
        // subtree at the third child cannot embed: the root has only one
        // child whose subtree is binary-complete.
        match subperiodicity_witness(&f3, 0, 3, 1).unwrap() {
            SubperiodicityOutcome::Failure { vertex, .. } => {
                assert_eq!(vertex, VertexRef::new(vec![2]));
            }
            SubperiodicityOutcome::Witness(_) => {
                panic!("fig1_tree(3) is not 0-subperiodic at depth 3")
            }
        }
    }

    #[test]
    fn gr_bracket_coherence_on_pinched_trees() {
        // br = gr numerically: the branching bracket contains the growth
        // estimate. Depths kept small for d = 4, 5.
        for (d, depth, n_max) in [(3usize, 16u32, 12u32), (4, 10, 8), (5, 8, 7)] {
            let t = fig1_tree(d).unwrap();
            let profile = level_profile(&t, n_max).unwrap();
            let br = branching_bracket(&t, depth, 0.1).unwrap();
            assert!(
                br.lo <= profile.gr_lower && profile.gr_upper <= br.hi,
                "d={d}: gr [{}, {}] outside br [{}, {}]",
                profile.gr_lower,
                profile.gr_upper,
                br.lo,
                br.hi
            );
        }
    }
}
