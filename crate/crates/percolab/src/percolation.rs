//! Bernoulli bond percolation on lazily generated graphs.
//!
//! Edge states come from a counter-based hash of `(seed, trial, edge key)`,
//! so trials are pure functions that parallelize without shared state, the
//! open-edge set at `p` is a subset of the one at `p' >= p` (exact monotone
//! coupling), and identical configurations reproduce bit-identical results.

use serde::Serialize;

use crate::graphs::{edge_key, GraphModel, VertexRef};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default per-trial vertex budget for cluster exploration.
pub const DEFAULT_TRIAL_BUDGET: usize = 1_000_000;

/// 95% normal quantile used by the Wilson interval.
const WILSON_Z: f64 = 1.959963984540054;

// --- counter-based edge states ------------------------------------------

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

// SplitMix64 finalizer; full-avalanche bijection on 64 bits.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn absorb(h: u64, v: u64) -> u64 {
    mix64(h.wrapping_add(GAMMA) ^ v)
}

/// Uniform value in `[0,1)` attached to `(seed, trial, {a,b})`. The edge key
/// is the lexicographically sorted endpoint pair, so orientation does not
/// matter.
pub fn edge_uniform(seed: u64, trial: u64, a: &VertexRef, b: &VertexRef) -> f64 {
    let (x, y) = edge_key(a, b);
    let mut h = mix64(seed ^ GAMMA);
    h = absorb(h, trial);
    h = absorb(h, x.payload().len() as u64);
    for &c in x.payload() {
        h = absorb(h, c as u64);
    }
    h = absorb(h, y.payload().len() as u64);
    for &c in y.payload() {
        h = absorb(h, c as u64);
    }
    // Top 53 bits -> dyadic rational in [0,1).
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Whether the edge `{a,b}` is open at parameter `p` in the given trial.
pub fn edge_open(seed: u64, trial: u64, a: &VertexRef, b: &VertexRef, p: f64) -> bool {
    edge_uniform(seed, trial, a, b) < p
}

// --- estimates ------------------------------------------------------------

/// Sampling configuration for crossing-probability estimation.
#[derive(Clone, Debug, Serialize)]
pub struct PercConfig {
    pub p: f64,
    pub radius: u32,
    pub trials: u64,
    pub seed: u64,
    /// Per-trial vertex budget; exceeding it counts as a flagged crossing.
    pub budget: usize,
}

impl PercConfig {
    pub fn new(p: f64, radius: u32, trials: u64, seed: u64) -> Self {
        assert!((0.0..=1.0).contains(&p), "p must lie in [0,1]");
        assert!(trials >= 1, "at least one trial required");
        PercConfig {
            p,
            radius,
            trials,
            seed,
            budget: DEFAULT_TRIAL_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }
}

/// Crossing-probability estimate with a Wilson 95% interval.
#[derive(Clone, Debug, Serialize)]
pub struct PercEstimate {
    pub p: f64,
    pub radius: u32,
    pub successes: u64,
    pub trials: u64,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Trials whose cluster exploration hit the vertex budget and was counted
    /// as a crossing.
    pub budget_flagged: u64,
}

/// Wilson 95% score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    assert!(trials >= 1 && successes <= trials);
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    // The bounds are exact at the extremes; rounding residue would otherwise
    // leave ci_low at ~1e-18 for zero successes.
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

enum Trial {
    Crossed { flagged: bool },
    Died,
}

// One trial: explore the open cluster of the root (depth-first; the crossing
// event does not depend on exploration order) until a vertex at graph
// distance `radius` is reached, the cluster dies, or the budget is hit.
// Exploration is lazy: edge states are hashed on demand and only vertices at
// distance < radius are ever expanded.
fn run_trial(graph: &GraphModel, cfg: &PercConfig, trial: u64) -> Trial {
    if cfg.radius == 0 {
        return Trial::Crossed { flagged: false };
    }
    if cfg.p <= 0.0 {
        return Trial::Died;
    }
    let root = graph.root().clone();
    let mut visited = std::collections::HashSet::new();
    visited.insert(root.clone());
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for w in graph.neighbors(&v) {
            if !edge_open(cfg.seed, trial, &v, &w, cfg.p) {
                continue;
            }
            let dw = graph.distance_to_root(&w);
            if dw >= cfg.radius {
                return Trial::Crossed { flagged: false };
            }
            if visited.insert(w.clone()) {
                if visited.len() >= cfg.budget {
                    return Trial::Crossed { flagged: true };
                }
                stack.push(w);
            }
        }
    }
    Trial::Died
}

/// Estimate `P_p(root <-> boundary of the radius-r ball)` over independent
/// trials.
pub fn crossing_probability(graph: &GraphModel, cfg: &PercConfig) -> PercEstimate {
    let run = |t: u64| run_trial(graph, cfg, t);

    #[cfg(feature = "parallel")]
    let (successes, flagged) = (0..cfg.trials)
        .into_par_iter()
        .map(run)
        .map(|t| match t {
            Trial::Crossed { flagged } => (1u64, flagged as u64),
            Trial::Died => (0, 0),
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    #[cfg(not(feature = "parallel"))]
    let (successes, flagged) = (0..cfg.trials).map(run).fold((0u64, 0u64), |acc, t| match t {
        Trial::Crossed { flagged } => (acc.0 + 1, acc.1 + flagged as u64),
        Trial::Died => acc,
    });

    let (ci_low, ci_high) = wilson_interval(successes, cfg.trials);
    PercEstimate {
        p: cfg.p,
        radius: cfg.radius,
        successes,
        trials: cfg.trials,
        point: successes as f64 / cfg.trials as f64,
        ci_low,
        ci_high,
        budget_flagged: flagged,
    }
}

/// Crossing estimates over an ascending `p` grid with shared trial streams,
/// so point estimates are exactly non-decreasing in `p`.
pub fn theta_curve(
    graph: &GraphModel,
    radius: u32,
    p_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Vec<PercEstimate> {
    assert!(
        p_grid.windows(2).all(|w| w[0] <= w[1]),
        "p grid must be sorted ascending"
    );
    p_grid
        .iter()
        .map(|&p| crossing_probability(graph, &PercConfig::new(p, radius, trials, seed)))
        .collect()
}

// --- classification and p_c bracketing ------------------------------------

/// Decay-vs-plateau thresholds used by [`classify`]. The finite-size
/// methodology is a stated choice; these are the tunable knobs.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClassifyRules {
    /// A doubling of radius must shrink the estimate by at least this factor
    /// (CI-separated) to count as geometric decay.
    pub halving_factor: f64,
    /// A doubling of radius must keep the estimate above this fraction of the
    /// smaller-radius estimate (CI-separated) to count as a plateau.
    pub plateau_ratio: f64,
    /// Minimal CI lower bound at every radius for a supercritical call.
    pub plateau_floor: f64,
    /// Estimates whose CI upper bound falls below `zero_successes / trials`
    /// count as decayed to zero.
    pub zero_successes: f64,
}

impl Default for ClassifyRules {
    fn default() -> Self {
        ClassifyRules {
            halving_factor: 0.5,
            plateau_ratio: 0.75,
            plateau_floor: 0.02,
            zero_successes: 8.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    Subcritical,
    Supercritical,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyOutcome {
    pub p: f64,
    pub class: Classification,
    pub estimates: Vec<PercEstimate>,
}

/// Classify `p` by the decay of crossing estimates across radii.
///
/// Radii must be strictly increasing with at least two entries and should
/// span at least a factor of two; all pairs `(r_i, r_j)` with `r_j >= 2 r_i`
/// are tested. Geometric decay across every such pair (CI-separated halving,
/// or decay to statistical zero) is subcritical; a CI-separated plateau
/// bounded away from zero at every radius is supercritical; anything else is
/// undecided.
pub fn classify(
    graph: &GraphModel,
    p: f64,
    radii: &[u32],
    trials: u64,
    seed: u64,
) -> ClassifyOutcome {
    classify_with_rules(graph, p, radii, trials, seed, &ClassifyRules::default())
}

pub fn classify_with_rules(
    graph: &GraphModel,
    p: f64,
    radii: &[u32],
    trials: u64,
    seed: u64,
    rules: &ClassifyRules,
) -> ClassifyOutcome {
    assert!(radii.len() >= 2, "need at least two radii");
    assert!(
        radii.windows(2).all(|w| w[0] < w[1]),
        "radii must be strictly increasing"
    );
    let estimates: Vec<PercEstimate> = radii
        .iter()
        .map(|&r| crossing_probability(graph, &PercConfig::new(p, r, trials, seed)))
        .collect();
    let class = classify_estimates(&estimates, rules, trials);
    ClassifyOutcome {
        p,
        class,
        estimates,
    }
}

fn classify_estimates(
    estimates: &[PercEstimate],
    rules: &ClassifyRules,
    trials: u64,
) -> Classification {
    let zero_eps = rules.zero_successes / trials as f64;
    let mut pairs = Vec::new();
    for i in 0..estimates.len() {
        for j in i + 1..estimates.len() {
            if estimates[j].radius >= 2 * estimates[i].radius {
                pairs.push((i, j));
            }
        }
    }
    if pairs.is_empty() {
        return Classification::Undecided;
    }

    let decayed = pairs.iter().all(|&(i, j)| {
        estimates[j].ci_high <= zero_eps
            || estimates[j].ci_high < rules.halving_factor * estimates[i].ci_low
    });
    if decayed {
        return Classification::Subcritical;
    }

    let floored = estimates.iter().all(|e| e.ci_low >= rules.plateau_floor);
    let plateau = pairs
        .iter()
        .all(|&(i, j)| estimates[j].ci_low > rules.plateau_ratio * estimates[i].ci_high);
    if floored && plateau {
        return Classification::Supercritical;
    }
    Classification::Undecided
}

/// A `p_c` bracket: `lo` is the largest probe classified subcritical, `hi`
/// the smallest classified supercritical.
#[derive(Clone, Debug, Serialize)]
pub struct PcBracket {
    pub lo: f64,
    pub hi: f64,
    pub radii_used: Vec<u32>,
    pub method_notes: String,
    /// Every probe in evaluation order.
    pub probes: Vec<(f64, Classification)>,
}

impl PcBracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }
}

const P_SEARCH_MIN: f64 = 0.01;
const P_SEARCH_MAX: f64 = 0.99;

/// Bracket `p_c` by bisecting the subcritical and supercritical decision
/// boundaries separately; probes near criticality that come back undecided
/// simply fail both predicates, so the search always converges.
pub fn estimate_pc(
    graph: &GraphModel,
    radii: &[u32],
    trials: u64,
    tol: f64,
    seed: u64,
) -> PcBracket {
    assert!(tol >= 0.005, "tolerance below 0.005 is not supported");
    let mut probes = Vec::new();
    let eval = |p: f64, probes: &mut Vec<(f64, Classification)>| {
        let out = classify(graph, p, radii, trials, seed);
        probes.push((p, out.class));
        out.class
    };

    // Largest p that certifies as subcritical.
    let (mut lo, mut hi) = (P_SEARCH_MIN, P_SEARCH_MAX);
    let mut best_sub = None;
    while hi - lo > tol {
        let m = 0.5 * (lo + hi);
        if eval(m, &mut probes) == Classification::Subcritical {
            best_sub = Some(m);
            lo = m;
        } else {
            hi = m;
        }
    }

    // Smallest p that certifies as supercritical.
    let (mut lo2, mut hi2) = (P_SEARCH_MIN, P_SEARCH_MAX);
    let mut best_super = None;
    while hi2 - lo2 > tol {
        let m = 0.5 * (lo2 + hi2);
        if eval(m, &mut probes) == Classification::Supercritical {
            best_super = Some(m);
            hi2 = m;
        } else {
            lo2 = m;
        }
    }

    let mut notes = Vec::new();
    let lo = match best_sub {
        Some(p) => p,
        None => {
            notes.push("no probe certified subcritical; lo is the search floor".to_string());
            P_SEARCH_MIN
        }
    };
    let hi = match best_super {
        Some(p) => p,
        None => {
            notes.push("no probe certified supercritical; hi is the search ceiling".to_string());
            P_SEARCH_MAX
        }
    };
    let (lo, hi) = if lo < hi {
        (lo, hi)
    } else {
        notes.push(format!(
            "inconsistent classifications (sub at {lo}, super at {hi}); widened to their hull"
        ));
        (hi.min(lo), hi.max(lo))
    };
    let undecided = probes
        .iter()
        .filter(|(_, c)| *c == Classification::Undecided)
        .count();
    notes.push(format!(
        "{} probes, {} undecided, trials={} per radius set {:?}",
        probes.len(),
        undecided,
        trials,
        radii
    ));
    PcBracket {
        lo,
        hi,
        radii_used: radii.to_vec(),
        method_notes: notes.join("; "),
        probes,
    }
}
