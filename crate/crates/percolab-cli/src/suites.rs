//! Claim-report suites with pinned seeds and parameters.
//!
//! Each suite re-runs its experiments from scratch and grades them against
//! frozen windows and oracles, so a report is a reproducible artifact rather
//! than a cache.

use percolab::cover::{
    universal_cover, verify_fibres, verify_lipschitz, verify_shape, verify_strong_lifting,
};
use percolab::graphs::families::{
    fig1_graph, fig1_tree, hexagonal_lattice, ladder, regular_tree, square_lattice,
    triangle_cactus,
};
use percolab::graphs::{bounded_girth_scan, GraphError, GraphModel};
use percolab::percolation::{estimate_pc, PcBracket};
use percolab::saw::{count_saws, mu_estimates, naive_saw_counts, SawTable, DEFAULT_SAW_BUDGET};
use percolab::trees::{branching_bracket, level_sizes, pc_from_branching};
use serde::Serialize;

use crate::output::fmt_sig;

/// Fixed published seed: all report suites run with it unless overridden.
pub const DEFAULT_SEED: u64 = 20240601;

/// Pinned estimator parameters per graph family. Radii are tuned so the
/// decay/plateau classifier decides on the right side of each acceptance
/// window; trials balance CI width against desk-scale runtime.
pub mod params {
    pub struct PcParams {
        pub radii: &'static [u32],
        pub trials: u64,
        pub tol: f64,
    }

    pub const TREE: PcParams = PcParams {
        radii: &[8, 12, 16],
        trials: 20_000,
        tol: 0.005,
    };
    pub const FIG1: PcParams = TREE;
    pub const HEX: PcParams = PcParams {
        radii: &[24, 48, 96],
        trials: 30_000,
        tol: 0.005,
    };
    pub const SQUARE: PcParams = PcParams {
        radii: &[24, 48, 96],
        trials: 30_000,
        tol: 0.005,
    };
    pub const CACTUS: PcParams = PcParams {
        radii: &[32, 64, 128],
        trials: 20_000,
        tol: 0.005,
    };
    pub const LADDER: PcParams = PcParams {
        radii: &[64, 256, 1024],
        trials: 12_000,
        tol: 0.01,
    };
    /// Covers of the cyclic bases are regular trees; tree radii apply.
    pub const COVER: PcParams = PcParams {
        radii: &[8, 12, 16],
        trials: 12_000,
        tol: 0.01,
    };
    /// Lighter budget for the coherence cross-checks, whose margins are wide.
    pub const COHERENCE: PcParams = PcParams {
        radii: &[24, 48, 96],
        trials: 12_000,
        tol: 0.01,
    };
    pub const COHERENCE_CACTUS: PcParams = PcParams {
        radii: &[32, 64, 128],
        trials: 12_000,
        tol: 0.01,
    };
}

use params::PcParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub id: String,
    /// What is being checked, in words.
    pub anchor: String,
    /// The computed numbers the verdict is based on.
    pub evidence: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub suite: String,
    pub seed: u64,
    pub claims: Vec<Claim>,
}

impl ClaimReport {
    pub fn any_failed(&self) -> bool {
        self.claims.iter().any(|c| c.verdict == Verdict::Fail)
    }
}

pub const SUITES: &[&str] = &["theorem2", "counterexample", "lemma3", "covering"];

pub fn run_suite(name: &str, seed: u64) -> Result<ClaimReport, GraphError> {
    let claims = match name {
        "theorem2" => theorem2_claims(seed)?,
        "counterexample" => counterexample_claims(seed)?,
        "lemma3" => lemma3_claims(seed)?,
        "covering" => covering_claims(seed)?,
        other => {
            return Err(GraphError::InvalidParameter(format!(
                "unknown suite '{other}', expected one of {SUITES:?}"
            )))
        }
    };
    Ok(ClaimReport {
        suite: name.to_string(),
        seed,
        claims,
    })
}

fn fmt_bracket(b: &PcBracket) -> String {
    format!("[{}, {}]", fmt_sig(b.lo), fmt_sig(b.hi))
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn run_pc(graph: &GraphModel, p: &PcParams, seed: u64) -> PcBracket {
    estimate_pc(graph, p.radii, p.trials, p.tol, seed)
}

/// Root of `2 p^2 (1 + p - p^2) = 1`, the mean-one point of the branching
/// process over bridge-crossed triangles: the exact critical point of the
/// triangle cactus, found by scalar bisection.
pub fn cactus_critical_point() -> f64 {
    let g = |p: f64| 2.0 * p * p * (1.0 + p - p * p) - 1.0;
    let (mut lo, mut hi) = (0.5, 0.8);
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if g(m) < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// Classical critical point of the hexagonal lattice, `1 - 2 sin(pi/18)`.
pub fn hexagonal_critical_point() -> f64 {
    1.0 - 2.0 * (std::f64::consts::PI / 18.0).sin()
}

#[allow(clippy::too_many_arguments)]
fn bracket_claim(
    id: &str,
    anchor: String,
    graph: &GraphModel,
    p: &PcParams,
    seed: u64,
    window: (f64, f64),
    above: f64,
    oracle: Option<(f64, &str, bool)>,
) -> Claim {
    let bracket = run_pc(graph, p, seed);
    let in_window = window.0 <= bracket.lo && bracket.hi <= window.1;
    let strictly_above = bracket.lo > above;
    let mut ok = in_window && strictly_above;
    let mut evidence = format!(
        "bracket {} within [{}, {}]: {in_window}; lo > {}: {strictly_above}",
        fmt_bracket(&bracket),
        fmt_sig(window.0),
        fmt_sig(window.1),
        fmt_sig(above),
    );
    if let Some((value, label, gate)) = oracle {
        let contains = bracket.contains(value);
        evidence.push_str(&format!("; {label} {} contained: {contains}", fmt_sig(value)));
        if gate {
            ok = ok && contains;
        }
    }
    Claim {
        id: id.to_string(),
        anchor,
        evidence,
        verdict: pass_if(ok),
    }
}

fn strict_anchor(graph: &GraphModel) -> String {
    format!(
        "estimated p_c bracket for {} sits in the expected window, strictly above 1/(d-1)",
        graph.family()
    )
}

fn theorem2_claims(seed: u64) -> Result<Vec<Claim>, GraphError> {
    let hex = hexagonal_lattice();
    let cactus = triangle_cactus();
    let square = square_lattice();
    Ok(vec![
        bracket_claim(
            "t2-hexagonal",
            strict_anchor(&hex),
            &hex,
            &params::HEX,
            seed,
            (0.60, 0.70),
            0.5,
            Some((hexagonal_critical_point(), "classical value", false)),
        ),
        bracket_claim(
            "t2-triangle-cactus",
            strict_anchor(&cactus),
            &cactus,
            &params::CACTUS,
            seed,
            (0.60, 0.67),
            0.5,
            Some((cactus_critical_point(), "branching criticality root", true)),
        ),
        bracket_claim(
            "t2-square",
            strict_anchor(&square),
            &square,
            &params::SQUARE,
            seed,
            (0.46, 0.54),
            1.0 / 3.0,
            Some((0.5, "classical value", false)),
        ),
    ])
}

/// Expected level size of the pinched tree: `d`, then `(d-2)(d+1)(d-1)^n`.
fn fig1_level_formula(d: u64, n: usize) -> u64 {
    match n {
        0 => 1,
        1 => d,
        k => (d - 2) * (d + 1) * (d - 1).pow(k as u32 - 2),
    }
}

fn counterexample_claims(seed: u64) -> Result<Vec<Claim>, GraphError> {
    let mut claims = Vec::new();

    // (a) Exact level sizes for d in {3,4,5} up to level 12.
    let mut all_exact = true;
    let mut evidence = Vec::new();
    for d in [3u64, 4, 5] {
        let tree = fig1_tree(d as usize)?;
        let sizes = level_sizes(&tree, 12, 200_000_000)?;
        let expect: Vec<u64> = (0..=12).map(|n| fig1_level_formula(d, n)).collect();
        let exact = sizes == expect;
        all_exact &= exact;
        evidence.push(format!("d={d}: levels 0..12 exact: {exact} (|T_12| = {})", sizes[12]));
    }
    claims.push(Claim {
        id: "cx-level-sizes".into(),
        anchor: "pinched-tree level sizes equal (d-2)(d+1)(d-1)^n exactly".into(),
        evidence: evidence.join("; "),
        verdict: pass_if(all_exact),
    });

    // (b) Branching bracket around d - 1 = 2.
    let bracket = branching_bracket(&fig1_tree(3)?, 16, 0.05)?;
    let ok = bracket.lo <= 2.0 && 2.0 <= bracket.hi && bracket.hi - bracket.lo <= 0.1;
    claims.push(Claim {
        id: "cx-branching".into(),
        anchor: "branching bracket of the pinched tree contains 2 with width <= 0.1".into(),
        evidence: format!(
            "bracket [{}, {}] at depth 16; p_c transfer [{}, {}]",
            fmt_sig(bracket.lo),
            fmt_sig(bracket.hi),
            fmt_sig(pc_from_branching(&bracket).lo),
            fmt_sig(pc_from_branching(&bracket).hi)
        ),
        verdict: pass_if(ok),
    });

    // (c) The d-regular-with-cycles graph still has p_c = 1/(d-1).
    let fig1 = fig1_graph(3)?;
    claims.push(bracket_claim(
        "cx-pc",
        format!(
            "p_c bracket for {} contains the tree value 1/(d-1), despite the cycle",
            fig1.family()
        ),
        &fig1,
        &params::FIG1,
        seed,
        (0.46, 0.54),
        0.0,
        Some((0.5, "tree value 1/(d-1)", true)),
    ));

    // (d) Local girth grows without bound as the scan radius grows.
    let g = fig1_graph(3)?;
    let small = bounded_girth_scan(&g, 4, 20)?;
    let big = bounded_girth_scan(&g, 9, 20)?;
    let ok = small.values_seen == vec![3, 5, 7, 9, 11]
        && !small.any_exceeded_cap
        && big.any_exceeded_cap
        && big.max_girth_seen == Some(19);
    claims.push(Claim {
        id: "cx-girth-growth".into(),
        anchor: "local girth takes values 3, 5, 7, ... and exceeds any fixed cap as radius grows"
            .into(),
        evidence: format!(
            "radius 4: values {:?}; radius 9 with cap 20: max {:?}, exceeded {}",
            small.values_seen, big.max_girth_seen, big.any_exceeded_cap
        ),
        verdict: pass_if(ok),
    });

    Ok(claims)
}

fn saw_table(graph: &GraphModel, n_max: usize) -> Result<SawTable, GraphError> {
    count_saws(graph, graph.root(), n_max, DEFAULT_SAW_BUDGET)
        .map_err(|e| GraphError::InvalidParameter(e.to_string()))
}

fn lemma3_claims(seed: u64) -> Result<Vec<Claim>, GraphError> {
    let mut claims = Vec::new();

    // Exact tables: the tree closed form and the square lattice reproduced
    // by two independent enumerators.
    let tree = regular_tree(3)?;
    let tree_table = saw_table(&tree, 15)?;
    let tree_exact = (1..=15u32).all(|n| tree_table.c(n as usize) == 3 * 2u64.pow(n - 1));
    let square = square_lattice();
    let fast = saw_table(&square, 10)?;
    let naive = naive_saw_counts(&square, square.root(), 10);
    let square_ok = fast.counts == naive && fast.counts[..4] == [4, 12, 36, 100];
    claims.push(Claim {
        id: "l3-tables".into(),
        anchor: "exact SAW tables: d(d-1)^(n-1) on the tree; square lattice counts reproduced by two independent enumerators".into(),
        evidence: format!(
            "tree c_1..c_15 closed form: {tree_exact}; square c_1..c_10 fast == naive: {}, c_1..c_4 = {:?}",
            fast.counts == naive,
            &fast.counts[..4]
        ),
        verdict: pass_if(tree_exact && square_ok),
    });

    // Growth dips below d - 1 = 2 on every transitive cyclic cubic graph.
    let mut witness_evidence = Vec::new();
    let mut witness_ok = true;
    for (graph, n_max) in [
        (hexagonal_lattice(), 24usize),
        (ladder(), 20),
        (triangle_cactus(), 20),
    ] {
        let table = saw_table(&graph, n_max)?;
        let mu = mu_estimates(&table, true);
        let bound = mu.upper_bound.expect("transitive");
        let (best_n, _) = mu
            .per_n
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        witness_ok &= bound < 2.0;
        witness_evidence.push(format!(
            "{}: min c_n^(1/n) = {} at n = {}",
            graph.family(),
            fmt_sig(bound),
            best_n + 1
        ));
    }
    claims.push(Claim {
        id: "l3-growth-below-degree".into(),
        anchor: "connective-constant upper bound dips below d - 1 on cyclic transitive cubic graphs".into(),
        evidence: witness_evidence.join("; "),
        verdict: pass_if(witness_ok),
    });

    // Coherence: the rigorous SAW lower bound on p_c never exceeds the
    // Monte Carlo subcritical certification.
    for (graph, p, n_max) in [
        (square_lattice(), &params::COHERENCE, 14usize),
        (hexagonal_lattice(), &params::COHERENCE, 24),
        (ladder(), &params::LADDER, 20),
        (triangle_cactus(), &params::COHERENCE_CACTUS, 20),
    ] {
        let table = saw_table(&graph, n_max)?;
        let mu = mu_estimates(&table, true);
        let bracket = run_pc(&graph, p, seed);
        let ok = mu.pc_lower <= bracket.lo;
        claims.push(Claim {
            id: format!("l3-coherence-{}", graph.family()),
            anchor: "rigorous SAW p_c lower bound does not exceed the certified subcritical point"
                .into(),
            evidence: format!(
                "pc_lower = {} (n <= {n_max}) vs bracket {}",
                fmt_sig(mu.pc_lower),
                fmt_bracket(&bracket)
            ),
            verdict: pass_if(ok),
        });
    }

    // Equality cases: on the tree and the counterexample graph both lower
    // bounds converge to p_c itself, so their finite-resolution order is not
    // a checkable claim; assert only that both sit at or below 1/(d-1).
    for graph in [regular_tree(3)?, fig1_graph(3)?] {
        let table = saw_table(&graph, 15)?;
        let mu = mu_estimates(&table, false);
        let bracket = run_pc(&graph, &params::TREE, seed);
        let ok = mu.pc_lower <= 0.5 + 1e-9 && bracket.lo < 0.5;
        claims.push(Claim {
            id: format!("l3-equality-{}", graph.family()),
            anchor: "equality case: SAW bound and subcritical certification both approach p_c = 1/2 from below; ordering unresolved by construction".into(),
            evidence: format!(
                "pc_lower = {} (n <= 15), bracket {}",
                fmt_sig(mu.pc_lower),
                fmt_bracket(&bracket)
            ),
            verdict: if ok { Verdict::Inconclusive } else { Verdict::Fail },
        });
    }

    Ok(claims)
}

fn covering_claims(seed: u64) -> Result<Vec<Claim>, GraphError> {
    let mut claims = Vec::new();

    // Exhaustive covering-map checks per cyclic base. The Lipschitz check is
    // all-pairs, so it runs at its own feasible radius.
    let bases: Vec<(GraphModel, u32, Option<u32>)> = vec![
        (hexagonal_lattice(), 6, Some(6)),
        (square_lattice(), 5, Some(4)),
        (fig1_graph(3)?, 6, None),
        (triangle_cactus(), 6, Some(3)),
    ];
    for (base, lipschitz_radius, cycle_bound) in &bases {
        let cover = universal_cover(base, base.root());
        let shape = verify_shape(&cover, 10)?;
        let lifting = verify_strong_lifting(&cover, 10)?;
        let lipschitz = verify_lipschitz(&cover, *lipschitz_radius)?;
        let mut ok = shape.passed && lifting.passed && lipschitz.passed;
        let mut evidence = format!(
            "radius 10: acyclic+regular over {} vertices: {}; lifting over {} interior: {}; lipschitz all {} pairs at radius {}: {}",
            shape.checked, shape.passed, lifting.checked, lifting.passed,
            lipschitz.checked, lipschitz_radius, lipschitz.passed
        );
        match cycle_bound {
            Some(k) => {
                let fibres = verify_fibres(&cover, 10, k + 1)?;
                let r = fibres.max_statistic.unwrap_or(f64::INFINITY);
                ok = ok && fibres.passed && r <= (k + 1) as f64;
                evidence.push_str(&format!(
                    "; fibres at radius 10: empirical R = {} <= K + 1 = {}",
                    fmt_sig(r),
                    k + 1
                ));
            }
            None => {
                // No cycle bound is declared (unbounded local girth): the
                // fibre radius must grow with the window instead.
                let near = verify_fibres(&cover, 4, 11)?;
                let far = verify_fibres(&cover, 5, 13)?;
                let (r_near, r_far) = (
                    near.max_statistic.unwrap_or(f64::INFINITY),
                    far.max_statistic.unwrap_or(f64::INFINITY),
                );
                ok = ok && near.passed && far.passed && r_far > r_near;
                evidence.push_str(&format!(
                    "; fibres exist but are not uniform: empirical R {} at radius 4 grows to {} at radius 5",
                    fmt_sig(r_near),
                    fmt_sig(r_far)
                ));
            }
        }
        claims.push(Claim {
            id: format!("cov-map-{}", base.family()),
            anchor: format!(
                "universal cover of {} is a regular tree with a verified strong covering map",
                base.family()
            ),
            evidence,
            verdict: pass_if(ok),
        });
    }

    // Expected failure: a tree base has trivial fibres everywhere.
    let tree = regular_tree(3)?;
    let cover = universal_cover(&tree, tree.root());
    let fibres = verify_fibres(&cover, 6, 8)?;
    claims.push(Claim {
        id: "cov-fibres-tree-expected-fail".into(),
        anchor: "on a tree base the projection is injective, so the fibre check must fail at every vertex".into(),
        evidence: format!(
            "passed = {}, failures = {} of {} checked",
            fibres.passed, fibres.failures, fibres.checked
        ),
        verdict: pass_if(!fibres.passed && fibres.failures == fibres.checked),
    });

    // Strict inequality transfer: cover p_c bracket strictly below the base
    // bracket for the quasi-transitive cyclic bases.
    for (base, p) in [
        (hexagonal_lattice(), &params::COHERENCE),
        (square_lattice(), &params::COHERENCE),
        (triangle_cactus(), &params::COHERENCE_CACTUS),
    ] {
        let cover = universal_cover(&base, base.root());
        let cover_bracket = run_pc(cover.graph(), &params::COVER, seed);
        let base_bracket = run_pc(&base, p, seed);
        let ok = cover_bracket.hi < base_bracket.lo;
        claims.push(Claim {
            id: format!("cov-strict-{}", base.family()),
            anchor: format!(
                "p_c of the covering tree lies strictly below p_c of {}",
                base.family()
            ),
            evidence: format!(
                "cover bracket {} vs base bracket {}",
                fmt_bracket(&cover_bracket),
                fmt_bracket(&base_bracket)
            ),
            verdict: pass_if(ok),
        });
    }

    // The counterexample base shares its cover's critical point: brackets
    // overlap instead of separating.
    let fig1 = fig1_graph(3)?;
    let cover = universal_cover(&fig1, fig1.root());
    let cover_bracket = run_pc(cover.graph(), &params::COVER, seed);
    let base_bracket = run_pc(&fig1, &params::FIG1, seed);
    let overlap = cover_bracket.lo <= base_bracket.hi && base_bracket.lo <= cover_bracket.hi;
    claims.push(Claim {
        id: "cov-equality-fig1_graph".into(),
        anchor: "the non-quasi-transitive counterexample shares p_c = 1/2 with its covering tree: brackets overlap".into(),
        evidence: format!(
            "cover bracket {} vs base bracket {}",
            fmt_bracket(&cover_bracket),
            fmt_bracket(&base_bracket)
        ),
        verdict: pass_if(overlap),
    });

    Ok(claims)
}
