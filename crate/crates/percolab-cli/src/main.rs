//! Laboratory entry point: reproducible percolation experiments over the
//! graph zoo, with canonical CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 1 claim or check failure, 2 usage error,
//! 3 budget exhausted without a flagged resolution.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use percolab::cover::{
    universal_cover, verify_fibres, verify_lipschitz, verify_shape, verify_strong_lifting,
    VerificationReport,
};
use percolab::graphs::families::GraphSpec;
use percolab::graphs::{GraphError, GraphModel, SymmetryKind};
use percolab::percolation::{crossing_probability, estimate_pc, PercConfig, PercEstimate};
use percolab::saw::{count_saws, mu_estimates, SawError, DEFAULT_SAW_BUDGET};
use percolab::trees::{branching_bracket, level_profile, level_sizes, profile_from_sizes};
use percolab_cli::output;
use percolab_cli::suites;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "percolab",
    version,
    about = "Desk-scale percolation laboratory on lazily generated infinite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for all randomized estimators (fixed default for reproducible runs).
    #[arg(long, global = true, default_value_t = suites::DEFAULT_SEED)]
    seed: u64,

    /// Worker threads for trial-parallel estimators (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Budget override: per-trial vertices for perc, node visits for saw and
    /// tree level counting.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write output here instead of stdout (the resolved experiment spec
    /// goes to `<out>.spec.json`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct GraphSel {
    /// Family name: regular_tree, fig1_tree, fig1_graph, square_lattice,
    /// hexagonal_lattice, ladder, triangle_cactus.
    #[arg(long)]
    family: Option<String>,

    /// Degree parameter for the tree families.
    #[arg(long)]
    d: Option<usize>,

    /// Structured selection, e.g. `family=fig1_graph,d=3` (alternative to
    /// --family/--d).
    #[arg(long, conflicts_with_all = ["family", "d"])]
    graph: Option<String>,
}

impl GraphSel {
    fn resolve(&self) -> Result<(GraphModel, GraphSpec), GraphError> {
        let spec = match (&self.graph, &self.family) {
            (Some(text), _) => text.parse::<GraphSpec>()?,
            (None, Some(family)) => GraphSpec::new(family.clone(), self.d),
            (None, None) => {
                return Err(GraphError::InvalidParameter(
                    "select a graph with --family or --graph".into(),
                ))
            }
        };
        Ok((spec.build()?, spec))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Crossing probabilities, theta curves, and p_c bracketing.
    Perc {
        #[command(flatten)]
        sel: GraphSel,
        /// Single percolation parameter.
        #[arg(long)]
        p: Option<f64>,
        /// Ascending parameter grid, e.g. `0.3,0.5,0.7`.
        #[arg(long, conflicts_with = "p")]
        p_grid: Option<String>,
        /// Bracket the critical point by bisection instead of estimating at
        /// fixed p (JSON output).
        #[arg(long, conflicts_with_all = ["p", "p_grid"])]
        estimate_pc: bool,
        /// Ball radii, ascending.
        #[arg(long, default_value = "8,12,16")]
        radii: String,
        /// Trials per estimate.
        #[arg(long, default_value_t = 20_000)]
        trials: u64,
        /// Bracket tolerance for --estimate-pc.
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
    },
    /// Exact self-avoiding-walk tables and growth bounds.
    Saw {
        #[command(flatten)]
        sel: GraphSel,
        /// Largest walk length to enumerate.
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// Level profiles and branching-number brackets for tree families.
    Tree {
        #[command(flatten)]
        sel: GraphSel,
        /// Truncation depth for the cutset probes.
        #[arg(long, default_value_t = 16)]
        depth: u32,
        /// Bisection tolerance on the branching number.
        #[arg(long, default_value_t = 0.05)]
        lambda_tol: f64,
        /// Levels to tabulate in the CSV output.
        #[arg(long, default_value_t = 10)]
        levels: u32,
    },
    /// Universal-cover construction and covering-map verification.
    Cover {
        #[command(flatten)]
        sel: GraphSel,
        /// Cover ball radius for the shape/lifting/fibre checks.
        #[arg(long, default_value_t = 8)]
        radius: u32,
        /// Fibre-mate search cap.
        #[arg(long, default_value_t = 8)]
        r_cap: u32,
        /// All-pairs Lipschitz check radius (cheaper than the others).
        #[arg(long, default_value_t = 5)]
        lipschitz_radius: u32,
        /// Comma-separated subset of shape,lipschitz,lifting,fibres.
        #[arg(long, default_value = "shape,lipschitz,lifting,fibres")]
        checks: String,
    },
    /// Pinned-seed claim suites aggregating the laboratory's headline runs.
    Report {
        /// One of: theorem2, counterexample, lemma3, covering.
        #[arg(long)]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                GraphError::BudgetExceeded { .. } => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, GraphError> {
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global()
            .map_err(|e| GraphError::InvalidParameter(format!("worker pool: {e}")))?;
    }

    match &cli.command {
        Command::Perc {
            sel,
            p,
            p_grid,
            estimate_pc: do_estimate,
            radii,
            trials,
            tol,
        } => {
            let (graph, spec) = sel.resolve()?;
            let radii = parse_list::<u32>(radii)?;
            let budget = cli.budget.unwrap_or(1_000_000) as usize;
            let resolved = json!({
                "command": "perc",
                "graph": {"family": spec.family, "d": spec.d},
                "p": p, "p_grid": p_grid, "estimate_pc": do_estimate,
                "radii": radii, "trials": trials, "tol": tol,
                "budget": budget, "seed": cli.seed,
            });
            log_spec(&cli, &resolved);

            if *do_estimate {
                let bracket = estimate_pc(&graph, &radii, *trials, *tol, cli.seed);
                emit(&cli, &output::bracket_json(&bracket))?;
                return Ok(ExitCode::SUCCESS);
            }

            let ps: Vec<f64> = match (p, p_grid) {
                (Some(p), None) => vec![*p],
                (None, Some(grid)) => {
                    let ps = parse_list::<f64>(grid)?;
                    if ps.windows(2).any(|w| w[0] > w[1]) {
                        return Err(GraphError::InvalidParameter(
                            "p grid must be ascending".into(),
                        ));
                    }
                    ps
                }
                _ => {
                    return Err(GraphError::InvalidParameter(
                        "need one of --p, --p-grid, --estimate-pc".into(),
                    ))
                }
            };
            let mut estimates: Vec<PercEstimate> = Vec::new();
            for &pv in &ps {
                if !(0.0..=1.0).contains(&pv) {
                    return Err(GraphError::InvalidParameter(format!(
                        "p = {pv} outside [0,1]"
                    )));
                }
                for &r in &radii {
                    estimates.push(crossing_probability(
                        &graph,
                        &PercConfig::new(pv, r, *trials, cli.seed).with_budget(budget),
                    ));
                }
            }
            let text = match cli.format {
                Format::Csv => output::perc_csv(&estimates),
                Format::Json => output::perc_json(&estimates),
            };
            emit(&cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Saw { sel, n_max } => {
            let (graph, spec) = sel.resolve()?;
            let budget = cli.budget.unwrap_or(DEFAULT_SAW_BUDGET);
            let resolved = json!({
                "command": "saw",
                "graph": {"family": spec.family, "d": spec.d},
                "n_max": n_max, "budget": budget, "seed": cli.seed,
            });
            log_spec(&cli, &resolved);
            let transitive = matches!(graph.symmetry().kind, SymmetryKind::Transitive);
            let (table, truncated) = match count_saws(&graph, graph.root(), *n_max, budget) {
                Ok(table) => (table, false),
                Err(SawError::BudgetExceeded { partial, .. }) => (partial, true),
            };
            if table.counts.is_empty() {
                return Err(GraphError::BudgetExceeded {
                    budget: budget as usize,
                    partial_radius: 0,
                });
            }
            let mu = mu_estimates(&table, transitive);
            let text = match cli.format {
                Format::Csv => output::saw_csv(&table, &mu),
                Format::Json => output::saw_json(&table, &mu),
            };
            emit(&cli, &text)?;
            if truncated {
                eprintln!(
                    "budget exhausted: table truncated at n = {}",
                    table.counts.len()
                );
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Tree {
            sel,
            depth,
            lambda_tol,
            levels,
        } => {
            let (graph, spec) = sel.resolve()?;
            let budget = cli.budget.unwrap_or(200_000_000);
            let resolved = json!({
                "command": "tree",
                "graph": {"family": spec.family, "d": spec.d},
                "depth": depth, "lambda_tol": lambda_tol, "levels": levels,
                "budget": budget, "seed": cli.seed,
            });
            log_spec(&cli, &resolved);
            // Cycle detection on a shallow window, then memory-light DFS for
            // the full level table.
            level_profile(&graph, (*levels).min(6).max(2))?;
            let sizes = level_sizes(&graph, *levels, budget)?;
            let profile = profile_from_sizes(graph.family(), sizes);
            let bracket = branching_bracket(&graph, *depth, *lambda_tol)?;
            let text = match cli.format {
                Format::Csv => output::levels_csv(&profile),
                Format::Json => output::branching_json(&bracket),
            };
            emit(&cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Cover {
            sel,
            radius,
            r_cap,
            lipschitz_radius,
            checks,
        } => {
            let (graph, spec) = sel.resolve()?;
            let resolved = json!({
                "command": "cover",
                "graph": {"family": spec.family, "d": spec.d},
                "radius": radius, "r_cap": r_cap,
                "lipschitz_radius": lipschitz_radius, "checks": checks,
                "seed": cli.seed,
            });
            log_spec(&cli, &resolved);
            let cover = universal_cover(&graph, graph.root());
            let mut reports: Vec<VerificationReport> = Vec::new();
            for check in checks.split(',').map(str::trim).filter(|c| !c.is_empty()) {
                let report = match check {
                    "shape" => verify_shape(&cover, *radius)?,
                    "lipschitz" => verify_lipschitz(&cover, *lipschitz_radius)?,
                    "lifting" => verify_strong_lifting(&cover, *radius)?,
                    "fibres" => verify_fibres(&cover, *radius, *r_cap)?,
                    other => {
                        return Err(GraphError::InvalidParameter(format!(
                            "unknown check '{other}'"
                        )))
                    }
                };
                reports.push(report);
            }
            let text = match cli.format {
                Format::Csv => {
                    let mut s =
                        String::from("property,radius,passed,max_statistic,checked,failures\n");
                    for r in &reports {
                        s.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            r.property,
                            r.radius,
                            r.passed,
                            r.max_statistic.map(output::fmt_sig).unwrap_or_default(),
                            r.checked,
                            r.failures
                        ));
                    }
                    s
                }
                Format::Json => output::to_canonical_json(&reports),
            };
            emit(&cli, &text)?;
            if reports.iter().any(|r| !r.passed) {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Report { suite } => {
            let resolved = json!({"command": "report", "suite": suite, "seed": cli.seed});
            log_spec(&cli, &resolved);
            let report = suites::run_suite(suite, cli.seed)?;
            let text = match cli.format {
                Format::Csv => {
                    let mut s = String::from("id,verdict,evidence\n");
                    for c in &report.claims {
                        s.push_str(&format!(
                            "{},{:?},\"{}\"\n",
                            c.id,
                            c.verdict,
                            c.evidence.replace('"', "'")
                        ));
                    }
                    s
                }
                Format::Json => output::to_canonical_json(&report),
            };
            emit(&cli, &text)?;
            if report.any_failed() {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, GraphError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| GraphError::InvalidParameter(format!("bad list entry '{s}'")))
        })
        .collect()
}

// The resolved spec (defaults included) always goes to stderr; with --out it
// is also written next to the artifact for replay.
fn log_spec(cli: &Cli, resolved: &serde_json::Value) {
    let mut spec = resolved.clone();
    if let Some(obj) = spec.as_object_mut() {
        obj.insert("workers".into(), json!(cli.workers));
        obj.insert(
            "format".into(),
            json!(match cli.format {
                Format::Csv => "csv",
                Format::Json => "json",
            }),
        );
        if let Some(out) = &cli.out {
            obj.insert("out".into(), json!(out.display().to_string()));
        }
    }
    eprintln!("spec: {spec}");
    if let Some(out) = &cli.out {
        let path = out.with_extension(format!(
            "{}spec.json",
            out.extension()
                .map(|e| format!("{}.", e.to_string_lossy()))
                .unwrap_or_default()
        ));
        let _ = std::fs::write(path, format!("{spec}\n"));
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), GraphError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| GraphError::InvalidParameter(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
