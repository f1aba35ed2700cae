//! Command-line front end: graph generation, stability checks, cost
//! reports, verification sweeps, atlas classification, witness search, and
//! improving-move dynamics.
//!
//! Exit codes: 0 success, 1 input error or failed verification, 2 honest
//! budget exhaustion (results partial and flagged, never guessed).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use bncg_core::atlas::{
    classify_graph, default_alpha_grid, default_concepts, find_unilateral_ne_not_ps,
    find_witness, run_dynamics, survey_poa, DynamicsOutcome, GraphClass, NeVsPsOutcome, Policy,
    TriState, WitnessOutcome, WitnessQuery,
};
use bncg_core::concept::Concept;
use bncg_core::construct::{construct, stability_sufficient_alpha, ConstructionSpec, Family};
use bncg_core::cost::{poa, social_cost, social_optimum_cost, GameParams};
use bncg_core::graph::Graph;
use bncg_core::scalar::{format_scalar, parse_scalar, Scalar};
use bncg_core::stability::{
    check_stability, check_unilateral_add, check_unilateral_ne, check_unilateral_remove,
    EdgeAssignment, SearchLimits, StabilityReport,
};

mod io;
mod suites;

#[derive(Parser)]
#[command(
    name = "bncg",
    version,
    about = "Exact analysis of the bilateral network creation game"
)]
struct Cli {
    /// Worker threads for sweeps; the BNCG_WORKERS environment variable
    /// takes precedence over this flag.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Neighborhood-change budget: a center is searched only when its
    /// 2^(n-1) candidate space fits this cap.
    #[arg(long, global = true)]
    bne_cap: Option<u64>,
    /// Coalition-move candidate cap per k-strong stability check.
    #[arg(long, global = true)]
    coalition_cap: Option<u64>,
    /// Strategy cap per agent for the unilateral Nash check.
    #[arg(long, global = true)]
    ne_cap: Option<u64>,
    /// Node cap for graph enumeration.
    #[arg(long, global = true)]
    enum_cap: Option<usize>,
    /// Node cap for free-tree enumeration.
    #[arg(long, global = true)]
    tree_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named graph family (star, path, cycle, clique,
    /// complete-dary, almost-complete-dary, stretched-binary,
    /// stretched-tree-star).
    Gen {
        family: String,
        /// Node count (basic families, almost-complete-dary).
        #[arg(long)]
        n: Option<usize>,
        /// Binary-tree depth (stretched-binary) or d-ary depth
        /// (complete-dary).
        #[arg(long)]
        d: Option<usize>,
        /// Stretch factor.
        #[arg(long)]
        k: Option<usize>,
        /// Subtree size target of the stretched tree star (rational).
        #[arg(long)]
        t: Option<String>,
        /// Target size of the stretched tree star.
        #[arg(long)]
        eta: Option<usize>,
        /// Arity of the d-ary families.
        #[arg(long)]
        arity: Option<usize>,
        /// Write the graph here; metadata goes to stdout as JSON. Without
        /// this, graph and metadata are printed together as JSON.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Graph file format: edgelist or json.
        #[arg(long, default_value = "edgelist")]
        format: String,
    },
    /// Decide stability of a graph under one concept (re, bae, ps, bswe,
    /// bge, bne, `kbse:<k>`, bse, uni-add, uni-re, uni-ne).
    Check {
        #[arg(long)]
        concept: String,
        /// Edge price, as p/q or a decimal string (exact).
        #[arg(long)]
        alpha: String,
        /// Edge owners for uni-re/uni-ne: one endpoint per edge in sorted
        /// edge order, comma separated. Default: the smaller endpoint.
        #[arg(long)]
        owners: Option<String>,
        file: PathBuf,
    },
    /// Social cost, optimum cost, and price of anarchy of a graph.
    Poa {
        #[arg(long)]
        alpha: String,
        file: PathBuf,
    },
    /// Run a named inequality sweep and emit CSV (re-node-bounds,
    /// swap-tree-lemmas, three-bse-lemmas, dary-cost-bound, star-poa-lower,
    /// bge-equals-2bse, hierarchy).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        nmax: Option<usize>,
        /// Comma-separated exact edge prices overriding the suite default.
        #[arg(long)]
        alphas: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify all small graphs under the solution concepts (CSV), or
    /// survey worst-case prices of anarchy with --survey.
    Atlas {
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        alphas: Option<String>,
        /// Comma-separated concept ids; default covers all eight families.
        #[arg(long)]
        concepts: Option<String>,
        /// Graph class: all, connected, or trees.
        #[arg(long, default_value = "connected")]
        class: String,
        /// Survey mode: worst price of anarchy over the stable set of this
        /// concept at size nmax.
        #[arg(long)]
        survey: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for the smallest graph stable under some concepts and
    /// unstable under others.
    Witness {
        /// Concepts that must hold, comma separated.
        #[arg(long, required_unless_present = "ne_vs_ps")]
        stable: Option<String>,
        /// Concepts that must fail, comma separated.
        #[arg(long, required_unless_present = "ne_vs_ps")]
        unstable: Option<String>,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        alphas: Option<String>,
        /// Restrict the search to free trees.
        #[arg(long)]
        trees: bool,
        /// Instead, search for a graph plus edge assignment that is a
        /// unilateral pure Nash equilibrium but not pairwise stable.
        #[arg(long)]
        ne_vs_ps: bool,
    },
    /// Run improving-move dynamics from a starting graph.
    Dynamics {
        #[arg(long)]
        concept: String,
        #[arg(long)]
        alpha: String,
        /// first-improvement or best-improvement.
        #[arg(long, default_value = "first-improvement")]
        policy: String,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        file: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = effective_workers(&cli) {
        // Sweeps merge in deterministic order, so the pool size only
        // affects speed, never output.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn effective_workers(cli: &Cli) -> Option<usize> {
    if let Ok(env) = std::env::var("BNCG_WORKERS") {
        if let Ok(workers) = env.trim().parse::<usize>() {
            if workers > 0 {
                return Some(workers);
            }
        }
    }
    cli.workers
}

fn limits_from(cli: &Cli) -> SearchLimits {
    let mut limits = SearchLimits::default();
    if let Some(v) = cli.bne_cap {
        limits.bne_center_cap = v;
    }
    if let Some(v) = cli.coalition_cap {
        limits.coalition_cap = v;
    }
    if let Some(v) = cli.ne_cap {
        limits.ne_strategy_cap = v;
    }
    if let Some(v) = cli.enum_cap {
        limits.graph_enumeration_cap = v;
    }
    if let Some(v) = cli.tree_cap {
        limits.tree_enumeration_cap = v;
    }
    limits
}

fn parse_alpha(s: &str) -> Result<GameParams> {
    Ok(GameParams::new(parse_scalar(s)?)?)
}

fn parse_alpha_list(s: &str) -> Result<Vec<Scalar>> {
    s.split(',')
        .map(|part| parse_scalar(part.trim()).map_err(Into::into))
        .collect()
}

fn parse_concept_list(s: &str) -> Result<Vec<Concept>> {
    s.split(',')
        .map(|part| part.trim().parse::<Concept>().map_err(Into::into))
        .collect()
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    let limits = limits_from(&cli);
    match cli.command {
        Command::Gen { family, n, d, k, t, eta, arity, output, format } => {
            let family: Family = family.parse()?;
            let spec = ConstructionSpec {
                family,
                n,
                depth: d,
                stretch: k,
                subtree_target: t.as_deref().map(parse_scalar).transpose()?,
                target_size: eta,
                arity,
            };
            let result = construct(&spec)?;
            let format: io::GraphFormat = format.parse()?;
            let conditions: Vec<serde_json::Value> = stability_sufficient_alpha(&result)
                .iter()
                .map(|(concept, cond)| {
                    serde_json::json!({
                        "concept": concept.id(),
                        "condition": cond,
                        "description": bncg_core::construct::condition_description(cond),
                    })
                })
                .collect();
            let meta = serde_json::json!({
                "root": result.root,
                "metadata": result.meta,
                "stability_sufficient_alpha": conditions,
            });
            match &output {
                Some(path) => {
                    fs::write(path, io::render_graph(&result.graph, format)?)
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!("{}", serde_json::to_string_pretty(&meta)?);
                }
                None => {
                    let combined = serde_json::json!({
                        "graph": result.graph,
                        "root": result.root,
                        "metadata": result.meta,
                        "stability_sufficient_alpha": conditions,
                    });
                    println!("{}", serde_json::to_string_pretty(&combined)?);
                }
            }
            Ok(0)
        }
        Command::Check { concept, alpha, owners, file } => {
            let g = io::read_graph(&file)?;
            let params = parse_alpha(&alpha)?;
            let report = run_check(&concept, &g, &params, owners.as_deref(), &limits)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.budget_exhausted { 2 } else { 0 })
        }
        Command::Poa { alpha, file } => {
            let g = io::read_graph(&file)?;
            let params = parse_alpha(&alpha)?;
            let social = social_cost(&g, &params);
            let ratio = poa(&g, &params)?;
            let out = serde_json::json!({
                "n": g.n(),
                "edges": g.edge_count(),
                "fingerprint": g.fingerprint(),
                "alpha": format_scalar(params.alpha()),
                "social_cost": format_scalar(&social.finite),
                "optimum_cost": format_scalar(&social_optimum_cost(g.n(), &params)),
                "poa": format_scalar(&ratio),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(0)
        }
        Command::Verify { suite, nmax, alphas, output } => {
            let alphas = alphas.as_deref().map(parse_alpha_list).transpose()?;
            let outcome = suites::run_suite(&suite, nmax, alphas, &limits)?;
            let mut text = String::from(suites::CSV_HEADER);
            text.push('\n');
            for row in &outcome.rows {
                text.push_str(&row.join(","));
                text.push('\n');
            }
            emit(&output, &text)?;
            eprintln!(
                "suite {}: {} rows, {} failing, {} skipped, {} budget-limited",
                suite,
                outcome.rows.len(),
                outcome.failing,
                outcome.skipped,
                outcome.budget
            );
            Ok(if outcome.budget > 0 {
                2
            } else if outcome.failing > 0 {
                1
            } else {
                0
            })
        }
        Command::Atlas { nmax, alphas, concepts, class, survey, output } => {
            let class: GraphClass = class.parse()?;
            let alphas = alphas.as_deref().map(parse_alpha_list).transpose()?;
            if let Some(survey_concept) = survey {
                let concept: Concept = survey_concept.parse()?;
                let grid = alphas.unwrap_or_else(|| default_alpha_grid(nmax));
                let tree_only = class == GraphClass::Trees;
                let rows = survey_poa(concept, nmax, &grid, tree_only, &limits)?;
                let mut text =
                    String::from("alpha,stable_count,budget_count,max_poa,argmax_fingerprint\n");
                let mut budget = 0u64;
                for row in &rows {
                    budget += row.budget_count;
                    text.push_str(&format!(
                        "{},{},{},{},{}\n",
                        format_scalar(&row.alpha),
                        row.stable_count,
                        row.budget_count,
                        row.max_poa.as_ref().map(format_scalar).unwrap_or_else(|| "-".into()),
                        row.argmax_fingerprint.as_deref().unwrap_or("-"),
                    ));
                }
                emit(&output, &text)?;
                return Ok(if budget > 0 { 2 } else { 0 });
            }
            let concepts = match concepts {
                Some(list) => parse_concept_list(&list)?,
                None => default_concepts(),
            };
            // Deterministic order: size, enumeration order, then the grid.
            let mut items: Vec<(Graph, Scalar)> = Vec::new();
            for n in 1..=nmax {
                let grid = match &alphas {
                    Some(grid) => grid.clone(),
                    None => default_alpha_grid(n),
                };
                for g in bncg_core::atlas::graphs_of_class(n, class, &limits)? {
                    for alpha in &grid {
                        items.push((g.clone(), alpha.clone()));
                    }
                }
            }
            use rayon::prelude::*;
            let rows: Result<Vec<_>> = items
                .par_iter()
                .map(|(g, alpha)| {
                    let params = GameParams::new(alpha.clone())?;
                    Ok(classify_graph(g, &params, &concepts, &limits)?)
                })
                .collect();
            let rows = rows?;
            let ids: Vec<String> = concepts.iter().map(|c| c.id()).collect();
            let mut text = format!("n,alpha,fingerprint,{}\n", ids.join(","));
            let mut budget = false;
            for row in &rows {
                let states: Vec<String> = row
                    .results
                    .iter()
                    .map(|(_, t)| {
                        if *t == TriState::Budget {
                            budget = true;
                        }
                        t.letter().to_string()
                    })
                    .collect();
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    row.n,
                    format_scalar(&row.alpha),
                    row.fingerprint,
                    states.join(",")
                ));
            }
            emit(&output, &text)?;
            Ok(if budget { 2 } else { 0 })
        }
        Command::Witness { stable, unstable, nmax, alphas, trees, ne_vs_ps } => {
            let grid = match alphas {
                Some(list) => parse_alpha_list(&list)?,
                None => default_alpha_grid(nmax),
            };
            if ne_vs_ps {
                let outcome = find_unilateral_ne_not_ps(nmax, &grid, &limits)?;
                println!("{}", serde_json::to_string_pretty(&outcome)?);
                return Ok(match &outcome {
                    NeVsPsOutcome::Found { .. } => 0,
                    NeVsPsOutcome::NotFoundWithinBounds { budget_hits, .. } => {
                        if *budget_hits > 0 {
                            2
                        } else {
                            0
                        }
                    }
                });
            }
            let query = WitnessQuery {
                stable_in: parse_concept_list(&stable.expect("required by clap"))?,
                unstable_in: parse_concept_list(&unstable.expect("required by clap"))?,
                n_max: nmax,
                alphas: grid,
                tree_only: trees,
            };
            let outcome = find_witness(&query, &limits)?;
            println!("{}", serde_json::to_string_pretty(&outcome)?);
            Ok(match &outcome {
                WitnessOutcome::Found { .. } => 0,
                WitnessOutcome::NotFoundWithinBounds { budget_hits, .. } => {
                    if *budget_hits > 0 {
                        2
                    } else {
                        0
                    }
                }
            })
        }
        Command::Dynamics { concept, alpha, policy, max_steps, file } => {
            let g = io::read_graph(&file)?;
            let params = parse_alpha(&alpha)?;
            let concept: Concept = concept.parse()?;
            let policy: Policy = policy.parse()?;
            let run = run_dynamics(&g, &params, concept, policy, max_steps, &limits)?;
            println!("{}", serde_json::to_string_pretty(&run)?);
            Ok(if run.outcome == DynamicsOutcome::BudgetExhausted { 2 } else { 0 })
        }
    }
}

fn run_check(
    concept: &str,
    g: &Graph,
    params: &GameParams,
    owners: Option<&str>,
    limits: &SearchLimits,
) -> Result<StabilityReport> {
    let assignment = || -> Result<EdgeAssignment> {
        match owners {
            Some(csv) => {
                let owners: Vec<usize> = csv
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().context("bad owner id"))
                    .collect::<Result<_>>()?;
                Ok(EdgeAssignment::new(g, owners)?)
            }
            None => Ok(EdgeAssignment::min_endpoints(g)),
        }
    };
    match concept {
        "uni-add" => Ok(check_unilateral_add(g, params)?),
        "uni-re" => Ok(check_unilateral_remove(g, &assignment()?, params)?),
        "uni-ne" => Ok(check_unilateral_ne(g, &assignment()?, params, limits)?),
        bilateral => {
            if owners.is_some() {
                bail!("--owners only applies to uni-re and uni-ne");
            }
            let concept: Concept = bilateral.parse()?;
            Ok(check_stability(concept, g, params, limits)?)
        }
    }
}
