//! Single binary exposing the library for batch use and experiments.
//!
//! All output is byte-deterministic for fixed arguments and input. Exit
//! codes: 0 on success, 1 on domain errors (validation failures, infeasible
//! parameters, guarded searches), 2 on usage errors.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::json;

use phylonet::families::{count_for_decomposition, enumerate_for_decomposition};
use phylonet::formats::{
    export_dot, format_decomposition, parse_network_with, write_network,
};
use phylonet::network::{PhyloNetwork, ValidationMode};
use phylonet::optimize::{min_level_exact, min_level_heuristic, min_tier, LevelResult, SearchLimit};
use phylonet::oracle::{
    brute_force_family, brute_force_min_level, definitional_crosscheck, OracleConfig,
};
use phylonet::randgen::{random_network, GenParams};
use phylonet::subgraph::EdgeSelection;
use phylonet::zigzag::decompose;
use phylonet::FamilyKind;

#[derive(Parser)]
#[command(
    name = "phylonet",
    version,
    about = "Zig-zag trail decomposition and support-network analysis for rooted binary phylogenetic networks"
)]
struct Cli {
    /// Input network file, or `-` for stdin.
    #[arg(long, global = true, default_value = "-")]
    input: String,

    /// Emit machine-readable JSON mirroring the text output.
    #[arg(long, global = true)]
    json: bool,

    /// Accept almost-binary networks (passthrough vertices allowed).
    #[arg(long, global = true)]
    almost_binary: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Trees,
    All,
    Minimal,
    Minimum,
}

impl From<FamilyArg> for FamilyKind {
    fn from(f: FamilyArg) -> FamilyKind {
        match f {
            FamilyArg::Trees => FamilyKind::Trees,
            FamilyArg::All => FamilyKind::All,
            FamilyArg::Minimal => FamilyKind::Minimal,
            FamilyArg::Minimum => FamilyKind::Minimum,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Counts,
    MinLevel,
    Lemma1,
}

#[derive(Subcommand)]
enum Command {
    /// Check the network axioms and report every violation.
    Validate,
    /// Print the maximal zig-zag trail decomposition.
    Decompose,
    /// Count a support family exactly.
    Count {
        #[arg(long, value_enum)]
        family: FamilyArg,
    },
    /// List a support family, one selection per line.
    List {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Stop after this many selections.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Find a support network with the fewest reticulations.
    MinTier,
    /// Find a support network of minimum level.
    MinLevel {
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Refuse searches larger than this many candidates.
        #[arg(long, default_value_t = 100_000_000)]
        max_space: u64,
    },
    /// Generate a seeded random network.
    Generate {
        /// Leaf count.
        #[arg(short)]
        n: usize,
        /// Reticulation count.
        #[arg(short)]
        r: usize,
        #[arg(long)]
        seed: u64,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cross-check the fast algorithms against brute force.
    Oracle {
        #[arg(long, value_enum)]
        check: CheckArg,
        /// Edge-count cap for exhaustive enumeration.
        #[arg(long, default_value_t = 24)]
        cap: usize,
    },
    /// Render the network in DOT.
    ExportDot {
        /// Comma-separated edge indices to draw as selected.
        #[arg(long)]
        selection: Option<String>,
        /// Color edges by trail.
        #[arg(long)]
        trails: bool,
    },
    /// Batch counts and level optimizations over generated networks, as CSV.
    Experiment {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Fixed reticulation range; without it r = 2(n-1).
        #[arg(long)]
        r_min: Option<usize>,
        #[arg(long)]
        r_max: Option<usize>,
        /// Seeds per (n, r) cell: base_seed..base_seed+seeds.
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        base_seed: u64,
        /// Candidate cap above which level searches are skipped.
        #[arg(long, default_value_t = 1_000_000)]
        max_space: u64,
        /// Skip the level optimizations entirely.
        #[arg(long)]
        counts_only: bool,
        /// Write the CSV to a file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    }
}

fn load_network(cli: &Cli) -> Result<PhyloNetwork, String> {
    let text = read_input(&cli.input)?;
    let mode = if cli.almost_binary {
        ValidationMode::AlmostBinary
    } else {
        ValidationMode::Strict
    };
    parse_network_with(&text, mode).map_err(|e| e.to_string())
}

fn selection_indices(sel: &EdgeSelection) -> Vec<usize> {
    sel.indices()
}

fn print_level_result(json_mode: bool, method: &str, result: &LevelResult) {
    if json_mode {
        let blocks: Vec<_> = result
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "edges": b.edges,
                    "reticulations": b.reticulation_count(),
                })
            })
            .collect();
        println!(
            "{}",
            json!({
                "level": result.level,
                "method": method,
                "optimal": result.optimal,
                "selection": selection_indices(&result.selection),
                "blocks": blocks,
            })
        );
    } else {
        println!(
            "level={} method={} optimal={}",
            result.level, method, result.optimal
        );
        println!("selection: {}", result.selection);
        for (i, b) in result.blocks.iter().enumerate() {
            let edges: Vec<String> = b.edges.iter().map(|e| format!("e{e}")).collect();
            println!(
                "block {}: r={} edges: {}",
                i,
                b.reticulation_count(),
                edges.join(" ")
            );
        }
    }
}

fn run(cli: &Cli) -> Result<(), String> {
    match &cli.command {
        Command::Validate => {
            let text = read_input(&cli.input)?;
            let mode = if cli.almost_binary {
                ValidationMode::AlmostBinary
            } else {
                ValidationMode::Strict
            };
            match parse_network_with(&text, mode) {
                Ok(net) => {
                    if cli.json {
                        println!(
                            "{}",
                            json!({
                                "valid": true,
                                "vertices": net.vertex_count(),
                                "edges": net.edge_count(),
                                "leaves": net.leaf_labels().len(),
                                "tier": net.tier().value(),
                            })
                        );
                    } else {
                        println!(
                            "ok: {} vertices, {} edges, {} leaves, tier {}",
                            net.vertex_count(),
                            net.edge_count(),
                            net.leaf_labels().len(),
                            net.tier().value()
                        );
                    }
                    Ok(())
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Decompose => {
            let net = load_network(cli)?;
            let d = decompose(&net);
            if cli.json {
                let trails: Vec<_> = d
                    .trails()
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        json!({
                            "id": i + 1,
                            "type": t.trail_type().to_string(),
                            "size": t.len(),
                            "edges": t.edges(),
                        })
                    })
                    .collect();
                println!("{}", json!({ "trails": trails }));
            } else {
                print!("{}", format_decomposition(&d));
            }
            Ok(())
        }
        Command::Count { family } => {
            let net = load_network(cli)?;
            let count = phylonet::count_family(&net, (*family).into());
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "family": FamilyKind::from(*family).name(),
                        "count": count.to_string(),
                    })
                );
            } else {
                println!("{count}");
            }
            Ok(())
        }
        Command::List { family, limit } => {
            let net = load_network(cli)?;
            let d = decompose(&net);
            let stream = enumerate_for_decomposition(&net, d, (*family).into(), *limit)
                .map_err(|e| e.to_string())?;
            if cli.json {
                let mut selections = Vec::new();
                for sel in stream {
                    selections.push(selection_indices(&sel));
                }
                println!(
                    "{}",
                    json!({
                        "family": FamilyKind::from(*family).name(),
                        "selections": selections,
                        "emitted": selections.len(),
                    })
                );
            } else {
                let mut emitted = 0u64;
                for sel in stream {
                    println!("{sel}");
                    emitted += 1;
                }
                println!("# emitted {emitted}");
            }
            Ok(())
        }
        Command::MinTier => {
            let net = load_network(cli)?;
            let (sel, rstar) = min_tier(&net);
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "rstar": rstar,
                        "selection": selection_indices(&sel),
                    })
                );
            } else {
                println!("r*={rstar}");
                println!("selection: {sel}");
            }
            Ok(())
        }
        Command::MinLevel { method, max_space } => {
            let net = load_network(cli)?;
            let limit = SearchLimit {
                max_candidates: *max_space,
            };
            let (name, result) = match method {
                MethodArg::Exact => ("exact", min_level_exact(&net, &limit)),
                MethodArg::Heuristic => ("heuristic", min_level_heuristic(&net, &limit)),
            };
            let result = result.map_err(|e| e.to_string())?;
            print_level_result(cli.json, name, &result);
            Ok(())
        }
        Command::Generate { n, r, seed, output } => {
            let net = random_network(&GenParams {
                n: *n,
                r: *r,
                seed: *seed,
            })
            .map_err(|e| e.to_string())?;
            let text = write_network(&net);
            match output {
                Some(path) => {
                    fs::write(path, &text).map_err(|e| format!("cannot write {path:?}: {e}"))?;
                    if cli.json {
                        println!("{}", json!({ "path": path.display().to_string() }));
                    }
                }
                None => {
                    if cli.json {
                        println!("{}", json!({ "network": text }));
                    } else {
                        print!("{text}");
                    }
                }
            }
            Ok(())
        }
        Command::Oracle { check, cap } => {
            let net = load_network(cli)?;
            let cfg = OracleConfig { max_edges: *cap };
            run_oracle(cli, &net, *check, &cfg)
        }
        Command::ExportDot { selection, trails } => {
            let net = load_network(cli)?;
            let sel = match selection {
                Some(spec) => {
                    let mut indices = Vec::new();
                    for part in spec.split(|c: char| c == ',' || c.is_whitespace()) {
                        if part.is_empty() {
                            continue;
                        }
                        let i: usize = part
                            .parse()
                            .map_err(|_| format!("bad edge index `{part}`"))?;
                        if i >= net.edge_count() {
                            return Err(format!("edge index {i} out of range"));
                        }
                        indices.push(i);
                    }
                    Some(EdgeSelection::from_indices(net.edge_count(), &indices))
                }
                None => None,
            };
            let d = trails.then(|| decompose(&net));
            let dot = export_dot(&net, sel.as_ref(), d.as_ref());
            if cli.json {
                println!("{}", json!({ "dot": dot }));
            } else {
                print!("{dot}");
            }
            Ok(())
        }
        Command::Experiment {
            n_min,
            n_max,
            r_min,
            r_max,
            seeds,
            base_seed,
            max_space,
            counts_only,
            output,
        } => run_experiment(
            cli,
            *n_min,
            *n_max,
            *r_min,
            *r_max,
            *seeds,
            *base_seed,
            *max_space,
            *counts_only,
            output.as_deref(),
        ),
    }
}

fn run_oracle(
    cli: &Cli,
    net: &PhyloNetwork,
    check: CheckArg,
    cfg: &OracleConfig,
) -> Result<(), String> {
    match check {
        CheckArg::Counts => {
            let d = decompose(net);
            let mut rows = Vec::new();
            let mut all_pass = true;
            for family in FamilyKind::EACH {
                let brute = brute_force_family(net, family, cfg)
                    .map_err(|e| e.to_string())?
                    .len();
                let formula = count_for_decomposition(&d, family);
                let pass = formula == phylonet::FamilyCount::from(brute);
                all_pass &= pass;
                rows.push((family.name(), brute, formula.to_string(), pass));
            }
            if cli.json {
                let items: Vec<_> = rows
                    .iter()
                    .map(|(name, brute, formula, pass)| {
                        json!({
                            "family": name,
                            "brute_force": brute,
                            "formula": formula,
                            "pass": pass,
                        })
                    })
                    .collect();
                println!("{}", json!({ "check": "counts", "pass": all_pass, "families": items }));
            } else {
                for (name, brute, formula, pass) in &rows {
                    println!(
                        "{name}: brute={brute} formula={formula} {}",
                        if *pass { "PASS" } else { "FAIL" }
                    );
                }
            }
            if all_pass {
                Ok(())
            } else {
                Err("count cross-check failed".to_string())
            }
        }
        CheckArg::MinLevel => {
            let (brute_level, _) = brute_force_min_level(net, cfg).map_err(|e| e.to_string())?;
            let exact = min_level_exact(net, &SearchLimit::default()).map_err(|e| e.to_string())?;
            let pass = brute_level == exact.level;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "check": "min-level",
                        "brute_force": brute_level,
                        "exact": exact.level,
                        "pass": pass,
                    })
                );
            } else {
                println!(
                    "min-level: brute={brute_level} exact={} {}",
                    exact.level,
                    if pass { "PASS" } else { "FAIL" }
                );
            }
            if pass {
                Ok(())
            } else {
                Err("min-level cross-check failed".to_string())
            }
        }
        CheckArg::Lemma1 => {
            let report = definitional_crosscheck(net, cfg).map_err(|e| e.to_string())?;
            let pass = report.mismatches == 0;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "check": "lemma1",
                        "subsets": report.subsets_checked,
                        "mismatches": report.mismatches,
                        "parallel_edge_cases": report.parallel_edge_cases,
                        "pass": pass,
                    })
                );
            } else {
                println!(
                    "lemma1: subsets={} mismatches={} parallel_edge_cases={} {}",
                    report.subsets_checked,
                    report.mismatches,
                    report.parallel_edge_cases,
                    if pass { "PASS" } else { "FAIL" }
                );
            }
            if pass {
                Ok(())
            } else {
                Err("definitional cross-check failed".to_string())
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_experiment(
    cli: &Cli,
    n_min: usize,
    n_max: usize,
    r_min: Option<usize>,
    r_max: Option<usize>,
    seeds: u64,
    base_seed: u64,
    max_space: u64,
    counts_only: bool,
    output: Option<&std::path::Path>,
) -> Result<(), String> {
    let limit = SearchLimit {
        max_candidates: max_space,
    };
    let mut csv = String::from("n,r,seed,countA,countB,countC,rstar,level_exact,level_heur,exact_ms,heur_ms\n");
    let mut rows_json = Vec::new();
    for n in n_min..=n_max {
        let r_range = match (r_min, r_max) {
            (Some(lo), Some(hi)) => lo..=hi,
            (Some(lo), None) => lo..=lo,
            (None, Some(hi)) => hi..=hi,
            (None, None) => {
                let r = 2 * (n - 1);
                r..=r
            }
        };
        for r in r_range {
            for seed in base_seed..base_seed + seeds {
                let net = random_network(&GenParams { n, r, seed }).map_err(|e| e.to_string())?;
                let d = decompose(&net);
                let count_a = count_for_decomposition(&d, FamilyKind::All);
                let count_b = count_for_decomposition(&d, FamilyKind::Minimal);
                let count_c = count_for_decomposition(&d, FamilyKind::Minimum);
                let rstar = d.w_fence_count();
                let (mut exact_cell, mut heur_cell) = (String::from("NA"), String::from("NA"));
                let (mut exact_ms, mut heur_ms) = (String::from("NA"), String::from("NA"));
                let mut exact_level_json = None;
                let mut heur_level_json = None;
                if !counts_only {
                    if count_b.to_u64().is_some_and(|c| c <= limit.max_candidates) {
                        let t0 = Instant::now();
                        let exact = min_level_exact(&net, &limit).map_err(|e| e.to_string())?;
                        exact_ms = format!("{:.3}", t0.elapsed().as_secs_f64() * 1e3);
                        exact_cell = exact.level.to_string();
                        exact_level_json = Some(exact.level);
                    }
                    if count_c.to_u64().is_some_and(|c| c <= limit.max_candidates) {
                        let t0 = Instant::now();
                        let heur = min_level_heuristic(&net, &limit).map_err(|e| e.to_string())?;
                        heur_ms = format!("{:.3}", t0.elapsed().as_secs_f64() * 1e3);
                        heur_cell = heur.level.to_string();
                        heur_level_json = Some(heur.level);
                    }
                }
                csv.push_str(&format!(
                    "{n},{r},{seed},{count_a},{count_b},{count_c},{rstar},{exact_cell},{heur_cell},{exact_ms},{heur_ms}\n"
                ));
                if cli.json {
                    rows_json.push(json!({
                        "n": n,
                        "r": r,
                        "seed": seed,
                        "countA": count_a.to_string(),
                        "countB": count_b.to_string(),
                        "countC": count_c.to_string(),
                        "rstar": rstar,
                        "level_exact": exact_level_json,
                        "level_heur": heur_level_json,
                    }));
                }
            }
        }
    }
    match output {
        Some(path) => {
            fs::write(path, &csv).map_err(|e| format!("cannot write {path:?}: {e}"))?;
            if cli.json {
                println!("{}", json!({ "path": path.display().to_string(), "rows": rows_json }));
            }
        }
        None => {
            if cli.json {
                println!("{}", json!({ "rows": rows_json }));
            } else {
                print!("{csv}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // Die quietly when the read end of a pipe goes away (e.g. `| head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
