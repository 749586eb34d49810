//! Command-line front end. Every subcommand prints one JSON document (or CSV
//! where offered) tagged with the schema version and the parameters used.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::assembler;
use crate::error::{precondition, Error, Result};
use crate::factor::{complement_two_factor, parse_arcs, two_factorize_even, OrientedTwoFactor};
use crate::generate::{self, GraphKind};
use crate::graph::Graph;
use crate::matching::maximum_matching;
use crate::meanfield::mean_field_process;
use crate::ode::verify_even_bound;
use crate::recurrence::{parse_rational, pq_table, to_f64, verify_limit_convergence};
use crate::sampler::{ConflictType, Sampler};
use crate::sparse::{decompose, verify_sparse, ConstraintGraph, SparseParams};

pub const SCHEMA: &str = "frac-total/1";

#[derive(Debug, Parser)]
#[command(name = "frac-total", version, about = "Full total independent sets and fractional total colourings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Level table p(i), q(i) as exact rationals.
    Recurrence {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1")]
        xi: String,
        #[arg(long, default_value_t = 3)]
        delta: usize,
        /// Comma-separated k values for the limit check of p*.
        #[arg(long, value_delimiter = ',')]
        limit: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Even-degree limit ODE and its bound at x = 1.
    Ode {
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Split E(F) into 3l sparse boundary sets.
    Decompose {
        #[command(flatten)]
        input: FactorInput,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        seed: u64,
        /// Directory receiving one boundary file per set and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the sampler on one boundary set.
    Sample {
        #[command(flatten)]
        input: FactorInput,
        #[arg(long)]
        boundary: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Include per-element frequencies.
        #[arg(long)]
        elements: bool,
    },
    /// Weights averaged over a decomposition of one 2-factor.
    Weights {
        #[command(flatten)]
        input: FactorInput,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Full assembly over a uniform perfect-matching cover.
    Assemble {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 100_000)]
        matching_cap: usize,
    },
    /// Exact fractional total chromatic number.
    Chift {
        #[arg(long)]
        graph: PathBuf,
        /// Ordinary fractional chromatic number instead.
        #[arg(long)]
        vertex: bool,
    },
    /// Uniform perfect-matching cover of a cubic bridgeless graph.
    Cover {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Write a test graph.
    Gen {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        girth: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check one boundary set for sparseness.
    Verify {
        #[command(flatten)]
        input: FactorInput,
        #[arg(long)]
        boundary: PathBuf,
        #[arg(long)]
        ell: usize,
    },
    /// Mean-field estimate of the level table.
    Meanfield {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1")]
        xi: String,
        #[arg(long, default_value_t = 3)]
        delta: usize,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Petersen,
    Prism,
    GeneralizedPetersen,
    Cycle,
    Complete,
    Bipartite,
    RandomCubic,
}

#[derive(Debug, Args)]
pub struct FactorInput {
    #[arg(long)]
    graph: PathBuf,
    /// Oriented 2-factor; derived from the graph when omitted.
    #[arg(long)]
    factor: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "1")]
    xi: String,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
}

/// Result of one invocation: text for stdout and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (program name first) and run.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if status == 0 {
                Outcome { status, stdout: text, stderr: String::new() }
            } else {
                Outcome { status, stdout: String::new(), stderr: text }
            };
        }
    };
    match run(&cli.command) {
        Ok(stdout) => Outcome { status: 0, stdout, stderr: String::new() },
        Err(e) => Outcome {
            status: if e.is_internal() { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read(path)?)
}

/// The 2-factor from file, or the complement of a perfect matching for cubic
/// graphs, or the first factor of a 2-factorization for even-regular ones.
fn load_factor(g: &Graph, path: Option<&Path>) -> Result<OrientedTwoFactor> {
    if let Some(p) = path {
        return OrientedTwoFactor::parse(g, &read(p)?);
    }
    if g.is_cubic() {
        let m = maximum_matching(g);
        if !m.perfect {
            return precondition("cubic graph has no perfect matching");
        }
        return complement_two_factor(g, &m);
    }
    match g.regular_degree() {
        Some(d) if d >= 2 && d % 2 == 0 => Ok(two_factorize_even(g)?.remove(0)),
        _ => precondition("no factor given and the graph is neither cubic nor even-regular"),
    }
}

fn load_boundary(g: &Graph, path: &Path) -> Result<Vec<usize>> {
    parse_arcs(&read(path)?)?
        .into_iter()
        .map(|(u, v)| {
            g.edge_id(u, v)
                .ok_or_else(|| Error::Precondition(format!("{}-{} is not an edge", u + 1, v + 1)))
        })
        .collect()
}

fn boundary_text(g: &Graph, f: &OrientedTwoFactor, edges: &[usize]) -> String {
    let mut s = format!("p {} {}\n", g.n(), edges.len());
    for &e in edges {
        let tail = f.tail(g, e);
        s.push_str(&format!("e {} {}\n", tail + 1, f.succ(tail) + 1));
    }
    s
}

fn envelope(command: &str, params: Value, result: Value) -> String {
    let doc = json!({
        "schema": SCHEMA,
        "command": command,
        "params": params,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
    s.push('\n');
    s
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn fraction(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return precondition("--trials must be positive");
    }
    Ok(())
}

pub fn run(cmd: &Command) -> Result<String> {
    match cmd {
        Command::Recurrence { k, xi, delta, limit, format } => {
            let xi_r = parse_rational(xi)?;
            let table = pq_table(*k, &xi_r, *delta)?;
            if *format == Format::Csv {
                let mut s = String::from("i,p,q,q_tilde\n");
                for i in 0..table.k {
                    s.push_str(&format!(
                        "{},{},{},{}\n",
                        i + 1,
                        fraction(&table.p[i]),
                        fraction(&table.q[i]),
                        fraction(&table.q_tilde[i])
                    ));
                }
                return Ok(s);
            }
            let rows: Vec<Value> = (0..table.k)
                .map(|i| {
                    json!({
                        "i": i + 1,
                        "p": fraction(&table.p[i]),
                        "q": fraction(&table.q[i]),
                        "q_tilde": fraction(&table.q_tilde[i]),
                    })
                })
                .collect();
            let p_star = table.p_star();
            let q_star = table.q_star();
            let mut result = json!({
                "exact": table.exact,
                "rows": rows,
                "p_star": fraction(&p_star),
                "q_star": fraction(&q_star),
                "p_star_f64": to_f64(&p_star),
                "q_star_f64": to_f64(&q_star),
            });
            if *delta == 3 {
                result["conflict_iiib"] = json!(table.conflict_iiib());
            }
            if !limit.is_empty() {
                result["limit"] = to_json(&verify_limit_convergence(limit, 1e-3)?);
            }
            Ok(envelope(
                "recurrence",
                json!({"k": k, "xi": fraction(&xi_r), "delta": delta}),
                result,
            ))
        }
        Command::Ode { delta, step, format } => {
            let v = verify_even_bound(*delta, *step)?;
            if *format == Format::Csv {
                let sol = crate::ode::integrate_even_ode(*delta, *step)?;
                let mut s = String::from("x,F,Q\n");
                for i in 0..sol.x.len() {
                    s.push_str(&format!("{},{},{}\n", sol.x[i], sol.f[i], sol.q[i]));
                }
                return Ok(s);
            }
            Ok(envelope("ode", json!({"delta": delta, "step": step}), to_json(&v)))
        }
        Command::Decompose { input, ell, strict, seed, out } => {
            let g = load_graph(&input.graph)?;
            let f = load_factor(&g, input.factor.as_deref())?;
            let params = SparseParams { ell: *ell, strict: *strict };
            let dec = decompose(&g, &f, params, &ConstraintGraph::empty(), *seed)?;
            let report = envelope(
                "decompose",
                json!({"ell": ell, "strict": strict, "seed": seed}),
                to_json(&dec),
            );
            if let Some(dir) = out {
                fs::create_dir_all(dir)?;
                for set in &dec.sets {
                    let name = format!("boundary_{}_{}.txt", set.r + 1, set.t);
                    fs::write(dir.join(name), boundary_text(&g, &f, &set.edges))?;
                }
                fs::write(dir.join("factor.txt"), f.to_text())?;
                fs::write(dir.join("report.json"), &report)?;
            }
            Ok(report)
        }
        Command::Sample { input, boundary, run, elements } => {
            check_trials(run.trials)?;
            let g = load_graph(&input.graph)?;
            let f = load_factor(&g, input.factor.as_deref())?;
            let b = load_boundary(&g, boundary)?;
            let xi = parse_rational(&run.xi)?;
            let sampler = Sampler::new(&g, &f, &b, run.k, &xi)?;
            let stats = sampler.run_trials(run.trials, run.seed)?;
            let totals = stats.type_totals();
            let per_type: serde_json::Map<String, Value> = ConflictType::ALL
                .iter()
                .map(|t| (t.name().to_string(), json!(totals[t.index()])))
                .collect();
            let mut result = json!({
                "violations": stats.violations.total(),
                "violation_detail": to_json(&stats.violations),
                "bad_samples": stats.bad_samples,
                "conflicts": per_type,
                "overlapping_elements": sampler.overlapping_elements(),
            });
            if *elements {
                let freq: Vec<Value> = (0..g.total_len())
                    .map(|x| {
                        json!({
                            "element": g.element_at(x).to_string(),
                            "hits": stats.element_hits[x],
                            "type": sampler.classify_type(x).ok().flatten(),
                        })
                    })
                    .collect();
                result["elements"] = Value::Array(freq);
            }
            Ok(envelope(
                "sample",
                json!({"k": run.k, "xi": fraction(&xi), "trials": run.trials, "seed": run.seed}),
                result,
            ))
        }
        Command::Weights { input, ell, strict, run } => {
            check_trials(run.trials)?;
            let g = load_graph(&input.graph)?;
            let f = load_factor(&g, input.factor.as_deref())?;
            let xi = parse_rational(&run.xi)?;
            let params = SparseParams { ell: *ell, strict: *strict };
            let w = assembler::average_over_decomposition(
                &g,
                &f,
                run.k,
                &xi,
                params,
                &ConstraintGraph::empty(),
                run.trials,
                run.seed,
            )?;
            let mut result = to_json(&w);
            // per-element hit counts are bulky and rebuilt from the sets
            result["mixture"]
                .as_object_mut()
                .expect("mixture is an object")
                .remove("hits");
            Ok(envelope(
                "weights",
                json!({"k": run.k, "xi": fraction(&xi), "ell": ell, "trials": run.trials, "seed": run.seed}),
                result,
            ))
        }
        Command::Assemble { graph, ell, run, matching_cap } => {
            check_trials(run.trials)?;
            let g = load_graph(graph)?;
            let xi = parse_rational(&run.xi)?;
            let params = SparseParams { ell: *ell, strict: false };
            let (cover, _, report) =
                assembler::assemble(&g, run.k, &xi, params, run.trials, run.seed, *matching_cap)?;
            Ok(envelope(
                "assemble",
                json!({"k": run.k, "xi": fraction(&xi), "ell": ell, "trials": run.trials, "seed": run.seed}),
                json!({
                    "cover": {"n": cover.n_cover, "matchings": cover.matchings.len()},
                    "report": to_json(&report),
                }),
            ))
        }
        Command::Chift { graph, vertex } => {
            let g = load_graph(graph)?;
            let sol = if *vertex {
                assembler::fractional_chromatic(&g)?
            } else {
                assembler::fractional_total_chromatic(&g)?
            };
            let mut result = to_json(&sol);
            result["value"] = json!(fraction(&sol.value));
            result["value_f64"] = json!(to_f64(&sol.value));
            Ok(envelope("chift", json!({"vertex": vertex}), result))
        }
        Command::Cover { graph, cap } => {
            let g = load_graph(graph)?;
            let cover = assembler::uniform_pm_cover(&g, *cap)?;
            let listing: Vec<Value> = cover
                .matchings
                .iter()
                .zip(&cover.multiplicities)
                .map(|(m, mult)| {
                    let edges: Vec<String> = m
                        .edges
                        .iter()
                        .map(|&e| {
                            let (a, b) = g.edge(e);
                            format!("{}-{}", a + 1, b + 1)
                        })
                        .collect();
                    json!({"multiplicity": mult, "edges": edges})
                })
                .collect();
            Ok(envelope(
                "cover",
                json!({"cap": cap}),
                json!({
                    "n": cover.n_cover,
                    "total": cover.total(),
                    "enumerated": cover.enumerated,
                    "matchings": listing,
                }),
            ))
        }
        Command::Gen { family, n, k, girth, seed, budget, out } => {
            let need = |v: Option<usize>, name: &str| {
                v.ok_or_else(|| Error::Precondition(format!("--{name} is required for this family")))
            };
            let g = match family {
                Family::Petersen => generate::petersen(),
                Family::Prism => generate::generate(GraphKind::Prism { n: need(*n, "n")? })?,
                Family::GeneralizedPetersen => generate::generate(GraphKind::GeneralizedPetersen {
                    n: need(*n, "n")?,
                    k: need(*k, "k")?,
                })?,
                Family::Cycle => generate::generate(GraphKind::Cycle { n: need(*n, "n")? })?,
                Family::Complete => generate::generate(GraphKind::Complete { n: need(*n, "n")? })?,
                Family::Bipartite => generate::generate(GraphKind::CompleteBipartite {
                    a: need(*n, "n")?,
                    b: need(*k, "k")?,
                })?,
                Family::RandomCubic => generate::generate(GraphKind::RandomCubicGirth {
                    n: need(*n, "n")?,
                    min_girth: girth.unwrap_or(3),
                    seed: *seed,
                    budget: *budget,
                })?,
            };
            let text = g.to_text();
            match out {
                Some(path) => {
                    fs::write(path, &text)?;
                    Ok(envelope(
                        "gen",
                        json!({"seed": seed}),
                        json!({"n": g.n(), "m": g.m(), "girth": g.girth(), "path": path.display().to_string()}),
                    ))
                }
                None => Ok(text),
            }
        }
        Command::Verify { input, boundary, ell } => {
            let g = load_graph(&input.graph)?;
            let f = load_factor(&g, input.factor.as_deref())?;
            let b = load_boundary(&g, boundary)?;
            let rep = verify_sparse(&g, &f, &b, *ell, &ConstraintGraph::empty());
            Ok(envelope("verify", json!({"ell": ell}), to_json(&rep)))
        }
        Command::Meanfield { k, xi, delta, length, trials, seed } => {
            let xi_r = parse_rational(xi)?;
            let length = length.unwrap_or(10 * k);
            let rep = mean_field_process(*k, &xi_r, *delta, length, *trials, *seed)?;
            Ok(envelope(
                "meanfield",
                json!({"k": k, "xi": fraction(&xi_r), "delta": delta, "length": length, "trials": trials, "seed": seed}),
                to_json(&rep),
            ))
        }
    }
}
