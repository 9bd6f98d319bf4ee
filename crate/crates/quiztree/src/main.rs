use std::io::{self, BufRead, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::json;

use quiztree_cli::bench::{bench_run, to_csv, to_json, to_table, BenchConfig, Source};
use quiztree_cli::server;
use quiztree_cli::session::GameSession;
use quiztree_cli::spec::StrategySpec;
use quiztree_cli::verify::{self, Suite};
use quiztree_core::json::{parse_distribution, tree_to_json};
use quiztree_core::stepper::StepState;
use quiztree_core::strategy::prolixity::{estimate_expected_cost, ProlixityParams};
use quiztree_core::{huffman, Distribution};

#[derive(Parser)]
#[command(name = "quiztree", version, about = "Twenty questions with restricted question sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal (Huffman) tree for a distribution.
    Huffman {
        #[command(flatten)]
        dist: DistArg,
        /// Print the tree as JSON.
        #[arg(long)]
        emit_tree: bool,
    },
    /// Build a strategy's tree and report its cost.
    Strategy {
        #[command(flatten)]
        strategy: StrategyArgs,
        #[command(flatten)]
        dist: DistArg,
        /// Monte Carlo trials (prolixity only): per-element depth estimates.
        #[arg(long)]
        trials: Option<usize>,
        /// Write the tree as JSON to this path (`-` for stdout).
        #[arg(long)]
        emit_tree: Option<PathBuf>,
    },
    /// Redundancy and prolixity over sampled distributions.
    Bench {
        #[command(flatten)]
        strategy: StrategyArgs,
        /// Comma-separated ground set sizes.
        #[arg(long = "n", value_delimiter = ',', default_value = "8,16,64")]
        ns: Vec<usize>,
        /// uniform-simplex, zipf(s), dyadic-random or file:PATH.
        #[arg(long, default_value = "uniform-simplex")]
        family: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Exact checks of the underlying combinatorics and numerics.
    Verify {
        /// A suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Cap on n for the enumeration-based checks.
        #[arg(long)]
        max_n: Option<usize>,
        /// Also write the report as JSON to this path (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Play in the terminal: think of an element and answer y/n.
    Play {
        #[command(flatten)]
        strategy: StrategyArgs,
        #[command(flatten)]
        dist: DistArg,
    },
    /// Serve the HTTP game API.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Allowed CORS origin; repeatable. Any origin when omitted.
        #[arg(long = "allow-origin")]
        allow_origin: Vec<String>,
    },
}

#[derive(Args)]
struct DistArg {
    /// Distribution JSON file, or the JSON itself.
    #[arg(long)]
    dist: String,
}

impl DistArg {
    fn load(&self) -> Result<Distribution> {
        let text = if self.dist.trim_start().starts_with('{') {
            self.dist.clone()
        } else {
            std::fs::read_to_string(&self.dist).with_context(|| format!("reading {}", self.dist))?
        };
        Ok(parse_distribution(&text)?)
    }
}

#[derive(Args)]
struct StrategyArgs {
    /// huffman, at, vector, cone or prolixity.
    #[arg(long, alias = "strategy", default_value = "at")]
    kind: String,
    /// Threshold for `at`, as a rational.
    #[arg(long)]
    t: Option<String>,
    /// Redundancy budget for `vector`.
    #[arg(long)]
    r: Option<f64>,
    /// Precision for `prolixity` (r = 2^-k).
    #[arg(long)]
    k: Option<u32>,
    /// Seed for `prolixity`; for `bench`, the root seed of the run.
    #[arg(long)]
    seed: Option<u64>,
}

impl StrategyArgs {
    fn spec(&self) -> Result<StrategySpec> {
        Ok(StrategySpec::from_parts(&self.kind, self.t.as_deref(), self.r, self.k, self.seed)?)
    }
}

fn write_out(path: &PathBuf, text: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        println!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}

fn cmd_huffman(dist: &Distribution, emit_tree: bool) -> Result<()> {
    let h = huffman(dist);
    println!("n        {}", dist.n());
    println!("entropy  {:.9}", dist.entropy());
    println!("opt      {} ({:.9})", h.opt_cost, h.opt_cost.to_f64().unwrap_or(f64::NAN));
    let depths: Vec<String> = h
        .tree
        .depths()
        .iter()
        .map(|d| d.map_or("-".into(), |d| d.to_string()))
        .collect();
    println!("depths   {}", depths.join(" "));
    if emit_tree {
        println!("{}", serde_json::to_string_pretty(&tree_to_json(&h.tree))?);
    }
    Ok(())
}

fn cmd_strategy(spec: &StrategySpec, dist: &Distribution, trials: Option<usize>, emit: Option<&PathBuf>) -> Result<()> {
    let n = dist.n();
    let tree = spec.build_tree(dist)?;
    let family = spec.family(n)?;
    let report = tree.validate(dist, family.as_deref());
    if !report.is_valid() {
        bail!("{} built an invalid tree: {:?}", spec.label(), report.violations);
    }
    let cost = tree.cost(dist)?;
    let opt = huffman(dist).opt_cost;
    let h = dist.entropy();
    let cost_f = cost.to_f64().unwrap_or(f64::NAN);
    println!("strategy     {}", spec.label());
    println!("family size  {}", spec.family_size(n)?);
    println!("cost         {cost} ({cost_f:.9})");
    println!("entropy      {h:.9}");
    println!("opt          {opt}");
    println!("redundancy   {:.9}", cost_f - h);
    println!("prolixity    {}", &cost - &opt);
    if let Some(trials) = trials {
        let StrategySpec::Prolixity { k, seed } = spec else {
            bail!("--trials only applies to the prolixity strategy");
        };
        let est = estimate_expected_cost(dist, ProlixityParams::new(*k, *seed)?, trials)?;
        let bound = est.opt + est.r + est.r * est.r;
        println!(
            "mean cost    {:.6} ± {:.6} over {} trials (Opt + r + r^2 = {bound:.6})",
            est.mean_cost, est.cost_stderr, est.trials
        );
        println!("{:>8} {:>10} {:>10} {:>10}", "element", "mean", "stderr", "bound");
        for e in &est.per_element {
            println!("{:>8} {:>10.4} {:>10.4} {:>10.4}", e.element.one_based(), e.mean_depth, e.stderr, e.bound);
        }
    }
    if let Some(path) = emit {
        write_out(path, &serde_json::to_string_pretty(&tree_to_json(&tree))?)?;
    }
    Ok(())
}

fn cmd_verify(suite: &str, max_n: Option<usize>, json_out: Option<&PathBuf>) -> Result<bool> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>().map_err(anyhow::Error::msg)?]
    };
    let mut reports = Vec::new();
    for s in suites {
        let r = verify::run(s, max_n);
        println!("{r}");
        reports.push(r);
    }
    let ok = reports.iter().all(|r| r.passed);
    if let Some(path) = json_out {
        write_out(path, &serde_json::to_string_pretty(&json!({ "passed": ok, "suites": reports }))?)?;
    }
    Ok(ok)
}

fn cmd_play(spec: StrategySpec, dist: Distribution) -> Result<()> {
    let mut game = GameSession::new("local".into(), dist, spec).map_err(anyhow::Error::msg)?;
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut out = io::stdout();
    loop {
        match game.state() {
            StepState::Done(e) => {
                println!("It is {e}. ({} questions)", game.asked());
                return Ok(());
            }
            StepState::Ask(q) => {
                write!(out, "{} [y/n] ", q.render())?;
                out.flush()?;
                let Some(line) = lines.next() else {
                    println!();
                    bail!("input ended before the game finished");
                };
                let yes = match line?.trim().to_ascii_lowercase().as_str() {
                    "y" | "yes" => true,
                    "n" | "no" => false,
                    _ => {
                        println!("Please answer y or n.");
                        continue;
                    }
                };
                if let Err(e) = game.answer(yes) {
                    bail!("{e}");
                }
            }
        }
    }
}

async fn cmd_serve(host: IpAddr, port: u16, origins: Vec<String>) -> Result<()> {
    let (addr, serve) = server::bind(SocketAddr::new(host, port), &origins).await?;
    println!("listening on http://{addr}");
    tokio::select! {
        r = serve => r?,
        _ = tokio::signal::ctrl_c() => {}
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Huffman { dist, emit_tree } => cmd_huffman(&dist.load()?, emit_tree)?,
        Command::Strategy {
            strategy,
            dist,
            trials,
            emit_tree,
        } => cmd_strategy(&strategy.spec()?, &dist.load()?, trials, emit_tree.as_ref())?,
        Command::Bench {
            strategy,
            ns,
            family,
            samples,
            csv,
            json,
        } => {
            let config = BenchConfig {
                strategy: strategy.spec()?,
                ns,
                source: family.parse::<Source>()?,
                samples,
                // Per-task seeds for randomized strategies derive from this.
                seed: strategy.seed.unwrap_or(1),
            };
            let rows = bench_run(&config)?;
            let csv_text = to_csv(&rows)?;
            match &csv {
                Some(p) => write_out(p, csv_text.trim_end())?,
                None if json.is_none() => print!("{}", to_table(&rows)),
                None => {}
            }
            if let Some(p) = &json {
                write_out(p, &to_json(&rows))?;
            }
        }
        Command::Verify { suite, max_n, json } => {
            if !cmd_verify(&suite, max_n, json.as_ref())? {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Play { strategy, dist } => cmd_play(strategy.spec()?, dist.load()?)?,
        Command::Serve {
            host,
            port,
            allow_origin,
        } => tokio::runtime::Runtime::new()?.block_on(cmd_serve(host, port, allow_origin))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
