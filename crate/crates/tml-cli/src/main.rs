//! `tml` checks duplex transfinite modal logic formulas against
//! cardinal-weighted Kripke models, and runs the model transforms.

use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use tml::catalog;
use tml::checker;
use tml::logic::Formula;
use tml::model::KripkeModel;
use tml::oracle::laws;
use tml::transforms;

#[derive(Parser)]
#[command(name = "tml", version, about = "Model checker for transfinite modal logic over cardinal-weighted Kripke models", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a model, printing per-world verdicts
    Check {
        /// Model file path, or a built-in example name like `ex_sim` or `ex_det(1,0)`
        #[arg(long)]
        model: String,
        /// Formula text, e.g. `[2]p & ~[][]p`
        #[arg(long)]
        formula: String,
        /// Report only this world (default: all worlds, exit code from the root)
        #[arg(long)]
        world: Option<String>,
        /// Append a rank trace for every `[2]` evaluation
        #[arg(long)]
        explain: bool,
        /// Use the extended (next-round) variant of `ex_det`
        #[arg(long)]
        extended: bool,
    },
    /// Parse a formula and print its canonical form and degree
    Parse {
        #[arg(long)]
        formula: String,
    },
    /// Unravel a pointed model into a tree of bounded depth
    Unravel {
        #[arg(long)]
        model: String,
        /// Start world (default: the model root)
        #[arg(long)]
        world: Option<String>,
        /// Maximum walk length
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        extended: bool,
    },
    /// Compress a tree model to finite aleph levels
    Compress {
        #[arg(long)]
        model: String,
        #[arg(long)]
        world: Option<String>,
        /// Formula degree bound to preserve
        #[arg(long)]
        degree: u32,
        /// Base index (must be at least the computed floor)
        #[arg(long)]
        index: u32,
        /// Print the compression plan to stderr
        #[arg(long)]
        explain: bool,
        #[arg(long)]
        extended: bool,
    },
    /// Check two pointed models for bounded modal equivalence
    Equiv {
        /// Exactly two models (repeat the flag)
        #[arg(long = "model", num_args = 1, action = clap::ArgAction::Append)]
        models: Vec<String>,
        /// Worlds for the two models (repeat; default: each model's root)
        #[arg(long = "world", num_args = 1, action = clap::ArgAction::Append)]
        worlds: Vec<String>,
        /// Equivalence depth k
        #[arg(long)]
        degree: u32,
        /// The two logarithm base indices alpha and beta (repeat)
        #[arg(long = "index", num_args = 1, action = clap::ArgAction::Append)]
        indices: Vec<u8>,
        /// Formula size bound for the enumeration
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        extended: bool,
    },
    /// List the built-in example models, or print one as a document
    Examples {
        name: Option<String>,
        #[arg(long)]
        extended: bool,
    },
    /// Run the built-in verification suites
    Selftest {
        /// Suite to run: `ordinal` or `all` (default)
        suite: Option<String>,
        /// Random seed for the generated instances
        #[arg(long, default_value_t = 0xD7)]
        seed: u64,
        /// Instances per law (agreement runs 10x this)
        #[arg(long, default_value_t = 1000)]
        instances: usize,
    },
}

fn load_model(spec: &str, extended: bool) -> Result<KripkeModel> {
    if spec.starts_with("ex_") {
        if let Some(m) = catalog::resolve(spec, extended)? {
            return Ok(m);
        }
        bail!(
            "unknown example `{spec}`; available: {}",
            catalog::names().join(", ")
        );
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading model file `{spec}`"))?;
    Ok(KripkeModel::from_document(&text)?)
}

fn designated_world<'m>(m: &'m KripkeModel, requested: &Option<String>) -> Result<&'m str> {
    match requested {
        Some(id) => m
            .world_index(id)
            .map(|i| m.world_id(i))
            .ok_or_else(|| anyhow!("unknown world id `{id}`")),
        None => m
            .root()
            .map(|r| m.world_id(r))
            .ok_or_else(|| anyhow!("model has no designated root; pass --world")),
    }
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check {
            model,
            formula,
            world,
            explain,
            extended,
        } => {
            let m = load_model(&model, extended)?;
            let f = Formula::parse(&formula)?;
            let target = designated_world(&m, &world)?.to_owned();
            let evaluation = checker::evaluate(&m, &f)?;
            if let Some(requested) = &world {
                let index = m.world_index(requested).expect("validated above");
                println!("{requested}: {}", evaluation.truth[index]);
            } else {
                for (index, id) in m.world_ids().enumerate() {
                    println!("{id}: {}", evaluation.truth[index]);
                }
            }
            if explain {
                for trace in &evaluation.traces {
                    print!("{}", trace.render());
                }
            }
            let target_index = m.world_index(&target).expect("validated above");
            Ok(if evaluation.truth[target_index] { 0 } else { 2 })
        }
        Command::Parse { formula } => {
            let f = Formula::parse(&formula)?;
            println!("formula: {f}");
            println!("degree: {}", f.degree());
            println!("size: {}", f.size());
            Ok(0)
        }
        Command::Unravel {
            model,
            world,
            depth,
            extended,
        } => {
            let m = load_model(&model, extended)?;
            let start = designated_world(&m, &world)?.to_owned();
            let tree = transforms::unravel(&m, &start, depth)?;
            println!("{}", tree.to_document());
            Ok(0)
        }
        Command::Compress {
            model,
            world,
            degree,
            index,
            explain,
            extended,
        } => {
            let m = load_model(&model, extended)?;
            let start = designated_world(&m, &world)?.to_owned();
            let (compressed, plan) = transforms::compress(&m, &start, degree, index)?;
            println!("{}", compressed.to_document());
            if explain {
                eprint!("{}", plan.render());
            }
            Ok(0)
        }
        Command::Equiv {
            models,
            worlds,
            degree,
            indices,
            bound,
            extended,
        } => {
            if models.len() != 2 {
                bail!("equiv needs exactly two --model arguments");
            }
            if indices.len() != 2 {
                bail!("equiv needs exactly two --index arguments (alpha and beta)");
            }
            let ma = load_model(&models[0], extended)?;
            let mb = load_model(&models[1], extended)?;
            let wa = designated_world(&ma, &worlds.first().cloned().map(Some).unwrap_or(None))?
                .to_owned();
            let wb = designated_world(&mb, &worlds.get(1).cloned().map(Some).unwrap_or(None))?
                .to_owned();
            let verdict = transforms::modal_equiv_enum(
                (&ma, &wa),
                (&mb, &wb),
                degree,
                indices[0],
                indices[1],
                bound,
            )?;
            println!("{verdict}");
            Ok(match verdict {
                transforms::EquivVerdict::EquivUpToBound => 0,
                transforms::EquivVerdict::NotEquiv { .. } => 2,
            })
        }
        Command::Examples { name, extended } => {
            match name {
                None => {
                    for n in catalog::names() {
                        println!("{n}");
                    }
                }
                Some(n) => {
                    let m = catalog::resolve(&n, extended)?
                        .ok_or_else(|| anyhow!("unknown example `{n}`"))?;
                    println!("{}", m.to_document());
                }
            }
            Ok(0)
        }
        Command::Selftest {
            suite,
            seed,
            instances,
        } => {
            let suite = suite.unwrap_or_else(|| "all".to_owned());
            if !matches!(suite.as_str(), "ordinal" | "all") {
                bail!("unknown selftest suite `{suite}` (expected `ordinal` or `all`)");
            }
            let mut failed = false;
            let agreement = laws::run_level0_agreement(seed, instances.saturating_mul(10));
            println!(
                "level-0 oracle: {}/{} agree",
                agreement.passed, agreement.total
            );
            failed |= !agreement.all_passed();
            for failure in &agreement.failures {
                println!("  counterexample: {failure}");
            }
            for outcome in laws::run_law_suite(seed, instances) {
                println!("{}", outcome.line());
                failed |= !outcome.all_passed();
                for failure in &outcome.failures {
                    println!("  counterexample: {failure}");
                }
            }
            if failed {
                println!("selftest: FAIL");
                Ok(1)
            } else {
                println!("selftest: PASS");
                Ok(0)
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
