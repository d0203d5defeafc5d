use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use symnet::inputs::{load_matrix, load_net, load_relation, load_seed_levels, read_source};
use symnet::{emit, parse_results, replay, run, CampaignConfig, CliError, Format, SuiteName};
use symnet_core::extraction::{decompose_one_row, long_parameter, long_parameter_is_row_length};
use symnet_core::formats::{NetDto, WordEntryDto};
use symnet_core::localization::patch_report;
use symnet_core::{closure_from_levels, row_length, word_product, LevelSeed, ModRing};

#[derive(Parser)]
#[command(name = "symnet", version, about = "Randomized checks for nets in Sp(2n, Z/m)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a campaign of test suites.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        max_word_length: Option<usize>,
        /// Repeatable; replaces the configured suite list.
        #[arg(long = "suite", value_enum)]
        suites: Vec<SuiteName>,
        /// Explicitly run no suites.
        #[arg(long, conflicts_with = "suites")]
        no_suites: bool,
        #[arg(long)]
        mutate: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Include wall-clock times; output is then no longer byte-stable.
        #[arg(long)]
        timing: bool,
    },
    /// Rerun the failing trials recorded in a results file.
    Replay {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        results: PathBuf,
    },
    /// Factor a one-row matrix into transvections.
    Decompose {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: i32,
    },
    /// Smallest exact major net containing the given levels.
    NetClosure {
        #[arg(long)]
        nu: PathBuf,
        #[arg(long)]
        seed_levels: Option<PathBuf>,
        /// Required without --seed-levels.
        #[arg(long)]
        m: Option<u64>,
    },
    /// Compare membership in the net subgroup with the componentwise answer.
    CrtCheck {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        net: PathBuf,
    },
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("output serializes"));
}

fn usage(field: &'static str, message: &str) -> CliError {
    CliError::Config { field, message: message.to_string() }
}

fn execute(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Run { config, m, n, seed, trials, max_word_length, suites, no_suites, mutate, format, timing } => {
            let mut cfg = match &config {
                Some(path) => CampaignConfig::parse(&read_source(path)?, &path.display().to_string())?,
                None => CampaignConfig::new(
                    m.ok_or_else(|| usage("m", "give --m or --config"))?,
                    n.ok_or_else(|| usage("n", "give --n or --config"))?,
                ),
            };
            if let Some(m) = m {
                cfg.m = m;
            }
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(l) = max_word_length {
                cfg.max_word_length = l;
            }
            if !suites.is_empty() {
                cfg.suites = Some(suites);
            }
            if no_suites {
                cfg.suites = Some(Vec::new());
            }
            cfg.mutate |= mutate;
            let results = run(&cfg.validate()?, timing)?;
            print!("{}", emit(&results, format));
            Ok(results.iter().all(|r| r.passed))
        }
        Command::Replay { config, results } => {
            let campaign =
                CampaignConfig::parse(&read_source(&config)?, &config.display().to_string())?.validate()?;
            let recorded = parse_results(&read_source(&results)?, &results.display().to_string())?;
            let mut clean = true;
            for r in &recorded {
                if let Some(ce) = &r.counterexample {
                    let again = replay(&campaign, r.suite, ce)?;
                    println!("{} seed {}: {}", r.suite.name(), ce.seed, if again { "reproduced" } else { "not reproduced" });
                    clean &= !again;
                }
            }
            Ok(clean)
        }
        Command::Decompose { matrix, p } => {
            let a = load_matrix(&matrix)?;
            let origin = matrix.display().to_string();
            let invalid = |source| CliError::Invalid { path: origin.clone(), source };
            let factors = decompose_one_row(&a, p).map_err(invalid)?;
            let rebuilt = word_product(&factors, a.matrix().ring(), a.matrix().index_set()).map_err(invalid)?;
            print_json(&json!({
                "p": p,
                "factors": factors.iter().map(WordEntryDto::from).collect::<Vec<_>>(),
                "long_parameter": long_parameter(&a, p),
                "row_length": row_length(&a, -p).value(),
                "long_parameter_is_row_length": long_parameter_is_row_length(&a, p),
                "round_trip": rebuilt == a,
            }));
            Ok(rebuilt == a)
        }
        Command::NetClosure { nu, seed_levels, m } => {
            let relation = load_relation(&nu)?;
            let (ring, seed) = match &seed_levels {
                Some(path) => {
                    let (ring, seed) = load_seed_levels(path, relation.index_set())?;
                    if m.is_some_and(|m| m != ring.modulus()) {
                        return Err(usage("m", "disagrees with the seed levels"));
                    }
                    (ring, seed)
                }
                None => {
                    let m = m.ok_or_else(|| usage("m", "give --m or --seed-levels"))?;
                    let ring = ModRing::new(m).map_err(|e| usage("m", &e.to_string()))?;
                    (ring, LevelSeed::default())
                }
            };
            let net = closure_from_levels(&relation, &seed, ring)
                .map_err(|source| CliError::Invalid { path: nu.display().to_string(), source })?;
            print_json(&NetDto::from(&net));
            Ok(true)
        }
        Command::CrtCheck { matrix, net } => {
            let b = load_matrix(&matrix)?;
            let s = load_net(&net)?;
            let report = patch_report(&b, &s).map_err(|source| CliError::Invalid { path: net.display().to_string(), source })?;
            print_json(&json!({ "direct": report.direct, "patched": report.patched(), "factors": report.factors }));
            Ok(report.agrees())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
