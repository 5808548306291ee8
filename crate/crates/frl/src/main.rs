//! Command-line interface: mine antecedents, train falling / softly falling
//! rule lists, evaluate, sweep ROC points, run the oracle checker and
//! render models.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 oracle violation.

use clap::{Args, Parser, Subcommand};
use frl::bounds::{is_feasible, BoundInputs};
use frl::dataset::{binarize, binarize_with, load_csv, split};
use frl::eval::{evaluate, render_rulelist, roc_sweep, write_roc_csv};
use frl::model::{ModelFile, ModelParams};
use frl::oracle::{falling_extension_exists, verify_prefix_bound_hard, verify_prefix_bound_soft};
use frl::rational::{parse_rat, rat, rat_int, to_f64, Rat};
use frl::search::{run_frl, run_soft_frl, SearchConfig, SearchTrace};
use frl::synth;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "frl",
    version,
    about = "Falling rule lists by Monte-Carlo search with prefix-bound pruning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine the antecedent pool from a CSV file.
    Mine(MineArgs),
    /// Learn a falling rule list (hard monotonicity constraint).
    TrainFrl(TrainArgs),
    /// Learn a softly falling rule list (monotonicity penalty C1).
    TrainSoftfrl(TrainArgs),
    /// Evaluate a saved model on a CSV file.
    Eval(EvalArgs),
    /// Train both algorithms over a grid of w values and emit test-set
    /// ROC points.
    RocSweep(RocArgs),
    /// Certify feasibility and both prefix bounds against exhaustive
    /// enumeration on random instances.
    OracleCheck(OracleArgs),
    /// Pretty-print a saved model.
    Render(RenderArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Input CSV file (RFC-4180, first row is the header).
    #[arg(long)]
    data: PathBuf,
    /// Name of the label column.
    #[arg(long = "label-col")]
    label_col: String,
    /// Label value mapped to the positive class.
    #[arg(long = "positive-value")]
    positive_value: String,
    /// Quantile bins per numeric column.
    #[arg(long, default_value_t = 4)]
    bins: usize,
}

#[derive(Args)]
struct MiningArgs {
    /// Maximum predicates per antecedent (1 or 2).
    #[arg(long = "max-preds", default_value_t = 2)]
    max_preds: usize,
    /// Minimum class-conditional support (within positives or negatives).
    #[arg(long = "min-support", default_value = "0.10")]
    min_support: String,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    /// Output JSON path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    /// Positive-class weight.
    #[arg(long, default_value = "7")]
    w: String,
    /// Per-rule cost C.
    #[arg(long, default_value = "1e-6")]
    c: String,
    /// Monotonicity penalty C1 (softly falling objective only).
    #[arg(long, default_value = "0.5")]
    c1: String,
    /// Number of Monte-Carlo iterations.
    #[arg(long, default_value_t = 3000)]
    iters: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Curiosity mixing weight in [0, 1].
    #[arg(long, default_value = "0.5")]
    lambda: String,
    /// Per-level early termination probability.
    #[arg(long = "p-term", default_value_t = 0.05)]
    p_term: f64,
    /// Train on this fraction and hold out the rest (omit to train on all
    /// rows).
    #[arg(long)]
    split: Option<f64>,
    /// Model output path.
    #[arg(long)]
    out: PathBuf,
    /// Trace CSV output path.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Saved model JSON.
    #[arg(long)]
    model: PathBuf,
    /// CSV to evaluate on (binarized with the model's predicates).
    #[arg(long)]
    data: PathBuf,
    #[arg(long = "label-col")]
    label_col: String,
    #[arg(long = "positive-value")]
    positive_value: String,
    /// Weight for the evaluation threshold; defaults to the training w.
    #[arg(long)]
    w: Option<String>,
}

#[derive(Args)]
struct RocArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    /// Comma-separated grid of w values.
    #[arg(long = "w-grid", default_value = "1,3,5,7,9,11,13,15,17,19")]
    w_grid: String,
    #[arg(long, default_value = "1e-6")]
    c: String,
    #[arg(long, default_value = "0.5")]
    c1: String,
    #[arg(long, default_value_t = 3000)]
    iters: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "0.5")]
    lambda: String,
    #[arg(long = "p-term", default_value_t = 0.05)]
    p_term: f64,
    /// Train fraction of the split.
    #[arg(long, default_value_t = 0.8)]
    split: f64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long = "max-antecedents", default_value_t = 12)]
    max_antecedents: usize,
    #[arg(long = "max-len", default_value_t = 4)]
    max_len: usize,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    model: PathBuf,
}

enum CliError {
    Usage(String),
    Data(String),
    Violation(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Violation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Violation(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn data_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Mine(args) => cmd_mine(args),
        Command::TrainFrl(args) => cmd_train(args, false),
        Command::TrainSoftfrl(args) => cmd_train(args, true),
        Command::Eval(args) => cmd_eval(args),
        Command::RocSweep(args) => cmd_roc(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
        Command::Render(args) => cmd_render(args),
    }
}

fn load_binary(args: &DataArgs) -> Result<frl::BinaryDataset, CliError> {
    let raw = load_csv(&args.data, &args.label_col, &args.positive_value).map_err(data_err)?;
    if raw.dropped_rows > 0 {
        eprintln!(
            "warning: dropped {} row(s) with missing numeric cells",
            raw.dropped_rows
        );
    }
    binarize(&raw, args.bins).map_err(data_err)
}

fn mine_pool(
    dataset: &frl::BinaryDataset,
    mining: &MiningArgs,
) -> Result<frl::AntecedentSet, CliError> {
    let support = parse_rat(&mining.min_support).map_err(usage)?;
    frl::mine(dataset, mining.max_preds, &support).map_err(data_err)
}

fn cmd_mine(args: MineArgs) -> Result<(), CliError> {
    let dataset = load_binary(&args.data)?;
    let pool = mine_pool(&dataset, &args.mining)?;
    let rows = pool.to_json_rows(&dataset);
    let json = serde_json::to_string_pretty(&rows).expect("antecedents serialize");
    std::fs::write(&args.out, json + "\n").map_err(data_err)?;
    println!(
        "mined {} antecedents from {} predicates over {} rows",
        pool.len(),
        dataset.predicates.len(),
        dataset.n
    );
    Ok(())
}

fn build_config(args: &TrainArgs) -> Result<SearchConfig, CliError> {
    Ok(SearchConfig {
        w: parse_rat(&args.w).map_err(usage)?,
        c: parse_rat(&args.c).map_err(usage)?,
        c1: parse_rat(&args.c1).map_err(usage)?,
        iterations: args.iters,
        seed: args.seed,
        lambda: parse_rat(&args.lambda).map_err(usage)?,
        p_terminate: args.p_term,
    })
}

fn write_trace(trace: &SearchTrace, path: &PathBuf) -> Result<(), CliError> {
    let file = std::fs::File::create(path).map_err(data_err)?;
    trace
        .write_csv(std::io::BufWriter::new(file))
        .map_err(data_err)
}

fn cmd_train(args: TrainArgs, soft: bool) -> Result<(), CliError> {
    let full = load_binary(&args.data)?;
    let train = match args.split {
        Some(fraction) => {
            let (train, _) = split(&full, fraction, args.seed).map_err(data_err)?;
            train
        }
        None => full,
    };
    let pool = mine_pool(&train, &args.mining)?;
    let config = build_config(&args)?;
    let run = if soft { run_soft_frl } else { run_frl };
    let (list, trace) = run(&train, &pool, &config).map_err(|e| match e {
        frl::search::SearchError::BadConfig(_) => usage(e),
        other => data_err(other),
    })?;

    let params = ModelParams {
        algorithm: if soft { "softfrl".into() } else { "frl".into() },
        w: config.w.clone(),
        c: config.c.clone(),
        c1: if soft { config.c1.clone() } else { Rat::zero() },
        iterations: config.iterations,
        seed: config.seed,
        lambda: config.lambda.clone(),
        p_terminate: config.p_terminate,
    };
    let model = ModelFile::new(params, train.predicates.clone(), &list);
    model.save(&args.out).map_err(data_err)?;
    if let Some(path) = &args.trace {
        write_trace(&trace, path)?;
    }
    let final_objective = trace
        .improvements
        .last()
        .map(|i| to_f64(&i.objective))
        .unwrap_or(f64::NAN);
    println!("{}", render_rulelist(&list).trim_end());
    println!();
    println!(
        "objective = {final_objective} after {} iterations ({} rules)",
        config.iterations,
        list.size()
    );
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    let model = ModelFile::load(&args.model).map_err(data_err)?;
    let raw = load_csv(&args.data, &args.label_col, &args.positive_value).map_err(data_err)?;
    if raw.dropped_rows > 0 {
        eprintln!(
            "warning: dropped {} row(s) with missing numeric cells",
            raw.dropped_rows
        );
    }
    let dataset = binarize_with(&model.predicates, &raw);
    let list = model.rule_list().map_err(data_err)?;
    let w = match &args.w {
        Some(s) => parse_rat(s).map_err(usage)?,
        None => model.params.w.clone(),
    };
    let report = evaluate(&list, &dataset, &w).map_err(data_err)?;
    println!("{report}");
    Ok(())
}

fn cmd_roc(args: RocArgs) -> Result<(), CliError> {
    let full = load_binary(&args.data)?;
    let (train, test) = split(&full, args.split, args.seed).map_err(data_err)?;
    let pool = mine_pool(&train, &args.mining)?;
    let base = SearchConfig {
        w: rat_int(1), // replaced per grid point
        c: parse_rat(&args.c).map_err(usage)?,
        c1: parse_rat(&args.c1).map_err(usage)?,
        iterations: args.iters,
        seed: args.seed,
        lambda: parse_rat(&args.lambda).map_err(usage)?,
        p_terminate: args.p_term,
    };
    let grid: Vec<Rat> = args
        .w_grid
        .split(',')
        .map(|s| parse_rat(s.trim()).map_err(usage))
        .collect::<Result<_, _>>()?;
    if grid.is_empty() {
        return Err(CliError::Usage("empty w grid".into()));
    }
    let rows = roc_sweep(&train, &test, &pool, &grid, &base).map_err(data_err)?;
    let file = std::fs::File::create(&args.out).map_err(data_err)?;
    write_roc_csv(&rows, std::io::BufWriter::new(file)).map_err(data_err)?;
    println!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

/// Serialized reproducer printed when a certification trial fails.
#[derive(Serialize)]
struct Reproducer {
    n: usize,
    positives: Vec<usize>,
    antecedents: Vec<Vec<usize>>,
    prefix: Vec<usize>,
    w: String,
    c: String,
    c1: Option<String>,
    check: String,
}

fn cmd_oracle_check(args: OracleArgs) -> Result<(), CliError> {
    if args.max_antecedents < 2 || args.max_len == 0 {
        return Err(CliError::Usage(
            "need at least 2 antecedents and max-len >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let w_grid = [rat_int(1), rat_int(3), rat_int(7)];
    let c_grid = [Rat::zero(), rat(1, 100)];
    let c1_grid = [rat(1, 2), rat(1, 100)];

    for trial in 0..args.trials {
        let n_rows = rng.gen_range(20..=80);
        let m = rng.gen_range(3..=args.max_antecedents.min(12));
        let (dataset, pool) = synth::random_instance(&mut rng, n_rows, m);
        let w = &w_grid[(trial % 3) as usize];
        let c = &c_grid[(trial % 2) as usize];
        let c1 = &c1_grid[(trial % 2) as usize];

        let reproducer = |prefix: &[usize], c1: Option<&Rat>, check: &str| Reproducer {
            n: dataset.n,
            positives: dataset.labels.iter_ones().collect(),
            antecedents: pool.iter().map(|a| a.bits.iter_ones().collect()).collect(),
            prefix: prefix.to_vec(),
            w: w.to_string(),
            c: c.to_string(),
            c1: c1.map(|v| v.to_string()),
            check: check.to_string(),
        };
        let violation = |repro: Reproducer| {
            CliError::Violation(format!(
                "trial {trial} failed\n{}",
                serde_json::to_string_pretty(&repro).expect("reproducer serializes")
            ))
        };

        // Feasibility: the three statements must agree on a falling prefix.
        let falling = synth::random_prefix(&mut rng, &dataset, &pool, 3, true);
        if !falling.is_empty() {
            let state = synth::prefix_state(&dataset, &pool, &falling, w);
            let by_search = falling_extension_exists(&dataset, &pool, &falling);
            let by_alpha = synth::alpha_tilde_feasible(&state);
            let by_integers = is_feasible(&BoundInputs::from_prefix_hard(&state, w, c));
            if by_search != by_alpha || by_alpha != by_integers {
                return Err(violation(reproducer(
                    &falling,
                    None,
                    "feasibility-equivalence",
                )));
            }

            // Hard bound soundness on feasible prefixes, with the exact
            // terminating equality.
            if by_alpha {
                let check =
                    verify_prefix_bound_hard(&dataset, &pool, &falling, w, c).map_err(data_err)?;
                if !check.sound {
                    return Err(violation(reproducer(&falling, None, "hard-prefix-bound")));
                }
                if check.terminating && check.gap != Some(Rat::zero()) {
                    return Err(violation(reproducer(
                        &falling,
                        None,
                        "terminating-equality",
                    )));
                }
            }
        }

        // Soft bound soundness on arbitrary compatible prefixes.
        let prefix = synth::random_prefix(&mut rng, &dataset, &pool, 3, false);
        let check = verify_prefix_bound_soft(&dataset, &pool, &prefix, w, c, c1, args.max_len)
            .map_err(data_err)?;
        if !check.sound {
            return Err(violation(reproducer(
                &prefix,
                Some(c1),
                "soft-prefix-bound",
            )));
        }
    }
    println!("oracle-check passed: {} trials, no violations", args.trials);
    Ok(())
}

fn cmd_render(args: RenderArgs) -> Result<(), CliError> {
    let model = ModelFile::load(&args.model).map_err(data_err)?;
    let list = model.rule_list().map_err(data_err)?;
    print!("{}", render_rulelist(&list));
    Ok(())
}
