//! Command-line front end: evolve, bench, match, search, perft, elo, decode.

mod output;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use selsearch::chess::{divide, parse_epd_file, perft, to_san, EpdRecord, Position, START_FEN};
use selsearch::evolve::{last_record, run_evolution, GaConfig, GenerationRecord};
use selsearch::genome::{decode, encode, Chromosome};
use selsearch::harness::{
    bundled_openings, bundled_suite, elo_difference, parse_openings, run_match, run_suite_with, to_pgn, GameConfig,
    PgnTags, SolveLimits, DEFAULT_MAX_PLIES, DEFAULT_NODES_PER_MOVE,
};
use selsearch::search::{SearchBudget, SearchParams, Searcher, DEFAULT_MAX_DEPTH};

use output::{Format, Header, Sink};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "selsearch", version, about = "Chess search with evolvable selective-search parameters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tune search parameters with the genetic algorithm.
    Evolve(EvolveArgs),
    /// Solve a test suite and report nodes per position.
    Bench(BenchArgs),
    /// Play a match between two parameter sets.
    Match(MatchArgs),
    /// Search a single position.
    Search(SearchArgs),
    /// Count move-generation leaves.
    Perft(PerftArgs),
    /// Elo difference for a winning percentage.
    Elo(EloArgs),
    /// List the parameters encoded by a chromosome.
    Decode(DecodeArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    #[default]
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Args, Debug)]
struct EvolveArgs {
    /// EPD suite (default: the bundled 50 positions).
    #[arg(long, conflicts_with = "resume")]
    suite: Option<PathBuf>,
    #[arg(long, conflicts_with = "resume")]
    population: Option<usize>,
    /// Total generations, generation 0 included.
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long, conflicts_with = "resume")]
    crossover_rate: Option<f64>,
    /// Per-bit mutation probability.
    #[arg(long, conflicts_with = "resume")]
    mutation_rate: Option<f64>,
    #[arg(long, conflicts_with = "resume")]
    elitism: Option<usize>,
    #[arg(long, conflicts_with = "resume")]
    seed: Option<u64>,
    /// Node cap per suite position.
    #[arg(long, conflicts_with = "resume")]
    node_cap: Option<u64>,
    #[arg(long, value_enum, default_value_t, conflicts_with = "resume")]
    format: FormatArg,
    /// Log file (default: stdout).
    #[arg(long, conflicts_with = "resume")]
    out: Option<PathBuf>,
    /// Continue the run recorded in this log, appending to it.
    #[arg(long)]
    resume: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// Where the search parameters come from; `--set` overrides apply last.
#[derive(Args, Debug)]
struct ParamArgs {
    /// 70-character chromosome bit string.
    #[arg(long, conflicts_with = "params")]
    chromosome: Option<String>,
    /// Named parameter set: `default` or `disabled`.
    #[arg(long)]
    params: Option<String>,
    /// Parameter override `name=value`; repeatable.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    suite: Option<PathBuf>,
    #[arg(long, default_value_t = 500_000)]
    node_cap: u64,
    /// Wall-clock limit per position in milliseconds. Makes results timing
    /// dependent.
    #[arg(long)]
    move_time_ms: Option<u64>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct MatchArgs {
    /// Player A: `default`, `disabled` or a chromosome bit string.
    #[arg(long)]
    a: String,
    /// Player B, as for `--a`.
    #[arg(long)]
    b: String,
    /// FEN-per-line openings (default: the bundled 50).
    #[arg(long)]
    openings: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODES_PER_MOVE)]
    nodes_per_move: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_PLIES)]
    max_plies: usize,
    /// Wall-clock limit per move in milliseconds. Makes games timing
    /// dependent.
    #[arg(long)]
    move_time_ms: Option<u64>,
    /// Per-game table (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
    /// PGN export of every game.
    #[arg(long)]
    pgn: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// FEN or `startpos`.
    #[arg(long, default_value = "startpos")]
    fen: String,
    #[arg(long)]
    nodes: Option<u64>,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    move_time_ms: Option<u64>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args, Debug)]
struct PerftArgs {
    #[arg(long, default_value = "startpos")]
    fen: String,
    #[arg(long)]
    depth: u32,
    /// Also print the count below each root move.
    #[arg(long)]
    divide: bool,
}

#[derive(Args, Debug)]
struct EloArgs {
    /// Winning percentage, 0 to 100.
    #[arg(long, allow_negative_numbers = true)]
    wpct: f64,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    chromosome: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| dispatch(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        // The panic message is already on stderr.
        Err(_) => ExitCode::from(2),
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Evolve(a) => evolve(a),
        Command::Bench(a) => bench(a),
        Command::Match(a) => play_match(a),
        Command::Search(a) => search(a),
        Command::Perft(a) => run_perft(a),
        Command::Elo(a) => elo(a),
        Command::Decode(a) => decode_cmd(a),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_suite(path: Option<&Path>) -> Result<(Vec<EpdRecord>, String)> {
    match path {
        None => Ok((bundled_suite(), "bundled".to_string())),
        Some(p) => {
            let suite = parse_epd_file(&read_text(p)?).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            if suite.is_empty() {
                return Err(CliError::input(format!("{}: no positions", p.display())));
            }
            Ok((suite, p.display().to_string()))
        }
    }
}

fn parse_fen_arg(fen: &str) -> Result<Position> {
    let fen = if fen == "startpos" { START_FEN } else { fen };
    Position::from_fen(fen).map_err(|e| CliError::input(format!("bad FEN: {e}")))
}

fn parse_chromosome(text: &str) -> Result<Chromosome> {
    text.parse().map_err(|e| CliError::input(format!("bad chromosome: {e}")))
}

fn named_params(name: &str) -> Result<SearchParams> {
    match name {
        "default" => Ok(SearchParams::default()),
        "disabled" => Ok(SearchParams::disabled()),
        bits => Ok(decode(parse_chromosome(bits)?)),
    }
}

fn resolve_params(args: &ParamArgs) -> Result<SearchParams> {
    let mut params = match (&args.chromosome, &args.params) {
        (Some(bits), _) => decode(parse_chromosome(bits)?),
        (None, Some(name)) if name == "default" || name == "disabled" => named_params(name)?,
        (None, Some(name)) => return Err(CliError::input(format!("unknown parameter set {name:?}"))),
        (None, None) => SearchParams::default(),
    };
    for item in &args.set {
        let (name, value) =
            item.split_once('=').ok_or_else(|| CliError::input(format!("--set expects NAME=VALUE, got {item:?}")))?;
        params.set(name.trim(), value.trim()).map_err(|e| CliError::input(e.to_string()))?;
    }
    Ok(params)
}

fn params_json(p: &SearchParams) -> serde_json::Value {
    json!({
        "chromosome": encode(p).expect("validated parameters encode").to_string(),
        "values": p.to_values(),
    })
}

/// The `config` object of an evolve log header.
#[derive(serde::Serialize, serde::Deserialize)]
struct EvolveSettings {
    suite: String,
    #[serde(flatten)]
    ga: GaConfig,
}

fn evolve(args: EvolveArgs) -> Result<()> {
    if args.jobs == 0 {
        return Err(CliError::input("--jobs must be at least 1"));
    }
    if let Some(path) = &args.resume {
        return resume_evolution(path, args.generations, args.jobs);
    }
    let (suite, suite_name) = load_suite(args.suite.as_deref())?;
    let defaults = GaConfig::default();
    let config = GaConfig {
        population_size: args.population.unwrap_or(defaults.population_size),
        crossover_rate: args.crossover_rate.unwrap_or(defaults.crossover_rate),
        mutation_rate: args.mutation_rate.unwrap_or(defaults.mutation_rate),
        generations: args.generations.unwrap_or(defaults.generations),
        elitism_count: args.elitism.unwrap_or(defaults.elitism_count),
        seed: args.seed.unwrap_or(defaults.seed),
        node_cap: args.node_cap.unwrap_or(defaults.node_cap),
        jobs: args.jobs,
    };
    config.validate().map_err(|e| CliError::input(e.to_string()))?;
    let format = Format::from(args.format);
    let settings = EvolveSettings { suite: suite_name, ga: config };
    let header = Header::new("evolve", Some(config.seed), serde_json::to_value(&settings).expect("settings serialize"));
    let mut sink = Sink::create(args.out.as_deref(), false)?;
    sink.write(&header.render(format))?;
    if format == Format::Csv {
        sink.write(&format!("{}\n", GenerationRecord::csv_header()))?;
    }
    run_and_log(&config, &suite, None, format, &mut sink)
}

fn run_and_log(
    config: &GaConfig,
    suite: &[EpdRecord],
    resume: Option<&GenerationRecord>,
    format: Format,
    sink: &mut Sink,
) -> Result<()> {
    let mut io_error = None;
    let outcome = run_evolution(config, suite, resume, |rec| {
        let line = match format {
            Format::Csv => rec.to_csv_row(),
            Format::Json => rec.to_json(),
        };
        if io_error.is_none() {
            io_error = sink.write(&format!("{line}\n")).err();
        }
        eprintln!(
            "generation {:>3}  best {:>10} nodes  solved {:>3}  mean {:>12.0}",
            rec.generation, rec.best_nodes, rec.best_solved, rec.mean_nodes
        );
    });
    if let Some(e) = io_error {
        return Err(e);
    }
    let best = outcome.best;
    eprintln!("best {} nodes {} solved {}", best.chromosome, best.total_nodes, best.solved_count);
    Ok(())
}

fn resume_evolution(path: &Path, generations: Option<usize>, jobs: usize) -> Result<()> {
    let text = read_text(path)?;
    let bad = |msg: String| CliError::input(format!("{}: {msg}", path.display()));
    let (format, config_value) = output::read_config(&text).ok_or_else(|| bad("no header with a configuration".into()))?;
    let settings: EvolveSettings =
        serde_json::from_value(config_value).map_err(|e| bad(format!("bad configuration: {e}")))?;
    let last = last_record(&text).map_err(|e| bad(e.to_string()))?;
    let suite_path = (settings.suite != "bundled").then(|| PathBuf::from(&settings.suite));
    let (suite, _) = load_suite(suite_path.as_deref())?;
    let mut config = GaConfig { jobs, ..settings.ga };
    if let Some(g) = generations {
        config.generations = g;
    }
    config.validate().map_err(|e| CliError::input(e.to_string()))?;
    if last.population.len() != config.population_size {
        return Err(bad(format!(
            "last record has {} organisms, configuration says {}",
            last.population.len(),
            config.population_size
        )));
    }
    if last.generation + 1 >= config.generations {
        return Err(bad(format!(
            "log already holds generation {}; pass --generations above {}",
            last.generation,
            last.generation + 1
        )));
    }
    let settings = EvolveSettings { suite: settings.suite, ga: config };
    let header = Header::new("evolve --resume", Some(config.seed), serde_json::to_value(&settings).expect("serialize"));
    let mut sink = Sink::create(Some(path), true)?;
    if !text.ends_with('\n') {
        sink.write("\n")?;
    }
    sink.write(&header.render(format))?;
    run_and_log(&config, &suite, Some(&last), format, &mut sink)
}

fn bench(args: BenchArgs) -> Result<()> {
    if args.jobs == 0 || args.node_cap == 0 {
        return Err(CliError::input("--jobs and --node-cap must be at least 1"));
    }
    let (suite, suite_name) = load_suite(args.suite.as_deref())?;
    let params = resolve_params(&args.params)?;
    let limits = SolveLimits { node_cap: args.node_cap, max_time: args.move_time_ms.map(Duration::from_millis) };
    let format = Format::from(args.format);
    let header = Header::new(
        "bench",
        None,
        json!({
            "suite": suite_name,
            "node_cap": args.node_cap,
            "move_time_ms": args.move_time_ms,
            "params": params_json(&params),
        }),
    );
    let mut sink = Sink::create(args.out.as_deref(), false)?;
    let report = run_suite_with(&suite, &params, limits, args.jobs);
    let summary = report.summary_json();
    let mut body = header.render(format);
    match format {
        Format::Csv => body.push_str(&report.csv()),
        Format::Json => {
            body.push_str(&serde_json::to_string(&json!({"summary": summary, "rows": report.rows})).expect("json"));
            body.push('\n');
        }
    }
    sink.write(&body)?;
    eprintln!("solved {}/{}  total nodes {}", report.solved, report.rows.len(), report.total_nodes);
    Ok(())
}

fn play_match(args: MatchArgs) -> Result<()> {
    if args.jobs == 0 || args.nodes_per_move == 0 || args.max_plies == 0 {
        return Err(CliError::input("--jobs, --nodes-per-move and --max-plies must be at least 1"));
    }
    let a = named_params(&args.a)?;
    let b = named_params(&args.b)?;
    let (openings, openings_name) = match &args.openings {
        None => (bundled_openings(), "bundled".to_string()),
        Some(p) => {
            let list =
                parse_openings(&read_text(p)?).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            if list.is_empty() {
                return Err(CliError::input(format!("{}: no openings", p.display())));
            }
            (list, p.display().to_string())
        }
    };
    let config = GameConfig {
        nodes_per_move: args.nodes_per_move,
        max_plies: args.max_plies,
        move_time: args.move_time_ms.map(Duration::from_millis),
    };
    let format = Format::from(args.format);
    let header = Header::new(
        "match",
        None,
        json!({
            "a": params_json(&a),
            "b": params_json(&b),
            "openings": openings_name,
            "nodes_per_move": args.nodes_per_move,
            "max_plies": args.max_plies,
            "move_time_ms": args.move_time_ms,
        }),
    );
    let mut pgn_sink = args.pgn.as_deref().map(|p| Sink::create(Some(p), false)).transpose()?;
    let mut sink = Sink::create(args.out.as_deref(), false)?;

    let result = run_match(&a, &b, &openings, &config, args.jobs);
    let summary = result.summary_json();
    let mut body = header.render(format);
    match format {
        Format::Csv => body.push_str(&result.csv()),
        Format::Json => {
            let games: Vec<_> = result
                .games
                .iter()
                .map(|g| {
                    json!({
                        "opening": g.opening_index + 1,
                        "a_color": if g.a_is_white { "white" } else { "black" },
                        "result": g.record.result.pgn(),
                        "termination": g.record.termination.name(),
                        "plies": g.record.moves.len(),
                    })
                })
                .collect();
            body.push_str(&serde_json::to_string(&json!({"summary": summary, "games": games})).expect("json"));
            body.push('\n');
        }
    }
    sink.write(&body)?;
    if let Some(pgn) = pgn_sink.as_mut() {
        let mut text = header.render_pgn();
        for (i, g) in result.games.iter().enumerate() {
            let (white, black) = if g.a_is_white { (&args.a, &args.b) } else { (&args.b, &args.a) };
            let tags = PgnTags {
                event: format!("selsearch match, opening {}", g.opening_index + 1),
                round: (i + 1).to_string(),
                white: white.clone(),
                black: black.clone(),
            };
            text.push_str(&to_pgn(&g.record, &tags));
            text.push('\n');
        }
        pgn.write(&text)?;
    }
    eprintln!(
        "A +{} ={} -{}  W% {:.1}  RD {}",
        result.wins,
        result.draws,
        result.losses,
        100.0 * result.score_fraction(),
        result.elo()
    );
    Ok(())
}

fn search(args: SearchArgs) -> Result<()> {
    let pos = parse_fen_arg(&args.fen)?;
    let params = resolve_params(&args.params)?;
    let mut budget = match args.nodes {
        Some(0) => return Err(CliError::input("--nodes must be at least 1")),
        Some(n) => SearchBudget::nodes(n),
        None if args.depth.is_none() && args.move_time_ms.is_none() => SearchBudget::nodes(1_000_000),
        None => SearchBudget::depth(DEFAULT_MAX_DEPTH),
    };
    if let Some(d) = args.depth {
        if d == 0 {
            return Err(CliError::input("--depth must be at least 1"));
        }
        budget.max_depth = d;
    }
    budget.max_time = args.move_time_ms.map(Duration::from_millis);
    let mut searcher = Searcher::default();
    let result = searcher.search_with(&pos, &params, budget, |info| {
        println!(
            "info depth {} score {} nodes {} move {}",
            info.depth, info.score, info.nodes, info.best_move
        );
        selsearch::search::IterationControl::Continue
    });
    match result.best_move {
        Some(m) => println!(
            "bestmove {} ({}) score {} depth {} nodes {}",
            m,
            to_san(&pos, m),
            result.score,
            result.depth_completed,
            result.nodes
        ),
        None => println!("bestmove none score {} nodes {}", result.score, result.nodes),
    }
    Ok(())
}

fn run_perft(args: PerftArgs) -> Result<()> {
    let mut pos = parse_fen_arg(&args.fen)?;
    if args.divide {
        let rows = divide(&mut pos, args.depth);
        for (m, n) in &rows {
            println!("{m}: {n}");
        }
        println!();
    }
    println!("{}", perft(&mut pos, args.depth));
    Ok(())
}

fn elo(args: EloArgs) -> Result<()> {
    if !(0.0..=100.0).contains(&args.wpct) {
        return Err(CliError::input(format!("--wpct must lie in [0, 100], got {}", args.wpct)));
    }
    println!("{}", elo_difference(args.wpct / 100.0));
    Ok(())
}

fn decode_cmd(args: DecodeArgs) -> Result<()> {
    let c = parse_chromosome(&args.chromosome)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", decode(c)).map_err(|e| CliError::io(Path::new("<stdout>"), e))
}
