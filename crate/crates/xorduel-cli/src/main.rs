//! Command-line interface: solve games, compare dual pairs, list the
//! catalog, and map strategies between the XOR and XOR* forms.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid game or flags,
//! 3 solver non-convergence, 4 dual-pair comparison failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use xorduel::catalog::{self, DualPair, ExpectedBounds};
use xorduel::classical::classical_value;
use xorduel::duality::{compare_dual_pair, map_xor_to_xorstar, map_xorstar_to_xor};
use xorduel::game::{GameKind, GameSpec};
use xorduel::io::{self, iso8601_utc, EnvelopeResult, ResultEnvelope};
use xorduel::quantum::{eval_quantum_xor, eval_quantum_xorstar, quantum_value};
use xorduel::solve::{OptimizerConfig, SolveMode, SolverError, Strategy};

#[derive(Parser)]
#[command(name = "xorduel", version, about = "Classical and quantum values of XOR and XOR* games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game for its classical or quantum value.
    Solve(SolveArgs),
    /// Solve both sides of a dual pair and compare the bounds.
    Dual(DualArgs),
    /// List the built-in games with their reference values.
    Catalog(CatalogArgs),
    /// Map a quantum strategy between the XOR and XOR* forms.
    MapStrategy(MapStrategyArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Model {
    Classical,
    Quantum,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum KindArg {
    Xor,
    #[value(name = "xor_star", alias = "xor-star")]
    XorStar,
}

impl From<KindArg> for GameKind {
    fn from(k: KindArg) -> GameKind {
        match k {
            KindArg::Xor => GameKind::Xor,
            KindArg::XorStar => GameKind::XorStar,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MapTarget {
    Xor,
    Xorstar,
}

#[derive(Args)]
struct SolveArgs {
    /// Catalog key or path to a game JSON file.
    game: String,
    /// Strategy class to optimize over.
    #[arg(long, value_enum, default_value_t = Model::Classical)]
    model: Model,
    /// Side of a catalog dual pair to solve (default: the game's native side).
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Allow Bob's reset gates (XOR* games only).
    #[arg(long)]
    allow_reset: bool,
    /// Optimizer restarts.
    #[arg(long, default_value_t = 64)]
    restarts: u32,
    /// Master seed for the optimizer.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reporting tolerance when comparing against catalog reference values.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Also write the JSON envelope to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cycle length for odd_cycle (odd, >= 3).
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Args)]
struct DualArgs {
    /// Catalog key, or path to the XOR-side game file.
    game: String,
    /// Path to the XOR*-side game file (when solving from files).
    game_star: Option<String>,
    #[arg(long, default_value_t = 64)]
    restarts: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cycle length for odd_cycle (odd, >= 3).
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct MapStrategyArgs {
    /// Path to the strategy JSON file.
    strategy: PathBuf,
    /// Target form.
    #[arg(long, value_enum)]
    to: MapTarget,
    /// Catalog key or game file the strategy plays (the twin spec is
    /// derived by flipping the kind).
    #[arg(long)]
    game: String,
    /// Write the mapped strategy to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cycle length for odd_cycle (odd, >= 3).
    #[arg(long)]
    n: Option<u32>,
}

enum CliError {
    /// Bad flags, malformed or invalid game files: exit 2.
    Usage(String),
    /// The optimizer failed to clear its floor: exit 3.
    NonConvergence(String),
    /// Anything unexpected: exit 1.
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::NonConvergence(m) | CliError::Internal(m) => m,
        }
    }
}

fn solver_error(err: SolverError) -> CliError {
    match err {
        SolverError::NonConvergence { .. } => CliError::NonConvergence(err.to_string()),
        SolverError::Game(_)
        | SolverError::IncompatibleMode { .. }
        | SolverError::CardinalityTooLarge { .. }
        | SolverError::SpecMismatch
        | SolverError::ReversibilityViolation
        | SolverError::ShapeMismatch { .. } => CliError::Usage(err.to_string()),
    }
}

fn io_error(err: io::IoResultError) -> CliError {
    CliError::Usage(err.to_string())
}

/// Timestamp for envelopes, honoring SOURCE_DATE_EPOCH for byte-identical
/// reruns. Returns true when running in reproducible mode.
fn timestamp() -> (String, bool) {
    if let Some(epoch) = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
    {
        return (iso8601_utc(epoch), true);
    }
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    (iso8601_utc(now), false)
}

fn init_threads() {
    if let Some(n) = std::env::var("XORDUEL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// A game resolved from a catalog key or a file path.
struct ResolvedGame {
    spec: GameSpec,
    /// Reference bounds when the game came from the catalog.
    expected: Option<ExpectedBounds>,
}

fn resolve_pair(source: &str, n: Option<u32>) -> Result<Option<DualPair>, CliError> {
    if !catalog::is_known_key(source) {
        return Ok(None);
    }
    catalog::build(source, n)
        .map(Some)
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn resolve_game(
    source: &str,
    n: Option<u32>,
    kind: Option<KindArg>,
) -> Result<ResolvedGame, CliError> {
    if let Some(pair) = resolve_pair(source, n)? {
        let expected = catalog::expected_bounds(source, n)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let want = kind.map(GameKind::from).unwrap_or(pair.native_kind);
        let spec = match want {
            GameKind::Xor => pair.xor,
            GameKind::XorStar => pair.xor_star,
        };
        return Ok(ResolvedGame {
            spec,
            expected: Some(expected),
        });
    }
    if n.is_some() {
        return Err(CliError::Usage(format!(
            "--n only applies to the odd_cycle catalog key, not to '{source}'"
        )));
    }
    let spec = io::load_game(Path::new(source)).map_err(io_error)?;
    if let Some(k) = kind {
        if GameKind::from(k) != spec.kind {
            return Err(CliError::Usage(format!(
                "game file '{source}' has kind {:?}, which does not match --kind",
                spec.kind
            )));
        }
    }
    Ok(ResolvedGame {
        spec,
        expected: None,
    })
}

fn emit(
    envelope: &ResultEnvelope,
    format: Format,
    out: &Option<PathBuf>,
    table: String,
) -> Result<(), CliError> {
    match format {
        Format::Json => print!("{}", envelope.to_json()),
        Format::Table => println!("{table}"),
    }
    if let Some(path) = out {
        io::save_result(envelope, path).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    Ok(())
}

fn expected_line(
    expected: &ExpectedBounds,
    mode: SolveMode,
    model: Model,
    value: f64,
    tol: f64,
) -> String {
    let reference = match (mode, model) {
        (SolveMode::Xor, Model::Classical) => Some(expected.classical_xor),
        (SolveMode::Xor, Model::Quantum) => Some(expected.quantum_xor),
        (SolveMode::XorStarReversible, Model::Classical) => Some(expected.classical_xorstar_rev),
        (SolveMode::XorStarReversible, Model::Quantum) => Some(expected.quantum_xorstar_rev),
        (SolveMode::XorStarIrreversible, Model::Classical) => {
            expected.irreversible.map(|irr| irr.classical)
        }
        (SolveMode::XorStarIrreversible, Model::Quantum) => {
            return match expected.irreversible {
                Some(irr) => {
                    let met = if value >= irr.quantum_at_least {
                        "met"
                    } else {
                        "NOT MET"
                    };
                    format!(
                        "expected     >= {:.10} (best-found bound, {met})",
                        irr.quantum_at_least
                    )
                }
                None => String::new(),
            };
        }
    };
    match reference {
        Some(r) => {
            let delta = (value - r.value).abs();
            // A reference quoted to a few digits can never match tighter
            // than its own precision; the flag only tightens beyond that.
            let effective = tol.max(r.tol);
            let within = if delta <= effective { "ok" } else { "OUTSIDE TOL" };
            format!(
                "expected     {:.10} (|delta| = {delta:.3e}, {within})",
                r.value
            )
        }
        None => String::new(),
    }
}

fn cmd_solve(args: SolveArgs) -> Result<u8, CliError> {
    let game = resolve_game(&args.game, args.n, args.kind)?;
    let spec = game.spec;

    if args.allow_reset && spec.kind == GameKind::Xor {
        return Err(CliError::Usage(
            "--allow-reset applies to xor_star games; this game is xor".into(),
        ));
    }
    let mode = match (spec.kind, args.allow_reset) {
        (GameKind::Xor, _) => SolveMode::Xor,
        (GameKind::XorStar, false) => SolveMode::XorStarReversible,
        (GameKind::XorStar, true) => SolveMode::XorStarIrreversible,
    };
    let cfg = OptimizerConfig {
        restarts: args.restarts,
        seed: args.seed,
        ..Default::default()
    };
    let result = match args.model {
        Model::Classical => classical_value(&spec, mode).map_err(solver_error)?,
        Model::Quantum => quantum_value(&spec, mode, &cfg).map_err(solver_error)?,
    };

    let (stamp, reproducible) = timestamp();
    let result = if reproducible {
        result.without_timing()
    } else {
        result
    };

    let model_name = match args.model {
        Model::Classical => "classical",
        Model::Quantum => "quantum",
    };
    let kind_name = match spec.kind {
        GameKind::Xor => "xor",
        GameKind::XorStar => "xor_star",
    };
    let mut table = vec![
        format!("game         {} ({kind_name})", spec.name),
        format!("mode         {mode}"),
        format!("model        {model_name}"),
        format!("value        {:.16}", result.value),
    ];
    if let Some(expected) = &game.expected {
        let line = expected_line(expected, mode, args.model, result.value, args.tol);
        if !line.is_empty() {
            table.push(line);
        }
    }
    table.push(format!("converged    {}", result.converged));
    table.push(format!("restarts     {}", result.restarts_used));
    table.push(format!("seed         {}", cfg.seed));

    let envelope = ResultEnvelope::new(
        spec,
        format!("{model_name}:{mode}"),
        cfg,
        EnvelopeResult::Solve(result),
        stamp,
    );
    emit(&envelope, args.format, &args.out, table.join("\n"))?;
    Ok(0)
}

fn cmd_dual(args: DualArgs) -> Result<u8, CliError> {
    let (xor, star) = if let Some(pair) = resolve_pair(&args.game, args.n)? {
        if args.game_star.is_some() {
            return Err(CliError::Usage(
                "give either a catalog key or two game files, not both".into(),
            ));
        }
        (pair.xor, pair.xor_star)
    } else {
        if args.n.is_some() {
            return Err(CliError::Usage(
                "--n only applies to the odd_cycle catalog key".into(),
            ));
        }
        let star_path = args.game_star.as_ref().ok_or_else(|| {
            CliError::Usage(format!(
                "'{}' is not a catalog key; dual needs the XOR and XOR* game files",
                args.game
            ))
        })?;
        (
            io::load_game(Path::new(&args.game)).map_err(io_error)?,
            io::load_game(Path::new(star_path)).map_err(io_error)?,
        )
    };

    let cfg = OptimizerConfig {
        restarts: args.restarts,
        seed: args.seed,
        ..Default::default()
    };
    let report = compare_dual_pair(&xor, &star, &cfg).map_err(solver_error)?;

    let table = format!(
        "dual pair       {}\n\
         omega_c xor     {:.16}\n\
         omega_q xor     {:.16}\n\
         omega_c xor*    {:.16}\n\
         omega_q xor*    {:.16}\n\
         gap xor         {:.16}\n\
         gap xor*        {:.16}\n\
         max |delta|     {:.3e}\n\
         verdict         {}",
        report.game_name,
        report.omega_c_xor,
        report.omega_q_xor,
        report.omega_c_xorstar_rev,
        report.omega_q_xorstar_rev,
        report.gap_xor,
        report.gap_xorstar,
        report.max_abs_discrepancy,
        if report.pass { "PASS" } else { "FAIL" }
    );

    let (stamp, _) = timestamp();
    let pass = report.pass;
    let envelope = ResultEnvelope::new(xor, "dual", cfg, EnvelopeResult::Dual(Box::new(report)), stamp);
    emit(&envelope, args.format, &args.out, table)?;
    Ok(if pass { 0 } else { 4 })
}

fn cmd_catalog(args: CatalogArgs) -> Result<u8, CliError> {
    let rows = catalog::entries();
    match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            s.push('\n');
            print!("{s}");
        }
        Format::Table => {
            println!(
                "{:<12} {:>7} {:<9} {:>10} {:>10}  notes",
                "key", "|S|x|T|", "native", "omega_c", "omega_q"
            );
            for row in rows {
                let kind = match row.native_kind {
                    GameKind::Xor => "xor",
                    GameKind::XorStar => "xor_star",
                };
                let mut notes = String::new();
                if let Some(n) = row.param_n {
                    notes.push_str(&format!("n={n} (--n, odd >= 3)"));
                }
                if let Some(irr) = row.expected.irreversible {
                    if !notes.is_empty() {
                        notes.push_str("; ");
                    }
                    notes.push_str(&format!(
                        "with resets: classical {}, quantum >= {:.3}",
                        irr.classical.value, irr.quantum_at_least
                    ));
                }
                println!(
                    "{:<12} {:>3}x{:<3} {:<9} {:>10.6} {:>10.6}  {notes}",
                    row.key,
                    row.s_card,
                    row.t_card,
                    kind,
                    row.expected.classical_xor.value,
                    row.expected.quantum_xor.value,
                );
            }
        }
    }
    Ok(0)
}

fn cmd_map_strategy(args: MapStrategyArgs) -> Result<u8, CliError> {
    let strategy = io::load_strategy(&args.strategy).map_err(io_error)?;
    let (xor, star) = match resolve_pair(&args.game, args.n)? {
        Some(pair) => (pair.xor, pair.xor_star),
        None => {
            let spec = io::load_game(Path::new(&args.game)).map_err(io_error)?;
            let twin_name = format!("{}_twin", spec.name);
            match spec.kind {
                GameKind::Xor => {
                    let star = spec.with_kind(GameKind::XorStar, twin_name);
                    (spec, star)
                }
                GameKind::XorStar => {
                    let xor = spec.with_kind(GameKind::Xor, twin_name);
                    (xor, spec)
                }
            }
        }
    };

    let (value_source, value_mapped, mapped) = match (&strategy, args.to) {
        (Strategy::QXorstar(strat), MapTarget::Xor) => {
            if !strat.is_reversible() {
                return Err(CliError::Usage(
                    "strategy contains reset operations; only reversible strategies map to xor"
                        .into(),
                ));
            }
            let mapped = map_xorstar_to_xor(strat).map_err(solver_error)?;
            let v_star = eval_quantum_xorstar(&star, strat, true).map_err(solver_error)?;
            let v_xor = eval_quantum_xor(&xor, &mapped).map_err(solver_error)?;
            (v_star, v_xor, Strategy::QXor(mapped))
        }
        (Strategy::QXor(strat), MapTarget::Xorstar) => {
            let mapped = map_xor_to_xorstar(strat);
            let v_xor = eval_quantum_xor(&xor, strat).map_err(solver_error)?;
            let v_star = eval_quantum_xorstar(&star, &mapped, true).map_err(solver_error)?;
            (v_xor, v_star, Strategy::QXorstar(mapped))
        }
        (Strategy::QXor(_), MapTarget::Xor) | (Strategy::QXorstar(_), MapTarget::Xorstar) => {
            return Err(CliError::Usage(
                "strategy is already in the requested form".into(),
            ));
        }
        _ => {
            return Err(CliError::Usage(
                "only quantum strategies (q_xor, q_xorstar) can be mapped".into(),
            ));
        }
    };

    #[derive(serde::Serialize)]
    struct MapReport {
        direction: &'static str,
        value_source: f64,
        value_mapped: f64,
        abs_difference: f64,
        strategy: Strategy,
    }
    let report = MapReport {
        direction: match args.to {
            MapTarget::Xor => "xorstar_to_xor",
            MapTarget::Xorstar => "xor_to_xorstar",
        },
        value_source,
        value_mapped,
        abs_difference: (value_source - value_mapped).abs(),
        strategy: mapped,
    };
    let mut s =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    print!("{s}");
    if let Some(path) = &args.out {
        io::save_strategy(&report.strategy, path)
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    Ok(0)
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Dual(args) => cmd_dual(args),
        Command::Catalog(args) => cmd_catalog(args),
        Command::MapStrategy(args) => cmd_map_strategy(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}
