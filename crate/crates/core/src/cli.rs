//! Command-line front end. `run` never exits the process, so every command
//! can be driven from tests with in-memory streams.
//!
//! Exit codes: 0 success, 1 verification violations, 2 usage or input error.

use std::io::{self, BufRead, Write};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{
    comparison_table, empirical_density, exact_losing_count, periodicity_check, DensityReport,
    OutcomeSource, PeriodicityReport,
};
use crate::chain_rsa::{evaluate_chain, flatten_exponent, ChainSpec};
use crate::collapse::{alignment_hypothesis_scan, divisor_collapse_check, DivisorGameSpec};
use crate::error::{Error, Result};
use crate::finite_field::{field_from_text, FieldSpec};
use crate::game_core::{GameSpec, Move, Outcome, Position, RegionTag, Solver};
use crate::grundy::{grundy_standard, product_sg, SgIndexing};
use crate::verify::{self, SuiteReport};

#[derive(Debug, Parser)]
#[command(
    name = "pcg",
    version,
    about = "Product-congruence games: analysis, verification and play"
)]
struct Cli {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SpecArgs {
    /// Numeric game PCG(M, R)
    #[arg(long, global = true, value_name = "M")]
    numeric: Option<u64>,
    /// Losing residues for --numeric, comma separated
    #[arg(long, global = true, value_delimiter = ',', default_value = "1")]
    losing: Vec<u64>,
    /// Allow heaps that share a factor with M
    #[arg(long, global = true)]
    permissive: bool,
    /// Field game over GF(2^n) given by its modulus bitmask, e.g. 0x11B
    #[arg(long, global = true, value_name = "HEXPOLY")]
    field: Option<String>,
    /// Chain game N,G (played on its compressed numeric game)
    #[arg(long, global = true, value_name = "N,G")]
    chain: Option<String>,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Also write CSV rows here (density, period, collapse)
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Outcome, region and invariant of a position
    Analyze(HeapsArg),
    /// Legal moves of a position
    Moves(HeapsArg),
    /// Repair move of a non-losing position
    Repair(HeapsArg),
    /// Single-heap normal form
    Normalize(HeapsArg),
    /// Classical Grundy value and, in the Threshold Region, the product-SG value
    Grundy(HeapsArg),
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Exact (one period) or empirical (--bound) losing density
    Density(DensityArgs),
    /// Periodicity of the outcome in one heap
    Period(PeriodArgs),
    /// Divisor-collapse check and alignment scan
    Collapse(CollapseArgs),
    /// Evaluate the exponent chain of a heap vector
    Chain(ChainArgs),
    /// Side-by-side table of the chain, field and numeric instances
    Table(TableArgs),
    /// Play against the engine
    Play(PlayArgs),
}

#[derive(Debug, Args)]
struct HeapsArg {
    #[arg(long, value_delimiter = ',', required = true)]
    heaps: Vec<u64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// compression | threshold | repair | normalize | sg | density | periodicity | collapse | aes | crt | all
    suite: String,
    #[arg(long = "N")]
    modulus: Option<u64>,
    #[arg(long)]
    g: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use game-tree outcomes everywhere (periodicity)
    #[arg(long)]
    game_tree: bool,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Count over [1, bound]^n instead of one period
    #[arg(long)]
    bound: Option<u64>,
    /// Attach the game-tree P count for the same box
    #[arg(long)]
    game_tree: bool,
}

#[derive(Debug, Args)]
struct PeriodArgs {
    /// Fixed heaps; x is inserted at --j
    #[arg(long, value_delimiter = ',')]
    heaps: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    j: usize,
    #[arg(long)]
    x_max: Option<u64>,
    #[arg(long)]
    game_tree: bool,
}

#[derive(Debug, Args)]
struct CollapseArgs {
    #[arg(long)]
    m: u64,
    /// Lower end of the scan
    #[arg(long = "M", default_value_t = 2)]
    start: u64,
    #[arg(long, default_value_t = 100)]
    bound: u64,
    /// Also check one position, moving heap --j
    #[arg(long, value_delimiter = ',')]
    heaps: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    j: usize,
}

#[derive(Debug, Args)]
struct ChainArgs {
    #[arg(long = "N")]
    modulus: u64,
    #[arg(long)]
    g: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    heaps: Vec<u64>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long = "N", default_value_t = 15)]
    modulus: u64,
    #[arg(long, default_value_t = 2)]
    g: u64,
    #[arg(long, default_value_t = 6)]
    m: u64,
}

#[derive(Debug, Args)]
struct PlayArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    heaps: Vec<u64>,
    /// The human moves first
    #[arg(long)]
    human_first: bool,
}

/// Runs the CLI on the process streams.
pub fn run(argv: Vec<String>) -> i32 {
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    run_with(argv, &mut input, &mut out, &mut err)
}

/// Runs the CLI on the given streams and returns the exit code.
pub fn run_with(
    argv: Vec<String>,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli, input, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn io_err(e: io::Error) -> Error {
    Error::PreconditionViolated(format!("i/o: {e}"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::PreconditionViolated(format!("csv: {e}"))
}

fn spec_from(args: &SpecArgs) -> Result<GameSpec> {
    let given = [
        args.numeric.is_some(),
        args.field.is_some(),
        args.chain.is_some(),
    ];
    match given.iter().filter(|&&b| b).count() {
        0 => {
            return Err(Error::InvalidSpec(
                "one of --numeric, --field, --chain is required".into(),
            ))
        }
        1 => {}
        _ => {
            return Err(Error::InvalidSpec(
                "--numeric, --field and --chain are exclusive".into(),
            ))
        }
    }
    if let Some(m) = args.numeric {
        return GameSpec::numeric(m, args.losing.iter().copied(), !args.permissive);
    }
    if let Some(text) = &args.field {
        return Ok(GameSpec::Field(field_from_text(text, 2)?));
    }
    let chain = parse_chain(args.chain.as_deref().expect("checked"))?;
    crate::chain_rsa::chain_game(&chain, !args.permissive)
}

fn parse_chain(text: &str) -> Result<ChainSpec> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let nums: Vec<u64> = parts
        .iter()
        .map(|p| p.parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidSpec(format!("--chain expects N,G, got {text}")))?;
    match nums.as_slice() {
        [n, g] => ChainSpec::new(*n, *g),
        _ => Err(Error::InvalidSpec(format!(
            "--chain expects N,G, got {text}"
        ))),
    }
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    json: bool,
    value: &T,
    text: impl FnOnce() -> String,
) -> Result<()> {
    if json {
        let s = serde_json::to_string_pretty(value)
            .map_err(|e| Error::PreconditionViolated(e.to_string()))?;
        writeln!(out, "{s}").map_err(io_err)
    } else {
        writeln!(out, "{}", text()).map_err(io_err)
    }
}

#[derive(Serialize)]
struct Analysis {
    spec: GameSpec,
    position: Position,
    invariant: u64,
    predicate_losing: bool,
    region: RegionTag,
    /// Invariant verdict in the Threshold Region, search elsewhere.
    outcome: Outcome,
    /// Pure game-tree verdict, when the game supports search.
    game_tree_outcome: Option<Outcome>,
    winning_move: Option<Move>,
}

fn dispatch(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32> {
    let json = cli.spec.json;
    match &cli.command {
        Command::Analyze(a) => {
            let spec = spec_from(&cli.spec)?;
            let pos = Position::new(a.heaps.clone());
            let mut solver = Solver::new(spec.clone());
            let outcome = solver.outcome(&pos)?;
            let game_tree_outcome = if spec.is_game_tree_consistent() {
                Some(solver.outcome_bruteforce(&pos)?)
            } else {
                None
            };
            let winning_move = match game_tree_outcome.unwrap_or(outcome) {
                Outcome::P => None,
                Outcome::N => engine_move(&spec, &mut solver, &pos)?,
            };
            let report = Analysis {
                invariant: spec.invariant_label(&pos.heaps),
                predicate_losing: spec.is_losing_predicate(&pos)?,
                region: spec.region(&pos)?,
                outcome,
                game_tree_outcome,
                winning_move,
                position: pos,
                spec,
            };
            emit(out, json, &report, || {
                let mut s = format!(
                    "{}\nposition {}\noutcome {}\nregion {}\ninvariant {}\npredicate {}",
                    report.spec,
                    report.position,
                    report.outcome,
                    report.region,
                    report.invariant,
                    if report.predicate_losing {
                        "losing"
                    } else {
                        "not losing"
                    }
                );
                if let Some(g) = report.game_tree_outcome.filter(|&g| g != report.outcome) {
                    s.push_str(&format!("\ngame tree {g}"));
                }
                if let Some(mv) = report.winning_move {
                    s.push_str(&format!("\nwinning move {mv}"));
                }
                s
            })?;
            Ok(0)
        }
        Command::Moves(a) => {
            let spec = spec_from(&cli.spec)?;
            let pos = Position::new(a.heaps.clone());
            let mut rows = Vec::new();
            for mv in spec.legal_moves(&pos)? {
                let next = spec.apply_move(&pos, mv)?;
                let losing = spec.is_losing_predicate(&next)?;
                rows.push((mv, next, losing));
            }
            emit(out, json, &rows, || {
                let lines: Vec<String> = rows
                    .iter()
                    .map(|(mv, next, losing)| {
                        format!("{mv} -> {next}{}", if *losing { "  losing" } else { "" })
                    })
                    .collect();
                format!("{} moves\n{}", rows.len(), lines.join("\n"))
            })?;
            Ok(0)
        }
        Command::Repair(a) => {
            let spec = spec_from(&cli.spec)?;
            let pos = Position::new(a.heaps.clone());
            let mv = spec.repair_move(&pos)?;
            let next = spec.apply_move(&pos, mv)?;
            emit(out, json, &(mv, &next), || format!("{mv} -> {next}"))?;
            Ok(0)
        }
        Command::Normalize(a) => {
            let spec = spec_from(&cli.spec)?;
            let pos = Position::new(a.heaps.clone());
            let norm = spec.normalize(&pos)?;
            emit(out, json, &norm, || format!("{pos} -> {norm}"))?;
            Ok(0)
        }
        Command::Grundy(a) => {
            let spec = spec_from(&cli.spec)?;
            let pos = Position::new(a.heaps.clone());
            let classical = grundy_standard(&spec, &pos)?;
            let ix = SgIndexing::canonical(&spec);
            let product = product_sg(&spec, &pos, &ix).ok();
            emit(out, json, &(classical, product), || match product {
                Some(v) => format!(
                    "grundy {classical}\nproduct-sg {} (index {})",
                    v.element, v.idx
                ),
                None => format!("grundy {classical}\nproduct-sg undefined here"),
            })?;
            Ok(0)
        }
        Command::Verify(v) => run_verify(&cli.spec, v, out),
        Command::Density(d) => {
            let spec = spec_from(&cli.spec)?;
            let mut report: DensityReport = match d.bound {
                Some(b) => empirical_density(&spec, d.n, b)?,
                None => exact_losing_count(&spec, d.n)?,
            };
            if d.game_tree {
                report = report.with_game_tree(&spec)?;
            }
            if let Some(path) = &cli.spec.csv {
                let file = std::fs::File::create(path).map_err(io_err)?;
                DensityReport::write_csv(std::slice::from_ref(&report), file).map_err(csv_err)?;
            }
            emit(out, json, &report, || {
                let mut s = format!(
                    "{} n={}: {} of {} losing, ratio {} ({:.6}), predicted {}",
                    report.spec,
                    report.n,
                    report.losing,
                    report.total,
                    report.ratio,
                    report.ratio.value(),
                    report.predicted
                );
                if let Some(g) = report.game_tree_losing {
                    s.push_str(&format!("\ngame-tree P positions: {g}"));
                }
                s
            })?;
            Ok(0)
        }
        Command::Period(p) => {
            let spec = spec_from(&cli.spec)?;
            let x_max = p.x_max.unwrap_or(4 * spec.modulus());
            let source = if p.game_tree {
                OutcomeSource::GameTree
            } else {
                OutcomeSource::Classifier
            };
            let report = periodicity_check(&spec, &p.heaps, p.j, x_max, source)?;
            if let Some(path) = &cli.spec.csv {
                let file = std::fs::File::create(path).map_err(io_err)?;
                PeriodicityReport::write_csv(std::slice::from_ref(&report), file)
                    .map_err(csv_err)?;
            }
            emit(out, json, &report, || {
                format!(
                    "{} context {:?}, j={}, x in [{}, {}]: {} compared, violations {:?}",
                    report.spec,
                    report.context,
                    report.j,
                    report.x_range.0,
                    report.x_range.1,
                    report.rows.len(),
                    report.violations
                )
            })?;
            Ok(if report.violations.is_empty() { 0 } else { 1 })
        }
        Command::Collapse(c) => {
            let scan = alignment_hypothesis_scan(c.m, c.start, c.bound)?;
            if let Some(path) = &cli.spec.csv {
                let file = std::fs::File::create(path).map_err(io_err)?;
                scan.write_csv(file).map_err(csv_err)?;
            }
            let check = if c.heaps.is_empty() {
                None
            } else {
                Some(divisor_collapse_check(
                    &DivisorGameSpec::new(c.m)?,
                    &c.heaps,
                    c.j,
                )?)
            };
            emit(out, json, &(&scan, &check), || {
                let mut s = format!(
                    "divisor game mod {}, t in [{}, {}]: failures {:?}",
                    c.m,
                    c.start,
                    c.bound,
                    scan.failures()
                );
                if let Some(ch) = &check {
                    s.push_str(&format!(
                        "\nheap {}: reachable {:?}, transitive {}, literal {:?}",
                        c.j, ch.reachable_units, ch.transitive, ch.literal_reachable
                    ));
                }
                s
            })?;
            Ok(0)
        }
        Command::Chain(c) => {
            let chain = ChainSpec::new(c.modulus, c.g)?;
            let value = evaluate_chain(&chain, &c.heaps)?;
            let flat = flatten_exponent(&c.heaps, chain.order());
            #[derive(Serialize)]
            struct ChainOut {
                k: u64,
                value: u64,
                exponent: u64,
                reduced: bool,
                losing: bool,
            }
            let report = ChainOut {
                k: chain.order(),
                value,
                exponent: flat.exponent,
                reduced: flat.reduced,
                losing: value == chain.generator(),
            };
            emit(out, json, &report, || {
                format!(
                    "k = {}\nE(h) = {}\nH = {}{}\n{}",
                    report.k,
                    report.value,
                    report.exponent,
                    if report.reduced { " (mod k)" } else { "" },
                    if report.losing {
                        "losing"
                    } else {
                        "not losing"
                    }
                )
            })?;
            Ok(0)
        }
        Command::Table(t) => {
            let field = match &cli.spec.field {
                Some(text) => field_from_text(text, 2)?,
                None => FieldSpec::aes(),
            };
            let chain = match &cli.spec.chain {
                Some(text) => parse_chain(text)?,
                None => ChainSpec::new(t.modulus, t.g)?,
            };
            let table = comparison_table(&chain, &field, t.m)?;
            emit(out, json, &table, || table.to_markdown())?;
            Ok(0)
        }
        Command::Play(p) => {
            let spec = spec_from(&cli.spec)?;
            let transcript = play(
                &spec,
                &Position::new(p.heaps.clone()),
                p.human_first,
                input,
                out,
            )?;
            if json {
                emit(out, true, &transcript, String::new)?;
            }
            Ok(0)
        }
    }
}

fn run_verify(args: &SpecArgs, v: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    if !verify::is_suite(&v.suite) {
        return Err(Error::InvalidSpec(format!(
            "unknown suite {}; expected one of {} or all",
            v.suite,
            verify::SUITES.join(", ")
        )));
    }
    let m = v.m.unwrap_or(4);
    let spec_or_mum = || -> Result<GameSpec> {
        if args.numeric.is_some() || args.field.is_some() || args.chain.is_some() {
            spec_from(args)
        } else {
            GameSpec::mum(m)
        }
    };
    let reports: Vec<SuiteReport> = match v.suite.as_str() {
        "compression" => {
            let chain = ChainSpec::new(v.modulus.unwrap_or(15), v.g.unwrap_or(2))?;
            vec![verify::compression_suite(
                &chain,
                v.bound.unwrap_or(8),
                v.n.unwrap_or(3),
            )?]
        }
        "threshold" => {
            let ns: Vec<usize> = v.n.map_or(vec![2, 3], |n| vec![n]);
            vec![verify::threshold_suite(m, &ns, v.bound.unwrap_or(3 * m))?]
        }
        "repair" | "normalize" => {
            let spec = spec_or_mum()?;
            let ns: Vec<usize> = v.n.map_or(vec![2, 3], |n| vec![n]);
            let bound = v.bound.unwrap_or(match spec {
                GameSpec::Field(ref f) => f.q() - 1,
                _ => 3 * spec.modulus(),
            });
            if v.suite == "repair" {
                vec![verify::repair_suite(&spec, &ns, bound)?]
            } else {
                vec![verify::normalize_suite(&spec, &ns, bound)?]
            }
        }
        "sg" => {
            let spec = spec_or_mum()?;
            let bound = v.bound.unwrap_or(match spec {
                GameSpec::Field(ref f) => f.q() - 1,
                _ => 3 * spec.modulus(),
            });
            vec![verify::sg_suite(&spec, v.n.unwrap_or(3), 2, bound)?]
        }
        "density" => {
            let spec = spec_or_mum()?;
            match v.bound {
                Some(b) => vec![verify::empirical_density_suite(
                    &spec,
                    v.n.unwrap_or(2),
                    b,
                    0.05,
                )?],
                None => vec![verify::density_suite(&spec, &[v.n.unwrap_or(2)])?],
            }
        }
        "periodicity" => {
            let source = if v.game_tree {
                OutcomeSource::GameTree
            } else {
                OutcomeSource::Classifier
            };
            vec![verify::periodicity_suite(m, v.n.unwrap_or(3), 4, source)?]
        }
        "collapse" => vec![verify::collapse_suite(
            v.m.unwrap_or(6),
            3,
            v.bound.unwrap_or(200),
        )?],
        "aes" => {
            let field = match &args.field {
                Some(text) => field_from_text(text, 2)?,
                None => FieldSpec::aes(),
            };
            vec![verify::aes_suite(&field)?]
        }
        "crt" => vec![verify::crt_suite(v.seed, 10_000)?],
        _ => verify::all_suites(v.seed)?,
    };
    let clean = reports.iter().all(SuiteReport::passed);
    if args.json {
        emit(out, true, &reports, String::new)?;
    } else {
        for r in &reports {
            writeln!(out, "{r}").map_err(io_err)?;
        }
    }
    Ok(if clean { 0 } else { 1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Player {
    Human,
    Engine,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Turn {
    pub player: Player,
    pub mv: Move,
    pub after: Position,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub start: Position,
    pub turns: Vec<Turn>,
    pub winner: Player,
}

/// The engine's choice: repair when it wins from a Threshold position, a
/// game-tree winning move otherwise, and the first legal move when lost.
/// A repair landing the oracle does not confirm as `P` is replaced by a
/// searched winning move.
pub fn engine_move(spec: &GameSpec, solver: &mut Solver, pos: &Position) -> Result<Option<Move>> {
    let moves = spec.legal_moves(pos)?;
    if moves.is_empty() {
        return Ok(None);
    }
    let searchable = spec.is_game_tree_consistent();
    if spec.region(pos)? == RegionTag::Threshold
        && !spec.is_losing_predicate(pos)?
        && spec.has_singleton_losing_set()
    {
        let mv = spec.repair_move(pos)?;
        let next = spec.apply_move(pos, mv)?;
        if !searchable || solver.outcome_bruteforce(&next)? == Outcome::P {
            return Ok(Some(mv));
        }
    }
    if searchable {
        if let Some(mv) = solver.winning_move(pos)? {
            return Ok(Some(mv));
        }
    }
    Ok(Some(moves[0]))
}

/// Interactive game. The human enters `HEAP VALUE` (heap numbered from 1);
/// illegal input is re-prompted, `q` resigns.
pub fn play(
    spec: &GameSpec,
    start: &Position,
    human_first: bool,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<Transcript> {
    spec.validate(start)?;
    let mut solver = Solver::new(spec.clone());
    let mut pos = start.clone();
    let mut turns = Vec::new();
    let mut to_move = if human_first {
        Player::Human
    } else {
        Player::Engine
    };
    writeln!(out, "{spec}, start {pos}").map_err(io_err)?;
    loop {
        if spec.legal_moves(&pos)?.is_empty() {
            let winner = match to_move {
                Player::Human => Player::Engine,
                Player::Engine => Player::Human,
            };
            writeln!(out, "no moves left, {winner:?} wins").map_err(io_err)?;
            return Ok(Transcript {
                start: start.clone(),
                turns,
                winner,
            });
        }
        let mv = match to_move {
            Player::Engine => engine_move(spec, &mut solver, &pos)?.expect("moves exist"),
            Player::Human => match read_human_move(spec, &pos, input, out)? {
                Some(mv) => mv,
                None => {
                    writeln!(out, "human resigns").map_err(io_err)?;
                    return Ok(Transcript {
                        start: start.clone(),
                        turns,
                        winner: Player::Engine,
                    });
                }
            },
        };
        pos = spec.apply_move(&pos, mv)?;
        writeln!(
            out,
            "{to_move:?}: heap {} -> {}, now {pos}",
            mv.heap_index + 1,
            mv.new_value
        )
        .map_err(io_err)?;
        turns.push(Turn {
            player: to_move,
            mv,
            after: pos.clone(),
        });
        to_move = match to_move {
            Player::Human => Player::Engine,
            Player::Engine => Player::Human,
        };
    }
}

fn read_human_move(
    spec: &GameSpec,
    pos: &Position,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<Option<Move>> {
    loop {
        write!(out, "{pos} your move (heap value): ").map_err(io_err)?;
        out.flush().map_err(io_err)?;
        let mut line = String::new();
        if input.read_line(&mut line).map_err(io_err)? == 0 {
            return Ok(None);
        }
        let line = line.trim();
        if line == "q" {
            return Ok(None);
        }
        let nums: Vec<u64> = line
            .split_whitespace()
            .filter_map(|w| w.parse().ok())
            .collect();
        if let [heap, value] = nums[..] {
            if heap >= 1 {
                let mv = Move {
                    heap_index: heap as usize - 1,
                    new_value: value,
                };
                if spec.apply_move(pos, mv).is_ok() {
                    return Ok(Some(mv));
                }
            }
        }
        writeln!(out, "illegal move, try again").map_err(io_err)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &str, stdin: &str) -> (i32, String, String) {
        let argv = std::iter::once("pcg".to_string())
            .chain(args.split_whitespace().map(String::from))
            .collect();
        let mut input = io::Cursor::new(stdin.as_bytes().to_vec());
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(argv, &mut input, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn analyze_paper_example() {
        let (code, out, _) = run_str("analyze --numeric 4 --losing 1 --heaps 5,1", "");
        assert_eq!(code, 0);
        assert!(out.contains("outcome P"));
        assert!(out.contains("region Threshold"));
        assert!(out.contains("invariant 1"));
    }

    #[test]
    fn verify_compression_summary() {
        let (code, out, _) = run_str("verify compression --N 15 --g 2 --bound 8 --n 3", "");
        assert_eq!(code, 0);
        assert!(out.contains("512 positions, 0 counterexamples"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str("analyze --heaps 5,1", "").0, 2);
        assert_eq!(
            run_str("analyze --numeric 4 --field 0x11B --heaps 5,1", "").0,
            2
        );
        assert_eq!(run_str("frobnicate", "").0, 2);
        assert_eq!(run_str("verify nonsense", "").0, 2);
        assert_eq!(run_str("analyze --numeric 4 --heaps 2,1", "").0, 2);
    }

    #[test]
    fn verify_exit_code_tracks_violations() {
        assert_eq!(run_str("verify threshold --m 4", "").0, 0);
        assert_eq!(run_str("verify threshold --m 5 --n 2", "").0, 1);
    }

    #[test]
    fn table_markdown() {
        let (code, out, _) = run_str("table --N 15 --g 2 --field 0x11B --m 6", "");
        assert_eq!(code, 0);
        assert!(out.contains("| Compression modulus | 4 | 255 | 6 |"));
    }

    #[test]
    fn engine_repairs_then_wins() {
        let spec = GameSpec::mum(4).unwrap();
        let mut out = Vec::new();
        // human answers (3,3) with 3 -> 1 on heap 1, engine mirrors
        let mut input = io::Cursor::new(b"1 1\n".to_vec());
        let t = play(
            &spec,
            &Position::new(vec![5, 3]),
            false,
            &mut input,
            &mut out,
        )
        .unwrap();
        assert_eq!(
            t.turns[0].mv,
            Move {
                heap_index: 0,
                new_value: 3
            }
        );
        assert_eq!(t.winner, Player::Engine);
    }

    #[test]
    fn illegal_human_move_is_reprompted() {
        let spec = GameSpec::mum(4).unwrap();
        let mut out = Vec::new();
        // 5 -> 1 keeps the residue, then 5 -> 3 is fine
        let mut input = io::Cursor::new(b"1 1\n1 3\nq\n".to_vec());
        let t = play(
            &spec,
            &Position::new(vec![5, 3]),
            true,
            &mut input,
            &mut out,
        )
        .unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("illegal move"));
        assert_eq!(
            t.turns[0].mv,
            Move {
                heap_index: 0,
                new_value: 3
            }
        );
    }

    #[test]
    fn json_output_parses() {
        let (code, out, _) = run_str("analyze --numeric 5 --heaps 7,3 --json", "");
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["region"], "Threshold");
        assert_eq!(v["outcome"], "P");
        // (3,3) is P in the Indeterminacy Region, so 7 -> 3 wins
        assert_eq!(v["game_tree_outcome"], "N");
        assert_eq!(v["winning_move"]["new_value"], 3);
    }
}
