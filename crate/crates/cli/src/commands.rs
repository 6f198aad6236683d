use std::io::{BufRead, Write};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gocycles_core::analysis::{conjecture_population, conjecture_scan, format_scan};
use gocycles_core::format::{board_to_string, GameRecord};
use gocycles_core::solver::{enumerate_terminals, solve, SearchLimits, SolveOptions, TerminalMode};
use gocycles_core::strategies::{verify_named, POLICY_NAMES};
use gocycles_core::{Board, Player};

use crate::{arrows, load_board, parse_board_text, position, CliError};

#[derive(Debug, Parser)]
#[command(name = "gocycles", version, about = "Game of Cycles: exact solver, strategy verifier and game service")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the board text of a family, e.g. `j2k:3,5` or `named:k4`.
    Gen { family: String },
    /// Solve a position exactly.
    Solve {
        #[command(flatten)]
        board: BoardArg,
        /// Moves to play first, comma separated: `a->b` or `edge:uv`.
        #[arg(long)]
        moves: Option<String>,
        #[command(flatten)]
        limits: LimitArgs,
        /// Print the full result as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Check a named strategy against every line of opponent play.
    Verify {
        #[command(flatten)]
        board: BoardArg,
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(POLICY_NAMES))]
        policy: String,
        #[arg(long, value_parser = parse_player)]
        player: Player,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Solve every generated board with minimum degree 2 and report where
    /// the winner goes against edge-count parity.
    Scan {
        #[arg(long, default_value_t = 12)]
        max_edges: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Enumerate the terminal states reachable from a position.
    Oracle {
        #[command(flatten)]
        board: BoardArg,
        #[arg(long)]
        moves: Option<String>,
        #[arg(long, value_enum, default_value_t = OracleMode::Game)]
        mode: OracleMode,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Play in the terminal against the solver, a strategy or random moves.
    Play {
        #[command(flatten)]
        board: BoardArg,
        /// `solver`, `random` or a strategy name.
        #[arg(long, default_value = "solver")]
        engine: String,
        /// The engine's seat; omit for two humans.
        #[arg(long, value_parser = parse_player)]
        player: Option<Player>,
        /// Seed for the random engine.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Serve the HTTP game API.
    Serve {
        #[arg(long, env = "GOCYCLES_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Boards with more edges get a "too large" answer from analysis.
        #[arg(long, default_value_t = 14)]
        max_analysis_edges: usize,
        /// Write each game's record here after every move.
        #[arg(long)]
        record_dir: Option<std::path::PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Debug, Args)]
pub struct BoardArg {
    /// Family string or board file.
    #[arg(long, required_unless_present = "stdin", conflicts_with = "stdin")]
    pub board: Option<String>,
    /// Read the board text from standard input.
    #[arg(long)]
    pub stdin: bool,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, default_value_t = SearchLimits::default().max_nodes)]
    pub max_nodes: u64,
}

impl LimitArgs {
    fn limits(&self) -> SearchLimits {
        SearchLimits { max_nodes: self.max_nodes, ..SearchLimits::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    /// Stop at the first completed cell.
    Game,
    /// Ignore cells and mark until nothing is markable.
    Exhaustive,
}

fn parse_player(s: &str) -> Result<Player, String> {
    s.parse::<u8>().ok().and_then(Player::from_number).ok_or_else(|| format!("player must be 1 or 2, not {s:?}"))
}

impl BoardArg {
    fn load(&self, stdin: &mut dyn BufRead) -> Result<Arc<Board>, CliError> {
        let board = match &self.board {
            Some(arg) => load_board(arg)?,
            None => {
                let mut text = String::new();
                stdin.read_to_string(&mut text)?;
                parse_board_text(&text)?
            }
        };
        Ok(Arc::new(board))
    }
}

/// Run the command line `args` (program name first). Returns the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err_out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            // help and version requests are not errors
            let text = err.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err_out.write_all(text.as_bytes()) };
            return code as u8;
        }
    };
    match execute(cli, stdin, out) {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(err_out, "error: {err}");
            err.exit_code()
        }
    }
}

fn execute(cli: Cli, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { family } => {
            let board = load_board(&family)?;
            write!(out, "{}", board_to_string(&board))?;
        }
        Command::Solve { board, moves, limits, json } => {
            let board = board.load(stdin)?;
            let state = position(board.clone(), moves.as_deref())?;
            if let Some(winner) = state.status().winner() {
                writeln!(out, "game over\nwinner: {winner}")?;
                return Ok(());
            }
            let res = solve(&state, &limits.limits())?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&res).expect("results serialize"))?;
            } else {
                writeln!(out, "board: {} ({} edges)", board.name(), board.edge_count())?;
                writeln!(out, "to move: {}", res.to_move)?;
                writeln!(out, "winner: {}", res.winner)?;
                writeln!(out, "winning moves: {}", arrows(&board, &res.winning_moves))?;
                writeln!(out, "principal line: {}", arrows(&board, &res.principal_line))?;
                writeln!(out, "nodes: {} in {} ms", res.stats.nodes, res.stats.millis())?;
            }
        }
        Command::Verify { board, policy, player, limits } => {
            let board = board.load(stdin)?;
            let r = verify_named(&policy, &board, player, &limits.limits())?;
            writeln!(out, "policy: {policy} as {player} on {}", board.name())?;
            writeln!(out, "verified: {}", r.verified)?;
            writeln!(out, "opponent nodes: {}, policy moves: {}", r.opponent_nodes, r.policy_moves)?;
            if !r.verified {
                let reason = r.reason.unwrap_or_default();
                writeln!(out, "reason: {reason}")?;
                if !r.counterexample.is_empty() {
                    writeln!(out, "counterexample: {}", arrows(&board, &r.counterexample))?;
                    writeln!(out, "{}", GameRecord::from_moves(&board, &r.counterexample).to_json())?;
                }
                return Err(CliError::Negative(format!("{policy} is not verified: {reason}")));
            }
        }
        Command::Scan { max_edges, limits } => {
            let report = conjecture_scan(&conjecture_population(max_edges), &SolveOptions::from(limits.limits()));
            write!(out, "{}", format_scan(&report))?;
            if report.errors > 0 {
                return Err(CliError::Resource(format!("{} boards could not be solved", report.errors)));
            }
            if report.disagreements > 0 {
                return Err(CliError::Negative(format!("{} boards go against edge parity", report.disagreements)));
            }
        }
        Command::Oracle { board, moves, mode, limits } => {
            let board = board.load(stdin)?;
            let state = position(board, moves.as_deref())?;
            let mode = match mode {
                OracleMode::Game => TerminalMode::GameRules,
                OracleMode::Exhaustive => TerminalMode::Exhaustive,
            };
            let census = enumerate_terminals(&state, &limits.limits(), mode, |_| {})?;
            writeln!(out, "{}", serde_json::to_string_pretty(&census).expect("census serializes"))?;
        }
        Command::Play { board, engine, player, seed, limits } => {
            // the board may come from stdin only when moves do not
            if board.stdin {
                return Err(CliError::Usage("play reads moves from standard input; pass --board".into()));
            }
            let board = board.load(stdin)?;
            crate::play::play(board, &engine, player, seed, limits.limits(), stdin, out)?;
        }
        Command::Serve { port, host, max_analysis_edges, record_dir, limits } => {
            let config = crate::service::Config {
                max_analysis_edges,
                limits: limits.limits(),
                record_dir,
                ..Default::default()
            };
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(crate::service::serve(&host, port, config, out))?;
        }
    }
    Ok(())
}
