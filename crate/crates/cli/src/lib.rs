//! Command-line entry points and the HTTP game service.

mod commands;
pub mod engine;
mod play;
pub mod service;

use std::path::Path;
use std::sync::Arc;

use gocycles_core::format::{parse_board, FormatError};
use gocycles_core::{generate, Board, GameState, Move};
use thiserror::Error;

pub use commands::{run, Cli};

/// Exit status for bad arguments or unreadable input.
pub const EXIT_USAGE: u8 = 2;
/// Exit status when a search hits its node or memory budget.
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
    /// A negative answer: not verified, disagreements found.
    #[error("{0}")]
    Negative(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Resource(_) => EXIT_RESOURCE,
            CliError::Negative(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<gocycles_core::solver::SolveError> for CliError {
    fn from(err: gocycles_core::solver::SolveError) -> Self {
        if err.is_resource_limit() {
            CliError::Resource(err.to_string())
        } else {
            CliError::Usage(err.to_string())
        }
    }
}

/// A family string such as `j2k:3,5`, else a path to a board file.
pub fn load_board(arg: &str) -> Result<Board, CliError> {
    if let Ok(family) = arg.parse() {
        return generate(&family).map_err(|e| CliError::Usage(e.to_string()));
    }
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg)?;
        return parse_board(&text).map_err(|e| CliError::Usage(format!("{arg}: {}", describe(&e))));
    }
    // neither: report the family parse error, which lists the syntax
    let err = arg.parse::<gocycles_core::Family>().err().map(|e| e.to_string()).unwrap_or_default();
    Err(CliError::Usage(format!("{arg:?} is neither a board file nor a family ({err})")))
}

pub fn parse_board_text(text: &str) -> Result<Board, CliError> {
    parse_board(text).map_err(|e| CliError::Usage(describe(&e)))
}

fn describe(err: &FormatError) -> String {
    match err {
        FormatError::Invalid(invalid) => {
            let lines: Vec<String> = invalid.0.errors().map(|v| v.to_string()).collect();
            format!("invalid board: {}", lines.join("; "))
        }
        other => other.to_string(),
    }
}

/// One arrow: `a->b` (vertex ids) or `e:uv` / `e:vu` (edge id and
/// orientation).
pub fn parse_move(board: &Board, text: &str) -> Result<Move, String> {
    let text = text.trim();
    let parse_id = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad id {s:?} in {text:?}"));
    if let Some((a, b)) = text.split_once("->") {
        let (a, b) = (parse_id(a)?, parse_id(b)?);
        return Move::between(board, a, b).ok_or_else(|| format!("no edge between {a} and {b}"));
    }
    if let Some((e, d)) = text.split_once(':') {
        let edge = parse_id(e)?;
        if edge >= board.edge_count() {
            return Err(format!("no such edge: {edge}"));
        }
        let dir = match d.trim() {
            "uv" => gocycles_core::Orientation::TowardV,
            "vu" => gocycles_core::Orientation::TowardU,
            other => return Err(format!("orientation must be uv or vu, not {other:?}")),
        };
        return Ok(Move::new(edge, dir));
    }
    Err(format!("cannot read move {text:?}; write a->b or edge:uv"))
}

/// Replay a comma-separated move list from the empty board.
pub fn position(board: Arc<Board>, moves: Option<&str>) -> Result<GameState, CliError> {
    let mut state = GameState::new(board);
    for text in moves.unwrap_or("").split(',').filter(|s| !s.trim().is_empty()) {
        let mv = parse_move(state.board(), text).map_err(CliError::Usage)?;
        state.play(mv).map_err(|e| CliError::Usage(format!("{text}: {e}")))?;
    }
    Ok(state)
}

pub fn arrows(board: &Board, moves: &[Move]) -> String {
    if moves.is_empty() {
        return "-".into();
    }
    moves.iter().map(|m| m.display(board)).collect::<Vec<_>>().join(" ")
}
