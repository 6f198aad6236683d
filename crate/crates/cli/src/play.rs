use std::io::{BufRead, Write};
use std::sync::Arc;

use gocycles_core::solver::SearchLimits;
use gocycles_core::{Board, GameState, Orientation, Player, Status, WinReason};

use crate::engine::Engine;
use crate::{parse_move, CliError};

/// Terminal game: one move per input line (`a->b` or `edge:uv`), `quit` to
/// stop. The engine, if seated, answers on its turns.
pub fn play(
    board: Arc<Board>,
    engine: &str,
    seat: Option<Player>,
    seed: u64,
    limits: SearchLimits,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut engine = match seat {
        Some(p) => Some(Engine::new(engine, &board, p, limits, seed).map_err(|e| CliError::Usage(e.to_string()))?),
        None => None,
    };
    let mut state = GameState::new(board);
    let mut line = String::new();
    loop {
        show(&state, out)?;
        if let Status::Won { winner, reason } = state.status() {
            let why = match reason {
                WinReason::CycleCell(c) => format!("completed cell {:?}", state.board().cells()[c]),
                WinReason::LastMove => "made the last move".into(),
            };
            writeln!(out, "winner: {winner} ({why})")?;
            return Ok(());
        }
        if let (Some(engine), Some(p)) = (engine.as_mut(), seat) {
            if state.to_move() == p {
                let mv = engine.choose(&state).map_err(|e| CliError::Usage(e.to_string()))?;
                writeln!(out, "{p} ({}) plays {}", engine.kind(), mv.display(state.board()))?;
                state.play(mv).map_err(|e| CliError::Usage(format!("engine move rejected: {e}")))?;
                continue;
            }
        }
        write!(out, "{} to move> ", state.to_move())?;
        out.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 || line.trim() == "quit" {
            writeln!(out, "\nstopped after {} moves", state.marked_count())?;
            return Ok(());
        }
        match parse_move(state.board(), &line) {
            Ok(mv) => {
                if let Err(e) = state.play(mv) {
                    writeln!(out, "rejected: {e}")?;
                }
            }
            Err(e) => writeln!(out, "{e}")?,
        }
    }
}

fn show(state: &GameState, out: &mut dyn Write) -> std::io::Result<()> {
    let board = state.board();
    let unmarkable = state.unmarkable_edges();
    for e in board.edges() {
        let text = match state.mark(e.id) {
            Some(Orientation::TowardV) => format!("{}->{}", e.u, e.v),
            Some(Orientation::TowardU) => format!("{}->{}", e.v, e.u),
            None if unmarkable.contains(&e.id) => format!("{}--{} unmarkable", e.u, e.v),
            None => format!("{}--{}", e.u, e.v),
        };
        writeln!(out, "  edge {:>2}: {text}", e.id)?;
    }
    Ok(())
}
