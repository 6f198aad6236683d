//! Text formats: boards and game records, both JSON.
//!
//! The board text is canonical: fields in declaration order, two-space
//! indentation, shortest round-trip float formatting, trailing newline. So
//! emit, parse and emit again is byte-identical.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{Board, BoardDef, InvalidBoard};
use crate::game::{GameState, Move, MoveError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] InvalidBoard),
    #[error("record is for board {expected} ({expected_hash}) but got {actual} ({actual_hash})")]
    BoardMismatch { expected: String, expected_hash: String, actual: String, actual_hash: String },
    #[error("record move {index}: {source}")]
    Replay { index: usize, source: MoveError },
}

pub fn board_to_string(board: &Board) -> String {
    def_to_string(board.def())
}

pub fn def_to_string(def: &BoardDef) -> String {
    let mut text = serde_json::to_string_pretty(def).expect("board definitions serialize");
    text.push('\n');
    text
}

pub fn parse_board_def(text: &str) -> Result<BoardDef, FormatError> {
    Ok(serde_json::from_str(text)?)
}

/// Parse and validate a board.
pub fn parse_board(text: &str) -> Result<Board, FormatError> {
    Ok(Board::new(parse_board_def(text)?)?)
}

/// A game as a board reference plus its move list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub board: String,
    pub hash: String,
    pub moves: Vec<Move>,
}

impl GameRecord {
    pub fn of(state: &GameState) -> GameRecord {
        GameRecord::from_moves(state.board(), state.history())
    }

    pub fn from_moves(board: &Board, moves: &[Move]) -> GameRecord {
        GameRecord { board: board.name().to_string(), hash: board.hash(), moves: moves.to_vec() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn parse(text: &str) -> Result<GameRecord, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Replay on `board`, which must be the board the record names.
    pub fn replay(&self, board: Arc<Board>) -> Result<GameState, FormatError> {
        let actual_hash = board.hash();
        if actual_hash != self.hash {
            return Err(FormatError::BoardMismatch {
                expected: self.board.clone(),
                expected_hash: self.hash.clone(),
                actual: board.name().to_string(),
                actual_hash,
            });
        }
        let mut state = GameState::new(board);
        for (index, &mv) in self.moves.iter().enumerate() {
            state.play(mv).map_err(|source| FormatError::Replay { index, source })?;
        }
        Ok(state)
    }
}
