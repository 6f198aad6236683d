//! Game of Cycles: board model, exact solver, constructive strategies and
//! the parity calculus for unmarkable edges.

pub mod analysis;
pub mod board;
pub mod format;
pub mod game;
pub mod generators;
pub mod solver;
pub mod strategies;
pub mod structure;

pub use board::{validate_board, Board, BoardDef, EdgeId, VertexId};
pub use game::{GameState, Move, Orientation, Player, Status, WinReason};
pub use generators::{generate, named, Family, NamedBoard};
