//! Game positions, move legality under the sink/source rule, and game status.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{Board, EdgeDef, EdgeId, VertexId};

/// Direction of an arrow relative to the edge's stored `(u, v)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    /// `u -> v`
    #[serde(rename = "uv")]
    TowardV,
    /// `v -> u`
    #[serde(rename = "vu")]
    TowardU,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::TowardV, Orientation::TowardU];

    pub fn flip(self) -> Orientation {
        match self {
            Orientation::TowardV => Orientation::TowardU,
            Orientation::TowardU => Orientation::TowardV,
        }
    }

    /// The orientation of `edge` whose tail is `from`.
    pub fn from_to(edge: &EdgeDef, from: VertexId) -> Orientation {
        if edge.u == from {
            Orientation::TowardV
        } else {
            Orientation::TowardU
        }
    }

    /// `(tail, head)` of `edge` under this orientation.
    pub fn ends(self, edge: &EdgeDef) -> (VertexId, VertexId) {
        match self {
            Orientation::TowardV => (edge.u, edge.v),
            Orientation::TowardU => (edge.v, edge.u),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::TowardV => "uv",
            Orientation::TowardU => "vu",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub edge: EdgeId,
    pub dir: Orientation,
}

impl Move {
    pub fn new(edge: EdgeId, dir: Orientation) -> Move {
        Move { edge, dir }
    }

    /// The move drawing an arrow `from -> to`, if the two vertices are joined.
    pub fn between(board: &Board, from: VertexId, to: VertexId) -> Option<Move> {
        let edge = board.edge_between(from, to)?;
        Some(Move { edge, dir: Orientation::from_to(&board.edge(edge), from) })
    }

    pub fn tail_head(&self, board: &Board) -> (VertexId, VertexId) {
        self.dir.ends(&board.edge(self.edge))
    }

    pub fn display(&self, board: &Board) -> String {
        let (a, b) = self.tail_head(board);
        format!("{a}->{b}")
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.edge, self.dir.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    /// Player making the move after `marked` edges have been marked.
    pub fn to_move_after(marked: usize) -> Player {
        if marked.is_multiple_of(2) {
            Player::P1
        } else {
            Player::P2
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Player::P1 => 1,
            Player::P2 => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Player> {
        match n {
            1 => Some(Player::P1),
            2 => Some(Player::P2),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WinReason {
    CycleCell(usize),
    LastMove,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    InProgress,
    Won { winner: Player, reason: WinReason },
}

impl Status {
    pub fn winner(&self) -> Option<Player> {
        match self {
            Status::InProgress => None,
            Status::Won { winner, .. } => Some(*winner),
        }
    }

    pub fn is_over(&self) -> bool {
        matches!(self, Status::Won { .. })
    }
}

/// Which rule a rejected move breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RuleViolation {
    Marked,
    Source { vertex: VertexId },
    Sink { vertex: VertexId },
    GameOver,
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleViolation::Marked => write!(f, "marked"),
            RuleViolation::Source { vertex } => write!(f, "source at {vertex}"),
            RuleViolation::Sink { vertex } => write!(f, "sink at {vertex}"),
            RuleViolation::GameOver => write!(f, "game over"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("no such edge: {0}")]
    NoSuchEdge(EdgeId),
    #[error("illegal move: {violation}")]
    Illegal { mv: Move, violation: RuleViolation },
}

/// Orientations of one edge that are currently legal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LegalSet {
    pub toward_v: bool,
    pub toward_u: bool,
}

impl LegalSet {
    pub fn contains(&self, o: Orientation) -> bool {
        match o {
            Orientation::TowardV => self.toward_v,
            Orientation::TowardU => self.toward_u,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.toward_v && !self.toward_u
    }

    pub fn len(&self) -> usize {
        self.toward_v as usize + self.toward_u as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = Orientation> + '_ {
        Orientation::BOTH.into_iter().filter(|&o| self.contains(o))
    }
}

/// A position: marks over an immutable board plus the move history that
/// produced them. Value semantics; [`GameState::apply_move`] returns a new
/// state.
#[derive(Debug, Clone)]
pub struct GameState {
    board: Arc<Board>,
    marks: Vec<Option<Orientation>>,
    history: Vec<Move>,
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.board, &other.board) && self.marks == other.marks && self.history == other.history
    }
}

impl GameState {
    pub fn new(board: Arc<Board>) -> GameState {
        let marks = vec![None; board.edge_count()];
        GameState { board, marks, history: Vec::new() }
    }

    /// Replay `moves` from the empty position.
    pub fn from_moves(board: Arc<Board>, moves: &[Move]) -> Result<GameState, MoveError> {
        let mut state = GameState::new(board);
        for &mv in moves {
            state.play(mv)?;
        }
        Ok(state)
    }

    /// A position from its marks alone, history in edge order. Game-over is
    /// ignored, so positions past a completed cell can be built for
    /// analysis. The rule only bites when a vertex gets its last arrow, so a
    /// rule-abiding set of marks is reachable in any order.
    pub fn from_marks(board: Arc<Board>, marks: &[Option<Orientation>]) -> Result<GameState, MoveError> {
        let mut state = GameState::new(board);
        for (edge, mark) in marks.iter().enumerate() {
            if let Some(dir) = *mark {
                let mv = Move::new(edge, dir);
                state.check_edge(edge)?;
                state.rule_check(mv).map_err(|violation| MoveError::Illegal { mv, violation })?;
                state.marks[edge] = Some(dir);
                state.history.push(mv);
            }
        }
        Ok(state)
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn board_arc(&self) -> &Arc<Board> {
        &self.board
    }

    pub fn marks(&self) -> &[Option<Orientation>] {
        &self.marks
    }

    pub fn mark(&self, edge: EdgeId) -> Option<Orientation> {
        self.marks[edge]
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn marked_count(&self) -> usize {
        self.history.len()
    }

    pub fn to_move(&self) -> Player {
        Player::to_move_after(self.history.len())
    }

    /// Player who made the last move, if any.
    pub fn last_mover(&self) -> Option<Player> {
        self.history.len().checked_sub(1).map(Player::to_move_after)
    }

    fn check_edge(&self, edge: EdgeId) -> Result<(), MoveError> {
        if edge < self.marks.len() {
            Ok(())
        } else {
            Err(MoveError::NoSuchEdge(edge))
        }
    }

    /// True when `edge` is marked with its arrow leaving `v`.
    pub fn points_away(&self, edge: EdgeId, v: VertexId) -> bool {
        self.marks[edge].is_some_and(|o| o.ends(&self.board.edge(edge)).0 == v)
    }

    /// True when `edge` is marked with its arrow entering `v`.
    pub fn points_into(&self, edge: EdgeId, v: VertexId) -> bool {
        self.marks[edge].is_some_and(|o| o.ends(&self.board.edge(edge)).1 == v)
    }

    /// The sink/source rule for an unmarked edge, ignoring game-over.
    fn rule_check(&self, mv: Move) -> Result<(), RuleViolation> {
        if self.marks[mv.edge].is_some() {
            return Err(RuleViolation::Marked);
        }
        let (tail, head) = mv.tail_head(&self.board);
        let others = |v: VertexId| self.board.incident(v).iter().copied().filter(move |&e| e != mv.edge);
        if !self.board.is_exempt(tail) && others(tail).all(|e| self.points_away(e, tail)) {
            return Err(RuleViolation::Source { vertex: tail });
        }
        if !self.board.is_exempt(head) && others(head).all(|e| self.points_into(e, head)) {
            return Err(RuleViolation::Sink { vertex: head });
        }
        Ok(())
    }

    /// Orientations of `edge` that break neither rule; empty when marked.
    pub fn legal_orientations(&self, edge: EdgeId) -> Result<LegalSet, MoveError> {
        self.check_edge(edge)?;
        Ok(LegalSet {
            toward_v: self.rule_check(Move::new(edge, Orientation::TowardV)).is_ok(),
            toward_u: self.rule_check(Move::new(edge, Orientation::TowardU)).is_ok(),
        })
    }

    fn is_won(&self) -> bool {
        self.history.last().is_some_and(|last| self.completed_cell_at(last.edge).is_some())
    }

    /// All legal moves by ascending edge id, `TowardV` first. Empty once the
    /// game is won.
    pub fn legal_moves(&self) -> Vec<Move> {
        if self.is_won() {
            return Vec::new();
        }
        self.unchecked_legal_moves()
    }

    fn unchecked_legal_moves(&self) -> Vec<Move> {
        let mut moves = Vec::new();
        for edge in 0..self.marks.len() {
            for dir in Orientation::BOTH {
                let mv = Move::new(edge, dir);
                if self.rule_check(mv).is_ok() {
                    moves.push(mv);
                }
            }
        }
        moves
    }

    pub fn check_move(&self, mv: Move) -> Result<(), MoveError> {
        self.check_edge(mv.edge)?;
        let violation = if self.is_won() { Err(RuleViolation::GameOver) } else { self.rule_check(mv) };
        violation.map_err(|violation| MoveError::Illegal { mv, violation })
    }

    /// Apply a legal move in place.
    pub fn play(&mut self, mv: Move) -> Result<(), MoveError> {
        self.check_move(mv)?;
        self.marks[mv.edge] = Some(mv.dir);
        self.history.push(mv);
        Ok(())
    }

    pub fn apply_move(&self, mv: Move) -> Result<GameState, MoveError> {
        let mut next = self.clone();
        next.play(mv)?;
        Ok(next)
    }

    pub fn is_unmarkable(&self, edge: EdgeId) -> Result<bool, MoveError> {
        let legal = self.legal_orientations(edge)?;
        Ok(self.marks[edge].is_none() && legal.is_empty())
    }

    pub fn unmarkable_edges(&self) -> Vec<EdgeId> {
        (0..self.marks.len()).filter(|&e| self.is_unmarkable(e).unwrap_or(false)).collect()
    }

    pub fn unmarkable_count(&self) -> usize {
        self.unmarkable_edges().len()
    }

    /// Whether every edge of `cell` is marked consistently around it.
    pub fn cell_complete(&self, cell: usize) -> bool {
        let edges = self.board.cell_edges(cell);
        let along = edges.iter().all(|&(e, o)| self.marks[e] == Some(o));
        along || edges.iter().all(|&(e, o)| self.marks[e] == Some(o.flip()))
    }

    fn completed_cell_at(&self, edge: EdgeId) -> Option<usize> {
        self.board.edge_cells(edge).iter().map(|&(c, _)| c).find(|&c| self.cell_complete(c))
    }

    /// Cells that are completely and consistently directed.
    pub fn completed_cells(&self) -> Vec<usize> {
        (0..self.board.cells().len()).filter(|&c| self.cell_complete(c)).collect()
    }

    /// Whether playing `mv` (assumed legal) completes a cell.
    pub fn completes_cell(&self, mv: Move) -> bool {
        let get = |e: EdgeId| if e == mv.edge { Some(mv.dir) } else { self.marks[e] };
        self.board.edge_cells(mv.edge).iter().any(|&(cell, _)| {
            let edges = self.board.cell_edges(cell);
            edges.iter().all(|&(e, o)| get(e) == Some(o)) || edges.iter().all(|&(e, o)| get(e) == Some(o.flip()))
        })
    }

    pub fn status(&self) -> Status {
        if let Some(last) = self.history.last() {
            if let Some(cell) = self.completed_cell_at(last.edge) {
                let winner = self.last_mover().expect("history is non-empty");
                return Status::Won { winner, reason: WinReason::CycleCell(cell) };
            }
        }
        if self.unchecked_legal_moves().is_empty() {
            // the player unable to move loses; with no history that is P1
            let winner = self.last_mover().unwrap_or(Player::P2);
            return Status::Won { winner, reason: WinReason::LastMove };
        }
        Status::InProgress
    }
}
