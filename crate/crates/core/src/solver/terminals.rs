//! Enumeration of every distinct terminal state reachable from a position.

use std::time::Instant;

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::board::EdgeId;
use crate::game::{GameState, Orientation, Player, WinReason};

use super::engine::Engine;
use super::{check_size, SearchLimits, SearchStats, SolveError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalMode {
    /// Stop at the first completed cell, as in play.
    GameRules,
    /// Ignore cells; play on until no edge has a legal orientation.
    Exhaustive,
}

/// A terminal state handed to the visitor.
#[derive(Debug, Clone)]
pub struct TerminalInfo {
    pub marks: Vec<Option<Orientation>>,
    pub winner: Player,
    pub reason: WinReason,
    pub unmarkable: Vec<EdgeId>,
    pub completed_cells: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TerminalCensus {
    pub terminals: u64,
    pub p1_wins: u64,
    pub p2_wins: u64,
    pub cycle_cell: u64,
    pub last_move: u64,
    pub even_unmarkable: u64,
    pub odd_unmarkable: u64,
    /// Distinct states visited, terminal or not.
    pub states: u64,
}

impl TerminalCensus {
    fn record(&mut self, info: &TerminalInfo) {
        self.terminals += 1;
        match info.winner {
            Player::P1 => self.p1_wins += 1,
            Player::P2 => self.p2_wins += 1,
        }
        match info.reason {
            WinReason::CycleCell(_) => self.cycle_cell += 1,
            WinReason::LastMove => self.last_move += 1,
        }
        if info.unmarkable.len().is_multiple_of(2) {
            self.even_unmarkable += 1;
        } else {
            self.odd_unmarkable += 1;
        }
    }
}

struct Walk<'a, F> {
    engine: Engine,
    mode: TerminalMode,
    cells: Vec<Vec<(EdgeId, Orientation)>>,
    seen: FxHashSet<u64>,
    census: TerminalCensus,
    max_states: u64,
    visit: &'a mut F,
}

impl<F: FnMut(&TerminalInfo)> Walk<'_, F> {
    fn first_visit(&mut self) -> Result<bool, ()> {
        if !self.seen.insert(self.engine.key) {
            return Ok(false);
        }
        self.census.states += 1;
        if self.census.states > self.max_states {
            return Err(());
        }
        Ok(true)
    }

    fn terminal(&mut self, reason: WinReason) {
        let winner = Player::to_move_after(self.engine.marked).opponent();
        let winner = if self.engine.marked == 0 { Player::P2 } else { winner };
        let info = TerminalInfo {
            marks: self.engine.marks_as_orientations(),
            winner,
            reason,
            unmarkable: (0..self.engine.m).filter(|&e| self.engine.is_unmarkable(e)).collect(),
            completed_cells: self.engine.completed_cells(),
        };
        self.census.record(&info);
        (self.visit)(&info);
    }

    fn first_completed_cell(&self) -> usize {
        let marks = self.engine.marks_as_orientations();
        self.cells
            .iter()
            .position(|edges| {
                edges.iter().all(|&(e, o)| marks[e] == Some(o))
                    || edges.iter().all(|&(e, o)| marks[e] == Some(o.flip()))
            })
            .expect("a completed cell")
    }

    fn walk(&mut self) -> Result<(), ()> {
        if !self.first_visit()? {
            return Ok(());
        }
        let moves = self.engine.legal_moves();
        if moves.is_empty() {
            self.terminal(WinReason::LastMove);
            return Ok(());
        }
        for (e, d) in moves {
            let ends_game = self.mode == TerminalMode::GameRules && self.engine.completes(e, d);
            self.engine.play(e, d);
            let result = if ends_game {
                let fresh = self.first_visit();
                if let Ok(true) = fresh {
                    let cell = self.first_completed_cell();
                    self.terminal(WinReason::CycleCell(cell));
                }
                fresh.map(|_| ())
            } else {
                self.walk()
            };
            self.engine.undo(e);
            result?;
        }
        Ok(())
    }
}

/// Visit each distinct terminal state reachable from `state` exactly once.
/// `limits.max_nodes` bounds the number of distinct states visited.
pub fn enumerate_terminals<F: FnMut(&TerminalInfo)>(
    state: &GameState,
    limits: &SearchLimits,
    mode: TerminalMode,
    mut visit: F,
) -> Result<TerminalCensus, SolveError> {
    let started = Instant::now();
    check_size(state.board())?;
    let board = state.board();
    let mut walk = Walk {
        engine: Engine::from_state(state, None),
        mode,
        cells: (0..board.cells().len()).map(|c| board.cell_edges(c).to_vec()).collect(),
        seen: FxHashSet::default(),
        census: TerminalCensus::default(),
        max_states: limits.max_nodes,
        visit: &mut visit,
    };
    let already_won = mode == TerminalMode::GameRules && !state.completed_cells().is_empty();
    let outcome = if already_won {
        walk.first_visit().map(|_| {
            let cell = walk.first_completed_cell();
            walk.terminal(WinReason::CycleCell(cell));
        })
    } else {
        walk.walk()
    };
    let census = walk.census;
    outcome.map_err(|_| SolveError::ResourceLimit {
        what: format!("state budget of {} exhausted", limits.max_nodes),
        stats: SearchStats { nodes: census.states, table_entries: census.states, elapsed: started.elapsed() },
    })?;
    Ok(census)
}
