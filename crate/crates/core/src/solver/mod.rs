//! Exact solver: memoized win/loss negamax with an immediate-win shortcut.
//!
//! State key: the marks vector in base 3, little-endian by edge id, with
//! digit 0 unmarked, 1 `TowardV`, 2 `TowardU`. The mover is the parity of
//! the number of marks, so the key alone determines the position. Keys fit
//! in a `u64` for at most 40 edges.

mod engine;
mod symmetry;
mod table;
mod terminals;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::board::Board;
use crate::game::{GameState, Move, Orientation, Player};
use crate::generators::{generate, Family};

use engine::{dir_index, Engine};
use symmetry::SymmetryTracker;
use table::Table;

pub use symmetry::symmetry_group;
pub use terminals::{enumerate_terminals, TerminalCensus, TerminalInfo, TerminalMode};

/// Largest board the `u64` key can address.
pub const MAX_EDGES: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    pub max_nodes: u64,
    pub max_table_bytes: u64,
    /// Single-threaded search when set; results are identical either way.
    pub deterministic: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: 2_000_000_000, max_table_bytes: 1 << 30, deterministic: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub limits: SearchLimits,
    /// Transposition table on; off only for soundness cross-checks.
    pub memo: bool,
    /// Canonicalize table keys under the board's symmetry group.
    pub symmetry: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { limits: SearchLimits::default(), memo: true, symmetry: true }
    }
}

impl From<SearchLimits> for SolveOptions {
    fn from(limits: SearchLimits) -> Self {
        SolveOptions { limits, ..SolveOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub table_entries: u64,
    pub elapsed: Duration,
}

impl SearchStats {
    pub fn millis(&self) -> u128 {
        self.elapsed.as_millis()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub to_move: Player,
    pub winner: Player,
    /// Immediate cell completions when any exist, otherwise every move into a
    /// position lost for the opponent. Empty when the mover loses.
    pub winning_moves: Vec<Move>,
    /// The winner plays its first winning move, the loser its first legal move.
    pub principal_line: Vec<Move>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("resource limit: {what} (after {} nodes, {} table entries)", stats.nodes, stats.table_entries)]
    ResourceLimit { what: String, stats: SearchStats },
    #[error("game is already over")]
    GameOver,
}

impl SolveError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, SolveError::ResourceLimit { .. })
    }
}

/// Why a search stopped early.
#[derive(Debug, Clone, Copy)]
enum Abort {
    Nodes,
    Table,
}

const FLUSH_EVERY: u64 = 4096;

/// Shared accounting across search threads.
struct Shared {
    table: Table,
    nodes: AtomicU64,
    max_nodes: u64,
    aborted: AtomicBool,
}

struct Search<'a> {
    engine: Engine,
    shared: &'a Shared,
    pending: u64,
}

impl<'a> Search<'a> {
    fn new(engine: Engine, shared: &'a Shared) -> Self {
        Search { engine, shared, pending: 0 }
    }

    #[inline]
    fn count_node(&mut self) -> Result<(), Abort> {
        self.pending += 1;
        if self.pending == FLUSH_EVERY {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<(), Abort> {
        let total = self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if total > self.shared.max_nodes || self.shared.aborted.load(Ordering::Relaxed) {
            self.shared.aborted.store(true, Ordering::Relaxed);
            return Err(Abort::Nodes);
        }
        Ok(())
    }

    /// Whether the player to move wins. No cell is complete on entry.
    fn wins(&mut self) -> Result<bool, Abort> {
        self.count_node()?;
        let key = self.engine.table_key();
        if let Some(v) = self.shared.table.get(key) {
            return Ok(v);
        }
        let m = self.engine.m;
        let mut any = false;
        for e in 0..m {
            if self.engine.is_marked(e) {
                continue;
            }
            for d in 0..2 {
                if self.engine.legal(e, d) {
                    if self.engine.completes(e, d) {
                        return Ok(true);
                    }
                    any = true;
                }
            }
        }
        if any {
            for e in 0..m {
                if self.engine.is_marked(e) {
                    continue;
                }
                for d in 0..2 {
                    if self.engine.legal(e, d) {
                        self.engine.play(e, d);
                        let child = self.wins();
                        self.engine.undo(e);
                        if !child? {
                            self.store(key, true)?;
                            return Ok(true);
                        }
                    }
                }
            }
        }
        self.store(key, false)?;
        Ok(false)
    }

    fn store(&self, key: u64, wins: bool) -> Result<(), Abort> {
        self.shared.table.put(key, wins).map_err(|_| Abort::Table)
    }

    /// Value of the position after `(e, d)` for the player who moved.
    fn move_wins(&mut self, e: usize, d: usize) -> Result<bool, Abort> {
        if self.engine.completes(e, d) {
            return Ok(true);
        }
        self.engine.play(e, d);
        let child = self.wins();
        self.engine.undo(e);
        Ok(!child?)
    }
}

fn key_space(m: usize) -> u64 {
    3u64.pow(m as u32)
}

fn make_shared(board: &Board, opts: &SolveOptions) -> Shared {
    let table = if opts.memo {
        Table::new(key_space(board.edge_count()), opts.limits.max_table_bytes)
    } else {
        Table::Disabled
    };
    Shared { table, nodes: AtomicU64::new(0), max_nodes: opts.limits.max_nodes, aborted: AtomicBool::new(false) }
}

fn make_engine(state: &GameState, opts: &SolveOptions) -> Engine {
    let tracker = (opts.memo && opts.symmetry).then(|| SymmetryTracker::new(state.board()));
    Engine::from_state(state, tracker)
}

fn check_size(board: &Board) -> Result<(), SolveError> {
    if board.edge_count() > MAX_EDGES {
        return Err(SolveError::ResourceLimit {
            what: format!("{} edges exceeds the {MAX_EDGES}-edge key", board.edge_count()),
            stats: SearchStats::default(),
        });
    }
    Ok(())
}

fn abort_error(abort: Abort, shared: &Shared, opts: &SolveOptions, started: Instant) -> SolveError {
    let what = match abort {
        Abort::Nodes => format!("node budget of {} exhausted", opts.limits.max_nodes),
        Abort::Table => format!("table budget of {} bytes exhausted", opts.limits.max_table_bytes),
    };
    SolveError::ResourceLimit { what, stats: stats_of(shared, started) }
}

fn stats_of(shared: &Shared, started: Instant) -> SearchStats {
    SearchStats {
        nodes: shared.nodes.load(Ordering::Relaxed),
        table_entries: shared.table.entries(),
        elapsed: started.elapsed(),
    }
}

pub fn solve(state: &GameState, limits: &SearchLimits) -> Result<SolveResult, SolveError> {
    solve_with(state, &SolveOptions::from(*limits))
}

/// Exact game value of `state` with winning moves and a principal line.
pub fn solve_with(state: &GameState, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    check_size(state.board())?;
    if state.status().is_over() {
        return Err(SolveError::GameOver);
    }
    let shared = make_shared(state.board(), opts);
    let root = make_engine(state, opts);
    let moves = root.legal_moves();
    let to_move = state.to_move();

    let immediate: Vec<(usize, usize)> = moves.iter().copied().filter(|&(e, d)| root.completes(e, d)).collect();
    let winning: Vec<(usize, usize)> = if !immediate.is_empty() {
        immediate
    } else {
        let evaluate = |&(e, d): &(usize, usize)| -> Result<bool, Abort> {
            let mut search = Search::new(root.clone(), &shared);
            let value = search.move_wins(e, d)?;
            search.flush()?;
            Ok(value)
        };
        let values: Result<Vec<bool>, Abort> = if opts.limits.deterministic {
            moves.iter().map(evaluate).collect()
        } else {
            moves.par_iter().map(evaluate).collect()
        };
        let values = values.map_err(|a| abort_error(a, &shared, opts, started))?;
        moves.iter().zip(values).filter(|(_, v)| *v).map(|(&mv, _)| mv).collect()
    };
    let winner = if winning.is_empty() { to_move.opponent() } else { to_move };

    let mut search = Search::new(root, &shared);
    let line = principal_line(&mut search, winner, &winning)
        .and_then(|line| search.flush().map(|_| line))
        .map_err(|a| abort_error(a, &shared, opts, started))?;

    Ok(SolveResult {
        to_move,
        winner,
        winning_moves: winning.iter().map(|&(e, d)| Engine::to_move(e, d)).collect(),
        principal_line: line,
        stats: stats_of(&shared, started),
    })
}

fn principal_line(
    search: &mut Search<'_>,
    winner: Player,
    root_winning: &[(usize, usize)],
) -> Result<Vec<Move>, Abort> {
    let mut line: Vec<(usize, usize)> = Vec::new();
    loop {
        let moves = search.engine.legal_moves();
        if moves.is_empty() {
            break;
        }
        let mover = Player::to_move_after(search.engine.marked);
        let chosen = if line.is_empty() && mover == winner {
            root_winning[0]
        } else if mover == winner {
            match moves.iter().copied().find(|&(e, d)| search.engine.completes(e, d)) {
                Some(mv) => mv,
                None => {
                    let mut found = None;
                    for &(e, d) in &moves {
                        if search.move_wins(e, d)? {
                            found = Some((e, d));
                            break;
                        }
                    }
                    found.expect("winner has a winning move")
                }
            }
        } else {
            moves[0]
        };
        let done = search.engine.completes(chosen.0, chosen.1);
        search.engine.play(chosen.0, chosen.1);
        line.push(chosen);
        if done {
            break;
        }
    }
    Ok(line.into_iter().map(|(e, d)| Engine::to_move(e, d)).collect())
}

/// Whether the player to move at `state` wins, without move extraction.
pub fn mover_wins(state: &GameState, opts: &SolveOptions) -> Result<bool, SolveError> {
    Ok(solve_with(state, opts)?.winner == state.to_move())
}

/// The base-3 key of a marks vector.
pub fn state_key(marks: &[Option<Orientation>]) -> u64 {
    marks.iter().rev().fold(0u64, |acc, m| {
        acc * 3
            + match m {
                None => 0,
                Some(o) => dir_index(*o) as u64 + 1,
            }
    })
}

/// Inverse of [`state_key`] for `m` edges.
pub fn decode_key(mut key: u64, m: usize) -> Vec<Option<Orientation>> {
    (0..m)
        .map(|_| {
            let digit = key % 3;
            key /= 3;
            match digit {
                0 => None,
                1 => Some(Orientation::TowardV),
                _ => Some(Orientation::TowardU),
            }
        })
        .collect()
}

/// One row of a winners sweep.
#[derive(Debug, Clone, Serialize)]
pub struct WinnerRow {
    pub board: String,
    pub family: String,
    pub edges: usize,
    pub winner: Option<Player>,
    pub nodes: u64,
    pub millis: u128,
    pub principal_line: Vec<Move>,
    pub error: Option<String>,
}

/// Solve the empty board of every family; errors are recorded per row.
pub fn winners_table(families: &[Family], opts: &SolveOptions) -> Vec<WinnerRow> {
    families
        .iter()
        .map(|family| {
            let mut row = WinnerRow {
                board: String::new(),
                family: family.to_string(),
                edges: 0,
                winner: None,
                nodes: 0,
                millis: 0,
                principal_line: Vec::new(),
                error: None,
            };
            match generate(family) {
                Err(err) => row.error = Some(err.to_string()),
                Ok(board) => {
                    row.board = board.name().to_string();
                    row.edges = board.edge_count();
                    let state = GameState::new(Arc::new(board));
                    match solve_empty(&state, opts) {
                        Ok(res) => {
                            row.winner = Some(res.winner);
                            row.nodes = res.stats.nodes;
                            row.millis = res.stats.millis();
                            row.principal_line = res.principal_line;
                        }
                        Err(err) => row.error = Some(err.to_string()),
                    }
                }
            }
            row
        })
        .collect()
}

/// Solve, treating a board with no legal opening as a P2 win.
pub(crate) fn solve_empty(state: &GameState, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    match solve_with(state, opts) {
        Err(SolveError::GameOver) => Ok(SolveResult {
            to_move: state.to_move(),
            winner: state.status().winner().expect("over"),
            winning_moves: Vec::new(),
            principal_line: Vec::new(),
            stats: SearchStats::default(),
        }),
        other => other,
    }
}

/// Fixed-width text table of sweep rows.
pub fn format_winners_table(rows: &[WinnerRow]) -> String {
    let mut out =
        format!("{:<24} {:>5} {:>6} {:>12} {:>9}  principal line\n", "board", "edges", "winner", "nodes", "millis");
    for row in rows {
        let winner = match (&row.winner, &row.error) {
            (Some(w), _) => w.to_string(),
            (None, Some(_)) => "error".to_string(),
            (None, None) => "-".to_string(),
        };
        let line: Vec<String> = row.principal_line.iter().map(Move::to_string).collect();
        let tail = row.error.clone().unwrap_or_else(|| line.join(" "));
        out.push_str(&format!(
            "{:<24} {:>5} {:>6} {:>12} {:>9}  {}\n",
            row.family, row.edges, winner, row.nodes, row.millis, tail
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{named, NamedBoard};

    fn empty(family: Family) -> GameState {
        GameState::new(Arc::new(generate(&family).unwrap()))
    }

    fn deterministic() -> SolveOptions {
        SolveOptions {
            limits: SearchLimits { deterministic: true, ..SearchLimits::default() },
            ..SolveOptions::default()
        }
    }

    #[test]
    fn key_round_trip() {
        let marks = vec![Some(Orientation::TowardU), None, Some(Orientation::TowardV)];
        let key = state_key(&marks);
        assert_eq!(key, 2 + 9);
        assert_eq!(decode_key(key, 3), marks);
    }

    #[test]
    fn three_edge_path_center_wins() {
        let res = solve_with(&empty(Family::Path(3)), &deterministic()).unwrap();
        assert_eq!(res.winner, Player::P1);
        assert_eq!(res.winning_moves, vec![Move::new(1, Orientation::TowardV), Move::new(1, Orientation::TowardU)]);
    }

    #[test]
    fn pendant_board_opening() {
        let board = named(NamedBoard::CounterexampleFig9).unwrap().board;
        let cd = Move::between(&board, 2, 3).unwrap();
        let res = solve_with(&GameState::new(Arc::new(board)), &deterministic()).unwrap();
        assert_eq!(res.winner, Player::P1);
        assert!(res.winning_moves.contains(&cd));
    }

    #[test]
    fn principal_line_replays_to_a_win_for_the_winner() {
        for family in [Family::Polygon(5), Family::J2K(2, 3), Family::Grid(2, 3), Family::Path(6)] {
            let state = empty(family.clone());
            let res = solve_with(&state, &deterministic()).unwrap();
            let end = GameState::from_moves(state.board_arc().clone(), &res.principal_line).unwrap();
            assert_eq!(end.status().winner(), Some(res.winner), "{family}");
        }
    }

    #[test]
    fn parallel_matches_deterministic() {
        for family in [Family::J2K(3, 4), Family::Grid(2, 4), Family::PPaths(vec![3, 3, 2])] {
            let state = empty(family);
            let a = solve_with(&state, &deterministic()).unwrap();
            let b = solve_with(&state, &SolveOptions::default()).unwrap();
            assert_eq!(
                (a.winner, &a.winning_moves, &a.principal_line),
                (b.winner, &b.winning_moves, &b.principal_line)
            );
        }
    }

    #[test]
    fn node_budget_fails_loudly() {
        let opts = SolveOptions {
            limits: SearchLimits { max_nodes: 10, deterministic: true, ..SearchLimits::default() },
            ..SolveOptions::default()
        };
        match solve_with(&empty(Family::Grid(3, 3)), &opts) {
            Err(SolveError::ResourceLimit { stats, .. }) => assert!(stats.nodes > 10),
            other => panic!("expected resource limit, got {other:?}"),
        }
    }

    #[test]
    fn sparse_table_gives_same_answer() {
        let state = empty(Family::J2K(3, 3));
        let dense = solve_with(&state, &deterministic()).unwrap();
        let mut opts = deterministic();
        // just under the 3^9 / 4 bytes a dense table needs
        opts.limits.max_table_bytes = 4900;
        let sparse = solve_with(&state, &opts).unwrap();
        assert_eq!(dense.winner, sparse.winner);
        assert_eq!(dense.winning_moves, sparse.winning_moves);
    }

    #[test]
    fn finished_game_is_rejected() {
        let board = Arc::new(generate(&Family::Polygon(3)).unwrap());
        let moves: Vec<Move> =
            [(0, 1), (1, 2), (2, 0)].iter().map(|&(a, b)| Move::between(&board, a, b).unwrap()).collect();
        let state = GameState::from_moves(board, &moves).unwrap();
        assert_eq!(solve(&state, &SearchLimits::default()), Err(SolveError::GameOver));
    }

    #[test]
    fn winners_table_reports_rows() {
        let rows = winners_table(&[Family::Polygon(3), Family::Polygon(4), Family::Path(0)], &deterministic());
        assert_eq!(rows[0].winner, Some(Player::P1));
        assert_eq!(rows[1].winner, Some(Player::P2));
        assert!(rows[2].error.is_some());
        let text = format_winners_table(&rows);
        assert!(text.contains("polygon:3"));
    }
}
