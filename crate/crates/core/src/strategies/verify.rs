use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::board::Board;
use crate::game::{GameState, Move, Player, Status, WinReason};
use crate::solver::{SearchLimits, SearchStats, SolveError};

use super::{make_policy, Policy};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationResult {
    pub verified: bool,
    /// Full move list of a losing line, when not verified.
    pub counterexample: Vec<Move>,
    /// Why the line was lost: opponent win, policy error or refusal.
    pub reason: Option<String>,
    pub opponent_nodes: u64,
    pub policy_moves: u64,
}

struct Failure {
    line: Vec<Move>,
    reason: String,
}

struct Limit;

struct Verifier<'a> {
    policy: &'a dyn Policy,
    player: Player,
    opponent_nodes: AtomicU64,
    policy_moves: AtomicU64,
    max_nodes: u64,
}

impl Verifier<'_> {
    /// `split` is true until the first opponent node, whose replies are
    /// explored in parallel.
    fn explore(&self, state: &GameState, split: bool) -> Result<Option<Failure>, Limit> {
        if let Status::Won { winner, reason } = state.status() {
            if winner == self.player {
                return Ok(None);
            }
            let how = match reason {
                WinReason::CycleCell(c) => format!("completing cell {c}"),
                WinReason::LastMove => "making the last move".to_string(),
            };
            return Ok(Some(Failure { line: state.history().to_vec(), reason: format!("{winner} won by {how}") }));
        }
        if state.to_move() == self.player {
            self.policy_moves.fetch_add(1, Ordering::Relaxed);
            let mv = match self.policy.choose(state) {
                Ok(mv) => mv,
                Err(err) => {
                    return Ok(Some(Failure { line: state.history().to_vec(), reason: format!("policy error: {err}") }))
                }
            };
            let next = match state.apply_move(mv) {
                Ok(next) => next,
                Err(err) => {
                    let mut line = state.history().to_vec();
                    line.push(mv);
                    return Ok(Some(Failure { line, reason: format!("policy played an illegal move: {err}") }));
                }
            };
            return self.explore(&next, split);
        }
        if self.opponent_nodes.fetch_add(1, Ordering::Relaxed) >= self.max_nodes {
            return Err(Limit);
        }
        let (mut replies, rest): (Vec<Move>, Vec<Move>) =
            state.legal_moves().into_iter().partition(|&mv| state.completes_cell(mv));
        replies.extend(rest);
        if split {
            let results: Vec<Result<Option<Failure>, Limit>> =
                replies.par_iter().map(|&mv| self.explore(&state.apply_move(mv).expect("legal"), false)).collect();
            for r in results {
                if let Some(f) = r? {
                    return Ok(Some(f));
                }
            }
            Ok(None)
        } else {
            for mv in replies {
                if let Some(f) = self.explore(&state.apply_move(mv).expect("legal"), false)? {
                    return Ok(Some(f));
                }
            }
            Ok(None)
        }
    }
}

/// Play `policy` as `player` from `state` against every legal opponent
/// reply sequence. Opponent replies that complete a cell are tried first, so
/// a counterexample prefers the opponent's quickest win. `max_nodes` bounds
/// the opponent nodes explored.
pub fn verify_policy_from(
    state: &GameState,
    policy: &dyn Policy,
    player: Player,
    limits: &SearchLimits,
) -> Result<VerificationResult, SolveError> {
    let started = Instant::now();
    let v = Verifier {
        policy,
        player,
        opponent_nodes: AtomicU64::new(0),
        policy_moves: AtomicU64::new(0),
        max_nodes: limits.max_nodes,
    };
    let outcome = v.explore(state, !limits.deterministic);
    let opponent_nodes = v.opponent_nodes.load(Ordering::Relaxed);
    let policy_moves = v.policy_moves.load(Ordering::Relaxed);
    match outcome {
        Err(Limit) => Err(SolveError::ResourceLimit {
            what: format!("opponent node budget of {} exhausted", limits.max_nodes),
            stats: SearchStats { nodes: opponent_nodes, table_entries: 0, elapsed: started.elapsed() },
        }),
        Ok(None) => Ok(VerificationResult {
            verified: true,
            counterexample: Vec::new(),
            reason: None,
            opponent_nodes,
            policy_moves,
        }),
        Ok(Some(f)) => Ok(VerificationResult {
            verified: false,
            counterexample: f.line,
            reason: Some(f.reason),
            opponent_nodes,
            policy_moves,
        }),
    }
}

/// [`verify_policy_from`] starting at the empty board.
pub fn verify_policy(
    board: &Arc<Board>,
    policy: &dyn Policy,
    player: Player,
    limits: &SearchLimits,
) -> Result<VerificationResult, SolveError> {
    verify_policy_from(&GameState::new(board.clone()), policy, player, limits)
}

/// Build the named policy and verify it; a refused construction is reported
/// as unverified with the refusal as the reason.
pub fn verify_named(
    name: &str,
    board: &Arc<Board>,
    player: Player,
    limits: &SearchLimits,
) -> Result<VerificationResult, SolveError> {
    match make_policy(name, board, player) {
        Ok(policy) => verify_policy(board, &*policy, player, limits),
        Err(err) => Ok(VerificationResult {
            verified: false,
            counterexample: Vec::new(),
            reason: Some(err.to_string()),
            opponent_nodes: 0,
            policy_moves: 0,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family};
    use crate::strategies::PolicyError;

    struct FirstLegal;

    impl Policy for FirstLegal {
        fn name(&self) -> &str {
            "first-legal"
        }

        fn choose(&self, state: &GameState) -> Result<Move, PolicyError> {
            state.legal_moves().first().copied().ok_or(PolicyError::NoMove)
        }
    }

    struct Illegal;

    impl Policy for Illegal {
        fn name(&self) -> &str {
            "illegal"
        }

        fn choose(&self, _: &GameState) -> Result<Move, PolicyError> {
            Ok(Move::new(0, crate::game::Orientation::TowardV))
        }
    }

    #[test]
    fn losing_policy_yields_a_replayable_counterexample() {
        let board = Arc::new(generate(&Family::Polygon(4)).unwrap());
        let r = verify_policy(&board, &FirstLegal, Player::P1, &SearchLimits::default()).unwrap();
        assert!(!r.verified);
        let end = GameState::from_moves(board, &r.counterexample).unwrap();
        assert_eq!(end.status().winner(), Some(Player::P2));
    }

    #[test]
    fn illegal_policy_moves_are_caught() {
        let board = Arc::new(generate(&Family::Polygon(4)).unwrap());
        let r = verify_policy(&board, &Illegal, Player::P1, &SearchLimits::default()).unwrap();
        assert!(!r.verified);
        assert!(r.reason.unwrap().contains("illegal"));
    }

    #[test]
    fn trivially_won_board_verifies() {
        let board = Arc::new(generate(&Family::Path(1)).unwrap());
        let r = verify_policy(&board, &FirstLegal, Player::P1, &SearchLimits::default()).unwrap();
        assert!(r.verified);
        assert_eq!(r.opponent_nodes, 0);
    }

    #[test]
    fn node_budget_is_enforced() {
        let board = Arc::new(generate(&Family::Grid(2, 3)).unwrap());
        let limits = SearchLimits { max_nodes: 3, ..SearchLimits::default() };
        let err = verify_named("rotate-reverse", &board, Player::P1, &limits).unwrap_err();
        assert!(err.is_resource_limit());
    }

    #[test]
    fn refusals_surface_as_unverified() {
        let board = Arc::new(generate(&Family::Grid(3, 3)).unwrap());
        let r = verify_named("rotate-reverse", &board, Player::P1, &SearchLimits::default()).unwrap();
        assert!(!r.verified);
        assert!(r.reason.is_some());
    }
}
