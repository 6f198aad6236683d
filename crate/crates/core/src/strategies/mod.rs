//! Constructive strategies as deterministic move policies, and an exhaustive
//! verifier that checks a policy wins against every line of opponent play.
//!
//! Policies keep no mutable state: any bookkeeping (pairings, loner edges)
//! is rebuilt from the game history on every call.

mod j2k;
mod mirror;
mod one_two_k;
mod pairing;
mod path;
mod rotate;
mod verify;

use std::sync::Arc;

use thiserror::Error;

use crate::board::Board;
use crate::game::{GameState, Move, Player, Status};
use crate::structure::WrongFamily;

pub use j2k::J2kPolicy;
pub use mirror::MirrorReversePolicy;
pub use one_two_k::{OneTwoKPolicy, SideRule};
pub use pairing::Pairing32kPolicy;
pub use path::PathPolicy;
pub use rotate::RotateReversePolicy;
pub use verify::{verify_named, verify_policy, verify_policy_from, VerificationResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error(transparent)]
    WrongFamily(#[from] WrongFamily),
    /// The board or acting player is outside the strategy's hypotheses.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A response the strategy guarantees to be available was not.
    #[error("strategy invariant broken: {0}")]
    Invariant(String),
    #[error("no legal move")]
    NoMove,
    #[error("unknown policy {0:?}")]
    UnknownPolicy(String),
}

pub trait Policy: Send + Sync {
    fn name(&self) -> &str;
    fn choose(&self, state: &GameState) -> Result<Move, PolicyError>;
}

impl<P: Policy + ?Sized> Policy for Box<P> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn choose(&self, state: &GameState) -> Result<Move, PolicyError> {
        (**self).choose(state)
    }
}

/// First legal move (edge order, `TowardV` first) that wins on the spot,
/// either by completing a cell or by leaving the opponent no move.
pub fn immediate_win(state: &GameState) -> Option<Move> {
    let me = state.to_move();
    state.legal_moves().into_iter().find(|&mv| {
        if state.completes_cell(mv) {
            return true;
        }
        let next = state.apply_move(mv).expect("legal");
        matches!(next.status(), Status::Won { winner, .. } if winner == me)
    })
}

/// Plays an immediate win when one exists, otherwise defers to `inner`.
pub struct WinNow<P> {
    inner: P,
    name: String,
}

pub fn win_now_wrap<P: Policy>(inner: P) -> WinNow<P> {
    let name = inner.name().to_string();
    WinNow { inner, name }
}

impl<P: Policy> Policy for WinNow<P> {
    fn name(&self) -> &str {
        &self.name
    }

    fn choose(&self, state: &GameState) -> Result<Move, PolicyError> {
        match immediate_win(state) {
            Some(mv) => Ok(mv),
            None => self.inner.choose(state),
        }
    }
}

/// True when `mv` hands the opponent an immediate win.
pub(crate) fn gives_away(state: &GameState, mv: Move) -> bool {
    let next = state.apply_move(mv).expect("legal");
    !next.status().is_over() && immediate_win(&next).is_some()
}

/// First legal move that does not hand the opponent an immediate win,
/// falling back to the first legal move.
pub(crate) fn first_safe(state: &GameState) -> Result<Move, PolicyError> {
    let moves = state.legal_moves();
    moves.iter().copied().find(|&mv| !gives_away(state, mv)).or(moves.first().copied()).ok_or(PolicyError::NoMove)
}

pub(crate) fn is_legal(state: &GameState, mv: Move) -> bool {
    state.check_move(mv).is_ok()
}

/// Registered policy names, as accepted by [`make_policy`].
pub const POLICY_NAMES: [&str; 9] = [
    "path",
    "pairing-32k",
    "pairing-32k-literal",
    "j2k",
    "12k",
    "12k-opposite",
    "mirror-reverse",
    "mirror-reverse-naive",
    "rotate-reverse",
];

/// Build a named policy for `player` on `board`, wrapped so it always takes
/// an immediate win. Boards or players outside the strategy's hypotheses are
/// refused.
pub fn make_policy(name: &str, board: &Arc<Board>, player: Player) -> Result<Box<dyn Policy>, PolicyError> {
    let policy: Box<dyn Policy> = match name {
        "path" => Box::new(win_now_wrap(PathPolicy::new(board)?)),
        "pairing-32k" => Box::new(win_now_wrap(Pairing32kPolicy::new(board, player)?)),
        "pairing-32k-literal" => Box::new(win_now_wrap(Pairing32kPolicy::literal(board, player)?)),
        "j2k" => Box::new(win_now_wrap(J2kPolicy::new(board, player)?)),
        "12k" => Box::new(win_now_wrap(OneTwoKPolicy::new(board, player, SideRule::Matching)?)),
        "12k-opposite" => Box::new(win_now_wrap(OneTwoKPolicy::new(board, player, SideRule::Opposite)?)),
        "mirror-reverse" => Box::new(win_now_wrap(MirrorReversePolicy::new(board, player)?)),
        "mirror-reverse-naive" => Box::new(win_now_wrap(MirrorReversePolicy::naive(board)?)),
        "rotate-reverse" => Box::new(win_now_wrap(RotateReversePolicy::new(board, player)?)),
        other => return Err(PolicyError::UnknownPolicy(other.to_string())),
    };
    Ok(policy)
}

pub(crate) fn require_player(actual: Player, expected: Player, why: &str) -> Result<(), PolicyError> {
    if actual == expected {
        Ok(())
    } else {
        Err(PolicyError::Precondition(format!("{why}: the strategy plays as {expected}, not {actual}")))
    }
}
