//! Move sources for the terminal game and the service.

use std::sync::Arc;

use gocycles_core::solver::{solve, SearchLimits, SolveError};
use gocycles_core::strategies::{make_policy, Policy, PolicyError};
use gocycles_core::{Board, GameState, Move, Player};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

pub enum Engine {
    Solver(SearchLimits),
    Policy(Box<dyn Policy>),
    Random(Box<StdRng>),
}

impl Engine {
    /// `solver`, `random` or a strategy name; strategies are built for `player`.
    pub fn new(
        kind: &str,
        board: &Arc<Board>,
        player: Player,
        limits: SearchLimits,
        seed: u64,
    ) -> Result<Engine, PolicyError> {
        Ok(match kind {
            "solver" => Engine::Solver(limits),
            "random" => Engine::Random(Box::new(StdRng::seed_from_u64(seed))),
            name => Engine::Policy(make_policy(name, board, player)?),
        })
    }

    pub fn kind(&self) -> &str {
        match self {
            Engine::Solver(_) => "solver",
            Engine::Policy(p) => p.name(),
            Engine::Random(_) => "random",
        }
    }

    pub fn choose(&mut self, state: &GameState) -> Result<Move, EngineError> {
        match self {
            Engine::Solver(limits) => Ok(solver_move(state, limits)?),
            Engine::Policy(p) => Ok(p.choose(state)?),
            Engine::Random(rng) => Ok(*state.legal_moves().choose(rng.as_mut()).ok_or(PolicyError::NoMove)?),
        }
    }
}

/// The first winning move when one exists, otherwise the first legal move.
pub fn solver_move(state: &GameState, limits: &SearchLimits) -> Result<Move, SolveError> {
    let res = solve(state, limits)?;
    let mv = res.winning_moves.first().or(res.principal_line.first());
    mv.copied().ok_or(SolveError::GameOver)
}
