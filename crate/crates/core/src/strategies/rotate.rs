//! Grids with exactly one edge fixed by the half-turn: open on that edge,
//! then answer each arrow x→y with r(y)→r(x).

use std::sync::Arc;

use crate::board::{Board, EdgeId, VertexId, ROTATION180};
use crate::game::{GameState, Move, Orientation, Player};
use crate::structure::WrongFamily;

use super::{is_legal, require_player, Policy, PolicyError};

/// The arrow r(y)→r(x) for a move x→y under vertex map `perm`.
pub(crate) fn image_reversed(board: &Board, perm: &[VertexId], mv: Move) -> Move {
    let (img, flipped) = board.map_edge(perm, mv.edge).expect("symmetry maps edges to edges");
    Move::new(img, if flipped { mv.dir } else { mv.dir.flip() })
}

pub struct RotateReversePolicy {
    board: Arc<Board>,
    perm: Vec<VertexId>,
    fixed: EdgeId,
}

impl RotateReversePolicy {
    pub fn new(board: &Arc<Board>, player: Player) -> Result<RotateReversePolicy, PolicyError> {
        let perm = board
            .symmetry(ROTATION180)
            .filter(|p| board.preserves_game(p))
            .ok_or_else(|| WrongFamily("no cell-preserving rotation180 map".into()))?
            .to_vec();
        let fixed = board.fixed_edges(&perm);
        if fixed.len() != 1 {
            return Err(PolicyError::Precondition(format!(
                "the half-turn fixes {} edges; exactly one is needed",
                fixed.len()
            )));
        }
        require_player(player, Player::P1, "rotate-reverse")?;
        Ok(RotateReversePolicy { board: board.clone(), perm, fixed: fixed[0] })
    }
}

impl Policy for RotateReversePolicy {
    fn name(&self) -> &str {
        "rotate-reverse"
    }

    fn choose(&self, state: &GameState) -> Result<Move, PolicyError> {
        let Some(&last) = state.history().last() else {
            let open = Move::new(self.fixed, Orientation::TowardV);
            return Ok(open);
        };
        let reply = image_reversed(&self.board, &self.perm, last);
        if is_legal(state, reply) {
            Ok(reply)
        } else {
            Err(PolicyError::Invariant(format!(
                "rotate-reverse reply {} to {} is illegal",
                reply.display(&self.board),
                last.display(&self.board)
            )))
        }
    }
}
