//! Boards of paths between two end vertices, played by mirror-reverse.
//!
//! Edges fixed by the mirror are loners; every other edge is paired with its
//! image. A loner move is answered with another loner, a paired move x→y
//! with m(y)→m(x). When an odd path is down to three unmarked markable edges
//! including its loner and the opponent plays one of the paired ones, the
//! roles switch: the played edge counts as a loner and the two edges left on
//! that path become a pair.

use std::sync::Arc;

use crate::board::{Board, EdgeId, VertexId, MIRROR};
use crate::game::{GameState, Move, Orientation, Player};
use crate::structure::{PPathsLayout, WrongFamily};

use super::rotate::image_reversed;
use super::{first_safe, is_legal, require_player, Policy, PolicyError};

pub struct MirrorReversePolicy {
    board: Arc<Board>,
    perm: Vec<VertexId>,
    layout: PPathsLayout,
    /// No loner-first opening and no role switch.
    naive: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Loner,
    /// Paired with the mirror image.
    Mirrored(EdgeId),
    /// Paired after a role switch; answered in any legal direction.
    Switched(EdgeId),
}

impl MirrorReversePolicy {
    fn build(board: &Arc<Board>, naive: bool) -> Result<MirrorReversePolicy, PolicyError> {
        let perm = board
            .symmetry(MIRROR)
            .filter(|p| board.preserves_game(p))
            .ok_or_else(|| WrongFamily("no cell-preserving mirror map".into()))?
            .to_vec();
        let layout = PPathsLayout::recover(board)?;
        if perm[layout.u] != layout.v {
            return Err(WrongFamily("the mirror must swap the two end vertices".into()).into());
        }
        Ok(MirrorReversePolicy { board: board.clone(), perm, layout, naive })
    }

    /// The strategy for the player favoured by edge-count parity, on boards
    /// whose odd paths all have at least five edges, or with one exceptional
    /// path of one or three edges when the total is odd.
    pub fn new(board: &Arc<Board>, player: Player) -> Result<MirrorReversePolicy, PolicyError> {
        let policy = Self::build(board, false)?;
        let odd_total = board.edge_count() % 2 == 1;
        require_player(player, if odd_total { Player::P1 } else { Player::P2 }, "mirror-reverse")?;
        let short: Vec<(usize, usize)> = policy
            .layout
            .paths
            .iter()
            .enumerate()
            .filter(|(_, p)| p.len() % 2 == 1 && p.len() < 5)
            .map(|(i, p)| (i, p.len()))
            .collect();
        if short.len() > 1 || (short.len() == 1 && !odd_total) {
            let (i, len) = short[if short.len() > 1 { 1 } else { 0 }];
            return Err(PolicyError::Precondition(format!(
                "path {i} has {len} edges; odd paths need at least 5 (one exception allowed when the total is odd)"
            )));
        }
        Ok(policy)
    }

    /// Plain mirror-reverse without the loner-first opening or the role
    /// switch; refuses nothing beyond the family check.
    pub fn naive(board: &Arc<Board>) -> Result<MirrorReversePolicy, PolicyError> {
        Self::build(board, true)
    }

    fn initial_roles(&self) -> Vec<Role> {
        (0..self.board.edge_count())
            .map(|e| {
                let (img, _) = self.board.map_edge(&self.perm, e).expect("symmetry");
                if img == e {
                    Role::Loner
                } else {
                    Role::Mirrored(img)
                }
            })
            .collect()
    }

    /// Role-switch trigger for `mv` about to be played in `state`.
    fn switch_for(&self, state: &GameState, roles: &[Role], mv: Move) -> Option<(EdgeId, EdgeId)> {
        let (p, _) = self.layout.path_of(mv.edge)?;
        let path = &self.layout.paths[p];
        if path.len().is_multiple_of(2) {
            return None;
        }
        let open: Vec<EdgeId> = path.edges.iter().copied().filter(|&e| state.mark(e).is_none()).collect();
        let markable = open.iter().all(|&e| !state.legal_orientations(e).map(|l| l.is_empty()).unwrap_or(true));
        if open.len() != 3 || !markable || !open.contains(&mv.edge) {
            return None;
        }
        let loner = open.iter().copied().find(|&e| roles[e] == Role::Loner)?;
        match roles[mv.edge] {
            Role::Mirrored(partner) if open.contains(&partner) => Some((partner, loner)),
            _ => None,
        }
    }

    /// Roles after replaying the history, and whether the last move counts
    /// as a loner move. Only opponent moves trigger a role switch.
    fn replay(&self, state: &GameState) -> (Vec<Role>, bool) {
        let mut roles = self.initial_roles();
        let mut last_was_loner = false;
        let mut s = GameState::new(self.board.clone());
        let me = state.to_move();
        for &mv in state.history() {
            last_was_loner = roles[mv.edge] == Role::Loner;
            if !self.naive && s.to_move() != me {
                if let Some((a, b)) = self.switch_for(&s, &roles, mv) {
                    roles[mv.edge] = Role::Loner;
                    roles[a] = Role::Switched(b);
                    roles[b] = Role::Switched(a);
                    last_was_loner = true;
                }
            }
            s.play(mv).expect("history is legal");
        }
        (roles, last_was_loner)
    }

    fn open_loner(&self, state: &GameState, roles: &[Role]) -> Option<Move> {
        let loners = (0..self.board.edge_count()).filter(|&e| roles[e] == Role::Loner && state.mark(e).is_none());
        // short exceptional paths take priority
        let mut order: Vec<EdgeId> = loners.collect();
        order.sort_by_key(|&e| {
            let len = self.layout.path_of(e).map_or(usize::MAX, |(p, _)| self.layout.paths[p].len());
            (usize::from(len >= 5), e)
        });
        order.into_iter().flat_map(|e| Orientation::BOTH.map(|d| Move::new(e, d))).find(|&mv| is_legal(state, mv))
    }
}

impl Policy for MirrorReversePolicy {
    fn name(&self) -> &str {
        if self.naive {
            "mirror-reverse-naive"
        } else {
            "mirror-reverse"
        }
    }

    fn choose(&self, state: &GameState) -> Result<Move, PolicyError> {
        let (roles, last_was_loner) = self.replay(state);
        let Some(&last) = state.history().last() else {
            if self.naive {
                return first_safe(state);
            }
            return self.open_loner(state, &roles).map_or_else(|| first_safe(state), Ok);
        };
        if last_was_loner {
            return self.open_loner(state, &roles).map_or_else(|| first_safe(state), Ok);
        }
        match roles[last.edge] {
            Role::Mirrored(_) => {
                let reply = image_reversed(&self.board, &self.perm, last);
                if is_legal(state, reply) {
                    Ok(reply)
                } else {
                    Err(PolicyError::Invariant(format!(
                        "mirror-reverse reply {} to {} is illegal",
                        reply.display(&self.board),
                        last.display(&self.board)
                    )))
                }
            }
            Role::Switched(partner) => Orientation::BOTH
                .into_iter()
                .map(|d| Move::new(partner, d))
                .find(|&mv| is_legal(state, mv))
                .map_or_else(|| first_safe(state), Ok),
            Role::Loner => first_safe(state),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family};
    use crate::solver::SearchLimits;
    use crate::strategies::{verify_policy, win_now_wrap};

    fn ppaths(lens: &[usize]) -> Arc<Board> {
        Arc::new(generate(&Family::PPaths(lens.to_vec())).unwrap())
    }

    #[test]
    fn mirror_reverse_of_leftmost_edge() {
        let board = ppaths(&[4, 4, 2]);
        let p = MirrorReversePolicy::new(&board, Player::P2).unwrap();
        let path = &p.layout.paths[0];
        let s = GameState::from_moves(board.clone(), &[path.forward(&board, 0)]).unwrap();
        assert_eq!(p.choose(&s).unwrap(), path.forward(&board, 3));
    }

    #[test]
    fn opens_on_the_five_path_loner() {
        let board = ppaths(&[5, 4, 4]);
        let p = MirrorReversePolicy::new(&board, Player::P1).unwrap();
        let mv = p.choose(&GameState::new(board.clone())).unwrap();
        assert_eq!(p.layout.path_of(mv.edge), Some((0, 2)));
    }

    #[test]
    fn short_odd_paths_are_refused() {
        let err = MirrorReversePolicy::new(&ppaths(&[5, 3, 3]), Player::P1).err().unwrap();
        assert!(err.to_string().contains("path 2 has 3 edges"), "{err}");
        assert!(MirrorReversePolicy::new(&ppaths(&[4, 4, 1]), Player::P2).is_err());
        assert!(MirrorReversePolicy::new(&ppaths(&[4, 4, 1]), Player::P1).is_ok());
        assert!(MirrorReversePolicy::new(&ppaths(&[4, 4, 3]), Player::P1).is_ok());
        assert!(MirrorReversePolicy::new(&generate(&Family::Grid(2, 3)).unwrap().into(), Player::P1).is_err());
    }

    #[test]
    fn verified_on_small_boards() {
        for (lens, player) in [(vec![4, 4, 2], Player::P2), (vec![2, 2, 2], Player::P2), (vec![4, 4, 3], Player::P1)] {
            let board = ppaths(&lens);
            let p = win_now_wrap(MirrorReversePolicy::new(&board, player).unwrap());
            let r = verify_policy(&board, &p, player, &SearchLimits::default()).unwrap();
            assert!(r.verified, "{lens:?}: {:?} {:?}", r.reason, r.counterexample);
        }
    }

    #[test]
    fn naive_mirror_loses_on_a_short_odd_path() {
        let board = ppaths(&[4, 4, 1]);
        let p = win_now_wrap(MirrorReversePolicy::naive(&board).unwrap());
        let r = verify_policy(&board, &p, Player::P2, &SearchLimits::default()).unwrap();
        assert!(!r.verified);
        let end = GameState::from_moves(board.clone(), &r.counterexample).unwrap();
        // the opponent closes a cell with the last move of the line
        assert!(!end.completed_cells().is_empty(), "{:?}", r.reason);
        assert_eq!(end.history().len() % 2, 1);
    }
}
