//! Paths with exempt ends, played from nested windows: window `k` spans
//! edges `2k..n-2k`. While a window's two end pairs (primary plus secondary
//! edge) are untouched, its ends behave as exempt, so the inner game decides
//! who must touch it first. When one end pair is touched, answering on the
//! other primary edge fixes the window's unmarkable parity: equal
//! directions along the path give an even count, opposite ones odd.

use std::sync::Arc;

use crate::board::Board;
use crate::game::{GameState, Move, Player};
use crate::structure::{recover_path, HubPath};

use super::{first_safe, is_legal, Policy, PolicyError};

pub struct PathPolicy {
    board: Arc<Board>,
    path: HubPath,
}

impl PathPolicy {
    pub fn new(board: &Arc<Board>) -> Result<PathPolicy, PolicyError> {
        Ok(PathPolicy { board: board.clone(), path: recover_path(board)? })
    }

    fn forward_of(&self, state: &GameState, i: usize) -> Option<bool> {
        state.mark(self.path.edges[i]).map(|o| self.path.is_forward(&self.board, i, o))
    }

    fn along(&self, i: usize, forward: bool) -> Move {
        if forward {
            self.path.forward(&self.board, i)
        } else {
            self.path.backward(&self.board, i)
        }
    }

    fn first_legal_in(&self, state: &GameState, lo: usize, hi: usize) -> Option<Move> {
        (lo..hi).flat_map(|i| [self.along(i, true), self.along(i, false)]).find(|&mv| is_legal(state, mv))
    }
}

impl Policy for PathPolicy {
    fn name(&self) -> &str {
        "path"
    }

    fn choose(&self, state: &GameState) -> Result<Move, PolicyError> {
        let n = self.path.len();
        // the mover wants to make the last move inside the window
        let want = usize::from(state.to_move() == Player::P1);
        let mut k = 0;
        while 4 * k < n {
            let (lo, hi) = (2 * k, n - 2 * k);
            let len = hi - lo;
            if len == 1 {
                if state.mark(self.path.edges[lo]).is_none() {
                    if let Some(mv) = self.first_legal_in(state, lo, hi) {
                        return Ok(mv);
                    }
                }
                break;
            }
            // (primary, secondary) at each end; a 2-edge window has no secondaries
            let left = (lo, if len >= 3 { Some(lo + 1) } else { None });
            let right = (hi - 1, if len >= 3 { Some(hi - 2) } else { None });
            let touched = |(p, s): (usize, Option<usize>)| {
                state.mark(self.path.edges[p]).is_some() || s.is_some_and(|s| state.mark(self.path.edges[s]).is_some())
            };
            match (touched(left), touched(right)) {
                (false, false) => {
                    if len == 3 {
                        let mv = self.along(lo + 1, true);
                        if is_legal(state, mv) {
                            return Ok(mv);
                        }
                    }
                    if len >= 5 {
                        k += 1;
                        continue;
                    }
                    if let Some(mv) = self.first_legal_in(state, lo, hi) {
                        return Ok(mv);
                    }
                    break;
                }
                (true, true) => {
                    if let Some(mv) = self.first_legal_in(state, lo, hi) {
                        return Ok(mv);
                    }
                    break;
                }
                (l, _) => {
                    let ((p, s), other) = if l { (left, right.0) } else { (right, left.0) };
                    // a marked secondary forces its primary to continue its direction
                    let forward = self.forward_of(state, p).or_else(|| s.and_then(|s| self.forward_of(state, s)));
                    let Some(forward) = forward else { break };
                    let same = (len + want) % 2 == 0;
                    let preferred = self.along(other, forward == same);
                    let fallback = self.along(other, forward != same);
                    if let Some(mv) = [preferred, fallback].into_iter().find(|&mv| is_legal(state, mv)) {
                        return Ok(mv);
                    }
                    break;
                }
            }
        }
        first_safe(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family};
    use crate::solver::SearchLimits;
    use crate::strategies::{verify_policy, win_now_wrap};

    fn setup(n: usize) -> (Arc<Board>, PathPolicy) {
        let board = Arc::new(generate(&Family::Path(n)).unwrap());
        let policy = PathPolicy::new(&board).unwrap();
        (board, policy)
    }

    #[test]
    fn answers_secondary_move_on_the_far_primary() {
        let (board, policy) = setup(5);
        let s = GameState::from_moves(board.clone(), &[Move::between(&board, 1, 2).unwrap()]).unwrap();
        assert_eq!(policy.choose(&s).unwrap().tail_head(&board), (5, 4));
    }

    #[test]
    fn short_paths_open_in_the_center() {
        let (board, policy) = setup(1);
        assert_eq!(policy.choose(&GameState::new(board.clone())).unwrap().edge, 0);
        let (board, policy) = setup(3);
        assert_eq!(policy.choose(&GameState::new(board)).unwrap().edge, 1);
    }

    #[test]
    fn winner_side_verifies_on_short_paths() {
        for n in 1..=9 {
            let (board, policy) = setup(n);
            let player = if n % 2 == 1 { Player::P1 } else { Player::P2 };
            let r = verify_policy(&board, &win_now_wrap(policy), player, &SearchLimits::default()).unwrap();
            assert!(r.verified, "path {n}: {:?} {:?}", r.reason, r.counterexample);
        }
    }

    #[test]
    fn refuses_other_families() {
        let board = Arc::new(generate(&Family::Polygon(5)).unwrap());
        assert!(PathPolicy::new(&board).is_err());
    }
}
