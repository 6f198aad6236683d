//! 1-2-k boards (k ≥ 4): the direct edge ac, the inner path a-b-c and the
//! lower path a-d-f…g-e-c. The triangle abc is blocked first, then the
//! position is forced into a case of the parity calculus by directing ac,
//! ab or bc accordingly.
//!
//! Even k: open a→c, then direct ab or bc so the triangle cannot close.
//! Odd k, by the opponent's opening:
//! - ac: answer on ab or bc so the triangle cannot close;
//! - ab or bc: answer on ac likewise;
//! - ad or df: answer on bc so that ad and bc both point toward a along
//!   their paths, or both away from it;
//! - ce or eg: the mirror image, answering on ab;
//! - anything else: direct ac.

use std::sync::Arc;

use crate::analysis::CaseName;
use crate::board::Board;
use crate::game::{GameState, Move, Player};
use crate::structure::{J2kLayout, WrongFamily};

use super::j2k::{case_of, effective_signals};
use super::{first_safe, gives_away, is_legal, require_player, Policy, PolicyError};

/// How the reply on bc relates to an opening on the a side of the lower
/// path (and symmetrically on the c side).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideRule {
    /// bc points toward a exactly when ad does; ab is then forced to the
    /// same signal at a as ad. This is the winning rule.
    Matching,
    /// The reverse choice, kept as a contrast: it loses to a→d, c→g.
    Opposite,
}

pub struct OneTwoKPolicy {
    board: Arc<Board>,
    layout: J2kLayout,
    rule: SideRule,
}

impl OneTwoKPolicy {
    pub fn new(board: &Arc<Board>, player: Player, rule: SideRule) -> Result<OneTwoKPolicy, PolicyError> {
        let layout = J2kLayout::recover(board)?;
        if layout.j != 1 || layout.k < 4 {
            return Err(WrongFamily(format!(
                "outer paths of {} and {} edges; need 1 and at least 4",
                layout.j, layout.k
            ))
            .into());
        }
        require_player(player, if layout.k % 2 == 0 { Player::P1 } else { Player::P2 }, "1-2-k")?;
        Ok(OneTwoKPolicy { board: board.clone(), layout, rule })
    }

    fn play(&self, label: usize, signal: i8) -> Move {
        self.layout.primary_move(&self.board, label, signal)
    }

    fn flip(&self, s: i8) -> i8 {
        match self.rule {
            SideRule::Opposite => -s,
            SideRule::Matching => s,
        }
    }

    /// The reply to the opponent's opening move.
    fn first_reply(&self, state: &GameState, opening: Move) -> Vec<Move> {
        let l = &self.layout;
        let sig = effective_signals(state, l);
        let e = opening.edge;
        let known = |label: usize| sig[label].expect("signal fixed by the opening");
        if e == l.primary(1) {
            vec![self.play(3, known(1)), self.play(4, known(6))]
        } else if e == l.primary(3) || e == l.primary(4) {
            vec![self.play(1, known(3))]
        } else if e == l.primary(2) || Some(e) == l.secondary(2) {
            let ab = self.flip(known(2));
            vec![self.play(4, -ab)]
        } else if e == l.primary(5) || Some(e) == l.secondary(5) {
            let bc = self.flip(known(5));
            vec![self.play(3, -bc)]
        } else {
            vec![self.play(1, -1)]
        }
    }

    /// Moves on ac, ab or bc that complete a case, B–E before A.
    fn force_case(&self, state: &GameState) -> Vec<Move> {
        let l = &self.layout;
        if case_of(&effective_signals(state, l)).is_some() {
            return Vec::new();
        }
        let mut found: Vec<(bool, Move)> = Vec::new();
        for label in [1, 3, 4] {
            for s in [-1, 1] {
                let mv = self.play(label, s);
                if !is_legal(state, mv) {
                    continue;
                }
                let next = state.apply_move(mv).expect("legal");
                if let Some(case) = case_of(&effective_signals(&next, l)) {
                    found.push((case == CaseName::A, mv));
                }
            }
        }
        found.sort_by_key(|&(is_a, _)| is_a);
        found.into_iter().map(|(_, mv)| mv).collect()
    }
}

impl Policy for OneTwoKPolicy {
    fn name(&self) -> &str {
        match self.rule {
            SideRule::Matching => "12k",
            SideRule::Opposite => "12k-opposite",
        }
    }

    fn choose(&self, state: &GameState) -> Result<Move, PolicyError> {
        let candidates = match state.history() {
            [] => vec![self.play(1, -1)],
            [opening] => self.first_reply(state, *opening),
            _ => self.force_case(state),
        };
        let legal: Vec<Move> = candidates.into_iter().filter(|&mv| is_legal(state, mv)).collect();
        if let Some(&mv) = legal.iter().find(|&&mv| !gives_away(state, mv)) {
            return Ok(mv);
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

    fn board(k: usize) -> Arc<Board> {
        Arc::new(generate(&Family::J2K(1, k)).unwrap())
    }

    #[test]
    fn even_k_opens_a_to_c() {
        let b = board(4);
        let p = OneTwoKPolicy::new(&b, Player::P1, SideRule::Matching).unwrap();
        let mv = p.choose(&GameState::new(b.clone())).unwrap();
        assert_eq!(mv.tail_head(&b), (p.layout.left(), p.layout.right()));
    }

    #[test]
    fn odd_k_blocks_the_triangle() {
        let b = board(5);
        let p = OneTwoKPolicy::new(&b, Player::P2, SideRule::Matching).unwrap();
        let (a, c) = (p.layout.left(), p.layout.right());
        let s = GameState::from_moves(b.clone(), &[Move::between(&b, a, c).unwrap()]).unwrap();
        let reply = p.choose(&s).unwrap();
        let next = s.apply_move(reply).unwrap();
        assert!(p.layout.paths.inner.position(reply.edge).is_some());
        // a now has two arrows out within the triangle
        assert_eq!(effective_signals(&next, &p.layout)[3], Some(-1));
    }

    #[test]
    fn lower_path_opening_is_answered_on_bc() {
        let b = board(5);
        let p = OneTwoKPolicy::new(&b, Player::P2, SideRule::Matching).unwrap();
        let s = GameState::from_moves(b.clone(), &[p.play(2, 1)]).unwrap();
        let reply = p.choose(&s).unwrap();
        assert_eq!(reply.edge, p.layout.primary(4));
        // d→a is answered c→b: both toward a
        assert_eq!(reply.tail_head(&b), (p.layout.right(), p.layout.mid()));
        assert_eq!(effective_signals(&s.apply_move(reply).unwrap(), &p.layout)[3], Some(1));
    }

    #[test]
    fn verified_as_the_parity_winner() {
        for (k, player) in [(4, Player::P1), (5, Player::P2)] {
            let b = board(k);
            let p = win_now_wrap(OneTwoKPolicy::new(&b, player, SideRule::Matching).unwrap());
            let r = verify_policy(&b, &p, player, &SearchLimits::default()).unwrap();
            assert!(r.verified, "1-2-{k}: {:?} {:?}", r.reason, r.counterexample);
        }
    }

    #[test]
    fn opposite_side_rule_is_refuted() {
        let b = board(5);
        let p = win_now_wrap(OneTwoKPolicy::new(&b, Player::P2, SideRule::Opposite).unwrap());
        let r = verify_policy(&b, &p, Player::P2, &SearchLimits::default()).unwrap();
        assert!(!r.verified);
    }
}
