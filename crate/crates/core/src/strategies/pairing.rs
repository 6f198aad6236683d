//! 3-2-k boards by pairing: the two inner edges, the two outer edges of the
//! 3-path, the k-path edges symmetric about its middle, and for odd k the two
//! path middles. Each opponent move is answered on its partner in the same
//! direction along the path (the middles may need the opposite direction).
//!
//! Repair: when a cell is down to three unmarked markable edges, a pair and
//! its path middle, while the other path's middle is still open and
//! markable, an opponent move on the pair is answered on the other middle,
//! and the two edges left in the cell become a pair. The other middle is
//! directed so that its own cell can no longer close when possible.
//!
//! Pairing alone loses for odd k: once both outer paths flow the same way
//! round, one inner direction closes both cells at once (0→2, 3→1, 0→5 on
//! 3-2-3, answered 6→1, loses to 4→0). A paired reply can also turn
//! illegal at a hub. The corrected policy therefore works through, in order:
//! - hubs already settled as an almost-source and an almost-sink, with the
//!   inner path agreeing at one of them: any move handing over nothing, since
//!   the parity is then fixed;
//! - a move that settles the hubs that way;
//! - the repair;
//! - both outer paths flowing the same way round: the inner path the same
//!   way, which kills both cells;
//! - the paired reply.
//!
//! [`Pairing32kPolicy::literal`] plays the pairing and repair alone.

use std::sync::Arc;

use crate::board::{Board, EdgeId};
use crate::game::{GameState, Move, Orientation, Player};
use crate::structure::{HubPath, J2kLayout, WrongFamily};

use super::j2k::{effective_signals, settled};
use super::{first_safe, gives_away, is_legal, require_player, Policy, PolicyError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Link {
    /// Same direction along the path.
    Same(EdgeId),
    /// Same direction when legal, otherwise opposite.
    Middle(EdgeId),
    /// Paired by a repair; any legal direction.
    Free(EdgeId),
}

impl Link {
    fn partner(self) -> EdgeId {
        match self {
            Link::Same(e) | Link::Middle(e) | Link::Free(e) => e,
        }
    }
}

pub struct Pairing32kPolicy {
    board: Arc<Board>,
    three: HubPath,
    other: HubPath,
    inner: HubPath,
    layout: J2kLayout,
    literal: bool,
}

impl Pairing32kPolicy {
    pub fn new(board: &Arc<Board>, player: Player) -> Result<Pairing32kPolicy, PolicyError> {
        let layout = J2kLayout::recover(board)?;
        let p = layout.paths.clone();
        let (three, other) = if p.upper.len() == 3 {
            (p.upper, p.lower)
        } else if p.lower.len() == 3 {
            (p.lower, p.upper)
        } else {
            return Err(WrongFamily("no outer path of length 3".into()).into());
        };
        let k = other.len();
        if k < 2 {
            return Err(WrongFamily(format!("other outer path has {k} edges; need at least 2")).into());
        }
        require_player(player, if k % 2 == 0 { Player::P1 } else { Player::P2 }, "3-2-k pairing")?;
        Ok(Pairing32kPolicy { board: board.clone(), three, other, inner: p.inner, layout, literal: false })
    }

    /// Pairing and repair only, without the parallel-paths correction.
    pub fn literal(board: &Arc<Board>, player: Player) -> Result<Pairing32kPolicy, PolicyError> {
        Ok(Pairing32kPolicy { literal: true, ..Self::new(board, player)? })
    }

    fn k(&self) -> usize {
        self.other.len()
    }

    fn k_middle(&self) -> Option<EdgeId> {
        (self.k() % 2 == 1).then(|| self.other.edges[self.k() / 2])
    }

    fn initial_links(&self) -> Vec<Option<Link>> {
        let mut links = vec![None; self.board.edge_count()];
        let mut pair = |a: EdgeId, b: EdgeId, middle: bool| {
            links[a] = Some(if middle { Link::Middle(b) } else { Link::Same(b) });
            links[b] = Some(if middle { Link::Middle(a) } else { Link::Same(a) });
        };
        pair(self.inner.edges[0], self.inner.edges[1], false);
        pair(self.three.edges[0], self.three.edges[2], false);
        let k = self.k();
        for i in 0..k / 2 {
            pair(self.other.edges[i], self.other.edges[k - 1 - i], false);
        }
        if let Some(m) = self.k_middle() {
            pair(m, self.three.edges[1], true);
        }
        links
    }

    fn along(&self, edge: EdgeId) -> (&HubPath, usize) {
        [&self.inner, &self.three, &self.other]
            .into_iter()
            .find_map(|p| p.position(edge).map(|i| (p, i)))
            .expect("edge on a hub path")
    }

    fn is_forward(&self, mv: Move) -> bool {
        let (p, i) = self.along(mv.edge);
        p.is_forward(&self.board, i, mv.dir)
    }

    fn along_move(&self, edge: EdgeId, forward: bool) -> Move {
        let (p, i) = self.along(edge);
        if forward {
            p.forward(&self.board, i)
        } else {
            p.backward(&self.board, i)
        }
    }

    /// Direction of a path's marked edges (true = left to right) when there
    /// is at least one and they all agree.
    fn flow(&self, state: &GameState, path: &HubPath) -> Option<bool> {
        let mut dirs = path
            .edges
            .iter()
            .enumerate()
            .filter_map(|(i, &e)| state.mark(e).map(|o| path.is_forward(&self.board, i, o)));
        let first = dirs.next()?;
        dirs.all(|d| d == first).then_some(first)
    }

    /// Both outer paths flowing the same way with the inner path untouched:
    /// the inner edge that sends it the same way too.
    fn parallel_guard(&self, state: &GameState) -> Option<Move> {
        let upper = self.flow(state, &self.three)?;
        if self.flow(state, &self.other)? != upper || self.inner.edges.iter().any(|&e| state.mark(e).is_some()) {
            return None;
        }
        (0..2)
            .map(|i| self.along_move(self.inner.edges[i], upper))
            .find(|&mv| is_legal(state, mv) && !gives_away(state, mv))
    }

    fn markable(state: &GameState, e: EdgeId) -> bool {
        state.mark(e).is_none() && state.legal_orientations(e).is_ok_and(|l| !l.is_empty())
    }

    /// Repair trigger for opponent move `mv` about to be played in `state`:
    /// returns (other middle to play, edge left in the pair, this middle).
    fn repair_for(&self, state: &GameState, links: &[Option<Link>], mv: Move) -> Option<(EdgeId, EdgeId, EdgeId)> {
        let k_mid = self.k_middle()?;
        let j_mid = self.three.edges[1];
        for cell in 0..self.board.cells().len() {
            let open: Vec<EdgeId> =
                self.board.cell_edges(cell).iter().map(|&(e, _)| e).filter(|&e| state.mark(e).is_none()).collect();
            if open.len() != 3 || !open.contains(&mv.edge) || !open.iter().all(|&e| Self::markable(state, e)) {
                continue;
            }
            let (this_mid, other_mid) = if open.contains(&j_mid) {
                (j_mid, k_mid)
            } else if open.contains(&k_mid) {
                (k_mid, j_mid)
            } else {
                continue;
            };
            if mv.edge == this_mid || !Self::markable(state, other_mid) {
                continue;
            }
            let rest = open.iter().copied().find(|&e| e != this_mid && e != mv.edge)?;
            if links[mv.edge].map(Link::partner) == Some(rest) {
                return Some((other_mid, rest, this_mid));
            }
        }
        None
    }

    /// Links after replaying the history, plus a pending repair reply to the
    /// last move.
    fn replay(&self, state: &GameState) -> (Vec<Option<Link>>, Option<EdgeId>) {
        let mut links = self.initial_links();
        let mut pending = None;
        let me = state.to_move();
        let mut s = GameState::new(self.board.clone());
        for &mv in state.history() {
            pending = None;
            if s.to_move() != me {
                if let Some((reply, rest, this_mid)) = self.repair_for(&s, &links, mv) {
                    links[reply] = None;
                    links[mv.edge] = None;
                    links[rest] = Some(Link::Free(this_mid));
                    links[this_mid] = Some(Link::Free(rest));
                    pending = Some(reply);
                }
            }
            s.play(mv).expect("history is legal");
        }
        (links, pending)
    }

    /// A cell whose marked edges disagree on the way round can never close.
    fn cell_dead(state: &GameState, cell: usize) -> bool {
        let mut ways = state.board().cell_edges(cell).iter().filter_map(|&(e, o)| state.mark(e).map(|m| m == o));
        let first = ways.next();
        ways.any(|w| Some(w) != first)
    }

    /// The repair move on the other middle: a direction that kills its cell,
    /// else one that hands over nothing.
    fn repair_move(state: &GameState, e: EdgeId) -> Option<Move> {
        let legal: Vec<Move> =
            Orientation::BOTH.into_iter().map(|d| Move::new(e, d)).filter(|&mv| is_legal(state, mv)).collect();
        let kills = |mv: Move| {
            let next = state.apply_move(mv).expect("legal");
            state.board().edge_cells(e).iter().all(|&(c, _)| Self::cell_dead(&next, c))
        };
        legal
            .iter()
            .copied()
            .find(|&mv| kills(mv) && !gives_away(state, mv))
            .or_else(|| legal.iter().copied().find(|&mv| !gives_away(state, mv)))
            .or_else(|| legal.first().copied())
    }

    fn any_direction(state: &GameState, e: EdgeId) -> Option<Move> {
        Orientation::BOTH.into_iter().map(|d| Move::new(e, d)).find(|&mv| is_legal(state, mv))
    }
}

impl Policy for Pairing32kPolicy {
    fn name(&self) -> &str {
        if self.literal {
            "pairing-32k-literal"
        } else {
            "pairing-32k"
        }
    }

    fn choose(&self, state: &GameState) -> Result<Move, PolicyError> {
        let Some(&last) = state.history().last() else {
            // even k: the 3-path middle is the unpaired opening
            let open = self.along_move(self.three.edges[1], true);
            return Ok(open);
        };
        if self.literal {
            return self.paired_reply(state, last);
        }
        let sig = effective_signals(state, &self.layout);
        if settled(&sig) {
            return first_safe(state);
        }
        let safe = |mv: &Move| is_legal(state, *mv) && !gives_away(state, *mv);
        // settle the hubs when one move does it
        let settle = state.legal_moves().into_iter().find(|&mv| {
            !gives_away(state, mv) && settled(&effective_signals(&state.apply_move(mv).expect("legal"), &self.layout))
        });
        let repair = || self.replay(state).1.and_then(|e| Self::repair_move(state, e)).filter(safe);
        let paired = || self.paired_reply(state, last).ok().filter(safe);
        if let Some(mv) = settle.or_else(repair).or_else(|| self.parallel_guard(state)).or_else(paired) {
            return Ok(mv);
        }
        match self.paired_reply(state, last) {
            Ok(mv) if is_legal(state, mv) => Ok(mv),
            _ => first_safe(state),
        }
    }
}

impl Pairing32kPolicy {
    /// The pairing answer to `last`, with the repair.
    fn paired_reply(&self, state: &GameState, last: Move) -> Result<Move, PolicyError> {
        let (links, pending) = self.replay(state);
        if let Some(reply) = pending {
            return Self::repair_move(state, reply).map_or_else(|| first_safe(state), Ok);
        }
        let Some(link) = links[last.edge] else { return first_safe(state) };
        let partner = link.partner();
        if state.mark(partner).is_some() {
            return first_safe(state);
        }
        let same = self.along_move(partner, self.is_forward(last));
        match link {
            Link::Same(_) if is_legal(state, same) => Ok(same),
            Link::Same(_) => Err(PolicyError::Invariant(format!(
                "paired reply {} to {} is illegal",
                same.display(&self.board),
                last.display(&self.board)
            ))),
            Link::Middle(_) => {
                let opposite = self.along_move(partner, !self.is_forward(last));
                [same, opposite].into_iter().find(|&mv| is_legal(state, mv)).map_or_else(|| first_safe(state), Ok)
            }
            Link::Free(_) => Self::any_direction(state, partner).map_or_else(|| first_safe(state), Ok),
        }
    }
}
