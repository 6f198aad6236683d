//! j-2-k boards with j, k ≥ 4: steer into one of cases B–E, an almost-sink
//! at one hub and an almost-source at the other with the inner path
//! directed, then play moves that never hand the opponent a cell.
//!
//! Opening: an inner edge toward the left hub, or, when the opponent has
//! already fixed a primary signal at some hub, the inner edge at that hub
//! with the same signal. Then each hub needs an outer primary edge whose
//! signal matches its inner one; a hub the opponent has half spoiled goes
//! first.

use std::sync::Arc;

use crate::analysis::{match_signals, signal_of, CaseName};
use crate::board::Board;
use crate::game::{GameState, Move, Player};
use crate::structure::{J2kLayout, WrongFamily};

use super::{first_safe, gives_away, is_legal, require_player, Policy, PolicyError};

/// Signals of primary labels 1..=6 (index 0 unused). Beyond explicit and
/// implicit signals, a marked secondary edge fixes its primary's eventual
/// direction, and a marked inner edge fixes the other one.
pub(crate) fn effective_signals(state: &GameState, layout: &J2kLayout) -> [Option<i8>; 7] {
    let board = state.board();
    let mut out = [None; 7];
    for label in 1..=6 {
        let hub = layout.hub(label);
        let e = layout.primary(label);
        out[label] = signal_of(state, hub, e).expect("primary is incident").map(|s| s.value);
        if out[label].is_some() {
            continue;
        }
        if let Some(sec) = layout.secondary(label) {
            let near = board.other_end(e, hub);
            if let Some(o) = state.mark(sec) {
                // the near vertex has degree 2: its primary must balance the secondary
                let into_near = o.ends(&board.edge(sec)).1 == near;
                out[label] = Some(if into_near { 1 } else { -1 });
            }
        }
    }
    for (a, b) in [(3, 4), (4, 3)] {
        if out[a].is_none() {
            out[a] = out[b].map(|s| -s);
        }
    }
    out
}

/// Majority signal at a hub from its three primary labels, once two agree.
fn majority(signals: &[Option<i8>; 7], labels: [usize; 3]) -> Option<i8> {
    [-1, 1].into_iter().find(|&v| labels.iter().filter(|&&l| signals[l] == Some(v)).count() >= 2)
}

/// The hubs are settled as an almost-sink and an almost-source with the
/// inner path agreeing with the majority at one of them. The unmarkable
/// count is then even whatever is played, and at most one cell can close.
pub(crate) fn settled(signals: &[Option<i8>; 7]) -> bool {
    match (majority(signals, [1, 2, 3]), majority(signals, [4, 5, 6])) {
        (Some(l), Some(r)) => l == -r && (signals[3] == Some(l) || signals[4] == Some(r)),
        _ => false,
    }
}

/// With the inner path sending `left` at the left hub: primary moves giving
/// each hub an outer signal equal to its inner one, a hub with a single
/// option left first.
pub(crate) fn hub_tasks(board: &Board, layout: &J2kLayout, sig: &[Option<i8>; 7], left: i8) -> Vec<Move> {
    let hubs = [(left, [1, 2]), (-left, [6, 5])];
    let mut tasks: Vec<(bool, Vec<Move>)> = Vec::new();
    for (want, labels) in hubs {
        if labels.iter().any(|&l| sig[l] == Some(want)) {
            continue;
        }
        let open: Vec<usize> = labels.iter().copied().filter(|&l| sig[l].is_none()).collect();
        tasks.push((open.len() == 1, open.into_iter().map(|l| layout.primary_move(board, l, want)).collect()));
    }
    tasks.sort_by_key(|(threatened, _)| !threatened);
    tasks.into_iter().flat_map(|(_, moves)| moves).collect()
}

pub(crate) fn case_of(signals: &[Option<i8>; 7]) -> Option<CaseName> {
    match_signals(signals).case
}

pub struct J2kPolicy {
    board: Arc<Board>,
    layout: J2kLayout,
}

impl J2kPolicy {
    pub fn new(board: &Arc<Board>, player: Player) -> Result<J2kPolicy, PolicyError> {
        let layout = J2kLayout::recover(board)?;
        if layout.j < 4 || layout.k < 4 {
            return Err(WrongFamily(format!(
                "outer paths of {} and {} edges; need both at least 4",
                layout.j, layout.k
            ))
            .into());
        }
        let odd = (layout.j + layout.k) % 2 == 1;
        require_player(player, if odd { Player::P1 } else { Player::P2 }, "j-2-k")?;
        Ok(J2kPolicy { board: board.clone(), layout })
    }

    fn play(&self, label: usize, signal: i8) -> Move {
        self.layout.primary_move(&self.board, label, signal)
    }

    /// Signal of the inner path at the left hub, read from a marked inner
    /// edge when there is one: once the inner path is directed the cases only
    /// depend on it, even if the other inner edge later turns unmarkable.
    fn inner_signal(&self, state: &GameState, sig: &[Option<i8>; 7]) -> Option<i8> {
        let l = &self.layout;
        let explicit = |label: usize| {
            state
                .mark(l.primary(label))
                .and(signal_of(state, l.hub(label), l.primary(label)).ok().flatten())
                .map(|s| s.value)
        };
        explicit(3).or(explicit(4).map(|s| -s)).or(sig[3])
    }

    /// Candidate moves working toward cases B–E, best first.
    fn plan(&self, state: &GameState) -> Vec<Move> {
        let sig = effective_signals(state, &self.layout);
        let Some(left) = self.inner_signal(state, &sig) else {
            // inner path still free: copy a fixed outer signal, else point at the left hub
            let copied = [1, 2, 6, 5].into_iter().find_map(|l| sig[l].map(|s| (l, s)));
            return match copied {
                Some((l, s)) if l <= 2 => vec![self.play(3, s)],
                Some((_, s)) => vec![self.play(4, s)],
                None => vec![self.play(3, 1)],
            };
        };
        hub_tasks(&self.board, &self.layout, &sig, left)
    }
}

impl Policy for J2kPolicy {
    fn name(&self) -> &str {
        "j2k"
    }

    fn choose(&self, state: &GameState) -> Result<Move, PolicyError> {
        let candidates: Vec<Move> = self.plan(state).into_iter().filter(|&mv| is_legal(state, mv)).collect();
        if let Some(&mv) = candidates.iter().find(|&&mv| !gives_away(state, mv)) {
            return Ok(mv);
        }
        first_safe(state)
    }
}
