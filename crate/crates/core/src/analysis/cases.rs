//! The five primary-edge patterns on j-2-k boards that force an even number
//! of unmarkable edges, matched up to the board's three symmetries.

use std::fmt;

use serde::Serialize;

use crate::game::{GameState, Move};
use crate::structure::J2kLayout;

use super::{signal_of, AnalysisError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseName {
    A,
    B,
    C,
    D,
    E,
}

pub const CASES: [CaseName; 5] = [CaseName::A, CaseName::B, CaseName::C, CaseName::D, CaseName::E];

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Constraints as (primary label, signal at that label's hub).
pub fn case_template(case: CaseName) -> &'static [(usize, i8)] {
    match case {
        CaseName::A => &[(1, 1), (2, 1), (5, -1), (6, -1)],
        CaseName::B => &[(1, 1), (3, 1), (6, -1)],
        CaseName::C => &[(1, 1), (3, 1), (5, -1)],
        CaseName::D => &[(1, -1), (3, -1), (6, 1)],
        CaseName::E => &[(1, -1), (3, -1), (5, 1)],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Transform {
    Identity,
    Horizontal,
    Vertical,
    Rotational,
}

impl Transform {
    pub const ALL: [Transform; 4] =
        [Transform::Identity, Transform::Horizontal, Transform::Vertical, Transform::Rotational];

    /// Image of a primary label. Hubs swap under horizontal and rotational
    /// maps, so signals (relative to the hub) carry over unchanged.
    pub fn apply(self, label: usize) -> usize {
        const H: [usize; 7] = [0, 6, 5, 4, 3, 2, 1];
        const V: [usize; 7] = [0, 2, 1, 3, 4, 6, 5];
        const R: [usize; 7] = [0, 5, 6, 4, 3, 1, 2];
        match self {
            Transform::Identity => label,
            Transform::Horizontal => H[label],
            Transform::Vertical => V[label],
            Transform::Rotational => R[label],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseLabel {
    pub case: Option<CaseName>,
    pub transform: Transform,
}

impl CaseLabel {
    pub const NONE: CaseLabel = CaseLabel { case: None, transform: Transform::Identity };
}

/// Signals of labels 1..=6, index 0 unused.
pub(crate) fn primary_signals(state: &GameState, layout: &J2kLayout) -> Result<[Option<i8>; 7], AnalysisError> {
    let mut out = [None; 7];
    for (label, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = signal_of(state, layout.hub(label), layout.primary(label))?.map(|s| s.value);
    }
    Ok(out)
}

pub(crate) fn match_signals(signals: &[Option<i8>; 7]) -> CaseLabel {
    for case in CASES {
        for t in Transform::ALL {
            if case_template(case).iter().all(|&(label, v)| signals[t.apply(label)] == Some(v)) {
                return CaseLabel { case: Some(case), transform: t };
            }
        }
    }
    CaseLabel::NONE
}

/// First case and transform, in A..E then identity/horizontal/vertical/
/// rotational order, whose constraints all hold among the primary signals.
pub fn classify_case(state: &GameState) -> Result<CaseLabel, AnalysisError> {
    let layout = J2kLayout::recover(state.board())?;
    Ok(match_signals(&primary_signals(state, &layout)?))
}

/// Arrows on the constrained primary edges realizing `case` under `t`.
pub fn instantiate_case(layout: &J2kLayout, state: &GameState, case: CaseName, t: Transform) -> Vec<Move> {
    case_template(case).iter().map(|&(label, v)| layout.primary_move(state.board(), t.apply(label), v)).collect()
}
