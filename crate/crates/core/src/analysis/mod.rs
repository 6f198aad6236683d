//! Parity calculus for unmarkable edges: signals at hub vertices, path
//! interactions, the A–E case templates on j-2-k boards, and the scan of the
//! degree-1-free parity conjecture.

mod cases;
mod scan;

use serde::Serialize;
use thiserror::Error;

use crate::board::{EdgeId, VertexId};
use crate::game::{GameState, MoveError, Orientation};
use crate::structure::{HubPath, WrongFamily};

pub(crate) use cases::match_signals;
pub use cases::{case_template, classify_case, instantiate_case, CaseLabel, CaseName, Transform, CASES};
pub use scan::{conjecture_population, conjecture_scan, format_scan, ScanReport, ScanRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("edge {edge} is not incident to vertex {vertex}")]
    NotIncident { edge: EdgeId, vertex: VertexId },
    #[error("signal at vertex {vertex} is unknown")]
    UnknownSignal { vertex: VertexId },
    #[error("path still has a markable edge")]
    NotTerminal,
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Family(#[from] WrongFamily),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignalKind {
    Explicit,
    Implicit,
}

/// Direction of a primary edge seen from its hub: +1 toward, -1 away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signal {
    pub value: i8,
    pub kind: SignalKind,
}

fn arrow_into(state: &GameState, edge: EdgeId, v: VertexId) -> Option<bool> {
    state.mark(edge).map(|o| o.ends(&state.board().edge(edge)).1 == v)
}

/// Which arrow `v` forbids on `edge`: `Some(true)` forbids pointing into `v`
/// (it would become a sink), `Some(false)` forbids pointing out.
fn forbidden_at(state: &GameState, edge: EdgeId, v: VertexId) -> Option<bool> {
    let board = state.board();
    if board.is_exempt(v) {
        return None;
    }
    let others: Vec<Option<bool>> =
        board.incident(v).iter().filter(|&&e| e != edge).map(|&e| arrow_into(state, e, v)).collect();
    if others.iter().any(Option::is_none) {
        return None;
    }
    if others.iter().all(|x| *x == Some(true)) {
        Some(true)
    } else if others.iter().all(|x| *x == Some(false)) {
        Some(false)
    } else {
        None
    }
}

/// Explicit signal of a marked primary edge, implicit signal of an
/// unmarkable one, `None` while it is unmarked and markable.
pub fn signal_of(state: &GameState, hub: VertexId, primary: EdgeId) -> Result<Option<Signal>, AnalysisError> {
    let board = state.board();
    if primary >= board.edge_count() || !board.incident(hub).contains(&primary) {
        return Err(AnalysisError::NotIncident { edge: primary, vertex: hub });
    }
    if let Some(into) = arrow_into(state, primary, hub) {
        let value = if into { 1 } else { -1 };
        return Ok(Some(Signal { value, kind: SignalKind::Explicit }));
    }
    if !state.is_unmarkable(primary)? {
        return Ok(None);
    }
    // The implicit direction is the one the hub itself would accept.
    let value = match forbidden_at(state, primary, hub) {
        Some(true) => -1,
        Some(false) => 1,
        None => match forbidden_at(state, primary, board.other_end(primary, hub)) {
            Some(true) => 1,
            Some(false) => -1,
            None => return Ok(None),
        },
    };
    Ok(Some(Signal { value, kind: SignalKind::Implicit }))
}

/// The pair of end signals of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interaction {
    pub a: i8,
    pub b: i8,
}

/// Parity of an unmarkable-edge count: 0 even, 1 odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Parity(pub u8);

impl Parity {
    pub const EVEN: Parity = Parity(0);
    pub const ODD: Parity = Parity(1);

    pub fn of(count: usize) -> Parity {
        Parity((count % 2) as u8)
    }
}

/// Opposite signals leave an even number of unmarkable edges, equal ones odd.
pub fn interaction_parity(i: Interaction) -> Parity {
    if i.a == i.b {
        Parity::ODD
    } else {
        Parity::EVEN
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PathParity {
    pub interaction: Interaction,
    pub predicted: Parity,
    pub counted: Parity,
    pub unmarkable: usize,
    pub verified: bool,
}

/// Compare the parity predicted by a terminal path's end signals with the
/// unmarkable edges actually on it. The hubs are the path's end vertices.
pub fn path_parity_check(state: &GameState, path: &HubPath) -> Result<PathParity, AnalysisError> {
    let first = path.vertices[0];
    let last = *path.vertices.last().unwrap();
    let a = signal_of(state, first, path.edges[0])?.ok_or(AnalysisError::UnknownSignal { vertex: first })?;
    let b =
        signal_of(state, last, *path.edges.last().unwrap())?.ok_or(AnalysisError::UnknownSignal { vertex: last })?;
    let mut unmarkable = 0;
    for &e in &path.edges {
        if state.mark(e).is_none() {
            if !state.is_unmarkable(e)? {
                return Err(AnalysisError::NotTerminal);
            }
            unmarkable += 1;
        }
    }
    let interaction = Interaction { a: a.value, b: b.value };
    let predicted = interaction_parity(interaction);
    let counted = Parity::of(unmarkable);
    Ok(PathParity { interaction, predicted, counted, unmarkable, verified: predicted == counted })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlmostKind {
    AlmostSink,
    AlmostSource,
    Neither,
}

/// All but one incident edge pointing in (almost-sink) or out (almost-source).
pub fn almost_degree(state: &GameState, vertex: VertexId) -> AlmostKind {
    let board = state.board();
    let deg = board.degree(vertex);
    let (mut ins, mut outs) = (0, 0);
    for &e in board.incident(vertex) {
        match arrow_into(state, e, vertex) {
            Some(true) => ins += 1,
            Some(false) => outs += 1,
            None => {}
        }
    }
    let sink = deg >= 2 && ins == deg - 1;
    let source = deg >= 2 && outs == deg - 1;
    match (sink, source) {
        (true, false) => AlmostKind::AlmostSink,
        (false, true) => AlmostKind::AlmostSource,
        _ => AlmostKind::Neither,
    }
}

/// Number of unmarkable edges incident to `vertex`.
pub fn unmarkable_at(state: &GameState, vertex: VertexId) -> usize {
    state
        .board()
        .incident(vertex)
        .iter()
        .filter(|&&e| state.mark(e).is_none() && state.is_unmarkable(e).unwrap_or(false))
        .count()
}

/// The orientation of `edge` that points into `v`.
pub fn toward(state: &GameState, edge: EdgeId, v: VertexId) -> Orientation {
    Orientation::from_to(&state.board().edge(edge), state.board().other_end(edge, v))
}
