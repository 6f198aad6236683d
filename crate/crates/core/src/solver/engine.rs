//! Incremental position used by the searches. Per-vertex arrow counters make
//! legality O(1); per-cell counters make completion O(cells on the edge).

use crate::board::{Board, EdgeId};
use crate::game::{GameState, Move, Orientation};

use super::symmetry::SymmetryTracker;

/// Direction index: 0 is `TowardV` (key digit 1), 1 is `TowardU` (digit 2).
pub(crate) type Dir = usize;

pub(crate) fn dir_index(o: Orientation) -> Dir {
    match o {
        Orientation::TowardV => 0,
        Orientation::TowardU => 1,
    }
}

pub(crate) fn dir_of(d: Dir) -> Orientation {
    if d == 0 {
        Orientation::TowardV
    } else {
        Orientation::TowardU
    }
}

pub(crate) fn pow3_table(m: usize) -> Vec<u64> {
    let mut pow = Vec::with_capacity(m + 1);
    let mut p = 1u64;
    for _ in 0..=m {
        pow.push(p);
        p = p.saturating_mul(3);
    }
    pow
}

#[derive(Clone)]
pub(crate) struct Engine {
    pub m: usize,
    /// `(tail, head)` per edge per direction.
    ends: Vec<[(u32, u32); 2]>,
    exempt: Vec<bool>,
    into: Vec<u8>,
    out: Vec<u8>,
    unmarked: Vec<u8>,
    /// 0 unmarked, otherwise `dir + 1`.
    pub marks: Vec<u8>,
    pow3: Vec<u64>,
    /// Cells on each edge with the direction that runs forward around it.
    edge_cells: Vec<Vec<(u32, u8)>>,
    cell_len: Vec<u8>,
    /// Marked edges agreeing with the forward / backward traversal.
    cell_count: Vec<[u8; 2]>,
    pub key: u64,
    pub marked: usize,
    sym: Option<SymmetryTracker>,
}

impl Engine {
    pub fn new(board: &Board) -> Engine {
        let m = board.edge_count();
        let n = board.vertex_count();
        let ends = board.edges().iter().map(|e| [(e.u as u32, e.v as u32), (e.v as u32, e.u as u32)]).collect();
        let edge_cells = (0..m)
            .map(|e| board.edge_cells(e).iter().map(|&(c, o)| (c as u32, dir_index(o) as u8)).collect())
            .collect();
        Engine {
            m,
            ends,
            exempt: (0..n).map(|v| board.is_exempt(v)).collect(),
            into: vec![0; n],
            out: vec![0; n],
            unmarked: (0..n).map(|v| board.degree(v) as u8).collect(),
            marks: vec![0; m],
            pow3: pow3_table(m),
            edge_cells,
            cell_len: board.cells().iter().map(|c| c.len() as u8).collect(),
            cell_count: vec![[0, 0]; board.cells().len()],
            key: 0,
            marked: 0,
            sym: None,
        }
    }

    /// Engine at `state`, optionally tracking symmetric images of the key.
    pub fn from_state(state: &GameState, sym: Option<SymmetryTracker>) -> Engine {
        let mut engine = Engine { sym, ..Engine::new(state.board()) };
        for (e, mark) in state.marks().iter().enumerate() {
            if let Some(o) = mark {
                engine.play(e, dir_index(*o));
            }
        }
        engine
    }

    /// Table key: the base-3 marks key, or its minimum over the symmetry
    /// group when reduction is on.
    #[inline]
    pub fn table_key(&self) -> u64 {
        match &self.sym {
            Some(sym) => sym.canonical(self.key),
            None => self.key,
        }
    }

    #[inline]
    pub fn is_marked(&self, e: EdgeId) -> bool {
        self.marks[e] != 0
    }

    /// Legality of an unmarked edge in direction `d`.
    #[inline]
    pub fn legal(&self, e: EdgeId, d: Dir) -> bool {
        let (t, h) = self.ends[e][d];
        let (t, h) = (t as usize, h as usize);
        let source = !self.exempt[t] && self.unmarked[t] == 1 && self.into[t] == 0;
        let sink = !self.exempt[h] && self.unmarked[h] == 1 && self.out[h] == 0;
        !source && !sink
    }

    /// Whether marking `e` in direction `d` completes a cell.
    #[inline]
    pub fn completes(&self, e: EdgeId, d: Dir) -> bool {
        self.edge_cells[e].iter().any(|&(c, fwd)| {
            let side = (d != fwd as usize) as usize;
            self.cell_count[c as usize][side] + 1 == self.cell_len[c as usize]
        })
    }

    #[inline]
    pub fn play(&mut self, e: EdgeId, d: Dir) {
        debug_assert_eq!(self.marks[e], 0);
        let (t, h) = self.ends[e][d];
        let (t, h) = (t as usize, h as usize);
        self.marks[e] = d as u8 + 1;
        self.unmarked[t] -= 1;
        self.unmarked[h] -= 1;
        self.out[t] += 1;
        self.into[h] += 1;
        for &(c, fwd) in &self.edge_cells[e] {
            self.cell_count[c as usize][(d != fwd as usize) as usize] += 1;
        }
        self.key += self.pow3[e] * (d as u64 + 1);
        self.marked += 1;
        if let Some(sym) = &mut self.sym {
            sym.play(e, d);
        }
    }

    #[inline]
    pub fn undo(&mut self, e: EdgeId) {
        let d = self.marks[e] as usize - 1;
        let (t, h) = self.ends[e][d];
        let (t, h) = (t as usize, h as usize);
        self.marks[e] = 0;
        self.unmarked[t] += 1;
        self.unmarked[h] += 1;
        self.out[t] -= 1;
        self.into[h] -= 1;
        for &(c, fwd) in &self.edge_cells[e] {
            self.cell_count[c as usize][(d != fwd as usize) as usize] -= 1;
        }
        self.key -= self.pow3[e] * (d as u64 + 1);
        self.marked -= 1;
        if let Some(sym) = &mut self.sym {
            sym.undo(e, d);
        }
    }

    pub fn legal_moves(&self) -> Vec<(EdgeId, Dir)> {
        let mut moves = Vec::new();
        for e in 0..self.m {
            if self.marks[e] == 0 {
                for d in 0..2 {
                    if self.legal(e, d) {
                        moves.push((e, d));
                    }
                }
            }
        }
        moves
    }

    pub fn is_unmarkable(&self, e: EdgeId) -> bool {
        self.marks[e] == 0 && !self.legal(e, 0) && !self.legal(e, 1)
    }

    pub fn completed_cells(&self) -> usize {
        self.cell_count.iter().zip(&self.cell_len).filter(|(count, &len)| count[0] == len || count[1] == len).count()
    }

    pub fn marks_as_orientations(&self) -> Vec<Option<Orientation>> {
        self.marks.iter().map(|&c| if c == 0 { None } else { Some(dir_of(c as usize - 1)) }).collect()
    }

    pub fn to_move(e: EdgeId, d: Dir) -> Move {
        Move::new(e, dir_of(d))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::generators::{generate, named, Family, NamedBoard};

    /// Random playouts comparing the counter engine with the reference rules.
    #[test]
    fn engine_agrees_with_reference_rules() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        let boards = [
            generate(&Family::Path(6)).unwrap(),
            generate(&Family::J2K(3, 4)).unwrap(),
            generate(&Family::Grid(3, 3)).unwrap(),
            named(NamedBoard::CounterexampleFig9).unwrap().board,
            named(NamedBoard::K4).unwrap().board,
        ];
        for board in boards {
            let board = Arc::new(board);
            for _ in 0..200 {
                let mut state = GameState::new(board.clone());
                let mut engine = Engine::new(&board);
                loop {
                    let reference = state.legal_moves();
                    let fast: Vec<Move> =
                        engine.legal_moves().into_iter().map(|(e, d)| Engine::to_move(e, d)).collect();
                    assert_eq!(reference, fast);
                    for e in 0..board.edge_count() {
                        assert_eq!(state.is_unmarkable(e).unwrap(), engine.is_unmarkable(e));
                    }
                    if reference.is_empty() {
                        break;
                    }
                    let mv = reference[rng.random_range(0..reference.len())];
                    assert_eq!(state.completes_cell(mv), engine.completes(mv.edge, dir_index(mv.dir)));
                    let won = state.completes_cell(mv);
                    state.play(mv).unwrap();
                    engine.play(mv.edge, dir_index(mv.dir));
                    assert_eq!(engine.marks_as_orientations(), state.marks());
                    if won {
                        assert!(engine.completed_cells() >= 1);
                        break;
                    }
                }
                // unwinding restores the empty position
                for mv in state.history().iter().rev() {
                    engine.undo(mv.edge);
                }
                assert_eq!(engine.key, 0);
                assert!(engine.marks.iter().all(|&c| c == 0));
            }
        }
    }
}
