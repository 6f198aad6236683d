//! Oracles written straight from the rules, sharing nothing with the engine
//! beyond the board and the move list.
#![allow(dead_code)]

use std::sync::Arc;

use gocycles_core::{generate, Board, Family, GameState, Move, Orientation, Player};

pub fn board(family: Family) -> Arc<Board> {
    Arc::new(generate(&family).unwrap())
}

pub fn parse(family: &str) -> Arc<Board> {
    board(family.parse().unwrap())
}

/// `orient` on `edge` would leave a non-exempt end with every incident
/// edge marked and all pointing in, or all pointing out.
pub fn breaks_rule(board: &Board, marks: &[Option<Orientation>], edge: usize, orient: Orientation) -> bool {
    let (tail, head) = orient.ends(&board.edge(edge));
    [tail, head].into_iter().any(|v| {
        if board.is_exempt(v) {
            return false;
        }
        let mut ins = 0;
        let mut outs = 0;
        for &e in board.incident(v) {
            let o = if e == edge { Some(orient) } else { marks[e] };
            match o {
                None => return false,
                Some(o) if o.ends(&board.edge(e)).1 == v => ins += 1,
                Some(_) => outs += 1,
            }
        }
        ins == 0 || outs == 0
    })
}

pub fn brute_unmarkable(board: &Board, marks: &[Option<Orientation>]) -> usize {
    (0..board.edge_count())
        .filter(|&e| marks[e].is_none() && Orientation::BOTH.iter().all(|&o| breaks_rule(board, marks, e, o)))
        .count()
}

/// A cell whose edges all run one way round its declared cycle.
pub fn brute_completed_cells(board: &Board, marks: &[Option<Orientation>]) -> usize {
    board
        .cells()
        .iter()
        .filter(|cell| {
            let n = cell.len();
            let along = |forward: bool| {
                (0..n).all(|i| {
                    let (a, b) = if forward { (cell[i], cell[(i + 1) % n]) } else { (cell[(i + 1) % n], cell[i]) };
                    let e = board.edge_between(a, b).unwrap();
                    marks[e].is_some_and(|o| o.ends(&board.edge(e)) == (a, b))
                })
            };
            along(true) || along(false)
        })
        .count()
}

fn legal_pairs(board: &Board, marks: &[Option<Orientation>]) -> Vec<(usize, Orientation)> {
    (0..board.edge_count())
        .filter(|&e| marks[e].is_none())
        .flat_map(|e| Orientation::BOTH.map(|o| (e, o)))
        .filter(|&(e, o)| !breaks_rule(board, marks, e, o))
        .collect()
}

/// Does the player to move win? Plain recursion, no table, no symmetry.
pub fn naive_mover_wins(board: &Board, marks: &mut Vec<Option<Orientation>>) -> bool {
    for (e, o) in legal_pairs(board, marks) {
        marks[e] = Some(o);
        let won = brute_completed_cells(board, marks) > 0
            || legal_pairs(board, marks).is_empty()
            || !naive_mover_wins(board, marks);
        marks[e] = None;
        if won {
            return true;
        }
    }
    false
}

pub fn naive_winner(board: &Board) -> Player {
    let mut marks = vec![None; board.edge_count()];
    if naive_mover_wins(board, &mut marks) {
        Player::P1
    } else {
        Player::P2
    }
}

/// A playout choosing moves by `picks` (taken modulo the legal count) until
/// the game ends or the picks run out; every state on the way is returned.
pub fn playout(board: &Arc<Board>, picks: &[usize]) -> Vec<GameState> {
    let mut s = GameState::new(board.clone());
    let mut out = vec![s.clone()];
    for &p in picks {
        if s.status().is_over() {
            break;
        }
        let moves = s.legal_moves();
        s.play(moves[p % moves.len()]).unwrap();
        out.push(s.clone());
    }
    out
}

pub fn moves_of(board: &Board, arrows: &[(usize, usize)]) -> Vec<Move> {
    arrows.iter().map(|&(a, b)| Move::between(board, a, b).unwrap()).collect()
}
