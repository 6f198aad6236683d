mod common;

use std::sync::Arc;

use common::{naive_winner, parse, playout};
use gocycles_core::solver::{decode_key, solve_with, state_key, SolveOptions};
use gocycles_core::{Board, GameState};
use proptest::prelude::*;

fn winner(board: &Arc<Board>, opts: &SolveOptions) -> gocycles_core::Player {
    solve_with(&GameState::new(board.clone()), opts).unwrap().winner
}

fn small_boards(max_edges: usize) -> Vec<Arc<Board>> {
    let mut names: Vec<String> = Vec::new();
    names.extend((1..=14).map(|n| format!("path:{n}")));
    names.extend((3..=14).map(|n| format!("polygon:{n}")));
    for j in 1..=10 {
        for k in 2..=10 {
            names.push(format!("j2k:{j},{k}"));
        }
    }
    names.extend(["grid:2,2", "grid:2,3", "grid:2,4", "grid:3,3"].map(String::from));
    names.extend(
        ["ppaths:2,2,2", "ppaths:3,2,1", "ppaths:4,4,2", "ppaths:4,3,3,1", "jnk:2,1,3", "jnk:3,3,3"].map(String::from),
    );
    names.extend(
        ["k4", "sample_fig3", "counterexample_fig9", "prism_left_fig10", "prism_right_fig10", "case_a_fails_fig"]
            .map(|n| format!("named:{n}")),
    );
    names
        .iter()
        .filter_map(|n| n.parse().ok())
        .filter_map(|f| gocycles_core::generate(&f).ok())
        .filter(|b| b.edge_count() <= max_edges)
        .map(Arc::new)
        .collect()
}

#[test]
fn table_and_plain_search_agree_up_to_nine_edges() {
    let with = SolveOptions::default();
    let without = SolveOptions { memo: false, symmetry: false, ..SolveOptions::default() };
    for board in small_boards(9) {
        let expected = naive_winner(&board);
        assert_eq!(winner(&board, &with), expected, "{}", board.name());
        assert_eq!(winner(&board, &without), expected, "{}", board.name());
    }
}

#[test]
fn symmetry_reduction_keeps_the_winner_up_to_twelve_edges() {
    let reduced = SolveOptions::default();
    let plain = SolveOptions { symmetry: false, ..SolveOptions::default() };
    for board in small_boards(12) {
        assert_eq!(winner(&board, &reduced), winner(&board, &plain), "{}", board.name());
    }
}

#[test]
fn midgame_values_match_the_naive_oracle() {
    let board = parse("j2k:3,4");
    for seed in 0..40usize {
        let picks: Vec<usize> = (0..4).map(|i| seed * 7 + i * 13).collect();
        let s = playout(&board, &picks).pop().unwrap();
        if s.status().is_over() {
            continue;
        }
        let mut marks = s.marks().to_vec();
        let naive = common::naive_mover_wins(&board, &mut marks);
        let res = solve_with(&s, &SolveOptions::default()).unwrap();
        assert_eq!(res.winner == s.to_move(), naive, "{:?}", s.history());
    }
}

#[test]
fn prism_pair_is_solved_independently() {
    for name in ["named:prism_left_fig10", "named:prism_right_fig10"] {
        let board = parse(name);
        assert_eq!(winner(&board, &SolveOptions::default()), naive_winner(&board), "{name}");
    }
}

proptest! {
    #[test]
    fn keys_round_trip(picks in prop::collection::vec(any::<usize>(), 0..14)) {
        let board = parse("j2k:4,5");
        for s in playout(&board, &picks) {
            let key = state_key(s.marks());
            prop_assert_eq!(decode_key(key, board.edge_count()), s.marks().to_vec());
        }
    }
}
