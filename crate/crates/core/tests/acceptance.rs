//! Acceptance criteria 1-12, each at its time budget. One PASS/FAIL line per
//! criterion; the process exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{brute_completed_cells, brute_unmarkable, naive_winner, parse};
use gocycles_core::analysis::{
    classify_case, conjecture_population, conjecture_scan, instantiate_case, path_parity_check, CaseName, Transform,
    CASES,
};
use gocycles_core::solver::{enumerate_terminals, solve, SearchLimits, SolveOptions, TerminalMode};
use gocycles_core::strategies::verify_named;
use gocycles_core::structure::{recover_path, J2kLayout, PPathsLayout};
use gocycles_core::{generate, named, validate_board, Board, Family, GameState, Move, NamedBoard, Player};

type Outcome = Result<String, String>;

fn winner(board: &Arc<Board>) -> Player {
    solve(&GameState::new(board.clone()), &SearchLimits::default()).unwrap().winner
}

fn parity_winner(edges: usize) -> Player {
    if edges % 2 == 1 {
        Player::P1
    } else {
        Player::P2
    }
}

fn expect(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn c1_path_winners() -> Outcome {
    for n in 1..=14 {
        let board = parse(&format!("path:{n}"));
        let w = winner(&board);
        expect(w == parity_winner(n), || format!("path:{n} won by {w}"))?;
        if n <= 9 {
            expect(naive_winner(&board) == w, || format!("path:{n}: naive oracle disagrees"))?;
        }
    }
    Ok("path:1..14 follow edge parity; n <= 9 confirmed by the naive oracle".into())
}

fn c2_polygon_winners() -> Outcome {
    for n in 3..=10 {
        let board = parse(&format!("polygon:{n}"));
        let w = winner(&board);
        expect(w == parity_winner(n), || format!("polygon:{n} won by {w}"))?;
        if n <= 9 {
            expect(naive_winner(&board) == w, || format!("polygon:{n}: naive oracle disagrees"))?;
        }
    }
    Ok("polygon:3..10 follow edge parity".into())
}

fn c3_polygon_terminal_parity() -> Outcome {
    let mut total = 0;
    for n in 3..=8 {
        let board = parse(&format!("polygon:{n}"));
        let mut bad = None;
        let census = enumerate_terminals(
            &GameState::new(board.clone()),
            &SearchLimits::default(),
            TerminalMode::GameRules,
            |t| {
                let count = brute_unmarkable(&board, &t.marks);
                if count % 2 == 1 || count != t.unmarkable.len() {
                    bad.get_or_insert(t.marks.clone());
                }
            },
        )
        .map_err(|e| e.to_string())?;
        if let Some(marks) = bad {
            return Err(format!("polygon:{n}: odd or miscounted terminal {marks:?}"));
        }
        total += census.terminals;
    }
    Ok(format!("{total} terminals over polygon:3..8, all even"))
}

fn c4_lemma_oracle() -> Outcome {
    let mut total = 0;
    for n in 2..=10 {
        let board = parse(&format!("path:{n}"));
        let path = recover_path(&board).unwrap();
        let mut exceptions = 0;
        let census = enumerate_terminals(
            &GameState::new(board.clone()),
            &SearchLimits::default(),
            TerminalMode::GameRules,
            |t| {
                let (a, b) = (t.marks[path.edges[0]], t.marks[path.edges[n - 1]]);
                let same = match (a, b) {
                    (Some(a), Some(b)) => path.is_forward(&board, 0, a) == path.is_forward(&board, n - 1, b),
                    _ => {
                        exceptions += 1;
                        return;
                    }
                };
                let count = brute_unmarkable(&board, &t.marks);
                let s = GameState::from_marks(board.clone(), &t.marks).unwrap();
                let check = path_parity_check(&s, &path).unwrap();
                if count.is_multiple_of(2) != same || !check.verified || check.unmarkable != count {
                    exceptions += 1;
                }
            },
        )
        .map_err(|e| e.to_string())?;
        expect(exceptions == 0, || format!("path:{n}: {exceptions} exceptions"))?;
        total += census.terminals;
    }
    Ok(format!("{total} terminals over path:2..10, zero exceptions"))
}

fn c5_j2k_corollary() -> Outcome {
    let mut count = 0;
    for j in 1..=10 {
        for k in 2..=12 - j {
            let family = Family::J2K(j, k);
            if family.check().is_err() {
                continue;
            }
            let board = Arc::new(generate(&family).unwrap());
            let w = winner(&board);
            expect(w == parity_winner(j + k), || format!("{family} won by {w}"))?;
            count += 1;
        }
    }
    let heptagon_pentagon = winner(&parse("j2k:3,5"));
    expect(heptagon_pentagon == Player::P2, || format!("j2k:3,5 won by {heptagon_pentagon}"))?;
    Ok(format!("{count} boards with j+k <= 12 follow the parity of j+k; j2k:3,5 -> P2"))
}

fn c6_named_boards() -> Outcome {
    for (name, expected) in [(NamedBoard::K4, Player::P2), (NamedBoard::SampleFig3, Player::P2)] {
        let board = Arc::new(named(name).unwrap().board);
        let w = winner(&board);
        expect(w == expected, || format!("{} won by {w}", name.as_str()))?;
        expect(naive_winner(&board) == w, || format!("{}: naive oracle disagrees", name.as_str()))?;
    }
    let fig9 = Arc::new(named(NamedBoard::CounterexampleFig9).unwrap().board);
    let res = solve(&GameState::new(fig9.clone()), &SearchLimits::default()).unwrap();
    let c_to_d = Move::between(&fig9, 2, 3).unwrap();
    expect(res.winner == Player::P1, || format!("counterexample_fig9 won by {}", res.winner))?;
    expect(res.winning_moves.contains(&c_to_d), || "c→d is not a winning first move".into())?;
    let trap = named(NamedBoard::CaseAFailsFig).unwrap();
    let s = GameState::from_moves(Arc::new(trap.board), &trap.preset).unwrap();
    let res = solve(&s, &SearchLimits::default()).unwrap();
    expect(res.winner != s.to_move(), || "case-a-fails preset is won for the mover".into())?;
    Ok(format!("k4 P2, sample_fig3 P2, counterexample_fig9 P1 via c→d, case-a-fails preset lost for {}", s.to_move()))
}

fn c7_grids() -> Outcome {
    for (a, b, expected) in [(2, 3, Player::P1), (2, 5, Player::P1), (2, 2, Player::P2), (3, 3, Player::P2)] {
        let w = winner(&parse(&format!("grid:{a},{b}")));
        expect(w == expected, || format!("grid:{a},{b} won by {w}"))?;
    }
    let started = Instant::now();
    let slow = winner(&parse("grid:3,4"));
    Ok(format!(
        "grid:2,3 P1, grid:2,5 P1, grid:2,2 P2, grid:3,3 P2; slow tier grid:3,4 {slow} in {:.1}s",
        started.elapsed().as_secs_f64()
    ))
}

fn c8_strategies() -> Result<String, String> {
    let items = [
        ("rotate-reverse", "grid:2,3", Player::P1),
        ("rotate-reverse", "grid:2,5", Player::P1),
        ("pairing-32k", "j2k:3,4", Player::P1),
        ("pairing-32k", "j2k:3,5", Player::P2),
        ("j2k", "j2k:4,4", Player::P2),
        ("j2k", "j2k:4,5", Player::P1),
        ("12k", "j2k:1,4", Player::P1),
        ("12k", "j2k:1,5", Player::P2),
        ("mirror-reverse", "ppaths:4,4,2", Player::P2),
        ("mirror-reverse", "ppaths:5,4,4", Player::P1),
    ];
    let mut slowest = Duration::ZERO;
    for (policy, family, player) in items {
        let started = Instant::now();
        let r = verify_named(policy, &parse(family), player, &SearchLimits::default()).map_err(|e| e.to_string())?;
        let took = started.elapsed();
        expect(r.verified, || format!("{policy} on {family} as {player}: {:?} {:?}", r.reason, r.counterexample))?;
        expect(took < Duration::from_secs(600), || format!("{policy} on {family} took {took:?}"))?;
        slowest = slowest.max(took);
    }
    Ok(format!("{} policy/board pairs verified, slowest {:.2}s", items.len(), slowest.as_secs_f64()))
}

fn c9_negative_fixtures() -> Outcome {
    let board = parse("ppaths:4,4,1");
    let r = verify_named("mirror-reverse-naive", &board, Player::P2, &SearchLimits::default())
        .map_err(|e| e.to_string())?;
    expect(!r.verified, || "naive mirror-reverse verified on ppaths:4,4,1".into())?;
    let end = GameState::from_moves(board.clone(), &r.counterexample).map_err(|e| e.to_string())?;
    let layout = PPathsLayout::recover(&board).unwrap();
    let direct = layout.paths.iter().find(|p| p.len() == 1).unwrap().edges[0];
    let cells = end.completed_cells();
    let closes_short = cells.iter().any(|&c| board.cell_edges(c).iter().any(|&(e, _)| e == direct));
    expect(end.last_mover() == Some(Player::P1) && closes_short, || {
        format!("counterexample does not end with the opponent closing the 1-edge path's cell: {:?}", r.reason)
    })?;
    let trap = named(NamedBoard::CaseAFailsFig).unwrap();
    let s = GameState::from_moves(Arc::new(trap.board), &trap.preset).unwrap();
    let label = classify_case(&s).map_err(|e| e.to_string())?;
    expect(label.case == Some(CaseName::A), || format!("case-a-fails preset classified as {label:?}"))?;
    let lost = solve(&s, &SearchLimits::default()).unwrap().winner != s.to_move();
    expect(lost, || "case-a-fails preset is not lost for the mover".into())?;
    Ok(format!(
        "naive mirror loses in {} moves ({}); case-a-fails is case A and lost for the mover",
        r.counterexample.len(),
        r.reason.unwrap_or_default()
    ))
}

fn c10_case_calculus() -> Outcome {
    let mut terminals = 0;
    for family in [Family::J2K(4, 4), Family::J2K(4, 5)] {
        let board = Arc::new(generate(&family).unwrap());
        let layout = J2kLayout::recover(&board).unwrap();
        let empty = GameState::new(board.clone());
        for case in CASES {
            for t in Transform::ALL {
                let moves = instantiate_case(&layout, &empty, case, t);
                let start =
                    GameState::from_moves(board.clone(), &moves).map_err(|e| format!("{family} {case} {t:?}: {e}"))?;
                let mut failure = None;
                let census = enumerate_terminals(&start, &SearchLimits::default(), TerminalMode::Exhaustive, |info| {
                    let odd = brute_unmarkable(&board, &info.marks) % 2 == 1;
                    let double = brute_completed_cells(&board, &info.marks) > 1 || info.completed_cells > 1;
                    if odd || (case != CaseName::A && double) {
                        failure.get_or_insert(format!(
                            "{family} {case} {t:?}: odd={odd} double={double} {:?}",
                            info.marks
                        ));
                    }
                })
                .map_err(|e| e.to_string())?;
                if let Some(f) = failure {
                    return Err(f);
                }
                terminals += census.terminals;
            }
        }
    }
    Ok(format!("{terminals} terminals from 40 template positions: all even, B-E never close both cells"))
}

fn c11_conjecture_scan() -> Outcome {
    let report = conjecture_scan(&conjecture_population(12), &SolveOptions::default());
    expect(report.errors == 0, || format!("{} rows failed to solve", report.errors))?;
    let against: Vec<_> = report.rows.iter().filter(|r| r.in_population && r.agrees == Some(false)).collect();
    if against.is_empty() {
        return Ok(format!("{} boards, zero disagreements", report.population));
    }
    // each disagreement is re-solved by the naive oracle before it is reported
    let mut lines = Vec::new();
    for row in &against {
        let board = parse(&row.family);
        let naive = naive_winner(&board);
        let confirmed = Some(naive) == row.winner;
        lines.push(format!(
            "{} ({} edges) won by {}, naive oracle {}",
            row.family,
            row.edges,
            naive,
            if confirmed { "agrees" } else { "DISAGREES" }
        ));
    }
    Err(format!("{} of {} boards go against edge parity: {}", against.len(), report.population, lines.join("; ")))
}

/// An explicit vertex bijection carrying one edge set onto the other.
fn isomorphism(a: &Board, b: &Board) -> Option<Vec<usize>> {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    fn extend(a: &Board, b: &Board, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let x = map.len();
        if x == a.vertex_count() {
            return true;
        }
        for y in 0..b.vertex_count() {
            if used[y] || a.degree(x) != b.degree(y) {
                continue;
            }
            let fits = (0..x).all(|w| a.edge_between(w, x).is_some() == b.edge_between(map[w], y).is_some());
            if fits {
                map.push(y);
                used[y] = true;
                if extend(a, b, map, used) {
                    return true;
                }
                used[y] = false;
                map.pop();
            }
        }
        false
    }
    let mut map = Vec::new();
    let mut used = vec![false; n];
    extend(a, b, &mut map, &mut used).then_some(map)
}

fn c12_prism_pair() -> Outcome {
    let left = named(NamedBoard::PrismLeftFig10).unwrap().board;
    let right = named(NamedBoard::PrismRightFig10).unwrap().board;
    for b in [&left, &right] {
        let report = validate_board(b.def());
        expect(report.is_valid(), || format!("{} fails validation: {report:?}", b.name()))?;
    }
    let map = isomorphism(&left, &right).ok_or("prism boards are not isomorphic")?;
    let edges_map = left.edges().iter().all(|e| right.edge_between(map[e.u], map[e.v]).is_some());
    expect(edges_map, || "isomorphism check failed".into())?;
    let (mut l, mut r) = (left.cell_sizes(), right.cell_sizes());
    l.sort_unstable();
    r.sort_unstable();
    expect(l == [3, 3, 4, 4] && r == [3, 4, 4, 4], || format!("cell sizes {l:?} vs {r:?}"))?;
    Ok(format!("isomorphic via {map:?}; cell sizes {l:?} vs {r:?}"))
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        (1, "path winners", 60, c1_path_winners),
        (2, "polygon winners", 60, c2_polygon_winners),
        (3, "polygon terminal parity", 120, c3_polygon_terminal_parity),
        (4, "path end-direction parity oracle", 120, c4_lemma_oracle),
        (5, "j-2-k winners by parity of j+k", 600, c5_j2k_corollary),
        (6, "named boards", 30, c6_named_boards),
        (7, "grid winners", 900, c7_grids),
        (8, "strategy verification", 6000, c8_strategies),
        (9, "negative fixtures", 600, c9_negative_fixtures),
        (10, "case calculus", 600, c10_case_calculus),
        (11, "conjecture scan", 3600, c11_conjecture_scan),
        (12, "prism pair", 60, c12_prism_pair),
    ];
    let mut failed = 0;
    for (n, title, budget, run) in criteria {
        let started = Instant::now();
        let outcome = run();
        let took = started.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(budget) => Err(format!("over budget ({budget}s): {detail}")),
            other => other,
        };
        let (verdict, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {n:>2} {verdict} [{:.2}s] {title}: {detail}", took.as_secs_f64());
    }
    println!("acceptance: {} of 12 criteria pass", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
