//! Solver evidence for the conjecture that, on boards without degree-1
//! vertices, the winner is decided by the parity of the edge count.

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::game::{GameState, Player};
use crate::generators::{generate, Family, NamedBoard};
use crate::solver::{solve_empty, SolveOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub family: String,
    pub board: String,
    pub edges: usize,
    pub min_degree: usize,
    /// Minimum degree at least 2, so the conjecture speaks about it.
    pub in_population: bool,
    pub winner: Option<Player>,
    /// Winner is P1 exactly when the edge count is odd.
    pub agrees: Option<bool>,
    pub nodes: u64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub population: usize,
    pub disagreements: usize,
    pub errors: usize,
}

impl ScanReport {
    /// Rows inside the population whose winner breaks edge-count parity.
    pub fn counterexamples(&self) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().filter(|r| r.in_population && r.agrees == Some(false))
    }
}

/// Every generator family board with at most `max_edges` edges and no
/// degree-1 vertex, plus all named boards. Boards identical up to a
/// top-bottom flip are listed once.
pub fn conjecture_population(max_edges: usize) -> Vec<Family> {
    let mut out = Vec::new();
    for n in 3..=max_edges {
        out.push(Family::Polygon(n));
    }
    for j in 1..=max_edges {
        for k in j.max(2)..=max_edges {
            if j + k + 2 <= max_edges {
                out.push(Family::J2K(j, k));
            }
        }
    }
    for n in 1..=max_edges {
        for j in 1..=max_edges {
            for k in j..=max_edges {
                let ones = [j, n, k].iter().filter(|&&x| x == 1).count();
                if j + n + k <= max_edges && n != 2 && ones <= 1 {
                    out.push(Family::JNK(j, n, k));
                }
            }
        }
    }
    // four or more paths, in every order up to reversal (order fixes the cells)
    let mut stack: Vec<Vec<usize>> = (1..=max_edges).map(|l| vec![l]).collect();
    while let Some(lens) = stack.pop() {
        let total: usize = lens.iter().sum();
        let reversed: Vec<usize> = lens.iter().rev().copied().collect();
        if lens.len() >= 4 && lens <= reversed {
            out.push(Family::PPaths(lens.clone()));
        }
        for next in 1..=max_edges {
            let ones = lens.iter().filter(|&&x| x == 1).count() + usize::from(next == 1);
            if total + next <= max_edges && ones <= 1 {
                let mut grown = lens.clone();
                grown.push(next);
                stack.push(grown);
            }
        }
    }
    for a in 2..=max_edges {
        for b in a..=max_edges {
            if a * (b - 1) + b * (a - 1) <= max_edges {
                out.push(Family::Grid(a, b));
            }
        }
    }
    out.extend(NamedBoard::ALL.into_iter().map(Family::Named));
    out.retain(|f| f.check().is_ok());
    out
}

/// Solve each board from empty. Resource errors are recorded per row.
pub fn conjecture_scan(families: &[Family], opts: &SolveOptions) -> ScanReport {
    let rows: Vec<ScanRow> = families
        .par_iter()
        .map(|family| {
            let mut row = ScanRow {
                family: family.to_string(),
                board: String::new(),
                edges: 0,
                min_degree: 0,
                in_population: false,
                winner: None,
                agrees: None,
                nodes: 0,
                error: None,
            };
            let board = match generate(family) {
                Ok(b) => b,
                Err(err) => {
                    row.error = Some(err.to_string());
                    return row;
                }
            };
            row.board = board.name().to_string();
            row.edges = board.edge_count();
            row.min_degree = board.min_degree();
            row.in_population = row.min_degree >= 2;
            match solve_empty(&GameState::new(Arc::new(board)), opts) {
                Ok(res) => {
                    row.winner = Some(res.winner);
                    row.agrees = Some((res.winner == Player::P1) == (row.edges % 2 == 1));
                    row.nodes = res.stats.nodes;
                }
                Err(err) => row.error = Some(err.to_string()),
            }
            row
        })
        .collect();
    let population = rows.iter().filter(|r| r.in_population).count();
    let disagreements = rows.iter().filter(|r| r.in_population && r.agrees == Some(false)).count();
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    ScanReport { rows, population, disagreements, errors }
}

/// Text table; population counterexamples are flagged with `!!`.
pub fn format_scan(report: &ScanReport) -> String {
    let mut out = String::new();
    writeln!(out, "{:<28} {:>5} {:>6} {:>6} {:>6} {:>7}", "family", "edges", "mindeg", "parity", "winner", "agrees")
        .unwrap();
    for r in &report.rows {
        let winner = r.winner.map_or("-".to_string(), |w| w.to_string());
        let agrees = match (r.agrees, &r.error) {
            (_, Some(err)) => format!("error: {err}"),
            (Some(true), _) => "yes".into(),
            (Some(false), _) if r.in_population => "NO !!".into(),
            (Some(false), _) => "no (outside population)".into(),
            (None, _) => "-".into(),
        };
        let parity = if r.edges % 2 == 1 { "odd" } else { "even" };
        writeln!(out, "{:<28} {:>5} {:>6} {:>6} {:>6} {:>7}", r.family, r.edges, r.min_degree, parity, winner, agrees)
            .unwrap();
    }
    writeln!(
        out,
        "population {} boards, {} disagreements, {} errors",
        report.population, report.disagreements, report.errors
    )
    .unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn population_bounds() {
        let pop = conjecture_population(8);
        assert!(pop.contains(&Family::Polygon(8)));
        assert!(pop.contains(&Family::J2K(1, 5)));
        assert!(!pop.contains(&Family::J2K(1, 6)));
        assert!(pop.contains(&Family::Grid(2, 2)));
        assert!(pop.contains(&Family::PPaths(vec![2, 2, 2, 2])));
        assert!(pop.iter().all(|f| !matches!(f, Family::Path(_))));
    }

    #[test]
    fn degree_one_board_is_reported_outside_population() {
        let report = conjecture_scan(
            &[Family::Named(NamedBoard::CounterexampleFig9), Family::Polygon(6)],
            &SolveOptions::default(),
        );
        let fig9 = &report.rows[0];
        assert_eq!(
            (fig9.edges, fig9.winner, fig9.agrees, fig9.in_population),
            (4, Some(Player::P1), Some(false), false)
        );
        let hexagon = &report.rows[1];
        assert_eq!((hexagon.winner, hexagon.agrees), (Some(Player::P2), Some(true)));
        assert_eq!((report.population, report.disagreements), (1, 0));
        assert!(format_scan(&report).contains("outside population"));
    }
}
