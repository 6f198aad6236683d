//! Board families and the hand-encoded boards from the literature.
//!
//! Conventions shared by the generated families:
//! - edges are stored left-to-right along their path, so `TowardV` is the
//!   rightward arrow;
//! - paths between two hubs are laid out horizontally, upper path first;
//! - edge ids run path by path, each path from its left end.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::board::{Board, BoardDef, EdgeDef, EdgeId, VertexDef, VertexId, MIRROR, ROTATION180};
use crate::game::Move;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    /// Path of `n` edges with both ends exempt from the sink/source rule.
    Path(usize),
    Polygon(usize),
    /// Two hubs joined by paths of `j`, 2 and `k` edges.
    J2K(usize, usize),
    /// Two hubs joined by paths of `j`, `n` and `k` edges.
    JNK(usize, usize, usize),
    /// Internally disjoint paths between `u` and `v`, drawn top to bottom.
    PPaths(Vec<usize>),
    /// `a` rows by `b` columns of vertices.
    Grid(usize, usize),
    Named(NamedBoard),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedBoard {
    SampleFig3,
    K4,
    CounterexampleFig9,
    PrismLeftFig10,
    PrismRightFig10,
    CaseAFailsFig,
}

impl NamedBoard {
    pub const ALL: [NamedBoard; 6] = [
        NamedBoard::SampleFig3,
        NamedBoard::K4,
        NamedBoard::CounterexampleFig9,
        NamedBoard::PrismLeftFig10,
        NamedBoard::PrismRightFig10,
        NamedBoard::CaseAFailsFig,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NamedBoard::SampleFig3 => "sample_fig3",
            NamedBoard::K4 => "k4",
            NamedBoard::CounterexampleFig9 => "counterexample_fig9",
            NamedBoard::PrismLeftFig10 => "prism_left_fig10",
            NamedBoard::PrismRightFig10 => "prism_right_fig10",
            NamedBoard::CaseAFailsFig => "case_a_fails_fig",
        }
    }
}

impl FromStr for NamedBoard {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NamedBoard::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| GenError::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: String, reason: String },
    #[error("unknown board name: {0}")]
    UnknownName(String),
    #[error("cannot parse family {0:?}; expected e.g. path:7, polygon:6, j2k:3,5, jnk:3,3,4, ppaths:4,4,2, grid:2,3, named:k4")]
    Parse(String),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path(n) => write!(f, "path:{n}"),
            Family::Polygon(n) => write!(f, "polygon:{n}"),
            Family::J2K(j, k) => write!(f, "j2k:{j},{k}"),
            Family::JNK(j, n, k) => write!(f, "jnk:{j},{n},{k}"),
            Family::PPaths(lengths) => {
                let parts: Vec<String> = lengths.iter().map(usize::to_string).collect();
                write!(f, "ppaths:{}", parts.join(","))
            }
            Family::Grid(a, b) => write!(f, "grid:{a},{b}"),
            Family::Named(name) => write!(f, "named:{}", name.as_str()),
        }
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = || GenError::Parse(s.to_string());
        let (kind, args) = s.split_once(':').ok_or_else(parse_err)?;
        if kind == "named" {
            return Ok(Family::Named(args.parse()?));
        }
        let nums: Vec<usize> =
            args.split(',').map(|x| x.trim().parse::<usize>()).collect::<Result<_, _>>().map_err(|_| parse_err())?;
        let family = match (kind, nums.as_slice()) {
            ("path", &[n]) => Family::Path(n),
            ("polygon", &[n]) => Family::Polygon(n),
            ("j2k", &[j, k]) => Family::J2K(j, k),
            ("jnk", &[j, n, k]) => Family::JNK(j, n, k),
            ("ppaths", lengths) if !lengths.is_empty() => Family::PPaths(lengths.to_vec()),
            ("grid", &[a, b]) => Family::Grid(a, b),
            _ => return Err(parse_err()),
        };
        Ok(family)
    }
}

impl Family {
    /// Check the family's parameter invariants.
    pub fn check(&self) -> Result<(), GenError> {
        let bad = |reason: &str| Err(GenError::InvalidParams { family: self.to_string(), reason: reason.to_string() });
        match self {
            Family::Path(n) if *n < 1 => bad("a path needs at least 1 edge"),
            Family::Polygon(n) if *n < 3 => bad("a polygon needs at least 3 edges"),
            Family::J2K(j, k) if *j < 1 || *k < 2 => bad("need j >= 1 and k >= 2"),
            Family::JNK(j, n, k) => {
                let ones = [j, n, k].iter().filter(|&&&x| x == 1).count();
                if [j, n, k].iter().any(|&&x| x == 0) {
                    bad("path lengths must be positive")
                } else if ones > 1 {
                    bad("at most one of j, n, k may be 1")
                } else {
                    Ok(())
                }
            }
            Family::PPaths(lengths) => {
                if lengths.len() < 2 {
                    bad("need at least 2 paths")
                } else if lengths.contains(&0) {
                    bad("path lengths must be positive")
                } else if lengths.iter().filter(|&&l| l == 1).count() > 1 {
                    bad("at most one path may have length 1")
                } else {
                    Ok(())
                }
            }
            Family::Grid(a, b) if *a < 2 || *b < 2 => bad("grid needs at least 2x2 vertices"),
            _ => Ok(()),
        }
    }
}

/// Build the board for a family.
pub fn generate(family: &Family) -> Result<Board, GenError> {
    family.check()?;
    let def = match family {
        Family::Path(n) => path_def(*n),
        Family::Polygon(n) => polygon_def(*n),
        Family::J2K(j, k) => hub_paths_def(&family.to_string(), &[*j, 2, *k], false),
        Family::JNK(j, n, k) => hub_paths_def(&family.to_string(), &[*j, *n, *k], false),
        Family::PPaths(lengths) => hub_paths_def(&family.to_string(), lengths, true),
        Family::Grid(a, b) => grid_def(*a, *b),
        Family::Named(name) => return Ok(named(*name)?.board),
    };
    Ok(Board::new(def).expect("generated boards are valid"))
}

fn vertex(id: VertexId, x: f64, y: f64) -> VertexDef {
    VertexDef { id, x, y }
}

fn edges_from(pairs: &[(VertexId, VertexId)]) -> Vec<EdgeDef> {
    pairs.iter().enumerate().map(|(id, &(u, v))| EdgeDef { id, u, v }).collect()
}

fn path_def(n: usize) -> BoardDef {
    let mirror = (0..=n).map(|i| (i, n - i)).collect();
    BoardDef {
        name: Family::Path(n).to_string(),
        vertices: (0..=n).map(|i| vertex(i, i as f64, 0.0)).collect(),
        edges: edges_from(&(0..n).map(|i| (i, i + 1)).collect::<Vec<_>>()),
        cells: Vec::new(),
        exempt: vec![0, n],
        symmetry: [(MIRROR.to_string(), mirror)].into_iter().collect(),
    }
}

fn polygon_def(n: usize) -> BoardDef {
    let vertices = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            vertex(i, round4(t.cos()), round4(t.sin()))
        })
        .collect();
    BoardDef {
        name: Family::Polygon(n).to_string(),
        vertices,
        edges: edges_from(&(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()),
        cells: vec![(0..n).collect()],
        exempt: Vec::new(),
        symmetry: BTreeMap::new(),
    }
}

fn round4(x: f64) -> f64 {
    let r = (x * 1e4).round() / 1e4;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Paths between a left hub `u` and a right hub `v`, listed top to bottom.
/// Cells are the regions between consecutive paths.
fn hub_paths_def(name: &str, lengths: &[usize], with_mirror: bool) -> BoardDef {
    let width = *lengths.iter().max().unwrap() as f64;
    let p = lengths.len();
    // a direct edge is drawn straight between the hubs at y = 0; stack the
    // other paths above and below it in listed order so the faces stay as declared
    let direct = lengths.iter().position(|&l| l == 1);
    let heights: Vec<f64> = (0..p)
        .map(|i| match direct {
            Some(d) => d as f64 - i as f64,
            None => (p as f64 - 1.0) / 2.0 - i as f64,
        })
        .collect();
    let (u, v) = (0, 1);
    let mut vertices = vec![vertex(u, 0.0, 0.0), vertex(v, width, 0.0)];
    let mut pairs = Vec::new();
    let mut paths: Vec<Vec<VertexId>> = Vec::new();
    let mut mirror: BTreeMap<VertexId, VertexId> = [(u, v), (v, u)].into_iter().collect();
    for (i, &len) in lengths.iter().enumerate() {
        let first = vertices.len();
        let mut walk = vec![u];
        for t in 1..len {
            let id = vertices.len();
            vertices.push(vertex(id, round4(width * t as f64 / len as f64), heights[i]));
            walk.push(id);
        }
        walk.push(v);
        for t in 1..len {
            mirror.insert(first + t - 1, first + len - t - 1);
        }
        pairs.extend(walk.windows(2).map(|w| (w[0], w[1])));
        paths.push(walk);
    }
    let cells = paths
        .windows(2)
        .map(|w| {
            let mut cell = w[0].clone();
            cell.extend(w[1].iter().rev().skip(1).take(w[1].len() - 2));
            cell
        })
        .collect();
    let symmetry = if with_mirror { [(MIRROR.to_string(), mirror)].into_iter().collect() } else { BTreeMap::new() };
    BoardDef { name: name.to_string(), vertices, edges: edges_from(&pairs), cells, exempt: Vec::new(), symmetry }
}

fn grid_def(a: usize, b: usize) -> BoardDef {
    let id = |i: usize, j: usize| j * b + i;
    let mut vertices = Vec::new();
    for j in 0..a {
        for i in 0..b {
            vertices.push(vertex(id(i, j), i as f64, j as f64));
        }
    }
    let mut pairs = Vec::new();
    for j in 0..a {
        for i in 0..b - 1 {
            pairs.push((id(i, j), id(i + 1, j)));
        }
    }
    for j in 0..a - 1 {
        for i in 0..b {
            pairs.push((id(i, j), id(i, j + 1)));
        }
    }
    let mut cells = Vec::new();
    for j in 0..a - 1 {
        for i in 0..b - 1 {
            cells.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    let rotation = (0..a).flat_map(|j| (0..b).map(move |i| (id(i, j), id(b - 1 - i, a - 1 - j)))).collect();
    BoardDef {
        name: Family::Grid(a, b).to_string(),
        vertices,
        edges: edges_from(&pairs),
        cells,
        exempt: Vec::new(),
        symmetry: [(ROTATION180.to_string(), rotation)].into_iter().collect(),
    }
}

/// A named board, with the preset move list for boards that are a
/// position rather than an empty board.
#[derive(Debug, Clone)]
pub struct NamedOutput {
    pub board: Board,
    pub preset: Vec<Move>,
}

pub fn named(name: NamedBoard) -> Result<NamedOutput, GenError> {
    let plain =
        |def: BoardDef| NamedOutput { board: Board::new(def).expect("named boards are valid"), preset: Vec::new() };
    let out = match name {
        // labels a..e are ids 0..4; j-2-k structure with j = k = 2
        NamedBoard::SampleFig3 => plain(BoardDef {
            name: name.as_str().into(),
            vertices: vec![
                vertex(0, 0.0, 1.0),
                vertex(1, -1.0, 0.0),
                vertex(2, 0.0, 0.0),
                vertex(3, 1.0, 0.0),
                vertex(4, 0.0, -1.0),
            ],
            edges: edges_from(&[(1, 0), (0, 3), (1, 2), (2, 3), (1, 4), (4, 3)]),
            cells: vec![vec![1, 0, 3, 2], vec![1, 2, 3, 4]],
            exempt: Vec::new(),
            symmetry: BTreeMap::new(),
        }),
        // center vertex 0 inside the outer triangle 1, 2, 3
        NamedBoard::K4 => plain(BoardDef {
            name: name.as_str().into(),
            vertices: vec![
                vertex(0, 0.0, 0.0),
                vertex(1, 0.0, 1.0),
                vertex(2, -FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
                vertex(3, FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
            ],
            edges: edges_from(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            cells: vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1]],
            exempt: Vec::new(),
            symmetry: BTreeMap::new(),
        }),
        // a..d are ids 0..3: triangle b, c, d with pendant edge ab
        NamedBoard::CounterexampleFig9 => plain(BoardDef {
            name: name.as_str().into(),
            vertices: vec![vertex(0, 0.0, 1.0), vertex(1, 0.0, 0.0), vertex(2, -1.0, -1.0), vertex(3, 1.0, -1.0)],
            edges: edges_from(&[(0, 1), (1, 2), (1, 3), (2, 3)]),
            cells: vec![vec![1, 2, 3]],
            exempt: Vec::new(),
            symmetry: BTreeMap::new(),
        }),
        NamedBoard::PrismLeftFig10 => plain(BoardDef {
            name: name.as_str().into(),
            vertices: vec![
                vertex(0, -0.5, 1.9365),
                vertex(1, 0.0, 0.0),
                vertex(2, -0.5, -1.9365),
                vertex(3, 2.5, 1.9365),
                vertex(4, 2.0, 0.0),
                vertex(5, 2.5, -1.9365),
            ],
            edges: edges_from(&[(1, 4), (1, 0), (1, 2), (4, 3), (4, 5), (0, 3), (2, 5), (0, 2), (3, 5)]),
            cells: vec![vec![0, 1, 2], vec![3, 4, 5], vec![0, 3, 4, 1], vec![1, 4, 5, 2]],
            exempt: Vec::new(),
            symmetry: BTreeMap::new(),
        }),
        NamedBoard::PrismRightFig10 => plain(BoardDef {
            name: name.as_str().into(),
            vertices: vec![
                vertex(0, 0.0, 2.25),
                vertex(1, 1.9486, -1.125),
                vertex(2, -1.9486, -1.125),
                vertex(3, 0.0, 1.0),
                vertex(4, 0.866, -0.5),
                vertex(5, -0.866, -0.5),
            ],
            edges: edges_from(&[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (2, 5), (1, 4)]),
            cells: vec![vec![3, 4, 5], vec![0, 1, 4, 3], vec![1, 2, 5, 4], vec![2, 0, 3, 5]],
            exempt: Vec::new(),
            symmetry: BTreeMap::new(),
        }),
        NamedBoard::CaseAFailsFig => {
            let mut def = hub_paths_def(name.as_str(), &[3, 2, 5], false);
            def.name = name.as_str().into();
            let board = Board::new(def).expect("valid");
            // hubs 0 (left) and 1 (right); upper 2, 3; middle 4; lower 5..8
            let arrows = [(0, 2), (3, 1), (0, 5), (5, 6), (6, 7), (8, 1), (4, 0)];
            let preset = arrows.iter().map(|&(a, b)| Move::between(&board, a, b).expect("edge")).collect();
            NamedOutput { board, preset }
        }
    };
    Ok(out)
}

/// Symmetry bookkeeping consumed by the symmetric strategies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrategyAnnotations {
    pub mirror: Option<Vec<VertexId>>,
    pub rotation180: Option<Vec<VertexId>>,
    /// Edges swapped by the board's involution, smaller id first.
    pub pairing: Vec<(EdgeId, EdgeId)>,
    /// Edges the involution maps to themselves.
    pub loners: Vec<EdgeId>,
}

/// Pairing data derived from the board's mirror map, or its rotation map
/// when no mirror is present.
pub fn annotations(board: &Board) -> StrategyAnnotations {
    let mirror = board.symmetry(MIRROR).map(<[VertexId]>::to_vec);
    let rotation180 = board.symmetry(ROTATION180).map(<[VertexId]>::to_vec);
    let mut out =
        StrategyAnnotations { mirror: mirror.clone(), rotation180: rotation180.clone(), ..Default::default() };
    if let Some(perm) = mirror.or(rotation180) {
        for e in 0..board.edge_count() {
            let (image, _) = board.map_edge(&perm, e).expect("symmetry maps edges to edges");
            match image.cmp(&e) {
                std::cmp::Ordering::Equal => out.loners.push(e),
                std::cmp::Ordering::Greater => out.pairing.push((e, image)),
                std::cmp::Ordering::Less => {}
            }
        }
    }
    out
}

/// Positions drawn in the literature that are used as fixtures.
pub mod fixtures {
    use std::sync::Arc;

    use super::{generate, Family};
    use crate::board::EdgeId;
    use crate::game::{GameState, Move};

    /// Two hubs joined by paths of 2, 2 and 4 edges with four arrows drawn so
    /// that the inner edge at the right hub is unmarkable. Returns the
    /// position and that edge.
    pub fn unmarkable_position() -> (GameState, EdgeId) {
        let board = Arc::new(generate(&Family::J2K(2, 4)).unwrap());
        // hubs 0, 1; upper 2; middle 3; lower 4, 5, 6
        let arrows = [(1, 2), (2, 0), (3, 0), (1, 6)];
        let moves: Vec<Move> = arrows.iter().map(|&(a, b)| Move::between(&board, a, b).unwrap()).collect();
        let state = GameState::from_moves(board.clone(), &moves).unwrap();
        let edge = board.edge_between(3, 1).unwrap();
        (state, edge)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::validate_board;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["path:7", "polygon:6", "j2k:3,5", "jnk:3,3,4", "ppaths:4,4,2", "grid:2,3", "named:k4"] {
            let family: Family = s.parse().unwrap();
            assert_eq!(family.to_string(), s);
        }
        assert!("grid:2".parse::<Family>().is_err());
        assert!("named:nope".parse::<Family>().is_err());
        assert!("blob".parse::<Family>().is_err());
    }

    #[test]
    fn parameter_errors() {
        for bad in [
            Family::Path(0),
            Family::Polygon(2),
            Family::J2K(0, 3),
            Family::J2K(1, 1),
            Family::JNK(1, 1, 4),
            Family::PPaths(vec![3]),
            Family::PPaths(vec![1, 1, 4]),
            Family::Grid(1, 5),
        ] {
            assert!(matches!(generate(&bad), Err(GenError::InvalidParams { .. })), "{bad}");
        }
    }

    #[test]
    fn heptagon_pentagon_board() {
        let b = generate(&Family::J2K(3, 5)).unwrap();
        assert_eq!(b.edge_count(), 10);
        assert_eq!(b.vertex_count(), 9);
        assert_eq!(b.cell_sizes(), vec![5, 7]);
    }

    #[test]
    fn small_grid_counts_and_fixed_edge() {
        // 2*(3-1) + 3*(2-1) = 7 edges
        let b = generate(&Family::Grid(2, 3)).unwrap();
        assert_eq!(b.edge_count(), 7);
        assert_eq!(b.vertex_count(), 6);
        assert_eq!(b.cells().len(), 2);
        let rot = b.symmetry(ROTATION180).unwrap();
        assert_eq!(b.fixed_edges(rot).len(), 1);
    }

    #[test]
    fn single_edge_path() {
        let b = generate(&Family::Path(1)).unwrap();
        assert_eq!(b.edge_count(), 1);
        assert!(b.is_exempt(0) && b.is_exempt(1));
    }

    #[test]
    fn polygon_has_one_cell() {
        let b = generate(&Family::Polygon(5)).unwrap();
        assert!(validate_board(b.def()).is_empty());
        assert_eq!(b.cells().len(), 1);
    }

    #[test]
    fn ppaths_cells_and_mirror() {
        let b = generate(&Family::PPaths(vec![5, 4, 4])).unwrap();
        assert_eq!(b.edge_count(), 13);
        assert_eq!(b.cell_sizes(), vec![8, 9]);
        let m = b.symmetry(MIRROR).unwrap();
        // only the middle edge of the 5-path is fixed
        assert_eq!(b.fixed_edges(m), vec![2]);
    }

    #[test]
    fn annotations_split_paired_and_loner_edges() {
        let b = generate(&Family::PPaths(vec![5, 4, 4])).unwrap();
        let ann = annotations(&b);
        assert_eq!(ann.loners, vec![2]);
        assert_eq!(ann.pairing.len(), 6);
        let grid = annotations(&generate(&Family::Grid(2, 3)).unwrap());
        assert_eq!((grid.loners.len(), grid.pairing.len()), (1, 3));
        assert!(annotations(&generate(&Family::Polygon(4)).unwrap()).pairing.is_empty());
    }

    #[test]
    fn named_boards_match_drawings() {
        let prism_l = named(NamedBoard::PrismLeftFig10).unwrap().board;
        let prism_r = named(NamedBoard::PrismRightFig10).unwrap().board;
        assert_eq!(prism_l.cell_sizes(), vec![3, 3, 4, 4]);
        assert_eq!(prism_r.cell_sizes(), vec![3, 4, 4, 4]);
        let fig9 = named(NamedBoard::CounterexampleFig9).unwrap().board;
        assert_eq!(fig9.edge_count(), 4);
        assert_eq!(fig9.degree(0), 1);
        let k4 = named(NamedBoard::K4).unwrap().board;
        assert_eq!((k4.vertex_count(), k4.edge_count(), k4.cells().len()), (4, 6, 3));
        let sample = named(NamedBoard::SampleFig3).unwrap().board;
        assert_eq!(sample.edge_count(), 6);
        assert_eq!(sample.cell_sizes(), vec![4, 4]);
        let case_a = named(NamedBoard::CaseAFailsFig).unwrap();
        assert_eq!(case_a.preset.len(), 7);
        assert_eq!(case_a.board.cell_sizes(), vec![5, 7]);
    }
}
