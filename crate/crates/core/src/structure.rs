//! Recovering family structure from a board's graph and drawing, so policies
//! and the case calculus can refuse boards outside their family.

use thiserror::Error;

use crate::board::{Board, EdgeId, VertexId};
use crate::game::{Move, Orientation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("wrong board family: {0}")]
pub struct WrongFamily(pub String);

fn wrong<T>(msg: impl Into<String>) -> Result<T, WrongFamily> {
    Err(WrongFamily(msg.into()))
}

/// A path in the board, listed from its first vertex to its last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HubPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl HubPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn position(&self, edge: EdgeId) -> Option<usize> {
        self.edges.iter().position(|&e| e == edge)
    }

    /// The move on the `i`-th edge pointing from the path's start toward its end.
    pub fn forward(&self, board: &Board, i: usize) -> Move {
        Move::between(board, self.vertices[i], self.vertices[i + 1]).expect("path edge")
    }

    pub fn backward(&self, board: &Board, i: usize) -> Move {
        Move::between(board, self.vertices[i + 1], self.vertices[i]).expect("path edge")
    }

    /// True when `dir` on the `i`-th edge points toward the path's end.
    pub fn is_forward(&self, board: &Board, i: usize, dir: Orientation) -> bool {
        dir.ends(&board.edge(self.edges[i])).0 == self.vertices[i]
    }

    fn mean_y(&self, board: &Board) -> f64 {
        let inner = &self.vertices[1..self.vertices.len() - 1];
        if inner.is_empty() {
            let ends = [self.vertices[0], *self.vertices.last().unwrap()];
            ends.iter().map(|&v| board.position(v).1).sum::<f64>() / 2.0
        } else {
            inner.iter().map(|&v| board.position(v).1).sum::<f64>() / inner.len() as f64
        }
    }
}

/// Walk from `start` along `first` through degree-2 vertices until a vertex
/// for which `stop` holds.
fn walk(board: &Board, start: VertexId, first: EdgeId, stop: impl Fn(VertexId) -> bool) -> HubPath {
    let mut vertices = vec![start];
    let mut edges = vec![first];
    let mut at = board.other_end(first, start);
    let mut via = first;
    while !stop(at) {
        vertices.push(at);
        let next = board.incident(at).iter().copied().find(|&e| e != via).expect("degree 2");
        edges.push(next);
        via = next;
        at = board.other_end(next, at);
        if edges.len() > board.edge_count() {
            break;
        }
    }
    vertices.push(at);
    HubPath { vertices, edges }
}

/// A bare path with exempt ends, ordered from its lower-id end.
pub fn recover_path(board: &Board) -> Result<HubPath, WrongFamily> {
    let ends: Vec<VertexId> = (0..board.vertex_count()).filter(|&v| board.degree(v) == 1).collect();
    let interior_ok = (0..board.vertex_count()).all(|v| board.degree(v) <= 2);
    if ends.len() != 2 || !interior_ok || board.edge_count() + 1 != board.vertex_count() {
        return wrong("expected a bare path");
    }
    if !ends.iter().all(|&v| board.is_exempt(v)) {
        return wrong("path endpoints must be exempt");
    }
    let start = ends[0];
    let path = walk(board, start, board.incident(start)[0], |v| board.degree(v) != 2);
    Ok(path)
}

/// Three internally disjoint paths between two degree-3 hubs, with the two
/// declared cells upper+inner and inner+lower. Paths run left hub to right hub.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePaths {
    pub left: VertexId,
    pub right: VertexId,
    pub upper: HubPath,
    pub inner: HubPath,
    pub lower: HubPath,
}

pub fn recover_three_paths(board: &Board) -> Result<ThreePaths, WrongFamily> {
    let hubs: Vec<VertexId> = (0..board.vertex_count()).filter(|&v| board.degree(v) == 3).collect();
    let rest_ok = (0..board.vertex_count()).all(|v| board.degree(v) == 3 || board.degree(v) == 2);
    if hubs.len() != 2 || !rest_ok || board.cells().len() != 2 {
        return wrong("expected two degree-3 hubs joined by three paths with two cells");
    }
    let (a, b) = (hubs[0], hubs[1]);
    let (left, right) = if board.position(a).0 <= board.position(b).0 { (a, b) } else { (b, a) };
    let mut paths: Vec<HubPath> =
        board.incident(left).iter().map(|&e| walk(board, left, e, |v| v == left || v == right)).collect();
    if paths.iter().any(|p| *p.vertices.last().unwrap() != right) {
        return wrong("hub paths do not all reach the other hub");
    }
    let shared = |p: &HubPath| p.edges.iter().all(|&e| board.edge_cells(e).len() == 2);
    let inner_idx = match paths.iter().position(shared) {
        Some(i) if paths.iter().filter(|p| shared(p)).count() == 1 => i,
        _ => return wrong("no unique path shared by both cells"),
    };
    let inner = paths.remove(inner_idx);
    if paths.iter().any(|p| p.edges.iter().any(|&e| board.edge_cells(e).len() != 1)) {
        return wrong("outer paths must each lie on exactly one cell");
    }
    let (upper, lower) = if paths[0].mean_y(board) >= paths[1].mean_y(board) {
        (paths[0].clone(), paths[1].clone())
    } else {
        (paths[1].clone(), paths[0].clone())
    };
    Ok(ThreePaths { left, right, upper, inner, lower })
}

/// Labels 1..=6 of the primary edges at the hubs of a j-2-k board: 1 left
/// hub upper, 2 left hub lower, 3 left hub inner, 4 right hub inner, 5 right
/// hub lower, 6 right hub upper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct J2kLayout {
    pub paths: ThreePaths,
    pub j: usize,
    pub k: usize,
}

impl J2kLayout {
    pub fn recover(board: &Board) -> Result<J2kLayout, WrongFamily> {
        let paths = recover_three_paths(board)?;
        if paths.inner.len() != 2 {
            return wrong(format!("inner path has {} edges, expected 2", paths.inner.len()));
        }
        let (j, k) = (paths.upper.len(), paths.lower.len());
        Ok(J2kLayout { paths, j, k })
    }

    pub fn left(&self) -> VertexId {
        self.paths.left
    }

    pub fn right(&self) -> VertexId {
        self.paths.right
    }

    pub fn mid(&self) -> VertexId {
        self.paths.inner.vertices[1]
    }

    /// Edge carrying primary label `label` (1..=6).
    pub fn primary(&self, label: usize) -> EdgeId {
        let p = &self.paths;
        match label {
            1 => p.upper.edges[0],
            2 => p.lower.edges[0],
            3 => p.inner.edges[0],
            4 => p.inner.edges[1],
            5 => *p.lower.edges.last().unwrap(),
            6 => *p.upper.edges.last().unwrap(),
            _ => panic!("primary labels are 1..=6"),
        }
    }

    /// Hub a primary label belongs to.
    pub fn hub(&self, label: usize) -> VertexId {
        if label <= 3 {
            self.paths.left
        } else {
            self.paths.right
        }
    }

    /// The path a label lies on and the label's index in it.
    pub fn locate(&self, label: usize) -> (&HubPath, usize) {
        let p = &self.paths;
        match label {
            1 => (&p.upper, 0),
            2 => (&p.lower, 0),
            3 => (&p.inner, 0),
            4 => (&p.inner, 1),
            5 => (&p.lower, p.lower.len() - 1),
            6 => (&p.upper, p.upper.len() - 1),
            _ => panic!("primary labels are 1..=6"),
        }
    }

    /// The neighbouring edge on the same path away from the hub, when it is
    /// not itself primary at the other hub.
    pub fn secondary(&self, label: usize) -> Option<EdgeId> {
        let (path, i) = self.locate(label);
        if path.len() < 3 {
            return None;
        }
        Some(if label <= 3 { path.edges[i + 1] } else { path.edges[i - 1] })
    }

    /// The move on primary `label` with signal `signal` at its hub
    /// (+1 toward the hub, -1 away).
    pub fn primary_move(&self, board: &Board, label: usize, signal: i8) -> Move {
        let hub = self.hub(label);
        let e = self.primary(label);
        let other = board.other_end(e, hub);
        if signal > 0 {
            Move::between(board, other, hub).unwrap()
        } else {
            Move::between(board, hub, other).unwrap()
        }
    }
}

/// Paths between the leftmost vertex `u` and the rightmost vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPathsLayout {
    pub u: VertexId,
    pub v: VertexId,
    pub paths: Vec<HubPath>,
}

impl PPathsLayout {
    pub fn recover(board: &Board) -> Result<PPathsLayout, WrongFamily> {
        let n = board.vertex_count();
        let by_x = |a: &VertexId, b: &VertexId| board.position(*a).0.total_cmp(&board.position(*b).0);
        let u = (0..n).min_by(by_x).ok_or_else(|| WrongFamily("empty board".into()))?;
        let v = (0..n).max_by(by_x).unwrap();
        if board.degree(u) != board.degree(v) || board.degree(u) < 2 {
            return wrong("end vertices must have equal degree of at least 2");
        }
        if (0..n).any(|x| x != u && x != v && board.degree(x) != 2) {
            return wrong("interior vertices of a p-paths board have degree 2");
        }
        let paths: Vec<HubPath> = board.incident(u).iter().map(|&e| walk(board, u, e, |x| x == u || x == v)).collect();
        if paths.iter().any(|p| *p.vertices.last().unwrap() != v) {
            return wrong("every path must join the two end vertices");
        }
        Ok(PPathsLayout { u, v, paths })
    }

    pub fn path_of(&self, edge: EdgeId) -> Option<(usize, usize)> {
        self.paths.iter().enumerate().find_map(|(i, p)| p.position(edge).map(|pos| (i, pos)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, named, Family, NamedBoard};

    #[test]
    fn j2k_layout_labels() {
        let board = generate(&Family::J2K(3, 5)).unwrap();
        let l = J2kLayout::recover(&board).unwrap();
        assert_eq!((l.j, l.k), (3, 5));
        assert_eq!(l.left(), 0);
        assert_eq!(l.right(), 1);
        assert_eq!(board.edge(l.primary(3)).u, 0);
        assert_eq!(l.mid(), 4);
        assert!(l.secondary(1).is_some());
        let sample = named(NamedBoard::SampleFig3).unwrap().board;
        let l = J2kLayout::recover(&sample).unwrap();
        // a is the upper vertex; b and d are the hubs
        assert_eq!((l.left(), l.right(), l.paths.upper.vertices[1]), (1, 3, 0));
        assert_eq!(l.secondary(1), None);
    }

    #[test]
    fn one_edge_upper_path() {
        let board = generate(&Family::J2K(1, 4)).unwrap();
        let l = J2kLayout::recover(&board).unwrap();
        assert_eq!(l.primary(1), l.primary(6));
        assert_eq!(l.k, 4);
    }

    #[test]
    fn wrong_families_are_refused() {
        assert!(J2kLayout::recover(&generate(&Family::Grid(2, 3)).unwrap()).is_err());
        assert!(J2kLayout::recover(&generate(&Family::JNK(3, 3, 4)).unwrap()).is_err());
        assert!(recover_path(&generate(&Family::Polygon(4)).unwrap()).is_err());
        assert!(PPathsLayout::recover(&generate(&Family::Grid(3, 3)).unwrap()).is_err());
    }

    #[test]
    fn ppaths_layout() {
        let board = generate(&Family::PPaths(vec![5, 4, 4])).unwrap();
        let l = PPathsLayout::recover(&board).unwrap();
        let mut lens: Vec<usize> = l.paths.iter().map(HubPath::len).collect();
        lens.sort();
        assert_eq!(lens, vec![4, 4, 5]);
        let path = recover_path(&generate(&Family::Path(4)).unwrap()).unwrap();
        assert_eq!(path.vertices, vec![0, 1, 2, 3, 4]);
    }
}
