//! Gameboards: the undirected graph, its declared cycle cells, exempt
//! vertices and optional symmetry maps.
//!
//! A [`Board`] can only be built from a [`BoardDef`] that passes
//! [`validate_board`], so every `Board` in circulation satisfies the
//! structural invariants (simple, connected, well-formed cells, involutive
//! symmetries). Cells are taken as declared: two drawings of the same graph
//! may carry different cells.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::Orientation;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Name of the vertical-axis reflection map.
pub const MIRROR: &str = "mirror";
/// Name of the half-turn rotation map.
pub const ROTATION180: &str = "rotation180";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexDef {
    pub id: VertexId,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDef {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

/// Serialized form of a board. Field order here is the canonical order of
/// the text format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoardDef {
    pub name: String,
    pub vertices: Vec<VertexDef>,
    pub edges: Vec<EdgeDef>,
    pub cells: Vec<Vec<VertexId>>,
    #[serde(default)]
    pub exempt: Vec<VertexId>,
    #[serde(default)]
    pub symmetry: BTreeMap<String, BTreeMap<VertexId, VertexId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    IdsNotDense,
    UnknownVertex,
    SelfLoop,
    DuplicateEdge,
    Disconnected,
    CellTooShort,
    CellRepeatsVertex,
    CellEdgeAbsent,
    SymmetryNotPermutation,
    SymmetryNotInvolutive,
    SymmetryBreaksEdges,
    ExemptNotDegreeOne,
    /// Warning only: the drawing is authoritative for cells.
    CellHasChord,
}

impl ViolationKind {
    pub fn is_warning(&self) -> bool {
        matches!(self, ViolationKind::CellHasChord)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = if self.kind.is_warning() { "warning" } else { "error" };
        write!(f, "{level}: {}", self.message)
    }
}

/// Result of [`validate_board`]. Empty `violations` means the definition is a
/// valid board.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when there are no violations other than warnings.
    pub fn is_valid(&self) -> bool {
        self.violations.iter().all(|v| v.kind.is_warning())
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| !v.kind.is_warning())
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, message: String) {
        self.violations.push(Violation { kind, message });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
#[error("invalid board:\n{0}")]
pub struct InvalidBoard(pub ValidationReport);

/// Check every board invariant and report each violation by element.
pub fn validate_board(def: &BoardDef) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = def.vertices.len();

    for (i, v) in def.vertices.iter().enumerate() {
        if v.id != i {
            report.push(
                ViolationKind::IdsNotDense,
                format!("vertex at position {i} has id {}; ids must be 0..{n}", v.id),
            );
        }
    }
    for (i, e) in def.edges.iter().enumerate() {
        if e.id != i {
            report.push(
                ViolationKind::IdsNotDense,
                format!("edge at position {i} has id {}; ids must be 0..{}", e.id, def.edges.len()),
            );
        }
    }

    let mut pairs = HashSet::new();
    let mut adjacency = vec![Vec::new(); n];
    for e in &def.edges {
        if e.u >= n || e.v >= n {
            report.push(
                ViolationKind::UnknownVertex,
                format!("edge {} references unknown vertex ({}, {})", e.id, e.u, e.v),
            );
            continue;
        }
        if e.u == e.v {
            report.push(ViolationKind::SelfLoop, format!("edge {} is a loop at vertex {}", e.id, e.u));
            continue;
        }
        if !pairs.insert(unordered(e.u, e.v)) {
            report.push(
                ViolationKind::DuplicateEdge,
                format!("edge {} duplicates another edge between {} and {}", e.id, e.u, e.v),
            );
        }
        adjacency[e.u].push(e.v);
        adjacency[e.v].push(e.u);
    }

    if n > 0 {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if let Some(lost) = seen.iter().position(|s| !s) {
            report.push(
                ViolationKind::Disconnected,
                format!("graph is not connected: vertex {lost} unreachable from vertex 0"),
            );
        }
    }

    for (ci, cell) in def.cells.iter().enumerate() {
        if cell.len() < 3 {
            report.push(ViolationKind::CellTooShort, format!("cell {ci} has fewer than 3 vertices"));
            continue;
        }
        let distinct: BTreeSet<_> = cell.iter().copied().collect();
        if distinct.len() != cell.len() {
            report.push(ViolationKind::CellRepeatsVertex, format!("cell {ci} repeats a vertex"));
        }
        for k in 0..cell.len() {
            let (a, b) = (cell[k], cell[(k + 1) % cell.len()]);
            if !pairs.contains(&unordered(a, b)) {
                report.push(ViolationKind::CellEdgeAbsent, format!("cell {ci}: cell edge absent between {a} and {b}"));
            }
        }
        for (i, &a) in cell.iter().enumerate() {
            for (j, &b) in cell.iter().enumerate().skip(i + 2) {
                let wraps = i == 0 && j == cell.len() - 1;
                if !wraps && pairs.contains(&unordered(a, b)) {
                    report.push(ViolationKind::CellHasChord, format!("cell {ci} has a chord between {a} and {b}"));
                }
            }
        }
    }

    for (name, map) in &def.symmetry {
        let image = |x: VertexId| map.get(&x).copied();
        let total = (0..n).all(|x| image(x).is_some_and(|y| y < n)) && map.len() == n;
        if !total {
            report.push(
                ViolationKind::SymmetryNotPermutation,
                format!("symmetry {name:?} must map every vertex 0..{n} to a vertex"),
            );
            continue;
        }
        if let Some(x) = (0..n).find(|&x| image(image(x).unwrap()) != Some(x)) {
            report.push(
                ViolationKind::SymmetryNotInvolutive,
                format!("symmetry {name:?} not involutive: vertex {x} does not map back to itself"),
            );
        }
        for e in &def.edges {
            if e.u >= n || e.v >= n {
                continue;
            }
            let (a, b) = (image(e.u).unwrap(), image(e.v).unwrap());
            if !pairs.contains(&unordered(a, b)) {
                report.push(
                    ViolationKind::SymmetryBreaksEdges,
                    format!("symmetry {name:?} sends edge {} to a non-edge ({a}, {b})", e.id),
                );
            }
        }
    }

    for &x in &def.exempt {
        let degree = adjacency.get(x).map(Vec::len);
        if degree != Some(1) {
            report.push(ViolationKind::ExemptNotDegreeOne, format!("exempt vertex {x} must exist and have degree 1"));
        }
    }

    report
}

fn unordered(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A validated gameboard with precomputed incidence data.
#[derive(Debug, Clone)]
pub struct Board {
    def: BoardDef,
    incident: Vec<Vec<EdgeId>>,
    edge_index: BTreeMap<(VertexId, VertexId), EdgeId>,
    exempt: Vec<bool>,
    /// For each cell, its edges with the orientation that runs along the
    /// stored cyclic order.
    cell_edges: Vec<Vec<(EdgeId, Orientation)>>,
    /// For each edge, the cells it lies on with the forward orientation.
    edge_cells: Vec<Vec<(usize, Orientation)>>,
    symmetry: BTreeMap<String, Vec<VertexId>>,
}

impl Board {
    pub fn new(def: BoardDef) -> Result<Board, InvalidBoard> {
        let report = validate_board(&def);
        if !report.is_valid() {
            return Err(InvalidBoard(report));
        }
        let n = def.vertices.len();
        let mut incident = vec![Vec::new(); n];
        let mut edge_index = BTreeMap::new();
        for e in &def.edges {
            incident[e.u].push(e.id);
            incident[e.v].push(e.id);
            edge_index.insert(unordered(e.u, e.v), e.id);
        }
        let mut exempt = vec![false; n];
        for &x in &def.exempt {
            exempt[x] = true;
        }
        let mut cell_edges = Vec::with_capacity(def.cells.len());
        let mut edge_cells = vec![Vec::new(); def.edges.len()];
        for (ci, cell) in def.cells.iter().enumerate() {
            let mut edges = Vec::with_capacity(cell.len());
            for k in 0..cell.len() {
                let (a, b) = (cell[k], cell[(k + 1) % cell.len()]);
                let id = edge_index[&unordered(a, b)];
                let dir = Orientation::from_to(&def.edges[id], a);
                edges.push((id, dir));
                edge_cells[id].push((ci, dir));
            }
            cell_edges.push(edges);
        }
        let symmetry =
            def.symmetry.iter().map(|(name, map)| (name.clone(), (0..n).map(|x| map[&x]).collect())).collect();
        Ok(Board { def, incident, edge_index, exempt, cell_edges, edge_cells, symmetry })
    }

    pub fn def(&self) -> &BoardDef {
        &self.def
    }

    pub fn name(&self) -> &str {
        &self.def.name
    }

    pub fn vertex_count(&self) -> usize {
        self.def.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.def.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> EdgeDef {
        self.def.edges[id]
    }

    pub fn edges(&self) -> &[EdgeDef] {
        &self.def.edges
    }

    pub fn position(&self, v: VertexId) -> (f64, f64) {
        let p = self.def.vertices[v];
        (p.x, p.y)
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn is_exempt(&self, v: VertexId) -> bool {
        self.exempt[v]
    }

    /// Edge joining `a` and `b`, if any.
    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.edge_index.get(&unordered(a, b)).copied()
    }

    /// The endpoint of `edge` that is not `v`.
    pub fn other_end(&self, edge: EdgeId, v: VertexId) -> VertexId {
        let e = self.def.edges[edge];
        if e.u == v {
            e.v
        } else {
            e.u
        }
    }

    pub fn cells(&self) -> &[Vec<VertexId>] {
        &self.def.cells
    }

    pub fn cell_edges(&self, cell: usize) -> &[(EdgeId, Orientation)] {
        &self.cell_edges[cell]
    }

    pub fn edge_cells(&self, edge: EdgeId) -> &[(usize, Orientation)] {
        &self.edge_cells[edge]
    }

    /// Named vertex permutation, e.g. [`MIRROR`] or [`ROTATION180`].
    pub fn symmetry(&self, name: &str) -> Option<&[VertexId]> {
        self.symmetry.get(name).map(Vec::as_slice)
    }

    pub fn symmetries(&self) -> impl Iterator<Item = (&str, &[VertexId])> {
        self.symmetry.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Image of `edge` under a vertex permutation, with `true` when the image
    /// runs against the image edge's stored (u, v) order.
    pub fn map_edge(&self, perm: &[VertexId], edge: EdgeId) -> Option<(EdgeId, bool)> {
        let e = self.def.edges[edge];
        let (a, b) = (perm[e.u], perm[e.v]);
        let image = self.edge_between(a, b)?;
        Some((image, self.def.edges[image].u != a))
    }

    /// Edges fixed (as undirected edges) by a vertex permutation.
    pub fn fixed_edges(&self, perm: &[VertexId]) -> Vec<EdgeId> {
        (0..self.edge_count()).filter(|&e| self.map_edge(perm, e).is_some_and(|(img, _)| img == e)).collect()
    }

    /// True when `perm` permutes the declared cells and the exempt set, so it
    /// is an automorphism of the game and not just of the graph.
    pub fn preserves_game(&self, perm: &[VertexId]) -> bool {
        let key = |cell: &[VertexId]| -> BTreeSet<VertexId> { cell.iter().copied().collect() };
        let cells: HashSet<Vec<VertexId>> = self.def.cells.iter().map(|c| key(c).into_iter().collect()).collect();
        let cells_ok = self.def.cells.iter().all(|c| {
            let img: BTreeSet<VertexId> = c.iter().map(|&x| perm[x]).collect();
            cells.contains(&img.into_iter().collect::<Vec<_>>())
        });
        let exempt_ok = (0..self.vertex_count()).all(|x| self.exempt[x] == self.exempt[perm[x]]);
        cells_ok && exempt_ok
    }

    /// Cell sizes in ascending order.
    pub fn cell_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.def.cells.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }

    /// Stable fingerprint of the canonical text form.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let text = crate::format::board_to_string(self);
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

impl PartialEq for Board {
    fn eq(&self, other: &Self) -> bool {
        self.def == other.def
    }
}
