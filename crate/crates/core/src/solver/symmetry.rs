//! Symmetry reduction for the transposition table.
//!
//! The group is the closure of the board's named vertex maps that preserve
//! cells and exempt vertices, times global arrow reversal. Reversal always
//! preserves legality and cell completion, so it applies to every board.

use std::collections::BTreeSet;

use crate::board::{Board, EdgeId, VertexId};

use super::engine::{pow3_table, Dir};

/// Closure under composition of the game-preserving symmetry maps,
/// identity included.
pub fn symmetry_group(board: &Board) -> Vec<Vec<VertexId>> {
    let n = board.vertex_count();
    let generators: Vec<Vec<VertexId>> =
        board.symmetries().filter(|(_, perm)| board.preserves_game(perm)).map(|(_, perm)| perm.to_vec()).collect();
    let identity: Vec<VertexId> = (0..n).collect();
    let mut group: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    let mut frontier = vec![identity];
    while let Some(p) = frontier.pop() {
        if !group.insert(p.clone()) {
            continue;
        }
        for g in &generators {
            let composed: Vec<VertexId> = (0..n).map(|x| g[p[x]]).collect();
            if !group.contains(&composed) {
                frontier.push(composed);
            }
        }
    }
    group.into_iter().collect()
}

#[derive(Clone)]
struct Image {
    edge: Vec<u32>,
    /// 1 when the image of a `TowardV` arrow is a `TowardU` arrow.
    flip: Vec<u8>,
}

/// Keys of every non-identity image of the current position.
#[derive(Clone)]
pub(crate) struct SymmetryTracker {
    images: Vec<Image>,
    keys: Vec<u64>,
    pow3: Vec<u64>,
}

impl SymmetryTracker {
    pub fn new(board: &Board) -> SymmetryTracker {
        let m = board.edge_count();
        let mut images = Vec::new();
        for perm in symmetry_group(board) {
            let is_identity = perm.iter().enumerate().all(|(i, &x)| i == x);
            for reverse in [false, true] {
                if is_identity && !reverse {
                    continue;
                }
                let mut edge = Vec::with_capacity(m);
                let mut flip = Vec::with_capacity(m);
                for e in 0..m {
                    let (img, flipped) = board.map_edge(&perm, e).expect("validated symmetry");
                    edge.push(img as u32);
                    flip.push((flipped ^ reverse) as u8);
                }
                images.push(Image { edge, flip });
            }
        }
        let keys = vec![0; images.len()];
        SymmetryTracker { images, keys, pow3: pow3_table(m) }
    }

    #[cfg(test)]
    /// Number of group elements, identity included.
    pub fn order(&self) -> usize {
        self.images.len() + 1
    }

    #[inline]
    pub fn play(&mut self, e: EdgeId, d: Dir) {
        for (img, key) in self.images.iter().zip(self.keys.iter_mut()) {
            let digit = (d as u64 ^ img.flip[e] as u64) + 1;
            *key += self.pow3[img.edge[e] as usize] * digit;
        }
    }

    #[inline]
    pub fn undo(&mut self, e: EdgeId, d: Dir) {
        for (img, key) in self.images.iter().zip(self.keys.iter_mut()) {
            let digit = (d as u64 ^ img.flip[e] as u64) + 1;
            *key -= self.pow3[img.edge[e] as usize] * digit;
        }
    }

    #[inline]
    pub fn canonical(&self, key: u64) -> u64 {
        self.keys.iter().copied().fold(key, u64::min)
    }
}
