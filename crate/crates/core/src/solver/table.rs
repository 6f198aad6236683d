//! Transposition table keyed by the base-3 marks key. Values are write-once:
//! the same key always maps to the same game value, so concurrent writers
//! cannot disagree and lost updates are benign.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rustc_hash::FxHashMap;

const SHARDS: usize = 64;
/// Rough per-entry footprint of a hash map slot holding `(u64, bool)`.
const SPARSE_ENTRY_BYTES: u64 = 24;

pub(crate) enum Table {
    Disabled,
    /// Two bits per key: bit 0 known, bit 1 mover wins.
    Dense {
        words: Vec<AtomicU64>,
        entries: AtomicU64,
    },
    Sparse {
        shards: Vec<Mutex<FxHashMap<u64, bool>>>,
        entries: AtomicU64,
        cap: u64,
    },
}

/// Table capacity exhausted.
#[derive(Debug)]
pub(crate) struct TableFull;

impl Table {
    /// Dense when the whole key space fits in `max_bytes`, sparse otherwise.
    pub fn new(key_space: u64, max_bytes: u64) -> Table {
        let dense_bytes = key_space.div_ceil(4);
        if dense_bytes <= max_bytes {
            let words = key_space.div_ceil(32) as usize;
            Table::Dense { words: (0..words).map(|_| AtomicU64::new(0)).collect(), entries: AtomicU64::new(0) }
        } else {
            Table::Sparse {
                shards: (0..SHARDS).map(|_| Mutex::new(FxHashMap::default())).collect(),
                entries: AtomicU64::new(0),
                cap: (max_bytes / SPARSE_ENTRY_BYTES).max(1),
            }
        }
    }

    #[cfg(test)]
    pub fn is_dense(&self) -> bool {
        matches!(self, Table::Dense { .. })
    }

    #[inline]
    pub fn get(&self, key: u64) -> Option<bool> {
        match self {
            Table::Disabled => None,
            Table::Dense { words, .. } => {
                let bits = words[(key / 32) as usize].load(Ordering::Relaxed) >> ((key % 32) * 2);
                (bits & 1 == 1).then_some(bits & 2 == 2)
            }
            Table::Sparse { shards, .. } => shards[shard(key)].lock().unwrap().get(&key).copied(),
        }
    }

    #[inline]
    pub fn put(&self, key: u64, wins: bool) -> Result<(), TableFull> {
        match self {
            Table::Disabled => Ok(()),
            Table::Dense { words, entries } => {
                let bits = (1 | (wins as u64) << 1) << ((key % 32) * 2);
                let before = words[(key / 32) as usize].fetch_or(bits, Ordering::Relaxed);
                if before & bits == 0 {
                    entries.fetch_add(1, Ordering::Relaxed);
                }
                Ok(())
            }
            Table::Sparse { shards, entries, cap } => {
                if entries.load(Ordering::Relaxed) >= *cap {
                    return Err(TableFull);
                }
                if shards[shard(key)].lock().unwrap().insert(key, wins).is_none() {
                    entries.fetch_add(1, Ordering::Relaxed);
                }
                Ok(())
            }
        }
    }

    pub fn entries(&self) -> u64 {
        match self {
            Table::Disabled => 0,
            Table::Dense { entries, .. } | Table::Sparse { entries, .. } => entries.load(Ordering::Relaxed),
        }
    }
}

#[inline]
fn shard(key: u64) -> usize {
    (key.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 58) as usize % SHARDS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_sparse_store_values() {
        for table in [Table::new(1000, 1 << 20), Table::new(1 << 40, 1 << 10)] {
            assert_eq!(table.get(17), None);
            table.put(17, true).unwrap();
            table.put(18, false).unwrap();
            table.put(17, true).unwrap();
            assert_eq!(table.get(17), Some(true));
            assert_eq!(table.get(18), Some(false));
            assert_eq!(table.entries(), 2);
        }
        assert!(Table::new(1000, 1 << 20).is_dense());
    }

    #[test]
    fn sparse_capacity_is_enforced() {
        let table = Table::new(1 << 40, SPARSE_ENTRY_BYTES * 2);
        table.put(1, true).unwrap();
        table.put(2, true).unwrap();
        assert!(table.put(3, true).is_err());
    }
}
