use std::cmp::Ordering;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeapError {
    #[error("cell {0} is not in the heap")]
    Absent(usize),
    #[error("cell {0} is already in the heap")]
    Duplicate(usize),
    #[error("new key {new} for cell {cell} exceeds current key {current}")]
    KeyIncrease { cell: usize, current: f64, new: f64 },
}

const ABSENT: usize = usize::MAX;

/// Binary min-heap over cell indices with a position map for `decrease_key`.
///
/// Entries are ordered by `(key, cell)`, so equal keys pop in ascending cell order.
#[derive(Debug, Clone)]
pub struct IndexedMinHeap {
    entries: Vec<(f64, usize)>,
    pos: Vec<usize>,
}

#[inline]
fn less(a: (f64, usize), b: (f64, usize)) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => a.1 < b.1,
    }
}

impl IndexedMinHeap {
    /// Heap able to hold cells `0..cells`.
    pub fn with_capacity(cells: usize) -> Self {
        IndexedMinHeap {
            entries: Vec::new(),
            pos: vec![ABSENT; cells],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.pos.get(cell).is_some_and(|&p| p != ABSENT)
    }

    pub fn key(&self, cell: usize) -> Option<f64> {
        self.contains(cell).then(|| self.entries[self.pos[cell]].0)
    }

    /// Slot of `cell` in the backing array.
    pub fn position(&self, cell: usize) -> Option<usize> {
        self.contains(cell).then(|| self.pos[cell])
    }

    pub fn peek(&self) -> Option<(usize, f64)> {
        self.entries.first().map(|&(k, c)| (c, k))
    }

    pub fn push(&mut self, cell: usize, key: f64) -> Result<(), HeapError> {
        if self.contains(cell) {
            return Err(HeapError::Duplicate(cell));
        }
        if cell >= self.pos.len() {
            self.pos.resize(cell + 1, ABSENT);
        }
        let slot = self.entries.len();
        self.entries.push((key, cell));
        self.pos[cell] = slot;
        self.sift_up(slot);
        Ok(())
    }

    pub fn pop(&mut self) -> Option<(usize, f64)> {
        if self.entries.is_empty() {
            return None;
        }
        let last = self.entries.len() - 1;
        self.swap(0, last);
        let (key, cell) = self.entries.pop().expect("non-empty");
        self.pos[cell] = ABSENT;
        if !self.entries.is_empty() {
            self.sift_down(0);
        }
        Some((cell, key))
    }

    /// Lowers the key of `cell`. An equal key is accepted and leaves the heap unchanged.
    pub fn decrease_key(&mut self, cell: usize, new_key: f64) -> Result<(), HeapError> {
        let slot = self.position(cell).ok_or(HeapError::Absent(cell))?;
        let current = self.entries[slot].0;
        if new_key > current {
            return Err(HeapError::KeyIncrease {
                cell,
                current,
                new: new_key,
            });
        }
        self.entries[slot].0 = new_key;
        self.sift_up(slot);
        Ok(())
    }

    /// Checks heap order and position-map consistency.
    pub fn is_valid(&self) -> bool {
        let ordered = (1..self.entries.len()).all(|k| !less(self.entries[k], self.entries[(k - 1) / 2]));
        let mapped = self
            .entries
            .iter()
            .enumerate()
            .all(|(slot, &(_, c))| self.pos[c] == slot);
        let counted = self.pos.iter().filter(|&&p| p != ABSENT).count() == self.entries.len();
        ordered && mapped && counted
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.entries.swap(a, b);
        self.pos[self.entries[a].1] = a;
        self.pos[self.entries[b].1] = b;
    }

    fn sift_up(&mut self, mut slot: usize) {
        while slot > 0 {
            let parent = (slot - 1) / 2;
            if less(self.entries[slot], self.entries[parent]) {
                self.swap(slot, parent);
                slot = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut slot: usize) {
        let n = self.entries.len();
        loop {
            let (l, r) = (2 * slot + 1, 2 * slot + 2);
            let mut smallest = slot;
            if l < n && less(self.entries[l], self.entries[smallest]) {
                smallest = l;
            }
            if r < n && less(self.entries[r], self.entries[smallest]) {
                smallest = r;
            }
            if smallest == slot {
                break;
            }
            self.swap(slot, smallest);
            slot = smallest;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn filled() -> IndexedMinHeap {
        let mut h = IndexedMinHeap::with_capacity(8);
        for (c, k) in [(0, 1.0), (1, 5.0), (2, 3.0), (3, 9.0), (4, 7.0), (5, 4.0)] {
            h.push(c, k).unwrap();
        }
        h
    }

    #[test]
    fn decrease_root_stays_root() {
        let mut h = filled();
        h.decrease_key(0, 0.5).unwrap();
        assert_eq!(h.position(0), Some(0));
        assert!(h.is_valid());
    }

    #[test]
    fn decrease_leaf_to_minimum_becomes_root() {
        let mut h = filled();
        h.decrease_key(3, -1.0).unwrap();
        assert_eq!(h.peek(), Some((3, -1.0)));
        assert!(h.is_valid());
    }

    #[test]
    fn decrease_to_equal_key_is_noop() {
        let mut h = filled();
        let before: Vec<_> = (0..6).map(|c| h.position(c)).collect();
        h.decrease_key(4, 7.0).unwrap();
        let after: Vec<_> = (0..6).map(|c| h.position(c)).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn decrease_errors() {
        let mut h = filled();
        assert_eq!(h.decrease_key(7, 0.0), Err(HeapError::Absent(7)));
        assert!(matches!(h.decrease_key(2, 4.0), Err(HeapError::KeyIncrease { .. })));
        assert_eq!(h.push(2, 0.0), Err(HeapError::Duplicate(2)));
    }

    #[test]
    fn ties_pop_by_cell_index() {
        let mut h = IndexedMinHeap::with_capacity(4);
        for c in [3, 1, 2, 0] {
            h.push(c, 1.0).unwrap();
        }
        let order: Vec<usize> = std::iter::from_fn(|| h.pop().map(|(c, _)| c)).collect();
        assert_eq!(order, vec![0, 1, 2, 3]);
    }

    proptest! {
        #[test]
        fn pops_sorted(keys in proptest::collection::vec(0.0f64..100.0, 1..64), cuts in proptest::collection::vec((0usize..64, 0.0f64..1.0), 0..32)) {
            let mut h = IndexedMinHeap::with_capacity(keys.len());
            for (c, &k) in keys.iter().enumerate() {
                h.push(c, k).unwrap();
            }
            let mut expect = keys.clone();
            for (c, frac) in cuts {
                let c = c % keys.len();
                let nk = expect[c] * frac;
                h.decrease_key(c, nk).unwrap();
                expect[c] = nk;
                prop_assert!(h.is_valid());
            }
            let mut popped = Vec::new();
            while let Some((c, k)) = h.pop() {
                prop_assert_eq!(k, expect[c]);
                popped.push(k);
            }
            prop_assert_eq!(popped.len(), keys.len());
            prop_assert!(popped.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
