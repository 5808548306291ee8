//! Fixed-length bit vectors over dataset rows.
//!
//! All capture counting is popcounts over these: a predicate, an antecedent
//! and the set of still-alive rows are each one `Bits`. Trailing bits of the
//! last block are kept zero so popcounts never need masking.

/// A fixed-length bit vector; bit `i` refers to dataset row `i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bits {
    blocks: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            blocks: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits {
            blocks: vec![!0u64; len.div_ceil(64)],
            len,
        };
        b.mask_tail();
        b
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Bits::zeros(len);
        for i in indices {
            b.set(i);
        }
        b
    }

    fn mask_tail(&mut self) {
        let used = self.len % 64;
        if used != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.blocks[i / 64] |= 1u64 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub fn count_and(&self, other: &Bits) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Positive/negative counts of `self ∧ alive`, split by the label vector.
    pub fn count_captured(&self, alive: &Bits, positives: &Bits) -> (usize, usize) {
        debug_assert_eq!(self.len, alive.len);
        debug_assert_eq!(self.len, positives.len);
        let mut pos = 0usize;
        let mut neg = 0usize;
        for ((a, v), p) in self.blocks.iter().zip(&alive.blocks).zip(&positives.blocks) {
            let captured = a & v;
            pos += (captured & p).count_ones() as usize;
            neg += (captured & !p).count_ones() as usize;
        }
        (pos, neg)
    }

    /// Removes `other`'s bits from `self` (`self &= !other`).
    pub fn remove(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}
