//! Block-based deque of row indices.
//!
//! Every leaf under construction owns one [`IndexDeque`] per feature, holding
//! that leaf's row indices in ascending order of the feature's values. The
//! deque is a chain of fixed-size blocks: traversal runs over contiguous
//! `u32` slices (cache friendly), the front element pops in O(1), and the
//! back accepts a push in O(1). Splitting a node drains the parent deque
//! front-to-back into two child deques, so blocks emptied by the parent are
//! handed back to a [`BlockPool`] and immediately reused for the children.
//! In steady state a split therefore allocates nothing: total block storage
//! stays one deque-set per datum per feature, plus a bounded number of
//! partially filled tail blocks.

use std::collections::VecDeque;

/// Number of `u32` row indices per block (1 KiB).
pub const BLOCK_CAP: usize = 256;

type Block = Box<[u32; BLOCK_CAP]>;

/// Free list of deque blocks, shared by every deque in one training run.
#[derive(Debug, Default)]
pub struct BlockPool {
    free: Vec<Block>,
    allocated: u64,
}

impl BlockPool {
    pub fn new() -> Self {
        Self::default()
    }

    fn acquire(&mut self) -> Block {
        self.free.pop().unwrap_or_else(|| {
            self.allocated += 1;
            Box::new([0u32; BLOCK_CAP])
        })
    }

    fn release(&mut self, block: Block) {
        self.free.push(block);
    }

    /// Blocks created since the pool was built (never decreases).
    pub fn total_allocated(&self) -> u64 {
        self.allocated
    }

    /// Blocks currently sitting in the free list.
    pub fn free_blocks(&self) -> usize {
        self.free.len()
    }
}

/// Double-ended sequence of row indices backed by pooled blocks.
///
/// Layout invariant: with one block, elements live at `[front, back)`; with
/// more, the first block is valid on `[front, BLOCK_CAP)`, middle blocks are
/// full, and the last is valid on `[0, back)`.
#[derive(Debug, Default)]
pub struct IndexDeque {
    blocks: VecDeque<Block>,
    front: usize,
    back: usize,
    len: usize,
}

impl IndexDeque {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push_back(&mut self, index: u32, pool: &mut BlockPool) {
        if self.blocks.is_empty() {
            self.blocks.push_back(pool.acquire());
            self.front = 0;
            self.back = 0;
        } else if self.back == BLOCK_CAP {
            self.blocks.push_back(pool.acquire());
            self.back = 0;
        }
        let last = self.blocks.back_mut().expect("block present");
        last[self.back] = index;
        self.back += 1;
        self.len += 1;
    }

    pub fn pop_front(&mut self, pool: &mut BlockPool) -> Option<u32> {
        if self.len == 0 {
            return None;
        }
        let value = self.blocks.front().expect("block present")[self.front];
        self.front += 1;
        self.len -= 1;
        if self.len == 0 {
            // Drain complete: recycle the final block whatever its fill.
            pool.release(self.blocks.pop_front().expect("block present"));
            debug_assert!(self.blocks.is_empty());
            self.front = 0;
            self.back = 0;
        } else if self.front == BLOCK_CAP {
            pool.release(self.blocks.pop_front().expect("block present"));
            self.front = 0;
        }
        Some(value)
    }

    /// Hand every remaining block back to the pool, emptying the deque.
    pub fn release_all(&mut self, pool: &mut BlockPool) {
        while let Some(block) = self.blocks.pop_front() {
            pool.release(block);
        }
        self.front = 0;
        self.back = 0;
        self.len = 0;
    }

    /// Front-to-back traversal without consuming the deque.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            deque: self,
            block: 0,
            offset: self.front,
            remaining: self.len,
        }
    }
}

pub struct Iter<'a> {
    deque: &'a IndexDeque,
    block: usize,
    offset: usize,
    remaining: usize,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.remaining == 0 {
            return None;
        }
        if self.offset == BLOCK_CAP {
            self.block += 1;
            self.offset = 0;
        }
        let value = self.deque.blocks[self.block][self.offset];
        self.offset += 1;
        self.remaining -= 1;
        Some(value)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for Iter<'_> {}
