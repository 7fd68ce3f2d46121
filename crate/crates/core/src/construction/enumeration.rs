use alloc::vec::Vec;

use crate::term::ConstantName;

/// A (constant, level) pair handled by one stage of a plan.
pub type StagePair = (ConstantName, u32);

/// Dovetailed enumeration of `ConstantName × ℕ`, hitting every pair exactly
/// once.
///
/// Pairs come in blocks of equal key `max(index(t), m)`. Inside a block they
/// are ordered by `m`, then by `index(t)`, then `d(n)` before `c(a,b)`, then
/// by `a`. The first pairs are `(d(0), 0)`, `(c(0,0), 0)`, `(d(1), 0)`.
#[derive(Debug, Clone, Default)]
pub struct Dovetail {
    key: u32,
    block: Vec<StagePair>,
    next: usize,
}

impl Dovetail {
    pub fn new() -> Self {
        Dovetail {
            key: 0,
            block: block(0),
            next: 0,
        }
    }
}

fn block(key: u32) -> Vec<StagePair> {
    let mut pairs = Vec::new();
    for m in 0..=key {
        for index in 0..=key {
            if m.max(index) != key {
                continue;
            }
            pairs.push((ConstantName::d(index), m));
            for a in 0..=index {
                pairs.push((ConstantName::c(a, index - a), m));
            }
        }
    }
    pairs
}

impl Iterator for Dovetail {
    type Item = StagePair;

    fn next(&mut self) -> Option<StagePair> {
        while self.next == self.block.len() {
            self.key += 1;
            self.block = block(self.key);
            self.next = 0;
        }
        let pair = self.block[self.next];
        self.next += 1;
        Some(pair)
    }
}

/// The `n`-th pair of the default [`Dovetail`] order.
pub fn default_enumeration(n: usize) -> StagePair {
    Dovetail::new().nth(n).expect("the enumeration is infinite")
}
