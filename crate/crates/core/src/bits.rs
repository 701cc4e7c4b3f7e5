//! Fixed-length bit vectors and the indexed subsets built on them.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

const BLOCK_BITS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HexError {
    #[error("hex bitmask must start with 0x")]
    MissingPrefix,
    #[error("invalid hex digit {0:?}")]
    BadDigit(char),
    #[error("bit {bit} set but universe has only {len} indices")]
    OutOfRange { bit: usize, len: usize },
}

/// Bit vector of fixed length backed by `u64` blocks. Bit `i` is index `i`
/// of whatever universe the caller works over.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    blocks: Vec<u64>,
}

fn block_count(len: usize) -> usize {
    len.div_ceil(BLOCK_BITS)
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            len,
            blocks: vec![0; block_count(len)],
        }
    }

    /// Build from a `u64` mask. Panics if the mask has bits at or above `len`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        if len < 64 {
            assert!(
                mask < (1u64 << len),
                "mask {mask:#x} out of range for universe of {len}"
            );
        }
        let mut b = Bits::new(len);
        if !b.blocks.is_empty() {
            b.blocks[0] = mask;
        } else {
            assert_eq!(mask, 0, "nonzero mask for empty universe");
        }
        b
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut b = Bits::new(len);
        for &i in indices {
            b.set(i, true);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.blocks[i / BLOCK_BITS] >> (i % BLOCK_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let (b, o) = (i / BLOCK_BITS, i % BLOCK_BITS);
        if value {
            self.blocks[b] |= 1 << o;
        } else {
            self.blocks[b] &= !(1 << o);
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.blocks[i / BLOCK_BITS] ^= 1 << (i % BLOCK_BITS);
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Iterate set bits in ascending index order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            std::iter::successors((block != 0).then_some(block), |&acc| {
                let next = acc & (acc - 1);
                (next != 0).then_some(next)
            })
            .map(move |acc| bi * BLOCK_BITS + acc.trailing_zeros() as usize)
        })
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        Bits {
            len: self.len,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// The set as a `u64` mask, when the universe fits in one block.
    pub fn to_mask(&self) -> Option<u64> {
        if self.len <= 64 {
            Some(self.blocks.first().copied().unwrap_or(0))
        } else if self.blocks[1..].iter().all(|&b| b == 0) {
            Some(self.blocks[0])
        } else {
            None
        }
    }

    /// Lowercase hex encoding of the set viewed as an integer with bit `i`
    /// worth `2^i`, e.g. `{0,2}` encodes as `0x5`.
    pub fn to_hex(&self) -> String {
        let mut s = String::from("0x");
        let mut started = false;
        for &block in self.blocks.iter().rev() {
            if started {
                s.push_str(&format!("{block:016x}"));
            } else if block != 0 {
                s.push_str(&format!("{block:x}"));
                started = true;
            }
        }
        if !started {
            s.push('0');
        }
        s
    }

    pub fn from_hex(len: usize, text: &str) -> Result<Self, HexError> {
        let digits = text
            .strip_prefix("0x")
            .or_else(|| text.strip_prefix("0X"))
            .ok_or(HexError::MissingPrefix)?;
        let mut bits = Bits::new(len);
        let mut bit = 0usize;
        for ch in digits.chars().rev() {
            let val = ch.to_digit(16).ok_or(HexError::BadDigit(ch))? as u64;
            for o in 0..4 {
                if val >> o & 1 == 1 {
                    if bit + o >= len {
                        return Err(HexError::OutOfRange { bit: bit + o, len });
                    }
                    bits.set(bit + o, true);
                }
            }
            bit += 4;
        }
        Ok(bits)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({}/{})", self.to_hex(), self.len)
    }
}

/// Which ground set a subset lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsetKind {
    Edge,
    Vertex,
}

impl fmt::Display for SubsetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsetKind::Edge => write!(f, "edge"),
            SubsetKind::Vertex => write!(f, "vertex"),
        }
    }
}

/// A set of edge indices or vertex indices; the Markov chain state.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    kind: SubsetKind,
    bits: Bits,
}

impl Subset {
    pub fn empty(kind: SubsetKind, len: usize) -> Self {
        Subset {
            kind,
            bits: Bits::new(len),
        }
    }

    pub fn from_bits(kind: SubsetKind, bits: Bits) -> Self {
        Subset { kind, bits }
    }

    pub fn from_mask(kind: SubsetKind, len: usize, mask: u64) -> Self {
        Subset {
            kind,
            bits: Bits::from_mask(len, mask),
        }
    }

    pub fn from_indices(kind: SubsetKind, len: usize, indices: &[usize]) -> Self {
        Subset {
            kind,
            bits: Bits::from_indices(len, indices),
        }
    }

    pub fn from_hex(kind: SubsetKind, len: usize, text: &str) -> Result<Self, HexError> {
        Ok(Subset {
            kind,
            bits: Bits::from_hex(len, text)?,
        })
    }

    pub fn kind(&self) -> SubsetKind {
        self.kind
    }

    /// Size of the ground set, not of the subset.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.len() == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn flip(&mut self, i: usize) {
        self.bits.flip(i);
    }

    /// Copy with index `i` flipped.
    pub fn toggled(&self, i: usize) -> Subset {
        let mut s = self.clone();
        s.flip(i);
        s
    }

    pub fn symmetric_difference(&self, other: &Subset) -> Subset {
        assert_eq!(self.kind, other.kind, "kind mismatch");
        Subset {
            kind: self.kind,
            bits: self.bits.xor(&other.bits),
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn to_mask(&self) -> Option<u64> {
        self.bits.to_mask()
    }

    pub fn to_hex(&self) -> String {
        self.bits.to_hex()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset[{}]({}/{})", self.kind, self.to_hex(), self.len())
    }
}
