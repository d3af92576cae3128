//! Bit-sliced GF(4) vectors of length at most 64.
//!
//! An element `b0 + b1·ω` is stored as bit `i` of the two planes `lo`
//! (`b0`) and `hi` (`b1`). Addition is plane-wise XOR and Hamming weight is
//! `popcount(lo | hi)`.

use std::ops::{Add, AddAssign};

use crate::ring::{HermitianRing, F4};

pub const MAX_LEN: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PackedF4 {
    pub lo: u64,
    pub hi: u64,
}

impl PackedF4 {
    pub const ZERO: PackedF4 = PackedF4 { lo: 0, hi: 0 };

    /// Panics if `v` is longer than [`MAX_LEN`].
    pub fn from_slice(v: &[F4]) -> Self {
        assert!(v.len() <= MAX_LEN, "packed vectors hold at most {MAX_LEN} symbols");
        let mut p = PackedF4::ZERO;
        for (i, x) in v.iter().enumerate() {
            let (b0, b1) = x.bits();
            p.lo |= (b0 as u64) << i;
            p.hi |= (b1 as u64) << i;
        }
        p
    }

    pub fn to_vec(self, len: usize) -> Vec<F4> {
        (0..len).map(|i| self.get(i)).collect()
    }

    #[inline]
    pub fn get(self, i: usize) -> F4 {
        F4::from_index((((self.lo >> i) & 1) | (((self.hi >> i) & 1) << 1)) as u8)
    }

    #[inline]
    pub fn support(self) -> u64 {
        self.lo | self.hi
    }

    #[inline]
    pub fn weight(self) -> u32 {
        self.support().count_ones()
    }

    /// `ω · self`: `(b0 + b1ω)ω = b1 + (b0 + b1)ω`.
    #[inline]
    pub fn times_omega(self) -> Self {
        PackedF4 {
            lo: self.hi,
            hi: self.lo ^ self.hi,
        }
    }

    #[inline]
    pub fn scale(self, c: F4) -> Self {
        match c.index() {
            0 => PackedF4::ZERO,
            1 => self,
            2 => self.times_omega(),
            _ => self.times_omega().times_omega(),
        }
    }
}

impl Add for PackedF4 {
    type Output = PackedF4;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        PackedF4 {
            lo: self.lo ^ rhs.lo,
            hi: self.hi ^ rhs.hi,
        }
    }
}

impl AddAssign for PackedF4 {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.lo ^= rhs.lo;
        self.hi ^= rhs.hi;
    }
}
