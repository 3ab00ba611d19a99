//! Exact points on the cyclic unit interval and the binary strings that name
//! them.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Width `W` of the fixed-point fraction used for points.
pub const FRACTION_BITS: u32 = 128;

/// A point of the cycle `[0, 1)` stored as `frac * 2^-128`.
///
/// All arithmetic wraps modulo one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UnitPoint(u128);

const MSB: u128 = 1 << 127;

impl UnitPoint {
    pub const ZERO: UnitPoint = UnitPoint(0);
    pub const HALF: UnitPoint = UnitPoint(MSB);
    /// Largest representable point, `1 - 2^-128`.
    pub const MAX: UnitPoint = UnitPoint(u128::MAX);

    pub const fn from_bits(frac: u128) -> Self {
        UnitPoint(frac)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// Nearest point at or below `x mod 1`.
    pub fn from_f64(x: f64) -> Self {
        let x = x.rem_euclid(1.0);
        // x * 2^128 < 2^128 except when rem_euclid rounds up to 1.0
        let scaled = x * 2f64.powi(128);
        UnitPoint(if scaled >= 2f64.powi(128) { 0 } else { scaled as u128 })
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 * 2f64.powi(-128)
    }

    /// Uniform random point on the `2^-127` grid; the lowest fraction bit is
    /// always clear so segment images stay exactly half as long.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        UnitPoint(rng.gen::<u128>() & !1)
    }

    pub fn wrapping_add(self, other: UnitPoint) -> Self {
        UnitPoint(self.0.wrapping_add(other.0))
    }

    pub fn wrapping_sub(self, other: UnitPoint) -> Self {
        UnitPoint(self.0.wrapping_sub(other.0))
    }

    /// `x / 2`: a 0 enters as the most significant bit, the lowest bit drops.
    pub fn left(self) -> Self {
        UnitPoint(self.0 >> 1)
    }

    /// `(x + 1) / 2`: a 1 enters as the most significant bit.
    pub fn right(self) -> Self {
        UnitPoint((self.0 >> 1) | MSB)
    }

    /// `2x mod 1`: drops the most significant bit.
    pub fn backward(self) -> Self {
        UnitPoint(self.0 << 1)
    }

    /// The `len` most significant fraction bits.
    pub fn top_bits(self, len: u32) -> BitString {
        BitString::from_top_bits(self.0, len)
    }

    pub fn has_prefix(self, prefix: &BitString) -> bool {
        prefix.len == 0 || (self.0 ^ prefix.bits) >> (128 - prefix.len) == 0
    }
}

impl fmt::Display for UnitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::decimal::dyadic_to_decimal(self.0, FRACTION_BITS))
    }
}

/// A binary string of at most 128 bits, most significant bit first.
///
/// Codewords are never empty; the empty string only shows up as a routing
/// suffix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    /// Left aligned: bit 0 of the string is bit 127 of the word.
    bits: u128,
    len: u32,
}

impl BitString {
    pub const EMPTY: BitString = BitString { bits: 0, len: 0 };

    fn from_top_bits(word: u128, len: u32) -> Self {
        assert!(len <= FRACTION_BITS, "bit string longer than {FRACTION_BITS}");
        let bits = if len == 0 { 0 } else { word & (u128::MAX << (128 - len)) };
        BitString { bits, len }
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit `i`, counted from the most significant end.
    pub fn bit(&self, i: u32) -> bool {
        assert!(i < self.len);
        (self.bits >> (127 - i)) & 1 == 1
    }

    /// The point `0.b_1 b_2 ... b_len` (zero padded).
    pub fn to_point(&self) -> UnitPoint {
        UnitPoint(self.bits)
    }

    /// Left-aligned representation.
    pub fn left_aligned(&self) -> u128 {
        self.bits
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len <= other.len && other.to_point().has_prefix(self)
    }

    /// The last `k` bits.
    pub fn suffix(&self, k: u32) -> BitString {
        assert!(k <= self.len);
        if k == 0 {
            return BitString::EMPTY;
        }
        let shifted = self.bits << (self.len - k);
        BitString::from_top_bits(shifted, k)
    }

    /// `self` followed by `other`, truncated to 128 bits.
    pub fn concat(&self, other: &BitString) -> BitString {
        let len = (self.len + other.len).min(FRACTION_BITS);
        let tail = if self.len == 128 { 0 } else { other.bits >> self.len };
        BitString::from_top_bits(self.bits | tail, len)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > FRACTION_BITS as usize {
            return Err(Error::InvalidBitString(s.to_owned()));
        }
        let mut bits = 0u128;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= MSB >> i,
                _ => return Err(Error::InvalidBitString(s.to_owned())),
            }
        }
        Ok(BitString { bits, len: s.len() as u32 })
    }
}
