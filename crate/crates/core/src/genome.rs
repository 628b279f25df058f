//! The 70-bit chromosome: the 18 search parameters, each Gray coded in its
//! own fixed-width field.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::search::{ParamError, SearchParams, PARAM_RANGES};

pub const CHROMOSOME_BITS: usize = 70;

/// Field widths in parameter order.
pub const FIELD_WIDTHS: [u32; 18] = [1, 3, 1, 3, 2, 10, 10, 10, 1, 3, 3, 5, 3, 3, 3, 3, 3, 3];

const MASK: u128 = (1u128 << CHROMOSOME_BITS) - 1;

const fn field_offsets() -> [u32; 18] {
    let mut out = [0; 18];
    let mut i = 1;
    while i < 18 {
        out[i] = out[i - 1] + FIELD_WIDTHS[i - 1];
        i += 1;
    }
    out
}

/// Offset of each field from the first bit of the text form.
pub const FIELD_OFFSETS: [u32; 18] = field_offsets();

#[inline]
pub const fn gray_encode(n: u32) -> u32 {
    n ^ (n >> 1)
}

#[inline]
pub const fn gray_decode(mut g: u32) -> u32 {
    let mut n = g;
    while g > 1 {
        g >>= 1;
        n ^= g;
    }
    n
}

/// 70 bits. Bit 0 of the text form (the first character) is the most
/// significant bit of the integer.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Chromosome(u128);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChromosomeError {
    #[error("chromosome must have {CHROMOSOME_BITS} bits, got {0}")]
    Length(usize),
    #[error("invalid character {0:?} at position {1} (expected '0' or '1')")]
    Char(char, usize),
}

impl Chromosome {
    pub const ZERO: Chromosome = Chromosome(0);

    /// Keeps the low 70 bits of `bits`.
    pub const fn from_bits(bits: u128) -> Chromosome {
        Chromosome(bits & MASK)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// Bit `i` in text order.
    pub fn bit(self, i: usize) -> bool {
        assert!(i < CHROMOSOME_BITS);
        (self.0 >> (CHROMOSOME_BITS - 1 - i)) & 1 == 1
    }

    pub fn with_bit(self, i: usize, value: bool) -> Chromosome {
        assert!(i < CHROMOSOME_BITS);
        let m = 1u128 << (CHROMOSOME_BITS - 1 - i);
        Chromosome(if value { self.0 | m } else { self.0 & !m })
    }

    pub fn count_ones(self) -> u32 {
        self.0.count_ones()
    }

    pub fn hamming(self, other: Chromosome) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    pub fn complement(self) -> Chromosome {
        Chromosome(!self.0 & MASK)
    }

    /// Raw (still Gray coded) content of field `f`.
    pub fn field(self, f: usize) -> u32 {
        let w = FIELD_WIDTHS[f];
        let shift = CHROMOSOME_BITS as u32 - FIELD_OFFSETS[f] - w;
        ((self.0 >> shift) & ((1u128 << w) - 1)) as u32
    }

    fn with_field(self, f: usize, raw: u32) -> Chromosome {
        let w = FIELD_WIDTHS[f];
        debug_assert!(raw < 1 << w);
        let shift = CHROMOSOME_BITS as u32 - FIELD_OFFSETS[f] - w;
        let m = ((1u128 << w) - 1) << shift;
        Chromosome((self.0 & !m) | ((raw as u128) << shift))
    }

    /// Uniform random bits.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Chromosome {
        Chromosome::from_bits(rng.gen::<u128>())
    }
}

/// Decodes every field and clamps it into its parameter range. Total: any
/// bit pattern gives valid parameters.
pub fn decode(c: Chromosome) -> SearchParams {
    let mut values = [0u32; 18];
    for (f, v) in values.iter_mut().enumerate() {
        *v = gray_decode(c.field(f)).min(PARAM_RANGES[f].1);
    }
    SearchParams::from_values(values).expect("clamped values are in range")
}

/// Inverse of [`decode`] on in-range parameters.
pub fn encode(p: &SearchParams) -> Result<Chromosome, ParamError> {
    p.validate()?;
    let mut c = Chromosome::ZERO;
    for (f, v) in p.to_values().into_iter().enumerate() {
        c = c.with_field(f, gray_encode(v));
    }
    Ok(c)
}

/// Seeded random chromosome; the same seed always gives the same bits.
pub fn random_chromosome(seed: u64) -> Chromosome {
    Chromosome::random(&mut ChaCha8Rng::seed_from_u64(seed))
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..CHROMOSOME_BITS).map(|i| if self.bit(i) { '1' } else { '0' }).collect();
        f.pad(&s)
    }
}

impl fmt::Debug for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chromosome({self})")
    }
}

impl FromStr for Chromosome {
    type Err = ChromosomeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let n = s.chars().count();
        if n != CHROMOSOME_BITS {
            return Err(ChromosomeError::Length(n));
        }
        let mut bits = 0u128;
        for (i, ch) in s.chars().enumerate() {
            bits = (bits << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(ChromosomeError::Char(ch, i)),
                };
        }
        Ok(Chromosome(bits))
    }
}

impl Serialize for Chromosome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Chromosome {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
