//! Elo rating difference from a score fraction.

use std::fmt;

use serde::{Serialize, Serializer};

/// Display value used for the infinite differences of a 0% or 100% score.
pub const ELO_DISPLAY_CAP: i32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elo {
    Finite(i32),
    PlusInfinity,
    MinusInfinity,
}

impl Elo {
    /// The value with infinities replaced by ±1000.
    pub fn capped(self) -> i32 {
        match self {
            Elo::Finite(v) => v,
            Elo::PlusInfinity => ELO_DISPLAY_CAP,
            Elo::MinusInfinity => -ELO_DISPLAY_CAP,
        }
    }
}

impl fmt::Display for Elo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.capped() {
            0 => f.pad("0"),
            v => f.pad(&format!("{v:+}")),
        }
    }
}

impl Serialize for Elo {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i32(self.capped())
    }
}

/// RD = 400 log10(w / (1 - w)), rounded to the nearest integer.
///
/// `w` is quantized to 1e-9 and the magnitude computed from the larger
/// side, so RD(w) = -RD(1 - w) holds exactly.
pub fn elo_difference(w: f64) -> Elo {
    assert!((0.0..=1.0).contains(&w), "score fraction {w} outside [0, 1]");
    const SCALE: f64 = 1e9;
    let n = (w * SCALE).round();
    let m = SCALE - n;
    if m == 0.0 {
        return Elo::PlusInfinity;
    }
    if n == 0.0 {
        return Elo::MinusInfinity;
    }
    let (hi, lo) = if n >= m { (n, m) } else { (m, n) };
    let magnitude = (400.0 * (hi / lo).log10()).round() as i32;
    Elo::Finite(if n >= m { magnitude } else { -magnitude })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries_and_display() {
        assert_eq!(elo_difference(0.5), Elo::Finite(0));
        assert_eq!(elo_difference(1.0), Elo::PlusInfinity);
        assert_eq!(elo_difference(0.0), Elo::MinusInfinity);
        assert_eq!(elo_difference(1.0).to_string(), "+1000");
        assert_eq!(elo_difference(0.0).to_string(), "-1000");
        assert_eq!(Elo::Finite(67).to_string(), "+67");
        assert_eq!(Elo::Finite(-5).to_string(), "-5");
        assert_eq!(Elo::Finite(0).to_string(), "0");
    }
}
