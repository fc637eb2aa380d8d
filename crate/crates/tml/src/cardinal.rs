//! Cardinal numbers: finite naturals and the regular alephs up to `MAX_LEVEL`.
//!
//! Cardinal arithmetic here follows the max rule: the sum or product of two
//! cardinals with an infinite operand is the larger of the two. This is
//! deliberately distinct from the ordinal arithmetic in [`crate::ordinal`],
//! where `+` and `*` are non-commutative.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest usable aleph index plus one. `aleph_{MAX_LEVEL}` and beyond are
/// rejected everywhere; all representable infinite cardinals are regular.
pub const MAX_LEVEL: u8 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CardinalError {
    #[error("aleph index {index} exceeds maximum level {max}")]
    LevelOutOfRange { index: u64, max: u8 },
    #[error("invalid cardinal `{text}`: expected a decimal natural or `aleph_<k>`")]
    Malformed { text: String },
}

/// A finite natural or a symbolic aleph with finite index.
///
/// The derived ordering is exactly the cardinal order: every finite value
/// sits below every aleph, and alephs are ordered by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinal {
    Finite(u64),
    Aleph(u8),
}

impl Cardinal {
    pub const ZERO: Cardinal = Cardinal::Finite(0);
    pub const ONE: Cardinal = Cardinal::Finite(1);

    /// The infinite cardinal `aleph_index`, rejecting indices at or above
    /// [`MAX_LEVEL`].
    pub fn aleph(index: u8) -> Result<Cardinal, CardinalError> {
        if index < MAX_LEVEL {
            Ok(Cardinal::Aleph(index))
        } else {
            Err(CardinalError::LevelOutOfRange {
                index: index as u64,
                max: MAX_LEVEL,
            })
        }
    }

    pub fn is_zero(self) -> bool {
        self == Cardinal::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Cardinal::Aleph(_))
    }

    pub fn aleph_index(self) -> Option<u8> {
        match self {
            Cardinal::Finite(_) => None,
            Cardinal::Aleph(k) => Some(k),
        }
    }

    pub fn finite_value(self) -> Option<u64> {
        match self {
            Cardinal::Finite(n) => Some(n),
            Cardinal::Aleph(_) => None,
        }
    }

    /// Cardinal sum: finite values add, any infinite operand absorbs by max.
    pub fn plus(self, other: Cardinal) -> Cardinal {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => Cardinal::Finite(a.saturating_add(b)),
            _ => self.max(other),
        }
    }

    /// Cardinal product: zero annihilates, finite values multiply, otherwise max.
    pub fn times(self, other: Cardinal) -> Cardinal {
        if self.is_zero() || other.is_zero() {
            return Cardinal::ZERO;
        }
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => Cardinal::Finite(a.saturating_mul(b)),
            _ => self.max(other),
        }
    }

    /// Fold of [`Cardinal::plus`] over an iterator; empty sums are zero.
    pub fn sum<I: IntoIterator<Item = Cardinal>>(items: I) -> Cardinal {
        items.into_iter().fold(Cardinal::ZERO, |acc, c| acc.plus(c))
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Aleph(k) => write!(f, "aleph_{k}"),
        }
    }
}

impl FromStr for Cardinal {
    type Err = CardinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || CardinalError::Malformed { text: s.to_owned() };
        if let Some(idx) = s.strip_prefix("aleph_") {
            let index: u64 = idx.parse().map_err(|_| malformed())?;
            if index >= MAX_LEVEL as u64 {
                return Err(CardinalError::LevelOutOfRange {
                    index,
                    max: MAX_LEVEL,
                });
            }
            Ok(Cardinal::Aleph(index as u8))
        } else {
            s.parse::<u64>()
                .map(Cardinal::Finite)
                .map_err(|_| malformed())
        }
    }
}
