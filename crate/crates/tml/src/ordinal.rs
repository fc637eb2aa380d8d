//! Symbolic ordinal arithmetic over a hierarchical Cantor normal form.
//!
//! An [`Ordinal`] is a left-to-right sum of monomials `aleph_k^e * c` followed
//! by a finite tail, where `aleph_0` is identified with `w` (omega). Monomials
//! are kept strictly descending in `(level, exponent)` and every coefficient
//! only mentions levels strictly below its own monomial's level, so two values
//! denote the same ordinal exactly when they are structurally identical.
//!
//! The operations provided are the ones the modal semantics needs: comparison,
//! addition, multiplication, finite powers, division with remainder by an
//! aleph base (and the ordinal logarithm it induces), magnitude-class
//! comparison relative to an aleph, and ordered sums of bundle families.
//!
//! Text syntax, used by the CLI for traces: `ord := term ("+" term)*` with
//! `term := base ("^" nat)? ("*" coeff)? | nat`, `base := "w" | "aleph_" nat`
//! and `coeff := nat | "(" ord ")"`, e.g. `aleph_1^2*3 + aleph_0*5 + 7`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use thiserror::Error;

use crate::cardinal::{Cardinal, CardinalError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("ordinal logarithm of zero is undefined")]
    ZeroArgument,
    #[error("unsupported logarithm: argument contains level {level_found}, above base level {base_level}")]
    UnsupportedLogarithm { level_found: u8, base_level: u8 },
    #[error(transparent)]
    Level(#[from] CardinalError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("ordinal syntax error at position {pos}: {message}")]
pub struct OrdinalParseError {
    pub pos: usize,
    pub message: String,
}

/// Result of comparing the magnitude classes of two ordinals relative to an
/// aleph: same class, or strictly below/above in the class order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassOrder {
    Less,
    Same,
    Greater,
}

/// `aleph_level^exp * coeff`; the coefficient only mentions strictly smaller
/// levels (so level-0 coefficients are finite naturals).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Monomial {
    level: u8,
    exp: u32,
    coeff: Ordinal,
}

impl Monomial {
    fn key(&self) -> (u8, u32) {
        (self.level, self.exp)
    }
}

/// Canonical hierarchical Cantor normal form; see the module docs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Monomial>,
    tail: u64,
}

impl Ordinal {
    pub fn zero() -> Ordinal {
        Ordinal::default()
    }

    pub fn one() -> Ordinal {
        Ordinal::finite(1)
    }

    pub fn finite(n: u64) -> Ordinal {
        Ordinal {
            terms: Vec::new(),
            tail: n,
        }
    }

    /// `aleph_index` as an ordinal, subject to the [`crate::cardinal::MAX_LEVEL`] bound.
    pub fn aleph(index: u8) -> Result<Ordinal, CardinalError> {
        Cardinal::aleph(index)?;
        Ok(Ordinal::aleph_unchecked(index))
    }

    /// Internal constructor without the level bound; comparison helpers use
    /// this for scratch values that never escape.
    fn aleph_unchecked(index: u8) -> Ordinal {
        Ordinal {
            terms: vec![Monomial {
                level: index,
                exp: 1,
                coeff: Ordinal::one(),
            }],
            tail: 0,
        }
    }

    pub fn from_cardinal(c: Cardinal) -> Ordinal {
        match c {
            Cardinal::Finite(n) => Ordinal::finite(n),
            Cardinal::Aleph(k) => Ordinal::aleph_unchecked(k),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.tail == 0
    }

    pub fn tail(&self) -> u64 {
        self.tail
    }

    /// The monomials in descending `(level, exponent)` order.
    pub fn monomials(&self) -> impl Iterator<Item = (u8, u32, &Ordinal)> {
        self.terms.iter().map(|m| (m.level, m.exp, &m.coeff))
    }

    /// Largest aleph level occurring anywhere, or `None` for finite values.
    /// By canonicity this is the level of the leading monomial.
    pub fn max_level(&self) -> Option<u8> {
        self.terms.first().map(|m| m.level)
    }

    /// Cardinality of the order type: finite values map to themselves, and
    /// anything containing a monomial has the cardinality of its largest level.
    pub fn cardinality(&self) -> Cardinal {
        match self.max_level() {
            None => Cardinal::Finite(self.tail),
            Some(level) => Cardinal::Aleph(level),
        }
    }

    fn single(level: u8, exp: u32, coeff: Ordinal) -> Ordinal {
        debug_assert!(!coeff.is_zero());
        debug_assert!(coeff.max_level().is_none_or(|l| l < level));
        Ordinal {
            terms: vec![Monomial { level, exp, coeff }],
            tail: 0,
        }
    }

    /// Ordinal sum. Left parts strictly below the right head's magnitude are
    /// absorbed; equal `(level, exponent)` heads merge by adding coefficients.
    fn add_ord(&self, other: &Ordinal) -> Ordinal {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let Some(head) = other.terms.first() else {
            // Purely finite right operand: tails add.
            return Ordinal {
                terms: self.terms.clone(),
                tail: self.tail.saturating_add(other.tail),
            };
        };
        let key = head.key();
        let keep = self.terms.iter().take_while(|m| m.key() > key).count();
        let mut terms: Vec<Monomial> = self.terms[..keep].to_vec();
        let mut rest = other.terms.iter();
        if self.terms.get(keep).map(Monomial::key) == Some(key) {
            let merged = self.terms[keep].coeff.add_ord(&head.coeff);
            rest.next();
            terms.push(Monomial {
                level: head.level,
                exp: head.exp,
                coeff: merged,
            });
        }
        terms.extend(rest.cloned());
        Ordinal {
            terms,
            tail: other.tail,
        }
    }

    /// Ordinal product, distributing over the right operand's normal form.
    fn mul_ord(&self, other: &Ordinal) -> Ordinal {
        if self.is_zero() || other.is_zero() {
            return Ordinal::zero();
        }
        let mut acc = Ordinal::zero();
        for m in &other.terms {
            acc = acc.add_ord(&self.mul_monomial(m));
        }
        if other.tail > 0 {
            acc = acc.add_ord(&self.mul_natural(other.tail));
        }
        acc
    }

    /// `self * (aleph_k^e * c)` for `self >= 1`. The left factor collapses to
    /// its leading monomial: everything below it is absorbed by the limit.
    fn mul_monomial(&self, m: &Monomial) -> Ordinal {
        debug_assert!(!self.is_zero());
        let base = match self.terms.first() {
            // self < aleph_k, so self * aleph_k^e = aleph_k^e.
            None => Monomial {
                level: m.level,
                exp: m.exp,
                coeff: Ordinal::one(),
            },
            Some(h) if h.level < m.level => Monomial {
                level: m.level,
                exp: m.exp,
                coeff: Ordinal::one(),
            },
            // Same level: exponents add, the head coefficient is absorbed.
            Some(h) if h.level == m.level => Monomial {
                level: m.level,
                exp: h.exp.saturating_add(m.exp),
                coeff: Ordinal::one(),
            },
            // Higher level: aleph_k^e moves into the coefficient.
            Some(h) => {
                let aleph_pow = Ordinal::single(m.level, m.exp, Ordinal::one());
                Monomial {
                    level: h.level,
                    exp: h.exp,
                    coeff: h.coeff.mul_ord(&aleph_pow),
                }
            }
        };
        let coeff = if m.coeff == Ordinal::one() {
            base.coeff
        } else {
            base.coeff.mul_ord(&m.coeff)
        };
        Ordinal::single(base.level, base.exp, coeff)
    }

    /// `self * n` for a natural `n >= 1`: the leading coefficient scales and
    /// the remainder of the normal form survives once at the end.
    fn mul_natural(&self, n: u64) -> Ordinal {
        debug_assert!(n >= 1);
        match self.terms.first() {
            None => Ordinal::finite(self.tail.saturating_mul(n)),
            Some(h) => {
                let mut terms = self.terms.clone();
                terms[0] = Monomial {
                    level: h.level,
                    exp: h.exp,
                    coeff: h.coeff.mul_ord(&Ordinal::finite(n)),
                };
                Ordinal {
                    terms,
                    tail: self.tail,
                }
            }
        }
    }

    /// Finite power by iterated multiplication; `a^0 = 1`.
    pub fn pow(&self, n: u32) -> Ordinal {
        let mut acc = Ordinal::one();
        for _ in 0..n {
            acc = acc.mul_ord(self);
        }
        acc
    }

    /// Decompose `self = aleph_level^gamma * zeta + eta` with
    /// `1 <= zeta < aleph_level` and `eta < aleph_level^gamma`.
    ///
    /// Requires `self >= 1` and every level in `self` at most `level`; the
    /// exponent `gamma` is then finite and the decomposition is unique.
    pub fn divmod(&self, level: u8) -> Result<(u32, Ordinal, Ordinal), OrdinalError> {
        Cardinal::aleph(level)?;
        if self.is_zero() {
            return Err(OrdinalError::ZeroArgument);
        }
        if let Some(found) = self.max_level() {
            if found > level {
                return Err(OrdinalError::UnsupportedLogarithm {
                    level_found: found,
                    base_level: level,
                });
            }
        }
        match self.terms.first() {
            Some(h) if h.level == level => {
                let eta = Ordinal {
                    terms: self.terms[1..].to_vec(),
                    tail: self.tail,
                };
                Ok((h.exp, h.coeff.clone(), eta))
            }
            // self < aleph_level: gamma = 0, zeta = self, eta = 0.
            _ => Ok((0, self.clone(), Ordinal::zero())),
        }
    }

    /// The ordinal logarithm base `aleph_level`: the `gamma` of [`Ordinal::divmod`].
    pub fn log(&self, level: u8) -> Result<u32, OrdinalError> {
        self.divmod(level).map(|(gamma, _, _)| gamma)
    }

    /// Compare the magnitude classes of `self` and `other` relative to
    /// `aleph_level`: same class when each is below the other times the aleph
    /// (zero is only in class with zero), otherwise ordered as the ordinals.
    pub fn class_cmp(&self, other: &Ordinal, level: u8) -> ClassOrder {
        let same = if self.is_zero() || other.is_zero() {
            self.is_zero() && other.is_zero()
        } else {
            let aleph = Ordinal::aleph_unchecked(level);
            *self < other.mul_ord(&aleph) && *other < self.mul_ord(&aleph)
        };
        if same {
            ClassOrder::Same
        } else if self < other {
            ClassOrder::Less
        } else {
            ClassOrder::Greater
        }
    }

    #[cfg(test)]
    fn is_canonical(&self) -> bool {
        let descending = self.terms.windows(2).all(|w| w[0].key() > w[1].key());
        let coeffs_ok = self.terms.iter().all(|m| {
            !m.coeff.is_zero()
                && m.coeff.max_level().is_none_or(|l| l < m.level)
                && m.coeff.is_canonical()
        });
        descending && coeffs_ok
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut lhs = self.terms.iter();
        let mut rhs = other.terms.iter();
        loop {
            match (lhs.next(), rhs.next()) {
                (None, None) => return self.tail.cmp(&other.tail),
                // Any monomial dominates a finite remainder.
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(a), Some(b)) => {
                    match a.key().cmp(&b.key()) {
                        Ordering::Equal => {}
                        ne => return ne,
                    }
                    match a.coeff.cmp(&b.coeff) {
                        Ordering::Equal => {}
                        ne => return ne,
                    }
                }
            }
        }
    }
}

impl Add for &Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: &Ordinal) -> Ordinal {
        self.add_ord(rhs)
    }
}

impl Add for Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: Ordinal) -> Ordinal {
        self.add_ord(&rhs)
    }
}

impl Mul for &Ordinal {
    type Output = Ordinal;
    fn mul(self, rhs: &Ordinal) -> Ordinal {
        self.mul_ord(rhs)
    }
}

impl Mul for Ordinal {
    type Output = Ordinal;
    fn mul(self, rhs: Ordinal) -> Ordinal {
        self.mul_ord(&rhs)
    }
}

/// A run of `multiplicity` consecutive addenda all equal to `value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub multiplicity: Cardinal,
    pub value: Ordinal,
}

impl Bundle {
    pub fn new(multiplicity: Cardinal, value: Ordinal) -> Bundle {
        debug_assert!(
            !multiplicity.is_zero(),
            "bundle multiplicity must be nonzero"
        );
        Bundle {
            multiplicity,
            value,
        }
    }
}

/// Ordered sum of a bundle family: each bundle contributes `value * multiplicity`
/// and the bundles are added left to right in declaration order.
pub fn transfinite_sum(bundles: &[Bundle]) -> Ordinal {
    bundles.iter().fold(Ordinal::zero(), |acc, b| {
        acc.add_ord(&b.value.mul_ord(&Ordinal::from_cardinal(b.multiplicity)))
    })
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if first {
                first = false;
                Ok(())
            } else {
                write!(f, " + ")
            }
        };
        for m in &self.terms {
            sep(f)?;
            write!(f, "aleph_{}", m.level)?;
            if m.exp > 1 {
                write!(f, "^{}", m.exp)?;
            }
            if m.coeff != Ordinal::one() {
                if m.coeff.terms.is_empty() {
                    write!(f, "*{}", m.coeff.tail)?;
                } else {
                    write!(f, "*({})", m.coeff)?;
                }
            }
        }
        if self.tail > 0 {
            sep(f)?;
            write!(f, "{}", self.tail)?;
        }
        Ok(())
    }
}

struct OrdParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> OrdParser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, OrdinalParseError> {
        Err(OrdinalParseError {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn natural(&mut self) -> Result<u64, OrdinalParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a natural number");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.error("natural number out of range"))
    }

    fn ordinal(&mut self) -> Result<Ordinal, OrdinalParseError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = &acc + &self.term()?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalParseError> {
        self.skip_ws();
        let base = if self.eat(b'w') {
            Ordinal::aleph(0).unwrap()
        } else if self.src[self.pos..].starts_with(b"aleph_") {
            self.pos += "aleph_".len();
            let index = self.natural()?;
            if index >= u8::MAX as u64 {
                return self.error("aleph index out of range");
            }
            match Ordinal::aleph(index as u8) {
                Ok(o) => o,
                Err(e) => return self.error(e.to_string()),
            }
        } else {
            return Ok(Ordinal::finite(self.natural()?));
        };
        let powered = if self.eat(b'^') {
            let exp = self.natural()?;
            if exp > u32::MAX as u64 {
                return self.error("exponent out of range");
            }
            base.pow(exp as u32)
        } else {
            base
        };
        if self.eat(b'*') {
            let coeff = self.coeff()?;
            if coeff.is_zero() {
                return self.error("coefficient must be nonzero");
            }
            Ok(&powered * &coeff)
        } else {
            Ok(powered)
        }
    }

    fn coeff(&mut self) -> Result<Ordinal, OrdinalParseError> {
        if self.eat(b'(') {
            let inner = self.ordinal()?;
            if !self.eat(b')') {
                return self.error("expected `)`");
            }
            Ok(inner)
        } else {
            Ok(Ordinal::finite(self.natural()?))
        }
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = OrdParser {
            src: s.as_bytes(),
            pos: 0,
        };
        let value = p.ordinal()?;
        p.skip_ws();
        if p.pos != s.len() {
            return p.error("unexpected trailing input");
        }
        Ok(value)
    }
}
