//! Brute-force verification engines kept deliberately independent of the
//! main arithmetic in [`crate::ordinal`].
//!
//! [`PolyOrdinal`] is a textbook base-omega Cantor normal form for ordinals
//! below `w^w`, stored as a flat exponent/coefficient list. Its algorithms are
//! written from the classical definitions and share no code with the
//! hierarchical representation, so a normalization bug in either side shows up
//! as disagreement. The [`laws`] submodule runs randomized law checks that
//! also cover the aleph levels the polynomial oracle cannot reach.

use std::fmt;

use thiserror::Error;

use crate::cardinal::Cardinal;
use crate::ordinal::{transfinite_sum, Bundle, Ordinal};

pub mod laws;

/// Exponents above this bound abort the oracle rather than silently wrap.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle exponent above configured bound {max}")]
    ExponentOverflow { max: u32 },
    #[error("oracle logarithm of zero is undefined")]
    ZeroArgument,
}

/// Ordinal below `w^w` as `sum of w^e * c` with strictly descending exponents
/// and positive coefficients; the exponent-zero term carries the finite part.
/// The derived ordering on the term lists is the ordinal order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct PolyOrdinal {
    terms: Vec<(u32, u64)>,
}

impl PolyOrdinal {
    pub fn zero() -> PolyOrdinal {
        PolyOrdinal::default()
    }

    pub fn finite(n: u64) -> PolyOrdinal {
        if n == 0 {
            PolyOrdinal::zero()
        } else {
            PolyOrdinal {
                terms: vec![(0, n)],
            }
        }
    }

    /// `w^exp * coeff`; zero coefficients give zero.
    pub fn omega_power(exp: u32, coeff: u64) -> PolyOrdinal {
        if coeff == 0 {
            PolyOrdinal::zero()
        } else {
            PolyOrdinal {
                terms: vec![(exp, coeff)],
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    fn lead(&self) -> Option<(u32, u64)> {
        self.terms.first().copied()
    }
}

/// Classical CNF addition: the left operand keeps only what dominates the
/// right operand's leading exponent, merging at the boundary.
pub fn poly_add(a: &PolyOrdinal, b: &PolyOrdinal) -> PolyOrdinal {
    let Some((be, bc)) = b.lead() else {
        return a.clone();
    };
    let keep = a.terms.iter().take_while(|(e, _)| *e > be).count();
    let mut terms = a.terms[..keep].to_vec();
    if a.terms.get(keep).map(|(e, _)| *e) == Some(be) {
        terms.push((be, a.terms[keep].1.saturating_add(bc)));
        terms.extend_from_slice(&b.terms[1..]);
    } else {
        terms.extend_from_slice(&b.terms);
    }
    PolyOrdinal { terms }
}

/// Classical CNF multiplication, distributing over the right operand: for a
/// limit term `w^e*c` only the left lead survives as `w^(lead+e)*c`, while a
/// finite term scales the lead coefficient and keeps the left remainder.
pub fn poly_mul(a: &PolyOrdinal, b: &PolyOrdinal) -> Result<PolyOrdinal, OracleError> {
    if a.is_zero() || b.is_zero() {
        return Ok(PolyOrdinal::zero());
    }
    let (ae, ac) = a.lead().expect("nonzero");
    let mut acc = PolyOrdinal::zero();
    for &(be, bc) in &b.terms {
        let part = if be > 0 {
            let exp = ae.checked_add(be).filter(|e| *e <= MAX_EXPONENT);
            let Some(exp) = exp else {
                return Err(OracleError::ExponentOverflow { max: MAX_EXPONENT });
            };
            PolyOrdinal {
                terms: vec![(exp, bc)],
            }
        } else {
            let mut terms = vec![(ae, ac.saturating_mul(bc))];
            terms.extend_from_slice(&a.terms[1..]);
            PolyOrdinal { terms }
        };
        acc = poly_add(&acc, &part);
    }
    Ok(acc)
}

/// Unique `a = (w^base_exp)^gamma * zeta + eta` with `1 <= zeta < w^base_exp`
/// and `eta < w^(base_exp * gamma)`; requires `a >= 1` and `base_exp >= 1`.
pub fn poly_divmod(
    a: &PolyOrdinal,
    base_exp: u32,
) -> Result<(u32, PolyOrdinal, PolyOrdinal), OracleError> {
    assert!(base_exp >= 1, "base must be at least w");
    let Some((lead, _)) = a.lead() else {
        return Err(OracleError::ZeroArgument);
    };
    let gamma = lead / base_exp;
    let cut = base_exp * gamma;
    let zeta_terms: Vec<(u32, u64)> = a
        .terms
        .iter()
        .take_while(|(e, _)| *e >= cut)
        .map(|(e, c)| (e - cut, *c))
        .collect();
    let eta_terms: Vec<(u32, u64)> = a.terms.iter().skip(zeta_terms.len()).copied().collect();
    Ok((
        gamma,
        PolyOrdinal { terms: zeta_terms },
        PolyOrdinal { terms: eta_terms },
    ))
}

/// Order type of a finite-multiplicity bundle family, computed by literally
/// concatenating the addenda with repeated [`poly_add`].
pub fn sum_order_type(bundles: &[(u64, PolyOrdinal)]) -> PolyOrdinal {
    let mut acc = PolyOrdinal::zero();
    for (multiplicity, value) in bundles {
        for _ in 0..*multiplicity {
            acc = poly_add(&acc, value);
        }
    }
    acc
}

/// View a level-0 [`Ordinal`] through the oracle representation; values with
/// higher levels are out of the oracle's range.
pub fn from_level0(o: &Ordinal) -> Option<PolyOrdinal> {
    if o.max_level().is_some_and(|l| l > 0) {
        return None;
    }
    let mut terms: Vec<(u32, u64)> = Vec::new();
    for (_, exp, coeff) in o.monomials() {
        // level-0 coefficients are finite by canonicity
        terms.push((exp, coeff.tail()));
    }
    if o.tail() > 0 {
        terms.push((0, o.tail()));
    }
    Some(PolyOrdinal { terms })
}

/// Rebuild an [`Ordinal`] from the oracle representation using only public
/// constructors and arithmetic of the main module.
pub fn to_ordinal(p: &PolyOrdinal) -> Ordinal {
    let omega = Ordinal::aleph(0).expect("level 0 is always valid");
    let mut acc = Ordinal::zero();
    for &(e, c) in &p.terms {
        acc = &acc + &(&omega.pow(e) * &Ordinal::finite(c));
    }
    acc
}

/// Oracle-side check of [`transfinite_sum`] on finite-multiplicity families.
pub fn sums_agree(bundles: &[(u64, PolyOrdinal)]) -> bool {
    let main: Vec<Bundle> = bundles
        .iter()
        .map(|(m, v)| Bundle::new(Cardinal::Finite(*m), to_ordinal(v)))
        .collect();
    from_level0(&transfinite_sum(&main)).as_ref() == Some(&sum_order_type(bundles))
}

impl fmt::Display for PolyOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "w*{c}")?,
                _ => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(e: u32, c: u64) -> PolyOrdinal {
        PolyOrdinal::omega_power(e, c)
    }

    #[test]
    fn textbook_addition() {
        // w*2 + 3 + w = w*3
        let lhs = poly_add(&poly_add(&w(1, 2), &w(0, 3)), &w(1, 1));
        assert_eq!(lhs, w(1, 3));
        // 1 + w = w
        assert_eq!(poly_add(&w(0, 1), &w(1, 1)), w(1, 1));
        // w + 1 = w + 1
        assert_eq!(poly_add(&w(1, 1), &w(0, 1)).terms(), &[(1, 1), (0, 1)]);
    }

    #[test]
    fn textbook_multiplication() {
        // (w + 1) * 2 = w*2 + 1
        let w_plus_1 = poly_add(&w(1, 1), &w(0, 1));
        let product = poly_mul(&w_plus_1, &w(0, 2)).unwrap();
        assert_eq!(product.terms(), &[(1, 2), (0, 1)]);
        // (w*2 + 3) * w = w^2
        let a = poly_add(&w(1, 2), &w(0, 3));
        assert_eq!(poly_mul(&a, &w(1, 1)).unwrap(), w(2, 1));
        // 2 * w = w
        assert_eq!(poly_mul(&w(0, 2), &w(1, 1)).unwrap(), w(1, 1));
    }

    #[test]
    fn textbook_divmod() {
        // w^2*3 + 5 = w^2 * 3 + 5
        let a = poly_add(&w(2, 3), &w(0, 5));
        let (gamma, zeta, eta) = poly_divmod(&a, 1).unwrap();
        assert_eq!(gamma, 2);
        assert_eq!(zeta, w(0, 3));
        assert_eq!(eta, w(0, 5));
        assert_eq!(
            poly_divmod(&PolyOrdinal::zero(), 1),
            Err(OracleError::ZeroArgument)
        );
    }

    #[test]
    fn order_type_concatenation() {
        assert_eq!(sum_order_type(&[(2, w(1, 1))]), w(1, 2));
        let w_plus_1 = poly_add(&w(1, 1), &w(0, 1));
        assert_eq!(sum_order_type(&[(1, w_plus_1), (1, w(1, 1))]), w(1, 2));
        assert_eq!(sum_order_type(&[(3, w(0, 2))]), w(0, 6));
        assert_eq!(sum_order_type(&[]), PolyOrdinal::zero());
    }

    #[test]
    fn exponent_bound() {
        let big = w(MAX_EXPONENT, 1);
        assert!(matches!(
            poly_mul(&big, &w(1, 1)),
            Err(OracleError::ExponentOverflow { .. })
        ));
    }

    #[test]
    fn order_is_the_ordinal_order() {
        let a = poly_add(&w(1, 3), &w(0, 5));
        let b = poly_add(&w(1, 3), &w(0, 4));
        assert!(a > b);
        assert!(w(2, 1) > poly_add(&w(1, 900), &w(0, 17)));
        assert!(PolyOrdinal::zero() < w(0, 1));
        assert!(w(1, 1) < poly_add(&w(1, 1), &w(0, 1)));
    }

    #[test]
    fn bridge_round_trip() {
        let p = poly_add(&poly_add(&w(3, 2), &w(1, 4)), &w(0, 9));
        assert_eq!(from_level0(&to_ordinal(&p)).unwrap(), p);
        let high: Ordinal = "aleph_1 + 1".parse().unwrap();
        assert_eq!(from_level0(&high), None);
    }
}
