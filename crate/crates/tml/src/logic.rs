//! Formula AST for the duplex transfinite modal language, concrete syntax,
//! degree computation, and bounded enumeration.
//!
//! The core connectives are propositions, negation, conjunction, `[]` and the
//! duplex modality `[2]`; everything else desugars. Concrete syntax accepted
//! by [`Formula::parse`]:
//!
//! ```text
//! ~p & [](p | q) -> [2]p      # ~ ! for not, [] box, [2] duplex box, <> diamond
//! ```
//!
//! `->` is right-associative and binds looser than `|`, which binds looser
//! than `&`; `<->` is loosest. The printer emits core connectives only, so
//! `parse(print(f)) == f` exactly.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at position {pos}: {message}")]
pub struct FormulaParseError {
    pub pos: usize,
    pub message: String,
}

/// A formula of the duplex language. `Box` is the majority modality `[]`,
/// `BoxBox` the duplex modality `[2]` evaluated over grandchildren.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Prop(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    BoxBox(Box<Formula>),
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn box_(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn boxbox(f: Formula) -> Formula {
        Formula::BoxBox(Box::new(f))
    }

    // Derived connectives, desugared to the core.

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(a, Formula::not(b)))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn diamond(f: Formula) -> Formula {
        Formula::not(Formula::box_(Formula::not(f)))
    }

    /// `p & ~p` for a chosen proposition of the target model.
    pub fn bottom(p: impl Into<String>) -> Formula {
        let p = p.into();
        Formula::and(Formula::prop(p.clone()), Formula::not(Formula::prop(p)))
    }

    pub fn top(p: impl Into<String>) -> Formula {
        Formula::not(Formula::bottom(p))
    }

    /// Modal depth, with the duplex modality counting two steps.
    pub fn degree(&self) -> u32 {
        match self {
            Formula::Prop(_) => 0,
            Formula::Not(f) => f.degree(),
            Formula::And(a, b) => a.degree().max(b.degree()),
            Formula::Box(f) => f.degree() + 1,
            Formula::BoxBox(f) => f.degree() + 2,
        }
    }

    /// Node count of the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Prop(_) => 1,
            Formula::Not(f) | Formula::Box(f) | Formula::BoxBox(f) => 1 + f.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn parse(text: &str) -> Result<Formula, FormulaParseError> {
        let mut p = FormulaParser {
            src: text.as_bytes(),
            pos: 0,
        };
        let f = p.iff()?;
        p.skip_ws();
        if p.pos != text.len() {
            return p.error("unexpected trailing input");
        }
        Ok(f)
    }
}

struct FormulaParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> FormulaParser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, FormulaParseError> {
        Err(FormulaParseError {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn starts_with(&mut self, token: &[u8]) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(token)
    }

    fn consume(&mut self, token: &[u8]) -> bool {
        if self.starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, FormulaParseError> {
        let lhs = self.implication()?;
        if self.consume(b"<->") {
            let rhs = self.iff()?;
            Ok(Formula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn implication(&mut self) -> Result<Formula, FormulaParseError> {
        let lhs = self.disjunction()?;
        // `->` is right-associative
        if self.starts_with(b"->") {
            self.consume(b"->");
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaParseError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, FormulaParseError> {
        match self.peek() {
            Some(b'~') | Some(b'!') => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(b'[') => {
                self.pos += 1;
                let digits_start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                let digits = &self.src[digits_start..self.pos];
                if self.src.get(self.pos) != Some(&b']') {
                    return self.error("expected `]`");
                }
                self.pos += 1;
                match digits {
                    b"" => Ok(Formula::box_(self.unary()?)),
                    b"2" => Ok(Formula::boxbox(self.unary()?)),
                    b"1" => Ok(Formula::box_(self.unary()?)),
                    _ => {
                        self.pos = digits_start;
                        self.error("Box^n for n>=3 out of scope")
                    }
                }
            }
            Some(b'<') if self.starts_with(b"<>") => {
                self.pos += 2;
                Ok(Formula::diamond(self.unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.iff()?;
                if self.peek() != Some(b')') {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            _ => self.error("expected a formula"),
        }
    }

    fn ident(&mut self) -> Result<Formula, FormulaParseError> {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(Formula::prop(name))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_at(f: &mut fmt::Formatter<'_>, formula: &Formula, in_unary: bool) -> fmt::Result {
            match formula {
                Formula::Prop(name) => write!(f, "{name}"),
                Formula::Not(inner) => {
                    write!(f, "~")?;
                    write_at(f, inner, true)
                }
                Formula::Box(inner) => {
                    write!(f, "[]")?;
                    write_at(f, inner, true)
                }
                Formula::BoxBox(inner) => {
                    write!(f, "[2]")?;
                    write_at(f, inner, true)
                }
                Formula::And(a, b) => {
                    if in_unary {
                        write!(f, "(")?;
                    }
                    // left-associated chains print without parentheses
                    write_at(f, a, false)?;
                    write!(f, " & ")?;
                    write_at(f, b, matches!(**b, Formula::And(_, _)))?;
                    if in_unary {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        write_at(f, self, false)
    }
}

/// Deterministic enumeration of all core-connective formulas over `props`
/// with degree at most `max_degree` and size at most `max_size`, ordered by
/// size and construction; syntactically distinct by construction.
pub fn enumerate_formulas(props: &[String], max_degree: u32, max_size: usize) -> Vec<Formula> {
    let mut props: Vec<&String> = props.iter().collect();
    props.sort();
    props.dedup();

    let mut by_size: Vec<Vec<(Formula, u32)>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1] = props
            .iter()
            .map(|p| (Formula::prop(p.as_str()), 0))
            .collect();
    }
    for size in 2..=max_size {
        let mut layer = Vec::new();
        for (f, d) in &by_size[size - 1] {
            layer.push((Formula::not(f.clone()), *d));
            if *d < max_degree {
                layer.push((Formula::box_(f.clone()), d + 1));
            }
            if d + 2 <= max_degree {
                layer.push((Formula::boxbox(f.clone()), d + 2));
            }
        }
        for left_size in 1..=size.saturating_sub(2) {
            let right_size = size - 1 - left_size;
            for li in 0..by_size[left_size].len() {
                for ri in 0..by_size[right_size].len() {
                    let (l, dl) = &by_size[left_size][li];
                    let (r, dr) = &by_size[right_size][ri];
                    layer.push((Formula::and(l.clone(), r.clone()), (*dl).max(*dr)));
                }
            }
        }
        by_size[size] = layer;
    }
    by_size.into_iter().flatten().map(|(f, _)| f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p() -> Formula {
        Formula::prop("p")
    }

    #[test]
    fn parse_modalities() {
        assert_eq!(Formula::parse("[2] p").unwrap(), Formula::boxbox(p()));
        assert_eq!(
            Formula::parse("[][] p").unwrap(),
            Formula::box_(Formula::box_(p()))
        );
        // [2]p and [][]p are different formulas
        assert_ne!(
            Formula::parse("[2]p").unwrap(),
            Formula::parse("[][]p").unwrap()
        );
        assert_eq!(
            Formula::parse("~(p & [] q)").unwrap(),
            Formula::not(Formula::and(p(), Formula::box_(Formula::prop("q"))))
        );
        assert_eq!(Formula::parse("[1]p").unwrap(), Formula::box_(p()));
    }

    #[test]
    fn higher_boxes_are_rejected() {
        let err = Formula::parse("[3]p").unwrap_err();
        assert!(err.message.contains("out of scope"), "{err}");
        assert!(Formula::parse("[10]p").is_err());
    }

    #[test]
    fn parse_connectives_and_precedence() {
        assert_eq!(
            Formula::parse("p & q | r").unwrap(),
            Formula::or(Formula::and(p(), Formula::prop("q")), Formula::prop("r"))
        );
        assert_eq!(
            Formula::parse("p -> q -> r").unwrap(),
            Formula::implies(
                p(),
                Formula::implies(Formula::prop("q"), Formula::prop("r"))
            )
        );
        assert_eq!(
            Formula::parse("<>p").unwrap(),
            Formula::not(Formula::box_(Formula::not(p())))
        );
        assert_eq!(
            Formula::parse("p <-> q").unwrap(),
            Formula::iff(p(), Formula::prop("q"))
        );
        assert_eq!(Formula::parse("!p").unwrap(), Formula::not(p()));
        assert!(Formula::parse("p &").is_err());
        assert!(Formula::parse("(p").is_err());
        assert!(Formula::parse("").is_err());
    }

    #[test]
    fn degree_recursion() {
        assert_eq!(p().degree(), 0);
        assert_eq!(Formula::boxbox(p()).degree(), 2);
        // [](p & [2]p) has degree 3
        let f = Formula::box_(Formula::and(p(), Formula::boxbox(p())));
        assert_eq!(f.degree(), 3);
        assert_eq!(Formula::parse("~[]p").unwrap().degree(), 1);
    }

    #[test]
    fn enumeration_small_cases() {
        let props = vec!["p".to_owned()];
        assert_eq!(enumerate_formulas(&props, 0, 1), vec![p()]);
        assert_eq!(
            enumerate_formulas(&props, 0, 2),
            vec![p(), Formula::not(p())]
        );
        let with_box = enumerate_formulas(&props, 1, 2);
        assert!(with_box.contains(&Formula::box_(p())));
        assert!(!with_box.contains(&Formula::boxbox(p())));
    }

    #[test]
    fn enumeration_respects_bounds_and_is_unique() {
        let props = vec!["p".to_owned(), "q".to_owned()];
        let formulas = enumerate_formulas(&props, 2, 5);
        let mut seen = HashSet::new();
        for f in &formulas {
            assert!(f.degree() <= 2, "degree bound violated by {f}");
            assert!(f.size() <= 5, "size bound violated by {f}");
            assert!(seen.insert(f.clone()), "duplicate {f}");
        }
    }

    #[test]
    fn print_parse_round_trip_on_enumeration() {
        // degree bound high enough to make this the full size-6 enumeration
        let props = vec!["p".to_owned(), "q".to_owned()];
        for f in enumerate_formulas(&props, 10, 6) {
            let printed = f.to_string();
            let reparsed = Formula::parse(&printed)
                .unwrap_or_else(|e| panic!("failed to reparse `{printed}`: {e}"));
            assert_eq!(reparsed, f, "round trip changed `{printed}`");
        }
    }

    #[test]
    fn derived_connectives_desugar() {
        assert_eq!(Formula::top("p").degree(), 0,);
        assert_eq!(
            Formula::or(p(), Formula::prop("q")),
            Formula::parse("p | q").unwrap()
        );
        assert_eq!(Formula::diamond(p()), Formula::parse("<>p").unwrap());
    }
}
