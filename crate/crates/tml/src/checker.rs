//! Formula evaluation over pointed models.
//!
//! `[]phi` at a world with infinitely many successors holds when the
//! successors satisfying `phi` strictly outnumber (in cardinality) those
//! falsifying it; at finitely-branching worlds it is the classical universal
//! quantifier. `[2]phi` looks two steps deep: dead successors are discarded,
//! and when the grandchild population is infinite of size `aleph_zeta` the
//! verdict compares the magnitude classes of the ordered grandchild sums for
//! `phi` and `~phi` relative to `aleph_zeta`.
//!
//! Two routes compute every `[2]` verdict: a rank shortcut working purely on
//! cardinals, and a reference path that builds the ordered sums with
//! [`transfinite_sum`] over the canonical bundle order and compares magnitude
//! classes. Both are recorded in the [`RankTrace`] and must agree; the rank
//! equals the ordinal logarithm of the corresponding sum, and is `-1` only
//! for the empty sum.

use std::collections::HashMap;

use thiserror::Error;

use crate::cardinal::Cardinal;
use crate::logic::Formula;
use crate::model::KripkeModel;
use crate::ordinal::{transfinite_sum, Bundle, ClassOrder, Ordinal};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("formula uses proposition `{prop}` not declared by the model")]
    UndeclaredProposition { prop: String },
    #[error("unknown world id `{id}`")]
    UnknownWorld { id: String },
}

/// Which branch of the duplex semantics decided a `[2]` evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxBoxBranch {
    /// Grandchild population `aleph_zeta`: verdict by rank comparison.
    /// Ranks live in `{-1, 0, 1, 2}`; `-1` encodes the class of zero.
    Infinite {
        zeta: u8,
        rank_pos: i8,
        rank_neg: i8,
    },
    /// Finite grandchild population: universal quantification, vacuously
    /// true when there are no grandchildren.
    FiniteFallback,
}

/// Per-evaluation record of one `[2]` node at one world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTrace {
    pub world: String,
    /// Rendering of the `[2]` subformula this trace belongs to.
    pub formula: String,
    pub kappa: Cardinal,
    pub lambda: Cardinal,
    /// Cardinality of the grandchild population (`|Sum h|`).
    pub grand_total: Cardinal,
    /// Ordered sums over live bundles in canonical order.
    pub sum_h: Ordinal,
    pub sum_h_pos: Ordinal,
    pub sum_h_neg: Ordinal,
    pub branch: BoxBoxBranch,
    pub verdict: bool,
}

impl RankTrace {
    /// The reference-path verdict: magnitude-class comparison of the ordered
    /// sums. Meaningful only on the infinite branch.
    pub fn reference_verdict(&self) -> Option<bool> {
        match self.branch {
            BoxBoxBranch::Infinite { zeta, .. } => {
                Some(self.sum_h_pos.class_cmp(&self.sum_h_neg, zeta) == ClassOrder::Greater)
            }
            BoxBoxBranch::FiniteFallback => None,
        }
    }

    /// Human-readable multi-line dump for `--explain`.
    pub fn render(&self) -> String {
        let mut s = format!(
            "[2]-trace at {} for {}:\n  kappa={} lambda={} |Sum h|={}\n  Sum h  = {}\n  Sum h+ = {}\n  Sum h- = {}\n",
            self.world,
            self.formula,
            self.kappa,
            self.lambda,
            self.grand_total,
            self.sum_h,
            self.sum_h_pos,
            self.sum_h_neg,
        );
        match self.branch {
            BoxBoxBranch::Infinite {
                zeta,
                rank_pos,
                rank_neg,
            } => {
                s.push_str(&format!(
                    "  branch=infinite zeta={zeta} rank+={rank_pos} rank-={rank_neg} verdict={}\n",
                    self.verdict
                ));
            }
            BoxBoxBranch::FiniteFallback => {
                s.push_str(&format!(
                    "  branch=finite-fallback verdict={}\n",
                    self.verdict
                ));
            }
        }
        s
    }
}

/// A full evaluation of one formula over every world of a model.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Truth of the root formula per world, in model world order.
    pub truth: Vec<bool>,
    /// One trace per `[2]` subformula per world, in deterministic
    /// (subformula, world) order.
    pub traces: Vec<RankTrace>,
}

enum Node {
    Prop(String),
    Not(usize),
    And(usize, usize),
    Box(usize),
    BoxBox(usize),
}

struct Compiled {
    nodes: Vec<Node>,
    texts: Vec<String>,
}

/// Postorder compilation with structural sharing; children precede parents.
fn compile(m: &KripkeModel, f: &Formula) -> Result<Compiled, CheckError> {
    fn go<'f>(
        m: &KripkeModel,
        f: &'f Formula,
        nodes: &mut Vec<Node>,
        texts: &mut Vec<String>,
        memo: &mut HashMap<&'f Formula, usize>,
    ) -> Result<usize, CheckError> {
        if let Some(&i) = memo.get(f) {
            return Ok(i);
        }
        let node = match f {
            Formula::Prop(p) => {
                if !m.props().contains(p) {
                    return Err(CheckError::UndeclaredProposition { prop: p.clone() });
                }
                Node::Prop(p.clone())
            }
            Formula::Not(inner) => Node::Not(go(m, inner, nodes, texts, memo)?),
            Formula::And(a, b) => {
                Node::And(go(m, a, nodes, texts, memo)?, go(m, b, nodes, texts, memo)?)
            }
            Formula::Box(inner) => Node::Box(go(m, inner, nodes, texts, memo)?),
            Formula::BoxBox(inner) => Node::BoxBox(go(m, inner, nodes, texts, memo)?),
        };
        nodes.push(node);
        texts.push(f.to_string());
        memo.insert(f, nodes.len() - 1);
        Ok(nodes.len() - 1)
    }
    let mut nodes = Vec::new();
    let mut texts = Vec::new();
    go(m, f, &mut nodes, &mut texts, &mut HashMap::new())?;
    Ok(Compiled { nodes, texts })
}

/// Evaluate `f` at every world, collecting `[2]` traces.
pub fn evaluate(m: &KripkeModel, f: &Formula) -> Result<Evaluation, CheckError> {
    let compiled = compile(m, f)?;
    let worlds = m.world_count();
    let mut table: Vec<Vec<bool>> = Vec::with_capacity(compiled.nodes.len());
    let mut traces = Vec::new();
    for (i, node) in compiled.nodes.iter().enumerate() {
        let row = match node {
            Node::Prop(p) => (0..worlds).map(|w| m.satisfies_prop(w, p)).collect(),
            Node::Not(c) => {
                let child = &table[*c];
                (0..worlds).map(|w| !child[w]).collect()
            }
            Node::And(a, b) => {
                let (l, r) = (&table[*a], &table[*b]);
                (0..worlds).map(|w| l[w] && r[w]).collect()
            }
            Node::Box(c) => {
                let child = table[*c].clone();
                (0..worlds).map(|w| box_rule(m, w, &child)).collect()
            }
            Node::BoxBox(c) => {
                let child = table[*c].clone();
                (0..worlds)
                    .map(|w| {
                        let (verdict, trace) = boxbox_rule(m, w, &child, &compiled.texts[i]);
                        traces.push(trace);
                        verdict
                    })
                    .collect()
            }
        };
        table.push(row);
    }
    Ok(Evaluation {
        truth: table.pop().expect("at least one node"),
        traces,
    })
}

/// Truth of `f` at one world.
pub fn eval(m: &KripkeModel, world: &str, f: &Formula) -> Result<bool, CheckError> {
    let index = m
        .world_index(world)
        .ok_or_else(|| CheckError::UnknownWorld {
            id: world.to_owned(),
        })?;
    Ok(evaluate(m, f)?.truth[index])
}

/// Truth of `f` at every world, in model world order.
pub fn eval_all(m: &KripkeModel, f: &Formula) -> Result<Vec<bool>, CheckError> {
    Ok(evaluate(m, f)?.truth)
}

/// Truth of `[]operand` at one world.
pub fn box_sat(m: &KripkeModel, world: &str, operand: &Formula) -> Result<bool, CheckError> {
    let index = m
        .world_index(world)
        .ok_or_else(|| CheckError::UnknownWorld {
            id: world.to_owned(),
        })?;
    let child = eval_all(m, operand)?;
    Ok(box_rule(m, index, &child))
}

/// Truth of `[2]operand` at one world, with its trace.
pub fn boxbox_sat(
    m: &KripkeModel,
    world: &str,
    operand: &Formula,
) -> Result<(bool, RankTrace), CheckError> {
    let index = m
        .world_index(world)
        .ok_or_else(|| CheckError::UnknownWorld {
            id: world.to_owned(),
        })?;
    let child = eval_all(m, operand)?;
    let text = Formula::boxbox(operand.clone()).to_string();
    Ok(boxbox_rule(m, index, &child, &text))
}

fn box_rule(m: &KripkeModel, world: usize, child: &[bool]) -> bool {
    if m.successor_cardinality(world).is_infinite() {
        let count = |wanted: bool| {
            Cardinal::sum(
                m.outgoing(world)
                    .filter(|e| child[e.to] == wanted)
                    .map(|e| e.multiplicity),
            )
        };
        count(true) > count(false)
    } else {
        m.outgoing(world).all(|e| child[e.to])
    }
}

fn boxbox_rule(m: &KripkeModel, world: usize, child: &[bool], text: &str) -> (bool, RankTrace) {
    let live: Vec<_> = m.outgoing(world).filter(|e| m.is_live(e.to)).collect();

    // number of t's successors (dis)satisfying the operand, as a cardinal
    let count = |t: usize, wanted: bool| {
        Cardinal::sum(
            m.outgoing(t)
                .filter(|e| child[e.to] == wanted)
                .map(|e| e.multiplicity),
        )
    };

    let grand_total = Cardinal::sum(
        live.iter()
            .map(|e| e.multiplicity.times(m.successor_cardinality(e.to))),
    );
    let sums = |value: &dyn Fn(usize) -> Cardinal| {
        transfinite_sum(
            &live
                .iter()
                .map(|e| Bundle::new(e.multiplicity, Ordinal::from_cardinal(value(e.to))))
                .collect::<Vec<_>>(),
        )
    };
    let sum_h = sums(&|t| m.successor_cardinality(t));
    let sum_h_pos = sums(&|t| count(t, true));
    let sum_h_neg = sums(&|t| count(t, false));
    debug_assert_eq!(sum_h.cardinality(), grand_total);

    let (branch, verdict) = match grand_total {
        Cardinal::Finite(_) => {
            let verdict = live.iter().all(|e| m.outgoing(e.to).all(|g| child[g.to]));
            (BoxBoxBranch::FiniteFallback, verdict)
        }
        Cardinal::Aleph(zeta) => {
            let rank = |wanted: bool, sum: &Ordinal| {
                let card_sum = Cardinal::sum(
                    live.iter()
                        .map(|e| e.multiplicity.times(count(e.to, wanted))),
                );
                let heavy = Cardinal::sum(
                    live.iter()
                        .filter(|e| count(e.to, wanted) == Cardinal::Aleph(zeta))
                        .map(|e| e.multiplicity),
                );
                let rank = if card_sum.is_zero() {
                    -1
                } else if heavy == Cardinal::Aleph(zeta) {
                    2
                } else if card_sum == Cardinal::Aleph(zeta) {
                    1
                } else {
                    0
                };
                // the rank is exactly the ordinal logarithm of the ordered sum
                debug_assert_eq!(
                    rank,
                    if sum.is_zero() {
                        -1
                    } else {
                        sum.log(zeta).expect("levels bounded by zeta") as i8
                    }
                );
                rank
            };
            let rank_pos = rank(true, &sum_h_pos);
            let rank_neg = rank(false, &sum_h_neg);
            let verdict = rank_pos > rank_neg;
            debug_assert_eq!(
                verdict,
                sum_h_pos.class_cmp(&sum_h_neg, zeta) == ClassOrder::Greater,
                "rank path and reference path disagree at {}",
                m.world_id(world),
            );
            (
                BoxBoxBranch::Infinite {
                    zeta,
                    rank_pos,
                    rank_neg,
                },
                verdict,
            )
        }
    };

    let trace = RankTrace {
        world: m.world_id(world).to_owned(),
        formula: text.to_owned(),
        kappa: m.successor_cardinality(world),
        lambda: m.live_successor_cardinality(world),
        grand_total,
        sum_h,
        sum_h_pos,
        sum_h_neg,
        branch,
        verdict,
    };
    (verdict, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::model::ModelBuilder;

    fn parse(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn finite_branch_requires_all_successors() {
        let m = catalog::ex_fin();
        // t1, t2 satisfy p, so the universal []~p fails at the finite root
        assert!(!eval(&m, "s", &parse("[]~p")).unwrap());
        assert!(!eval(&m, "s", &parse("[]p")).unwrap());
        assert!(eval(&m, "s", &parse("~[]~p & ~[]p")).unwrap());
    }

    #[test]
    fn infinite_branch_compares_cardinalities() {
        let m = catalog::ex_sim();
        // aleph_0 p-successors against a single ~p one
        assert!(eval(&m, "s", &parse("[]p")).unwrap());
        assert!(box_sat(&m, "s", &parse("p")).unwrap());

        // equal infinite sides fail the strict comparison
        let tie = ModelBuilder::new()
            .prop("p")
            .world("s", Vec::<String>::new())
            .world("a", ["p"])
            .world("b", Vec::<String>::new())
            .edge("s", "a", Cardinal::Aleph(0))
            .edge("s", "b", Cardinal::Aleph(0))
            .build()
            .unwrap();
        assert!(!eval(&tie, "s", &parse("[]p")).unwrap());
    }

    #[test]
    fn dead_end_boxes_are_vacuous() {
        let m = ModelBuilder::new()
            .prop("p")
            .world("s", Vec::<String>::new())
            .build()
            .unwrap();
        assert!(eval(&m, "s", &Formula::box_(Formula::bottom("p"))).unwrap());
        assert!(eval(&m, "s", &parse("[2]p")).unwrap());
        assert!(eval(&m, "s", &Formula::top("p")).unwrap());
    }

    #[test]
    fn duplex_on_2to11() {
        let m = catalog::ex_2to11();
        let (verdict, trace) = boxbox_sat(&m, "s", &parse("p")).unwrap();
        assert!(verdict);
        // one dead-end evidence for ~p keeps its rank at 0, not -1
        assert_eq!(
            trace.branch,
            BoxBoxBranch::Infinite {
                zeta: 0,
                rank_pos: 1,
                rank_neg: 0
            }
        );
        assert_eq!(trace.lambda, Cardinal::Finite(2));
        assert!(eval(&m, "s", &parse("[2]p & ~[][]p")).unwrap());
    }

    #[test]
    fn duplex_on_11to2() {
        let m = catalog::ex_11to2();
        let (verdict, trace) = boxbox_sat(&m, "s", &parse("p")).unwrap();
        assert!(!verdict);
        assert_eq!(
            trace.branch,
            BoxBoxBranch::Infinite {
                zeta: 0,
                rank_pos: 1,
                rank_neg: 1
            }
        );
        assert!(eval(&m, "s", &parse("~[2]p & [][]p")).unwrap());
        assert!(eval(&m, "s", &parse("[]p")).unwrap());
    }

    #[test]
    fn duplex_on_fix() {
        let m = catalog::ex_fix();
        let (verdict, trace) = boxbox_sat(&m, "s", &parse("p")).unwrap();
        assert!(verdict);
        assert_eq!(
            trace.branch,
            BoxBoxBranch::Infinite {
                zeta: 0,
                rank_pos: 2,
                rank_neg: 1
            }
        );
        assert!(eval(&m, "s", &parse("[2]p & [][]p")).unwrap());
        // the ordered sums are visible in the trace
        assert_eq!(trace.sum_h_pos, "aleph_0^2".parse().unwrap());
        assert_eq!(trace.reference_verdict(), Some(true));
    }

    #[test]
    fn duplex_on_det_cases() {
        let cases = [
            (1u8, 0u8, "[2]~p", true),
            (0, 1, "[2]p", true),
            (1, 1, "~[2]~p & ~[2]p", true),
            (2, 0, "[2]~p", true),
        ];
        for (i, j, formula, expected) in cases {
            let m = catalog::ex_det(i, j, false).unwrap();
            assert_eq!(
                eval(&m, "s", &parse(formula)).unwrap(),
                expected,
                "ex_det({i},{j}) on {formula}"
            );
        }
        // prior belief: ~p is almost necessary
        let m = catalog::ex_det(1, 0, false).unwrap();
        assert!(eval(&m, "s", &parse("[]~p")).unwrap());
    }

    #[test]
    fn eval_all_matches_per_world_eval() {
        let m = catalog::ex_sim();
        let f = parse("p");
        let all = eval_all(&m, &f).unwrap();
        let expected: Vec<bool> = m.world_ids().map(|id| eval(&m, id, &f).unwrap()).collect();
        assert_eq!(all, expected);
        // p holds exactly on the aleph_0-bundle target
        let pos = m.world_index("t_pos").unwrap();
        for (i, v) in all.iter().enumerate() {
            assert_eq!(*v, i == pos);
        }
        // bottom is false everywhere
        assert!(eval_all(&m, &Formula::bottom("p"))
            .unwrap()
            .iter()
            .all(|v| !v));
    }

    #[test]
    fn undeclared_prop_is_an_error() {
        let m = catalog::ex_sim();
        assert!(matches!(
            eval(&m, "s", &parse("q")),
            Err(CheckError::UndeclaredProposition { .. })
        ));
        assert!(matches!(
            eval(&m, "ghost", &parse("p")),
            Err(CheckError::UnknownWorld { .. })
        ));
    }

    #[test]
    fn monotone_weakening_on_fixtures() {
        // if phi holds at every bundle target within two steps, both boxes hold
        for m in [catalog::ex_sim(), catalog::ex_fix(), catalog::ex_fin()] {
            let top = Formula::top("p");
            assert!(eval(&m, "s", &Formula::box_(top.clone())).unwrap());
            assert!(eval(&m, "s", &Formula::boxbox(top)).unwrap());
        }
    }

    #[test]
    fn monotone_weakening_randomized() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};

        let rng = &mut StdRng::seed_from_u64(0x3E);
        for _ in 0..80 {
            let worlds = rng.random_range(1..=4usize);
            let mut b = ModelBuilder::new().prop("p");
            for w in 0..worlds {
                let val: Vec<String> = if rng.random_bool(0.6) {
                    vec!["p".into()]
                } else {
                    Vec::new()
                };
                b = b.world(format!("w{w}"), val);
            }
            for w in 0..worlds {
                for _ in 0..rng.random_range(0..=2u32) {
                    let to = rng.random_range(0..worlds);
                    let mult = if rng.random_bool(0.4) {
                        Cardinal::Aleph(rng.random_range(0..=2))
                    } else {
                        Cardinal::Finite(rng.random_range(1..=3))
                    };
                    b = b.edge(format!("w{w}"), format!("w{to}"), mult);
                }
            }
            let m = b.build().unwrap();
            for f in crate::logic::enumerate_formulas(&["p".to_owned()], 1, 3) {
                let truth = eval_all(&m, &f).unwrap();
                let boxed = eval_all(&m, &Formula::box_(f.clone())).unwrap();
                let duplex = eval_all(&m, &Formula::boxbox(f.clone())).unwrap();
                for w in 0..worlds {
                    let all_two_step = m
                        .outgoing(w)
                        .all(|e| truth[e.to] && m.outgoing(e.to).all(|ee| truth[ee.to]));
                    if all_two_step {
                        assert!(boxed[w], "box fails despite universal {f} near w{w}");
                        assert!(duplex[w], "duplex fails despite universal {f} near w{w}");
                    }
                }
            }
        }
    }

    #[test]
    fn finite_models_match_classical_semantics() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};

        // independent classical recursion: both boxes are plain universal
        // quantifiers when every multiplicity is finite
        fn classical(m: &crate::model::KripkeModel, w: usize, f: &Formula) -> bool {
            match f {
                Formula::Prop(p) => m.satisfies_prop(w, p),
                Formula::Not(g) => !classical(m, w, g),
                Formula::And(a, b) => classical(m, w, a) && classical(m, w, b),
                Formula::Box(g) => m.outgoing(w).all(|e| classical(m, e.to, g)),
                Formula::BoxBox(g) => m
                    .outgoing(w)
                    .all(|e| m.outgoing(e.to).all(|ee| classical(m, ee.to, g))),
            }
        }

        let rng = &mut StdRng::seed_from_u64(0xF1);
        for _ in 0..60 {
            let worlds = rng.random_range(1..=4usize);
            let mut b = ModelBuilder::new().prop("p");
            for w in 0..worlds {
                let val: Vec<String> = if rng.random_bool(0.5) {
                    vec!["p".into()]
                } else {
                    Vec::new()
                };
                b = b.world(format!("w{w}"), val);
            }
            for w in 0..worlds {
                for _ in 0..rng.random_range(0..=2u32) {
                    let to = rng.random_range(0..worlds);
                    b = b.edge(
                        format!("w{w}"),
                        format!("w{to}"),
                        Cardinal::Finite(rng.random_range(1..=4)),
                    );
                }
            }
            let m = b.build().unwrap();
            for f in crate::logic::enumerate_formulas(&["p".to_owned()], 2, 4) {
                for (w, ours) in eval_all(&m, &f).unwrap().into_iter().enumerate() {
                    assert_eq!(
                        ours,
                        classical(&m, w, &f),
                        "finite-model disagreement on {f} at w{w}"
                    );
                }
            }
        }
    }

    #[test]
    fn public_values_are_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<crate::ordinal::Ordinal>();
        assert_send_sync::<crate::ordinal::Bundle>();
        assert_send_sync::<Cardinal>();
        assert_send_sync::<Formula>();
        assert_send_sync::<crate::model::KripkeModel>();
        assert_send_sync::<RankTrace>();
    }

    #[test]
    fn traces_cover_each_boxbox_world_pair() {
        let m = catalog::ex_2to11();
        let f = parse("[2]p & [2]~p");
        let evaluation = evaluate(&m, &f).unwrap();
        // two distinct [2] nodes, each evaluated at every world
        assert_eq!(evaluation.traces.len(), 2 * m.world_count());
        for t in &evaluation.traces {
            if let Some(reference) = t.reference_verdict() {
                assert_eq!(t.verdict, reference);
            }
        }
    }
}
