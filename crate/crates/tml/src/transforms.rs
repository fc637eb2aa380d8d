//! Model-to-model transforms: depth-bounded unravelling, equivalence
//! signatures, enumerative modal-equivalence checking, and compression of
//! tree models to finite aleph levels.
//!
//! Unravelling works on arbitrary models; the other transforms require the
//! region reachable from the given world to be a tree (unravel first
//! otherwise). Compression works against a base index handed down the
//! recursion (the grandchild index of the parent node) and assigns class
//! multiplicities in four steps: classes as large as the base aleph become
//! `aleph_n`, live classes as large as the grandchild cardinal `aleph_beta`
//! become `aleph_l`, classes matching an infinite successor cardinality
//! become `aleph_c`, and the rest collapse to a single copy, with `l`
//! shifted off `n` by how the base compares to `beta`. When the grandchild
//! population is finite there is no `beta`: base-sized classes still become
//! `aleph_n`, an infinite class spanning the whole successor set keeps an
//! infinite width at the recursion floor, and the rest keep their finite
//! multiplicities or collapse to one copy.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cardinal::{Cardinal, CardinalError};
use crate::checker::{self, CheckError};
use crate::logic::{enumerate_formulas, Formula};
use crate::model::{KripkeModel, ModelBuilder, ModelError};
use crate::ordinal::{Ordinal, OrdinalError};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error(
        "world `{world}` is reachable along two paths; transform requires a tree (unravel first)"
    )]
    NonTree { world: String },
    #[error("unknown world id `{id}`")]
    UnknownWorld { id: String },
    #[error("base index {given} is below the computed floor {floor}")]
    FloorViolation { given: u32, floor: u32 },
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Level(#[from] CardinalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn world_index(m: &KripkeModel, id: &str) -> Result<usize, TransformError> {
    m.world_index(id)
        .ok_or_else(|| TransformError::UnknownWorld { id: id.to_owned() })
}

/// Unravel `(m, start)` into the tree of bundle walks of length at most
/// `depth`. Each walk step follows one bundle and keeps its multiplicity;
/// the walk's valuation is its final world's. World ids are walk paths
/// (`start`, `start.0`, `start.0.1`, ...) over per-world bundle ordinals.
pub fn unravel(m: &KripkeModel, start: &str, depth: u32) -> Result<KripkeModel, TransformError> {
    let root = world_index(m, start)?;
    let mut b = ModelBuilder::new();
    for p in m.props() {
        b = b.prop(p.clone());
    }
    let root_id = start.to_owned();
    b = b.world(root_id.clone(), m.valuation(root).iter().cloned());
    let mut frontier = vec![(root_id.clone(), root, 0u32)];
    while let Some((walk_id, world, len)) = frontier.pop() {
        if len == depth {
            continue;
        }
        for (ordinal, edge) in m.outgoing(world).enumerate() {
            let child_id = format!("{walk_id}.{ordinal}");
            b = b.world(child_id.clone(), m.valuation(edge.to).iter().cloned());
            b = b.edge(walk_id.clone(), child_id.clone(), edge.multiplicity);
            frontier.push((child_id, edge.to, len + 1));
        }
    }
    Ok(b.root(root_id).build()?)
}

/// Check that the region reachable from `start` is a tree: every world there
/// has a single parent world and no cycles pass through it.
fn ensure_tree(m: &KripkeModel, start: usize) -> Result<(), TransformError> {
    let mut seen = vec![false; m.world_count()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(w) = stack.pop() {
        let mut child_of_w = vec![false; m.world_count()];
        for e in m.outgoing(w) {
            if seen[e.to] && !child_of_w[e.to] {
                return Err(TransformError::NonTree {
                    world: m.world_id(e.to).to_owned(),
                });
            }
            if !child_of_w[e.to] {
                child_of_w[e.to] = true;
                seen[e.to] = true;
                stack.push(e.to);
            }
        }
    }
    Ok(())
}

/// Depth-bounded equivalence signature: the valuation plus, per child
/// signature, the exact cardinal count of successors carrying it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub depth: u32,
    pub valuation: Vec<String>,
    pub children: BTreeMap<Signature, Cardinal>,
}

/// Bottom-up signature of `(m, start)` to the given depth; requires a tree.
pub fn signature(m: &KripkeModel, start: &str, depth: u32) -> Result<Signature, TransformError> {
    let root = world_index(m, start)?;
    ensure_tree(m, root)?;
    Ok(signature_at(m, root, depth))
}

fn signature_at(m: &KripkeModel, world: usize, depth: u32) -> Signature {
    let mut children = BTreeMap::new();
    if depth > 0 {
        for e in m.outgoing(world) {
            let child = signature_at(m, e.to, depth - 1);
            children
                .entry(child)
                .and_modify(|c: &mut Cardinal| *c = c.plus(e.multiplicity))
                .or_insert(e.multiplicity);
        }
    }
    Signature {
        depth,
        valuation: m.valuation(world).iter().cloned().collect(),
        children,
    }
}

/// Verdict of the enumerative modal-equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivVerdict {
    EquivUpToBound,
    NotEquiv { witness: Formula, clause: u8 },
}

impl fmt::Display for EquivVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivVerdict::EquivUpToBound => write!(f, "equivalent up to bound"),
            EquivVerdict::NotEquiv { witness, clause } => {
                write!(f, "not equivalent; witness {witness} (clause {clause})")
            }
        }
    }
}

/// Enumerative check of depth-`k` modal equivalence between two pointed
/// models, over all formulas with degree at most `k` and size at most
/// `size_bound`.
///
/// Clause 1 demands agreement on every enumerated formula. Clause 2 inspects
/// each formula of degree below `k`: either no successor on both sides
/// satisfies it, or the successor counts have equal ordinal logarithms with
/// respect to `aleph_alpha` on the left and `aleph_beta` on the right.
pub fn modal_equiv_enum(
    a: (&KripkeModel, &str),
    b: (&KripkeModel, &str),
    k: u32,
    alpha: u8,
    beta: u8,
    size_bound: usize,
) -> Result<EquivVerdict, TransformError> {
    let (ma, sa) = a;
    let (mb, sb) = b;
    let wa = world_index(ma, sa)?;
    let wb = world_index(mb, sb)?;
    let mut props: Vec<String> = ma.props().to_vec();
    props.extend(mb.props().iter().cloned());
    props.sort();
    props.dedup();

    for f in enumerate_formulas(&props, k, size_bound) {
        let va = checker::evaluate(ma, &f)?;
        let vb = checker::evaluate(mb, &f)?;
        if va.truth[wa] != vb.truth[wb] {
            return Ok(EquivVerdict::NotEquiv {
                witness: f,
                clause: 1,
            });
        }
    }
    if k == 0 {
        return Ok(EquivVerdict::EquivUpToBound);
    }
    for f in enumerate_formulas(&props, k - 1, size_bound) {
        let ta = checker::eval_all(ma, &f)?;
        let tb = checker::eval_all(mb, &f)?;
        let count = |m: &KripkeModel, w: usize, t: &[bool]| {
            Cardinal::sum(m.outgoing(w).filter(|e| t[e.to]).map(|e| e.multiplicity))
        };
        let ca = count(ma, wa, &ta);
        let cb = count(mb, wb, &tb);
        let ok = match (ca.is_zero(), cb.is_zero()) {
            (true, true) => true,
            (false, false) => {
                Ordinal::from_cardinal(ca).log(alpha)? == Ordinal::from_cardinal(cb).log(beta)?
            }
            _ => false,
        };
        if !ok {
            return Ok(EquivVerdict::NotEquiv {
                witness: f,
                clause: 2,
            });
        }
    }
    Ok(EquivVerdict::EquivUpToBound)
}

/// Conservative lower bound for the compression base index: leaves need 0,
/// every internal level adds 3.
pub fn min_base_index(m: &KripkeModel, start: &str, k: u32) -> Result<u32, TransformError> {
    let root = world_index(m, start)?;
    ensure_tree(m, root)?;
    Ok(floor_at(m, root, k))
}

fn floor_at(m: &KripkeModel, world: usize, k: u32) -> u32 {
    if k == 0 || !m.is_live(world) {
        return 0;
    }
    let classes = child_classes(m, world, k - 1);
    classes
        .values()
        .map(|c| floor_at(m, c.representative, k - 1))
        .max()
        .unwrap_or(0)
        + 3
}

struct ChildClass {
    representative: usize,
    cardinality: Cardinal,
    members: Vec<usize>,
}

/// Partition a world's child bundles by the depth-`depth` signature of their
/// targets; deterministic by signature order.
fn child_classes(m: &KripkeModel, world: usize, depth: u32) -> BTreeMap<Signature, ChildClass> {
    let mut classes: BTreeMap<Signature, ChildClass> = BTreeMap::new();
    for e in m.outgoing(world) {
        let sig = signature_at(m, e.to, depth);
        classes
            .entry(sig)
            .and_modify(|c| {
                c.cardinality = c.cardinality.plus(e.multiplicity);
                c.members.push(e.to);
            })
            .or_insert(ChildClass {
                representative: e.to,
                cardinality: e.multiplicity,
                members: vec![e.to],
            });
    }
    classes
}

/// Which assignment step fixed a class's multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignmentStep {
    AlphaLarge,
    BetaLarge,
    FullWidth,
    SingleCopy,
    FiniteCapped,
}

#[derive(Debug, Clone)]
pub struct ClassAssignment {
    pub original_representative: String,
    pub compressed_root: String,
    pub cardinality: Cardinal,
    pub assigned: Cardinal,
    pub step: AssignmentStep,
    pub member_count: usize,
}

/// Side report of one compression node: the indices and parameters chosen
/// and the per-class multiplicity assignment.
#[derive(Debug, Clone)]
pub struct CompressionPlan {
    pub original_world: String,
    pub compressed_world: String,
    pub alpha: u8,
    pub beta: Option<u8>,
    pub n: u32,
    pub l: Option<u32>,
    pub c: Option<u32>,
    pub floor: u32,
    pub classes: Vec<ClassAssignment>,
    pub children: Vec<CompressionPlan>,
}

impl CompressionPlan {
    /// Total number of signature classes across all nodes of the plan.
    pub fn total_classes(&self) -> usize {
        self.classes.len()
            + self
                .children
                .iter()
                .map(CompressionPlan::total_classes)
                .sum::<usize>()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        out.push_str(&format!(
            "{pad}{} -> {} (alpha={} beta={} n={} l={} c={} floor={})\n",
            self.original_world,
            self.compressed_world,
            self.alpha,
            self.beta.map_or("-".to_owned(), |b| b.to_string()),
            self.n,
            self.l.map_or("-".to_owned(), |l| l.to_string()),
            self.c.map_or("-".to_owned(), |c| c.to_string()),
            self.floor,
        ));
        for class in &self.classes {
            out.push_str(&format!(
                "{pad}  class rep {} ({} members, cardinality {}) -> {} x {} [{:?}]\n",
                class.original_representative,
                class.member_count,
                class.cardinality,
                class.compressed_root,
                class.assigned,
                class.step,
            ));
        }
        for child in &self.children {
            child.render_into(out, indent + 1);
        }
    }
}

struct CompressState {
    props: Vec<String>,
    worlds: Vec<(String, Vec<String>)>,
    edges: Vec<(String, String, Cardinal)>,
    counter: usize,
}

impl CompressState {
    fn fresh_world(&mut self, valuation: Vec<String>) -> String {
        let id = format!("n{}", self.counter);
        self.counter += 1;
        self.worlds.push((id.clone(), valuation));
        id
    }
}

/// Compress a tree pointed model of depth at most `k` so that every aleph
/// index in the result is finite, preserving all formulas of degree at most
/// `k`. Requires `n` at least [`min_base_index`].
pub fn compress(
    m: &KripkeModel,
    start: &str,
    k: u32,
    n: u32,
) -> Result<(KripkeModel, CompressionPlan), TransformError> {
    let root = world_index(m, start)?;
    ensure_tree(m, root)?;
    let floor = floor_at(m, root, k);
    if n < floor {
        return Err(TransformError::FloorViolation { given: n, floor });
    }
    let mut state = CompressState {
        props: m.props().to_vec(),
        worlds: Vec::new(),
        edges: Vec::new(),
        counter: 0,
    };
    // top-level log base: the index of the successor cardinality itself
    let base = m.successor_cardinality(root).aleph_index().unwrap_or(0);
    let plan = compress_node(m, root, k, n, base, &mut state)?;
    let mut b = ModelBuilder::new();
    for p in state.props {
        b = b.prop(p);
    }
    for (id, valuation) in state.worlds {
        b = b.world(id, valuation);
    }
    for (from, to, mult) in state.edges {
        b = b.edge(from, to, mult);
    }
    let compressed = b.root(plan.compressed_world.clone()).build()?;
    Ok((compressed, plan))
}

fn aleph_mult(index: u32) -> Result<Cardinal, TransformError> {
    let index: u8 = index
        .try_into()
        .map_err(|_| CardinalError::LevelOutOfRange {
            index: index as u64,
            max: crate::cardinal::MAX_LEVEL,
        })?;
    Ok(Cardinal::aleph(index)?)
}

fn compress_node(
    m: &KripkeModel,
    world: usize,
    k: u32,
    n: u32,
    base: u8,
    state: &mut CompressState,
) -> Result<CompressionPlan, TransformError> {
    let my_id = state.fresh_world(m.valuation(world).iter().cloned().collect());
    let kappa = m.successor_cardinality(world);
    let floor = floor_at(m, world, k);

    let mut plan = CompressionPlan {
        original_world: m.world_id(world).to_owned(),
        compressed_world: my_id.clone(),
        alpha: base,
        beta: None,
        n,
        l: None,
        c: None,
        floor,
        classes: Vec::new(),
        children: Vec::new(),
    };
    if k == 0 || !m.is_live(world) {
        return Ok(plan);
    }

    let classes = child_classes(m, world, k - 1);
    let grand_total = Cardinal::sum(
        m.outgoing(world)
            .filter(|e| m.is_live(e.to))
            .map(|e| e.multiplicity.times(m.successor_cardinality(e.to))),
    );

    let log_wrt = |card: Cardinal, base: u8| -> Result<u32, TransformError> {
        Ok(Ordinal::from_cardinal(card).log(base)?)
    };

    match grand_total {
        Cardinal::Aleph(beta) => {
            let l = if base < beta {
                n + 1
            } else if base == beta {
                n
            } else {
                n - 2
            };
            // the floor rule guarantees n >= 6 here, so l >= 4
            debug_assert!(n >= 3);
            let m0 = floor.saturating_sub(3);
            plan.beta = Some(beta);
            plan.l = Some(l);

            let mut assignments: Vec<(Signature, ChildClass, String, Option<AssignmentStep>)> =
                Vec::new();
            for (sig, class) in classes {
                // children must come out equivalent at base beta, scale l
                let child_plan = compress_node(m, class.representative, k - 1, l, beta, state)?;
                let child_root = child_plan.compressed_world.clone();
                plan.children.push(child_plan);
                assignments.push((sig, class, child_root, None));
            }

            // step 1: classes as large as the base aleph
            for entry in &mut assignments {
                if log_wrt(entry.1.cardinality, base)? == 1 {
                    entry.3 = Some(AssignmentStep::AlphaLarge);
                }
            }
            // step 2: remaining live classes as large as aleph_beta
            let mut c = m0;
            if k > 1 {
                let mut processed_any = false;
                let mut processed_full_width = false;
                for entry in &mut assignments {
                    if entry.3.is_none()
                        && m.is_live(entry.1.representative)
                        && log_wrt(entry.1.cardinality, beta)? == 1
                    {
                        entry.3 = Some(AssignmentStep::BetaLarge);
                        processed_any = true;
                        processed_full_width |= entry.1.cardinality == kappa;
                    }
                }
                if processed_any {
                    c = if processed_full_width { l } else { l + 1 };
                }
            }
            plan.c = Some(c);
            // step 3: remaining classes spanning an infinite successor set
            if kappa.is_infinite() {
                for entry in &mut assignments {
                    if entry.3.is_none() && entry.1.cardinality == kappa {
                        entry.3 = Some(AssignmentStep::FullWidth);
                    }
                }
            }
            // step 4: a single copy of everything else
            for (_, class, child_root, step) in assignments {
                let step = step.unwrap_or(AssignmentStep::SingleCopy);
                let assigned = match step {
                    AssignmentStep::AlphaLarge => aleph_mult(n)?,
                    AssignmentStep::BetaLarge => aleph_mult(l)?,
                    AssignmentStep::FullWidth => aleph_mult(c)?,
                    AssignmentStep::SingleCopy => Cardinal::ONE,
                    AssignmentStep::FiniteCapped => unreachable!("infinite branch"),
                };
                state
                    .edges
                    .push((my_id.clone(), child_root.clone(), assigned));
                plan.classes.push(ClassAssignment {
                    original_representative: m.world_id(class.representative).to_owned(),
                    compressed_root: child_root,
                    cardinality: class.cardinality,
                    assigned,
                    step,
                    member_count: class.members.len(),
                });
            }
        }
        Cardinal::Finite(_) => {
            // No grandchild cardinal, so no step 2. Live classes are finite
            // here; base-sized classes still become aleph_n, an infinite
            // class spanning kappa keeps an infinite width at the recursion
            // floor, and finite classes keep their multiplicity capped.
            let m0 = floor.saturating_sub(3);
            if kappa.is_infinite() {
                plan.c = Some(m0);
            }
            for (_, class) in classes {
                let child_plan = compress_node(m, class.representative, k - 1, n, 0, state)?;
                let child_root = child_plan.compressed_world.clone();
                plan.children.push(child_plan);
                let (assigned, step) = if log_wrt(class.cardinality, base)? == 1 {
                    (aleph_mult(n)?, AssignmentStep::AlphaLarge)
                } else if kappa.is_infinite() && class.cardinality == kappa {
                    (aleph_mult(m0)?, AssignmentStep::FullWidth)
                } else if class.cardinality.is_finite() {
                    // the aleph_n cap cannot bite a finite multiplicity
                    (class.cardinality, AssignmentStep::FiniteCapped)
                } else {
                    (Cardinal::ONE, AssignmentStep::SingleCopy)
                };
                state
                    .edges
                    .push((my_id.clone(), child_root.clone(), assigned));
                plan.classes.push(ClassAssignment {
                    original_representative: m.world_id(class.representative).to_owned(),
                    compressed_root: child_root,
                    cardinality: class.cardinality,
                    assigned,
                    step,
                    member_count: class.members.len(),
                });
            }
        }
    }
    Ok(plan)
}
