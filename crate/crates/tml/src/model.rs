//! Finite descriptions of possibly-infinite Kripke models.
//!
//! A model is a finite set of described worlds plus a sequence of edge
//! bundles. A bundle `(s, t, mult)` stands for `mult` pairwise-distinct
//! successors of `s`, each rooting its own copy of the submodel reachable
//! from `t`; since the copies are isomorphic they share `t`'s description and
//! evaluation reads `t` directly. The edge array order is the canonical
//! enumeration order used wherever the semantics needs one; all checker
//! verdicts are invariant under reordering.
//!
//! Wire format (UTF-8 JSON, field order irrelevant, edge order significant):
//!
//! ```json
//! {
//!   "props": ["p"],
//!   "worlds": [{"id": "s", "props": []}, {"id": "t", "props": ["p"]}],
//!   "edges": [{"from": "s", "to": "t", "mult": "aleph_0"}],
//!   "root": "s"
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cardinal::Cardinal;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed model document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("model has no worlds")]
    NoWorlds,
    #[error("duplicate world id `{id}`")]
    DuplicateWorld { id: String },
    #[error("world `{id}` lists undeclared proposition `{prop}`")]
    UndeclaredProp { id: String, prop: String },
    #[error("edge #{index} ({from} -> {to}): unknown world id `{id}`")]
    UnknownWorld {
        index: usize,
        from: String,
        to: String,
        id: String,
    },
    #[error("edge #{index} ({from} -> {to}): multiplicity must be nonzero")]
    ZeroMultiplicity {
        index: usize,
        from: String,
        to: String,
    },
    #[error("edge #{index} ({from} -> {to}): {source}")]
    BadMultiplicity {
        index: usize,
        from: String,
        to: String,
        #[source]
        source: crate::cardinal::CardinalError,
    },
    #[error("designated root `{id}` is not a declared world")]
    UnknownRoot { id: String },
}

/// Serde mirror of the wire format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub props: Vec<String>,
    pub worlds: Vec<WorldDocument>,
    pub edges: Vec<EdgeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct WorldDocument {
    pub id: String,
    pub props: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub from: String,
    pub to: String,
    pub mult: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct World {
    id: String,
    valuation: BTreeSet<String>,
}

/// A multiplicity-weighted edge bundle between world indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeBundle {
    pub from: usize,
    pub to: usize,
    pub multiplicity: Cardinal,
}

/// A validated Kripke model. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    props: Vec<String>,
    worlds: Vec<World>,
    edges: Vec<EdgeBundle>,
    outgoing: Vec<Vec<usize>>,
    root: Option<usize>,
}

impl KripkeModel {
    pub fn from_document(text: &str) -> Result<KripkeModel, ModelError> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        KripkeModel::from_parts(doc)
    }

    pub fn from_parts(doc: ModelDocument) -> Result<KripkeModel, ModelError> {
        if doc.worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        let props = doc.props;
        let mut worlds = Vec::with_capacity(doc.worlds.len());
        let mut index = BTreeMap::new();
        for w in doc.worlds {
            if index.insert(w.id.clone(), worlds.len()).is_some() {
                return Err(ModelError::DuplicateWorld { id: w.id });
            }
            for p in &w.props {
                if !props.contains(p) {
                    return Err(ModelError::UndeclaredProp {
                        id: w.id.clone(),
                        prop: p.clone(),
                    });
                }
            }
            worlds.push(World {
                id: w.id,
                valuation: w.props.into_iter().collect(),
            });
        }
        let mut edges = Vec::with_capacity(doc.edges.len());
        let mut outgoing = vec![Vec::new(); worlds.len()];
        for (i, e) in doc.edges.into_iter().enumerate() {
            let resolve = |id: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| ModelError::UnknownWorld {
                        index: i,
                        from: e.from.clone(),
                        to: e.to.clone(),
                        id: id.to_owned(),
                    })
            };
            let from = resolve(&e.from)?;
            let to = resolve(&e.to)?;
            let multiplicity: Cardinal =
                e.mult
                    .parse()
                    .map_err(|source| ModelError::BadMultiplicity {
                        index: i,
                        from: e.from.clone(),
                        to: e.to.clone(),
                        source,
                    })?;
            if multiplicity.is_zero() {
                return Err(ModelError::ZeroMultiplicity {
                    index: i,
                    from: e.from,
                    to: e.to,
                });
            }
            outgoing[from].push(edges.len());
            edges.push(EdgeBundle {
                from,
                to,
                multiplicity,
            });
        }
        let root = match doc.root {
            None => None,
            Some(id) => Some(
                index
                    .get(&id)
                    .copied()
                    .ok_or(ModelError::UnknownRoot { id })?,
            ),
        };
        Ok(KripkeModel {
            props,
            worlds,
            edges,
            outgoing,
            root,
        })
    }

    pub fn document(&self) -> ModelDocument {
        ModelDocument {
            props: self.props.clone(),
            worlds: self
                .worlds
                .iter()
                .map(|w| WorldDocument {
                    id: w.id.clone(),
                    props: w.valuation.iter().cloned().collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    from: self.worlds[e.from].id.clone(),
                    to: self.worlds[e.to].id.clone(),
                    mult: e.multiplicity.to_string(),
                })
                .collect(),
            root: self.root.map(|r| self.worlds[r].id.clone()),
        }
    }

    /// Pretty-printed wire document; `from_document` of the result rebuilds
    /// a structurally equal model.
    pub fn to_document(&self) -> String {
        serde_json::to_string_pretty(&self.document()).expect("document serializes")
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn world_ids(&self) -> impl Iterator<Item = &str> {
        self.worlds.iter().map(|w| w.id.as_str())
    }

    pub fn world_id(&self, index: usize) -> &str {
        &self.worlds[index].id
    }

    pub fn world_index(&self, id: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w.id == id)
    }

    pub fn valuation(&self, index: usize) -> &BTreeSet<String> {
        &self.worlds[index].valuation
    }

    pub fn satisfies_prop(&self, index: usize, prop: &str) -> bool {
        self.worlds[index].valuation.contains(prop)
    }

    pub fn edges(&self) -> &[EdgeBundle] {
        &self.edges
    }

    /// Outgoing bundles of a world in canonical (edge array) order.
    pub fn outgoing(&self, world: usize) -> impl Iterator<Item = &EdgeBundle> {
        self.outgoing[world].iter().map(|i| &self.edges[*i])
    }

    /// A world is live when it has at least one successor.
    pub fn is_live(&self, world: usize) -> bool {
        !self.outgoing[world].is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// Successor cardinality: the cardinal sum of all outgoing multiplicities.
    pub fn successor_cardinality(&self, world: usize) -> Cardinal {
        Cardinal::sum(self.outgoing(world).map(|e| e.multiplicity))
    }

    /// Live successor cardinality: only bundles whose target is itself live.
    pub fn live_successor_cardinality(&self, world: usize) -> Cardinal {
        Cardinal::sum(
            self.outgoing(world)
                .filter(|e| self.is_live(e.to))
                .map(|e| e.multiplicity),
        )
    }

    /// The same model with the edge array reordered by `perm` (a permutation
    /// of edge indices). Verdict invariance under this is a checked property.
    pub fn with_permuted_edges(&self, perm: &[usize]) -> KripkeModel {
        assert_eq!(perm.len(), self.edges.len());
        let edges: Vec<EdgeBundle> = perm.iter().map(|i| self.edges[*i]).collect();
        let mut outgoing = vec![Vec::new(); self.worlds.len()];
        for (i, e) in edges.iter().enumerate() {
            outgoing[e.from].push(i);
        }
        KripkeModel {
            props: self.props.clone(),
            worlds: self.worlds.clone(),
            edges,
            outgoing,
            root: self.root,
        }
    }
}

/// Convenience constructor for models assembled in code; validation is the
/// same as for loaded documents.
#[derive(Debug, Clone, Default)]
pub struct ModelBuilder {
    props: Vec<String>,
    worlds: Vec<WorldDocument>,
    edges: Vec<EdgeDocument>,
    root: Option<String>,
}

impl ModelBuilder {
    pub fn new() -> ModelBuilder {
        ModelBuilder::default()
    }

    pub fn prop(mut self, name: impl Into<String>) -> Self {
        self.props.push(name.into());
        self
    }

    pub fn world<I, S>(mut self, id: impl Into<String>, props: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.worlds.push(WorldDocument {
            id: id.into(),
            props: props.into_iter().map(Into::into).collect(),
        });
        self
    }

    pub fn edge(mut self, from: impl Into<String>, to: impl Into<String>, mult: Cardinal) -> Self {
        self.edges.push(EdgeDocument {
            from: from.into(),
            to: to.into(),
            mult: mult.to_string(),
        });
        self
    }

    pub fn root(mut self, id: impl Into<String>) -> Self {
        self.root = Some(id.into());
        self
    }

    pub fn build(self) -> Result<KripkeModel, ModelError> {
        KripkeModel::from_parts(ModelDocument {
            props: self.props,
            worlds: self.worlds,
            edges: self.edges,
            root: self.root,
        })
    }
}
