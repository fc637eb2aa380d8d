//! Transfinite modal logic over finitely-described Kripke models.
//!
//! The library provides a symbolic ordinal-arithmetic engine
//! ([`ordinal`], with an independent verification [`oracle`]), the duplex
//! modal language ([`logic`]), cardinal-weighted Kripke models ([`model`]),
//! the two-route model checker ([`checker`]), model transforms
//! ([`transforms`]), and the built-in example models ([`catalog`]).

#![forbid(unsafe_code)]

pub mod cardinal;
pub mod catalog;
pub mod checker;
pub mod logic;
pub mod model;
pub mod oracle;
pub mod ordinal;
pub mod transforms;

pub use cardinal::{Cardinal, MAX_LEVEL};
pub use checker::{eval, eval_all, evaluate, RankTrace};
pub use logic::Formula;
pub use model::{KripkeModel, ModelBuilder};
pub use ordinal::{transfinite_sum, Bundle, ClassOrder, Ordinal};
