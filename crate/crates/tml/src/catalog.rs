//! Built-in example models, each a generator of a wire-format document.
//!
//! The fixtures are small evidence trees: a root `s`, a layer of hypothesis
//! worlds, and a layer of evidence worlds, with infinite bundles standing for
//! "that many identical copies". `ex_inf`/`ex_11to2` name the same model, as
//! do `ex_flaw`/`ex_fix` (the flawed reading and its repair share the model).

use thiserror::Error;

use crate::cardinal::{Cardinal, CardinalError};
use crate::model::{KripkeModel, ModelBuilder, ModelError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("fixture `ex_det` needs two aleph indices, e.g. `ex_det(1,0)`")]
    DetArguments,
    #[error(transparent)]
    Level(#[from] CardinalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Names accepted by [`resolve`]; `ex_det` takes its indices inline.
pub fn names() -> &'static [&'static str] {
    &[
        "ex_fin",
        "ex_sim",
        "ex_inf",
        "ex_11to2",
        "ex_2to11",
        "ex_flaw",
        "ex_fix",
        "ex_det(i,j)",
    ]
}

/// Look a fixture up by name, e.g. `ex_sim` or `ex_det(1,0)`. Returns
/// `Ok(None)` for names outside the catalog.
pub fn resolve(spec: &str, extended: bool) -> Result<Option<KripkeModel>, CatalogError> {
    let model = match spec {
        "ex_fin" => Some(ex_fin()),
        "ex_sim" => Some(ex_sim()),
        "ex_inf" => Some(ex_inf()),
        "ex_11to2" => Some(ex_11to2()),
        "ex_2to11" => Some(ex_2to11()),
        "ex_flaw" => Some(ex_flaw()),
        "ex_fix" => Some(ex_fix()),
        "ex_det" => return Err(CatalogError::DetArguments),
        _ => {
            if let Some(args) = spec
                .strip_prefix("ex_det(")
                .and_then(|s| s.strip_suffix(')'))
            {
                let mut parts = args.split(',').map(str::trim);
                let (i, j) = (parts.next(), parts.next());
                if parts.next().is_some() {
                    return Err(CatalogError::DetArguments);
                }
                let parse = |t: Option<&str>| {
                    t.and_then(|v| v.parse::<u8>().ok())
                        .ok_or(CatalogError::DetArguments)
                };
                Some(ex_det(parse(i)?, parse(j)?, extended)?)
            } else {
                None
            }
        }
    };
    Ok(model)
}

fn aleph(k: u8) -> Cardinal {
    Cardinal::Aleph(k)
}

/// Three hypotheses with finite evidence: two `p`-worlds with one supporting
/// leaf each, one `~p`-world with four. Exercises the finite branch.
pub fn ex_fin() -> KripkeModel {
    ModelBuilder::new()
        .prop("p")
        .world("s", Vec::<String>::new())
        .world("t0", Vec::<String>::new())
        .world("t1", ["p"])
        .world("t2", ["p"])
        .world("u0", Vec::<String>::new())
        .world("u1", ["p"])
        .world("u2", ["p"])
        .edge("s", "t0", Cardinal::Finite(1))
        .edge("s", "t1", Cardinal::Finite(1))
        .edge("s", "t2", Cardinal::Finite(1))
        .edge("t0", "u0", Cardinal::Finite(4))
        .edge("t1", "u1", Cardinal::Finite(1))
        .edge("t2", "u2", Cardinal::Finite(1))
        .root("s")
        .build()
        .expect("fixture is valid")
}

/// One `~p` successor against `aleph_0` many `p` successors.
pub fn ex_sim() -> KripkeModel {
    ModelBuilder::new()
        .prop("p")
        .world("s", Vec::<String>::new())
        .world("t_neg", Vec::<String>::new())
        .world("t_pos", ["p"])
        .edge("s", "t_neg", Cardinal::Finite(1))
        .edge("s", "t_pos", aleph(0))
        .root("s")
        .build()
        .expect("fixture is valid")
}

/// The lone `~p` hypothesis gathers `aleph_0` evidence while each of the
/// `aleph_0` many `p` hypotheses gets a single supporting leaf.
pub fn ex_inf() -> KripkeModel {
    ModelBuilder::new()
        .prop("p")
        .world("s", Vec::<String>::new())
        .world("t0", Vec::<String>::new())
        .world("tp", ["p"])
        .world("u0", Vec::<String>::new())
        .world("up", ["p"])
        .edge("s", "t0", Cardinal::Finite(1))
        .edge("s", "tp", aleph(0))
        .edge("t0", "u0", aleph(0))
        .edge("tp", "up", Cardinal::Finite(1))
        .root("s")
        .build()
        .expect("fixture is valid")
}

/// Same model as [`ex_inf`], under the name used when contrasting `[][]`
/// against `[2]`.
pub fn ex_11to2() -> KripkeModel {
    ex_inf()
}

/// Two finite hypotheses; one is then backed by `aleph_0` new `p` evidence.
pub fn ex_2to11() -> KripkeModel {
    ModelBuilder::new()
        .prop("p")
        .world("s", Vec::<String>::new())
        .world("t0", Vec::<String>::new())
        .world("t1", Vec::<String>::new())
        .world("u0", Vec::<String>::new())
        .world("u1", ["p"])
        .edge("s", "t0", Cardinal::Finite(1))
        .edge("s", "t1", Cardinal::Finite(1))
        .edge("t0", "u0", Cardinal::Finite(1))
        .edge("t1", "u1", aleph(0))
        .root("s")
        .build()
        .expect("fixture is valid")
}

/// `aleph_0` independent copies of the [`ex_sim`] situation below the root.
pub fn ex_flaw() -> KripkeModel {
    ModelBuilder::new()
        .prop("p")
        .world("s", Vec::<String>::new())
        .world("t", Vec::<String>::new())
        .world("v_neg", Vec::<String>::new())
        .world("v_pos", ["p"])
        .edge("s", "t", aleph(0))
        .edge("t", "v_neg", Cardinal::Finite(1))
        .edge("t", "v_pos", aleph(0))
        .root("s")
        .build()
        .expect("fixture is valid")
}

/// Same model as [`ex_flaw`]; the duplex semantics reads it correctly.
pub fn ex_fix() -> KripkeModel {
    ex_flaw()
}

/// The elimination scenario: `aleph_i` prior support for `~p` against a
/// single `p` hypothesis, which then receives `aleph_j` fresh evidence while
/// every `~p` branch gets one. `extended` adds the hypothetical next round
/// (each `p` leaf continues with `aleph_j` evidence, each `~p` leaf with one).
pub fn ex_det(i: u8, j: u8, extended: bool) -> Result<KripkeModel, CatalogError> {
    let ai = Cardinal::aleph(i)?;
    let aj = Cardinal::aleph(j)?;
    let mut b = ModelBuilder::new()
        .prop("p")
        .world("s", Vec::<String>::new())
        .world("tp", ["p"])
        .world("tn", Vec::<String>::new())
        .world("up", ["p"])
        .world("un", Vec::<String>::new())
        .edge("s", "tp", Cardinal::Finite(1))
        .edge("s", "tn", ai)
        .edge("tp", "up", aj)
        .edge("tn", "un", Cardinal::Finite(1));
    if extended {
        b = b
            .world("vp", ["p"])
            .world("vn", Vec::<String>::new())
            .edge("up", "vp", aj)
            .edge("un", "vn", Cardinal::Finite(1));
    }
    Ok(b.root("s").build()?)
}
