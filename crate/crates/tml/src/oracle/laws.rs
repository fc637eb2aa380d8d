//! Seeded law suite for the ordinal engine, plus the level-0 agreement run.
//!
//! Every check draws its instances from a deterministic generator, so a fixed
//! seed reproduces the exact same report. The CLI `selftest` subcommand and
//! the acceptance suite both run through here.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cardinal::Cardinal;
use crate::oracle::{from_level0, poly_add, poly_divmod, poly_mul, sums_agree, PolyOrdinal};
use crate::ordinal::{transfinite_sum, Bundle, ClassOrder, Ordinal};

/// Outcome of one law or agreement run.
#[derive(Debug, Clone)]
pub struct LawOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Up to three rendered counterexamples, for diagnostics.
    pub failures: Vec<String>,
}

impl LawOutcome {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    /// One stable report line, e.g. `law ord-add-assoc: 1000/1000 pass`.
    pub fn line(&self) -> String {
        format!("law {}: {}/{} pass", self.name, self.passed, self.total)
    }
}

/// Random canonical ordinal with all aleph levels at most `max_level`
/// (`None` for purely finite values).
pub fn random_ordinal(rng: &mut StdRng, max_level: Option<u8>, allow_zero: bool) -> Ordinal {
    let mut acc = Ordinal::zero();
    if let Some(max_level) = max_level {
        let monomials = rng.random_range(0..=2);
        for _ in 0..monomials {
            let level = rng.random_range(0..=max_level);
            let exp = rng.random_range(1..=3);
            let coeff = if level == 0 {
                Ordinal::finite(rng.random_range(1..=5))
            } else {
                let c = random_ordinal(rng, Some(level - 1), false);
                if c.is_zero() {
                    Ordinal::one()
                } else {
                    c
                }
            };
            let base = Ordinal::aleph(level).expect("level bounded").pow(exp);
            acc = &acc + &(&base * &coeff);
        }
    }
    let low = if allow_zero && acc.is_zero() {
        0
    } else if acc.is_zero() {
        1
    } else {
        0
    };
    &acc + &Ordinal::finite(rng.random_range(low..=6))
}

/// Random cardinal strictly below `aleph_bound` (finite or a smaller aleph).
fn random_cardinal_below(rng: &mut StdRng, bound: u8) -> Cardinal {
    if bound > 0 && rng.random_bool(0.4) {
        Cardinal::Aleph(rng.random_range(0..bound))
    } else {
        Cardinal::Finite(rng.random_range(1..=5))
    }
}

fn run<F>(name: &'static str, instances: usize, mut check: F) -> LawOutcome
where
    F: FnMut() -> Result<(), String>,
{
    let mut passed = 0;
    let mut failures = Vec::new();
    for _ in 0..instances {
        match check() {
            Ok(()) => passed += 1,
            Err(msg) => {
                if failures.len() < 3 {
                    failures.push(msg);
                }
            }
        }
    }
    LawOutcome {
        name,
        passed,
        total: instances,
        failures,
    }
}

/// Runs every ordinal law at `instances` random instances each.
pub fn run_law_suite(seed: u64, instances: usize) -> Vec<LawOutcome> {
    let mut out = Vec::new();
    let rng = &mut StdRng::seed_from_u64(seed);

    out.push(run("ord-add-assoc", instances, || {
        let (a, b, c) = (
            random_ordinal(rng, Some(3), true),
            random_ordinal(rng, Some(3), true),
            random_ordinal(rng, Some(3), true),
        );
        if &(&a + &b) + &c == &a + &(&b + &c) {
            Ok(())
        } else {
            Err(format!("({a}) + ({b}) + ({c})"))
        }
    }));

    out.push(run("ord-identities", instances, || {
        let a = random_ordinal(rng, Some(3), true);
        let ok = &a + &Ordinal::zero() == a
            && &Ordinal::zero() + &a == a
            && &a * &Ordinal::one() == a
            && &Ordinal::one() * &a == a;
        if ok {
            Ok(())
        } else {
            Err(format!("{a}"))
        }
    }));

    out.push(run("ord-mul-distributes", instances, || {
        let (a, b, c) = (
            random_ordinal(rng, Some(2), true),
            random_ordinal(rng, Some(2), true),
            random_ordinal(rng, Some(2), true),
        );
        if &a * &(&b + &c) == &(&a * &b) + &(&a * &c) {
            Ok(())
        } else {
            Err(format!("({a}) * (({b}) + ({c}))"))
        }
    }));

    out.push(run("absorption", instances, || {
        let k = rng.random_range(1..=4u8);
        let beta = random_ordinal(rng, Some(k - 1), false);
        let aleph = Ordinal::aleph(k).expect("bounded");
        if &beta + &aleph == aleph && &beta * &aleph == aleph {
            Ok(())
        } else {
            Err(format!("beta={beta} k={k}"))
        }
    }));

    out.push(run("log-decomposition", instances, || {
        let k = rng.random_range(0..=4u8);
        let a = random_ordinal(rng, Some(k), false);
        let aleph = Ordinal::aleph(k).expect("bounded");
        let (gamma, zeta, eta) = a.divmod(k).map_err(|e| e.to_string())?;
        let ok = Ordinal::one() <= zeta
            && zeta < aleph
            && eta < aleph.pow(gamma)
            && &(&aleph.pow(gamma) * &zeta) + &eta == a;
        if ok {
            Ok(())
        } else {
            Err(format!("a={a} k={k}"))
        }
    }));

    out.push(run("log-orders-classes", instances, || {
        let k = rng.random_range(0..=3u8);
        let a = random_ordinal(rng, Some(k), false);
        let b = random_ordinal(rng, Some(k), false);
        let (la, lb) = (
            a.log(k).map_err(|e| e.to_string())?,
            b.log(k).map_err(|e| e.to_string())?,
        );
        let cls = a.class_cmp(&b, k);
        let ok = (cls == ClassOrder::Less) == (la < lb)
            && (cls == ClassOrder::Greater) == (la > lb)
            && (cls == ClassOrder::Same) == (la == lb);
        if ok {
            Ok(())
        } else {
            Err(format!("a={a} b={b} k={k}"))
        }
    }));

    out.push(run("bounded-family-sum", instances, || {
        // index order type <= aleph_k: multiplicities below aleph_k, with an
        // optional final aleph_k block; values strictly below aleph_k
        let k = rng.random_range(1..=4u8);
        let len = rng.random_range(0..=4);
        let mut bundles: Vec<Bundle> = (0..len)
            .map(|_| {
                Bundle::new(
                    random_cardinal_below(rng, k),
                    random_ordinal(rng, Some(k - 1), false),
                )
            })
            .collect();
        if rng.random_bool(0.3) {
            bundles.push(Bundle::new(
                Cardinal::Aleph(k),
                random_ordinal(rng, Some(k - 1), false),
            ));
        }
        let aleph = Ordinal::aleph(k).expect("bounded");
        if transfinite_sum(&bundles) <= aleph {
            Ok(())
        } else {
            Err(format!("k={k} sum={}", transfinite_sum(&bundles)))
        }
    }));

    out.push(run("square-criterion", instances, || {
        // values <= aleph_k, index <= aleph_k: the sum reaches aleph_k^2 iff
        // the multiplicities of value-aleph_k bundles add up to aleph_k
        let k = rng.random_range(1..=3u8);
        let aleph = Ordinal::aleph(k).expect("bounded");
        let len = rng.random_range(0..=4);
        let mut bundles: Vec<Bundle> = (0..len)
            .map(|_| {
                let value = if rng.random_bool(0.4) {
                    aleph.clone()
                } else {
                    random_ordinal(rng, Some(k - 1), false)
                };
                Bundle::new(random_cardinal_below(rng, k), value)
            })
            .collect();
        if rng.random_bool(0.5) {
            let value = if rng.random_bool(0.5) {
                aleph.clone()
            } else {
                random_ordinal(rng, Some(k - 1), false)
            };
            bundles.push(Bundle::new(Cardinal::Aleph(k), value));
        }
        let heavy = Cardinal::sum(
            bundles
                .iter()
                .filter(|b| b.value == aleph)
                .map(|b| b.multiplicity),
        );
        let reaches_square = transfinite_sum(&bundles) == aleph.pow(2);
        if reaches_square == (heavy == Cardinal::Aleph(k)) {
            Ok(())
        } else {
            Err(format!(
                "k={k} sum={} heavy={heavy}",
                transfinite_sum(&bundles)
            ))
        }
    }));

    out.push(run("canonical-reconstruct", instances, || {
        // re-summing a normal form's own parts reproduces it exactly
        let a = random_ordinal(rng, Some(4), true);
        let mut rebuilt = Ordinal::zero();
        for (level, exp, coeff) in a.monomials() {
            let base = Ordinal::aleph(level).expect("bounded").pow(exp);
            rebuilt = &rebuilt + &(&base * coeff);
        }
        rebuilt = &rebuilt + &Ordinal::finite(a.tail());
        if rebuilt == a {
            Ok(())
        } else {
            Err(format!("{a}"))
        }
    }));

    out
}

/// Level-0 agreement: `instances` random pairs checked through add, mul and
/// divmod against the polynomial oracle, plus ordered-sum agreement.
pub fn run_level0_agreement(seed: u64, instances: usize) -> LawOutcome {
    let rng = &mut StdRng::seed_from_u64(seed);
    run("level0-oracle-agreement", instances, || {
        let a = random_level0(rng);
        let b = random_level0(rng);
        let (pa, pb) = (
            from_level0(&a).expect("level 0"),
            from_level0(&b).expect("level 0"),
        );
        if a.cmp(&b) != pa.cmp(&pb) {
            return Err(format!("cmp disagrees on {a} and {b}"));
        }
        if from_level0(&(&a + &b)).as_ref() != Some(&poly_add(&pa, &pb)) {
            return Err(format!("add disagrees on {a} and {b}"));
        }
        match poly_mul(&pa, &pb) {
            Ok(product) => {
                if from_level0(&(&a * &b)).as_ref() != Some(&product) {
                    return Err(format!("mul disagrees on {a} and {b}"));
                }
            }
            Err(_) => return Err(format!("oracle overflow on {a} * {b}")),
        }
        if !a.is_zero() {
            let (g, z, e) = a.divmod(0).expect("level 0, nonzero");
            let (pg, pz, pe) = poly_divmod(&pa, 1).expect("nonzero");
            if (g, from_level0(&z), from_level0(&e)) != (pg, Some(pz), Some(pe)) {
                return Err(format!("divmod disagrees on {a}"));
            }
        }
        let family: Vec<(u64, PolyOrdinal)> = (0..rng.random_range(0..=3))
            .map(|_| {
                (
                    rng.random_range(1..=3),
                    from_level0(&random_level0(rng)).unwrap(),
                )
            })
            .collect();
        if !sums_agree(&family) {
            return Err("ordered sum disagrees".to_owned());
        }
        Ok(())
    })
}

fn random_level0(rng: &mut StdRng) -> Ordinal {
    let mut acc = Ordinal::zero();
    let omega = Ordinal::aleph(0).expect("level 0");
    for _ in 0..rng.random_range(0..=3) {
        let exp = rng.random_range(1..=4u32);
        let coeff = rng.random_range(1..=6);
        acc = &acc + &(&omega.pow(exp) * &Ordinal::finite(coeff));
    }
    &acc + &Ordinal::finite(rng.random_range(0..=9))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_suite_passes_smoke() {
        for outcome in run_law_suite(7, 150) {
            assert!(
                outcome.all_passed(),
                "{}: {:?}",
                outcome.line(),
                outcome.failures
            );
        }
    }

    #[test]
    fn agreement_passes_smoke() {
        let outcome = run_level0_agreement(11, 300);
        assert!(outcome.all_passed(), "{:?}", outcome.failures);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let a: Vec<String> = run_law_suite(42, 50).iter().map(LawOutcome::line).collect();
        let b: Vec<String> = run_law_suite(42, 50).iter().map(LawOutcome::line).collect();
        assert_eq!(a, b);
    }
}
