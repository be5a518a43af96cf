//! Named instance generators and seeded random instances.
//!
//! Every builder is a pure function of its parameters. Where a construction calls for an
//! irrational quantity, the builder substitutes the upper end of a rational enclosure and
//! says so in the entry summary.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lab::interval::Interval;
use crate::mechanisms::{alpha_eu, KqusInstance};
use crate::model::{Instance, Item, ItemSet, Model};
use crate::rational::{r, Rational};

/// Output of [`build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Built {
    Items(Instance),
    Kqus(KqusInstance),
}

impl Built {
    pub fn into_items(self) -> Result<Instance> {
        match self {
            Built::Items(inst) => Ok(inst),
            Built::Kqus(_) => Err(Error::param(
                "expected an item instance, got a size-report instance",
            )),
        }
    }

    pub fn into_kqus(self) -> Result<KqusInstance> {
        match self {
            Built::Kqus(k) => Ok(k),
            Built::Items(_) => Err(Error::param(
                "expected a size-report instance, got an item instance",
            )),
        }
    }
}

pub struct ParamSpec {
    pub name: &'static str,
    pub default: &'static str,
    pub domain: &'static str,
}

pub struct Entry {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
}

const M10: ParamSpec = ParamSpec {
    name: "M",
    default: "10",
    domain: "integer >= 3",
};

pub const ENTRIES: &[Entry] = &[
    Entry {
        name: "example1.instance1",
        summary: "a:(3/4,1/2) | c:(3/4,1/2), d:(1,1); the optimum rewards hiding c",
        params: &[],
    },
    Entry {
        name: "example1.instance2",
        summary: "a:(3/4,1/2) | d:(1,1); the optimum rewards faking a second half-size item",
        params: &[],
    },
    Entry {
        name: "example1.instance3",
        summary: "a,b:(3/4,1/2) | d:(1,1)",
        params: &[],
    },
    Entry {
        name: "example2.badgreedy",
        summary: "a:(1,1) | b:(1/4,1/2); BAD-GREEDY rewards faking c:(1,1/2)",
        params: &[],
    },
    Entry {
        name: "example3.nash-fake",
        summary: "a:(1,1/M) | b:(M-2,(M-1)/M); the fake c:(M-1,(M-1)/M) starves b",
        params: &[M10],
    },
    Entry {
        name: "footnote7.no-dominant",
        summary: "a:(2,1/4+eps), b:(3-eps,1/2) | c:(2-eps,1/4+eps), d:(3,1/2); no dominant strategies under HALF-GREEDY",
        params: &[ParamSpec {
            name: "eps",
            default: "1/100",
            domain: "0 < eps < 1/4",
        }],
    },
    Entry {
        name: "thm5.overstate-rand",
        summary: "prime: M^2 items (1/M,1/M^2) | b:(1,1); base: one of them against b",
        params: &[
            ParamSpec {
                name: "M",
                default: "10",
                domain: "integer in [2, 12]",
            },
            ParamSpec {
                name: "variant",
                default: "prime",
                domain: "prime | base",
            },
        ],
    },
    Entry {
        name: "thm7.understate-det",
        summary: "a:(phi,1) | b:(1,1/2); prime adds c:(phi-eps,1/2) to agent 1; phi is the upper end of a 1e-9 enclosure",
        params: &[
            ParamSpec {
                name: "eps",
                default: "1/100",
                domain: "0 < eps < 1",
            },
            ParamSpec {
                name: "variant",
                default: "prime",
                domain: "prime | base",
            },
        ],
    },
    Entry {
        name: "thm8.understate-rand",
        summary: "a:(phi,1) | b:(1,1/2); prime adds c:(1,1/2) to agent 1; phi is the upper end of a 1e-9 enclosure",
        params: &[ParamSpec {
            name: "variant",
            default: "prime",
            domain: "prime | base",
        }],
    },
    Entry {
        name: "appendixA1.eu-tight",
        summary: "a:(1,1), b:(1/2,1/2) | c:(1/(alpha-1)-eps,1/2); drives EQUAL-UTILITY toward its worst ratio",
        params: &[
            ParamSpec {
                name: "eps",
                default: "1/10000",
                domain: "0 < eps < 1/(alpha-1)",
            },
            ParamSpec {
                name: "alpha",
                default: "15225/10000",
                domain: "1 < alpha < 2",
            },
        ],
    },
    Entry {
        name: "thm9.kqus",
        summary: "ratios (M,1), sizes (1,1); the small variant shrinks agent 1's size to 1/M^2",
        params: &[
            ParamSpec {
                name: "M",
                default: "100",
                domain: "integer >= 2",
            },
            ParamSpec {
                name: "variant",
                default: "base",
                domain: "base | small",
            },
        ],
    },
];

pub fn list() -> &'static [Entry] {
    ENTRIES
}

pub fn entry(name: &str) -> Result<&'static Entry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownCatalogEntry(name.into()))
}

/// `key=value` parameters with the entry's defaults filled in.
struct Params<'a> {
    entry: &'a Entry,
    given: &'a BTreeMap<String, String>,
}

impl Params<'_> {
    fn raw(&self, key: &str) -> &str {
        self.given.get(key).map(String::as_str).unwrap_or_else(|| {
            self.entry
                .params
                .iter()
                .find(|p| p.name == key)
                .map(|p| p.default)
                .expect("parameter declared by the entry")
        })
    }

    fn field_err(&self, key: &str, message: impl std::fmt::Display) -> Error {
        Error::Field {
            field: format!("{}.{key}", self.entry.name),
            message: message.to_string(),
        }
    }

    fn rational(&self, key: &str) -> Result<Rational> {
        self.raw(key).parse().map_err(|e| self.field_err(key, e))
    }

    fn integer(&self, key: &str) -> Result<i64> {
        self.raw(key).trim().parse().map_err(|_| {
            self.field_err(key, format!("expected an integer, got {:?}", self.raw(key)))
        })
    }

    fn choice(&self, key: &str, options: &[&str]) -> Result<String> {
        let v = self.raw(key);
        if options.contains(&v) {
            Ok(v.to_string())
        } else {
            Err(self.field_err(key, format!("expected one of {}", options.join(", "))))
        }
    }

    fn domain(&self, key: &str, ok: bool) -> Result<()> {
        if ok {
            return Ok(());
        }
        let spec = self
            .entry
            .params
            .iter()
            .find(|p| p.name == key)
            .expect("declared");
        Err(self.field_err(key, format!("{} is outside {}", self.raw(key), spec.domain)))
    }
}

/// Builds a named instance. Unknown parameters are rejected.
pub fn build(name: &str, params: &BTreeMap<String, String>) -> Result<Built> {
    let entry = entry(name)?;
    if let Some(k) = params
        .keys()
        .find(|k| !entry.params.iter().any(|p| p.name == k.as_str()))
    {
        return Err(Error::Field {
            field: format!("{name}.{k}"),
            message: "unknown parameter".into(),
        });
    }
    let p = Params {
        entry,
        given: params,
    };
    Ok(match name {
        "example1.instance1" => Built::Items(example1_instance1()),
        "example1.instance2" => Built::Items(example1_instance2()),
        "example1.instance3" => Built::Items(example1_instance3()),
        "example2.badgreedy" => Built::Items(example2_bad_greedy()),
        "example3.nash-fake" => {
            let m = p.integer("M")?;
            p.domain("M", m >= 3)?;
            Built::Items(example3_nash_fake(m))
        }
        "footnote7.no-dominant" => {
            let eps = p.rational("eps")?;
            p.domain("eps", eps.is_positive() && eps < r(1, 4))?;
            Built::Items(footnote7(&eps))
        }
        "thm5.overstate-rand" => {
            let m = p.integer("M")?;
            p.domain("M", (2..=12).contains(&m))?;
            let prime = p.choice("variant", &["prime", "base"])? == "prime";
            Built::Items(thm5_overstate(m, prime))
        }
        "thm7.understate-det" => {
            let eps = p.rational("eps")?;
            p.domain("eps", eps.is_positive() && eps < r(1, 1))?;
            let prime = p.choice("variant", &["prime", "base"])? == "prime";
            Built::Items(thm7_understate_det(&eps, prime))
        }
        "thm8.understate-rand" => {
            let prime = p.choice("variant", &["prime", "base"])? == "prime";
            Built::Items(thm8_understate_rand(prime))
        }
        "appendixA1.eu-tight" => {
            let alpha = p.rational("alpha")?;
            p.domain("alpha", alpha > r(1, 1) && alpha < r(2, 1))?;
            let eps = p.rational("eps")?;
            p.domain("eps", eps.is_positive() && eps < (&alpha - r(1, 1)).recip())?;
            Built::Items(appendix_a1(&alpha, &eps))
        }
        "thm9.kqus" => {
            let m = p.integer("M")?;
            p.domain("M", (2..=1_000_000).contains(&m))?;
            let small = p.choice("variant", &["base", "small"])? == "small";
            Built::Kqus(thm9_kqus(m, small))
        }
        _ => unreachable!("entry table and builder out of sync: {name}"),
    })
}

/// [`build`] with defaults only.
pub fn build_default(name: &str) -> Result<Built> {
    build(name, &BTreeMap::new())
}

fn item(id: &str, owner: usize, v: Rational, s: Rational) -> Item {
    Item::new(id, owner, v, s)
}

fn two_agents(m1: Model, x1: Vec<Item>, m2: Model, x2: Vec<Item>) -> Instance {
    Instance::new(r(1, 1), vec![(m1, x1), (m2, x2)]).expect("catalog instances are valid")
}

pub fn example1_instance1() -> Instance {
    two_agents(
        Model::Understating,
        vec![item("a", 1, r(3, 4), r(1, 2))],
        Model::Understating,
        vec![
            item("c", 2, r(3, 4), r(1, 2)),
            item("d", 2, r(1, 1), r(1, 1)),
        ],
    )
}

pub fn example1_instance2() -> Instance {
    two_agents(
        Model::Overstating,
        vec![item("a", 1, r(3, 4), r(1, 2))],
        Model::Overstating,
        vec![item("d", 2, r(1, 1), r(1, 1))],
    )
}

pub fn example1_instance3() -> Instance {
    two_agents(
        Model::Understating,
        vec![
            item("a", 1, r(3, 4), r(1, 2)),
            item("b", 1, r(3, 4), r(1, 2)),
        ],
        Model::Understating,
        vec![item("d", 2, r(1, 1), r(1, 1))],
    )
}

pub fn example2_bad_greedy() -> Instance {
    two_agents(
        Model::Honest,
        vec![item("a", 1, r(1, 1), r(1, 1))],
        Model::Overstating,
        vec![item("b", 2, r(1, 4), r(1, 2))],
    )
}

/// The fake item agent 2 adds in the BAD-GREEDY manipulation.
pub fn example2_fake() -> Item {
    item("c", 2, r(1, 1), r(1, 2))
}

pub fn example3_nash_fake(m: i64) -> Instance {
    two_agents(
        Model::Full,
        vec![item("a", 1, r(1, 1), r(1, m))],
        Model::Full,
        vec![item("b", 2, r(m - 2, 1), r(m - 1, m))],
    )
}

/// Agent 1's report `{a, c}` with the fake `c:(M-1, (M-1)/M)`.
pub fn example3_fake_report(m: i64) -> ItemSet {
    ItemSet::from_items([
        item("a", 1, r(1, 1), r(1, m)),
        item("c", 1, r(m - 1, 1), r(m - 1, m)),
    ])
}

pub fn footnote7(eps: &Rational) -> Instance {
    let quarter = r(1, 4) + eps;
    two_agents(
        Model::Understating,
        vec![
            item("a", 1, r(2, 1), quarter.clone()),
            item("b", 1, r(3, 1) - eps, r(1, 2)),
        ],
        Model::Understating,
        vec![
            item("c", 2, r(2, 1) - eps, quarter),
            item("d", 2, r(3, 1), r(1, 2)),
        ],
    )
}

/// `prime`: agent 1 owns `M²` items of value `1/M` and size `1/M²`; otherwise only the first.
pub fn thm5_overstate(m: i64, prime: bool) -> Instance {
    let count = if prime { m * m } else { 1 };
    let width = (m * m).to_string().len();
    let x1 = (1..=count)
        .map(|j| item(&format!("a{j:0width$}"), 1, r(1, m), r(1, m * m)))
        .collect();
    two_agents(
        Model::Overstating,
        x1,
        Model::Honest,
        vec![item("b", 2, r(1, 1), r(1, 1))],
    )
}

/// Upper end of the golden-ratio enclosure.
pub fn phi_upper() -> Rational {
    Interval::phi().hi
}

pub fn thm7_understate_det(eps: &Rational, prime: bool) -> Instance {
    let phi = phi_upper();
    let mut x1 = vec![item("a", 1, phi.clone(), r(1, 1))];
    if prime {
        x1.push(item("c", 1, &phi - eps, r(1, 2)));
    }
    two_agents(
        Model::Understating,
        x1,
        Model::Honest,
        vec![item("b", 2, r(1, 1), r(1, 2))],
    )
}

pub fn thm8_understate_rand(prime: bool) -> Instance {
    let mut x1 = vec![item("a", 1, phi_upper(), r(1, 1))];
    if prime {
        x1.push(item("c", 1, r(1, 1), r(1, 2)));
    }
    two_agents(
        Model::Understating,
        x1,
        Model::Honest,
        vec![item("b", 2, r(1, 1), r(1, 2))],
    )
}

pub fn appendix_a1(alpha: &Rational, eps: &Rational) -> Instance {
    let vc = (alpha - r(1, 1)).recip() - eps;
    two_agents(
        Model::Understating,
        vec![
            item("a", 1, r(1, 1), r(1, 1)),
            item("b", 1, r(1, 2), r(1, 2)),
        ],
        Model::Understating,
        vec![item("c", 2, vc, r(1, 2))],
    )
}

/// [`appendix_a1`] at the default EQUAL-UTILITY parameter.
pub fn appendix_a1_default(eps: &Rational) -> Instance {
    appendix_a1(&alpha_eu(), eps)
}

pub fn thm9_kqus(m: i64, small: bool) -> KqusInstance {
    let s1 = if small { r(1, m * m) } else { r(1, 1) };
    KqusInstance::new(r(1, 1), vec![(r(m, 1), s1), (r(1, 1), r(1, 1))])
        .expect("catalog instances are valid")
}

/// Shape of a seeded random instance.
#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub agents: usize,
    pub items_per_agent: usize,
    /// `(value, size)` pairs drawn uniformly with replacement.
    pub grid: Vec<(Rational, Rational)>,
    pub model: Model,
}

impl RandomSpec {
    pub fn new(agents: usize, items_per_agent: usize) -> Self {
        RandomSpec {
            agents,
            items_per_agent,
            grid: default_grid(),
            model: Model::Understating,
        }
    }
}

/// Values `k/4` and sizes `k/8` for `k = 1..=8`.
pub fn default_grid() -> Vec<(Rational, Rational)> {
    (1..=8)
        .flat_map(|v| (1..=8).map(move |s| (r(v, 4), r(s, 8))))
        .collect()
}

/// Reproducible instance with capacity 1. Item `k` of agent `i` is named `x{i}_{k}`.
pub fn random_instance(seed: u64, spec: &RandomSpec) -> Result<Instance> {
    if spec.grid.is_empty() {
        return Err(Error::param("random instance grid is empty"));
    }
    if spec.agents == 0 {
        return Err(Error::param("at least one agent is required"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let agents = (1..=spec.agents)
        .map(|i| {
            let items = (1..=spec.items_per_agent)
                .map(|k| {
                    let (v, s) = &spec.grid[rng.random_range(0..spec.grid.len())];
                    Item::new(format!("x{i}_{k}"), i, v.clone(), s.clone())
                })
                .collect();
            (spec.model, items)
        })
        .collect();
    Instance::new(r(1, 1), agents)
}

/// Reproducible size-report instance with capacity 1: ratios `k/4` for `k = 0..=12`, sizes `k/8`.
pub fn random_kqus(seed: u64, agents: usize) -> Result<KqusInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let list = (0..agents)
        .map(|_| {
            (
                r(rng.random_range(0..=12), 4),
                r(rng.random_range(1..=8), 8),
            )
        })
        .collect();
    KqusInstance::new(r(1, 1), list)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds_with_defaults_twice_identically() {
        for e in list() {
            let a = build_default(e.name).unwrap();
            assert_eq!(a, build_default(e.name).unwrap(), "{}", e.name);
        }
    }

    #[test]
    fn parameter_domains() {
        let with = |k: &str, v: &str| BTreeMap::from([(k.to_string(), v.to_string())]);
        assert!(build("thm5.overstate-rand", &with("M", "13")).is_err());
        assert!(build("example3.nash-fake", &with("M", "2")).is_err());
        assert!(build("footnote7.no-dominant", &with("eps", "0.01")).is_err());
        assert!(build("thm9.kqus", &with("variant", "other")).is_err());
        assert!(build("thm9.kqus", &with("N", "3")).is_err());
        assert!(matches!(
            build("nope", &BTreeMap::new()),
            Err(Error::UnknownCatalogEntry(_))
        ));
    }

    #[test]
    fn thm5_sizes() {
        let inst = thm5_overstate(12, true);
        assert_eq!(inst.true_set(1).len(), 144);
        assert_eq!(inst.true_set(1).size(), r(1, 1));
        assert_eq!(inst.true_set(1).value(), r(12, 1));
        assert_eq!(thm5_overstate(12, false).true_set(1).ids(), ["a001"]);
    }

    #[test]
    fn thm9_deviation_size() {
        let k = thm9_kqus(100, true);
        assert_eq!(k.agents()[0].size, r(1, 10000));
        assert_eq!(k.agents()[0].ratio, r(100, 1));
    }

    #[test]
    fn random_instances_are_reproducible() {
        let spec = RandomSpec::new(3, 2);
        assert_eq!(
            random_instance(7, &spec).unwrap(),
            random_instance(7, &spec).unwrap()
        );
        assert_ne!(
            random_instance(7, &spec).unwrap(),
            random_instance(8, &spec).unwrap()
        );
        let empty = random_instance(1, &RandomSpec::new(2, 0)).unwrap();
        assert!(empty.union().is_empty());
        let one = RandomSpec {
            grid: vec![(r(1, 1), r(1, 1))],
            ..RandomSpec::new(2, 3)
        };
        let inst = random_instance(5, &one).unwrap();
        assert!(inst
            .union()
            .iter()
            .all(|it| it.value() == &r(1, 1) && it.size() == &r(1, 1)));
        let bad = RandomSpec {
            grid: vec![],
            ..RandomSpec::new(2, 3)
        };
        assert!(random_instance(1, &bad).is_err());
    }
}
