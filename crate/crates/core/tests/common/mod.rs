//! Independent reference computations and random generators shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strategic_knapsack::mechanisms::KqusInstance;
use strategic_knapsack::model::{Instance, Item, ItemSet, Model};
use strategic_knapsack::{r, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Value `v/4` for `v` in 1..=12, size `s/12` for `s` in 1..=12.
pub fn random_item(rng: &mut ChaCha8Rng, id: String, owner: usize) -> Item {
    Item::new(
        id,
        owner,
        r(rng.random_range(1..=12), 4),
        r(rng.random_range(1..=12), 12),
    )
}

/// Instance with capacity 1, `agents` agents and up to `max_items` items each.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    agents: usize,
    max_items: usize,
    model: Model,
) -> Instance {
    let list = (1..=agents)
        .map(|i| {
            let count = rng.random_range(0..=max_items);
            let items = (1..=count)
                .map(|k| random_item(rng, format!("i{i}{k}"), i))
                .collect();
            (model, items)
        })
        .collect();
    Instance::new(r(1, 1), list).expect("generated instance is valid")
}

pub fn random_kqus(rng: &mut ChaCha8Rng, agents: usize) -> KqusInstance {
    let list = (0..agents)
        .map(|_| {
            (
                r(rng.random_range(0..=12), 4),
                r(rng.random_range(1..=20), 20),
            )
        })
        .collect();
    KqusInstance::new(r(1, 1), list).expect("generated instance is valid")
}

/// Every subset by bitmask; total value of the best one that fits.
pub fn brute_opt_value(items: &ItemSet, capacity: &Rational) -> Rational {
    let v: Vec<&Item> = items.iter().collect();
    let mut best = Rational::zero();
    for mask in 0u32..1 << v.len() {
        let mut size = Rational::zero();
        let mut value = Rational::zero();
        for (k, it) in v.iter().enumerate() {
            if mask >> k & 1 == 1 {
                size += it.size();
                value += it.value();
            }
        }
        if &size <= capacity && value > best {
            best = value;
        }
    }
    best
}

/// Priority order written out directly: larger value/size first, then smaller id.
fn reference_priority(a: &Item, b: &Item) -> Ordering {
    (b.value() * a.size())
        .cmp(&(a.value() * b.size()))
        .then_with(|| a.id().cmp(b.id()))
}

/// `(greedy prefix ids, max-value id)` by straightforward scanning.
pub fn reference_half_greedy(
    items: &ItemSet,
    capacity: &Rational,
) -> (Vec<String>, Option<String>) {
    let mut sorted: Vec<&Item> = items.iter().collect();
    sorted.sort_by(|a, b| reference_priority(a, b));
    let mut used = Rational::zero();
    let mut prefix = Vec::new();
    for it in sorted {
        used += it.size();
        if &used > capacity {
            break;
        }
        prefix.push(it.id().to_string());
    }
    prefix.sort();
    let mut best: Option<&Item> = None;
    for it in items.iter() {
        best = match best {
            None => Some(it),
            Some(b) if it.value() > b.value() || (it.value() == b.value() && it.id() < b.id()) => {
                Some(it)
            }
            keep => keep,
        };
    }
    (prefix, best.map(|it| it.id().to_string()))
}

/// Feasible sets of `x1 ∪ x2` as `(v(S), v(S ∩ X1) - v(S ∩ X2))`.
pub fn program_lines(x1: &ItemSet, x2: &ItemSet, capacity: &Rational) -> Vec<(Rational, Rational)> {
    let all: Vec<(Item, bool)> = x1
        .iter()
        .map(|it| (it.clone(), true))
        .chain(x2.iter().map(|it| (it.clone(), false)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << all.len() {
        let mut size = Rational::zero();
        let mut v = Rational::zero();
        let mut d = Rational::zero();
        for (k, (it, first)) in all.iter().enumerate() {
            if mask >> k & 1 == 1 {
                size += it.size();
                v += it.value();
                if *first {
                    d += it.value();
                } else {
                    d -= it.value();
                }
            }
        }
        if &size <= capacity {
            out.push((v, d));
        }
    }
    out
}

/// PROGRAM's optimum through its Lagrangian dual `min_λ max_S v(S) - λ δ(S)`.
///
/// The dual function is convex and piecewise linear, so its minimum sits at a crossing of
/// two lines or, when every δ has one sign, at the limit given by the δ = 0 lines.
pub fn program_dual_oracle(lines: &[(Rational, Rational)]) -> Rational {
    let g = |lambda: &Rational| -> Rational {
        lines
            .iter()
            .map(|(v, d)| v - lambda * d)
            .max()
            .expect("the empty set is always feasible")
    };
    let mut best: Option<Rational> = None;
    let mut consider = |x: Rational| {
        if best.as_ref().is_none_or(|b| &x < b) {
            best = Some(x);
        }
    };
    for (i, (v1, d1)) in lines.iter().enumerate() {
        for (v2, d2) in &lines[i + 1..] {
            if d1 != d2 {
                consider(g(&((v1 - v2) / (d1 - d2))));
            }
        }
    }
    let flat = lines
        .iter()
        .filter(|(_, d)| d.is_zero())
        .map(|(v, _)| v.clone())
        .max()
        .expect("the empty set has zero imbalance");
    let all_nonneg = lines.iter().all(|(_, d)| !d.is_negative());
    let all_nonpos = lines.iter().all(|(_, d)| !d.is_positive());
    if all_nonneg || all_nonpos {
        consider(flat);
    }
    consider(g(&Rational::zero()));
    best.expect("at least one candidate")
}

/// Largest objective among primal points whose probabilities are multiples of `1/den`.
pub fn program_grid_best(lines: &[(Rational, Rational)], den: i64) -> Rational {
    fn walk(
        lines: &[(Rational, Rational)],
        k: usize,
        left: i64,
        den: i64,
        acc_v: Rational,
        acc_d: Rational,
        best: &mut Rational,
    ) {
        if k + 1 == lines.len() {
            let p = r(left, den);
            let v = acc_v + &p * &lines[k].0;
            let d = acc_d + &p * &lines[k].1;
            if d.is_zero() && &v > best {
                *best = v;
            }
            return;
        }
        for take in 0..=left {
            let p = r(take, den);
            walk(
                lines,
                k + 1,
                left - take,
                den,
                &acc_v + &p * &lines[k].0,
                &acc_d + &p * &lines[k].1,
                best,
            );
        }
    }
    let mut best = Rational::zero();
    walk(
        lines,
        0,
        den,
        den,
        Rational::zero(),
        Rational::zero(),
        &mut best,
    );
    best
}
