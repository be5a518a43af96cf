//! Exact 0/1 knapsack with a canonical optimum.
//!
//! Among all maximum-value packings the solver returns the one with the smallest total size,
//! then the lexicographically smallest sorted id sequence. The brute-force enumerator applies the
//! same rule and serves as the reference for the branch-and-bound search.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{Item, ItemSet};
use crate::rational::Rational;

/// Default item cap for [`opt_knapsack`].
pub const DEFAULT_ITEM_CAP: usize = 30;

/// Hard cap for [`brute_force_opt`].
pub const BRUTE_FORCE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptResult {
    pub chosen: ItemSet,
    pub value: Rational,
    pub size: Rational,
}

impl OptResult {
    fn empty() -> Self {
        OptResult {
            chosen: ItemSet::empty(),
            value: Rational::zero(),
            size: Rational::zero(),
        }
    }

    /// `Less` when `self` is the preferred optimum.
    fn preference(&self, other: &OptResult) -> Ordering {
        other
            .value
            .cmp(&self.value)
            .then_with(|| self.size.cmp(&other.size))
            .then_with(|| self.chosen.cmp_ids(&other.chosen))
    }
}

/// Optimal packing of `items` into `capacity` with the default item cap.
pub fn opt_knapsack(items: &ItemSet, capacity: &Rational) -> Result<OptResult> {
    opt_knapsack_capped(items, capacity, DEFAULT_ITEM_CAP)
}

struct Search<'a> {
    items: Vec<&'a Item>,
    capacity: &'a Rational,
    taken: Vec<bool>,
    best: OptResult,
}

impl Search<'_> {
    /// Fractional-relaxation bound on the value reachable from `depth` with `room` left.
    fn bound(&self, depth: usize, mut room: Rational) -> Rational {
        let mut extra = Rational::zero();
        for it in &self.items[depth..] {
            if !room.is_positive() {
                break;
            }
            if it.size() <= &room {
                extra += it.value();
                room -= it.size();
            } else {
                extra += it.value() * &room / it.size();
                break;
            }
        }
        extra
    }

    fn visit(&mut self, depth: usize, value: &Rational, size: &Rational) {
        if depth == self.items.len() {
            if value >= &self.best.value {
                let candidate = OptResult {
                    chosen: ItemSet::from_items(
                        self.items
                            .iter()
                            .zip(&self.taken)
                            .filter(|(_, t)| **t)
                            .map(|(it, _)| (*it).clone()),
                    ),
                    value: value.clone(),
                    size: size.clone(),
                };
                if candidate.preference(&self.best) == Ordering::Less {
                    self.best = candidate;
                }
            }
            return;
        }
        let room = self.capacity - size;
        // Ties must still be explored for the size and id tie-breaks.
        if value + self.bound(depth, room.clone()) < self.best.value {
            return;
        }
        let it = self.items[depth];
        if it.size() <= &room {
            self.taken[depth] = true;
            self.visit(depth + 1, &(value + it.value()), &(size + it.size()));
            self.taken[depth] = false;
        }
        self.visit(depth + 1, value, size);
    }
}

/// Branch-and-bound over items in greedy priority order.
pub fn opt_knapsack_capped(items: &ItemSet, capacity: &Rational, cap: usize) -> Result<OptResult> {
    if items.len() > cap {
        return Err(Error::TooLarge {
            count: items.len(),
            cap,
        });
    }
    let mut sorted: Vec<&Item> = items.iter().filter(|it| it.size() <= capacity).collect();
    sorted.sort_by(|a, b| crate::model::priority_order(a, b));
    let n = sorted.len();
    let mut search = Search {
        items: sorted,
        capacity,
        taken: vec![false; n],
        best: OptResult::empty(),
    };
    search.visit(0, &Rational::zero(), &Rational::zero());
    Ok(search.best)
}

/// Exhaustive `2^n` reference solver with the same canonical tie-break.
pub fn brute_force_opt(items: &ItemSet, capacity: &Rational) -> Result<OptResult> {
    if items.len() > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            count: items.len(),
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut best = OptResult::empty();
    for mask in 0..1u64 << items.len() {
        let chosen = items.subset_by_mask(mask);
        let size = chosen.size();
        if &size > capacity {
            continue;
        }
        let candidate = OptResult {
            value: chosen.value(),
            size,
            chosen,
        };
        if candidate.preference(&best) == Ordering::Less {
            best = candidate;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::r;
    use proptest::prelude::*;

    fn set(items: &[(&str, Rational, Rational)]) -> ItemSet {
        ItemSet::from_items(
            items
                .iter()
                .map(|(id, v, s)| Item::new(*id, 1, v.clone(), s.clone())),
        )
    }

    #[test]
    fn example_one_first_instance() {
        let items = set(&[
            ("a", r(3, 4), r(1, 2)),
            ("c", r(3, 4), r(1, 2)),
            ("d", r(1, 1), r(1, 1)),
        ]);
        let opt = opt_knapsack(&items, &r(1, 1)).unwrap();
        assert_eq!(opt.chosen.ids(), ["a", "c"]);
        assert_eq!(opt.value, r(3, 2));
        assert_eq!(opt, brute_force_opt(&items, &r(1, 1)).unwrap());
    }

    #[test]
    fn empty_and_oversized() {
        let opt = opt_knapsack(&ItemSet::empty(), &r(1, 1)).unwrap();
        assert!(opt.chosen.is_empty());
        assert_eq!(opt.value, r(0, 1));
        let big = set(&[("x", r(5, 1), r(1, 1))]);
        let opt = brute_force_opt(&big, &r(1, 2)).unwrap();
        assert!(opt.chosen.is_empty());
        assert_eq!(opt, opt_knapsack(&big, &r(1, 2)).unwrap());
    }

    #[test]
    fn small_capacity_pair() {
        let items = set(&[("x", r(2, 1), r(3, 10)), ("y", r(1, 1), r(1, 5))]);
        let opt = opt_knapsack(&items, &r(1, 2)).unwrap();
        assert_eq!(opt.chosen.ids(), ["x", "y"]);
        assert_eq!(opt.value, r(3, 1));
        assert_eq!(opt, brute_force_opt(&items, &r(1, 2)).unwrap());
    }

    #[test]
    fn ties_prefer_smaller_size_then_ids() {
        let items = set(&[
            ("p", r(1, 1), r(1, 2)),
            ("q", r(1, 1), r(1, 4)),
            ("s", r(1, 1), r(1, 4)),
        ]);
        // Any two items are worth 2; {q,s} is the lightest.
        let opt = opt_knapsack(&items, &r(3, 4)).unwrap();
        assert_eq!(opt.chosen.ids(), ["q", "s"]);
        let items = set(&[("b", r(1, 1), r(1, 2)), ("a", r(1, 1), r(1, 2))]);
        assert_eq!(opt_knapsack(&items, &r(1, 2)).unwrap().chosen.ids(), ["a"]);
    }

    #[test]
    fn cap_is_enforced() {
        let items = ItemSet::from_items(
            (0..31).map(|k| Item::new(format!("i{k:02}"), 1, r(1, 1), r(1, 40))),
        );
        assert!(matches!(
            opt_knapsack(&items, &r(1, 1)),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            brute_force_opt(&items, &r(1, 1)),
            Err(Error::TooLarge { .. })
        ));
    }

    fn arb_items(max: usize) -> impl Strategy<Value = ItemSet> {
        prop::collection::vec((1i64..6, 1i64..5, 1i64..8), 0..=max).prop_map(|raw| {
            ItemSet::from_items(
                raw.into_iter()
                    .enumerate()
                    .map(|(k, (v, vd, s))| Item::new(format!("i{k}"), 1, r(v, vd), r(s, 8))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn branch_and_bound_matches_brute_force(items in arb_items(10)) {
            let cap = r(1, 1);
            prop_assert_eq!(opt_knapsack(&items, &cap).unwrap(), brute_force_opt(&items, &cap).unwrap());
        }

        #[test]
        fn adding_an_item_never_hurts(items in arb_items(8), v in 1i64..6, s in 1i64..8) {
            let cap = r(1, 1);
            let before = opt_knapsack(&items, &cap).unwrap().value;
            let more = items.with(Item::new("zz", 1, r(v, 1), r(s, 8))).unwrap();
            prop_assert!(opt_knapsack(&more, &cap).unwrap().value >= before);
        }
    }
}
