//! PROGRAM: the best distribution over feasible sets that gives both agents equal expected
//! utility, and the knapsack reduction that makes it hard.
//!
//! The linear program has one balance row and one mass row, so some optimal basic solution puts
//! weight on at most two sets. [`solve_program`] enumerates every balanced singleton and every
//! pair straddling the balance line, mixing each pair at the unique balancing probability.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::knapsack::opt_knapsack;
use crate::model::{Item, ItemSet, OutcomeDistribution};
use crate::rational::Rational;

/// Default cap on `|X_1 ∪ X_2|` for feasible-set enumeration.
pub const DEFAULT_SET_CAP: usize = 20;

/// Two agents' item sets sharing one knapsack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramInstance {
    pub x1: ItemSet,
    pub x2: ItemSet,
    pub capacity: Rational,
}

impl ProgramInstance {
    pub fn new(x1: ItemSet, x2: ItemSet, capacity: Rational) -> Result<Self> {
        for (agent, set) in [(1, &x1), (2, &x2)] {
            if let Some(it) = set.iter().find(|it| it.owner() != agent) {
                return Err(Error::OwnerMismatch {
                    item: it.id().into(),
                    expected: agent,
                    found: it.owner(),
                });
            }
        }
        if let Some(it) = x1.iter().find(|it| x2.contains_id(it.id())) {
            return Err(Error::DuplicateId(it.id().into()));
        }
        Ok(ProgramInstance { x1, x2, capacity })
    }

    pub fn items(&self) -> ItemSet {
        self.x1.union(&self.x2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramSolution {
    pub distribution: OutcomeDistribution,
    pub objective: Rational,
}

/// Every subset of `items` that fits in `capacity`, in canonical set order (∅ first).
pub fn enumerate_feasible_sets(
    items: &ItemSet,
    capacity: &Rational,
    cap: usize,
) -> Result<Vec<ItemSet>> {
    if items.len() > cap || items.len() >= 64 {
        return Err(Error::TooLarge {
            count: items.len(),
            cap,
        });
    }
    let sizes: Vec<&Rational> = items.iter().map(Item::size).collect();
    let mut masks = Vec::new();
    let mut stack = vec![(0usize, 0u64, Rational::zero())];
    while let Some((depth, mask, used)) = stack.pop() {
        if depth == sizes.len() {
            masks.push(mask);
            continue;
        }
        let with = &used + sizes[depth];
        if &with <= capacity {
            stack.push((depth + 1, mask | 1 << depth, with));
        }
        stack.push((depth + 1, mask, used));
    }
    let mut sets: Vec<ItemSet> = masks.into_iter().map(|m| items.subset_by_mask(m)).collect();
    sets.sort();
    Ok(sets)
}

struct Candidate {
    set: ItemSet,
    value: Rational,
    /// `v(S ∩ X_1) − v(S ∩ X_2)`.
    imbalance: Rational,
}

struct Best {
    objective: Rational,
    support: Vec<(ItemSet, Rational)>,
}

impl Best {
    /// `Less` when `self` is preferred: larger objective, smaller support, canonical sets.
    fn preference(&self, other: &Best) -> Ordering {
        other
            .objective
            .cmp(&self.objective)
            .then(self.support.len().cmp(&other.support.len()))
            .then_with(|| {
                self.support
                    .iter()
                    .map(|(s, _)| s)
                    .cmp(other.support.iter().map(|(s, _)| s))
            })
    }

    fn offer(&mut self, candidate: Best) {
        if candidate.preference(self) == Ordering::Less {
            *self = candidate;
        }
    }
}

/// Optimal PROGRAM solution with the default enumeration cap.
pub fn solve_program(instance: &ProgramInstance) -> Result<ProgramSolution> {
    solve_program_capped(instance, DEFAULT_SET_CAP)
}

pub fn solve_program_capped(instance: &ProgramInstance, cap: usize) -> Result<ProgramSolution> {
    let feasible = enumerate_feasible_sets(&instance.items(), &instance.capacity, cap)?;
    let candidates: Vec<Candidate> = feasible
        .into_iter()
        .map(|set| {
            let u1 = instance.x1.value_within(&set);
            let u2 = instance.x2.value_within(&set);
            Candidate {
                value: &u1 + &u2,
                imbalance: u1 - u2,
                set,
            }
        })
        .collect();

    let mut best = Best {
        objective: Rational::zero(),
        support: vec![(ItemSet::empty(), Rational::one())],
    };
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for c in &candidates {
        match c.imbalance.cmp(&Rational::zero()) {
            Ordering::Equal => best.offer(Best {
                objective: c.value.clone(),
                support: vec![(c.set.clone(), Rational::one())],
            }),
            Ordering::Greater => positive.push(c),
            Ordering::Less => negative.push(c),
        }
    }
    // A mix is a convex combination, so it never beats the better of its two ends.
    positive.sort_by(|a, b| b.value.cmp(&a.value));
    negative.sort_by(|a, b| b.value.cmp(&a.value));
    for p in &positive {
        for q in &negative {
            if p.value < best.objective && q.value < best.objective {
                break;
            }
            let spread = &p.imbalance - &q.imbalance;
            let weight_p = -&q.imbalance / &spread;
            let weight_q = &p.imbalance / &spread;
            let objective = &weight_p * &p.value + &weight_q * &q.value;
            if objective < best.objective {
                continue;
            }
            let mut support = vec![(p.set.clone(), weight_p), (q.set.clone(), weight_q)];
            support.sort_by(|a, b| a.0.cmp(&b.0));
            best.offer(Best { objective, support });
        }
    }
    Ok(ProgramSolution {
        distribution: OutcomeDistribution::new(best.support)?,
        objective: best.objective,
    })
}

/// The balancing mixture from the approximation argument: `Z_a` with probability `p`, the joint
/// optimum `O` otherwise, where `a` is the agent holding less of `O`. Always PROGRAM-feasible.
pub fn balancing_mixture(instance: &ProgramInstance) -> Result<OutcomeDistribution> {
    let joint = opt_knapsack(&instance.items(), &instance.capacity)?.chosen;
    let o1 = instance.x1.value_within(&joint);
    let o2 = instance.x2.value_within(&joint);
    let (xa, oa, ob) = if o1 <= o2 {
        (&instance.x1, o1, o2)
    } else {
        (&instance.x2, o2, o1)
    };
    let za = opt_knapsack(xa, &instance.capacity)?;
    let gap = &ob - &oa;
    let denom = &gap + &za.value;
    if denom.is_zero() {
        return Ok(OutcomeDistribution::certain(joint));
    }
    let p = gap / denom;
    OutcomeDistribution::new([(za.chosen, p.clone()), (joint, Rational::one() - p)])
}

/// Builds the PROGRAM instance that decides whether a knapsack of capacity ½ reaches value `k`.
///
/// Agent 1 receives the knapsack items; agent 2 a single fresh item of value `k` and size ½.
/// The PROGRAM optimum equals `2k` exactly when the knapsack optimum is at least `k`.
pub fn reduce_knapsack_to_program(items: &ItemSet, k: &Rational) -> Result<ProgramInstance> {
    if !k.is_positive() {
        return Err(Error::param(format!("k must be positive, got {k}")));
    }
    let half = Rational::half();
    if let Some(it) = items
        .iter()
        .find(|it| it.size() > &half || !it.size().is_positive())
    {
        return Err(Error::SizeOutOfRange {
            item: it.id().into(),
            size: Box::new(it.size().clone()),
            capacity: Box::new(half),
        });
    }
    let x1 = ItemSet::try_from_items(
        items
            .iter()
            .map(|it| Item::new(it.id(), 1, it.value().clone(), it.size().clone())),
    )?;
    let mut fresh = String::from("a");
    while x1.contains_id(&fresh) {
        fresh.push('\'');
    }
    let x2 = ItemSet::from_items([Item::new(fresh, 2, k.clone(), half)]);
    ProgramInstance::new(x1, x2, Rational::one())
}

/// Both sides of the reduction's decision question, computed independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionCheck {
    pub k: Rational,
    pub knapsack_optimum: Rational,
    pub program_objective: Rational,
    /// `knapsack_optimum ≥ k`.
    pub knapsack_reaches_k: bool,
    /// `program_objective = 2k`.
    pub program_reaches_2k: bool,
}

impl ReductionCheck {
    pub fn agrees(&self) -> bool {
        self.knapsack_reaches_k == self.program_reaches_2k
    }
}

pub fn check_reduction(items: &ItemSet, k: &Rational) -> Result<ReductionCheck> {
    let program = reduce_knapsack_to_program(items, k)?;
    let solution = solve_program(&program)?;
    let knapsack_optimum = opt_knapsack(items, &Rational::half())?.value;
    Ok(ReductionCheck {
        k: k.clone(),
        knapsack_reaches_k: &knapsack_optimum >= k,
        program_reaches_2k: solution.objective == Rational::integer(2) * k,
        knapsack_optimum,
        program_objective: solution.objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::expected_utility;
    use crate::rational::r;

    fn it(id: &str, owner: usize, v: Rational, s: Rational) -> Item {
        Item::new(id, owner, v, s)
    }

    fn shown(sets: &[ItemSet]) -> Vec<String> {
        sets.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn feasible_sets() {
        let items =
            ItemSet::from_items([it("a", 1, r(1, 1), r(1, 1)), it("b", 2, r(1, 1), r(1, 1))]);
        assert_eq!(
            shown(&enumerate_feasible_sets(&items, &r(1, 1), 20).unwrap()),
            ["{}", "{a}", "{b}"]
        );
        assert_eq!(
            shown(&enumerate_feasible_sets(&ItemSet::empty(), &r(1, 1), 20).unwrap()),
            ["{}"]
        );
        let items = ItemSet::from_items([
            it("a", 1, r(3, 4), r(1, 2)),
            it("c", 2, r(3, 4), r(1, 2)),
            it("d", 2, r(1, 1), r(1, 1)),
        ]);
        assert_eq!(
            shown(&enumerate_feasible_sets(&items, &r(1, 1), 20).unwrap()),
            ["{}", "{a}", "{c}", "{d}", "{a,c}"]
        );
        assert!(matches!(
            enumerate_feasible_sets(&items, &r(1, 1), 2),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn symmetric_pair_mixes_evenly() {
        let inst = ProgramInstance::new(
            ItemSet::from_items([it("a", 1, r(1, 1), r(1, 1))]),
            ItemSet::from_items([it("b", 2, r(1, 1), r(1, 1))]),
            r(1, 1),
        )
        .unwrap();
        let sol = solve_program(&inst).unwrap();
        assert_eq!(sol.objective, r(1, 1));
        assert_eq!(sol.distribution.to_string(), "{a}:1/2, {b}:1/2");
    }

    #[test]
    fn balanced_deterministic_set_wins() {
        let inst = ProgramInstance::new(
            ItemSet::from_items([it("a", 1, r(3, 4), r(1, 2))]),
            ItemSet::from_items([it("c", 2, r(3, 4), r(1, 2)), it("d", 2, r(1, 1), r(1, 1))]),
            r(1, 1),
        )
        .unwrap();
        let sol = solve_program(&inst).unwrap();
        assert_eq!(sol.objective, r(3, 2));
        assert_eq!(sol.distribution.to_string(), "{a,c}:1");
    }

    #[test]
    fn empty_second_agent_pins_everything_to_zero() {
        let inst = ProgramInstance::new(
            ItemSet::from_items([it("a", 1, r(3, 4), r(1, 2))]),
            ItemSet::empty(),
            r(1, 1),
        )
        .unwrap();
        let sol = solve_program(&inst).unwrap();
        assert_eq!(sol.objective, r(0, 1));
        assert_eq!(sol.distribution.to_string(), "{}:1");
    }

    #[test]
    fn utilities_balance() {
        let inst = ProgramInstance::new(
            ItemSet::from_items([it("a", 1, r(1, 1), r(1, 1)), it("b", 1, r(1, 2), r(1, 2))]),
            ItemSet::from_items([it("c", 2, r(19, 10), r(1, 2))]),
            r(1, 1),
        )
        .unwrap();
        let sol = solve_program(&inst).unwrap();
        assert_eq!(
            expected_utility(&inst.x1, &sol.distribution),
            expected_utility(&inst.x2, &sol.distribution)
        );
        assert_eq!(sol.distribution.expected_value(), sol.objective);
        let mix = balancing_mixture(&inst).unwrap();
        assert_eq!(
            expected_utility(&inst.x1, &mix),
            expected_utility(&inst.x2, &mix)
        );
        assert!(sol.objective >= mix.expected_value());
    }

    #[test]
    fn owners_are_checked() {
        let err = ProgramInstance::new(
            ItemSet::from_items([it("a", 2, r(1, 1), r(1, 1))]),
            ItemSet::empty(),
            r(1, 1),
        );
        assert!(matches!(err, Err(Error::OwnerMismatch { .. })));
    }

    fn reduction_items() -> ItemSet {
        ItemSet::from_items([it("x", 1, r(2, 1), r(3, 10)), it("y", 1, r(1, 1), r(1, 5))])
    }

    #[test]
    fn reduction_examples() {
        let yes = check_reduction(&reduction_items(), &r(3, 1)).unwrap();
        assert_eq!(yes.program_objective, r(6, 1));
        assert!(yes.knapsack_reaches_k && yes.program_reaches_2k);

        let no = check_reduction(&reduction_items(), &r(4, 1)).unwrap();
        assert_eq!(no.program_objective, r(6, 1));
        assert!(!no.knapsack_reaches_k && !no.program_reaches_2k);

        let empty = check_reduction(&ItemSet::empty(), &r(1, 1)).unwrap();
        assert_eq!(empty.program_objective, r(0, 1));
        assert!(empty.agrees() && !empty.program_reaches_2k);
    }

    #[test]
    fn reduction_rejects_large_items_and_bad_k() {
        let items = ItemSet::from_items([it("x", 1, r(1, 1), r(3, 5))]);
        assert!(matches!(
            reduce_knapsack_to_program(&items, &r(1, 1)),
            Err(Error::SizeOutOfRange { .. })
        ));
        assert!(reduce_knapsack_to_program(&reduction_items(), &r(0, 1)).is_err());
        let clash = ItemSet::from_items([it("a", 1, r(1, 1), r(1, 2))]);
        let prog = reduce_knapsack_to_program(&clash, &r(1, 1)).unwrap();
        assert_eq!(prog.x2.ids(), ["a'"]);
    }
}
