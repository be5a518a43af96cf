//! GREEDY, MAXIMUM-VALUE and the mechanisms assembled from them.

use crate::model::{base_order, Item, ItemSet, OutcomeDistribution, ReportProfile};
use crate::rational::Rational;

/// The greedy prefix and the first item that did not fit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    pub prefix: ItemSet,
    /// `None` when every item fits.
    pub cutoff: Option<Item>,
}

/// Walks `items` in priority order and stops at the first item that overflows.
pub fn greedy_trace(items: &ItemSet, capacity: &Rational) -> GreedyTrace {
    if &items.size() <= capacity {
        return GreedyTrace {
            prefix: items.clone(),
            cutoff: None,
        };
    }
    let mut used = Rational::zero();
    let mut prefix = Vec::new();
    for it in items.by_priority() {
        used += it.size();
        if &used > capacity {
            return GreedyTrace {
                prefix: ItemSet::from_items(prefix),
                cutoff: Some(it),
            };
        }
        prefix.push(it);
    }
    unreachable!("total size exceeds capacity, so some prefix overflows")
}

/// GREEDY: the priority prefix before the first overflowing item. It never skips ahead.
pub fn run_greedy(reports: &ReportProfile, capacity: &Rational) -> ItemSet {
    greedy_trace(&reports.union(), capacity).prefix
}

/// MAXIMUM-VALUE: the single most valuable item, smaller id first on ties.
pub fn run_max_value(reports: &ReportProfile, _capacity: &Rational) -> ItemSet {
    max_value_of(&reports.union())
}

pub(crate) fn max_value_of(items: &ItemSet) -> ItemSet {
    items
        .iter()
        .min_by(|a, b| b.value().cmp(a.value()).then_with(|| base_order(a, b)))
        .map(|it| ItemSet::from_items([it.clone()]))
        .unwrap_or_default()
}

/// HALF-GREEDY: GREEDY or MAXIMUM-VALUE with probability one half each.
pub fn run_half_greedy(reports: &ReportProfile, capacity: &Rational) -> OutcomeDistribution {
    OutcomeDistribution::half_half(
        run_greedy(reports, capacity),
        run_max_value(reports, capacity),
    )
}

/// BAD-GREEDY: like GREEDY but keeps scanning and adds every later item that still fits.
pub fn run_bad_greedy(reports: &ReportProfile, capacity: &Rational) -> ItemSet {
    let mut used = Rational::zero();
    let mut chosen = Vec::new();
    for it in reports.union().by_priority() {
        let next = &used + it.size();
        if &next <= capacity {
            used = next;
            chosen.push(it);
        }
    }
    ItemSet::from_items(chosen)
}

/// NEXT: nothing when everything fits, otherwise the first item GREEDY leaves out.
pub fn run_next_on(reports: &ReportProfile, capacity: &Rational) -> ItemSet {
    match greedy_trace(&reports.union(), capacity).cutoff {
        Some(o) => ItemSet::from_items([o]),
        None => ItemSet::empty(),
    }
}

/// MODIFIED-HALF-GREEDY: GREEDY or NEXT with probability one half each.
pub fn run_modified_half_greedy_on(
    reports: &ReportProfile,
    capacity: &Rational,
) -> OutcomeDistribution {
    let trace = greedy_trace(&reports.union(), capacity);
    let next = trace
        .cutoff
        .map(|o| ItemSet::from_items([o]))
        .unwrap_or_default();
    OutcomeDistribution::half_half(trace.prefix, next)
}
