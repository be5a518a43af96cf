//! Items, instances, report profiles and outcome distributions.
//!
//! Agents are numbered `1..=n`. An [`Instance`] holds each agent's true item set together with
//! the manipulation [`Model`] that bounds what she may report; a [`ReportProfile`] is what the
//! mechanism actually sees. Items are compared by id wherever set semantics are needed: ids are
//! unique within an instance, so `X_i ∩ S` is well defined even when `S` contains fake items.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::Rational;

struct ItemData {
    id: String,
    owner: usize,
    value: Rational,
    size: Rational,
}

/// A knapsack item. Cheap to clone.
#[derive(Clone)]
pub struct Item(Arc<ItemData>);

impl Item {
    pub fn new(id: impl Into<String>, owner: usize, value: Rational, size: Rational) -> Self {
        Item(Arc::new(ItemData {
            id: id.into(),
            owner,
            value,
            size,
        }))
    }

    pub fn id(&self) -> &str {
        &self.0.id
    }

    pub fn owner(&self) -> usize {
        self.0.owner
    }

    pub fn value(&self) -> &Rational {
        &self.0.value
    }

    pub fn size(&self) -> &Rational {
        &self.0.size
    }

    /// Same item with a different size; used for size reports in the known-quality model.
    pub fn with_size(&self, size: Rational, value: Rational) -> Item {
        Item::new(self.id(), self.owner(), value, size)
    }

    pub(crate) fn same_data(&self, other: &Item) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.id == other.0.id
                && self.0.owner == other.0.owner
                && self.0.value == other.0.value
                && self.0.size == other.0.size)
    }
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.same_data(other)
    }
}

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id()
            .cmp(other.id())
            .then(self.owner().cmp(&other.owner()))
            .then_with(|| self.value().cmp(other.value()))
            .then_with(|| self.size().cmp(other.size()))
    }
}

impl fmt::Debug for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(v {}, s {})@{}",
            self.id(),
            self.value(),
            self.size(),
            self.owner()
        )
    }
}

/// Greedy priority: `Less` means `a` is considered before `b`.
///
/// Higher value-to-size ratio first; equal ratios fall back to ascending id, which is the fixed
/// base order used by every mechanism in the crate.
pub fn priority_compare(a: &Item, b: &Item) -> Result<Ordering> {
    if a.id() == b.id() {
        return Err(Error::InvalidInstance(format!(
            "cannot order item {:?} against itself",
            a.id()
        )));
    }
    Ok(priority_order(a, b))
}

pub(crate) fn priority_order(a: &Item, b: &Item) -> Ordering {
    Rational::cmp_ratio(b.value(), b.size(), a.value(), a.size()).then_with(|| a.id().cmp(b.id()))
}

/// Base order among items of equal value: ascending id wins.
pub(crate) fn base_order(a: &Item, b: &Item) -> Ordering {
    a.id().cmp(b.id())
}

/// A finite set of items with distinct ids, kept sorted by id.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ItemSet {
    items: Vec<Item>,
}

impl std::hash::Hash for Item {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.id().hash(state);
    }
}

impl ItemSet {
    pub fn empty() -> Self {
        ItemSet { items: Vec::new() }
    }

    /// Builds a set, rejecting repeated ids.
    pub fn try_from_items(items: impl IntoIterator<Item = Item>) -> Result<Self> {
        let mut items: Vec<Item> = items.into_iter().collect();
        items.sort_by(|a, b| a.id().cmp(b.id()));
        if let Some(w) = items.windows(2).find(|w| w[0].id() == w[1].id()) {
            return Err(Error::DuplicateId(w[0].id().to_string()));
        }
        Ok(ItemSet { items })
    }

    /// Builds a set from items whose ids are known to be distinct.
    pub fn from_items(items: impl IntoIterator<Item = Item>) -> Self {
        Self::try_from_items(items).expect("item ids must be distinct")
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Item> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Item] {
        &self.items
    }

    pub fn get(&self, id: &str) -> Option<&Item> {
        self.items
            .binary_search_by(|it| it.id().cmp(id))
            .ok()
            .map(|i| &self.items[i])
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.get(id).is_some()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.items.iter().map(Item::id).collect()
    }

    pub fn value(&self) -> Rational {
        self.items.iter().map(Item::value).sum()
    }

    pub fn size(&self) -> Rational {
        self.items.iter().map(Item::size).sum()
    }

    /// Items of `self` whose id also occurs in `other`.
    pub fn intersection(&self, other: &ItemSet) -> ItemSet {
        ItemSet {
            items: self
                .items
                .iter()
                .filter(|it| other.contains_id(it.id()))
                .cloned()
                .collect(),
        }
    }

    /// Total value (taken from `self`) of the items of `self` that appear in `other`.
    pub fn value_within(&self, other: &ItemSet) -> Rational {
        self.items
            .iter()
            .filter(|it| other.contains_id(it.id()))
            .map(Item::value)
            .sum()
    }

    pub fn difference(&self, other: &ItemSet) -> ItemSet {
        ItemSet {
            items: self
                .items
                .iter()
                .filter(|it| !other.contains_id(it.id()))
                .cloned()
                .collect(),
        }
    }

    /// Union by id; on a shared id the item from `self` is kept.
    pub fn union(&self, other: &ItemSet) -> ItemSet {
        let mut items = self.items.clone();
        items.extend(
            other
                .items
                .iter()
                .filter(|it| !self.contains_id(it.id()))
                .cloned(),
        );
        items.sort_by(|a, b| a.id().cmp(b.id()));
        ItemSet { items }
    }

    /// Every item of `self` occurs, identical, in `other`.
    pub fn is_subset(&self, other: &ItemSet) -> bool {
        self.items
            .iter()
            .all(|it| other.get(it.id()).is_some_and(|o| o.same_data(it)))
    }

    pub fn with(&self, item: Item) -> Result<ItemSet> {
        let mut items = self.items.clone();
        items.push(item);
        ItemSet::try_from_items(items)
    }

    /// Items sorted by greedy priority.
    pub fn by_priority(&self) -> Vec<Item> {
        let mut v = self.items.clone();
        v.sort_by(priority_order);
        v
    }

    /// Sub-collection picked by a bitmask over the id-sorted items.
    pub fn subset_by_mask(&self, mask: u64) -> ItemSet {
        ItemSet {
            items: self
                .items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, it)| it.clone())
                .collect(),
        }
    }

    /// All subsets in canonical order; errors above `cap` items.
    pub fn subsets(&self, cap: usize) -> Result<Vec<ItemSet>> {
        if self.len() > cap || self.len() >= 63 {
            return Err(Error::TooLarge {
                count: self.len(),
                cap,
            });
        }
        let mut all: Vec<ItemSet> = (0..1u64 << self.len())
            .map(|m| self.subset_by_mask(m))
            .collect();
        all.sort();
        Ok(all)
    }

    /// Lexicographic comparison of the sorted id sequences.
    pub fn cmp_ids(&self, other: &ItemSet) -> Ordering {
        self.items
            .iter()
            .map(Item::id)
            .cmp(other.items.iter().map(Item::id))
    }
}

/// Canonical set order: fewer items first, then lexicographic id sequence.
impl Ord for ItemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.cmp_ids(other))
            .then_with(|| self.items.cmp(&other.items))
    }
}

impl PartialOrd for ItemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.ids().join(","))
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.items.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a ItemSet {
    type Item = &'a Item;
    type IntoIter = std::slice::Iter<'a, Item>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// What an agent may report, given her true set `X_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Model {
    /// Only `X_i` itself.
    Honest,
    /// Any subset of `X_i`.
    #[default]
    Understating,
    /// Any finite superset of `X_i`.
    Overstating,
    /// Any finite set of items she could own.
    Full,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Honest => "honest",
            Model::Understating => "understating",
            Model::Overstating => "overstating",
            Model::Full => "full",
        }
    }

    pub fn may_hide(self) -> bool {
        matches!(self, Model::Understating | Model::Full)
    }

    pub fn may_fake(self) -> bool {
        matches!(self, Model::Overstating | Model::Full)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "honest" => Ok(Model::Honest),
            "understating" => Ok(Model::Understating),
            "overstating" => Ok(Model::Overstating),
            "full" => Ok(Model::Full),
            other => Err(Error::param(format!(
                "unknown model {other:?} (expected honest, understating, overstating or full)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agent {
    pub model: Model,
    pub items: ItemSet,
}

/// A true profile `X` with capacity and per-agent manipulation models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    capacity: Rational,
    agents: Vec<Agent>,
}

fn check_item(item: &Item, agent: usize, capacity: &Rational, allow_zero: bool) -> Result<()> {
    if item.owner() != agent {
        return Err(Error::OwnerMismatch {
            item: item.id().into(),
            expected: agent,
            found: item.owner(),
        });
    }
    if !item.size().is_positive() || item.size() > capacity {
        return Err(Error::SizeOutOfRange {
            item: item.id().into(),
            size: Box::new(item.size().clone()),
            capacity: Box::new(capacity.clone()),
        });
    }
    if item.value().is_negative() || (!allow_zero && item.value().is_zero()) {
        return Err(Error::NonPositiveValue {
            item: item.id().into(),
            value: item.value().clone(),
        });
    }
    Ok(())
}

impl Instance {
    /// Validates ownership, ids, sizes and values. Agent `k` of the list is agent `k + 1`.
    pub fn new(capacity: Rational, agents: Vec<(Model, Vec<Item>)>) -> Result<Self> {
        Self::build(capacity, agents, false)
    }

    pub(crate) fn build(
        capacity: Rational,
        agents: Vec<(Model, Vec<Item>)>,
        allow_zero_values: bool,
    ) -> Result<Self> {
        if !capacity.is_positive() {
            return Err(Error::InvalidInstance(format!(
                "capacity must be positive, got {capacity}"
            )));
        }
        if agents.is_empty() {
            return Err(Error::InvalidInstance(
                "at least one agent is required".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::with_capacity(agents.len());
        for (k, (model, items)) in agents.into_iter().enumerate() {
            for it in &items {
                check_item(it, k + 1, &capacity, allow_zero_values)?;
                if !seen.insert(it.id().to_string()) {
                    return Err(Error::DuplicateId(it.id().into()));
                }
            }
            out.push(Agent {
                model,
                items: ItemSet::try_from_items(items)?,
            });
        }
        Ok(Instance {
            capacity,
            agents: out,
        })
    }

    pub fn capacity(&self) -> &Rational {
        &self.capacity
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    /// True set of agent `i` (1-based).
    pub fn true_set(&self, agent: usize) -> &ItemSet {
        &self.agents[agent - 1].items
    }

    pub fn model(&self, agent: usize) -> Model {
        self.agents[agent - 1].model
    }

    pub fn with_models(&self, model: Model) -> Instance {
        let mut out = self.clone();
        for a in &mut out.agents {
            a.model = model;
        }
        out
    }

    pub fn with_model(&self, agent: usize, model: Model) -> Instance {
        let mut out = self.clone();
        out.agents[agent - 1].model = model;
        out
    }

    pub fn union(&self) -> ItemSet {
        self.truthful().union()
    }

    pub fn truthful(&self) -> ReportProfile {
        ReportProfile(self.agents.iter().map(|a| a.items.clone()).collect())
    }

    /// Divides every size by the capacity. Values are untouched; idempotent.
    pub fn normalized(&self) -> Instance {
        if self.capacity == Rational::one() {
            return self.clone();
        }
        let c = &self.capacity;
        Instance {
            capacity: Rational::one(),
            agents: self
                .agents
                .iter()
                .map(|a| Agent {
                    model: a.model,
                    items: ItemSet::from_items(a.items.iter().map(|it| {
                        Item::new(it.id(), it.owner(), it.value().clone(), it.size() / c)
                    })),
                })
                .collect(),
        }
    }

    /// Social welfare of a distribution: expected value of the chosen true items.
    pub fn welfare(&self, dist: &OutcomeDistribution) -> Rational {
        (1..=self.n())
            .map(|i| expected_utility(self.true_set(i), dist))
            .sum()
    }
}

/// One reported set per agent (index `k` holds agent `k + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReportProfile(pub Vec<ItemSet>);

impl ReportProfile {
    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn report(&self, agent: usize) -> &ItemSet {
        &self.0[agent - 1]
    }

    pub fn with_report(&self, agent: usize, report: ItemSet) -> ReportProfile {
        let mut out = self.clone();
        out.0[agent - 1] = report;
        out
    }

    pub fn union(&self) -> ItemSet {
        let mut items: Vec<Item> = self.0.iter().flat_map(|s| s.iter().cloned()).collect();
        items.sort_by(|a, b| a.id().cmp(b.id()));
        items.dedup_by(|a, b| a.id() == b.id());
        ItemSet::from_items(items)
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelCheck {
    Pass,
    Violation {
        agent: usize,
        item: String,
        reason: String,
    },
}

/// Checks that every report respects its agent's model. Structural problems (ids, owners,
/// sizes) are errors; a model breach is reported as the first [`ModelCheck::Violation`].
pub fn validate(instance: &Instance, reports: &ReportProfile) -> Result<ModelCheck> {
    if reports.n() != instance.n() {
        return Err(Error::InvalidInstance(format!(
            "{} reports for {} agents",
            reports.n(),
            instance.n()
        )));
    }
    let truth = instance.union();
    let mut seen = std::collections::BTreeSet::new();
    for (k, report) in reports.0.iter().enumerate() {
        for it in report {
            check_item(it, k + 1, instance.capacity(), false)?;
            if !seen.insert(it.id()) {
                return Err(Error::DuplicateId(it.id().into()));
            }
            if let Some(t) = truth.get(it.id()) {
                if !t.same_data(it) {
                    return Err(Error::DuplicateId(it.id().into()));
                }
            }
        }
    }
    for i in 1..=instance.n() {
        let x = instance.true_set(i);
        let rep = reports.report(i);
        let model = instance.model(i);
        let extra = rep.iter().find(|it| !x.contains_id(it.id()));
        let missing = x.iter().find(|it| !rep.contains_id(it.id()));
        let breach = match model {
            Model::Honest => extra
                .map(|it| (it, "honest agent reported an item she does not own"))
                .or(missing.map(|it| (it, "honest agent hid an item"))),
            Model::Understating => {
                extra.map(|it| (it, "understating agent reported an item she does not own"))
            }
            Model::Overstating => missing.map(|it| (it, "overstating agent hid an item")),
            Model::Full => None,
        };
        if let Some((it, reason)) = breach {
            return Ok(ModelCheck::Violation {
                agent: i,
                item: it.id().into(),
                reason: reason.into(),
            });
        }
    }
    Ok(ModelCheck::Pass)
}

/// `u(X_i, S) = v(X_i ∩ S)`.
pub fn agent_utility(true_set: &ItemSet, outcome: &ItemSet) -> Rational {
    true_set.value_within(outcome)
}

/// Exact expected utility of an agent under a distribution.
pub fn expected_utility(true_set: &ItemSet, dist: &OutcomeDistribution) -> Rational {
    dist.atoms()
        .iter()
        .map(|(s, p)| p * agent_utility(true_set, s))
        .sum()
}

/// A finite distribution over item sets: distinct atoms with positive probabilities summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeDistribution {
    atoms: Vec<(ItemSet, Rational)>,
}

impl OutcomeDistribution {
    pub fn certain(set: ItemSet) -> Self {
        OutcomeDistribution {
            atoms: vec![(set, Rational::one())],
        }
    }

    /// Merges repeated sets, drops zero-probability atoms and orders atoms by id sequence.
    pub fn new(atoms: impl IntoIterator<Item = (ItemSet, Rational)>) -> Result<Self> {
        let mut merged: BTreeMap<ItemSet, Rational> = BTreeMap::new();
        for (set, p) in atoms {
            if p.is_negative() {
                return Err(Error::Internal(format!(
                    "negative probability {p} on {set}"
                )));
            }
            *merged.entry(set).or_default() += p;
        }
        let mut atoms: Vec<_> = merged
            .into_iter()
            .filter(|(_, p)| p.is_positive())
            .collect();
        atoms.sort_by(|(a, _), (b, _)| a.cmp_ids(b).then_with(|| a.cmp(b)));
        let total: Rational = atoms.iter().map(|(_, p)| p).sum();
        if total != Rational::one() {
            return Err(Error::Internal(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(OutcomeDistribution { atoms })
    }

    /// Equal mixture of two outcomes.
    pub fn half_half(a: ItemSet, b: ItemSet) -> Self {
        Self::new([(a, Rational::half()), (b, Rational::half())]).expect("valid mixture")
    }

    pub fn atoms(&self) -> &[(ItemSet, Rational)] {
        &self.atoms
    }

    pub fn is_deterministic(&self) -> bool {
        self.atoms.len() == 1
    }

    /// Expected total value of the chosen items (fake ones included).
    pub fn expected_value(&self) -> Rational {
        self.atoms.iter().map(|(s, p)| p * s.value()).sum()
    }

    pub fn probability_of(&self, id: &str) -> Rational {
        self.atoms
            .iter()
            .filter(|(s, _)| s.contains_id(id))
            .map(|(_, p)| p)
            .sum()
    }

    /// Feasibility against a capacity and the reported items.
    pub fn check_feasible(&self, capacity: &Rational, reports: &ReportProfile) -> Result<()> {
        let available = reports.union();
        for (set, _) in &self.atoms {
            if &set.size() > capacity {
                return Err(Error::Internal(format!(
                    "atom {set} exceeds capacity {capacity}"
                )));
            }
            if !set.is_subset(&available) {
                return Err(Error::Internal(format!("atom {set} uses unreported items")));
            }
        }
        Ok(())
    }

    /// Draws one atom using a uniform variate in `[0, 1)`. For demonstrations only.
    pub fn sample_with(&self, u: f64) -> &ItemSet {
        let mut acc = 0.0;
        for (set, p) in &self.atoms {
            acc += p.to_f64();
            if u < acc {
                return set;
            }
        }
        &self.atoms.last().expect("non-empty distribution").0
    }
}

impl fmt::Display for OutcomeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(|(s, p)| format!("{s}:{p}")).collect();
        f.write_str(&parts.join(", "))
    }
}
