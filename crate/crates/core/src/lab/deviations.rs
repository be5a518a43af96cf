use std::collections::BTreeSet;

use crate::error::Result;
use crate::model::{Instance, Item, ItemSet, Model};
use crate::rational::Rational;

/// Default cap on `|X_i|` for exhaustive subset enumeration.
pub const DEFAULT_SUBSET_CAP: usize = 16;

/// Finite pool of fake items offered to overstating and full-model agents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolConfig {
    /// Fake values; `None` means every value in the instance plus one above the maximum.
    pub values: Option<Vec<Rational>>,
    /// Fake sizes; `None` means every size in the instance plus `C - s(X_i)` and `C`.
    pub sizes: Option<Vec<Rational>>,
    /// Largest number of fake items added to a single report.
    pub budget: usize,
    pub subset_cap: usize,
}

impl Default for PoolConfig {
    fn default() -> Self {
        PoolConfig {
            values: None,
            sizes: None,
            budget: 2,
            subset_cap: DEFAULT_SUBSET_CAP,
        }
    }
}

/// Reports available to one agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviations {
    pub reports: Vec<ItemSet>,
    /// True when `reports` is the agent's entire report space.
    pub complete: bool,
}

/// Fake item `k` (1-based) of `agent`. The `~` prefix sorts after ordinary ids.
pub fn fake_id(agent: usize, k: usize) -> String {
    format!("~f{agent}.{k}")
}

/// `(value, size)` templates, ordered by value then size.
pub fn fake_templates(
    instance: &Instance,
    agent: usize,
    config: &PoolConfig,
) -> Vec<(Rational, Rational)> {
    let union = instance.union();
    let cap = instance.capacity();
    let values: BTreeSet<Rational> = match &config.values {
        Some(v) => v.iter().filter(|x| x.is_positive()).cloned().collect(),
        None => {
            let mut v: BTreeSet<Rational> = union.iter().map(|it| it.value().clone()).collect();
            let top = v.last().cloned().unwrap_or_else(Rational::zero);
            v.insert(top + Rational::one());
            v.retain(|x| x.is_positive());
            v
        }
    };
    let sizes: BTreeSet<Rational> = match &config.sizes {
        Some(s) => s.iter().cloned().collect(),
        None => {
            let mut s: BTreeSet<Rational> = union.iter().map(|it| it.size().clone()).collect();
            s.insert(cap - instance.true_set(agent).size());
            s.insert(cap.clone());
            s
        }
    };
    let sizes: Vec<Rational> = sizes
        .into_iter()
        .filter(|s| s.is_positive() && s <= cap)
        .collect();
    values
        .iter()
        .flat_map(|v| sizes.iter().map(move |s| (v.clone(), s.clone())))
        .collect()
}

/// Multisets of at most `budget` templates, smaller ones first.
fn fake_sets(agent: usize, templates: &[(Rational, Rational)], budget: usize) -> Vec<Vec<Item>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..budget {
        let mut next = Vec::new();
        for combo in &layer {
            let start = combo.last().copied().unwrap_or(0);
            for t in start..templates.len() {
                let mut c = combo.clone();
                c.push(t);
                next.push(c);
            }
        }
        for combo in &next {
            out.push(
                combo
                    .iter()
                    .enumerate()
                    .map(|(k, &t)| {
                        let (v, s) = &templates[t];
                        Item::new(fake_id(agent, k + 1), agent, v.clone(), s.clone())
                    })
                    .collect(),
            );
        }
        layer = next;
    }
    out
}

/// Every report `agent` may make under its manipulation model, truthful report included.
pub fn enumerate_deviations(
    instance: &Instance,
    agent: usize,
    config: &PoolConfig,
) -> Result<Deviations> {
    let truth = instance.true_set(agent);
    let model = instance.model(agent);
    let bases = if model.may_hide() {
        truth.subsets(config.subset_cap)?
    } else {
        vec![truth.clone()]
    };
    if !model.may_fake() {
        return Ok(Deviations {
            reports: bases,
            complete: true,
        });
    }
    let templates = fake_templates(instance, agent, config);
    let fakes = fake_sets(agent, &templates, config.budget);
    let mut reports = Vec::with_capacity(bases.len() * fakes.len());
    for base in &bases {
        for f in &fakes {
            let mut items: Vec<Item> = base.iter().cloned().collect();
            items.extend(f.iter().cloned());
            reports.push(ItemSet::try_from_items(items)?);
        }
    }
    Ok(Deviations {
        reports,
        complete: false,
    })
}

/// Agent `agent`'s deviation space with a different model than the instance records.
pub fn enumerate_deviations_as(
    instance: &Instance,
    agent: usize,
    model: Model,
    config: &PoolConfig,
) -> Result<Deviations> {
    enumerate_deviations(&instance.with_model(agent, model), agent, config)
}
