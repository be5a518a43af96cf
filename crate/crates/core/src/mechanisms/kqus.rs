//! Known-quality, unknown-size setting: one item per agent, public value-to-size ratio,
//! privately known size. Agents report sizes; the value of a report is `ratio · size`.

use crate::error::{Error, Result};
use crate::model::{Instance, Item, ItemSet, Model, OutcomeDistribution, ReportProfile};
use crate::rational::Rational;

use super::greedy::{run_modified_half_greedy_on, run_next_on};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KqusAgent {
    pub id: String,
    pub ratio: Rational,
    pub size: Rational,
}

impl KqusAgent {
    pub fn value(&self) -> Rational {
        &self.ratio * &self.size
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KqusInstance {
    capacity: Rational,
    agents: Vec<KqusAgent>,
}

impl KqusInstance {
    /// Agents get item ids `a1, a2, …`.
    pub fn new(capacity: Rational, agents: Vec<(Rational, Rational)>) -> Result<Self> {
        let named = agents
            .into_iter()
            .enumerate()
            .map(|(k, (ratio, size))| KqusAgent {
                id: format!("a{}", k + 1),
                ratio,
                size,
            })
            .collect();
        Self::with_agents(capacity, named)
    }

    pub fn with_agents(capacity: Rational, agents: Vec<KqusAgent>) -> Result<Self> {
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
        let inst = KqusInstance { capacity, agents };
        for a in &inst.agents {
            if a.ratio.is_negative() {
                return Err(Error::InvalidInstance(format!(
                    "item {:?} has negative ratio",
                    a.id
                )));
            }
            inst.check_size(&a.id, &a.size)?;
        }
        let mut ids: Vec<&str> = inst.agents.iter().map(|a| a.id.as_str()).collect();
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateId(w[0].into()));
        }
        Ok(inst)
    }

    fn check_size(&self, id: &str, size: &Rational) -> Result<()> {
        if !size.is_positive() || size > &self.capacity {
            return Err(Error::SizeOutOfRange {
                item: id.into(),
                size: Box::new(size.clone()),
                capacity: Box::new(self.capacity.clone()),
            });
        }
        Ok(())
    }

    pub fn capacity(&self) -> &Rational {
        &self.capacity
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn agents(&self) -> &[KqusAgent] {
        &self.agents
    }

    pub fn true_sizes(&self) -> Vec<Rational> {
        self.agents.iter().map(|a| a.size.clone()).collect()
    }

    /// Copy with agent `i`'s true size replaced.
    pub fn with_size(&self, agent: usize, size: Rational) -> Result<Self> {
        let mut out = self.clone();
        self.check_size(&self.agents[agent - 1].id, &size)?;
        out.agents[agent - 1].size = size;
        Ok(out)
    }

    /// The true profile as an ordinary instance (zero values allowed, everyone honest).
    pub fn as_instance(&self) -> Instance {
        let agents = self
            .agents
            .iter()
            .enumerate()
            .map(|(k, a)| {
                (
                    Model::Honest,
                    vec![Item::new(a.id.clone(), k + 1, a.value(), a.size.clone())],
                )
            })
            .collect();
        Instance::build(self.capacity.clone(), agents, true).expect("validated on construction")
    }

    /// The items the mechanism sees when agents report `sizes`.
    pub fn reports(&self, sizes: &[Rational]) -> Result<ReportProfile> {
        if sizes.len() != self.n() {
            return Err(Error::InvalidInstance(format!(
                "{} size reports for {} agents",
                sizes.len(),
                self.n()
            )));
        }
        let mut sets = Vec::with_capacity(self.n());
        for (k, (a, s)) in self.agents.iter().zip(sizes).enumerate() {
            self.check_size(&a.id, s)?;
            let item = Item::new(a.id.clone(), k + 1, &a.ratio * s, s.clone());
            sets.push(ItemSet::from_items([item]));
        }
        Ok(ReportProfile(sets))
    }
}

/// NEXT on reported sizes.
pub fn run_next(kqus: &KqusInstance, sizes: &[Rational]) -> Result<ItemSet> {
    Ok(run_next_on(&kqus.reports(sizes)?, kqus.capacity()))
}

/// MODIFIED-HALF-GREEDY on reported sizes.
pub fn run_modified_half_greedy(
    kqus: &KqusInstance,
    sizes: &[Rational],
) -> Result<OutcomeDistribution> {
    Ok(run_modified_half_greedy_on(
        &kqus.reports(sizes)?,
        kqus.capacity(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knapsack::opt_knapsack;
    use crate::rational::r;

    fn three() -> KqusInstance {
        KqusInstance::new(
            r(1, 1),
            vec![(r(3, 1), r(1, 2)), (r(2, 1), r(1, 2)), (r(1, 1), r(1, 2))],
        )
        .unwrap()
    }

    #[test]
    fn next_picks_the_cutoff() {
        let k = three();
        assert_eq!(run_next(&k, &k.true_sizes()).unwrap().ids(), ["a3"]);
        let fits =
            KqusInstance::new(r(1, 1), vec![(r(1, 1), r(1, 2)), (r(5, 1), r(1, 4))]).unwrap();
        assert!(run_next(&fits, &fits.true_sizes()).unwrap().is_empty());
        let thm =
            KqusInstance::new(r(1, 1), vec![(r(100, 1), r(1, 1)), (r(1, 1), r(1, 1))]).unwrap();
        assert_eq!(run_next(&thm, &thm.true_sizes()).unwrap().ids(), ["a2"]);
    }

    #[test]
    fn modified_half_greedy_mixture() {
        let k = three();
        let d = run_modified_half_greedy(&k, &k.true_sizes()).unwrap();
        assert_eq!(d.to_string(), "{a1,a2}:1/2, {a3}:1/2");
        let inst = k.as_instance();
        assert_eq!(inst.welfare(&d), r(3, 2));
        let opt = opt_knapsack(&inst.union(), inst.capacity()).unwrap().value;
        assert_eq!(opt / inst.welfare(&d), r(5, 3));
        for a in k.agents() {
            let p = d.probability_of(&a.id);
            assert!(p == r(1, 2) || p.is_zero());
        }
    }

    #[test]
    fn all_fit_splits_with_empty_set() {
        let k = KqusInstance::new(r(1, 1), vec![(r(1, 1), r(1, 2)), (r(2, 1), r(1, 4))]).unwrap();
        let d = run_modified_half_greedy(&k, &k.true_sizes()).unwrap();
        assert_eq!(d.to_string(), "{}:1/2, {a1,a2}:1/2");
    }

    #[test]
    fn sizes_validated() {
        let k = three();
        assert!(k.reports(&[r(1, 2), r(3, 2), r(1, 2)]).is_err());
        assert!(k.reports(&[r(1, 2)]).is_err());
        assert!(KqusInstance::new(r(1, 1), vec![(r(-1, 1), r(1, 2))]).is_err());
    }
}
