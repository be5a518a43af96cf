use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mechanisms::{run_modified_half_greedy, run_next, KqusInstance, MechanismId};
use crate::model::{expected_utility, Instance, ItemSet, OutcomeDistribution};
use crate::rational::Rational;

use super::deviations::{enumerate_deviations, PoolConfig};

/// What the deviating agent reported instead of the truth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deviation {
    Report(ItemSet),
    Size(Rational),
}

impl fmt::Display for Deviation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Deviation::Report(set) => {
                let parts: Vec<String> = set
                    .iter()
                    .map(|it| format!("{}:({},{})", it.id(), it.value(), it.size()))
                    .collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            Deviation::Size(s) => write!(f, "size {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub agent: usize,
    pub deviation: Deviation,
    pub truthful_utility: Rational,
    pub deviating_utility: Rational,
    pub gain: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditStatus {
    NoViolationFound,
    Violation(Box<Witness>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditVerdict {
    pub status: AuditStatus,
    /// True when every possible report was tried, so `NoViolationFound` is a proof.
    pub complete: bool,
    pub deviations_checked: usize,
}

impl AuditVerdict {
    pub fn witness(&self) -> Option<&Witness> {
        match &self.status {
            AuditStatus::Violation(w) => Some(w),
            AuditStatus::NoViolationFound => None,
        }
    }

    pub fn is_violation(&self) -> bool {
        self.witness().is_some()
    }
}

#[derive(Debug, Clone, Default)]
pub struct AuditOptions {
    pub pool: PoolConfig,
    /// Restrict deviations to these agents (1-based); all agents when `None`.
    pub agents: Option<Vec<usize>>,
    /// Worker threads; 0 or 1 runs sequentially.
    pub jobs: usize,
}

struct Candidate {
    agent: usize,
    index: usize,
    witness: Witness,
}

/// Larger gain wins; ties go to the smaller agent, then the earlier report.
fn better(a: &Candidate, b: &Candidate) -> Ordering {
    a.witness
        .gain
        .cmp(&b.witness.gain)
        .then_with(|| b.agent.cmp(&a.agent))
        .then_with(|| b.index.cmp(&a.index))
}

fn reduce(found: impl Iterator<Item = Candidate>) -> Option<Witness> {
    found.max_by(better).map(|c| c.witness)
}

fn run_jobs<T: Send, F>(jobs: usize, tasks: Vec<T>, f: F) -> Result<Vec<Option<Candidate>>>
where
    F: Fn(T) -> Result<Option<Candidate>> + Sync + Send,
{
    if jobs <= 1 {
        return tasks.into_iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| tasks.into_par_iter().map(f).collect())
}

/// Tries every unilateral deviation with all other agents truthful.
pub fn audit_strategyproofness(
    mechanism: &MechanismId,
    instance: &Instance,
    options: &AuditOptions,
) -> Result<AuditVerdict> {
    let truth = instance.truthful();
    let capacity = instance.capacity();
    let truthful = mechanism.run(&truth, capacity)?;
    let agents: Vec<usize> = match &options.agents {
        Some(list) => {
            if let Some(&bad) = list.iter().find(|&&a| a == 0 || a > instance.n()) {
                return Err(Error::param(format!(
                    "no agent {bad} in a {}-agent instance",
                    instance.n()
                )));
            }
            list.clone()
        }
        None => (1..=instance.n()).collect(),
    };
    let mut tasks = Vec::new();
    let mut complete = true;
    for &agent in &agents {
        let devs = enumerate_deviations(instance, agent, &options.pool)?;
        complete &= devs.complete;
        let base = expected_utility(instance.true_set(agent), &truthful);
        for (index, report) in devs.reports.into_iter().enumerate() {
            tasks.push((agent, index, report, base.clone()));
        }
    }
    let checked = tasks.len();
    let results = run_jobs(options.jobs, tasks, |(agent, index, report, base)| {
        let dist = mechanism.run(&truth.with_report(agent, report.clone()), capacity)?;
        let u = expected_utility(instance.true_set(agent), &dist);
        Ok((u > base).then(|| Candidate {
            agent,
            index,
            witness: Witness {
                agent,
                deviation: Deviation::Report(report),
                gain: &u - &base,
                truthful_utility: base,
                deviating_utility: u,
            },
        }))
    })?;
    Ok(verdict(
        reduce(results.into_iter().flatten()),
        complete,
        checked,
    ))
}

fn verdict(witness: Option<Witness>, complete: bool, checked: usize) -> AuditVerdict {
    AuditVerdict {
        status: witness.map_or(AuditStatus::NoViolationFound, |w| {
            AuditStatus::Violation(Box::new(w))
        }),
        complete,
        deviations_checked: checked,
    }
}

/// Mechanisms available in the known-ratio, private-size setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KqusMechanism {
    Next,
    ModifiedHalfGreedy,
}

impl KqusMechanism {
    pub fn run(self, kqus: &KqusInstance, sizes: &[Rational]) -> Result<OutcomeDistribution> {
        match self {
            KqusMechanism::Next => Ok(OutcomeDistribution::certain(run_next(kqus, sizes)?)),
            KqusMechanism::ModifiedHalfGreedy => run_modified_half_greedy(kqus, sizes),
        }
    }

    pub fn from_mechanism(id: &MechanismId) -> Result<Self> {
        match id {
            MechanismId::Next => Ok(KqusMechanism::Next),
            MechanismId::ModifiedHalfGreedy => Ok(KqusMechanism::ModifiedHalfGreedy),
            other => Err(Error::param(format!(
                "{} is not defined on size reports; use next or modified-half-greedy",
                other.name()
            ))),
        }
    }
}

/// Default grid resolution for size audits.
pub const DEFAULT_SIZE_GRID: u32 = 20;

/// The true size plus `k·C/D` for `k = 1..=D`, ascending.
pub fn size_grid(kqus: &KqusInstance, agent: usize, d: u32) -> Vec<Rational> {
    let c = kqus.capacity();
    let mut grid: Vec<Rational> = (1..=d as i64)
        .map(|k| c * Rational::new(k, d as i64))
        .collect();
    grid.push(kqus.agents()[agent - 1].size.clone());
    grid.sort();
    grid.dedup();
    grid
}

/// Expected true value agent `agent` receives.
pub fn kqus_utility(kqus: &KqusInstance, agent: usize, dist: &OutcomeDistribution) -> Rational {
    let a = &kqus.agents()[agent - 1];
    dist.probability_of(&a.id) * a.value()
}

/// Size-misreport audit over a grid. Always refutation-only.
pub fn audit_kqus(
    mechanism: KqusMechanism,
    kqus: &KqusInstance,
    d: u32,
    jobs: usize,
) -> Result<AuditVerdict> {
    if d == 0 {
        return Err(Error::param("grid resolution must be positive"));
    }
    let truth = kqus.true_sizes();
    let truthful = mechanism.run(kqus, &truth)?;
    let mut tasks = Vec::new();
    for agent in 1..=kqus.n() {
        let base = kqus_utility(kqus, agent, &truthful);
        for (index, s) in size_grid(kqus, agent, d).into_iter().enumerate() {
            tasks.push((agent, index, s, base.clone()));
        }
    }
    let checked = tasks.len();
    let results = run_jobs(jobs, tasks, |(agent, index, s, base)| {
        let mut sizes = truth.clone();
        sizes[agent - 1] = s.clone();
        let u = kqus_utility(kqus, agent, &mechanism.run(kqus, &sizes)?);
        Ok((u > base).then(|| Candidate {
            agent,
            index,
            witness: Witness {
                agent,
                deviation: Deviation::Size(s),
                gain: &u - &base,
                truthful_utility: base,
                deviating_utility: u,
            },
        }))
    })?;
    Ok(verdict(
        reduce(results.into_iter().flatten()),
        false,
        checked,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Item, Model};
    use crate::rational::r;

    fn example1_instance1(model: Model) -> Instance {
        Instance::new(
            r(1, 1),
            vec![
                (model, vec![Item::new("a", 1, r(3, 4), r(1, 2))]),
                (
                    model,
                    vec![
                        Item::new("c", 2, r(3, 4), r(1, 2)),
                        Item::new("d", 2, r(1, 1), r(1, 1)),
                    ],
                ),
            ],
        )
        .unwrap()
    }

    #[test]
    fn optimal_mechanism_rewards_hiding() {
        let v = audit_strategyproofness(
            &MechanismId::Optimal,
            &example1_instance1(Model::Understating),
            &AuditOptions::default(),
        )
        .unwrap();
        assert!(v.complete);
        let w = v.witness().unwrap();
        assert_eq!(w.agent, 2);
        assert_eq!(
            w.deviation,
            Deviation::Report(ItemSet::from_items([Item::new("d", 2, r(1, 1), r(1, 1))]))
        );
        assert_eq!(
            (w.truthful_utility.clone(), w.gain.clone()),
            (r(3, 4), r(1, 4))
        );
    }

    #[test]
    fn parallel_matches_sequential() {
        let inst = example1_instance1(Model::Full);
        let seq = audit_strategyproofness(&MechanismId::Optimal, &inst, &AuditOptions::default())
            .unwrap();
        let par = audit_strategyproofness(
            &MechanismId::Optimal,
            &inst,
            &AuditOptions {
                jobs: 4,
                ..AuditOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
        assert!(!seq.complete);
    }

    #[test]
    fn half_greedy_overstating_is_clean() {
        let v = audit_strategyproofness(
            &MechanismId::HalfGreedy,
            &example1_instance1(Model::Overstating),
            &AuditOptions::default(),
        )
        .unwrap();
        assert_eq!(v.status, AuditStatus::NoViolationFound);
        assert!(!v.complete);
    }

    #[test]
    fn bad_agent_index() {
        let opts = AuditOptions {
            agents: Some(vec![3]),
            ..AuditOptions::default()
        };
        assert!(audit_strategyproofness(
            &MechanismId::Greedy,
            &example1_instance1(Model::Honest),
            &opts
        )
        .is_err());
    }

    #[test]
    fn kqus_grid_audits() {
        let k = KqusInstance::new(
            r(1, 1),
            vec![(r(3, 1), r(1, 2)), (r(2, 1), r(1, 2)), (r(1, 1), r(1, 2))],
        )
        .unwrap();
        let v = audit_kqus(KqusMechanism::ModifiedHalfGreedy, &k, 20, 1).unwrap();
        assert_eq!(v.status, AuditStatus::NoViolationFound);
        assert_eq!(v.deviations_checked, 60);
        let thm =
            KqusInstance::new(r(1, 1), vec![(r(100, 1), r(1, 10000)), (r(1, 1), r(1, 1))]).unwrap();
        assert_eq!(
            size_grid(&thm, 1, 4),
            [r(1, 10000), r(1, 4), r(1, 2), r(3, 4), r(1, 1)]
        );
    }
}
