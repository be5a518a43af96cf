use std::fmt;

use crate::error::{Error, Result};
use crate::mechanisms::{run_greedy, run_max_value};
use crate::model::{Instance, ItemSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    MaxValue,
    Greedy,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::MaxValue => "max-value",
            Branch::Greedy => "greedy",
        })
    }
}

/// An agent whose chosen true items change when the fake part of a report is dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FakeImpact {
    pub agent: usize,
    pub branch: Branch,
    /// `X_j` ∩ outcome with the report as given.
    pub with_fakes: ItemSet,
    /// `X_j` ∩ outcome with only the genuine part of the report.
    pub without_fakes: ItemSet,
}

/// Looks for an agent `j` whose selected true items under HALF-GREEDY's GREEDY or
/// MAXIMUM-VALUE branch differ between `report` and `report ∩ X_i`, others truthful.
/// Such a witness shows the fake items in `report` can only hurt. Branches are checked
/// MAXIMUM-VALUE first, agents in ascending order.
pub fn fake_impact_witness(
    instance: &Instance,
    agent: usize,
    report: &ItemSet,
) -> Result<Option<FakeImpact>> {
    if agent == 0 || agent > instance.n() {
        return Err(Error::param(format!(
            "no agent {agent} in a {}-agent instance",
            instance.n()
        )));
    }
    let genuine = report.intersection(instance.true_set(agent));
    if genuine.len() == report.len() {
        return Ok(None);
    }
    let truth = instance.truthful();
    let with = truth.with_report(agent, report.clone());
    let without = truth.with_report(agent, genuine);
    let c = instance.capacity();
    let branches = [
        (
            Branch::MaxValue,
            run_max_value(&with, c),
            run_max_value(&without, c),
        ),
        (
            Branch::Greedy,
            run_greedy(&with, c),
            run_greedy(&without, c),
        ),
    ];
    for (branch, a, b) in branches {
        for j in 1..=instance.n() {
            let x = instance.true_set(j);
            let (wa, wb) = (x.intersection(&a), x.intersection(&b));
            if wa != wb {
                return Ok(Some(FakeImpact {
                    agent: j,
                    branch,
                    with_fakes: wa,
                    without_fakes: wb,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{example3_fake_report, example3_nash_fake};

    #[test]
    fn example_three_fake_starves_b() {
        let inst = example3_nash_fake(10);
        let w = fake_impact_witness(&inst, 1, &example3_fake_report(10))
            .unwrap()
            .unwrap();
        assert_eq!((w.agent, w.branch), (2, Branch::MaxValue));
        assert!(w.with_fakes.is_empty());
        assert_eq!(w.without_fakes.ids(), ["b"]);
    }

    #[test]
    fn genuine_reports_have_no_witness() {
        let inst = example3_nash_fake(10);
        assert_eq!(
            fake_impact_witness(&inst, 1, inst.true_set(1)).unwrap(),
            None
        );
        assert_eq!(
            fake_impact_witness(&inst, 1, &ItemSet::empty()).unwrap(),
            None
        );
        assert!(fake_impact_witness(&inst, 3, &ItemSet::empty()).is_err());
    }
}
