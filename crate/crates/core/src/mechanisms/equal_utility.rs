//! EQUAL-UTILITY for two understating agents.

use crate::error::{Error, Result};
use crate::knapsack::opt_knapsack;
use crate::model::{OutcomeDistribution, ReportProfile};
use crate::program::{solve_program, ProgramInstance};
use crate::rational::Rational;

/// Which branch of the mechanism produced the outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqualUtilityBranch {
    /// One agent's own optimum was returned.
    OwnOptimum { agent: usize },
    /// The PROGRAM optimum was returned.
    Program,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualUtilityOutcome {
    pub branch: EqualUtilityBranch,
    pub distribution: OutcomeDistribution,
}

pub(crate) fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha < &Rational::one() || alpha >= &Rational::integer(2) {
        return Err(Error::param(format!(
            "EQUAL-UTILITY needs alpha in [1, 2), got {alpha}"
        )));
    }
    Ok(())
}

pub fn equal_utility_detailed(
    reports: &ReportProfile,
    capacity: &Rational,
    alpha: &Rational,
) -> Result<EqualUtilityOutcome> {
    check_alpha(alpha)?;
    if reports.n() != 2 {
        return Err(Error::AgentCount {
            mechanism: "equal-utility",
            expected: 2,
            found: reports.n(),
        });
    }
    let z1 = opt_knapsack(reports.report(1), capacity)?;
    let z2 = opt_knapsack(reports.report(2), capacity)?;
    let total = &z1.value + &z2.value;
    // With alpha < 2 at most one agent qualifies unless both optima are worthless (then Z_1 = ∅).
    for (agent, z) in [(1, &z1), (2, &z2)] {
        if alpha * &z.value >= total {
            return Ok(EqualUtilityOutcome {
                branch: EqualUtilityBranch::OwnOptimum { agent },
                distribution: OutcomeDistribution::certain(z.chosen.clone()),
            });
        }
    }
    let program = ProgramInstance::new(
        reports.report(1).clone(),
        reports.report(2).clone(),
        capacity.clone(),
    )?;
    Ok(EqualUtilityOutcome {
        branch: EqualUtilityBranch::Program,
        distribution: solve_program(&program)?.distribution,
    })
}

/// EQUAL-UTILITY with parameter `alpha ∈ [1, 2)`.
pub fn run_equal_utility(
    reports: &ReportProfile,
    capacity: &Rational,
    alpha: &Rational,
) -> Result<OutcomeDistribution> {
    Ok(equal_utility_detailed(reports, capacity, alpha)?.distribution)
}
