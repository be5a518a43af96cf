//! PACIFY-THE-LIAR: deterministic mechanism for a single manipulative agent (agent 1).

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::knapsack::opt_knapsack;
use crate::model::{ItemSet, ReportProfile};
use crate::program::{enumerate_feasible_sets, DEFAULT_SET_CAP};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacifyBranch {
    /// Agent 1's own optimum.
    LiarOptimum,
    /// The optimum of everyone else.
    OthersOptimum,
    /// Agent 1's favourite among the sets worth more than `alpha · v(Z_2)`.
    Pacified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacifyOutcome {
    pub branch: PacifyBranch,
    pub chosen: ItemSet,
}

pub(crate) fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha < &Rational::one() {
        return Err(Error::param(format!(
            "PACIFY-THE-LIAR needs alpha >= 1, got {alpha}"
        )));
    }
    Ok(())
}

pub fn pacify_detailed(
    reports: &ReportProfile,
    capacity: &Rational,
    alpha: &Rational,
) -> Result<PacifyOutcome> {
    check_alpha(alpha)?;
    let liar = reports.report(1);
    let others = ReportProfile(reports.0[1..].to_vec()).union();
    let z1 = opt_knapsack(liar, capacity)?;
    let z2 = opt_knapsack(&others, capacity)?;
    if alpha * &z1.value >= &z1.value + &z2.value {
        return Ok(PacifyOutcome {
            branch: PacifyBranch::LiarOptimum,
            chosen: z1.chosen,
        });
    }
    let everything = reports.union();
    let joint = opt_knapsack(&everything, capacity)?;
    if alpha * &z2.value >= joint.value {
        return Ok(PacifyOutcome {
            branch: PacifyBranch::OthersOptimum,
            chosen: z2.chosen,
        });
    }
    let threshold = alpha * &z2.value;
    // (v(A ∩ R_1), v(A)) maximal; canonical id order among exact ties.
    let mut best: Option<(Rational, Rational, ItemSet)> = None;
    for set in enumerate_feasible_sets(&everything, capacity, DEFAULT_SET_CAP)? {
        let value = set.value();
        if value <= threshold {
            continue;
        }
        let own = liar.value_within(&set);
        let better = match &best {
            None => true,
            Some((bo, bv, bs)) => {
                own.cmp(bo)
                    .then_with(|| value.cmp(bv))
                    .then_with(|| bs.cmp_ids(&set))
                    == Ordering::Greater
            }
        };
        if better {
            best = Some((own, value, set));
        }
    }
    match best {
        Some((_, _, chosen)) => Ok(PacifyOutcome {
            branch: PacifyBranch::Pacified,
            chosen,
        }),
        None => Err(Error::Internal(
            "no set beats alpha times the others' optimum after option 2 failed".into(),
        )),
    }
}

/// PACIFY-THE-LIAR with parameter `alpha ≥ 1`.
pub fn run_pacify_the_liar(
    reports: &ReportProfile,
    capacity: &Rational,
    alpha: &Rational,
) -> Result<ItemSet> {
    Ok(pacify_detailed(reports, capacity, alpha)?.chosen)
}
