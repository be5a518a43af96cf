//! EQUAL-UTILITY for two agents: own optimum when one side dominates, otherwise the
//! welfare-maximizing lottery that equalizes expected utilities.

use strategic_knapsack::catalog;
use strategic_knapsack::lab::approx_ratio;
use strategic_knapsack::mechanisms::{alpha_eu, equal_utility_detailed, MechanismId};
use strategic_knapsack::model::expected_utility;
use strategic_knapsack::{r, Result};

pub fn run() -> Result<()> {
    let alpha = alpha_eu();
    let mech = MechanismId::equal_utility(alpha.clone())?;
    for eps in [r(1, 10), r(1, 100), r(1, 10000)] {
        let inst = catalog::appendix_a1_default(&eps);
        let out = equal_utility_detailed(&inst.truthful(), inst.capacity(), &alpha)?;
        let u1 = expected_utility(inst.true_set(1), &out.distribution);
        let u2 = expected_utility(inst.true_set(2), &out.distribution);
        let ratio = approx_ratio(&mech, &inst)?;
        println!(
            "eps {eps:<7} {:?} u1 = u2: {} ratio ~ {:.6}",
            out.branch,
            u1 == u2,
            ratio.finite().map_or(f64::INFINITY, |x| x.to_f64())
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
