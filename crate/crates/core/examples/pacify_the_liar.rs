//! PACIFY-THE-LIAR with one manipulative agent, on the family whose ratio climbs toward φ.

use strategic_knapsack::catalog;
use strategic_knapsack::lab::{approx_ratio, audit_strategyproofness, AuditOptions};
use strategic_knapsack::mechanisms::{alpha_ptl, pacify_detailed, MechanismId};
use strategic_knapsack::{r, Result};

pub fn run() -> Result<()> {
    let alpha = alpha_ptl();
    let mech = MechanismId::pacify_the_liar(alpha.clone())?;
    let liar_only = AuditOptions {
        agents: Some(vec![1]),
        ..AuditOptions::default()
    };
    for eps in [r(1, 10), r(1, 100), r(1, 1000)] {
        let inst = catalog::thm7_understate_det(&eps, true);
        let out = pacify_detailed(&inst.truthful(), inst.capacity(), &alpha)?;
        let ratio = approx_ratio(&mech, &inst)?;
        let audit = audit_strategyproofness(&mech, &inst, &liar_only)?;
        println!(
            "eps {eps:<6} branch {:?} chosen {} ratio ~ {:.6} liar can gain: {}",
            out.branch,
            out.chosen,
            ratio.finite().map_or(f64::INFINITY, |x| x.to_f64()),
            audit.is_violation()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
