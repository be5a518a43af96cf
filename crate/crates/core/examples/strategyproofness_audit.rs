//! Searching for profitable misreports: hiding items, faking items, and a clean audit.

use strategic_knapsack::catalog;
use strategic_knapsack::lab::{audit_strategyproofness, AuditOptions};
use strategic_knapsack::mechanisms::MechanismId;
use strategic_knapsack::{Model, Result};

fn show(label: &str, mech: &MechanismId, inst: &strategic_knapsack::Instance) -> Result<()> {
    let v = audit_strategyproofness(mech, inst, &AuditOptions::default())?;
    let coverage = if v.complete {
        "exhaustive"
    } else {
        "refutation-only"
    };
    match v.witness() {
        Some(w) => println!(
            "{label}: agent {} reports {} and gains {} ({} -> {}) [{coverage}]",
            w.agent, w.deviation, w.gain, w.truthful_utility, w.deviating_utility
        ),
        None => println!(
            "{label}: no violation in {} deviations [{coverage}]",
            v.deviations_checked
        ),
    }
    Ok(())
}

pub fn run() -> Result<()> {
    // Always picking the optimum invites hiding ...
    show(
        "optimal, hiding",
        &MechanismId::Optimal,
        &catalog::example1_instance1(),
    )?;
    // ... and faking.
    show(
        "optimal, faking",
        &MechanismId::Optimal,
        &catalog::example1_instance2(),
    )?;
    // Continuing past the first overflow lets a fake item reorder the scan.
    show(
        "bad-greedy",
        &MechanismId::BadGreedy,
        &catalog::example2_bad_greedy(),
    )?;
    // The greedy/max-value mixture withstands fake items.
    let over = catalog::footnote7(&strategic_knapsack::r(1, 100)).with_models(Model::Overstating);
    show("half-greedy, faking", &MechanismId::HalfGreedy, &over)?;
    // but not hiding.
    show(
        "half-greedy, hiding",
        &MechanismId::HalfGreedy,
        &catalog::footnote7(&strategic_knapsack::r(1, 100)),
    )?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
