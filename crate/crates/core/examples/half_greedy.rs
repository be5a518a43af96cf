//! GREEDY, MAXIMUM-VALUE and their mixture on a small two-agent profile.

use strategic_knapsack::catalog;
use strategic_knapsack::lab::approx_ratio;
use strategic_knapsack::mechanisms::{greedy_trace, MechanismId};
use strategic_knapsack::Result;

pub fn run() -> Result<()> {
    let inst = catalog::example1_instance1();
    let truth = inst.truthful();
    let trace = greedy_trace(&inst.union(), inst.capacity());
    println!(
        "greedy prefix {} stops at {:?}",
        trace.prefix,
        trace.cutoff.as_ref().map(|it| it.id())
    );
    for mech in [
        MechanismId::Greedy,
        MechanismId::MaxValue,
        MechanismId::HalfGreedy,
        MechanismId::BadGreedy,
    ] {
        let dist = mech.run(&truth, inst.capacity())?;
        println!(
            "{:<12} {:<22} welfare {:<4} ratio {}",
            mech.name(),
            dist.to_string(),
            inst.welfare(&dist),
            approx_ratio(&mech, &inst)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
