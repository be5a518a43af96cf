//! Pure Nash equilibria of the report game under HALF-GREEDY, and a fake report that
//! only hurts others.

use strategic_knapsack::catalog;
use strategic_knapsack::lab::{enumerate_pure_nash, fake_impact_witness, NashOptions};
use strategic_knapsack::mechanisms::MechanismId;
use strategic_knapsack::{r, Result};

pub fn run() -> Result<()> {
    for (name, inst) in [
        (
            "two single items",
            catalog::example1_instance2().with_models(strategic_knapsack::Model::Understating),
        ),
        ("no dominant strategies", catalog::footnote7(&r(1, 100))),
    ] {
        let rep = enumerate_pure_nash(&MechanismId::HalfGreedy, &inst, &NashOptions::default())?;
        println!(
            "{name}: {} profiles, {} equilibria, OPT {}",
            rep.profiles_checked,
            rep.equilibria.len(),
            rep.opt_welfare
        );
        for e in &rep.equilibria {
            let shown: Vec<String> = e.profile.0.iter().map(ToString::to_string).collect();
            println!(
                "  {}  welfare {}  ratio {}",
                shown.join(" | "),
                e.welfare,
                e.ratio
            );
        }
    }
    let inst = catalog::example3_nash_fake(10);
    if let Some(w) = fake_impact_witness(&inst, 1, &catalog::example3_fake_report(10))? {
        println!(
            "fake item changes agent {}'s {} pick from {} to {}",
            w.agent, w.branch, w.without_fakes, w.with_fakes
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
