//! One item per agent with a public value-to-size ratio and a private size.

use strategic_knapsack::lab::{audit_kqus, KqusMechanism};
use strategic_knapsack::mechanisms::{run_modified_half_greedy, KqusInstance};
use strategic_knapsack::{r, Result};

pub fn run() -> Result<()> {
    let k = KqusInstance::new(
        r(1, 1),
        vec![(r(3, 1), r(1, 2)), (r(2, 1), r(1, 2)), (r(1, 1), r(1, 2))],
    )?;
    let dist = run_modified_half_greedy(&k, &k.true_sizes())?;
    println!("modified-half-greedy: {dist}");
    for a in k.agents() {
        println!(
            "  {} chosen with probability {}",
            a.id,
            dist.probability_of(&a.id)
        );
    }
    for mech in [KqusMechanism::ModifiedHalfGreedy, KqusMechanism::Next] {
        let v = audit_kqus(mech, &k, 20, 1)?;
        println!("{mech:?}: violation found: {}", v.is_violation());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
