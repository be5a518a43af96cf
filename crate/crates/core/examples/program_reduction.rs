//! The equal-utility program, solved by pair enumeration, and the knapsack reduction into it.

use strategic_knapsack::program::{check_reduction, solve_program, ProgramInstance};
use strategic_knapsack::{r, Item, ItemSet, Result};

pub fn run() -> Result<()> {
    let program = ProgramInstance::new(
        ItemSet::try_from_items([Item::new("a", 1, r(1, 1), r(1, 1))])?,
        ItemSet::try_from_items([Item::new("b", 2, r(1, 1), r(1, 1))])?,
        r(1, 1),
    )?;
    let sol = solve_program(&program)?;
    println!("program: {} objective {}", sol.distribution, sol.objective);

    let knapsack = ItemSet::try_from_items([
        Item::new("x", 1, r(2, 1), r(3, 10)),
        Item::new("y", 1, r(1, 1), r(1, 5)),
        Item::new("z", 1, r(2, 1), r(1, 4)),
    ])?;
    for k in [r(3, 1), r(4, 1), r(5, 1)] {
        let c = check_reduction(&knapsack, &k)?;
        println!(
            "k = {k}: knapsack optimum {} (>= k: {}), program {} (= 2k: {})",
            c.knapsack_optimum, c.knapsack_reaches_k, c.program_objective, c.program_reaches_2k
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
