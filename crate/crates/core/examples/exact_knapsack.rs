//! Exact 0/1 knapsack with the canonical tie-break, checked against brute force.

use strategic_knapsack::knapsack::{brute_force_opt, opt_knapsack};
use strategic_knapsack::{r, Item, ItemSet, Result};

pub fn run() -> Result<()> {
    let items = ItemSet::try_from_items([
        Item::new("lamp", 1, r(3, 1), r(2, 5)),
        Item::new("book", 1, r(2, 1), r(1, 5)),
        Item::new("tent", 2, r(4, 1), r(3, 5)),
        Item::new("mug", 2, r(1, 1), r(1, 5)),
        Item::new("rope", 3, r(2, 1), r(1, 5)),
    ])?;
    let opt = opt_knapsack(&items, &r(1, 1))?;
    println!(
        "optimum {} value {} size {}",
        opt.chosen, opt.value, opt.size
    );
    assert_eq!(opt, brute_force_opt(&items, &r(1, 1))?);

    // Equal values: the lighter packing wins, then the smaller id sequence.
    let ties = ItemSet::try_from_items([
        Item::new("p", 1, r(1, 1), r(1, 2)),
        Item::new("q", 1, r(1, 1), r(1, 4)),
        Item::new("s", 1, r(1, 1), r(1, 4)),
    ])?;
    println!("tie-break picks {}", opt_knapsack(&ties, &r(3, 4))?.chosen);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
