//! Catalog instances, the TOML document format, and seeded random instances.

use std::collections::BTreeMap;

use strategic_knapsack::catalog::{self, RandomSpec};
use strategic_knapsack::workbench::{parse_document, serialize, serialize_instance};
use strategic_knapsack::Result;

pub fn run() -> Result<()> {
    let params = BTreeMap::from([("M".to_string(), "4".to_string())]);
    let built = catalog::build("example3.nash-fake", &params)?;
    let text = serialize(&built);
    print!("{text}");
    assert_eq!(parse_document(&text)?, built);

    let random = catalog::random_instance(1, &RandomSpec::new(2, 3))?;
    print!("\n# seed 1\n{}", serialize_instance(&random));

    match parse_document(
        "capacity = \"1\"\n[[agents]]\nitems = [{ id = \"a\", value = \"0.75\", size = \"1\" }]\n",
    ) {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nrejected: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
