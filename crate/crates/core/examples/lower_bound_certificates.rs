//! Exact evaluation of the lower-bound constructions.

use strategic_knapsack::lab::{eval_certificate, CertParams, Family};
use strategic_knapsack::{r, Result};

pub fn run() -> Result<()> {
    let cases = [
        (Family::OverstateRand, CertParams::new(r(3, 2)).with_m(100)),
        (Family::OverstateRand, CertParams::new(r(2, 1)).with_m(100)),
        (Family::OverstateDet, CertParams::new(r(5, 1)).with_m(12)),
        (
            Family::UnderstateDet,
            CertParams::new(r(8, 5)).with_eps(r(1, 1000)),
        ),
        (Family::UnderstateRand, CertParams::new(r(27, 25))),
        (Family::KqusRand, CertParams::new(r(9, 5)).with_m(100)),
        (Family::KqusRand, CertParams::new(r(2, 1)).with_m(100)),
        (Family::KqusDet, CertParams::new(r(10, 1)).with_m(100)),
    ];
    for (family, params) in cases {
        let c = eval_certificate(family, &params)?;
        let shown: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("{family:<6} {:<18} {}", shown.join(" "), c.verdict);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
