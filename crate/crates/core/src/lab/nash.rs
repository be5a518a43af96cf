use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::knapsack::opt_knapsack;
use crate::mechanisms::MechanismId;
use crate::model::{expected_utility, Instance, ReportProfile};
use crate::rational::Rational;

use super::deviations::{enumerate_deviations, PoolConfig};
use super::ratio::RatioValue;

/// Default cap on the number of pure profiles examined.
pub const DEFAULT_PROFILE_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equilibrium {
    pub profile: ReportProfile,
    pub welfare: Rational,
    pub ratio: RatioValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NashReport {
    pub equilibria: Vec<Equilibrium>,
    pub opt_welfare: Rational,
    /// Largest ratio over the equilibria, `None` when there are none.
    pub worst_ratio: Option<RatioValue>,
    pub profiles_checked: usize,
    /// True when every agent's strategy space was enumerated in full.
    pub complete: bool,
}

#[derive(Debug, Clone)]
pub struct NashOptions {
    pub pool: PoolConfig,
    pub profile_cap: usize,
    pub jobs: usize,
}

impl Default for NashOptions {
    fn default() -> Self {
        NashOptions {
            pool: PoolConfig::default(),
            profile_cap: DEFAULT_PROFILE_CAP,
            jobs: 1,
        }
    }
}

/// Mixed-radix decoding of a profile index, agent 1 varying slowest.
fn decode(mut index: usize, radix: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radix.len()];
    for k in (0..radix.len()).rev() {
        digits[k] = index % radix[k];
        index /= radix[k];
    }
    digits
}

/// All pure-strategy Nash equilibria of the complete-information report game.
pub fn enumerate_pure_nash(
    mechanism: &MechanismId,
    instance: &Instance,
    options: &NashOptions,
) -> Result<NashReport> {
    let n = instance.n();
    let mut spaces = Vec::with_capacity(n);
    let mut complete = true;
    for agent in 1..=n {
        let d = enumerate_deviations(instance, agent, &options.pool)?;
        complete &= d.complete;
        spaces.push(d.reports);
    }
    let radix: Vec<usize> = spaces.iter().map(Vec::len).collect();
    let total = radix
        .iter()
        .try_fold(1usize, |acc, &r| {
            acc.checked_mul(r).filter(|&t| t <= options.profile_cap)
        })
        .ok_or(Error::TooLarge {
            count: radix.iter().fold(1usize, |a, &r| a.saturating_mul(r)),
            cap: options.profile_cap,
        })?;
    let capacity = instance.capacity();
    let evaluate = |index: usize| -> Result<(Vec<Rational>, Rational)> {
        let digits = decode(index, &radix);
        let profile = ReportProfile(
            digits
                .iter()
                .enumerate()
                .map(|(k, &d)| spaces[k][d].clone())
                .collect(),
        );
        let dist = mechanism.run(&profile, capacity)?;
        let utils: Vec<Rational> = (1..=n)
            .map(|i| expected_utility(instance.true_set(i), &dist))
            .collect();
        let welfare = utils.iter().sum();
        Ok((utils, welfare))
    };
    let table: Vec<(Vec<Rational>, Rational)> = if options.jobs <= 1 {
        (0..total).map(evaluate).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..total)
                .into_par_iter()
                .map(evaluate)
                .collect::<Result<_>>()
        })?
    };

    let mut stride = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        stride[k] = stride[k + 1] * radix[k + 1];
    }
    let opt = opt_knapsack(&instance.union(), capacity)?.value;
    let mut equilibria = Vec::new();
    for index in 0..total {
        let digits = decode(index, &radix);
        let stable = (0..n).all(|k| {
            let own = &table[index].0[k];
            let base = index - digits[k] * stride[k];
            (0..radix[k]).all(|alt| &table[base + alt * stride[k]].0[k] <= own)
        });
        if stable {
            let welfare = table[index].1.clone();
            equilibria.push(Equilibrium {
                profile: ReportProfile(
                    digits
                        .iter()
                        .enumerate()
                        .map(|(k, &d)| spaces[k][d].clone())
                        .collect(),
                ),
                ratio: RatioValue::of(&opt, &welfare)?,
                welfare,
            });
        }
    }
    let worst_ratio = equilibria.iter().map(|e| e.ratio.clone()).max();
    Ok(NashReport {
        equilibria,
        opt_welfare: opt,
        worst_ratio,
        profiles_checked: total,
        complete,
    })
}
