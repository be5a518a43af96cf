use std::fmt;

use crate::error::{Error, Result};
use crate::knapsack::opt_knapsack;
use crate::mechanisms::MechanismId;
use crate::model::Instance;
use crate::rational::Rational;

/// An approximation ratio; `Infinite` when the mechanism earns nothing while OPT is positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum RatioValue {
    Finite(Rational),
    Infinite,
}

impl RatioValue {
    /// `opt / welfare`. Errors when `opt` is zero.
    pub fn of(opt: &Rational, welfare: &Rational) -> Result<Self> {
        if !opt.is_positive() {
            return Err(Error::param(
                "optimal welfare is zero; the ratio is undefined",
            ));
        }
        Ok(if welfare.is_zero() {
            RatioValue::Infinite
        } else {
            RatioValue::Finite(opt / welfare)
        })
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            RatioValue::Finite(r) => Some(r),
            RatioValue::Infinite => None,
        }
    }

    pub fn at_most(&self, bound: &Rational) -> bool {
        self.finite().is_some_and(|r| r <= bound)
    }
}

impl fmt::Display for RatioValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioValue::Finite(r) => write!(f, "{r}"),
            RatioValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Optimal welfare over the mechanism's expected welfare at the truthful profile.
pub fn approx_ratio(mechanism: &MechanismId, instance: &Instance) -> Result<RatioValue> {
    let truth = instance.truthful();
    let dist = mechanism.run(&truth, instance.capacity())?;
    let opt = opt_knapsack(&instance.union(), instance.capacity())?.value;
    RatioValue::of(&opt, &instance.welfare(&dist))
}
