//! Mechanisms as exact maps from report profiles to outcome distributions.

mod equal_utility;
mod greedy;
mod kqus;
mod pacify;

use std::fmt;

pub use equal_utility::{
    equal_utility_detailed, run_equal_utility, EqualUtilityBranch, EqualUtilityOutcome,
};
pub use greedy::{
    greedy_trace, run_bad_greedy, run_greedy, run_half_greedy, run_max_value,
    run_modified_half_greedy_on, run_next_on, GreedyTrace,
};
pub use kqus::{run_modified_half_greedy, run_next, KqusAgent, KqusInstance};
pub use pacify::{pacify_detailed, run_pacify_the_liar, PacifyBranch, PacifyOutcome};

use crate::error::{Error, Result};
use crate::knapsack::opt_knapsack;
use crate::model::{OutcomeDistribution, ReportProfile};
use crate::rational::Rational;

/// Default EQUAL-UTILITY parameter, 15225/10000: just above (5+4√2)/7 ≈ 1.522407.
pub fn alpha_eu() -> Rational {
    Rational::new(15225, 10000)
}

/// Default PACIFY-THE-LIAR parameter, 1619/1000: just above the golden ratio ≈ 1.618034.
pub fn alpha_ptl() -> Rational {
    Rational::new(1619, 1000)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MechanismId {
    Greedy,
    MaxValue,
    HalfGreedy,
    BadGreedy,
    EqualUtility(Rational),
    PacifyTheLiar(Rational),
    Next,
    ModifiedHalfGreedy,
    /// Returns the canonical optimum of the reported items. Not strategyproof; used as a
    /// reference point in audits.
    Optimal,
}

impl MechanismId {
    pub fn equal_utility(alpha: Rational) -> Result<Self> {
        equal_utility::check_alpha(&alpha)?;
        Ok(MechanismId::EqualUtility(alpha))
    }

    pub fn pacify_the_liar(alpha: Rational) -> Result<Self> {
        pacify::check_alpha(&alpha)?;
        Ok(MechanismId::PacifyTheLiar(alpha))
    }

    /// Parses a command-line name; `alpha` overrides the default parameter where one applies.
    pub fn parse(name: &str, alpha: Option<Rational>) -> Result<Self> {
        let id = match name {
            "greedy" => MechanismId::Greedy,
            "max-value" => MechanismId::MaxValue,
            "half-greedy" => MechanismId::HalfGreedy,
            "bad-greedy" => MechanismId::BadGreedy,
            "equal-utility" => return Self::equal_utility(alpha.unwrap_or_else(alpha_eu)),
            "pacify-the-liar" => return Self::pacify_the_liar(alpha.unwrap_or_else(alpha_ptl)),
            "next" => MechanismId::Next,
            "modified-half-greedy" => MechanismId::ModifiedHalfGreedy,
            "optimal" => MechanismId::Optimal,
            other => return Err(Error::param(format!("unknown mechanism {other:?}"))),
        };
        if alpha.is_some() {
            return Err(Error::param(format!("mechanism {name} takes no alpha")));
        }
        Ok(id)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MechanismId::Greedy => "greedy",
            MechanismId::MaxValue => "max-value",
            MechanismId::HalfGreedy => "half-greedy",
            MechanismId::BadGreedy => "bad-greedy",
            MechanismId::EqualUtility(_) => "equal-utility",
            MechanismId::PacifyTheLiar(_) => "pacify-the-liar",
            MechanismId::Next => "next",
            MechanismId::ModifiedHalfGreedy => "modified-half-greedy",
            MechanismId::Optimal => "optimal",
        }
    }

    pub fn alpha(&self) -> Option<&Rational> {
        match self {
            MechanismId::EqualUtility(a) | MechanismId::PacifyTheLiar(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_randomized(&self) -> bool {
        matches!(
            self,
            MechanismId::HalfGreedy
                | MechanismId::EqualUtility(_)
                | MechanismId::ModifiedHalfGreedy
        )
    }

    pub fn run(&self, reports: &ReportProfile, capacity: &Rational) -> Result<OutcomeDistribution> {
        let certain = OutcomeDistribution::certain;
        Ok(match self {
            MechanismId::Greedy => certain(run_greedy(reports, capacity)),
            MechanismId::MaxValue => certain(run_max_value(reports, capacity)),
            MechanismId::HalfGreedy => run_half_greedy(reports, capacity),
            MechanismId::BadGreedy => certain(run_bad_greedy(reports, capacity)),
            MechanismId::EqualUtility(alpha) => run_equal_utility(reports, capacity, alpha)?,
            MechanismId::PacifyTheLiar(alpha) => {
                certain(run_pacify_the_liar(reports, capacity, alpha)?)
            }
            MechanismId::Next => certain(run_next_on(reports, capacity)),
            MechanismId::ModifiedHalfGreedy => run_modified_half_greedy_on(reports, capacity),
            MechanismId::Optimal => certain(opt_knapsack(&reports.union(), capacity)?.chosen),
        })
    }
}

impl fmt::Display for MechanismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alpha() {
            Some(a) => write!(f, "{}(alpha={a})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::r;

    #[test]
    fn alpha_defaults_sit_above_the_irrational_thresholds() {
        // (5+4√2)/7 < 15225/10000  ⟺  4√2 < 5.6575  ⟺  32 < 32.00730…
        let t = &alpha_eu() * r(7, 1) - r(5, 1);
        assert!(t.is_positive() && &t * &t > r(32, 1));
        // φ < 1619/1000  ⟺  φ² = φ + 1 is below α² - α + … ; check α² > α + 1.
        let a = alpha_ptl();
        assert!(&a * &a > &a + r(1, 1));
    }

    #[test]
    fn parse_names() {
        assert_eq!(
            MechanismId::parse("half-greedy", None).unwrap(),
            MechanismId::HalfGreedy
        );
        assert_eq!(
            MechanismId::parse("equal-utility", None).unwrap(),
            MechanismId::EqualUtility(alpha_eu())
        );
        assert!(MechanismId::parse("equal-utility", Some(r(2, 1))).is_err());
        assert!(MechanismId::parse("greedy", Some(r(3, 2))).is_err());
        assert!(MechanismId::parse("nope", None).is_err());
        assert_eq!(
            MechanismId::PacifyTheLiar(r(3, 2)).to_string(),
            "pacify-the-liar(alpha=3/2)"
        );
    }
}
