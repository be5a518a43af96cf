//! Lower-bound certificates.
//!
//! Each family encodes a two-profile construction that forces any strategyproof mechanism with
//! a given approximation ratio into contradictory probability or selection constraints. The
//! evaluator computes those constraints exactly and reports whether they contradict each other.
//! Radicals enter only through [`Interval`] enclosures, and an `Infeasible` verdict requires the
//! contradiction to hold across the whole enclosure.

use std::fmt;
use std::str::FromStr;

use crate::catalog;
use crate::error::{Error, Result};
use crate::mechanisms::KqusInstance;
use crate::model::Instance;
use crate::rational::{r, Rational};

use super::interval::Interval;

/// Largest `M` for which the overstating families also emit their instances.
pub const WITNESS_M_CAP: i64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Randomized, overstating: no ratio below 2.
    OverstateRand,
    /// Deterministic, overstating: no constant ratio.
    OverstateDet,
    /// Deterministic, understating: no ratio below φ.
    UnderstateDet,
    /// Randomized, understating: no ratio below (5√5 − 9)/2.
    UnderstateRand,
    /// Randomized, private sizes: no ratio below 2.
    KqusRand,
    /// Deterministic, private sizes: no constant ratio.
    KqusDet,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::OverstateRand,
        Family::OverstateDet,
        Family::UnderstateDet,
        Family::UnderstateRand,
        Family::KqusRand,
        Family::KqusDet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::OverstateRand => "thm5",
            Family::OverstateDet => "thm6",
            Family::UnderstateDet => "thm7",
            Family::UnderstateRand => "thm8",
            Family::KqusRand => "thm9",
            Family::KqusDet => "thm10",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Family::OverstateRand => "overstating, randomized: ratio r < 2 is impossible",
            Family::OverstateDet => "overstating, deterministic: ratio r < M is impossible",
            Family::UnderstateDet => "understating, deterministic: ratio r < phi is impossible",
            Family::UnderstateRand => {
                "understating, randomized: ratio r < (5*sqrt5-9)/2 is impossible"
            }
            Family::KqusRand => "private sizes, randomized: ratio t < 2 is impossible",
            Family::KqusDet => "private sizes, deterministic: ratio t < M is impossible",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::param(format!("unknown certificate family {s:?}")))
    }
}

/// Inputs; families ignore the parameters they do not use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertParams {
    /// Target ratio (`r` or `t`).
    pub ratio: Rational,
    /// Scale parameter, where the family has one.
    pub m: Option<i64>,
    pub eps: Option<Rational>,
}

impl CertParams {
    pub fn new(ratio: Rational) -> Self {
        CertParams {
            ratio,
            m: None,
            eps: None,
        }
    }

    pub fn with_m(mut self, m: i64) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_eps(mut self, eps: Rational) -> Self {
        self.eps = Some(eps);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Exact(Rational),
    Enclosed(Interval),
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(x) => write!(f, "{x}"),
            Bound::Enclosed(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The constraints contradict each other by at least `margin`.
    Infeasible {
        margin: Rational,
    },
    Feasible,
}

impl Verdict {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Verdict::Infeasible { .. })
    }

    pub fn margin(&self) -> Option<&Rational> {
        match self {
            Verdict::Infeasible { margin } => Some(margin),
            Verdict::Feasible => None,
        }
    }

    fn from_margin(margin: Rational) -> Self {
        if margin.is_positive() {
            Verdict::Infeasible { margin }
        } else {
            Verdict::Feasible
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Infeasible { margin } => write!(f, "Infeasible, margin {margin}"),
            Verdict::Feasible => f.write_str("Feasible"),
        }
    }
}

/// The true profile and the misreport the argument relies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstancePair {
    Items {
        truth: Instance,
        report: Instance,
    },
    Kqus {
        truth: KqusInstance,
        report: KqusInstance,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub family: Family,
    pub params: Vec<(&'static str, Rational)>,
    pub bounds: Vec<(&'static str, Bound)>,
    pub verdict: Verdict,
    pub instances: Option<InstancePair>,
}

impl Certificate {
    pub fn bound(&self, name: &str) -> Option<&Bound> {
        self.bounds.iter().find(|(n, _)| *n == name).map(|(_, b)| b)
    }
}

fn need_m(p: &CertParams, family: Family) -> Result<i64> {
    match p.m {
        Some(m) if m >= 2 => Ok(m),
        Some(m) => Err(Error::param(format!(
            "{family}: M must be an integer >= 2, got {m}"
        ))),
        None => Err(Error::param(format!("{family}: missing M"))),
    }
}

fn need_ratio_at_least_one(p: &CertParams, family: Family) -> Result<()> {
    if p.ratio < r(1, 1) {
        return Err(Error::param(format!(
            "{family}: ratio must be >= 1, got {}",
            p.ratio
        )));
    }
    Ok(())
}

/// Evaluates one certificate family at the given parameters.
pub fn eval_certificate(family: Family, params: &CertParams) -> Result<Certificate> {
    match family {
        Family::OverstateRand => overstate_rand(params),
        Family::OverstateDet => overstate_det(params),
        Family::UnderstateDet => understate_det(params),
        Family::UnderstateRand => understate_rand(params),
        Family::KqusRand => kqus_rand(params),
        Family::KqusDet => kqus_det(params),
    }
}

fn overstate_pair(m: i64) -> Option<InstancePair> {
    (m <= WITNESS_M_CAP).then(|| InstancePair::Items {
        truth: catalog::thm5_overstate(m, false),
        report: catalog::thm5_overstate(m, true),
    })
}

fn overstate_rand(p: &CertParams) -> Result<Certificate> {
    let family = Family::OverstateRand;
    let m = need_m(p, family)?;
    let rr = &p.ratio;
    if !(rr > &r(1, 1) && rr <= &r(2, 1)) {
        return Err(Error::param(format!(
            "{family}: r must lie in (1, 2], got {rr}"
        )));
    }
    let mm = Rational::integer(m);
    // Some a_j must be chosen with probability q on the big profile; shrinking to {a_j}
    // keeps that probability, which caps the welfare on the small profile.
    let q = (&mm - rr) / (&mm * rr - rr);
    let forced = (&q / &mm + (r(1, 1) - &q)).recip();
    Ok(Certificate {
        family,
        params: vec![("r", rr.clone()), ("M", mm)],
        bounds: vec![
            ("q", Bound::Exact(q)),
            ("forced_ratio", Bound::Exact(forced.clone())),
        ],
        verdict: Verdict::from_margin(forced - rr),
        instances: overstate_pair(m),
    })
}

fn overstate_det(p: &CertParams) -> Result<Certificate> {
    let family = Family::OverstateDet;
    let m = need_m(p, family)?;
    need_ratio_at_least_one(p, family)?;
    let mm = Rational::integer(m);
    Ok(Certificate {
        family,
        params: vec![("r", p.ratio.clone()), ("M", mm.clone())],
        bounds: vec![
            ("ratio_without_a", Bound::Exact(mm.clone())),
            ("forced_ratio", Bound::Exact(mm.clone())),
        ],
        verdict: Verdict::from_margin(mm - &p.ratio),
        instances: overstate_pair(m),
    })
}

fn understate_det(p: &CertParams) -> Result<Certificate> {
    let family = Family::UnderstateDet;
    need_ratio_at_least_one(p, family)?;
    let eps = p
        .eps
        .clone()
        .ok_or_else(|| Error::param(format!("{family}: missing eps")))?;
    if !(eps.is_positive() && eps < r(1, 1)) {
        return Err(Error::param(format!(
            "{family}: eps must lie in (0, 1), got {eps}"
        )));
    }
    let phi = Interval::phi();
    // With r < φ the mechanism must take a; keeping a on the two-item profile costs
    // (φ - ε + 1)/φ.
    let forced = (phi.clone() + (r(1, 1) - &eps)) / phi.clone();
    let margin = (&phi.lo - &p.ratio).min(&forced.lo - &p.ratio);
    Ok(Certificate {
        family,
        params: vec![("r", p.ratio.clone()), ("eps", eps.clone())],
        bounds: vec![
            ("phi", Bound::Enclosed(phi)),
            ("forced_ratio", Bound::Enclosed(forced)),
        ],
        verdict: Verdict::from_margin(margin),
        instances: Some(InstancePair::Items {
            truth: catalog::thm7_understate_det(&eps, true),
            report: catalog::thm7_understate_det(&eps, false),
        }),
    })
}

fn understate_rand(p: &CertParams) -> Result<Certificate> {
    let family = Family::UnderstateRand;
    need_ratio_at_least_one(p, family)?;
    let rr = p.ratio.clone();
    let one = || r(1, 1);
    let phi = Interval::phi();
    let phi_m1 = phi.clone() - one();
    // (I) lower bound on P(a) at the one-item profile.
    let p_lo = (phi.clone() / rr.clone() - one()) / phi_m1.clone();
    // (II) upper bound on P(a) at the two-item profile.
    let p2_hi = (r(2, 1) - r(2, 1) / &rr) / (r(2, 1) - phi.clone());
    // (III) strategyproofness needs this to be non-negative.
    let slack = p2_hi.clone() * phi_m1 + one() - phi.clone() * p_lo.clone();
    let threshold = (r(5, 1) * Interval::sqrt5() - r(9, 1)) / r(2, 1);
    let margin = -&slack.hi;
    Ok(Certificate {
        family,
        params: vec![("r", rr)],
        bounds: vec![
            ("phi", Bound::Enclosed(phi)),
            ("p_lower", Bound::Enclosed(p_lo)),
            ("p_prime_upper", Bound::Enclosed(p2_hi)),
            ("slack", Bound::Enclosed(slack)),
            ("threshold", Bound::Enclosed(threshold)),
        ],
        verdict: Verdict::from_margin(margin),
        instances: Some(InstancePair::Items {
            truth: catalog::thm8_understate_rand(true),
            report: catalog::thm8_understate_rand(false),
        }),
    })
}

fn kqus_pair(m: i64) -> Option<InstancePair> {
    Some(InstancePair::Kqus {
        truth: catalog::thm9_kqus(m, true),
        report: catalog::thm9_kqus(m, false),
    })
}

fn kqus_rand(p: &CertParams) -> Result<Certificate> {
    let family = Family::KqusRand;
    let m = need_m(p, family)?;
    let t = &p.ratio;
    if !(t >= &r(1, 1) && t <= &r(2, 1)) {
        return Err(Error::param(format!(
            "{family}: t must lie in [1, 2], got {t}"
        )));
    }
    let mm = Rational::integer(m);
    let one = r(1, 1);
    let p_lo = (&mm / t - &one) / (&mm - &one);
    let p_hi = (&one - t.recip()) / (&one - mm.recip());
    Ok(Certificate {
        family,
        params: vec![("t", t.clone()), ("M", mm.clone())],
        bounds: vec![
            ("p_lower", Bound::Exact(p_lo.clone())),
            ("p_upper", Bound::Exact(p_hi.clone())),
            ("one_plus_inv_M", Bound::Exact(&one + mm.recip())),
            ("two_over_t", Bound::Exact(r(2, 1) / t)),
        ],
        verdict: Verdict::from_margin(p_lo - p_hi),
        instances: kqus_pair(m),
    })
}

fn kqus_det(p: &CertParams) -> Result<Certificate> {
    let family = Family::KqusDet;
    let m = need_m(p, family)?;
    need_ratio_at_least_one(p, family)?;
    let mm = Rational::integer(m);
    Ok(Certificate {
        family,
        params: vec![("t", p.ratio.clone()), ("M", mm.clone())],
        bounds: vec![
            ("forced_ratio", Bound::Exact(mm.clone())),
            ("misreport_gain", Bound::Exact(mm.recip())),
        ],
        verdict: Verdict::from_margin(&mm - &p.ratio),
        instances: kqus_pair(m),
    })
}
