//! Audits, equilibrium enumeration, ratio measurement and lower-bound certificates.

mod audit;
pub mod certificates;
mod deviations;
pub mod interval;
mod malice;
mod nash;
mod ratio;

pub use audit::{
    audit_kqus, audit_strategyproofness, kqus_utility, size_grid, AuditOptions, AuditStatus,
    AuditVerdict, Deviation, KqusMechanism, Witness, DEFAULT_SIZE_GRID,
};
pub use certificates::{eval_certificate, CertParams, Certificate, Family, Verdict};
pub use deviations::{
    enumerate_deviations, enumerate_deviations_as, fake_id, fake_templates, Deviations, PoolConfig,
    DEFAULT_SUBSET_CAP,
};
pub use malice::{fake_impact_witness, Branch, FakeImpact};
pub use nash::{enumerate_pure_nash, Equilibrium, NashOptions, NashReport, DEFAULT_PROFILE_CAP};
pub use ratio::{approx_ratio, RatioValue};
