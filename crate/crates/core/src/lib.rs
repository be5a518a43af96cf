//! Exact models and mechanisms for knapsack allocation with strategic agents.
//!
//! Agents own items, report a subset (or superset) of them, and a mechanism picks a feasible
//! bundle or a lottery over bundles. Everything is computed in exact rational arithmetic.

pub mod catalog;
pub mod error;
pub mod knapsack;
pub mod lab;
pub mod mechanisms;
pub mod model;
pub mod program;
pub mod rational;
pub mod workbench;

pub use error::{Error, Result};
pub use model::{Instance, Item, ItemSet, Model, OutcomeDistribution, ReportProfile};
pub use rational::{r, Rational};
