//! Solver toolkit for the multi-product multi-period inventory routing
//! problem: a vendor decides in which periods each customer is visited, how
//! much of each product to drop off, and how to route a heterogeneous fleet,
//! minimizing fleet fixed cost + transportation cost + inventory holding cost.
//!
//! The crate is organized around a binary customer×period schedule matrix:
//!
//! * [`instance`] — problem data model, seeded random instance generation,
//!   travel-cost matrices, and the plain-text instance file format.
//! * [`schedule`] — the schedule matrix, decoding into delivery quantities
//!   and inventory ledgers, feasibility checking, and repair.
//! * [`routing`] — per-period vehicle assignment (first-fit decreasing),
//!   route construction (nearest neighbor + 2-opt/Or-opt), an exact
//!   Held-Karp oracle, and full solution cost evaluation.
//! * [`ga`] — the adaptive genetic algorithm: roulette selection, row/column
//!   crossover and mutation, feedback-controlled operator rates.
//! * [`exact`] — exhaustive schedule enumeration over small instances, a
//!   direct-delivery baseline, and a MILP exporter in LP file format.
//! * [`bench`] — gap metrics (difficulty / closeness / saving), paired
//!   t-test, and the benchmark suite runner with CSV reports.

#![allow(clippy::needless_range_loop)]

pub mod bench;
pub mod exact;
pub mod ga;
pub mod instance;
pub mod routing;
pub mod schedule;
pub mod stats;

/// Comparison slack for floating-point feasibility checks.
pub(crate) const EPS: f64 = 1e-9;
