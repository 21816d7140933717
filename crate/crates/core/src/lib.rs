//! Bi-objective project scheduling with multi-skilled, breakdown-prone
//! resources.
//!
//! Each resource is an M/M/1 queue whose server fails and is repaired at
//! exponential rates. The number of skill assignments a resource receives is
//! its arrival rate, so overloaded resources make their activities wait
//! before successors may start. The crate covers the whole pipeline: loading
//! instances, checking and completing schedules, solving budgeted
//! subproblems exactly, enumerating the makespan/cost Pareto front and
//! ranking it with VIKOR.
//!
//! Everything numeric is generic over [`Scalar`]; the aliases below fix the
//! common `f64` case.

pub mod instance;
pub mod pareto;
pub mod queueing;
pub mod scalar;
pub mod schedule;
pub mod solver;
pub mod report;
pub mod vikor;

mod graph;

pub use scalar::Scalar;

pub type Instance = instance::ProjectInstance<f64>;
pub type Solution = schedule::ScheduleSolution<f64>;
pub type Objectives = schedule::ObjectiveValues<f64>;
pub type Front = pareto::ParetoFront<f64>;
