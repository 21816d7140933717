//! Decision variables of the scheduling model and everything computed from
//! them: constraint checking, objective values, earliest start times and
//! Gantt rows.

mod feasibility;
mod gantt;
mod tighten;

use ndarray::{Array2, Array3};
use thiserror::Error;

use crate::instance::ProjectInstance;
use crate::scalar::Scalar;

pub use feasibility::{check_feasibility, Constraint, ConstraintViolation};
pub use gantt::{gantt_csv, gantt_svg, to_gantt, GanttRow};
pub use tighten::tighten_starts;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("solution shape does not match the instance: {0}")]
    Dimension(String),
    #[error("resource {} is overloaded: arrival rate {arrival_rate} reaches the critical rate {critical}", .resource + 1)]
    Unstable { resource: usize, arrival_rate: f64, critical: f64 },
    #[error("precedence and sequencing arcs form a cycle")]
    Cycle,
    #[error("solution violates {} constraint(s), first: {}", .0.len(), .0[0])]
    Infeasible(Vec<ConstraintViolation>),
}

/// Full decision vector of the model.
///
/// `assignment[[i, l, k]]` is set when resource `k` performs skill `l` on
/// activity `i`; `sequencing[[i, j]]` when `i` is scheduled before `j`;
/// `usage[[i, k]]` when activity `i` occupies resource `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleSolution<T> {
    pub assignment: Array3<bool>,
    pub sequencing: Array2<bool>,
    pub usage: Array2<bool>,
    pub arrival_rates: Vec<T>,
    pub resource_waits: Vec<T>,
    pub activity_waits: Vec<T>,
    pub starts: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValues<T> {
    pub makespan: T,
    pub cost: T,
}

impl<T: Scalar> ObjectiveValues<T> {
    /// Weak Pareto dominance with both objectives minimised.
    pub fn weakly_dominates(&self, other: &Self) -> bool {
        self.makespan <= other.makespan && self.cost <= other.cost
    }
}

/// An all-false assignment tensor shaped for `instance`.
pub fn empty_assignment<T: Scalar>(instance: &ProjectInstance<T>) -> Array3<bool> {
    Array3::from_elem((instance.activity_count(), instance.skill_count, instance.resource_count()), false)
}

/// Builds an assignment tensor from `(activity, skill, resource)` triples.
pub fn assignment_from_triples<T: Scalar>(
    instance: &ProjectInstance<T>,
    triples: impl IntoIterator<Item = (usize, usize, usize)>,
) -> Array3<bool> {
    let mut x = empty_assignment(instance);
    for (i, l, k) in triples {
        x[[i, l, k]] = true;
    }
    x
}

/// Total cost `Σ d_i c_lk X_ilk` of an assignment.
pub fn assignment_cost<T: Scalar>(instance: &ProjectInstance<T>, assignment: &Array3<bool>) -> T {
    let mut cost = T::zero();
    for ((i, l, k), &x) in assignment.indexed_iter() {
        if x {
            let unit = instance.resources[k].cost(l).unwrap_or_else(T::zero);
            cost = cost + T::from_count(instance.duration(i) as usize) * unit;
        }
    }
    cost
}

/// Makespan (start of the sink) and total cost.
pub fn evaluate<T: Scalar>(instance: &ProjectInstance<T>, solution: &ScheduleSolution<T>) -> ObjectiveValues<T> {
    ObjectiveValues {
        makespan: solution.starts.get(instance.sink()).copied().unwrap_or_else(T::zero),
        cost: assignment_cost(instance, &solution.assignment),
    }
}

impl<T: Scalar> ScheduleSolution<T> {
    /// `(resource, skill)` pairs serving `activity`, ordered by resource.
    pub fn assigned_to(&self, activity: usize) -> Vec<(usize, usize)> {
        let (_, skills, resources) = self.assignment.dim();
        let mut pairs = Vec::new();
        for k in 0..resources {
            for l in 0..skills {
                if self.assignment[[activity, l, k]] {
                    pairs.push((k, l));
                }
            }
        }
        pairs
    }
}
