//! Exact single-objective solver for the budget-constrained subproblems of
//! the bi-objective model, plus an exhaustive Pareto oracle for tiny
//! instances.
//!
//! The search is a two-level depth-first branch and bound. The outer level
//! fixes the skill/resource assignment of one activity at a time, in
//! topological order. Arrival rates are assignment counts, so every resource
//! wait comes from a small precomputed table and the model's only
//! nonlinearity disappears. Once the assignment is complete, the inner level
//! orients every unordered pair of activities that share a resource. Leaves
//! are turned into full solutions by [`tighten_starts`](crate::schedule::tighten_starts).

mod brute;
mod candidates;
mod search;

use std::time::Duration;

use thiserror::Error;

use crate::instance::ProjectInstance;
use crate::scalar::Scalar;
use crate::schedule::{ObjectiveValues, ScheduleSolution};

pub use brute::{brute_force_front, GUARD_ACTIVITIES, GUARD_RESOURCES, GUARD_SKILLS};

/// Reachability is kept in 128-bit sets, which caps the network size.
pub const MAX_NODES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Objective {
    Makespan,
    Cost,
}

impl Objective {
    pub fn other(self) -> Self {
        match self {
            Objective::Makespan => Objective::Cost,
            Objective::Cost => Objective::Makespan,
        }
    }

    pub fn of<T: Copy>(self, values: &ObjectiveValues<T>) -> T {
        match self {
            Objective::Makespan => values.makespan,
            Objective::Cost => values.cost,
        }
    }
}

/// Reward for leftover budget: the solver minimises
/// `primary - eps * slack / range`, with `slack = budget - secondary`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Augmentation<T> {
    pub eps: f64,
    pub range: T,
}

pub const EPS_RANGE: (f64, f64) = (1e-6, 1e-3);

/// One subproblem: minimise `primary`, optionally with the other objective
/// bounded by `budget`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubproblemSpec<T> {
    pub primary: Objective,
    pub budget: Option<T>,
    pub augmentation: Option<Augmentation<T>>,
}

impl<T: Scalar> SubproblemSpec<T> {
    pub fn minimise(primary: Objective) -> Self {
        Self { primary, budget: None, augmentation: None }
    }

    pub fn with_budget(mut self, budget: T) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_augmentation(mut self, eps: f64, range: T) -> Self {
        self.augmentation = Some(Augmentation { eps, range });
        self
    }

    fn check(&self) -> Result<(), SolverError> {
        if let Some(budget) = self.budget {
            if !(budget.is_finite() && budget >= T::zero()) {
                return Err(SolverError::InvalidSpec(format!("budget must be finite and >= 0, got {budget}")));
            }
        }
        if let Some(Augmentation { eps, range }) = self.augmentation {
            if !(EPS_RANGE.0..=EPS_RANGE.1).contains(&eps) {
                return Err(SolverError::InvalidSpec(format!(
                    "eps must lie in [{:e}, {:e}], got {eps:e}",
                    EPS_RANGE.0, EPS_RANGE.1
                )));
            }
            if self.budget.is_none() {
                return Err(SolverError::InvalidSpec("augmentation needs a budget".into()));
            }
            if !(range.is_finite() && range > T::zero()) {
                return Err(SolverError::InvalidSpec(format!("objective range must be > 0, got {range}")));
            }
        }
        Ok(())
    }

    /// Weight of the secondary objective in the minimised key.
    fn secondary_weight(&self) -> T {
        self.augmentation.map_or_else(T::zero, |a| T::from_real(a.eps) / a.range)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    pub time: Option<Duration>,
    pub nodes: Option<u64>,
}

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(300);

impl Default for Limits {
    fn default() -> Self {
        Self { time: Some(DEFAULT_TIME_LIMIT), nodes: None }
    }
}

impl Limits {
    pub fn unlimited() -> Self {
        Self { time: None, nodes: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    /// A limit was hit; the result carries the incumbent, if any.
    Timeout,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<T> {
    pub status: SolveStatus,
    pub solution: Option<ScheduleSolution<T>>,
    pub objectives: Option<ObjectiveValues<T>>,
    /// `budget - secondary`, zero without a budget.
    pub slack: Option<T>,
    pub nodes_explored: u64,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid subproblem: {0}")]
    InvalidSpec(String),
    #[error("network has {0} nodes, the solver handles at most {MAX_NODES}")]
    TooLarge(usize),
    #[error("instance exceeds the brute-force guard rails: {0}")]
    GuardRail(String),
}

/// Solves one subproblem to proven optimality unless a limit intervenes.
///
/// Among solutions with equal key the first one met in the deterministic
/// traversal is kept, so repeated calls return identical results.
pub fn solve<T: Scalar>(
    instance: &ProjectInstance<T>,
    spec: &SubproblemSpec<T>,
    limits: &Limits,
) -> Result<SolveResult<T>, SolverError> {
    spec.check()?;
    if instance.activity_count() > MAX_NODES || instance.resource_count() > MAX_NODES {
        return Err(SolverError::TooLarge(instance.activity_count().max(instance.resource_count())));
    }
    Ok(search::run(instance, spec, limits))
}

/// Optimises `order.0`, then `order.1` with the first held at its optimum.
///
/// A stage stopped by a limit continues from its incumbent and the result is
/// reported as `Timeout`; a stage 2 without any incumbent falls back to the
/// stage 1 solution.
pub fn lexicographic_optimum<T: Scalar>(
    instance: &ProjectInstance<T>,
    order: (Objective, Objective),
    limits: &Limits,
) -> Result<SolveResult<T>, SolverError> {
    let (first, second) = order;
    debug_assert_ne!(first, second);
    let stage1 = solve(instance, &SubproblemSpec::minimise(first), limits)?;
    let Some(values) = stage1.objectives else {
        return Ok(stage1);
    };
    let mut stage2 = solve(instance, &SubproblemSpec::minimise(second).with_budget(first.of(&values)), limits)?;
    stage2.nodes_explored += stage1.nodes_explored;
    stage2.wall_time += stage1.wall_time;
    if stage2.objectives.is_none() {
        stage2.solution = stage1.solution;
        stage2.objectives = stage1.objectives;
        stage2.slack = None;
    }
    if stage1.status == SolveStatus::Timeout {
        stage2.status = SolveStatus::Timeout;
    }
    Ok(stage2)
}

/// Critical-path length with durations only. No schedule can finish sooner.
pub fn makespan_lower_bound<T: Scalar>(instance: &ProjectInstance<T>) -> T {
    let order = instance.topological_order().expect("validated instance is acyclic");
    let mut head = vec![T::zero(); instance.activity_count()];
    for &i in &order {
        let finish = head[i] + T::from_count(instance.duration(i) as usize);
        for &j in &instance.successors[i] {
            head[j] = head[j].max_of(finish);
        }
    }
    head[instance.sink()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::chain2;
    use crate::instance::{Activity, ReliabilityParams, ResourceProfile};
    use crate::schedule::check_feasibility;

    /// One activity of duration 4 that either of two resources can do.
    fn single(costs: (f64, f64)) -> ProjectInstance<f64> {
        let res = |c: f64| ResourceProfile {
            skills: [0].into(),
            cost_per_skill: [(0, c)].into(),
            reliability: ReliabilityParams::new(0.5, 0.5, 20.0),
        };
        ProjectInstance {
            activities: vec![Activity::new(0), Activity::new(4).with_requirement(0, 1), Activity::new(0)],
            successors: vec![vec![1], vec![2], vec![]],
            resources: vec![res(costs.0), res(costs.1)],
            skill_count: 1,
        }
    }

    #[test]
    fn cheapest_resource_wins_on_cost() {
        let inst = single((200.0, 100.0));
        let result = solve(&inst, &SubproblemSpec::minimise(Objective::Cost), &Limits::unlimited()).unwrap();
        assert_eq!(result.status, SolveStatus::Optimal);
        assert_eq!(result.objectives.unwrap().cost, 400.0);
        assert_eq!(result.solution.unwrap().assigned_to(1), vec![(1, 0)]);
    }

    #[test]
    fn budget_below_cheapest_is_infeasible() {
        let inst = single((200.0, 100.0));
        let spec = SubproblemSpec::minimise(Objective::Makespan).with_budget(399.0);
        let result = solve(&inst, &spec, &Limits::unlimited()).unwrap();
        assert_eq!(result.status, SolveStatus::Infeasible);
        assert!(result.solution.is_none());
    }

    #[test]
    fn optimum_is_feasible_with_nonnegative_slack() {
        let inst = chain2::<f64>((3, 4));
        let spec = SubproblemSpec::minimise(Objective::Makespan).with_budget(100.0).with_augmentation(1e-4, 10.0);
        let result = solve(&inst, &spec, &Limits::unlimited()).unwrap();
        assert_eq!(result.status, SolveStatus::Optimal);
        let sol = result.solution.unwrap();
        assert_eq!(check_feasibility(&inst, &sol).unwrap(), vec![]);
        assert_eq!(result.slack, Some(100.0 - 70.0));
    }

    #[test]
    fn eps_outside_interval_is_rejected() {
        let inst = chain2::<f64>((3, 4));
        let spec = SubproblemSpec::minimise(Objective::Makespan).with_budget(100.0).with_augmentation(0.1, 10.0);
        assert!(matches!(solve(&inst, &spec, &Limits::unlimited()), Err(SolverError::InvalidSpec(_))));
    }

    #[test]
    fn single_solution_lexicographic_orders_agree() {
        let inst = chain2::<f64>((3, 4));
        let a = lexicographic_optimum(&inst, (Objective::Makespan, Objective::Cost), &Limits::unlimited()).unwrap();
        let b = lexicographic_optimum(&inst, (Objective::Cost, Objective::Makespan), &Limits::unlimited()).unwrap();
        assert_eq!(a.objectives, b.objectives);
    }

    #[test]
    fn lower_bound_ignores_waits() {
        assert_eq!(makespan_lower_bound(&chain2::<f64>((3, 4))), 7.0);
    }

    #[test]
    fn node_limit_reports_timeout() {
        let inst = single((200.0, 100.0));
        let limits = Limits { time: None, nodes: Some(1) };
        let result = solve(&inst, &SubproblemSpec::minimise(Objective::Makespan), &limits).unwrap();
        assert_eq!(result.status, SolveStatus::Timeout);
    }
}
