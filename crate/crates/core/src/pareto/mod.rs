//! Pareto front enumeration with the augmented epsilon-constraint method.
//!
//! Cost is the gridded objective and makespan the optimised one. The payoff
//! table comes from the two lexicographic optima; the cost range between
//! them is cut into `N` equal steps and every level `e_p` yields the
//! subproblem
//!
//! ```text
//! min makespan - eps * s / r2   s.t.  cost + s = e_p,  s >= 0
//! ```
//!
//! where `r2` is the cost range. After a solve with slack `s` the next
//! `floor(s / step)` levels would return the same solution and are skipped.
//! Because the levels descend from the worst cost, the first infeasible
//! level ends the sweep.

use log::{debug, warn};
use rayon::prelude::*;
use thiserror::Error;

use crate::instance::ProjectInstance;
use crate::scalar::Scalar;
use crate::schedule::{ObjectiveValues, ScheduleSolution};
use crate::solver::{
    lexicographic_optimum, solve, Limits, Objective, SolveResult, SolveStatus, SolverError, SubproblemSpec, EPS_RANGE,
};

pub const DEFAULT_GRID: usize = 10;
pub const DEFAULT_EPS: f64 = 1e-4;

/// A nondominated `(makespan, cost)` point and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontPoint<T> {
    pub objectives: ObjectiveValues<T>,
    pub solution: ScheduleSolution<T>,
    /// Grid level `p` of the solve that produced the point.
    pub grid_index: Option<usize>,
    pub slack: Option<T>,
    pub status: SolveStatus,
    pub wall_time: f64,
}

impl<T: Scalar> FrontPoint<T> {
    pub fn makespan(&self) -> T {
        self.objectives.makespan
    }

    pub fn cost(&self) -> T {
        self.objectives.cost
    }
}

/// The two lexicographic optima.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffTable<T> {
    /// Best makespan, then cheapest among those.
    pub makespan_first: ObjectiveValues<T>,
    /// Cheapest, then fastest among those.
    pub cost_first: ObjectiveValues<T>,
}

impl<T: Scalar> PayoffTable<T> {
    pub fn makespan_pis(&self) -> T {
        self.makespan_first.makespan
    }

    pub fn makespan_nis(&self) -> T {
        self.cost_first.makespan
    }

    pub fn cost_pis(&self) -> T {
        self.cost_first.cost
    }

    pub fn cost_nis(&self) -> T {
        self.makespan_first.cost
    }
}

/// Record of one grid-level solve.
#[derive(Debug, Clone, PartialEq)]
pub struct GridLevel<T> {
    pub index: usize,
    pub budget: T,
    pub status: SolveStatus,
    pub objectives: Option<ObjectiveValues<T>>,
    pub slack: Option<T>,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoFront<T> {
    /// Sorted by makespan ascending, so cost is strictly descending.
    pub points: Vec<FrontPoint<T>>,
    pub payoff: Option<PayoffTable<T>>,
    pub grid_count: usize,
    /// Every grid level actually solved, in solve order.
    pub levels: Vec<GridLevel<T>>,
    /// Why the front is empty, when it is.
    pub diagnosis: Option<String>,
    /// False when a lexicographic solve stopped on a limit, so the payoff
    /// table holds incumbents rather than optima.
    pub payoff_proven: bool,
}

impl<T: Scalar> ParetoFront<T> {
    pub fn values(&self) -> Vec<ObjectiveValues<T>> {
        self.points.iter().map(|p| p.objectives).collect()
    }

    /// True when some solve stopped on a limit instead of a proof.
    pub fn is_partial(&self) -> bool {
        !self.payoff_proven || self.levels.iter().any(|l| l.status == SolveStatus::Timeout)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Traversal {
    /// Levels in order from the worst cost down, optionally skipping levels
    /// the previous slack already covers.
    Sequential { bypass: bool },
    /// All levels solved independently on the rayon pool.
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontOptions {
    pub grid_count: usize,
    pub eps: f64,
    pub traversal: Traversal,
    pub limits: Limits,
}

impl Default for FrontOptions {
    fn default() -> Self {
        Self {
            grid_count: DEFAULT_GRID,
            eps: DEFAULT_EPS,
            traversal: Traversal::Sequential { bypass: true },
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParetoError {
    #[error("grid count must be at least 2, got {0}")]
    GridTooSmall(usize),
    #[error("eps must lie in [{lo:e}, {hi:e}], got {0:e}", lo = EPS_RANGE.0, hi = EPS_RANGE.1)]
    Eps(f64),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Cost levels `e_0 = NIS, ..., e_N = PIS`, endpoints exact.
pub fn grid_levels<T: Scalar>(payoff: &PayoffTable<T>, grid_count: usize) -> Vec<T> {
    let (nis, pis) = (payoff.cost_nis(), payoff.cost_pis());
    let step = (nis - pis) / T::from_count(grid_count);
    (0..=grid_count)
        .map(|p| match p {
            0 => nis,
            p if p == grid_count => pis,
            p => nis - T::from_count(p) * step,
        })
        .collect()
}

/// The payoff table and the makespan-first result, or `None` when no
/// schedule was found. The flag is false when a limit cut a solve short.
fn payoff_table<T: Scalar>(
    instance: &ProjectInstance<T>,
    limits: &Limits,
) -> Result<(Option<(PayoffTable<T>, SolveResult<T>)>, bool), SolverError> {
    let first = lexicographic_optimum(instance, (Objective::Makespan, Objective::Cost), limits)?;
    let Some(makespan_first) = first.objectives else {
        return Ok((None, first.status != SolveStatus::Timeout));
    };
    let second = lexicographic_optimum(instance, (Objective::Cost, Objective::Makespan), limits)?;
    let proven = first.status == SolveStatus::Optimal && second.status == SolveStatus::Optimal;
    if !proven {
        warn!("a lexicographic solve hit a limit; the payoff table holds incumbents");
    }
    let cost_first = second.objectives.unwrap_or(makespan_first);
    Ok((Some((PayoffTable { makespan_first, cost_first }, first)), proven))
}

fn check_options(options: &FrontOptions) -> Result<(), ParetoError> {
    if options.grid_count < 2 {
        return Err(ParetoError::GridTooSmall(options.grid_count));
    }
    if !(EPS_RANGE.0..=EPS_RANGE.1).contains(&options.eps) {
        return Err(ParetoError::Eps(options.eps));
    }
    Ok(())
}

fn empty_front<T>(grid_count: usize, proven: bool) -> ParetoFront<T> {
    let diagnosis = if proven {
        "no feasible schedule: some activity cannot be staffed within the stable region"
    } else {
        "no schedule found within the solver limits"
    };
    ParetoFront {
        points: Vec::new(),
        payoff: None,
        grid_count,
        levels: Vec::new(),
        diagnosis: Some(diagnosis.into()),
        payoff_proven: proven,
    }
}

/// Payoff table, then one augmented subproblem per grid level, then a
/// dominance filter. Both traversals give the same points; bypassed levels
/// would only repeat a point already found at a lower index.
pub fn enumerate_front<T: Scalar>(
    instance: &ProjectInstance<T>,
    options: &FrontOptions,
) -> Result<ParetoFront<T>, ParetoError> {
    check_options(options)?;
    sweep(instance, options, true)
}

/// The conventional epsilon-constraint method on the same grid: no slack
/// reward and no bypass, so a level may return a weakly dominated point.
/// Kept as the baseline the augmented method is compared against.
pub fn plain_epsilon_front<T: Scalar>(
    instance: &ProjectInstance<T>,
    options: &FrontOptions,
) -> Result<ParetoFront<T>, ParetoError> {
    check_options(options)?;
    let options = FrontOptions {
        traversal: match options.traversal {
            Traversal::Sequential { .. } => Traversal::Sequential { bypass: false },
            Traversal::Parallel => Traversal::Parallel,
        },
        ..*options
    };
    sweep(instance, &options, false)
}

fn sweep<T: Scalar>(instance: &ProjectInstance<T>, options: &FrontOptions, augmented: bool) -> Result<ParetoFront<T>, ParetoError> {
    let n = options.grid_count;
    let (found, proven) = payoff_table(instance, &options.limits)?;
    let Some((payoff, fastest)) = found else {
        return Ok(empty_front(n, proven));
    };
    let range = payoff.cost_nis() - payoff.cost_pis();
    if !(range > T::tolerance(payoff.cost_nis())) {
        debug!("lexicographic optima coincide; the front is a single point");
        let point = FrontPoint {
            objectives: payoff.makespan_first,
            solution: fastest.solution.expect("a result with objectives carries a solution"),
            grid_index: Some(0),
            slack: Some(T::zero()),
            status: fastest.status,
            wall_time: fastest.wall_time,
        };
        return Ok(ParetoFront {
            points: vec![point],
            payoff: Some(payoff),
            grid_count: n,
            levels: Vec::new(),
            diagnosis: None,
            payoff_proven: proven,
        });
    }

    let levels = grid_levels(&payoff, n);
    let step = range / T::from_count(n);
    let spec_at = |budget: T| {
        let spec = SubproblemSpec::minimise(Objective::Makespan).with_budget(budget);
        if augmented {
            spec.with_augmentation(options.eps, range)
        } else {
            spec
        }
    };

    let mut solved: Vec<(usize, SolveResult<T>)> = Vec::new();
    match options.traversal {
        Traversal::Parallel => {
            let results: Result<Vec<_>, SolverError> = levels
                .par_iter()
                .enumerate()
                .map(|(p, &e)| solve(instance, &spec_at(e), &options.limits).map(|r| (p, r)))
                .collect();
            solved = results?;
        }
        Traversal::Sequential { bypass } => {
            let mut p = 0;
            while p <= n {
                let result = solve(instance, &spec_at(levels[p]), &options.limits)?;
                let status = result.status;
                let jump = match (status, result.slack) {
                    (SolveStatus::Optimal, Some(slack)) if bypass => skipped_levels(slack, step),
                    _ => 0,
                };
                solved.push((p, result));
                if status == SolveStatus::Infeasible {
                    break;
                }
                if jump > 0 {
                    debug!("grid level {p}: slack covers {jump} further level(s)");
                }
                p += 1 + jump;
            }
        }
    }

    let mut records = Vec::with_capacity(solved.len());
    let mut candidates = Vec::new();
    for (p, result) in solved {
        if result.status == SolveStatus::Timeout {
            warn!("grid level {p} hit a limit; its point is not proven optimal");
        }
        records.push(GridLevel {
            index: p,
            budget: levels[p],
            status: result.status,
            objectives: result.objectives,
            slack: result.slack,
            wall_time: result.wall_time,
        });
        if let (Some(objectives), Some(solution)) = (result.objectives, result.solution) {
            candidates.push(FrontPoint {
                objectives,
                solution,
                grid_index: Some(p),
                slack: result.slack,
                status: result.status,
                wall_time: result.wall_time,
            });
        }
    }
    let points = dominance_filter(candidates);
    Ok(ParetoFront { points, payoff: Some(payoff), grid_count: n, levels: records, diagnosis: None, payoff_proven: proven })
}

/// Levels after the current one that the slack already covers.
fn skipped_levels<T: Scalar>(slack: T, step: T) -> usize {
    (slack / step).to_real().floor().max(0.0) as usize
}

/// Keeps the points no other point weakly dominates, sorted by makespan.
/// Of several equal points the first in input order survives.
pub fn dominance_filter<T: Scalar>(points: Vec<FrontPoint<T>>) -> Vec<FrontPoint<T>> {
    nondominated(points, |p| p.objectives)
}

/// [`dominance_filter`] over arbitrary items.
pub fn nondominated<P, T: Scalar>(mut points: Vec<P>, values: impl Fn(&P) -> ObjectiveValues<T>) -> Vec<P> {
    points.sort_by(|a, b| {
        let (a, b) = (values(a), values(b));
        a.makespan
            .partial_cmp(&b.makespan)
            .expect("comparable makespans")
            .then(a.cost.partial_cmp(&b.cost).expect("comparable costs"))
    });
    let mut kept: Vec<P> = Vec::with_capacity(points.len());
    for point in points {
        let v = values(&point);
        match kept.last() {
            None => kept.push(point),
            Some(last) => {
                let lv = values(last);
                if T::approx_le(lv.cost, v.cost) {
                    continue;
                }
                if T::approx_eq(lv.makespan, v.makespan) {
                    kept.pop();
                }
                kept.push(point);
            }
        }
    }
    kept
}
