use ndarray::Array2;

use super::SolverError;
use crate::instance::ProjectInstance;
use crate::pareto::{dominance_filter, FrontPoint, ParetoFront, PayoffTable};
use crate::scalar::Scalar;
use crate::schedule::{empty_assignment, evaluate, tighten_starts, ScheduleError};
use crate::solver::SolveStatus;

pub const GUARD_ACTIVITIES: usize = 6;
pub const GUARD_RESOURCES: usize = 4;
pub const GUARD_SKILLS: usize = 3;

/// Exact Pareto front by exhaustive enumeration.
///
/// Every staffing of every activity is tried (each resource serves one
/// mastered skill or nothing, and the per-skill counts match the demand),
/// then every orientation of each unordered pair sharing a resource. Pairs
/// already ordered by precedence are sequenced along it. Orientations that
/// close a cycle and staffings that overload a resource are skipped.
pub fn brute_force_front<T: Scalar>(instance: &ProjectInstance<T>) -> Result<ParetoFront<T>, SolverError> {
    let executable = instance.executable().count();
    if executable > GUARD_ACTIVITIES || instance.resource_count() > GUARD_RESOURCES || instance.skill_count > GUARD_SKILLS {
        return Err(SolverError::GuardRail(format!(
            "{executable} activities, {} resources, {} skills (limits {GUARD_ACTIVITIES}, {GUARD_RESOURCES}, {GUARD_SKILLS})",
            instance.resource_count(),
            instance.skill_count
        )));
    }
    let n = instance.activity_count();
    let closure = instance.precedence_closure();
    let options: Vec<Vec<Vec<(usize, usize)>>> = (0..n).map(|i| staffings(instance, i)).collect();
    let mut found = Vec::new();
    if options.iter().all(|o| !o.is_empty()) {
        let mut pick = vec![0usize; n];
        loop {
            let mut x = empty_assignment(instance);
            let mut uses = vec![Vec::new(); n];
            for i in 0..n {
                for &(k, l) in &options[i][pick[i]] {
                    x[[i, l, k]] = true;
                    uses[i].push(k);
                }
            }
            let share = |i: usize, j: usize| uses[i].iter().any(|k| uses[j].contains(k));
            let mut free = Vec::new();
            let mut fixed = Array2::from_elem((n, n), false);
            for i in 0..n {
                for j in i + 1..n {
                    if !share(i, j) {
                        continue;
                    }
                    if closure[[i, j]] {
                        fixed[[i, j]] = true;
                    } else if closure[[j, i]] {
                        fixed[[j, i]] = true;
                    } else {
                        free.push((i, j));
                    }
                }
            }
            'orientations: for mask in 0u64..1 << free.len() {
                let mut z = fixed.clone();
                for (b, &(i, j)) in free.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        z[[j, i]] = true;
                    } else {
                        z[[i, j]] = true;
                    }
                }
                match tighten_starts(instance, &x, &z) {
                    Ok(solution) => found.push(FrontPoint {
                        objectives: evaluate(instance, &solution),
                        solution,
                        grid_index: None,
                        slack: None,
                        status: SolveStatus::Optimal,
                        wall_time: 0.0,
                    }),
                    Err(ScheduleError::Cycle) => {}
                    Err(_) => break 'orientations,
                }
            }
            if !advance(&mut pick, &options) {
                break;
            }
        }
    }
    let points = dominance_filter(found);
    let payoff = match (points.first(), points.last()) {
        (Some(a), Some(b)) => Some(PayoffTable { makespan_first: a.objectives, cost_first: b.objectives }),
        _ => None,
    };
    let diagnosis = points.is_empty().then(|| "no feasible staffing and sequencing exists".to_string());
    Ok(ParetoFront { points, payoff, grid_count: 0, levels: Vec::new(), diagnosis, payoff_proven: true })
}

/// Odometer over the per-activity option lists.
fn advance(pick: &mut [usize], options: &[Vec<Vec<(usize, usize)>>]) -> bool {
    for i in (0..pick.len()).rev() {
        pick[i] += 1;
        if pick[i] < options[i].len() {
            return true;
        }
        pick[i] = 0;
    }
    false
}

/// Every map from resources to "idle or one mastered skill" that meets the
/// activity's demand exactly.
fn staffings<T: Scalar>(instance: &ProjectInstance<T>, activity: usize) -> Vec<Vec<(usize, usize)>> {
    let r = instance.resource_count();
    let s = instance.skill_count;
    let mut out = Vec::new();
    let mut code = vec![0usize; r];
    loop {
        let pairs: Vec<(usize, usize)> =
            code.iter().enumerate().filter(|&(_, &c)| c > 0).map(|(k, &c)| (k, c - 1)).collect();
        let mastered = pairs.iter().all(|&(k, l)| instance.resources[k].masters(l));
        let meets = (0..s).all(|l| pairs.iter().filter(|&&(_, m)| m == l).count() == instance.requirement(activity, l) as usize);
        if mastered && meets {
            out.push(pairs);
        }
        let mut k = 0;
        loop {
            if k == r {
                return out;
            }
            code[k] += 1;
            if code[k] <= s {
                break;
            }
            code[k] = 0;
            k += 1;
        }
    }
}
