use ndarray::{Array2, Array3};

use crate::graph;
use crate::instance::ProjectInstance;
use crate::queueing::{critical_arrival_rate, waiting_time, QueueOperatingPoint};
use crate::scalar::Scalar;
use crate::schedule::{ScheduleError, ScheduleSolution};

/// Completes an assignment and a sequencing into a full solution with the
/// earliest feasible start times.
///
/// Arrival rates are the assignment counts, resource waits follow from the
/// queue formula, every activity waits for the slowest resource it uses, and
/// starts are longest paths over precedence plus sequencing arcs where an arc
/// out of `i` weighs `d_i + T_i`. No other start vector consistent with the
/// same `(X, Z)` has a smaller makespan.
pub fn tighten_starts<T: Scalar>(
    instance: &ProjectInstance<T>,
    assignment: &Array3<bool>,
    sequencing: &Array2<bool>,
) -> Result<ScheduleSolution<T>, ScheduleError> {
    let n = instance.activity_count();
    let skills = instance.skill_count;
    let resources = instance.resource_count();
    if assignment.shape() != [n, skills, resources] || sequencing.shape() != [n, n] {
        return Err(ScheduleError::Dimension(format!(
            "assignment {:?} / sequencing {:?} for {n} activities, {skills} skills, {resources} resources",
            assignment.shape(),
            sequencing.shape()
        )));
    }

    let mut usage = Array2::from_elem((n, resources), false);
    let mut counts = vec![0usize; resources];
    for ((i, _, k), &x) in assignment.indexed_iter() {
        if x {
            usage[[i, k]] = true;
            counts[k] += 1;
        }
    }

    let mut arrival_rates = Vec::with_capacity(resources);
    let mut resource_waits = Vec::with_capacity(resources);
    for (k, &count) in counts.iter().enumerate() {
        let params = instance.resources[k].reliability;
        let lambda = T::from_count(count);
        let wait = waiting_time(&QueueOperatingPoint::new(lambda, params)).map_err(|_| ScheduleError::Unstable {
            resource: k,
            arrival_rate: count as f64,
            critical: critical_arrival_rate(&params).to_real(),
        })?;
        arrival_rates.push(lambda);
        resource_waits.push(wait);
    }

    let activity_waits: Vec<T> = (0..n)
        .map(|i| (0..resources).filter(|&k| usage[[i, k]]).fold(T::zero(), |t, k| t.max_of(resource_waits[k])))
        .collect();

    let mut arcs: Vec<Vec<usize>> = instance.successors.clone();
    for ((i, j), &z) in sequencing.indexed_iter() {
        if z && !arcs[i].contains(&j) {
            arcs[i].push(j);
        }
    }
    let order = graph::topological_order(&arcs).ok_or(ScheduleError::Cycle)?;

    let mut starts = vec![T::zero(); n];
    for &i in &order {
        let finish = starts[i] + T::from_count(instance.duration(i) as usize) + activity_waits[i];
        for &j in &arcs[i] {
            starts[j] = starts[j].max_of(finish);
        }
    }

    Ok(ScheduleSolution {
        assignment: assignment.clone(),
        sequencing: sequencing.clone(),
        usage,
        arrival_rates,
        resource_waits,
        activity_waits,
        starts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::chain2;
    use crate::instance::ReliabilityParams;
    use crate::schedule::{assignment_from_triples, empty_assignment, evaluate};

    #[test]
    fn chain_without_waits() {
        let inst = chain2::<f64>((3, 4));
        let sol = tighten_starts(&inst, &empty_assignment(&inst), &Array2::from_elem((4, 4), false)).unwrap();
        assert_eq!(sol.starts, vec![0.0, 0.0, 3.0, 7.0]);
        assert_eq!(evaluate(&inst, &sol).makespan, 7.0);
    }

    #[test]
    fn chain_with_queue_wait() {
        // resource 1 runs at lambda = 1 with mu = 3, upsilon = r = 0.5:
        // W = ((1)^2 + 3 * 0.5) / (1 * (0.5 * 3 - 0.5 - 0.5)) = 2.5 / 0.5 = 5
        let mut inst = chain2::<f64>((3, 4));
        inst.resources[0].reliability = ReliabilityParams::new(0.5, 0.5, 3.0);
        let x = assignment_from_triples(&inst, [(1, 0, 0)]);
        let sol = tighten_starts(&inst, &x, &Array2::from_elem((4, 4), false)).unwrap();
        assert_eq!(sol.resource_waits[0], 5.0);
        assert_eq!(sol.activity_waits, vec![0.0, 5.0, 0.0, 0.0]);
        assert_eq!(sol.starts, vec![0.0, 0.0, 8.0, 12.0]);

        let x = assignment_from_triples(&inst, [(1, 0, 0), (2, 1, 1)]);
        let sol = tighten_starts(&inst, &x, &Array2::from_elem((4, 4), false)).unwrap();
        let second = sol.resource_waits[1];
        assert_eq!(sol.starts[3], 12.0 + second);
    }

    #[test]
    fn overloaded_resource_is_reported() {
        let mut inst = chain2::<f64>((3, 4));
        inst.resources[1].reliability = ReliabilityParams::new(0.5, 0.5, 2.0);
        let x = assignment_from_triples(&inst, [(1, 0, 0), (2, 1, 1)]);
        let err = tighten_starts(&inst, &x, &Array2::from_elem((4, 4), false)).unwrap_err();
        assert_eq!(err, ScheduleError::Unstable { resource: 1, arrival_rate: 1.0, critical: 1.0 });
    }

    #[test]
    fn sequencing_against_precedence_is_a_cycle() {
        let inst = chain2::<f64>((3, 4));
        let mut z = Array2::from_elem((4, 4), false);
        z[[2, 1]] = true;
        assert_eq!(tighten_starts(&inst, &empty_assignment(&inst), &z), Err(ScheduleError::Cycle));
    }
}
