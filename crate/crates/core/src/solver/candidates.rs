use std::cmp::Ordering;

use crate::instance::ProjectInstance;
use crate::scalar::Scalar;

/// One way to staff an activity: distinct resources, each serving one skill.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<T> {
    /// `(resource, skill)` pairs sorted by resource.
    pub pairs: Vec<(usize, usize)>,
    pub resources: u128,
    /// `d_i` times the summed unit costs.
    pub cost: T,
}

/// All staffings of `activity`, cheapest first, ties by resource/skill list.
/// Dummies and activities without requirements get the single empty staffing.
pub fn candidates<T: Scalar>(instance: &ProjectInstance<T>, activity: usize) -> Vec<Candidate<T>> {
    let demands: Vec<(usize, usize)> = instance.activities[activity]
        .requirements
        .iter()
        .filter(|&(_, &count)| count > 0)
        .map(|(&skill, &count)| (skill, count as usize))
        .collect();
    let duration = T::from_count(instance.duration(activity) as usize);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    extend(instance, &demands, 0, 0, 0, &mut chosen, &mut |pairs| {
        let mut pairs = pairs.to_vec();
        pairs.sort_unstable();
        let unit = pairs.iter().fold(T::zero(), |acc, &(k, l)| {
            acc + instance.resources[k].cost(l).expect("mastered skill has a cost")
        });
        let resources = pairs.iter().fold(0u128, |m, &(k, _)| m | 1 << k);
        out.push(Candidate { pairs, resources, cost: duration * unit });
    });
    out.sort_by(|a, b| a.cost.partial_cmp(&b.cost).unwrap_or(Ordering::Equal).then_with(|| a.pairs.cmp(&b.pairs)));
    out
}

/// Chooses, for demand `d` and skill `l`, combinations of masters above
/// `from` not yet used, recursing skill by skill.
fn extend<T: Scalar>(
    instance: &ProjectInstance<T>,
    demands: &[(usize, usize)],
    d: usize,
    taken: usize,
    from: usize,
    chosen: &mut Vec<(usize, usize)>,
    emit: &mut impl FnMut(&[(usize, usize)]),
) {
    if d == demands.len() {
        emit(chosen);
        return;
    }
    let (skill, count) = demands[d];
    if taken == count {
        extend(instance, demands, d + 1, 0, 0, chosen, emit);
        return;
    }
    for k in from..instance.resource_count() {
        if !instance.resources[k].masters(skill) || chosen.iter().any(|&(used, _)| used == k) {
            continue;
        }
        chosen.push((k, skill));
        extend(instance, demands, d, taken + 1, k + 1, chosen, emit);
        chosen.pop();
    }
}
