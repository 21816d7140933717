//! Seeded random instances for tests and experiments.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Activity, ProjectInstance, ReliabilityParams, ResourceProfile};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomShape {
    pub activities: usize,
    pub resources: usize,
    pub skills: usize,
}

impl RandomShape {
    pub fn new(activities: usize, resources: usize, skills: usize) -> Self {
        Self { activities, resources, skills }
    }
}

/// A valid instance with the given shape, fully determined by `seed`.
///
/// Precedence arcs only point from lower to higher ids. Every skill has at
/// least one master and every demand can be staffed. Costs are integers in
/// `10..=90`. Critical arrival rates land between 2 and `activities + 1`, so
/// some staffings overload a resource and others do not.
pub fn random_instance<T: Scalar>(shape: RandomShape, seed: u64) -> ProjectInstance<T> {
    assert!(shape.activities >= 1 && shape.resources >= 1 && shape.skills >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = shape.activities;
    let sink = m + 1;

    let mut resources: Vec<ResourceProfile<T>> = (0..shape.resources)
        .map(|_| {
            let mut skills = BTreeSet::new();
            skills.insert(rng.random_range(0..shape.skills));
            if shape.skills > 1 && rng.random_bool(0.5) {
                skills.insert(rng.random_range(0..shape.skills));
            }
            let disruption = rng.random_range(5..=100) as f64 / 100.0;
            let retrieval = rng.random_range(20..=150) as f64 / 100.0;
            let critical = rng.random_range(2..=m.max(2) + 1) as f64 + 0.5;
            let service = critical * (retrieval + disruption) / retrieval;
            ResourceProfile {
                cost_per_skill: skills.iter().map(|&l| (l, T::from_count(10 * rng.random_range(1..=9)))).collect(),
                skills,
                reliability: ReliabilityParams::new(
                    T::from_real(disruption),
                    T::from_real(retrieval),
                    T::from_real(service),
                ),
            }
        })
        .collect();
    for l in 0..shape.skills {
        if !resources.iter().any(|r| r.masters(l)) {
            let k = rng.random_range(0..shape.resources);
            resources[k].skills.insert(l);
            resources[k].cost_per_skill.insert(l, T::from_count(10 * rng.random_range(1..=9)));
        }
    }

    let mut activities = vec![Activity::new(0)];
    for _ in 0..m {
        let mut activity = Activity::new(rng.random_range(1..=6));
        let wanted = if shape.skills > 1 && rng.random_bool(0.3) { 2 } else { 1 };
        let mut free = shape.resources;
        for _ in 0..wanted {
            let l = rng.random_range(0..shape.skills);
            let masters = resources.iter().filter(|r| r.masters(l)).count() as u32;
            let have = activity.requirements.get(&l).copied().unwrap_or(0);
            if have < masters && free > 0 {
                activity.requirements.insert(l, have + 1);
                free -= 1;
            }
        }
        activities.push(activity);
    }
    activities.push(Activity::new(0));

    let mut successors = vec![Vec::new(); m + 2];
    let mut has_pred = vec![false; m + 2];
    for i in 1..=m {
        for j in i + 1..=m {
            if rng.random_bool(0.35) {
                successors[i].push(j);
                has_pred[j] = true;
            }
        }
    }
    for j in 1..=m {
        if !has_pred[j] {
            successors[0].push(j);
        }
        if successors[j].is_empty() {
            successors[j].push(sink);
        }
    }
    ProjectInstance { activities, successors, resources, skill_count: shape.skills }
}
