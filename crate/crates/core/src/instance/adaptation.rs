//! Default conversion of a plain PSPLIB network into a multi-skill instance.
//!
//! * each renewable resource type of the file becomes one skill;
//! * resource `k` (one-based) masters skill `ceil(k * |S| / |R|)` and the next
//!   skill after it, wrapping around;
//! * an activity needs `min(request, cap)` resources of each skill it requests,
//!   further clipped to the number of resources that master the skill;
//! * `c_lk` comes from a `ChaCha8` stream seeded with `cost_seed`: for every
//!   resource, then every skill, draw `next_u64()` and map it to
//!   `1000 * (60 + x % 81)`, i.e. 60 000 to 140 000 per time unit;
//! * every resource gets the same disruption and retrieval rates; the service
//!   rate defaults to `2.5 * |I|`, which keeps a resource serving every
//!   executable activity below its critical arrival rate at the default rates.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Extension, PsplibProject, RequirementSpec, ResourceSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptationOptions {
    pub resources: usize,
    /// `None` means one skill per renewable resource type.
    pub skills: Option<usize>,
    pub request_cap: u32,
    pub cost_seed: u64,
    pub disruption_rate: f64,
    pub retrieval_rate: f64,
    /// `None` means `2.5 * executable activity count`.
    pub service_rate: Option<f64>,
}

impl Default for AdaptationOptions {
    fn default() -> Self {
        Self {
            resources: 4,
            skills: None,
            request_cap: 2,
            cost_seed: 2024,
            disruption_rate: 0.5,
            retrieval_rate: 0.5,
            service_rate: None,
        }
    }
}

pub fn default_extension(project: &PsplibProject, options: &AdaptationOptions) -> Extension {
    let resource_count = options.resources.max(1);
    let skill_count = options.skills.unwrap_or(project.renewable_count()).max(1);
    let executable = project.job_count().saturating_sub(2);
    let service_rate = options.service_rate.unwrap_or(2.5 * executable.max(1) as f64);

    let mut rng = ChaCha8Rng::seed_from_u64(options.cost_seed);
    let mut masters_of = vec![0u32; skill_count];
    let resources: Vec<ResourceSpec> = (1..=resource_count)
        .map(|k| {
            let primary = (k * skill_count).div_ceil(resource_count);
            let neighbour = primary % skill_count + 1;
            let mut skills = vec![primary];
            if neighbour != primary {
                skills.push(neighbour);
            }
            skills.sort_unstable();
            let table: Vec<f64> = (0..skill_count).map(|_| 1000.0 * (60 + rng.next_u64() % 81) as f64).collect();
            let cost_per_skill: BTreeMap<usize, f64> = skills.iter().map(|&l| (l, table[l - 1])).collect();
            for &l in &skills {
                masters_of[l - 1] += 1;
            }
            ResourceSpec {
                id: k,
                skills,
                cost_per_skill,
                disruption_rate: options.disruption_rate,
                retrieval_rate: options.retrieval_rate,
                service_rate,
            }
        })
        .collect();

    let mut requirements = Vec::new();
    for job in 1..project.job_count().saturating_sub(1) {
        for (t, &request) in project.requests[job].iter().enumerate() {
            let skill = t % skill_count;
            let count = request.min(options.request_cap).min(masters_of[skill]);
            if count > 0 && !requirements.iter().any(|r: &RequirementSpec| r.activity == job + 1 && r.skill == skill + 1) {
                requirements.push(RequirementSpec { activity: job + 1, skill: skill + 1, count });
            }
        }
    }

    Extension { skill_count, resources, requirements }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn project() -> PsplibProject {
        PsplibProject {
            durations: vec![0, 3, 5, 0],
            successors: vec![vec![1, 2], vec![3], vec![3], vec![]],
            requests: vec![vec![0; 4], vec![4, 0, 0, 0], vec![0, 1, 0, 0], vec![0; 4]],
            capacities: vec![10; 4],
            horizon: None,
        }
    }

    #[test]
    fn four_by_four_layout() {
        let ext = default_extension(&project(), &AdaptationOptions::default());
        assert_eq!(ext.skill_count, 4);
        let skills: Vec<Vec<usize>> = ext.resources.iter().map(|r| r.skills.clone()).collect();
        assert_eq!(skills, vec![vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4]]);
        assert!(ext.resources.iter().all(|r| r.disruption_rate == 0.5 && r.retrieval_rate == 0.5));
        assert!(ext.resources.iter().all(|r| r.service_rate == 5.0));
        assert_eq!(
            ext.requirements,
            vec![RequirementSpec { activity: 2, skill: 1, count: 2 }, RequirementSpec { activity: 3, skill: 2, count: 1 }]
        );
    }

    #[test]
    fn costs_are_seeded_and_in_range() {
        let a = default_extension(&project(), &AdaptationOptions::default());
        let b = default_extension(&project(), &AdaptationOptions::default());
        assert_eq!(a, b);
        for r in &a.resources {
            for &c in r.cost_per_skill.values() {
                assert!((60_000.0..=140_000.0).contains(&c) && c % 1000.0 == 0.0);
            }
        }
        let other = default_extension(&project(), &AdaptationOptions { cost_seed: 7, ..Default::default() });
        assert_ne!(a.resources, other.resources);
    }
}
