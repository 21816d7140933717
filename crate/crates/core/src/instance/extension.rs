//! The JSON sidecar that adds skills, costs and breakdown rates to a PSPLIB
//! network.
//!
//! ```json
//! {
//!   "skill_count": 2,
//!   "resources": [
//!     { "id": 1, "skills": [1, 2], "cost_per_skill": { "1": 100.0, "2": 120.0 },
//!       "disruption_rate": 0.5, "retrieval_rate": 0.5, "service_rate": 25.0 }
//!   ],
//!   "requirements": [ { "activity": 2, "skill": 1, "count": 1 } ]
//! }
//! ```
//!
//! All ids are one-based. Unknown keys are rejected.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::instance::{
    validate, Activity, InstanceError, ProjectInstance, PsplibProject, ReliabilityParams, ResourceProfile,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Extension {
    pub skill_count: usize,
    pub resources: Vec<ResourceSpec>,
    pub requirements: Vec<RequirementSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceSpec {
    pub id: usize,
    pub skills: Vec<usize>,
    pub cost_per_skill: BTreeMap<usize, f64>,
    pub disruption_rate: f64,
    pub retrieval_rate: f64,
    pub service_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequirementSpec {
    pub activity: usize,
    pub skill: usize,
    pub count: u32,
}

impl Extension {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("extension serializes") + "\n"
    }
}

pub fn parse_extension(text: &str) -> Result<Extension, InstanceError> {
    Ok(serde_json::from_str(text)?)
}

/// A validated instance plus warnings about requirements that no assignment
/// can satisfy. Such instances load fine; the solver reports them infeasible.
#[derive(Debug, Clone)]
pub struct LoadedInstance<T> {
    pub instance: ProjectInstance<T>,
    pub warnings: Vec<String>,
}

/// Combines a PSPLIB network with a sidecar into a validated instance.
pub fn load_extension<T: Scalar>(
    project: &PsplibProject,
    extension: &Extension,
) -> Result<LoadedInstance<T>, InstanceError> {
    let n = project.job_count();
    let skill_count = extension.skill_count;
    let bad = |msg: String| Err(InstanceError::Extension(msg));

    let mut resources: Vec<Option<ResourceProfile<T>>> = vec![None; extension.resources.len()];
    for spec in &extension.resources {
        if spec.id == 0 || spec.id > resources.len() {
            return bad(format!("resource id {} outside 1..={}", spec.id, resources.len()));
        }
        if resources[spec.id - 1].is_some() {
            return bad(format!("resource {} declared twice", spec.id));
        }
        let mut skills = BTreeSet::new();
        for &l in &spec.skills {
            if l == 0 || l > skill_count {
                return bad(format!("resource {} masters skill {l} outside 1..={skill_count}", spec.id));
            }
            skills.insert(l - 1);
        }
        let mut cost_per_skill = BTreeMap::new();
        for (&l, &c) in &spec.cost_per_skill {
            if l == 0 || l > skill_count {
                return bad(format!("resource {} prices skill {l} outside 1..={skill_count}", spec.id));
            }
            cost_per_skill.insert(l - 1, T::from_real(c));
        }
        let rates = [spec.disruption_rate, spec.retrieval_rate, spec.service_rate];
        if rates.iter().any(|r| !r.is_finite()) {
            return bad(format!("resource {} has a non-finite rate", spec.id));
        }
        resources[spec.id - 1] = Some(ResourceProfile {
            skills,
            cost_per_skill,
            reliability: ReliabilityParams::new(
                T::from_real(spec.disruption_rate),
                T::from_real(spec.retrieval_rate),
                T::from_real(spec.service_rate),
            ),
        });
    }
    let resources: Vec<_> = resources.into_iter().map(|r| r.expect("ids checked dense")).collect();

    let mut activities: Vec<Activity> = project.durations.iter().map(|&d| Activity::new(d)).collect();
    for req in &extension.requirements {
        if req.activity == 0 || req.activity > n {
            return bad(format!("requirement for activity {} outside 1..={n}", req.activity));
        }
        if req.skill == 0 || req.skill > skill_count {
            return bad(format!("requirement for skill {} outside 1..={skill_count}", req.skill));
        }
        let activity = &mut activities[req.activity - 1];
        if activity.requirements.contains_key(&(req.skill - 1)) {
            return bad(format!("activity {} lists skill {} twice", req.activity, req.skill));
        }
        if req.count > 0 {
            activity.requirements.insert(req.skill - 1, req.count);
        }
    }

    let instance = ProjectInstance { activities, successors: project.successors.clone(), resources, skill_count };
    let violations = validate(&instance);
    if !violations.is_empty() {
        return Err(InstanceError::Invalid(violations));
    }
    let warnings = infeasibility_warnings(&instance);
    Ok(LoadedInstance { instance, warnings })
}

fn infeasibility_warnings<T: Scalar>(instance: &ProjectInstance<T>) -> Vec<String> {
    let mut warnings = Vec::new();
    for i in instance.executable() {
        for (&skill, &count) in &instance.activities[i].requirements {
            let masters = instance.resources.iter().filter(|r| r.masters(skill)).count();
            if (masters as u32) < count {
                warnings.push(format!(
                    "activity {} needs {count} resources with skill {} but only {masters} master it; the instance is infeasible",
                    i + 1,
                    skill + 1
                ));
            }
        }
    }
    warnings
}
