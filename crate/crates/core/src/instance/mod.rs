//! Project instances: activities on an activity-on-node network, multi-skilled
//! resources with breakdown parameters, and the loaders that build them from
//! PSPLIB files plus a JSON extension sidecar.
//!
//! Indices are zero-based inside the crate. Files and reports use the
//! one-based ids of the PSPLIB convention, so activity `i` is printed as
//! `i + 1`, and likewise for resources and skills.

mod adaptation;
mod extension;
mod psplib;
mod random;
mod validate;

use std::collections::{BTreeMap, BTreeSet};

use ndarray::Array2;
use thiserror::Error;

use crate::graph;
use crate::scalar::Scalar;

pub use adaptation::{default_extension, AdaptationOptions};
pub use extension::{load_extension, parse_extension, Extension, LoadedInstance, RequirementSpec, ResourceSpec};
pub use psplib::{parse_psplib, PsplibError, PsplibProject};
pub use random::{random_instance, RandomShape};
pub use validate::{validate, Violation};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Psplib(#[from] PsplibError),
    #[error("extension sidecar: {0}")]
    Json(#[from] serde_json::Error),
    #[error("extension sidecar: {0}")]
    Extension(String),
    #[error("invalid instance: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(violations: &[Violation]) -> String {
    violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Breakdown behaviour of one resource, all rates per time unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReliabilityParams<T> {
    pub disruption_rate: T,
    pub retrieval_rate: T,
    pub service_rate: T,
}

impl<T: Scalar> ReliabilityParams<T> {
    pub fn new(disruption_rate: T, retrieval_rate: T, service_rate: T) -> Self {
        Self { disruption_rate, retrieval_rate, service_rate }
    }

    /// Names of the rates that are not strictly positive and finite.
    pub fn invalid_rates(&self) -> Vec<&'static str> {
        [
            ("disruption_rate", self.disruption_rate),
            ("retrieval_rate", self.retrieval_rate),
            ("service_rate", self.service_rate),
        ]
        .into_iter()
        .filter(|(_, rate)| !(rate.is_finite() && *rate > T::zero()))
        .map(|(name, _)| name)
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Activity {
    pub duration: u32,
    /// Skill index to number of resources needed with that skill.
    pub requirements: BTreeMap<usize, u32>,
}

impl Activity {
    pub fn new(duration: u32) -> Self {
        Self { duration, requirements: BTreeMap::new() }
    }

    pub fn with_requirement(mut self, skill: usize, count: u32) -> Self {
        self.requirements.insert(skill, count);
        self
    }

    pub fn total_demand(&self) -> u32 {
        self.requirements.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResourceProfile<T> {
    pub skills: BTreeSet<usize>,
    /// Cost per time unit of using this resource for a skill.
    pub cost_per_skill: BTreeMap<usize, T>,
    pub reliability: ReliabilityParams<T>,
}

impl<T: Scalar> ResourceProfile<T> {
    pub fn masters(&self, skill: usize) -> bool {
        self.skills.contains(&skill)
    }

    pub fn cost(&self, skill: usize) -> Option<T> {
        self.cost_per_skill.get(&skill).copied()
    }
}

/// Which reliability rate a sensitivity sweep scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateParameter {
    Retrieval,
    Disruption,
    Service,
}

/// A single-project, single-mode instance. Activity 0 is the dummy source and
/// the last activity the dummy sink.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectInstance<T> {
    pub activities: Vec<Activity>,
    pub successors: Vec<Vec<usize>>,
    pub resources: Vec<ResourceProfile<T>>,
    pub skill_count: usize,
}

impl<T: Scalar> ProjectInstance<T> {
    pub fn activity_count(&self) -> usize {
        self.activities.len()
    }

    pub fn resource_count(&self) -> usize {
        self.resources.len()
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.activities.len() - 1
    }

    pub fn is_dummy(&self, activity: usize) -> bool {
        activity == 0 || activity + 1 == self.activities.len()
    }

    /// Executable (non-dummy) activity indices.
    pub fn executable(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.activities.len().saturating_sub(1)).filter(move |&i| !self.is_dummy(i))
    }

    pub fn duration(&self, activity: usize) -> u32 {
        self.activities[activity].duration
    }

    pub fn requirement(&self, activity: usize, skill: usize) -> u32 {
        self.activities[activity].requirements.get(&skill).copied().unwrap_or(0)
    }

    /// Direct precedence `p_ij`.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.successors[i].contains(&j)
    }

    pub fn precedence_matrix(&self) -> Array2<bool> {
        let n = self.activity_count();
        let mut p = Array2::from_elem((n, n), false);
        for (i, succ) in self.successors.iter().enumerate() {
            for &j in succ {
                p[[i, j]] = true;
            }
        }
        p
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        graph::predecessors(&self.successors)
    }

    pub fn topological_order(&self) -> Option<Vec<usize>> {
        graph::topological_order(&self.successors)
    }

    /// Transitive closure of the precedence relation: `closure[[i, j]]` holds
    /// iff there is a directed path from `i` to `j`.
    pub fn precedence_closure(&self) -> Array2<bool> {
        let n = self.activity_count();
        let mut closure = Array2::from_elem((n, n), false);
        for i in 0..n {
            for (j, reached) in graph::reachable_from(&self.successors, i).into_iter().enumerate() {
                closure[[i, j]] = reached;
            }
        }
        closure
    }

    /// Copy of the instance with one reliability rate multiplied by `factor`
    /// on every resource.
    pub fn with_scaled_rate(&self, parameter: RateParameter, factor: T) -> Self {
        let mut scaled = self.clone();
        for resource in &mut scaled.resources {
            let rel = &mut resource.reliability;
            match parameter {
                RateParameter::Retrieval => rel.retrieval_rate = rel.retrieval_rate * factor,
                RateParameter::Disruption => rel.disruption_rate = rel.disruption_rate * factor,
                RateParameter::Service => rel.service_rate = rel.service_rate * factor,
            }
        }
        scaled
    }

    /// Re-express every real-valued parameter in another scalar type.
    pub fn convert<U: Scalar>(&self) -> ProjectInstance<U> {
        let conv = |x: T| U::from_real(x.to_real());
        ProjectInstance {
            activities: self.activities.clone(),
            successors: self.successors.clone(),
            skill_count: self.skill_count,
            resources: self
                .resources
                .iter()
                .map(|r| ResourceProfile {
                    skills: r.skills.clone(),
                    cost_per_skill: r.cost_per_skill.iter().map(|(&l, &c)| (l, conv(c))).collect(),
                    reliability: ReliabilityParams {
                        disruption_rate: conv(r.reliability.disruption_rate),
                        retrieval_rate: conv(r.reliability.retrieval_rate),
                        service_rate: conv(r.reliability.service_rate),
                    },
                })
                .collect(),
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Source, two chained activities, sink. One resource per skill.
    pub fn chain2<T: Scalar>(durations: (u32, u32)) -> ProjectInstance<T> {
        let rel = ReliabilityParams::new(T::from_real(0.5), T::from_real(0.5), T::from_real(20.0));
        let resource = |skill: usize| ResourceProfile {
            skills: [skill].into(),
            cost_per_skill: [(skill, T::from_real(10.0))].into(),
            reliability: rel,
        };
        ProjectInstance {
            activities: vec![
                Activity::new(0),
                Activity::new(durations.0).with_requirement(0, 1),
                Activity::new(durations.1).with_requirement(1, 1),
                Activity::new(0),
            ],
            successors: vec![vec![1], vec![2], vec![3], vec![]],
            resources: vec![resource(0), resource(1)],
            skill_count: 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dummies_and_executables() {
        let inst = fixtures::chain2::<f64>((3, 4));
        assert!(inst.is_dummy(0) && inst.is_dummy(3));
        assert_eq!(inst.executable().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(inst.precedence_matrix().iter().filter(|&&p| p).count(), 3);
        let closure = inst.precedence_closure();
        assert!(closure[[0, 3]] && closure[[1, 2]] && !closure[[2, 1]]);
    }

    #[test]
    fn scaling_touches_only_the_chosen_rate() {
        let inst = fixtures::chain2::<f64>((3, 4));
        let scaled = inst.with_scaled_rate(RateParameter::Retrieval, 1.4);
        let rel = scaled.resources[0].reliability;
        assert!((rel.retrieval_rate - 0.7).abs() < 1e-15);
        assert_eq!(rel.disruption_rate, 0.5);
        assert_eq!(rel.service_rate, 20.0);
    }

    #[test]
    fn invalid_rates_are_named() {
        let rel = ReliabilityParams::new(0.0, 0.5, f64::INFINITY);
        assert_eq!(rel.invalid_rates(), vec!["disruption_rate", "service_rate"]);
    }
}
