use std::fmt;

use crate::graph;
use crate::instance::ProjectInstance;
use crate::scalar::Scalar;

/// A broken instance invariant. Ids in messages are one-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooFewNodes,
    DummyNotEmpty { activity: usize },
    UnknownSkill { activity: usize, skill: usize },
    OverDemand { activity: usize, demand: u32, resources: usize },
    SuccessorOutOfRange { activity: usize, successor: usize },
    SelfLoop { activity: usize },
    Cyclic,
    NotTopological { from: usize, to: usize },
    SourceHasPredecessors,
    SinkHasSuccessors,
    Disconnected { activity: usize },
    NoSkills { resource: usize },
    ResourceSkillOutOfRange { resource: usize, skill: usize },
    CostWithoutSkill { resource: usize, skill: usize },
    MissingCost { resource: usize, skill: usize },
    NegativeCost { resource: usize, skill: usize },
    InvalidRate { resource: usize, rate: &'static str },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match *self {
            TooFewNodes => write!(f, "a project needs at least a source and a sink"),
            DummyNotEmpty { activity } => {
                write!(f, "dummy activity {} must have zero duration and no skill requirements", activity + 1)
            }
            UnknownSkill { activity, skill } => write!(f, "activity {} requires unknown skill {}", activity + 1, skill + 1),
            OverDemand { activity, demand, resources } => {
                write!(f, "activity {} needs {demand} resources but only {resources} exist", activity + 1)
            }
            SuccessorOutOfRange { activity, successor } => {
                write!(f, "activity {} lists successor {} outside the project", activity + 1, successor + 1)
            }
            SelfLoop { activity } => write!(f, "activity {} precedes itself", activity + 1),
            Cyclic => write!(f, "precedence not a DAG"),
            NotTopological { from, to } => {
                write!(f, "activities not topologically numbered: {} precedes {}", from + 1, to + 1)
            }
            SourceHasPredecessors => write!(f, "source activity has predecessors"),
            SinkHasSuccessors => write!(f, "sink activity has successors"),
            Disconnected { activity } => {
                write!(f, "activity {} is not on a path from the source to the sink", activity + 1)
            }
            NoSkills { resource } => write!(f, "resource {} masters no skill", resource + 1),
            ResourceSkillOutOfRange { resource, skill } => {
                write!(f, "resource {} masters unknown skill {}", resource + 1, skill + 1)
            }
            CostWithoutSkill { resource, skill } => {
                write!(f, "resource {} has a cost for skill {} it does not master", resource + 1, skill + 1)
            }
            MissingCost { resource, skill } => {
                write!(f, "resource {} has no cost for mastered skill {}", resource + 1, skill + 1)
            }
            NegativeCost { resource, skill } => {
                write!(f, "resource {} has a negative or non-finite cost for skill {}", resource + 1, skill + 1)
            }
            InvalidRate { resource, rate } => write!(f, "resource {}: {rate} must be > 0", resource + 1),
        }
    }
}

/// Every broken invariant of `instance`; empty iff the instance is valid.
pub fn validate<T: Scalar>(instance: &ProjectInstance<T>) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = instance.activity_count();
    if n < 2 || instance.successors.len() != n {
        out.push(Violation::TooFewNodes);
        return out;
    }
    let resource_count = instance.resource_count();

    for (i, activity) in instance.activities.iter().enumerate() {
        if instance.is_dummy(i) {
            if activity.duration != 0 || activity.requirements.values().any(|&c| c > 0) {
                out.push(Violation::DummyNotEmpty { activity: i });
            }
            continue;
        }
        for &skill in activity.requirements.keys() {
            if skill >= instance.skill_count {
                out.push(Violation::UnknownSkill { activity: i, skill });
            }
        }
        let demand = activity.total_demand();
        if demand as usize > resource_count {
            out.push(Violation::OverDemand { activity: i, demand, resources: resource_count });
        }
    }

    let mut structural = false;
    for (i, succ) in instance.successors.iter().enumerate() {
        for &j in succ {
            if j >= n {
                out.push(Violation::SuccessorOutOfRange { activity: i, successor: j });
                structural = true;
            } else if i == j {
                out.push(Violation::SelfLoop { activity: i });
                structural = true;
            }
        }
    }
    if !structural {
        if graph::topological_order(&instance.successors).is_none() {
            out.push(Violation::Cyclic);
        } else {
            for (i, succ) in instance.successors.iter().enumerate() {
                for &j in succ {
                    if j < i {
                        out.push(Violation::NotTopological { from: i, to: j });
                    }
                }
            }
            let preds = graph::predecessors(&instance.successors);
            if !preds[0].is_empty() {
                out.push(Violation::SourceHasPredecessors);
            }
            if !instance.successors[n - 1].is_empty() {
                out.push(Violation::SinkHasSuccessors);
            }
            let from_source = graph::reachable_from(&instance.successors, 0);
            for i in 1..n {
                let reaches_sink = i == n - 1 || graph::reachable_from(&instance.successors, i)[n - 1];
                if !from_source[i] || !reaches_sink {
                    out.push(Violation::Disconnected { activity: i });
                }
            }
        }
    }

    for (k, resource) in instance.resources.iter().enumerate() {
        if resource.skills.is_empty() {
            out.push(Violation::NoSkills { resource: k });
        }
        for &skill in &resource.skills {
            if skill >= instance.skill_count {
                out.push(Violation::ResourceSkillOutOfRange { resource: k, skill });
            }
            match resource.cost(skill) {
                None => out.push(Violation::MissingCost { resource: k, skill }),
                Some(c) if !(c.is_finite() && c >= T::zero()) => {
                    out.push(Violation::NegativeCost { resource: k, skill })
                }
                Some(_) => {}
            }
        }
        for &skill in resource.cost_per_skill.keys() {
            if !resource.masters(skill) {
                out.push(Violation::CostWithoutSkill { resource: k, skill });
            }
        }
        for rate in resource.reliability.invalid_rates() {
            out.push(Violation::InvalidRate { resource: k, rate });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::chain2;

    #[test]
    fn fixture_is_valid() {
        assert_eq!(validate(&chain2::<f64>((3, 4))), vec![]);
    }

    #[test]
    fn zero_disruption_rate_is_reported() {
        let mut inst = chain2::<f64>((3, 4));
        inst.resources[1].reliability.disruption_rate = 0.0;
        let v = validate(&inst);
        assert_eq!(v, vec![Violation::InvalidRate { resource: 1, rate: "disruption_rate" }]);
        assert_eq!(v[0].to_string(), "resource 2: disruption_rate must be > 0");
    }

    #[test]
    fn two_cycle_is_not_a_dag() {
        let mut inst = chain2::<f64>((3, 4));
        inst.successors[2].push(1);
        let v = validate(&inst);
        assert_eq!(v, vec![Violation::Cyclic]);
        assert_eq!(v[0].to_string(), "precedence not a DAG");
    }

    #[test]
    fn dummy_with_work_and_dangling_activity() {
        let mut inst = chain2::<f64>((3, 4));
        inst.activities[0].duration = 1;
        inst.successors[2].clear();
        let v = validate(&inst);
        assert!(v.contains(&Violation::DummyNotEmpty { activity: 0 }));
        assert!(v.contains(&Violation::Disconnected { activity: 2 }));
        assert!(v.contains(&Violation::Disconnected { activity: 3 }));
    }

    #[test]
    fn cost_bookkeeping() {
        let mut inst = chain2::<f64>((3, 4));
        inst.resources[0].cost_per_skill.insert(1, 5.0);
        inst.resources[1].cost_per_skill.clear();
        let v = validate(&inst);
        assert!(v.contains(&Violation::CostWithoutSkill { resource: 0, skill: 1 }));
        assert!(v.contains(&Violation::MissingCost { resource: 1, skill: 1 }));
    }

    #[test]
    fn over_demand() {
        let mut inst = chain2::<f64>((3, 4));
        inst.activities[1].requirements.insert(1, 2);
        assert_eq!(validate(&inst), vec![Violation::OverDemand { activity: 1, demand: 3, resources: 2 }]);
    }
}
