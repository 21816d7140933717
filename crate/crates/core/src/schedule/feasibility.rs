use std::fmt;

use crate::instance::ProjectInstance;
use crate::queueing::{waiting_time, QueueOperatingPoint};
use crate::scalar::Scalar;
use crate::schedule::{ScheduleError, ScheduleSolution};

/// The model constraints a solution can break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    /// Each activity gets exactly `r_il` resources for skill `l`.
    SkillCoverage,
    /// A resource serves at most one skill of an activity.
    SingleSkillPerResource,
    /// `Z_ij + Z_ji <= 1`.
    SequencingAntisymmetry,
    /// Two activities sharing a resource must be sequenced.
    ResourceDisjunction,
    /// `λ_k` equals the number of assignments of resource `k`.
    ArrivalRate,
    /// `W_k` equals the queue formula at `λ_k`.
    WaitingTime,
    /// An assignment implies usage: `X_ilk <= Y_ik`.
    UsageLink,
    /// `W_k Y_ik <= T_i`.
    WaitBound,
    /// Finish-to-start with waits along precedence and sequencing arcs.
    FinishToStart,
    /// A resource only serves skills it masters.
    SkillMastery,
    /// Continuous variables are finite and non-negative.
    Domain,
}

impl Constraint {
    pub const ALL: [Constraint; 11] = [
        Constraint::SkillCoverage,
        Constraint::SingleSkillPerResource,
        Constraint::SequencingAntisymmetry,
        Constraint::ResourceDisjunction,
        Constraint::ArrivalRate,
        Constraint::WaitingTime,
        Constraint::UsageLink,
        Constraint::WaitBound,
        Constraint::FinishToStart,
        Constraint::SkillMastery,
        Constraint::Domain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constraint::SkillCoverage => "skill-coverage",
            Constraint::SingleSkillPerResource => "single-skill-per-resource",
            Constraint::SequencingAntisymmetry => "sequencing-antisymmetry",
            Constraint::ResourceDisjunction => "resource-disjunction",
            Constraint::ArrivalRate => "arrival-rate",
            Constraint::WaitingTime => "waiting-time",
            Constraint::UsageLink => "usage-link",
            Constraint::WaitBound => "wait-bound",
            Constraint::FinishToStart => "finish-to-start",
            Constraint::SkillMastery => "skill-mastery",
            Constraint::Domain => "domain",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One broken constraint. `location` uses one-based ids; `residual` is the
/// amount by which the constraint is missed (infinite when undefined).
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintViolation {
    pub constraint: Constraint,
    pub location: String,
    pub residual: f64,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {} (residual {})", self.constraint, self.location, self.residual)
    }
}

struct Collector(Vec<ConstraintViolation>);

impl Collector {
    fn push(&mut self, constraint: Constraint, location: String, residual: f64) {
        self.0.push(ConstraintViolation { constraint, location, residual });
    }
}

fn check_shape<T: Scalar>(instance: &ProjectInstance<T>, solution: &ScheduleSolution<T>) -> Result<(), ScheduleError> {
    let n = instance.activity_count();
    let s = instance.skill_count;
    let r = instance.resource_count();
    let expect = |what: &str, got: &[usize], want: &[usize]| {
        if got == want {
            Ok(())
        } else {
            Err(ScheduleError::Dimension(format!("{what} has shape {got:?}, expected {want:?}")))
        }
    };
    expect("assignment", solution.assignment.shape(), &[n, s, r])?;
    expect("sequencing", solution.sequencing.shape(), &[n, n])?;
    expect("usage", solution.usage.shape(), &[n, r])?;
    expect("arrival_rates", &[solution.arrival_rates.len()], &[r])?;
    expect("resource_waits", &[solution.resource_waits.len()], &[r])?;
    expect("activity_waits", &[solution.activity_waits.len()], &[n])?;
    expect("starts", &[solution.starts.len()], &[n])
}

/// Every constraint the solution breaks; empty iff it is feasible.
pub fn check_feasibility<T: Scalar>(
    instance: &ProjectInstance<T>,
    solution: &ScheduleSolution<T>,
) -> Result<Vec<ConstraintViolation>, ScheduleError> {
    check_shape(instance, solution)?;
    let n = instance.activity_count();
    let skills = instance.skill_count;
    let resources = instance.resource_count();
    let x = &solution.assignment;
    let z = &solution.sequencing;
    let y = &solution.usage;
    let mut out = Collector(Vec::new());

    let served: Vec<Vec<u32>> =
        (0..n).map(|i| (0..resources).map(|k| (0..skills).filter(|&l| x[[i, l, k]]).count() as u32).collect()).collect();

    for i in 0..n {
        for l in 0..skills {
            let got = (0..resources).filter(|&k| x[[i, l, k]]).count() as i64;
            let want = instance.requirement(i, l) as i64;
            if got != want {
                out.push(Constraint::SkillCoverage, format!("activity {}, skill {}", i + 1, l + 1), (got - want) as f64);
            }
        }
        for k in 0..resources {
            if served[i][k] > 1 {
                out.push(
                    Constraint::SingleSkillPerResource,
                    format!("activity {}, resource {}", i + 1, k + 1),
                    f64::from(served[i][k] - 1),
                );
            }
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            if z[[i, j]] && z[[j, i]] {
                out.push(Constraint::SequencingAntisymmetry, format!("activities {} and {}", i + 1, j + 1), 1.0);
            }
            let ordered = u32::from(z[[i, j]]) + u32::from(z[[j, i]]);
            for k in 0..resources {
                let load = served[i][k] + served[j][k];
                if load > 1 + ordered {
                    out.push(
                        Constraint::ResourceDisjunction,
                        format!("activities {} and {}, resource {}", i + 1, j + 1, k + 1),
                        f64::from(load - 1 - ordered),
                    );
                }
            }
        }
    }

    for k in 0..resources {
        let count = T::from_count((0..n).map(|i| served[i][k] as usize).sum());
        let lambda = solution.arrival_rates[k];
        if !T::approx_eq(lambda, count) {
            out.push(Constraint::ArrivalRate, format!("resource {}", k + 1), (lambda - count).to_real());
        }
        let w = solution.resource_waits[k];
        match waiting_time(&QueueOperatingPoint::new(lambda, instance.resources[k].reliability)) {
            Ok(expected) if T::approx_eq(w, expected) => {}
            Ok(expected) => out.push(Constraint::WaitingTime, format!("resource {}", k + 1), (w - expected).to_real()),
            Err(_) => out.push(Constraint::WaitingTime, format!("resource {} (unstable)", k + 1), f64::INFINITY),
        }
    }

    for i in 0..n {
        for k in 0..resources {
            if served[i][k] > 0 && !y[[i, k]] {
                out.push(Constraint::UsageLink, format!("activity {}, resource {}", i + 1, k + 1), 1.0);
            }
            let w = solution.resource_waits[k];
            if y[[i, k]] && !T::approx_le(w, solution.activity_waits[i]) {
                out.push(
                    Constraint::WaitBound,
                    format!("activity {}, resource {}", i + 1, k + 1),
                    (w - solution.activity_waits[i]).to_real(),
                );
            }
        }
    }

    for i in 0..n {
        let finish = solution.starts[i] + T::from_count(instance.duration(i) as usize) + solution.activity_waits[i];
        for j in 0..n {
            if (instance.precedes(i, j) || z[[i, j]]) && !T::approx_le(finish, solution.starts[j]) {
                out.push(
                    Constraint::FinishToStart,
                    format!("activities {} -> {}", i + 1, j + 1),
                    (finish - solution.starts[j]).to_real(),
                );
            }
        }
    }

    for ((i, l, k), &assigned) in x.indexed_iter() {
        if assigned && !instance.resources[k].masters(l) {
            out.push(Constraint::SkillMastery, format!("activity {}, skill {}, resource {}", i + 1, l + 1, k + 1), 1.0);
        }
    }

    let domain = |out: &mut Collector, what: &str, values: &[T]| {
        for (idx, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v >= T::zero()) {
                let residual = if v.is_finite() { -v.to_real() } else { f64::INFINITY };
                out.push(Constraint::Domain, format!("{what} {}", idx + 1), residual);
            }
        }
    };
    domain(&mut out, "arrival rate of resource", &solution.arrival_rates);
    domain(&mut out, "wait of resource", &solution.resource_waits);
    domain(&mut out, "wait of activity", &solution.activity_waits);
    domain(&mut out, "start of activity", &solution.starts);

    Ok(out.0)
}
