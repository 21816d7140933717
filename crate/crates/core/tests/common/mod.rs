//! Helpers shared by the integration targets.
#![allow(dead_code)]

use std::fs;
use std::path::Path;

use ndarray::{Array2, Array3};
use rand::seq::IndexedRandom;
use rand::Rng;

use msrcpspr::instance::{load_extension, parse_extension, parse_psplib, random_instance, validate, RandomShape};
use msrcpspr::queueing::QueueOperatingPoint;
use msrcpspr::schedule::{tighten_starts, Constraint};
use msrcpspr::{Instance, Solution};

/// Forty seeded instances within the brute-force guard rails.
pub fn corpus() -> Vec<(u64, Instance)> {
    let shapes = [
        RandomShape::new(3, 2, 2),
        RandomShape::new(4, 3, 2),
        RandomShape::new(4, 4, 3),
        RandomShape::new(5, 3, 2),
        RandomShape::new(5, 4, 3),
    ];
    (0..40u64)
        .map(|seed| {
            let inst = random_instance(shapes[seed as usize % shapes.len()], 1000 + seed);
            assert_eq!(validate(&inst), vec![]);
            (seed, inst)
        })
        .collect()
}

/// `data/<stem>.sm` with its sidecar.
pub fn data_instance(stem: &str) -> Instance {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let project = parse_psplib(&fs::read_to_string(dir.join(format!("{stem}.sm"))).unwrap()).unwrap();
    let extension = parse_extension(&fs::read_to_string(dir.join(format!("{stem}.ext.json"))).unwrap()).unwrap();
    load_extension(&project, &extension).unwrap().instance
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn uses(x: &Array3<bool>, i: usize, k: usize) -> bool {
    (0..x.shape()[1]).any(|l| x[[i, l, k]])
}

/// A random staffing and a random resource order completed by
/// `tighten_starts`; `None` when the staffing overloads a resource or some
/// demand cannot be met.
pub fn random_completion(inst: &Instance, rng: &mut impl Rng) -> Option<Solution> {
    let n = inst.activity_count();
    let (skills, resources) = (inst.skill_count, inst.resource_count());
    let mut x = Array3::from_elem((n, skills, resources), false);
    let mut counts = vec![0usize; resources];
    for i in inst.executable() {
        let mut busy = vec![false; resources];
        for l in 0..skills {
            for _ in 0..inst.requirement(i, l) {
                let free: Vec<usize> = (0..resources).filter(|&k| !busy[k] && inst.resources[k].masters(l)).collect();
                let &k = free.choose(rng)?;
                busy[k] = true;
                x[[i, l, k]] = true;
                counts[k] += 1;
            }
        }
    }
    for (k, &c) in counts.iter().enumerate() {
        if !QueueOperatingPoint::new(c as f64, inst.resources[k].reliability).is_stable() {
            return None;
        }
    }

    // A random linear extension of the precedence order decides every
    // resource conflict.
    let mut indegree: Vec<usize> = inst.predecessors().iter().map(Vec::len).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut position = vec![0; n];
    let mut t = 0;
    while !ready.is_empty() {
        let v = ready.swap_remove(rng.random_range(0..ready.len()));
        position[v] = t;
        t += 1;
        for &w in &inst.successors[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(w);
            }
        }
    }
    let mut z = Array2::from_elem((n, n), false);
    for i in 0..n {
        for j in 0..n {
            if position[i] < position[j] && (0..resources).any(|k| uses(&x, i, k) && uses(&x, j, k)) {
                z[[i, j]] = true;
            }
        }
    }
    Some(tighten_starts(inst, &x, &z).expect("linear extension is acyclic"))
}

/// Breaks `kind` in a copy of a feasible solution, or `None` when the
/// instance offers no place to break it.
pub fn corrupt(inst: &Instance, sol: &Solution, kind: Constraint, rng: &mut impl Rng) -> Option<Solution> {
    let mut bad = sol.clone();
    let n = inst.activity_count();
    let (skills, resources) = (inst.skill_count, inst.resource_count());
    let assigned: Vec<(usize, usize, usize)> =
        sol.assignment.indexed_iter().filter(|(_, &v)| v).map(|(idx, _)| idx).collect();
    match kind {
        Constraint::SkillCoverage => {
            let &(i, l, k) = assigned.choose(rng)?;
            bad.assignment[[i, l, k]] = false;
        }
        Constraint::SingleSkillPerResource => {
            let &(i, l, k) = assigned.choose(rng)?;
            let others: Vec<usize> = (0..skills).filter(|&m| m != l && !sol.assignment[[i, m, k]]).collect();
            bad.assignment[[i, *others.choose(rng)?, k]] = true;
        }
        Constraint::SequencingAntisymmetry => {
            let i = rng.random_range(0..n);
            let j = (i + rng.random_range(1..n)) % n;
            bad.sequencing[[i, j]] = true;
            bad.sequencing[[j, i]] = true;
        }
        Constraint::ResourceDisjunction => {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| (0..resources).any(|k| uses(&sol.assignment, i, k) && uses(&sol.assignment, j, k)))
                .collect();
            let &(i, j) = pairs.choose(rng)?;
            bad.sequencing[[i, j]] = false;
            bad.sequencing[[j, i]] = false;
        }
        Constraint::ArrivalRate => {
            let k = rng.random_range(0..resources);
            bad.arrival_rates[k] += 1.0;
        }
        Constraint::WaitingTime => {
            let k = rng.random_range(0..resources);
            bad.resource_waits[k] = bad.resource_waits[k] * 1.5 + 0.25;
        }
        Constraint::UsageLink => {
            let &(i, _, k) = assigned.choose(rng)?;
            bad.usage[[i, k]] = false;
        }
        Constraint::WaitBound => {
            let &(i, _, k) = assigned.choose(rng)?;
            bad.activity_waits[i] = sol.resource_waits[k] * 0.5;
        }
        Constraint::FinishToStart => {
            let arcs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| inst.successors[i].iter().map(move |&j| (i, j)))
                .filter(|&(i, _)| inst.duration(i) > 0)
                .collect();
            let &(i, j) = arcs.choose(rng)?;
            let release = sol.starts[i] + f64::from(inst.duration(i)) + sol.activity_waits[i];
            bad.starts[j] = (sol.starts[i] + release) / 2.0;
        }
        Constraint::SkillMastery => {
            let foreign: Vec<(usize, usize)> = (0..skills)
                .flat_map(|l| (0..resources).map(move |k| (l, k)))
                .filter(|&(l, k)| !inst.resources[k].masters(l))
                .collect();
            let &(l, k) = foreign.choose(rng)?;
            let i = *inst.executable().collect::<Vec<_>>().choose(rng)?;
            bad.assignment[[i, l, k]] = true;
        }
        Constraint::Domain => {
            let i = rng.random_range(0..n);
            bad.starts[i] = -1.0 - bad.starts[i];
        }
    }
    Some(bad)
}
