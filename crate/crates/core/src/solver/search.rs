use std::time::Instant;

use ndarray::{Array2, Array3};

use super::candidates::{candidates, Candidate};
use super::{Limits, Objective, SolveResult, SolveStatus, SubproblemSpec};
use crate::instance::ProjectInstance;
use crate::queueing::wait_table;
use crate::scalar::Scalar;
use crate::schedule::{evaluate, tighten_starts, ObjectiveValues, ScheduleSolution};

pub(super) fn bits(mut set: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (set != 0).then(|| {
            let b = set.trailing_zeros() as usize;
            set &= set - 1;
            b
        })
    })
}

fn bit(i: usize) -> u128 {
    1u128 << i
}

struct Incumbent<T> {
    key: T,
    values: ObjectiveValues<T>,
    solution: ScheduleSolution<T>,
}

/// Everything fixed once the assignment is complete.
struct Staffed<T> {
    assignment: Array3<bool>,
    cost: T,
    /// `d_i + T_i`, the weight of every arc leaving `i`.
    weight: Vec<T>,
    masks: Vec<u128>,
    users: Vec<Vec<usize>>,
    /// Pairs sharing a resource with no precedence path between them.
    conflicts: Vec<(usize, usize)>,
}

struct Search<'a, T> {
    instance: &'a ProjectInstance<T>,
    primary: Objective,
    budget: Option<T>,
    secondary_weight: T,
    sink: usize,
    duration: Vec<T>,
    order: Vec<usize>,
    branch: Vec<usize>,
    cands: Vec<Vec<Candidate<T>>>,
    cheapest_rest: Vec<T>,
    /// `waits[k][λ]` for every stable integer λ.
    waits: Vec<Vec<T>>,
    anc: Vec<u128>,
    desc: Vec<u128>,
    counts: Vec<usize>,
    choice: Vec<usize>,
    assigned: Vec<bool>,
    cost: T,
    best: Option<Incumbent<T>>,
    nodes: u64,
    started: Instant,
    limits: Limits,
    stopped: bool,
}

pub(super) fn run<T: Scalar>(
    instance: &ProjectInstance<T>,
    spec: &SubproblemSpec<T>,
    limits: &Limits,
) -> SolveResult<T> {
    let started = Instant::now();
    let n = instance.activity_count();
    let order = instance.topological_order().expect("validated instance is acyclic");
    let cands: Vec<Vec<Candidate<T>>> = (0..n).map(|i| candidates(instance, i)).collect();
    let mut search = Search {
        instance,
        primary: spec.primary,
        budget: spec.budget,
        secondary_weight: spec.secondary_weight(),
        sink: instance.sink(),
        duration: (0..n).map(|i| T::from_count(instance.duration(i) as usize)).collect(),
        branch: order.iter().copied().filter(|&i| !(cands[i].len() == 1 && cands[i][0].pairs.is_empty())).collect(),
        order,
        cheapest_rest: Vec::new(),
        waits: instance.resources.iter().map(|r| wait_table(&r.reliability, n)).collect(),
        anc: vec![0; n],
        desc: vec![0; n],
        counts: vec![0; instance.resource_count()],
        choice: vec![0; n],
        assigned: vec![true; n],
        cost: T::zero(),
        best: None,
        nodes: 0,
        started,
        limits: *limits,
        stopped: false,
        cands,
    };
    let staffable = search.cands.iter().all(|c| !c.is_empty());
    if staffable {
        search.prepare();
        search.assign(0);
    }
    search.finish()
}

impl<T: Scalar> Search<'_, T> {
    fn prepare(&mut self) {
        let closure = self.instance.precedence_closure();
        for ((i, j), &reach) in closure.indexed_iter() {
            if reach {
                self.desc[i] |= bit(j);
                self.anc[j] |= bit(i);
            }
        }
        for &i in &self.branch {
            self.assigned[i] = false;
        }
        let mut rest = vec![T::zero(); self.branch.len() + 1];
        for (t, &i) in self.branch.iter().enumerate().rev() {
            rest[t] = rest[t + 1] + self.cands[i][0].cost;
        }
        self.cheapest_rest = rest;
    }

    fn finish(self) -> SolveResult<T> {
        let status = match (&self.best, self.stopped) {
            (_, true) => SolveStatus::Timeout,
            (Some(_), false) => SolveStatus::Optimal,
            (None, false) => SolveStatus::Infeasible,
        };
        let wall_time = self.started.elapsed().as_secs_f64();
        let (solution, objectives, slack) = match self.best {
            Some(best) => {
                let secondary = self.primary.other().of(&best.values);
                let slack = self.budget.map(|e| (e - secondary).max_of(T::zero()));
                (Some(best.solution), Some(best.values), slack)
            }
            None => (None, None, None),
        };
        SolveResult { status, solution, objectives, slack, nodes_explored: self.nodes, wall_time }
    }

    /// Counts a node; true once a limit has been reached.
    fn tick(&mut self) -> bool {
        if self.stopped {
            return true;
        }
        self.nodes += 1;
        if self.limits.nodes.is_some_and(|max| self.nodes > max) {
            self.stopped = true;
        }
        if self.nodes % 256 == 0 && self.limits.time.is_some_and(|t| self.started.elapsed() >= t) {
            self.stopped = true;
        }
        self.stopped
    }

    fn key(&self, makespan: T, cost: T) -> T {
        match self.primary {
            Objective::Makespan => makespan + self.secondary_weight * cost,
            Objective::Cost => cost + self.secondary_weight * makespan,
        }
    }

    fn within_budget(&self, makespan: T, cost: T) -> bool {
        let secondary = match self.primary {
            Objective::Makespan => cost,
            Objective::Cost => makespan,
        };
        self.budget.is_none_or(|e| T::approx_le(secondary, e))
    }

    /// Whether a node with these objective lower bounds may still beat the
    /// incumbent. Equal keys are pruned so the first optimum found is kept.
    fn promising(&self, makespan_lb: T, cost_lb: T) -> bool {
        self.within_budget(makespan_lb, cost_lb)
            && self.best.as_ref().is_none_or(|best| self.key(makespan_lb, cost_lb) < best.key)
    }

    /// Cost bounds only grow along the (cost-sorted) candidate list, so a
    /// candidate failing this test rules out all later ones as well.
    fn cost_exhausted(&self, cost_lb: T) -> bool {
        match self.primary {
            Objective::Makespan => self.budget.is_some_and(|e| !T::approx_le(cost_lb, e)),
            Objective::Cost => self.best.as_ref().is_some_and(|best| cost_lb >= best.key),
        }
    }

    fn stable_with(&self, candidate: &Candidate<T>) -> bool {
        candidate.pairs.iter().all(|&(k, _)| self.counts[k] + 1 < self.waits[k].len())
    }

    fn apply(&mut self, activity: usize, index: usize, add: bool) {
        let cand = &self.cands[activity][index];
        for &(k, _) in &cand.pairs {
            if add {
                self.counts[k] += 1;
            } else {
                self.counts[k] -= 1;
            }
        }
        if add {
            self.cost = self.cost + cand.cost;
        } else {
            self.cost = self.cost - cand.cost;
        }
        self.choice[activity] = index;
        self.assigned[activity] = add;
    }

    fn assign(&mut self, depth: usize) {
        if self.tick() {
            return;
        }
        if depth == self.branch.len() {
            self.sequence_root();
            return;
        }
        let i = self.branch[depth];
        for c in 0..self.cands[i].len() {
            let cost_lb = self.cost + self.cands[i][c].cost + self.cheapest_rest[depth + 1];
            if self.cost_exhausted(cost_lb) {
                break;
            }
            if !self.stable_with(&self.cands[i][c]) {
                continue;
            }
            self.apply(i, c, true);
            if let Some(makespan_lb) = self.partial_makespan_bound() {
                if self.promising(makespan_lb, cost_lb) {
                    self.assign(depth + 1);
                }
            }
            self.apply(i, c, false);
            if self.stopped {
                return;
            }
        }
    }

    fn worst_wait(&self, cand: &Candidate<T>, extra: usize) -> T {
        cand.pairs.iter().fold(T::zero(), |t, &(k, _)| t.max_of(self.waits[k][self.counts[k] + extra]))
    }

    /// Makespan bound for a partial assignment. Counts only grow further
    /// down, and waits grow with counts, so current waits are optimistic;
    /// an unassigned activity adds one to each resource it will use. `None`
    /// when some unassigned activity has no stable staffing left.
    fn partial_makespan_bound(&self) -> Option<T> {
        let n = self.order.len();
        let mut weight = vec![T::zero(); n];
        for v in 0..n {
            let wait = if self.assigned[v] {
                self.worst_wait(&self.cands[v][self.choice[v]], 0)
            } else {
                self.cands[v]
                    .iter()
                    .filter(|c| self.stable_with(c))
                    .map(|c| self.worst_wait(c, 1))
                    .reduce(T::min_of)?
            };
            weight[v] = self.duration[v] + wait;
        }
        let (head, tail) = longest_paths(&self.order, self.sink, &weight, &self.anc, &self.desc);
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); self.counts.len()];
        for v in 0..n {
            if self.assigned[v] {
                for &(k, _) in &self.cands[v][self.choice[v]].pairs {
                    users[k].push(v);
                }
            }
        }
        Some(head[self.sink].max_of(chain_bound(&users, &head, &tail, &weight)))
    }

    fn sequence_root(&mut self) {
        let n = self.order.len();
        let mut assignment = Array3::from_elem((n, self.instance.skill_count, self.counts.len()), false);
        let mut masks = vec![0u128; n];
        let mut weight = self.duration.clone();
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); self.counts.len()];
        for v in 0..n {
            let cand = &self.cands[v][self.choice[v]];
            for &(k, l) in &cand.pairs {
                assignment[[v, l, k]] = true;
                users[k].push(v);
            }
            masks[v] = cand.resources;
            weight[v] = weight[v] + self.worst_wait(cand, 0);
        }
        let cost = crate::schedule::assignment_cost(self.instance, &assignment);
        let mut conflicts = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let related = self.desc[i] & bit(j) != 0 || self.desc[j] & bit(i) != 0;
                if masks[i] & masks[j] != 0 && !related {
                    conflicts.push((i, j));
                }
            }
        }
        let staffed = Staffed { assignment, cost, weight, masks, users, conflicts };
        let (anc, desc) = (self.anc.clone(), self.desc.clone());
        self.disjunct(&staffed, anc, desc);
    }

    fn disjunct(&mut self, staffed: &Staffed<T>, anc: Vec<u128>, desc: Vec<u128>) {
        if self.tick() {
            return;
        }
        let order = order_by_ancestors(&anc);
        let (head, tail) = longest_paths(&order, self.sink, &staffed.weight, &anc, &desc);
        let w = &staffed.weight;
        let mut next = None;
        let mut bound = head[self.sink].max_of(chain_bound(&staffed.users, &head, &tail, w));
        for &(i, j) in &staffed.conflicts {
            if desc[i] & bit(j) != 0 || desc[j] & bit(i) != 0 {
                continue;
            }
            let forward = head[i] + w[i] + tail[j];
            let backward = head[j] + w[j] + tail[i];
            bound = bound.max_of(forward.min_of(backward));
            // Earliest unresolved pair, cheaper orientation first.
            next.get_or_insert(if backward < forward { (j, i) } else { (i, j) });
        }
        if !self.promising(bound, staffed.cost) {
            return;
        }
        let Some((a, b)) = next else {
            self.leaf(staffed, &desc);
            return;
        };
        let branches = [(a, b), (b, a)];
        for (a, b) in branches {
            let (mut anc2, mut desc2) = (anc.clone(), desc.clone());
            orient(&mut anc2, &mut desc2, a, b);
            self.disjunct(staffed, anc2, desc2);
            if self.stopped {
                return;
            }
        }
    }

    fn leaf(&mut self, staffed: &Staffed<T>, desc: &[u128]) {
        let n = self.order.len();
        let mut sequencing = Array2::from_elem((n, n), false);
        for i in 0..n {
            for j in 0..n {
                if i != j && staffed.masks[i] & staffed.masks[j] != 0 && desc[i] & bit(j) != 0 {
                    sequencing[[i, j]] = true;
                }
            }
        }
        let solution = tighten_starts(self.instance, &staffed.assignment, &sequencing)
            .expect("stable counts and acyclic orientation give a schedule");
        let values = evaluate(self.instance, &solution);
        if !self.within_budget(values.makespan, values.cost) {
            return;
        }
        let key = self.key(values.makespan, values.cost);
        if self.best.as_ref().is_none_or(|best| key < best.key) {
            self.best = Some(Incumbent { key, values, solution });
        }
    }
}

/// Adds the arc `a -> b` to a transitively closed relation.
fn orient(anc: &mut [u128], desc: &mut [u128], a: usize, b: usize) {
    let before = anc[a] | bit(a);
    let after = desc[b] | bit(b);
    for v in bits(after) {
        anc[v] |= before;
    }
    for u in bits(before) {
        desc[u] |= after;
    }
}

/// A node has strictly more ancestors than any of its ancestors, so sorting
/// by ancestor count is a topological order of a closed relation.
fn order_by_ancestors(anc: &[u128]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..anc.len()).collect();
    order.sort_by_key(|&v| (anc[v].count_ones(), v));
    order
}

/// Heads (earliest starts) and tails (distance from a start to the sink's
/// start) over a transitively closed relation. Closure arcs never lengthen
/// a path because arc weights are non-negative.
fn longest_paths<T: Scalar>(order: &[usize], sink: usize, weight: &[T], anc: &[u128], desc: &[u128]) -> (Vec<T>, Vec<T>) {
    let n = order.len();
    let mut head = vec![T::zero(); n];
    for &v in order {
        head[v] = bits(anc[v]).fold(T::zero(), |h, u| h.max_of(head[u] + weight[u]));
    }
    let mut tail = vec![T::zero(); n];
    for &u in order.iter().rev() {
        if u != sink {
            tail[u] = weight[u] + bits(desc[u]).fold(T::zero(), |t, v| t.max_of(tail[v]));
        }
    }
    (head, tail)
}

/// Activities sharing a resource end up totally ordered. For any subset of
/// them the sink starts no earlier than the subset's first head, plus all
/// its weights, plus its shortest remaining tail. Subsets tried: users with
/// head at least some threshold, and users with remaining tail at least
/// some threshold.
fn chain_bound<T: Scalar>(users: &[Vec<usize>], head: &[T], tail: &[T], weight: &[T]) -> T {
    let mut bound = T::zero();
    let mut items: Vec<(T, T, T)> = Vec::new();
    for group in users.iter().filter(|g| g.len() > 1) {
        items.clear();
        items.extend(group.iter().map(|&v| (head[v], weight[v], tail[v] - weight[v])));

        items.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite heads"));
        let (mut total, mut rest) = (T::zero(), items[0].2);
        for &(h, w, q) in &items {
            total = total + w;
            rest = rest.min_of(q);
            bound = bound.max_of(h + total + rest);
        }

        items.sort_by(|a, b| b.2.partial_cmp(&a.2).expect("finite tails"));
        let (mut total, mut first) = (T::zero(), items[0].0);
        for &(h, w, q) in &items {
            total = total + w;
            first = first.min_of(h);
            bound = bound.max_of(first + total + q);
        }
    }
    bound
}
