//! Small DAG helpers over adjacency lists indexed `0..n`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Kahn's algorithm, always releasing the lowest ready index first so the
/// order is a pure function of the graph. `None` when the graph has a cycle.
pub fn topological_order(successors: &[Vec<usize>]) -> Option<Vec<usize>> {
    let order = kahn_peel(successors);
    (order.len() == successors.len()).then_some(order)
}

/// The nodes Kahn's algorithm manages to peel; shorter than `n` exactly when
/// the graph has a cycle.
pub fn kahn_peel(successors: &[Vec<usize>]) -> Vec<usize> {
    let n = successors.len();
    let mut indegree = vec![0usize; n];
    for succ in successors {
        for &j in succ {
            indegree[j] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &j in &successors[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.push(Reverse(j));
            }
        }
    }
    order
}

/// Nodes reachable from `start` (excluding `start` unless it lies on a cycle).
pub fn reachable_from(successors: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; successors.len()];
    let mut stack: Vec<usize> = successors[start].clone();
    while let Some(i) = stack.pop() {
        if !seen[i] {
            seen[i] = true;
            stack.extend(successors[i].iter().copied());
        }
    }
    seen
}

pub fn predecessors(successors: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut preds = vec![Vec::new(); successors.len()];
    for (i, succ) in successors.iter().enumerate() {
        for &j in succ {
            preds[j].push(i);
        }
    }
    preds
}
