//! VIKOR compromise ranking of Pareto points.
//!
//! All criteria are minimised. With `f*` the best and `f-` the worst value of
//! criterion `i` over the alternatives, alternative `j` scores
//!
//! ```text
//! S_j = sum_i w_i (f_ij - f*_i) / (f-_i - f*_i)
//! R_j = max_i w_i (f_ij - f*_i) / (f-_i - f*_i)
//! Q_j = v (S_j - S*) / (S- - S*) + (1 - v) (R_j - R*) / (R- - R*)
//! ```
//!
//! A criterion (or S, or R) with zero range contributes 0 everywhere.

use std::cmp::Ordering;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::schedule::ObjectiveValues;

pub const DEFAULT_WEIGHTS: (f64, f64) = (0.5, 0.5);
pub const DEFAULT_V: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VikorError {
    #[error("nothing to rank")]
    Empty,
    #[error("{alternatives} alternatives do not all have {criteria} criteria")]
    Shape { alternatives: usize, criteria: usize },
    #[error("weights must be non-negative and sum to 1, got {0}")]
    Weights(String),
    #[error("strategy weight v must lie in [0, 1], got {0}")]
    Strategy(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VikorScore<T> {
    /// Group utility.
    pub s: T,
    /// Individual regret.
    pub r: T,
    /// Compromise index.
    pub q: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VikorRanking<T> {
    pub weights: Vec<T>,
    pub v: T,
    /// Scores in input order.
    pub scores: Vec<VikorScore<T>>,
    /// Input indices from best to worst Q; ties go to lower R, lower S, then
    /// the criteria in order, then the input index.
    pub order: Vec<usize>,
    pub warnings: Vec<String>,
}

impl<T: Scalar> VikorRanking<T> {
    /// One-based rank of every alternative, in input order.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.order.len()];
        for (pos, &j) in self.order.iter().enumerate() {
            ranks[j] = pos + 1;
        }
        ranks
    }
}

fn range_share<T: Scalar>(value: T, best: T, worst: T) -> Option<T> {
    let span = worst - best;
    (span > T::tolerance(worst.abs_val().max_of(best.abs_val()))).then(|| (value - best) / span)
}

/// Ranks alternatives given as rows of criterion values.
pub fn rank_matrix<T: Scalar>(rows: &[Vec<T>], weights: &[T], v: T) -> Result<VikorRanking<T>, VikorError> {
    let m = rows.len();
    let n = weights.len();
    if m == 0 {
        return Err(VikorError::Empty);
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(VikorError::Shape { alternatives: m, criteria: n });
    }
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    if weights.iter().any(|&w| !(w >= T::zero())) || !T::approx_eq(total, T::one()) {
        return Err(VikorError::Weights(weights.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")));
    }
    if !(v >= T::zero() && v <= T::one()) {
        return Err(VikorError::Strategy(v.to_string()));
    }

    let mut warnings = Vec::new();
    let mut s = vec![T::zero(); m];
    let mut r = vec![T::zero(); m];
    for i in 0..n {
        let column = rows.iter().map(|row| row[i]);
        let best = column.clone().reduce(T::min_of).expect("m > 0");
        let worst = column.reduce(T::max_of).expect("m > 0");
        if range_share(worst, best, worst).is_none() {
            if m > 1 {
                warnings.push(format!("criterion {} has no spread; it does not affect the ranking", i + 1));
            }
            continue;
        }
        for j in 0..m {
            let term = weights[i] * range_share(rows[j][i], best, worst).expect("non-degenerate");
            s[j] = s[j] + term;
            r[j] = r[j].max_of(term);
        }
    }

    let spread = |xs: &[T], name: &str, warnings: &mut Vec<String>| {
        let best = xs.iter().copied().reduce(T::min_of).expect("m > 0");
        let worst = xs.iter().copied().reduce(T::max_of).expect("m > 0");
        let shares: Option<Vec<T>> = xs.iter().map(|&x| range_share(x, best, worst)).collect();
        if shares.is_none() && m > 1 {
            warnings.push(format!("{name} has no spread; its part of Q is zero"));
        }
        shares.unwrap_or_else(|| vec![T::zero(); m])
    };
    let s_part = spread(&s, "group utility S", &mut warnings);
    let r_part = spread(&r, "individual regret R", &mut warnings);
    let scores: Vec<VikorScore<T>> = (0..m)
        .map(|j| VikorScore { s: s[j], r: r[j], q: v * s_part[j] + (T::one() - v) * r_part[j] })
        .collect();

    let cmp = |a: T, b: T| a.partial_cmp(&b).unwrap_or(Ordering::Equal);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&scores[a], &scores[b]);
        cmp(x.q, y.q)
            .then(cmp(x.r, y.r))
            .then(cmp(x.s, y.s))
            .then_with(|| rows[a].iter().zip(&rows[b]).map(|(&p, &q)| cmp(p, q)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal))
            .then(a.cmp(&b))
    });
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(VikorRanking { weights: weights.to_vec(), v, scores, order, warnings })
}

/// Ranks `(makespan, cost)` points with weights `(w_makespan, w_cost)`.
pub fn rank<T: Scalar>(points: &[ObjectiveValues<T>], weights: (T, T), v: T) -> Result<VikorRanking<T>, VikorError> {
    let rows: Vec<Vec<T>> = points.iter().map(|p| vec![p.makespan, p.cost]).collect();
    rank_matrix(&rows, &[weights.0, weights.1], v)
}

/// The compromise set, in rank order.
///
/// With `a'` and `a''` the first two by Q and `DQ = 1 / (m - 1)`:
/// acceptable advantage holds when `Q(a'') - Q(a') >= DQ`, acceptable
/// stability when `a'` is also best by S or by R. Both hold: `{a'}`. Only
/// stability fails: `{a', a''}`. Advantage fails: every alternative whose Q
/// is within `DQ` of `Q(a')`.
pub fn select_compromise<T: Scalar>(ranking: &VikorRanking<T>) -> Vec<usize> {
    let order = &ranking.order;
    let m = order.len();
    if m <= 1 {
        return order.clone();
    }
    let scores = &ranking.scores;
    let dq = T::one() / T::from_count(m - 1);
    let first = scores[order[0]];
    let gap = |j: usize| scores[j].q - first.q;
    let advantage = !(gap(order[1]) < dq) || T::approx_eq(gap(order[1]), dq);
    let best_s = scores.iter().map(|x| x.s).reduce(T::min_of).expect("m > 1");
    let best_r = scores.iter().map(|x| x.r).reduce(T::min_of).expect("m > 1");
    let stable = T::approx_eq(first.s, best_s) || T::approx_eq(first.r, best_r);
    match (advantage, stable) {
        (true, true) => vec![order[0]],
        (true, false) => vec![order[0], order[1]],
        (false, _) => order.iter().copied().take_while(|&j| gap(j) < dq && !T::approx_eq(gap(j), dq)).collect(),
    }
}
