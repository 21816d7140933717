//! CSV artifacts and the sensitivity sweep behind them.
//!
//! Every table is comma separated with a header row and LF line endings.
//! Numbers are printed with Rust's shortest round-trip formatting, so equal
//! inputs always give byte-identical files. Wall-clock columns stay empty
//! unless timings are requested.

use std::fmt::Write as _;

use crate::instance::{ProjectInstance, RateParameter, ReliabilityParams};
use crate::pareto::{enumerate_front, FrontOptions, ParetoError, ParetoFront};
use crate::queueing::{simulate_queue, waiting_time, QueueOperatingPoint, SimEstimate};
use crate::scalar::Scalar;
use crate::schedule::ObjectiveValues;
use crate::vikor::VikorRanking;

fn real<T: Scalar>(x: T) -> f64 {
    x.to_real()
}

/// `grid_point,makespan,cost,slack,solve_status,wall_time`, one row per
/// front point in makespan order.
pub fn front_csv<T: Scalar>(front: &ParetoFront<T>, timings: bool) -> String {
    let mut out = String::from("grid_point,makespan,cost,slack,solve_status,wall_time\n");
    for point in &front.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            point.grid_index.map(|p| p.to_string()).unwrap_or_default(),
            real(point.makespan()),
            real(point.cost()),
            point.slack.map(|s| real(s).to_string()).unwrap_or_default(),
            point.status.as_str(),
            if timings { point.wall_time.to_string() } else { String::new() },
        );
    }
    out
}

/// `rank,makespan,cost,S,R,Q,in_compromise_set`, best rank first.
pub fn ranking_csv<T: Scalar>(points: &[ObjectiveValues<T>], ranking: &VikorRanking<T>, compromise: &[usize]) -> String {
    let mut out = String::from("rank,makespan,cost,S,R,Q,in_compromise_set\n");
    for (pos, &j) in ranking.order.iter().enumerate() {
        let score = ranking.scores[j];
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            pos + 1,
            real(points[j].makespan),
            real(points[j].cost),
            real(score.s),
            real(score.r),
            real(score.q),
            compromise.contains(&j),
        );
    }
    out
}

/// One analytic-versus-simulated comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationRow {
    pub arrival_rate: f64,
    pub params: ReliabilityParams<f64>,
    /// `None` at or beyond the critical arrival rate.
    pub analytic: Option<f64>,
    pub simulated: Option<SimEstimate>,
}

impl SimulationRow {
    /// Relative gap between simulation and formula, when both exist.
    pub fn relative_gap(&self) -> Option<f64> {
        match (self.analytic, self.simulated) {
            (Some(a), Some(s)) => Some((s.mean_wait - a).abs() / a),
            _ => None,
        }
    }
}

pub fn simulation_row(arrival_rate: f64, params: ReliabilityParams<f64>, horizon: f64, seed: u64) -> SimulationRow {
    let point = QueueOperatingPoint::new(arrival_rate, params);
    SimulationRow {
        arrival_rate,
        params,
        analytic: waiting_time(&point).ok(),
        simulated: simulate_queue(&point, horizon, seed).ok(),
    }
}

/// `lambda,mu,upsilon,r,analytic_W,sim_W,ci_half_width`. Unstable points
/// leave the last three cells empty.
pub fn simulation_csv(rows: &[SimulationRow]) -> String {
    let mut out = String::from("lambda,mu,upsilon,r,analytic_W,sim_W,ci_half_width\n");
    for row in rows {
        let p = row.params;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.arrival_rate,
            p.service_rate,
            p.disruption_rate,
            p.retrieval_rate,
            row.analytic.map(|w| w.to_string()).unwrap_or_default(),
            row.simulated.map(|s| s.mean_wait.to_string()).unwrap_or_default(),
            row.simulated.map(|s| s.half_width.to_string()).unwrap_or_default(),
        );
    }
    out
}

/// Front of the instance with one rate scaled.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub multiplier: f64,
    pub front: ParetoFront<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport<T> {
    pub parameter: RateParameter,
    pub base: ParetoFront<T>,
    pub scenarios: Vec<Scenario<T>>,
}

impl<T: Scalar> SensitivityReport<T> {
    /// Relative change of the best attainable makespan per scenario, `None`
    /// when either front is empty.
    pub fn makespan_pis_changes(&self) -> Vec<Option<f64>> {
        let base = self.base.payoff.map(|p| real(p.makespan_pis()));
        self.scenarios
            .iter()
            .map(|s| match (base, s.front.payoff) {
                (Some(b), Some(p)) => Some(percent_change(b, real(p.makespan_pis()))),
                _ => None,
            })
            .collect()
    }
}

pub fn parameter_name(parameter: RateParameter) -> &'static str {
    match parameter {
        RateParameter::Retrieval => "retrieval",
        RateParameter::Disruption => "disruption",
        RateParameter::Service => "service",
    }
}

/// `(scaled - base) / base` in percent, exactly 0 when the two agree.
pub fn percent_change(base: f64, scaled: f64) -> f64 {
    if base == scaled {
        0.0
    } else {
        (scaled - base) / base * 100.0
    }
}

/// Enumerates the base front and one front per multiplier of `parameter`.
/// Scenarios run in parallel on the rayon pool.
pub fn sensitivity<T: Scalar>(
    instance: &ProjectInstance<T>,
    parameter: RateParameter,
    multipliers: &[f64],
    options: &FrontOptions,
) -> Result<SensitivityReport<T>, ParetoError> {
    use rayon::prelude::*;
    let base = enumerate_front(instance, options)?;
    let scenarios = multipliers
        .par_iter()
        .map(|&multiplier| {
            let scaled = instance.with_scaled_rate(parameter, T::from_real(multiplier));
            enumerate_front(&scaled, options).map(|front| Scenario { multiplier, front })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SensitivityReport { parameter, base, scenarios })
}

/// Side-by-side comparison per scenario: front points are paired by their
/// position in makespan order, then a `PIS` row compares the lexicographic
/// makespan optima. Columns:
/// `parameter,multiplier,grid_point,base_makespan,base_cost,scaled_makespan,scaled_cost,makespan_change_pct,cost_change_pct,status`.
pub fn sweep_csv<T: Scalar>(report: &SensitivityReport<T>) -> String {
    let mut out = String::from(
        "parameter,multiplier,grid_point,base_makespan,base_cost,scaled_makespan,scaled_cost,makespan_change_pct,cost_change_pct,status\n",
    );
    let name = parameter_name(report.parameter);
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for scenario in &report.scenarios {
        let front = &scenario.front;
        let status = if front.points.is_empty() {
            "infeasible"
        } else if front.is_partial() || report.base.is_partial() {
            "partial"
        } else {
            "ok"
        };
        let rows = report.base.points.len().max(front.points.len());
        let mut emit = |label: String, base: Option<ObjectiveValues<T>>, scaled: Option<ObjectiveValues<T>>| {
            let pair = |f: fn(&ObjectiveValues<T>) -> T| match (base, scaled) {
                (Some(b), Some(s)) => Some(percent_change(real(f(&b)), real(f(&s)))),
                _ => None,
            };
            let _ = writeln!(
                out,
                "{name},{},{label},{},{},{},{},{},{},{status}",
                scenario.multiplier,
                cell(base.map(|b| real(b.makespan))),
                cell(base.map(|b| real(b.cost))),
                cell(scaled.map(|s| real(s.makespan))),
                cell(scaled.map(|s| real(s.cost))),
                cell(pair(|v| v.makespan)),
                cell(pair(|v| v.cost)),
            );
        };
        for k in 0..rows {
            emit(
                (k + 1).to_string(),
                report.base.points.get(k).map(|p| p.objectives),
                front.points.get(k).map(|p| p.objectives),
            );
        }
        emit("PIS".into(), report.base.payoff.map(|p| p.makespan_first), front.payoff.map(|p| p.makespan_first));
    }
    out
}
