//! Single-server queue whose server breaks down.
//!
//! Jobs arrive as a Poisson stream with rate `λ`, service is exponential with
//! rate `μ`, the server fails at Poisson rate `υ` whether busy or idle, and a
//! repair takes an exponential time with rate `r`. Service is suspended while
//! the server is down. The mean time a job spends in the system is
//!
//! ```text
//!              (r + υ)² + μυ
//! W = ---------------------------------
//!      (r + υ) (rμ − rλ − λυ)
//! ```
//!
//! finite iff `λ < rμ / (r + υ)`. As `υ → 0` it tends to the plain M/M/1
//! sojourn time `1 / (μ − λ)`.

mod sim;

use thiserror::Error;

pub use crate::instance::ReliabilityParams;
use crate::scalar::Scalar;
pub use sim::{simulate_queue, SimEstimate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QueueError {
    #[error("arrival rate {arrival_rate} is not below the critical rate {critical}")]
    Unstable { arrival_rate: f64, critical: f64 },
    #[error("simulation horizon must be positive and finite, got {0}")]
    InvalidHorizon(f64),
    #[error("simulation produced {0} completed jobs after warm-up, too few for batch means")]
    InsufficientData(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueOperatingPoint<T> {
    pub arrival_rate: T,
    pub params: ReliabilityParams<T>,
}

impl<T: Scalar> QueueOperatingPoint<T> {
    pub fn new(arrival_rate: T, params: ReliabilityParams<T>) -> Self {
        Self { arrival_rate, params }
    }

    pub fn is_stable(&self) -> bool {
        stability_margin(self) > T::zero()
    }
}

/// `rμ − rλ − λυ`; positive exactly on the stable region.
fn stability_margin<T: Scalar>(point: &QueueOperatingPoint<T>) -> T {
    let ReliabilityParams { disruption_rate: u, retrieval_rate: r, service_rate: mu } = point.params;
    let lambda = point.arrival_rate;
    r * mu - r * lambda - lambda * u
}

/// The arrival rate at which the queue stops being stable: `rμ / (r + υ)`.
pub fn critical_arrival_rate<T: Scalar>(params: &ReliabilityParams<T>) -> T {
    params.retrieval_rate * params.service_rate / (params.retrieval_rate + params.disruption_rate)
}

/// Mean time in system at a stable operating point.
pub fn waiting_time<T: Scalar>(point: &QueueOperatingPoint<T>) -> Result<T, QueueError> {
    let margin = stability_margin(point);
    if !(margin > T::zero()) {
        return Err(unstable(point));
    }
    let ReliabilityParams { disruption_rate: u, retrieval_rate: r, service_rate: mu } = point.params;
    let down_cycle = r + u;
    Ok((down_cycle * down_cycle + mu * u) / (down_cycle * margin))
}

fn unstable<T: Scalar>(point: &QueueOperatingPoint<T>) -> QueueError {
    QueueError::Unstable {
        arrival_rate: point.arrival_rate.to_real(),
        critical: critical_arrival_rate(&point.params).to_real(),
    }
}

/// Waiting times for integer arrival rates `0, 1, 2, ...` up to `max_rate`,
/// stopping at the first unstable rate.
pub fn wait_table<T: Scalar>(params: &ReliabilityParams<T>, max_rate: usize) -> Vec<T> {
    (0..=max_rate)
        .map_while(|lambda| waiting_time(&QueueOperatingPoint::new(T::from_count(lambda), *params)).ok())
        .collect()
}
