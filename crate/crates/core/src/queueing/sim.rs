//! Discrete-event simulation of the breakdown queue, used to cross-check the
//! closed form.
//!
//! Breakdowns hit the server whether it is busy or idle. A job in service
//! when the server fails keeps its remaining work and resumes after repair.
//! The estimate is a batch-means average of time in system: jobs arriving in
//! the first 10% of the horizon are discarded, the rest are split in arrival
//! order into 30 equal batches.

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{QueueError, QueueOperatingPoint};
use crate::scalar::Scalar;

const BATCHES: usize = 30;
const WARM_UP_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub mean_wait: f64,
    /// Half-width of the 95% confidence interval.
    pub half_width: f64,
    /// Jobs that contributed to the batches.
    pub samples: usize,
}

struct Clock {
    rng: ChaCha8Rng,
}

impl Clock {
    fn draw(&mut self, rate: f64) -> f64 {
        if rate > 0.0 {
            Exp::new(rate).expect("positive rate").sample(&mut self.rng)
        } else {
            f64::INFINITY
        }
    }
}

pub fn simulate_queue<T: Scalar>(
    point: &QueueOperatingPoint<T>,
    horizon: f64,
    seed: u64,
) -> Result<SimEstimate, QueueError> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(QueueError::InvalidHorizon(horizon));
    }
    if !point.is_stable() {
        return Err(super::unstable(point));
    }
    let lambda = point.arrival_rate.to_real();
    let mu = point.params.service_rate.to_real();
    let fail = point.params.disruption_rate.to_real();
    let repair = point.params.retrieval_rate.to_real();
    let warm_up = WARM_UP_FRACTION * horizon;

    let mut clock = Clock { rng: ChaCha8Rng::seed_from_u64(seed) };
    let mut queue: VecDeque<f64> = VecDeque::new();
    let mut up = true;
    let mut now = 0.0;
    // Remaining work of the job at the head of the queue.
    let mut remaining = 0.0;
    let mut next_arrival = clock.draw(lambda);
    let mut next_switch = clock.draw(fail);
    let mut sojourns = Vec::new();

    loop {
        let next_departure = if up && !queue.is_empty() { now + remaining } else { f64::INFINITY };
        let t = next_arrival.min(next_switch).min(next_departure);
        if t > horizon {
            break;
        }
        if up && !queue.is_empty() {
            remaining -= t - now;
        }
        now = t;
        if t == next_departure {
            let arrived = queue.pop_front().expect("busy server has a job");
            if arrived >= warm_up {
                sojourns.push(now - arrived);
            }
            if !queue.is_empty() {
                remaining = clock.draw(mu);
            }
        } else if t == next_arrival {
            queue.push_back(now);
            if queue.len() == 1 {
                remaining = clock.draw(mu);
            }
            next_arrival = now + clock.draw(lambda);
        } else {
            up = !up;
            next_switch = now + clock.draw(if up { fail } else { repair });
        }
    }

    batch_means(&sojourns)
}

fn batch_means(samples: &[f64]) -> Result<SimEstimate, QueueError> {
    let size = samples.len() / BATCHES;
    if size < 2 {
        return Err(QueueError::InsufficientData(samples.len()));
    }
    let means: Vec<f64> = samples.chunks_exact(size).take(BATCHES).map(|c| c.iter().sum::<f64>() / size as f64).collect();
    let k = means.len() as f64;
    let mean = means.iter().sum::<f64>() / k;
    let variance = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (k - 1.0);
    let t = StudentsT::new(0.0, 1.0, k - 1.0).expect("valid degrees of freedom").inverse_cdf(0.975);
    Ok(SimEstimate { mean_wait: mean, half_width: t * (variance / k).sqrt(), samples: size * BATCHES })
}
