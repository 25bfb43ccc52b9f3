use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{SimError, SimParams};
use crate::config::Tier;
use crate::topology::DeviceId;

const NS_PER_MS: f64 = 1e6;

/// Timeline of one completed element. All durations are nanoseconds and
/// `preprocess + transfer + queue_wait + service == completed - generated`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub id: u64,
    pub endpoint: DeviceId,
    pub worker: DeviceId,
    pub generated_ns: u64,
    /// Waiting for and running preprocessing on the endpoint core.
    pub preprocess_ns: u64,
    /// Waiting for the link, serialization and propagation.
    pub transfer_ns: u64,
    /// The propagation part of `transfer_ns`.
    pub propagation_ns: u64,
    pub queue_wait_ns: u64,
    pub service_ns: u64,
    pub completed_ns: u64,
}

impl ElementRecord {
    pub fn end_to_end_ns(&self) -> u64 {
        self.completed_ns - self.generated_ns
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub count: usize,
    pub mean_ms: f64,
    /// Population standard deviation.
    pub sd_ms: f64,
}

/// Mean end-to-end latency split into where the time went, in ms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyBreakdown {
    pub communication_ms: f64,
    pub compute_ms: f64,
    pub queueing_ms: f64,
    pub total_ms: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkerStats {
    pub worker: DeviceId,
    /// Service demand arriving per second over capacity, in percent.
    pub measured_load_percent: f64,
    /// Fraction of server time spent busy over the window, in percent.
    pub busy_percent: f64,
    pub arrivals: u64,
    pub completions: u64,
    pub backlog_at_warmup: u64,
    /// Queued elements when the measurement window closes.
    pub backlog_at_end: u64,
    /// Change in queued elements per second over the window.
    pub backlog_growth_per_s: f64,
}

/// Where every generated element is when the run stops.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementCounts {
    pub generated: u64,
    pub awaiting_preprocess: u64,
    pub in_transit: u64,
    pub queued: u64,
    pub in_service: u64,
    pub completed: u64,
}

impl ElementCounts {
    pub fn accounted(&self) -> u64 {
        self.awaiting_preprocess + self.in_transit + self.queued + self.in_service + self.completed
    }

    pub fn is_conserved(&self) -> bool {
        self.generated == self.accounted()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub params: SimParams,
    pub worker_tier: Tier,
    pub window_start_s: f64,
    pub window_end_s: f64,
    pub latency: Option<LatencyStats>,
    pub breakdown: Option<LatencyBreakdown>,
    pub workers: Vec<WorkerStats>,
    /// Completions per second over the window, all workers together.
    pub throughput_per_s: f64,
    pub counts: ElementCounts,
    /// Completed elements generated after the warmup, in completion order.
    pub elements: Vec<ElementRecord>,
}

/// Mean latency components over the post-warmup elements.
pub fn latency_breakdown(report: &SimReport) -> Result<LatencyBreakdown, SimError> {
    let n = report.elements.len();
    if n == 0 {
        return Err(SimError::EmptyWindow);
    }
    let (mut comm, mut compute, mut queue, mut total) = (0u128, 0u128, 0u128, 0u128);
    for e in &report.elements {
        comm += u128::from(e.transfer_ns);
        compute += u128::from(e.preprocess_ns) + u128::from(e.service_ns);
        queue += u128::from(e.queue_wait_ns);
        total += u128::from(e.end_to_end_ns());
    }
    let mean = |sum: u128| sum as f64 / n as f64 / NS_PER_MS;
    Ok(LatencyBreakdown {
        communication_ms: mean(comm),
        compute_ms: mean(compute),
        queueing_ms: mean(queue),
        total_ms: mean(total),
        samples: n,
    })
}

pub(crate) fn latency_stats(elements: &[ElementRecord]) -> Option<LatencyStats> {
    if elements.is_empty() {
        return None;
    }
    let n = elements.len() as f64;
    let mean = elements.iter().map(|e| e.end_to_end_ns() as f64).sum::<f64>() / n;
    let var = elements.iter().map(|e| (e.end_to_end_ns() as f64 - mean).powi(2)).sum::<f64>() / n;
    Some(LatencyStats { count: elements.len(), mean_ms: mean / NS_PER_MS, sd_ms: var.sqrt() / NS_PER_MS })
}

/// Measured load of every worker, in worker id order.
pub fn measured_load(report: &SimReport) -> Vec<f64> {
    report.workers.iter().map(|w| w.measured_load_percent).collect()
}

impl SimReport {
    /// JSON document of the aggregates; the per-element trace is included
    /// only when `trace` is set.
    pub fn to_json(&self, trace: bool) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !trace {
            v.as_object_mut().expect("object").remove("elements");
        }
        v
    }

    /// One row per post-warmup element.
    pub fn elements_csv(&self) -> String {
        let mut out = String::from(
            "id,endpoint,worker,generated_ns,preprocess_ns,transfer_ns,propagation_ns,queue_wait_ns,service_ns,completed_ns,end_to_end_ns\n",
        );
        for e in &self.elements {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                e.id,
                e.endpoint.0,
                e.worker.0,
                e.generated_ns,
                e.preprocess_ns,
                e.transfer_ns,
                e.propagation_ns,
                e.queue_wait_ns,
                e.service_ns,
                e.completed_ns,
                e.end_to_end_ns()
            );
        }
        out
    }

    pub fn mean_measured_load(&self) -> f64 {
        if self.workers.is_empty() {
            return 0.0;
        }
        self.workers.iter().map(|w| w.measured_load_percent).sum::<f64>() / self.workers.len() as f64
    }
}
