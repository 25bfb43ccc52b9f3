//! Discrete-event simulation of the offloading pipeline.
//!
//! Every data source emits an element every `1/R` seconds starting at 0.
//! An element is preprocessed on one core of its endpoint (FIFO, `T_pre / Q`
//! per element), serialized onto the endpoint's dedicated link (FIFO,
//! `S / B` per element), delayed by a propagation time drawn from a normal
//! distribution truncated at zero, and queued FIFO at its worker. A worker
//! runs `C` elements in parallel, each for `T_proc / Q`. For local
//! processing an element goes straight to its own endpoint's queue.
//!
//! Time is kept in integer nanoseconds so per-element latency components
//! add up exactly. Propagation delay is the only random quantity; it is
//! drawn from a ChaCha stream seeded by [`SimParams::seed`].

mod report;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Tier;
use crate::topology::{DeviceId, Topology};
use crate::workload::{WorkloadError, WorkloadProfile};

pub use report::{
    latency_breakdown, measured_load, ElementCounts, ElementRecord, LatencyBreakdown, LatencyStats, SimReport,
    WorkerStats,
};

const NS_PER_S: f64 = 1e9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error("topology has no workers")]
    NoWorkers,
    #[error("no element completed after the warmup")]
    EmptyWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// Simulated seconds.
    pub duration: f64,
    /// Leading seconds excluded from every metric.
    pub warmup: f64,
    pub seed: u64,
    /// Stop generating after this many elements in total.
    pub max_elements: Option<u64>,
}

impl SimParams {
    /// `duration` seconds with the first 10% as warmup.
    pub fn new(duration: f64, seed: u64) -> Self {
        Self { duration, warmup: duration * 0.1, seed, max_elements: None }
    }

    pub fn check(&self) -> Result<(), SimError> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(SimError::InvalidParams(format!("duration must be > 0, got {}", self.duration)));
        }
        if !(self.warmup >= 0.0 && self.warmup < self.duration) {
            return Err(SimError::InvalidParams(format!(
                "warmup must lie in [0, duration), got {} with duration {}",
                self.warmup, self.duration
            )));
        }
        Ok(())
    }
}

fn to_ns(seconds: f64) -> u64 {
    (seconds * NS_PER_S).round() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EventKind {
    /// The `k`-th element of a source.
    Generate {
        source: usize,
        k: u64,
    },
    PreprocessDone {
        element: usize,
    },
    Arrive {
        element: usize,
    },
    ServiceDone {
        element: usize,
    },
}

#[derive(Debug, Clone, Copy)]
struct Element {
    source: usize,
    worker: usize,
    generated: u64,
    preprocessed: u64,
    propagation: u64,
    arrived: u64,
    started: u64,
}

struct Source {
    device: DeviceId,
    worker: usize,
    preprocess_ns: u64,
    serialize_ns: u64,
    queue: VecDeque<usize>,
    busy: bool,
    link_free_at: u64,
}

struct Worker {
    device: DeviceId,
    servers: u32,
    busy: u32,
    service_ns: u64,
    /// Core-seconds of work one element brings.
    demand_per_element: f64,
    capacity: f64,
    queue: VecDeque<usize>,
    arrivals: u64,
    completions: u64,
    busy_ns: u128,
    backlog_at_warmup: Option<u64>,
    backlog_at_end: Option<u64>,
}

struct Propagation {
    avg_ms: f64,
    normal: Option<Normal<f64>>,
}

impl Propagation {
    fn sample_ns(&self, rng: &mut ChaCha8Rng) -> u64 {
        let ms = match &self.normal {
            None => self.avg_ms,
            Some(n) => loop {
                let x = n.sample(rng);
                if x >= 0.0 {
                    break x;
                }
            },
        };
        (ms * 1e6).round() as u64
    }
}

struct Engine {
    now: u64,
    seq: u64,
    events: BinaryHeap<Reverse<(u64, u64, EventKind)>>,
    elements: Vec<Element>,
    sources: Vec<Source>,
    workers: Vec<Worker>,
    local: bool,
    period_ns: Option<f64>,
    window: (u64, u64),
    cap: Option<u64>,
    cap_reached_at: Option<u64>,
    counts: ElementCounts,
    records: Vec<ElementRecord>,
    propagation: Propagation,
    rng: ChaCha8Rng,
}

/// Runs one simulation. Overload is not an error: queues grow and the
/// backlog is reported.
pub fn simulate(topology: &Topology, workload: &WorkloadProfile, params: &SimParams) -> Result<SimReport, SimError> {
    params.check()?;
    workload.check()?;

    let proc_time = workload.proc_time_for(topology.worker_tier)?;
    let mut workers = Vec::new();
    let mut worker_index = std::collections::BTreeMap::new();
    for w in topology.workers() {
        worker_index.insert(w.id, workers.len());
        workers.push(Worker {
            device: w.id,
            servers: w.cores,
            busy: 0,
            service_ns: to_ns(proc_time / w.quota),
            demand_per_element: proc_time,
            capacity: w.capacity(),
            queue: VecDeque::new(),
            arrivals: 0,
            completions: 0,
            busy_ns: 0,
            backlog_at_warmup: None,
            backlog_at_end: None,
        });
    }
    if workers.is_empty() || workers.iter().any(|w| w.servers == 0) {
        return Err(SimError::NoWorkers);
    }

    let link = topology.worker_link;
    let mut sources = Vec::new();
    for (worker, endpoints) in &topology.assignment {
        for ep in endpoints {
            let device = topology.device(*ep).expect("assigned endpoint exists");
            sources.push(Source {
                device: *ep,
                worker: worker_index[worker],
                preprocess_ns: if device.quota > 0.0 { to_ns(workload.pre_time / device.quota) } else { 0 },
                serialize_ns: link.map_or(0, |l| to_ns(workload.element_size / l.bandwidth_mbps)),
                queue: VecDeque::new(),
                busy: false,
                link_free_at: 0,
            });
        }
    }
    sources.sort_by_key(|s| s.device);

    let propagation = match link {
        Some(l) if l.latency_sd_ms > 0.0 => Propagation {
            avg_ms: l.latency_avg_ms,
            normal: Some(
                Normal::new(l.latency_avg_ms, l.latency_sd_ms).map_err(|e| SimError::InvalidParams(e.to_string()))?,
            ),
        },
        Some(l) => Propagation { avg_ms: l.latency_avg_ms, normal: None },
        None => Propagation { avg_ms: 0.0, normal: None },
    };

    let mut engine = Engine {
        now: 0,
        seq: 0,
        events: BinaryHeap::new(),
        elements: Vec::new(),
        sources,
        workers,
        local: topology.is_local(),
        period_ns: (workload.rate > 0.0).then(|| NS_PER_S / workload.rate),
        window: (to_ns(params.warmup), to_ns(params.duration)),
        cap: params.max_elements,
        cap_reached_at: None,
        counts: ElementCounts::default(),
        records: Vec::new(),
        propagation,
        rng: ChaCha8Rng::seed_from_u64(params.seed),
    };
    Ok(engine.run(params, topology.worker_tier))
}

impl Engine {
    fn schedule(&mut self, time: u64, kind: EventKind) {
        self.events.push(Reverse((time, self.seq, kind)));
        self.seq += 1;
    }

    fn generation_time(&self, k: u64) -> Option<u64> {
        self.period_ns.map(|p| (k as f64 * p).round() as u64)
    }

    fn run(&mut self, params: &SimParams, worker_tier: Tier) -> SimReport {
        let (warmup, end) = self.window;
        if self.period_ns.is_some() {
            for source in 0..self.sources.len() {
                self.schedule(0, EventKind::Generate { source, k: 0 });
            }
        }

        while let Some(Reverse((time, _, kind))) = self.events.pop() {
            if time >= end {
                break;
            }
            if time >= warmup {
                self.snapshot_warmup();
            }
            if time >= self.window_end() {
                self.snapshot_end();
            }
            self.now = time;
            match kind {
                EventKind::Generate { source, k } => self.on_generate(source, k),
                EventKind::PreprocessDone { element } => self.on_preprocessed(element),
                EventKind::Arrive { element } => self.on_arrive(element),
                EventKind::ServiceDone { element } => self.on_service_done(element),
            }
            debug_assert!(self.counts.is_conserved());
        }
        self.snapshot_warmup();
        self.snapshot_end();
        self.report(params, worker_tier)
    }

    fn snapshot_end(&mut self) {
        for w in &mut self.workers {
            if w.backlog_at_end.is_none() {
                w.backlog_at_end = Some(w.queue.len() as u64);
            }
        }
    }

    fn snapshot_warmup(&mut self) {
        for w in &mut self.workers {
            if w.backlog_at_warmup.is_none() {
                w.backlog_at_warmup = Some(w.queue.len() as u64);
            }
        }
    }

    fn window_end(&self) -> u64 {
        self.cap_reached_at.map_or(self.window.1, |t| t.min(self.window.1))
    }

    fn in_window(&self, t: u64) -> bool {
        t >= self.window.0 && t < self.window_end()
    }

    fn on_generate(&mut self, source: usize, k: u64) {
        if self.cap.is_some_and(|cap| self.counts.generated >= cap) {
            return;
        }
        let id = self.elements.len();
        self.elements.push(Element {
            source,
            worker: self.sources[source].worker,
            generated: self.now,
            preprocessed: self.now,
            propagation: 0,
            arrived: self.now,
            started: self.now,
        });
        self.counts.generated += 1;
        if self.cap == Some(self.counts.generated) {
            self.cap_reached_at = Some(self.now);
        }
        if let Some(next) = self.generation_time(k + 1) {
            self.schedule(next, EventKind::Generate { source, k: k + 1 });
        }

        if self.local {
            // processed where it was produced; nothing to preprocess or send
            self.counts.in_transit += 1;
            self.on_arrive(id);
            return;
        }
        self.counts.awaiting_preprocess += 1;
        let src = &mut self.sources[source];
        if src.busy {
            src.queue.push_back(id);
        } else {
            src.busy = true;
            let done = self.now + src.preprocess_ns;
            self.schedule(done, EventKind::PreprocessDone { element: id });
        }
    }

    fn on_preprocessed(&mut self, id: usize) {
        let now = self.now;
        let src_idx = self.elements[id].source;
        let propagation = self.propagation.sample_ns(&mut self.rng);
        let src = &mut self.sources[src_idx];
        let tx_start = now.max(src.link_free_at);
        src.link_free_at = tx_start + src.serialize_ns;
        let arrival = src.link_free_at + propagation;
        let next = src.queue.pop_front();
        let preprocess_ns = src.preprocess_ns;
        match next {
            Some(n) => self.schedule(now + preprocess_ns, EventKind::PreprocessDone { element: n }),
            None => self.sources[src_idx].busy = false,
        }

        let e = &mut self.elements[id];
        e.preprocessed = now;
        e.propagation = propagation;
        self.counts.awaiting_preprocess -= 1;
        self.counts.in_transit += 1;
        self.schedule(arrival, EventKind::Arrive { element: id });
    }

    fn on_arrive(&mut self, id: usize) {
        self.elements[id].arrived = self.now;
        self.counts.in_transit -= 1;
        let w_idx = self.elements[id].worker;
        if self.in_window(self.now) {
            self.workers[w_idx].arrivals += 1;
        }
        let w = &mut self.workers[w_idx];
        if w.busy < w.servers {
            self.start_service(id);
        } else {
            w.queue.push_back(id);
            self.counts.queued += 1;
        }
    }

    fn start_service(&mut self, id: usize) {
        let now = self.now;
        let (lo, hi) = (self.window.0, self.window_end());
        let w_idx = self.elements[id].worker;
        let w = &mut self.workers[w_idx];
        w.busy += 1;
        let done = now + w.service_ns;
        let overlap = done.min(hi).saturating_sub(now.max(lo));
        w.busy_ns += u128::from(overlap);
        self.elements[id].started = now;
        self.counts.in_service += 1;
        self.schedule(done, EventKind::ServiceDone { element: id });
    }

    fn on_service_done(&mut self, id: usize) {
        let now = self.now;
        let e = self.elements[id];
        self.counts.in_service -= 1;
        self.counts.completed += 1;
        if self.in_window(now) {
            self.workers[e.worker].completions += 1;
        }
        if e.generated >= self.window.0 {
            self.records.push(ElementRecord {
                id: id as u64,
                endpoint: self.sources[e.source].device,
                worker: self.workers[e.worker].device,
                generated_ns: e.generated,
                preprocess_ns: e.preprocessed - e.generated,
                transfer_ns: e.arrived - e.preprocessed,
                propagation_ns: e.propagation,
                queue_wait_ns: e.started - e.arrived,
                service_ns: now - e.started,
                completed_ns: now,
            });
        }

        let w = &mut self.workers[e.worker];
        w.busy -= 1;
        if let Some(next) = w.queue.pop_front() {
            self.counts.queued -= 1;
            self.start_service(next);
        }
    }

    fn report(&mut self, params: &SimParams, worker_tier: Tier) -> SimReport {
        let (lo, hi) = (self.window.0, self.window_end());
        let span_s = hi.saturating_sub(lo) as f64 / NS_PER_S;
        let workers: Vec<WorkerStats> = self
            .workers
            .iter()
            .map(|w| {
                let start = w.backlog_at_warmup.unwrap_or(0);
                let end = w.backlog_at_end.unwrap_or(0);
                let per_s = |x: f64| if span_s > 0.0 { x / span_s } else { 0.0 };
                let demand = per_s(w.arrivals as f64 * w.demand_per_element);
                WorkerStats {
                    worker: w.device,
                    measured_load_percent: if w.capacity > 0.0 { demand / w.capacity * 100.0 } else { 0.0 },
                    busy_percent: per_s(w.busy_ns as f64 / NS_PER_S) / f64::from(w.servers) * 100.0,
                    arrivals: w.arrivals,
                    completions: w.completions,
                    backlog_at_warmup: start,
                    backlog_at_end: end,
                    backlog_growth_per_s: per_s(end as f64 - start as f64),
                }
            })
            .collect();
        let completions: u64 = workers.iter().map(|w| w.completions).sum();
        let elements = std::mem::take(&mut self.records);

        let mut report = SimReport {
            params: *params,
            worker_tier,
            window_start_s: lo as f64 / NS_PER_S,
            window_end_s: hi as f64 / NS_PER_S,
            latency: report::latency_stats(&elements),
            breakdown: None,
            workers,
            throughput_per_s: if span_s > 0.0 { completions as f64 / span_s } else { 0.0 },
            counts: self.counts,
            elements,
        };
        report.breakdown = latency_breakdown(&report).ok();
        report
    }
}
