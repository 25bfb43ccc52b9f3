//! Strategies and invariant checks shared by the property suite and the
//! acceptance harness.
#![allow(dead_code)]

use continuum_planner::analytic::{evaluate_placements, Placement, PlacementPolicy};
use continuum_planner::config::{BenchmarkConfig, LatencySpec, TierPair, TierTriple};
use continuum_planner::sim::ElementRecord;
use continuum_planner::{
    build_topology, classify, heatmap, local_viability, offload_viability, parse_config, render_config, simulate,
    system_load, validate, DeploymentConfig, Device, HeatmapSpec, Link, PlacementClass, PlacementFamily, SimParams,
    SystemLoad, Tier, Topology, WorkloadProfile,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type CaseResult = Result<(), TestCaseError>;

// ---------------------------------------------------------------- analytic

#[derive(Debug, Clone)]
pub struct OffloadCase {
    pub workload: WorkloadProfile,
    pub endpoint: Device,
    pub worker: Device,
    pub endpoints: u32,
    pub link: Link,
}

pub fn workload() -> impl Strategy<Value = WorkloadProfile> {
    (0.0..0.5f64, 0.0..0.5f64, 0.0..0.5f64, 0.0..0.05f64, 0.0..20.0f64, 0.0..3.0f64).prop_map(
        |(tc, te, tn, pre, rate, size)| {
            WorkloadProfile::new([(Tier::Cloud, tc), (Tier::Edge, te), (Tier::Endpoint, tn)], pre, rate, size)
        },
    )
}

pub fn device(tier: Tier) -> impl Strategy<Value = Device> {
    (1u32..=8, 0.05..=1.0f64).prop_map(move |(c, q)| Device::spec(tier, c, q))
}

pub fn link(worker_tier: Tier) -> impl Strategy<Value = Link> {
    (0.0..50.0f64, 0.0..10.0f64, 0.5..40.0f64)
        .prop_map(move |(avg, sd, bw)| Link::new(TierPair::new(worker_tier, Tier::Endpoint), avg, sd, bw))
}

pub fn offload_case() -> impl Strategy<Value = OffloadCase> {
    prop_oneof![Just(Tier::Edge), Just(Tier::Cloud), Just(Tier::Endpoint)].prop_flat_map(|tier| {
        (workload(), device(Tier::Endpoint), device(tier), 1u32..=8, link(tier)).prop_map(
            |(workload, endpoint, worker, endpoints, link)| OffloadCase { workload, endpoint, worker, endpoints, link },
        )
    })
}

/// The parameter a monotonicity case perturbs.
#[derive(Debug, Clone, Copy)]
pub enum Knob {
    Rate,
    ProcTime,
    PreTime,
    Endpoints,
    Size,
    Cores,
    Quota,
    Bandwidth,
}

impl Knob {
    pub fn is_demand(self) -> bool {
        matches!(self, Knob::Rate | Knob::ProcTime | Knob::PreTime | Knob::Endpoints | Knob::Size)
    }
}

pub fn knob() -> impl Strategy<Value = Knob> {
    proptest::sample::select(vec![
        Knob::Rate,
        Knob::ProcTime,
        Knob::PreTime,
        Knob::Endpoints,
        Knob::Size,
        Knob::Cores,
        Knob::Quota,
        Knob::Bandwidth,
    ])
}

/// `case` with `knob` raised by `step` (a factor above 1, or an integer
/// increment for counts). Cores and quota raise both the worker and the
/// endpoint; the quota is capped at 1.
pub fn raise(case: &OffloadCase, knob: Knob, step: f64) -> OffloadCase {
    let mut c = case.clone();
    let add = step.ceil() as u32;
    match knob {
        Knob::Rate => c.workload.rate *= step,
        Knob::ProcTime => c.workload = c.workload.with_proc_scale(step),
        Knob::PreTime => c.workload.pre_time *= step,
        Knob::Endpoints => c.endpoints += add,
        Knob::Size => c.workload.element_size *= step,
        Knob::Cores => {
            c.worker.cores += add;
            c.endpoint.cores += add;
        }
        Knob::Quota => {
            c.worker.quota = (c.worker.quota * step).min(1.0);
            c.endpoint.quota = (c.endpoint.quota * step).min(1.0);
        }
        Knob::Bandwidth => c.link.bandwidth_mbps *= step,
    }
    c
}

fn verdicts(c: &OffloadCase) -> (bool, bool) {
    let local = local_viability(&c.workload, &c.endpoint).unwrap().viable;
    let off = offload_viability(&c.workload, &c.endpoint, &c.worker, c.endpoints, &c.link).unwrap().viable;
    (local, off)
}

/// More demand never turns a non-viable verdict viable, and more capacity
/// never turns a viable one non-viable.
pub fn check_monotone(case: &OffloadCase, knob: Knob, step: f64) -> CaseResult {
    let (l0, o0) = verdicts(case);
    let (l1, o1) = verdicts(&raise(case, knob, step));
    if knob.is_demand() {
        prop_assert!(!(l1 && !l0), "local became viable after raising {knob:?}");
        prop_assert!(!(o1 && !o0), "offload became viable after raising {knob:?}");
    } else {
        prop_assert!(!(l0 && !l1), "local became non-viable after raising {knob:?}");
        prop_assert!(!(o0 && !o1), "offload became non-viable after raising {knob:?}");
    }
    Ok(())
}

/// The verdict agrees with the three inequalities written out directly.
pub fn check_offload_consistency(c: &OffloadCase) -> CaseResult {
    let w = &c.workload;
    let t = w.proc_time[&c.worker.tier];
    let worker_ok = t * w.rate * f64::from(c.endpoints) <= f64::from(c.worker.cores) * c.worker.quota;
    let pre_ok = w.pre_time * w.rate <= f64::from(c.endpoint.cores) * c.endpoint.quota;
    let bw_ok = w.rate * w.element_size <= c.link.bandwidth_mbps;
    let v = offload_viability(w, &c.endpoint, &c.worker, c.endpoints, &c.link).unwrap();
    prop_assert_eq!(v.viable, worker_ok && pre_ok && bw_ok);
    prop_assert_eq!(v.viable, v.failed_conditions.is_empty());
    prop_assert_eq!(v.checks.len(), 3);
    prop_assert!(v.load_percent.value() >= 0.0);
    let local = local_viability(w, &c.endpoint).unwrap();
    let tl = w.proc_time[&Tier::Endpoint];
    prop_assert_eq!(local.viable, tl * w.rate <= f64::from(c.endpoint.cores) * c.endpoint.quota);
    Ok(())
}

pub fn check_load_linear(demand: f64, capacity: f64, k: f64) -> CaseResult {
    let (SystemLoad::Percent(a), SystemLoad::Percent(b)) =
        (system_load(k * demand, capacity), system_load(demand, capacity))
    else {
        return Err(TestCaseError::fail("positive capacity gave an unbounded load"));
    };
    prop_assert!((a - k * b).abs() <= 1e-9 * a.abs().max(1.0), "{a} vs {k} * {b}");
    Ok(())
}

pub const PERMUTATIONS: [[Placement; 3]; 6] = [
    [Placement::Endpoint, Placement::Edge, Placement::Cloud],
    [Placement::Endpoint, Placement::Cloud, Placement::Edge],
    [Placement::Edge, Placement::Endpoint, Placement::Cloud],
    [Placement::Edge, Placement::Cloud, Placement::Endpoint],
    [Placement::Cloud, Placement::Endpoint, Placement::Edge],
    [Placement::Cloud, Placement::Edge, Placement::Endpoint],
];

/// Reordering the policy changes which viable placement wins, never which
/// placements are viable.
pub fn check_policy_permutation(w: &WorkloadProfile, family: &PlacementFamily) -> CaseResult {
    let viable_set = |order: [Placement; 3]| {
        let policy = PlacementPolicy::new(order).unwrap();
        let mut set: Vec<Placement> = evaluate_placements(w, family, &policy)
            .unwrap()
            .into_iter()
            .filter(|(_, v)| v.viable)
            .map(|(p, _)| p)
            .collect();
        set.sort();
        set
    };
    let base = viable_set(PERMUTATIONS[0]);
    for order in PERMUTATIONS {
        prop_assert_eq!(&viable_set(order), &base);
        let class = classify(w, family, &PlacementPolicy::new(order).unwrap()).unwrap();
        let expected = order.iter().find(|p| base.contains(p)).map_or(PlacementClass::NotViable, |p| (*p).into());
        prop_assert_eq!(class, expected);
    }
    Ok(())
}

/// Along every row, once not-viable appears it stays for larger rates.
pub fn check_heatmap_rows(w: &WorkloadProfile, rate_max: f64, t_max: f64) -> CaseResult {
    let spec =
        HeatmapSpec { rate_max, proc_time_max: t_max, rate_steps: 12, proc_time_steps: 6, ..HeatmapSpec::default() };
    let grid = heatmap(&spec, w, &PlacementFamily::reference(), &PlacementPolicy::default(), &[]).unwrap();
    for row in &grid.cells {
        if let Some(first) = row.iter().position(|c| *c == PlacementClass::NotViable) {
            prop_assert!(row[first..].iter().all(|c| *c == PlacementClass::NotViable), "{row:?}");
        }
    }
    Ok(())
}

// ------------------------------------------------------------------ config

fn name() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,11}"
}

/// Random configurations that satisfy every validation rule.
pub fn valid_config() -> impl Strategy<Value = DeploymentConfig> {
    let shape = (0u8..3, 1u32..=5, 1u32..=4, 0u32..=2).prop_map(|(kind, workers, per, spare)| match kind {
        0 => (Tier::Cloud, TierTriple::new(workers + spare.min(1), 0, workers * per)),
        1 => (Tier::Edge, TierTriple::new(spare, workers, workers * per)),
        _ => (Tier::Endpoint, TierTriple::new(0, 0, 2 * workers)),
    });
    let cores = (1u32..=16, 1u32..=16, 1u32..=16);
    let quotas = (0.01..=1.0f64, 0.01..=1.0f64, 0.01..=1.0f64);
    let extra_links = proptest::collection::btree_map(
        prop_oneof![
            Just(TierPair::new(Tier::Cloud, Tier::Cloud)),
            Just(TierPair::new(Tier::Cloud, Tier::Edge)),
            Just(TierPair::new(Tier::Edge, Tier::Edge)),
        ],
        (0.0..100.0f64, 0.0..20.0f64, 0.1..10000.0f64),
        0..3,
    );
    let extras = (
        proptest::option::of(name()),
        proptest::option::of(any::<bool>()),
        proptest::option::of(proptest::collection::vec("[0-9]{1,3}(\\.[0-9]{1,3}){3}", 1..4)),
    );
    let bench = (any::<bool>(), 0.0..50.0f64, name(), name());
    let main_link = (0.0..100.0f64, 0.0..20.0f64, 0.1..1000.0f64);
    (shape, cores, quotas, extra_links, extras, bench, main_link).prop_map(
        |(
            (worker_tier, devices),
            (cc, ce, cn),
            (qc, qe, qn),
            links,
            (hypervisor, pinning, addresses),
            b,
            (avg, sd, bw),
        )| {
            let zero_if_empty = |n: u32, v: u32| if n == 0 { 0 } else { v };
            let zero_q = |n: u32, v: f64| if n == 0 { 0.0 } else { v };
            let mut config = DeploymentConfig {
                hypervisor,
                thread_pinning: pinning,
                devices_per_tier: devices,
                cores_per_device: TierTriple::new(
                    zero_if_empty(devices.cloud, cc),
                    zero_if_empty(devices.edge, ce),
                    zero_if_empty(devices.endpoint, cn),
                ),
                quota_per_cpu: TierTriple::new(
                    zero_q(devices.cloud, qc),
                    zero_q(devices.edge, qe),
                    zero_q(devices.endpoint, qn),
                ),
                latency: Default::default(),
                throughput: Default::default(),
                machine_address: addresses,
                benchmark: BenchmarkConfig {
                    use_benchmark: b.0,
                    data_generation_frequency: b.1,
                    application: b.2,
                    resource_manager: b.3,
                },
            };
            for (pair, (a, s, t)) in links {
                config.latency.insert(pair, LatencySpec { avg_ms: a, sd_ms: s });
                config.throughput.insert(pair, t);
            }
            let main = TierPair::new(worker_tier, Tier::Endpoint);
            config.latency.insert(main, LatencySpec { avg_ms: avg, sd_ms: sd });
            config.throughput.insert(main, bw);
            config
        },
    )
}

pub fn check_roundtrip(config: &DeploymentConfig) -> CaseResult {
    let errors: Vec<_> = validate(config).into_iter().filter(|d| d.is_error()).collect();
    prop_assert!(errors.is_empty(), "generator produced an invalid config: {errors:?}");
    let text = render_config(config);
    let parsed = parse_config(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(&parsed.config, config, "{}", text);
    prop_assert!(build_topology(config).is_ok());
    Ok(())
}

// --------------------------------------------------------------- simulator

/// One edge worker serving `endpoints` endpoints.
pub fn single_worker(endpoints: u32, cores: u32, quota: f64, latency: (f64, f64), bandwidth: f64) -> Topology {
    let mut config = continuum_planner::Preset::EdgeSmall.config();
    config.devices_per_tier = TierTriple::new(1, 1, endpoints);
    config.cores_per_device.edge = cores;
    config.quota_per_cpu.edge = quota;
    let pair = TierPair::new(Tier::Edge, Tier::Endpoint);
    config.latency.insert(pair, LatencySpec { avg_ms: latency.0, sd_ms: latency.1 });
    config.throughput.insert(pair, bandwidth);
    build_topology(&config).expect("single worker topology")
}

#[derive(Debug, Clone)]
pub struct SimCase {
    pub topology: Topology,
    pub workload: WorkloadProfile,
    pub params: SimParams,
}

/// Small randomized runs of a few hundred elements, stable or not.
pub fn sim_case() -> impl Strategy<Value = SimCase> {
    (
        1u32..=4,
        1u32..=4,
        0.1..=1.0f64,
        (0.0..40.0f64, 0.0..10.0f64),
        1.0..20.0f64,
        workload(),
        1.0..10.0f64,
        any::<u64>(),
        any::<bool>(),
    )
        .prop_map(|(e, c, q, lat, bw, mut w, rate, seed, local)| {
            w.rate = rate;
            let topology = if local { Topology::local(e, c, q) } else { single_worker(e, c, q, lat, bw) };
            let duration = 200.0 / (rate * f64::from(e));
            SimCase { topology, workload: w, params: SimParams::new(duration, seed) }
        })
}

pub fn check_determinism(c: &SimCase) -> CaseResult {
    let a = simulate(&c.topology, &c.workload, &c.params).unwrap();
    let b = simulate(&c.topology, &c.workload, &c.params).unwrap();
    prop_assert_eq!(a, b);
    Ok(())
}

fn identity_holds(e: &ElementRecord) -> bool {
    e.preprocess_ns + e.transfer_ns + e.queue_wait_ns + e.service_ns == e.end_to_end_ns()
}

pub fn check_latency_identity(c: &SimCase) -> CaseResult {
    let r = simulate(&c.topology, &c.workload, &c.params).unwrap();
    for e in &r.elements {
        prop_assert!(identity_holds(e), "{e:?}");
        prop_assert!(e.propagation_ns <= e.transfer_ns);
    }
    if let Some(b) = r.breakdown {
        let sum = b.communication_ms + b.compute_ms + b.queueing_ms;
        prop_assert!((sum - b.total_ms).abs() < 1e-9, "{sum} vs {}", b.total_ms);
    }
    Ok(())
}

pub fn check_conservation(c: &SimCase) -> CaseResult {
    let r = simulate(&c.topology, &c.workload, &c.params).unwrap();
    prop_assert!(r.counts.is_conserved(), "{:?}", r.counts);
    Ok(())
}
