use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{local_viability, offload_viability, AnalyticError, Verdict};
use crate::config::{Preset, Tier};
use crate::topology::{build_topology, Device, Link, Topology};
use crate::workload::WorkloadProfile;

/// Where the processing of an endpoint's data happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    Endpoint,
    Edge,
    Cloud,
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Placement::Endpoint => "endpoint",
            Placement::Edge => "edge",
            Placement::Cloud => "cloud",
        })
    }
}

impl FromStr for Placement {
    type Err = AnalyticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "endpoint" => Ok(Placement::Endpoint),
            "edge" => Ok(Placement::Edge),
            "cloud" => Ok(Placement::Cloud),
            _ => Err(AnalyticError::InvalidPolicy),
        }
    }
}

/// Outcome of classification: the preferred viable placement, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlacementClass {
    Endpoint,
    Edge,
    Cloud,
    NotViable,
}

impl PlacementClass {
    pub fn label(self) -> &'static str {
        match self {
            PlacementClass::Endpoint => "endpoint",
            PlacementClass::Edge => "edge",
            PlacementClass::Cloud => "cloud",
            PlacementClass::NotViable => "not-viable",
        }
    }
}

impl From<Placement> for PlacementClass {
    fn from(p: Placement) -> Self {
        match p {
            Placement::Endpoint => PlacementClass::Endpoint,
            Placement::Edge => PlacementClass::Edge,
            Placement::Cloud => PlacementClass::Cloud,
        }
    }
}

impl fmt::Display for PlacementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Preference order over the three placements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Placement>", into = "Vec<Placement>")]
pub struct PlacementPolicy {
    order: [Placement; 3],
}

impl PlacementPolicy {
    pub fn new(order: [Placement; 3]) -> Result<Self, AnalyticError> {
        let mut sorted = order;
        sorted.sort();
        if sorted != [Placement::Endpoint, Placement::Edge, Placement::Cloud] {
            return Err(AnalyticError::InvalidPolicy);
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> [Placement; 3] {
        self.order
    }
}

impl Default for PlacementPolicy {
    /// Closest to the data first: endpoint, then edge, then cloud.
    fn default() -> Self {
        Self { order: [Placement::Endpoint, Placement::Edge, Placement::Cloud] }
    }
}

impl TryFrom<Vec<Placement>> for PlacementPolicy {
    type Error = AnalyticError;

    fn try_from(v: Vec<Placement>) -> Result<Self, Self::Error> {
        let order: [Placement; 3] = v.try_into().map_err(|_| AnalyticError::InvalidPolicy)?;
        Self::new(order)
    }
}

impl From<PlacementPolicy> for Vec<Placement> {
    fn from(p: PlacementPolicy) -> Self {
        p.order.to_vec()
    }
}

impl FromStr for PlacementPolicy {
    type Err = AnalyticError;

    /// Comma-separated, e.g. `edge,cloud,endpoint`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = s.split(',').map(|p| p.trim().parse()).collect::<Result<Vec<Placement>, _>>()?;
        Self::try_from(v)
    }
}

/// A worker that endpoints can offload to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffloadTarget {
    pub worker: Device,
    pub endpoints_per_worker: u32,
    pub link: Link,
}

impl OffloadTarget {
    /// The worker side of a topology, or `None` for local processing.
    pub fn from_topology(t: &Topology) -> Option<Self> {
        Some(Self {
            worker: t.worker_spec()?.clone(),
            endpoints_per_worker: t.endpoints_per_worker,
            link: t.worker_link?,
        })
    }
}

/// The placements available to one endpoint design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementFamily {
    pub endpoint: Device,
    pub edge: Option<OffloadTarget>,
    pub cloud: Option<OffloadTarget>,
}

impl PlacementFamily {
    pub fn new(endpoint: Device) -> Self {
        Self { endpoint, edge: None, cloud: None }
    }

    /// Adds `target` in the slot of its worker tier.
    pub fn with_target(mut self, target: OffloadTarget) -> Result<Self, AnalyticError> {
        match target.worker.tier {
            Tier::Edge => self.edge = Some(target),
            Tier::Cloud => self.cloud = Some(target),
            Tier::Endpoint => return Err(AnalyticError::PeerOffload),
        }
        Ok(self)
    }

    /// Single-core endpoints at half quota, the edge-small workers (two
    /// endpoints each) and the cloud workers (four endpoints each).
    pub fn reference() -> Self {
        let cloud = build_topology(&Preset::Cloud.config()).expect("preset builds");
        let edge = build_topology(&Preset::EdgeSmall.config()).expect("preset builds");
        let endpoint = cloud.source_spec().expect("preset has endpoints").clone();
        Self::new(endpoint)
            .with_target(OffloadTarget::from_topology(&edge).expect("edge offload"))
            .and_then(|f| f.with_target(OffloadTarget::from_topology(&cloud).expect("cloud offload")))
            .expect("reference tiers")
    }

    fn target(&self, p: Placement) -> Option<&OffloadTarget> {
        match p {
            Placement::Endpoint => None,
            Placement::Edge => self.edge.as_ref(),
            Placement::Cloud => self.cloud.as_ref(),
        }
    }
}

/// Verdicts for every placement the family offers, in policy order.
pub fn evaluate_placements(
    workload: &WorkloadProfile,
    family: &PlacementFamily,
    policy: &PlacementPolicy,
) -> Result<Vec<(Placement, Verdict)>, AnalyticError> {
    let mut out = Vec::with_capacity(3);
    for p in policy.order() {
        let verdict = match p {
            Placement::Endpoint => local_viability(workload, &family.endpoint)?,
            _ => match family.target(p) {
                Some(t) => offload_viability(workload, &family.endpoint, &t.worker, t.endpoints_per_worker, &t.link)?,
                None => continue,
            },
        };
        out.push((p, verdict));
    }
    Ok(out)
}

/// The first viable placement in policy order.
pub fn classify(
    workload: &WorkloadProfile,
    family: &PlacementFamily,
    policy: &PlacementPolicy,
) -> Result<PlacementClass, AnalyticError> {
    Ok(evaluate_placements(workload, family, policy)?
        .into_iter()
        .find(|(_, v)| v.viable)
        .map_or(PlacementClass::NotViable, |(p, _)| p.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_family_shape() {
        let f = PlacementFamily::reference();
        assert_eq!(f.endpoint.capacity(), 0.5);
        let edge = f.edge.as_ref().unwrap();
        assert_eq!((edge.worker.capacity(), edge.endpoints_per_worker), (1.5, 2));
        let cloud = f.cloud.as_ref().unwrap();
        assert_eq!((cloud.worker.capacity(), cloud.endpoints_per_worker), (4.0, 4));
    }

    #[test]
    fn worked_example_goes_to_edge() {
        let class = classify(&WorkloadProfile::reference(), &PlacementFamily::reference(), &PlacementPolicy::default());
        assert_eq!(class.unwrap(), PlacementClass::Edge);
    }

    #[test]
    fn zero_rate_stays_on_endpoint() {
        let w = WorkloadProfile::reference().with_rate(0.0);
        let class = classify(&w, &PlacementFamily::reference(), &PlacementPolicy::default()).unwrap();
        assert_eq!(class, PlacementClass::Endpoint);
    }

    #[test]
    fn huge_demand_is_not_viable() {
        let w = WorkloadProfile::reference().with_proc_scale(1000.0);
        let class = classify(&w, &PlacementFamily::reference(), &PlacementPolicy::default()).unwrap();
        assert_eq!(class, PlacementClass::NotViable);
    }

    #[test]
    fn policy_changes_choice_not_viability() {
        let w = WorkloadProfile::reference().with_rate(1.0);
        let fam = PlacementFamily::reference();
        let cloud_first: PlacementPolicy = "cloud,edge,endpoint".parse().unwrap();
        assert_eq!(classify(&w, &fam, &cloud_first).unwrap(), PlacementClass::Cloud);
        assert_eq!(classify(&w, &fam, &PlacementPolicy::default()).unwrap(), PlacementClass::Endpoint);
    }

    #[test]
    fn policy_must_be_a_permutation() {
        assert!(PlacementPolicy::new([Placement::Edge, Placement::Edge, Placement::Cloud]).is_err());
        assert!("edge,cloud".parse::<PlacementPolicy>().is_err());
        assert!("edge,cloud,fog".parse::<PlacementPolicy>().is_err());
        let p: PlacementPolicy = serde_json::from_str(r#"["edge","endpoint","cloud"]"#).unwrap();
        assert_eq!(p.order()[0], Placement::Edge);
    }

    #[test]
    fn missing_slots_are_skipped() {
        let fam = PlacementFamily::new(Device::spec(Tier::Endpoint, 1, 0.5));
        let w = WorkloadProfile::reference();
        assert_eq!(evaluate_placements(&w, &fam, &PlacementPolicy::default()).unwrap().len(), 1);
        assert_eq!(classify(&w, &fam, &PlacementPolicy::default()).unwrap(), PlacementClass::NotViable);
    }

    #[test]
    fn peer_targets_are_rejected() {
        let mist = build_topology(&Preset::Mist.config()).unwrap();
        let target = OffloadTarget::from_topology(&mist).unwrap();
        let fam = PlacementFamily::new(Device::spec(Tier::Endpoint, 1, 0.5));
        assert_eq!(fam.with_target(target), Err(AnalyticError::PeerOffload));
    }
}
