//! Multi-SID, multi-link surveillance and intervention planning.

mod assignment;
mod centrality;

pub use assignment::{
    evaluate_plan, optimize_assignment, optimize_with, AssignMode, AssignmentPlan, Decision, LinkEval, Objective,
    PlanEval, SearchMethod, EXHAUSTIVE_LIMIT,
};
pub use centrality::{betweenness, criticality_rank};

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{cap, pathloss_gain, ChannelModel, Node, Role};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuspiciousLink {
    pub tx: String,
    pub rx: String,
    pub band: String,
    /// Priority of the link in the plan objective.
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

impl SuspiciousLink {
    pub fn new(tx: impl Into<String>, rx: impl Into<String>, band: impl Into<String>) -> Self {
        Self {
            tx: tx.into(),
            rx: rx.into(),
            band: band.into(),
            weight: 1.0,
        }
    }
}

/// A rightful receiver whose co-channel interference from SIDs is capped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegitReceiver {
    pub node: String,
    pub band: String,
    pub max_interference_w: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub nodes: Vec<Node>,
    pub suspicious_links: Vec<SuspiciousLink>,
    pub sids: Vec<String>,
    pub legit_receivers: Vec<LegitReceiver>,
    pub bands: Vec<String>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for n in &self.nodes {
            n.validate()?;
            if !ids.insert(n.id.as_str()) {
                return Err(Error::field(format!("nodes.{}", n.id), "duplicate node id"));
            }
        }
        let bands: BTreeSet<&str> = self.bands.iter().map(String::as_str).collect();
        if bands.len() != self.bands.len() {
            return Err(Error::field("bands", "duplicate band id"));
        }
        let band_ok = |field: String, b: &str| {
            if bands.contains(b) {
                Ok(())
            } else {
                Err(Error::DanglingReference {
                    field,
                    id: b.to_string(),
                })
            }
        };
        for (i, l) in self.suspicious_links.iter().enumerate() {
            for id in [&l.tx, &l.rx] {
                self.node(id).map_err(|_| Error::DanglingReference {
                    field: format!("links[{i}]"),
                    id: id.clone(),
                })?;
            }
            if l.tx == l.rx {
                return Err(Error::field(format!("links[{i}]"), "link connects a node to itself"));
            }
            if !(l.weight.is_finite() && l.weight >= 0.0) {
                return Err(Error::field(format!("links[{i}].weight"), "must be finite and >= 0"));
            }
            band_ok(format!("links[{i}].band"), &l.band)?;
        }
        let mut seen = BTreeSet::new();
        for id in &self.sids {
            let node = self.node(id).map_err(|_| Error::DanglingReference {
                field: "sids".into(),
                id: id.clone(),
            })?;
            if node.role != Role::Sid {
                return Err(Error::field(format!("sids.{id}"), "node role is not sid"));
            }
            if !seen.insert(id) {
                return Err(Error::field(format!("sids.{id}"), "listed twice"));
            }
        }
        for (i, r) in self.legit_receivers.iter().enumerate() {
            self.node(&r.node).map_err(|_| Error::DanglingReference {
                field: format!("legit[{i}]"),
                id: r.node.clone(),
            })?;
            band_ok(format!("legit[{i}].band"), &r.band)?;
            if r.max_interference_w.is_nan() || r.max_interference_w < 0.0 {
                return Err(Error::field(format!("legit[{i}].max_interference_w"), "negative power"));
            }
        }
        Ok(())
    }

    pub fn node(&self, id: &str) -> Result<&Node> {
        self.nodes
            .iter()
            .find(|n| n.id == id)
            .ok_or_else(|| Error::DanglingReference {
                field: "node".into(),
                id: id.to_string(),
            })
    }

    pub(crate) fn index(&self) -> HashMap<&str, usize> {
        self.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect()
    }
}

fn sid_nodes<'a>(sids: &[&str], scenario: &'a Scenario) -> Result<Vec<&'a Node>> {
    if sids.is_empty() {
        return Err(Error::invalid("empty SID set"));
    }
    sids.iter().map(|id| scenario.node(id)).collect()
}

/// Joint-detection eavesdropping rate of `sids` on transmitter `tx`: capacity of the summed SNRs.
pub fn joint_detection_rate(sids: &[&str], tx: &str, scenario: &Scenario, model: &ChannelModel) -> Result<f64> {
    let tx = scenario.node(tx)?;
    let mut total = 0.0;
    for sid in sid_nodes(sids, scenario)? {
        total += tx.tx_power_w() * pathloss_gain(model, tx.distance_to(sid))? / sid.noise_power_w();
    }
    Ok(cap(total))
}

/// Jamming power the SIDs deliver at `rx`, with or without joint precoding.
///
/// Incoherent noise adds in power; precoded transmissions add in amplitude.
pub fn joint_jamming_power(
    sids: &[&str],
    rx: &str,
    scenario: &Scenario,
    model: &ChannelModel,
    coherent: bool,
) -> Result<f64> {
    let rx = scenario.node(rx)?;
    let mut powers = Vec::with_capacity(sids.len());
    for sid in sid_nodes(sids, scenario)? {
        powers.push(sid.tx_power_w() * pathloss_gain(model, sid.distance_to(rx))?);
    }
    Ok(combine_jamming(&powers, coherent))
}

pub(crate) fn combine_jamming(received_w: &[f64], coherent: bool) -> f64 {
    if coherent {
        let amp: f64 = received_w.iter().map(|p| p.sqrt()).sum();
        amp * amp
    } else {
        received_w.iter().sum()
    }
}
