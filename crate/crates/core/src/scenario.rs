//! Scenario files: a TOML document describing channel, nodes, links, SIDs,
//! rightful receivers and an optional sweep. See `docs/scenario-format.md`.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{ChannelModel, Node, Position, Role};
use crate::network::{LegitReceiver, Scenario, SuspiciousLink};
use crate::surveillance::LinkScenario;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub bands: Vec<String>,
    #[serde(default)]
    pub sids: Vec<String>,
    #[serde(default)]
    pub channel: ChannelSection,
    pub nodes: Vec<NodeSection>,
    #[serde(default)]
    pub links: Vec<SuspiciousLink>,
    #[serde(default)]
    pub legit: Vec<LegitReceiver>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub harq: Option<HarqSection>,
    #[serde(default)]
    pub disrupt: Option<DisruptSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub exponent: f64,
    pub reference_loss_db: f64,
    pub reference_distance_m: f64,
    pub min_distance_m: f64,
}

impl Default for ChannelSection {
    fn default() -> Self {
        let m = ChannelModel::default();
        Self {
            exponent: m.pathloss_exponent,
            reference_loss_db: m.reference_loss_db,
            reference_distance_m: m.reference_distance,
            min_distance_m: m.min_distance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSection {
    pub id: String,
    pub role: Role,
    pub x: f64,
    pub y: f64,
    /// Omitted for nodes that never transmit.
    #[serde(default)]
    pub tx_dbm: Option<f64>,
    pub noise_dbm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Eavesdropping,
    Spoofing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Distance of the SID from the link transmitter along the transmitter-to-receiver axis.
    Axis,
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// Index into `links`; defaults to the first link.
    #[serde(default)]
    pub link: usize,
    /// SID that moves; defaults to the first listed SID.
    #[serde(default)]
    pub sid: Option<String>,
}

impl SweepSpec {
    /// Grid points `start + k * step` up to and including `stop`.
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.stop >= self.start) {
            return Err(Error::field("sweep.stop", "range must be finite with stop >= start"));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::field("sweep.step", "must be finite and > 0"));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        if n > 10_000_000 {
            return Err(Error::field("sweep.step", "sweep has too many points"));
        }
        Ok((0..=n).map(|k| self.start + k as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarqSection {
    #[serde(default = "default_rounds")]
    pub max_rounds: u32,
    #[serde(default = "default_packets")]
    pub packets: u32,
    /// Spoof only while the instantaneous Alice-Bob SNR is below this, dB.
    /// Defaults to the mean Alice-Bob SNR.
    #[serde(default)]
    pub threshold_db: Option<f64>,
}

fn default_rounds() -> u32 {
    4
}

fn default_packets() -> u32 {
    10_000
}

impl Default for HarqSection {
    fn default() -> Self {
        Self {
            max_rounds: default_rounds(),
            packets: default_packets(),
            threshold_db: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisruptSection {
    pub qos_bpshz: f64,
}

/// A parsed and validated scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub model: ChannelModel,
    pub scenario: Scenario,
    pub sweep: Option<SweepSpec>,
    pub seed: Option<u64>,
    pub harq: HarqSection,
    pub qos_bpshz: Option<f64>,
}

impl LoadedScenario {
    /// The link/SID pair a sweep or simulation runs on.
    pub fn link_scenario(&self, link: usize, sid: &str) -> Result<LinkScenario> {
        let l = self
            .scenario
            .suspicious_links
            .get(link)
            .ok_or_else(|| Error::field("sweep.link", format!("no link with index {link}")))?;
        Ok(LinkScenario {
            alice: self.scenario.node(&l.tx)?.clone(),
            bob: self.scenario.node(&l.rx)?.clone(),
            sid: self.scenario.node(sid)?.clone(),
            model: self.model,
        })
    }

    pub fn sorted_sids(&self) -> Vec<String> {
        let mut s = self.scenario.sids.clone();
        s.sort();
        s
    }
}

pub fn parse_scenario(text: &str, context: &str) -> Result<LoadedScenario> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse {
        context: context.to_string(),
        message: e.to_string().trim_end().to_string(),
    })?;
    file.into_loaded()
}

pub fn load_scenario(path: &Path) -> Result<LoadedScenario> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text, &path.display().to_string())
}

impl ScenarioFile {
    pub fn into_loaded(self) -> Result<LoadedScenario> {
        let c = self.channel;
        let model = ChannelModel::new(
            c.exponent,
            c.reference_loss_db,
            c.reference_distance_m,
            c.min_distance_m,
        )?;
        let nodes = self
            .nodes
            .into_iter()
            .map(|n| {
                if !n.x.is_finite() || !n.y.is_finite() {
                    return Err(Error::field(format!("nodes.{}.x/y", n.id), "must be finite"));
                }
                let node = Node {
                    position: Position { x: n.x, y: n.y },
                    role: n.role,
                    tx_power_dbm: n.tx_dbm.unwrap_or(f64::NEG_INFINITY),
                    noise_power_dbm: n.noise_dbm,
                    id: n.id,
                };
                if node.role.transmits() && !node.tx_power_dbm.is_finite() {
                    return Err(Error::field(
                        format!("nodes.{}.tx_dbm", node.id),
                        "transmitting role needs a finite power",
                    ));
                }
                node.validate()?;
                Ok(node)
            })
            .collect::<Result<Vec<_>>>()?;
        let scenario = Scenario {
            nodes,
            suspicious_links: self.links,
            sids: self.sids,
            legit_receivers: self.legit,
            bands: self.bands,
        };
        scenario.validate()?;
        if let Some(s) = &self.sweep {
            s.points()?;
            if scenario.suspicious_links.get(s.link).is_none() {
                return Err(Error::field("sweep.link", format!("no link with index {}", s.link)));
            }
            match &s.sid {
                Some(id) if !scenario.sids.contains(id) => {
                    return Err(Error::DanglingReference {
                        field: "sweep.sid".into(),
                        id: id.clone(),
                    })
                }
                None if scenario.sids.is_empty() => return Err(Error::field("sweep.sid", "scenario lists no SIDs")),
                _ => {}
            }
        }
        let harq = self.harq.unwrap_or_default();
        if harq.max_rounds == 0 || harq.packets == 0 {
            return Err(Error::field("harq", "max_rounds and packets must be >= 1"));
        }
        if harq.threshold_db.is_some_and(|t| t.is_nan()) {
            return Err(Error::field("harq.threshold_db", "must not be NaN"));
        }
        let qos_bpshz = self.disrupt.map(|d| d.qos_bpshz);
        if qos_bpshz.is_some_and(|q| !(q.is_finite() && q >= 0.0)) {
            return Err(Error::field("disrupt.qos_bpshz", "must be finite and >= 0"));
        }
        Ok(LoadedScenario {
            model,
            scenario,
            sweep: self.sweep,
            seed: self.seed,
            harq,
            qos_bpshz,
        })
    }
}
