//! SID-to-link association with mode selection under interference caps.
//!
//! Every SID either idles or picks one suspicious link and one operating mode;
//! its band is the band of that link. A plan is scored by evaluating all links
//! jointly:
//!
//! - SIDs assigned to the same link combine their eavesdropping SNRs (joint detection).
//! - Relay and jam SIDs on a link use the single-link power control computed
//!   against that link; their noise components add coherently at its receiver
//!   (joint precoding).
//! - Any SID transmission on band `b` is interference at every other receiver on
//!   `b`: suspicious receivers, other SIDs' eavesdropping antennas and rightful
//!   receivers. A SID cancels only its own transmission.
//! - A spoofing SID that decodes the source and reaches a symbol-level spoofing
//!   SINR of at least 0 dB takes the link over; its suspicious rate counts as zero.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{combine_jamming, Scenario};
use crate::error::{Error, Result};
use crate::intervention::SpoofLink;
use crate::model::{cap, pathloss_gain, ChannelModel};
use crate::surveillance::{eavesdropping_rate, LinkState, SidControl, Sign};

/// Largest number of joint plans searched exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    MaxTotalEavRate,
    MinTotalMaliciousRate,
}

impl Objective {
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Objective::MaxTotalEavRate => a > b,
            Objective::MinTotalMaliciousRate => a < b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AssignMode {
    Eavesdrop,
    Jam,
    Relay,
    Spoof,
    Idle,
}

const ACTIVE_MODES: [AssignMode; 4] = [
    AssignMode::Eavesdrop,
    AssignMode::Jam,
    AssignMode::Relay,
    AssignMode::Spoof,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    /// Index into `Scenario::suspicious_links`; `None` when idle.
    pub link: Option<usize>,
    pub mode: AssignMode,
    pub band: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMethod {
    Exhaustive,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkEval {
    pub r0: f64,
    pub r1: f64,
    pub r_eav: f64,
    pub spoofed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanEval {
    pub links: Vec<LinkEval>,
    pub legit_interference_w: Vec<f64>,
    pub slacks_w: Vec<f64>,
    pub objective: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentPlan {
    pub decisions: BTreeMap<String, Decision>,
    pub objective: Objective,
    pub objective_value: f64,
    /// `(legit receiver node id, cap minus received SID interference)` in watts.
    pub constraint_slacks: Vec<(String, f64)>,
    pub links: Vec<LinkEval>,
    pub feasible: bool,
    pub method: SearchMethod,
}

#[derive(Debug, Clone, Copy)]
struct Opt {
    link: usize,
    mode: AssignMode,
}

struct Planner<'a> {
    scenario: &'a Scenario,
    objective: Objective,
    /// node-to-node pathloss gains
    gain: Vec<Vec<f64>>,
    sid_nodes: Vec<usize>,
    sid_ids: Vec<String>,
    link_nodes: Vec<(usize, usize)>,
    legit_nodes: Vec<usize>,
    /// option 0 is idle; option k >= 1 maps to `opts[k - 1]`
    opts: Vec<Opt>,
    /// per SID, per option: control used for jam/relay
    controls: Vec<Vec<SidControl>>,
}

impl<'a> Planner<'a> {
    fn new(scenario: &'a Scenario, objective: Objective, model: &ChannelModel) -> Result<Self> {
        scenario.validate()?;
        let idx = scenario.index();
        let nodes = &scenario.nodes;
        let gain = nodes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                nodes
                    .iter()
                    .enumerate()
                    .map(|(j, b)| {
                        if i == j {
                            Ok(0.0)
                        } else {
                            pathloss_gain(model, a.distance_to(b))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sid_ids = scenario.sids.clone();
        sid_ids.sort();
        let sid_nodes: Vec<usize> = sid_ids.iter().map(|s| idx[s.as_str()]).collect();
        let link_nodes: Vec<(usize, usize)> = scenario
            .suspicious_links
            .iter()
            .map(|l| (idx[l.tx.as_str()], idx[l.rx.as_str()]))
            .collect();
        for (l, &(tx, rx)) in link_nodes.iter().enumerate() {
            if sid_nodes.contains(&tx) || sid_nodes.contains(&rx) {
                return Err(Error::field(
                    format!("links[{l}]"),
                    "a SID cannot be a suspicious link endpoint",
                ));
            }
        }
        let legit_nodes = scenario.legit_receivers.iter().map(|r| idx[r.node.as_str()]).collect();
        let opts: Vec<Opt> = (0..link_nodes.len())
            .flat_map(|link| ACTIVE_MODES.iter().map(move |&mode| Opt { link, mode }))
            .collect();

        let controls = sid_nodes
            .par_iter()
            .map(|&s| {
                let mut row = vec![SidControl::ZERO];
                for o in &opts {
                    let (tx, rx) = link_nodes[o.link];
                    let state = LinkState::new(&scenario.nodes[tx], &scenario.nodes[rx], &scenario.nodes[s], model)?;
                    row.push(match (o.mode, objective) {
                        (AssignMode::Jam, Objective::MaxTotalEavRate) => state.best_destructive(),
                        (AssignMode::Jam, Objective::MinTotalMaliciousRate) if state.sid_budget_w > 0.0 => {
                            state.extreme_r0(Sign::Destructive, -1.0).0
                        }
                        (AssignMode::Relay, _) => state.best_constructive(),
                        _ => SidControl::ZERO,
                    });
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            scenario,
            objective,
            gain,
            sid_nodes,
            sid_ids,
            link_nodes,
            legit_nodes,
            opts,
            controls,
        })
    }

    fn n_choices(&self) -> usize {
        self.opts.len() + 1
    }

    fn opt(&self, choice: usize) -> Option<Opt> {
        choice.checked_sub(1).map(|k| self.opts[k])
    }

    fn band_of(&self, choice: usize) -> Option<&str> {
        self.opt(choice)
            .map(|o| self.scenario.suspicious_links[o.link].band.as_str())
    }

    /// Total transmit power of SID `s` under `choice`.
    fn tx_power(&self, s: usize, choice: usize) -> f64 {
        match self.opt(choice).map(|o| o.mode) {
            Some(AssignMode::Jam | AssignMode::Relay) => self.controls[s][choice].total_power_w(),
            Some(AssignMode::Spoof) => self.scenario.nodes[self.sid_nodes[s]].tx_power_w(),
            _ => 0.0,
        }
    }

    /// SID interference received at node `at` on `band`, skipping SID `skip`.
    fn interference(&self, choices: &[usize], band: &str, at: usize, skip: Option<usize>) -> f64 {
        let mut total = 0.0;
        for (s, &c) in choices.iter().enumerate() {
            if Some(s) == skip || self.band_of(c) != Some(band) {
                continue;
            }
            let node = self.sid_nodes[s];
            if node != at {
                total += self.tx_power(s, c) * self.gain[node][at];
            }
        }
        total
    }

    fn evaluate(&self, choices: &[usize]) -> PlanEval {
        let nodes = &self.scenario.nodes;
        let mut links = Vec::with_capacity(self.link_nodes.len());
        let mut objective = 0.0;
        for (l, &(tx, rx)) in self.link_nodes.iter().enumerate() {
            let link = &self.scenario.suspicious_links[l];
            let band = link.band.as_str();
            let p_tx = nodes[tx].tx_power_w();
            let on_link: Vec<(usize, Opt)> = choices
                .iter()
                .enumerate()
                .filter_map(|(s, &c)| self.opt(c).filter(|o| o.link == l).map(|o| (s, o)))
                .collect();

            // eavesdropping SINR of every SID listening to this link's transmitter
            let mut listen_sinr = BTreeMap::new();
            for &(s, _) in &on_link {
                let node = self.sid_nodes[s];
                let floor = nodes[node].noise_power_w() + self.interference(choices, band, node, Some(s));
                listen_sinr.insert(s, p_tx * self.gain[tx][node] / floor);
            }
            let r1 = cap(listen_sinr.values().sum());

            // receiver side
            let direct = p_tx * self.gain[tx][rx];
            let mut amp = direct.sqrt();
            let mut forwarded = false;
            let mut relay_noise = 0.0;
            let mut jam = Vec::new();
            let mut other = 0.0;
            for (s, &c) in choices.iter().enumerate() {
                if self.band_of(c) != Some(band) {
                    continue;
                }
                let g = self.gain[self.sid_nodes[s]][rx];
                match self.opt(c) {
                    Some(o) if o.link == l && matches!(o.mode, AssignMode::Jam | AssignMode::Relay) => {
                        let ctrl = &self.controls[s][c];
                        let sinr = listen_sinr[&s];
                        let rho = sinr / (1.0 + sinr);
                        let useful = ctrl.forward_power_w * g * rho;
                        if useful > 0.0 {
                            forwarded = true;
                            amp += match ctrl.sign {
                                Sign::Constructive => useful.sqrt(),
                                Sign::Destructive => -useful.sqrt(),
                            };
                        }
                        relay_noise += ctrl.forward_power_w * g * (1.0 - rho);
                        jam.push(ctrl.noise_power_w * g);
                    }
                    _ => other += self.tx_power(s, c) * g,
                }
            }
            let signal = if forwarded { amp * amp } else { direct };
            let noise_rx = nodes[rx].noise_power_w();
            let floor = noise_rx + relay_noise + combine_jamming(&jam, true) + other;
            let r0 = cap(signal / floor);

            let base_r0 = cap(direct / noise_rx);
            let spoofed = on_link.iter().any(|&(s, o)| {
                if o.mode != AssignMode::Spoof || cap(listen_sinr[&s]) < base_r0 {
                    return false;
                }
                let node = self.sid_nodes[s];
                let f = floor - self.tx_power(s, choices[s]) * self.gain[node][rx];
                let spoof = SpoofLink {
                    gamma_ab: signal / f,
                    gamma_as: listen_sinr[&s],
                    fake_snr: nodes[node].tx_power_w() * self.gain[node][rx] / f,
                    watts_per_unit: f / self.gain[node][rx],
                    budget_w: nodes[node].tx_power_w(),
                };
                spoof.optimize().sinr_symbol_level >= 1.0
            });
            let eval = if spoofed {
                LinkEval {
                    r0: 0.0,
                    r1,
                    r_eav: 0.0,
                    spoofed,
                }
            } else {
                LinkEval {
                    r0,
                    r1,
                    r_eav: eavesdropping_rate(r0, r1),
                    spoofed,
                }
            };
            objective += link.weight
                * match self.objective {
                    Objective::MaxTotalEavRate => eval.r_eav,
                    Objective::MinTotalMaliciousRate => eval.r0,
                };
            links.push(eval);
        }

        let mut legit_interference_w = Vec::with_capacity(self.legit_nodes.len());
        let mut slacks_w = Vec::with_capacity(self.legit_nodes.len());
        for (k, r) in self.scenario.legit_receivers.iter().enumerate() {
            let i = self.interference(choices, &r.band, self.legit_nodes[k], None);
            legit_interference_w.push(i);
            slacks_w.push(r.max_interference_w - i);
        }
        let feasible = slacks_w.iter().all(|s| *s >= 0.0);
        PlanEval {
            links,
            legit_interference_w,
            slacks_w,
            objective,
            feasible,
        }
    }

    fn decode(&self, mut index: u64) -> Vec<usize> {
        let base = self.n_choices() as u64;
        let mut choices = vec![0; self.sid_nodes.len()];
        for c in choices.iter_mut().rev() {
            *c = (index % base) as usize;
            index /= base;
        }
        choices
    }

    fn plan_count(&self) -> Option<u64> {
        (self.n_choices() as u64).checked_pow(self.sid_nodes.len() as u32)
    }

    fn exhaustive(&self) -> Option<Vec<usize>> {
        let total = self.plan_count()?;
        let objective = self.objective;
        (0..total)
            .into_par_iter()
            .filter_map(|i| {
                let e = self.evaluate(&self.decode(i));
                e.feasible.then_some((i, e.objective))
            })
            .reduce_with(|a, b| {
                if objective.better(b.1, a.1) || (!objective.better(a.1, b.1) && b.0 < a.0) {
                    b
                } else {
                    a
                }
            })
            .map(|(i, _)| self.decode(i))
    }

    /// One pass in SID id order, each SID taking its best option given the earlier ones.
    fn greedy(&self) -> Option<Vec<usize>> {
        let mut choices = vec![0; self.sid_nodes.len()];
        let start = self.evaluate(&choices);
        let mut best: Option<f64> = start.feasible.then_some(start.objective);
        for s in 0..choices.len() {
            let mut pick = choices[s];
            for c in 1..self.n_choices() {
                choices[s] = c;
                let e = self.evaluate(&choices);
                if e.feasible && best.is_none_or(|b| self.objective.better(e.objective, b)) {
                    best = Some(e.objective);
                    pick = c;
                }
            }
            choices[s] = pick;
        }
        best.map(|_| choices)
    }

    fn plan(&self, choices: &[usize], method: SearchMethod, feasible: bool) -> AssignmentPlan {
        let eval = self.evaluate(choices);
        let decisions = self
            .sid_ids
            .iter()
            .zip(choices)
            .map(|(id, &c)| {
                let d = match self.opt(c) {
                    None => Decision {
                        link: None,
                        mode: AssignMode::Idle,
                        band: None,
                    },
                    Some(o) => Decision {
                        link: Some(o.link),
                        mode: o.mode,
                        band: Some(self.scenario.suspicious_links[o.link].band.clone()),
                    },
                };
                (id.clone(), d)
            })
            .collect();
        AssignmentPlan {
            decisions,
            objective: self.objective,
            objective_value: eval.objective,
            constraint_slacks: self
                .scenario
                .legit_receivers
                .iter()
                .zip(&eval.slacks_w)
                .map(|(r, s)| (r.node.clone(), *s))
                .collect(),
            links: eval.links,
            feasible: feasible && eval.feasible,
            method,
        }
    }
}

/// Best SID plan, exhaustive when the joint plan count fits [`EXHAUSTIVE_LIMIT`], greedy otherwise.
///
/// When no plan meets every interference cap, the all-idle plan comes back
/// with `feasible = false`.
pub fn optimize_assignment(scenario: &Scenario, objective: Objective, model: &ChannelModel) -> Result<AssignmentPlan> {
    let planner = Planner::new(scenario, objective, model)?;
    let method = match planner.plan_count() {
        Some(n) if n <= EXHAUSTIVE_LIMIT => SearchMethod::Exhaustive,
        _ => SearchMethod::Greedy,
    };
    run(&planner, method)
}

/// Same as [`optimize_assignment`] with the search method forced.
pub fn optimize_with(
    scenario: &Scenario,
    objective: Objective,
    model: &ChannelModel,
    method: SearchMethod,
) -> Result<AssignmentPlan> {
    let planner = Planner::new(scenario, objective, model)?;
    if method == SearchMethod::Exhaustive && planner.plan_count().is_none_or(|n| n > 100 * EXHAUSTIVE_LIMIT) {
        return Err(Error::invalid("too many joint plans for exhaustive search"));
    }
    run(&planner, method)
}

fn run(planner: &Planner<'_>, method: SearchMethod) -> Result<AssignmentPlan> {
    let found = match method {
        SearchMethod::Exhaustive => planner.exhaustive(),
        SearchMethod::Greedy => planner.greedy(),
    };
    Ok(match found {
        Some(choices) => planner.plan(&choices, method, true),
        None => planner.plan(&vec![0; planner.sid_nodes.len()], method, false),
    })
}

/// Scores an explicit plan given as `(sid id, link index, mode)`; SIDs not listed idle.
pub fn evaluate_plan(
    scenario: &Scenario,
    objective: Objective,
    model: &ChannelModel,
    assignment: &[(&str, usize, AssignMode)],
) -> Result<PlanEval> {
    let planner = Planner::new(scenario, objective, model)?;
    let mut choices = vec![0; planner.sid_nodes.len()];
    for &(sid, link, mode) in assignment {
        let s = planner
            .sid_ids
            .iter()
            .position(|id| id == sid)
            .ok_or_else(|| Error::DanglingReference {
                field: "plan".into(),
                id: sid.into(),
            })?;
        if mode == AssignMode::Idle {
            continue;
        }
        let k = planner
            .opts
            .iter()
            .position(|o| o.link == link && o.mode == mode)
            .ok_or_else(|| Error::invalid(format!("no suspicious link with index {link}")))?;
        choices[s] = k + 1;
    }
    Ok(planner.evaluate(&choices))
}
