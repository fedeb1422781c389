//! Figure presets, scenario sweeps and the tables behind the command-line tool.
//!
//! Rates are in bps/Hz and SINRs in dB; a zero SINR is written as -300 dB.

use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::intervention::{disrupt_state, sinr_db, sweep_spoofing, DisruptStrategy, SpoofLink};
use crate::model::{db_to_linear, ChannelModel, Node, Role};
use crate::network::{optimize_assignment, AssignMode, AssignmentPlan, Objective};
use crate::protocol::{harq_selective_spoof, harq_spoof_plan, FadingProcess, SelectiveSpoof};
use crate::scenario::{LoadedScenario, SweepKind, SweepSpec, SweepVariable};
use crate::surveillance::{sweep_eavesdropping, LinkScenario};
use crate::table::ResultTable;

pub const PRESETS: [&str; 2] = ["fig4", "fig6"];

pub const FIG4_FILE: &str = include_str!("../presets/fig4.toml");
pub const FIG6_FILE: &str = include_str!("../presets/fig6.toml");

const EAV_HEADER: [&str; 3] = ["x_m", "passive_bpshz", "proactive_bpshz"];
const SPOOF_HEADER: [&str; 3] = ["x_m", "direct_db", "symbol_level_db"];

/// Text of a bundled preset scenario file.
pub fn preset_file(name: &str) -> Result<&'static str> {
    match name {
        "fig4" => Ok(FIG4_FILE),
        "fig6" => Ok(FIG6_FILE),
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

/// Alice at the origin, Bob 500 m up the y axis, all transmitters at 43 dBm, noise -80 dBm.
pub fn reference_link() -> LinkScenario {
    let node = |id: &str, role, y| Node::new(id, role, 0.0, y, 43.0, -80.0).expect("valid reference node");
    LinkScenario {
        alice: node("alice", Role::SuspiciousTx, 0.0),
        bob: node("bob", Role::SuspiciousRx, 500.0),
        sid: node("sid", Role::Sid, 0.0),
        model: ChannelModel::default(),
    }
}

/// SID positions 0, 10, ..., 1500 m along the Alice-Bob axis.
pub fn preset_grid() -> Vec<f64> {
    (0..=150).map(|k| k as f64 * 10.0).collect()
}

pub fn run_preset(name: &str) -> Result<ResultTable> {
    let link = reference_link();
    let x = preset_grid();
    match name {
        "fig4" => {
            let mut t = ResultTable::new(EAV_HEADER);
            for r in sweep_eavesdropping(&x, &link)? {
                t.push(vec![r.x, r.passive, r.proactive])?;
            }
            Ok(t)
        }
        "fig6" => {
            let mut t = ResultTable::new(SPOOF_HEADER);
            for r in sweep_spoofing(&x, &link)? {
                t.push(vec![r.x, r.direct_db, r.symbol_level_db])?;
            }
            Ok(t)
        }
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

fn place(base: &LinkScenario, variable: SweepVariable, v: f64) -> Result<LinkScenario> {
    let p = base.sid.position;
    match variable {
        SweepVariable::Axis => base.with_sid_on_axis(v),
        SweepVariable::X => Ok(LinkScenario {
            sid: base.sid.with_position(v, p.y),
            ..base.clone()
        }),
        SweepVariable::Y => Ok(LinkScenario {
            sid: base.sid.with_position(p.x, v),
            ..base.clone()
        }),
    }
}

/// Table for the scenario's sweep section.
pub fn sweep_table(loaded: &LoadedScenario) -> Result<ResultTable> {
    let spec: &SweepSpec = loaded
        .sweep
        .as_ref()
        .ok_or_else(|| Error::field("sweep", "scenario has no sweep section"))?;
    let sid = match &spec.sid {
        Some(s) => s.clone(),
        None => loaded
            .scenario
            .sids
            .first()
            .cloned()
            .ok_or_else(|| Error::field("sweep.sid", "scenario lists no SIDs"))?,
    };
    let base = loaded.link_scenario(spec.link, &sid)?;
    let points = spec.points()?;
    let var = if spec.variable == SweepVariable::Y {
        "y_m"
    } else {
        "x_m"
    };
    let rows: Vec<[f64; 3]> = points
        .par_iter()
        .map(|&v| {
            let sc = place(&base, spec.variable, v)?;
            Ok(match spec.kind {
                SweepKind::Eavesdropping => {
                    let st = sc.state()?;
                    [v, st.passive().r_eav, st.auto().r_eav]
                }
                SweepKind::Spoofing => {
                    let out = SpoofLink::new(&sc.alice, &sc.bob, &sc.sid, &sc.model)?.optimize();
                    [v, sinr_db(out.sinr_direct), sinr_db(out.sinr_symbol_level)]
                }
            })
        })
        .collect::<Result<_>>()?;
    let header = match spec.kind {
        SweepKind::Eavesdropping => EAV_HEADER,
        SweepKind::Spoofing => SPOOF_HEADER,
    };
    let mut t = ResultTable::new(std::iter::once(var).chain(header[1..].iter().copied()));
    for r in rows {
        t.push(r.to_vec())?;
    }
    Ok(t)
}

/// Runs the sweep and writes the table to `out`.
pub fn run_sweep(loaded: &LoadedScenario, out: &Path) -> Result<ResultTable> {
    let t = sweep_table(loaded)?;
    t.write(out)?;
    Ok(t)
}

/// One row per (SID, link) pair, SIDs in id order, links in file order.
///
/// Every pair gets its own fading stream seeded with `seed + pair index`.
/// `harq_rounds` is 0 when the SID cannot decode within `max_rounds`.
pub fn simulate(loaded: &LoadedScenario, seed: u64) -> Result<ResultTable> {
    let mut header = vec![
        "sid_index",
        "link_index",
        "r0_bpshz",
        "r1_bpshz",
        "passive_bpshz",
        "noise_jam_bpshz",
        "relay_bpshz",
        "proactive_bpshz",
        "proactive_power_w",
        "direct_spoof_db",
        "symbol_level_spoof_db",
        "harq_rounds",
        "harq_throughput_bpshz",
        "selective_throughput_bpshz",
        "selective_exposure",
    ];
    if loaded.qos_bpshz.is_some() {
        header.extend([
            "noise_only_r0_bpshz",
            "noise_only_disabled",
            "combined_r0_bpshz",
            "combined_disabled",
        ]);
    }
    let mut t = ResultTable::new(header);
    let sids = loaded.sorted_sids();
    let links = loaded.scenario.suspicious_links.len();
    let mut pair = 0u64;
    for (si, sid) in sids.iter().enumerate() {
        for li in 0..links {
            let sc = loaded.link_scenario(li, sid)?;
            let st = sc.state()?;
            let auto = st.auto();
            let spoof = SpoofLink::new(&sc.alice, &sc.bob, &sc.sid, &sc.model)?.optimize();
            let r0 = st.r0_base();
            let harq = loaded.harq;
            let plan = harq_spoof_plan(st.gamma_as, r0, harq.max_rounds)?;
            let threshold = harq.threshold_db.map_or(st.gamma_ab, db_to_linear);
            let mut fading = FadingProcess::new(seed.wrapping_add(pair));
            let sel = harq_selective_spoof(
                &mut fading,
                &SelectiveSpoof {
                    n_packets: harq.packets,
                    gamma_as_mean: st.gamma_as,
                    gamma_ab_mean: st.gamma_ab,
                    r0,
                    threshold,
                    max_rounds: harq.max_rounds,
                },
            )?;
            let mut row = vec![
                si as f64,
                li as f64,
                r0,
                st.r1(),
                st.passive().r_eav,
                st.noise_jam().r_eav,
                st.relay().r_eav,
                auto.r_eav,
                auto.control.total_power_w(),
                sinr_db(spoof.sinr_direct),
                sinr_db(spoof.sinr_symbol_level),
                if plan.feasible { plan.k_star as f64 } else { 0.0 },
                if plan.feasible { plan.effective_throughput } else { 0.0 },
                sel.throughput,
                sel.exposure,
            ];
            if let Some(qos) = loaded.qos_bpshz {
                for strategy in [DisruptStrategy::NoiseOnly, DisruptStrategy::Combined] {
                    let d = disrupt_state(&st, strategy, qos);
                    row.extend([d.r0_after, if d.disabled { 1.0 } else { 0.0 }]);
                }
            }
            t.push(row)?;
            pair += 1;
        }
    }
    Ok(t)
}

/// Numeric code of an assignment mode in optimizer tables.
pub fn mode_code(mode: AssignMode) -> f64 {
    match mode {
        AssignMode::Idle => 0.0,
        AssignMode::Eavesdrop => 1.0,
        AssignMode::Jam => 2.0,
        AssignMode::Relay => 3.0,
        AssignMode::Spoof => 4.0,
    }
}

pub fn parse_objective(name: &str) -> Result<Objective> {
    match name {
        "max-eav-rate" => Ok(Objective::MaxTotalEavRate),
        "min-malicious-rate" => Ok(Objective::MinTotalMaliciousRate),
        _ => Err(Error::field(
            "objective",
            format!("unknown objective `{name}`, expected max-eav-rate or min-malicious-rate"),
        )),
    }
}

/// Plan for the scenario plus its table: one row per SID in id order.
///
/// `link_index` is -1 for an idle SID; `min_slack_w` is the smallest
/// cap-minus-interference over rightful receivers, 0 when there are none.
pub fn optimize(loaded: &LoadedScenario, objective: Objective) -> Result<(AssignmentPlan, ResultTable)> {
    let plan = optimize_assignment(&loaded.scenario, objective, &loaded.model)?;
    let mut t = ResultTable::new([
        "sid_index",
        "link_index",
        "mode_code",
        "objective_value",
        "feasible",
        "min_slack_w",
    ]);
    let min_slack = plan
        .constraint_slacks
        .iter()
        .map(|s| s.1)
        .fold(None, |m: Option<f64>, s| Some(m.map_or(s, |m| m.min(s))))
        .unwrap_or(0.0);
    for (i, d) in plan.decisions.values().enumerate() {
        t.push(vec![
            i as f64,
            d.link.map_or(-1.0, |l| l as f64),
            mode_code(d.mode),
            plan.objective_value,
            if plan.feasible { 1.0 } else { 0.0 },
            min_slack,
        ])?;
    }
    Ok((plan, t))
}
