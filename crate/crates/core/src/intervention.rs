//! Disruption, disabling and spoofing of a malicious link by one SID.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{cap, linear_to_db, link_snr, ChannelModel, Node};
use crate::optim::{argmax, golden_max};
use crate::surveillance::{clamp_db, LinkScenario, LinkState, SidControl, Sign, DB_LIMIT};

/// Grid points on the square-root cancellation axis before golden-section refinement.
pub const SPOOF_GRID: usize = 1024;
/// Golden-section tolerance on the square-root cancellation axis.
pub const SPOOF_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DisruptStrategy {
    /// Full budget spent on Gaussian noise.
    NoiseOnly,
    /// Noise plus destructively combined forwarding, split chosen to minimize `r0`.
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisruptionOutcome {
    pub r0_before: f64,
    pub r0_after: f64,
    pub disabled: bool,
    pub control: SidControl,
    pub noise_rise_db: f64,
    pub signal_drop_db: f64,
}

pub fn disrupt(
    alice: &Node,
    bob: &Node,
    sid: &Node,
    model: &ChannelModel,
    strategy: DisruptStrategy,
    qos: f64,
) -> Result<DisruptionOutcome> {
    if !(qos.is_finite() && qos >= 0.0) {
        return Err(Error::invalid(format!(
            "qos threshold must be finite and >= 0, got {qos}"
        )));
    }
    let state = LinkState::new(alice, bob, sid, model)?;
    Ok(disrupt_state(&state, strategy, qos))
}

pub(crate) fn disrupt_state(state: &LinkState, strategy: DisruptStrategy, qos: f64) -> DisruptionOutcome {
    let control = if state.sid_budget_w <= 0.0 {
        SidControl::ZERO
    } else {
        match strategy {
            DisruptStrategy::NoiseOnly => SidControl::noise(state.sid_budget_w),
            DisruptStrategy::Combined => state.extreme_r0(Sign::Destructive, -1.0).0,
        }
    };
    let out = state.outcome(crate::surveillance::Mode::classify(&control), control);
    DisruptionOutcome {
        r0_before: state.r0_base(),
        r0_after: out.r0,
        disabled: out.r0 < qos,
        control,
        noise_rise_db: out.noise_rise_db,
        signal_drop_db: out.signal_drop_db,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpoofingOutcome {
    pub sinr_direct: f64,
    pub sinr_symbol_level: f64,
    pub cancel_power_w: f64,
    pub fake_power_w: f64,
    pub decodable_at_sid: bool,
}

/// Spoofing quantities normalized to Bob's noise power.
///
/// `fake_snr` is the full SID budget received at Bob over noise, `gamma_ab` the
/// direct-link SNR. Spending a received share `c` on regenerated cancellation
/// symbols leaves
///
/// ```text
/// SINR(c) = (fake_snr - c) / ((sqrt(gamma_ab) - sqrt(c))^2 + 1)
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpoofLink {
    pub gamma_ab: f64,
    pub gamma_as: f64,
    pub fake_snr: f64,
    /// SID transmit watts per unit of noise-normalized received power at Bob.
    pub watts_per_unit: f64,
    pub budget_w: f64,
}

impl SpoofLink {
    pub fn new(alice: &Node, bob: &Node, sid: &Node, model: &ChannelModel) -> Result<Self> {
        if sid.id == alice.id || sid.id == bob.id {
            return Err(Error::invalid(format!("SID `{}` is also a link endpoint", sid.id)));
        }
        let ab = link_snr(alice, bob, model)?;
        let a_s = link_snr(alice, sid, model)?;
        let sb = link_snr(sid, bob, model)?;
        let noise = bob.noise_power_w();
        Ok(Self {
            gamma_ab: ab.snr,
            gamma_as: a_s.snr,
            fake_snr: sb.snr,
            watts_per_unit: noise / sb.gain,
            budget_w: sid.tx_power_w(),
        })
    }

    /// Direct-link power left at Bob after cancelling with received share `c`, over noise.
    pub fn residual(&self, c: f64) -> f64 {
        if c == 0.0 {
            self.gamma_ab
        } else {
            let r = self.gamma_ab.sqrt() - c.sqrt();
            r * r
        }
    }

    pub fn sinr_at(&self, c: f64) -> f64 {
        (self.fake_snr - c) / (self.residual(c) + 1.0)
    }

    pub fn direct(&self) -> f64 {
        self.fake_snr / (self.gamma_ab + 1.0)
    }

    /// Best cancellation share by grid plus golden-section search over `sqrt(c)`.
    pub fn optimize(&self) -> SpoofingOutcome {
        let direct = self.direct();
        let top = self.fake_snr.sqrt();
        let (mut c_best, mut s_best) = (0.0, direct);
        if top > 0.0 {
            let t_at = |k: usize| top * k as f64 / SPOOF_GRID as f64;
            let (k, _) = argmax((0..=SPOOF_GRID).map(|k| self.sinr_at(t_at(k).powi(2)))).expect("non-empty grid");
            let lo = t_at(k.saturating_sub(1));
            let hi = t_at((k + 1).min(SPOOF_GRID));
            let (t, s) = golden_max(lo, hi, SPOOF_TOL * top.max(1.0), |t| {
                self.sinr_at((t * t).min(self.fake_snr))
            });
            if s > s_best {
                c_best = (t * t).min(self.fake_snr);
                s_best = s;
            }
        }
        let cancel_power_w = (c_best * self.watts_per_unit).min(self.budget_w);
        SpoofingOutcome {
            sinr_direct: direct,
            sinr_symbol_level: s_best,
            cancel_power_w,
            fake_power_w: (self.budget_w - cancel_power_w).max(0.0),
            decodable_at_sid: cap(self.gamma_as) >= cap(self.gamma_ab),
        }
    }
}

/// Fake-signal power over direct-link power plus noise at Bob, SID sending only the fake signal.
pub fn direct_spoof_sinr(alice: &Node, bob: &Node, sid: &Node, model: &ChannelModel) -> Result<f64> {
    Ok(SpoofLink::new(alice, bob, sid, model)?.direct())
}

pub fn symbol_level_spoof_sinr(alice: &Node, bob: &Node, sid: &Node, model: &ChannelModel) -> Result<SpoofingOutcome> {
    Ok(SpoofLink::new(alice, bob, sid, model)?.optimize())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpoofRow {
    pub x: f64,
    pub direct_db: f64,
    pub symbol_level_db: f64,
}

/// SINR in dB with `-inf` mapped to the table floor.
pub fn sinr_db(sinr: f64) -> f64 {
    if sinr <= 0.0 {
        -DB_LIMIT
    } else {
        clamp_db(linear_to_db(sinr))
    }
}

pub fn sweep_spoofing(x_values: &[f64], scenario: &LinkScenario) -> Result<Vec<SpoofRow>> {
    if x_values.is_empty() {
        return Err(Error::invalid("empty sweep"));
    }
    x_values
        .par_iter()
        .map(|&x| {
            let sc = scenario.with_sid_on_axis(x)?;
            let out = SpoofLink::new(&sc.alice, &sc.bob, &sc.sid, &sc.model)?.optimize();
            Ok(SpoofRow {
                x,
                direct_db: sinr_db(out.sinr_direct),
                symbol_level_db: sinr_db(out.sinr_symbol_level),
            })
        })
        .collect()
}
