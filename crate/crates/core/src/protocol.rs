//! Round-level models of control-plane interventions.
//!
//! HARQ ACK-to-NACK spoofing lets the SID collect extra copies of a packet;
//! with chase combining the SID's SNR adds up linearly over rounds. Pilot
//! spoofing redirects a TDD beamformer from Bob toward the SID.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::cap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarqPlan {
    /// Rounds the SID needs to decode; 1 means no spoofing.
    pub k_star: u32,
    pub spoofed_nacks: u32,
    /// Suspicious throughput once every packet is sent `k_star` times, bps/Hz.
    pub effective_throughput: f64,
    /// Fraction of feedback messages in a session that are spoofed.
    pub exposure: f64,
    pub feasible: bool,
}

impl HarqPlan {
    fn infeasible() -> Self {
        Self {
            k_star: 1,
            spoofed_nacks: 0,
            effective_throughput: 0.0,
            exposure: 0.0,
            feasible: false,
        }
    }
}

/// Least number of chase-combined rounds after which the SID decodes at rate `r0`.
pub fn harq_spoof_plan(gamma_as: f64, r0: f64, max_rounds: u32) -> Result<HarqPlan> {
    if !(gamma_as.is_finite() && gamma_as >= 0.0) {
        return Err(Error::invalid(format!(
            "gamma_as must be finite and >= 0, got {gamma_as}"
        )));
    }
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(Error::invalid(format!("r0 must be finite and > 0, got {r0}")));
    }
    if max_rounds == 0 {
        return Err(Error::invalid("max_rounds must be >= 1"));
    }
    let Some(k) = (1..=max_rounds).find(|&k| cap(k as f64 * gamma_as) >= r0) else {
        return Ok(HarqPlan::infeasible());
    };
    Ok(HarqPlan {
        k_star: k,
        spoofed_nacks: k - 1,
        effective_throughput: r0 / k as f64,
        exposure: (k - 1) as f64 / k as f64,
        feasible: true,
    })
}

/// Seeded block-fading source: one unit-mean exponential power gain per draw.
#[derive(Debug, Clone)]
pub struct FadingProcess {
    seed: u64,
    rng: ChaCha8Rng,
}

impl FadingProcess {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_gain(&mut self) -> f64 {
        Exp1.sample(&mut self.rng)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectiveSpoof {
    pub n_packets: u32,
    pub gamma_as_mean: f64,
    pub gamma_ab_mean: f64,
    pub r0: f64,
    /// Spoof only while the instantaneous Alice-Bob SNR is below this (linear).
    pub threshold: f64,
    pub max_rounds: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectiveOutcome {
    /// Eavesdropped bits per packet slot, bps/Hz.
    pub throughput: f64,
    pub exposure: f64,
    pub spoofed_packets: u32,
}

/// Spoofs NACKs only on packets whose direct link fades below `threshold`.
///
/// Each packet draws an Alice-Bob gain then an Alice-SID gain, both held for
/// all of its rounds. Packets the SID already decodes, or could not decode
/// within `max_rounds`, are never spoofed.
pub fn harq_selective_spoof(fading: &mut FadingProcess, cfg: &SelectiveSpoof) -> Result<SelectiveOutcome> {
    if cfg.n_packets == 0 {
        return Err(Error::invalid("n_packets must be >= 1"));
    }
    if cfg.threshold.is_nan() || cfg.threshold < 0.0 {
        return Err(Error::invalid(format!("threshold must be >= 0, got {}", cfg.threshold)));
    }
    if !(cfg.gamma_as_mean >= 0.0 && cfg.gamma_ab_mean >= 0.0) {
        return Err(Error::invalid("mean SNRs must be >= 0"));
    }
    let mut bits = 0.0;
    let mut feedback = 0u64;
    let mut spoofed = 0u64;
    let mut spoofed_packets = 0u32;
    for _ in 0..cfg.n_packets {
        let snr_ab = fading.next_gain() * cfg.gamma_ab_mean;
        let snr_as = fading.next_gain() * cfg.gamma_as_mean;
        let plan = harq_spoof_plan(snr_as, cfg.r0, cfg.max_rounds)?;
        if plan.feasible && plan.k_star == 1 {
            bits += cfg.r0;
            feedback += 1;
        } else if plan.feasible && snr_ab < cfg.threshold {
            bits += plan.effective_throughput;
            feedback += plan.k_star as u64;
            spoofed += plan.spoofed_nacks as u64;
            spoofed_packets += 1;
        } else {
            feedback += 1;
        }
    }
    Ok(SelectiveOutcome {
        throughput: bits / cfg.n_packets as f64,
        exposure: spoofed as f64 / feedback as f64,
        spoofed_packets,
    })
}

/// Array-gain factors `(toward Bob, toward SID)` of an `m`-antenna TDD
/// beamformer whose pilot estimate is contaminated with spoof-to-pilot power
/// ratio `lambda`, assuming asymptotically orthogonal channels.
pub fn pilot_spoof(m: u32, lambda: f64) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(Error::invalid("antenna count must be >= 1"));
    }
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    let m = m as f64;
    if lambda.is_infinite() {
        return Ok((0.0, m));
    }
    Ok((m / (1.0 + lambda), m * lambda / (1.0 + lambda)))
}
