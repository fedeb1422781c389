//! Independent reference models and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use sid_core::model::{ChannelModel, Node, Role};
use sid_core::surveillance::LinkScenario;

pub const P_W: f64 = 19.952623149688797; // 43 dBm
pub const N_W: f64 = 1e-11; // -80 dBm

/// Pathloss written out from scratch: -60 dB at 10 m, exponent 3, clamp at 1 m.
pub fn gain(d: f64) -> f64 {
    1e-6 * (d.max(1.0) / 10.0).powi(-3)
}

pub fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

pub fn log2_1p(snr: f64) -> f64 {
    (1.0 + snr).log2()
}

pub const ALICE: (f64, f64) = (0.0, 0.0);
pub const BOB: (f64, f64) = (0.0, 500.0);

/// Alice/Bob at the reference positions with the SID at `sid`.
pub fn geometry(sid: (f64, f64)) -> LinkScenario {
    let n = |id: &str, role, p: (f64, f64)| Node::new(id, role, p.0, p.1, 43.0, -80.0).unwrap();
    LinkScenario {
        alice: n("alice", Role::SuspiciousTx, ALICE),
        bob: n("bob", Role::SuspiciousRx, BOB),
        sid: n("sid", Role::Sid, sid),
        model: ChannelModel::default(),
    }
}

/// Raw link SNRs for a SID at `sid`: (gamma_ab, gamma_as, g_sb / noise).
pub fn snrs(sid: (f64, f64)) -> (f64, f64, f64) {
    (
        P_W * gain(dist(ALICE, BOB)) / N_W,
        P_W * gain(dist(ALICE, sid)) / N_W,
        gain(dist(sid, BOB)) / N_W,
    )
}

/// Bob's SNR when the SID forwards `pf` watts (amplify-and-forward, sign `s`) and adds `pn` watts of noise.
pub fn bob_snr(sid: (f64, f64), s: f64, pf: f64, pn: f64) -> f64 {
    let (gab, gas, gsb) = snrs(sid);
    let rho = gas / (1.0 + gas);
    let (gf, gn) = (pf * gsb, pn * gsb);
    let amp = gab.sqrt() + s * (gf * rho).sqrt();
    amp * amp / (1.0 + gf * (1.0 - rho) + gn)
}

fn r_eav_at(sid: (f64, f64), s: f64, pf: f64, pn: f64) -> f64 {
    let (_, gas, _) = snrs(sid);
    let r0 = log2_1p(bob_snr(sid, s, pf, pn));
    if log2_1p(gas) >= r0 {
        r0
    } else {
        0.0
    }
}

const N: usize = 500;

/// Total power grid: zero, then log-spaced up to exactly the budget.
fn power_axis() -> Vec<f64> {
    let mut v = vec![0.0];
    v.extend((0..N - 1).map(|k| P_W * 10f64.powf(-10.0 + 10.0 * k as f64 / (N - 2) as f64)));
    v
}

fn lin(lo: f64, hi: f64) -> Vec<f64> {
    (0..N).map(|k| lo + (hi - lo) * k as f64 / (N - 1) as f64).collect()
}

/// Best eavesdropping rate over every SID control, by brute force.
///
/// For each forwarding sign a 500 x 500 grid over (total power, forward share)
/// is searched, then a second 500 x 500 grid spans the neighbours of the best cell.
pub fn auto_oracle(sid: (f64, f64)) -> f64 {
    let mut best = r_eav_at(sid, 1.0, 0.0, 0.0);
    let t_axis = power_axis();
    let s_axis = lin(0.0, 1.0);
    for sign in [1.0, -1.0] {
        let f = |t: f64, s: f64| r_eav_at(sid, sign, t * s, t * (1.0 - s));
        let (mut bi, mut bj, mut bv) = (0, 0, f64::NEG_INFINITY);
        for (i, &t) in t_axis.iter().enumerate() {
            for (j, &s) in s_axis.iter().enumerate() {
                let v = f(t, s);
                if v > bv {
                    (bi, bj, bv) = (i, j, v);
                }
            }
        }
        let t_fine = lin(t_axis[bi.saturating_sub(1)], t_axis[(bi + 1).min(N - 1)]);
        let s_fine = lin(s_axis[bj.saturating_sub(1)], s_axis[(bj + 1).min(N - 1)]);
        for &t in &t_fine {
            for &s in &s_fine {
                bv = bv.max(f(t.min(P_W), s));
            }
        }
        best = best.max(bv);
    }
    best
}

/// Spoofing SINR at Bob when `c` of the (noise-normalized) received SID power cancels Alice's symbols.
pub fn spoof_sinr(sid: (f64, f64), c: f64) -> f64 {
    let (gab, _, gsb) = snrs(sid);
    let g = P_W * gsb;
    let residual = (gab.sqrt() - c.sqrt()).powi(2);
    (g - c) / (residual + 1.0)
}

/// Direct spoofing SINR: the whole budget carries the fake signal.
pub fn direct_oracle(sid: (f64, f64)) -> f64 {
    spoof_sinr(sid, 0.0)
}

/// Best symbol-level spoofing SINR by a 1e5-point grid over sqrt(c), refined by a
/// second 1e5-point grid across the neighbours of the best point.
pub fn symbol_oracle(sid: (f64, f64)) -> f64 {
    const M: usize = 100_000;
    let (_, _, gsb) = snrs(sid);
    let top = (P_W * gsb).sqrt();
    let at = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / M as f64;
    let (mut bk, mut bv) = (0, f64::NEG_INFINITY);
    for k in 0..=M {
        let t = at(0.0, top, k);
        let v = spoof_sinr(sid, t * t);
        if v > bv {
            (bk, bv) = (k, v);
        }
    }
    let (lo, hi) = (at(0.0, top, bk.saturating_sub(1)), at(0.0, top, (bk + 1).min(M)));
    for k in 0..=M {
        let t = at(lo, hi, k);
        bv = bv.max(spoof_sinr(sid, t * t));
    }
    bv
}

pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}
