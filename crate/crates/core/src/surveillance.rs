//! Passive and proactive eavesdropping by a single SID against one suspicious link.
//!
//! The SID listens to Alice with perfect self-interference cancellation, so the
//! eavesdropping rate `r1` never depends on what the SID transmits. What the SID
//! transmits shapes Bob's SNR and thereby the suspicious rate `r0`:
//!
//! ```text
//! rho  = g_as / (1 + g_as)                 (useful share of the forwarded signal)
//! g_f  = P_f * gain_sb / N_bob
//! g_n  = P_n * gain_sb / N_bob
//! SNR  = (sqrt(g_ab) +/- sqrt(g_f * rho))^2 / (1 + g_f * (1 - rho) + g_n)
//! ```
//!
//! with `+` for constructive combining (relaying) and `-` for destructive
//! combining (combined jamming). The SID decodes iff `r1 >= r0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{cap, linear_to_db, link_snr, ChannelModel, Node};
use crate::optim::{bisect_boundary, compass_max_simplex, golden_max};

/// Power tolerance of the inner searches, watts. Reported controls are then
/// bisected down to floating-point resolution, since near Bob a nanowatt
/// still moves `r0` by about 1e-5 bps/Hz.
pub const POWER_TOL_W: f64 = 1e-9;
/// Coarse grid divisions per power axis in the unified optimizer.
pub const AUTO_GRID: usize = 64;
/// Floor/ceiling used when a dB quantity would be infinite.
pub const DB_LIMIT: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Constructive,
    Destructive,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Constructive => 1.0,
            Sign::Destructive => -1.0,
        }
    }
}

/// Power split of a SID between forwarding its eavesdropped signal and artificial noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidControl {
    pub sign: Sign,
    pub forward_power_w: f64,
    pub noise_power_w: f64,
}

impl SidControl {
    pub const ZERO: SidControl = SidControl {
        sign: Sign::Constructive,
        forward_power_w: 0.0,
        noise_power_w: 0.0,
    };

    pub fn forward(sign: Sign, forward_power_w: f64) -> Self {
        Self {
            sign,
            forward_power_w,
            noise_power_w: 0.0,
        }
    }

    pub fn noise(noise_power_w: f64) -> Self {
        Self {
            sign: Sign::Constructive,
            forward_power_w: 0.0,
            noise_power_w,
        }
    }

    pub fn total_power_w(&self) -> f64 {
        self.forward_power_w + self.noise_power_w
    }

    pub fn is_zero(&self) -> bool {
        self.total_power_w() == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Passive,
    NoiseJam,
    CombinedJam,
    Relay,
    Auto,
}

impl Mode {
    /// The fixed mode a control corresponds to.
    pub fn classify(control: &SidControl) -> Mode {
        if control.forward_power_w > 0.0 {
            match control.sign {
                Sign::Constructive if control.noise_power_w == 0.0 => Mode::Relay,
                Sign::Constructive => Mode::Auto,
                Sign::Destructive => Mode::CombinedJam,
            }
        } else if control.noise_power_w > 0.0 {
            Mode::NoiseJam
        } else {
            Mode::Passive
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurveillanceOutcome {
    pub r0: f64,
    pub r1: f64,
    pub r_eav: f64,
    pub mode: Mode,
    pub control: SidControl,
    pub noise_rise_db: f64,
    pub signal_drop_db: f64,
}

/// Rate the SID decodes without error: `r0` when `r1 >= r0`, else zero.
pub fn eavesdropping_rate(r0: f64, r1: f64) -> f64 {
    if r1 >= r0 {
        r0
    } else {
        0.0
    }
}

/// Bob's SNR when the SID applies `control`.
pub fn bob_snr_under_control(gamma_ab: f64, gamma_as: f64, gain_sb: f64, control: &SidControl, noise_w: f64) -> f64 {
    let rho = gamma_as / (1.0 + gamma_as);
    let gamma_f = control.forward_power_w * gain_sb / noise_w;
    let gamma_n = control.noise_power_w * gain_sb / noise_w;
    let useful = gamma_f * rho;
    let numerator = if useful == 0.0 {
        gamma_ab
    } else {
        let amp = gamma_ab.sqrt() + control.sign.factor() * useful.sqrt();
        amp * amp
    };
    numerator / (1.0 + gamma_f * (1.0 - rho) + gamma_n)
}

/// Link quantities of one Alice/Bob/SID triple, all linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkState {
    pub gamma_ab: f64,
    pub gamma_as: f64,
    pub gain_sb: f64,
    pub bob_noise_w: f64,
    pub sid_budget_w: f64,
}

impl LinkState {
    pub fn new(alice: &Node, bob: &Node, sid: &Node, model: &ChannelModel) -> Result<Self> {
        if sid.id == alice.id || sid.id == bob.id {
            return Err(Error::invalid(format!("SID `{}` is also a link endpoint", sid.id)));
        }
        let ab = link_snr(alice, bob, model)?;
        let a_s = link_snr(alice, sid, model)?;
        let sb = link_snr(sid, bob, model)?;
        Ok(Self {
            gamma_ab: ab.snr,
            gamma_as: a_s.snr,
            gain_sb: sb.gain,
            bob_noise_w: bob.noise_power_w(),
            sid_budget_w: sid.tx_power_w(),
        })
    }

    pub fn r0_base(&self) -> f64 {
        cap(self.gamma_ab)
    }

    pub fn r1(&self) -> f64 {
        cap(self.gamma_as)
    }

    pub fn bob_snr(&self, control: &SidControl) -> f64 {
        bob_snr_under_control(self.gamma_ab, self.gamma_as, self.gain_sb, control, self.bob_noise_w)
    }

    pub fn r0(&self, control: &SidControl) -> f64 {
        cap(self.bob_snr(control))
    }

    /// Noise-plus-interference rise at Bob in dB, relative to thermal noise.
    pub fn noise_rise_db(&self, control: &SidControl) -> f64 {
        let rho = self.gamma_as / (1.0 + self.gamma_as);
        let gamma_f = control.forward_power_w * self.gain_sb / self.bob_noise_w;
        let gamma_n = control.noise_power_w * self.gain_sb / self.bob_noise_w;
        linear_to_db(1.0 + gamma_f * (1.0 - rho) + gamma_n)
    }

    /// Drop of Alice's effective signal power at Bob in dB (negative for a boost).
    pub fn signal_drop_db(&self, control: &SidControl) -> f64 {
        let rho = self.gamma_as / (1.0 + self.gamma_as);
        let useful = control.forward_power_w * self.gain_sb / self.bob_noise_w * rho;
        if useful == 0.0 {
            return 0.0;
        }
        let amp = self.gamma_ab.sqrt() + control.sign.factor() * useful.sqrt();
        clamp_db(linear_to_db(self.gamma_ab / (amp * amp)))
    }

    pub fn outcome(&self, mode: Mode, control: SidControl) -> SurveillanceOutcome {
        let r0 = if control.is_zero() {
            self.r0_base()
        } else {
            self.r0(&control)
        };
        let r1 = self.r1();
        SurveillanceOutcome {
            r0,
            r1,
            r_eav: eavesdropping_rate(r0, r1),
            mode,
            control,
            noise_rise_db: self.noise_rise_db(&control),
            signal_drop_db: self.signal_drop_db(&control),
        }
    }

    pub fn passive(&self) -> SurveillanceOutcome {
        self.outcome(Mode::Passive, SidControl::ZERO)
    }

    /// Minimum artificial noise bringing `r0` down to `r1`.
    pub fn noise_jam(&self) -> SurveillanceOutcome {
        let r1 = self.r1();
        if r1 >= self.r0_base() || self.sid_budget_w <= 0.0 {
            return self.outcome(Mode::NoiseJam, SidControl::ZERO);
        }
        let budget = self.sid_budget_w;
        let feasible = |p: f64| self.r0(&SidControl::noise(p)) <= r1;
        if !feasible(budget) {
            return self.outcome(Mode::NoiseJam, SidControl::noise(budget));
        }
        let p = bisect_boundary(budget, 0.0, 0.0, feasible);
        self.outcome(Mode::NoiseJam, SidControl::noise(p))
    }

    /// Full-power constructive forwarding, backed off until the SID can still decode.
    pub fn relay(&self) -> SurveillanceOutcome {
        let r1 = self.r1();
        let budget = self.sid_budget_w;
        if budget <= 0.0 {
            return self.outcome(Mode::Relay, SidControl::ZERO);
        }
        let ctrl = |p: f64| SidControl::forward(Sign::Constructive, p);
        let feasible = |p: f64| {
            if p == 0.0 {
                self.r0_base() <= r1
            } else {
                self.r0(&ctrl(p)) <= r1
            }
        };
        if feasible(budget) {
            return self.outcome(Mode::Relay, ctrl(budget));
        }
        if !feasible(0.0) {
            // forwarding only raises r0, decoding is out of reach
            return self.outcome(Mode::Relay, SidControl::ZERO);
        }
        let p = bisect_boundary(0.0, budget, 0.0, feasible);
        self.outcome(Mode::Relay, ctrl(p))
    }

    /// Maximizes `r_eav` over both combining signs and every power split.
    ///
    /// The reachable `r0` values form an interval `[r0_min, r0_max]` (the
    /// control set is connected and `r0` continuous), so the optimum is
    /// `min(r1, r0_max)` when `r0_min <= r1` and zero otherwise. Constructive
    /// forwarding reaches the top of that interval and destructive forwarding
    /// the bottom; only one side matters, depending on whether the SID decodes
    /// unaided. Extremes come from a coarse simplex grid refined by compass
    /// search, and among controls reaching the optimum the least total power
    /// is kept.
    pub fn auto(&self) -> SurveillanceOutcome {
        let control = if self.r0_base() <= self.r1() {
            self.best_constructive()
        } else {
            self.best_destructive()
        };
        self.outcome(Mode::classify(&control), control)
    }

    /// Least-power constructive control maximizing `r_eav` when the SID already decodes.
    ///
    /// Zero when the SID cannot decode at `P_f = 0`, since forwarding only raises `r0` there.
    pub fn best_constructive(&self) -> SidControl {
        let r1 = self.r1();
        let base = self.r0_base();
        if self.sid_budget_w <= 0.0 || base > r1 {
            return SidControl::ZERO;
        }
        let (max_ctrl, r0_max) = self.extreme_r0(Sign::Constructive, 1.0);
        if r0_max <= r1 {
            if r0_max > base {
                max_ctrl
            } else {
                SidControl::ZERO
            }
        } else {
            self.least_relay_power_to(r1)
        }
    }

    /// Least-power destructive control pulling `r0` down to `r1`.
    ///
    /// Zero when the SID already decodes or when even the strongest jamming falls short.
    pub fn best_destructive(&self) -> SidControl {
        let r1 = self.r1();
        if self.sid_budget_w <= 0.0 || self.r0_base() <= r1 {
            return SidControl::ZERO;
        }
        let (min_ctrl, neg_r0_min) = self.extreme_r0(Sign::Destructive, -1.0);
        if -neg_r0_min > r1 {
            SidControl::ZERO
        } else {
            self.least_jam_power_to(r1, min_ctrl)
        }
    }

    fn ctrl(sign: Sign, u: f64, v: f64) -> SidControl {
        SidControl {
            sign,
            forward_power_w: u,
            noise_power_w: v,
        }
    }

    /// Grid plus compass search for the largest `dir * r0` with the given sign.
    pub(crate) fn extreme_r0(&self, sign: Sign, dir: f64) -> (SidControl, f64) {
        let budget = self.sid_budget_w;
        let n = AUTO_GRID;
        let eval = |u: f64, v: f64| {
            let c = Self::ctrl(sign, u, v);
            dir * if c.is_zero() { self.r0_base() } else { self.r0(&c) }
        };
        let mut best = ((0.0, 0.0), eval(0.0, 0.0));
        for i in 0..=n {
            for j in 0..=(n - i) {
                let (u, v) = (budget * i as f64 / n as f64, budget * j as f64 / n as f64);
                let val = eval(u, v);
                if val > best.1 {
                    best = ((u, v), val);
                }
            }
        }
        let ((u, v), val) = compass_max_simplex(best.0, budget, budget / n as f64, POWER_TOL_W, 0.0, eval);
        (Self::ctrl(sign, u, v), val)
    }

    fn least_relay_power_to(&self, r1: f64) -> SidControl {
        // r0 rises from base along the forwarding axis; first crossing is the least power
        let budget = self.sid_budget_w;
        let r0 = |p: f64| {
            if p == 0.0 {
                self.r0_base()
            } else {
                self.r0(&SidControl::forward(Sign::Constructive, p))
            }
        };
        let steps = 4 * AUTO_GRID;
        let mut prev = 0.0;
        for k in 1..=steps {
            let p = budget * k as f64 / steps as f64;
            if r0(p) > r1 {
                let p = bisect_boundary(prev, p, 0.0, |q| r0(q) <= r1);
                return SidControl::forward(Sign::Constructive, p);
            }
            prev = p;
        }
        let (p, _) = golden_max(0.0, budget, POWER_TOL_W, r0);
        let p = bisect_boundary(0.0, p, 0.0, |q| r0(q) <= r1);
        SidControl::forward(Sign::Constructive, p)
    }

    /// Least total power on a destructive ray that pulls `r0` down to `r1`.
    fn least_jam_power_to(&self, r1: f64, min_ctrl: SidControl) -> SidControl {
        let budget = self.sid_budget_w;
        let ray = |theta: f64, t: f64| Self::ctrl(Sign::Destructive, t * (1.0 - theta), t * theta);
        let feasible = |c: &SidControl| !c.is_zero() && self.r0(c) <= r1;
        let crossing = |theta: f64, t_max: f64| -> Option<f64> {
            let steps = 4 * AUTO_GRID;
            let mut prev = 0.0;
            for k in 1..=steps {
                let t = t_max * k as f64 / steps as f64;
                if feasible(&ray(theta, t)) {
                    return Some(bisect_boundary(t, prev, POWER_TOL_W, |s| feasible(&ray(theta, s))));
                }
                prev = t;
            }
            None
        };

        let mut best: Option<(f64, f64)> = None; // (total power, theta)
        let mut consider = |theta: f64, t: Option<f64>| {
            if let Some(t) = t {
                if best.is_none_or(|(bt, _)| t < bt) {
                    best = Some((t, theta));
                }
            }
        };

        // the ray through the minimizing control always crosses
        let t_min = min_ctrl.total_power_w();
        if t_min > 0.0 {
            let theta = min_ctrl.noise_power_w / t_min;
            let t = bisect_boundary(t_min, 0.0, POWER_TOL_W, |s| feasible(&ray(theta, s)));
            consider(theta, Some(t));
        }
        let thetas: Vec<f64> = (0..=AUTO_GRID).map(|k| k as f64 / AUTO_GRID as f64).collect();
        for &theta in &thetas {
            consider(theta, crossing(theta, budget));
        }
        let (mut t_best, mut theta_best) = best.expect("a feasible destructive control exists when r0_min <= r1");

        let lo = (theta_best - 1.0 / AUTO_GRID as f64).max(0.0);
        let hi = (theta_best + 1.0 / AUTO_GRID as f64).min(1.0);
        let (theta, neg_t) = golden_max(lo, hi, 1e-9, |th| {
            crossing(th, t_best.min(budget)).map_or(f64::NEG_INFINITY, |t| -t)
        });
        if -neg_t < t_best {
            t_best = -neg_t;
            theta_best = theta;
        }
        let below = (t_best - 2.0 * POWER_TOL_W).max(0.0);
        if !feasible(&ray(theta_best, below)) {
            t_best = bisect_boundary(t_best, below, 0.0, |s| feasible(&ray(theta_best, s)));
        }
        ray(theta_best, t_best)
    }
}

pub(crate) fn clamp_db(db: f64) -> f64 {
    db.clamp(-DB_LIMIT, DB_LIMIT)
}

pub fn passive_eavesdrop(alice: &Node, bob: &Node, sid: &Node, model: &ChannelModel) -> Result<SurveillanceOutcome> {
    Ok(LinkState::new(alice, bob, sid, model)?.passive())
}

pub fn proactive_noise_jam(alice: &Node, bob: &Node, sid: &Node, model: &ChannelModel) -> Result<SurveillanceOutcome> {
    Ok(LinkState::new(alice, bob, sid, model)?.noise_jam())
}

pub fn proactive_relay(alice: &Node, bob: &Node, sid: &Node, model: &ChannelModel) -> Result<SurveillanceOutcome> {
    Ok(LinkState::new(alice, bob, sid, model)?.relay())
}

pub fn proactive_auto(alice: &Node, bob: &Node, sid: &Node, model: &ChannelModel) -> Result<SurveillanceOutcome> {
    Ok(LinkState::new(alice, bob, sid, model)?.auto())
}

/// One suspicious link with one SID, the unit every sweep runs on.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkScenario {
    pub alice: Node,
    pub bob: Node,
    pub sid: Node,
    pub model: ChannelModel,
}

impl LinkScenario {
    /// Copy with the SID placed `x` meters from Alice along the Alice-to-Bob axis.
    pub fn with_sid_on_axis(&self, x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::invalid(format!("non-finite sweep position {x}")));
        }
        let (a, b) = (self.alice.position, self.bob.position);
        let len = a.distance(&b);
        if len == 0.0 {
            return Err(Error::invalid("Alice and Bob are colocated, the axis is undefined"));
        }
        let (ux, uy) = ((b.x - a.x) / len, (b.y - a.y) / len);
        Ok(Self {
            sid: self.sid.with_position(a.x + x * ux, a.y + x * uy),
            ..self.clone()
        })
    }

    pub fn state(&self) -> Result<LinkState> {
        LinkState::new(&self.alice, &self.bob, &self.sid, &self.model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EavesdropRow {
    pub x: f64,
    pub passive: f64,
    pub proactive: f64,
}

/// Passive and proactive (unified optimizer) eavesdropping rates along the axis.
pub fn sweep_eavesdropping(x_values: &[f64], scenario: &LinkScenario) -> Result<Vec<EavesdropRow>> {
    if x_values.is_empty() {
        return Err(Error::invalid("empty sweep"));
    }
    x_values
        .par_iter()
        .map(|&x| {
            let state = scenario.with_sid_on_axis(x)?.state()?;
            Ok(EavesdropRow {
                x,
                passive: state.passive().r_eav,
                proactive: state.auto().r_eav,
            })
        })
        .collect()
}
