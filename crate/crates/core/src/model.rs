//! Geometry, pathloss and rate primitives.
//!
//! Powers are carried in dBm at the node level and converted to watts with the
//! exact `10^(x/10)` law. The channel is deterministic distance-based pathloss
//! anchored at a reference distance:
//!
//! ```text
//! gain(d) = 10^(L_ref/10) * (max(d, d_min) / d_ref)^(-n)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planar position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::invalid(format!("non-finite position ({x}, {y})")));
        }
        Ok(Self { x, y })
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Distance-based pathloss law with a reference anchor and a minimum-distance clamp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub pathloss_exponent: f64,
    pub reference_loss_db: f64,
    pub reference_distance: f64,
    pub min_distance: f64,
}

impl Default for ChannelModel {
    fn default() -> Self {
        Self {
            pathloss_exponent: 3.0,
            reference_loss_db: -60.0,
            reference_distance: 10.0,
            min_distance: 1.0,
        }
    }
}

impl ChannelModel {
    pub fn new(
        pathloss_exponent: f64,
        reference_loss_db: f64,
        reference_distance: f64,
        min_distance: f64,
    ) -> Result<Self> {
        let model = Self {
            pathloss_exponent,
            reference_loss_db,
            reference_distance,
            min_distance,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pathloss_exponent.is_finite() && self.pathloss_exponent > 0.0) {
            return Err(Error::field("channel.exponent", "must be finite and > 0"));
        }
        if !self.reference_loss_db.is_finite() {
            return Err(Error::field("channel.reference_loss_db", "must be finite"));
        }
        if !(self.reference_distance.is_finite() && self.reference_distance > 0.0) {
            return Err(Error::field("channel.reference_distance", "must be finite and > 0"));
        }
        if !(self.min_distance.is_finite() && self.min_distance > 0.0) {
            return Err(Error::field("channel.min_distance", "must be finite and > 0"));
        }
        Ok(())
    }

    /// Linear power gain at distance `d` meters.
    pub fn gain(&self, d: f64) -> Result<f64> {
        pathloss_gain(self, d)
    }
}

/// Linear power gain of `model` at distance `d` meters.
///
/// Distances below `min_distance` are clamped, so colocated nodes see a finite gain.
pub fn pathloss_gain(model: &ChannelModel, d: f64) -> Result<f64> {
    if !d.is_finite() || d < 0.0 {
        return Err(Error::invalid(format!("distance must be finite and >= 0, got {d}")));
    }
    let d = d.max(model.min_distance);
    Ok(db_to_linear(model.reference_loss_db) * (d / model.reference_distance).powf(-model.pathloss_exponent))
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10 log10(v)`. Zero maps to `-inf`; callers that emit tables clamp it.
pub fn linear_to_db(v: f64) -> f64 {
    10.0 * v.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm) * 1e-3
}

pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w * 1e3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    SuspiciousTx,
    SuspiciousRx,
    Sid,
    LegitimateRx,
}

impl Role {
    pub fn transmits(self) -> bool {
        matches!(self, Role::SuspiciousTx | Role::Sid)
    }
}

/// A positioned radio terminal.
///
/// `tx_power_dbm = -inf` stands for a node that never transmits (zero watts).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub position: Position,
    pub role: Role,
    pub tx_power_dbm: f64,
    pub noise_power_dbm: f64,
}

impl Node {
    pub fn new(
        id: impl Into<String>,
        role: Role,
        x: f64,
        y: f64,
        tx_power_dbm: f64,
        noise_power_dbm: f64,
    ) -> Result<Self> {
        let node = Self {
            id: id.into(),
            position: Position::new(x, y)?,
            role,
            tx_power_dbm,
            noise_power_dbm,
        };
        node.validate()?;
        Ok(node)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.position.x.is_finite() || !self.position.y.is_finite() {
            return Err(Error::field(format!("nodes.{}.position", self.id), "must be finite"));
        }
        if !self.noise_power_dbm.is_finite() {
            return Err(Error::field(format!("nodes.{}.noise_dbm", self.id), "must be finite"));
        }
        if self.tx_power_dbm.is_nan() || self.tx_power_dbm == f64::INFINITY {
            return Err(Error::field(
                format!("nodes.{}.tx_dbm", self.id),
                "must be finite or -inf",
            ));
        }
        Ok(())
    }

    pub fn tx_power_w(&self) -> f64 {
        dbm_to_watts(self.tx_power_dbm)
    }

    pub fn noise_power_w(&self) -> f64 {
        dbm_to_watts(self.noise_power_dbm)
    }

    pub fn distance_to(&self, other: &Node) -> f64 {
        self.position.distance(&other.position)
    }

    pub fn with_position(&self, x: f64, y: f64) -> Self {
        Self {
            position: Position { x, y },
            ..self.clone()
        }
    }
}

/// Received power and SNR of one transmitter at one receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub gain: f64,
    pub rx_power_w: f64,
    pub snr: f64,
}

pub fn link_snr(tx: &Node, rx: &Node, model: &ChannelModel) -> Result<LinkBudget> {
    if tx.id == rx.id {
        return Err(Error::invalid(format!("link from `{}` to itself", tx.id)));
    }
    tx.validate()?;
    rx.validate()?;
    let gain = pathloss_gain(model, tx.distance_to(rx))?;
    let rx_power_w = tx.tx_power_w() * gain;
    Ok(LinkBudget {
        gain,
        rx_power_w,
        snr: rx_power_w / rx.noise_power_w(),
    })
}

/// Shannon capacity `log2(1 + snr)` in bps/Hz.
pub fn capacity(snr: f64) -> Result<f64> {
    if snr.is_nan() || snr < 0.0 {
        return Err(Error::invalid(format!("snr must be >= 0, got {snr}")));
    }
    Ok(snr.ln_1p() / std::f64::consts::LN_2)
}

/// `capacity` for values already known to be non-negative.
pub(crate) fn cap(snr: f64) -> f64 {
    debug_assert!(snr >= 0.0, "snr {snr}");
    snr.max(0.0).ln_1p() / std::f64::consts::LN_2
}

pub fn sinr(signal_w: f64, interference_w: &[f64], noise_w: f64) -> Result<f64> {
    if !(noise_w.is_finite() && noise_w > 0.0) {
        return Err(Error::invalid(format!("noise power must be > 0, got {noise_w}")));
    }
    if signal_w.is_nan() || signal_w < 0.0 || interference_w.iter().any(|i| i.is_nan() || *i < 0.0) {
        return Err(Error::invalid("signal and interference powers must be >= 0"));
    }
    Ok(signal_w / (noise_w + interference_w.iter().sum::<f64>()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn alice() -> Node {
        Node::new("alice", Role::SuspiciousTx, 0.0, 0.0, 43.0, -80.0).unwrap()
    }

    fn bob() -> Node {
        Node::new("bob", Role::SuspiciousRx, 0.0, 500.0, 43.0, -80.0).unwrap()
    }

    #[test]
    fn gain_anchors() {
        let m = ChannelModel::default();
        assert!(rel(pathloss_gain(&m, 10.0).unwrap(), 1e-6) < 1e-12);
        assert!(rel(pathloss_gain(&m, 500.0).unwrap(), 8e-12) < 1e-12);
        assert!(rel(pathloss_gain(&m, 0.0).unwrap(), 1e-3) < 1e-12);
        assert_eq!(pathloss_gain(&m, 0.5).unwrap(), pathloss_gain(&m, 1.0).unwrap());
    }

    #[test]
    fn gain_rejects_bad_distance() {
        let m = ChannelModel::default();
        assert!(pathloss_gain(&m, f64::NAN).is_err());
        assert!(pathloss_gain(&m, f64::INFINITY).is_err());
        assert!(pathloss_gain(&m, -1.0).is_err());
    }

    #[test]
    fn channel_model_invariants() {
        assert!(ChannelModel::new(0.0, -60.0, 10.0, 1.0).is_err());
        assert!(ChannelModel::new(3.0, -60.0, 0.0, 1.0).is_err());
        assert!(ChannelModel::new(3.0, -60.0, 10.0, 0.0).is_err());
        assert!(ChannelModel::new(3.0, -60.0, 10.0, 1.0).is_ok());
    }

    #[test]
    fn power_conversions() {
        assert!(rel(dbm_to_watts(43.0), 19.952_623_149_688_8) < 1e-12);
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!(rel(dbm_to_watts(-80.0), 1e-11) < 1e-12);
        assert_eq!(linear_to_db(0.0), f64::NEG_INFINITY);
        assert_eq!(dbm_to_watts(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn baseline_link() {
        let m = ChannelModel::default();
        let b = link_snr(&alice(), &bob(), &m).unwrap();
        assert!((b.snr - 15.962).abs() < 1e-3, "{}", b.snr);
        assert!((linear_to_db(b.snr) - 12.03).abs() < 0.01);
        assert!((capacity(b.snr).unwrap() - 4.084).abs() < 1e-3);
        assert!(rel(b.snr, b.rx_power_w / bob().noise_power_w()) < 1e-15);
    }

    #[test]
    fn alice_to_sid_at_230() {
        let m = ChannelModel::default();
        let sid = Node::new("sid", Role::Sid, 0.0, 230.0, 43.0, -80.0).unwrap();
        let b = link_snr(&alice(), &sid, &m).unwrap();
        let expect = 19.952_623_149_688_8 * (1e-6 / 12167.0) / 1e-11;
        assert!(rel(b.snr, expect) < 1e-12);
        assert!((b.snr - 164.0).abs() < 0.5);
    }

    #[test]
    fn silent_transmitter_and_self_link() {
        let m = ChannelModel::default();
        let mut quiet = alice();
        quiet.tx_power_dbm = f64::NEG_INFINITY;
        assert_eq!(link_snr(&quiet, &bob(), &m).unwrap().snr, 0.0);
        assert!(link_snr(&alice(), &alice(), &m).is_err());
    }

    #[test]
    fn node_validation() {
        assert!(Node::new("n", Role::Sid, f64::NAN, 0.0, 43.0, -80.0).is_err());
        assert!(Node::new("n", Role::Sid, 0.0, 0.0, 43.0, f64::NEG_INFINITY).is_err());
        assert!(Node::new("n", Role::Sid, 0.0, 0.0, f64::NAN, -80.0).is_err());
    }

    #[test]
    fn capacity_anchors() {
        assert!((capacity(15.96).unwrap() - 4.08).abs() < 5e-3);
        assert_eq!(capacity(0.0).unwrap(), 0.0);
        assert!((capacity(63.85).unwrap() - 6.02).abs() < 5e-3);
        assert!(capacity(-1.0).is_err());
    }

    #[test]
    fn sinr_cases() {
        assert_eq!(sinr(1.0, &[], 1.0).unwrap(), 1.0);
        assert!((sinr(1.6e-10, &[1.6e-10], 1e-11).unwrap() - 0.941).abs() < 1e-3);
        assert_eq!(sinr(0.0, &[3.0], 1.0).unwrap(), 0.0);
        assert!(sinr(1.0, &[], 0.0).is_err());
        assert!(sinr(-1.0, &[], 1.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn db_roundtrip(db in -200.0f64..200.0) {
                let v = db_to_linear(db);
                prop_assert!(((linear_to_db(v) - db) / db.abs().max(1.0)).abs() < 1e-12);
                prop_assert!(rel(db_to_linear(linear_to_db(v)), v) < 1e-12);
            }

            #[test]
            fn gain_strictly_decreasing(d in 1.0f64..1e5, step in 1e-3f64..100.0) {
                let m = ChannelModel::default();
                prop_assert!(pathloss_gain(&m, d + step).unwrap() < pathloss_gain(&m, d).unwrap());
            }

            #[test]
            fn gain_flat_inside_clamp(d in 0.0f64..1.0) {
                let m = ChannelModel::default();
                prop_assert_eq!(pathloss_gain(&m, d).unwrap(), pathloss_gain(&m, 1.0).unwrap());
            }

            #[test]
            fn capacity_monotone(a in 0.0f64..1e9, b in 0.0f64..1e9) {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                prop_assert!(capacity(lo).unwrap() <= capacity(hi).unwrap());
            }
        }
    }
}
