use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single relay: `Y_R = X_S + Z_R`, `Y_D = X_S + X_R + Z_D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelayParams {
    pub p: f64,
    pub p_r: f64,
    pub n_r: f64,
    pub n_d: f64,
}

/// Source 1 with relays 2 and 3 and destination 4; node `i` hears noise `N_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoRelayParams {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub n2: f64,
    pub n3: f64,
    pub n4: f64,
}

/// Two-way relay with direct links:
/// `Y_1 = X_R + h21 X_2 + Z_1`, `Y_2 = X_R + h12 X_1 + Z_2`, `Y_R = X_1 + X_2 + Z_R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwrcParams {
    pub p1: f64,
    pub p2: f64,
    pub p_r: f64,
    pub n_r: f64,
    pub n1: f64,
    pub n2: f64,
    pub h12: f64,
    pub h21: f64,
}

/// Multiple-access relay: `Y_R = X_1 + X_2 + Z_R`, `Y_D = X_1 + X_2 + X_R + Z_D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarcParams {
    pub p1: f64,
    pub p2: f64,
    pub p_r: f64,
    pub n_r: f64,
    pub n_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Relay,
    TwoRelay,
    Twrc,
    Marc,
}

impl Topology {
    pub fn as_str(&self) -> &'static str {
        match self {
            Topology::Relay => "relay",
            Topology::TwoRelay => "two_relay",
            Topology::Twrc => "twrc",
            Topology::Marc => "marc",
        }
    }
}

/// Parameters of one network, tagged by `"topology"` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "topology", rename_all = "snake_case")]
pub enum ChannelParams {
    Relay(RelayParams),
    TwoRelay(TwoRelayParams),
    Twrc(TwrcParams),
    Marc(MarcParams),
}

fn power(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("powers must be finite and nonnegative, got {v}")))
    }
}

fn noise(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("noise variances must be finite and positive, got {v}")))
    }
}

fn gain(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, "gains must be finite"))
    }
}

impl RelayParams {
    pub fn validate(&self) -> Result<()> {
        power("p", self.p)?;
        power("p_r", self.p_r)?;
        noise("n_r", self.n_r)?;
        noise("n_d", self.n_d)
    }
}

impl TwoRelayParams {
    pub fn validate(&self) -> Result<()> {
        power("p1", self.p1)?;
        power("p2", self.p2)?;
        power("p3", self.p3)?;
        noise("n2", self.n2)?;
        noise("n3", self.n3)?;
        noise("n4", self.n4)
    }
}

impl TwrcParams {
    pub fn validate(&self) -> Result<()> {
        power("p1", self.p1)?;
        power("p2", self.p2)?;
        power("p_r", self.p_r)?;
        noise("n_r", self.n_r)?;
        noise("n1", self.n1)?;
        noise("n2", self.n2)?;
        gain("h12", self.h12)?;
        gain("h21", self.h21)
    }

    /// The same network seen with the terminals relabelled.
    pub fn swapped(&self) -> Self {
        TwrcParams {
            p1: self.p2,
            p2: self.p1,
            p_r: self.p_r,
            n_r: self.n_r,
            n1: self.n2,
            n2: self.n1,
            h12: self.h21,
            h21: self.h12,
        }
    }
}

impl MarcParams {
    pub fn validate(&self) -> Result<()> {
        power("p1", self.p1)?;
        power("p2", self.p2)?;
        power("p_r", self.p_r)?;
        noise("n_r", self.n_r)?;
        noise("n_d", self.n_d)
    }

    pub fn swapped(&self) -> Self {
        MarcParams {
            p1: self.p2,
            p2: self.p1,
            ..*self
        }
    }
}

impl ChannelParams {
    pub fn topology(&self) -> Topology {
        match self {
            ChannelParams::Relay(_) => Topology::Relay,
            ChannelParams::TwoRelay(_) => Topology::TwoRelay,
            ChannelParams::Twrc(_) => Topology::Twrc,
            ChannelParams::Marc(_) => Topology::Marc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelParams::Relay(p) => p.validate(),
            ChannelParams::TwoRelay(p) => p.validate(),
            ChannelParams::Twrc(p) => p.validate(),
            ChannelParams::Marc(p) => p.validate(),
        }
    }

    /// Field names and values in declaration order.
    pub fn fields(&self) -> Vec<(&'static str, f64)> {
        match *self {
            ChannelParams::Relay(p) => vec![("p", p.p), ("p_r", p.p_r), ("n_r", p.n_r), ("n_d", p.n_d)],
            ChannelParams::TwoRelay(p) => vec![
                ("p1", p.p1),
                ("p2", p.p2),
                ("p3", p.p3),
                ("n2", p.n2),
                ("n3", p.n3),
                ("n4", p.n4),
            ],
            ChannelParams::Twrc(p) => vec![
                ("p1", p.p1),
                ("p2", p.p2),
                ("p_r", p.p_r),
                ("n_r", p.n_r),
                ("n1", p.n1),
                ("n2", p.n2),
                ("h12", p.h12),
                ("h21", p.h21),
            ],
            ChannelParams::Marc(p) => vec![
                ("p1", p.p1),
                ("p2", p.p2),
                ("p_r", p.p_r),
                ("n_r", p.n_r),
                ("n_d", p.n_d),
            ],
        }
    }

    /// Sets the field `name` to `value`.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot: Option<&mut f64> = match self {
            ChannelParams::Relay(p) => match name {
                "p" => Some(&mut p.p),
                "p_r" => Some(&mut p.p_r),
                "n_r" => Some(&mut p.n_r),
                "n_d" => Some(&mut p.n_d),
                _ => None,
            },
            ChannelParams::TwoRelay(p) => match name {
                "p1" => Some(&mut p.p1),
                "p2" => Some(&mut p.p2),
                "p3" => Some(&mut p.p3),
                "n2" => Some(&mut p.n2),
                "n3" => Some(&mut p.n3),
                "n4" => Some(&mut p.n4),
                _ => None,
            },
            ChannelParams::Twrc(p) => match name {
                "p1" => Some(&mut p.p1),
                "p2" => Some(&mut p.p2),
                "p_r" => Some(&mut p.p_r),
                "n_r" => Some(&mut p.n_r),
                "n1" => Some(&mut p.n1),
                "n2" => Some(&mut p.n2),
                "h12" => Some(&mut p.h12),
                "h21" => Some(&mut p.h21),
                _ => None,
            },
            ChannelParams::Marc(p) => match name {
                "p1" => Some(&mut p.p1),
                "p2" => Some(&mut p.p2),
                "p_r" => Some(&mut p.p_r),
                "n_r" => Some(&mut p.n_r),
                "n_d" => Some(&mut p.n_d),
                _ => None,
            },
        };
        match slot {
            Some(s) => {
                *s = value;
                Ok(())
            }
            None => Err(Error::param(
                name,
                format!("not a parameter of the {} topology", self.topology().as_str()),
            )),
        }
    }
}
