//! Cut-set upper envelopes with full cooperation and coherent combining.

use super::{optimize, Bound, OptimizerArgs, RatePoint, Scheme};
use crate::error::Result;
use crate::lattice_core::cap;
use crate::relay_schemes::params::{MarcParams, RelayParams, TwoRelayParams, TwrcParams};

fn cutset(coordinates: Vec<f64>, args: OptimizerArgs) -> RatePoint {
    RatePoint {
        scheme: Scheme::Cutset,
        bound: Bound::Cutset,
        coordinates,
        args,
    }
}

/// `max_ρ min{C((1 − ρ²) P (1/N_R + 1/N_D)), C((P + P_R + 2ρ√(P P_R))/N_D)}`.
pub fn cutset_relay(p: &RelayParams) -> Result<RatePoint> {
    p.validate()?;
    // in u = 1 - ρ² the broadcast cut increases and the MAC cut decreases
    let (u, r) = optimize::crossing_max(
        |u| cap(u * p.p * (1.0 / p.n_r + 1.0 / p.n_d)),
        |u| cap((p.p + p.p_r + 2.0 * ((1.0 - u) * p.p * p.p_r).sqrt()) / p.n_d),
        0.0,
        1.0,
    );
    let rho = (1.0 - u).sqrt();
    Ok(cutset(
        vec![r],
        OptimizerArgs {
            rho: Some(rho),
            ..Default::default()
        },
    ))
}

/// Broadcast cut around the source and MAC cut around the destination:
/// `min(C(P₁(1/N₂ + 1/N₃ + 1/N₄)), C((√P₁ + √P₂ + √P₃)²/N₄))`.
pub fn cutset_two_relay(p: &TwoRelayParams) -> Result<RatePoint> {
    p.validate()?;
    let bc = cap(p.p1 * (1.0 / p.n2 + 1.0 / p.n3 + 1.0 / p.n4));
    let mac = cap((p.p1.sqrt() + p.p2.sqrt() + p.p3.sqrt()).powi(2) / p.n4);
    Ok(cutset(vec![bc.min(mac)], OptimizerArgs::default()))
}

/// Per user: `R₁ ≤ min(C(P₁/N_R + h₁₂² P₁/N₂), C((|h₁₂|√P₁ + √P_R)²/N₂))`,
/// and symmetrically for user 2.
pub fn cutset_twrc(p: &TwrcParams) -> Result<RatePoint> {
    p.validate()?;
    let one = |pi: f64, h: f64, nj: f64| {
        let bc = cap(pi / p.n_r + h * h * pi / nj);
        let mac = cap((h.abs() * pi.sqrt() + p.p_r.sqrt()).powi(2) / nj);
        bc.min(mac)
    };
    Ok(cutset(
        vec![one(p.p1, p.h12, p.n2), one(p.p2, p.h21, p.n1)],
        OptimizerArgs::default(),
    ))
}

/// Per user: `R_i ≤ min(C(P_i(1/N_R + 1/N_D)), C((√P_i + √P_R)²/N_D))`.
pub fn cutset_marc(p: &MarcParams) -> Result<RatePoint> {
    p.validate()?;
    let one = |pi: f64| {
        let bc = cap(pi * (1.0 / p.n_r + 1.0 / p.n_d));
        let mac = cap((pi.sqrt() + p.p_r.sqrt()).powi(2) / p.n_d);
        bc.min(mac)
    };
    Ok(cutset(vec![one(p.p1), one(p.p2)], OptimizerArgs::default()))
}
