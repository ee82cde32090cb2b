//! Closed-form achievable rates, cut-set envelopes and parameter sweeps.
//!
//! All rates are in bits per real channel use. `C(x) = ½ log₂(1 + x)`.

pub mod cutset;
pub mod optimize;
pub mod sweep;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_core::cap;
use crate::relay_schemes::params::{MarcParams, RelayParams, TwoRelayParams, TwrcParams};

pub use cutset::{cutset_marc, cutset_relay, cutset_two_relay, cutset_twrc};
pub use sweep::{rate_points, region_sweep, write_csv, ParamRange, SweepRow, SweepSpec};

/// Which expression produced a [`RatePoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Df,
    TwoRelayDf,
    Twrc,
    Marc,
    Cf,
    Cutset,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Df => "df",
            Scheme::TwoRelayDf => "two_relay_df",
            Scheme::Twrc => "twrc",
            Scheme::Marc => "marc",
            Scheme::Cf => "cf",
            Scheme::Cutset => "cutset",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Achievable,
    Cutset,
}

/// Maximizing arguments and side quantities of a rate expression.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct OptimizerArgs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
    /// Relay order `(π(2), π(3))`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<[u8; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_share: Option<f64>,
    /// Cut-set correlation `ρ` between source and relay.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Smallest feasible compress-and-forward distortion.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distortion: Option<f64>,
}

/// A rate (single user) or rate pair with the arguments that attain it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub scheme: Scheme,
    pub bound: Bound,
    pub coordinates: Vec<f64>,
    pub args: OptimizerArgs,
}

impl RatePoint {
    fn achievable(scheme: Scheme, coordinates: Vec<f64>, args: OptimizerArgs) -> Self {
        RatePoint {
            scheme,
            bound: Bound::Achievable,
            coordinates,
            args,
        }
    }
}

fn unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::param(name, format!("must lie in [0, 1], got {v}")))
    }
}

/// The two decode-and-forward terms at power split `alpha`:
/// `C(αP/N_R)` and `C((P + P_R + 2√(ᾱ P P_R))/N_D)`.
pub fn df_terms(p: &RelayParams, alpha: f64) -> (f64, f64) {
    let ab = 1.0 - alpha;
    (
        cap(alpha * p.p / p.n_r),
        cap((p.p + p.p_r + 2.0 * (ab * p.p * p.p_r).sqrt()) / p.n_d),
    )
}

pub fn df_rate_at(p: &RelayParams, alpha: f64) -> Result<f64> {
    p.validate()?;
    unit("alpha", alpha)?;
    let (a, b) = df_terms(p, alpha);
    Ok(a.min(b))
}

/// Decode-and-forward rate maximized over the power split.
pub fn df_rate(p: &RelayParams) -> Result<RatePoint> {
    p.validate()?;
    let (alpha, r) = optimize::grid_golden_max(
        |a| {
            let (x, y) = df_terms(p, a);
            x.min(y)
        },
        0.0,
        1.0,
        1000,
    );
    Ok(RatePoint::achievable(
        Scheme::Df,
        vec![r],
        OptimizerArgs {
            alpha: Some(alpha),
            ..Default::default()
        },
    ))
}

/// The three two-relay terms for relay order `order` (`[2, 3]` or `[3, 2]`).
///
/// The third term reads `√((1 − α₁ − β₁) P₁)` for the power left to the
/// last codebook.
pub fn df_two_relay_terms(p: &TwoRelayParams, a1: f64, b1: f64, a2: f64, order: [u8; 2]) -> [f64; 3] {
    let (na, nb, pa, pb) = if order == [3, 2] {
        (p.n3, p.n2, p.p3, p.p2)
    } else {
        (p.n2, p.n3, p.p2, p.p3)
    };
    let g1 = (1.0 - a1 - b1).max(0.0);
    let s1 = a1 * p.p1;
    let s2 = ((b1 * p.p1).sqrt() + (a2 * pa).sqrt()).powi(2);
    let s3 = ((g1 * p.p1).sqrt() + ((1.0 - a2) * pa).sqrt() + pb.sqrt()).powi(2);
    [cap(s1 / na), cap((s1 + s2) / nb), cap((s1 + s2 + s3) / p.n4)]
}

fn two_relay_min(p: &TwoRelayParams, x: [f64; 3], order: [u8; 2]) -> f64 {
    let t = df_two_relay_terms(p, x[0], x[1], x[2], order);
    t[0].min(t[1]).min(t[2])
}

pub fn df_two_relay_rate_at(p: &TwoRelayParams, a1: f64, b1: f64, a2: f64, order: [u8; 2]) -> Result<f64> {
    p.validate()?;
    unit("alpha1", a1)?;
    unit("beta1", b1)?;
    unit("alpha2", a2)?;
    if a1 + b1 > 1.0 + 1e-12 {
        return Err(Error::param("beta1", "alpha1 + beta1 must not exceed 1"));
    }
    if order != [2, 3] && order != [3, 2] {
        return Err(Error::param("permutation", "relay order must be [2, 3] or [3, 2]"));
    }
    Ok(two_relay_min(p, [a1, b1, a2], order))
}

/// Best point of the grid `{k·step}` on `α₁ + β₁ ≤ 1`, `α₂ ∈ [0, 1]`.
pub fn two_relay_grid_max(p: &TwoRelayParams, order: [u8; 2], steps: usize) -> ([f64; 3], f64) {
    let h = 1.0 / steps as f64;
    let mut best = ([0.0; 3], f64::NEG_INFINITY);
    for i in 0..=steps {
        for j in 0..=steps - i {
            for k in 0..=steps {
                let x = [i as f64 * h, j as f64 * h, k as f64 * h];
                let v = two_relay_min(p, x, order);
                if v > best.1 {
                    best = (x, v);
                }
            }
        }
    }
    best
}

fn two_relay_refine(p: &TwoRelayParams, order: [u8; 2], start: ([f64; 3], f64), h: f64) -> ([f64; 3], f64) {
    // shrinking local grids around the running optimum
    let fine = 20;
    let mut best = start;
    let mut h = h;
    while h > 1e-9 {
        let fh = 2.0 * h / fine as f64;
        let c = best.0;
        for i in 0..=fine {
            let a1 = c[0] - h + i as f64 * fh;
            if !(0.0..=1.0).contains(&a1) {
                continue;
            }
            for j in 0..=fine {
                let b1 = c[1] - h + j as f64 * fh;
                if b1 < 0.0 || a1 + b1 > 1.0 {
                    continue;
                }
                for k in 0..=fine {
                    let a2 = c[2] - h + k as f64 * fh;
                    if !(0.0..=1.0).contains(&a2) {
                        continue;
                    }
                    let v = two_relay_min(p, [a1, b1, a2], order);
                    if v > best.1 {
                        best = ([a1, b1, a2], v);
                    }
                }
            }
        }
        h *= 0.3;
    }
    // line searches along the axes and the pairwise diagonals; the minimum of
    // the terms has ridges that pure coordinate moves cannot follow
    let mut dirs: Vec<[f64; 3]> = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for s in [1.0, -1.0] {
            let mut d = [0.0; 3];
            d[i] = 1.0;
            d[j] = s;
            dirs.push(d);
        }
    }
    let mut x = best.0;
    let mut v = best.1;
    for _ in 0..200 {
        let before = v;
        for d in &dirs {
            let (lo, hi) = feasible_span(x, *d);
            if hi - lo < 1e-15 {
                continue;
            }
            let at = |t: f64| [x[0] + t * d[0], x[1] + t * d[1], x[2] + t * d[2]];
            let (t, tv) = optimize::golden_max(|t| two_relay_min(p, at(t), order), lo, hi);
            if tv > v {
                x = at(t);
                v = tv;
            }
        }
        if v - before < 1e-13 {
            break;
        }
    }
    (x, v)
}

/// Range of `t` keeping `x + t d` in `α₁, β₁ ≥ 0`, `α₁ + β₁ ≤ 1`, `α₂ ∈ [0, 1]`.
fn feasible_span(x: [f64; 3], d: [f64; 3]) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    // constraints a·(x + t d) ≤ b
    let rows: [([f64; 3], f64); 6] = [
        ([-1.0, 0.0, 0.0], 0.0),
        ([0.0, -1.0, 0.0], 0.0),
        ([1.0, 1.0, 0.0], 1.0),
        ([0.0, 0.0, -1.0], 0.0),
        ([0.0, 0.0, 1.0], 1.0),
        ([1.0, 0.0, 0.0], 1.0),
    ];
    for (a, b) in rows {
        let ad: f64 = (0..3).map(|i| a[i] * d[i]).sum();
        let slack = b - (0..3).map(|i| a[i] * x[i]).sum::<f64>();
        if ad > 0.0 {
            hi = hi.min(slack / ad);
        } else if ad < 0.0 {
            lo = lo.max(slack / ad);
        }
    }
    (lo.min(0.0), hi.max(0.0))
}

/// Two-relay decode-and-forward rate maximized over both relay orders and
/// the power splits `(α₁, β₁, α₂)`.
pub fn df_two_relay_rate(p: &TwoRelayParams) -> Result<RatePoint> {
    p.validate()?;
    let steps = 100;
    let mut best: Option<([f64; 3], f64, [u8; 2])> = None;
    for order in [[2u8, 3u8], [3, 2]] {
        let coarse = two_relay_grid_max(p, order, steps);
        let (x, v) = two_relay_refine(p, order, coarse, 1.0 / steps as f64);
        if best.as_ref().is_none_or(|b| v > b.1 + 1e-15) {
            best = Some((x, v, order));
        }
    }
    let (x, v, order) = best.expect("two orders evaluated");
    Ok(RatePoint::achievable(
        Scheme::TwoRelayDf,
        vec![v],
        OptimizerArgs {
            alpha: Some(x[0]),
            beta1: Some(x[1]),
            alpha2: Some(x[2]),
            permutation: Some(order),
            ..Default::default()
        },
    ))
}

/// `[½ log₂(P_i/(P_1 + P_2) + P_i/N_R)]⁺`, the sum-decoding constraint at the relay.
pub fn relay_sum_rate(p_own: f64, p_other: f64, n_r: f64) -> f64 {
    if p_own <= 0.0 {
        return 0.0;
    }
    (0.5 * (p_own / (p_own + p_other) + p_own / n_r).log2()).max(0.0)
}

/// Per-user bounds of the two-way relay region.
pub fn twrc_region(p: &TwrcParams) -> Result<RatePoint> {
    p.validate()?;
    let r1 = relay_sum_rate(p.p1, p.p2, p.n_r).min(cap((p.h12 * p.h12 * p.p1 + p.p_r) / p.n2));
    let r2 = relay_sum_rate(p.p2, p.p1, p.n_r).min(cap((p.h21 * p.h21 * p.p2 + p.p_r) / p.n1));
    Ok(RatePoint::achievable(Scheme::Twrc, vec![r1, r2], OptimizerArgs::default()))
}

/// Per-order corner rates of the multiple-access relay region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarcCorners {
    /// User 1 when decoded first (other signals as noise).
    pub r1_first: f64,
    /// User 1 when decoded second, combining direct and relayed lists.
    pub r1_second: f64,
    pub r2_first: f64,
    pub r2_second: f64,
}

pub fn marc_corners(p: &MarcParams) -> Result<MarcCorners> {
    p.validate()?;
    let s1 = relay_sum_rate(p.p1, p.p2, p.n_r);
    let s2 = relay_sum_rate(p.p2, p.p1, p.n_r);
    Ok(MarcCorners {
        r1_first: s1.min(cap(p.p1 / (p.p2 + p.p_r + p.n_d))),
        r1_second: s1.min(cap((p.p1 + p.p_r) / p.n_d)),
        r2_first: s2.min(cap(p.p2 / (p.p1 + p.p_r + p.n_d))),
        r2_second: s2.min(cap((p.p2 + p.p_r) / p.n_d)),
    })
}

/// Time-shared rate pair; `alpha` is the fraction of time user 1 is decoded first.
pub fn marc_point(p: &MarcParams, alpha: f64) -> Result<RatePoint> {
    unit("time_share", alpha)?;
    let c = marc_corners(p)?;
    let r1 = alpha * c.r1_first + (1.0 - alpha) * c.r1_second;
    let r2 = (1.0 - alpha) * c.r2_first + alpha * c.r2_second;
    Ok(RatePoint::achievable(
        Scheme::Marc,
        vec![r1, r2],
        OptimizerArgs {
            time_share: Some(alpha),
            ..Default::default()
        },
    ))
}

/// Boundary points over a grid of time-sharing parameters.
pub fn marc_region(p: &MarcParams, alpha_grid: &[f64]) -> Result<Vec<RatePoint>> {
    if alpha_grid.is_empty() {
        return Err(Error::param("time_share", "empty grid"));
    }
    alpha_grid.iter().map(|&a| marc_point(p, a)).collect()
}

/// Conditional variance `N₁ + P N₂/(P + N₂)` of `X + Z₁` given `X + Z₂`.
pub fn wz_conditional_variance(p: f64, n1: f64, n2: f64) -> f64 {
    if n2.is_infinite() {
        n1 + p
    } else {
        n1 + p * n2 / (p + n2)
    }
}

/// Lattice Wyner-Ziv rate and the classical rate-distortion value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WzRate {
    /// `½ log₂(1 + σ²/D)`.
    pub lattice: f64,
    /// `[½ log₂(σ²/D)]⁺`.
    pub classical: f64,
}

pub fn wz_rate(p: f64, n1: f64, n2: f64, d: f64) -> Result<WzRate> {
    for (name, v) in [("p", p), ("n1", n1), ("n2", n2), ("d", d)] {
        if !(v > 0.0) {
            return Err(Error::param(name, format!("must be positive, got {v}")));
        }
    }
    if p.is_infinite() || n1.is_infinite() {
        return Err(Error::param("p", "source power and noise must be finite"));
    }
    let s = wz_conditional_variance(p, n1, n2);
    Ok(WzRate {
        lattice: cap(s / d),
        classical: (0.5 * (s / d).log2()).max(0.0),
    })
}

/// Smallest distortion whose Wyner-Ziv index fits the relay-destination link,
/// `(N_R + P N_D/(P + N_D)) (P + N_D)/P_R`; `None` when `P_R = 0`.
pub fn cf_min_distortion(p: &RelayParams) -> Option<f64> {
    if p.p_r > 0.0 {
        Some(wz_conditional_variance(p.p, p.n_r, p.n_d) * (p.p + p.n_d) / p.p_r)
    } else {
        None
    }
}

/// Compress-and-forward rate at distortion `d`, `C(P/N_D + P/(N_R + D))`.
pub fn cf_rate_at_distortion(p: &RelayParams, d: f64) -> Result<f64> {
    p.validate()?;
    match cf_min_distortion(p) {
        Some(m) if d >= m => Ok(cap(p.p / p.n_d + p.p / (p.n_r + d))),
        Some(m) => Err(Error::InfeasibleDistortion {
            requested: d,
            minimum: m,
        }),
        None if d.is_infinite() => Ok(cap(p.p / p.n_d)),
        None => Err(Error::InfeasibleDistortion {
            requested: d,
            minimum: f64::INFINITY,
        }),
    }
}

/// Compress-and-forward rate
/// `½ log₂(1 + P/N_D + P P_R/(P N_R + P N_D + P_R N_R + N_R N_D))`.
pub fn cf_rate(p: &RelayParams) -> Result<RatePoint> {
    p.validate()?;
    let den = p.p * p.n_r + p.p * p.n_d + p.p_r * p.n_r + p.n_r * p.n_d;
    let r = cap(p.p / p.n_d + p.p * p.p_r / den);
    Ok(RatePoint::achievable(
        Scheme::Cf,
        vec![r],
        OptimizerArgs {
            min_distortion: cf_min_distortion(p),
            ..Default::default()
        },
    ))
}
