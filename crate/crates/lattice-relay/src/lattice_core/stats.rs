use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Lattice;
use crate::error::{Error, Result};

/// Monte-Carlo moments of a Voronoi region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoronoiStats {
    /// Per-dimension second moment.
    pub second_moment: f64,
    pub normalized_second_moment: f64,
    pub r_eff: f64,
    /// Largest sample norm, floored at `r_eff` (no region of volume `V`
    /// fits in a ball smaller than the effective ball).
    pub r_cov_estimate: f64,
    pub sample_count: usize,
}

impl VoronoiStats {
    /// `r_cov / r_eff`.
    pub fn rogers_ratio(&self) -> f64 {
        self.r_cov_estimate / self.r_eff
    }
}

/// Volume of the unit ball in `n` dimensions.
pub fn unit_ball_volume(n: usize) -> f64 {
    let mut v = if n.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = 2 + n % 2;
    while k <= n {
        v *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    v
}

/// Radius of the ball whose volume equals the lattice cell volume.
pub fn effective_radius(lat: &Lattice) -> f64 {
    let n = lat.dim();
    (lat.volume() / unit_ball_volume(n)).powf(1.0 / n as f64)
}

/// Monte-Carlo Voronoi statistics from `n_samples` uniform samples.
pub fn voronoi_stats<R: Rng + ?Sized>(lat: &Lattice, n_samples: usize, rng: &mut R) -> Result<VoronoiStats> {
    if n_samples < 1000 {
        return Err(Error::param("n_samples", "at least 1000 samples are required"));
    }
    let n = lat.dim();
    let mut sum = 0.0;
    let mut max_sq: f64 = 0.0;
    for _ in 0..n_samples {
        let x = lat.sample_voronoi_uniform(rng);
        let sq: f64 = x.iter().map(|v| v * v).sum();
        sum += sq;
        max_sq = max_sq.max(sq);
    }
    let second_moment = sum / (n_samples as f64 * n as f64);
    let r_eff = effective_radius(lat);
    Ok(VoronoiStats {
        second_moment,
        normalized_second_moment: second_moment / lat.volume().powf(2.0 / n as f64),
        r_eff,
        r_cov_estimate: max_sq.sqrt().max(r_eff),
        sample_count: n_samples,
    })
}

/// `C(x) = 1/2 log2(1 + x)`.
pub fn capacity_c(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::param("x", format!("capacity argument must be nonnegative, got {x}")));
    }
    Ok(0.5 * (1.0 + x).log2())
}

/// `C(x)` for arguments already known to be nonnegative; negative round-off is clamped.
pub(crate) fn cap(x: f64) -> f64 {
    0.5 * (1.0 + x.max(0.0)).log2()
}

/// The three closed forms of the Poltyrev exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoltyrevBranch {
    /// `1 < mu <= 2`
    Low,
    /// `2 <= mu <= 4`
    Middle,
    /// `mu >= 4`
    High,
}

/// Evaluates one branch formula at `mu` regardless of its domain.
pub fn poltyrev_branch(branch: PoltyrevBranch, mu: f64) -> f64 {
    match branch {
        PoltyrevBranch::Low => 0.5 * ((mu - 1.0) - mu.ln()),
        PoltyrevBranch::Middle => 0.5 * (std::f64::consts::E * mu / 4.0).ln(),
        PoltyrevBranch::High => mu / 8.0,
    }
}

/// Poltyrev error exponent in nats, zero for `mu <= 1`.
pub fn poltyrev_exponent(mu: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::param("mu", format!("volume-to-noise ratio must be positive and finite, got {mu}")));
    }
    Ok(if mu <= 1.0 {
        0.0
    } else if mu <= 2.0 {
        poltyrev_branch(PoltyrevBranch::Low, mu)
    } else if mu <= 4.0 {
        poltyrev_branch(PoltyrevBranch::Middle, mu)
    } else {
        poltyrev_branch(PoltyrevBranch::High, mu)
    })
}

/// Volume-to-noise ratio `V^{2/n} / (2 pi e sigma^2)` of a lattice in Gaussian noise.
pub fn volume_to_noise_ratio(lat: &Lattice, noise_variance: f64) -> f64 {
    let n = lat.dim() as f64;
    lat.volume().powf(2.0 / n) / (2.0 * std::f64::consts::PI * std::f64::consts::E * noise_variance)
}
