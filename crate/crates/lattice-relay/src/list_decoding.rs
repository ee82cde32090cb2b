//! Lattice list decoding and unique decoding in mixed Gaussian/uniform noise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_core::Lattice;
use crate::nested_codes::{Codebook, Quotient};

/// Gaussian noise plus independent dithers uniform over Voronoi regions.
#[derive(Debug, Clone)]
pub struct MixedNoiseSpec {
    pub gaussian_variance: f64,
    /// `(lattice, second moment)` of each uniform component.
    pub uniform_components: Vec<(Lattice, f64)>,
}

impl MixedNoiseSpec {
    pub fn gaussian(variance: f64) -> Self {
        MixedNoiseSpec {
            gaussian_variance: variance,
            uniform_components: Vec::new(),
        }
    }

    /// `N = σ_G² + Σ P_i`.
    pub fn total_variance(&self) -> f64 {
        self.gaussian_variance + self.uniform_components.iter().map(|(_, p)| p).sum::<f64>()
    }
}

/// Output of a list decoder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListResult {
    /// Sorted message indices.
    pub messages: Vec<usize>,
    /// Volume of the list lattice `Λ_s`.
    pub list_lattice_volume: f64,
    pub alpha: f64,
    /// `V_s / V_c`.
    pub exact_size: u64,
}

/// `P / (P + N)`.
pub fn mmse_alpha(p: f64, n: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::param("P", format!("must be positive, got {p}")));
    }
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::param("N", format!("must be positive, got {n}")));
    }
    Ok(p / (p + n))
}

/// Upper bound on the variance of the Gaussian surrogate of the effective noise,
/// `(1-α)² r_0² P + α² σ_G² + α² Σ r_i² P_i`.
///
/// `ratios[0]` is the covering-to-effective radius ratio of the transmitted
/// lattice; `ratios[i]` that of the `i`-th uniform component.
pub fn equivalent_noise_variance(alpha: f64, p: f64, spec: &MixedNoiseSpec, ratios: &[f64]) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::param("alpha", format!("must lie in [0, 1], got {alpha}")));
    }
    if ratios.len() != spec.uniform_components.len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: spec.uniform_components.len() + 1,
            got: ratios.len(),
        });
    }
    if let Some(r) = ratios.iter().find(|r| !(**r >= 1.0)) {
        return Err(Error::param("ratios", format!("covering ratios are at least 1, got {r}")));
    }
    let a2 = alpha * alpha;
    let mut s = (1.0 - alpha).powi(2) * ratios[0].powi(2) * p + a2 * spec.gaussian_variance;
    for ((_, pi), r) in spec.uniform_components.iter().zip(&ratios[1..]) {
        s += a2 * r * r * pi;
    }
    Ok(s)
}

/// A codebook paired with an intermediate list lattice `Λ ⊆ Λ_s ⊆ Λ_c`.
#[derive(Debug, Clone)]
pub struct ListDecoder {
    list_lattice: Lattice,
    reps: Quotient,
    whole: bool,
}

impl ListDecoder {
    pub fn new(cb: &Codebook, list_lattice: &Lattice) -> Result<Self> {
        if !cb.coarse().is_sublattice_of(list_lattice) {
            return Err(Error::NestingViolation { coarse: 0, fine: 1 });
        }
        let reps = Quotient::new(list_lattice, cb.fine(), cb.len() as u64)
            .map_err(|e| match e {
                Error::NestingViolation { .. } => Error::NestingViolation { coarse: 1, fine: 2 },
                other => other,
            })?;
        let whole = reps.size() as usize == cb.len();
        Ok(ListDecoder {
            list_lattice: list_lattice.clone(),
            reps,
            whole,
        })
    }

    pub fn list_lattice(&self) -> &Lattice {
        &self.list_lattice
    }

    /// `V_s / V_c`.
    pub fn exact_size(&self) -> u64 {
        self.reps.size()
    }

    fn result(&self, mut messages: Vec<usize>, alpha: f64) -> ListResult {
        messages.sort_unstable();
        ListResult {
            messages,
            list_lattice_volume: self.list_lattice.volume(),
            alpha,
            exact_size: self.exact_size(),
        }
    }

    fn scaled_received(cb: &Codebook, y: &[f64], dither: &[f64], alpha: f64) -> Result<Vec<f64>> {
        let n = cb.dim();
        for v in [y, dither] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        let v: Vec<f64> = y.iter().zip(dither).map(|(a, u)| alpha * a + u).collect();
        cb.coarse().mod_lattice(&v)
    }

    /// Messages whose codewords lie in `Y' + 𝒱_s`, with `Y' = (α y + U) mod Λ`.
    pub fn decode(&self, cb: &Codebook, y: &[f64], dither: &[f64], alpha: f64) -> Result<ListResult> {
        let yp = Self::scaled_received(cb, y, dither, alpha)?;
        if self.whole {
            return Ok(self.result((0..cb.len()).collect(), alpha));
        }
        let n = yp.len();
        let mut messages = Vec::with_capacity(self.exact_size() as usize);
        for r in 0..self.reps.size() {
            let rep = self.reps.representative(r);
            let d: Vec<f64> = rep.iter().zip(&yp).map(|(a, b)| a - b).collect();
            let m = self.list_lattice.reduce(&d);
            let p: Vec<f64> = (0..n).map(|i| yp[i] + m[i]).collect();
            messages.push(cb.message_of(&p));
        }
        Ok(self.result(messages, alpha))
    }

    /// Same list via `{λ_c : Y' ∈ λ_c + 𝒱_s}`, testing membership with the `Λ_s` quantizer.
    pub fn decode_via_q(&self, cb: &Codebook, y: &[f64], dither: &[f64], alpha: f64) -> Result<ListResult> {
        let yp = Self::scaled_received(cb, y, dither, alpha)?;
        let n = yp.len();
        let mut messages = Vec::with_capacity(self.exact_size() as usize);
        let mut q = vec![0.0; n];
        for r in 0..self.reps.size() {
            let rep = self.reps.representative(r);
            let d: Vec<f64> = yp.iter().zip(&rep).map(|(a, b)| a - b).collect();
            self.list_lattice.quantize(&d, &mut q);
            let cand: Vec<f64> = (0..n).map(|i| rep[i] + q[i]).collect();
            let resid: Vec<f64> = (0..n).map(|i| yp[i] - cand[i]).collect();
            self.list_lattice.quantize(&resid, &mut q);
            if q.iter().all(|v| v.abs() < 1e-9 * (1.0 + self.list_lattice.volume())) {
                messages.push(cb.message_of(&cand));
            }
        }
        Ok(self.result(messages, alpha))
    }
}

/// List decoding over `(Λ, Λ_s, Λ_c)`.
pub fn list_decode(dec: &ListDecoder, cb: &Codebook, y: &[f64], dither: &[f64], alpha: f64) -> Result<ListResult> {
    dec.decode(cb, y, dither, alpha)
}

/// List decoding through the equivalent `Q`-form of the list.
pub fn list_decode_via_q(dec: &ListDecoder, cb: &Codebook, y: &[f64], dither: &[f64], alpha: f64) -> Result<ListResult> {
    dec.decode_via_q(cb, y, dither, alpha)
}

/// Message of the fine point nearest to `(α y + U) mod Λ`.
pub fn unique_decode(cb: &Codebook, y: &[f64], dither: &[f64], alpha: f64) -> Result<usize> {
    let yp = ListDecoder::scaled_received(cb, y, dither, alpha)?;
    Ok(cb.message_of(&yp))
}
