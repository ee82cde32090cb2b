//! Nested lattice Wyner-Ziv quantization of `X + Z₁` with decoder side information `X + Z₂`.

use crate::error::{Error, Result};
use crate::lattice_core::Lattice;
use crate::nested_codes::{Quotient, DEFAULT_ENUMERATION_CAP};

/// Quantizer `Λ_q` nested over the binning lattice `Λ ⊆ Λ_q`.
#[derive(Debug, Clone)]
pub struct WzPair {
    quotient: Quotient,
}

impl WzPair {
    pub fn new(quantizer: &Lattice, coarse: &Lattice) -> Result<Self> {
        let quotient = Quotient::new(coarse, quantizer, DEFAULT_ENUMERATION_CAP).map_err(|e| match e {
            Error::NestingViolation { .. } => Error::NestingViolation { coarse: 0, fine: 1 },
            other => other,
        })?;
        Ok(WzPair { quotient })
    }

    pub fn quantizer(&self) -> &Lattice {
        &self.quotient.fine
    }

    pub fn coarse(&self) -> &Lattice {
        &self.quotient.coarse
    }

    /// Number of indices, `V / V_q`.
    pub fn size(&self) -> u64 {
        self.quotient.size()
    }

    /// `(1/n) log₂(V / V_q)` bits per dimension.
    pub fn rate(&self) -> f64 {
        (self.size() as f64).log2() / self.quotient.fine.dim() as f64
    }

    fn check(&self, vs: &[&[f64]]) -> Result<()> {
        let n = self.quotient.fine.dim();
        for v in vs {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(())
    }

    /// `I = Q_q(α₁ s + U) mod Λ` as a canonical coset index.
    pub fn encode(&self, source: &[f64], dither: &[f64], alpha1: f64) -> Result<u64> {
        self.check(&[source, dither])?;
        let v: Vec<f64> = source.iter().zip(dither).map(|(s, u)| alpha1 * s + u).collect();
        Ok(self.quotient.residue_of(&v))
    }

    /// Coset point of index `i`, reduced into `𝒱(Λ)`.
    pub fn index_point(&self, i: u64) -> Result<Vec<f64>> {
        if i >= self.size() {
            return Err(Error::MessageOutOfRange {
                index: i as usize,
                size: self.size() as usize,
            });
        }
        Ok(self.quotient.coarse.reduce(&self.quotient.representative(i)))
    }

    /// `Ŷ = α₁((I − U − α₁α₂ y) mod Λ) + α₂ y` for side information `y`.
    pub fn decode(&self, index: u64, side_info: &[f64], dither: &[f64], alpha1: f64, alpha2: f64) -> Result<Vec<f64>> {
        self.check(&[side_info, dither])?;
        let p = self.index_point(index)?;
        let v: Vec<f64> = (0..p.len())
            .map(|k| p[k] - dither[k] - alpha1 * alpha2 * side_info[k])
            .collect();
        let m = self.quotient.coarse.reduce(&v);
        Ok((0..p.len()).map(|k| alpha1 * m[k] + alpha2 * side_info[k]).collect())
    }
}

/// Quantization index of `x + z₁` under dither `u_q`, with `α₁ = 1`.
pub fn wz_encode(x_plus_z1: &[f64], u_q: &[f64], pair: &WzPair) -> Result<u64> {
    pair.encode(x_plus_z1, u_q, 1.0)
}

/// Reconstruction of `x + z₁` from the index and the side information, `α₁ = 1`.
pub fn wz_decode(index: u64, side_info: &[f64], u_q: &[f64], alpha2: f64, pair: &WzPair) -> Result<Vec<f64>> {
    pair.decode(index, side_info, u_q, 1.0, alpha2)
}
