//! Mod-Λ algebra of the relay sum codeword for nested pairs `Λ₁ ⊆ Λ₂`.
//!
//! `u2` is the dither as it enters the sum, `T = (t₁ + t₂ − Q₂(t₂ + u₂)) mod Λ₁`.
//! Encoders here transmit `(t − U) mod Λ`, so a simulation passes `u2 = −U₂`.

use crate::error::{Error, Result};
use crate::lattice_core::Lattice;

fn check(l1: &Lattice, l2: &Lattice, vs: &[&[f64]]) -> Result<()> {
    let n = l1.dim();
    if l2.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: l2.dim() });
    }
    if !l1.is_sublattice_of(l2) {
        return Err(Error::NestingViolation { coarse: 1, fine: 2 });
    }
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

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `T = (t₁ + t₂ − Q₂(t₂ + u₂)) mod Λ₁`.
pub fn sum_codeword(t1: &[f64], t2: &[f64], u2: &[f64], l1: &Lattice, l2: &Lattice) -> Result<Vec<f64>> {
    check(l1, l2, &[t1, t2, u2])?;
    let q = l2.nearest_point(&add(t2, u2))?;
    l1.mod_lattice(&sub(&add(t1, t2), &q))
}

/// Relay estimate of `T` from `y_R = X₁ + X₂ + Z_R`, where `X_i = (t_i − U_i) mod Λ_i`.
///
/// Forms `(α y_R + U₁ + U₂) mod Λ₁`, quantizes it to `fine` and reduces mod `Λ₁`.
/// With `u2 = −U₂` the result equals [`sum_codeword`] whenever the effective
/// noise stays inside the Voronoi region of `fine`.
pub fn relay_sum_decode(
    y_r: &[f64],
    dither1: &[f64],
    dither2: &[f64],
    alpha: f64,
    l1: &Lattice,
    l2: &Lattice,
    fine: &Lattice,
) -> Result<Vec<f64>> {
    check(l1, l2, &[y_r, dither1, dither2])?;
    if !l2.is_sublattice_of(fine) {
        return Err(Error::NestingViolation { coarse: 2, fine: 3 });
    }
    let v: Vec<f64> = (0..y_r.len()).map(|i| alpha * y_r[i] + dither1[i] + dither2[i]).collect();
    let v = l1.mod_lattice(&v)?;
    l1.mod_lattice(&fine.nearest_point(&v)?)
}

/// `t₁ = (T − t₂ + Q₂(t₂ + u₂)) mod Λ₁`.
pub fn recover_t1_from_t(t: &[f64], t2: &[f64], u2: &[f64], l1: &Lattice, l2: &Lattice) -> Result<Vec<f64>> {
    check(l1, l2, &[t, t2, u2])?;
    let q = l2.nearest_point(&add(t2, u2))?;
    l1.mod_lattice(&add(&sub(t, t2), &q))
}

/// `t₂ = (T mod Λ₂ − t₁) mod Λ₂`.
pub fn recover_t2_from_t(t: &[f64], t1: &[f64], l1: &Lattice, l2: &Lattice) -> Result<Vec<f64>> {
    check(l1, l2, &[t, t1])?;
    let tm = l2.mod_lattice(t)?;
    l2.mod_lattice(&sub(&tm, t1))
}
