//! Nested lattice chains, Voronoi codebooks and dithered encoding.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_core::{hnf, octonion, Lattice};

/// Default cap on the number of enumerated codewords.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

/// One refinement step between consecutive chain levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainStep {
    /// Scaling by an integer factor `f` (index `f^n`).
    Scale(u64),
    /// Left multiplication by an integral octonion of norm `N` (index `N^4`, dimension 8 only).
    Octonion(u64),
}

impl ChainStep {
    fn matrix(&self, n: usize) -> Result<Vec<f64>> {
        match *self {
            ChainStep::Scale(f) => {
                if f < 1 {
                    return Err(Error::param("factors", "nesting factors must be at least 1"));
                }
                let mut m = vec![0.0; n * n];
                for i in 0..n {
                    m[i * n + i] = f as f64;
                }
                Ok(m)
            }
            ChainStep::Octonion(norm) => {
                if n != 8 {
                    return Err(Error::Unsupported("octonion steps need dimension 8".into()));
                }
                let a = octonion::element_of_norm(norm)
                    .ok_or_else(|| Error::param("factors", "octonion norms must be at least 1"))?;
                Ok(octonion::left_multiplication_matrix(&a))
            }
        }
    }

    /// Subgroup index of the step in dimension `n`.
    pub fn index(&self, n: usize) -> f64 {
        match *self {
            ChainStep::Scale(f) => (f as f64).powi(n as i32),
            ChainStep::Octonion(norm) => (norm as f64).powi(4),
        }
    }
}

/// Lattices `Λ_1 ⊆ Λ_2 ⊆ … ⊆ Λ_K`, stored coarsest first.
#[derive(Debug, Clone)]
pub struct NestedChain {
    levels: Vec<Lattice>,
    nesting_factors: Vec<u64>,
}

fn integer_ratio(a: f64, b: f64) -> Option<u64> {
    let r = a / b;
    let k = r.round();
    if k >= 1.0 && (r - k).abs() <= 1e-6 * k {
        Some(k as u64)
    } else {
        None
    }
}

impl NestedChain {
    /// Verifies nesting of consecutive levels and records their indices.
    pub fn new(levels: Vec<Lattice>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::param("levels", "a chain needs at least one lattice"));
        }
        let mut nesting_factors = Vec::with_capacity(levels.len().saturating_sub(1));
        for i in 0..levels.len().saturating_sub(1) {
            let (c, f) = (&levels[i], &levels[i + 1]);
            if c.dim() != f.dim() {
                return Err(Error::DimensionMismatch {
                    expected: c.dim(),
                    got: f.dim(),
                });
            }
            if !c.is_sublattice_of(f) {
                return Err(Error::NestingViolation { coarse: i, fine: i + 1 });
            }
            let k = integer_ratio(c.volume(), f.volume())
                .ok_or_else(|| Error::param("levels", "non-integer subgroup index"))?;
            nesting_factors.push(k);
        }
        Ok(NestedChain {
            levels,
            nesting_factors,
        })
    }

    pub fn levels(&self) -> &[Lattice] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &Lattice {
        &self.levels[i]
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.levels[0].dim()
    }

    /// Index of each level in the next finer one.
    pub fn nesting_factors(&self) -> &[u64] {
        &self.nesting_factors
    }

    /// Exact second moments where known, one per level.
    pub fn second_moments(&self) -> Vec<Option<f64>> {
        self.levels.iter().map(|l| l.second_moment()).collect()
    }

    /// `V_coarse / V_fine`.
    pub fn index(&self, coarse: usize, fine: usize) -> u64 {
        self.nesting_factors[coarse.min(fine)..coarse.max(fine)].iter().product()
    }

    /// `(1/n) log2(V_coarse / V_fine)`.
    pub fn rate(&self, coarse: usize, fine: usize) -> f64 {
        (self.index(coarse, fine) as f64).log2() / self.dim() as f64
    }

    /// The whole chain scaled by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let levels = self.levels.iter().map(|l| l.scaled(c)).collect::<Result<Vec<_>>>()?;
        Ok(NestedChain {
            levels,
            nesting_factors: self.nesting_factors.clone(),
        })
    }

    /// The chain scaled so that level `level` has second moment `power`.
    pub fn with_power(&self, level: usize, power: f64) -> Result<Self> {
        let m = self.levels[level]
            .second_moment()
            .ok_or_else(|| Error::Unsupported("power scaling needs a closed-form second moment".into()))?;
        self.scaled((power / m).sqrt())
    }
}

/// Self-similar chain whose finest level is `base` and where level `k` is
/// level `k + 1` scaled by `factors[k]`.
pub fn build_chain(base: &Lattice, factors: &[u64]) -> Result<NestedChain> {
    let steps: Vec<ChainStep> = factors.iter().map(|&f| ChainStep::Scale(f)).collect();
    build_chain_with(base, &steps)
}

/// Chain whose finest level is `base`; `steps[k]` refines level `k` into level `k + 1`.
///
/// Coarser levels are images `T_1 T_2 … T_j (base)` with `T_1` the step next to
/// the fine end, which keeps every coarser level inside every finer one.
pub fn build_chain_with(base: &Lattice, steps: &[ChainStep]) -> Result<NestedChain> {
    if steps.is_empty() {
        return Err(Error::param("factors", "at least one nesting factor is required"));
    }
    let n = base.dim();
    let mut t = vec![0.0; n * n];
    for i in 0..n {
        t[i * n + i] = 1.0;
    }
    let mut levels = vec![base.clone()];
    for step in steps.iter().rev() {
        let s = step.matrix(n)?;
        t = mul(&t, &s, n);
        levels.push(base.transformed(&t)?);
    }
    levels.reverse();
    NestedChain::new(levels)
}

fn mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i * n + j] += a[i * n + k] * b[k * n + j];
            }
        }
    }
    out
}

/// Quotient `Λ_fine / Λ_coarse` with canonical integer residues.
#[derive(Debug, Clone)]
pub(crate) struct Quotient {
    pub coarse: Lattice,
    pub fine: Lattice,
    basis: Vec<Vec<i128>>,
    radix: Vec<u64>,
    size: u64,
}

impl Quotient {
    pub fn new(coarse: &Lattice, fine: &Lattice, cap: u64) -> Result<Self> {
        let n = fine.dim();
        if coarse.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: coarse.dim(),
            });
        }
        if !coarse.is_sublattice_of(fine) {
            return Err(Error::NestingViolation { coarse: 0, fine: 1 });
        }
        let index = integer_ratio(coarse.volume(), fine.volume())
            .ok_or_else(|| Error::param("levels", "non-integer subgroup index"))?;
        if index > cap {
            return Err(Error::EnumerationCap {
                count: index as u128,
                cap: cap as u128,
            });
        }
        let g = coarse.generator();
        let cols: Vec<Vec<i128>> = (0..n)
            .map(|j| {
                let col: Vec<f64> = g.column(j).iter().copied().collect();
                fine.coords_of(&col).into_iter().map(|v| v as i128).collect()
            })
            .collect();
        let basis = hnf::triangular_basis(n, &cols, index as i128)
            .ok_or_else(|| Error::param("levels", "degenerate nesting"))?;
        let radix: Vec<u64> = (0..n).map(|i| basis[i][i] as u64).collect();
        let size: u64 = radix.iter().product();
        if size != index {
            return Err(Error::param("levels", "quotient size disagrees with the volume ratio"));
        }
        Ok(Quotient {
            coarse: coarse.clone(),
            fine: fine.clone(),
            basis,
            radix,
            size,
        })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Canonical residue index of the fine point nearest to `x`.
    pub fn residue_of(&self, x: &[f64]) -> u64 {
        let n = self.fine.dim();
        let mut q = vec![0.0; n];
        self.fine.quantize(x, &mut q);
        let mut k: Vec<i128> = self.fine.coords_of(&q).into_iter().map(|v| v as i128).collect();
        hnf::reduce_mod(&self.basis, &mut k);
        let mut idx = 0u64;
        for i in 0..n {
            idx = idx * self.radix[i] + k[i] as u64;
        }
        idx
    }

    /// A fine-lattice point (not reduced) in residue class `idx`.
    pub fn representative(&self, mut idx: u64) -> Vec<f64> {
        let n = self.fine.dim();
        let mut k = vec![0i64; n];
        for i in (0..n).rev() {
            k[i] = (idx % self.radix[i]) as i64;
            idx /= self.radix[i];
        }
        self.fine.point(&k).expect("dimension matches")
    }
}

/// The codebook `Λ_c ∩ 𝒱(Λ)` with a seeded message bijection.
#[derive(Debug, Clone)]
pub struct Codebook {
    quotient: Quotient,
    points: Vec<Vec<f64>>,
    to_point: Vec<u32>,
    to_message: Vec<u32>,
    rate: f64,
    seed: u64,
}

/// Enumerates `level(fine) ∩ 𝒱(level(coarse))` and draws the message map from `seed`.
pub fn enumerate_codebook(chain: &NestedChain, coarse_level: usize, fine_level: usize, seed: u64) -> Result<Codebook> {
    enumerate_codebook_capped(chain, coarse_level, fine_level, seed, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_codebook_capped(
    chain: &NestedChain,
    coarse_level: usize,
    fine_level: usize,
    seed: u64,
    cap: u64,
) -> Result<Codebook> {
    if coarse_level > fine_level || fine_level >= chain.len() {
        return Err(Error::param("levels", "need coarse_level <= fine_level < chain length"));
    }
    Codebook::from_pair(chain.level(coarse_level), chain.level(fine_level), seed, cap)
}

impl Codebook {
    /// Codebook of the pair `coarse ⊆ fine`.
    pub fn from_pair(coarse: &Lattice, fine: &Lattice, seed: u64, cap: u64) -> Result<Codebook> {
        let quotient = Quotient::new(coarse, fine, cap)?;
        let size = quotient.size() as usize;
        let points: Vec<Vec<f64>> = (0..size as u64)
            .map(|r| coarse.reduce(&quotient.representative(r)))
            .collect();
        let mut to_point: Vec<u32> = (0..size as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        to_point.shuffle(&mut rng);
        let mut to_message = vec![0u32; size];
        for (w, &p) in to_point.iter().enumerate() {
            to_message[p as usize] = w as u32;
        }
        let rate = (size as f64).log2() / coarse.dim() as f64;
        Ok(Codebook {
            quotient,
            points,
            to_point,
            to_message,
            rate,
            seed,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Bits per dimension, `(1/n) log2 |points|`.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.quotient.fine.dim()
    }

    pub fn coarse(&self) -> &Lattice {
        &self.quotient.coarse
    }

    pub fn fine(&self) -> &Lattice {
        &self.quotient.fine
    }

    /// Codewords in canonical (lexicographic residue) order.
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// `t(w)`.
    pub fn codeword(&self, w: usize) -> Result<&[f64]> {
        let p = *self
            .to_point
            .get(w)
            .ok_or(Error::MessageOutOfRange { index: w, size: self.len() })?;
        Ok(&self.points[p as usize])
    }

    /// Canonical position of `t(w)` in [`Codebook::points`].
    pub fn canonical_index(&self, w: usize) -> Result<usize> {
        self.to_point
            .get(w)
            .map(|&p| p as usize)
            .ok_or(Error::MessageOutOfRange { index: w, size: self.len() })
    }

    /// Message whose codeword sits at canonical position `i`.
    pub fn message_at(&self, i: usize) -> Result<usize> {
        self.to_message
            .get(i)
            .map(|&w| w as usize)
            .ok_or(Error::MessageOutOfRange { index: i, size: self.len() })
    }

    /// Message of the fine point nearest to `x`, after reduction mod the coarse lattice.
    pub fn message_of(&self, x: &[f64]) -> usize {
        self.to_message[self.quotient.residue_of(x) as usize] as usize
    }

    /// Canonical position of the fine point nearest to `x`, reduced mod the coarse lattice.
    pub fn canonical_of(&self, x: &[f64]) -> usize {
        self.quotient.residue_of(x) as usize
    }

    /// `X = (t(w) - U) mod Λ`.
    pub fn encode(&self, w: usize, dither: &[f64]) -> Result<Vec<f64>> {
        let t = self.codeword(w)?;
        if dither.len() != t.len() {
            return Err(Error::DimensionMismatch {
                expected: t.len(),
                got: dither.len(),
            });
        }
        let v: Vec<f64> = t.iter().zip(dither).map(|(a, b)| a - b).collect();
        self.coarse().mod_lattice(&v)
    }
}
