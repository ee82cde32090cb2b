//! Finite-dimensional lattices with exact nearest-point quantization.
//!
//! Every lattice is stored as a sublattice `M Z^n` plus a finite set of glue
//! vectors (coset representatives of the lattice modulo `M Z^n`). `M` is
//! always a similarity times a diagonal matrix, so rounding in `M`-coordinates
//! is the exact nearest point of each coset, and the nearest lattice point is
//! the best of the per-coset candidates. Integer-scaled and diagonal lattices
//! have a single glue vector; construction-A lattices carry one per codeword.
//!
//! Ties are resolved toward the candidate whose integer coordinates (in the
//! generator basis) are lexicographically smallest. Distances within a
//! relative `1e-9` band count as ties, which keeps the quantizer translation
//! covariant under floating-point noise.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) mod hnf;
pub mod octonion;
mod stats;

pub(crate) use stats::cap;
pub use stats::{
    capacity_c, effective_radius, poltyrev_branch, poltyrev_exponent, unit_ball_volume, volume_to_noise_ratio,
    voronoi_stats, PoltyrevBranch, VoronoiStats,
};

/// Largest supported dimension.
pub const MAX_DIM: usize = 32;

const COORD_TIE: f64 = 1e-9;
const DIST_TIE: f64 = 1e-9;
const MAX_TIE_COORDS: usize = 10;
const MAX_GLUE: usize = 1 << 16;
const MAX_DENOMINATOR: u64 = 1 << 20;

/// Structural tag of a lattice before any similarity map or coset extension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeKind {
    IntegerScaled,
    Diagonal,
    /// `Z^n + C/p`, with `code` the generator rows of `C` over `Z_p`.
    ConstructionA { modulus: u64, code: Vec<Vec<u64>> },
}

/// Base family named in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    Integer,
    Diagonal,
    ConstructionA,
    E8,
}

/// Serializable recipe for a base lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDescriptor {
    pub kind: BaseKind,
    pub dimension: usize,
    #[serde(default = "unit_scale")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<Vec<Vec<u64>>>,
}

fn unit_scale() -> f64 {
    1.0
}

impl LatticeDescriptor {
    pub fn integer(dimension: usize) -> Self {
        LatticeDescriptor {
            kind: BaseKind::Integer,
            dimension,
            scale: 1.0,
            diagonal: None,
            modulus: None,
            code: None,
        }
    }

    pub fn e8() -> Self {
        LatticeDescriptor {
            kind: BaseKind::E8,
            dimension: 8,
            ..Self::integer(8)
        }
    }

    pub fn build(&self) -> Result<Lattice> {
        match self.kind {
            BaseKind::Integer => Lattice::integer(self.dimension, self.scale),
            BaseKind::Diagonal => {
                let d = self
                    .diagonal
                    .as_ref()
                    .ok_or_else(|| Error::param("diagonal", "diagonal lattices need the diagonal entries"))?;
                if d.len() != self.dimension {
                    return Err(Error::DimensionMismatch {
                        expected: self.dimension,
                        got: d.len(),
                    });
                }
                let scaled: Vec<f64> = d.iter().map(|x| x * self.scale).collect();
                Lattice::diagonal(&scaled)
            }
            BaseKind::ConstructionA => {
                let p = self
                    .modulus
                    .ok_or_else(|| Error::param("modulus", "construction-A needs a modulus"))?;
                let code = self
                    .code
                    .as_ref()
                    .ok_or_else(|| Error::param("code", "construction-A needs code generator rows"))?;
                Lattice::construction_a(self.dimension, p, code, self.scale)
            }
            BaseKind::E8 => {
                if self.dimension != 8 {
                    return Err(Error::param("dimension", "the e8 base is 8-dimensional"));
                }
                Lattice::e8(self.scale)
            }
        }
    }
}

/// An `n`-dimensional lattice with exact quantization.
#[derive(Debug, Clone)]
pub struct Lattice {
    n: usize,
    kind: LatticeKind,
    similarity_norm: f64,
    coset_extension: usize,
    sub: Vec<f64>,
    sub_inv: Vec<f64>,
    sub_diag: bool,
    glue: Vec<Vec<f64>>,
    gen: Vec<f64>,
    gen_inv: Vec<f64>,
    volume: f64,
    second_moment: Option<f64>,
    dist_tol: f64,
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::param("dimension", format!("must be in 1..={MAX_DIM}, got {n}")));
    }
    Ok(())
}

fn check_scale(name: &str, s: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::param(name, format!("must be positive and finite, got {s}")));
    }
    Ok(())
}

fn mat_vec(m: &[f64], n: usize, v: &[f64], out: &mut [f64]) {
    for i in 0..n {
        let row = &m[i * n..(i + 1) * n];
        out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

fn mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = vec![0.0; n * m.ncols()];
    for i in 0..n {
        for j in 0..m.ncols() {
            out[i * m.ncols() + j] = m[(i, j)];
        }
    }
    out
}

fn common_denominator(coords: &[Vec<f64>]) -> Option<u64> {
    'outer: for d in 1..=MAX_DENOMINATOR {
        let df = d as f64;
        for c in coords {
            for &x in c {
                let y = x * df;
                if (y - y.round()).abs() > 1e-6 {
                    continue 'outer;
                }
            }
        }
        return Some(d);
    }
    None
}

fn frac_canonical(x: f64) -> f64 {
    let f = x - x.floor();
    if !(1e-9..=1.0 - 1e-9).contains(&f) {
        0.0
    } else {
        f
    }
}

impl Lattice {
    fn assemble(
        n: usize,
        kind: LatticeKind,
        sub: Vec<f64>,
        sub_diag: bool,
        glue: Vec<Vec<f64>>,
        second_moment: Option<f64>,
        similarity_norm: f64,
        coset_extension: usize,
    ) -> Result<Lattice> {
        check_dim(n)?;
        let m = DMatrix::from_row_slice(n, n, &sub);
        let det_m = m.determinant().abs();
        if !(det_m > 0.0) || !det_m.is_finite() {
            return Err(Error::param("generator", "sublattice basis is singular"));
        }
        let minv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::param("generator", "sublattice basis is singular"))?;
        let sub_inv = row_major(&minv);

        let mut coords = Vec::with_capacity(glue.len());
        for g in &glue {
            let mut c = vec![0.0; n];
            mat_vec(&sub_inv, n, g, &mut c);
            coords.push(c);
        }
        let denom = common_denominator(&coords)
            .ok_or_else(|| Error::Unsupported("glue vectors are not rational in the sublattice basis".into()))?;
        let ints: Vec<Vec<i128>> = coords
            .iter()
            .map(|c| c.iter().map(|x| (x * denom as f64).round() as i128).collect())
            .collect();
        let cols = hnf::triangular_basis(n, &ints, denom as i128)
            .ok_or_else(|| Error::Unsupported("glue vectors do not span a full-rank lattice".into()))?;
        let mut h = vec![0.0; n * n];
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                h[i * n + j] = v as f64 / denom as f64;
            }
        }
        let gen = mat_mul(&sub, &h, n);
        let gm = DMatrix::from_row_slice(n, n, &gen);
        let volume = gm.determinant().abs();
        let gen_inv = row_major(
            &gm.try_inverse()
                .ok_or_else(|| Error::param("generator", "generator matrix is singular"))?,
        );
        let expected = det_m / glue.len() as f64;
        if ((volume - expected) / expected).abs() > 1e-6 {
            return Err(Error::Unsupported(format!(
                "glue set of size {} is not a group modulo the sublattice",
                glue.len()
            )));
        }
        let dist_tol = DIST_TIE * volume.powf(2.0 / n as f64);
        Ok(Lattice {
            n,
            kind,
            similarity_norm,
            coset_extension,
            sub,
            sub_inv,
            sub_diag,
            glue,
            gen,
            gen_inv,
            volume,
            second_moment,
            dist_tol,
        })
    }

    /// `s Z^n`.
    pub fn integer(n: usize, scale: f64) -> Result<Lattice> {
        check_dim(n)?;
        check_scale("scale", scale)?;
        let mut sub = vec![0.0; n * n];
        for i in 0..n {
            sub[i * n + i] = scale;
        }
        Self::assemble(
            n,
            LatticeKind::IntegerScaled,
            sub,
            true,
            vec![vec![0.0; n]],
            Some(scale * scale / 12.0),
            1.0,
            1,
        )
    }

    /// `diag(d) Z^n`.
    pub fn diagonal(d: &[f64]) -> Result<Lattice> {
        let n = d.len();
        check_dim(n)?;
        let mut sub = vec![0.0; n * n];
        for (i, &x) in d.iter().enumerate() {
            check_scale("diagonal", x)?;
            sub[i * n + i] = x;
        }
        let moment = d.iter().map(|x| x * x / 12.0).sum::<f64>() / n as f64;
        Self::assemble(n, LatticeKind::Diagonal, sub, true, vec![vec![0.0; n]], Some(moment), 1.0, 1)
    }

    /// `s (Z^n + C/p)` for the linear code over `Z_p` spanned by `code` rows.
    pub fn construction_a(n: usize, modulus: u64, code: &[Vec<u64>], scale: f64) -> Result<Lattice> {
        check_dim(n)?;
        check_scale("scale", scale)?;
        if modulus < 2 {
            return Err(Error::param("modulus", format!("must be at least 2, got {modulus}")));
        }
        for row in code {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        let words = span_code(n, modulus, code)?;
        let p = modulus as f64;
        let glue: Vec<Vec<f64>> = words
            .iter()
            .map(|w| w.iter().map(|&c| scale * c as f64 / p).collect())
            .collect();
        let mut sub = vec![0.0; n * n];
        for i in 0..n {
            sub[i * n + i] = scale;
        }
        let kind = LatticeKind::ConstructionA {
            modulus,
            code: code.to_vec(),
        };
        Self::assemble(n, kind, sub, true, glue, None, 1.0, 1)
    }

    /// `s E8`, realized as the integral octonions (minimal norm `s^2`).
    pub fn e8(scale: f64) -> Result<Lattice> {
        let code: Vec<Vec<u64>> = octonion::HAMMING_8_4.iter().map(|r| r.to_vec()).collect();
        let mut lat = Self::construction_a(8, 2, &code, scale)?;
        lat.second_moment = Some(octonion::E8_NORMALIZED_SECOND_MOMENT * lat.volume.powf(0.25));
        Ok(lat)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &LatticeKind {
        &self.kind
    }

    /// Product of the norms of all similarity maps applied since construction.
    pub fn similarity_norm(&self) -> f64 {
        self.similarity_norm
    }

    /// Index gained by coset extensions since construction.
    pub fn coset_extension(&self) -> usize {
        self.coset_extension
    }

    /// Cell volume `|det G|`.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Exact per-dimension second moment, when known in closed form.
    pub fn second_moment(&self) -> Option<f64> {
        self.second_moment
    }

    /// Generator matrix; lattice points are `G k` for integer `k`.
    pub fn generator(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.gen)
    }

    /// Coset representatives modulo the orthogonal sublattice (first is zero).
    pub fn glue(&self) -> &[Vec<f64>] {
        &self.glue
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// Nearest lattice point to `x`.
    pub fn nearest_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut out = vec![0.0; self.n];
        self.quantize(x, &mut out);
        Ok(out)
    }

    /// `x - Q(x)`, the representative of `x` in the fundamental Voronoi region.
    pub fn mod_lattice(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(self.reduce(x))
    }

    /// Integer coordinates of the nearest lattice point in the generator basis.
    pub fn integer_coordinates(&self, x: &[f64]) -> Result<Vec<i64>> {
        let p = self.nearest_point(x)?;
        Ok(self.coords_of(&p))
    }

    /// The lattice point `G k`.
    pub fn point(&self, k: &[i64]) -> Result<Vec<f64>> {
        if k.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: k.len(),
            });
        }
        let kf: Vec<f64> = k.iter().map(|&v| v as f64).collect();
        let mut out = vec![0.0; self.n];
        mat_vec(&self.gen, self.n, &kf, &mut out);
        Ok(out)
    }

    /// Whether `x` is a lattice point up to `1e-7` of the cell size.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        let r = self.mod_lattice(x)?;
        let tol = 1e-7 * self.volume.powf(1.0 / self.n as f64);
        Ok(r.iter().map(|v| v * v).sum::<f64>().sqrt() <= tol)
    }

    /// Whether every basis vector of `self` lies in `other`.
    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        if self.n != other.n {
            return false;
        }
        let g = self.generator();
        (0..self.n).all(|j| {
            let col: Vec<f64> = g.column(j).iter().copied().collect();
            other.contains(&col).unwrap_or(false)
        })
    }

    /// Uniform sample over the fundamental Voronoi region.
    pub fn sample_voronoi_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let u: Vec<f64> = (0..self.n).map(|_| rng.random::<f64>()).collect();
        let mut x = vec![0.0; self.n];
        mat_vec(&self.gen, self.n, &u, &mut x);
        self.reduce(&x)
    }

    /// The lattice scaled by `c`.
    pub fn scaled(&self, c: f64) -> Result<Lattice> {
        check_scale("scale", c)?;
        let sub: Vec<f64> = self.sub.iter().map(|v| v * c).collect();
        let glue = self.glue.iter().map(|g| g.iter().map(|v| v * c).collect()).collect();
        Self::assemble(
            self.n,
            self.kind.clone(),
            sub,
            self.sub_diag,
            glue,
            self.second_moment.map(|m| m * c * c),
            self.similarity_norm,
            self.coset_extension,
        )
    }

    /// Image under the similarity `t` (row-major, `t^T t = nu I`).
    pub fn transformed(&self, t: &[f64]) -> Result<Lattice> {
        let n = self.n;
        if t.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: t.len(),
            });
        }
        let tm = DMatrix::from_row_slice(n, n, t);
        let gram = tm.transpose() * &tm;
        let nu = gram[(0, 0)];
        let tol = 1e-9 * nu.abs().max(1.0);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { nu } else { 0.0 };
                if (gram[(i, j)] - want).abs() > tol {
                    return Err(Error::Unsupported("transform is not a similarity".into()));
                }
            }
        }
        let sub = mat_mul(t, &self.sub, n);
        let glue = self
            .glue
            .iter()
            .map(|g| {
                let mut out = vec![0.0; n];
                mat_vec(t, n, g, &mut out);
                out
            })
            .collect();
        Self::assemble(
            n,
            self.kind.clone(),
            sub,
            false,
            glue,
            self.second_moment.map(|m| m * nu),
            self.similarity_norm * nu,
            self.coset_extension,
        )
    }

    /// The lattice generated by `self` together with the vectors `gens`.
    ///
    /// Each generator must have finite order modulo `self`.
    pub fn with_cosets(&self, gens: &[Vec<f64>]) -> Result<Lattice> {
        let n = self.n;
        let to_frac = |v: &[f64]| -> Vec<f64> {
            let mut c = vec![0.0; n];
            mat_vec(&self.sub_inv, n, v, &mut c);
            c.into_iter().map(frac_canonical).collect()
        };
        let same = |a: &[f64], b: &[f64]| {
            a.iter().zip(b).all(|(x, y)| {
                let d = (x - y).abs();
                !(1e-7..=1.0 - 1e-7).contains(&d)
            })
        };
        let mut classes: Vec<Vec<f64>> = self.glue.iter().map(|g| to_frac(g)).collect();
        for g in gens {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
            let step = to_frac(g);
            let mut frontier = classes.clone();
            loop {
                let mut fresh = Vec::new();
                for c in &frontier {
                    let next: Vec<f64> = c.iter().zip(&step).map(|(a, b)| frac_canonical(a + b)).collect();
                    if !classes.iter().any(|e| same(e, &next)) && !fresh.iter().any(|e: &Vec<f64>| same(e, &next)) {
                        fresh.push(next);
                    }
                }
                if fresh.is_empty() {
                    break;
                }
                if classes.len() + fresh.len() > MAX_GLUE {
                    return Err(Error::Unsupported("coset extension has too many classes".into()));
                }
                classes.extend(fresh.iter().cloned());
                frontier = fresh;
            }
        }
        let added = classes.len() / self.glue.len();
        let glue: Vec<Vec<f64>> = classes
            .iter()
            .map(|c| {
                let mut out = vec![0.0; n];
                mat_vec(&self.sub, n, c, &mut out);
                out
            })
            .collect();
        Self::assemble(
            n,
            self.kind.clone(),
            self.sub.clone(),
            self.sub_diag,
            glue,
            None,
            self.similarity_norm,
            self.coset_extension * added,
        )
    }

    pub(crate) fn coords_of(&self, p: &[f64]) -> Vec<i64> {
        let mut k = vec![0.0; self.n];
        mat_vec(&self.gen_inv, self.n, p, &mut k);
        k.into_iter().map(|v| v.round() as i64).collect()
    }

    /// `x mod Λ` without input validation.
    pub(crate) fn reduce(&self, x: &[f64]) -> Vec<f64> {
        let mut q = vec![0.0; self.n];
        self.quantize(x, &mut q);
        x.iter().zip(&q).map(|(a, b)| a - b).collect()
    }

    /// Nearest point without input validation.
    pub(crate) fn quantize(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        let mut diff = [0.0f64; MAX_DIM];
        let mut w = [0.0f64; MAX_DIM];
        let mut z = [0.0f64; MAX_DIM];
        let mut cand = [0.0f64; MAX_DIM];
        let mut best = [0.0f64; MAX_DIM];
        let mut best_d = f64::INFINITY;
        let mut ties: Vec<[f64; MAX_DIM]> = Vec::new();
        let mut tie_at = [0usize; MAX_DIM];

        for g in &self.glue {
            for i in 0..n {
                diff[i] = x[i] - g[i];
            }
            if self.sub_diag {
                for i in 0..n {
                    w[i] = diff[i] * self.sub_inv[i * n + i];
                }
            } else {
                mat_vec(&self.sub_inv, n, &diff[..n], &mut w[..n]);
            }
            let mut nt = 0;
            for i in 0..n {
                let f = w[i].floor();
                let r = w[i] - f;
                if (r - 0.5).abs() <= COORD_TIE && nt < MAX_TIE_COORDS {
                    tie_at[nt] = i;
                    nt += 1;
                    z[i] = f;
                } else {
                    z[i] = if r > 0.5 { f + 1.0 } else { f };
                }
            }
            for mask in 0u32..(1u32 << nt) {
                for (t, &i) in tie_at[..nt].iter().enumerate() {
                    z[i] = w[i].floor() + ((mask >> t) & 1) as f64;
                }
                if self.sub_diag {
                    for i in 0..n {
                        cand[i] = self.sub[i * n + i] * z[i] + g[i];
                    }
                } else {
                    mat_vec(&self.sub, n, &z[..n], &mut cand[..n]);
                    for i in 0..n {
                        cand[i] += g[i];
                    }
                }
                let d: f64 = (0..n).map(|i| (x[i] - cand[i]) * (x[i] - cand[i])).sum();
                if d < best_d - self.dist_tol {
                    best_d = d;
                    best = cand;
                    ties.clear();
                } else if d <= best_d + self.dist_tol {
                    if ties.is_empty() {
                        ties.push(best);
                    }
                    ties.push(cand);
                    if d < best_d {
                        best_d = d;
                    }
                }
            }
        }

        if ties.is_empty() {
            out.copy_from_slice(&best[..n]);
            return;
        }
        let mut chosen = ties[0];
        let mut chosen_k = self.coords_of(&chosen[..n]);
        for t in &ties[1..] {
            let k = self.coords_of(&t[..n]);
            if k < chosen_k {
                chosen_k = k;
                chosen = *t;
            }
        }
        out.copy_from_slice(&chosen[..n]);
    }
}

/// All codewords spanned by `rows` over `Z_p`, deduplicated, zero first.
fn span_code(n: usize, p: u64, rows: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let mut words: Vec<Vec<u64>> = vec![vec![0; n]];
    let mut seen: std::collections::HashSet<Vec<u64>> = words.iter().cloned().collect();
    for row in rows {
        let row: Vec<u64> = row.iter().map(|v| v % p).collect();
        let mut fresh = Vec::new();
        for w in &words {
            for c in 1..p {
                let v: Vec<u64> = w.iter().zip(&row).map(|(a, b)| (a + c * b) % p).collect();
                if seen.insert(v.clone()) {
                    fresh.push(v);
                }
            }
        }
        words.extend(fresh);
        if words.len() > MAX_GLUE {
            return Err(Error::Unsupported(format!("code has more than {MAX_GLUE} codewords")));
        }
    }
    Ok(words)
}
