//! Finite-dimensional code choices: rate quantization, chains and list levels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_core::{BaseKind, Lattice, LatticeDescriptor};
use crate::list_decoding::ListDecoder;
use crate::nested_codes::{build_chain_with, ChainStep, Codebook, NestedChain, Quotient, DEFAULT_ENUMERATION_CAP};

/// Knobs of the finite-n code design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignParams {
    /// Finest lattice of every chain.
    pub base: LatticeDescriptor,
    /// Target rate as a fraction of the asymptotic formula. Fractions above 1
    /// round the realized rate up instead of down.
    #[serde(default = "default_rate_fraction")]
    pub rate_fraction: f64,
    /// Volume margin applied to list lattices.
    #[serde(default = "default_list_margin")]
    pub list_margin: f64,
    /// Ratio of the coarse Wyner-Ziv second moment to the variance it must cover.
    #[serde(default = "default_wz_margin")]
    pub wz_margin: f64,
    /// Explicit target rates overriding `rate_fraction`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<Vec<f64>>,
    /// Explicit power splits overriding the optimizer (`[α]`, `[α₁, β₁, α₂]`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splits: Option<Vec<f64>>,
    /// Explicit compress-and-forward distortion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distortion: Option<f64>,
}

fn default_rate_fraction() -> f64 {
    0.8
}

fn default_list_margin() -> f64 {
    4.0
}

fn default_wz_margin() -> f64 {
    5.0
}

impl DesignParams {
    pub fn new(base: LatticeDescriptor) -> Self {
        DesignParams {
            base,
            rate_fraction: default_rate_fraction(),
            list_margin: default_list_margin(),
            wz_margin: default_wz_margin(),
            rates: None,
            splits: None,
            distortion: None,
        }
    }

    pub fn e8() -> Self {
        Self::new(LatticeDescriptor::e8())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rate_fraction > 0.0) || !self.rate_fraction.is_finite() {
            return Err(Error::param("rate_fraction", "must be positive and finite"));
        }
        if !(self.list_margin >= 1.0) || !self.list_margin.is_finite() {
            return Err(Error::param("list_margin", "must be at least 1"));
        }
        if !(self.wz_margin > 1.0) || !self.wz_margin.is_finite() {
            return Err(Error::param("wz_margin", "must exceed 1"));
        }
        if let Some(r) = &self.rates {
            if r.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                return Err(Error::param("rates", "target rates must be finite and nonnegative"));
            }
        }
        if let Some(s) = &self.splits {
            if s.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::param("splits", "power splits must lie in [0, 1]"));
            }
        }
        if let Some(d) = self.distortion {
            if !(d > 0.0) {
                return Err(Error::param("distortion", "must be positive"));
            }
        }
        Ok(())
    }

    pub fn rounding(&self) -> Rounding {
        if self.rate_fraction > 1.0 {
            Rounding::Up
        } else {
            Rounding::Down
        }
    }

    /// The `i`-th target: the explicit rate when given, else `fraction × formula`.
    pub(crate) fn target(&self, i: usize, formula: f64) -> Result<f64> {
        match &self.rates {
            Some(r) => r
                .get(i)
                .copied()
                .ok_or_else(|| Error::param("rates", format!("expected at least {} target rates", i + 1))),
            None => Ok(self.rate_fraction * formula),
        }
    }

    pub(crate) fn family(&self) -> Result<Family> {
        Family::new(&self.base)
    }
}

/// Direction in which a target rate snaps to the realizable grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rounding {
    /// Largest realizable rate not above the target.
    Down,
    /// Smallest realizable rate not below the target.
    Up,
}

/// Base lattice plus the refinement steps it supports.
#[derive(Debug, Clone)]
pub(crate) struct Family {
    pub base: Lattice,
    octonion: bool,
}

const MAX_CYCLIC: u64 = 64;
const COSET_SCAN: u64 = 20_000;

impl Family {
    pub fn new(d: &LatticeDescriptor) -> Result<Family> {
        let base = d.build()?;
        if base.second_moment().is_none() {
            return Err(Error::Unsupported(
                "code design needs a base lattice with a closed-form second moment".into(),
            ));
        }
        Ok(Family {
            base,
            octonion: d.kind == BaseKind::E8,
        })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    fn step(&self, k: u64) -> ChainStep {
        if self.octonion {
            ChainStep::Octonion(k)
        } else {
            ChainStep::Scale(k)
        }
    }

    /// Subgroup index of one step of size `k`.
    fn step_index(&self, k: u64) -> f64 {
        self.step(k).index(self.dim())
    }

    /// Rate of a single step of size `k`.
    fn step_rate(&self, k: u64) -> f64 {
        self.step_index(k).log2() / self.dim() as f64
    }

    fn max_step(&self) -> u64 {
        let mut k = 1u64;
        while self.step_index(k + 1) <= DEFAULT_ENUMERATION_CAP as f64 {
            k += 1;
        }
        k
    }

    /// Pure similarity sizes `k` with their rates and second-moment gains `index^{2/n}`.
    pub fn similarities(&self) -> Vec<(u64, f64, f64)> {
        let n = self.dim() as f64;
        (2..=self.max_step())
            .map(|k| (k, self.step_rate(k), self.step_index(k).powf(2.0 / n)))
            .collect()
    }

    /// Steps coarse to fine realizing a similarity of size `k`; larger primes sit
    /// at the coarse end so the small list sizes are available near the fine end.
    pub fn steps(&self, k: u64) -> Vec<ChainStep> {
        let mut f = factorize(k);
        f.reverse();
        f.into_iter().map(|p| self.step(p)).collect()
    }

    /// Chain from the image of the base under `steps` up to the base.
    pub fn chain(&self, steps: &[ChainStep]) -> Result<NestedChain> {
        if steps.is_empty() {
            return NestedChain::new(vec![self.base.clone()]);
        }
        build_chain_with(&self.base, steps)
    }

    /// A single-user code near `target`, normalized to `σ²(Λ) = 1`.
    pub fn single_code(&self, target: f64, rounding: Rounding) -> Result<NestedChain> {
        let mut options: Vec<(f64, Option<u64>, Option<u64>)> = Vec::new();
        for k in 2..=self.max_step() {
            options.push((self.step_rate(k), Some(k), None));
        }
        for p in primes_up_to(self.max_step()) {
            let r = (p as f64).log2() / self.dim() as f64;
            options.push((r, None, Some(p)));
        }
        let pick = choose(&options, target, rounding, |o| o.0)
            .ok_or_else(|| Error::NoCode(format!("rate {target:.4} at dimension {}", self.dim())))?;
        let chain = match (pick.1, pick.2) {
            (Some(k), _) => self.chain(&self.steps(k))?,
            (None, Some(p)) => {
                let coarse = self.chain(&[self.step(p)])?;
                let fine = cyclic_extension(coarse.level(0), &self.base, p)?;
                NestedChain::new(vec![coarse.level(0).clone(), fine])?
            }
            _ => unreachable!("every option names a step or a prime"),
        };
        chain.with_power(0, 1.0)
    }
}

/// Closest option to `target` in the rounding direction; ties keep the earlier option.
fn choose<T: Clone>(options: &[T], target: f64, rounding: Rounding, rate: impl Fn(&T) -> f64) -> Option<T> {
    let tol = 1e-12;
    let mut best: Option<(f64, T)> = None;
    for o in options {
        let r = rate(o);
        let ok = match rounding {
            Rounding::Down => r <= target + tol,
            Rounding::Up => r >= target - tol,
        };
        if !ok {
            continue;
        }
        let better = match (&best, rounding) {
            (None, _) => true,
            (Some((b, _)), Rounding::Down) => r > *b + tol,
            (Some((b, _)), Rounding::Up) => r < *b - tol,
        };
        if better {
            best = Some((r, o.clone()));
        }
    }
    best.map(|b| b.1)
}

fn factorize(mut k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        while k.is_multiple_of(p) {
            out.push(p);
            k /= p;
        }
        p += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

fn primes_up_to(m: u64) -> Vec<u64> {
    (2..=m).filter(|&k| factorize(k).len() == 1).collect()
}

fn divisors(k: u64) -> Vec<u64> {
    (1..=k).filter(|d| k.is_multiple_of(*d)).collect()
}

fn scale(v: &[f64], c: f64) -> Vec<f64> {
    v.iter().map(|x| x * c).collect()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// `coarse + ⟨g⟩` for the element `g` of order `m` in `fine / coarse` whose
/// multiples stay farthest from `coarse`.
pub(crate) fn cyclic_extension(coarse: &Lattice, fine: &Lattice, m: u64) -> Result<Lattice> {
    let q = Quotient::new(coarse, fine, u64::MAX)?;
    let proper: Vec<u64> = divisors(m).into_iter().filter(|&d| d < m).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for r in 1..q.size().min(COSET_SCAN) {
        let g = coarse.reduce(&q.representative(r));
        let in_coarse = |d: u64| coarse.contains(&scale(&g, d as f64)).unwrap_or(false);
        if !in_coarse(m) || proper.iter().skip(1).any(|&d| in_coarse(d)) {
            continue;
        }
        let score = (1..m)
            .map(|j| norm2(&coarse.reduce(&scale(&g, j as f64))))
            .fold(f64::INFINITY, f64::min);
        if best.as_ref().is_none_or(|b| score > b.0 * (1.0 + 1e-9)) {
            best = Some((score, g));
        }
    }
    let (_, g) = best.ok_or_else(|| Error::NoCode(format!("no element of order {m} in the quotient")))?;
    coarse.with_cosets(&[g])
}

/// A nested chain with its codebook; level 0 is the shaping lattice and the last level the coding lattice.
#[derive(Debug, Clone)]
pub struct StreamCode {
    chain: NestedChain,
    codebook: Codebook,
}

impl StreamCode {
    pub fn new(chain: NestedChain, seed: u64) -> Result<Self> {
        let codebook = Codebook::from_pair(chain.level(0), chain.level(chain.len() - 1), seed, DEFAULT_ENUMERATION_CAP)?;
        Ok(StreamCode { chain, codebook })
    }

    pub fn chain(&self) -> &NestedChain {
        &self.chain
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    pub fn rate(&self) -> f64 {
        self.codebook.rate()
    }

    pub fn len(&self) -> usize {
        self.codebook.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codebook.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.chain.dim()
    }

    /// `σ²(Λ)` of the shaping lattice.
    pub fn power(&self) -> f64 {
        self.chain.level(0).second_moment().unwrap_or(f64::NAN)
    }

    /// The same chain with a fresh message map.
    pub fn reseeded(&self, seed: u64) -> Result<Self> {
        StreamCode::new(self.chain.clone(), seed)
    }

    /// The code scaled so that `σ²(Λ) = power`, keeping the message map.
    pub fn with_power(&self, power: f64) -> Result<Self> {
        StreamCode::new(self.chain.with_power(0, power)?, self.codebook.seed())
    }

    /// List sizes `V_s / V_c` offered by the chain levels, coarse to fine.
    pub fn list_sizes(&self) -> Vec<u64> {
        let last = self.chain.len() - 1;
        (0..=last).map(|j| self.chain.index(j, last)).collect()
    }

    /// List decoder on the chain level with the smallest list size `≥ target`.
    pub fn list_decoder(&self, target: f64) -> Result<ListDecoder> {
        let sizes = self.list_sizes();
        let j = (0..sizes.len())
            .rev()
            .find(|&j| sizes[j] as f64 >= target)
            .unwrap_or(0);
        ListDecoder::new(&self.codebook, self.chain.level(j))
    }

    /// List decoder for a codeword received with power `signal` in noise of variance `noise`:
    /// target size `margin · |C| · (noise/(signal + noise))^{n/2}`.
    pub fn list_decoder_for(&self, signal: f64, noise: f64, margin: f64) -> Result<ListDecoder> {
        if !(signal > 0.0) {
            return self.list_decoder(self.len() as f64);
        }
        let n = self.dim() as f64;
        let target = margin * self.len() as f64 * (noise / (signal + noise)).powf(n / 2.0);
        self.list_decoder(target)
    }
}

/// Codes of two users sharing the fine lattice, `Λ_a ⊆ Λ_b` with `a` the stronger user.
#[derive(Debug, Clone)]
pub(crate) struct SharedChains {
    /// `Λ_a ⊆ … ⊆ F`, scaled to `σ²(Λ_a) = power_a`.
    pub full: NestedChain,
    pub code_a: NestedChain,
    pub code_b: NestedChain,
}

impl Family {
    /// Chains for a pair of users with powers `power_a ≥ power_b > 0` and target rates.
    pub fn shared(&self, power_a: f64, power_b: f64, targets: [f64; 2], rounding: Rounding) -> Result<SharedChains> {
        if !(power_a >= power_b) || !(power_b > 0.0) {
            return Err(Error::param("p", "shared chains need P_a ≥ P_b > 0"));
        }
        let ratio = power_a / power_b;
        let r_step = if self.octonion {
            (ratio - 1e-9).ceil().max(1.0) as u64
        } else {
            (ratio.sqrt() - 1e-9).ceil().max(1.0) as u64
        };
        let pre = if r_step > 1 { self.steps(r_step) } else { Vec::new() };
        let top_a = targets[0] > targets[1];
        let n = self.dim() as f64;
        // Size of the pure similarity between Λ_b and F.
        let max = self.max_step();
        let mut ks: Vec<(f64, u64)> = Vec::new();
        for k in 1..=max {
            let idx_b = self.step_index(k);
            let idx_a = idx_b * self.step_index(r_step).max(1.0);
            if idx_a > DEFAULT_ENUMERATION_CAP as f64 {
                break;
            }
            let rate = if top_a { idx_a.log2() / n } else { idx_b.log2() / n };
            ks.push((rate, k));
        }
        let top_target = if top_a { targets[0] } else { targets[1] };
        let (_, k) = choose(&ks, top_target, rounding, |o| o.0)
            .ok_or_else(|| Error::NoCode(format!("rate {top_target:.4} at dimension {}", self.dim())))?;
        let mut steps = pre.clone();
        steps.extend(self.steps(k));
        let full = self.chain(&steps)?.with_power(0, power_a)?;
        let b_level = pre.len();
        let last = full.len() - 1;

        // The other user: a chain level or a cyclic extension of its own shaping lattice.
        let (other_level, other_target) = if top_a { (b_level, targets[1]) } else { (0, targets[0]) };
        let coarse = full.level(other_level).clone();
        let fine = full.level(last).clone();
        enum Opt {
            Level(usize),
            Cyclic(u64),
        }
        let mut options: Vec<(f64, usize)> = Vec::new();
        let mut kinds: Vec<Opt> = Vec::new();
        for j in other_level..=last {
            options.push(((full.index(other_level, j) as f64).log2() / n, kinds.len()));
            kinds.push(Opt::Level(j));
        }
        let size = full.index(other_level, last);
        for m in 2..=MAX_CYCLIC.min(size) {
            if size % m == 0 {
                options.push(((m as f64).log2() / n, kinds.len()));
                kinds.push(Opt::Cyclic(m));
            }
        }
        let mut order: Vec<usize> = (0..options.len()).collect();
        order.sort_by(|&x, &y| options[x].0.partial_cmp(&options[y].0).unwrap_or(std::cmp::Ordering::Equal));
        let sorted: Vec<(f64, usize)> = order.iter().map(|&i| options[i]).collect();
        let mut sorted = sorted;
        let other = loop {
            let mut pick = choose(&sorted, other_target, rounding, |o| o.0);
            if pick.is_none() && rounding == Rounding::Down {
                pick = sorted.first().copied();
            }
            let (_, which) =
                pick.ok_or_else(|| Error::NoCode(format!("rate {other_target:.4} for the second user")))?;
            match kinds[which] {
                Opt::Level(j) => break NestedChain::new(full.levels()[other_level..=j].to_vec())?,
                Opt::Cyclic(m) => match cyclic_extension(&coarse, &fine, m) {
                    Ok(ext) => break NestedChain::new(vec![coarse.clone(), ext])?,
                    Err(Error::NoCode(_)) => sorted.retain(|o| o.1 != which),
                    Err(e) => return Err(e),
                },
            }
        };
        let top = NestedChain::new(full.levels()[if top_a { 0 } else { b_level }..].to_vec())?;
        let (code_a, code_b) = if top_a { (top, other) } else { (other, top) };
        Ok(SharedChains { full, code_a, code_b })
    }
}
