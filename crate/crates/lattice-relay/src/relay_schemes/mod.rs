//! Block-Markov simulations of the lattice relaying schemes.
//!
//! Every scheme follows the same pattern: a `*Setup` fixes the codes, power
//! splits and list lattices for one channel, and a `simulate_*` function runs
//! independent trials of `B` blocks each. Trial `t` draws all of its
//! randomness from ChaCha8 streams keyed by `SHA-256(seed ‖ t)`, so any
//! trial can be replayed alone and results do not depend on the thread count.
//!
//! Encoders send `(t − U) mod Λ` and receivers add `U` back before reducing.

pub mod algebra;
pub mod cf;
pub mod design;
pub mod df;
pub mod multiuser;
pub mod params;
pub mod wz;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use algebra::{recover_t1_from_t, recover_t2_from_t, relay_sum_decode, sum_codeword};
pub use cf::{simulate_cf, CfSetup};
pub use design::{DesignParams, Rounding, StreamCode};
pub use df::{simulate_df_relay, simulate_df_two_relay, DfSetup, TwoRelaySetup};
pub use multiuser::{simulate_marc, simulate_twrc, MarcSetup, PairCodes, TwrcSetup};
pub use params::{ChannelParams, MarcParams, RelayParams, Topology, TwoRelayParams, TwrcParams};
pub use wz::{wz_decode, wz_encode, WzPair};

/// Trial count, block count and master seed of a Monte-Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub blocks: usize,
    pub trials: usize,
    pub seed: u64,
}

impl MonteCarlo {
    pub fn new(blocks: usize, trials: usize, seed: u64) -> Self {
        MonteCarlo { blocks, trials, seed }
    }

    pub(crate) fn validate(&self, min_blocks: usize) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials", "at least one trial is required"));
        }
        if self.blocks < min_blocks {
            return Err(Error::param("blocks", format!("this scheme needs at least {min_blocks} blocks")));
        }
        Ok(())
    }
}

/// Seed of trial `trial`: `SHA-256(master_le ‖ trial_le)`.
pub fn trial_seed(master: u64, trial: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(trial.to_le_bytes());
    h.finalize().into()
}

/// Seed of the codebook message map labelled `label`.
pub fn codebook_seed(master: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(b"codebook:");
    h.update(label.as_bytes());
    let d: [u8; 32] = h.finalize().into();
    u64::from_le_bytes(d[..8].try_into().expect("eight bytes"))
}

/// ChaCha8 stream `id` of a trial.
pub(crate) fn substream(seed: &[u8; 32], id: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::from_seed(*seed);
    r.set_stream(id);
    r
}

/// Description of how trial randomness is derived, stamped into reports.
pub const SUBSTREAMS: &str = "trial seed SHA-256(master_le || trial_le); ChaCha8 stream ids per node";

pub(crate) fn gaussian<R: Rng>(rng: &mut R, n: usize, variance: f64) -> Vec<f64> {
    let s = variance.sqrt();
    (0..n).map(|_| s * rng.sample::<f64, _>(StandardNormal)).collect()
}

pub(crate) fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (v, w) in y.iter_mut().zip(x) {
        *v += a * w;
    }
}

pub(crate) fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
}

/// Scale of the MMSE estimate of a codeword of power `sigma2` sent with
/// amplitude `amp` through noise of variance `noise`.
pub(crate) fn mmse_scale(amp: f64, sigma2: f64, noise: f64) -> f64 {
    if amp == 0.0 {
        0.0
    } else {
        amp * sigma2 / (amp * amp * sigma2 + noise)
    }
}

/// Sorted intersection of two sorted message lists.
pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Target, realized and block-Markov effective rate of one message stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRecord {
    pub stream: String,
    /// Asymptotic formula value at the simulated power split.
    pub formula: f64,
    pub target: f64,
    pub nominal: f64,
    /// `nominal · (fresh blocks)/B`.
    pub effective: f64,
}

/// Decoding outcome of one node for one message stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeStats {
    pub node: String,
    pub stream: String,
    /// Whether the node is a final destination of the stream.
    pub destination: bool,
    pub messages: u64,
    pub errors: u64,
    /// Empty list intersections.
    pub misses: u64,
    /// Intersections holding more than one message.
    pub ambiguities: u64,
    pub error_rate: f64,
}

/// One list-decoding stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageStats {
    pub stage: String,
    /// `V_s / V_c` of the configured list lattice.
    pub list_size: u64,
    pub mean_list_size: f64,
    /// Fraction of decodes whose list held the transmitted message.
    pub in_list_rate: f64,
    pub decodes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerStats {
    pub node: String,
    pub budget: f64,
    /// Mean of `(1/n)‖X‖²` over all transmitted blocks.
    pub mean: f64,
    pub max_block: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionStats {
    pub configured: f64,
    /// Mean of `(1/n)‖Ŷ_R − Y_R‖²`.
    pub achieved: f64,
    pub samples: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub master: u64,
    pub substreams: String,
    pub codebooks: Vec<(String, u64)>,
}

/// Aggregated outcome of a simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub topology: Topology,
    pub scheme: String,
    pub n: usize,
    pub blocks: usize,
    pub trials: usize,
    pub rates: Vec<RateRecord>,
    pub nodes: Vec<NodeStats>,
    /// Largest error rate among destination entries of `nodes`.
    pub error_rate: f64,
    pub stages: Vec<StageStats>,
    pub power: Vec<PowerStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distortion: Option<DistortionStats>,
    /// Pearson correlation between the memberships of a fixed wrong message in two independent lists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub list_correlation: Option<f64>,
    pub seeds: SeedRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_map: Option<String>,
    pub notes: Vec<String>,
    /// Not serialized.
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl SimReport {
    pub fn node(&self, node: &str, stream: &str) -> Option<&NodeStats> {
        self.nodes.iter().find(|s| s.node == node && s.stream == stream)
    }

    pub fn stage(&self, stage: &str) -> Option<&StageStats> {
        self.stages.iter().find(|s| s.stage == stage)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct NodeCount {
    pub messages: u64,
    pub errors: u64,
    pub misses: u64,
    pub ambiguities: u64,
}

impl NodeCount {
    pub fn record(&mut self, truth: usize, decoded: usize) {
        self.messages += 1;
        if truth != decoded {
            self.errors += 1;
        }
    }

    /// Resolves an intersection: its only element, else the fallback.
    pub fn resolve(&mut self, cands: &[usize], fallback: usize) -> usize {
        match cands.len() {
            0 => {
                self.misses += 1;
                fallback
            }
            1 => cands[0],
            _ => {
                self.ambiguities += 1;
                cands[0]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct StageCount {
    pub decodes: u64,
    pub size_sum: u64,
    pub hits: u64,
}

impl StageCount {
    pub fn record(&mut self, list: &[usize], truth: usize) {
        self.decodes += 1;
        self.size_sum += list.len() as u64;
        if list.binary_search(&truth).is_ok() {
            self.hits += 1;
        }
    }
}

/// Per-trial counters, merged in trial order.
#[derive(Debug, Clone, Default)]
pub(crate) struct Tally {
    pub nodes: Vec<NodeCount>,
    pub stages: Vec<StageCount>,
    /// `(sum, blocks, max)` of per-block power per transmitter.
    pub power: Vec<(f64, u64, f64)>,
    pub distortion: (f64, u64),
    /// Indicator sums `n, Σx, Σy, Σxy` for the list-correlation diagnostic.
    pub corr: [u64; 4],
}

impl Tally {
    pub fn new(nodes: usize, stages: usize, transmitters: usize) -> Self {
        Tally {
            nodes: vec![NodeCount::default(); nodes],
            stages: vec![StageCount::default(); stages],
            power: vec![(0.0, 0, 0.0); transmitters],
            distortion: (0.0, 0),
            corr: [0; 4],
        }
    }

    pub fn power(&mut self, tx: usize, x: &[f64]) {
        let e = energy(x);
        let p = &mut self.power[tx];
        p.0 += e;
        p.1 += 1;
        p.2 = p.2.max(e);
    }

    fn merge(&mut self, o: &Tally) {
        for (a, b) in self.nodes.iter_mut().zip(&o.nodes) {
            a.messages += b.messages;
            a.errors += b.errors;
            a.misses += b.misses;
            a.ambiguities += b.ambiguities;
        }
        for (a, b) in self.stages.iter_mut().zip(&o.stages) {
            a.decodes += b.decodes;
            a.size_sum += b.size_sum;
            a.hits += b.hits;
        }
        for (a, b) in self.power.iter_mut().zip(&o.power) {
            a.0 += b.0;
            a.1 += b.1;
            a.2 = a.2.max(b.2);
        }
        self.distortion.0 += o.distortion.0;
        self.distortion.1 += o.distortion.1;
        for k in 0..4 {
            self.corr[k] += o.corr[k];
        }
    }
}

/// Runs `trial` for every trial index in parallel and merges the tallies in index order.
pub(crate) fn run_trials<F>(mc: &MonteCarlo, trial: F) -> Result<(Tally, f64)>
where
    F: Fn(&[u8; 32]) -> Result<Tally> + Sync,
{
    let start = Instant::now();
    let parts: Vec<Result<Tally>> = (0..mc.trials as u64)
        .into_par_iter()
        .map(|t| trial(&trial_seed(mc.seed, t)))
        .collect();
    let mut total: Option<Tally> = None;
    for p in parts {
        let p = p?;
        match total.as_mut() {
            None => total = Some(p),
            Some(t) => t.merge(&p),
        }
    }
    Ok((total.expect("at least one trial"), start.elapsed().as_secs_f64()))
}

/// Static description of the nodes, stages and transmitters of a scheme.
pub(crate) struct Layout {
    /// `(node, stream, destination)`.
    pub nodes: Vec<(String, String, bool)>,
    /// `(stage, list size)`.
    pub stages: Vec<(String, u64)>,
    /// `(transmitter, budget)`.
    pub transmitters: Vec<(String, f64)>,
}

impl Layout {
    pub fn tally(&self) -> Tally {
        Tally::new(self.nodes.len(), self.stages.len(), self.transmitters.len())
    }
}

pub(crate) struct ReportBase {
    pub topology: Topology,
    pub scheme: &'static str,
    pub n: usize,
    pub rates: Vec<RateRecord>,
    pub codebooks: Vec<(String, u64)>,
    pub index_map: Option<String>,
    pub notes: Vec<String>,
    pub configured_distortion: Option<f64>,
}

pub(crate) fn build_report(base: ReportBase, layout: &Layout, mc: &MonteCarlo, tally: &Tally, wall: f64) -> SimReport {
    let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let nodes: Vec<NodeStats> = layout
        .nodes
        .iter()
        .zip(&tally.nodes)
        .map(|((node, stream, dest), c)| NodeStats {
            node: node.clone(),
            stream: stream.clone(),
            destination: *dest,
            messages: c.messages,
            errors: c.errors,
            misses: c.misses,
            ambiguities: c.ambiguities,
            error_rate: ratio(c.errors, c.messages),
        })
        .collect();
    let error_rate = nodes
        .iter()
        .filter(|s| s.destination)
        .map(|s| s.error_rate)
        .fold(0.0, f64::max);
    let stages = layout
        .stages
        .iter()
        .zip(&tally.stages)
        .map(|((stage, size), c)| StageStats {
            stage: stage.clone(),
            list_size: *size,
            mean_list_size: ratio(c.size_sum, c.decodes),
            in_list_rate: ratio(c.hits, c.decodes),
            decodes: c.decodes,
        })
        .collect();
    let power = layout
        .transmitters
        .iter()
        .zip(&tally.power)
        .map(|((node, budget), p)| PowerStats {
            node: node.clone(),
            budget: *budget,
            mean: if p.1 == 0 { 0.0 } else { p.0 / p.1 as f64 },
            max_block: p.2,
        })
        .collect();
    let distortion = base.configured_distortion.map(|d| DistortionStats {
        configured: d,
        achieved: if tally.distortion.1 == 0 {
            f64::NAN
        } else {
            tally.distortion.0 / tally.distortion.1 as f64
        },
        samples: tally.distortion.1,
    });
    let [cn, cx, cy, cxy] = tally.corr.map(|v| v as f64);
    let list_correlation = if cn > 0.0 {
        let vx = cx / cn - (cx / cn).powi(2);
        let vy = cy / cn - (cy / cn).powi(2);
        if vx > 0.0 && vy > 0.0 {
            Some((cxy / cn - cx * cy / (cn * cn)) / (vx * vy).sqrt())
        } else {
            None
        }
    } else {
        None
    };
    SimReport {
        topology: base.topology,
        scheme: base.scheme.to_string(),
        n: base.n,
        blocks: mc.blocks,
        trials: mc.trials,
        rates: base.rates,
        nodes,
        error_rate,
        stages,
        power,
        distortion,
        list_correlation,
        seeds: SeedRecord {
            master: mc.seed,
            substreams: SUBSTREAMS.to_string(),
            codebooks: base.codebooks,
        },
        index_map: base.index_map,
        notes: base.notes,
        wall_time_s: wall,
    }
}

/// Uniformly drawn message of a codebook of `size` messages.
pub(crate) fn draw_message<R: Rng>(rng: &mut R, size: usize) -> usize {
    rng.random_range(0..size)
}
