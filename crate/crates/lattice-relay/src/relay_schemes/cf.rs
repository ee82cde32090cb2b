//! Compress-and-forward with lattice Wyner-Ziv quantization at the relay.

use crate::error::{Error, Result};
use crate::lattice_core::capacity_c;
use crate::list_decoding::unique_decode;
use crate::rate_regions::{cf_min_distortion, cf_rate, cf_rate_at_distortion, wz_conditional_variance};

use super::design::{DesignParams, StreamCode};
use super::params::{RelayParams, Topology};
use super::wz::WzPair;
use super::{
    axpy, build_report, codebook_seed, draw_message, energy, gaussian, mmse_scale, run_trials, substream, Layout,
    MonteCarlo, RateRecord, ReportBase, SimReport, Tally,
};

/// Relay half of the scheme: the Wyner-Ziv pair and the codebook carrying its index.
#[derive(Debug, Clone)]
pub struct CfRelay {
    pub wz: WzPair,
    /// Unit-power codebook whose message `i` carries index `i`.
    pub code: StreamCode,
    /// `σ²(Λ_q)`.
    pub distortion: f64,
}

/// Codes of the compress-and-forward scheme.
#[derive(Debug, Clone)]
pub struct CfSetup {
    /// Unit-power source codebook sent with amplitude `√P`.
    pub source: StreamCode,
    /// `None` when no quantizer fits the relay link; the relay then stays silent.
    pub relay: Option<CfRelay>,
    pub formula: f64,
    pub target: f64,
    pub notes: Vec<String>,
}

impl CfSetup {
    pub fn design(p: &RelayParams, d: &DesignParams, seed: u64) -> Result<Self> {
        p.validate()?;
        d.validate()?;
        let fam = d.family()?;
        let formula = cf_rate(p)?.coordinates[0];
        let target = d.target(0, formula)?;
        let source = StreamCode::new(fam.single_code(target, d.rounding())?, codebook_seed(seed, "cf/source"))?;
        let sc = wz_conditional_variance(p.p, p.n_r, p.n_d);
        let m = d.wz_margin;
        let sims = fam.similarities();
        let mut notes = Vec::new();

        let pick = match d.distortion {
            Some(dist) => {
                cf_rate_at_distortion(p, dist)?;
                let need = m * (sc + dist) / dist;
                let (k, _, _) = *sims
                    .iter()
                    .find(|s| s.2 >= need)
                    .ok_or_else(|| Error::NoCode(format!("a Wyner-Ziv pair for distortion {dist}")))?;
                Some((k, dist))
            }
            None if p.p_r > 0.0 => {
                let budget = d.rate_fraction.min(1.0) * capacity_c(p.p_r / (p.p + p.n_d))?;
                let dmin = cf_min_distortion(p).unwrap_or(f64::INFINITY);
                sims.iter()
                    .rev()
                    .find(|s| s.1 <= budget && s.2 > m)
                    .map(|&(k, _, g)| (k, (m * sc / (g - m)).max(dmin)))
            }
            None => None,
        };
        let relay = match pick {
            Some((k, dist)) => {
                let chain = fam.chain(&fam.steps(k))?;
                let last = chain.len() - 1;
                let q = chain.with_power(last, dist)?;
                let wz = WzPair::new(q.level(last), q.level(0))?;
                let code = StreamCode::new(chain.with_power(0, 1.0)?, codebook_seed(seed, "cf/relay"))?;
                notes.push(format!("quantizer distortion {dist:.6}, index rate {:.6}", wz.rate()));
                Some(CfRelay {
                    wz,
                    code,
                    distortion: dist,
                })
            }
            None => {
                notes.push("no Wyner-Ziv pair fits the relay link; relay silent, direct link only".into());
                None
            }
        };
        Ok(CfSetup {
            source,
            relay,
            formula,
            target,
            notes,
        })
    }

    /// Distortion of the quantizer, infinite when the relay is silent.
    pub fn distortion(&self) -> f64 {
        self.relay.as_ref().map_or(f64::INFINITY, |r| r.distortion)
    }
}

const NOISE: u64 = 0;
const SOURCE: u64 = 1;
const RELAY: u64 = 2;

/// Block-Markov compress-and-forward.
///
/// In block `b` the source sends `w_b` and the relay sends the Wyner-Ziv index of
/// `Y_R(b−1)`. The destination decodes that index treating the source as noise,
/// rebuilds `Ŷ_R(b−1)` with `Y_D(b−1)` as side information, combines the two
/// observations and decodes `w_{b−1}`.
pub fn simulate_cf(p: &RelayParams, s: &CfSetup, mc: &MonteCarlo) -> Result<SimReport> {
    p.validate()?;
    mc.validate(2)?;
    let n = s.source.dim();
    let blocks = mc.blocks;
    let m = s.source.len();
    let amp = p.p.sqrt();
    let amp_r = p.p_r.sqrt();
    let relay = s.relay.as_ref().filter(|_| p.p_r > 0.0);
    let side_alpha = p.p / (p.p + p.n_d);
    let index_scale = mmse_scale(amp_r, 1.0, p.p + p.n_d);
    let (combined_noise, w_relay) = match relay {
        Some(r) => {
            let inv = 1.0 / p.n_d + 1.0 / (p.n_r + r.distortion);
            (1.0 / inv, (1.0 / (p.n_r + r.distortion)) / inv)
        }
        None => (p.n_d, 0.0),
    };
    let source_scale = mmse_scale(amp, 1.0, combined_noise);
    let mut nodes = vec![("destination".to_string(), "w".to_string(), true)];
    if relay.is_some() {
        nodes.push(("destination".into(), "index".into(), false));
    }
    let layout = Layout {
        nodes,
        stages: Vec::new(),
        transmitters: vec![("source".into(), p.p), ("relay".into(), p.p_r)],
    };

    let trial = |seed: &[u8; 32]| -> Result<Tally> {
        let mut t = layout.tally();
        let mut src = substream(seed, SOURCE);
        let mut rrng = substream(seed, RELAY);
        let mut noise = substream(seed, NOISE);
        let mut w = vec![0usize; blocks + 1];
        let mut index = vec![0usize; blocks + 1];
        let mut index_hat = vec![0usize; blocks + 1];
        let mut yr_hist: Vec<Vec<f64>> = vec![vec![]; blocks + 1];
        let mut side_hist: Vec<Vec<f64>> = vec![vec![]; blocks + 1];
        let mut uq_hist: Vec<Vec<f64>> = vec![vec![]; blocks + 1];
        let mut us_hist: Vec<Vec<f64>> = vec![vec![]; blocks + 1];
        for b in 1..=blocks {
            let fresh = b < blocks;
            if fresh {
                w[b] = draw_message(&mut src, m);
            }
            let u = s.source.chain().level(0).sample_voronoi_uniform(&mut src);
            let mut xs = s.source.codebook().encode(w[b], &u)?;
            xs.iter_mut().for_each(|v| *v *= amp);
            t.power(0, &xs);
            let mut yr = xs.clone();
            axpy(&mut yr, 1.0, &gaussian(&mut noise, n, p.n_r));
            let mut yd = xs;
            axpy(&mut yd, 1.0, &gaussian(&mut noise, n, p.n_d));

            let side = match relay {
                Some(r) => {
                    let ur = r.code.chain().level(0).sample_voronoi_uniform(&mut rrng);
                    let uq = r.wz.quantizer().sample_voronoi_uniform(&mut rrng);
                    let mut xr = r.code.codebook().encode(index[b - 1], &ur)?;
                    xr.iter_mut().for_each(|v| *v *= amp_r);
                    t.power(1, &xr);
                    axpy(&mut yd, 1.0, &xr);
                    if fresh {
                        index[b] = r.wz.encode(&yr, &uq, 1.0)? as usize;
                    }
                    if b >= 2 {
                        index_hat[b - 1] = unique_decode(r.code.codebook(), &yd, &ur, index_scale)?;
                        t.nodes[1].record(index[b - 1], index_hat[b - 1]);
                    }
                    let mut side = r.code.codebook().encode(index_hat[b - 1], &ur)?;
                    side.iter_mut().for_each(|v| *v *= -amp_r);
                    axpy(&mut side, 1.0, &yd);
                    uq_hist[b] = uq;
                    side
                }
                None => {
                    t.power(1, &vec![0.0; n]);
                    yd
                }
            };

            if b >= 2 {
                let prev = &side_hist[b - 1];
                let combined = match relay {
                    Some(r) => {
                        let yhat = r.wz.decode(index_hat[b - 1] as u64, prev, &uq_hist[b - 1], 1.0, side_alpha)?;
                        let diff: Vec<f64> = yhat.iter().zip(&yr_hist[b - 1]).map(|(a, c)| a - c).collect();
                        t.distortion.0 += energy(&diff);
                        t.distortion.1 += 1;
                        let mut c: Vec<f64> = prev.iter().map(|v| v * (1.0 - w_relay)).collect();
                        axpy(&mut c, w_relay, &yhat);
                        c
                    }
                    None => prev.clone(),
                };
                let decoded = unique_decode(s.source.codebook(), &combined, &us_hist[b - 1], source_scale)?;
                t.nodes[0].record(w[b - 1], decoded);
            }
            us_hist[b] = u;
            yr_hist[b] = yr;
            side_hist[b] = side;
        }
        Ok(t)
    };
    let (tally, wall) = run_trials(mc, trial)?;
    let base = ReportBase {
        topology: Topology::Relay,
        scheme: "cf",
        n,
        rates: vec![RateRecord {
            stream: "w".into(),
            formula: s.formula,
            target: s.target,
            nominal: s.source.rate(),
            effective: s.source.rate() * (blocks - 1) as f64 / blocks as f64,
        }],
        codebooks: std::iter::once(("source".to_string(), s.source.codebook().seed()))
            .chain(relay.map(|r| ("relay".to_string(), r.code.codebook().seed())))
            .collect(),
        index_map: None,
        notes: s.notes.clone(),
        configured_distortion: relay.map(|r| r.distortion),
    };
    Ok(build_report(base, &layout, mc, &tally, wall))
}
