//! Decode-and-forward over one relay and over two relays in series.

use crate::error::{Error, Result};
use crate::list_decoding::{list_decode, unique_decode, ListDecoder};
use crate::rate_regions::{df_rate, df_rate_at, df_two_relay_rate, df_two_relay_rate_at};

use super::design::{DesignParams, StreamCode};
use super::params::{RelayParams, Topology, TwoRelayParams};
use super::{
    axpy, build_report, codebook_seed, draw_message, gaussian, intersect, mmse_scale, run_trials, substream,
    Layout, MonteCarlo, RateRecord, ReportBase, SimReport, Tally,
};

/// Codes and list lattices of single-relay decode-and-forward.
///
/// Both codebooks share one unit-power chain and differ in their message maps.
/// The cooperative stream is described by its combined amplitude at the
/// destination, `√(ᾱP) + √P_R`, so `ᾱ = 0` needs no special case.
#[derive(Debug, Clone)]
pub struct DfSetup {
    pub alpha: f64,
    /// Fresh-message codebook `𝒞₁`.
    pub fresh: StreamCode,
    /// Cooperative codebook `𝒞₂`.
    pub coop: StreamCode,
    /// `Λ_{s1}` for the direct list.
    pub direct_list: ListDecoder,
    /// `Λ_{s2}` for the relayed list.
    pub relayed_list: ListDecoder,
    pub formula: f64,
    pub target: f64,
}

impl DfSetup {
    /// Codes for `p` at the optimizing (or configured) power split.
    pub fn design(p: &RelayParams, d: &DesignParams, seed: u64) -> Result<Self> {
        p.validate()?;
        d.validate()?;
        let alpha = match &d.splits {
            Some(s) => *s.first().ok_or_else(|| Error::param("splits", "expected [alpha]"))?,
            None => df_rate(p)?.args.alpha.unwrap_or(1.0),
        };
        let formula = df_rate_at(p, alpha)?;
        let target = d.target(0, formula)?;
        let chain = d.family()?.single_code(target, d.rounding())?;
        let fresh = StreamCode::new(chain.clone(), codebook_seed(seed, "df/fresh"))?;
        let coop = StreamCode::new(chain, codebook_seed(seed, "df/coop"))?;
        Self::with_codes(p, alpha, fresh, coop, d.list_margin, formula, target)
    }

    /// Setup around given unit-power codebooks; list lattices follow the list-volume rule.
    pub fn with_codes(
        p: &RelayParams,
        alpha: f64,
        fresh: StreamCode,
        coop: StreamCode,
        margin: f64,
        formula: f64,
        target: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::param("alpha", "must lie in [0, 1]"));
        }
        if fresh.len() != coop.len() || fresh.dim() != coop.dim() {
            return Err(Error::param("chains", "both codebooks must carry the same message set"));
        }
        for c in [&fresh, &coop] {
            if (c.power() - 1.0).abs() > 1e-9 {
                return Err(Error::param("chains", "codebooks must have unit shaping power"));
            }
        }
        let amp = coop_amplitude(p, alpha);
        let direct_list = fresh.list_decoder_for(alpha * p.p, p.n_d, margin)?;
        let relayed_list = coop.list_decoder_for(amp * amp, alpha * p.p + p.n_d, margin)?;
        Ok(DfSetup {
            alpha,
            fresh,
            coop,
            direct_list,
            relayed_list,
            formula,
            target,
        })
    }
}

fn coop_amplitude(p: &RelayParams, alpha: f64) -> f64 {
    ((1.0 - alpha) * p.p).sqrt() + p.p_r.sqrt()
}

fn dither(code: &StreamCode, rng: &mut impl rand::Rng) -> Vec<f64> {
    code.chain().level(0).sample_voronoi_uniform(rng)
}

fn word(code: &StreamCode, w: usize, u: &[f64]) -> Result<Vec<f64>> {
    code.codebook().encode(w, u)
}

fn rate_record(stream: &str, formula: f64, target: f64, nominal: f64, fresh: usize, blocks: usize) -> RateRecord {
    RateRecord {
        stream: stream.into(),
        formula,
        target,
        nominal,
        effective: nominal * fresh as f64 / blocks as f64,
    }
}

const NOISE: u64 = 0;
const SOURCE: u64 = 1;

/// Single-relay block-Markov decode-and-forward.
///
/// Block `b` carries `X_S = a₁X₁′(w_b) + s₂X₂′(w_{b−1})` from the source and
/// `r₂X₂′(ŵ_{b−1})` from the relay, with `w₀` and `w_B` known fillers.
pub fn simulate_df_relay(p: &RelayParams, s: &DfSetup, mc: &MonteCarlo) -> Result<SimReport> {
    p.validate()?;
    mc.validate(2)?;
    let n = s.fresh.dim();
    let blocks = mc.blocks;
    let m = s.fresh.len();
    let a1 = (s.alpha * p.p).sqrt();
    let s2 = ((1.0 - s.alpha) * p.p).sqrt();
    let r2 = p.p_r.sqrt();
    let amp = s2 + r2;
    let relay_scale = mmse_scale(a1, 1.0, p.n_r);
    let direct_scale = mmse_scale(a1, 1.0, p.n_d);
    let relayed_scale = mmse_scale(amp, 1.0, a1 * a1 + p.n_d);
    let wrong = m - 1;

    let layout = Layout {
        nodes: vec![("relay".into(), "w".into(), false), ("destination".into(), "w".into(), true)],
        stages: vec![
            ("destination/direct".into(), s.direct_list.exact_size()),
            ("destination/relayed".into(), s.relayed_list.exact_size()),
        ],
        transmitters: vec![("source".into(), p.p), ("relay".into(), p.p_r)],
    };

    let trial = |seed: &[u8; 32]| -> Result<Tally> {
        let mut t = layout.tally();
        let mut src = substream(seed, SOURCE);
        let mut noise = substream(seed, NOISE);
        let mut w = vec![0usize; blocks + 1];
        let mut w_relay = vec![0usize; blocks + 1];
        let mut w_dest = vec![0usize; blocks + 1];
        let mut direct_prev: Option<Vec<usize>> = None;
        for b in 1..=blocks {
            let fresh = b < blocks;
            if fresh {
                w[b] = draw_message(&mut src, m);
            }
            let u1 = dither(&s.fresh, &mut src);
            let u2 = dither(&s.coop, &mut src);
            let x1 = word(&s.fresh, w[b], &u1)?;
            let x2 = word(&s.coop, w[b - 1], &u2)?;
            let mut xs = vec![0.0; n];
            axpy(&mut xs, a1, &x1);
            axpy(&mut xs, s2, &x2);
            let mut xr = vec![0.0; n];
            axpy(&mut xr, r2, &word(&s.coop, w_relay[b - 1], &u2)?);
            t.power(0, &xs);
            t.power(1, &xr);
            let mut yr = xs.clone();
            axpy(&mut yr, 1.0, &gaussian(&mut noise, n, p.n_r));
            let mut yd = xs.clone();
            axpy(&mut yd, 1.0, &xr);
            axpy(&mut yd, 1.0, &gaussian(&mut noise, n, p.n_d));

            if fresh {
                let mut y = yr.clone();
                axpy(&mut y, -s2, &word(&s.coop, w_relay[b - 1], &u2)?);
                w_relay[b] = unique_decode(s.fresh.codebook(), &y, &u1, relay_scale)?;
                t.nodes[0].record(w[b], w_relay[b]);
            }

            if b >= 2 {
                let relayed = list_decode(&s.relayed_list, s.coop.codebook(), &yd, &u2, relayed_scale)?.messages;
                t.stages[1].record(&relayed, w[b - 1]);
                let direct = direct_prev.take().expect("direct list of the previous block");
                if w[b - 1] != wrong {
                    let x = relayed.binary_search(&wrong).is_ok() as u64;
                    let y = direct.binary_search(&wrong).is_ok() as u64;
                    t.corr[0] += 1;
                    t.corr[1] += x;
                    t.corr[2] += y;
                    t.corr[3] += x * y;
                }
                let both = intersect(&relayed, &direct);
                let fallback = direct.first().copied().unwrap_or(0);
                w_dest[b - 1] = t.nodes[1].resolve(&both, fallback);
                t.nodes[1].record(w[b - 1], w_dest[b - 1]);
            }
            if fresh {
                let mut y = yd.clone();
                axpy(&mut y, -amp, &word(&s.coop, w_dest[b - 1], &u2)?);
                let direct = list_decode(&s.direct_list, s.fresh.codebook(), &y, &u1, direct_scale)?.messages;
                t.stages[0].record(&direct, w[b]);
                direct_prev = Some(direct);
            }
        }
        Ok(t)
    };
    let (tally, wall) = run_trials(mc, trial)?;
    let mut notes = Vec::new();
    if amp == 0.0 {
        notes.push("cooperative stream has zero amplitude; destination relies on the direct list".into());
    }
    let base = ReportBase {
        topology: Topology::Relay,
        scheme: "df",
        n,
        rates: vec![rate_record("w", s.formula, s.target, s.fresh.rate(), blocks - 1, blocks)],
        codebooks: vec![
            ("fresh".into(), s.fresh.codebook().seed()),
            ("coop".into(), s.coop.codebook().seed()),
        ],
        index_map: None,
        notes,
        configured_distortion: None,
    };
    Ok(build_report(base, &layout, mc, &tally, wall))
}

/// Codes and list lattices of two-relay decode-and-forward.
///
/// The source superposes three codebooks carrying `w_b`, `w_{b−1}` and `w_{b−2}`.
/// The first relay in `order` decodes uniquely, the second intersects two lists
/// and the destination intersects three.
#[derive(Debug, Clone)]
pub struct TwoRelaySetup {
    /// `[α₁, β₁, α₂]`.
    pub splits: [f64; 3],
    /// `[π(2), π(3)]`: the first relay is node `order[0]`.
    pub order: [u8; 2],
    pub codes: [StreamCode; 3],
    /// Second relay: lists of `𝒞₂` and `𝒞₁`.
    pub relay_lists: [ListDecoder; 2],
    /// Destination: lists of `𝒞₃`, `𝒞₂`, `𝒞₁`.
    pub dest_lists: [ListDecoder; 3],
    pub formula: f64,
    pub target: f64,
}

struct TwoRelayAmps {
    a1: f64,
    s2: f64,
    s3: f64,
    ra2: f64,
    ra3: f64,
    rb3: f64,
    na: f64,
    nb: f64,
    pa: f64,
    pb: f64,
}

impl TwoRelayAmps {
    fn new(p: &TwoRelayParams, x: [f64; 3], order: [u8; 2]) -> Self {
        let (na, nb, pa, pb) = if order == [3, 2] {
            (p.n3, p.n2, p.p3, p.p2)
        } else {
            (p.n2, p.n3, p.p2, p.p3)
        };
        let g1 = (1.0 - x[0] - x[1]).max(0.0);
        TwoRelayAmps {
            a1: (x[0] * p.p1).sqrt(),
            s2: (x[1] * p.p1).sqrt(),
            s3: (g1 * p.p1).sqrt(),
            ra2: (x[2] * pa).sqrt(),
            ra3: ((1.0 - x[2]) * pa).sqrt(),
            rb3: pb.sqrt(),
            na,
            nb,
            pa,
            pb,
        }
    }

    fn amp2(&self) -> f64 {
        self.s2 + self.ra2
    }

    fn amp3(&self) -> f64 {
        self.s3 + self.ra3 + self.rb3
    }
}

impl TwoRelaySetup {
    pub fn design(p: &TwoRelayParams, d: &DesignParams, seed: u64) -> Result<Self> {
        p.validate()?;
        d.validate()?;
        let (splits, order) = match &d.splits {
            Some(s) if s.len() == 3 => ([s[0], s[1], s[2]], [2, 3]),
            Some(_) => return Err(Error::param("splits", "expected [alpha1, beta1, alpha2]")),
            None => {
                let pt = df_two_relay_rate(p)?;
                let a = pt.args;
                (
                    [a.alpha.unwrap_or(1.0), a.beta1.unwrap_or(0.0), a.alpha2.unwrap_or(0.0)],
                    a.permutation.unwrap_or([2, 3]),
                )
            }
        };
        let formula = df_two_relay_rate_at(p, splits[0], splits[1], splits[2], order)?;
        let target = d.target(0, formula)?;
        let chain = d.family()?.single_code(target, d.rounding())?;
        let codes = [
            StreamCode::new(chain.clone(), codebook_seed(seed, "two_relay/1"))?,
            StreamCode::new(chain.clone(), codebook_seed(seed, "two_relay/2"))?,
            StreamCode::new(chain, codebook_seed(seed, "two_relay/3"))?,
        ];
        Self::with_codes(p, splits, order, codes, d.list_margin, formula, target)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_codes(
        p: &TwoRelayParams,
        splits: [f64; 3],
        order: [u8; 2],
        codes: [StreamCode; 3],
        margin: f64,
        formula: f64,
        target: f64,
    ) -> Result<Self> {
        if splits.iter().any(|v| !(0.0..=1.0).contains(v)) || splits[0] + splits[1] > 1.0 + 1e-12 {
            return Err(Error::param("splits", "need α₁, β₁, α₂ ∈ [0, 1] with α₁ + β₁ ≤ 1"));
        }
        if order != [2, 3] && order != [3, 2] {
            return Err(Error::param("permutation", "relay order must be [2, 3] or [3, 2]"));
        }
        if codes.iter().any(|c| c.len() != codes[0].len() || (c.power() - 1.0).abs() > 1e-9) {
            return Err(Error::param("chains", "three unit-power codebooks of equal size are required"));
        }
        let a = TwoRelayAmps::new(p, splits, order);
        let (s1, s2, s3) = (a.a1.powi(2), a.amp2().powi(2), a.amp3().powi(2));
        let relay_lists = [
            codes[1].list_decoder_for(s2, s1 + a.nb, margin)?,
            codes[0].list_decoder_for(s1, a.nb, margin)?,
        ];
        let dest_lists = [
            codes[2].list_decoder_for(s3, s1 + s2 + p.n4, margin)?,
            codes[1].list_decoder_for(s2, s1 + p.n4, margin)?,
            codes[0].list_decoder_for(s1, p.n4, margin)?,
        ];
        Ok(TwoRelaySetup {
            splits,
            order,
            codes,
            relay_lists,
            dest_lists,
            formula,
            target,
        })
    }
}

/// Two-relay block-Markov decode-and-forward; messages `w_1 … w_{B−2}` are fresh.
pub fn simulate_df_two_relay(p: &TwoRelayParams, s: &TwoRelaySetup, mc: &MonteCarlo) -> Result<SimReport> {
    p.validate()?;
    mc.validate(3)?;
    let n = s.codes[0].dim();
    let blocks = mc.blocks;
    let m = s.codes[0].len();
    let a = TwoRelayAmps::new(p, s.splits, s.order);
    let (amp2, amp3) = (a.amp2(), a.amp3());
    let (s1, s2p) = (a.a1 * a.a1, amp2 * amp2);
    let first_scale = mmse_scale(a.a1, 1.0, a.na);
    let second_scales = [mmse_scale(amp2, 1.0, s1 + a.nb), mmse_scale(a.a1, 1.0, a.nb)];
    let dest_scales = [
        mmse_scale(amp3, 1.0, s1 + s2p + p.n4),
        mmse_scale(amp2, 1.0, s1 + p.n4),
        mmse_scale(a.a1, 1.0, p.n4),
    ];
    let name = |k: u8| format!("node{k}");
    let layout = Layout {
        nodes: vec![
            (name(s.order[0]), "w".into(), false),
            (name(s.order[1]), "w".into(), false),
            ("node4".into(), "w".into(), true),
        ],
        stages: vec![
            (format!("{}/list2", name(s.order[1])), s.relay_lists[0].exact_size()),
            (format!("{}/list1", name(s.order[1])), s.relay_lists[1].exact_size()),
            ("node4/list3".into(), s.dest_lists[0].exact_size()),
            ("node4/list2".into(), s.dest_lists[1].exact_size()),
            ("node4/list1".into(), s.dest_lists[2].exact_size()),
        ],
        transmitters: vec![("node1".into(), p.p1), (name(s.order[0]), a.pa), (name(s.order[1]), a.pb)],
    };
    let fresh = |k: i64| k >= 1 && k <= blocks as i64 - 2;

    let trial = |seed: &[u8; 32]| -> Result<Tally> {
        let mut t = layout.tally();
        let mut src = substream(seed, SOURCE);
        let mut noise = substream(seed, NOISE);
        // Index k + 2 holds message k, so w_{-1} and w_0 sit at 0 and 1.
        let at = |k: i64| (k + 2) as usize;
        let len = blocks + 3;
        let mut w = vec![0usize; len];
        let mut wa = vec![0usize; len];
        let mut wb = vec![0usize; len];
        let mut wd = vec![0usize; len];
        let mut dith: Vec<[Vec<f64>; 3]> = vec![[vec![], vec![], vec![]]; blocks + 1];
        let mut yd_hist: Vec<Vec<f64>> = vec![vec![]; blocks + 1];
        let mut relay_l1: Option<Vec<usize>> = None;
        let mut dest_l2: Vec<Option<Vec<usize>>> = vec![None; len];
        let mut dest_l1: Vec<Option<Vec<usize>>> = vec![None; len];
        let enc = |c: usize, msg: usize, u: &[f64]| word(&s.codes[c], msg, u);
        for b in 1..=blocks {
            let bi = b as i64;
            if fresh(bi) {
                w[at(bi)] = draw_message(&mut src, m);
            }
            let u = [dither(&s.codes[0], &mut src), dither(&s.codes[1], &mut src), dither(&s.codes[2], &mut src)];
            let mut xs = vec![0.0; n];
            axpy(&mut xs, a.a1, &enc(0, w[at(bi)], &u[0])?);
            axpy(&mut xs, a.s2, &enc(1, w[at(bi - 1)], &u[1])?);
            axpy(&mut xs, a.s3, &enc(2, w[at(bi - 2)], &u[2])?);
            let mut xa = vec![0.0; n];
            axpy(&mut xa, a.ra2, &enc(1, wa[at(bi - 1)], &u[1])?);
            axpy(&mut xa, a.ra3, &enc(2, wa[at(bi - 2)], &u[2])?);
            let mut xb = vec![0.0; n];
            axpy(&mut xb, a.rb3, &enc(2, wb[at(bi - 2)], &u[2])?);
            t.power(0, &xs);
            t.power(1, &xa);
            t.power(2, &xb);
            let mut ya = xs.clone();
            axpy(&mut ya, 1.0, &xb);
            axpy(&mut ya, 1.0, &gaussian(&mut noise, n, a.na));
            let mut yb = xs.clone();
            axpy(&mut yb, 1.0, &xa);
            axpy(&mut yb, 1.0, &gaussian(&mut noise, n, a.nb));
            let mut yd = xs.clone();
            axpy(&mut yd, 1.0, &xa);
            axpy(&mut yd, 1.0, &xb);
            axpy(&mut yd, 1.0, &gaussian(&mut noise, n, p.n4));

            // First relay: strip the streams it already knows, then decode w_b.
            if fresh(bi) {
                let mut y = ya.clone();
                axpy(&mut y, -a.s2, &enc(1, wa[at(bi - 1)], &u[1])?);
                axpy(&mut y, -(a.s3 + a.rb3), &enc(2, wa[at(bi - 2)], &u[2])?);
                wa[at(bi)] = unique_decode(s.codes[0].codebook(), &y, &u[0], first_scale)?;
                t.nodes[0].record(w[at(bi)], wa[at(bi)]);
            }

            // Second relay: w_{b−1} from the stream-2 list and last block's stream-1 list.
            let mut ystar = yb.clone();
            axpy(&mut ystar, -(a.s3 + a.ra3), &enc(2, wb[at(bi - 2)], &u[2])?);
            if fresh(bi - 1) {
                let l2 = list_decode(&s.relay_lists[0], s.codes[1].codebook(), &ystar, &u[1], second_scales[0])?.messages;
                t.stages[0].record(&l2, w[at(bi - 1)]);
                let l1 = relay_l1.take().expect("list from the previous block");
                let both = intersect(&l2, &l1);
                let fallback = l1.first().copied().unwrap_or(0);
                wb[at(bi - 1)] = t.nodes[1].resolve(&both, fallback);
                t.nodes[1].record(w[at(bi - 1)], wb[at(bi - 1)]);
            }
            if fresh(bi) {
                let mut y = ystar.clone();
                axpy(&mut y, -amp2, &enc(1, wb[at(bi - 1)], &u[1])?);
                let l1 = list_decode(&s.relay_lists[1], s.codes[0].codebook(), &y, &u[0], second_scales[1])?.messages;
                t.stages[1].record(&l1, w[at(bi)]);
                relay_l1 = Some(l1);
            }

            // Destination: w_{b−2} from three lists.
            if fresh(bi - 2) {
                let l3 = list_decode(&s.dest_lists[0], s.codes[2].codebook(), &yd, &u[2], dest_scales[0])?.messages;
                t.stages[2].record(&l3, w[at(bi - 2)]);
                let l2 = dest_l2[at(bi - 2)].take().expect("stream-2 list");
                let l1 = dest_l1[at(bi - 2)].take().expect("stream-1 list");
                let both = intersect(&intersect(&l3, &l2), &l1);
                let fallback = l1.first().copied().unwrap_or(0);
                wd[at(bi - 2)] = t.nodes[2].resolve(&both, fallback);
                t.nodes[2].record(w[at(bi - 2)], wd[at(bi - 2)]);
            }
            dith[b] = u.clone();
            yd_hist[b] = yd.clone();
            // With w_{b−2} known: stream-2 list of w_{b−1} from this block and
            // stream-1 list of w_{b−1} from the previous block.
            if fresh(bi - 1) {
                let mut y = yd.clone();
                axpy(&mut y, -amp3, &enc(2, wd[at(bi - 2)], &u[2])?);
                let l2 = list_decode(&s.dest_lists[1], s.codes[1].codebook(), &y, &u[1], dest_scales[1])?.messages;
                t.stages[3].record(&l2, w[at(bi - 1)]);
                dest_l2[at(bi - 1)] = Some(l2);

                let up = &dith[b - 1];
                let mut y = yd_hist[b - 1].clone();
                axpy(&mut y, -amp2, &enc(1, wd[at(bi - 2)], &up[1])?);
                axpy(&mut y, -amp3, &enc(2, wd[at(bi - 3)], &up[2])?);
                let l1 = list_decode(&s.dest_lists[2], s.codes[0].codebook(), &y, &up[0], dest_scales[2])?.messages;
                t.stages[4].record(&l1, w[at(bi - 1)]);
                dest_l1[at(bi - 1)] = Some(l1);
            }
        }
        Ok(t)
    };
    let (tally, wall) = run_trials(mc, trial)?;
    let base = ReportBase {
        topology: Topology::TwoRelay,
        scheme: "df_two_relay",
        n,
        rates: vec![rate_record("w", s.formula, s.target, s.codes[0].rate(), blocks - 2, blocks)],
        codebooks: (0..3)
            .map(|k| (format!("stream{}", k + 1), s.codes[k].codebook().seed()))
            .collect(),
        index_map: None,
        notes: vec![format!("relay order {}-{}", s.order[0], s.order[1])],
        configured_distortion: None,
    };
    Ok(build_report(base, &layout, mc, &tally, wall))
}
