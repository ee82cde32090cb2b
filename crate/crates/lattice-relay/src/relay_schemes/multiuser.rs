//! Two-way relaying and the multiple-access relay channel.
//!
//! Both schemes let the relay decode the sum codeword
//! `T = (t_a + t_b − Q_b(t_b − U_b)) mod Λ_a` of the two users, where `a` is the
//! user with the coarser shaping lattice, and forward its index. A receiver
//! that knows one of the two codewords maps each relayed candidate `T` back to
//! the other codeword and intersects the result with its direct-link list.

use crate::error::{Error, Result};
use crate::lattice_core::Lattice;
use crate::list_decoding::{list_decode, unique_decode, ListDecoder};
use crate::nested_codes::{Codebook, DEFAULT_ENUMERATION_CAP};
use crate::rate_regions::{marc_corners, twrc_region};

use super::algebra::{recover_t1_from_t, recover_t2_from_t, relay_sum_decode, sum_codeword};
use super::design::{DesignParams, StreamCode};
use super::params::{MarcParams, Topology, TwrcParams};
use super::{
    axpy, build_report, codebook_seed, draw_message, gaussian, intersect, mmse_scale, run_trials, substream,
    Layout, MonteCarlo, RateRecord, ReportBase, SimReport, Tally,
};

/// Codes of two users on a common fine lattice plus the relay codebook.
#[derive(Debug, Clone)]
pub struct PairCodes {
    /// User (0 or 1) whose shaping lattice `Λ_a` is the coarser one.
    pub strong: usize,
    /// Per-user codes at their transmit powers.
    pub users: [StreamCode; 2],
    /// `F ∩ 𝒱(Λ_a)` in canonical order; position `i` is relay message `i`.
    pub sum_code: Codebook,
    /// Unit-power relay codebook with `|sum_code|` messages.
    pub relay: StreamCode,
    /// Labels keying codebook seeds and random streams of the two users.
    pub labels: [u64; 2],
}

impl PairCodes {
    /// Codes for users with powers `powers` and target rates `targets`.
    pub fn design(powers: [f64; 2], targets: [f64; 2], d: &DesignParams, seed: u64, labels: [u64; 2]) -> Result<Self> {
        d.validate()?;
        if powers.iter().any(|p| !(*p > 0.0)) {
            return Err(Error::param("p", "both users need positive power"));
        }
        let strong = if powers[0] >= powers[1] { 0 } else { 1 };
        let weak = 1 - strong;
        let fam = d.family()?;
        let sh = fam.shared(powers[strong], powers[weak], [targets[strong], targets[weak]], d.rounding())?;
        let user = |k: usize, chain| StreamCode::new(chain, codebook_seed(seed, &format!("user{}", labels[k])));
        let (ua, ub) = (user(strong, sh.code_a)?, user(weak, sh.code_b)?);
        let users = if strong == 0 { [ua, ub] } else { [ub, ua] };
        let last = sh.full.len() - 1;
        let sum_code = Codebook::from_pair(sh.full.level(0), sh.full.level(last), 0, DEFAULT_ENUMERATION_CAP)?;
        let relay = StreamCode::new(sh.full.with_power(0, 1.0)?, codebook_seed(seed, "relay"))?;
        Ok(PairCodes {
            strong,
            users,
            sum_code,
            relay,
            labels,
        })
    }

    fn shaping(&self, k: usize) -> &Lattice {
        self.users[k].chain().level(0)
    }

    /// `T` of the codewords `t` sent with dithers `u`.
    pub fn sum_point(&self, t: [&[f64]; 2], u: [&[f64]; 2]) -> Result<Vec<f64>> {
        let (a, b) = (self.strong, 1 - self.strong);
        let neg: Vec<f64> = u[b].iter().map(|v| -v).collect();
        sum_codeword(t[a], t[b], &neg, self.shaping(a), self.shaping(b))
    }

    /// Relay estimate of `T` from `y_R`.
    pub fn relay_estimate(&self, y: &[f64], u: [&[f64]; 2], alpha: f64) -> Result<Vec<f64>> {
        let (a, b) = (self.strong, 1 - self.strong);
        relay_sum_decode(y, u[a], u[b], alpha, self.shaping(a), self.shaping(b), self.sum_code.fine())
    }

    /// Relay message carrying `T`.
    pub fn index_of(&self, t: &[f64]) -> usize {
        self.sum_code.canonical_of(t)
    }

    /// Codeword of user `other` implied by `T` and the known codeword `t_own` of the
    /// other user, or `None` when it is not a codeword.
    pub fn recover(&self, other: usize, t: &[f64], t_own: &[f64], u_own: &[f64]) -> Result<Option<usize>> {
        let (a, b) = (self.strong, 1 - self.strong);
        let t_other = if other == a {
            let neg: Vec<f64> = u_own.iter().map(|v| -v).collect();
            recover_t1_from_t(t, t_own, &neg, self.shaping(a), self.shaping(b))?
        } else {
            recover_t2_from_t(t, t_own, self.shaping(a), self.shaping(b))?
        };
        let code = self.users[other].codebook();
        if code.fine().contains(&t_other)? {
            Ok(Some(code.message_of(&t_other)))
        } else {
            Ok(None)
        }
    }

    /// Messages of user `other` consistent with the relayed list `relayed`.
    fn relayed_messages(
        &self,
        other: usize,
        relayed: &[usize],
        whole: bool,
        t_own: &[f64],
        u_own: &[f64],
    ) -> Result<Vec<usize>> {
        if whole {
            return Ok((0..self.users[other].len()).collect());
        }
        let mut out = Vec::with_capacity(relayed.len());
        for &i in relayed {
            if let Some(w) = self.recover(other, &self.sum_code.points()[i], t_own, u_own)? {
                out.push(w);
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn index_map(&self) -> String {
        format!(
            "T enumerated in canonical residue order of F/Λ_{} ({} points), relay message map seed {}",
            self.strong + 1,
            self.sum_code.len(),
            self.relay.codebook().seed()
        )
    }

    fn seeds(&self) -> Vec<(String, u64)> {
        vec![
            ("user1".into(), self.users[0].codebook().seed()),
            ("user2".into(), self.users[1].codebook().seed()),
            ("relay".into(), self.relay.codebook().seed()),
        ]
    }
}

const NOISE_RELAY: u64 = 0;
const RELAY: u64 = 3;
const NOISE_DEST: u64 = 4;

fn user_stream(label: u64) -> u64 {
    10 + label
}

fn terminal_noise(label: u64) -> u64 {
    20 + label
}

fn dither(code: &StreamCode, rng: &mut impl rand::Rng) -> Vec<f64> {
    code.chain().level(0).sample_voronoi_uniform(rng)
}

/// Codes and list lattices of the two-way relay channel with direct links.
#[derive(Debug, Clone)]
pub struct TwrcSetup {
    pub codes: PairCodes,
    /// At terminal `u`: list of the other user's code from the direct link.
    pub direct_lists: [ListDecoder; 2],
    /// At terminal `u`: list of the relay code.
    pub relayed_lists: [ListDecoder; 2],
    pub formulas: [f64; 2],
    pub targets: [f64; 2],
    /// Terminal `u` uses a wrong own message when inverting `T`.
    pub corrupt_own: [bool; 2],
}

impl TwrcSetup {
    pub fn design(p: &TwrcParams, d: &DesignParams, seed: u64) -> Result<Self> {
        Self::design_labeled(p, d, seed, [1, 2])
    }

    pub fn design_labeled(p: &TwrcParams, d: &DesignParams, seed: u64, labels: [u64; 2]) -> Result<Self> {
        p.validate()?;
        d.validate()?;
        let r = twrc_region(p)?.coordinates;
        let formulas = [r[0], r[1]];
        let targets = [d.target(0, formulas[0])?, d.target(1, formulas[1])?];
        let codes = PairCodes::design([p.p1, p.p2], targets, d, seed, labels)?;
        Self::with_codes(p, codes, d.list_margin, formulas, targets)
    }

    pub fn with_codes(p: &TwrcParams, codes: PairCodes, margin: f64, formulas: [f64; 2], targets: [f64; 2]) -> Result<Self> {
        let gains = [p.h21, p.h12];
        let noises = [p.n1, p.n2];
        let mut direct = Vec::new();
        let mut relayed = Vec::new();
        for u in 0..2 {
            let o = 1 - u;
            let s = gains[u] * gains[u] * codes.users[o].power();
            direct.push(codes.users[o].list_decoder_for(s, noises[u], margin)?);
            relayed.push(codes.relay.list_decoder_for(p.p_r, s + noises[u], margin)?);
        }
        let [d0, d1]: [ListDecoder; 2] = direct.try_into().expect("two terminals");
        let [r0, r1]: [ListDecoder; 2] = relayed.try_into().expect("two terminals");
        Ok(TwrcSetup {
            codes,
            direct_lists: [d0, d1],
            relayed_lists: [r0, r1],
            formulas,
            targets,
            corrupt_own: [false, false],
        })
    }
}

/// Two-way relay block-Markov simulation.
///
/// In block `b` the users send `X_k(w_{k,b})` and the relay sends the index of
/// `T(b−1)`. Terminal `u` decodes `w_{o,b−1}` at the end of block `b`.
pub fn simulate_twrc(p: &TwrcParams, s: &TwrcSetup, mc: &MonteCarlo) -> Result<SimReport> {
    p.validate()?;
    mc.validate(2)?;
    let c = &s.codes;
    let n = c.relay.dim();
    let blocks = mc.blocks;
    let sizes = [c.users[0].len(), c.users[1].len()];
    let sig = [c.users[0].power(), c.users[1].power()];
    let amp_r = p.p_r.sqrt();
    let gains = [p.h21, p.h12];
    let noises = [p.n1, p.n2];
    let relay_alpha = (sig[0] + sig[1]) / (sig[0] + sig[1] + p.n_r);
    let direct_scale = [mmse_scale(gains[0], sig[1], p.n1), mmse_scale(gains[1], sig[0], p.n2)];
    let relayed_scale = [
        mmse_scale(amp_r, 1.0, gains[0] * gains[0] * sig[1] + p.n1),
        mmse_scale(amp_r, 1.0, gains[1] * gains[1] * sig[0] + p.n2),
    ];
    let layout = Layout {
        nodes: vec![
            ("relay".into(), "T".into(), false),
            ("terminal1".into(), "w2".into(), true),
            ("terminal2".into(), "w1".into(), true),
        ],
        stages: vec![
            ("terminal1/direct".into(), s.direct_lists[0].exact_size()),
            ("terminal1/relayed".into(), s.relayed_lists[0].exact_size()),
            ("terminal2/direct".into(), s.direct_lists[1].exact_size()),
            ("terminal2/relayed".into(), s.relayed_lists[1].exact_size()),
        ],
        transmitters: vec![("user1".into(), p.p1), ("user2".into(), p.p2), ("relay".into(), p.p_r)],
    };

    let trial = |seed: &[u8; 32]| -> Result<Tally> {
        let mut t = layout.tally();
        let mut urng = [substream(seed, user_stream(c.labels[0])), substream(seed, user_stream(c.labels[1]))];
        let mut nrng = [
            substream(seed, terminal_noise(c.labels[0])),
            substream(seed, terminal_noise(c.labels[1])),
        ];
        let mut rrng = substream(seed, RELAY);
        let mut relay_noise = substream(seed, NOISE_RELAY);
        let mut w = [vec![0usize; blocks + 1], vec![0usize; blocks + 1]];
        let mut what = [vec![0usize; blocks + 1], vec![0usize; blocks + 1]];
        let mut u_hist: Vec<[Vec<f64>; 2]> = vec![[vec![], vec![]]; blocks + 1];
        let mut relay_msg = vec![0usize; blocks + 1];
        let mut true_msg = vec![0usize; blocks + 1];
        let mut direct_prev: [Option<Vec<usize>>; 2] = [None, None];
        for b in 1..=blocks {
            let fresh = b < blocks;
            let mut x = [vec![], vec![]];
            let mut u = [vec![], vec![]];
            for k in 0..2 {
                if fresh {
                    w[k][b] = draw_message(&mut urng[k], sizes[k]);
                }
                u[k] = dither(&c.users[k], &mut urng[k]);
                x[k] = c.users[k].codebook().encode(w[k][b], &u[k])?;
            }
            let ur = dither(&c.relay, &mut rrng);
            let mut xr = c.relay.codebook().encode(relay_msg[b - 1], &ur)?;
            xr.iter_mut().for_each(|v| *v *= amp_r);
            t.power(0, &x[0]);
            t.power(1, &x[1]);
            t.power(2, &xr);

            let mut yr = x[0].clone();
            axpy(&mut yr, 1.0, &x[1]);
            axpy(&mut yr, 1.0, &gaussian(&mut relay_noise, n, p.n_r));
            if fresh {
                let tw = [c.users[0].codebook().codeword(w[0][b])?, c.users[1].codebook().codeword(w[1][b])?];
                let truth = c.sum_point(tw, [&u[0], &u[1]])?;
                let est = c.relay_estimate(&yr, [&u[0], &u[1]], relay_alpha)?;
                relay_msg[b] = c.index_of(&est);
                true_msg[b] = c.index_of(&truth);
                t.nodes[0].record(true_msg[b], relay_msg[b]);
            }

            for me in 0..2 {
                let o = 1 - me;
                let mut y = xr.clone();
                axpy(&mut y, gains[me], &x[o]);
                axpy(&mut y, 1.0, &gaussian(&mut nrng[me], n, noises[me]));
                let own = |blk: usize| -> usize {
                    if s.corrupt_own[me] && sizes[me] > 1 {
                        (w[me][blk] + 1) % sizes[me]
                    } else {
                        w[me][blk]
                    }
                };
                if b >= 2 {
                    let list = list_decode(&s.relayed_lists[me], c.relay.codebook(), &y, &ur, relayed_scale[me])?;
                    let whole = s.relayed_lists[me].exact_size() as usize == c.relay.len();
                    let up = &u_hist[b - 1];
                    let t_own = c.users[me].codebook().codeword(own(b - 1))?;
                    t.stages[2 * me + 1].record(&list.messages, true_msg[b - 1]);
                    let rel = c.relayed_messages(o, &list.messages, whole, t_own, &up[me])?;
                    let direct = direct_prev[me].take().expect("direct list of the previous block");
                    let both = intersect(&rel, &direct);
                    let fallback = direct.first().copied().unwrap_or(0);
                    what[o][b - 1] = t.nodes[1 + me].resolve(&both, fallback);
                    t.nodes[1 + me].record(w[o][b - 1], what[o][b - 1]);
                }
                if fresh {
                    // Strip the relay codeword, which the terminal can rebuild from
                    // its own message and the one it just decoded.
                    let known = if b >= 2 {
                        let up = &u_hist[b - 1];
                        let mut tw: [&[f64]; 2] = [&[], &[]];
                        let t_me = c.users[me].codebook().codeword(own(b - 1))?;
                        let t_o = c.users[o].codebook().codeword(what[o][b - 1])?;
                        tw[me] = t_me;
                        tw[o] = t_o;
                        c.index_of(&c.sum_point(tw, [&up[0], &up[1]])?)
                    } else {
                        0
                    };
                    let mut yk = c.relay.codebook().encode(known, &ur)?;
                    yk.iter_mut().for_each(|v| *v *= -amp_r);
                    axpy(&mut yk, 1.0, &y);
                    let direct = list_decode(&s.direct_lists[me], c.users[o].codebook(), &yk, &u[o], direct_scale[me])?;
                    t.stages[2 * me].record(&direct.messages, w[o][b]);
                    direct_prev[me] = Some(direct.messages);
                }
            }
            u_hist[b] = u;
        }
        Ok(t)
    };
    let (tally, wall) = run_trials(mc, trial)?;
    let rates = (0..2)
        .map(|k| RateRecord {
            stream: format!("w{}", k + 1),
            formula: s.formulas[k],
            target: s.targets[k],
            nominal: c.users[k].rate(),
            effective: c.users[k].rate() * (blocks - 1) as f64 / blocks as f64,
        })
        .collect();
    let base = ReportBase {
        topology: Topology::Twrc,
        scheme: "twrc",
        n,
        rates,
        codebooks: c.seeds(),
        index_map: Some(c.index_map()),
        notes: Vec::new(),
        configured_distortion: None,
    };
    Ok(build_report(base, &layout, mc, &tally, wall))
}

/// Codes and list lattices of the multiple-access relay channel for one decoding order.
#[derive(Debug, Clone)]
pub struct MarcSetup {
    pub codes: PairCodes,
    /// User (0 or 1) decoded first in every block.
    pub first: usize,
    /// Direct list of the second user's code.
    pub direct_list: ListDecoder,
    /// List of the relay code.
    pub relayed_list: ListDecoder,
    pub formulas: [f64; 2],
    pub targets: [f64; 2],
}

impl MarcSetup {
    /// `first` is the user decoded first (0 or 1).
    pub fn design(p: &MarcParams, first: usize, d: &DesignParams, seed: u64) -> Result<Self> {
        Self::design_labeled(p, first, d, seed, [1, 2])
    }

    pub fn design_labeled(p: &MarcParams, first: usize, d: &DesignParams, seed: u64, labels: [u64; 2]) -> Result<Self> {
        p.validate()?;
        d.validate()?;
        if first > 1 {
            return Err(Error::param("order", "the first user is 1 or 2"));
        }
        let c = marc_corners(p)?;
        let formulas = if first == 0 {
            [c.r1_first, c.r2_second]
        } else {
            [c.r1_second, c.r2_first]
        };
        let targets = [d.target(0, formulas[0])?, d.target(1, formulas[1])?];
        let codes = PairCodes::design([p.p1, p.p2], targets, d, seed, labels)?;
        Self::with_codes(p, codes, first, d.list_margin, formulas, targets)
    }

    pub fn with_codes(
        p: &MarcParams,
        codes: PairCodes,
        first: usize,
        margin: f64,
        formulas: [f64; 2],
        targets: [f64; 2],
    ) -> Result<Self> {
        let second = 1 - first;
        let s = codes.users[second].power();
        let direct_list = codes.users[second].list_decoder_for(s, p.n_d, margin)?;
        let relayed_list = codes.relay.list_decoder_for(p.p_r, s + p.n_d, margin)?;
        Ok(MarcSetup {
            codes,
            first,
            direct_list,
            relayed_list,
            formulas,
            targets,
        })
    }
}

/// Multiple-access relay simulation with successive decoding in the configured order.
///
/// In block `b` the destination decodes `w_{f,b}` treating everything else as
/// noise, then `w_{s,b−1}` from the relayed and direct lists.
pub fn simulate_marc(p: &MarcParams, s: &MarcSetup, mc: &MonteCarlo) -> Result<SimReport> {
    p.validate()?;
    mc.validate(2)?;
    let c = &s.codes;
    let n = c.relay.dim();
    let blocks = mc.blocks;
    let (f, sec) = (s.first, 1 - s.first);
    let sizes = [c.users[0].len(), c.users[1].len()];
    let sig = [c.users[0].power(), c.users[1].power()];
    let amp_r = p.p_r.sqrt();
    let relay_alpha = (sig[0] + sig[1]) / (sig[0] + sig[1] + p.n_r);
    let first_scale = mmse_scale(1.0, sig[f], sig[sec] + p.p_r + p.n_d);
    let direct_scale = mmse_scale(1.0, sig[sec], p.n_d);
    let relayed_scale = mmse_scale(amp_r, 1.0, sig[sec] + p.n_d);
    let whole = s.relayed_list.exact_size() as usize == c.relay.len();
    let label = |k: usize| format!("w{}", k + 1);
    let layout = Layout {
        nodes: vec![
            ("relay".into(), "T".into(), false),
            ("destination".into(), label(0), true),
            ("destination".into(), label(1), true),
        ],
        stages: vec![
            (format!("destination/direct/{}", label(sec)), s.direct_list.exact_size()),
            (format!("destination/relayed/{}", label(sec)), s.relayed_list.exact_size()),
        ],
        transmitters: vec![("user1".into(), p.p1), ("user2".into(), p.p2), ("relay".into(), p.p_r)],
    };

    let trial = |seed: &[u8; 32]| -> Result<Tally> {
        let mut t = layout.tally();
        let mut urng = [substream(seed, user_stream(c.labels[0])), substream(seed, user_stream(c.labels[1]))];
        let mut rrng = substream(seed, RELAY);
        let mut relay_noise = substream(seed, NOISE_RELAY);
        let mut dest_noise = substream(seed, NOISE_DEST);
        let mut w = [vec![0usize; blocks + 1], vec![0usize; blocks + 1]];
        let mut what = [vec![0usize; blocks + 1], vec![0usize; blocks + 1]];
        let mut u_hist: Vec<[Vec<f64>; 2]> = vec![[vec![], vec![]]; blocks + 1];
        let mut relay_msg = vec![0usize; blocks + 1];
        let mut true_msg = vec![0usize; blocks + 1];
        let mut direct_prev: Option<Vec<usize>> = None;
        for b in 1..=blocks {
            let fresh = b < blocks;
            let mut x = [vec![], vec![]];
            let mut u = [vec![], vec![]];
            for k in 0..2 {
                if fresh {
                    w[k][b] = draw_message(&mut urng[k], sizes[k]);
                }
                u[k] = dither(&c.users[k], &mut urng[k]);
                x[k] = c.users[k].codebook().encode(w[k][b], &u[k])?;
            }
            let ur = dither(&c.relay, &mut rrng);
            let mut xr = c.relay.codebook().encode(relay_msg[b - 1], &ur)?;
            xr.iter_mut().for_each(|v| *v *= amp_r);
            t.power(0, &x[0]);
            t.power(1, &x[1]);
            t.power(2, &xr);

            let mut yr = x[0].clone();
            axpy(&mut yr, 1.0, &x[1]);
            axpy(&mut yr, 1.0, &gaussian(&mut relay_noise, n, p.n_r));
            if fresh {
                let tw = [c.users[0].codebook().codeword(w[0][b])?, c.users[1].codebook().codeword(w[1][b])?];
                let truth = c.sum_point(tw, [&u[0], &u[1]])?;
                let est = c.relay_estimate(&yr, [&u[0], &u[1]], relay_alpha)?;
                relay_msg[b] = c.index_of(&est);
                true_msg[b] = c.index_of(&truth);
                t.nodes[0].record(true_msg[b], relay_msg[b]);
            }

            let mut yd = x[0].clone();
            axpy(&mut yd, 1.0, &x[1]);
            axpy(&mut yd, 1.0, &xr);
            axpy(&mut yd, 1.0, &gaussian(&mut dest_noise, n, p.n_d));
            if fresh {
                what[f][b] = unique_decode(c.users[f].codebook(), &yd, &u[f], first_scale)?;
                t.nodes[1 + f].record(w[f][b], what[f][b]);
            }
            let mut y1 = yd.clone();
            axpy(&mut y1, -1.0, &c.users[f].codebook().encode(what[f][b], &u[f])?);
            if b >= 2 {
                let list = list_decode(&s.relayed_list, c.relay.codebook(), &y1, &ur, relayed_scale)?;
                let up = &u_hist[b - 1];
                let t_f = c.users[f].codebook().codeword(what[f][b - 1])?;
                t.stages[1].record(&list.messages, true_msg[b - 1]);
                let rel = c.relayed_messages(sec, &list.messages, whole, t_f, &up[f])?;
                let direct = direct_prev.take().expect("direct list of the previous block");
                let both = intersect(&rel, &direct);
                let fallback = direct.first().copied().unwrap_or(0);
                what[sec][b - 1] = t.nodes[1 + sec].resolve(&both, fallback);
                t.nodes[1 + sec].record(w[sec][b - 1], what[sec][b - 1]);
            }
            if fresh {
                let known = if b >= 2 {
                    let up = &u_hist[b - 1];
                    let tw = [
                        c.users[0].codebook().codeword(what[0][b - 1])?,
                        c.users[1].codebook().codeword(what[1][b - 1])?,
                    ];
                    c.index_of(&c.sum_point(tw, [&up[0], &up[1]])?)
                } else {
                    0
                };
                let mut y2 = c.relay.codebook().encode(known, &ur)?;
                y2.iter_mut().for_each(|v| *v *= -amp_r);
                axpy(&mut y2, 1.0, &y1);
                let direct = list_decode(&s.direct_list, c.users[sec].codebook(), &y2, &u[sec], direct_scale)?;
                t.stages[0].record(&direct.messages, w[sec][b]);
                direct_prev = Some(direct.messages);
            }
            u_hist[b] = u;
        }
        Ok(t)
    };
    let (tally, wall) = run_trials(mc, trial)?;
    let rates = (0..2)
        .map(|k| RateRecord {
            stream: label(k),
            formula: s.formulas[k],
            target: s.targets[k],
            nominal: c.users[k].rate(),
            effective: c.users[k].rate() * (blocks - 1) as f64 / blocks as f64,
        })
        .collect();
    let base = ReportBase {
        topology: Topology::Marc,
        scheme: "marc",
        n,
        rates,
        codebooks: c.seeds(),
        index_map: Some(c.index_map()),
        notes: vec![format!("user {} decoded first", f + 1)],
        configured_distortion: None,
    };
    Ok(build_report(base, &layout, mc, &tally, wall))
}
