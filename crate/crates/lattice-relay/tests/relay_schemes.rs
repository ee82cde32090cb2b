mod common;

use approx::assert_abs_diff_eq;
use common::*;
use lattice_relay::lattice_core::{capacity_c, Lattice};
use lattice_relay::nested_codes::{build_chain_with, ChainStep, Codebook, DEFAULT_ENUMERATION_CAP};
use lattice_relay::rate_regions::cf_min_distortion;
use lattice_relay::relay_schemes::*;
use lattice_relay::Error;
use rand::Rng;
use rand_distr::{Distribution, Normal};

const TOL: f64 = 1e-9;

fn close(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() < TOL)
}

fn z1(scale: f64) -> Lattice {
    Lattice::integer(1, scale).unwrap()
}

fn design(frac: f64) -> DesignParams {
    let mut d = DesignParams::e8();
    d.rate_fraction = frac;
    d
}

fn with_rates(rates: &[f64]) -> DesignParams {
    let mut d = DesignParams::e8();
    d.rates = Some(rates.to_vec());
    d
}

fn relay(p: f64, p_r: f64, n: f64) -> RelayParams {
    RelayParams { p, p_r, n_r: n, n_d: n }
}

fn two_relay(p: f64, n: f64) -> TwoRelayParams {
    TwoRelayParams { p1: p, p2: p, p3: p, n2: n, n3: n, n4: n }
}

fn twrc(p1: f64, p2: f64, n: f64) -> TwrcParams {
    TwrcParams { p1, p2, p_r: 10.0, n_r: n, n1: n, n2: n, h12: 1.0, h21: 1.0 }
}

fn marc(p1: f64, p2: f64, n: f64) -> MarcParams {
    MarcParams { p1, p2, p_r: 10.0, n_r: n, n_d: n }
}

fn check_report(r: &SimReport) {
    assert!((0.0..=1.0).contains(&r.error_rate));
    for s in &r.nodes {
        assert!((0.0..=1.0).contains(&s.error_rate), "{s:?}");
    }
    for s in &r.stages {
        assert!(s.decodes == 0 || (s.mean_list_size - s.list_size as f64).abs() < TOL, "{s:?}");
    }
}

// Mod-Λ algebra

#[test]
fn sum_codeword_matches_the_hand_example() {
    let t = sum_codeword(&[1.0], &[-1.0], &[0.3], &z1(4.0), &z1(2.0)).unwrap();
    assert_abs_diff_eq!(t[0], 0.0, epsilon = TOL);
}

#[test]
fn inversions_hold_for_every_codeword_pair_of_the_scalar_chain() {
    let (l1, l2, f) = (z1(4.0), z1(2.0), z1(1.0));
    let c1 = Codebook::from_pair(&l1, &f, 1, DEFAULT_ENUMERATION_CAP).unwrap();
    let c2 = Codebook::from_pair(&l2, &f, 2, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!((c1.len(), c2.len()), (4, 2));
    let mut r = rng(3);
    let mut cases = 0;
    for _ in 0..100 {
        let u2 = l2.sample_voronoi_uniform(&mut r);
        for t1 in c1.points() {
            for t2 in c2.points() {
                let t = sum_codeword(t1, t2, &u2, &l1, &l2).unwrap();
                assert!(close(&recover_t1_from_t(&t, t2, &u2, &l1, &l2).unwrap(), t1));
                assert!(close(&recover_t2_from_t(&t, t1, &l1, &l2).unwrap(), t2));
                cases += 1;
            }
        }
    }
    assert_eq!(cases, 800);
}

#[test]
fn inversions_hold_for_random_dithers_in_two_dimensions() {
    let steps = [ChainStep::Scale(2), ChainStep::Scale(2)];
    let chain = build_chain_with(&Lattice::integer(2, 1.0).unwrap(), &steps).unwrap();
    let (l1, l2, f) = (chain.level(0), chain.level(1), chain.level(2));
    let c1 = Codebook::from_pair(l1, f, 1, DEFAULT_ENUMERATION_CAP).unwrap();
    let c2 = Codebook::from_pair(l2, f, 2, DEFAULT_ENUMERATION_CAP).unwrap();
    let mut r = rng(4);
    for _ in 0..1000 {
        let t1 = c1.codeword(r.random_range(0..c1.len())).unwrap();
        let t2 = c2.codeword(r.random_range(0..c2.len())).unwrap();
        let u2 = l2.sample_voronoi_uniform(&mut r);
        let t = sum_codeword(t1, t2, &u2, l1, l2).unwrap();
        assert!(close(&recover_t1_from_t(&t, t2, &u2, l1, l2).unwrap(), t1));
        assert!(close(&recover_t2_from_t(&t, t1, l1, l2).unwrap(), t2));
    }
}

#[test]
fn zero_second_codeword_and_dither_give_t1() {
    let (l1, l2) = (z1(4.0), z1(2.0));
    let c1 = Codebook::from_pair(&l1, &z1(1.0), 1, DEFAULT_ENUMERATION_CAP).unwrap();
    for t in c1.points() {
        let got = recover_t1_from_t(t, &[0.0], &[0.0], &l1, &l2).unwrap();
        assert_abs_diff_eq!(got[0], t[0], epsilon = TOL);
    }
}

#[test]
fn nested_reductions_collapse() {
    let fine = Lattice::e8(1.0).unwrap();
    let coarse = fine.scaled(3.0).unwrap();
    let mut r = rng(5);
    let g = Normal::new(0.0, 10.0).unwrap();
    for _ in 0..1000 {
        let x: Vec<f64> = (0..8).map(|_| g.sample(&mut r)).collect();
        let twice = fine.mod_lattice(&coarse.mod_lattice(&x).unwrap()).unwrap();
        assert!(close(&twice, &fine.mod_lattice(&x).unwrap()));
    }
}

#[test]
fn algebra_rejects_non_nested_pairs() {
    let err = sum_codeword(&[0.0], &[0.0], &[0.0], &z1(2.0), &z1(4.0)).unwrap_err();
    assert!(matches!(err, Error::NestingViolation { .. }));
    let err = recover_t2_from_t(&[0.0], &[0.0], &z1(3.0), &z1(2.0)).unwrap_err();
    assert!(matches!(err, Error::NestingViolation { .. }));
}

#[test]
fn noiseless_relay_decodes_the_sum_codeword() {
    let codes = PairCodes::design([10.0, 4.0], [1.0, 0.6], &DesignParams::e8(), 9, [1, 2]).unwrap();
    let mut r = rng(6);
    for _ in 0..200 {
        let w = [r.random_range(0..codes.users[0].len()), r.random_range(0..codes.users[1].len())];
        let u: Vec<Vec<f64>> = (0..2)
            .map(|k| codes.users[k].chain().level(0).sample_voronoi_uniform(&mut r))
            .collect();
        let t = [codes.users[0].codebook().codeword(w[0]).unwrap(), codes.users[1].codebook().codeword(w[1]).unwrap()];
        let x0 = codes.users[0].codebook().encode(w[0], &u[0]).unwrap();
        let x1 = codes.users[1].codebook().encode(w[1], &u[1]).unwrap();
        let y: Vec<f64> = x0.iter().zip(&x1).map(|(a, b)| a + b).collect();
        let est = codes.relay_estimate(&y, [&u[0], &u[1]], 1.0).unwrap();
        let truth = codes.sum_point(t, [&u[0], &u[1]]).unwrap();
        assert_eq!(codes.index_of(&est), codes.index_of(&truth));
        assert_eq!(codes.recover(1, &truth, t[0], &u[0]).unwrap(), Some(w[1]));
        assert_eq!(codes.recover(0, &truth, t[1], &u[1]).unwrap(), Some(w[0]));
    }
}

// Noiseless runs

#[test]
fn noiseless_df_relay_has_no_errors() {
    let p = relay(10.0, 10.0, 1e-9);
    let s = DfSetup::design(&p, &with_rates(&[1.0]), 1).unwrap();
    let r = simulate_df_relay(&p, &s, &MonteCarlo::new(4, 50, 1)).unwrap();
    check_report(&r);
    assert_eq!(r.error_rate, 0.0);
    assert_eq!(r.node("relay", "w").unwrap().errors, 0);
    assert_eq!(r.node("destination", "w").unwrap().messages, 150);
}

#[test]
fn noiseless_two_relay_has_no_errors_at_any_node() {
    let p = two_relay(10.0, 1e-9);
    let mut d = with_rates(&[1.0]);
    d.splits = Some(vec![0.5, 0.3, 0.5]);
    let s = TwoRelaySetup::design(&p, &d, 2).unwrap();
    let r = simulate_df_two_relay(&p, &s, &MonteCarlo::new(5, 50, 2)).unwrap();
    check_report(&r);
    for n in &r.nodes {
        assert_eq!(n.errors, 0, "{n:?}");
    }
}

#[test]
fn noiseless_twrc_delivers_both_messages() {
    let p = twrc(10.0, 6.0, 1e-9);
    let s = TwrcSetup::design(&p, &with_rates(&[1.0, 0.8]), 3).unwrap();
    let r = simulate_twrc(&p, &s, &MonteCarlo::new(4, 50, 3)).unwrap();
    check_report(&r);
    for n in &r.nodes {
        assert_eq!(n.errors, 0, "{n:?}");
    }
}

/// The first-decoded user still sees the other transmitters as interference,
/// so it is given the stronger signal.
#[test]
fn noiseless_marc_has_no_errors_in_either_order() {
    let p = MarcParams { p1: 16.0, p2: 1.0, p_r: 0.01, n_r: 1e-9, n_d: 1e-9 };
    for (q, first, rates) in [(p, 0, [0.25, 0.5]), (p.swapped(), 1, [0.5, 0.25])] {
        let s = MarcSetup::design(&q, first, &with_rates(&rates), 4).unwrap();
        let r = simulate_marc(&q, &s, &MonteCarlo::new(4, 50, 4)).unwrap();
        check_report(&r);
        for n in &r.nodes {
            assert_eq!(n.errors, 0, "{n:?}");
        }
    }
}

#[test]
fn noiseless_cf_has_no_errors() {
    let p = relay(10.0, 1000.0, 1e-9);
    let s = CfSetup::design(&p, &with_rates(&[1.0]), 5).unwrap();
    assert!(s.relay.is_some());
    let r = simulate_cf(&p, &s, &MonteCarlo::new(4, 50, 5)).unwrap();
    assert_eq!(r.error_rate, 0.0);
    assert_eq!(r.node("destination", "index").unwrap().errors, 0);
}

// Two-way relay

#[test]
fn wrong_own_message_breaks_the_terminal() {
    let p = TwrcParams { h12: 0.3, h21: 0.3, ..twrc(10.0, 10.0, 1.0) };
    let mut s = TwrcSetup::design(&p, &with_rates(&[1.0, 1.0]), 6).unwrap();
    let mc = MonteCarlo::new(3, 200, 6);
    let honest = simulate_twrc(&p, &s, &mc).unwrap();
    s.corrupt_own = [true, false];
    let broken = simulate_twrc(&p, &s, &mc).unwrap();
    let e = |r: &SimReport| r.node("terminal1", "w2").unwrap().error_rate;
    assert!(s.relayed_lists[0].exact_size() < s.codes.relay.len() as u64);
    assert!(e(&honest) < 0.3, "{}", e(&honest));
    assert!(e(&broken) > 0.9, "{}", e(&broken));
    assert_eq!(
        honest.node("terminal2", "w1").unwrap().errors,
        broken.node("terminal2", "w1").unwrap().errors
    );
}

#[test]
fn relay_sum_decoding_stays_reliable_below_its_bound() {
    let p = twrc(10.0, 10.0, 1.0);
    let s = TwrcSetup::design(&p, &design(0.8), 7).unwrap();
    let r = simulate_twrc(&p, &s, &MonteCarlo::new(3, 300, 7)).unwrap();
    let relay = r.node("relay", "T").unwrap();
    assert!(relay.error_rate < 0.1, "{relay:?}");
    assert!(r.index_map.is_some());
}

// Multiple-access relay

#[test]
fn marc_statistics_follow_a_relabelling_of_the_users() {
    let p = marc(10.0, 5.0, 1.0);
    let d = design(0.8);
    let mc = MonteCarlo::new(3, 150, 8);
    let a = MarcSetup::design_labeled(&p, 0, &d, 8, [1, 2]).unwrap();
    let b = MarcSetup::design_labeled(&p.swapped(), 1, &d, 8, [2, 1]).unwrap();
    assert_eq!(a.codes.users[0].rate(), b.codes.users[1].rate());
    let ra = simulate_marc(&p, &a, &mc).unwrap();
    let rb = simulate_marc(&p.swapped(), &b, &mc).unwrap();
    for (x, y) in [("w1", "w2"), ("w2", "w1")] {
        let (na, nb) = (ra.node("destination", x).unwrap(), rb.node("destination", y).unwrap());
        assert_eq!((na.messages, na.errors, na.misses), (nb.messages, nb.errors, nb.misses));
    }
    assert_eq!(ra.node("relay", "T").unwrap().errors, rb.node("relay", "T").unwrap().errors);
}

// Wyner-Ziv

fn wz_pair(d: f64, k: u64) -> WzPair {
    let chain = build_chain_with(&Lattice::e8(1.0).unwrap(), &[ChainStep::Octonion(k)]).unwrap();
    let chain = chain.with_power(1, d).unwrap();
    WzPair::new(chain.level(1), chain.level(0)).unwrap()
}

#[test]
fn degenerate_quantizer_carries_no_information() {
    let q = Lattice::e8(2.0).unwrap();
    let pair = WzPair::new(&q, &q).unwrap();
    assert_eq!(pair.size(), 1);
    assert_eq!(pair.rate(), 0.0);
    let mut r = rng(9);
    let g = Normal::new(0.0, 3.0).unwrap();
    for _ in 0..50 {
        let x: Vec<f64> = (0..8).map(|_| g.sample(&mut r)).collect();
        let side: Vec<f64> = (0..8).map(|_| g.sample(&mut r)).collect();
        let u = q.sample_voronoi_uniform(&mut r);
        assert_eq!(wz_encode(&x, &u, &pair).unwrap(), 0);
        let y = wz_decode(0, &side, &u, 0.5, &pair).unwrap();
        let branch: Vec<f64> = side.iter().zip(&u).map(|(s, d)| -d - 0.5 * s).collect();
        let expect: Vec<f64> = q
            .mod_lattice(&branch)
            .unwrap()
            .iter()
            .zip(&side)
            .map(|(m, s)| m + 0.5 * s)
            .collect();
        assert!(close(&y, &expect));
    }
}

#[test]
fn wz_rate_is_the_log_index_per_dimension() {
    let pair = wz_pair(1.0, 4);
    assert_eq!(pair.size(), 256);
    assert_abs_diff_eq!(pair.rate(), 1.0, epsilon = TOL);
    assert!(matches!(
        WzPair::new(&Lattice::e8(1.0).unwrap(), &Lattice::e8(0.5).unwrap()).unwrap_err(),
        Error::NestingViolation { .. }
    ));
}

#[test]
fn noiseless_reconstruction_error_is_the_quantization_error() {
    let pair = wz_pair(1.0, 4);
    let mut r = rng(10);
    let g = Normal::new(0.0, 1.0).unwrap();
    let mut total = 0.0;
    let trials = 2000;
    for _ in 0..trials {
        let x: Vec<f64> = (0..8).map(|_| g.sample(&mut r)).collect();
        let u = pair.quantizer().sample_voronoi_uniform(&mut r);
        let i = wz_encode(&x, &u, &pair).unwrap();
        let y = wz_decode(i, &x, &u, 1.0, &pair).unwrap();
        total += dist2(&y, &x) / 8.0;
    }
    let mean = total / trials as f64;
    assert!((mean - 1.0).abs() < 0.05, "{mean}");
}

#[test]
fn side_information_scaling_leaves_the_predicted_variance() {
    let (p, n1, n2, d): (f64, f64, f64, f64) = (1.0, 1.0, 1.0, 1.0);
    let pair = wz_pair(d, 13);
    let alpha2 = p / (p + n2);
    let mut r = rng(11);
    let gx = Normal::new(0.0, p.sqrt()).unwrap();
    let g1 = Normal::new(0.0, n1.sqrt()).unwrap();
    let g2 = Normal::new(0.0, n2.sqrt()).unwrap();
    let (mut total, mut dist) = (0.0, 0.0);
    let trials = 2000;
    for _ in 0..trials {
        let x: Vec<f64> = (0..8).map(|_| gx.sample(&mut r)).collect();
        let src: Vec<f64> = x.iter().map(|v| v + g1.sample(&mut r)).collect();
        let side: Vec<f64> = x.iter().map(|v| v + g2.sample(&mut r)).collect();
        let u = pair.quantizer().sample_voronoi_uniform(&mut r);
        let i = wz_encode(&src, &u, &pair).unwrap();
        let y = wz_decode(i, &side, &u, alpha2, &pair).unwrap();
        let scaled: Vec<f64> = side.iter().map(|s| alpha2 * s).collect();
        total += dist2(&y, &scaled) / 8.0;
        dist += dist2(&y, &src) / 8.0;
    }
    let predicted = p * n2 / (p + n2) + n1 + d;
    let measured = total / trials as f64;
    assert!((measured / predicted - 1.0).abs() < 0.05, "{measured} vs {predicted}");
    assert!((dist / trials as f64 / d - 1.0).abs() < 0.1);
}

// Compress-and-forward

#[test]
fn strong_relay_meets_its_configured_distortion() {
    let p = relay(10.0, 1000.0, 1.0);
    let s = CfSetup::design(&p, &design(0.75), 12).unwrap();
    let r = simulate_cf(&p, &s, &MonteCarlo::new(3, 500, 12)).unwrap();
    let d = r.distortion.clone().unwrap();
    assert_eq!(d.configured, s.distortion());
    assert!((d.achieved / d.configured - 1.0).abs() < 0.1, "{d:?}");
    assert!(r.error_rate < 0.15);
}

#[test]
fn silent_relay_reduces_cf_to_the_direct_link() {
    let p = relay(10.0, 0.0, 1.0);
    let s = CfSetup::design(&p, &design(0.8), 13).unwrap();
    assert!(s.relay.is_none());
    assert!((s.formula - capacity_c(10.0).unwrap()).abs() < TOL);
    let r = simulate_cf(&p, &s, &MonteCarlo::new(3, 300, 13)).unwrap();
    assert!(r.error_rate < 0.1, "{}", r.error_rate);
    assert!(r.distortion.is_none());
    assert_eq!(r.power[1].mean, 0.0);
}

#[test]
fn distortion_below_the_feasibility_bound_is_a_domain_error() {
    let p = relay(1.0, 1.0, 1.0);
    let mut d = DesignParams::e8();
    d.distortion = Some(0.5 * cf_min_distortion(&p).unwrap());
    let err = CfSetup::design(&p, &d, 14).unwrap_err();
    assert!(matches!(err, Error::InfeasibleDistortion { .. }), "{err:?}");
}

// Decode-and-forward

#[test]
fn fixed_wrong_message_memberships_are_uncorrelated() {
    let p = relay(10.0, 10.0, 1.0);
    let mut s = DfSetup::design(&p, &design(0.8), 15).unwrap();
    s.direct_list = s.fresh.list_decoder(16.0).unwrap();
    s.relayed_list = s.coop.list_decoder(16.0).unwrap();
    let r = simulate_df_relay(&p, &s, &MonteCarlo::new(5, 2500, 15)).unwrap();
    let rho = r.list_correlation.expect("both lists vary");
    assert!(rho.abs() < 0.05, "{rho}");
}

#[test]
fn two_relay_with_one_silent_relay_behaves_like_df() {
    let p = relay(10.0, 10.0, 1.0);
    let d = design(0.8);
    let df = DfSetup::design(&p, &d, 16).unwrap();
    let q = TwoRelayParams { p1: 10.0, p2: 10.0, p3: 0.0, n2: 1.0, n3: 1.0, n4: 1.0 };
    let mut d2 = d.clone();
    d2.splits = Some(vec![df.alpha, 0.0, 0.0]);
    let two = TwoRelaySetup::design(&q, &d2, 16).unwrap();
    assert_eq!(two.codes[0].rate(), df.fresh.rate());
    let a = simulate_df_relay(&p, &df, &MonteCarlo::new(3, 1000, 16)).unwrap();
    let b = simulate_df_two_relay(&q, &two, &MonteCarlo::new(4, 1000, 17)).unwrap();
    let same = |x: &NodeStats, y: &NodeStats| {
        let (e1, e2) = (x.error_rate, y.error_rate);
        let pooled = (x.errors + y.errors) as f64 / (x.messages + y.messages) as f64;
        let sd = (pooled * (1.0 - pooled) * (1.0 / x.messages as f64 + 1.0 / y.messages as f64)).sqrt();
        assert!((e1 - e2).abs() <= 4.0 * sd + 1e-3, "{x:?} vs {y:?}");
    };
    same(a.node("relay", "w").unwrap(), b.node("node2", "w").unwrap());
    same(a.node("destination", "w").unwrap(), b.node("node4", "w").unwrap());
}

// Properties across schemes

fn noisier_relay(p: &RelayParams) -> RelayParams {
    RelayParams { n_r: 10.0 * p.n_r, n_d: 10.0 * p.n_d, ..*p }
}

#[test]
fn more_noise_never_lowers_the_error_rate() {
    let mc = MonteCarlo::new(3, 100, 18);
    for frac in [0.5, 0.65, 0.8] {
        let d = design(frac);
        let p = relay(10.0, 10.0, 1.0);
        let s = DfSetup::design(&p, &d, 18).unwrap();
        let base = simulate_df_relay(&p, &s, &mc).unwrap().error_rate;
        let noisy = simulate_df_relay(&noisier_relay(&p), &s, &mc).unwrap().error_rate;
        assert!(noisy >= base, "df {frac}: {noisy} < {base}");

        let s = CfSetup::design(&p, &d, 18).unwrap();
        let base = simulate_cf(&p, &s, &mc).unwrap().error_rate;
        let noisy = simulate_cf(&noisier_relay(&p), &s, &mc).unwrap().error_rate;
        assert!(noisy >= base, "cf {frac}: {noisy} < {base}");

        let q = two_relay(10.0, 1.0);
        let s = TwoRelaySetup::design(&q, &d, 18).unwrap();
        let base = simulate_df_two_relay(&q, &s, &mc).unwrap().error_rate;
        let noisy = simulate_df_two_relay(&two_relay(10.0, 10.0), &s, &mc).unwrap().error_rate;
        assert!(noisy >= base, "two-relay {frac}: {noisy} < {base}");

        let q = twrc(10.0, 10.0, 1.0);
        let s = TwrcSetup::design(&q, &d, 18).unwrap();
        let base = simulate_twrc(&q, &s, &mc).unwrap().error_rate;
        let noisy = simulate_twrc(&twrc(10.0, 10.0, 10.0), &s, &mc).unwrap().error_rate;
        assert!(noisy >= base, "twrc {frac}: {noisy} < {base}");

        let q = marc(10.0, 10.0, 1.0);
        let s = MarcSetup::design(&q, 0, &d, 18).unwrap();
        let base = simulate_marc(&q, &s, &mc).unwrap().error_rate;
        let noisy = simulate_marc(&marc(10.0, 10.0, 10.0), &s, &mc).unwrap().error_rate;
        assert!(noisy >= base, "marc {frac}: {noisy} < {base}");
    }
}

#[test]
fn transmitters_respect_their_power_budgets_on_average() {
    let d = design(0.8);
    let mc = MonteCarlo::new(3, 200, 19);
    let p = relay(10.0, 10.0, 1.0);
    let mut reports = vec![
        simulate_df_relay(&p, &DfSetup::design(&p, &d, 19).unwrap(), &mc).unwrap(),
        simulate_cf(&p, &CfSetup::design(&relay(10.0, 1000.0, 1.0), &d, 19).unwrap(), &mc).unwrap(),
    ];
    let q = two_relay(10.0, 1.0);
    reports.push(simulate_df_two_relay(&q, &TwoRelaySetup::design(&q, &d, 19).unwrap(), &mc).unwrap());
    let q = twrc(10.0, 4.0, 1.0);
    reports.push(simulate_twrc(&q, &TwrcSetup::design(&q, &d, 19).unwrap(), &mc).unwrap());
    let q = marc(4.0, 10.0, 1.0);
    reports.push(simulate_marc(&q, &MarcSetup::design(&q, 1, &d, 19).unwrap(), &mc).unwrap());
    for r in &reports {
        for pw in &r.power {
            assert!(pw.mean <= 1.05 * pw.budget, "{} {pw:?}", r.scheme);
        }
    }
}

#[test]
fn invalid_runs_are_rejected() {
    let p = relay(10.0, 10.0, 1.0);
    let s = DfSetup::design(&p, &design(0.8), 20).unwrap();
    let err = simulate_df_relay(&p, &s, &MonteCarlo::new(3, 0, 1)).unwrap_err();
    assert!(matches!(err, Error::InvalidParameter { ref name, .. } if name == "trials"));
    let err = simulate_df_relay(&p, &s, &MonteCarlo::new(1, 5, 1)).unwrap_err();
    assert!(matches!(err, Error::InvalidParameter { ref name, .. } if name == "blocks"));
    let q = two_relay(10.0, 1.0);
    let s = TwoRelaySetup::design(&q, &design(0.8), 20).unwrap();
    assert!(simulate_df_two_relay(&q, &s, &MonteCarlo::new(2, 5, 1)).is_err());
    let mut d = design(0.8);
    d.splits = Some(vec![0.7, 0.5, 0.0]);
    assert!(TwoRelaySetup::design(&q, &d, 20).is_err());
}

#[test]
fn reports_are_reproducible() {
    let p = twrc(10.0, 10.0, 1.0);
    let s = TwrcSetup::design(&p, &design(0.8), 21).unwrap();
    let mc = MonteCarlo::new(3, 64, 21);
    let mut a = simulate_twrc(&p, &s, &mc).unwrap();
    let mut b = simulate_twrc(&p, &s, &mc).unwrap();
    a.wall_time_s = 0.0;
    b.wall_time_s = 0.0;
    assert_eq!(a, b);
    let mut c = simulate_twrc(&p, &s, &MonteCarlo::new(3, 64, 22)).unwrap();
    c.wall_time_s = 0.0;
    assert_ne!(a.nodes, c.nodes);
}

#[test]
fn codebook_seeds_differ_per_stream() {
    assert_ne!(codebook_seed(1, "df/fresh"), codebook_seed(1, "df/coop"));
    assert_ne!(codebook_seed(1, "df/fresh"), codebook_seed(2, "df/fresh"));
    assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
    let p = relay(10.0, 10.0, 1.0);
    let s = DfSetup::design(&p, &design(0.8), 23).unwrap();
    let same = (0..s.fresh.len()).all(|w| s.fresh.codebook().codeword(w).unwrap() == s.coop.codebook().codeword(w).unwrap());
    assert!(!same);
    let cap = capacity_c(10.0).unwrap();
    assert!(s.fresh.rate() <= 0.8 * cap + TOL);
}
