mod common;

use std::collections::BTreeSet;

use approx::assert_abs_diff_eq;
use common::*;
use lattice_relay::lattice_core::{octonion, Lattice};
use lattice_relay::list_decoding::*;
use lattice_relay::nested_codes::*;
use lattice_relay::Error;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

struct Setup {
    chain: NestedChain,
    cb: Codebook,
    dec: ListDecoder,
}

/// Codebook on levels `(0, 2)` with list lattice at level 1.
fn setup(chain: NestedChain, seed: u64) -> Setup {
    let cb = enumerate_codebook(&chain, 0, 2, seed).unwrap();
    let dec = ListDecoder::new(&cb, chain.level(1)).unwrap();
    Setup { chain, cb, dec }
}

fn z(n: usize) -> Lattice {
    Lattice::integer(n, 1.0).unwrap()
}

fn random_vec(n: usize, half: f64, r: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| r.random_range(-half..half)).collect()
}

/// Messages whose fine points fall in `Y' + 𝒱_s`, by enumerating fine points near `Y'`.
fn brute_force_list(s: &Setup, y: &[f64], dither: &[f64], alpha: f64, radius: f64) -> BTreeSet<usize> {
    let coarse = s.chain.level(0);
    let v: Vec<f64> = y.iter().zip(dither).map(|(a, u)| alpha * a + u).collect();
    let yp = coarse.mod_lattice(&v).unwrap();
    points_within(s.chain.level(2), &yp, radius)
        .into_iter()
        .filter(|p| {
            let d: Vec<f64> = p.iter().zip(&yp).map(|(a, b)| a - b).collect();
            s.chain.level(1).nearest_point(&d).unwrap().iter().all(|v| *v == 0.0)
        })
        .map(|p| s.cb.message_of(&p))
        .collect()
}

#[test]
fn mmse_alpha_values() {
    assert_eq!(mmse_alpha(2.0, 2.0).unwrap(), 0.5);
    assert_eq!(mmse_alpha(3.0, 1.0).unwrap(), 0.75);
    assert!(mmse_alpha(1.0, 1e-12).unwrap() > 1.0 - 1e-11);
    assert!(mmse_alpha(0.0, 1.0).is_err());
    assert!(mmse_alpha(1.0, -1.0).is_err());
}

#[test]
fn equivalent_noise_reduces_to_mmse_error() {
    let (p, n) = (4.0, 1.5);
    let a = mmse_alpha(p, n).unwrap();
    let v = equivalent_noise_variance(a, p, &MixedNoiseSpec::gaussian(n), &[1.0]).unwrap();
    assert_abs_diff_eq!(v, p * n / (p + n), epsilon = 1e-12);
}

#[test]
fn equivalent_noise_at_unit_scaling_is_the_gaussian_part() {
    let v = equivalent_noise_variance(1.0, 7.0, &MixedNoiseSpec::gaussian(0.3), &[1.4]).unwrap();
    assert_abs_diff_eq!(v, 0.3, epsilon = 1e-12);
}

#[test]
fn equivalent_noise_with_a_uniform_component() {
    let spec = MixedNoiseSpec {
        gaussian_variance: 1.0,
        uniform_components: vec![(z(1), 2.0)],
    };
    let v = equivalent_noise_variance(0.5, 4.0, &spec, &[1.1, 1.1]).unwrap();
    let expected = 0.25 * 1.21 * 4.0 + 0.25 * 1.0 + 0.25 * 1.21 * 2.0;
    assert_abs_diff_eq!(v, expected, epsilon = 1e-12);
    assert_abs_diff_eq!(v, 2.065, epsilon = 1e-12);
    assert_abs_diff_eq!(spec.total_variance(), 3.0, epsilon = 1e-12);
}

#[test]
fn equivalent_noise_rejects_bad_inputs() {
    let spec = MixedNoiseSpec::gaussian(1.0);
    assert!(matches!(
        equivalent_noise_variance(0.5, 1.0, &spec, &[0.9]),
        Err(Error::InvalidParameter { .. })
    ));
    assert!(equivalent_noise_variance(1.5, 1.0, &spec, &[1.0]).is_err());
    assert!(matches!(
        equivalent_noise_variance(0.5, 1.0, &spec, &[1.0, 1.0]),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn scalar_chain_lists_have_two_messages() {
    let s = setup(build_chain(&z(1), &[2, 2]).unwrap(), 1);
    let mut r = rng(1);
    for _ in 0..1000 {
        let y = random_vec(1, 20.0, &mut r);
        let l = s.dec.decode(&s.cb, &y, &[0.0], 1.0).unwrap();
        assert_eq!(l.messages.len(), 2);
        assert_eq!(l.exact_size, 2);
        let set: BTreeSet<usize> = l.messages.iter().copied().collect();
        assert_eq!(set.len(), 2);
    }
}

#[test]
fn list_at_the_fine_level_is_the_unique_decision() {
    let chain = build_chain(&z(2), &[2, 2]).unwrap();
    let cb = enumerate_codebook(&chain, 0, 2, 5).unwrap();
    let dec = ListDecoder::new(&cb, chain.level(2)).unwrap();
    let mut r = rng(2);
    for _ in 0..200 {
        let y = random_vec(2, 10.0, &mut r);
        let u = chain.level(0).sample_voronoi_uniform(&mut r);
        let l = dec.decode(&cb, &y, &u, 0.8).unwrap();
        assert_eq!(l.messages, vec![unique_decode(&cb, &y, &u, 0.8).unwrap()]);
    }
}

#[test]
fn noiseless_transmission_is_in_the_list() {
    let s = setup(
        build_chain_with(&Lattice::e8(1.0).unwrap(), &[ChainStep::Octonion(2), ChainStep::Octonion(3)]).unwrap(),
        3,
    );
    let mut r = rng(3);
    for _ in 0..200 {
        let w = r.random_range(0..s.cb.len());
        let u = s.chain.level(0).sample_voronoi_uniform(&mut r);
        let x = s.cb.encode(w, &u).unwrap();
        let l = s.dec.decode(&s.cb, &x, &u, 1.0).unwrap();
        assert!(l.messages.contains(&w));
        assert_eq!(unique_decode(&s.cb, &x, &u, 1.0).unwrap(), w);
    }
}

#[test]
fn q_form_matches_on_the_scalar_chain() {
    let s = setup(build_chain(&z(1), &[2, 2]).unwrap(), 7);
    let mut r = rng(4);
    let single = ListDecoder::new(&s.cb, s.chain.level(2)).unwrap();
    assert_eq!(
        single.decode(&s.cb, &[0.0], &[0.0], 1.0).unwrap(),
        single.decode_via_q(&s.cb, &[0.0], &[0.0], 1.0).unwrap()
    );
    for _ in 0..1000 {
        let y = random_vec(1, 20.0, &mut r);
        let u = s.chain.level(0).sample_voronoi_uniform(&mut r);
        let a = list_decode(&s.dec, &s.cb, &y, &u, 0.9).unwrap();
        let b = list_decode_via_q(&s.dec, &s.cb, &y, &u, 0.9).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn q_form_matches_on_the_square_chain() {
    let s = setup(build_chain(&z(2), &[2, 2]).unwrap(), 8);
    let mut r = rng(5);
    for _ in 0..100 {
        let y = random_vec(2, 20.0, &mut r);
        let u = s.chain.level(0).sample_voronoi_uniform(&mut r);
        let a = s.dec.decode(&s.cb, &y, &u, 1.0).unwrap();
        let b = s.dec.decode_via_q(&s.cb, &y, &u, 1.0).unwrap();
        assert_eq!(a.messages, b.messages);
        assert_eq!(a.messages.len(), 4);
    }
}

#[test]
fn lists_match_exhaustive_enumeration() {
    let cases = vec![
        (build_chain(&z(1), &[2, 2]).unwrap(), 3.0),
        (build_chain(&z(2), &[2, 2]).unwrap(), 4.0),
        (build_chain(&z(3), &[2, 2]).unwrap(), 4.0),
        (build_chain(&Lattice::construction_a(2, 3, &[vec![1, 2]], 1.0).unwrap(), &[2, 3]).unwrap(), 6.0),
        // the list lattice has norm 2, so its covering radius is sqrt(2)/sqrt(2)
        (
            build_chain_with(&Lattice::e8(1.0).unwrap(), &[ChainStep::Octonion(2), ChainStep::Octonion(2)]).unwrap(),
            1.0 + 1e-6,
        ),
    ];
    let mut r = rng(6);
    for (chain, radius) in cases {
        let s = setup(chain, 11);
        let n = s.chain.dim();
        for _ in 0..100 {
            let y = random_vec(n, 10.0, &mut r);
            let u = s.chain.level(0).sample_voronoi_uniform(&mut r);
            let l = s.dec.decode(&s.cb, &y, &u, 0.7).unwrap();
            let oracle = brute_force_list(&s, &y, &u, 0.7, radius);
            assert_eq!(l.messages.iter().copied().collect::<BTreeSet<_>>(), oracle);
            assert_eq!(l.messages.len() as u64, s.chain.index(1, 2));
        }
    }
}

#[test]
fn list_sizes_equal_volume_ratios() {
    let e8 = Lattice::e8(1.0).unwrap();
    let chains = vec![
        (build_chain(&z(1), &[2, 2]).unwrap(), 2),
        (build_chain(&z(2), &[2, 2]).unwrap(), 4),
        (build_chain(&z(3), &[3, 2]).unwrap(), 8),
        (build_chain_with(&e8, &[ChainStep::Octonion(3), ChainStep::Scale(1)]).unwrap(), 1),
        (build_chain_with(&e8, &[ChainStep::Octonion(2), ChainStep::Octonion(2)]).unwrap(), 16),
    ];
    let mut r = rng(7);
    for (chain, expected) in chains {
        let s = setup(chain, 12);
        assert_eq!(s.dec.exact_size(), expected);
        let n = s.chain.dim();
        for _ in 0..1000 {
            let y = random_vec(n, 15.0, &mut r);
            let u = s.chain.level(0).sample_voronoi_uniform(&mut r);
            let a = s.dec.decode(&s.cb, &y, &u, 0.6).unwrap();
            let b = s.dec.decode_via_q(&s.cb, &y, &u, 0.6).unwrap();
            assert_eq!(a.messages.len() as u64, expected);
            assert_eq!(a.messages.iter().collect::<BTreeSet<_>>().len() as u64, expected);
            assert_eq!(a, b);
        }
    }
}

#[test]
fn lists_are_invariant_to_coarse_shifts() {
    let s = setup(
        build_chain_with(&Lattice::e8(1.0).unwrap(), &[ChainStep::Octonion(2), ChainStep::Scale(2)]).unwrap(),
        13,
    );
    let mut r = rng(8);
    for _ in 0..100 {
        let y = random_vec(8, 5.0, &mut r);
        let u = s.chain.level(0).sample_voronoi_uniform(&mut r);
        let k: Vec<i64> = (0..8).map(|_| r.random_range(-3..=3)).collect();
        let lam = s.chain.level(0).point(&k).unwrap();
        let shifted: Vec<f64> = y.iter().zip(&lam).map(|(a, b)| a + b).collect();
        let a = s.dec.decode(&s.cb, &y, &u, 1.0).unwrap();
        let b = s.dec.decode(&s.cb, &shifted, &u, 1.0).unwrap();
        assert_eq!(a.messages, b.messages);
    }
}

#[test]
fn unique_decision_is_inside_coarser_lists() {
    let chain = build_chain(&z(2), &[2, 2, 2]).unwrap();
    let cb = enumerate_codebook(&chain, 0, 3, 14).unwrap();
    let mut r = rng(9);
    for _ in 0..200 {
        let y = random_vec(2, 10.0, &mut r);
        let u = chain.level(0).sample_voronoi_uniform(&mut r);
        let w = unique_decode(&cb, &y, &u, 1.0).unwrap();
        for level in 0..=3 {
            let dec = ListDecoder::new(&cb, chain.level(level)).unwrap();
            assert!(dec.decode(&cb, &y, &u, 1.0).unwrap().messages.contains(&w));
        }
    }
}

#[test]
fn whole_codebook_list_when_the_list_lattice_is_the_coarse_one() {
    let chain = build_chain(&z(2), &[3]).unwrap();
    let cb = enumerate_codebook(&chain, 0, 1, 0).unwrap();
    let dec = ListDecoder::new(&cb, chain.level(0)).unwrap();
    let l = dec.decode(&cb, &[0.3, 0.1], &[0.0, 0.0], 1.0).unwrap();
    assert_eq!(l.messages, (0..9).collect::<Vec<_>>());
}

#[test]
fn list_lattice_outside_the_chain_is_rejected() {
    let chain = build_chain(&z(1), &[2, 2]).unwrap();
    let cb = enumerate_codebook(&chain, 0, 2, 0).unwrap();
    let off = Lattice::integer(1, 3.0).unwrap();
    assert!(matches!(ListDecoder::new(&cb, &off), Err(Error::NestingViolation { .. })));
    let too_fine = Lattice::integer(1, 0.5).unwrap();
    assert!(matches!(ListDecoder::new(&cb, &too_fine), Err(Error::NestingViolation { .. })));
    let dec = ListDecoder::new(&cb, chain.level(1)).unwrap();
    assert!(matches!(dec.decode(&cb, &[0.0, 1.0], &[0.0], 1.0), Err(Error::DimensionMismatch { .. })));
}

/// Error rate of unique decoding over `trials` Gaussian channel uses at SNR 10.
fn unique_error_rate(steps: &[ChainStep], trials: usize, seed: u64) -> f64 {
    let rows: Vec<Vec<u64>> = octonion::HAMMING_8_4.iter().map(|r| r.to_vec()).collect();
    let base = Lattice::construction_a(8, 2, &rows, 1.0).unwrap();
    let chain = build_chain_with(&base, steps).unwrap();
    // the Hamming construction is E8, whose normalized second moment is known
    let moment = octonion::E8_NORMALIZED_SECOND_MOMENT * chain.level(0).volume().powf(0.25);
    let chain = chain.scaled((10.0 / moment).sqrt()).unwrap();
    let cb = enumerate_codebook(&chain, 0, 1, seed).unwrap();
    let alpha = mmse_alpha(10.0, 1.0).unwrap();
    let mut r = rng(seed);
    let mut errors = 0;
    for _ in 0..trials {
        let w = r.random_range(0..cb.len());
        let u = chain.level(0).sample_voronoi_uniform(&mut r);
        let x = cb.encode(w, &u).unwrap();
        let y: Vec<f64> = x
            .iter()
            .map(|v| {
                let g: f64 = StandardNormal.sample(&mut r);
                v + g
            })
            .collect();
        if unique_decode(&cb, &y, &u, alpha).unwrap() != w {
            errors += 1;
        }
    }
    errors as f64 / trials as f64
}

#[test]
fn unique_decoding_below_capacity() {
    // rate 1 bit against C(10) ~ 1.73
    let p = unique_error_rate(&[ChainStep::Scale(2)], 2000, 21);
    assert!(p < 0.05, "error rate {p}");
}

#[test]
fn unique_decoding_above_capacity() {
    // rate ~2.32 bits against C(10) ~ 1.73
    let p = unique_error_rate(&[ChainStep::Octonion(25)], 2000, 22);
    assert!(p > 0.5, "error rate {p}");
}
