#![allow(dead_code)]

use lattice_relay::lattice_core::Lattice;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Closest lattice point among all points within `radius` of `x`, found by
/// exhaustive sphere enumeration on the QR factor of the generator.
pub fn brute_force_nearest(lat: &Lattice, x: &[f64], radius: f64) -> (Vec<f64>, f64) {
    let n = lat.dim();
    let g = lat.generator();
    let qr = g.clone().qr();
    let r = qr.r();
    let y = qr.q().transpose() * nalgebra::DVector::from_column_slice(x);
    let mut k = vec![0i64; n];
    let mut best = (vec![0.0; n], f64::INFINITY);
    enumerate(&r, &y, radius * radius, n, 0.0, &mut k, &mut |k, _| {
        let p: Vec<f64> = (0..n).map(|i| (0..n).map(|j| g[(i, j)] * k[j] as f64).sum()).collect();
        let d = dist2(&p, x);
        if d < best.1 {
            best = (p, d);
        }
    });
    assert!(best.1.is_finite(), "no lattice point within the search radius");
    best
}

/// Every lattice point within `radius` of `x`.
pub fn points_within(lat: &Lattice, x: &[f64], radius: f64) -> Vec<Vec<f64>> {
    let n = lat.dim();
    let g = lat.generator();
    let qr = g.clone().qr();
    let r = qr.r();
    let y = qr.q().transpose() * nalgebra::DVector::from_column_slice(x);
    let mut k = vec![0i64; n];
    let mut out = Vec::new();
    enumerate(&r, &y, radius * radius, n, 0.0, &mut k, &mut |k, _| {
        out.push((0..n).map(|i| (0..n).map(|j| g[(i, j)] * k[j] as f64).sum()).collect());
    });
    out
}

fn enumerate(
    r: &nalgebra::DMatrix<f64>,
    y: &nalgebra::DVector<f64>,
    bound: f64,
    level: usize,
    partial: f64,
    k: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64], f64),
) {
    if level == 0 {
        visit(k, partial);
        return;
    }
    let i = level - 1;
    let n = k.len();
    let mut rest = y[i];
    for j in level..n {
        rest -= r[(i, j)] * k[j] as f64;
    }
    let rii = r[(i, i)];
    let center = rest / rii;
    let half = ((bound - partial).max(0.0)).sqrt() / rii.abs();
    let lo = (center - half).floor() as i64;
    let hi = (center + half).ceil() as i64;
    for v in lo..=hi {
        let e = rest - rii * v as f64;
        let p = partial + e * e;
        if p <= bound * (1.0 + 1e-12) {
            k[i] = v;
            enumerate(r, y, bound, i, p, k, visit);
        }
    }
    k[i] = 0;
}

/// Pearson statistic of `counts` against equal expected frequencies and the
/// 0.01 critical value.
pub fn chi_square_uniform(counts: &[u64]) -> (f64, f64) {
    let total: u64 = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    let stat = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    let crit = ChiSquared::new((counts.len() - 1) as f64).unwrap().inverse_cdf(0.99);
    (stat, crit)
}

/// Cell counts of points in `[lo, lo + width)^2` split into a `k x k` grid.
pub fn grid_counts(points: &[Vec<f64>], lo: f64, width: f64, k: usize) -> Vec<u64> {
    let mut counts = vec![0u64; k * k];
    for p in points {
        let ix = (((p[0] - lo) / width) * k as f64).floor().clamp(0.0, (k - 1) as f64) as usize;
        let iy = (((p[1] - lo) / width) * k as f64).floor().clamp(0.0, (k - 1) as f64) as usize;
        counts[ix * k + iy] += 1;
    }
    counts
}
