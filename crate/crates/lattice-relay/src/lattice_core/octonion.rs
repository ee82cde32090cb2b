//! Integral octonions and the E8 similarity sublattices they generate.
//!
//! The integral octonions are realized as the construction-A lattice
//! `Z^8 + C/2` with `C` the [8,4,4] extended Hamming code below, in the
//! coordinates where the multiplication table of [`multiply`] closes on it.
//! With this scaling the minimal norm is 1 and the volume is 1/16.
//!
//! Left multiplication by an element `a` of norm `N` is a similarity with
//! `L_a^T L_a = N I` that maps the lattice onto a sublattice of index `N^4`,
//! so every integer `N >= 1` is an available nesting step in dimension 8.

/// Generator rows of the extended Hamming code, in octonion coordinates.
pub const HAMMING_8_4: [[u64; 8]; 4] = [
    [1, 0, 0, 0, 1, 1, 1, 0],
    [0, 1, 0, 0, 1, 0, 1, 1],
    [0, 0, 1, 0, 1, 1, 0, 1],
    [0, 0, 0, 1, 0, 1, 1, 1],
];

/// Exact normalized second moment of E8.
pub const E8_NORMALIZED_SECOND_MOMENT: f64 = 929.0 / 12960.0;

const TRIPLES: [(usize, usize, usize); 7] = [
    (1, 2, 4),
    (2, 3, 5),
    (3, 4, 6),
    (4, 5, 7),
    (5, 6, 1),
    (6, 7, 2),
    (7, 1, 3),
];

/// `(sign, index)` with `e_i e_j = sign * e_index`.
fn unit_product(i: usize, j: usize) -> (f64, usize) {
    if i == 0 {
        return (1.0, j);
    }
    if j == 0 {
        return (1.0, i);
    }
    if i == j {
        return (-1.0, 0);
    }
    for &(a, b, c) in &TRIPLES {
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            if (i, j) == (x, y) {
                return (1.0, z);
            }
            if (i, j) == (y, x) {
                return (-1.0, z);
            }
        }
    }
    unreachable!("every pair of distinct imaginary units lies on one line")
}

/// Octonion product `a b`.
pub fn multiply(a: &[f64; 8], b: &[f64; 8]) -> [f64; 8] {
    let mut out = [0.0; 8];
    for i in 0..8 {
        if a[i] == 0.0 {
            continue;
        }
        for j in 0..8 {
            let (s, k) = unit_product(i, j);
            out[k] += s * a[i] * b[j];
        }
    }
    out
}

/// Squared Euclidean norm.
pub fn norm(a: &[f64; 8]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

/// Row-major matrix of `x -> a x`.
pub fn left_multiplication_matrix(a: &[f64; 8]) -> Vec<f64> {
    let mut m = vec![0.0; 64];
    for j in 0..8 {
        let mut e = [0.0; 8];
        e[j] = 1.0;
        let col = multiply(a, &e);
        for i in 0..8 {
            m[i * 8 + j] = col[i];
        }
    }
    m
}

/// All 16 codewords of [`HAMMING_8_4`].
pub fn hamming_codewords() -> Vec<[u64; 8]> {
    (0..16u32)
        .map(|mask| {
            let mut w = [0u64; 8];
            for (r, row) in HAMMING_8_4.iter().enumerate() {
                if mask >> r & 1 == 1 {
                    for i in 0..8 {
                        w[i] ^= row[i];
                    }
                }
            }
            w
        })
        .collect()
}

/// An integral octonion of the given norm, or `None` for `norm == 0`.
///
/// The search is deterministic: codewords are scanned in mask order and
/// coordinates from the most negative admissible value upward.
pub fn element_of_norm(target: u64) -> Option<[f64; 8]> {
    if target == 0 {
        return None;
    }
    // Work in doubled coordinates y = 2x, so sum y_i^2 = 4 * target.
    let goal = 4 * target as i64;
    for word in hamming_codewords() {
        let mut y = [0i64; 8];
        if search(&word, 0, goal, &mut y) {
            let mut out = [0.0; 8];
            for i in 0..8 {
                out[i] = y[i] as f64 / 2.0;
            }
            return Some(out);
        }
    }
    None
}

fn search(word: &[u64; 8], pos: usize, remaining: i64, y: &mut [i64; 8]) -> bool {
    if pos == 8 {
        return remaining == 0;
    }
    let odd = word[pos] == 1;
    // Each later odd coordinate contributes at least 1.
    let floor_rest: i64 = word[pos + 1..].iter().map(|&b| b as i64).sum();
    let bound = ((remaining - floor_rest).max(0) as f64).sqrt().floor() as i64;
    let mut v = -bound;
    while v <= bound {
        if (v.rem_euclid(2) == 1) == odd {
            let rest = remaining - v * v;
            if rest >= floor_rest {
                y[pos] = v;
                if search(word, pos + 1, rest, y) {
                    return true;
                }
            }
        }
        v += 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_square_to_minus_one() {
        for i in 1..8 {
            let mut e = [0.0; 8];
            e[i] = 1.0;
            let p = multiply(&e, &e);
            assert_eq!(p[0], -1.0);
        }
    }

    #[test]
    fn norm_is_multiplicative() {
        let a = [0.5, -0.5, 0.5, 0.0, 1.0, 0.5, 0.0, 2.0];
        let b = [1.0, 2.0, 0.0, -1.0, 0.0, 0.0, 3.0, 0.5];
        let ab = multiply(&a, &b);
        assert!((norm(&ab) - norm(&a) * norm(&b)).abs() < 1e-9);
    }

    #[test]
    fn every_small_norm_is_represented() {
        for n in 1..40 {
            let a = element_of_norm(n).expect("represented");
            assert!((norm(&a) - n as f64).abs() < 1e-12);
        }
    }
}
