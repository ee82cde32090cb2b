//! Integer lattice bases in lower-triangular (Hermite) form.

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Lower-triangular basis of the full-rank integer lattice spanned by `vectors`.
///
/// Column `i` of the result has zeros above row `i` and a positive pivot on
/// the diagonal; entries below the pivot are reduced into `[0, pivot)` of the
/// later columns. `modulus` must be a multiple of every pivot (the lattice
/// contains `modulus * Z^n`); it is used to keep intermediate entries small.
pub(crate) fn triangular_basis(n: usize, vectors: &[Vec<i128>], modulus: i128) -> Option<Vec<Vec<i128>>> {
    let mut basis: Vec<Option<Vec<i128>>> = vec![None; n];
    let reduce = |v: &mut Vec<i128>, from: usize| {
        if modulus > 0 {
            for x in v.iter_mut().skip(from) {
                *x = x.rem_euclid(modulus);
            }
        }
    };
    let mut seed: Vec<Vec<i128>> = Vec::with_capacity(n + vectors.len());
    if modulus > 0 {
        for i in 0..n {
            let mut e = vec![0i128; n];
            e[i] = modulus;
            seed.push(e);
        }
    }
    seed.extend(vectors.iter().cloned());

    for v0 in seed {
        let mut v = v0;
        for i in 0..n {
            if v[i] == 0 {
                continue;
            }
            match basis[i].take() {
                None => {
                    if v[i] < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    reduce(&mut v, i + 1);
                    basis[i] = Some(v);
                    break;
                }
                Some(b) => {
                    let (g, s, t) = egcd(b[i], v[i]);
                    let (bi, vi) = (b[i] / g, v[i] / g);
                    let mut nb: Vec<i128> = b.iter().zip(&v).map(|(x, y)| s * x + t * y).collect();
                    let mut nv: Vec<i128> = b.iter().zip(&v).map(|(x, y)| vi * x - bi * y).collect();
                    reduce(&mut nb, i + 1);
                    reduce(&mut nv, i + 1);
                    basis[i] = Some(nb);
                    v = nv;
                }
            }
        }
    }

    let mut cols: Vec<Vec<i128>> = basis.into_iter().collect::<Option<Vec<_>>>()?;
    for j in 0..n {
        for i in (j + 1)..n {
            let q = cols[j][i].div_euclid(cols[i][i]);
            if q != 0 {
                let ci = cols[i].clone();
                for (x, y) in cols[j].iter_mut().zip(&ci) {
                    *x -= q * y;
                }
            }
        }
    }
    Some(cols)
}

/// Reduces `v` modulo the lattice spanned by the lower-triangular columns `cols`
/// to the canonical representative with `0 <= v[i] < cols[i][i]`.
pub(crate) fn reduce_mod(cols: &[Vec<i128>], v: &mut [i128]) {
    for (i, c) in cols.iter().enumerate() {
        let q = v[i].div_euclid(c[i]);
        if q != 0 {
            for (x, y) in v.iter_mut().zip(c) {
                *x -= q * y;
            }
        }
    }
}
