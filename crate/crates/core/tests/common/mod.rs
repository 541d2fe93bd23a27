#![allow(dead_code)]

//! Direct, unfactorized reference formulas shared by the integration tests.

use entropic_core::scenarios::{random_instance, RandomInstance};
use entropic_core::{Complex64, DensityMatrix, MeasurementBasis};

pub fn overlap(a: &MeasurementBasis, x: usize, b: &MeasurementBasis, y: usize) -> f64 {
    a.vector(x)
        .iter()
        .zip(b.vector(y))
        .map(|(u, v)| u.conj() * v)
        .sum::<Complex64>()
        .norm_sqr()
}

pub fn born(rho: &DensityMatrix, basis: &MeasurementBasis) -> Vec<f64> {
    let m = rho.matrix();
    let d = rho.dim();
    (0..d)
        .map(|x| {
            let v = basis.vector(x);
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    acc += v[i].conj() * m[(i, j)] * v[j];
                }
            }
            acc.re
        })
        .collect()
}

pub fn shannon(p: &[f64], ln: bool) -> f64 {
    let l = |x: f64| if ln { x.ln() } else { x.log2() };
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * l(x)).sum::<f64>()
}

/// All tuples in `[0, d)^len`, lexicographic.
pub fn tuples(d: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `(d, N)` cycles through {2,3}² and the state rank through 1..=d.
pub fn mixed_instance(seed: u64) -> RandomInstance {
    let d = 2 + (seed % 2) as usize;
    let n = 2 + ((seed / 2) % 2) as usize;
    let rank = 1 + (seed / 4) as usize % d;
    random_instance(d, n, rank, 0x5eed_0000 + seed).unwrap()
}
