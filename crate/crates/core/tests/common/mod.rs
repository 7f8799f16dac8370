//! Generators shared by the integration tests.
#![allow(dead_code)]

use hodge_lattice::algebra::{Rat, RatMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn elementary(n: usize, i: usize, j: usize, c: i64) -> RatMatrix {
    let mut e = RatMatrix::identity(n);
    e[(i, j)] = Rat::from_int(c);
    e
}

pub fn jordan(sizes: &[usize]) -> (usize, Vec<RatMatrix>) {
    let n: usize = sizes.iter().sum();
    let mut blocks = Vec::new();
    let mut start = 0;
    for &k in sizes {
        let mut j = RatMatrix::zeros(n, n);
        for r in 1..k {
            j[(start + r - 1, start + r)] = Rat::one();
        }
        blocks.push(j);
        start += k;
    }
    (n, blocks)
}

pub fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut left = n;
    let mut parts = Vec::new();
    while left > 0 {
        let k = rng.random_range(1..=left);
        parts.push(k);
        left -= k;
    }
    parts
}

/// Commuting nilpotents: on each Jordan block a polynomial without
/// constant term in that block, then a common change of basis.
pub fn random_configuration(rng: &mut ChaCha8Rng) -> Vec<RatMatrix> {
    let dim = rng.random_range(1..=5);
    let (n, blocks) = jordan(&random_partition(rng, dim));
    let count = rng.random_range(1..=3);
    let mut ns = Vec::new();
    for _ in 0..count {
        let mut m = RatMatrix::zeros(n, n);
        for j in &blocks {
            let mut power = j.clone();
            for _ in 1..n.max(2) {
                let c = Rat::from_int(rng.random_range(-2..=2));
                m = &m + &power.scale(&c);
                power = &power * j;
            }
        }
        ns.push(m);
    }
    let (mut p, mut p_inv) = (RatMatrix::identity(n), RatMatrix::identity(n));
    for _ in 0..2 * n {
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        if i != j {
            let c = rng.random_range(-2..=2);
            p = &p * &elementary(n, i, j, c);
            p_inv = &elementary(n, i, j, -c) * &p_inv;
        }
    }
    ns.iter().map(|m| &(&p * m) * &p_inv).collect()
}

