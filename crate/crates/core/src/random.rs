//! Deterministic random instances.
//!
//! Every case draws from its own ChaCha8 stream, seeded by hashing
//! `(seed, tag, case)`, so any single case can be replayed in isolation.

use dkforge_linalg::{kernel_basis, IntMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::chain::{ChainComplex, ChainMap};
use crate::doldkan::gamma;
use crate::simplicial::{standard_simplex, SimplicialAbGroup};
use crate::util::{int, one};

pub const RNG_ALGORITHM: &str = "ChaCha8";

pub fn case_rng(seed: u64, tag: &str, case: u64) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(tag.as_bytes());
    h.update(case.to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

/// Entries uniform in `[-bound, bound]`.
pub fn matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-bound..=bound)))
}

/// A product of a permutation, signs and a few shears; returns `(P, P⁻¹)`.
pub fn unimodular(rng: &mut impl Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    let mut p_inv = IntMatrix::identity(n);
    if n == 0 {
        return (p, p_inv);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut q = IntMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        q[(i, j)] = if rng.gen_bool(0.5) { one() } else { -one() };
    }
    p = &q * &p;
    p_inv = &p_inv * &q.transpose();
    for _ in 0..n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let k = int(rng.gen_range(-2..=2));
        // E = I + k e_ij, E⁻¹ = I - k e_ij
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = k.clone();
        let mut e_inv = IntMatrix::identity(n);
        e_inv[(i, j)] = -k;
        p = &e * &p;
        p_inv = &p_inv * &e_inv;
    }
    (p, p_inv)
}

/// Ranks uniform in `0..=max_rank`, with `d_n = K·X` for a kernel basis `K` of
/// `d_{n-1}` and small random `X`, so `d∘d = 0` by construction.
pub fn complex(rng: &mut impl Rng, truncation: usize, max_rank: usize) -> ChainComplex {
    let ranks: Vec<usize> = (0..=truncation).map(|_| rng.gen_range(0..=max_rank)).collect();
    complex_with_ranks(rng, &ranks)
}

pub fn complex_with_ranks(rng: &mut impl Rng, ranks: &[usize]) -> ChainComplex {
    let mut diffs: Vec<IntMatrix> = Vec::with_capacity(ranks.len().saturating_sub(1));
    for n in 1..ranks.len() {
        let k = if n == 1 {
            IntMatrix::identity(ranks[0])
        } else {
            kernel_basis(&diffs[n - 2])
        };
        let x = matrix(rng, k.cols(), ranks[n], 2);
        diffs.push(&k * &x);
    }
    ChainComplex::new(ranks.to_vec(), diffs).expect("kernel construction gives a complex")
}

/// A random graded map `H_n : C_n -> D_{n+1}` (`H_T = 0`) and the null-homotopic
/// chain map `dH + Hd` it defines.
pub fn null_homotopic(rng: &mut impl Rng, c: &ChainComplex, d: &ChainComplex) -> (ChainMap, Vec<IntMatrix>) {
    let t = c.truncation().min(d.truncation());
    let h: Vec<IntMatrix> = (0..=t)
        .map(|n| {
            if n < t {
                matrix(rng, d.rank(n + 1), c.rank(n), 2)
            } else {
                IntMatrix::zeros(0, c.rank(n))
            }
        })
        .collect();
    let comps = (0..=t)
        .map(|n| {
            let mut f = IntMatrix::zeros(d.rank(n), c.rank(n));
            if n < t {
                f = &f + &(d.d(n + 1) * &h[n]);
            }
            if n >= 1 {
                f = &f + &(&h[n - 1] * c.d(n));
            }
            f
        })
        .collect();
    let map = ChainMap::new(c.truncate(t), d.truncate(t), comps).expect("dH + Hd is a chain map");
    (map, h)
}

/// `Γ(C) ⊕ ZΔⁿ` (each part optional), conjugated levelwise by random unimodular matrices.
pub fn simplicial_group(rng: &mut impl Rng, truncation: usize, max_rank: usize, max_simplex: usize) -> SimplicialAbGroup {
    let c = complex(rng, truncation, max_rank);
    let mut a = gamma(&c).expect("Γ of a valid complex").group().clone();
    if max_simplex > 0 && rng.gen_bool(0.5) {
        a = a.direct_sum(&standard_simplex(rng.gen_range(1..=max_simplex), truncation));
    }
    conjugate(rng, &a)
}

pub fn conjugate(rng: &mut impl Rng, a: &SimplicialAbGroup) -> SimplicialAbGroup {
    let (p, p_inv): (Vec<_>, Vec<_>) = (0..=a.truncation()).map(|n| unimodular(rng, a.rank(n))).unzip();
    a.conjugate(&p, &p_inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u32> = (0..4).map(|_| case_rng(7, "x", 3).gen()).collect();
        let b: Vec<u32> = (0..4).map(|_| case_rng(7, "x", 3).gen()).collect();
        assert_eq!(a, b);
        assert_ne!(case_rng(7, "x", 3).gen::<u64>(), case_rng(7, "x", 4).gen::<u64>());
        assert_ne!(case_rng(7, "x", 3).gen::<u64>(), case_rng(7, "y", 3).gen::<u64>());
    }

    #[test]
    fn generated_objects_validate() {
        for case in 0..20 {
            let mut rng = case_rng(1, "gen", case);
            let (p, p_inv) = unimodular(&mut rng, 4);
            assert!((&p * &p_inv).is_identity());
            let c = complex(&mut rng, 3, 3);
            c.validate().unwrap();
            let d = complex(&mut rng, 3, 3);
            null_homotopic(&mut rng, &c, &d).0.validate().unwrap();
            simplicial_group(&mut rng, 2, 2, 1).validate().unwrap();
        }
    }
}
