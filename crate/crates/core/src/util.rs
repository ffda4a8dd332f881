//! Small integer and combinatorics helpers shared across modules.

use dkforge_linalg::{IBig, Int, IntMatrix};

#[inline]
pub fn int(x: i64) -> Int {
    IBig::from(x)
}

#[inline]
pub fn zero() -> Int {
    IBig::from(0u8)
}

#[inline]
pub fn one() -> Int {
    IBig::from(1u8)
}

#[inline]
pub fn is_zero(x: &Int) -> bool {
    *x == IBig::from(0u8)
}

/// (-1)^k
#[inline]
pub fn sign(k: usize) -> Int {
    if k % 2 == 0 {
        one()
    } else {
        int(-1)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Monotone (weakly increasing) sequences of length `len` with values in `0..=max`,
/// in lexicographic order.
pub fn monotone_sequences(len: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, max: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in start..=max {
            cur.push(x);
            go(x, max, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, max, len, &mut Vec::new(), &mut out);
    out
}

/// Sign of a permutation given as a sequence of distinct values, by inversion count.
pub fn permutation_sign(perm: &[usize]) -> Int {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    sign(inversions)
}

/// Unit column vector `e_i` in `Z^n`.
pub fn unit_vector(n: usize, i: usize) -> Vec<Int> {
    (0..n).map(|k| if k == i { one() } else { zero() }).collect()
}

/// A permutation-with-signs matrix sending basis element `j` to `sign_j * e_{image_j}`.
pub fn signed_permutation(rows: usize, images: &[(usize, Int)]) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, images.len());
    for (j, (i, s)) in images.iter().enumerate() {
        m[(*i, j)] = s.clone();
    }
    m
}

/// `Z^a ⊗ Z^b -> Z^b ⊗ Z^a`, `e_i⊗e_j ↦ e_j⊗e_i`.
pub fn swap_matrix(a: usize, b: usize) -> IntMatrix {
    let images: Vec<(usize, Int)> = (0..a * b).map(|k| ((k % b) * a + k / b, one())).collect();
    signed_permutation(a * b, &images)
}

/// Kronecker product of two vectors.
pub fn kron_vec(x: &[Int], y: &[Int]) -> Vec<Int> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

/// True when the columns of `a` span all of `Z^rows`.
pub fn is_surjective(a: &IntMatrix) -> bool {
    let f = dkforge_linalg::invariant_factors(a);
    f.len() == a.rows() && f.iter().all(|d| *d == one())
}

/// True when `a` is injective with free cokernel (a split monomorphism over Z).
pub fn is_split_injective(a: &IntMatrix) -> bool {
    let f = dkforge_linalg::invariant_factors(a);
    f.len() == a.cols() && f.iter().all(|d| *d == one())
}

pub fn is_injective(a: &IntMatrix) -> bool {
    dkforge_linalg::rank(a) == a.cols()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 5), 0);
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        // monotone maps [k] -> [1]: k + 2 of them
        for k in 0..5 {
            assert_eq!(monotone_sequences(k + 1, 1).len(), k + 2);
        }
    }

    #[test]
    fn signs() {
        assert_eq!(permutation_sign(&[0, 1]), one());
        assert_eq!(permutation_sign(&[1, 0]), int(-1));
        assert_eq!(permutation_sign(&[2, 0, 1]), one());
    }
}
