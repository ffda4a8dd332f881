//! The shuffle map `∇ : CA⊗CB -> C(A⊗B)` and the Alexander–Whitney map.

use dkforge_linalg::{Int, IntMatrix};

use super::{moore_project, unnormalized, Normalization};
use crate::chain::{tensor, tensor_maps, ChainMap, TensorLayout};
use crate::simplicial::{self, kron_apply, SimplicialAbGroup, TensorPair};
use crate::util::{permutation_sign, subsets};

/// A `(p,q)`-shuffle: `μ ∪ ν = {0..p+q-1}` with `|μ| = p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shuffle {
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
    /// Sign of the permutation `(μ_1, …, μ_p, ν_1, …, ν_q)`.
    pub sign: Int,
}

pub fn shuffles(p: usize, q: usize) -> Vec<Shuffle> {
    subsets(p + q, p)
        .into_iter()
        .map(|mu| {
            let nu: Vec<usize> = (0..p + q).filter(|x| !mu.contains(x)).collect();
            let word: Vec<usize> = mu.iter().chain(nu.iter()).copied().collect();
            Shuffle {
                sign: permutation_sign(&word),
                mu,
                nu,
            }
        })
        .collect()
}

/// `s_{ν_q} ⋯ s_{ν_1}` starting at level `start`.
fn degeneracy_word(a: &SimplicialAbGroup, start: usize, word: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::identity(a.rank(start));
    for (step, &j) in word.iter().enumerate() {
        m = a.degen(start + step, j) * &m;
    }
    m
}

/// `∇(a⊗b) = Σ sign(μ,ν) s_ν a ⊗ s_μ b` over `(p,q)`-shuffles.
pub fn shuffle(a: &SimplicialAbGroup, b: &SimplicialAbGroup) -> ChainMap {
    let (ca, cb) = (unnormalized(a), unnormalized(b));
    let (src, layout) = tensor(&ca, &cb);
    let ab = simplicial::tensor(a, b);
    let tgt = unnormalized(&ab);
    let comps = (0..=layout.truncation())
        .map(|n| {
            let mut m = IntMatrix::zeros(ab.rank(n), layout.rank(n));
            for p in 0..=n {
                let q = n - p;
                if a.rank(p) * b.rank(q) == 0 {
                    continue;
                }
                let mut blk = IntMatrix::zeros(ab.rank(n), a.rank(p) * b.rank(q));
                for sh in shuffles(p, q) {
                    let term = degeneracy_word(a, p, &sh.nu).kron(&degeneracy_word(b, q, &sh.mu));
                    blk = &blk + &term.scale(&sh.sign);
                }
                m.set_block(0, layout.block_offset(n, p), &blk);
            }
            m
        })
        .collect();
    ChainMap::new_unchecked(src, tgt, comps).expect("shuffle shapes")
}

/// `AW(a⊗b) = Σ_{p+q=n} d̃^p a ⊗ d_0^q b`: the front `p`-face of `a` with the back `q`-face of `b`.
pub fn alexander_whitney(a: &SimplicialAbGroup, b: &SimplicialAbGroup) -> ChainMap {
    let (ca, cb) = (unnormalized(a), unnormalized(b));
    let (tgt, layout) = tensor(&ca, &cb);
    let ab = simplicial::tensor(a, b);
    let src = unnormalized(&ab);
    let comps = (0..=layout.truncation())
        .map(|n| {
            let mut m = IntMatrix::zeros(layout.rank(n), ab.rank(n));
            for p in 0..=n {
                if a.rank(p) * b.rank(n - p) == 0 {
                    continue;
                }
                let front: Vec<usize> = (0..=p).collect();
                let back: Vec<usize> = (p..=n).collect();
                let blk = a.operator(&front, n).kron(&b.operator(&back, n));
                m.set_block(layout.block_offset(n, p), 0, &blk);
            }
            m
        })
        .collect();
    ChainMap::new_unchecked(src, tgt, comps).expect("Alexander-Whitney shapes")
}

/// `π ∘ ∇ ∘ (ι⊗ι) : NA⊗NB -> N(A⊗B)`.
pub fn normalized_shuffle(
    a: &SimplicialAbGroup,
    b: &SimplicialAbGroup,
    na: &Normalization,
    nb: &Normalization,
    nab: &Normalization,
) -> ChainMap {
    let ab = simplicial::tensor(a, b);
    let inc = tensor_maps(&na.iota_map(a), &nb.iota_map(b));
    nab.pi_map(&ab).compose(&shuffle(a, b).compose(&inc))
}

/// `(π⊗π) ∘ AW ∘ ι : N(A⊗B) -> NA⊗NB`.
pub fn normalized_aw(
    a: &SimplicialAbGroup,
    b: &SimplicialAbGroup,
    na: &Normalization,
    nb: &Normalization,
    nab: &Normalization,
) -> ChainMap {
    let ab = simplicial::tensor(a, b);
    let proj = tensor_maps(&na.pi_map(a), &nb.pi_map(b));
    proj.compose(&alexander_whitney(a, b).compose(&nab.iota_map(&ab)))
}

/// The normalized shuffle followed by the Moore inclusion, `ι π ∇ (ι⊗ι)`, without
/// choosing a basis of `N(A⊗B)`.
///
/// Returns the component matrices `NA⊗NB -> A_n⊗B_n`; columns are Moore chains.
pub fn moore_shuffle(
    a: &SimplicialAbGroup,
    b: &SimplicialAbGroup,
    na: &Normalization,
    nb: &Normalization,
) -> Vec<IntMatrix> {
    let layout = TensorLayout::of(&na.complex, &nb.complex);
    let pair = TensorPair { left: a, right: b };
    (0..=layout.truncation())
        .map(|n| {
            let mut m = IntMatrix::zeros(a.rank(n) * b.rank(n), layout.rank(n));
            for p in 0..=n {
                let q = n - p;
                let (rp, rq) = (na.complex.rank(p), nb.complex.rank(q));
                if rp * rq == 0 {
                    continue;
                }
                let mut blk = IntMatrix::zeros(a.rank(n) * b.rank(n), rp * rq);
                for sh in shuffles(p, q) {
                    let x = &degeneracy_word(a, p, &sh.nu) * &na.iota[p];
                    let y = &degeneracy_word(b, q, &sh.mu) * &nb.iota[q];
                    blk = &blk + &x.kron(&y).scale(&sh.sign);
                }
                m.set_block(0, layout.block_offset(n, p), &moore_project(&pair, n, &blk));
            }
            m
        })
        .collect()
}

/// `(π⊗π) ∘ AW` applied to the columns of `v ⊂ A_n⊗B_n`, landing in `(NA⊗NB)_n`
/// without forming the Alexander–Whitney matrix.
pub fn aw_apply(
    a: &SimplicialAbGroup,
    b: &SimplicialAbGroup,
    na: &Normalization,
    nb: &Normalization,
    n: usize,
    v: &IntMatrix,
) -> IntMatrix {
    let layout = TensorLayout::of(&na.complex, &nb.complex);
    let mut out = IntMatrix::zeros(layout.rank(n), v.cols());
    for p in 0..=n {
        let q = n - p;
        if na.complex.rank(p) * nb.complex.rank(q) == 0 {
            continue;
        }
        let front: Vec<usize> = (0..=p).collect();
        let back: Vec<usize> = (p..=n).collect();
        let x = &na.pi[p] * &a.operator(&front, n);
        let y = &nb.pi[q] * &b.operator(&back, n);
        out.set_block(layout.block_offset(n, p), 0, &kron_apply(&x, &y, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::normalize;
    use super::*;
    use crate::chain::{homotopy_solve, symmetry};
    use crate::simplicial::standard_simplex;
    use crate::util::int;

    #[test]
    fn shuffle_signs() {
        let s = shuffles(1, 1);
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].mu.clone(), s[0].nu.clone(), s[0].sign.clone()), (vec![0], vec![1], int(1)));
        assert_eq!((s[1].mu.clone(), s[1].nu.clone(), s[1].sign.clone()), (vec![1], vec![0], int(-1)));
        assert_eq!(shuffles(2, 2).len(), 6);
        assert_eq!(shuffles(0, 3).len(), 1);
    }

    #[test]
    fn one_one_shuffle_formula() {
        // ∇(a⊗b) = s_1 a⊗s_0 b - s_0 a⊗s_1 b
        let a = standard_simplex(1, 2);
        let nab = shuffle(&a, &a);
        let l = TensorLayout::of(&unnormalized(&a), &unnormalized(&a));
        let expected = &a.degen(1, 1).kron(a.degen(1, 0)) - &a.degen(1, 0).kron(a.degen(1, 1));
        let blk = nab.component(2).block(0, l.block_offset(2, 1), 16, 9);
        assert_eq!(blk, expected);
    }

    #[test]
    fn aw_on_the_diagonal_simplex() {
        // ι⊗ι in ZΔ¹⊗ZΔ¹ level 1 maps to [0]⊗ι + ι⊗[1]
        let a = standard_simplex(1, 2);
        let aw = alexander_whitney(&a, &a);
        let l = TensorLayout::of(&unnormalized(&a), &unnormalized(&a));
        let diag = 3 + 1; // index of (01, 01) in the 3x3 basis of level 1
        let col = aw.component(1).column(diag);
        let mut expected = vec![int(0); l.rank(1)];
        expected[l.index(1, 0, 0, 1)] = int(1);
        expected[l.index(1, 1, 1, 1)] = int(1);
        assert_eq!(col, expected);
        assert!(aw.component(0).is_identity());
    }

    #[test]
    fn eilenberg_zilber_on_simplices() {
        let a = standard_simplex(1, 3);
        let b = standard_simplex(2, 3);
        let (na, nb) = (normalize(&a).unwrap(), normalize(&b).unwrap());
        let nab = normalize(&simplicial::tensor(&a, &b)).unwrap();
        let sh = normalized_shuffle(&a, &b, &na, &nb, &nab);
        let aw = normalized_aw(&a, &b, &na, &nb, &nab);
        sh.validate().unwrap();
        aw.validate().unwrap();
        assert!(aw.compose(&sh).same_components(&ChainMap::identity(sh.source())));
        let moore = moore_shuffle(&a, &b, &na, &nb);
        for n in 0..=3 {
            assert_eq!(moore[n], &nab.iota[n] * sh.component(n));
            assert!(aw_apply(&a, &b, &na, &nb, n, &moore[n]).is_identity());
            assert_eq!(aw_apply(&a, &b, &na, &nb, n, &nab.iota[n]), *aw.component(n));
        }
        let full = shuffle(&a, &b).compose(&alexander_whitney(&a, &b));
        full.validate().unwrap();
        let id = ChainMap::identity(full.source());
        assert!(homotopy_solve(&full, &id).is_some());
        assert!(full.is_quasi_iso());
    }

    #[test]
    fn shuffle_commutes_with_symmetry() {
        let a = standard_simplex(1, 3);
        let b = standard_simplex(2, 3);
        let swap_ab = simplicial::symmetry(&a, &b);
        swap_ab.validate().unwrap();
        let lhs = shuffle(&b, &a).compose(&symmetry(&unnormalized(&a), &unnormalized(&b)));
        let rhs = super::super::unnormalized_map(&swap_ab).compose(&shuffle(&a, &b));
        assert!(lhs.same_components(&rhs));

        let c = standard_simplex(1, 3);
        let swap_cc = simplicial::symmetry(&c, &c);
        let cc = unnormalized(&c);
        let lhs = alexander_whitney(&c, &c).compose(&super::super::unnormalized_map(&swap_cc));
        let rhs = symmetry(&cc, &cc).compose(&alexander_whitney(&c, &c));
        assert!(!lhs.same_components(&rhs));
    }
}
