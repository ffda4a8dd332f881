use dkforge_linalg::IntMatrix;

use super::{ChainComplex, ChainMap};
use crate::util::{sign, signed_permutation};

/// Summand bookkeeping for `(C⊗D)_n = ⊕_{p+q=n} C_p⊗D_q`.
///
/// The basis of degree `n` is ordered lexicographically by `(p, i, j)` with
/// `i` indexing `C_p` and `j` indexing `D_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorLayout {
    left: Vec<usize>,
    right: Vec<usize>,
    /// `offsets[n][p]` is the start of the `(p, n-p)` block in degree `n`.
    offsets: Vec<Vec<usize>>,
    ranks: Vec<usize>,
}

impl TensorLayout {
    pub fn new(left: &[usize], right: &[usize], truncation: usize) -> Self {
        let rk = |v: &[usize], k: usize| v.get(k).copied().unwrap_or(0);
        let mut offsets = Vec::with_capacity(truncation + 1);
        let mut ranks = Vec::with_capacity(truncation + 1);
        for n in 0..=truncation {
            let mut offs = Vec::with_capacity(n + 1);
            let mut acc = 0;
            for p in 0..=n {
                offs.push(acc);
                acc += rk(left, p) * rk(right, n - p);
            }
            offsets.push(offs);
            ranks.push(acc);
        }
        TensorLayout {
            left: (0..=truncation).map(|k| rk(left, k)).collect(),
            right: (0..=truncation).map(|k| rk(right, k)).collect(),
            offsets,
            ranks,
        }
    }

    pub fn of(c: &ChainComplex, d: &ChainComplex) -> Self {
        Self::new(c.ranks(), d.ranks(), c.truncation().min(d.truncation()))
    }

    pub fn truncation(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks[n]
    }

    pub fn left_rank(&self, p: usize) -> usize {
        self.left[p]
    }

    pub fn right_rank(&self, q: usize) -> usize {
        self.right[q]
    }

    pub fn block_offset(&self, n: usize, p: usize) -> usize {
        self.offsets[n][p]
    }

    /// Position of `c_i ⊗ d_j` with `c_i ∈ C_p`, `d_j ∈ D_{n-p}`.
    pub fn index(&self, n: usize, p: usize, i: usize, j: usize) -> usize {
        self.offsets[n][p] + i * self.right[n - p] + j
    }

    /// Inverse of [`TensorLayout::index`]: `(p, i, j)`.
    pub fn decompose(&self, n: usize, idx: usize) -> (usize, usize, usize) {
        let p = (0..=n)
            .find(|&p| {
                let size = self.left[p] * self.right[n - p];
                self.offsets[n][p] <= idx && idx < self.offsets[n][p] + size
            })
            .expect("index within degree");
        let local = idx - self.offsets[n][p];
        let r = self.right[n - p];
        (p, local / r, local % r)
    }
}

/// `C⊗D` truncated at `min(T_C, T_D)`, with `d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy`.
pub fn tensor(c: &ChainComplex, d: &ChainComplex) -> (ChainComplex, TensorLayout) {
    let layout = TensorLayout::of(c, d);
    let t = layout.truncation();
    let mut diffs = Vec::with_capacity(t);
    for n in 1..=t {
        let mut m = IntMatrix::zeros(layout.rank(n - 1), layout.rank(n));
        for p in 0..=n {
            let q = n - p;
            let (rc, rd) = (c.rank(p), d.rank(q));
            if rc * rd == 0 {
                continue;
            }
            let col = layout.block_offset(n, p);
            if p >= 1 {
                let blk = c.d(p).kron(&IntMatrix::identity(rd));
                m.set_block(layout.block_offset(n - 1, p - 1), col, &blk);
            }
            if q >= 1 {
                let blk = IntMatrix::identity(rc).kron(d.d(q)).scale(&sign(p));
                m.set_block(layout.block_offset(n - 1, p), col, &blk);
            }
        }
        diffs.push(m);
    }
    let out = ChainComplex::new_unchecked(layout.ranks().to_vec(), diffs).expect("tensor shapes");
    debug_assert!(out.validate().is_ok());
    (out, layout)
}

/// `f⊗g` on the summands, with no signs since both maps have degree zero.
pub fn tensor_maps(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let src = tensor(f.source(), g.source()).0;
    let tgt = tensor(f.target(), g.target()).0;
    let t = f.truncation().min(g.truncation());
    let (ls, lt) = (
        TensorLayout::of(f.source(), g.source()),
        TensorLayout::of(f.target(), g.target()),
    );
    let comps = (0..=t)
        .map(|n| {
            let mut m = IntMatrix::zeros(lt.rank(n), ls.rank(n));
            for p in 0..=n {
                let blk = f.component(p).kron(g.component(n - p));
                if blk.rows() * blk.cols() > 0 {
                    m.set_block(lt.block_offset(n, p), ls.block_offset(n, p), &blk);
                }
            }
            m
        })
        .collect();
    ChainMap::new_unchecked(src.truncate(t), tgt.truncate(t), comps).expect("tensor map shapes")
}

/// `τ : C⊗D -> D⊗C`, `x⊗y ↦ (-1)^{|x||y|} y⊗x`.
pub fn symmetry(c: &ChainComplex, d: &ChainComplex) -> ChainMap {
    let (src, ls) = tensor(c, d);
    let (tgt, lt) = tensor(d, c);
    let comps = (0..=ls.truncation())
        .map(|n| {
            let mut images = Vec::with_capacity(ls.rank(n));
            for p in 0..=n {
                let q = n - p;
                for i in 0..c.rank(p) {
                    for j in 0..d.rank(q) {
                        images.push((lt.index(n, q, j, i), sign(p * q)));
                    }
                }
            }
            signed_permutation(lt.rank(n), &images)
        })
        .collect();
    ChainMap::new_unchecked(src, tgt, comps).expect("symmetry shapes")
}

/// The reindexing `(C⊗D)⊗E -> C⊗(D⊗E)`; no signs arise.
pub fn associator(c: &ChainComplex, d: &ChainComplex, e: &ChainComplex) -> ChainMap {
    let (cd, l_cd) = tensor(c, d);
    let (src, l_src) = tensor(&cd, e);
    let (de, l_de) = tensor(d, e);
    let (tgt, l_tgt) = tensor(c, &de);
    let t = l_src.truncation();
    let comps = (0..=t)
        .map(|n| {
            let mut images = Vec::with_capacity(l_src.rank(n));
            for m in 0..=n {
                for a in 0..l_cd.rank(m) {
                    let (p, i, j) = l_cd.decompose(m, a);
                    let q = m - p;
                    for k in 0..e.rank(n - m) {
                        let inner = l_de.index(n - p, q, j, k);
                        images.push((l_tgt.index(n, p, i, inner), crate::util::one()));
                    }
                }
            }
            debug_assert_eq!(images.len(), l_src.rank(n));
            signed_permutation(l_tgt.rank(n), &images)
        })
        .collect();
    ChainMap::new_unchecked(src, tgt.truncate(t), comps).expect("associator shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::int;

    fn xy() -> (ChainComplex, ChainComplex) {
        // C: u (deg 0), x (deg 1), dx = u; D: v (deg 0), y (deg 1), dy = v
        let one = IntMatrix::from_rows_i64(1, &[vec![1]]);
        let c = ChainComplex::new(vec![1, 1, 0], vec![one.clone(), IntMatrix::zeros(1, 0)]).unwrap();
        (c.clone(), c)
    }

    #[test]
    fn sphere_tensor() {
        for p in 0..3 {
            for q in 0..3 {
                let (t, _) = tensor(&ChainComplex::sphere(p, 4), &ChainComplex::sphere(q, 4));
                assert_eq!(t, ChainComplex::sphere(p + q, 4));
            }
        }
    }

    #[test]
    fn koszul_sign_on_products_of_generators() {
        let (c, d) = xy();
        let (t, l) = tensor(&c, &d);
        // x⊗y sits in degree 2; its boundary is u⊗y - x⊗v
        let col = t.d(2).column(l.index(2, 1, 0, 0));
        let mut expected = vec![int(0); l.rank(1)];
        expected[l.index(1, 0, 0, 0)] = int(1);
        expected[l.index(1, 1, 0, 0)] = int(-1);
        assert_eq!(col, expected);
    }

    #[test]
    fn symmetry_signs_and_involution() {
        let (c, d) = xy();
        let tau = symmetry(&c, &d);
        let l = TensorLayout::of(&c, &d);
        assert_eq!(tau.component(2)[(l.index(2, 1, 0, 0), l.index(2, 1, 0, 0))], int(-1));
        assert_eq!(tau.component(0)[(0, 0)], int(1));
        tau.validate().unwrap();
        let back = symmetry(&d, &c).compose(&tau);
        assert!(back.same_components(&ChainMap::identity(tau.source())));
    }

    #[test]
    fn decompose_skips_empty_blocks() {
        let l = TensorLayout::new(&[0, 2, 0, 1], &[3, 0, 1, 0], 3);
        for n in 0..=3 {
            for idx in 0..l.rank(n) {
                let (p, i, j) = l.decompose(n, idx);
                assert_eq!(l.index(n, p, i, j), idx);
            }
        }
    }
}
