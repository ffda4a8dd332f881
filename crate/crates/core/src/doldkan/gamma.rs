//! `(ΓC)_n = ch⁺(NΔⁿ, C)`: chain maps out of the normalized standard simplex.
//!
//! `N(ZΔⁿ)_k` has the `(k+1)`-element subsets of `{0..n}` as basis, so a level-`n`
//! element is an assignment `S ↦ x_S ∈ C_{|S|-1}` subject to
//! `d x_S = Σ_i (-1)^i x_{S∖s_i}`. The values on subsets containing `0` can be
//! chosen freely and determine the rest; they are the coordinates used here.

use std::collections::HashMap;

use dkforge_linalg::IntMatrix;

use super::{moore_project_rows, Normalization};
use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::simplicial::{SimplicialAbGroup, SimplicialMap};
use crate::util::{binomial, sign, subsets};

/// Coordinates of level `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaLevel {
    n: usize,
    /// All nonempty subsets of `{0..n}`, by size and then lexicographically.
    subsets: Vec<Vec<usize>>,
    full_offsets: Vec<usize>,
    full_dim: usize,
    index: HashMap<Vec<usize>, usize>,
    /// Offset of each subset containing `0` in canonical coordinates.
    canonical_offsets: HashMap<Vec<usize>, usize>,
    /// Subsets containing `0` in canonical order.
    canonical: Vec<Vec<usize>>,
    rank: usize,
    /// Columns: the basis elements as full assignments.
    full: IntMatrix,
}

impl GammaLevel {
    pub fn level(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    /// Subsets containing `0`, in the order of the canonical coordinate blocks.
    pub fn canonical_subsets(&self) -> &[Vec<usize>] {
        &self.canonical
    }

    pub fn canonical_offset(&self, s: &[usize]) -> usize {
        self.canonical_offsets[s]
    }

    pub fn full_dim(&self) -> usize {
        self.full_dim
    }

    pub fn full_offset(&self, s: &[usize]) -> usize {
        self.full_offsets[self.index[s]]
    }

    /// Every basis element as a full assignment over all subsets.
    pub fn full_basis(&self) -> &IntMatrix {
        &self.full
    }

    /// Rows of the full basis giving the value on `s`.
    pub fn value_rows(&self, s: &[usize], c: &ChainComplex) -> IntMatrix {
        self.full.block(self.full_offset(s), 0, c.rank(s.len() - 1), self.rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamma {
    complex: ChainComplex,
    group: SimplicialAbGroup,
    levels: Vec<GammaLevel>,
}

impl Gamma {
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn group(&self) -> &SimplicialAbGroup {
        &self.group
    }

    pub fn level(&self, n: usize) -> &GammaLevel {
        &self.levels[n]
    }

    pub fn truncation(&self) -> usize {
        self.complex.truncation()
    }

    /// Rows selecting the canonical block of `s` (which must contain `0`).
    pub fn block_selector(&self, n: usize, s: &[usize]) -> IntMatrix {
        let lvl = &self.levels[n];
        let r = self.complex.rank(s.len() - 1);
        let mut m = IntMatrix::zeros(r, lvl.rank);
        m.set_block(0, lvl.canonical_offset(s), &IntMatrix::identity(r));
        m
    }

    /// `NΓC` with Moore basis `x_{[n]} = c`, `x_{[n]∖0} = dc`, zero elsewhere.
    ///
    /// The projection is the top-cell block of the Moore projector, so the
    /// splitting is explicit rather than solved for.
    pub fn normalization(&self) -> Result<Normalization> {
        let t = self.truncation();
        let mut iota = Vec::with_capacity(t + 1);
        let mut pi = Vec::with_capacity(t + 1);
        for n in 0..=t {
            let top: Vec<usize> = (0..=n).collect();
            let sel = self.block_selector(n, &top);
            let i = sel.transpose();
            for k in 1..=n {
                if !(self.group.face(n, k) * &i).is_zero() {
                    return Err(Error::Decomposition {
                        level: n,
                        reason: format!("top-cell element not killed by d_{k}"),
                    });
                }
            }
            let p = moore_project_rows(&self.group, n, &sel);
            if !(&p * &i).is_identity() {
                return Err(Error::Decomposition {
                    level: n,
                    reason: "projection does not split the Moore inclusion".into(),
                });
            }
            iota.push(i);
            pi.push(p);
        }
        let diffs = (1..=t)
            .map(|n| &(&pi[n - 1] * self.group.face(n, 0)) * &iota[n])
            .collect();
        let complex = ChainComplex::new(self.complex.ranks().to_vec(), diffs)?;
        Ok(Normalization { complex, iota, pi })
    }
}

fn build_level(c: &ChainComplex, n: usize) -> Result<GammaLevel> {
    let mut all = Vec::new();
    let mut offsets = Vec::new();
    let mut full_dim = 0;
    let mut canonical = Vec::new();
    let mut canonical_offsets = HashMap::new();
    let mut rank = 0;
    for k in 0..=n {
        for s in subsets(n + 1, k + 1) {
            offsets.push(full_dim);
            full_dim += c.rank(k);
            if s[0] == 0 {
                canonical_offsets.insert(s.clone(), rank);
                rank += c.rank(k);
                canonical.push(s.clone());
            }
            all.push(s);
        }
    }
    let index: HashMap<Vec<usize>, usize> = all.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let expected: usize = (0..=n).map(|k| binomial(n, k) * c.rank(k)).sum();
    debug_assert_eq!(rank, expected);

    // Solve the constraint at {0} ∪ S for x_S whenever 0 ∉ S:
    // x_S = d x_{S'} - Σ_{i≥1} (-1)^i x_{S'∖s'_i}, all terms on the right contain 0.
    let mut full = IntMatrix::zeros(full_dim, rank);
    for (pos, s) in all.iter().enumerate() {
        let k = s.len() - 1;
        let r = c.rank(k);
        if r == 0 {
            continue;
        }
        let row = offsets[pos];
        if s[0] == 0 {
            full.set_block(row, canonical_offsets[s], &IntMatrix::identity(r));
            continue;
        }
        let mut sp = vec![0];
        sp.extend(s);
        let co = canonical_offsets[&sp];
        full.add_block(row, co, c.d(k + 1));
        for i in 1..sp.len() {
            let mut face = sp.clone();
            face.remove(i);
            let blk = IntMatrix::identity(r).scale(&-sign(i));
            full.add_block(row, canonical_offsets[&face], &blk);
        }
    }
    let level = GammaLevel {
        n,
        subsets: all,
        full_offsets: offsets,
        full_dim,
        index,
        canonical_offsets,
        canonical,
        rank,
        full,
    };
    let violation = constraint_matrix(c, &level);
    if !(&violation * &level.full).is_zero() {
        return Err(Error::Decomposition {
            level: n,
            reason: "assignment basis violates the chain-map condition".into(),
        });
    }
    Ok(level)
}

/// The chain-map constraint system on full assignments at one level.
pub(crate) fn constraint_matrix(c: &ChainComplex, level: &GammaLevel) -> IntMatrix {
    let mut row_offsets = Vec::new();
    let mut rows = 0;
    for s in &level.subsets {
        row_offsets.push(rows);
        if s.len() >= 2 {
            rows += c.rank(s.len() - 2);
        }
    }
    let mut m = IntMatrix::zeros(rows, level.full_dim);
    for (pos, s) in level.subsets.iter().enumerate() {
        if s.len() < 2 {
            continue;
        }
        let k = s.len() - 1;
        let r = row_offsets[pos];
        m.set_block(r, level.full_offsets[pos], c.d(k));
        for i in 0..s.len() {
            let mut face = s.clone();
            face.remove(i);
            let blk = IntMatrix::identity(c.rank(k - 1)).scale(&-sign(i));
            m.add_block(r, level.full_offset(&face), &blk);
        }
    }
    m
}

/// `θ^*` on `ΓC`, `(θ^* x)_T = x_{θ(T)}` when `θ` is injective on `T` and `0` otherwise.
fn operator_matrix(c: &ChainComplex, src: &GammaLevel, tgt: &GammaLevel, theta: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::zeros(tgt.rank, src.rank);
    for t in &tgt.canonical {
        let mut image: Vec<usize> = t.iter().map(|&x| theta[x]).collect();
        image.dedup();
        if image.len() < t.len() {
            continue;
        }
        let r = c.rank(t.len() - 1);
        if r == 0 {
            continue;
        }
        let rows = src.full.block(src.full_offset(&image), 0, r, src.rank);
        m.set_block(tgt.canonical_offset(t), 0, &rows);
    }
    m
}

/// `ΓC` through level `T_C`.
pub fn gamma(c: &ChainComplex) -> Result<Gamma> {
    let t = c.truncation();
    let levels = (0..=t).map(|n| build_level(c, n)).collect::<Result<Vec<_>>>()?;
    let faces = (0..=t)
        .map(|n| {
            (0..if n == 0 { 0 } else { n + 1 })
                .map(|i| {
                    let theta: Vec<usize> = (0..n).map(|j| if j < i { j } else { j + 1 }).collect();
                    operator_matrix(c, &levels[n], &levels[n - 1], &theta)
                })
                .collect()
        })
        .collect();
    let degens = (0..t)
        .map(|n| {
            (0..=n)
                .map(|i| {
                    let theta: Vec<usize> = (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect();
                    operator_matrix(c, &levels[n], &levels[n + 1], &theta)
                })
                .collect()
        })
        .collect();
    let ranks = levels.iter().map(|l| l.rank).collect();
    let group = SimplicialAbGroup::new_unchecked(ranks, faces, degens)?;
    debug_assert!(group.validate().is_ok());
    Ok(Gamma {
        complex: c.clone(),
        group,
        levels,
    })
}

/// `Γ(f)` acts blockwise by `f_k` on the canonical coordinates.
pub fn gamma_map(f: &ChainMap, source: &Gamma, target: &Gamma) -> SimplicialMap {
    let t = f.truncation().min(source.truncation()).min(target.truncation());
    let comps = (0..=t)
        .map(|n| {
            let blocks: Vec<IntMatrix> = source.levels[n]
                .canonical
                .iter()
                .map(|s| f.component(s.len() - 1).clone())
                .collect();
            IntMatrix::block_diag(&blocks)
        })
        .collect();
    SimplicialMap::new_unchecked(source.group.truncate(t), target.group.truncate(t), comps)
        .expect("block shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use dkforge_linalg::kernel_basis;

    fn sample() -> ChainComplex {
        // ranks (2, 1, 1, 1): d_1 = (1, -1)^T, d_2 = 0, d_3 = 3
        ChainComplex::new(
            vec![2, 1, 1, 1],
            vec![
                IntMatrix::from_rows_i64(1, &[vec![1], vec![-1]]),
                IntMatrix::from_rows_i64(1, &[vec![0]]),
                IntMatrix::from_rows_i64(1, &[vec![3]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn ranks_follow_the_surjection_count() {
        let c = sample();
        let g = gamma(&c).unwrap();
        g.group().validate().unwrap();
        for n in 0..=3 {
            let expected: usize = (0..=n).map(|k| binomial(n, k) * c.rank(k)).sum();
            assert_eq!(g.group().rank(n), expected);
        }
        assert_eq!(gamma(&ChainComplex::sphere(1, 4)).unwrap().group().ranks(), &[0, 1, 2, 3, 4]);
        let g0 = gamma(&ChainComplex::sphere(0, 3)).unwrap();
        assert_eq!(*g0.group(), SimplicialAbGroup::constant(1, 3));
    }

    #[test]
    fn basis_spans_the_kernel_lattice() {
        let c = sample();
        let g = gamma(&c).unwrap();
        for n in 0..=3 {
            let lvl = g.level(n);
            let k = kernel_basis(&constraint_matrix(&c, lvl));
            assert_eq!(k.cols(), lvl.rank());
            // each kernel vector is an integer combination of the basis
            assert!(dkforge_linalg::solve_matrix(lvl.full_basis(), &k).is_some());
        }
    }

    #[test]
    fn moore_complex_of_gamma_is_the_complex() {
        let c = sample();
        let g = gamma(&c).unwrap();
        let n = g.normalization().unwrap();
        assert_eq!(n.complex, c);
        let generic = super::super::normalize(g.group()).unwrap();
        assert_eq!(generic.complex.ranks(), c.ranks());
        for k in 0..=3 {
            assert_eq!(&n.iota[k] * &n.pi[k], &generic.iota[k] * &generic.pi[k]);
        }
    }
}
