//! The functors `C`, `N` and `Γ`, the unit and counit, and the shuffle and
//! Alexander–Whitney maps with the monoidal structures they induce on `Γ`.

mod gamma;
mod monoidal;
mod shuffle;
mod unit;

pub use gamma::{gamma, gamma_map, Gamma, GammaLevel};
pub use monoidal::{
    counit_monoidal_defect, gamma_comonoidal, gamma_monoidal, gamma_monoidal_composite, phi_apply,
    reconstruct_from_moore, ReconstructionPlan,
};
pub use shuffle::{
    alexander_whitney, aw_apply, moore_shuffle, normalized_aw, normalized_shuffle, shuffle, shuffles, Shuffle,
};
pub use unit::{counit, counit_with, unit};

use dkforge_linalg::{inverse, kernel_basis, lattice_basis, solve_matrix, IntMatrix};

use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::simplicial::{SimplicialAbGroup, SimplicialMap, SimplicialOps};
use crate::util::sign;

/// `CA` with `d = Σ (-1)^i d_i`.
pub fn unnormalized(a: &SimplicialAbGroup) -> ChainComplex {
    let diffs = (1..=a.truncation())
        .map(|n| {
            let mut d = IntMatrix::zeros(a.rank(n - 1), a.rank(n));
            for i in 0..=n {
                d = &d + &a.face(n, i).scale(&sign(i));
            }
            d
        })
        .collect();
    let c = ChainComplex::new_unchecked(a.ranks().to_vec(), diffs).expect("face shapes");
    debug_assert!(c.validate().is_ok());
    c
}

pub fn unnormalized_map(f: &SimplicialMap) -> ChainMap {
    ChainMap::new_unchecked(
        unnormalized(f.source()),
        unnormalized(f.target()),
        f.components().to_vec(),
    )
    .expect("component shapes")
}

/// Column bases of the degenerate subgroups `DA_n = Σ im s_i`.
pub fn degenerate_subcomplex(a: &SimplicialAbGroup) -> Vec<IntMatrix> {
    (0..=a.truncation())
        .map(|n| {
            if n == 0 {
                return IntMatrix::zeros(a.rank(0), 0);
            }
            let gens: Vec<IntMatrix> = (0..n).map(|i| a.degen(n - 1, i).clone()).collect();
            lattice_basis(&IntMatrix::hstack_all(a.rank(n), &gens))
        })
        .collect()
}

/// `NA` realized as the Moore complex, with its splitting of `CA`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub complex: ChainComplex,
    /// `ι_n : NA_n -> A_n`, a basis of `∩_{i≥1} ker d_i`.
    pub iota: Vec<IntMatrix>,
    /// `π_n : A_n -> NA_n`, the projection along `DA_n`.
    pub pi: Vec<IntMatrix>,
}

impl Normalization {
    pub fn iota_map(&self, a: &SimplicialAbGroup) -> ChainMap {
        ChainMap::new_unchecked(self.complex.clone(), unnormalized(a), self.iota.clone())
            .expect("inclusion shapes")
    }

    pub fn pi_map(&self, a: &SimplicialAbGroup) -> ChainMap {
        ChainMap::new_unchecked(unnormalized(a), self.complex.clone(), self.pi.clone())
            .expect("projection shapes")
    }
}

/// Normalizes `A`, checking `A_n = NA_n ⊕ DA_n` in every level.
pub fn normalize(a: &SimplicialAbGroup) -> Result<Normalization> {
    let t = a.truncation();
    let degenerate = degenerate_subcomplex(a);
    let mut iota = Vec::with_capacity(t + 1);
    let mut pi = Vec::with_capacity(t + 1);
    for n in 0..=t {
        let moore = if n == 0 {
            IntMatrix::identity(a.rank(0))
        } else {
            let faces: Vec<IntMatrix> = (1..=n).map(|i| a.face(n, i).clone()).collect();
            kernel_basis(&IntMatrix::vstack_all(a.rank(n), &faces))
        };
        let split = moore.hstack(&degenerate[n]);
        if split.cols() != a.rank(n) {
            return Err(Error::Decomposition {
                level: n,
                reason: format!(
                    "rank NA + rank DA = {} + {} but rank A = {}",
                    moore.cols(),
                    degenerate[n].cols(),
                    a.rank(n)
                ),
            });
        }
        let inv = inverse(&split).ok_or_else(|| Error::Decomposition {
            level: n,
            reason: "NA and DA do not span A over the integers".into(),
        })?;
        pi.push(inv.block(0, 0, moore.cols(), a.rank(n)));
        iota.push(moore);
    }
    let diffs = (1..=t)
        .map(|n| {
            solve_matrix(&iota[n - 1], &(a.face(n, 0) * &iota[n])).ok_or_else(|| Error::Decomposition {
                level: n,
                reason: "d_0 does not preserve Moore chains".into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ranks = iota.iter().map(IntMatrix::cols).collect();
    let complex = ChainComplex::new(ranks, diffs)?;
    Ok(Normalization { complex, iota, pi })
}

/// `N(f) = π ∘ f ∘ ι` for given normalizations of source and target.
pub fn normalize_map_with(f: &SimplicialMap, ns: &Normalization, nt: &Normalization) -> ChainMap {
    let t = f.truncation();
    let comps = (0..=t)
        .map(|n| &(&nt.pi[n] * f.component(n)) * &ns.iota[n])
        .collect();
    ChainMap::new_unchecked(ns.complex.truncate(t), nt.complex.truncate(t), comps)
        .expect("normalized map shapes")
}

pub fn normalize_map(f: &SimplicialMap) -> Result<ChainMap> {
    Ok(normalize_map_with(f, &normalize(f.source())?, &normalize(f.target())?))
}

/// Applies `P_n = (1 - s_0 d_1)(1 - s_1 d_2)⋯(1 - s_{n-1} d_n)` to the columns of `v`.
///
/// `P_n` is the idempotent with image `NA_n` and kernel `DA_n`, i.e. `ι π`.
pub fn moore_project<A: SimplicialOps + ?Sized>(a: &A, n: usize, v: &IntMatrix) -> IntMatrix {
    let mut w = v.clone();
    for j in (1..=n).rev() {
        let back = a.apply_degen(n - 1, j - 1, &a.apply_face(n, j, &w));
        w = &w - &back;
    }
    w
}

/// `R P_n` for a row block `R`, multiplying from the left.
pub fn moore_project_rows(a: &SimplicialAbGroup, n: usize, r: &IntMatrix) -> IntMatrix {
    let mut w = r.clone();
    for j in 1..=n {
        let back = &(&w * a.degen(n - 1, j - 1)) * a.face(n, j);
        w = &w - &back;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::standard_simplex;
    use crate::util::{binomial, int};

    #[test]
    fn constant_group() {
        let c = unnormalized(&SimplicialAbGroup::constant(1, 4));
        assert!(c.d(1).is_zero());
        assert!(c.d(2).is_identity());
        assert!(c.d(3).is_zero());
        let n = normalize(&SimplicialAbGroup::constant(1, 4)).unwrap();
        assert_eq!(n.complex, ChainComplex::sphere(0, 4));
    }

    #[test]
    fn simplex_normalization() {
        let a = standard_simplex(1, 3);
        assert_eq!(unnormalized(&a).ranks(), &[2, 3, 4, 5]);
        assert_eq!(degenerate_subcomplex(&a)[0].cols(), 0);
        let n = normalize(&a).unwrap();
        assert_eq!(n.complex.ranks(), &[2, 1, 0, 0]);
        // the class of the nondegenerate 1-simplex has boundary [1] - [0]
        let iota_class = n.pi[1].column(1);
        let d = n.complex.d(1).mul_vec(&iota_class);
        assert_eq!(d, vec![int(-1), int(1)]);
        for m in 0..=3 {
            let nm = normalize(&standard_simplex(m, 3)).unwrap();
            for k in 0..=3 {
                assert_eq!(nm.complex.rank(k), binomial(m + 1, k + 1));
            }
            let h = nm.complex.homology();
            assert_eq!(h.groups[0].free_rank, 1);
            assert!(h.groups[1..].iter().all(|g| g.is_zero()));
        }
    }

    #[test]
    fn projector_matches_splitting() {
        let a = standard_simplex(2, 3);
        let n = normalize(&a).unwrap();
        for k in 0..=3 {
            let p = moore_project(&a, k, &IntMatrix::identity(a.rank(k)));
            assert_eq!(p, &n.iota[k] * &n.pi[k]);
            let pr = moore_project_rows(&a, k, &IntMatrix::identity(a.rank(k)));
            assert_eq!(pr, p);
        }
        assert!(n.pi_map(&a).validate().is_ok());
        assert!(n.iota_map(&a).validate().is_ok());
    }
}
