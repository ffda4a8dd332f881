//! The unit `η_A : A -> ΓNA` and counit `ε_C : NΓC -> C`.

use dkforge_linalg::IntMatrix;

use super::{Gamma, Normalization};
use crate::chain::ChainMap;
use crate::error::Result;
use crate::simplicial::{SimplicialAbGroup, SimplicialMap};

/// `η_A(a)_S = π(δ_S^* a)`; `target` must be `Γ` of `na.complex`.
pub fn unit(a: &SimplicialAbGroup, na: &Normalization, target: &Gamma) -> SimplicialMap {
    let t = a.truncation().min(target.truncation());
    let comps = (0..=t)
        .map(|n| {
            let lvl = target.level(n);
            let mut m = IntMatrix::zeros(lvl.rank(), a.rank(n));
            for s in lvl.canonical_subsets() {
                let k = s.len() - 1;
                if na.complex.rank(k) == 0 {
                    continue;
                }
                let blk = &na.pi[k] * &a.operator(s, n);
                m.set_block(lvl.canonical_offset(s), 0, &blk);
            }
            m
        })
        .collect();
    SimplicialMap::new_unchecked(a.truncate(t), target.group().truncate(t), comps).expect("unit shapes")
}

/// `ε_C`: evaluation of a Moore chain at the top cell, in the given normalization of `ΓC`.
pub fn counit_with(g: &Gamma, n: &Normalization) -> ChainMap {
    let comps = (0..=g.truncation())
        .map(|k| {
            let top: Vec<usize> = (0..=k).collect();
            &g.block_selector(k, &top) * &n.iota[k]
        })
        .collect();
    ChainMap::new_unchecked(n.complex.clone(), g.complex().clone(), comps).expect("counit shapes")
}

/// `ε_C` together with the normalization of `ΓC` it is expressed in.
pub fn counit(g: &Gamma) -> Result<(ChainMap, Normalization)> {
    let n = g.normalization()?;
    Ok((counit_with(g, &n), n))
}

#[cfg(test)]
mod tests {
    use super::super::{gamma, gamma_map, normalize};
    use super::*;
    use crate::chain::ChainComplex;
    use crate::simplicial::standard_simplex;

    #[test]
    fn unit_is_an_isomorphism() {
        for a in [standard_simplex(1, 3), standard_simplex(2, 3), SimplicialAbGroup::constant(2, 3)] {
            let na = normalize(&a).unwrap();
            let g = gamma(&na.complex).unwrap();
            let eta = unit(&a, &na, &g);
            eta.validate().unwrap();
            assert!(eta.is_levelwise_iso());
        }
    }

    #[test]
    fn counit_is_an_isomorphism_and_inverts_the_unit() {
        let c = ChainComplex::new(
            vec![1, 2, 1],
            vec![IntMatrix::from_rows_i64(2, &[vec![2, 0]]), IntMatrix::from_rows_i64(1, &[vec![0], vec![1]])],
        )
        .unwrap();
        let g = gamma(&c).unwrap();
        let (eps, n) = counit(&g).unwrap();
        eps.validate().unwrap();
        assert!(eps.is_degreewise_iso());
        // Γ(ε_C) ∘ η_{ΓC} = id
        let gn = gamma(&n.complex).unwrap();
        let eta = unit(g.group(), &n, &gn);
        let composite = gamma_map(&eps, &gn, &g).compose(&eta);
        assert!(composite.same_components(&SimplicialMap::identity(g.group())));

        // the same in the generic normalization, where ε is not the identity matrix
        let generic = normalize(g.group()).unwrap();
        let eps2 = counit_with(&g, &generic);
        eps2.validate().unwrap();
        assert!(eps2.is_degreewise_iso());
        let gn2 = gamma(&generic.complex).unwrap();
        let eta2 = unit(g.group(), &generic, &gn2);
        let composite2 = gamma_map(&eps2, &gn2, &g).compose(&eta2);
        assert!(composite2.same_components(&SimplicialMap::identity(g.group())));
    }
}
