//! Homology of free complexes and of quotients `G/K` presented by a relation map.

use std::fmt;

use dkforge_linalg::{
    cokernel, invariant_factors, kernel_basis, lattice_basis, snf, solve, solve_matrix,
    ColumnEchelon, CokernelData, IntMatrix,
};

use super::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::util::one;

/// `H_0, ..., H_{T-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologyTable {
    pub groups: Vec<CokernelData>,
}

impl HomologyTable {
    pub fn degree(&self, n: usize) -> Option<&CokernelData> {
        self.groups.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.groups.iter().all(CokernelData::is_zero)
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .groups
            .iter()
            .enumerate()
            .map(|(n, g)| format!("H_{n} = {g}"))
            .collect();
        write!(f, "{}", parts.join("\n"))
    }
}

/// A quotient complex `G/im(R)` where `R: K -> G` is a chain map.
///
/// Relative tensor products are built this way; keeping the presentation
/// avoids choosing a basis of a quotient that may carry torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientComplex {
    generators: ChainComplex,
    relations: ChainComplex,
    relation_map: Vec<IntMatrix>,
}

/// Per-degree presentation `H_n = Zbar_n / M_n`.
#[derive(Clone, Debug)]
struct Presentation {
    /// Columns: basis of `{x ∈ G_n : dx ∈ K_{n-1}}`.
    cycles: IntMatrix,
    /// Boundaries and relations in cycle coordinates.
    boundaries: IntMatrix,
}

impl QuotientComplex {
    pub fn new(generators: ChainComplex, relations: ChainComplex, relation_map: Vec<IntMatrix>) -> Result<Self> {
        let t = generators.truncation();
        if relations.truncation() < t || relation_map.len() != t + 1 {
            return Err(Error::Shape("relation map must cover every generator degree".into()));
        }
        for (n, r) in relation_map.iter().enumerate() {
            if r.shape() != (generators.rank(n), relations.rank(n)) {
                return Err(Error::Shape(format!("relation map in degree {n} has wrong shape")));
            }
        }
        for n in 1..=t {
            if &relation_map[n - 1] * relations.d(n) != generators.d(n) * &relation_map[n] {
                return Err(Error::NotChainMap { degree: n });
            }
        }
        Ok(QuotientComplex {
            generators,
            relations: relations.truncate(t),
            relation_map,
        })
    }

    /// `C` presented with no relations.
    pub fn free(c: ChainComplex) -> Self {
        let t = c.truncation();
        let relation_map = c.ranks().iter().map(|&r| IntMatrix::zeros(r, 0)).collect();
        QuotientComplex {
            generators: c,
            relations: ChainComplex::zero(t),
            relation_map,
        }
    }

    pub fn generators(&self) -> &ChainComplex {
        &self.generators
    }

    pub fn relations(&self) -> &ChainComplex {
        &self.relations
    }

    pub fn relation_map(&self, n: usize) -> &IntMatrix {
        &self.relation_map[n]
    }

    pub fn truncation(&self) -> usize {
        self.generators.truncation()
    }

    fn presentation(&self, n: usize) -> Presentation {
        let g = &self.generators;
        let cycles = if n == 0 {
            IntMatrix::identity(g.rank(0))
        } else {
            let r_prev = &self.relation_map[n - 1];
            let stacked = g.d(n).hstack(&-r_prev);
            let k = kernel_basis(&stacked);
            lattice_basis(&k.block(0, 0, g.rank(n), k.cols()))
        };
        let b = self.relation_map[n].hstack(g.d(n + 1));
        let boundaries = solve_matrix(&cycles, &b).expect("boundaries lie in the cycle lattice");
        Presentation { cycles, boundaries }
    }

    pub fn homology(&self) -> HomologyTable {
        let t = self.truncation();
        HomologyTable {
            groups: (0..t).map(|n| cokernel(&self.presentation(n).boundaries)).collect(),
        }
    }

    /// Every `R_n` is a split injection, so `G/K` is free in each degree.
    pub fn is_levelwise_free(&self) -> bool {
        (0..=self.truncation()).all(|n| {
            let f = invariant_factors(&self.relation_map[n]);
            f.iter().all(|d| *d == one())
        })
    }

    /// The quotient group `G_n / im R_n` in degree `n`.
    pub fn group(&self, n: usize) -> CokernelData {
        cokernel(&self.relation_map[n])
    }

    /// A basis for the quotient, when it is free in every degree.
    pub fn to_free(&self) -> Result<FreeQuotient> {
        let t = self.truncation();
        let mut proj = Vec::with_capacity(t + 1);
        let mut sect = Vec::with_capacity(t + 1);
        for n in 0..=t {
            let r = &self.relation_map[n];
            let s = snf(r);
            let diag = s.diagonal();
            if diag.iter().any(|d| *d != one() && *d != crate::util::zero()) {
                return Err(Error::Torsion { degree: n });
            }
            let rank = s.rank();
            let rows = r.rows();
            let u_inv = dkforge_linalg::inverse(&s.u).expect("unimodular");
            proj.push(s.u.block(rank, 0, rows - rank, rows));
            sect.push(u_inv.block(0, rank, rows, rows - rank));
        }
        let ranks: Vec<usize> = proj.iter().map(IntMatrix::rows).collect();
        let diffs = (1..=t)
            .map(|n| &(&proj[n - 1] * self.generators.d(n)) * &sect[n])
            .collect();
        Ok(FreeQuotient {
            complex: ChainComplex::new(ranks, diffs)?,
            projections: proj,
            sections: sect,
        })
    }
}

/// A free quotient `Q = G/K` with the projections `G_n -> Q_n` and
/// sections `Q_n -> G_n` (the sections need not be chain maps).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeQuotient {
    pub complex: ChainComplex,
    pub projections: Vec<IntMatrix>,
    pub sections: Vec<IntMatrix>,
}

impl FreeQuotient {
    /// The projection as a chain map `G -> Q`.
    pub fn projection_map(&self, generators: &ChainComplex) -> ChainMap {
        ChainMap::new_unchecked(generators.clone(), self.complex.clone(), self.projections.clone())
            .expect("projection shapes")
    }
}

/// A map of quotient complexes given on generators; it must carry relations into relations.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: QuotientComplex,
    target: QuotientComplex,
    components: Vec<IntMatrix>,
}

impl QuotientMap {
    pub fn new(source: QuotientComplex, target: QuotientComplex, components: Vec<IntMatrix>) -> Result<Self> {
        let t = source.truncation().min(target.truncation());
        if components.len() != t + 1 {
            return Err(Error::Shape(format!("map needs {} components", t + 1)));
        }
        let f = QuotientMap {
            source,
            target,
            components,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn free(f: ChainMap) -> Self {
        QuotientMap {
            source: QuotientComplex::free(f.source().clone()),
            target: QuotientComplex::free(f.target().clone()),
            components: f.components().to_vec(),
        }
    }

    fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        for (n, f) in self.components.iter().enumerate() {
            if f.shape() != (t.generators.rank(n), s.generators.rank(n)) {
                return Err(Error::Shape(format!("component {n} has wrong shape")));
            }
            if n >= 1 && &self.components[n - 1] * s.generators.d(n) != t.generators.d(n) * f {
                return Err(Error::NotChainMap { degree: n });
            }
            let img = f * &s.relation_map[n];
            if solve_matrix(&t.relation_map[n], &img).is_none() {
                return Err(Error::Precondition(format!(
                    "map does not preserve relations in degree {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn components(&self) -> &[IntMatrix] {
        &self.components
    }

    /// Induced map on `H_n` in presentation coordinates, with both presentations.
    fn induced(&self, n: usize) -> (IntMatrix, Presentation, Presentation) {
        let ps = self.source.presentation(n);
        let pt = self.target.presentation(n);
        let img = &self.components[n] * &ps.cycles;
        let f = solve_matrix(&pt.cycles, &img).expect("cycles map to cycles");
        (f, ps, pt)
    }

    pub fn is_iso_in_degree(&self, n: usize) -> bool {
        let (f, ps, pt) = self.induced(n);
        let z_t = pt.cycles.cols();
        // surjective: image of F together with M' spans the target cycle lattice
        let joint = f.hstack(&pt.boundaries);
        let factors = invariant_factors(&joint);
        if factors.len() != z_t || factors.iter().any(|d| *d != one()) {
            return false;
        }
        // injective: every x with F x ∈ im M' already lies in im M
        let both = f.hstack(&-&pt.boundaries);
        let k = kernel_basis(&both);
        let pre = k.block(0, 0, f.cols(), k.cols());
        let ech = ColumnEchelon::new(&ps.boundaries);
        (0..pre.cols()).all(|j| ech.solve(&pre.column(j)).is_some())
    }

    /// Iso on `H_n` for every `n < T`.
    pub fn is_quasi_iso(&self) -> bool {
        let t = self.components.len() - 1;
        (0..t).all(|n| self.is_iso_in_degree(n))
    }
}

/// True when `x` is a boundary (`x ∈ im d_{n+1}`).
pub fn is_boundary(c: &ChainComplex, n: usize, x: &[dkforge_linalg::Int]) -> bool {
    solve(c.d(n + 1), x).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::int;

    #[test]
    fn times_two_homology() {
        let c = crate::chain::tests::times_two();
        let h = c.homology();
        assert_eq!(h.groups.len(), 3);
        assert_eq!(h.groups[0], CokernelData { free_rank: 0, torsion: vec![int(2)] });
        assert!(h.groups[1].is_zero());
        assert_eq!(h.to_string(), "H_0 = Z/2\nH_1 = 0\nH_2 = 0");
    }

    #[test]
    fn spheres() {
        for m in 0..4 {
            let h = ChainComplex::sphere(m, 4).homology();
            for n in 0..4 {
                assert_eq!(h.groups[n].free_rank, usize::from(n == m));
            }
        }
    }

    #[test]
    fn multiplication_by_two_is_not_quasi_iso() {
        let z = ChainComplex::sphere(0, 2);
        let f = ChainMap::identity(&z).scale(&int(2));
        assert!(!f.is_quasi_iso());
        assert!(ChainMap::identity(&z).is_quasi_iso());
        assert!(f.scale(&int(-1)).scale(&int(0)).is_zero());
    }

    #[test]
    fn quotient_by_subcomplex() {
        // G = Z[0] ⊕ Z[0], K = Z[0] included diagonally: G/K ≅ Z
        let g = ChainComplex::concentrated(&[2, 0, 0]);
        let k = ChainComplex::concentrated(&[1, 0, 0]);
        let r = vec![
            IntMatrix::from_rows_i64(1, &[vec![1], vec![1]]),
            IntMatrix::zeros(0, 0),
            IntMatrix::zeros(0, 0),
        ];
        let q = QuotientComplex::new(g, k.clone(), r).unwrap();
        assert_eq!(q.homology().groups[0], CokernelData::free(1));
        let fq = q.to_free().unwrap();
        let (free, proj) = (fq.complex, fq.projections);
        assert_eq!(free.ranks(), &[1, 0, 0]);
        assert_eq!(proj[0].rows(), 1);

        // relation 2e_0 gives torsion
        let g = ChainComplex::concentrated(&[1, 0]);
        let k = ChainComplex::concentrated(&[1, 0]);
        let r = vec![IntMatrix::from_rows_i64(1, &[vec![2]]), IntMatrix::zeros(0, 0)];
        let q = QuotientComplex::new(g, k, r).unwrap();
        assert_eq!(q.homology().groups[0].torsion, vec![int(2)]);
        assert!(matches!(q.to_free(), Err(Error::Torsion { degree: 0 })));
    }

    #[test]
    fn boundary_detection() {
        let c = crate::chain::tests::times_two();
        assert!(is_boundary(&c, 0, &[int(4)]));
        assert!(!is_boundary(&c, 0, &[int(3)]));
    }
}
