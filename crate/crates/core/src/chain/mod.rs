//! Connective chain complexes of finitely generated free abelian groups.
//!
//! A complex is stored up to a truncation degree `T`: ranks `r_0..r_T` and
//! differentials `d_n : C_n -> C_{n-1}` for `1 <= n <= T`. Every functor in
//! this crate is degreewise local, so outputs are exact through degree `T`
//! and homology is reported through degree `T - 1`.

mod homology;
mod homotopy;
mod model;
mod tensor;

pub use homology::{is_boundary, FreeQuotient, HomologyTable, QuotientComplex, QuotientMap};
pub use homotopy::{homotopy_solve, ChainHomotopy};
pub use model::{model_predicates, ModelPredicates};
pub use tensor::{associator, symmetry, tensor, tensor_maps, TensorLayout};

use dkforge_linalg::{IntMatrix, Int};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    /// `diffs[n]` is `d_n`; `diffs[0]` is the zero map `C_0 -> 0`.
    diffs: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Builds and validates a complex. `diffs[k]` is `d_{k+1}`, so
    /// `diffs.len() + 1 == ranks.len()` and the truncation is `ranks.len() - 1`.
    pub fn new(ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(ranks, diffs)?;
        c.validate()?;
        Ok(c)
    }

    /// Checks shapes only; `d∘d = 0` is left to [`ChainComplex::validate`].
    pub fn new_unchecked(ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Shape("a complex needs at least degree 0".into()));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::Shape(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        let mut all = Vec::with_capacity(ranks.len());
        all.push(IntMatrix::zeros(0, ranks[0]));
        for (k, d) in diffs.into_iter().enumerate() {
            let n = k + 1;
            if d.shape() != (ranks[n - 1], ranks[n]) {
                return Err(Error::Shape(format!(
                    "d_{n} must be {}x{}, got {}x{}",
                    ranks[n - 1],
                    ranks[n],
                    d.rows(),
                    d.cols()
                )));
            }
            all.push(d);
        }
        Ok(ChainComplex { ranks, diffs: all })
    }

    pub fn validate(&self) -> Result<()> {
        for n in 1..self.truncation() {
            if !(&self.diffs[n] * &self.diffs[n + 1]).is_zero() {
                return Err(Error::DiffSquareNonzero { degree: n });
            }
        }
        Ok(())
    }

    pub fn zero(truncation: usize) -> Self {
        Self::concentrated(&vec![0; truncation + 1])
    }

    /// The complex with zero differentials and the given ranks.
    pub fn concentrated(ranks: &[usize]) -> Self {
        let diffs = (1..ranks.len())
            .map(|n| IntMatrix::zeros(ranks[n - 1], ranks[n]))
            .collect();
        Self::new_unchecked(ranks.to_vec(), diffs).expect("shapes are consistent")
    }

    /// `Z[m]`: a single copy of the integers in degree `m`.
    pub fn sphere(m: usize, truncation: usize) -> Self {
        let mut ranks = vec![0; truncation + 1];
        if m <= truncation {
            ranks[m] = 1;
        }
        Self::concentrated(&ranks)
    }

    /// The tensor unit `Z[0]`.
    pub fn unit(truncation: usize) -> Self {
        Self::sphere(0, truncation)
    }

    pub fn truncation(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Rank in degree `n`; zero above the truncation.
    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// `d_n : C_n -> C_{n-1}` for `0 <= n <= T` (`d_0` is the zero map to `0`).
    pub fn d(&self, n: usize) -> &IntMatrix {
        &self.diffs[n]
    }

    /// Differentials `d_1..d_T`.
    pub fn diffs(&self) -> &[IntMatrix] {
        &self.diffs[1..]
    }

    pub fn truncate(&self, t: usize) -> Self {
        let t = t.min(self.truncation());
        ChainComplex {
            ranks: self.ranks[..=t].to_vec(),
            diffs: self.diffs[..=t].to_vec(),
        }
    }

    /// Direct sum; the basis of `self` comes first in every degree.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let t = self.truncation().min(other.truncation());
        let ranks: Vec<usize> = (0..=t).map(|n| self.rank(n) + other.rank(n)).collect();
        let diffs = (1..=t)
            .map(|n| IntMatrix::block_diag(&[self.d(n).clone(), other.d(n).clone()]))
            .collect();
        ChainComplex::new_unchecked(ranks, diffs).expect("block shapes agree")
    }

    pub fn direct_sum_all(truncation: usize, parts: &[ChainComplex]) -> ChainComplex {
        parts
            .iter()
            .fold(ChainComplex::zero(truncation), |acc, c| acc.direct_sum(c))
    }

    /// The complex obtained by an invertible change of basis `P_n` in every degree:
    /// `d'_n = P_{n-1} d_n P_n^{-1}`.
    pub fn conjugate(&self, p: &[IntMatrix], p_inv: &[IntMatrix]) -> ChainComplex {
        let diffs = (1..=self.truncation())
            .map(|n| &(&p[n - 1] * self.d(n)) * &p_inv[n])
            .collect();
        ChainComplex::new_unchecked(self.ranks.clone(), diffs).expect("shapes agree")
    }

    pub fn homology(&self) -> HomologyTable {
        QuotientComplex::free(self.clone()).homology()
    }
}

/// A degree-preserving chain map, stored in degrees `0..=min(T_source, T_target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: Vec<IntMatrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, components: Vec<IntMatrix>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, components)?;
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(
        source: ChainComplex,
        target: ChainComplex,
        components: Vec<IntMatrix>,
    ) -> Result<Self> {
        let t = source.truncation().min(target.truncation());
        if components.len() != t + 1 {
            return Err(Error::Shape(format!(
                "chain map needs {} components, got {}",
                t + 1,
                components.len()
            )));
        }
        for (n, f) in components.iter().enumerate() {
            if f.shape() != (target.rank(n), source.rank(n)) {
                return Err(Error::Shape(format!(
                    "component f_{n} must be {}x{}, got {}x{}",
                    target.rank(n),
                    source.rank(n),
                    f.rows(),
                    f.cols()
                )));
            }
        }
        Ok(ChainMap {
            source,
            target,
            components,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for n in 1..=self.truncation() {
            let lhs = &self.components[n - 1] * self.source.d(n);
            let rhs = self.target.d(n) * &self.components[n];
            if lhs != rhs {
                return Err(Error::NotChainMap { degree: n });
            }
        }
        Ok(())
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let comps = c.ranks().iter().map(|&r| IntMatrix::identity(r)).collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            components: comps,
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        let t = source.truncation().min(target.truncation());
        let comps = (0..=t)
            .map(|n| IntMatrix::zeros(target.rank(n), source.rank(n)))
            .collect();
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            components: comps,
        }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn truncation(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, n: usize) -> &IntMatrix {
        &self.components[n]
    }

    pub fn components(&self) -> &[IntMatrix] {
        &self.components
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> ChainMap {
        assert_eq!(
            first.target.ranks()[..=first.truncation().min(self.truncation())],
            self.source.ranks()[..=first.truncation().min(self.truncation())],
            "composition of non-composable chain maps"
        );
        let t = self.truncation().min(first.truncation());
        let comps = (0..=t)
            .map(|n| &self.components[n] * &first.components[n])
            .collect();
        ChainMap {
            source: first.source.truncate(t),
            target: self.target.truncate(t),
            components: comps,
        }
    }

    fn zip_with(&self, other: &ChainMap, f: impl Fn(&IntMatrix, &IntMatrix) -> IntMatrix) -> ChainMap {
        let t = self.truncation().min(other.truncation());
        let comps = (0..=t)
            .map(|n| f(&self.components[n], &other.components[n]))
            .collect();
        ChainMap {
            source: self.source.truncate(t),
            target: self.target.truncate(t),
            components: comps,
        }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &Int) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().map(|c| c.scale(k)).collect(),
        }
    }

    pub fn truncate(&self, t: usize) -> ChainMap {
        let t = t.min(self.truncation());
        ChainMap {
            source: self.source.truncate(t),
            target: self.target.truncate(t),
            components: self.components[..=t].to_vec(),
        }
    }

    /// Compares component matrices only (sources and targets are assumed parallel).
    pub fn same_components(&self, other: &ChainMap) -> bool {
        self.components == other.components
    }

    /// First degree where the components differ, if any.
    pub fn first_difference(&self, other: &ChainMap) -> Option<usize> {
        let t = self.truncation().min(other.truncation());
        (0..=t).find(|&n| self.components[n] != other.components[n])
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(IntMatrix::is_zero)
    }

    /// True when every component is invertible over the integers.
    pub fn is_degreewise_iso(&self) -> bool {
        self.components
            .iter()
            .all(|f| f.rows() == f.cols() && dkforge_linalg::inverse(f).is_some())
    }

    /// Degreewise inverse, when every component is unimodular.
    pub fn inverse(&self) -> Option<ChainMap> {
        let comps = self
            .components
            .iter()
            .map(dkforge_linalg::inverse)
            .collect::<Option<Vec<_>>>()?;
        Some(ChainMap {
            source: self.target.truncate(self.truncation()),
            target: self.source.truncate(self.truncation()),
            components: comps,
        })
    }

    pub fn is_quasi_iso(&self) -> bool {
        QuotientMap::free(self.clone()).is_quasi_iso()
    }
}

/// Direct sum of chain maps.
pub fn direct_sum_maps(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let t = f.truncation().min(g.truncation());
    let comps = (0..=t)
        .map(|n| IntMatrix::block_diag(&[f.component(n).clone(), g.component(n).clone()]))
        .collect();
    ChainMap::new_unchecked(
        f.source().direct_sum(g.source()),
        f.target().direct_sum(g.target()),
        comps,
    )
    .expect("block shapes agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::int;

    pub(crate) fn times_two() -> ChainComplex {
        // 0 -> Z --2--> Z -> 0 in degrees 1, 0, truncated at 3
        ChainComplex::new(
            vec![1, 1, 0, 0],
            vec![
                IntMatrix::from_rows_i64(1, &[vec![2]]),
                IntMatrix::zeros(1, 0),
                IntMatrix::zeros(0, 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_nonzero_square() {
        let d1 = IntMatrix::from_rows_i64(1, &[vec![1]]);
        let d2 = IntMatrix::from_rows_i64(1, &[vec![1]]);
        let err = ChainComplex::new(vec![1, 1, 1], vec![d1, d2]).unwrap_err();
        assert!(matches!(err, Error::DiffSquareNonzero { degree: 1 }));
        assert!(err.to_string().contains("degree 1"));
    }

    #[test]
    fn rejects_bad_shape() {
        let d1 = IntMatrix::zeros(2, 1);
        assert!(matches!(
            ChainComplex::new(vec![1, 1], vec![d1]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn chain_map_validation() {
        let c = times_two();
        assert!(ChainMap::identity(&c).validate().is_ok());
        let bad = ChainMap::new(
            c.clone(),
            c.clone(),
            vec![
                IntMatrix::from_rows_i64(1, &[vec![1]]),
                IntMatrix::from_rows_i64(1, &[vec![3]]),
                IntMatrix::zeros(0, 0),
                IntMatrix::zeros(0, 0),
            ],
        );
        assert!(matches!(bad, Err(Error::NotChainMap { degree: 1 })));
        let two = ChainMap::identity(&c).scale(&int(2));
        assert!(two.validate().is_ok());
        assert!(!two.is_degreewise_iso());
    }
}
