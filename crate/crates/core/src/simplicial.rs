//! Truncated simplicial abelian groups with levelwise free finite bases.

use std::collections::HashMap;

use dkforge_linalg::IntMatrix;

use crate::error::{Error, Result};
use crate::util::monotone_sequences;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialAbGroup {
    ranks: Vec<usize>,
    /// `faces[n][i] = d_i : A_n -> A_{n-1}`; `faces[0]` is empty.
    faces: Vec<Vec<IntMatrix>>,
    /// `degens[n][i] = s_i : A_n -> A_{n+1}` for `n < T`.
    degens: Vec<Vec<IntMatrix>>,
}

impl SimplicialAbGroup {
    pub fn new(ranks: Vec<usize>, faces: Vec<Vec<IntMatrix>>, degens: Vec<Vec<IntMatrix>>) -> Result<Self> {
        let a = Self::new_unchecked(ranks, faces, degens)?;
        a.validate()?;
        Ok(a)
    }

    /// Checks shapes only.
    pub fn new_unchecked(
        ranks: Vec<usize>,
        faces: Vec<Vec<IntMatrix>>,
        degens: Vec<Vec<IntMatrix>>,
    ) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Shape("a simplicial group needs level 0".into()));
        }
        let t = ranks.len() - 1;
        if faces.len() != t + 1 || degens.len() != t {
            return Err(Error::Shape(format!(
                "truncation {t} needs {} face levels and {t} degeneracy levels",
                t + 1
            )));
        }
        for n in 0..=t {
            let expected = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != expected {
                return Err(Error::Shape(format!("level {n} needs {expected} faces")));
            }
            for (i, d) in faces[n].iter().enumerate() {
                if d.shape() != (ranks[n - 1], ranks[n]) {
                    return Err(Error::Shape(format!("d_{i} at level {n} has wrong shape")));
                }
            }
            if n < t {
                if degens[n].len() != n + 1 {
                    return Err(Error::Shape(format!("level {n} needs {} degeneracies", n + 1)));
                }
                for (i, s) in degens[n].iter().enumerate() {
                    if s.shape() != (ranks[n + 1], ranks[n]) {
                        return Err(Error::Shape(format!("s_{i} at level {n} has wrong shape")));
                    }
                }
            }
        }
        Ok(SimplicialAbGroup { ranks, faces, degens })
    }

    /// Checks every simplicial identity that lives within levels `0..=T`.
    pub fn validate(&self) -> Result<()> {
        let t = self.truncation();
        let fail = |identity, i, j, level| Err(Error::SimplicialIdentity { identity, i, j, level });
        for n in 2..=t {
            for j in 1..=n {
                for i in 0..j {
                    if self.face(n - 1, i) * self.face(n, j) != self.face(n - 1, j - 1) * self.face(n, i) {
                        return fail("d_i d_j = d_{j-1} d_i", i, j, n);
                    }
                }
            }
        }
        for n in 0..t.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    if self.degen(n + 1, i) * self.degen(n, j) != self.degen(n + 1, j + 1) * self.degen(n, i) {
                        return fail("s_i s_j = s_{j+1} s_i", i, j, n);
                    }
                }
            }
        }
        for n in 0..t {
            // d_i s_j on level n, through level n+1
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = self.face(n + 1, i) * self.degen(n, j);
                    let ok = if i == j || i == j + 1 {
                        lhs.is_identity()
                    } else if i < j {
                        lhs == self.degen(n - 1, j - 1) * self.face(n, i)
                    } else {
                        lhs == self.degen(n - 1, j) * self.face(n, i - 1)
                    };
                    if !ok {
                        let name = if i == j || i == j + 1 {
                            "d_i s_j = id"
                        } else if i < j {
                            "d_i s_j = s_{j-1} d_i"
                        } else {
                            "d_i s_j = s_j d_{i-1}"
                        };
                        return fail(name, i, j, n);
                    }
                }
            }
        }
        Ok(())
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

    pub fn face(&self, n: usize, i: usize) -> &IntMatrix {
        &self.faces[n][i]
    }

    pub fn degen(&self, n: usize, i: usize) -> &IntMatrix {
        &self.degens[n][i]
    }

    pub fn faces(&self) -> &[Vec<IntMatrix>] {
        &self.faces
    }

    pub fn degens(&self) -> &[Vec<IntMatrix>] {
        &self.degens
    }

    /// The constant simplicial group with value `Z^rank`.
    pub fn constant(rank: usize, truncation: usize) -> Self {
        let id = IntMatrix::identity(rank);
        let ranks = vec![rank; truncation + 1];
        let faces = (0..=truncation)
            .map(|n| if n == 0 { vec![] } else { vec![id.clone(); n + 1] })
            .collect();
        let degens = (0..truncation).map(|n| vec![id.clone(); n + 1]).collect();
        SimplicialAbGroup { ranks, faces, degens }
    }

    pub fn zero(truncation: usize) -> Self {
        Self::constant(0, truncation)
    }

    pub fn truncate(&self, t: usize) -> Self {
        let t = t.min(self.truncation());
        SimplicialAbGroup {
            ranks: self.ranks[..=t].to_vec(),
            faces: self.faces[..=t].to_vec(),
            degens: self.degens[..t].to_vec(),
        }
    }

    /// Replaces every structure map `m : A_src -> A_tgt` by `f(src, tgt, m)`.
    fn map_structure(&self, f: impl Fn(usize, usize, &IntMatrix) -> IntMatrix) -> Self {
        let faces = self
            .faces
            .iter()
            .enumerate()
            .map(|(n, ds)| ds.iter().map(|d| f(n, n - 1, d)).collect())
            .collect();
        let degens = self
            .degens
            .iter()
            .enumerate()
            .map(|(n, ss)| ss.iter().map(|s| f(n, n + 1, s)).collect())
            .collect();
        SimplicialAbGroup {
            ranks: self.ranks.clone(),
            faces,
            degens,
        }
    }

    /// Levelwise change of basis `P_n` (with inverses `P_n^{-1}`) applied to every structure map.
    pub fn conjugate(&self, p: &[IntMatrix], p_inv: &[IntMatrix]) -> Self {
        self.map_structure(|src, tgt, m| &(&p[tgt] * m) * &p_inv[src])
    }

    pub fn direct_sum(&self, other: &SimplicialAbGroup) -> Self {
        let t = self.truncation().min(other.truncation());
        let (a, b) = (self.truncate(t), other.truncate(t));
        let ranks = (0..=t).map(|n| a.rank(n) + b.rank(n)).collect();
        let faces = (0..=t)
            .map(|n| {
                (0..a.faces[n].len())
                    .map(|i| IntMatrix::block_diag(&[a.faces[n][i].clone(), b.faces[n][i].clone()]))
                    .collect()
            })
            .collect();
        let degens = (0..t)
            .map(|n| {
                (0..=n)
                    .map(|i| IntMatrix::block_diag(&[a.degens[n][i].clone(), b.degens[n][i].clone()]))
                    .collect()
            })
            .collect();
        SimplicialAbGroup { ranks, faces, degens }
    }

    /// `θ^* : A_n -> A_m` for a monotone `θ : [m] -> [n]` given by its values.
    pub fn operator(&self, theta: &[usize], n: usize) -> IntMatrix {
        let m = theta.len() - 1;
        let mut image: Vec<usize> = theta.to_vec();
        image.dedup();
        let k = image.len() - 1;
        let mut out = IntMatrix::identity(self.rank(n));
        let mut level = n;
        // faces for the vertices missed by θ, largest first
        for v in (0..=n).rev() {
            if !image.contains(&v) {
                out = self.face(level, v) * &out;
                level -= 1;
            }
        }
        debug_assert_eq!(level, k);
        // then the degeneracies of the surjective part, smallest index first
        for j in 0..m {
            if theta[j] == theta[j + 1] {
                out = self.degen(level, j) * &out;
                level += 1;
            }
        }
        debug_assert_eq!(level, m);
        out
    }
}

/// Structure maps applied to batches of vectors (the columns of `v`).
///
/// Lets large tensor products act on vectors without materializing their
/// Kronecker-product matrices.
pub trait SimplicialOps {
    fn truncation(&self) -> usize;
    fn level_rank(&self, n: usize) -> usize;
    fn apply_face(&self, n: usize, i: usize, v: &IntMatrix) -> IntMatrix;
    fn apply_degen(&self, n: usize, i: usize, v: &IntMatrix) -> IntMatrix;
    fn apply_operator(&self, theta: &[usize], n: usize, v: &IntMatrix) -> IntMatrix;
}

impl SimplicialOps for SimplicialAbGroup {
    fn truncation(&self) -> usize {
        SimplicialAbGroup::truncation(self)
    }

    fn level_rank(&self, n: usize) -> usize {
        self.rank(n)
    }

    fn apply_face(&self, n: usize, i: usize, v: &IntMatrix) -> IntMatrix {
        self.face(n, i) * v
    }

    fn apply_degen(&self, n: usize, i: usize, v: &IntMatrix) -> IntMatrix {
        self.degen(n, i) * v
    }

    fn apply_operator(&self, theta: &[usize], n: usize, v: &IntMatrix) -> IntMatrix {
        &self.operator(theta, n) * v
    }
}

/// `A⊗B` acting through its factors: `(X⊗Y) v` is evaluated as `X V Y^T`.
#[derive(Clone, Copy, Debug)]
pub struct TensorPair<'a> {
    pub left: &'a SimplicialAbGroup,
    pub right: &'a SimplicialAbGroup,
}

/// `(x⊗y) v` for every column of `v`, with the basis indexed by `i * y.cols() + j`.
pub fn kron_apply(x: &IntMatrix, y: &IntMatrix, v: &IntMatrix) -> IntMatrix {
    assert_eq!(v.rows(), x.cols() * y.cols(), "vector length does not match");
    let yt = y.transpose();
    let cols: Vec<Vec<dkforge_linalg::Int>> = (0..v.cols())
        .map(|j| {
            let m = IntMatrix::from_vec(x.cols(), y.cols(), v.column(j));
            (&(x * &m) * &yt).entries().to_vec()
        })
        .collect();
    IntMatrix::from_columns(x.rows() * y.rows(), &cols)
}

impl SimplicialOps for TensorPair<'_> {
    fn truncation(&self) -> usize {
        self.left.truncation().min(self.right.truncation())
    }

    fn level_rank(&self, n: usize) -> usize {
        self.left.rank(n) * self.right.rank(n)
    }

    fn apply_face(&self, n: usize, i: usize, v: &IntMatrix) -> IntMatrix {
        kron_apply(self.left.face(n, i), self.right.face(n, i), v)
    }

    fn apply_degen(&self, n: usize, i: usize, v: &IntMatrix) -> IntMatrix {
        kron_apply(self.left.degen(n, i), self.right.degen(n, i), v)
    }

    fn apply_operator(&self, theta: &[usize], n: usize, v: &IntMatrix) -> IntMatrix {
        kron_apply(&self.left.operator(theta, n), &self.right.operator(theta, n), v)
    }
}

/// Levelwise tensor product; faces and degeneracies act diagonally.
pub fn tensor(a: &SimplicialAbGroup, b: &SimplicialAbGroup) -> SimplicialAbGroup {
    let t = a.truncation().min(b.truncation());
    let ranks = (0..=t).map(|n| a.rank(n) * b.rank(n)).collect();
    let faces = (0..=t)
        .map(|n| {
            (0..a.faces[n].len())
                .map(|i| a.face(n, i).kron(b.face(n, i)))
                .collect()
        })
        .collect();
    let degens = (0..t)
        .map(|n| (0..=n).map(|i| a.degen(n, i).kron(b.degen(n, i))).collect())
        .collect();
    SimplicialAbGroup { ranks, faces, degens }
}

/// `ZΔ^n` truncated at level `T`: level `k` has the monotone maps `[k] -> [n]` as basis.
pub fn standard_simplex(n: usize, truncation: usize) -> SimplicialAbGroup {
    let bases: Vec<Vec<Vec<usize>>> = (0..=truncation)
        .map(|k| monotone_sequences(k + 1, n))
        .collect();
    let index: Vec<HashMap<&[usize], usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
        .collect();
    let ranks: Vec<usize> = bases.iter().map(Vec::len).collect();
    let op = |k: usize, target: usize, f: &dyn Fn(&[usize]) -> Vec<usize>| {
        let mut m = IntMatrix::zeros(ranks[target], ranks[k]);
        for (col, s) in bases[k].iter().enumerate() {
            m[(index[target][f(s).as_slice()], col)] = crate::util::one();
        }
        m
    };
    let faces = (0..=truncation)
        .map(|k| {
            if k == 0 {
                return vec![];
            }
            (0..=k)
                .map(|i| {
                    op(k, k - 1, &|s: &[usize]| {
                        let mut v = s.to_vec();
                        v.remove(i);
                        v
                    })
                })
                .collect()
        })
        .collect();
    let degens = (0..truncation)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    op(k, k + 1, &|s: &[usize]| {
                        let mut v = s.to_vec();
                        v.insert(i, s[i]);
                        v
                    })
                })
                .collect()
        })
        .collect();
    SimplicialAbGroup { ranks, faces, degens }
}

/// Position of the simplex `s : [k] -> [n]` in the level-`k` basis of `ZΔ^n`.
pub fn simplex_index(s: &[usize], n: usize) -> usize {
    monotone_sequences(s.len(), n)
        .iter()
        .position(|x| x == s)
        .expect("monotone sequence")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialAbGroup,
    target: SimplicialAbGroup,
    components: Vec<IntMatrix>,
}

impl SimplicialMap {
    pub fn new(source: SimplicialAbGroup, target: SimplicialAbGroup, components: Vec<IntMatrix>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, components)?;
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(
        source: SimplicialAbGroup,
        target: SimplicialAbGroup,
        components: Vec<IntMatrix>,
    ) -> Result<Self> {
        let t = source.truncation().min(target.truncation());
        if components.len() != t + 1 {
            return Err(Error::Shape(format!("simplicial map needs {} components", t + 1)));
        }
        for (n, f) in components.iter().enumerate() {
            if f.shape() != (target.rank(n), source.rank(n)) {
                return Err(Error::Shape(format!("component {n} has wrong shape")));
            }
        }
        Ok(SimplicialMap { source, target, components })
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.truncation();
        let (a, b) = (&self.source, &self.target);
        for n in 1..=t {
            for i in 0..=n {
                if &self.components[n - 1] * a.face(n, i) != b.face(n, i) * &self.components[n] {
                    return Err(Error::NotSimplicialMap { operator: format!("d_{i}"), level: n });
                }
            }
        }
        for n in 0..t {
            for i in 0..=n {
                if &self.components[n + 1] * a.degen(n, i) != b.degen(n, i) * &self.components[n] {
                    return Err(Error::NotSimplicialMap { operator: format!("s_{i}"), level: n });
                }
            }
        }
        Ok(())
    }

    pub fn identity(a: &SimplicialAbGroup) -> Self {
        SimplicialMap {
            source: a.clone(),
            target: a.clone(),
            components: a.ranks().iter().map(|&r| IntMatrix::identity(r)).collect(),
        }
    }

    pub fn zero(a: &SimplicialAbGroup, b: &SimplicialAbGroup) -> Self {
        let t = a.truncation().min(b.truncation());
        SimplicialMap {
            source: a.clone(),
            target: b.clone(),
            components: (0..=t).map(|n| IntMatrix::zeros(b.rank(n), a.rank(n))).collect(),
        }
    }

    pub fn source(&self) -> &SimplicialAbGroup {
        &self.source
    }

    pub fn target(&self) -> &SimplicialAbGroup {
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
    pub fn compose(&self, first: &SimplicialMap) -> SimplicialMap {
        let t = self.truncation().min(first.truncation());
        SimplicialMap {
            source: first.source.truncate(t),
            target: self.target.truncate(t),
            components: (0..=t).map(|n| &self.components[n] * &first.components[n]).collect(),
        }
    }

    pub fn same_components(&self, other: &SimplicialMap) -> bool {
        self.components == other.components
    }

    pub fn is_levelwise_iso(&self) -> bool {
        self.components
            .iter()
            .all(|f| f.rows() == f.cols() && dkforge_linalg::inverse(f).is_some())
    }

    pub fn inverse(&self) -> Option<SimplicialMap> {
        let comps = self
            .components
            .iter()
            .map(dkforge_linalg::inverse)
            .collect::<Option<Vec<_>>>()?;
        let t = self.truncation();
        Some(SimplicialMap {
            source: self.target.truncate(t),
            target: self.source.truncate(t),
            components: comps,
        })
    }

    /// Levelwise injective (as matrices over the integers).
    pub fn is_injective(&self) -> bool {
        self.components.iter().all(crate::util::is_injective)
    }
}

/// Levelwise tensor product of simplicial maps.
pub fn tensor_maps(f: &SimplicialMap, g: &SimplicialMap) -> SimplicialMap {
    let t = f.truncation().min(g.truncation());
    SimplicialMap {
        source: tensor(f.source(), g.source()),
        target: tensor(f.target(), g.target()),
        components: (0..=t).map(|n| f.component(n).kron(g.component(n))).collect(),
    }
}

/// The swap `A⊗B -> B⊗A`, `a⊗b ↦ b⊗a` in every level.
pub fn symmetry(a: &SimplicialAbGroup, b: &SimplicialAbGroup) -> SimplicialMap {
    let t = a.truncation().min(b.truncation());
    SimplicialMap {
        source: tensor(a, b),
        target: tensor(b, a),
        components: (0..=t).map(|n| crate::util::swap_matrix(a.rank(n), b.rank(n))).collect(),
    }
}

/// Kan fibration test: the normalized map is surjective in every positive degree.
pub fn is_fibration(f: &SimplicialMap) -> Result<bool> {
    let nf = crate::doldkan::normalize_map(f)?;
    Ok((1..=nf.truncation()).all(|n| crate::util::is_surjective(nf.component(n))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::int;

    #[test]
    fn simplex_ranks() {
        let d1 = standard_simplex(1, 4);
        assert_eq!(d1.ranks(), &[2, 3, 4, 5, 6]);
        assert_eq!(standard_simplex(3, 0).ranks(), &[4]);
        d1.validate().unwrap();
        standard_simplex(2, 3).validate().unwrap();
    }

    #[test]
    fn validation_reports_identity() {
        let a = standard_simplex(1, 2);
        let mut faces = a.faces().to_vec();
        faces[1][0] = faces[1][1].clone();
        let err = SimplicialAbGroup::new(a.ranks().to_vec(), faces, a.degens().to_vec()).unwrap_err();
        assert!(matches!(err, Error::SimplicialIdentity { .. }));
    }

    #[test]
    fn operator_is_precomposition_on_simplices() {
        let n = 2;
        let a = standard_simplex(n, 3);
        for k in 0..=3 {
            for m in 0..=3 {
                for theta in monotone_sequences(m + 1, k) {
                    let op = a.operator(&theta, k);
                    for (col, s) in monotone_sequences(k + 1, n).iter().enumerate() {
                        let composite: Vec<usize> = theta.iter().map(|&t| s[t]).collect();
                        let row = simplex_index(&composite, n);
                        let expected = crate::util::unit_vector(a.rank(m), row);
                        assert_eq!(op.column(col), expected, "θ={theta:?} s={s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_is_diagonal_and_valid() {
        let a = standard_simplex(1, 3);
        let t = tensor(&a, &a);
        t.validate().unwrap();
        assert_eq!(t.rank(2), 16);
        assert_eq!(*t.face(2, 1), a.face(2, 1).kron(a.face(2, 1)));
        let unit = tensor(&SimplicialAbGroup::constant(1, 3), &a);
        assert_eq!(unit, a);
    }

    #[test]
    fn maps_validate() {
        let a = standard_simplex(1, 2);
        SimplicialMap::identity(&a).validate().unwrap();
        let mut comps: Vec<IntMatrix> = a.ranks().iter().map(|&r| IntMatrix::identity(r)).collect();
        comps[1][(0, 0)] = int(2);
        assert!(SimplicialMap::new(a.clone(), a, comps).is_err());
    }
}
