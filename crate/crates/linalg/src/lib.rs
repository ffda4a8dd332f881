//! Exact integer linear algebra.
//!
//! Everything here works over the integers with arbitrary-precision entries:
//! Smith normal form with transforms, saturated kernel bases, integer
//! solvability, and cokernel invariants. Matrices are dense; the column
//! echelon routine in [`echelon`] is the single place where elimination
//! happens for kernels and solving, so a sparse backend can be slotted in
//! behind [`ColumnEchelon`] without touching callers.

pub mod echelon;
pub mod matrix;
pub mod smith;

use std::fmt;

pub use echelon::ColumnEchelon;
pub use ibig::IBig;
pub use matrix::IntMatrix;
pub use smith::{invariant_factors, snf, SmithDecomposition};

/// The scalar type of every matrix.
pub type Int = IBig;

/// A finitely generated abelian group `Z^free_rank + Z/t_1 + ... + Z/t_k`
/// with `t_1 | t_2 | ... | t_k` and every `t_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CokernelData {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl CokernelData {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn free(rank: usize) -> Self {
        CokernelData {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }
}

impl fmt::Display for CokernelData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Columns form a saturated basis of the integer kernel of `a`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    ColumnEchelon::new(a).kernel()
}

/// An integer solution of `a x = b`, or `None` when there is none.
pub fn solve(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    ColumnEchelon::new(a).solve(b)
}

/// An integer solution of `a X = b`, or `None`.
pub fn solve_matrix(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    ColumnEchelon::new(a).solve_matrix(b)
}

/// Cokernel of `a: Z^cols -> Z^rows` read off the Smith normal form.
pub fn cokernel(a: &IntMatrix) -> CokernelData {
    let factors = invariant_factors(a);
    let one = IBig::from(1u8);
    CokernelData {
        free_rank: a.rows() - factors.len(),
        torsion: factors.into_iter().filter(|d| *d != one).collect(),
    }
}

pub fn rank(a: &IntMatrix) -> usize {
    ColumnEchelon::new(a).rank()
}

/// A basis (as columns) of the lattice spanned by the columns of `a`.
pub fn lattice_basis(a: &IntMatrix) -> IntMatrix {
    ColumnEchelon::new(a).image_basis()
}

/// Inverse of a unimodular matrix; `None` when `a` is singular or not invertible over Z.
pub fn inverse(a: &IntMatrix) -> Option<IntMatrix> {
    if a.rows() != a.cols() {
        return None;
    }
    solve_matrix(a, &IntMatrix::identity(a.rows()))
}

/// True when the columns of `a` span a saturated sublattice (all invariant factors 1).
pub fn is_saturated(a: &IntMatrix) -> bool {
    let one = IBig::from(1u8);
    invariant_factors(a).iter().all(|d| *d == one)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows_i64(cols, rows)
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| IBig::from(x)).collect()
    }

    #[test]
    fn snf_examples() {
        let d = snf(&m(2, &[vec![2, 4], vec![6, 8]]));
        assert_eq!(d.d, m(2, &[vec![2, 0], vec![0, 4]]));
        assert_eq!(snf(&IntMatrix::identity(2)).d, IntMatrix::identity(2));
        assert!(snf(&IntMatrix::zeros(2, 3)).d.is_zero());
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&m(2, &[vec![1, 1]]));
        assert_eq!(k.cols(), 1);
        let c = k.column(0);
        assert!(c == ints(&[1, -1]) || c == ints(&[-1, 1]));
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
        assert_eq!(kernel_basis(&IntMatrix::zeros(1, 2)).cols(), 2);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve(&m(1, &[vec![2]]), &ints(&[4])), Some(ints(&[2])));
        assert_eq!(solve(&m(1, &[vec![2]]), &ints(&[3])), None);
        let a = m(2, &[vec![1, 0], vec![0, 2]]);
        assert_eq!(solve(&a, &ints(&[5, 6])), Some(ints(&[5, 3])));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(
            cokernel(&m(1, &[vec![2]])),
            CokernelData {
                free_rank: 0,
                torsion: ints(&[2])
            }
        );
        assert!(cokernel(&IntMatrix::identity(3)).is_zero());
        assert_eq!(cokernel(&IntMatrix::zeros(4, 0)), CokernelData::free(4));
    }

    #[test]
    fn display_groups() {
        let c = CokernelData {
            free_rank: 2,
            torsion: ints(&[2, 6]),
        };
        assert_eq!(c.to_string(), "Z^2 ⊕ Z/2 ⊕ Z/6");
        assert_eq!(CokernelData::default().to_string(), "0");
    }

    #[test]
    fn inverse_of_unimodular() {
        let a = m(2, &[vec![2, 1], vec![1, 1]]);
        let inv = inverse(&a).unwrap();
        assert!((&a * &inv).is_identity());
        assert!(inverse(&m(1, &[vec![2]])).is_none());
    }
}
