//! Column echelon form under unimodular column operations.
//!
//! `A * V = E` with `V` unimodular and `E` in column echelon form: the first
//! `rank` columns of `E` carry strictly increasing pivot rows, and every entry
//! above a pivot is zero. The trailing columns of `E` vanish, so the trailing
//! columns of `V` form a basis of the integer kernel. Because `V` is
//! unimodular that kernel basis is automatically saturated.

use ibig::IBig;

use crate::matrix::{abs, is_zero};
use crate::{Int, IntMatrix};

#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    rows: usize,
    cols: usize,
    /// Each entry is one column of `A*V` followed by the matching column of `V`.
    columns: Vec<Vec<Int>>,
    pivots: Vec<usize>,
}

impl ColumnEchelon {
    pub fn new(a: &IntMatrix) -> Self {
        let (m, n) = a.shape();
        let mut columns: Vec<Vec<Int>> = (0..n)
            .map(|j| {
                let mut c = a.column(j);
                c.extend((0..n).map(|k| IBig::from(u8::from(k == j))));
                c
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for r in 0..m {
            if rank == n {
                break;
            }
            loop {
                let best = (rank..n)
                    .filter(|&j| !is_zero(&columns[j][r]))
                    .min_by(|&x, &y| abs(&columns[x][r]).cmp(&abs(&columns[y][r])));
                let Some(best) = best else { break };
                columns.swap(rank, best);
                let pivot_col = std::mem::take(&mut columns[rank]);
                let p = pivot_col[r].clone();
                let mut clean = true;
                for col in columns.iter_mut().skip(rank + 1) {
                    if is_zero(&col[r]) {
                        continue;
                    }
                    let q = &col[r] / &p;
                    if !is_zero(&q) {
                        for k in r..pivot_col.len() {
                            if !is_zero(&pivot_col[k]) {
                                col[k] -= &q * &pivot_col[k];
                            }
                        }
                    }
                    if !is_zero(&col[r]) {
                        clean = false;
                    }
                }
                columns[rank] = pivot_col;
                if clean {
                    if columns[rank][r] < IBig::from(0u8) {
                        for x in columns[rank].iter_mut() {
                            *x = -&*x;
                        }
                    }
                    pivots.push(r);
                    rank += 1;
                    break;
                }
            }
        }
        ColumnEchelon {
            rows: m,
            cols: n,
            columns,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivots
    }

    /// The echelon form `E = A*V`.
    pub fn echelon(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.columns[j][i].clone())
    }

    /// The unimodular transform `V`.
    pub fn transform(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.cols, |i, j| {
            self.columns[j][self.rows + i].clone()
        })
    }

    /// Saturated basis of `{x : A x = 0}` as matrix columns.
    pub fn kernel(&self) -> IntMatrix {
        let r = self.rank();
        IntMatrix::from_fn(self.cols, self.cols - r, |i, j| {
            self.columns[r + j][self.rows + i].clone()
        })
    }

    /// Basis of the lattice spanned by the columns of `A`.
    pub fn image_basis(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.rank(), |i, j| self.columns[j][i].clone())
    }

    /// Integer solution of `A x = b`, or `None` when none exists.
    pub fn solve(&self, b: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let mut residual = b.to_vec();
        let mut y = Vec::with_capacity(self.rank());
        for (j, &pr) in self.pivots.iter().enumerate() {
            let col = &self.columns[j];
            let p = &col[pr];
            let t = &residual[pr];
            if is_zero(t) {
                y.push(IBig::from(0u8));
                continue;
            }
            if !is_zero(&(t % p)) {
                return None;
            }
            let q = t / p;
            for k in pr..self.rows {
                if !is_zero(&col[k]) {
                    residual[k] -= &q * &col[k];
                }
            }
            y.push(q);
        }
        if !residual.iter().all(is_zero) {
            return None;
        }
        let mut x = vec![IBig::from(0u8); self.cols];
        for (j, yj) in y.iter().enumerate() {
            if is_zero(yj) {
                continue;
            }
            let col = &self.columns[j];
            for (i, xi) in x.iter_mut().enumerate() {
                let v = &col[self.rows + i];
                if !is_zero(v) {
                    *xi += yj * v;
                }
            }
        }
        Some(x)
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, b: &IntMatrix) -> Option<IntMatrix> {
        assert_eq!(b.rows(), self.rows, "right-hand side has wrong row count");
        let mut cols = Vec::with_capacity(b.cols());
        for j in 0..b.cols() {
            cols.push(self.solve(&b.column(j))?);
        }
        Some(IntMatrix::from_columns(self.cols, &cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_shape() {
        let a = IntMatrix::from_rows_i64(3, &[vec![2, 4, 6], vec![1, 1, 1]]);
        let e = ColumnEchelon::new(&a);
        assert_eq!(e.rank(), 2);
        assert_eq!(&a * &e.transform(), e.echelon());
        assert_eq!(e.transform().det().clone() * e.transform().det(), IBig::from(1));
        let k = e.kernel();
        assert_eq!(k.cols(), 1);
        assert!((&a * &k).is_zero());
    }
}
