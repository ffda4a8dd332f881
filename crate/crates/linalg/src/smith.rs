//! Smith normal form with unimodular transforms.

use ibig::IBig;

use crate::matrix::{abs, is_zero};
use crate::{Int, IntMatrix};

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal, nonnegative, and
/// ordered by divisibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1, ..., d_min(rows, cols)` including trailing zeros.
    pub fn diagonal(&self) -> Vec<Int> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !is_zero(x)).count()
    }
}

struct Work {
    a: Vec<Vec<Int>>,
    u: Option<Vec<Vec<Int>>>,
    v: Option<Vec<Vec<Int>>>,
    m: usize,
    n: usize,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i -= q * row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &Int) {
        let (src, dst) = pair_mut(&mut self.a, t, i);
        axpy(dst, src, q);
        if let Some(u) = self.u.as_mut() {
            let (src, dst) = pair_mut(u, t, i);
            axpy(dst, src, q);
        }
    }

    /// col_j -= q * col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &Int) {
        for row in self.a.iter_mut() {
            if !is_zero(&row[t]) {
                let d = q * &row[t];
                row[j] -= d;
            }
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                if !is_zero(&row[t]) {
                    let d = q * &row[t];
                    row[j] -= d;
                }
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in self.a[t].iter_mut() {
            *x = -&*x;
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, Int)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if is_zero(x) {
                    continue;
                }
                let ax = abs(x);
                if best.as_ref().is_none_or(|b| ax < b.2) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) {
        let steps = self.m.min(self.n);
        for t in 0..steps {
            let Some((pi, pj)) = self.min_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.m {
                    if is_zero(&self.a[i][t]) {
                        continue;
                    }
                    let q = &self.a[i][t] / &self.a[t][t];
                    self.row_axpy(i, t, &q);
                    dirty |= !is_zero(&self.a[i][t]);
                }
                for j in t + 1..self.n {
                    if is_zero(&self.a[t][j]) {
                        continue;
                    }
                    let q = &self.a[t][j] / &self.a[t][t];
                    self.col_axpy(j, t, &q);
                    dirty |= !is_zero(&self.a[t][j]);
                }
                if dirty {
                    // bring the smallest remainder in row/column t into the pivot
                    let mut best = (t, t, abs(&self.a[t][t]));
                    for i in t + 1..self.m {
                        let x = &self.a[i][t];
                        if !is_zero(x) && abs(x) < best.2 {
                            best = (i, t, abs(x));
                        }
                    }
                    for j in t + 1..self.n {
                        let x = &self.a[t][j];
                        if !is_zero(x) && abs(x) < best.2 {
                            best = (t, j, abs(x));
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let p = self.a[t][t].clone();
                let bad = (t + 1..self.m).find(|&i| {
                    (t + 1..self.n).any(|j| !is_zero(&(&self.a[i][j] % &p)))
                });
                match bad {
                    Some(i) => {
                        // row_t += row_i
                        self.row_axpy(t, i, &IBig::from(-1));
                    }
                    None => break,
                }
            }
            if self.a[t][t] < IBig::from(0u8) {
                self.negate_row(t);
            }
        }
    }
}

fn pair_mut<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = v.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

fn axpy(dst: &mut [Int], src: &[Int], q: &Int) {
    if is_zero(q) {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !is_zero(s) {
            *d -= q * s;
        }
    }
}

fn to_rows(a: &IntMatrix) -> Vec<Vec<Int>> {
    a.to_rows()
}

fn identity_rows(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| IBig::from(u8::from(i == j))).collect())
        .collect()
}

fn from_rows(rows: usize, cols: usize, data: Vec<Vec<Int>>) -> IntMatrix {
    IntMatrix::from_vec(rows, cols, data.into_iter().flatten().collect())
}

/// Smith normal form of `a` together with both transforms.
pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = a.shape();
    let mut w = Work {
        a: to_rows(a),
        u: Some(identity_rows(m)),
        v: Some(identity_rows(n)),
        m,
        n,
    };
    w.run();
    SmithDecomposition {
        d: from_rows(m, n, w.a),
        u: from_rows(m, m, w.u.unwrap()),
        v: from_rows(n, n, w.v.unwrap()),
    }
}

/// The nonzero invariant factors of `a`, in divisibility order.
pub fn invariant_factors(a: &IntMatrix) -> Vec<Int> {
    let (m, n) = a.shape();
    let mut w = Work {
        a: to_rows(a),
        u: None,
        v: None,
        m,
        n,
    };
    w.run();
    (0..m.min(n))
        .map(|i| w.a[i][i].clone())
        .filter(|x| !is_zero(x))
        .collect()
}
