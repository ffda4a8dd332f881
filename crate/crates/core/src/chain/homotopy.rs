//! Integer chain homotopies `dH + Hd = f - g`.

use dkforge_linalg::{kernel_basis, solve, solve_matrix, Int, IntMatrix};

use super::ChainMap;

/// Components `H_n : C_n -> D_{n+1}` for `0 <= n <= T-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainHomotopy {
    pub components: Vec<IntMatrix>,
}

impl ChainHomotopy {
    /// Checks `d H_n + H_{n-1} d = f_n - g_n` for `n <= T-1`.
    pub fn certifies(&self, f: &ChainMap, g: &ChainMap) -> bool {
        let t = f.truncation().min(g.truncation());
        if self.components.len() != t {
            return false;
        }
        let (c, d) = (f.source(), f.target());
        (0..t).all(|n| {
            let mut lhs = d.d(n + 1) * &self.components[n];
            if n >= 1 {
                lhs = &lhs + &(&self.components[n - 1] * c.d(n));
            }
            lhs == f.component(n) - g.component(n)
        })
    }
}

/// Column-major `vec`.
fn vec_of(m: &IntMatrix) -> Vec<Int> {
    m.transpose().entries().to_vec()
}

fn unvec(rows: usize, cols: usize, v: &[Int]) -> IntMatrix {
    IntMatrix::from_vec(cols, rows, v.to_vec()).transpose()
}

/// Searches for an integer homotopy from `f` to `g` through degree `T-1`.
///
/// A greedy degree-by-degree pass handles the common case; when it gets stuck
/// the previous component is corrected by cycle-valued maps, and as a last
/// resort all degrees are solved as one joint system, so `None` means no
/// homotopy exists within the truncation window.
pub fn homotopy_solve(f: &ChainMap, g: &ChainMap) -> Option<ChainHomotopy> {
    assert_eq!(f.source().ranks(), g.source().ranks(), "maps must be parallel");
    assert_eq!(f.target().ranks(), g.target().ranks(), "maps must be parallel");
    let h = greedy(f, g).or_else(|| joint(f, g))?;
    let h = ChainHomotopy { components: h };
    h.certifies(f, g).then_some(h)
}

fn greedy(f: &ChainMap, g: &ChainMap) -> Option<Vec<IntMatrix>> {
    let t = f.truncation().min(g.truncation());
    let (c, d) = (f.source(), f.target());
    let mut hs: Vec<IntMatrix> = Vec::with_capacity(t);
    for n in 0..t {
        let mut rhs = f.component(n) - g.component(n);
        if n >= 1 {
            rhs = &rhs - &(&hs[n - 1] * c.d(n));
        }
        if let Some(x) = solve_matrix(d.d(n + 1), &rhs) {
            hs.push(x);
            continue;
        }
        if n == 0 {
            return None;
        }
        // Adjust H_{n-1} by Z K' with Z the cycles of D_n; the degree n-1
        // equation is unaffected since d Z = 0.
        let z = kernel_basis(d.d(n));
        let dn1 = d.d(n + 1);
        let cn = c.d(n);
        let a = IntMatrix::identity(c.rank(n)).kron(dn1);
        let b = cn.transpose().kron(&z);
        let sys = a.hstack(&b);
        let sol = solve(&sys, &vec_of(&rhs))?;
        let split = dn1.cols() * c.rank(n);
        let x = unvec(d.rank(n + 1), c.rank(n), &sol[..split]);
        let k = unvec(z.cols(), c.rank(n - 1), &sol[split..]);
        hs[n - 1] = &hs[n - 1] + &(&z * &k);
        hs.push(x);
    }
    Some(hs)
}

fn joint(f: &ChainMap, g: &ChainMap) -> Option<Vec<IntMatrix>> {
    let t = f.truncation().min(g.truncation());
    let (c, d) = (f.source(), f.target());
    let unknown: Vec<usize> = (0..t).map(|n| d.rank(n + 1) * c.rank(n)).collect();
    let equation: Vec<usize> = (0..t).map(|n| d.rank(n) * c.rank(n)).collect();
    let mut col_off = vec![0; t + 1];
    let mut row_off = vec![0; t + 1];
    for n in 0..t {
        col_off[n + 1] = col_off[n] + unknown[n];
        row_off[n + 1] = row_off[n] + equation[n];
    }
    let mut sys = IntMatrix::zeros(row_off[t], col_off[t]);
    let mut rhs = Vec::with_capacity(row_off[t]);
    for n in 0..t {
        sys.set_block(
            row_off[n],
            col_off[n],
            &IntMatrix::identity(c.rank(n)).kron(d.d(n + 1)),
        );
        if n >= 1 {
            sys.set_block(
                row_off[n],
                col_off[n - 1],
                &c.d(n).transpose().kron(&IntMatrix::identity(d.rank(n))),
            );
        }
        rhs.extend(vec_of(&(f.component(n) - g.component(n))));
    }
    let sol = solve(&sys, &rhs)?;
    Some(
        (0..t)
            .map(|n| unvec(d.rank(n + 1), c.rank(n), &sol[col_off[n]..col_off[n + 1]]))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainComplex;
    use crate::util::int;

    #[test]
    fn equal_maps_need_trivial_homotopy() {
        let c = crate::chain::tests::times_two();
        let id = ChainMap::identity(&c);
        let h = homotopy_solve(&id, &id).unwrap();
        assert!(h.certifies(&id, &id));
    }

    #[test]
    fn identity_on_unit_is_not_null() {
        let z = ChainComplex::sphere(0, 2);
        assert!(homotopy_solve(&ChainMap::identity(&z), &ChainMap::zero(&z, &z)).is_none());
    }

    #[test]
    fn contractible_complex_is_null_homotopic() {
        // Z --1--> Z in degrees 1, 0, truncated at 2
        let one = IntMatrix::from_rows_i64(1, &[vec![1]]);
        let c = ChainComplex::new(vec![1, 1, 0], vec![one, IntMatrix::zeros(1, 0)]).unwrap();
        let h = homotopy_solve(&ChainMap::identity(&c), &ChainMap::zero(&c, &c)).unwrap();
        assert_eq!(h.components[0][(0, 0)], int(1));
    }

    #[test]
    fn projection_onto_a_cycle_is_not_null() {
        // C = Z[1] ⊕ (Z -> Z); id - proj projects onto the Z[1] summand
        let d1 = IntMatrix::from_rows_i64(2, &[vec![0, 1]]);
        let c = ChainComplex::new(vec![1, 2, 0], vec![d1, IntMatrix::zeros(2, 0)]).unwrap();
        let id = ChainMap::identity(&c);
        let proj = ChainMap::new(
            c.clone(),
            c.clone(),
            vec![
                IntMatrix::from_rows_i64(1, &[vec![1]]),
                IntMatrix::from_rows_i64(2, &[vec![0, 0], vec![0, 1]]),
                IntMatrix::zeros(0, 0),
            ],
        )
        .unwrap();
        assert!(homotopy_solve(&id, &proj).is_none());
        assert!(joint(&id, &proj).is_none());
        let zero = ChainMap::zero(&c, &c);
        let h = joint(&proj, &zero.add(&proj)).unwrap();
        assert!(ChainHomotopy { components: h }.certifies(&proj, &proj));
    }
}
