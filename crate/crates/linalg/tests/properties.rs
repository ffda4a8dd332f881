use dkforge_linalg::{
    cokernel, invariant_factors, kernel_basis, snf, solve, IBig, Int, IntMatrix,
};
use proptest::prelude::*;

fn gcd(a: &Int, b: &Int) -> Int {
    if *a == IBig::from(0) && *b == IBig::from(0) {
        IBig::from(0)
    } else {
        a.gcd(b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors via determinantal divisors: d_k = D_k / D_{k-1} where D_k
/// is the gcd of all k x k minors.
fn invariant_factors_by_minors(a: &IntMatrix) -> Vec<Int> {
    let (m, n) = a.shape();
    let mut divisors = vec![IBig::from(1)];
    for k in 1..=m.min(n) {
        let mut g = IBig::from(0);
        for rs in subsets(m, k) {
            for cs in subsets(n, k) {
                let minor = a.select_rows(&rs).select_columns(&cs).det();
                g = gcd(&g, &minor);
            }
        }
        if g == IBig::from(0) {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
}

fn matrix_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c)
            .prop_map(move |v| IntMatrix::from_vec(r, c, v.into_iter().map(IBig::from).collect()))
    })
}

fn is_unit(x: &Int) -> bool {
    *x == IBig::from(1) || *x == IBig::from(-1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_decomposition_invariants(a in matrix_strategy(6, 9)) {
        let s = snf(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(is_unit(&s.u.det()));
        prop_assert!(is_unit(&s.v.det()));
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert_eq!(&s.d[(i, j)], &IBig::from(0));
                }
            }
        }
        for w in diag.windows(2) {
            prop_assert!(w[0] >= IBig::from(0));
            if w[0] == IBig::from(0) {
                prop_assert_eq!(&w[1], &IBig::from(0));
            } else {
                prop_assert_eq!(&w[1] % &w[0], IBig::from(0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn invariant_factors_match_minors(a in matrix_strategy(4, 6)) {
        prop_assert_eq!(invariant_factors(&a), invariant_factors_by_minors(&a));
    }

    #[test]
    fn kernel_is_saturated_basis(a in matrix_strategy(6, 5)) {
        let k = kernel_basis(&a);
        prop_assert!((&a * &k).is_zero());
        // rank-nullity: kernel dimension = cols - rank
        prop_assert_eq!(k.cols(), a.cols() - invariant_factors(&a).len());
        // saturated and independent: every invariant factor equals 1
        let f = invariant_factors(&k);
        prop_assert_eq!(f.len(), k.cols());
        prop_assert!(f.iter().all(|d| *d == IBig::from(1)));
    }

    #[test]
    fn solve_is_exact_or_certified_absent(a in matrix_strategy(5, 5), seed in prop::collection::vec(-6i64..=6, 5)) {
        let b: Vec<Int> = (0..a.rows()).map(|i| IBig::from(seed[i % seed.len()])).collect();
        match solve(&a, &b) {
            Some(x) => prop_assert_eq!(a.mul_vec(&x), b),
            None => {
                // SNF test: with U A V = D, A x = b solvable iff D y = U b solvable.
                let s = snf(&a);
                let ub = s.u.mul_vec(&b);
                let diag = s.diagonal();
                let solvable = ub.iter().enumerate().all(|(i, c)| {
                    if i < diag.len() && diag[i] != IBig::from(0) {
                        c % &diag[i] == IBig::from(0)
                    } else {
                        *c == IBig::from(0)
                    }
                });
                prop_assert!(!solvable);
            }
        }
    }

    #[test]
    fn kernel_vectors_are_combinations(a in matrix_strategy(4, 4), coeffs in prop::collection::vec(-3i64..=3, 4)) {
        let k = kernel_basis(&a);
        if k.cols() > 0 {
            let v: Vec<Int> = (0..k.cols()).map(|j| IBig::from(coeffs[j % coeffs.len()])).collect();
            let x = k.mul_vec(&v);
            prop_assert!(a.mul_vec(&x).iter().all(|e| *e == IBig::from(0)));
            prop_assert_eq!(solve(&k, &x), Some(v));
        }
    }

    #[test]
    fn cokernel_counts_rank(a in matrix_strategy(5, 7)) {
        let c = cokernel(&a);
        let r = invariant_factors(&a).len();
        prop_assert_eq!(c.free_rank, a.rows() - r);
        for w in c.torsion.windows(2) {
            prop_assert_eq!(&w[1] % &w[0], IBig::from(0));
        }
        prop_assert!(c.torsion.iter().all(|t| *t > IBig::from(1)));
    }
}

#[test]
fn growth_does_not_overflow() {
    // entries far beyond 64 bits survive elimination exactly
    let big = IBig::from(1u8) << 200;
    let a = IntMatrix::from_vec(
        2,
        2,
        vec![big.clone(), IBig::from(3), IBig::from(5), &big + IBig::from(1)],
    );
    let s = snf(&a);
    assert_eq!(&(&s.u * &a) * &s.v, s.d);
    assert_eq!(s.d[(0, 0)], IBig::from(1));
    assert_eq!(s.d[(1, 1)], a.det().abs_value());
}

trait AbsValue {
    fn abs_value(&self) -> Int;
}

impl AbsValue for Int {
    fn abs_value(&self) -> Int {
        if *self < IBig::from(0) {
            -self
        } else {
            self.clone()
        }
    }
}
