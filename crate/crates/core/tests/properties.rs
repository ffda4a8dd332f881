//! Randomized invariants, 50 cases each.

use dkforge::chain::{associator, homotopy_solve, tensor, ChainMap};
use dkforge::doldkan::{counit, gamma, normalize, unnormalized};
use dkforge::io;
use dkforge::random;
use dkforge::util::binomial;
use dkforge_linalg::{invariant_factors, snf};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 50,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn random_complexes_square_to_zero(seed in any::<u64>(), t in 0usize..=4) {
        let c = random::complex(&mut random::case_rng(seed, "complex", 0), t, 3);
        prop_assert!(c.validate().is_ok());
    }

    #[test]
    fn homotopy_solve_finds_planted_homotopies(seed in any::<u64>(), t in 1usize..=4) {
        let mut rng = random::case_rng(seed, "homotopy", 0);
        let c = random::complex(&mut rng, t, 2);
        let d = random::complex(&mut rng, t, 2);
        let (g, _) = random::null_homotopic(&mut rng, &c, &d);
        let (n, _) = random::null_homotopic(&mut rng, &c, &d);
        // f = g + dH + Hd
        let f = g.add(&n);
        let h = homotopy_solve(&f, &g);
        prop_assert!(h.is_some_and(|h| h.certifies(&f, &g)));
    }

    #[test]
    fn gamma_ranks_and_counit(seed in any::<u64>(), t in 0usize..=4) {
        let c = random::complex(&mut random::case_rng(seed, "gamma", 0), t, 3);
        let g = gamma(&c).unwrap();
        for n in 0..=t {
            let expected: usize = (0..=n).map(|k| binomial(n, k) * c.rank(k)).sum();
            prop_assert_eq!(g.group().rank(n), expected);
        }
        let (eps, _) = counit(&g).unwrap();
        prop_assert!(eps.is_degreewise_iso());
    }

    #[test]
    fn normalization_splits_the_chains(seed in any::<u64>()) {
        let a = random::simplicial_group(&mut random::case_rng(seed, "split", 0), 3, 2, 2);
        let na = normalize(&a).unwrap();
        let round = na.pi_map(&a).compose(&na.iota_map(&a));
        prop_assert!(round.same_components(&ChainMap::identity(&na.complex)));
        // the inclusion NA -> CA is a quasi-isomorphism
        prop_assert!(na.iota_map(&a).is_quasi_iso());
        prop_assert_eq!(na.complex.homology(), unnormalized(&a).homology());
    }

    #[test]
    fn tensor_is_associative(seed in any::<u64>(), t in 0usize..=3) {
        let mut rng = random::case_rng(seed, "assoc", 0);
        let (c, d, e) = (random::complex(&mut rng, t, 2), random::complex(&mut rng, t, 2), random::complex(&mut rng, t, 2));
        let a = associator(&c, &d, &e);
        prop_assert!(a.validate().is_ok());
        prop_assert!(a.is_degreewise_iso());
        prop_assert_eq!(a.target(), &tensor(&c, &tensor(&d, &e).0).0);
    }

    #[test]
    fn smith_form_reconstructs(seed in any::<u64>(), m in 0usize..=6, n in 0usize..=6) {
        let a = random::matrix(&mut random::case_rng(seed, "snf", 0), m, n, 9);
        let s = snf(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        let nonzero: Vec<_> = s.diagonal().into_iter().filter(|x| *x != 0.into()).collect();
        prop_assert_eq!(invariant_factors(&a), nonzero);
    }

    #[test]
    fn payloads_roundtrip(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, "io", 0);
        let c = random::complex(&mut rng, 3, 3);
        let text = io::canonical(&io::complex_value(&c));
        prop_assert_eq!(io::roundtrip(&text).unwrap(), text.clone());
        prop_assert_eq!(io::complex_from(&io::parse_value(&text).unwrap()).unwrap(), c);
        let a = random::simplicial_group(&mut rng, 2, 1, 1);
        let text = io::canonical(&io::simplicial_value(&a));
        prop_assert_eq!(io::roundtrip(&text).unwrap(), text);
    }
}
