use super::ChainMap;
use crate::util::{is_split_injective, is_surjective};

/// The projective model structure on connective complexes, evaluated on one map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelPredicates {
    /// Surjective in every positive degree.
    pub is_fibration: bool,
    /// Injective with free cokernel in every degree.
    pub is_cofibration: bool,
    pub is_weak_equivalence: bool,
}

pub fn model_predicates(f: &ChainMap) -> ModelPredicates {
    let t = f.truncation();
    ModelPredicates {
        is_fibration: (1..=t).all(|n| is_surjective(f.component(n))),
        is_cofibration: (0..=t).all(|n| is_split_injective(f.component(n))),
        is_weak_equivalence: f.is_quasi_iso(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainComplex;
    use crate::util::int;

    #[test]
    fn canonical_examples() {
        let z = ChainComplex::sphere(0, 3);
        let zero = ChainComplex::zero(3);
        let p = model_predicates(&ChainMap::zero(&z, &zero));
        assert!(p.is_fibration);
        assert!(!p.is_cofibration);
        assert!(!p.is_weak_equivalence);

        let zm = ChainComplex::sphere(2, 3);
        let p = model_predicates(&ChainMap::zero(&zero, &zm));
        assert!(p.is_cofibration);
        assert!(!p.is_fibration);

        let two = ChainMap::identity(&z).scale(&int(2));
        let p = model_predicates(&two);
        assert!(!p.is_cofibration);
        assert!(p.is_fibration);
        assert!(!p.is_weak_equivalence);
    }
}
