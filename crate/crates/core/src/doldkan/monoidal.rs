//! `φ : ΓC⊗ΓD -> Γ(C⊗D)` and its comonoidal counterpart `∇̃`.

use dkforge_linalg::{solve, Int, IntMatrix};

use super::{gamma, gamma_map, moore_shuffle, normalize, normalized_aw, unit, Gamma};
use crate::chain::{tensor, tensor_maps, ChainComplex, ChainMap, TensorLayout};
use crate::error::{Error, Result};
use crate::simplicial::{self, kron_apply, standard_simplex, SimplicialMap, SimplicialOps, TensorPair};
use crate::util::{is_zero, monotone_sequences, unit_vector};

fn check_tensor(gc: &Gamma, gd: &Gamma, gcd: &Gamma) -> Result<TensorLayout> {
    let (tcd, layout) = crate::chain::tensor(gc.complex(), gd.complex());
    if gcd.complex() != &tcd {
        return Err(Error::Precondition("third argument must be Γ(C⊗D)".into()));
    }
    Ok(layout)
}

/// `φ` at level `n` applied to the columns of `v ∈ (ΓC)_n ⊗ (ΓD)_n`:
/// `φ(x⊗y)_S = Σ_p x_{S[0..=p]} ⊗ y_{S[p..]}`, the Alexander–Whitney split of `S`.
pub fn phi_apply(gc: &Gamma, gd: &Gamma, gcd: &Gamma, n: usize, v: &IntMatrix) -> Result<IntMatrix> {
    let layout = check_tensor(gc, gd, gcd)?;
    let (c, d) = (gc.complex(), gd.complex());
    let lvl = gcd.level(n);
    let mut out = IntMatrix::zeros(lvl.rank(), v.cols());
    for s in lvl.canonical_subsets() {
        let k = s.len() - 1;
        for p in 0..=k {
            let q = k - p;
            if c.rank(p) * d.rank(q) == 0 {
                continue;
            }
            let x = gc.level(n).value_rows(&s[..=p], c);
            let y = gd.level(n).value_rows(&s[p..], d);
            let blk = kron_apply(&x, &y, v);
            out.set_block(lvl.canonical_offset(s) + layout.block_offset(k, p), 0, &blk);
        }
    }
    Ok(out)
}

/// `φ_{C,D}` from its closed form; `gcd` must be `Γ(C⊗D)`.
pub fn gamma_monoidal(gc: &Gamma, gd: &Gamma, gcd: &Gamma) -> Result<SimplicialMap> {
    let layout = check_tensor(gc, gd, gcd)?;
    let (c, d) = (gc.complex(), gd.complex());
    let t = gcd.truncation();
    let comps = (0..=t)
        .map(|n| {
            let lvl = gcd.level(n);
            let cols = gc.level(n).rank() * gd.level(n).rank();
            let mut m = IntMatrix::zeros(lvl.rank(), cols);
            for s in lvl.canonical_subsets() {
                let k = s.len() - 1;
                for p in 0..=k {
                    if c.rank(p) * d.rank(k - p) == 0 {
                        continue;
                    }
                    let x = gc.level(n).value_rows(&s[..=p], c);
                    let y = gd.level(n).value_rows(&s[p..], d);
                    m.set_block(lvl.canonical_offset(s) + layout.block_offset(k, p), 0, &x.kron(&y));
                }
            }
            m
        })
        .collect();
    SimplicialMap::new_unchecked(
        simplicial::tensor(gc.group(), gd.group()),
        gcd.group().clone(),
        comps,
    )
}

/// `φ_{C,D} = Γ(ε⊗ε) ∘ Γ(AW) ∘ η_{ΓC⊗ΓD}` built literally from its factors.
///
/// This normalizes `ΓC⊗ΓD`, so it is meant for small inputs; it serves as the
/// reference for [`gamma_monoidal`].
pub fn gamma_monoidal_composite(gc: &Gamma, gd: &Gamma, gcd: &Gamma) -> Result<SimplicialMap> {
    check_tensor(gc, gd, gcd)?;
    let a = simplicial::tensor(gc.group(), gd.group());
    let na = normalize(&a)?;
    let (eps_c, nc) = super::counit(gc)?;
    let (eps_d, nd) = super::counit(gd)?;
    let aw = normalized_aw(gc.group(), gd.group(), &nc, &nd, &na);
    let g: ChainMap = tensor_maps(&eps_c, &eps_d).compose(&aw);
    let gna = gamma(&na.complex)?;
    let eta = unit(&a, &na, &gna);
    Ok(gamma_map(&g, &gna, gcd).compose(&eta))
}

/// First degree where `ε_{C⊗D} ∘ N(φ) ∘ ∇ ≠ ε_C ⊗ ε_D`, if any.
///
/// `N(φ) ∘ ∇` is evaluated on Moore chains, `π φ P ∇ (ι⊗ι)`, so no basis of
/// `N(ΓC⊗ΓD)` is needed.
pub fn counit_monoidal_defect(c: &ChainComplex, d: &ChainComplex) -> Result<Option<usize>> {
    let (gc, gd) = (gamma(c)?, gamma(d)?);
    let gcd = gamma(&tensor(c, d).0)?;
    let (eps_c, nc) = super::counit(&gc)?;
    let (eps_d, nd) = super::counit(&gd)?;
    let (eps_cd, ncd) = super::counit(&gcd)?;
    let shuffle = moore_shuffle(gc.group(), gd.group(), &nc, &nd);
    let rhs = tensor_maps(&eps_c, &eps_d);
    for n in 0..=gcd.truncation() {
        let image = phi_apply(&gc, &gd, &gcd, n, &shuffle[n])?;
        let lhs = eps_cd.component(n) * &(&ncd.pi[n] * &image);
        if lhs != *rhs.component(n) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Coefficients expressing the top simplex of `ZΔⁿ` through degeneracies of
/// Moore chains: `ι_n = Σ_σ σ^*(Σ_S c_{σ,S} π[δ_S])`.
///
/// Applying the same formula to the values `u_S` of an element of `ΓNA`
/// inverts the unit `η_A` without a basis of `NA`.
#[derive(Clone, Debug)]
pub struct ReconstructionPlan {
    pub level: usize,
    /// Surjections `σ : [n] -> [k]` with the subsets `S` (of size `k+1`) and coefficients.
    pub terms: Vec<(Vec<usize>, Vec<(Vec<usize>, Int)>)>,
}

impl ReconstructionPlan {
    pub fn new(n: usize) -> Result<Self> {
        let delta = standard_simplex(n, n);
        let nd = normalize(&delta)?;
        let surjections: Vec<Vec<usize>> = (0..=n)
            .flat_map(|k| {
                monotone_sequences(n + 1, k)
                    .into_iter()
                    .filter(move |s| s[0] == 0 && s[n] == k && s.windows(2).all(|w| w[1] - w[0] <= 1))
            })
            .collect();
        let mut blocks = Vec::new();
        for sigma in &surjections {
            let k = sigma[n];
            blocks.push(&delta.operator(sigma, k) * &nd.iota[k]);
        }
        let m = IntMatrix::hstack_all(delta.rank(n), &blocks);
        let top: Vec<usize> = (0..=n).collect();
        let top_index = monotone_sequences(n + 1, n).iter().position(|s| *s == top).expect("top simplex");
        let y = solve(&m, &unit_vector(delta.rank(n), top_index)).ok_or_else(|| Error::Decomposition {
            level: n,
            reason: "top simplex is not a sum of degenerated Moore chains".into(),
        })?;
        let mut terms = Vec::new();
        let mut offset = 0;
        for sigma in surjections {
            let k = sigma[n];
            let r = nd.iota[k].cols();
            let chain = nd.iota[k].mul_vec(&y[offset..offset + r]);
            offset += r;
            let coeffs: Vec<(Vec<usize>, Int)> = monotone_sequences(k + 1, n)
                .into_iter()
                .zip(chain)
                .filter(|(s, c)| !is_zero(c) && s.windows(2).all(|w| w[0] < w[1]))
                .collect();
            if !coeffs.is_empty() {
                terms.push((sigma, coeffs));
            }
        }
        Ok(ReconstructionPlan { level: n, terms })
    }
}

/// `η^{-1}(u) = Σ_σ σ^*(Σ_S c_{σ,S} u_S)`; `values(S)` returns the Moore chains
/// `ι(u_S)` for a batch of elements as matrix columns.
pub fn reconstruct_from_moore<A: SimplicialOps + ?Sized>(
    a: &A,
    plan: &ReconstructionPlan,
    batch: usize,
    values: &mut dyn FnMut(&[usize]) -> IntMatrix,
) -> IntMatrix {
    let n = plan.level;
    let mut out = IntMatrix::zeros(a.level_rank(n), batch);
    for (sigma, coeffs) in &plan.terms {
        let k = sigma[n];
        let mut acc = IntMatrix::zeros(a.level_rank(k), batch);
        for (s, c) in coeffs {
            acc = &acc + &values(s).scale(c);
        }
        out = &out + &a.apply_operator(sigma, k, &acc);
    }
    out
}

/// `∇̃_{C,D} = η^{-1} ∘ Γ(∇) ∘ Γ(ε^{-1}⊗ε^{-1}) : Γ(C⊗D) -> ΓC⊗ΓD`.
pub fn gamma_comonoidal(gc: &Gamma, gd: &Gamma, gcd: &Gamma) -> Result<SimplicialMap> {
    check_tensor(gc, gd, gcd)?;
    let (eps_c, nc) = super::counit(gc)?;
    let (eps_d, nd) = super::counit(gd)?;
    let inv = tensor_maps(
        &eps_c.inverse().ok_or_else(|| Error::Precondition("counit not invertible".into()))?,
        &eps_d.inverse().ok_or_else(|| Error::Precondition("counit not invertible".into()))?,
    );
    let shuffle = moore_shuffle(gc.group(), gd.group(), &nc, &nd);
    let pair = TensorPair {
        left: gc.group(),
        right: gd.group(),
    };
    let cd = gcd.complex();
    let t = gcd.truncation();
    let mut comps = Vec::with_capacity(t + 1);
    for n in 0..=t {
        let plan = ReconstructionPlan::new(n)?;
        let lvl = gcd.level(n);
        let mut values = |s: &[usize]| {
            let k = s.len() - 1;
            let z = lvl.value_rows(s, cd);
            &shuffle[k] * &(inv.component(k) * &z)
        };
        comps.push(reconstruct_from_moore(&pair, &plan, lvl.rank(), &mut values));
    }
    SimplicialMap::new_unchecked(
        gcd.group().clone(),
        simplicial::tensor(gc.group(), gd.group()),
        comps,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainComplex;

    fn small() -> (ChainComplex, ChainComplex) {
        let c = ChainComplex::new(
            vec![1, 1, 0],
            vec![IntMatrix::from_rows_i64(1, &[vec![2]]), IntMatrix::zeros(1, 0)],
        )
        .unwrap();
        let d = ChainComplex::new(
            vec![0, 1, 1],
            vec![IntMatrix::zeros(0, 1), IntMatrix::from_rows_i64(1, &[vec![0]])],
        )
        .unwrap();
        (c, d)
    }

    #[test]
    fn closed_form_matches_the_composite() {
        let (c, d) = small();
        let (gc, gd) = (gamma(&c).unwrap(), gamma(&d).unwrap());
        let gcd = gamma(&crate::chain::tensor(&c, &d).0).unwrap();
        let phi = gamma_monoidal(&gc, &gd, &gcd).unwrap();
        phi.validate().unwrap();
        let composite = gamma_monoidal_composite(&gc, &gd, &gcd).unwrap();
        assert!(phi.same_components(&composite));
        for n in 0..=2 {
            let v = IntMatrix::identity(phi.source().rank(n));
            assert_eq!(phi_apply(&gc, &gd, &gcd, n, &v).unwrap(), *phi.component(n));
        }
    }

    #[test]
    fn reconstruction_inverts_the_unit() {
        let a = standard_simplex(2, 3).direct_sum(&simplicial::SimplicialAbGroup::constant(1, 3));
        let na = normalize(&a).unwrap();
        let gna = gamma(&na.complex).unwrap();
        let eta = unit(&a, &na, &gna);
        for n in 0..=3 {
            let plan = ReconstructionPlan::new(n).unwrap();
            let lvl = gna.level(n);
            let e = eta.component(n);
            let mut values = |s: &[usize]| {
                let k = s.len() - 1;
                let u = &lvl.value_rows(s, &na.complex) * e;
                &na.iota[k] * &u
            };
            let back = reconstruct_from_moore(&a, &plan, a.rank(n), &mut values);
            assert!(back.is_identity(), "level {n}");
        }
    }

    #[test]
    fn counit_is_monoidal() {
        let (c, d) = small();
        assert_eq!(counit_monoidal_defect(&c, &d).unwrap(), None);
        let s = ChainComplex::sphere(1, 3);
        assert_eq!(counit_monoidal_defect(&s, &s).unwrap(), None);
    }

    #[test]
    fn comonoidal_map_splits_phi() {
        let (c, d) = small();
        let (gc, gd) = (gamma(&c).unwrap(), gamma(&d).unwrap());
        let gcd = gamma(&crate::chain::tensor(&c, &d).0).unwrap();
        let nt = gamma_comonoidal(&gc, &gd, &gcd).unwrap();
        nt.validate().unwrap();
        let phi = gamma_monoidal(&gc, &gd, &gcd).unwrap();
        assert!(phi.compose(&nt).same_components(&SimplicialMap::identity(gcd.group())));
    }
}
