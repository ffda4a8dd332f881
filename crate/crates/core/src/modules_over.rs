//! Right modules over DGAs and simplicial rings, relative tensor products,
//! scalar restriction and extension, and the map `∇^A`.
//!
//! A left module is a right module over the opposite ring; for DGAs the Koszul
//! sign `r·m = (-1)^{|r||m|} m∘r` is applied only in [`DGModule::via`] and in
//! the relations of [`relative_tensor_dg`].

use dkforge_linalg::{snf, Int, IntMatrix};

use crate::algebra::{normalize_ring_with, DGAlgebra, DGAlgebraMap, SimplicialRing};
use crate::chain::{
    tensor, tensor_maps, ChainComplex, ChainMap, FreeQuotient, QuotientComplex, QuotientMap, TensorLayout,
};
use crate::doldkan::{moore_shuffle, normalize, Normalization};
use crate::error::{Error, Result};
use crate::simplicial::{self, SimplicialAbGroup};
use crate::util::{one, sign, swap_matrix, zero};

fn axiom(structure: &'static str, law: &'static str, location: String) -> Error {
    Error::Axiom {
        structure,
        law,
        location,
    }
}

/// A right DG module: `act[p][q] : M_p⊗R_q -> M_{p+q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGModule {
    algebra: DGAlgebra,
    complex: ChainComplex,
    action: Vec<Vec<IntMatrix>>,
}

impl DGModule {
    pub fn new(algebra: DGAlgebra, complex: ChainComplex, action: Vec<Vec<IntMatrix>>) -> Result<Self> {
        let m = Self::new_unchecked(algebra, complex, action)?;
        m.validate()?;
        Ok(m)
    }

    pub fn new_unchecked(algebra: DGAlgebra, complex: ChainComplex, action: Vec<Vec<IntMatrix>>) -> Result<Self> {
        let t = complex.truncation();
        if algebra.truncation() != t {
            return Err(Error::Shape("module and algebra must share the truncation".into()));
        }
        let r = algebra.complex();
        if action.len() != t + 1 || action.iter().enumerate().any(|(p, row)| row.len() != t + 1 - p) {
            return Err(Error::Shape("action needs one matrix per p + q ≤ T".into()));
        }
        for (p, row) in action.iter().enumerate() {
            for (q, a) in row.iter().enumerate() {
                if a.shape() != (complex.rank(p + q), complex.rank(p) * r.rank(q)) {
                    return Err(Error::Shape(format!("action ({p},{q}) has wrong shape")));
                }
            }
        }
        Ok(DGModule {
            algebra,
            complex,
            action,
        })
    }

    /// Leibniz rule, associativity over `R` and unitality.
    pub fn validate(&self) -> Result<()> {
        let (m, r) = (&self.complex, self.algebra.complex());
        let t = m.truncation();
        for n in 1..=t {
            for p in 0..=n {
                let q = n - p;
                let lhs = m.d(n) * &self.action[p][q];
                let mut rhs = IntMatrix::zeros(m.rank(n - 1), m.rank(p) * r.rank(q));
                if p >= 1 {
                    rhs = &rhs + &(&self.action[p - 1][q] * &m.d(p).kron(&IntMatrix::identity(r.rank(q))));
                }
                if q >= 1 {
                    let term = &self.action[p][q - 1] * &IntMatrix::identity(m.rank(p)).kron(r.d(q));
                    rhs = &rhs + &term.scale(&sign(p));
                }
                if lhs != rhs {
                    return Err(axiom("DG module", "Leibniz rule", format!("p={p}, q={q}")));
                }
            }
        }
        for p in 0..=t {
            for q in 0..=t - p {
                for s in 0..=t - p - q {
                    let left = &self.action[p + q][s] * &self.action[p][q].kron(&IntMatrix::identity(r.rank(s)));
                    let right =
                        &self.action[p][q + s] * &IntMatrix::identity(m.rank(p)).kron(self.algebra.mult(q, s));
                    if left != right {
                        return Err(axiom("DG module", "associativity", format!("degrees ({p},{q},{s})")));
                    }
                }
            }
        }
        let u = IntMatrix::column_vector(self.algebra.unit());
        for p in 0..=t {
            if !(&self.action[p][0] * &IntMatrix::identity(m.rank(p)).kron(&u)).is_identity() {
                return Err(axiom("DG module", "unit", format!("degree {p}")));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &DGAlgebra {
        &self.algebra
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn truncation(&self) -> usize {
        self.complex.truncation()
    }

    pub fn action(&self, p: usize, q: usize) -> &IntMatrix {
        &self.action[p][q]
    }

    /// `R` over itself.
    pub fn regular(r: &DGAlgebra) -> DGModule {
        let t = r.truncation();
        let action = (0..=t).map(|p| (0..=t - p).map(|q| r.mult(p, q).clone()).collect()).collect();
        DGModule {
            algebra: r.clone(),
            complex: r.complex().clone(),
            action,
        }
    }

    /// The free module `X⊗R`, `(x⊗r)·s = x⊗rs`.
    pub fn free(x: &ChainComplex, r: &DGAlgebra) -> DGModule {
        let t = x.truncation().min(r.truncation());
        let (x, r) = (x.truncate(t), r.truncate(t));
        let rc = r.complex();
        let (xr, layout) = tensor(&x, rc);
        let action = (0..=t)
            .map(|p| {
                (0..=t - p)
                    .map(|q| {
                        let mut m = IntMatrix::zeros(xr.rank(p + q), xr.rank(p) * rc.rank(q));
                        for a in 0..=p {
                            let b = p - a;
                            if x.rank(a) * rc.rank(b) * rc.rank(q) == 0 {
                                continue;
                            }
                            let blk = IntMatrix::identity(x.rank(a)).kron(r.mult(b, q));
                            m.set_block(layout.block_offset(p + q, a), layout.block_offset(p, a) * rc.rank(q), &blk);
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        DGModule {
            algebra: r.clone(),
            complex: xr,
            action,
        }
    }

    /// `S` as a left `R`-module through `f`, i.e. a right `R^op`-module:
    /// `s∘r = (-1)^{|s||r|} f(r)·s`.
    pub fn via(f: &DGAlgebraMap) -> DGModule {
        let (r, s) = (f.source(), f.target());
        let t = r.truncation();
        let (rc, sc) = (r.complex(), s.complex());
        let action = (0..=t)
            .map(|p| {
                (0..=t - p)
                    .map(|q| {
                        let swap = swap_matrix(sc.rank(p), rc.rank(q));
                        let lift = f.map().component(q).kron(&IntMatrix::identity(sc.rank(p)));
                        (&(s.mult(q, p) * &lift) * &swap).scale(&sign(p * q))
                    })
                    .collect()
            })
            .collect();
        DGModule {
            algebra: r.opposite(),
            complex: sc.clone(),
            action,
        }
    }
}

/// `M ⊗_R N` for a right `R`-module `M` and a right `R^op`-module `N`, presented
/// as the cokernel of `m⊗r⊗n ↦ mr⊗n - m⊗rn` on `(M⊗R)⊗N`.
pub fn relative_tensor_dg(m: &DGModule, n: &DGModule) -> Result<QuotientComplex> {
    let r = m.algebra();
    if n.algebra() != &r.opposite() {
        return Err(Error::Precondition("second module must be a module over the opposite algebra".into()));
    }
    let (mc, rc, nc) = (m.complex(), r.complex(), n.complex());
    let (mr, l_mr) = tensor(mc, rc);
    let (src, l_src) = tensor(&mr, nc);
    let (gens, l_mn) = tensor(mc, nc);
    let t = gens.truncation();
    let relation_map = (0..=t)
        .map(|deg| {
            let mut rel = IntMatrix::zeros(l_mn.rank(deg), l_src.rank(deg));
            for p in 0..=deg {
                for q in 0..=deg - p {
                    let c = deg - p - q;
                    let (rm, rr, rn) = (mc.rank(p), rc.rank(q), nc.rank(c));
                    if rm * rr * rn == 0 {
                        continue;
                    }
                    let col = l_src.block_offset(deg, p + q) + l_mr.block_offset(p + q, p) * rn;
                    let right = m.action(p, q).kron(&IntMatrix::identity(rn));
                    rel.add_block(l_mn.block_offset(deg, p + q), col, &right);
                    let left = (n.action(c, q) * &swap_matrix(rr, rn)).scale(&sign(q * c));
                    let left = IntMatrix::identity(rm).kron(&left);
                    rel.add_block(l_mn.block_offset(deg, p), col, &-&left);
                }
            }
            rel
        })
        .collect();
    QuotientComplex::new(gens, src, relation_map)
}

pub fn restrict_scalars(f: &DGAlgebraMap, m: &DGModule) -> Result<DGModule> {
    if m.algebra() != f.target() {
        return Err(Error::Precondition("module is not over the target algebra".into()));
    }
    let t = m.truncation();
    let action = (0..=t)
        .map(|p| {
            (0..=t - p)
                .map(|q| m.action(p, q) * &IntMatrix::identity(m.complex().rank(p)).kron(f.map().component(q)))
                .collect()
        })
        .collect();
    DGModule::new(f.source().clone(), m.complex().clone(), action)
}

/// `M ⊗_R S` with its right `S`-action, and the basis it is written in.
#[derive(Clone, Debug)]
pub struct Extension {
    pub module: DGModule,
    /// `M⊗S -> M⊗_R S`.
    pub quotient: FreeQuotient,
}

pub fn extend_scalars(f: &DGAlgebraMap, m: &DGModule) -> Result<Extension> {
    if m.algebra() != f.source() {
        return Err(Error::Precondition("module is not over the source algebra".into()));
    }
    let q = relative_tensor_dg(m, &DGModule::via(f))?;
    let fq = q.to_free()?;
    let on_generators = DGModule::free(m.complex(), f.target());
    let s = f.target().complex();
    let t = m.truncation();
    let action = (0..=t)
        .map(|p| {
            (0..=t - p)
                .map(|k| {
                    let lifted = fq.sections[p].kron(&IntMatrix::identity(s.rank(k)));
                    &(&fq.projections[p + k] * on_generators.action(p, k)) * &lifted
                })
                .collect()
        })
        .collect();
    let module = DGModule::new(f.target().clone(), fq.complex.clone(), action)?;
    Ok(Extension { module, quotient: fq })
}

/// `M -> M ⊗_R S`, `m ↦ m⊗1`.
pub fn extension_unit(f: &DGAlgebraMap, m: &DGModule, ext: &Extension) -> ChainMap {
    let s = f.target();
    let layout = TensorLayout::of(m.complex(), s.complex());
    let comps = (0..=m.truncation())
        .map(|n| {
            let mut emb = IntMatrix::zeros(layout.rank(n), m.complex().rank(n));
            let one_col = IntMatrix::column_vector(s.unit());
            if m.complex().rank(n) > 0 {
                emb.set_block(layout.block_offset(n, n), 0, &IntMatrix::identity(m.complex().rank(n)).kron(&one_col));
            }
            &ext.quotient.projections[n] * &emb
        })
        .collect();
    ChainMap::new_unchecked(m.complex().clone(), ext.module.complex().clone(), comps).expect("unit shapes")
}

/// `(restricted N) ⊗_R S -> N`, `n⊗s ↦ n·s`.
pub fn restriction_counit(n: &DGModule, ext: &Extension) -> ChainMap {
    let s = n.algebra().complex();
    let layout = TensorLayout::of(n.complex(), s);
    let comps = (0..=n.truncation())
        .map(|deg| {
            let mut act = IntMatrix::zeros(n.complex().rank(deg), layout.rank(deg));
            for p in 0..=deg {
                if n.complex().rank(p) * s.rank(deg - p) > 0 {
                    act.set_block(0, layout.block_offset(deg, p), n.action(p, deg - p));
                }
            }
            &act * &ext.quotient.sections[deg]
        })
        .collect();
    ChainMap::new_unchecked(ext.module.complex().clone(), n.complex().clone(), comps).expect("counit shapes")
}

/// `g ⊗_R S` on the chosen bases.
fn extend_map(g: &ChainMap, from: &Extension, to: &Extension, s: &ChainComplex) -> ChainMap {
    let on_generators = tensor_maps(g, &ChainMap::identity(s));
    let comps = (0..=g.truncation())
        .map(|n| &(&to.quotient.projections[n] * on_generators.component(n)) * &from.quotient.sections[n])
        .collect();
    ChainMap::new_unchecked(from.module.complex().clone(), to.module.complex().clone(), comps)
        .expect("extended map shapes")
}

/// Both triangle identities of extension ⊣ restriction, at `M` over `R` and `N` over `S`.
pub fn triangle_identities_hold(f: &DGAlgebraMap, m: &DGModule, n: &DGModule) -> Result<bool> {
    let s = f.target().complex();
    // N -> res ext res N -> N
    let res_n = restrict_scalars(f, n)?;
    let ext_res_n = extend_scalars(f, &res_n)?;
    let first = restriction_counit(n, &ext_res_n).compose(&extension_unit(f, &res_n, &ext_res_n));
    // ext M -> ext res ext M -> ext M
    let ext_m = extend_scalars(f, m)?;
    let res_ext_m = restrict_scalars(f, &ext_m.module)?;
    let ext_res_ext_m = extend_scalars(f, &res_ext_m)?;
    let unit_m = extension_unit(f, m, &ext_m);
    let second = restriction_counit(&ext_m.module, &ext_res_ext_m).compose(&extend_map(&unit_m, &ext_m, &ext_res_ext_m, s));
    Ok(first.same_components(&ChainMap::identity(n.complex()))
        && second.same_components(&ChainMap::identity(ext_m.module.complex())))
}

/// For a quasi-isomorphism `f`, checks that `M -> M⊗_R S` is a quasi-isomorphism for each sample.
pub fn quillen_invariance_spot_check(f: &DGAlgebraMap, samples: &[DGModule]) -> Result<Vec<bool>> {
    if !f.map().is_quasi_iso() {
        return Err(Error::Precondition("f is not a quasi-isomorphism".into()));
    }
    samples
        .iter()
        .map(|m| {
            let ext = extend_scalars(f, m)?;
            Ok(extension_unit(f, m, &ext).is_quasi_iso())
        })
        .collect()
}

/// The augmentation `R -> Z` onto degree 0, for `R` with `R_0 = Z` spanned by the unit.
pub fn augmentation(r: &DGAlgebra) -> Result<DGAlgebraMap> {
    let c = r.complex();
    if c.rank(0) != 1 || r.unit() != [one()] {
        return Err(Error::Precondition("augmentation needs R_0 = Z·1".into()));
    }
    let z = DGAlgebra::integers(r.truncation());
    let comps = (0..=c.truncation())
        .map(|n| {
            let mut m = IntMatrix::zeros(z.complex().rank(n), c.rank(n));
            if n == 0 {
                m[(0, 0)] = one();
            }
            m
        })
        .collect();
    let map = ChainMap::new(c.clone(), z.complex().clone(), comps)?;
    DGAlgebraMap::new(r.clone(), z, map)
}

/// A right simplicial module: levelwise `M_n⊗A_n -> M_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialModule {
    ring: SimplicialRing,
    group: SimplicialAbGroup,
    action: Vec<IntMatrix>,
}

impl SimplicialModule {
    pub fn new(ring: SimplicialRing, group: SimplicialAbGroup, action: Vec<IntMatrix>) -> Result<Self> {
        let t = group.truncation();
        if ring.truncation() != t || action.len() != t + 1 {
            return Err(Error::Shape("module and ring must share the truncation".into()));
        }
        for (n, a) in action.iter().enumerate() {
            if a.shape() != (group.rank(n), group.rank(n) * ring.group().rank(n)) {
                return Err(Error::Shape(format!("action at level {n} has wrong shape")));
            }
        }
        let m = SimplicialModule { ring, group, action };
        m.validate()?;
        Ok(m)
    }

    /// Levelwise module axioms; faces and degeneracies are equivariant.
    pub fn validate(&self) -> Result<()> {
        let (m, a) = (&self.group, self.ring.group());
        let t = m.truncation();
        for n in 0..=t {
            let act = &self.action[n];
            let ia = IntMatrix::identity(a.rank(n));
            let left = act * &act.kron(&ia);
            let right = act * &IntMatrix::identity(m.rank(n)).kron(self.ring.mult(n));
            if left != right {
                return Err(axiom("simplicial module", "associativity", format!("level {n}")));
            }
            let u = IntMatrix::column_vector(&self.ring.unit_at(n));
            if !(act * &IntMatrix::identity(m.rank(n)).kron(&u)).is_identity() {
                return Err(axiom("simplicial module", "unit", format!("level {n}")));
            }
            for i in 0..=n {
                if n >= 1 && m.face(n, i) * act != &self.action[n - 1] * &m.face(n, i).kron(a.face(n, i)) {
                    return Err(axiom("simplicial module", "face is equivariant", format!("d_{i} at level {n}")));
                }
                if n < t && m.degen(n, i) * act != &self.action[n + 1] * &m.degen(n, i).kron(a.degen(n, i)) {
                    return Err(axiom(
                        "simplicial module",
                        "degeneracy is equivariant",
                        format!("s_{i} at level {n}"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &SimplicialRing {
        &self.ring
    }

    pub fn group(&self) -> &SimplicialAbGroup {
        &self.group
    }

    pub fn action(&self, n: usize) -> &IntMatrix {
        &self.action[n]
    }

    pub fn regular(a: &SimplicialRing) -> SimplicialModule {
        SimplicialModule {
            ring: a.clone(),
            group: a.group().clone(),
            action: (0..=a.truncation()).map(|n| a.mult(n).clone()).collect(),
        }
    }

    /// `X⊗A`, `(x⊗a)·b = x⊗ab`.
    pub fn free(x: &SimplicialAbGroup, a: &SimplicialRing) -> SimplicialModule {
        SimplicialModule {
            ring: a.clone(),
            group: simplicial::tensor(x, a.group()),
            action: (0..=a.truncation())
                .map(|n| IntMatrix::identity(x.rank(n)).kron(a.mult(n)))
                .collect(),
        }
    }
}

/// `M ⊗_A N` levelwise: its torsion-free part and the torsion it drops.
#[derive(Clone, Debug)]
pub struct SimplicialTensor {
    pub group: SimplicialAbGroup,
    /// `M_n⊗N_n -> group_n`.
    pub projections: Vec<IntMatrix>,
    /// Invariant factors above 1, per level.
    pub torsion: Vec<Vec<Int>>,
}

impl SimplicialTensor {
    pub fn is_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }
}

/// `M ⊗_A N` levelwise, for right `A`- and right `A^op`-modules.
///
/// Faces and degeneracies carry relations to relations and so preserve their
/// saturation; the torsion-free part is therefore again a simplicial group.
pub fn relative_tensor_simplicial(m: &SimplicialModule, n: &SimplicialModule) -> Result<SimplicialTensor> {
    if n.ring() != &m.ring().opposite() {
        return Err(Error::Precondition("second module must be over the opposite ring".into()));
    }
    let (mg, ng, ag) = (m.group(), n.group(), m.ring().group());
    let t = mg.truncation();
    let mut proj = Vec::with_capacity(t + 1);
    let mut sect = Vec::with_capacity(t + 1);
    let mut torsion = Vec::with_capacity(t + 1);
    for k in 0..=t {
        let (rm, ra, rn) = (mg.rank(k), ag.rank(k), ng.rank(k));
        let right = m.action(k).kron(&IntMatrix::identity(rn));
        let left = IntMatrix::identity(rm).kron(&(n.action(k) * &swap_matrix(ra, rn)));
        let rel = &right - &left;
        let s = snf(&rel);
        torsion.push(s.diagonal().into_iter().filter(|d| *d != one() && *d != zero()).collect());
        let rank = s.rank();
        let rows = rel.rows();
        let u_inv = dkforge_linalg::inverse(&s.u).expect("unimodular");
        proj.push(s.u.block(rank, 0, rows - rank, rows));
        sect.push(u_inv.block(0, rank, rows, rows - rank));
    }
    let ranks = proj.iter().map(IntMatrix::rows).collect();
    let faces = (0..=t)
        .map(|k| {
            if k == 0 {
                return Vec::new();
            }
            (0..=k)
                .map(|i| &(&proj[k - 1] * &mg.face(k, i).kron(ng.face(k, i))) * &sect[k])
                .collect()
        })
        .collect();
    let degens = (0..t)
        .map(|k| {
            (0..=k)
                .map(|i| &(&proj[k + 1] * &mg.degen(k, i).kron(ng.degen(k, i))) * &sect[k])
                .collect()
        })
        .collect();
    Ok(SimplicialTensor {
        group: SimplicialAbGroup::new(ranks, faces, degens)?,
        projections: proj,
        torsion,
    })
}

/// `NM` over `NA` with action `N(act) ∘ ∇`, in the given normalizations.
pub fn normalize_module_with(
    m: &SimplicialModule,
    nm: &Normalization,
    na: &Normalization,
    na_ring: &DGAlgebra,
) -> Result<DGModule> {
    let (mg, ag) = (m.group(), m.ring().group());
    let t = mg.truncation();
    let shuffle = moore_shuffle(mg, ag, nm, na);
    let layout = TensorLayout::of(&nm.complex, &na.complex);
    let action = (0..=t)
        .map(|p| {
            (0..=t - p)
                .map(|q| {
                    let n = p + q;
                    let blk = shuffle[n].block(
                        0,
                        layout.block_offset(n, p),
                        mg.rank(n) * ag.rank(n),
                        nm.complex.rank(p) * na.complex.rank(q),
                    );
                    &nm.pi[n] * &(m.action(n) * &blk)
                })
                .collect()
        })
        .collect();
    DGModule::new(na_ring.clone(), nm.complex.clone(), action)
}

pub fn normalize_module(m: &SimplicialModule) -> Result<DGModule> {
    let na = normalize(m.ring().group())?;
    let ring = normalize_ring_with(m.ring(), &na)?;
    normalize_module_with(m, &normalize(m.group())?, &na, &ring)
}

/// `∇^A : NM ⊗_{NA} NN -> N(M ⊗_A N)` with the data of its defining square.
#[derive(Clone, Debug)]
pub struct NablaA {
    pub source: QuotientComplex,
    pub target: ChainComplex,
    /// `N(q) ∘ ∇` on `NM⊗NN`; it kills the relations, which is what lets it descend.
    pub on_generators: Vec<IntMatrix>,
    pub map: QuotientMap,
}

impl NablaA {
    /// With a basis of the source quotient, checks `∇^A ∘ proj = N(q) ∘ ∇` exactly,
    /// where `∇^A` is read off through a section.
    pub fn square_commutes(&self) -> Result<bool> {
        let fq = self.source.to_free()?;
        Ok(self.on_generators.iter().enumerate().all(|(n, g)| {
            let induced = g * &fq.sections[n];
            &induced * &fq.projections[n] == *g
        }))
    }

    /// Two different lifts through the quotient give the same value.
    pub fn lift_independent(&self) -> Result<bool> {
        let fq = self.source.to_free()?;
        Ok(self.on_generators.iter().enumerate().all(|(n, g)| {
            let rel = self.source.relation_map(n);
            let shifted = &fq.sections[n] + &(rel * &IntMatrix::from_fn(rel.cols(), fq.sections[n].cols(), |i, j| {
                crate::util::int(((i + 2 * j) % 3) as i64 - 1)
            }));
            g * &fq.sections[n] == g * &shifted
        }))
    }
}

pub fn nabla_a(m: &SimplicialModule, n: &SimplicialModule) -> Result<NablaA> {
    let a = m.ring();
    let na = normalize(a.group())?;
    let ring = normalize_ring_with(a, &na)?;
    let ring_op = normalize_ring_with(&a.opposite(), &na)?;
    if ring_op != ring.opposite() {
        return Err(Error::Descent("N(A^op) differs from N(A)^op".into()));
    }
    let (nm, nn) = (normalize(m.group())?, normalize(n.group())?);
    let dm = normalize_module_with(m, &nm, &na, &ring)?;
    let dn = normalize_module_with(n, &nn, &na, &ring_op)?;
    let source = relative_tensor_dg(&dm, &dn)?;
    let st = relative_tensor_simplicial(m, n)?;
    if let Some(degree) = st.torsion.iter().position(|t| !t.is_empty()) {
        return Err(Error::Torsion { degree });
    }
    let (quotient, proj) = (st.group, st.projections);
    let nq = normalize(&quotient)?;
    let shuffle = moore_shuffle(m.group(), n.group(), &nm, &nn);
    let on_generators: Vec<IntMatrix> = shuffle
        .iter()
        .enumerate()
        .map(|(k, s)| &nq.pi[k] * &(&proj[k] * s))
        .collect();
    let map = QuotientMap::new(source.clone(), QuotientComplex::free(nq.complex.clone()), on_generators.clone())
        .map_err(|e| match e {
            Error::Precondition(msg) => Error::Descent(msg),
            other => other,
        })?;
    Ok(NablaA {
        source,
        target: nq.complex,
        on_generators,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{gamma_ring, named_algebras};
    use crate::simplicial::standard_simplex;

    #[test]
    fn regular_and_free_modules_validate() {
        for (name, r) in named_algebras(2) {
            DGModule::regular(&r).validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            DGModule::regular(&r.opposite()).validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            let x = ChainComplex::new(vec![1, 1, 0], vec![IntMatrix::from_rows_i64(1, &[vec![3]]), IntMatrix::zeros(1, 0)])
                .unwrap();
            DGModule::free(&x, &r).validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            DGModule::via(&DGAlgebraMap::identity(&r)).validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn tensoring_with_the_ring_is_trivial() {
        let r = DGAlgebra::xy_words(2);
        let m = DGModule::free(&ChainComplex::sphere(1, 2), &r);
        let q = relative_tensor_dg(&m, &DGModule::regular(&r.opposite())).unwrap();
        let fq = q.to_free().unwrap();
        assert_eq!(fq.complex.ranks(), m.complex().ranks());
        let f = DGAlgebraMap::identity(&r);
        let ext = extend_scalars(&f, &m).unwrap();
        assert!(extension_unit(&f, &m, &ext).is_degreewise_iso());
    }

    #[test]
    fn over_the_integers_the_relative_tensor_is_plain() {
        let z = DGAlgebra::integers(3);
        let x = ChainComplex::concentrated(&[1, 2, 0, 1]);
        let y = ChainComplex::sphere(1, 3);
        let m = DGModule::free(&x, &z);
        let n = DGModule::free(&y, &z.opposite());
        let q = relative_tensor_dg(&m, &n).unwrap();
        assert_eq!(q.to_free().unwrap().complex.ranks(), tensor(&x, &y).0.ranks());
    }

    #[test]
    fn free_modules_tensor_down() {
        // (X⊗R) ⊗_R N ≅ X⊗N
        let r = DGAlgebra::square_zero(&ChainComplex::sphere(1, 3));
        let x = ChainComplex::concentrated(&[1, 1, 0, 0]);
        let m = DGModule::free(&x, &r);
        let n = DGModule::regular(&r.opposite());
        let q = relative_tensor_dg(&m, &n).unwrap();
        assert_eq!(q.to_free().unwrap().complex.ranks(), tensor(&x, r.complex()).0.ranks());
    }

    #[test]
    fn identity_extension_and_restriction() {
        let r = DGAlgebra::xy_words(1);
        let f = DGAlgebraMap::identity(&r);
        let m = DGModule::regular(&r);
        assert_eq!(restrict_scalars(&f, &m).unwrap(), m);
        let ext = extend_scalars(&f, &m).unwrap();
        assert_eq!(ext.module.complex().ranks(), m.complex().ranks());
        assert!(triangle_identities_hold(&f, &m, &m).unwrap());
    }

    #[test]
    fn collapsing_an_acyclic_tensor_algebra() {
        // C = (Z --1--> Z) in degrees 2 -> 1, so T(C) ≃ Z
        let c = ChainComplex::new(
            vec![0, 1, 1, 0],
            vec![IntMatrix::zeros(0, 1), IntMatrix::identity(1), IntMatrix::zeros(1, 0)],
        )
        .unwrap();
        let r = DGAlgebra::tensor_algebra(&c).unwrap();
        let f = augmentation(&r).unwrap();
        assert!(f.map().is_quasi_iso());
        let samples = vec![DGModule::regular(&r), DGModule::free(&ChainComplex::sphere(1, 3), &r)];
        assert_eq!(quillen_invariance_spot_check(&f, &samples).unwrap(), vec![true, true]);
        let ext = extend_scalars(&f, &samples[1]).unwrap();
        assert_eq!(ext.module.complex().ranks(), &[0, 1, 0, 0]);
        assert!(triangle_identities_hold(&f, &samples[1], &DGModule::regular(f.target())).unwrap());
    }

    #[test]
    fn extension_along_the_counit() {
        let r = DGAlgebra::tensor_algebra(&ChainComplex::sphere(1, 2)).unwrap();
        let (a, g) = gamma_ring(&r).unwrap();
        let (nr, n) = crate::algebra::normalize_ring(&a).unwrap();
        let eps = crate::doldkan::counit_with(&g, &n);
        let f = DGAlgebraMap::new(nr.clone(), r.clone(), eps).unwrap();
        let samples = vec![DGModule::regular(&nr), DGModule::free(&ChainComplex::sphere(0, 2), &nr)];
        assert_eq!(quillen_invariance_spot_check(&f, &samples).unwrap(), vec![true, true]);
        let ext = extend_scalars(&f, &samples[0]).unwrap();
        assert_eq!(ext.module.complex().ranks(), r.complex().ranks());
        assert!(extension_unit(&f, &samples[0], &ext).is_degreewise_iso());
        assert!(triangle_identities_hold(&f, &samples[1], &DGModule::regular(&r)).unwrap());
    }

    #[test]
    fn simplicial_modules() {
        let a = SimplicialRing::truncated_symmetric_algebra(&standard_simplex(1, 2), 2);
        let m = SimplicialModule::regular(&a);
        m.validate().unwrap();
        let x = standard_simplex(0, 2);
        let free = SimplicialModule::free(&x, &a);
        free.validate().unwrap();
        let q = relative_tensor_simplicial(&free, &SimplicialModule::regular(&a.opposite())).unwrap();
        assert!(q.is_free());
        assert_eq!(q.group.ranks(), simplicial::tensor(&x, a.group()).ranks());
        let dm = normalize_module(&m).unwrap();
        dm.validate().unwrap();
    }

    #[test]
    fn torsion_in_a_relative_tensor_is_recorded() {
        // A = Z[x]/x² constant; M = N = Z² with e2·x = 2e1, e1·x = 0, the relations are
        // 2 e1⊗e1 and 2(e1⊗e2 - e2⊗e1)
        let t = 1;
        let a = SimplicialRing::truncated_symmetric_algebra(&SimplicialAbGroup::constant(1, t), 1);
        let unit = a.unit_at(0).iter().position(|c| *c == one()).unwrap();
        let x = 1 - unit;
        let action = (0..=t)
            .map(|_| {
                let mut m = IntMatrix::zeros(2, 4);
                for i in 0..2 {
                    m[(i, 2 * i + unit)] = one();
                }
                m[(0, 2 + x)] = crate::util::int(2);
                m
            })
            .collect::<Vec<_>>();
        let m = SimplicialModule::new(a.clone(), SimplicialAbGroup::constant(2, t), action.clone()).unwrap();
        let n = SimplicialModule::new(a.opposite(), SimplicialAbGroup::constant(2, t), action).unwrap();
        let st = relative_tensor_simplicial(&m, &n).unwrap();
        assert_eq!(st.torsion, vec![vec![crate::util::int(2); 2]; t + 1]);
        assert_eq!(st.group.ranks(), &[2, 2]);
        assert!(matches!(nabla_a(&m, &n), Err(Error::Torsion { degree: 0 })));
    }

    #[test]
    fn nabla_over_the_integers_is_the_shuffle() {
        let z = SimplicialRing::integers(2);
        let x = standard_simplex(1, 2);
        let m = SimplicialModule::free(&x, &z);
        let n = SimplicialModule::free(&x, &z.opposite());
        let na = nabla_a(&m, &n).unwrap();
        assert!(na.square_commutes().unwrap());
        let (nm, nn) = (normalize(m.group()).unwrap(), normalize(n.group()).unwrap());
        let st = relative_tensor_simplicial(&m, &n).unwrap();
        let (q, proj) = (st.group, st.projections);
        assert!(proj.iter().all(IntMatrix::is_identity));
        let nq = normalize(&q).unwrap();
        let sh = crate::doldkan::normalized_shuffle(m.group(), n.group(), &nm, &nn, &nq);
        assert_eq!(na.on_generators, sh.components());
    }

    #[test]
    fn nabla_descends_over_a_noncommutative_ring() {
        let r = DGAlgebra::tensor_algebra(&ChainComplex::sphere(1, 2)).unwrap();
        let (a, _) = gamma_ring(&r).unwrap();
        let m = SimplicialModule::regular(&a);
        let n = SimplicialModule::regular(&a.opposite());
        let na = nabla_a(&m, &n).unwrap();
        assert!(na.square_commutes().unwrap());
        assert!(na.lift_independent().unwrap());
    }
}
