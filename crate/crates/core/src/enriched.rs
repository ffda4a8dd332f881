//! Chain-complex-valued `I`-graphs, their tensor product, categories enriched in
//! chain complexes with a finite object set, and their modules.
//!
//! Objects are `0..|I|` with display labels. A category `O` has hom complexes
//! `O(i,j)` and compositions `O(j,k)⊗O(i,j) -> O(i,k)`; a module `M` has
//! actions `M(j)⊗O(i,j) -> M(i)`.

use dkforge_linalg::{inverse, kernel_basis, Int, IntMatrix};

use crate::algebra::DGAlgebra;
use crate::chain::{associator, tensor, tensor_maps, ChainComplex, ChainMap, FreeQuotient, QuotientComplex, TensorLayout};
use crate::error::{Error, Result};
use crate::modules_over::DGModule;
use crate::util::{one, zero};

fn axiom(structure: &'static str, law: &'static str, location: String) -> Error {
    Error::Axiom {
        structure,
        law,
        location,
    }
}

/// Start of each summand of a direct sum, per degree.
fn sum_offsets(parts: &[&ChainComplex], t: usize) -> Vec<Vec<usize>> {
    (0..=t)
        .map(|n| {
            let mut acc = 0;
            parts
                .iter()
                .map(|c| {
                    let o = acc;
                    acc += c.rank(n);
                    o
                })
                .collect()
        })
        .collect()
}

/// The summand containing `idx` and the index inside it.
fn locate(offsets: &[usize], idx: usize) -> (usize, usize) {
    let k = offsets.iter().rposition(|&o| o <= idx).expect("offsets start at zero");
    (k, idx - offsets[k])
}

/// `f` placed between summand `s` of the source sum and summand `r` of the target sum.
fn embed_map(
    f: &ChainMap,
    src: &ChainComplex,
    src_off: &[Vec<usize>],
    s: usize,
    tgt: &ChainComplex,
    tgt_off: &[Vec<usize>],
    r: usize,
) -> Vec<IntMatrix> {
    (0..=src.truncation().min(tgt.truncation()))
        .map(|n| {
            let mut m = IntMatrix::zeros(tgt.rank(n), src.rank(n));
            let c = f.component(n);
            if c.rows() * c.cols() > 0 {
                m.set_block(tgt_off[n][r], src_off[n][s], c);
            }
            m
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IGraph {
    objects: Vec<String>,
    truncation: usize,
    /// Row-major: `entries[i * |I| + j] = G(i,j)`.
    entries: Vec<ChainComplex>,
}

impl IGraph {
    pub fn new(objects: Vec<String>, entries: Vec<ChainComplex>) -> Result<Self> {
        let k = objects.len();
        if k == 0 || entries.len() != k * k {
            return Err(Error::Shape(format!("an I-graph on {k} objects needs {} entries", k * k)));
        }
        let t = entries[0].truncation();
        if entries.iter().any(|c| c.truncation() != t) {
            return Err(Error::Shape("entries must share the truncation".into()));
        }
        for c in &entries {
            c.validate()?;
        }
        Ok(IGraph {
            objects,
            truncation: t,
            entries,
        })
    }

    pub fn from_fn(objects: Vec<String>, mut f: impl FnMut(usize, usize) -> ChainComplex) -> Result<Self> {
        let k = objects.len();
        let entries = (0..k * k).map(|x| f(x / k, x % k)).collect();
        Self::new(objects, entries)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn size(&self) -> usize {
        self.objects.len()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn entry(&self, i: usize, j: usize) -> &ChainComplex {
        &self.entries[i * self.size() + j]
    }
}

/// `I_I`: `Z[0]` on the diagonal, zero elsewhere.
pub fn unit_graph(objects: Vec<String>, truncation: usize) -> IGraph {
    IGraph::from_fn(objects, |i, j| {
        if i == j {
            ChainComplex::unit(truncation)
        } else {
            ChainComplex::zero(truncation)
        }
    })
    .expect("unit graph is valid")
}

/// The summands `G(k,j)⊗H(i,k)` of `(G⊗H)(i,j)`, in the order of `k`.
fn graph_summands(g: &IGraph, h: &IGraph, i: usize, j: usize) -> Vec<ChainComplex> {
    (0..g.size()).map(|k| tensor(g.entry(k, j), h.entry(i, k)).0).collect()
}

/// `(G⊗H)(i,j) = ⊕_k G(k,j)⊗H(i,k)`, summands ordered by `k`.
pub fn graph_tensor(g: &IGraph, h: &IGraph) -> Result<IGraph> {
    if g.objects != h.objects {
        return Err(Error::Precondition("graphs must share the object set".into()));
    }
    let t = g.truncation.min(h.truncation);
    IGraph::from_fn(g.objects.clone(), |i, j| ChainComplex::direct_sum_all(t, &graph_summands(g, h, i, j)))
}

/// Basis labels `(k, l, |g|, g, |h|, h, |e|, e)` of `((G⊗H)⊗K)(i,j)` in degree `n`.
fn labels_left(g: &IGraph, h: &IGraph, e: &IGraph, i: usize, j: usize, n: usize) -> Vec<[usize; 8]> {
    let size = g.size();
    let mut out = Vec::new();
    for l in 0..size {
        let gh = graph_summands(g, h, l, j);
        let gh_sum = ChainComplex::direct_sum_all(g.truncation.min(h.truncation), &gh);
        let off = sum_offsets(&gh.iter().collect::<Vec<_>>(), gh_sum.truncation());
        let outer = TensorLayout::of(&gh_sum, e.entry(i, l));
        for idx in 0..outer.rank(n) {
            let (m, x, c) = outer.decompose(n, idx);
            let (k, y) = locate(&off[m], x);
            let (p, a, b) = TensorLayout::of(g.entry(k, j), h.entry(l, k)).decompose(m, y);
            out.push([k, l, p, a, m - p, b, n - m, c]);
        }
    }
    out
}

/// The same labels for `(G⊗(H⊗K))(i,j)`.
fn labels_right(g: &IGraph, h: &IGraph, e: &IGraph, i: usize, j: usize, n: usize) -> Vec<[usize; 8]> {
    let size = g.size();
    let mut out = Vec::new();
    for k in 0..size {
        let he = graph_summands(h, e, i, k);
        let he_sum = ChainComplex::direct_sum_all(h.truncation.min(e.truncation), &he);
        let off = sum_offsets(&he.iter().collect::<Vec<_>>(), he_sum.truncation());
        let outer = TensorLayout::of(g.entry(k, j), &he_sum);
        for idx in 0..outer.rank(n) {
            let (p, a, y) = outer.decompose(n, idx);
            let (l, z) = locate(&off[n - p], y);
            let (q, b, c) = TensorLayout::of(h.entry(l, k), e.entry(i, l)).decompose(n - p, z);
            out.push([k, l, p, a, q, b, n - p - q, c]);
        }
    }
    out
}

/// The reindexing `((G⊗H)⊗K)(i,j) -> (G⊗(H⊗K))(i,j)`, validated as a chain isomorphism.
pub fn graph_associator(g: &IGraph, h: &IGraph, e: &IGraph, i: usize, j: usize) -> Result<ChainMap> {
    let left = graph_tensor(&graph_tensor(g, h)?, e)?;
    let right = graph_tensor(g, &graph_tensor(h, e)?)?;
    let (src, tgt) = (left.entry(i, j), right.entry(i, j));
    let comps = (0..=src.truncation())
        .map(|n| {
            let (ls, lt) = (labels_left(g, h, e, i, j, n), labels_right(g, h, e, i, j, n));
            let mut m = IntMatrix::zeros(lt.len(), ls.len());
            for (col, label) in ls.iter().enumerate() {
                let row = lt
                    .iter()
                    .position(|x| x == label)
                    .ok_or_else(|| Error::Precondition("associativity reindexing is not a bijection".into()))?;
                m[(row, col)] = one();
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let map = ChainMap::new(src.clone(), tgt.clone(), comps)?;
    if !map.is_degreewise_iso() {
        return Err(Error::Precondition("associativity reindexing is not invertible".into()));
    }
    Ok(map)
}

/// A category enriched in chain complexes on a finite object set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ICategory {
    graph: IGraph,
    /// `comp[(i·|I| + j)·|I| + k] : O(j,k)⊗O(i,j) -> O(i,k)`.
    comp: Vec<ChainMap>,
    /// `units[i] ∈ O(i,i)_0`.
    units: Vec<Vec<Int>>,
}

impl ICategory {
    pub fn new(graph: IGraph, comp: Vec<ChainMap>, units: Vec<Vec<Int>>) -> Result<Self> {
        let s = graph.size();
        if comp.len() != s * s * s || units.len() != s {
            return Err(Error::Shape("one composition per triple and one unit per object".into()));
        }
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    let c = &comp[(i * s + j) * s + k];
                    let src = tensor(graph.entry(j, k), graph.entry(i, j)).0;
                    if c.source() != &src || c.target() != graph.entry(i, k) {
                        return Err(Error::Shape(format!("composition ({i},{j},{k}) has the wrong ends")));
                    }
                    c.validate()?;
                }
            }
            if units[i].len() != graph.entry(i, i).rank(0) {
                return Err(Error::Shape(format!("unit of object {i} has the wrong length")));
            }
        }
        let cat = ICategory { graph, comp, units };
        cat.validate()?;
        Ok(cat)
    }

    /// Unit laws and associativity of composition.
    pub fn validate(&self) -> Result<()> {
        let s = self.size();
        for i in 0..s {
            for j in 0..s {
                let left = self.compose_map(i, j, j).compose(&tensor_maps(&self.unit_map(j), &ChainMap::identity(self.hom(i, j))));
                if !left.components().iter().all(IntMatrix::is_identity) {
                    return Err(axiom("I-category", "left unit", format!("({i},{j})")));
                }
                let right = self.compose_map(i, i, j).compose(&tensor_maps(&ChainMap::identity(self.hom(i, j)), &self.unit_map(i)));
                if !right.components().iter().all(IntMatrix::is_identity) {
                    return Err(axiom("I-category", "right unit", format!("({i},{j})")));
                }
            }
        }
        // the square only depends on the four compositions involved
        let ids: Vec<usize> = (0..self.comp.len())
            .map(|x| self.comp.iter().position(|c| *c == self.comp[x]).expect("present"))
            .collect();
        let id = |i: usize, j: usize, k: usize| ids[(i * s + j) * s + k];
        let mut seen = std::collections::HashSet::new();
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    for l in 0..s {
                        if !seen.insert([id(i, j, l), id(j, k, l), id(i, k, l), id(i, j, k)]) {
                            continue;
                        }
                        let (a, b, c) = (self.hom(k, l), self.hom(j, k), self.hom(i, j));
                        let first = self
                            .compose_map(i, j, l)
                            .compose(&tensor_maps(self.compose_map(j, k, l), &ChainMap::identity(c)));
                        let second = self
                            .compose_map(i, k, l)
                            .compose(&tensor_maps(&ChainMap::identity(a), self.compose_map(i, j, k)))
                            .compose(&associator(a, b, c));
                        if !first.same_components(&second) {
                            return Err(axiom("I-category", "associativity", format!("({i},{j},{k},{l})")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &IGraph {
        &self.graph
    }

    pub fn size(&self) -> usize {
        self.graph.size()
    }

    pub fn truncation(&self) -> usize {
        self.graph.truncation()
    }

    pub fn hom(&self, i: usize, j: usize) -> &ChainComplex {
        self.graph.entry(i, j)
    }

    /// `O(j,k)⊗O(i,j) -> O(i,k)`.
    pub fn compose_map(&self, i: usize, j: usize, k: usize) -> &ChainMap {
        let s = self.size();
        &self.comp[(i * s + j) * s + k]
    }

    pub fn unit(&self, i: usize) -> &[Int] {
        &self.units[i]
    }

    /// `Z[0] -> O(i,i)` picking out the unit.
    pub fn unit_map(&self, i: usize) -> ChainMap {
        let z = ChainComplex::unit(self.truncation());
        let target = self.hom(i, i);
        let comps = (0..=self.truncation())
            .map(|n| {
                if n == 0 {
                    IntMatrix::column_vector(&self.units[i])
                } else {
                    IntMatrix::zeros(target.rank(n), 0)
                }
            })
            .collect();
        ChainMap::new_unchecked(z, target.clone(), comps).expect("unit map shapes")
    }

    /// Every hom complex is `R`, every composition is the product of `R`.
    pub fn chaotic(objects: Vec<String>, r: &DGAlgebra) -> Result<ICategory> {
        let s = objects.len();
        let graph = IGraph::from_fn(objects, |_, _| r.complex().clone())?;
        let product = r.product_map();
        ICategory::new(graph, vec![product; s * s * s], vec![r.unit().to_vec(); s])
    }

    /// Two objects with `O(0,1) = C`, `O(1,0) = 0` and `Z[0]` endomorphisms.
    pub fn arrow(c: &ChainComplex) -> Result<ICategory> {
        let t = c.truncation();
        let objects = vec!["0".to_string(), "1".to_string()];
        let graph = IGraph::from_fn(objects, |i, j| match (i, j) {
            (0, 1) => c.clone(),
            (1, 0) => ChainComplex::zero(t),
            _ => ChainComplex::unit(t),
        })?;
        let mut comp = Vec::with_capacity(8);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let src = tensor(graph.entry(j, k), graph.entry(i, j)).0;
                    let tgt = graph.entry(i, k).clone();
                    // every nonzero composite has a unit factor, and Z[0]⊗X = X = X⊗Z[0] on the nose
                    let comps = (0..=t)
                        .map(|n| {
                            if src.rank(n) == tgt.rank(n) && (i == j || j == k) {
                                IntMatrix::identity(tgt.rank(n))
                            } else {
                                IntMatrix::zeros(tgt.rank(n), src.rank(n))
                            }
                        })
                        .collect();
                    comp.push(ChainMap::new_unchecked(src, tgt, comps)?);
                }
            }
        }
        ICategory::new(graph, comp, vec![vec![one()]; 2])
    }

    /// The one-object category of a monoid.
    pub fn from_monoid(r: &DGAlgebra) -> Result<ICategory> {
        ICategory::chaotic(vec!["*".to_string()], r)
    }

    /// The monoid of a one-object category.
    pub fn to_monoid(&self) -> Result<DGAlgebra> {
        if self.size() != 1 {
            return Err(Error::Precondition("only a one-object category is a monoid".into()));
        }
        let c = self.hom(0, 0);
        let t = c.truncation();
        let layout = TensorLayout::of(c, c);
        let prod = self.compose_map(0, 0, 0);
        let mult = (0..=t)
            .map(|p| {
                (0..=t - p)
                    .map(|q| {
                        prod.component(p + q).block(0, layout.block_offset(p + q, p), c.rank(p + q), c.rank(p) * c.rank(q))
                    })
                    .collect()
            })
            .collect();
        DGAlgebra::new(c.clone(), mult, self.units[0].clone())
    }
}

pub fn category_from_monoid(r: &DGAlgebra) -> Result<ICategory> {
    ICategory::from_monoid(r)
}

/// An identity-on-objects functor `O -> R`.
#[derive(Clone, Debug)]
pub struct CategoryMap {
    source: ICategory,
    target: ICategory,
    /// Row-major `O(i,j) -> R(i,j)`.
    maps: Vec<ChainMap>,
}

impl CategoryMap {
    pub fn new(source: ICategory, target: ICategory, maps: Vec<ChainMap>) -> Result<Self> {
        let s = source.size();
        if target.graph.objects != source.graph.objects || maps.len() != s * s {
            return Err(Error::Shape("a category map needs one chain map per pair of objects".into()));
        }
        for i in 0..s {
            for j in 0..s {
                let m = &maps[i * s + j];
                if m.source() != source.hom(i, j) || m.target() != target.hom(i, j) {
                    return Err(Error::Shape(format!("map ({i},{j}) has the wrong ends")));
                }
                m.validate()?;
            }
        }
        let f = CategoryMap { source, target, maps };
        for i in 0..s {
            if f.map(i, i).component(0).mul_vec(f.source.unit(i)) != f.target.unit(i) {
                return Err(axiom("I-functor", "preserves units", format!("object {i}")));
            }
            for j in 0..s {
                for k in 0..s {
                    let before = f.map(i, k).compose(f.source.compose_map(i, j, k));
                    let after = f.target.compose_map(i, j, k).compose(&tensor_maps(f.map(j, k), f.map(i, j)));
                    if !before.same_components(&after) {
                        return Err(axiom("I-functor", "preserves composition", format!("({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(f)
    }

    pub fn identity(o: &ICategory) -> CategoryMap {
        let s = o.size();
        let maps = (0..s * s).map(|x| ChainMap::identity(o.hom(x / s, x % s))).collect();
        CategoryMap {
            source: o.clone(),
            target: o.clone(),
            maps,
        }
    }

    pub fn source(&self) -> &ICategory {
        &self.source
    }

    pub fn target(&self) -> &ICategory {
        &self.target
    }

    pub fn map(&self, i: usize, j: usize) -> &ChainMap {
        &self.maps[i * self.source.size() + j]
    }

    pub fn is_pointwise_quasi_iso(&self) -> bool {
        self.maps.iter().all(ChainMap::is_quasi_iso)
    }
}

/// A contravariant enriched functor `O -> Ch`: complexes `M(i)` and actions `M(j)⊗O(i,j) -> M(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OModule {
    category: ICategory,
    entries: Vec<ChainComplex>,
    /// Row-major `M(j)⊗O(i,j) -> M(i)`.
    action: Vec<ChainMap>,
}

impl OModule {
    pub fn new(category: ICategory, entries: Vec<ChainComplex>, action: Vec<ChainMap>) -> Result<Self> {
        let s = category.size();
        if entries.len() != s || action.len() != s * s {
            return Err(Error::Shape("one complex per object and one action per pair".into()));
        }
        for i in 0..s {
            for j in 0..s {
                let a = &action[i * s + j];
                if a.source() != &tensor(&entries[j], category.hom(i, j)).0 || a.target() != &entries[i] {
                    return Err(Error::Shape(format!("action ({i},{j}) has the wrong ends")));
                }
                a.validate()?;
            }
        }
        let m = OModule {
            category,
            entries,
            action,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let o = &self.category;
        let s = o.size();
        for i in 0..s {
            let unit = self.action_map(i, i).compose(&tensor_maps(&ChainMap::identity(&self.entries[i]), &o.unit_map(i)));
            if !unit.components().iter().all(IntMatrix::is_identity) {
                return Err(axiom("O-module", "unit", format!("object {i}")));
            }
            for j in 0..s {
                for k in 0..s {
                    let m = &self.entries[k];
                    let first = self
                        .action_map(i, j)
                        .compose(&tensor_maps(self.action_map(j, k), &ChainMap::identity(o.hom(i, j))));
                    let second = self
                        .action_map(i, k)
                        .compose(&tensor_maps(&ChainMap::identity(m), o.compose_map(i, j, k)))
                        .compose(&associator(m, o.hom(j, k), o.hom(i, j)));
                    if !first.same_components(&second) {
                        return Err(axiom("O-module", "associativity", format!("({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn category(&self) -> &ICategory {
        &self.category
    }

    pub fn entry(&self, i: usize) -> &ChainComplex {
        &self.entries[i]
    }

    /// `M(j)⊗O(i,j) -> M(i)`.
    pub fn action_map(&self, i: usize, j: usize) -> &ChainMap {
        &self.action[i * self.category.size() + j]
    }

    /// A right DG module as a module over the one-object category.
    pub fn from_dg_module(m: &DGModule) -> Result<OModule> {
        let o = ICategory::from_monoid(m.algebra())?;
        let c = m.complex();
        let r = m.algebra().complex();
        let (src, layout) = tensor(c, r);
        let comps = (0..=c.truncation())
            .map(|n| {
                let mut a = IntMatrix::zeros(c.rank(n), layout.rank(n));
                for p in 0..=n {
                    if c.rank(p) * r.rank(n - p) > 0 {
                        a.set_block(0, layout.block_offset(n, p), m.action(p, n - p));
                    }
                }
                a
            })
            .collect();
        let act = ChainMap::new(src, c.clone(), comps)?;
        OModule::new(o, vec![c.clone()], vec![act])
    }
}

/// The representable `F_j(i) = O(i,j)` acting by composition.
pub fn free_module(o: &ICategory, j: usize) -> OModule {
    let s = o.size();
    let entries = (0..s).map(|i| o.hom(i, j).clone()).collect();
    let action = (0..s * s).map(|x| o.compose_map(x / s, x % s, j).clone()).collect();
    OModule {
        category: o.clone(),
        entries,
        action,
    }
}

/// Module maps `F_j -> M` against `Z_0(M(j)) = M(j)_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YonedaReport {
    pub hom_rank: usize,
    pub cycle_rank: usize,
    /// Evaluation at the unit of `j` is an isomorphism of lattices.
    pub evaluation_iso: bool,
}

impl YonedaReport {
    pub fn holds(&self) -> bool {
        self.hom_rank == self.cycle_rank && self.evaluation_iso
    }
}

/// Solves the linear constraints for chain maps `f_i : O(i,j) -> M(i)` commuting with the actions.
pub fn yoneda_check(o: &ICategory, j: usize, m: &OModule) -> Result<YonedaReport> {
    if m.category() != o {
        return Err(Error::Precondition("module is over a different category".into()));
    }
    let s = o.size();
    let t = o.truncation();
    // unknown (i, n, r, c) is entry (r, c) of f_i in degree n
    let mut offset = vec![vec![0usize; t + 1]; s];
    let mut total = 0;
    for (i, offs) in offset.iter_mut().enumerate() {
        for (n, off) in offs.iter_mut().enumerate() {
            *off = total;
            total += m.entry(i).rank(n) * o.hom(i, j).rank(n);
        }
    }
    let var = |i: usize, n: usize, r: usize, c: usize| offset[i][n] + r * o.hom(i, j).rank(n) + c;
    let mut rows: Vec<Vec<(usize, Int)>> = Vec::new();
    for i in 0..s {
        let (mi, oij) = (m.entry(i), o.hom(i, j));
        for n in 1..=t {
            let (dm, dof) = (mi.d(n), oij.d(n));
            for r in 0..mi.rank(n - 1) {
                for c in 0..oij.rank(n) {
                    let mut row = Vec::new();
                    for x in 0..mi.rank(n) {
                        row.push((var(i, n, x, c), dm[(r, x)].clone()));
                    }
                    for x in 0..oij.rank(n - 1) {
                        row.push((var(i, n - 1, r, x), -dof[(x, c)].clone()));
                    }
                    rows.push(row);
                }
            }
        }
        for k in 0..s {
            // f_i ∘ comp_{ikj} = act_{ik} ∘ (f_k ⊗ id) on O(k,j)⊗O(i,k)
            let (okj, oik) = (o.hom(k, j), o.hom(i, k));
            let src = TensorLayout::of(okj, oik);
            let act_layout = TensorLayout::of(m.entry(k), oik);
            let comp = o.compose_map(i, k, j);
            let act = m.action_map(i, k);
            for n in 0..=t {
                for p in 0..=n {
                    for a in 0..okj.rank(p) {
                        for b in 0..oik.rank(n - p) {
                            let col = src.index(n, p, a, b);
                            for r in 0..mi.rank(n) {
                                let mut row = Vec::new();
                                for x in 0..oij.rank(n) {
                                    row.push((var(i, n, r, x), comp.component(n)[(x, col)].clone()));
                                }
                                for y in 0..m.entry(k).rank(p) {
                                    let coef = &act.component(n)[(r, act_layout.index(n, p, y, b))];
                                    row.push((var(k, p, y, a), -coef.clone()));
                                }
                                rows.push(row);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut system = IntMatrix::zeros(rows.len(), total);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row {
            system[(r, *c)] += v;
        }
    }
    let homs = kernel_basis(&system);
    let mj0 = m.entry(j).rank(0);
    let u = o.unit(j);
    let mut eval = IntMatrix::zeros(mj0, total);
    for r in 0..mj0 {
        for (c, uc) in u.iter().enumerate() {
            if *uc != zero() {
                eval[(r, var(j, 0, r, c))] = uc.clone();
            }
        }
    }
    let image = &eval * &homs;
    let evaluation_iso = image.rows() == image.cols() && (image.rows() == 0 || inverse(&image).is_some());
    Ok(YonedaReport {
        hom_rank: homs.cols(),
        cycle_rank: mj0,
        evaluation_iso,
    })
}

/// Restriction along `Ψ`: `act^O = act^R ∘ (id⊗Ψ)`.
pub fn restrict(psi: &CategoryMap, m: &OModule) -> Result<OModule> {
    if m.category() != psi.target() {
        return Err(Error::Precondition("module is not over the target category".into()));
    }
    let s = psi.source().size();
    let action = (0..s * s)
        .map(|x| {
            let (i, j) = (x / s, x % s);
            m.action_map(i, j).compose(&tensor_maps(&ChainMap::identity(m.entry(j)), psi.map(i, j)))
        })
        .collect();
    OModule::new(psi.source().clone(), m.entries.clone(), action)
}

/// `M ⊗_O R` with the bases it is written in.
#[derive(Clone, Debug)]
pub struct OExtension {
    pub module: OModule,
    /// Per object, `⊕_j M(j)⊗R(i,j) -> (M ⊗_O R)(i)`.
    pub quotients: Vec<FreeQuotient>,
    pub generators: Vec<ChainComplex>,
}

/// The summands `M(j)⊗R(i,j)` of the generators at `i`.
fn generator_parts(m: &[ChainComplex], r: &ICategory, i: usize) -> Vec<ChainComplex> {
    (0..r.size()).map(|j| tensor(&m[j], r.hom(i, j)).0).collect()
}

/// Extension along `Ψ`: at each `i`, the coequalizer of
/// `⊕_{j,k} M(k)⊗O(j,k)⊗R(i,j) ⇉ ⊕_j M(j)⊗R(i,j)`.
pub fn extend(psi: &CategoryMap, m: &OModule) -> Result<OExtension> {
    if m.category() != psi.source() {
        return Err(Error::Precondition("module is not over the source category".into()));
    }
    let (o, r) = (psi.source(), psi.target());
    let s = o.size();
    let t = o.truncation();
    let mut quotients = Vec::with_capacity(s);
    let mut generators = Vec::with_capacity(s);
    for i in 0..s {
        let gparts = generator_parts(&m.entries, r, i);
        let gens = ChainComplex::direct_sum_all(t, &gparts);
        let goff = sum_offsets(&gparts.iter().collect::<Vec<_>>(), t);
        let mut rparts = Vec::with_capacity(s * s);
        let mut terms = Vec::with_capacity(s * s);
        for j in 0..s {
            for k in 0..s {
                let (mk, ojk, rij) = (m.entry(k), o.hom(j, k), r.hom(i, j));
                let src = tensor(&tensor(mk, ojk).0, rij).0;
                let acted = tensor_maps(m.action_map(j, k), &ChainMap::identity(rij));
                let composed = tensor_maps(
                    &ChainMap::identity(mk),
                    &r.compose_map(i, j, k).compose(&tensor_maps(psi.map(j, k), &ChainMap::identity(rij))),
                )
                .compose(&associator(mk, ojk, rij));
                rparts.push(src);
                terms.push((j, acted, k, composed));
            }
        }
        let rels = ChainComplex::direct_sum_all(t, &rparts);
        let roff = sum_offsets(&rparts.iter().collect::<Vec<_>>(), t);
        let mut relation_map: Vec<IntMatrix> = (0..=t).map(|n| IntMatrix::zeros(gens.rank(n), rels.rank(n))).collect();
        for (x, (j, acted, k, composed)) in terms.iter().enumerate() {
            let plus = embed_map(acted, &rels, &roff, x, &gens, &goff, *j);
            let minus = embed_map(composed, &rels, &roff, x, &gens, &goff, *k);
            for n in 0..=t {
                relation_map[n] = &(&relation_map[n] + &plus[n]) - &minus[n];
            }
        }
        let q = QuotientComplex::new(gens.clone(), rels, relation_map)?;
        quotients.push(q.to_free()?);
        generators.push(gens);
    }
    // (m⊗r)·r' = m⊗(r∘r') on generators, then pushed through the quotients
    let mut action = Vec::with_capacity(s * s);
    for i2 in 0..s {
        for i in 0..s {
            let rii = r.hom(i2, i);
            let gparts = generator_parts(&m.entries, r, i);
            let tparts = generator_parts(&m.entries, r, i2);
            let goff = sum_offsets(&gparts.iter().collect::<Vec<_>>(), t);
            let toff = sum_offsets(&tparts.iter().collect::<Vec<_>>(), t);
            let src_parts: Vec<ChainComplex> = gparts.iter().map(|g| tensor(g, rii).0).collect();
            let src_sum = tensor(&generators[i], rii).0;
            let mut on_gens: Vec<IntMatrix> = (0..=t).map(|n| IntMatrix::zeros(generators[i2].rank(n), src_sum.rank(n))).collect();
            // (⊕_j X_j)⊗Y -> ⊕_j X_j⊗Y, then each summand acts
            let dist = distribute(&gparts, &goff, rii, t);
            let parts_off = sum_offsets(&src_parts.iter().collect::<Vec<_>>(), t);
            let parts_sum = ChainComplex::direct_sum_all(t, &src_parts);
            for j in 0..s {
                let (mj, rij) = (m.entry(j), r.hom(i, j));
                let f = tensor_maps(&ChainMap::identity(mj), r.compose_map(i2, i, j)).compose(&associator(mj, rij, rii));
                let placed = embed_map(&f, &parts_sum, &parts_off, j, &generators[i2], &toff, j);
                for n in 0..=t {
                    on_gens[n] = &on_gens[n] + &(&placed[n] * &dist[n]);
                }
            }
            let (from, to) = (&quotients[i], &quotients[i2]);
            let sect = ChainMap::new_unchecked(from.complex.clone(), generators[i].clone(), from.sections.clone())?;
            let lifted = tensor_maps(&sect, &ChainMap::identity(rii));
            let comps = (0..=t)
                .map(|n| &(&to.projections[n] * &on_gens[n]) * lifted.component(n))
                .collect();
            action.push(ChainMap::new_unchecked(tensor(&from.complex, rii).0, to.complex.clone(), comps)?);
        }
    }
    let module = OModule::new(r.clone(), quotients.iter().map(|q| q.complex.clone()).collect(), action)?;
    Ok(OExtension {
        module,
        quotients,
        generators,
    })
}

/// The reindexing `(⊕_j X_j)⊗Y -> ⊕_j (X_j⊗Y)`.
fn distribute(parts: &[ChainComplex], off: &[Vec<usize>], y: &ChainComplex, t: usize) -> Vec<IntMatrix> {
    let sum = ChainComplex::direct_sum_all(t, parts);
    let src = TensorLayout::of(&sum, y);
    let layouts: Vec<TensorLayout> = parts.iter().map(|x| TensorLayout::of(x, y)).collect();
    let tgt_off: Vec<Vec<usize>> = (0..=t)
        .map(|n| {
            let mut acc = 0;
            layouts
                .iter()
                .map(|l| {
                    let o = acc;
                    acc += l.rank(n);
                    o
                })
                .collect()
        })
        .collect();
    (0..=t)
        .map(|n| {
            let rows = layouts.iter().map(|l| l.rank(n)).sum();
            let mut m = IntMatrix::zeros(rows, src.rank(n));
            for idx in 0..src.rank(n) {
                let (p, a, b) = src.decompose(n, idx);
                let (j, a2) = locate(&off[p], a);
                m[(tgt_off[n][j] + layouts[j].index(n, p, a2, b), idx)] = one();
            }
            m
        })
        .collect()
}

/// `M -> restrict(extend(M))`, `m ↦ [m⊗1]`.
pub fn extension_unit(m: &OModule, ext: &OExtension) -> Vec<ChainMap> {
    let r = ext.module.category();
    let t = r.truncation();
    (0..m.category().size())
        .map(|i| {
            let gparts = generator_parts(&m.entries, r, i);
            let goff = sum_offsets(&gparts.iter().collect::<Vec<_>>(), t);
            let mi = m.entry(i);
            let into = tensor_maps(&ChainMap::identity(mi), &r.unit_map(i));
            let comps = (0..=t)
                .map(|n| {
                    let mut e = IntMatrix::zeros(ext.generators[i].rank(n), mi.rank(n));
                    if mi.rank(n) > 0 {
                        e.set_block(goff[n][i], 0, into.component(n));
                    }
                    &ext.quotients[i].projections[n] * &e
                })
                .collect();
            ChainMap::new_unchecked(mi.clone(), ext.module.entry(i).clone(), comps).expect("unit shapes")
        })
        .collect()
}

/// `extend(restrict(N)) -> N`, `[n⊗r] ↦ n·r`.
pub fn restriction_counit(n: &OModule, ext: &OExtension) -> Vec<ChainMap> {
    let r = n.category();
    let t = r.truncation();
    (0..r.size())
        .map(|i| {
            let comps = (0..=t)
                .map(|deg| {
                    let blocks: Vec<IntMatrix> = (0..r.size()).map(|j| n.action_map(i, j).component(deg).clone()).collect();
                    &IntMatrix::hstack_all(n.entry(i).rank(deg), &blocks) * &ext.quotients[i].sections[deg]
                })
                .collect();
            ChainMap::new_unchecked(ext.module.entry(i).clone(), n.entry(i).clone(), comps).expect("counit shapes")
        })
        .collect()
}

/// `extend(g)` for a module map `g : M -> M'`, on the chosen bases.
fn extend_map(g: &[ChainMap], from: &OExtension, to: &OExtension, r: &ICategory) -> Vec<ChainMap> {
    let t = r.truncation();
    (0..r.size())
        .map(|i| {
            let blocks: Vec<IntMatrix> = (0..=t)
                .map(|n| {
                    let parts: Vec<IntMatrix> =
                        (0..r.size()).map(|j| tensor_maps(&g[j], &ChainMap::identity(r.hom(i, j))).component(n).clone()).collect();
                    IntMatrix::block_diag(&parts)
                })
                .collect();
            let comps = (0..=t)
                .map(|n| &(&to.quotients[i].projections[n] * &blocks[n]) * &from.quotients[i].sections[n])
                .collect();
            ChainMap::new_unchecked(from.module.entry(i).clone(), to.module.entry(i).clone(), comps).expect("shapes")
        })
        .collect()
}

fn all_identity(maps: &[ChainMap]) -> bool {
    maps.iter().all(|f| f.components().iter().all(IntMatrix::is_identity))
}

fn compose_all(second: &[ChainMap], first: &[ChainMap]) -> Vec<ChainMap> {
    second.iter().zip(first).map(|(g, f)| g.compose(f)).collect()
}

/// Both triangle identities of extension ⊣ restriction at `M` over `O` and `N` over `R`.
pub fn triangle_identities_hold(psi: &CategoryMap, m: &OModule, n: &OModule) -> Result<bool> {
    let res_n = restrict(psi, n)?;
    let ext_res_n = extend(psi, &res_n)?;
    let first = compose_all(&restriction_counit(n, &ext_res_n), &extension_unit(&res_n, &ext_res_n));
    let ext_m = extend(psi, m)?;
    let res_ext_m = restrict(psi, &ext_m.module)?;
    let ext_res_ext_m = extend(psi, &res_ext_m)?;
    let lifted = extend_map(&extension_unit(m, &ext_m), &ext_m, &ext_res_ext_m, psi.target());
    let second = compose_all(&restriction_counit(&ext_m.module, &ext_res_ext_m), &lifted);
    Ok(all_identity(&first) && all_identity(&second))
}

/// For a pointwise quasi-isomorphism `Ψ`, whether `M -> restrict(extend(M))` is one too.
pub fn extension_unit_is_quasi_iso(psi: &CategoryMap, m: &OModule) -> Result<bool> {
    if !psi.is_pointwise_quasi_iso() {
        return Err(Error::Precondition("Ψ is not a pointwise quasi-isomorphism".into()));
    }
    let ext = extend(psi, m)?;
    Ok(extension_unit(m, &ext).iter().all(ChainMap::is_quasi_iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{named_algebras, DGAlgebraMap};
    use crate::modules_over::{augmentation, extend_scalars};

    fn labels(k: usize) -> Vec<String> {
        (0..k).map(|i| i.to_string()).collect()
    }

    fn small(a: usize, b: usize, t: usize) -> ChainComplex {
        let mut ranks = vec![0; t + 1];
        ranks[0] = a;
        ranks[1] = b;
        let mut diffs = vec![IntMatrix::zeros(0, 0); t];
        diffs[0] = IntMatrix::from_fn(a, b, |i, j| crate::util::int(((i + j) % 2) as i64 * 2));
        for n in 2..=t {
            diffs[n - 1] = IntMatrix::zeros(ranks[n - 1], ranks[n]);
        }
        ChainComplex::new(ranks, diffs).unwrap()
    }

    #[test]
    fn graph_tensor_ranks_and_unit() {
        let g = IGraph::from_fn(labels(2), |i, j| small(i + 1, j, 2)).unwrap();
        let h = IGraph::from_fn(labels(2), |i, j| small(1, (i + j) % 2, 2)).unwrap();
        let gh = graph_tensor(&g, &h).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for n in 0..=2 {
                    let expected: usize = (0..2)
                        .map(|k| (0..=n).map(|p| g.entry(k, j).rank(p) * h.entry(i, k).rank(n - p)).sum::<usize>())
                        .sum();
                    assert_eq!(gh.entry(i, j).rank(n), expected);
                }
            }
        }
        let u = unit_graph(labels(2), 2);
        assert_eq!(graph_tensor(&u, &g).unwrap(), g);
        assert_eq!(graph_tensor(&g, &u).unwrap(), g);
        let one_object = IGraph::new(labels(1), vec![small(1, 2, 2)]).unwrap();
        let sq = graph_tensor(&one_object, &one_object).unwrap();
        assert_eq!(sq.entry(0, 0), &tensor(&small(1, 2, 2), &small(1, 2, 2)).0);
    }

    #[test]
    fn graph_tensor_is_associative() {
        let g = IGraph::from_fn(labels(2), |i, j| small(1 + i, (i + j) % 2 + 1, 3)).unwrap();
        let h = IGraph::from_fn(labels(2), |_, j| small(j + 1, 1, 3)).unwrap();
        let e = IGraph::from_fn(labels(2), |i, _| small(1, i, 3)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                graph_associator(&g, &h, &e, i, j).unwrap();
            }
        }
    }

    #[test]
    fn categories_validate() {
        for (name, r) in named_algebras(2) {
            ICategory::chaotic(labels(2), &r).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(ICategory::from_monoid(&r).unwrap().to_monoid().unwrap(), r, "{name}");
        }
        ICategory::arrow(&small(1, 2, 2)).unwrap();
    }

    #[test]
    fn broken_unit_is_named() {
        let r = DGAlgebra::integers(1);
        let o = ICategory::chaotic(labels(2), &r).unwrap();
        let err = ICategory::new(o.graph.clone(), o.comp.clone(), vec![vec![crate::util::int(2)], vec![one()]]).unwrap_err();
        assert!(matches!(err, Error::Axiom { law: "left unit", .. }), "{err}");
    }

    #[test]
    fn yoneda_on_representables() {
        let r = DGAlgebra::xy_words(1);
        let o = ICategory::chaotic(labels(2), &r).unwrap();
        for j in 0..2 {
            let f = free_module(&o, j);
            f.validate().unwrap();
            for target in [free_module(&o, 0), free_module(&o, 1)] {
                assert!(yoneda_check(&o, j, &target).unwrap().holds());
            }
        }
        let arrow = ICategory::arrow(&small(2, 1, 1)).unwrap();
        for j in 0..2 {
            for target in 0..2 {
                let report = yoneda_check(&arrow, j, &free_module(&arrow, target)).unwrap();
                assert!(report.holds(), "{report:?}");
            }
        }
    }

    #[test]
    fn identity_extension() {
        let o = ICategory::arrow(&small(1, 1, 2)).unwrap();
        let id = CategoryMap::identity(&o);
        for j in 0..2 {
            let f = free_module(&o, j);
            assert_eq!(restrict(&id, &f).unwrap(), f);
            let ext = extend(&id, &f).unwrap();
            for i in 0..2 {
                assert_eq!(ext.module.entry(i).ranks(), f.entry(i).ranks());
            }
            assert!(extension_unit(&f, &ext).iter().all(ChainMap::is_degreewise_iso));
            assert!(triangle_identities_hold(&id, &f, &f).unwrap());
        }
    }

    #[test]
    fn collapse_along_a_pointwise_quasi_iso() {
        let c = ChainComplex::new(
            vec![0, 1, 1],
            vec![IntMatrix::zeros(0, 1), IntMatrix::identity(1)],
        )
        .unwrap();
        let r = DGAlgebra::tensor_algebra(&c).unwrap();
        let aug = augmentation(&r).unwrap();
        let (o, z) = (ICategory::chaotic(labels(2), &r).unwrap(), ICategory::chaotic(labels(2), aug.target()).unwrap());
        let psi = CategoryMap::new(o.clone(), z.clone(), vec![aug.map().clone(); 4]).unwrap();
        for j in 0..2 {
            let f = free_module(&o, j);
            assert!(extension_unit_is_quasi_iso(&psi, &f).unwrap());
            // extend(F_j^O) ≅ F_j^R
            let ext = extend(&psi, &f).unwrap();
            for i in 0..2 {
                assert_eq!(ext.module.entry(i).ranks(), z.hom(i, j).ranks());
            }
            assert!(triangle_identities_hold(&psi, &f, &free_module(&z, j)).unwrap());
        }
    }

    #[test]
    fn singletons_agree_with_dg_modules() {
        let r = DGAlgebra::square_zero(&ChainComplex::sphere(1, 2));
        let m = DGModule::free(&ChainComplex::sphere(0, 2), &r);
        let om = OModule::from_dg_module(&m).unwrap();
        let f = DGAlgebraMap::identity(&r);
        let o = ICategory::from_monoid(&r).unwrap();
        let psi = CategoryMap::new(o.clone(), o, vec![f.map().clone()]).unwrap();
        let dg = extend_scalars(&f, &m).unwrap();
        let en = extend(&psi, &om).unwrap();
        assert_eq!(en.quotients[0], dg.quotient);
        assert_eq!(en.module, OModule::from_dg_module(&dg.module).unwrap());
    }
}
