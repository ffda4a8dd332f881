//! Differential graded algebras, simplicial rings, and `N`, `Γ` on ring objects.

use std::collections::{BTreeMap, HashMap};

use dkforge_linalg::{Int, IntMatrix};

use crate::chain::{homotopy_solve, tensor, ChainComplex, ChainMap, TensorLayout};
use crate::doldkan::{
    counit_monoidal_defect, counit_with, gamma, gamma_map, gamma_monoidal, moore_shuffle, normalize,
    normalize_map_with, normalized_shuffle, unit, Gamma, Normalization,
};
use crate::error::{Error, Result};
use crate::simplicial::{self, SimplicialAbGroup};
use crate::util::{is_injective, is_zero, kron_vec, one, sign, swap_matrix, unit_vector, zero};

fn axiom(structure: &'static str, law: &'static str, location: String) -> Error {
    Error::Axiom {
        structure,
        law,
        location,
    }
}

/// A connective DGA, truncated at `T`, with `μ_{p,q} : R_p⊗R_q -> R_{p+q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGAlgebra {
    complex: ChainComplex,
    /// `mult[p][q]` for `p + q ≤ T`.
    mult: Vec<Vec<IntMatrix>>,
    unit: Vec<Int>,
}

impl DGAlgebra {
    pub fn new(complex: ChainComplex, mult: Vec<Vec<IntMatrix>>, unit: Vec<Int>) -> Result<Self> {
        let a = Self::new_unchecked(complex, mult, unit)?;
        a.validate()?;
        Ok(a)
    }

    /// Checks shapes only.
    pub fn new_unchecked(complex: ChainComplex, mult: Vec<Vec<IntMatrix>>, unit: Vec<Int>) -> Result<Self> {
        let t = complex.truncation();
        if mult.len() != t + 1 {
            return Err(Error::Shape(format!("expected {} rows of products, got {}", t + 1, mult.len())));
        }
        for (p, row) in mult.iter().enumerate() {
            if row.len() != t + 1 - p {
                return Err(Error::Shape(format!("products μ_{{{p},q}} need q = 0..={}", t - p)));
            }
            for (q, m) in row.iter().enumerate() {
                let want = (complex.rank(p + q), complex.rank(p) * complex.rank(q));
                if m.shape() != want {
                    return Err(Error::Shape(format!(
                        "μ_{{{p},{q}}} is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        want.0,
                        want.1
                    )));
                }
            }
        }
        if unit.len() != complex.rank(0) {
            return Err(Error::Shape(format!("unit has length {}, R_0 has rank {}", unit.len(), complex.rank(0))));
        }
        Ok(DGAlgebra { complex, mult, unit })
    }

    /// Leibniz rule, associativity and unitality in every degree up to `T`.
    pub fn validate(&self) -> Result<()> {
        let c = &self.complex;
        let t = c.truncation();
        for n in 1..=t {
            for p in 0..=n {
                let q = n - p;
                let (rp, rq) = (c.rank(p), c.rank(q));
                let lhs = c.d(n) * &self.mult[p][q];
                let mut rhs = IntMatrix::zeros(c.rank(n - 1), rp * rq);
                if p >= 1 {
                    rhs = &rhs + &(&self.mult[p - 1][q] * &c.d(p).kron(&IntMatrix::identity(rq)));
                }
                if q >= 1 {
                    let term = &self.mult[p][q - 1] * &IntMatrix::identity(rp).kron(c.d(q));
                    rhs = &rhs + &term.scale(&sign(p));
                }
                if lhs != rhs {
                    return Err(axiom("DGA", "Leibniz rule", format!("p={p}, q={q}")));
                }
            }
        }
        for p in 0..=t {
            for q in 0..=t - p {
                for s in 0..=t - p - q {
                    let left = &self.mult[p + q][s] * &self.mult[p][q].kron(&IntMatrix::identity(c.rank(s)));
                    let right = &self.mult[p][q + s] * &IntMatrix::identity(c.rank(p)).kron(&self.mult[q][s]);
                    if left != right {
                        return Err(axiom("DGA", "associativity", format!("degrees ({p},{q},{s})")));
                    }
                }
            }
        }
        let u = IntMatrix::column_vector(&self.unit);
        for p in 0..=t {
            let id = IntMatrix::identity(c.rank(p));
            if !(&self.mult[0][p] * &u.kron(&id)).is_identity() {
                return Err(axiom("DGA", "left unit", format!("degree {p}")));
            }
            if !(&self.mult[p][0] * &id.kron(&u)).is_identity() {
                return Err(axiom("DGA", "right unit", format!("degree {p}")));
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn truncation(&self) -> usize {
        self.complex.truncation()
    }

    pub fn mult(&self, p: usize, q: usize) -> &IntMatrix {
        &self.mult[p][q]
    }

    pub fn unit(&self) -> &[Int] {
        &self.unit
    }

    /// `x·y` for `x ∈ R_p`, `y ∈ R_q`.
    pub fn multiply(&self, p: usize, x: &[Int], q: usize, y: &[Int]) -> Vec<Int> {
        self.mult[p][q].mul_vec(&kron_vec(x, y))
    }

    /// `μ : R⊗R -> R` as a chain map.
    pub fn product_map(&self) -> ChainMap {
        let c = &self.complex;
        let (rr, layout) = tensor(c, c);
        let comps = (0..=c.truncation())
            .map(|n| {
                let mut m = IntMatrix::zeros(c.rank(n), layout.rank(n));
                for p in 0..=n {
                    if c.rank(p) * c.rank(n - p) > 0 {
                        m.set_block(0, layout.block_offset(n, p), &self.mult[p][n - p]);
                    }
                }
                m
            })
            .collect();
        ChainMap::new_unchecked(rr, c.clone(), comps).expect("product shapes")
    }

    /// `R^op` with `x ∘ y = (-1)^{|x||y|} y·x`.
    pub fn opposite(&self) -> DGAlgebra {
        let c = &self.complex;
        let t = c.truncation();
        let mult = (0..=t)
            .map(|p| {
                (0..=t - p)
                    .map(|q| (&self.mult[q][p] * &swap_matrix(c.rank(p), c.rank(q))).scale(&sign(p * q)))
                    .collect()
            })
            .collect();
        DGAlgebra {
            complex: c.clone(),
            mult,
            unit: self.unit.clone(),
        }
    }

    /// `xy = (-1)^{|x||y|} yx` for all homogeneous `x`, `y`.
    pub fn is_graded_commutative(&self) -> bool {
        self.mult == self.opposite().mult
    }

    pub fn truncate(&self, t: usize) -> DGAlgebra {
        let t = t.min(self.truncation());
        DGAlgebra {
            complex: self.complex.truncate(t),
            mult: (0..=t).map(|p| self.mult[p][..=t - p].to_vec()).collect(),
            unit: self.unit.clone(),
        }
    }

    /// `Z` concentrated in degree 0.
    pub fn integers(t: usize) -> DGAlgebra {
        let c = ChainComplex::unit(t);
        let mult = (0..=t)
            .map(|p| {
                (0..=t - p)
                    .map(|q| {
                        let mut m = IntMatrix::zeros(c.rank(p + q), c.rank(p) * c.rank(q));
                        if p + q == 0 {
                            m[(0, 0)] = one();
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        DGAlgebra {
            complex: c,
            mult,
            unit: vec![one()],
        }
    }

    /// `Z ⊕ C` with `(a,x)(b,y) = (ab, ay + bx)`; the `Z` summand is the first basis
    /// element in degree 0.
    pub fn square_zero(c: &ChainComplex) -> DGAlgebra {
        let t = c.truncation();
        let r = ChainComplex::unit(t).direct_sum(c);
        let mult = (0..=t)
            .map(|p| {
                (0..=t - p)
                    .map(|q| {
                        let (rp, rq) = (r.rank(p), r.rank(q));
                        let mut m = IntMatrix::zeros(r.rank(p + q), rp * rq);
                        if p == 0 {
                            for j in 0..rq {
                                m[(j, j)] = one();
                            }
                        }
                        if q == 0 {
                            for i in 0..rp {
                                m[(i, i * rq)] = one();
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![zero(); r.rank(0)];
        unit[0] = one();
        DGAlgebra { complex: r, mult, unit }
    }

    /// The tensor algebra `⊕_k C^{⊗k}` truncated at degree `T`; needs `C_0 = 0`.
    pub fn tensor_algebra(c: &ChainComplex) -> Result<DGAlgebra> {
        if c.rank(0) != 0 {
            return Err(Error::Precondition("tensor algebra needs C_0 = 0".into()));
        }
        Ok(word_algebra(c, c.truncation()))
    }

    /// The tensor algebra on `C` modulo words of length greater than `max_len`.
    ///
    /// The quotient is by a differential ideal, so generators may sit in degree 0.
    pub fn truncated_tensor_algebra(c: &ChainComplex, max_len: usize) -> DGAlgebra {
        word_algebra(c, max_len)
    }

    /// Words in `x, y` (degree 1) and `u, v` (degree 0) with `dx = u`, `dy = v`,
    /// modulo words of length three or more.
    pub fn xy_words(t: usize) -> DGAlgebra {
        let mut ranks = vec![0; t + 1];
        ranks[0] = 2;
        let mut diffs = Vec::new();
        if t >= 1 {
            ranks[1] = 2;
            diffs.push(IntMatrix::identity(2));
            for n in 2..=t {
                diffs.push(IntMatrix::zeros(ranks[n - 1], 0));
            }
        }
        let c = ChainComplex::new(ranks, diffs).expect("generating complex");
        word_algebra(&c, 2)
    }
}

/// A word is a sequence of generators `(degree, index)`.
type Word = Vec<(usize, usize)>;

struct WordBasis {
    words: Vec<Vec<Word>>,
    index: HashMap<Word, usize>,
}

fn word_basis(c: &ChainComplex, max_len: usize) -> WordBasis {
    let t = c.truncation();
    let mut words: Vec<Vec<Word>> = vec![Vec::new(); t + 1];
    fn extend(c: &ChainComplex, prefix: &mut Word, remaining: usize, len: usize, out: &mut Vec<Word>) {
        if len == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for deg in 0..=remaining {
            for idx in 0..c.rank(deg) {
                prefix.push((deg, idx));
                extend(c, prefix, remaining - deg, len - 1, out);
                prefix.pop();
            }
        }
    }
    for (n, slot) in words.iter_mut().enumerate() {
        for len in 0..=max_len {
            extend(c, &mut Vec::new(), n, len, slot);
        }
    }
    let index = words
        .iter()
        .flat_map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)))
        .collect();
    WordBasis { words, index }
}

fn word_algebra(c: &ChainComplex, max_len: usize) -> DGAlgebra {
    let t = c.truncation();
    let basis = word_basis(c, max_len);
    let ranks: Vec<usize> = basis.words.iter().map(Vec::len).collect();
    let diffs = (1..=t)
        .map(|n| {
            let mut m = IntMatrix::zeros(ranks[n - 1], ranks[n]);
            for (col, w) in basis.words[n].iter().enumerate() {
                let mut before = 0;
                for (pos, &(deg, idx)) in w.iter().enumerate() {
                    if deg >= 1 {
                        let d = c.d(deg);
                        for b in 0..c.rank(deg - 1) {
                            let coeff = &d[(b, idx)];
                            if is_zero(coeff) {
                                continue;
                            }
                            let mut image = w.clone();
                            image[pos] = (deg - 1, b);
                            m[(basis.index[&image], col)] += coeff * sign(before);
                        }
                    }
                    before += deg;
                }
            }
            m
        })
        .collect();
    let complex = ChainComplex::new(ranks.clone(), diffs).expect("word complex");
    let mult = (0..=t)
        .map(|p| {
            (0..=t - p)
                .map(|q| {
                    let mut m = IntMatrix::zeros(ranks[p + q], ranks[p] * ranks[q]);
                    for (i, x) in basis.words[p].iter().enumerate() {
                        for (j, y) in basis.words[q].iter().enumerate() {
                            if x.len() + y.len() <= max_len {
                                let xy: Word = x.iter().chain(y).copied().collect();
                                m[(basis.index[&xy], i * ranks[q] + j)] = one();
                            }
                        }
                    }
                    m
                })
                .collect()
        })
        .collect();
    DGAlgebra {
        complex,
        mult,
        unit: unit_vector(ranks[0], 0),
    }
}

/// The example library used by the ring checks, at truncation `t`.
pub fn named_algebras(t: usize) -> Vec<(String, DGAlgebra)> {
    let mut out = vec![
        ("integers".to_string(), DGAlgebra::integers(t)),
        ("square-zero Z[1]".to_string(), DGAlgebra::square_zero(&ChainComplex::sphere(1, t))),
    ];
    if t >= 1 {
        let mut ranks = vec![0; t + 1];
        ranks[0] = 1;
        ranks[1] = 1;
        let mut diffs = vec![IntMatrix::from_rows_i64(1, &[vec![2]])];
        for n in 2..=t {
            diffs.push(IntMatrix::zeros(ranks[n - 1], 0));
        }
        let c = ChainComplex::new(ranks, diffs).expect("times two");
        out.push(("square-zero Z-2->Z".to_string(), DGAlgebra::square_zero(&c)));
        out.push((
            "tensor algebra Z[1]".to_string(),
            DGAlgebra::tensor_algebra(&ChainComplex::sphere(1, t)).expect("C_0 = 0"),
        ));
        out.push(("xy words".to_string(), DGAlgebra::xy_words(t)));
    }
    out
}

/// A ring homomorphism of DGAs: a chain map preserving products and unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGAlgebraMap {
    source: DGAlgebra,
    target: DGAlgebra,
    map: ChainMap,
}

impl DGAlgebraMap {
    pub fn new(source: DGAlgebra, target: DGAlgebra, map: ChainMap) -> Result<Self> {
        let f = DGAlgebraMap { source, target, map };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.map.source() != self.source.complex() || self.map.target() != self.target.complex() {
            return Err(Error::Shape("map does not match the algebras".into()));
        }
        self.map.validate()?;
        if let Some(n) = self.multiplicative_defect() {
            return Err(axiom("DGA map", "multiplicativity", format!("degree {n}")));
        }
        if self.map.component(0).mul_vec(self.source.unit()) != self.target.unit() {
            return Err(axiom("DGA map", "unit", "degree 0".into()));
        }
        Ok(())
    }

    /// First total degree where `f μ ≠ μ (f⊗f)`.
    pub fn multiplicative_defect(&self) -> Option<usize> {
        let t = self.map.truncation();
        for n in 0..=t {
            for p in 0..=n {
                let q = n - p;
                let lhs = self.map.component(n) * self.source.mult(p, q);
                let rhs = self.target.mult(p, q) * &self.map.component(p).kron(self.map.component(q));
                if lhs != rhs {
                    return Some(n);
                }
            }
        }
        None
    }

    pub fn identity(r: &DGAlgebra) -> Self {
        DGAlgebraMap {
            source: r.clone(),
            target: r.clone(),
            map: ChainMap::identity(r.complex()),
        }
    }

    pub fn source(&self) -> &DGAlgebra {
        &self.source
    }

    pub fn target(&self) -> &DGAlgebra {
        &self.target
    }

    pub fn map(&self) -> &ChainMap {
        &self.map
    }
}

/// Column-sparse form of a product matrix, for axiom checks on large levels.
struct SparseProduct {
    rank: usize,
    cols: Vec<Vec<(usize, Int)>>,
}

fn sparse(v: &[Int]) -> Vec<(usize, Int)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !is_zero(x))
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

impl SparseProduct {
    fn new(m: &IntMatrix, rank: usize) -> Self {
        SparseProduct {
            rank,
            cols: (0..m.cols()).map(|j| sparse(&m.column(j))).collect(),
        }
    }

    fn mul(&self, x: &[(usize, Int)], y: &[(usize, Int)]) -> Vec<Int> {
        let mut out = vec![zero(); self.rank];
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                for (k, c) in &self.cols[i * self.rank + j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }
}

/// A simplicial ring: levelwise products `A_n⊗A_n -> A_n`.
///
/// Only the level-0 unit is stored; the level-`n` unit is its image under `s_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialRing {
    group: SimplicialAbGroup,
    mult: Vec<IntMatrix>,
    unit: Vec<Int>,
}

impl SimplicialRing {
    pub fn new(group: SimplicialAbGroup, mult: Vec<IntMatrix>, unit: Vec<Int>) -> Result<Self> {
        let a = Self::new_unchecked(group, mult, unit)?;
        a.validate()?;
        Ok(a)
    }

    pub fn new_unchecked(group: SimplicialAbGroup, mult: Vec<IntMatrix>, unit: Vec<Int>) -> Result<Self> {
        if mult.len() != group.truncation() + 1 {
            return Err(Error::Shape("one product matrix per level required".into()));
        }
        for (n, m) in mult.iter().enumerate() {
            let r = group.rank(n);
            if m.shape() != (r, r * r) {
                return Err(Error::Shape(format!("product at level {n} is {}x{}", m.rows(), m.cols())));
            }
        }
        if unit.len() != group.rank(0) {
            return Err(Error::Shape("unit must live in level 0".into()));
        }
        Ok(SimplicialRing { group, mult, unit })
    }

    /// Ring axioms in every level, and multiplicativity of every face and degeneracy.
    pub fn validate(&self) -> Result<()> {
        let a = &self.group;
        let t = a.truncation();
        let products: Vec<SparseProduct> =
            self.mult.iter().enumerate().map(|(n, m)| SparseProduct::new(m, a.rank(n))).collect();
        let basis = |i: usize| vec![(i, one())];
        for n in 0..=t {
            let r = a.rank(n);
            let pr = &products[n];
            let u = sparse(&self.unit_at(n));
            for i in 0..r {
                let e = unit_vector(r, i);
                if pr.mul(&u, &basis(i)) != e {
                    return Err(axiom("simplicial ring", "left unit", format!("level {n}")));
                }
                if pr.mul(&basis(i), &u) != e {
                    return Err(axiom("simplicial ring", "right unit", format!("level {n}")));
                }
            }
            for i in 0..r {
                for j in 0..r {
                    let xy = sparse(&pr.mul(&basis(i), &basis(j)));
                    for h in 0..r {
                        let yh = sparse(&pr.mul(&basis(j), &basis(h)));
                        if pr.mul(&xy, &basis(h)) != pr.mul(&basis(i), &yh) {
                            return Err(axiom("simplicial ring", "associativity", format!("level {n}")));
                        }
                    }
                }
            }
        }
        let columns = |m: &IntMatrix| -> Vec<Vec<(usize, Int)>> { (0..m.cols()).map(|j| sparse(&m.column(j))).collect() };
        for n in 1..=t {
            for i in 0..=n {
                let f = a.face(n, i);
                let lhs = f * &self.mult[n];
                let fc = columns(f);
                let r = a.rank(n);
                for x in 0..r {
                    for y in 0..r {
                        if lhs.column(x * r + y) != products[n - 1].mul(&fc[x], &fc[y]) {
                            return Err(axiom("simplicial ring", "face is multiplicative", format!("d_{i} at level {n}")));
                        }
                    }
                }
            }
        }
        for n in 0..t {
            for i in 0..=n {
                let s = a.degen(n, i);
                let lhs = s * &self.mult[n];
                let sc = columns(s);
                let r = a.rank(n);
                for x in 0..r {
                    for y in 0..r {
                        if lhs.column(x * r + y) != products[n + 1].mul(&sc[x], &sc[y]) {
                            return Err(axiom(
                                "simplicial ring",
                                "degeneracy is multiplicative",
                                format!("s_{i} at level {n}"),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &SimplicialAbGroup {
        &self.group
    }

    pub fn truncation(&self) -> usize {
        self.group.truncation()
    }

    pub fn mult(&self, n: usize) -> &IntMatrix {
        &self.mult[n]
    }

    pub fn unit(&self) -> &[Int] {
        &self.unit
    }

    /// `s_0 ⋯ s_0 1`.
    pub fn unit_at(&self, n: usize) -> Vec<Int> {
        let mut u = self.unit.clone();
        for k in 0..n {
            u = self.group.degen(k, 0).mul_vec(&u);
        }
        u
    }

    pub fn multiply(&self, n: usize, x: &[Int], y: &[Int]) -> Vec<Int> {
        self.mult[n].mul_vec(&kron_vec(x, y))
    }

    pub fn is_commutative(&self) -> bool {
        self.mult
            .iter()
            .enumerate()
            .all(|(n, m)| *m == m * &swap_matrix(self.group.rank(n), self.group.rank(n)))
    }

    /// `A^op`, levelwise `x ∘ y = yx`.
    pub fn opposite(&self) -> SimplicialRing {
        SimplicialRing {
            group: self.group.clone(),
            mult: self
                .mult
                .iter()
                .enumerate()
                .map(|(n, m)| m * &swap_matrix(self.group.rank(n), self.group.rank(n)))
                .collect(),
            unit: self.unit.clone(),
        }
    }

    /// The constant ring `Z`.
    pub fn integers(t: usize) -> SimplicialRing {
        SimplicialRing {
            group: SimplicialAbGroup::constant(1, t),
            mult: vec![IntMatrix::identity(1); t + 1],
            unit: vec![one()],
        }
    }

    /// `Sym(A)` modulo monomials of degree above `max_degree`, levelwise.
    pub fn truncated_symmetric_algebra(a: &SimplicialAbGroup, max_degree: usize) -> SimplicialRing {
        let t = a.truncation();
        let monomials: Vec<Vec<Vec<usize>>> = (0..=t)
            .map(|n| {
                let r = a.rank(n);
                let mut ms = vec![Vec::new()];
                if r > 0 {
                    for k in 1..=max_degree {
                        ms.extend(crate::util::monotone_sequences(k, r - 1));
                    }
                }
                ms
            })
            .collect();
        let index: Vec<HashMap<Vec<usize>, usize>> = monomials
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect())
            .collect();
        // f acts on a monomial by multiplying out the images of its letters
        let induced = |f: &IntMatrix, src: usize, tgt: usize| -> IntMatrix {
            let mut m = IntMatrix::zeros(monomials[tgt].len(), monomials[src].len());
            for (col, mono) in monomials[src].iter().enumerate() {
                let mut poly: BTreeMap<Vec<usize>, Int> = BTreeMap::from([(Vec::new(), one())]);
                for &letter in mono {
                    let image = sparse(&f.column(letter));
                    let mut next = BTreeMap::new();
                    for (word, c) in &poly {
                        for (k, v) in &image {
                            let mut w = word.clone();
                            w.push(*k);
                            w.sort_unstable();
                            *next.entry(w).or_insert_with(zero) += c * v;
                        }
                    }
                    poly = next;
                }
                for (word, c) in poly {
                    m[(index[tgt][&word], col)] += c;
                }
            }
            m
        };
        let ranks = monomials.iter().map(Vec::len).collect();
        let faces = (0..=t)
            .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| induced(a.face(n, i), n, n - 1)).collect() })
            .collect();
        let degens = (0..t).map(|n| (0..=n).map(|i| induced(a.degen(n, i), n, n + 1)).collect()).collect();
        let group = SimplicialAbGroup::new_unchecked(ranks, faces, degens).expect("symmetric algebra shapes");
        let mult = (0..=t)
            .map(|n| {
                let r = monomials[n].len();
                let mut m = IntMatrix::zeros(r, r * r);
                for (i, x) in monomials[n].iter().enumerate() {
                    for (j, y) in monomials[n].iter().enumerate() {
                        if x.len() + y.len() <= max_degree {
                            let mut w: Vec<usize> = x.iter().chain(y).copied().collect();
                            w.sort_unstable();
                            m[(index[n][&w], i * r + j)] = one();
                        }
                    }
                }
                m
            })
            .collect();
        SimplicialRing {
            group,
            mult,
            unit: unit_vector(monomials[0].len(), 0),
        }
    }
}

/// `N(A)` with product `N(μ) ∘ ∇`, in the given normalization.
pub fn normalize_ring_with(a: &SimplicialRing, na: &Normalization) -> Result<DGAlgebra> {
    let g = &a.group;
    let t = a.truncation();
    let shuffle = moore_shuffle(g, g, na, na);
    let layout = TensorLayout::of(&na.complex, &na.complex);
    let c = &na.complex;
    let mut mult: Vec<Vec<IntMatrix>> = (0..=t).map(|_| Vec::new()).collect();
    for p in 0..=t {
        for q in 0..=t - p {
            let n = p + q;
            let cols = &a.mult[n] * &shuffle[n].block(0, layout.block_offset(n, p), g.rank(n) * g.rank(n), c.rank(p) * c.rank(q));
            mult[p].push(&na.pi[n] * &cols);
        }
    }
    let unit = na.pi[0].mul_vec(&a.unit);
    DGAlgebra::new(c.clone(), mult, unit)
}

pub fn normalize_ring(a: &SimplicialRing) -> Result<(DGAlgebra, Normalization)> {
    let na = normalize(&a.group)?;
    Ok((normalize_ring_with(a, &na)?, na))
}

/// `ΓR` with product `Γ(μ) ∘ φ`: `(xy)_S = Σ_p μ(x_{S[0..=p]} ⊗ y_{S[p..]})`.
pub fn gamma_ring(r: &DGAlgebra) -> Result<(SimplicialRing, Gamma)> {
    let c = r.complex();
    let g = gamma(c)?;
    let mult = (0..=c.truncation())
        .map(|n| {
            let lvl = g.level(n);
            let rank = lvl.rank();
            let mut m = IntMatrix::zeros(rank, rank * rank);
            for s in lvl.canonical_subsets() {
                let k = s.len() - 1;
                for p in 0..=k {
                    let q = k - p;
                    if c.rank(p) * c.rank(q) == 0 || c.rank(k) == 0 {
                        continue;
                    }
                    let x = lvl.value_rows(&s[..=p], c);
                    let y = lvl.value_rows(&s[p..], c);
                    m.add_block(lvl.canonical_offset(s), 0, &(r.mult(p, q) * &x.kron(&y)));
                }
            }
            m
        })
        .collect();
    let ring = SimplicialRing::new(g.group().clone(), mult, r.unit().to_vec())?;
    Ok((ring, g))
}

/// `κ : R_1 -> (ΓR)_1`, `(κr)[ι] = r`, `(κr)[0] = 0`, `(κr)[1] = dr`, as a matrix.
pub fn kappa_matrix(g: &Gamma) -> Result<IntMatrix> {
    let c = g.complex();
    if c.truncation() < 1 {
        return Err(Error::Precondition("κ needs truncation at least 1".into()));
    }
    let lvl = g.level(1);
    let mut m = IntMatrix::zeros(lvl.rank(), c.rank(1));
    m.set_block(lvl.canonical_offset(&[0, 1]), 0, &IntMatrix::identity(c.rank(1)));
    Ok(m)
}

pub fn kappa(g: &Gamma, r: &[Int]) -> Result<Vec<Int>> {
    let k = kappa_matrix(g)?;
    if r.len() != k.cols() {
        return Err(Error::Shape(format!("R_1 has rank {}, got {} entries", k.cols(), r.len())));
    }
    Ok(k.mul_vec(r))
}

/// Checks `κr·κs = κ(r·ds)` on basis pairs; returns the first failing pair.
pub fn kappa_product_defect(r: &DGAlgebra, ring: &SimplicialRing, g: &Gamma) -> Result<Option<(usize, usize)>> {
    let c = r.complex();
    let k = kappa_matrix(g)?;
    if !is_injective(&k) {
        return Err(Error::Precondition("κ is not injective".into()));
    }
    for i in 0..c.rank(1) {
        for j in 0..c.rank(1) {
            let (x, y) = (unit_vector(c.rank(1), i), unit_vector(c.rank(1), j));
            let lhs = ring.multiply(1, &k.mul_vec(&x), &k.mul_vec(&y));
            let ds = c.d(1).mul_vec(&y);
            let rhs = k.mul_vec(&r.multiply(1, &x, 0, &ds));
            if lhs != rhs {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// A basis pair `(i, j)` of `R_1` with `κe_i·κe_j ≠ κe_j·κe_i`.
pub fn kappa_noncommuting_pair(r: &DGAlgebra, ring: &SimplicialRing, g: &Gamma) -> Result<Option<(usize, usize)>> {
    let k = kappa_matrix(g)?;
    let n = r.complex().rank(1);
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (k.column(i), k.column(j));
            if ring.multiply(1, &x, &y) != ring.multiply(1, &y, &x) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Monoidality of the counit and `NΓR ≅ R` as DGAs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounitRingReport {
    /// First degree where `ε ∘ N(φ) ∘ ∇ ≠ ε⊗ε`, if any.
    pub monoidal_defect: Option<usize>,
    pub multiplicative: bool,
    pub unital: bool,
    pub bijective: bool,
}

impl CounitRingReport {
    pub fn passed(&self) -> bool {
        self.monoidal_defect.is_none() && self.multiplicative && self.unital && self.bijective
    }
}

pub fn counit_ring_check(r: &DGAlgebra) -> Result<CounitRingReport> {
    let c = r.complex();
    let monoidal_defect = counit_monoidal_defect(c, c)?;
    let (ring, g) = gamma_ring(r)?;
    let ng = g.normalization()?;
    let nr = normalize_ring_with(&ring, &ng)?;
    let eps = counit_with(&g, &ng);
    let f = DGAlgebraMap {
        source: nr,
        target: r.clone(),
        map: eps,
    };
    Ok(CounitRingReport {
        monoidal_defect,
        multiplicative: f.multiplicative_defect().is_none(),
        unital: f.map.component(0).mul_vec(f.source.unit()) == r.unit(),
        bijective: f.map.is_degreewise_iso(),
    })
}

/// The comparison of `Γ(∇)∘φ∘(η⊗η)` with `η_{A⊗B}` for `A = B = Γ(Z[1])`.
#[derive(Clone, Debug)]
pub struct EtaWitness {
    pub composite: simplicial::SimplicialMap,
    pub eta: simplicial::SimplicialMap,
    pub composite_zero_in_level_one: bool,
    pub eta_injective_in_level_one: bool,
    /// `homotopy_solve` certified `N(composite) ≃ N(η_{A⊗B})`.
    pub homotopic_after_normalization: bool,
}

pub fn eta_not_monoidal_witness(t: usize) -> Result<EtaWitness> {
    if t < 1 {
        return Err(Error::Precondition("the witness lives in level 1".into()));
    }
    let ga = gamma(&ChainComplex::sphere(1, t))?;
    let a = ga.group();
    let na = normalize(a)?;
    let gna = gamma(&na.complex)?;
    let eta_a = unit(a, &na, &gna);
    let ab = simplicial::tensor(a, a);
    let nab = normalize(&ab)?;
    let gnab = gamma(&nab.complex)?;
    let g_tensor = gamma(&tensor(&na.complex, &na.complex).0)?;
    let phi = gamma_monoidal(&gna, &gna, &g_tensor)?;
    let shuffle = normalized_shuffle(a, a, &na, &na, &nab);
    let composite = gamma_map(&shuffle, &g_tensor, &gnab)
        .compose(&phi)
        .compose(&simplicial::tensor_maps(&eta_a, &eta_a));
    let eta = unit(&ab, &nab, &gnab);
    let target_norm = gnab.normalization()?;
    let n_composite = normalize_map_with(&composite, &nab, &target_norm);
    let n_eta = normalize_map_with(&eta, &nab, &target_norm);
    let homotopic = homotopy_solve(&n_composite, &n_eta).is_some_and(|h| h.certifies(&n_composite, &n_eta));
    Ok(EtaWitness {
        composite_zero_in_level_one: composite.component(1).is_zero(),
        eta_injective_in_level_one: !eta.component(1).is_zero() && is_injective(eta.component(1)),
        homotopic_after_normalization: homotopic,
        composite,
        eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::int;

    #[test]
    fn library_validates() {
        for t in [0, 1, 3] {
            for (name, a) in named_algebras(t) {
                a.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            }
        }
    }

    #[test]
    fn tensor_algebra_ranks_follow_compositions() {
        let c = ChainComplex::concentrated(&[0, 1, 2, 0, 1]);
        let a = DGAlgebra::tensor_algebra(&c).unwrap();
        // t_n = Σ_k c_k t_{n-k}
        let mut want = vec![1usize];
        for n in 1..=4 {
            want.push((1..=n).map(|k| c.rank(k) * want[n - k]).sum());
        }
        assert_eq!(a.complex().ranks(), &want[..]);
        assert_eq!(DGAlgebra::tensor_algebra(&ChainComplex::zero(3)).unwrap().complex().ranks(), &[1, 0, 0, 0]);
        assert_eq!(
            DGAlgebra::tensor_algebra(&ChainComplex::sphere(1, 4)).unwrap().complex().ranks(),
            &[1, 1, 1, 1, 1]
        );
        assert!(DGAlgebra::tensor_algebra(&ChainComplex::unit(2)).is_err());
    }

    #[test]
    fn xy_words_ranks() {
        let a = DGAlgebra::xy_words(2);
        assert_eq!(a.complex().ranks(), &[7, 10, 4]);
        assert!(!a.is_graded_commutative());
    }

    #[test]
    fn broken_axioms_are_named() {
        let a = DGAlgebra::square_zero(&ChainComplex::sphere(1, 2));
        let mut mult = a.mult.clone();
        mult[0][1] = IntMatrix::zeros(1, 1);
        let err = DGAlgebra::new(a.complex.clone(), mult, a.unit.clone()).unwrap_err();
        assert!(matches!(err, Error::Axiom { law: "left unit", .. }));
        // u·x = 0 breaks the Leibniz rule once dx = u
        let w = DGAlgebra::xy_words(1);
        let mut mult = w.mult.clone();
        mult[0][1] = IntMatrix::zeros(w.complex.rank(1), w.complex.rank(0) * w.complex.rank(1));
        let err = DGAlgebra::new(w.complex.clone(), mult, w.unit.clone()).unwrap_err();
        assert!(matches!(err, Error::Axiom { law: "Leibniz rule", .. }));
    }

    #[test]
    fn integers_round_trip() {
        let (ring, _) = gamma_ring(&DGAlgebra::integers(3)).unwrap();
        assert_eq!(ring, SimplicialRing::integers(3));
        let (n, _) = normalize_ring(&SimplicialRing::integers(3)).unwrap();
        assert_eq!(n, DGAlgebra::integers(3));
    }

    #[test]
    fn kappa_formulas() {
        let r = DGAlgebra::xy_words(2);
        let (ring, g) = gamma_ring(&r).unwrap();
        let c = r.complex();
        let x = vec![int(3), int(-1), int(0), int(2), int(0), int(0), int(0), int(0), int(0), int(1)];
        let kx = kappa(&g, &x).unwrap();
        let lvl = g.level(1);
        let values = |s: &[usize]| lvl.value_rows(s, c).mul_vec(&kx);
        assert_eq!(values(&[0, 1]), x);
        assert!(values(&[0]).iter().all(is_zero));
        assert_eq!(values(&[1]), c.d(1).mul_vec(&x));
        assert!(kappa(&g, &vec![zero(); 10]).unwrap().iter().all(is_zero));
        let y = unit_vector(10, 4);
        let sum: Vec<Int> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let lhs = kappa(&g, &sum).unwrap();
        let rhs: Vec<Int> = kx.iter().zip(kappa(&g, &y).unwrap()).map(|(a, b)| a + b).collect();
        assert_eq!(lhs, rhs);
        assert_eq!(kappa_product_defect(&r, &ring, &g).unwrap(), None);
        // x = word 0, y = word 1 of degree 1; xv and yu differ
        assert_eq!(kappa_noncommuting_pair(&r, &ring, &g).unwrap(), Some((0, 1)));
    }

    #[test]
    fn gamma_ring_product_is_gamma_mu_after_phi() {
        let r = DGAlgebra::square_zero(&ChainComplex::sphere(1, 2));
        let (ring, g) = gamma_ring(&r).unwrap();
        let grr = gamma(&tensor(r.complex(), r.complex()).0).unwrap();
        let phi = gamma_monoidal(&g, &g, &grr).unwrap();
        let via = gamma_map(&r.product_map(), &grr, &g).compose(&phi);
        for n in 0..=2 {
            assert_eq!(via.component(n), ring.mult(n));
        }
    }

    #[test]
    fn normalization_inverts_gamma_on_rings() {
        for (name, r) in named_algebras(2) {
            let report = counit_ring_check(&r).unwrap();
            assert!(report.passed(), "{name}: {report:?}");
        }
    }

    #[test]
    fn commutative_rings_give_graded_commutative_normalizations() {
        let a = SimplicialRing::truncated_symmetric_algebra(&simplicial::standard_simplex(1, 3), 2);
        a.validate().unwrap();
        assert!(a.is_commutative());
        let (n, _) = normalize_ring(&a).unwrap();
        assert!(n.is_graded_commutative());
        assert!(n.complex().rank(1) > 0);
        let (n, _) = normalize_ring(&SimplicialRing::integers(3)).unwrap();
        assert!(n.is_graded_commutative());
    }

    #[test]
    fn eta_is_not_monoidal() {
        let w = eta_not_monoidal_witness(3).unwrap();
        assert!(w.composite_zero_in_level_one);
        assert!(w.eta_injective_in_level_one);
        assert_eq!(w.eta.component(1).shape(), (1, 1));
        assert!(w.homotopic_after_normalization);
    }
}
