//! Verification suites: randomized and fixed checks of the identities the
//! library promises, collected into a deterministic report.
//!
//! Each randomized case draws from `case_rng(seed, tag, case)`; a failure
//! records the tag and case id, which is enough to replay it.

use std::time::{Duration, Instant};

use dkforge_linalg::{invariant_factors, kernel_basis, rank, snf, IntMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{
    counit_ring_check, eta_not_monoidal_witness, gamma_ring, kappa_noncommuting_pair, kappa_product_defect,
    named_algebras, normalize_ring, DGAlgebra, DGAlgebraMap, SimplicialRing,
};
use crate::chain::{homotopy_solve, model_predicates, symmetry, ChainComplex, ChainMap};
use crate::doldkan::{
    alexander_whitney, aw_apply, counit, counit_monoidal_defect, counit_with, gamma, gamma_comonoidal, gamma_map,
    moore_shuffle, normalize, normalize_map, normalize_map_with, normalized_aw, normalized_shuffle, unit,
    unnormalized, unnormalized_map,
};
use crate::enriched::{
    extend, extension_unit, extension_unit_is_quasi_iso, free_module, graph_associator, graph_tensor, restrict,
    triangle_identities_hold, yoneda_check, CategoryMap, ICategory, IGraph, OModule,
};
use crate::error::{Error, Result};
use crate::io::matrix_value;
use crate::modules_over::{
    augmentation, extend_scalars, extension_unit as dg_extension_unit, nabla_a, quillen_invariance_spot_check,
    relative_tensor_dg, triangle_identities_hold as dg_triangles, DGModule, SimplicialModule,
};
use crate::random::{self, case_rng, RNG_ALGORITHM};
use crate::simplicial::{self, standard_simplex, SimplicialAbGroup, SimplicialMap};
use crate::util::{binomial, one, swap_matrix};

pub const SUITES: [&str; 8] = [
    "eilenberg-zilber",
    "doldkan-iso",
    "ring-identities",
    "counterexamples",
    "modules",
    "enriched",
    "model-predicates",
    "linalg",
];

/// Instance bounds shared by every suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub truncation: usize,
    /// Largest rank of a random complex in any degree.
    pub max_rank: usize,
    /// Random cases per property.
    pub cases: usize,
    /// Largest object set for enriched categories.
    pub max_objects: usize,
    /// Largest `n` for a `ZΔⁿ` summand in random simplicial groups.
    pub max_simplex: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            truncation: 4,
            max_rank: 3,
            cases: 50,
            max_objects: 3,
            max_simplex: 2,
        }
    }
}

pub const MAX_RANK_VAR: &str = "DKFORGE_MAX_RANK";

impl SuiteConfig {
    /// Applies the `DKFORGE_MAX_RANK` cap, if set.
    pub fn capped_by_env(mut self) -> Result<Self> {
        if let Ok(v) = std::env::var(MAX_RANK_VAR) {
            let cap: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("{MAX_RANK_VAR} must be a non-negative integer, got '{v}'")))?;
            self.max_rank = self.max_rank.min(cap);
        }
        Ok(self)
    }

    /// Bounds for checks that build `N(A⊗B)` or `Γ(C⊗D)` as complexes; these
    /// grow like the square of the instance and stay at ranks one.
    fn reduced_rank(&self) -> usize {
        self.max_rank.min(1)
    }

    fn reduced_simplex(&self) -> usize {
        self.max_simplex.min(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub case: u64,
    pub witness: Value,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub criterion: u32,
    /// RNG tag for randomized checks; fixed checks have none.
    pub tag: Option<&'static str>,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub config: SuiteConfig,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// `None` when the suite has no check for `criterion`.
    pub fn criterion_passed(&self, criterion: u32) -> Option<bool> {
        let mut relevant = self.checks.iter().filter(|c| c.criterion == criterion).peekable();
        relevant.peek()?;
        Some(relevant.all(Check::passed))
    }

    /// Timings are left out unless asked for, so equal seeds give equal bytes.
    pub fn to_json(&self, timings: bool) -> Value {
        let seed = self.config.seed;
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let failures: Vec<Value> = c
                    .failures
                    .iter()
                    .map(|f| json!({"case": f.case, "seed": seed, "tag": c.tag, "witness": f.witness}))
                    .collect();
                let mut v = json!({
                    "name": c.name,
                    "criterion": c.criterion,
                    "cases": c.cases,
                    "status": status(c.passed()),
                    "failures": failures,
                });
                if timings {
                    v["seconds"] = json!(format!("{:.3}", c.elapsed.as_secs_f64()));
                }
                v
            })
            .collect();
        json!({
            "suite": self.suite,
            "seed": seed,
            "rng": RNG_ALGORITHM,
            "truncation": self.config.truncation,
            "bounds": {
                "max_rank": self.config.max_rank,
                "cases": self.config.cases,
                "max_objects": self.config.max_objects,
                "max_simplex": self.config.max_simplex,
            },
            "status": status(self.passed()),
            "checks": checks,
        })
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

/// Per-case outcome: `None` passes, `Some(witness)` fails.
type Outcome = Result<Option<Value>>;

fn witness_of(outcome: Outcome) -> Option<Value> {
    match outcome {
        Ok(w) => w,
        Err(e) => Some(json!({"error": e.to_string()})),
    }
}

fn degree_witness(n: usize) -> Option<Value> {
    Some(json!({"degree": n}))
}

fn require(ok: bool, detail: impl FnOnce() -> Value) -> Option<Value> {
    (!ok).then(detail)
}

/// Runs several properties that share one random instance per case.
fn properties<F>(
    cfg: &SuiteConfig,
    tag: &'static str,
    names: &[(&'static str, u32)],
    cases: usize,
    f: F,
) -> Vec<Check>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Vec<Option<Value>>> + Sync,
{
    let start = Instant::now();
    let mut results: Vec<(u64, Vec<Option<Value>>)> = (0..cases as u64)
        .into_par_iter()
        .map(|case| {
            let mut rng = case_rng(cfg.seed, tag, case);
            let out = match f(&mut rng) {
                Ok(v) => {
                    assert_eq!(v.len(), names.len(), "one outcome per property");
                    v
                }
                Err(e) => vec![witness_of(Err(e)); names.len()],
            };
            (case, out)
        })
        .collect();
    results.sort_by_key(|(case, _)| *case);
    let elapsed = start.elapsed();
    names
        .iter()
        .enumerate()
        .map(|(k, &(name, criterion))| Check {
            name,
            criterion,
            tag: Some(tag),
            cases,
            failures: results
                .iter()
                .filter_map(|(case, out)| out[k].clone().map(|witness| Failure { case: *case, witness }))
                .collect(),
            elapsed,
        })
        .collect()
}

fn property<F>(cfg: &SuiteConfig, tag: &'static str, name: &'static str, criterion: u32, f: F) -> Check
where
    F: Fn(&mut ChaCha8Rng) -> Outcome + Sync,
{
    properties(cfg, tag, &[(name, criterion)], cfg.cases, |rng| Ok(vec![witness_of(f(rng))]))
        .pop()
        .expect("one check")
}

/// A deterministic check over a list of labelled instances.
fn fixed<T: Sync>(name: &'static str, criterion: u32, items: &[T], f: impl Fn(&T) -> Outcome + Sync) -> Check {
    let start = Instant::now();
    let failures = items
        .par_iter()
        .enumerate()
        .map(|(case, item)| (case as u64, witness_of(f(item))))
        .collect::<Vec<_>>()
        .into_iter()
        .filter_map(|(case, w)| w.map(|witness| Failure { case, witness }))
        .collect();
    Check {
        name,
        criterion,
        tag: None,
        cases: items.len(),
        failures,
        elapsed: start.elapsed(),
    }
}

fn single(name: &'static str, criterion: u32, f: impl Fn() -> Outcome + Sync) -> Check {
    fixed(name, criterion, &[()], |_| f())
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report> {
    let checks = match name {
        "eilenberg-zilber" => eilenberg_zilber(cfg),
        "doldkan-iso" => doldkan_iso(cfg),
        "ring-identities" => ring_identities(cfg),
        "counterexamples" => counterexamples(cfg),
        "modules" => modules(cfg),
        "enriched" => enriched(cfg),
        "model-predicates" => model_predicates_suite(cfg),
        "linalg" => linalg(cfg),
        other => {
            return Err(Error::Precondition(format!(
                "unknown suite '{other}'; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(Report {
        suite: name.to_string(),
        config: cfg.clone(),
        checks,
    })
}

fn random_group(rng: &mut ChaCha8Rng, cfg: &SuiteConfig, max_rank: usize, max_simplex: usize) -> SimplicialAbGroup {
    random::simplicial_group(rng, cfg.truncation, max_rank, max_simplex)
}

fn eilenberg_zilber(cfg: &SuiteConfig) -> Vec<Check> {
    let t = cfg.truncation;
    let mut checks = properties(
        cfg,
        "ez-full",
        &[("aw-after-shuffle-is-identity", 1), ("shuffle-commutes-with-symmetry", 4)],
        cfg.cases,
        |rng| {
            let a = random_group(rng, cfg, cfg.max_rank, cfg.max_simplex);
            let b = random_group(rng, cfg, cfg.max_rank, cfg.max_simplex);
            let (na, nb) = (normalize(&a)?, normalize(&b)?);
            // columns of ms are the Moore chains ι π ∇(x⊗y)
            let ms = moore_shuffle(&a, &b, &na, &nb);
            let ms_ba = moore_shuffle(&b, &a, &nb, &na);
            let tau = symmetry(&na.complex, &nb.complex);
            let mut identity = None;
            let mut symmetric = None;
            for n in 0..=t {
                let round = aw_apply(&a, &b, &na, &nb, n, &ms[n]);
                if identity.is_none() && !round.is_identity() {
                    identity = Some(json!({"degree": n, "aw_after_shuffle": matrix_value(&round)}));
                }
                let lhs = &ms_ba[n] * tau.component(n);
                let rhs = &swap_matrix(a.rank(n), b.rank(n)) * &ms[n];
                if symmetric.is_none() && lhs != rhs {
                    symmetric = degree_witness(n);
                }
            }
            Ok(vec![identity, symmetric])
        },
    );
    checks.extend(properties(
        cfg,
        "ez-homotopy",
        &[("shuffle-after-aw-is-homotopic-to-identity", 2), ("normalized-aw-is-quasi-iso", 9)],
        cfg.cases,
        |rng| {
            let a = random_group(rng, cfg, cfg.reduced_rank(), cfg.reduced_simplex());
            let b = random_group(rng, cfg, cfg.reduced_rank(), cfg.reduced_simplex());
            let (na, nb) = (normalize(&a)?, normalize(&b)?);
            let nab = normalize(&simplicial::tensor(&a, &b))?;
            let sh = normalized_shuffle(&a, &b, &na, &nb, &nab);
            let aw = normalized_aw(&a, &b, &na, &nb, &nab);
            let round = sh.compose(&aw);
            let id = ChainMap::identity(&nab.complex);
            let homotopic = homotopy_solve(&round, &id).is_some_and(|h| h.certifies(&round, &id));
            let homotopy = require(homotopic && round.is_quasi_iso(), || {
                json!({"homotopy_found": homotopic, "ranks": nab.complex.ranks()})
            });
            let quasi = require(aw.is_quasi_iso(), || json!({"ranks": nab.complex.ranks()}));
            Ok(vec![homotopy, quasi])
        },
    ));
    checks.push(property(cfg, "ez-comonoidal", "nabla-tilde-is-quasi-iso", 9, |rng| {
        let c = random::complex(rng, t, cfg.reduced_rank());
        let d = random::complex(rng, t, cfg.reduced_rank());
        let (gc, gd) = (gamma(&c)?, gamma(&d)?);
        let gcd = gamma(&crate::chain::tensor(&c, &d).0)?;
        let nt = gamma_comonoidal(&gc, &gd, &gcd)?;
        nt.validate()?;
        Ok(require(normalize_map(&nt)?.is_quasi_iso(), || json!({"c": c.ranks(), "d": d.ranks()})))
    }));
    checks
}

fn doldkan_iso(cfg: &SuiteConfig) -> Vec<Check> {
    let t = cfg.truncation;
    let mut checks = properties(
        cfg,
        "dk-gamma",
        &[
            ("gamma-rank-formula", 3),
            ("counit-is-iso", 3),
            ("gamma-counit-inverts-unit", 3),
            ("counit-is-natural", 3),
            ("unit-is-natural", 3),
        ],
        cfg.cases,
        |rng| {
            let c = random::complex(rng, t, cfg.max_rank);
            let d = random::complex(rng, t, cfg.max_rank);
            let (gc, gd) = (gamma(&c)?, gamma(&d)?);
            let rank_defect = (0..=t).find(|&n| {
                let expected: usize = (0..=n).map(|k| binomial(n, k) * c.rank(k)).sum();
                gc.group().rank(n) != expected
            });
            let (eps_c, nc) = counit(&gc)?;
            let (eps_d, nd) = counit(&gd)?;
            let iso = require(eps_c.is_degreewise_iso(), || json!({"ranks": c.ranks()}));
            // Γ(ε_C) ∘ η_{ΓC} = id
            let gnc = gamma(&nc.complex)?;
            let eta = unit(gc.group(), &nc, &gnc);
            let round = gamma_map(&eps_c, &gnc, &gc).compose(&eta);
            let inverts = (0..=t).find(|&n| !round.component(n).is_identity()).and_then(degree_witness);
            // ε_D ∘ NΓ(f) = f ∘ ε_C and η_{ΓD} ∘ Γf = ΓNΓf ∘ η_{ΓC}
            let (f, _) = random::null_homotopic(rng, &c, &d);
            let gf = gamma_map(&f, &gc, &gd);
            let ngf = normalize_map_with(&gf, &nc, &nd);
            let counit_natural = eps_d.compose(&ngf).first_difference(&f.compose(&eps_c)).and_then(degree_witness);
            let gnd = gamma(&nd.complex)?;
            let eta_d = unit(gd.group(), &nd, &gnd);
            let lhs = eta_d.compose(&gf);
            let rhs = gamma_map(&ngf, &gnc, &gnd).compose(&eta);
            let unit_natural = (0..=t).find(|&n| lhs.component(n) != rhs.component(n)).and_then(degree_witness);
            Ok(vec![rank_defect.and_then(degree_witness), iso, inverts, counit_natural, unit_natural])
        },
    );
    checks.push(property(cfg, "dk-unit", "unit-is-iso", 3, |rng| {
        let a = random_group(rng, cfg, cfg.max_rank, cfg.max_simplex);
        let na = normalize(&a)?;
        let eta = unit(&a, &na, &gamma(&na.complex)?);
        Ok(require(eta.is_levelwise_iso(), || json!({"ranks": a.ranks()})))
    }));
    checks
}

fn ring_identities(cfg: &SuiteConfig) -> Vec<Check> {
    let t = cfg.truncation;
    let library = named_algebras(t);
    let mut checks = vec![property(cfg, "ring-lemma", "counit-is-monoidal", 5, |rng| {
        let c = random::complex(rng, t, cfg.max_rank);
        let d = random::complex(rng, t, cfg.max_rank);
        Ok(counit_monoidal_defect(&c, &d)?.and_then(degree_witness))
    })];
    let rings: Vec<_> = library
        .iter()
        .map(|(name, r)| (name.clone(), r.clone(), gamma_ring(r)))
        .collect();
    checks.push(fixed("kappa-product", 6, &rings, |(name, r, g)| {
        let (ring, g) = g.as_ref().map_err(|e| Error::Precondition(e.to_string()))?;
        Ok(kappa_product_defect(r, ring, g)?.map(|(i, j)| json!({"algebra": name, "r": i, "s": j})))
    }));
    checks.push(fixed("normalized-gamma-ring-is-the-ring", 7, &library, |(name, r)| {
        let report = counit_ring_check(r)?;
        Ok(require(report.passed(), || {
            json!({
                "algebra": name,
                "monoidal_defect": report.monoidal_defect,
                "multiplicative": report.multiplicative,
                "unital": report.unital,
                "bijective": report.bijective,
            })
        }))
    }));
    checks.push(property(cfg, "ring-commutative", "normalized-commutative-ring-is-graded-commutative", 10, |rng| {
        // Sym^{≤2} of a small simplicial group keeps the product matrices modest
        let k = rng.gen_range(0..=cfg.reduced_simplex());
        let a = standard_simplex(k, t).direct_sum(&SimplicialAbGroup::constant(cfg.reduced_rank(), t));
        let a = random::conjugate(rng, &a);
        let ring = SimplicialRing::truncated_symmetric_algebra(&a, 2);
        if !ring.is_commutative() {
            return Ok(Some(json!({"reason": "symmetric algebra is not commutative"})));
        }
        let (nr, _) = normalize_ring(&ring)?;
        Ok(require(nr.is_graded_commutative(), || json!({"ranks": nr.complex().ranks()})))
    }));
    checks
}

fn counterexamples(cfg: &SuiteConfig) -> Vec<Check> {
    let t = cfg.truncation.max(1);
    vec![
        single("aw-is-not-symmetric", 4, || {
            let a = standard_simplex(1, t);
            let swap = unnormalized_map(&simplicial::symmetry(&a, &a));
            let ca = unnormalized(&a);
            let lhs = alexander_whitney(&a, &a).compose(&swap);
            let rhs = symmetry(&ca, &ca).compose(&alexander_whitney(&a, &a));
            Ok(require(lhs.first_difference(&rhs).is_some(), || json!({"reason": "AW commuted with the symmetry"})))
        }),
        single("kappa-product-on-words", 6, || {
            let r = DGAlgebra::xy_words(t);
            let (ring, g) = gamma_ring(&r)?;
            Ok(kappa_product_defect(&r, &ring, &g)?.map(|(i, j)| json!({"r": i, "s": j})))
        }),
        single("kappa-does-not-commute", 6, || {
            let r = DGAlgebra::xy_words(t);
            let (ring, g) = gamma_ring(&r)?;
            Ok(require(kappa_noncommuting_pair(&r, &ring, &g)?.is_some(), || {
                json!({"reason": "no noncommuting pair found"})
            }))
        }),
        single("eta-composite-vanishes-in-level-one", 8, || {
            let w = eta_not_monoidal_witness(t)?;
            Ok(require(
                w.composite_zero_in_level_one && w.eta_injective_in_level_one && w.homotopic_after_normalization,
                || {
                    json!({
                        "composite_zero": w.composite_zero_in_level_one,
                        "eta_injective": w.eta_injective_in_level_one,
                        "homotopic": w.homotopic_after_normalization,
                        "composite_level_one": matrix_value(w.composite.component(1)),
                    })
                },
            ))
        }),
    ]
}

/// `T(C)` for `C = (Z --1--> Z)` in degrees 2 → 1, augmented onto `Z`.
fn acyclic_collapse(t: usize) -> Result<DGAlgebraMap> {
    let mut ranks = vec![0; t + 1];
    let mut diffs: Vec<IntMatrix> = Vec::with_capacity(t);
    if t >= 2 {
        ranks[1] = 1;
        ranks[2] = 1;
    }
    for n in 1..=t {
        diffs.push(if n == 2 { IntMatrix::identity(1) } else { IntMatrix::zeros(ranks[n - 1], ranks[n]) });
    }
    let c = ChainComplex::new(ranks, diffs)?;
    augmentation(&DGAlgebra::tensor_algebra(&c)?)
}

fn modules(cfg: &SuiteConfig) -> Vec<Check> {
    let t = cfg.truncation;
    // relative tensors present M⊗R⊗N, which outgrows memory quickly; three
    // levels and algebras of total rank at most twelve keep it to seconds
    let tm = t.min(3);
    let library = small_algebras(tm);
    let mut checks = properties(
        cfg,
        "mod-tensor",
        &[("tensor-with-the-ring", 10), ("tensor-over-the-integers", 10), ("free-modules-tensor-down", 10)],
        cfg.cases,
        |rng| {
            let (_, r) = &library[rng.gen_range(0..library.len())];
            let x = random::complex(rng, tm, cfg.reduced_rank());
            let m = DGModule::free(&x, r);
            let over_r = relative_tensor_dg(&m, &DGModule::regular(&r.opposite()))?.to_free()?;
            let unit = require(over_r.complex.ranks() == m.complex().ranks(), || {
                json!({"expected": m.complex().ranks(), "found": over_r.complex.ranks()})
            });
            let z = DGAlgebra::integers(tm);
            let y = random::complex(rng, tm, cfg.max_rank);
            let plain = relative_tensor_dg(&DGModule::free(&x, &z), &DGModule::free(&y, &z.opposite()))?.to_free()?;
            let expected = crate::chain::tensor(&x, &y).0;
            let integers = require(plain.complex.homology() == expected.homology() && plain.complex.ranks() == expected.ranks(), || {
                json!({"expected": expected.ranks(), "found": plain.complex.ranks()})
            });
            let n = DGModule::free(&y, &r.opposite());
            let down = relative_tensor_dg(&m, &n)?.to_free()?;
            let expected = crate::chain::tensor(&x, &y.truncate(tm)).0;
            let expected = crate::chain::tensor(&expected, r.complex()).0;
            // (X⊗R) ⊗_R (Y⊗R^op) ≅ X⊗Y⊗R
            let free = require(down.complex.ranks() == expected.ranks(), || {
                json!({"expected": expected.ranks(), "found": down.complex.ranks()})
            });
            Ok(vec![unit, integers, free])
        },
    );
    checks.push(match simplicial_rings(tm) {
        Ok(rings) => fixed("nabla-square-commutes", 10, &rings, |(name, a, x)| {
            let m = SimplicialModule::free(x, a);
            let n = SimplicialModule::regular(&a.opposite());
            let na = nabla_a(&m, &n)?;
            Ok(require(na.square_commutes()? && na.lift_independent()?, || json!({"ring": name})))
        }),
        Err(e) => {
            let msg = e.to_string();
            single("nabla-square-commutes", 10, || Ok(Some(json!({"error": msg}))))
        }
    });
    checks.push(single("extension-along-a-collapse", 10, || {
        let f = acyclic_collapse(tm)?;
        let samples = vec![
            DGModule::regular(f.source()),
            DGModule::free(&ChainComplex::sphere(1, tm), f.source()),
            DGModule::free(&ChainComplex::sphere(0, tm).direct_sum(&ChainComplex::sphere(2, tm)), f.source()),
        ];
        let quasi = quillen_invariance_spot_check(&f, &samples)?;
        let triangles = dg_triangles(&f, &samples[1], &DGModule::regular(f.target()))?;
        Ok(require(quasi.iter().all(|&q| q) && triangles, || json!({"quasi_iso": quasi, "triangles": triangles})))
    }));
    checks.push(fixed("extension-along-the-counit", 10, &library, |(name, r)| {
        let (a, g) = gamma_ring(r)?;
        let (nr, n) = normalize_ring(&a)?;
        let f = DGAlgebraMap::new(nr.clone(), r.clone(), counit_with(&g, &n))?;
        let m = DGModule::regular(&nr);
        let ext = extend_scalars(&f, &m)?;
        let iso = dg_extension_unit(&f, &m, &ext).is_degreewise_iso();
        let triangles = dg_triangles(&f, &m, &DGModule::regular(r))?;
        Ok(require(iso && triangles, || json!({"algebra": name, "unit_iso": iso, "triangles": triangles})))
    }));
    checks
}

fn small_algebras(t: usize) -> Vec<(String, DGAlgebra)> {
    named_algebras(t)
        .into_iter()
        .filter(|(_, r)| r.complex().total_rank() <= 12)
        .collect()
}

/// Rings with the free generators of the module tested over them.
fn simplicial_rings(t: usize) -> Result<Vec<(String, SimplicialRing, SimplicialAbGroup)>> {
    let point = SimplicialAbGroup::constant(1, t);
    let square_zero = gamma_ring(&DGAlgebra::square_zero(&ChainComplex::sphere(1, t)))?.0;
    let words = gamma_ring(&DGAlgebra::tensor_algebra(&ChainComplex::sphere(1, t))?)?.0;
    Ok(vec![
        ("integers".to_string(), SimplicialRing::integers(t), standard_simplex(1, t)),
        ("Γ(Z⊕Z[1])".to_string(), square_zero, point.clone()),
        ("Γ(T(Z[1]))".to_string(), words, point),
    ])
}

fn labels(k: usize) -> Vec<String> {
    (0..k).map(|i| i.to_string()).collect()
}

fn random_graph(rng: &mut ChaCha8Rng, objects: usize, t: usize, max_rank: usize) -> Result<IGraph> {
    IGraph::from_fn(labels(objects), |_, _| random::complex(rng, t, max_rank))
}

fn enriched(cfg: &SuiteConfig) -> Vec<Check> {
    let t = cfg.truncation;
    let max_objects = cfg.max_objects.max(1);
    let mut checks = properties(
        cfg,
        "enr-graph",
        &[("graph-tensor-ranks", 11), ("graph-tensor-unit", 11)],
        cfg.cases,
        |rng| {
            let s = rng.gen_range(1..=max_objects);
            let g = random_graph(rng, s, t, cfg.max_rank)?;
            let h = random_graph(rng, s, t, cfg.max_rank)?;
            let gh = graph_tensor(&g, &h)?;
            let mut ranks = None;
            'outer: for i in 0..s {
                for j in 0..s {
                    for n in 0..=t {
                        let expected: usize = (0..s)
                            .map(|k| (0..=n).map(|p| g.entry(k, j).rank(p) * h.entry(i, k).rank(n - p)).sum::<usize>())
                            .sum();
                        if gh.entry(i, j).rank(n) != expected {
                            ranks = Some(json!({"i": i, "j": j, "degree": n}));
                            break 'outer;
                        }
                    }
                }
            }
            let u = crate::enriched::unit_graph(labels(s), t);
            let unit = require(graph_tensor(&u, &g)? == g && graph_tensor(&g, &u)? == g, || json!({"objects": s}));
            Ok(vec![ranks, unit])
        },
    );
    // the triple tensor grows cubically, so associativity runs at the sizes the
    // exhaustive invariant names: two objects, ranks two, three levels
    let ta = t.min(3);
    checks.push(property(cfg, "enr-assoc", "graph-tensor-associator", 11, |rng| {
        let s = rng.gen_range(1..=max_objects.min(2));
        let rk = cfg.max_rank.min(2);
        let (g, h, e) = (random_graph(rng, s, ta, rk)?, random_graph(rng, s, ta, rk)?, random_graph(rng, s, ta, rk)?);
        for i in 0..s {
            for j in 0..s {
                graph_associator(&g, &h, &e, i, j)?;
            }
        }
        Ok(None)
    }));
    let tc = t.min(3);
    let sizes: Vec<usize> = (1..=max_objects).collect();
    checks.push(fixed("extend-free-is-free", 11, &sizes, |&s| {
        let f = acyclic_collapse(tc)?;
        let o = ICategory::chaotic(labels(s), f.source())?;
        let z = ICategory::chaotic(labels(s), f.target())?;
        let psi = CategoryMap::new(o.clone(), z.clone(), vec![f.map().clone(); s * s])?;
        for j in 0..s {
            let ext = extend(&psi, &free_module(&o, j))?;
            for i in 0..s {
                if ext.module.entry(i).ranks() != z.hom(i, j).ranks() || ext.module.entry(i).homology() != z.hom(i, j).homology() {
                    return Ok(Some(json!({"objects": s, "i": i, "j": j})));
                }
            }
        }
        Ok(None)
    }));
    checks.push(fixed("pointwise-quasi-iso-extension", 11, &sizes, |&s| {
        let f = acyclic_collapse(tc)?;
        let o = ICategory::chaotic(labels(s), f.source())?;
        let z = ICategory::chaotic(labels(s), f.target())?;
        let psi = CategoryMap::new(o.clone(), z.clone(), vec![f.map().clone(); s * s])?;
        if !psi.is_pointwise_quasi_iso() {
            return Ok(Some(json!({"reason": "Ψ is not a pointwise quasi-isomorphism"})));
        }
        for j in 0..s {
            let m = free_module(&o, j);
            if !extension_unit_is_quasi_iso(&psi, &m)? || !triangle_identities_hold(&psi, &m, &free_module(&z, j))? {
                return Ok(Some(json!({"objects": s, "j": j})));
            }
        }
        Ok(None)
    }));
    checks.push(single("identity-extension-and-yoneda", 11, || {
        let c = ChainComplex::new(vec![1, 1], vec![IntMatrix::from_rows_i64(1, &[vec![2]])])?;
        let o = ICategory::arrow(&c)?;
        let id = CategoryMap::identity(&o);
        for j in 0..2 {
            let f = free_module(&o, j);
            let ext = extend(&id, &f)?;
            let back = restrict(&id, &ext.module)?;
            let iso = extension_unit(&f, &ext).iter().all(ChainMap::is_degreewise_iso);
            if !iso || back.entry(0).ranks() != f.entry(0).ranks() {
                return Ok(Some(json!({"j": j, "unit_iso": iso})));
            }
            for target in 0..2 {
                let report = yoneda_check(&o, j, &free_module(&o, target))?;
                if !report.holds() {
                    return Ok(Some(json!({"j": j, "target": target, "hom_rank": report.hom_rank, "cycle_rank": report.cycle_rank})));
                }
            }
        }
        Ok(None)
    }));
    let tl = t.min(2);
    checks.push(fixed("singleton-categories-are-monoids", 11, &small_algebras(tl), |(name, r)| {
        let o = ICategory::from_monoid(r)?;
        let back = o.to_monoid()?;
        let m = DGModule::free(&ChainComplex::sphere(0, tl), r);
        let f = DGAlgebraMap::identity(r);
        let psi = CategoryMap::new(o.clone(), o, vec![f.map().clone()])?;
        let dg = extend_scalars(&f, &m)?;
        let en = extend(&psi, &OModule::from_dg_module(&m)?)?;
        let agree = en.quotients[0] == dg.quotient && en.module == OModule::from_dg_module(&dg.module)?;
        Ok(require(back == *r && agree, || json!({"algebra": name, "roundtrip": back == *r, "extension_agrees": agree})))
    }));
    checks
}

fn model_predicates_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let t = cfg.truncation.max(2);
    let mut checks = vec![single("canonical-examples", 12, || {
        let z = ChainComplex::sphere(0, t);
        let zero = ChainComplex::zero(t);
        let disk = disk(2, t)?;
        let two = ChainMap::identity(&z).scale(&crate::util::int(2));
        // (map, fibration, cofibration, weak equivalence)
        let cases = [
            ("Z[0] -> 0", ChainMap::zero(&z, &zero), true, false, false),
            ("0 -> Z[1]", ChainMap::zero(&zero, &ChainComplex::sphere(1, t)), false, true, false),
            ("2: Z[0] -> Z[0]", two, true, false, false),
            ("id Z[0]", ChainMap::identity(&z), true, true, true),
            ("0 -> D(2)", ChainMap::zero(&zero, &disk), false, true, true),
            ("D(2) -> 0", ChainMap::zero(&disk, &zero), true, false, true),
        ];
        for (name, f, fib, cof, weq) in cases {
            let p = model_predicates(&f);
            if (p.is_fibration, p.is_cofibration, p.is_weak_equivalence) != (fib, cof, weq) {
                return Ok(Some(json!({"map": name, "fibration": p.is_fibration, "cofibration": p.is_cofibration, "weak_equivalence": p.is_weak_equivalence})));
            }
        }
        // every simplicial abelian group is fibrant; Moore's criterion on a non-surjection
        let a = standard_simplex(1, t);
        let to_zero = SimplicialMap::zero(&a, &SimplicialAbGroup::zero(t));
        let from_zero = SimplicialMap::zero(&SimplicialAbGroup::zero(t), &a);
        if !crate::simplicial::is_fibration(&to_zero)? || crate::simplicial::is_fibration(&from_zero)? {
            return Ok(Some(json!({"map": "ZΔ¹ -> 0 / 0 -> ZΔ¹"})));
        }
        Ok(None)
    })];
    checks.extend(properties(
        cfg,
        "model-random",
        &[("predicates-match-smith-form", 12), ("homotopic-to-identity-is-weak-equivalence", 12), ("simplicial-fibrations-normalize", 12)],
        cfg.cases,
        |rng| {
            let c = random::complex(rng, cfg.truncation, cfg.max_rank);
            let d = random::complex(rng, cfg.truncation, cfg.max_rank);
            // an arbitrary chain map: null-homotopic plus a projection or inclusion of a summand
            let (h, _) = random::null_homotopic(rng, &c, &c.direct_sum(&d));
            let inclusion = crate::chain::direct_sum_maps(&ChainMap::identity(&c), &ChainMap::zero(&ChainComplex::zero(cfg.truncation), &d));
            let f = if rng.gen_bool(0.5) { h.add(&inclusion) } else { h };
            let p = model_predicates(&f);
            let fib = (1..=f.truncation()).all(|n| {
                let m = f.component(n);
                invariant_factors(m).iter().filter(|x| **x == one()).count() == m.rows()
            });
            let cof = (0..=f.truncation()).all(|n| {
                let m = f.component(n);
                invariant_factors(m).iter().filter(|x| **x == one()).count() == m.cols()
            });
            let smith = require(p.is_fibration == fib && p.is_cofibration == cof, || {
                json!({"fibration": [p.is_fibration, fib], "cofibration": [p.is_cofibration, cof]})
            });
            let (g, _) = random::null_homotopic(rng, &c, &c);
            let near_identity = ChainMap::identity(&c).add(&g);
            let weq = require(model_predicates(&near_identity).is_weak_equivalence, || json!({"ranks": c.ranks()}));
            // N(Γf) ≅ f, so Γf is a fibration exactly when f is surjective in positive degrees
            let ts = cfg.truncation.min(3);
            let small_c = random::complex(rng, ts, cfg.reduced_rank() + 1);
            let small_d = random::complex(rng, ts, cfg.reduced_rank() + 1);
            let sum = small_d.direct_sum(&small_c);
            let (k, _) = random::null_homotopic(rng, &sum, &small_d);
            let k = if rng.gen_bool(0.5) { k.add(&projection(&small_d, &small_c)?) } else { k };
            let (gs, gt) = (gamma(k.source())?, gamma(k.target())?);
            let gk = gamma_map(&k, &gs, &gt);
            let fibration = require(crate::simplicial::is_fibration(&gk)? == model_predicates(&k).is_fibration, || {
                json!({"source": k.source().ranks(), "target": k.target().ranks()})
            });
            Ok(vec![smith, weq, fibration])
        },
    ));
    checks
}

/// `D(m)`: `Z` in degrees `m` and `m-1` joined by the identity.
fn disk(m: usize, t: usize) -> Result<ChainComplex> {
    let ranks: Vec<usize> = (0..=t).map(|n| usize::from(n + 1 == m || n == m)).collect();
    let diffs = (1..=t)
        .map(|n| if n == m { IntMatrix::identity(1) } else { IntMatrix::zeros(ranks[n - 1], ranks[n]) })
        .collect();
    ChainComplex::new(ranks, diffs)
}

/// `D⊕C -> D`.
fn projection(d: &ChainComplex, c: &ChainComplex) -> Result<ChainMap> {
    let comps = (0..=d.truncation())
        .map(|n| IntMatrix::identity(d.rank(n)).hstack(&IntMatrix::zeros(d.rank(n), c.rank(n))))
        .collect();
    ChainMap::new(d.direct_sum(c), d.clone(), comps)
}

fn linalg(cfg: &SuiteConfig) -> Vec<Check> {
    const MATRICES: usize = 500;
    properties(
        cfg,
        "linalg-snf",
        &[("smith-form-invariants", 13), ("kernel-basis", 13)],
        MATRICES,
        |rng| {
            let (m, n) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
            let a = random::matrix(rng, m, n, 9);
            let s = snf(&a);
            let r = rank(&a);
            let diag = s.diagonal();
            let nonzero: Vec<_> = diag.iter().filter(|x| !crate::util::is_zero(x)).cloned().collect();
            let shape_ok = (&(&s.u * &a) * &s.v) == s.d;
            let unimodular = s.u.det().clone() * s.u.det() == one() && s.v.det().clone() * s.v.det() == one();
            let diagonal = (0..m).all(|i| (0..n).all(|j| i == j || crate::util::is_zero(&s.d[(i, j)])));
            let ordered = diag.iter().all(|x| *x >= crate::util::zero())
                && nonzero.windows(2).all(|w| crate::util::is_zero(&(&w[1] % &w[0])))
                && diag.iter().skip(nonzero.len()).all(crate::util::is_zero);
            let factors = invariant_factors(&a) == nonzero && nonzero.len() == r;
            let smith = require(shape_ok && unimodular && diagonal && ordered && factors, || {
                json!({
                    "matrix": matrix_value(&a),
                    "uav_is_d": shape_ok,
                    "unimodular": unimodular,
                    "diagonal": diagonal,
                    "divisibility": ordered,
                    "factors_match_rank": factors,
                })
            });
            let k = kernel_basis(&a);
            let kernel = require((&a * &k).is_zero() && k.cols() == n - r && dkforge_linalg::is_saturated(&k), || {
                json!({"matrix": matrix_value(&a), "kernel": matrix_value(&k)})
            });
            Ok(vec![smith, kernel])
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SuiteConfig {
        SuiteConfig {
            seed: 3,
            truncation: 2,
            max_rank: 1,
            cases: 3,
            max_objects: 2,
            max_simplex: 1,
        }
    }

    #[test]
    fn unknown_suites_are_rejected() {
        assert!(run_suite("homotopy", &tiny()).is_err());
    }

    #[test]
    fn every_suite_passes_at_tiny_sizes() {
        for name in SUITES {
            let report = run_suite(name, &tiny()).unwrap();
            assert!(report.passed(), "{}", crate::io::canonical(&report.to_json(false)));
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run_suite("linalg", &tiny()).unwrap().to_json(false);
        let b = run_suite("linalg", &tiny()).unwrap().to_json(false);
        assert_eq!(crate::io::canonical(&a), crate::io::canonical(&b));
        assert!(a.get("checks").unwrap()[0].get("seconds").is_none());
    }

    #[test]
    fn failures_carry_their_replay_coordinates() {
        let check = property(&tiny(), "always-fails", "demo", 0, |rng| Ok(Some(json!({"draw": rng.gen::<u32>()}))));
        let report = Report { suite: "demo".into(), config: tiny(), checks: vec![check] };
        let v = report.to_json(false);
        let failure = &v["checks"][0]["failures"][1];
        assert_eq!(failure["case"], json!(1));
        assert_eq!(failure["seed"], json!(3));
        assert_eq!(failure["tag"], json!("always-fails"));
        let replay: u32 = case_rng(3, "always-fails", 1).gen();
        assert_eq!(failure["witness"]["draw"], json!(replay));
    }
}
