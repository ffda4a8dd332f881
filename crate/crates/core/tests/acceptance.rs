//! Runs every verification suite at the desk-scale bounds and reports one
//! line per acceptance criterion.

use std::collections::BTreeMap;

use dkforge::io::canonical;
use dkforge::suite::{run_suite, Report, SuiteConfig, SUITES};

const CRITERIA: [(u32, &str); 13] = [
    (1, "AW after the shuffle is the identity on NA⊗NB"),
    (2, "the shuffle after AW is homotopic to the identity and a quasi-isomorphism"),
    (3, "unit and counit are isomorphisms, Γ(ε) inverts η, rank formula for Γ"),
    (4, "the shuffle commutes with the symmetry; AW does not on ZΔ¹"),
    (5, "the counit is monoidal: ε ∘ N(φ) ∘ ∇ = ε⊗ε"),
    (6, "κr·κs = κ(r·ds), and κ products need not commute"),
    (7, "ε: NΓR → R is a DGA isomorphism"),
    (8, "the η composite vanishes in level one while η is injective"),
    (9, "the Γ comonoidal map and normalized AW are quasi-isomorphisms"),
    (10, "the ∇^A square commutes; N of a commutative ring is graded commutative"),
    (11, "graph tensor unit and associativity; extension of free modules"),
    (12, "model-structure predicates on canonical and random maps"),
    (13, "Smith normal form invariants on 500 random matrices"),
];

#[test]
fn acceptance() {
    let cfg = SuiteConfig::default();
    let reports: BTreeMap<&str, Report> = SUITES
        .iter()
        .map(|&name| (name, run_suite(name, &cfg).expect("known suite")))
        .collect();

    let mut failed = Vec::new();
    for (criterion, description) in CRITERIA {
        let verdicts: Vec<bool> = reports.values().filter_map(|r| r.criterion_passed(criterion)).collect();
        let pass = !verdicts.is_empty() && verdicts.iter().all(|&ok| ok);
        println!("criterion {criterion:>2}: {} ({description})", if pass { "pass" } else { "FAIL" });
        if !pass {
            failed.push(criterion);
        }
    }
    for report in reports.values().filter(|r| !r.passed()) {
        println!("{}", canonical(&report.to_json(false)));
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
