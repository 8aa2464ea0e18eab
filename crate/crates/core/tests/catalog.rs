use std::collections::HashMap;

use num_bigint::BigInt;
use pnbundles::catalog::{
    classify_presentation, enumerate, find, fingerprint, predicate_b, predicate_d, verify_entry,
    Classification, VerifyOptions,
};
use pnbundles::forms::{h0_dual, random_matrix};
use pnbundles::liaison::{bundle_from_ideal, IdealResolution};
use pnbundles::presentation::{cohomology_table, intermediate_vanishing};
use pnbundles::{Ambient, TwoTermPresentation};

const AMBIENTS: [u32; 6] = [2, 4, 5, 6, 7, 8];

#[test]
fn every_entry_verifies_for_small_parameters() {
    let opts = VerifyOptions { seed: 2, matrix_row_budget: 600 };
    for n in AMBIENTS {
        for r in 1..=n as u64 + 3 {
            for e in enumerate(n, Some(r)).unwrap() {
                let rep = verify_entry(&e, opts);
                assert!(rep.pass(), "{} at rank {r}: {:#?}", e.id, rep.checks);
            }
        }
    }
}

#[test]
fn classification_undoes_trivial_extension() {
    for n in AMBIENTS {
        for e in enumerate(n, None).unwrap() {
            for s in 0..=3 {
                let got = classify_presentation(&e.presentation.extend_by_trivial(s)).unwrap();
                assert_eq!(got, Classification::Match { id: e.id.clone(), trivial_excess: s });
            }
        }
    }
}

#[test]
fn fingerprints_separate_entries() {
    for n in AMBIENTS {
        let mut seen = HashMap::new();
        for e in enumerate(n, None).unwrap() {
            if let Some(other) = seen.insert(fingerprint(&e.presentation).unwrap(), e.id.clone()) {
                panic!("{} and {other} share a fingerprint", e.id);
            }
        }
    }
}

#[test]
fn line_bundle_entries_have_no_middle_cohomology() {
    for n in AMBIENTS {
        for e in enumerate(n, None).unwrap().into_iter().filter(|e| e.presentation.is_line_only()) {
            let (lo, hi) = e.presentation.decisive_window();
            let max_i = n as usize - 2;
            assert!(intermediate_vanishing(&e.presentation, lo..=hi, max_i).unwrap(), "{}", e.id);
        }
    }
}

#[test]
fn vanishing_on_a_hyperplane_lifts() {
    for n in [6u32, 7, 8] {
        for e in enumerate(n, None).unwrap() {
            let p = &e.presentation;
            let h = p.restrict_hyperplane().unwrap();
            assert_eq!(h.rank(), p.rank());
            assert_eq!(h.c1().unwrap(), p.c1().unwrap());
            let (lo, hi) = p.decisive_window();
            let below = intermediate_vanishing(&h, lo..=hi, n as usize - 3).unwrap();
            assert!(below, "{} restricted", e.id);
            assert!(intermediate_vanishing(p, lo..=hi, n as usize - 2).unwrap(), "{}", e.id);
        }
    }
}

#[test]
fn euler_characteristic_rows_agree() {
    for n in AMBIENTS {
        for e in enumerate(n, None).unwrap() {
            let (lo, hi) = e.presentation.decisive_window();
            for row in cohomology_table(&e.presentation, lo..=hi).unwrap().rows {
                assert_eq!(row.generic_euler_characteristic(), row.chi, "{} j={}", e.id, row.j);
            }
        }
    }
}

#[test]
fn generic_matrices_have_no_dual_sections() {
    for n in [2u32, 4] {
        for e in enumerate(n, None).unwrap().into_iter().filter(|e| e.presentation.is_line_only()) {
            for seed in 1..=3 {
                let m = random_matrix(&e.presentation, seed).unwrap();
                assert_eq!(h0_dual(&m), 0, "{}", e.id);
                assert_eq!(h0_dual(&m.extend_by_trivial(2)), 2, "{}", e.id);
            }
        }
    }
}

#[test]
fn serre_transforms_land_in_the_catalog() {
    // Resolutions of the degeneracy loci, each with r - 1 sections.
    let cases = [
        ("O(-4) -> O(-1)+O(-3)", "P2-1"),
        ("O(-4) -> 2O(-2)", "P2-3"),
        ("2O(-4) -> 2O(-3)+O(-2)", "P2-4"),
        ("O(-5) -> O(-2)+O(-3)", "P2-5"),
        ("O(-6) -> 2O(-3)", "P2-6"),
        ("O(-5)+O(-4) -> 3O(-3)", "P2-7"),
        ("3O(-4) -> 4O(-3)", "P2-8"),
    ];
    let amb = Ambient::new(2).unwrap();
    for (res, id) in cases {
        let r = IdealResolution::parse(amb, res).unwrap();
        let e = bundle_from_ideal(&r, 3, 1).unwrap();
        assert_eq!(
            classify_presentation(&e).unwrap(),
            Classification::Match { id: id.into(), trivial_excess: 0 },
            "{res}"
        );
        assert_eq!(e.to_string(), find(2, id).unwrap().presentation.to_string());
    }
}

#[test]
fn predicates_on_examples() {
    let amb = Ambient::new(4).unwrap();
    assert!(predicate_d(&TwoTermPresentation::parse(amb, "O(3)+2O").unwrap()).unwrap());
    let tv = find(4, "P4-r3-TV").unwrap().presentation;
    assert_eq!(predicate_b(&tv).unwrap(), Some(false));
    assert!(!predicate_d(&tv).unwrap());
    // Rank 2 <= n with a nonzero top class.
    let p = TwoTermPresentation::parse(amb, "O(-1) -> O + 2O(1)").unwrap();
    assert_eq!(p.chern().unwrap().c(2), BigInt::from(4));
    assert_eq!(predicate_b(&p).unwrap(), Some(false));
}
