use num_bigint::BigInt;
use proptest::prelude::*;

use pnbundles::grammar::{format_sum, parse_sum};
use pnbundles::liaison::{link, scheme_invariants, IdealResolution};
use pnbundles::presentation::cohomology_table;
use pnbundles::{chern_atom, chern_sum, Ambient, BundleAtom, ChernPoly, FreeSum, TwoTermPresentation};

/// Atoms whose Chern classes are supported: lines, `Ω^1(k)`, `T(k)`.
fn atom(n: u32) -> impl Strategy<Value = BundleAtom> {
    let amb = Ambient::new(n).unwrap();
    prop_oneof![
        (-6i64..=6).prop_map(BundleAtom::line),
        (-6i64..=6).prop_map(move |k| BundleAtom::cotangent(amb, k).unwrap()),
        (-6i64..=6).prop_map(move |k| BundleAtom::tangent(amb, k).unwrap()),
    ]
}

fn free_sum() -> impl Strategy<Value = FreeSum> {
    (1u32..=6).prop_flat_map(|n| {
        prop::collection::vec((atom(n), 1u64..=3), 1..5).prop_map(move |atoms| {
            FreeSum::from_atoms(Ambient::new(n).unwrap(), atoms).unwrap()
        })
    })
}

fn unit_poly() -> impl Strategy<Value = (u32, Vec<i64>)> {
    (1u32..=8).prop_flat_map(|n| (Just(n), prop::collection::vec(-20i64..=20, n as usize)))
}

fn line_presentation() -> impl Strategy<Value = TwoTermPresentation> {
    (2u32..=5).prop_flat_map(|n| {
        (
            prop::collection::vec(-4i64..=0, 0..3),
            prop::collection::vec(-1i64..=3, 1..5),
        )
            .prop_filter_map("L0 must outrank L1 and be able to receive it", move |(l1, l0)| {
                let amb = Ambient::new(n).unwrap();
                let p = TwoTermPresentation::new(
                    FreeSum::lines(amb, l1.iter().map(|&k| (k, 1))),
                    FreeSum::lines(amb, l0.iter().map(|&k| (k, 1))),
                )
                .ok()?;
                // Every L1 summand needs a target of at least its degree.
                let top = l0.iter().max()?;
                l1.iter().all(|k| k <= top).then_some(p)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn whitney(f in free_sum()) {
        let amb = f.ambient();
        let product = f
            .iter()
            .try_fold(ChernPoly::one(amb), |acc, (a, m)| acc.mul(&chern_atom(amb, a)?.pow(m as u32)))
            .unwrap();
        prop_assert_eq!(chern_sum(&f).unwrap(), product);
    }

    #[test]
    fn division_undoes_multiplication((n, a) in unit_poly(), b in prop::collection::vec(-20i64..=20, 8)) {
        let amb = Ambient::new(n).unwrap();
        let mut ac = vec![1]; ac.extend(a);
        let mut bc = vec![1]; bc.extend(b);
        let pa = ChernPoly::from_i64(amb, &ac);
        let pb = ChernPoly::from_i64(amb, &bc);
        let prod = pa.mul(&pb).unwrap();
        prop_assert_eq!(prod.div(&pb).unwrap(), pa.clone());
        prop_assert_eq!(prod.div(&pa).unwrap(), pb);
    }

    #[test]
    fn sums_print_and_reparse(f in free_sum()) {
        let s = format_sum(&f);
        prop_assert_eq!(parse_sum(f.ambient(), &s).unwrap(), f);
    }

    #[test]
    fn table_cells_are_consistent(p in line_presentation()) {
        let t = cohomology_table(&p, -6..=4).unwrap();
        for row in &t.rows {
            prop_assert_eq!(row.generic_euler_characteristic(), row.chi.clone());
            for c in &row.cells {
                prop_assert!(c.lo() <= c.generic() && c.generic() <= c.hi());
                prop_assert!(c.lo() >= &BigInt::from(0));
            }
            // Sums of line bundles have no intermediate cohomology.
            let n = p.ambient().n() as usize;
            for i in 1..n.saturating_sub(1) {
                prop_assert!(row.cells[i].is_exact_zero());
            }
        }
    }

    #[test]
    fn twisting_shifts_the_table(p in line_presentation(), k in -3i64..=3) {
        let t = cohomology_table(&p, -4..=2).unwrap();
        let s = cohomology_table(&p.twist(k), (-4 - k)..=(2 - k)).unwrap();
        for (a, b) in t.rows.iter().zip(&s.rows) {
            prop_assert_eq!(&a.cells, &b.cells);
        }
    }

    #[test]
    fn presentations_print_and_reparse(p in line_presentation()) {
        let s = p.to_string();
        prop_assert_eq!(TwoTermPresentation::parse(p.ambient(), &s).unwrap(), p);
    }

    #[test]
    fn linkage_complements_the_degree(d1 in 1i64..=4, d2 in 1i64..=4, a in 1i64..=3, b in 1i64..=3, n in 2u32..=5) {
        // Y a complete intersection (a, b) of smaller degrees lies on (d1, d2)
        // whenever a <= d1 and b <= d2.
        prop_assume!(a <= d1 && b <= d2 && a * b < d1 * d2);
        let amb = Ambient::new(n).unwrap();
        let y = pnbundles::liaison::ci_resolution(amb, a, b).unwrap();
        let l = link(&y, d1, d2, &[]).unwrap();
        let z = scheme_invariants(&l.resolution).unwrap();
        prop_assert_eq!(z.degree.clone() + scheme_invariants(&y).unwrap().degree, BigInt::from(d1 * d2));
        prop_assert_eq!(z.dimension, n as usize - 2);
        let shown = l.resolution.to_string();
        prop_assert_eq!(IdealResolution::parse(amb, &shown).unwrap(), l.resolution);
    }
}
