//! The globally generated bundles with `c1 = 3` on `P^n` (`n != 3`) that are
//! not sums of line bundles, with their expected invariants, a verification
//! battery, and fingerprinting of arbitrary presentations.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cohomology::{h_sum, Ambient, BundleAtom, FreeSum};
use crate::error::{domain, Error, Result};
use crate::forms::{h0_dual, random_matrix, section_map};
use crate::presentation::{
    cohomology_table, global_generation_certificate, horrocks_split_check, vanishing_pattern,
    CaseLabel, GgVerdict, SplitVerdict, TwoTermPresentation,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub c1: i64,
    pub c2: i64,
    pub case: CaseLabel,
    #[serde(rename = "degZ")]
    pub deg_z: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub n: u32,
    pub rank: u64,
    #[serde(serialize_with = "serialize_display")]
    pub presentation: TwoTermPresentation,
    pub expected: Expected,
    pub provenance: String,
    /// Trivial summands added to the family's smallest-rank member.
    pub trivial_excess: u64,
}

fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

struct Family {
    case: CaseLabel,
    deg_z: i64,
    scheme: &'static str,
    /// `(L1, L0)` twists and multiplicities at rank `r`.
    shape: fn(u64) -> (Vec<(i64, u64)>, Vec<(i64, u64)>),
}

const FAMILIES: [Family; 7] = [
    Family {
        case: CaseLabel::I,
        deg_z: 3,
        scheme: "a complete intersection of type (1,3)",
        shape: |r| (vec![(-1, 1)], vec![(0, r), (2, 1)]),
    },
    Family {
        case: CaseLabel::II,
        deg_z: 4,
        scheme: "a complete intersection of type (2,2)",
        shape: |r| (vec![(-1, 1)], vec![(0, r - 1), (1, 2)]),
    },
    Family {
        case: CaseLabel::II,
        deg_z: 5,
        scheme: "a degree-5 scheme resolved by 2O(-4) -> 2O(-3)+O(-2) (Castelnuovo type)",
        shape: |r| (vec![(-1, 2)], vec![(0, r + 1), (1, 1)]),
    },
    Family {
        case: CaseLabel::II,
        deg_z: 6,
        scheme: "a complete intersection of type (2,3)",
        shape: |r| (vec![(-2, 1)], vec![(0, r), (1, 1)]),
    },
    Family {
        case: CaseLabel::III,
        deg_z: 6,
        scheme: "a degree-6 scheme resolved by 3O(-4) -> 4O(-3) (Bordiga type)",
        shape: |r| (vec![(-1, 3)], vec![(0, r + 3)]),
    },
    Family {
        case: CaseLabel::III,
        deg_z: 7,
        scheme: "a degree-7 scheme linked to a complete intersection (1,2) by one of type (3,3)",
        shape: |r| (vec![(-2, 1), (-1, 1)], vec![(0, r + 2)]),
    },
    Family {
        case: CaseLabel::III,
        deg_z: 9,
        scheme: "a complete intersection of type (3,3)",
        shape: |r| (vec![(-3, 1)], vec![(0, r + 1)]),
    },
];

fn entry(
    id: String,
    presentation: TwoTermPresentation,
    case: CaseLabel,
    deg_z: i64,
    provenance: String,
) -> CatalogEntry {
    let rank = presentation.rank().to_u64().expect("catalog ranks are small");
    CatalogEntry {
        id,
        n: presentation.ambient().n(),
        rank,
        presentation,
        expected: Expected {
            c1: 3,
            c2: deg_z,
            case,
            deg_z,
        },
        provenance,
        trivial_excess: 0,
    }
}

fn family_entry(amb: Ambient, r: u64, k: usize, id: String, setting: &str) -> CatalogEntry {
    let f = &FAMILIES[k];
    let (l1, l0) = (f.shape)(r);
    let p = TwoTermPresentation::new(FreeSum::lines(amb, l1), FreeSum::lines(amb, l0))
        .expect("family shapes have positive rank");
    let provenance = format!(
        "{setting}, family {}: r - 1 sections degenerate along {}",
        k + 1,
        f.scheme
    );
    entry(id, p, f.case, f.deg_z, provenance)
}

/// Entries of smallest rank for `n` (rank `r` for the families above
/// `P^5`), before any trivial extension.
fn base_entries(amb: Ambient, r: u64) -> Vec<CatalogEntry> {
    let n = amb.n();
    match n {
        2 => {
            let out: Vec<_> = (0..7)
                .map(|k| family_entry(amb, 2, k, String::new(), "rank 2 on P^2"))
                .collect();
            // Listed order on the plane: (1), T, (2), (3), (4), (7), (6), (5).
            let order = [0, 1, 2, 3, 6, 5, 4];
            let mut sorted: Vec<_> = order.iter().map(|&k| out[k].clone()).collect();
            let tangent = TwoTermPresentation::from_sum(
                FreeSum::from_atoms(amb, [(BundleAtom::tangent(amb, 0).expect("T on P^2"), 1)])
                    .expect("atom on P^2"),
            )
            .expect("rank 2");
            sorted.insert(
                1,
                entry(
                    String::new(),
                    tangent,
                    CaseLabel::II,
                    3,
                    "rank 2 on P^2: the tangent bundle, two sections degenerate along three general points"
                        .into(),
                ),
            );
            for (i, e) in sorted.iter_mut().enumerate() {
                e.id = format!("P2-{}", i + 1);
            }
            sorted
        }
        4 => {
            let tv = TwoTermPresentation::new(
                FreeSum::from_atoms(amb, [(BundleAtom::tangent(amb, -2).expect("T on P^4"), 1)])
                    .expect("atom on P^4"),
                FreeSum::lines(amb, [(0, 7)]),
            )
            .expect("rank 3");
            let mut out = vec![entry(
                "P4-r3-TV".into(),
                tv,
                CaseLabel::III,
                5,
                "rank 3 on P^4: dual of the Trautmann-Vetter (Tango) bundle, two sections degenerate along an elliptic quintic scroll".into(),
            )];
            out.extend((0..7).map(|k| family_entry(amb, 4, k, format!("P4-r4-{}", k + 1), "rank 4 on P^4")));
            let omega = TwoTermPresentation::from_sum(
                FreeSum::from_atoms(amb, [(BundleAtom::cotangent(amb, 2).expect("Om on P^4"), 1)])
                    .expect("atom on P^4"),
            )
            .expect("rank 4");
            out.push(entry(
                "P4-r4-8".into(),
                omega,
                CaseLabel::III,
                4,
                "rank 4 on P^4: twisted cotangent bundle Om(2), three sections degenerate along a Veronese surface".into(),
            ));
            out
        }
        5 => (0..7)
            .map(|k| family_entry(amb, 5, k, format!("P5-r5-{}", k + 1), "rank 5 on P^5"))
            .collect(),
        _ => (0..7)
            .map(|k| family_entry(amb, r, k, format!("Pn-v-{}", k + 1), "rank r >= n on P^n, n >= 5"))
            .collect(),
    }
}

fn check_ambient(n: u32) -> Result<Ambient> {
    match n {
        0 | 1 => domain(format!("the catalog starts at P^2, got n = {n}")),
        3 => Err(Error::OutOfScope(
            "P^3 is excluded: its globally generated bundles with c1 = 3 form a separate classification".into(),
        )),
        _ => Ambient::new(n),
    }
}

/// The catalog on `P^n`. With `rank = Some(r)`, the entries of rank exactly
/// `r`: smaller-rank members extended by trivial summands when `r` exceeds
/// their rank, nothing below the smallest rank.
pub fn enumerate(n: u32, rank: Option<u64>) -> Result<Vec<CatalogEntry>> {
    let amb = check_ambient(n)?;
    let n64 = n as u64;
    let Some(r) = rank else {
        return Ok(base_entries(amb, n64));
    };
    // Above P^5 every rank r >= n is a family member in its own right.
    let base = base_entries(amb, if n >= 6 { r.max(n64) } else { n64 });
    Ok(base
        .into_iter()
        .filter(|e| e.rank <= r)
        .map(|e| {
            let s = r - e.rank;
            if s == 0 {
                return e;
            }
            let mut x = e.clone();
            x.presentation = e.presentation.extend_by_trivial(s);
            x.rank = r;
            x.trivial_excess = s;
            x.provenance = format!("{}; extended by {s} trivial summands", e.provenance);
            x
        })
        .collect())
}

pub fn find(n: u32, id: &str) -> Result<CatalogEntry> {
    enumerate(n, None)?
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Domain(format!("no catalog entry {id} on P^{n}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Largest total `h^0(L0(j))` the matrix-mode check may build.
    pub matrix_row_budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 1,
            matrix_row_budget: 4000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub n: u32,
    pub rank: u64,
    pub checks: Vec<Check>,
    #[serde(serialize_with = "crate::serialize_bigint")]
    pub c2: BigInt,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn check(name: &'static str, res: Result<(bool, String)>) -> Check {
    match res {
        Ok((pass, detail)) => Check { name, pass, detail },
        Err(e) => Check {
            name,
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Section-map `h^0(E(j))` against the formula, from the bottom of the
/// decisive window upward while the row budget lasts, then `h^0(E^∨)`
/// against the trivial excess.
fn matrix_agreement(e: &CatalogEntry, opts: VerifyOptions) -> Result<(bool, String)> {
    let p = &e.presentation;
    if !p.is_line_only() {
        return Ok((true, "skipped: not a sum of line bundles".into()));
    }
    // `E ⊕ sO`: a generic map for `E`, zero into the added summands.
    let base = p.cancel_trivial_subbundle(e.trivial_excess)?;
    let m = random_matrix(&base, opts.seed)?.extend_by_trivial(e.trivial_excess);
    let (lo, hi) = p.decisive_window();
    let table = cohomology_table(p, lo..=hi)?;
    let mut used = 0usize;
    let mut last = lo - 1;
    for j in lo..=hi {
        let rows = h_sum(p.l0(), j, 0)?.to_usize().unwrap_or(usize::MAX);
        if j > lo && used.saturating_add(rows) > opts.matrix_row_budget {
            break;
        }
        used += rows;
        let sm = section_map(&m, j);
        let formula = table.cell(0, j).expect("row in window");
        if Some(&BigInt::from(sm.h0_quotient())) != formula.exact() || sm.kernel_dim() != 0 {
            return Ok((
                false,
                format!("seed {}: j = {j}: matrix h0 {} vs formula {formula}", opts.seed, sm.h0_quotient()),
            ));
        }
        last = j;
    }
    // A generic map H^0(L0^∨) -> H^0(L1^∨) has maximal rank, so large
    // members of a family can acquire trivial summands of their own.
    let forced = (h_sum(&base.l0().dual(), 0, 0)? - h_sum(&base.l1().dual(), 0, 0)?)
        .to_u64()
        .unwrap_or(0);
    let expected = e.trivial_excess + forced;
    let dual = h0_dual(&m);
    Ok((
        dual as u64 == expected,
        format!(
            "seed {}: h0 agrees for j in [{lo}, {last}] of [{lo}, {hi}]; h0(E^v) = {dual}, expected {expected}",
            opts.seed
        ),
    ))
}

pub fn verify_entry(e: &CatalogEntry, opts: VerifyOptions) -> VerificationReport {
    let p = &e.presentation;
    let n = p.ambient().n() as usize;
    let chern = p.chern();
    let c = |i: usize| chern.as_ref().map(|c| c.c(i)).map_err(Clone::clone);
    let c2 = c(2).unwrap_or_default();
    let checks = vec![
        check("rank", Ok((p.rank() == BigInt::from(e.rank), format!("{}", p.rank())))),
        check(
            "c1",
            c(1).map(|v| (v == BigInt::from(e.expected.c1), v.to_string())),
        ),
        check(
            "top-chern-vanish",
            chern.clone().map(|c| {
                let r = e.rank as usize;
                let bad: Vec<usize> = (r + 1..=n).filter(|&i| !c.c(i).is_zero()).collect();
                (bad.is_empty(), format!("c = {c}"))
            }),
        ),
        check(
            "c2-vs-degZ",
            c(2).map(|v| {
                let ok = v == BigInt::from(e.expected.c2) && e.expected.c2 == e.expected.deg_z;
                (ok, format!("c2 = {v}, deg Z = {}", e.expected.deg_z))
            }),
        ),
        check(
            "gg-certificate",
            global_generation_certificate(p).map(|g| {
                (g.verdict == GgVerdict::CertifiedGg, g.reasons.join("; "))
            }),
        ),
        check(
            "vanishing-pattern",
            vanishing_pattern(p).map(|v| {
                (
                    v.case_label == e.expected.case,
                    format!(
                        "h0(E(-1), E(-2), E(-3)) = ({}, {}, {}) -> {}",
                        v.h0_minus1, v.h0_minus2, v.h0_minus3, v.case_label
                    ),
                )
            }),
        ),
        check(
            "horrocks-nonsplit",
            horrocks_split_check(p, None).map(|v| match v {
                SplitVerdict::NoSplitWitness { i, j, certainty } => {
                    (true, format!("h^{i}(E({j})) != 0 ({certainty:?})"))
                }
                SplitVerdict::Splits { .. } => (false, "no intermediate cohomology".into()),
            }),
        ),
        check("matrix-mode-agreement", matrix_agreement(e, opts)),
    ];
    VerificationReport {
        id: e.id.clone(),
        n: e.n,
        rank: e.rank,
        checks,
        c2,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub n: u32,
    pub passed: usize,
    pub failed: usize,
    /// `(id, c2)` in catalog order.
    pub c2_table: Vec<(String, i64)>,
    pub reports: Vec<VerificationReport>,
}

impl VerifySummary {
    pub fn from_reports(n: u32, reports: Vec<VerificationReport>) -> Self {
        let passed = reports.iter().filter(|r| r.pass()).count();
        VerifySummary {
            n,
            passed,
            failed: reports.len() - passed,
            c2_table: reports
                .iter()
                .map(|r| (r.id.clone(), r.c2.to_i64().unwrap_or(i64::MIN)))
                .collect(),
            reports,
        }
    }
}

pub fn verify_all(n: u32, seed: u64) -> Result<VerifySummary> {
    let opts = VerifyOptions {
        seed,
        ..VerifyOptions::default()
    };
    let reports = enumerate(n, None)?.iter().map(|e| verify_entry(e, opts)).collect();
    Ok(VerifySummary::from_reports(n, reports))
}

/// Invariants a classification compares: ambient, rank, total Chern class
/// and the `h^0` row over `j in [-3, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub n: u32,
    pub rank: BigInt,
    pub chern: Vec<BigInt>,
    pub h0: Vec<BigInt>,
}

pub fn fingerprint(p: &TwoTermPresentation) -> Result<Fingerprint> {
    let table = cohomology_table(p, -3..=1)?;
    Ok(Fingerprint {
        n: p.ambient().n(),
        rank: p.rank(),
        chern: p.chern()?.coeffs().to_vec(),
        h0: table.rows.iter().map(|r| r.cells[0].generic().clone()).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Classification {
    Match { id: String, trivial_excess: u64 },
    DirectSum { summands: String },
    NoMatch { reason: String },
}

/// Multiplicities of `O(3), O(2), O(1), O` in a split bundle, read off
/// `h^0(E(-k))`.
fn split_summands(p: &TwoTermPresentation) -> Result<Option<FreeSum>> {
    let amb = p.ambient();
    let table = cohomology_table(p, -3..=0)?;
    let mut sum = FreeSum::new(amb);
    for k in (0..=3i64).rev() {
        let mut h = table.cell(0, -k).expect("row in window").generic().clone();
        for (a, m) in sum.iter() {
            h -= h_sum(&FreeSum::lines(amb, [(a.twist() - k, m)]), 0, 0)?;
        }
        match h.to_u64() {
            Some(m) => sum.push(BundleAtom::Line(k), m)?,
            None => return Ok(None),
        }
    }
    Ok((sum.rank() == p.rank()).then_some(sum))
}

/// Matches `p` against the catalog after removing as many trivial summands
/// from `L0` as possible.
pub fn classify_presentation(p: &TwoTermPresentation) -> Result<Classification> {
    let c1 = p.c1()?;
    if c1 != BigInt::from(3) {
        return domain(format!("classification needs c1 = 3, got {c1}"));
    }
    let gg = global_generation_certificate(p)?;
    if gg.verdict == GgVerdict::NotGg {
        return Ok(Classification::NoMatch {
            reason: format!("not globally generated: {}", gg.reasons.join("; ")),
        });
    }
    if horrocks_split_check(p, None)?.splits() {
        return Ok(match split_summands(p)? {
            Some(s) => Classification::DirectSum {
                summands: crate::grammar::format_sum(&s),
            },
            None => Classification::NoMatch {
                reason: "splits, but not into O(3), O(2), O(1), O".into(),
            },
        });
    }
    let n = p.ambient().n();
    if n == 3 || n < 2 {
        check_ambient(n)?;
    }
    let free = p.l0().multiplicity(&BundleAtom::Line(0));
    let rank = p.rank().to_u64().unwrap_or(u64::MAX);
    for s in (0..=free.min(rank.saturating_sub(1))).rev() {
        let q = p.cancel_trivial_subbundle(s)?;
        let r = rank - s;
        let target = fingerprint(&q)?;
        for e in enumerate(n, Some(r))? {
            if e.trivial_excess == 0 && fingerprint(&e.presentation)? == target {
                return Ok(Classification::Match {
                    id: e.id,
                    trivial_excess: s,
                });
            }
        }
    }
    Ok(Classification::NoMatch {
        reason: "no catalog entry has these invariants".into(),
    })
}

/// `Some(c_r = 0)` when `rank <= n`; not applicable above.
pub fn predicate_b(p: &TwoTermPresentation) -> Result<Option<bool>> {
    let r = p.rank();
    let n = p.ambient().n();
    match r.to_usize() {
        Some(r) if r <= n as usize => Ok(Some(p.chern()?.c(r).is_zero())),
        _ => Ok(None),
    }
}

/// `h^0(E(-c1)) != 0` (generic value when the table leaves a range).
pub fn predicate_d(p: &TwoTermPresentation) -> Result<bool> {
    let c1 = p.c1()?;
    let j = c1
        .to_i64()
        .ok_or_else(|| Error::Domain(format!("c1 = {c1} out of range")))?;
    let t = cohomology_table(p, -j..=-j)?;
    Ok(!t.cell(0, -j).expect("row in window").generic().is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(n: u32, s: &str) -> TwoTermPresentation {
        TwoTermPresentation::parse(Ambient::new(n).unwrap(), s).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate(2, None).unwrap().len(), 8);
        assert_eq!(enumerate(4, None).unwrap().len(), 9);
        assert_eq!(enumerate(4, Some(3)).unwrap().len(), 1);
        assert_eq!(enumerate(4, Some(2)).unwrap().len(), 0);
        assert_eq!(enumerate(5, None).unwrap().len(), 7);
        assert_eq!(enumerate(5, Some(4)).unwrap().len(), 0);
        assert_eq!(enumerate(7, Some(9)).unwrap().len(), 7);
        assert_eq!(enumerate(7, Some(6)).unwrap().len(), 0);
        assert!(matches!(enumerate(3, None), Err(Error::OutOfScope(_))));
        assert!(enumerate(1, None).is_err());
    }

    #[test]
    fn plane_list_in_order() {
        let got: Vec<String> = enumerate(2, None)
            .unwrap()
            .iter()
            .map(|e| format!("{} {}", e.id, e.presentation))
            .collect();
        assert_eq!(
            got,
            [
                "P2-1 O(-1) -> 2O+O(2)",
                "P2-2 Om(3)",
                "P2-3 O(-1) -> O+2O(1)",
                "P2-4 2O(-1) -> 3O+O(1)",
                "P2-5 O(-2) -> 2O+O(1)",
                "P2-6 O(-3) -> 3O",
                "P2-7 O(-2)+O(-1) -> 4O",
                "P2-8 3O(-1) -> 5O",
            ]
        );
    }

    #[test]
    fn parametric_instances() {
        let e = enumerate(7, Some(9)).unwrap();
        assert_eq!(e[0].presentation.to_string(), "O(-1) -> 9O+O(2)");
        assert_eq!(e[4].presentation.to_string(), "3O(-1) -> 12O");
        assert!(e.iter().all(|x| x.rank == 9 && x.trivial_excess == 0));
        let ext = enumerate(4, Some(6)).unwrap();
        assert_eq!(ext.len(), 9);
        assert_eq!(ext[0].trivial_excess, 3);
        assert_eq!(ext[0].presentation.to_string(), "T(-2) -> 10O");
    }

    #[test]
    fn plane_entries_verify() {
        let s = verify_all(2, 1).unwrap();
        assert_eq!((s.passed, s.failed), (8, 0), "{:#?}", s.reports.iter().filter(|r| !r.pass()).collect::<Vec<_>>());
        let c2: Vec<i64> = s.c2_table.iter().map(|x| x.1).collect();
        assert_eq!(c2, [3, 3, 4, 5, 6, 9, 7, 6]);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify_presentation(&pres(2, "O(-1) -> 4O + O(2)")).unwrap(),
            Classification::Match { id: "P2-1".into(), trivial_excess: 2 }
        );
        assert_eq!(
            classify_presentation(&pres(5, "3O(1)")).unwrap(),
            Classification::DirectSum { summands: "3O(1)".into() }
        );
        assert_eq!(
            classify_presentation(&pres(4, "O(1) + O(2) + 2O")).unwrap(),
            Classification::DirectSum { summands: "2O+O(1)+O(2)".into() }
        );
        assert!(matches!(
            classify_presentation(&pres(2, "2O(-2) -> O(-1) + 3O")).unwrap(),
            Classification::NoMatch { .. }
        ));
        assert!(matches!(classify_presentation(&pres(2, "O(-1) -> 3O")), Err(Error::Domain(_))));
    }

    #[test]
    fn predicates() {
        let p21 = find(2, "P2-1").unwrap().presentation;
        assert_eq!(predicate_b(&p21.extend_by_trivial(1)).unwrap(), None);
        assert_eq!(predicate_b(&p21).unwrap(), Some(false));
        assert!(predicate_d(&pres(4, "O(3) + 2O")).unwrap());
        assert!(!predicate_d(&find(2, "P2-6").unwrap().presentation).unwrap());
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(find(2, "P2-6").unwrap()).unwrap();
        assert_eq!(v["presentation"], "O(-3) -> 3O");
        assert_eq!(v["expected"]["c2"], 9);
        assert_eq!(v["expected"]["case"], "III");
        assert_eq!(v["expected"]["degZ"], 9);
    }
}
