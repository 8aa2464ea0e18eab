//! Splitting, vanishing-pattern and global-generation checks in formula mode.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::table::cohomology_table;
use super::TwoTermPresentation;
use crate::chern::chern_sum;
use crate::cohomology::{BundleAtom, FreeSum};
use crate::error::Result;

/// Whether a verdict holds for every presentation map or only a generic one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certainty {
    Forced,
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SplitVerdict {
    Splits { certainty: Certainty },
    NoSplitWitness { i: usize, j: i64, certainty: Certainty },
}

impl SplitVerdict {
    pub fn splits(&self) -> bool {
        matches!(self, SplitVerdict::Splits { .. })
    }
}

fn window_or_default(
    p: &TwoTermPresentation,
    window: Option<RangeInclusive<i64>>,
) -> RangeInclusive<i64> {
    window.unwrap_or_else(|| {
        let (lo, hi) = p.decisive_window();
        lo..=hi
    })
}

/// Horrocks: `E` splits iff `h^i(E(j)) = 0` for `0 < i < n` and all `j`.
///
/// A cell whose lower bound is positive is a witness for every map; a cell
/// that is only nonzero generically gives a generic witness.
pub fn horrocks_split_check(
    p: &TwoTermPresentation,
    window: Option<RangeInclusive<i64>>,
) -> Result<SplitVerdict> {
    let table = cohomology_table(p, window_or_default(p, window))?;
    let n = table.n as usize;
    let intermediate = || {
        table.rows.iter().flat_map(|row| {
            row.cells
                .iter()
                .enumerate()
                .take(n)
                .skip(1)
                .map(move |(i, c)| (i, row.j, c))
        })
    };
    if let Some((i, j, _)) = intermediate().find(|(_, _, c)| !c.lo().is_zero()) {
        return Ok(SplitVerdict::NoSplitWitness {
            i,
            j,
            certainty: Certainty::Forced,
        });
    }
    if let Some((i, j, _)) = intermediate().find(|(_, _, c)| !c.generic().is_zero()) {
        return Ok(SplitVerdict::NoSplitWitness {
            i,
            j,
            certainty: Certainty::Generic,
        });
    }
    let certainty = if intermediate().all(|(_, _, c)| c.hi().is_zero()) {
        Certainty::Forced
    } else {
        Certainty::Generic
    };
    Ok(SplitVerdict::Splits { certainty })
}

/// True when every cell with `1 <= i <= max_i` is exactly zero on the window.
pub fn intermediate_vanishing(
    p: &TwoTermPresentation,
    window: RangeInclusive<i64>,
    max_i: usize,
) -> Result<bool> {
    let table = cohomology_table(p, window)?;
    Ok(table.rows.iter().all(|row| {
        row.cells
            .iter()
            .enumerate()
            .filter(|(i, _)| (1..=max_i).contains(i))
            .all(|(_, c)| c.is_exact_zero())
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseLabel {
    /// `h^0(E(-3)) = 0`, `h^0(E(-2)) != 0`.
    I,
    /// `h^0(E(-2)) = 0`, `h^0(E(-1)) != 0`.
    II,
    /// `h^0(E(-1)) = 0`.
    III,
    /// `h^0(E(-3)) != 0`: modulo trivial summands `E = O(3)`.
    #[serde(rename = "split-D")]
    SplitD,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseLabel::I => "I",
            CaseLabel::II => "II",
            CaseLabel::III => "III",
            CaseLabel::SplitD => "split-D",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingPattern {
    #[serde(serialize_with = "crate::serialize_bigint")]
    pub h0_minus1: BigInt,
    #[serde(serialize_with = "crate::serialize_bigint")]
    pub h0_minus2: BigInt,
    #[serde(serialize_with = "crate::serialize_bigint")]
    pub h0_minus3: BigInt,
    pub case_label: CaseLabel,
}

pub fn vanishing_pattern(p: &TwoTermPresentation) -> Result<VanishingPattern> {
    let table = cohomology_table(p, -3..=-1)?;
    let h0 = |j: i64| -> Result<BigInt> {
        let cell = table.cell(0, j).expect("row in window");
        cell.exact().cloned().ok_or_else(|| {
            crate::Error::Precondition(format!("h^0(E({j})) is not determined: {cell}"))
        })
    };
    let (m1, m2, m3) = (h0(-1)?, h0(-2)?, h0(-3)?);
    let case_label = if !m3.is_zero() {
        CaseLabel::SplitD
    } else if !m2.is_zero() {
        CaseLabel::I
    } else if !m1.is_zero() {
        CaseLabel::II
    } else {
        CaseLabel::III
    };
    Ok(VanishingPattern {
        h0_minus1: m1,
        h0_minus2: m2,
        h0_minus3: m3,
        case_label,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GgVerdict {
    CertifiedGg,
    NotGg,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GgCertificate {
    pub verdict: GgVerdict,
    pub reasons: Vec<String>,
}

/// `Hom(b, a) = a ⊗ b^∨` is globally generated; `None` when it is not an atom.
fn hom_globally_generated(p: &TwoTermPresentation, b: &BundleAtom, a: &BundleAtom) -> Option<bool> {
    let amb = p.ambient();
    match (b, a) {
        (BundleAtom::Line(kb), _) => Some(a.twisted(-kb).is_globally_generated()),
        (_, BundleAtom::Line(ka)) => Some(b.dual(amb).twisted(*ka).is_globally_generated()),
        _ => None,
    }
}

/// Porteous class of the locus where a map `source -> target` drops rank:
/// `c_e(target - source)` for injectivity (`e = rk target - rk source + 1`),
/// `c_e(source - target)` for surjectivity (`e = rk source - rk target + 1`).
/// A nonzero class forces a nonempty degeneracy locus for every map.
fn degeneracy_class(virtual_top: &FreeSum, virtual_bottom: &FreeSum, e: &BigInt) -> Result<Option<BigInt>> {
    let n = virtual_top.ambient().n() as usize;
    let Some(e) = e.to_usize() else {
        return Ok(None);
    };
    if e > n {
        return Ok(Some(BigInt::zero()));
    }
    let c = chern_sum(virtual_top)?.div(&chern_sum(virtual_bottom)?)?;
    Ok(Some(c.c(e)))
}

/// Decides global generation of `E` where formula-level reasoning suffices.
///
/// Certified means: `L0` and `Hom(L1, L0)` are globally generated, so a
/// general map `L1 -> L0` degenerates in the expected codimension
/// `e = rk L0 - rk L1 + 1`, and the degeneracy class `c_e(E)` vanishes (or
/// `e > n`), so the general cokernel is a bundle and a quotient of `L0`.
pub fn global_generation_certificate(p: &TwoTermPresentation) -> Result<GgCertificate> {
    let n = p.ambient().n() as usize;
    let rank = p.rank();
    let e: BigInt = &rank + 1;
    let mut obstructions = Vec::new();

    let chern = p.chern().ok();
    if let (Some(c), Some(e_idx)) = (&chern, e.to_usize()) {
        if e_idx <= n && !c.c(e_idx).is_zero() {
            obstructions.push(format!(
                "c_{e_idx}(L0 - L1) = {} is nonzero: every map L1 -> L0 drops rank somewhere, \
                 so the cokernel is never locally free",
                c.c(e_idx)
            ));
        }
    }

    let h0 = cohomology_table(p, 0..=0)?.rows[0].cells[0].clone();
    if let Some(h0) = h0.exact() {
        if *h0 < rank {
            obstructions.push(format!("h^0(E) = {h0} < rank {rank}"));
        } else if *h0 == rank && chern.as_ref().is_some_and(|c| !c.is_one()) {
            obstructions.push(format!(
                "h^0(E) = rank = {rank} but E is not trivial"
            ));
        }
    }

    // Sections of E all come from the globally generated part P of L0 when
    // h^1(L1) = 0, so E is generated iff L1 -> L0/P is onto.
    if p.is_line_only() && n >= 2 {
        let negative = FreeSum::lines(
            p.ambient(),
            p.l0().iter().filter_map(|(a, m)| (a.twist() < 0).then_some((a.twist(), m))),
        );
        if !negative.is_empty() {
            let (rk_l1, rk_neg) = (p.l1().rank(), negative.rank());
            if rk_l1 < rk_neg {
                obstructions.push(format!(
                    "L0 has {rk_neg} summands without sections but L1 has rank {rk_l1}"
                ));
            } else {
                let e_surj = &rk_l1 - &rk_neg + 1;
                if let Some(class) = degeneracy_class(p.l1(), &negative, &e_surj)? {
                    if !class.is_zero() {
                        obstructions.push(format!(
                            "the map from L1 onto the negative part {} of L0 fails to be \
                             surjective along a locus of class {class} in codimension {e_surj}",
                            crate::grammar::format_sum(&negative)
                        ));
                    }
                }
            }
        }
    }

    if !obstructions.is_empty() {
        return Ok(GgCertificate {
            verdict: GgVerdict::NotGg,
            reasons: obstructions,
        });
    }

    let mut missing = Vec::new();
    let mut reasons = Vec::new();
    let amb = p.ambient();
    for (a, _) in p.l0().iter() {
        if !a.is_globally_generated() {
            missing.push(format!(
                "L0 summand {} is not globally generated",
                crate::grammar::format_atom(amb, a)
            ));
        }
    }
    for (b, _) in p.l1().iter() {
        for (a, _) in p.l0().iter() {
            match hom_globally_generated(p, b, a) {
                Some(true) => {}
                Some(false) => missing.push(format!(
                    "Hom({}, {}) is not globally generated",
                    crate::grammar::format_atom(amb, b),
                    crate::grammar::format_atom(amb, a)
                )),
                None => missing.push(format!(
                    "Hom({}, {}) is not a sum of atoms",
                    crate::grammar::format_atom(amb, b),
                    crate::grammar::format_atom(amb, a)
                )),
            }
        }
    }
    match (&chern, e.to_usize()) {
        (_, Some(e_idx)) if e_idx > n => reasons.push(format!(
            "expected degeneracy codimension {e_idx} exceeds n = {n}"
        )),
        (Some(_), Some(e_idx)) => reasons.push(format!(
            "degeneracy class c_{e_idx}(L0 - L1) vanishes, so a general map has empty degeneracy locus"
        )),
        (None, _) => missing.push("Chern classes unavailable for the degeneracy class".into()),
        (_, None) => missing.push("rank too large".into()),
    }
    if missing.is_empty() {
        reasons.insert(0, "L0 and Hom(L1, L0) are globally generated".into());
        Ok(GgCertificate {
            verdict: GgVerdict::CertifiedGg,
            reasons,
        })
    } else {
        Ok(GgCertificate {
            verdict: GgVerdict::Undetermined,
            reasons: missing,
        })
    }
}
