//! Cohomology tables `h^i(E(j))` from the long exact sequence of
//! `0 -> L1(j) -> L0(j) -> E(j) -> 0`.
//!
//! With `a_i = h^i(L1(j))`, `b_i = h^i(L0(j))` and `ρ_i` the rank of
//! `H^i(L1(j)) -> H^i(L0(j))`, exactness gives
//! `h^i(E(j)) = (b_i - ρ_i) + (a_(i+1) - ρ_(i+1))`.
//! `ρ_0 = a_0` because the sheaf map is injective; every other `ρ_i` is only
//! known to lie in `[0, min(a_i, b_i)]`, so the cell becomes a range whose
//! generic value takes every `ρ_i` maximal.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::TwoTermPresentation;
use crate::cohomology::{chi_sum, h_sum};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CohomologyCell {
    Exact(BigInt),
    Range {
        lo: BigInt,
        hi: BigInt,
        generic: BigInt,
    },
}

impl CohomologyCell {
    fn from_bounds(lo: BigInt, hi: BigInt, generic: BigInt) -> Self {
        if lo == hi {
            CohomologyCell::Exact(lo)
        } else {
            CohomologyCell::Range { lo, hi, generic }
        }
    }

    pub fn lo(&self) -> &BigInt {
        match self {
            CohomologyCell::Exact(v) => v,
            CohomologyCell::Range { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &BigInt {
        match self {
            CohomologyCell::Exact(v) => v,
            CohomologyCell::Range { hi, .. } => hi,
        }
    }

    pub fn generic(&self) -> &BigInt {
        match self {
            CohomologyCell::Exact(v) => v,
            CohomologyCell::Range { generic, .. } => generic,
        }
    }

    pub fn exact(&self) -> Option<&BigInt> {
        match self {
            CohomologyCell::Exact(v) => Some(v),
            CohomologyCell::Range { .. } => None,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact().is_some_and(Zero::is_zero)
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        self.lo() <= v && v <= self.hi()
    }
}

impl fmt::Display for CohomologyCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomologyCell::Exact(v) => write!(f, "{v}"),
            CohomologyCell::Range { lo, hi, generic } => write!(f, "{lo}..{hi}({generic})"),
        }
    }
}

impl Serialize for CohomologyCell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self {
            CohomologyCell::Exact(v) => m.serialize_entry("exact", &crate::json_int(v))?,
            CohomologyCell::Range { lo, hi, generic } => {
                m.serialize_entry("lo", &crate::json_int(lo))?;
                m.serialize_entry("hi", &crate::json_int(hi))?;
                m.serialize_entry("generic", &crate::json_int(generic))?;
            }
        }
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyRow {
    pub j: i64,
    /// `cells[i]` describes `h^i(E(j))`.
    pub cells: Vec<CohomologyCell>,
    #[serde(serialize_with = "crate::serialize_bigint")]
    pub chi: BigInt,
}

impl CohomologyRow {
    /// `Σ (-1)^i` of the generic completion of the row.
    pub fn generic_euler_characteristic(&self) -> BigInt {
        alternating(self.cells.iter().map(CohomologyCell::generic))
    }
}

fn alternating<'a>(values: impl Iterator<Item = &'a BigInt>) -> BigInt {
    values
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { v.clone() } else { -v.clone() })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub n: u32,
    /// Rows ordered by ascending `j`.
    pub rows: Vec<CohomologyRow>,
}

impl CohomologyTable {
    pub fn row(&self, j: i64) -> Option<&CohomologyRow> {
        self.rows.iter().find(|r| r.j == j)
    }

    pub fn cell(&self, i: usize, j: i64) -> Option<&CohomologyCell> {
        self.row(j).and_then(|r| r.cells.get(i))
    }
}

/// Rank bounds of the map `H^i(L1(j)) -> H^i(L0(j))`.
struct RankBounds {
    lo: BigInt,
    hi: BigInt,
}

fn row_for(p: &TwoTermPresentation, j: i64) -> Result<CohomologyRow> {
    let n = p.ambient().n() as usize;
    let a: Vec<BigInt> = (0..=n).map(|i| h_sum(p.l1(), j, i)).collect::<Result<_>>()?;
    let b: Vec<BigInt> = (0..=n).map(|i| h_sum(p.l0(), j, i)).collect::<Result<_>>()?;
    if a[0] > b[0] {
        return Err(Error::Precondition(format!(
            "h^0(L1({j})) = {} exceeds h^0(L0({j})) = {}: no injective map L1 -> L0 exists",
            a[0], b[0]
        )));
    }
    let mut rho: Vec<RankBounds> = (0..=n)
        .map(|i| RankBounds {
            lo: if i == 0 { a[0].clone() } else { BigInt::zero() },
            hi: a[i].clone().min(b[i].clone()),
        })
        .collect();
    rho.push(RankBounds {
        lo: BigInt::zero(),
        hi: BigInt::zero(),
    });
    let zero = BigInt::zero();
    let cells = (0..=n)
        .map(|i| {
            let next = a.get(i + 1).unwrap_or(&zero);
            let lo = &b[i] - &rho[i].hi + next - &rho[i + 1].hi;
            let hi = &b[i] - &rho[i].lo + next - &rho[i + 1].lo;
            let generic = lo.clone();
            CohomologyCell::from_bounds(lo, hi, generic)
        })
        .collect();
    Ok(CohomologyRow {
        j,
        cells,
        chi: chi_sum(p.l0(), j) - chi_sum(p.l1(), j),
    })
}

/// The table of `h^i(E(j))` for `j` in `js`, `0 <= i <= n`.
pub fn cohomology_table(
    p: &TwoTermPresentation,
    js: RangeInclusive<i64>,
) -> Result<CohomologyTable> {
    Ok(CohomologyTable {
        n: p.ambient().n(),
        rows: js.map(|j| row_for(p, j)).collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::Ambient;

    fn pres(n: u32, s: &str) -> TwoTermPresentation {
        TwoTermPresentation::parse(Ambient::new(n).unwrap(), s).unwrap()
    }

    fn ex(v: i64) -> CohomologyCell {
        CohomologyCell::Exact(BigInt::from(v))
    }

    #[test]
    fn cubic_quotient_on_p2() {
        // h^1(E) receives h^2(O(-3)) = 1 and chi(E) = 3 - 1.
        let t = cohomology_table(&pres(2, "O(-3) -> 3O"), 0..=0).unwrap();
        assert_eq!(t.rows[0].cells, vec![ex(3), ex(1), ex(0)]);
        assert_eq!(t.rows[0].chi, BigInt::from(2));
    }

    #[test]
    fn tv_dual_has_no_sections_after_negative_twist() {
        let t = cohomology_table(&pres(4, "T(-2) -> 7O"), -1..=-1).unwrap();
        assert_eq!(t.rows[0].cells[0], ex(0));
    }

    #[test]
    fn split_sums_are_exact() {
        let p = pres(3, "2O(1)+O(-5)");
        let t = cohomology_table(&p, -8..=8).unwrap();
        for row in &t.rows {
            for (i, cell) in row.cells.iter().enumerate() {
                assert_eq!(cell, &CohomologyCell::Exact(h_sum(p.l0(), row.j, i).unwrap()));
            }
        }
    }

    #[test]
    fn top_cohomology_is_a_range() {
        // j = -4 on P^2: h^2(O(-7)) = 15 against h^2(3 O(-4)) = 9.
        let t = cohomology_table(&pres(2, "O(-3) -> 3O"), -4..=-4).unwrap();
        let cells = &t.rows[0].cells;
        assert_eq!(
            cells[1],
            CohomologyCell::Range {
                lo: BigInt::from(6),
                hi: BigInt::from(15),
                generic: BigInt::from(6)
            }
        );
        assert_eq!(
            cells[2],
            CohomologyCell::Range {
                lo: BigInt::from(0),
                hi: BigInt::from(9),
                generic: BigInt::from(0)
            }
        );
        assert_eq!(cells[1].to_string(), "6..15(6)");
        assert_eq!(t.rows[0].generic_euler_characteristic(), t.rows[0].chi);
    }

    #[test]
    fn impossible_injection_is_rejected() {
        let p = pres(2, "O(2) -> 3O");
        assert!(matches!(cohomology_table(&p, 0..=0), Err(Error::Precondition(_))));
    }
}
