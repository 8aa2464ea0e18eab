//! Bundles given by short exact sequences `0 -> L1 -> L0 -> E -> 0`.

mod checks;
mod table;

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::chern::{chern_sum, ChernPoly};
use crate::cohomology::{Ambient, BundleAtom, FreeSum};
use crate::error::{domain, Error, Result};
use crate::grammar::{format_sum, parse_arrow};

pub use checks::{
    global_generation_certificate, horrocks_split_check, intermediate_vanishing,
    vanishing_pattern, CaseLabel, Certainty, GgCertificate, GgVerdict, SplitVerdict,
    VanishingPattern,
};
pub use table::{cohomology_table, CohomologyCell, CohomologyRow, CohomologyTable};

/// `E = coker(L1 -> L0)`, or a single special atom when `L1` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoTermPresentation {
    l1: FreeSum,
    l0: FreeSum,
}

impl TwoTermPresentation {
    pub fn new(l1: FreeSum, l0: FreeSum) -> Result<Self> {
        if l1.ambient() != l0.ambient() {
            return domain(format!(
                "terms live on {} and {}",
                l1.ambient(),
                l0.ambient()
            ));
        }
        if l0.rank() - l1.rank() < BigInt::one() {
            return domain(format!(
                "rank(L0) - rank(L1) = {} - {} must be at least 1",
                l0.rank(),
                l1.rank()
            ));
        }
        Ok(TwoTermPresentation { l1, l0 })
    }

    /// `E` itself, with an empty kernel term.
    pub fn from_sum(l0: FreeSum) -> Result<Self> {
        Self::new(FreeSum::new(l0.ambient()), l0)
    }

    pub fn parse(amb: Ambient, src: &str) -> Result<Self> {
        let (l1, l0, ideal) = parse_arrow(amb, src)?;
        if ideal {
            return Err(Error::Parse {
                pos: src.find("=>").unwrap_or(0),
                msg: "ideal resolution given where a bundle presentation was expected".into(),
            });
        }
        Self::new(l1, l0)
    }

    pub fn ambient(&self) -> Ambient {
        self.l0.ambient()
    }

    pub fn l1(&self) -> &FreeSum {
        &self.l1
    }

    pub fn l0(&self) -> &FreeSum {
        &self.l0
    }

    /// `L1` empty and `L0` a single non-line atom, e.g. `Ω^1(2)` or `T`.
    pub fn is_atom_only(&self) -> bool {
        self.l1.is_empty()
            && self.l0.iter().count() == 1
            && self.l0.iter().all(|(a, m)| m == 1 && !a.is_line())
    }

    pub fn is_line_only(&self) -> bool {
        self.l1.is_line_only() && self.l0.is_line_only()
    }

    pub fn rank(&self) -> BigInt {
        self.l0.rank() - self.l1.rank()
    }

    /// `c(E) = c(L0) / c(L1)`.
    pub fn chern(&self) -> Result<ChernPoly> {
        chern_sum(&self.l0)?.div(&chern_sum(&self.l1)?)
    }

    pub fn c1(&self) -> Result<BigInt> {
        Ok(self.chern()?.c(1))
    }

    pub fn twist(&self, k: i64) -> Self {
        TwoTermPresentation {
            l1: self.l1.twisted(k),
            l0: self.l0.twisted(k),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.l1.direct_sum(&other.l1)?,
            self.l0.direct_sum(&other.l0)?,
        )
    }

    /// Adds `s O` to `L0`.
    pub fn extend_by_trivial(&self, s: u64) -> Self {
        let mut l0 = self.l0.clone();
        l0.push(BundleAtom::Line(0), s).expect("O(0) is valid on every ambient");
        TwoTermPresentation {
            l1: self.l1.clone(),
            l0,
        }
    }

    /// Removes `s O` from `L0`: the quotient of `E` by a trivial subbundle of
    /// rank `s` that lifts to a trivial summand of `L0`.
    pub fn cancel_trivial_subbundle(&self, s: u64) -> Result<Self> {
        let have = self.l0.multiplicity(&BundleAtom::Line(0));
        if have < s {
            return Err(Error::Precondition(format!(
                "L0 has {have} trivial summands, cannot cancel {s}"
            )));
        }
        if self.rank() - BigInt::from(s) < BigInt::one() {
            return Err(Error::Precondition(format!(
                "cancelling {s} trivial summands would leave rank {}",
                self.rank() - BigInt::from(s)
            )));
        }
        let mut l0 = self.l0.clone();
        l0.remove(&BundleAtom::Line(0), s)?;
        Ok(TwoTermPresentation {
            l1: self.l1.clone(),
            l0,
        })
    }

    /// Restriction to a hyperplane `P^(n-1)`: `O(k)|_H = O_H(k)`.
    pub fn restrict_hyperplane(&self) -> Result<Self> {
        if !self.is_line_only() {
            return Err(Error::UnsupportedAtom {
                atom: self.to_string(),
                reason: "only sums of line bundles restrict to sums of atoms".into(),
            });
        }
        if self.ambient().n() < 2 {
            return domain("cannot restrict from P^1");
        }
        let h = self.ambient().hyperplane()?;
        Ok(TwoTermPresentation {
            l1: self.l1.with_ambient(h),
            l0: self.l0.with_ambient(h),
        })
    }

    /// Default scan window `[-(m+n+2), m+n+2]`, `m` the largest absolute twist.
    pub fn decisive_window(&self) -> (i64, i64) {
        let m = self.l0.max_abs_twist().max(self.l1.max_abs_twist());
        let w = m + self.ambient().n() as i64 + 2;
        (-w, w)
    }
}

impl fmt::Display for TwoTermPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.l1.is_empty() {
            write!(f, "{}", format_sum(&self.l0))
        } else {
            write!(f, "{} -> {}", format_sum(&self.l1), format_sum(&self.l0))
        }
    }
}
