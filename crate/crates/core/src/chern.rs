//! The truncated Chern ring `Z[h]/(h^(n+1))` and total Chern classes.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::binomial::{binomial, binomial_i};
use crate::cohomology::{Ambient, BundleAtom, FreeSum};
use crate::error::{domain, Error, Result};

/// An element `c_0 + c_1 h + ... + c_n h^n` of `Z[h]/(h^(n+1))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChernPoly {
    ambient: Ambient,
    coeffs: Vec<BigInt>,
}

impl ChernPoly {
    /// Coefficients beyond `h^n` are dropped, missing ones are zero.
    pub fn new(ambient: Ambient, coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        let len = ambient.n() as usize + 1;
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().take(len).collect();
        coeffs.resize(len, BigInt::zero());
        ChernPoly { ambient, coeffs }
    }

    pub fn from_i64(ambient: Ambient, coeffs: &[i64]) -> Self {
        Self::new(ambient, coeffs.iter().map(|&c| BigInt::from(c)))
    }

    pub fn one(ambient: Ambient) -> Self {
        Self::new(ambient, [BigInt::one()])
    }

    /// `1 + k h`, the total Chern class of `O(k)`.
    pub fn line(ambient: Ambient, k: i64) -> Self {
        Self::new(ambient, [BigInt::one(), BigInt::from(k)])
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `c_i`, zero for `i > n`.
    pub fn c(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &ChernPoly) -> Result<()> {
        if self.ambient != other.ambient {
            return domain(format!(
                "Chern classes over {} and {} cannot be combined",
                self.ambient, other.ambient
            ));
        }
        Ok(())
    }

    pub fn mul(&self, other: &ChernPoly) -> Result<ChernPoly> {
        self.check_same(other)?;
        let len = self.coeffs.len();
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs[..len - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(ChernPoly::new(self.ambient, out))
    }

    /// Exact quotient `self / other`; `other` must have constant term 1.
    pub fn div(&self, other: &ChernPoly) -> Result<ChernPoly> {
        self.check_same(other)?;
        if !other.coeffs[0].is_one() {
            return domain(format!(
                "division by {other}: constant term must be 1"
            ));
        }
        // Solve q * other = self degree by degree.
        let len = self.coeffs.len();
        let mut q: Vec<BigInt> = Vec::with_capacity(len);
        for i in 0..len {
            let mut v = self.coeffs[i].clone();
            for j in 1..=i {
                v -= &other.coeffs[j] * &q[i - j];
            }
            q.push(v);
        }
        Ok(ChernPoly::new(self.ambient, q))
    }

    pub fn pow(&self, e: u32) -> ChernPoly {
        (0..e).fold(ChernPoly::one(self.ambient), |acc, _| {
            acc.mul(self).expect("same ambient")
        })
    }

    /// Total Chern class of `E(k)` given `c(E)` and the rank `r` of `E`:
    /// `c_i(E(k)) = Σ_j C(r-j, i-j) k^(i-j) c_j(E)`.
    pub fn twist(&self, rank: &BigInt, k: i64) -> ChernPoly {
        if k == 0 {
            return self.clone();
        }
        let k = BigInt::from(k);
        let len = self.coeffs.len();
        let out = (0..len).map(|i| {
            (0..=i)
                .map(|j| {
                    let d = (i - j) as u32;
                    binomial(&(rank - BigInt::from(j)), d as i64)
                        * num_traits::pow(k.clone(), d as usize)
                        * &self.coeffs[j]
                })
                .sum::<BigInt>()
        });
        ChernPoly::new(self.ambient, out.collect::<Vec<_>>())
    }

    /// Largest `i` with `c_i != 0`.
    pub fn top_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }
}

impl fmt::Display for ChernPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let abs = c.abs();
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}")?;
                    }
                    write!(f, "h")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for ChernPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

/// `(1 + s h)^e` truncated.
fn binomial_series(amb: Ambient, s: i64, e: i64) -> ChernPoly {
    ChernPoly::new(
        amb,
        (0..=amb.n() as i64).map(|i| binomial_i(e, i) * num_traits::pow(BigInt::from(s), i as usize)),
    )
}

/// Total Chern class of `O(k)`, `Ω^1(k)` or `T(k)`.
pub fn chern_atom(amb: Ambient, atom: &BundleAtom) -> Result<ChernPoly> {
    let n = amb.n();
    match *atom {
        BundleAtom::Line(k) => Ok(ChernPoly::line(amb, k)),
        BundleAtom::FormPower { p: 1, k } => {
            // Euler sequence: c(Ω^1) = (1 - h)^(n+1).
            Ok(binomial_series(amb, -1, n as i64 + 1).twist(&BigInt::from(n), k))
        }
        BundleAtom::FormPower { p, k } if p + 1 == n => {
            // T = Ω^(n-1)(n+1) and c(T) = (1 + h)^(n+1).
            Ok(binomial_series(amb, 1, n as i64 + 1).twist(&BigInt::from(n), k - n as i64 - 1))
        }
        BundleAtom::FormPower { p, .. } => Err(Error::UnsupportedAtom {
            atom: crate::grammar::format_atom(amb, atom),
            reason: format!("Chern classes of Ω^{p} on P^{n} are not implemented"),
        }),
    }
}

/// Whitney product over the atoms of a direct sum.
pub fn chern_sum(f: &FreeSum) -> Result<ChernPoly> {
    let amb = f.ambient();
    f.iter().try_fold(ChernPoly::one(amb), |acc, (a, m)| {
        acc.mul(&chern_atom(amb, a)?.pow(m as u32))
    })
}

/// Chern class of the cohomology of a monad `A -> B -> C`: `c(B) / (c(A) c(C))`.
pub fn chern_monad(a: &FreeSum, b: &FreeSum, c: &FreeSum) -> Result<ChernPoly> {
    if a.ambient() != b.ambient() || b.ambient() != c.ambient() {
        return domain("monad terms live on different ambients");
    }
    chern_sum(b)?.div(&chern_sum(a)?.mul(&chern_sum(c)?)?)
}
