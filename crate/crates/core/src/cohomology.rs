//! Cohomology dimensions of the atoms everything else is assembled from:
//! twisted line bundles `O(k)` and twisted bundles of differential forms
//! `Ω^p(k)` on `P^n`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::binomial::{binomial_i, QPoly};
use crate::error::{domain, Error, Result};

/// The projective space `P^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ambient {
    n: u32,
}

impl Ambient {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return domain("projective space must have dimension n >= 1");
        }
        Ok(Ambient { n })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub(crate) fn ni(self) -> i64 {
        self.n as i64
    }

    /// The hyperplane `P^(n-1)`.
    pub fn hyperplane(self) -> Result<Self> {
        Ambient::new(self.n - 1)
    }

    fn check_degree(self, i: usize) -> Result<()> {
        if i > self.n as usize {
            return domain(format!("cohomology degree {i} outside [0, {}]", self.n));
        }
        Ok(())
    }

    /// Brings an atom to canonical form: `Ω^0(k) = O(k)` and `Ω^n(k) = O(k-n-1)`.
    pub fn normalize(self, atom: BundleAtom) -> Result<BundleAtom> {
        match atom {
            BundleAtom::Line(_) => Ok(atom),
            BundleAtom::FormPower { p, k } => {
                if p > self.n {
                    domain(format!("Ω^{p} does not exist on P^{}", self.n))
                } else if p == 0 {
                    Ok(BundleAtom::Line(k))
                } else if p == self.n {
                    Ok(BundleAtom::Line(k - self.ni() - 1))
                } else {
                    Ok(atom)
                }
            }
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P^{}", self.n)
    }
}

/// `Line(k)` is `O(k)`; `FormPower { p, k }` is `Ω^p(k)` with `0 < p < n`.
///
/// The tangent bundle is stored through `T(k) = Ω^(n-1)(k+n+1)`, so every
/// isomorphism class of atom has exactly one representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BundleAtom {
    Line(i64),
    FormPower { p: u32, k: i64 },
}

impl BundleAtom {
    pub fn line(k: i64) -> Self {
        BundleAtom::Line(k)
    }

    pub fn form_power(amb: Ambient, p: u32, k: i64) -> Result<Self> {
        amb.normalize(BundleAtom::FormPower { p, k })
    }

    pub fn cotangent(amb: Ambient, k: i64) -> Result<Self> {
        Self::form_power(amb, 1, k)
    }

    pub fn tangent(amb: Ambient, k: i64) -> Result<Self> {
        Self::form_power(amb, amb.n - 1, k + amb.ni() + 1)
    }

    pub fn is_line(&self) -> bool {
        matches!(self, BundleAtom::Line(_))
    }

    pub fn twist(&self) -> i64 {
        match *self {
            BundleAtom::Line(k) | BundleAtom::FormPower { k, .. } => k,
        }
    }

    pub fn rank(&self, amb: Ambient) -> BigInt {
        match *self {
            BundleAtom::Line(_) => BigInt::from(1),
            BundleAtom::FormPower { p, .. } => binomial_i(amb.ni(), p as i64),
        }
    }

    pub fn twisted(&self, j: i64) -> Self {
        match *self {
            BundleAtom::Line(k) => BundleAtom::Line(k + j),
            BundleAtom::FormPower { p, k } => BundleAtom::FormPower { p, k: k + j },
        }
    }

    /// The dual bundle: `O(k)^∨ = O(-k)` and `Ω^p(k)^∨ = Ω^(n-p)(n+1-k)`.
    pub fn dual(&self, amb: Ambient) -> Self {
        match *self {
            BundleAtom::Line(k) => BundleAtom::Line(-k),
            BundleAtom::FormPower { p, k } => BundleAtom::FormPower {
                p: amb.n - p,
                k: amb.ni() + 1 - k,
            },
        }
    }

    /// Whether the atom is generated by its global sections.
    /// `Ω^p(k)` is globally generated exactly when `k >= p + 1`.
    pub fn is_globally_generated(&self) -> bool {
        match *self {
            BundleAtom::Line(k) => k >= 0,
            BundleAtom::FormPower { p, k } => k > p as i64,
        }
    }
}

/// `h^i(P^n, O(k))`.
pub fn h_line(amb: Ambient, k: i64, i: usize) -> Result<BigInt> {
    amb.check_degree(i)?;
    let n = amb.ni();
    Ok(if i == 0 && k >= 0 {
        binomial_i(n + k, n)
    } else if i == amb.n as usize && k <= -n - 1 {
        binomial_i(-k - 1, n)
    } else {
        BigInt::zero()
    })
}

/// `h^q(P^n, Ω^p(k))` by Bott's formula.
pub fn h_bott(amb: Ambient, p: i64, k: i64, q: usize) -> Result<BigInt> {
    amb.check_degree(q)?;
    let n = amb.ni();
    if p < 0 || p > n {
        return domain(format!("form degree {p} outside [0, {n}]"));
    }
    let q = q as i64;
    Ok(if q == 0 && k > p {
        binomial_i(k - 1, p) * binomial_i(n + k - p, k)
    } else if q == p && k == 0 {
        BigInt::from(1)
    } else if q == n && k < p - n {
        // Serre dual of h^0(Ω^(n-p)(-k)).
        binomial_i(-k - 1, n - p) * binomial_i(p - k, -k)
    } else {
        BigInt::zero()
    })
}

/// `h^i` of a single atom.
pub fn h_atom(amb: Ambient, atom: &BundleAtom, i: usize) -> Result<BigInt> {
    match *atom {
        BundleAtom::Line(k) => h_line(amb, k, i),
        BundleAtom::FormPower { p, k } => h_bott(amb, p as i64, k, i),
    }
}

/// `χ(A(t))` as a polynomial in `t`.
pub fn chi_atom_poly(amb: Ambient, atom: &BundleAtom) -> QPoly {
    let n = amb.ni();
    let line = |k: i64| QPoly::binomial(&BigInt::from(k + n), n);
    match *atom {
        BundleAtom::Line(k) => line(k),
        BundleAtom::FormPower { p, k } => {
            // Resolution 0 -> Ω^p -> Λ^p V(-p) -> ... -> Λ^0 V -> 0.
            let p = p as i64;
            (0..=p).fold(QPoly::zero(), |acc, i| {
                let term = line(k - p + i).scale(&binomial_i(n + 1, p - i).into());
                if i % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                }
            })
        }
    }
}

/// A finite direct sum of atoms with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeSum {
    ambient: Ambient,
    atoms: BTreeMap<BundleAtom, u64>,
}

impl FreeSum {
    pub fn new(ambient: Ambient) -> Self {
        FreeSum {
            ambient,
            atoms: BTreeMap::new(),
        }
    }

    pub fn from_atoms(
        ambient: Ambient,
        atoms: impl IntoIterator<Item = (BundleAtom, u64)>,
    ) -> Result<Self> {
        let mut sum = FreeSum::new(ambient);
        for (atom, mult) in atoms {
            sum.push(atom, mult)?;
        }
        Ok(sum)
    }

    /// `⊕ mult_i O(k_i)`.
    pub fn lines(ambient: Ambient, twists: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut sum = FreeSum::new(ambient);
        for (k, mult) in twists {
            sum.push_normalized(BundleAtom::Line(k), mult);
        }
        sum
    }

    pub fn push(&mut self, atom: BundleAtom, mult: u64) -> Result<()> {
        let atom = self.ambient.normalize(atom)?;
        self.push_normalized(atom, mult);
        Ok(())
    }

    fn push_normalized(&mut self, atom: BundleAtom, mult: u64) {
        if mult > 0 {
            *self.atoms.entry(atom).or_insert(0) += mult;
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BundleAtom, u64)> {
        self.atoms.iter().map(|(a, m)| (a, *m))
    }

    /// Atoms repeated according to multiplicity, in canonical order.
    pub fn expanded(&self) -> Vec<BundleAtom> {
        self.iter()
            .flat_map(|(a, m)| std::iter::repeat_n(*a, m as usize))
            .collect()
    }

    pub fn multiplicity(&self, atom: &BundleAtom) -> u64 {
        self.atoms.get(atom).copied().unwrap_or(0)
    }

    pub fn is_line_only(&self) -> bool {
        self.atoms.keys().all(BundleAtom::is_line)
    }

    pub fn rank(&self) -> BigInt {
        self.iter()
            .map(|(a, m)| a.rank(self.ambient) * BigInt::from(m))
            .sum()
    }

    pub fn max_abs_twist(&self) -> i64 {
        self.atoms.keys().map(|a| a.twist().abs()).max().unwrap_or(0)
    }

    pub fn twisted(&self, j: i64) -> Self {
        FreeSum {
            ambient: self.ambient,
            atoms: self.iter().map(|(a, m)| (a.twisted(j), m)).collect(),
        }
    }

    pub fn dual(&self) -> Self {
        let mut out = FreeSum::new(self.ambient);
        for (a, m) in self.iter() {
            out.push_normalized(a.dual(self.ambient), m);
        }
        out
    }

    pub fn direct_sum(&self, other: &FreeSum) -> Result<Self> {
        if self.ambient != other.ambient {
            return domain(format!(
                "cannot add sums over {} and {}",
                self.ambient, other.ambient
            ));
        }
        let mut out = self.clone();
        for (a, m) in other.iter() {
            out.push_normalized(*a, m);
        }
        Ok(out)
    }

    /// Removes `mult` copies of `atom`.
    pub fn remove(&mut self, atom: &BundleAtom, mult: u64) -> Result<()> {
        let have = self.multiplicity(atom);
        if have < mult {
            return Err(Error::Precondition(format!(
                "sum contains {have} copies of the atom, cannot remove {mult}"
            )));
        }
        if have == mult {
            self.atoms.remove(atom);
        } else {
            self.atoms.insert(*atom, have - mult);
        }
        Ok(())
    }

    /// Same atoms over a different ambient. Only meaningful for line bundles.
    pub(crate) fn with_ambient(&self, ambient: Ambient) -> Self {
        FreeSum {
            ambient,
            atoms: self.atoms.clone(),
        }
    }
}

/// `h^i(F(j))`.
pub fn h_sum(f: &FreeSum, j: i64, i: usize) -> Result<BigInt> {
    f.ambient.check_degree(i)?;
    f.iter().try_fold(BigInt::zero(), |acc, (a, m)| {
        Ok(acc + h_atom(f.ambient, &a.twisted(j), i)? * BigInt::from(m))
    })
}

/// `χ(F(t))` as a polynomial in `t`.
pub fn chi_sum_poly(f: &FreeSum) -> QPoly {
    f.iter().fold(QPoly::zero(), |acc, (a, m)| {
        &acc + &chi_atom_poly(f.ambient, a).scale(&BigInt::from(m).into())
    })
}

/// `χ(F(j))`.
pub fn chi_sum(f: &FreeSum, j: i64) -> BigInt {
    chi_sum_poly(f).eval(&BigInt::from(j)).to_integer()
}

/// `χ(O(t))` on the ambient, i.e. `C(t + n, n)`.
pub fn chi_structure_poly(amb: Ambient) -> QPoly {
    QPoly::binomial(&BigInt::from(amb.ni()), amb.ni())
}
