//! Resolutions of codimension-2 ideal sheaves: Hilbert-polynomial
//! bookkeeping, linkage by the dual mapping cone, and the passage from an
//! ideal resolution to a bundle presentation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::binomial::{factorial, QPoly};
use crate::cohomology::{chi_structure_poly, chi_sum_poly, h_sum, Ambient, BundleAtom, FreeSum};
use crate::error::{domain, Error, Result};
use crate::grammar::{format_sum, parse_arrow};
use crate::presentation::TwoTermPresentation;

/// `0 -> F1 -> F0 -> I_Z -> 0` with `F0`, `F1` sums of line bundles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealResolution {
    f1: FreeSum,
    f0: FreeSum,
}

impl IdealResolution {
    pub fn new(f1: FreeSum, f0: FreeSum) -> Result<Self> {
        if f1.ambient() != f0.ambient() {
            return domain("resolution terms live on different ambients");
        }
        if !f1.is_line_only() || !f0.is_line_only() {
            return domain("ideal resolutions use sums of line bundles");
        }
        if f0.rank() - f1.rank() != BigInt::one() {
            return domain(format!(
                "rank(F0) - rank(F1) = {} - {} must be 1",
                f0.rank(),
                f1.rank()
            ));
        }
        if let Some((a, _)) = f0.iter().chain(f1.iter()).find(|(a, _)| a.twist() > 0) {
            return domain(format!("positive twist {} in an ideal resolution", a.twist()));
        }
        Ok(IdealResolution { f1, f0 })
    }

    /// Accepts `F1 -> F0 => I`; the marker is optional.
    pub fn parse(amb: Ambient, src: &str) -> Result<Self> {
        let (f1, f0, _) = parse_arrow(amb, src)?;
        Self::new(f1, f0)
    }

    pub fn ambient(&self) -> Ambient {
        self.f0.ambient()
    }

    pub fn f1(&self) -> &FreeSum {
        &self.f1
    }

    pub fn f0(&self) -> &FreeSum {
        &self.f0
    }

    /// `h^0(I_Z(d))`, using `H^1(F1(d)) = 0`.
    pub fn h0_ideal(&self, d: i64) -> Result<BigInt> {
        if self.ambient().n() < 2 {
            return Err(Error::Precondition("needs n >= 2".into()));
        }
        Ok(h_sum(&self.f0, d, 0)? - h_sum(&self.f1, d, 0)?)
    }
}

impl fmt::Display for IdealResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f1.is_empty() {
            write!(f, "{} => I", format_sum(&self.f0))
        } else {
            write!(f, "{} -> {} => I", format_sum(&self.f1), format_sum(&self.f0))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeInvariants {
    pub dimension: usize,
    #[serde(serialize_with = "crate::serialize_bigint")]
    pub degree: BigInt,
    #[serde(serialize_with = "serialize_poly")]
    pub hilbert_polynomial: QPoly,
}

fn serialize_poly<S: serde::Serializer>(p: &QPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

pub fn scheme_invariants(r: &IdealResolution) -> Result<SchemeInvariants> {
    let amb = r.ambient();
    let hilbert = &(&chi_structure_poly(amb) - &chi_sum_poly(&r.f0)) + &chi_sum_poly(&r.f1);
    let Some(dimension) = hilbert.degree() else {
        return domain(format!("{r} resolves the unit ideal: the scheme is empty"));
    };
    let degree = hilbert.leading() * num_rational::BigRational::from_integer(factorial(dimension as u64));
    if !degree.is_integer() || !degree.is_positive() {
        return domain(format!("{r} cannot resolve an ideal sheaf: degree would be {degree}"));
    }
    Ok(SchemeInvariants {
        dimension,
        degree: degree.to_integer(),
        hilbert_polynomial: hilbert,
    })
}

/// Koszul resolution of a complete intersection of type `(d1, d2)`.
pub fn ci_resolution(amb: Ambient, d1: i64, d2: i64) -> Result<IdealResolution> {
    if d1 < 1 || d2 < 1 {
        return domain(format!("complete intersection degrees ({d1}, {d2}) must be positive"));
    }
    IdealResolution::new(
        FreeSum::lines(amb, [(-d1 - d2, 1)]),
        FreeSum::lines(amb, [(-d1, 1), (-d2, 1)]),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linkage {
    pub resolution: IdealResolution,
    pub degree_given: BigInt,
    pub degree_linked: BigInt,
    /// Containment of the scheme in the complete intersection is taken on trust.
    pub assumption: String,
}

/// The scheme `Z'` linked to `Z` by a complete intersection `(d1, d2)`:
/// `0 -> F0^∨(-d1-d2) -> F1^∨(-d1-d2) ⊕ O(-d1) ⊕ O(-d2) -> I_Z' -> 0`.
/// Each twist in `cancel` removes one `O(k)` from both terms.
pub fn link(r: &IdealResolution, d1: i64, d2: i64, cancel: &[i64]) -> Result<Linkage> {
    let amb = r.ambient();
    if amb.n() < 2 {
        return domain("linkage needs codimension-2 schemes, so n >= 2");
    }
    ci_resolution(amb, d1, d2)?;
    let (lo, hi) = (d1.min(d2), d1.max(d2));
    let one = BigInt::one();
    let need_hi = if lo == hi {
        BigInt::from(2)
    } else {
        h_sum(&FreeSum::lines(amb, [(hi - lo, 1)]), 0, 0)? + &one
    };
    if r.h0_ideal(lo)? < one || r.h0_ideal(hi)? < need_hi {
        return domain(format!(
            "{r} lies on no complete intersection of type ({d1}, {d2})"
        ));
    }
    let given = scheme_invariants(r)?;
    if given.dimension + 2 != amb.n() as usize {
        return domain(format!("{r} is not of codimension 2"));
    }

    let s = -d1 - d2;
    let mut f1 = r.f0.dual().twisted(s);
    let mut f0 = r.f1.dual().twisted(s).direct_sum(&FreeSum::lines(amb, [(-d1, 1), (-d2, 1)]))?;
    for &k in cancel {
        let atom = BundleAtom::Line(k);
        if f1.multiplicity(&atom) == 0 || f0.multiplicity(&atom) == 0 {
            return domain(format!("no matching pair O({k}) to cancel"));
        }
        f1.remove(&atom, 1)?;
        f0.remove(&atom, 1)?;
    }
    let resolution = IdealResolution::new(f1, f0)?;
    let linked = scheme_invariants(&resolution)?;
    if &given.degree + &linked.degree != BigInt::from(d1) * d2 {
        return Err(Error::Internal(format!(
            "degrees {} + {} do not add up to {d1}*{d2}",
            given.degree, linked.degree
        )));
    }
    Ok(Linkage {
        resolution,
        degree_given: given.degree,
        degree_linked: linked.degree,
        assumption: format!(
            "assumed linkage: the scheme is taken to lie on a complete intersection of type ({d1}, {d2})"
        ),
    })
}

/// `0 -> F1(c1) -> F0(c1) ⊕ sO -> E -> 0`: the bundle with `s` sections
/// vanishing on `Z` and determinant `O(c1)`.
pub fn bundle_from_ideal(r: &IdealResolution, c1: i64, s: u64) -> Result<TwoTermPresentation> {
    let amb = r.ambient();
    let l0 = r.f0.twisted(c1).direct_sum(&FreeSum::lines(amb, [(0, s)]))?;
    TwoTermPresentation::new(r.f1.twisted(c1), l0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaTwist {
    /// `Λ_Z = O_Z(k)`.
    pub k: i64,
    pub globally_generated: bool,
}

/// `Λ_Z = ω_Z(n - 2) = O_Z(d1 + d2 - 3)` for a complete intersection, by
/// adjunction with `L = O(3)`.
pub fn lambda_ci(d1: i64, d2: i64, amb: Ambient) -> LambdaTwist {
    let n = amb.n() as i64;
    let omega = d1 + d2 - n - 1;
    let k = omega + n - 2;
    LambdaTwist {
        k,
        globally_generated: k >= 0,
    }
}

/// Degree of a codimension-2 scheme given only through its resolution, as
/// a machine integer when it fits.
pub fn degree_i64(r: &IdealResolution) -> Result<i64> {
    let d = scheme_invariants(r)?.degree;
    d.to_i64()
        .filter(|v| !v.is_zero())
        .ok_or_else(|| Error::Domain(format!("degree {d} does not fit")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::chern_sum;

    fn amb(n: u32) -> Ambient {
        Ambient::new(n).unwrap()
    }

    fn res(n: u32, s: &str) -> IdealResolution {
        IdealResolution::parse(amb(n), s).unwrap()
    }

    /// Hilbert polynomial by direct expansion: `C(t+n, n)` minus the
    /// binomials of `F0` plus those of `F1`, evaluated pointwise.
    fn hilbert_oracle(n: i64, f1: &[i64], f0: &[i64], t: i64) -> i64 {
        let c = |a: i64| -> i64 {
            // C(a + n, n) as a polynomial in a.
            let mut num = 1i128;
            for i in 1..=n {
                num *= (a + i) as i128;
            }
            let mut den = 1i128;
            for i in 1..=n {
                den *= i as i128;
            }
            (num / den) as i64
        };
        c(t) - f0.iter().map(|d| c(t + d)).sum::<i64>() + f1.iter().map(|d| c(t + d)).sum::<i64>()
    }

    #[test]
    fn three_points() {
        let r = res(2, "2O(-3) -> 3O(-2) => I");
        let inv = scheme_invariants(&r).unwrap();
        assert_eq!((inv.dimension, inv.degree.clone()), (0, BigInt::from(3)));
        for t in -4..6 {
            assert_eq!(
                inv.hilbert_polynomial.eval(&BigInt::from(t)),
                num_rational::BigRational::from_integer(hilbert_oracle(2, &[-3, -3], &[-2, -2, -2], t).into())
            );
        }
    }

    #[test]
    fn segre_threefold_and_ci_surface() {
        let inv = scheme_invariants(&res(5, "2O(-3) -> 3O(-2) => I")).unwrap();
        assert_eq!((inv.dimension, inv.degree), (3, BigInt::from(3)));
        let inv = scheme_invariants(&ci_resolution(amb(4), 2, 3).unwrap()).unwrap();
        assert_eq!((inv.dimension, inv.degree), (2, BigInt::from(6)));
        for n in 2..7 {
            for t in -3..5 {
                let inv = scheme_invariants(&ci_resolution(amb(n), 2, 3).unwrap()).unwrap();
                assert_eq!(
                    inv.hilbert_polynomial.eval(&BigInt::from(t)).to_integer(),
                    BigInt::from(hilbert_oracle(n as i64, &[-5], &[-2, -3], t))
                );
            }
        }
    }

    #[test]
    fn rejects_malformed_resolutions() {
        assert!(matches!(
            IdealResolution::parse(amb(2), "O(-3) -> 3O(-2) => I"),
            Err(Error::Domain(_))
        ));
        assert!(IdealResolution::parse(amb(2), "O(-1) -> O(1) + O(-1)").is_err());
        assert!(ci_resolution(amb(2), 0, 3).is_err());
        // Not Hilbert-Burch: the minors would have the wrong degree.
        assert!(matches!(
            scheme_invariants(&res(4, "3O(-3) -> 4O(-2)")),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn koszul_shapes() {
        assert_eq!(ci_resolution(amb(3), 1, 3).unwrap().to_string(), "O(-4) -> O(-3)+O(-1) => I");
        assert_eq!(ci_resolution(amb(3), 2, 2).unwrap().to_string(), "O(-4) -> 2O(-2) => I");
        assert_eq!(ci_resolution(amb(3), 3, 3).unwrap().to_string(), "O(-6) -> 2O(-3) => I");
    }

    #[test]
    fn linkage_of_plane_curves_points() {
        let a = link(&res(2, "2O(-3) -> 3O(-2) => I"), 3, 3, &[]).unwrap();
        assert_eq!(a.resolution, res(2, "3O(-4) -> 4O(-3)"));
        assert_eq!((a.degree_given.clone(), a.degree_linked.clone()), (3.into(), 6.into()));
        assert!(a.assumption.starts_with("assumed linkage"));

        let b = link(&ci_resolution(amb(2), 1, 2).unwrap(), 3, 3, &[]).unwrap();
        assert_eq!(b.resolution.to_string(), "O(-5)+O(-4) -> 3O(-3) => I");
        assert_eq!((b.degree_given, b.degree_linked), (2.into(), 7.into()));
    }

    #[test]
    fn double_linkage_recovers_hilbert_polynomial() {
        for y in ["2O(-3) -> 3O(-2)", "O(-3) -> O(-1) + O(-2)"] {
            let y = res(2, y);
            let z = link(&y, 3, 3, &[]).unwrap().resolution;
            let back = link(&z, 3, 3, &[-3, -3]).unwrap().resolution;
            assert_eq!(back, y);
            assert_eq!(
                scheme_invariants(&back).unwrap().hilbert_polynomial,
                scheme_invariants(&y).unwrap().hilbert_polynomial
            );
        }
    }

    #[test]
    fn linkage_errors() {
        let y = res(2, "2O(-3) -> 3O(-2)");
        assert!(matches!(link(&y, 3, 3, &[7]), Err(Error::Domain(_))));
        // Three general points lie on no line.
        assert!(matches!(link(&y, 1, 3, &[]), Err(Error::Domain(_))));
    }

    #[test]
    fn serre_transform_shapes() {
        let castelnuovo = res(4, "2O(-4) -> 2O(-3) + O(-2)");
        let f = bundle_from_ideal(&castelnuovo, 3, 8).unwrap();
        assert_eq!(f.to_string(), "2O(-1) -> 10O+O(1)");
        assert_eq!(f.rank(), BigInt::from(9));
        assert_eq!(f.cancel_trivial_subbundle(5).unwrap().to_string(), "2O(-1) -> 5O+O(1)");
        for n in 2..8 {
            let e = bundle_from_ideal(&ci_resolution(amb(n), 1, 3).unwrap(), 3, n as u64 - 1).unwrap();
            assert_eq!(e.to_string(), format!("O(-1) -> {n}O+O(2)"));
            let e = bundle_from_ideal(&ci_resolution(amb(n), 2, 3).unwrap(), 3, n as u64 - 1).unwrap();
            assert_eq!(e.to_string(), format!("O(-2) -> {n}O+O(1)"));
            assert_eq!(e.rank(), BigInt::from(n));
            let e = bundle_from_ideal(&ci_resolution(amb(n), 2, 2).unwrap(), 3, n as u64 - 1).unwrap();
            let lead = if n == 2 { "O".to_string() } else { format!("{}O", n - 1) };
            assert_eq!(e.to_string(), format!("O(-1) -> {lead}+2O(1)"));
        }
    }

    #[test]
    fn second_chern_class_is_the_degree() {
        for (n, r) in [
            (2, "2O(-3) -> 3O(-2)"),
            (4, "2O(-4) -> 2O(-3) + O(-2)"),
            (4, "3O(-4) -> 4O(-3)"),
            (5, "2O(-3) -> 3O(-2)"),
            (3, "O(-5) -> O(-2) + O(-3)"),
        ] {
            let r = res(n, r);
            let deg = scheme_invariants(&r).unwrap().degree;
            for s in 0..4 {
                let e = bundle_from_ideal(&r, 3, s).unwrap();
                assert_eq!(e.rank(), BigInt::from(s + 1));
                let c = e.chern().unwrap();
                assert_eq!(c.c(1), BigInt::from(3));
                assert_eq!(c.c(2), deg, "{r} s={s}");
                // Oracle: c(E) = c(F0(3)) / c(F1(3)) computed independently.
                let direct = chern_sum(&r.f0().twisted(3)).unwrap().div(&chern_sum(&r.f1().twisted(3)).unwrap()).unwrap();
                assert_eq!(c, direct);
            }
        }
    }

    #[test]
    fn lambda_of_complete_intersections() {
        for n in 2..7 {
            assert_eq!(lambda_ci(1, 2, amb(n)), LambdaTwist { k: 0, globally_generated: true });
            assert_eq!(lambda_ci(1, 3, amb(n)), LambdaTwist { k: 1, globally_generated: true });
            assert_eq!(lambda_ci(1, 1, amb(n)), LambdaTwist { k: -1, globally_generated: false });
        }
    }
}
