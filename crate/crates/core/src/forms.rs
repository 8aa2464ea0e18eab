//! Explicit matrices of homogeneous forms for line-bundle presentations and
//! the exact linear algebra on global sections they allow.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cohomology::{h_sum, Ambient, BundleAtom};
use crate::error::{domain, Error, Result};
use crate::linalg::SparseMatrix;
use crate::presentation::TwoTermPresentation;

/// All exponent vectors of `vars` variables with total degree `degree`,
/// in lexicographically decreasing order (`x_0^d` first).
pub fn monomials(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars == 1 {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            rec(vars - 1, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        rec(vars, degree, &mut Vec::with_capacity(vars), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousForm {
    ambient: Ambient,
    degree: u32,
    coeffs: BTreeMap<Vec<u32>, BigRational>,
}

impl HomogeneousForm {
    pub fn zero(ambient: Ambient, degree: u32) -> Self {
        HomogeneousForm {
            ambient,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        ambient: Ambient,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Result<Self> {
        let mut f = HomogeneousForm::zero(ambient, degree);
        let vars = ambient.n() as usize + 1;
        for (exp, c) in terms {
            if exp.len() != vars || exp.iter().sum::<u32>() != degree {
                return domain(format!(
                    "exponent vector {exp:?} is not a monomial of degree {degree} in {vars} variables"
                ));
            }
            if !c.is_zero() {
                let slot = f.coeffs.entry(exp).or_insert_with(BigRational::zero);
                *slot += c;
            }
        }
        f.coeffs.retain(|_, c| !c.is_zero());
        Ok(f)
    }

    /// Every monomial present, coefficients uniform in `[-9, 9]`.
    pub fn random_dense(ambient: Ambient, degree: u32, rng: &mut impl Rng) -> Self {
        let coeffs = monomials(ambient.n() as usize + 1, degree)
            .into_iter()
            .map(|m| (m, BigRational::from_integer(rng.gen_range(-9i64..=9).into())))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        HomogeneousForm {
            ambient,
            degree,
            coeffs,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn eval(&self, point: &[BigInt]) -> BigRational {
        self.coeffs
            .iter()
            .map(|(exp, c)| {
                let v: BigInt = exp
                    .iter()
                    .zip(point)
                    .map(|(&e, x)| num_traits::pow(x.clone(), e as usize))
                    .product();
                c * BigRational::from_integer(v)
            })
            .sum()
    }
}

/// Map `L1 -> L0` as a matrix of forms: one row per summand of `L0`, one
/// column per summand of `L1`; the entry in row `O(a)`, column `O(b)` has
/// degree `a - b` and is zero when `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormMatrix {
    presentation: TwoTermPresentation,
    row_twists: Vec<i64>,
    col_twists: Vec<i64>,
    entries: Vec<Vec<HomogeneousForm>>,
}

fn line_twists(atoms: Vec<BundleAtom>) -> Vec<i64> {
    atoms.iter().map(BundleAtom::twist).collect()
}

fn require_lines(p: &TwoTermPresentation) -> Result<()> {
    if !p.is_line_only() {
        return Err(Error::UnsupportedAtom {
            atom: p.to_string(),
            reason: "matrices of forms need sums of line bundles".into(),
        });
    }
    Ok(())
}

impl FormMatrix {
    pub fn new(presentation: TwoTermPresentation, entries: Vec<Vec<HomogeneousForm>>) -> Result<Self> {
        require_lines(&presentation)?;
        let row_twists = line_twists(presentation.l0().expanded());
        let col_twists = line_twists(presentation.l1().expanded());
        if entries.len() != row_twists.len()
            || entries.iter().any(|r| r.len() != col_twists.len())
        {
            return domain(format!(
                "matrix shape does not match {} x {}",
                row_twists.len(),
                col_twists.len()
            ));
        }
        for (r, row) in entries.iter().enumerate() {
            for (c, f) in row.iter().enumerate() {
                let want = row_twists[r] - col_twists[c];
                if !f.is_zero() && want != f.degree as i64 {
                    return domain(format!(
                        "entry ({r}, {c}) has degree {} but the twists require {want}",
                        f.degree
                    ));
                }
                if f.ambient != presentation.ambient() {
                    return domain(format!("entry ({r}, {c}) lives on another ambient"));
                }
            }
        }
        Ok(FormMatrix {
            presentation,
            row_twists,
            col_twists,
            entries,
        })
    }

    pub fn presentation(&self) -> &TwoTermPresentation {
        &self.presentation
    }

    pub fn rows(&self) -> usize {
        self.row_twists.len()
    }

    pub fn cols(&self) -> usize {
        self.col_twists.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &HomogeneousForm {
        &self.entries[r][c]
    }

    /// The matrix of `E ⊕ sO`: `s` zero rows for the new trivial summands.
    pub fn extend_by_trivial(&self, s: u64) -> Self {
        let presentation = self.presentation.extend_by_trivial(s);
        let amb = presentation.ambient();
        let at = self.row_twists.iter().filter(|&&k| k <= 0).count();
        let mut entries = self.entries.clone();
        for _ in 0..s {
            let zero_row = self
                .col_twists
                .iter()
                .map(|&b| HomogeneousForm::zero(amb, (-b).max(0) as u32))
                .collect();
            entries.insert(at, zero_row);
        }
        FormMatrix::new(presentation, entries).expect("zero rows keep the matrix valid")
    }

    /// The matrix evaluated at a point of `P^n`.
    pub fn evaluate(&self, point: &[BigInt]) -> SparseMatrix {
        let dense: Vec<Vec<BigRational>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|f| f.eval(point)).collect())
            .collect();
        let mut m = SparseMatrix::from_dense(&dense);
        if dense.is_empty() {
            m = SparseMatrix::zeros(0, self.cols());
        }
        m
    }

    /// Multiplication by the matrix on global sections in degree `j`, from
    /// `H^0(L1(j))` to `H^0(L0(j))`. With `dual`, the transpose map
    /// `H^0(L0^∨(j)) -> H^0(L1^∨(j))`.
    fn sections_matrix(&self, j: i64, dual: bool) -> SparseMatrix {
        let vars = self.presentation.ambient().n() as usize + 1;
        let (src_twists, dst_twists): (Vec<i64>, Vec<i64>) = if dual {
            (
                self.row_twists.iter().map(|a| -a).collect(),
                self.col_twists.iter().map(|b| -b).collect(),
            )
        } else {
            (self.col_twists.clone(), self.row_twists.clone())
        };
        let mut cache: HashMap<i64, (Vec<Vec<u32>>, HashMap<Vec<u32>, usize>)> = HashMap::new();
        let mut basis = |d: i64| -> (Vec<Vec<u32>>, HashMap<Vec<u32>, usize>) {
            cache
                .entry(d)
                .or_insert_with(|| {
                    if d < 0 {
                        return (Vec::new(), HashMap::new());
                    }
                    let mons = monomials(vars, d as u32);
                    let index = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                    (mons, index)
                })
                .clone()
        };
        let src: Vec<_> = src_twists.iter().map(|t| basis(j + t)).collect();
        let dst: Vec<_> = dst_twists.iter().map(|t| basis(j + t)).collect();
        let offsets = |blocks: &[(Vec<Vec<u32>>, HashMap<Vec<u32>, usize>)]| {
            let mut acc = 0;
            blocks
                .iter()
                .map(|b| {
                    let o = acc;
                    acc += b.0.len();
                    o
                })
                .collect::<Vec<_>>()
        };
        let (src_off, dst_off) = (offsets(&src), offsets(&dst));
        let rows: usize = dst.iter().map(|b| b.0.len()).sum();
        let cols: usize = src.iter().map(|b| b.0.len()).sum();
        let mut m = SparseMatrix::zeros(rows, cols);
        for (s_blk, (mons, _)) in src.iter().enumerate() {
            for (d_blk, (_, index)) in dst.iter().enumerate() {
                let form = if dual {
                    &self.entries[s_blk][d_blk]
                } else {
                    &self.entries[d_blk][s_blk]
                };
                for (i, mono) in mons.iter().enumerate() {
                    for (exp, c) in form.terms() {
                        let prod: Vec<u32> = mono.iter().zip(exp).map(|(a, b)| a + b).collect();
                        let row = index[&prod];
                        m.add(dst_off[d_blk] + row, src_off[s_blk] + i, c);
                    }
                }
            }
        }
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|f| {
                        f.terms()
                            .map(|(e, c)| (e.clone(), c.numer().to_string(), c.denom().to_string()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        serde_json::to_value(FormMatrixJson {
            n: self.presentation.ambient().n(),
            presentation: self.presentation.to_string(),
            rows: self.rows(),
            cols: self.cols(),
            entries,
        })
        .expect("plain data serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: FormMatrixJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::Domain(format!("malformed matrix JSON: {e}")))?;
        let amb = Ambient::new(raw.n)?;
        let p = TwoTermPresentation::parse(amb, &raw.presentation)?;
        require_lines(&p)?;
        let row_twists = line_twists(p.l0().expanded());
        let col_twists = line_twists(p.l1().expanded());
        if raw.rows != row_twists.len() || raw.cols != col_twists.len() || raw.entries.len() != raw.rows {
            return domain("matrix JSON dimensions disagree with the presentation");
        }
        let mut entries = Vec::with_capacity(raw.rows);
        for (r, row) in raw.entries.into_iter().enumerate() {
            let mut out = Vec::with_capacity(raw.cols);
            for (c, terms) in row.into_iter().enumerate() {
                let degree = (row_twists[r] - col_twists.get(c).copied().unwrap_or(0)).max(0) as u32;
                let terms = terms
                    .into_iter()
                    .map(|(e, num, den)| {
                        let parse = |s: &str| {
                            s.parse::<BigInt>()
                                .map_err(|_| Error::Domain(format!("bad integer {s:?} in matrix JSON")))
                        };
                        let den = parse(&den)?;
                        if den.is_zero() {
                            return domain("zero denominator in matrix JSON");
                        }
                        Ok((e, BigRational::new(parse(&num)?, den)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push(HomogeneousForm::from_terms(amb, degree, terms)?);
            }
            entries.push(out);
        }
        FormMatrix::new(p, entries)
    }
}

#[derive(Serialize, Deserialize)]
struct FormMatrixJson {
    n: u32,
    presentation: String,
    rows: usize,
    cols: usize,
    /// `entries[row][col]` is a list of `[exponent-vector, numerator, denominator]`.
    entries: Vec<Vec<Vec<(Vec<u32>, String, String)>>>,
}

/// Dense forms with coefficients in `[-9, 9]` drawn from `seed`.
pub fn random_matrix(p: &TwoTermPresentation, seed: u64) -> Result<FormMatrix> {
    require_lines(p)?;
    let amb = p.ambient();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols = line_twists(p.l1().expanded());
    let entries = line_twists(p.l0().expanded())
        .into_iter()
        .map(|a| {
            cols.iter()
                .map(|&b| {
                    if a >= b {
                        HomogeneousForm::random_dense(amb, (a - b) as u32, &mut rng)
                    } else {
                        HomogeneousForm::zero(amb, 0)
                    }
                })
                .collect()
        })
        .collect();
    FormMatrix::new(p.clone(), entries)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SampleOutcome {
    /// Probabilistic evidence only; `vacuous` when no point was sampled.
    NoDropFound { samples: usize, vacuous: bool },
    /// The matrix loses rank here, so `L1 -> L0` is not a subbundle.
    DropAt {
        #[serde(serialize_with = "serialize_point")]
        point: Vec<BigInt>,
        rank: usize,
    },
}

fn serialize_point<S: serde::Serializer>(p: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(crate::json_int))
}

/// Checks fiberwise injectivity at `count` random points with coordinates
/// in `[-20, 20]`. A general point avoids a proper degeneracy locus with
/// high probability, but "no drop found" never certifies emptiness.
pub fn fiberwise_injectivity_sample(m: &FormMatrix, seed: u64, count: usize) -> SampleOutcome {
    let vars = m.presentation.ambient().n() as usize + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let point = loop {
            let pt: Vec<BigInt> = (0..vars).map(|_| BigInt::from(rng.gen_range(-20i64..=20))).collect();
            if pt.iter().any(|x| !x.is_zero()) {
                break pt;
            }
        };
        let rank = m.evaluate(&point).rank();
        if rank < m.cols() {
            return SampleOutcome::DropAt { point, rank };
        }
    }
    SampleOutcome::NoDropFound {
        samples: count,
        vacuous: count == 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionMap {
    pub j: i64,
    /// `rows = h^0(L0(j))`, `cols = h^0(L1(j))`, monomial bases.
    pub matrix: SparseMatrix,
    pub rank: usize,
}

impl SectionMap {
    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn kernel_dim(&self) -> usize {
        self.source_dim() - self.rank
    }

    pub fn cokernel_dim(&self) -> usize {
        self.target_dim() - self.rank
    }

    /// `h^0(E(j))` when `H^1(L1(j)) = 0`.
    pub fn h0_quotient(&self) -> usize {
        self.cokernel_dim()
    }
}

pub fn section_map(m: &FormMatrix, j: i64) -> SectionMap {
    let matrix = m.sections_matrix(j, false);
    let rank = matrix.rank();
    SectionMap { j, matrix, rank }
}

/// `h^0(E^∨)` from `0 -> E^∨ -> L0^∨ -> L1^∨`.
pub fn h0_dual(m: &FormMatrix) -> usize {
    let t = m.sections_matrix(0, true);
    t.cols() - t.rank()
}

/// `(h^(n-1)(E(j)), h^n(E(j)))` exactly, with the rank of
/// `H^n(L1(j)) -> H^n(L0(j))` read off its Serre-dual section map.
pub fn exact_top_cohomology(m: &FormMatrix, j: i64) -> Result<(BigInt, BigInt)> {
    let p = &m.presentation;
    let n = p.ambient().n() as usize;
    let dual = m.sections_matrix(-j - n as i64 - 1, true);
    let rho = BigInt::from(dual.rank());
    let a_top = h_sum(p.l1(), j, n)?;
    let b_top = h_sum(p.l0(), j, n)?;
    if a_top != BigInt::from(dual.rows()) || b_top != BigInt::from(dual.cols()) {
        return Err(Error::Internal(format!(
            "Serre-dual section map has shape {}x{}, expected {a_top}x{b_top}",
            dual.rows(),
            dual.cols()
        )));
    }
    // Below the top only h^0 of line bundles survives (n = 1).
    let mut below = h_sum(p.l0(), j, n - 1)?;
    if n == 1 {
        below -= h_sum(p.l1(), j, 0)?;
    }
    Ok((below + &a_top - &rho, b_top - rho))
}

impl FormMatrix {
    /// A copy with column `src` duplicated into column `dst`.
    pub fn with_repeated_column(&self, src: usize, dst: usize) -> Result<Self> {
        if self.col_twists[src] != self.col_twists[dst] {
            return domain("columns of different twists cannot be repeated");
        }
        let mut entries = self.entries.clone();
        for row in entries.iter_mut() {
            row[dst] = row[src].clone();
        }
        FormMatrix::new(self.presentation.clone(), entries)
    }

    pub fn zero(p: &TwoTermPresentation) -> Result<Self> {
        require_lines(p)?;
        let amb = p.ambient();
        let rows = line_twists(p.l0().expanded());
        let cols = line_twists(p.l1().expanded());
        let entries = rows
            .iter()
            .map(|a| cols.iter().map(|b| HomogeneousForm::zero(amb, (a - b).max(0) as u32)).collect())
            .collect();
        FormMatrix::new(p.clone(), entries)
    }
}
