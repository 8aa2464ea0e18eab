//! Exact rank of sparse rational matrices.
//!
//! Reducing an integer matrix modulo a prime can only lower its rank, so a
//! rank mod `p` equal to `min(rows, cols)` certifies the rank over `Q`. The
//! long side is first compressed by a random projection to keep elimination
//! cheap on tall section maps. When no prime certifies maximal rank the rank
//! is computed by fraction-free (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Primes below `2^31`, so products of residues fit in a `u64`.
const PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];
const PROJECTION_SLACK: usize = 8;

/// A `rows x cols` matrix over `Q`, stored as sparse columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, BigRational)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn from_dense(rows: &[Vec<BigRational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.add(r, c, v);
            }
        }
        m
    }

    /// `self[r][c] += v`.
    pub fn add(&mut self, r: usize, c: usize, v: &BigRational) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of bounds");
        if v.is_zero() {
            return;
        }
        let col = &mut self.columns[c];
        match col.iter_mut().find(|(row, _)| *row == r) {
            Some((_, x)) => *x += v,
            None => col.push((r, v.clone())),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns
            .iter()
            .map(|c| c.iter().filter(|(_, v)| !v.is_zero()).count())
            .sum()
    }

    pub fn get(&self, r: usize, c: usize) -> BigRational {
        self.columns[c]
            .iter()
            .find(|(row, _)| *row == r)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = SparseMatrix::zeros(self.cols, self.rows);
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                t.columns[*r].push((c, v.clone()));
            }
        }
        t
    }

    pub fn to_dense(&self) -> Vec<Vec<BigRational>> {
        let mut d = vec![vec![BigRational::zero(); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                d[*r][c] += v;
            }
        }
        d
    }

    /// Exact rank over `Q`.
    pub fn rank(&self) -> usize {
        let target = self.rows.min(self.cols);
        if target == 0 || self.nnz() == 0 {
            return 0;
        }
        for (attempt, &p) in PRIMES.iter().enumerate() {
            if let Some(r) = self.projected_rank_mod(p, attempt as u64) {
                if r == target {
                    return r;
                }
            }
        }
        self.bareiss_rank()
    }

    /// A lower bound for the rank: the rank mod `p` of a random compression.
    /// `None` if `p` divides a denominator.
    fn projected_rank_mod(&self, p: u64, seed: u64) -> Option<usize> {
        let short = self.rows.min(self.cols);
        let long = self.rows.max(self.cols);
        let compress = long > 2 * short + PROJECTION_SLACK;
        let width = if compress { short + PROJECTION_SLACK } else { long };
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + seed);
        let tall = self.rows >= self.cols;
        if !compress {
            let mut dense = vec![vec![0u64; self.cols]; self.rows];
            for (c, col) in self.columns.iter().enumerate() {
                for (r, v) in col {
                    dense[*r][c] = (dense[*r][c] + residue(v, p)?) % p;
                }
            }
            return Some(rank_mod_dispatch(dense, p));
        }
        // Tall: rows of (R A)^T, one per column of A, with R random
        // `width x rows`. Wide: rows of A C with C random `cols x width`.
        // `proj[i * width + k]` is the weight of long index `i` in slot `k`.
        let proj: Vec<u64> = (0..width * long).map(|_| rng.gen_range(0..p)).collect();
        // Products stay below 2^62, so u128 sums never need reducing midway.
        let mut acc = vec![vec![0u128; width]; short];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                let x = residue(v, p)?;
                if x == 0 {
                    continue;
                }
                let (out, i) = if tall { (&mut acc[c], *r) } else { (&mut acc[*r], c) };
                let weights = &proj[i * width..(i + 1) * width];
                for (slot, w) in out.iter_mut().zip(weights) {
                    *slot += (w * x) as u128;
                }
            }
        }
        let dense = acc
            .into_iter()
            .map(|row| row.into_iter().map(|v| (v % p as u128) as u64).collect())
            .collect();
        Some(rank_mod_dispatch(dense, p))
    }

    /// Fraction-free Gaussian elimination over `Z` after clearing each
    /// column's denominators.
    fn bareiss_rank(&self) -> usize {
        let mut m = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            let lcm = col
                .iter()
                .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
            let mut acc = vec![BigRational::zero(); self.rows];
            for (r, v) in col {
                acc[*r] += v;
            }
            for (r, v) in acc.into_iter().enumerate() {
                m[r][c] = (v * BigRational::from_integer(lcm.clone())).to_integer();
            }
        }
        bareiss(&mut m)
    }
}

fn residue(v: &BigRational, p: u64) -> Option<u64> {
    if v.denom().is_one() {
        if let Some(x) = v.numer().to_i64() {
            return Some(x.rem_euclid(p as i64) as u64);
        }
    }
    let pb = BigInt::from(p);
    let num = v.numer().mod_floor(&pb).to_u64()?;
    let den = v.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(num * inv_mod(den, p) % p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(x: u64, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}

/// Elimination with the modulus known at compile time, so reductions
/// become multiplications.
fn rank_mod_dispatch(m: Vec<Vec<u64>>, p: u64) -> usize {
    match p {
        2_147_483_647 => rank_mod::<2_147_483_647>(m),
        2_147_483_629 => rank_mod::<2_147_483_629>(m),
        2_147_483_587 => rank_mod::<2_147_483_587>(m),
        _ => unreachable!("primes come from PRIMES"),
    }
}

fn rank_mod<const P: u64>(mut m: Vec<Vec<u64>>) -> usize {
    let p = P;
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c], p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = row[c] * inv % p;
            for k in c..cols {
                row[k] = (row[k] + (p - f) * pivot_row[k]) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank by Bareiss elimination; `m` is overwritten.
pub fn bareiss(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for k in c + 1..cols {
                let v = (&pivot * &row[k] - &lead * &pivot_row[k]) / &prev;
                row[k] = v;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&v| q(v)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn small_ranks() {
        assert_eq!(dense(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(dense(&[&[1, 2], &[3, 4]]).rank(), 2);
        assert_eq!(dense(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(dense(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).rank(), 2);
        assert_eq!(SparseMatrix::zeros(0, 5).rank(), 0);
    }

    #[test]
    fn rational_entries() {
        let m = SparseMatrix::from_dense(&[
            vec![BigRational::new(1.into(), 2.into()), q(1)],
            vec![q(1), q(2)],
        ]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.bareiss_rank(), 1);
    }

    #[test]
    fn tall_matrices_are_compressed() {
        // 60 x 5 with full column rank, and a rank-4 variant.
        let mut rows: Vec<Vec<i64>> = (0..60)
            .map(|r| (0..5).map(|c| ((r * 7 + c * 13) % 11) as i64 - 5 + (r == c) as i64).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = dense(&refs);
        assert_eq!(m.rank(), m.bareiss_rank());
        assert_eq!(m.transpose().rank(), m.rank());
        for r in rows.iter_mut() {
            r[4] = r[0] + r[1];
        }
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = dense(&refs);
        assert_eq!(m.rank(), 4);
        assert_eq!(m.transpose().rank(), 4);
    }

    #[test]
    fn residue_handles_negatives() {
        let p = 7;
        assert_eq!(residue(&q(-1), p), Some(6));
        assert_eq!(residue(&BigRational::new(1.into(), 3.into()), p), Some(5));
        assert_eq!(residue(&BigRational::new(1.into(), 7.into()), p), None);
    }
}
