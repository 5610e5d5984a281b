//! Exact integer linear algebra: dense matrices over arbitrary-precision
//! integers, Smith normal form and homology of a pair of boundary maps.
//!
//! The Smith routine uses a fixed pivoting rule (smallest absolute value,
//! row-major tie break; rows eliminated before columns) so transforms are
//! reproducible. For large sparse boundary matrices an invariant-factor fast
//! path first splits off +-1 pivots sparsely, then runs dense Smith on the
//! small remaining core; invariant factors are canonical, so both routes
//! agree.

pub mod abgroup;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use abgroup::{AbGroup, LocMult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZlinError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("boundary maps do not compose to zero (not a chain complex)")]
    NotAChainComplex,
}

/// Dense integer matrix, row-major, arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows
                .into_iter()
                .flatten()
                .map(BigInt::from)
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, ZlinError> {
        if self.cols != other.rows {
            return Err(ZlinError::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    /// Nonzero entries as `(row, col, value)` triples.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, BigInt)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = &self[(i, j)];
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith decomposition `U A V = S` with `U`, `V` unimodular and `S` diagonal
/// with a divisibility chain `d_1 | d_2 | ...`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Positive diagonal entries (the invariant factors).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.s.nrows().min(self.s.ncols());
        (0..n)
            .map(|i| self.s[(i, i)].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn find_pivot(s: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs: Option<BigInt> = None;
    for i in k..s.nrows() {
        for j in k..s.ncols() {
            let v = &s[(i, j)];
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            match &best_abs {
                Some(b) if *b <= a => {}
                _ => {
                    best_abs = Some(a);
                    best = Some((i, j));
                }
            }
        }
    }
    best
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.ncols() {
        let tmp = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = tmp;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.nrows() {
        let tmp = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = tmp;
    }
}

/// `row_a -= q * row_b`
fn row_sub(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.ncols() {
        let delta = q * &m[(b, j)];
        m[(a, j)] -= delta;
    }
}

/// `col_a -= q * col_b`
fn col_sub(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.nrows() {
        let delta = q * &m[(i, b)];
        m[(i, a)] -= delta;
    }
}

fn negate_row(m: &mut IntMatrix, a: usize) {
    for j in 0..m.ncols() {
        let v = -m[(a, j)].clone();
        m[(a, j)] = v;
    }
}

/// Smith normal form with transforms; deterministic for the fixed pivot rule.
pub fn snf(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let n = rows.min(cols);
    for k in 0..n {
        'pivot: loop {
            let (pi, pj) = match find_pivot(&s, k) {
                Some(p) => p,
                None => {
                    // the remaining block is zero
                    return finish(s, u, v);
                }
            };
            swap_rows(&mut s, k, pi);
            swap_rows(&mut u, k, pi);
            swap_cols(&mut s, k, pj);
            swap_cols(&mut v, k, pj);

            // rows first
            let mut dirty = false;
            for i in (k + 1)..rows {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let q = &s[(i, k)] / &s[(k, k)];
                row_sub(&mut s, i, k, &q);
                row_sub(&mut u, i, k, &q);
                if !s[(i, k)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // then columns
            for j in (k + 1)..cols {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let q = &s[(k, j)] / &s[(k, k)];
                col_sub(&mut s, j, k, &q);
                col_sub(&mut v, j, k, &q);
                if !s[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // divisibility sweep over the untouched block
            for i in (k + 1)..rows {
                for j in (k + 1)..cols {
                    if (&s[(i, j)] % &s[(k, k)]).is_zero() {
                        continue;
                    }
                    // fold the offending row into row k and restart the pivot
                    let one = BigInt::from(-1);
                    row_sub(&mut s, k, i, &one);
                    row_sub(&mut u, k, i, &one);
                    continue 'pivot;
                }
            }
            break;
        }
    }
    finish(s, u, v)
}

/// Sign-normalizes the diagonal.
fn finish(mut s: IntMatrix, mut u: IntMatrix, v: IntMatrix) -> SmithForm {
    let n = s.nrows().min(s.ncols());
    for k in 0..n {
        if s[(k, k)].is_negative() {
            negate_row(&mut s, k);
            negate_row(&mut u, k);
        }
    }
    SmithForm { u, s, v }
}

/// Invariant factors without transforms. Splits off +-1 pivots on a sparse
/// representation first (Markowitz-style), then runs dense Smith on the
/// remaining core; suitable for large nerve boundary matrices.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    invariant_factors_sparse(a.nrows(), a.ncols(), a.nonzero_entries())
}

/// Same computation from a sparse entry list (row, col, value).
pub fn invariant_factors_sparse(
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, BigInt)>,
) -> Vec<BigInt> {
    use std::collections::{BTreeMap, BTreeSet};

    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); nrows];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, j, v) in entries {
        if v.is_zero() {
            continue;
        }
        rows[i].insert(j, v);
        cols[j].insert(i);
    }
    let mut live_rows: BTreeSet<usize> = (0..nrows).filter(|&i| !rows[i].is_empty()).collect();
    let mut ones = 0usize;

    loop {
        // cheapest unit pivot by Markowitz cost
        let mut pivot: Option<(usize, usize, usize)> = None; // (cost, row, col)
        for &i in &live_rows {
            let rn = rows[i].len();
            for (&j, v) in &rows[i] {
                if v.abs() == BigInt::one() {
                    let cost = (rn - 1) * (cols[j].len() - 1);
                    match pivot {
                        Some((c, _, _)) if c <= cost => {}
                        _ => pivot = Some((cost, i, j)),
                    }
                    if cost == 0 {
                        break;
                    }
                }
            }
            if matches!(pivot, Some((0, _, _))) {
                break;
            }
        }
        let (_, pr, pc) = match pivot {
            Some(p) => p,
            None => break,
        };

        let pivot_val = rows[pr][&pc].clone();
        let pivot_row: Vec<(usize, BigInt)> =
            rows[pr].iter().map(|(j, v)| (*j, v.clone())).collect();

        // clear the pivot column with row operations
        let users: Vec<usize> = cols[pc].iter().copied().filter(|&i| i != pr).collect();
        for i in users {
            let factor = &rows[i][&pc] / &pivot_val;
            for (j, v) in &pivot_row {
                let delta = &factor * v;
                let entry = rows[i].entry(*j).or_insert_with(BigInt::zero);
                *entry -= delta;
                if entry.is_zero() {
                    rows[i].remove(j);
                    cols[*j].remove(&i);
                } else {
                    cols[*j].insert(i);
                }
            }
            if rows[i].is_empty() {
                live_rows.remove(&i);
            }
        }
        // the pivot row can now be dropped wholesale (column ops clear it
        // without touching other rows, since its column is empty elsewhere)
        for (j, _) in &pivot_row {
            cols[*j].remove(&pr);
        }
        rows[pr].clear();
        live_rows.remove(&pr);
        ones += 1;
    }

    // dense core on whatever is left
    let mut live_cols: BTreeSet<usize> = BTreeSet::new();
    for &i in &live_rows {
        live_cols.extend(rows[i].keys().copied());
    }
    let row_list: Vec<usize> = live_rows.iter().copied().collect();
    let col_list: Vec<usize> = live_cols.iter().copied().collect();
    let mut core = IntMatrix::zero(row_list.len(), col_list.len());
    for (ri, &i) in row_list.iter().enumerate() {
        for (ci, &j) in col_list.iter().enumerate() {
            if let Some(v) = rows[i].get(&j) {
                core[(ri, ci)] = v.clone();
            }
        }
    }
    let mut factors = vec![BigInt::one(); ones];
    factors.extend(snf(&core).invariant_factors());
    factors
}

pub fn rank(a: &IntMatrix) -> usize {
    invariant_factors(a).len()
}

/// `ker(d_n) / im(d_{n+1})` where `d_n` has `N` columns:
/// free rank `N - rank(d_n) - rank(d_{n+1})` plus the torsion given by the
/// invariant factors of `d_{n+1}` exceeding one.
pub fn homology_of_pair(dn: &IntMatrix, dn1: &IntMatrix) -> Result<AbGroup, ZlinError> {
    if dn.ncols() != dn1.nrows() {
        return Err(ZlinError::Dimension(format!(
            "d_n is {}x{} but d_(n+1) is {}x{}",
            dn.nrows(),
            dn.ncols(),
            dn1.nrows(),
            dn1.ncols()
        )));
    }
    if !dn.mul(dn1)?.is_zero() {
        return Err(ZlinError::NotAChainComplex);
    }
    let rank_dn = rank(dn);
    let factors = invariant_factors(dn1);
    let rank_dn1 = factors.len();
    let free = dn
        .ncols()
        .checked_sub(rank_dn + rank_dn1)
        .expect("rank + rank cannot exceed the ambient dimension");
    let torsion: Vec<BigInt> = factors.into_iter().filter(|d| !d.is_one()).collect();
    Ok(AbGroup::from_parts(free, torsion))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_of_the_two_by_two_example() {
        // [[2,4],[6,8]]: gcd 2, |det| 8, invariants (2, 4)
        let a = IntMatrix::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let form = snf(&a);
        assert_eq!(
            form.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
        let uav = form.u.mul(&a).unwrap().mul(&form.v).unwrap();
        assert_eq!(uav, form.s);
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = IntMatrix::identity(3);
        assert_eq!(snf(&id).invariant_factors(), vec![BigInt::one(); 3]);
        let z = IntMatrix::zero(2, 3);
        assert!(snf(&z).invariant_factors().is_empty());
        assert_eq!(rank(&z), 0);
    }

    #[test]
    fn fast_path_matches_dense() {
        let a = IntMatrix::from_rows(vec![
            vec![2, 4, 4],
            vec![-6, 6, 12],
            vec![10, 4, 16],
        ]);
        assert_eq!(invariant_factors(&a), snf(&a).invariant_factors());
    }

    #[test]
    fn homology_of_zero_pair_is_free() {
        let dn = IntMatrix::zero(0, 3);
        let dn1 = IntMatrix::zero(3, 2);
        let h = homology_of_pair(&dn, &dn1).unwrap();
        assert_eq!(h, AbGroup::free(3));
    }

    #[test]
    fn homology_detects_non_complexes() {
        let dn = IntMatrix::from_rows(vec![vec![1, 0]]);
        let dn1 = IntMatrix::from_rows(vec![vec![1], vec![0]]);
        assert_eq!(
            homology_of_pair(&dn, &dn1).unwrap_err(),
            ZlinError::NotAChainComplex
        );
    }

    #[test]
    fn bar_complex_degree_one_of_order_two() {
        // delta_1 = 0 (1x2), delta_2 = [[1,1,1,-1],[0,0,0,2]] gives Z/2
        let d1 = IntMatrix::zero(1, 2);
        let d2 = IntMatrix::from_rows(vec![vec![1, 1, 1, -1], vec![0, 0, 0, 2]]);
        let h1 = homology_of_pair(&d2, &IntMatrix::zero(4, 0)).unwrap();
        // ker d2 / 0 = Z^2 (4 - rank 2)
        assert_eq!(h1, AbGroup::free(2));
        let h = homology_of_pair(&d1, &d2).unwrap();
        assert_eq!(h, AbGroup::from_parts(0, vec![BigInt::from(2)]));
    }
}
