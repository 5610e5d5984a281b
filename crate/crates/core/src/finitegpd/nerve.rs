//! The nerve chain complex of a finite groupoid and its homology.
//!
//! `G^(n)` is the set of composable n-tuples, enumerated lexicographically in
//! element ids so boundary matrices are reproducible. The face maps drop the
//! outer entries or compose adjacent ones:
//!
//! ```text
//! face_0(g1,...,gn) = (g2,...,gn)
//! face_i(g1,...,gn) = (g1,...,g_i g_{i+1},...,gn)   1 <= i <= n-1
//! face_n(g1,...,gn) = (g1,...,g_{n-1})
//! ```
//!
//! and the boundaries are `delta_1 = d_* - t_*` and
//! `delta_n = sum_i (-1)^i face_i_*`. Homology is `ker delta_n / im
//! delta_{n+1}`, computed through Smith normal form.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ElemId, FgError, FiniteGroupoid};
use crate::zlin::{self, AbGroup, IntMatrix};

/// Guard on the number of composable tuples materialized per level.
pub const TUPLE_GUARD: usize = 1_000_000;

/// All composable `n`-tuples in lexicographic order (`n >= 1`).
pub fn composable_tuples(g: &FiniteGroupoid, n: usize) -> Result<Vec<Vec<ElemId>>, FgError> {
    assert!(n >= 1);
    let mut level: Vec<Vec<ElemId>> = g.elements().map(|x| vec![x]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for tuple in &level {
            let last = *tuple.last().unwrap();
            for y in g.elements() {
                if g.dom(last) == g.tgt(y) {
                    let mut extended = tuple.clone();
                    extended.push(y);
                    next.push(extended);
                }
            }
            if next.len() > TUPLE_GUARD {
                return Err(FgError::NerveTooLarge(next.len()));
            }
        }
        level = next;
    }
    Ok(level)
}

fn face(g: &FiniteGroupoid, tuple: &[ElemId], i: usize) -> Vec<ElemId> {
    let n = tuple.len();
    if i == 0 {
        tuple[1..].to_vec()
    } else if i == n {
        tuple[..n - 1].to_vec()
    } else {
        let mut out = Vec::with_capacity(n - 1);
        out.extend_from_slice(&tuple[..i - 1]);
        out.push(
            g.product(tuple[i - 1], tuple[i])
                .expect("composable tuples have composable neighbors"),
        );
        out.extend_from_slice(&tuple[i + 1..]);
        out
    }
}

/// Sparse boundary data: `(rows, cols, entries)`.
type SparseBoundary = (usize, usize, Vec<(usize, usize, BigInt)>);

/// Sparse column entries of `delta_n`; shared by the dense and fast paths.
fn boundary_entries(g: &FiniteGroupoid, n: usize) -> Result<SparseBoundary, FgError> {
    assert!(n >= 1);
    if n == 1 {
        // rows indexed by units, delta_1 = d_* - t_*
        let unit_row: HashMap<ElemId, usize> = g
            .units()
            .iter()
            .enumerate()
            .map(|(i, &u)| (u, i))
            .collect();
        let mut entries = Vec::new();
        for (col, x) in g.elements().enumerate() {
            let mut acc: HashMap<usize, BigInt> = HashMap::new();
            *acc.entry(unit_row[&g.dom(x)]).or_insert_with(BigInt::zero) += 1;
            *acc.entry(unit_row[&g.tgt(x)]).or_insert_with(BigInt::zero) -= 1;
            for (row, v) in acc {
                if !v.is_zero() {
                    entries.push((row, col, v));
                }
            }
        }
        return Ok((g.units().len(), g.size(), entries));
    }
    let rows_tuples = composable_tuples(g, n - 1)?;
    let cols_tuples = composable_tuples(g, n)?;
    let row_index: HashMap<Vec<ElemId>, usize> = rows_tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let mut entries = Vec::new();
    for (col, tuple) in cols_tuples.iter().enumerate() {
        let mut acc: HashMap<usize, BigInt> = HashMap::new();
        for i in 0..=n {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let row = row_index[&face(g, tuple, i)];
            *acc.entry(row).or_insert_with(BigInt::zero) += sign;
        }
        for (row, v) in acc {
            if !v.is_zero() {
                entries.push((row, col, v));
            }
        }
    }
    Ok((rows_tuples.len(), cols_tuples.len(), entries))
}

/// `delta_n` as a dense integer matrix (`n >= 1`); `delta_1` maps
/// `C(G^(1))` to `C(G^(0))` indexed by the unit list.
pub fn boundary_matrix(g: &FiniteGroupoid, n: usize) -> Result<IntMatrix, FgError> {
    let (rows, cols, entries) = boundary_entries(g, n)?;
    let mut m = IntMatrix::zero(rows, cols);
    for (i, j, v) in entries {
        m[(i, j)] = v;
    }
    Ok(m)
}

/// Checks `delta_n . delta_{n+1} = 0` without materializing the product:
/// pushes each (n+1)-column through both boundaries.
pub fn boundaries_compose_to_zero(g: &FiniteGroupoid, n: usize) -> Result<bool, FgError> {
    let cols_tuples = composable_tuples(g, n + 1)?;
    for tuple in &cols_tuples {
        // image under delta_{n+1} as a sparse chain over n-tuples
        let mut chain: HashMap<Vec<ElemId>, i64> = HashMap::new();
        for i in 0..=(n + 1) {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            *chain.entry(face(g, tuple, i)).or_insert(0) += sign;
        }
        // then through delta_n
        let mut image: HashMap<Vec<ElemId>, i64> = HashMap::new();
        for (t, coeff) in chain {
            if coeff == 0 {
                continue;
            }
            if n == 1 {
                let x = t[0];
                *image.entry(vec![g.dom(x)]).or_insert(0) += coeff;
                *image.entry(vec![g.tgt(x)]).or_insert(0) -= coeff;
            } else {
                for i in 0..=n {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    *image.entry(face(g, &t, i)).or_insert(0) += sign * coeff;
                }
            }
        }
        if image.values().any(|&v| v != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `H_0 .. H_nmax` with integer coefficients.
///
/// Uses the rank/torsion identity `H_n = Z^(N - r_n - r_{n+1}) + torsion of
/// delta_{n+1}` where `N = |G^(n)|`, which avoids transform matrices; the
/// invariant factors of each boundary are computed through the sparse
/// fast path.
pub fn homology(g: &FiniteGroupoid, n_max: usize) -> Result<Vec<AbGroup>, FgError> {
    let mut out = Vec::with_capacity(n_max + 1);
    // boundary data for delta_1 .. delta_{n_max+1}
    let mut dims = vec![g.units().len()];
    let mut factor_counts = Vec::new();
    let mut torsions: Vec<Vec<BigInt>> = Vec::new();
    for n in 1..=(n_max + 1) {
        let (rows, cols, entries) = boundary_entries(g, n)?;
        debug_assert_eq!(rows, dims[n - 1]);
        dims.push(cols);
        let factors = zlin::invariant_factors_sparse(rows, cols, entries);
        factor_counts.push(factors.len());
        torsions.push(factors.into_iter().filter(|d| *d > BigInt::from(1)).collect());
    }
    for n in 0..=n_max {
        let rank_dn = if n == 0 { 0 } else { factor_counts[n - 1] };
        let rank_dn1 = factor_counts[n];
        let free = dims[n] - rank_dn - rank_dn1;
        out.push(AbGroup::from_parts(free, torsions[n].clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitegpd::build;

    #[test]
    fn pair_groupoid_tuple_counts_and_rank() {
        let p2 = build::pair_groupoid(2);
        assert_eq!(composable_tuples(&p2, 1).unwrap().len(), 4);
        let d1 = boundary_matrix(&p2, 1).unwrap();
        assert_eq!((d1.nrows(), d1.ncols()), (2, 4));
        assert_eq!(zlin::rank(&d1), 1);
    }

    #[test]
    fn boundaries_square_to_zero() {
        for g in [
            build::pair_groupoid(2),
            build::pair_groupoid(3),
            build::cyclic_group(2),
            build::cyclic_group(3),
            build::disjoint_units(2),
            build::transitive_with_cyclic_isotropy(2, 2),
        ] {
            for n in 1..=3 {
                assert!(boundaries_compose_to_zero(&g, n).unwrap());
                let dn = boundary_matrix(&g, n).unwrap();
                let dn1 = boundary_matrix(&g, n + 1).unwrap();
                assert!(dn.mul(&dn1).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn homology_of_pair_groupoids_is_a_point() {
        for k in 2..=4 {
            let h = homology(&build::pair_groupoid(k), 3).unwrap();
            assert_eq!(h[0], AbGroup::free(1), "H0 of pair({k})");
            for (n, group) in h.iter().enumerate().skip(1) {
                assert!(group.is_zero(), "H{n} of pair({k}) = {group}");
            }
        }
    }

    #[test]
    fn homology_of_order_two_group() {
        let h = homology(&build::cyclic_group(2), 3).unwrap();
        assert_eq!(h[0], AbGroup::free(1));
        assert_eq!(h[1].to_string(), "Z/2");
        assert!(h[2].is_zero());
        assert_eq!(h[3].to_string(), "Z/2");
    }

    #[test]
    fn homology_of_disjoint_units() {
        let h = homology(&build::disjoint_units(2), 2).unwrap();
        assert_eq!(h[0], AbGroup::free(2));
        assert!(h[1].is_zero());
        assert!(h[2].is_zero());
    }

    #[test]
    fn homology_ignores_relabeling() {
        // permute element order of Z/3 by renaming and rebuilding
        let n = 3usize;
        let perm = [2usize, 0, 1];
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let unit = ElemId(perm[0] as u32);
        let to = |i: usize| ElemId(perm[i] as u32);
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                products.push((to(i), to(j), to((i + j) % n)));
            }
        }
        let relabeled = FiniteGroupoid::new(
            names,
            vec![unit],
            vec![unit; n],
            vec![unit; n],
            products,
        )
        .unwrap();
        let h1 = homology(&relabeled, 3).unwrap();
        let h2 = homology(&build::cyclic_group(3), 3).unwrap();
        assert_eq!(h1, h2);
    }
}
