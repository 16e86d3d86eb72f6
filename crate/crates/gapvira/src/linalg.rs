//! Exact dense linear algebra over the cyclotomic scalar field.
//!
//! Small helpers used by kernel computations: row reduction with exact
//! field inverses, kernel bases, and rank.  Matrices are row-major
//! `Vec<Vec<Cyclo>>`; all rows must share one width.

use crate::scalar::Cyclo;

/// Reduced row echelon form in place; returns the pivot column of each
/// surviving nonzero row, in order.
pub fn rref(p: u32, rows: &mut Vec<Vec<Cyclo>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = rows[rank][col].inv();
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].mul(&inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let delta = factor.mul(&rows[rank][c]);
                    rows[r][c] = rows[r][c].sub(&delta);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    let _ = p;
    pivots
}

/// Rank of the matrix.
pub fn rank(p: u32, rows: &[Vec<Cyclo>]) -> usize {
    let mut work: Vec<Vec<Cyclo>> = rows.to_vec();
    rref(p, &mut work).len()
}

/// Basis of the right kernel {x : A x = 0}; each vector has length `ncols`.
pub fn kernel_basis(p: u32, rows: &[Vec<Cyclo>], ncols: usize) -> Vec<Vec<Cyclo>> {
    debug_assert!(rows.iter().all(|r| r.len() == ncols));
    let mut work: Vec<Vec<Cyclo>> = rows.to_vec();
    let pivots = rref(p, &mut work);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut vec = vec![Cyclo::zero(p); ncols];
        vec[free] = Cyclo::one(p);
        for (row, &pc) in work.iter().zip(pivots.iter()) {
            vec[pc] = row[free].neg();
        }
        basis.push(vec);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: u32, n: i64) -> Cyclo {
        Cyclo::from_int(p, n)
    }

    #[test]
    fn kernel_of_simple_system() {
        // x + y = 0, y + z = 0 -> kernel span (1, -1, 1)
        let rows = vec![
            vec![c(3, 1), c(3, 1), c(3, 0)],
            vec![c(3, 0), c(3, 1), c(3, 1)],
        ];
        let basis = kernel_basis(3, &rows, 3);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        // check A v = 0
        for row in &rows {
            let mut acc = Cyclo::zero(3);
            for (a, x) in row.iter().zip(v.iter()) {
                acc = acc.add(&a.mul(x));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let rows = vec![
            vec![c(2, 2), c(2, 1)],
            vec![c(2, 1), c(2, 1)],
        ];
        assert_eq!(rank(2, &rows), 2);
        assert!(kernel_basis(2, &rows, 2).is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let rows: Vec<Vec<Cyclo>> = vec![vec![c(5, 0); 4]];
        let basis = kernel_basis(5, &rows, 4);
        assert_eq!(basis.len(), 4);
    }

    #[test]
    fn cyclotomic_pivots_invert_exactly() {
        let xi = Cyclo::xi_pow(3, 1);
        let rows = vec![vec![xi.clone(), Cyclo::one(3)]];
        let basis = kernel_basis(3, &rows, 2);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        let acc = xi.mul(&v[0]).add(&v[1]);
        assert!(acc.is_zero());
    }
}
