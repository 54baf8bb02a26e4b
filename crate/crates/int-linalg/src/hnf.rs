//! Column-style Hermite normal form and the lattice queries built on it.
//!
//! The form produced here is lower triangular: `H = A * U` with `U`
//! unimodular, each non-zero column has a positive pivot strictly below the
//! pivot of the column before it, entries to the left of a pivot lie in
//! `[0, pivot)`, and zero columns are collected on the right.

use crate::matrix::IntMatrix;
use crate::scalar::IntScalar;

/// The Hermite form `h` together with the unimodular transform `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult<T: IntScalar> {
    pub h: IntMatrix<T>,
    pub u: IntMatrix<T>,
}

impl<T: IntScalar> HnfResult<T> {
    /// Number of non-zero columns of `h`.
    pub fn rank(&self) -> usize {
        (0..self.h.cols()).take_while(|&j| !self.h.is_zero_column(j)).count()
    }

    /// Row index of the pivot of each non-zero column.
    pub fn pivot_rows(&self) -> Vec<usize> {
        (0..self.rank())
            .map(|j| (0..self.h.rows()).find(|&i| !self.h[(i, j)].is_zero()).expect("non-zero column"))
            .collect()
    }
}

/// Computes the column-style Hermite normal form of `a`.
pub fn hnf<T: IntScalar>(a: &IntMatrix<T>) -> HnfResult<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(n);
    let mut k = 0;
    for i in 0..m {
        if k == n {
            break;
        }
        loop {
            let pivot = (k..n).filter(|&j| !h[(i, j)].is_zero()).min_by(|&x, &y| h[(i, x)].abs().cmp(&h[(i, y)].abs()));
            let Some(j0) = pivot else { break };
            h.swap_columns(k, j0);
            u.swap_columns(k, j0);
            let mut clean = true;
            for j in k + 1..n {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = h[(i, j)].div_floor(&h[(i, k)]);
                h.sub_column_multiple(j, k, &q);
                u.sub_column_multiple(j, k, &q);
                if !h[(i, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(i, k)].is_zero() {
            continue;
        }
        if h[(i, k)].is_negative() {
            h.negate_column(k);
            u.negate_column(k);
        }
        for j in 0..k {
            let q = h[(i, j)].div_floor(&h[(i, k)]);
            h.sub_column_multiple(j, k, &q);
            u.sub_column_multiple(j, k, &q);
        }
        k += 1;
    }
    HnfResult { h, u }
}

/// A basis (as columns) of the integer kernel `{v : a v = 0}`.
///
/// The kernel of a zero matrix is the identity; a matrix of full column rank
/// has a kernel with zero columns.
pub fn integer_kernel<T: IntScalar>(a: &IntMatrix<T>) -> IntMatrix<T> {
    let res = hnf(a);
    let rank = res.rank();
    let keep: Vec<usize> = (rank..a.cols()).collect();
    res.u.select_columns(&keep)
}

/// Whether `v` is an integer combination of the columns of `basis`.
pub fn lattice_member<T: IntScalar>(basis: &IntMatrix<T>, v: &[T]) -> bool {
    assert_eq!(basis.rows(), v.len(), "vector and basis differ in dimension");
    let res = hnf(basis);
    reduce_against_hnf(&res.h, v).is_some()
}

/// Reduces `v` against a matrix already in Hermite form, returning the
/// coefficients when `v` lies in its column lattice.
pub fn reduce_against_hnf<T: IntScalar>(h: &IntMatrix<T>, v: &[T]) -> Option<Vec<T>> {
    let mut v = v.to_vec();
    let mut coords = vec![T::zero(); h.cols()];
    let mut row = 0;
    for j in 0..h.cols() {
        let Some(r) = (row..h.rows()).find(|&r| !h[(r, j)].is_zero()) else { break };
        if v[row..r].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let p = &h[(r, j)];
        if !v[r].is_multiple_of(p) {
            return None;
        }
        let q = v[r].clone() / p.clone();
        for (i, vi) in v.iter_mut().enumerate().skip(r) {
            if !h[(i, j)].is_zero() {
                *vi = vi.clone() - q.clone() * h[(i, j)].clone();
            }
        }
        coords[j] = q;
        row = r + 1;
    }
    if v.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

/// The least `λ > 0` with `λ g` in the lattice spanned by `basis`.
///
/// Computed as the gcd of the `g` row of an integer kernel basis of the
/// matrix `[-g | basis]`. Returns `None` when no positive multiple of `g`
/// lies in the lattice.
pub fn min_positive_multiplier<T: IntScalar>(g: &[T], basis: &[Vec<T>]) -> Option<T> {
    let mut cols = Vec::with_capacity(basis.len() + 1);
    cols.push(g.iter().map(|x| -x.clone()).collect::<Vec<T>>());
    for b in basis {
        assert_eq!(b.len(), g.len(), "vectors differ in dimension");
        cols.push(b.clone());
    }
    let k = integer_kernel(&IntMatrix::from_columns(g.len(), &cols));
    let lambda = (0..k.cols()).fold(T::zero(), |acc, j| acc.gcd(&k[(0, j)]));
    if lambda.is_zero() {
        None
    } else {
        Some(lambda)
    }
}

/// Checks the structural Hermite-form conditions on `h`.
pub fn is_hermite_form<T: IntScalar>(h: &IntMatrix<T>) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero = false;
    for j in 0..h.cols() {
        let Some(r) = (0..h.rows()).find(|&i| !h[(i, j)].is_zero()) else {
            seen_zero = true;
            continue;
        };
        if seen_zero {
            return false;
        }
        if last_pivot.is_some_and(|p| r <= p) {
            return false;
        }
        let p = &h[(r, j)];
        if !p.is_positive() {
            return false;
        }
        if (0..j).any(|jj| h[(r, jj)].is_negative() || &h[(r, jj)] >= p) {
            return false;
        }
        last_pivot = Some(r);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::determinant;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> IntMatrix<i64> {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn identity_is_fixed() {
        let id = IntMatrix::<i64>::identity(2);
        let r = hnf(&id);
        assert_eq!(r.h, id);
        assert_eq!(r.u, id);
    }

    #[test]
    fn single_column_pivot_is_gcd_of_reachable_entries() {
        // A lone column admits only sign changes, so the pivot is its first non-zero entry.
        let r = hnf(&m(&[&[6], &[4]]));
        assert_eq!(r.h, m(&[&[6], &[4]]));
        // Entries 6 and 4 in one row reduce to their gcd.
        let r = hnf(&m(&[&[6, 4]]));
        assert_eq!(r.h, m(&[&[2, 0]]));
        let r = hnf(&m(&[&[6, 4], &[1, 1]]));
        assert_eq!(r.h[(0, 0)], 2);
        assert!(is_hermite_form(&r.h));
    }

    #[test]
    fn transform_is_unimodular_and_exact() {
        let a = m(&[&[2, 4, 6], &[0, 2, 5], &[3, -1, 7]]);
        let r = hnf(&a);
        assert_eq!(a.mul(&r.u), r.h);
        assert_eq!(determinant(&r.u).abs(), 1);
        assert!(is_hermite_form(&r.h));
    }

    #[test]
    fn zero_columns_move_right() {
        let a = m(&[&[0, 1, 2], &[0, 1, 2]]);
        let r = hnf(&a);
        assert_eq!(r.rank(), 1);
        assert!(r.h.is_zero_column(1) && r.h.is_zero_column(2));
    }

    #[test]
    fn kernels() {
        let k = integer_kernel(&m(&[&[1, -1]]));
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0)[0].abs(), 1);
        assert_eq!(k.column(0)[0], k.column(0)[1]);
        assert_eq!(integer_kernel(&IntMatrix::<i64>::identity(3)).cols(), 0);
        assert_eq!(integer_kernel(&IntMatrix::<i64>::zeros(2, 3)), IntMatrix::identity(3));
    }

    #[test]
    fn membership() {
        let b = m(&[&[2, 0], &[0, 3]]);
        assert!(lattice_member(&b, &[4, 3]));
        assert!(!lattice_member(&b, &[1, 0]));
        let single = hnf(&m(&[&[6], &[4]])).h;
        assert!(!lattice_member(&single, &[3, 2]));
        assert!(lattice_member(&single, &[-12, -8]));
    }

    #[test]
    fn minimal_multipliers() {
        assert_eq!(min_positive_multiplier(&[1i64], &[vec![2]]), Some(2));
        assert_eq!(min_positive_multiplier(&[1i64, 0], &[vec![0, 1]]), None);
        assert_eq!(min_positive_multiplier(&[3i64], &[vec![2]]), Some(2));
    }

    #[test]
    fn bigint_entries() {
        let a: IntMatrix<BigInt> = m(&[&[12, 18], &[5, 7]]).map(|x| BigInt::from(*x));
        let r = hnf(&a);
        assert_eq!(a.mul(&r.u), r.h);
        assert_eq!(r.h[(0, 0)], BigInt::from(6));
    }
}
