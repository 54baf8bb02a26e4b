//! Integer points of a polyhedron as a finite union of shifted cones
//! `u + E·λ`, `λ ∈ ℕ^k`.
//!
//! Equalities are eliminated with a Hermite parametrization. In the
//! remaining coordinates the recession cone is made pointed (by an orthant
//! split when needed); its Hilbert basis is found by enumeration below the
//! extreme-ray zonotope bound, and the shifts are the integer points that
//! cannot be moved back along any Hilbert-basis element.

use std::collections::{BTreeSet, HashSet};

use int_linalg::{determinant, hnf, integer_kernel, reduce_against_hnf, Matrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::IpError;

/// The set `{u + e·λ : λ ∈ ℕ^k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftedCone {
    pub u: Vec<BigInt>,
    /// Generators, one per column; `k = gens.len()`.
    pub gens: Vec<Vec<BigInt>>,
}

impl ShiftedCone {
    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// The generator matrix `E` (`dim × k`).
    pub fn e(&self) -> Matrix {
        Matrix::from_columns(self.dim(), &self.gens)
    }

    pub fn point(&self, lambda: &[BigInt]) -> Vec<BigInt> {
        let mut x = self.u.clone();
        for (g, l) in self.gens.iter().zip(lambda) {
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += gi * l;
            }
        }
        x
    }

    /// Largest absolute entry of `u` and of the generators.
    pub fn norms(&self) -> (BigInt, BigInt) {
        let nu = self.u.iter().map(|x| x.abs()).max().unwrap_or_default();
        let ne = self.gens.iter().flatten().map(|x| x.abs()).max().unwrap_or_default();
        (nu, ne)
    }
}

/// Limits on the enumerations performed by [`vzgs_decompose`].
#[derive(Clone, Copy, Debug)]
pub struct DecomposeConfig {
    /// Largest box (number of integer points) scanned at once.
    pub box_cap: u64,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig { box_cap: 4_000_000 }
    }
}

/// A system `a x <= b` as rows.
pub type Rows = [(Vec<BigInt>, BigInt)];

/// Bound `(d+1)(s·max(2, |A|, |b|))^s` on shifts and generators, with `s`
/// the rank of the row matrix.
pub fn cone_norm_bound(rows: &Rows, d: usize) -> BigInt {
    let mut m = BigInt::from(2);
    for (a, b) in rows {
        m = a.iter().map(|x| x.abs()).chain(std::iter::once(b.abs())).fold(m, |acc, x| acc.max(x));
    }
    let s = if rows.is_empty() {
        0
    } else {
        let a = Matrix::from_rows(&rows.iter().map(|(a, _)| a.clone()).collect::<Vec<_>>());
        hnf(&a).rank()
    };
    BigInt::from(d + 1) * num_traits::pow(BigInt::from(s) * m, s)
}

/// Decomposes `{x ∈ ℤ^d : a x <= b for every row}`.
///
/// # Errors
/// `SearchBudgetExceeded` when an enumeration box exceeds `cfg.box_cap`.
pub fn vzgs_decompose(rows: &Rows, d: usize, cfg: DecomposeConfig) -> Result<Vec<ShiftedCone>, IpError> {
    let mut ineq: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
    let mut eq: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
    for (a, b) in rows {
        assert_eq!(a.len(), d, "row of wrong width");
        if a.iter().all(|x| x.is_zero()) {
            if b.is_negative() {
                return Ok(vec![]);
            }
            continue;
        }
        let neg: Vec<BigInt> = a.iter().map(|x| -x).collect();
        if rows.iter().any(|(a2, b2)| a2 == &neg && *b2 == -b) {
            if !eq.iter().any(|(ea, eb)| (ea == a && eb == b) || (ea == &neg && *eb == -b)) {
                eq.push((a.clone(), b.clone()));
            }
        } else {
            ineq.push((a.clone(), b.clone()));
        }
    }

    // x = x0 + K t
    let (x0, k) = if eq.is_empty() {
        (vec![BigInt::zero(); d], Matrix::identity(d))
    } else {
        let a = Matrix::from_rows(&eq.iter().map(|(a, _)| a.clone()).collect::<Vec<_>>());
        let b: Vec<BigInt> = eq.iter().map(|(_, b)| b.clone()).collect();
        let res = hnf(&a);
        let Some(y) = reduce_against_hnf(&res.h, &b) else {
            return Ok(vec![]);
        };
        let rank = res.rank();
        let x0 = res.u.mul_vec(&y);
        let keep: Vec<usize> = (rank..d).collect();
        (x0, res.u.select_columns(&keep))
    };
    let n = k.cols();
    let sub: Vec<(Vec<BigInt>, BigInt)> = ineq
        .iter()
        .map(|(a, b)| {
            let ak: Vec<BigInt> = (0..n).map(|j| (0..d).map(|i| &a[i] * &k[(i, j)]).sum()).collect();
            let ax0: BigInt = a.iter().zip(&x0).map(|(x, y)| x * y).sum();
            (ak, b - ax0)
        })
        .collect();

    let local = decompose_full_dim(&sub, n, cfg)?;
    let mut out: BTreeSet<ShiftedCone> = BTreeSet::new();
    for c in local {
        let u: Vec<BigInt> = k.mul_vec(&c.u).into_iter().zip(&x0).map(|(a, b)| a + b).collect();
        let gens = c.gens.iter().map(|g| k.mul_vec(g)).collect();
        out.insert(ShiftedCone { u, gens });
    }
    Ok(out.into_iter().collect())
}

fn satisfies(rows: &Rows, t: &[BigInt]) -> bool {
    rows.iter().all(|(a, b)| a.iter().zip(t).map(|(x, y)| x * y).sum::<BigInt>() <= *b)
}

fn in_cone(rows: &Rows, r: &[BigInt]) -> bool {
    rows.iter().all(|(a, _)| !a.iter().zip(r).map(|(x, y)| x * y).sum::<BigInt>().is_positive())
}

fn decompose_full_dim(rows: &Rows, n: usize, cfg: DecomposeConfig) -> Result<Vec<ShiftedCone>, IpError> {
    if n == 0 {
        return Ok(if satisfies(rows, &[]) { vec![ShiftedCone { u: vec![], gens: vec![] }] } else { vec![] });
    }
    let pointed = !rows.is_empty() && {
        let a = Matrix::from_rows(&rows.iter().map(|(a, _)| a.clone()).collect::<Vec<_>>());
        hnf(&a).rank() == n
    };
    let mut pieces: Vec<Vec<(Vec<BigInt>, BigInt)>> = Vec::new();
    if pointed {
        pieces.push(rows.to_vec());
    } else {
        for mask in 0..(1u32 << n) {
            let mut piece = rows.to_vec();
            for i in 0..n {
                let mut a = vec![BigInt::zero(); n];
                a[i] = if mask >> i & 1 == 1 { BigInt::one() } else { -BigInt::one() };
                piece.push((a, BigInt::zero()));
            }
            pieces.push(piece);
        }
    }
    let mut out = Vec::new();
    for piece in pieces {
        out.extend(decompose_pointed(&piece, n, cfg)?);
    }
    Ok(out)
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// Solves the square system `a v = b` over the rationals (Cramer's rule).
fn solve_square(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let m = Matrix::from_rows(a);
    let det = determinant(&m);
    if det.is_zero() {
        return None;
    }
    Some(
        (0..n)
            .map(|j| {
                let mut mj = m.clone();
                for (i, bi) in b.iter().enumerate() {
                    mj[(i, j)] = bi.clone();
                }
                BigRational::new(determinant(&mj), det.clone())
            })
            .collect(),
    )
}

fn vertices(rows: &Rows, n: usize) -> Vec<Vec<BigRational>> {
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for s in combinations(rows.len(), n) {
        let a: Vec<Vec<BigInt>> = s.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<BigInt> = s.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(v) = solve_square(&a, &b) else { continue };
        let feasible = rows.iter().all(|(a, b)| {
            a.iter().zip(&v).map(|(x, y)| BigRational::from_integer(x.clone()) * y).sum::<BigRational>()
                <= BigRational::from_integer(b.clone())
        });
        if feasible && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

fn extreme_rays(rows: &Rows, n: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let consider = |r: Vec<BigInt>, out: &mut Vec<Vec<BigInt>>| {
        if r.iter().any(|x| !x.is_zero()) && in_cone(rows, &r) {
            let r = primitive(r);
            if !out.contains(&r) {
                out.push(r);
            }
        }
    };
    if n == 1 {
        consider(vec![BigInt::one()], &mut out);
        consider(vec![-BigInt::one()], &mut out);
        return out;
    }
    for s in combinations(rows.len(), n - 1) {
        let a = Matrix::from_rows(&s.iter().map(|&i| rows[i].0.clone()).collect::<Vec<_>>());
        let ker = integer_kernel(&a);
        if ker.cols() != 1 {
            continue;
        }
        let r = ker.column(0);
        consider(r.iter().map(|x| -x).collect(), &mut out);
        consider(r, &mut out);
    }
    out
}

/// Integer points of the box `[lo, hi]` satisfying `rows`, lexicographic.
fn box_points(rows: &Rows, lo: &[BigInt], hi: &[BigInt], cap: u64, stage: &'static str) -> Result<Vec<Vec<BigInt>>, IpError> {
    let n = lo.len();
    let volume = lo.iter().zip(hi).fold(BigInt::one(), |acc, (l, h)| acc * (h - l + 1u32).max(BigInt::zero()));
    if volume > BigInt::from(cap) {
        return Err(IpError::SearchBudgetExceeded { stage, size: volume });
    }
    // a row is checked once its last non-zero coordinate is assigned
    let last: Vec<Option<usize>> = rows.iter().map(|(a, _)| a.iter().rposition(|x| !x.is_zero())).collect();
    let mut out = Vec::new();
    let mut cur: Vec<BigInt> = lo.to_vec();
    fn rec(
        i: usize,
        n: usize,
        rows: &Rows,
        last: &[Option<usize>],
        lo: &[BigInt],
        hi: &[BigInt],
        cur: &mut Vec<BigInt>,
        out: &mut Vec<Vec<BigInt>>,
    ) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        let mut v = lo[i].clone();
        while v <= hi[i] {
            cur[i] = v.clone();
            let ok = rows.iter().zip(last).filter(|(_, l)| **l == Some(i)).all(|((a, b), _)| {
                a[..=i].iter().zip(cur.iter()).map(|(x, y)| x * y).sum::<BigInt>() <= *b
            });
            if ok {
                rec(i + 1, n, rows, last, lo, hi, cur, out);
            }
            v += 1;
        }
    }
    if rows.iter().zip(&last).any(|((_, b), l)| l.is_none() && b.is_negative()) {
        return Ok(out);
    }
    rec(0, n, rows, &last, lo, hi, &mut cur, &mut out);
    Ok(out)
}

fn hilbert_basis(rows: &Rows, rays: &[Vec<BigInt>], n: usize, cap: u64) -> Result<Vec<Vec<BigInt>>, IpError> {
    if rays.is_empty() {
        return Ok(vec![]);
    }
    let reach: Vec<BigInt> =
        (0..n).map(|i| rays.iter().map(|r| r[i].abs()).max().unwrap_or_default() * BigInt::from(n)).collect();
    let lo: Vec<BigInt> = reach.iter().map(|r| -r).collect();
    let homogeneous: Vec<(Vec<BigInt>, BigInt)> = rows.iter().map(|(a, _)| (a.clone(), BigInt::zero())).collect();
    let cands: Vec<Vec<BigInt>> = box_points(&homogeneous, &lo, &reach, cap, "hilbert basis")?
        .into_iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    Ok(cands
        .iter()
        .filter(|h| {
            !cands.iter().any(|g| {
                g != *h && {
                    let diff: Vec<BigInt> = h.iter().zip(g).map(|(a, b)| a - b).collect();
                    diff.iter().any(|x| !x.is_zero()) && in_cone(&homogeneous, &diff)
                }
            })
        })
        .cloned()
        .collect())
}

fn floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

fn ceil(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

fn decompose_pointed(rows: &Rows, n: usize, cfg: DecomposeConfig) -> Result<Vec<ShiftedCone>, IpError> {
    let verts = vertices(rows, n);
    if verts.is_empty() {
        return Ok(vec![]);
    }
    let rays = extreme_rays(rows, n);
    let basis = hilbert_basis(rows, &rays, n, cfg.box_cap)?;
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let spread = basis.iter().map(|h| h[i].abs()).max().unwrap_or_default() * BigInt::from(n);
        lo.push(verts.iter().map(|v| floor(&v[i])).min().expect("non-empty") - &spread);
        hi.push(verts.iter().map(|v| ceil(&v[i])).max().expect("non-empty") + &spread);
    }
    let points = box_points(rows, &lo, &hi, cfg.box_cap, "shift enumeration")?;
    Ok(points
        .into_iter()
        .filter(|b| {
            basis.iter().all(|h| {
                let prev: Vec<BigInt> = b.iter().zip(h).map(|(x, y)| x - y).collect();
                !satisfies(rows, &prev)
            })
        })
        .map(|u| ShiftedCone { u, gens: basis.clone() })
        .collect())
}

/// Rows `a x <= b` read off a list of inequalities over `d` variables.
pub fn rows_of(ineqs: &[crate::instance::Inequality], d: usize) -> Vec<(Vec<BigInt>, BigInt)> {
    ineqs.iter().map(|r| r.row(d)).collect()
}

/// A small integer functional positive on every generator, if one exists
/// with entries in `[-5, 5]`.
pub fn positive_functional(gens: &[Vec<BigInt>], d: usize) -> Option<Vec<i64>> {
    for r in 1..=5i64 {
        let width = (2 * r + 1) as usize;
        let total = width.pow(d as u32);
        for idx in 0..total {
            let mut rest = idx;
            let phi: Vec<i64> = (0..d)
                .map(|_| {
                    let c = (rest % width) as i64 - r;
                    rest /= width;
                    c
                })
                .collect();
            if gens.iter().all(|g| g.iter().zip(&phi).map(|(a, b)| a * b).sum::<BigInt>().is_positive()) {
                return Some(phi);
            }
        }
    }
    None
}

/// Integer points of a cone union inside the box `[lo, hi]`.
///
/// Walks distinct points reachable by adding generators, pruned by a functional that is positive
/// on every generator; panics if no such functional is found.
pub fn points_in_box(cones: &[ShiftedCone], lo: &[i64], hi: &[i64]) -> BTreeSet<Vec<i64>> {
    let d = lo.len();
    let mut out = BTreeSet::new();
    for c in cones {
        let phi = positive_functional(&c.gens, d).expect("cone generators admit a positive functional");
        let value = |x: &[BigInt]| -> BigInt { x.iter().zip(&phi).map(|(a, b)| a * b).sum() };
        let ceiling: BigInt = phi.iter().zip(lo.iter().zip(hi)).map(|(p, (l, h))| BigInt::from((p * l).max(p * h))).sum();
        let mut seen: HashSet<Vec<BigInt>> = HashSet::from([c.u.clone()]);
        let mut stack = vec![c.u.clone()];
        while let Some(x) = stack.pop() {
            let small: Option<Vec<i64>> = x.iter().map(|v| v.to_i64()).collect();
            if let Some(s) = small {
                if s.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| l <= v && v <= h) {
                    out.insert(s);
                }
            }
            for g in &c.gens {
                let next: Vec<BigInt> = x.iter().zip(g).map(|(a, b)| a + b).collect();
                if value(&next) <= ceiling && seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[(&[i64], i64)]) -> Vec<(Vec<BigInt>, BigInt)> {
        r.iter().map(|(a, b)| (a.iter().map(|x| BigInt::from(*x)).collect(), BigInt::from(*b))).collect()
    }

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    #[test]
    fn half_line() {
        let cones = vzgs_decompose(&rows(&[(&[-1], -1)]), 1, DecomposeConfig::default()).unwrap();
        assert_eq!(cones, vec![ShiftedCone { u: b(&[1]), gens: vec![b(&[1])] }]);
    }

    #[test]
    fn bounded_interval() {
        let cones = vzgs_decompose(&rows(&[(&[-1], -2), (&[1], 4)]), 1, DecomposeConfig::default()).unwrap();
        let us: Vec<Vec<BigInt>> = cones.iter().map(|c| c.u.clone()).collect();
        assert_eq!(us, vec![b(&[2]), b(&[3]), b(&[4])]);
        assert!(cones.iter().all(|c| c.gens.is_empty()));
    }

    #[test]
    fn free_line_is_split() {
        let cones = vzgs_decompose(&[], 1, DecomposeConfig::default()).unwrap();
        let pts = points_in_box(&cones, &[-5], &[5]);
        assert_eq!(pts.len(), 11);
    }

    #[test]
    fn equality_parametrized() {
        // x + y = 3, 0 <= x <= 3
        let r = rows(&[(&[1, 1], 3), (&[-1, -1], -3), (&[-1, 0], 0), (&[1, 0], 3)]);
        let cones = vzgs_decompose(&r, 2, DecomposeConfig::default()).unwrap();
        let pts = points_in_box(&cones, &[-10, -10], &[10, 10]);
        let expected: BTreeSet<Vec<i64>> = (0..=3).map(|x| vec![x, 3 - x]).collect();
        assert_eq!(pts, expected);
    }

    #[test]
    fn infeasible_equalities() {
        let r = rows(&[(&[2], 1), (&[-2], -1)]);
        assert!(vzgs_decompose(&r, 1, DecomposeConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn combination_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
