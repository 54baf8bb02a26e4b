//! Divisibility modules: span fixpoint, elimination closure and the
//! increasing-form test.

use std::collections::BTreeSet;

use int_linalg::{hnf, min_positive_multiplier, Matrix};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::poly::{LinearPoly, Var};
use crate::system::{DivConstraint, DivSystem, VarOrder, VarPartition};

/// Generators `{pivot} ∪ {c_i g_i}` of the divisibility module of `pivot`,
/// where `g_i` is the right-hand side of the i-th constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpan {
    pub pivot: LinearPoly,
    pub scalars: Vec<BigInt>,
}

impl ModuleSpan {
    /// Non-zero generators of the module.
    pub fn generators(&self, phi: &DivSystem) -> Vec<LinearPoly> {
        let mut out = vec![self.pivot.clone()];
        for (c, con) in self.scalars.iter().zip(phi.constraints()) {
            if !c.is_zero() && !con.rhs.is_zero() {
                out.push(con.rhs.scale(c));
            }
        }
        out
    }
}

fn layout(phi: &DivSystem, extra: &LinearPoly) -> Vec<Var> {
    let mut vars: BTreeSet<Var> = phi.vars().iter().copied().collect();
    vars.extend(extra.vars());
    vars.into_iter().collect()
}

/// Computes the module span of `f` by iterating to a fixpoint from zero scalars.
pub fn module_span(phi: &DivSystem, f: &LinearPoly) -> ModuleSpan {
    module_span_from(phi, f, vec![BigInt::zero(); phi.len()])
}

/// The same fixpoint, started from given scalars.
pub fn module_span_from(phi: &DivSystem, f: &LinearPoly, start: Vec<BigInt>) -> ModuleSpan {
    assert_eq!(start.len(), phi.len(), "one scalar per constraint");
    let rows = layout(phi, f);
    let fcol = f.to_column(&rows);
    let mut current = start;
    loop {
        let mut basis = vec![fcol.clone()];
        for (c, con) in current.iter().zip(phi.constraints()) {
            if !c.is_zero() {
                basis.push(con.rhs.scale(c).to_column(&rows));
            }
        }
        let next: Vec<BigInt> = phi
            .constraints()
            .iter()
            .map(|con| min_positive_multiplier(&con.lhs.to_column(&rows), &basis).unwrap_or_default())
            .collect();
        if next == current {
            return ModuleSpan { pivot: f.clone(), scalars: current };
        }
        current = next;
    }
}

/// Hermite basis of the module of `f`, as polynomials with decreasing
/// leading variables under `order`.
pub fn module_basis(phi: &DivSystem, f: &LinearPoly, order: &VarOrder) -> Vec<LinearPoly> {
    let rows = order.rows();
    let gens = module_span(phi, f).generators(phi);
    hermite_polys(&gens, &rows)
}

fn hermite_polys(gens: &[LinearPoly], rows: &[Var]) -> Vec<LinearPoly> {
    let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.to_column(rows)).collect();
    let res = hnf(&Matrix::from_columns(rows.len() + 1, &cols));
    (0..res.rank()).map(|j| LinearPoly::from_column(rows, &res.h.column(j))).collect()
}

/// Rewrites `phi` so that, for every left-hand primitive part `f`, the
/// right-hand sides paired with `f` are a Hermite basis of its module.
/// Constraints with a non-primitive left-hand side are kept as they are.
pub fn close_elimination(phi: &DivSystem, order: &VarOrder) -> DivSystem {
    assert!(order.covers(phi), "order must cover the system");
    let rows = order.rows();
    let mut out: Vec<DivConstraint> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |c: DivConstraint, out: &mut Vec<DivConstraint>| {
        if seen.insert(c.clone()) {
            out.push(c);
        }
    };
    for c in phi.constraints() {
        if !c.lhs.is_primitive() {
            push(c.clone(), &mut out);
        }
    }
    for f in phi.lhs_primitive_parts() {
        let gens = module_span(phi, &f).generators(phi);
        for h in hermite_polys(&gens, &rows) {
            push(DivConstraint::new(f.clone(), h), &mut out);
        }
    }
    DivSystem::new(phi.vars().to_vec(), out).expect("closure keeps the universe")
}

/// Whether `phi` is in increasing form for every order refining the
/// partition: for each non-constant left-hand primitive part `f`, the
/// module of `f` restricted to the blocks up to `f`'s last block is `Zf`.
pub fn is_increasing(phi: &DivSystem, partition: &VarPartition) -> bool {
    let order = partition.order();
    if !order.covers(phi) {
        return false;
    }
    let rows = order.rows();
    phi.lhs_primitive_parts().iter().filter(|f| !f.is_constant()).all(|f| {
        let last_block = f.vars().filter_map(|v| partition.block_of(v)).max().expect("covered");
        let later_rows = rows.iter().take_while(|v| partition.block_of(**v).is_some_and(|b| b > last_block)).count();
        let gens = module_span(phi, f).generators(phi);
        let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.to_column(&rows)).collect();
        let res = hnf(&Matrix::from_columns(rows.len() + 1, &cols));
        res.pivot_rows().iter().filter(|&&r| r >= later_rows).count() == 1
    })
}

/// Upper bound `((m+3)(|phi|+2))^((m+3)^3)` on the span scalars.
pub fn span_scalar_bound(phi: &DivSystem) -> BigInt {
    let m = phi.len() as u64 + 3;
    let base = BigInt::from(m) * (phi.norm() + 2u32);
    num_traits::pow(base, (m * m * m) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use int_linalg::lattice_member;

    fn p(t: &[(Var, i64)], c: i64) -> LinearPoly {
        LinearPoly::from_i64(t, c)
    }

    fn d(l: LinearPoly, r: LinearPoly) -> DivConstraint {
        DivConstraint::new(l, r)
    }

    fn in_span(phi: &DivSystem, f: &LinearPoly, g: &LinearPoly) -> bool {
        let rows = layout(phi, g);
        let gens = module_span(phi, f).generators(phi);
        let cols: Vec<Vec<BigInt>> = gens.iter().map(|h| h.to_column(&rows)).collect();
        lattice_member(&Matrix::from_columns(rows.len() + 1, &cols), &g.to_column(&rows))
    }

    #[test]
    fn chain_reaches_every_rhs() {
        // v=0, x=1, y=2
        let phi = DivSystem::from_constraints(vec![d(p(&[(0, 1)], 0), p(&[(1, 1)], 0)), d(p(&[(1, 1)], 0), p(&[(2, 1)], 0))]).unwrap();
        let s = module_span(&phi, &p(&[(0, 1)], 0));
        assert_eq!(s.scalars, vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn unrelated_pivot_spans_only_itself() {
        let phi = DivSystem::new(vec![0, 1], vec![d(p(&[], 3), p(&[(0, 1)], 0))]).unwrap();
        let s = module_span(&phi, &p(&[(1, 1)], 1));
        assert!(s.scalars.iter().all(Zero::is_zero));
    }

    #[test]
    fn difference_of_rhs_appears_as_constant() {
        let phi = DivSystem::from_constraints(vec![d(p(&[(0, 1)], 0), p(&[(1, 1)], 0)), d(p(&[(0, 1)], 0), p(&[(1, 1)], 2))]).unwrap();
        let order = VarOrder::new(vec![0, 1]).unwrap();
        let psi = close_elimination(&phi, &order);
        assert!(psi.constraints().contains(&d(p(&[(0, 1)], 0), p(&[], 2))));
    }

    #[test]
    fn non_primitive_lhs_is_kept() {
        let phi = DivSystem::from_constraints(vec![d(p(&[], 2), p(&[(0, 1)], 0))]).unwrap();
        let psi = close_elimination(&phi, &VarOrder::new(vec![0]).unwrap());
        assert!(psi.constraints().contains(&phi.constraints()[0]));
    }

    #[test]
    fn increasing_examples() {
        // x=0, y=1
        let phi = DivSystem::from_constraints(vec![d(p(&[(0, 1)], 1), p(&[(1, 1)], -2))]).unwrap();
        assert!(is_increasing(&phi, &VarPartition::new(vec![vec![0], vec![1]]).unwrap()));
        let phi2 = DivSystem::from_constraints(vec![
            d(p(&[(0, 1)], 1), p(&[(1, 1)], -2)),
            d(p(&[(0, 1)], 1), p(&[(0, 1), (1, 1)], 0)),
        ])
        .unwrap();
        for blocks in [vec![vec![0], vec![1]], vec![vec![1], vec![0]], vec![vec![0, 1]]] {
            assert!(!is_increasing(&phi2, &VarPartition::new(blocks).unwrap()));
        }
        let phi3 = DivSystem::from_constraints(vec![d(p(&[], 5), p(&[(0, 1)], 0))]).unwrap();
        assert!(is_increasing(&phi3, &VarPartition::single(vec![0])));
    }

    #[test]
    fn running_example_module_contains_u_plus_y() {
        // u=0, v=1, x=2, y=3, z=4
        let phi = DivSystem::from_constraints(vec![
            d(p(&[(1, 1)], 0), p(&[(0, 1), (2, 1), (3, 1)], 0)),
            d(p(&[(1, 1)], 0), p(&[(2, 1)], 0)),
            d(p(&[(3, 1)], 2), p(&[(4, 1)], 1)),
            d(p(&[(1, 1)], 0), p(&[(4, 1)], 0)),
        ])
        .unwrap();
        assert!(in_span(&phi, &p(&[(1, 1)], 0), &p(&[(0, 1), (3, 1)], 0)));
        assert!(!in_span(&phi, &p(&[(1, 1)], 0), &p(&[], 1)));
    }
}
