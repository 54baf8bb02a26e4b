//! Translation of sign-definite members into divisibility systems over
//! natural-number variables, and the substitution loop that makes those
//! systems increasing for the block order `z`, `y`, `w`.

use std::collections::{BTreeMap, BTreeSet};

use divsys::{is_increasing, module_span, Assignment, DivConstraint, DivError, DivSystem, LinearPoly, Var, VarPartition};
use int_linalg::{min_positive_multiplier, Matrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::IpError;
use crate::instance::{IpGcdInstance, Rel};
use crate::vzgs::{rows_of, vzgs_decompose, DecomposeConfig, ShiftedCone};

/// Which family a triple variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// Offset variable of a `>=` block, `z + c | f`.
    Z,
    /// Cone coordinate.
    Y,
    /// Bézout witness of an `=` block, `f | w`, `g | w + c`.
    W,
}

/// A divisibility system `psi` over natural-number variables together with
/// the affine map `x = u + e·λ` back to the instance space.
///
/// Variable `v` of `psi` corresponds to column `v` of `e`; columns of
/// variables no longer present in `psi` are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcdToDivTriple {
    pub psi: DivSystem,
    pub u: Vec<BigInt>,
    pub e: Matrix,
    pub roles: Vec<Role>,
}

impl GcdToDivTriple {
    pub fn vars_with(&self, role: Role) -> Vec<Var> {
        self.psi.vars().iter().copied().filter(|v| self.roles[*v] == role).collect()
    }

    /// Blocks `z`, `y`, `w` (empty ones dropped).
    pub fn partition(&self) -> VarPartition {
        VarPartition::new(vec![self.vars_with(Role::Z), self.vars_with(Role::Y), self.vars_with(Role::W)])
            .expect("roles are disjoint")
    }

    /// `u + e·λ`, with unassigned variables read as zero.
    pub fn point(&self, lambda: &Assignment) -> Vec<BigInt> {
        let mut x = self.u.clone();
        for (v, l) in lambda {
            if *v < self.e.cols() && !l.is_zero() {
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi += &self.e[(i, *v)] * l;
                }
            }
        }
        x
    }

    /// Coefficients of `c·(u + e·λ)` on the variables of `psi`.
    pub fn pushed_objective(&self, c: &[BigInt]) -> BTreeMap<Var, BigInt> {
        self.psi
            .vars()
            .iter()
            .map(|&v| (v, (0..self.u.len()).map(|i| &c[i] * &self.e[(i, v)]).sum()))
            .collect()
    }

    /// Checks the structural properties every triple keeps: constraint
    /// shapes, non-negative coefficients with positive left-hand
    /// constants, single use of `z` and `w` variables, and zero columns for
    /// them.
    pub fn check_invariants(&self) -> Result<(), String> {
        let role = |v: Var| self.roles[v];
        let mut z_uses: BTreeMap<Var, usize> = BTreeMap::new();
        let mut w_shapes: BTreeMap<Var, Vec<BigInt>> = BTreeMap::new();
        for c in self.psi.constraints() {
            for p in [&c.lhs, &c.rhs] {
                if p.coeffs().values().any(|a| a.is_negative()) || p.constant_term().is_negative() {
                    return Err(format!("negative coefficient in {c}"));
                }
            }
            if !c.lhs.constant_term().is_positive() {
                return Err(format!("left-hand constant not positive in {c}"));
            }
            let lz: Vec<Var> = c.lhs.vars().filter(|v| role(*v) == Role::Z).collect();
            let rw: Vec<Var> = c.rhs.vars().filter(|v| role(*v) == Role::W).collect();
            if c.lhs.vars().any(|v| role(v) == Role::W) || c.rhs.vars().any(|v| role(v) == Role::Z) {
                return Err(format!("variable on the wrong side in {c}"));
            }
            match (lz.as_slice(), rw.as_slice()) {
                ([], []) => {
                    if !c.lhs.is_constant() {
                        return Err(format!("unexpected shape {c}"));
                    }
                }
                ([z], []) => {
                    if c.lhs.coeffs().len() != 1 || !c.lhs.coeff(*z).is_one() {
                        return Err(format!("z must occur as z + c in {c}"));
                    }
                    *z_uses.entry(*z).or_default() += 1;
                }
                ([], [w]) => {
                    if c.rhs.coeffs().len() != 1 || !c.rhs.coeff(*w).is_one() {
                        return Err(format!("w must occur as w + c in {c}"));
                    }
                    w_shapes.entry(*w).or_default().push(c.rhs.constant_term().clone());
                }
                _ => return Err(format!("unexpected shape {c}")),
            }
        }
        if let Some((z, n)) = z_uses.iter().find(|(_, n)| **n != 2) {
            return Err(format!("z variable {z} used {n} times"));
        }
        for (w, shapes) in &w_shapes {
            if shapes.len() != 2 || !shapes.iter().any(|c| c.is_zero()) || !shapes.iter().any(|c| c.is_positive()) {
                return Err(format!("w variable {w} does not occur as w and w + c"));
            }
        }
        for v in self.psi.vars() {
            if role(*v) != Role::Y && !self.e.is_zero_column(*v) {
                return Err(format!("non-zero column for variable {v}"));
            }
        }
        Ok(())
    }
}

fn image(cone: &ShiftedCone, f: &LinearPoly) -> LinearPoly {
    let k = cone.gens.len();
    let mut out = LinearPoly::constant(f.constant_term().clone());
    for (x, a) in f.coeffs() {
        let col = LinearPoly::new((0..k).map(|j| (j, cone.gens[j][*x].clone())), cone.u[*x].clone());
        out = out.add(&col.scale(a));
    }
    out
}

/// Makes a sign-definite polynomial non-negative; `None` when it has mixed
/// signs or vanishes at the origin.
fn orient(f: LinearPoly) -> Option<LinearPoly> {
    let f = if f.constant_term().is_negative() { f.neg() } else { f };
    (f.constant_term().is_positive() && f.coeffs().values().all(|a| !a.is_negative())).then_some(f)
}

fn gcd_holds(f: &BigInt, g: &BigInt, rel: Rel, c: &BigInt) -> bool {
    rel.holds(&f.gcd(g), c)
}

/// Builds the triple of one cone, or `None` when a constant GCD fails.
fn triple_of_cone(member: &IpGcdInstance, cone: &ShiftedCone) -> Result<Option<GcdToDivTriple>, IpError> {
    let k = cone.gens.len();
    let mut roles = vec![Role::Y; k];
    let mut cons = Vec::new();
    for gc in &member.gcds {
        if !matches!(gc.rel, Rel::Eq | Rel::Ge) {
            return Err(IpError::InvalidInstance(format!("relation {} left after sign splitting", gc.rel.symbol())));
        }
        let missing_sign = || IpError::InvalidInstance("GCD argument without a sign row".into());
        let f = orient(image(cone, &gc.f)).ok_or_else(missing_sign)?;
        let g = orient(image(cone, &gc.g)).ok_or_else(missing_sign)?;
        if f.is_constant() && g.is_constant() {
            if gcd_holds(f.constant_term(), g.constant_term(), gc.rel, &gc.c) {
                continue;
            }
            return Ok(None);
        }
        let c = LinearPoly::constant(gc.c.clone());
        let fresh = roles.len();
        match gc.rel {
            Rel::Eq => {
                roles.push(Role::W);
                let w = LinearPoly::var(fresh);
                cons.push(DivConstraint::new(c.clone(), f.clone()));
                cons.push(DivConstraint::new(c.clone(), g.clone()));
                cons.push(DivConstraint::new(f, w.clone()));
                cons.push(DivConstraint::new(g, w.add(&c)));
            }
            _ => {
                roles.push(Role::Z);
                let z = LinearPoly::var(fresh).add(&c);
                cons.push(DivConstraint::new(z.clone(), f));
                cons.push(DivConstraint::new(z, g));
            }
        }
    }
    let mut cols = cone.gens.clone();
    cols.resize(roles.len(), vec![BigInt::zero(); cone.dim()]);
    let psi = DivSystem::new((0..roles.len()).collect(), cons)?;
    Ok(Some(GcdToDivTriple { psi, u: cone.u.clone(), e: Matrix::from_columns(cone.dim(), &cols), roles }))
}

/// Triples whose semantics is the solution set of a sign-split member.
pub fn to_triples(member: &IpGcdInstance, cfg: DecomposeConfig) -> Result<Vec<GcdToDivTriple>, IpError> {
    let n = member.num_vars();
    let cones = vzgs_decompose(&rows_of(&member.rows, n), n, cfg)?;
    let mut out = Vec::new();
    for cone in &cones {
        if let Some(t) = triple_of_cone(member, cone)? {
            out.push(t);
        }
    }
    Ok(out)
}

/// A non-constant left-hand primitive part `f` whose module contains a
/// non-zero integer, with the least positive such integer.
pub fn non_increasing_witness(psi: &DivSystem) -> Option<(LinearPoly, BigInt)> {
    let rows: Vec<Var> = psi.vars().to_vec();
    let one = LinearPoly::constant(1).to_column(&rows);
    psi.lhs_primitive_parts().into_iter().filter(|f| !f.is_constant()).find_map(|f| {
        let gens: Vec<Vec<BigInt>> = module_span(psi, &f).generators(psi).iter().map(|g| g.to_column(&rows)).collect();
        min_positive_multiplier(&one, &gens).map(|c| (f, c))
    })
}

/// `2^15 (d+1)(n+1)^7`, the norm bound for one substitution round.
pub fn substitution_norm_bound(d: usize, norm: &BigInt) -> BigInt {
    BigInt::from(1u32 << 15) * BigInt::from(d + 1) * num_traits::pow(norm + 1u32, 7)
}

fn values_dividing(f: &LinearPoly, c: &BigInt, cap: u64) -> Result<Vec<Assignment>, IpError> {
    let vars: Vec<Var> = f.vars().collect();
    let width = c + 1u32;
    let size = num_traits::pow(width.clone(), vars.len());
    if size > BigInt::from(cap) {
        return Err(IpError::SearchBudgetExceeded { stage: "force increasing", size });
    }
    let width = width.to_u64().expect("bounded by cap");
    let mut out = Vec::new();
    let mut digits = vec![0u64; vars.len()];
    loop {
        let nu: Assignment = vars.iter().zip(&digits).map(|(v, d)| (*v, BigInt::from(*d))).collect();
        let fv = f.eval(&nu);
        if !fv.is_zero() && c.is_multiple_of(&fv) {
            out.push(nu);
        }
        let Some(i) = digits.iter().rposition(|d| d + 1 < width) else { break };
        digits[i] += 1;
        digits[i + 1..].iter_mut().for_each(|d| *d = 0);
    }
    Ok(out)
}

/// Substitutes values for some variables, moving their columns into `u`.
/// `None` when a constraint becomes false.
pub fn substitute_triple(t: &GcdToDivTriple, nu: &Assignment) -> Result<Option<GcdToDivTriple>, IpError> {
    let psi = match t.psi.substitute(nu) {
        Ok(psi) => psi,
        Err(DivError::UnsatisfiableAfterSubstitution(_)) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let u = t.point(nu);
    let mut e = t.e.clone();
    for v in nu.keys() {
        for i in 0..e.rows() {
            e[(i, *v)] = BigInt::zero();
        }
    }
    Ok(Some(GcdToDivTriple { psi, u, e, roles: t.roles.clone() }))
}

/// Replaces every triple by triples whose systems are increasing for the
/// order `z`, `y`, `w`, with the same overall semantics.
pub fn force_increasing(triples: Vec<GcdToDivTriple>, cap: u64) -> Result<Vec<GcdToDivTriple>, IpError> {
    let mut stack: Vec<GcdToDivTriple> = triples.into_iter().rev().collect();
    let mut out = Vec::new();
    while let Some(t) = stack.pop() {
        match non_increasing_witness(&t.psi) {
            None => out.push(t),
            Some((f, c)) => {
                let mut next = Vec::new();
                for nu in values_dividing(&f, &c, cap)? {
                    if let Some(s) = substitute_triple(&t, &nu)? {
                        next.push(s);
                    }
                }
                stack.extend(next.into_iter().rev());
            }
        }
    }
    Ok(out)
}

/// Whether `t.psi` is increasing for `z`, `y`, `w`.
pub fn is_three_increasing(t: &GcdToDivTriple) -> bool {
    is_increasing(&t.psi, &t.partition())
}

/// Variables of `t` appearing in no constraint.
pub fn unconstrained_vars(t: &GcdToDivTriple) -> BTreeSet<Var> {
    let used: BTreeSet<Var> = t.psi.constraints().iter().flat_map(|c| c.lhs.vars().chain(c.rhs.vars())).collect();
    t.psi.vars().iter().copied().filter(|v| !used.contains(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::GcdConstraint;

    fn p(t: &[(Var, i64)], c: i64) -> LinearPoly {
        LinearPoly::from_i64(t, c)
    }

    fn triple(cons: Vec<DivConstraint>, roles: Vec<Role>) -> GcdToDivTriple {
        let n = roles.len();
        GcdToDivTriple {
            psi: DivSystem::new((0..n).collect(), cons).unwrap(),
            u: vec![BigInt::zero()],
            e: Matrix::from_columns(1, &(0..n).map(|v| vec![BigInt::from((roles[v] == Role::Y) as i64)]).collect::<Vec<_>>()),
            roles,
        }
    }

    #[test]
    fn bezout_block_for_gcd_of_x_with_itself() {
        let mut inst = IpGcdInstance::with_vars(1);
        inst.add_row(crate::Inequality::ge(&p(&[(0, 1)], 0), &p(&[], 1)));
        inst.add_gcd(GcdConstraint::new(p(&[(0, 1)], 0), p(&[(0, 1)], 0), Rel::Eq, 1));
        let ts = to_triples(&inst, DecomposeConfig::default()).unwrap();
        assert_eq!(ts.len(), 1);
        let t = &ts[0];
        assert_eq!(t.psi.len(), 4);
        assert_eq!(t.roles, vec![Role::Y, Role::W]);
        assert!(t.check_invariants().is_ok());
        let lam: Assignment = [(0, BigInt::from(0)), (1, BigInt::from(1))].into();
        assert!(t.psi.is_satisfied_by(&lam));
        assert_eq!(t.point(&lam), vec![BigInt::from(1)]);
    }

    #[test]
    fn constant_gcd_folded() {
        let mut inst = IpGcdInstance::with_vars(1);
        inst.bound_var(0, 6, 6);
        inst.add_gcd(GcdConstraint::new(p(&[(0, 1)], 0), p(&[(0, 1)], 0), Rel::Eq, 6));
        let ts = to_triples(&inst, DecomposeConfig::default()).unwrap();
        assert_eq!(ts.len(), 1);
        assert!(ts[0].psi.is_empty());
        inst.gcds[0].c = BigInt::from(3);
        assert!(to_triples(&inst, DecomposeConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn two_in_module_splits_on_divisors() {
        // (λ+1 | w) ∧ (λ+1 | w+2)
        let t = triple(
            vec![DivConstraint::new(p(&[(0, 1)], 1), p(&[(1, 1)], 0)), DivConstraint::new(p(&[(0, 1)], 1), p(&[(1, 1)], 2))],
            vec![Role::Y, Role::W],
        );
        let (f, c) = non_increasing_witness(&t.psi).unwrap();
        assert_eq!(f, p(&[(0, 1)], 1));
        assert_eq!(c, BigInt::from(2));
        assert!(!is_three_increasing(&t));
        let out = force_increasing(vec![t], 1000).unwrap();
        let us: Vec<BigInt> = out.iter().map(|t| t.u[0].clone()).collect();
        assert_eq!(us, vec![BigInt::from(0), BigInt::from(1)]);
        assert!(out.iter().all(is_three_increasing));
    }

    #[test]
    fn increasing_triple_unchanged() {
        let t = triple(vec![DivConstraint::new(p(&[(0, 1)], 1), p(&[(1, 1)], 0))], vec![Role::Y, Role::W]);
        assert_eq!(force_increasing(vec![t.clone()], 10).unwrap(), vec![t]);
    }

    #[test]
    fn invariant_violations_reported() {
        let t = triple(vec![DivConstraint::new(p(&[(0, 1)], 1), p(&[(1, 1)], 0))], vec![Role::Y, Role::W]);
        assert!(t.check_invariants().unwrap_err().contains("w and w + c"));
        let t = triple(vec![DivConstraint::new(p(&[(0, 1)], 0), p(&[], 3))], vec![Role::Y]);
        assert!(t.check_invariants().is_err());
    }
}
