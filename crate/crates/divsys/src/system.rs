//! Divisibility constraints, systems, variable orders and partitions.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use numthy::{valuation, Valuation};

use crate::error::DivError;
use crate::poly::{default_name, Assignment, LinearPoly, Var};

/// `lhs | rhs`: holds when `lhs` is non-zero and divides `rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivConstraint {
    pub lhs: LinearPoly,
    pub rhs: LinearPoly,
}

impl DivConstraint {
    pub fn new(lhs: LinearPoly, rhs: LinearPoly) -> Self {
        DivConstraint { lhs, rhs }
    }

    pub fn holds(&self, a: &Assignment) -> bool {
        let l = self.lhs.eval(a);
        !l.is_zero() && self.rhs.eval(a).is_multiple_of(&l)
    }

    /// `lhs(a) != 0` and `v_p(lhs(a)) <= v_p(rhs(a))`.
    pub fn holds_mod_p(&self, p: &BigInt, a: &Assignment) -> bool {
        let l = self.lhs.eval(a);
        !l.is_zero() && valuation(&l, p) <= valuation(&self.rhs.eval(a), p)
    }

    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(Var) -> String) -> String {
        format!("{} | {}", self.lhs.display_with(names), self.rhs.display_with(names))
    }
}

impl fmt::Display for DivConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_name))
    }
}

impl fmt::Debug for DivConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A reduced conjunction of divisibilities over an ordered variable universe.
///
/// Construction divides each constraint by the joint content of its sides
/// and makes the left-hand content positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DivSystem {
    constraints: Vec<DivConstraint>,
    vars: Vec<Var>,
}

impl DivSystem {
    pub fn new(vars: Vec<Var>, constraints: Vec<DivConstraint>) -> Result<Self, DivError> {
        let known: BTreeSet<Var> = vars.iter().copied().collect();
        if known.len() != vars.len() {
            return Err(DivError::InvalidPartition("repeated variable in universe".into()));
        }
        let mut out = Vec::with_capacity(constraints.len());
        for c in constraints {
            if c.lhs.is_zero() {
                return Err(DivError::ZeroLhs);
            }
            if let Some(v) = c.lhs.vars().chain(c.rhs.vars()).find(|v| !known.contains(v)) {
                return Err(DivError::UnknownVariable(v));
            }
            out.push(reduce(c));
        }
        Ok(DivSystem { constraints: out, vars })
    }

    /// System whose universe is exactly the variables occurring in `constraints`.
    pub fn from_constraints(constraints: Vec<DivConstraint>) -> Result<Self, DivError> {
        let vars: BTreeSet<Var> = constraints.iter().flat_map(|c| c.lhs.vars().chain(c.rhs.vars())).collect();
        Self::new(vars.into_iter().collect(), constraints)
    }

    pub fn constraints(&self) -> &[DivConstraint] {
        &self.constraints
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// All left- and right-hand polynomials.
    pub fn terms(&self) -> BTreeSet<LinearPoly> {
        self.constraints.iter().flat_map(|c| [c.lhs.clone(), c.rhs.clone()]).collect()
    }

    /// Distinct primitive parts of left-hand sides, in first-occurrence order.
    pub fn lhs_primitive_parts(&self) -> Vec<LinearPoly> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in &self.constraints {
            let (p, _) = c.lhs.primitive_part().expect("left-hand sides are non-zero");
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        out
    }

    /// Distinct primitive parts of all non-zero terms.
    pub fn term_primitive_parts(&self) -> BTreeSet<LinearPoly> {
        self.terms().iter().filter(|t| !t.is_zero()).map(|t| t.primitive_part().expect("non-zero").0).collect()
    }

    /// Right-hand sides of the constraints whose left-hand side is exactly `f`.
    pub fn rhs_of(&self, f: &LinearPoly) -> Vec<LinearPoly> {
        self.constraints.iter().filter(|c| &c.lhs == f).map(|c| c.rhs.clone()).collect()
    }

    /// Largest absolute coefficient or constant, at least 1.
    pub fn norm(&self) -> BigInt {
        self.constraints
            .iter()
            .flat_map(|c| [c.lhs.norm(), c.rhs.norm()])
            .fold(BigInt::one(), |m, x| m.max(x))
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        self.constraints.iter().all(|c| c.holds(a))
    }

    pub fn is_mod_p_solution(&self, p: &BigInt, a: &Assignment) -> bool {
        self.constraints.iter().all(|c| c.holds_mod_p(p, a))
    }

    /// Largest valuation at `p` of a left-hand side under `a` (zero for an
    /// empty system). `None` if a left-hand side vanishes.
    pub fn mu(&self, p: &BigInt, a: &Assignment) -> Option<u64> {
        let mut mu = 0;
        for c in &self.constraints {
            match valuation(&c.lhs.eval(a), p) {
                Valuation::Finite(k) => mu = mu.max(k),
                Valuation::Infinite => return None,
            }
        }
        Some(mu)
    }

    /// Substitutes integers for some variables.
    ///
    /// Constraints that become constant are checked: satisfied ones are
    /// dropped, violated ones (or a vanishing left-hand side) are reported.
    pub fn substitute(&self, bindings: &Assignment) -> Result<DivSystem, DivError> {
        if let Some(v) = bindings.keys().find(|v| !self.vars.contains(v)) {
            return Err(DivError::UnknownVariable(*v));
        }
        let mut out = Vec::new();
        for c in &self.constraints {
            let lhs = c.lhs.partial_eval(bindings);
            let rhs = c.rhs.partial_eval(bindings);
            let sub = DivConstraint::new(lhs, rhs);
            if sub.lhs.is_zero() {
                return Err(DivError::UnsatisfiableAfterSubstitution(c.clone()));
            }
            if sub.lhs.is_constant() && sub.rhs.is_constant() {
                if sub.rhs.constant_term().is_multiple_of(sub.lhs.constant_term()) {
                    continue;
                }
                return Err(DivError::UnsatisfiableAfterSubstitution(c.clone()));
            }
            out.push(sub);
        }
        let vars = self.vars.iter().copied().filter(|v| !bindings.contains_key(v)).collect();
        DivSystem::new(vars, out)
    }

    pub fn display_with(&self, names: &dyn Fn(Var) -> String) -> String {
        self.constraints.iter().map(|c| c.display_with(names)).collect::<Vec<_>>().join(" & ")
    }
}

impl fmt::Display for DivSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_name))
    }
}

impl fmt::Debug for DivSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DivSystem[{self}]")
    }
}

fn reduce(c: DivConstraint) -> DivConstraint {
    let g = c.lhs.content().gcd(&c.rhs.content());
    let (lhs, rhs) = if g > BigInt::one() {
        (divide_exact(&c.lhs, &g), divide_exact(&c.rhs, &g))
    } else {
        (c.lhs, c.rhs)
    };
    let (_, content) = lhs.primitive_part().expect("non-zero lhs");
    let lhs = if content.is_negative() { lhs.neg() } else { lhs };
    DivConstraint { lhs, rhs }
}

fn divide_exact(f: &LinearPoly, g: &BigInt) -> LinearPoly {
    LinearPoly::new(f.coeffs().iter().map(|(v, a)| (*v, a / g)), f.constant_term() / g)
}

/// A total order on variables; earlier entries are smaller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarOrder {
    vars: Vec<Var>,
    rank: HashMap<Var, usize>,
}

impl VarOrder {
    pub fn new(vars: Vec<Var>) -> Result<Self, DivError> {
        let rank: HashMap<Var, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        if rank.len() != vars.len() {
            return Err(DivError::InvalidPartition("repeated variable in order".into()));
        }
        Ok(VarOrder { vars, rank })
    }

    /// Variables from smallest to largest.
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn rank(&self, v: Var) -> usize {
        *self.rank.get(&v).unwrap_or_else(|| panic!("variable {v} missing from order"))
    }

    pub fn contains(&self, v: Var) -> bool {
        self.rank.contains_key(&v)
    }

    /// Leading (largest) variable of `f`; `None` for constants.
    pub fn lv(&self, f: &LinearPoly) -> Option<Var> {
        f.vars().max_by_key(|v| self.rank(*v))
    }

    /// Compares leading variables, with constants below every variable.
    pub fn cmp_lv(&self, a: Option<Var>, b: Option<Var>) -> Ordering {
        a.map(|v| self.rank(v) + 1).unwrap_or(0).cmp(&b.map(|v| self.rank(v) + 1).unwrap_or(0))
    }

    /// Coefficient of the leading variable, or the constant of a constant polynomial.
    pub fn leading_coeff(&self, f: &LinearPoly) -> BigInt {
        match self.lv(f) {
            Some(v) => f.coeff(v),
            None => f.constant_term().clone(),
        }
    }

    /// Row layout for the matrix representation: largest variable first.
    pub fn rows(&self) -> Vec<Var> {
        self.vars.iter().rev().copied().collect()
    }

    /// Whether the order covers every variable of `phi`.
    pub fn covers(&self, phi: &DivSystem) -> bool {
        phi.vars().iter().all(|v| self.contains(*v))
    }
}

/// Ordered disjoint blocks of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarPartition {
    blocks: Vec<Vec<Var>>,
}

impl VarPartition {
    /// Blocks must be disjoint; empty blocks are dropped.
    pub fn new(blocks: Vec<Vec<Var>>) -> Result<Self, DivError> {
        let blocks: Vec<Vec<Var>> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
        let mut seen = BTreeSet::new();
        for v in blocks.iter().flatten() {
            if !seen.insert(*v) {
                return Err(DivError::InvalidPartition(format!("variable {v} in two blocks")));
            }
        }
        Ok(VarPartition { blocks })
    }

    /// Partition of `phi`'s universe, checking coverage.
    pub fn for_system(phi: &DivSystem, blocks: Vec<Vec<Var>>) -> Result<Self, DivError> {
        let p = Self::new(blocks)?;
        if let Some(v) = phi.vars().iter().find(|v| p.block_of(**v).is_none()) {
            return Err(DivError::InvalidPartition(format!("variable {v} not covered by the partition")));
        }
        Ok(p)
    }

    /// A single block containing all given variables.
    pub fn single(vars: Vec<Var>) -> Self {
        VarPartition { blocks: if vars.is_empty() { vec![] } else { vec![vars] } }
    }

    pub fn blocks(&self) -> &[Vec<Var>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, v: Var) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&v))
    }

    /// Blocks concatenated, each in its listed order.
    pub fn order(&self) -> VarOrder {
        VarOrder::new(self.blocks.iter().flatten().copied().collect()).expect("blocks are disjoint")
    }

    /// The partition without its first block.
    pub fn tail(&self) -> VarPartition {
        VarPartition { blocks: self.blocks.iter().skip(1).cloned().collect() }
    }

    /// Drops variables not in `keep` (and then empty blocks).
    pub fn restrict(&self, keep: &[Var]) -> VarPartition {
        let blocks = self.blocks.iter().map(|b| b.iter().copied().filter(|v| keep.contains(v)).collect()).collect();
        VarPartition::new(blocks).expect("restriction stays disjoint")
    }
}
