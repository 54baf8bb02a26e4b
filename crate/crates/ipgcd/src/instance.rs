//! IP-GCD instances and their exact semantics.

use std::fmt;

use divsys::{Assignment, LinearPoly, Var};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::IpError;

/// Comparison between `gcd(f, g)` and a positive constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Le,
    Eq,
    Ne,
    Ge,
}

impl Rel {
    pub fn holds(self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ne => lhs != rhs,
            Rel::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Ge => ">=",
        }
    }
}

/// `gcd(f, g) rel c` with `c >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GcdConstraint {
    pub f: LinearPoly,
    pub g: LinearPoly,
    pub rel: Rel,
    pub c: BigInt,
}

impl GcdConstraint {
    pub fn new(f: LinearPoly, g: LinearPoly, rel: Rel, c: impl Into<BigInt>) -> Self {
        GcdConstraint { f, g, rel, c: c.into() }
    }

    pub fn holds(&self, x: &Assignment) -> bool {
        self.rel.holds(&self.f.eval(x).gcd(&self.g.eval(x)), &self.c)
    }
}

/// A linear inequality `poly(x) <= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub poly: LinearPoly,
}

impl Inequality {
    /// `lhs <= rhs`.
    pub fn le(lhs: &LinearPoly, rhs: &LinearPoly) -> Self {
        Inequality { poly: lhs.sub(rhs) }
    }

    /// `lhs >= rhs`.
    pub fn ge(lhs: &LinearPoly, rhs: &LinearPoly) -> Self {
        Inequality { poly: rhs.sub(lhs) }
    }

    pub fn holds(&self, x: &Assignment) -> bool {
        !self.poly.eval(x).is_positive()
    }

    /// Coefficient row over `n` variables and the bound `b` of `a x <= b`.
    pub fn row(&self, n: usize) -> (Vec<BigInt>, BigInt) {
        ((0..n).map(|v| self.poly.coeff(v)).collect(), -self.poly.constant_term())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Objective {
    pub poly: LinearPoly,
    pub sense: Sense,
}

/// Linear inequalities and GCD constraints over variables `0..names.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IpGcdInstance {
    pub names: Vec<String>,
    pub rows: Vec<Inequality>,
    pub gcds: Vec<GcdConstraint>,
    pub objective: Option<Objective>,
}

impl IpGcdInstance {
    pub fn new(names: Vec<String>) -> Self {
        IpGcdInstance { names, ..Default::default() }
    }

    /// Instance over `n` variables named `x0, x1, ...`.
    pub fn with_vars(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("x{i}")).collect())
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn add_row(&mut self, row: Inequality) -> &mut Self {
        self.rows.push(row);
        self
    }

    pub fn add_gcd(&mut self, g: GcdConstraint) -> &mut Self {
        self.gcds.push(g);
        self
    }

    /// Adds `lo <= x_v <= hi`.
    pub fn bound_var(&mut self, v: Var, lo: i64, hi: i64) -> &mut Self {
        let x = LinearPoly::var(v);
        self.rows.push(Inequality::ge(&x, &LinearPoly::constant(lo)));
        self.rows.push(Inequality::le(&x, &LinearPoly::constant(hi)));
        self
    }

    /// Appends a fresh variable and returns its index.
    pub fn fresh_var(&mut self, name: String) -> Var {
        self.names.push(name);
        self.names.len() - 1
    }

    /// Checks structural well-formedness.
    pub fn validate(&self) -> Result<(), IpError> {
        let n = self.num_vars();
        let polys = self
            .rows
            .iter()
            .map(|r| &r.poly)
            .chain(self.gcds.iter().flat_map(|g| [&g.f, &g.g]))
            .chain(self.objective.iter().map(|o| &o.poly));
        for p in polys {
            if let Some(v) = p.vars().find(|v| *v >= n) {
                return Err(IpError::InvalidInstance(format!("variable index {v} out of range")));
            }
        }
        if let Some(g) = self.gcds.iter().find(|g| g.c < BigInt::from(1)) {
            return Err(IpError::InvalidInstance(format!("gcd bound {} is not positive", g.c)));
        }
        Ok(())
    }

    pub fn assignment(&self, x: &[BigInt]) -> Assignment {
        x.iter().cloned().enumerate().collect()
    }

    /// Exact check of every row and GCD constraint at `x`.
    pub fn is_satisfied_by(&self, x: &[BigInt]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let a = self.assignment(x);
        self.rows.iter().all(|r| r.holds(&a)) && self.gcds.iter().all(|g| g.holds(&a))
    }

    /// Objective value at `x` (zero without an objective).
    pub fn objective_value(&self, x: &[BigInt]) -> BigInt {
        self.objective.as_ref().map_or_else(BigInt::zero, |o| o.poly.eval(&self.assignment(x)))
    }

    pub fn name_of(&self, v: Var) -> String {
        self.names.get(v).cloned().unwrap_or_else(|| format!("_v{v}"))
    }
}

impl fmt::Display for IpGcdInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |v: Var| self.name_of(v);
        writeln!(f, "vars {}", self.names.join(" "))?;
        if let Some(o) = &self.objective {
            let kw = if o.sense == Sense::Minimize { "minimize" } else { "maximize" };
            writeln!(f, "{kw} {}", o.poly.display_with(&names))?;
        }
        for r in &self.rows {
            let c = r.poly.constant_term();
            let lhs = r.poly.add_constant(&-c);
            writeln!(f, "{} <= {}", lhs.display_with(&names), -c)?;
        }
        for g in &self.gcds {
            writeln!(f, "gcd({}, {}) {} {}", g.f.display_with(&names), g.g.display_with(&names), g.rel.symbol(), g.c)?;
        }
        Ok(())
    }
}
