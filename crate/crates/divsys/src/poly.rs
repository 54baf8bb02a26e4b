//! Linear integer polynomials `a1 x1 + ... + ad xd + c`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::DivError;

/// Variables are identified by index; names live with the caller.
pub type Var = usize;

/// A total assignment of integers to (some) variables.
pub type Assignment = BTreeMap<Var, BigInt>;

/// A linear polynomial in canonical form: no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinearPoly {
    coeffs: BTreeMap<Var, BigInt>,
    constant: BigInt,
}

impl LinearPoly {
    pub fn zero() -> Self {
        LinearPoly::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LinearPoly { coeffs: BTreeMap::new(), constant: c.into() }
    }

    pub fn var(v: Var) -> Self {
        Self::term(v, 1)
    }

    pub fn term(v: Var, a: impl Into<BigInt>) -> Self {
        Self::new([(v, a.into())], BigInt::zero())
    }

    /// Builds `sum a_v x_v + c`, merging repeated variables and dropping zeros.
    pub fn new(terms: impl IntoIterator<Item = (Var, BigInt)>, c: impl Into<BigInt>) -> Self {
        let mut coeffs: BTreeMap<Var, BigInt> = BTreeMap::new();
        for (v, a) in terms {
            *coeffs.entry(v).or_default() += a;
        }
        coeffs.retain(|_, a| !a.is_zero());
        LinearPoly { coeffs, constant: c.into() }
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(terms: &[(Var, i64)], c: i64) -> Self {
        Self::new(terms.iter().map(|&(v, a)| (v, BigInt::from(a))), c)
    }

    pub fn coeff(&self, v: Var) -> BigInt {
        self.coeffs.get(&v).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, BigInt> {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let terms = self.coeffs.iter().chain(&other.coeffs).map(|(v, a)| (*v, a.clone()));
        Self::new(terms, &self.constant + &other.constant)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigInt::one())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|(v, a)| (*v, a * k)), &self.constant * k)
    }

    pub fn add_constant(&self, c: &BigInt) -> Self {
        let mut out = self.clone();
        out.constant += c;
        out
    }

    /// Evaluates with every variable bound.
    ///
    /// # Panics
    /// If a variable of the polynomial is unbound.
    pub fn eval(&self, a: &Assignment) -> BigInt {
        self.try_eval(a).expect("polynomial variable missing from assignment")
    }

    pub fn try_eval(&self, a: &Assignment) -> Option<BigInt> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            acc += c * a.get(v)?;
        }
        Some(acc)
    }

    /// Substitutes the bound variables, keeping the rest symbolic.
    pub fn partial_eval(&self, a: &Assignment) -> Self {
        let mut constant = self.constant.clone();
        let mut rest = Vec::new();
        for (v, c) in &self.coeffs {
            match a.get(v) {
                Some(x) => constant += c * x,
                None => rest.push((*v, c.clone())),
            }
        }
        Self::new(rest, constant)
    }

    /// Replaces each variable by a polynomial (variables without an image stay).
    pub fn compose(&self, images: &BTreeMap<Var, LinearPoly>) -> Self {
        let mut out = Self::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            let img = images.get(v).cloned().unwrap_or_else(|| Self::var(*v));
            out = out.add(&img.scale(c));
        }
        out
    }

    /// Renames variables through `f`.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Self {
        Self::new(self.coeffs.iter().map(|(v, a)| (f(*v), a.clone())), self.constant.clone())
    }

    /// Non-negative gcd of all coefficients and the constant.
    pub fn content(&self) -> BigInt {
        self.coeffs.values().fold(self.constant.abs(), |g, a| g.gcd(a))
    }

    /// Largest absolute value among coefficients and constant.
    pub fn norm(&self) -> BigInt {
        self.coeffs.values().map(|a| a.abs()).fold(self.constant.abs(), |m, a| m.max(a))
    }

    /// The coefficient fixing the sign of the primitive part: that of the
    /// largest variable index, or the constant.
    fn sign_anchor(&self) -> &BigInt {
        self.coeffs.values().next_back().unwrap_or(&self.constant)
    }

    /// Splits `f = content * primitive` where the primitive part has coprime
    /// entries and a positive coefficient on its largest variable (or a
    /// positive constant). The content carries the sign.
    pub fn primitive_part(&self) -> Result<(LinearPoly, BigInt), DivError> {
        if self.is_zero() {
            return Err(DivError::ZeroPolynomial);
        }
        let mut c = self.content();
        if self.sign_anchor().is_negative() {
            c = -c;
        }
        let prim = Self::new(self.coeffs.iter().map(|(v, a)| (*v, a / &c)), &self.constant / &c);
        Ok((prim, c))
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.content().is_one() && self.sign_anchor().is_positive()
    }

    /// Column vector over `rows` (variables from the top) followed by the constant.
    pub fn to_column(&self, rows: &[Var]) -> Vec<BigInt> {
        debug_assert!(self.vars().all(|v| rows.contains(&v)), "variable outside the row layout");
        rows.iter().map(|v| self.coeff(*v)).chain(std::iter::once(self.constant.clone())).collect()
    }

    pub fn from_column(rows: &[Var], col: &[BigInt]) -> Self {
        assert_eq!(col.len(), rows.len() + 1, "column length mismatch");
        Self::new(rows.iter().copied().zip(col.iter().cloned()), col[rows.len()].clone())
    }

    /// Formats with caller-provided variable names.
    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(Var) -> String) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names }
    }
}

struct PolyDisplay<'a> {
    poly: &'a LinearPoly,
    names: &'a dyn Fn(Var) -> String,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, a) in &self.poly.coeffs {
            let name = (self.names)(*v);
            let mag = a.abs();
            let sign = if a.is_negative() { "-" } else { "+" };
            match (first, a.is_negative()) {
                (true, false) => {}
                (true, true) => write!(f, "-")?,
                (false, _) => write!(f, " {sign} ")?,
            }
            if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag} {name}")?;
            }
            first = false;
        }
        let c = &self.poly.constant;
        if first {
            write!(f, "{c}")
        } else if c.is_positive() {
            write!(f, " + {c}")
        } else if c.is_negative() {
            write!(f, " - {}", c.abs())
        } else {
            Ok(())
        }
    }
}

/// Default variable names `x0, x1, ...`.
pub fn default_name(v: Var) -> String {
    format!("x{v}")
}

impl fmt::Display for LinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_name))
    }
}

impl fmt::Debug for LinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_drops_zeros() {
        let p = LinearPoly::from_i64(&[(0, 2), (1, 0), (0, -2)], 3);
        assert!(p.is_constant());
        assert_eq!(p, LinearPoly::constant(3));
    }

    #[test]
    fn primitive_parts() {
        let f = LinearPoly::from_i64(&[(0, 2)], 4);
        assert_eq!(f.primitive_part().unwrap(), (LinearPoly::from_i64(&[(0, 1)], 2), BigInt::from(2)));
        let x = LinearPoly::var(0);
        assert_eq!(x.primitive_part().unwrap(), (x.clone(), BigInt::from(1)));
        let g = LinearPoly::from_i64(&[(0, -3), (1, -6)], -9);
        let (p, c) = g.primitive_part().unwrap();
        assert_eq!(p, LinearPoly::from_i64(&[(0, 1), (1, 2)], 3));
        assert_eq!(c, BigInt::from(-3));
        assert_eq!(p.scale(&c), g);
        assert!(LinearPoly::zero().primitive_part().is_err());
    }

    #[test]
    fn evaluation_and_display() {
        let f = LinearPoly::from_i64(&[(0, 1), (1, -2)], -5);
        let a: Assignment = [(0, BigInt::from(3)), (1, BigInt::from(1))].into_iter().collect();
        assert_eq!(f.eval(&a), BigInt::from(-4));
        assert_eq!(f.to_string(), "x0 - 2 x1 - 5");
        let half: Assignment = [(1, BigInt::from(1))].into_iter().collect();
        assert_eq!(f.partial_eval(&half), LinearPoly::from_i64(&[(0, 1)], -7));
    }

    #[test]
    fn column_round_trip() {
        let f = LinearPoly::from_i64(&[(0, 4), (2, -1)], 7);
        let rows = [2, 1, 0];
        assert_eq!(LinearPoly::from_column(&rows, &f.to_column(&rows)), f);
    }
}
