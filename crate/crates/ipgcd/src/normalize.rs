//! Rewrites GCD constraints so that both arguments are variables, and
//! splits them into sign-definite `=`/`>=` cases.

use divsys::{LinearPoly, Var};
use num_bigint::BigInt;
use num_traits::One;

use crate::error::IpError;
use crate::instance::{GcdConstraint, Inequality, IpGcdInstance, Rel};

/// The variable `f` stands for, if `f` is a bare variable.
pub fn as_var(f: &LinearPoly) -> Option<Var> {
    let mut it = f.coeffs().iter();
    match (it.next(), it.next()) {
        (Some((v, a)), None) if a.is_one() && f.constant_term() == &BigInt::from(0) => Some(*v),
        _ => None,
    }
}

/// Replaces every non-variable GCD argument `f` by a fresh `t` with `t = f`.
pub fn normalize(inst: &IpGcdInstance) -> IpGcdInstance {
    let mut out = inst.clone();
    let mut gcds = Vec::with_capacity(inst.gcds.len());
    let mut fresh = 0;
    for g in &inst.gcds {
        let mut args = [g.f.clone(), g.g.clone()];
        for arg in args.iter_mut() {
            if as_var(arg).is_none() {
                let t = out.fresh_var(format!("_t{fresh}"));
                fresh += 1;
                let tv = LinearPoly::var(t);
                out.rows.push(Inequality::le(&tv, arg));
                out.rows.push(Inequality::ge(&tv, arg));
                *arg = tv;
            }
        }
        let [f, gg] = args;
        gcds.push(GcdConstraint { f, g: gg, rel: g.rel, c: g.c.clone() });
    }
    out.gcds = gcds;
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sign {
    Neg,
    Zero,
    Pos,
}

const SIGNS: [Sign; 3] = [Sign::Neg, Sign::Zero, Sign::Pos];

/// Rows forcing the sign of `x`.
fn sign_rows(x: Var, s: Sign) -> Vec<Inequality> {
    let v = LinearPoly::var(x);
    match s {
        Sign::Neg => vec![Inequality::le(&v, &LinearPoly::constant(-1))],
        Sign::Pos => vec![Inequality::ge(&v, &LinearPoly::constant(1))],
        Sign::Zero => vec![Inequality::le(&v, &LinearPoly::zero()), Inequality::ge(&v, &LinearPoly::zero())],
    }
}

/// Rows for `|x| rel c` given the (non-zero) sign of `x`.
fn abs_rows(x: Var, s: Sign, rel: Rel, c: &BigInt) -> Vec<Inequality> {
    let v = if s == Sign::Neg { LinearPoly::var(x).neg() } else { LinearPoly::var(x) };
    let c = LinearPoly::constant(c.clone());
    let mut rows = vec![Inequality::ge(&v, &c)];
    if rel == Rel::Eq {
        rows.push(Inequality::le(&v, &c));
    }
    rows
}

#[derive(Clone)]
struct Alternative {
    rows: Vec<Inequality>,
    gcd: Option<GcdConstraint>,
}

enum Atom {
    BothZero,
    Cmp(Rel, BigInt),
}

fn atoms(rel: Rel, c: &BigInt) -> Vec<Atom> {
    let one = BigInt::one();
    let range = |lo: BigInt, hi: &BigInt| {
        let mut out = Vec::new();
        let mut j = lo;
        while &j <= hi {
            out.push(Atom::Cmp(Rel::Eq, j.clone()));
            j += 1;
        }
        out
    };
    match rel {
        Rel::Eq | Rel::Ge => vec![Atom::Cmp(rel, c.clone())],
        Rel::Le => std::iter::once(Atom::BothZero).chain(range(one, c)).collect(),
        Rel::Ne => std::iter::once(Atom::BothZero)
            .chain(range(one, &(c - 1)))
            .chain(std::iter::once(Atom::Cmp(Rel::Ge, c + 1)))
            .collect(),
    }
}

fn alternatives(y: Var, z: Var, rel: Rel, c: &BigInt) -> Vec<Alternative> {
    let mut out = Vec::new();
    for atom in atoms(rel, c) {
        match atom {
            Atom::BothZero => {
                let mut rows = sign_rows(y, Sign::Zero);
                rows.extend(sign_rows(z, Sign::Zero));
                out.push(Alternative { rows, gcd: None });
            }
            Atom::Cmp(r, c) => {
                for sy in SIGNS {
                    for sz in SIGNS {
                        if (y == z && sy != sz) || (sy == Sign::Zero && sz == Sign::Zero) {
                            continue;
                        }
                        let mut rows = sign_rows(y, sy);
                        if y != z {
                            rows.extend(sign_rows(z, sz));
                        }
                        let gcd = if sy == Sign::Zero {
                            rows.extend(abs_rows(z, sz, r, &c));
                            None
                        } else if sz == Sign::Zero {
                            rows.extend(abs_rows(y, sy, r, &c));
                            None
                        } else {
                            Some(GcdConstraint::new(LinearPoly::var(y), LinearPoly::var(z), r, c.clone()))
                        };
                        out.push(Alternative { rows, gcd });
                    }
                }
            }
        }
    }
    out
}

/// Splits a normalized instance into members whose GCD constraints are all
/// `=` or `>=` over variables of fixed non-zero sign. The union of the
/// members' solution sets is the solution set of `inst`.
///
/// # Errors
/// `MemberCapExceeded` when more than `cap` members would be produced;
/// `InvalidInstance` if a GCD argument is not a variable.
pub fn sign_split(inst: &IpGcdInstance, cap: usize) -> Result<Vec<IpGcdInstance>, IpError> {
    let mut per_constraint = Vec::new();
    for g in &inst.gcds {
        let (Some(y), Some(z)) = (as_var(&g.f), as_var(&g.g)) else {
            return Err(IpError::InvalidInstance("sign splitting needs a normalized instance".into()));
        };
        per_constraint.push(alternatives(y, z, g.rel, &g.c));
    }
    let total = per_constraint.iter().try_fold(1usize, |acc, alts| acc.checked_mul(alts.len()).filter(|n| *n <= cap));
    let Some(total) = total else {
        return Err(IpError::MemberCapExceeded(cap));
    };
    let mut members = Vec::with_capacity(total);
    let mut index = vec![0usize; per_constraint.len()];
    loop {
        let mut m = inst.clone();
        m.gcds.clear();
        for (alts, &i) in per_constraint.iter().zip(&index) {
            m.rows.extend(alts[i].rows.iter().cloned());
            m.gcds.extend(alts[i].gcd.clone());
        }
        members.push(m);
        // advance the mixed-radix counter, last constraint fastest
        let mut k = per_constraint.len();
        loop {
            if k == 0 {
                return Ok(members);
            }
            k -= 1;
            index[k] += 1;
            if index[k] < per_constraint[k].len() {
                break;
            }
            index[k] = 0;
        }
    }
}
