//! S-polynomials and S-term closures.

use std::collections::BTreeSet;

use crate::poly::LinearPoly;
use crate::system::{DivSystem, VarOrder};

/// `b f - a g` where `a`, `b` are the leading coefficients of `f`, `g`
/// (the whole value for a constant).
pub fn s_polynomial(f: &LinearPoly, g: &LinearPoly, order: &VarOrder) -> LinearPoly {
    let a = order.leading_coeff(f);
    let b = order.leading_coeff(g);
    f.scale(&b).sub(&g.scale(&a))
}

/// The S-terms of `f`: the terms of `phi` closed under `S(g, h)` for each
/// `f | g` in `phi` and each member `h` sharing the leading variable of `g`.
pub fn sterms(phi: &DivSystem, f: &LinearPoly, order: &VarOrder) -> BTreeSet<LinearPoly> {
    let partners = phi.rhs_of(f);
    let mut set = phi.terms();
    if partners.is_empty() {
        return set;
    }
    let mut queue: Vec<LinearPoly> = set.iter().cloned().collect();
    while let Some(h) = queue.pop() {
        let lv = order.lv(&h);
        for g in partners.iter().filter(|g| order.lv(g) == lv) {
            let s = s_polynomial(g, &h, order);
            if set.insert(s.clone()) {
                queue.push(s);
            }
        }
    }
    set
}

/// The S-terms of every primitive part of a non-zero term of `phi`.
pub fn delta(phi: &DivSystem, order: &VarOrder) -> BTreeSet<LinearPoly> {
    let mut out = phi.terms();
    for f in phi.term_primitive_parts() {
        out.extend(sterms(phi, &f, order));
    }
    out
}

/// `X ∪ {S(g, h) : g, h ∈ X}`.
pub fn s_closure(set: &BTreeSet<LinearPoly>, order: &VarOrder) -> BTreeSet<LinearPoly> {
    let mut out = set.clone();
    for g in set {
        for h in set {
            out.insert(s_polynomial(g, h, order));
        }
    }
    out
}
