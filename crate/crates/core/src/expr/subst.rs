//! Capture-free simultaneous substitution of generators by expressions.

use super::expr::{Body, Expr, Term};
use super::normalize::normalize;
use super::symbols::{GenId, Symbols};
use super::word::Letter;
use std::collections::BTreeMap;

/// A substitution table.  Values must be well-formed expressions; when
/// `strict_degree` is set, each value must match its key's bidegree.
#[derive(Debug, Clone, Default)]
pub struct Subst {
    pub map: BTreeMap<GenId, Expr>,
}

impl Subst {
    pub fn new() -> Self {
        Subst::default()
    }
    pub fn insert(&mut self, g: GenId, e: Expr) -> &mut Self {
        self.map.insert(g, e);
        self
    }
    pub fn with(mut self, g: GenId, e: Expr) -> Self {
        self.map.insert(g, e);
        self
    }
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Validate that every replacement is homogeneous of the same bidegree
    /// as the generator it replaces.
    pub fn check_degrees(&self, sy: &Symbols) -> Result<(), String> {
        for (&g, e) in &self.map {
            if let Some(d) = e.homogeneous_deg(sy)? {
                let gd = sy.gen(g).deg;
                if d != gd {
                    return Err(format!(
                        "substitution for `{}` has bidegree ({},{}), expected ({},{})",
                        sy.name(g),
                        d.p,
                        d.q,
                        gd.p,
                        gd.q
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Substitute a single word, multilinearly expanding replaced letters.
/// Replacement expressions are spliced in place (replacements are
/// degree-preserving, enforced by the caller when required).
fn subst_word(w: &[Letter], sub: &Subst, sy: &Symbols) -> Vec<(crate::scalar::Coeff, Vec<Letter>)> {
    let mut acc: Vec<(crate::scalar::Coeff, Vec<Letter>)> =
        vec![(crate::scalar::Coeff::one(), Vec::new())];
    for l in w {
        let replacements: Vec<(crate::scalar::Coeff, Vec<Letter>)> = match l {
            Letter::Gen(g) => {
                if let Some(e) = sub.map.get(g) {
                    e.terms
                        .iter()
                        .map(|t| {
                            let w = match &t.body {
                                Body::One => Vec::new(),
                                Body::Word(w) => w.clone(),
                                _ => panic!("substitution value contains a pairing"),
                            };
                            (t.coeff.clone(), w)
                        })
                        .collect()
                } else {
                    vec![(crate::scalar::Coeff::one(), vec![l.clone()])]
                }
            }
            Letter::Star(content) => subst_word(content, sub, sy)
                .into_iter()
                .map(|(c, w)| (c, vec![Letter::Star(w)]))
                .collect(),
            Letter::DStar(content) => subst_word(content, sub, sy)
                .into_iter()
                .map(|(c, w)| (c, vec![Letter::DStar(w)]))
                .collect(),
        };
        let mut next = Vec::with_capacity(acc.len() * replacements.len());
        for (c0, w0) in &acc {
            for (c1, w1) in &replacements {
                let coeff = c0.mul(c1, &sy.consts);
                if coeff.is_zero() {
                    continue;
                }
                let mut w = w0.clone();
                w.extend(w1.iter().cloned());
                next.push((coeff, w));
            }
        }
        acc = next;
    }
    acc
}

/// Body-aware substitution: bullet slots use `sub_bullet`, trace and open
/// words use `sub_tr`.  Used by sectors that mix the two invariant pairings
/// (conjugation-stripped bullet rules vs full-sandwich trace rules).
pub fn substitute_dual(e: &Expr, sub_bullet: &Subst, sub_tr: &Subst, sy: &Symbols) -> Expr {
    let mut out = Expr::zero();
    for t in &e.terms {
        match &t.body {
            Body::One => out.terms.push(t.clone()),
            Body::Word(w) => {
                for (c, nw) in subst_word(w, sub_tr, sy) {
                    let coeff = t.coeff.mul(&c, &sy.consts);
                    if coeff.is_zero() {
                        continue;
                    }
                    let body = if nw.is_empty() { Body::One } else { Body::Word(nw) };
                    out.terms.push(Term { coeff, body });
                }
            }
            Body::Tr(w) => {
                for (c, nw) in subst_word(w, sub_tr, sy) {
                    let coeff = t.coeff.mul(&c, &sy.consts);
                    if coeff.is_zero() {
                        continue;
                    }
                    out.terms.push(Term { coeff, body: Body::Tr(nw) });
                }
            }
            Body::Bullet(u, v) => {
                for (cu, nu) in subst_word(u, sub_bullet, sy) {
                    for (cv, nv) in subst_word(v, sub_bullet, sy) {
                        let coeff = t.coeff.mul(&cu, &sy.consts).mul(&cv, &sy.consts);
                        if coeff.is_zero() {
                            continue;
                        }
                        out.terms.push(Term { coeff, body: Body::Bullet(nu.clone(), nv.clone()) });
                    }
                }
            }
        }
    }
    normalize(&out, sy)
}

/// Simultaneous substitution followed by normalization.
pub fn substitute(e: &Expr, sub: &Subst, sy: &Symbols) -> Expr {
    if sub.is_empty() {
        return normalize(e, sy);
    }
    let mut out = Expr::zero();
    for t in &e.terms {
        match &t.body {
            Body::One => out.terms.push(t.clone()),
            Body::Word(w) => {
                for (c, nw) in subst_word(w, sub, sy) {
                    let coeff = t.coeff.mul(&c, &sy.consts);
                    if coeff.is_zero() {
                        continue;
                    }
                    let body = if nw.is_empty() { Body::One } else { Body::Word(nw) };
                    out.terms.push(Term { coeff, body });
                }
            }
            Body::Tr(w) => {
                for (c, nw) in subst_word(w, sub, sy) {
                    let coeff = t.coeff.mul(&c, &sy.consts);
                    if coeff.is_zero() {
                        continue;
                    }
                    out.terms.push(Term { coeff, body: Body::Tr(nw) });
                }
            }
            Body::Bullet(u, v) => {
                for (cu, nu) in subst_word(u, sub, sy) {
                    for (cv, nv) in subst_word(v, sub, sy) {
                        let coeff =
                            t.coeff.mul(&cu, &sy.consts).mul(&cv, &sy.consts);
                        if coeff.is_zero() {
                            continue;
                        }
                        out.terms.push(Term { coeff, body: Body::Bullet(nu.clone(), nv.clone()) });
                    }
                }
            }
        }
    }
    normalize(&out, sy)
}
