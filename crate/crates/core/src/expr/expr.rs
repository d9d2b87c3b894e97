//! Bigraded expressions: sums of scalar-weighted words, trace words and
//! bullet pairings.

use super::symbols::{Bidegree, GenId, Symbols};
use super::word::{word_deg, Letter};
use crate::scalar::Coeff;
use std::cmp::Ordering;

/// The multiplicative body of a term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Body {
    /// Pure scalar (coefficient only).
    One,
    /// Open (matrix-valued) word.
    Word(Vec<Letter>),
    /// Trace of a word; cyclic with graded signs.
    Tr(Vec<Letter>),
    /// Binary invariant pairing (the epsilon-contracted "bullet"); the two
    /// slots hold matrix-valued words.
    Bullet(Vec<Letter>, Vec<Letter>),
}

impl Body {
    pub fn deg(&self, sy: &Symbols) -> Bidegree {
        match self {
            Body::One => Bidegree::new(0, 0),
            Body::Word(w) | Body::Tr(w) => word_deg(w, sy),
            Body::Bullet(u, v) => word_deg(u, sy).add(word_deg(v, sy)),
        }
    }

    pub fn cmp_key(&self, other: &Body) -> Ordering {
        fn rank(b: &Body) -> u8 {
            match b {
                Body::One => 0,
                Body::Word(_) => 1,
                Body::Tr(_) => 2,
                Body::Bullet(..) => 3,
            }
        }
        match (self, other) {
            (Body::One, Body::One) => Ordering::Equal,
            (Body::Word(a), Body::Word(b)) | (Body::Tr(a), Body::Tr(b)) => {
                super::word::cmp_words(a, b)
            }
            (Body::Bullet(a1, a2), Body::Bullet(b1, b2)) => super::word::cmp_words(a1, b1)
                .then_with(|| super::word::cmp_words(a2, b2)),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Coeff,
    pub body: Body,
}

/// A (not necessarily normalized) expression: a formal sum of terms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expr {
    pub terms: Vec<Term>,
}

impl Expr {
    pub fn zero() -> Expr {
        Expr { terms: vec![] }
    }

    pub fn one() -> Expr {
        Expr { terms: vec![Term { coeff: Coeff::one(), body: Body::One }] }
    }

    pub fn scalar(c: Coeff) -> Expr {
        if c.is_zero() {
            Expr::zero()
        } else {
            Expr { terms: vec![Term { coeff: c, body: Body::One }] }
        }
    }

    pub fn gen(g: GenId) -> Expr {
        Expr { terms: vec![Term { coeff: Coeff::one(), body: Body::Word(vec![Letter::Gen(g)]) }] }
    }

    pub fn word(w: Vec<Letter>) -> Expr {
        if w.is_empty() {
            return Expr::one();
        }
        Expr { terms: vec![Term { coeff: Coeff::one(), body: Body::Word(w) }] }
    }

    pub fn is_zero_raw(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn neg(&self) -> Expr {
        Expr { terms: self.terms.iter().map(|t| Term { coeff: t.coeff.neg(), body: t.body.clone() }).collect() }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Expr { terms }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff, sy: &Symbols) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .filter_map(|t| {
                    let coeff = t.coeff.mul(c, &sy.consts);
                    if coeff.is_zero() {
                        None
                    } else {
                        Some(Term { coeff, body: t.body.clone() })
                    }
                })
                .collect(),
        }
    }

    pub fn scale_int(&self, n: i64, sy: &Symbols) -> Expr {
        self.scale(&Coeff::int(n), sy)
    }

    /// Wedge product.  Defined when at least one side of every term pair is
    /// scalar or both are open words; anything else is a construction error.
    pub fn mul(&self, other: &Expr, sy: &Symbols) -> Result<Expr, String> {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let coeff = a.coeff.mul(&b.coeff, &sy.consts);
                if coeff.is_zero() {
                    continue;
                }
                let body = match (&a.body, &b.body) {
                    (Body::One, x) | (x, Body::One) => x.clone(),
                    (Body::Word(u), Body::Word(v)) => {
                        let mut w = u.clone();
                        w.extend(v.iter().cloned());
                        Body::Word(w)
                    }
                    _ => {
                        return Err(format!(
                            "cannot multiply pairing-valued bodies: {:?} * {:?}",
                            a.body, b.body
                        ))
                    }
                };
                terms.push(Term { coeff, body });
            }
        }
        Ok(Expr { terms })
    }

    /// Graded bracket [a, b] = ab - (-1)^(p1 p2 + q1 q2) ba, expanded.
    pub fn bracket(&self, other: &Expr, sy: &Symbols) -> Result<Expr, String> {
        let mut out = Expr::zero();
        for a in &self.terms {
            for b in &other.terms {
                let coeff = a.coeff.mul(&b.coeff, &sy.consts);
                if coeff.is_zero() {
                    continue;
                }
                let (u, v) = match (&a.body, &b.body) {
                    (Body::Word(u), Body::Word(v)) => (u.clone(), v.clone()),
                    (Body::One, Body::Word(_)) | (Body::Word(_), Body::One) | (Body::One, Body::One) => {
                        // bracket with a scalar is zero
                        continue;
                    }
                    _ => return Err("bracket of pairing-valued expression".into()),
                };
                let s = word_deg(&u, sy).swap_sign(word_deg(&v, sy));
                let mut uv = u.clone();
                uv.extend(v.iter().cloned());
                let mut vu = v;
                vu.extend(u);
                out.terms.push(Term { coeff: coeff.clone(), body: Body::Word(uv) });
                let mut c2 = coeff;
                if s > 0 {
                    c2 = c2.neg();
                }
                out.terms.push(Term { coeff: c2, body: Body::Word(vu) });
            }
        }
        Ok(out)
    }

    /// Wrap open-word terms into traces; scalars stay scalars times Tr(1)
    /// which we reject (trace of a scalar has no meaning here).
    pub fn tr(&self) -> Result<Expr, String> {
        let mut terms = Vec::new();
        for t in &self.terms {
            match &t.body {
                Body::Word(w) => {
                    terms.push(Term { coeff: t.coeff.clone(), body: Body::Tr(w.clone()) })
                }
                Body::One => return Err("trace of a pure scalar".into()),
                _ => return Err("trace of an already paired expression".into()),
            }
        }
        Ok(Expr { terms })
    }

    /// Binary invariant pairing (bullet), multilinear in both slots.  Scalar
    /// factors multiply out.
    pub fn bullet(&self, other: &Expr, sy: &Symbols) -> Result<Expr, String> {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let coeff = a.coeff.mul(&b.coeff, &sy.consts);
                if coeff.is_zero() {
                    continue;
                }
                match (&a.body, &b.body) {
                    (Body::Word(u), Body::Word(v)) => {
                        terms.push(Term { coeff, body: Body::Bullet(u.clone(), v.clone()) })
                    }
                    _ => return Err("bullet slots must be matrix-valued words".into()),
                }
            }
        }
        Ok(Expr { terms })
    }

    /// Hodge star: wraps each term's word.  Scalars cannot be starred here.
    pub fn star(&self, _sy: &Symbols) -> Result<Expr, String> {
        let mut terms = Vec::new();
        for t in &self.terms {
            match &t.body {
                Body::Word(w) => terms.push(Term {
                    coeff: t.coeff.clone(),
                    body: Body::Word(vec![Letter::Star(w.clone())]),
                }),
                _ => return Err("star of a non-word expression".into()),
            }
        }
        Ok(Expr { terms })
    }

    /// Check that all terms share one bidegree; returns it.  `None` for the
    /// zero expression.
    pub fn homogeneous_deg(&self, sy: &Symbols) -> Result<Option<Bidegree>, String> {
        let mut deg: Option<Bidegree> = None;
        for t in &self.terms {
            let d = t.body.deg(sy);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 == d => {}
                Some(d0) => {
                    return Err(format!(
                        "inhomogeneous sum: ({},{}) vs ({},{})",
                        d0.p, d0.q, d.p, d.q
                    ))
                }
            }
        }
        Ok(deg)
    }
}
