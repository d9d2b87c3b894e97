//! The two exterior derivatives: spacetime `d` (graded Leibniz in p) and
//! variational `δ` (graded Leibniz in q).  They commute exactly: d carries
//! no sign past variational degree and vice versa.

use crate::expr::{Body, Expr, Letter, Symbols, Term};
use crate::theories::Theory;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CalcError {
    #[error("missing d-rule for generator `{0}`")]
    MissingD(String),
    #[error("missing δ-rule for generator `{0}`")]
    MissingVd(String),
    #[error("uncontracted variational generator `{0}` (no table entry)")]
    MissingContraction(String),
    #[error("{0}")]
    Other(String),
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Spacetime,
    Variational,
}

/// d or δ of a single letter.
fn d_letter(l: &Letter, grading: Grading, th: &Theory) -> Result<Expr, CalcError> {
    let sy = &th.sy;
    match l {
        Letter::Gen(g) => {
            let table = match grading {
                Grading::Spacetime => &th.d_rules,
                Grading::Variational => &th.vd_rules,
            };
            table.get(g).cloned().ok_or_else(|| match grading {
                Grading::Spacetime => CalcError::MissingD(sy.name(*g).to_string()),
                Grading::Variational => CalcError::MissingVd(sy.name(*g).to_string()),
            })
        }
        Letter::Star(w) => match grading {
            // d(*w) is kept atomic.
            Grading::Spacetime => Ok(Expr::word(vec![Letter::DStar(w.clone())])),
            // δ commutes with the star: δ(*w) = *(δw).
            Grading::Variational => {
                let dn = d_word(w, Grading::Variational, th)?;
                let mut out = Expr::zero();
                for t in &dn.terms {
                    match &t.body {
                        Body::Word(nw) => out.terms.push(Term {
                            coeff: t.coeff.clone(),
                            body: Body::Word(vec![Letter::Star(nw.clone())]),
                        }),
                        Body::One => {
                            return Err(CalcError::Other("δ of star content became scalar".into()))
                        }
                        _ => unreachable!(),
                    }
                }
                Ok(out)
            }
        },
        Letter::DStar(w) => match grading {
            Grading::Spacetime => Ok(Expr::zero()), // d d* = 0
            Grading::Variational => {
                // δ d*(w) = d δ*(w): push δ inside the star, hoist, then d.
                let dn = d_word(w, Grading::Variational, th)?;
                let mut starred = Expr::zero();
                for t in &dn.terms {
                    match &t.body {
                        Body::Word(nw) => starred.terms.push(Term {
                            coeff: t.coeff.clone(),
                            body: Body::Word(vec![Letter::Star(nw.clone())]),
                        }),
                        Body::One => {
                            return Err(CalcError::Other("δ of star content became scalar".into()))
                        }
                        _ => unreachable!(),
                    }
                }
                let starred = crate::expr::normalize(&starred, &th.sy);
                apply(&starred, Grading::Spacetime, th)
            }
        },
    }
}

/// Graded Leibniz over a word; sign counts only the grading being
/// differentiated.
pub fn d_word(w: &[Letter], grading: Grading, th: &Theory) -> Result<Expr, CalcError> {
    let sy = &th.sy;
    let mut out = Expr::zero();
    let mut prefix_sign = 1i8;
    for (i, l) in w.iter().enumerate() {
        let dl = d_letter(l, grading, th)?;
        if !dl.terms.is_empty() {
            let left = Expr::word(w[..i].to_vec());
            let right = Expr::word(w[i + 1..].to_vec());
            let mut piece = left
                .mul(&dl, sy)
                .and_then(|e| e.mul(&right, sy))
                .map_err(CalcError::Other)?;
            if prefix_sign < 0 {
                piece = piece.neg();
            }
            out = out.add(&piece);
        }
        let d = l.deg(sy);
        let deg_here = match grading {
            Grading::Spacetime => d.p,
            Grading::Variational => d.q,
        };
        if deg_here % 2 != 0 {
            prefix_sign = -prefix_sign;
        }
    }
    Ok(out)
}

fn d_body(t: &Term, grading: Grading, th: &Theory) -> Result<Expr, CalcError> {
    let sy = &th.sy;
    let lifted = match &t.body {
        Body::One => Expr::zero(),
        Body::Word(w) => d_word(w, grading, th)?,
        Body::Tr(w) => d_word(w, grading, th)?.tr().map_err(CalcError::Other)?,
        Body::Bullet(u, v) => {
            let du = d_word(u, grading, th)?;
            let dv = d_word(v, grading, th)?;
            let mut out = du.bullet(&Expr::word(v.clone()), sy).map_err(CalcError::Other)?;
            let ud = crate::expr::word::word_deg(u, sy);
            let sign = match grading {
                Grading::Spacetime => ud.p % 2,
                Grading::Variational => ud.q % 2,
            };
            let mut second =
                Expr::word(u.clone()).bullet(&dv, sy).map_err(CalcError::Other)?;
            if sign != 0 {
                second = second.neg();
            }
            out = out.add(&second);
            out
        }
    };
    Ok(lifted.scale(&t.coeff, sy))
}

fn apply(e: &Expr, grading: Grading, th: &Theory) -> Result<Expr, CalcError> {
    let mut out = Expr::zero();
    for t in &e.terms {
        out = out.add(&d_body(t, grading, th)?);
    }
    Ok(crate::expr::normalize(&out, &th.sy))
}

/// Spacetime exterior derivative.
pub fn exterior_d(e: &Expr, th: &Theory) -> Result<Expr, CalcError> {
    apply(e, Grading::Spacetime, th)
}

/// Re-expand d*(...) letters whose content carries hoistable 0-form
/// boundary letters (they appear after substitutions enter star contents):
/// d*(g w h) = d(g *(w) h), expanded by Leibniz with the theory's d-rules.
pub fn fix_dstars(e: &Expr, th: &Theory) -> Result<Expr, CalcError> {
    let sy = &th.sy;
    fn word_needs(w: &[Letter], sy: &Symbols) -> bool {
        w.iter().any(|l| match l {
            Letter::DStar(c) => {
                let ill = c.len() > 1
                    && (c.first().map(|x| x.deg(sy).p == 0).unwrap_or(false)
                        || c.last().map(|x| x.deg(sy).p == 0).unwrap_or(false));
                ill || word_needs(c, sy)
            }
            Letter::Star(c) => word_needs(c, sy),
            Letter::Gen(_) => false,
        })
    }
    let needs = e.terms.iter().any(|t| match &t.body {
        Body::Word(w) | Body::Tr(w) => word_needs(w, sy),
        Body::Bullet(u, v) => word_needs(u, sy) || word_needs(v, sy),
        Body::One => false,
    });
    if !needs {
        return Ok(e.clone());
    }
    // Rebuild each offending DStar letter as d applied to the hoisted star.
    fn fix_word(w: &[Letter], th: &Theory) -> Result<Expr, CalcError> {
        let sy = &th.sy;
        let mut acc = Expr::one();
        for l in w {
            let piece = match l {
                Letter::Gen(_) => Expr::word(vec![l.clone()]),
                Letter::Star(c) => {
                    // contents were produced by substitution: splice via the
                    // star of the fixed content
                    let inner = fix_word(c, th)?;
                    inner.star(sy).map_err(CalcError::Other)?
                }
                Letter::DStar(c) => {
                    let inner = fix_word(c, th)?;
                    let starred =
                        crate::expr::normalize(&inner.star(sy).map_err(CalcError::Other)?, sy);
                    apply(&starred, Grading::Spacetime, th)?
                }
            };
            acc = acc.mul(&piece, sy).map_err(CalcError::Other)?;
        }
        Ok(acc)
    }
    let mut out = Expr::zero();
    for t in &e.terms {
        let rebuilt = match &t.body {
            Body::One => Expr::scalar(t.coeff.clone()),
            Body::Word(w) => fix_word(w, th)?.scale(&t.coeff, sy),
            Body::Tr(w) => fix_word(w, th)?.tr().map_err(CalcError::Other)?.scale(&t.coeff, sy),
            Body::Bullet(u, v) => {
                let fu = fix_word(u, th)?;
                let fv = fix_word(v, th)?;
                fu.bullet(&fv, sy).map_err(CalcError::Other)?.scale(&t.coeff, sy)
            }
        };
        out = out.add(&rebuilt);
    }
    Ok(crate::expr::normalize(&out, sy))
}

/// Variational exterior derivative.
pub fn variational_d(e: &Expr, th: &Theory) -> Result<Expr, CalcError> {
    apply(e, Grading::Variational, th)
}

/// Covariant derivative with the adjoint action: D = d + [conn, .].
pub fn covariant_d_adjoint(e: &Expr, conn: &Expr, th: &Theory) -> Result<Expr, CalcError> {
    let de = exterior_d(e, th)?;
    let br = conn.bracket(e, &th.sy).map_err(CalcError::Other)?;
    Ok(crate::expr::normalize(&de.add(&br), &th.sy))
}

/// Covariant derivative with left multiplication: D = d + conn ∧ .
pub fn covariant_d_left(e: &Expr, conn: &Expr, th: &Theory) -> Result<Expr, CalcError> {
    let de = exterior_d(e, th)?;
    let me = conn.mul(e, &th.sy).map_err(CalcError::Other)?;
    Ok(crate::expr::normalize(&de.add(&me), &th.sy))
}
