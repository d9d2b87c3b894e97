//! Interior product with vertical (and template Hamiltonian) vector fields,
//! and the field-space Lie derivative via the Cartan formula.

use super::deriv::{d_word, exterior_d, variational_d, CalcError, Grading};
use crate::expr::{Body, Expr, Letter, Term};
use crate::theories::Theory;
use std::collections::BTreeMap;

/// A vertical field: contraction table from variational letters to (p,0)
/// expressions.  Entries for derivative letters (dδX) are derived from the
/// base entry via commutation with d; letters absent from the table with
/// q = 0 contract to zero; q > 0 letters without an entry are an error
/// unless `default_zero` names them.
#[derive(Debug, Clone, Default)]
pub struct VerticalField {
    pub name: String,
    pub table: BTreeMap<crate::expr::GenId, Expr>,
    /// Star-letter entries keyed by the content word (used by the
    /// Hamiltonian templates of the generator checks).
    pub star_table: Vec<(Vec<Letter>, Expr)>,
    /// Variational letters declared to contract to zero.
    pub zeros: Vec<crate::expr::GenId>,
}

impl VerticalField {
    fn contract_letter(&self, l: &Letter, th: &Theory) -> Result<Option<Expr>, CalcError> {
        let sy = &th.sy;
        match l {
            Letter::Gen(g) => {
                if let Some(e) = self.table.get(g) {
                    return Ok(Some(e.clone()));
                }
                if self.zeros.contains(g) {
                    return Ok(Some(Expr::zero()));
                }
                let info = sy.gen(*g);
                if info.deg.q == 0 {
                    return Ok(None); // q = 0: contributes nothing
                }
                // derivative letters: iota commutes with d
                if let crate::expr::Derived::D(base) = info.derived {
                    if let Some(e) = self.table.get(&base) {
                        return Ok(Some(exterior_d(e, th)?));
                    }
                    if self.zeros.contains(&base) {
                        return Ok(Some(Expr::zero()));
                    }
                }
                Err(CalcError::MissingContraction(info.name.clone()))
            }
            Letter::Star(w) => {
                for (pat, e) in &self.star_table {
                    if pat == w {
                        return Ok(Some(e.clone()));
                    }
                }
                match self.contract_word(w, th)? {
                    None => Ok(None),
                    Some(inner) => {
                        let mut out = Expr::zero();
                        for t in &inner.terms {
                            match &t.body {
                                Body::Word(nw) => out.terms.push(Term {
                                    coeff: t.coeff.clone(),
                                    body: Body::Word(vec![Letter::Star(nw.clone())]),
                                }),
                                Body::One => {
                                    return Err(CalcError::Other(
                                        "contraction inside star became scalar".into(),
                                    ))
                                }
                                _ => unreachable!(),
                            }
                        }
                        Ok(Some(out))
                    }
                }
            }
            Letter::DStar(w) => {
                // iota(d*(w)) = d(iota(*w)): contract inside the star,
                // hoist, then apply d (so d*-contents stay hoist-minimal).
                match self.contract_word(w, th)? {
                    None => Ok(None),
                    Some(inner) => {
                        let mut starred = Expr::zero();
                        for t in &inner.terms {
                            match &t.body {
                                Body::Word(nw) => starred.terms.push(Term {
                                    coeff: t.coeff.clone(),
                                    body: Body::Word(vec![Letter::Star(nw.clone())]),
                                }),
                                Body::One => {
                                    return Err(CalcError::Other(
                                        "contraction inside star became scalar".into(),
                                    ))
                                }
                                _ => unreachable!(),
                            }
                        }
                        let starred = crate::expr::normalize(&starred, &th.sy);
                        Ok(Some(exterior_d(&starred, th)?))
                    }
                }
            }
        }
    }

    /// q-graded antiderivation over a word; None means "no variational
    /// content" (contracts to zero).
    fn contract_word(&self, w: &[Letter], th: &Theory) -> Result<Option<Expr>, CalcError> {
        let sy = &th.sy;
        let mut out = Expr::zero();
        let mut any = false;
        let mut prefix_sign = 1i8;
        for (i, l) in w.iter().enumerate() {
            let d = l.deg(sy);
            if d.q > 0 {
                if let Some(il) = self.contract_letter(l, th)? {
                    any = true;
                    if !il.terms.is_empty() {
                        let left = Expr::word(w[..i].to_vec());
                        let right = Expr::word(w[i + 1..].to_vec());
                        let mut piece = left
                            .mul(&il, sy)
                            .and_then(|e| e.mul(&right, sy))
                            .map_err(CalcError::Other)?;
                        if prefix_sign < 0 {
                            piece = piece.neg();
                        }
                        out = out.add(&piece);
                    }
                }
            }
            if d.q % 2 != 0 {
                prefix_sign = -prefix_sign;
            }
        }
        if any || !out.terms.is_empty() {
            Ok(Some(out))
        } else {
            Ok(Some(Expr::zero()))
        }
    }
}

/// Interior product iota_V: lowers the variational degree by one.
pub fn interior(e: &Expr, v: &VerticalField, th: &Theory) -> Result<Expr, CalcError> {
    let sy = &th.sy;
    let mut out = Expr::zero();
    for t in &e.terms {
        let inner = match &t.body {
            Body::One => Expr::zero(),
            Body::Word(w) => v.contract_word(w, th)?.unwrap_or_else(Expr::zero),
            Body::Tr(w) => v
                .contract_word(w, th)?
                .unwrap_or_else(Expr::zero)
                .tr()
                .map_err(CalcError::Other)?,
            Body::Bullet(u, vv) => {
                let iu = v.contract_word(u, th)?.unwrap_or_else(Expr::zero);
                let iv = v.contract_word(vv, th)?.unwrap_or_else(Expr::zero);
                let mut acc = iu.bullet(&Expr::word(vv.clone()), sy).map_err(CalcError::Other)?;
                let uq = crate::expr::word::word_deg(u, sy).q;
                let mut second =
                    Expr::word(u.clone()).bullet(&iv, sy).map_err(CalcError::Other)?;
                if uq % 2 != 0 {
                    second = second.neg();
                }
                acc = acc.add(&second);
                acc
            }
        };
        out = out.add(&inner.scale(&t.coeff, sy));
    }
    Ok(crate::expr::normalize(&out, sy))
}

/// Field-space Lie derivative: L_V = iota_V ∘ δ + δ ∘ iota_V.
pub fn lie_derivative(e: &Expr, v: &VerticalField, th: &Theory) -> Result<Expr, CalcError> {
    let a = interior(&variational_d(e, th)?, v, th)?;
    let b = variational_d(&interior(e, v, th)?, th)?;
    Ok(crate::expr::normalize(&a.add(&b), &th.sy))
}

/// Helper used by rule authoring: the covariant derivative of a parameter
/// with the adjoint action, D chi = d chi + [A, chi].
pub fn cov_param(
    chi: crate::expr::GenId,
    conn: crate::expr::GenId,
    th: &Theory,
) -> Result<Expr, CalcError> {
    let dchi = d_word(&[Letter::Gen(chi)], Grading::Spacetime, th)?;
    let br = Expr::gen(conn)
        .bracket(&Expr::gen(chi), &th.sy)
        .map_err(CalcError::Other)?;
    Ok(dchi.add(&br))
}
