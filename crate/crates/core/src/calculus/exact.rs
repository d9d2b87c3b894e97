//! Integration by parts and exactness extraction by derivative peeling.
//!
//! A letter is "peelable" in a grading when some declared rule exhibits it
//! as the derivative of something: dδX peels to δX (and, in the variational
//! grading, to the d-rule of X), curvature letters peel through their
//! appearance in d-rules (F peels to A because dA = F - A A), and d*(w)
//! peels to *(w).  Peeling one letter proposes a primitive candidate; the
//! full derivative of the candidate is subtracted and the search recurses,
//! so Leibniz siblings are accounted automatically.

use super::deriv::{exterior_d, variational_d, CalcError, Grading};
use crate::expr::{render, Body, Expr, Letter, Term};
use crate::theories::Theory;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// Candidate preimages per letter for one grading, derived from the rule
/// tables: if d(X) contains the single-letter term c·L then L may peel to
/// (1/c)·X.
pub struct Peeler<'a> {
    th: &'a Theory,
    grading: Grading,
    preimages: BTreeMap<crate::expr::GenId, Vec<Expr>>,
    depth_limit: usize,
}

impl<'a> Peeler<'a> {
    pub fn new(th: &'a Theory, grading: Grading) -> Self {
        let table = match grading {
            Grading::Spacetime => &th.d_rules,
            Grading::Variational => &th.vd_rules,
        };
        let mut preimages: BTreeMap<crate::expr::GenId, Vec<Expr>> = BTreeMap::new();
        for (&x, rule) in table {
            for t in &rule.terms {
                if let Body::Word(w) = &t.body {
                    if w.len() == 1 {
                        if let Letter::Gen(l) = w[0] {
                            if t.coeff.consts.is_empty() && !t.coeff.rat.is_zero() {
                                let inv = Expr::gen(x).scale(
                                    &crate::scalar::Coeff {
                                        rat: num_rational::BigRational::from_integer(1.into())
                                            / t.coeff.rat.clone(),
                                        consts: Default::default(),
                                    },
                                    &th.sy,
                                );
                                preimages.entry(l).or_default().push(inv);
                            }
                        }
                    }
                }
            }
        }
        Peeler { th, grading, preimages, depth_limit: 8 }
    }

    fn d(&self, e: &Expr) -> Result<Expr, CalcError> {
        match self.grading {
            Grading::Spacetime => exterior_d(e, self.th),
            Grading::Variational => variational_d(e, self.th),
        }
    }

    /// Candidate primitives from peeling one letter of one term.
    fn candidates(&self, t: &Term) -> Vec<Expr> {
        let sy = &self.th.sy;
        let word = match &t.body {
            Body::Word(w) | Body::Tr(w) => w.clone(),
            Body::Bullet(..) => return self.bullet_candidates(t),
            Body::One => return vec![],
        };
        let mut out = Vec::new();
        for (i, l) in word.iter().enumerate() {
            let mut reps: Vec<Expr> = Vec::new();
            match l {
                Letter::Gen(g) => {
                    if let Some(pres) = self.preimages.get(g) {
                        reps.extend(pres.iter().cloned());
                    }
                }
                Letter::DStar(w) => {
                    if self.grading == Grading::Spacetime {
                        reps.push(Expr::word(vec![Letter::Star(w.clone())]));
                    }
                }
                Letter::Star(_) => {}
            }
            for rep in reps {
                // sign: the derivative crossed the prefix
                let prefix_deg = crate::expr::word::word_deg(&word[..i], sy);
                let s = match self.grading {
                    Grading::Spacetime => prefix_deg.p % 2,
                    Grading::Variational => prefix_deg.q % 2,
                };
                let left = Expr::word(word[..i].to_vec());
                let right = Expr::word(word[i + 1..].to_vec());
                let mut cand = match left.mul(&rep, sy).and_then(|e| e.mul(&right, sy)) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                if s != 0 {
                    cand = cand.neg();
                }
                cand = cand.scale(&t.coeff, sy);
                let cand = match &t.body {
                    Body::Tr(_) => match cand.tr() {
                        Ok(c) => c,
                        Err(_) => continue,
                    },
                    _ => cand,
                };
                out.push(cand);
            }
        }
        out
    }

    fn bullet_candidates(&self, t: &Term) -> Vec<Expr> {
        let sy = &self.th.sy;
        let (u, v) = match &t.body {
            Body::Bullet(u, v) => (u.clone(), v.clone()),
            _ => unreachable!(),
        };
        let mut out = Vec::new();
        for slot in 0..2 {
            let word = if slot == 0 { &u } else { &v };
            for (i, l) in word.iter().enumerate() {
                let mut reps: Vec<Expr> = Vec::new();
                if let Letter::Gen(g) = l {
                    if let Some(pres) = self.preimages.get(g) {
                        reps.extend(pres.iter().cloned());
                    }
                }
                for rep in reps {
                    let mut prefix_deg = crate::expr::word::word_deg(&word[..i], sy);
                    if slot == 1 {
                        prefix_deg = prefix_deg.add(crate::expr::word::word_deg(&u, sy));
                    }
                    let s = match self.grading {
                        Grading::Spacetime => prefix_deg.p % 2,
                        Grading::Variational => prefix_deg.q % 2,
                    };
                    let left = Expr::word(word[..i].to_vec());
                    let right = Expr::word(word[i + 1..].to_vec());
                    let newslot = match left.mul(&rep, sy).and_then(|e| e.mul(&right, sy)) {
                        Ok(c) => c,
                        Err(_) => continue,
                    };
                    let mut cand = if slot == 0 {
                        match newslot.bullet(&Expr::word(v.clone()), sy) {
                            Ok(c) => c,
                            Err(_) => continue,
                        }
                    } else {
                        match Expr::word(u.clone()).bullet(&newslot, sy) {
                            Ok(c) => c,
                            Err(_) => continue,
                        }
                    };
                    if s != 0 {
                        cand = cand.neg();
                    }
                    out.push(cand.scale(&t.coeff, sy));
                }
            }
        }
        out
    }

    fn search(
        &self,
        e: &Expr,
        depth: usize,
        visited: &mut BTreeSet<String>,
    ) -> Result<Option<Expr>, CalcError> {
        let sy = &self.th.sy;
        let n = crate::expr::normalize(e, sy);
        if n.terms.is_empty() {
            return Ok(Some(Expr::zero()));
        }
        if depth == 0 {
            return Ok(None);
        }
        let key = render(&n, sy);
        if visited.contains(&key) {
            return Ok(None);
        }
        if visited.len() > 400 {
            return Ok(None);
        }
        visited.insert(key);
        // Deterministic candidate order: first over terms, then letters.
        for t in &n.terms {
            for cand in self.candidates(t) {
                let dc = self.d(&cand)?;
                let rest = n.sub(&dc);
                if let Some(more) = self.search(&rest, depth - 1, visited)? {
                    return Ok(Some(crate::expr::normalize(&cand.add(&more), sy)));
                }
            }
        }
        Ok(None)
    }

    /// Full extraction: Some(beta) with e = d(beta) when found.
    pub fn extract(&self, e: &Expr) -> Result<Option<Expr>, CalcError> {
        let mut visited = BTreeSet::new();
        self.search(e, self.depth_limit, &mut visited)
    }
}

/// extract_d_exact: find beta with e = d(beta); None means "not found".
pub fn extract_d_exact(e: &Expr, th: &Theory) -> Result<Option<Expr>, CalcError> {
    Peeler::new(th, Grading::Spacetime).extract(e)
}

/// extract_vard_exact: find beta with e = δ(beta); None means "not found".
pub fn extract_vard_exact(e: &Expr, th: &Theory) -> Result<Option<Expr>, CalcError> {
    Peeler::new(th, Grading::Variational).extract(e)
}

/// Result of the Euler-Lagrange split: `input = bulk + d(boundary)` with
/// every variational basis letter underived in the bulk.
#[derive(Debug, Clone)]
pub struct SplitResult {
    pub bulk: Expr,
    pub boundary: Expr,
}

/// Does the term contain a derived variational letter (i.e. a letter that
/// must be integrated by parts)?
fn derived_variational(t: &Term, th: &Theory) -> bool {
    fn word_has(w: &[Letter], th: &Theory) -> bool {
        let sy = &th.sy;
        w.iter().any(|l| match l {
            Letter::Gen(g) => {
                let info = sy.gen(*g);
                info.deg.q > 0 && !th.var_basis.contains(g)
            }
            Letter::Star(c) | Letter::DStar(c) => {
                // variational content inside a star must also be exposed
                c.iter().any(|l| l.deg(sy).q > 0)
            }
        })
    }
    match &t.body {
        Body::One => false,
        Body::Word(w) | Body::Tr(w) => word_has(w, th),
        Body::Bullet(u, v) => word_has(u, th) || word_has(v, th),
    }
}

/// Repeated integration by parts moving derivatives off the variational
/// basis.  Errors if the depth bound is exceeded (first-order Lagrangians
/// never need more than a couple of passes).
pub fn split_euler_lagrange(dl: &Expr, th: &Theory) -> Result<SplitResult, CalcError> {
    let sy = &th.sy;
    let peeler = Peeler::new(th, Grading::Spacetime);
    let mut bulk = crate::expr::normalize(dl, sy);
    let mut boundary = Expr::zero();
    for _round in 0..8 {
        let Some(bad) = bulk.terms.iter().find(|t| derived_variational(t, th)).cloned() else {
            return Ok(SplitResult { bulk, boundary });
        };
        // Prefer candidates whose peeled letter is variational.
        let mut progressed = false;
        for cand in peeler.candidates(&bad) {
            // candidate primitive must itself contain an underived
            // variational basis letter (it becomes a boundary term)
            let dc = exterior_d(&cand, th)?;
            let new_bulk = crate::expr::normalize(&bulk.sub(&dc), sy);
            let removed_bad = !new_bulk.terms.iter().any(|t| {
                crate::expr::normalize(&Expr { terms: vec![t.clone()] }, sy)
                    == crate::expr::normalize(&Expr { terms: vec![bad.clone()] }, sy)
            });
            let still_bad_count =
                new_bulk.terms.iter().filter(|t| derived_variational(t, th)).count();
            let old_bad_count = bulk.terms.iter().filter(|t| derived_variational(t, th)).count();
            if removed_bad && still_bad_count < old_bad_count {
                bulk = new_bulk;
                boundary = crate::expr::normalize(&boundary.add(&cand), sy);
                progressed = true;
                break;
            }
        }
        if !progressed {
            return Err(CalcError::Other(format!(
                "integration by parts is stuck on term `{}` (outside first-order scope)",
                render(&Expr { terms: vec![bad] }, sy)
            )));
        }
    }
    Err(CalcError::Other("integration by parts exceeded depth bound 8".into()))
}
