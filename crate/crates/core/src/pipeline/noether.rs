//! Euler-Lagrange derivation and the Noether pipelines: the invariant case
//! and the five-stage c-equivariant algorithm (hypothesis checks, anomaly
//! primitives, currents, charges, central extension term).

use crate::calculus::{
    exterior_d, extract_d_exact, extract_vard_exact, interior, lie_derivative,
    split_euler_lagrange, variational_d, CalcError, IntExpr,
};
use crate::expr::{equals, normalize, substitute, Expr, GenId, Subst};
use crate::gauge::{param_rename, param_subst, vertical_field};
use crate::theories::{Sector, Theory};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{0}")]
    Calc(#[from] CalcError),
    #[error("hypothesis 0 fails for sector `{sector}`: L_chi E = {residue}")]
    Hyp0 { sector: String, residue: String },
    #[error("hypothesis 1 fails for sector `{sector}`: anomaly not recognized as d-exact: {alpha}")]
    Hyp1 { sector: String, alpha: String },
    #[error("extraction failed for `{what}` in sector `{sector}`")]
    Extraction { sector: String, what: String },
    #[error("sector `{sector}` is anomalous; use the c-equivariant pipeline")]
    Anomalous { sector: String },
    #[error("cross-check dα̂ = δα fails for sector `{sector}`")]
    AlphaCrossCheck { sector: String },
    #[error("verification mismatch: {0}")]
    Verify(String),
    #[error("{0}")]
    Other(String),
}

/// Result of derive_el.
#[derive(Debug, Clone)]
pub struct ElData {
    /// Field equations current (n, 1), all variational basis letters
    /// underived.
    pub e: Expr,
    /// Presymplectic potential current (n-1, 1).
    pub theta: Expr,
    /// Presymplectic 2-form current (n-1, 2): δθ.
    pub big_theta: Expr,
}

/// δL = E + dθ with the split verified.
pub fn derive_el(th: &Theory) -> Result<ElData, PipelineError> {
    let dl = variational_d(&th.lagrangian, th)?;
    let split = split_euler_lagrange(&dl, th)?;
    // verify the round trip
    let recon = split.bulk.add(&exterior_d(&split.boundary, th)?);
    if !equals(&dl, &recon, &th.sy) {
        return Err(PipelineError::Verify("Euler-Lagrange split does not reconstruct δL".into()));
    }
    let big_theta = variational_d(&split.boundary, th)?;
    Ok(ElData { e: split.bulk, theta: split.boundary, big_theta })
}

/// Insert a parameter-valued expression into the linear slot of a
/// functional: the sector's insertion letters map to `value`, every other
/// variational basis letter maps to zero.
pub fn insert_param(e: &Expr, sector: &Sector, value: &Expr, th: &Theory) -> Expr {
    let mut sub = Subst::new();
    for &b in &th.var_basis {
        if sector.insertion.contains(&b) {
            sub.insert(b, value.clone());
        } else {
            sub.insert(b, Expr::zero());
        }
    }
    let out = substitute(e, &sub, &th.sy);
    crate::calculus::deriv::fix_dstars(&out, th).unwrap_or(out)
}

/// Instantiate a template's parameter letter (and its d-letter) by a value.
pub fn at_param(e: &Expr, param: GenId, value: &Expr, th: &Theory) -> Result<Expr, PipelineError> {
    let sub = param_subst(param, value, th)?;
    let out = substitute(e, &sub, &th.sy);
    Ok(crate::calculus::deriv::fix_dstars(&out, th)?)
}

/// Simultaneous two-parameter instantiation (the values may mention the
/// template parameters themselves).
pub fn at_params2(
    e: &Expr,
    p0: GenId,
    v0: &Expr,
    p1: GenId,
    v1: &Expr,
    th: &Theory,
) -> Result<Expr, PipelineError> {
    let mut sub = param_subst(p0, v0, th)?;
    for (k, v) in param_subst(p1, v1, th)?.map {
        sub.insert(k, v);
    }
    let out = substitute(e, &sub, &th.sy);
    Ok(crate::calculus::deriv::fix_dstars(&out, th)?)
}

/// Per-sector Noether data following the five-stage algorithm; for an
/// invariant sector the anomalous pieces are all zero and the result
/// reduces to the invariant current and charge.
#[derive(Debug, Clone)]
pub struct NoetherData {
    pub sector: String,
    /// Classical anomaly alpha(chi; A) = L_{chi^v} L.
    pub alpha: Expr,
    /// Primitive beta with alpha = d(beta).
    pub beta: Expr,
    /// Variational anomaly of the potential: α̂(chi) = L_{chi^v} θ.
    pub bs_alpha: Expr,
    /// dQ(chi; A) with δ(dQ) = α̂ - δβ.
    pub dq: Expr,
    /// Primitive of dQ (boundary bookkeeping): dQ = d(q_prim).
    pub q_prim: Expr,
    /// Primitive of dQ̃: ι_chi θ - β + E(chi) = d(q_tilde_prim).
    pub q_tilde_prim: Expr,
    /// Primitive of dA(⌊chi, eta⌋): antisymmetric two-parameter template.
    pub a_cal_prim: Expr,
    /// Noether current J(chi; A).
    pub current: Expr,
    /// Noether charge Q_Σ: boundary + bulk.
    pub charge: IntExpr,
    /// Central extension term C(chi, eta) (boundary expression).
    pub c_ext: Expr,
    /// Ledger: hypothesis 0 residue (zero when it holds).
    pub hyp0_residue: Expr,
    /// dα̂ = δα cross-check passed.
    pub alpha_cross_check: bool,
}

impl NoetherData {
    pub fn anomalous(&self) -> bool {
        !self.alpha.terms.is_empty()
    }
}

/// The unified Noether pipeline (§5.1 when the anomaly vanishes, §5.2
/// otherwise).  Stages:
///   i.   hypothesis 0: L_{chi^v} E = 0,
///   ii.  hypothesis 1: alpha = d(beta),
///   iii. α̂ = L_{chi^v} θ,
///   iv.  cross-check d α̂ = δ alpha,
///   v.   dQ from δ(dQ) = α̂ - δβ,
///   vi.  dQ̃ from ι θ - β + E(chi) = d(dQ̃-primitive),
///   vii. dA from ι_chi α̂(eta) - ι_eta α̂(chi) = β([chi,eta]) - d(A-prim),
///   viii. J = dQ̃ - dQ - E(chi),  Q_Σ = ∫∂(Q̃ - Q) - ∫ E(chi),
///   ix.  C(chi,eta) = ∫∂ (A-prim + Q-prim([chi,eta])).
pub fn noether(th: &Theory, sector_name: &str, el: &ElData) -> Result<NoetherData, PipelineError> {
    let sy = &th.sy;
    let sector = th.sector(sector_name);
    let chi = sector.params[0];
    let eta = sector.params[1];
    let v0 = vertical_field(sector, 0, th);
    let v1 = vertical_field(sector, 1, th);

    // i. hypothesis 0
    let hyp0_residue = lie_derivative(&el.e, &v0, th)?;
    if !hyp0_residue.terms.is_empty() {
        return Err(PipelineError::Hyp0 {
            sector: sector_name.into(),
            residue: crate::expr::render(&hyp0_residue, sy),
        });
    }

    // ii. anomaly and beta
    let alpha = lie_derivative(&th.lagrangian, &v0, th)?;
    let beta = if alpha.terms.is_empty() {
        Expr::zero()
    } else {
        extract_d_exact(&alpha, th)?.ok_or_else(|| PipelineError::Hyp1 {
            sector: sector_name.into(),
            alpha: crate::expr::render(&alpha, sy),
        })?
    };

    // iii. variational anomaly of theta
    let bs_alpha = lie_derivative(&el.theta, &v0, th)?;

    // iv. cross-check d α̂ = δ alpha
    let lhs = exterior_d(&bs_alpha, th)?;
    let rhs = variational_d(&alpha, th)?;
    let alpha_cross_check = equals(&lhs, &rhs, sy);
    if !alpha_cross_check {
        return Err(PipelineError::AlphaCrossCheck { sector: sector_name.into() });
    }

    // v. dQ
    let target = normalize(&bs_alpha.sub(&variational_d(&beta, th)?), sy);
    let dq = if target.terms.is_empty() {
        Expr::zero()
    } else {
        extract_vard_exact(&target, th)?.ok_or_else(|| PipelineError::Extraction {
            sector: sector_name.into(),
            what: "dQ".into(),
        })?
    };
    let q_prim = if dq.terms.is_empty() {
        Expr::zero()
    } else {
        extract_d_exact(&dq, th)?.ok_or_else(|| PipelineError::Extraction {
            sector: sector_name.into(),
            what: "Q primitive".into(),
        })?
    };

    // vi. dQ̃
    let e_chi = insert_param(&el.e, sector, &Expr::gen(chi), th);
    let iota_theta = interior(&el.theta, &v0, th)?;
    let tilde_target = normalize(&iota_theta.sub(&beta).add(&e_chi), sy);
    let q_tilde_prim = if tilde_target.terms.is_empty() {
        Expr::zero()
    } else {
        extract_d_exact(&tilde_target, th)?.ok_or_else(|| PipelineError::Extraction {
            sector: sector_name.into(),
            what: "dQ-tilde".into(),
        })?
    };

    // vii. dA-prim (two-parameter template)
    let bs_alpha_eta = at_param(&bs_alpha, chi, &Expr::gen(eta), th)?;
    let i_chi_alpha_eta = interior(&bs_alpha_eta, &v0, th)?;
    let i_eta_alpha_chi = interior(&bs_alpha, &v1, th)?;
    let bracket_word = Expr::gen(chi).bracket(&Expr::gen(eta), sy).map_err(PipelineError::Other)?;
    // bracket may land in another sector (or vanish for abelian sectors)
    let beta_bracket = if sector.abelian {
        Expr::zero()
    } else {
        match &sector.self_bracket {
            None => at_param(&beta, chi, &bracket_word, th)?,
            Some((target_sector, coeff)) => {
                if target_sector == sector_name {
                    at_param(&beta, chi, &bracket_word, th)?.scale(coeff, sy)
                } else {
                    // bracket lands in a different sector: use that sector's
                    // beta template
                    let other = th.sector(target_sector);
                    let other_data_beta = {
                        let valpha = lie_derivative(&th.lagrangian, &vertical_field(other, 0, th), th)?;
                        if valpha.terms.is_empty() {
                            Expr::zero()
                        } else {
                            extract_d_exact(&valpha, th)?.unwrap_or_else(Expr::zero)
                        }
                    };
                    at_param(&other_data_beta, other.params[0], &bracket_word, th)?
                        .scale(coeff, sy)
                }
            }
        }
    };
    let a_target = normalize(
        &beta_bracket.sub(&i_chi_alpha_eta).add(&i_eta_alpha_chi),
        sy,
    );
    let a_cal_prim = if a_target.terms.is_empty() {
        Expr::zero()
    } else {
        extract_d_exact(&a_target, th)?.ok_or_else(|| PipelineError::Extraction {
            sector: sector_name.into(),
            what: "dA".into(),
        })?
    };

    // viii. current and charge
    let current = normalize(
        &exterior_d(&q_tilde_prim, th)?.sub(&dq).sub(&e_chi),
        sy,
    );
    let charge = IntExpr {
        bulk: e_chi.neg(),
        bdry: normalize(&q_tilde_prim.sub(&q_prim), sy),
    }
    .normalize(th);

    // verify J = ι θ - β - dQ (the first definition of the current)
    let j_alt = normalize(&iota_theta.sub(&beta).sub(&dq), sy);
    if !equals(&current, &j_alt, sy) {
        return Err(PipelineError::Verify(format!(
            "sector `{sector_name}`: the two current definitions disagree: {} vs {}",
            crate::expr::render(&current, sy),
            crate::expr::render(&j_alt, sy)
        )));
    }

    // ix. central extension term C(chi, eta)
    let bracket_self = if sector.abelian {
        Expr::zero()
    } else {
        match &sector.self_bracket {
            None => at_param(&q_prim, chi, &bracket_word, th)?,
            Some((target_sector, coeff)) => {
                if target_sector == sector_name {
                    at_param(&q_prim, chi, &bracket_word, th)?.scale(coeff, sy)
                } else {
                    Expr::zero() // bracket leaves the sector; Q-prim of the
                                 // other sector enters the mixed check
                }
            }
        }
    };
    let c_ext = normalize(&a_cal_prim.add(&bracket_self), sy);

    Ok(NoetherData {
        sector: sector_name.to_string(),
        alpha,
        beta,
        bs_alpha,
        dq,
        q_prim,
        q_tilde_prim,
        a_cal_prim,
        current,
        charge,
        c_ext,
        hyp0_residue,
        alpha_cross_check,
    })
}

/// The invariant-case entry point: errors when the sector is anomalous.
pub fn noether_invariant(
    th: &Theory,
    sector_name: &str,
    el: &ElData,
) -> Result<NoetherData, PipelineError> {
    let data = noether(th, sector_name, el)?;
    if data.anomalous() {
        return Err(PipelineError::Anomalous { sector: sector_name.into() });
    }
    Ok(data)
}

/// Relation between charge and 2-form: ι_{chi^v} Θ_Σ = -δ Q_Σ.
pub fn verify_charge_generates(
    th: &Theory,
    sector_name: &str,
    el: &ElData,
    data: &NoetherData,
) -> Result<bool, PipelineError> {
    let sector = th.sector(sector_name);
    let v0 = vertical_field(sector, 0, th);
    let theta_sigma = IntExpr::bulk(el.theta.clone());
    let big_theta_sigma = theta_sigma.variational_d(th)?;
    let lhs = IntExpr {
        bulk: interior(&big_theta_sigma.bulk, &v0, th)?,
        bdry: interior(&big_theta_sigma.bdry, &v0, th)?,
    };
    let rhs = data.charge.variational_d(th)?.neg();
    Ok(lhs.equals(&rhs, th)?)
}

/// Poisson bracket data for a sector pair.
#[derive(Debug, Clone)]
pub struct BracketData {
    pub sector_a: String,
    pub sector_b: String,
    /// Θ_Σ(chi^v, eta^v) computed by independent double contraction.
    pub double_contraction: IntExpr,
    /// The structural right-hand side: coeff * Q_target([chi,eta]) + C.
    pub structural: IntExpr,
    /// The boundary central term of the bracket.
    pub c_term: IntExpr,
    pub verified: bool,
}

/// Assemble and verify {Q_A(p), Q_B(p')} = Θ_Σ(p^v, p'^v) =
/// coeff·Q_target([p,p']) + C.
pub fn poisson_bracket(
    th: &Theory,
    sector_a: &str,
    sector_b: &str,
    el: &ElData,
    data: &std::collections::BTreeMap<String, NoetherData>,
) -> Result<BracketData, PipelineError> {
    let sy = &th.sy;
    let sa = th.sector(sector_a);
    let sb = th.sector(sector_b);
    let same = sector_a == sector_b;
    let (pa, pb) = if same {
        (sa.params[0], sa.params[1])
    } else {
        (sa.params[0], sb.params[0])
    };
    let va = vertical_field(sa, 0, th);
    let vb = if same {
        vertical_field(sa, 1, th)
    } else {
        vertical_field(sb, 0, th)
    };

    // Θ_Σ(pa^v, pb^v) = ι_{pb^v} ι_{pa^v} Θ_Σ.
    let theta_sigma = IntExpr::bulk(el.theta.clone());
    let big = theta_sigma.variational_d(th)?;
    let once = IntExpr {
        bulk: interior(&big.bulk, &va, th)?,
        bdry: interior(&big.bdry, &va, th)?,
    };
    let double_contraction = IntExpr {
        bulk: interior(&once.bulk, &vb, th)?,
        bdry: interior(&once.bdry, &vb, th)?,
    }
    .normalize(th);

    let bracket_word =
        Expr::gen(pa).bracket(&Expr::gen(pb), sy).map_err(PipelineError::Other)?;

    // target sector and coefficient
    let (target, coeff): (String, crate::scalar::Coeff) = if same {
        if sa.abelian {
            ("".into(), crate::scalar::Coeff::zero())
        } else {
            match &sa.self_bracket {
                None => (sector_a.to_string(), crate::scalar::Coeff::one()),
                Some((t, c)) => (t.clone(), c.clone()),
            }
        }
    } else {
        match sa.cross.get(sector_b) {
            Some((t, c)) => (t.clone(), c.clone()),
            None => (sector_b.to_string(), crate::scalar::Coeff::one()),
        }
    };

    let q_target = if coeff.is_zero() || target.is_empty() {
        IntExpr::zero()
    } else {
        let tdata = data
            .get(&target)
            .ok_or_else(|| PipelineError::Other(format!("no Noether data for `{target}`")))?;
        let tparam = th.sector(&target).params[0];
        let sub = param_subst(tparam, &bracket_word, th)?;
        IntExpr {
            bulk: substitute(&tdata.charge.bulk, &sub, sy).scale(&coeff, sy),
            bdry: substitute(&tdata.charge.bdry, &sub, sy).scale(&coeff, sy),
        }
    };

    // central term
    let c_term = if same {
        let d = data.get(sector_a).unwrap();
        let a_prim = d.a_cal_prim.clone();
        let q_prim_bracket = if target.is_empty() || coeff.is_zero() {
            Expr::zero()
        } else {
            let tdata = data
                .get(&target)
                .ok_or_else(|| PipelineError::Other(format!("no Noether data for `{target}`")))?;
            let tparam = th.sector(&target).params[0];
            at_param(&tdata.q_prim, tparam, &bracket_word, th)?.scale(&coeff, sy)
        };
        IntExpr::boundary(normalize(&a_prim.add(&q_prim_bracket), sy))
    } else {
        // mixed case: dA-mixed from the defining relation, plus the dQ-term
        // of the target sector at the bracket.
        let da = data.get(sector_a).unwrap();
        let db = data.get(sector_b).unwrap();
        // ι_{pa} α̂_b(pb) - ι_{pb} α̂_a(pa) = β_target([pa,pb]) - d(Aprim)
        let i_a_alpha_b = interior(&db.bs_alpha, &va, th)?;
        let alpha_a_at = da.bs_alpha.clone();
        let i_b_alpha_a = interior(&alpha_a_at, &vb, th)?;
        let beta_bracket = if target.is_empty() || coeff.is_zero() {
            Expr::zero()
        } else {
            let tdata = data.get(&target).unwrap();
            let tparam = th.sector(&target).params[0];
            at_param(&tdata.beta, tparam, &bracket_word, th)?.scale(&coeff, sy)
        };
        let a_target_expr =
            normalize(&beta_bracket.sub(&i_a_alpha_b).add(&i_b_alpha_a), sy);
        let a_prim = if a_target_expr.terms.is_empty() {
            Expr::zero()
        } else {
            extract_d_exact(&a_target_expr, th)?.ok_or_else(|| PipelineError::Extraction {
                sector: format!("{sector_a}/{sector_b}"),
                what: "mixed dA".into(),
            })?
        };
        let q_prim_bracket = if target.is_empty() || coeff.is_zero() {
            Expr::zero()
        } else {
            let tdata = data.get(&target).unwrap();
            let tparam = th.sector(&target).params[0];
            at_param(&tdata.q_prim, tparam, &bracket_word, th)?.scale(&coeff, sy)
        };
        IntExpr::boundary(normalize(&a_prim.add(&q_prim_bracket), sy))
    };

    let structural = q_target.add(&c_term).normalize(th);
    let verified = double_contraction.equals(&structural, th)?;
    Ok(BracketData {
        sector_a: sector_a.to_string(),
        sector_b: sector_b.to_string(),
        double_contraction,
        structural,
        c_term,
        verified,
    })
}

/// On-shell / normal rewrite modes.
pub fn apply_mode(e: &Expr, th: &Theory, normal: bool) -> Expr {
    let table = if normal { &th.normal } else { &th.on_shell };
    let mut sub = Subst::new();
    for (&g, v) in table {
        sub.insert(g, v.clone());
    }
    let mut out = substitute(e, &sub, &th.sy);
    if normal && !th.normal_kills.is_empty() {
        let kills: Vec<crate::expr::Body> = th
            .normal_kills
            .iter()
            .flat_map(|k| normalize(k, &th.sy).terms.into_iter().map(|t| t.body))
            .collect();
        out.terms.retain(|t| !kills.contains(&t.body));
    }
    normalize(&out, &th.sy)
}

/// Rename a template from a sector's first parameter to its second.
pub fn rename_param(e: &Expr, sector: &Sector, th: &Theory) -> Expr {
    substitute(e, &param_rename(sector.params[0], sector.params[1], th), &th.sy)
}
