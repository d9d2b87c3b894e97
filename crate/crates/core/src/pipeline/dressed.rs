//! Dressed (edge-mode) presymplectic structures: dressed Lagrangian, field
//! equations, potential and 2-form; killed-sector charges; residual
//! second-kind charges and brackets; metric-alphabet conversion for the
//! gravitational Komar charges.

use super::noether::{at_param, PipelineError};
use crate::calculus::{interior, IntExpr};
use crate::expr::{equals, normalize, Body, Expr, Letter, Term};
use crate::gauge::{dress, killed_field, param_rename, residual2_field};
use crate::theories::{Dressing, Theory};

#[derive(Debug, Clone)]
pub struct DressedData {
    pub dressing: String,
    /// Dressed Lagrangian (L + c(A; u) for c-equivariant theories).
    pub lagrangian: Expr,
    pub e: Expr,
    /// Dressed presymplectic potential, Stokes-split.
    pub theta: IntExpr,
    /// Dressed presymplectic 2-form, Stokes-split.
    pub big_theta: IntExpr,
    /// Killed-sector charge contraction (must vanish identically).
    pub killed_charge: IntExpr,
    pub killed_ok: bool,
    /// Residual second-kind charge template (parameter = residual param 0).
    pub residual_charge: Option<IntExpr>,
    /// Residual bracket verified: Θ^u(alpha^v, alpha2^v) = Q([alpha,alpha2])
    /// + C(alpha, alpha2); the boundary C-term is returned.
    pub residual_c: Option<IntExpr>,
    pub residual_ok: bool,
}

/// Split a dressed Σ-integrand against the undressed one: the difference is
/// integrated by parts so that the report shows θ^u = θ + ∫∂(...) + ∫(...).
fn split_against(
    dressed: &Expr,
    undressed: &Expr,
    th: &Theory,
) -> Result<IntExpr, PipelineError> {
    let sy = &th.sy;
    let diff = normalize(&dressed.sub(undressed), sy);
    // peel all d-exact content into the boundary
    let split = crate::calculus::split_euler_lagrange(&diff, th).or_else(|_| {
        Ok::<crate::calculus::SplitResult, PipelineError>(crate::calculus::SplitResult {
            bulk: diff.clone(),
            boundary: Expr::zero(),
        })
    })?;
    Ok(IntExpr { bulk: normalize(&undressed.add(&split.bulk), sy), bdry: split.boundary })
}

pub fn dressed_pipeline(
    th: &Theory,
    dressing_name: &str,
    el: &super::noether::ElData,
) -> Result<DressedData, PipelineError> {
    let sy = &th.sy;
    let dr = th.dressing(dressing_name);
    let killed = th.sector(&dr.kills);

    let lagrangian = dress(&th.lagrangian, dr, th);
    let e = dress(&el.e, dr, th);
    let theta_flat = dress(&el.theta, dr, th);
    let big_flat = crate::calculus::variational_d(&theta_flat, th)?;

    let theta = split_against(&theta_flat, &el.theta, th)?;
    let big_theta = split_against(&big_flat, &el.big_theta, th)?;

    // killed-sector charges vanish identically
    let kf = killed_field(killed, dr, th);
    let killed_charge = IntExpr {
        bulk: interior(&theta.bulk, &kf, th)?,
        bdry: interior(&theta.bdry, &kf, th)?,
    }
    .normalize(th);
    let killed_big = IntExpr {
        bulk: interior(&big_theta.bulk, &kf, th)?,
        bdry: interior(&big_theta.bdry, &kf, th)?,
    };
    let killed_ok = killed_charge.is_zero(th)? && killed_big.is_zero(th)?;

    // residual transformations of the second kind
    let (residual_charge, residual_c, residual_ok) = if let Some(params) = dr.residual2_params {
        let v0 = residual2_field(dr, 0, th);
        let v1 = residual2_field(dr, 1, th);
        let q0 = IntExpr {
            bulk: interior(&theta.bulk, &v0, th)?,
            bdry: interior(&theta.bdry, &v0, th)?,
        }
        .normalize(th);
        // bracket rhs: Q([a, a']) instantiated on the charge template
        let bracket = Expr::gen(params[0])
            .bracket(&Expr::gen(params[1]), sy)
            .map_err(PipelineError::Other)?;
        let q_bracket = IntExpr {
            bulk: at_param(&q0.bulk, params[0], &bracket, th)?,
            bdry: at_param(&q0.bdry, params[0], &bracket, th)?,
        };
        // double contraction of Θ^u
        let double = IntExpr {
            bulk: interior(&interior(&big_theta.bulk, &v0, th)?, &v1, th)?,
            bdry: interior(&interior(&big_theta.bdry, &v0, th)?, &v1, th)?,
        }
        .normalize(th);
        // ι_{a^v} Θ^u = -δ Q(a)
        let gen_ok = {
            let lhs = IntExpr {
                bulk: interior(&big_theta.bulk, &v0, th)?,
                bdry: interior(&big_theta.bdry, &v0, th)?,
            };
            let rhs = q0.variational_d(th)?.neg();
            lhs.equals(&rhs, th)?
        };
        // C := Θ^u(a^v, a'^v) - Q([a,a']); must be a pure boundary term
        let c = double.sub(&q_bracket);
        let c_folded_is_boundary = {
            // re-split: C's bulk must be d-exact
            let folded = c.folded(th)?;
            if folded.terms.is_empty() {
                Some(IntExpr::zero())
            } else {
                crate::calculus::extract_d_exact(&folded, th)?
                    .map(|p| IntExpr::boundary(normalize(&p, sy)))
            }
        };
        match c_folded_is_boundary {
            Some(cb) => (Some(q0), Some(cb), gen_ok),
            None => (Some(q0), None, false),
        }
    } else {
        (None, None, true)
    };

    Ok(DressedData {
        dressing: dressing_name.to_string(),
        lagrangian,
        e,
        theta,
        big_theta,
        killed_charge,
        killed_ok,
        residual_charge,
        residual_c,
        residual_ok,
    })
}

/// Apply the declared metric (dressed-alphabet) conversion: bullet slots may
/// carry a group-sandwich `fr X fr⁻¹` which is stripped, letters map through
/// the metric table, and each bullet picks up one factor of the declared
/// scale constant.  Trace words convert without the scale factor.
pub fn to_metric(e: &Expr, dr: &Dressing, th: &Theory) -> Result<Expr, PipelineError> {
    let sy = &th.sy;
    let map = &th.metric_map;
    if map.is_empty() {
        return Err(PipelineError::Other("theory declares no metric map".into()));
    }
    let gl = dr
        .group
        .as_ref()
        .ok_or_else(|| PipelineError::Other("metric map needs a group dressing".into()))?;
    let convert_word = |w: &[Letter]| -> Result<Vec<Letter>, PipelineError> {
        // strip a fr ... fr⁻¹ sandwich
        let inner: Vec<Letter> = if w.len() >= 3
            && w.first() == Some(&Letter::Gen(gl.g))
            && w.last() == Some(&Letter::Gen(gl.ginv))
        {
            w[1..w.len() - 1].to_vec()
        } else if w.len() >= 3
            && w.first() == Some(&Letter::Gen(gl.ginv))
            && w.last() == Some(&Letter::Gen(gl.g))
        {
            w[1..w.len() - 1].to_vec()
        } else {
            w.to_vec()
        };
        inner
            .iter()
            .map(|l| match l {
                Letter::Gen(g) => match map.get(g) {
                    Some(&m) => Ok(Letter::Gen(m)),
                    None => Err(PipelineError::Other(format!(
                        "letter `{}` has no metric image",
                        sy.name(*g)
                    ))),
                },
                _ => Err(PipelineError::Other("star letter in metric conversion".into())),
            })
            .collect()
    };
    let mut out = Expr::zero();
    for t in &e.terms {
        match &t.body {
            Body::Bullet(u, v) => {
                let nu = convert_word(u)?;
                let nv = convert_word(v)?;
                let mut coeff = t.coeff.clone();
                if let Some(scale) = th.metric_scale {
                    coeff = coeff.mul(&crate::scalar::Coeff::constant(scale), &sy.consts);
                }
                out.terms.push(Term { coeff, body: Body::Bullet(nu, nv) });
            }
            Body::Tr(w) => {
                let nw = convert_word(w)?;
                out.terms.push(Term { coeff: t.coeff.clone(), body: Body::Tr(nw) });
            }
            _ => {
                return Err(PipelineError::Other(
                    "metric conversion applies to paired bodies only".into(),
                ))
            }
        }
    }
    Ok(normalize(&out, sy))
}

/// First-kind residual: the ordinary sector pipeline applied to dressed
/// objects (the dressing letters transform under the declared residual
/// sector).  Returns the residual charge template and the verification of
/// ι Θ^u = -δQ.
pub fn residual1_charge(
    th: &Theory,
    dressed: &DressedData,
    residual_sector: &str,
) -> Result<(IntExpr, bool), PipelineError> {
    let sector = th.sector(residual_sector);
    let v0 = crate::gauge::vertical_field(sector, 0, th);
    let q = IntExpr {
        bulk: interior(&dressed.theta.bulk, &v0, th)?,
        bdry: interior(&dressed.theta.bdry, &v0, th)?,
    }
    .normalize(th);
    let lhs = IntExpr {
        bulk: interior(&dressed.big_theta.bulk, &v0, th)?,
        bdry: interior(&dressed.big_theta.bdry, &v0, th)?,
    };
    let ok = lhs.equals(&q.variational_d(th)?.neg(), th)?;
    Ok((q, ok))
}

/// Verify that the dressing table is textually the finite table with the
/// group element renamed (the rule of thumb).
pub fn rule_of_thumb_coherence(th: &Theory, dressing_name: &str) -> Result<bool, PipelineError> {
    let dr = th.dressing(dressing_name);
    let killed = th.sector(&dr.kills);
    let (Some(sg), Some(dg)) = (&killed.group, &dr.group) else {
        // additive dressings: compare against the additive parameters
        if let (Some(sa), Some(da)) = (&killed.additive, &dr.additive) {
            let mut sub = crate::expr::Subst::new();
            sub.insert(sa.t, Expr::gen(da.t));
            sub.insert(sa.dt, Expr::gen(da.dt));
            sub.insert(sa.vt, Expr::gen(da.vt));
            sub.insert(sa.dvt, Expr::gen(da.dvt));
            for (&g, rule) in &killed.finite {
                let renamed = crate::expr::substitute(rule, &sub, &th.sy);
                if let Some(drule) = dr.table.get(&g) {
                    if !equals(&renamed, drule, &th.sy) {
                        return Ok(false);
                    }
                }
            }
            return Ok(true);
        }
        return Ok(true);
    };
    let mut sub = crate::expr::Subst::new();
    sub.insert(sg.g, Expr::gen(dg.g));
    sub.insert(sg.ginv, Expr::gen(dg.ginv));
    sub.insert(sg.dg, Expr::gen(dg.dg));
    sub.insert(sg.vg, Expr::gen(dg.vg));
    sub.insert(sg.dvg, Expr::gen(dg.dvg));
    for (&g, rule) in &killed.finite {
        let renamed = crate::expr::substitute(rule, &sub, &th.sy);
        if let Some(drule) = dr.table.get(&g) {
            if !equals(&renamed, drule, &th.sy) {
                return Ok(false);
            }
        }
    }
    for (&g, rule) in &killed.finite_tr {
        let renamed = crate::expr::substitute(rule, &sub, &th.sy);
        if let Some(drule) = dr.table_tr.get(&g) {
            if !equals(&renamed, drule, &th.sy) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Residual-parameter renaming helper for comparing dressed C-terms with
/// their undressed templates.
pub fn rename_to_residual(
    e: &Expr,
    from_sector: &crate::theories::Sector,
    dr: &Dressing,
    th: &Theory,
) -> Result<Expr, PipelineError> {
    let params =
        dr.residual2_params.ok_or_else(|| PipelineError::Other("no residual params".into()))?;
    let mut out = crate::expr::substitute(
        e,
        &param_rename(from_sector.params[0], params[0], th),
        &th.sy,
    );
    out = crate::expr::substitute(
        &out,
        &param_rename(from_sector.params[1], params[1], th),
        &th.sy,
    );
    Ok(out)
}
