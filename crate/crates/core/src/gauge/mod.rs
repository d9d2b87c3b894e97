//! Finite and infinitesimal gauge transformation engines, group-element
//! calculus, dressing substitution and basicity checks.

use crate::calculus::{exterior_d, interior, lie_derivative, CalcError, VerticalField};
use crate::expr::{equals, normalize, substitute, Expr, GenId, GroupLetters, Subst};
use crate::scalar::Coeff;
use crate::theories::{AdditiveParam, Dressing, Sector, Theory};

/// The zero-map for a sector's field-dependent letters.
fn strip_sub(sector: &Sector) -> Subst {
    let mut zero = Subst::new();
    if let Some(gl) = &sector.group {
        zero.insert(gl.vg, Expr::zero());
        zero.insert(gl.dvg, Expr::zero());
    }
    if let Some(ap) = &sector.additive {
        zero.insert(ap.vt, Expr::zero());
        zero.insert(ap.dvt, Expr::zero());
    }
    zero
}

/// Build the substitution for a sector's finite transformation.  With
/// `field_dependent = false` the group's variational letters are zeroed
/// (equivariance R*_gamma) both in the input and inside the rule values;
/// with `true` they survive (gauge-group action).
pub fn finite_subst(sector: &Sector, field_dependent: bool, th: &Theory) -> Subst {
    let mut sub = Subst::new();
    let zero = strip_sub(sector);
    for (&g, e) in &sector.finite {
        let value =
            if field_dependent { e.clone() } else { substitute(e, &zero, &th.sy) };
        sub.insert(g, value);
    }
    if !field_dependent {
        for (k, v) in zero.map {
            sub.insert(k, v);
        }
    }
    sub
}

/// The trace-word substitution table of a sector (falls back to `finite`).
pub fn finite_subst_tr(sector: &Sector, field_dependent: bool, th: &Theory) -> Subst {
    if sector.finite_tr.is_empty() {
        return finite_subst(sector, field_dependent, th);
    }
    let mut sub = Subst::new();
    let zero = strip_sub(sector);
    for (&g, e) in &sector.finite_tr {
        let value =
            if field_dependent { e.clone() } else { substitute(e, &zero, &th.sy) };
        sub.insert(g, value);
    }
    if !field_dependent {
        for (k, v) in zero.map {
            sub.insert(k, v);
        }
    }
    sub
}

/// Finite gauge transformation of an expression.
pub fn finite_gt(e: &Expr, sector: &Sector, field_dependent: bool, th: &Theory) -> Expr {
    let sub = finite_subst(sector, field_dependent, th);
    let out = if sector.finite_tr.is_empty() {
        substitute(e, &sub, &th.sy)
    } else {
        let sub_tr = finite_subst_tr(sector, field_dependent, th);
        crate::expr::substitute_dual(e, &sub, &sub_tr, &th.sy)
    };
    crate::calculus::deriv::fix_dstars(&out, th).unwrap_or(out)
}

/// The sector's vertical field for parameter index 0 or 1.
pub fn vertical_field(sector: &Sector, param_idx: usize, th: &Theory) -> VerticalField {
    let mut v = VerticalField {
        name: format!("{}^v", th.sy.name(sector.params[param_idx])),
        ..Default::default()
    };
    if param_idx == 0 {
        v.table = sector.vert.clone();
    } else {
        let sub = param_rename(sector.params[0], sector.params[1], th);
        for (&g, e) in &sector.vert {
            v.table.insert(g, substitute(e, &sub, &th.sy));
        }
    }
    v
}

/// A substitution sending one parameter letter (and its d-letter) to
/// another.
pub fn param_rename(from: GenId, to: GenId, th: &Theory) -> Subst {
    let mut sub = Subst::new();
    sub.insert(from, Expr::gen(to));
    let dfrom = th.sy.lookup(&format!("d{}", th.sy.name(from)));
    let dto = th.sy.lookup(&format!("d{}", th.sy.name(to)));
    if let (Some(df), Some(dt)) = (dfrom, dto) {
        sub.insert(df, Expr::gen(dt));
    }
    sub
}

/// A substitution sending a parameter letter to an arbitrary expression,
/// with the d-letter following by Leibniz.
pub fn param_subst(param: GenId, value: &Expr, th: &Theory) -> Result<Subst, CalcError> {
    let mut sub = Subst::new();
    sub.insert(param, value.clone());
    if let Some(dp) = th.sy.lookup(&format!("d{}", th.sy.name(param))) {
        sub.insert(dp, exterior_d(value, th)?);
    }
    Ok(sub)
}

/// Infinitesimal gauge transformation: Lie derivative along the sector's
/// first vertical field.
pub fn infinitesimal_gt(e: &Expr, sector: &Sector, th: &Theory) -> Result<Expr, CalcError> {
    let v = vertical_field(sector, 0, th);
    lie_derivative(e, &v, th)
}

/// Dressing: the rule-of-thumb substitution gamma -> u.
pub fn dress(e: &Expr, dressing: &Dressing, th: &Theory) -> Expr {
    let mut sub = Subst::new();
    for (&g, val) in &dressing.table {
        sub.insert(g, val.clone());
    }
    let out = if dressing.table_tr.is_empty() {
        substitute(e, &sub, &th.sy)
    } else {
        let mut sub_tr = Subst::new();
        for (&g, val) in &dressing.table_tr {
            sub_tr.insert(g, val.clone());
        }
        crate::expr::substitute_dual(e, &sub, &sub_tr, &th.sy)
    };
    crate::calculus::deriv::fix_dstars(&out, th).unwrap_or(out)
}

/// Substitution implementing composition of group elements: every letter of
/// `a` maps to the corresponding letter of the product a·b.
pub fn compose_group(a: &GroupLetters, b: &GroupLetters, th: &Theory) -> Subst {
    let sy = &th.sy;
    let m = |x: &Expr, y: &Expr| x.mul(y, sy).unwrap();
    let ga = Expr::gen(a.g);
    let gb = Expr::gen(b.g);
    let gia = Expr::gen(a.ginv);
    let gib = Expr::gen(b.ginv);
    let da = Expr::gen(a.dg);
    let db = Expr::gen(b.dg);
    let va = Expr::gen(a.vg);
    let vb = Expr::gen(b.vg);
    let dva = Expr::gen(a.dvg);
    let dvb = Expr::gen(b.dvg);
    let mut sub = Subst::new();
    sub.insert(a.g, m(&ga, &gb));
    sub.insert(a.ginv, m(&gib, &gia));
    sub.insert(a.dg, m(&da, &gb).add(&m(&ga, &db)));
    sub.insert(a.vg, m(&va, &gb).add(&m(&ga, &vb)));
    // d δ(ab) = dδa b + δa db + da δb + a dδb  (a, δa have p = 0 resp. q = 0)
    sub.insert(
        a.dvg,
        m(&dva, &gb).add(&m(&va, &db)).add(&m(&da, &vb)).add(&m(&ga, &dvb)),
    );
    sub
}

/// Substitution for the linearization gamma = 1 + lin·param of a group
/// sector (field-independent part); `lin` is the nilpotent constant
/// (pre-declared by the theory loader).
pub fn linearize_group(gl: &GroupLetters, param: GenId, th: &Theory) -> Subst {
    let lin = *th.sy.consts_by_name.get("lin").expect("`lin` constant not declared");
    let sy = &th.sy;
    let lin_c = Coeff::constant(lin);
    let chi = Expr::gen(param).scale(&lin_c, sy);
    let dparam = sy.lookup(&format!("d{}", sy.name(param))).expect("param d-letter");
    let dchi = Expr::gen(dparam).scale(&lin_c, sy);
    let mut sub = Subst::new();
    sub.insert(gl.g, Expr::one().add(&chi));
    sub.insert(gl.ginv, Expr::one().sub(&chi));
    sub.insert(gl.dg, dchi);
    sub.insert(gl.vg, Expr::zero());
    sub.insert(gl.dvg, Expr::zero());
    sub
}

/// Linearization t = lin·param of an additive sector.
pub fn linearize_additive(ap: &AdditiveParam, param: GenId, th: &Theory) -> Subst {
    let lin = *th.sy.consts_by_name.get("lin").expect("`lin` constant not declared");
    let sy = &th.sy;
    let lin_c = Coeff::constant(lin);
    let dparam = sy.lookup(&format!("d{}", sy.name(param))).expect("param d-letter");
    let mut sub = Subst::new();
    sub.insert(ap.t, Expr::gen(param).scale(&lin_c, sy));
    sub.insert(ap.dt, Expr::gen(dparam).scale(&lin_c, sy));
    sub.insert(ap.vt, Expr::zero());
    sub.insert(ap.dvt, Expr::zero());
    sub
}

/// Verdict of a basicity check; residues are kept for reporting.
#[derive(Debug, Clone)]
pub struct BasicityVerdict {
    pub horizontal: bool,
    pub equivariant: bool,
    pub horizontal_residue: Expr,
    pub equivariant_residue: Expr,
}

impl BasicityVerdict {
    pub fn basic(&self) -> bool {
        self.horizontal && self.equivariant
    }
}

/// Horizontality (generic-parameter contraction vanishes) and equivariance
/// (field-independent finite transformation fixes the expression).
pub fn basicity_check(
    e: &Expr,
    sector: &Sector,
    th: &Theory,
) -> Result<BasicityVerdict, CalcError> {
    let v = vertical_field(sector, 0, th);
    let hres = interior(e, &v, th)?;
    let eres = normalize(&finite_gt(e, sector, false, th).sub(e), &th.sy);
    Ok(BasicityVerdict {
        horizontal: hres.terms.is_empty(),
        equivariant: eres.terms.is_empty(),
        horizontal_residue: hres,
        equivariant_residue: eres,
    })
}

/// The vertical field of the killed sector extended by the dressing's
/// contraction overrides (iota_chi δu = -chi u etc.).
pub fn killed_field(sector: &Sector, dressing: &Dressing, th: &Theory) -> VerticalField {
    let mut v = vertical_field(sector, 0, th);
    for (&g, e) in &dressing.vert_killed {
        v.table.insert(g, e.clone());
    }
    v
}

/// The vertical field of the second-kind residual symmetry (u -> u xi,
/// fields inert).
pub fn residual2_field(dressing: &Dressing, param_idx: usize, th: &Theory) -> VerticalField {
    let params = dressing.residual2_params.expect("dressing has no second-kind residual");
    let mut v = VerticalField {
        name: format!("{}^v", th.sy.name(params[param_idx])),
        ..Default::default()
    };
    for (&g, e) in &dressing.residual2_vert {
        let e = if param_idx == 0 {
            e.clone()
        } else {
            substitute(e, &param_rename(params[0], params[1], th), &th.sy)
        };
        v.table.insert(g, e);
    }
    // every variational basis letter of the theory is inert
    for &b in &th.var_basis {
        v.table.entry(b).or_insert_with(Expr::zero);
    }
    v
}

/// Consistency of finite vs infinitesimal tables: the first-order expansion
/// of the finite rule reproduces the Lie derivative of each generator.
/// Returns the offending generator name on failure.
pub fn check_finite_linearization(th: &Theory, sector_name: &str) -> Result<(), String> {
    let sector = th.sectors.get(sector_name).cloned().ok_or("unknown sector")?;
    let lin_sub = if let Some(gl) = &sector.group {
        linearize_group(gl, sector.params[0], th)
    } else if let Some(ap) = &sector.additive {
        linearize_additive(ap, sector.params[0], th)
    } else {
        return Ok(());
    };
    let lin = th.sy.consts_by_name["lin"];
    let v = vertical_field(&sector, 0, th);
    for (&g, rule) in &sector.finite {
        // skip rules for the sector's own group letters
        if let Some(gl) = &sector.group {
            if [gl.g, gl.ginv, gl.dg, gl.vg, gl.dvg].contains(&g) {
                continue;
            }
        }
        let boxed = substitute(rule, &lin_sub, &th.sy);
        let delta = lie_derivative(&Expr::gen(g), &v, th)
            .map_err(|e| format!("sector `{sector_name}`: {e}"))?
            .scale(&Coeff::constant(lin), &th.sy);
        let expect = Expr::gen(g).add(&delta);
        if !equals(&boxed, &expect, &th.sy) {
            return Err(format!(
                "sector `{}`: finite rule for `{}` does not linearize to its vertical table: {} vs {}",
                sector_name,
                th.sy.name(g),
                crate::expr::render(&normalize(&boxed, &th.sy), &th.sy),
                crate::expr::render(&normalize(&expect, &th.sy), &th.sy),
            ));
        }
    }
    Ok(())
}
