//! Appendix-D generator checks: Noether charges generate the infinitesimal
//! gauge transformations through the Poisson bracket defined by Θ_Σ.  The
//! Hamiltonian vector fields of the identity functionals are solved by
//! template (opaque volume-form letters with declared contractions), never
//! by a general linear solve.

use super::noether::{ElData, NoetherData, PipelineError};
use crate::calculus::{interior, variational_d, VerticalField};
use crate::expr::{equals, normalize, Bidegree, Body, Derived, Expr, GenId, GenKind, Letter};
use crate::theories::Theory;

#[derive(Debug, Clone)]
pub struct GeneratorVerdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

struct Scratch {
    th: Theory,
    vol1: GenId,
    vol2: GenId,
    volp: GenId,
}

fn scratch_theory(th: &Theory) -> Scratch {
    let mut t = th.clone();
    let n = t.dim;
    let vol1 = t.sy.add_gen(
        "vol1",
        Bidegree::new(1, 0),
        GenKind::Matrix { symmetric: false },
        Derived::Base,
    );
    let vol2 = t.sy.add_gen(
        "vol2",
        Bidegree::new(n - 2, 0),
        GenKind::Matrix { symmetric: false },
        Derived::Base,
    );
    let volp = t.sy.add_gen("volp", Bidegree::new(n - 1, 0), GenKind::Scalar, Derived::Base);
    Scratch { th: t, vol1, vol2, volp }
}

/// Replace the canonical two-letter trace Tr(vol1 vol2) by the normalized
/// pair value (1/2) volp (the basis normalization Tr(tau_a tau_b) = 1/2
/// delta_ab contracted against the volume forms).
fn pair_normalize(e: &Expr, sc: &Scratch) -> Expr {
    let sy = &sc.th.sy;
    let mut out = Expr::zero();
    for t in &e.terms {
        match &t.body {
            Body::Tr(w) if w.len() == 2 => {
                let is_pair = matches!(
                    (&w[0], &w[1]),
                    (Letter::Gen(a), Letter::Gen(b))
                        if (*a == sc.vol1 && *b == sc.vol2) || (*a == sc.vol2 && *b == sc.vol1)
                );
                if is_pair {
                    out.terms.push(crate::expr::Term {
                        coeff: t.coeff.mul(&crate::scalar::Coeff::frac(1, 2), &sy.consts),
                        body: Body::Word(vec![Letter::Gen(sc.volp)]),
                    });
                    continue;
                }
                out.terms.push(t.clone());
            }
            _ => out.terms.push(t.clone()),
        }
    }
    normalize(&out, sy)
}

fn check(
    name: &str,
    got: &Expr,
    expect: &Expr,
    th: &Theory,
    out: &mut Vec<GeneratorVerdict>,
) {
    let pass = equals(got, expect, &th.sy);
    out.push(GeneratorVerdict {
        name: name.to_string(),
        pass,
        detail: if pass {
            crate::expr::render(&normalize(got, &th.sy), &th.sy)
        } else {
            format!(
                "got {}, expected {}",
                crate::expr::render(&normalize(got, &th.sy), &th.sy),
                crate::expr::render(&normalize(expect, &th.sy), &th.sy)
            )
        },
    });
}

/// Run the generator checks for the four worked theories.  Unknown
/// theories return an empty list.
pub fn generator_check(
    th: &Theory,
    el: &ElData,
    data: &std::collections::BTreeMap<String, NoetherData>,
) -> Result<Vec<GeneratorVerdict>, PipelineError> {
    match th.id.as_str() {
        "ym" => ym_checks(th, el, data),
        "cs" => cs_checks(th, el, data),
        "ec" => ec_checks(th, el, data),
        "grav3d-lambda-transl" => grav3d_checks(th, el, data),
        _ => Ok(vec![]),
    }
}

/// -ι_V δQ with everything computed in the scratch alphabet.
fn bracket_with(
    q_current: &Expr,
    v: &VerticalField,
    sc: &Scratch,
) -> Result<Expr, PipelineError> {
    let dq = variational_d(q_current, &sc.th)?;
    Ok(normalize(&interior(&dq, v, &sc.th)?.neg(), &sc.th.sy))
}

fn ym_checks(
    th: &Theory,
    el: &ElData,
    data: &std::collections::BTreeMap<String, NoetherData>,
) -> Result<Vec<GeneratorVerdict>, PipelineError> {
    let mut sc = scratch_theory(th);
    let sy0 = sc.th.sy.clone();
    // atomic δF letter; override δ(F)
    let vf = sc.th.sy.add_gen(
        "δF",
        Bidegree::new(2, 1),
        GenKind::Lie { algebra: "su".into(), commuting: false },
        Derived::Base,
    );
    sc.th.vd_rules.insert(th.gen_named("F"), Expr::gen(vf));
    sc.th.vd_rules.insert(vf, Expr::zero());
    sc.th.d_rules.insert(vf, Expr::zero()); // unused
    let _ = sy0;
    let sy = sc.th.sy.clone();
    let f = th.gen_named("F");
    let va = th.gen_named("δA");
    let chi = th.sector("su").params[0];
    let j = data["su"].current.clone();
    let mut out = Vec::new();

    // Hamiltonian templates
    let mut v_a = VerticalField::default();
    v_a.name = "V^A".into();
    v_a.table.insert(va, Expr::zero());
    v_a.table.insert(vf, Expr::zero());
    v_a.star_table.push((vec![Letter::Gen(vf)], Expr::gen(sc.vol2).neg()));
    let mut v_f = VerticalField::default();
    v_f.name = "V^F".into();
    v_f.table.insert(va, Expr::gen(sc.vol1));
    v_f.table.insert(vf, Expr::zero());

    // the template satisfies its defining constraint:
    // ι_{V^A} Θ = -Tr(δA vol2) = -id(δA)
    let big = variational_d(&el.theta, &sc.th)?;
    let lhs = interior(&big, &v_a, &sc.th)?;
    let id_va = Expr::gen(va)
        .mul(&Expr::gen(sc.vol2), &sy)
        .unwrap()
        .tr()
        .unwrap();
    check("ym: iota_{V^A} Theta = -id(δA)", &lhs, &id_va.neg(), &sc.th, &mut out);

    // {Q(chi), id(A)} = id(D chi)
    let got = bracket_with(&j, &v_a, &sc)?;
    let dchi = crate::calculus::interior::cov_param(chi, th.gen_named("A"), &sc.th)?;
    let expect = dchi.mul(&Expr::gen(sc.vol2), &sy).unwrap().tr().unwrap();
    check("ym: {Q(chi), id(A)} = id(D chi)", &got, &expect, &sc.th, &mut out);

    // {Q(chi), id(F)} = id([F, chi])
    let got = bracket_with(&j, &v_f, &sc)?;
    let fbr = Expr::gen(f).bracket(&Expr::gen(chi), &sy).map_err(PipelineError::Other)?;
    let expect = Expr::gen(sc.vol1)
        .mul(&fbr.star(&sy).map_err(PipelineError::Other)?, &sy)
        .unwrap()
        .tr()
        .unwrap();
    check("ym: {Q(chi), id(F)} = id([F, chi])", &got, &expect, &sc.th, &mut out);

    // {id(A), id(F)} = -1/2 volp
    let first = interior(&big, &v_a, &sc.th)?;
    let second = normalize(&interior(&first, &v_f, &sc.th)?, &sy);
    let paired = pair_normalize(&second, &sc);
    let expect = Expr::word(vec![Letter::Gen(sc.volp)])
        .scale(&crate::scalar::Coeff::frac(-1, 2), &sy);
    check("ym: {id(A), id(F)} = -1/2 vol", &paired, &expect, &sc.th, &mut out);
    Ok(out)
}

fn cs_checks(
    th: &Theory,
    el: &ElData,
    data: &std::collections::BTreeMap<String, NoetherData>,
) -> Result<Vec<GeneratorVerdict>, PipelineError> {
    let sc = scratch_theory(th);
    let sy = sc.th.sy.clone();
    let va = th.gen_named("δA");
    let chi = th.sector("su").params[0];
    let j = data["su"].current.clone();
    let mut out = Vec::new();

    let mut v_a = VerticalField::default();
    v_a.name = "V^A".into();
    v_a.table
        .insert(va, Expr::gen(sc.vol1).scale(&crate::scalar::Coeff::frac(-1, 2), &sy));

    // constraint: ι_{V^A} Θ = -id(δA)
    let big = variational_d(&el.theta, &sc.th)?;
    let lhs = interior(&big, &v_a, &sc.th)?;
    let id_va = Expr::gen(va).mul(&Expr::gen(sc.vol1), &sy).unwrap().tr().unwrap();
    check("cs: iota_{V^A} Theta = -id(δA)", &lhs, &id_va.neg(), &sc.th, &mut out);

    // {Q(chi), id(A)} = id(D chi)
    let got = bracket_with(&j, &v_a, &sc)?;
    let dchi = crate::calculus::interior::cov_param(chi, th.gen_named("A"), &sc.th)?;
    let expect = dchi.mul(&Expr::gen(sc.vol1), &sy).unwrap().tr().unwrap();
    check("cs: {Q(chi), id(A)} = id(D chi)", &got, &expect, &sc.th, &mut out);
    Ok(out)
}

fn ec_checks(
    th: &Theory,
    el: &ElData,
    data: &std::collections::BTreeMap<String, NoetherData>,
) -> Result<Vec<GeneratorVerdict>, PipelineError> {
    let sc = scratch_theory(th);
    let sy = sc.th.sy.clone();
    let va = th.gen_named("δA");
    let deet = th.gen_named("deeT");
    let eet = th.gen_named("eeT");
    let chi = th.sector("lorentz").params[0];
    let j = data["lorentz"].current.clone();
    let mut out = Vec::new();

    let mut v_a = VerticalField::default();
    v_a.name = "V^A".into();
    v_a.table.insert(va, Expr::zero());
    v_a.table
        .insert(deet, Expr::gen(sc.vol2).scale(&crate::scalar::Coeff::frac(-1, 2), &sy));
    let mut v_e = VerticalField::default();
    v_e.name = "V^e".into();
    v_e.table.insert(va, Expr::gen(sc.vol1));
    v_e.table.insert(deet, Expr::zero());

    // {Q(chi), id(A)} = id(D chi) with id(A) = B(A ; vol2)
    let got = bracket_with(&j, &v_a, &sc)?;
    let dchi = crate::calculus::interior::cov_param(chi, th.gen_named("A"), &sc.th)?;
    let expect = dchi.bullet(&Expr::gen(sc.vol2), &sy).map_err(PipelineError::Other)?;
    check("ec: {Q(chi), id(A)} = id(D chi)", &got, &expect, &sc.th, &mut out);

    // {Q(chi), id(e)} = id([eeT, chi]) with id(e) = B(vol1 ; eeT)
    let got = bracket_with(&j, &v_e, &sc)?;
    let br = Expr::gen(eet).bracket(&Expr::gen(chi), &sy).map_err(PipelineError::Other)?;
    let expect = Expr::gen(sc.vol1).bullet(&br, &sy).map_err(PipelineError::Other)?;
    check("ec: {Q(chi), id(e)} = id([eeT, chi])", &got, &expect, &sc.th, &mut out);
    Ok(out)
}

fn grav3d_checks(
    th: &Theory,
    el: &ElData,
    data: &std::collections::BTreeMap<String, NoetherData>,
) -> Result<Vec<GeneratorVerdict>, PipelineError> {
    let sc = scratch_theory(th);
    let sy = sc.th.sy.clone();
    let va = th.gen_named("δA");
    let ve = th.gen_named("δe");
    let e_gen = th.gen_named("e");
    let chi = th.sector("lorentz").params[0];
    let tau = th.sector("transl").params[0];
    let j_lor = data["lorentz"].current.clone();
    let j_tra = data["transl"].current.clone();
    let mut out = Vec::new();

    let mut v_a = VerticalField::default();
    v_a.name = "V^A".into();
    v_a.table.insert(va, Expr::zero());
    v_a.table.insert(ve, Expr::gen(sc.vol1).neg());
    let mut v_e = VerticalField::default();
    v_e.name = "V^e".into();
    v_e.table.insert(va, Expr::gen(sc.vol1).neg());
    v_e.table.insert(ve, Expr::zero());
    let _ = el;

    let idt = |x: &Expr| -> Expr { x.mul(&Expr::gen(sc.vol1), &sy).unwrap().tr().unwrap() };

    // {Q(chi), id(A)} = id(D chi)
    let got = bracket_with(&j_lor, &v_a, &sc)?;
    let dchi = crate::calculus::interior::cov_param(chi, th.gen_named("A"), &sc.th)?;
    check("grav3d: {Q(chi), id(A)} = id(D chi)", &got, &idt(&dchi), &sc.th, &mut out);

    // {Q(chi), id(e)} = id([e, chi])
    let got = bracket_with(&j_lor, &v_e, &sc)?;
    let br = Expr::gen(e_gen).bracket(&Expr::gen(chi), &sy).map_err(PipelineError::Other)?;
    check("grav3d: {Q(chi), id(e)} = id([e, chi])", &got, &idt(&br), &sc.th, &mut out);

    // {Q(tau), id(A)} = id(-eps il2 [e, tau])
    let got = bracket_with(&j_tra, &v_a, &sc)?;
    let eps = sy.consts_by_name["eps"];
    let il2 = sy.consts_by_name["il2"];
    let coeff = crate::scalar::Coeff::constant(eps)
        .mul(&crate::scalar::Coeff::constant(il2), &sy.consts)
        .neg();
    let br = Expr::gen(e_gen).bracket(&Expr::gen(tau), &sy).map_err(PipelineError::Other)?;
    check(
        "grav3d: {Q(tau), id(A)} = id(-eps/l2 [e, tau])",
        &got,
        &idt(&br.scale(&coeff, &sy)),
        &sc.th,
        &mut out,
    );

    // {Q(tau), id(e)} = id(D tau)
    let got = bracket_with(&j_tra, &v_e, &sc)?;
    let dtau = crate::calculus::interior::cov_param(tau, th.gen_named("A"), &sc.th)?;
    check("grav3d: {Q(tau), id(e)} = id(D tau)", &got, &idt(&dtau), &sc.th, &mut out);
    Ok(out)
}
