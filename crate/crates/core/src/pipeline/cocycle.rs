//! Appendix-C style cocycle verification: c(A; γγ') = c(A; γ) + c(A^γ; γ'),
//! consistency of the declared cocycle with the Lagrangian equivariance,
//! commutativity for abelian sectors and (non-)triviality of the cocycle.

use super::noether::PipelineError;
use crate::expr::{equals, normalize, substitute, Expr, Subst};
use crate::gauge::{compose_group, finite_gt, finite_subst};
use crate::theories::Theory;

#[derive(Debug, Clone)]
pub struct CocycleVerdict {
    pub sector: String,
    /// The declared cocycle reproduces R*_γ L - L.
    pub matches_lagrangian: bool,
    /// c(A; γγ') = c(A; γ) + c(A^γ; γ').
    pub composition: bool,
    /// Abelian commutativity c(A; γγ') = c(A; γ'γ) (when applicable).
    pub commutes: Option<bool>,
    /// Triviality c(A; γγ') = c(A; γ) + c(A; γ') (group morphism).
    pub trivial: Option<bool>,
    pub residue: Expr,
}

pub fn cocycle_check(th: &Theory, sector_name: &str) -> Result<CocycleVerdict, PipelineError> {
    let sy = &th.sy;
    let sector = th.sector(sector_name);
    let c = sector
        .cocycle
        .clone()
        .ok_or_else(|| PipelineError::Other(format!("sector `{sector_name}` has no cocycle")))?;

    // declared cocycle consistency with the Lagrangian
    let shift = normalize(&finite_gt(&th.lagrangian, sector, false, th).sub(&th.lagrangian), sy);
    let matches_lagrangian = equals(&shift, &c, sy);

    // composition: group or additive second element
    let (lhs, c_second, c_second_at_a) = if let (Some(g1), Some(g2)) = (&sector.group, &sector.group2)
    {
        let lhs = substitute(&c, &compose_group(g1, g2, th), sy);
        // c with γ-letters renamed to γ'
        let mut ren = Subst::new();
        ren.insert(g1.g, Expr::gen(g2.g));
        ren.insert(g1.ginv, Expr::gen(g2.ginv));
        ren.insert(g1.dg, Expr::gen(g2.dg));
        ren.insert(g1.vg, Expr::gen(g2.vg));
        ren.insert(g1.dvg, Expr::gen(g2.dvg));
        let c_second = substitute(&c, &ren, sy);
        // c(A^γ; γ'): rename γ -> γ' and substitute the finite table for the
        // field letters simultaneously
        let mut sub = finite_subst(sector, false);
        for (k, v) in ren.map {
            sub.insert(k, v);
        }
        let c_second_at_a = substitute(&c, &sub, sy);
        (lhs, c_second, c_second_at_a)
    } else if let (Some(a1), Some(a2)) = (&sector.additive, &sector.additive2) {
        // t -> t + t'
        let mut comp = Subst::new();
        comp.insert(a1.t, Expr::gen(a1.t).add(&Expr::gen(a2.t)));
        comp.insert(a1.dt, Expr::gen(a1.dt).add(&Expr::gen(a2.dt)));
        comp.insert(a1.vt, Expr::gen(a1.vt).add(&Expr::gen(a2.vt)));
        comp.insert(a1.dvt, Expr::gen(a1.dvt).add(&Expr::gen(a2.dvt)));
        let lhs = substitute(&c, &comp, sy);
        let mut ren = Subst::new();
        ren.insert(a1.t, Expr::gen(a2.t));
        ren.insert(a1.dt, Expr::gen(a2.dt));
        ren.insert(a1.vt, Expr::gen(a2.vt));
        ren.insert(a1.dvt, Expr::gen(a2.dvt));
        let c_second = substitute(&c, &ren, sy);
        let mut sub = finite_subst(sector, false);
        for (k, v) in ren.map {
            sub.insert(k, v);
        }
        let c_second_at_a = substitute(&c, &sub, sy);
        (lhs, c_second, c_second_at_a)
    } else {
        return Err(PipelineError::Other(format!(
            "sector `{sector_name}` has no second group element for the cocycle check"
        )));
    };

    let lhs = crate::calculus::deriv::fix_dstars(&lhs, th)?;
    let c_second_at_a = crate::calculus::deriv::fix_dstars(&c_second_at_a, th)?;
    let c_second = crate::calculus::deriv::fix_dstars(&c_second, th)?;
    let rhs = normalize(&c.add(&c_second_at_a), sy);
    let residue = normalize(&lhs.sub(&rhs), sy);
    let composition = residue.terms.is_empty();

    // abelian commutativity: swap the two elements in the composition
    let commutes = if sector.abelian {
        let swapped = if let (Some(a1), Some(a2)) = (&sector.additive, &sector.additive2) {
            let mut comp = Subst::new();
            comp.insert(a1.t, Expr::gen(a2.t).add(&Expr::gen(a1.t)));
            comp.insert(a1.dt, Expr::gen(a2.dt).add(&Expr::gen(a1.dt)));
            comp.insert(a1.vt, Expr::gen(a2.vt).add(&Expr::gen(a1.vt)));
            comp.insert(a1.dvt, Expr::gen(a2.dvt).add(&Expr::gen(a1.dvt)));
            substitute(&c, &comp, sy)
        } else {
            lhs.clone()
        };
        Some(equals(&lhs, &crate::calculus::deriv::fix_dstars(&swapped, th)?, sy))
    } else {
        None
    };

    // triviality: c(A; γγ') = c(A; γ) + c(A; γ')
    let trivial = Some(equals(&lhs, &normalize(&c.add(&c_second), sy), sy));

    Ok(CocycleVerdict {
        sector: sector_name.to_string(),
        matches_lagrangian,
        composition,
        commutes,
        trivial,
        residue,
    })
}
