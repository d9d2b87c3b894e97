//! Variational bicomplex calculus: the two exterior derivatives, interior
//! products, Lie derivative on field space, covariant derivative,
//! integration by parts and exactness extraction.

pub mod deriv;
pub mod exact;
pub mod integral;
pub mod interior;

pub use deriv::{
    covariant_d_adjoint, covariant_d_left, exterior_d, variational_d, CalcError, Grading,
};
pub use exact::{extract_d_exact, extract_vard_exact, split_euler_lagrange, SplitResult};
pub use integral::IntExpr;
pub use interior::{interior, lie_derivative, VerticalField};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{equals, parse, Expr, GenKind};
    use crate::theories::Theory;

    /// Yang-Mills-flavoured test theory: su-valued A with curvature F.
    fn ym_like(dim: i32) -> Theory {
        let mut th = Theory::new("test-ym", dim);
        let a = th.add_gen("A", 1, 0, GenKind::Lie { algebra: "su".into(), commuting: false });
        let f = th.add_gen("F", 2, 0, GenKind::Lie { algebra: "su".into(), commuting: false });
        let (va, _dva) = th.add_var_letters(a);
        let sy = th.sy.clone();
        // d A = F - A A ; d F = [F, A]
        th.d_rules.insert(a, parse("F - A A", &sy).unwrap());
        th.d_rules.insert(f, parse("[F, A]", &sy).unwrap());
        // δF = dδA + [A, δA]
        th.vd_rules.insert(f, parse("dδA + [A, δA]", &sy).unwrap());
        let _ = va;
        th
    }

    fn chi_field(th: &mut Theory) -> VerticalField {
        let _chi = th.add_param("chi", "su", false);
        let sy = th.sy.clone();
        let va = th.gen_named("δA");
        let mut v = VerticalField::default();
        v.name = "chi^v".into();
        v.table.insert(va, parse("dchi + [A, chi]", &sy).unwrap());
        v
    }

    #[test]
    fn d_squared_zero_on_all_letters() {
        let th = ym_like(4);
        for name in ["A", "F", "δA", "dδA"] {
            let g = th.gen_named(name);
            let dd = exterior_d(&exterior_d(&Expr::gen(g), &th).unwrap(), &th).unwrap();
            assert!(dd.terms.is_empty(), "d²({name}) = {}", crate::expr::render(&dd, &th.sy));
        }
    }

    #[test]
    fn vard_squared_zero_and_commutes_with_d() {
        let th = ym_like(4);
        for name in ["A", "F", "δA", "dδA"] {
            let g = th.gen_named(name);
            let e = Expr::gen(g);
            let vv = variational_d(&variational_d(&e, &th).unwrap(), &th).unwrap();
            assert!(vv.terms.is_empty(), "δ²({name}) nonzero");
            let dv = exterior_d(&variational_d(&e, &th).unwrap(), &th).unwrap();
            let vd = variational_d(&exterior_d(&e, &th).unwrap(), &th).unwrap();
            assert!(equals(&dv, &vd, &th.sy), "dδ != δd on {name}");
        }
    }

    #[test]
    fn maurer_cartan_from_group_rules() {
        let mut th = ym_like(4);
        let g = th.add_group("g", "SU");
        let sy = th.sy.clone();
        // d(g⁻¹ dg) = -(g⁻¹ dg)(g⁻¹ dg)
        let ginv_dg = parse("g⁻¹ dg", &sy).unwrap();
        let lhs = exterior_d(&ginv_dg, &th).unwrap();
        let rhs = ginv_dg.mul(&ginv_dg, &sy).unwrap().neg();
        assert!(equals(&lhs, &rhs, &sy));
        // δ(δg g⁻¹) = (δg g⁻¹)(δg g⁻¹)
        let vgg = parse("δg g⁻¹", &sy).unwrap();
        let lhs2 = variational_d(&vgg, &th).unwrap();
        let rhs2 = vgg.mul(&vgg, &sy).unwrap();
        assert!(equals(&lhs2, &rhs2, &sy));
        let _ = g;
    }

    #[test]
    fn covariant_d_squared_is_curvature_bracket() {
        let mut th = ym_like(4);
        let _chi = th.add_param("chi", "su", false);
        let sy = th.sy.clone();
        let a = parse("A", &sy).unwrap();
        let chi = parse("chi", &sy).unwrap();
        let dchi = covariant_d_adjoint(&chi, &a, &th).unwrap();
        let ddchi = covariant_d_adjoint(&dchi, &a, &th).unwrap();
        let expect = parse("[F, chi]", &sy).unwrap();
        assert!(equals(&ddchi, &expect, &sy));
    }

    #[test]
    fn ym_split_matches_paper() {
        // δL_YM with L = 1/2 Tr(F *(F)) splits into bulk Tr(δA D*(F)) and
        // boundary Tr(δA *(F)).
        let th = ym_like(4);
        let sy = th.sy.clone();
        let l = parse("1/2 Tr(F *(F))", &sy).unwrap();
        let dl = variational_d(&l, &th).unwrap();
        let split = split_euler_lagrange(&dl, &th).unwrap();
        let theta_expect = parse("Tr(δA *(F))", &sy).unwrap();
        assert!(equals(&split.boundary, &theta_expect, &sy), "theta_YM mismatch");
        let e_expect = parse("Tr(δA (d*(F) + A *(F) - *(F) A))", &sy).unwrap();
        assert!(equals(&split.bulk, &e_expect, &sy), "E_YM mismatch");
        // round trip: input = bulk + d(boundary)
        let recon = split.bulk.add(&exterior_d(&split.boundary, &th).unwrap());
        assert!(equals(&dl, &recon, &sy));
    }

    #[test]
    fn cs_split_matches_paper() {
        // 3D Chern-Simons: L = Tr(A dA + 2/3 A³); the d-rule writes dA as
        // F - A². δL = 2 Tr(δA F) + d Tr(δA A).
        let th = ym_like(3);
        let sy = th.sy.clone();
        let l = parse("Tr(A (F - A A) + 2/3 A A A)", &sy).unwrap();
        let dl = variational_d(&l, &th).unwrap();
        let split = split_euler_lagrange(&dl, &th).unwrap();
        assert!(equals(&split.bulk, &parse("2 Tr(δA F)", &sy).unwrap(), &sy), "E_CS mismatch");
        assert!(
            equals(&split.boundary, &parse("Tr(δA A)", &sy).unwrap(), &sy),
            "theta_CS mismatch: got {}",
            crate::expr::render(&split.boundary, &sy)
        );
    }

    #[test]
    fn interior_is_antiderivation_and_gives_noether_current() {
        let mut th = ym_like(4);
        let v = chi_field(&mut th);
        let sy = th.sy.clone();
        // iota(Tr(δA *(F))) = Tr(Dchi *(F))
        let theta = parse("Tr(δA *(F))", &sy).unwrap();
        let j = interior(&theta, &v, &th).unwrap();
        let expect = parse("Tr((dchi + A chi - chi A) *(F))", &sy).unwrap();
        assert!(equals(&j, &expect, &sy));
        // q=0 input contracts to zero
        let z = interior(&parse("A", &sy).unwrap(), &v, &th).unwrap();
        assert!(z.terms.is_empty());
        // iota² = 0 on Tr(δA δA)-like input
        let theta2 = parse("Tr(δA δA)", &sy).unwrap();
        let i1 = interior(&theta2, &v, &th).unwrap();
        let i2 = interior(&i1, &v, &th).unwrap();
        assert!(i2.terms.is_empty());
    }

    #[test]
    fn lie_derivative_of_invariant_lagrangian_vanishes() {
        let mut th = ym_like(4);
        let v = chi_field(&mut th);
        let sy = th.sy.clone();
        let l = parse("1/2 Tr(F *(F))", &sy).unwrap();
        let out = lie_derivative(&l, &v, &th).unwrap();
        assert!(
            out.terms.is_empty(),
            "L_chi L_YM = {}",
            crate::expr::render(&out, &sy)
        );
    }

    #[test]
    fn mym_anomaly_is_mass_term() {
        let mut th = ym_like(4);
        let v = chi_field(&mut th);
        th.sy.add_const("m2", crate::scalar::ConstKind::Free);
        let sy = th.sy.clone();
        let l = parse("1/2 Tr(F *(F)) - 1/2 m2 Tr(A *(A))", &sy).unwrap();
        let alpha = lie_derivative(&l, &v, &th).unwrap();
        let expect = parse("- m2 Tr(A *(dchi))", &sy).unwrap();
        assert!(
            equals(&alpha, &expect, &sy),
            "alpha_mYM = {}",
            crate::expr::render(&alpha, &sy)
        );
        // The mYM anomaly is NOT d-exact (hypothesis 1 fails; the theory
        // goes through the other-extreme pipeline).
        assert!(extract_d_exact(&alpha, &th).unwrap().is_none());
    }

    #[test]
    fn cs_anomaly_extraction() {
        // alpha_CS = L_chi L_CS = d Tr(A dchi); the peeler finds a beta.
        let mut th = ym_like(3);
        let v = chi_field(&mut th);
        let sy = th.sy.clone();
        let l = parse("Tr(A (F - A A) + 2/3 A A A)", &sy).unwrap();
        let alpha = lie_derivative(&l, &v, &th).unwrap();
        let expect = exterior_d(&parse("Tr(A dchi)", &sy).unwrap(), &th).unwrap();
        assert!(
            equals(&alpha, &expect, &sy),
            "alpha_CS = {}",
            crate::expr::render(&alpha, &sy)
        );
        let beta = extract_d_exact(&alpha, &th).unwrap().expect("beta_CS not found");
        let back = exterior_d(&beta, &th).unwrap();
        assert!(equals(&back, &alpha, &sy));
    }

    #[test]
    fn extractor_rejects_bulk_field_equation() {
        let th = ym_like(3);
        let sy = th.sy.clone();
        let e = parse("Tr(δA F)", &sy).unwrap();
        assert!(extract_d_exact(&e, &th).unwrap().is_none());
    }

    #[test]
    fn cs_theta_variational_d() {
        // Θ_CS = δ Tr(δA A) = -Tr(δA δA)
        let th = ym_like(3);
        let sy = th.sy.clone();
        let theta = parse("Tr(δA A)", &sy).unwrap();
        let big = variational_d(&theta, &th).unwrap();
        let expect = parse("- Tr(δA δA)", &sy).unwrap();
        assert!(equals(&big, &expect, &sy));
        assert!(!big.terms.is_empty(), "Tr(δA δA) must not vanish");
    }

    #[test]
    fn ym_presymplectic_2form() {
        // Θ_YM = δ Tr(δA *(F)) = -Tr(δA *(δF))
        let th = ym_like(4);
        let sy = th.sy.clone();
        let theta = parse("Tr(δA *(F))", &sy).unwrap();
        let big = variational_d(&theta, &th).unwrap();
        let expect = parse("- Tr(δA *(dδA + [A, δA]))", &sy).unwrap();
        assert!(
            equals(&big, &expect, &sy),
            "Theta_YM = {}",
            crate::expr::render(&big, &sy)
        );
    }
}
