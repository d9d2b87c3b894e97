//! Bigraded symbolic expression core: construction, canonical normalization
//! and equality of Lie-algebra/group-valued form expressions under trace and
//! bullet pairings.

pub mod display;
#[allow(clippy::module_inception)]
pub mod expr;
pub mod normalize;
pub mod parse;
pub mod subst;
pub mod symbols;
pub mod word;

pub use display::{render, render_word};
pub use expr::{Body, Expr, Term};
pub use normalize::{equals, normalize};
pub use parse::parse;
pub use subst::{substitute, substitute_dual, Subst};
pub use symbols::{Bidegree, Derived, GenId, GenInfo, GenKind, GroupLetters, Symbols};
pub use word::Letter;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Coeff;

    fn toy() -> (Symbols, GenId, GenId) {
        let mut sy = Symbols::new(4);
        let x = sy.add_gen(
            "X",
            Bidegree::new(0, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        let y = sy.add_gen(
            "Y",
            Bidegree::new(0, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        (sy, x, y)
    }

    #[test]
    fn trace_of_commutator_of_scalars_vanishes() {
        let (sy, x, y) = toy();
        let e = Expr::gen(x).bracket(&Expr::gen(y), &sy).unwrap().tr().unwrap();
        assert!(normalize(&e, &sy).terms.is_empty());
    }

    #[test]
    fn cyclicity_merges_rotations() {
        let (sy, x, y) = toy();
        let xy = Expr::gen(x).mul(&Expr::gen(y), &sy).unwrap().tr().unwrap();
        let yx = Expr::gen(y).mul(&Expr::gen(x), &sy).unwrap().tr().unwrap();
        assert!(equals(&xy, &yx, &sy));
    }

    #[test]
    fn odd_odd_swap_sign() {
        // X of bidegree (1,0): Tr(X X) has rotation sign (-1)^{1*1} = -1, so
        // the trace vanishes; for bidegree (1,1) the double sign is +1.
        let mut sy = Symbols::new(4);
        let a = sy.add_gen(
            "a",
            Bidegree::new(1, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        let b = sy.add_gen(
            "b",
            Bidegree::new(1, 1),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        let taa = Expr::gen(a).mul(&Expr::gen(a), &sy).unwrap().tr().unwrap();
        assert!(normalize(&taa, &sy).terms.is_empty());
        let tbb = Expr::gen(b).mul(&Expr::gen(b), &sy).unwrap().tr().unwrap();
        assert_eq!(normalize(&tbb, &sy).terms.len(), 1);
    }

    #[test]
    fn bracket_of_odd_element_doubles() {
        let mut sy = Symbols::new(4);
        let a = sy.add_gen(
            "a",
            Bidegree::new(1, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        let br = Expr::gen(a).bracket(&Expr::gen(a), &sy).unwrap();
        let two_aa = Expr::gen(a).mul(&Expr::gen(a), &sy).unwrap().scale_int(2, &sy);
        assert!(equals(&br, &two_aa, &sy));
    }

    #[test]
    fn group_inverse_cancels() {
        let mut sy = Symbols::new(4);
        let g = sy.add_group("g", "SU");
        let a = sy.add_gen(
            "A",
            Bidegree::new(1, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        // g g⁻¹ A g g⁻¹ -> A
        let w = Expr::word(vec![
            Letter::Gen(g.g),
            Letter::Gen(g.ginv),
            Letter::Gen(a),
            Letter::Gen(g.g),
            Letter::Gen(g.ginv),
        ]);
        assert!(equals(&w, &Expr::gen(a), &sy));
    }

    #[test]
    fn trace_wraparound_conjugation_cancels() {
        let mut sy = Symbols::new(4);
        let g = sy.add_group("g", "SU");
        let a = sy.add_gen(
            "A",
            Bidegree::new(1, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        let b = sy.add_gen(
            "Bm",
            Bidegree::new(2, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        // Tr(g⁻¹ A g g⁻¹ B g) == Tr(A B)
        let w = Expr::word(vec![
            Letter::Gen(g.ginv),
            Letter::Gen(a),
            Letter::Gen(g.g),
            Letter::Gen(g.ginv),
            Letter::Gen(b),
            Letter::Gen(g.g),
        ])
        .tr()
        .unwrap();
        let ab = Expr::word(vec![Letter::Gen(a), Letter::Gen(b)]).tr().unwrap();
        assert!(equals(&w, &ab, &sy));
    }

    #[test]
    fn hodge_pairing_symmetry() {
        // Tr(A *(B)) == Tr(B *(A)) when p_A == p_B (both q=0 here).
        let mut sy = Symbols::new(4);
        let a = sy.add_gen(
            "A",
            Bidegree::new(2, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        let b = sy.add_gen(
            "Bm",
            Bidegree::new(2, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        let lhs = Expr::word(vec![Letter::Gen(a), Letter::Star(vec![Letter::Gen(b)])])
            .tr()
            .unwrap();
        let rhs = Expr::word(vec![Letter::Gen(b), Letter::Star(vec![Letter::Gen(a)])])
            .tr()
            .unwrap();
        assert!(equals(&lhs, &rhs, &sy));
    }

    #[test]
    fn star_hoists_zero_forms() {
        let (sy, x, _) = toy();
        let mut sy = sy;
        let f = sy.add_gen(
            "F",
            Bidegree::new(2, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        // *(X F) == X *(F)
        let lhs = Expr::word(vec![Letter::Star(vec![Letter::Gen(x), Letter::Gen(f)])]);
        let rhs = Expr::word(vec![Letter::Gen(x), Letter::Star(vec![Letter::Gen(f)])]);
        assert!(equals(&lhs, &rhs, &sy));
    }

    #[test]
    fn bullet_swap_and_symmetric_kill() {
        let mut sy = Symbols::new(4);
        let r = sy.add_gen(
            "R",
            Bidegree::new(2, 0),
            GenKind::Matrix { symmetric: false },
            Derived::Base,
        );
        let w = sy.add_gen(
            "eeT",
            Bidegree::new(2, 0),
            GenKind::Matrix { symmetric: false },
            Derived::Base,
        );
        let s = sy.add_gen(
            "S",
            Bidegree::new(2, 0),
            GenKind::Matrix { symmetric: true },
            Derived::Base,
        );
        let rw = Expr::gen(r).bullet(&Expr::gen(w), &sy).unwrap();
        let wr = Expr::gen(w).bullet(&Expr::gen(r), &sy).unwrap();
        assert!(equals(&rw, &wr, &sy)); // (2,0)x(2,0): swap sign +1
        let sw = Expr::gen(s).bullet(&Expr::gen(w), &sy).unwrap();
        assert!(normalize(&sw, &sy).terms.is_empty());
    }

    #[test]
    fn bullet_invariance_span() {
        // P([a,x], y) + P(x, [a,y]) == 0 for 0-form lie letter a.
        let mut sy = Symbols::new(4);
        let a = sy.add_gen(
            "a",
            Bidegree::new(0, 0),
            GenKind::Lie { algebra: "so".into(), commuting: false },
            Derived::Base,
        );
        let x = sy.add_gen(
            "x",
            Bidegree::new(2, 0),
            GenKind::Matrix { symmetric: false },
            Derived::Base,
        );
        let y = sy.add_gen(
            "y",
            Bidegree::new(2, 0),
            GenKind::Matrix { symmetric: false },
            Derived::Base,
        );
        let ax = Expr::gen(a).bracket(&Expr::gen(x), &sy).unwrap();
        let ay = Expr::gen(a).bracket(&Expr::gen(y), &sy).unwrap();
        let sum = ax
            .bullet(&Expr::gen(y), &sy)
            .unwrap()
            .add(&Expr::gen(x).bullet(&ay, &sy).unwrap());
        assert!(normalize(&sum, &sy).terms.is_empty());
    }

    #[test]
    fn normalize_idempotent_smoke() {
        let (sy, x, y) = toy();
        let e = Expr::gen(x)
            .mul(&Expr::gen(y), &sy)
            .unwrap()
            .tr()
            .unwrap()
            .scale(&Coeff::frac(3, 2), &sy);
        let n1 = normalize(&e, &sy);
        let n2 = normalize(&n1, &sy);
        assert_eq!(n1, n2);
    }

    #[test]
    fn render_parse_roundtrip() {
        let mut sy = Symbols::new(4);
        let _ = sy.add_gen(
            "A",
            Bidegree::new(1, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        let _ = sy.add_gen(
            "F",
            Bidegree::new(2, 0),
            GenKind::Lie { algebra: "su".into(), commuting: false },
            Derived::Base,
        );
        sy.add_const("m2", crate::scalar::ConstKind::Free);
        let src = "1/2 Tr(F *(F)) - m2 Tr(A *(A))";
        let e = parse(src, &sy).unwrap();
        let n = normalize(&e, &sy);
        let txt = render(&n, &sy);
        let back = parse(&txt, &sy).unwrap();
        assert!(equals(&n, &back, &sy));
    }
}
