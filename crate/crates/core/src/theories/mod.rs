//! Theory declarations: the DSL parser and the built-in catalog.

pub mod catalog;
pub mod dsl;
pub mod theory;

pub use catalog::{builtin, builtin_source, BUILTIN_NAMES};
pub use dsl::{parse_theory, DslError};
pub use theory::{AdditiveParam, Dressing, OracleRule, Sector, SpecialOracle, Theory};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{exterior_d, variational_d};
    use crate::expr::{equals, parse, Expr};

    #[test]
    fn catalog_loads() {
        for name in BUILTIN_NAMES {
            let th = builtin(name).unwrap();
            assert_eq!(&th.id, name);
        }
        assert!(builtin("nope").is_err());
    }

    #[test]
    fn catalog_d_squared_and_commutation() {
        for name in BUILTIN_NAMES {
            let th = builtin(name).unwrap();
            for (i, info) in th.sy.gens.iter().enumerate() {
                let g = i as u32;
                if !th.d_rules.contains_key(&g) || !th.vd_rules.contains_key(&g) {
                    continue;
                }
                let e = Expr::gen(g);
                let dd = exterior_d(&exterior_d(&e, &th).unwrap(), &th).unwrap();
                assert!(
                    dd.terms.is_empty(),
                    "{name}: d²({}) = {}",
                    info.name,
                    crate::expr::render(&dd, &th.sy)
                );
                let vv = variational_d(&variational_d(&e, &th).unwrap(), &th).unwrap();
                assert!(
                    vv.terms.is_empty(),
                    "{name}: δ²({}) = {}",
                    info.name,
                    crate::expr::render(&vv, &th.sy)
                );
                let dv = exterior_d(&variational_d(&e, &th).unwrap(), &th).unwrap();
                let vd = variational_d(&exterior_d(&e, &th).unwrap(), &th).unwrap();
                assert!(
                    equals(&dv, &vd, &th.sy),
                    "{name}: dδ != δd on {}: {} vs {}",
                    info.name,
                    crate::expr::render(&dv, &th.sy),
                    crate::expr::render(&vd, &th.sy)
                );
            }
        }
    }

    #[test]
    fn catalog_goldens_parse() {
        for name in BUILTIN_NAMES {
            let th = builtin(name).unwrap();
            for (key, text) in &th.golden {
                parse(text, &th.sy).unwrap_or_else(|e| {
                    panic!("{name}: golden `{key}` does not parse: {e}")
                });
            }
        }
    }

    #[test]
    fn finite_tables_linearize_to_vertical_tables() {
        use crate::gauge::check_finite_linearization;
        for name in BUILTIN_NAMES {
            let th = builtin(name).unwrap();
            for sname in th.sector_order.clone() {
                let sector = th.sector(&sname);
                if sector.finite.is_empty() || sector.stripped {
                    continue;
                }
                check_finite_linearization(&th, &sname)
                    .unwrap_or_else(|e| panic!("{name}: {e}"));
            }
        }
    }

    #[test]
    fn builtin_lagrangians_match_paper_forms() {
        let cs = builtin("cs").unwrap();
        let l2 = parse("Tr(A (F - A A)) + 2/3 Tr(A A A)", &cs.sy).unwrap();
        assert!(equals(&cs.lagrangian, &l2, &cs.sy));
    }
}
