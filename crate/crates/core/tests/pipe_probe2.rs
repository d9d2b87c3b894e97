use presym_core::calculus::IntExpr;
use presym_core::expr::render;
use presym_core::gauge::finite_gt;
use presym_core::pipeline::*;
use presym_core::theories::builtin;

#[test]
fn probe_cs_gt() {
    let th = builtin("cs").unwrap();
    let sy = &th.sy;
    let el = derive_el(&th).unwrap();
    let nd = noether(&th, "su", &el).unwrap();
    let sector = th.sector("su");
    let gt = gt_presymplectic(&th, "su", &el, Some(&nd), Regime::CEquivariant).unwrap();
    // brute
    let theta_brute = finite_gt(&el.theta, sector, true, &th);
    let structural = IntExpr::bulk(el.theta.clone()).add(&gt.theta_shift);
    let diff = IntExpr::bulk(theta_brute.clone())
        .sub(&structural);
    let folded = diff.folded(&th).unwrap();
    println!("theta diff = {}", render(&folded, sy));
    let big_brute = finite_gt(&el.big_theta, sector, true, &th);
    let big_structural = IntExpr::bulk(el.big_theta.clone()).add(&gt.big_theta_shift);
    let bdiff = IntExpr::bulk(big_brute).sub(&big_structural).folded(&th).unwrap();
    println!("Theta diff = {}", render(&bdiff, sy));
    let e_brute = finite_gt(&el.e, sector, true, &th);
    let ediff = presym_core::expr::normalize(
        &e_brute.sub(&el.e.add(&gt.e_shift)), sy);
    println!("E diff = {}", render(&ediff, sy));
}
