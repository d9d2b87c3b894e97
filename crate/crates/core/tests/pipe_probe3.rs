use presym_core::expr::{normalize, parse, render};
use presym_core::gauge::finite_gt;
use presym_core::pipeline::*;
use presym_core::theories::builtin;

#[test]
fn probe_cs_components() {
    let th = builtin("cs").unwrap();
    let sy = &th.sy;
    let el = derive_el(&th).unwrap();
    let nd = noether(&th, "su", &el).unwrap();
    let sector = th.sector("su");
    let w = parse("δg g⁻¹", sy).unwrap();
    println!("q_tilde_prim = {}", render(&nd.q_tilde_prim, sy));
    let qtw = at_param(&nd.q_tilde_prim, sector.params[0], &w, &th).unwrap();
    println!("qtilde@w = {}", render(&qtw, sy));
    let bw = at_param(&nd.beta, sector.params[0], &w, &th).unwrap();
    println!("beta@w = {}", render(&bw, sy));
    let ew = insert_param(&el.e, sector, &w, &th);
    println!("E@w = {}", render(&ew, sy));
    let b = normalize(&finite_gt(&el.theta, sector, false, &th).sub(&el.theta), sy);
    println!("b = {}", render(&b, sy));
    // brute minus theta
    let brute = finite_gt(&el.theta, sector, true, &th);
    let shift = normalize(&brute.sub(&el.theta), sy);
    println!("brute-shift = {}", render(&shift, sy));
    // expected: d(qtw) - ew + bw + b + b_pushed
    let dqtw = presym_core::calculus::exterior_d(&qtw, &th).unwrap();
    println!("d(qtilde@w) = {}", render(&dqtw, sy));
    // b_pushed: substitute δA -> D(w)
    let dw = presym_core::calculus::exterior_d(&w, &th).unwrap();
    let a = parse("A", sy).unwrap();
    let dcov = normalize(&dw.add(&a.bracket(&w, sy).unwrap()), sy);
    println!("D(w) = {}", render(&dcov, sy));
    let mut sub = presym_core::expr::Subst::new();
    sub.insert(th.gen_named("δA"), dcov);
    let b_pushed = presym_core::expr::substitute(&b, &sub, sy);
    println!("b_pushed = {}", render(&b_pushed, sy));
    let structural = normalize(&dqtw.sub(&ew).add(&bw).add(&b).add(&b_pushed), sy);
    let diff = normalize(&shift.sub(&structural), sy);
    println!("RESIDUE = {}", render(&diff, sy));
}
