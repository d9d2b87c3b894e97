use presym_core::pipeline::run_report;
use presym_core::theories::builtin;

#[test]
fn probe_reports() {
    for name in ["ym", "cs"] {
        let th = builtin(name).unwrap();
        match run_report(&th) {
            Ok(rep) => {
                println!("=== {name} ===");
                println!("E      = {}", rep.e);
                println!("theta  = {}", rep.theta);
                println!("Theta  = {}", rep.big_theta);
                for c in &rep.checks {
                    println!("[{}] {}  {}", if c.pass { "ok" } else { "FAIL" }, c.name,
                             if c.pass { String::new() } else { c.residue.clone() });
                }
            }
            Err(e) => println!("=== {name} === PIPELINE ERROR: {e}"),
        }
    }
}
