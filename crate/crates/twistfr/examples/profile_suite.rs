use std::time::Instant;
use twistfr::par::Parallelism;
use twistfr::suite::Suite;

fn main() {
    let s = Suite { mode: Parallelism::Sequential, seed: 0 };
    for (name, f) in [
        ("cybe", Box::new(|s: &Suite| s.check_cybe_suite()) as Box<dyn Fn(&Suite) -> Vec<_>>),
        ("out_table", Box::new(|s: &Suite| s.check_out_table())),
        ("patterns", Box::new(|s: &Suite| s.check_patterns())),
        ("agree(2)", Box::new(|s: &Suite| s.check_agree(2))),
        ("jacobi", Box::new(|s: &Suite| s.check_jacobi_suite())),
        ("equivariance", Box::new(|s: &Suite| s.check_equivariance_suite())),
        ("quantisation", Box::new(|s: &Suite| s.check_quantisation())),
        ("associativity", Box::new(|s: &Suite| s.check_associativity())),
        ("repvar", Box::new(|s: &Suite| s.check_repvar())),
        ("independence", Box::new(|s: &Suite| s.check_independence())),
    ] {
        let t0 = Instant::now();
        let r = f(&s);
        println!("{name}: {} reports in {:.2}s", r.len(), t0.elapsed().as_secs_f64());
    }
    let t0 = Instant::now();
    let r = s.check_agree(3);
    println!("agree(3): {} reports in {:.2}s", r.len(), t0.elapsed().as_secs_f64());
}
