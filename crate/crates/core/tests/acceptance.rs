use gradedlie::selftest::{run_all, DEFAULT_SEED};

fn main() {
    let criteria = run_all(DEFAULT_SEED);
    for c in &criteria {
        println!(
            "{} {:<20} {:>8.2}s / {:>3}s  {}  [{}]",
            if c.passed() { "PASS" } else { "FAIL" },
            c.id,
            c.elapsed.as_secs_f64(),
            c.budget.as_secs(),
            c.description,
            c.detail
        );
    }
    let failed = criteria.iter().filter(|c| !c.passed()).count();
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
