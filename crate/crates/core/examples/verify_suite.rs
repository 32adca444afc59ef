//! The invariant suite behind `spinring verify`, run on the default grid.

use spinring::cli::verify::{default_cases, verify_cases};

fn main() {
    let report = verify_cases(&default_cases(), None);
    for c in &report.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        println!("{mark} {:<26} {:.2e} / {:.0e}  over {} cases", c.name, c.residual, c.tolerance, c.cases);
    }
    std::process::exit(if report.passed() { 0 } else { 1 });
}
