//! Maximal CHSH violation against random measurement frames.

use spinring::bell::{concurrence_vs_violation, random_frame_max, violation_measure, Regime};
use spinring::model::ModelSpec;
use spinring::report::RingAnalysis;

fn main() -> spinring::Result<()> {
    let seed = 2024;
    let ring = RingAnalysis::new(&ModelSpec::xxx(4, 1.0), (1, 2))?;
    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>8}", "T", "B", "sampled", "C", "C from B", "violates");
    for t in [0.05, 0.5, 1.0, 2.0, 4.0] {
        let r = ring.at(t)?;
        let b = violation_measure(&r.rdm)?;
        let sampled = random_frame_max(&b.t_matrix, seed, 10_000);
        let c_from_b = concurrence_vs_violation(b.measure, Regime::Afm)?;
        println!(
            "{t:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>8}",
            b.measure, sampled, r.concurrence.wootters, c_from_b, b.violates
        );
    }
    Ok(())
}
