//! Reduced state of two sites and its correlation functions.

use spinring::model::ModelSpec;
use spinring::spectral::diagonalize_model;
use spinring::twoqubit::{check_element_relations, thermal_pair, CorrelationSet};

fn main() -> spinring::Result<()> {
    let spec = ModelSpec::xxz(5, 1.0, 0.5).with_field(0.3);
    let sd = diagonalize_model(&spec)?;

    for (i, j) in [(1, 2), (1, 3)] {
        let rdm = thermal_pair(&sd, 0.8, i, j)?;
        let cs = CorrelationSet::from_rdm(&rdm);
        println!("pair ({i},{j})");
        for row in &rdm.matrix {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.5}{:+.5}i", z.re, z.im)).collect();
            println!("  {}", cells.join("  "));
        }
        println!("  G_xx {:+.6}  G_yy {:+.6}  G_zz {:+.6}  M/N {:+.6}", cs.xx(), cs.yy(), cs.zz(), cs.m_per_site);
        println!("  X-shaped: {}  element relations residual {:.1e}", rdm.is_x_form(), check_element_relations(&rdm, &cs).max());
    }
    Ok(())
}
