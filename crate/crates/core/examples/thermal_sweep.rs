//! Partition function, energy and magnetization over temperature.

use spinring::model::ModelSpec;
use spinring::spectral::diagonalize_model;
use spinring::thermo::{check_derivatives, Ensemble};

fn main() -> spinring::Result<()> {
    let spec = ModelSpec::xxx(6, 1.0).with_field(0.5);
    let sd = diagonalize_model(&spec)?;
    let ens = Ensemble::new(&sd);

    println!("{:>8} {:>14} {:>14} {:>14}", "T", "ln Z", "U/N", "M/N");
    for t in [0.0, 0.1, 0.3, 1.0, 3.0, 10.0, f64::INFINITY] {
        let p = ens.point(t)?;
        println!("{t:>8} {:>14.8} {:>14.8} {:>14.8}", p.log_z, p.u_per_site, p.m_per_site);
    }

    let d = check_derivatives(&spec, 1.0, 1e-4)?;
    println!("finite-difference residuals at T=1: U {:.1e}, M {:.1e}", d.u_residual, d.m_residual);
    Ok(())
}
