//! Temperature above which neighbouring spins stop being entangled.

use spinring::model::ModelSpec;
use spinring::spectral::diagonalize_model;
use spinring::threshold::find_threshold;

fn main() -> spinring::Result<()> {
    for n in 2..=9 {
        let spec = ModelSpec::xxx(n, 1.0);
        let r = find_threshold(&spec, &diagonalize_model(&spec)?)?;
        match r.t_c {
            Some(t) => println!("N={n}: T_c = {t:.8}  ({} bisection steps)", r.iterations),
            None => println!("N={n}: {:?}", r.status),
        }
    }
    println!("8/ln 3 = {:.8}", 8.0 / 3f64.ln());
    Ok(())
}
