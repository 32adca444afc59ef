//! Ground state of a 14-site ring through the σz-sector path, on one thread.
//!
//!     cargo run --release --example large_ring -- 14

use std::time::Instant;

use spinring::model::ModelSpec;
use spinring::spectral::diagonalize_spec_sectored;

fn main() -> spinring::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(14);
    faer::set_global_parallelism(faer::Par::Seq);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("thread pool");

    let spec = ModelSpec::xxx(n, 1.0);
    let start = Instant::now();
    let sd = pool.install(|| diagonalize_spec_sectored(&spec))?;
    let elapsed = start.elapsed();

    println!("N = {n}, dim = {}", sd.dim());
    println!("E_0 = {:.12}  (degeneracy {})", sd.ground_energy(), sd.ground_degeneracy());
    println!("E_0 / N = {:.12}", sd.ground_energy() / n as f64);
    println!("diagonalized in {:.2?}", elapsed);
    Ok(())
}
