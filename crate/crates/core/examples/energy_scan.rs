//! u(N) = U/(-NJ) against ring size. Ground-state values above 1 mean the
//! ground state has entangled neighbours.

use spinring::threshold::u_of_n_scan;

fn main() -> spinring::Result<()> {
    let sizes: Vec<usize> = (2..=10).collect();
    let ground = u_of_n_scan(&sizes, 1.0, 0.0)?;
    let warm = u_of_n_scan(&sizes, 1.0, 1.0)?;
    println!("{:>3} {:>12} {:>12}", "N", "u(N), T=0", "u(N), T=1");
    for (g, w) in ground.iter().zip(&warm) {
        println!("{:>3} {:>12.8} {:>12.8}", g.n, g.u, w.u);
    }
    Ok(())
}
