//! Threshold temperature of pairwise entanglement on antiferromagnetic rings.

use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::{concurrence_wootters, concurrence_xxx_energy, CLAMP_TOL};
use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::spectral::{model_eigenvalues, SpectralDecomposition};
use crate::thermo::{beta_of, mean_energy, probabilities_at_beta, Ensemble};
use crate::twoqubit::PairEnsemble;

pub const T_FLOOR: f64 = 1e-6;
pub const T_CEILING: f64 = 1e6;
pub const RELATIVE_WIDTH: f64 = 1e-8;
/// Relative offset from `t_c` for the two-sided concurrence check.
pub const CHECK_OFFSET: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdStatus {
    Found,
    NeverEntangled,
    EntangledEverywhereInRange,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub t_c: Option<f64>,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// `U/(−NJ)` at `t_c` (at the floor temperature when none is found).
    pub u_of_n: f64,
    pub status: ThresholdStatus,
    /// Wootters concurrence of the (1,2) pair at `t_c(1 − 10⁻³)` and
    /// `t_c(1 + 10⁻³)`.
    pub concurrence_below: Option<f64>,
    pub concurrence_above: Option<f64>,
}

fn energy_at(ens: &Ensemble<'_>, t: f64) -> Result<f64> {
    let sd = ens.spectrum();
    let beta = beta_of(t)?;
    let (p, _) = probabilities_at_beta(sd.eigenvalues(), sd.ground_degeneracy(), beta);
    Ok(mean_energy(sd.eigenvalues(), &p))
}

pub fn find_threshold(spec: &ModelSpec, sd: &SpectralDecomposition) -> Result<ThresholdResult> {
    let j = match spec.exchange() {
        Some(j) if spec.is_xxx() => j,
        _ => {
            return Err(Error::Precondition(
                "threshold search needs an isotropic ring without field".into(),
            ))
        }
    };
    if j <= 0.0 {
        return Err(Error::Precondition(format!(
            "threshold search needs antiferromagnetic exchange J > 0, got {j}; ferromagnetic rings carry no pairwise entanglement"
        )));
    }
    if sd.n_sites() != spec.n_sites {
        return Err(Error::InvalidModel(format!(
            "spectrum has {} sites, spec has {}",
            sd.n_sites(),
            spec.n_sites
        )));
    }
    let nj = spec.n_sites as f64 * j;
    let ens = Ensemble::new(sd);
    let f = |t: f64| -> Result<f64> { Ok(-energy_at(&ens, t)? / nj - 1.0) };

    let u_floor = energy_at(&ens, T_FLOOR)? / spec.n_sites as f64;
    if concurrence_xxx_energy(u_floor, j)? <= CLAMP_TOL {
        return Ok(ThresholdResult {
            t_c: None,
            bracket: (T_FLOOR, T_FLOOR),
            iterations: 0,
            u_of_n: -u_floor / j,
            status: ThresholdStatus::NeverEntangled,
            concurrence_below: None,
            concurrence_above: None,
        });
    }

    let mut hi = 1.0;
    while f(hi)? > 0.0 {
        hi *= 2.0;
        if hi > T_CEILING {
            return Ok(ThresholdResult {
                t_c: None,
                bracket: (T_FLOOR, T_CEILING),
                iterations: 0,
                u_of_n: f(T_CEILING)? + 1.0,
                status: ThresholdStatus::EntangledEverywhereInRange,
                concurrence_below: None,
                concurrence_above: None,
            });
        }
    }
    let mut lo = T_FLOOR;
    let mut iterations = 0;
    while hi - lo > RELATIVE_WIDTH * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let t_c = 0.5 * (lo + hi);

    let pair = PairEnsemble::new(sd, 1, 2)?;
    let wootters_at = |t: f64| -> Result<f64> {
        Ok(concurrence_wootters(&pair.rdm(&ens.probabilities(t)?))?.wootters)
    };
    Ok(ThresholdResult {
        t_c: Some(t_c),
        bracket: (lo, hi),
        iterations,
        u_of_n: f(t_c)? + 1.0,
        status: ThresholdStatus::Found,
        concurrence_below: Some(wootters_at(t_c * (1.0 - CHECK_OFFSET))?),
        concurrence_above: Some(wootters_at(t_c * (1.0 + CHECK_OFFSET))?),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UOfN {
    pub n: usize,
    pub u: f64,
}

/// `u(N) = U/(−NJ)` for isotropic rings at temperature `t`. At `t = 0`
/// this is `−E_GS/(NJ)`.
pub fn u_of_n_scan(n_list: &[usize], j: f64, t: f64) -> Result<Vec<UOfN>> {
    if j <= 0.0 || !j.is_finite() {
        return Err(Error::Precondition(format!("u(N) scan needs J > 0, got {j}")));
    }
    let beta = beta_of(t)?;
    n_list
        .par_iter()
        .map(|&n| {
            let spec = ModelSpec::xxx(n, j);
            let eig = model_eigenvalues(&spec)?;
            let g = eig.iter().take_while(|e| **e - eig[0] <= 1e-9 * eig[0].abs().max(1.0)).count();
            let (p, _) = probabilities_at_beta(&eig, g, beta);
            let u = mean_energy(&eig, &p);
            Ok(UOfN { n, u: -u / (n as f64 * j) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::diagonalize_model;

    fn run(n: usize, j: f64) -> ThresholdResult {
        let spec = ModelSpec::xxx(n, j);
        find_threshold(&spec, &diagonalize_model(&spec).unwrap()).unwrap()
    }

    #[test]
    fn two_site_threshold() {
        let r = run(2, 1.0);
        assert_eq!(r.status, ThresholdStatus::Found);
        // 8/ln 3, mpmath: 7.2819138130146993
        let t = r.t_c.unwrap();
        assert!((t - 8.0 / 3f64.ln()).abs() < 1e-6, "{t}");
        assert!((r.u_of_n - 1.0).abs() < 1e-7);
        assert!(r.concurrence_below.unwrap() > 0.0);
        assert_eq!(r.concurrence_above.unwrap(), 0.0);
    }

    #[test]
    fn scales_with_exchange() {
        let a = run(2, 1.0).t_c.unwrap();
        let b = run(2, 2.0).t_c.unwrap();
        assert!((b - 2.0 * a).abs() <= 1e-6 * b);
        assert!((b - 16.0 / 3f64.ln()).abs() < 2e-6);
    }

    #[test]
    fn three_site_never_entangled() {
        let r = run(3, 1.0);
        assert_eq!(r.status, ThresholdStatus::NeverEntangled);
        assert!(r.t_c.is_none());
    }

    #[test]
    fn deterministic() {
        assert_eq!(run(4, 1.0).t_c.unwrap().to_bits(), run(4, 1.0).t_c.unwrap().to_bits());
    }

    #[test]
    fn rejects_fm_and_anisotropic() {
        let fm = ModelSpec::xxx(4, -1.0);
        assert!(find_threshold(&fm, &diagonalize_model(&fm).unwrap()).is_err());
        let xxz = ModelSpec::xxz(4, 1.0, 0.5);
        assert!(find_threshold(&xxz, &diagonalize_model(&xxz).unwrap()).is_err());
    }

    #[test]
    fn ground_state_u_values() {
        let scan = u_of_n_scan(&[2, 3, 4, 5], 1.0, 0.0).unwrap();
        let u: Vec<f64> = scan.iter().map(|s| s.u).collect();
        assert!((u[0] - 3.0).abs() < 1e-12);
        // Three-site ground energy is -3J exactly, so u(3) sits on the boundary.
        assert!((u[1] - 1.0).abs() < 1e-12);
        assert!((u[2] - 2.0).abs() < 1e-12);
        assert!(u[3] > 1.0);
    }
}
