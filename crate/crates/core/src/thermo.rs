//! Canonical ensemble over a [`SpectralDecomposition`].
//!
//! Boltzmann weights are always taken relative to the ground energy,
//! `w_k = exp(-β (E_k - E_1))`, so nothing overflows even when `β|E|` is in
//! the thousands. The partition function is only ever reported as
//! `log Z = -β E_1 + ln Σ w_k`.
//!
//! `T = 0` is the uniform mixture over the degenerate ground space and
//! `T = +∞` is the maximally mixed state.

use std::borrow::Cow;

use faer::{c64, Mat};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{total_sigma_z, ModelSpec, OperatorMatrix};
use crate::spectral::{model_eigenvalues, SpectralDecomposition};

/// Default relative step for [`check_derivatives`].
pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermoPoint {
    pub temperature: f64,
    /// `f64::INFINITY` at `T = 0`.
    pub beta: f64,
    /// `log Z`; `±∞` at `T = 0` unless `E_1 = 0`.
    pub log_z: f64,
    /// Ground energy used as the weight shift.
    pub energy_shift: f64,
    /// `ln Σ_k exp(-β (E_k - E_1))`.
    pub log_weight_sum: f64,
    pub u: f64,
    pub u_per_site: f64,
    pub m: f64,
    pub m_per_site: f64,
}

/// Inverse temperature; `T = 0` maps to `+∞`, `T = +∞` to `0`.
pub fn beta_of(temperature: f64) -> Result<f64> {
    if temperature.is_nan() || temperature < 0.0 {
        return Err(Error::NegativeTemperature(temperature));
    }
    Ok(if temperature == 0.0 {
        f64::INFINITY
    } else {
        1.0 / temperature
    })
}

/// Normalized Gibbs probabilities of each eigenvector at inverse temperature
/// `beta`, plus `ln Σ w_k` of the shifted weights.
pub fn probabilities_at_beta(eigenvalues: &[f64], ground_degeneracy: usize, beta: f64) -> (Vec<f64>, f64) {
    let e0 = eigenvalues[0];
    if beta.is_infinite() {
        let g = ground_degeneracy.max(1);
        let p = 1.0 / g as f64;
        let probs = (0..eigenvalues.len()).map(|k| if k < g { p } else { 0.0 }).collect();
        return (probs, (g as f64).ln());
    }
    let w: Vec<f64> = eigenvalues.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let sum: f64 = w.iter().sum();
    (w.into_iter().map(|x| x / sum).collect(), sum.ln())
}

/// `log Z(β)` from eigenvalues, shift-stabilized. `β` must be finite.
pub fn log_partition(eigenvalues: &[f64], beta: f64) -> f64 {
    let e0 = eigenvalues[0];
    let s: f64 = eigenvalues.iter().map(|e| (-beta * (e - e0)).exp()).sum();
    -beta * e0 + s.ln()
}

/// `⟨v_k| Σσ_z |v_k⟩` for every eigenvector.
pub fn eigen_magnetizations(sd: &SpectralDecomposition) -> Vec<f64> {
    if let Some(labels) = sd.sector_labels() {
        return labels.iter().map(|&l| l as f64).collect();
    }
    let n = sd.n_sites();
    (0..sd.dim())
        .map(|k| {
            sd.eigenvector_view(k)
                .iter()
                .map(|(b, a)| a.norm_sqr() * total_sigma_z(b, n) as f64)
                .sum()
        })
        .collect()
}

/// Thermal averages over a fixed spectrum; caches per-eigenvector data so a
/// temperature sweep costs `O(2^N)` per point.
#[derive(Clone, Debug)]
pub struct Ensemble<'a> {
    sd: &'a SpectralDecomposition,
    magnetizations: Cow<'a, [f64]>,
}

impl<'a> Ensemble<'a> {
    pub fn new(sd: &'a SpectralDecomposition) -> Self {
        Ensemble {
            sd,
            magnetizations: Cow::Owned(eigen_magnetizations(sd)),
        }
    }

    /// Reuses magnetizations from an earlier `eigen_magnetizations(sd)`.
    pub fn with_magnetizations(sd: &'a SpectralDecomposition, magnetizations: &'a [f64]) -> Self {
        Ensemble {
            sd,
            magnetizations: Cow::Borrowed(magnetizations),
        }
    }

    pub fn spectrum(&self) -> &'a SpectralDecomposition {
        self.sd
    }

    pub fn probabilities(&self, temperature: f64) -> Result<Vec<f64>> {
        let beta = beta_of(temperature)?;
        Ok(probabilities_at_beta(self.sd.eigenvalues(), self.sd.ground_degeneracy(), beta).0)
    }

    pub fn point(&self, temperature: f64) -> Result<ThermoPoint> {
        let beta = beta_of(temperature)?;
        let e = self.sd.eigenvalues();
        let (p, log_w) = probabilities_at_beta(e, self.sd.ground_degeneracy(), beta);
        let u = mean_energy(e, &p);
        let m: f64 = p.iter().zip(self.magnetizations.iter()).map(|(p, m)| p * m).sum();
        let e0 = e[0];
        let log_z = if beta.is_infinite() {
            if e0 == 0.0 {
                log_w
            } else {
                -e0.signum() * f64::INFINITY
            }
        } else {
            -beta * e0 + log_w
        };
        let n = self.sd.n_sites() as f64;
        Ok(ThermoPoint {
            temperature,
            beta,
            log_z,
            energy_shift: e0,
            log_weight_sum: log_w,
            u,
            u_per_site: u / n,
            m,
            m_per_site: m / n,
        })
    }
}

/// `Σ p_k E_k`, accumulated as `E_0 + Σ p_k (E_k − E_0)` so that `U(T)` stays
/// monotone when a degenerate ground multiplet is split at the ulp level.
pub fn mean_energy(eigenvalues: &[f64], probabilities: &[f64]) -> f64 {
    let e0 = eigenvalues[0];
    let excess: f64 = probabilities
        .iter()
        .zip(eigenvalues)
        .map(|(p, e)| p * (e - e0))
        .sum();
    e0 + excess
}

/// `Z`, `U`, `M` at one temperature.
pub fn thermo_point(sd: &SpectralDecomposition, spec: &ModelSpec, temperature: f64) -> Result<ThermoPoint> {
    if sd.n_sites() != spec.n_sites {
        return Err(Error::InvalidModel(format!(
            "spectrum has {} sites, spec has {}",
            sd.n_sites(),
            spec.n_sites
        )));
    }
    Ensemble::new(sd).point(temperature)
}

/// Dense thermal density matrix `ρ_T`.
#[derive(Clone, Debug)]
pub struct GibbsState {
    n_sites: usize,
    matrix: OperatorMatrix,
}

impl GibbsState {
    /// Wraps an arbitrary density matrix on `n_sites` qubits.
    pub fn from_matrix(n_sites: usize, matrix: OperatorMatrix) -> Result<Self> {
        if matrix.dim() != 1usize << n_sites {
            return Err(Error::InvalidModel(format!(
                "density matrix of dimension {} does not match {n_sites} sites",
                matrix.dim()
            )));
        }
        Ok(GibbsState { n_sites, matrix })
    }

    pub fn maximally_mixed(n_sites: usize) -> Self {
        let dim = 1usize << n_sites;
        let p = 1.0 / dim as f64;
        GibbsState {
            n_sites,
            matrix: OperatorMatrix::from_fn(dim, |r, c| c64::new(if r == c { p } else { 0.0 }, 0.0)),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &OperatorMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let m = self.matrix.as_mat();
        let h = Mat::from_fn(self.dim(), self.dim(), |r, c| (m[(r, c)] + m[(c, r)].conj()) * 0.5);
        let vals = h
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
        Ok(vals.into_iter().fold(f64::INFINITY, f64::min))
    }
}

/// `ρ = Σ_k p_k |v_k⟩⟨v_k|`, assembled block by block.
pub fn gibbs_state(sd: &SpectralDecomposition, temperature: f64) -> Result<GibbsState> {
    let beta = beta_of(temperature)?;
    let (p, _) = probabilities_at_beta(sd.eigenvalues(), sd.ground_degeneracy(), beta);
    let dim = sd.dim();
    let mut rho = Mat::<c64>::zeros(dim, dim);
    sd.for_each_block(|basis, size, vectors, cols| {
        let kept: Vec<&(usize, usize)> = cols.iter().filter(|(k, _)| p[*k] > 0.0).collect();
        if kept.is_empty() {
            return;
        }
        // W = V diag(√p); block ρ = W W†.
        let w = Mat::<c64>::from_fn(size, kept.len(), |r, j| {
            let (k, ci) = *kept[j];
            vectors[ci * size + r] * p[k].sqrt()
        });
        let blk = &w * w.adjoint();
        for c in 0..size {
            let gc = basis.map_or(c, |b| b[c]);
            for r in 0..size {
                let gr = basis.map_or(r, |b| b[r]);
                rho[(gr, gc)] += blk[(r, c)];
            }
        }
    });
    GibbsState::from_matrix(sd.n_sites(), OperatorMatrix::from_mat(rho))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivativeResiduals {
    /// `|U + ∂ ln Z/∂β|`.
    pub u_residual: f64,
    /// `|M + (1/β) ∂ ln Z/∂B|`.
    pub m_residual: f64,
    pub u_finite_difference: f64,
    pub m_finite_difference: f64,
}

/// Central finite differences of `log Z` in `β` (step `db·β`) and in `B`
/// (step `db·max(1,|B|)`, re-diagonalizing at `B ± h`), compared against the
/// expectation values of [`thermo_point`].
pub fn check_derivatives(spec: &ModelSpec, temperature: f64, db: f64) -> Result<DerivativeResiduals> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Precondition(format!(
            "finite-difference check needs 0 < T < inf, got {temperature}"
        )));
    }
    if !(db > 0.0) {
        return Err(Error::Precondition(format!("step must be positive, got {db}")));
    }
    let sd = crate::spectral::diagonalize_model(spec)?;
    let point = thermo_point(&sd, spec, temperature)?;
    let beta = point.beta;

    let e = sd.eigenvalues();
    let hb = db * beta;
    let u_fd = -(log_partition(e, beta + hb) - log_partition(e, beta - hb)) / (2.0 * hb);

    let hf = db * spec.field_b.abs().max(1.0);
    let plus = model_eigenvalues(&spec.clone().with_field(spec.field_b + hf))?;
    let minus = model_eigenvalues(&spec.clone().with_field(spec.field_b - hf))?;
    let m_fd = -(log_partition(&plus, beta) - log_partition(&minus, beta)) / (2.0 * hf * beta);

    Ok(DerivativeResiduals {
        u_residual: (u_fd - point.u).abs(),
        m_residual: (m_fd - point.m).abs(),
        u_finite_difference: u_fd,
        m_finite_difference: m_fd,
    })
}
