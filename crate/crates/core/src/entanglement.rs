//! Pairwise concurrence by every available route.
//!
//! The Wootters construction works for any two-qubit state and is the
//! reference; every closed form below is checked against it.

use faer::{c64, Mat, Side};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::spectral::SpectralDecomposition;
use crate::thermo::ThermoPoint;
use crate::twoqubit::{CorrelationSet, Matrix4, TwoQubitRDM, X_FORM_TOL};

/// Concurrences within this distance of zero report as exactly zero.
pub const CLAMP_TOL: f64 = 1e-12;

/// Negative eigenvalues of ρ down to this bound are clipped; below it the
/// input is rejected.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-10;

/// Allowed disagreement between routes.
pub const ROUTE_TOL: f64 = 1e-9;

/// Snaps tiny values to zero and caps at one.
pub fn finalize(c: f64) -> f64 {
    if c.abs() <= CLAMP_TOL {
        0.0
    } else if c > 1.0 {
        if c > 1.0 + CLAMP_TOL {
            log::warn!("concurrence {c} capped at 1");
        }
        1.0
    } else {
        c
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcurrenceResult {
    pub wootters: f64,
    pub x_form: Option<f64>,
    pub correlation_form: Option<f64>,
    /// Energy-based closed form applicable to the model (isotropic,
    /// anisotropic or field), see `energy_route`.
    pub energy_form: Option<f64>,
    pub energy_route: Option<EnergyRoute>,
    /// `λ₁ ≥ λ₂ ≥ λ₃ ≥ λ₄`.
    pub lambdas: [f64; 4],
    pub max_disagreement: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyRoute {
    /// Isotropic ring, no field: `C` from `U` alone.
    Isotropic,
    /// XXZ ring, no field: `U` plus `G_zz`.
    Anisotropic,
    /// Isotropic ring in a field: `U`, `M̄` and `z`.
    Field,
}

impl ConcurrenceResult {
    fn routes(&self) -> impl Iterator<Item = f64> + '_ {
        [self.x_form, self.correlation_form, self.energy_form]
            .into_iter()
            .flatten()
    }

    fn refresh_disagreement(&mut self) {
        self.max_disagreement = self
            .routes()
            .map(|c| (c - self.wootters).abs())
            .fold(0.0, f64::max);
    }
}

fn hermitian_4(m: &Matrix4) -> Mat<c64> {
    Mat::from_fn(4, 4, |r, c| (m[r][c] + m[c][r].conj()) * 0.5)
}

/// `C = max{λ₁ − λ₂ − λ₃ − λ₄, 0}` where `λ_i²` are the eigenvalues of
/// `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
///
/// The `λ_i` are taken as singular values of `√ρ (σ_y⊗σ_y) √ρ*`, whose
/// squares are exactly those eigenvalues. Working with singular values keeps
/// the small `λ_i` accurate to machine precision instead of to its square
/// root.
pub fn concurrence_wootters(rdm: &TwoQubitRDM) -> Result<ConcurrenceResult> {
    let h = hermitian_4(&rdm.matrix);
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut sqrt_p = [0.0; 4];
    for (k, sp) in sqrt_p.iter_mut().enumerate() {
        let p = s[k].re;
        if p < -NEGATIVE_EIGEN_TOL {
            return Err(Error::MalformedState(format!(
                "density matrix eigenvalue {p:e} below -{NEGATIVE_EIGEN_TOL:e}"
            )));
        }
        *sp = p.max(0.0).sqrt();
    }
    let root = Mat::<c64>::from_fn(4, 4, |r, c| {
        (0..4).map(|k| u[(r, k)] * u[(c, k)].conj() * sqrt_p[k]).sum()
    });
    // σ_y⊗σ_y maps |b⟩ to ±|3−b⟩: + for |01⟩,|10⟩ and − for |00⟩,|11⟩.
    let flip_sign = |b: usize| if b == 1 || b == 2 { 1.0 } else { -1.0 };
    let a = Mat::<c64>::from_fn(4, 4, |r, c| {
        (0..4)
            .map(|k| root[(r, k)] * flip_sign(3 - k) * root[(3 - k, c)].conj())
            .sum()
    });
    let sv = a
        .singular_values()
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let mut lambdas = [0.0; 4];
    for (l, v) in lambdas.iter_mut().zip(&sv) {
        *l = v.max(0.0);
    }
    lambdas.sort_by(|x, y| y.total_cmp(x));
    let c = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok(ConcurrenceResult {
        wootters: finalize(c),
        x_form: None,
        correlation_form: None,
        energy_form: None,
        energy_route: None,
        lambdas,
        max_disagreement: 0.0,
    })
}

fn require_x_form(rdm: &TwoQubitRDM) -> Result<()> {
    if rdm.off_structure_norm > X_FORM_TOL {
        return Err(Error::Precondition(format!(
            "pair state is not X-shaped (off-structure norm {:e})",
            rdm.off_structure_norm
        )));
    }
    Ok(())
}

/// `C = 2 max[0, |z| − √(u⁺u⁻)]`.
pub fn concurrence_x_form(rdm: &TwoQubitRDM) -> Result<f64> {
    require_x_form(rdm)?;
    let prod = (rdm.u_plus * rdm.u_minus).max(0.0);
    Ok(finalize(2.0 * (rdm.z.norm() - prod.sqrt()).max(0.0)))
}

/// `C = ½ max[0, |G_xx + G_yy| − G_zz − 1]`, valid when `M̄ = 0`.
pub fn concurrence_from_correlations(cs: &CorrelationSet) -> Result<f64> {
    if cs.m_per_site.abs() > X_FORM_TOL {
        return Err(Error::Precondition(format!(
            "correlation form needs zero magnetization, got {:e}",
            cs.m_per_site
        )));
    }
    Ok(finalize(
        0.5 * ((cs.xx() + cs.yy()).abs() - cs.zz() - 1.0).max(0.0),
    ))
}

fn require_j(j: f64) -> Result<()> {
    if j == 0.0 || !j.is_finite() {
        return Err(Error::Precondition(format!("exchange J must be nonzero, got {j}")));
    }
    Ok(())
}

/// Isotropic ring without field, from the energy per site `Ū`:
/// `½ max[0, −Ū/J − 1]` for `J > 0`, `½ max[0, Ū/(3J) − 1]` for `J < 0`.
///
/// The branch form is cross-checked against the unified
/// `(1/6) max[0, 2|Ū/J| − Ū/J − 3]`.
pub fn concurrence_xxx_energy(u_bar: f64, j: f64) -> Result<f64> {
    require_j(j)?;
    let x = u_bar / j;
    let branch = if j > 0.0 {
        0.5 * (-x - 1.0).max(0.0)
    } else {
        0.5 * (x / 3.0 - 1.0).max(0.0)
    };
    let unified = (2.0 * x.abs() - x - 3.0).max(0.0) / 6.0;
    // The two forms coincide only when Ū/J carries the physical sign (U ≤ 0).
    if x * j.signum() <= 0.0 {
        debug_assert!(
            (branch - unified).abs() <= 1e-12 * x.abs().max(1.0),
            "branch {branch} vs unified {unified}"
        );
    }
    Ok(finalize(branch))
}

/// Unified isotropic form `(1/6) max[0, 2|Ū/J| − Ū/J − 3]`.
pub fn concurrence_xxx_energy_unified(u_bar: f64, j: f64) -> Result<f64> {
    require_j(j)?;
    let x = u_bar / j;
    Ok(finalize((2.0 * x.abs() - x - 3.0).max(0.0) / 6.0))
}

/// `C = ½ max(0, −E_GS/(NJ) − 1)` for antiferromagnetic even rings.
pub fn concurrence_ground_state(sd: &SpectralDecomposition, j: f64, n: usize) -> Result<f64> {
    require_j(j)?;
    if j < 0.0 || !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "ground-state form needs J > 0 and even N, got J={j}, N={n}"
        )));
    }
    if sd.n_sites() != n {
        return Err(Error::InvalidModel(format!(
            "spectrum has {} sites, expected {n}",
            sd.n_sites()
        )));
    }
    let e = sd.ground_energy();
    Ok(finalize(0.5 * (-e / (n as f64 * j) - 1.0).max(0.0)))
}

/// XXZ ring without field: `½ max[0, |Ū/J − Δ G_zz| − G_zz − 1]`.
pub fn concurrence_anisotropic(u_bar: f64, j: f64, delta: f64, g_zz: f64) -> Result<f64> {
    require_j(j)?;
    Ok(finalize(
        0.5 * ((u_bar / j - delta * g_zz).abs() - g_zz - 1.0).max(0.0),
    ))
}

/// Isotropic ring in a field `B`:
/// `2 max{0, |z| − ¼[(Ū/J − 4 Re z + 1 − (B/J) M̄)² − 4M̄²]^{1/2}}`
/// with `M̄ = u⁺ − u⁻` read from the pair state.
pub fn concurrence_xxx_field(rdm: &TwoQubitRDM, u_bar: f64, j: f64, b: f64) -> Result<f64> {
    require_j(j)?;
    require_x_form(rdm)?;
    let m = rdm.u_plus - rdm.u_minus;
    let s = u_bar / j - 4.0 * rdm.z.re + 1.0 - (b / j) * m;
    // s² − 4M̄², factored to avoid one cancellation.
    let arg = (s - 2.0 * m) * (s + 2.0 * m);
    if arg < -NEGATIVE_EIGEN_TOL {
        return Err(Error::Precondition(format!(
            "field form square-root argument {arg:e} is negative"
        )));
    }
    Ok(finalize(
        2.0 * (rdm.z.norm() - 0.25 * arg.max(0.0).sqrt()).max(0.0),
    ))
}

/// Runs every route whose precondition holds for `spec` and pair `sites`.
pub fn concurrence_all_routes(
    spec: &ModelSpec,
    point: &ThermoPoint,
    rdm: &TwoQubitRDM,
    cs: &CorrelationSet,
) -> Result<ConcurrenceResult> {
    let mut out = concurrence_wootters(rdm)?;
    if rdm.is_x_form() {
        out.x_form = Some(concurrence_x_form(rdm)?);
    }
    if spec.field_b == 0.0 && cs.m_per_site.abs() <= X_FORM_TOL && rdm.is_x_form() {
        out.correlation_form = Some(concurrence_from_correlations(cs)?);
    }
    let (i, j_site) = rdm.sites;
    if let Some((j, delta)) = spec.uniform_params() {
        if j != 0.0 && spec.is_nearest_neighbor(i, j_site) {
            let u_bar = point.u_per_site;
            let (route, value) = if delta == 1.0 && spec.field_b == 0.0 {
                (EnergyRoute::Isotropic, concurrence_xxx_energy(u_bar, j)?)
            } else if spec.field_b == 0.0 {
                (
                    EnergyRoute::Anisotropic,
                    concurrence_anisotropic(u_bar, j, delta, cs.zz())?,
                )
            } else if delta == 1.0 {
                (
                    EnergyRoute::Field,
                    concurrence_xxx_field(rdm, u_bar, j, spec.field_b)?,
                )
            } else {
                return {
                    out.refresh_disagreement();
                    Ok(out)
                };
            };
            out.energy_form = Some(value);
            out.energy_route = Some(route);
        }
    }
    out.refresh_disagreement();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelSpec;
    use crate::spectral::diagonalize_model;
    use crate::thermo::thermo_point;
    use crate::twoqubit::thermal_pair;

    const ZERO: c64 = c64 { re: 0.0, im: 0.0 };

    fn re(x: f64) -> c64 {
        c64::new(x, 0.0)
    }

    /// Direct Wootters: eigenvalues of the non-Hermitian ρ ρ̃ from a complex
    /// Schur-free route (characteristic roots via faer's general EVD).
    fn wootters_direct(m: &Matrix4) -> f64 {
        let rho = Mat::<c64>::from_fn(4, 4, |r, c| m[r][c]);
        let sign = |b: usize| if b == 1 || b == 2 { 1.0 } else { -1.0 };
        let tilde = Mat::<c64>::from_fn(4, 4, |r, c| m[3 - r][3 - c].conj() * sign(r) * sign(c));
        let prod = &rho * &tilde;
        let ev = prod.eigenvalues().unwrap();
        let mut l: Vec<f64> = ev.iter().map(|z| z.re.max(0.0).sqrt()).collect();
        l.sort_by(|a, b| b.total_cmp(a));
        (l[0] - l[1] - l[2] - l[3]).max(0.0)
    }

    #[test]
    fn singlet_is_maximal() {
        let c = concurrence_wootters(&TwoQubitRDM::singlet()).unwrap();
        assert!((c.wootters - 1.0).abs() < 1e-14);
        assert!((concurrence_x_form(&TwoQubitRDM::singlet()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_state_is_separable() {
        let r = TwoQubitRDM::from_pure([re(1.0), ZERO, ZERO, ZERO]);
        assert_eq!(concurrence_wootters(&r).unwrap().wootters, 0.0);
    }

    #[test]
    fn maximally_mixed_x_form() {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = re(0.25);
        }
        let r = TwoQubitRDM::from_matrix((1, 2), m);
        assert_eq!(concurrence_x_form(&r).unwrap(), 0.0);
        assert_eq!(concurrence_wootters(&r).unwrap().wootters, 0.0);
    }

    #[test]
    fn random_pure_states_match_overlap_formula() {
        // For pure states C = 2|ad − bc|.
        let states = [
            [re(0.3), c64::new(0.1, 0.4), re(-0.5), c64::new(0.2, 0.2)],
            [re(1.0), re(0.0), re(0.0), re(1.0)],
            [c64::new(0.0, 1.0), re(0.2), re(0.7), re(-0.1)],
        ];
        for s in states {
            let r = TwoQubitRDM::from_pure(s);
            let norm: f64 = s.iter().map(|a| a.norm_sqr()).sum();
            let want = 2.0 * (s[0] * s[3] - s[1] * s[2]).norm() / norm;
            let got = concurrence_wootters(&r).unwrap().wootters;
            assert!((got - want).abs() < 1e-12, "{got} {want}");
        }
    }

    #[test]
    fn agrees_with_direct_eigenvalue_route_on_mixed_states() {
        let spec = ModelSpec::uniform(4, 1.0, 0.3, 0.4);
        let sd = diagonalize_model(&spec).unwrap();
        for t in [0.3, 1.0, 3.0] {
            let r = thermal_pair(&sd, t, 1, 2).unwrap();
            let a = concurrence_wootters(&r).unwrap().wootters;
            let b = wootters_direct(&r.matrix);
            assert!((a - b).abs() < 1e-7, "{a} {b}");
        }
    }

    #[test]
    fn two_site_thermal_closed_form() {
        let spec = ModelSpec::xxx(2, 1.0);
        let sd = diagonalize_model(&spec).unwrap();
        let r = thermal_pair(&sd, 1.0, 1, 2).unwrap();
        let e8 = 8f64.exp();
        let want = (e8 - 3.0) / (e8 + 3.0);
        let c = concurrence_wootters(&r).unwrap();
        assert!((c.wootters - want).abs() < 1e-12);
        // mpmath: 0.9979892478292068
        assert!((c.wootters - 0.9979892478292068).abs() < 1e-12);
        let p = thermo_point(&sd, &spec, 1.0).unwrap();
        let e = concurrence_xxx_energy(p.u_per_site, 1.0).unwrap();
        assert!((e - want).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_input() {
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = re(1.1);
        m[1][1] = re(-0.1);
        let r = TwoQubitRDM::from_matrix((1, 2), m);
        assert!(matches!(concurrence_wootters(&r), Err(Error::MalformedState(_))));
    }

    #[test]
    fn correlation_form_edges() {
        let singlet = CorrelationSet {
            g: [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]],
            m_per_site: 0.0,
        };
        assert_eq!(concurrence_from_correlations(&singlet).unwrap(), 1.0);
        let zero = CorrelationSet {
            g: [[0.0; 3]; 3],
            m_per_site: 0.0,
        };
        assert_eq!(concurrence_from_correlations(&zero).unwrap(), 0.0);
        let magnetized = CorrelationSet {
            g: [[0.0; 3]; 3],
            m_per_site: 0.1,
        };
        assert!(concurrence_from_correlations(&magnetized).is_err());
    }

    #[test]
    fn energy_forms_reject_zero_j() {
        assert!(concurrence_xxx_energy(-1.0, 0.0).is_err());
        assert!(concurrence_anisotropic(-1.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn isotropic_energy_branches() {
        // Three-site AFM: Ū/J = -tanh(3β) >= -1, never entangled.
        for beta in [0.1f64, 1.0, 10.0] {
            let u_bar = -(3.0 * beta).tanh();
            assert_eq!(concurrence_xxx_energy(u_bar, 1.0).unwrap(), 0.0);
        }
        // FM: Ū/(3J) <= 1 always.
        for u_bar in [-3.0, -1.0, -0.1, 0.0] {
            assert_eq!(concurrence_xxx_energy(u_bar, -1.0).unwrap(), 0.0);
            assert_eq!(concurrence_xxx_energy_unified(u_bar, -1.0).unwrap(), 0.0);
        }
        for u_bar in [-3.0, -2.5, -1.5, -1.0, -0.2] {
            let a = concurrence_xxx_energy(u_bar, 1.0).unwrap();
            let b = concurrence_xxx_energy_unified(u_bar, 1.0).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn anisotropic_reduces_to_correlation_form_at_delta_one() {
        let (gxx, gzz) = (-0.6, -0.6);
        let cs = CorrelationSet {
            g: [[gxx, 0.0, 0.0], [0.0, gxx, 0.0], [0.0, 0.0, gzz]],
            m_per_site: 0.0,
        };
        let u_bar = 2.0 * gxx + gzz;
        let a = concurrence_anisotropic(u_bar, 1.0, 1.0, gzz).unwrap();
        let b = concurrence_from_correlations(&cs).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert!(a > 0.0);
    }

    #[test]
    fn ground_state_form() {
        let sd = diagonalize_model(&ModelSpec::xxx(2, 1.0)).unwrap();
        assert_eq!(concurrence_ground_state(&sd, 1.0, 2).unwrap(), 1.0);
        let sd3 = diagonalize_model(&ModelSpec::xxx(3, 1.0)).unwrap();
        assert!(concurrence_ground_state(&sd3, 1.0, 3).is_err());
        assert!(concurrence_ground_state(&sd, -1.0, 2).is_err());
    }

    #[test]
    fn field_form_reduces_at_zero_field() {
        let spec = ModelSpec::xxx(4, 1.0);
        let sd = diagonalize_model(&spec).unwrap();
        let r = thermal_pair(&sd, 0.5, 1, 2).unwrap();
        let p = thermo_point(&sd, &spec, 0.5).unwrap();
        let a = concurrence_xxx_field(&r, p.u_per_site, 1.0, 0.0).unwrap();
        let b = concurrence_x_form(&r).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn finalize_clamps_and_caps() {
        assert_eq!(finalize(5e-13), 0.0);
        assert_eq!(finalize(1.5), 1.0);
        assert_eq!(finalize(0.25), 0.25);
    }
}
