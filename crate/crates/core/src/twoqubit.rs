//! Two-site reduced density matrices and correlation functions.
//!
//! Pair basis is `{|00⟩, |01⟩, |10⟩, |11⟩}` with site `i` in the first slot.
//! For an `S_z`-conserving state the matrix has the shape
//!
//! ```text
//! ⎡ u⁺            ⎤
//! ⎢     w₁  z*    ⎥
//! ⎢     z   w₂    ⎥
//! ⎣            u⁻ ⎦
//! ```
//!
//! with `z = ⟨σ_i⁺ σ_j⁻⟩ = ρ[|10⟩, |01⟩]` and `σ± = (σ_x ± iσ_y)/2`.

use faer::{c64, Mat, Side};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{pauli, Axis};
use crate::spectral::SpectralDecomposition;
use crate::thermo::{beta_of, probabilities_at_beta, GibbsState};

pub type Matrix4 = [[c64; 4]; 4];

/// Entries outside the X pattern above this bound make the
/// X-form formulas refuse to run.
pub const X_FORM_TOL: f64 = 1e-8;

const ZERO: c64 = c64 { re: 0.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoQubitRDM {
    /// 1-based sites `(i, j)`.
    pub sites: (usize, usize),
    #[serde(skip)]
    pub matrix: Matrix4,
    pub u_plus: f64,
    pub u_minus: f64,
    pub w1: f64,
    pub w2: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub z: c64,
    /// Largest modulus among the ten entries that the X shape forces to zero.
    pub off_structure_norm: f64,
}

fn serialize_complex<S: serde::Serializer>(z: &c64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl TwoQubitRDM {
    pub fn from_matrix(sites: (usize, usize), matrix: Matrix4) -> Self {
        let mut off = 0.0f64;
        for (r, row) in matrix.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let inside = r == c || (r, c) == (1, 2) || (r, c) == (2, 1);
                if !inside {
                    off = off.max(v.norm());
                }
            }
        }
        TwoQubitRDM {
            sites,
            u_plus: matrix[0][0].re,
            w1: matrix[1][1].re,
            w2: matrix[2][2].re,
            u_minus: matrix[3][3].re,
            z: matrix[2][1],
            off_structure_norm: off,
            matrix,
        }
    }

    /// `|ψ⟩⟨ψ|` for a two-qubit pure state (normalized here).
    pub fn from_pure(amplitudes: [c64; 4]) -> Self {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let a = amplitudes.map(|x| x / norm);
        let mut m = [[ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] = a[r] * a[c].conj();
            }
        }
        Self::from_matrix((1, 2), m)
    }

    /// `(|01⟩ - |10⟩)/√2`.
    pub fn singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_pure([ZERO, c64::new(s, 0.0), c64::new(-s, 0.0), ZERO])
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.matrix[i][i].re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                d = d.max((self.matrix[r][c] - self.matrix[c][r].conj()).norm());
            }
        }
        d
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let m = &self.matrix;
        Mat::from_fn(4, 4, |r, c| (m[r][c] + m[c][r].conj()) * 0.5)
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigensolver(format!("{e:?}")))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    pub fn is_x_form(&self) -> bool {
        self.off_structure_norm <= X_FORM_TOL
    }

    /// `tr(ρ σ_α ⊗ σ_β)`, complex before the imaginary residue is dropped.
    pub fn pauli_expectation(&self, a: Axis, b: Axis) -> c64 {
        let (pa, pb) = (pauli(a), pauli(b));
        let mut t = ZERO;
        for r in 0..4 {
            for c in 0..4 {
                let op = pa[c >> 1][r >> 1] * pb[c & 1][r & 1];
                t += self.matrix[r][c] * op;
            }
        }
        t
    }

    /// `⟨σ_α⟩` on the first site.
    pub fn first_site_expectation(&self, a: Axis) -> c64 {
        let p = pauli(a);
        let mut t = ZERO;
        for r in 0..4 {
            for c in 0..4 {
                if r & 1 == c & 1 {
                    t += self.matrix[r][c] * p[c >> 1][r >> 1];
                }
            }
        }
        t
    }

    pub fn max_abs_diff(&self, other: &TwoQubitRDM) -> f64 {
        let mut d = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                d = d.max((self.matrix[r][c] - other.matrix[r][c]).norm());
            }
        }
        d
    }
}

/// Correlation tensor `G_αβ = ⟨σ_{iα} σ_{jβ}⟩` and `M̄ = ⟨σ_{iz}⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationSet {
    pub g: [[f64; 3]; 3],
    pub m_per_site: f64,
}

impl CorrelationSet {
    pub fn from_rdm(rdm: &TwoQubitRDM) -> Self {
        let mut g = [[0.0; 3]; 3];
        for a in Axis::ALL {
            for b in Axis::ALL {
                g[a.index()][b.index()] = rdm.pauli_expectation(a, b).re;
            }
        }
        CorrelationSet {
            g,
            m_per_site: rdm.first_site_expectation(Axis::Z).re,
        }
    }

    pub fn get(&self, a: Axis, b: Axis) -> f64 {
        self.g[a.index()][b.index()]
    }

    pub fn xx(&self) -> f64 {
        self.g[0][0]
    }

    pub fn yy(&self) -> f64 {
        self.g[1][1]
    }

    pub fn zz(&self) -> f64 {
        self.g[2][2]
    }
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    for s in [i, j] {
        if s == 0 || s > n {
            return Err(Error::SiteOutOfRange { site: s, n });
        }
    }
    if i == j {
        return Err(Error::SiteCollision(i));
    }
    Ok(())
}

/// Full-space indices of the four pair states for each configuration of the
/// remaining `N-2` spins.
struct PairIndexer {
    n: usize,
    bit_i: usize,
    bit_j: usize,
}

impl PairIndexer {
    fn new(n: usize, i: usize, j: usize) -> Self {
        PairIndexer {
            n,
            bit_i: n - i,
            bit_j: n - j,
        }
    }

    fn rest_count(&self) -> usize {
        1usize << (self.n - 2)
    }

    /// Inserts zero bits at both pair positions of `rest`.
    fn base(&self, rest: usize) -> usize {
        let (lo, hi) = if self.bit_i < self.bit_j {
            (self.bit_i, self.bit_j)
        } else {
            (self.bit_j, self.bit_i)
        };
        let low_mask = (1usize << lo) - 1;
        let x = (rest & low_mask) | ((rest & !low_mask) << 1);
        let mid_mask = (1usize << hi) - 1;
        (x & mid_mask) | ((x & !mid_mask) << 1)
    }

    fn indices(&self, rest: usize) -> [usize; 4] {
        let b = self.base(rest);
        let (mi, mj) = (1usize << self.bit_i, 1usize << self.bit_j);
        [b, b | mj, b | mi, b | mi | mj]
    }
}

/// Partial trace of `rho` onto sites `(i, j)`.
pub fn reduce_to_pair(rho: &GibbsState, i: usize, j: usize) -> Result<TwoQubitRDM> {
    let n = rho.n_sites();
    check_pair(n, i, j)?;
    let ix = PairIndexer::new(n, i, j);
    let m = rho.matrix().as_mat();
    let mut out = [[ZERO; 4]; 4];
    for rest in 0..ix.rest_count() {
        let idx = ix.indices(rest);
        for (a, &ra) in idx.iter().enumerate() {
            for (b, &rb) in idx.iter().enumerate() {
                out[a][b] += m[(ra, rb)];
            }
        }
    }
    Ok(TwoQubitRDM::from_matrix((i, j), out))
}

pub fn correlations(rho: &GibbsState, i: usize, j: usize) -> Result<CorrelationSet> {
    Ok(CorrelationSet::from_rdm(&reduce_to_pair(rho, i, j)?))
}

/// Residuals of the single-pair identities
/// `u± = ¼(1 ± 2M̄ + G_zz)`, `u⁺−u⁻ = M̄`, `u⁺+u⁻ = ½(1+G_zz)`,
/// `Re z = ¼(G_xx+G_yy)`, `Im z = ¼(G_yx−G_xy)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ElementResiduals {
    pub u_plus: f64,
    pub u_minus: f64,
    pub difference: f64,
    pub sum: f64,
    pub re_z: f64,
    pub im_z: f64,
}

impl ElementResiduals {
    pub fn max(&self) -> f64 {
        [self.u_plus, self.u_minus, self.difference, self.sum, self.re_z, self.im_z]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn check_element_relations(rdm: &TwoQubitRDM, cs: &CorrelationSet) -> ElementResiduals {
    let m = cs.m_per_site;
    let gzz = cs.zz();
    let (gxy, gyx) = (cs.get(Axis::X, Axis::Y), cs.get(Axis::Y, Axis::X));
    ElementResiduals {
        u_plus: (rdm.u_plus - 0.25 * (1.0 + 2.0 * m + gzz)).abs(),
        u_minus: (rdm.u_minus - 0.25 * (1.0 - 2.0 * m + gzz)).abs(),
        difference: (rdm.u_plus - rdm.u_minus - m).abs(),
        sum: (rdm.u_plus + rdm.u_minus - 0.5 * (1.0 + gzz)).abs(),
        re_z: (rdm.z.re - 0.25 * (cs.xx() + cs.yy())).abs(),
        im_z: (rdm.z.im - 0.25 * (gyx - gxy)).abs(),
    }
}

/// Per-eigenvector pair matrices, so a thermal pair state at any temperature
/// is a weighted sum of `2^N` small matrices.
#[derive(Clone, Debug)]
pub struct PairEnsemble {
    sites: (usize, usize),
    projections: Vec<Matrix4>,
}

impl PairEnsemble {
    pub fn new(sd: &SpectralDecomposition, i: usize, j: usize) -> Result<Self> {
        let n = sd.n_sites();
        check_pair(n, i, j)?;
        let ix = PairIndexer::new(n, i, j);
        let dim = sd.dim();
        let mut scratch = vec![ZERO; dim];
        let mut projections = Vec::with_capacity(dim);
        for k in 0..dim {
            let view = sd.eigenvector_view(k);
            for (b, a) in view.iter() {
                scratch[b] = a;
            }
            let mut out = [[ZERO; 4]; 4];
            for rest in 0..ix.rest_count() {
                let idx = ix.indices(rest);
                let v = idx.map(|x| scratch[x]);
                if v.iter().all(|x| *x == ZERO) {
                    continue;
                }
                for a in 0..4 {
                    for b in 0..4 {
                        out[a][b] += v[a] * v[b].conj();
                    }
                }
            }
            for (b, _) in view.iter() {
                scratch[b] = ZERO;
            }
            projections.push(out);
        }
        Ok(PairEnsemble {
            sites: (i, j),
            projections,
        })
    }

    pub fn sites(&self) -> (usize, usize) {
        self.sites
    }

    /// `Σ_k p_k ρ_k` for normalized probabilities `p`.
    pub fn rdm(&self, probabilities: &[f64]) -> TwoQubitRDM {
        assert_eq!(probabilities.len(), self.projections.len());
        let mut out = [[ZERO; 4]; 4];
        for (p, proj) in probabilities.iter().zip(&self.projections) {
            if *p == 0.0 {
                continue;
            }
            for a in 0..4 {
                for b in 0..4 {
                    out[a][b] += proj[a][b] * *p;
                }
            }
        }
        TwoQubitRDM::from_matrix(self.sites, out)
    }
}

/// Thermal pair state straight from the eigenbasis, without forming `ρ_T`.
pub fn thermal_pair(sd: &SpectralDecomposition, temperature: f64, i: usize, j: usize) -> Result<TwoQubitRDM> {
    let beta = beta_of(temperature)?;
    let (p, _) = probabilities_at_beta(sd.eigenvalues(), sd.ground_degeneracy(), beta);
    Ok(PairEnsemble::new(sd, i, j)?.rdm(&p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_hamiltonian, pauli_at, ModelSpec};
    use crate::spectral::diagonalize_model;
    use crate::thermo::{gibbs_state, thermo_point};

    #[test]
    fn maximally_mixed_reduces_to_identity_quarter() {
        let rho = GibbsState::maximally_mixed(4);
        for (i, j) in [(1, 2), (2, 4), (4, 1)] {
            let r = reduce_to_pair(&rho, i, j).unwrap();
            for v in [r.u_plus, r.u_minus, r.w1, r.w2] {
                assert!((v - 0.25).abs() < 1e-15);
            }
            assert_eq!(r.z, ZERO);
            let cs = CorrelationSet::from_rdm(&r);
            assert!(cs.g.iter().flatten().all(|g| g.abs() < 1e-15));
        }
    }

    #[test]
    fn singlet_elements() {
        let sd = diagonalize_model(&ModelSpec::xxx(2, 1.0)).unwrap();
        let rho = gibbs_state(&sd, 0.0).unwrap();
        let r = reduce_to_pair(&rho, 1, 2).unwrap();
        assert!(r.u_plus.abs() < 1e-14 && r.u_minus.abs() < 1e-14);
        assert!((r.w1 - 0.5).abs() < 1e-14 && (r.w2 - 0.5).abs() < 1e-14);
        assert!((r.z - c64::new(-0.5, 0.0)).norm() < 1e-14);
        let cs = CorrelationSet::from_rdm(&r);
        for g in [cs.xx(), cs.yy(), cs.zz()] {
            assert!((g + 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn z_sits_at_sigma_plus_sigma_minus() {
        // z = ⟨σ1⁺σ2⁻⟩ with σ⁺ = |0⟩⟨1|: the state |01⟩+i|10⟩ has
        // ⟨10|ρ|01⟩ = i/2.
        let r = TwoQubitRDM::from_pure([ZERO, c64::new(1.0, 0.0), c64::new(0.0, 1.0), ZERO]);
        assert!((r.z - c64::new(0.0, 0.5)).norm() < 1e-15);
        let cs = CorrelationSet::from_rdm(&r);
        // Im z = (G_yx - G_xy)/4
        let res = check_element_relations(&r, &cs);
        assert!(res.im_z < 1e-15, "{res:?}");
        assert!(res.re_z < 1e-15);
    }

    #[test]
    fn three_site_z_closed_form() {
        let spec = ModelSpec::xxx(3, 1.0);
        let sd = diagonalize_model(&spec).unwrap();
        let r = reduce_to_pair(&gibbs_state(&sd, 1.0).unwrap(), 1, 2).unwrap();
        // z = U/(6JN) with U = -3 tanh 3, so z = -tanh(3)/6.
        // mpmath: -0.165842458947788408555
        assert!((r.z.re - (-0.1658424589477884)).abs() < 1e-12);
        let u = thermo_point(&sd, &spec, 1.0).unwrap().u;
        assert!((r.z.re - u / 18.0).abs() < 1e-12);
    }

    #[test]
    fn pair_errors() {
        let rho = GibbsState::maximally_mixed(3);
        assert!(matches!(reduce_to_pair(&rho, 2, 2), Err(Error::SiteCollision(2))));
        assert!(matches!(
            reduce_to_pair(&rho, 1, 4),
            Err(Error::SiteOutOfRange { site: 4, n: 3 })
        ));
        assert!(correlations(&rho, 0, 1).is_err());
    }

    #[test]
    fn correlations_match_dense_pauli_products() {
        let spec = ModelSpec::uniform(4, 1.0, 0.6, 0.4);
        let sd = diagonalize_model(&spec).unwrap();
        let rho = gibbs_state(&sd, 0.8).unwrap();
        for (i, j) in [(1, 2), (3, 1), (2, 4)] {
            let cs = correlations(&rho, i, j).unwrap();
            for a in Axis::ALL {
                for b in Axis::ALL {
                    let op = pauli_at(i, a, 4).unwrap().matmul(&pauli_at(j, b, 4).unwrap());
                    let want = rho.matrix().matmul(&op).trace().re;
                    assert!((cs.get(a, b) - want).abs() < 1e-13, "({i},{j}) {a:?}{b:?}");
                }
            }
            let mz = rho.matrix().matmul(&pauli_at(i, Axis::Z, 4).unwrap()).trace().re;
            assert!((cs.m_per_site - mz).abs() < 1e-13);
        }
    }

    #[test]
    fn fast_path_matches_dense_reduction() {
        for spec in [ModelSpec::uniform(5, 1.0, 0.5, 0.7), ModelSpec::xxx(4, -1.0)] {
            let sd = diagonalize_model(&spec).unwrap();
            for t in [0.0, 0.3, 2.0] {
                let rho = gibbs_state(&sd, t).unwrap();
                for (i, j) in [(1, 2), (2, 5.min(spec.n_sites)), (3, 1)] {
                    let a = reduce_to_pair(&rho, i, j).unwrap();
                    let b = thermal_pair(&sd, t, i, j).unwrap();
                    assert!(a.max_abs_diff(&b) < 1e-13);
                }
            }
        }
    }

    #[test]
    fn x_form_when_sz_conserved() {
        let spec = ModelSpec::uniform(5, 1.0, 2.0, 1.0);
        let sd = diagonalize_model(&spec).unwrap();
        let r = thermal_pair(&sd, 1.0, 1, 3).unwrap();
        assert!(r.off_structure_norm <= 1e-10);
        assert!((r.trace() - 1.0).abs() < 1e-12);
        assert!(r.min_eigenvalue().unwrap() >= -1e-12);
    }

    #[test]
    fn element_relations_with_field() {
        let spec = ModelSpec::uniform(4, 1.0, 2.0, 1.0);
        let sd = diagonalize_model(&spec).unwrap();
        let r = thermal_pair(&sd, 1.0, 1, 2).unwrap();
        let cs = CorrelationSet::from_rdm(&r);
        assert!(cs.m_per_site.abs() > 1e-3);
        let res = check_element_relations(&r, &cs);
        assert!(res.max() <= 1e-10, "{res:?}");
    }

    #[test]
    fn general_xy_breaks_x_form() {
        // J^x != J^y mixes |00⟩ with |11⟩.
        let spec = ModelSpec::general(
            3,
            vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]],
            vec![vec![0.0, 0.2, 0.2], vec![0.2, 0.0, 0.2], vec![0.2, 0.2, 0.0]],
            vec![vec![0.0; 3]; 3],
            0.3,
        );
        let h = build_hamiltonian(&spec).unwrap();
        let sd = crate::spectral::diagonalize_full(&h).unwrap();
        let r = thermal_pair(&sd, 0.5, 1, 2).unwrap();
        assert!(r.off_structure_norm > 1e-3);
        assert!(!r.is_x_form());
    }
}
