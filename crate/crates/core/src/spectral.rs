//! Hermitian eigendecomposition, either on the full `2^N` space or block by
//! block in sectors of fixed total σ_z.
//!
//! Eigenvectors are kept in their sector: a sector-blocked decomposition
//! stores each eigenvector only on the `C(N,k)` basis states of its sector.
//! [`SpectralDecomposition::eigenvector`] embeds a column back into the full
//! space on demand. At `N = 14` the dense eigenbasis alone would need 4 GiB.

use faer::{c64, Mat, Side};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    total_sigma_z, HamiltonianColumns, ModelSpec, OperatorMatrix, COMMUTATOR_TOL,
};

/// Largest ring handled by [`diagonalize_full`] through [`diagonalize_model`].
pub const FULL_PATH_MAX_SITES: usize = 12;

/// Relative tolerance defining the degenerate ground space.
pub const DEGENERACY_TOL: f64 = 1e-9;

const PHASE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
struct Block {
    /// Eigenvalue of `Σσ_z` shared by the block, when it is a sector.
    label: Option<i32>,
    /// Full-space indices of the block's basis states; `None` means the
    /// identity map over the whole space.
    basis: Option<Vec<usize>>,
    size: usize,
    /// Column-major eigenvectors, `size` amplitudes per column.
    vectors: Vec<c64>,
}

/// Eigenvector restricted to its support.
#[derive(Clone, Copy, Debug)]
pub struct EigenvectorView<'a> {
    indices: Option<&'a [usize]>,
    amplitudes: &'a [c64],
}

impl<'a> EigenvectorView<'a> {
    /// `(full-space index, amplitude)` pairs over the support.
    pub fn iter(&self) -> impl Iterator<Item = (usize, c64)> + 'a {
        let amps = self.amplitudes;
        let idx = self.indices;
        amps.iter().enumerate().map(move |(k, &a)| match idx {
            Some(ix) => (ix[k], a),
            None => (k, a),
        })
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn to_dense(&self, dim: usize) -> Vec<c64> {
        let mut v = vec![c64::new(0.0, 0.0); dim];
        for (i, a) in self.iter() {
            v[i] = a;
        }
        v
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    n_sites: usize,
    dim: usize,
    eigenvalues: Vec<f64>,
    blocks: Vec<Block>,
    /// `(block, column)` of each merged eigenvalue.
    columns: Vec<(usize, usize)>,
    ground_degeneracy: usize,
    sector_labels: Option<Vec<i32>>,
}

impl SpectralDecomposition {
    fn assemble(n_sites: usize, dim: usize, blocks: Vec<Block>, values: Vec<Vec<f64>>) -> Result<Self> {
        let total: usize = blocks.iter().map(|b| b.size).sum();
        if total != dim {
            return Err(Error::Eigensolver(format!(
                "block merge covers {total} states, expected {dim}"
            )));
        }
        let mut order: Vec<(f64, i32, usize, usize)> = Vec::with_capacity(dim);
        for (bi, (block, vals)) in blocks.iter().zip(&values).enumerate() {
            for (ci, &e) in vals.iter().enumerate() {
                order.push((e, block.label.unwrap_or(0), bi, ci));
            }
        }
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let eigenvalues: Vec<f64> = order.iter().map(|o| o.0).collect();
        let columns = order.iter().map(|o| (o.2, o.3)).collect();
        let sector_labels = if blocks.iter().all(|b| b.label.is_some()) {
            Some(order.iter().map(|o| o.1).collect())
        } else {
            None
        };
        let e0 = eigenvalues[0];
        let tol = DEGENERACY_TOL * e0.abs().max(1.0);
        let ground_degeneracy = eigenvalues.iter().take_while(|&&e| (e - e0).abs() <= tol).count();
        Ok(SpectralDecomposition {
            n_sites,
            dim,
            eigenvalues,
            blocks,
            columns,
            ground_degeneracy,
            sector_labels,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_degeneracy(&self) -> usize {
        self.ground_degeneracy
    }

    /// Per-eigenvector eigenvalue of `Σσ_z` (twice the `S_z` quantum number).
    pub fn sector_labels(&self) -> Option<&[i32]> {
        self.sector_labels.as_deref()
    }

    pub fn is_sectored(&self) -> bool {
        self.sector_labels.is_some()
    }

    pub fn eigenvector_view(&self, k: usize) -> EigenvectorView<'_> {
        let (bi, ci) = self.columns[k];
        let b = &self.blocks[bi];
        EigenvectorView {
            indices: b.basis.as_deref(),
            amplitudes: &b.vectors[ci * b.size..(ci + 1) * b.size],
        }
    }

    /// Eigenvector `k` embedded in the full `2^N` space.
    pub fn eigenvector(&self, k: usize) -> Vec<c64> {
        self.eigenvector_view(k).to_dense(self.dim)
    }

    /// Visits each block as `(basis, vectors, eigenvalue positions)` where
    /// `vectors` is column-major with one column per entry of the positions
    /// list. Used to assemble block-diagonal operators without densifying.
    pub(crate) fn for_each_block(&self, mut f: impl FnMut(Option<&[usize]>, usize, &[c64], &[(usize, usize)])) {
        let mut per_block: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.blocks.len()];
        for (k, &(bi, ci)) in self.columns.iter().enumerate() {
            per_block[bi].push((k, ci));
        }
        for (b, cols) in self.blocks.iter().zip(&per_block) {
            f(b.basis.as_deref(), b.size, &b.vectors, cols);
        }
    }

    /// `max_k ‖H v_k − E_k v_k‖₂ / max(1, |E_k|)`.
    pub fn max_residual(&self, h: &OperatorMatrix) -> f64 {
        (0..self.dim)
            .into_par_iter()
            .map(|k| {
                let v = self.eigenvector(k);
                let hv = h.apply(&v);
                let e = self.eigenvalues[k];
                let r: f64 = hv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b * e).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                r / e.abs().max(1.0)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// `max |V†V − I|` entrywise.
    pub fn orthonormality_defect(&self) -> f64 {
        let vs: Vec<Vec<c64>> = (0..self.dim).map(|k| self.eigenvector(k)).collect();
        (0..self.dim)
            .into_par_iter()
            .map(|a| {
                let mut worst = 0.0f64;
                for b in a..self.dim {
                    let dot: c64 = vs[a].iter().zip(&vs[b]).map(|(x, y)| x.conj() * y).sum();
                    let target = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((dot - c64::new(target, 0.0)).norm());
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }
}

enum HermitianInput {
    Real(Mat<f64>),
    Complex(Mat<c64>),
}

/// Eigenvalues ascending and phase-fixed column-major eigenvectors.
fn solve_block(input: HermitianInput) -> Result<(Vec<f64>, Vec<c64>)> {
    let (vals, mut vecs, n) = match input {
        HermitianInput::Real(m) => {
            let n = m.nrows();
            let evd = m
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
            let s = evd.S().column_vector();
            let vals: Vec<f64> = (0..n).map(|i| s[i]).collect();
            let u = evd.U();
            let mut vecs = Vec::with_capacity(n * n);
            for c in 0..n {
                for r in 0..n {
                    vecs.push(c64::new(u[(r, c)], 0.0));
                }
            }
            (vals, vecs, n)
        }
        HermitianInput::Complex(m) => {
            let n = m.nrows();
            let evd = m
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
            let s = evd.S().column_vector();
            let vals: Vec<f64> = (0..n).map(|i| s[i].re).collect();
            let u = evd.U();
            let mut vecs = Vec::with_capacity(n * n);
            for c in 0..n {
                for r in 0..n {
                    vecs.push(u[(r, c)]);
                }
            }
            (vals, vecs, n)
        }
    };
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolver("non-finite eigenvalue".into()));
    }
    // First amplitude above PHASE_TOL is made real and positive.
    for col in vecs.chunks_mut(n.max(1)) {
        if let Some(lead) = col.iter().find(|a| a.norm() > PHASE_TOL).copied() {
            let phase = lead.conj() / lead.norm();
            for a in col.iter_mut() {
                *a *= phase;
            }
        }
    }
    Ok((vals, vecs))
}

fn check_hermitian(h: &OperatorMatrix) -> Result<f64> {
    let scale = h.max_abs().max(1.0);
    let defect = h.hermiticity_defect();
    if defect > 1e-10 * scale {
        return Err(Error::NotHermitian(defect));
    }
    Ok(scale)
}

fn n_sites_of(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidModel(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Dense eigendecomposition of a Hermitian operator.
pub fn diagonalize_full(h: &OperatorMatrix) -> Result<SpectralDecomposition> {
    let scale = check_hermitian(h)?;
    let dim = h.dim();
    let n = if dim.is_power_of_two() { dim.trailing_zeros() as usize } else { 0 };
    let m = h.as_mat();
    let input = if h.max_abs_imag() <= 1e-14 * scale {
        HermitianInput::Real(Mat::from_fn(dim, dim, |r, c| m[(r, c)].re))
    } else {
        HermitianInput::Complex(m.to_owned())
    };
    let (vals, vecs) = solve_block(input)?;
    let block = Block {
        label: None,
        basis: None,
        size: dim,
        vectors: vecs,
    };
    SpectralDecomposition::assemble(n, dim, vec![block], vec![vals])
}

/// Basis states of each total-σ_z sector, indexed by popcount.
pub fn sector_bases(n: usize) -> Vec<Vec<usize>> {
    let mut bases = vec![Vec::new(); n + 1];
    for b in 0..(1usize << n) {
        bases[b.count_ones() as usize].push(b);
    }
    bases
}

fn sectored_from_blocks(
    n: usize,
    bases: Vec<Vec<usize>>,
    build: impl Fn(&[usize]) -> HermitianInput + Sync,
) -> Result<SpectralDecomposition> {
    let solved: Vec<Result<(Block, Vec<f64>)>> = bases
        .into_par_iter()
        .map(|basis| {
            let (vals, vecs) = solve_block(build(&basis))?;
            let label = basis.first().map(|&b| total_sigma_z(b, n));
            Ok((
                Block {
                    label,
                    size: basis.len(),
                    basis: Some(basis),
                    vectors: vecs,
                },
                vals,
            ))
        })
        .collect();
    let mut blocks = Vec::new();
    let mut values = Vec::new();
    for r in solved {
        let (b, v) = r?;
        blocks.push(b);
        values.push(v);
    }
    SpectralDecomposition::assemble(n, 1usize << n, blocks, values)
}

/// Sector-blocked eigendecomposition of a dense Hamiltonian that conserves
/// total σ_z. Each sector is diagonalized independently.
pub fn diagonalize_sectored(h: &OperatorMatrix, spec: &ModelSpec) -> Result<SpectralDecomposition> {
    let scale = check_hermitian(h)?;
    let n = n_sites_of(h.dim())?;
    if n != spec.n_sites {
        return Err(Error::InvalidModel(format!(
            "operator has {n} sites, spec has {}",
            spec.n_sites
        )));
    }
    let m = h.as_mat();
    // [H, S_z] has entries H[r,c] (s_c - s_r)/2.
    let mut comm = 0.0f64;
    for c in 0..h.dim() {
        let sc = total_sigma_z(c, n);
        for r in 0..h.dim() {
            let d = (sc - total_sigma_z(r, n)) as f64 / 2.0;
            if d != 0.0 {
                comm = comm.max(m[(r, c)].norm() * d.abs());
            }
        }
    }
    let norm = comm / h.max_abs().max(f64::MIN_POSITIVE);
    if norm > COMMUTATOR_TOL {
        return Err(Error::SymmetryViolated { name: "S_z", norm });
    }
    let real = h.max_abs_imag() <= 1e-14 * scale;
    sectored_from_blocks(n, sector_bases(n), |basis| {
        let k = basis.len();
        if real {
            HermitianInput::Real(Mat::from_fn(k, k, |r, c| m[(basis[r], basis[c])].re))
        } else {
            HermitianInput::Complex(Mat::from_fn(k, k, |r, c| m[(basis[r], basis[c])]))
        }
    })
}

fn sector_block_from_spec(cols: &HamiltonianColumns, n: usize, basis: &[usize]) -> Mat<f64> {
    let dim = 1usize << n;
    let k = basis.len();
    let mut pos = vec![usize::MAX; dim];
    for (a, &b) in basis.iter().enumerate() {
        pos[b] = a;
    }
    let mut m = Mat::<f64>::zeros(k, k);
    for (c, &b) in basis.iter().enumerate() {
        cols.visit(b, |row, v| {
            let r = pos[row];
            debug_assert!(r != usize::MAX, "Hamiltonian leaves the sector");
            m[(r, c)] += v;
        });
    }
    m
}

/// Sector-blocked decomposition assembled directly from the model, without
/// ever forming the dense `2^N × 2^N` Hamiltonian.
pub fn diagonalize_spec_sectored(spec: &ModelSpec) -> Result<SpectralDecomposition> {
    spec.validate()?;
    if !spec.conserves_sz() {
        return Err(Error::Precondition(
            "couplings with J^x != J^y do not conserve S_z".into(),
        ));
    }
    let n = spec.n_sites;
    let cols = HamiltonianColumns::new(spec)?;
    sectored_from_blocks(n, sector_bases(n), |basis| {
        HermitianInput::Real(sector_block_from_spec(&cols, n, basis))
    })
}

/// Picks the sector path when `S_z` is conserved, the dense path otherwise.
pub fn diagonalize_model(spec: &ModelSpec) -> Result<SpectralDecomposition> {
    spec.validate()?;
    if spec.conserves_sz() {
        diagonalize_spec_sectored(spec)
    } else {
        if spec.n_sites > FULL_PATH_MAX_SITES {
            return Err(Error::DimensionOverflow {
                n: spec.n_sites,
                cap: FULL_PATH_MAX_SITES,
            });
        }
        diagonalize_full(&crate::model::build_hamiltonian(spec)?)
    }
}

/// Ascending eigenvalues only; cheaper when no eigenvectors are needed.
pub fn model_eigenvalues(spec: &ModelSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut vals: Vec<f64> = if spec.conserves_sz() {
        let cols = HamiltonianColumns::new(spec)?;
        let parts: Vec<Result<Vec<f64>>> = sector_bases(n)
            .into_par_iter()
            .map(|basis| {
                sector_block_from_spec(&cols, n, &basis)
                    .self_adjoint_eigenvalues(Side::Lower)
                    .map_err(|e| Error::Eigensolver(format!("{e:?}")))
            })
            .collect();
        let mut all = Vec::with_capacity(spec.dim());
        for p in parts {
            all.extend(p?);
        }
        all
    } else {
        let h = crate::model::build_hamiltonian(spec)?;
        let m = h.as_mat();
        let dim = h.dim();
        Mat::<f64>::from_fn(dim, dim, |r, c| m[(r, c)].re)
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigensolver(format!("{e:?}")))?
    };
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_hamiltonian;

    fn diag(vals: &[f64]) -> OperatorMatrix {
        OperatorMatrix::from_fn(vals.len(), |r, c| {
            c64::new(if r == c { vals[r] } else { 0.0 }, 0.0)
        })
    }

    #[test]
    fn sorts_diagonal_input() {
        let sd = diagonalize_full(&diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(sd.eigenvalues(), &[1.0, 2.0, 3.0]);
        assert_eq!(sd.ground_degeneracy(), 1);
    }

    #[test]
    fn identity_is_fully_degenerate() {
        let sd = diagonalize_full(&OperatorMatrix::identity(4)).unwrap();
        assert_eq!(sd.eigenvalues(), &[1.0; 4]);
        assert_eq!(sd.ground_degeneracy(), 4);
    }

    #[test]
    fn two_site_ring_spectrum() {
        let h = build_hamiltonian(&ModelSpec::xxx(2, 1.0)).unwrap();
        let sd = diagonalize_full(&h).unwrap();
        let e = sd.eigenvalues();
        for (a, b) in e.iter().zip([-6.0, 2.0, 2.0, 2.0]) {
            assert!((a - b).abs() < 1e-12, "{e:?}");
        }
        assert_eq!(sd.ground_degeneracy(), 1);
    }

    #[test]
    fn two_site_sector_blocks() {
        let spec = ModelSpec::xxx(2, 1.0);
        let h = build_hamiltonian(&spec).unwrap();
        let sd = diagonalize_sectored(&h, &spec).unwrap();
        let sizes: Vec<usize> = sd.blocks.iter().map(|b| b.size).collect();
        assert_eq!(sizes, vec![1, 2, 1]);
        let e = sd.eigenvalues();
        for (a, b) in e.iter().zip([-6.0, 2.0, 2.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        // Singlet lives in the Σσz = 0 sector.
        assert_eq!(sd.sector_labels().unwrap()[0], 0);
    }

    #[test]
    fn three_site_ring_spectrum() {
        let sd = diagonalize_spec_sectored(&ModelSpec::xxx(3, 1.0)).unwrap();
        for (k, e) in sd.eigenvalues().iter().enumerate() {
            let want = if k < 4 { -3.0 } else { 3.0 };
            assert!((e - want).abs() < 1e-12);
        }
        assert_eq!(sd.ground_degeneracy(), 4);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = build_hamiltonian(&ModelSpec::xxx(2, 1.0)).unwrap();
        h.set(0, 1, c64::new(0.5, 0.0));
        assert!(matches!(diagonalize_full(&h), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn sectored_rejects_sz_breaking() {
        let spec = ModelSpec::general(
            3,
            vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]],
            vec![vec![0.0; 3]; 3],
            vec![vec![0.0; 3]; 3],
            0.0,
        );
        let h = build_hamiltonian(&spec).unwrap();
        assert!(matches!(
            diagonalize_sectored(&h, &spec),
            Err(Error::SymmetryViolated { name: "S_z", .. })
        ));
        assert!(diagonalize_spec_sectored(&spec).is_err());
        // Falls back to the dense path.
        let sd = diagonalize_model(&spec).unwrap();
        assert!(!sd.is_sectored());
        assert!(sd.max_residual(&h) < 1e-9);
    }

    #[test]
    fn complex_hermitian_input() {
        // σ_y has eigenvalues ±1 with complex eigenvectors.
        let h = crate::model::pauli_at(1, crate::model::Axis::Y, 1).unwrap();
        let sd = diagonalize_full(&h).unwrap();
        assert!((sd.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!(sd.max_residual(&h) < 1e-12);
        assert!(sd.orthonormality_defect() < 1e-12);
        // Phase convention: first significant amplitude is real positive.
        let v = sd.eigenvector(0);
        assert!(v[0].im.abs() < 1e-15 && v[0].re > 0.0);
    }

    #[test]
    fn contract_on_field_and_anisotropy() {
        let spec = ModelSpec::uniform(6, 1.0, 0.3, 0.7);
        let h = build_hamiltonian(&spec).unwrap();
        let full = diagonalize_full(&h).unwrap();
        let sect = diagonalize_sectored(&h, &spec).unwrap();
        let free = diagonalize_spec_sectored(&spec).unwrap();
        for sd in [&full, &sect, &free] {
            assert!(sd.max_residual(&h) < 1e-9);
            assert!(sd.orthonormality_defect() < 1e-9);
            assert!(sd.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        }
        for k in 0..64 {
            assert!((full.eigenvalues()[k] - sect.eigenvalues()[k]).abs() < 1e-9);
            assert_eq!(sect.eigenvalues()[k], free.eigenvalues()[k]);
        }
        let tr: f64 = (0..64).map(|i| h.get(i, i).re).sum();
        let s: f64 = full.eigenvalues().iter().sum();
        assert!((tr - s).abs() <= 1e-8 * tr.abs().max(1.0));
    }

    #[test]
    fn eigenvalues_only_matches() {
        let spec = ModelSpec::xxz(7, -1.0, 2.0);
        let a = model_eigenvalues(&spec).unwrap();
        let b = diagonalize_model(&spec).unwrap();
        for (x, y) in a.iter().zip(b.eigenvalues()) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}
