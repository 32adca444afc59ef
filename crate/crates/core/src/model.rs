//! Ring Hamiltonians and symmetry operators in the computational basis.
//!
//! Basis index `b` in `0..2^N` is read as the bit string `m_1 … m_N` with
//! `m_1` the most significant bit. `m_i = 0` is spin up (σ_z = +1) and
//! `m_i = 1` is spin down. Sites are 1-based in every public signature.
//!
//! The uniform Hamiltonian is
//!
//! ```text
//! H = J Σ_{i=1..N} [ σ_i·σ_{i+1} + (Δ-1) σ_i^z σ_{i+1}^z ] + B Σ_i σ_i^z,   N+1 ≡ 1
//! ```
//!
//! The bond sum runs over `i = 1..N` literally, so for `N = 2` the pair
//! (1,2) appears twice. That doubling is what gives the two-site ring the
//! spectrum `{-6J, 2J, 2J, 2J}`; do not de-duplicate it.
//!
//! The general form sums over ordered pairs,
//! `H = Σ_{i≠j} (J^x_ij σ_i^x σ_j^x + J^y_ij σ_i^y σ_j^y + J^z_ij σ_i^z σ_j^z) + B Σ_i σ_i^z`,
//! so a symmetric coupling matrix contributes every unordered pair twice.

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of sites.
pub const DEFAULT_MAX_SITES: usize = 14;

/// Absolute threshold on a scale-normalized commutator below which a
/// symmetry is considered exact.
pub const COMMUTATOR_TOL: f64 = 1e-10;

/// Hermiticity tolerance for [`OperatorMatrix`] flags.
pub const HERMITIAN_TOL: f64 = 1e-10;

const fn default_max_sites() -> usize {
    DEFAULT_MAX_SITES
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Single-qubit Pauli matrix in the `{|0⟩=up, |1⟩=down}` basis.
pub fn pauli(axis: Axis) -> [[c64; 2]; 2] {
    let o = c64::new(0.0, 0.0);
    let one = c64::new(1.0, 0.0);
    let i = c64::new(0.0, 1.0);
    match axis {
        Axis::X => [[o, one], [one, o]],
        Axis::Y => [[o, -i], [i, o]],
        Axis::Z => [[one, o], [o, -one]],
    }
}

/// Exchange couplings of a ring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Coupling {
    /// Nearest-neighbour XXZ ring with exchange `j` and anisotropy `delta`.
    Uniform { j: f64, delta: f64 },
    /// Arbitrary symmetric couplings `J^α_ij` (zero diagonal), summed over
    /// ordered pairs `i ≠ j`.
    General {
        jx: Vec<Vec<f64>>,
        jy: Vec<Vec<f64>>,
        jz: Vec<Vec<f64>>,
    },
}

impl Coupling {
    /// General-mode matrices that reproduce the uniform ring `(j, delta)`.
    ///
    /// Each bond of the uniform sum adds `J/2` to both `(i,j)` and `(j,i)`,
    /// so the ordered-pair sum gives back exactly one `J` per bond (and the
    /// doubled bond for `N = 2`).
    pub fn ring_pattern(n: usize, j: f64, delta: f64) -> Coupling {
        let mut jx = vec![vec![0.0; n]; n];
        let mut jz = vec![vec![0.0; n]; n];
        for a in 0..n {
            let b = (a + 1) % n;
            jx[a][b] += j / 2.0;
            jx[b][a] += j / 2.0;
            jz[a][b] += j * delta / 2.0;
            jz[b][a] += j * delta / 2.0;
        }
        Coupling::General {
            jy: jx.clone(),
            jx,
            jz,
        }
    }
}

/// Full description of a periodic spin-1/2 ring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub n_sites: usize,
    pub coupling: Coupling,
    #[serde(default)]
    pub field_b: f64,
    #[serde(default = "default_max_sites")]
    pub max_sites: usize,
}

/// One term `jx σ^x_i σ^x_j + jy σ^y_i σ^y_j + jz σ^z_i σ^z_j` (0-based sites).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

impl ModelSpec {
    pub fn uniform(n_sites: usize, j: f64, delta: f64, field_b: f64) -> Self {
        ModelSpec {
            n_sites,
            coupling: Coupling::Uniform { j, delta },
            field_b,
            max_sites: DEFAULT_MAX_SITES,
        }
    }

    /// Isotropic ring, `Δ = 1`, no field.
    pub fn xxx(n_sites: usize, j: f64) -> Self {
        Self::uniform(n_sites, j, 1.0, 0.0)
    }

    pub fn xxz(n_sites: usize, j: f64, delta: f64) -> Self {
        Self::uniform(n_sites, j, delta, 0.0)
    }

    pub fn general(
        n_sites: usize,
        jx: Vec<Vec<f64>>,
        jy: Vec<Vec<f64>>,
        jz: Vec<Vec<f64>>,
        field_b: f64,
    ) -> Self {
        ModelSpec {
            n_sites,
            coupling: Coupling::General { jx, jy, jz },
            field_b,
            max_sites: DEFAULT_MAX_SITES,
        }
    }

    pub fn with_field(mut self, field_b: f64) -> Self {
        self.field_b = field_b;
        self
    }

    pub fn with_max_sites(mut self, max_sites: usize) -> Self {
        self.max_sites = max_sites;
        self
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_sites
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_sites;
        if n < 2 {
            return Err(Error::InvalidModel(format!("n_sites must be >= 2, got {n}")));
        }
        if n > self.max_sites {
            return Err(Error::DimensionOverflow {
                n,
                cap: self.max_sites,
            });
        }
        if n >= usize::BITS as usize - 1 {
            return Err(Error::DimensionOverflow {
                n,
                cap: usize::BITS as usize - 2,
            });
        }
        if !self.field_b.is_finite() {
            return Err(Error::InvalidModel("field_b must be finite".into()));
        }
        match &self.coupling {
            Coupling::Uniform { j, delta } => {
                if !j.is_finite() || !delta.is_finite() {
                    return Err(Error::InvalidModel("j and delta must be finite".into()));
                }
            }
            Coupling::General { jx, jy, jz } => {
                for (name, m) in [("jx", jx), ("jy", jy), ("jz", jz)] {
                    if m.len() != n || m.iter().any(|row| row.len() != n) {
                        return Err(Error::InvalidModel(format!("{name} must be {n}x{n}")));
                    }
                    for a in 0..n {
                        if m[a][a] != 0.0 {
                            return Err(Error::InvalidModel(format!(
                                "{name}[{a}][{a}] must be zero"
                            )));
                        }
                        for b in 0..n {
                            if !m[a][b].is_finite() {
                                return Err(Error::InvalidModel(format!(
                                    "{name}[{a}][{b}] is not finite"
                                )));
                            }
                            if m[a][b] != m[b][a] {
                                return Err(Error::InvalidModel(format!(
                                    "{name} must be symmetric ({a},{b})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `(J, Δ)` for uniform rings.
    pub fn uniform_params(&self) -> Option<(f64, f64)> {
        match self.coupling {
            Coupling::Uniform { j, delta } => Some((j, delta)),
            Coupling::General { .. } => None,
        }
    }

    /// Uniform exchange `J` if the ring is uniform.
    pub fn exchange(&self) -> Option<f64> {
        self.uniform_params().map(|(j, _)| j)
    }

    /// Uniform ring with `Δ = 1` (any field).
    pub fn is_isotropic(&self) -> bool {
        matches!(self.uniform_params(), Some((_, d)) if d == 1.0)
    }

    /// Isotropic ring with zero field.
    pub fn is_xxx(&self) -> bool {
        self.is_isotropic() && self.field_b == 0.0
    }

    /// Total σ_z is conserved when `J^x = J^y` on every pair.
    pub fn conserves_sz(&self) -> bool {
        match &self.coupling {
            Coupling::Uniform { .. } => true,
            Coupling::General { jx, jy, .. } => jx == jy,
        }
    }

    /// True when `(i, j)` (1-based) are ring neighbours.
    pub fn is_nearest_neighbor(&self, i: usize, j: usize) -> bool {
        let n = self.n_sites;
        i != j && ((i % n) + 1 == j || (j % n) + 1 == i)
    }

    pub fn bonds(&self) -> Vec<Bond> {
        let n = self.n_sites;
        match &self.coupling {
            Coupling::Uniform { j, delta } => (0..n)
                .map(|i| Bond {
                    i,
                    j: (i + 1) % n,
                    jx: *j,
                    jy: *j,
                    jz: j * delta,
                })
                .collect(),
            Coupling::General { jx, jy, jz } => {
                let mut out = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let b = Bond {
                            i,
                            j,
                            jx: jx[i][j],
                            jy: jy[i][j],
                            jz: jz[i][j],
                        };
                        if b.jx != 0.0 || b.jy != 0.0 || b.jz != 0.0 {
                            out.push(b);
                        }
                    }
                }
                out
            }
        }
    }
}

/// Bit mask of a 0-based site in an `n`-site basis index.
#[inline]
pub fn site_mask(site0: usize, n: usize) -> usize {
    1usize << (n - 1 - site0)
}

/// σ_z eigenvalue (+1 up, -1 down) of a 0-based site in basis state `b`.
#[inline]
pub fn spin_z(b: usize, site0: usize, n: usize) -> f64 {
    if b & site_mask(site0, n) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Eigenvalue of `Σ_i σ_i^z` on basis state `b`.
#[inline]
pub fn total_sigma_z(b: usize, n: usize) -> i32 {
    n as i32 - 2 * b.count_ones() as i32
}

/// Matrix-free Hamiltonian: every nonzero `H[row, col]` of column `col`.
///
/// Entries are real for every model this crate builds. The same row can be
/// emitted more than once and callers must accumulate.
pub(crate) struct HamiltonianColumns {
    n: usize,
    bonds: Vec<Bond>,
    field_b: f64,
}

impl HamiltonianColumns {
    pub(crate) fn new(spec: &ModelSpec) -> Result<Self> {
        spec.validate()?;
        Ok(HamiltonianColumns {
            n: spec.n_sites,
            bonds: spec.bonds(),
            field_b: spec.field_b,
        })
    }

    pub(crate) fn visit(&self, col: usize, mut f: impl FnMut(usize, f64)) {
        let n = self.n;
        let mut diag = 0.0;
        for bond in &self.bonds {
            let mi = site_mask(bond.i, n);
            let mj = site_mask(bond.j, n);
            let bi = col & mi != 0;
            let bj = col & mj != 0;
            diag += if bi == bj { bond.jz } else { -bond.jz };
            // σxσx + σyσy flip both spins; σyσy carries -1 on aligned pairs.
            let amp = if bi == bj {
                bond.jx - bond.jy
            } else {
                bond.jx + bond.jy
            };
            if amp != 0.0 {
                f(col ^ mi ^ mj, amp);
            }
        }
        if self.field_b != 0.0 {
            diag += self.field_b * total_sigma_z(col, n) as f64;
        }
        if diag != 0.0 {
            f(col, diag);
        }
    }
}

/// Dense complex operator on the `2^N`-dimensional ring space.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    data: Mat<c64>,
    hermitian_flag: bool,
}

impl OperatorMatrix {
    /// Wraps a square matrix and records whether it is Hermitian within
    /// [`HERMITIAN_TOL`].
    pub fn from_mat(data: Mat<c64>) -> Self {
        assert_eq!(data.nrows(), data.ncols(), "operator must be square");
        let mut op = OperatorMatrix {
            data,
            hermitian_flag: false,
        };
        op.hermitian_flag = op.hermiticity_defect() <= HERMITIAN_TOL;
        op
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_mat(Mat::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_mat(Mat::from_fn(dim, dim, |r, c| {
            if r == c {
                c64::new(1.0, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        }))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> c64) -> Self {
        Self::from_mat(Mat::from_fn(dim, dim, f))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn hermitian_flag(&self) -> bool {
        self.hermitian_flag
    }

    pub fn as_mat(&self) -> &Mat<c64> {
        &self.data
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> c64 {
        self.data[(row, col)]
    }

    /// Overwrites one entry; the Hermitian flag is recomputed.
    pub fn set(&mut self, row: usize, col: usize, value: c64) {
        self.data[(row, col)] = value;
        self.hermitian_flag = self.hermiticity_defect() <= HERMITIAN_TOL;
    }

    /// `max |A - A†|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for c in 0..n {
            for r in c..n {
                let d = (self.data[(r, c)] - self.data[(c, r)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for c in 0..n {
            for r in 0..n {
                m = m.max(self.data[(r, c)].norm());
            }
        }
        m
    }

    /// Largest imaginary part in absolute value.
    pub fn max_abs_imag(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for c in 0..n {
            for r in 0..n {
                m = m.max(self.data[(r, c)].im.abs());
            }
        }
        m
    }

    pub fn trace(&self) -> c64 {
        (0..self.dim()).map(|i| self.data[(i, i)]).sum()
    }

    pub fn matmul(&self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::from_mat(&self.data * &rhs.data)
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix::from_mat(self.data.adjoint().to_owned())
    }

    /// `max |A - B|` entrywise.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        let mut m = 0.0f64;
        for c in 0..n {
            for r in 0..n {
                m = m.max((self.data[(r, c)] - other.data[(r, c)]).norm());
            }
        }
        m
    }

    /// `A |v⟩`.
    pub fn apply(&self, v: &[c64]) -> Vec<c64> {
        let n = self.dim();
        assert_eq!(v.len(), n);
        let mut out = vec![c64::new(0.0, 0.0); n];
        for (c, &vc) in v.iter().enumerate() {
            if vc == c64::new(0.0, 0.0) {
                continue;
            }
            let col = self.data.col(c);
            for (r, o) in out.iter_mut().enumerate() {
                *o += col[r] * vc;
            }
        }
        out
    }
}

/// `I ⊗ … ⊗ σ_axis ⊗ … ⊗ I` with the Pauli matrix on `site` (1-based).
pub fn pauli_at(site: usize, axis: Axis, n: usize) -> Result<OperatorMatrix> {
    if site == 0 || site > n {
        return Err(Error::SiteOutOfRange { site, n });
    }
    let op = SparseOperator::pauli(site - 1, axis, n);
    Ok(op.to_dense())
}

/// Dense Hamiltonian of `spec`.
pub fn build_hamiltonian(spec: &ModelSpec) -> Result<OperatorMatrix> {
    let cols = HamiltonianColumns::new(spec)?;
    let dim = spec.dim();
    let mut m = Mat::<c64>::zeros(dim, dim);
    for c in 0..dim {
        cols.visit(c, |r, v| m[(r, c)] += c64::new(v, 0.0));
    }
    Ok(OperatorMatrix::from_mat(m))
}

/// Column-sparse operator; used for the symmetry generators, which have at
/// most `N` nonzeros per column.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    dim: usize,
    columns: Vec<Vec<(usize, c64)>>,
}

impl SparseOperator {
    fn from_columns(dim: usize, f: impl Fn(usize) -> Vec<(usize, c64)>) -> Self {
        SparseOperator {
            dim,
            columns: (0..dim).map(f).collect(),
        }
    }

    pub fn pauli(site0: usize, axis: Axis, n: usize) -> Self {
        let dim = 1usize << n;
        let mask = site_mask(site0, n);
        Self::from_columns(dim, move |b| {
            let up = b & mask == 0;
            let v = match axis {
                Axis::X => (b ^ mask, c64::new(1.0, 0.0)),
                Axis::Y => (b ^ mask, if up { c64::new(0.0, 1.0) } else { c64::new(0.0, -1.0) }),
                Axis::Z => (b, c64::new(if up { 1.0 } else { -1.0 }, 0.0)),
            };
            vec![v]
        })
    }

    /// Collective spin `S_α = Σ_i σ_i^α / 2`.
    pub fn total_spin(axis: Axis, n: usize) -> Self {
        let dim = 1usize << n;
        Self::from_columns(dim, move |b| match axis {
            Axis::Z => vec![(b, c64::new(total_sigma_z(b, n) as f64 / 2.0, 0.0))],
            Axis::X | Axis::Y => (0..n)
                .map(|s| {
                    let mask = site_mask(s, n);
                    let v = match axis {
                        Axis::X => c64::new(0.5, 0.0),
                        _ if b & mask == 0 => c64::new(0.0, 0.5),
                        _ => c64::new(0.0, -0.5),
                    };
                    (b ^ mask, v)
                })
                .collect(),
        })
    }

    /// Global flip `Q_x = σ_x^{⊗N}`.
    pub fn global_flip(n: usize) -> Self {
        let dim = 1usize << n;
        let all = dim - 1;
        Self::from_columns(dim, move |b| vec![(b ^ all, c64::new(1.0, 0.0))])
    }

    /// Right cyclic shift `T|m_1,…,m_N⟩ = |m_N,m_1,…,m_{N-1}⟩`.
    pub fn cyclic_shift(n: usize) -> Self {
        let dim = 1usize << n;
        Self::from_columns(dim, move |b| {
            vec![((b >> 1) | ((b & 1) << (n - 1)), c64::new(1.0, 0.0))]
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn to_dense(&self) -> OperatorMatrix {
        let mut m = Mat::<c64>::zeros(self.dim, self.dim);
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m[(r, c)] += v;
            }
        }
        OperatorMatrix::from_mat(m)
    }

    /// `max |[A, S]|` entrywise, without forming `S` densely.
    pub fn commutator_max_abs(&self, a: &OperatorMatrix) -> f64 {
        assert_eq!(a.dim(), self.dim);
        let n = self.dim;
        let am = a.as_mat();
        let zero = c64::new(0.0, 0.0);
        let mut col = vec![zero; n];
        let mut worst = 0.0f64;
        for c in 0..n {
            col.iter_mut().for_each(|x| *x = zero);
            // (A S)[:, c] = Σ_k A[:, k] S[k, c]
            for &(k, s) in &self.columns[c] {
                let ak = am.col(k);
                for r in 0..n {
                    col[r] += ak[r] * s;
                }
            }
            // (S A)[:, c] = Σ_k S[:, k] A[k, c]
            for k in 0..n {
                let akc = am[(k, c)];
                if akc == zero {
                    continue;
                }
                for &(r, s) in &self.columns[k] {
                    col[r] -= s * akc;
                }
            }
            for x in &col {
                worst = worst.max(x.norm());
            }
        }
        worst
    }
}

/// Commutator norms of `H` against the ring's symmetry generators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub entries: Vec<(String, f64)>,
}

impl SymmetryReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    pub fn holds(&self, name: &str) -> bool {
        self.get(name).is_some_and(|v| v <= COMMUTATOR_TOL)
    }
}

/// Max-entry norms of `[H,S_z]`, `[H,S_x]`, `[H,S_y]`, `[H,Q_x]`, `[H,T]`,
/// each divided by `max |H|` (left unscaled when `H = 0`).
pub fn symmetry_report(spec: &ModelSpec) -> Result<SymmetryReport> {
    let h = build_hamiltonian(spec)?;
    Ok(symmetry_report_for(&h, spec.n_sites))
}

pub fn symmetry_report_for(h: &OperatorMatrix, n: usize) -> SymmetryReport {
    let scale = h.max_abs();
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let ops = [
        ("S_z", SparseOperator::total_spin(Axis::Z, n)),
        ("S_x", SparseOperator::total_spin(Axis::X, n)),
        ("S_y", SparseOperator::total_spin(Axis::Y, n)),
        ("Q_x", SparseOperator::global_flip(n)),
        ("T_shift", SparseOperator::cyclic_shift(n)),
    ];
    SymmetryReport {
        entries: ops
            .iter()
            .map(|(name, op)| (name.to_string(), op.commutator_max_abs(h) / scale))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> c64 {
        c64::new(x, 0.0)
    }

    #[test]
    fn single_site_sigma_z() {
        let z = pauli_at(1, Axis::Z, 1).unwrap();
        assert_eq!(z.get(0, 0), re(1.0));
        assert_eq!(z.get(1, 1), re(-1.0));
        assert_eq!(z.get(0, 1), re(0.0));
    }

    #[test]
    fn kron_placement_of_second_site() {
        let z = pauli_at(2, Axis::Z, 2).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| z.get(i, i).re).collect();
        assert_eq!(diag, vec![1.0, -1.0, 1.0, -1.0]);
        assert_eq!(z.max_abs_imag(), 0.0);
    }

    #[test]
    fn pauli_orthogonality() {
        let n = 3;
        for i in 1..=n {
            for a in Axis::ALL {
                let p = pauli_at(i, a, n).unwrap();
                assert!(p.hermitian_flag());
                assert_eq!(p.trace().norm(), 0.0);
                let sq = p.matmul(&p);
                assert!(sq.max_abs_diff(&OperatorMatrix::identity(8)) < 1e-15);
                for j in 1..=n {
                    for b in Axis::ALL {
                        let q = pauli_at(j, b, n).unwrap();
                        let t = p.matmul(&q).trace();
                        let expect = if i == j && a == b { 8.0 } else { 0.0 };
                        assert!((t - re(expect)).norm() < 1e-14, "{i}{a:?} {j}{b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn pauli_site_out_of_range() {
        assert!(matches!(
            pauli_at(0, Axis::X, 2),
            Err(Error::SiteOutOfRange { site: 0, n: 2 })
        ));
        assert!(pauli_at(3, Axis::X, 2).is_err());
    }

    #[test]
    fn zero_coupling_gives_zero_matrix() {
        let h = build_hamiltonian(&ModelSpec::xxx(2, 0.0)).unwrap();
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn two_site_ring_matrix_entries() {
        // Doubled bond: H = 2J(σ·σ), so diag (2,-2,-2,2) and flip amplitude 4.
        let h = build_hamiltonian(&ModelSpec::xxx(2, 1.0)).unwrap();
        assert_eq!(h.get(0, 0), re(2.0));
        assert_eq!(h.get(1, 1), re(-2.0));
        assert_eq!(h.get(2, 1), re(4.0));
        assert_eq!(h.get(1, 2), re(4.0));
        assert_eq!(h.get(3, 0), re(0.0));
    }

    #[test]
    fn hamiltonian_matches_pauli_products() {
        // Independent route: sum the Kronecker products directly.
        let spec = ModelSpec::uniform(4, 0.7, 0.3, -0.4);
        let h = build_hamiltonian(&spec).unwrap();
        let n = 4;
        let mut acc = OperatorMatrix::zeros(16);
        for i in 1..=n {
            let k = i % n + 1;
            for (a, w) in [(Axis::X, 0.7), (Axis::Y, 0.7), (Axis::Z, 0.7 * 0.3)] {
                let term = pauli_at(i, a, n).unwrap().matmul(&pauli_at(k, a, n).unwrap());
                acc = OperatorMatrix::from_fn(16, |r, c| acc.get(r, c) + term.get(r, c) * w);
            }
            let z = pauli_at(i, Axis::Z, n).unwrap();
            acc = OperatorMatrix::from_fn(16, |r, c| acc.get(r, c) + z.get(r, c) * -0.4);
        }
        assert!(h.max_abs_diff(&acc) < 1e-14);
    }

    #[test]
    fn general_xyz_matches_pauli_products() {
        let n = 3;
        let jx = vec![vec![0.0, 0.5, -0.2], vec![0.5, 0.0, 0.1], vec![-0.2, 0.1, 0.0]];
        let jy = vec![vec![0.0, 0.3, 0.0], vec![0.3, 0.0, 0.7], vec![0.0, 0.7, 0.0]];
        let jz = vec![vec![0.0, -1.0, 0.4], vec![-1.0, 0.0, 0.2], vec![0.4, 0.2, 0.0]];
        let spec = ModelSpec::general(n, jx.clone(), jy.clone(), jz.clone(), 0.25);
        let h = build_hamiltonian(&spec).unwrap();
        let mut acc = OperatorMatrix::zeros(8);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for (a, m) in [(Axis::X, &jx), (Axis::Y, &jy), (Axis::Z, &jz)] {
                    let t = pauli_at(i + 1, a, n)
                        .unwrap()
                        .matmul(&pauli_at(j + 1, a, n).unwrap());
                    acc = OperatorMatrix::from_fn(8, |r, c| acc.get(r, c) + t.get(r, c) * m[i][j]);
                }
            }
            let z = pauli_at(i + 1, Axis::Z, n).unwrap();
            acc = OperatorMatrix::from_fn(8, |r, c| acc.get(r, c) + z.get(r, c) * 0.25);
        }
        assert!(h.max_abs_diff(&acc) < 1e-14);
        assert!(h.hermitian_flag());
    }

    #[test]
    fn ring_pattern_reproduces_uniform_exactly() {
        for n in [2, 3, 4, 5] {
            for (j, d, b) in [(1.0, 1.0, 0.0), (-0.5, 0.25, 0.75), (2.0, 0.0, -1.5)] {
                let u = build_hamiltonian(&ModelSpec::uniform(n, j, d, b)).unwrap();
                let spec = ModelSpec {
                    n_sites: n,
                    coupling: Coupling::ring_pattern(n, j, d),
                    field_b: b,
                    max_sites: DEFAULT_MAX_SITES,
                };
                let g = build_hamiltonian(&spec).unwrap();
                assert_eq!(u.max_abs_diff(&g), 0.0, "n={n} j={j} d={d}");
            }
        }
    }

    #[test]
    fn validation_rejects_bad_specs() {
        assert!(ModelSpec::xxx(1, 1.0).validate().is_err());
        assert!(matches!(
            ModelSpec::xxx(15, 1.0).validate(),
            Err(Error::DimensionOverflow { n: 15, cap: 14 })
        ));
        assert!(ModelSpec::xxx(15, 1.0).with_max_sites(16).validate().is_ok());
        let asym = ModelSpec::general(
            2,
            vec![vec![0.0, 1.0], vec![0.5, 0.0]],
            vec![vec![0.0; 2]; 2],
            vec![vec![0.0; 2]; 2],
            0.0,
        );
        assert!(asym.validate().is_err());
        let diag = ModelSpec::general(
            2,
            vec![vec![1.0, 0.0], vec![0.0, 0.0]],
            vec![vec![0.0; 2]; 2],
            vec![vec![0.0; 2]; 2],
            0.0,
        );
        assert!(diag.validate().is_err());
    }

    #[test]
    fn symmetry_report_xxx() {
        let r = symmetry_report(&ModelSpec::xxx(5, 1.0)).unwrap();
        for (name, v) in &r.entries {
            assert!(*v <= 1e-10, "{name}: {v}");
        }
    }

    #[test]
    fn symmetry_report_xxz_breaks_su2() {
        let r = symmetry_report(&ModelSpec::xxz(4, 1.0, 0.5)).unwrap();
        assert!(r.holds("S_z"));
        assert!(r.holds("Q_x"));
        assert!(r.holds("T_shift"));
        assert!(r.get("S_x").unwrap() > 1e-6);
        assert!(r.get("S_y").unwrap() > 1e-6);
    }

    #[test]
    fn symmetry_report_field_breaks_flip() {
        let r = symmetry_report(&ModelSpec::xxx(4, 1.0).with_field(0.5)).unwrap();
        assert!(r.holds("S_z"));
        assert!(r.get("Q_x").unwrap() > 1e-6);
    }

    #[test]
    fn translation_covariance() {
        let h = build_hamiltonian(&ModelSpec::uniform(5, 1.3, 0.4, 0.2)).unwrap();
        let t = SparseOperator::cyclic_shift(5).to_dense();
        let thd = t.matmul(&h).matmul(&t.adjoint());
        assert!(thd.max_abs_diff(&h) <= 1e-12);
    }

    #[test]
    fn cyclic_shift_moves_last_spin_first() {
        // |m1 m2 m3⟩ = |0 0 1⟩ -> |1 0 0⟩
        let t = SparseOperator::cyclic_shift(3).to_dense();
        assert_eq!(t.get(0b100, 0b001), re(1.0));
    }
}
