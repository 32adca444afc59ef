//! CHSH expectations and the maximal Bell violation of a two-qubit state.

use std::f64::consts::SQRT_2;

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Axis;
use crate::twoqubit::TwoQubitRDM;

pub type Vec3 = [f64; 3];
pub type Matrix3 = [[f64; 3]; 3];

/// Imaginary parts of `tr(ρ σ_n⊗σ_m)` above this are an error.
pub const IMAG_REJECT_TOL: f64 = 1e-8;
pub const UNIT_TOL: f64 = 1e-12;
/// Largest possible violation, `2√2`.
pub const TSIRELSON: f64 = 2.0 * SQRT_2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellResult {
    pub t_matrix: Matrix3,
    /// Two largest eigenvalues of `T Tᵀ`, largest first.
    pub top_two: (f64, f64),
    pub measure: f64,
    pub violates: bool,
}

/// Two measurement directions per party.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasurementFrame {
    pub a: Vec3,
    pub a_prime: Vec3,
    pub b: Vec3,
    pub b_prime: Vec3,
}

fn norm(v: &Vec3) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(u: &Vec3, v: &Vec3) -> f64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

fn apply(t: &Matrix3, v: &Vec3) -> Vec3 {
    [dot(&t[0], v), dot(&t[1], v), dot(&t[2], v)]
}

fn normalized(v: Vec3) -> Vec3 {
    let n = norm(&v);
    if n == 0.0 {
        return [0.0, 0.0, 1.0];
    }
    [v[0] / n, v[1] / n, v[2] / n]
}

impl MeasurementFrame {
    pub fn new(a: Vec3, a_prime: Vec3, b: Vec3, b_prime: Vec3) -> Result<Self> {
        for (name, v) in [("a", &a), ("a'", &a_prime), ("b", &b), ("b'", &b_prime)] {
            let n = norm(v);
            if (n - 1.0).abs() > UNIT_TOL || !n.is_finite() {
                return Err(Error::InvalidFrame(format!("{name} has norm {n}")));
            }
        }
        Ok(Self { a, a_prime, b, b_prime })
    }

    /// Frame reaching `|⟨B⟩| = 2√2` on the singlet.
    pub fn singlet_optimal() -> Self {
        let h = 1.0 / SQRT_2;
        Self {
            a: [1.0, 0.0, 0.0],
            a_prime: [0.0, 1.0, 0.0],
            b: [h, h, 0.0],
            b_prime: [h, -h, 0.0],
        }
    }

    /// Four independent directions drawn uniformly on the sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut draw = || -> Vec3 { UnitSphere.sample(rng) };
        Self {
            a: draw(),
            a_prime: draw(),
            b: draw(),
            b_prime: draw(),
        }
    }
}

/// `T_nm = tr(ρ σ_n⊗σ_m)`.
pub fn t_matrix(rdm: &TwoQubitRDM) -> Result<Matrix3> {
    let mut t = [[0.0; 3]; 3];
    for a in Axis::ALL {
        for b in Axis::ALL {
            let v = rdm.pauli_expectation(a, b);
            if v.im.abs() > IMAG_REJECT_TOL {
                return Err(Error::MalformedState(format!(
                    "correlation {a:?}{b:?} has imaginary part {:e}",
                    v.im
                )));
            }
            t[a.index()][b.index()] = v.re;
        }
    }
    Ok(t)
}

/// `⟨B⟩ = a·T(b + b′) + a′·T(b − b′)`.
pub fn chsh_from_t(t: &Matrix3, frame: &MeasurementFrame) -> f64 {
    let (b, bp) = (frame.b, frame.b_prime);
    let sum = [b[0] + bp[0], b[1] + bp[1], b[2] + bp[2]];
    let diff = [b[0] - bp[0], b[1] - bp[1], b[2] - bp[2]];
    dot(&frame.a, &apply(t, &sum)) + dot(&frame.a_prime, &apply(t, &diff))
}

pub fn chsh_expectation(rdm: &TwoQubitRDM, frame: &MeasurementFrame) -> Result<f64> {
    let frame = MeasurementFrame::new(frame.a, frame.a_prime, frame.b, frame.b_prime)?;
    Ok(chsh_from_t(&t_matrix(rdm)?, &frame))
}

/// `𝓑 = 2√(u + ũ)` from the correlation tensor alone.
pub fn violation_from_t(t: &Matrix3) -> BellResult {
    let ttt = Mat::<f64>::from_fn(3, 3, |r, c| dot(&t[r], &t[c]));
    let mut eig = ttt
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .unwrap_or_else(|_| vec![0.0; 3]);
    eig.sort_by(|x, y| y.total_cmp(x));
    let clip = |x: f64| if (-1e-12..0.0).contains(&x) { 0.0 } else { x };
    let (u, ut) = (clip(eig[0]), clip(eig[1]));
    let measure = 2.0 * (u + ut).max(0.0).sqrt();
    BellResult {
        t_matrix: *t,
        top_two: (u, ut),
        measure,
        violates: measure > 2.0,
    }
}

pub fn violation_measure(rdm: &TwoQubitRDM) -> Result<BellResult> {
    Ok(violation_from_t(&t_matrix(rdm)?))
}

/// Isotropic ring without field: `𝓑 = 2√2 |U/(3JN)|`.
pub fn violation_xxx(u: f64, j: f64, n: usize) -> Result<f64> {
    if j == 0.0 || !j.is_finite() {
        return Err(Error::Precondition(format!("exchange J must be nonzero, got {j}")));
    }
    let g = u / (3.0 * j * n as f64);
    // AFM rings have G_xx ≤ 0, FM rings G_xx ≥ 0; both give 2√2|G_xx|.
    Ok(if j > 0.0 { -TSIRELSON * g } else { TSIRELSON * g }.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Afm,
    Fm,
}

impl Regime {
    pub fn of_exchange(j: f64) -> Self {
        if j > 0.0 { Regime::Afm } else { Regime::Fm }
    }
}

/// Concurrence of an isotropic ring state from its violation measure.
pub fn concurrence_vs_violation(measure: f64, regime: Regime) -> Result<f64> {
    if !(-1e-10..=TSIRELSON + 1e-10).contains(&measure) {
        return Err(Error::Precondition(format!(
            "violation measure {measure} outside [0, 2√2]"
        )));
    }
    let scaled = measure / TSIRELSON;
    let c = match regime {
        Regime::Afm => 0.5 * (3.0 * scaled - 1.0).max(0.0),
        Regime::Fm => 0.5 * (scaled - 1.0).max(0.0),
    };
    Ok(crate::entanglement::finalize(c))
}

/// Largest `|⟨B⟩|` over `count` random frames. Frame `k` draws from a
/// ChaCha8 stream `k` keyed by `seed`, so the result does not depend on
/// thread scheduling.
pub fn random_frame_max(t: &Matrix3, seed: u64, count: usize) -> f64 {
    (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            chsh_from_t(t, &MeasurementFrame::random(&mut rng)).abs()
        })
        .reduce(|| 0.0, f64::max)
}

/// Local search over frames. For fixed `b, b′` the best `a, a′` are known in
/// closed form, so only the `b` side is perturbed.
pub fn hill_climb(t: &Matrix3, seed: u64, iterations: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let score = |b: &Vec3, bp: &Vec3| {
        let sum = [b[0] + bp[0], b[1] + bp[1], b[2] + bp[2]];
        let diff = [b[0] - bp[0], b[1] - bp[1], b[2] - bp[2]];
        norm(&apply(t, &sum)) + norm(&apply(t, &diff))
    };
    let mut b: Vec3 = UnitSphere.sample(&mut rng);
    let mut bp: Vec3 = UnitSphere.sample(&mut rng);
    let mut best = score(&b, &bp);
    let mut step = 0.5;
    for _ in 0..iterations {
        let jitter = |v: &Vec3, rng: &mut ChaCha8Rng| {
            let d: Vec3 = UnitSphere.sample(rng);
            normalized([v[0] + step * d[0], v[1] + step * d[1], v[2] + step * d[2]])
        };
        let nb = jitter(&b, &mut rng);
        let nbp = jitter(&bp, &mut rng);
        let s = score(&nb, &nbp);
        if s > best {
            (b, bp, best) = (nb, nbp, s);
        } else {
            step = (step * 0.97).max(1e-6);
        }
    }
    best
}
