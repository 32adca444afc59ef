//! Invariant suite over a grid of rings and temperatures.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Spacing, SweepConfig, TemperatureGrid};
use super::render::{Cell, Table};
use crate::bell::{concurrence_vs_violation, violation_xxx, Regime};
use crate::error::Result;
use crate::model::{build_hamiltonian, symmetry_report_for, ModelSpec, OperatorMatrix, COMMUTATOR_TOL};
use crate::report::RingAnalysis;
use crate::spectral::{diagonalize_full, diagonalize_sectored, SpectralDecomposition};
use crate::thermo::check_derivatives;
use crate::twoqubit::check_element_relations;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyCase {
    pub spec: ModelSpec,
    pub temperatures: Vec<f64>,
    pub pair: (usize, usize),
}

impl VerifyCase {
    pub fn label(&self) -> String {
        let s = &self.spec;
        match s.uniform_params() {
            Some((j, d)) => format!("N={} J={j} delta={d} B={}", s.n_sites, s.field_b),
            None => format!("N={} general B={}", s.n_sites, s.field_b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub cases: usize,
    pub passed: bool,
    pub worst_case: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(
            ["check", "residual", "tolerance", "cases", "passed", "worst_case"]
                .map(String::from)
                .to_vec(),
        );
        for c in &self.checks {
            t.rows.push(vec![
                Cell::Text(c.name.clone()),
                Cell::Num(c.residual),
                Cell::Num(c.tolerance),
                Cell::Int(c.cases as i64),
                Cell::Bool(c.passed),
                Cell::Text(c.worst_case.clone()),
            ]);
        }
        t.meta.insert("passed".into(), self.passed().into());
        t
    }
}

/// Residuals of one case, keyed by check name.
#[derive(Default)]
struct Findings {
    entries: Vec<(&'static str, f64, f64)>,
}

impl Findings {
    fn record(&mut self, name: &'static str, residual: f64, tolerance: f64) {
        self.entries.push((name, residual, tolerance));
    }
}

/// Rings N = 2..=8, Δ ∈ {0, 0.5, 1, 2}, B ∈ {0, 0.5} with J = 1, plus
/// ferromagnetic isotropic rings, each on a log grid T ∈ [0.1, 10].
pub fn default_cases() -> Vec<VerifyCase> {
    let temps = TemperatureGrid::range(0.1, 10.0, 9, Spacing::Log)
        .points()
        .unwrap_or_default();
    let mut cases = Vec::new();
    for n in 2..=8 {
        for delta in [0.0, 0.5, 1.0, 2.0] {
            for b in [0.0, 0.5] {
                cases.push(VerifyCase {
                    spec: ModelSpec::uniform(n, 1.0, delta, b),
                    temperatures: temps.clone(),
                    pair: (1, 2),
                });
            }
        }
        cases.push(VerifyCase {
            spec: ModelSpec::xxx(n, -1.0),
            temperatures: temps.clone(),
            pair: (1, 2),
        });
    }
    cases
}

pub fn cases_from_config(cfg: &SweepConfig) -> Result<Vec<VerifyCase>> {
    cfg.validate()?;
    let temperatures = match &cfg.temperatures {
        Some(t) => t.points()?,
        None => TemperatureGrid::range(0.1, 10.0, 9, Spacing::Log).points()?,
    };
    Ok(vec![VerifyCase {
        spec: cfg.model.clone(),
        temperatures,
        pair: cfg.pair,
    }])
}

pub type Tamper = dyn Fn(&ModelSpec, &mut OperatorMatrix) + Sync;

fn spectra(h: &OperatorMatrix, spec: &ModelSpec) -> Result<(SpectralDecomposition, SpectralDecomposition)> {
    let full = diagonalize_full(h)?;
    let primary = if spec.conserves_sz() {
        diagonalize_sectored(h, spec)?
    } else {
        full.clone()
    };
    Ok((primary, full))
}

fn check_case(case: &VerifyCase, tamper: Option<&Tamper>) -> Findings {
    let mut f = Findings::default();
    if let Err(e) = check_case_inner(case, tamper, &mut f) {
        log::error!("{}: {e}", case.label());
        f.record("evaluation_error", 1.0, 0.0);
    }
    f
}

fn check_case_inner(case: &VerifyCase, tamper: Option<&Tamper>, f: &mut Findings) -> Result<()> {
    let spec = &case.spec;
    let mut h = build_hamiltonian(spec)?;
    if let Some(t) = tamper {
        t(spec, &mut h);
    }
    let scale = h.max_abs().max(1.0);
    let defect = h.hermiticity_defect() / scale;
    f.record("hermiticity", defect, 1e-10);
    if defect > 1e-10 {
        return Ok(());
    }

    let sym = symmetry_report_for(&h, spec.n_sites);
    let norm = |name: &str| sym.get(name).unwrap_or(f64::INFINITY);
    f.record("commutes_translation", norm("T_shift"), COMMUTATOR_TOL);
    if spec.conserves_sz() {
        f.record("commutes_total_sz", norm("S_z"), COMMUTATOR_TOL);
    }
    if spec.field_b == 0.0 {
        f.record("commutes_global_flip", norm("Q_x"), COMMUTATOR_TOL);
    }
    if spec.is_xxx() {
        f.record("commutes_total_spin", norm("S_x").max(norm("S_y")), COMMUTATOR_TOL);
    }

    let (sd, full) = spectra(&h, spec)?;
    f.record("eigen_residual", sd.max_residual(&h), 1e-9);
    f.record("orthonormality", sd.orthonormality_defect(), 1e-10);
    let gap = sd
        .eigenvalues()
        .iter()
        .zip(full.eigenvalues())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    f.record("sector_matches_full", gap / scale, 1e-9);

    let analysis = RingAnalysis::from_spectrum(spec, sd, case.pair)?;
    let j = spec.exchange();
    let mut sorted = case.temperatures.clone();
    sorted.sort_by(f64::total_cmp);
    let mut previous_u: Option<f64> = None;
    let mut previous_c: Option<f64> = None;
    for &t in &sorted {
        let r = analysis.at(t)?;
        f.record("pair_trace", (r.rdm.trace() - 1.0).abs(), 1e-12);
        f.record("pair_positivity", (-r.rdm.min_eigenvalue()?).max(0.0), 1e-10);
        f.record(
            "element_relations",
            check_element_relations(&r.rdm, &r.correlations).max(),
            1e-10,
        );
        f.record("route_agreement", r.concurrence.max_disagreement, 1e-9);
        if r.concurrence.energy_form == Some(0.0) {
            f.record("clamp_consistency", r.concurrence.wootters, 1e-9);
        }
        f.record("bell_bound", (r.bell.measure - 2.0 * SQRT_2).max(0.0), 1e-10);
        if let Some(u) = previous_u {
            f.record("energy_nondecreasing", (u - r.thermo.u).max(0.0), 1e-10 * scale);
        }
        previous_u = Some(r.thermo.u);

        if spec.field_b == 0.0 {
            f.record("zero_magnetization", r.thermo.m.abs(), 1e-10);
            f.record("real_coherence", r.rdm.z.im.abs(), 1e-10);
        }
        if let (true, Some(j)) = (spec.is_xxx(), j) {
            let n = spec.n_sites;
            f.record("energy_nonpositive", r.thermo.u.max(0.0), 1e-10);
            let z = r.rdm.z.re;
            let wrong_sign = z.abs() > 1e-12 && z.signum() != -j.signum();
            f.record("coherence_sign", if wrong_sign { z.abs() } else { 0.0 }, 0.0);
            f.record(
                "bell_closed_form",
                (r.bell.measure - violation_xxx(r.thermo.u, j, n)?).abs(),
                1e-10,
            );
            let from_bell = concurrence_vs_violation(r.bell.measure, Regime::of_exchange(j))?;
            f.record(
                "bell_concurrence_relation",
                (from_bell - r.concurrence.wootters).abs(),
                1e-9,
            );
            let miss = r.bell.violates && r.concurrence.wootters == 0.0;
            f.record("bell_witness", if miss { r.bell.measure - 2.0 } else { 0.0 }, 0.0);
            if j < 0.0 {
                f.record("ferromagnet_separable", r.concurrence.wootters, 1e-12);
            } else {
                let c = r.concurrence.wootters;
                if let Some(prev) = previous_c {
                    f.record("concurrence_nonincreasing", (c - prev).max(0.0), 1e-12);
                }
                previous_c = Some(c);
            }
        }
    }

    let positive: Vec<f64> = sorted.iter().copied().filter(|t| *t > 0.0 && t.is_finite()).collect();
    if !positive.is_empty() {
        let picks = [positive[0], positive[positive.len() / 2], positive[positive.len() - 1]];
        for t in picks {
            let d = check_derivatives(spec, t, 1e-4)?;
            f.record("log_z_derivatives", d.u_residual.max(d.m_residual), 1e-5);
        }
    }
    Ok(())
}

pub fn verify_cases(cases: &[VerifyCase], tamper: Option<&Tamper>) -> VerifyReport {
    let findings: Vec<(String, Findings)> = cases
        .par_iter()
        .map(|c| (c.label(), check_case(c, tamper)))
        .collect();
    let mut merged: BTreeMap<&'static str, CheckOutcome> = BTreeMap::new();
    for (label, fs) in &findings {
        for &(name, residual, tolerance) in &fs.entries {
            let e = merged.entry(name).or_insert_with(|| CheckOutcome {
                name: name.to_string(),
                residual: 0.0,
                tolerance,
                cases: 0,
                passed: true,
                worst_case: String::new(),
            });
            e.cases += 1;
            if !(residual <= tolerance) {
                e.passed = false;
            }
            if residual > e.residual || (residual.is_nan() && !e.residual.is_nan()) {
                e.residual = residual;
                e.tolerance = tolerance;
                e.worst_case = label.clone();
            }
        }
    }
    VerifyReport {
        checks: merged.into_values().collect(),
    }
}
