//! Frozen reference values. Closed forms were evaluated with mpmath at 30
//! digits; ring values come from an independent dense Kronecker-product
//! diagonalization in numpy.

use spinring::bell::{violation_measure, violation_xxx};
use spinring::model::ModelSpec;
use spinring::report::RingAnalysis;
use spinring::spectral::{diagonalize_model, model_eigenvalues};
use spinring::threshold::{find_threshold, u_of_n_scan};

fn close(got: f64, want: f64, tol: f64) {
    assert!((got - want).abs() <= tol, "got {got:.17e}, want {want:.17e}");
}

#[test]
fn small_ring_spectra() {
    assert_eq!(model_eigenvalues(&ModelSpec::xxx(2, 1.0)).unwrap(), vec![-6.0, 2.0, 2.0, 2.0]);
    let e3 = model_eigenvalues(&ModelSpec::xxx(3, 1.0)).unwrap();
    for (k, e) in e3.iter().enumerate() {
        close(*e, if k < 4 { -3.0 } else { 3.0 }, 1e-12);
    }
}

#[test]
fn two_site_unit_temperature() {
    let r = RingAnalysis::new(&ModelSpec::xxx(2, 1.0), (1, 2)).unwrap().at(1.0).unwrap();
    close(r.thermo.u, -5.991956991316827, 1e-12);
    close(r.thermo.log_z, 6.0 + (3.0 * (-8f64).exp()).ln_1p(), 1e-13);
    close(r.concurrence.wootters, 0.997989247829207, 1e-12);
    close(r.bell.measure, 2.824635614092181, 1e-12);
}

#[test]
fn three_site_unit_temperature() {
    let spec = ModelSpec::xxx(3, 1.0);
    let r = RingAnalysis::new(&spec, (1, 2)).unwrap().at(1.0).unwrap();
    close(r.thermo.u, -2.985164261060191, 1e-12);
    close(r.rdm.z.re, -0.1658424589477884, 1e-12);
    close(violation_xxx(r.thermo.u, 1.0, 3).unwrap(), 0.938146618645062, 1e-12);
    close(violation_measure(&r.rdm).unwrap().measure, 0.938146618645062, 1e-12);
    assert_eq!(r.concurrence.wootters, 0.0);
}

#[test]
fn two_site_threshold() {
    let spec = ModelSpec::xxx(2, 1.0);
    let r = find_threshold(&spec, &diagonalize_model(&spec).unwrap()).unwrap();
    close(r.t_c.unwrap(), 7.281913813014699, 1e-6);
}

#[test]
fn ground_state_energy_per_bond() {
    let want = [
        (2, 3.0),
        (3, 1.0),
        (4, 2.0),
        (5, 1.4944271909999165),
        (6, 1.8685170918213287),
        (7, 1.6315310039123985),
        (8, 1.8255467044685831),
    ];
    let ns: Vec<usize> = want.iter().map(|w| w.0).collect();
    for (got, (n, u)) in u_of_n_scan(&ns, 1.0, 0.0).unwrap().iter().zip(want) {
        assert_eq!(got.n, n);
        close(got.u, u, 1e-10);
    }
}

#[test]
fn thermal_concurrence_against_dense_reference() {
    // (N, J, Δ, B, T, U, C)
    let cases = [
        (4, 1.0, 1.0, 0.0, 0.5, -7.995972200932125, 0.4994965251165157),
        (6, 1.0, 0.5, 0.0, 0.5, -9.375814743365341, 0.4118497240121286),
        (6, 1.0, 1.0, 1.0, 0.5, -11.062386322743787, 0.3998263201261008),
        (5, 1.0, 0.0, 0.5, 0.3, -5.66930182746222, 0.2668639951210025),
        (4, 1.0, 0.3, 0.4, 1.0, -5.811173172404985, 0.3715330486321751),
    ];
    for (n, j, d, b, t, u, c) in cases {
        let r = RingAnalysis::new(&ModelSpec::uniform(n, j, d, b), (1, 2)).unwrap().at(t).unwrap();
        close(r.thermo.u, u, 1e-10);
        // The reference takes square roots of a non-Hermitian spectrum,
        // good to about 1e-8.
        close(r.concurrence.wootters, c, 1e-7);
    }
}
