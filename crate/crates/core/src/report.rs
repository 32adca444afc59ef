//! Everything about one ring at one temperature, from a single
//! diagonalization.

use serde::Serialize;

use crate::bell::{violation_measure, BellResult};
use crate::entanglement::{concurrence_all_routes, ConcurrenceResult};
use crate::error::Result;
use crate::model::ModelSpec;
use crate::spectral::{diagonalize_model, SpectralDecomposition};
use crate::thermo::{eigen_magnetizations, Ensemble, ThermoPoint};
use crate::twoqubit::{CorrelationSet, PairEnsemble, TwoQubitRDM};

pub struct RingAnalysis {
    spec: ModelSpec,
    sd: SpectralDecomposition,
    magnetizations: Vec<f64>,
    pair: PairEnsemble,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub thermo: ThermoPoint,
    pub rdm: TwoQubitRDM,
    pub correlations: CorrelationSet,
    pub concurrence: ConcurrenceResult,
    pub bell: BellResult,
}

impl RingAnalysis {
    pub fn new(spec: &ModelSpec, pair: (usize, usize)) -> Result<Self> {
        spec.validate()?;
        let sd = diagonalize_model(spec)?;
        Self::from_spectrum(spec, sd, pair)
    }

    pub fn from_spectrum(
        spec: &ModelSpec,
        sd: SpectralDecomposition,
        pair: (usize, usize),
    ) -> Result<Self> {
        let pair = PairEnsemble::new(&sd, pair.0, pair.1)?;
        Ok(Self {
            spec: spec.clone(),
            magnetizations: eigen_magnetizations(&sd),
            sd,
            pair,
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.sd
    }

    pub fn ensemble(&self) -> Ensemble<'_> {
        Ensemble::with_magnetizations(&self.sd, &self.magnetizations)
    }

    pub fn at(&self, temperature: f64) -> Result<PointReport> {
        let ens = self.ensemble();
        let thermo = ens.point(temperature)?;
        let rdm = self.pair.rdm(&ens.probabilities(temperature)?);
        let correlations = CorrelationSet::from_rdm(&rdm);
        let concurrence = concurrence_all_routes(&self.spec, &thermo, &rdm, &correlations)?;
        let bell = violation_measure(&rdm)?;
        Ok(PointReport {
            thermo,
            rdm,
            correlations,
            concurrence,
            bell,
        })
    }
}
