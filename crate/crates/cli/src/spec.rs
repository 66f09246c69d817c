//! Spec files: one flat JSON object describing a protocol configuration.

use std::path::Path;

use catalyst_core::protocol::tau_from_two_g_tau_sq;
use catalyst_core::scalar::cplx;
use catalyst_core::{AtomCount, AtomKet, Engine, FockCutoff, ProtocolConfig, Vector};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EngineName {
    LabExact,
    DisplacedExact,
    #[serde(rename = "AnalyticRWA")]
    AnalyticRwa,
}

impl From<EngineName> for Engine {
    fn from(e: EngineName) -> Self {
        match e {
            EngineName::LabExact => Engine::LabExact,
            EngineName::DisplacedExact => Engine::DisplacedExact,
            EngineName::AnalyticRwa => Engine::AnalyticRwa,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    GhzFidelity,
    AtomicPurity,
    ProductFormDistance,
    MeanPhotonFinal,
    ClosedFormFidelity,
}

impl MetricName {
    pub const ALL: [MetricName; 5] = [
        MetricName::GhzFidelity,
        MetricName::AtomicPurity,
        MetricName::ProductFormDistance,
        MetricName::MeanPhotonFinal,
        MetricName::ClosedFormFidelity,
    ];

    pub fn key(self) -> &'static str {
        match self {
            MetricName::GhzFidelity => "ghz_fidelity",
            MetricName::AtomicPurity => "atomic_purity",
            MetricName::ProductFormDistance => "product_form_distance",
            MetricName::MeanPhotonFinal => "mean_photon_final",
            MetricName::ClosedFormFidelity => "closed_form_fidelity",
        }
    }
}

/// Contents of a spec file. Exactly one of `g_tau` and `two_g_tau_sq`
/// sets the interaction time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub n_atoms: usize,
    pub r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_g_tau_sq: Option<f64>,
    #[serde(default)]
    pub n_bar_th: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    pub engine: EngineName,
    /// `[re, im]` pairs, one per basis state, atom 1 most significant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Vec<MetricName>>,
}

impl RunSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Spec(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadSpec {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// `gτ` from whichever key was given.
    pub fn tau(&self) -> Result<f64, CliError> {
        match (self.g_tau, self.two_g_tau_sq) {
            (Some(t), None) => {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(CliError::Spec(format!("g_tau must be finite and >= 0, got {t}")));
                }
                Ok(t)
            }
            (None, Some(x)) => {
                if !x.is_finite() {
                    return Err(CliError::Spec(format!("two_g_tau_sq must be finite, got {x}")));
                }
                Ok(tau_from_two_g_tau_sq(x)?)
            }
            (Some(_), Some(_)) => Err(CliError::Spec("give either g_tau or two_g_tau_sq, not both".into())),
            (None, None) => Err(CliError::Spec("missing g_tau or two_g_tau_sq".into())),
        }
    }

    pub fn requested_metrics(&self) -> Vec<MetricName> {
        self.metrics.clone().unwrap_or_else(|| MetricName::ALL.to_vec())
    }

    pub fn to_config(&self) -> Result<ProtocolConfig, CliError> {
        let n_atoms = AtomCount::new(self.n_atoms)?;
        let cutoff = self.cutoff.map(FockCutoff::new).transpose()?;
        let mut config =
            ProtocolConfig::new(n_atoms, self.r, self.tau()?, self.n_bar_th, self.engine.into())?.with_cutoff(cutoff);
        if let Some(amps) = &self.initial_state {
            let v = Vector::from_iterator(amps.len(), amps.iter().map(|&[re, im]| cplx(re, im)));
            config = config.with_initial_state(AtomKet::new(v, n_atoms)?)?;
        }
        Ok(config)
    }
}
