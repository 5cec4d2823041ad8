//! Parameter resolution: flags override config-file entries, which override defaults.

use std::path::{Path, PathBuf};

use tbell_core::experiment::Scheduler;
use tbell_core::quantum::Hamiltonian;

use crate::kv::KvDoc;
use crate::CliError;

pub const DEFAULT_DELTA_E: f64 = 1.0;
pub const DEFAULT_T0: f64 = 0.0;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_PAIRS: u64 = 100_000;
pub const DEFAULT_STEPS: u64 = 100;

/// One layer of optional settings (command-line flags or a config file).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub delta_e: Option<f64>,
    pub e_plus: Option<f64>,
    pub e_minus: Option<f64>,
    pub t0: Option<f64>,
    pub pairs: Option<u64>,
    pub seed: Option<u64>,
    pub scheduler: Option<String>,
    pub out: Option<PathBuf>,
    pub steps: Option<u64>,
}

const CONFIG_KEYS: [&str; 9] = [
    "delta_e",
    "e_plus",
    "e_minus",
    "t0",
    "pairs",
    "seed",
    "scheduler",
    "out",
    "steps",
];

impl Overrides {
    pub fn from_kv(doc: &KvDoc) -> Result<Self, CliError> {
        if let Some((k, _)) = doc
            .entries()
            .iter()
            .find(|(k, _)| !CONFIG_KEYS.contains(&k.as_str()))
        {
            return Err(CliError::Invalid(format!("unknown config key `{k}`")));
        }
        let bad = |e: CliError| CliError::Invalid(e.to_string());
        Ok(Self {
            delta_e: doc.parse_opt("delta_e").map_err(bad)?,
            e_plus: doc.parse_opt("e_plus").map_err(bad)?,
            e_minus: doc.parse_opt("e_minus").map_err(bad)?,
            t0: doc.parse_opt("t0").map_err(bad)?,
            pairs: doc.parse_opt("pairs").map_err(bad)?,
            seed: doc.parse_opt("seed").map_err(bad)?,
            scheduler: doc.get("scheduler").map(str::to_string),
            out: doc.get("out").map(PathBuf::from),
            steps: doc.parse_opt("steps").map_err(bad)?,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_kv(&KvDoc::parse(&text).map_err(|e| CliError::Invalid(e.to_string()))?)
    }

    fn energy_spec(&self) -> Result<Option<Hamiltonian>, CliError> {
        match (self.delta_e, self.e_plus, self.e_minus) {
            (None, None, None) => Ok(None),
            (Some(de), None, None) => Ok(Some(Hamiltonian::from_gap(de)?)),
            (None, Some(ep), Some(em)) => Ok(Some(Hamiltonian::new(ep, em)?)),
            (Some(_), _, _) => Err(CliError::Invalid(
                "give either delta_e or e_plus/e_minus, not both".into(),
            )),
            _ => Err(CliError::Invalid(
                "e_plus and e_minus must be given together".into(),
            )),
        }
    }

    /// Layers `self` over `lower`; the energy specification is taken whole from one layer.
    pub fn resolve(&self, lower: &Overrides) -> Result<Params, CliError> {
        let hamiltonian = match self.energy_spec()? {
            Some(h) => h,
            None => match lower.energy_spec()? {
                Some(h) => h,
                None => Hamiltonian::from_gap(DEFAULT_DELTA_E)?,
            },
        };
        let scheduler = self
            .scheduler
            .as_ref()
            .or(lower.scheduler.as_ref())
            .map(|s| s.parse::<Scheduler>())
            .transpose()?
            .unwrap_or_default();
        let t0 = self.t0.or(lower.t0).unwrap_or(DEFAULT_T0);
        if !t0.is_finite() {
            return Err(CliError::Invalid("t0 must be finite".into()));
        }
        Ok(Params {
            hamiltonian,
            t0,
            pairs: self.pairs.or(lower.pairs).unwrap_or(DEFAULT_PAIRS),
            seed: self.seed.or(lower.seed).unwrap_or(DEFAULT_SEED),
            scheduler,
            out: self.out.clone().or_else(|| lower.out.clone()),
            steps: self.steps.or(lower.steps).unwrap_or(DEFAULT_STEPS),
        })
    }
}

/// Fully resolved parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub hamiltonian: Hamiltonian,
    pub t0: f64,
    pub pairs: u64,
    pub seed: u64,
    pub scheduler: Scheduler,
    pub out: Option<PathBuf>,
    pub steps: u64,
}

impl Default for Params {
    fn default() -> Self {
        Overrides::default()
            .resolve(&Overrides::default())
            .expect("defaults are valid")
    }
}
